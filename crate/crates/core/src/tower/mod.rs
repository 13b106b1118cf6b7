//! The tower `T^1(A) ⊆ T^2(A) ⊆ …` of iterated tensor powers and its direct-limit product.
//!
//! The limit is truncated at a maximum level `N`; elements are pairs `(n, f)` with `f`
//! a function on `X^n`, identified when their paddings to a common level agree.

mod audit;
mod lift;

use std::sync::Arc;

pub use audit::{check_eps_gamma_identities, product_audit, riesz_audit, TowerReport};
pub use lift::{
    adjunction_shadow, functor_on_hom, lift_hom, pmv_fixed_point_check, AdjunctionShadow, FixedPointVerdict,
    LevelwiseHom, Lift,
};

use crate::error::{Error, Result};
use crate::mv::algebra::FiniteAlgebra;
use crate::mv::points::{PointFunction, PointSet};
use crate::mv::rational::Rational01;
use crate::mv::spectrum::has_infinitesimal;
use crate::tensor::tensor;

/// An element `(level, value)` of the truncated direct limit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TowerElement {
    pub level: usize,
    pub value: PointFunction,
}

#[derive(Clone, Debug)]
pub struct Tower {
    base: Arc<FiniteAlgebra>,
    levels: Vec<Arc<FiniteAlgebra>>,
    /// `eps[n-1][m-n]` maps level `n` indices to level `m` indices.
    eps: Vec<Vec<Vec<usize>>>,
}

/// Builds `T^1(A) = A`, `T^n(A) = T^{n-1}(A) ⊗ A` up to level `n_max`.
///
/// Each level is the MV reduct of its tensor power. The padding maps `ε_{n,m}` are
/// tabulated and checked to land in the next carriers, to be injective, and to compose.
pub fn build_tower(base: &Arc<FiniteAlgebra>, n_max: usize, cap: usize) -> Result<Tower> {
    if n_max == 0 {
        return Err(Error::InvalidInput("a tower needs at least one level".into()));
    }
    let reduct = Arc::new(base.mv_reduct());
    let mut levels = vec![reduct.clone()];
    for _ in 1..n_max {
        let prev = levels.last().expect("nonempty");
        levels.push(tensor(prev, &reduct, cap)?.algebra);
    }
    let mut eps = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let src = &levels[n - 1];
        let mut row = Vec::with_capacity(n_max - n + 1);
        for m in n..=n_max {
            let dst = &levels[m - 1];
            let mut table = Vec::with_capacity(src.len());
            for f in src.elements() {
                let padded = f.pad_right(dst.points());
                match dst.index_of_function(&padded) {
                    Some(t) => table.push(t),
                    None => {
                        return Err(Error::EmbeddingFailure(format!(
                            "ε_{{{n},{m}}} sends {} outside T^{m}",
                            src.describe(table.len())
                        )))
                    }
                }
            }
            let mut seen = vec![false; dst.len()];
            if table.iter().any(|&t| std::mem::replace(&mut seen[t], true)) {
                return Err(Error::EmbeddingFailure(format!("ε_{{{n},{m}}} is not injective")));
            }
            row.push(table);
        }
        eps.push(row);
    }
    let tower = Tower { base: base.clone(), levels, eps };
    for n in 1..=n_max {
        for m in n..=n_max {
            for k in m..=n_max {
                for x in 0..tower.levels[n - 1].len() {
                    if tower.eps(m, k, tower.eps(n, m, x)) != tower.eps(n, k, x) {
                        return Err(Error::EmbeddingFailure(format!("ε_{{{m},{k}}}∘ε_{{{n},{m}}} ≠ ε_{{{n},{k}}}")));
                    }
                }
            }
        }
    }
    Ok(tower)
}

impl Tower {
    pub fn base(&self) -> &Arc<FiniteAlgebra> {
        &self.base
    }

    pub fn max_level(&self) -> usize {
        self.levels.len()
    }

    /// `T^n(A)` for `1 ≤ n ≤ max_level`.
    pub fn level(&self, n: usize) -> &Arc<FiniteAlgebra> {
        &self.levels[n - 1]
    }

    pub fn levels(&self) -> &[Arc<FiniteAlgebra>] {
        &self.levels
    }

    pub fn points(&self, n: usize) -> &Arc<PointSet> {
        self.levels[n - 1].points()
    }

    /// `ε_{n,m}` on indices.
    pub fn eps(&self, n: usize, m: usize, x: usize) -> usize {
        assert!(n <= m, "ε_{{n,m}} needs n ≤ m");
        self.eps[n - 1][m - n][x]
    }

    pub fn eps_table(&self, n: usize, m: usize) -> &[usize] {
        &self.eps[n - 1][m - n]
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_level() {
            return Err(Error::LevelOverflow { requested: n, max: self.max_level() });
        }
        Ok(())
    }

    pub fn element(&self, n: usize, x: usize) -> TowerElement {
        TowerElement { level: n, value: self.level(n).element(x) }
    }

    pub fn index_of(&self, x: &TowerElement) -> Result<usize> {
        self.check_level(x.level)?;
        self.level(x.level)
            .index_of_function(&x.value)
            .ok_or_else(|| Error::NotInCarrier(format!("value at level {}", x.level)))
    }

    /// The top element `1_n`.
    pub fn one(&self, n: usize) -> TowerElement {
        self.element(n, self.level(n).one())
    }

    pub fn zero(&self, n: usize) -> TowerElement {
        self.element(n, self.level(n).zero())
    }

    /// `ε_{n,m}` on values.
    pub fn promote(&self, x: &TowerElement, m: usize) -> Result<TowerElement> {
        self.check_level(m)?;
        if m < x.level {
            return Err(Error::InvalidInput(format!("cannot lower level {} to {m}", x.level)));
        }
        Ok(TowerElement { level: m, value: x.value.pad_right(self.points(m)) })
    }

    /// `γ_{n,m}(a, b)(x, y) = a(x)·b(y)` on indices.
    pub fn gamma(&self, n: usize, a: usize, m: usize, b: usize) -> Result<usize> {
        if n + m > self.max_level() {
            return Err(Error::LevelOverflow { requested: n + m, max: self.max_level() });
        }
        let (va, vb) = (self.level(n).values(a), self.level(m).values(b));
        let mut v = Vec::with_capacity(va.len() * vb.len());
        for x in va {
            for y in vb {
                v.push(x.mul(*y));
            }
        }
        self.level(n + m).index_of(&v).ok_or_else(|| Error::NotInCarrier(format!("γ_{{{n},{m}}} leaves T^{}", n + m)))
    }

    /// `γ_{n,m}` on values.
    pub fn gamma_map(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        let k = self.gamma(a.level, i, b.level, j)?;
        Ok(self.element(a.level + b.level, k))
    }

    /// The limit product `(a, n)·(b, m) = (γ_{n,m}(a, b), n + m)`.
    pub fn product(&self, x: &TowerElement, y: &TowerElement) -> Result<TowerElement> {
        self.gamma_map(x, y)
    }

    /// `x ∼ y`: the paddings to the larger level coincide.
    pub fn equivalent(&self, x: &TowerElement, y: &TowerElement) -> bool {
        let k = x.level.max(y.level);
        match (self.promote(x, k), self.promote(y, k)) {
            (Ok(a), Ok(b)) => a.value == b.value,
            _ => false,
        }
    }

    /// `x ∼ y` after some permutation of the coordinates of `X^k`.
    pub fn equivalent_up_to_symmetry(&self, x: &TowerElement, y: &TowerElement) -> bool {
        let k = x.level.max(y.level);
        match (self.promote(x, k), self.promote(y, k)) {
            (Ok(a), Ok(b)) => symmetric_form(&a.value) == symmetric_form(&b.value),
            _ => false,
        }
    }

    /// Index-level `∼` between `(n, x)` and `(m, y)`.
    pub(crate) fn equiv_idx(&self, n: usize, x: usize, m: usize, y: usize) -> bool {
        let k = n.max(m);
        self.eps(n, k, x) == self.eps(m, k, y)
    }

    pub(crate) fn sym_equiv_idx(&self, n: usize, x: usize, m: usize, y: usize) -> bool {
        let k = n.max(m);
        let lv = self.level(k);
        let (a, b) = (lv.element(self.eps(n, k, x)), lv.element(self.eps(m, k, y)));
        symmetric_form(&a) == symmetric_form(&b)
    }

    /// The least-level representative of the class of `x`.
    pub fn canonical(&self, x: &TowerElement) -> TowerElement {
        for l in 1..x.level {
            let target = self.points(l);
            let chunk = x.value.values().len() / target.len();
            let vals = x.value.values();
            let constant = vals.chunks(chunk).all(|c| c.iter().all(|v| *v == c[0]));
            if !constant {
                continue;
            }
            let reduced: Vec<Rational01> = vals.chunks(chunk).map(|c| c[0]).collect();
            let f = PointFunction::new(target.clone(), reduced).expect("width matches");
            if self.level(l).contains(&f) {
                return TowerElement { level: l, value: f };
            }
        }
        x.clone()
    }

    /// `n·x ≤ x*` witnesses, level by level.
    pub fn infinitesimals(&self) -> Vec<Option<usize>> {
        self.levels.iter().map(|l| has_infinitesimal(&**l)).collect()
    }

    /// `α·x` for a base with rational scalars.
    ///
    /// The multiple is looked up at the element's own level first and then at higher
    /// levels, since a finite level need not be closed under the scalar.
    pub fn scalar(&self, alpha: Rational01, x: &TowerElement) -> Result<TowerElement> {
        let d = self.base.scalar_denominator();
        if !self.base.signature().has_scalars() || !d.is_multiple_of(alpha.den()) {
            return Err(Error::ScalarUnsupported { alpha: alpha.to_string(), den: d });
        }
        let scaled = x.value.scale(alpha);
        for k in x.level..=self.max_level() {
            let v = scaled.pad_right(self.points(k));
            if self.level(k).contains(&v) {
                return Ok(TowerElement { level: k, value: v });
            }
        }
        Err(Error::ScalarUnsupported { alpha: alpha.to_string(), den: d })
    }

    /// Level sizes, for reports.
    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }
}

/// Every permutation of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn rec(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(k, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(k, &mut cur, &mut used, &mut out);
    out
}

/// The lexicographically least value vector among all coordinate permutations.
fn symmetric_form(f: &PointFunction) -> Vec<Rational01> {
    let k = f.domain().arity();
    permutations(k).into_iter().map(|p| f.permute_coords(&p).into_values()).min().expect("k ≥ 1")
}
