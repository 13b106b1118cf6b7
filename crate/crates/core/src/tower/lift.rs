//! Maps out of and between towers: lifts into product algebras, functoriality, the
//! fixed-point property of product-closed carriers, and the scalar/tower comparison.

use std::sync::Arc;

use serde::Serialize;

use super::{build_tower, Tower, TowerElement, TowerReport};
use crate::error::{Error, Result};
use crate::mv::algebra::{fmt_values, scalar_extension, FiniteAlgebra};
use crate::mv::axioms::Audit;
use crate::mv::morphism::{extend_hom, Hom};
use crate::mv::rational::Rational01;
use crate::mv::spectrum::{iso_check, spectral_decomposition};

/// The generator assignment `t ⊗ a ↦ img(t, a)` from `T^{n-1} × T^1` into level `n`.
fn level_generators(
    tw: &Tower,
    n: usize,
    mut img: impl FnMut(usize, usize) -> Result<usize>,
) -> Result<Vec<(usize, usize)>> {
    let (prev, first) = (tw.level(n - 1).len(), tw.level(1).len());
    let mut gmap = Vec::with_capacity(prev * first);
    for t in 0..prev {
        for a in 0..first {
            gmap.push((tw.gamma(n - 1, t, 1, a)?, img(t, a)?));
        }
    }
    Ok(gmap)
}

/// `f^♯` realized level by level: `λ_n(a₁ ⊗ … ⊗ a_n) = f(a₁)·…·f(a_n)`.
#[derive(Clone, Debug)]
pub struct Lift {
    pub levels: Vec<Hom>,
}

impl Lift {
    /// `f^♯(x)` as an index into the product algebra.
    pub fn apply(&self, tw: &Tower, x: &TowerElement) -> Result<usize> {
        Ok(self.levels[x.level - 1].apply(tw.index_of(x)?))
    }

    /// Checks the triangle `f^♯ ∘ ε₁ = f`, independence of the representative, and
    /// multiplicativity up to the truncation level.
    pub fn audit(&self, tw: &Tower, f: &Hom) -> TowerReport {
        let n_max = tw.max_level();
        let p = self.levels[0].target();
        let mut triangle = Audit::new("f♯ ∘ ε₁ = f");
        for a in 0..tw.level(1).len() {
            triangle.record(self.levels[0].apply(a) == f.apply(a), || tw.level(1).describe(a));
        }
        let mut classes = Audit::new("f♯ is constant on ∼-classes");
        for n in 1..=n_max {
            for m in n..=n_max {
                for x in 0..tw.level(n).len() {
                    let ok = self.levels[m - 1].apply(tw.eps(n, m, x)) == self.levels[n - 1].apply(x);
                    classes.record(ok, || format!("{} at levels {n}, {m}", tw.level(n).describe(x)));
                }
            }
        }
        let mut mult = Audit::new("f♯(x·y) = f♯(x)·f♯(y)");
        for n in 1..n_max {
            for m in 1..=n_max - n {
                for x in 0..tw.level(n).len() {
                    for y in 0..tw.level(m).len() {
                        let xy = tw.gamma(n, x, m, y).expect("within the tower");
                        let lhs = self.levels[n + m - 1].apply(xy);
                        let rhs = p.prod(self.levels[n - 1].apply(x), self.levels[m - 1].apply(y));
                        mult.record(Some(lhs) == rhs, || {
                            format!("x={}, y={}", tw.level(n).describe(x), tw.level(m).describe(y))
                        });
                    }
                }
            }
        }
        let mut homs = Audit::new("every λ_n preserves 0, 1, ⊕ and *");
        for h in &self.levels {
            // Construction went through `Hom::new`, which verifies these.
            homs.record(h.source().len() == h.table().len(), String::new);
        }
        TowerReport {
            max_level: n_max,
            results: [triangle, classes, mult, homs].into_iter().map(Audit::finish).collect(),
        }
    }
}

/// Lifts an MV-hom `f: A → P` into a product algebra `P` to the tower over `A`.
pub fn lift_hom(tw: &Tower, p: &Arc<FiniteAlgebra>, f: &Hom) -> Result<Lift> {
    if !p.signature().has_product() {
        return Err(Error::SignatureViolation(format!("lift target has signature {}", p.signature())));
    }
    if !f.source().same_values(tw.level(1)) || !f.target().same_values(p) {
        return Err(Error::DomainMismatch("f must run from the tower base into the target".into()));
    }
    let first = Hom::new(tw.level(1).clone(), p.clone(), f.table().to_vec())?;
    let mut levels = vec![first];
    for n in 2..=tw.max_level() {
        let prev = &levels[n - 2];
        let gmap = level_generators(tw, n, |t, a| {
            p.prod(prev.apply(t), f.apply(a)).ok_or_else(|| Error::SignatureViolation("no product".into()))
        })?;
        levels.push(extend_hom(tw.level(n), p, &gmap)?);
    }
    Ok(Lift { levels })
}

/// `h^♯: T(A) → T(B)` as one hom per level.
#[derive(Clone, Debug)]
pub struct LevelwiseHom {
    pub levels: Vec<Hom>,
}

impl LevelwiseHom {
    /// `h^♯ ∘ ε_{n,m} = ε_{n,m} ∘ h^♯` at every pair of levels, in particular `n = 1`.
    pub fn natural(&self, tw_a: &Tower, tw_b: &Tower) -> bool {
        let n_max = tw_a.max_level();
        (1..=n_max).all(|n| {
            (n..=n_max).all(|m| {
                (0..tw_a.level(n).len())
                    .all(|x| self.levels[m - 1].apply(tw_a.eps(n, m, x)) == tw_b.eps(n, m, self.levels[n - 1].apply(x)))
            })
        })
    }

    /// `h^♯ ∘ ε_{1,A} = ε_{1,B} ∘ h` pointwise, for every level.
    pub fn triangle(&self, tw_a: &Tower, tw_b: &Tower, h: &Hom) -> bool {
        (1..=tw_a.max_level()).all(|n| {
            (0..tw_a.level(1).len()).all(|a| self.levels[n - 1].apply(tw_a.eps(1, n, a)) == tw_b.eps(1, n, h.apply(a)))
        })
    }

    /// Level-wise `next ∘ self`.
    pub fn then(&self, next: &LevelwiseHom) -> Result<LevelwiseHom> {
        let levels = self.levels.iter().zip(&next.levels).map(|(f, g)| f.then(g)).collect::<Result<_>>()?;
        Ok(LevelwiseHom { levels })
    }

    pub fn same_tables(&self, other: &LevelwiseHom) -> bool {
        self.levels.len() == other.levels.len()
            && self.levels.iter().zip(&other.levels).all(|(f, g)| f.table() == g.table())
    }

    pub fn is_identity(&self) -> bool {
        self.levels.iter().all(|h| h.table().iter().enumerate().all(|(i, &t)| i == t))
    }
}

/// Applies a hom `h: A → B` coordinatewise on every tower level.
pub fn functor_on_hom(tw_a: &Tower, tw_b: &Tower, h: &Hom) -> Result<LevelwiseHom> {
    if tw_a.max_level() != tw_b.max_level() {
        return Err(Error::InvalidInput("towers must share the truncation level".into()));
    }
    if !h.source().same_values(tw_a.level(1)) || !h.target().same_values(tw_b.level(1)) {
        return Err(Error::DomainMismatch("h must run between the two tower bases".into()));
    }
    let first = Hom::new(tw_a.level(1).clone(), tw_b.level(1).clone(), h.table().to_vec())?;
    let mut levels = vec![first];
    for n in 2..=tw_a.max_level() {
        let prev = &levels[n - 2];
        let gmap = level_generators(tw_a, n, |t, a| tw_b.gamma(n - 1, prev.apply(t), 1, h.apply(a)))?;
        levels.push(extend_hom(tw_a.level(n), tw_b.level(n), &gmap)?);
    }
    Ok(LevelwiseHom { levels })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointVerdict {
    pub holds: bool,
    pub product_closed: bool,
    /// A product escaping the carrier, or the first failed diagonal check.
    pub witness: Option<String>,
    pub level_sizes: Vec<usize>,
    /// Whether `ε_{1,n}` is onto `T^n(P)` with strict function equality.
    pub eps_surjective: Vec<bool>,
}

/// Checks that a product-closed carrier `P` absorbs its own tower.
///
/// For every level, restriction to the diagonal `δ_n(f)(x) = f(x, …, x)` must land in
/// `P`, be an MV-hom, split `ε_{1,n}` (`δ_n ∘ ε_{1,n} = id`), and turn the tower product
/// into the product of `P`. Strict surjectivity of `ε_{1,n}` is reported alongside; it
/// holds only when every level collapses onto `P`.
pub fn pmv_fixed_point_check(p: &Arc<FiniteAlgebra>, n_max: usize, cap: usize) -> Result<FixedPointVerdict> {
    for i in 0..p.len() {
        for j in 0..=i {
            if p.pointwise_product(i, j).is_none() {
                let v: Vec<Rational01> = p.values(i).iter().zip(p.values(j)).map(|(x, y)| x.mul(*y)).collect();
                return Ok(FixedPointVerdict {
                    holds: false,
                    product_closed: false,
                    witness: Some(format!(
                        "{} · {} = {} is not in the carrier",
                        p.describe(i),
                        p.describe(j),
                        fmt_values(&v)
                    )),
                    level_sizes: Vec::new(),
                    eps_surjective: Vec::new(),
                });
            }
        }
    }
    let p_prod = Arc::new(p.with_signature(crate::mv::algebra::Signature::Pmv)?);
    let tw = build_tower(p, n_max, cap)?;
    let x = p.points();
    let mut witness = None;
    let mut deltas: Vec<Vec<usize>> = Vec::with_capacity(n_max);
    'levels: for n in 1..=n_max {
        let lv = tw.level(n);
        let diag: Vec<usize> = (0..x.len())
            .map(|i| {
                let c = x.coords(i);
                let coords: Vec<usize> = (0..n).flat_map(|_| c.iter().copied()).collect();
                lv.points().index_of_coords(&coords)
            })
            .collect();
        let mut table = Vec::with_capacity(lv.len());
        for f in 0..lv.len() {
            let v: Vec<Rational01> = diag.iter().map(|&d| lv.values(f)[d]).collect();
            match p.index_of(&v) {
                Some(t) => table.push(t),
                None => {
                    witness = Some(format!("δ_{n}({}) leaves P", lv.describe(f)));
                    break 'levels;
                }
            }
        }
        if let Err(e) = Hom::new(lv.clone(), p_prod.clone(), table.clone()) {
            witness = Some(format!("δ_{n} is not a hom: {e}"));
            break;
        }
        if let Some(a) = (0..p.len()).find(|&a| table[tw.eps(1, n, a)] != a) {
            witness = Some(format!("δ_{n}(ε_{{1,{n}}}({})) ≠ itself", p.describe(a)));
            break;
        }
        deltas.push(table);
    }
    if witness.is_none() {
        'mult: for n in 1..n_max {
            for m in 1..=n_max - n {
                for a in 0..tw.level(n).len() {
                    for b in 0..tw.level(m).len() {
                        let ab = tw.gamma(n, a, m, b)?;
                        let lhs = deltas[n + m - 1][ab];
                        let rhs = p_prod.prod(deltas[n - 1][a], deltas[m - 1][b]);
                        if Some(lhs) != rhs {
                            witness = Some(format!(
                                "δ(γ({}, {})) is not the product of the diagonals",
                                tw.level(n).describe(a),
                                tw.level(m).describe(b)
                            ));
                            break 'mult;
                        }
                    }
                }
            }
        }
    }
    Ok(FixedPointVerdict {
        holds: witness.is_none(),
        product_closed: true,
        witness,
        level_sizes: tw.sizes(),
        eps_surjective: tw.levels().iter().map(|l| l.len() == p.len()).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionShadow {
    pub d: u64,
    pub level: usize,
    /// Chain orders of `T^N(Ł_d) ⊗ T^N(A) = Ł_{d^N} ⊗ T^N(A)`.
    pub scalar_side: Vec<u64>,
    /// Chain orders of `T^N(Ł_d ⊗ A)`.
    pub tower_side: Vec<u64>,
    pub isomorphic: bool,
    /// Whether `Ł_d ⊗ T^N(A)` alone already matches the tower side.
    pub literal_isomorphic: bool,
}

/// Compares scalar extension after the tower with the tower of the scalar extension.
///
/// At level `N` the scalar side is `T^N(Ł_d) ⊗ T^N(A)`, which is `Ł_{d^N} ⊗ T^N(A)`,
/// realized on `X^N`; the tower side is `T^N(Ł_d ⊗ A)`.
pub fn adjunction_shadow(a: &Arc<FiniteAlgebra>, d: u64, n: usize, cap: usize) -> Result<AdjunctionShadow> {
    let dn = u32::try_from(n).ok().and_then(|e| d.checked_pow(e)).ok_or(Error::Overflow)?;
    let tw = build_tower(a, n, cap)?;
    let top = tw.level(n);
    let scalar_side = Arc::new(scalar_extension(top, dn, cap)?.mv_reduct());
    let literal = Arc::new(scalar_extension(top, d, cap)?.mv_reduct());
    let base_ext = Arc::new(scalar_extension(a, d, cap)?.mv_reduct());
    let tower_side = build_tower(&base_ext, n, cap)?.level(n).clone();
    Ok(AdjunctionShadow {
        d,
        level: n,
        scalar_side: spectral_decomposition(&scalar_side)?.orders(),
        tower_side: spectral_decomposition(&tower_side)?.orders(),
        isomorphic: iso_check(&scalar_side, &tower_side).is_some(),
        literal_isomorphic: iso_check(&literal, &tower_side).is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mv::algebra::{boolean, chain, generate_subalgebra, Signature};
    use crate::mv::morphism::extend_from_generators;
    use crate::mv::points::{PointFunction, PointSet};

    fn boolean_on(labels: &[&str]) -> Arc<FiniteAlgebra> {
        let pts = PointSet::new(labels.iter().copied()).unwrap();
        let atoms: Vec<PointFunction> = (0..labels.len())
            .map(|i| {
                let v = (0..labels.len()).map(|j| if i == j { Rational01::ONE } else { Rational01::ZERO }).collect();
                PointFunction::new(pts.clone(), v).unwrap()
            })
            .collect();
        Arc::new(generate_subalgebra(&pts, &atoms, Signature::Pmv, 1000).unwrap())
    }

    #[test]
    fn lift_of_a_boolean_unit() {
        let b = Arc::new(boolean());
        let tw = build_tower(&b, 3, 1000).unwrap();
        let p = boolean_on(&["u", "v"]);
        let f = crate::mv::morphism::extend_hom(&b, &p, &[]).unwrap();
        let lift = lift_hom(&tw, &p, &f).unwrap();
        assert!(lift.audit(&tw, &f).all_passed());
        assert_eq!(lift.apply(&tw, &tw.one(3)).unwrap(), p.one());
    }

    #[test]
    fn lift_along_a_point_map() {
        let a = boolean_on(&["a", "b"]);
        let p = boolean_on(&["u", "v", "w"]);
        // Pull back along u ↦ a, v ↦ b, w ↦ b.
        let f = Hom::from_values(a.clone(), p.clone(), |g| {
            PointFunction::new(p.points().clone(), vec![g.at(0), g.at(1), g.at(1)]).unwrap()
        })
        .unwrap();
        let tw = build_tower(&a, 2, 1000).unwrap();
        let lift = lift_hom(&tw, &p, &f).unwrap();
        let rep = lift.audit(&tw, &f);
        assert!(rep.all_passed(), "{rep:?}");
    }

    #[test]
    fn functoriality_on_chain_inclusions() {
        let (l2, l4, l8) = (Arc::new(chain(2)), Arc::new(chain(4)), Arc::new(chain(8)));
        let (t2, t4, t8) = (
            build_tower(&l2, 3, 1000).unwrap(),
            build_tower(&l4, 3, 1000).unwrap(),
            build_tower(&l8, 3, 1000).unwrap(),
        );
        let h = extend_from_generators(&l2, &l4, &[2]).unwrap();
        let g = extend_from_generators(&l4, &l8, &[2]).unwrap();
        let hs = functor_on_hom(&t2, &t4, &h).unwrap();
        let gs = functor_on_hom(&t4, &t8, &g).unwrap();
        assert!(hs.triangle(&t2, &t4, &h) && hs.natural(&t2, &t4));
        let gh = functor_on_hom(&t2, &t8, &h.then(&g).unwrap()).unwrap();
        assert!(gh.same_tables(&hs.then(&gs).unwrap()));
        let id = functor_on_hom(&t2, &t2, &Hom::identity(l2.clone())).unwrap();
        assert!(id.is_identity());
        // Ł_{2^n} sits in Ł_{4^n} as k/2^n ↦ k·2^n/4^n.
        assert_eq!(hs.levels[2].table()[1], 8);
    }

    #[test]
    fn fixed_points() {
        let v = pmv_fixed_point_check(&Arc::new(boolean()), 3, 1000).unwrap();
        assert!(v.holds && v.eps_surjective.iter().all(|s| *s));

        let v = pmv_fixed_point_check(&Arc::new(chain(2)), 3, 1000).unwrap();
        assert!(!v.holds && !v.product_closed);
        assert!(v.witness.unwrap().contains("1/4"));

        let v = pmv_fixed_point_check(&boolean_on(&["a", "b"]), 3, 1000).unwrap();
        assert!(v.holds, "{v:?}");
        assert_eq!(v.eps_surjective, vec![true, false, false]);
    }

    #[test]
    fn scalar_and_tower_commute_at_level_two() {
        let s = adjunction_shadow(&Arc::new(chain(2)), 2, 2, 10_000).unwrap();
        assert!(s.isomorphic);
        assert_eq!(s.tower_side, vec![16]);
        assert!(!s.literal_isomorphic);
    }
}
