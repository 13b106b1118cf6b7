//! Unit intervals of finite products of cyclic rational groups, and back.

use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mv::algebra::{FiniteAlgebra, Signature};
use crate::mv::morphism::Hom;
use crate::mv::points::{PointFunction, PointSet};
use crate::mv::rational::Rational01;
use crate::mv::spectrum::{iso_check, spectral_decomposition};
use crate::tower::{build_tower, Tower};

pub type Q = Ratio<i64>;

/// `(1/n₁)ℤ × … × (1/n_r)ℤ` with strong unit `(1, …, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitGroup {
    pub factors: Vec<u64>,
}

impl UnitGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("a unit group needs at least one factor".into()));
        }
        if factors.iter().any(|&n| n == 0 || n > i64::MAX as u64) {
            return Err(Error::InvalidInput("factors must be positive".into()));
        }
        Ok(UnitGroup { factors })
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn unit(&self) -> Vec<Q> {
        vec![Q::from_integer(1); self.rank()]
    }

    /// The generator `1/nᵢ` of the `i`-th factor.
    pub fn generator(&self, i: usize) -> Vec<Q> {
        let mut g = vec![Q::from_integer(0); self.rank()];
        g[i] = Q::new(1, self.factors[i] as i64);
        g
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.factors).all(|(v, &n)| n as i64 % v.denom() == 0)
    }

    /// Factors sorted ascending; two presentations are isomorphic iff these agree.
    pub fn factor_multiset(&self) -> Vec<u64> {
        let mut f = self.factors.clone();
        f.sort_unstable();
        f
    }

    fn points(&self) -> Arc<PointSet> {
        if self.rank() == 1 {
            PointSet::singleton()
        } else {
            PointSet::new((1..=self.rank()).map(|i| format!("g{i}"))).expect("distinct labels")
        }
    }
}

fn to_q(v: Rational01) -> Q {
    Q::new(v.num() as i64, v.den() as i64)
}

fn to_unit(v: Q) -> Option<Rational01> {
    if *v.numer() < 0 {
        return None;
    }
    Rational01::new(*v.numer() as u64, *v.denom() as u64).ok()
}

/// `Γ(G, u) = [0, u]`: every tuple with `0 ≤ xᵢ ≤ 1` and `nᵢxᵢ ∈ ℤ`, on `r` points.
pub fn gamma(g: &UnitGroup) -> FiniteAlgebra {
    let points = g.points();
    let mut carrier: Vec<Vec<Rational01>> = vec![Vec::new()];
    for &n in &g.factors {
        carrier = carrier
            .into_iter()
            .flat_map(|prefix| {
                (0..=n).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(Rational01::ratio(k, n));
                    v
                })
            })
            .collect();
    }
    let carrier: Vec<PointFunction> =
        carrier.into_iter().map(|v| PointFunction::new(points.clone(), v).expect("matching length")).collect();
    let gens: Vec<usize> = (0..g.rank()).collect();
    let alg = FiniteAlgebra::from_carrier(&points, &carrier, Signature::Mv).expect("a unit interval is closed");
    let gen_idx = gens
        .iter()
        .map(|&i| {
            let v: Vec<Rational01> = g.generator(i).into_iter().map(|q| to_unit(q).expect("in [0,1]")).collect();
            alg.index_of(&v).expect("generator in the interval")
        })
        .collect();
    alg.with_generators(gen_idx).expect("valid generator indices")
}

/// A positive group map fixed by the images of the factor generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    pub source: UnitGroup,
    pub target: UnitGroup,
    /// `images[i] = h(1/nᵢ · eᵢ)`.
    pub images: Vec<Vec<Q>>,
}

impl GroupMap {
    /// Checks that the images live in the target, are nonnegative and send `u` to `u`.
    pub fn new(source: UnitGroup, target: UnitGroup, images: Vec<Vec<Q>>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::InvalidInput(format!("{} images for {} generators", images.len(), source.rank())));
        }
        for (i, img) in images.iter().enumerate() {
            if !target.contains(img) {
                return Err(Error::NotInCarrier(format!("image of generator {} is outside the target group", i + 1)));
            }
            if img.iter().any(|v| *v.numer() < 0) {
                return Err(Error::NotWellDefined(format!("image of generator {} is negative", i + 1)));
            }
        }
        let map = GroupMap { source, target, images };
        let u = map.apply(&map.source.unit());
        if u != map.target.unit() {
            let shown: Vec<String> = u.iter().map(|v| v.to_string()).collect();
            return Err(Error::NotUnitPreserving(format!("h(u) = ({})", shown.join(", "))));
        }
        Ok(map)
    }

    pub fn identity(g: &UnitGroup) -> Self {
        let images = (0..g.rank()).map(|i| g.generator(i)).collect();
        GroupMap { source: g.clone(), target: g.clone(), images }
    }

    /// `h(x) = Σ nᵢxᵢ · h(gᵢ)`.
    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::from_integer(0); self.target.rank()];
        for ((xi, &n), img) in x.iter().zip(&self.source.factors).zip(&self.images) {
            let k = xi * Q::from_integer(n as i64);
            for (o, v) in out.iter_mut().zip(img) {
                *o += k * v;
            }
        }
        out
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupMap) -> Result<GroupMap> {
        if next.source != self.target {
            return Err(Error::DomainMismatch("composite of maps with unequal middle groups".into()));
        }
        let images = self.images.iter().map(|img| next.apply(img)).collect();
        GroupMap::new(self.source.clone(), next.target.clone(), images)
    }

    /// Injective iff the image matrix has full row rank over ℚ.
    pub fn is_injective(&self) -> bool {
        rank(self.images.clone()) == self.source.rank()
    }
}

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != Q::from_integer(0)) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c];
        for i in 0..rows.len() {
            if i != r && rows[i][c] != Q::from_integer(0) {
                let f = rows[i][c] / pivot;
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= f * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// `Γ(h)`, the restriction of `h` to the unit intervals.
pub fn gamma_hom(h: &GroupMap) -> Result<Hom> {
    let src = Arc::new(gamma(&h.source));
    let tgt = Arc::new(gamma(&h.target));
    let mut table = Vec::with_capacity(src.len());
    for i in 0..src.len() {
        let x: Vec<Q> = src.values(i).iter().map(|&v| to_q(v)).collect();
        let y: Option<Vec<Rational01>> = h.apply(&x).into_iter().map(to_unit).collect();
        let idx = y.and_then(|y| tgt.index_of(&y));
        table.push(idx.ok_or_else(|| Error::NotInCarrier(format!("h{} leaves [0, u]", src.describe(i))))?);
    }
    Hom::new(src, tgt, table)
}

/// `Λ(A)` with the isomorphism `Γ(Λ(A)) → A`.
#[derive(Clone, Debug)]
pub struct LambdaResult {
    pub group: UnitGroup,
    pub iso: Hom,
}

pub fn lambda(a: &FiniteAlgebra) -> Result<LambdaResult> {
    let spectrum = spectral_decomposition(a)?;
    let group = UnitGroup::new(spectrum.orders())?;
    let target = Arc::new(a.mv_reduct());
    let source = Arc::new(gamma(&group));
    let iso = iso_check(&source, &target)
        .ok_or_else(|| Error::EmbeddingFailure("no isomorphism onto the product of chains".into()))?;
    Ok(LambdaResult { group, iso })
}

/// One transported level `T^n(G, u) = Λ(T^n(Γ(G, u)))`.
#[derive(Clone, Debug)]
pub struct FuLevel {
    pub group: UnitGroup,
    /// `Γ(T^n(G, u)) → T^n(A)`.
    pub iso: Hom,
}

#[derive(Clone, Debug)]
pub struct FuRing {
    pub base: UnitGroup,
    pub tower: Tower,
    pub levels: Vec<FuLevel>,
    /// `embeddings[n-1]` carries level `n` into level `n + 1`.
    pub embeddings: Vec<GroupMap>,
}

impl FuRing {
    pub fn factor_sequences(&self) -> Vec<Vec<u64>> {
        self.levels.iter().map(|l| l.group.factors.clone()).collect()
    }

    /// Product of unit-interval elements `x ∈ T^n(G)`, `y ∈ T^m(G)`, landing in level `n + m`.
    pub fn product(&self, n: usize, x: &[Q], m: usize, y: &[Q]) -> Result<Vec<Q>> {
        let xi = self.interval_index(n, x)?;
        let yi = self.interval_index(m, y)?;
        let a = self.levels[n - 1].iso.apply(xi);
        let b = self.levels[m - 1].iso.apply(yi);
        let ab = self.tower.gamma(n, a, m, b)?;
        let back = self.levels[n + m - 1].iso.inverse().expect("isomorphism").apply(ab);
        Ok(self.levels[n + m - 1].iso.source().values(back).iter().map(|&v| to_q(v)).collect())
    }

    fn interval_index(&self, n: usize, x: &[Q]) -> Result<usize> {
        let lv = self.levels.get(n - 1).ok_or(Error::LevelOverflow { requested: n, max: self.levels.len() })?;
        let v: Option<Vec<Rational01>> = x.iter().map(|&q| to_unit(q)).collect();
        v.and_then(|v| lv.iso.source().index_of(&v))
            .ok_or_else(|| Error::NotInCarrier("element outside the unit interval".into()))
    }
}

/// Transports the tower over `Γ(G, u)` back to groups, level by level.
///
/// Each level is checked to satisfy `Γ(T^n(G, u)) ≅ T^n(Γ(G, u))`, and each transported
/// `ε` is checked to be a unit-preserving injective group map whose restriction is the
/// tower embedding.
pub fn tensor_fu_ring(g: &UnitGroup, n_max: usize, cap: usize) -> Result<FuRing> {
    let a = Arc::new(gamma(g));
    let tower = build_tower(&a, n_max, cap)?;
    let levels: Vec<FuLevel> = tower
        .levels()
        .iter()
        .map(|lv| lambda(lv).map(|l| FuLevel { group: l.group, iso: l.iso }))
        .collect::<Result<_>>()?;
    let mut embeddings = Vec::with_capacity(n_max.saturating_sub(1));
    for n in 1..n_max {
        let (lo, hi) = (&levels[n - 1], &levels[n]);
        let back = hi.iso.inverse().expect("isomorphism");
        let transported: Vec<usize> =
            (0..lo.iso.source().len()).map(|x| back.apply(tower.eps(n, n + 1, lo.iso.apply(x)))).collect();
        let images = (0..lo.group.rank())
            .map(|i| {
                let gi: Vec<Rational01> =
                    lo.group.generator(i).into_iter().map(|q| to_unit(q).expect("in [0,1]")).collect();
                let idx = lo.iso.source().index_of(&gi).expect("generator in the interval");
                hi.iso.source().values(transported[idx]).iter().map(|&v| to_q(v)).collect()
            })
            .collect();
        let map = GroupMap::new(lo.group.clone(), hi.group.clone(), images)?;
        if !map.is_injective() {
            return Err(Error::EmbeddingFailure(format!("transported ε_{{{n},{}}} is not injective", n + 1)));
        }
        if gamma_hom(&map)?.table() != transported.as_slice() {
            return Err(Error::EmbeddingFailure(format!("transported ε_{{{n},{}}} is not additive", n + 1)));
        }
        embeddings.push(map);
    }
    Ok(FuRing { base: g.clone(), tower, levels, embeddings })
}
