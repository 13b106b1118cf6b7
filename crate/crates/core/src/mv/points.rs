//! Finite point sets, their cartesian powers, and `[0,1]`-valued functions on them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mv::rational::{MvOp, Rational01};

/// Separator between coordinates in product labels.
pub const TUPLE_SEP: char = '|';

/// A labeled finite set, optionally presented as a flattened cartesian product.
///
/// Products are always flattened: `(X × Y) × Z` and `X × (Y × Z)` yield the same
/// point set with labels `x|y|z` in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    labels: Vec<String>,
    factors: Vec<Arc<PointSet>>,
}

impl PointSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidInput("a point set needs at least one point".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.contains(TUPLE_SEP) {
                return Err(Error::InvalidInput(format!("label `{l}` contains `{TUPLE_SEP}`")));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidInput(format!("duplicate label `{l}`")));
            }
        }
        Ok(Arc::new(PointSet { labels, factors: Vec::new() }))
    }

    /// A set of tuple points such as a fiber product; labels may contain the separator.
    pub fn tuples(labels: Vec<String>) -> Result<Arc<Self>> {
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidInput(format!("duplicate label `{l}`")));
            }
        }
        if labels.is_empty() {
            return Err(Error::InvalidInput("a point set needs at least one point".into()));
        }
        Ok(Arc::new(PointSet { labels, factors: Vec::new() }))
    }

    /// The one-point set used by chains.
    pub fn singleton() -> Arc<Self> {
        Self::new(["p"]).expect("valid label")
    }

    /// Flattened cartesian product.
    pub fn product(a: &Arc<PointSet>, b: &Arc<PointSet>) -> Arc<PointSet> {
        let mut factors = a.atoms();
        factors.extend(b.atoms());
        Self::from_factors(factors)
    }

    /// `X^n` for `n >= 1`.
    pub fn power(x: &Arc<PointSet>, n: usize) -> Arc<PointSet> {
        assert!(n >= 1, "power needs n >= 1");
        let atoms = x.atoms();
        let factors: Vec<_> = (0..n).flat_map(|_| atoms.iter().cloned()).collect();
        Self::from_factors(factors)
    }

    /// Product of the given atomic factors in order.
    pub fn from_factors(factors: Vec<Arc<PointSet>>) -> Arc<PointSet> {
        assert!(!factors.is_empty());
        if factors.len() == 1 {
            return factors[0].clone();
        }
        let mut labels = vec![String::new()];
        for (k, f) in factors.iter().enumerate() {
            let mut next = Vec::with_capacity(labels.len() * f.len());
            for prefix in &labels {
                for l in &f.labels {
                    if k == 0 {
                        next.push(l.clone());
                    } else {
                        next.push(format!("{prefix}{TUPLE_SEP}{l}"));
                    }
                }
            }
            labels = next;
        }
        Arc::new(PointSet { labels, factors })
    }

    /// The atomic factors; an atomic set is its own single factor.
    pub fn atoms(self: &Arc<Self>) -> Vec<Arc<PointSet>> {
        if self.factors.is_empty() {
            vec![self.clone()]
        } else {
            self.factors.clone()
        }
    }

    pub fn arity(&self) -> usize {
        self.factors.len().max(1)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn radices(&self) -> Vec<usize> {
        if self.factors.is_empty() {
            vec![self.labels.len()]
        } else {
            self.factors.iter().map(|f| f.len()).collect()
        }
    }

    /// Mixed-radix coordinates of a point (first factor most significant).
    pub fn coords(&self, mut idx: usize) -> Vec<usize> {
        let radices = self.radices();
        let mut out = vec![0; radices.len()];
        for (slot, r) in out.iter_mut().zip(&radices).rev() {
            *slot = idx % r;
            idx /= r;
        }
        out
    }

    pub fn index_of_coords(&self, coords: &[usize]) -> usize {
        let radices = self.radices();
        debug_assert_eq!(coords.len(), radices.len());
        coords.iter().zip(&radices).fold(0, |acc, (c, r)| acc * r + c)
    }
}

/// A total map from a point set to `[0,1] ∩ ℚ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointFunction {
    domain: Arc<PointSet>,
    values: Vec<Rational01>,
}

impl PointFunction {
    pub fn new(domain: Arc<PointSet>, values: Vec<Rational01>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::InvalidInput(format!("{} values for {} points", values.len(), domain.len())));
        }
        Ok(PointFunction { domain, values })
    }

    pub fn constant(domain: &Arc<PointSet>, v: Rational01) -> Self {
        PointFunction { domain: domain.clone(), values: vec![v; domain.len()] }
    }

    pub fn domain(&self) -> &Arc<PointSet> {
        &self.domain
    }

    pub fn values(&self) -> &[Rational01] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational01> {
        self.values
    }

    pub fn at(&self, point: usize) -> Rational01 {
        self.values[point]
    }

    pub fn neg(&self) -> Self {
        PointFunction { domain: self.domain.clone(), values: self.values.iter().map(|v| v.neg()).collect() }
    }

    /// Scalar multiple `α·f`.
    pub fn scale(&self, alpha: Rational01) -> Self {
        PointFunction { domain: self.domain.clone(), values: self.values.iter().map(|v| alpha.mul(*v)).collect() }
    }

    /// Pointwise `f ≤ g`.
    pub fn le(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// `(x, y) ↦ f(x)·g(y)` on the flattened product of the two domains.
    pub fn outer_product(&self, other: &Self) -> Self {
        let domain = PointSet::product(&self.domain, &other.domain);
        let mut values = Vec::with_capacity(domain.len());
        for a in &self.values {
            for b in &other.values {
                values.push(a.mul(*b));
            }
        }
        PointFunction { domain, values }
    }

    /// Reorders coordinates: position `i` of the result carries source coordinate `perm[i]`.
    pub fn permute_coords(&self, perm: &[usize]) -> Self {
        let atoms = self.domain.atoms();
        assert_eq!(perm.len(), atoms.len(), "permutation length must match arity");
        let domain = PointSet::from_factors(perm.iter().map(|&i| atoms[i].clone()).collect());
        let mut values = vec![Rational01::ZERO; domain.len()];
        let mut src = vec![0; perm.len()];
        for (idx, slot) in values.iter_mut().enumerate() {
            let c = domain.coords(idx);
            for (i, &p) in perm.iter().enumerate() {
                src[p] = c[i];
            }
            *slot = self.values[self.domain.index_of_coords(&src)];
        }
        PointFunction { domain, values }
    }

    /// Lifts `f` on `X^n` to `X^m` by ignoring the trailing `m - n` coordinates.
    pub fn pad_right(&self, target: &Arc<PointSet>) -> Self {
        let extra = target.len() / self.domain.len();
        debug_assert_eq!(extra * self.domain.len(), target.len());
        let values = self.values.iter().flat_map(|v| std::iter::repeat_n(*v, extra)).collect();
        PointFunction { domain: target.clone(), values }
    }
}

/// Applies a binary operation label by label.
pub fn pointwise(op: MvOp, f: &PointFunction, g: &PointFunction) -> Result<PointFunction> {
    if f.domain != g.domain {
        return Err(Error::DomainMismatch(format!("{} points vs {} points", f.domain.len(), g.domain.len())));
    }
    let values = f.values.iter().zip(&g.values).map(|(a, b)| op.apply(*a, *b)).collect();
    Ok(PointFunction { domain: f.domain.clone(), values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational01 {
        s.parse().unwrap()
    }

    fn two_points() -> Arc<PointSet> {
        PointSet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn pointwise_examples() {
        let x = two_points();
        let half = PointFunction::constant(&x, r("1/2"));
        let s = pointwise(MvOp::Oplus, &half, &half).unwrap();
        assert_eq!(s, PointFunction::constant(&x, Rational01::ONE));

        let f = PointFunction::new(x.clone(), vec![r("1/2"), r("1")]).unwrap();
        let g = PointFunction::new(x.clone(), vec![r("1"), r("1/3")]).unwrap();
        let p = pointwise(MvOp::Prod, &f, &g).unwrap();
        assert_eq!(p.values(), &[r("1/2"), r("1/3")]);

        let one = PointFunction::constant(&x, Rational01::ONE);
        assert_eq!(pointwise(MvOp::Meet, &f, &one).unwrap(), f);
    }

    #[test]
    fn domain_mismatch_is_reported() {
        let f = PointFunction::constant(&two_points(), Rational01::ONE);
        let g = PointFunction::constant(&PointSet::singleton(), Rational01::ONE);
        assert!(matches!(pointwise(MvOp::Oplus, &f, &g), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn products_flatten_and_label_row_major() {
        let x = two_points();
        let y = PointSet::new(["u", "v", "w"]).unwrap();
        let xy = PointSet::product(&x, &y);
        assert_eq!(xy.labels()[0], "a|u");
        assert_eq!(xy.labels()[4], "b|v");
        assert_eq!(xy.coords(4), vec![1, 1]);
        let left = PointSet::product(&xy, &x);
        let right = PointSet::product(&x, &PointSet::product(&y, &x));
        assert_eq!(left, right);
        assert_eq!(left.arity(), 3);
        assert_eq!(PointSet::power(&x, 3).len(), 8);
    }

    #[test]
    fn labels_are_validated() {
        assert!(PointSet::new(Vec::<String>::new()).is_err());
        assert!(PointSet::new(["a", "a"]).is_err());
        assert!(PointSet::new(["a|b"]).is_err());
    }

    #[test]
    fn permute_swaps_blocks() {
        let x = two_points();
        let f = PointFunction::new(x.clone(), vec![r("1/2"), r("1")]).unwrap();
        let g = PointFunction::new(x.clone(), vec![r("1/3"), r("0")]).unwrap();
        let fg = f.outer_product(&g);
        let gf = g.outer_product(&f);
        assert_eq!(fg.permute_coords(&[1, 0]), gf);
        let padded = f.pad_right(&PointSet::power(&x, 2));
        assert_eq!(padded.values(), &[r("1/2"), r("1/2"), r("1"), r("1")]);
    }
}
