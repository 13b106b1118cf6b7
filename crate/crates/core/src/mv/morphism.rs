//! Homomorphisms, linear maps and bimorphisms between finite carriers.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mv::algebra::FiniteAlgebra;
use crate::mv::ops::Operations;

/// A total map between carriers, stored as an index table.
///
/// Values of this type have passed [`Hom::new`], so they preserve `0`, `1`, `⊕`, `*`,
/// the product when both sides carry one, and every scalar multiple defined in the
/// source when both sides carry scalars.
#[derive(Clone, Debug)]
pub struct Hom {
    source: Arc<FiniteAlgebra>,
    target: Arc<FiniteAlgebra>,
    table: Vec<usize>,
}

impl PartialEq for Hom {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && *self.source == *other.source && *self.target == *other.target
    }
}

impl Hom {
    pub fn new(source: Arc<FiniteAlgebra>, target: Arc<FiniteAlgebra>, table: Vec<usize>) -> Result<Hom> {
        if table.len() != source.len() {
            return Err(Error::InvalidInput(format!(
                "table has {} entries for {} source elements",
                table.len(),
                source.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&t| t >= target.len()) {
            return Err(Error::InvalidInput(format!("table entry {bad} is outside the target")));
        }
        let hom = Hom { source, target, table };
        hom.verify()?;
        Ok(hom)
    }

    /// Builds a map from a function on value vectors.
    pub fn from_values(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        f: impl Fn(&crate::mv::points::PointFunction) -> crate::mv::points::PointFunction,
    ) -> Result<Hom> {
        let mut table = Vec::with_capacity(source.len());
        for e in source.elements() {
            let img = f(&e);
            match target.index_of_function(&img) {
                Some(t) => table.push(t),
                None => return Err(Error::NotInCarrier(format!("image {} of {}", fmt_fn(&img), fmt_fn(&e)))),
            }
        }
        Hom::new(source, target, table)
    }

    pub fn identity(alg: Arc<FiniteAlgebra>) -> Hom {
        let table = (0..alg.len()).collect();
        Hom { source: alg.clone(), target: alg, table }
    }

    pub fn source(&self) -> &Arc<FiniteAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteAlgebra> {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.table.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &t in &self.table {
            seen[t] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.len() && self.is_injective()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Hom) -> Result<Hom> {
        if !next.source.same_carrier(&self.target) {
            return Err(Error::DomainMismatch("composite of maps with unequal middle algebras".into()));
        }
        let table = self.table.iter().map(|&t| next.table[t]).collect();
        Ok(Hom { source: self.source.clone(), target: next.target.clone(), table })
    }

    /// Inverse of a bijective hom.
    pub fn inverse(&self) -> Option<Hom> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.table.len()];
        for (x, &t) in self.table.iter().enumerate() {
            table[t] = x;
        }
        Some(Hom { source: self.target.clone(), target: self.source.clone(), table })
    }

    fn verify(&self) -> Result<()> {
        if let Some(v) = first_violation(&*self.source, &*self.target, &self.table) {
            return Err(Error::NotWellDefined(v));
        }
        Ok(())
    }
}

fn fmt_fn(f: &crate::mv::points::PointFunction) -> String {
    crate::mv::algebra::fmt_values(f.values())
}

/// The first operation instance a table fails to preserve, rendered as text.
pub fn first_violation<A, B>(src: &A, tgt: &B, h: &[usize]) -> Option<String>
where
    A: Operations + ?Sized,
    B: Operations + ?Sized,
{
    let d = |x: usize| src.describe(x);
    let e = |y: usize| tgt.describe(y);
    if h[src.zero()] != tgt.zero() {
        return Some(format!("h(0) = {} is not 0", e(h[src.zero()])));
    }
    if h[src.one()] != tgt.one() {
        return Some(format!("h(1) = {} is not 1", e(h[src.one()])));
    }
    let n = src.size();
    let with_prod = src.has_product() && tgt.has_product();
    let scalars = if tgt.scalars().is_empty() { Vec::new() } else { src.scalars() };
    for x in 0..n {
        for y in 0..=x {
            let s = h[src.oplus(x, y)];
            let t = tgt.oplus(h[x], h[y]);
            if s != t {
                return Some(format!("h({} ⊕ {}) = {} but h({}) ⊕ h({}) = {}", d(x), d(y), e(s), d(x), d(y), e(t)));
            }
        }
    }
    for x in 0..n {
        let nx = h[src.neg(x)];
        if nx != tgt.neg(h[x]) {
            return Some(format!("h({}*) = {} but h({})* = {}", d(x), e(nx), d(x), e(tgt.neg(h[x]))));
        }
    }
    for x in 0..n {
        if with_prod {
            for y in 0..=x {
                let (Some(p), Some(q)) = (src.prod(x, y), tgt.prod(h[x], h[y])) else { continue };
                if h[p] != q {
                    return Some(format!(
                        "h({} · {}) = {} but h({}) · h({}) = {}",
                        d(x),
                        d(y),
                        e(h[p]),
                        d(x),
                        d(y),
                        e(q)
                    ));
                }
            }
        }
        for &alpha in &scalars {
            if let Some(ax) = src.scalar(alpha, x) {
                match tgt.scalar(alpha, h[x]) {
                    Some(t) if t == h[ax] => {}
                    Some(t) => {
                        return Some(format!("h({alpha}·{}) = {} but {alpha}·h({}) = {}", d(x), e(h[ax]), d(x), e(t)));
                    }
                    None => return Some(format!("{alpha}·h({}) is undefined in the target", d(x))),
                }
            }
        }
    }
    None
}

enum Step {
    Neg(usize),
    Oplus(usize, usize),
    Prod(usize, usize),
}

/// Extends a generator assignment along closure derivations and verifies the result.
///
/// `gmap` pairs source indices with target indices. Every element of the source must
/// be reachable from the listed sources (and `0`) by `⊕`, `*` and, when both sides
/// carry products, `·`.
pub fn extend_hom(source: &Arc<FiniteAlgebra>, target: &Arc<FiniteAlgebra>, gmap: &[(usize, usize)]) -> Result<Hom> {
    let n = source.len();
    let mut table: Vec<Option<usize>> = vec![None; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let assign = |table: &mut Vec<Option<usize>>, order: &mut Vec<usize>, x: usize, y: usize| -> Result<()> {
        match table[x] {
            None => {
                table[x] = Some(y);
                order.push(x);
                Ok(())
            }
            Some(prev) if prev == y => Ok(()),
            Some(prev) => Err(Error::NotWellDefined(format!(
                "{} is sent to both {} and {}",
                source.describe(x),
                target.describe(prev),
                target.describe(y)
            ))),
        }
    };
    assign(&mut table, &mut order, source.zero(), target.zero())?;
    for &(g, t) in gmap {
        if g >= n || t >= target.len() {
            return Err(Error::InvalidInput("generator map index out of range".into()));
        }
        assign(&mut table, &mut order, g, t)?;
    }
    let with_prod = source.signature().has_product() && target.signature().has_product();
    let mut i = 0;
    while i < order.len() && order.len() < n {
        let x = order[i];
        let mut steps = vec![Step::Neg(x)];
        for &y in &order[..=i] {
            steps.push(Step::Oplus(x, y));
            if with_prod {
                steps.push(Step::Prod(x, y));
            }
        }
        for step in steps {
            let (src, img) = match step {
                Step::Neg(a) => (source.neg(a), target.neg(table[a].unwrap())),
                Step::Oplus(a, b) => (source.oplus(a, b), target.oplus(table[a].unwrap(), table[b].unwrap())),
                Step::Prod(a, b) => (
                    source.prod(a, b).expect("product signature"),
                    target.prod(table[a].unwrap(), table[b].unwrap()).expect("product signature"),
                ),
            };
            if table[src].is_none() {
                table[src] = Some(img);
                order.push(src);
            }
        }
        i += 1;
    }
    if let Some(x) = table.iter().position(Option::is_none) {
        return Err(Error::NotWellDefined(format!(
            "{} is not reachable from the assigned generators",
            source.describe(x)
        )));
    }
    Hom::new(source.clone(), target.clone(), table.into_iter().map(Option::unwrap).collect())
}

/// Extends a map given on the recorded generators of `source`.
pub fn extend_from_generators(
    source: &Arc<FiniteAlgebra>,
    target: &Arc<FiniteAlgebra>,
    images: &[usize],
) -> Result<Hom> {
    if images.len() != source.generators().len() {
        return Err(Error::InvalidInput(format!(
            "{} images for {} generators",
            images.len(),
            source.generators().len()
        )));
    }
    let gmap: Vec<(usize, usize)> = source.generators().iter().copied().zip(images.iter().copied()).collect();
    extend_hom(source, target, &gmap)
}

/// Outcome of a linearity scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearVerdict {
    pub linear: bool,
    /// First pair `(x, y)` with `x ≤ y*` and `ω(x ⊕ y) ≠ ω(x) ⊕ ω(y)`.
    pub counterexample: Option<(usize, usize)>,
    pub witness: Option<String>,
}

/// Checks `ω(x ⊕ y) = ω(x) ⊕ ω(y)` for every pair with `x ≤ y*`.
pub fn check_linear<A, B>(omega: &[usize], a: &A, b: &B) -> LinearVerdict
where
    A: Operations + ?Sized,
    B: Operations + ?Sized,
{
    match linear_failure(|x| omega[x], a, b) {
        None => LinearVerdict { linear: true, counterexample: None, witness: None },
        Some((x, y)) => LinearVerdict {
            linear: false,
            counterexample: Some((x, y)),
            witness: Some(format!(
                "ω({} ⊕ {}) = {} but ω({}) ⊕ ω({}) = {}",
                a.describe(x),
                a.describe(y),
                b.describe(omega[a.oplus(x, y)]),
                a.describe(x),
                a.describe(y),
                b.describe(b.oplus(omega[x], omega[y]))
            )),
        },
    }
}

fn linear_failure<A, B>(w: impl Fn(usize) -> usize, a: &A, b: &B) -> Option<(usize, usize)>
where
    A: Operations + ?Sized,
    B: Operations + ?Sized,
{
    for x in 0..a.size() {
        for y in 0..a.size() {
            if a.leq(x, a.neg(y)) && w(a.oplus(x, y)) != b.oplus(w(x), w(y)) {
                return Some((x, y));
            }
        }
    }
    None
}

fn lattice_failure<A, B>(w: impl Fn(usize) -> usize, a: &A, b: &B, join: bool) -> Option<(usize, usize)>
where
    A: Operations + ?Sized,
    B: Operations + ?Sized,
{
    for x in 0..a.size() {
        for y in 0..x {
            let ok = if join { w(a.join(x, y)) == b.join(w(x), w(y)) } else { w(a.meet(x, y)) == b.meet(w(x), w(y)) };
            if !ok {
                return Some((x, y));
            }
        }
    }
    None
}

/// A two-argument map `left × right → target`, stored row-major.
#[derive(Clone, Debug)]
pub struct Bimorphism {
    left: Arc<FiniteAlgebra>,
    right: Arc<FiniteAlgebra>,
    target: Arc<FiniteAlgebra>,
    table: Vec<usize>,
}

impl Bimorphism {
    pub fn new(
        left: Arc<FiniteAlgebra>,
        right: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        table: Vec<usize>,
    ) -> Result<Bimorphism> {
        if table.len() != left.len() * right.len() {
            return Err(Error::InvalidInput("bimorphism table has the wrong size".into()));
        }
        if table.iter().any(|&t| t >= target.len()) {
            return Err(Error::InvalidInput("bimorphism table entry outside the target".into()));
        }
        Ok(Bimorphism { left, right, target, table })
    }

    /// Tabulates `f` on all pairs of value vectors.
    pub fn from_fn(
        left: Arc<FiniteAlgebra>,
        right: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        f: impl Fn(
            &[crate::mv::rational::Rational01],
            &[crate::mv::rational::Rational01],
        ) -> Vec<crate::mv::rational::Rational01>,
    ) -> Result<Bimorphism> {
        let mut table = Vec::with_capacity(left.len() * right.len());
        for a in 0..left.len() {
            for b in 0..right.len() {
                let v = f(left.values(a), right.values(b));
                match target.index_of(&v) {
                    Some(t) => table.push(t),
                    None => {
                        return Err(Error::NotInCarrier(format!(
                            "β({}, {}) = {}",
                            left.describe(a),
                            right.describe(b),
                            crate::mv::algebra::fmt_values(&v)
                        )))
                    }
                }
            }
        }
        Bimorphism::new(left, right, target, table)
    }

    pub fn left(&self) -> &Arc<FiniteAlgebra> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteAlgebra> {
        &self.right
    }

    pub fn target(&self) -> &Arc<FiniteAlgebra> {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, a: usize, b: usize) -> usize {
        self.table[a * self.right.len() + b]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionFailure {
    /// `"β(a,−)"` or `"β(−,b)"`.
    pub section: &'static str,
    pub fixed: String,
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BimorphismVerdict {
    pub holds: bool,
    pub linear: Option<SectionFailure>,
    pub join: Option<SectionFailure>,
    pub meet: Option<SectionFailure>,
}

/// Scans every section `β(a,−)` and `β(−,b)` for linearity and lattice preservation.
pub fn check_bimorphism(beta: &Bimorphism) -> BimorphismVerdict {
    let (l, r, t) = (&*beta.left, &*beta.right, &*beta.target);
    let mut linear = None;
    let mut join = None;
    let mut meet = None;
    let describe = |section: &'static str, fixed: String, src: &FiniteAlgebra, (x, y): (usize, usize)| SectionFailure {
        section,
        fixed,
        x: src.describe(x),
        y: src.describe(y),
    };
    for a in 0..l.len() {
        let w = |y: usize| beta.apply(a, y);
        if linear.is_none() {
            linear = linear_failure(w, r, t).map(|p| describe("β(a,−)", l.describe(a), r, p));
        }
        if join.is_none() {
            join = lattice_failure(w, r, t, true).map(|p| describe("β(a,−)", l.describe(a), r, p));
        }
        if meet.is_none() {
            meet = lattice_failure(w, r, t, false).map(|p| describe("β(a,−)", l.describe(a), r, p));
        }
    }
    for b in 0..r.len() {
        let w = |x: usize| beta.apply(x, b);
        if linear.is_none() {
            linear = linear_failure(w, l, t).map(|p| describe("β(−,b)", r.describe(b), l, p));
        }
        if join.is_none() {
            join = lattice_failure(w, l, t, true).map(|p| describe("β(−,b)", r.describe(b), l, p));
        }
        if meet.is_none() {
            meet = lattice_failure(w, l, t, false).map(|p| describe("β(−,b)", r.describe(b), l, p));
        }
    }
    BimorphismVerdict { holds: linear.is_none() && join.is_none() && meet.is_none(), linear, join, meet }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mv::algebra::{chain, Signature};
    use crate::mv::rational::Rational01;

    fn r(s: &str) -> Rational01 {
        s.parse().unwrap()
    }

    fn idx(a: &FiniteAlgebra, v: &str) -> usize {
        a.index_of(&[r(v)]).unwrap()
    }

    #[test]
    fn extend_inclusions() {
        let l2 = Arc::new(chain(2));
        let l4 = Arc::new(chain(4));
        let h = extend_from_generators(&l2, &l4, &[idx(&l4, "1/2")]).unwrap();
        assert_eq!(h.table(), &[0, 2, 4]);
        assert!(h.is_injective());

        let l3 = Arc::new(chain(3));
        let l6 = Arc::new(chain(6));
        let h = extend_from_generators(&l3, &l6, &[idx(&l6, "1/3")]).unwrap();
        assert_eq!(h.table(), &[0, 2, 4, 6]);
    }

    #[test]
    fn extend_rejects_a_broken_relation() {
        let l2 = Arc::new(chain(2));
        let l4 = Arc::new(chain(4));
        let err = extend_from_generators(&l2, &l4, &[idx(&l4, "1/4")]).unwrap_err();
        let Error::NotWellDefined(msg) = err else { panic!("{err:?}") };
        assert!(msg.contains('⊕'), "{msg}");
    }

    #[test]
    fn composition_and_inverse() {
        let l2 = Arc::new(chain(2));
        let l4 = Arc::new(chain(4));
        let l8 = Arc::new(chain(8));
        let f = extend_from_generators(&l2, &l4, &[2]).unwrap();
        let g = extend_from_generators(&l4, &l8, &[2]).unwrap();
        assert_eq!(f.then(&g).unwrap().table(), &[0, 4, 8]);
        let id = Hom::identity(l4.clone());
        assert_eq!(id.inverse().unwrap(), id);
        assert!(f.inverse().is_none());
    }

    #[test]
    fn linearity_scans() {
        let l2 = chain(2);
        let id: Vec<usize> = (0..3).collect();
        assert!(check_linear(&id, &l2, &l2).linear);

        // The constant-one map satisfies the equation on every summable pair.
        assert!(check_linear(&[2, 2, 2], &l2, &l2).linear);

        let l4 = chain(4);
        let doubling: Vec<usize> = (0..5).map(|k| (2 * k).min(4)).collect();
        assert!(check_linear(&doubling, &l4, &l4).linear);

        let square: Vec<usize> = (0..5).map(|k| l4.odot(k, k)).collect();
        let v = check_linear(&square, &l4, &l4);
        assert!(!v.linear);
        let (x, y) = v.counterexample.unwrap();
        assert!(l4.leq(x, l4.neg(y)));
    }

    #[test]
    fn bimorphism_scans() {
        let l2 = Arc::new(chain(2));
        let l4 = Arc::new(chain(4));
        let prod = Bimorphism::from_fn(l2.clone(), l2.clone(), l4.clone(), |a, b| vec![a[0].mul(b[0])]).unwrap();
        assert!(check_bimorphism(&prod).holds);

        let zero = Bimorphism::new(l2.clone(), l2.clone(), l4.clone(), vec![0; 9]).unwrap();
        assert!(check_bimorphism(&zero).holds);

        let sum = Bimorphism::from_fn(l2.clone(), l2.clone(), l2.clone(), |a, b| vec![a[0].oplus(b[0])]).unwrap();
        let v = check_bimorphism(&sum);
        assert!(!v.holds);
        assert!(v.linear.is_some());
        assert!(v.meet.is_none() && v.join.is_none());
    }

    #[test]
    fn homs_check_products_when_both_sides_have_them() {
        let b = Arc::new(crate::mv::algebra::boolean());
        let b2 = Arc::new(chain(1).with_signature(Signature::Pmv).unwrap());
        assert!(Hom::new(b.clone(), b2, vec![0, 1]).is_ok());
        assert!(Hom::new(b.clone(), b.clone(), vec![1, 1]).is_err());
    }
}
