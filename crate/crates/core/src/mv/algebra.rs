//! Finite functional carriers and subalgebra generation.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mv::closure;
use crate::mv::points::{PointFunction, PointSet};
use crate::mv::rational::Rational01;

/// Default bound on carrier size.
pub const DEFAULT_CAP: usize = 20_000;

/// The structure classes an algebra is closed under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Signature {
    Mv,
    Pmv,
    RieszQ,
    Fmv,
}

impl Signature {
    pub fn has_product(self) -> bool {
        matches!(self, Signature::Pmv | Signature::Fmv)
    }

    pub fn has_scalars(self) -> bool {
        matches!(self, Signature::RieszQ | Signature::Fmv)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Signature::Mv => "MV",
            Signature::Pmv => "PMV",
            Signature::RieszQ => "RieszQ",
            Signature::Fmv => "FMV",
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "MV" => Ok(Signature::Mv),
            "PMV" => Ok(Signature::Pmv),
            "RieszQ" => Ok(Signature::RieszQ),
            "FMV" => Ok(Signature::Fmv),
            other => Err(Error::InvalidInput(format!("unknown signature `{other}`"))),
        }
    }
}

/// A finite set of `[0,1]`-valued functions on a shared point set, closed under the
/// operations of its signature.
///
/// The carrier is kept sorted lexicographically by value vector, so element indices
/// are reproducible. Scalars (for `RieszQ` and `FMV`) act partially: `α·x` is defined
/// when it lands back in the carrier, for `α` with denominator dividing
/// `scalar_denominator`.
///
/// An algebra built by [`interval_algebra`] carries a `top` element `a` and uses the
/// interval operations `x ⊕_a y = (x ⊕ y) ∧ a`, `x^{*a} = a - x`.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    points: Arc<PointSet>,
    signature: Signature,
    scalar_den: u64,
    elements: Vec<Box<[Rational01]>>,
    index: HashMap<Box<[Rational01]>, usize>,
    generators: Vec<usize>,
    top: Option<usize>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
            && self.signature == other.signature
            && self.scalar_den == other.scalar_den
            && self.elements == other.elements
            && self.top_values() == other.top_values()
    }
}

impl Eq for FiniteAlgebra {}

/// The least carrier containing `gens ∪ {0,1}` closed under the signature's operations.
pub fn generate_subalgebra(
    points: &Arc<PointSet>,
    gens: &[PointFunction],
    sig: Signature,
    cap: usize,
) -> Result<FiniteAlgebra> {
    for g in gens {
        if g.domain() != points {
            return Err(Error::DomainMismatch("generator lives on another point set".into()));
        }
    }
    let seeds: Vec<Vec<Rational01>> = gens.iter().map(|g| g.values().to_vec()).collect();
    let found = closure::close(points.len(), &seeds, sig.has_product(), cap)?;
    let alg = FiniteAlgebra::assemble(points.clone(), sig, found, None);
    let generators = dedup_indices(gens.iter().map(|g| alg.index[g.values()]));
    Ok(FiniteAlgebra { generators, ..alg })
}

fn dedup_indices(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for i in it {
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

/// The chain `Ł_n = {0, 1/n, …, 1}` on one point, generated by `1/n`.
pub fn chain(n: u64) -> FiniteAlgebra {
    assert!(n >= 1, "chains start at Ł_1");
    let points = PointSet::singleton();
    let elements = (0..=n).map(|k| vec![Rational01::ratio(k, n)]).collect();
    let alg = FiniteAlgebra::assemble(points, Signature::Mv, elements, None);
    let g = alg.index[&[Rational01::ratio(1, n)][..]];
    FiniteAlgebra { generators: vec![g], ..alg }
}

/// The two-element algebra `{0, 1}` on one point; closed under products.
pub fn boolean() -> FiniteAlgebra {
    chain(1).with_signature(Signature::Pmv).expect("{0,1} is closed under products")
}

/// `[0, a] = {x ≤ a}` with `x ⊕_a y = (x ⊕ y) ∧ a` and `x^{*a} = x^* ⊙ a`.
pub fn interval_algebra(alg: &FiniteAlgebra, a: &PointFunction) -> Result<FiniteAlgebra> {
    if alg.top.is_some() {
        return Err(Error::InvalidInput("nested interval algebras are not supported".into()));
    }
    let Some(_) = alg.index_of(a.values()) else {
        return Err(Error::NotInCarrier(fmt_values(a.values())));
    };
    if a.values().iter().all(|v| v.is_one()) {
        return Ok(FiniteAlgebra { signature: Signature::Mv, scalar_den: 1, ..alg.clone() });
    }
    let elements: Vec<Vec<Rational01>> =
        alg.elements.iter().filter(|e| e.iter().zip(a.values()).all(|(x, y)| x <= y)).map(|e| e.to_vec()).collect();
    let top_vals = a.values().to_vec();
    let mut out = FiniteAlgebra::assemble(alg.points.clone(), Signature::Mv, elements, None);
    let top = out.index[&top_vals[..]];
    out.top = Some(top);
    out.generators = (0..out.len()).collect();
    Ok(out)
}

/// `Ł_d ⊗ A` realized on the points of `A` (the chain factor has a single point).
///
/// Generated by the carrier of `A` together with `(1/d)·a` for every `a`; the result
/// carries the scalar denominator `d`, and products too when `A` has them.
pub fn scalar_extension(alg: &FiniteAlgebra, d: u64, cap: usize) -> Result<FiniteAlgebra> {
    if d == 0 {
        return Err(Error::InvalidInput("scalar denominator must be positive".into()));
    }
    if alg.is_interval() {
        return Err(Error::InvalidInput("scalar extension expects a functional carrier".into()));
    }
    let step = Rational01::ratio(1, d);
    let mut gens: Vec<PointFunction> = alg.elements().collect();
    gens.extend(alg.elements().map(|e| e.scale(step)));
    let sig = if alg.signature.has_product() { Signature::Fmv } else { Signature::RieszQ };
    let mut out = generate_subalgebra(&alg.points, &gens, sig, cap)?;
    out.scalar_den = d;
    Ok(out)
}

pub(crate) fn fmt_values(values: &[Rational01]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl FiniteAlgebra {
    pub(crate) fn assemble(
        points: Arc<PointSet>,
        signature: Signature,
        mut elements: Vec<Vec<Rational01>>,
        top: Option<usize>,
    ) -> Self {
        elements.sort();
        elements.dedup();
        let elements: Vec<Box<[Rational01]>> = elements.into_iter().map(Vec::into_boxed_slice).collect();
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        FiniteAlgebra { points, signature, scalar_den: 1, elements, index, generators: Vec::new(), top }
    }

    /// Builds an algebra from an explicit carrier, checking closure.
    ///
    /// Every element is recorded as a generator.
    pub fn from_carrier(points: &Arc<PointSet>, carrier: &[PointFunction], sig: Signature) -> Result<FiniteAlgebra> {
        for e in carrier {
            if e.domain() != points {
                return Err(Error::DomainMismatch("carrier element lives on another point set".into()));
            }
        }
        let elements = carrier.iter().map(|e| e.values().to_vec()).collect();
        let mut alg = FiniteAlgebra::assemble(points.clone(), sig, elements, None);
        alg.generators = (0..alg.len()).collect();
        alg.check_closed()?;
        Ok(alg)
    }

    fn check_closed(&self) -> Result<()> {
        let w = self.points.len();
        for c in [Rational01::ZERO, Rational01::ONE] {
            if self.index_of(&vec![c; w]).is_none() {
                return Err(Error::NotWellDefined(format!("carrier misses the constant {c}")));
            }
        }
        let mut buf = vec![Rational01::ZERO; w];
        for i in 0..self.len() {
            let a = &self.elements[i];
            for (s, v) in buf.iter_mut().zip(a.iter()) {
                *s = v.neg();
            }
            if self.index_of(&buf).is_none() {
                return Err(Error::NotWellDefined(format!("{}* leaves the carrier", fmt_values(a))));
            }
            for j in 0..=i {
                let b = &self.elements[j];
                for k in 0..w {
                    buf[k] = a[k].oplus(b[k]);
                }
                if self.index_of(&buf).is_none() {
                    return Err(Error::NotWellDefined(format!(
                        "{} ⊕ {} leaves the carrier",
                        fmt_values(a),
                        fmt_values(b)
                    )));
                }
                if self.signature.has_product() {
                    for k in 0..w {
                        buf[k] = a[k].mul(b[k]);
                    }
                    if self.index_of(&buf).is_none() {
                        return Err(Error::NotWellDefined(format!(
                            "{} · {} leaves the carrier",
                            fmt_values(a),
                            fmt_values(b)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Same carrier under another signature; checks the extra closure conditions.
    pub fn with_signature(&self, sig: Signature) -> Result<FiniteAlgebra> {
        if self.top.is_some() && sig != Signature::Mv {
            return Err(Error::SignatureViolation("interval algebras carry the MV signature only".into()));
        }
        let out = FiniteAlgebra { signature: sig, ..self.clone() };
        if sig.has_product() && !self.signature.has_product() {
            out.check_closed()?;
        }
        Ok(out)
    }

    /// Declares the scalar lattice `{k/d}` for `RieszQ` and `FMV` algebras.
    pub fn with_scalar_denominator(mut self, d: u64) -> Result<FiniteAlgebra> {
        if d == 0 {
            return Err(Error::InvalidInput("scalar denominator must be positive".into()));
        }
        if !self.signature.has_scalars() && d != 1 {
            return Err(Error::SignatureViolation(format!("{} algebras carry no scalar action", self.signature)));
        }
        self.scalar_den = d;
        Ok(self)
    }

    pub fn points(&self) -> &Arc<PointSet> {
        &self.points
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn scalar_denominator(&self) -> u64 {
        self.scalar_den
    }

    /// The scalars `{0, 1/d, …, 1}` acting on this algebra.
    pub fn scalars(&self) -> Vec<Rational01> {
        if !self.signature.has_scalars() {
            return Vec::new();
        }
        (0..=self.scalar_den).map(|k| Rational01::ratio(k, self.scalar_den)).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn values(&self, i: usize) -> &[Rational01] {
        &self.elements[i]
    }

    pub fn element(&self, i: usize) -> PointFunction {
        PointFunction::new(self.points.clone(), self.elements[i].to_vec()).expect("width matches")
    }

    pub fn elements(&self) -> impl Iterator<Item = PointFunction> + '_ {
        (0..self.len()).map(|i| self.element(i))
    }

    pub fn index_of(&self, values: &[Rational01]) -> Option<usize> {
        self.index.get(values).copied()
    }

    pub fn index_of_function(&self, f: &PointFunction) -> Option<usize> {
        if f.domain() != &self.points {
            return None;
        }
        self.index_of(f.values())
    }

    pub fn contains(&self, f: &PointFunction) -> bool {
        self.index_of_function(f).is_some()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_functions(&self) -> Vec<PointFunction> {
        self.generators.iter().map(|&g| self.element(g)).collect()
    }

    /// Replaces the recorded generators; they must generate the carrier.
    pub fn with_generators(mut self, gens: Vec<usize>) -> Result<FiniteAlgebra> {
        if gens.iter().any(|&g| g >= self.len()) {
            return Err(Error::InvalidInput("generator index out of range".into()));
        }
        if self.top.is_none() {
            let seeds: Vec<PointFunction> = gens.iter().map(|&g| self.element(g)).collect();
            let regen = generate_subalgebra(&self.points, &seeds, self.signature, self.len())?;
            if regen.len() != self.len() {
                return Err(Error::InvalidInput("generators do not generate the carrier".into()));
            }
        }
        self.generators = dedup_indices(gens.into_iter());
        Ok(self)
    }

    /// `Some(a)` for interval algebras `[0, a]`.
    pub fn top(&self) -> Option<usize> {
        self.top
    }

    pub fn is_interval(&self) -> bool {
        self.top.is_some()
    }

    fn top_values(&self) -> Option<&[Rational01]> {
        self.top.map(|t| &self.elements[t][..])
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.top.unwrap_or(self.len() - 1)
    }

    fn lookup(&self, values: &[Rational01]) -> usize {
        match self.index.get(values) {
            Some(&i) => i,
            None => panic!("carrier is not closed: {} missing", fmt_values(values)),
        }
    }

    pub fn oplus(&self, i: usize, j: usize) -> usize {
        let (a, b) = (&self.elements[i], &self.elements[j]);
        let v: Vec<Rational01> = match self.top_values() {
            None => a.iter().zip(b.iter()).map(|(x, y)| x.oplus(*y)).collect(),
            Some(t) => a.iter().zip(b.iter()).zip(t).map(|((x, y), m)| x.oplus(*y).meet(*m)).collect(),
        };
        self.lookup(&v)
    }

    pub fn neg(&self, i: usize) -> usize {
        let a = &self.elements[i];
        let v: Vec<Rational01> = match self.top_values() {
            None => a.iter().map(|x| x.neg()).collect(),
            Some(t) => a.iter().zip(t).map(|(x, m)| m.checked_sub(*x).expect("x ≤ a")).collect(),
        };
        self.lookup(&v)
    }

    pub fn odot(&self, i: usize, j: usize) -> usize {
        self.neg(self.oplus(self.neg(i), self.neg(j)))
    }

    /// `x ≤ y`, read off from `x* ⊕ y = 1`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.oplus(self.neg(i), j) == self.one()
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.oplus(self.odot(i, self.neg(j)), j)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.neg(self.join(self.neg(i), self.neg(j)))
    }

    /// The pointwise product when it lies in the carrier.
    pub fn pointwise_product(&self, i: usize, j: usize) -> Option<usize> {
        let v: Vec<Rational01> = self.elements[i].iter().zip(self.elements[j].iter()).map(|(x, y)| x.mul(*y)).collect();
        self.index_of(&v)
    }

    /// The algebra's product; `None` when the signature has no product.
    pub fn prod(&self, i: usize, j: usize) -> Option<usize> {
        if !self.signature.has_product() {
            return None;
        }
        Some(self.pointwise_product(i, j).expect("product-closed carrier"))
    }

    /// `α·x` when `α` is an admissible scalar and the result stays in the carrier.
    pub fn scalar(&self, alpha: Rational01, i: usize) -> Option<usize> {
        if !self.signature.has_scalars() || !self.scalar_den.is_multiple_of(alpha.den()) {
            return None;
        }
        let v: Vec<Rational01> = self.elements[i].iter().map(|x| alpha.mul(*x)).collect();
        self.index_of(&v)
    }

    /// The same carrier under the MV signature.
    pub fn mv_reduct(&self) -> FiniteAlgebra {
        FiniteAlgebra { signature: Signature::Mv, scalar_den: 1, ..self.clone() }
    }

    pub fn describe(&self, i: usize) -> String {
        fmt_values(&self.elements[i])
    }

    /// Carrier equality as sets of value vectors on equal point sets.
    pub fn same_carrier(&self, other: &FiniteAlgebra) -> bool {
        self.points == other.points && self.elements == other.elements
    }

    /// Same value vectors, ignoring point labels.
    pub fn same_values(&self, other: &FiniteAlgebra) -> bool {
        self.elements == other.elements
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational01 {
        s.parse().unwrap()
    }

    fn on_point(v: &str) -> PointFunction {
        PointFunction::constant(&PointSet::singleton(), r(v))
    }

    fn values(alg: &FiniteAlgebra) -> Vec<Rational01> {
        (0..alg.len()).map(|i| alg.values(i)[0]).collect()
    }

    #[test]
    fn generated_chains() {
        let p = PointSet::singleton();
        let l2 = generate_subalgebra(&p, &[on_point("1/2")], Signature::Mv, 100).unwrap();
        assert_eq!(values(&l2), vec![r("0"), r("1/2"), r("1")]);
        assert_eq!(l2.generators(), &[1]);
        let l3 = generate_subalgebra(&p, &[on_point("1/3")], Signature::Mv, 100).unwrap();
        assert_eq!(values(&l3), vec![r("0"), r("1/3"), r("2/3"), r("1")]);
        assert_eq!(l3, chain(3));
    }

    #[test]
    fn product_closure_of_one_half_hits_the_cap() {
        let p = PointSet::singleton();
        let out = generate_subalgebra(&p, &[on_point("1/2")], Signature::Pmv, 8);
        assert_eq!(out.unwrap_err(), Error::CapExceeded { cap: 8 });
    }

    #[test]
    fn interval_examples() {
        let l4 = chain(4);
        let whole = interval_algebra(&l4, &on_point("1")).unwrap();
        assert!(whole.same_carrier(&l4));
        assert!(!whole.is_interval());

        let zero = interval_algebra(&l4, &on_point("0")).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero.one(), zero.zero());

        let half = interval_algebra(&l4, &on_point("1/2")).unwrap();
        assert_eq!(values(&half), vec![r("0"), r("1/4"), r("1/2")]);
        let q = half.index_of(&[r("1/4")]).unwrap();
        assert_eq!(half.values(half.oplus(q, q)), &[r("1/2")]);
        assert_eq!(half.values(half.neg(q)), &[r("1/4")]);
        assert_eq!(half.values(half.one()), &[r("1/2")]);

        assert!(matches!(interval_algebra(&l4, &on_point("1/3")), Err(Error::NotInCarrier(_))));
    }

    #[test]
    fn from_carrier_rejects_open_sets() {
        let p = PointSet::singleton();
        let l2: Vec<_> = ["0", "1/2", "1"].iter().map(|v| on_point(v)).collect();
        assert!(FiniteAlgebra::from_carrier(&p, &l2, Signature::Mv).is_ok());
        assert!(FiniteAlgebra::from_carrier(&p, &l2, Signature::Pmv).is_err());
        assert!(FiniteAlgebra::from_carrier(&p, &l2[..2], Signature::Mv).is_err());
        assert!(chain(2).with_signature(Signature::Pmv).is_err());
        assert!(boolean().signature().has_product());
    }

    #[test]
    fn derived_operations_on_a_chain() {
        let l4 = chain(4);
        let idx = |v: &str| l4.index_of(&[r(v)]).unwrap();
        assert_eq!(l4.odot(idx("3/4"), idx("1/2")), idx("1/4"));
        assert_eq!(l4.join(idx("1/4"), idx("3/4")), idx("3/4"));
        assert_eq!(l4.meet(idx("1/4"), idx("3/4")), idx("1/4"));
        assert!(l4.leq(idx("1/4"), idx("1/2")));
        assert!(!l4.leq(idx("3/4"), idx("1/2")));
        assert_eq!(l4.pointwise_product(idx("1/2"), idx("1/2")), Some(idx("1/4")));
        assert_eq!(l4.pointwise_product(idx("1/4"), idx("1/2")), None);
    }

    #[test]
    fn partial_scalar_action() {
        let l4 = chain(4).with_signature(Signature::RieszQ).unwrap().with_scalar_denominator(2).unwrap();
        let idx = |v: &str| l4.index_of(&[r(v)]).unwrap();
        assert_eq!(l4.scalar(r("1/2"), idx("1/2")), Some(idx("1/4")));
        assert_eq!(l4.scalar(r("1/2"), idx("1/4")), None);
        assert_eq!(l4.scalar(r("1/3"), idx("1")), None);
        assert_eq!(l4.scalars(), vec![r("0"), r("1/2"), r("1")]);
    }
}
