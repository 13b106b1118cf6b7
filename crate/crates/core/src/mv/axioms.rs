//! Exhaustive equational audits for the four signatures.

use serde::Serialize;

use crate::mv::algebra::Signature;
use crate::mv::ops::Operations;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub name: &'static str,
    pub passed: bool,
    /// Number of instances evaluated (instances with an undefined scalar term are skipped).
    pub checked: u64,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub signature: String,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}

pub(crate) struct Audit {
    name: &'static str,
    checked: u64,
    witness: Option<String>,
}

impl Audit {
    pub(crate) fn new(name: &'static str) -> Self {
        Audit { name, checked: 0, witness: None }
    }

    /// Records one instance; returns false once a witness is known.
    pub(crate) fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
        self.witness.is_none()
    }

    pub(crate) fn finish(self) -> AxiomResult {
        AxiomResult { name: self.name, passed: self.witness.is_none(), checked: self.checked, witness: self.witness }
    }
}

/// Verifies the equational axioms of `sig` over every tuple of carrier elements.
///
/// Scalar laws are checked wherever every scalar term involved is defined, since the
/// scalar action of a finite carrier is partial.
pub fn check_axioms<O: Operations + ?Sized>(ops: &O, sig: Signature) -> AxiomReport {
    let mut results = mv_axioms(ops);
    if sig.has_product() {
        results.extend(pmv_axioms(ops));
    }
    if sig.has_scalars() {
        results.extend(riesz_axioms(ops));
    }
    if sig == Signature::Fmv {
        results.push(fmv_compatibility(ops));
    }
    AxiomReport { signature: sig.to_string(), results }
}

fn mv_axioms<O: Operations + ?Sized>(a: &O) -> Vec<AxiomResult> {
    let n = a.size();
    let d = |x: usize| a.describe(x);

    let mut top = Audit::new("one is 0*");
    top.record(a.neg(a.zero()) == a.one(), || format!("0* = {} but 1 = {}", d(a.neg(a.zero())), d(a.one())));

    let mut assoc = Audit::new("⊕ associative");
    'outer: for x in 0..n {
        for y in 0..n {
            let xy = a.oplus(x, y);
            for z in 0..n {
                let ok = a.oplus(x, a.oplus(y, z)) == a.oplus(xy, z);
                if !assoc.record(ok, || format!("x={}, y={}, z={}", d(x), d(y), d(z))) {
                    break 'outer;
                }
            }
        }
    }

    let mut comm = Audit::new("⊕ commutative");
    let mut unit = Audit::new("x ⊕ 0 = x");
    let mut invol = Audit::new("x** = x");
    let mut absorb = Audit::new("x ⊕ 0* = 0*");
    let mut luk = Audit::new("(x* ⊕ y)* ⊕ y = (y* ⊕ x)* ⊕ x");
    let top_elem = a.neg(a.zero());
    for x in 0..n {
        unit.record(a.oplus(x, a.zero()) == x, || format!("x={}", d(x)));
        invol.record(a.neg(a.neg(x)) == x, || format!("x={}", d(x)));
        absorb.record(a.oplus(x, top_elem) == top_elem, || format!("x={}", d(x)));
        for y in 0..n {
            comm.record(a.oplus(x, y) == a.oplus(y, x), || format!("x={}, y={}", d(x), d(y)));
            let l = a.oplus(a.neg(a.oplus(a.neg(x), y)), y);
            let r = a.oplus(a.neg(a.oplus(a.neg(y), x)), x);
            luk.record(l == r, || format!("x={}, y={}", d(x), d(y)));
        }
    }
    [top, assoc, comm, unit, invol, absorb, luk].into_iter().map(Audit::finish).collect()
}

fn pmv_axioms<O: Operations + ?Sized>(a: &O) -> Vec<AxiomResult> {
    let n = a.size();
    let d = |x: usize| a.describe(x);
    let p = |x: usize, y: usize| a.prod(x, y).expect("product signature");

    let mut left = Audit::new("· linear in the left argument");
    let mut right = Audit::new("· linear in the right argument");
    let mut assoc = Audit::new("· associative");
    for x in 0..n {
        for y in 0..n {
            let xy = p(x, y);
            let summable = a.leq(x, a.neg(y));
            let s = a.oplus(x, y);
            for z in 0..n {
                if summable {
                    left.record(p(s, z) == a.oplus(p(x, z), p(y, z)), || format!("x={}, y={}, z={}", d(x), d(y), d(z)));
                    right
                        .record(p(z, s) == a.oplus(p(z, x), p(z, y)), || format!("x={}, y={}, z={}", d(x), d(y), d(z)));
                }
                assoc.record(p(x, p(y, z)) == p(xy, z), || format!("x={}, y={}, z={}", d(x), d(y), d(z)));
            }
        }
    }

    let mut comm = Audit::new("· commutative");
    let mut unit = Audit::new("x · 1 = 1 · x = x");
    for x in 0..n {
        unit.record(p(x, a.one()) == x && p(a.one(), x) == x, || {
            format!("x={}: x·1={}, 1·x={}", d(x), d(p(x, a.one())), d(p(a.one(), x)))
        });
        for y in 0..n {
            comm.record(p(x, y) == p(y, x), || format!("x={}, y={}", d(x), d(y)));
        }
    }
    [left, right, assoc, comm, unit].into_iter().map(Audit::finish).collect()
}

fn riesz_axioms<O: Operations + ?Sized>(a: &O) -> Vec<AxiomResult> {
    let n = a.size();
    let d = |x: usize| a.describe(x);
    let scalars = a.scalars();

    let mut in_vector = Audit::new("α(x ⊕ y) = αx ⊕ αy for x ≤ y*");
    let mut in_scalar = Audit::new("(α + β)x = αx ⊕ βx for α + β ≤ 1");
    let mut compose = Audit::new("(α·β)x = α(βx)");
    let mut unit = Audit::new("1x = x");
    for x in 0..n {
        let one_x = a.scalar(Rational01::ONE, x);
        unit.record(one_x == Some(x), || format!("x={}", d(x)));
        for &alpha in &scalars {
            let ax = a.scalar(alpha, x);
            for y in 0..n {
                if !a.leq(x, a.neg(y)) {
                    continue;
                }
                if let (Some(axy), Some(ax), Some(ay)) = (a.scalar(alpha, a.oplus(x, y)), ax, a.scalar(alpha, y)) {
                    in_vector.record(axy == a.oplus(ax, ay), || format!("α={alpha}, x={}, y={}", d(x), d(y)));
                }
            }
            for &beta in &scalars {
                let bx = a.scalar(beta, x);
                if let (Some(sum), Some(ax), Some(bx)) = (alpha.checked_add(beta), ax, bx) {
                    if let Some(sx) = a.scalar(sum, x) {
                        in_scalar.record(sx == a.oplus(ax, bx), || format!("α={alpha}, β={beta}, x={}", d(x)));
                    }
                }
                if let (Some(abx), Some(bx)) = (a.scalar(alpha.mul(beta), x), bx) {
                    if let Some(a_bx) = a.scalar(alpha, bx) {
                        compose.record(abx == a_bx, || format!("α={alpha}, β={beta}, x={}", d(x)));
                    }
                }
            }
        }
    }
    [in_vector, in_scalar, compose, unit].into_iter().map(Audit::finish).collect()
}

use crate::mv::rational::Rational01;

fn fmv_compatibility<O: Operations + ?Sized>(a: &O) -> AxiomResult {
    let n = a.size();
    let d = |x: usize| a.describe(x);
    let p = |x: usize, y: usize| a.prod(x, y).expect("product signature");
    let mut audit = Audit::new("α(x·y) = (αx)·y = x·(αy)");
    for &alpha in &a.scalars() {
        for x in 0..n {
            for y in 0..n {
                let lhs = a.scalar(alpha, p(x, y));
                let mid = a.scalar(alpha, x).map(|ax| p(ax, y));
                let rhs = a.scalar(alpha, y).map(|ay| p(x, ay));
                if let (Some(l), Some(m), Some(r)) = (lhs, mid, rhs) {
                    audit.record(l == m && m == r, || format!("α={alpha}, x={}, y={}", d(x), d(y)));
                }
            }
        }
    }
    audit.finish()
}
