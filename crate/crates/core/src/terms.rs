//! Terms over the four signatures, their term functions on rational grids, and
//! grid-scale evidence for the free-object descriptions.
//!
//! Syntax is prefix with parentheses:
//!
//! ```text
//! t ::= 0 | 1 | xI | (var I) | (neg t) | (oplus t t) | (odot t t) | (prod t t) | (scal P/Q t)
//! ```
//!
//! Variables are numbered from 1. `prod` needs a signature with a product and `scal`
//! one with scalars.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mv::algebra::{fmt_values, generate_subalgebra, scalar_extension, FiniteAlgebra, Signature};
use crate::mv::points::{PointFunction, PointSet};
use crate::mv::rational::Rational01;
use crate::tensor::tensor;
use crate::tower::build_tower;

/// Largest grid `term_function_on_grid` will tabulate.
pub const GRID_BOUND: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    /// Zero-based variable index.
    Var(usize),
    Neg(Box<Term>),
    Oplus(Box<Term>, Box<Term>),
    Odot(Box<Term>, Box<Term>),
    Prod(Box<Term>, Box<Term>),
    Scal(Rational01, Box<Term>),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Var(i) => write!(f, "x{}", i + 1),
            Term::Neg(t) => write!(f, "(neg {t})"),
            Term::Oplus(a, b) => write!(f, "(oplus {a} {b})"),
            Term::Odot(a, b) => write!(f, "(odot {a} {b})"),
            Term::Prod(a, b) => write!(f, "(prod {a} {b})"),
            Term::Scal(r, t) => write!(f, "(scal {r} {t})"),
        }
    }
}

impl Term {
    /// Evaluation in the standard model `[0,1]`.
    pub fn eval(&self, assignment: &[Rational01]) -> Rational01 {
        match self {
            Term::Zero => Rational01::ZERO,
            Term::One => Rational01::ONE,
            Term::Var(i) => assignment[*i],
            Term::Neg(t) => t.eval(assignment).neg(),
            Term::Oplus(a, b) => a.eval(assignment).oplus(b.eval(assignment)),
            Term::Odot(a, b) => a.eval(assignment).odot(b.eval(assignment)),
            Term::Prod(a, b) => a.eval(assignment).mul(b.eval(assignment)),
            Term::Scal(r, t) => r.mul(t.eval(assignment)),
        }
    }

    /// One more than the largest variable index used.
    pub fn arity(&self) -> usize {
        match self {
            Term::Zero | Term::One => 0,
            Term::Var(i) => i + 1,
            Term::Neg(t) | Term::Scal(_, t) => t.arity(),
            Term::Oplus(a, b) | Term::Odot(a, b) | Term::Prod(a, b) => a.arity().max(b.arity()),
        }
    }

    /// The least signature whose language contains the term.
    pub fn signature(&self) -> Signature {
        let (p, s) = self.uses();
        match (p, s) {
            (false, false) => Signature::Mv,
            (true, false) => Signature::Pmv,
            (false, true) => Signature::RieszQ,
            (true, true) => Signature::Fmv,
        }
    }

    fn uses(&self) -> (bool, bool) {
        match self {
            Term::Zero | Term::One | Term::Var(_) => (false, false),
            Term::Neg(t) => t.uses(),
            Term::Scal(_, t) => (t.uses().0, true),
            Term::Prod(a, b) => (true, a.uses().1 || b.uses().1),
            Term::Oplus(a, b) | Term::Odot(a, b) => {
                let (x, y) = (a.uses(), b.uses());
                (x.0 || y.0, x.1 || y.1)
            }
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    sig: Signature,
    k: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn atom(&mut self) -> &str {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let end = rest.find(|c: char| c.is_whitespace() || c == '(' || c == ')').unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn var(&self, digits: &str, at: usize) -> Result<Term> {
        let i: usize = digits.parse().map_err(|_| Error::Parse { pos: at, msg: format!("bad variable `{digits}`") })?;
        if i == 0 || i > self.k {
            return Err(Error::Parse { pos: at, msg: format!("variable x{i} outside x1..x{}", self.k) });
        }
        Ok(Term::Var(i - 1))
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        if self.text[self.pos..].starts_with('(') {
            self.pos += 1;
            let at = self.pos;
            let head = self.atom().to_string();
            let t = match head.as_str() {
                "neg" => Term::Neg(Box::new(self.term()?)),
                "oplus" => Term::Oplus(Box::new(self.term()?), Box::new(self.term()?)),
                "odot" => Term::Odot(Box::new(self.term()?), Box::new(self.term()?)),
                "prod" => {
                    if !self.sig.has_product() {
                        return Err(Error::SignatureViolation(format!("`prod` at byte {at} in a {} term", self.sig)));
                    }
                    Term::Prod(Box::new(self.term()?), Box::new(self.term()?))
                }
                "scal" => {
                    if !self.sig.has_scalars() {
                        return Err(Error::SignatureViolation(format!("`scal` at byte {at} in a {} term", self.sig)));
                    }
                    let at = self.pos;
                    let r: Rational01 =
                        self.atom().parse().map_err(|e: Error| Error::Parse { pos: at, msg: e.to_string() })?;
                    Term::Scal(r, Box::new(self.term()?))
                }
                "var" => {
                    let at = self.pos;
                    let digits = self.atom().to_string();
                    self.var(&digits, at)?
                }
                "" => return Err(self.err("empty application")),
                other => return Err(Error::Parse { pos: at, msg: format!("unknown connective `{other}`") }),
            };
            self.expect(')')?;
            Ok(t)
        } else {
            let at = self.pos;
            match self.atom() {
                "" => Err(self.err("expected a term")),
                "0" => Ok(Term::Zero),
                "1" => Ok(Term::One),
                a if a.starts_with('x') => {
                    let digits = a[1..].to_string();
                    self.var(&digits, at)
                }
                a => Err(Error::Parse { pos: at, msg: format!("unexpected `{a}`") }),
            }
        }
    }
}

/// Parses a prefix term in `k` variables, rejecting connectives outside `sig`.
pub fn parse_term(text: &str, sig: Signature, k: usize) -> Result<Term> {
    let mut p = Parser { text, pos: 0, sig, k };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

/// `Ł_d^k` as a point set, each point labeled by its coordinates.
pub fn grid_points(k: usize, d: u64) -> Result<Arc<PointSet>> {
    if k == 0 || d == 0 {
        return Err(Error::InvalidInput("grids need k >= 1 and d >= 1".into()));
    }
    let side = usize::try_from(d + 1).map_err(|_| Error::Overflow)?;
    let total = u32::try_from(k).ok().and_then(|e| side.checked_pow(e));
    match total {
        Some(n) if n <= GRID_BOUND => {}
        _ => return Err(Error::GridTooLarge { points: total.unwrap_or(usize::MAX), bound: GRID_BOUND }),
    }
    let axis = PointSet::new((0..=d).map(|i| Rational01::ratio(i, d).to_string()))?;
    Ok(PointSet::power(&axis, k))
}

fn grid_value(pts: &PointSet, point: usize, d: u64) -> Vec<Rational01> {
    pts.coords(point).into_iter().map(|c| Rational01::ratio(c as u64, d)).collect()
}

/// Tabulates `t̃` on `Ł_d^k`.
pub fn term_function_on_grid(t: &Term, k: usize, d: u64) -> Result<PointFunction> {
    if t.arity() > k {
        return Err(Error::InvalidInput(format!("term uses x{} but k = {k}", t.arity())));
    }
    let pts = grid_points(k, d)?;
    let values = (0..pts.len()).map(|p| t.eval(&grid_value(&pts, p, d))).collect();
    PointFunction::new(pts, values)
}

/// The `k` projections on `Ł_d^k`.
pub fn projections(k: usize, d: u64) -> Result<Vec<PointFunction>> {
    (0..k).map(|i| term_function_on_grid(&Term::Var(i), k, d)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridWitness {
    pub point: Vec<Rational01>,
    pub left: Rational01,
    pub right: Rational01,
}

/// `equal` only means the term functions agree on this grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridVerdict {
    pub equal: bool,
    pub points_checked: usize,
    pub witness: Option<GridWitness>,
}

pub fn grid_equal(t1: &Term, t2: &Term, k: usize, d: u64) -> Result<GridVerdict> {
    let pts = grid_points(k, d)?;
    if t1.arity().max(t2.arity()) > k {
        return Err(Error::InvalidInput(format!("terms use more than {k} variables")));
    }
    for p in 0..pts.len() {
        let x = grid_value(&pts, p, d);
        let (left, right) = (t1.eval(&x), t2.eval(&x));
        if left != right {
            return Ok(GridVerdict {
                equal: false,
                points_checked: p + 1,
                witness: Some(GridWitness { point: x, left, right }),
            });
        }
    }
    Ok(GridVerdict { equal: true, points_checked: pts.len(), witness: None })
}

/// Carrier comparison from the free-object evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CarrierComparison {
    pub left_size: usize,
    pub right_size: usize,
    pub equal: bool,
    /// An element of one side missing from the other.
    pub witness: Option<String>,
}

fn compare(left: &[Vec<Rational01>], right: &[Vec<Rational01>]) -> CarrierComparison {
    let l: HashSet<&Vec<Rational01>> = left.iter().collect();
    let r: HashSet<&Vec<Rational01>> = right.iter().collect();
    let witness = left
        .iter()
        .find(|v| !r.contains(v))
        .map(|v| format!("{} only on the left", fmt_values(v)))
        .or_else(|| right.iter().find(|v| !l.contains(v)).map(|v| format!("{} only on the right", fmt_values(v))));
    CarrierComparison { left_size: l.len(), right_size: r.len(), equal: witness.is_none(), witness }
}

fn carrier(alg: &FiniteAlgebra) -> Vec<Vec<Rational01>> {
    (0..alg.len()).map(|i| alg.values(i).to_vec()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeEvidence {
    pub k: usize,
    pub d: u64,
    pub level: usize,
    pub grid_points: usize,
    /// Size of the MV-closure of the projections.
    pub free_mv_size: usize,
    /// Graded product closure of degree `level` against the diagonal image of `T^level`.
    pub pmv: CarrierComparison,
    /// Whether the diagonal image computed from the materialized tower level agrees;
    /// `None` when that level exceeds the cap.
    pub tower_check: Option<bool>,
    /// `Ł_d ⊗ F` against the closure of `F` under the scalars `k/d`.
    pub riesz: CarrierComparison,
    pub holds: bool,
}

fn mv_closure(pts: &Arc<PointSet>, gens: &[Vec<Rational01>], cap: usize) -> Result<FiniteAlgebra> {
    let gens: Vec<PointFunction> =
        gens.iter().map(|v| PointFunction::new(pts.clone(), v.clone())).collect::<Result<_>>()?;
    generate_subalgebra(pts, &gens, Signature::Mv, cap)
}

fn products(a: &[Vec<Rational01>], b: &[Vec<Rational01>]) -> Vec<Vec<Rational01>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.iter().zip(y).map(|(p, q)| p.mul(*q)).collect());
        }
    }
    out
}

/// Grid-scale comparison of free PMV and Riesz objects with tower and tensor
/// constructions over the free MV object `F`, realized on `Ł_d^k`.
///
/// Product side: the closure of the projections under MV operations and products of
/// total degree at most `level`, against the diagonal image `δ(T^level(F))` built as
/// the MV-closure of `δ(t)·a` level by level. With `planted_defect` the products are
/// dropped from the tower side, which must then be reported unequal whenever products
/// leave `F`.
pub fn free_pmv_evidence(k: usize, d: u64, level: usize, cap: usize, planted_defect: bool) -> Result<FreeEvidence> {
    if level == 0 {
        return Err(Error::InvalidInput("level must be at least 1".into()));
    }
    let pts = grid_points(k, d)?;
    let proj: Vec<Vec<Rational01>> = projections(k, d)?.into_iter().map(PointFunction::into_values).collect();
    let free = Arc::new(mv_closure(&pts, &proj, cap)?);
    let f = carrier(&free);

    // Graded term closure: grades[n-1] holds terms of product degree at most n.
    let mut grades: Vec<Vec<Vec<Rational01>>> = vec![f.clone()];
    for n in 2..=level {
        let mut gens = grades[n - 2].clone();
        for i in 1..n {
            gens.extend(products(&grades[i - 1], &grades[n - i - 1]));
        }
        grades.push(carrier(&mv_closure(&pts, &gens, cap)?));
    }

    let mut diagonal = f.clone();
    for _ in 2..=level {
        let gens = if planted_defect { diagonal.clone() } else { products(&diagonal, &f) };
        diagonal = carrier(&mv_closure(&pts, &gens, cap)?);
    }
    let pmv = compare(&grades[level - 1], &diagonal);

    let tower_check = match build_tower(&free, level, cap) {
        Ok(tw) => {
            let top = tw.level(level);
            let tp = top.points();
            let diag: Vec<usize> = (0..pts.len())
                .map(|x| tp.index_of_coords(&(0..level).flat_map(|_| pts.coords(x)).collect::<Vec<_>>()))
                .collect();
            let image: Vec<Vec<Rational01>> =
                (0..top.len()).map(|e| diag.iter().map(|&p| top.values(e)[p]).collect()).collect();
            Some(compare(&image, &diagonal).equal)
        }
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };

    let scalars = carrier(&scalar_extension(&free, d, cap)?);
    let tensored = carrier(&tensor(&Arc::new(crate::mv::algebra::chain(d)), &free, cap)?.algebra);
    let riesz = compare(&tensored, &scalars);

    let holds = pmv.equal && riesz.equal && tower_check != Some(false);
    Ok(FreeEvidence { k, d, level, grid_points: pts.len(), free_mv_size: free.len(), pmv, tower_check, riesz, holds })
}
