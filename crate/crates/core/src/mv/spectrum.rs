//! Decomposition of finite carriers into products of chains, and isomorphism search.

use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mv::algebra::{chain, FiniteAlgebra};
use crate::mv::morphism::Hom;
use crate::mv::ops::Operations;
use crate::mv::rational::Rational01;

/// One simple quotient: the evaluation at a class of indistinguishable points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralComponent {
    pub order: u64,
    /// Point indices carrying identical values on every element.
    pub points: Vec<usize>,
    /// `evaluation[x] = k` when element `x` evaluates to `k/order`.
    pub evaluation: Vec<u64>,
}

impl SpectralComponent {
    pub fn representative(&self) -> usize {
        self.points[0]
    }

    /// The evaluation as a hom onto `Ł_order`.
    pub fn evaluation_hom(&self, alg: &Arc<FiniteAlgebra>) -> Result<Hom> {
        let chain = Arc::new(chain(self.order));
        let table = self.evaluation.iter().map(|&k| k as usize).collect();
        Hom::new(alg.clone(), chain, table)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub components: Vec<SpectralComponent>,
}

impl Spectrum {
    /// Chain orders sorted ascending.
    pub fn orders(&self) -> Vec<u64> {
        let mut o: Vec<u64> = self.components.iter().map(|c| c.order).collect();
        o.sort_unstable();
        o
    }
}

/// Writes a finite carrier as a subdirect product of chains `Ł_{n_i}`.
///
/// Points are grouped by their value columns; each group contributes one evaluation
/// onto the chain whose order is the lcm of the column's denominators. Both the
/// injectivity of the joint evaluation and the surjectivity of each evaluation are
/// checked.
pub fn spectral_decomposition(alg: &FiniteAlgebra) -> Result<Spectrum> {
    if alg.is_interval() {
        return Err(Error::InvalidInput("spectral decomposition expects a functional carrier".into()));
    }
    let width = alg.points().len();
    let column = |p: usize| -> Vec<Rational01> { (0..alg.len()).map(|x| alg.values(x)[p]).collect() };
    let mut classes: Vec<(Vec<Rational01>, Vec<usize>)> = Vec::new();
    for p in 0..width {
        let col = column(p);
        match classes.iter_mut().find(|(c, _)| *c == col) {
            Some((_, pts)) => pts.push(p),
            None => classes.push((col, vec![p])),
        }
    }
    let mut components = Vec::with_capacity(classes.len());
    for (col, points) in classes {
        let order = col.iter().fold(1u64, |acc, v| acc.lcm(&v.den()));
        let evaluation: Vec<u64> = col.iter().map(|v| v.num() * (order / v.den())).collect();
        let mut hit = vec![false; order as usize + 1];
        for &k in &evaluation {
            hit[k as usize] = true;
        }
        if let Some(k) = hit.iter().position(|h| !h) {
            return Err(Error::NotWellDefined(format!("evaluation at point {} misses {k}/{order}", points[0])));
        }
        components.push(SpectralComponent { order, points, evaluation });
    }
    let mut seen = std::collections::HashSet::new();
    for x in 0..alg.len() {
        let key: Vec<u64> = components.iter().map(|c| c.evaluation[x]).collect();
        if !seen.insert(key) {
            return Err(Error::NotWellDefined(format!("joint evaluation identifies {}", alg.describe(x))));
        }
    }
    Ok(Spectrum { components })
}

/// Returns a nonzero `x` with `n·x ≤ x*` for every `n`, if one exists.
pub fn has_infinitesimal<O: Operations + ?Sized>(ops: &O) -> Option<usize> {
    for x in 0..ops.size() {
        if x == ops.zero() {
            continue;
        }
        let nx_bar = ops.neg(x);
        let mut s = x;
        let mut bounded = true;
        for _ in 0..=ops.size() {
            if !ops.leq(s, nx_bar) {
                bounded = false;
                break;
            }
            let next = ops.oplus(s, x);
            if next == s {
                break;
            }
            s = next;
        }
        if bounded {
            return Some(x);
        }
    }
    None
}

/// Limit on component matchings tried before giving up.
const MAX_MATCHINGS: usize = 100_000;

/// Searches for an isomorphism `a → b` preserving the signature of `a`.
///
/// Chain-order multisets and sizes prune the search; component matchings are then
/// enumerated by backtracking and each candidate is verified as a hom.
pub fn iso_check(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> Option<Hom> {
    if a.len() != b.len() || a.signature() != b.signature() || a.is_interval() || b.is_interval() {
        return None;
    }
    let (sa, sb) = (spectral_decomposition(a).ok()?, spectral_decomposition(b).ok()?);
    if sa.orders() != sb.orders() {
        return None;
    }
    let mut matching = vec![usize::MAX; sa.components.len()];
    let mut used = vec![false; sb.components.len()];
    let mut tries = 0;
    search(a, b, &sa, &sb, 0, &mut matching, &mut used, &mut tries)
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
    sa: &Spectrum,
    sb: &Spectrum,
    k: usize,
    matching: &mut Vec<usize>,
    used: &mut Vec<bool>,
    tries: &mut usize,
) -> Option<Hom> {
    if k == matching.len() {
        *tries += 1;
        return candidate(a, b, sa, sb, matching);
    }
    for j in 0..sb.components.len() {
        if used[j] || sb.components[j].order != sa.components[k].order || *tries >= MAX_MATCHINGS {
            continue;
        }
        used[j] = true;
        matching[k] = j;
        if let Some(h) = search(a, b, sa, sb, k + 1, matching, used, tries) {
            return Some(h);
        }
        used[j] = false;
    }
    None
}

fn candidate(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>, sa: &Spectrum, sb: &Spectrum, m: &[usize]) -> Option<Hom> {
    let width = b.points().len();
    let mut owner = vec![0usize; width];
    for (i, &j) in m.iter().enumerate() {
        for &p in &sb.components[j].points {
            owner[p] = i;
        }
    }
    let mut table = Vec::with_capacity(a.len());
    let mut buf = vec![Rational01::ZERO; width];
    for x in 0..a.len() {
        for (p, slot) in buf.iter_mut().enumerate() {
            *slot = a.values(x)[sa.components[owner[p]].representative()];
        }
        table.push(b.index_of(&buf)?);
    }
    let h = Hom::new(a.clone(), b.clone(), table).ok()?;
    h.is_bijective().then_some(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mv::algebra::{generate_subalgebra, Signature};
    use crate::mv::points::{PointFunction, PointSet};

    fn r(s: &str) -> Rational01 {
        s.parse().unwrap()
    }

    fn on_two(a: &str, b: &str) -> PointFunction {
        PointFunction::new(PointSet::new(["x", "y"]).unwrap(), vec![r(a), r(b)]).unwrap()
    }

    #[test]
    fn chain_has_one_component() {
        let l6 = Arc::new(chain(6));
        let s = spectral_decomposition(&l6).unwrap();
        assert_eq!(s.orders(), vec![6]);
        let ev = s.components[0].evaluation_hom(&l6).unwrap();
        assert_eq!(ev.table(), &[0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn diagonal_and_full_products() {
        let pts = PointSet::new(["x", "y"]).unwrap();
        let diag = generate_subalgebra(&pts, &[on_two("1/2", "1/2")], Signature::Mv, 100).unwrap();
        let s = spectral_decomposition(&diag).unwrap();
        assert_eq!(s.components.len(), 1);
        assert_eq!(s.components[0].points, vec![0, 1]);
        assert_eq!(s.orders(), vec![2]);

        let full = generate_subalgebra(&pts, &[on_two("1/2", "0"), on_two("0", "1/3")], Signature::Mv, 100).unwrap();
        assert_eq!(full.len(), 12);
        let s = spectral_decomposition(&full).unwrap();
        assert_eq!(s.orders(), vec![2, 3]);
    }

    #[test]
    fn no_infinitesimals_on_functional_carriers() {
        assert_eq!(has_infinitesimal(&chain(6)), None);
        assert_eq!(has_infinitesimal(&chain(1)), None);
    }

    #[test]
    fn isomorphisms() {
        let l4 = Arc::new(chain(4));
        let id = iso_check(&l4, &l4).unwrap();
        assert_eq!(id, Hom::identity(l4.clone()));
        assert!(iso_check(&Arc::new(chain(2)), &Arc::new(chain(3))).is_none());

        let pts = PointSet::new(["x", "y"]).unwrap();
        let ab =
            Arc::new(generate_subalgebra(&pts, &[on_two("1/2", "0"), on_two("0", "1/3")], Signature::Mv, 100).unwrap());
        let ba =
            Arc::new(generate_subalgebra(&pts, &[on_two("1/3", "0"), on_two("0", "1/2")], Signature::Mv, 100).unwrap());
        let h = iso_check(&ab, &ba).unwrap();
        let x = ab.index_of(&[r("1/2"), r("1/3")]).unwrap();
        assert_eq!(ba.values(h.apply(x)), &[r("1/3"), r("1/2")]);
    }
}
