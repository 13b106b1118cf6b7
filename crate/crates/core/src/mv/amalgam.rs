//! Amalgamation of two embeddings over a fiber product of point sets.

use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::mv::algebra::{generate_subalgebra, scalar_extension, FiniteAlgebra, Signature};
use crate::mv::morphism::Hom;
use crate::mv::points::{PointFunction, PointSet, TUPLE_SEP};
use crate::mv::rational::Rational01;

/// A commuting square `Z → A → E ← B ← Z` with injective legs.
#[derive(Clone, Debug)]
pub struct Amalgam {
    pub algebra: Arc<FiniteAlgebra>,
    pub f_a: Hom,
    pub f_b: Hom,
}

/// Amalgamates `z_a: Z → A` and `z_b: Z → B` in the MV signature.
///
/// `E` lives on `W = {(x, y) : z_a(z)(x) = z_b(z)(y) for every z}` and is generated by
/// the pullbacks `a ∘ pr_X` and `b ∘ pr_Y`.
pub fn amalgamate_mv(z_a: &Hom, z_b: &Hom, cap: usize) -> Result<Amalgam> {
    amalgamate(z_a, z_b, Signature::Mv, 1, cap)
}

/// Amalgamation in the richer signature shared by `A` and `B`.
///
/// The MV construction is closed under products when the signature has them, and
/// extended by the scalars `1/d` (with `d` the lcm of the two scalar denominators) when
/// it has scalars.
pub fn amalgamate_pmv(z_a: &Hom, z_b: &Hom, cap: usize) -> Result<Amalgam> {
    let (a, b) = (z_a.target(), z_b.target());
    if a.signature() != b.signature() {
        return Err(Error::SignatureViolation(format!("{} against {}", a.signature(), b.signature())));
    }
    let d = a.scalar_denominator().lcm(&b.scalar_denominator());
    amalgamate(z_a, z_b, a.signature(), d, cap)
}

fn amalgamate(z_a: &Hom, z_b: &Hom, sig: Signature, d: u64, cap: usize) -> Result<Amalgam> {
    let z = z_a.source();
    if !z.same_carrier(z_b.source()) {
        return Err(Error::DomainMismatch("the two maps start from different algebras".into()));
    }
    if !z_a.is_injective() || !z_b.is_injective() {
        return Err(Error::EmbeddingFailure("the maps out of Z must be injective".into()));
    }
    let (a, b) = (z_a.target(), z_b.target());
    let (xs, ys) = (a.points(), b.points());

    let mut pairs = Vec::new();
    for x in 0..xs.len() {
        for y in 0..ys.len() {
            let agree = (0..z.len()).all(|w| a.values(z_a.apply(w))[x] == b.values(z_b.apply(w))[y]);
            if agree {
                pairs.push((x, y));
            }
        }
    }
    for (side, n, proj) in [("X", xs.len(), 0usize), ("Y", ys.len(), 1)] {
        for p in 0..n {
            if !pairs.iter().any(|&(x, y)| [x, y][proj] == p) {
                return Err(Error::EmbeddingFailure(format!("projection onto {side} misses point {p}")));
            }
        }
    }
    let labels = pairs.iter().map(|&(x, y)| format!("{}{TUPLE_SEP}{}", xs.labels()[x], ys.labels()[y])).collect();
    let w = PointSet::tuples(labels)?;

    let pull = |alg: &FiniteAlgebra, i: usize, left: bool| -> PointFunction {
        let v = alg.values(i);
        let values: Vec<Rational01> = pairs.iter().map(|&(x, y)| if left { v[x] } else { v[y] }).collect();
        PointFunction::new(w.clone(), values).expect("width matches")
    };
    let mut gens: Vec<PointFunction> = a.generators().iter().map(|&g| pull(a, g, true)).collect();
    gens.extend(b.generators().iter().map(|&g| pull(b, g, false)));
    let base_sig = if sig.has_product() { Signature::Pmv } else { Signature::Mv };
    let mut e = generate_subalgebra(&w, &gens, base_sig, cap)?;
    if sig.has_scalars() {
        e = scalar_extension(&e, d, cap)?;
    }
    let e = Arc::new(e);

    let leg = |alg: &Arc<FiniteAlgebra>, left: bool| -> Result<Hom> {
        let mut table = Vec::with_capacity(alg.len());
        for i in 0..alg.len() {
            let f = pull(alg, i, left);
            match e.index_of_function(&f) {
                Some(t) => table.push(t),
                None => return Err(Error::EmbeddingFailure(format!("{} has no image", alg.describe(i)))),
            }
        }
        let h = Hom::new(alg.clone(), e.clone(), table)?;
        if !h.is_injective() {
            return Err(Error::EmbeddingFailure("a leg of the amalgam is not injective".into()));
        }
        Ok(h)
    };
    let f_a = leg(a, true)?;
    let f_b = leg(b, false)?;
    for w in 0..z.len() {
        if f_a.apply(z_a.apply(w)) != f_b.apply(z_b.apply(w)) {
            return Err(Error::EmbeddingFailure(format!("the square does not commute at {}", z.describe(w))));
        }
    }
    Ok(Amalgam { algebra: e, f_a, f_b })
}
