//! Semisimple tensor products of functional carriers.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mv::algebra::{generate_subalgebra, interval_algebra, scalar_extension, FiniteAlgebra, Signature};
use crate::mv::morphism::{check_bimorphism, extend_hom, Bimorphism, Hom};
use crate::mv::points::{PointFunction, PointSet};

/// `A ⊗ B` on `X × Y` together with its canonical bimorphism `β(a, b) = a·b`.
#[derive(Clone, Debug)]
pub struct TensorResult {
    pub algebra: Arc<FiniteAlgebra>,
    pub beta: Bimorphism,
}

impl TensorResult {
    /// `(a, b, β(a, b))` for every pair of carrier indices.
    pub fn generator_index(&self) -> Vec<(usize, usize, usize)> {
        let nb = self.beta.right().len();
        self.beta.table().iter().enumerate().map(|(k, &e)| (k / nb, k % nb, e)).collect()
    }
}

fn products(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<PointFunction> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.elements() {
        for y in b.elements() {
            out.push(x.outer_product(&y));
        }
    }
    out
}

/// The MV-closure of the products `a·b` in `[0,1]^{X×Y}`.
pub fn tensor(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>, cap: usize) -> Result<TensorResult> {
    if a.is_interval() || b.is_interval() {
        return Err(Error::InvalidInput("tensor factors must be functional carriers".into()));
    }
    let points = PointSet::product(a.points(), b.points());
    let gens = products(a, b);
    let algebra = Arc::new(generate_subalgebra(&points, &gens, Signature::Mv, cap)?);
    let table = gens.iter().map(|g| algebra.index_of_function(g).expect("generator in closure")).collect();
    let beta = Bimorphism::new(a.clone(), b.clone(), algebra.clone(), table)?;
    Ok(TensorResult { algebra, beta })
}

/// The hom `A⊗B → [0, β(1,1)]` determined by `ω(a⊗b) = β(a, b)`.
#[derive(Clone, Debug)]
pub struct ExtendedBimorphism {
    pub tensor: TensorResult,
    pub interval: Arc<FiniteAlgebra>,
    pub omega: Hom,
}

impl ExtendedBimorphism {
    /// Whether `ω ∘ β_{A,B}` reproduces the original bimorphism on every pair.
    pub fn reproduces(&self, beta: &Bimorphism) -> bool {
        let (na, nb) = (beta.left().len(), beta.right().len());
        (0..na).all(|a| {
            (0..nb).all(|b| {
                let img = self.omega.apply(self.tensor.beta.apply(a, b));
                self.interval.values(img) == beta.target().values(beta.apply(a, b))
            })
        })
    }
}

/// Factors a bimorphism through the canonical one.
pub fn extend_bimorphism(beta: &Bimorphism, cap: usize) -> Result<ExtendedBimorphism> {
    let verdict = check_bimorphism(beta);
    if !verdict.holds {
        return Err(Error::InvalidInput("the map is not a bimorphism".into()));
    }
    let t = tensor(beta.left(), beta.right(), cap)?;
    let top = beta.target().element(beta.apply(beta.left().one(), beta.right().one()));
    let interval = Arc::new(interval_algebra(&beta.target().mv_reduct(), &top)?);
    let mut gmap = Vec::with_capacity(beta.table().len());
    for (a, b, e) in t.generator_index() {
        let v = beta.target().values(beta.apply(a, b));
        let img = interval.index_of(v).ok_or_else(|| Error::NotInCarrier("β(a, b) above β(1, 1)".into()))?;
        gmap.push((e, img));
    }
    let omega = extend_hom(&t.algebra, &interval, &gmap)?;
    Ok(ExtendedBimorphism { tensor: t, interval, omega })
}

fn block_swap(left_arity: usize, right_arity: usize) -> Vec<usize> {
    (left_arity..left_arity + right_arity).chain(0..left_arity).collect()
}

/// The swap `(x, y) ↦ (y, x)` as an isomorphism `A⊗B → B⊗A`.
pub fn commutativity_witness(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>, cap: usize) -> Result<Hom> {
    let ab = tensor(a, b, cap)?;
    let ba = tensor(b, a, cap)?;
    let perm = block_swap(a.points().arity(), b.points().arity());
    let h = Hom::from_values(ab.algebra.clone(), ba.algebra.clone(), |f| f.permute_coords(&perm))?;
    if !h.is_bijective() {
        return Err(Error::NotWellDefined("the swap is not a bijection".into()));
    }
    Ok(h)
}

#[derive(Clone, Debug)]
pub struct AssociativityWitness {
    /// `(A⊗B)⊗C`.
    pub left: Arc<FiniteAlgebra>,
    /// `A⊗(B⊗C)`.
    pub right: Arc<FiniteAlgebra>,
    /// The closure of the triple products `a·b·c`.
    pub triple: Arc<FiniteAlgebra>,
    /// The regrouping map, which is the identity on flattened points.
    pub regroup: Hom,
}

impl AssociativityWitness {
    pub fn triple_equal(&self) -> bool {
        self.left.same_carrier(&self.triple) && self.right.same_carrier(&self.triple)
    }
}

/// Computes both bracketings on `X × Y × Z` and compares them as carriers.
pub fn associativity_witness(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
    c: &Arc<FiniteAlgebra>,
    cap: usize,
) -> Result<AssociativityWitness> {
    let ab = tensor(a, b, cap)?;
    let left = tensor(&ab.algebra, c, cap)?.algebra;
    let bc = tensor(b, c, cap)?;
    let right = tensor(a, &bc.algebra, cap)?.algebra;
    if !left.same_carrier(&right) {
        return Err(Error::NotWellDefined("the two bracketings differ as carriers".into()));
    }
    let points = left.points().clone();
    let mut gens = Vec::with_capacity(a.len() * b.len() * c.len());
    for x in a.elements() {
        for y in b.elements() {
            let xy = x.outer_product(&y);
            for z in c.elements() {
                gens.push(xy.outer_product(&z));
            }
        }
    }
    let triple = Arc::new(generate_subalgebra(&points, &gens, Signature::Mv, cap)?);
    let regroup = Hom::new(left.clone(), right.clone(), (0..left.len()).collect())?;
    Ok(AssociativityWitness { left, right, triple, regroup })
}

/// `Ł_d ⊗ B` with its scalar action by `{k/d}`.
///
/// The chain factor lives on a single point, so the result is realized on the points
/// of `B` itself.
#[derive(Clone, Debug)]
pub struct ScalarLevel {
    pub d: u64,
    pub algebra: Arc<FiniteAlgebra>,
}

pub fn scalar_tower(b: &FiniteAlgebra, d: u64, cap: usize) -> Result<ScalarLevel> {
    let algebra = Arc::new(scalar_extension(b, d, cap)?);
    Ok(ScalarLevel { d, algebra })
}

impl ScalarLevel {
    /// The inclusion `Ł_d ⊗ B → Ł_{d'} ⊗ B` for `d | d'`.
    pub fn embedding_into(&self, finer: &ScalarLevel) -> Result<Hom> {
        if !finer.d.is_multiple_of(self.d) {
            return Err(Error::InvalidInput(format!("{} does not divide {}", self.d, finer.d)));
        }
        Hom::from_values(self.algebra.clone(), finer.algebra.clone(), |f| f.clone())
    }
}
