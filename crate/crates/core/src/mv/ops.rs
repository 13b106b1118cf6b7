//! Index-level view of an algebra's operations.
//!
//! Audits run against this trait so they apply equally to functional carriers,
//! interval algebras, and hand-edited operation tables.

use crate::mv::algebra::FiniteAlgebra;
use crate::mv::rational::Rational01;

pub trait Operations {
    fn size(&self) -> usize;
    fn zero(&self) -> usize;
    fn one(&self) -> usize;
    fn oplus(&self, x: usize, y: usize) -> usize;
    fn neg(&self, x: usize) -> usize;
    /// `None` when there is no product.
    fn prod(&self, x: usize, y: usize) -> Option<usize>;
    fn has_product(&self) -> bool;
    fn scalars(&self) -> Vec<Rational01>;
    /// `None` when `α·x` is undefined.
    fn scalar(&self, alpha: Rational01, x: usize) -> Option<usize>;
    fn describe(&self, x: usize) -> String;

    fn odot(&self, x: usize, y: usize) -> usize {
        self.neg(self.oplus(self.neg(x), self.neg(y)))
    }

    fn leq(&self, x: usize, y: usize) -> bool {
        self.oplus(self.neg(x), y) == self.one()
    }

    fn join(&self, x: usize, y: usize) -> usize {
        self.oplus(self.odot(x, self.neg(y)), y)
    }

    fn meet(&self, x: usize, y: usize) -> usize {
        self.neg(self.join(self.neg(x), self.neg(y)))
    }
}

impl Operations for FiniteAlgebra {
    fn size(&self) -> usize {
        self.len()
    }
    fn zero(&self) -> usize {
        FiniteAlgebra::zero(self)
    }
    fn one(&self) -> usize {
        FiniteAlgebra::one(self)
    }
    fn oplus(&self, x: usize, y: usize) -> usize {
        FiniteAlgebra::oplus(self, x, y)
    }
    fn neg(&self, x: usize) -> usize {
        FiniteAlgebra::neg(self, x)
    }
    fn prod(&self, x: usize, y: usize) -> Option<usize> {
        FiniteAlgebra::prod(self, x, y)
    }
    fn has_product(&self) -> bool {
        self.signature().has_product()
    }
    fn scalars(&self) -> Vec<Rational01> {
        FiniteAlgebra::scalars(self)
    }
    fn scalar(&self, alpha: Rational01, x: usize) -> Option<usize> {
        FiniteAlgebra::scalar(self, alpha, x)
    }
    fn describe(&self, x: usize) -> String {
        FiniteAlgebra::describe(self, x)
    }
}

/// Fully materialized operation tables.
///
/// Fields are public so audits can be exercised on deliberately corrupted tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTables {
    pub labels: Vec<String>,
    pub zero: usize,
    pub one: usize,
    /// Row-major `n × n`.
    pub oplus: Vec<usize>,
    pub neg: Vec<usize>,
    pub prod: Option<Vec<usize>>,
    pub scalars: Vec<(Rational01, Vec<Option<usize>>)>,
}

impl OpTables {
    pub fn from_ops<O: Operations + ?Sized>(ops: &O) -> Self {
        let n = ops.size();
        let mut oplus = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                oplus.push(ops.oplus(x, y));
            }
        }
        let prod = ops.has_product().then(|| {
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| ops.prod(x, y).expect("total")).collect()
        });
        let scalars = ops.scalars().into_iter().map(|a| (a, (0..n).map(|x| ops.scalar(a, x)).collect())).collect();
        OpTables {
            labels: (0..n).map(|x| ops.describe(x)).collect(),
            zero: ops.zero(),
            one: ops.one(),
            oplus,
            neg: (0..n).map(|x| ops.neg(x)).collect(),
            prod,
            scalars,
        }
    }

    pub fn set_prod(&mut self, x: usize, y: usize, value: usize) {
        let n = self.neg.len();
        if let Some(p) = self.prod.as_mut() {
            p[x * n + y] = value;
        }
    }
}

impl Operations for OpTables {
    fn size(&self) -> usize {
        self.neg.len()
    }
    fn zero(&self) -> usize {
        self.zero
    }
    fn one(&self) -> usize {
        self.one
    }
    fn oplus(&self, x: usize, y: usize) -> usize {
        self.oplus[x * self.size() + y]
    }
    fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }
    fn prod(&self, x: usize, y: usize) -> Option<usize> {
        self.prod.as_ref().map(|p| p[x * self.size() + y])
    }
    fn has_product(&self) -> bool {
        self.prod.is_some()
    }
    fn scalars(&self) -> Vec<Rational01> {
        self.scalars.iter().map(|(a, _)| *a).collect()
    }
    fn scalar(&self, alpha: Rational01, x: usize) -> Option<usize> {
        self.scalars.iter().find(|(a, _)| *a == alpha).and_then(|(_, t)| t[x])
    }
    fn describe(&self, x: usize) -> String {
        self.labels[x].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mv::algebra::{boolean, chain};

    #[test]
    fn tables_agree_with_the_carrier() {
        let l3 = chain(3);
        let t = OpTables::from_ops(&l3);
        for x in 0..l3.len() {
            assert_eq!(t.neg(x), l3.neg(x));
            for y in 0..l3.len() {
                assert_eq!(Operations::oplus(&t, x, y), l3.oplus(x, y));
                assert_eq!(Operations::join(&t, x, y), l3.join(x, y));
            }
        }
        assert!(t.prod.is_none());
        let b = OpTables::from_ops(&boolean());
        assert_eq!(b.prod, Some(vec![0, 0, 0, 1]));
    }
}
