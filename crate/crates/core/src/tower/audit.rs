//! Exhaustive audits of the ε/γ calculus and the limit product.

use serde::Serialize;

use super::Tower;
use crate::error::Result;
use crate::mv::axioms::{Audit, AxiomResult};
use crate::mv::rational::Rational01;
use crate::tensor::tensor;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerReport {
    pub max_level: usize,
    pub results: Vec<AxiomResult>,
}

impl TowerReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, prefix: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.name.starts_with(prefix))
    }
}

/// An element named by level and index.
type Ix = (usize, usize);

fn show(tw: &Tower, (n, x): Ix) -> String {
    format!("{}@{n}", tw.level(n).describe(x))
}

/// Expands a permutation of coordinate blocks into one of atoms.
fn expand_blocks(blocks: &[usize], width: usize) -> Vec<usize> {
    blocks.iter().flat_map(|&b| b * width..(b + 1) * width).collect()
}

fn permuted(tw: &Tower, level: usize, x: usize, block_perm: &[usize]) -> Vec<Rational01> {
    let width = tw.base().points().arity();
    tw.level(level).element(x).permute_coords(&expand_blocks(block_perm, width)).into_values()
}

/// Verifies the five identities between padding maps and juxtaposed products.
///
/// Identities that reorder coordinate blocks, `γ_{n,m}(a,b) = γ_{m,n}(b,a)` and
/// `γ_{m,k}(ε_{n,m}(a), b) = ε_{n+k,m+k}(γ_{n,k}(a,b))`, are compared after the block
/// permutation that relates the two sides; on a one-point base it is the identity.
pub fn check_eps_gamma_identities(tw: &Tower, cap: usize) -> Result<TowerReport> {
    let n_max = tw.max_level();
    let size = |n: usize| tw.level(n).len();

    let mut one = Audit::new("(1) γ_{n,m}(a, 1_m) = ε_{n,n+m}(a)");
    for n in 1..n_max {
        for m in 1..=n_max - n {
            let top = tw.level(m).one();
            for a in 0..size(n) {
                let ok = tw.gamma(n, a, m, top)? == tw.eps(n, n + m, a);
                one.record(ok, || format!("n={n}, m={m}, a={}", show(tw, (n, a))));
            }
        }
    }

    let mut two = Audit::new("(2) T^n ⊗ T^m = T^{n+m} = T^m ⊗ T^n and regrouping of levels");
    for n in 1..n_max {
        for m in 1..=n_max - n {
            let target = tw.level(n + m);
            let nm = tensor(tw.level(n), tw.level(m), cap)?.algebra;
            let mn = tensor(tw.level(m), tw.level(n), cap)?.algebra;
            two.record(nm.same_carrier(target) && mn.same_carrier(target), || format!("n={n}, m={m}"));
            for l in 1..=n_max - n - m {
                let left = tensor(&nm, tw.level(l), cap)?.algebra;
                let ml = tensor(tw.level(m), tw.level(l), cap)?.algebra;
                let right = tensor(tw.level(n), &ml, cap)?.algebra;
                two.record(left.same_carrier(&right) && left.same_carrier(tw.level(n + m + l)), || {
                    format!("n={n}, m={m}, l={l}")
                });
            }
        }
    }

    let mut three = Audit::new("(3) γ_{n,m}(a, b) = γ_{m,n}(b, a) after the block swap");
    for n in 1..n_max {
        for m in 1..=n_max - n {
            let swap: Vec<usize> = (m..m + n).chain(0..m).collect();
            for a in 0..size(n) {
                for b in 0..size(m) {
                    let ab = tw.gamma(n, a, m, b)?;
                    let ba = tw.gamma(m, b, n, a)?;
                    let ok = permuted(tw, n + m, ba, &swap) == tw.level(n + m).values(ab);
                    three.record(ok, || format!("a={}, b={}", show(tw, (n, a)), show(tw, (m, b))));
                }
            }
        }
    }

    let mut four = Audit::new("(4) γ_{n,m+k}(a, γ_{m,k}(b, c)) = γ_{n+m,k}(γ_{n,m}(a, b), c)");
    for n in 1..n_max {
        for m in n..n_max {
            for k in 1..=n_max.saturating_sub(n + m) {
                for a in 0..size(n) {
                    for b in 0..size(m) {
                        let ab = tw.gamma(n, a, m, b)?;
                        for c in 0..size(k) {
                            let left = tw.gamma(n, a, m + k, tw.gamma(m, b, k, c)?)?;
                            let right = tw.gamma(n + m, ab, k, c)?;
                            four.record(left == right, || {
                                format!("a={}, b={}, c={}", show(tw, (n, a)), show(tw, (m, b)), show(tw, (k, c)))
                            });
                        }
                    }
                }
            }
        }
    }

    let mut five = Audit::new("(5) γ_{m,k}(ε_{n,m}(a), b) = ε_{n+k,m+k}(γ_{n,k}(a, b)) after the block shift");
    for n in 1..n_max {
        for m in n..n_max {
            for k in 1..=n_max - m {
                // Left blocks: a (n), padding (m - n), b (k). Right blocks: a, b, padding.
                let perm: Vec<usize> = (0..m + k)
                    .map(|i| {
                        if i < n {
                            i
                        } else if i < m {
                            n + k + (i - n)
                        } else {
                            n + (i - m)
                        }
                    })
                    .collect();
                for a in 0..size(n) {
                    let ea = tw.eps(n, m, a);
                    for b in 0..size(k) {
                        let left = tw.gamma(m, ea, k, b)?;
                        let right = tw.eps(n + k, m + k, tw.gamma(n, a, k, b)?);
                        let ok = permuted(tw, m + k, right, &perm) == tw.level(m + k).values(left);
                        five.record(ok, || {
                            format!("n={n}, m={m}, k={k}, a={}, b={}", show(tw, (n, a)), show(tw, (k, b)))
                        });
                    }
                }
            }
        }
    }

    Ok(TowerReport {
        max_level: n_max,
        results: [one, two, three, four, five].into_iter().map(Audit::finish).collect(),
    })
}

fn sum(tw: &Tower, (n, a): Ix, (m, b): Ix) -> Ix {
    let k = n.max(m);
    (k, tw.level(k).oplus(tw.eps(n, k, a), tw.eps(m, k, b)))
}

fn mul(tw: &Tower, (n, a): Ix, (m, b): Ix) -> Result<Ix> {
    Ok((n + m, tw.gamma(n, a, m, b)?))
}

fn equiv(tw: &Tower, (n, a): Ix, (m, b): Ix) -> bool {
    tw.equiv_idx(n, a, m, b)
}

fn all_elements(tw: &Tower, max: usize) -> Vec<Ix> {
    (1..=max).flat_map(|n| (0..tw.level(n).len()).map(move |x| (n, x))).collect()
}

/// Audits the limit product on every tuple whose products stay within the tower.
///
/// Representatives are used at their own levels, so the checks are the `∼`-level
/// statements: well-definedness under changes of representative, bilinearity,
/// associativity, commutativity and the unit laws. Where the strict statement may fail
/// only by a permutation of coordinates (bases with several points), the same check is
/// also reported modulo coordinate symmetry.
pub fn product_audit(tw: &Tower) -> Result<TowerReport> {
    let n_max = tw.max_level();
    let elems = all_elements(tw, n_max);

    let mut wd = Audit::new("product well defined on ∼-classes");
    let mut wd_sym = Audit::new("product well defined on ∼-classes up to coordinate symmetry");
    for &(n, a) in &elems {
        for &(m, b) in &elems {
            if n + m > n_max {
                continue;
            }
            let base = mul(tw, (n, a), (m, b))?;
            for n2 in n..=n_max {
                for m2 in (m..=n_max).filter(|m2| n2 + m2 <= n_max) {
                    let alt = mul(tw, (n2, tw.eps(n, n2, a)), (m2, tw.eps(m, m2, b)))?;
                    let strict = equiv(tw, base, alt);
                    let sym = strict || tw.sym_equiv_idx(base.0, base.1, alt.0, alt.1);
                    let w = || format!("x={}, y={}, promoted to levels {n2}, {m2}", show(tw, (n, a)), show(tw, (m, b)));
                    wd.record(strict, w);
                    wd_sym.record(sym, w);
                }
            }
        }
    }

    let mut left = Audit::new("(x₁ ⊕ x₂)·y ∼ x₁·y ⊕ x₂·y for x₁ ≤ x₂*");
    let mut right = Audit::new("y·(x₁ ⊕ x₂) ∼ y·x₁ ⊕ y·x₂ for x₁ ≤ x₂*");
    for &x1 in &elems {
        for &x2 in &elems {
            let l = x1.0.max(x2.0);
            let lv = tw.level(l);
            let (p1, p2) = (tw.eps(x1.0, l, x1.1), tw.eps(x2.0, l, x2.1));
            if !lv.leq(p1, lv.neg(p2)) {
                continue;
            }
            let s = (l, lv.oplus(p1, p2));
            for &y in elems.iter().filter(|y| l + y.0 <= n_max) {
                let lhs = mul(tw, s, y)?;
                let rhs = sum(tw, mul(tw, x1, y)?, mul(tw, x2, y)?);
                left.record(equiv(tw, lhs, rhs), || {
                    format!("x₁={}, x₂={}, y={}", show(tw, x1), show(tw, x2), show(tw, y))
                });
                let lhs = mul(tw, y, s)?;
                let rhs = sum(tw, mul(tw, y, x1)?, mul(tw, y, x2)?);
                right.record(equiv(tw, lhs, rhs), || {
                    format!("x₁={}, x₂={}, y={}", show(tw, x1), show(tw, x2), show(tw, y))
                });
            }
        }
    }

    let mut assoc = Audit::new("(x·y)·z ∼ x·(y·z)");
    let mut comm = Audit::new("x·y ∼ y·x");
    let mut comm_sym = Audit::new("x·y ∼ y·x up to coordinate symmetry");
    let mut unit = Audit::new("x·1 ∼ 1·x ∼ x");
    for &x in &elems {
        for k in 1..=n_max.saturating_sub(x.0) {
            let one = (k, tw.level(k).one());
            let ok = equiv(tw, mul(tw, x, one)?, x) && equiv(tw, mul(tw, one, x)?, x);
            unit.record(ok, || format!("x={}, 1 at level {k}", show(tw, x)));
        }
        for &y in &elems {
            if x.0 + y.0 > n_max {
                continue;
            }
            let (xy, yx) = (mul(tw, x, y)?, mul(tw, y, x)?);
            let strict = equiv(tw, xy, yx);
            comm.record(strict, || format!("x={}, y={}", show(tw, x), show(tw, y)));
            comm_sym.record(strict || tw.sym_equiv_idx(xy.0, xy.1, yx.0, yx.1), || {
                format!("x={}, y={}", show(tw, x), show(tw, y))
            });
            for &z in elems.iter().filter(|z| x.0 + y.0 + z.0 <= n_max) {
                let lhs = mul(tw, xy, z)?;
                let rhs = mul(tw, x, mul(tw, y, z)?)?;
                assoc
                    .record(equiv(tw, lhs, rhs), || format!("x={}, y={}, z={}", show(tw, x), show(tw, y), show(tw, z)));
            }
        }
    }

    let results = [wd, wd_sym, left, right, assoc, comm, comm_sym, unit].into_iter().map(Audit::finish).collect();
    Ok(TowerReport { max_level: n_max, results })
}

/// Audits the scalar action on the tower: the Riesz laws and compatibility with the
/// product, wherever every term is defined within the truncation.
pub fn riesz_audit(tw: &Tower) -> Result<TowerReport> {
    let n_max = tw.max_level();
    let elems = all_elements(tw, n_max);
    let scalars = tw.base().scalars();
    let scal = |alpha: Rational01, (n, x): Ix| -> Option<Ix> {
        let e = tw.element(n, x);
        let s = tw.scalar(alpha, &e).ok()?;
        Some((s.level, tw.index_of(&s).ok()?))
    };

    let mut unit = Audit::new("1x = x");
    let mut in_vector = Audit::new("α(x ⊕ y) ∼ αx ⊕ αy for x ≤ y*");
    let mut in_scalar = Audit::new("(α + β)x ∼ αx ⊕ βx for α + β ≤ 1");
    let mut compose = Audit::new("(α·β)x ∼ α(βx)");
    let mut compat = Audit::new("α(x·y) ∼ (αx)·y ∼ x·(αy)");
    for &x in &elems {
        unit.record(scal(Rational01::ONE, x) == Some(x), || show(tw, x));
        for &alpha in &scalars {
            let ax = scal(alpha, x);
            let lv = tw.level(x.0);
            for y in 0..lv.len() {
                if !lv.leq(x.1, lv.neg(y)) {
                    continue;
                }
                let s = (x.0, lv.oplus(x.1, y));
                if let (Some(l), Some(ax), Some(ay)) = (scal(alpha, s), ax, scal(alpha, (x.0, y))) {
                    in_vector.record(equiv(tw, l, sum(tw, ax, ay)), || {
                        format!("α={alpha}, x={}, y={}", show(tw, x), show(tw, (x.0, y)))
                    });
                }
            }
            for &beta in &scalars {
                if let (Some(ab), Some(ax), Some(bx)) = (alpha.checked_add(beta), ax, scal(beta, x)) {
                    if let Some(l) = scal(ab, x) {
                        in_scalar.record(equiv(tw, l, sum(tw, ax, bx)), || {
                            format!("α={alpha}, β={beta}, x={}", show(tw, x))
                        });
                    }
                }
                if let (Some(l), Some(bx)) = (scal(alpha.mul(beta), x), scal(beta, x)) {
                    if let Some(r) = scal(alpha, bx) {
                        compose.record(equiv(tw, l, r), || format!("α={alpha}, β={beta}, x={}", show(tw, x)));
                    }
                }
            }
            for &y in elems.iter().filter(|y| x.0 + y.0 <= n_max) {
                let xy = mul(tw, x, y)?;
                let (Some(l), Some(ax), Some(ay)) = (scal(alpha, xy), ax, scal(alpha, y)) else { continue };
                if ax.0 + y.0 > n_max || x.0 + ay.0 > n_max {
                    continue;
                }
                let mid = mul(tw, ax, y)?;
                let r = mul(tw, x, ay)?;
                compat.record(equiv(tw, l, mid) && equiv(tw, mid, r), || {
                    format!("α={alpha}, x={}, y={}", show(tw, x), show(tw, y))
                });
            }
        }
    }
    let results = [unit, in_vector, in_scalar, compose, compat].into_iter().map(Audit::finish).collect();
    Ok(TowerReport { max_level: n_max, results })
}
