//! Deduplicating worklist closure over value vectors.
//!
//! Values are stored as integer numerators over a per-point common denominator, so
//! `⊕` and `*` are integer operations. Products can introduce new denominators; the
//! affected point is then rescaled in place, which keeps insertion order (and hence
//! the worklist position) intact.

use indexmap::IndexSet;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::mv::rational::Rational01;

const MAX_DENOMINATOR: u64 = 1 << 40;

struct Encoded {
    dens: Vec<u64>,
    set: IndexSet<Box<[u64]>>,
}

impl Encoded {
    fn new(width: usize) -> Self {
        Encoded { dens: vec![1; width], set: IndexSet::new() }
    }

    fn rescale(&mut self, point: usize, den: u64) -> Result<()> {
        let old = self.dens[point];
        let new = old.lcm(&den);
        if new > MAX_DENOMINATOR {
            return Err(Error::Overflow);
        }
        let factor = new / old;
        self.dens[point] = new;
        let old_set = std::mem::take(&mut self.set);
        self.set = old_set
            .into_iter()
            .map(|mut v| {
                v[point] *= factor;
                v
            })
            .collect();
        Ok(())
    }

    fn insert_rational(&mut self, values: &[Rational01]) -> Result<()> {
        for (x, v) in values.iter().enumerate() {
            if !self.dens[x].is_multiple_of(v.den()) {
                self.rescale(x, v.den())?;
            }
        }
        let enc: Box<[u64]> = values.iter().zip(&self.dens).map(|(v, d)| v.num() * (d / v.den())).collect();
        self.set.insert(enc);
        Ok(())
    }

    fn insert_buf(&mut self, buf: &[u64]) {
        if !self.set.contains(buf) {
            self.set.insert(buf.into());
        }
    }

    fn decode(&self) -> Vec<Vec<Rational01>> {
        self.set.iter().map(|v| v.iter().zip(&self.dens).map(|(n, d)| Rational01::ratio(*n, *d)).collect()).collect()
    }
}

/// Closes `seeds ∪ {0, 1}` under `⊕`, `*` and, when `with_product`, pointwise `·`.
///
/// Returns the elements in discovery order. Fails with `CapExceeded` as soon as more
/// than `cap` distinct elements have been found.
pub(crate) fn close(
    width: usize,
    seeds: &[Vec<Rational01>],
    with_product: bool,
    cap: usize,
) -> Result<Vec<Vec<Rational01>>> {
    let mut enc = Encoded::new(width);
    enc.insert_rational(&vec![Rational01::ZERO; width])?;
    enc.insert_rational(&vec![Rational01::ONE; width])?;
    for s in seeds {
        debug_assert_eq!(s.len(), width);
        enc.insert_rational(s)?;
    }
    if enc.set.len() > cap {
        return Err(Error::CapExceeded { cap });
    }

    let mut buf = vec![0u64; width];
    let mut pending: Vec<Vec<Rational01>> = Vec::new();
    let mut i = 0;
    while i < enc.set.len() {
        {
            let dens = &enc.dens;
            let a = enc.set[i].clone();
            for (k, slot) in buf.iter_mut().enumerate() {
                *slot = dens[k] - a[k];
            }
            enc.insert_buf(&buf);
            for j in 0..=i {
                let b = &enc.set[j];
                for k in 0..width {
                    buf[k] = (a[k] + b[k]).min(enc.dens[k]);
                }
                enc.insert_buf(&buf);
                if with_product {
                    let b = &enc.set[j];
                    let prod: Vec<Rational01> = (0..width)
                        .map(|k| {
                            let d = enc.dens[k];
                            Rational01::ratio(a[k], d).mul(Rational01::ratio(b[k], d))
                        })
                        .collect();
                    pending.push(prod);
                }
                if enc.set.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
            }
        }
        for p in pending.drain(..) {
            enc.insert_rational(&p)?;
        }
        if enc.set.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
        i += 1;
    }
    Ok(enc.decode())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational01 {
        s.parse().unwrap()
    }

    #[test]
    fn chain_from_a_single_generator() {
        let out = close(1, &[vec![r("1/3")]], false, 100).unwrap();
        let mut vals: Vec<_> = out.into_iter().map(|v| v[0]).collect();
        vals.sort();
        assert_eq!(vals, vec![r("0"), r("1/3"), r("2/3"), r("1")]);
    }

    #[test]
    fn product_closure_of_one_half_is_unbounded() {
        assert_eq!(close(1, &[vec![r("1/2")]], true, 8), Err(Error::CapExceeded { cap: 8 }));
    }

    #[test]
    fn rescaling_keeps_order() {
        let out = close(2, &[vec![r("1/2"), r("1")]], true, 10_000);
        assert!(matches!(out, Err(Error::CapExceeded { .. })));
        let out = close(2, &[vec![r("1"), r("0")]], true, 100).unwrap();
        assert_eq!(out.len(), 4);
    }
}
