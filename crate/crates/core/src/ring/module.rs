//! Relations for differential forms over a quotient ring.
//!
//! Over `C = R[x]/I` the degree-`k` forms are modeled as the free module on
//! `dx_T` (`|T| = k`) modulo the submodule spanned by `g dx_T` and
//! `dg ∧ dx_S` for every ideal generator `g`. Membership in that submodule is
//! decided with a Gröbner basis of the ideal
//! `<Σ_T p_T e_T for each relation> + <e_a e_b>` in the polynomial ring with
//! one extra variable `e_T` per basis element; the ideal is graded by
//! `e`-degree, so `e`-linear vectors reduce to `e`-linear normal forms.

use std::collections::HashMap;

use num_traits::One;

use super::groebner::{buchberger, DPoly, Exps, Groebner};
use super::{from_dense, to_dense};
use crate::error::Result;
use crate::expr::{Poly, Rational};

/// Sign of moving `dx_i` past the strictly smaller indices in `mask`.
pub(crate) fn insertion_sign(mask: u64, i: usize) -> i64 {
    let below = mask & ((1u64 << i) - 1);
    if below.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub(crate) fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    // Gosper's hack over the first n bits
    if k == 0 {
        return vec![0];
    }
    if k > n {
        return out;
    }
    let mut s: u64 = (1u64 << k) - 1;
    while s & !full == 0 {
        out.push(s);
        let c = s & s.wrapping_neg();
        let r = s.wrapping_add(c);
        if r == 0 {
            break;
        }
        s = (((r ^ s) >> 2) / c) | r;
    }
    out
}

#[derive(Debug)]
pub(crate) struct FormRelations {
    nvars: usize,
    index: HashMap<u64, usize>,
    masks: Vec<u64>,
    basis: Groebner,
}

impl FormRelations {
    pub fn build(nvars: usize, k: usize, generators: &[Poly]) -> Result<Self> {
        let masks = subsets_of_size(nvars, k);
        let rank = masks.len();
        let index: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let total = nvars + rank;

        let embed = |vector: &[(usize, Poly)]| -> Result<DPoly> {
            let mut terms: Vec<(Exps, Rational)> = Vec::new();
            for (slot, p) in vector {
                let d = to_dense(p, nvars)?;
                for (e, c) in d.terms {
                    let mut ext = e;
                    ext.resize(total, 0);
                    ext[nvars + slot] = 1;
                    terms.push((ext, c));
                }
            }
            Ok(DPoly::from_unsorted(terms))
        };

        let mut rels: Vec<DPoly> = Vec::new();
        for g in generators {
            for (slot, _) in masks.iter().enumerate() {
                rels.push(embed(&[(slot, g.clone())])?);
            }
            if k >= 1 {
                let grads: Vec<Poly> = (0..nvars).map(|i| g.derivative(i)).collect();
                for s in subsets_of_size(nvars, k - 1) {
                    let mut vector: Vec<(usize, Poly)> = Vec::new();
                    for (i, gi) in grads.iter().enumerate() {
                        if s & (1 << i) != 0 || gi.is_zero() {
                            continue;
                        }
                        let sign = insertion_sign(s, i);
                        vector.push((index[&(s | (1 << i))], gi.scale(&Rational::from_integer(sign.into()))));
                    }
                    if !vector.is_empty() {
                        rels.push(embed(&vector)?);
                    }
                }
            }
        }
        for a in 0..rank {
            for b in a..rank {
                let mut e = vec![0u16; total];
                e[nvars + a] += 1;
                e[nvars + b] += 1;
                rels.push(DPoly::monomial(e, Rational::one()));
            }
        }
        let basis = buchberger(&rels, total, false);
        Ok(FormRelations {
            nvars,
            index,
            masks,
            basis,
        })
    }

    /// Normal form of a degree-`k` component given as `(mask, coefficient)`.
    pub fn reduce(&self, component: &[(u64, Poly)]) -> Result<Vec<(u64, Poly)>> {
        let total = self.nvars + self.masks.len();
        let mut terms: Vec<(Exps, Rational)> = Vec::new();
        for (mask, p) in component {
            let slot = self.index[mask];
            for (e, c) in to_dense(p, self.nvars)?.terms {
                let mut ext = e;
                ext.resize(total, 0);
                ext[self.nvars + slot] = 1;
                terms.push((ext, c));
            }
        }
        let (rem, _) = self.basis.reduce(&DPoly::from_unsorted(terms));
        let mut parts: Vec<Vec<(Exps, Rational)>> = vec![Vec::new(); self.masks.len()];
        for (e, c) in rem.terms {
            let slot = (0..self.masks.len())
                .find(|s| e[self.nvars + s] == 1)
                .expect("e-linear remainder");
            parts[slot].push((e[..self.nvars].to_vec(), c));
        }
        Ok(parts
            .into_iter()
            .enumerate()
            .filter(|(_, t)| !t.is_empty())
            .map(|(slot, t)| (self.masks[slot], from_dense(&DPoly::from_unsorted(t))))
            .collect())
    }
}
