//! Dense-exponent polynomials in graded lexicographic order and Buchberger's
//! algorithm with optional cofactor tracking.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_traits::{One, Zero};

use crate::expr::Rational;

pub(crate) type Exps = Vec<u16>;

/// Graded lex: total degree first, then the first differing exponent
/// (`x0 > x1 > ...`).
pub(crate) fn grlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    })
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn sub_exps(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_exps(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn coprime(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Terms sorted ascending in [`grlex`]; the leading term is last.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct DPoly {
    pub terms: Vec<(Exps, Rational)>,
}

impl DPoly {
    pub fn zero() -> Self {
        DPoly::default()
    }

    pub fn monomial(exps: Exps, c: Rational) -> Self {
        if c.is_zero() {
            return DPoly::zero();
        }
        DPoly {
            terms: vec![(exps, c)],
        }
    }

    pub fn from_unsorted(mut terms: Vec<(Exps, Rational)>) -> Self {
        terms.sort_by(|a, b| grlex(&a.0, &b.0));
        let mut out: Vec<(Exps, Rational)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        DPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Exps, Rational)> {
        self.terms.last()
    }

    /// `self + c * x^shift * other`
    pub fn add_scaled(&self, c: &Rational, shift: &[u16], other: &DPoly) -> DPoly {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let scaled = other
            .terms
            .iter()
            .map(|(e, k)| (add_exps(e, shift), k * c));
        merge(self.terms.iter().cloned(), scaled)
    }

    pub fn add(&self, other: &DPoly) -> DPoly {
        merge(self.terms.iter().cloned(), other.terms.iter().cloned())
    }

    pub fn scale(&self, c: &Rational) -> DPoly {
        if c.is_zero() {
            return DPoly::zero();
        }
        DPoly {
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &DPoly) -> DPoly {
        let mut acc = DPoly::zero();
        for (e, c) in &other.terms {
            acc = acc.add_scaled(c, e, self);
        }
        acc
    }
}

fn merge(
    a: impl Iterator<Item = (Exps, Rational)>,
    b: impl Iterator<Item = (Exps, Rational)>,
) -> DPoly {
    let mut a = a.peekable();
    let mut b = b.peekable();
    let mut out = Vec::new();
    loop {
        let ord = match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => grlex(&x.0, &y.0),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => break,
        };
        match ord {
            Ordering::Less => out.push(a.next().unwrap()),
            Ordering::Greater => out.push(b.next().unwrap()),
            Ordering::Equal => {
                let (e, x) = a.next().unwrap();
                let (_, y) = b.next().unwrap();
                let s = x + y;
                if !s.is_zero() {
                    out.push((e, s));
                }
            }
        }
    }
    DPoly { terms: out }
}

/// A reduced Gröbner basis. When cofactors are tracked, `cofactors[k][j]`
/// is the coefficient of input generator `j` in basis element `k`.
#[derive(Clone, Debug)]
pub(crate) struct Groebner {
    pub ninputs: usize,
    pub elems: Vec<DPoly>,
    pub cofactors: Option<Vec<Vec<DPoly>>>,
}

pub(crate) struct Division {
    pub quotients: Vec<DPoly>,
    pub remainder: DPoly,
}

/// Multivariate division of `p` by `basis`, reducing every term.
pub(crate) fn divide(p: &DPoly, basis: &[DPoly], want_quotients: bool) -> Division {
    let mut quotients = vec![DPoly::zero(); if want_quotients { basis.len() } else { 0 }];
    let mut remainder_terms: Vec<(Exps, Rational)> = Vec::new();
    let mut work = p.clone();
    while let Some((lt, lc)) = work.terms.last().cloned() {
        let hit = basis.iter().enumerate().find(|(_, g)| {
            g.leading()
                .map(|(ge, _)| divides(ge, &lt))
                .unwrap_or(false)
        });
        match hit {
            Some((k, g)) => {
                let (ge, gc) = g.leading().unwrap();
                let shift = sub_exps(&lt, ge);
                let coef = &lc / gc;
                work = work.add_scaled(&-coef.clone(), &shift, g);
                if want_quotients {
                    quotients[k] = quotients[k].add(&DPoly::monomial(shift, coef));
                }
            }
            None => {
                remainder_terms.push(work.terms.pop().unwrap());
            }
        }
    }
    remainder_terms.reverse();
    Division {
        quotients,
        remainder: DPoly {
            terms: remainder_terms,
        },
    }
}

fn combine(
    a: &[DPoly],
    ca: &Rational,
    sa: &[u16],
    b: &[DPoly],
    cb: &Rational,
    sb: &[u16],
) -> Vec<DPoly> {
    a.iter()
        .zip(b)
        .map(|(x, y)| DPoly::zero().add_scaled(ca, sa, x).add_scaled(cb, sb, y))
        .collect()
}

fn subtract_quotients(cof: &mut [DPoly], quotients: &[DPoly], cofs: &[Vec<DPoly>]) {
    let minus_one = -Rational::one();
    for (q, gcof) in quotients.iter().zip(cofs) {
        if q.is_zero() {
            continue;
        }
        for (slot, g) in cof.iter_mut().zip(gcof) {
            let prod = q.mul(g);
            *slot = slot.add(&prod.scale(&minus_one));
        }
    }
}

/// Buchberger's algorithm with the product and chain criteria, followed by
/// minimalization and interreduction. The result is monic and reduced, hence
/// independent of the order of the inputs.
pub(crate) fn buchberger(gens: &[DPoly], nvars: usize, track: bool) -> Groebner {
    let ninputs = gens.len();
    let mut elems: Vec<DPoly> = Vec::new();
    let mut cofs: Vec<Vec<DPoly>> = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        elems.push(g.clone());
        if track {
            let mut unit = vec![DPoly::zero(); ninputs];
            unit[j] = DPoly::monomial(vec![0; nvars], Rational::one());
            cofs.push(unit);
        }
    }

    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..elems.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }

    let lt = |elems: &[DPoly], k: usize| elems[k].leading().unwrap().0.clone();

    while !pending.is_empty() {
        // normal selection strategy: smallest lcm first, ties by index
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = lcm(&lt(&elems, a.0), &lt(&elems, a.1));
                let lb = lcm(&lt(&elems, b.0), &lt(&elems, b.1));
                grlex(&la, &lb).then(a.cmp(b))
            })
            .unwrap();
        pending.remove(&(i, j));

        let (ei, ej) = (lt(&elems, i), lt(&elems, j));
        if coprime(&ei, &ej) {
            continue;
        }
        let l = lcm(&ei, &ej);
        let chain = (0..elems.len()).any(|k| {
            k != i
                && k != j
                && divides(&lt(&elems, k), &l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }

        let ci = Rational::one() / &elems[i].leading().unwrap().1;
        let cj = -Rational::one() / &elems[j].leading().unwrap().1;
        let (si, sj) = (sub_exps(&l, &ei), sub_exps(&l, &ej));
        let s = DPoly::zero()
            .add_scaled(&ci, &si, &elems[i])
            .add_scaled(&cj, &sj, &elems[j]);
        let div = divide(&s, &elems, track);
        if div.remainder.is_zero() {
            continue;
        }
        if track {
            let mut cof = combine(&cofs[i], &ci, &si, &cofs[j], &cj, &sj);
            subtract_quotients(&mut cof, &div.quotients, &cofs);
            cofs.push(cof);
        }
        let new = elems.len();
        elems.push(div.remainder);
        for k in 0..new {
            pending.insert((k, new));
        }
    }

    // minimalize: drop elements whose leading monomial another one divides
    let mut keep: Vec<usize> = Vec::new();
    for k in 0..elems.len() {
        let ek = lt(&elems, k);
        let redundant = (0..elems.len()).any(|m| {
            if m == k {
                return false;
            }
            let em = lt(&elems, m);
            divides(&em, &ek) && (em != ek || m < k)
        });
        if !redundant {
            keep.push(k);
        }
    }
    let mut basis: Vec<DPoly> = keep.iter().map(|&k| elems[k].clone()).collect();
    let mut bcofs: Vec<Vec<DPoly>> = if track {
        keep.iter().map(|&k| cofs[k].clone()).collect()
    } else {
        Vec::new()
    };

    // interreduce and make monic
    for k in 0..basis.len() {
        let others: Vec<DPoly> = basis
            .iter()
            .enumerate()
            .map(|(m, g)| if m == k { DPoly::zero() } else { g.clone() })
            .collect();
        let div = divide(&basis[k], &others, track);
        if track {
            let mut cof = bcofs[k].clone();
            subtract_quotients(&mut cof, &div.quotients, &bcofs);
            bcofs[k] = cof;
        }
        basis[k] = div.remainder;
        let inv = Rational::one() / &basis[k].leading().unwrap().1;
        basis[k] = basis[k].scale(&inv);
        if track {
            bcofs[k] = bcofs[k].iter().map(|c| c.scale(&inv)).collect();
        }
    }
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by(|&a, &b| grlex(&lt(&basis, a), &lt(&basis, b)));
    Groebner {
        ninputs,
        elems: order.iter().map(|&k| basis[k].clone()).collect(),
        cofactors: track.then(|| order.iter().map(|&k| bcofs[k].clone()).collect()),
    }
}

impl Groebner {
    /// Reduces `p` to normal form; with cofactors tracked, also expresses
    /// `p - remainder` in terms of the input generators.
    pub fn reduce(&self, p: &DPoly) -> (DPoly, Option<Vec<DPoly>>) {
        let track = self.cofactors.is_some();
        let div = divide(p, &self.elems, track);
        let cof = self.cofactors.as_ref().map(|cofs| {
            let mut out = vec![DPoly::zero(); self.ninputs];
            for (q, gcof) in div.quotients.iter().zip(cofs) {
                for (slot, g) in out.iter_mut().zip(gcof) {
                    *slot = slot.add(&q.mul(g));
                }
            }
            out
        });
        (div.remainder, cof)
    }
}
