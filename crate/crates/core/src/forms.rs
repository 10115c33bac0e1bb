//! Differential forms over a ring presentation.
//!
//! A form is stored fully expanded in the coordinate basis: a map from
//! increasing index tuples (bit masks) to normal-form coefficients. For free
//! rings this is the exterior algebra on `dx_0..dx_{n-1}` with
//! `df = Σ ∂_i f dx_i`; over a quotient the coefficients are additionally
//! reduced modulo `I·Λ + dI ∧ Λ`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::expr::{Poly, Rational};
use crate::ring::module::insertion_sign;
use crate::ring::{same_ring, Ring, RingHom};

/// An increasing tuple of generator indices, as a bit mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Basis(pub u64);

impl Basis {
    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|i| self.0 & (1u64 << i) != 0).collect()
    }

    /// Sorts `idx` into a basis element, returning the permutation sign, or
    /// `None` when an index repeats.
    pub fn from_indices(idx: &[usize]) -> Option<(Basis, i64)> {
        let mut mask = 0u64;
        let mut sign = 1;
        for &i in idx {
            if i >= 64 || mask & (1 << i) != 0 {
                return None;
            }
            // dx_i is appended after everything already in the mask
            if (mask >> i).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= 1 << i;
        }
        Some((Basis(mask), sign))
    }
}

impl Ord for Basis {
    fn cmp(&self, other: &Self) -> Ordering {
        // degree first, then lexicographic on the sorted tuples
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.reverse_bits().cmp(&self.0.reverse_bits()))
    }
}

impl PartialOrd for Basis {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sign of `dx_A ∧ dx_B` relative to `dx_{A∪B}`; zero when they overlap.
pub(crate) fn wedge_sign(a: u64, b: u64) -> i64 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> j).count_ones();
        rest &= rest - 1;
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn sign_rational(s: i64) -> Rational {
    Rational::from_integer(BigInt::from(s))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialForm {
    ring: Ring,
    terms: BTreeMap<Basis, Poly>,
}

impl DifferentialForm {
    pub fn zero(ring: &Ring) -> Self {
        DifferentialForm {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// A function viewed as a 0-form.
    pub fn scalar(ring: &Ring, f: Poly) -> Result<Self> {
        DifferentialForm::from_basis_terms(ring, [(Basis(0), f)])
    }

    pub fn dx(ring: &Ring, i: usize) -> Result<Self> {
        if i >= ring.n() {
            return Err(Error::GeneratorOutOfRange {
                index: i,
                count: ring.n(),
            });
        }
        DifferentialForm::from_basis_terms(ring, [(Basis(1 << i), Poly::one())])
    }

    /// `coef · dx_{idx[0]} ∧ ... ∧ dx_{idx[k-1]}`, for any index order.
    pub fn monomial(ring: &Ring, idx: &[usize], coef: Poly) -> Result<Self> {
        DifferentialForm::from_terms(ring, [(idx.to_vec(), coef)])
    }

    pub fn from_terms(
        ring: &Ring,
        terms: impl IntoIterator<Item = (Vec<usize>, Poly)>,
    ) -> Result<Self> {
        let mut basis_terms = Vec::new();
        for (idx, coef) in terms {
            if let Some(&i) = idx.iter().find(|&&i| i >= ring.n()) {
                return Err(Error::GeneratorOutOfRange {
                    index: i,
                    count: ring.n(),
                });
            }
            if let Some((b, sign)) = Basis::from_indices(&idx) {
                basis_terms.push((b, coef.scale(&sign_rational(sign))));
            }
        }
        DifferentialForm::from_basis_terms(ring, basis_terms)
    }

    pub fn from_basis_terms(
        ring: &Ring,
        terms: impl IntoIterator<Item = (Basis, Poly)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Basis, Poly> = BTreeMap::new();
        for (b, c) in terms {
            ring.check(&c)?;
            accumulate(&mut map, b, c);
        }
        DifferentialForm::finish(ring, map)
    }

    fn finish(ring: &Ring, map: BTreeMap<Basis, Poly>) -> Result<Self> {
        let mut terms = map;
        terms.retain(|_, c| !c.is_zero());
        if !ring.is_free() {
            let mut by_degree: BTreeMap<usize, Vec<(u64, Poly)>> = BTreeMap::new();
            for (b, c) in std::mem::take(&mut terms) {
                by_degree.entry(b.degree()).or_default().push((b.0, c));
            }
            for (k, comp) in by_degree {
                for (m, c) in ring.reduce_component(k, comp)? {
                    if !c.is_zero() {
                        terms.insert(Basis(m), c);
                    }
                }
            }
        }
        Ok(DifferentialForm {
            ring: ring.clone(),
            terms,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Basis, &Poly)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn coefficient(&self, idx: &[usize]) -> Poly {
        match Basis::from_indices(idx) {
            Some((b, s)) => self
                .terms
                .get(&b)
                .map(|c| c.scale(&sign_rational(s)))
                .unwrap_or_default(),
            None => Poly::zero(),
        }
    }

    /// Degree of a nonzero homogeneous form; `None` for zero or mixed forms.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|b| b.degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.terms.keys().map(|b| b.degree()).collect();
        out.dedup();
        out
    }

    /// The homogeneous degree-`k` part.
    pub fn component(&self, k: usize) -> DifferentialForm {
        DifferentialForm {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.degree() == k)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<Self> {
        same_ring(&self.ring, &other.ring)?;
        let mut map = self.terms.clone();
        for (b, c) in &other.terms {
            accumulate(&mut map, *b, c.clone());
        }
        // sums of reduced forms stay reduced
        map.retain(|_, c| !c.is_zero());
        Ok(DifferentialForm {
            ring: self.ring.clone(),
            terms: map,
        })
    }

    pub fn neg(&self) -> Self {
        DifferentialForm {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &DifferentialForm) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut terms: BTreeMap<Basis, Poly> =
            self.terms.iter().map(|(b, p)| (*b, p.scale(c))).collect();
        terms.retain(|_, p| !p.is_zero());
        DifferentialForm {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Multiplication by a function.
    pub fn mul_function(&self, f: &Poly) -> Result<Self> {
        self.ring.check(f)?;
        let map = self.terms.iter().map(|(b, c)| (*b, f * c)).collect();
        DifferentialForm::finish(&self.ring, map)
    }

    pub fn wedge(&self, other: &DifferentialForm) -> Result<Self> {
        same_ring(&self.ring, &other.ring)?;
        let mut map = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let s = wedge_sign(a.0, b.0);
                if s == 0 {
                    continue;
                }
                let prod = ca * cb;
                let prod = if s < 0 { -prod } else { prod };
                accumulate(&mut map, Basis(a.0 | b.0), prod);
            }
        }
        DifferentialForm::finish(&self.ring, map)
    }

    /// The exterior derivative: `d(f dx_T) = Σ_i ∂_i f dx_i ∧ dx_T`.
    pub fn d(&self) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (b, c) in &self.terms {
            for i in 0..self.ring.n() {
                if b.0 & (1 << i) != 0 {
                    continue;
                }
                let di = c.derivative(i);
                if di.is_zero() {
                    continue;
                }
                let di = if insertion_sign(b.0, i) < 0 { -di } else { di };
                accumulate(&mut map, Basis(b.0 | (1 << i)), di);
            }
        }
        DifferentialForm::finish(&self.ring, map)
    }

    /// Evaluates every coefficient at a point, keyed by basis element.
    pub fn eval(&self, point: &[f64]) -> Vec<(Basis, f64)> {
        self.terms.iter().map(|(b, c)| (*b, c.eval(point))).collect()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.values().all(Poly::is_polynomial)
    }

    /// Same coefficients viewed over another ring with the same generators
    /// (used for restriction along identity-on-expressions maps).
    pub fn with_ring(&self, ring: &Ring) -> Result<Self> {
        DifferentialForm::from_basis_terms(ring, self.terms.iter().map(|(b, c)| (*b, c.clone())))
    }
}

fn accumulate(map: &mut BTreeMap<Basis, Poly>, b: Basis, c: Poly) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(b) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = std::mem::take(o.get_mut()) + c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// `a ∧ b`.
pub fn wedge(a: &DifferentialForm, b: &DifferentialForm) -> Result<DifferentialForm> {
    a.wedge(b)
}

/// `d a`.
pub fn exterior_derivative(a: &DifferentialForm) -> Result<DifferentialForm> {
    a.d()
}

/// The map on forms induced by a ring map:
/// `a_0 da_1 ∧ ... ∧ da_k ↦ f(a_0) d f(a_1) ∧ ... ∧ d f(a_k)`.
pub fn pushforward(f: &RingHom, a: &DifferentialForm) -> Result<DifferentialForm> {
    same_ring(f.source(), a.ring())?;
    let target = f.target();
    let differentials: Vec<DifferentialForm> = f
        .images()
        .iter()
        .map(|p| DifferentialForm::scalar(target, p.clone())?.d())
        .collect::<Result<_>>()?;
    let mut out = DifferentialForm::zero(target);
    for (b, c) in a.terms() {
        let mut term = DifferentialForm::scalar(target, f.apply(c)?)?;
        for i in b.indices() {
            if term.is_zero() {
                break;
            }
            term = term.wedge(&differentials[i])?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

pub struct FormDisplay<'a>(&'a DifferentialForm);

impl DifferentialForm {
    pub fn display(&self) -> FormDisplay<'_> {
        FormDisplay(self)
    }
}

impl fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = self.0;
        if form.is_zero() {
            return f.write_str("0");
        }
        let names = form.ring.names();
        for (k, (b, c)) in form.terms.iter().enumerate() {
            let coef = c.display(names).to_string();
            let term = if b.0 == 0 {
                coef
            } else {
                let basis: Vec<String> = b
                    .indices()
                    .iter()
                    .map(|&i| format!("d({})", names[i]))
                    .collect();
                let basis = basis.join("^");
                if c.is_one() {
                    basis
                } else if (-c).is_one() {
                    format!("-{basis}")
                } else if c.len() == 1 {
                    format!("{coef} {basis}")
                } else {
                    format!("({coef}) {basis}")
                }
            };
            if k == 0 {
                f.write_str(&term)?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.display(), f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::SmoothExpr as E;
    use crate::ring::RingPresentation;

    fn ring2() -> Ring {
        RingPresentation::free_named(vec!["x".into(), "y".into()])
    }
    fn p(e: E) -> Poly {
        Poly::from_expr(&e).unwrap()
    }
    fn x() -> E {
        E::Gen(0)
    }
    fn y() -> E {
        E::Gen(1)
    }

    #[test]
    fn basis_order_and_signs() {
        assert!(Basis(0b011) < Basis(0b101));
        assert!(Basis(0b101) < Basis(0b110));
        assert!(Basis(0b100) < Basis(0b011));
        assert_eq!(Basis::from_indices(&[1, 0]), Some((Basis(0b11), -1)));
        assert_eq!(Basis::from_indices(&[2, 0, 1]), Some((Basis(0b111), 1)));
        assert_eq!(Basis::from_indices(&[1, 1]), None);
        assert_eq!(wedge_sign(0b10, 0b01), -1);
        assert_eq!(wedge_sign(0b01, 0b10), 1);
        assert_eq!(wedge_sign(0b110, 0b001), 1);
    }

    #[test]
    fn wedge_examples() {
        let r = ring2();
        let dx = DifferentialForm::dx(&r, 0).unwrap();
        let dy = DifferentialForm::dx(&r, 1).unwrap();
        assert!(dx.wedge(&dx).unwrap().is_zero());
        assert_eq!(dx.wedge(&dy).unwrap(), dy.wedge(&dx).unwrap().neg());
        let a = DifferentialForm::monomial(&r, &[1], p(x())).unwrap();
        let b = DifferentialForm::monomial(&r, &[0], p(y())).unwrap();
        let want = DifferentialForm::monomial(&r, &[0, 1], p(E::int(-1) * x() * y())).unwrap();
        assert_eq!(a.wedge(&b).unwrap(), want);
    }

    #[test]
    fn derivative_examples() {
        let r = ring2();
        let fx = DifferentialForm::scalar(&r, p(x())).unwrap();
        assert_eq!(fx.d().unwrap(), DifferentialForm::dx(&r, 0).unwrap());
        let fxy = DifferentialForm::scalar(&r, p(x() * y())).unwrap();
        let want = DifferentialForm::from_terms(&r, [(vec![0], p(y())), (vec![1], p(x()))]).unwrap();
        assert_eq!(fxy.d().unwrap(), want);
        let a = DifferentialForm::monomial(&r, &[1], p(x().pow(2))).unwrap();
        let want = DifferentialForm::monomial(&r, &[0, 1], p(E::int(2) * x())).unwrap();
        assert_eq!(a.d().unwrap(), want);
        assert_eq!(a.d().unwrap().to_string(), "2*x d(x)^d(y)");
    }

    #[test]
    fn pushforward_examples() {
        let src = RingPresentation::free_named(vec!["x".into()]);
        let tgt = RingPresentation::free_named(vec!["u".into()]);
        let f = RingHom::new(src.clone(), tgt.clone(), vec![p(x().pow(2))]).unwrap();
        let dx = DifferentialForm::dx(&src, 0).unwrap();
        let want = DifferentialForm::monomial(&tgt, &[0], p(E::int(2) * x())).unwrap();
        assert_eq!(pushforward(&f, &dx).unwrap(), want);

        let r = ring2();
        let a = DifferentialForm::monomial(&r, &[0, 1], p(x() + y())).unwrap();
        assert_eq!(pushforward(&RingHom::identity(&r), &a).unwrap(), a);

        let diag = RingHom::new(r.clone(), tgt, vec![Poly::gen(0), Poly::gen(0)]).unwrap();
        let dxdy = DifferentialForm::monomial(&r, &[0, 1], Poly::one()).unwrap();
        assert!(pushforward(&diag, &dxdy).unwrap().is_zero());
    }

    #[test]
    fn ring_mismatch() {
        let a = DifferentialForm::dx(&ring2(), 0).unwrap();
        let b = DifferentialForm::dx(&RingPresentation::free(2), 0).unwrap();
        assert_eq!(a.wedge(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn quotient_forms_reduce() {
        // over R[x,y]/<xy>: y dx + x dy = d(xy) = 0 and xy dx = 0
        let r = RingPresentation::quotient(vec!["x".into(), "y".into()], vec![p(x() * y())]).unwrap();
        let dxy = DifferentialForm::from_terms(&r, [(vec![0], p(y())), (vec![1], p(x()))]).unwrap();
        assert!(dxy.is_zero());
        let f = DifferentialForm::monomial(&r, &[0], p(x() * y())).unwrap();
        assert!(f.is_zero());
        // y dx alone survives; x dy is its negative
        let ydx = DifferentialForm::monomial(&r, &[0], p(y())).unwrap();
        let xdy = DifferentialForm::monomial(&r, &[1], p(x())).unwrap();
        assert!(!ydx.is_zero());
        assert_eq!(xdy, ydx.neg());
        // d of a reduced class is well defined
        let g = DifferentialForm::scalar(&r, p(x() * y() + x())).unwrap();
        assert_eq!(g.d().unwrap(), DifferentialForm::dx(&r, 0).unwrap());
    }
}
