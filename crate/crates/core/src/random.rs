//! Seeded generators for the randomized suites. Everything is driven by a
//! `ChaCha8Rng`, so a seed fixes every draw on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartan::{GradedOperator, VectorField};
use crate::error::Result;
use crate::expr::{Poly, PrimId, Rational, SmoothExpr};
use crate::forms::{Basis, DifferentialForm};
use crate::ring::{Ring, RingHom, RingPresentation};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero rational with small numerator and denominator.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut n: i64 = rng.random_range(-4..=4);
    if n == 0 {
        n = 1;
    }
    let d: i64 = if rng.random_bool(0.25) { 2 } else { 1 };
    Rational::new(n.into(), d.into())
}

/// A monomial in the listed generators of total degree at most `max_degree`.
pub fn monomial<R: Rng>(rng: &mut R, gens: &[usize], max_degree: u32) -> Poly {
    let degree = rng.random_range(0..=max_degree);
    let mut m = Poly::one();
    for _ in 0..degree {
        if gens.is_empty() {
            break;
        }
        m = m * Poly::gen(gens[rng.random_range(0..gens.len())]);
    }
    m
}

/// A polynomial in the listed generators with up to `max_terms` terms.
pub fn poly_in<R: Rng>(rng: &mut R, gens: &[usize], max_degree: u32, max_terms: usize) -> Poly {
    let terms = rng.random_range(0..=max_terms);
    let mut p = Poly::zero();
    for _ in 0..terms {
        p = p + monomial(rng, gens, max_degree).scale(&small_rational(rng));
    }
    p
}

pub fn poly<R: Rng>(rng: &mut R, nvars: usize, max_degree: u32, max_terms: usize) -> Poly {
    let gens: Vec<usize> = (0..nvars).collect();
    poly_in(rng, &gens, max_degree, max_terms)
}

pub fn vector_field<R: Rng>(rng: &mut R, ring: &Ring, max_degree: u32) -> VectorField {
    let c = (0..ring.n()).map(|_| poly(rng, ring.n(), max_degree, 3)).collect();
    VectorField::new(ring, c).expect("polynomial coefficients on the ring's generators")
}

/// A form with up to `max_terms` terms of mixed degrees.
pub fn form<R: Rng>(rng: &mut R, ring: &Ring, max_degree: u32, max_terms: usize) -> DifferentialForm {
    let n = ring.n();
    let terms: Vec<(Basis, Poly)> = (0..rng.random_range(1..=max_terms))
        .map(|_| {
            let mask = if n == 0 { 0 } else { rng.random_range(0..(1u64 << n)) };
            (Basis(mask), poly(rng, n, max_degree, 2))
        })
        .collect();
    DifferentialForm::from_basis_terms(ring, terms).expect("polynomial coefficients")
}

/// A homogeneous form of degree `k`.
pub fn form_of_degree<R: Rng>(rng: &mut R, ring: &Ring, k: usize, max_degree: u32) -> DifferentialForm {
    let n = ring.n();
    let masks: Vec<u64> = (0..(1u64 << n)).filter(|m| m.count_ones() as usize == k).collect();
    let terms: Vec<(Basis, Poly)> = (0..rng.random_range(1..=3))
        .map(|_| {
            let mask = masks[rng.random_range(0..masks.len())];
            (Basis(mask), poly(rng, n, max_degree, 2))
        })
        .collect();
    DifferentialForm::from_basis_terms(ring, terms).expect("polynomial coefficients")
}

/// A random operator tree of the given depth built from `d`, `ι`, `L`,
/// composition, scaling and sums of equal degree.
pub fn operator<R: Rng>(rng: &mut R, ring: &Ring, depth: u32) -> GradedOperator {
    if depth == 0 || rng.random_bool(0.3) {
        return match rng.random_range(0..3) {
            0 => GradedOperator::ExteriorD,
            1 => GradedOperator::Contraction(vector_field(rng, ring, 2)),
            _ => GradedOperator::Lie(vector_field(rng, ring, 2)),
        };
    }
    match rng.random_range(0..3) {
        0 => GradedOperator::compose(operator(rng, ring, depth - 1), operator(rng, ring, depth - 1)),
        1 => GradedOperator::scale(poly(rng, ring.n(), 1, 2), operator(rng, ring, depth - 1)),
        _ => {
            let a = operator(rng, ring, depth - 1);
            let b = operator(rng, ring, depth - 1);
            GradedOperator::sum(vec![a.clone(), b.clone()])
                .unwrap_or_else(|_| GradedOperator::compose(a, b))
        }
    }
}

/// An expression tree that may call primitives; total degree stays small.
pub fn expr<R: Rng>(rng: &mut R, nvars: usize, depth: u32) -> SmoothExpr {
    if depth == 0 || rng.random_bool(0.25) {
        return if nvars > 0 && rng.random_bool(0.6) {
            SmoothExpr::Gen(rng.random_range(0..nvars))
        } else {
            SmoothExpr::Const(small_rational(rng))
        };
    }
    match rng.random_range(0..6) {
        0 | 1 => SmoothExpr::Sum((0..rng.random_range(2..=3)).map(|_| expr(rng, nvars, depth - 1)).collect()),
        2 => SmoothExpr::Product((0..2).map(|_| expr(rng, nvars, depth - 1)).collect()),
        3 => SmoothExpr::IntPow(Box::new(expr(rng, nvars, depth - 1)), rng.random_range(0..=2)),
        4 => {
            let id = [PrimId::Beta(0), PrimId::Beta(1), PrimId::Exp, PrimId::Sin, PrimId::Cos]
                [rng.random_range(0..5)];
            SmoothExpr::Prim(id, vec![expr(rng, nvars, depth - 1)])
        }
        _ => SmoothExpr::Prim(
            PrimId::Step,
            vec![expr(rng, nvars, depth - 1), expr(rng, nvars, depth - 1)],
        ),
    }
}

/// An `f`-related triple `(f, v, w)`. The source is `ℝ^m` with generators
/// `x0..`, the target `ℝ^{m+k}`, and `f(x_i) = u_i + h_i(u_m, ..., u_{m+k-1})`.
/// Any `w` with `w_i = f(v_i) - Σ_j w_{m+j} ∂_{m+j} h_i` is related to `v`.
pub fn related_triple<R: Rng>(
    rng: &mut R,
    m: usize,
    k: usize,
) -> Result<(RingHom, VectorField, VectorField)> {
    let source = RingPresentation::free(m);
    let target = RingPresentation::free(m + k);
    let extra: Vec<usize> = (m..m + k).collect();
    let shifts: Vec<Poly> = (0..m).map(|_| poly_in(rng, &extra, 2, 2)).collect();
    let images: Vec<Poly> = shifts
        .iter()
        .enumerate()
        .map(|(i, h)| Poly::gen(i) + h.clone())
        .collect();
    let f = RingHom::new(source.clone(), target.clone(), images)?;
    let v = vector_field(rng, &source, 2);
    let all: Vec<usize> = (0..m + k).collect();
    let tail: Vec<Poly> = (0..k).map(|_| poly_in(rng, &all, 1, 2)).collect();
    let mut coeffs = Vec::with_capacity(m + k);
    for (vi, h) in v.coefficients().iter().zip(&shifts) {
        let mut wi = f.apply(vi)?;
        for (j, c) in tail.iter().enumerate() {
            wi = wi - c * &h.derivative(m + j);
        }
        coeffs.push(wi);
    }
    coeffs.extend(tail);
    let w = VectorField::new(&target, coeffs)?;
    Ok((f, v, w))
}
