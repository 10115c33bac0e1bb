//! Smooth expressions over generators, rational constants and registered
//! primitives.
//!
//! [`SmoothExpr`] is the tree users build and parse; [`Poly`] is its
//! canonical form, and all semantic questions (equality, zero tests,
//! derivatives) are answered on the canonical form.

mod poly;
pub mod registry;

pub use poly::{rat, rat_to_f64, Atom, Monomial, Poly, PolyDisplay, Rational, DEFAULT_DEGREE_BOUND};
pub use registry::{CustomPrimitive, PrimId, PrimitiveRegistry};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SmoothExpr {
    Const(Rational),
    Gen(usize),
    Sum(Vec<SmoothExpr>),
    Product(Vec<SmoothExpr>),
    IntPow(Box<SmoothExpr>, u32),
    Prim(PrimId, Vec<SmoothExpr>),
}

impl SmoothExpr {
    pub fn int(n: i64) -> Self {
        SmoothExpr::Const(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        SmoothExpr::Const(Rational::zero())
    }

    pub fn one() -> Self {
        SmoothExpr::Const(Rational::one())
    }

    pub fn pow(self, e: u32) -> Self {
        SmoothExpr::IntPow(Box::new(self), e)
    }

    pub fn beta0(arg: SmoothExpr) -> Self {
        SmoothExpr::Prim(PrimId::Beta(0), vec![arg])
    }

    pub fn step(u: SmoothExpr, v: SmoothExpr) -> Self {
        SmoothExpr::Prim(PrimId::Step, vec![u, v])
    }

    pub fn to_poly(&self) -> Result<Poly> {
        Poly::from_expr(self)
    }

    /// Largest generator index referenced by the tree.
    pub fn max_generator(&self) -> Option<usize> {
        match self {
            SmoothExpr::Const(_) => None,
            SmoothExpr::Gen(i) => Some(*i),
            SmoothExpr::Sum(xs) | SmoothExpr::Product(xs) | SmoothExpr::Prim(_, xs) => {
                xs.iter().filter_map(SmoothExpr::max_generator).max()
            }
            SmoothExpr::IntPow(b, _) => b.max_generator(),
        }
    }
}

impl std::ops::Add for SmoothExpr {
    type Output = SmoothExpr;
    fn add(self, rhs: SmoothExpr) -> SmoothExpr {
        SmoothExpr::Sum(vec![self, rhs])
    }
}

impl std::ops::Mul for SmoothExpr {
    type Output = SmoothExpr;
    fn mul(self, rhs: SmoothExpr) -> SmoothExpr {
        SmoothExpr::Product(vec![self, rhs])
    }
}

impl std::ops::Sub for SmoothExpr {
    type Output = SmoothExpr;
    fn sub(self, rhs: SmoothExpr) -> SmoothExpr {
        SmoothExpr::Sum(vec![self, SmoothExpr::Product(vec![SmoothExpr::int(-1), rhs])])
    }
}

/// Canonical form of `e`, written back as a tree.
pub fn normalize(e: &SmoothExpr) -> Result<SmoothExpr> {
    Ok(Poly::from_expr(e)?.to_expr())
}

/// Same as [`normalize`] with an explicit bound on intermediate degrees.
pub fn normalize_bounded(e: &SmoothExpr, bound: u32) -> Result<SmoothExpr> {
    Ok(Poly::from_expr_bounded(e, bound)?.to_expr())
}

/// Partial derivative with respect to generator `i`, in normal form.
pub fn differentiate(e: &SmoothExpr, i: usize) -> Result<SmoothExpr> {
    Ok(Poly::from_expr(e)?.derivative(i).to_expr())
}

/// Evaluates the tree directly at a real point.
pub fn eval_numeric(e: &SmoothExpr, point: &[f64]) -> f64 {
    match e {
        SmoothExpr::Const(c) => rat_to_f64(c),
        SmoothExpr::Gen(i) => point[*i],
        SmoothExpr::Sum(xs) => xs.iter().map(|x| eval_numeric(x, point)).sum(),
        SmoothExpr::Product(xs) => xs.iter().map(|x| eval_numeric(x, point)).product(),
        SmoothExpr::IntPow(b, n) => eval_numeric(b, point).powi(*n as i32),
        SmoothExpr::Prim(id, args) => {
            let vals: Vec<f64> = args.iter().map(|a| eval_numeric(a, point)).collect();
            registry::eval_prim(*id, &vals)
        }
    }
}

/// Writes a polynomial vanishing on `{x_i = 0}` as `x_i * a` and returns `a`.
pub fn hadamard_factor(p: &Poly, i: usize) -> Result<Poly> {
    if !p.is_polynomial() {
        return Err(Error::NonPolynomial);
    }
    p.divide_by_gen(i).ok_or_else(|| {
        let mut images: Vec<Poly> = (0..=p.max_generator().unwrap_or(0).max(i))
            .map(Poly::gen)
            .collect();
        images[i] = Poly::zero();
        Error::NotDivisible {
            generator: i,
            remainder: p.substitute(&images).to_string(),
        }
    })
}

/// A bump function equal to 1 on the closed ball of radius `r_in` about
/// `center` and to 0 outside the open ball of radius `r_out`:
/// `S(r_out^2 - |x - c|^2, |x - c|^2 - r_in^2)`.
pub fn make_bump(center: &[Rational], r_in: &Rational, r_out: &Rational) -> Result<Poly> {
    if *r_in <= Rational::zero() || r_in >= r_out {
        return Err(Error::BadRadii);
    }
    let mut r2 = Poly::zero();
    for (j, c) in center.iter().enumerate() {
        let shifted = Poly::gen(j) - Poly::constant(c.clone());
        r2 = r2 + &shifted * &shifted;
    }
    let u = Poly::constant(r_out * r_out) - r2.clone();
    let v = r2 - Poly::constant(r_in * r_in);
    Ok(Poly::prim(PrimId::Step, vec![u, v]))
}
