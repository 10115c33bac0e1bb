//! Derivations of a zero set `M = Z(I) ⊂ ℝ^m`.
//!
//! Derivations of the ring of functions on `M` are the quotient `D / J`,
//! where `D` is the module of ambient vector fields with `V(I) ⊆ I` and `J`
//! the fields whose coefficients all lie in `I`. Neither module is ever
//! materialized: both are membership predicates, and classes are carried by
//! a certified representative.
//!
//! Tangency is only checked on the generators `g_j` of `I`. That suffices:
//! `V(Σ h_j g_j) = Σ h_j V(g_j) + Σ V(h_j) g_j`, and both sums lie in `I`
//! once every `V(g_j)` does.

use std::sync::Arc;

use crate::cartan::VectorField;
use crate::error::{Error, Result};
use crate::expr::{hadamard_factor, Poly};
use crate::ring::{IdealPresentation, Ring, RingPresentation};

/// An ambient vector field together with proof that it preserves `I`:
/// `certificates[k][j]` is the coefficient of `g_j` in `V(g_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentField {
    field: VectorField,
    quotient: Ring,
    certificates: Vec<Vec<Poly>>,
}

impl TangentField {
    /// Certifies `v` against the ideal of `quotient`. The field must live on
    /// a free ring with the same generators.
    pub fn certify(v: &VectorField, quotient: &Ring) -> Result<TangentField> {
        let ambient = v.ring();
        if !ambient.is_free() {
            return Err(Error::Invalid(
                "tangent fields are given on the ambient free ring".into(),
            ));
        }
        if ambient.n() != quotient.n() {
            return Err(Error::RingMismatch);
        }
        if !v.coefficients().iter().all(Poly::is_polynomial) {
            return Err(Error::NonPolynomial);
        }
        let ideal = quotient.ideal();
        let mut certificates = Vec::with_capacity(ideal.generators().len());
        for (k, g) in ideal.generators().iter().enumerate() {
            let image = v.apply(g)?;
            let m = ideal.member(&image)?;
            match (m.member, m.cofactors) {
                (true, Some(c)) => certificates.push(c),
                _ => {
                    return Err(Error::NotTangent {
                        generator: k,
                        reduction: ideal.reduce(&image)?.display(quotient.names()).to_string(),
                    })
                }
            }
        }
        Ok(TangentField {
            field: v.clone(),
            quotient: quotient.clone(),
            certificates,
        })
    }

    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn quotient(&self) -> &Ring {
        &self.quotient
    }

    pub fn ideal(&self) -> &IdealPresentation {
        self.quotient.ideal()
    }

    pub fn certificates(&self) -> &[Vec<Poly>] {
        &self.certificates
    }

    /// Re-checks `V(g_k) - Σ_j c_kj g_j = 0` for every generator.
    pub fn verify(&self) -> Result<bool> {
        let gens = self.ideal().generators();
        if self.certificates.len() != gens.len() {
            return Ok(false);
        }
        for (g, cert) in gens.iter().zip(&self.certificates) {
            if cert.len() != gens.len() {
                return Ok(false);
            }
            let combo = cert
                .iter()
                .zip(gens)
                .fold(Poly::zero(), |acc, (c, gj)| acc + c * gj);
            if !(self.field.apply(g)? - combo).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `reduce(V(f))`: the induced derivation on the quotient.
    pub fn act(&self, f: &Poly) -> Result<Poly> {
        self.quotient.reduce(&self.field.apply(f)?)
    }
}

/// Builds the quotient ring on the field's generator names.
pub fn preserves_ideal(v: &VectorField, ideal: &IdealPresentation) -> Result<TangentField> {
    let quotient = RingPresentation::new(v.ring().names().to_vec(), ideal.clone())?;
    TangentField::certify(v, &quotient)
}

/// `V ∈ J`: every coefficient lies in `I`.
pub fn in_j(v: &VectorField, ideal: &IdealPresentation) -> Result<bool> {
    if v.ring().n() != ideal.nvars() {
        return Err(Error::RingMismatch);
    }
    for a in v.coefficients() {
        if !ideal.member(a)?.member {
            return Ok(false);
        }
    }
    Ok(true)
}

/// With a dense-interior zero set, `J` is the zero module.
pub fn vanishes_on_dense_interior(v: &VectorField) -> bool {
    v.is_zero()
}

/// A coset `V + J` in `D / J`.
#[derive(Clone, Debug)]
pub struct DerClass {
    representative: TangentField,
}

impl DerClass {
    pub fn new(representative: TangentField) -> Self {
        DerClass { representative }
    }

    pub fn from_field(v: &VectorField, quotient: &Ring) -> Result<Self> {
        Ok(DerClass::new(TangentField::certify(v, quotient)?))
    }

    pub fn zero(ambient: &Ring, quotient: &Ring) -> Result<Self> {
        DerClass::from_field(&VectorField::zero(ambient), quotient)
    }

    pub fn representative(&self) -> &TangentField {
        &self.representative
    }

    pub fn field(&self) -> &VectorField {
        &self.representative.field
    }

    pub fn quotient(&self) -> &Ring {
        &self.representative.quotient
    }

    fn check_same(&self, other: &DerClass) -> Result<()> {
        let (a, b) = (self.quotient(), other.quotient());
        if Arc::ptr_eq(a, b) || a.ideal() == b.ideal() {
            return Ok(());
        }
        if a.n() == b.n() && a.ideal().groebner_basis() == b.ideal().groebner_basis() {
            return Ok(());
        }
        Err(Error::IdealMismatch)
    }

    pub fn add(&self, other: &DerClass) -> Result<DerClass> {
        self.check_same(other)?;
        DerClass::from_field(&self.field().add(other.field())?, self.quotient())
    }

    pub fn sub(&self, other: &DerClass) -> Result<DerClass> {
        self.check_same(other)?;
        DerClass::from_field(&self.field().sub(other.field())?, self.quotient())
    }

    /// `g · [V]`.
    pub fn scale(&self, g: &Poly) -> Result<DerClass> {
        DerClass::from_field(&self.field().scale(g)?, self.quotient())
    }

    pub fn is_zero(&self) -> Result<bool> {
        in_j(self.field(), self.quotient().ideal())
    }
}

/// `A = B` in `D / J`.
pub fn class_equal(a: &DerClass, b: &DerClass) -> Result<bool> {
    a.sub(b)?.is_zero()
}

/// The bracket descends to `D / J`; the result is re-certified.
pub fn class_bracket(a: &DerClass, b: &DerClass) -> Result<DerClass> {
    a.check_same(b)?;
    DerClass::from_field(&a.field().bracket(b.field())?, a.quotient())
}

fn is_cross(ideal: &IdealPresentation) -> bool {
    let xy = Poly::gen(0) * Poly::gen(1);
    ideal.nvars() == 2 && ideal.groebner_basis() == vec![xy]
}

/// For `I = <xy>` a tangent field is `x a_1 ∂x + y a_2 ∂y`, and its class is
/// determined by the axis restrictions `(a_1(x, 0), a_2(0, y))`.
pub fn canonical_pair_cross(a: &DerClass) -> Result<(Poly, Poly)> {
    if !is_cross(a.quotient().ideal()) {
        return Err(Error::WrongIdeal);
    }
    let c = a.field().coefficients();
    let a1 = hadamard_factor(&c[0], 0)?;
    let a2 = hadamard_factor(&c[1], 1)?;
    let zero = Poly::zero();
    let p = a1.substitute(&[Poly::gen(0), zero.clone()]);
    let q = a2.substitute(&[zero, Poly::gen(1)]);
    Ok((p, q))
}
