//! Vector fields acting on functions and forms.
//!
//! A vector field is a derivation `Σ a_i ∂/∂x_i`. It acts on forms by
//! contraction `ι_v` (the degree −1 derivation with `ι_v dx_i = a_i`) and by
//! the Lie derivative, which is *defined* here by `L_v = d ι_v + ι_v d`.

mod operator;
mod verify;

pub use operator::{ad_d, graded_commutator, op_apply, GradedOperator};
pub use verify::{
    disagreement, lie_nonlinearity_witness, naturality_check, spanning_forms, verify_cartan,
    CartanIdentity, IdentityReport, IdentityResult,
};

use crate::error::{Error, Result};
use crate::expr::Poly;
use crate::forms::{Basis, DifferentialForm};
use crate::ring::{same_ring, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    ring: Ring,
    coefficients: Vec<Poly>,
}

impl VectorField {
    pub fn new(ring: &Ring, coefficients: Vec<Poly>) -> Result<Self> {
        if coefficients.len() != ring.n() {
            return Err(Error::ArityMismatch {
                what: "vector field coefficients",
                expected: ring.n(),
                got: coefficients.len(),
            });
        }
        let coefficients = coefficients
            .iter()
            .map(|c| {
                ring.check(c)?;
                ring.reduce(c)
            })
            .collect::<Result<_>>()?;
        Ok(VectorField {
            ring: ring.clone(),
            coefficients,
        })
    }

    pub fn zero(ring: &Ring) -> Self {
        VectorField {
            ring: ring.clone(),
            coefficients: vec![Poly::zero(); ring.n()],
        }
    }

    /// `∂/∂x_i`.
    pub fn coordinate(ring: &Ring, i: usize) -> Result<Self> {
        let mut c = vec![Poly::zero(); ring.n()];
        *c.get_mut(i).ok_or(Error::GeneratorOutOfRange {
            index: i,
            count: ring.n(),
        })? = Poly::one();
        VectorField::new(ring, c)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coefficients(&self) -> &[Poly] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Poly::is_zero)
    }

    /// `v(f) = Σ a_i ∂_i f`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        self.ring.check(f)?;
        let mut out = Poly::zero();
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let di = f.derivative(i);
            if !di.is_zero() {
                out = out + a * &di;
            }
        }
        self.ring.reduce(&out)
    }

    /// `[v, w]` with coefficients `v(w_i) - w(v_i)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        same_ring(&self.ring, &other.ring)?;
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(vi, wi)| Ok(self.apply(wi)? - other.apply(vi)?))
            .collect::<Result<_>>()?;
        VectorField::new(&self.ring, coefficients)
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        same_ring(&self.ring, &other.ring)?;
        let c = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a + b)
            .collect();
        VectorField::new(&self.ring, c)
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        same_ring(&self.ring, &other.ring)?;
        let c = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a - b)
            .collect();
        VectorField::new(&self.ring, c)
    }

    /// `f · v`.
    pub fn scale(&self, f: &Poly) -> Result<VectorField> {
        let c = self.coefficients.iter().map(|a| f * a).collect();
        VectorField::new(&self.ring, c)
    }

    /// `ι_v`: on `dx_{i_1} ∧ ... ∧ dx_{i_k}` gives
    /// `Σ_s (-1)^{s+1} a_{i_s} dx_{i_1} ∧ ...(omit s)... ∧ dx_{i_k}`.
    pub fn contract(&self, form: &DifferentialForm) -> Result<DifferentialForm> {
        same_ring(&self.ring, form.ring())?;
        let mut out: Vec<(Basis, Poly)> = Vec::new();
        for (b, c) in form.terms() {
            for (s, i) in b.indices().into_iter().enumerate() {
                let a = &self.coefficients[i];
                if a.is_zero() {
                    continue;
                }
                let term = a * c;
                let term = if s % 2 == 0 { term } else { -term };
                out.push((Basis(b.0 & !(1 << i)), term));
            }
        }
        DifferentialForm::from_basis_terms(&self.ring, out)
    }

    /// `L_v = d ∘ ι_v + ι_v ∘ d`.
    pub fn lie_derivative(&self, form: &DifferentialForm) -> Result<DifferentialForm> {
        let first = self.contract(form)?.d()?;
        let second = self.contract(&form.d()?)?;
        first.add(&second)
    }

    /// Coefficients rendered with the ring's generator names.
    pub fn display_coefficients(&self) -> Vec<String> {
        self.coefficients
            .iter()
            .map(|c| c.display(self.ring.names()).to_string())
            .collect()
    }
}

/// `v(f)`.
pub fn vf_apply(v: &VectorField, f: &Poly) -> Result<Poly> {
    v.apply(f)
}

/// `[v, w]`.
pub fn vf_bracket(v: &VectorField, w: &VectorField) -> Result<VectorField> {
    v.bracket(w)
}

/// `ι_v a`.
pub fn contract(v: &VectorField, a: &DifferentialForm) -> Result<DifferentialForm> {
    v.contract(a)
}

/// `L_v a`.
pub fn lie_derivative(v: &VectorField, a: &DifferentialForm) -> Result<DifferentialForm> {
    v.lie_derivative(a)
}

pub(crate) fn check_forms(ring: &Ring, forms: &[DifferentialForm]) -> Result<()> {
    forms.iter().try_for_each(|f| same_ring(ring, f.ring()))
}
