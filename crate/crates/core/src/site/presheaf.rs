use std::collections::BTreeMap;

use rayon::prelude::*;

use super::glue::form_disagreement;
use super::OpenPoset;
use crate::cartan::{verify_cartan, IdentityReport, VectorField};
use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::ring::{same_ring, Ring};

/// The forms complex of one ring placed over every open of a poset.
#[derive(Clone, Debug)]
pub struct PresheafCDGA {
    poset: OpenPoset,
    ring: Ring,
}

impl PresheafCDGA {
    pub fn new(poset: OpenPoset, ring: Ring) -> Result<Self> {
        if let Some(d) = poset.box_dim() {
            if d != ring.n() {
                return Err(Error::ArityMismatch {
                    what: "box dimension",
                    expected: ring.n(),
                    got: d,
                });
            }
        }
        Ok(PresheafCDGA { poset, ring })
    }

    pub fn poset(&self) -> &OpenPoset {
        &self.poset
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// `ρ^U_V`, defined when `V ⊆ U`.
    pub fn restrict(&self, a: &DifferentialForm, from: usize, to: usize) -> Result<DifferentialForm> {
        same_ring(&self.ring, a.ring())?;
        if from >= self.poset.len() || to >= self.poset.len() || !self.poset.leq(to, from) {
            return Err(Error::Invalid(format!(
                "no restriction from open {from} to open {to}"
            )));
        }
        Ok(a.clone())
    }
}

/// One vector field per open.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalDerivationFamily {
    fields: Vec<VectorField>,
}

impl LocalDerivationFamily {
    pub fn new(p: &PresheafCDGA, by_name: &BTreeMap<String, VectorField>) -> Result<Self> {
        let mut fields = Vec::with_capacity(p.poset.len());
        for open in p.poset.opens() {
            let v = by_name
                .get(&open.name)
                .ok_or_else(|| Error::Invalid(format!("no field given on open {}", open.name)))?;
            same_ring(&p.ring, v.ring())?;
            fields.push(v.clone());
        }
        Ok(LocalDerivationFamily { fields })
    }

    /// The family of restrictions of one global field.
    pub fn from_global(p: &PresheafCDGA, v: &VectorField) -> Result<Self> {
        same_ring(&p.ring, v.ring())?;
        Ok(LocalDerivationFamily {
            fields: vec![v.clone(); p.poset.len()],
        })
    }

    pub fn component(&self, open: usize) -> &VectorField {
        &self.fields[open]
    }

    pub fn components(&self) -> &[VectorField] {
        &self.fields
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SquareWitness {
    pub upper: String,
    pub lower: String,
    pub operator: &'static str,
    pub form: DifferentialForm,
    pub point: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SquareReport {
    pub failure: Option<SquareWitness>,
}

impl SquareReport {
    pub fn commutes(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Copy)]
enum SquareOp {
    Contraction,
    Lie,
    D,
}

impl SquareOp {
    fn name(self) -> &'static str {
        match self {
            SquareOp::Contraction => "contraction",
            SquareOp::Lie => "lie",
            SquareOp::D => "d",
        }
    }

    fn apply(self, v: &VectorField, a: &DifferentialForm) -> Result<DifferentialForm> {
        match self {
            SquareOp::Contraction => v.contract(a),
            SquareOp::Lie => v.lie_derivative(a),
            SquareOp::D => a.d(),
        }
    }
}

/// For every `V ⊆ U` checks `ρ^U_V ∘ X_U = X_V ∘ ρ^U_V` with `X` each of
/// `ι(v)`, `L(v)` and `d`, comparing on the region of `V`.
pub fn check_restriction_squares(
    p: &PresheafCDGA,
    family: &LocalDerivationFamily,
    test_forms: &[DifferentialForm],
) -> Result<SquareReport> {
    crate::cartan::check_forms(&p.ring, test_forms)?;
    let n = p.ring.n();
    for (lower, upper) in p.poset.strict_pairs() {
        let region = &p.poset.open(lower).region;
        for op in [SquareOp::Contraction, SquareOp::Lie, SquareOp::D] {
            for a in test_forms {
                let lhs = p.restrict(&op.apply(family.component(upper), a)?, upper, lower)?;
                let rhs = op.apply(family.component(lower), &p.restrict(a, upper, lower)?)?;
                if let Some(point) = form_disagreement(region, n, &lhs, &rhs)? {
                    return Ok(SquareReport {
                        failure: Some(SquareWitness {
                            upper: p.poset.open(upper).name.clone(),
                            lower: p.poset.open(lower).name.clone(),
                            operator: op.name(),
                            form: a.clone(),
                            point,
                        }),
                    });
                }
            }
        }
    }
    Ok(SquareReport { failure: None })
}

/// Per-open identity reports, ordered by open name.
#[derive(Clone, Debug, PartialEq)]
pub struct PresheafReport {
    pub opens: Vec<(String, IdentityReport)>,
}

impl PresheafReport {
    pub fn all_pass(&self) -> bool {
        self.opens.iter().all(|(_, r)| r.all_pass())
    }
}

/// Runs the Cartan identities open by open once both families are known to
/// commute with restriction.
pub fn presheaf_cartan_verify(
    p: &PresheafCDGA,
    v: &LocalDerivationFamily,
    w: &LocalDerivationFamily,
    test_forms: &[DifferentialForm],
) -> Result<PresheafReport> {
    for (label, family) in [("first", v), ("second", w)] {
        if let Some(f) = check_restriction_squares(p, family, test_forms)?.failure {
            return Err(Error::IncompatibleFamily(format!(
                "{label} family: {} square from {} to {} fails on {}",
                f.operator,
                f.upper,
                f.lower,
                f.form.display()
            )));
        }
    }
    let mut opens: Vec<(String, IdentityReport)> = (0..p.poset.len())
        .into_par_iter()
        .map(|i| {
            let report = verify_cartan(&p.ring, v.component(i), w.component(i), test_forms)?;
            Ok((p.poset.open(i).name.clone(), report))
        })
        .collect::<Result<_>>()?;
    opens.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(PresheafReport { opens })
}
