use super::VectorField;
use crate::error::{Error, Result};
use crate::expr::Poly;
use crate::forms::DifferentialForm;
use crate::ring::same_ring;

/// A graded linear operator on the forms complex, built symbolically and
/// evaluated form by form.
#[derive(Clone, Debug, PartialEq)]
pub enum GradedOperator {
    ExteriorD,
    Contraction(VectorField),
    Lie(VectorField),
    /// Nonempty, all summands of the same degree.
    Sum(Vec<GradedOperator>),
    /// `Compose(X, Y)` is `X ∘ Y`: `Y` acts first.
    Compose(Box<GradedOperator>, Box<GradedOperator>),
    Scale(Poly, Box<GradedOperator>),
    Zero(i32),
}

impl GradedOperator {
    pub fn degree(&self) -> i32 {
        match self {
            GradedOperator::ExteriorD => 1,
            GradedOperator::Contraction(_) => -1,
            GradedOperator::Lie(_) => 0,
            GradedOperator::Sum(ops) => ops.first().map_or(0, GradedOperator::degree),
            GradedOperator::Compose(x, y) => x.degree() + y.degree(),
            GradedOperator::Scale(_, x) => x.degree(),
            GradedOperator::Zero(k) => *k,
        }
    }

    pub fn sum(ops: Vec<GradedOperator>) -> Result<GradedOperator> {
        let Some(first) = ops.first() else {
            return Ok(GradedOperator::Zero(0));
        };
        let k = first.degree();
        if let Some(bad) = ops.iter().find(|o| o.degree() != k) {
            return Err(Error::DegreeMismatch {
                left: k,
                right: bad.degree(),
            });
        }
        Ok(GradedOperator::Sum(ops))
    }

    pub fn compose(x: GradedOperator, y: GradedOperator) -> GradedOperator {
        GradedOperator::Compose(Box::new(x), Box::new(y))
    }

    pub fn scale(c: Poly, x: GradedOperator) -> GradedOperator {
        GradedOperator::Scale(c, Box::new(x))
    }

    pub fn apply(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        match self {
            GradedOperator::ExteriorD => a.d(),
            GradedOperator::Contraction(v) => v.contract(a),
            GradedOperator::Lie(v) => v.lie_derivative(a),
            GradedOperator::Sum(ops) => {
                let mut acc = DifferentialForm::zero(a.ring());
                for op in ops {
                    acc = acc.add(&op.apply(a)?)?;
                }
                Ok(acc)
            }
            GradedOperator::Compose(x, y) => x.apply(&y.apply(a)?),
            GradedOperator::Scale(c, x) => {
                let inner = x.apply(a)?;
                match c.as_constant() {
                    Some(r) => Ok(inner.scale(&r)),
                    None => inner.mul_function(c),
                }
            }
            GradedOperator::Zero(_) => Ok(DifferentialForm::zero(a.ring())),
        }
    }

    /// Checks that every vector field inside lives on the ring of `a`.
    pub(crate) fn check_ring(&self, a: &DifferentialForm) -> Result<()> {
        match self {
            GradedOperator::Contraction(v) | GradedOperator::Lie(v) => same_ring(v.ring(), a.ring()),
            GradedOperator::Sum(ops) => ops.iter().try_for_each(|o| o.check_ring(a)),
            GradedOperator::Compose(x, y) => {
                x.check_ring(a)?;
                y.check_ring(a)
            }
            GradedOperator::Scale(_, x) => x.check_ring(a),
            GradedOperator::ExteriorD | GradedOperator::Zero(_) => Ok(()),
        }
    }
}

pub fn op_apply(x: &GradedOperator, a: &DifferentialForm) -> Result<DifferentialForm> {
    x.check_ring(a)?;
    x.apply(a)
}

/// `[X, Y] = X ∘ Y - (-1)^{|X||Y|} Y ∘ X`.
pub fn graded_commutator(x: &GradedOperator, y: &GradedOperator) -> GradedOperator {
    let (kx, ky) = (x.degree(), y.degree());
    let sign: i64 = if (kx * ky) % 2 == 0 { -1 } else { 1 };
    let xy = GradedOperator::compose(x.clone(), y.clone());
    let yx = GradedOperator::compose(y.clone(), x.clone());
    GradedOperator::Sum(vec![xy, GradedOperator::scale(Poly::int(sign), yx)])
}

/// `ad(d)(X) = [d, X]`.
pub fn ad_d(x: &GradedOperator) -> GradedOperator {
    graded_commutator(&GradedOperator::ExteriorD, x)
}
