use std::fmt;

use rayon::prelude::*;

use super::operator::{graded_commutator, GradedOperator};
use super::{check_forms, VectorField};
use crate::error::{Error, Result};
use crate::expr::Poly;
use crate::forms::{pushforward, Basis, DifferentialForm};
use crate::ring::{same_ring, Ring, RingHom};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanIdentity {
    /// `L(v) ∘ d = d ∘ L(v)`
    I,
    /// `L([v,w]) = [L(v), L(w)]`
    II,
    /// `[L(v), ι(w)] = ι([v,w])`
    III,
    /// `[ι(v), ι(w)] = 0`
    IV,
    /// `L(v) = [d, ι(v)]`
    V,
}

impl CartanIdentity {
    pub const ALL: [CartanIdentity; 5] = [
        CartanIdentity::I,
        CartanIdentity::II,
        CartanIdentity::III,
        CartanIdentity::IV,
        CartanIdentity::V,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CartanIdentity::I => "i",
            CartanIdentity::II => "ii",
            CartanIdentity::III => "iii",
            CartanIdentity::IV => "iv",
            CartanIdentity::V => "v",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        CartanIdentity::ALL.into_iter().find(|i| i.label() == s)
    }

    pub fn statement(self) -> &'static str {
        match self {
            CartanIdentity::I => "L(v)∘d = d∘L(v)",
            CartanIdentity::II => "L([v,w]) = [L(v),L(w)]",
            CartanIdentity::III => "[L(v),ι(w)] = ι([v,w])",
            CartanIdentity::IV => "[ι(v),ι(w)] = 0",
            CartanIdentity::V => "L(v) = [d,ι(v)]",
        }
    }

    /// Both sides as operators.
    pub fn sides(self, v: &VectorField, w: &VectorField) -> Result<(GradedOperator, GradedOperator)> {
        use GradedOperator as G;
        Ok(match self {
            CartanIdentity::I => (
                G::compose(G::Lie(v.clone()), G::ExteriorD),
                G::compose(G::ExteriorD, G::Lie(v.clone())),
            ),
            CartanIdentity::II => (
                G::Lie(v.bracket(w)?),
                graded_commutator(&G::Lie(v.clone()), &G::Lie(w.clone())),
            ),
            CartanIdentity::III => (
                graded_commutator(&G::Lie(v.clone()), &G::Contraction(w.clone())),
                G::Contraction(v.bracket(w)?),
            ),
            CartanIdentity::IV => (
                graded_commutator(&G::Contraction(v.clone()), &G::Contraction(w.clone())),
                G::Zero(-2),
            ),
            CartanIdentity::V => (
                G::Lie(v.clone()),
                graded_commutator(&G::ExteriorD, &G::Contraction(v.clone())),
            ),
        })
    }
}

impl fmt::Display for CartanIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResult {
    pub identity: CartanIdentity,
    pub pass: bool,
    /// First test form on which the two sides differ.
    pub witness: Option<DifferentialForm>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IdentityReport {
    pub results: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn get(&self, identity: CartanIdentity) -> Option<&IdentityResult> {
        self.results.iter().find(|r| r.identity == identity)
    }
}

/// The first form (in the given order) where `x` and `y` disagree.
pub fn disagreement(
    x: &GradedOperator,
    y: &GradedOperator,
    forms: &[DifferentialForm],
) -> Result<Option<DifferentialForm>> {
    let found = forms
        .par_iter()
        .map(|a| -> Result<Option<DifferentialForm>> {
            let lhs = x.apply(a)?;
            let rhs = y.apply(a)?;
            Ok((lhs != rhs).then(|| a.clone()))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(None),
        Some(r) => r,
    }
}

pub fn verify_cartan(
    ring: &Ring,
    v: &VectorField,
    w: &VectorField,
    test_forms: &[DifferentialForm],
) -> Result<IdentityReport> {
    same_ring(ring, v.ring())?;
    same_ring(ring, w.ring())?;
    check_forms(ring, test_forms)?;
    let mut results = Vec::with_capacity(5);
    for identity in CartanIdentity::ALL {
        let (lhs, rhs) = identity.sides(v, w)?;
        let witness = disagreement(&lhs, &rhs, test_forms)?;
        results.push(IdentityResult {
            identity,
            pass: witness.is_none(),
            witness,
        });
    }
    Ok(IdentityReport { results })
}

/// Exponent vectors in `n` variables of total degree at most `max_degree`,
/// ordered by degree and then lexicographically descending.
fn exponent_vectors(n: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    for d in 0..=max_degree {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Every `m · dx_T` with `m` a monomial of degree `≤ max_degree` and `T`
/// any increasing tuple, zero forms (over quotients) dropped.
pub fn spanning_forms(ring: &Ring, max_degree: u32) -> Vec<DifferentialForm> {
    let n = ring.n();
    let mut bases: Vec<Basis> = (0..(1u64 << n)).map(Basis).collect();
    bases.sort();
    let monomials: Vec<Poly> = exponent_vectors(n, max_degree)
        .into_iter()
        .map(|e| {
            e.iter()
                .enumerate()
                .fold(Poly::one(), |acc, (i, &k)| acc * Poly::gen(i).pow(k))
        })
        .collect();
    let mut out = Vec::with_capacity(bases.len() * monomials.len());
    for b in bases {
        for m in &monomials {
            let form = DifferentialForm::from_basis_terms(ring, [(b, m.clone())])
                .expect("monomial forms are polynomial");
            if !form.is_zero() {
                out.push(form);
            }
        }
    }
    out
}

/// Checks `f ∘ v = w ∘ f` on generators, then naturality of `ι` and `L`
/// on every test form.
pub fn naturality_check(
    f: &RingHom,
    v: &VectorField,
    w: &VectorField,
    test_forms: &[DifferentialForm],
) -> Result<bool> {
    same_ring(f.source(), v.ring())?;
    same_ring(f.target(), w.ring())?;
    check_forms(f.source(), test_forms)?;
    for (i, (vi, image)) in v.coefficients().iter().zip(f.images()).enumerate() {
        if f.apply(vi)? != w.apply(image)? {
            return Err(Error::NotRelated { generator: i });
        }
    }
    let results: Vec<Result<bool>> = test_forms
        .par_iter()
        .map(|a| {
            let fa = pushforward(f, a)?;
            let contract = pushforward(f, &v.contract(a)?)? == w.contract(&fa)?;
            let lie = pushforward(f, &v.lie_derivative(a)?)? == w.lie_derivative(&fa)?;
            Ok(contract && lie)
        })
        .collect();
    results.into_iter().try_fold(true, |acc, r| Ok(acc && r?))
}

/// A test form on which `L(f·v) ≠ f·L(v)`, if any.
pub fn lie_nonlinearity_witness(
    f: &Poly,
    v: &VectorField,
    test_forms: &[DifferentialForm],
) -> Result<Option<DifferentialForm>> {
    let fv = v.scale(f)?;
    let lhs = GradedOperator::Lie(fv);
    let rhs = GradedOperator::scale(f.clone(), GradedOperator::Lie(v.clone()));
    disagreement(&lhs, &rhs, test_forms)
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

    #[test]
    fn spanning_set_size_and_order() {
        let r = RingPresentation::free(3);
        let forms = spanning_forms(&r, 2);
        assert_eq!(forms.len(), 10 * 8);
        assert_eq!(forms[0], DifferentialForm::scalar(&r, Poly::one()).unwrap());
        assert_eq!(exponent_vectors(2, 1), vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn example_fields_pass() {
        let r = ring2();
        let v = VectorField::new(&r, vec![Poly::zero(), p(E::Gen(0))]).unwrap();
        let w = VectorField::new(&r, vec![p(E::Gen(1)), Poly::zero()]).unwrap();
        let forms = vec![
            DifferentialForm::scalar(&r, p(E::Gen(0))).unwrap(),
            DifferentialForm::dx(&r, 0).unwrap(),
            DifferentialForm::monomial(&r, &[1], p(E::Gen(0))).unwrap(),
            DifferentialForm::monomial(&r, &[0, 1], Poly::one()).unwrap(),
        ];
        let report = verify_cartan(&r, &v, &w, &forms).unwrap();
        assert_eq!(report.results.len(), 5);
        assert!(report.all_pass());
        let same = verify_cartan(&r, &v, &v, &spanning_forms(&r, 2)).unwrap();
        assert!(same.all_pass());
        let zero = VectorField::zero(&r);
        assert!(verify_cartan(&r, &zero, &w, &forms).unwrap().all_pass());
    }

    #[test]
    fn broken_identity_reports_witness() {
        let r = ring2();
        let v = VectorField::coordinate(&r, 0).unwrap();
        let forms = spanning_forms(&r, 1);
        let wrong = GradedOperator::Contraction(v.clone());
        let zero = GradedOperator::Zero(-1);
        let witness = disagreement(&wrong, &zero, &forms).unwrap();
        assert_eq!(witness, Some(DifferentialForm::dx(&r, 0).unwrap()));
    }

    #[test]
    fn lie_is_not_function_linear() {
        let r = ring2();
        let v = VectorField::coordinate(&r, 0).unwrap();
        let x = p(E::Gen(0));
        let witness = lie_nonlinearity_witness(&x, &v, &spanning_forms(&r, 1)).unwrap();
        // L(x∂x) dx = dx while x L(∂x) dx = 0
        assert_eq!(witness, Some(DifferentialForm::dx(&r, 0).unwrap()));
    }

    #[test]
    fn naturality_examples() {
        let r = ring2();
        let v = VectorField::new(&r, vec![p(E::Gen(1)), p(E::Gen(0))]).unwrap();
        let id = RingHom::identity(&r);
        assert!(naturality_check(&id, &v, &v, &spanning_forms(&r, 2)).unwrap());

        let line = RingPresentation::free_named(vec!["x".into()]);
        let inc = RingHom::new(line.clone(), r.clone(), vec![p(E::Gen(0))]).unwrap();
        let xdx_src = VectorField::new(&line, vec![p(E::Gen(0))]).unwrap();
        let xdx_tgt = VectorField::new(&r, vec![p(E::Gen(0)), Poly::zero()]).unwrap();
        assert!(naturality_check(&inc, &xdx_src, &xdx_tgt, &spanning_forms(&line, 2)).unwrap());

        let dx = VectorField::coordinate(&line, 0).unwrap();
        let err = naturality_check(&inc, &dx, &VectorField::zero(&r), &[]);
        assert_eq!(err, Err(Error::NotRelated { generator: 0 }));
    }
}
