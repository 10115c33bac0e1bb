//! Gluing local vector fields and bump-function locality.

use crate::cartan::VectorField;
use crate::error::{Error, Result};
use crate::expr::{make_bump, rat_to_f64, Poly, Rational};
use crate::forms::DifferentialForm;
use crate::ring::same_ring;

use super::{box_points, Interval, Open, OpenBox, Region};

/// Samples per overlap when a difference involves primitives.
pub const OVERLAP_SAMPLES: usize = 25;
const TOLERANCE: f64 = 1e-9;

/// `count` rational points of the region (as floats), box centers first.
pub fn sample_points(region: &Region, n: usize, count: usize) -> Vec<Vec<f64>> {
    let boxes = region.boxes(n);
    if boxes.is_empty() || count == 0 {
        return Vec::new();
    }
    let per_box = count.div_ceil(boxes.len());
    let lists: Vec<Vec<Vec<Rational>>> = boxes.iter().map(|b| box_points(b, per_box)).collect();
    let mut out = Vec::with_capacity(count);
    for k in 0..per_box {
        for l in &lists {
            if out.len() < count {
                out.push(l[k].iter().map(rat_to_f64).collect());
            }
        }
    }
    out
}

/// A point of the region where `diff` is nonzero, or `None` when `diff`
/// vanishes there. Polynomials are decided exactly (a polynomial vanishing
/// on an open box is zero); expressions with primitives are sampled.
pub(crate) fn poly_disagreement(region: &Region, n: usize, diff: &Poly) -> Option<Vec<f64>> {
    if diff.is_zero() || region.is_empty() {
        return None;
    }
    let points = sample_points(region, n, OVERLAP_SAMPLES);
    if diff.is_polynomial() {
        let hit = points.iter().find(|p| diff.eval(p) != 0.0);
        return Some(hit.unwrap_or(&points[0]).clone());
    }
    points
        .into_iter()
        .find(|p| diff.eval(p).abs() > TOLERANCE)
}

pub(crate) fn form_disagreement(
    region: &Region,
    n: usize,
    a: &DifferentialForm,
    b: &DifferentialForm,
) -> Result<Option<Vec<f64>>> {
    let diff = a.sub(b)?;
    for (_, c) in diff.terms() {
        if let Some(p) = poly_disagreement(region, n, c) {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Checks that the local fields agree pairwise on overlaps and returns the
/// global field they restrict from. For polynomial coefficients agreement on
/// one open box forces equality everywhere, so any local field is it.
pub fn glue_derivations(cover: &[Open], locals: &[VectorField]) -> Result<VectorField> {
    if cover.len() != locals.len() {
        return Err(Error::ArityMismatch {
            what: "local fields",
            expected: cover.len(),
            got: locals.len(),
        });
    }
    let first = locals
        .first()
        .ok_or_else(|| Error::Invalid("empty cover".into()))?;
    let n = first.ring().n();
    for v in locals {
        same_ring(first.ring(), v.ring())?;
    }
    for i in 0..cover.len() {
        for j in (i + 1)..cover.len() {
            let overlap = cover[i].region.intersect(&cover[j].region);
            for (a, b) in locals[i].coefficients().iter().zip(locals[j].coefficients()) {
                if let Some(witness) = poly_disagreement(&overlap, n, &(a - b)) {
                    return Err(Error::Incompatible {
                        first: cover[i].name.clone(),
                        second: cover[j].name.clone(),
                        witness,
                    });
                }
            }
        }
    }
    Ok(first.clone())
}

/// If `f` vanishes on the box then so does `v(f)`. A polynomial vanishes on
/// an open box only when it is zero, so the antecedent is decided exactly.
pub fn locality_witness(v: &VectorField, f: &Poly, b: &OpenBox) -> Result<bool> {
    if !f.is_polynomial() || !v.coefficients().iter().all(Poly::is_polynomial) {
        return Err(Error::NonPolynomial);
    }
    if !f.is_zero() {
        return Ok(true);
    }
    let vf = v.apply(f)?;
    Ok(poly_disagreement(&Region::Boxes(vec![b.clone()]), v.ring().n(), &vf).is_none())
}

/// Largest `|v(ρ f) - v(f)|` over ten points of the plateau of the bump `ρ`
/// about `center`; locality predicts zero.
pub fn bump_locality_demo(
    v: &VectorField,
    f: &Poly,
    center: &[Rational],
    r_in: &Rational,
    r_out: &Rational,
) -> Result<f64> {
    let rho = make_bump(center, r_in, r_out)?;
    let localized = v.apply(&(&rho * f))?;
    let plain = v.apply(f)?;
    // a cube of half-width r_in / (2 sqrt n) lies inside the inner ball
    let n = center.len().max(1);
    let half = r_in / Rational::from_integer((2 * n).into());
    let cube = OpenBox(
        center
            .iter()
            .map(|c| Interval::bounded(c - &half, c + &half))
            .collect(),
    );
    let worst = box_points(&cube, 10)
        .iter()
        .map(|p| {
            let p: Vec<f64> = p.iter().map(rat_to_f64).collect();
            (localized.eval(&p) - plain.eval(&p)).abs()
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

fn interval_name(i: &(Rational, Rational)) -> String {
    format!("({}, {})", i.0, i.1)
}

/// Glues two functions on overlapping intervals of the line with a bump
/// partition of unity: `ρ a_1 + (1 - ρ) a_2`, where `ρ` is 1 on the part
/// of the first interval left of the second and 0 beyond the first.
pub fn partition_glue_demo(cover: [(Rational, Rational); 2], locals: [Poly; 2]) -> Result<Poly> {
    for (lo, hi) in &cover {
        if lo >= hi {
            return Err(Error::Invalid(format!("empty interval ({lo}, {hi})")));
        }
    }
    if locals.iter().any(|p| p.max_generator().is_some_and(|g| g > 0)) {
        return Err(Error::Invalid("locals must be functions of x0 alone".into()));
    }
    let ([first, second], [a1, a2]) = if cover[0].0 <= cover[1].0 {
        (cover, locals)
    } else {
        let [c0, c1] = cover;
        let [l0, l1] = locals;
        ([c1, c0], [l1, l0])
    };
    let (a, b) = first.clone();
    let (c, d) = second.clone();
    if c >= b {
        return Err(Error::Invalid("intervals do not overlap".into()));
    }
    let overlap = Region::Boxes(vec![OpenBox(vec![Interval::bounded(
        c.clone(),
        b.clone().min(d.clone()),
    )])]);
    if let Some(witness) = poly_disagreement(&overlap, 1, &(&a1 - &a2)) {
        return Err(Error::Incompatible {
            first: interval_name(&first),
            second: interval_name(&second),
            witness,
        });
    }
    // one interval contains the other
    if a == c || d <= b {
        return Ok(if d <= b { a1 } else { a2 });
    }
    let two = Rational::from_integer(2.into());
    let m = (&a + &c) / &two;
    let r_in = (&c - &a) / &two;
    let r_out = &b - &m;
    let rho = make_bump(&[m], &r_in, &r_out)?;
    Ok(&rho * &a1 + (Poly::one() - rho) * a2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{rat, SmoothExpr as E};
    use crate::ring::{Ring, RingPresentation};

    fn line() -> Ring {
        RingPresentation::free_named(vec!["x".into()])
    }
    fn p(e: E) -> Poly {
        Poly::from_expr(&e).unwrap()
    }
    fn half_lines() -> Vec<Open> {
        vec![
            Open::new(
                "L",
                Region::Boxes(vec![OpenBox(vec![Interval::new(None, Some(rat(1, 1)))])]),
            ),
            Open::new(
                "R",
                Region::Boxes(vec![OpenBox(vec![Interval::new(Some(rat(-1, 1)), None)])]),
            ),
        ]
    }
    fn field(e: E) -> VectorField {
        VectorField::new(&line(), vec![p(e)]).unwrap()
    }

    #[test]
    fn glue_examples() {
        let x = || E::Gen(0);
        let v = field(x().pow(2));
        assert_eq!(glue_derivations(&half_lines(), &[v.clone(), v.clone()]).unwrap(), v);

        let w = field(x().pow(2) + E::one());
        let err = glue_derivations(&half_lines(), &[v, w]).unwrap_err();
        assert_eq!(
            err,
            Error::Incompatible {
                first: "L".into(),
                second: "R".into(),
                witness: vec![0.0]
            }
        );

        let a = field((x() + E::one()).pow(2));
        let b = field(x().pow(2) + E::int(2) * x() + E::one());
        assert!(glue_derivations(&half_lines(), &[a, b]).is_ok());
    }

    #[test]
    fn locality_examples() {
        let dx = VectorField::coordinate(&line(), 0).unwrap();
        let b = OpenBox(vec![Interval::bounded(rat(-1, 1), rat(1, 1))]);
        assert!(locality_witness(&dx, &Poly::zero(), &b).unwrap());
        assert!(locality_witness(&dx, &p(E::Gen(0).pow(2) - E::Gen(0).pow(2)), &b).unwrap());
        assert!(locality_witness(&dx, &Poly::gen(0), &b).unwrap());

        let v = field(E::Gen(0).pow(2) + E::one());
        let f = p(E::Gen(0).pow(3) - E::Gen(0));
        let dev = bump_locality_demo(&v, &f, &[rat(1, 3)], &rat(1, 2), &rat(1, 1)).unwrap();
        assert!(dev < 1e-9, "{dev}");
    }

    #[test]
    fn partition_examples() {
        let x2 = p(E::Gen(0).pow(2));
        let cover = [(rat(-2, 1), rat(1, 1)), (rat(-1, 1), rat(2, 1))];
        let glued = partition_glue_demo(cover.clone(), [x2.clone(), x2.clone()]).unwrap();
        for k in -19..20 {
            let t = k as f64 / 10.0;
            assert!((glued.eval(&[t]) - t * t).abs() < 1e-9);
        }
        let other = p(E::Gen(0) * E::Gen(0));
        assert!(partition_glue_demo(cover.clone(), [x2.clone(), other]).is_ok());
        let bad = partition_glue_demo(cover, [x2.clone(), x2 + Poly::one()]);
        assert!(matches!(bad, Err(Error::Incompatible { .. })));
    }
}
