//! Finitely presented rings: `n` generators modulo a polynomial ideal, with
//! ring maps given by generator substitution.

pub(crate) mod groebner;
pub(crate) mod module;

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::expr::{Atom, Monomial, Poly, SmoothExpr};
use groebner::{buchberger, DPoly, Groebner};
use module::FormRelations;

pub type Ring = Arc<RingPresentation>;

pub(crate) fn to_dense(p: &Poly, nvars: usize) -> Result<DPoly> {
    let mut terms = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        let mut e = vec![0u16; nvars];
        for (a, k) in m.factors() {
            match a {
                Atom::Gen(i) if *i < nvars => e[*i] += *k as u16,
                Atom::Gen(i) => {
                    return Err(Error::GeneratorOutOfRange {
                        index: *i,
                        count: nvars,
                    })
                }
                Atom::Prim(..) => return Err(Error::NonPolynomial),
            }
        }
        terms.push((e, c.clone()));
    }
    Ok(DPoly::from_unsorted(terms))
}

pub(crate) fn from_dense(d: &DPoly) -> Poly {
    let mut out = Poly::zero();
    for (e, c) in &d.terms {
        let m = Monomial::from_gens(e.iter().enumerate().map(|(i, k)| (i, *k as u32)));
        out.add_term(m, c.clone());
    }
    out
}

/// Outcome of an ideal membership query. `cofactors[j]` multiplies the
/// `j`-th presented generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub cofactors: Option<Vec<Poly>>,
}

/// An ideal given by polynomial generators, graded-lex order.
#[derive(Debug)]
pub struct IdealPresentation {
    nvars: usize,
    generators: Vec<Poly>,
    dense_interior: bool,
    basis: OnceLock<Groebner>,
}

impl Clone for IdealPresentation {
    fn clone(&self) -> Self {
        IdealPresentation {
            nvars: self.nvars,
            generators: self.generators.clone(),
            dense_interior: self.dense_interior,
            basis: self.basis.clone(),
        }
    }
}

impl PartialEq for IdealPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars
            && self.generators == other.generators
            && self.dense_interior == other.dense_interior
    }
}

impl IdealPresentation {
    /// Zero generators are dropped; every generator must be a polynomial in
    /// the first `nvars` generators.
    pub fn new(nvars: usize, generators: Vec<Poly>) -> Result<Self> {
        for g in &generators {
            if !g.is_polynomial() {
                return Err(Error::NonPolynomial);
            }
            if let Some(i) = g.max_generator() {
                if i >= nvars {
                    return Err(Error::GeneratorOutOfRange {
                        index: i,
                        count: nvars,
                    });
                }
            }
        }
        Ok(IdealPresentation {
            nvars,
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            dense_interior: false,
            basis: OnceLock::new(),
        })
    }

    pub fn zero(nvars: usize) -> Self {
        IdealPresentation {
            nvars,
            generators: Vec::new(),
            dense_interior: false,
            basis: OnceLock::new(),
        }
    }

    /// The vanishing ideal of a closed set with dense interior: zero on
    /// polynomials, flagged so callers can tell it from a plain free ring.
    pub fn dense_interior(nvars: usize) -> Self {
        IdealPresentation {
            dense_interior: true,
            ..IdealPresentation::zero(nvars)
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_dense_interior(&self) -> bool {
        self.dense_interior
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    fn groebner(&self) -> &Groebner {
        self.basis.get_or_init(|| {
            let dense: Vec<DPoly> = self
                .generators
                .iter()
                .map(|g| to_dense(g, self.nvars).expect("validated at construction"))
                .collect();
            buchberger(&dense, self.nvars, true)
        })
    }

    /// The reduced Gröbner basis.
    pub fn groebner_basis(&self) -> Vec<Poly> {
        self.groebner().elems.iter().map(from_dense).collect()
    }

    pub fn reduce(&self, p: &Poly) -> Result<Poly> {
        if self.is_zero() {
            return if p.is_polynomial() {
                Ok(p.clone())
            } else {
                Err(Error::NonPolynomial)
            };
        }
        let d = to_dense(p, self.nvars)?;
        let (r, _) = self.groebner().reduce(&d);
        Ok(from_dense(&r))
    }

    pub fn member(&self, p: &Poly) -> Result<Membership> {
        let d = to_dense(p, self.nvars)?;
        if self.is_zero() {
            return Ok(Membership {
                member: d.is_zero(),
                cofactors: d.is_zero().then(Vec::new),
            });
        }
        let (r, cof) = self.groebner().reduce(&d);
        if !r.is_zero() {
            return Ok(Membership {
                member: false,
                cofactors: None,
            });
        }
        Ok(Membership {
            member: true,
            cofactors: cof.map(|c| c.iter().map(from_dense).collect()),
        })
    }
}

/// Decides `p ∈ I`; on success the cofactors satisfy `p = Σ c_j g_j`.
pub fn ideal_member(p: &Poly, ideal: &IdealPresentation) -> Result<Membership> {
    ideal.member(p)
}

/// Canonical representative of `p` modulo `I`.
pub fn reduce_mod_ideal(p: &Poly, ideal: &IdealPresentation) -> Result<Poly> {
    ideal.reduce(p)
}

/// `R[x_0..x_{n-1}] / I` with display names for the generators.
#[derive(Debug)]
pub struct RingPresentation {
    n: usize,
    names: Vec<String>,
    ideal: IdealPresentation,
    form_relations: Vec<OnceLock<FormRelations>>,
}

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.names == other.names && self.ideal == other.ideal
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

impl RingPresentation {
    pub fn new(names: Vec<String>, ideal: IdealPresentation) -> Result<Ring> {
        let n = names.len();
        if n > 64 {
            return Err(Error::TooManyGenerators(n));
        }
        if ideal.nvars != n {
            return Err(Error::ArityMismatch {
                what: "ideal variables",
                expected: n,
                got: ideal.nvars,
            });
        }
        Ok(Arc::new(RingPresentation {
            n,
            names,
            ideal,
            form_relations: (0..=n).map(|_| OnceLock::new()).collect(),
        }))
    }

    pub fn free(n: usize) -> Ring {
        RingPresentation::free_named(default_names(n))
    }

    /// Panics beyond 64 generators; use [`RingPresentation::new`] to get an
    /// error instead.
    pub fn free_named(names: Vec<String>) -> Ring {
        let n = names.len();
        RingPresentation::new(names, IdealPresentation::zero(n)).expect("at most 64 generators")
    }

    pub fn quotient(names: Vec<String>, generators: Vec<Poly>) -> Result<Ring> {
        let ideal = IdealPresentation::new(names.len(), generators)?;
        RingPresentation::new(names, ideal)
    }

    pub fn dense_interior(names: Vec<String>) -> Result<Ring> {
        let n = names.len();
        RingPresentation::new(names, IdealPresentation::dense_interior(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    /// True when the ideal has no generators.
    pub fn is_free(&self) -> bool {
        self.ideal.is_zero()
    }

    /// Checks that `p` only uses generators of this ring.
    pub fn check(&self, p: &Poly) -> Result<()> {
        match p.max_generator() {
            Some(i) if i >= self.n => Err(Error::GeneratorOutOfRange {
                index: i,
                count: self.n,
            }),
            _ => Ok(()),
        }
    }

    /// Canonical representative in the ring: the identity for free rings,
    /// reduction modulo the ideal otherwise.
    pub fn reduce(&self, p: &Poly) -> Result<Poly> {
        if self.is_free() {
            Ok(p.clone())
        } else {
            self.ideal.reduce(p)
        }
    }

    /// Reduces one homogeneous degree-`k` component of a form.
    pub(crate) fn reduce_component(&self, k: usize, component: Vec<(u64, Poly)>) -> Result<Vec<(u64, Poly)>> {
        if self.is_free() {
            return Ok(component);
        }
        if k == 0 {
            return component
                .into_iter()
                .map(|(m, p)| Ok((m, self.ideal.reduce(&p)?)))
                .filter(|r| !matches!(r, Ok((_, p)) if p.is_zero()))
                .collect();
        }
        let rel = match self.form_relations[k].get() {
            Some(r) => r,
            None => {
                let built = FormRelations::build(self.n, k, &self.ideal.generators)?;
                let _ = self.form_relations[k].set(built);
                self.form_relations[k].get().unwrap()
            }
        };
        rel.reduce(&component)
    }
}

/// A ring map given by the images of the source generators.
#[derive(Clone, Debug, PartialEq)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    images: Vec<Poly>,
}

impl RingHom {
    /// Validates arity and that every source ideal generator maps into the
    /// target ideal.
    pub fn new(source: Ring, target: Ring, images: Vec<Poly>) -> Result<RingHom> {
        if images.len() != source.n {
            return Err(Error::ArityMismatch {
                what: "generator images",
                expected: source.n,
                got: images.len(),
            });
        }
        let images = images
            .iter()
            .map(|p| {
                target.check(p)?;
                target.reduce(p)
            })
            .collect::<Result<Vec<_>>>()?;
        for (j, g) in source.ideal.generators.iter().enumerate() {
            let image = g.substitute(&images);
            let ok = if target.is_free() {
                image.is_zero()
            } else {
                target.ideal.member(&image)?.member
            };
            if !ok {
                return Err(Error::InvalidHom { generator: j });
            }
        }
        Ok(RingHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(ring: &Ring) -> RingHom {
        RingHom {
            source: ring.clone(),
            target: ring.clone(),
            images: (0..ring.n).map(Poly::gen).collect(),
        }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        self.source.check(p)?;
        self.target.reduce(&p.substitute(&self.images))
    }
}

/// Applies a ring map to an expression tree and returns the normal form.
pub fn hom_apply(f: &RingHom, e: &SmoothExpr) -> Result<SmoothExpr> {
    Ok(f.apply(&Poly::from_expr(e)?)?.to_expr())
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}
