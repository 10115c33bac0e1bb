//! Smooth primitives: named functions with a total numeric evaluator and a
//! symbolic rule for each partial derivative.
//!
//! Derivative rules are [`SmoothExpr`] templates in which `Gen(j)` stands for
//! the `j`-th argument of the call. The built-in families are closed under
//! differentiation:
//!
//! * `beta{k}` is the `k`-th derivative of `t ↦ exp(-1/t)` for `t > 0`,
//!   extended by zero;
//! * `S(u, v) = beta0(u) / (beta0(u) + beta0(v))` is the smooth step used by
//!   bump functions;
//! * `Sden{m}(u, v) = (beta0(u) + beta0(v))^-m` carries the denominators that
//!   appear when `S` is differentiated;
//! * `exp`, `sin`, `cos`.

use std::fmt;
use std::sync::OnceLock;

use super::SmoothExpr;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimId {
    Beta(u32),
    Step,
    StepDen(u32),
    Exp,
    Sin,
    Cos,
    Custom(u32),
}

impl PrimId {
    pub fn arity(self) -> usize {
        match self {
            PrimId::Step | PrimId::StepDen(_) => 2,
            PrimId::Custom(id) => registry()
                .custom
                .get(id as usize)
                .map(|c| c.arity)
                .unwrap_or(0),
            _ => 1,
        }
    }

    pub fn name(self) -> String {
        match self {
            PrimId::Beta(k) => format!("beta{k}"),
            PrimId::Step => "S".to_string(),
            PrimId::StepDen(m) => format!("Sden{m}"),
            PrimId::Exp => "exp".to_string(),
            PrimId::Sin => "sin".to_string(),
            PrimId::Cos => "cos".to_string(),
            PrimId::Custom(id) => registry()
                .custom
                .get(id as usize)
                .map(|c| c.name.clone())
                .unwrap_or_else(|| format!("custom{id}")),
        }
    }

    /// Resolves a primitive by its display name.
    pub fn from_name(name: &str) -> Option<PrimId> {
        let numbered = |prefix: &str| -> Option<u32> {
            let rest = name.strip_prefix(prefix)?;
            if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            rest.parse().ok()
        };
        match name {
            "S" => return Some(PrimId::Step),
            "exp" => return Some(PrimId::Exp),
            "sin" => return Some(PrimId::Sin),
            "cos" => return Some(PrimId::Cos),
            _ => {}
        }
        if let Some(k) = numbered("beta") {
            return Some(PrimId::Beta(k));
        }
        if let Some(m) = numbered("Sden") {
            return Some(PrimId::StepDen(m));
        }
        registry()
            .custom
            .iter()
            .position(|c| c.name == name)
            .map(|i| PrimId::Custom(i as u32))
    }
}

impl fmt::Display for PrimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A user-supplied primitive.
#[derive(Clone)]
pub struct CustomPrimitive {
    pub name: String,
    pub arity: usize,
    pub eval: fn(&[f64]) -> f64,
    /// One template per argument slot.
    pub derivatives: Vec<SmoothExpr>,
}

impl fmt::Debug for CustomPrimitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPrimitive")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .finish()
    }
}

#[derive(Clone, Debug, Default)]
pub struct PrimitiveRegistry {
    custom: Vec<CustomPrimitive>,
}

static REGISTRY: OnceLock<PrimitiveRegistry> = OnceLock::new();

/// The process-wide registry. Built-ins only unless [`install`] ran first.
pub fn registry() -> &'static PrimitiveRegistry {
    REGISTRY.get_or_init(PrimitiveRegistry::default)
}

/// Installs a registry with custom primitives. Must happen before the first
/// call to [`registry`]; afterwards the registry is read-only.
pub fn install(reg: PrimitiveRegistry) -> Result<()> {
    reg.validate()?;
    REGISTRY
        .set(reg)
        .map_err(|_| Error::Invalid("primitive registry already initialized".into()))
}

impl PrimitiveRegistry {
    /// Adds a custom primitive and returns the id it will have once installed.
    pub fn register(&mut self, prim: CustomPrimitive) -> PrimId {
        self.custom.push(prim);
        PrimId::Custom(self.custom.len() as u32 - 1)
    }

    pub fn custom(&self) -> &[CustomPrimitive] {
        &self.custom
    }

    /// Checks that every derivative rule only calls registered primitives
    /// with the right arity and only refers to existing argument slots.
    pub fn validate(&self) -> Result<()> {
        for c in &self.custom {
            if c.derivatives.len() != c.arity {
                return Err(Error::ArityMismatch {
                    what: "derivative rules",
                    expected: c.arity,
                    got: c.derivatives.len(),
                });
            }
            for rule in &c.derivatives {
                self.check_template(rule, c.arity)?;
            }
        }
        Ok(())
    }

    fn check_template(&self, e: &SmoothExpr, arity: usize) -> Result<()> {
        match e {
            SmoothExpr::Const(_) => Ok(()),
            SmoothExpr::Gen(j) if *j < arity => Ok(()),
            SmoothExpr::Gen(j) => Err(Error::GeneratorOutOfRange {
                index: *j,
                count: arity,
            }),
            SmoothExpr::Sum(xs) | SmoothExpr::Product(xs) => {
                xs.iter().try_for_each(|x| self.check_template(x, arity))
            }
            SmoothExpr::IntPow(b, _) => self.check_template(b, arity),
            SmoothExpr::Prim(id, args) => {
                let expected = match id {
                    PrimId::Custom(k) => self
                        .custom
                        .get(*k as usize)
                        .ok_or_else(|| Error::UnknownPrimitive(format!("custom{k}")))?
                        .arity,
                    PrimId::Step | PrimId::StepDen(_) => 2,
                    _ => 1,
                };
                if args.len() != expected {
                    return Err(Error::ArityMismatch {
                        what: "primitive arguments",
                        expected,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|x| self.check_template(x, arity))
            }
        }
    }
}

/// Numeric value of a primitive. Total on all of `R^arity`.
pub fn eval_prim(id: PrimId, args: &[f64]) -> f64 {
    match id {
        PrimId::Beta(k) => beta(k, args[0]),
        PrimId::Step => {
            let (a, b) = (beta(0, args[0]), beta(0, args[1]));
            let den = a + b;
            if den == 0.0 {
                0.0
            } else {
                a / den
            }
        }
        PrimId::StepDen(m) => {
            let den = beta(0, args[0]) + beta(0, args[1]);
            if den == 0.0 {
                0.0
            } else {
                den.powi(-(m as i32))
            }
        }
        PrimId::Exp => args[0].exp(),
        PrimId::Sin => args[0].sin(),
        PrimId::Cos => args[0].cos(),
        PrimId::Custom(k) => (registry().custom[k as usize].eval)(args),
    }
}

/// `beta_k(t) = P_k(1/t) exp(-1/t)` for `t > 0`, where `P_0 = 1` and
/// `P_{k+1}(s) = s^2 (P_k(s) - P_k'(s))`.
pub fn beta(k: u32, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let s = 1.0 / t;
    if s > 700.0 {
        return 0.0;
    }
    let coeffs = beta_poly(k);
    let p = coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c);
    p * (-s).exp()
}

fn beta_poly(k: u32) -> Vec<f64> {
    let mut p = vec![1.0];
    for _ in 0..k {
        // s^2 * (p - p')
        let mut q = vec![0.0; p.len() + 2];
        for (i, c) in p.iter().enumerate() {
            q[i + 2] += c;
            if i > 0 {
                q[i + 1] -= (i as f64) * c;
            }
        }
        p = q;
    }
    p
}

/// Symbolic rule for the partial derivative of `id` in argument `slot`.
pub fn derivative_rule(id: PrimId, slot: usize) -> SmoothExpr {
    use SmoothExpr as E;
    let a = |j: usize| E::Gen(j);
    let call = |p: PrimId, args: Vec<E>| E::Prim(p, args);
    match id {
        PrimId::Beta(k) => call(PrimId::Beta(k + 1), vec![a(0)]),
        PrimId::Step => {
            let den = call(PrimId::StepDen(2), vec![a(0), a(1)]);
            if slot == 0 {
                E::Product(vec![
                    call(PrimId::Beta(1), vec![a(0)]),
                    call(PrimId::Beta(0), vec![a(1)]),
                    den,
                ])
            } else {
                E::Product(vec![
                    E::int(-1),
                    call(PrimId::Beta(0), vec![a(0)]),
                    call(PrimId::Beta(1), vec![a(1)]),
                    den,
                ])
            }
        }
        PrimId::StepDen(m) => E::Product(vec![
            E::int(-(m as i64)),
            call(PrimId::Beta(1), vec![a(slot)]),
            call(PrimId::StepDen(m + 1), vec![a(0), a(1)]),
        ]),
        PrimId::Exp => call(PrimId::Exp, vec![a(0)]),
        PrimId::Sin => call(PrimId::Cos, vec![a(0)]),
        PrimId::Cos => E::Product(vec![E::int(-1), call(PrimId::Sin, vec![a(0)])]),
        PrimId::Custom(k) => registry().custom[k as usize].derivatives[slot].clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_values() {
        assert_eq!(beta(0, -1.0), 0.0);
        assert_eq!(beta(0, 0.0), 0.0);
        assert!((beta(0, 1.0) - (-1.0f64).exp()).abs() < 1e-15);
        // beta_1(t) = exp(-1/t) / t^2
        let t = 0.7f64;
        assert!((beta(1, t) - (-1.0 / t).exp() / (t * t)).abs() < 1e-14);
    }

    #[test]
    fn names_round_trip() {
        for id in [
            PrimId::Beta(0),
            PrimId::Beta(12),
            PrimId::Step,
            PrimId::StepDen(3),
            PrimId::Exp,
            PrimId::Sin,
            PrimId::Cos,
        ] {
            assert_eq!(PrimId::from_name(&id.name()), Some(id));
        }
        assert_eq!(PrimId::from_name("beta"), None);
        assert_eq!(PrimId::from_name("betax"), None);
    }

    #[test]
    fn step_is_half_on_the_diagonal() {
        assert_eq!(eval_prim(PrimId::Step, &[0.3, 0.3]), 0.5);
        assert_eq!(eval_prim(PrimId::Step, &[0.3, -1.0]), 1.0);
        assert_eq!(eval_prim(PrimId::Step, &[-0.3, 1.0]), 0.0);
    }
}
