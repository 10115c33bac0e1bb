//! Command dispatch for the `cartan` binary. `run` never prints; it returns
//! the exit code together with what belongs on stdout and stderr.

use std::fs;

use cartan_core::cartan::{spanning_forms, verify_cartan, CartanIdentity, VectorField};
use cartan_core::derquot::{canonical_pair_cross, class_equal, in_j, DerClass, TangentField};
use cartan_core::json::{
    error_json, family_from_json, presheaf_report_json, DerClassJson, FamilyJson, FormJson,
    PosetJson, RingJson, VectorFieldJson,
};
use cartan_core::parse::{parse_expr, parse_form, parse_poly, serialize_expr};
use cartan_core::random;
use cartan_core::site::{glue_derivations, presheaf_cartan_verify, PresheafCDGA};
use cartan_core::{DifferentialForm, Error, Ring, RingPresentation};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "cartan", version, about = "Cartan calculus on presented rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub ring: RingArgs,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct RingArgs {
    /// Generator names, comma separated.
    #[arg(long, global = true, default_value = "x,y")]
    pub vars: String,
    /// Ideal generators, comma separated.
    #[arg(long, global = true)]
    pub ideal: Option<String>,
    /// Use the zero ideal with the dense-interior flag.
    #[arg(long, global = true)]
    pub dense: bool,
    /// Ring JSON file; overrides --vars, --ideal and --dense.
    #[arg(long, global = true)]
    pub ring: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exterior derivative of a form.
    D { form: String },
    /// Wedge product of two forms.
    Wedge { a: String, b: String },
    /// Contraction of a form by a vector field.
    Contract {
        #[arg(long)]
        vf: String,
        form: String,
    },
    /// Lie derivative of a form along a vector field.
    Lie {
        #[arg(long)]
        vf: String,
        form: String,
    },
    /// Bracket of two vector fields.
    Bracket { v: String, w: String },
    /// Randomized check of the five Cartan identities on the free ring.
    VerifyCartan {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Largest coefficient degree of the test forms.
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Certifies that a vector field preserves the ideal.
    Tangent {
        #[arg(long)]
        vf: String,
    },
    /// Whether a vector field lies in the ideal's module of null fields.
    InJ {
        #[arg(long)]
        vf: String,
    },
    /// Whether two tangent fields define the same class.
    ClassEqual { v: String, w: String },
    /// The canonical pair of a class over the ideal x*y.
    CrossPair {
        #[arg(long)]
        vf: String,
    },
    /// Glues a family of local fields over the opens of a poset file.
    Glue {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        family: String,
    },
    /// Checks the Cartan identities open by open for two families.
    PresheafVerify {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
    /// Parses an expression (or a form) and prints its normal form.
    Parse {
        text: String,
        #[arg(long)]
        form: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Domain(Value),
    Usage(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_syntax() {
            Failure::Usage(error_json(&e))
        } else {
            Failure::Domain(error_json(&e))
        }
    }
}

fn io_error(path: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(json!({"error": "IoError", "message": format!("{path}: {e}")}))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| io_error(path, e))
}

/// Splits at commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn names(vars: &str) -> Vec<String> {
    vars.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn build_ring(args: &RingArgs) -> Result<Ring, Failure> {
    if let Some(path) = &args.ring {
        let doc: RingJson = read_json(path)?;
        return Ok(doc.to_ring()?);
    }
    let names = names(&args.vars);
    if args.dense {
        return Ok(RingPresentation::dense_interior(names)?);
    }
    let free = RingPresentation::free_named(names.clone());
    match &args.ideal {
        None => Ok(free),
        Some(text) => {
            let gens = split_top(text)
                .into_iter()
                .map(|g| parse_poly(g, &free))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(RingPresentation::quotient(names, gens)?)
        }
    }
}

fn ambient(ring: &Ring) -> Ring {
    RingPresentation::free_named(ring.names().to_vec())
}

/// A form from text, or from a form JSON file when prefixed with `@`.
fn form_arg(s: &str, ring: &Ring) -> Result<DifferentialForm, Failure> {
    match s.strip_prefix('@') {
        Some(path) => Ok(read_json::<FormJson>(path)?.to_form(ring)?),
        None => Ok(parse_form(s, ring)?),
    }
}

/// A vector field from comma-separated coefficients, or a JSON file.
fn field_arg(s: &str, ring: &Ring) -> Result<VectorField, Failure> {
    let doc = match s.strip_prefix('@') {
        Some(path) => read_json::<VectorFieldJson>(path)?,
        None => VectorFieldJson {
            coefficients: split_top(s).into_iter().map(String::from).collect(),
        },
    };
    Ok(doc.to_field(ring)?)
}

fn form_out(a: &DifferentialForm, as_json: bool) -> String {
    if as_json {
        json_line(&serde_json::to_value(FormJson::from_form(a)).expect("serializable"))
    } else {
        format!("{}\n", a.display())
    }
}

fn field_out(v: &VectorField, as_json: bool) -> String {
    if as_json {
        json_line(&serde_json::to_value(VectorFieldJson::from_field(v)).expect("serializable"))
    } else {
        format!("({})\n", v.display_coefficients().join(", "))
    }
}

fn json_line(v: &Value) -> String {
    format!("{v}\n")
}

fn flag_line(key: &str, value: bool, as_json: bool) -> String {
    if as_json {
        json_line(&json!({ key: value }))
    } else {
        format!("{value}\n")
    }
}

/// What a verb produced: its stdout, plus a diagnostic when the run found a
/// domain failure (an identity that fails, a field that is not tangent).
struct Report {
    stdout: String,
    failure: Option<Value>,
}

impl From<String> for Report {
    fn from(stdout: String) -> Self {
        Report { stdout, failure: None }
    }
}

fn verify_cartan_cmd(seed: u64, trials: usize, degree: u32, ring: &Ring, as_json: bool) -> Result<Report, Failure> {
    let forms = spanning_forms(ring, degree);
    let mut rng = random::rng(seed);
    let mut failures = [0usize; 5];
    let mut first: Option<Value> = None;
    for trial in 0..trials {
        let v = random::vector_field(&mut rng, ring, 2);
        let w = random::vector_field(&mut rng, ring, 2);
        let report = verify_cartan(ring, &v, &w, &forms)?;
        for (k, r) in report.results.iter().enumerate() {
            if !r.pass {
                failures[k] += 1;
                if first.is_none() {
                    first = Some(json!({
                        "error": "IdentityFailure",
                        "message": format!("identity ({}) fails in trial {trial}", r.identity.label()),
                        "identity": r.identity.label(),
                        "trial": trial,
                        "v": VectorFieldJson::from_field(&v),
                        "w": VectorFieldJson::from_field(&w),
                        "witness": r.witness.as_ref().map(FormJson::from_form),
                    }));
                }
            }
        }
    }
    let pass = failures.iter().all(|&f| f == 0);
    let stdout = if as_json {
        let results: Vec<Value> = CartanIdentity::ALL
            .iter()
            .zip(failures)
            .map(|(id, f)| json!({"identity": id.label(), "pass": f == 0, "failures": f}))
            .collect();
        json_line(&json!({
            "seed": seed,
            "trials": trials,
            "test_forms": forms.len(),
            "pass": pass,
            "results": results,
        }))
    } else {
        let mut s = String::new();
        for (id, f) in CartanIdentity::ALL.iter().zip(failures) {
            let verdict = if f == 0 { "pass" } else { "FAIL" };
            s.push_str(&format!(
                "({}) {}: {verdict} ({}/{trials} trials)\n",
                id.label(),
                id.statement(),
                trials - f
            ));
        }
        s
    };
    Ok(Report { stdout, failure: first })
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let as_json = cli.json;
    let ring = build_ring(&cli.ring)?;
    let out = match &cli.command {
        Command::D { form } => form_out(&form_arg(form, &ring)?.d()?, as_json).into(),
        Command::Wedge { a, b } => {
            form_out(&form_arg(a, &ring)?.wedge(&form_arg(b, &ring)?)?, as_json).into()
        }
        Command::Contract { vf, form } => {
            form_out(&field_arg(vf, &ring)?.contract(&form_arg(form, &ring)?)?, as_json).into()
        }
        Command::Lie { vf, form } => {
            form_out(&field_arg(vf, &ring)?.lie_derivative(&form_arg(form, &ring)?)?, as_json).into()
        }
        Command::Bracket { v, w } => {
            field_out(&field_arg(v, &ring)?.bracket(&field_arg(w, &ring)?)?, as_json).into()
        }
        Command::VerifyCartan { seed, trials, degree } => {
            let free = ambient(&ring);
            verify_cartan_cmd(*seed, *trials, *degree, &free, as_json)?
        }
        Command::Tangent { vf } => {
            let t = TangentField::certify(&field_arg(vf, &ambient(&ring))?, &ring)?;
            let doc = DerClassJson::from_class(&DerClass::new(t.clone()));
            if as_json {
                json_line(&serde_json::to_value(doc).expect("serializable")).into()
            } else {
                let rows: Vec<String> = doc
                    .certificates
                    .iter()
                    .map(|row| format!("[{}]", row.join(", ")))
                    .collect();
                format!("tangent; certificates {}\n", rows.join(" ")).into()
            }
        }
        Command::InJ { vf } => {
            let v = field_arg(vf, &ambient(&ring))?;
            flag_line("in_j", in_j(&v, ring.ideal())?, as_json).into()
        }
        Command::ClassEqual { v, w } => {
            let free = ambient(&ring);
            let a = DerClass::from_field(&field_arg(v, &free)?, &ring)?;
            let b = DerClass::from_field(&field_arg(w, &free)?, &ring)?;
            flag_line("equal", class_equal(&a, &b)?, as_json).into()
        }
        Command::CrossPair { vf } => {
            let a = DerClass::from_field(&field_arg(vf, &ambient(&ring))?, &ring)?;
            let (p, q) = canonical_pair_cross(&a)?;
            let names = ring.names();
            let (p, q) = (p.display(names).to_string(), q.display(names).to_string());
            if as_json {
                json_line(&json!({ "pair": [p, q] })).into()
            } else {
                format!("(\"{p}\",\"{q}\")\n").into()
            }
        }
        Command::Glue { poset, family } => {
            let poset = read_json::<PosetJson>(poset)?.to_poset()?;
            let doc: FamilyJson = read_json(family)?;
            let p = PresheafCDGA::new(poset, ring.clone())?;
            let fam = family_from_json(&p, &doc)?;
            let v = glue_derivations(p.poset().opens(), fam.components())?;
            field_out(&v, as_json).into()
        }
        Command::PresheafVerify { poset, v, w, degree } => {
            let poset = read_json::<PosetJson>(poset)?.to_poset()?;
            let p = PresheafCDGA::new(poset, ring.clone())?;
            let fv = family_from_json(&p, &read_json(v)?)?;
            let fw = family_from_json(&p, &read_json(w)?)?;
            let report = presheaf_cartan_verify(&p, &fv, &fw, &spanning_forms(&ring, *degree))?;
            let doc = presheaf_report_json(&report);
            let failure = (!report.all_pass()).then(|| {
                json!({
                    "error": "IdentityFailure",
                    "message": "an identity fails on some open",
                    "report": doc.clone(),
                })
            });
            let stdout = if as_json {
                json_line(&doc)
            } else {
                let mut s = String::new();
                for (name, rep) in &report.opens {
                    for r in &rep.results {
                        let verdict = if r.pass { "pass" } else { "FAIL" };
                        s.push_str(&format!("{name} ({}): {verdict}\n", r.identity.label()));
                    }
                }
                s
            };
            Report { stdout, failure }
        }
        Command::Parse { text, form } => {
            let normal = if *form {
                parse_form(text, &ring)?.display().to_string()
            } else {
                serialize_expr(&parse_expr(text, ring.names())?, ring.names())?
            };
            if as_json {
                json_line(&json!({ "input": text, "normal": normal })).into()
            } else {
                format!("{normal}\n").into()
            }
        }
    };
    Ok(out)
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(Report { stdout, failure: None }) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Ok(Report {
            stdout,
            failure: Some(diag),
        }) => Outcome {
            code: 1,
            stdout,
            stderr: json_line(&diag),
        },
        Err(Failure::Domain(diag)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: json_line(&diag),
        },
        Err(Failure::Usage(diag)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: json_line(&diag),
        },
    }
}
