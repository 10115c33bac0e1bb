//! JSON documents for rings, forms, vector fields, classes, posets and
//! reports. Expressions travel as strings in the text syntax of [`crate::parse`].

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cartan::{CartanIdentity, IdentityReport, IdentityResult, VectorField};
use crate::derquot::DerClass;
use crate::error::{Error, Result};
use crate::expr::{Poly, Rational};
use crate::forms::DifferentialForm;
use crate::parse::parse_poly;
use crate::ring::{IdealPresentation, Ring, RingHom, RingPresentation};
use crate::site::{
    Interval, LocalDerivationFamily, Open, OpenBox, OpenPoset, PresheafCDGA, PresheafReport,
    Region, SquareReport,
};

fn show(p: &Poly, ring: &Ring) -> String {
    p.display(ring.names()).to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingJson {
    pub generators: Vec<String>,
    #[serde(default)]
    pub ideal: Vec<String>,
}

impl RingJson {
    pub fn from_ring(ring: &Ring) -> Self {
        RingJson {
            generators: ring.names().to_vec(),
            ideal: ring.ideal().generators().iter().map(|g| show(g, ring)).collect(),
        }
    }

    pub fn to_ring(&self) -> Result<Ring> {
        let free = RingPresentation::new(
            self.generators.clone(),
            IdealPresentation::zero(self.generators.len()),
        )?;
        let gens = self
            .ideal
            .iter()
            .map(|s| parse_poly(s, &free))
            .collect::<Result<Vec<_>>>()?;
        RingPresentation::quotient(self.generators.clone(), gens)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomJson {
    pub images: Vec<String>,
}

impl HomJson {
    pub fn from_hom(f: &RingHom) -> Self {
        HomJson {
            images: f.images().iter().map(|p| show(p, f.target())).collect(),
        }
    }

    pub fn to_hom(&self, source: &Ring, target: &Ring) -> Result<RingHom> {
        let images = self
            .images
            .iter()
            .map(|s| parse_poly(s, target))
            .collect::<Result<Vec<_>>>()?;
        RingHom::new(source.clone(), target.clone(), images)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub idx: Vec<usize>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    /// `None` for the zero form and for inhomogeneous forms.
    pub degree: Option<usize>,
    pub terms: Vec<TermJson>,
}

impl FormJson {
    pub fn from_form(a: &DifferentialForm) -> Self {
        FormJson {
            degree: a.degree(),
            terms: a
                .terms()
                .map(|(b, c)| TermJson {
                    idx: b.indices(),
                    coef: show(c, a.ring()),
                })
                .collect(),
        }
    }

    pub fn to_form(&self, ring: &Ring) -> Result<DifferentialForm> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.idx.clone(), parse_poly(&t.coef, ring)?)))
            .collect::<Result<Vec<_>>>()?;
        DifferentialForm::from_terms(ring, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorFieldJson {
    pub coefficients: Vec<String>,
}

impl VectorFieldJson {
    pub fn from_field(v: &VectorField) -> Self {
        VectorFieldJson {
            coefficients: v.display_coefficients(),
        }
    }

    pub fn to_field(&self, ring: &Ring) -> Result<VectorField> {
        let c = self
            .coefficients
            .iter()
            .map(|s| parse_poly(s, ring))
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(ring, c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityJson {
    pub identity: String,
    pub pass: bool,
    pub witness: Option<FormJson>,
}

impl IdentityJson {
    pub fn from_result(r: &IdentityResult) -> Self {
        IdentityJson {
            identity: r.identity.label().to_string(),
            pass: r.pass,
            witness: r.witness.as_ref().map(FormJson::from_form),
        }
    }

    pub fn from_report(r: &IdentityReport) -> Vec<Self> {
        r.results.iter().map(IdentityJson::from_result).collect()
    }

    pub fn to_result(&self, ring: &Ring) -> Result<IdentityResult> {
        Ok(IdentityResult {
            identity: CartanIdentity::from_label(&self.identity)
                .ok_or_else(|| Error::Invalid(format!("unknown identity {}", self.identity)))?,
            pass: self.pass,
            witness: self.witness.as_ref().map(|w| w.to_form(ring)).transpose()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerClassJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    pub ideal: Vec<String>,
    pub coefficients: Vec<String>,
    #[serde(default)]
    pub certificates: Vec<Vec<String>>,
}

impl DerClassJson {
    pub fn from_class(a: &DerClass) -> Self {
        let q = a.quotient();
        DerClassJson {
            generators: Some(q.names().to_vec()),
            ideal: q.ideal().generators().iter().map(|g| show(g, q)).collect(),
            coefficients: a.field().display_coefficients(),
            certificates: a
                .representative()
                .certificates()
                .iter()
                .map(|row| row.iter().map(|c| show(c, q)).collect())
                .collect(),
        }
    }

    /// Rebuilds the class, recomputing the certificates. `default_names` is
    /// used when the document does not list generators.
    pub fn to_class(&self, default_names: &[String]) -> Result<DerClass> {
        let names = self
            .generators
            .clone()
            .unwrap_or_else(|| default_names.to_vec());
        let quotient = RingJson {
            generators: names.clone(),
            ideal: self.ideal.clone(),
        }
        .to_ring()?;
        let ambient = RingPresentation::new(names.clone(), IdealPresentation::zero(names.len()))?;
        let v = VectorFieldJson {
            coefficients: self.coefficients.clone(),
        }
        .to_field(&ambient)?;
        DerClass::from_field(&v, &quotient)
    }
}

fn rational_from_value(v: &Value) -> Result<Option<Rational>> {
    match v {
        Value::Null => Ok(None),
        Value::Number(n) => {
            // decimal text is exact; fall back to the binary value for exponents
            if let Ok(Some(q)) = rational_from_value(&Value::String(n.to_string())) {
                return Ok(Some(q));
            }
            let f = n.as_f64().ok_or_else(|| Error::Invalid(format!("bad number {n}")))?;
            Rational::from_float(f)
                .map(Some)
                .ok_or_else(|| Error::Invalid(format!("bad number {n}")))
        }
        Value::String(s) => {
            let e = crate::parse::parse_expr(s, &[])?;
            match Poly::from_expr(&e)?.as_constant() {
                Some(q) => Ok(Some(q)),
                None => Err(Error::Invalid(format!("interval end {s} is not a number"))),
            }
        }
        other => Err(Error::Invalid(format!("bad interval end {other}"))),
    }
}

fn rational_to_value(q: &Option<Rational>) -> Value {
    match q {
        None => Value::Null,
        Some(q) => match (q.is_integer(), q.numer().to_i64()) {
            (true, Some(i)) => json!(i),
            _ => json!(q.to_string()),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenJson {
    pub name: String,
    /// `"all"` or a list of boxes, each a list of `[lo, hi]` pairs; `null`
    /// ends are infinite and strings like `"1/2"` are exact.
    pub boxes: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosetJson {
    pub opens: Vec<OpenJson>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

fn region_from_value(v: &Value) -> Result<Region> {
    if v.as_str() == Some("all") {
        return Ok(Region::All);
    }
    let bad = || Error::InvalidPoset(format!("bad region {v}"));
    let boxes = v.as_array().ok_or_else(bad)?;
    let mut out = Vec::with_capacity(boxes.len());
    for b in boxes {
        let mut intervals = Vec::new();
        for pair in b.as_array().ok_or_else(bad)? {
            match pair.as_array().map(Vec::as_slice) {
                Some([lo, hi]) => {
                    intervals.push(Interval::new(rational_from_value(lo)?, rational_from_value(hi)?))
                }
                _ => return Err(bad()),
            }
        }
        out.push(OpenBox(intervals));
    }
    Ok(Region::Boxes(out))
}

fn region_to_value(r: &Region) -> Value {
    match r {
        Region::All => json!("all"),
        Region::Boxes(bs) => Value::Array(
            bs.iter()
                .map(|b| {
                    Value::Array(
                        b.0.iter()
                            .map(|i| json!([rational_to_value(&i.lo), rational_to_value(&i.hi)]))
                            .collect(),
                    )
                })
                .collect(),
        ),
    }
}

impl PosetJson {
    pub fn from_poset(p: &OpenPoset) -> Self {
        let n = p.len();
        let mut leq = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && p.leq(i, j) {
                    leq.push((p.open(i).name.clone(), p.open(j).name.clone()));
                }
            }
        }
        PosetJson {
            opens: p
                .opens()
                .iter()
                .map(|o| OpenJson {
                    name: o.name.clone(),
                    boxes: region_to_value(&o.region),
                })
                .collect(),
            leq,
        }
    }

    pub fn to_poset(&self) -> Result<OpenPoset> {
        let opens = self
            .opens
            .iter()
            .map(|o| Ok(Open::new(o.name.clone(), region_from_value(&o.boxes)?)))
            .collect::<Result<Vec<_>>>()?;
        OpenPoset::new(opens, &self.leq)
    }
}

/// Open name to vector field.
pub type FamilyJson = BTreeMap<String, VectorFieldJson>;

pub fn family_from_json(p: &PresheafCDGA, doc: &FamilyJson) -> Result<LocalDerivationFamily> {
    let fields = doc
        .iter()
        .map(|(k, v)| Ok((k.clone(), v.to_field(p.ring())?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    LocalDerivationFamily::new(p, &fields)
}

pub fn presheaf_report_json(r: &PresheafReport) -> Value {
    json!({
        "pass": r.all_pass(),
        "opens": r.opens.iter().map(|(name, rep)| json!({
            "open": name,
            "results": IdentityJson::from_report(rep),
        })).collect::<Vec<_>>(),
    })
}

pub fn square_report_json(r: &SquareReport) -> Value {
    match &r.failure {
        None => json!({"commutes": true, "witness": null}),
        Some(f) => json!({
            "commutes": false,
            "witness": {
                "upper": f.upper,
                "lower": f.lower,
                "operator": f.operator,
                "form": FormJson::from_form(&f.form),
                "point": f.point,
            }
        }),
    }
}

/// Structured diagnostics for an error.
pub fn error_json(e: &Error) -> Value {
    let mut v = json!({"error": e.kind(), "message": e.to_string()});
    let extra = match e {
        Error::NotTangent {
            generator,
            reduction,
        } => json!({"generator": generator, "reduction": reduction}),
        Error::Incompatible {
            first,
            second,
            witness,
        } => json!({"pair": [first, second], "witness": witness}),
        Error::Syntax { column, .. } => json!({"column": column}),
        Error::NotRelated { generator } | Error::InvalidHom { generator } => {
            json!({"generator": generator})
        }
        _ => json!({}),
    };
    if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;
    use crate::parse::parse_form;

    #[test]
    fn ring_round_trip() {
        let doc: RingJson = serde_json::from_str(r#"{"generators":["x","y"],"ideal":["x*y"]}"#).unwrap();
        let r = doc.to_ring().unwrap();
        assert_eq!(r.n(), 2);
        assert!(!r.is_free());
        assert_eq!(RingJson::from_ring(&r), doc);
        let free: RingJson = serde_json::from_str(r#"{"generators":["u"]}"#).unwrap();
        assert!(free.to_ring().unwrap().is_free());
    }

    #[test]
    fn form_round_trip() {
        let r = RingPresentation::free_named(vec!["x".into(), "y".into()]);
        let a = parse_form("2*x d(x)^d(y)", &r).unwrap();
        let doc = FormJson::from_form(&a);
        assert_eq!(
            serde_json::to_value(&doc).unwrap(),
            json!({"degree": 2, "terms": [{"idx": [0, 1], "coef": "2*x"}]})
        );
        assert_eq!(doc.to_form(&r).unwrap(), a);
        let swapped: FormJson =
            serde_json::from_value(json!({"degree": 2, "terms": [{"idx": [1, 0], "coef": "1"}]})).unwrap();
        assert_eq!(swapped.to_form(&r).unwrap(), parse_form("-d(x)^d(y)", &r).unwrap());
    }

    #[test]
    fn vector_field_and_report() {
        let r = RingPresentation::free_named(vec!["x".into(), "y".into()]);
        let doc: VectorFieldJson = serde_json::from_str(r#"{"coefficients":["x*y","0"]}"#).unwrap();
        let v = doc.to_field(&r).unwrap();
        assert_eq!(VectorFieldJson::from_field(&v), doc);
        let res = IdentityResult {
            identity: CartanIdentity::III,
            pass: true,
            witness: None,
        };
        assert_eq!(
            serde_json::to_value(IdentityJson::from_result(&res)).unwrap(),
            json!({"identity": "iii", "pass": true, "witness": null})
        );
    }

    #[test]
    fn derclass_round_trip() {
        let doc: DerClassJson = serde_json::from_value(json!({
            "ideal": ["x*y"], "coefficients": ["x", "0"], "certificates": [["1"]]
        }))
        .unwrap();
        let class = doc.to_class(&["x".into(), "y".into()]).unwrap();
        let back = DerClassJson::from_class(&class);
        assert_eq!(back.certificates, vec![vec!["1".to_string()]]);
        assert_eq!(back.coefficients, doc.coefficients);
    }

    #[test]
    fn poset_document() {
        let doc: PosetJson = serde_json::from_value(json!({
            "opens": [{"name": "M", "boxes": "all"}, {"name": "U", "boxes": [[[-1, 1]]]},
                      {"name": "V", "boxes": [[["-1/2", null]]]}],
            "leq": [["U", "M"], ["V", "M"]]
        }))
        .unwrap();
        let p = doc.to_poset().unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.open(2).region, Region::Boxes(vec![OpenBox(vec![Interval::new(Some(rat(-1, 2)), None)])]));
        let again = PosetJson::from_poset(&p).to_poset().unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn diagnostics() {
        let e = Error::NotTangent {
            generator: 0,
            reduction: "y".into(),
        };
        assert_eq!(
            error_json(&e),
            json!({"error": "NotTangent", "message": e.to_string(), "generator": 0, "reduction": "y"})
        );
    }
}
