//! Report documents. JSON is the canonical form: rationals carry an exact
//! `p/q` string beside an advisory decimal, integers are strings, and curves
//! are always named. The text form is rendered from the same JSON value, so
//! both carry identical exact values.

use num::bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::{
    BoundReport, ConditionFlags, CorrectionDivisor, MatsusakaComparison, ObstructionSet, Tau,
    ThresholdEntry,
};
use crate::cycles::{is_rational_configuration, FundamentalCycle};
use crate::divisor::DivisorClass;
use crate::error::Result;
use crate::lattice::{self, Signature};
use crate::rational::Rational;
use crate::serde_exact::{exact, exact_opt, integer, integer_opt, integer_vec};
use crate::surface::{Positivity, SurfaceModel};
use crate::zariski::ZariskiDecomposition;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs: Inputs,
    pub caveats: Vec<String>,
    pub result: ReportBody,
    pub oracle: Option<OracleSummary>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub surface: String,
    pub surface_name: String,
    pub divisor: Option<String>,
    pub divisor_class: Option<DivisorClass>,
    pub twist: Option<String>,
    pub twist_class: Option<DivisorClass>,
    pub k: Option<u32>,
    #[serde(with = "integer_opt")]
    pub n: Option<BigInt>,
    #[serde(with = "exact_opt")]
    pub box_margin: Option<Rational>,
    /// User-asserted hypotheses, verbatim.
    pub assertions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportBody {
    Validate(SurfaceSummary),
    Zariski(ZariskiBody),
    FundamentalCycles(CyclesBody),
    Exceptional(ExceptionalBody),
    Bounds(Box<BoundReport>),
    Correction(CorrectionDivisor),
    Obstructions(ObstructionSet),
    Tau(Tau),
    Thresholds(ThresholdsBody),
    Matsusaka(MatsusakaComparison),
    Full(Box<FullReport>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub name: String,
    pub effective: bool,
    #[serde(with = "integer")]
    pub self_intersection: BigInt,
    #[serde(with = "integer")]
    pub canonical_degree: BigInt,
    #[serde(with = "integer")]
    pub arithmetic_genus: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub name: String,
    pub rank: usize,
    pub signature: Signature,
    #[serde(with = "integer")]
    pub determinant: BigInt,
    #[serde(with = "integer")]
    pub canonical_square: BigInt,
    pub canonical_is_characteristic: bool,
    pub curves: Vec<CurveSummary>,
    pub ample_reference: Option<DivisorClass>,
}

impl SurfaceSummary {
    pub fn of(model: &SurfaceModel) -> Result<Self> {
        let g = model.lattice();
        let k = model.canonical_coords();
        let curves = model
            .curves()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let class = model.curve_class(i);
                Ok(CurveSummary {
                    name: c.name.clone(),
                    effective: c.effective,
                    self_intersection: g.pair_int(&c.coords, &c.coords),
                    canonical_degree: g.pair_int(&c.coords, k),
                    arithmetic_genus: model.arithmetic_genus(class)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SurfaceSummary {
            name: model.name().to_string(),
            rank: model.rank(),
            signature: lattice::signature(g),
            determinant: lattice::determinant(g),
            canonical_square: g.pair_int(k, k),
            canonical_is_characteristic: lattice::is_characteristic(k, g),
            curves,
            ample_reference: model.ample_reference().cloned(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCoefficient {
    pub curve: String,
    #[serde(with = "exact")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiBody {
    pub divisor: DivisorClass,
    pub positive: DivisorClass,
    pub negative: DivisorClass,
    pub negative_expression: String,
    pub coefficients: Vec<NamedCoefficient>,
    #[serde(with = "exact")]
    pub positive_square: Rational,
    pub kappa_is_two: bool,
}

impl ZariskiBody {
    pub fn of(model: &SurfaceModel, d: &DivisorClass, dec: &ZariskiDecomposition) -> Self {
        let p2 = model.dot(&dec.positive, &dec.positive);
        ZariskiBody {
            divisor: d.clone(),
            positive: dec.positive.clone(),
            negative: dec.negative.clone(),
            negative_expression: model.render_combination(&dec.coefficients),
            coefficients: dec
                .coefficients
                .iter()
                .map(|(i, x)| NamedCoefficient {
                    curve: model.curve_name(*i).to_string(),
                    value: x.clone(),
                })
                .collect(),
            kappa_is_two: p2 > Rational::from_integer(0.into()),
            positive_square: p2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleBody {
    pub curves: Vec<String>,
    #[serde(with = "integer_vec")]
    pub coefficients: Vec<BigInt>,
    pub expression: String,
    /// `−Z²`
    #[serde(with = "integer")]
    pub multiplicity: BigInt,
    #[serde(with = "integer")]
    pub arithmetic_genus: BigInt,
    pub rational: bool,
}

impl CycleBody {
    pub fn of(model: &SurfaceModel, z: &FundamentalCycle) -> Self {
        let terms: Vec<(usize, Rational)> = z
            .curves
            .iter()
            .copied()
            .zip(
                z.coefficients
                    .iter()
                    .map(|c| Rational::from_integer(c.clone())),
            )
            .collect();
        CycleBody {
            curves: model.names(&z.curves),
            coefficients: z.coefficients.clone(),
            expression: model.render_combination(&terms),
            multiplicity: z.multiplicity.clone(),
            arithmetic_genus: z.genus.clone(),
            rational: z.genus == BigInt::from(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclesBody {
    pub cycles: Vec<CycleBody>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalBody {
    pub divisor: DivisorClass,
    pub positivity: Positivity,
    pub curves: Vec<String>,
    pub components: Vec<Vec<String>>,
    pub rational: bool,
    pub contractible: bool,
}

impl ExceptionalBody {
    pub fn of(model: &SurfaceModel, a: &DivisorClass) -> Result<Self> {
        let positivity = model.require_nef_big(a)?;
        let set = model.exceptional_curve(a)?;
        let rational = is_rational_configuration(model, &set)?;
        Ok(ExceptionalBody {
            divisor: a.clone(),
            positivity,
            curves: model.names(&set),
            components: model
                .connected_components(&set)
                .iter()
                .map(|c| model.names(c))
                .collect(),
            rational,
            contractible: rational,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdsBody {
    pub entries: Vec<ThresholdEntry>,
    pub conditions: ConditionFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullReport {
    pub surface: SurfaceSummary,
    pub exceptional: ExceptionalBody,
    pub zariski: Option<ZariskiBody>,
    pub cycles: Vec<CycleBody>,
    pub bounds: BoundReport,
    pub obstructions: ObstructionSet,
    pub matsusaka: Option<MatsusakaComparison>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub agree: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub checks: Vec<OracleCheck>,
}

impl OracleSummary {
    pub fn all_agree(&self) -> bool {
        self.checks.iter().all(|c| c.agree)
    }
}

pub fn to_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("reports always serialize")
}

pub fn from_json(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| crate::error::Error::Parse(e.to_string()))
}

fn is_rational_repr(map: &serde_json::Map<String, Value>) -> Option<String> {
    if map.len() == 2 {
        if let (Some(Value::String(e)), Some(Value::String(d))) =
            (map.get("exact"), map.get("decimal"))
        {
            return Some(if e == d {
                e.clone()
            } else {
                format!("{e} (~{d})")
            });
        }
    }
    None
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(m) => is_rational_repr(m),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items
                .iter()
                .map(|x| match x {
                    Value::Array(_) => None,
                    Value::Object(m) => {
                        is_rational_repr(m).map(|s| s.split(' ').next().unwrap_or("").to_string())
                    }
                    other => scalar(other),
                })
                .collect();
            parts
                .map(|p| format!("[{}]", p.join(", ")))
                .filter(|line| line.len() <= 100)
        }
    }
}

fn walk(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        walk(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        walk(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Indented `key: value` rendering of the JSON form. Rationals appear as
/// `p/q (~decimal)`; vectors of rationals show exact entries only.
pub fn to_text(report: &Report) -> String {
    let value = serde_json::to_value(report).expect("reports always serialize");
    let mut out = String::new();
    walk(&value, 0, &mut out);
    out
}
