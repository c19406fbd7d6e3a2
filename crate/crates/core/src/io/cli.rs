//! Command-line front end. [`run`] is the whole program minus process I/O,
//! so tests can drive it directly.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 oracle mismatch.

use std::path::Path;

use clap::{Parser, ValueEnum};
use num::bigint::BigInt;
use num::traits::Signed;

use super::expr::parse_divisor;
use super::fixtures::embedded;
use super::report::{
    CycleBody, CyclesBody, ExceptionalBody, FullReport, Inputs, OracleCheck, OracleSummary, Report,
    ReportBody, SurfaceSummary, ThresholdsBody, ZariskiBody, REPORT_SCHEMA,
};
use super::surface_file::{parse_surface, parse_surface_str};
use crate::bounds::{
    bound_report, condition_check, enumerate_obstructions, enumerate_obstructions_naive,
    laufer_ramanujam_holds, matsusaka_compare, naive_box_size, obstruction_quadratic, sigma_ek,
    tau, theorem_thresholds, Extended, RingInputs, ThresholdOptions, MODEL_CAVEAT,
    NUMERICAL_CAVEAT,
};
use crate::cycles::{cycle_bruteforce_oracle, fundamental_cycle};
use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::lattice;
use crate::rational::{int, parse_rational, Rational};
use crate::surface::SurfaceModel;
use crate::zariski::{verify_decomposition, zariski_decompose, zariski_oracle};

/// Largest doubled box the obstruction oracle will scan.
pub const NAIVE_BOX_LIMIT: u128 = 2_000_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Zariski,
    Fundcycle,
    Exceptional,
    Bounds,
    Ek,
    Obstructions,
    Tau,
    Thresholds,
    CompareMatsusaka,
    Report,
}

#[derive(Parser, Debug)]
#[command(
    name = "effbounds",
    version,
    about = "Exact effective bounds for |nA+T| on a surface given by its intersection lattice"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Surface file, or the name of a bundled fixture.
    #[arg(long)]
    pub surface: String,
    /// The class A: coordinates "1,2" or an expression "2*s + f". Defaults to the ample reference.
    #[arg(long, allow_hyphen_values = true)]
    pub divisor: Option<String>,
    /// The twist T.
    #[arg(
        short = 'T',
        long = "twist",
        default_value = "0",
        allow_hyphen_values = true
    )]
    pub twist: String,
    #[arg(short = 'k', default_value_t = 0)]
    pub k: u32,
    #[arg(short = 'n', allow_negative_numbers = true)]
    pub n: Option<i64>,
    /// Record the hypothesis that |A| has no fixed part.
    #[arg(long)]
    pub assert_no_fixed_part: bool,
    /// Record the hypothesis that |A| has no base point.
    #[arg(long)]
    pub assert_base_point_free: bool,
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    #[arg(long)]
    pub text: bool,
    /// Cross-check against brute-force oracles; exit 3 on disagreement.
    #[arg(long)]
    pub oracle: bool,
    /// Scale factor (at least 1) for the obstruction search box.
    #[arg(long, default_value = "1")]
    pub box_margin: String,
    /// Comma-separated curve names for `fundcycle`.
    #[arg(long)]
    pub curves: Option<String>,
    /// Degree cut x for the refined threshold.
    #[arg(long)]
    pub x: Option<String>,
    /// l for the ring-generation lemma.
    #[arg(long)]
    pub l: Option<i64>,
    /// p for the ring-generation lemma.
    #[arg(long)]
    pub p: Option<i64>,
    /// The stable H^1(mA) is nonzero (ring-generation lemma).
    #[arg(long)]
    pub v_nonzero: bool,
    /// Fault injection I,J,DELTA: shift one Gram entry of the model used by the main path.
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub inject_gram_fault: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

pub fn load_surface(spec: &str) -> Result<SurfaceModel> {
    let path = Path::new(spec);
    if path.exists() {
        return parse_surface(path);
    }
    match embedded(spec) {
        Some(text) => parse_surface_str(text),
        None => Err(Error::Io(format!(
            "{spec}: no such file or bundled fixture"
        ))),
    }
}

struct Context {
    cli: Cli,
    /// The model as loaded; oracles always run on it.
    model: SurfaceModel,
    /// The model used by the main path (differs only under fault injection).
    main: SurfaceModel,
    inputs: Inputs,
}

impl Context {
    fn divisor(&self) -> std::result::Result<DivisorClass, Failure> {
        match &self.cli.divisor {
            Some(text) => parse_divisor(&self.model, text).map_err(usage),
            None => self
                .model
                .ample_reference()
                .cloned()
                .ok_or(Failure::Domain(Error::NoAmpleReference)),
        }
    }

    fn twist(&self) -> std::result::Result<DivisorClass, Failure> {
        parse_divisor(&self.model, &self.cli.twist).map_err(usage)
    }

    fn options(&self) -> ThresholdOptions {
        let ring = match (self.cli.l, self.cli.p) {
            (Some(l), Some(p)) => Some(RingInputs {
                l: l.into(),
                p: p.into(),
                v_is_zero: !self.cli.v_nonzero,
            }),
            _ => None,
        };
        ThresholdOptions {
            k: self.cli.k,
            n: self.cli.n.map(BigInt::from),
            x: self.cli.x.as_deref().and_then(|x| parse_rational(x).ok()),
            assert_no_fixed_part: self.cli.assert_no_fixed_part,
            assert_base_point_free: self.cli.assert_base_point_free,
            ring,
        }
    }
}

fn parse_fault(text: &str, rank: usize) -> std::result::Result<(usize, usize, i64), Failure> {
    let bad = || {
        Failure::Usage(format!(
            "--inject-gram-fault expects I,J,DELTA within rank {rank}, got '{text}'"
        ))
    };
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let i: usize = parts[0].parse().map_err(|_| bad())?;
    let j: usize = parts[1].parse().map_err(|_| bad())?;
    let d: i64 = parts[2].parse().map_err(|_| bad())?;
    if i >= rank || j >= rank {
        return Err(bad());
    }
    Ok((i, j, d))
}

/// `x·y` straight from the Gram entries, bypassing the model's pairing.
fn raw_pair(model: &SurfaceModel, x: &DivisorClass, y: &DivisorClass) -> Rational {
    let g = model.lattice();
    let mut acc = int(0);
    for (i, xi) in x.coords().iter().enumerate() {
        for (j, yj) in y.coords().iter().enumerate() {
            acc += xi * yj * Rational::from_integer(g.entry(i, j).clone());
        }
    }
    acc
}

/// 𝔐(A,T) recomputed from raw pairings.
fn raw_threshold(model: &SurfaceModel, a: &DivisorClass, t: &DivisorClass) -> Rational {
    let u = model.canonical() - t;
    let ua = raw_pair(model, &u, a) + int(2);
    &ua * &ua / (int(4) * raw_pair(model, a, a)) - raw_pair(model, &u, &u) / int(4)
}

fn check(name: &str, agree: bool, detail: impl Into<String>) -> OracleCheck {
    OracleCheck {
        name: name.to_string(),
        agree,
        detail: detail.into(),
    }
}

fn threshold_checks(
    ctx: &Context,
    a: &DivisorClass,
    t: &DivisorClass,
    main_value: &Rational,
) -> Vec<OracleCheck> {
    let o = &ctx.model;
    let expected = raw_threshold(o, a, t);
    let mut out = vec![check(
        "frak_M",
        &expected == main_value,
        format!("main {main_value}, raw pairing {expected}"),
    )];
    let n = BigInt::from(ctx.cli.n.unwrap_or(0));
    if let Ok(f) = obstruction_quadratic(o, &n, ctx.cli.k, a, t) {
        let rhs = raw_pair(o, a, a)
            * (Rational::from_integer(ctx.cli.k.into()) + main_value - Rational::from_integer(n));
        out.push(check(
            "f(1) identity",
            f.f_at_one == rhs,
            format!("f(1) = {}, A^2(k + M - n) = {rhs}", f.f_at_one),
        ));
    }
    out
}

fn obstruction_checks(
    ctx: &Context,
    a: &DivisorClass,
    t: &DivisorClass,
    main: &crate::bounds::ObstructionSet,
) -> Vec<OracleCheck> {
    let o = &ctx.model;
    let k = ctx.cli.k;
    match naive_box_size(o, a, t, k) {
        Ok(size) if size > NAIVE_BOX_LIMIT => vec![check(
            "obstructions",
            true,
            format!("skipped: doubled box has {size} points"),
        )],
        Ok(_) => match enumerate_obstructions_naive(o, a, t, k) {
            Ok(naive) => vec![check(
                "obstructions",
                naive == *main,
                format!(
                    "pruned {} divisors, naive {}",
                    main.divisors.len(),
                    naive.divisors.len()
                ),
            )],
            Err(e) => vec![check("obstructions", false, format!("oracle failed: {e}"))],
        },
        Err(e) => vec![check("obstructions", false, format!("oracle failed: {e}"))],
    }
}

fn tau_checks(
    ctx: &Context,
    a: &DivisorClass,
    t: &DivisorClass,
    main: &crate::bounds::Tau,
) -> Vec<OracleCheck> {
    let o = &ctx.model;
    let e = match o.exceptional_curve(a) {
        Ok(e) => e,
        Err(err) => return vec![check("tau", false, format!("oracle failed: {err}"))],
    };
    match &main.value {
        Extended::PlusInfinity => vec![check(
            "tau",
            e.is_empty(),
            "+inf exactly when E(A) is empty",
        )],
        Extended::Finite(v) => {
            // the naive scan at level ceil(max(v, 0)) sees every divisor of value <= v
            let level = v.ceil().to_integer().max(BigInt::from(0));
            let Ok(level) = u32::try_from(level) else {
                return vec![check("tau", true, "skipped: level too large")];
            };
            match naive_box_size(o, a, t, level) {
                Ok(size) if size <= NAIVE_BOX_LIMIT => {
                    match enumerate_obstructions_naive(o, a, t, level) {
                        Ok(set) => {
                            let min = set.divisors.iter().map(|d| d.value.clone()).min();
                            let shown =
                                min.as_ref().map_or("none".to_string(), ToString::to_string);
                            vec![check(
                                "tau",
                                min.as_ref() == Some(v),
                                format!("main {v}, naive minimum {shown}"),
                            )]
                        }
                        Err(err) => vec![check("tau", false, format!("oracle failed: {err}"))],
                    }
                }
                _ => vec![check("tau", true, "skipped: doubled box too large")],
            }
        }
    }
}

fn correction_checks(
    ctx: &Context,
    a: &DivisorClass,
    t: &DivisorClass,
    main: &crate::bounds::CorrectionDivisor,
) -> Vec<OracleCheck> {
    let o = &ctx.model;
    let set = match o.exceptional_curve(a) {
        Ok(s) => s,
        Err(err) => return vec![check("E_k", false, format!("oracle failed: {err}"))],
    };
    let det = lattice::determinant(&o.curve_gram(&set)).abs();
    let mut agree = det == main.det_abs && main.sigma.len() == set.len();
    for (idx, &i) in set.iter().enumerate() {
        if !agree {
            break;
        }
        let c = o.curve_class(i);
        let lhs = raw_pair(o, &main.divisor, c);
        agree = lhs == Rational::from_integer(-(&det * &main.sigma[idx]));
    }
    let repaired = laufer_ramanujam_holds(o, &set, &(t - &main.divisor), ctx.cli.k);
    vec![
        check("E_k.C_i = -|det| sigma_i", agree, format!("|det| = {det}")),
        check(
            "repaired Laufer-Ramanujam",
            repaired,
            "(T - E_k).C_i >= K.C_i + k",
        ),
    ]
}

fn zariski_checks(ctx: &Context, d: &DivisorClass, main: &ZariskiBody) -> Vec<OracleCheck> {
    let o = &ctx.model;
    match zariski_oracle(o, d) {
        Ok(dec) => {
            let body = ZariskiBody::of(o, d, &dec);
            let mut out = vec![check(
                "zariski",
                body == *main,
                format!("oracle N = {}", body.negative_expression),
            )];
            let as_dec = crate::zariski::ZariskiDecomposition {
                positive: main.positive.clone(),
                negative: main.negative.clone(),
                coefficients: main
                    .coefficients
                    .iter()
                    .filter_map(|c| o.curve_index(&c.curve).map(|i| (i, c.value.clone())))
                    .collect(),
            };
            let verdict = verify_decomposition(o, d, &as_dec);
            out.push(check(
                "zariski conditions",
                verdict.is_ok(),
                verdict.err().unwrap_or_else(|| "all hold".into()),
            ));
            out
        }
        Err(e) => vec![check("zariski", false, format!("oracle failed: {e}"))],
    }
}

fn cycle_checks(ctx: &Context, main: &[CycleBody]) -> Vec<OracleCheck> {
    let o = &ctx.model;
    let split: Vec<&Vec<String>> = main.iter().map(|z| &z.curves).collect();
    let components = match cycles_for(o, ctx) {
        Ok(pristine) => {
            let expected: Vec<&Vec<String>> = pristine.iter().map(|z| &z.curves).collect();
            check(
                "components",
                expected == split,
                format!("pristine model {expected:?}"),
            )
        }
        Err(_) => check("components", false, "pristine model rejects the curve set"),
    };
    std::iter::once(components)
        .chain(main.iter().map(|z| {
            let idx: Vec<usize> = z.curves.iter().filter_map(|n| o.curve_index(n)).collect();
            let bound = z.coefficients.iter().max().cloned().unwrap_or_default() + BigInt::from(1);
            let bound = u32::try_from(bound).unwrap_or(u32::MAX);
            match cycle_bruteforce_oracle(o, &idx, bound) {
                Ok(c) => check(
                    "fundamental cycle",
                    c.coefficients == z.coefficients,
                    format!(
                        "{}: brute force {:?}",
                        z.curves.join("+"),
                        c.coefficients
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                    ),
                ),
                Err(e) => check(
                    "fundamental cycle",
                    false,
                    format!("{}: oracle failed: {e}", z.curves.join("+")),
                ),
            }
        }))
        .collect()
}

fn cycles_for(model: &SurfaceModel, ctx: &Context) -> std::result::Result<Vec<CycleBody>, Failure> {
    let comps: Vec<Vec<usize>> = if let Some(list) = &ctx.cli.curves {
        let idx = list
            .split(',')
            .map(|n| {
                let n = n.trim();
                model
                    .curve_index(n)
                    .ok_or_else(|| usage(Error::UnknownCurveName(n.to_string())))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        vec![idx]
    } else if ctx.cli.divisor.is_some() || ctx.cli.command == Command::Report {
        let a = ctx.divisor()?;
        let set = model.exceptional_curve(&a)?;
        model.connected_components(&set)
    } else {
        model.connected_components(&model.effective_curves())
    };
    Ok(comps
        .iter()
        .map(|c| fundamental_cycle(model, c).map(|z| CycleBody::of(model, &z)))
        .collect::<Result<Vec<_>>>()?)
}

fn execute(ctx: &Context) -> std::result::Result<(ReportBody, Vec<OracleCheck>), Failure> {
    let m = &ctx.main;
    let oracle = ctx.cli.oracle;
    let margin = parse_rational(&ctx.cli.box_margin).map_err(usage)?;
    let mut checks = Vec::new();
    let body = match ctx.cli.command {
        Command::Validate => {
            let s = SurfaceSummary::of(m)?;
            if oracle {
                let pivots = lattice::congruence_pivots(ctx.model.lattice());
                let product = pivots.iter().fold(int(1), |acc, p| acc * p);
                checks.push(check(
                    "determinant",
                    product == Rational::from_integer(s.determinant.clone()),
                    format!("pivot product {product}"),
                ));
            }
            ReportBody::Validate(s)
        }
        Command::Zariski => {
            let d = ctx.divisor()?;
            let result = zariski_decompose(m, &d);
            if oracle {
                if let Err(e) = &result {
                    if zariski_oracle(&ctx.model, &d).is_ok() {
                        return Err(Failure::Mismatch(format!(
                            "zariski: main path failed ({e}) but the oracle succeeded"
                        )));
                    }
                }
            }
            let body = ZariskiBody::of(m, &d, &result?);
            if oracle {
                checks.extend(zariski_checks(ctx, &d, &body));
            }
            ReportBody::Zariski(body)
        }
        Command::Fundcycle => {
            let cycles = cycles_for(m, ctx)?;
            if oracle {
                checks.extend(cycle_checks(ctx, &cycles));
            }
            ReportBody::FundamentalCycles(CyclesBody { cycles })
        }
        Command::Exceptional => {
            let a = ctx.divisor()?;
            let body = ExceptionalBody::of(m, &a)?;
            if oracle {
                let o = &ctx.model;
                let direct: Vec<String> = o
                    .effective_curves()
                    .into_iter()
                    .filter(|&i| raw_pair(o, &a, o.curve_class(i)) == int(0))
                    .map(|i| o.curve_name(i).to_string())
                    .collect();
                checks.push(check(
                    "E(A)",
                    direct == body.curves,
                    format!("direct scan {direct:?}"),
                ));
            }
            ReportBody::Exceptional(body)
        }
        Command::Bounds => {
            let a = ctx.divisor()?;
            let t = ctx.twist()?;
            let r = bound_report(m, &a, &t, &ctx.options())?;
            if oracle {
                checks.extend(threshold_checks(ctx, &a, &t, &r.frak_m_value));
                checks.extend(tau_checks(ctx, &a, &t, &r.tau));
            }
            ReportBody::Bounds(Box::new(r))
        }
        Command::Ek => {
            let a = ctx.divisor()?;
            let t = ctx.twist()?;
            let e = sigma_ek(m, &a, &t, ctx.cli.k)?;
            if oracle {
                checks.extend(correction_checks(ctx, &a, &t, &e));
            }
            ReportBody::Correction(e)
        }
        Command::Obstructions => {
            let a = ctx.divisor()?;
            let t = ctx.twist()?;
            let set = enumerate_obstructions(m, &a, &t, ctx.cli.k, &margin)?;
            if oracle {
                checks.extend(obstruction_checks(ctx, &a, &t, &set));
            }
            ReportBody::Obstructions(set)
        }
        Command::Tau => {
            let a = ctx.divisor()?;
            let t = ctx.twist()?;
            let v = tau(m, &a, &t)?;
            if oracle {
                checks.extend(tau_checks(ctx, &a, &t, &v));
            }
            ReportBody::Tau(v)
        }
        Command::Thresholds => {
            let a = ctx.divisor()?;
            let t = ctx.twist()?;
            let entries = theorem_thresholds(m, &a, &t, &ctx.options())?;
            if oracle {
                let main_value = crate::bounds::effective_threshold(m, &a, &t)?;
                checks.extend(threshold_checks(ctx, &a, &t, &main_value));
                for e in &entries {
                    if let Some(agree) = e.derived.get("closed_form_agrees") {
                        checks.push(check(
                            &e.id,
                            agree == "true",
                            "M(A, -Z_i - Z_j) against 2 + M(A,0) - (m_i + m_j)/4",
                        ));
                    }
                }
            }
            let conditions = condition_check(m, &a, &t, ctx.cli.k)?;
            ReportBody::Thresholds(ThresholdsBody {
                entries,
                conditions,
            })
        }
        Command::CompareMatsusaka => {
            let a = ctx.divisor()?;
            let c = matsusaka_compare(m, &a)?;
            if oracle {
                let zero = DivisorClass::zero(ctx.model.rank());
                let expected = int(2) + raw_threshold(&ctx.model, &a, &zero);
                checks.push(check(
                    "2 + frak_M(H,0)",
                    expected == c.lattice.value,
                    format!("raw pairing {expected}"),
                ));
            }
            ReportBody::Matsusaka(c)
        }
        Command::Report => {
            let a = ctx.divisor()?;
            let t = ctx.twist()?;
            let surface = SurfaceSummary::of(m)?;
            let exceptional = ExceptionalBody::of(m, &a)?;
            let zariski = zariski_decompose(m, &a)
                .ok()
                .map(|dec| ZariskiBody::of(m, &a, &dec));
            let set = m.exceptional_curve(&a)?;
            let cycles = m
                .connected_components(&set)
                .iter()
                .map(|c| fundamental_cycle(m, c).map(|z| CycleBody::of(m, &z)))
                .collect::<Result<Vec<_>>>()?;
            let bounds = bound_report(m, &a, &t, &ctx.options())?;
            let obstructions = enumerate_obstructions(m, &a, &t, ctx.cli.k, &margin)?;
            let matsusaka = matsusaka_compare(m, &a).ok();
            if oracle {
                if let Some(z) = &zariski {
                    checks.extend(zariski_checks(ctx, &a, z));
                }
                checks.extend(cycle_checks(ctx, &cycles));
                checks.extend(threshold_checks(ctx, &a, &t, &bounds.frak_m_value));
                checks.extend(tau_checks(ctx, &a, &t, &bounds.tau));
                checks.extend(obstruction_checks(ctx, &a, &t, &obstructions));
            }
            ReportBody::Full(Box::new(FullReport {
                surface,
                exceptional,
                zariski,
                cycles,
                bounds,
                obstructions,
                matsusaka,
            }))
        }
    };
    Ok((body, checks))
}

fn command_name(c: Command) -> String {
    c.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

/// Runs the tool on `argv` (including the program name).
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            };
        }
    };
    let json = cli.json;
    match prepare(cli).and_then(|mut ctx| match execute(&ctx) {
        Ok((body, checks)) => Ok((ctx, body, checks)),
        Err(Failure::Domain(e)) if ctx.cli.oracle && ctx.main != ctx.model => {
            // a main-path error the pristine model does not reproduce is a mismatch
            ctx.main = ctx.model.clone();
            match execute(&ctx) {
                Ok(_) => Err(Failure::Mismatch(format!(
                    "main path failed ({e}) but the pristine model succeeded"
                ))),
                Err(_) => Err(Failure::Domain(e)),
            }
        }
        Err(f) => Err(f),
    }) {
        Ok((ctx, body, checks)) => {
            let oracle = ctx.cli.oracle.then_some(OracleSummary { checks });
            let mismatch = oracle.as_ref().is_some_and(|o| !o.all_agree());
            let mut caveats = vec![MODEL_CAVEAT.to_string(), NUMERICAL_CAVEAT.to_string()];
            caveats.extend(
                ctx.inputs
                    .assertions
                    .iter()
                    .map(|a| format!("user-asserted hypothesis: {a}")),
            );
            let report = Report {
                schema: REPORT_SCHEMA,
                command: command_name(ctx.cli.command),
                inputs: ctx.inputs,
                caveats,
                result: body,
                oracle,
            };
            let stdout = if json {
                super::report::to_json(&report) + "\n"
            } else {
                super::report::to_text(&report)
            };
            if mismatch {
                let failed: Vec<String> = report
                    .oracle
                    .iter()
                    .flat_map(|o| o.checks.iter().filter(|c| !c.agree))
                    .map(|c| format!("{}: {}", c.name, c.detail))
                    .collect();
                Outcome {
                    stdout,
                    stderr: format!("oracle mismatch: {}\n", failed.join("; ")),
                    code: 3,
                }
            } else {
                Outcome {
                    stdout,
                    stderr: String::new(),
                    code: 0,
                }
            }
        }
        Err(Failure::Usage(msg)) => Outcome {
            stdout: String::new(),
            stderr: format!("usage error: {msg}\n"),
            code: 2,
        },
        Err(Failure::Domain(e)) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: 1,
        },
        Err(Failure::Mismatch(msg)) => Outcome {
            stdout: String::new(),
            stderr: format!("oracle mismatch: {msg}\n"),
            code: 3,
        },
    }
}

fn prepare(cli: Cli) -> std::result::Result<Context, Failure> {
    let model = load_surface(&cli.surface)?;
    let main = match &cli.inject_gram_fault {
        Some(spec) => {
            let (i, j, d) = parse_fault(spec, model.rank())?;
            model.with_perturbed_entry(i, j, d)
        }
        None => model.clone(),
    };
    if let Some(x) = &cli.x {
        parse_rational(x).map_err(usage)?;
    }
    let margin = parse_rational(&cli.box_margin).map_err(usage)?;
    let mut assertions = Vec::new();
    if cli.assert_no_fixed_part {
        assertions.push("|A| has no fixed part".to_string());
    }
    if cli.assert_base_point_free {
        assertions.push("|A| has no base point".to_string());
    }
    let needs_divisor = !matches!(cli.command, Command::Validate | Command::Fundcycle);
    let mut ctx = Context {
        inputs: Inputs {
            surface: cli.surface.clone(),
            surface_name: model.name().to_string(),
            k: Some(cli.k),
            n: cli.n.map(BigInt::from),
            box_margin: Some(margin),
            assertions,
            ..Inputs::default()
        },
        cli,
        model,
        main,
    };
    if needs_divisor || ctx.cli.divisor.is_some() {
        let a = ctx.divisor()?;
        ctx.inputs.divisor = Some(
            ctx.cli
                .divisor
                .clone()
                .unwrap_or_else(|| "ample_reference".into()),
        );
        ctx.inputs.divisor_class = Some(a);
        let t = ctx.twist()?;
        ctx.inputs.twist = Some(ctx.cli.twist.clone());
        ctx.inputs.twist_class = Some(t);
    }
    Ok(ctx)
}
