//! Theorem-by-theorem thresholds on `n` and the aggregated [`BoundReport`].
//!
//! Every entry carries its exact rational threshold `q` for a condition
//! `n > q` together with the least integer meeting it. An entry whose
//! hypotheses fail on the given model is kept with an explanation instead
//! of being dropped.

use std::collections::BTreeMap;
use std::fmt::Display;

use num::bigint::BigInt;
use num::traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::correction::{
    condition_check, sigma_ek, tilde_e0, ConditionFlags, CorrectionDivisor, TildeE0,
};
use super::formulas::{
    effective_threshold, hodge_defect, larger_root_bracket, least_admissible_n,
    obstruction_quadratic, refined_degree_threshold, ring_generation_bound, HodgeDefect,
    ObstructionQuadratic, RootBracket, StrictBound,
};
use super::obstructions::{enumerate_obstructions, tau, Extended, Tau};
use crate::cycles::{fundamental_cycle, is_rational_configuration};
use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::rational::{int, least_integer_above, render, Rational};
use crate::serde_exact::{exact, integer, integer_opt};
use crate::surface::{Positivity, SurfaceModel};

pub const MODEL_CAVEAT: &str =
    "relative to the supplied curve model: nefness, ampleness and E(A) are only as complete as the listed curves";
pub const NUMERICAL_CAVEAT: &str = "divisors are handled up to numerical equivalence";

/// Side inputs for the ring-generation lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingInputs {
    pub l: BigInt,
    pub p: BigInt,
    pub v_is_zero: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ThresholdOptions {
    pub k: u32,
    /// Degree at which to evaluate very-ampleness statements and `f(x)`.
    pub n: Option<BigInt>,
    /// Degree cut for the refined `D·A < x` threshold.
    pub x: Option<Rational>,
    /// User assertion that `|A|` has no fixed part.
    pub assert_no_fixed_part: bool,
    /// User assertion that `|A|` has no base point.
    pub assert_base_point_free: bool,
    pub ring: Option<RingInputs>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdEntry {
    pub id: String,
    pub statement: String,
    /// `None` when the entry is omitted.
    pub threshold: Option<StrictBound>,
    /// Named auxiliary quantities, rendered exactly.
    pub derived: BTreeMap<String, String>,
    pub hypotheses: Vec<String>,
    pub caveats: Vec<String>,
    pub omitted: Option<String>,
}

impl ThresholdEntry {
    fn new(id: impl Into<String>, statement: impl Into<String>) -> Self {
        ThresholdEntry {
            id: id.into(),
            statement: statement.into(),
            threshold: None,
            derived: BTreeMap::new(),
            hypotheses: Vec::new(),
            caveats: vec![MODEL_CAVEAT.to_string(), NUMERICAL_CAVEAT.to_string()],
            omitted: None,
        }
    }

    fn bound(mut self, q: Rational) -> Self {
        self.threshold = Some(StrictBound::new(q));
        self
    }

    fn derive(mut self, key: &str, value: impl Display) -> Self {
        self.derived.insert(key.to_string(), value.to_string());
        self
    }

    fn hypothesis(mut self, h: impl Into<String>) -> Self {
        self.hypotheses.push(h.into());
        self
    }

    fn caveat(mut self, c: impl Into<String>) -> Self {
        self.caveats.push(c.into());
        self
    }

    fn omit(mut self, reason: impl Into<String>) -> Self {
        self.threshold = None;
        self.omitted = Some(reason.into());
        self
    }

    pub fn is_omitted(&self) -> bool {
        self.omitted.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingCase {
    RationalExceptionalCurve,
    NoFixedPart,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingGeneration {
    #[serde(with = "integer")]
    pub l: BigInt,
    #[serde(with = "integer")]
    pub p: BigInt,
    /// Bound that `2m` must exceed.
    #[serde(with = "exact")]
    pub bound: Rational,
    #[serde(with = "integer")]
    pub least_m: BigInt,
    pub case: RingCase,
}

/// Least `m` with `R_{nm} = R_m^n` for all `n ≥ 1`. The rational case is
/// checked on the model; the no-fixed-part case must be asserted.
pub fn ring_generation_threshold(
    model: &SurfaceModel,
    a: &DivisorClass,
    assert_no_fixed_part: bool,
) -> Result<RingGeneration> {
    let set = model.exceptional_curve(a)?;
    let zero = DivisorClass::zero(model.rank());
    let m0 = least_admissible_n(model, a, &zero)?;
    let l = BigInt::one() + &m0;
    let a2 = model.dot(a, a);
    let lq = Rational::from_integer(l.clone());
    let (case, p) = if is_rational_configuration(model, &set)? {
        (RingCase::RationalExceptionalCurve, m0.clone())
    } else if assert_no_fixed_part {
        let e1 = sigma_ek(model, a, &zero, 1)?;
        let m1 = least_admissible_n(model, a, &-&e1.divisor)?;
        (RingCase::NoFixedPart, BigInt::one() + m0.clone().max(m1))
    } else {
        return Err(Error::UnverifiableHypothesis(
            "E(A) is not rational and |A| having no fixed part was not asserted".into(),
        ));
    };
    if !l.is_positive() || !p.is_positive() {
        return Err(Error::NonpositiveLP {
            l: l.to_string(),
            p: p.to_string(),
        });
    }
    let pq = Rational::from_integer(p.clone());
    let first = int(2) * &lq + &pq + int(1);
    let second = match case {
        RingCase::RationalExceptionalCurve => {
            int(3) * &lq + int(3) + model.dot(model.canonical(), a) / &a2
        }
        RingCase::NoFixedPart => {
            // the lemma is applied with ℓ + 1, so k = (ℓ+1)²A²
            let l1 = &lq + int(1);
            &l1 * &l1 * &a2 + effective_threshold(model, a, &zero)? + &lq + int(1)
        }
    };
    let bound = first.max(second);
    let least_m = least_integer_above(&(&bound / int(2)));
    Ok(RingGeneration {
        l,
        p,
        bound,
        least_m,
        case,
    })
}

fn shifted(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
    offset: i64,
) -> Result<Rational> {
    Ok(int(offset) + effective_threshold(model, a, t)?)
}

fn or_omit(
    entry: ThresholdEntry,
    build: impl FnOnce(ThresholdEntry) -> Result<ThresholdEntry>,
) -> ThresholdEntry {
    let fallback = entry.clone();
    build(entry).unwrap_or_else(|e| fallback.omit(e.to_string()))
}

fn degree_formula(m: &BigInt) -> String {
    let c = m + BigInt::one();
    if c.is_negative() {
        format!("n + {}", -c)
    } else {
        format!("n - {c}")
    }
}

/// All theorem thresholds for `(A, T)`.
pub fn theorem_thresholds(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
    opts: &ThresholdOptions,
) -> Result<Vec<ThresholdEntry>> {
    let pos = model.require_nef_big(a)?;
    let set = model.exceptional_curve(a)?;
    let zero = DivisorClass::zero(model.rank());
    let k = opts.k;
    let kq = Rational::from_integer(k.into());
    let frak_m = effective_threshold(model, a, t)?;
    let least_m = least_integer_above(&frak_m);
    let frak_m0 = effective_threshold(model, a, &zero)?;
    let rational = is_rational_configuration(model, &set)?;
    let mut out = Vec::new();

    // obstruction theorem
    let mut main = ThresholdEntry::new(
        "main",
        format!("if |nA+T| is not ({})-very ample, some effective D != 0 has T.D - K.D - D^2 <= {k} and D.A = 0", k as i64 - 1),
    )
    .bound(&kq + &frak_m)
    .derive("frak_M(A,T)", render(&frak_m))
    .hypothesis("A nef and big");
    let hd = hodge_defect(model, a, t)?;
    main = main.derive("h", render(&hd.value));
    if k == 0 {
        if let Some(lambda) = &hd.proportionality {
            main = main
                .derive("lambda", render(lambda))
                .derive("least_n_proportional_branch", frak_m.ceil().to_integer())
                .caveat("T - K = lambda*A holds numerically; the n >= frak_M branch needs linear equivalence");
        }
    }
    main = or_omit(main, |e| {
        let obs = enumerate_obstructions(model, a, t, k, &int(1))?;
        Ok(e.derive("obstructions", obs.divisors.len()))
    });
    out.push(main);

    // ample case
    let mut cor13 = ThresholdEntry::new(
        "cor1.3",
        format!(
            "|nA+T| is ({})-very ample; equivalently (n - frak_m - 1)-very ample for n >= frak_m",
            k as i64 - 1
        ),
    )
    .hypothesis("A ample");
    cor13 = if pos.ample_model {
        let mut e = cor13
            .bound(&kq + &frak_m)
            .derive("frak_m(A,T)", &least_m)
            .derive("very_ample_degree", degree_formula(&least_m));
        if let Some(n) = &opts.n {
            e = e.derive("very_ample_degree_at_n", n - &least_m - BigInt::one());
        }
        e
    } else {
        cor13.omit("A is not ample on the model")
    };
    out.push(cor13);

    // τ refinement
    let cor14 = ThresholdEntry::new(
        "cor1.4",
        "|nA+T| is min{tau - 2, n - frak_m - 1}-very ample for n >= frak_m",
    )
    .hypothesis("tau(A,T) >= 1");
    out.push(or_omit(cor14, |e| {
        let tv = tau(model, a, t)?;
        let e = e.derive("tau", &tv.value).derive("frak_m(A,T)", &least_m);
        if let Extended::Finite(v) = &tv.value {
            if *v < int(1) {
                return Ok(e.omit(format!("tau = {v} < 1")));
            }
        }
        let mut e = e.bound(Rational::from_integer(&least_m - BigInt::one()));
        if let Some(n) = &opts.n {
            let by_n = Rational::from_integer(n - &least_m - BigInt::one());
            let degree = match &tv.value {
                Extended::Finite(v) => by_n.min(v - int(2)),
                Extended::PlusInfinity => by_n,
            };
            e = e.derive("very_ample_degree_at_n", render(&degree));
        }
        Ok(e)
    }));

    // Laufer–Ramanujam case
    let flags = condition_check(model, a, t, k)?;
    let lr = ThresholdEntry::new(
        "cor4.3(1)",
        format!("|nA+T| is ({})-very ample", k as i64 - 1),
    )
    .hypothesis(format!("T.C >= K.C + {k} on E(A)"));
    out.push(if flags.laufer_ramanujam {
        lr.bound(&kq + &frak_m)
    } else {
        lr.omit(format!("Laufer-Ramanujam inequality fails for k = {k}"))
    });

    let h1 = ThresholdEntry::new("cor4.3(2).h1", "h^1(nA) = 0").hypothesis("E(A) rational");
    let bpf =
        ThresholdEntry::new("cor4.3(2).bpf", "|nA| is base point free").hypothesis("E(A) rational");
    if rational {
        out.push(h1.bound(frak_m0.clone()));
        out.push(bpf.bound(int(1) + &frak_m0));
    } else {
        out.push(h1.omit("E(A) is not rational"));
        out.push(bpf.omit("E(A) is not rational"));
    }

    // corrected twist
    let repair = ThresholdEntry::new(
        "lr-repair",
        format!("|nA+T-E_{k}| is ({})-very ample", k as i64 - 1),
    );
    out.push(or_omit(repair, |e| {
        let ek = sigma_ek(model, a, t, k)?;
        Ok(
            e.bound(&kq + effective_threshold(model, a, &(t - &ek.divisor))?)
                .derive(&format!("E_{k}"), &ek.expression),
        )
    }));

    let t44_1 = ThresholdEntry::new(
        "thm4.4(1)",
        "h^1(nA+T) = h^1(O_E0(nA+T)), a periodic function of n",
    )
    .caveat("threshold only: the periodic h^1 value is not computed");
    out.push(or_omit(t44_1, |e| {
        let e0 = sigma_ek(model, a, t, 0)?;
        Ok(e.bound(effective_threshold(model, a, &(t - &e0.divisor))?)
            .derive("E_0", &e0.expression))
    }));

    let t44_2 = ThresholdEntry::new("thm4.4(2)", "the fixed part of |nA+T| is bounded by E_1")
        .caveat("threshold only: the fixed part itself is not computed");
    out.push(or_omit(t44_2, |e| {
        let e1 = sigma_ek(model, a, t, 1)?;
        Ok(e.bound(shifted(model, a, &(t - &e1.divisor), 1)?)
            .derive("E_1", &e1.expression))
    }));

    // split of E_1 (T = 0) along each rational component
    let e1_zero = sigma_ek(model, a, &zero, 1);
    for comp in model.connected_components(&set) {
        let names = model.names(&comp).join("+");
        let entry = ThresholdEntry::new(
            format!("thm4.4(3)[{names}]"),
            format!("the component {names} is not in the fixed part of |nA|, which lies in E_1''"),
        )
        .hypothesis(format!("component {names} rational"));
        out.push(or_omit(entry, |e| {
            if !is_rational_configuration(model, &comp)? {
                return Ok(e.omit(format!("component {names} is not rational")));
            }
            let e1 = e1_zero.clone()?;
            let mut outside: Vec<(usize, Rational)> = Vec::new();
            let mut inside: Vec<(usize, Rational)> = Vec::new();
            for (name, c) in e1.curves.iter().zip(&e1.coefficients) {
                let i = model
                    .curve_index(name)
                    .expect("curve names come from the model");
                let term = (i, Rational::from_integer(c.clone()));
                if comp.contains(&i) {
                    inside.push(term);
                } else {
                    outside.push(term);
                }
            }
            let e1pp = model.combination(&outside);
            Ok(e.bound(shifted(model, a, &-&e1pp, 1)?)
                .derive("E_1'", model.render_combination(&inside))
                .derive("E_1''", model.render_combination(&outside)))
        }));
    }

    let nfp = "|A| has no fixed part (asserted, not verified)";
    let t45_1 = ThresholdEntry::new("thm4.5(1)", "|nA| has no base points").hypothesis(nfp);
    let t45_2 = ThresholdEntry::new(
        "thm4.5(2)",
        "h^0(nA+T) = chi(nA+T) + s with s constant, and h^2(nA+T) = 0",
    )
    .hypothesis(nfp)
    .caveat("threshold only: the constant s is not computed");
    if opts.assert_no_fixed_part {
        out.push(t45_1.bound(int(1) + &frak_m0));
        out.push(or_omit(t45_2, |e| {
            let e1 = sigma_ek(model, a, t, 1)?;
            let q = shifted(model, a, &(t - &e1.divisor), 1)?.max(int(1) + &frak_m0);
            Ok(e.bound(q).derive("E_1", &e1.expression))
        }));
    } else {
        out.push(t45_1.omit("no-fixed-part hypothesis not asserted"));
        out.push(t45_2.omit("no-fixed-part hypothesis not asserted"));
    }

    // birationality and connected fibres
    let premise = if rational {
        Some("E(A) rational".to_string())
    } else if opts.assert_base_point_free {
        Some("|A| has no base point (asserted, not verified)".to_string())
    } else {
        None
    };
    let t48 = ThresholdEntry::new(
        "thm4.8",
        "Phi_nA is a birational morphism, an isomorphism off E(A), contracting E(A) to points",
    );
    let t48_fibres = ThresholdEntry::new("thm4.8(4)", "Phi_nA has connected fibres");
    match &premise {
        None => {
            let why = "E(A) is not rational and base point freeness was not asserted";
            out.push(t48.omit(why));
            out.push(t48_fibres.omit(why));
        }
        Some(p) => {
            let birational = int(2) + &frak_m0;
            out.push(t48.hypothesis(p.clone()).bound(birational.clone()));
            out.push(or_omit(t48_fibres.hypothesis(p.clone()), |e| {
                let te = tilde_e0(model, a)?;
                let e = e.derive("tilde_E0", &te.expression);
                if rational {
                    Ok(e.bound(birational.clone()))
                } else {
                    let q = effective_threshold(model, a, &-&te.divisor)?.max(birational.clone());
                    Ok(e.bound(q))
                }
            }));
        }
    }
    if rational {
        let comps = model.connected_components(&set);
        let cycles: Vec<_> = comps
            .iter()
            .map(|c| fundamental_cycle(model, c))
            .collect::<Result<_>>()?;
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                let (zi, zj) = (&cycles[i], &cycles[j]);
                let id = format!(
                    "thm4.8(4.5)[{},{}]",
                    model.names(&comps[i]).join("+"),
                    model.names(&comps[j]).join("+")
                );
                let zsum = &zi.divisor(model) + &zj.divisor(model);
                let direct = effective_threshold(model, a, &-&zsum)?;
                let mult = Rational::from_integer(&zi.multiplicity + &zj.multiplicity);
                let closed = int(2) + &frak_m0 - mult / int(4);
                out.push(
                    ThresholdEntry::new(id, "Phi_nA separates the two components")
                        .hypothesis("E(A) rational")
                        .bound(direct.clone())
                        .derive("m_i", &zi.multiplicity)
                        .derive("m_j", &zj.multiplicity)
                        .derive("closed_form", render(&closed))
                        .derive("closed_form_agrees", direct == closed),
                );
            }
        }
    }

    if let Some(x) = &opts.x {
        let e = ThresholdEntry::new(
            "refined-degree",
            format!("every obstruction divisor has D.A < {x}"),
        );
        out.push(or_omit(e, |e| {
            Ok(e.bound(refined_degree_threshold(model, x, k, a, t)?))
        }));
    }

    if let Some(ring) = &opts.ring {
        let e = ThresholdEntry::new("lemma4.9", format!("R_m = R_{} R_(m-{})", ring.l, ring.l))
            .hypothesis(format!("|{}A| has no base point (asserted)", ring.l))
            .hypothesis(format!(
                "H^1(mA) = V fixed for m >= {} with V {} 0 (asserted)",
                ring.p,
                if ring.v_is_zero { "=" } else { "!=" }
            ));
        out.push(or_omit(e, |e| {
            Ok(e.bound(ring_generation_bound(
                model,
                a,
                &ring.l,
                &ring.p,
                ring.v_is_zero,
            )?))
        }));
    }

    let t410 = ThresholdEntry::new("thm4.10", "R_nm = R_m^n for every n >= 1");
    out.push(or_omit(t410, |e| {
        let rg = ring_generation_threshold(model, a, opts.assert_no_fixed_part)?;
        let hyp = match rg.case {
            RingCase::RationalExceptionalCurve => "E(A) rational",
            RingCase::NoFixedPart => "|A| has no fixed part (asserted, not verified)",
        };
        Ok(e.hypothesis(hyp)
            .bound(&rg.bound / int(2))
            .derive("l", &rg.l)
            .derive("p", &rg.p)
            .derive("bound_on_2m", render(&rg.bound)))
    }));

    Ok(out)
}

/// Everything the calculator derives for `(A, T)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub surface: String,
    pub divisor: DivisorClass,
    pub twist: DivisorClass,
    pub k: u32,
    #[serde(with = "integer")]
    pub n: BigInt,
    pub positivity: Positivity,
    pub exceptional_curve: Vec<String>,
    #[serde(with = "exact")]
    pub frak_m_value: Rational,
    #[serde(with = "integer")]
    pub frak_m: BigInt,
    pub hodge_defect: HodgeDefect,
    pub tau: Tau,
    pub quadratic_f: ObstructionQuadratic,
    pub n_k_bracket: RootBracket,
    pub corrections: Vec<CorrectionDivisor>,
    pub tilde_e0: Option<TildeE0>,
    pub conditions: ConditionFlags,
    pub thresholds: Vec<ThresholdEntry>,
    pub assertions: Vec<String>,
    #[serde(with = "integer_opt")]
    pub least_n_main: Option<BigInt>,
}

/// Assemble the full report. `n` defaults to the least degree meeting the
/// main threshold.
pub fn bound_report(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
    opts: &ThresholdOptions,
) -> Result<BoundReport> {
    let positivity = model.require_nef_big(a)?;
    let set = model.exceptional_curve(a)?;
    let k = opts.k;
    let frak_m_value = effective_threshold(model, a, t)?;
    let frak_m = least_integer_above(&frak_m_value);
    let main_least = least_integer_above(&(Rational::from_integer(k.into()) + &frak_m_value));
    let n = opts.n.clone().unwrap_or_else(|| main_least.clone());
    let mut ks = vec![0, 1, k];
    ks.sort_unstable();
    ks.dedup();
    // 𝓔_k needs an integral twist; with a rational T the list stays empty
    let corrections = if t.is_integral() {
        ks.iter()
            .map(|&j| sigma_ek(model, a, t, j))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let mut assertions = Vec::new();
    if opts.assert_no_fixed_part {
        assertions.push("|A| has no fixed part".to_string());
    }
    if opts.assert_base_point_free {
        assertions.push("|A| has no base point".to_string());
    }
    Ok(BoundReport {
        surface: model.name().to_string(),
        divisor: a.clone(),
        twist: t.clone(),
        k,
        n: n.clone(),
        positivity,
        exceptional_curve: model.names(&set),
        frak_m_value,
        frak_m,
        hodge_defect: hodge_defect(model, a, t)?,
        tau: tau(model, a, t)?,
        quadratic_f: obstruction_quadratic(model, &n, k, a, t)?,
        n_k_bracket: larger_root_bracket(model, k, a, t)?,
        corrections,
        tilde_e0: Some(tilde_e0(model, a)?),
        conditions: condition_check(model, a, t, k)?,
        thresholds: theorem_thresholds(model, a, t, opts)?,
        assertions,
        least_n_main: Some(main_least),
    })
}
