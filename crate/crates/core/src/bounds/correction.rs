//! Correction divisors `𝓔_k` repairing the Laufer–Ramanujam inequality on
//! the exceptional curve, the modified cycle `Ẽ₀`, and the three sufficient
//! conditions for the obstruction system to be empty.

use num::bigint::BigInt;
use num::traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cycles::{fundamental_cycle, is_rational_configuration};
use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::lattice;
use crate::rational::{int, Rational};
use crate::serde_exact::{integer, integer_vec};
use crate::surface::SurfaceModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionDivisor {
    pub k: u32,
    /// Names of the curves carrying the correction, in coefficient order.
    pub curves: Vec<String>,
    /// `σ_i = max{K·C_i − T·C_i + k, 0}`
    #[serde(with = "integer_vec")]
    pub sigma: Vec<BigInt>,
    /// `|det(C_i·C_j)|`
    #[serde(with = "integer")]
    pub det_abs: BigInt,
    #[serde(with = "integer_vec")]
    pub coefficients: Vec<BigInt>,
    pub expression: String,
    pub divisor: DivisorClass,
}

fn integral_dot(model: &SurfaceModel, d: &DivisorClass, i: usize) -> Result<BigInt> {
    let v = model.dot(d, model.curve_class(i));
    if !v.is_integer() {
        return Err(Error::NonIntegral(d.to_string()));
    }
    Ok(v.to_integer())
}

/// `𝓔_k` on an arbitrary negative definite curve set: the solution of
/// `𝓔_k·C_i = −|det|·σ_i`.
pub fn correction_divisor(
    model: &SurfaceModel,
    set: &[usize],
    t: &DivisorClass,
    k: u32,
) -> Result<CorrectionDivisor> {
    if !t.is_integral() {
        return Err(Error::NonIntegral(t.to_string()));
    }
    let gram = model.curve_gram(set);
    if !lattice::is_negative_definite(&gram) {
        return Err(Error::NotNegativeDefinite(model.names(set).join(", ")));
    }
    let det_abs = lattice::determinant(&gram).abs();
    let kk = BigInt::from(k);
    let mut sigma = Vec::with_capacity(set.len());
    for &i in set {
        let s = integral_dot(model, model.canonical(), i)? - integral_dot(model, t, i)? + &kk;
        sigma.push(s.max(BigInt::zero()));
    }
    let rhs: Vec<Rational> = sigma
        .iter()
        .map(|s| Rational::from_integer(-(s * &det_abs)))
        .collect();
    let x = lattice::solve_linear(&gram, &rhs)?;
    let mut coefficients = Vec::with_capacity(x.len());
    for (xi, &i) in x.iter().zip(set) {
        if !xi.is_integer() || xi.is_negative() {
            return Err(Error::IntegralityFailure(format!(
                "{} has coefficient {xi}",
                model.curve_name(i)
            )));
        }
        coefficients.push(xi.to_integer());
    }
    let terms: Vec<(usize, Rational)> = set.iter().copied().zip(x).collect();
    Ok(CorrectionDivisor {
        k,
        curves: model.names(set),
        sigma,
        det_abs,
        coefficients,
        expression: model.render_combination(&terms),
        divisor: model.combination(&terms),
    })
}

/// `𝓔_k(A,T)` supported on `E(A)`.
pub fn sigma_ek(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
    k: u32,
) -> Result<CorrectionDivisor> {
    let set = model.exceptional_curve(a)?;
    correction_divisor(model, &set, t, k)
}

/// `T·C_i ≥ K·C_i + k` for every curve of `set`.
pub fn laufer_ramanujam_holds(
    model: &SurfaceModel,
    set: &[usize],
    t: &DivisorClass,
    k: u32,
) -> bool {
    let kk = int(k as i64);
    set.iter().all(|&i| {
        let c = model.curve_class(i);
        model.dot(t, c) >= model.dot(model.canonical(), c) + &kk
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TildeSource {
    Correction,
    FundamentalCycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TildePiece {
    pub curves: Vec<String>,
    pub source: TildeSource,
    #[serde(with = "integer_vec")]
    pub coefficients: Vec<BigInt>,
    pub expression: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TildeE0 {
    pub components: Vec<TildePiece>,
    pub expression: String,
    pub divisor: DivisorClass,
}

/// `Ẽ₀`: per connected component of `E(A)`, the component's own `𝓔₀`
/// (with `T = 0`), replaced by the fundamental cycle when it vanishes.
pub fn tilde_e0(model: &SurfaceModel, a: &DivisorClass) -> Result<TildeE0> {
    let set = model.exceptional_curve(a)?;
    let zero = DivisorClass::zero(model.rank());
    let mut components = Vec::new();
    let mut terms: Vec<(usize, Rational)> = Vec::new();
    for comp in model.connected_components(&set) {
        let e0 = correction_divisor(model, &comp, &zero, 0)?;
        let (source, coefficients) = if e0.divisor.is_zero() {
            (
                TildeSource::FundamentalCycle,
                fundamental_cycle(model, &comp)?.coefficients,
            )
        } else {
            (TildeSource::Correction, e0.coefficients)
        };
        let piece: Vec<(usize, Rational)> = comp
            .iter()
            .copied()
            .zip(
                coefficients
                    .iter()
                    .map(|c| Rational::from_integer(c.clone())),
            )
            .collect();
        components.push(TildePiece {
            curves: model.names(&comp),
            source,
            coefficients,
            expression: model.render_combination(&piece),
        });
        terms.extend(piece);
    }
    terms.sort_by_key(|(i, _)| *i);
    Ok(TildeE0 {
        components,
        expression: model.render_combination(&terms),
        divisor: model.combination(&terms),
    })
}

/// Sufficient conditions for the obstruction system to have no solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFlags {
    /// `A` is ample on the model.
    pub matsusaka: bool,
    /// `T·C_i ≥ K·C_i + k` on `E(A)`.
    pub laufer_ramanujam: bool,
    pub k: u32,
    /// `E(A)` is a rational configuration.
    pub artin: bool,
}

pub fn condition_check(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
    k: u32,
) -> Result<ConditionFlags> {
    let pos = model.require_nef_big(a)?;
    let set = model.exceptional_curve(a)?;
    Ok(ConditionFlags {
        matsusaka: pos.ample_model,
        laufer_ramanujam: laufer_ramanujam_holds(model, &set, t, k),
        k,
        artin: is_rational_configuration(model, &set)?,
    })
}
