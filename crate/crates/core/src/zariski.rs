//! Zariski decomposition `D = P + N` relative to the curve model.
//!
//! The main path grows the support of `N` one round at a time: every curve
//! that meets the current positive part negatively joins the support, and `N`
//! is re-solved so that `P` is orthogonal to the whole support. The support
//! only grows, so there are at most as many rounds as curves.
//! [`zariski_oracle`] instead scans every negative definite subset of curves
//! and keeps the unique candidate meeting all three defining conditions.

use num::traits::{Signed, Zero};

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::lattice;
use crate::rational::{int, Rational};
use crate::surface::SurfaceModel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    /// Nef part `P`.
    pub positive: DivisorClass,
    /// Negative part `N = Σ x_i C_i`.
    pub negative: DivisorClass,
    /// `(curve index, x_i)` with `x_i > 0`, sorted by index.
    pub coefficients: Vec<(usize, Rational)>,
}

impl ZariskiDecomposition {
    pub fn support(&self) -> Vec<usize> {
        self.coefficients.iter().map(|(i, _)| *i).collect()
    }
}

fn check_pseudo_effective(model: &SurfaceModel, d: &DivisorClass) -> Result<()> {
    if d.len() != model.rank() {
        return Err(Error::RankMismatch {
            expected: model.rank(),
            found: d.len(),
        });
    }
    if let Some(h) = model.ample_reference() {
        if model.dot(d, h).is_negative() {
            return Err(Error::NotPseudoEffectiveOrIncompleteModel(format!(
                "{d} pairs negatively with the ample reference"
            )));
        }
    }
    Ok(())
}

/// Solves `(D - Σ x_j C_j)·C_i = 0` for `i` in `support`.
fn solve_negative_part(
    model: &SurfaceModel,
    d: &DivisorClass,
    support: &[usize],
) -> Result<Vec<(usize, Rational)>> {
    let gram = model.curve_gram(support);
    let rhs: Vec<Rational> = support
        .iter()
        .map(|&i| model.dot(d, model.curve_class(i)))
        .collect();
    let x = lattice::solve_linear(&gram, &rhs)?;
    Ok(support.iter().copied().zip(x).collect())
}

fn assemble(
    model: &SurfaceModel,
    d: &DivisorClass,
    terms: Vec<(usize, Rational)>,
) -> ZariskiDecomposition {
    let coefficients: Vec<(usize, Rational)> =
        terms.into_iter().filter(|(_, x)| !x.is_zero()).collect();
    let negative = model.combination(&coefficients);
    ZariskiDecomposition {
        positive: d - &negative,
        negative,
        coefficients,
    }
}

pub fn zariski_decompose(model: &SurfaceModel, d: &DivisorClass) -> Result<ZariskiDecomposition> {
    check_pseudo_effective(model, d)?;
    let curves = model.effective_curves();
    let mut support: Vec<usize> = Vec::new();
    loop {
        let terms = solve_negative_part(model, d, &support)?;
        if let Some((i, x)) = terms.iter().find(|(_, x)| x.is_negative()) {
            return Err(Error::NotPseudoEffectiveOrIncompleteModel(format!(
                "coefficient {x} of '{}' in the negative part is negative",
                model.curve_name(*i)
            )));
        }
        let dec = assemble(model, d, terms);
        let fresh: Vec<usize> = curves
            .iter()
            .copied()
            .filter(|i| !support.contains(i))
            .filter(|&i| model.dot(&dec.positive, model.curve_class(i)).is_negative())
            .collect();
        if fresh.is_empty() {
            return Ok(dec);
        }
        support.extend(fresh);
        support.sort_unstable();
        if !lattice::is_negative_definite(&model.curve_gram(&support)) {
            return Err(Error::NotPseudoEffectiveOrIncompleteModel(format!(
                "support {{{}}} is not negative definite",
                model.names(&support).join(", ")
            )));
        }
    }
}

/// Ground truth by exhaustive search over curve subsets (exponential in the
/// number of prime curves).
pub fn zariski_oracle(model: &SurfaceModel, d: &DivisorClass) -> Result<ZariskiDecomposition> {
    check_pseudo_effective(model, d)?;
    let curves = model.effective_curves();
    assert!(curves.len() < 31, "subset oracle limited to 30 curves");
    let mut found: Vec<ZariskiDecomposition> = Vec::new();
    for mask in 0u32..(1u32 << curves.len()) {
        let subset: Vec<usize> = curves
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &i)| i)
            .collect();
        if !lattice::is_negative_definite(&model.curve_gram(&subset)) {
            continue;
        }
        let terms = solve_negative_part(model, d, &subset)?;
        if terms.iter().any(|(_, x)| x.is_negative()) {
            continue;
        }
        let dec = assemble(model, d, terms);
        let nef = curves
            .iter()
            .all(|&i| !model.dot(&dec.positive, model.curve_class(i)).is_negative());
        if nef && !found.contains(&dec) {
            found.push(dec);
        }
    }
    match found.len() {
        0 => Err(Error::NotPseudoEffectiveOrIncompleteModel(format!(
            "no subset of curves yields a decomposition of {d}"
        ))),
        1 => Ok(found.pop().unwrap()),
        n => Err(Error::AmbiguousDecomposition(format!(
            "{n} distinct candidates for {d}"
        ))),
    }
}

/// Checks the three defining conditions and `D = P + N`; returns the first violation.
pub fn verify_decomposition(
    model: &SurfaceModel,
    d: &DivisorClass,
    dec: &ZariskiDecomposition,
) -> std::result::Result<(), String> {
    if &(&dec.positive + &dec.negative) != d {
        return Err("P + N differs from D".into());
    }
    if model.combination(&dec.coefficients) != dec.negative {
        return Err("N does not match its coefficients".into());
    }
    let support = dec.support();
    if !lattice::is_negative_definite(&model.curve_gram(&support)) {
        return Err("support of N is not negative definite".into());
    }
    for (i, x) in &dec.coefficients {
        if !x.is_positive() {
            return Err(format!(
                "coefficient of '{}' is not positive",
                model.curve_name(*i)
            ));
        }
        if !model.dot(&dec.positive, model.curve_class(*i)).is_zero() {
            return Err(format!("P is not orthogonal to '{}'", model.curve_name(*i)));
        }
    }
    for i in model.effective_curves() {
        if model.dot(&dec.positive, model.curve_class(i)).is_negative() {
            return Err(format!("P is negative on '{}'", model.curve_name(i)));
        }
    }
    Ok(())
}

/// `κ(D) = 2` exactly when the positive part is big.
pub fn kappa_is_two(model: &SurfaceModel, d: &DivisorClass) -> Result<bool> {
    let dec = zariski_decompose(model, d)?;
    Ok(model.dot(&dec.positive, &dec.positive).is_positive())
}

/// Lattice-computable part of the `h¹(nD)` formula: with `F` the negative
/// part, `h¹(nD) = h¹(asA + bD) + c₂n² + c₁n + c₀(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Correction {
    /// `-F²/2`
    pub quadratic: Rational,
    /// `F·K/2`
    pub linear: Rational,
    f_squared: Rational,
    f_canonical: Rational,
}

impl H1Correction {
    /// `c₀(b) = -(b·F·K/2 - b²·F²/2)`.
    pub fn constant(&self, b: &Rational) -> Rational {
        let two = int(2);
        -(b * &self.f_canonical / &two - b * b * &self.f_squared / &two)
    }
}

pub fn h1_correction(model: &SurfaceModel, d: &DivisorClass) -> Result<H1Correction> {
    let dec = zariski_decompose(model, d)?;
    let f = &dec.negative;
    let f_squared = model.dot(f, f);
    let f_canonical = model.dot(f, model.canonical());
    let two = int(2);
    Ok(H1Correction {
        quadratic: -(&f_squared / &two),
        linear: &f_canonical / &two,
        f_squared,
        f_canonical,
    })
}
