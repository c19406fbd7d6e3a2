//! Closed-form thresholds: 𝔐(A,T), 𝔪(A,T), the Hodge defect `h`, the
//! auxiliary quadratic `f(x)`, the refined `D·A < x` threshold, the
//! ring-generation bound 𝔑 and the comparison with the classical
//! effective Matsusaka bounds.

use num::bigint::BigInt;
use num::traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::rational::{int, least_integer_above, ratio, sqrt_bracket, Rational};
use crate::serde_exact::{exact, exact_opt, integer};
use crate::surface::SurfaceModel;

/// Width of the display-only brackets around irrational roots.
pub fn root_bracket_width() -> Rational {
    ratio(1, 1024)
}

fn big_square(model: &SurfaceModel, a: &DivisorClass) -> Result<Rational> {
    let a2 = model.self_intersection(a)?;
    if !a2.is_positive() {
        return Err(Error::NotBig(a2.to_string()));
    }
    Ok(a2)
}

/// 𝔐(A,T) = ((K−T)·A + 2)² / (4A²) − (K−T)²/4.
pub fn effective_threshold(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
) -> Result<Rational> {
    let a2 = big_square(model, a)?;
    let u = model.canonical() - t;
    let ua = model.intersect(&u, a)? + int(2);
    let four = int(4);
    Ok(&ua * &ua / (&four * &a2) - model.dot(&u, &u) / &four)
}

/// 𝔪(A,T): the least integer strictly above 𝔐(A,T).
pub fn least_admissible_n(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
) -> Result<BigInt> {
    Ok(least_integer_above(&effective_threshold(model, a, t)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeDefect {
    /// `h = (A(T−K))² − A²(T−K)²`
    #[serde(with = "exact")]
    pub value: Rational,
    /// `λ` with `T − K = λA` as vectors, when such a `λ` exists.
    #[serde(with = "exact_opt")]
    pub proportionality: Option<Rational>,
}

pub fn hodge_defect(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
) -> Result<HodgeDefect> {
    let u = t - model.canonical();
    let au = model.intersect(a, &u)?;
    let value = &au * &au - model.dot(a, a) * model.dot(&u, &u);
    Ok(HodgeDefect {
        value,
        proportionality: u.proportionality_to(a),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainHypothesis {
    pub holds: bool,
    /// True when only the `k = 0`, `T ≡ K + λA`, `n ≥ 𝔐` branch applies.
    /// That branch is certified numerically, not up to linear equivalence.
    pub via_proportional_branch: bool,
}

/// Hypothesis of the obstruction theorem: `n > k + 𝔐(A,T)`, or `k = 0`,
/// `n ≥ 𝔐(A,T)` and `T − K` proportional to `A`.
pub fn main_hypothesis(
    model: &SurfaceModel,
    n: &BigInt,
    k: u32,
    a: &DivisorClass,
    t: &DivisorClass,
) -> Result<MainHypothesis> {
    model.require_nef_big(a)?;
    let m = effective_threshold(model, a, t)?;
    let n = Rational::from_integer(n.clone());
    if n > Rational::from_integer(k.into()) + &m {
        return Ok(MainHypothesis {
            holds: true,
            via_proportional_branch: false,
        });
    }
    let special = k == 0 && n >= m && hodge_defect(model, a, t)?.proportionality.is_some();
    Ok(MainHypothesis {
        holds: special,
        via_proportional_branch: special,
    })
}

/// `f(x) = x² − (A·L)x + h/4 + kA²` with `L = nA + T − K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionQuadratic {
    /// Coefficient of `x`, i.e. `−A·L`.
    #[serde(with = "exact")]
    pub linear: Rational,
    /// `f(0) = h/4 + kA²`.
    #[serde(with = "exact")]
    pub constant: Rational,
    #[serde(with = "exact")]
    pub f_at_one: Rational,
    /// `[lo, hi]` around the smaller root `x₁`; `None` when `L² < 4k`.
    #[serde(with = "exact_opt")]
    pub smaller_root_lo: Option<Rational>,
    #[serde(with = "exact_opt")]
    pub smaller_root_hi: Option<Rational>,
}

impl ObstructionQuadratic {
    pub fn eval(&self, x: &Rational) -> Rational {
        x * x + &self.linear * x + &self.constant
    }
}

pub fn obstruction_quadratic(
    model: &SurfaceModel,
    n: &BigInt,
    k: u32,
    a: &DivisorClass,
    t: &DivisorClass,
) -> Result<ObstructionQuadratic> {
    let a2 = big_square(model, a)?;
    let n_q = Rational::from_integer(n.clone());
    let l = &(&a.scaled(&n_q) + t) - model.canonical();
    let al = model.dot(a, &l);
    let h = hodge_defect(model, a, t)?.value;
    let kq = Rational::from_integer(k.into());
    let constant = &h / int(4) + &kq * &a2;
    let linear = -al.clone();
    let f_at_one = Rational::one() + &linear + &constant;
    // discriminant (A·L)² − 4f(0) = A²(L² − 4k)
    let disc = &al * &al - int(4) * &constant;
    let (lo, hi) = if disc.is_negative() {
        (None, None)
    } else {
        let two = int(2);
        let (s_lo, s_hi) = sqrt_bracket(&disc, &(root_bracket_width() * &two));
        (Some((&al - s_hi) / &two), Some((&al - s_lo) / &two))
    };
    Ok(ObstructionQuadratic {
        linear,
        constant,
        f_at_one,
        smaller_root_lo: lo,
        smaller_root_hi: hi,
    })
}

/// Integer bracket around `n_k = (−A(T−K) + √(h + 4kA²)) / A²`, the larger
/// root of `L² − 4k` as a polynomial in `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootBracket {
    #[serde(with = "integer")]
    pub floor: BigInt,
    #[serde(with = "integer")]
    pub ceil: BigInt,
}

pub fn larger_root_bracket(
    model: &SurfaceModel,
    k: u32,
    a: &DivisorClass,
    t: &DivisorClass,
) -> Result<RootBracket> {
    let a2 = big_square(model, a)?;
    let u = t - model.canonical();
    let au = model.dot(a, &u);
    let h = hodge_defect(model, a, t)?.value;
    let rad = h + int(4) * Rational::from_integer(k.into()) * &a2;
    let (s_lo, s_hi) = sqrt_bracket(&rad, &root_bracket_width());
    let lo = (-&au + s_lo) / &a2;
    let hi = (-&au + s_hi) / &a2;
    Ok(RootBracket {
        floor: lo.floor().to_integer(),
        ceil: hi.ceil().to_integer(),
    })
}

/// Threshold on `n` beyond which every obstruction divisor has `D·A < x`:
/// `−A(T−K)/A² + x/A² + f(0)/(xA²)`.
pub fn refined_degree_threshold(
    model: &SurfaceModel,
    x: &Rational,
    k: u32,
    a: &DivisorClass,
    t: &DivisorClass,
) -> Result<Rational> {
    if !x.is_positive() {
        return Err(Error::NonpositiveX(x.to_string()));
    }
    let a2 = big_square(model, a)?;
    let u = t - model.canonical();
    let au = model.dot(a, &u);
    let f0 = hodge_defect(model, a, t)?.value / int(4) + Rational::from_integer(k.into()) * &a2;
    Ok(-au / &a2 + x / &a2 + f0 / (x * &a2))
}

/// 𝔑(A,ℓ,p): beyond it `R_m = R_ℓ R_{m−ℓ}`. `v_is_zero` is the caller's
/// claim about the stable value of `H¹(mA)`.
pub fn ring_generation_bound(
    model: &SurfaceModel,
    a: &DivisorClass,
    l: &BigInt,
    p: &BigInt,
    v_is_zero: bool,
) -> Result<Rational> {
    if !l.is_positive() || !p.is_positive() {
        return Err(Error::NonpositiveInput(format!("l = {l}, p = {p}")));
    }
    let a2 = big_square(model, a)?;
    let lq = Rational::from_integer(l.clone());
    let pq = Rational::from_integer(p.clone());
    let first = int(2) * &lq + &pq - int(1);
    let second = if v_is_zero {
        int(3) * &lq + model.dot(model.canonical(), a) / &a2
    } else {
        let k = &lq * &lq * &a2;
        k + effective_threshold(model, a, &DivisorClass::zero(model.rank()))? + &lq
    };
    Ok(first.max(second))
}

/// Threshold `q` of a condition `n > q`, with the least integer meeting it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictBound {
    #[serde(with = "exact")]
    pub value: Rational,
    #[serde(with = "integer")]
    pub least_n: BigInt,
}

impl StrictBound {
    pub fn new(value: Rational) -> Self {
        let least_n = least_integer_above(&value);
        StrictBound { value, least_n }
    }
}

/// The classical effective Matsusaka bounds for very ampleness of `|nH|`
/// next to `2 + 𝔐(H,0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatsusakaComparison {
    /// `½[(H(K+4H)+1)²/H² + 3]` (Fernández del Busto).
    pub fernandez_del_busto: StrictBound,
    /// `½((H(K+2H)+1)²/H² + 7)` (Beltrametti–Sommese).
    pub beltrametti_sommese: StrictBound,
    /// `2 + 𝔐(H,0)`.
    pub lattice: StrictBound,
}

impl MatsusakaComparison {
    /// `lattice ≤ beltrametti_sommese ≤ fernandez_del_busto`.
    pub fn is_ordered(&self) -> bool {
        self.lattice.value <= self.beltrametti_sommese.value
            && self.beltrametti_sommese.value <= self.fernandez_del_busto.value
    }
}

pub fn matsusaka_compare(model: &SurfaceModel, h: &DivisorClass) -> Result<MatsusakaComparison> {
    if !model.positivity(h)?.ample_model {
        return Err(Error::NotAmple(h.to_string()));
    }
    let h2 = model.dot(h, h);
    let hk = model.dot(h, model.canonical());
    let half = ratio(1, 2);
    let classical = |mult: i64, add: i64| {
        let inner = &hk + int(mult) * &h2 + int(1);
        &half * (&inner * &inner / &h2 + int(add))
    };
    let zero = DivisorClass::zero(model.rank());
    Ok(MatsusakaComparison {
        fernandez_del_busto: StrictBound::new(classical(4, 3)),
        beltrametti_sommese: StrictBound::new(classical(2, 7)),
        lattice: StrictBound::new(int(2) + effective_threshold(model, h, &zero)?),
    })
}
