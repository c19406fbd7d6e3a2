//! Obstruction divisors: nonzero effective `D = Σ n_i C_i` supported on
//! `E(A)` with `q(D) = T·D − K·D − D² ≤ k`, and the minimum `τ(A,T)`.
//!
//! On the span of `E(A)` the form `−D²` is positive definite, so the
//! sublevel set `{q ≤ k}` is an ellipsoid. Its bounding box comes from the
//! diagonal of the inverse form; inside the box a depth-first search fixes
//! coordinates one at a time and drops any prefix whose best real completion
//! already exceeds `k`.

use std::fmt;

use num::bigint::BigInt;
use num::traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::lattice::{self, GramMatrix};
use crate::rational::{int, render, sqrt_ceil, to_decimal, Rational};
use crate::serde_exact::{exact, integer_vec, DECIMAL_DIGITS};
use crate::surface::SurfaceModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    /// Multiplicity of each curve of the search set.
    #[serde(with = "integer_vec")]
    pub coefficients: Vec<BigInt>,
    pub expression: String,
    /// `T·D − K·D − D²`
    #[serde(with = "exact")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionSet {
    /// Names of the curves of `E(A)`, in coefficient order.
    pub curves: Vec<String>,
    /// Sorted lexicographically by coefficients.
    pub divisors: Vec<Obstruction>,
    /// A member of least value (the first in lexicographic order).
    pub witness_minimum: Option<Obstruction>,
}

/// `q(n) = nᵀQn + bᵀn` on coefficient vectors over a negative definite curve set.
#[derive(Clone, Debug)]
pub struct ObstructionForm {
    /// `Q = −(C_iC_j)`, positive definite.
    pub quadratic: GramMatrix,
    /// `b_i = (T − K)·C_i`
    pub linear: Vec<Rational>,
}

impl ObstructionForm {
    pub fn new(model: &SurfaceModel, set: &[usize], t: &DivisorClass) -> Result<Self> {
        let gram = model.curve_gram(set);
        if !lattice::is_negative_definite(&gram) {
            return Err(Error::NotNegativeDefinite(model.names(set).join(", ")));
        }
        let u = t - model.canonical();
        let linear = set
            .iter()
            .map(|&i| model.dot(&u, model.curve_class(i)))
            .collect();
        Ok(ObstructionForm {
            quadratic: gram.negated(),
            linear,
        })
    }

    pub fn value(&self, n: &[BigInt]) -> Rational {
        let quad = Rational::from_integer(self.quadratic.pair_int(n, n));
        self.linear.iter().zip(n).fold(quad, |acc, (b, x)| {
            acc + b * Rational::from_integer(x.clone())
        })
    }

    /// Integer box `[lo_i, hi_i]` (with `lo_i ≥ 0`) containing every
    /// nonnegative solution of `q ≤ bound`, half-widths scaled by `margin`.
    /// `None` when the sublevel set is empty.
    pub fn search_box(
        &self,
        bound: &Rational,
        margin: &Rational,
    ) -> Result<Option<Vec<(BigInt, BigInt)>>> {
        let r = self.linear.len();
        let inv = lattice::inverse(&self.quadratic)?;
        // center c = −Q⁻¹b/2, radius² = bound + bᵀQ⁻¹b/4
        let qb: Vec<Rational> = (0..r)
            .map(|i| {
                (0..r).fold(Rational::zero(), |acc, j| {
                    acc + &inv[i][j] * &self.linear[j]
                })
            })
            .collect();
        let btqb = qb
            .iter()
            .zip(&self.linear)
            .fold(Rational::zero(), |acc, (x, y)| acc + x * y);
        let radius2 = bound + btqb / int(4);
        if radius2.is_negative() {
            return Ok(None);
        }
        let mut out = Vec::with_capacity(r);
        for i in 0..r {
            let center = -&qb[i] / int(2);
            let w = Rational::from_integer(sqrt_ceil(&(&radius2 * &inv[i][i] * margin * margin)));
            let lo = (&center - &w).floor().to_integer().max(BigInt::zero());
            let hi = (&center + &w).ceil().to_integer();
            if hi < lo {
                return Ok(None);
            }
            out.push((lo, hi));
        }
        Ok(Some(out))
    }

    /// All nonzero `n ≥ 0` with `q(n) ≤ bound`, lexicographically sorted.
    pub fn sublevel_points(&self, bound: &Rational, margin: &Rational) -> Result<Vec<Vec<BigInt>>> {
        let r = self.linear.len();
        if r == 0 {
            return Ok(Vec::new());
        }
        let Some(bx) = self.search_box(bound, margin)? else {
            return Ok(Vec::new());
        };
        let q: Vec<Vec<Rational>> = self
            .quadratic
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| Rational::from_integer(v.clone()))
                    .collect()
            })
            .collect();
        let mut tails = Vec::with_capacity(r);
        for m in 0..r {
            let idx: Vec<usize> = (m..r).collect();
            tails.push(lattice::inverse(&self.quadratic.submatrix(&idx))?);
        }
        let search = PrunedSearch {
            q,
            b: &self.linear,
            tails,
            bound,
            form: self,
        };
        let ranges: Vec<(i64, i64)> = bx
            .iter()
            .map(|(lo, hi)| {
                (
                    lo.to_i64().expect("search box fits in i64"),
                    hi.to_i64().expect("search box fits in i64"),
                )
            })
            .collect();
        let mut found = Vec::new();
        let mut prefix = Vec::with_capacity(r);
        search.descend(&ranges, &mut prefix, &mut found);
        found.sort();
        Ok(found)
    }
}

struct PrunedSearch<'a> {
    q: Vec<Vec<Rational>>,
    b: &'a [Rational],
    /// `tails[m]` inverts `Q` restricted to coordinates `m..r`.
    tails: Vec<Vec<Vec<Rational>>>,
    bound: &'a Rational,
    form: &'a ObstructionForm,
}

impl PrunedSearch<'_> {
    /// Minimum of `q` over real completions of `prefix`.
    fn completion_minimum(&self, prefix: &[i64]) -> Rational {
        let r = self.b.len();
        let m = prefix.len();
        let y: Vec<Rational> = prefix.iter().map(|&v| int(v)).collect();
        let mut base = Rational::zero();
        for a in 0..m {
            if y[a].is_zero() {
                continue;
            }
            base += &self.b[a] * &y[a];
            for c in 0..m {
                base += &y[a] * &self.q[a][c] * &y[c];
            }
        }
        if m == r {
            return base;
        }
        let lin: Vec<Rational> = (m..r)
            .map(|f| {
                (0..m).fold(self.b[f].clone(), |acc, a| {
                    acc + int(2) * &self.q[f][a] * &y[a]
                })
            })
            .collect();
        let inv = &self.tails[m];
        let mut quad = Rational::zero();
        for (i, li) in lin.iter().enumerate() {
            if li.is_zero() {
                continue;
            }
            for (j, lj) in lin.iter().enumerate() {
                quad += li * &inv[i][j] * lj;
            }
        }
        base - quad / int(4)
    }

    fn descend(&self, ranges: &[(i64, i64)], prefix: &mut Vec<i64>, out: &mut Vec<Vec<BigInt>>) {
        let j = prefix.len();
        if j == ranges.len() {
            if prefix.iter().any(|&v| v != 0) {
                let n: Vec<BigInt> = prefix.iter().map(|&v| BigInt::from(v)).collect();
                if self.form.value(&n) <= *self.bound {
                    out.push(n);
                }
            }
            return;
        }
        let (lo, hi) = ranges[j];
        for v in lo..=hi {
            prefix.push(v);
            if self.completion_minimum(prefix) <= *self.bound {
                self.descend(ranges, prefix, out);
            }
            prefix.pop();
        }
    }
}

fn build_set(
    model: &SurfaceModel,
    set: &[usize],
    form: &ObstructionForm,
    points: Vec<Vec<BigInt>>,
) -> ObstructionSet {
    let divisors: Vec<Obstruction> = points
        .into_iter()
        .map(|n| {
            let terms: Vec<(usize, Rational)> = set
                .iter()
                .zip(&n)
                .map(|(&i, c)| (i, Rational::from_integer(c.clone())))
                .collect();
            Obstruction {
                value: form.value(&n),
                expression: model.render_combination(&terms),
                coefficients: n,
            }
        })
        .collect();
    let witness_minimum = divisors
        .iter()
        .fold(None::<&Obstruction>, |best, d| match best {
            Some(b) if b.value <= d.value => Some(b),
            _ => Some(d),
        })
        .cloned();
    ObstructionSet {
        curves: model.names(set),
        divisors,
        witness_minimum,
    }
}

fn check_margin(margin: &Rational) -> Result<()> {
    if *margin < int(1) {
        return Err(Error::NonpositiveInput(format!(
            "box margin {margin} must be at least 1"
        )));
    }
    Ok(())
}

/// Nonzero effective divisors on `E(A)` with `T·D − K·D − D² ≤ k`.
/// Empty when `A` is ample on the model.
pub fn enumerate_obstructions(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
    k: u32,
    margin: &Rational,
) -> Result<ObstructionSet> {
    check_margin(margin)?;
    let set = model.exceptional_curve(a)?;
    let form = ObstructionForm::new(model, &set, t)?;
    let points = form.sublevel_points(&Rational::from_integer(k.into()), margin)?;
    Ok(build_set(model, &set, &form, points))
}

/// Box of the naive scan: `[0, 2·hi + 1]` per coordinate.
pub fn naive_box(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
    k: u32,
) -> Result<Vec<i64>> {
    let set = model.exceptional_curve(a)?;
    let form = ObstructionForm::new(model, &set, t)?;
    let bx = form.search_box(&Rational::from_integer(k.into()), &int(1))?;
    Ok(match bx {
        None => vec![0; set.len()],
        Some(bx) => bx
            .iter()
            .map(|(_, hi)| 2 * hi.to_i64().expect("search box fits in i64") + 1)
            .collect(),
    })
}

/// Number of points the naive scan visits.
pub fn naive_box_size(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
    k: u32,
) -> Result<u128> {
    Ok(naive_box(model, a, t, k)?
        .iter()
        .fold(1u128, |acc, &h| acc.saturating_mul(h as u128 + 1)))
}

/// Reference enumeration: scan every point of the doubled box and filter.
pub fn enumerate_obstructions_naive(
    model: &SurfaceModel,
    a: &DivisorClass,
    t: &DivisorClass,
    k: u32,
) -> Result<ObstructionSet> {
    let set = model.exceptional_curve(a)?;
    let form = ObstructionForm::new(model, &set, t)?;
    let his = naive_box(model, a, t, k)?;
    let bound = Rational::from_integer(k.into());
    let r = set.len();
    let mut points = Vec::new();
    if r > 0 {
        let mut n = vec![0i64; r];
        loop {
            if n.iter().any(|&v| v != 0) {
                let big: Vec<BigInt> = n.iter().map(|&v| BigInt::from(v)).collect();
                if form.value(&big) <= bound {
                    points.push(big);
                }
            }
            let mut i = 0;
            while i < r && n[i] == his[i] {
                n[i] = 0;
                i += 1;
            }
            if i == r {
                break;
            }
            n[i] += 1;
        }
    }
    points.sort();
    Ok(build_set(model, &set, &form, points))
}

/// A rational number or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extended {
    Finite(Rational),
    PlusInfinity,
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(q) => write!(f, "{q}"),
            Extended::PlusInfinity => write!(f, "+inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ExtendedRepr {
    exact: String,
    #[serde(default)]
    decimal: String,
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(q) => ExtendedRepr {
                exact: render(q),
                decimal: to_decimal(q, DECIMAL_DIGITS),
            },
            Extended::PlusInfinity => ExtendedRepr {
                exact: "+inf".into(),
                decimal: "inf".into(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ExtendedRepr::deserialize(d)?;
        if r.exact == "+inf" {
            return Ok(Extended::PlusInfinity);
        }
        crate::rational::parse_rational(&r.exact)
            .map(Extended::Finite)
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tau {
    pub value: Extended,
    pub witness: Option<Obstruction>,
}

/// `τ(A,T) = min q(D)` over nonzero effective `D` on `E(A)`, `+∞` when
/// `E(A)` is empty.
///
/// The search starts at the level `min_i q(C_i)`, which already contains a
/// curve, and would double the level if it were ever empty.
pub fn tau(model: &SurfaceModel, a: &DivisorClass, t: &DivisorClass) -> Result<Tau> {
    let set = model.exceptional_curve(a)?;
    if set.is_empty() {
        return Ok(Tau {
            value: Extended::PlusInfinity,
            witness: None,
        });
    }
    let form = ObstructionForm::new(model, &set, t)?;
    let r = set.len();
    let mut level = (0..r)
        .map(|i| {
            let unit: Vec<BigInt> = (0..r).map(|j| BigInt::from((i == j) as i64)).collect();
            form.value(&unit)
        })
        .min()
        .expect("nonempty curve set");
    loop {
        let points = form.sublevel_points(&level, &int(1))?;
        if !points.is_empty() {
            let found = build_set(model, &set, &form, points);
            let w = found.witness_minimum.expect("nonempty set has a minimum");
            return Ok(Tau {
                value: Extended::Finite(w.value.clone()),
                witness: Some(w),
            });
        }
        level = if level.is_positive() {
            level * int(2)
        } else {
            int(1)
        };
    }
}
