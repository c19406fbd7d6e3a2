//! Exact linear algebra over symmetric integer matrices.
//!
//! Everything here runs over `BigInt`/`BigRational`: determinants and
//! solves use fraction-free (Bareiss) elimination, definiteness uses
//! Sylvester's criterion on exact leading minors, and the inertia comes from
//! a symmetric congruence reduction. No floating point enters any decision.

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Symmetric integer matrix, typically an intersection matrix `(C_i C_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    entries: Vec<Vec<BigInt>>,
}

/// Inertia `(n_plus, n_minus, n_zero)` of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl GramMatrix {
    pub fn new(entries: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = entries.len();
        for row in &entries {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(GramMatrix { entries })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    /// The empty 0x0 matrix.
    pub fn empty() -> Self {
        GramMatrix {
            entries: Vec::new(),
        }
    }

    /// Number of rows (the lattice rank for an intersection form).
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// Principal submatrix on the given indices, in the given order.
    pub fn submatrix(&self, idx: &[usize]) -> GramMatrix {
        GramMatrix {
            entries: idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim(), "vector length does not match matrix");
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(m, _)| !m.is_zero())
                    .fold(Rational::zero(), |acc, (m, v)| acc + v * m)
            })
            .collect()
    }

    /// Bilinear form `x^T M y`.
    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        self.apply(y)
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn pair_int(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                acc += xi * &self.entries[i][j] * yj;
            }
        }
        acc
    }

    /// `-M`, used to turn negative definite forms into positive ones.
    pub fn negated(&self) -> GramMatrix {
        GramMatrix {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|v| -v).collect())
                .collect(),
        }
    }
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact integer determinant by Bareiss elimination.
pub fn determinant(m: &GramMatrix) -> BigInt {
    bareiss_det(m.entries.clone())
}

/// Leading principal minors `Δ_1, …, Δ_r`.
pub fn leading_minors(m: &GramMatrix) -> Vec<BigInt> {
    (1..=m.dim())
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            determinant(&m.submatrix(&idx))
        })
        .collect()
}

/// Sylvester's criterion on `-M`: `(-1)^k Δ_k(M) > 0` for every `k`.
/// The empty matrix counts as negative definite.
pub fn is_negative_definite(m: &GramMatrix) -> bool {
    for k in 1..=m.dim() {
        let idx: Vec<usize> = (0..k).collect();
        let minor = determinant(&m.submatrix(&idx));
        let ok = if k % 2 == 0 {
            minor.is_positive()
        } else {
            minor.is_negative()
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Solves `M x = b` exactly. `b` is cleared of denominators, the augmented
/// system is reduced fraction-free and then back-substituted over ℚ.
pub fn solve_linear(m: &GramMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = m.dim();
    if b.len() != n {
        return Err(Error::RankMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let scale = b.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut a: Vec<Vec<BigInt>> = m
        .entries
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push((bi * Rational::from_integer(scale.clone())).to_integer());
            r
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let p = ((k + 1)..n)
                .find(|&i| !a[i][k].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap(k, p);
        }
        for i in (k + 1)..n {
            for j in (k + 1)..=n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(a[i][n].clone());
        for j in (i + 1)..n {
            acc -= &x[j] * &a[i][j];
        }
        x[i] = acc / Rational::from_integer(a[i][i].clone());
    }
    let scale = Rational::from_integer(scale);
    Ok(x.into_iter().map(|v| v / &scale).collect())
}

/// Exact inverse, column by column.
pub fn inverse(m: &GramMatrix) -> Result<Vec<Vec<Rational>>> {
    let n = m.dim();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rational> = (0..n)
            .map(|i| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        cols.push(solve_linear(m, &e)?);
    }
    Ok((0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect())
}

/// Diagonal entries of a congruence-diagonalisation `P^T M P = diag(d)`
/// with `det P = ±1`. Their product is `det M`.
pub fn congruence_pivots(m: &GramMatrix) -> Vec<Rational> {
    let n = m.dim();
    let mut a: Vec<Vec<Rational>> = m
        .entries
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| Rational::from_integer(v.clone()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::with_capacity(n);
    for step in 0..n {
        let p = match (step..n).find(|&i| !a[i][i].is_zero()) {
            Some(p) => p,
            None => {
                let pair = (step..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero());
                let Some((i, j)) = pair else {
                    pivots.extend((step..n).map(|_| Rational::zero()));
                    break;
                };
                // e_i += e_j; the new diagonal entry is 2 a_ij since a_ii = a_jj = 0.
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        if p != step {
            a.swap(p, step);
            for row in a.iter_mut() {
                row.swap(p, step);
            }
        }
        let d = a[step][step].clone();
        for i in (step + 1)..n {
            if a[i][step].is_zero() {
                continue;
            }
            let f = &a[i][step] / &d;
            for j in (step + 1)..n {
                let v = &f * &a[step][j];
                a[i][j] -= v;
            }
        }
        for i in (step + 1)..n {
            a[i][step] = Rational::zero();
            a[step][i] = Rational::zero();
        }
        pivots.push(d);
    }
    pivots
}

pub fn signature(m: &GramMatrix) -> Signature {
    let mut s = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for d in congruence_pivots(m) {
        if d.is_positive() {
            s.positive += 1;
        } else if d.is_negative() {
            s.negative += 1;
        } else {
            s.zero += 1;
        }
    }
    s
}

/// `K` is characteristic iff `K·e_i + e_i·e_i` is even for each basis vector.
pub fn is_characteristic(k: &[BigInt], m: &GramMatrix) -> bool {
    if k.len() != m.dim() {
        return false;
    }
    (0..m.dim()).all(|i| {
        let ke: BigInt = k.iter().zip(&m.entries[i]).map(|(a, b)| a * b).sum();
        (ke + &m.entries[i][i]).is_even()
    })
}
