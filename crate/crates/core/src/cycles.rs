//! Fundamental cycles of connected negative definite curve configurations.
//!
//! [`fundamental_cycle`] runs Laufer's sequence: start from the reduced sum
//! `Z = Σ C_i` and add any `C_i` with `Z·C_i > 0` (lowest index first) until
//! `Z·C_i ≤ 0` for all `i`. [`cycle_bruteforce_oracle`] finds the same cycle
//! by scanning integer boxes.

use num::bigint::BigInt;
use num::traits::{Signed, ToPrimitive, Zero};

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::lattice;
use crate::rational::Rational;
use crate::surface::SurfaceModel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalCycle {
    /// Curve indices of the component, sorted.
    pub curves: Vec<usize>,
    /// Coefficient of each curve in `Z`.
    pub coefficients: Vec<BigInt>,
    /// `m = -Z²`.
    pub multiplicity: BigInt,
    /// `p_a(Z)`.
    pub genus: BigInt,
}

impl FundamentalCycle {
    pub fn divisor(&self, model: &SurfaceModel) -> DivisorClass {
        let terms: Vec<(usize, Rational)> = self
            .curves
            .iter()
            .zip(&self.coefficients)
            .map(|(&i, n)| (i, Rational::from_integer(n.clone())))
            .collect();
        model.combination(&terms)
    }
}

fn check_component(model: &SurfaceModel, component: &[usize]) -> Result<Vec<usize>> {
    let mut curves = component.to_vec();
    curves.sort_unstable();
    curves.dedup();
    if !lattice::is_negative_definite(&model.curve_gram(&curves)) {
        return Err(Error::NotNegativeDefinite(model.names(&curves).join(", ")));
    }
    if model.connected_components(&curves).len() != 1 {
        return Err(Error::NotConnected(model.names(&curves).join(", ")));
    }
    Ok(curves)
}

fn finish(
    model: &SurfaceModel,
    curves: Vec<usize>,
    coefficients: Vec<BigInt>,
) -> Result<FundamentalCycle> {
    let gram = model.curve_gram(&curves);
    let multiplicity = -gram.pair_int(&coefficients, &coefficients);
    let mut cycle = FundamentalCycle {
        curves,
        coefficients,
        multiplicity,
        genus: BigInt::zero(),
    };
    cycle.genus = model.arithmetic_genus(&cycle.divisor(model))?;
    Ok(cycle)
}

pub fn fundamental_cycle(model: &SurfaceModel, component: &[usize]) -> Result<FundamentalCycle> {
    Ok(laufer_sequence(model, component)?.0)
}

/// The fundamental cycle together with the number of Laufer steps taken.
pub fn laufer_sequence(
    model: &SurfaceModel,
    component: &[usize],
) -> Result<(FundamentalCycle, usize)> {
    let curves = check_component(model, component)?;
    let gram = model.curve_gram(&curves);
    let r = curves.len();
    let mut z = vec![BigInt::from(1); r];
    // products[i] = Z·C_i
    let mut products: Vec<BigInt> = (0..r)
        .map(|i| (0..r).map(|j| gram.entry(i, j)).sum())
        .collect();
    let mut steps = 0;
    while let Some(i) = products.iter().position(Signed::is_positive) {
        z[i] += 1;
        for (j, p) in products.iter_mut().enumerate() {
            *p += gram.entry(i, j);
        }
        steps += 1;
    }
    Ok((finish(model, curves, z)?, steps))
}

/// Scans `[1, b]^r` for `b = 1, 2, …, bound` and returns the coordinatewise
/// minimum of the solutions of `Z·C_i ≤ 0` in the first nonempty box. Errors
/// if that minimum is not itself a solution.
pub fn cycle_bruteforce_oracle(
    model: &SurfaceModel,
    component: &[usize],
    bound: u32,
) -> Result<FundamentalCycle> {
    let curves = check_component(model, component)?;
    let gram = model.curve_gram(&curves);
    let r = curves.len();
    let g: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    gram.entry(i, j)
                        .to_i64()
                        .expect("intersection numbers fit in i64")
                })
                .collect()
        })
        .collect();
    let is_solution = |n: &[i64]| (0..r).all(|i| (0..r).map(|j| n[j] * g[j][i]).sum::<i64>() <= 0);
    for b in 1..=bound as i64 {
        let mut n = vec![1i64; r];
        let mut s: Vec<i64> = (0..r).map(|i| g[i].iter().sum()).collect();
        let mut min: Option<Vec<i64>> = None;
        loop {
            if s.iter().all(|&v| v <= 0) {
                min = Some(match min {
                    None => n.clone(),
                    Some(m) => m.iter().zip(&n).map(|(a, c)| *a.min(c)).collect(),
                });
            }
            // odometer step
            let mut k = 0;
            while k < r && n[k] == b {
                for (i, si) in s.iter_mut().enumerate() {
                    *si -= (b - 1) * g[k][i];
                }
                n[k] = 1;
                k += 1;
            }
            if k == r {
                break;
            }
            n[k] += 1;
            for (i, si) in s.iter_mut().enumerate() {
                *si += g[k][i];
            }
        }
        if let Some(m) = min {
            if !is_solution(&m) {
                return Err(Error::NonUniqueMinimum);
            }
            return finish(model, curves, m.into_iter().map(BigInt::from).collect());
        }
    }
    Err(Error::BoxExhausted(bound))
}

/// A configuration is rational when every connected component has a
/// fundamental cycle of arithmetic genus zero. The empty set is rational.
pub fn is_rational_configuration(model: &SurfaceModel, set: &[usize]) -> Result<bool> {
    if !lattice::is_negative_definite(&model.curve_gram(set)) {
        return Err(Error::NotNegativeDefinite(model.names(set).join(", ")));
    }
    for comp in model.connected_components(set) {
        if !fundamental_cycle(model, &comp)?.genus.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::GramMatrix;
    use crate::surface::tests::{a2, blowup, curve};
    use proptest::prelude::*;

    /// h ⊕ (-Cartan) with K = -3h; curves are the basis vectors after h.
    fn chain_model(gram: &[Vec<i64>], k_tail: &[i64]) -> SurfaceModel {
        let r = gram.len();
        let mut rows = vec![vec![0i64; r + 1]; r + 1];
        rows[0][0] = 1;
        for i in 0..r {
            for j in 0..r {
                rows[i + 1][j + 1] = gram[i][j];
            }
        }
        let mut k = vec![BigInt::from(-3)];
        k.extend(k_tail.iter().map(|&v| BigInt::from(v)));
        let curves = (0..r)
            .map(|i| {
                let mut c = vec![0i64; r + 1];
                c[i + 1] = 1;
                curve(&format!("c{}", i + 1), &c)
            })
            .collect();
        SurfaceModel::new(
            "test",
            GramMatrix::from_i64(&rows).unwrap(),
            k,
            curves,
            None,
        )
        .unwrap()
    }

    fn e8_gram() -> Vec<Vec<i64>> {
        // Chain 1-2-3-4-5-6-7 with node 8 attached to node 5 (branch lengths 1, 2, 4).
        let mut g = vec![vec![0i64; 8]; 8];
        for i in 0..8 {
            g[i][i] = -2;
        }
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)] {
            g[a][b] = 1;
            g[b][a] = 1;
        }
        g
    }

    #[test]
    fn a2_chain() {
        let m = a2();
        let z = fundamental_cycle(&m, &[0, 1]).unwrap();
        assert_eq!(z.coefficients, vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(z.multiplicity, BigInt::from(2));
        assert_eq!(z.genus, BigInt::from(0));
        assert_eq!(cycle_bruteforce_oracle(&m, &[0, 1], 12).unwrap(), z);
    }

    #[test]
    fn single_exceptional_curve() {
        let m = blowup();
        let z = fundamental_cycle(&m, &[0]).unwrap();
        assert_eq!(z.coefficients, vec![BigInt::from(1)]);
        assert_eq!(z.multiplicity, BigInt::from(1));
        assert_eq!(z.genus, BigInt::from(0));
        assert_eq!(cycle_bruteforce_oracle(&m, &[0], 12).unwrap(), z);
    }

    #[test]
    fn e8_matches_oracle() {
        let m = chain_model(&e8_gram(), &[0; 8]);
        let all: Vec<usize> = (0..8).collect();
        let z = fundamental_cycle(&m, &all).unwrap();
        let oracle = cycle_bruteforce_oracle(&m, &all, 7).unwrap();
        assert_eq!(z, oracle);
        assert_eq!(z.multiplicity, BigInt::from(2));
        assert_eq!(z.genus, BigInt::from(0));
    }

    #[test]
    fn oracle_box_too_small() {
        let m = chain_model(&e8_gram(), &[0; 8]);
        let all: Vec<usize> = (0..8).collect();
        assert_eq!(
            cycle_bruteforce_oracle(&m, &all, 2),
            Err(Error::BoxExhausted(2))
        );
    }

    #[test]
    fn rationality() {
        assert!(is_rational_configuration(&a2(), &[0, 1]).unwrap());
        assert!(is_rational_configuration(&a2(), &[]).unwrap());
        // coordinate -1 gives K·C = 2, so p_a(C) = 1
        let elliptic = chain_model(&[vec![-2]], &[-1]);
        assert!(!is_rational_configuration(&elliptic, &[0]).unwrap());
        assert_eq!(
            fundamental_cycle(&elliptic, &[0]).unwrap().genus,
            BigInt::from(1)
        );
    }

    #[test]
    fn rejects_bad_components() {
        let two = chain_model(&[vec![-2, 0], vec![0, -2]], &[0, 0]);
        assert!(matches!(
            fundamental_cycle(&two, &[0, 1]),
            Err(Error::NotConnected(_))
        ));
    }

    /// Random connected negative definite configurations: a random tree plus
    /// optional extra edges, diagonal in -1..=-4, K·C_i chosen so p_a(C_i) ≥ 0.
    fn configuration() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
        (1usize..=5).prop_flat_map(|r| {
            (
                proptest::collection::vec(0usize..8, r),
                proptest::collection::vec(1i64..=4, r),
                proptest::collection::vec(0i64..=1, r * r),
                proptest::collection::vec(0i64..=1, r),
            )
                .prop_map(move |(parents, diag, extra, genus)| {
                    let mut g = vec![vec![0i64; r]; r];
                    for i in 0..r {
                        g[i][i] = -diag[i] - 1;
                        if i > 0 {
                            let p = parents[i] % i;
                            g[i][p] = 1;
                            g[p][i] = 1;
                        }
                    }
                    for i in 0..r {
                        for j in (i + 1)..r {
                            if extra[i * r + j] == 1 && g[i][j] == 0 && (i + j) % 3 == 0 {
                                g[i][j] = 1;
                                g[j][i] = 1;
                            }
                        }
                    }
                    // K·C = 2 p_a - 2 - C²
                    let k: Vec<i64> = (0..r).map(|i| 2 * genus[i] - 2 - g[i][i]).collect();
                    (g, k)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn laufer_matches_oracle((g, kc) in configuration()) {
            let gram = GramMatrix::from_i64(&g).unwrap();
            prop_assume!(lattice::is_negative_definite(&gram));
            // K·C_i in this basis is the tail of K itself times the Gram, so
            // solve for coordinates and skip non-integral ones.
            let rhs: Vec<Rational> = kc.iter().map(|&v| Rational::from_integer(v.into())).collect();
            let coords = lattice::solve_linear(&gram, &rhs).unwrap();
            prop_assume!(coords.iter().all(|c| c.is_integer()));
            let tail: Vec<i64> = coords.iter().map(|c| c.to_integer().to_i64().unwrap()).collect();
            let m = chain_model(&g, &tail);
            let all: Vec<usize> = (0..g.len()).collect();
            let (z, steps) = laufer_sequence(&m, &all).unwrap();
            prop_assert!(!z.genus.is_negative());
            let total: BigInt = z.coefficients.iter().sum();
            prop_assert!(BigInt::from(steps) <= total);
            if let Ok(o) = cycle_bruteforce_oracle(&m, &all, 8) {
                prop_assert_eq!(o, z);
            }
        }
    }
}
