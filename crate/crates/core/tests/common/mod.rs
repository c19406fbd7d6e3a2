//! Shared generators and independent reference computations for the
//! integration tests.
#![allow(dead_code)]

use effbounds::io::fixtures::FIXTURES;
use effbounds::io::parse_surface_str;
use effbounds::{Curve, DivisorClass, GramMatrix, Rational, SurfaceModel};
use num::bigint::BigInt;
use num::traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixtures() -> Vec<(&'static str, SurfaceModel)> {
    FIXTURES
        .iter()
        .map(|(n, text)| (*n, parse_surface_str(text).expect("fixture validates")))
        .collect()
}

pub fn fixture(name: &str) -> SurfaceModel {
    fixtures()
        .into_iter()
        .find(|(n, _)| *n == name)
        .expect("known fixture")
        .1
}

pub fn d(v: &[i64]) -> DivisorClass {
    DivisorClass::from_ints(v)
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Nef and big classes of interest on a fixture: the ample reference and,
/// where the fixture has one, a class with nonempty exceptional curve.
pub fn fixture_polarizations(name: &str, model: &SurfaceModel) -> Vec<DivisorClass> {
    let mut out = vec![model
        .ample_reference()
        .expect("fixtures carry a reference")
        .clone()];
    if name == "hirzebruch_f2" {
        out.push(d(&[2, 1]));
    }
    if name == "blowup_p2" {
        out.push(d(&[1, 0]));
    }
    if let Some(i) = model.curve_index("h") {
        out.push(model.curve_class(i).clone());
    }
    out
}

fn unit(r: usize, i: usize, sign: i64) -> Vec<i64> {
    let mut v = vec![0; r];
    v[i] = sign;
    v
}

/// Random blow-up of the plane: basis `(h, e_1, …, e_{r-1})`, Gram
/// `diag(1, -1, …, -1)`, `K = (-3, 1, …, 1)`, prime curves picked from
/// exceptional curves, proper transforms of lines and differences
/// `e_i - e_j`, kept only when they meet each other nonnegatively.
pub fn random_blowup(rng: &mut TestRng, max_rank: usize, max_curves: usize) -> SurfaceModel {
    let r = rng.gen_range(2..=max_rank);
    let n = r - 1;
    let mut gram = vec![vec![0i64; r]; r];
    gram[0][0] = 1;
    for (i, row) in gram.iter_mut().enumerate().skip(1) {
        row[i] = -1;
    }
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    for i in 1..=n {
        candidates.push(unit(r, i, 1));
        let mut line = unit(r, 0, 1);
        line[i] = -1;
        candidates.push(line);
        for j in i + 1..=n {
            let mut l2 = unit(r, 0, 1);
            l2[i] = -1;
            l2[j] = -1;
            candidates.push(l2);
            let mut diff = unit(r, i, 1);
            diff[j] = -1;
            candidates.push(diff);
        }
    }
    if n >= 5 {
        let mut conic = unit(r, 0, 2);
        for c in conic.iter_mut().skip(1).take(5) {
            *c = -1;
        }
        candidates.push(conic);
    }
    candidates.shuffle(rng);
    let pair = |x: &[i64], y: &[i64]| -> i64 { (0..r).map(|i| x[i] * gram[i][i] * y[i]).sum() };
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    for c in candidates {
        if chosen.len() >= max_curves {
            break;
        }
        if chosen.iter().all(|o| pair(o, &c) >= 0) && rng.gen_bool(0.7) {
            chosen.push(c);
        }
    }
    if chosen.is_empty() {
        chosen.push(unit(r, 1, 1));
    }
    // strictly decreasing weights keep e_i - e_j (i < j) positive
    let w: Vec<i64> = (0..n).map(|i| (n - i) as i64).collect();
    let big: i64 = w.iter().sum::<i64>() + 1;
    let mut reference = vec![big];
    reference.extend(w.iter().map(|x| -x));
    let mut k = vec![1i64; r];
    k[0] = -3;
    let curves = chosen
        .iter()
        .enumerate()
        .map(|(i, c)| Curve {
            name: format!("C{i}"),
            coords: c.iter().map(|&x| x.into()).collect(),
            effective: true,
        })
        .collect();
    SurfaceModel::new(
        format!("random blow-up rank {r}"),
        GramMatrix::from_i64(&gram).unwrap(),
        k.into_iter().map(BigInt::from).collect(),
        curves,
        Some(d(&reference)),
    )
    .expect("random blow-up validates")
}

/// Random nef and big class on `model` whose exceptional curve contains a
/// random negative definite subset of the prime curves (possibly empty).
pub fn random_polarization(
    rng: &mut TestRng,
    model: &SurfaceModel,
    max_set: usize,
) -> Option<DivisorClass> {
    let h = model.ample_reference()?.clone();
    let mut eff = model.effective_curves();
    eff.shuffle(rng);
    let size = rng.gen_range(0..=max_set.min(eff.len()));
    let mut set: Vec<usize> = Vec::new();
    for i in eff {
        if set.len() >= size {
            break;
        }
        let mut trial = set.clone();
        trial.push(i);
        if effbounds::lattice::is_negative_definite(&model.curve_gram(&trial)) {
            set = trial;
        }
    }
    let scale = q(rng.gen_range(1..=2));
    let a = model.construct_polarization(&set, &h.scaled(&scale)).ok()?;
    model.exceptional_curve(&a).ok()?;
    Some(a)
}

pub fn random_class(rng: &mut TestRng, rank: usize, span: i64) -> DivisorClass {
    DivisorClass::new((0..rank).map(|_| q(rng.gen_range(-span..=span))).collect())
}

/// Random connected negative definite configuration of `m` curves beside a
/// positive class `h`; `K` is chosen so that every curve has `p_a ≥ 0`.
pub fn random_configuration(rng: &mut TestRng, max_curves: usize) -> SurfaceModel {
    loop {
        let m = rng.gen_range(1..=max_curves);
        let mut g = vec![vec![0i64; m]; m];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = -rng.gen_range(1..=4);
        }
        for i in 1..m {
            let j = rng.gen_range(0..i);
            let w = if rng.gen_bool(0.85) { 1 } else { 2 };
            g[i][j] = w;
            g[j][i] = w;
        }
        if m > 2 && rng.gen_bool(0.2) {
            let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
            if i != j && g[i][j] == 0 {
                g[i][j] = 1;
                g[j][i] = 1;
            }
        }
        let x: Vec<i64> = (0..m).map(|_| rng.gen_range(-2..=1)).collect();
        let kc: Vec<i64> = (0..m)
            .map(|i| (0..m).map(|j| g[i][j] * x[j]).sum())
            .collect();
        let ok = (0..m).all(|i| (kc[i] + g[i][i]) % 2 == 0 && kc[i] + g[i][i] >= -2);
        if !ok {
            continue;
        }
        let gm = GramMatrix::from_i64(&g).unwrap();
        if !effbounds::lattice::is_negative_definite(&gm) {
            continue;
        }
        let r = m + 1;
        let mut full = vec![vec![0i64; r]; r];
        full[0][0] = 1;
        for i in 0..m {
            for j in 0..m {
                full[i + 1][j + 1] = g[i][j];
            }
        }
        let mut k = vec![-3i64];
        k.extend(&x);
        // w = adj(M)·1 with M = -G gives M·w = det(M)·1 > 0
        let inv = effbounds::lattice::inverse(&gm.negated()).unwrap();
        let det = effbounds::lattice::determinant(&gm.negated());
        let w: Vec<i64> = (0..m)
            .map(|i| {
                let s: Rational = inv[i].iter().sum();
                (s * Rational::from_integer(det.clone()))
                    .to_integer()
                    .to_i64()
                    .unwrap()
            })
            .collect();
        let norm: i64 = (0..m)
            .map(|i| (0..m).map(|j| -w[i] * g[i][j] * w[j]).sum::<i64>())
            .sum();
        let mut big = 1i64;
        while big * big <= norm {
            big += 1;
        }
        let mut reference = vec![big];
        reference.extend(w.iter().map(|v| -v));
        let mut curves: Vec<Curve> = (0..m)
            .map(|i| {
                let mut c = vec![BigInt::zero(); r];
                c[i + 1] = BigInt::from(1);
                Curve {
                    name: format!("c{}", i + 1),
                    coords: c,
                    effective: true,
                }
            })
            .collect();
        let mut hc = vec![BigInt::zero(); r];
        hc[0] = BigInt::from(1);
        curves.push(Curve {
            name: "h".into(),
            coords: hc,
            effective: false,
        });
        let model = SurfaceModel::new(
            format!("random configuration of {m} curves"),
            GramMatrix::from_i64(&full).unwrap(),
            k.into_iter().map(BigInt::from).collect(),
            curves,
            Some(d(&reference)),
        );
        if let Ok(model) = model {
            return model;
        }
    }
}

/// `x·y` from raw Gram entries.
pub fn pair(model: &SurfaceModel, x: &DivisorClass, y: &DivisorClass) -> Rational {
    let g = model.lattice();
    let mut acc = q(0);
    for i in 0..x.len() {
        for j in 0..y.len() {
            acc += &x.coords()[i] * &y.coords()[j] * Rational::from_integer(g.entry(i, j).clone());
        }
    }
    acc
}

/// Determinant by cofactor expansion (small matrices only).
pub fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != c)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * cofactor_det(&minor)
        })
        .sum()
}

pub fn curve_gram_i128(model: &SurfaceModel, set: &[usize]) -> Vec<Vec<i128>> {
    set.iter()
        .map(|&i| {
            set.iter()
                .map(|&j| {
                    pair(model, model.curve_class(i), model.curve_class(j))
                        .to_integer()
                        .to_i128()
                        .unwrap()
                })
                .collect()
        })
        .collect()
}

/// Whether `x` and `y` are proportional, by vanishing 2×2 minors.
pub fn proportional(x: &DivisorClass, y: &DivisorClass) -> bool {
    let (a, b) = (x.coords(), y.coords());
    (0..a.len()).all(|i| (0..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}
