//! Randomized invariants across modules. Models come from the seeded
//! generators in `common`; proptest drives the seeds and shrinks them.

mod common;

use common::*;
use effbounds::bounds::{
    bound_report, condition_check, effective_threshold, enumerate_obstructions, main_hypothesis,
    tau, theorem_thresholds, Extended, ThresholdOptions,
};
use effbounds::cycles::{fundamental_cycle, is_rational_configuration, laufer_sequence};
use effbounds::zariski::zariski_decompose;
use effbounds::{DivisorClass, Rational, SurfaceModel};
use num::bigint::BigInt;
use num::traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::Rng;

fn model_for(seed: u64) -> (TestRng, SurfaceModel) {
    let mut r = rng(seed);
    let m = if seed.is_multiple_of(2) {
        random_blowup(&mut r, 5, 8)
    } else {
        random_configuration(&mut r, 4)
    };
    (r, m)
}

fn polarized(seed: u64) -> Option<(TestRng, SurfaceModel, DivisorClass)> {
    let (mut r, m) = model_for(seed);
    let a = random_polarization(&mut r, &m, 3)?;
    Some((r, m, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn adjunction_parity(seed in any::<u64>(), coords in proptest::collection::vec(-5i64..=5, 5)) {
        let (_, m) = model_for(seed);
        let dd = d(&coords[..m.rank()]);
        let s = pair(&m, &dd, &dd) + pair(&m, m.canonical(), &dd);
        prop_assert!((s.to_integer() % BigInt::from(2)).is_zero());
    }

    #[test]
    fn polarization_contracts_its_set(seed in any::<u64>()) {
        let (mut r, m) = model_for(seed);
        let mut set: Vec<usize> = Vec::new();
        for i in m.effective_curves() {
            let mut trial = set.clone();
            trial.push(i);
            if r.gen_bool(0.5) && effbounds::lattice::is_negative_definite(&m.curve_gram(&trial)) {
                set = trial;
            }
        }
        let h = m.ample_reference().unwrap();
        let a = m.construct_polarization(&set, h).unwrap();
        let e = m.exceptional_curve(&a).unwrap();
        prop_assert!(set.iter().all(|i| e.contains(i)));
        prop_assert!(effbounds::lattice::is_negative_definite(&m.curve_gram(&e)));
        let pos = m.positivity(&a).unwrap();
        prop_assert!(pos.nef_model && pos.big);
        prop_assert_eq!(pos.ample_model, e.is_empty());
    }

    #[test]
    fn zariski_positive_part(seed in any::<u64>(), weights in proptest::collection::vec(0i64..=3, 8)) {
        let (_, m) = model_for(seed);
        let mut dd = DivisorClass::zero(m.rank());
        for (w, i) in weights.iter().zip(m.effective_curves()) {
            dd = &dd + &(&q(*w) * m.curve_class(i));
        }
        prop_assume!(!dd.is_zero());
        let z = zariski_decompose(&m, &dd).unwrap();
        prop_assert!(!pair(&m, &z.positive, &z.positive).is_negative());
        if m.positivity(&dd).unwrap().nef_model {
            prop_assert!(z.coefficients.is_empty());
        }
        for i in m.effective_curves() {
            let c = m.curve_class(i);
            if pair(&m, c, c).is_negative() {
                let single = zariski_decompose(&m, c).unwrap();
                prop_assert!(pair(&m, &single.positive, c).is_zero());
            }
        }
    }

    #[test]
    fn rational_cycles_bound_their_subdivisors(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_configuration(&mut r, 4);
        let comp = m.effective_curves();
        let (z, steps) = laufer_sequence(&m, &comp).unwrap();
        let total: BigInt = z.coefficients.iter().sum();
        prop_assert!(BigInt::from(steps) <= total);
        prop_assert!(!z.genus.is_negative());
        if is_rational_configuration(&m, &comp).unwrap() {
            let caps: Vec<i64> = z.coefficients.iter().map(|c| c.to_i64().unwrap()).collect();
            let mut n = vec![0i64; caps.len()];
            loop {
                let mut i = 0;
                while i < n.len() && n[i] == caps[i] {
                    n[i] = 0;
                    i += 1;
                }
                if i == n.len() {
                    break;
                }
                n[i] += 1;
                let terms: Vec<(usize, Rational)> = comp.iter().copied().zip(n.iter().map(|&v| q(v))).collect();
                let dd = m.combination(&terms);
                prop_assert!(m.arithmetic_genus(&dd).unwrap() <= BigInt::zero());
            }
        }
    }

    #[test]
    fn sufficient_conditions_leave_no_obstruction(seed in any::<u64>(), k in 0u32..=3) {
        let Some((mut r, m, a)) = polarized(seed) else { return Ok(()) };
        let t = random_class(&mut r, m.rank(), 2);
        let flags = condition_check(&m, &a, &t, k).unwrap();
        if flags.matsusaka || flags.laufer_ramanujam {
            let set = enumerate_obstructions(&m, &a, &t, k, &q(1)).unwrap();
            prop_assert!(set.divisors.is_empty());
        }
    }

    #[test]
    fn tau_is_the_minimum_of_its_level(seed in any::<u64>()) {
        let Some((mut r, m, a)) = polarized(seed) else { return Ok(()) };
        let t = random_class(&mut r, m.rank(), 2);
        let tv = tau(&m, &a, &t).unwrap();
        let e = m.exceptional_curve(&a).unwrap();
        match tv.value {
            Extended::PlusInfinity => prop_assert!(e.is_empty()),
            Extended::Finite(v) => {
                prop_assert!(!e.is_empty());
                // every obstruction at any level k ≥ τ has value ≥ τ, and τ itself is attained
                if v >= q(0) {
                    let k = v.ceil().to_integer().to_u32().unwrap();
                    let set = enumerate_obstructions(&m, &a, &t, k, &q(1)).unwrap();
                    prop_assert!(set.divisors.iter().all(|o| o.value >= v));
                    prop_assert_eq!(set.witness_minimum.map(|w| w.value), Some(v));
                }
            }
        }
    }

    #[test]
    fn main_hypothesis_is_monotone(seed in any::<u64>(), k in 0u32..=3, n in -4i64..=12) {
        let Some((mut r, m, a)) = polarized(seed) else { return Ok(()) };
        let t = random_class(&mut r, m.rank(), 2);
        let here = main_hypothesis(&m, &BigInt::from(n), k, &a, &t).unwrap().holds;
        let next = main_hypothesis(&m, &BigInt::from(n + 1), k, &a, &t).unwrap().holds;
        prop_assert!(!here || next);
        let bound = effective_threshold(&m, &a, &t).unwrap() + q(k as i64);
        prop_assert!(!(q(n) > bound) || here);
    }

    #[test]
    fn closed_form_for_pairs_of_components(seed in any::<u64>()) {
        let Some((_, m, a)) = polarized(seed) else { return Ok(()) };
        let zero = DivisorClass::zero(m.rank());
        let entries = theorem_thresholds(&m, &a, &zero, &ThresholdOptions::default()).unwrap();
        for e in entries.iter().filter(|e| e.id.starts_with("thm4.8(4.5)")) {
            prop_assert_eq!(e.derived.get("closed_form_agrees").map(String::as_str), Some("true"));
        }
        for comp in m.connected_components(&m.exceptional_curve(&a).unwrap()) {
            let z = fundamental_cycle(&m, &comp).unwrap();
            prop_assert!(z.multiplicity.is_positive());
        }
    }

    #[test]
    fn bound_reports_round_trip(seed in any::<u64>(), k in 0u32..=2) {
        let Some((mut r, m, a)) = polarized(seed) else { return Ok(()) };
        let t = random_class(&mut r, m.rank(), 1);
        let opts = ThresholdOptions { k, ..ThresholdOptions::default() };
        let report = bound_report(&m, &a, &t, &opts).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: effbounds::bounds::BoundReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, report);
    }
}
