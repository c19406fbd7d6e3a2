//! A surface presented by a finite lattice model.
//!
//! The model fixes an intersection form on a rank-`r` lattice standing in for
//! `NS(X)`, a canonical class, and a finite list of named curve classes.
//! Curves flagged `effective` are treated as the prime curves of the surface:
//! nefness, ampleness and exceptional curves are all decided relative to them.
//! Entries with `effective = false` are named auxiliary classes, usable in
//! divisor expressions but ignored by positivity tests.

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::lattice::{self, GramMatrix, Signature};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub coords: Vec<BigInt>,
    pub effective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    name: String,
    lattice: GramMatrix,
    canonical: Vec<BigInt>,
    curves: Vec<Curve>,
    ample_reference: Option<DivisorClass>,
    canonical_class: DivisorClass,
    curve_classes: Vec<DivisorClass>,
}

/// Positivity flags, all relative to the listed effective curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Positivity {
    pub nef_model: bool,
    pub big: bool,
    pub ample_model: bool,
    /// `None` when the model has no ample reference class.
    pub pseudo_effective_model: Option<bool>,
}

fn validation(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Validation {
        path: path.into(),
        message: message.into(),
    }
}

impl SurfaceModel {
    /// Builds and validates a model: Hodge-index signature `(1, r-1, 0)`,
    /// characteristic canonical class, sane curve list and an ample reference
    /// that really is ample on the model.
    pub fn new(
        name: impl Into<String>,
        lattice: GramMatrix,
        canonical: Vec<BigInt>,
        curves: Vec<Curve>,
        ample_reference: Option<DivisorClass>,
    ) -> Result<Self> {
        let r = lattice.dim();
        if r == 0 {
            return Err(validation("rank", "lattice rank must be positive"));
        }
        let sig = lattice::signature(&lattice);
        if sig
            != (Signature {
                positive: 1,
                negative: r - 1,
                zero: 0,
            })
        {
            return Err(validation(
                "gram",
                format!(
                    "signature ({}, {}, {}) is not of Hodge index shape (1, {}, 0)",
                    sig.positive,
                    sig.negative,
                    sig.zero,
                    r - 1
                ),
            ));
        }
        if canonical.len() != r {
            return Err(validation(
                "canonical",
                format!("expected {r} coordinates, found {}", canonical.len()),
            ));
        }
        if !lattice::is_characteristic(&canonical, &lattice) {
            return Err(validation(
                "canonical",
                "canonical class is not characteristic (K.x + x.x must be even)",
            ));
        }
        for (i, c) in curves.iter().enumerate() {
            let path = format!("curves[{i}]");
            if c.coords.len() != r {
                return Err(validation(
                    format!("{path}.coords"),
                    format!("expected {r} coordinates, found {}", c.coords.len()),
                ));
            }
            if c.coords.iter().all(Zero::is_zero) {
                return Err(validation(format!("{path}.coords"), "curve class is zero"));
            }
            if c.name.is_empty() || curves[..i].iter().any(|o| o.name == c.name) {
                return Err(validation(
                    format!("{path}.name"),
                    format!("curve name '{}' is empty or duplicated", c.name),
                ));
            }
        }
        let canonical_class = DivisorClass::from_big(&canonical);
        let curve_classes = curves
            .iter()
            .map(|c| DivisorClass::from_big(&c.coords))
            .collect();
        let model = SurfaceModel {
            name: name.into(),
            lattice,
            canonical,
            curves,
            ample_reference: None,
            canonical_class,
            curve_classes,
        };
        let eff = model.effective_curves();
        for (a, &i) in eff.iter().enumerate() {
            let ci = &model.curves[i];
            let pa = model.curve_genus(i);
            if pa.is_negative() {
                return Err(validation(
                    format!("curves[{i}]"),
                    format!(
                        "prime curve '{}' has negative arithmetic genus {pa}",
                        ci.name
                    ),
                ));
            }
            for &j in &eff[a + 1..] {
                if model
                    .lattice
                    .pair_int(&ci.coords, &model.curves[j].coords)
                    .is_negative()
                {
                    return Err(validation(
                        format!("curves[{j}]"),
                        format!(
                            "distinct prime curves '{}' and '{}' meet negatively",
                            ci.name, model.curves[j].name
                        ),
                    ));
                }
            }
        }
        let mut model = model;
        if let Some(h) = ample_reference {
            if h.len() != r {
                return Err(validation(
                    "ample_reference",
                    format!("expected {r} coordinates, found {}", h.len()),
                ));
            }
            if !model.positivity(&h)?.ample_model {
                return Err(validation(
                    "ample_reference",
                    "reference class is not ample relative to the listed curves",
                ));
            }
            model.ample_reference = Some(h);
        }
        Ok(model)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.lattice.dim()
    }

    pub fn lattice(&self) -> &GramMatrix {
        &self.lattice
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical_class
    }

    pub fn canonical_coords(&self) -> &[BigInt] {
        &self.canonical
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn curve_class(&self, i: usize) -> &DivisorClass {
        &self.curve_classes[i]
    }

    pub fn curve_name(&self, i: usize) -> &str {
        &self.curves[i].name
    }

    pub fn curve_index(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.name == name)
    }

    pub fn ample_reference(&self) -> Option<&DivisorClass> {
        self.ample_reference.as_ref()
    }

    /// Indices of the curves treated as prime curves.
    pub fn effective_curves(&self) -> Vec<usize> {
        (0..self.curves.len())
            .filter(|&i| self.curves[i].effective)
            .collect()
    }

    fn check_rank(&self, d: &DivisorClass) -> Result<()> {
        if d.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: d.len(),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<Rational> {
        self.check_rank(d1)?;
        self.check_rank(d2)?;
        Ok(self.lattice.pair(d1.coords(), d2.coords()))
    }

    /// Infallible pairing for classes already known to live on this model.
    pub(crate) fn dot(&self, d1: &DivisorClass, d2: &DivisorClass) -> Rational {
        self.lattice.pair(d1.coords(), d2.coords())
    }

    pub fn self_intersection(&self, d: &DivisorClass) -> Result<Rational> {
        self.intersect(d, d)
    }

    /// `p_a(D) = 1 + (D² + K·D)/2`. The empty divisor gets `p_a(0) = 1`.
    pub fn arithmetic_genus(&self, d: &DivisorClass) -> Result<BigInt> {
        self.check_rank(d)?;
        let coords = d
            .to_integers()
            .ok_or_else(|| Error::NonIntegral(d.to_string()))?;
        let twice = self.lattice.pair_int(&coords, &coords)
            + self.lattice.pair_int(&self.canonical, &coords);
        if twice.is_odd() {
            return Err(Error::NonIntegralGenus(d.to_string()));
        }
        Ok(BigInt::one() + twice / 2)
    }

    fn curve_genus(&self, i: usize) -> BigInt {
        let c = &self.curves[i].coords;
        let twice = self.lattice.pair_int(c, c) + self.lattice.pair_int(&self.canonical, c);
        BigInt::one() + twice / 2
    }

    /// `Σ x_i C_i` over the given curve indices.
    pub fn combination(&self, terms: &[(usize, Rational)]) -> DivisorClass {
        let mut acc = DivisorClass::zero(self.rank());
        for (i, x) in terms {
            if !x.is_zero() {
                acc = &acc + &self.curve_classes[*i].scaled(x);
            }
        }
        acc
    }

    /// Intersection matrix `(C_i C_j)` of the given curves.
    pub fn curve_gram(&self, idx: &[usize]) -> GramMatrix {
        let rows = idx
            .iter()
            .map(|&i| {
                idx.iter()
                    .map(|&j| {
                        self.lattice
                            .pair_int(&self.curves[i].coords, &self.curves[j].coords)
                    })
                    .collect()
            })
            .collect();
        GramMatrix::new(rows).expect("intersection matrix of curves is symmetric")
    }

    pub fn positivity(&self, a: &DivisorClass) -> Result<Positivity> {
        self.check_rank(a)?;
        let mut nef = true;
        let mut strictly = true;
        for i in self.effective_curves() {
            let v = self.dot(a, &self.curve_classes[i]);
            if v.is_negative() {
                nef = false;
            }
            if !v.is_positive() {
                strictly = false;
            }
        }
        let big = self.dot(a, a).is_positive();
        let pseudo_effective_model = self
            .ample_reference
            .as_ref()
            .map(|h| !self.dot(a, h).is_negative());
        Ok(Positivity {
            nef_model: nef,
            big,
            ample_model: nef && big && strictly,
            pseudo_effective_model,
        })
    }

    pub fn is_pseudo_effective_model(&self, a: &DivisorClass) -> Result<bool> {
        self.positivity(a)?
            .pseudo_effective_model
            .ok_or(Error::NoAmpleReference)
    }

    /// Errors with `NotNefBig` unless `a` is nef on the model with `a² > 0`.
    pub fn require_nef_big(&self, a: &DivisorClass) -> Result<Positivity> {
        let p = self.positivity(a)?;
        if !(p.nef_model && p.big) {
            return Err(Error::NotNefBig(format!(
                "{a} (nef_model = {}, big = {})",
                p.nef_model, p.big
            )));
        }
        Ok(p)
    }

    /// `E(A)`: the listed prime curves orthogonal to the nef and big class `A`.
    /// Their intersection matrix must be negative definite; otherwise the
    /// model contradicts the Hodge index theorem and is reported as inconsistent.
    pub fn exceptional_curve(&self, a: &DivisorClass) -> Result<Vec<usize>> {
        self.require_nef_big(a)?;
        let set: Vec<usize> = self
            .effective_curves()
            .into_iter()
            .filter(|&i| self.dot(a, &self.curve_classes[i]).is_zero())
            .collect();
        if !lattice::is_negative_definite(&self.curve_gram(&set)) {
            return Err(Error::ModelInconsistent(format!(
                "curves orthogonal to {a} are not negative definite: {}",
                self.names(&set).join(", ")
            )));
        }
        Ok(set)
    }

    /// Connected components of `set` under `C_i·C_j > 0`, each sorted, ordered
    /// by smallest member.
    pub fn connected_components(&self, set: &[usize]) -> Vec<Vec<usize>> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut seen = vec![false; sorted.len()];
        let mut out = Vec::new();
        for start in 0..sorted.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![sorted[start]];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for v in 0..sorted.len() {
                    if !seen[v]
                        && self
                            .lattice
                            .pair_int(
                                &self.curves[sorted[u]].coords,
                                &self.curves[sorted[v]].coords,
                            )
                            .is_positive()
                    {
                        seen[v] = true;
                        comp.push(sorted[v]);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// A nef and big class whose exceptional curve contains `set`:
    /// `A = |det(C_iC_j)|·H + Σ x_i C_i` with `A·C_k = 0` for `k ∈ set`.
    ///
    /// `H` must be nef and big on the model. When `H` is ample the `x_i` are
    /// positive; when `H` is orthogonal to some of the curves they are only
    /// nonnegative.
    pub fn construct_polarization(&self, set: &[usize], h: &DivisorClass) -> Result<DivisorClass> {
        self.check_rank(h)?;
        let p = self.positivity(h)?;
        if !(p.nef_model && p.big) {
            return Err(Error::NotAmple(format!(
                "{h} is not nef and big on the model"
            )));
        }
        let gram = self.curve_gram(set);
        if !lattice::is_negative_definite(&gram) {
            return Err(Error::NotNegativeDefinite(self.names(set).join(", ")));
        }
        let det = Rational::from_integer(lattice::determinant(&gram).abs());
        let rhs: Vec<Rational> = set
            .iter()
            .map(|&k| -(&det * self.dot(h, &self.curve_classes[k])))
            .collect();
        let x = lattice::solve_linear(&gram, &rhs)?;
        if x.iter().any(|v| v.is_negative() || !v.denom().is_one()) {
            return Err(Error::ModelInconsistent(format!(
                "polarization coefficients are not nonnegative integers: {:?}",
                x.iter().map(ToString::to_string).collect::<Vec<_>>()
            )));
        }
        let terms: Vec<(usize, Rational)> = set.iter().copied().zip(x).collect();
        Ok(&h.scaled(&det) + &self.combination(&terms))
    }

    pub fn names(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&i| self.curves[i].name.clone()).collect()
    }

    /// Human-readable `2*s + 1/2*f` style expression for `Σ x_i C_i`.
    pub fn render_combination(&self, terms: &[(usize, Rational)]) -> String {
        let parts: Vec<String> = terms
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| {
                if x.is_one() {
                    self.curves[*i].name.clone()
                } else {
                    format!("{x}*{}", self.curves[*i].name)
                }
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Test hook: the same model with one symmetric Gram entry shifted, skipping validation.
    #[doc(hidden)]
    pub fn with_perturbed_entry(&self, i: usize, j: usize, delta: i64) -> SurfaceModel {
        let mut rows = self.lattice.rows().to_vec();
        rows[i][j] += delta;
        if i != j {
            rows[j][i] += delta;
        }
        let mut m = self.clone();
        m.lattice = GramMatrix::new(rows).expect("perturbation keeps symmetry");
        m
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::int;

    pub(crate) fn curve(name: &str, coords: &[i64]) -> Curve {
        Curve {
            name: name.to_string(),
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
            effective: true,
        }
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    /// F₂ in the basis (f, s).
    pub(crate) fn f2() -> SurfaceModel {
        SurfaceModel::new(
            "F2",
            GramMatrix::from_i64(&[vec![0, 1], vec![1, -2]]).unwrap(),
            big(&[-4, -2]),
            vec![curve("f", &[1, 0]), curve("s", &[0, 1])],
            Some(DivisorClass::from_ints(&[3, 1])),
        )
        .unwrap()
    }

    /// P² blown up at one point, basis (H, E).
    pub(crate) fn blowup() -> SurfaceModel {
        SurfaceModel::new(
            "Bl_p P2",
            GramMatrix::from_i64(&[vec![1, 0], vec![0, -1]]).unwrap(),
            big(&[-3, 1]),
            vec![
                curve("E", &[0, 1]),
                curve("L", &[1, -1]),
                curve("H", &[1, 0]),
            ],
            Some(DivisorClass::from_ints(&[2, -1])),
        )
        .unwrap()
    }

    /// Resolution of an A₂ point, basis (h, c1, c2).
    pub(crate) fn a2() -> SurfaceModel {
        SurfaceModel::new(
            "A2",
            GramMatrix::from_i64(&[vec![1, 0, 0], vec![0, -2, 1], vec![0, 1, -2]]).unwrap(),
            big(&[-3, 0, 0]),
            vec![curve("c1", &[0, 1, 0]), curve("c2", &[0, 0, 1])],
            Some(DivisorClass::from_ints(&[3, -1, -1])),
        )
        .unwrap()
    }

    pub(crate) fn double_cover(d: i64) -> SurfaceModel {
        SurfaceModel::new(
            format!("double cover d={d}"),
            GramMatrix::from_i64(&[vec![2]]).unwrap(),
            big(&[d - 3]),
            vec![curve("H", &[1])],
            Some(DivisorClass::from_ints(&[1])),
        )
        .unwrap()
    }

    #[test]
    fn intersect_examples() {
        let f2 = f2();
        let s = DivisorClass::from_ints(&[0, 1]);
        let a = DivisorClass::from_ints(&[2, 1]);
        assert_eq!(f2.intersect(&a, &s).unwrap(), int(0));
        let dc = double_cover(5);
        let h = DivisorClass::from_ints(&[1]);
        assert_eq!(dc.intersect(&h, &h).unwrap(), int(2));
        assert_eq!(f2.intersect(&a, &DivisorClass::zero(2)).unwrap(), int(0));
        assert!(matches!(
            f2.intersect(&a, &h),
            Err(Error::RankMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn genus_examples() {
        let f2 = f2();
        assert_eq!(
            f2.arithmetic_genus(&DivisorClass::from_ints(&[0, 1]))
                .unwrap(),
            BigInt::from(0)
        );
        let bl = blowup();
        assert_eq!(
            bl.arithmetic_genus(&DivisorClass::from_ints(&[0, 1]))
                .unwrap(),
            BigInt::from(0)
        );
        assert_eq!(
            bl.arithmetic_genus(&DivisorClass::zero(2)).unwrap(),
            BigInt::from(1)
        );
        let half = DivisorClass::new(vec![int(0), crate::rational::ratio(1, 2)]);
        assert!(matches!(
            f2.arithmetic_genus(&half),
            Err(Error::NonIntegral(_))
        ));
    }

    #[test]
    fn exceptional_examples() {
        let f2 = f2();
        assert_eq!(
            f2.exceptional_curve(&DivisorClass::from_ints(&[2, 1]))
                .unwrap(),
            vec![1]
        );
        let dc = double_cover(5);
        assert!(dc
            .exceptional_curve(&DivisorClass::from_ints(&[1]))
            .unwrap()
            .is_empty());
        let a2 = a2();
        assert_eq!(
            a2.exceptional_curve(&DivisorClass::from_ints(&[1, 0, 0]))
                .unwrap(),
            vec![0, 1]
        );
        assert!(matches!(
            f2.exceptional_curve(&DivisorClass::from_ints(&[1, 0])),
            Err(Error::NotNefBig(_))
        ));
    }

    #[test]
    fn positivity_examples() {
        let bl = blowup();
        let p = bl.positivity(&DivisorClass::from_ints(&[2, -1])).unwrap();
        assert!(p.ample_model && p.nef_model && p.big);
        let f2 = f2();
        let p = f2.positivity(&DivisorClass::from_ints(&[2, 1])).unwrap();
        assert!(p.nef_model && p.big && !p.ample_model);
        assert_eq!(p.pseudo_effective_model, Some(true));
        assert!(
            !f2.positivity(&DivisorClass::from_ints(&[1, 0]))
                .unwrap()
                .big
        );
    }

    #[test]
    fn pseudo_effective_needs_reference() {
        let m = SurfaceModel::new(
            "no ref",
            GramMatrix::from_i64(&[vec![1]]).unwrap(),
            big(&[-3]),
            vec![curve("h", &[1])],
            None,
        )
        .unwrap();
        assert_eq!(
            m.is_pseudo_effective_model(&DivisorClass::from_ints(&[1])),
            Err(Error::NoAmpleReference)
        );
    }

    #[test]
    fn components_examples() {
        let a2 = a2();
        assert_eq!(a2.connected_components(&[0, 1]), vec![vec![0, 1]]);
        assert!(a2.connected_components(&[]).is_empty());
        let disjoint = SurfaceModel::new(
            "2A1",
            GramMatrix::from_i64(&[vec![1, 0, 0], vec![0, -2, 0], vec![0, 0, -2]]).unwrap(),
            big(&[-3, 0, 0]),
            vec![curve("a", &[0, 1, 0]), curve("b", &[0, 0, 1])],
            None,
        )
        .unwrap();
        assert_eq!(
            disjoint.connected_components(&[1, 0]),
            vec![vec![0], vec![1]]
        );
    }

    #[test]
    fn polarization_examples() {
        let bl = blowup();
        let a = bl
            .construct_polarization(&[0], &DivisorClass::from_ints(&[2, -1]))
            .unwrap();
        assert_eq!(a, DivisorClass::from_ints(&[2, 0]));
        assert!(bl.exceptional_curve(&a).unwrap().contains(&0));
        let a2 = a2();
        let a = a2
            .construct_polarization(&[0, 1], &DivisorClass::from_ints(&[1, 0, 0]))
            .unwrap();
        assert_eq!(a, DivisorClass::from_ints(&[3, 0, 0]));
        let h = DivisorClass::from_ints(&[3, -1, -1]);
        assert_eq!(a2.construct_polarization(&[], &h).unwrap(), h);
        assert!(matches!(
            bl.construct_polarization(&[0], &DivisorClass::from_ints(&[0, 1])),
            Err(Error::NotAmple(_))
        ));
    }

    #[test]
    fn validation_rejects_bad_models() {
        let err = SurfaceModel::new(
            "definite",
            GramMatrix::from_i64(&[vec![1, 0], vec![0, 1]]).unwrap(),
            big(&[1, 1]),
            vec![],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation { ref path, .. } if path == "gram"));
        let err = SurfaceModel::new(
            "odd K",
            GramMatrix::from_i64(&[vec![1]]).unwrap(),
            big(&[0]),
            vec![],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation { ref path, .. } if path == "canonical"));
        let err = SurfaceModel::new(
            "bad ref",
            GramMatrix::from_i64(&[vec![0, 1], vec![1, -2]]).unwrap(),
            big(&[-4, -2]),
            vec![curve("f", &[1, 0]), curve("s", &[0, 1])],
            Some(DivisorClass::from_ints(&[2, 1])),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation { ref path, .. } if path == "ample_reference"));
    }
}
