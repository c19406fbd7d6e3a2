//! Divisor classes as exact coordinate vectors in the lattice basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass(Vec<Rational>);

impl DivisorClass {
    pub fn new(coords: Vec<Rational>) -> Self {
        DivisorClass(coords)
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![Rational::zero(); rank])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        DivisorClass(
            coords
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_big(coords: &[BigInt]) -> Self {
        DivisorClass(
            coords
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.denom().is_one())
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.is_integral()
            .then(|| self.0.iter().map(|c| c.numer().clone()).collect())
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        DivisorClass(self.0.iter().map(|c| c * factor).collect())
    }

    /// `λ` with `self = λ·other`, if `other` is nonzero and the vectors are proportional.
    pub fn proportionality_to(&self, other: &DivisorClass) -> Option<Rational> {
        let pivot = other.0.iter().position(|c| !c.is_zero())?;
        let lambda = &self.0[pivot] / &other.0[pivot];
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| *a == &lambda * b)
            .then_some(lambda)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), rhs.len(), "divisor rank mismatch");
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), rhs.len(), "divisor rank mismatch");
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scaled(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn arithmetic() {
        let a = DivisorClass::from_ints(&[1, 2]);
        let b = DivisorClass::new(vec![ratio(1, 2), int(0)]);
        assert_eq!(&a + &b, DivisorClass::new(vec![ratio(3, 2), int(2)]));
        assert_eq!(&a - &a, DivisorClass::zero(2));
        assert!(!(&a + &b).is_integral());
        assert_eq!(
            a.to_integers(),
            Some(vec![BigInt::from(1), BigInt::from(2)])
        );
    }

    #[test]
    fn proportionality() {
        let a = DivisorClass::from_ints(&[2, 1]);
        let b = DivisorClass::from_ints(&[4, 2]);
        assert_eq!(b.proportionality_to(&a), Some(int(2)));
        assert_eq!(DivisorClass::zero(2).proportionality_to(&a), Some(int(0)));
        assert_eq!(
            DivisorClass::from_ints(&[1, 1]).proportionality_to(&a),
            None
        );
        assert_eq!(a.proportionality_to(&DivisorClass::zero(2)), None);
    }
}
