use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An element of `O_K`: integer coordinates over the power basis.
///
/// Additive structure lives here; multiplication needs the field
/// (see [`NumberField::mul`](super::NumberField::mul)).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraicInt {
    coords: Vec<i64>,
}

impl AlgebraicInt {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn zero(n: usize) -> Self {
        Self { coords: vec![0; n] }
    }

    pub fn from_int(n: usize, k: i64) -> Self {
        let mut coords = vec![0; n];
        coords[0] = k;
        Self { coords }
    }

    /// The `j`-th power-basis element `α^j`.
    pub fn basis(n: usize, j: usize) -> Self {
        let mut coords = vec![0; n];
        coords[j] = 1;
        Self { coords }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.coords
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.coords.iter().map(|&c| c * k).collect())
    }
}

impl Add for &AlgebraicInt {
    type Output = AlgebraicInt;
    fn add(self, rhs: Self) -> AlgebraicInt {
        AlgebraicInt::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &AlgebraicInt {
    type Output = AlgebraicInt;
    fn sub(self, rhs: Self) -> AlgebraicInt {
        AlgebraicInt::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &AlgebraicInt {
    type Output = AlgebraicInt;
    fn neg(self) -> AlgebraicInt {
        AlgebraicInt::new(self.coords.iter().map(|a| -a).collect())
    }
}

impl Mul<i64> for &AlgebraicInt {
    type Output = AlgebraicInt;
    fn mul(self, k: i64) -> AlgebraicInt {
        self.scale(k)
    }
}
