//! Dense square matrices over the exact coefficient rings used here.

use crate::scalars::ScalarA;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Minimal ring interface shared by `ScalarA`, `BigRational` and carrier
/// elements.
pub trait Ring: Clone + PartialEq {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn ring_is_zero(&self) -> bool;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
}

impl Ring for ScalarA {
    fn ring_zero() -> Self {
        ScalarA::zero()
    }
    fn ring_one() -> Self {
        ScalarA::one()
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

impl Ring for BigRational {
    fn ring_zero() -> Self {
        BigRational::zero()
    }
    fn ring_one() -> Self {
        BigRational::one()
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T: Ring> {
    pub dim: usize,
    entries: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zero(dim: usize) -> Self {
        Matrix { dim, entries: vec![T::ring_zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i, T::ring_one());
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: T) {
        self.entries[row * self.dim + col] = v;
    }

    pub fn add_to(&mut self, row: usize, col: usize, v: &T) {
        let cur = self.get(row, col).ring_add(v);
        self.set(row, col, cur);
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for i in 0..self.entries.len() {
            out.entries[i] = self.entries[i].ring_add(&other.entries[i]);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for i in 0..self.entries.len() {
            out.entries[i] = self.entries[i].ring_neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.dim);
        for i in 0..self.entries.len() {
            if !self.entries[i].ring_is_zero() {
                out.entries[i] = self.entries[i].ring_mul(c);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x.ring_is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = other.get(k, j);
                    if y.ring_is_zero() {
                        continue;
                    }
                    out.add_to(i, j, &x.ring_mul(y));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.ring_is_zero())
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }
}
