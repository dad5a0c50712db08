//! Exact scalar arithmetic in `Q[a]` localized at `(1 + a)`.
//!
//! Every scalar is a quotient `p(a) / (1+a)^k` with `p` a polynomial with
//! rational coefficients, kept canonical by cancelling `(1+a)` factors.
//! Membership in `Z[a]` is read off the coefficients; membership in `Z_a`
//! (the ring generated by the binomial coefficients `binom(a, n)`) is decided
//! through the Newton forward-difference expansion in the binomial basis.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("specialization at a = {0} is excluded (a must avoid 0 and -1)")]
    ForbiddenSpecialization(String),
    #[error("scalar {0} is not invertible in Q[a] localized at (1+a)")]
    NotInvertible(String),
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Ordinary binomial coefficient `C(n, k)` as a rational.
pub fn binom_int(n: u64, k: u64) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    let mut acc = BigRational::one();
    for j in 0..k {
        acc *= BigRational::new(BigInt::from(n - j), BigInt::from(j + 1));
    }
    acc
}

/// A polynomial in the parameter `a` with rational coefficients.
///
/// `coeffs[n]` is the coefficient of `a^n`; the trailing coefficient is
/// nonzero, the zero polynomial is the empty sequence.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyA {
    coeffs: Vec<BigRational>,
}

impl PolyA {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        PolyA { coeffs }
    }

    pub fn zero() -> Self {
        PolyA { coeffs: vec![] }
    }

    pub fn one() -> Self {
        PolyA::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        PolyA::new(vec![c])
    }

    pub fn from_int(n: i64) -> Self {
        PolyA::constant(int(n))
    }

    /// The polynomial `a`.
    pub fn var() -> Self {
        PolyA::new(vec![BigRational::zero(), BigRational::one()])
    }

    /// The polynomial `1 + a`.
    pub fn one_plus_a() -> Self {
        PolyA::new(vec![BigRational::one(), BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &PolyA) -> PolyA {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        PolyA::new(out)
    }

    pub fn sub(&self, other: &PolyA) -> PolyA {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyA {
        PolyA::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &PolyA) -> PolyA {
        if self.is_zero() || other.is_zero() {
            return PolyA::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, ci) in self.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in other.coeffs.iter().enumerate() {
                out[i + j] += ci * cj;
            }
        }
        PolyA::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> PolyA {
        PolyA::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact division by `(1 + a)`, if it divides.
    pub fn div_one_plus_a(&self) -> Option<PolyA> {
        if self.is_zero() {
            return Some(PolyA::zero());
        }
        // Synthetic division by the root a = -1:
        // b_{i-1} = c_i - b_i descending, remainder c_0 - b_0.
        let mut quot = vec![BigRational::zero(); self.coeffs.len() - 1];
        let mut carry = BigRational::zero();
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeff(i) - &carry;
            if i == 0 {
                if c.is_zero() {
                    return Some(PolyA::new(quot));
                }
                return None;
            }
            quot[i - 1] = c.clone();
            carry = c;
        }
        unreachable!()
    }

    /// True when every coefficient is an integer, i.e. the polynomial is in `Z[a]`.
    pub fn is_integer_poly(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }
}

impl fmt::Debug for PolyA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_poly(self))
    }
}

impl fmt::Display for PolyA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_poly(self))
    }
}

fn render_rat(c: &BigRational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn render_poly(p: &PolyA) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for n in (0..p.coeffs.len()).rev() {
        let c = p.coeff(n);
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let unit_coeff = mag.is_one() && n > 0;
        if !unit_coeff {
            out.push_str(&render_rat(&mag));
        }
        if n > 0 {
            if !unit_coeff {
                out.push('*');
            }
            out.push('a');
            if n > 1 {
                out.push_str(&format!("^{}", n));
            }
        }
    }
    out
}

/// An element of `Q[a][(1+a)^{-1}]`: `num / (1+a)^{denom_pow}` in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarA {
    num: PolyA,
    denom_pow: u32,
}

impl ScalarA {
    pub fn new(num: PolyA, denom_pow: u32) -> Self {
        let mut s = ScalarA { num, denom_pow };
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.denom_pow = 0;
            return;
        }
        while self.denom_pow > 0 {
            match self.num.div_one_plus_a() {
                Some(q) => {
                    self.num = q;
                    self.denom_pow -= 1;
                }
                None => break,
            }
        }
    }

    pub fn zero() -> Self {
        ScalarA { num: PolyA::zero(), denom_pow: 0 }
    }

    pub fn one() -> Self {
        ScalarA { num: PolyA::one(), denom_pow: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        ScalarA { num: PolyA::from_int(n), denom_pow: 0 }
    }

    pub fn from_rational(c: BigRational) -> Self {
        ScalarA { num: PolyA::constant(c), denom_pow: 0 }
    }

    pub fn from_poly(p: PolyA) -> Self {
        ScalarA { num: p, denom_pow: 0 }
    }

    /// The parameter `a` itself.
    pub fn var() -> Self {
        ScalarA::from_poly(PolyA::var())
    }

    /// `(1+a)^{-k}`.
    pub fn inv_one_plus_a(k: u32) -> Self {
        ScalarA::new(PolyA::one(), k)
    }

    pub fn numerator(&self) -> &PolyA {
        &self.num
    }

    pub fn denom_pow(&self) -> u32 {
        self.denom_pow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.denom_pow == 0 && self.num == PolyA::one()
    }

    pub fn add(&self, other: &ScalarA) -> ScalarA {
        let k = self.denom_pow.max(other.denom_pow);
        let lift = |s: &ScalarA| -> PolyA {
            let mut p = s.num.clone();
            for _ in 0..(k - s.denom_pow) {
                p = p.mul(&PolyA::one_plus_a());
            }
            p
        };
        ScalarA::new(lift(self).add(&lift(other)), k)
    }

    pub fn sub(&self, other: &ScalarA) -> ScalarA {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ScalarA {
        ScalarA { num: self.num.neg(), denom_pow: self.denom_pow }
    }

    pub fn mul(&self, other: &ScalarA) -> ScalarA {
        ScalarA::new(self.num.mul(&other.num), self.denom_pow + other.denom_pow)
    }

    pub fn scale(&self, c: &BigRational) -> ScalarA {
        ScalarA::new(self.num.scale(c), self.denom_pow)
    }

    pub fn pow(&self, n: u32) -> ScalarA {
        let mut acc = ScalarA::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse, where it exists in this ring: the numerator must be a rational
    /// multiple of a power of `(1+a)`.
    pub fn try_inverse(&self) -> Result<ScalarA, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::NotInvertible(self.to_string()));
        }
        let mut p = self.num.clone();
        let mut m = 0u32;
        while p.degree().map_or(false, |d| d > 0) {
            match p.div_one_plus_a() {
                Some(q) => {
                    p = q;
                    m += 1;
                }
                None => return Err(ScalarError::NotInvertible(self.to_string())),
            }
        }
        let c = p.coeff(0);
        debug_assert!(!c.is_zero());
        let cinv = BigRational::one() / c;
        // self = c * (1+a)^m / (1+a)^k, so 1/self = (1/c) * (1+a)^{k-m}.
        if self.denom_pow >= m {
            let mut num = PolyA::constant(cinv);
            for _ in 0..(self.denom_pow - m) {
                num = num.mul(&PolyA::one_plus_a());
            }
            Ok(ScalarA::new(num, 0))
        } else {
            Ok(ScalarA::new(PolyA::constant(cinv), m - self.denom_pow))
        }
    }

    /// Membership in `Z[a]`: no denominator and integer coefficients.
    pub fn in_z_bracket_a(&self) -> bool {
        self.denom_pow == 0 && self.num.is_integer_poly()
    }

    /// Membership in `Z_a`: no denominator and integer coordinates in the
    /// binomial basis `{binom(a, n)}`.
    pub fn in_za(&self) -> bool {
        self.denom_pow == 0
            && to_binomial_basis(&self.num)
                .coeffs
                .iter()
                .all(|c| c.denom().is_one())
    }

    /// Exact evaluation at `a = a0`; the values 0 and -1 are rejected.
    pub fn specialize(&self, a0: &BigRational) -> Result<BigRational, ScalarError> {
        if a0.is_zero() || *a0 == -BigRational::one() {
            return Err(ScalarError::ForbiddenSpecialization(render_rat(a0)));
        }
        let denom = (BigRational::one() + a0).pow(self.denom_pow as i32);
        Ok(self.num.eval(a0) / denom)
    }
}

impl fmt::Debug for ScalarA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ScalarA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom_pow == 0 {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({})", self.num)
        } else {
            format!("{}", self.num)
        };
        if self.denom_pow == 1 {
            write!(f, "{}/(1+a)", num)
        } else {
            write!(f, "{}/(1+a)^{}", num, self.denom_pow)
        }
    }
}

/// Coordinates `c_n` of a polynomial in the basis `binom(a, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialBasisExpansion {
    pub coeffs: Vec<BigRational>,
}

impl BinomialBasisExpansion {
    /// Reassembles the polynomial `sum c_n binom(a, n)`.
    pub fn expansion(&self) -> PolyA {
        let mut acc = PolyA::zero();
        for (n, c) in self.coeffs.iter().enumerate() {
            acc = acc.add(&binom_poly(n as u32).scale(c));
        }
        acc
    }
}

/// Forward differences at 0: `c_n = Delta^n p(0)`, so that
/// `p = sum c_n binom(a, n)` exactly.
pub fn to_binomial_basis(p: &PolyA) -> BinomialBasisExpansion {
    let deg = match p.degree() {
        None => return BinomialBasisExpansion { coeffs: vec![] },
        Some(d) => d,
    };
    let mut values: Vec<BigRational> = (0..=deg).map(|j| p.eval(&int(j as i64))).collect();
    let mut coeffs = Vec::with_capacity(deg + 1);
    for _ in 0..=deg {
        coeffs.push(values[0].clone());
        for i in 0..values.len() - 1 {
            values[i] = &values[i + 1] - &values[i];
        }
        values.pop();
    }
    BinomialBasisExpansion { coeffs }
}

/// The degree-`n` polynomial `y (y-1) ... (y-n+1) / n!` in a formal variable.
pub fn binom_poly(n: u32) -> PolyA {
    let mut acc = PolyA::one();
    for j in 0..n {
        let factor = PolyA::new(vec![int(-(j as i64)), BigRational::one()]);
        acc = acc.mul(&factor).scale(&rat(1, (j + 1) as i64));
    }
    acc
}

/// `binom(s, n)` for a scalar argument, by the same product formula.
pub fn binom_scalar(s: &ScalarA, n: u32) -> ScalarA {
    let mut acc = ScalarA::one();
    for j in 0..n {
        acc = acc.mul(&s.sub(&ScalarA::from_int(j as i64)));
        acc = acc.scale(&rat(1, (j + 1) as i64));
    }
    acc
}

/// `binom(z(a), n)` for a polynomial exponent.
pub fn binom_of_poly(z: &PolyA, n: u32) -> ScalarA {
    binom_scalar(&ScalarA::from_poly(z.clone()), n)
}

/// A truncated power series `sum c_n u^n` in a nilpotent variable `u`,
/// computed modulo `u^{trunc+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub trunc: usize,
    pub coeffs: Vec<ScalarA>,
}

impl TruncatedSeries {
    pub fn zero(trunc: usize) -> Self {
        TruncatedSeries { trunc, coeffs: vec![ScalarA::zero(); trunc + 1] }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = ScalarA::one();
        s
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.trunc, other.trunc);
        let mut out = TruncatedSeries::zero(self.trunc);
        for i in 0..=self.trunc {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(self.trunc - i) {
                let t = self.coeffs[i].mul(&other.coeffs[j]);
                out.coeffs[i + j] = out.coeffs[i + j].add(&t);
            }
        }
        out
    }
}

/// `(1+u)^{z(a)} = sum_n binom(z(a), n) u^n` truncated at `u^{N+1}`.
pub fn truncated_power_series_power(exponent: &PolyA, trunc: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(trunc);
    for n in 0..=trunc {
        s.coeffs[n] = binom_of_poly(exponent, n as u32);
    }
    s
}

/// Bivariate truncation of `Q(a)[u, v]` at total degree `trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSeries {
    pub trunc: usize,
    pub coeffs: Vec<Vec<ScalarA>>,
}

impl BivariateSeries {
    pub fn zero(trunc: usize) -> Self {
        let coeffs = (0..=trunc)
            .map(|i| vec![ScalarA::zero(); trunc - i + 1])
            .collect();
        BivariateSeries { trunc, coeffs }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0][0] = ScalarA::one();
        s
    }

    pub fn monomial(trunc: usize, i: usize, j: usize) -> Self {
        let mut s = Self::zero(trunc);
        if i + j <= trunc {
            s.coeffs[i][j] = ScalarA::one();
        }
        s
    }

    pub fn add(&self, other: &BivariateSeries) -> BivariateSeries {
        assert_eq!(self.trunc, other.trunc);
        let mut out = self.clone();
        for i in 0..=self.trunc {
            for j in 0..=(self.trunc - i) {
                out.coeffs[i][j] = out.coeffs[i][j].add(&other.coeffs[i][j]);
            }
        }
        out
    }

    pub fn mul(&self, other: &BivariateSeries) -> BivariateSeries {
        assert_eq!(self.trunc, other.trunc);
        let mut out = BivariateSeries::zero(self.trunc);
        for i1 in 0..=self.trunc {
            for j1 in 0..=(self.trunc - i1) {
                if self.coeffs[i1][j1].is_zero() {
                    continue;
                }
                for i2 in 0..=(self.trunc - i1 - j1) {
                    for j2 in 0..=(self.trunc - i1 - j1 - i2) {
                        if other.coeffs[i2][j2].is_zero() {
                            continue;
                        }
                        let t = self.coeffs[i1][j1].mul(&other.coeffs[i2][j2]);
                        out.coeffs[i1 + i2][j1 + j2] = out.coeffs[i1 + i2][j1 + j2].add(&t);
                    }
                }
            }
        }
        out
    }

    /// `(1 + w)^{z}` for `w` with zero constant term: `sum binom(z, n) w^n`.
    pub fn one_plus_pow(w: &BivariateSeries, exponent: &PolyA) -> BivariateSeries {
        assert!(w.coeffs[0][0].is_zero(), "base must be 1 + nilpotent part");
        let mut acc = BivariateSeries::zero(w.trunc);
        let mut wpow = BivariateSeries::one(w.trunc);
        for n in 0..=w.trunc {
            let b = binom_of_poly(exponent, n as u32);
            if !b.is_zero() {
                let mut term = wpow.clone();
                for i in 0..=w.trunc {
                    for j in 0..=(w.trunc - i) {
                        term.coeffs[i][j] = term.coeffs[i][j].mul(&b);
                    }
                }
                acc = acc.add(&term);
            }
            wpow = wpow.mul(w);
        }
        acc
    }
}

/// Checks the group-like identity `(l1 l2)^z = l1^z l2^z` in the bivariate
/// truncated ring with `l1 = 1+u`, `l2 = 1+v`, up to total degree `trunc`.
pub fn check_grouplike(exponent: &PolyA, trunc: usize) -> bool {
    assert!(trunc >= 1);
    let u = BivariateSeries::monomial(trunc, 1, 0);
    let v = BivariateSeries::monomial(trunc, 0, 1);
    let uv = u.mul(&v);
    // (1+u)(1+v) = 1 + (u + v + uv)
    let w = u.add(&v).add(&uv);
    let lhs = BivariateSeries::one_plus_pow(&w, exponent);
    let rhs = BivariateSeries::one_plus_pow(&u, exponent)
        .mul(&BivariateSeries::one_plus_pow(&v, exponent));
    lhs == rhs
}
