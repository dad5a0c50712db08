//! Finite commutative superalgebra carriers: Grassmann algebras over the
//! scalar ring, square-zero-odd variants, and even dual-number generators.
//!
//! A carrier has `n` odd generators `x1..xn` (with `xi xj = -xj xi`) and `d`
//! even square-zero generators `eps1..epsd`. The square-zero-odd kind
//! additionally kills every product of two odd elements, the hypothesis of
//! the semidirect-product proposition.

use crate::matrix::Ring;
use crate::scalars::{binom_of_poly, PolyA, ScalarA};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CarrierError {
    #[error("{0} is not a unit (its scalar part is zero or not invertible)")]
    NotAUnit(String),
    #[error("{0} is not in P_a (needs even, unit, scalar part 1)")]
    NotInPa(String),
    #[error("carrier wants {0} odd generators, the cap is {1} (set SUPERCHEVALLEY_ODD_CAP)")]
    OddCapExceeded(usize, usize),
}

/// Default cap on odd generators, overridable through the
/// `SUPERCHEVALLEY_ODD_CAP` environment variable.
pub fn odd_cap() -> usize {
    std::env::var("SUPERCHEVALLEY_ODD_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(8)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CarrierKind {
    /// Full exterior algebra on the odd generators.
    Full,
    /// All products of two odd elements vanish.
    SquareZeroOdd,
}

/// A finite carrier superalgebra, described by generator counts.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Carrier {
    pub odd: usize,
    pub duals: usize,
    pub kind: CarrierKind,
}

impl Carrier {
    /// Purely scalar coefficients; the neutral carrier absorbed by any other.
    pub const SCALAR: Carrier = Carrier { odd: 0, duals: 0, kind: CarrierKind::Full };

    pub fn grassmann(odd: usize) -> Result<Carrier, CarrierError> {
        let cap = odd_cap();
        if odd > cap {
            return Err(CarrierError::OddCapExceeded(odd, cap));
        }
        Ok(Carrier { odd, duals: 0, kind: CarrierKind::Full })
    }

    pub fn square_zero_odd(odd: usize) -> Result<Carrier, CarrierError> {
        let cap = odd_cap();
        if odd > cap {
            return Err(CarrierError::OddCapExceeded(odd, cap));
        }
        Ok(Carrier { odd, duals: 0, kind: CarrierKind::SquareZeroOdd })
    }

    pub fn dual_number() -> Carrier {
        Carrier { odd: 0, duals: 1, kind: CarrierKind::Full }
    }

    /// Grassmann generators together with even dual generators.
    pub fn dual_odd(odd: usize, duals: usize) -> Result<Carrier, CarrierError> {
        let cap = odd_cap();
        if odd > cap {
            return Err(CarrierError::OddCapExceeded(odd, cap));
        }
        Ok(Carrier { odd, duals, kind: CarrierKind::Full })
    }

    fn is_scalar(&self) -> bool {
        self.odd == 0 && self.duals == 0
    }

    /// The carrier both operands live in, when compatible.
    fn unify(&self, other: &Carrier) -> Option<Carrier> {
        if self == other || other.is_scalar() {
            Some(*self)
        } else if self.is_scalar() {
            Some(*other)
        } else {
            None
        }
    }
}

/// A basis monomial: a square-free product of odd generators and dual
/// generators, encoded as bit masks.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Monomial {
    pub xi: u16,
    pub eps: u8,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { xi: 0, eps: 0 };

    pub fn xi_degree(&self) -> u32 {
        self.xi.count_ones()
    }

    pub fn is_even(&self) -> bool {
        self.xi_degree() % 2 == 0
    }

    /// Sign of merging two sorted products of odd generators:
    /// `(-1)^{inversions}` (callers exclude overlapping supports).
    fn merge_sign(a: u16, b: u16) -> i64 {
        let mut inversions = 0u32;
        for i in 0..16 {
            if b & (1 << i) != 0 {
                inversions += (a >> (i + 1)).count_ones();
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// An element of a carrier: a finite sum of monomials with `ScalarA`
/// coefficients. Elements supported on the empty monomial act as universal
/// scalars for any carrier; equality compares terms only, the carrier tag is
/// context.
#[derive(Clone, Debug)]
pub struct CarrierElement {
    pub carrier: Carrier,
    terms: BTreeMap<Monomial, ScalarA>,
}

impl PartialEq for CarrierElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for CarrierElement {}

impl CarrierElement {
    pub fn zero(carrier: Carrier) -> Self {
        CarrierElement { carrier, terms: BTreeMap::new() }
    }

    pub fn scalar(carrier: Carrier, c: ScalarA) -> Self {
        let mut e = Self::zero(carrier);
        e.add_term(Monomial::ONE, &c);
        e
    }

    pub fn one(carrier: Carrier) -> Self {
        Self::scalar(carrier, ScalarA::one())
    }

    pub fn from_int(carrier: Carrier, n: i64) -> Self {
        Self::scalar(carrier, ScalarA::from_int(n))
    }

    /// The generator `x{i+1}` (odd).
    pub fn xi(carrier: Carrier, i: usize) -> Self {
        assert!(i < carrier.odd, "odd generator index out of range");
        let mut e = Self::zero(carrier);
        e.add_term(Monomial { xi: 1 << i, eps: 0 }, &ScalarA::one());
        e
    }

    /// The generator `eps{i+1}` (even, square zero).
    pub fn eps(carrier: Carrier, i: usize) -> Self {
        assert!(i < carrier.duals, "dual generator index out of range");
        let mut e = Self::zero(carrier);
        e.add_term(Monomial { xi: 0, eps: 1 << i }, &ScalarA::one());
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: &ScalarA) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&m).unwrap_or_else(ScalarA::zero);
        let next = cur.add(c);
        if !next.is_zero() {
            self.terms.insert(m, next);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ScalarA)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scalar_part(&self) -> ScalarA {
        self.terms.get(&Monomial::ONE).cloned().unwrap_or_else(ScalarA::zero)
    }

    /// The non-scalar (nilpotent) part.
    pub fn nilpotent_part(&self) -> CarrierElement {
        let mut e = self.clone();
        e.terms.remove(&Monomial::ONE);
        e
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.is_even())
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| !m.is_even())
    }

    pub fn even_part(&self) -> CarrierElement {
        CarrierElement {
            carrier: self.carrier,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.is_even())
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn odd_part(&self) -> CarrierElement {
        CarrierElement {
            carrier: self.carrier,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.is_even())
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &CarrierElement) -> CarrierElement {
        let carrier = self
            .carrier
            .unify(&other.carrier)
            .expect("cannot add elements of different carriers");
        let mut out = CarrierElement { carrier, terms: self.terms.clone() };
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn neg(&self) -> CarrierElement {
        CarrierElement {
            carrier: self.carrier,
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &CarrierElement) -> CarrierElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ScalarA) -> CarrierElement {
        if c.is_zero() {
            return CarrierElement::zero(self.carrier);
        }
        CarrierElement {
            carrier: self.carrier,
            terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect(),
        }
    }

    /// Supercommutative product with the exterior sign rule; in a
    /// square-zero-odd carrier every product of two odd-degree monomials
    /// vanishes.
    pub fn mul(&self, other: &CarrierElement) -> CarrierElement {
        let carrier = self
            .carrier
            .unify(&other.carrier)
            .expect("cannot multiply elements of different carriers");
        let mut out = CarrierElement::zero(carrier);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.xi & m2.xi != 0 || m1.eps & m2.eps != 0 {
                    continue;
                }
                if carrier.kind == CarrierKind::SquareZeroOdd
                    && m1.xi_degree() >= 1
                    && m2.xi_degree() >= 1
                {
                    continue;
                }
                let sign = Monomial::merge_sign(m1.xi, m2.xi);
                let m = Monomial { xi: m1.xi | m2.xi, eps: m1.eps | m2.eps };
                out.add_term(m, &c1.mul(c2).scale(&crate::scalars::int(sign)));
            }
        }
        out
    }

    /// Integer powers of a unit (negative exponents via `invert_unit`).
    pub fn powi(&self, n: i64) -> Result<CarrierElement, CarrierError> {
        let base = if n >= 0 { self.clone() } else { self.invert_unit()? };
        let mut acc = CarrierElement::one(self.carrier);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Exact inverse of a unit: the scalar part must be invertible in the
    /// scalar ring, the rest is a finite geometric series in the nilpotent
    /// part.
    pub fn invert_unit(&self) -> Result<CarrierElement, CarrierError> {
        let c = self.scalar_part();
        let cinv = c.try_inverse().map_err(|_| CarrierError::NotAUnit(self.to_string()))?;
        // self = c (1 + u) with u nilpotent
        let u = self.nilpotent_part().scale(&cinv);
        let mut acc = CarrierElement::one(self.carrier);
        let mut upow = CarrierElement::one(self.carrier);
        let mut sign = -1i64;
        loop {
            upow = upow.mul(&u);
            if upow.is_zero() {
                break;
            }
            acc = acc.add(&upow.scale(&ScalarA::from_int(sign)));
            sign = -sign;
        }
        Ok(acc.scale(&cinv))
    }

    /// Membership in `P_a`, implemented as the restricted criterion
    /// `1 + nilradical of the even part`: even, with scalar part exactly 1.
    pub fn in_pa(&self) -> bool {
        self.is_even() && self.scalar_part().is_one()
    }

    /// The generalized power `t^{z(a)} = sum_n (t-1)^n binom(z(a), n)`,
    /// a finite sum because `t - 1` is nilpotent on `P_a`.
    pub fn power_za(&self, z: &PolyA) -> Result<CarrierElement, CarrierError> {
        if !self.in_pa() {
            return Err(CarrierError::NotInPa(self.to_string()));
        }
        let u = self.sub(&CarrierElement::one(self.carrier));
        let mut acc = CarrierElement::one(self.carrier);
        let mut upow = CarrierElement::one(self.carrier);
        let mut n = 0u32;
        loop {
            upow = upow.mul(&u);
            n += 1;
            if upow.is_zero() {
                break;
            }
            acc = acc.add(&upow.scale(&binom_of_poly(z, n)));
        }
        Ok(acc)
    }

    /// Splits off the part proportional to the first dual generator:
    /// `x = base + eps1 * slope`. Elements over a dual-free carrier are
    /// their own base part.
    pub fn dual_number_split(&self) -> (CarrierElement, CarrierElement) {
        let mut base = CarrierElement::zero(self.carrier);
        let mut slope = CarrierElement::zero(self.carrier);
        for (m, c) in &self.terms {
            if m.eps & 1 == 0 {
                base.add_term(*m, c);
            } else {
                slope.add_term(Monomial { xi: m.xi, eps: m.eps & !1 }, c);
            }
        }
        (base, slope)
    }

    /// The projection `p` killing the first dual generator; `p ∘ i = id`
    /// for the inclusion `i` of dual-free elements.
    pub fn dual_projection(&self) -> CarrierElement {
        self.dual_number_split().0
    }
}

impl Ring for CarrierElement {
    fn ring_zero() -> Self {
        CarrierElement::zero(Carrier::SCALAR)
    }
    fn ring_one() -> Self {
        CarrierElement::one(Carrier::SCALAR)
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

impl fmt::Display for CarrierElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut gens = Vec::new();
            for i in 0..16 {
                if m.xi & (1 << i) != 0 {
                    gens.push(format!("x{}", i + 1));
                }
            }
            for i in 0..8 {
                if m.eps & (1 << i) != 0 {
                    gens.push(format!("eps{}", i + 1));
                }
            }
            if gens.is_empty() {
                parts.push(format!("{}", c));
            } else if c.is_one() {
                parts.push(gens.join("*"));
            } else {
                parts.push(format!("({})*{}", c, gens.join("*")));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}
