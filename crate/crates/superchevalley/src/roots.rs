//! The root system of `D(2,1;a)`.
//!
//! Roots are stored as integer triples in the orthogonal epsilon-basis:
//! the six even roots `±2e_i` and the eight odd roots `±e1 ±e2 ±e3`.
//! Coroots are expressed in the Chevalley Cartan basis `{H1, H2, H3}`,
//! where all their coordinates lie in `Z[a]`.

use crate::scalars::{int, rat, PolyA, ScalarA};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// A root `c1 e1 + c2 e2 + c3 e3` of `D(2,1;a)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    coords: [i8; 3],
}

impl Root {
    pub fn new(coords: [i8; 3]) -> Option<Root> {
        let r = Root { coords };
        if r.is_valid() {
            Some(r)
        } else {
            None
        }
    }

    fn is_valid(&self) -> bool {
        let c = self.coords;
        let even = (0..3).any(|i| c[i].abs() == 2)
            && (0..3).all(|i| c[i] == 0 || c[i].abs() == 2)
            && c.iter().filter(|x| **x != 0).count() == 1;
        let odd = c.iter().all(|x| x.abs() == 1);
        even || odd
    }

    pub fn coords(&self) -> [i8; 3] {
        self.coords
    }

    pub fn parity(&self) -> Parity {
        if self.coords.iter().any(|c| c.abs() == 2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Positivity per the simple-root expansion with
    /// `a1 = e1-e2-e3`, `a2 = 2e2`, `a3 = 2e3`.
    pub fn is_positive(&self) -> bool {
        match self.parity() {
            Parity::Odd => self.coords[0] > 0,
            Parity::Even => self.coords.iter().sum::<i8>() > 0,
        }
    }

    pub fn neg(&self) -> Root {
        Root { coords: [-self.coords[0], -self.coords[1], -self.coords[2]] }
    }

    /// Sum of two roots, when the sum is again a root.
    pub fn try_add(&self, other: &Root) -> Option<Root> {
        let c = [
            self.coords[0] + other.coords[0],
            self.coords[1] + other.coords[1],
            self.coords[2] + other.coords[2],
        ];
        Root::new(c)
    }

    /// Integer lattice point `beta + k alpha`; a root only sometimes.
    fn shifted(&self, alpha: &Root, k: i32) -> [i32; 3] {
        [
            self.coords[0] as i32 + k * alpha.coords[0] as i32,
            self.coords[1] as i32 + k * alpha.coords[1] as i32,
            self.coords[2] as i32 + k * alpha.coords[2] as i32,
        ]
    }

    /// Coordinates in the simple-root basis `(a1, a2, a3)`.
    pub fn simple_coords(&self) -> [i64; 3] {
        let c = self.coords.map(|x| x as i64);
        let m1 = c[0];
        let m2 = (c[1] + m1) / 2;
        let m3 = (c[2] + m1) / 2;
        debug_assert_eq!(c[1], 2 * m2 - m1);
        debug_assert_eq!(c[2], 2 * m3 - m1);
        [m1, m2, m3]
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_root(self))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_root(self))
    }
}

/// Canonical text form in the epsilon basis, e.g. `2e1`, `e1-e2+e3`, `-2e3`.
pub fn render_root(r: &Root) -> String {
    let mut out = String::new();
    for (i, c) in r.coords().iter().enumerate() {
        if *c == 0 {
            continue;
        }
        if out.is_empty() {
            if *c < 0 {
                out.push('-');
            }
        } else if *c < 0 {
            out.push('-');
        } else {
            out.push('+');
        }
        if c.abs() != 1 {
            out.push_str(&c.abs().to_string());
        }
        out.push('e');
        out.push_str(&(i + 1).to_string());
    }
    out
}

pub const ALPHA1: Root = Root { coords: [1, -1, -1] };
pub const ALPHA2: Root = Root { coords: [0, 2, 0] };
pub const ALPHA3: Root = Root { coords: [0, 0, 2] };

pub fn simple_roots() -> [Root; 3] {
    [ALPHA1, ALPHA2, ALPHA3]
}

/// All fourteen roots in the fixed global order:
/// odd negatives, even negatives, even positives, odd positives,
/// each block sorted lexicographically on epsilon-coordinates.
pub fn all_roots() -> Vec<Root> {
    let mut out = delta1_neg();
    out.extend(delta0_neg());
    out.extend(delta0_pos());
    out.extend(delta1_pos());
    out
}

pub fn delta0_pos() -> Vec<Root> {
    let mut v = vec![
        Root { coords: [2, 0, 0] },
        Root { coords: [0, 2, 0] },
        Root { coords: [0, 0, 2] },
    ];
    v.sort();
    v
}

pub fn delta0_neg() -> Vec<Root> {
    let mut v: Vec<Root> = delta0_pos().iter().map(|r| r.neg()).collect();
    v.sort();
    v
}

pub fn delta1_pos() -> Vec<Root> {
    let mut v = Vec::new();
    for s2 in [-1i8, 1] {
        for s3 in [-1i8, 1] {
            v.push(Root { coords: [1, s2, s3] });
        }
    }
    v.sort();
    v
}

pub fn delta1_neg() -> Vec<Root> {
    let mut v: Vec<Root> = delta1_pos().iter().map(|r| r.neg()).collect();
    v.sort();
    v
}

/// The invariant form on the epsilon basis:
/// `(e1,e1) = -(1+a)/2`, `(e2,e2) = 1/2`, `(e3,e3) = a/2`, off-diagonal zero.
fn eps_norm(i: usize) -> ScalarA {
    match i {
        0 => ScalarA::from_poly(PolyA::one_plus_a()).scale(&rat(-1, 2)),
        1 => ScalarA::from_rational(rat(1, 2)),
        2 => ScalarA::var().scale(&rat(1, 2)),
        _ => unreachable!(),
    }
}

pub fn bilinear_form(x: &Root, y: &Root) -> ScalarA {
    let mut acc = ScalarA::zero();
    for i in 0..3 {
        let c = int(x.coords()[i] as i64) * int(y.coords()[i] as i64);
        if !c.is_zero() {
            acc = acc.add(&eps_norm(i).scale(&c));
        }
    }
    acc
}

/// An element `z1 H1 + z2 H2 + z3 H3` of the Cartan subalgebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CartanElement {
    pub coords: [ScalarA; 3],
}

impl CartanElement {
    pub fn zero() -> Self {
        CartanElement { coords: [ScalarA::zero(), ScalarA::zero(), ScalarA::zero()] }
    }

    pub fn basis(i: usize) -> Self {
        let mut h = Self::zero();
        h.coords[i] = ScalarA::one();
        h
    }

    pub fn new(coords: [ScalarA; 3]) -> Self {
        CartanElement { coords }
    }

    pub fn from_ints(z: [i64; 3]) -> Self {
        CartanElement {
            coords: [
                ScalarA::from_int(z[0]),
                ScalarA::from_int(z[1]),
                ScalarA::from_int(z[2]),
            ],
        }
    }

    pub fn add(&self, other: &CartanElement) -> CartanElement {
        CartanElement {
            coords: [
                self.coords[0].add(&other.coords[0]),
                self.coords[1].add(&other.coords[1]),
                self.coords[2].add(&other.coords[2]),
            ],
        }
    }

    pub fn neg(&self) -> CartanElement {
        CartanElement {
            coords: [self.coords[0].neg(), self.coords[1].neg(), self.coords[2].neg()],
        }
    }

    pub fn scale(&self, c: &ScalarA) -> CartanElement {
        CartanElement {
            coords: [
                self.coords[0].mul(c),
                self.coords[1].mul(c),
                self.coords[2].mul(c),
            ],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The same element in the presentation basis `{h1, h2, h3}`, via
    /// `h1 = H1`, `h2 = 2 H1 - (1+a) H2 - a H3`, `h3 = H3` inverted.
    pub fn h_coords(&self) -> [ScalarA; 3] {
        // H1 = h1, H2 = (2 h1 - h2 - a h3)/(1+a), H3 = h3, hence
        // z1 H1 + z2 H2 + z3 H3 has h-coordinates
        // (z1 + 2 z2/(1+a), -z2/(1+a), z3 - a z2/(1+a)).
        let inv = ScalarA::inv_one_plus_a(1);
        let z = &self.coords;
        let x1 = z[0].add(&z[1].mul(&inv).scale(&int(2)));
        let x2 = z[1].mul(&inv).neg();
        let x3 = z[2].add(&z[1].mul(&inv).mul(&ScalarA::var()).neg());
        [x1, x2, x3]
    }

    /// Builds from presentation-basis coordinates.
    pub fn from_h_coords(x: [ScalarA; 3]) -> CartanElement {
        // H-coordinates of x1 h1 + x2 h2 + x3 h3:
        // h2 = 2 H1 - (1+a) H2 - a H3, so
        // z1 = x1 + 2 x2, z2 = -(1+a) x2, z3 = x3 - a x2.
        let one_plus_a = ScalarA::from_poly(PolyA::one_plus_a());
        let z1 = x[0].add(&x[1].scale(&int(2)));
        let z2 = x[1].mul(&one_plus_a).neg();
        let z3 = x[2].sub(&x[1].mul(&ScalarA::var()));
        CartanElement { coords: [z1, z2, z3] }
    }

    /// All coordinates in `Z[a]`.
    pub fn in_h_za(&self) -> bool {
        self.coords.iter().all(|c| c.in_z_bracket_a())
    }

    /// Integer coordinates in the even-coroot lattice
    /// `Span_Z(H_{2e1}, H_{2e2}, H_{2e3})`, when they exist.
    pub fn in_h0_z(&self) -> Option<[BigRational; 3]> {
        // H = m1 H_{2e1} + m2 H_{2e2} + m3 H_{2e3}
        //   = m1 (0,1,0) + m2 (2,-(1+a),-a) + m3 (0,0,1).
        let z = &self.coords;
        let m2 = z[0].scale(&rat(1, 2));
        let one_plus_a = ScalarA::from_poly(PolyA::one_plus_a());
        let m1 = z[1].add(&m2.mul(&one_plus_a));
        let m3 = z[2].add(&m2.mul(&ScalarA::var()));
        let as_integer = |s: &ScalarA| -> Option<BigRational> {
            if s.denom_pow() != 0 {
                return None;
            }
            match s.numerator().degree() {
                None => Some(BigRational::zero()),
                Some(0) => {
                    let c = s.numerator().coeff(0);
                    if c.denom().is_one() {
                        Some(c)
                    } else {
                        None
                    }
                }
                Some(_) => None,
            }
        };
        Some([as_integer(&m1)?, as_integer(&m2)?, as_integer(&m3)?])
    }
}

impl fmt::Display for CartanElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(format!("H{}", i + 1));
            } else {
                parts.push(format!("({})*H{}", c, i + 1));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The coroot `H_alpha` in the `{H1, H2, H3}` basis.
///
/// The seven positive coroots come from converting the presentation-basis
/// expressions; coroots depend linearly on the root, `H_{-alpha} = -H_alpha`.
pub fn coroot(alpha: &Root) -> CartanElement {
    if !alpha.is_positive() {
        return coroot(&alpha.neg()).neg();
    }
    let a = ScalarA::var();
    let one_plus_a = ScalarA::from_poly(PolyA::one_plus_a());
    let c = alpha.coords();
    match c {
        [2, 0, 0] => CartanElement::from_ints([0, 1, 0]),
        [0, 2, 0] => CartanElement::new([ScalarA::from_int(2), one_plus_a.neg(), a.neg()]),
        [0, 0, 2] => CartanElement::from_ints([0, 0, 1]),
        [1, -1, -1] => CartanElement::from_ints([1, 0, 0]),
        // h1 - h2 = -H1 + (1+a) H2 + a H3
        [1, 1, -1] => CartanElement::new([ScalarA::from_int(-1), one_plus_a, a]),
        // h1 - a h3 = H1 - a H3
        [1, -1, 1] => CartanElement::new([ScalarA::one(), ScalarA::zero(), a.neg()]),
        // h1 - h2 - a h3 = -H1 + (1+a) H2
        [1, 1, 1] => CartanElement::new([ScalarA::from_int(-1), one_plus_a, ScalarA::zero()]),
        _ => unreachable!("not a root: {:?}", c),
    }
}

/// Values `e_i(H_j)` of the epsilon-basis weights on the Chevalley Cartan
/// basis, derived from the Cartan matrix rows
/// `a1 -> (0, 1, -1)`, `a2 -> (1, 0, 0)`, `a3 -> (a, 0, 2)`.
fn eps_pairing(i: usize, j: usize) -> ScalarA {
    let a = ScalarA::var();
    let half = rat(1, 2);
    match (i, j) {
        // e1 = a1 + (a2 + a3)/2
        (0, 0) => ScalarA::from_poly(PolyA::one_plus_a()).scale(&half),
        (0, 1) => ScalarA::one(),
        (0, 2) => ScalarA::zero(),
        // e2 = a2 / 2
        (1, 0) => ScalarA::from_rational(half),
        (1, 1) => ScalarA::zero(),
        (1, 2) => ScalarA::zero(),
        // e3 = a3 / 2
        (2, 0) => a.scale(&half),
        (2, 1) => ScalarA::zero(),
        (2, 2) => ScalarA::one(),
        _ => unreachable!(),
    }
}

/// The pairing `beta(H)` for a root (or integral weight) `beta` and a Cartan
/// element `H`, linear in both arguments.
pub fn pairing(beta: &Root, h: &CartanElement) -> ScalarA {
    let mut acc = ScalarA::zero();
    for j in 0..3 {
        if h.coords[j].is_zero() {
            continue;
        }
        let mut row = ScalarA::zero();
        for i in 0..3 {
            let c = beta.coords()[i] as i64;
            if c != 0 {
                row = row.add(&eps_pairing(i, j).scale(&int(c)));
            }
        }
        acc = acc.add(&row.mul(&h.coords[j]));
    }
    acc
}

/// The `alpha`-string through `beta`: the maximal unbroken run
/// `beta - r alpha, ..., beta + q alpha` inside `Delta ∪ {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootString {
    pub r: u32,
    pub q: u32,
}

pub fn root_string(beta: &Root, alpha: &Root) -> RootString {
    let in_delta_or_zero = |p: [i32; 3]| -> bool {
        if p == [0, 0, 0] {
            return true;
        }
        if p.iter().any(|c| c.abs() > 2) {
            return false;
        }
        Root::new([p[0] as i8, p[1] as i8, p[2] as i8]).is_some()
    };
    let mut r = 0u32;
    while in_delta_or_zero(beta.shifted(alpha, -(r as i32 + 1))) {
        r += 1;
    }
    let mut q = 0u32;
    while in_delta_or_zero(beta.shifted(alpha, q as i32 + 1)) {
        q += 1;
    }
    RootString { r, q }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::PolyA;

    #[test]
    fn root_count_and_partition() {
        let all = all_roots();
        assert_eq!(all.len(), 14);
        assert_eq!(delta0_pos().len(), 3);
        assert_eq!(delta0_neg().len(), 3);
        assert_eq!(delta1_pos().len(), 4);
        assert_eq!(delta1_neg().len(), 4);
        // Delta = -Delta
        for r in &all {
            assert!(all.contains(&r.neg()));
        }
        // a1+a2+a3 = e1+e2+e3 is a positive odd root
        let r = Root::new([1, 1, 1]).unwrap();
        assert!(delta1_pos().contains(&r));
        assert_eq!(delta0_pos(), vec![
            Root::new([0, 0, 2]).unwrap(),
            Root::new([0, 2, 0]).unwrap(),
            Root::new([2, 0, 0]).unwrap(),
        ]);
    }

    #[test]
    fn simple_root_expansion() {
        assert_eq!(Root::new([2, 0, 0]).unwrap().simple_coords(), [2, 1, 1]);
        assert_eq!(ALPHA1.simple_coords(), [1, 0, 0]);
        assert_eq!(Root::new([1, 1, 1]).unwrap().simple_coords(), [1, 1, 1]);
        for r in all_roots() {
            let m = r.simple_coords();
            let pos = m.iter().all(|x| *x >= 0) && m.iter().any(|x| *x > 0);
            assert_eq!(pos, r.is_positive(), "{:?}", r);
        }
    }

    #[test]
    fn bilinear_form_values() {
        // alpha1 is isotropic: -(1+a)/2 + 1/2 + a/2 = 0
        assert!(bilinear_form(&ALPHA1, &ALPHA1).is_zero());
        assert_eq!(bilinear_form(&ALPHA2, &ALPHA2), ScalarA::from_int(2));
        assert!(bilinear_form(&ALPHA2, &ALPHA3).is_zero());
        // all odd roots isotropic, even roots pairwise orthogonal
        for g in delta1_pos().iter().chain(delta1_neg().iter()) {
            assert!(bilinear_form(g, g).is_zero(), "{:?}", g);
        }
        for x in delta0_pos() {
            for y in delta0_pos() {
                if x != y {
                    assert!(bilinear_form(&x, &y).is_zero());
                }
            }
        }
    }

    #[test]
    fn coroot_values() {
        let a = ScalarA::var();
        let one_plus_a = ScalarA::from_poly(PolyA::one_plus_a());
        assert_eq!(coroot(&Root::new([2, 0, 0]).unwrap()), CartanElement::from_ints([0, 1, 0]));
        assert_eq!(
            coroot(&Root::new([0, 2, 0]).unwrap()),
            CartanElement::new([ScalarA::from_int(2), one_plus_a.neg(), a.neg()])
        );
        assert_eq!(coroot(&ALPHA1), CartanElement::from_ints([1, 0, 0]));
        // Z[a]-integrality of all coroots
        for r in all_roots() {
            assert!(coroot(&r).in_h_za(), "{:?}", r);
        }
    }

    #[test]
    fn pairing_values() {
        // beta(h1) for beta = a2 is the Cartan matrix entry 1;
        // h1 = H1 in the Chevalley basis.
        assert_eq!(pairing(&ALPHA2, &CartanElement::basis(0)), ScalarA::one());
        // (a1+a2+a3)(H1) = 0 + 1 + a
        let b = Root::new([1, 1, 1]).unwrap();
        assert_eq!(
            pairing(&b, &CartanElement::basis(0)),
            ScalarA::from_poly(PolyA::one_plus_a())
        );
        // alpha(H_alpha) = 2 for even alpha, including negatives
        for r in delta0_pos().iter().chain(delta0_neg().iter()) {
            assert_eq!(pairing(r, &coroot(r)), ScalarA::from_int(2), "{:?}", r);
        }
        // odd roots are isotropic: alpha(H_alpha) = 0
        for r in delta1_pos() {
            assert!(pairing(&r, &coroot(&r)).is_zero());
        }
    }

    #[test]
    fn integer_pairings_with_even_coroots() {
        for b in all_roots() {
            for al in delta0_pos().iter().chain(delta0_neg().iter()) {
                let v = pairing(&b, &coroot(al));
                assert!(v.in_z_bracket_a(), "{:?} on H_{:?}", b, al);
                let p = v.numerator();
                assert!(p.degree().map_or(true, |d| d == 0), "{:?} on H_{:?} -> {}", b, al, v);
            }
        }
    }

    #[test]
    fn root_string_examples() {
        // beta = a1+a3, alpha = a2: r = 0, q = 1
        let beta = Root::new([1, -1, 1]).unwrap();
        assert_eq!(root_string(&beta, &ALPHA2), RootString { r: 0, q: 1 });
        // beta = 2e2 along itself: string {-2e2, 0, 2e2}
        let b = Root::new([0, 2, 0]).unwrap();
        assert_eq!(root_string(&b, &b), RootString { r: 2, q: 0 });
        // orthogonal even roots: trivial string
        let c = Root::new([0, 0, 2]).unwrap();
        assert_eq!(root_string(&b, &c), RootString { r: 0, q: 0 });
    }

    #[test]
    fn h_coordinate_round_trip() {
        let h = CartanElement::new([
            ScalarA::var(),
            ScalarA::from_int(3),
            ScalarA::from_poly(PolyA::one_plus_a()),
        ]);
        let back = CartanElement::from_h_coords(h.h_coords());
        assert_eq!(h, back);
        // h2 in H-coordinates
        let h2 = CartanElement::from_h_coords([ScalarA::zero(), ScalarA::one(), ScalarA::zero()]);
        assert_eq!(h2, coroot(&Root::new([0, 2, 0]).unwrap()));
    }

    #[test]
    fn h0z_membership() {
        use num_traits::One;
        let h = coroot(&Root::new([0, 2, 0]).unwrap());
        let m = h.in_h0_z().unwrap();
        assert_eq!(m, [BigRational::zero(), BigRational::one(), BigRational::zero()]);
        // H1 alone is not in the even-coroot lattice (odd coroot only)
        assert!(CartanElement::basis(0).in_h0_z().is_none());
        // H2 = H_{2e1} is
        assert!(CartanElement::basis(1).in_h0_z().is_some());
        let mixed = coroot(&Root::new([2, 0, 0]).unwrap())
            .add(&coroot(&Root::new([0, 0, 2]).unwrap()).neg());
        assert!(mixed.in_h0_z().is_some());
    }

    #[test]
    fn render_roots() {
        assert_eq!(render_root(&Root::new([2, 0, 0]).unwrap()), "2e1");
        assert_eq!(render_root(&ALPHA1), "e1-e2-e3");
        assert_eq!(render_root(&Root::new([-1, 1, 1]).unwrap()), "-e1+e2+e3");
    }
}
