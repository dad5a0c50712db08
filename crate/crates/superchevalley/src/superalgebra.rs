//! The 17-dimensional Lie superalgebra `D(2,1;a)` in its Chevalley basis.
//!
//! The bracket table is assembled from the defining relations, the explicit
//! bracket list of the presentation (with the two long root vectors rescaled
//! by `(1+a)^{-1}`), Cartan rows from the weight pairing, and
//! super-antisymmetry; construction fails if any entry is forced two
//! incompatible ways.

use crate::matrix::Matrix;
use crate::roots::{
    all_roots, bilinear_form, coroot, delta0_neg, delta0_pos, delta1_neg, delta1_pos, pairing,
    root_string, CartanElement, Parity, Root,
};
use crate::scalars::{PolyA, ScalarA};
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

pub const DIM: usize = 17;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("structure table entry [{0}, {1}] forced inconsistently: {2} vs {3}")]
    Inconsistent(String, String, String, String),
    #[error("structure table entry [{0}, {1}] left undetermined")]
    Undetermined(String, String),
}

/// A basis vector of `g`: one of the Cartan generators `H1, H2, H3` or the
/// root vector `X_alpha`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasisVector {
    Cartan(usize),
    RootVec(Root),
}

impl BasisVector {
    pub fn parity(&self) -> Parity {
        match self {
            BasisVector::Cartan(_) => Parity::Even,
            BasisVector::RootVec(r) => r.parity(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            BasisVector::Cartan(i) => format!("H{}", i + 1),
            BasisVector::RootVec(r) => {
                if r.is_positive() {
                    format!("E({})", r)
                } else {
                    format!("F({})", r.neg())
                }
            }
        }
    }
}

/// The fixed basis ordering: odd negative root vectors, even negative root
/// vectors, the Cartan generators, even positives, odd positives; root
/// blocks sorted lexicographically on epsilon-coordinates.
pub fn basis_list() -> Vec<BasisVector> {
    let mut v: Vec<BasisVector> = delta1_neg().into_iter().map(BasisVector::RootVec).collect();
    v.extend(delta0_neg().into_iter().map(BasisVector::RootVec));
    v.extend((0..3).map(BasisVector::Cartan));
    v.extend(delta0_pos().into_iter().map(BasisVector::RootVec));
    v.extend(delta1_pos().into_iter().map(BasisVector::RootVec));
    v
}

pub fn basis_index(b: &BasisVector) -> usize {
    basis_list().iter().position(|x| x == b).expect("basis vector")
}

pub fn root_index(r: &Root) -> usize {
    basis_index(&BasisVector::RootVec(*r))
}

/// An element of `g` as a finite map from basis indices to coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SuperVector {
    terms: BTreeMap<usize, ScalarA>,
}

impl SuperVector {
    pub fn zero() -> Self {
        SuperVector::default()
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, ScalarA::one())
    }

    pub fn term(i: usize, c: ScalarA) -> Self {
        let mut v = SuperVector::default();
        v.add_term(i, &c);
        v
    }

    pub fn from_cartan(h: &CartanElement) -> Self {
        let mut v = SuperVector::default();
        for i in 0..3 {
            v.add_term(7 + i, &h.coords[i]);
        }
        v
    }

    pub fn cartan_part(&self) -> CartanElement {
        CartanElement::new([self.coeff(7), self.coeff(8), self.coeff(9)])
    }

    pub fn add_term(&mut self, i: usize, c: &ScalarA) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&i).unwrap_or_else(ScalarA::zero);
        let next = cur.add(c);
        if !next.is_zero() {
            self.terms.insert(i, next);
        }
    }

    pub fn add(&self, other: &SuperVector) -> SuperVector {
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(*i, c);
        }
        out
    }

    pub fn neg(&self) -> SuperVector {
        SuperVector { terms: self.terms.iter().map(|(i, c)| (*i, c.neg())).collect() }
    }

    pub fn scale(&self, c: &ScalarA) -> SuperVector {
        if c.is_zero() {
            return SuperVector::zero();
        }
        SuperVector { terms: self.terms.iter().map(|(i, x)| (*i, x.mul(c))).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> ScalarA {
        self.terms.get(&i).cloned().unwrap_or_else(ScalarA::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &ScalarA)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    /// Splits into even and odd homogeneous components.
    pub fn parity_split(&self) -> (SuperVector, SuperVector) {
        let basis = basis_list();
        let mut even = SuperVector::zero();
        let mut odd = SuperVector::zero();
        for (i, c) in &self.terms {
            match basis[*i].parity() {
                Parity::Even => even.add_term(*i, c),
                Parity::Odd => odd.add_term(*i, c),
            }
        }
        (even, odd)
    }
}

impl fmt::Display for SuperVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let basis = basis_list();
        let mut parts = Vec::new();
        for (i, c) in &self.terms {
            if c.is_one() {
                parts.push(basis[*i].name());
            } else {
                parts.push(format!("({})*{}", c, basis[*i].name()));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The algebra with its fully built 17 x 17 bracket table and cached adjoint
/// matrices.
pub struct Algebra {
    pub basis: Vec<BasisVector>,
    table: Vec<Vec<SuperVector>>,
    ad: Vec<Matrix<ScalarA>>,
}

fn sign_of_pair(x: &BasisVector, y: &BasisVector) -> i64 {
    match (x.parity(), y.parity()) {
        (Parity::Odd, Parity::Odd) => 1,
        _ => -1,
    }
}

struct TableBuilder {
    basis: Vec<BasisVector>,
    grid: Vec<Vec<Option<SuperVector>>>,
}

impl TableBuilder {
    fn new() -> Self {
        TableBuilder {
            basis: basis_list(),
            grid: vec![vec![None; DIM]; DIM],
        }
    }

    fn set(&mut self, i: usize, j: usize, v: SuperVector) -> Result<(), BuildError> {
        match &self.grid[i][j] {
            Some(old) if *old != v => Err(BuildError::Inconsistent(
                self.basis[i].name(),
                self.basis[j].name(),
                old.to_string(),
                v.to_string(),
            )),
            _ => {
                self.grid[i][j] = Some(v);
                Ok(())
            }
        }
    }

    /// Sets `[x, y] = v` together with its super-antisymmetric mirror.
    fn set_pair(&mut self, i: usize, j: usize, v: SuperVector) -> Result<(), BuildError> {
        let mirrored = v.scale(&ScalarA::from_int(sign_of_pair(&self.basis[i], &self.basis[j])));
        self.set(i, j, v)?;
        if i != j {
            self.set(j, i, mirrored)?;
        }
        Ok(())
    }
}

/// The explicit bracket list of the presentation, after the rescaling
/// `X_{2e1} = (1+a)^{-1} e'_{1,1,2,3}` and `X_{-2e1} = -(1+a)^{-1} f'_{3,2,1,1}`.
/// Entries are `([x, y], coefficient, resulting root vector)`.
fn explicit_root_brackets() -> Vec<(Root, Root, ScalarA, Root)> {
    let r = |c: [i8; 3]| Root::new(c).expect("root literal");
    let one = ScalarA::one;
    let m_one = || ScalarA::from_int(-1);
    let a = ScalarA::var;
    let m_a = || ScalarA::var().neg();
    let opa = || ScalarA::from_poly(PolyA::one_plus_a());
    let m_opa = || opa().neg();

    let e1 = r([1, -1, -1]);
    let e2 = r([0, 2, 0]);
    let e3 = r([0, 0, 2]);
    let e12 = r([1, 1, -1]);
    let e13 = r([1, -1, 1]);
    let e123 = r([1, 1, 1]);
    let ee = r([2, 0, 0]);
    let f1 = r([-1, 1, 1]);
    let f2 = r([0, -2, 0]);
    let f3 = r([0, 0, -2]);
    let f21 = r([-1, -1, 1]);
    let f31 = r([-1, 1, -1]);
    let f321 = r([-1, -1, -1]);
    let ff = r([-2, 0, 0]);

    let _ = m_a; // see `[e12, f321]` below, kept for symmetry of helpers
    vec![
        (e1, e2, one(), e12),
        (e1, e3, one(), e13),
        (e1, e123, opa(), ee),
        (e1, f21, one(), f2),
        (e1, f31, a(), f3),
        (e1, ff, one(), f321),
        (e2, e13, m_one(), e123),
        (e2, f21, one(), f1),
        (e2, f321, one(), f31),
        (e3, e12, m_one(), e123),
        (e3, f31, one(), f1),
        (e3, f321, one(), f21),
        (f1, f2, m_one(), f21),
        (f1, f3, m_one(), f31),
        (f1, f321, m_opa(), ff),
        (f1, e12, one(), e2),
        (f1, e13, a(), e3),
        (f1, ee, one(), e123),
        (f2, f31, one(), f321),
        (f2, e12, m_one(), e1),
        (f2, e123, m_one(), e13),
        (f3, f21, one(), f321),
        (f3, e13, m_one(), e1),
        (f3, e123, m_one(), e12),
        (e12, e13, m_opa(), ee),
        (e12, f321, a(), f3),
        (e12, ff, m_one(), f31),
        (e13, f321, one(), f2),
        (e13, ff, m_one(), f21),
        (f21, f31, opa(), ff),
        (f21, e123, a(), e3),
        (f21, ee, m_one(), e13),
        (f31, e123, one(), e2),
        (f31, ee, m_one(), e12),
        (e123, ff, one(), f1),
        // The displayed list carries -(1+a) e_1 here, but the graded Leibniz
        // rule applied to e'_{1,1,2,3} = [e_1, e_{1,2,3}] together with the
        // entries for [e_{1,2,3}, f_{3,2,1}] and [f_1, e'_{1,1,2,3}] forces
        // the opposite sign; the Jacobi suite confirms it.
        (f321, ee, one(), e1),
    ]
}

/// Opposite-root brackets `[X_alpha, X_{-alpha}]` for the positive roots,
/// valued in the Cartan subalgebra (`H`-basis coordinates).
fn explicit_cartan_brackets() -> Vec<(Root, CartanElement)> {
    let r = |c: [i8; 3]| Root::new(c).expect("root literal");
    let h = |x: [ScalarA; 3]| CartanElement::new(x);
    let a = ScalarA::var();
    let opa = ScalarA::from_poly(PolyA::one_plus_a());
    vec![
        // defining relations [e_i, f_i] = h_i
        (r([1, -1, -1]), CartanElement::from_ints([1, 0, 0])),
        (r([0, 2, 0]), h([ScalarA::from_int(2), opa.clone().neg(), a.clone().neg()])),
        (r([0, 0, 2]), CartanElement::from_ints([0, 0, 1])),
        // [e_{1,2}, f_{2,1}] = h1 - h2
        (r([1, 1, -1]), h([ScalarA::from_int(-1), opa.clone(), a.clone()])),
        // [e_{1,3}, f_{3,1}] = h1 - a h3
        (r([1, -1, 1]), h([ScalarA::one(), ScalarA::zero(), a.neg()])),
        // [e_{1,2,3}, f_{3,2,1}] = h1 - h2 - a h3
        (r([1, 1, 1]), h([ScalarA::from_int(-1), opa, ScalarA::zero()])),
        // [X_{2e1}, X_{-2e1}] = (1+a)^{-1}(2 h1 - h2 - a h3) = H2
        (r([2, 0, 0]), CartanElement::from_ints([0, 1, 0])),
    ]
}

impl Algebra {
    pub fn new() -> Result<Algebra, BuildError> {
        let mut b = TableBuilder::new();
        let basis = b.basis.clone();

        // Cartan rows: [H_i, H_j] = 0 and [H_i, X_beta] = beta(H_i) X_beta.
        for i in 0..3 {
            for j in 0..3 {
                b.set(7 + i, 7 + j, SuperVector::zero())?;
            }
            let hi = CartanElement::basis(i);
            for (idx, bv) in basis.iter().enumerate() {
                if let BasisVector::RootVec(beta) = bv {
                    let c = pairing(beta, &hi);
                    b.set_pair(7 + i, idx, SuperVector::term(idx, c))?;
                }
            }
        }

        // The explicit list and the opposite-root brackets.
        for (x, y, c, z) in explicit_root_brackets() {
            let v = SuperVector::term(root_index(&z), c);
            b.set_pair(root_index(&x), root_index(&y), v)?;
        }
        for (alpha, h) in explicit_cartan_brackets() {
            let v = SuperVector::from_cartan(&h);
            b.set_pair(root_index(&alpha), root_index(&alpha.neg()), v)?;
        }

        // Everything else is forced to zero by the root grading.
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                if b.grid[i][j].is_some() {
                    continue;
                }
                if let (BasisVector::RootVec(al), BasisVector::RootVec(be)) = (x, y) {
                    let sum = [
                        al.coords()[0] + be.coords()[0],
                        al.coords()[1] + be.coords()[1],
                        al.coords()[2] + be.coords()[2],
                    ];
                    if sum == [0, 0, 0] || Root::new(sum).is_some() {
                        return Err(BuildError::Undetermined(x.name(), y.name()));
                    }
                    b.set(i, j, SuperVector::zero())?;
                } else {
                    return Err(BuildError::Undetermined(x.name(), y.name()));
                }
            }
        }

        let table: Vec<Vec<SuperVector>> = b
            .grid
            .into_iter()
            .map(|row| row.into_iter().map(|e| e.expect("filled")).collect())
            .collect();

        let mut alg = Algebra { basis, table, ad: Vec::new() };
        alg.ad = (0..DIM).map(|i| alg.compute_adjoint(i)).collect();
        Ok(alg)
    }

    /// The shared immutable instance.
    pub fn shared() -> &'static Algebra {
        static INSTANCE: OnceLock<Algebra> = OnceLock::new();
        INSTANCE.get_or_init(|| Algebra::new().expect("structure table is consistent"))
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SuperVector {
        &self.table[i][j]
    }

    /// Bilinear extension of the table.
    pub fn bracket(&self, x: &SuperVector, y: &SuperVector) -> SuperVector {
        let mut out = SuperVector::zero();
        for (i, cx) in x.terms() {
            for (j, cy) in y.terms() {
                let v = self.table[i][j].scale(&cx.mul(cy));
                out = out.add(&v);
            }
        }
        out
    }

    fn compute_adjoint(&self, i: usize) -> Matrix<ScalarA> {
        let mut m = Matrix::zero(DIM);
        for j in 0..DIM {
            for (row, c) in self.table[i][j].terms() {
                m.set(row, j, c.clone());
            }
        }
        m
    }

    /// The matrix of `ad(x)` on the Chevalley basis, columns indexed by the
    /// argument.
    pub fn adjoint_matrix(&self, i: usize) -> &Matrix<ScalarA> {
        &self.ad[i]
    }

    /// Structure-constant integrality: all entries in `Z[a]`.
    pub fn check_integrality(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for i in 0..DIM {
            for j in 0..DIM {
                for (_, c) in self.table[i][j].terms() {
                    if !c.in_z_bracket_a() {
                        bad.push(format!(
                            "[{}, {}] has non-Z[a] coefficient {}",
                            self.basis[i].name(),
                            self.basis[j].name(),
                            c
                        ));
                    }
                }
            }
        }
        bad
    }

    /// Super-antisymmetry over all ordered basis pairs.
    pub fn check_antisymmetry(&self) -> (usize, Vec<String>) {
        let mut violations = Vec::new();
        let mut checks = 0;
        for i in 0..DIM {
            for j in 0..DIM {
                checks += 1;
                let sign = sign_of_pair(&self.basis[i], &self.basis[j]);
                let lhs = self.table[i][j].clone();
                let rhs = self.table[j][i].scale(&ScalarA::from_int(sign));
                if lhs != rhs {
                    violations.push(format!(
                        "antisymmetry fails on ({}, {})",
                        self.basis[i].name(),
                        self.basis[j].name()
                    ));
                }
            }
        }
        (checks, violations)
    }

    /// The super Jacobi identity over all ordered basis triples.
    pub fn check_jacobi(&self) -> (usize, Vec<String>) {
        let p = |i: usize| match self.basis[i].parity() {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        let mut violations = Vec::new();
        let mut checks = 0;
        for x in 0..DIM {
            for y in 0..DIM {
                for z in 0..DIM {
                    checks += 1;
                    let s1 = if p(x) * p(z) == 1 { -1 } else { 1 };
                    let s2 = if p(y) * p(x) == 1 { -1 } else { 1 };
                    let s3 = if p(z) * p(y) == 1 { -1 } else { 1 };
                    let t1 = self
                        .bracket(&SuperVector::basis(x), &self.table[y][z])
                        .scale(&ScalarA::from_int(s1));
                    let t2 = self
                        .bracket(&SuperVector::basis(y), &self.table[z][x])
                        .scale(&ScalarA::from_int(s2));
                    let t3 = self
                        .bracket(&SuperVector::basis(z), &self.table[x][y])
                        .scale(&ScalarA::from_int(s3));
                    if !t1.add(&t2).add(&t3).is_zero() {
                        violations.push(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.basis[x].name(),
                            self.basis[y].name(),
                            self.basis[z].name()
                        ));
                    }
                }
            }
        }
        (checks, violations)
    }

    /// Verifies the Chevalley-basis axioms (a)-(d) against the built table.
    pub fn verify_chevalley_axioms(&self) -> AxiomReport {
        let mut rep = AxiomReport::default();

        // (a) the Cartan lattice is spanned over Z[a] by the coroots, and
        // every coroot has Z[a]-coordinates.
        for alpha in all_roots() {
            rep.checks += 1;
            if !coroot(&alpha).in_h_za() {
                rep.violations.push(format!("(a): coroot of {} not Z[a]-integral", alpha));
            }
        }
        for (i, gen) in [
            Root::new([1, -1, -1]).unwrap(),
            Root::new([2, 0, 0]).unwrap(),
            Root::new([0, 0, 2]).unwrap(),
        ]
        .iter()
        .enumerate()
        {
            rep.checks += 1;
            if coroot(gen) != CartanElement::basis(i) {
                rep.violations
                    .push(format!("(a): H{} is not the coroot of {}", i + 1, gen));
            }
        }

        // (b) Cartan brackets.
        for i in 0..3 {
            for j in 0..3 {
                rep.checks += 1;
                if !self.table[7 + i][7 + j].is_zero() {
                    rep.violations.push(format!("(b): [H{}, H{}] nonzero", i + 1, j + 1));
                }
            }
            let hi = CartanElement::basis(i);
            for (idx, bv) in self.basis.iter().enumerate() {
                if let BasisVector::RootVec(beta) = bv {
                    rep.checks += 1;
                    let expected = SuperVector::term(idx, pairing(beta, &hi));
                    if self.table[7 + i][idx] != expected {
                        rep.violations
                            .push(format!("(b): [H{}, {}] wrong", i + 1, bv.name()));
                    }
                }
            }
        }

        // (c) [X_alpha, X_{-alpha}] = sigma_alpha H_alpha.
        for alpha in all_roots() {
            rep.checks += 1;
            let sigma = if alpha.parity() == Parity::Odd && !alpha.is_positive() {
                -1
            } else {
                1
            };
            let expected =
                SuperVector::from_cartan(&coroot(&alpha)).scale(&ScalarA::from_int(sigma));
            let got = &self.table[root_index(&alpha)][root_index(&alpha.neg())];
            if *got != expected {
                rep.violations.push(format!(
                    "(c): [X_{}, X_{}] = {} but sigma H gives {}",
                    alpha,
                    alpha.neg(),
                    got,
                    expected
                ));
            }
        }

        // (d) root-pair brackets.
        for alpha in all_roots() {
            for beta in all_roots() {
                if beta == alpha.neg() {
                    continue;
                }
                rep.checks += 1;
                let entry = &self.table[root_index(&alpha)][root_index(&beta)];
                match alpha.try_add(&beta) {
                    None => {
                        if !entry.is_zero() {
                            rep.violations.push(format!(
                                "(d.1): [X_{}, X_{}] should vanish",
                                alpha, beta
                            ));
                        }
                    }
                    Some(sum) => {
                        let mut c = ScalarA::zero();
                        let mut supported_elsewhere = false;
                        for (i, coeff) in entry.terms() {
                            if i == root_index(&sum) {
                                c = coeff.clone();
                            } else {
                                supported_elsewhere = true;
                            }
                        }
                        if supported_elsewhere {
                            rep.violations.push(format!(
                                "(d): [X_{}, X_{}] not supported on X_{}",
                                alpha, beta, sum
                            ));
                            continue;
                        }
                        let isotropic = |r: &Root| bilinear_form(r, r).is_zero();
                        if !isotropic(&alpha) || !isotropic(&beta) {
                            let s = root_string(&beta, &alpha);
                            let expect = ScalarA::from_int((s.r + 1) as i64);
                            if c != expect && c != expect.neg() {
                                rep.violations.push(format!(
                                    "(d.2): [X_{}, X_{}] = {} but r+1 = {}",
                                    alpha,
                                    beta,
                                    c,
                                    s.r + 1
                                ));
                            }
                        } else {
                            let expect = pairing(&beta, &coroot(&alpha));
                            if c != expect && c != expect.neg() {
                                rep.violations.push(format!(
                                    "(d.3): [X_{}, X_{}] = {} but beta(H_alpha) = {}",
                                    alpha, beta, c, expect
                                ));
                            }
                        }
                    }
                }
            }
        }

        rep
    }

    /// The three pairwise commuting sl2 triples of the even part.
    pub fn check_sl2_triples(&self) -> Vec<String> {
        let r = |c: [i8; 3]| Root::new(c).unwrap();
        let triples = [
            (r([2, 0, 0]), r([-2, 0, 0])),
            (r([0, 2, 0]), r([0, -2, 0])),
            (r([0, 0, 2]), r([0, 0, -2])),
        ];
        let mut bad = Vec::new();
        let two = ScalarA::from_int(2);
        for (e, f) in &triples {
            let ei = root_index(e);
            let fi = root_index(f);
            let h = self.table[ei][fi].clone();
            let he = self.bracket(&h, &SuperVector::basis(ei));
            let hf = self.bracket(&h, &SuperVector::basis(fi));
            if he != SuperVector::term(ei, two.clone()) {
                bad.push(format!("[h, e] != 2e for the {} triple", e));
            }
            if hf != SuperVector::term(fi, two.neg()) {
                bad.push(format!("[h, f] != -2f for the {} triple", e));
            }
            // the triple's h must be sigma H_alpha = H_alpha
            if h != SuperVector::from_cartan(&coroot(e)) {
                bad.push(format!("[e, f] != H_alpha for the {} triple", e));
            }
        }
        // pairwise commutation of the three sl2 copies
        for (e1, f1) in &triples {
            for (e2, f2) in &triples {
                if e1 == e2 {
                    continue;
                }
                for x in [e1, f1] {
                    for y in [e2, f2] {
                        if !self.table[root_index(x)][root_index(y)].is_zero() {
                            bad.push(format!("sl2 copies {} and {} do not commute", e1, e2));
                        }
                    }
                }
            }
        }
        bad
    }

    /// Weight-space decomposition of the adjoint module: weight zero carries
    /// the Cartan subalgebra, each root its root vector.
    pub fn weight_decomposition(&self) -> Vec<(Option<Root>, Vec<usize>)> {
        let mut out: Vec<(Option<Root>, Vec<usize>)> = vec![(None, vec![7, 8, 9])];
        for (idx, bv) in self.basis.iter().enumerate() {
            if let BasisVector::RootVec(r) = bv {
                out.push((Some(*r), vec![idx]));
            }
        }
        out
    }
}

#[derive(Default, Debug)]
pub struct AxiomReport {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The bracket table with all coefficients specialized at `a = a0`,
/// for numeric reruns of the symbolic suites over `Q`.
pub struct SpecializedAlgebra {
    parities: Vec<u8>,
    table: Vec<Vec<Vec<(usize, BigRational)>>>,
}

impl SpecializedAlgebra {
    pub fn new(alg: &Algebra, a0: &BigRational) -> Result<Self, crate::scalars::ScalarError> {
        let parities = alg
            .basis
            .iter()
            .map(|b| match b.parity() {
                Parity::Even => 0,
                Parity::Odd => 1,
            })
            .collect();
        let mut table = Vec::with_capacity(DIM);
        for i in 0..DIM {
            let mut row = Vec::with_capacity(DIM);
            for j in 0..DIM {
                let mut entry = Vec::new();
                for (k, c) in alg.bracket_basis(i, j).terms() {
                    entry.push((k, c.specialize(a0)?));
                }
                row.push(entry);
            }
            table.push(row);
        }
        Ok(SpecializedAlgebra { parities, table })
    }

    fn bracket_vec(&self, i: usize, v: &[(usize, BigRational)]) -> Vec<(usize, BigRational)> {
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (j, c) in v {
            for (k, d) in &self.table[i][*j] {
                let e = acc.entry(*k).or_insert_with(BigRational::zero);
                *e += c * d;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Antisymmetry and the bracket values of the specialized table against
    /// the symbolic one evaluated at `a0`: returns violation descriptions.
    pub fn check_antisymmetry(&self) -> (usize, usize) {
        let mut checks = 0;
        let mut violations = 0;
        for i in 0..DIM {
            for j in 0..DIM {
                checks += 1;
                let sign: BigRational = if self.parities[i] * self.parities[j] == 1 {
                    BigRational::from_integer(1.into())
                } else {
                    BigRational::from_integer((-1).into())
                };
                let lhs = &self.table[i][j];
                let rhs: Vec<(usize, BigRational)> = self.table[j][i]
                    .iter()
                    .map(|(k, c)| (*k, c * &sign))
                    .collect();
                if *lhs != rhs {
                    violations += 1;
                }
            }
        }
        (checks, violations)
    }

    /// Numeric rerun of the Chevalley-axiom suite at the specialized value:
    /// every symbolic quantity in axioms (b), (c), (d) is specialized and the
    /// table compared over `Q`.
    pub fn check_axioms(
        &self,
        alg: &Algebra,
        a0: &BigRational,
    ) -> Result<(usize, usize), crate::scalars::ScalarError> {
        let mut checks = 0;
        let mut violations = 0;
        let spec_vec = |v: &SuperVector| -> Result<Vec<(usize, BigRational)>, crate::scalars::ScalarError> {
            v.terms().map(|(i, c)| Ok((i, c.specialize(a0)?))).collect()
        };
        // (b)
        for i in 0..3 {
            let hi = CartanElement::basis(i);
            for (idx, bv) in alg.basis.iter().enumerate() {
                checks += 1;
                let expected: Vec<(usize, BigRational)> = match bv {
                    BasisVector::Cartan(_) => vec![],
                    BasisVector::RootVec(beta) => {
                        let c = pairing(beta, &hi).specialize(a0)?;
                        if c.is_zero() {
                            vec![]
                        } else {
                            vec![(idx, c)]
                        }
                    }
                };
                if spec_vec(alg.bracket_basis(7 + i, idx))? != expected {
                    violations += 1;
                }
            }
        }
        // (c)
        for alpha in all_roots() {
            checks += 1;
            let sigma = if alpha.parity() == Parity::Odd && !alpha.is_positive() { -1 } else { 1 };
            let expected = spec_vec(
                &SuperVector::from_cartan(&coroot(&alpha)).scale(&ScalarA::from_int(sigma)),
            )?;
            let got = spec_vec(alg.bracket_basis(root_index(&alpha), root_index(&alpha.neg())))?;
            if got != expected {
                violations += 1;
            }
        }
        // (d)
        for alpha in all_roots() {
            for beta in all_roots() {
                if beta == alpha.neg() {
                    continue;
                }
                checks += 1;
                let entry = spec_vec(alg.bracket_basis(root_index(&alpha), root_index(&beta)))?;
                match alpha.try_add(&beta) {
                    None => {
                        if !entry.is_empty() {
                            violations += 1;
                        }
                    }
                    Some(sum) => {
                        let c = entry
                            .iter()
                            .find(|(i, _)| *i == root_index(&sum))
                            .map(|(_, c)| c.clone())
                            .unwrap_or_else(BigRational::zero);
                        if entry.len() > usize::from(!c.is_zero()) {
                            violations += 1;
                            continue;
                        }
                        let isotropic = |r: &Root| bilinear_form(r, r).is_zero();
                        let expect = if !isotropic(&alpha) || !isotropic(&beta) {
                            let s = root_string(&beta, &alpha);
                            BigRational::from_integer(((s.r + 1) as i64).into())
                        } else {
                            pairing(&beta, &coroot(&alpha)).specialize(a0)?
                        };
                        if c != expect && c != -expect {
                            violations += 1;
                        }
                    }
                }
            }
        }
        Ok((checks, violations))
    }

    /// The super Jacobi identity over all ordered triples, numerically.
    pub fn check_jacobi(&self) -> (usize, usize) {
        let mut checks = 0;
        let mut violations = 0;
        let minus_one = BigRational::from_integer((-1).into());
        for x in 0..DIM {
            for y in 0..DIM {
                for z in 0..DIM {
                    checks += 1;
                    let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
                    let mut accumulate = |v: Vec<(usize, BigRational)>, s: &BigRational| {
                        for (k, c) in v {
                            let e = acc.entry(k).or_insert_with(BigRational::zero);
                            *e += c * s;
                        }
                    };
                    let sgn = |p: u8, q: u8| {
                        if p * q == 1 {
                            minus_one.clone()
                        } else {
                            BigRational::from_integer(1.into())
                        }
                    };
                    let t1 = self.bracket_vec(x, &self.table[y][z]);
                    accumulate(t1, &sgn(self.parities[x], self.parities[z]));
                    let t2 = self.bracket_vec(y, &self.table[z][x]);
                    accumulate(t2, &sgn(self.parities[y], self.parities[x]));
                    let t3 = self.bracket_vec(z, &self.table[x][y]);
                    accumulate(t3, &sgn(self.parities[z], self.parities[y]));
                    if acc.values().any(|c| !c.is_zero()) {
                        violations += 1;
                    }
                }
            }
        }
        (checks, violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn r(c: [i8; 3]) -> Root {
        Root::new(c).unwrap()
    }

    #[test]
    fn table_builds_consistently() {
        let alg = Algebra::new().expect("table build");
        assert_eq!(alg.basis.len(), 17);
    }

    #[test]
    fn bracket_examples() {
        let alg = Algebra::shared();
        // [H1, H2] = 0
        assert!(alg.bracket_basis(7, 8).is_zero());
        // [e1, f1] = h1 = H1
        let e1 = root_index(&r([1, -1, -1]));
        let f1 = root_index(&r([-1, 1, 1]));
        assert_eq!(*alg.bracket_basis(e1, f1), SuperVector::basis(7));
        // odd brackets are symmetric: [f1, e1] = H1 as well
        assert_eq!(*alg.bracket_basis(f1, e1), SuperVector::basis(7));
        // [e1, e1] = 0
        assert!(alg.bracket_basis(e1, e1).is_zero());
        // [e1, e2] = e_{1,2}
        let e2 = root_index(&r([0, 2, 0]));
        let e12 = root_index(&r([1, 1, -1]));
        assert_eq!(*alg.bracket_basis(e1, e2), SuperVector::basis(e12));
        // [f1, e13] = a e3
        let f1v = root_index(&r([-1, 1, 1]));
        let e13 = root_index(&r([1, -1, 1]));
        let e3 = root_index(&r([0, 0, 2]));
        assert_eq!(
            *alg.bracket_basis(f1v, e13),
            SuperVector::term(e3, ScalarA::var())
        );
        // [e_{1,2,3}, f_{3,2,1}] = -H1 + (1+a) H2
        let e123 = root_index(&r([1, 1, 1]));
        let f321 = root_index(&r([-1, -1, -1]));
        let expected = SuperVector::from_cartan(&CartanElement::new([
            ScalarA::from_int(-1),
            ScalarA::from_poly(PolyA::one_plus_a()),
            ScalarA::zero(),
        ]));
        assert_eq!(*alg.bracket_basis(e123, f321), expected);
    }

    #[test]
    fn axiom_suite_is_clean() {
        let rep = Algebra::shared().verify_chevalley_axioms();
        assert!(rep.ok(), "violations: {:#?}", rep.violations);
        assert!(rep.checks > 200);
    }

    #[test]
    fn antisymmetry_and_integrality() {
        let alg = Algebra::shared();
        let (checks, violations) = alg.check_antisymmetry();
        assert_eq!(checks, 289);
        assert!(violations.is_empty(), "{:?}", violations);
        assert!(alg.check_integrality().is_empty());
    }

    #[test]
    fn jacobi_holds_everywhere() {
        let alg = Algebra::shared();
        let (checks, violations) = alg.check_jacobi();
        assert_eq!(checks, 4913);
        assert!(violations.is_empty(), "{:?}", &violations[..violations.len().min(10)]);
    }

    #[test]
    fn grading_of_entries() {
        let alg = Algebra::shared();
        for (i, x) in alg.basis.iter().enumerate() {
            for (j, y) in alg.basis.iter().enumerate() {
                let entry = alg.bracket_basis(i, j);
                if let (BasisVector::RootVec(al), BasisVector::RootVec(be)) = (x, y) {
                    match al.try_add(be) {
                        Some(sum) => {
                            for (k, _) in entry.terms() {
                                assert_eq!(k, root_index(&sum));
                            }
                        }
                        None => {
                            let opposite = *be == al.neg();
                            if opposite {
                                for (k, _) in entry.terms() {
                                    assert!((7..10).contains(&k));
                                }
                            } else {
                                assert!(entry.is_zero(), "[{}, {}]", x.name(), y.name());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chevalley_axiom_examples() {
        let alg = Algebra::shared();
        // isotropic pair (a1, a1+a2+a3): c = 1+a = beta(H_{a1})
        let al = r([1, -1, -1]);
        let be = r([1, 1, 1]);
        let entry = alg.bracket_basis(root_index(&al), root_index(&be));
        let c = entry.coeff(root_index(&r([2, 0, 0])));
        assert_eq!(c, ScalarA::from_poly(PolyA::one_plus_a()));
        assert_eq!(c, pairing(&be, &coroot(&al)));
        // (a2, a1+a3): c = -1 with r+1 = 1
        let entry = alg.bracket_basis(root_index(&r([0, 2, 0])), root_index(&r([1, -1, 1])));
        assert_eq!(entry.coeff(root_index(&r([1, 1, 1]))), ScalarA::from_int(-1));
        // sigma for the negative odd root: [f1, e1] = sigma_{-a1} H_{-a1}
        // with sigma = -1 and H_{-a1} = -H1, i.e. +H1.
        let f1 = root_index(&r([-1, 1, 1]));
        let e1 = root_index(&r([1, -1, -1]));
        let expected = SuperVector::from_cartan(&coroot(&r([-1, 1, 1]))).neg();
        assert_eq!(*alg.bracket_basis(f1, e1), expected);
        assert_eq!(expected, SuperVector::basis(7));
    }

    #[test]
    fn adjoint_matrices() {
        let alg = Algebra::shared();
        // ad(H1) is diagonal with entries pairing(beta, H1)
        let m = alg.adjoint_matrix(7);
        for (j, bv) in alg.basis.iter().enumerate() {
            match bv {
                BasisVector::Cartan(_) => {
                    for i in 0..DIM {
                        assert!(m.get(i, j).is_zero());
                    }
                }
                BasisVector::RootVec(beta) => {
                    for i in 0..DIM {
                        let expected = if i == j {
                            pairing(beta, &CartanElement::basis(0))
                        } else {
                            ScalarA::zero()
                        };
                        assert_eq!(*m.get(i, j), expected);
                    }
                }
            }
        }
        // ad(H1) at X_{a2} is 1
        let e2 = root_index(&r([0, 2, 0]));
        assert_eq!(*m.get(e2, e2), ScalarA::one());
        // every root vector has nilpotent adjoint of order at most 4
        for (i, bv) in alg.basis.iter().enumerate() {
            if matches!(bv, BasisVector::RootVec(_)) {
                let ad = alg.adjoint_matrix(i);
                let p2 = ad.mul(ad);
                let p4 = p2.mul(&p2);
                assert!(p4.is_zero(), "ad({})^4 != 0", bv.name());
            }
        }
        // adjoint entries stay in Z[a]
        for i in 0..DIM {
            let m = alg.adjoint_matrix(i);
            for r_ in 0..DIM {
                for c_ in 0..DIM {
                    assert!(m.get(r_, c_).in_z_bracket_a());
                }
            }
        }
    }

    #[test]
    fn weights() {
        let alg = Algebra::shared();
        let decomp = alg.weight_decomposition();
        assert_eq!(decomp.len(), 15);
        assert_eq!(decomp[0], (None, vec![7, 8, 9]));
        // mu(H_i) in Z[a] for all weights, mu(H_alpha) in Z for even alpha
        let h2e2 = coroot(&r([0, 2, 0]));
        let mut values = Vec::new();
        for (w, _) in &decomp {
            if let Some(mu) = w {
                for i in 0..3 {
                    assert!(pairing(mu, &CartanElement::basis(i)).in_z_bracket_a());
                }
                let v = pairing(mu, &h2e2);
                assert!(v.numerator().degree().map_or(true, |d| d == 0));
                values.push(v);
            }
        }
        for v in values {
            let c = v.numerator().coeff(0);
            let allowed = [int(0), int(1), int(-1), int(2), int(-2)];
            assert!(allowed.contains(&c), "mu(H_2e2) = {}", c);
        }
    }

    #[test]
    fn sl2_triples() {
        assert!(Algebra::shared().check_sl2_triples().is_empty());
        // first triple closes on H2
        let alg = Algebra::shared();
        let ee = root_index(&r([2, 0, 0]));
        let ff = root_index(&r([-2, 0, 0]));
        assert_eq!(*alg.bracket_basis(ee, ff), SuperVector::basis(8));
    }

    #[test]
    fn even_part_closed() {
        let alg = Algebra::shared();
        let even: Vec<usize> = alg
            .basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.parity() == Parity::Even)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(even.len(), 9);
        for &i in &even {
            for &j in &even {
                for (k, _) in alg.bracket_basis(i, j).terms() {
                    assert!(even.contains(&k));
                }
            }
        }
    }

    #[test]
    fn specialized_suites() {
        let alg = Algebra::shared();
        for a0 in [int(2), int(3), int(-3), crate::scalars::rat(1, 2)] {
            let spec = SpecializedAlgebra::new(alg, &a0).unwrap();
            let (c1, v1) = spec.check_antisymmetry();
            assert_eq!((c1, v1), (289, 0));
            let (c2, v2) = spec.check_jacobi();
            assert_eq!((c2, v2), (4913, 0));
            let (c3, v3) = spec.check_axioms(alg, &a0).unwrap();
            assert_eq!(v3, 0);
            assert!(c3 > 200);
        }
        assert!(SpecializedAlgebra::new(alg, &int(0)).is_err());
        assert!(SpecializedAlgebra::new(alg, &int(-1)).is_err());
    }
}
