//! Classical pseudodifferential symbols as finite sums of homogeneous
//! pieces. Each piece is a matrix-coefficient polynomial in ξ times a power
//! of `|ξ|⁻²`, carrying x-jets at a single evaluation point x₀.
//!
//! The x-dependence model is deliberately pointwise: symbols store
//! `∂ₓ^β(numerator)(x₀)` up to a declared jet depth, and the evaluation
//! point sits in normal coordinates (`g = δ`, vanishing connection
//! coefficients and first metric derivatives), so `|ξ|²` itself never
//! carries jets. Missing jet entries within the declared depth are zero;
//! anything beyond the depth is unknown and demanding it is an error,
//! never a silent truncation.

use crate::matrix::SquareMatrix;
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

// ---------------------------------------------------------------------------
// multi-indices
// ---------------------------------------------------------------------------

/// Multi-index over ξ- or x-variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Multi(Vec<u8>);

impl Multi {
    pub fn zero(dim: usize) -> Self {
        Multi(vec![0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        Multi(v)
    }

    pub fn from_slice(v: &[u8]) -> Self {
        Multi(v.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, axis: usize) -> u8 {
        self.0[axis]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn add(&self, other: &Multi) -> Multi {
        Multi(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn bump(&self, axis: usize) -> Multi {
        let mut v = self.0.clone();
        v[axis] += 1;
        Multi(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// β! = Π βᵢ!
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&x| fact(x as u32)).product()
    }

    /// Π C(βᵢ, subᵢ); caller guarantees sub ≤ self componentwise.
    pub fn binom_with(&self, sub: &Multi) -> f64 {
        self.0
            .iter()
            .zip(&sub.0)
            .map(|(&b, &s)| binom(b as u32, s as u32))
            .product()
    }

    /// All splits β = β₁ + β₂ as (β₁, β₂).
    pub fn splits(&self) -> Vec<(Multi, Multi)> {
        let mut out = vec![(Multi::zero(self.dim()), self.clone())];
        for axis in 0..self.dim() {
            let reps = self.0[axis];
            if reps == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * (reps as usize + 1));
            for (lo, hi) in out {
                for k in 0..=reps {
                    let mut l = lo.clone();
                    let mut h = hi.clone();
                    l.0[axis] = k;
                    h.0[axis] = reps - k;
                    next.push((l, h));
                }
            }
            out = next;
        }
        out
    }
}

fn fact(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binom(n: u32, k: u32) -> f64 {
    if k > n {
        0.0
    } else {
        fact(n) / (fact(k) * fact(n - k))
    }
}

/// All multi-indices over `dim` variables with total degree exactly `deg`.
pub fn multis_of_degree(dim: usize, deg: u32) -> Vec<Multi> {
    fn rec(dim: usize, deg: u32, prefix: &mut Vec<u8>, out: &mut Vec<Multi>) {
        if dim == 1 {
            prefix.push(deg as u8);
            out.push(Multi(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in 0..=deg {
            prefix.push(k as u8);
            rec(dim - 1, deg - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, deg, &mut Vec::new(), &mut out);
    out
}

/// All multi-indices with total degree ≤ `deg`.
pub fn multis_up_to(dim: usize, deg: u32) -> Vec<Multi> {
    (0..=deg).flat_map(|d| multis_of_degree(dim, d)).collect()
}

// ---------------------------------------------------------------------------
// polynomials in ξ with matrix coefficients
// ---------------------------------------------------------------------------

/// Polynomial in ξ with `SquareMatrix` coefficients. Zero-matrix entries are
/// never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct XiPolynomial {
    dim: usize,
    side: usize,
    terms: BTreeMap<Multi, SquareMatrix>,
}

impl XiPolynomial {
    pub fn zero(dim: usize, side: usize) -> Self {
        XiPolynomial {
            dim,
            side,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, m: SquareMatrix) -> Self {
        Self::monomial(Multi::zero(dim), m)
    }

    pub fn monomial(alpha: Multi, m: SquareMatrix) -> Self {
        let mut p = XiPolynomial {
            dim: alpha.dim(),
            side: m.side(),
            terms: BTreeMap::new(),
        };
        if !m.is_zero() {
            p.terms.insert(alpha, m);
        }
        p
    }

    /// `|ξ|²·Id` as a polynomial.
    pub fn xi_norm_sq(dim: usize, side: usize) -> Self {
        let mut p = XiPolynomial::zero(dim, side);
        for axis in 0..dim {
            let mut alpha = Multi::zero(dim);
            alpha.0[axis] = 2;
            p.terms.insert(alpha, SquareMatrix::identity(side));
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multi, &SquareMatrix)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &Multi) -> SquareMatrix {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| SquareMatrix::zeros(self.side))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.degree()).max()
    }

    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.terms.keys().all(|a| a.degree() == deg)
    }

    pub fn add_term(&mut self, alpha: Multi, m: &SquareMatrix) {
        debug_assert_eq!(alpha.dim(), self.dim);
        debug_assert_eq!(m.side(), self.side);
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !m.is_zero() {
                    e.insert(m.clone());
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + m;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &XiPolynomial) -> XiPolynomial {
        let mut out = self.clone();
        for (a, m) in &other.terms {
            out.add_term(a.clone(), m);
        }
        out
    }

    pub fn scale(&self, z: Complex64) -> XiPolynomial {
        if z == Complex64::new(0.0, 0.0) {
            return XiPolynomial::zero(self.dim, self.side);
        }
        XiPolynomial {
            dim: self.dim,
            side: self.side,
            terms: self
                .terms
                .iter()
                .map(|(a, m)| (a.clone(), m.scale(z)))
                .collect(),
        }
    }

    /// Noncommutative product: coefficients multiply in the given order.
    pub fn mul(&self, other: &XiPolynomial) -> XiPolynomial {
        let mut out = XiPolynomial::zero(self.dim, self.side);
        for (a, ma) in &self.terms {
            for (b, mb) in &other.terms {
                out.add_term(a.add(b), &(ma * mb));
            }
        }
        out
    }

    pub fn mul_matrix_left(&self, m: &SquareMatrix) -> XiPolynomial {
        let mut out = XiPolynomial::zero(self.dim, self.side);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), &(m * c));
        }
        out
    }

    pub fn mul_matrix_right(&self, m: &SquareMatrix) -> XiPolynomial {
        let mut out = XiPolynomial::zero(self.dim, self.side);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), &(c * m));
        }
        out
    }

    /// ∂/∂ξ_axis.
    pub fn dxi(&self, axis: usize) -> XiPolynomial {
        let mut out = XiPolynomial::zero(self.dim, self.side);
        for (a, m) in &self.terms {
            let p = a.0[axis];
            if p > 0 {
                let mut lower = a.clone();
                lower.0[axis] -= 1;
                out.add_term(lower, &m.scale(Complex64::new(p as f64, 0.0)));
            }
        }
        out
    }

    pub fn eval(&self, xi: &[f64]) -> SquareMatrix {
        let mut out = SquareMatrix::zeros(self.side);
        for (a, m) in &self.terms {
            let mut w = 1.0;
            for (axis, &p) in a.0.iter().enumerate() {
                w *= xi[axis].powi(p as i32);
            }
            out = &out + &m.scale(Complex64::new(w, 0.0));
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|m| m.max_abs()).fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// homogeneous symbol pieces
// ---------------------------------------------------------------------------

/// One homogeneous piece: `Σ_β jets[β]·(x−x₀)^β/β!` in spirit, each jet a
/// ξ-polynomial, all times `|ξ|^{-2·inv_power}`. The stored jets are the raw
/// derivatives `∂ₓ^β(numerator)(x₀)`.
#[derive(Clone, Debug)]
pub struct SymbolTerm {
    dim: usize,
    side: usize,
    degree: i32,
    inv_power: u32,
    jets: BTreeMap<Multi, XiPolynomial>,
}

impl SymbolTerm {
    pub fn new(dim: usize, side: usize, degree: i32, inv_power: u32) -> Self {
        SymbolTerm {
            dim,
            side,
            degree,
            inv_power,
            jets: BTreeMap::new(),
        }
    }

    pub fn with_value(dim: usize, side: usize, degree: i32, inv_power: u32, value: XiPolynomial) -> Self {
        let mut t = Self::new(dim, side, degree, inv_power);
        t.set_jet(Multi::zero(dim), value);
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn inv_power(&self) -> u32 {
        self.inv_power
    }

    /// Degree every jet polynomial must be homogeneous of.
    fn numerator_degree(&self) -> u32 {
        (self.degree + 2 * self.inv_power as i32) as u32
    }

    pub fn set_jet(&mut self, beta: Multi, poly: XiPolynomial) {
        debug_assert!(
            poly.is_homogeneous_of(self.numerator_degree()) || poly.is_zero(),
            "jet not homogeneous of numerator degree {} (degree {}, q {})",
            self.numerator_degree(),
            self.degree,
            self.inv_power
        );
        if poly.is_zero() {
            self.jets.remove(&beta);
        } else {
            self.jets.insert(beta, poly);
        }
    }

    pub fn add_jet(&mut self, beta: Multi, poly: &XiPolynomial) {
        let cur = self.jet(&beta);
        self.set_jet(beta, cur.add(poly));
    }

    /// Jet within the declared depth; absent entries are zero.
    pub fn jet(&self, beta: &Multi) -> XiPolynomial {
        self.jets
            .get(beta)
            .cloned()
            .unwrap_or_else(|| XiPolynomial::zero(self.dim, self.side))
    }

    /// Value at x₀ (the zero jet).
    pub fn value(&self) -> XiPolynomial {
        self.jet(&Multi::zero(self.dim))
    }

    pub fn jets(&self) -> impl Iterator<Item = (&Multi, &XiPolynomial)> {
        self.jets.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.jets.is_empty()
    }

    pub fn is_flat(&self) -> bool {
        self.jets.keys().all(|b| b.is_zero())
    }

    pub fn scale(&self, z: Complex64) -> SymbolTerm {
        let mut out = SymbolTerm::new(self.dim, self.side, self.degree, self.inv_power);
        for (b, p) in &self.jets {
            out.set_jet(b.clone(), p.scale(z));
        }
        out
    }

    /// Raises the inverse power by `dq`, multiplying every jet by `(|ξ|²)^dq`
    /// so the represented value is unchanged.
    pub fn raise_inv_power(&self, dq: u32) -> SymbolTerm {
        if dq == 0 {
            return self.clone();
        }
        let mut norm_pow = XiPolynomial::constant(self.dim, SquareMatrix::identity(self.side));
        let norm = XiPolynomial::xi_norm_sq(self.dim, self.side);
        for _ in 0..dq {
            norm_pow = norm_pow.mul(&norm);
        }
        let mut out = SymbolTerm::new(self.dim, self.side, self.degree, self.inv_power + dq);
        for (b, p) in &self.jets {
            out.set_jet(b.clone(), p.mul(&norm_pow));
        }
        out
    }

    /// ∂/∂ξ_axis of this piece. `|ξ|^{-2q}` differentiates to
    /// `-2q·ξ_axis·|ξ|^{-2(q+1)}`, so the result is a sum of at most two
    /// pieces, both of degree one lower.
    pub fn dxi(&self, axis: usize) -> Vec<SymbolTerm> {
        let mut out = Vec::new();
        let mut numerator = SymbolTerm::new(self.dim, self.side, self.degree - 1, self.inv_power);
        for (b, p) in &self.jets {
            numerator.set_jet(b.clone(), p.dxi(axis));
        }
        if !numerator.is_zero() {
            out.push(numerator);
        }
        if self.inv_power > 0 {
            let factor = XiPolynomial::monomial(
                Multi::unit(self.dim, axis),
                SquareMatrix::identity(self.side)
                    .scale(Complex64::new(-2.0 * self.inv_power as f64, 0.0)),
            );
            let mut chain = SymbolTerm::new(self.dim, self.side, self.degree - 1, self.inv_power + 1);
            for (b, p) in &self.jets {
                chain.set_jet(b.clone(), p.mul(&factor));
            }
            if !chain.is_zero() {
                out.push(chain);
            }
        }
        out
    }

    /// Repeated ξ-derivative by a multi-index.
    pub fn dxi_multi(&self, alpha: &Multi) -> Vec<SymbolTerm> {
        let mut pieces = vec![self.clone()];
        for axis in 0..alpha.dim() {
            for _ in 0..alpha.get(axis) {
                pieces = pieces.iter().flat_map(|t| t.dxi(axis)).collect();
                if pieces.is_empty() {
                    return pieces;
                }
            }
        }
        pieces
    }

    pub fn mul_matrix_left(&self, m: &SquareMatrix) -> SymbolTerm {
        let mut out = SymbolTerm::new(self.dim, self.side, self.degree, self.inv_power);
        for (b, p) in &self.jets {
            out.set_jet(b.clone(), p.mul_matrix_left(m));
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.jets.values().map(|p| p.max_abs()).fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// pointwise jets of a scalar function
// ---------------------------------------------------------------------------

/// Jets of a smooth scalar function at x₀: `jets[β] = ∂^β f(x₀)`.
/// Entries within the depth default to zero; beyond the depth they are
/// unknown.
#[derive(Clone, Debug)]
pub struct FunctionJets {
    dim: usize,
    depth: u32,
    jets: BTreeMap<Multi, f64>,
}

impl FunctionJets {
    pub fn new(dim: usize, depth: u32) -> Self {
        FunctionJets {
            dim,
            depth,
            jets: BTreeMap::new(),
        }
    }

    /// Depth-2 jets from a gradient and a (symmetric) Hessian.
    pub fn from_grad_hessian(f1: &[f64], f2: &[Vec<f64>]) -> Self {
        let dim = f1.len();
        let mut f = FunctionJets::new(dim, 2);
        for (j, &v) in f1.iter().enumerate() {
            f.set(Multi::unit(dim, j), v);
        }
        for j in 0..dim {
            for l in j..dim {
                f.set(Multi::unit(dim, j).add(&Multi::unit(dim, l)), f2[j][l]);
            }
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn set(&mut self, beta: Multi, value: f64) {
        assert!(beta.degree() <= self.depth, "jet beyond declared depth");
        if value == 0.0 {
            self.jets.remove(&beta);
        } else {
            self.jets.insert(beta, value);
        }
    }

    /// ∂^β f(x₀), or a jet-depth error beyond the declared depth.
    pub fn derivative(&self, beta: &Multi) -> Result<f64> {
        if beta.degree() > self.depth {
            return Err(Error::JetDepth {
                what: "function jets",
                need: beta.degree(),
                have: self.depth,
            });
        }
        Ok(self.jets.get(beta).copied().unwrap_or(0.0))
    }
}

// ---------------------------------------------------------------------------
// symbols
// ---------------------------------------------------------------------------

/// Finite sum of homogeneous pieces, at most one per degree, all degrees
/// ≤ `order`. `jet_depth` declares how deep the x-jets of every piece are
/// known.
#[derive(Clone, Debug)]
pub struct Symbol {
    dim: usize,
    side: usize,
    order: i32,
    jet_depth: u32,
    terms: BTreeMap<i32, SymbolTerm>,
}

impl Symbol {
    pub fn new(dim: usize, side: usize, order: i32, jet_depth: u32) -> Self {
        Symbol {
            dim,
            side,
            order,
            jet_depth,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize, side: usize, jet_depth: u32) -> Self {
        let mut s = Symbol::new(dim, side, 0, jet_depth);
        s.insert(SymbolTerm::with_value(
            dim,
            side,
            0,
            0,
            XiPolynomial::constant(dim, SquareMatrix::identity(side)),
        ));
        s
    }

    /// Order-0 symbol with constant matrix value (no x-dependence).
    pub fn from_matrix(dim: usize, m: SquareMatrix, jet_depth: u32) -> Self {
        let side = m.side();
        let mut s = Symbol::new(dim, side, 0, jet_depth);
        s.insert(SymbolTerm::with_value(
            dim,
            side,
            0,
            0,
            XiPolynomial::constant(dim, m),
        ));
        s
    }

    /// Multiplication operator by a scalar function: order-0 symbol whose
    /// x-jets are the function's jets times the identity matrix. The value
    /// at x₀ itself is irrelevant for commutators and defaults to zero
    /// unless present in `f`.
    pub fn multiplication_operator(side: usize, f: &FunctionJets) -> Self {
        let dim = f.dim();
        let mut term = SymbolTerm::new(dim, side, 0, 0);
        for (beta, &v) in &f.jets {
            term.set_jet(
                beta.clone(),
                XiPolynomial::constant(dim, SquareMatrix::identity(side).scale(Complex64::new(v, 0.0))),
            );
        }
        let mut s = Symbol::new(dim, side, 0, f.depth());
        s.insert(term);
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn jet_depth(&self) -> u32 {
        self.jet_depth
    }

    pub fn term(&self, degree: i32) -> Option<&SymbolTerm> {
        self.terms.get(&degree)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &SymbolTerm)> {
        self.terms.iter()
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.terms.keys().copied().collect()
    }

    pub fn highest_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn lowest_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_flat(&self) -> bool {
        self.terms.values().all(|t| t.is_flat())
    }

    /// Merges a piece into the slot of its degree, raising to a common
    /// `|ξ|⁻²` power when the slot is occupied.
    pub fn insert(&mut self, term: SymbolTerm) {
        debug_assert_eq!(term.dim, self.dim);
        debug_assert_eq!(term.side, self.side);
        if term.is_zero() {
            return;
        }
        let degree = term.degree;
        match self.terms.remove(&degree) {
            None => {
                self.terms.insert(degree, term);
            }
            Some(existing) => {
                let q = existing.inv_power.max(term.inv_power);
                let a = existing.raise_inv_power(q - existing.inv_power);
                let b = term.raise_inv_power(q - term.inv_power);
                let mut merged = SymbolTerm::new(self.dim, self.side, degree, q);
                for (beta, p) in a.jets.iter().chain(b.jets.iter()) {
                    merged.add_jet(beta.clone(), p);
                }
                if !merged.is_zero() {
                    self.terms.insert(degree, merged);
                }
            }
        }
    }

    pub fn add(&self, other: &Symbol) -> Symbol {
        let mut out = Symbol::new(
            self.dim,
            self.side,
            self.order.max(other.order),
            self.jet_depth.min(other.jet_depth),
        );
        for t in self.terms.values().chain(other.terms.values()) {
            out.insert(t.clone());
        }
        out
    }

    pub fn scale(&self, z: Complex64) -> Symbol {
        let mut out = Symbol::new(self.dim, self.side, self.order, self.jet_depth);
        for t in self.terms.values() {
            out.insert(t.scale(z));
        }
        out
    }

    pub fn sub(&self, other: &Symbol) -> Symbol {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn truncate_below(&mut self, lowest: i32) {
        self.terms.retain(|&d, _| d >= lowest);
    }

    /// ∂/∂ξ_axis applied to every piece.
    pub fn d_xi(&self, axis: usize) -> Symbol {
        let mut out = Symbol::new(self.dim, self.side, self.order - 1, self.jet_depth);
        for t in self.terms.values() {
            for piece in t.dxi(axis) {
                out.insert(piece);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// products and composition
// ---------------------------------------------------------------------------

/// Pointwise product of symbols (matrix order preserved); x-jets combine by
/// the Leibniz rule up to the smaller declared depth.
pub fn multiply(a: &Symbol, b: &Symbol) -> Result<Symbol> {
    if a.dim != b.dim {
        return Err(Error::LengthMismatch {
            what: "symbol dimension",
            expected: a.dim,
            got: b.dim,
        });
    }
    let depth = a.jet_depth.min(b.jet_depth);
    let mut out = Symbol::new(a.dim, a.side, a.order + b.order, depth);
    for ta in a.terms.values() {
        for tb in b.terms.values() {
            let mut prod = SymbolTerm::new(
                a.dim,
                a.side,
                ta.degree + tb.degree,
                ta.inv_power + tb.inv_power,
            );
            for beta in multis_up_to(a.dim, depth) {
                let mut acc = XiPolynomial::zero(a.dim, a.side);
                for (b1, b2) in beta.splits() {
                    let pa = ta.jet(&b1);
                    let pb = tb.jet(&b2);
                    if pa.is_zero() || pb.is_zero() {
                        continue;
                    }
                    acc = acc.add(&pa.mul(&pb).scale(Complex64::new(beta.binom_with(&b1), 0.0)));
                }
                prod.set_jet(beta, acc);
            }
            out.insert(prod);
        }
    }
    Ok(out)
}

/// Symbol of the operator composition `A∘B`:
/// `σ(AB) ~ Σ_α ((−i)^{|α|}/α!) ∂_ξ^α σ(A) · ∂ₓ^α σ(B)`,
/// exact for all degrees ≥ `lowest_degree`, with result jets computed to
/// `out_jet_depth`. Demanding jets beyond a factor's declared depth is an
/// explicit error.
pub fn compose_with_jets(
    a: &Symbol,
    b: &Symbol,
    lowest_degree: i32,
    out_jet_depth: u32,
) -> Result<Symbol> {
    if a.dim != b.dim {
        return Err(Error::LengthMismatch {
            what: "symbol dimension",
            expected: a.dim,
            got: b.dim,
        });
    }
    if out_jet_depth > a.jet_depth {
        return Err(Error::JetDepth {
            what: "composition left factor",
            need: out_jet_depth,
            have: a.jet_depth,
        });
    }
    let dim = a.dim;
    let out_betas = multis_up_to(dim, out_jet_depth);
    let mut out = Symbol::new(dim, a.side, a.order + b.order, out_jet_depth);

    for ta in a.terms.values() {
        for tb in b.terms.values() {
            let budget = ta.degree + tb.degree - lowest_degree;
            if budget < 0 {
                continue;
            }
            for alpha in multis_up_to(dim, budget as u32) {
                let pieces = ta.dxi_multi(&alpha);
                if pieces.is_empty() {
                    continue;
                }
                let coef = MINUS_I.powu(alpha.degree()) / alpha.factorial();
                for beta in &out_betas {
                    for (b1, b2) in beta.splits() {
                        let need = b2.add(&alpha);
                        if need.degree() > b.jet_depth {
                            // the ∂_ξ^α piece of A is nonzero here, so the
                            // missing jet of B genuinely matters
                            return Err(Error::JetDepth {
                                what: "composition right factor",
                                need: need.degree(),
                                have: b.jet_depth,
                            });
                        }
                        let pb = tb.jet(&need);
                        if pb.is_zero() {
                            continue;
                        }
                        let w = coef * beta.binom_with(&b1);
                        for piece in &pieces {
                            let pa = piece.jet(&b1);
                            if pa.is_zero() {
                                continue;
                            }
                            let mut contrib = SymbolTerm::new(
                                dim,
                                a.side,
                                piece.degree + tb.degree,
                                piece.inv_power + tb.inv_power,
                            );
                            contrib.set_jet(beta.clone(), pa.mul(&pb).scale(w));
                            out.insert(contrib);
                        }
                    }
                }
            }
        }
    }
    out.truncate_below(lowest_degree);
    Ok(out)
}

/// Composition with result jets at the evaluation point only.
pub fn compose(a: &Symbol, b: &Symbol, lowest_degree: i32) -> Result<Symbol> {
    compose_with_jets(a, b, lowest_degree, 0)
}

/// Symbol of the commutator `[S, f]` with a scalar function, computed by the
/// graded formula
/// `σ_{k−j}[S,f] = Σ_{|β|=1}^{j} (D_x^β f / β!) ∂_ξ^β σ_{k−(j−|β|)}(S)`,
/// for all output degrees ≥ `lowest_degree`, with jets to `out_jet_depth`.
pub fn commutator_with_function(
    s: &Symbol,
    f: &FunctionJets,
    lowest_degree: i32,
    out_jet_depth: u32,
) -> Result<Symbol> {
    if f.dim() != s.dim {
        return Err(Error::LengthMismatch {
            what: "function dimension",
            expected: s.dim,
            got: f.dim(),
        });
    }
    if out_jet_depth > s.jet_depth {
        return Err(Error::JetDepth {
            what: "commutator source symbol",
            need: out_jet_depth,
            have: s.jet_depth,
        });
    }
    let dim = s.dim;
    let out_betas = multis_up_to(dim, out_jet_depth);
    let mut out = Symbol::new(dim, s.side, s.order - 1, out_jet_depth);

    for ts in s.terms.values() {
        // output degree = ts.degree - |β|
        let max_beta = ts.degree - lowest_degree;
        if max_beta < 1 {
            continue;
        }
        for beta in multis_up_to(dim, max_beta as u32) {
            if beta.degree() == 0 {
                continue;
            }
            let pieces = ts.dxi_multi(&beta);
            if pieces.is_empty() {
                continue;
            }
            // D_x^β f = (−i)^{|β|} ∂^β f
            let dcoef = MINUS_I.powu(beta.degree()) / beta.factorial();
            for delta in &out_betas {
                for (d1, d2) in delta.splits() {
                    let fd = f.derivative(&beta.add(&d1))?;
                    if fd == 0.0 {
                        continue;
                    }
                    let w = dcoef * fd * delta.binom_with(&d1);
                    for piece in &pieces {
                        let pj = piece.jet(&d2);
                        if pj.is_zero() {
                            continue;
                        }
                        let mut contrib =
                            SymbolTerm::new(dim, s.side, piece.degree, piece.inv_power);
                        contrib.set_jet(delta.clone(), pj.scale(w));
                        out.insert(contrib);
                    }
                }
            }
        }
    }
    out.truncate_below(lowest_degree);
    Ok(out)
}

/// The degree `−n` piece of `σ([S,f][S,h])` by the direct multi-index sum:
/// over `|α′|+|α″|+|β|+|δ|+i+j = n+2k` with `|β| ≥ 1`, `|δ| ≥ 1`,
///
/// `Σ (D_x^β f · D_x^{α′+δ} h / (α′!·α″!·β!·δ!)) ·
///    ∂_ξ^{α′+α″+β}(σ_{k−i}) · ∂_ξ^δ(D_x^{α″} σ_{k−j})`,
///
/// where `k` is the order of `S`. Pieces of `S` that are not stored are
/// zero; jets demanded beyond the declared depths raise errors.
pub fn commutator_product_symbol(
    s: &Symbol,
    f: &FunctionJets,
    h: &FunctionJets,
    k: i32,
    n: usize,
) -> Result<SymbolTerm> {
    assert!(2 * k + n as i32 >= 2, "degree -n piece requires 2k + n >= 2");
    let dim = s.dim;
    let mut out = SymbolTerm::new(dim, s.side, -(n as i32), 0);

    let total = n as i32 + 2 * k;
    for (d1, t1) in &s.terms {
        let i = k - d1; // σ_{k−i} stored at degree d1
        for (d2, t2) in &s.terms {
            let j = k - d2;
            let deriv_budget = total - i - j;
            if deriv_budget < 2 {
                continue; // |β| ≥ 1 and |δ| ≥ 1 unreachable
            }
            for bdeg in 1..=(deriv_budget - 1) as u32 {
                for ddeg in 1..=(deriv_budget as u32 - bdeg) {
                    let rest = deriv_budget as u32 - bdeg - ddeg;
                    for a1deg in 0..=rest {
                        let a2deg = rest - a1deg;
                        for beta in multis_of_degree(dim, bdeg) {
                            for alpha1 in multis_of_degree(dim, a1deg) {
                                for alpha2 in multis_of_degree(dim, a2deg) {
                                    let dxi_first = beta.add(&alpha1).add(&alpha2);
                                    let first_pieces = t1.dxi_multi(&dxi_first);
                                    if first_pieces.is_empty() {
                                        continue;
                                    }
                                    for delta in multis_of_degree(dim, ddeg) {
                                        let fd = f.derivative(&beta)?;
                                        let hd = h.derivative(&alpha1.add(&delta))?;
                                        if fd == 0.0 || hd == 0.0 {
                                            continue;
                                        }
                                        if alpha2.degree() > s.jet_depth {
                                            return Err(Error::JetDepth {
                                                what: "product-symbol source jets",
                                                need: alpha2.degree(),
                                                have: s.jet_depth,
                                            });
                                        }
                                        let sx = t2.jet(&alpha2);
                                        if sx.is_zero() {
                                            continue;
                                        }
                                        let second_term = SymbolTerm::with_value(
                                            dim,
                                            s.side,
                                            *d2,
                                            t2.inv_power,
                                            sx,
                                        );
                                        let second_pieces = second_term.dxi_multi(&delta);
                                        if second_pieces.is_empty() {
                                            continue;
                                        }
                                        // D_x factors carry (−i)^{|·|}
                                        let scalar = MINUS_I.powu(bdeg)
                                            * MINUS_I.powu(a1deg + ddeg)
                                            * MINUS_I.powu(a2deg)
                                            * fd
                                            * hd
                                            / (alpha1.factorial()
                                                * alpha2.factorial()
                                                * beta.factorial()
                                                * delta.factorial());
                                        for p1 in &first_pieces {
                                            for p2 in &second_pieces {
                                                debug_assert_eq!(
                                                    p1.degree + p2.degree,
                                                    -(n as i32)
                                                );
                                                let prod = p1.value().mul(&p2.value());
                                                if prod.is_zero() {
                                                    continue;
                                                }
                                                let mut contrib = SymbolTerm::with_value(
                                                    dim,
                                                    s.side,
                                                    -(n as i32),
                                                    p1.inv_power + p2.inv_power,
                                                    prod.scale(scalar),
                                                );
                                                let q =
                                                    contrib.inv_power.max(out.inv_power);
                                                contrib =
                                                    contrib.raise_inv_power(q - contrib.inv_power);
                                                out = out.raise_inv_power(q - out.inv_power);
                                                out.add_jet(
                                                    Multi::zero(dim),
                                                    &contrib.value(),
                                                );
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Left parametrix of an order-2 symbol with scalar leading part `|ξ|²·Id`:
/// returns `B` of order `−2` with `compose(S, B) = 1` exact down to degree
/// `−depth`. The source symbol must be x-flat (the normal-coordinate model
/// has no curved inverse-power jets).
pub fn parametrix_inverse(s: &Symbol, depth: u32) -> Result<Symbol> {
    if s.order != 2 {
        return Err(Error::NonScalarLeading);
    }
    let leading = s.term(2).ok_or(Error::NonScalarLeading)?;
    let want = XiPolynomial::xi_norm_sq(s.dim, s.side);
    if leading.inv_power != 0 || !leading.is_flat() || leading.value() != want {
        return Err(Error::NonScalarLeading);
    }
    if !s.is_flat() {
        return Err(Error::JetDepth {
            what: "parametrix of a non-flat symbol",
            need: 1,
            have: 0,
        });
    }

    let mut b = Symbol::new(s.dim, s.side, -2, s.jet_depth);
    b.insert(SymbolTerm::with_value(
        s.dim,
        s.side,
        -2,
        1,
        XiPolynomial::constant(s.dim, SquareMatrix::identity(s.side)),
    ));

    for k in 1..=depth {
        // residual of compose(s, b) at degree −k determines the next piece
        let r = compose(s, &b, -(k as i32))?;
        if let Some(res) = r.term(-(k as i32)) {
            let piece = SymbolTerm::with_value(
                s.dim,
                s.side,
                -2 - k as i32,
                res.inv_power + 1,
                res.value().scale(Complex64::new(-1.0, 0.0)),
            );
            b.insert(piece);
        }
    }
    Ok(b)
}
