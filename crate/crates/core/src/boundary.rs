//! Half-space calculus on the boundary cotangent chart: symbols restricted
//! to `|ξ′| = 1` become matrix coefficients × monomials in ξ′ × scalar
//! rational functions of ξₙ whose poles sit at `ξₙ = ±i` only (the roots of
//! `1 + ξₙ²`, which is what `|ξ|²` restricts to). The module provides exact
//! partial fractions, the `π⁺` projection (extraction of the principal part
//! at `+i`), ξₙ-differentiation and full-line ξₙ-integrals evaluated by
//! residues at `+i`.

use crate::matrix::SquareMatrix;
use crate::symbol::{Multi, Symbol};
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

// ---------------------------------------------------------------------------
// scalar polynomials in ξₙ (ascending coefficients)
// ---------------------------------------------------------------------------

type Poly = Vec<Complex64>;

fn poly_trim(mut p: Poly) -> Poly {
    while matches!(p.last(), Some(z) if z.re == 0.0 && z.im == 0.0) {
        p.pop();
    }
    p
}

fn poly_add(a: &[Complex64], b: &[Complex64]) -> Poly {
    let mut out = vec![ZERO; a.len().max(b.len())];
    for (i, z) in a.iter().enumerate() {
        out[i] += z;
    }
    for (i, z) in b.iter().enumerate() {
        out[i] += z;
    }
    poly_trim(out)
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_trim(out)
}

fn poly_scale(a: &[Complex64], z: Complex64) -> Poly {
    poly_trim(a.iter().map(|c| c * z).collect())
}

fn poly_diff(a: &[Complex64]) -> Poly {
    if a.len() <= 1 {
        return Vec::new();
    }
    poly_trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Complex64::new(k as f64, 0.0))
            .collect(),
    )
}

fn poly_eval(a: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = ZERO;
    for c in a.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Long division a = q·b + r with deg r < deg b.
fn poly_divmod(a: &[Complex64], b: &[Complex64]) -> (Poly, Poly) {
    let b = poly_trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = poly_trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![ZERO; rem.len() - b.len() + 1];
    let lead = *b.last().unwrap();
    while rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let c = *rem.last().unwrap() / lead;
        quot[k] = c;
        for (i, bz) in b.iter().enumerate() {
            rem[k + i] -= c * bz;
        }
        // the top coefficient cancels by construction
        rem.pop();
        rem = poly_trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    (poly_trim(quot), rem)
}

/// `(z − i)^p (z + i)^q` expanded.
fn denominator_poly(p: u32, q: u32) -> Poly {
    let mut out = vec![ONE];
    for _ in 0..p {
        out = poly_mul(&out, &[-I, ONE]);
    }
    for _ in 0..q {
        out = poly_mul(&out, &[I, ONE]);
    }
    out
}

// ---------------------------------------------------------------------------
// rational functions of ξₙ with poles at ±i
// ---------------------------------------------------------------------------

/// `num(ξₙ) / ((ξₙ − i)^p (ξₙ + i)^q)`. The denominator powers are part of
/// the type, so poles away from ±i cannot be represented at all.
#[derive(Clone, PartialEq, Debug)]
pub struct XiRational {
    num: Poly,
    pole_plus: u32,
    pole_minus: u32,
}

/// Canonical decomposition: polynomial part plus principal parts at ±i.
/// `plus[k-1]` multiplies `(ξₙ − i)^{-k}`, `minus[k-1]` multiplies
/// `(ξₙ + i)^{-k}`.
#[derive(Clone, PartialEq, Debug)]
pub struct PartialFractions {
    pub poly: Vec<Complex64>,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
}

impl XiRational {
    pub fn new(num: Vec<Complex64>, pole_plus: u32, pole_minus: u32) -> Self {
        let num = poly_trim(num);
        if num.is_empty() {
            return XiRational {
                num,
                pole_plus: 0,
                pole_minus: 0,
            };
        }
        XiRational {
            num,
            pole_plus,
            pole_minus,
        }
    }

    pub fn zero() -> Self {
        XiRational::new(Vec::new(), 0, 0)
    }

    pub fn constant(z: Complex64) -> Self {
        XiRational::new(vec![z], 0, 0)
    }

    /// ξₙ^k over (ξₙ−i)^p (ξₙ+i)^q.
    pub fn monomial_over(k: u32, pole_plus: u32, pole_minus: u32) -> Self {
        let mut num = vec![ZERO; k as usize + 1];
        num[k as usize] = ONE;
        XiRational::new(num, pole_plus, pole_minus)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn num(&self) -> &[Complex64] {
        &self.num
    }

    pub fn poles(&self) -> (u32, u32) {
        (self.pole_plus, self.pole_minus)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        XiRational::new(poly_scale(&self.num, z), self.pole_plus, self.pole_minus)
    }

    /// Same value with denominator powers raised to (p, q).
    fn raised(&self, p: u32, q: u32) -> Self {
        assert!(p >= self.pole_plus && q >= self.pole_minus);
        let extra = denominator_poly(p - self.pole_plus, q - self.pole_minus);
        XiRational::new(poly_mul(&self.num, &extra), p, q)
    }

    pub fn add(&self, other: &XiRational) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let p = self.pole_plus.max(other.pole_plus);
        let q = self.pole_minus.max(other.pole_minus);
        let a = self.raised(p, q);
        let b = other.raised(p, q);
        XiRational::new(poly_add(&a.num, &b.num), p, q)
    }

    pub fn mul(&self, other: &XiRational) -> Self {
        XiRational::new(
            poly_mul(&self.num, &other.num),
            self.pole_plus + other.pole_plus,
            self.pole_minus + other.pole_minus,
        )
    }

    /// Exact derivative d/dξₙ, via the quotient rule:
    /// `d[N/D] = (N'·D − N·D')/D²` with `D'/D = p/(ξₙ−i) + q/(ξₙ+i)`.
    /// Absent pole factors stay absent.
    pub fn d(&self) -> Self {
        let (p, q) = (self.pole_plus, self.pole_minus);
        if self.is_zero() {
            return XiRational::zero();
        }
        if p == 0 && q == 0 {
            return XiRational::new(poly_diff(&self.num), 0, 0);
        }
        let mut dnum = poly_diff(&self.num);
        if p > 0 {
            dnum = poly_mul(&dnum, &[-I, ONE]);
        }
        if q > 0 {
            dnum = poly_mul(&dnum, &[I, ONE]);
        }
        // N times p·(ξₙ+i) + q·(ξₙ−i), dropping the factor for an absent pole
        let corr: Poly = if p > 0 && q > 0 {
            poly_add(
                &poly_scale(&[I, ONE], Complex64::new(p as f64, 0.0)),
                &poly_scale(&[-I, ONE], Complex64::new(q as f64, 0.0)),
            )
        } else if p > 0 {
            vec![Complex64::new(p as f64, 0.0)]
        } else {
            vec![Complex64::new(q as f64, 0.0)]
        };
        let num = poly_add(&dnum, &poly_scale(&poly_mul(&self.num, &corr), -ONE));
        XiRational::new(
            num,
            if p > 0 { p + 1 } else { 0 },
            if q > 0 { q + 1 } else { 0 },
        )
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut v = poly_eval(&self.num, z);
        if self.pole_plus > 0 {
            v /= (z - I).powu(self.pole_plus);
        }
        if self.pole_minus > 0 {
            v /= (z + I).powu(self.pole_minus);
        }
        v
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    /// Exact canonical decomposition; recombining reproduces the input.
    pub fn partial_fractions(&self) -> PartialFractions {
        let den = denominator_poly(self.pole_plus, self.pole_minus);
        let (poly, rem) = poly_divmod(&self.num, &den);
        let plus = principal_coeffs(&rem, self.pole_plus, I, self.pole_minus, -I);
        let minus = principal_coeffs(&rem, self.pole_minus, -I, self.pole_plus, I);
        PartialFractions { poly, plus, minus }
    }

    /// Principal part at +i as a rational function again.
    pub fn pi_plus(&self) -> XiRational {
        let pf = self.partial_fractions();
        from_principal(&pf.plus, I)
    }

    /// Principal part at −i.
    pub fn pi_minus(&self) -> XiRational {
        let pf = self.partial_fractions();
        from_principal(&pf.minus, -I)
    }

    pub fn poly_part(&self) -> XiRational {
        XiRational::new(self.partial_fractions().poly, 0, 0)
    }

    /// Residue at ξₙ = +i, by exact symbolic differentiation:
    /// `(1/(p−1)!)·d^{p−1}[num/(ξₙ+i)^q]` at `ξₙ = i`.
    pub fn residue_at_plus_i(&self) -> Complex64 {
        if self.pole_plus == 0 {
            return ZERO;
        }
        derivative_at(&self.num, self.pole_minus, -I, self.pole_plus - 1, I)
    }

    /// Whether the function decays at least like |ξₙ|⁻² (the precondition
    /// for closing the full-line integral in the upper half-plane).
    pub fn decays_quadratically(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let deg = self.num.len() as i64 - 1;
        let den = (self.pole_plus + self.pole_minus) as i64;
        if deg <= den - 2 {
            return true;
        }
        // representation may be reducible; decide from the decomposition
        let pf = self.partial_fractions();
        if !pf.poly.is_empty() {
            return false;
        }
        let p1 = pf.plus.first().copied().unwrap_or(ZERO);
        let m1 = pf.minus.first().copied().unwrap_or(ZERO);
        let scale = self
            .num
            .iter()
            .map(|z| z.norm())
            .fold(1e-300, f64::max);
        (p1 + m1).norm() <= 1e-10 * scale.max(1.0)
    }

    /// Full-line integral `∫_{-∞}^{∞} dξₙ` computed as `2πi` times the
    /// residue at `+i`; errors when the integrand does not decay.
    pub fn contour_integral(&self) -> Result<Complex64> {
        if !self.decays_quadratically() {
            return Err(Error::NonDecayingIntegrand);
        }
        Ok(Complex64::new(0.0, 2.0 * std::f64::consts::PI) * self.residue_at_plus_i())
    }
}

impl PartialFractions {
    /// Rebuilds the rational function (for recombination checks).
    pub fn reconstruct(&self) -> XiRational {
        let mut out = XiRational::new(self.poly.clone(), 0, 0);
        out = out.add(&from_principal(&self.plus, I));
        out = out.add(&from_principal(&self.minus, -I));
        out
    }
}

/// Σ_k coeffs[k−1]/(z − at)^k as a single rational function.
fn from_principal(coeffs: &[Complex64], at: Complex64) -> XiRational {
    let p = coeffs.len() as u32;
    if p == 0 {
        return XiRational::zero();
    }
    // num = Σ coeffs[k−1]·(z − at)^{p−k}
    let mut num: Poly = Vec::new();
    let base = [-at, ONE];
    for (k, c) in coeffs.iter().enumerate() {
        let mut t = vec![*c];
        for _ in 0..(p as usize - (k + 1)) {
            t = poly_mul(&t, &base);
        }
        num = poly_add(&num, &t);
    }
    if at == I {
        XiRational::new(num, p, 0)
    } else {
        XiRational::new(num, 0, p)
    }
}

/// Coefficients of the principal part at `at` (pole order `p`), the other
/// pole being `(other, other_q)`: `c_k = G^{(p−k)}(at)/(p−k)!` for
/// `G = num/(z−other)^{other_q}`, k = 1..p, returned as `[c_1, …, c_p]`.
fn principal_coeffs(
    num: &[Complex64],
    p: u32,
    at: Complex64,
    other_q: u32,
    other: Complex64,
) -> Vec<Complex64> {
    if p == 0 {
        return Vec::new();
    }
    let mut out = vec![ZERO; p as usize];
    for k in 1..=p {
        out[k as usize - 1] = derivative_at(num, other_q, other, p - k, at)
            / crate::symbol::Multi::from_slice(&[(p - k) as u8]).factorial();
    }
    out
}

/// `d^order/dz^order [num(z)/(z − pole)^q]` evaluated at `at`, divided by
/// `order!` at the single call site that needs the residue (the residue call
/// passes the division itself). Here: raw derivative divided by (p−1)! for
/// the residue path, so this helper returns the derivative divided by
/// `order!` — i.e. the Taylor coefficient.
fn derivative_at(
    num: &[Complex64],
    q: u32,
    pole: Complex64,
    order: u32,
    at: Complex64,
) -> Complex64 {
    // iterate d/dz on (num, q): (num'·(z−pole) − q·num) / (z−pole)^{q+1}
    let mut cur = poly_trim(num.to_vec());
    let mut qq = q;
    for _ in 0..order {
        if qq == 0 {
            cur = poly_diff(&cur);
        } else {
            let a = poly_mul(&poly_diff(&cur), &[-pole, ONE]);
            let b = poly_scale(&cur, Complex64::new(qq as f64, 0.0));
            cur = poly_add(&a, &poly_scale(&b, -ONE));
            qq += 1;
        }
    }
    let mut v = poly_eval(&cur, at);
    if qq > 0 {
        v /= (at - pole).powu(qq);
    }
    v / Multi::from_slice(&[order as u8]).factorial()
}

// ---------------------------------------------------------------------------
// matrix-coefficient boundary integrands
// ---------------------------------------------------------------------------

/// Boundary-calculus object: finite sum of
/// coefficient × ξ′-monomial × rational-in-ξₙ terms.
#[derive(Clone, Debug)]
pub struct PlaneRational {
    dim: usize,
    side: usize,
    terms: Vec<PlaneTerm>,
}

#[derive(Clone, Debug)]
pub struct PlaneTerm {
    pub coeff: SquareMatrix,
    pub mono: Multi,
    pub rat: XiRational,
}

impl PlaneRational {
    pub fn new(dim: usize, side: usize) -> Self {
        PlaneRational {
            dim,
            side,
            terms: Vec::new(),
        }
    }

    /// Ambient dimension n; monomials run over ξ₁…ξ_{n−1}.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn terms(&self) -> &[PlaneTerm] {
        &self.terms
    }

    pub fn push(&mut self, coeff: SquareMatrix, mono: Multi, rat: XiRational) {
        debug_assert_eq!(mono.dim(), self.dim - 1);
        if coeff.is_zero() || rat.is_zero() {
            return;
        }
        self.terms.push(PlaneTerm { coeff, mono, rat });
    }

    /// Restriction of a symbol to the boundary chart on `|ξ′| = 1`:
    /// `|ξ|² ↦ 1 + ξₙ² = (ξₙ−i)(ξₙ+i)` and numerator monomials split into
    /// their tangential and normal parts. Denominators are powers of `|ξ|²`
    /// by construction of `Symbol`, so poles land at ±i only. Uses the value
    /// jets at the evaluation point.
    pub fn restrict_to_boundary(s: &Symbol) -> Self {
        let n = s.dim();
        let mut out = PlaneRational::new(n, s.side());
        for (_, term) in s.terms() {
            let q = term.inv_power();
            for (alpha, coeff) in term.value().terms() {
                let xn_pow = alpha.get(n - 1) as u32;
                let mut tangential = vec![0u8; n - 1];
                for axis in 0..n - 1 {
                    tangential[axis] = alpha.get(axis);
                }
                out.push(
                    coeff.clone(),
                    Multi::from_slice(&tangential),
                    XiRational::monomial_over(xn_pow, q, q),
                );
            }
        }
        out
    }

    fn map_rat(&self, f: impl Fn(&XiRational) -> XiRational) -> Self {
        let mut out = PlaneRational::new(self.dim, self.side);
        for t in &self.terms {
            out.push(t.coeff.clone(), t.mono.clone(), f(&t.rat));
        }
        out
    }

    /// Keeps exactly the principal parts at ξₙ = +i.
    pub fn pi_plus(&self) -> Self {
        self.map_rat(|r| r.pi_plus())
    }

    /// Principal parts at ξₙ = −i.
    pub fn pi_minus(&self) -> Self {
        self.map_rat(|r| r.pi_minus())
    }

    /// Polynomial parts.
    pub fn poly_part(&self) -> Self {
        self.map_rat(|r| r.poly_part())
    }

    /// Exact ∂/∂ξₙ.
    pub fn d_xi_n(&self) -> Self {
        self.map_rat(|r| r.d())
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let mut out = PlaneRational::new(self.dim, self.side);
        for t in &self.terms {
            out.push(t.coeff.scale(z), t.mono.clone(), t.rat.clone());
        }
        out
    }

    pub fn add(&self, other: &PlaneRational) -> Self {
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.coeff.clone(), t.mono.clone(), t.rat.clone());
        }
        out
    }

    /// Noncommutative product: matrices multiply in order, ξ′-monomials add,
    /// rationals multiply.
    pub fn mul(&self, other: &PlaneRational) -> Self {
        let mut out = PlaneRational::new(self.dim, self.side);
        for a in &self.terms {
            for b in &other.terms {
                out.push(&a.coeff * &b.coeff, a.mono.add(&b.mono), a.rat.mul(&b.rat));
            }
        }
        out
    }

    /// Matrix trace for each ξ′-monomial, with the ξₙ-rationals summed.
    pub fn trace(&self) -> BTreeMap<Multi, XiRational> {
        let mut out: BTreeMap<Multi, XiRational> = BTreeMap::new();
        for t in &self.terms {
            let tr = t.coeff.trace();
            if tr.norm() == 0.0 {
                continue;
            }
            let contrib = t.rat.scale(tr);
            out.entry(t.mono.clone())
                .and_modify(|r| *r = r.add(&contrib))
                .or_insert(contrib);
        }
        out.retain(|_, r| !r.is_zero());
        out
    }

    /// Groups terms by ξ′-monomial, keeping (coefficient, rational) pairs.
    pub fn grouped(&self) -> BTreeMap<Multi, Vec<(SquareMatrix, XiRational)>> {
        let mut out: BTreeMap<Multi, Vec<(SquareMatrix, XiRational)>> = BTreeMap::new();
        for t in &self.terms {
            out.entry(t.mono.clone())
                .or_default()
                .push((t.coeff.clone(), t.rat.clone()));
        }
        out
    }

    /// Full-line ξₙ-integral by residues: one matrix per ξ′-monomial.
    pub fn contour_integral(&self) -> Result<BTreeMap<Multi, SquareMatrix>> {
        let mut out: BTreeMap<Multi, SquareMatrix> = BTreeMap::new();
        for t in &self.terms {
            let v = t.rat.contour_integral()?;
            let m = t.coeff.scale(v);
            out.entry(t.mono.clone())
                .and_modify(|acc| *acc = &*acc + &m)
                .or_insert(m);
        }
        out.retain(|_, m| !m.is_zero());
        Ok(out)
    }

    /// Pointwise evaluation (numeric-oracle support).
    pub fn eval(&self, xi_prime: &[f64], xn: f64) -> SquareMatrix {
        let mut out = SquareMatrix::zeros(self.side);
        for t in &self.terms {
            let mut w = 1.0;
            for axis in 0..self.dim - 1 {
                w *= xi_prime[axis].powi(t.mono.get(axis) as i32);
            }
            out = &out + &t.coeff.scale(t.rat.eval_real(xn).scale(w));
        }
        out
    }
}

trait ScaleExt {
    fn scale(self, w: f64) -> Complex64;
}
impl ScaleExt for Complex64 {
    fn scale(self, w: f64) -> Complex64 {
        self * Complex64::new(w, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn partial_fraction_basic_vectors() {
        // ξₙ/(1+ξₙ²) = ½/(ξₙ−i) + ½/(ξₙ+i)
        let r = XiRational::monomial_over(1, 1, 1);
        let pf = r.partial_fractions();
        assert!(pf.poly.is_empty());
        assert_eq!(pf.plus, vec![c(0.5, 0.0)]);
        assert_eq!(pf.minus, vec![c(0.5, 0.0)]);

        // 1/(1+ξₙ²) = (−i/2)/(ξₙ−i) + (i/2)/(ξₙ+i)
        let r = XiRational::monomial_over(0, 1, 1);
        let pf = r.partial_fractions();
        assert!(pf.poly.is_empty());
        assert_eq!(pf.plus, vec![c(0.0, -0.5)]);
        assert_eq!(pf.minus, vec![c(0.0, 0.5)]);

        // ξₙ²/(1+ξₙ²) = 1 − 1/(1+ξₙ²)
        let r = XiRational::monomial_over(2, 1, 1);
        let pf = r.partial_fractions();
        assert_eq!(pf.poly, vec![c(1.0, 0.0)]);
        assert_eq!(pf.plus, vec![c(0.0, 0.5)]);
        assert_eq!(pf.minus, vec![c(0.0, -0.5)]);
    }

    #[test]
    fn partial_fraction_recombines() {
        for (k, p, q) in [(0u32, 1u32, 1u32), (1, 1, 1), (3, 2, 2), (5, 3, 3), (2, 3, 1)] {
            let r = XiRational::monomial_over(k, p, q);
            let back = r.partial_fractions().reconstruct();
            for x in [-2.3, -0.7, 0.1, 1.9, 4.2] {
                let a = r.eval_real(x);
                let b = back.eval_real(x);
                assert!((a - b).norm() < 1e-12, "k={k} p={p} q={q} at {x}");
            }
        }
    }

    #[test]
    fn pi_plus_plus_pi_minus_plus_poly_is_identity() {
        for (k, p, q) in [(2u32, 1u32, 1u32), (4, 2, 2), (6, 3, 2)] {
            let r = XiRational::monomial_over(k, p, q);
            let sum = r
                .pi_plus()
                .add(&r.pi_minus())
                .add(&r.poly_part());
            for x in [-1.5, 0.3, 2.7] {
                assert!((sum.eval_real(x) - r.eval_real(x)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pi_plus_idempotent() {
        for (k, p, q) in [(1u32, 1u32, 1u32), (3, 2, 2), (5, 3, 3)] {
            let r = XiRational::monomial_over(k, p, q);
            let once = r.pi_plus();
            let twice = once.pi_plus();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let r = XiRational::new(vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.0, 1.0)], 2, 3);
        let d = r.d();
        for x in [-1.2, 0.4, 2.2] {
            let h = 1e-6;
            let fd = (r.eval_real(x + h) - r.eval_real(x - h)) / c(2.0 * h, 0.0);
            assert!((d.eval_real(x) - fd).norm() < 1e-6);
        }
        // derivative of a constant is zero
        assert!(XiRational::constant(c(3.0, 1.0)).d().is_zero());
    }

    #[test]
    fn derivative_of_inverse_norm_power() {
        // d/dξₙ (1+ξₙ²)^{1−m} = 2(1−m)ξₙ/(1+ξₙ²)^m for m = 3
        let m = 3u32;
        let r = XiRational::monomial_over(0, m - 1, m - 1);
        let d = r.d();
        let expect = XiRational::new(vec![ZERO, c(2.0 * (1.0 - m as f64), 0.0)], m, m);
        for x in [-2.0, -0.5, 0.8, 3.1] {
            assert!((d.eval_real(x) - expect.eval_real(x)).norm() < 1e-13);
        }
    }

    #[test]
    fn contour_arctangent() {
        // ∫ 1/(1+ξₙ²) = π
        let r = XiRational::monomial_over(0, 1, 1);
        let v = r.contour_integral().unwrap();
        assert!((v - c(std::f64::consts::PI, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn contour_rejects_nondecaying() {
        let r = XiRational::monomial_over(1, 1, 1); // ~ 1/ξₙ
        assert!(matches!(
            r.contour_integral(),
            Err(Error::NonDecayingIntegrand)
        ));
        let p = XiRational::monomial_over(2, 1, 1); // has polynomial part
        assert!(p.contour_integral().is_err());
    }

    #[test]
    fn residue_derivative_closed_forms() {
        // d^m[(ξₙ+i)^{−m}]/dξₙ^m at ξₙ=i equals (−1)^m (2m−1)!/(m−1)! (2i)^{−2m},
        // and d^m[ξₙ(ξₙ+i)^{−m}] at i equals (2m−2)!(−i)2^{−2m}/(m−1)!;
        // both via the exact symbolic derivative, m = 1..5.
        let fact = |k: i64| -> f64 { (1..=k).map(|x| x as f64).product() };
        for m in 1u32..=5 {
            let base = XiRational::new(vec![ONE], 0, m);
            let mut d = base.clone();
            for _ in 0..m {
                d = d.d();
            }
            let got = d.eval(I);
            let expect = c(-1.0, 0.0).powu(m) * fact(2 * m as i64 - 1) / fact(m as i64 - 1)
                * (c(0.0, 2.0)).powi(-(2 * m as i32));
            assert!((got - expect).norm() < 1e-14 * expect.norm().max(1.0), "m={m}");

            let base2 = XiRational::new(vec![ZERO, ONE], 0, m);
            let mut d2 = base2.clone();
            for _ in 0..m {
                d2 = d2.d();
            }
            let got2 = d2.eval(I);
            let expect2 = fact(2 * m as i64 - 2) * c(0.0, -1.0) * 2f64.powi(-(2 * m as i32))
                / fact(m as i64 - 1);
            assert!((got2 - expect2).norm() < 1e-14 * expect2.norm().max(1.0), "m={m}");
        }
    }

    #[test]
    fn linearity_of_operators() {
        let a = XiRational::monomial_over(1, 2, 2);
        let b = XiRational::monomial_over(0, 1, 1);
        let z = c(2.0, -1.0);
        let lhs = a.add(&b.scale(z)).pi_plus();
        let rhs = a.pi_plus().add(&b.pi_plus().scale(z));
        for x in [-1.0, 0.5, 2.0] {
            assert!((lhs.eval_real(x) - rhs.eval_real(x)).norm() < 1e-13);
        }
    }
}
