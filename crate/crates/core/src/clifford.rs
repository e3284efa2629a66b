//! Explicit gamma-matrix representations of the Clifford algebra in even
//! dimension `n = 2m`, together with the grading operator, trace and
//! supertrace, antisymmetric 3-tensors and exterior-algebra pairings.
//!
//! Convention: the generators are anti-Hermitian and satisfy
//! `γᵢγⱼ + γⱼγᵢ = −2δᵢⱼ·Id`, so `c(v)² = −|v|²·Id`. The grading is
//! `γ = (√−1)^m γ₁⋯γₙ`; it squares to the identity and anti-commutes with
//! every generator. Vectors and covectors are identified throughout via the
//! Euclidean metric — every evaluation happens at a normal-coordinate point.

use crate::matrix::SquareMatrix;
use crate::{Error, Result};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Concrete realization of the Clifford algebra on the spinor space of
/// rank `2^(n/2)`.
#[derive(Clone)]
pub struct CliffordRep {
    dim: usize,
    side: usize,
    generators: Vec<SquareMatrix>,
    grading: SquareMatrix,
}

impl CliffordRep {
    /// Builds the iterated tensor-product representation: with Pauli blocks
    /// `σ₁, σ₂, σ₃`, the Hermitian matrices
    /// `Γ_{2k-1} = σ₃^{⊗(k-1)} ⊗ σ₁ ⊗ I^{⊗(m-k)}` and
    /// `Γ_{2k} = σ₃^{⊗(k-1)} ⊗ σ₂ ⊗ I^{⊗(m-k)}` satisfy
    /// `ΓᵢΓⱼ + ΓⱼΓᵢ = 2δᵢⱼ`; the generators are `γᵢ = √−1·Γᵢ`.
    pub fn build(n: usize) -> Result<Self> {
        if n < 2 || n > 12 || n % 2 != 0 {
            return Err(Error::InvalidDimension(n));
        }
        let m = n / 2;
        let zero = Complex64::new(0.0, 0.0);
        let s1 = SquareMatrix::from_rows(&[vec![zero, ONE], vec![ONE, zero]]);
        let s2 = SquareMatrix::from_rows(&[vec![zero, -I], vec![I, zero]]);
        let s3 = SquareMatrix::from_rows(&[vec![ONE, zero], vec![zero, -ONE]]);
        let id2 = SquareMatrix::identity(2);

        let chain = |mid: &SquareMatrix, k: usize| -> SquareMatrix {
            let mut out = SquareMatrix::identity(1);
            for _ in 0..k - 1 {
                out = out.kron(&s3);
            }
            out = out.kron(mid);
            for _ in k..m {
                out = out.kron(&id2);
            }
            out
        };

        let mut generators = Vec::with_capacity(n);
        for k in 1..=m {
            generators.push(chain(&s1, k).scale(I));
            generators.push(chain(&s2, k).scale(I));
        }

        let side = 1 << m;
        let mut grading = SquareMatrix::identity(side);
        for g in &generators {
            grading = &grading * g;
        }
        grading = grading.scale(I.powu(m as u32));

        Ok(CliffordRep {
            dim: n,
            side,
            generators,
            grading,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Spinor rank `2^(n/2)`; also the value of `Tr[Id]` wherever the
    /// closed forms need it.
    #[inline]
    pub fn side(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn generator(&self, i: usize) -> &SquareMatrix {
        &self.generators[i]
    }

    #[inline]
    pub fn generators(&self) -> &[SquareMatrix] {
        &self.generators
    }

    #[inline]
    pub fn grading(&self) -> &SquareMatrix {
        &self.grading
    }

    /// Clifford multiplication `c(v) = Σᵢ vᵢ γᵢ`.
    pub fn vector(&self, v: &[f64]) -> Result<SquareMatrix> {
        if v.len() != self.dim {
            return Err(Error::LengthMismatch {
                what: "vector",
                expected: self.dim,
                got: v.len(),
            });
        }
        let mut out = SquareMatrix::zeros(self.side);
        for (vi, g) in v.iter().zip(&self.generators) {
            if *vi != 0.0 {
                out = &out + &g.scale(Complex64::new(*vi, 0.0));
            }
        }
        Ok(out)
    }

    /// Clifford multiplication by a 3-form,
    /// `c(T) = Σ_{α<β<γ} T_{αβγ} γ_α γ_β γ_γ`.
    pub fn three_form(&self, t: &AntisymTensor3) -> Result<SquareMatrix> {
        if t.dim() != self.dim {
            return Err(Error::LengthMismatch {
                what: "3-form dimension",
                expected: self.dim,
                got: t.dim(),
            });
        }
        let mut out = SquareMatrix::zeros(self.side);
        for (&(a, b, c), &val) in t.components() {
            if val != 0.0 {
                let prod = &(&self.generators[a] * &self.generators[b]) * &self.generators[c];
                out = &out + &prod.scale(Complex64::new(val, 0.0));
            }
        }
        Ok(out)
    }

    /// Supertrace `Str(M) = Tr(γ·M)`. Vanishes on any product of fewer than
    /// `n` distinct generators and equals `2^m/(√−1)^m` on `γ₁⋯γₙ`.
    pub fn supertrace(&self, m: &SquareMatrix) -> Result<Complex64> {
        if m.side() != self.side {
            return Err(Error::SideMismatch {
                expected: self.side,
                got: m.side(),
            });
        }
        Ok((&self.grading * m).trace())
    }
}

/// Totally antisymmetric rank-3 tensor; storage holds strictly increasing
/// index triples only, evaluation is antisymmetric in all arguments.
#[derive(Clone, Debug, Default)]
pub struct AntisymTensor3 {
    dim: usize,
    components: std::collections::BTreeMap<(usize, usize, usize), f64>,
}

impl AntisymTensor3 {
    pub fn new(dim: usize) -> Self {
        AntisymTensor3 {
            dim,
            components: Default::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `T_{abc}` for arbitrary distinct indices, reducing to the
    /// increasing-triple representative with the permutation sign.
    /// Coincident indices force the value 0 and are ignored.
    pub fn set(&mut self, a: usize, b: usize, c: usize, value: f64) {
        assert!(a < self.dim && b < self.dim && c < self.dim, "index range");
        if a == b || b == c || a == c {
            return;
        }
        let (key, sign) = sort3(a, b, c);
        if value == 0.0 {
            self.components.remove(&key);
        } else {
            self.components.insert(key, sign * value);
        }
    }

    /// Component on an arbitrary triple, fully antisymmetric.
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        if a == b || b == c || a == c {
            return 0.0;
        }
        let (key, sign) = sort3(a, b, c);
        sign * self.components.get(&key).copied().unwrap_or(0.0)
    }

    pub fn components(&self) -> impl Iterator<Item = (&(usize, usize, usize), &f64)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Full contraction `T(u, v, w) = Σ_{abc} T_{abc} u_a v_b w_c`.
    pub fn eval(&self, u: &[f64], v: &[f64], w: &[f64]) -> f64 {
        let mut total = 0.0;
        for (&(a, b, c), &t) in &self.components {
            total += t
                * det3(
                    [u[a], u[b], u[c]],
                    [v[a], v[b], v[c]],
                    [w[a], w[b], w[c]],
                );
        }
        total
    }
}

fn sort3(a: usize, b: usize, c: usize) -> ((usize, usize, usize), f64) {
    let mut idx = [a, b, c];
    let mut sign = 1.0;
    // three-element bubble sort, tracking parity
    for i in 0..2 {
        for j in 0..2 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    ((idx[0], idx[1], idx[2]), sign)
}

fn det3(r0: [f64; 3], r1: [f64; 3], r2: [f64; 3]) -> f64 {
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}

/// Determinant pairing `⟨v₁* ∧ … ∧ vₙ*, e₁* ∧ … ∧ eₙ*⟩`: the determinant of
/// the matrix whose rows are the covector components.
pub fn wedge_pairing(covectors: &[Vec<f64>]) -> Result<f64> {
    let n = covectors.len();
    for v in covectors {
        if v.len() != n {
            return Err(Error::LengthMismatch {
                what: "covector",
                expected: n,
                got: v.len(),
            });
        }
    }
    let mut m: Vec<Vec<f64>> = covectors.to_vec();
    Ok(det_inplace(&mut m))
}

/// Pairing `⟨v₁* ∧ … ∧ vₖ* ∧ T, e₁* ∧ … ∧ eₙ*⟩` of k covectors with a
/// 3-form, for k + 3 = n.
pub fn wedge_with_three_form(covectors: &[Vec<f64>], t: &AntisymTensor3) -> Result<f64> {
    let n = t.dim();
    if covectors.len() + 3 != n {
        return Err(Error::LengthMismatch {
            what: "covector count (need n-3)",
            expected: n - 3,
            got: covectors.len(),
        });
    }
    let mut total = 0.0;
    for (&(a, b, c), &val) in t.components() {
        let mut rows: Vec<Vec<f64>> = covectors.to_vec();
        for idx in [a, b, c] {
            let mut e = vec![0.0; n];
            e[idx] = 1.0;
            rows.push(e);
        }
        total += val * det_inplace(&mut rows);
    }
    Ok(total)
}

/// Gaussian elimination with partial pivoting; sides stay tiny (≤ 12).
fn det_inplace(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            if factor != 0.0 {
                for k in col..n {
                    m[row][k] -= factor * m[col][k];
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn build_rejects_bad_dims() {
        assert!(CliffordRep::build(3).is_err());
        assert!(CliffordRep::build(0).is_err());
        assert!(CliffordRep::build(14).is_err());
    }

    #[test]
    fn anticommutation_exact() {
        for n in [2usize, 4, 6, 8] {
            let rep = CliffordRep::build(n).unwrap();
            let id = SquareMatrix::identity(rep.side());
            for i in 0..n {
                for j in 0..n {
                    let ac = &(&rep.generators[i] * &rep.generators[j])
                        + &(&rep.generators[j] * &rep.generators[i]);
                    let expect = if i == j {
                        id.scale(Complex64::new(-2.0, 0.0))
                    } else {
                        SquareMatrix::zeros(rep.side())
                    };
                    assert!(
                        ac.approx_eq(&expect, 0.0),
                        "anticommutator not exact at n={n}, i={i}, j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn grading_properties() {
        for n in [2usize, 4, 6] {
            let rep = CliffordRep::build(n).unwrap();
            let id = SquareMatrix::identity(rep.side());
            assert!((&rep.grading * &rep.grading).approx_eq(&id, 1e-14));
            for g in &rep.generators {
                let ac = &(&rep.grading * g) + &(g * &rep.grading);
                assert!(ac.max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn vector_bilinear_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 4, 6] {
            let rep = CliffordRep::build(n).unwrap();
            let id = SquareMatrix::identity(rep.side());
            for _ in 0..100 {
                let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let cu = rep.vector(&u).unwrap();
                let cv = rep.vector(&v).unwrap();
                let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                let ac = &(&cu * &cv) + &(&cv * &cu);
                assert!(ac.approx_eq(&id.scale(Complex64::new(-2.0 * dot, 0.0)), 1e-12));
                // trace form of the same relation
                let tr = (&cu * &cv).trace();
                let expect = -dot * rep.side() as f64;
                assert!((tr - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn vector_edge_cases() {
        let rep = CliffordRep::build(4).unwrap();
        let e1 = rep.vector(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(e1.approx_eq(rep.generator(0), 0.0));
        let zero = rep.vector(&[0.0; 4]).unwrap();
        assert!(zero.is_zero());
        assert!(rep.vector(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn three_form_basics() {
        let rep = CliffordRep::build(4).unwrap();
        let mut t = AntisymTensor3::new(4);
        t.set(0, 1, 2, 1.0);
        let ct = rep.three_form(&t).unwrap();
        let expect = &(&rep.generators[0] * &rep.generators[1]) * &rep.generators[2];
        assert!(ct.approx_eq(&expect, 0.0));
        assert!(ct.trace().norm() < 1e-13);

        let empty = AntisymTensor3::new(4);
        assert!(rep.three_form(&empty).unwrap().is_zero());

        let bad = AntisymTensor3::new(6);
        assert!(rep.three_form(&bad).is_err());
    }

    #[test]
    fn three_form_trace_vanishes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [4usize, 6] {
            let rep = CliffordRep::build(n).unwrap();
            let mut t = AntisymTensor3::new(n);
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        t.set(a, b, c, rng.gen_range(-1.0..1.0));
                    }
                }
            }
            assert!(rep.three_form(&t).unwrap().trace().norm() < 1e-12);
        }
    }

    #[test]
    fn antisym_tensor_evaluation() {
        let mut t = AntisymTensor3::new(4);
        t.set(0, 1, 2, 2.0);
        assert_eq!(t.get(1, 0, 2), -2.0);
        assert_eq!(t.get(2, 0, 1), 2.0);
        assert_eq!(t.get(0, 0, 2), 0.0);
        t.set(2, 1, 0, 1.0); // sign -1 applied to the stored triple
        assert_eq!(t.get(0, 1, 2), -1.0);
        let e0 = [1.0, 0.0, 0.0, 0.0];
        let e1 = [0.0, 1.0, 0.0, 0.0];
        let e2 = [0.0, 0.0, 1.0, 0.0];
        assert_eq!(t.eval(&e0, &e1, &e2), -1.0);
        assert_eq!(t.eval(&e1, &e0, &e2), 1.0);
    }

    #[test]
    fn supertrace_values() {
        use std::collections::BTreeSet;
        for n in [2usize, 4, 6] {
            let m = n / 2;
            let rep = CliffordRep::build(n).unwrap();
            // all proper nonempty subsets in increasing order -> 0
            for mask in 1u32..(1 << n) {
                let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                let distinct: BTreeSet<_> = idx.iter().collect();
                if distinct.len() == n {
                    continue;
                }
                let mut prod = SquareMatrix::identity(rep.side());
                for i in &idx {
                    prod = &prod * rep.generator(*i);
                }
                assert!(
                    rep.supertrace(&prod).unwrap().norm() < 1e-12,
                    "nonzero supertrace at n={n}, subset {idx:?}"
                );
            }
            // the full product
            let mut prod = SquareMatrix::identity(rep.side());
            for i in 0..n {
                prod = &prod * rep.generator(i);
            }
            let expect = Complex64::new(2.0, 0.0).powu(m as u32) / I.powu(m as u32);
            assert!((rep.supertrace(&prod).unwrap() - expect).norm() < 1e-12);
            // identity has supertrace 0 for m >= 1
            let id = SquareMatrix::identity(rep.side());
            assert!(rep.supertrace(&id).unwrap().norm() < 1e-13);
            // size mismatch rejected
            assert!(rep.supertrace(&SquareMatrix::identity(rep.side() * 2)).is_err());
        }
    }

    #[test]
    fn four_product_trace_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 4, 6] {
            let rep = CliffordRep::build(n).unwrap();
            let tr_id = rep.side() as f64;
            for _ in 0..50 {
                let vecs: Vec<Vec<f64>> = (0..4)
                    .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
                    .collect();
                let dot = |a: &Vec<f64>, b: &Vec<f64>| -> f64 {
                    a.iter().zip(b).map(|(x, y)| x * y).sum()
                };
                let ms: Vec<SquareMatrix> =
                    vecs.iter().map(|v| rep.vector(v).unwrap()).collect();
                let lhs = (&(&(&ms[0] * &ms[1]) * &ms[2]) * &ms[3]).trace();
                let rhs = tr_id
                    * (dot(&vecs[0], &vecs[1]) * dot(&vecs[2], &vecs[3])
                        - dot(&vecs[0], &vecs[2]) * dot(&vecs[1], &vecs[3])
                        + dot(&vecs[0], &vecs[3]) * dot(&vecs[1], &vecs[2]));
                assert!((lhs - Complex64::new(rhs, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn supertrace_wedge_identity_n4() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let rep = CliffordRep::build(4).unwrap();
        for _ in 0..50 {
            let vecs: Vec<Vec<f64>> = (0..4)
                .map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let ms: Vec<SquareMatrix> = vecs.iter().map(|v| rep.vector(v).unwrap()).collect();
            let lhs = rep
                .supertrace(&(&(&(&ms[0] * &ms[1]) * &ms[2]) * &ms[3]))
                .unwrap();
            let det = wedge_pairing(&vecs).unwrap();
            let rhs = Complex64::new(4.0, 0.0) / I.powu(2) * det;
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn wedge_pairing_basics() {
        let id4: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        assert_eq!(wedge_pairing(&id4).unwrap(), 1.0);
        let mut swapped = id4.clone();
        swapped.swap(0, 1);
        assert_eq!(wedge_pairing(&swapped).unwrap(), -1.0);
        let mut repeated = id4.clone();
        repeated[3] = repeated[0].clone();
        assert_eq!(wedge_pairing(&repeated).unwrap(), 0.0);
        assert!(wedge_pairing(&[vec![1.0, 0.0], vec![0.0]]).is_err());
    }
}
