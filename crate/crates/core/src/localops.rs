//! Single-qubit operators and their tensor products on dense and symmetric
//! states.

use num_complex::Complex64;

use crate::binom::{binomial, ln_binomial};
use crate::error::{domain, Error, Result};
use crate::state::{DenseState, SymState};

/// `|det|` at or below this counts as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// A 2×2 complex matrix acting on one qubit, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalOperator {
    pub m: [[Complex64; 2]; 2],
}

impl LocalOperator {
    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        LocalOperator {
            m: [[m00, m01], [m10, m11]],
        }
    }

    pub fn real(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        let c = |v| Complex64::new(v, 0.0);
        LocalOperator::new(c(m00), c(m01), c(m10), c(m11))
    }

    pub fn identity() -> Self {
        LocalOperator::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn is_invertible(&self) -> bool {
        self.det().norm() > SINGULAR_TOL
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.norm() <= SINGULAR_TOL {
            return Err(Error::Singular(det.norm()));
        }
        let [[a, b], [c, d]] = self.m;
        Ok(LocalOperator::new(d / det, -b / det, -c / det, a / det))
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &LocalOperator) -> Self {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.m[r][0] * rhs.m[0][c] + self.m[r][1] * rhs.m[1][c];
            }
        }
        LocalOperator { m: out }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = *self;
        out.m.iter_mut().flatten().for_each(|v| *v *= factor);
        out
    }

    pub fn adjoint(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        LocalOperator::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    /// `U U^† = 1` within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = self.compose(&self.adjoint());
        let id = LocalOperator::identity();
        p.m.iter()
            .flatten()
            .zip(id.m.iter().flatten())
            .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Image of the basis state `|bit>`, i.e. column `bit`.
    pub fn column(&self, bit: usize) -> [Complex64; 2] {
        [self.m[0][bit], self.m[1][bit]]
    }

    /// Applies the operator to qubit `qubit` of `state` in place.
    pub fn apply_to(&self, qubit: usize, state: &mut DenseState) -> Result<()> {
        let n = state.n();
        if qubit >= n {
            return domain(format!("qubit index {qubit} out of range for {n} qubits"));
        }
        let stride = 1usize << (n - 1 - qubit);
        let [[m00, m01], [m10, m11]] = self.m;
        let amps = state.amps_mut();
        for block in amps.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a0, *a1);
                *a0 = m00 * x0 + m01 * x1;
                *a1 = m10 * x0 + m11 * x1;
            }
        }
        Ok(())
    }
}

/// `A(eps) = [[1, 1], [-eps, 0]]`, with determinant `eps`.
pub fn a_matrix(eps: f64) -> LocalOperator {
    LocalOperator::real(1.0, 1.0, -eps, 0.0)
}

/// `B_{n,k}(eps) = [[1, 1 - n/k], [eps, (n-2)/(n-1) (1 - n/k) eps]]`.
pub fn b_matrix(n: usize, k: usize, eps: f64) -> Result<LocalOperator> {
    if n < 3 {
        return domain(format!("B_(n,k) needs n >= 3, got n = {n}"));
    }
    if k == 0 || k >= n {
        return domain(format!("B_(n,k) needs 1 <= k <= n-1, got k = {k}, n = {n}"));
    }
    let (nf, kf) = (n as f64, k as f64);
    let off = 1.0 - nf / kf;
    Ok(LocalOperator::real(
        1.0,
        off,
        eps,
        (nf - 2.0) / (nf - 1.0) * off * eps,
    ))
}

/// `ops[0] ⊗ ops[1] ⊗ ... ⊗ ops[n-1]` applied to `s`. The image is returned
/// unnormalized; its norm is `DenseState::norm`.
pub fn apply_local(ops: &[LocalOperator], s: &DenseState) -> Result<DenseState> {
    if ops.len() != s.n() {
        return domain(format!(
            "{} local operators for a {}-qubit state",
            ops.len(),
            s.n()
        ));
    }
    let mut out = s.clone();
    for (q, op) in ops.iter().enumerate() {
        op.apply_to(q, &mut out)?;
    }
    Ok(out)
}

/// `A(eps)^{⊗N}` on a symmetric state through the Dicke-basis closed form
/// `A^{⊗N} |u_N^(k)> = C(N,k) Σ_j (-eps)^j C(N-k, j) / sqrt(C(N, j)) |D_N^(j)>`
/// where `|u_N^(k)> = sqrt(C(N,k)) |D_N^(k)>`. The image is unnormalized.
pub fn apply_a_tensor_sym(eps: f64, s: &SymState) -> SymState {
    let n = s.n() as i64;
    let mut out = vec![Complex64::new(0.0, 0.0); s.n() + 1];
    for (k, &ck) in s.coeffs().iter().enumerate() {
        if ck == Complex64::new(0.0, 0.0) {
            continue;
        }
        let k = k as i64;
        // |D^(k)> = |u^(k)> / sqrt(C(N,k)), so the prefactor is sqrt(C(N,k)).
        let ln_pref = 0.5 * ln_binomial(n, k);
        let mut pow = 1.0f64;
        for j in 0..=(n - k) {
            let mag = (ln_pref + ln_binomial(n - k, j) - 0.5 * ln_binomial(n, j)).exp();
            out[j as usize] += ck * (pow * mag);
            pow *= -eps;
        }
    }
    SymState::new(out).expect("n >= 1 is inherited from the input")
}

/// `M^{⊗N}` on a symmetric state for an arbitrary 2×2 `M`, in the Dicke basis.
///
/// A weight-`j` bitstring receives from `|u_N^(k)>` the amplitude
/// `Σ_m C(j,m) C(N-j,k-m) m11^m m01^(k-m) m10^(j-m) m00^(N-j-k+m)`,
/// `m` counting the excited input qubits that stay excited.
pub fn apply_tensor_power_sym(op: &LocalOperator, s: &SymState) -> SymState {
    let n = s.n();
    let [[m00, m01], [m10, m11]] = op.m;
    let powers = |z: Complex64| -> Vec<Complex64> {
        let mut v = Vec::with_capacity(n + 1);
        let mut acc = Complex64::new(1.0, 0.0);
        for _ in 0..=n {
            v.push(acc);
            acc *= z;
        }
        v
    };
    let (p00, p01, p10, p11) = (powers(m00), powers(m01), powers(m10), powers(m11));
    let ni = n as i64;
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, &ck) in s.coeffs().iter().enumerate() {
        if ck == Complex64::new(0.0, 0.0) {
            continue;
        }
        let inv_sqrt_ck = 1.0 / binomial(ni, k as i64).sqrt();
        for (j, slot) in out.iter_mut().enumerate() {
            let mut amp = Complex64::new(0.0, 0.0);
            let lo = (j + k).saturating_sub(n);
            for m in lo..=j.min(k) {
                let mult = binomial(j as i64, m as i64) * binomial((n - j) as i64, (k - m) as i64);
                amp += p11[m] * p01[k - m] * p10[j - m] * p00[n + m - j - k] * mult;
            }
            *slot += ck * amp * (binomial(ni, j as i64).sqrt() * inv_sqrt_ck);
        }
    }
    SymState::new(out).expect("n >= 1 is inherited from the input")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{dicke, sym_to_dense, Qubit};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_c(rng: &mut ChaCha8Rng) -> Complex64 {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    fn random_op(rng: &mut ChaCha8Rng) -> LocalOperator {
        LocalOperator::new(rand_c(rng), rand_c(rng), rand_c(rng), rand_c(rng))
    }

    fn random_sym(n: usize, rng: &mut ChaCha8Rng) -> SymState {
        SymState::normalized((0..=n).map(|_| rand_c(rng)).collect()).unwrap()
    }

    fn random_dense(n: usize, rng: &mut ChaCha8Rng) -> DenseState {
        DenseState::new((0..1usize << n).map(|_| rand_c(rng)).collect())
            .unwrap()
            .normalize()
            .unwrap()
    }

    #[test]
    fn a_matrix_properties() {
        assert_abs_diff_eq!(a_matrix(0.5).det().re, 0.5, epsilon = 1e-15);
        let zero = Qubit::zero();
        assert_eq!(a_matrix(0.3).column(1), [zero.a0, zero.a1]);
        assert!(!a_matrix(0.0).is_invertible());
        assert!(a_matrix(0.1).is_invertible());
    }

    #[test]
    fn b_matrix_properties() {
        let b = b_matrix(4, 2, 0.1).unwrap();
        assert_abs_diff_eq!(b.det().re, 1.0 / 30.0, epsilon = 1e-15);
        for (n, k, eps) in [(4, 2, 0.1), (7, 3, -0.4), (10, 5, 2.0)] {
            let b = b_matrix(n, k, eps).unwrap();
            assert_eq!(
                b.column(0),
                [Complex64::new(1.0, 0.0), Complex64::new(eps, 0.0)]
            );
            let expected = (n - k) as f64 / (k as f64 * (n as f64 - 1.0)) * eps;
            assert_abs_diff_eq!(b.det().re, expected, epsilon = 1e-14);
        }
        assert!(!b_matrix(4, 2, 0.0).unwrap().is_invertible());
        assert!(matches!(b_matrix(4, 0, 0.1), Err(Error::Domain(_))));
        assert!(matches!(b_matrix(2, 1, 0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_dense(5, &mut rng);
        let out = apply_local(&[LocalOperator::identity(); 5], &s).unwrap();
        assert_eq!(out, s);
        assert!(matches!(
            apply_local(&[LocalOperator::identity(); 4], &s),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn unitaries_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = random_dense(6, &mut rng);
        let ops: Vec<LocalOperator> = (0..6)
            .map(|_| {
                let (a, b) = (rand_c(&mut rng), rand_c(&mut rng));
                let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
                let (a, b) = (a / r, b / r);
                LocalOperator::new(a, -b.conj(), b, a.conj())
            })
            .collect();
        let out = apply_local(&ops, &s).unwrap();
        assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn single_qubit_matches_kronecker_product() {
        // Oracle: explicit matrix-vector product with the full Kronecker matrix.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 3;
        let s = random_dense(n, &mut rng);
        let ops: Vec<LocalOperator> = (0..n).map(|_| random_op(&mut rng)).collect();
        let dim = 1usize << n;
        let mut expected = vec![Complex64::new(0.0, 0.0); dim];
        for (row, e) in expected.iter_mut().enumerate() {
            for col in 0..dim {
                let mut entry = Complex64::new(1.0, 0.0);
                for (q, op) in ops.iter().enumerate() {
                    let r = (row >> (n - 1 - q)) & 1;
                    let c = (col >> (n - 1 - q)) & 1;
                    entry *= op.m[r][c];
                }
                *e += entry * s.amps()[col];
            }
        }
        let out = apply_local(&ops, &s).unwrap();
        for (a, b) in out.amps().iter().zip(&expected) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn a_tensor_matches_dense_on_random_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = random_sym(6, &mut rng);
        for eps in [0.3, -0.7, 1.0] {
            let sym = sym_to_dense(&apply_a_tensor_sym(eps, &s)).unwrap();
            let dense = apply_local(&[a_matrix(eps); 6], &sym_to_dense(&s).unwrap()).unwrap();
            assert!(sym.max_abs_diff(&dense).unwrap() < 1e-10);
        }
    }

    #[test]
    fn a_tensor_on_vacuum() {
        // A^{⊗N}|0...0> = Σ_j (-eps)^j sqrt(C(N,j)) |D^(j)>
        let eps = 0.4;
        let out = apply_a_tensor_sym(eps, &dicke(4, 0).unwrap());
        for (j, c) in out.coeffs().iter().enumerate() {
            let expected = (-eps).powi(j as i32) * binomial(4, j as i64).sqrt();
            assert_abs_diff_eq!(c.re, expected, epsilon = 1e-14);
        }
        let dense = apply_local(
            &[a_matrix(eps); 4],
            &sym_to_dense(&dicke(4, 0).unwrap()).unwrap(),
        )
        .unwrap();
        assert!(sym_to_dense(&out).unwrap().max_abs_diff(&dense).unwrap() < 1e-12);
    }

    #[test]
    fn a_tensor_at_zero_eps_keeps_only_vacuum_terms() {
        for k in 0..=5 {
            let out = apply_a_tensor_sym(0.0, &dicke(5, k).unwrap());
            assert!(out.coeffs()[1..].iter().all(|c| c.norm() == 0.0));
            assert_abs_diff_eq!(
                out.coeffs()[0].re,
                binomial(5, k as i64).sqrt(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn a_tensor_matches_dense_on_every_dicke_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=10usize {
            for k in 0..=n {
                let eps: f64 = rng.random_range(-1.0..1.0);
                let d = dicke(n, k).unwrap();
                let sym = sym_to_dense(&apply_a_tensor_sym(eps, &d)).unwrap();
                let dense =
                    apply_local(&vec![a_matrix(eps); n], &sym_to_dense(&d).unwrap()).unwrap();
                assert!(sym.max_abs_diff(&dense).unwrap() < 1e-10, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn general_tensor_power_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 1..=8usize {
            let op = random_op(&mut rng);
            let s = random_sym(n, &mut rng);
            let sym = sym_to_dense(&apply_tensor_power_sym(&op, &s)).unwrap();
            let dense = apply_local(&vec![op; n], &sym_to_dense(&s).unwrap()).unwrap();
            assert!(sym.max_abs_diff(&dense).unwrap() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn inverse_round_trip() {
        let b = b_matrix(6, 2, 0.3).unwrap();
        let p = b.compose(&b.inverse().unwrap());
        assert!(p.is_unitary(1e-12));
        assert!(matches!(a_matrix(0.0).inverse(), Err(Error::Singular(_))));
    }

    proptest! {
        #[test]
        fn composition_equals_sequential_application(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 4;
            let s = random_dense(n, &mut rng);
            let first: Vec<LocalOperator> = (0..n).map(|_| random_op(&mut rng)).collect();
            let second: Vec<LocalOperator> = (0..n).map(|_| random_op(&mut rng)).collect();
            let composed: Vec<LocalOperator> =
                second.iter().zip(&first).map(|(m, mp)| m.compose(mp)).collect();
            let direct = apply_local(&composed, &s).unwrap();
            let seq = apply_local(&second, &apply_local(&first, &s).unwrap()).unwrap();
            prop_assert!(direct.max_abs_diff(&seq).unwrap() < 1e-12);
        }
    }
}
