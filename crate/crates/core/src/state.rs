//! Symmetric multiqubit states in the Dicke basis and dense statevectors.
//!
//! Dense index convention: qubit 0 is the most significant bit, so qubit `i`
//! of an `n`-qubit register lives at bit `n - 1 - i` of the amplitude index.

use std::borrow::Cow;

use num_complex::Complex64;

use crate::binom::{binomial, ln_binomial};
use crate::error::{domain, Error, Result};

/// Largest qubit count accepted for dense storage.
pub const MAX_DENSE_QUBITS: usize = 24;

/// Norms below this are treated as zero.
pub const ZERO_NORM: f64 = 1e-300;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A single-qubit pure state `a0|0> + a1|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit {
    pub a0: Complex64,
    pub a1: Complex64,
}

impl Qubit {
    /// Normalizes `(a0, a1)`.
    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if norm < ZERO_NORM {
            return Err(Error::ZeroNorm(norm));
        }
        Ok(Qubit {
            a0: a0 / norm,
            a1: a1 / norm,
        })
    }

    /// `sqrt(1 - x^2)|0> + x e^{i phi}|1>` with `x` in `[0, 1]`.
    pub fn from_bloch(x: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return domain(format!("Bloch parameter x = {x} outside [0, 1]"));
        }
        Ok(Qubit {
            a0: Complex64::new((1.0 - x * x).max(0.0).sqrt(), 0.0),
            a1: Complex64::from_polar(x, phi),
        })
    }

    pub fn zero() -> Self {
        Qubit { a0: ONE, a1: ZERO }
    }

    pub fn one() -> Self {
        Qubit { a0: ZERO, a1: ONE }
    }

    pub fn plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Qubit { a0: h, a1: h }
    }

    #[inline]
    pub fn amp(&self, bit: usize) -> Complex64 {
        if bit == 0 {
            self.a0
        } else {
            self.a1
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Qubit) -> Complex64 {
        self.a0.conj() * other.a0 + self.a1.conj() * other.a1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a0.norm_sqr() + self.a1.norm_sqr()
    }
}

/// A permutation-symmetric `n`-qubit state; `coeffs[k]` is the amplitude on
/// the Dicke state `|D_n^(k)>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymState {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl SymState {
    /// Wraps raw Dicke coefficients without normalizing.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return domain("a symmetric state needs at least one qubit (n + 1 >= 2 coefficients)");
        }
        Ok(SymState {
            n: coeffs.len() - 1,
            coeffs,
        })
    }

    /// Wraps and normalizes real or complex Dicke coefficients.
    pub fn normalized(coeffs: Vec<Complex64>) -> Result<Self> {
        SymState::new(coeffs)?.normalize()
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        SymState::normalized(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalize(self) -> Result<Self> {
        let norm = self.norm();
        if norm < ZERO_NORM {
            return Err(Error::ZeroNorm(norm));
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scale(mut self, factor: Complex64) -> Self {
        self.coeffs.iter_mut().for_each(|c| *c *= factor);
        self
    }

    pub fn to_dense(&self) -> Result<DenseState> {
        sym_to_dense(self)
    }
}

/// A full `2^n` amplitude statevector.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return domain(format!(
                "amplitude vector length {len} is not 2^n with n >= 1"
            ));
        }
        let n = len.trailing_zeros() as usize;
        check_capacity(n)?;
        Ok(DenseState { n, amps })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("a dense state needs at least one qubit");
        }
        check_capacity(n)?;
        Ok(DenseState {
            n,
            amps: vec![ZERO; 1 << n],
        })
    }

    /// The computational basis state with the given index.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut s = DenseState::zeros(n)?;
        if index >= s.amps.len() {
            return domain(format!("basis index {index} out of range for {n} qubits"));
        }
        s.amps[index] = ONE;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalize(self) -> Result<Self> {
        let norm = self.norm();
        if norm < ZERO_NORM {
            return Err(Error::ZeroNorm(norm));
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scale(mut self, factor: Complex64) -> Self {
        self.amps.iter_mut().for_each(|c| *c *= factor);
        self
    }

    /// `self + factor * other`.
    pub fn add_scaled(mut self, factor: Complex64, other: &DenseState) -> Result<Self> {
        same_n(self.n, other.n)?;
        self.amps
            .iter_mut()
            .zip(&other.amps)
            .for_each(|(a, b)| *a += factor * b);
        Ok(self)
    }

    /// `self ⊗ q`, with `q` appended as the new last (least significant) qubit.
    pub fn tensor_qubit(&self, q: &Qubit) -> Result<Self> {
        check_capacity(self.n + 1)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|&a| [a * q.a0, a * q.a1])
            .collect();
        Ok(DenseState {
            n: self.n + 1,
            amps,
        })
    }

    /// Relabels qubits: qubit `i` of `self` becomes qubit `perm[i]` of the result.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return domain(format!(
                "permutation of length {} for {} qubits",
                perm.len(),
                self.n
            ));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return domain("not a permutation");
            }
            seen[p] = true;
        }
        let n = self.n;
        let mut out = vec![ZERO; self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            let mut target = 0usize;
            for (i, &p) in perm.iter().enumerate() {
                let bit = (idx >> (n - 1 - i)) & 1;
                target |= bit << (n - 1 - p);
            }
            out[target] = a;
        }
        Ok(DenseState { n, amps: out })
    }

    /// `max_i |a_i - b_i|`.
    pub fn max_abs_diff(&self, other: &DenseState) -> Result<f64> {
        same_n(self.n, other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Inner product value and the corresponding pure-state fidelity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapValue {
    pub value: Complex64,
    pub fidelity: f64,
}

impl OverlapValue {
    fn from_value(value: Complex64) -> Self {
        OverlapValue {
            value,
            fidelity: value.norm_sqr(),
        }
    }
}

/// Anything that can take part in an overlap.
pub trait QubitState {
    fn n_qubits(&self) -> usize;
    fn as_sym(&self) -> Option<&SymState>;
    fn dense(&self) -> Result<Cow<'_, DenseState>>;
}

impl QubitState for SymState {
    fn n_qubits(&self) -> usize {
        self.n
    }
    fn as_sym(&self) -> Option<&SymState> {
        Some(self)
    }
    fn dense(&self) -> Result<Cow<'_, DenseState>> {
        sym_to_dense(self).map(Cow::Owned)
    }
}

impl QubitState for DenseState {
    fn n_qubits(&self) -> usize {
        self.n
    }
    fn as_sym(&self) -> Option<&SymState> {
        None
    }
    fn dense(&self) -> Result<Cow<'_, DenseState>> {
        Ok(Cow::Borrowed(self))
    }
}

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        Err(Error::Capacity {
            n,
            max: MAX_DENSE_QUBITS,
        })
    } else {
        Ok(())
    }
}

fn same_n(left: usize, right: usize) -> Result<()> {
    if left != right {
        Err(Error::DimensionMismatch { left, right })
    } else {
        Ok(())
    }
}

/// The Dicke state `|D_n^(k)>`.
pub fn dicke(n: usize, k: usize) -> Result<SymState> {
    if n == 0 {
        return domain("Dicke state needs n >= 1");
    }
    if k > n {
        return domain(format!("Dicke excitation k = {k} exceeds n = {n}"));
    }
    let mut coeffs = vec![ZERO; n + 1];
    coeffs[k] = ONE;
    SymState::new(coeffs)
}

/// Expands a symmetric state into the computational basis. Every bitstring of
/// Hamming weight `k` receives `coeffs[k] / sqrt(C(n, k))`.
pub fn sym_to_dense(s: &SymState) -> Result<DenseState> {
    let n = s.n;
    check_capacity(n)?;
    let scale: Vec<f64> = (0..=n)
        .map(|k| (-0.5 * ln_binomial(n as i64, k as i64)).exp())
        .collect();
    let amps = (0..1usize << n)
        .map(|idx| {
            let w = idx.count_ones() as usize;
            s.coeffs[w] * scale[w]
        })
        .collect();
    Ok(DenseState { n, amps })
}

/// `<a|b>` and `|<a|b>|^2`. Two symmetric states are contracted in the Dicke
/// basis; any other combination goes through the dense form.
pub fn overlap<A, B>(a: &A, b: &B) -> Result<OverlapValue>
where
    A: QubitState + ?Sized,
    B: QubitState + ?Sized,
{
    same_n(a.n_qubits(), b.n_qubits())?;
    let value = match (a.as_sym(), b.as_sym()) {
        (Some(sa), Some(sb)) => inner(&sa.coeffs, &sb.coeffs),
        _ => {
            let da = a.dense()?;
            let db = b.dense()?;
            inner(&da.amps, &db.amps)
        }
    };
    Ok(OverlapValue::from_value(value))
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `q_0 ⊗ q_1 ⊗ ... ⊗ q_{n-1}`, qubit 0 first.
pub fn product_state(qs: &[Qubit]) -> Result<DenseState> {
    if qs.is_empty() {
        return domain("product state needs at least one qubit");
    }
    check_capacity(qs.len())?;
    for (i, q) in qs.iter().enumerate() {
        if (q.norm_sqr() - 1.0).abs() > 1e-12 {
            return domain(format!(
                "qubit {i} is not normalized (|q|^2 = {})",
                q.norm_sqr()
            ));
        }
    }
    let mut amps = vec![ONE];
    for q in qs {
        amps = amps.iter().flat_map(|&a| [a * q.a0, a * q.a1]).collect();
    }
    Ok(DenseState { n: qs.len(), amps })
}

/// Modulus of `<eps|eps'>` above which the two states count as collinear.
pub const COLLINEAR_TOL: f64 = 1e-9;

/// Unnormalized symmetrization `Σ |eps,...,eps,eps',...,eps'>` over every
/// placement of `kp` copies of `eps` among `n` qubits.
///
/// Each amplitude is accumulated qubit by qubit, tracking how many `eps`
/// factors have been placed so far.
pub fn symmetric_family_unnormalized(
    n: usize,
    kp: usize,
    eps: &Qubit,
    epsp: &Qubit,
) -> Result<DenseState> {
    if kp > n {
        return domain(format!("kp = {kp} exceeds n = {n}"));
    }
    let mut out = DenseState::zeros(n)?;
    let mut counts = vec![ZERO; kp + 1];
    let mut next = vec![ZERO; kp + 1];
    for (idx, amp) in out.amps.iter_mut().enumerate() {
        counts.iter_mut().for_each(|c| *c = ZERO);
        counts[0] = ONE;
        for i in 0..n {
            let bit = (idx >> (n - 1 - i)) & 1;
            let (e, ep) = (eps.amp(bit), epsp.amp(bit));
            for m in 0..=kp {
                let mut v = counts[m] * ep;
                if m > 0 {
                    v += counts[m - 1] * e;
                }
                next[m] = v;
            }
            std::mem::swap(&mut counts, &mut next);
        }
        *amp = counts[kp];
    }
    Ok(out)
}

/// Squared normalization of the symmetric family,
/// `1 / { C(n, kp) Σ_j C(kp, j) C(n-kp, j) |<eps|eps'>|^{2j} }`.
pub fn family_norm_sq(n: usize, kp: usize, eps: &Qubit, epsp: &Qubit) -> f64 {
    let overlap_sq = eps.inner(epsp).norm_sqr() / (eps.norm_sqr() * epsp.norm_sqr());
    let (n, kp) = (n as i64, kp as i64);
    let sum: f64 = (0..=kp)
        .map(|j| binomial(kp, j) * binomial(n - kp, j) * overlap_sq.powi(j as i32))
        .sum();
    1.0 / (binomial(n, kp) * sum)
}

/// Normalized member of the symmetric family with `kp` copies of `eps` and
/// `n - kp` copies of `epsp`.
pub fn symmetric_family_state(
    n: usize,
    kp: usize,
    eps: &Qubit,
    epsp: &Qubit,
) -> Result<DenseState> {
    let modulus = eps.inner(epsp).norm() / (eps.norm_sqr() * epsp.norm_sqr()).sqrt();
    if modulus >= 1.0 - COLLINEAR_TOL {
        return Err(Error::DegenerateFamily(modulus));
    }
    let raw = symmetric_family_unnormalized(n, kp, eps, epsp)?;
    let scale = family_norm_sq(n, kp, eps, epsp).sqrt();
    Ok(raw.scale(Complex64::new(scale, 0.0)))
}
