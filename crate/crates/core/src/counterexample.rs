//! Non-symmetric states of the `W_N^(k)` SLOCC class that approach
//! `|D_N^(1)>` arbitrarily closely.
//!
//! The family is `g_{N,k}(eps)|D_N^(k)>` with
//! `g_{N,k}(eps) = A(eps)^{⊗(N-1)} ⊗ B_{N,k}(eps)`. Up to normalization it
//! equals `|D_N^(1)> + |ψ_eps>`, where `|ψ_eps>` is a combination of the
//! orthonormal states `|D_{N-1}^(m)> ⊗ |0>` and `|D_{N-1}^(m)> ⊗ |1>` whose
//! weights vanish with `eps`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::binom::{binomial, ln_binomial};
use crate::error::{domain, Error, Result};
use crate::localops::{a_matrix, apply_local, b_matrix, LocalOperator};
use crate::state::{dicke, overlap, sym_to_dense, DenseState, Qubit, ZERO_NORM};

/// The coefficients `(a_j, b_j, c_j)` of the `j`-th correction term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub j: usize,
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n < 4 || k < 2 || k + 2 > n {
        return domain(format!("need n >= 4 and 2 <= k <= n-2 (n = {n}, k = {k})"));
    }
    Ok(())
}

/// `a_j = C(N-j-1, k-1)/C(N-2, k-1) sqrt(C(N-1, j)/N)`,
/// `b_j = (N-j-k) sqrt((j+1)/(N-j-1))`, `c_j = ((j-k) - N(j-1))/(N-1)`.
pub fn coeff_triple(n: usize, k: usize, j: usize) -> Result<CoeffTriple> {
    check_nk(n, k)?;
    if j < 1 || j > n - k {
        return domain(format!("term index j = {j} outside 1..={}", n - k));
    }
    Ok(triple_unchecked(n, k, j))
}

/// The triple for any `0 <= j <= n-k`; `j = 0` gives the `|D_N^(1)>` term.
fn triple_unchecked(n: usize, k: usize, j: usize) -> CoeffTriple {
    let (ni, ki, ji) = (n as i64, k as i64, j as i64);
    let (nf, kf, jf) = (n as f64, k as f64, j as f64);
    let a = (ln_binomial(ni - ji - 1, ki - 1) - ln_binomial(ni - 2, ki - 1)).exp()
        * (binomial(ni - 1, ji) / nf).sqrt();
    let b = if n - j - k == 0 {
        0.0
    } else {
        (nf - jf - kf) * ((jf + 1.0) / (nf - jf - 1.0)).sqrt()
    };
    let c = ((jf - kf) - nf * (jf - 1.0)) / (nf - 1.0);
    CoeffTriple { a, b, c, j }
}

/// One correction term: `upper |D_{N-1}^(j+1)> ⊗ |0> + lower |D_{N-1}^(j)> ⊗ |1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiTerm {
    pub j: usize,
    pub upper: f64,
    pub lower: f64,
}

/// `|ψ_eps>` held as weights on the `|D_{N-1}^(m)> ⊗ |q>` basis, usable for
/// any `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredPsi {
    pub n: usize,
    pub terms: Vec<PsiTerm>,
}

impl StructuredPsi {
    /// Squared norm; all basis states involved are mutually orthogonal.
    pub fn norm_sqr(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.upper * t.upper + t.lower * t.lower)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn to_dense(&self) -> Result<DenseState> {
        let n = self.n;
        let mut out = DenseState::zeros(n)?;
        for t in &self.terms {
            if t.upper != 0.0 && t.j + 1 < n {
                let d = sym_to_dense(&dicke(n - 1, t.j + 1)?)?.tensor_qubit(&Qubit::zero())?;
                out = out.add_scaled(Complex64::new(t.upper, 0.0), &d)?;
            }
            if t.lower != 0.0 {
                let d = sym_to_dense(&dicke(n - 1, t.j)?)?.tensor_qubit(&Qubit::one())?;
                out = out.add_scaled(Complex64::new(t.lower, 0.0), &d)?;
            }
        }
        Ok(out)
    }
}

/// `|ψ_eps> = Σ_{j=1}^{N-k} (-eps)^j a_j (b_j |D_{N-1}^(j+1)>⊗|0> + c_j |D_{N-1}^(j)>⊗|1>)`.
pub fn psi_eps_structured(n: usize, k: usize, eps: f64) -> Result<StructuredPsi> {
    check_nk(n, k)?;
    let mut terms = Vec::with_capacity(n - k);
    let mut pow = 1.0;
    for j in 1..=n - k {
        pow *= -eps;
        let t = triple_unchecked(n, k, j);
        terms.push(PsiTerm {
            j,
            upper: pow * t.a * t.b,
            lower: pow * t.a * t.c,
        });
    }
    Ok(StructuredPsi { n, terms })
}

/// Dense `|ψ_eps>` (unnormalized).
pub fn psi_eps(n: usize, k: usize, eps: f64) -> Result<DenseState> {
    psi_eps_structured(n, k, eps)?.to_dense()
}

/// `g_{N,k}(eps) = A(eps)^{⊗(N-1)} ⊗ B_{N,k}(eps)` as a list of site operators.
pub fn g_operators(n: usize, k: usize, eps: f64) -> Result<Vec<LocalOperator>> {
    check_nk(n, k)?;
    let mut ops = vec![a_matrix(eps); n - 1];
    ops.push(b_matrix(n, k, eps)?);
    Ok(ops)
}

/// `eps α_{N-1,k} / sqrt(α_{N,k})` with `α_{N,k} = C(N,k)/N`: the factor
/// relating `g|D_N^(k)>` to `|D_N^(1)> + |ψ_eps>`.
pub fn proportionality_constant(n: usize, k: usize, eps: f64) -> f64 {
    let (ni, ki) = (n as i64, k as i64);
    let alpha = |m: i64| binomial(m, ki) / m as f64;
    eps * alpha(ni - 1) / alpha(ni).sqrt()
}

/// `|ψ_N^(k)(eps)> = (|D_N^(1)> + |ψ_eps>) / sqrt(1 + ‖ψ_eps‖²)`.
pub fn psi_n_k(n: usize, k: usize, eps: f64) -> Result<DenseState> {
    if eps.abs() <= ZERO_NORM {
        return Err(Error::UndefinedState);
    }
    let psi = psi_eps_structured(n, k, eps)?;
    let norm_factor = 1.0 / (1.0 + psi.norm_sqr()).sqrt();
    let d1 = sym_to_dense(&dicke(n, 1)?)?;
    Ok(d1
        .add_scaled(Complex64::new(1.0, 0.0), &psi.to_dense()?)?
        .scale(Complex64::new(norm_factor, 0.0)))
}

/// `g_{N,k}(eps)|D_N^(k)>`, unnormalized, by direct operator application.
pub fn g_image(n: usize, k: usize, eps: f64) -> Result<DenseState> {
    let ops = g_operators(n, k, eps)?;
    apply_local(&ops, &sym_to_dense(&dicke(n, k)?)?)
}

/// Fidelity of `|D_N^(1)>` with `|ψ_N^(k)(eps)>`. `|ψ_eps>` is orthogonal to
/// `|D_N^(1)>`, so this is `1 / (1 + ‖ψ_eps‖²)`; no dense storage is needed.
pub fn counterexample_fidelity(n: usize, k: usize, eps: f64) -> Result<f64> {
    if eps.abs() <= ZERO_NORM {
        return Err(Error::UndefinedState);
    }
    let psi = psi_eps_structured(n, k, eps)?;
    Ok(1.0 / (1.0 + psi.norm_sqr()))
}

/// One sample of an [`EpsSweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub eps: f64,
    pub fidelity: f64,
    pub residual_norm: f64,
}

/// Fidelity with `|D_N^(1)>` along log-spaced `eps`, ascending in `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsSweep {
    pub records: Vec<SweepPoint>,
}

/// `points` log-spaced samples from `eps_min` to `eps_max`, both included.
pub fn log_space(eps_min: f64, eps_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(eps_min > 0.0 && eps_max > eps_min) {
        return domain(format!(
            "need 0 < eps_min < eps_max (got {eps_min}, {eps_max})"
        ));
    }
    if points < 2 {
        return domain("a sweep needs at least 2 points");
    }
    let (lo, hi) = (eps_min.ln(), eps_max.ln());
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                eps_max
            } else if i == 0 {
                eps_min
            } else {
                (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect())
}

pub fn eps_sweep(
    n: usize,
    k: usize,
    eps_min: f64,
    eps_max: f64,
    points: usize,
) -> Result<EpsSweep> {
    check_nk(n, k)?;
    let grid = log_space(eps_min, eps_max, points)?;
    let mut records = grid
        .par_iter()
        .map(|&eps| {
            let psi = psi_eps_structured(n, k, eps)?;
            Ok(SweepPoint {
                eps,
                fidelity: 1.0 / (1.0 + psi.norm_sqr()),
                residual_norm: psi.norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.eps.total_cmp(&b.eps));
    Ok(EpsSweep { records })
}

/// Image of the pair `(|D_N^(1)>, |ψ_N^(k)(eps)>)` under an invertible local
/// operation `h`, with their fidelity.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedTarget {
    pub target: DenseState,
    pub state: DenseState,
    pub fidelity: f64,
}

pub fn generalized_target_sweep(
    h: &[LocalOperator],
    n: usize,
    k: usize,
    eps: f64,
) -> Result<GeneralizedTarget> {
    if h.len() != n {
        return domain(format!("{} operators for {n} qubits", h.len()));
    }
    if let Some(op) = h.iter().find(|op| !op.is_invertible()) {
        return Err(Error::Singular(op.det().norm()));
    }
    let target = apply_local(h, &sym_to_dense(&dicke(n, 1)?)?)?.normalize()?;
    let state = apply_local(h, &psi_n_k(n, k, eps)?)?.normalize()?;
    let fidelity = overlap(&target, &state)?.fidelity;
    Ok(GeneralizedTarget {
        target,
        state,
        fidelity,
    })
}

/// The `eps`-independent state proportional to `g_{N,k}(eps)^{-1}|D_N^(1)>`:
/// `(N-2)k|1…1> + (N-3)(N-k)|1…10> - |D_{N-1}^(N-2)> ⊗ [((N-2)(N-k)/sqrt(N-1))|0> + sqrt(N-1) k|1>]`,
/// normalized.
pub fn inverse_image_state(n: usize, k: usize) -> Result<DenseState> {
    check_nk(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    let dim = 1usize << n;
    let mut out = DenseState::zeros(n)?;
    out.amps_mut()[dim - 1] += Complex64::new((nf - 2.0) * kf, 0.0);
    out.amps_mut()[dim - 2] += Complex64::new((nf - 3.0) * (nf - kf), 0.0);
    let tail = Qubit {
        a0: Complex64::new((nf - 2.0) * (nf - kf) / (nf - 1.0).sqrt(), 0.0),
        a1: Complex64::new((nf - 1.0).sqrt() * kf, 0.0),
    };
    let d = sym_to_dense(&dicke(n - 1, n - 2)?)?.tensor_qubit(&tail)?;
    out = out.add_scaled(Complex64::new(-1.0, 0.0), &d)?;
    out.normalize()
}

/// `g_{N,k}(eps)^{-1}|D_N^(1)>`, normalized, by inverting each site operator.
pub fn inverse_image_via_g(n: usize, k: usize, eps: f64) -> Result<DenseState> {
    if eps.abs() <= ZERO_NORM {
        return Err(Error::UndefinedState);
    }
    let inv = g_operators(n, k, eps)?
        .iter()
        .map(LocalOperator::inverse)
        .collect::<Result<Vec<_>>>()?;
    apply_local(&inv, &sym_to_dense(&dicke(n, 1)?)?)?.normalize()
}
