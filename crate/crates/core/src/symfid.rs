//! Fidelity between a Dicke state `|D_N^(k)>` and the symmetric members of
//! the SLOCC class of `|D_N^(k')>`.
//!
//! The symmetric members are `Σ |eps,...,eps,eps',...,eps'>` (`k'` copies of
//! `eps`), with `eps = sqrt(1-x'^2)|0> + x' e^{iφ}|1>` and
//! `eps' = sqrt(1-x^2)|0> + x e^{iφ'}|1>`. The squared overlap depends on the
//! phases only through `y = cos(φ - φ')`, leaving a three-variable problem on
//! `[0,1]² × [-1,1]`.
//!
//! Every objective is evaluated with its large factors kept as logarithms so
//! that `N` in the thousands does not overflow.

use std::f64::consts::FRAC_PI_2;

use crate::binom::{ln_binomial, ln_factorial, ln_pow, log_sum_exp};
use crate::error::{domain, Error, Result};
use crate::optimize::{maximize_box, BoxOptimum, SearchOptions};
use crate::state::{overlap, sym_to_dense, symmetric_family_state, Qubit, SymState};

/// A point of the reduced parameter box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveParams {
    /// Bloch parameter of the `N - k'` copies of `eps'`.
    pub x: f64,
    /// Bloch parameter of the `k'` copies of `eps`.
    pub xp: f64,
    /// Cosine of the relative phase.
    pub y: f64,
}

impl ObjectiveParams {
    pub fn new(x: f64, xp: f64, y: f64) -> Self {
        ObjectiveParams { x, xp, y }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.x) || !(0.0..=1.0).contains(&self.xp) {
            return domain(format!(
                "x = {}, x' = {} must lie in [0, 1]",
                self.x, self.xp
            ));
        }
        if self.y.is_nan() {
            return domain("y is NaN");
        }
        Ok(())
    }
}

/// Outcome of a fidelity maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub value: f64,
    pub argmax: ObjectiveParams,
    pub iterations: usize,
    pub converged: bool,
    pub restarts_used: usize,
}

impl From<BoxOptimum<3>> for OptResult {
    fn from(b: BoxOptimum<3>) -> Self {
        OptResult {
            value: b.value,
            argmax: ObjectiveParams::new(b.point[0], b.point[1], b.point[2]),
            iterations: b.iterations,
            converged: b.converged,
            restarts_used: b.starts_used,
        }
    }
}

/// Grid and refinement settings for the reduced objective.
pub fn default_search() -> SearchOptions<3> {
    SearchOptions::with_grid([33, 33, 17])
}

/// Coarser settings for sweeping thousands of `(N, k)` pairs.
pub fn fig1_search() -> SearchOptions<3> {
    SearchOptions::with_grid([17, 17, 9])
}

/// The search runs over `(θ, θ', y)` with `x = sin θ`, `x' = sin θ'`. Optima
/// for large `N` sit within `O(1/N)` of `x' = 1`, where a uniform grid in
/// `x'` is too coarse and the simplex stalls on the `x = 0` face.
const ANGLE_BOX: [(f64, f64); 3] = [(0.0, FRAC_PI_2), (0.0, FRAC_PI_2), (-1.0, 1.0)];

fn from_angles(p: &[f64; 3]) -> ObjectiveParams {
    ObjectiveParams::new(p[0].sin().clamp(0.0, 1.0), p[1].sin().clamp(0.0, 1.0), p[2])
}

fn angle_search<F>(eval: F, opts: &SearchOptions<3>) -> OptResult
where
    F: Fn(&ObjectiveParams) -> Result<f64> + Sync,
{
    let best = maximize_box(|p: &[f64; 3]| eval(&from_angles(p)).ok(), ANGLE_BOX, opts);
    let argmax = from_angles(&best.point);
    OptResult {
        argmax,
        ..best.into()
    }
}

fn check_nk(n: usize, k: usize, kp: usize) -> Result<()> {
    if n == 0 {
        return domain("n must be >= 1");
    }
    if k > n || kp > n {
        return domain(format!(
            "need 0 <= k, k' <= n (n = {n}, k = {k}, k' = {kp})"
        ));
    }
    Ok(())
}

/// `c_j(x, x') = C(k,j) C(N-k, k'-j) x^(k-j) (1-x²)^((N-k'-k+j)/2) x'^j (1-x'²)^((k'-j)/2)`
/// for `j = 0..=k'`.
pub fn c_coeffs(n: usize, k: usize, kp: usize, x: f64, xp: f64) -> Result<Vec<f64>> {
    check_nk(n, k, kp)?;
    ObjectiveParams::new(x, xp, 0.0).validate()?;
    let (ni, ki, kpi) = (n as i64, k as i64, kp as i64);
    let sx = (1.0 - x * x).max(0.0).sqrt();
    let sxp = (1.0 - xp * xp).max(0.0).sqrt();
    Ok((0..=kpi)
        .map(|j| {
            let sel = ln_binomial(ki, j) + ln_binomial(ni - ki, kpi - j);
            if sel == f64::NEG_INFINITY {
                return 0.0;
            }
            (sel + ln_pow(x, (ki - j) as f64)
                + ln_pow(sx, (ni - kpi - ki + j) as f64)
                + ln_pow(xp, j as f64)
                + ln_pow(sxp, (kpi - j) as f64))
            .exp()
        })
        .collect())
}

/// `|<eps|eps'>|²` in the reduced parameters.
fn squared_overlap(x: f64, xp: f64, y: f64) -> f64 {
    let s = ((1.0 - x * x) * (1.0 - xp * xp)).max(0.0).sqrt();
    (x * x * xp * xp + (1.0 - x * x) * (1.0 - xp * xp) + 2.0 * y * x * xp * s).max(0.0)
}

/// Chebyshev polynomial of the first kind on `[-1, 1]`.
pub fn chebyshev_t(j: usize, y: f64) -> f64 {
    (j as f64 * y.clamp(-1.0, 1.0).acos()).cos()
}

/// The general reduced objective for target `|D_N^(k)>` and class `k'`,
/// with per-`(N, k, k')` logarithms cached.
#[derive(Debug, Clone)]
pub struct SymObjective {
    n: usize,
    k: usize,
    kp: usize,
    ln_prefactor: f64,
    ln_select: Vec<f64>,
    ln_norm: Vec<f64>,
}

impl SymObjective {
    pub fn new(n: usize, k: usize, kp: usize) -> Result<Self> {
        check_nk(n, k, kp)?;
        if k == kp {
            return domain(format!("target and class coincide (k = k' = {k})"));
        }
        let (ni, ki, kpi) = (n as i64, k as i64, kp as i64);
        Ok(SymObjective {
            n,
            k,
            kp,
            ln_prefactor: ln_binomial(ni, ki) - ln_binomial(ni, kpi),
            ln_select: (0..=kpi)
                .map(|j| ln_binomial(ki, j) + ln_binomial(ni - ki, kpi - j))
                .collect(),
            ln_norm: (0..=kpi)
                .map(|j| ln_binomial(kpi, j) + ln_binomial(ni - kpi, j))
                .collect(),
        })
    }

    pub fn eval(&self, p: &ObjectiveParams) -> Result<f64> {
        p.validate()?;
        let (x, xp) = (p.x, p.xp);
        let y = p.y.clamp(-1.0, 1.0);
        let (n, k, kp) = (self.n as f64, self.k as f64, self.kp as f64);
        let sx = (1.0 - x * x).max(0.0).sqrt();
        let sxp = (1.0 - xp * xp).max(0.0).sqrt();

        // ln c_j, then c_j rescaled by the largest one.
        let ln_c: Vec<f64> = self
            .ln_select
            .iter()
            .enumerate()
            .map(|(j, &sel)| {
                if sel == f64::NEG_INFINITY {
                    return sel;
                }
                let j = j as f64;
                sel + ln_pow(x, k - j)
                    + ln_pow(sx, n - kp - k + j)
                    + ln_pow(xp, j)
                    + ln_pow(sxp, kp - j)
            })
            .collect();
        let ln_max = ln_c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if ln_max == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        let c: Vec<f64> = ln_c.iter().map(|l| (l - ln_max).exp()).collect();

        let mut numerator = 0.0;
        for j in 0..c.len() {
            let weight = if j == 0 { 1.0 } else { 2.0 };
            let conv: f64 = (j..c.len()).map(|jp| c[jp] * c[jp - j]).sum();
            numerator += weight * conv * chebyshev_t(j, y);
        }

        let a = squared_overlap(x, xp, y);
        let ln_terms: Vec<f64> = self
            .ln_norm
            .iter()
            .enumerate()
            .map(|(j, &b)| b + ln_pow(a, j as f64))
            .collect();
        let ln_den = log_sum_exp(&ln_terms);
        if !ln_den.is_finite() || ln_den < (1e-300f64).ln() {
            return Err(Error::DegeneratePoint(ln_den.exp()));
        }
        Ok((self.ln_prefactor + 2.0 * ln_max - ln_den).exp() * numerator.max(0.0))
    }
}

/// General reduced objective at one point.
pub fn objective_general(n: usize, k: usize, kp: usize, p: &ObjectiveParams) -> Result<f64> {
    SymObjective::new(n, k, kp)?.eval(p)
}

/// The objective for target `|D_N^(1)>` against class `k`, written as
/// `N C(N,k) f(x, x', y)` with
/// `f = (1-x²)^(N-k-1) (1-x'²)^(k-1) num / Σ_j C(k,j) C(N-k,j) a^j`.
#[derive(Debug, Clone)]
pub struct DickeOneObjective {
    n: usize,
    k: usize,
    ln_prefactor: f64,
    ln_norm: Vec<f64>,
}

impl DickeOneObjective {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 4 || k < 2 || k > n / 2 {
            return domain(format!("need n >= 4 and 2 <= k <= n/2 (n = {n}, k = {k})"));
        }
        let (ni, ki) = (n as i64, k as i64);
        Ok(DickeOneObjective {
            n,
            k,
            ln_prefactor: (n as f64).ln() + ln_binomial(ni, ki),
            ln_norm: (0..=ki)
                .map(|j| ln_binomial(ki, j) + ln_binomial(ni - ki, j))
                .collect(),
        })
    }

    pub fn eval(&self, p: &ObjectiveParams) -> Result<f64> {
        p.validate()?;
        let (x, xp) = (p.x, p.xp);
        let y = p.y.clamp(-1.0, 1.0);
        let (n, k) = (self.n as f64, self.k as f64);
        let (u, up) = (1.0 - x * x, 1.0 - xp * xp);
        let fk = k / n;
        let fnk = (n - k) / n;
        let cross = (u * up).max(0.0).sqrt();
        let num =
            fnk * fnk * x * x * up + fk * fk * xp * xp * u + 2.0 * fk * fnk * y * x * xp * cross;
        if num <= 0.0 {
            return Ok(0.0);
        }
        let a = (x * x * xp * xp + u * up + 2.0 * y * x * xp * cross).max(0.0);
        let ln_terms: Vec<f64> = self
            .ln_norm
            .iter()
            .enumerate()
            .map(|(j, &b)| b + ln_pow(a, j as f64))
            .collect();
        let ln_den = log_sum_exp(&ln_terms);
        if !ln_den.is_finite() {
            return Err(Error::DegeneratePoint(ln_den.exp()));
        }
        let ln_val =
            self.ln_prefactor + ln_pow(u, n - k - 1.0) + ln_pow(up, k - 1.0) + num.ln() - ln_den;
        Ok(ln_val.exp())
    }
}

/// `N C(N,k) f(x, x', y)` at one point.
pub fn objective_f_dn1(n: usize, k: usize, p: &ObjectiveParams) -> Result<f64> {
    DickeOneObjective::new(n, k)?.eval(p)
}

/// Supremum of the general objective over the parameter box.
pub fn max_sym_fidelity(n: usize, k: usize, kp: usize) -> Result<OptResult> {
    max_sym_fidelity_with(n, k, kp, &default_search())
}

pub fn max_sym_fidelity_with(
    n: usize,
    k: usize,
    kp: usize,
    opts: &SearchOptions<3>,
) -> Result<OptResult> {
    let obj = SymObjective::new(n, k, kp)?;
    Ok(angle_search(|p| obj.eval(p), opts))
}

/// Supremum of `N C(N,k) f` (target `|D_N^(1)>`, class `k`).
pub fn max_f_dn1(n: usize, k: usize) -> Result<OptResult> {
    max_f_dn1_with(n, k, &default_search())
}

pub fn max_f_dn1_with(n: usize, k: usize, opts: &SearchOptions<3>) -> Result<OptResult> {
    let obj = DickeOneObjective::new(n, k)?;
    Ok(angle_search(|p| obj.eval(p), opts))
}

/// Closed form of the supremum for class `k' = 1`:
/// `C(N,k) k_r^(k-1) (1-k_r)^(N-k-1) [k̃ + (1-2k̃) k_r]`, `k̃ = k/N`,
/// `k_r = k̃ - sqrt(k̃(1-k̃)/(N-1))`.
pub fn closed_form_k1(n: usize, k: usize) -> Result<f64> {
    if n < 2 || k == 0 || k >= n {
        return domain(format!("need n >= 2 and 1 <= k <= n-1 (n = {n}, k = {k})"));
    }
    let (nf, kf) = (n as f64, k as f64);
    let kt = kf / nf;
    let kr = (kt - (kt * (1.0 - kt) / (nf - 1.0)).sqrt()).max(0.0);
    let last = kt + (1.0 - 2.0 * kt) * kr;
    let ln_val = ln_binomial(n as i64, k as i64)
        + ln_pow(kr, kf - 1.0)
        + ln_pow(1.0 - kr, nf - kf - 1.0)
        + last.ln();
    Ok(ln_val.exp())
}

/// Large-`N` limit of the `k' = 1` supremum:
/// `(1/k!) e^(√k - k) (k - √k)^k (2√k - 1)/(√k - 1)`.
pub fn limit_k1(k: usize) -> Result<f64> {
    if k < 2 {
        return domain(format!(
            "limit needs k >= 2 (sqrt(k) - 1 vanishes at k = 1), got {k}"
        ));
    }
    let kf = k as f64;
    let r = kf.sqrt();
    let ln_val =
        -ln_factorial(k as u64) + r - kf + kf * (kf - r).ln() + ((2.0 * r - 1.0) / (r - 1.0)).ln();
    Ok(ln_val.exp())
}

/// Largest qubit count accepted by [`brute_force_sym_fidelity`].
pub const BRUTE_FORCE_MAX_N: usize = 12;

/// Independent estimate of the symmetric-class supremum: maximizes the dense
/// overlap between `target` and the normalized symmetric family over
/// `(x, x', φ)`, with `eps'` carrying zero phase.
pub fn brute_force_sym_fidelity(
    target: &SymState,
    n: usize,
    kp: usize,
    grid_density: usize,
) -> Result<f64> {
    brute_force_detailed(target, n, kp, grid_density).map(|r| r.value)
}

/// As [`brute_force_sym_fidelity`], returning the optimizer record. The
/// argmax is reported as `(x, x', φ)`.
pub fn brute_force_detailed(
    target: &SymState,
    n: usize,
    kp: usize,
    grid_density: usize,
) -> Result<BoxOptimum<3>> {
    if target.n() != n {
        return Err(Error::DimensionMismatch {
            left: target.n(),
            right: n,
        });
    }
    if n > BRUTE_FORCE_MAX_N {
        return domain(format!(
            "brute force is limited to n <= {BRUTE_FORCE_MAX_N}"
        ));
    }
    if kp > n {
        return domain(format!("k' = {kp} exceeds n = {n}"));
    }
    if grid_density < 2 {
        return domain("grid density must be at least 2");
    }
    let dense_target = sym_to_dense(target)?;
    // Bloch parameters enter as sines of angles, as in the reduced search.
    let fidelity = |p: &[f64; 3]| -> Option<f64> {
        let epsp = Qubit::from_bloch(p[0].sin().clamp(0.0, 1.0), 0.0).ok()?;
        let eps = Qubit::from_bloch(p[1].sin().clamp(0.0, 1.0), p[2]).ok()?;
        let state = symmetric_family_state(n, kp, &eps, &epsp).ok()?;
        overlap(&dense_target, &state).ok().map(|o| o.fidelity)
    };
    let mut opts = SearchOptions::with_grid([grid_density; 3]);
    opts.max_evals = 5_000;
    let mut best = maximize_box(
        fidelity,
        [
            (0.0, FRAC_PI_2),
            (0.0, FRAC_PI_2),
            (0.0, std::f64::consts::TAU),
        ],
        &opts,
    );
    best.point = [best.point[0].sin(), best.point[1].sin(), best.point[2]];
    Ok(best)
}

/// Warning text when the reported optimum for `k' >= 2` is not at `y = -1`.
/// An empty result means the observation held (or does not apply).
pub fn y_minus_one_warning(n: usize, k: usize, kp: usize, r: &OptResult) -> Option<String> {
    if kp < 2 || (r.argmax.y + 1.0).abs() <= 1e-6 {
        return None;
    }
    Some(format!(
        "warning: optimum for (N={n}, k={k}, k'={kp}) found at y = {:.9} rather than -1",
        r.argmax.y
    ))
}

/// Dicke-basis coefficients of the symmetric family member at a reduced
/// parameter point (`φ' = 0`, `φ = arccos y`).
pub fn family_member(n: usize, kp: usize, p: &ObjectiveParams) -> Result<crate::state::DenseState> {
    p.validate()?;
    let eps = Qubit::from_bloch(p.xp, p.y.clamp(-1.0, 1.0).acos())?;
    let epsp = Qubit::from_bloch(p.x, 0.0)?;
    symmetric_family_state(n, kp, &eps, &epsp)
}
