//! Maximal overlap `|<ψ_S| U_1 ⊗ ... ⊗ U_N |φ_S>|²` over local unitaries,
//! with independent `U_i` or one shared `U`.
//!
//! `P(q_1, ..., q_N) = <ψ_S| U(q_1) ⊗ ... ⊗ U(q_N) |φ_S>` is real-multilinear
//! in the spinors `q_i ∈ R⁴`. With all sites but one fixed, `P` is a real
//! 2×4 matrix acting on `q_i`, maximized over the unit sphere by its leading
//! right singular vector. Cycling this exact update over sites gives a
//! monotone ascent.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::localops::{apply_local, apply_tensor_power_sym, LocalOperator};
use crate::optimize::{maximize_box, SearchOptions};
use crate::state::{sym_to_dense, DenseState, SymState};

/// Largest qubit count for the dense independent optimization.
pub const MAX_LU_QUBITS: usize = 14;
/// Sweep cap for the alternating optimization.
pub const MAX_SWEEPS: usize = 500;
/// Minimum objective gain per sweep to keep iterating.
pub const SWEEP_TOL: f64 = 1e-14;

/// A unit quaternion `(Re α, Im α, Re β, Im β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorParam {
    q: [f64; 4],
}

impl SpinorParam {
    pub fn new(q: [f64; 4]) -> Result<Self> {
        let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return domain(format!("spinor parameter has norm {norm}, expected 1"));
        }
        Ok(SpinorParam { q })
    }

    /// Projects a nonzero vector onto the unit sphere.
    pub fn from_unnormalized(q: [f64; 4]) -> Result<Self> {
        let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::ZeroNorm(norm));
        }
        Ok(SpinorParam {
            q: q.map(|v| v / norm),
        })
    }

    pub fn identity() -> Self {
        SpinorParam {
            q: [1.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn components(&self) -> [f64; 4] {
        self.q
    }

    fn random(rng: &mut ChaCha20Rng) -> Self {
        loop {
            let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
            if let Ok(p) = SpinorParam::from_unnormalized(q) {
                return p;
            }
        }
    }
}

/// `[[α, -β*], [β, α*]]`.
pub fn su2_from_param(p: &SpinorParam) -> LocalOperator {
    su2_raw(&p.q)
}

/// The same map on an arbitrary `q ∈ R⁴`; it is real-linear in `q`.
fn su2_raw(q: &[f64; 4]) -> LocalOperator {
    let alpha = Complex64::new(q[0], q[1]);
    let beta = Complex64::new(q[2], q[3]);
    LocalOperator::new(alpha, -beta.conj(), beta, alpha.conj())
}

/// `<ψ| ops |φ>` for dense states.
pub fn local_overlap(
    psi: &DenseState,
    ops: &[LocalOperator],
    phi: &DenseState,
) -> Result<Complex64> {
    let image = apply_local(ops, phi)?;
    Ok(psi
        .amps()
        .iter()
        .zip(image.amps())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// `<ψ| U^{⊗N} |φ>` in the Dicke basis.
pub fn symmetric_overlap(psi: &SymState, u: &LocalOperator, phi: &SymState) -> Result<Complex64> {
    if psi.n() != phi.n() {
        return Err(Error::DimensionMismatch {
            left: psi.n(),
            right: phi.n(),
        });
    }
    let image = apply_tensor_power_sym(u, phi);
    Ok(psi
        .coeffs()
        .iter()
        .zip(image.coeffs())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Coefficients of `P` as a real-linear function of one site's spinor, as
/// the complex images of the four basis directions.
fn site_columns(r: &[[Complex64; 2]; 2]) -> [Complex64; 4] {
    let i = Complex64::new(0.0, 1.0);
    // P = α r00 - β* r01 + β r10 + α* r11
    [
        r[0][0] + r[1][1],
        i * (r[0][0] - r[1][1]),
        r[1][0] - r[0][1],
        i * (r[1][0] + r[0][1]),
    ]
}

/// Leading singular pair of the real 2×4 matrix with columns
/// `(Re v_c, Im v_c)`: returns `(σ², q)` with `q` the unit right vector.
fn leading_right_vector(cols: &[Complex64; 4]) -> Option<(f64, [f64; 4])> {
    // G = M Mᵀ (2×2, symmetric)
    let g00: f64 = cols.iter().map(|c| c.re * c.re).sum();
    let g11: f64 = cols.iter().map(|c| c.im * c.im).sum();
    let g01: f64 = cols.iter().map(|c| c.re * c.im).sum();
    let half_tr = 0.5 * (g00 + g11);
    let disc = (0.25 * (g00 - g11).powi(2) + g01 * g01).sqrt();
    let lambda = half_tr + disc;
    if lambda <= 0.0 {
        return None;
    }
    // Eigenvector of G for lambda, picking the better-conditioned form.
    let (u0, u1) = if (g00 - lambda).abs() + g01.abs() >= (g11 - lambda).abs() + g01.abs() {
        (g01, lambda - g00)
    } else {
        (lambda - g11, g01)
    };
    let (u0, u1) = if u0 == 0.0 && u1 == 0.0 {
        (1.0, 0.0)
    } else {
        (u0, u1)
    };
    let un = (u0 * u0 + u1 * u1).sqrt();
    let (u0, u1) = (u0 / un, u1 / un);
    let q: [f64; 4] = std::array::from_fn(|c| cols[c].re * u0 + cols[c].im * u1);
    let qn = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    if qn <= 0.0 {
        return None;
    }
    Some((lambda, q.map(|v| v / qn)))
}

/// Detailed outcome of one alternating run.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingRun {
    pub value: f64,
    pub params: Vec<SpinorParam>,
    /// Objective after every site update, starting with the initial value.
    pub trace: Vec<f64>,
    pub sweeps: usize,
}

/// Alternating maximization from the given starting spinors.
pub fn alternating_from(
    psi: &DenseState,
    phi: &DenseState,
    start: Vec<SpinorParam>,
) -> Result<AlternatingRun> {
    let n = psi.n();
    if phi.n() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: phi.n(),
        });
    }
    if start.len() != n {
        return domain(format!("{} spinors for {n} qubits", start.len()));
    }
    let mut params = start;
    let ops = |params: &[SpinorParam]| params.iter().map(su2_from_param).collect::<Vec<_>>();
    let initial = local_overlap(psi, &ops(&params), phi)?.norm_sqr();
    let mut trace = vec![initial];
    let mut value = initial;
    let mut sweeps = 0;
    let stride = |site: usize| 1usize << (n - 1 - site);
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let before = value;
        for site in 0..n {
            // Environment: apply every other site's unitary to φ.
            let mut env = phi.clone();
            for (j, p) in params.iter().enumerate() {
                if j != site {
                    su2_from_param(p).apply_to(j, &mut env)?;
                }
            }
            // r[a][b] = Σ_rest conj(ψ[a, rest]) env[b, rest]
            let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
            let s = stride(site);
            for (idx, pa) in psi.amps().iter().enumerate() {
                if idx & s != 0 {
                    continue;
                }
                let (p0, p1) = (pa.conj(), psi.amps()[idx | s].conj());
                let (e0, e1) = (env.amps()[idx], env.amps()[idx | s]);
                r[0][0] += p0 * e0;
                r[0][1] += p0 * e1;
                r[1][0] += p1 * e0;
                r[1][1] += p1 * e1;
            }
            if let Some((sigma_sq, q)) = leading_right_vector(&site_columns(&r)) {
                if sigma_sq >= value {
                    params[site] = SpinorParam { q };
                    value = sigma_sq;
                }
            }
            trace.push(value);
        }
        if value - before < SWEEP_TOL {
            break;
        }
    }
    Ok(AlternatingRun {
        value,
        params,
        trace,
        sweeps,
    })
}

fn check_pair(psi: &SymState, phi: &SymState, max_n: usize) -> Result<()> {
    if psi.n() != phi.n() {
        return Err(Error::DimensionMismatch {
            left: psi.n(),
            right: phi.n(),
        });
    }
    if psi.n() > max_n {
        return domain(format!("n = {} exceeds the supported {max_n}", psi.n()));
    }
    Ok(())
}

fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Best alternating run over `restarts` random starts (at least one).
pub fn max_overlap_independent_detailed(
    psi: &SymState,
    phi: &SymState,
    restarts: usize,
    seed: u64,
) -> Result<AlternatingRun> {
    check_pair(psi, phi, MAX_LU_QUBITS)?;
    let (dpsi, dphi) = (sym_to_dense(psi)?, sym_to_dense(phi)?);
    let n = psi.n();
    let runs = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, r);
            let start = (0..n).map(|_| SpinorParam::random(&mut rng)).collect();
            alternating_from(&dpsi, &dphi, start)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(runs
        .into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("at least one restart"))
}

pub fn max_overlap_independent(
    psi: &SymState,
    phi: &SymState,
    restarts: usize,
    seed: u64,
) -> Result<f64> {
    max_overlap_independent_detailed(psi, phi, restarts, seed).map(|r| r.value)
}

/// Best shared unitary found and its overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricRun {
    pub value: f64,
    pub param: SpinorParam,
}

/// `(cos a cos b, cos a sin b, sin a cos c, sin a sin c)`: covers the unit
/// sphere for `a ∈ [0, π/2]`, `b, c ∈ [0, 2π]`.
fn hopf(p: &[f64; 3]) -> [f64; 4] {
    let (sa, ca) = p[0].sin_cos();
    let (sb, cb) = p[1].sin_cos();
    let (sc, cc) = p[2].sin_cos();
    [ca * cb, ca * sb, sa * cc, sa * sc]
}

/// Grid points per Hopf coordinate for the deterministic part of the
/// symmetric search.
pub const HOPF_GRID: [usize; 3] = [9, 17, 17];

/// Maximizes `|<ψ|U(q)^{⊗N}|φ>|²` over the sphere. A grid over Hopf
/// coordinates refined from its best `restarts` points is combined with
/// `restarts` seeded random simplex starts in `R⁴` (normalized onto the
/// sphere).
pub fn max_overlap_symmetric_detailed(
    psi: &SymState,
    phi: &SymState,
    restarts: usize,
    seed: u64,
) -> Result<SymmetricRun> {
    check_pair(psi, phi, usize::MAX)?;
    let restarts = restarts.max(1);
    let objective = |q: &[f64; 4]| -> Option<f64> {
        let p = SpinorParam::from_unnormalized(*q).ok()?;
        symmetric_overlap(psi, &su2_from_param(&p), phi)
            .ok()
            .map(|v| v.norm_sqr())
    };
    let to_run = |value: f64, q: [f64; 4]| SymmetricRun {
        value: value.max(0.0),
        param: SpinorParam::from_unnormalized(q).unwrap_or(SpinorParam::identity()),
    };

    let tau = std::f64::consts::TAU;
    let mut grid_opts = SearchOptions::with_grid(HOPF_GRID);
    grid_opts.starts = restarts;
    grid_opts.xtol = 1e-12;
    let g = maximize_box(
        |p: &[f64; 3]| objective(&hopf(p)),
        [(0.0, std::f64::consts::FRAC_PI_2), (0.0, tau), (0.0, tau)],
        &grid_opts,
    );
    let mut best = to_run(g.value, hopf(&g.point));

    let mut opts = SearchOptions::with_grid([1, 1, 1, 1]);
    opts.starts = 1;
    opts.xtol = 1e-12;
    opts.rebuilds = 4;
    let runs: Vec<SymmetricRun> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed ^ 0x5eed_5eed, r);
            let c = SpinorParam::random(&mut rng).components();
            // The objective is scale invariant in q; a box of half-width 2
            // around the start keeps the simplex well scaled.
            let bounds: [(f64, f64); 4] = std::array::from_fn(|d| (c[d] - 2.0, c[d] + 2.0));
            let b = maximize_box(objective, bounds, &opts);
            to_run(b.value, b.point)
        })
        .collect();
    for r in runs {
        if r.value > best.value {
            best = r;
        }
    }
    Ok(best)
}

pub fn max_overlap_symmetric(
    psi: &SymState,
    phi: &SymState,
    restarts: usize,
    seed: u64,
) -> Result<f64> {
    max_overlap_symmetric_detailed(psi, phi, restarts, seed).map(|r| r.value)
}

/// One trial of [`lu_equality_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct LuResult {
    pub trial: usize,
    pub value_independent: f64,
    pub value_symmetric: f64,
    pub gap: f64,
    pub restarts: usize,
    pub seed: u64,
}

/// Normalized symmetric state with i.i.d. standard complex Gaussian Dicke
/// coefficients.
pub fn random_sym_state(n: usize, rng: &mut ChaCha20Rng) -> Result<SymState> {
    let coeffs = (0..=n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    SymState::normalized(coeffs)
}

/// Draws `trials` random pairs and compares the two maximizations on each.
/// Trial `t` uses its own stream derived from `(seed, t)`.
pub fn lu_equality_check(
    n: usize,
    trials: usize,
    restarts: usize,
    seed: u64,
) -> Result<Vec<LuResult>> {
    if n == 0 || n > MAX_LU_QUBITS {
        return domain(format!("n = {n} outside 1..={MAX_LU_QUBITS}"));
    }
    (0..trials)
        .map(|t| {
            let mut rng = rng_for(seed, 1 << 32 | t as u64);
            let psi = random_sym_state(n, &mut rng)?;
            let phi = random_sym_state(n, &mut rng)?;
            let trial_seed = seed.wrapping_add(t as u64);
            lu_pair(&psi, &phi, restarts, trial_seed).map(|mut r| {
                r.trial = t;
                r
            })
        })
        .collect()
}

/// Both maximizations for one pair.
///
/// The independent search also starts from the symmetric optimum placed on
/// every site, so it never reports less than the symmetric value.
pub fn lu_pair(psi: &SymState, phi: &SymState, restarts: usize, seed: u64) -> Result<LuResult> {
    let sym = max_overlap_symmetric_detailed(psi, phi, restarts, seed)?;
    let random = max_overlap_independent_detailed(psi, phi, restarts, seed)?;
    let seeded = alternating_from(
        &sym_to_dense(psi)?,
        &sym_to_dense(phi)?,
        vec![sym.param; psi.n()],
    )?;
    let value_independent = random.value.max(seeded.value);
    let value_symmetric = sym.value;
    Ok(LuResult {
        trial: 0,
        value_independent,
        value_symmetric,
        gap: value_independent - value_symmetric,
        restarts,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::dicke;
    use approx::assert_abs_diff_eq;

    #[test]
    fn su2_special_cases() {
        let id = su2_from_param(&SpinorParam::new([1.0, 0.0, 0.0, 0.0]).unwrap());
        assert_eq!(id, LocalOperator::identity());
        let flip = su2_from_param(&SpinorParam::new([0.0, 0.0, 1.0, 0.0]).unwrap());
        assert_eq!(flip, LocalOperator::real(0.0, -1.0, 1.0, 0.0));
        assert!(SpinorParam::new([1.0, 1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn su2_is_special_unitary() {
        let mut rng = rng_for(1, 0);
        for _ in 0..50 {
            let u = su2_from_param(&SpinorParam::random(&mut rng));
            assert_abs_diff_eq!(u.det().re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(u.det().im, 0.0, epsilon = 1e-12);
            assert!(u.is_unitary(1e-12));
        }
    }

    #[test]
    fn site_map_is_real_linear() {
        // Oracle: P evaluated at U(q) directly against the linear form.
        let mut rng = rng_for(2, 0);
        let psi = random_sym_state(3, &mut rng).unwrap();
        let phi = random_sym_state(3, &mut rng).unwrap();
        let (dpsi, dphi) = (sym_to_dense(&psi).unwrap(), sym_to_dense(&phi).unwrap());
        let others = [SpinorParam::random(&mut rng), SpinorParam::random(&mut rng)];
        let q = SpinorParam::random(&mut rng);
        let ops = [
            su2_from_param(&q),
            su2_from_param(&others[0]),
            su2_from_param(&others[1]),
        ];
        let direct = local_overlap(&dpsi, &ops, &dphi).unwrap();
        let basis: Vec<Complex64> = (0..4)
            .map(|c| {
                let mut e = [0.0; 4];
                e[c] = 1.0;
                let ops = [su2_raw(&e), ops[1], ops[2]];
                local_overlap(&dpsi, &ops, &dphi).unwrap()
            })
            .collect();
        let linear: Complex64 = basis.iter().zip(q.components()).map(|(b, w)| b * w).sum();
        assert!((direct - linear).norm() < 1e-13);
    }

    #[test]
    fn symmetric_representation_matches_dense() {
        let mut rng = rng_for(3, 0);
        for n in 1..=10usize {
            let psi = random_sym_state(n, &mut rng).unwrap();
            let phi = random_sym_state(n, &mut rng).unwrap();
            let u = su2_from_param(&SpinorParam::random(&mut rng));
            let sym = symmetric_overlap(&psi, &u, &phi).unwrap();
            let dense = local_overlap(
                &sym_to_dense(&psi).unwrap(),
                &vec![u; n],
                &sym_to_dense(&phi).unwrap(),
            )
            .unwrap();
            assert!((sym - dense).norm() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn identical_states_reach_one() {
        let d = dicke(3, 1).unwrap();
        assert_abs_diff_eq!(
            max_overlap_independent(&d, &d, 5, 1).unwrap(),
            1.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            max_overlap_symmetric(&d, &d, 5, 1).unwrap(),
            1.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn dicke_pair_values_agree() {
        let (a, b) = (dicke(4, 1).unwrap(), dicke(4, 2).unwrap());
        let ind = max_overlap_independent(&a, &b, 20, 7).unwrap();
        let sym = max_overlap_symmetric(&a, &b, 20, 7).unwrap();
        assert!(sym > 0.0 && sym < 1.0);
        assert!((ind - sym).abs() <= 1e-6, "{ind} vs {sym}");
    }

    #[test]
    fn monotone_ascent() {
        let mut rng = rng_for(4, 0);
        let psi = sym_to_dense(&random_sym_state(5, &mut rng).unwrap()).unwrap();
        let phi = sym_to_dense(&random_sym_state(5, &mut rng).unwrap()).unwrap();
        let start = (0..5).map(|_| SpinorParam::random(&mut rng)).collect();
        let run = alternating_from(&psi, &phi, start).unwrap();
        assert!(run.trace.windows(2).all(|w| w[1] >= w[0]));
        assert!(run.value <= 1.0 + 1e-12);
    }

    #[test]
    fn global_phase_invariance() {
        let mut rng = rng_for(5, 0);
        let psi = random_sym_state(4, &mut rng).unwrap();
        let phi = random_sym_state(4, &mut rng).unwrap();
        let v = max_overlap_symmetric(&psi, &phi, 10, 3).unwrap();
        let rotated = phi.clone().scale(Complex64::from_polar(1.0, 1.234));
        let w = max_overlap_symmetric(&psi, &rotated, 10, 3).unwrap();
        assert_abs_diff_eq!(v, w, epsilon = 1e-9);
    }

    #[test]
    fn phase_multiplied_optimum_unchanged() {
        // U(2) elements differ from SU(2) ones by a phase that drops out.
        let mut rng = rng_for(6, 0);
        let psi = random_sym_state(4, &mut rng).unwrap();
        let phi = random_sym_state(4, &mut rng).unwrap();
        let run = max_overlap_independent_detailed(&psi, &phi, 5, 9).unwrap();
        let ops: Vec<LocalOperator> = run
            .params
            .iter()
            .enumerate()
            .map(|(i, p)| su2_from_param(p).scale(Complex64::from_polar(1.0, 0.7 * i as f64 + 0.1)))
            .collect();
        let v = local_overlap(
            &sym_to_dense(&psi).unwrap(),
            &ops,
            &sym_to_dense(&phi).unwrap(),
        )
        .unwrap()
        .norm_sqr();
        assert_abs_diff_eq!(v, run.value, epsilon = 1e-12);
    }

    #[test]
    fn equality_small_n() {
        for r in lu_equality_check(3, 5, 20, 42).unwrap() {
            assert!(r.gap.abs() <= 1e-6, "{r:?}");
            assert!(r.value_independent >= r.value_symmetric - 1e-9);
        }
    }

    #[test]
    fn reproducible() {
        let a = lu_equality_check(3, 2, 4, 11).unwrap();
        let b = lu_equality_check(3, 2, 4, 11).unwrap();
        assert_eq!(a, b);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(16))]
        #[test]
        fn superset_inequality(n in 2usize..6, seed in 0u64..1000) {
            let mut rng = rng_for(seed, 0);
            let psi = random_sym_state(n, &mut rng).unwrap();
            let phi = random_sym_state(n, &mut rng).unwrap();
            let r = lu_pair(&psi, &phi, 3, seed).unwrap();
            proptest::prop_assert!(r.value_independent >= r.value_symmetric - 1e-9);
            proptest::prop_assert!(r.value_independent <= 1.0 + 1e-12);
        }
    }
}
