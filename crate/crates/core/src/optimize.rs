//! Deterministic box-constrained maximization: a full tensor grid followed by
//! Nelder–Mead refinement from the best grid points.
//!
//! Objectives return `None` at points where they are undefined; such points
//! are skipped on the grid and treated as `-inf` by the simplex.

use rayon::prelude::*;

/// Settings for [`maximize_box`].
#[derive(Debug, Clone)]
pub struct SearchOptions<const D: usize> {
    /// Grid points per axis, endpoints included.
    pub grid: [usize; D],
    /// Number of best grid points refined by the simplex.
    pub starts: usize,
    /// Simplex diameter (in box units) at which a refinement stops.
    pub xtol: f64,
    /// Function evaluation budget per refinement.
    pub max_evals: usize,
    /// Times the simplex is rebuilt around its best vertex after converging.
    pub rebuilds: usize,
}

impl<const D: usize> SearchOptions<D> {
    pub fn with_grid(grid: [usize; D]) -> Self {
        SearchOptions {
            grid,
            starts: 5,
            xtol: 1e-10,
            max_evals: 20_000,
            rebuilds: 3,
        }
    }
}

/// Best point found by [`maximize_box`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoxOptimum<const D: usize> {
    pub value: f64,
    pub point: [f64; D],
    /// Simplex iterations summed over all refinements.
    pub iterations: usize,
    /// Whether the refinement that produced the optimum met `xtol`.
    pub converged: bool,
    /// Number of refinements run.
    pub starts_used: usize,
    /// Grid points where the objective was undefined.
    pub skipped: usize,
}

/// Orders candidates by value (descending), then lexicographically by point.
fn better<const D: usize>(a: (f64, &[f64; D]), b: (f64, &[f64; D])) -> bool {
    if a.0 != b.0 {
        return a.0 > b.0;
    }
    a.1.iter()
        .zip(b.1.iter())
        .find(|(x, y)| x != y)
        .map(|(x, y)| x < y)
        .unwrap_or(false)
}

fn clamp_into<const D: usize>(p: &mut [f64; D], bounds: &[(f64, f64); D]) {
    for (v, (lo, hi)) in p.iter_mut().zip(bounds) {
        *v = v.clamp(*lo, *hi);
    }
}

fn grid_point<const D: usize>(
    mut flat: usize,
    grid: &[usize; D],
    bounds: &[(f64, f64); D],
) -> [f64; D] {
    let mut p = [0.0; D];
    for d in (0..D).rev() {
        let g = grid[d];
        let i = flat % g;
        flat /= g;
        let (lo, hi) = bounds[d];
        p[d] = if g == 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * i as f64 / (g - 1) as f64
        };
    }
    p
}

/// Maximizes `f` over the box `bounds`. The result does not depend on the
/// order in which grid points are evaluated.
pub fn maximize_box<const D: usize, F>(
    f: F,
    bounds: [(f64, f64); D],
    opts: &SearchOptions<D>,
) -> BoxOptimum<D>
where
    F: Fn(&[f64; D]) -> Option<f64> + Sync,
{
    let total: usize = opts.grid.iter().product();
    let mut evaluated: Vec<(f64, [f64; D])> = (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let p = grid_point(i, &opts.grid, &bounds);
            f(&p).filter(|v| v.is_finite()).map(|v| (v, p))
        })
        .collect();
    let skipped = total - evaluated.len();
    evaluated.sort_by(|a, b| {
        if better((a.0, &a.1), (b.0, &b.1)) {
            std::cmp::Ordering::Less
        } else if better((b.0, &b.1), (a.0, &a.1)) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });

    let steps: [f64; D] = std::array::from_fn(|d| {
        let (lo, hi) = bounds[d];
        let g = opts.grid[d].max(2);
        (hi - lo) / (g - 1) as f64
    });

    let mut best: Option<BoxOptimum<D>> = None;
    let mut iterations = 0;
    let starts: Vec<(f64, [f64; D])> = evaluated.iter().take(opts.starts.max(1)).copied().collect();
    for &(v0, p0) in &starts {
        let refined = refine(&f, &bounds, p0, v0, &steps, opts);
        iterations += refined.iterations;
        let replace = match &best {
            None => true,
            Some(b) => better((refined.value, &refined.point), (b.value, &b.point)),
        };
        if replace {
            best = Some(refined);
        }
    }
    match best {
        Some(mut b) => {
            b.iterations = iterations;
            b.starts_used = starts.len();
            b.skipped = skipped;
            b
        }
        None => BoxOptimum {
            value: f64::NEG_INFINITY,
            point: grid_point(0, &opts.grid, &bounds),
            iterations: 0,
            converged: false,
            starts_used: 0,
            skipped,
        },
    }
}

/// Nelder–Mead ascent from `start`, rebuilt around the incumbent after each
/// convergence until a rebuild stops improving.
fn refine<const D: usize, F>(
    f: &F,
    bounds: &[(f64, f64); D],
    start: [f64; D],
    start_value: f64,
    steps: &[f64; D],
    opts: &SearchOptions<D>,
) -> BoxOptimum<D>
where
    F: Fn(&[f64; D]) -> Option<f64>,
{
    let mut point = start;
    let mut value = start_value;
    let mut iterations = 0;
    let mut converged = false;
    let mut scale = 1.0;
    for _ in 0..=opts.rebuilds {
        let run = nelder_mead(f, bounds, point, steps, scale, opts);
        iterations += run.iterations;
        converged = run.converged;
        let improved = run.value > value;
        if better((run.value, &run.point), (value, &point)) {
            value = run.value;
            point = run.point;
        }
        if !improved && converged {
            break;
        }
        scale *= 0.1;
    }
    BoxOptimum {
        value,
        point,
        iterations,
        converged,
        starts_used: 1,
        skipped: 0,
    }
}

struct SimplexRun<const D: usize> {
    value: f64,
    point: [f64; D],
    iterations: usize,
    converged: bool,
}

fn nelder_mead<const D: usize, F>(
    f: &F,
    bounds: &[(f64, f64); D],
    start: [f64; D],
    steps: &[f64; D],
    scale: f64,
    opts: &SearchOptions<D>,
) -> SimplexRun<D>
where
    F: Fn(&[f64; D]) -> Option<f64>,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let evals = std::cell::Cell::new(0usize);
    let eval = |p: &[f64; D]| -> f64 {
        evals.set(evals.get() + 1);
        f(p).filter(|v| v.is_finite()).unwrap_or(f64::NEG_INFINITY)
    };

    let mut simplex: Vec<([f64; D], f64)> = Vec::with_capacity(D + 1);
    simplex.push((start, eval(&start)));
    for d in 0..D {
        let mut p = start;
        let (lo, hi) = bounds[d];
        let step = steps[d] * scale;
        // Step inward when the start sits on the upper face.
        p[d] = if p[d] + step <= hi {
            p[d] + step
        } else {
            p[d] - step
        };
        p[d] = p[d].clamp(lo, hi);
        let v = eval(&p);
        simplex.push((p, v));
    }

    let order = |s: &mut Vec<([f64; D], f64)>| {
        s.sort_by(|a, b| {
            if better((a.1, &a.0), (b.1, &b.0)) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        })
    };

    let mut iterations = 0;
    let mut converged = false;
    while evals.get() < opts.max_evals {
        order(&mut simplex);
        let diameter = simplex[1..]
            .iter()
            .map(|(p, _)| {
                p.iter()
                    .zip(simplex[0].0.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter <= opts.xtol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = [0.0; D];
        for (p, _) in &simplex[..D] {
            for d in 0..D {
                centroid[d] += p[d] / D as f64;
            }
        }
        let worst = simplex[D];
        let along = |t: f64| -> [f64; D] {
            let mut p: [f64; D] =
                std::array::from_fn(|d| centroid[d] + t * (centroid[d] - worst.0[d]));
            clamp_into(&mut p, bounds);
            p
        };

        let xr = along(REFLECT);
        let fr = eval(&xr);
        if fr > simplex[0].1 {
            let xe = along(EXPAND);
            let fe = eval(&xe);
            simplex[D] = if fe > fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr > simplex[D - 1].1 {
            simplex[D] = (xr, fr);
            continue;
        }
        if fr > worst.1 {
            let xc = along(CONTRACT);
            let fc = eval(&xc);
            if fc >= fr {
                simplex[D] = (xc, fc);
                continue;
            }
        } else {
            let xc = along(-CONTRACT);
            let fc = eval(&xc);
            if fc > worst.1 {
                simplex[D] = (xc, fc);
                continue;
            }
        }
        let best = simplex[0].0;
        for entry in simplex.iter_mut().skip(1) {
            let mut p: [f64; D] =
                std::array::from_fn(|d| best[d] + SHRINK * (entry.0[d] - best[d]));
            clamp_into(&mut p, bounds);
            *entry = (p, eval(&p));
        }
    }
    order(&mut simplex);
    SimplexRun {
        value: simplex[0].1,
        point: simplex[0].0,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        let f = |p: &[f64; 2]| Some(-(p[0] - 0.3).powi(2) - 2.0 * (p[1] + 0.25).powi(2));
        let r = maximize_box(
            f,
            [(0.0, 1.0), (-1.0, 1.0)],
            &SearchOptions::with_grid([9, 9]),
        );
        assert!((r.point[0] - 0.3).abs() < 1e-8);
        assert!((r.point[1] + 0.25).abs() < 1e-8);
        assert!(r.value.abs() < 1e-15);
        assert!(r.converged);
    }

    #[test]
    fn finds_boundary_maximum() {
        let f = |p: &[f64; 3]| Some(p[0] - (p[1] - 0.5).powi(2) - p[2]);
        let r = maximize_box(
            f,
            [(0.0, 1.0), (0.0, 1.0), (-1.0, 1.0)],
            &SearchOptions::with_grid([5, 5, 5]),
        );
        assert_eq!(r.point[0], 1.0);
        assert_eq!(r.point[2], -1.0);
        // (p1 - 0.5)^2 is below one ulp of the optimum for |p1 - 0.5| < 1.5e-8.
        assert!((r.point[1] - 0.5).abs() < 1e-7);
    }

    #[test]
    fn skips_undefined_points() {
        let f = |p: &[f64; 1]| {
            if p[0] < 0.5 {
                None
            } else {
                Some(-(p[0] - 0.7).powi(2))
            }
        };
        let r = maximize_box(f, [(0.0, 1.0)], &SearchOptions::with_grid([11]));
        assert_eq!(r.skipped, 5);
        assert!((r.point[0] - 0.7).abs() < 1e-8);
    }

    #[test]
    fn result_is_never_below_best_grid_value() {
        // Rugged objective: refinement may not find the global max but must
        // keep the best grid value.
        let f = |p: &[f64; 2]| Some((13.0 * p[0]).sin() * (7.0 * p[1]).cos() + 0.1 * p[0]);
        let opts = SearchOptions::with_grid([21, 21]);
        let r = maximize_box(f, [(0.0, 1.0), (0.0, 1.0)], &opts);
        for i in 0..21 * 21 {
            let p = grid_point(i, &opts.grid, &[(0.0, 1.0), (0.0, 1.0)]);
            assert!(r.value >= f(&p).unwrap());
        }
    }

    #[test]
    fn ties_resolve_to_smallest_point() {
        let f = |_: &[f64; 2]| Some(1.0);
        let r = maximize_box(
            f,
            [(0.0, 1.0), (0.0, 1.0)],
            &SearchOptions::with_grid([3, 3]),
        );
        assert_eq!(r.point, [0.0, 0.0]);
    }
}
