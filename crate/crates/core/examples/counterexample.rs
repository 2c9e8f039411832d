//! Non-symmetric states in the class of `|D_N^(k)>` approaching `|D_N^(1)>`.
//!
//! Run with `cargo run --example counterexample`.

use num_complex::Complex64;
use symfid::counterexample::{
    counterexample_fidelity, eps_sweep, g_image, proportionality_constant, psi_eps,
};
use symfid::{dicke, overlap, sym_to_dense};

fn main() -> symfid::Result<()> {
    let (n, k) = (6, 2);
    println!("fidelity of |D_{n}^(1)> with g(eps)|D_{n}^({k})>, normalized:");
    for p in eps_sweep(n, k, 1e-4, 1.0, 9)?.records {
        println!(
            "  eps = {:.2e}  F = {:.12}  ‖ψ_eps‖ = {:.3e}",
            p.eps, p.fidelity, p.residual_norm
        );
    }

    // g|D_N^(k)> = c (|D_N^(1)> + |ψ_eps>) with an explicit constant c.
    let eps = 0.1;
    let lhs = g_image(n, k, eps)?;
    let d1 = sym_to_dense(&dicke(n, 1)?)?;
    let rhs = d1
        .clone()
        .add_scaled(Complex64::new(1.0, 0.0), &psi_eps(n, k, eps)?)?
        .scale(Complex64::new(proportionality_constant(n, k, eps), 0.0));
    println!(
        "identity residual at eps = {eps}: {:.2e}",
        lhs.max_abs_diff(&rhs)?
    );
    println!(
        "dense fidelity {:.12} vs structured {:.12}",
        overlap(&d1, &lhs.clone().normalize()?)?.fidelity,
        counterexample_fidelity(n, k, eps)?
    );
    Ok(())
}
