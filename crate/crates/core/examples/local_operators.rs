//! Local operators on qubits: the `A(eps)`, `B_{N,k}(eps)` pair, tensor
//! powers in the Dicke basis, and SU(2) parametrization.
//!
//! Run with `cargo run --example local_operators`.

use symfid::localops::apply_a_tensor_sym;
use symfid::lu::{su2_from_param, symmetric_overlap, SpinorParam};
use symfid::{
    a_matrix, apply_local, apply_tensor_power_sym, b_matrix, dicke, overlap, sym_to_dense,
};

fn main() -> symfid::Result<()> {
    let eps = 0.3;
    let a = a_matrix(eps);
    let b = b_matrix(6, 2, eps)?;
    println!("det A = {:.4}, det B = {:.4}", a.det().re, b.det().re);

    // A^{⊗6} on |D_6^(2)>: closed form in the Dicke basis against dense.
    let s = dicke(6, 2)?;
    let sym = sym_to_dense(&apply_a_tensor_sym(eps, &s))?;
    let dense = apply_local(&vec![a; 6], &sym_to_dense(&s)?)?;
    println!(
        "A^(x6) Dicke-basis vs dense: max diff {:.2e}",
        sym.max_abs_diff(&dense)?
    );

    // Image stays symmetric, so the general tensor power agrees as well.
    let general = sym_to_dense(&apply_tensor_power_sym(&a, &s))?;
    println!(
        "general tensor power vs dense: max diff {:.2e}",
        general.max_abs_diff(&dense)?
    );

    // A unitary U^{⊗N} preserves norms.
    let u = su2_from_param(&SpinorParam::new([0.6, 0.0, 0.0, 0.8])?);
    let rotated = apply_tensor_power_sym(&u, &s);
    println!("‖U^(x6)|D>‖ = {:.12}", rotated.norm());
    println!(
        "|<D_6^(2)|U^(x6)|D_6^(2)>|² = {:.6}",
        symmetric_overlap(&s, &u, &s)?.norm_sqr()
    );
    println!(
        "check via dense: {:.6}",
        overlap(&sym_to_dense(&s)?, &sym_to_dense(&rotated)?)?.fidelity
    );
    Ok(())
}
