//! Dicke states, dense expansion, and overlaps with symmetric product states.
//!
//! Run with `cargo run --example dicke_states`.

use symfid::{dicke, overlap, product_state, sym_to_dense, Qubit};

fn main() -> symfid::Result<()> {
    let d = dicke(4, 2)?;
    let dense = sym_to_dense(&d)?;
    println!(
        "|D_4^(2)> has {} nonzero amplitudes:",
        dense.amps().iter().filter(|a| a.norm() > 0.0).count()
    );
    for (idx, a) in dense
        .amps()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
    {
        println!("  |{idx:04b}>  {:.6}", a.re);
    }

    // Orthonormality of the Dicke basis.
    for k in 0..=4 {
        let row: Vec<String> = (0..=4)
            .map(|m| {
                format!(
                    "{:.0}",
                    overlap(&dicke(4, k).unwrap(), &dicke(4, m).unwrap())
                        .unwrap()
                        .fidelity
                )
            })
            .collect();
        println!("  <D_4^({k})|D_4^(m)>² = {}", row.join(" "));
    }

    // Best product state a^{⊗4} for |D_4^(2)>: |a_1|² = 1/2 gives 6/16.
    let mut best = (0.0, 0.0);
    for i in 0..=100 {
        let x = (i as f64 / 100.0).sqrt();
        let p = product_state(&[Qubit::from_bloch(x, 0.0)?; 4])?;
        let f = overlap(&d, &p)?.fidelity;
        if f > best.0 {
            best = (f, x * x);
        }
    }
    println!(
        "max product fidelity {:.6} at |a_1|² = {:.2}",
        best.0, best.1
    );
    Ok(())
}
