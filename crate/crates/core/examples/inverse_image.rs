//! The state whose image under `g_{N,k}(eps)` is `|D_N^(1)>`: it does not
//! depend on `eps` and is far from `|D_N^(k)>`.
//!
//! Run with `cargo run --example inverse_image`.

use symfid::counterexample::{inverse_image_state, inverse_image_via_g};
use symfid::{dicke, overlap, sym_to_dense};

fn main() -> symfid::Result<()> {
    for (n, k) in [(4, 2), (5, 2), (6, 2), (6, 3)] {
        let s = inverse_image_state(n, k)?;
        let f = overlap(&sym_to_dense(&dicke(n, k)?)?, &s)?.fidelity;
        let same: Vec<String> = [0.1, 0.7]
            .iter()
            .map(|&e| {
                format!(
                    "{:.12}",
                    overlap(&s, &inverse_image_via_g(n, k, e).unwrap())
                        .unwrap()
                        .fidelity
                )
            })
            .collect();
        println!("N={n} k={k}: F with |D_N^(k)> = {f:.12}; overlap with g^-1|D_N^(1)> at eps 0.1, 0.7: {}", same.join(", "));
    }
    println!("1/14 = {:.12}", 1.0 / 14.0);
    Ok(())
}
