//! Maximal fidelity of `|D_N^(k)>` with symmetric members of the class of
//! `|D_N^(1)>`: closed form against numerical maximization.
//!
//! Run with `cargo run --release --example table1`.

use symfid::cli::TABLE1_ENTRIES;
use symfid::{closed_form_k1, max_sym_fidelity};

fn main() -> symfid::Result<()> {
    println!(
        "{:>3} {:>3} {:>14} {:>14} {:>9}",
        "N", "k", "closed form", "numeric", "|diff|"
    );
    for (n, k) in TABLE1_ENTRIES {
        let closed = closed_form_k1(n, k)?;
        let r = max_sym_fidelity(n, k, 1)?;
        println!(
            "{n:>3} {k:>3} {closed:>14.10} {:>14.10} {:>9.1e}",
            r.value,
            (closed - r.value).abs()
        );
    }
    Ok(())
}
