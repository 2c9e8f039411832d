//! Large-`N` behaviour of the closed form for class `k' = 1`.
//!
//! Run with `cargo run --example limits`.

use symfid::{closed_form_k1, limit_k1};

fn main() -> symfid::Result<()> {
    println!(
        "{:>2} {:>10} {:>10} {:>10} {:>10}",
        "k", "limit", "N=100", "N=1000", "N=10^4"
    );
    for k in 2..=8 {
        let at = |n| closed_form_k1(n, k).unwrap();
        println!(
            "{k:>2} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            limit_k1(k)?,
            at(100),
            at(1000),
            at(10_000)
        );
    }
    Ok(())
}
