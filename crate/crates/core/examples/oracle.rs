//! The reduced three-parameter objective against a dense brute-force search
//! over the symmetric family.
//!
//! Run with `cargo run --release --example oracle`.

use symfid::dicke;
use symfid::symfid::{brute_force_sym_fidelity, max_sym_fidelity};

fn main() -> symfid::Result<()> {
    for (n, k, kp) in [(4, 1, 2), (5, 2, 1), (5, 2, 0), (6, 3, 2), (7, 1, 3)] {
        let formula = max_sym_fidelity(n, k, kp)?;
        let brute = brute_force_sym_fidelity(&dicke(n, k)?, n, kp, 9)?;
        println!(
            "N={n} k={k} k'={kp}: formula {:.10} (x={:.4}, x'={:.4}, y={:+.4}) brute force {brute:.10}",
            formula.value, formula.argmax.x, formula.argmax.xp, formula.argmax.y
        );
    }
    Ok(())
}
