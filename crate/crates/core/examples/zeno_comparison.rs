//! Unitary freezing against the measurement-based Zeno effect.
//!
//! For `φ = π/2` and `θ = π/(2N)`, compares the survival probability after
//! `N` steps with the two Zeno baselines `cosᴺ(π/2N)` and `cos²ᴺ(π/2N)`.
//! The unitary protocol is not above the `cosᴺ` baseline at every `N`;
//! `N = 2` is the exception, where it equals `cos²ᴺ`.
//!
//! Run: `cargo run --example zeno_comparison`

use std::f64::consts::PI;

use ancilla_control::cli::zeno_rows;

fn main() {
    let rows = zeno_rows(30, PI / 2.0).expect("valid range");
    println!(
        "{:>3}  {:>10}  {:>10}  {:>10}",
        "N", "P001", "cos^N", "cos^2N"
    );
    for r in &rows {
        let mark = if r.p001 + 1e-12 < r.zeno_single {
            "  <"
        } else {
            ""
        };
        println!(
            "{:>3}  {:>10.6}  {:>10.6}  {:>10.6}{mark}",
            r.n, r.p001, r.zeno_single, r.zeno_squared
        );
    }
}
