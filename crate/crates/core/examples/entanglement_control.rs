//! Keeping mode `M₁` entangled with atom `B` while atom `A` absorbs the
//! photon.
//!
//! Without control, after the swap time `π/(2g)` the photon has moved into
//! atom `A` and the `M₁–B` concurrence is zero. Splitting that time into
//! `N` pieces separated by `π/2` pulses on the detuned mode `M₂` keeps the
//! concurrence close to its initial value.
//!
//! Run: `cargo run --example entanglement_control`

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use ancilla_control::cavity_control::{
    concurrence_uncontrolled, concurrence_wootters, fig4_sweep, CavityParams, FIG4_G,
};
use ancilla_control::linalg::C64;
use ancilla_control::oracle::full_reduced_state;

fn main() {
    let a = C64::new(FRAC_1_SQRT_2, 0.0);
    println!(
        "uncontrolled at g t = pi/2: C = {:.3e}",
        concurrence_uncontrolled(a, a, FIG4_G, PI / (2.0 * FIG4_G))
    );

    let ns = [1, 2, 3, 4, 5, 10, 15, 20, 50, 100];
    let sweep = fig4_sweep(&CavityParams::fig4(1), &ns).expect("valid parameters");
    println!(
        "{:>4}  {:>12}  {:>12}  {:>12}",
        "N", "t1 [s]", "C", "|C - full|"
    );
    for p in &sweep {
        let rho = full_reduced_state(&CavityParams::fig4(p.n)).expect("brute force");
        let full = concurrence_wootters(&rho);
        println!(
            "{:>4}  {:>12.5e}  {:>12.9}  {:>12.2e}",
            p.n,
            p.t1,
            p.concurrence,
            (p.concurrence - full).abs()
        );
    }
}
