//! Wootters concurrence of a few two-qubit states, and of the mode–atom
//! state during free Jaynes–Cummings evolution, where it follows
//! `2|αβ cos gt|`.
//!
//! Run: `cargo run --example concurrence`

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use ancilla_control::cavity_control::{
    concurrence_of_matrix, concurrence_uncontrolled, concurrence_wootters, free_evolution,
    reduced_density_m1_b,
};
use ancilla_control::linalg::{ComplexMatrix, ComplexVector, C64};

fn main() {
    let s = FRAC_1_SQRT_2;
    let bell = ComplexVector::from_real(&[0.0, s, s, 0.0]);
    let product = ComplexVector::from_real(&[s, s, 0.0, 0.0]);
    let werner = |p: f64| {
        let pure = ComplexMatrix::outer(&bell, &bell).scale(C64::new(p, 0.0));
        &pure + &ComplexMatrix::identity(4).scale(C64::new((1.0 - p) / 4.0, 0.0))
    };
    let cases = [
        ("Bell state", ComplexMatrix::outer(&bell, &bell)),
        ("product state", ComplexMatrix::outer(&product, &product)),
        ("Werner p = 0.8", werner(0.8)),
        ("Werner p = 0.2", werner(0.2)),
    ];
    for (name, rho) in &cases {
        println!(
            "{name:<16} C = {:.6}",
            concurrence_of_matrix(rho).expect("valid density")
        );
    }

    println!("\nfree evolution, alpha = beta = 1/sqrt2, g = 1");
    let a = C64::new(s, 0.0);
    for k in 0..=8 {
        let t = k as f64 * PI / 8.0;
        let state = free_evolution(a, a, 1.0, t).expect("normalized amplitudes");
        let c = concurrence_wootters(&reduced_density_m1_b(&state));
        println!(
            "  g t = {:.4}  C = {:.6}  2|ab cos gt| = {:.6}",
            t,
            c,
            concurrence_uncontrolled(a, a, 1.0, t)
        );
    }
}
