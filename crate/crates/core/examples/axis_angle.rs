//! One protocol step as a single rotation.
//!
//! `R₃(φ)·R₁(−θ)` is a rotation by `ϑ` about a fixed axis, so `N` steps
//! collapse to one rotation by `N·ϑ`. This compares that shortcut with the
//! step-by-step product.
//!
//! Run: `cargo run --example axis_angle`

use std::f64::consts::PI;

use ancilla_control::so3::{axis_angle_of, rotation_power, step_rotation};

fn main() {
    for (theta, phi) in [(PI / 2.0, PI / 2.0), (PI / 40.0, PI / 16.0), (0.3, 2.5)] {
        let aa = axis_angle_of(theta, phi).expect("non-identity step");
        println!(
            "theta = {theta:.5}, phi = {phi:.5}: angle {:.12}, axis ({:+.12}, {:+.12}, {:+.12})",
            aa.angle, aa.axis.x, aa.axis.y, aa.axis.z
        );
        for n in [10u64, 1_000, 100_000] {
            let closed = rotation_power(theta, phi, n).unwrap();
            let direct = step_rotation(theta, phi).direct_power(n);
            println!(
                "  N = {n:>6}: max |closed - direct| = {:.2e}",
                closed.max_abs_diff(&direct)
            );
        }
    }
    println!(
        "\ntheta = phi = pi/2 should give 2pi/3 = {:.12} about (-1,-1,1)/sqrt3",
        2.0 * PI / 3.0
    );
}
