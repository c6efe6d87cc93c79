//! Freezing trajectories on the unit sphere.
//!
//! Prints the end point of `N` steps for a few control angles, then the
//! whole trajectory for `φ = π/16`, `N = 20` as CSV. Larger `N` or larger
//! `φ` keeps the state closer to the north pole `(0, 0, 1)`.
//!
//! Run: `cargo run --example sphere_trajectory`

use std::f64::consts::PI;

use ancilla_control::cli::sphere_csv;
use ancilla_control::so3::{closed_form_rn, sphere_trajectory, RealVec3};

fn main() {
    println!("distance of the final point from the pole");
    for (label, phi) in [
        ("pi/32", PI / 32.0),
        ("pi/16", PI / 16.0),
        ("pi/8", PI / 8.0),
    ] {
        let row: Vec<String> = [10, 20, 40]
            .iter()
            .map(|&n| {
                let end = closed_form_rn(phi, n, RealVec3::E3).expect("non-trivial control");
                format!("N={n}: {:.4}", (end - RealVec3::E3).norm())
            })
            .collect();
        println!("  phi = {label:<6} {}", row.join("  "));
    }

    let traj = sphere_trajectory(PI / 16.0, 20, RealVec3::E3).expect("non-trivial control");
    println!(
        "\nstep rotation: {:.6} rad about ({:.6}, {:.6}, {:.6})\n",
        traj.step_angle, traj.axis.x, traj.axis.y, traj.axis.z
    );
    print!("{}", sphere_csv(&traj).expect("points on the sphere"));
}
