//! Time-resolved survival probability of the excitation in `S_c` and its
//! rate of change over a ten-step freezing schedule with `φ = π/10`.
//!
//! During each `ab` segment the `c` amplitude is untouched, so the rate is
//! exactly zero there; during `bc` segments it tracks the exchange.
//!
//! Run: `cargo run --example transition_rate > rate.csv`

use std::f64::consts::PI;

use ancilla_control::cli::trajectory_csv;
use ancilla_control::qubit_protocol::{trajectory, OneExcitationState, ProtocolParams, Segment};

fn main() {
    let params = ProtocolParams::freezing(10, PI / 10.0).expect("valid schedule");
    let points = trajectory(&params, &OneExcitationState::EXCITED_C, 40).expect("valid sampling");

    for step in 1..=params.n_steps {
        let bc: Vec<f64> = points
            .iter()
            .filter(|p| p.step == step && p.segment == Segment::Bc)
            .map(|p| p.dp001_dt)
            .collect();
        let lo = bc.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = bc.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        eprintln!("step {step:>2}: dP/dt in [{lo:+.4}, {hi:+.4}] during bc");
    }
    print!(
        "{}",
        trajectory_csv(&points).expect("probabilities in range")
    );
}
