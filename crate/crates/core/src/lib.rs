//! Control of quantum states through repeated interactions with one
//! auxiliary system.
//!
//! * [`qubit_protocol`]: three qubits in the one-excitation subspace; the
//!   auxiliary qubit interrupts the exchange between the other two and
//!   freezes the excitation in place.
//! * [`so3`]: the same dynamics as real rotations of the unit sphere, with
//!   the closed-form axis and angle of one step and its `N`-th power.
//! * [`cavity_control`]: an atom in a two-mode cavity used to preserve the
//!   entanglement between one mode and an atom outside the cavity.
//! * [`oracle`] and [`verify`]: brute-force references and cross-checks.
//! * [`cli`]: CSV emitters and the `ancilla` command line.
//!
//! [`linalg`] holds the small dense complex linear algebra everything else
//! uses.

pub mod cavity_control;
pub mod cli;
pub mod linalg;
pub mod oracle;
pub mod qubit_protocol;
pub mod so3;
pub mod verify;
