//! Compiles Turing machines into storage modification machine programs,
//! runs both, and checks that they agree.
//!
//! ```
//! use smm_core::compiler::compile;
//! use smm_core::harness::{lockstep_diff, DiffOptions, DiffStatus};
//! use smm_core::machines::collatz;
//!
//! let (machine, start) = collatz();
//! let (program, plan) = compile(&machine, &start);
//! assert_eq!(program.directions().len(), 6);
//! assert_eq!(plan.bit_count(), 2);
//!
//! let report = lockstep_diff(&machine, &start, DiffOptions { steps: 50, ..Default::default() });
//! assert_eq!(report.status, DiffStatus::Equivalent);
//! ```

pub mod compiler;
pub mod decoder;
pub mod harness;
pub mod machines;
pub mod smm;
pub mod tm;
