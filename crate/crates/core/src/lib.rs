//! The a-b chip-firing game on the integer line.
//!
//! A vertex holding at least `a + b` chips may fire, sending `a` chips to its
//! left neighbour and `b` chips to its right neighbour. Starting from `n`
//! chips at the origin the game always stops, and the final state `φ(n)` does
//! not depend on the order of firings.
//!
//! * [`engine`] simulates games and is the reference for everything else.
//! * [`fracbase`] handles numerals in base `b/a` with exact arithmetic.
//! * [`analysis`] evaluates the conserved quantities of a run.
//! * [`settlements`] describes the right part of final states.
//! * [`predictor`] computes `φ(n)` without simulating every firing.
//! * [`verify`] runs the property suites used by the command line tool.

pub mod analysis;
pub mod engine;
pub mod fracbase;
pub mod params;
pub mod predictor;
pub mod settlements;
pub mod verify;

pub use engine::{ChipState, FiringLog, FiringStrategy, Game};
pub use fracbase::{DigitWord, ExactRational};
pub use params::{GameParams, ParamsError};
