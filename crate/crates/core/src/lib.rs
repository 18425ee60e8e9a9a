//! Exact fixed-point invariants for endomorphisms of free groupoids and traces
//! in small concrete indexed monoidal categories.

pub mod chain;
pub mod exec;
pub mod fixpt;
pub mod formal;
pub mod freegpd;
pub mod gpdrep;
pub mod intlinalg;
pub mod matbicat;

pub use exec::Exec;
pub use formal::FormalSum;
