//! Numerical toolkit for complete interpolating sequences of the
//! Paley–Wiener space `PW^2_pi`.
//!
//! * [`sequence`]: node windows, separation, Kadets and density statistics.
//! * [`muckenhoupt`]: discrete `(A_p)` and continuous `(A_2)` ratio scans.
//! * [`genfun`]: generating functions, critical data, growth diagnostics.
//! * [`combmap`]: comb-domain boundary traces, synthesis of nodes from
//!   prescribed critical values, and composite certificates.
//! * [`paleywiener`]: Lagrange-type interpolation and Gram-matrix frame
//!   bounds.
//! * [`cli`]: the `cis` command-line front end.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod cli;
pub mod combmap;
pub mod error;
pub mod genfun;
pub mod muckenhoupt;
pub mod numeric;
pub mod paleywiener;
pub mod sequence;

pub use error::{Error, Result};
pub use genfun::{CriticalData, GeneratingFunction, WeightTrace};
pub use muckenhoupt::{MuckenhouptReport, PositiveSequence, SignedCriticalSequence};
pub use sequence::IndexedSequence;

pub use num_complex::Complex64;
