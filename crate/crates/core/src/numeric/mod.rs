//! Small numeric kernels shared by the analysis modules.

pub mod quadrature;
mod sum;
mod trig;

pub(crate) use sum::complex_sum;
pub use sum::{CompensatedSum, DoubleDouble};
pub use trig::{cos_pi, log_sin_pi, pi_cot_pi, pi_cot_pi_minus_recip, sin_pi, sin_pi_complex, sinc, sinc_complex};
