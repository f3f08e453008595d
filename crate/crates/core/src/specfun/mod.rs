//! Self-contained special functions and adaptive quadrature backing the
//! analytics engine: Gamma/Beta/digamma, harmonic numbers, the Gauss
//! hypergeometric function, sine/cosine integrals, and a semi-infinite
//! adaptive integrator.

mod gamma;
mod hypergeometric;
mod quadrature;
mod trig_integral;

pub use gamma::{beta_fn, digamma, gamma_fn, harmonic, ln_beta_fn, ln_gamma};
pub use hypergeometric::gauss_2f1;
pub use quadrature::{integrate, integrate_semi_infinite, QuadratureConfig};
pub use trig_integral::{cosine_integral, sine_integral};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
