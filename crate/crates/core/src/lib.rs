//! Exact continued fractions, best rational approximation, and a classical
//! simulation of Shor's period-finding measurement with continued-fraction
//! period recovery.
//!
//! - [`cf`]: construction, evaluation and convergents of finite regular
//!   continued fractions.
//! - [`approx`]: best approximations of the first and second kind and the
//!   `|x - a/b| < 1/(2b^2)` convergent criterion.
//! - [`modular`]: modular exponentiation, orders, factor extraction.
//! - [`measure`]: the post-QFT measurement distribution and its windows.
//! - [`shor`]: the end-to-end factoring loop.
//! - [`cli`]: the `shorcf` command-line front end.

pub mod approx;
pub mod cf;
pub mod cli;
pub mod error;
pub mod measure;
pub mod modular;
pub mod rational;
pub mod shor;

pub use approx::{
    best_approx_oracle, best_denominator_below, classify_approximation, legendre_is_convergent, ApproxKind,
    ApproxVerdict, LegendreCheck,
};
pub use cf::{
    canonicalize, cf_expand_real, cf_from_rational, cf_to_rational, convergents, mediant, semiconvergent,
    semiconvergents, ContinuedFraction, ConvergentTable,
};
pub use error::{Error, Result};
pub use measure::{
    build_distribution, choose_register_size, preimage_count, prob_y, sample_measurement, secant_length, window_mass,
    MeasurementDistribution, Mode, RegisterConfig, WindowReport,
};
pub use modular::{euler_phi, factor_from_period, is_prime, mod_exp, multiplicative_order};
pub use rational::Rational;
pub use shor::{
    recover_period_cf, recover_period_q1, shor_factor, verify_period, FactorReport, SamplingMode, ShorConfig,
};
