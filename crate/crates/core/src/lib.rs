//! Sensitivity forecasts for axion searches with repetition-code protected
//! GHZ blocks of spin qubits.
//!
//! The pipeline runs from halo-model inputs ([`axion`]) and device dephasing
//! ([`noise`]) through the repetition-code logical error model ([`qec`]) to
//! Fisher information and gain over product-state sensing ([`fisher`]), then
//! to integer block optimization and the figure-level sweeps ([`scan`]).
//! [`mc`] holds independent oracles for the analytic error model, and
//! [`table`], [`config`] and [`cli`] provide the plot-ready output surface.
//!
//! ```
//! use aqf::scan::{optimize_block, DeviceScenario, DEFAULT_K_MAX, DEFAULT_N_REP_SET};
//!
//! let opt = optimize_block(&DeviceScenario::default(), &DEFAULT_N_REP_SET, DEFAULT_K_MAX).unwrap();
//! assert_eq!((opt.n_rep, opt.k_l), (13, 14));
//! assert!((opt.eta_seg - 11.11).abs() < 0.01);
//! ```

// negated float comparisons below are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axion;
pub mod bessel;
pub mod cli;
pub mod config;
pub mod error;
pub mod fisher;
pub mod mc;
pub mod noise;
pub mod qec;
pub mod scan;
pub mod table;
pub mod units;

pub use error::{Error, Result};
