//! Closed-form equilibria of four continuous-time insider-trading /
//! liquidity-provision market models, exact-transition Monte-Carlo
//! simulation of their demand and price dynamics, and a statistical
//! verification harness tying the two together.
//!
//! The four models pair two kinds of liquidity provision (a continuum of
//! price-taking competitive agents vs. finitely many Bertrand-competing
//! market makers, both CARA) with two kinds of strategic trader (an insider
//! who knows the fundamental value vs. an uninformed strategic trader). The
//! risk-neutral benchmark ties every normalized quantity to the single
//! market-adjusted risk-aversion parameter rho_M = rho gamma sigma.

pub mod coefficients;
pub mod equilibrium;
pub mod error;
pub mod metrics;
pub mod model;
pub mod numeric;
pub mod simulate;
pub mod stats;
pub mod verify;

pub use equilibrium::{build_quote, EquilibriumQuote};
pub use error::{Error, Result};
pub use metrics::MetricsReport;
pub use model::{Branch, ModelKind, ModelParams};
pub use simulate::{PathBundle, Scenario, Scheme, SimConfig, View};
pub use verify::{CheckReport, McEstimate, SuiteConfig, SuiteScale};
