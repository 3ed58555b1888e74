//! Closed-form market-quality metrics and comparative-dynamics functions:
//! depth, price efficiency, reversal intensity, trader profits, liquidity
//! suppliers' utilities, the adverse-selection share of price impact, and the
//! normalized-profit helper functions (u, v, pi, Delta0, Delta).
//!
//! Everything normalized is a function of the market-adjusted risk aversion
//! rho_M = rho gamma sigma alone; the Kyle benchmark values (lambda_K =
//! gamma/sigma, Sigma_K(t) = gamma^2 (1-t), pi_K = gamma sigma) are the
//! normalizers.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{insider_lambda, kyle_lambda, strategic_lambda, EquilibriumQuote};
use crate::error::{Error, Result};
use crate::model::{Branch, ModelKind, ModelParams};

/// Market depth 1/lambda for the given model kind.
pub fn depth(kind: ModelKind, params: &ModelParams) -> Result<f64> {
    match kind {
        ModelKind::KyleBenchmark => Ok(params.sigma / params.gamma),
        ModelKind::CompetitiveInsider | ModelKind::MakerInsider => Ok(1.0 / insider_lambda(params)),
        ModelKind::CompetitiveStrategic | ModelKind::MakerStrategic => {
            Ok(1.0 / strategic_lambda(params)?)
        }
    }
}

/// Price efficiency Sigma(t) = Var(P_1 | market info at t) in the insider
/// models: lambda^2 sigma^2 (1-t) / (1 + lambda rho sigma^2 (1-t)).
/// Sigma(0) = gamma^2, Sigma(1) = 0, and Sigma >= Sigma_K = gamma^2 (1-t).
pub fn efficiency_sigma(t: f64, params: &ModelParams) -> f64 {
    let lambda = insider_lambda(params);
    let rem = 1.0 - t;
    let l2s2 = lambda * lambda * params.sigma * params.sigma;
    l2s2 * rem / (1.0 + lambda * params.rho * params.sigma * params.sigma * rem)
}

/// Signed short-lag return autocovariance M(s); negative values mean price
/// reversal. Zero in the Kyle benchmark.
pub fn reversal_m(s: f64, kind: ModelKind, params: &ModelParams) -> f64 {
    let rm = params.rho_m();
    if rm == 0.0 {
        return 0.0;
    }
    match kind {
        ModelKind::KyleBenchmark => 0.0,
        ModelKind::CompetitiveInsider | ModelKind::MakerInsider => {
            -2.0 / (1.0 + (1.0 + 4.0 / (rm * rm)).sqrt() - 2.0 * s)
        }
        ModelKind::CompetitiveStrategic => -rm * rm / (4.0 + rm * rm * (1.0 - s)),
        ModelKind::MakerStrategic => -rm * rm / 4.0,
    }
}

/// The intensity of price reversal reported by the comparative tables is the
/// negation of the signed M(s).
pub fn reversal_intensity(s: f64, kind: ModelKind, params: &ModelParams) -> f64 {
    -reversal_m(s, kind, params)
}

/// The normalized-profit helper functions evaluated at x = rho_M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table3Functions {
    /// u(x) = 1 - 2/(1 + sqrt(1 + 4/x^2)); equals (gamma/(lambda* sigma))^2.
    pub u: f64,
    /// v(x) = (u ln u + (1 + 7u - 8u^2)/(3u)) / (2x); the makers' normalized
    /// value of information.
    pub v: f64,
    /// pi(x) = x/3 + v(x); the makers' normalized insider profit.
    pub pi: f64,
    /// Delta0(x) = x ln x - x + 1 evaluated at u(x).
    pub delta0: f64,
    /// Delta(x) = Delta0(u(x)) / (2x); the insider's normalized profit gain
    /// from trading with makers instead of competitive agents.
    pub delta: f64,
}

/// Evaluates (u, v, pi, Delta0, Delta) at x > 0 with a u -> 1 series guard
/// below x = 1e-3, where the direct numerator is a 0/0.
pub fn table3_functions(x: f64) -> Table3Functions {
    assert!(x > 0.0, "table3_functions needs x > 0");
    let s = (1.0 + 4.0 / (x * x)).sqrt();
    // u = (s-1)/(s+1) rationalized to avoid cancellation for large x.
    let u = 4.0 / (x * x * (s + 1.0) * (s + 1.0));
    let w = 2.0 / (1.0 + s); // 1 - u, stable for all x
    let (numerator, delta0) = if x < 1e-3 {
        // u -> 1 series in w = 1 - u:
        //   u ln u + (1+7u-8u^2)/(3u) = 2w + 5/6 w^2 + 1/2 w^3 + 5/12 w^4 + ...
        //   Delta0(u) = w^2/2 + w^3/6 + w^4/12 + w^5/20 + ...
        let n = w * (2.0 + w * (5.0 / 6.0 + w * (0.5 + w * 5.0 / 12.0)));
        let d0 = w * w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 12.0 + w / 20.0)));
        (n, d0)
    } else {
        let u_ln_u = (1.0 - w) * (-w).ln_1p();
        // 1 + 7u - 8u^2 factors as (1-u)(1+8u) = w (9 - 8w).
        let n = u_ln_u + w * (9.0 - 8.0 * w) / (3.0 * (1.0 - w));
        let d0 = u_ln_u + w;
        (n, d0)
    };
    let v = numerator / (2.0 * x);
    Table3Functions { u, v, pi: x / 3.0 + v, delta0, delta: delta0 / (2.0 * x) }
}

/// Ex-ante expected profit of the strategic trader (informed or not) for the
/// given model kind, in absolute units.
pub fn profits(kind: ModelKind, params: &ModelParams, branch: Branch) -> Result<f64> {
    let g = params.gamma;
    let s = params.sigma;
    match kind {
        ModelKind::KyleBenchmark => Ok(g * s),
        ModelKind::CompetitiveInsider => {
            let l = insider_lambda(params);
            Ok(g * g / (2.0 * l) + s * s * l / 2.0)
        }
        ModelKind::MakerInsider => {
            let l = insider_lambda(params);
            let phi = crate::equilibrium::mm_insider_phi(params, branch)?;
            let dm = phi - params.mu;
            Ok(dm * dm / (2.0 * l) + g * g / (2.0 * l) + l * s * s / 2.0)
        }
        ModelKind::CompetitiveStrategic => {
            strategic_lambda(params)?;
            Ok(params.rho * g * g * s * s / 4.0)
        }
        ModelKind::MakerStrategic => {
            strategic_lambda(params)?;
            Ok(params.rho * g * g * s * s / 3.0)
        }
    }
}

/// Expected CARA utility of the liquidity suppliers in equilibrium.
/// Competitive agents keep a positive utility for rho > 0; Bertrand
/// competition pins the market makers (and the Kyle benchmark) at zero.
pub fn liquidity_utility(kind: ModelKind, params: &ModelParams) -> f64 {
    if params.rho == 0.0 {
        return 0.0;
    }
    match kind {
        ModelKind::KyleBenchmark | ModelKind::MakerInsider | ModelKind::MakerStrategic => 0.0,
        ModelKind::CompetitiveInsider => {
            let l = insider_lambda(params);
            let x = l * params.rho * params.sigma * params.sigma;
            1.0 - l * params.sigma / params.gamma * (-x / 2.0).exp()
        }
        ModelKind::CompetitiveStrategic => {
            let l0 = 0.5 * params.rho * params.gamma * params.gamma;
            let x = l0 * params.rho * params.sigma * params.sigma;
            1.0 - (1.0 + x / 2.0).sqrt() * (-x / 2.0).exp()
        }
    }
}

/// Fraction (lambda - lambda_0)/lambda of the price impact attributable to
/// private information rather than inventory cost. Lies in (1/2, 1], falling
/// from 1 at rho_M -> 0 towards 1/2 as rho_M -> infinity.
pub fn adverse_selection_share(params: &ModelParams) -> Result<f64> {
    if params.rho == 0.0 {
        return Err(Error::DegenerateMarket(
            "adverse-selection share needs rho > 0 (lambda_0 undefined)".into(),
        ));
    }
    let g2 = params.gamma * params.gamma;
    let diff = (params.rho * params.rho * g2 * g2 / 4.0 + g2 / (params.sigma * params.sigma)).sqrt();
    Ok(diff / insider_lambda(params))
}

/// Quadratic value function of the strategic trader on a constant-slope
/// interval: psi(t, y) = (lambda (y - Y_anchor) + P_anchor - tilde_v)^2 /
/// (2 lambda) + sigma^2 lambda (1-t) / 2.
pub fn psi_value(
    params: &ModelParams,
    quote: &EquilibriumQuote,
    t: f64,
    y: f64,
    tilde_v: f64,
    y_anchor: f64,
    p_anchor: f64,
) -> f64 {
    let l = quote.lambda_pre;
    let mispricing = l * (y - y_anchor) + p_anchor - tilde_v;
    mispricing * mispricing / (2.0 * l) + params.sigma * params.sigma / 2.0 * l * (1.0 - t)
}

/// Optimal terminal bulk trade delta Y_1 = (tilde_v - c0 - (1+c1) P_{1-}) /
/// (2 lambda(1)). Errors if the quote violates condition C1, under which the
/// trader's profit is unbounded.
pub fn optimal_bulk_trade(p_pre: f64, quote: &EquilibriumQuote, tilde_v: f64) -> Result<f64> {
    if !quote.satisfies_c1() {
        return Err(Error::InfiniteProfit(format!(
            "quote violates C1: 2 lambda(1)/lambda(1-) = {} < (1+c1)^2 = {}",
            quote.c1_ratio(),
            (1.0 + quote.c1) * (1.0 + quote.c1)
        )));
    }
    Ok((tilde_v - quote.c0 - (1.0 + quote.c1) * p_pre) / (2.0 * quote.lambda_final))
}

/// Aggregated closed-form metrics for one model, as emitted by the CLI.
/// Fields that are undefined for the configuration (strategic-side values at
/// rho = 0, the adverse-selection share in the benchmark) are None.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsReport {
    pub kind: ModelKind,
    pub branch: Branch,
    pub params: ModelParams,
    pub rho_m: f64,
    pub depth: f64,
    /// Depth relative to the Kyle benchmark, lambda_K / lambda.
    pub relative_depth: f64,
    pub adverse_selection_share: Option<f64>,
    pub profit_insider: f64,
    pub profit_strategic: Option<f64>,
    /// Insider-minus-strategic profit, normalized by gamma sigma.
    pub value_of_info_normalized: f64,
    pub utility_liquidity: f64,
}

impl MetricsReport {
    pub fn compute(kind: ModelKind, params: &ModelParams, branch: Branch) -> Result<Self> {
        let params = params.validated()?;
        let rho_m = params.rho_m();
        let d = depth(kind, &params)?;
        let gs = params.gamma * params.sigma;
        let maker_side = kind.is_maker();
        let insider_profit_kind =
            if maker_side { ModelKind::MakerInsider } else { ModelKind::CompetitiveInsider };
        let strategic_profit_kind =
            if maker_side { ModelKind::MakerStrategic } else { ModelKind::CompetitiveStrategic };
        let profit_insider = if kind == ModelKind::KyleBenchmark {
            gs
        } else {
            profits(insider_profit_kind, &params, branch)?
        };
        let profit_strategic = if params.rho > 0.0 && kind != ModelKind::KyleBenchmark {
            Some(profits(strategic_profit_kind, &params, branch)?)
        } else {
            None
        };
        let value_of_info_normalized =
            (profit_insider - profit_strategic.unwrap_or(0.0)) / gs;
        Ok(MetricsReport {
            kind,
            branch,
            params,
            rho_m,
            depth: d,
            relative_depth: d * kyle_lambda(&params),
            adverse_selection_share: if params.rho > 0.0 && kind != ModelKind::KyleBenchmark {
                Some(adverse_selection_share(&params)?)
            } else {
                None
            },
            profit_insider,
            profit_strategic,
            value_of_info_normalized,
            utility_liquidity: liquidity_utility(kind, &params),
        })
    }

    pub fn efficiency(&self, t: f64) -> f64 {
        if self.kind == ModelKind::KyleBenchmark {
            self.params.gamma * self.params.gamma * (1.0 - t)
        } else {
            efficiency_sigma(t, &self.params)
        }
    }

    pub fn reversal(&self, s: f64) -> f64 {
        reversal_m(s, self.kind, &self.params)
    }
}
