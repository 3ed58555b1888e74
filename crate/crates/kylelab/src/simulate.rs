//! Path simulation for all five market models under both information views,
//! wealth accounting, and the Euler-Maruyama oracle used to cross-check the
//! exact-transition sampler.
//!
//! Exact transitions sample each grid step from its closed-form Gaussian
//! conditional law, so marginal laws are exact at any step count and the
//! terminal pinning of insider models holds to machine precision. Insider
//! views sample the pair (demand increment, noise increment) jointly so that
//! noise-trader wealth carries the correct demand/noise correlation.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::OuCoefficients;
use crate::equilibrium::{build_quote, EquilibriumQuote};
use crate::error::{Error, Result};
use crate::metrics::optimal_bulk_trade;
use crate::model::{Branch, ModelKind, ModelParams};

/// Whose information the simulated dynamics are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum View {
    /// The strategic trader's view: the true (V, Z, X, Y) decomposition.
    InsiderView,
    /// The liquidity suppliers' view: the demand follows its unconditioned
    /// OU law; no demand decomposition is observable, so the bundle carries
    /// Z = 0 and X = Y.
    MarketView,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scheme {
    /// Exact Gaussian transitions (conditioned on the terminal value where
    /// the model pins it).
    ExactTransition,
    /// Euler-Maruyama on the explicit drift, frozen at 1 - eps_terminal.
    EulerOracle { eps_terminal: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
    pub scheme: Scheme,
    pub view: View,
}

impl SimConfig {
    /// Desk-scale default: tight 3-SE tolerances within minutes.
    pub fn desk_scale(seed: u64, view: View) -> Self {
        SimConfig { n_paths: 200_000, n_steps: 2000, seed, scheme: Scheme::ExactTransition, view }
    }

    pub fn validated(self) -> Result<Self> {
        if self.n_paths == 0 {
            return Err(Error::domain("n_paths", "must be > 0"));
        }
        if self.n_steps < 2 {
            return Err(Error::domain("n_steps", "must be > 1"));
        }
        if let Scheme::EulerOracle { eps_terminal } = self.scheme {
            if !(eps_terminal > 0.0 && eps_terminal < 0.1) {
                return Err(Error::domain("eps_terminal", "must lie in (0, 0.1)"));
            }
        }
        Ok(self)
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.n_steps;
        (0..=n).map(|k| k as f64 / n as f64).collect()
    }
}

/// One discretized realization of (Z, X, Y, P) plus the terminal bulk trade.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathBundle {
    pub grid: Vec<f64>,
    /// Fundamental value revealed at t = 1.
    pub v: f64,
    /// Noise traders' cumulative demand.
    pub z: Vec<f64>,
    /// Strategic trader's cumulative demand.
    pub x: Vec<f64>,
    /// Total demand Y = X + Z.
    pub y: Vec<f64>,
    /// Pre-terminal price P_k = phi + lambda_pre Y_k.
    pub p: Vec<f64>,
    /// Terminal bulk trade delta Y_1.
    pub dy1: f64,
    /// Post-jump terminal price.
    pub p1: f64,
}

impl PathBundle {
    fn n(&self) -> usize {
        self.grid.len() - 1
    }

    /// Terminal price jump P_1 - P_{1-}.
    pub fn terminal_price_jump(&self) -> f64 {
        self.p1 - self.p[self.n()]
    }

    /// Strategic trader's wealth, integral of X_{s-} dP_s plus the terminal
    /// settlement X_1 (V - P_1), with left-point sums and the price jump at
    /// t = 1 carried by the pre-jump position.
    pub fn wealth_insider(&self) -> f64 {
        let n = self.n();
        let mut w = 0.0;
        for k in 0..n {
            w += self.x[k] * (self.p[k + 1] - self.p[k]);
        }
        let x1 = self.x[n] + self.dy1;
        w += self.x[n] * self.terminal_price_jump();
        w + x1 * (self.v - self.p1)
    }

    /// Same wealth through the other representation, integral of
    /// (V - P_s) dX_s with trades priced post-impact. Agrees with
    /// `wealth_insider` exactly under the discrete convention.
    pub fn wealth_insider_via_dx(&self) -> f64 {
        let n = self.n();
        let mut w = 0.0;
        for k in 0..n {
            w += (self.v - self.p[k + 1]) * (self.x[k + 1] - self.x[k]);
        }
        w + (self.v - self.p1) * self.dy1
    }

    /// Noise traders' wealth under the same convention. Noise traders do not
    /// participate in the terminal auction, so their final position is Z_{1-}.
    pub fn wealth_noise(&self) -> f64 {
        let n = self.n();
        let mut w = 0.0;
        for k in 0..n {
            w += self.z[k] * (self.p[k + 1] - self.p[k]);
        }
        w += self.z[n] * self.terminal_price_jump();
        w + self.z[n] * (self.v - self.p1)
    }

    /// Aggregate liquidity-supplier gains
    /// G_1 = -integral Y_{s-} dP_s + Y_1 (P_1 - V).
    pub fn wealth_liquidity(&self) -> f64 {
        let n = self.n();
        let mut w = 0.0;
        for k in 0..n {
            w += self.y[k] * (self.p[k + 1] - self.p[k]);
        }
        w += self.y[n] * self.terminal_price_jump();
        let y1 = self.y[n] + self.dy1;
        -w + y1 * (self.p1 - self.v)
    }
}

/// A model bound to its equilibrium quote and demand coefficients.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: ModelParams,
    pub kind: ModelKind,
    pub branch: Branch,
    pub quote: EquilibriumQuote,
    coeffs: OuCoefficients,
}

impl Scenario {
    pub fn new(params: ModelParams, kind: ModelKind, branch: Branch) -> Result<Self> {
        let params = params.validated()?;
        let quote = build_quote(&params, kind, branch)?;
        let coeffs = match kind {
            ModelKind::KyleBenchmark => {
                // Risk-neutral providers: no mean reversion regardless of rho.
                let neutral = ModelParams { rho: 0.0, ..params };
                OuCoefficients::canonical(quote.lambda_pre, &neutral, 0.0)
            }
            ModelKind::CompetitiveInsider => OuCoefficients::canonical(quote.lambda_pre, &params, 0.0),
            ModelKind::MakerInsider => {
                OuCoefficients::canonical(quote.lambda_pre, &params, branch.sign())
            }
            // dX = -(lambda0 sigma^2 rho / (2 + lambda0 rho sigma^2 (1-t))) Y dt
            // is the canonical family at half the slope.
            ModelKind::CompetitiveStrategic => {
                OuCoefficients::canonical(0.5 * quote.lambda_pre, &params, 0.0)
            }
            ModelKind::MakerStrategic => {
                let a = -params.rho * params.rho * params.gamma * params.gamma / 4.0;
                let b = -params.rho * (params.mu - quote.phi) / 2.0;
                OuCoefficients::constant(a, b, params.sigma)
            }
        };
        Ok(Scenario { params, kind, branch, quote, coeffs })
    }

    pub fn coefficients(&self) -> &OuCoefficients {
        &self.coeffs
    }

    /// Demand level the insider steers Y to at t = 1.
    pub fn pin_target(&self, v: f64) -> f64 {
        (v - self.quote.phi) / self.quote.lambda_pre
    }

    /// The strategic trader's valuation of V.
    pub fn tilde_v(&self, v: f64) -> f64 {
        if self.kind.is_insider() {
            v
        } else {
            self.params.mu
        }
    }

    fn price(&self, y: f64) -> f64 {
        self.quote.phi + self.quote.lambda_pre * y
    }

    fn finish_bundle(&self, grid: Vec<f64>, v: f64, z: Vec<f64>, y: Vec<f64>) -> PathBundle {
        let p: Vec<f64> = y.iter().map(|&yk| self.price(yk)).collect();
        let x: Vec<f64> = y.iter().zip(&z).map(|(&yk, &zk)| yk - zk).collect();
        let p_pre = p[p.len() - 1];
        let dy1 = optimal_bulk_trade(p_pre, &self.quote, self.tilde_v(v))
            .expect("equilibrium quotes satisfy condition C1");
        let p1 = p_pre + (self.quote.c1 * p_pre + self.quote.c0) + self.quote.lambda_final * dy1;
        PathBundle { grid, v, z, x, y, p, dy1, p1 }
    }
}

/// Per-path RNG substream: ChaCha12 keyed by the run seed with the path index
/// as the stream counter, giving 2^64 independent streams whose draws do not
/// depend on scheduling.
pub fn path_rng(seed: u64, path_index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

fn normal(rng: &mut ChaCha12Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// V ~ Normal(mu, gamma^2).
pub fn draw_fundamental(params: &ModelParams, rng: &mut ChaCha12Rng) -> f64 {
    params.mu + params.gamma * normal(rng)
}

/// Simulates (V, Z, X, Y, P) under the strategic trader's information with
/// exact Gaussian transitions. Insider models sample the demand as an OU
/// bridge pinned on (V - phi)/lambda and draw the noise increment from its
/// exact conditional law given the demand increment.
pub fn simulate_insider_view(
    scenario: &Scenario,
    config: &SimConfig,
    rng: &mut ChaCha12Rng,
) -> PathBundle {
    let v = draw_fundamental(&scenario.params, rng);
    simulate_insider_view_given(scenario, config, v, rng)
}

/// Insider-view path conditional on a supplied fundamental value.
pub fn simulate_insider_view_given(
    scenario: &Scenario,
    config: &SimConfig,
    v: f64,
    rng: &mut ChaCha12Rng,
) -> PathBundle {
    let grid = config.grid();
    let n = config.n_steps;
    let coeffs = scenario.coefficients();
    let sigma2 = scenario.params.sigma * scenario.params.sigma;

    let pinned = scenario.kind.is_insider();
    let target = scenario.pin_target(v);

    let mut y = vec![0.0; n + 1];
    let mut z = vec![0.0; n + 1];
    for k in 0..n {
        let (s, t) = (grid[k], grid[k + 1]);
        let dt = t - s;
        let xi1: f64 = normal(rng);
        let xi2: f64 = normal(rng);
        let (mean, var, cov) = if pinned {
            coeffs.bridge_step(s, t, y[k], target)
        } else {
            let (m, var) = coeffs.ou_moments(s, t, y[k]);
            (m, var, coeffs.noise_cov(s, t))
        };
        if var > 0.0 {
            let dy_noise = var.sqrt() * xi1;
            y[k + 1] = mean + dy_noise;
            let resid_var = (sigma2 * dt - cov * cov / var).max(0.0);
            z[k + 1] = z[k] + cov / var * dy_noise + resid_var.sqrt() * xi2;
        } else {
            // Degenerate final bridge step: the demand is pinned and the
            // noise increment is independent of it.
            y[k + 1] = mean;
            z[k + 1] = z[k] + sigma2.sqrt() * dt.sqrt() * xi2;
        }
    }
    scenario.finish_bundle(grid, v, z, y)
}

/// Simulates the demand under the liquidity suppliers' view: the plain OU law
/// with exact transitions. For insider models the terminal price reveals the
/// fundamental, so V is set to P at the final grid point; for strategic
/// models V is drawn independently of the path.
pub fn simulate_market_view(
    scenario: &Scenario,
    config: &SimConfig,
    rng: &mut ChaCha12Rng,
) -> PathBundle {
    let grid = config.grid();
    let v_drawn = if scenario.kind.is_insider() {
        None
    } else {
        Some(draw_fundamental(&scenario.params, rng))
    };
    let y = ou_path(scenario.coefficients(), &grid, 0.0, rng);
    let v = v_drawn.unwrap_or_else(|| scenario.price(y[y.len() - 1]));
    let z = vec![0.0; grid.len()];
    scenario.finish_bundle(grid, v, z, y)
}

/// Exact-transition OU path on an arbitrary grid, starting from y0.
pub fn ou_path(coeffs: &OuCoefficients, grid: &[f64], y0: f64, rng: &mut ChaCha12Rng) -> Vec<f64> {
    let mut y = Vec::with_capacity(grid.len());
    y.push(y0);
    for k in 0..grid.len() - 1 {
        let (mean, var) = coeffs.ou_moments(grid[k], grid[k + 1], y[k]);
        y.push(mean + var.max(0.0).sqrt() * normal(rng));
    }
    y
}

/// Euler-Maruyama oracle on the insider-view SDE with the drift evaluated at
/// min(t, 1 - eps). Independent of the exact-transition path; used to verify
/// it distributionally and to measure the bridge convergence rate.
pub fn euler_oracle_path(
    scenario: &Scenario,
    config: &SimConfig,
    rng: &mut ChaCha12Rng,
) -> Result<PathBundle> {
    let eps = match config.scheme {
        Scheme::EulerOracle { eps_terminal } => eps_terminal,
        Scheme::ExactTransition => {
            return Err(Error::domain("scheme", "euler_oracle_path needs Scheme::EulerOracle"))
        }
    };
    let grid = config.grid();
    let n = config.n_steps;
    let coeffs = scenario.coefficients();
    let sigma = scenario.params.sigma;
    let sigma2 = sigma * sigma;

    let v = draw_fundamental(&scenario.params, rng);
    let pinned = scenario.kind.is_insider();
    let target = scenario.pin_target(v);

    let mut y = vec![0.0; n + 1];
    let mut z = vec![0.0; n + 1];
    for k in 0..n {
        let t = grid[k];
        let dt = grid[k + 1] - t;
        let td = t.min(1.0 - eps);
        let mut drift = sigma2 * (coeffs.a(td) * y[k] + coeffs.b(td));
        if pinned {
            drift += sigma2 * coeffs.bridge_score(td, y[k], target)?;
        }
        let dz = sigma * dt.sqrt() * normal(rng);
        y[k + 1] = y[k] + drift * dt + dz;
        z[k + 1] = z[k] + dz;
    }
    Ok(scenario.finish_bundle(grid, v, z, y))
}

/// Simulates one path per the config's view/scheme from its own substream.
pub fn simulate_path(scenario: &Scenario, config: &SimConfig, path_index: u64) -> PathBundle {
    let mut rng = path_rng(config.seed, path_index);
    match (config.view, config.scheme) {
        (View::InsiderView, Scheme::ExactTransition) => {
            simulate_insider_view(scenario, config, &mut rng)
        }
        (View::MarketView, Scheme::ExactTransition) => {
            simulate_market_view(scenario, config, &mut rng)
        }
        (_, Scheme::EulerOracle { .. }) => euler_oracle_path(scenario, config, &mut rng)
            .expect("validated euler config"),
    }
}

/// Maps every path to a statistic, in parallel, preserving path order so the
/// result is identical for any thread count.
pub fn run_ensemble<T, F>(scenario: &Scenario, config: &SimConfig, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&PathBundle) -> T + Sync,
{
    (0..config.n_paths as u64)
        .into_par_iter()
        .map(|i| f(&simulate_path(scenario, config, i)))
        .collect()
}

/// Cross-path mean of (Y, P) at every grid point, reduced blockwise in a
/// fixed order so the output is bit-identical for any thread count.
pub fn mean_path(scenario: &Scenario, config: &SimConfig) -> (Vec<f64>, Vec<f64>) {
    const BLOCK: usize = 1024;
    let n_pts = config.n_steps + 1;
    let n_paths = config.n_paths;
    let n_blocks = n_paths.div_ceil(BLOCK);
    let partials: Vec<(Vec<f64>, Vec<f64>)> = (0..n_blocks)
        .into_par_iter()
        .map(|blk| {
            let mut sy = vec![0.0; n_pts];
            let mut sp = vec![0.0; n_pts];
            let lo = blk * BLOCK;
            let hi = ((blk + 1) * BLOCK).min(n_paths);
            for i in lo..hi {
                let b = simulate_path(scenario, config, i as u64);
                for k in 0..n_pts {
                    sy[k] += b.y[k];
                    sp[k] += b.p[k];
                }
            }
            (sy, sp)
        })
        .collect();
    let mut my = vec![0.0; n_pts];
    let mut mp = vec![0.0; n_pts];
    for (sy, sp) in &partials {
        for k in 0..n_pts {
            my[k] += sy[k];
            mp[k] += sp[k];
        }
    }
    for k in 0..n_pts {
        my[k] /= n_paths as f64;
        mp[k] /= n_paths as f64;
    }
    (my, mp)
}

/// Pathwise liquidity-supplier gains computed from the exactly-sampled
/// terminal state instead of the discretized integral: continuous-time
/// integration by parts gives G_1 = lambda/2 (sigma^2 - Y_{1-}^2) plus the
/// model's terminal-trade terms. Used as the variance-reduced estimator for
/// exponential-utility checks (the raw integral carries O(dt) bias).
pub fn liquidity_gain_exact(scenario: &Scenario, bundle: &PathBundle) -> f64 {
    let q = &scenario.quote;
    let n = bundle.grid.len() - 1;
    let y_pre = bundle.y[n];
    let sigma2 = scenario.params.sigma * scenario.params.sigma;
    let base = 0.5 * q.lambda_pre * (sigma2 - y_pre * y_pre);
    match scenario.kind {
        // P_1 = V and no bulk trade: the base term is everything.
        ModelKind::KyleBenchmark | ModelKind::CompetitiveInsider | ModelKind::MakerInsider => base,
        _ => {
            let y1 = y_pre + bundle.dy1;
            base - y_pre * bundle.terminal_price_jump() + y1 * (bundle.p1 - bundle.v)
        }
    }
}
