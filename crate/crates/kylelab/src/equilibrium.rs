//! Closed-form equilibrium quotes for every model kind.
//!
//! A quote is the linear pricing rule P_t = phi + lambda_pre * Y_t on [0,1)
//! together with the terminal rule: at t = 1 the intercept jumps by
//! c1 * P_{1-} + c0 and the final bulk trade dY_1 executes at slope
//! lambda_final.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Branch, ModelKind, ModelParams};
use crate::numeric::x_minus_ln1p;

/// Linear equilibrium pricing rule with terminal bulk-trade parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumQuote {
    /// Slope lambda(t) for t < 1.
    pub lambda_pre: f64,
    /// Slope lambda(1) applied to the terminal bulk trade.
    pub lambda_final: f64,
    /// Intercept phi, constant on [0,1).
    pub phi: f64,
    /// Terminal intercept jump: delta phi = c1 * P_{1-} + c0.
    pub c0: f64,
    pub c1: f64,
    /// Initial price P_0 (= phi for every model here).
    pub p0: f64,
}

impl EquilibriumQuote {
    /// Left-hand side of condition C1: 2 lambda(1) / lambda(1-).
    pub fn c1_ratio(&self) -> f64 {
        2.0 * self.lambda_final / self.lambda_pre
    }

    /// Finite trader profit requires 2 lambda(1)/lambda(1-) >= (1+c1)^2.
    pub fn satisfies_c1(&self) -> bool {
        self.c1_ratio() >= (1.0 + self.c1).powi(2) - 1e-12
    }
}

/// Slope of the risk-neutral benchmark: lambda_K = gamma / sigma.
pub fn kyle_lambda(params: &ModelParams) -> f64 {
    params.gamma / params.sigma
}

/// Equilibrium slope with an informed trader,
/// lambda* = rho gamma^2 / 2 + sqrt(rho^2 gamma^4 / 4 + gamma^2 / sigma^2).
/// Identical for competitive agents and market makers; reduces to
/// `kyle_lambda` at rho = 0.
pub fn insider_lambda(params: &ModelParams) -> f64 {
    let g2 = params.gamma * params.gamma;
    let half = 0.5 * params.rho * g2;
    half + (half * half + g2 / (params.sigma * params.sigma)).sqrt()
}

/// Pre-terminal slope with an uninformed strategic trader,
/// lambda_0 = rho gamma^2 / 2. Requires rho > 0.
pub fn strategic_lambda(params: &ModelParams) -> Result<f64> {
    if params.rho <= 0.0 {
        return Err(Error::DegenerateMarket(
            "strategic-trader equilibria need rho > 0 (slope collapses to zero)".into(),
        ));
    }
    Ok(0.5 * params.rho * params.gamma * params.gamma)
}

/// Quote intercepts for the maker-insider equilibria,
/// phi*_i = mu - (-1)^i / rho * sqrt(rho^2 gamma^2
///          + 2 rho gamma^2 / (lambda* sigma^2) * ln(gamma / (lambda* sigma))).
///
/// Evaluated through the algebraically equal but cancellation-free form
/// radicand = lambda* rho (x0 - ln(1+x0)) / (1+x0) with x0 = lambda* rho sigma^2.
/// At rho = 0 the branches merge continuously into mu.
pub fn mm_insider_phi(params: &ModelParams, branch: Branch) -> Result<f64> {
    if params.rho == 0.0 {
        return Ok(params.mu);
    }
    let lambda = insider_lambda(params);
    let x0 = lambda * params.rho * params.sigma * params.sigma;
    let radicand = lambda * params.rho * x_minus_ln1p(x0) / (1.0 + x0);
    if radicand < 0.0 {
        return Err(Error::NumericalDomain(format!(
            "mm_insider_phi radicand negative: {radicand}"
        )));
    }
    Ok(params.mu - branch.sign() * radicand.sqrt() / params.rho)
}

/// Quote intercepts for the maker-strategic equilibria,
/// phi*_i = (-1)^i rho sigma gamma^2 / (2 sqrt 3) + mu.
pub fn mm_strategic_phi(params: &ModelParams, branch: Branch) -> f64 {
    params.mu + branch.sign() * params.rho * params.sigma * params.gamma * params.gamma / (2.0 * 3.0f64.sqrt())
}

/// Builds the full equilibrium quote for a model kind.
pub fn build_quote(params: &ModelParams, kind: ModelKind, branch: Branch) -> Result<EquilibriumQuote> {
    params.validated()?;
    let quote = match kind {
        ModelKind::KyleBenchmark => {
            let l = kyle_lambda(params);
            EquilibriumQuote { lambda_pre: l, lambda_final: l, phi: params.mu, c0: 0.0, c1: 0.0, p0: params.mu }
        }
        ModelKind::CompetitiveInsider => {
            let l = insider_lambda(params);
            EquilibriumQuote { lambda_pre: l, lambda_final: l, phi: params.mu, c0: 0.0, c1: 0.0, p0: params.mu }
        }
        ModelKind::CompetitiveStrategic => {
            let l0 = strategic_lambda(params)?;
            EquilibriumQuote {
                lambda_pre: l0,
                lambda_final: 2.0 * l0,
                phi: params.mu,
                c0: -params.mu,
                c1: 1.0,
                p0: params.mu,
            }
        }
        ModelKind::MakerInsider => {
            let l = insider_lambda(params);
            let phi = mm_insider_phi(params, branch)?;
            EquilibriumQuote { lambda_pre: l, lambda_final: 0.5 * l, phi, c0: 0.0, c1: 0.0, p0: phi }
        }
        ModelKind::MakerStrategic => {
            let l0 = strategic_lambda(params)?;
            let phi = mm_strategic_phi(params, branch);
            EquilibriumQuote { lambda_pre: l0, lambda_final: 0.5 * l0, phi, c0: 0.0, c1: 0.0, p0: phi }
        }
    };
    debug_assert!(quote.lambda_pre > 0.0 && quote.lambda_final > 0.0);
    debug_assert!(quote.satisfies_c1());
    Ok(quote)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::logspace;
    use approx::assert_abs_diff_eq;

    fn p(mu: f64, gamma: f64, sigma: f64, rho: f64) -> ModelParams {
        ModelParams::new(mu, gamma, sigma, rho).unwrap()
    }

    #[test]
    fn kyle_lambda_ratios() {
        assert_eq!(kyle_lambda(&p(0., 1., 1., 0.)), 1.0);
        assert_eq!(kyle_lambda(&p(0., 2., 4., 0.)), 0.5);
        assert_abs_diff_eq!(kyle_lambda(&p(0., 1., 0.1, 0.)), 10.0, epsilon = 1e-14);
    }

    #[test]
    fn insider_lambda_closed_form() {
        // rho = 0 reduces to the Kyle slope.
        assert_abs_diff_eq!(insider_lambda(&p(0., 1., 1., 0.)), 1.0, epsilon = 1e-15);
        // 1 + sqrt(2) and the golden ratio, from independent high-precision evaluation.
        assert_abs_diff_eq!(insider_lambda(&p(0., 1., 1., 2.)), 2.4142135623730951, epsilon = 1e-15);
        assert_abs_diff_eq!(insider_lambda(&p(0., 1., 1., 1.)), 1.6180339887498949, epsilon = 1e-15);
    }

    #[test]
    fn insider_lambda_reduces_to_kyle_on_grid() {
        for gamma in logspace(0.1, 10.0, 5) {
            for sigma in logspace(0.1, 10.0, 5) {
                let d = (insider_lambda(&p(0., gamma, sigma, 0.)) - gamma / sigma).abs();
                assert!(d < 1e-12, "gamma={gamma} sigma={sigma} diff={d}");
            }
        }
    }

    #[test]
    fn strategic_lambda_values_and_degeneracy() {
        assert_abs_diff_eq!(strategic_lambda(&p(0., 1., 1., 2.)).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(strategic_lambda(&p(0., 2., 1., 1.)).unwrap(), 2.0, epsilon = 1e-15);
        assert!(matches!(strategic_lambda(&p(0., 1., 1., 0.)), Err(Error::DegenerateMarket(_))));
    }

    #[test]
    fn mm_insider_phi_matches_oracle() {
        // Frozen from mpmath evaluation of the theorem formula at mu=0, gamma=sigma=rho=1.
        let phi1 = mm_insider_phi(&p(0., 1., 1., 1.), Branch::ONE).unwrap();
        assert_abs_diff_eq!(phi1, 0.6365449494337327, epsilon = 1e-13);
        let phi2 = mm_insider_phi(&p(0., 1., 1., 1.), Branch::TWO).unwrap();
        assert_abs_diff_eq!(phi2, -0.6365449494337327, epsilon = 1e-13);
        // Translation by mu.
        let phi1_mu = mm_insider_phi(&p(5., 1., 1., 1.), Branch::ONE).unwrap();
        assert_abs_diff_eq!(phi1_mu, 5.6365449494337327, epsilon = 1e-12);
    }

    #[test]
    fn mm_insider_phi_stable_form_matches_literal_formula() {
        // The implementation uses the cancellation-free radicand; compare with
        // the literal theorem expression where it is well-conditioned.
        for rho in [0.25, 0.5, 1.0, 2.0, 5.0] {
            for (gamma, sigma) in [(1.0, 1.0), (2.0, 0.5), (0.3, 3.0)] {
                let pr = p(0., gamma, sigma, rho);
                let lambda = insider_lambda(&pr);
                let literal = rho * rho * gamma * gamma
                    + 2.0 * rho * gamma * gamma / (lambda * sigma * sigma)
                        * (gamma / (lambda * sigma)).ln();
                assert!(literal > 0.0, "radicand must be positive");
                let phi1 = mm_insider_phi(&pr, Branch::ONE).unwrap();
                assert_abs_diff_eq!(phi1, literal.sqrt() / rho, epsilon = 1e-10 * (1.0 + literal.sqrt() / rho));
            }
        }
    }

    #[test]
    fn mm_insider_phi_branch_symmetry() {
        for mu in [0.0, 1.0, -3.0] {
            for rho in [0.01, 0.5, 1.0, 4.0] {
                let pr = p(mu, 1.3, 0.7, rho);
                let s = mm_insider_phi(&pr, Branch::ONE).unwrap() + mm_insider_phi(&pr, Branch::TWO).unwrap();
                assert_abs_diff_eq!(s, 2.0 * mu, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn mm_insider_phi_risk_neutral_limit_is_mu() {
        assert_eq!(mm_insider_phi(&p(3., 1., 1., 0.), Branch::ONE).unwrap(), 3.0);
        // Continuity: tiny rho stays near mu.
        let phi = mm_insider_phi(&p(3., 1., 1., 1e-10), Branch::TWO).unwrap();
        assert!((phi - 3.0).abs() < 1e-4, "phi={phi}");
    }

    #[test]
    fn mm_strategic_phi_values() {
        let v = mm_strategic_phi(&p(0., 1., 1., 1.), Branch::TWO);
        assert_abs_diff_eq!(v, 0.2886751345948129, epsilon = 1e-15);
        let v = mm_strategic_phi(&p(0., 1., 1., 1.), Branch::ONE);
        assert_abs_diff_eq!(v, -0.2886751345948129, epsilon = 1e-15);
        // Vanishing risk aversion.
        assert_abs_diff_eq!(mm_strategic_phi(&p(0., 1., 1., 1e-12), Branch::ONE), 0.0, epsilon = 1e-12);
        // Branch symmetry about mu.
        let s = mm_strategic_phi(&p(2., 1.5, 0.4, 0.9), Branch::ONE)
            + mm_strategic_phi(&p(2., 1.5, 0.4, 0.9), Branch::TWO);
        assert_abs_diff_eq!(s, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn build_quote_kyle() {
        let q = build_quote(&p(0., 1., 1., 0.), ModelKind::KyleBenchmark, Branch::ONE).unwrap();
        assert_eq!(q.lambda_pre, 1.0);
        assert_eq!(q.lambda_final, 1.0);
        assert_eq!(q.phi, 0.0);
        assert_eq!((q.c0, q.c1), (0.0, 0.0));
        assert_eq!(q.p0, 0.0);
    }

    #[test]
    fn build_quote_competitive_strategic() {
        let q = build_quote(&p(0., 1., 1., 2.), ModelKind::CompetitiveStrategic, Branch::ONE).unwrap();
        assert_abs_diff_eq!(q.lambda_pre, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.lambda_final, 2.0, epsilon = 1e-15);
        assert_eq!(q.c1, 1.0);
        assert_eq!(q.c0, 0.0);
    }

    #[test]
    fn build_quote_maker_insider() {
        let q = build_quote(&p(0., 1., 1., 1.), ModelKind::MakerInsider, Branch::ONE).unwrap();
        assert_abs_diff_eq!(q.lambda_pre, 1.6180339887498949, epsilon = 1e-14);
        assert_abs_diff_eq!(q.lambda_final, 0.8090169943749475, epsilon = 1e-14);
        assert_abs_diff_eq!(q.phi, 0.6365449494337327, epsilon = 1e-13);
        assert_eq!(q.p0, q.phi);
    }

    #[test]
    fn condition_c1_equality_pattern() {
        let pr = p(0.3, 1.2, 0.8, 1.1);
        for kind in ModelKind::ALL {
            let q = build_quote(&pr, kind, Branch::TWO).unwrap();
            let lhs = q.c1_ratio();
            let rhs = (1.0 + q.c1) * (1.0 + q.c1);
            assert!(lhs >= rhs - 1e-12, "{kind}: C1 violated");
            let equality = matches!(
                kind,
                ModelKind::CompetitiveStrategic | ModelKind::MakerInsider | ModelKind::MakerStrategic
            );
            if equality {
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
                // C2: strategic kinds need c0 = -mu c1; insider kinds c0 = c1 = 0.
                if kind.is_strategic() {
                    assert_abs_diff_eq!(q.c0, -pr.mu * q.c1, epsilon = 1e-12);
                } else {
                    assert_eq!((q.c0, q.c1), (0.0, 0.0));
                }
            } else {
                assert!(lhs > rhs + 0.5);
            }
        }
    }

    #[test]
    fn lambda_star_exceeds_lambda0() {
        for rho in logspace(0.01, 10.0, 20) {
            let pr = p(0., 1., 1., rho);
            assert!(insider_lambda(&pr) > strategic_lambda(&pr).unwrap());
        }
    }

    #[test]
    fn strategic_kinds_degenerate_at_rho_zero() {
        for kind in [ModelKind::CompetitiveStrategic, ModelKind::MakerStrategic] {
            let e = build_quote(&p(0., 1., 1., 0.), kind, Branch::ONE).unwrap_err();
            assert!(matches!(e, Error::DegenerateMarket(_)));
        }
    }

    #[test]
    fn maker_insider_risk_neutral_coincides_with_kyle_on_grid() {
        for gamma in logspace(0.2, 5.0, 4) {
            for sigma in logspace(0.2, 5.0, 4) {
                let pr = p(0.7, gamma, sigma, 0.0);
                let q = build_quote(&pr, ModelKind::MakerInsider, Branch::ONE).unwrap();
                assert_abs_diff_eq!(q.lambda_pre, gamma / sigma, epsilon = 1e-12);
                assert_eq!(q.phi, 0.7);
            }
        }
    }
}
