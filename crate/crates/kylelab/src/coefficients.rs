//! Time-dependent coefficients of the equilibrium Ornstein-Uhlenbeck demand
//! dynamics dY = sigma^2 (a(t) Y + b(t)) dt + sigma dB, their Gaussian
//! transition machinery, the exponential-martingale exponents, and the
//! h-transform score used to condition paths on their terminal value.
//!
//! Two coefficient families cover every model kind:
//! - `Canonical`: a(t) = -lambda rho / (1 + lambda rho sigma^2 (1-t)) with b
//!   either zero or the branch-signed square-root form tied to it. Used by
//!   the insider models (b signed for market makers, b = 0 for competitive
//!   agents and Kyle) and, with a halved slope, by the competitive-strategic
//!   model.
//! - `Constant`: time-independent (a, b), used by the maker-strategic model.
//!
//! All quantities are evaluated lazily from closed forms; adaptive quadrature
//! only appears in tests as the independent oracle.

use crate::error::{Error, Result};
use crate::model::{Branch, ModelParams};
use crate::numeric::{expm1_over_x, ln1p_diff_over_c, x_minus_ln1p};

/// Mean-reversion coefficient a(t) = -lambda rho / (1 + lambda rho sigma^2 (1-t)).
pub fn a_coeff(t: f64, lambda: f64, params: &ModelParams) -> f64 {
    let lr = lambda * params.rho;
    -lr / (1.0 + lr * params.sigma * params.sigma * (1.0 - t))
}

/// Branch-signed drift intercept of the maker-insider demand,
/// b_i(t) = (-1)^i (1/2) ln(1+x) sqrt(a(t) / (ln(1+x) - x)), x = lambda rho sigma^2 (1-t).
///
/// Both numerator and denominator of the inner ratio are negative; it is
/// computed as a positive quantity. The t -> 1 limit is (-1)^i sqrt(lambda rho / 2):
/// the vanishing log factor is exactly offset by the diverging square root.
pub fn b_mm_insider(t: f64, lambda: f64, params: &ModelParams, branch: Branch) -> Result<f64> {
    let lr = lambda * params.rho;
    if lr == 0.0 {
        return Ok(0.0);
    }
    let x = lr * params.sigma * params.sigma * (1.0 - t);
    if x < -1e-12 {
        return Err(Error::SingularTime(format!("b_mm_insider needs t <= 1, got t={t}")));
    }
    if x <= 0.0 {
        return Ok(branch.sign() * (lr / 2.0).sqrt());
    }
    let gap = x_minus_ln1p(x);
    let ratio = lr / ((1.0 + x) * gap);
    if ratio < 0.0 {
        return Err(Error::NumericalDomain(format!("b_mm_insider ratio negative: {ratio}")));
    }
    Ok(branch.sign() * 0.5 * x.ln_1p() * ratio.sqrt())
}

/// Antiderivative A(t) = integral_0^t a(s) ds, in closed form
/// (1/sigma^2) [ln(1 + lambda rho sigma^2 (1-t)) - ln(1 + lambda rho sigma^2)].
pub fn big_a(t: f64, lambda: f64, params: &ModelParams) -> f64 {
    let s2 = params.sigma * params.sigma;
    let c = lambda * params.rho * s2;
    ((c * (1.0 - t)).ln_1p() - c.ln_1p()) / s2
}

/// Exponents (alpha0, alpha1, alpha2)(t) of the liquidity suppliers'
/// utility martingale M_t = exp(alpha0 + alpha1 Y + alpha2 Y^2):
/// alpha0(t) = -lambda rho sigma^2 t / 2, alpha2(t) = -a(t)/2, and
/// alpha1,i(t) = (-1)^i sqrt(-a(t) (x - ln(1+x))), x = lambda rho sigma^2 (1-t).
/// All three vanish identically at rho = 0.
pub fn alpha_coeffs(t: f64, lambda: f64, params: &ModelParams, branch: Branch) -> Result<(f64, f64, f64)> {
    let lr = lambda * params.rho;
    let s2 = params.sigma * params.sigma;
    let x = lr * s2 * (1.0 - t);
    let a = a_coeff(t, lambda, params);
    let v = -a * x_minus_ln1p(x);
    if v < 0.0 {
        return Err(Error::NumericalDomain(format!("alpha1 radicand negative: {v}")));
    }
    let alpha0 = -0.5 * lr * s2 * t;
    let alpha1 = branch.sign() * v.sqrt();
    let alpha2 = -0.5 * a;
    Ok((alpha0, alpha1, alpha2))
}

/// Coefficient family of the total-demand OU dynamics
/// dY = sigma^2 (a(t) Y + b(t)) dt + sigma dB.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Family {
    /// a(t) = -lambda rho / (1 + lambda rho sigma^2 (1-t)); b is `b_sign`
    /// times the square-root form tied to the same (lambda, rho).
    Canonical { lambda: f64, b_sign: f64 },
    /// Time-independent a and b.
    Constant { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuCoefficients {
    family: Family,
    rho: f64,
    sigma: f64,
}

impl OuCoefficients {
    /// Canonical family; `b_sign` in {-1, 0, +1}.
    pub fn canonical(lambda: f64, params: &ModelParams, b_sign: f64) -> Self {
        debug_assert!(b_sign == 0.0 || b_sign == 1.0 || b_sign == -1.0);
        OuCoefficients {
            family: Family::Canonical { lambda, b_sign },
            rho: params.rho,
            sigma: params.sigma,
        }
    }

    /// Constant-coefficient family.
    pub fn constant(a: f64, b: f64, sigma: f64) -> Self {
        OuCoefficients { family: Family::Constant { a, b }, rho: 0.0, sigma }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    fn params_like(&self) -> ModelParams {
        // a/b/A only read sigma and rho.
        ModelParams { mu: 0.0, gamma: 1.0, sigma: self.sigma, rho: self.rho }
    }

    /// lambda rho sigma^2, the canonical family's curvature scale (0 for constant).
    fn c(&self) -> f64 {
        match self.family {
            Family::Canonical { lambda, .. } => lambda * self.rho * self.sigma * self.sigma,
            Family::Constant { .. } => 0.0,
        }
    }

    pub fn a(&self, t: f64) -> f64 {
        match self.family {
            Family::Canonical { lambda, .. } => a_coeff(t, lambda, &self.params_like()),
            Family::Constant { a, .. } => a,
        }
    }

    pub fn b(&self, t: f64) -> f64 {
        match self.family {
            Family::Canonical { b_sign, .. } if b_sign == 0.0 => 0.0,
            Family::Canonical { lambda, b_sign } => {
                let branch = if b_sign < 0.0 { Branch::ONE } else { Branch::TWO };
                b_mm_insider(t, lambda, &self.params_like(), branch)
                    .expect("canonical b defined on [0,1]")
            }
            Family::Constant { b, .. } => b,
        }
    }

    pub fn big_a(&self, t: f64) -> f64 {
        match self.family {
            Family::Canonical { lambda, .. } => big_a(t, lambda, &self.params_like()),
            Family::Constant { a, .. } => a * t,
        }
    }

    /// State-transition factor exp(sigma^2 (A(t) - A(s))) of the homogeneous part.
    pub fn mean_factor(&self, s: f64, t: f64) -> f64 {
        match self.family {
            Family::Canonical { .. } => {
                let c = self.c();
                (1.0 + c * (1.0 - t)) / (1.0 + c * (1.0 - s))
            }
            Family::Constant { a, .. } => (self.sigma * self.sigma * a * (t - s)).exp(),
        }
    }

    /// Conditional variance v^2(s,t) of Y_t given Y_s.
    pub fn v2(&self, s: f64, t: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        match self.family {
            Family::Canonical { .. } => s2 * (t - s) * self.mean_factor(s, t),
            Family::Constant { a, .. } => {
                let z = 2.0 * s2 * a * (t - s);
                s2 * (t - s) * expm1_over_x(z)
            }
        }
    }

    /// Drift contribution integral_s^t exp(sigma^2 (A(t)-A(r))) sigma^2 b(r) dr.
    pub fn b_integral(&self, s: f64, t: f64) -> f64 {
        match self.family {
            Family::Canonical { b_sign, .. } if b_sign == 0.0 => 0.0,
            Family::Canonical { lambda, b_sign } => {
                let lr = lambda * self.rho;
                if lr == 0.0 {
                    return 0.0;
                }
                // integral of mean_factor * sigma^2 b = (alpha1(s) - alpha1(t)) (1 + x(t)) / (lambda rho)
                let branch = if b_sign < 0.0 { Branch::ONE } else { Branch::TWO };
                let p = self.params_like();
                let a1s = alpha_coeffs(s, lambda, &p, branch).expect("alpha1 defined").1;
                let a1t = alpha_coeffs(t, lambda, &p, branch).expect("alpha1 defined").1;
                let xt = self.c() * (1.0 - t);
                (a1s - a1t) * (1.0 + xt) / lr
            }
            Family::Constant { a, b } => {
                let s2 = self.sigma * self.sigma;
                s2 * b * (t - s) * expm1_over_x(s2 * a * (t - s))
            }
        }
    }

    /// Conditional mean and variance of Y_t given Y_s = y.
    pub fn ou_moments(&self, s: f64, t: f64, y: f64) -> (f64, f64) {
        debug_assert!(s <= t, "ou_moments needs s <= t");
        if s == t {
            return (y, 0.0);
        }
        (y * self.mean_factor(s, t) + self.b_integral(s, t), self.v2(s, t))
    }

    /// Covariance over [s,t] between the demand increment and the driving
    /// noise increment, sigma^2 integral_s^t exp(sigma^2 (A(t)-A(r))) dr.
    pub fn noise_cov(&self, s: f64, t: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        match self.family {
            Family::Canonical { .. } => {
                let c = self.c();
                s2 * (1.0 + c * (1.0 - t)) * ln1p_diff_over_c(c, 1.0 - s, 1.0 - t)
            }
            Family::Constant { a, .. } => s2 * (t - s) * expm1_over_x(s2 * a * (t - s)),
        }
    }

    /// d/dy log p(t, y; 1, target): the h-transform score that pins the
    /// process on `target` at t = 1. For a = b = 0 it reduces to the
    /// Brownian-bridge form (target - y) / (sigma^2 (1-t)).
    pub fn bridge_score(&self, t: f64, y: f64, target: f64) -> Result<f64> {
        if t >= 1.0 {
            return Err(Error::SingularTime(format!("bridge_score needs t < 1, got t={t}")));
        }
        let (mean, var) = self.ou_moments(t, 1.0, y);
        Ok((target - mean) * self.mean_factor(t, 1.0) / var)
    }

    /// Exact moments of the conditioned step: the law of Y_t given Y_s = y
    /// and Y_1 = target, together with the covariance between the step's
    /// demand increment and noise increment under the conditioned dynamics.
    /// Returns (mean, var, cov_with_noise). Degenerates to (target, 0, 0) at
    /// t = 1.
    pub fn bridge_step(&self, s: f64, t: f64, y: f64, target: f64) -> (f64, f64, f64) {
        debug_assert!(
            matches!(self.family, Family::Canonical { .. }),
            "terminal conditioning only arises for the canonical family"
        );
        if t >= 1.0 {
            return (target, 0.0, 0.0);
        }
        let (m_step, v_step) = self.ou_moments(s, t, y);
        let (m_full, v_full) = self.ou_moments(s, 1.0, y);
        let cov_t1 = v_step * self.mean_factor(t, 1.0);
        let gain = cov_t1 / v_full;
        let mean = m_step + gain * (target - m_full);
        let var = (v_step - gain * cov_t1).max(0.0);
        // Transition factor of the conditioned process is (1-t)/(1-r)
        // independent of the canonical slope, so the noise covariance is
        // sigma^2 (1-t) ln((1-s)/(1-t)).
        let s2 = self.sigma * self.sigma;
        let cov_noise = s2 * (1.0 - t) * ((1.0 - s) / (1.0 - t)).ln();
        (mean, var, cov_noise)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::integrate;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params(rho: f64) -> ModelParams {
        ModelParams::new(0.0, 1.0, 1.0, rho).unwrap()
    }

    #[test]
    fn a_coeff_examples() {
        let p = params(0.0);
        assert_eq!(a_coeff(0.3, 1.0, &p), 0.0);
        let p = params(1.0);
        assert_abs_diff_eq!(a_coeff(0.0, 1.0, &p), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(a_coeff(1.0, 1.0, &p), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn b_sign_and_frozen_value() {
        let p = params(1.0);
        // At lambda = golden ratio (the equilibrium slope for gamma=sigma=rho=1),
        // branch 2 is positive at t = 0.
        let lam = 1.6180339887498949;
        assert!(b_mm_insider(0.0, lam, &p, Branch::TWO).unwrap() > 0.0);
        // Frozen oracle value at lambda = 1.
        assert_abs_diff_eq!(
            b_mm_insider(0.0, 1.0, &p, Branch::TWO).unwrap(),
            0.4424002956473617,
            epsilon = 1e-13
        );
        // Branch flip.
        for t in [0.0, 0.3, 0.9, 0.999] {
            let b1 = b_mm_insider(t, 1.0, &p, Branch::ONE).unwrap();
            let b2 = b_mm_insider(t, 1.0, &p, Branch::TWO).unwrap();
            assert_abs_diff_eq!(b1, -b2, epsilon = 1e-15);
        }
    }

    #[test]
    fn b_terminal_limit_is_sqrt_half_lambda_rho() {
        // The 0/0 at t = 1 resolves to sqrt(lambda rho / 2), approached smoothly.
        let p = params(1.0);
        let lim = (0.5f64).sqrt();
        assert_abs_diff_eq!(b_mm_insider(1.0, 1.0, &p, Branch::TWO).unwrap(), lim, epsilon = 1e-15);
        assert_abs_diff_eq!(b_mm_insider(1.0 - 1e-9, 1.0, &p, Branch::TWO).unwrap(), lim, epsilon = 1e-8);
        assert_abs_diff_eq!(b_mm_insider(1.0 - 1e-4, 1.0, &p, Branch::TWO).unwrap(), lim, epsilon = 1e-3);
    }

    #[test]
    fn big_a_examples_and_derivative() {
        let p = params(1.0);
        assert_eq!(big_a(0.0, 1.0, &p), 0.0);
        assert_eq!(big_a(0.7, 1.0, &params(0.0)), 0.0);
        assert_abs_diff_eq!(big_a(1.0, 1.0, &p), -std::f64::consts::LN_2, epsilon = 1e-14);
        // dA/dt = a by central differences.
        let h = 1e-6;
        for t in [0.1, 0.5, 0.9] {
            let fd = (big_a(t + h, 1.0, &p) - big_a(t - h, 1.0, &p)) / (2.0 * h);
            assert_abs_diff_eq!(fd, a_coeff(t, 1.0, &p), epsilon = 1e-8);
        }
        // Quadrature oracle.
        let quad = integrate(|s| a_coeff(s, 1.0, &p), 0.0, 1.0, 1e-12);
        assert_abs_diff_eq!(big_a(1.0, 1.0, &p), quad, epsilon = 1e-10);
    }

    #[test]
    fn ou_moments_degenerate_and_brownian() {
        let p = params(0.0);
        let ou = OuCoefficients::canonical(1.0, &p, 0.0);
        assert_eq!(ou.ou_moments(0.3, 0.3, 1.7), (1.7, 0.0));
        let (m, v) = ou.ou_moments(0.2, 0.7, 1.7);
        assert_abs_diff_eq!(m, 1.7, epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn v2_closed_form_matches_quadrature() {
        let p = params(1.0);
        let cases: [(OuCoefficients, &str); 2] = [
            (OuCoefficients::canonical(1.0, &p, 0.0), "canonical"),
            (OuCoefficients::constant(-0.25, 0.1, 1.0), "constant"),
        ];
        for (ou, name) in cases {
            for (s, t) in [(0.0, 1.0), (0.25, 0.8), (0.9, 1.0)] {
                let quad = integrate(
                    |r| {
                        let s2 = ou.sigma() * ou.sigma();
                        (2.0 * s2 * (ou.big_a(t) - ou.big_a(r))).exp() * s2
                    },
                    s,
                    t,
                    1e-12,
                );
                assert_relative_eq!(ou.v2(s, t), quad, max_relative = 1e-9, epsilon = 1e-12);
                assert!(ou.v2(s, t) >= 0.0, "{name}");
                assert_eq!(ou.v2(s, s), 0.0);
            }
        }
        // Spec example: v^2(0,1) = 1/2 at lambda=rho=sigma=1.
        let ou = OuCoefficients::canonical(1.0, &p, 0.0);
        assert_abs_diff_eq!(ou.v2(0.0, 1.0), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn b_integral_matches_quadrature() {
        let p = params(1.0);
        for ou in [
            OuCoefficients::canonical(1.0, &p, 1.0),
            OuCoefficients::canonical(1.6180339887498949, &p, -1.0),
            OuCoefficients::constant(-0.25, 0.31, 1.0),
        ] {
            for (s, t) in [(0.0, 1.0), (0.3, 0.9), (0.95, 1.0)] {
                let quad = integrate(
                    |r| {
                        let s2 = ou.sigma() * ou.sigma();
                        (s2 * (ou.big_a(t) - ou.big_a(r))).exp() * s2 * ou.b(r)
                    },
                    s,
                    t,
                    1e-12,
                );
                assert_abs_diff_eq!(ou.b_integral(s, t), quad, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn noise_cov_matches_quadrature() {
        let p = params(1.0);
        for ou in [
            OuCoefficients::canonical(1.0, &p, 0.0),
            OuCoefficients::canonical(0.5, &p, 0.0),
            OuCoefficients::constant(-0.25, 0.0, 1.3),
        ] {
            for (s, t) in [(0.0, 0.5), (0.4, 0.4005), (0.999, 1.0)] {
                let quad = integrate(
                    |r| {
                        let s2 = ou.sigma() * ou.sigma();
                        (s2 * (ou.big_a(t) - ou.big_a(r))).exp() * s2
                    },
                    s,
                    t,
                    1e-13,
                );
                assert_relative_eq!(ou.noise_cov(s, t), quad, max_relative = 1e-8, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn alpha_boundary_values() {
        let p = params(1.0);
        let (a0, a1, a2) = alpha_coeffs(1.0, 1.0, &p, Branch::TWO).unwrap();
        assert_abs_diff_eq!(a0, -0.5, epsilon = 1e-15);
        assert_eq!(a1, 0.0);
        assert_abs_diff_eq!(a2, 0.5, epsilon = 1e-15);
        // rho = 0: all three vanish.
        let (a0, a1, a2) = alpha_coeffs(0.4, 1.0, &params(0.0), Branch::ONE).unwrap();
        assert_eq!((a0, a1, a2), (0.0, 0.0, 0.0));
    }

    #[test]
    fn alpha1_frozen_value_and_integral_form() {
        let p = params(1.0);
        let (_, a1, _) = alpha_coeffs(0.0, 1.0, &p, Branch::TWO).unwrap();
        assert_abs_diff_eq!(a1, 0.3916968339417966, epsilon = 1e-13);

        // Integral form: alpha1(t) = lambda rho sigma^2 e^{sigma^2 A(1)} int_t^1 e^{-sigma^2 A(s)} b(s) ds,
        // quadrature oracle against the closed square-root form.
        let ou = OuCoefficients::canonical(1.0, &p, 1.0);
        for t in [0.0, 0.25, 0.6, 0.95] {
            let quad = integrate(
                |s| (-ou.big_a(s)).exp() * ou.b(s),
                t,
                1.0,
                1e-12,
            ) * (ou.big_a(1.0)).exp();
            let (_, a1, _) = alpha_coeffs(t, 1.0, &p, Branch::TWO).unwrap();
            assert_abs_diff_eq!(a1, quad, epsilon = 1e-8);
        }
    }

    #[test]
    fn alpha2_is_minus_half_a() {
        let p = params(1.0);
        for t in crate::stats::linspace(0.0, 1.0, 41) {
            let (_, _, a2) = alpha_coeffs(t, 1.3, &p, Branch::ONE).unwrap();
            assert_abs_diff_eq!(a2, -0.5 * a_coeff(t, 1.3, &p), epsilon = 1e-12);
        }
    }

    #[test]
    fn alpha1_squared_nonnegative_vanishes_only_at_one() {
        let p = params(1.0);
        for t in crate::stats::linspace(0.0, 0.999, 200) {
            let (_, a1, _) = alpha_coeffs(t, 1.0, &p, Branch::TWO).unwrap();
            assert!(a1 * a1 > 0.0, "t={t}");
        }
        let (_, a1, _) = alpha_coeffs(1.0, 1.0, &p, Branch::TWO).unwrap();
        assert_eq!(a1, 0.0);
    }

    #[test]
    fn bridge_score_brownian_case() {
        let p = params(0.0);
        let ou = OuCoefficients::canonical(1.0, &p, 0.0);
        // (target - y)/(1 - t) with sigma = 1.
        assert_abs_diff_eq!(ou.bridge_score(0.5, 0.0, 1.0).unwrap(), 2.0, epsilon = 1e-14);
        // Score vanishes at the conditional mean.
        assert_eq!(ou.bridge_score(0.25, 0.7, 0.7).unwrap(), 0.0);
        assert!(matches!(ou.bridge_score(1.0, 0.0, 0.0), Err(Error::SingularTime(_))));
    }

    #[test]
    fn bridge_score_matches_log_density_finite_difference() {
        let p = params(1.0);
        for ou in [
            OuCoefficients::canonical(1.0, &p, 0.0),
            OuCoefficients::canonical(1.6180339887498949, &p, 1.0),
        ] {
            let log_density = |t: f64, y: f64, target: f64| {
                let (m, v) = ou.ou_moments(t, 1.0, y);
                -(target - m) * (target - m) / (2.0 * v) - 0.5 * (2.0 * std::f64::consts::PI * v).ln()
            };
            let h = 1e-5;
            for (t, y, target) in [(0.0, 0.0, 1.0), (0.5, -0.4, 0.8), (0.9, 1.2, -0.3)] {
                let fd = (log_density(t, y + h, target) - log_density(t, y - h, target)) / (2.0 * h);
                let score = ou.bridge_score(t, y, target).unwrap();
                assert_abs_diff_eq!(score, fd, epsilon = 1e-6);
            }
        }
        // Spec example: canonical lambda=rho=sigma=1, b=0, t=0, y=0, target=1 -> 1.
        let ou = OuCoefficients::canonical(1.0, &p, 0.0);
        assert_abs_diff_eq!(ou.bridge_score(0.0, 0.0, 1.0).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn variance_chain_identity() {
        // v^2(s,1) = F(t,1)^2 v^2(s,t) + v^2(t,1) for any intermediate t.
        let p = params(1.0);
        for ou in [
            OuCoefficients::canonical(1.0, &p, 1.0),
            OuCoefficients::constant(-0.4, 0.2, 0.8),
        ] {
            for (s, t) in [(0.0, 0.5), (0.2, 0.21), (0.5, 0.99)] {
                let lhs = ou.v2(s, 1.0);
                let f = ou.mean_factor(t, 1.0);
                let rhs = f * f * ou.v2(s, t) + ou.v2(t, 1.0);
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn bridge_step_reduces_to_brownian_bridge() {
        let p = params(0.0);
        let ou = OuCoefficients::canonical(1.0, &p, 0.0);
        let (s, t, y, target) = (0.2, 0.5, 0.3, 1.1);
        let (mean, var, cov) = ou.bridge_step(s, t, y, target);
        // Brownian bridge: mean = y + (t-s)/(1-s) (target - y), var = (t-s)(1-t)/(1-s).
        assert_abs_diff_eq!(mean, y + (t - s) / (1.0 - s) * (target - y), epsilon = 1e-14);
        assert_abs_diff_eq!(var, (t - s) * (1.0 - t) / (1.0 - s), epsilon = 1e-14);
        assert_abs_diff_eq!(cov, (1.0 - t) * ((1.0 - s) / (1.0 - t)).ln(), epsilon = 1e-14);
        // Final step pins exactly.
        assert_eq!(ou.bridge_step(0.999, 1.0, 0.3, target), (target, 0.0, 0.0));
    }

    #[test]
    fn bridge_step_variance_matches_bridge_decomposition() {
        let p = params(1.0);
        let ou = OuCoefficients::canonical(1.6180339887498949, &p, -1.0);
        for (s, t) in [(0.0, 0.0005), (0.5, 0.5005), (0.9995, 1.0 - 5e-4)] {
            let (_, var, _) = ou.bridge_step(s, t, 0.4, 1.0);
            let expected = ou.v2(s, t) * ou.v2(t, 1.0) / ou.v2(s, 1.0);
            assert_relative_eq!(var, expected, max_relative = 1e-9);
        }
    }
}
