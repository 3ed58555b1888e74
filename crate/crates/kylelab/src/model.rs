//! Model primitives: parameters, model taxonomy, equilibrium branch index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Market primitives shared by every model.
///
/// `mu` and `gamma` are the prior mean and standard deviation of the
/// fundamental value revealed at t = 1, `sigma` scales the noise traders'
/// cumulative demand, and `rho` is the CARA risk aversion common to all
/// liquidity suppliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub mu: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub rho: f64,
}

impl ModelParams {
    pub fn new(mu: f64, gamma: f64, sigma: f64, rho: f64) -> Result<Self> {
        Self { mu, gamma, sigma, rho }.validated()
    }

    /// Checks every invariant and hands the parameters back unchanged.
    pub fn validated(self) -> Result<Self> {
        if !self.mu.is_finite() {
            return Err(Error::domain("mu", format!("must be finite, got {}", self.mu)));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::domain("gamma", format!("must be finite and > 0, got {}", self.gamma)));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::domain("sigma", format!("must be finite and > 0, got {}", self.sigma)));
        }
        if !(self.rho.is_finite() && self.rho >= 0.0) {
            return Err(Error::domain("rho", format!("must be finite and >= 0, got {}", self.rho)));
        }
        Ok(self)
    }

    /// Market-adjusted risk aversion rho_M = rho * gamma * sigma, the
    /// dimensionless scalar that drives every normalized market quantity.
    pub fn rho_m(&self) -> f64 {
        self.rho * self.gamma * self.sigma
    }

    pub fn is_risk_neutral(&self) -> bool {
        self.rho == 0.0
    }
}

/// Free function mirror of [`ModelParams::validated`].
pub fn validate(params: ModelParams) -> Result<ModelParams> {
    params.validated()
}

/// Free function mirror of [`ModelParams::rho_m`].
pub fn market_adjusted_risk_aversion(params: &ModelParams) -> f64 {
    params.rho_m()
}

/// The five market models.
///
/// `Competitive*` variants have a continuum of price-taking liquidity
/// suppliers; `Maker*` variants have finitely many Bertrand-competing market
/// makers. `*Insider` variants have a strategic trader who knows the
/// fundamental value, `*Strategic` ones a strategic trader who only knows its
/// prior mean. `KyleBenchmark` is the risk-neutral reference model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    KyleBenchmark,
    CompetitiveInsider,
    CompetitiveStrategic,
    MakerInsider,
    MakerStrategic,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::KyleBenchmark,
        ModelKind::CompetitiveInsider,
        ModelKind::CompetitiveStrategic,
        ModelKind::MakerInsider,
        ModelKind::MakerStrategic,
    ];

    /// Strategic trader knows V.
    pub fn is_insider(&self) -> bool {
        matches!(
            self,
            ModelKind::KyleBenchmark | ModelKind::CompetitiveInsider | ModelKind::MakerInsider
        )
    }

    /// Strategic trader knows only the prior mean.
    pub fn is_strategic(&self) -> bool {
        !self.is_insider()
    }

    /// Liquidity supplied by Bertrand market makers.
    pub fn is_maker(&self) -> bool {
        matches!(self, ModelKind::MakerInsider | ModelKind::MakerStrategic)
    }

    pub fn label(&self) -> &'static str {
        match self {
            ModelKind::KyleBenchmark => "kyle",
            ModelKind::CompetitiveInsider => "ca-insider",
            ModelKind::CompetitiveStrategic => "ca-strategic",
            ModelKind::MakerInsider => "mm-insider",
            ModelKind::MakerStrategic => "mm-strategic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "kyle" => Ok(ModelKind::KyleBenchmark),
            "ca-insider" => Ok(ModelKind::CompetitiveInsider),
            "ca-strategic" => Ok(ModelKind::CompetitiveStrategic),
            "mm-insider" => Ok(ModelKind::MakerInsider),
            "mm-strategic" => Ok(ModelKind::MakerStrategic),
            other => Err(Error::domain("model", format!("unknown model kind '{other}'"))),
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Equilibrium branch for the market-maker models, which admit two equilibria
/// distinguished by the sign of the makers' target inventory. Ignored by the
/// competitive and Kyle models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Branch(u8);

impl Branch {
    pub const ONE: Branch = Branch(1);
    pub const TWO: Branch = Branch(2);

    pub fn new(index: u8) -> Result<Self> {
        match index {
            1 | 2 => Ok(Branch(index)),
            other => Err(Error::domain("branch", format!("index must be 1 or 2, got {other}"))),
        }
    }

    pub fn index(&self) -> u8 {
        self.0
    }

    /// The sign selector (-1)^i used throughout the maker equilibria.
    pub fn sign(&self) -> f64 {
        if self.0 == 1 {
            -1.0
        } else {
            1.0
        }
    }
}

impl Default for Branch {
    fn default() -> Self {
        Branch::ONE
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_valid_params() {
        let p = ModelParams::new(0.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(p, ModelParams { mu: 0.0, gamma: 1.0, sigma: 1.0, rho: 1.0 });
    }

    #[test]
    fn validate_rejects_boundary_gamma() {
        let err = ModelParams::new(0.0, 0.0, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Domain { field: "gamma", .. }));
    }

    #[test]
    fn validate_rejects_negative_rho() {
        let err = ModelParams::new(0.0, 1.0, 1.0, -0.1).unwrap_err();
        assert!(matches!(err, Error::Domain { field: "rho", .. }));
    }

    #[test]
    fn validate_rejects_non_finite() {
        assert!(ModelParams::new(f64::NAN, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(0.0, f64::INFINITY, 1.0, 0.0).is_err());
        assert!(ModelParams::new(0.0, 1.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn rho_m_values() {
        assert_eq!(ModelParams::new(0.0, 1.0, 1.0, 0.0).unwrap().rho_m(), 0.0);
        assert_eq!(ModelParams::new(0.0, 2.0, 3.0, 0.5).unwrap().rho_m(), 3.0);
        assert_eq!(ModelParams::new(0.0, 1.0, 1.0, 1.0).unwrap().rho_m(), 1.0);
    }

    #[test]
    fn branch_sign_selector() {
        assert_eq!(Branch::ONE.sign(), -1.0);
        assert_eq!(Branch::TWO.sign(), 1.0);
        assert!(Branch::new(3).is_err());
        assert!(Branch::new(0).is_err());
    }

    #[test]
    fn kind_predicates() {
        assert!(ModelKind::KyleBenchmark.is_insider());
        assert!(ModelKind::MakerStrategic.is_strategic());
        assert!(ModelKind::MakerStrategic.is_maker());
        assert!(!ModelKind::CompetitiveInsider.is_maker());
        for kind in ModelKind::ALL {
            assert_eq!(ModelKind::parse(kind.label()).unwrap(), kind);
        }
    }
}
