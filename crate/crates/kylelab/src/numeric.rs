//! Series-guarded scalar helpers for expressions that cancel near t = 1.

/// x - ln(1+x) for x >= 0, switching to the series x^2/2 - x^3/3 + x^4/4
/// below 1e-6 where the direct difference loses all relative precision.
pub fn x_minus_ln1p(x: f64) -> f64 {
    debug_assert!(x >= -1e-12, "x_minus_ln1p expects x >= 0, got {x}");
    if x < 1e-6 {
        let x2 = x * x;
        x2 * (0.5 - x / 3.0 + x2 / 4.0)
    } else {
        x - x.ln_1p()
    }
}

/// (ln(1+u) - ln(1+v)) / c with u = c*p, v = c*q, stable as c -> 0 where it
/// tends to p - q.
pub fn ln1p_diff_over_c(c: f64, p: f64, q: f64) -> f64 {
    if c.abs() < 1e-9 {
        // (ln(1+cp) - ln(1+cq))/c = (p-q) - c(p^2-q^2)/2 + O(c^2)
        (p - q) - c * (p * p - q * q) / 2.0
    } else {
        ((c * p).ln_1p() - (c * q).ln_1p()) / c
    }
}

/// expm1(x)/x, stable at x = 0 where it equals 1.
pub fn expm1_over_x(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0 + 0.5 * x
    } else {
        x.exp_m1() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn x_minus_ln1p_matches_direct_in_overlap() {
        for &x in &[1e-6f64, 2e-6, 1e-5, 1e-3, 0.1, 1.0, 10.0] {
            let direct = x - x.ln_1p();
            assert_relative_eq!(x_minus_ln1p(x), direct, max_relative = 1e-9);
        }
    }

    #[test]
    fn x_minus_ln1p_series_region() {
        // Reference values from high-precision arithmetic.
        assert_relative_eq!(x_minus_ln1p(1e-8), 4.9999999966666667e-17, max_relative = 1e-12);
        assert_eq!(x_minus_ln1p(0.0), 0.0);
    }

    #[test]
    fn ln1p_diff_limit() {
        assert_relative_eq!(ln1p_diff_over_c(0.0, 0.7, 0.2), 0.5, max_relative = 1e-12);
        assert_relative_eq!(
            ln1p_diff_over_c(1e-10, 0.7, 0.2),
            ln1p_diff_over_c(1e-8, 0.7, 0.2),
            max_relative = 1e-7
        );
    }

    #[test]
    fn expm1_over_x_limit() {
        assert_eq!(expm1_over_x(0.0), 1.0);
        assert_relative_eq!(expm1_over_x(1e-13), 1.0, max_relative = 1e-10);
        assert_relative_eq!(expm1_over_x(1.0), 1.0f64.exp() - 1.0, max_relative = 1e-14);
    }
}
