//! Hurwitz and Riemann zeta functions on the real line.
//!
//! `ζ(s, a)` is evaluated by Euler–Maclaurin summation: twenty direct terms,
//! the integral tail, the half-term, and Bernoulli corrections through `B₈`.
//! For `s ∈ [-1, 8]` and `a ∈ (0, 1]` the first omitted correction is below
//! `1e-17`. The `s`-derivative is the term-by-term derivative of the same
//! expansion.

#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

const DIRECT_TERMS: usize = 20;

// B_{2k} / (2k)! for k = 1..=4
const BERNOULLI_OVER_FACTORIAL: [f64; 4] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum HurwitzError {
    #[error("zeta has a pole at s = 1")]
    Pole,
    #[error("Hurwitz parameter a = {0} outside (0, 1]")]
    HurwitzDomain(f64),
}

fn check(s: f64, a: f64) -> Result<(), HurwitzError> {
    if s == 1.0 {
        return Err(HurwitzError::Pole);
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(HurwitzError::HurwitzDomain(a));
    }
    Ok(())
}

/// `ζ(s, a) = Σ_{n≥0} (n + a)^{-s}`, analytically continued in `s`.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64, HurwitzError> {
    check(s, a)?;
    let mut sum = 0.0;
    for n in 0..DIRECT_TERMS {
        sum += (n as f64 + a).powf(-s);
    }
    let x = DIRECT_TERMS as f64 + a;
    let x_s = x.powf(-s);
    sum += x * x_s / (s - 1.0) + 0.5 * x_s;
    // rising factorial s (s+1) ... (s+2k-2), times x^{-s-2k+1}
    let mut rising = s;
    let mut power = x_s / x;
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if k > 0 {
            let j = (2 * k) as f64;
            rising *= (s + j - 1.0) * (s + j);
            power /= x * x;
        }
        sum += coeff * rising * power;
    }
    Ok(sum)
}

/// `∂ζ(s, a) / ∂s`.
pub fn hurwitz_zeta_ds(s: f64, a: f64) -> Result<f64, HurwitzError> {
    check(s, a)?;
    let mut sum = 0.0;
    for n in 0..DIRECT_TERMS {
        let y = n as f64 + a;
        sum -= y.ln() * y.powf(-s);
    }
    let x = DIRECT_TERMS as f64 + a;
    let ln_x = x.ln();
    let x_s = x.powf(-s);
    let tail = x * x_s / (s - 1.0);
    sum += -ln_x * tail - tail / (s - 1.0);
    sum -= 0.5 * ln_x * x_s;
    // d/ds [P(s) x^{-s-2k+1}] = (P'(s) - ln x P(s)) x^{-s-2k+1}
    let mut rising = s;
    let mut rising_ds = 1.0;
    let mut power = x_s / x;
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if k > 0 {
            for offset in [2 * k - 1, 2 * k] {
                let f = s + offset as f64;
                rising_ds = rising_ds * f + rising;
                rising *= f;
            }
            power /= x * x;
        }
        sum += coeff * (rising_ds - ln_x * rising) * power;
    }
    Ok(sum)
}

/// Riemann `ζ(s) = ζ(s, 1)`.
pub fn riemann_zeta(s: f64) -> Result<f64, HurwitzError> {
    hurwitz_zeta(s, 1.0)
}

pub fn riemann_zeta_ds(s: f64) -> Result<f64, HurwitzError> {
    hurwitz_zeta_ds(s, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    #[test]
    fn riemann_values() {
        assert_abs_diff_eq!(riemann_zeta(0.0).unwrap(), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(riemann_zeta(2.0).unwrap(), PI * PI / 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(riemann_zeta(4.0).unwrap(), PI.powi(4) / 90.0, epsilon = 1e-14);
        assert_abs_diff_eq!(riemann_zeta(-1.0).unwrap(), -1.0 / 12.0, epsilon = 1e-14);
        assert_abs_diff_eq!(riemann_zeta(3.0).unwrap(), 1.202_056_903_159_594_2, epsilon = 1e-14);
        assert_abs_diff_eq!(riemann_zeta(0.5).unwrap(), -1.460_354_508_809_586_8, epsilon = 1e-13);
        assert_abs_diff_eq!(riemann_zeta_ds(0.0).unwrap(), -(2.0 * PI).ln() / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn hurwitz_at_zero_is_linear() {
        for &a in &[0.01, 0.25, 0.5, 0.9, 1.0] {
            assert_abs_diff_eq!(hurwitz_zeta(0.0, a).unwrap(), 0.5 - a, epsilon = 1e-14);
        }
    }

    #[test]
    fn hurwitz_half_and_shift() {
        // ζ(s, 1/2) = (2^s - 1) ζ(s)
        for &s in &[0.3, 2.0, 3.0, 6.0] {
            let lhs = hurwitz_zeta(s, 0.5).unwrap();
            let rhs = (2f64.powf(s) - 1.0) * riemann_zeta(s).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn derivative_at_zero_is_log_gamma() {
        for &a in &[0.05, 0.2, 1.0 / 3.0, 0.5, 0.75, 1.0] {
            let expected = libm::lgamma(a) - 0.5 * (2.0 * PI).ln();
            assert_abs_diff_eq!(hurwitz_zeta_ds(0.0, a).unwrap(), expected, epsilon = 1e-13);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &(s, a) in &[(2.0, 0.3), (3.5, 0.8), (-0.5, 0.5), (0.25, 0.1)] {
            let h = 1e-5;
            let fd = (hurwitz_zeta(s + h, a).unwrap() - hurwitz_zeta(s - h, a).unwrap()) / (2.0 * h);
            let d = hurwitz_zeta_ds(s, a).unwrap();
            assert_abs_diff_eq!(d, fd, epsilon = 1e-7 * d.abs().max(1.0));
        }
    }

    #[test]
    fn domain_errors() {
        assert_eq!(hurwitz_zeta(1.0, 0.5), Err(HurwitzError::Pole));
        assert_eq!(hurwitz_zeta(2.0, 0.0), Err(HurwitzError::HurwitzDomain(0.0)));
        assert_eq!(hurwitz_zeta_ds(2.0, 1.5), Err(HurwitzError::HurwitzDomain(1.5)));
    }
}
