//! Standard-normal primitives used by every cost function.
//!
//! Everything here is pure `f64` math, accurate to well below the 1e-10
//! budget the rest of the crate assumes for the CDF. The CDF is computed
//! from scratch (positive-term Maclaurin series in the bulk, a Mills-ratio
//! continued fraction in the tail) so that the upper tail keeps full
//! relative accuracy instead of degrading to absolute accuracy near 1.

use std::f64::consts::PI;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Density of the standard normal, `exp(-x^2/2) / sqrt(2 pi)`.
pub fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// `erf(u)` for `u >= 0` via the positive-term series
/// `erf(u) = 2 u e^{-u^2}/sqrt(pi) * sum_n (2u^2)^n / (1*3*...*(2n+1))`.
///
/// All terms are positive, so there is no cancellation; used for `u` up to
/// about 2.2 where the series converges in a few dozen terms.
fn erf_series(u: f64) -> f64 {
    let u2 = 2.0 * u * u;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0u32;
    loop {
        n += 1;
        term *= u2 / (2 * n + 1) as f64;
        sum += term;
        if term < sum * 1e-18 || n > 200 {
            break;
        }
    }
    2.0 * u * (-u * u).exp() / PI.sqrt() * sum
}

/// Mills-ratio continued fraction: `Q(x)/pdf(x) = 1/(x+ 1/(x+ 2/(x+ ...)))`
/// for `x > 0`. Evaluated by backward recurrence at fixed depth, which is
/// plenty for `x >= 3` where it is used.
fn mills_cf(x: f64) -> f64 {
    let mut t = 0.0;
    for k in (1..=120u32).rev() {
        t = k as f64 / (x + t);
    }
    1.0 / (x + t)
}

/// Upper tail `Q(x) = 1 - Phi(x)`, with full relative accuracy for large
/// positive `x` (down to the underflow threshold near x = 38).
pub fn upper_tail(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 1.0 - upper_tail(-x);
    }
    if x < 3.0 {
        0.5 * (1.0 - erf_series(x / SQRT_2))
    } else {
        pdf(x) * mills_cf(x)
    }
}

/// Cumulative distribution `Phi(x)`. Satisfies `cdf(x) + cdf(-x) = 1`
/// exactly by construction, and keeps full relative accuracy in the left
/// tail by evaluating it as the mirrored upper tail.
pub fn cdf(x: f64) -> f64 {
    if x < 0.0 {
        upper_tail(-x)
    } else {
        1.0 - upper_tail(x)
    }
}

/// Expected overflow of a unit normal above level `delta`:
/// `g(delta) = pdf(delta) - delta * (1 - cdf(delta))`.
///
/// Strictly positive and monotonically decreasing (`g' = -(1 - Phi)`).
pub fn unit_normal_loss(delta: f64) -> f64 {
    // upper_tail keeps the product delta * Q accurate in the right tail,
    // where pdf and Q both underflow together and the result is 0.
    pdf(delta) - delta * upper_tail(delta)
}

/// The ratio `pdf(delta) / cdf(delta)`, strictly positive and strictly
/// decreasing (log-concavity of the normal CDF).
pub fn reversed_hazard(delta: f64) -> f64 {
    if delta < -30.0 {
        // Mills asymptotics: Phi(delta) = pdf(delta)/t * (1 - 1/t^2 + 3/t^4 - ...)
        // with t = -delta; direct division would hit subnormals.
        let t = -delta;
        let t2 = t * t;
        return t / (1.0 - 1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2));
    }
    pdf(delta) / cdf(delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference values of Phi computed once with a 40-digit
    /// arbitrary-precision evaluation of erfc(-x/sqrt(2))/2.
    const CDF_FIXTURE: [(f64, f64); 20] = [
        (-8.0, 6.220960574271784123516e-16),
        (-6.0, 9.865876450376981407009e-10),
        (-5.0, 2.866515718791939116738e-7),
        (-4.0, 0.00003167124183311992125377),
        (-3.0, 0.001349898031630094526652),
        (-2.5, 0.006209665325776135166978),
        (-2.0, 0.02275013194817920720028),
        (-1.5, 0.06680720126885806600449),
        (-1.0, 0.1586552539314570514148),
        (-0.5, 0.3085375387259868963623),
        (-0.1, 0.4601721627229710185346),
        (0.0, 0.5),
        (0.1, 0.5398278372770289814654),
        (0.5, 0.6914624612740131036377),
        (1.0, 0.8413447460685429485852),
        (1.5, 0.9331927987311419339955),
        (2.0, 0.9772498680518207927997),
        (3.0, 0.9986501019683699054733),
        (5.0, 0.9999997133484281208061),
        (8.0, 0.9999999999999993779039),
    ];

    #[test]
    fn pdf_closed_form_values() {
        assert_eq!(pdf(0.0), 0.3989422804014327);
        assert!((pdf(1.0) - 0.2419707245191433498).abs() < 1e-16);
        assert_eq!(pdf(1.0), pdf(-1.0));
        assert_eq!(pdf(3.7), pdf(-3.7));
    }

    #[test]
    fn cdf_matches_reference_table() {
        for &(x, want) in &CDF_FIXTURE {
            let got = cdf(x);
            assert!(
                (got - want).abs() <= 1e-10,
                "cdf({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn cdf_center_and_tail() {
        assert_eq!(cdf(0.0), 0.5);
        let t = cdf(-8.0);
        assert!(t > 0.0 && t < 1e-14);
    }

    #[test]
    fn cdf_reflection_identity_on_grid() {
        let mut x = -8.0;
        while x <= 8.0 {
            let s = cdf(x) + cdf(-x);
            assert!((s - 1.0).abs() <= 1e-12, "x={x} sum={s}");
            x += 0.01;
        }
    }

    #[test]
    fn cdf_derivative_matches_pdf() {
        // Central difference with h = 1e-5. On the right half the
        // difference is taken on the upper tail, which carries full
        // relative accuracy, so the check holds out to |x| = 6.
        let h = 1e-5;
        let mut x = -6.0f64;
        while x <= 6.0 {
            let d = if x >= 0.0 {
                (upper_tail(x - h) - upper_tail(x + h)) / (2.0 * h)
            } else {
                (cdf(x + h) - cdf(x - h)) / (2.0 * h)
            };
            let rel = (d - pdf(x)).abs() / pdf(x);
            assert!(rel <= 1e-6, "x={x} fd={d} pdf={} rel={rel}", pdf(x));
            x += 0.0625;
        }
    }

    #[test]
    fn loss_reference_values() {
        // g(0) = pdf(0); the other two from the same 40-digit oracle.
        assert_eq!(unit_normal_loss(0.0), 0.3989422804014327);
        assert!((unit_normal_loss(1.0) - 0.083315470587686298383).abs() < 1e-14);
        assert!((unit_normal_loss(-0.75) - 0.88116691787215325544).abs() < 1e-13);
    }

    #[test]
    fn loss_monotone_and_sandwiched() {
        let mut prev = f64::INFINITY;
        let mut d = -6.0f64;
        while d <= 6.0 {
            let g = unit_normal_loss(d);
            assert!(g > 0.0, "g({d}) = {g} not positive");
            assert!(g < prev, "g not strictly decreasing at {d}");
            assert!(g >= (-d).max(0.0) - 1e-15);
            assert!(g <= pdf(d) + (-d).max(0.0) + 1e-15);
            prev = g;
            d += 0.01;
        }
    }

    #[test]
    fn loss_far_tails() {
        // Left tail: g(d) -> -d + pdf(d); right tail: underflows to 0.
        assert!((unit_normal_loss(-50.0) - 50.0).abs() < 1e-9);
        let right = unit_normal_loss(50.0);
        assert!(right >= 0.0 && right < 1e-300);
        assert!(unit_normal_loss(-1e9).is_finite());
    }

    #[test]
    fn hazard_reference_values() {
        assert_eq!(reversed_hazard(0.0), 2.0 * pdf(0.0));
        assert!((reversed_hazard(1.0) - 0.28759997093917836123).abs() < 1e-14);
        assert!(reversed_hazard(-3.0) > reversed_hazard(-2.0));
    }

    #[test]
    fn hazard_monotone_decreasing() {
        let mut prev = f64::INFINITY;
        let mut d = -6.0f64;
        while d <= 6.0 {
            let h = reversed_hazard(d);
            assert!(h > 0.0 && h < prev, "h not decreasing at {d}");
            prev = h;
            d += 0.01;
        }
        // Continuity across the asymptotic switch at -30.
        let a = reversed_hazard(-30.0 - 1e-9);
        let b = reversed_hazard(-30.0 + 1e-9);
        assert!((a - b).abs() / b < 1e-9);
        assert!(reversed_hazard(-400.0).is_finite());
    }
}
