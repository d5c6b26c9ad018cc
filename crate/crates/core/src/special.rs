//! Special functions that the standard numeric crates do not cover.

pub use statrs::function::gamma::gamma;

/// Riemann zeta function for real arguments `x != 1`.
///
/// Uses Borwein's accelerated alternating series for the Dirichlet eta
/// function on `[-0.5, inf)`; negative arguments below that are reflected
/// through the functional equation.
pub fn zeta(x: f64) -> f64 {
    assert!((x - 1.0).abs() > 1e-12, "zeta has a pole at 1");
    if x < -0.5 {
        // functional equation keeps the alternating sum in its accurate range
        let y = 1.0 - x;
        let pi = std::f64::consts::PI;
        return 2f64.powf(x)
            * pi.powf(x - 1.0)
            * (0.5 * pi * x).sin()
            * gamma(y)
            * zeta(y);
    }
    let eta = alternating_sum(|k| ((k + 1) as f64).powf(-x));
    eta / (1.0 - 2f64.powf(1.0 - x))
}

/// Dirichlet beta function `sum_k (-1)^k (2k + 1)^{-x}` for real `x`.
pub fn dirichlet_beta(x: f64) -> f64 {
    if x < 0.5 {
        // beta(1 - z) = (2/pi)^z sin(pi z / 2) Gamma(z) beta(z)
        let z = 1.0 - x;
        let pi = std::f64::consts::PI;
        return (2.0 / pi).powf(z) * (0.5 * pi * z).sin() * gamma(z) * dirichlet_beta(z);
    }
    alternating_sum(|k| ((2 * k + 1) as f64).powf(-x))
}

/// Borwein's acceleration of `sum_{k >= 0} (-1)^k a_k` for completely
/// monotone `a_k`.
fn alternating_sum(a: impl Fn(usize) -> f64) -> f64 {
    const N: usize = 30;
    let mut d = [0.0f64; N + 1];
    let n = N as f64;
    let mut term = 1.0 / n;
    let mut acc = term;
    d[0] = n * acc;
    for i in 1..=N {
        let fi = i as f64;
        term *= 4.0 * (n + fi - 1.0) * (n - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += term;
        d[i] = n * acc;
    }
    let dn = d[N];
    let mut sum = 0.0;
    for (k, dk) in d.iter().take(N).enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (dn - dk) * a(k);
    }
    sum / dn
}

/// Sum of `(n * period + r)^(-p)` over `n >= start`, for `p > 1` and
/// `start * period + r > 0`.
///
/// The first 32 terms are summed directly and the remainder is closed with
/// Euler–Maclaurin.
pub(crate) fn shifted_power_tail(period: f64, r: f64, p: f64, start: usize) -> f64 {
    const DIRECT: usize = 32;
    let f = |n: f64| (n * period + r).powf(-p);
    let mut sum = 0.0;
    for n in start..start + DIRECT {
        sum += f(n as f64);
    }
    let n0 = (start + DIRECT) as f64;
    let a = n0 * period + r;
    let integral = a.powf(1.0 - p) / ((p - 1.0) * period);
    let d1 = -p * period * a.powf(-p - 1.0);
    let d3 = -p * (p + 1.0) * (p + 2.0) * period.powi(3) * a.powf(-p - 3.0);
    sum + integral + 0.5 * f(n0) - d1 / 12.0 + d3 / 720.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_known_values() {
        assert!((zeta(0.0) + 0.5).abs() < 1e-14);
        assert!((zeta(-1.0) + 1.0 / 12.0).abs() < 1e-14);
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(0.5) + 1.460_354_508_809_586_8).abs() < 1e-13);
        assert!((zeta(-0.5) + 0.207_886_224_977_354_57).abs() < 1e-13);
        assert!(zeta(-2.0).abs() < 1e-14);
        assert!((zeta(-3.0) - 1.0 / 120.0).abs() < 1e-14);
        assert!((zeta(-4.5) + 0.003_091_669_247_215_834).abs() < 1e-12);
    }

    #[test]
    fn beta_known_values() {
        assert!((dirichlet_beta(1.0) - PI / 4.0).abs() < 1e-14);
        assert!((dirichlet_beta(2.0) - 0.915_965_594_177_219).abs() < 1e-14);
        assert!((dirichlet_beta(0.0) - 0.5).abs() < 1e-14);
        assert!(dirichlet_beta(-1.0).abs() < 1e-14);
        assert!((dirichlet_beta(-2.0) + 0.5).abs() < 1e-13);
    }

    #[test]
    fn tail_matches_brute_force() {
        let (period, r, p) = (40.0, 3.7, 1.5);
        let brute: f64 = (1..2_000_000).map(|n| (n as f64 * period + r).powf(-p)).sum();
        // brute force misses the tail beyond 2e6 periods, estimate it
        let missing = (2e6 * period + r).powf(1.0 - p) / ((p - 1.0) * period);
        let fast = shifted_power_tail(period, r, p, 1);
        assert!(((brute + missing) - fast).abs() / fast < 1e-10);
    }
}
