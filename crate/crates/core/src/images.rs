//! Symmetric image sums with analytic tails.
//!
//! Terms are accumulated from the outermost images inward with compensated
//! summation; the remainder beyond |n| = n_max is added in closed form
//! through Hurwitz zeta or digamma asymptotics.

use num_complex::Complex64;

use crate::special::{digamma, hurwitz_zeta, CompensatedSum};

/// A summed lattice together with the sum of term magnitudes.
#[derive(Debug, Clone, Copy)]
pub struct ImageSum {
    pub value: Complex64,
    pub magnitude: f64,
}

/// Σ_{n∈ℤ} (z + i·period·n)^{−k}, k ≥ 2.
pub fn power_sum(z: Complex64, period: f64, k: u32, n_max: usize) -> ImageSum {
    let mut acc = CompensatedSum::new();
    let ip = Complex64::new(0.0, period);
    let kk = -(k as i32);
    for n in (1..=n_max).rev() {
        let s = ip * n as f64;
        acc.add((z + s).powi(kk));
        acc.add((z - s).powi(kk));
    }
    acc.add(z.powi(kk));
    let a = z / ip;
    let m = (n_max + 1) as f64;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let tail = ip.powi(kk) * (hurwitz_zeta(k, a + m) + sign * hurwitz_zeta(k, m - a));
    acc.add(tail);
    ImageSum {
        value: acc.value(),
        magnitude: acc.magnitude(),
    }
}

/// Σ_{n∈ℤ} 1/((n + shift + p)(n + shift + q)).
pub fn pair_sum(p: Complex64, q: Complex64, shift: f64, n_max: usize) -> ImageSum {
    let mut acc = CompensatedSum::new();
    let term = |m: f64| 1.0 / ((p + m) * (q + m));
    for n in (1..=n_max).rev() {
        let n = n as f64;
        acc.add(term(n + shift));
        acc.add(term(-n + shift));
    }
    acc.add(term(shift));
    let m = (n_max + 1) as f64;
    acc.add(pair_tail(m, p + shift, q + shift));
    acc.add(pair_tail(m, -p - shift, -q - shift));
    ImageSum {
        value: acc.value(),
        magnitude: acc.magnitude(),
    }
}

/// Σ_{n≥m} 1/((n + c1)(n + c2)).
fn pair_tail(m: f64, c1: Complex64, c2: Complex64) -> Complex64 {
    let c = 0.5 * (c1 + c2);
    let d = 0.5 * (c1 - c2);
    let base = c + m;
    if d.norm() <= 0.25 * base.norm() {
        let d2 = d * d;
        let mut pw = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..40u32 {
            let t = pw * hurwitz_zeta(2 * j + 2, base);
            acc += t;
            if t.norm() <= 1e-18 * acc.norm() {
                break;
            }
            pw *= d2;
        }
        acc
    } else {
        (digamma(c1 + m) - digamma(c2 + m)) / (c1 - c2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn square_lattice_identity() {
        // Σ 1/(u + i β n)² = (π/β)² csch²(π u/β)
        let (u, beta) = (0.8, 1.3);
        let s = power_sum(Complex64::new(u, 0.0), beta, 2, 50);
        let x = PI * u / beta;
        let exact = (PI / beta).powi(2) / x.sinh().powi(2);
        assert!((s.value.re / exact - 1.0).abs() < 1e-14);
        assert!(s.value.im.abs() < 1e-15);
    }

    #[test]
    fn cubic_lattice_identity() {
        // Σ (z + iPk)^{-3} = (α³/8) csch²(αz/2) coth(αz/2), P = 2π/α
        let alpha = 1.7;
        let z = Complex64::new(0.6, -0.05);
        let s = power_sum(z, 2.0 * PI / alpha, 3, 30);
        let h = z * (alpha / 2.0);
        let exact = alpha.powi(3) / 8.0 / (h.sinh() * h.sinh()) * (h.cosh() / h.sinh());
        assert!((s.value - exact).norm() / exact.norm() < 1e-13);
    }

    #[test]
    fn truncation_independent_with_tail() {
        let z = Complex64::new(0.3, -0.01);
        let a = power_sum(z, 2.0, 2, 3).value;
        let b = power_sum(z, 2.0, 2, 3000).value;
        assert!((a - b).norm() / b.norm() < 1e-14);
    }

    #[test]
    fn pair_sum_matches_power_sum_when_degenerate() {
        let p = Complex64::new(0.0, 0.45);
        let pair = pair_sum(p, p, 0.0, 40).value;
        // Σ 1/(n + p)² = π²/sin²(πp)
        let exact = PI * PI / (p * PI).sin().powi(2);
        assert!((pair - exact).norm() / exact.norm() < 1e-14);
    }

    #[test]
    fn pair_sum_tail_branches_agree() {
        let p = Complex64::new(0.0, 0.2);
        let q = Complex64::new(0.0, 30.0);
        let small_n = pair_sum(p, q, 1e-3, 20).value;
        let large_n = pair_sum(p, q, 1e-3, 20_000).value;
        assert!((small_n - large_n).norm() / large_n.norm() < 1e-13);
    }
}
