//! Fixed-step classical Runge–Kutta integration.

/// One RK4 step of y′ = f(y) for an autonomous system.
pub fn rk4_step<const N: usize>(f: &impl Fn(&[f64; N]) -> [f64; N], y: &[f64; N], h: f64) -> [f64; N] {
    let shifted = |base: &[f64; N], k: &[f64; N], c: f64| {
        let mut out = *base;
        for i in 0..N {
            out[i] += c * k[i];
        }
        out
    };
    let k1 = f(y);
    let k2 = f(&shifted(y, &k1, 0.5 * h));
    let k3 = f(&shifted(y, &k2, 0.5 * h));
    let k4 = f(&shifted(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Leading local error of RK4 on a linear relaxation with rate κ and step h.
pub fn rk4_local_error(h_kappa: f64) -> f64 {
    h_kappa.powi(5) / 120.0
}
