//! Elementary and special functions tuned for the kernel closed forms and the
//! analytic tails of image sums.

use num_complex::Complex64;

/// Bernoulli numbers B₂ … B₁₆.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Real part above which the asymptotic series are used without shifting.
const ASYMPTOTIC_RE: f64 = 16.0;

pub fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// csch²(x), free of overflow for large |x|.
pub fn csch2(x: f64) -> f64 {
    let y = x.abs();
    let e = (-2.0 * y).exp();
    let d = -(-2.0 * y).exp_m1();
    4.0 * e / (d * d)
}

/// (coth a − coth b)/(b − a) for a, b > 0, with the b → a limit csch²(a).
///
/// Written in terms of e^{−2a}, e^{−2b} so that neither overflow nor
/// cancellation occurs for any positive arguments.
pub fn coth_diff_quotient(a: f64, b: f64) -> f64 {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let d = b - a;
    let q = if d == 0.0 { 2.0 } else { -(-2.0 * d).exp_m1() / d };
    let da = -(-2.0 * a).exp_m1();
    let db = -(-2.0 * b).exp_m1();
    2.0 * (-2.0 * a).exp() * q / (da * db)
}

/// Planck occupancy 1/(e^x − 1); zero at x = +∞.
pub fn bose(x: f64) -> f64 {
    if x == f64::INFINITY {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// Fermi occupancy 1/(e^x + 1); zero at x = +∞.
pub fn fermi(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Hurwitz zeta ζ(k, a) = Σ_{n≥0} (n + a)^{−k} for integer k ≥ 2 and Re a > 0.
pub fn hurwitz_zeta(k: u32, a: Complex64) -> Complex64 {
    debug_assert!(k >= 2);
    let mut a = a;
    let mut head = Complex64::new(0.0, 0.0);
    while a.re < ASYMPTOTIC_RE {
        head += a.powi(-(k as i32));
        a += 1.0;
    }
    let s = k as f64;
    let inv = 1.0 / a;
    let inv2 = inv * inv;
    let a_ms = inv.powi(k as i32);
    let mut tail = a_ms * a / (s - 1.0) + 0.5 * a_ms;
    // B_{2j}/(2j)! · (s)_{2j−1} · a^{−s−2j+1}
    let mut poch = s;
    let mut fact = 2.0;
    let mut pw = a_ms * inv;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let j = j as f64 + 1.0;
        tail += pw * (b / fact * poch);
        poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        pw *= inv2;
    }
    head + tail
}

/// Digamma ψ(a) for Re a > 0.
pub fn digamma(a: Complex64) -> Complex64 {
    let mut a = a;
    let mut shift = Complex64::new(0.0, 0.0);
    while a.re < ASYMPTOTIC_RE {
        shift -= 1.0 / a;
        a += 1.0;
    }
    let inv = 1.0 / a;
    let inv2 = inv * inv;
    let mut acc = a.ln() - 0.5 * inv;
    let mut pw = inv2;
    for (j, b) in BERNOULLI.iter().enumerate() {
        acc -= pw * (b / (2.0 * (j as f64 + 1.0)));
        pw *= inv2;
    }
    acc + shift
}

/// Neumaier compensated accumulator for complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
    abs: f64,
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
        self.abs += z.norm();
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }

    /// Sum of term magnitudes, the scale for round-off estimates.
    pub fn magnitude(&self) -> f64 {
        self.abs
    }
}
