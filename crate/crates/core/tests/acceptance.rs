//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::f64::consts::PI;
use std::process::ExitCode;

use unruh_kinetics::fermion::{coarse_graining_diagnostic, fermion_population_rhs, fermion_rates, BathSpectrum};
use unruh_kinetics::kernels::{g_thermal_accelerated, g_thermal_inertial, g_thermal_inertial_sum};
use unruh_kinetics::master::{closed_form, decay_rate, evolve, PopulationState};
use unruh_kinetics::rates::{atom_rr_rate, atom_total_rate, atom_vf_rate, derivative_coupling_rates, field_rates};
use unruh_kinetics::response::{accelerated_response_oracle, inertial_response_oracle, planck_rate};
use unruh_kinetics::{AtomState, DetectorParams, OrderingParam, Regularization, Result};

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    passed: bool,
    summary: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn lattice_sum() -> Result<Outcome> {
    let reg = Regularization::default();
    let mut worst = 0.0f64;
    for &beta in &[0.5, 1.0, 2.0, 4.0, 8.0] {
        for &ratio in &[0.1, 0.5, 1.0, 1.5, 2.0] {
            let u = ratio * beta;
            let s = g_thermal_inertial_sum(u, beta, 0.0, &reg)?.re();
            worst = worst.max(rel(s, g_thermal_inertial(u, beta, 0.0)?.re()));
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-8,
        summary: format!("max rel error {worst:.3e} (tol 1e-8) on 5x5 (u, beta), u/beta <= 2"),
    })
}

fn unruh_correspondence() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for &alpha in &[0.1, 0.5, 1.0, 2.0, 5.0] {
        for &u in &[0.1, 0.5, 1.0, 2.0] {
            let a = g_thermal_accelerated(u, 0.0, f64::INFINITY, alpha)?;
            let b = g_thermal_inertial(u, 2.0 * PI / alpha, 0.0)?;
            worst = worst.max((a.value - b.value).norm() / b.value.norm());
        }
    }
    let tol = 64.0 * f64::EPSILON;
    Ok(Outcome {
        passed: worst <= tol,
        summary: format!("max rel difference {worst:.3e} (tol {tol:.1e}) at 20 points"),
    })
}

fn inertial_silence() -> Result<Outcome> {
    let mut values = Vec::new();
    for k in 0..4 {
        let eps = 1e-3 / f64::from(1 << k);
        values.push(inertial_response_oracle(1.0, eps, 1e3, 1e-10)?.norm());
    }
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    Ok(Outcome {
        passed: values[0] < 1e-2 && decreasing,
        summary: format!(
            "|F| = {} at eps = 1e-3 / 2^k (need < 1e-2 and decreasing)",
            values.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    })
}

fn planck_response() -> Result<Outcome> {
    let v = accelerated_response_oracle(1.0, 2.0, &Regularization::default())?;
    let exact = planck_rate(1.0, 2.0);
    let e = rel(v, exact);
    Ok(Outcome {
        passed: e <= 1e-4,
        summary: format!("oracle {v:.10e} vs {exact:.10e}, rel {e:.3e} (tol 1e-4)"),
    })
}

fn master_oracle() -> Result<Outcome> {
    let mut sup = 0.0f64;
    let mut defect = 0.0f64;
    for &omega0 in &[0.5, 1.0, 2.0] {
        for &beta in &[0.3, 1.0, 5.0] {
            for &p in &[0.0, 0.25, 0.5, 0.75, 1.0] {
                let init = PopulationState::with_excited(p)?;
                let tau = 5.0 / decay_rate(omega0, beta);
                let traj = evolve(&init, omega0, beta, tau, None)?;
                defect = defect.max(traj.max_defect);
                for (t, s) in traj.taus.iter().zip(&traj.states) {
                    sup = sup.max(s.distance(&closed_form(&init, omega0, beta, *t)?));
                    defect = defect.max((s.sigma_plus + s.sigma_minus - 1.0).abs());
                }
            }
        }
    }
    Ok(Outcome {
        passed: sup <= 1e-8 && defect <= 1e-12,
        summary: format!("sup error {sup:.3e} (tol 1e-8), conservation defect {defect:.3e} (tol 1e-12)"),
    })
}

fn steady_state_balance() -> Result<Outcome> {
    let mut dist = 0.0f64;
    let mut ratio = 0.0f64;
    for &(omega0, beta) in &[(1.0, 1.0), (2.0, 0.5), (0.5, 4.0)] {
        let x = omega0 * beta;
        let traj = evolve(&PopulationState::with_excited(1.0)?, omega0, beta, 40.0 / decay_rate(omega0, beta), None)?;
        let s = traj.last();
        let target = PopulationState::new(1.0 / (1.0 + x.exp()), x.exp() / (1.0 + x.exp()))?;
        dist = dist.max(s.distance(&target));
        ratio = ratio.max(rel(s.sigma_plus / s.sigma_minus, (-x).exp()));
    }
    Ok(Outcome {
        passed: dist <= 1e-6 && ratio <= 1e-10,
        summary: format!("distance {dist:.3e} (tol 1e-6), ratio rel error {ratio:.3e} (tol 1e-10)"),
    })
}

fn temperature_regimes() -> Result<Outcome> {
    let hot = evolve(&PopulationState::with_excited(0.01)?, 1.0, 0.01, 40.0 / decay_rate(1.0, 0.01), None)?;
    let h = *hot.last();
    let hot_err = (h.sigma_plus - 0.5).abs().max((h.sigma_minus - 0.5).abs());
    let cold = evolve(&PopulationState::with_excited(0.99)?, 1.0, 5.0, 40.0 / decay_rate(1.0, 5.0), None)?;
    let c = cold.last().sigma_minus;
    Ok(Outcome {
        passed: hot_err <= 1e-4 && c > 0.99,
        summary: format!(
            "high T: sigma = ({:.6}, {:.6}), |sigma - 1/2| = {hot_err:.3e} (tol 1e-4); low T: sigma_minus = {c:.6} (need > 0.99)",
            h.sigma_plus, h.sigma_minus
        ),
    })
}

fn fermion_limits() -> Result<Outcome> {
    let cold = fermion_rates(&BathSpectrum::uniform(1.0, 0.1, 101, f64::INFINITY)?, 1.0, 10.0)?;
    let hot = fermion_rates(&BathSpectrum::uniform(1.0, 0.1, 101, 1e-6)?, 1.0, 10.0)?;
    let half = rel(hot.t_f / hot.c, 0.5);
    let mut sum_zero = true;
    for diag in [[1.0, 0.0], [0.3, 0.7], [0.123, 0.877], [0.0, 1.0]] {
        for rates in [&cold, &hot] {
            let r = fermion_population_rhs(2, &diag, rates)?;
            sum_zero &= r[0] + r[1] == 0.0;
        }
    }
    Ok(Outcome {
        passed: cold.t_f == 0.0 && half <= 1e-4 && sum_zero,
        summary: format!(
            "T_F(inf) = {:e}, T_F(1e-6)/C rel error {half:.3e} (tol 1e-4), rhs sums exactly zero: {sum_zero}",
            cold.t_f
        ),
    })
}

fn energy_decomposition() -> Result<Outcome> {
    let mut split = 0.0f64;
    let mut lambda = 0.0f64;
    let mut ground = 0.0f64;
    for &alpha in &[0.0, 0.3, 1.0, 3.0, 10.0] {
        for &(w, mu) in &[(1.0, 1.0), (0.4, 0.2), (2.5, 0.7)] {
            let d = DetectorParams::new(w, mu)?;
            for atom in [AtomState::plus(), AtomState::new(0.1)?, AtomState::minus()] {
                let s = atom_total_rate(&d, alpha, &atom, OrderingParam::symmetric())?;
                split = split.max((s.vf.unwrap() + s.rr.unwrap() - s.total).abs());
                for &l in &[0.0, 0.25, 0.75, 1.0] {
                    let t = atom_total_rate(&d, alpha, &atom, OrderingParam::new(l)?)?;
                    lambda = lambda.max((t.total - s.total).abs());
                }
            }
            for &l in &[0.0, 0.5, 1.0] {
                let g = atom_total_rate(&d, alpha, &AtomState::minus(), OrderingParam::new(l)?)?;
                ground = ground.max(g.total.abs());
            }
        }
    }
    Ok(Outcome {
        passed: split <= 1e-12 && lambda == 0.0 && ground == 0.0,
        summary: format!(
            "|vf + rr - total| {split:.3e} (tol 1e-12), lambda spread {lambda:e}, ground-state total {ground:e}"
        ),
    })
}

fn energy_balance() -> Result<Outcome> {
    let reg = Regularization::default();
    let atom = AtomState::plus();
    let (mut vf, mut rr) = (0.0f64, 0.0f64);
    let mut worst_rr = (0.0, 0.0);
    for &w in &[0.5, 1.0, 2.0] {
        for &alpha in &[0.5, 1.0, 2.0] {
            let d = DetectorParams::new(w, 1.0)?;
            let f = field_rates(&d, alpha, &atom, &reg)?;
            vf = vf.max(rel(f.vf.abs(), atom_vf_rate(&d, alpha, &atom)?.abs()));
            let e = rel(f.rr.abs(), atom_rr_rate(&d, alpha)?.abs());
            if e > rr {
                rr = e;
                worst_rr = (w, alpha);
            }
        }
    }
    Ok(Outcome {
        passed: vf <= 1e-4 && rr <= 1e-4,
        summary: format!(
            "max rel |vf| mismatch {vf:.3e}, max rel |rr| mismatch {rr:.3e} at (omega0, alpha) = {worst_rr:?} (tol 1e-4)"
        ),
    })
}

fn derivative_invariance() -> Result<Outcome> {
    let reg = Regularization::default();
    let d = DetectorParams::new(1.0, 1.0)?;
    let atom = AtomState::plus();
    let r0 = derivative_coupling_rates(&d, 1.0, &atom, 0, &reg)?;
    let mut worst = 0.0f64;
    for n in 1..=2 {
        let r = derivative_coupling_rates(&d, 1.0, &atom, n, &reg)?;
        worst = worst.max(rel(r.vf.unwrap(), r0.vf.unwrap()));
        worst = worst.max(rel(r.rr.unwrap(), r0.rr.unwrap()));
    }
    Ok(Outcome {
        passed: worst <= 1e-3,
        summary: format!("max rel difference of n = 1, 2 from n = 0: {worst:.3e} (tol 1e-3)"),
    })
}

fn acceleration_trend() -> Result<Outcome> {
    let alphas: Vec<f64> = (0..50).map(|i| 0.1 + 4.9 * i as f64 / 49.0).collect();
    let column = |beta: f64| -> Result<Vec<f64>> {
        alphas
            .iter()
            .map(|&a| Ok(g_thermal_accelerated(1.0, 0.0, beta, a)?.re().abs()))
            .collect()
    };
    let cold = column(f64::INFINITY)?;
    let warm = column(1.0)?;
    let increasing = cold.windows(2).all(|w| w[1] > w[0]);
    let decreasing_segment = warm.windows(2).any(|w| w[1] < w[0]);
    Ok(Outcome {
        passed: increasing && decreasing_segment,
        summary: format!(
            "beta = inf: |g| from {:.4e} to {:.4e}, increasing: {increasing}; beta = 1: decreasing segment: {decreasing_segment}",
            cold[0],
            cold[cold.len() - 1]
        ),
    })
}

fn coarse_graining() -> Result<Outcome> {
    let mut ok = true;
    for &v in &[0.0, 0.01, 0.05, 0.099, 0.1, 0.2, 1.0] {
        for &t in &[0.5, 1.0, 2.0] {
            let c = coarse_graining_diagnostic(v, t)?;
            ok &= c.ratio == 2.0 * v * t;
            ok &= c.valid == ((v * t) * (v * t) < 0.01);
        }
    }
    Ok(Outcome {
        passed: ok,
        summary: format!("ratio = 2 v tau_c and validity flag iff (v tau_c)^2 < 0.01 on 21 points: {ok}"),
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("lattice-sum oracle", lattice_sum),
        ("unruh correspondence", unruh_correspondence),
        ("inertial detector silence", inertial_silence),
        ("planck response", planck_response),
        ("master-equation oracle", master_oracle),
        ("steady state and detailed balance", steady_state_balance),
        ("high- and low-temperature regimes", temperature_regimes),
        ("fermion limits", fermion_limits),
        ("energy decomposition", energy_decomposition),
        ("energy balance", energy_balance),
        ("derivative-coupling invariance", derivative_invariance),
        ("acceleration versus temperature trend", acceleration_trend),
        ("coarse-graining diagnostic", coarse_graining),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let (passed, summary) = match f() {
            Ok(o) => (o.passed, o.summary),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {summary} [{:.2?}]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
