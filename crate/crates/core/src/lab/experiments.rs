//! Sweeps that evaluate both sides of each order equivalence.

use super::config::{ExperimentConfig, ExperimentKind};
use super::corpus::CorpusFunction;
use super::report::{sort_rows, EquivalenceRow};
use crate::banach::{self, AbstractFunction, NormedSpace, SampleCloud};
use crate::error::{Error, Result};
use crate::kfunctional::{k_exact_l2_spectrum, k_upper_bound_scaled, lemma_condition_report, OperatorSymbol};
use crate::moduli::{
    classical_modulus_spectrum, linearized_modulus_spectrum, weight_sin_integral, weighted_modulus_spectrum, StepSet,
    WeightSpec,
};
use crate::spectral::{spectrum_norm, LebesgueExponent, Spectrum};
use crate::summation::{approximation_error, MultiplierDescriptor};
use crate::wiener;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

/// Both sides of a relation plus whether a checked side condition failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
}

impl Outcome {
    pub fn pair(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, violated: false }
    }
}

type Eval = Box<dyn Fn() -> Vec<EquivalenceRow> + Send + Sync>;

struct Task(Eval);

fn row(label: &str, function: &str, p: &str, param: f64, out: Result<Outcome>) -> EquivalenceRow {
    match out {
        Ok(o) => EquivalenceRow::new(label, function, p, param, o.lhs, o.rhs, o.violated),
        Err(_) => EquivalenceRow::error(label, function, p, param),
    }
}

fn single<F>(label: String, function: String, p: String, param: f64, f: F) -> Task
where
    F: Fn() -> Result<Outcome> + Send + Sync + 'static,
{
    Task(Box::new(move || vec![row(&label, &function, &p, param, f())]))
}

type SharedSpectrum = std::result::Result<Arc<Spectrum>, String>;

fn spectra(cfg: &ExperimentConfig) -> Result<Vec<(String, SharedSpectrum)>> {
    let (d, n) = (cfg.dim(), cfg.resolution());
    cfg.corpus()
        .iter()
        .map(|name| {
            let f: CorpusFunction = name.parse()?;
            let s = f.spectrum(d, n, cfg.seed).map(Arc::new).map_err(|e| e.to_string());
            Ok((name.clone(), s))
        })
        .collect()
}

fn get(s: &SharedSpectrum) -> Result<&Spectrum> {
    s.as_deref().map_err(|e| Error::Domain(e.clone()))
}

fn k_value(s: &Spectrum, eps: f64, t: f64, p: LebesgueExponent, op: &OperatorSymbol, phi: &MultiplierDescriptor) -> Result<f64> {
    if p == LebesgueExponent::TWO {
        Ok(k_exact_l2_spectrum(s, t, op)?.value)
    } else {
        Ok(k_upper_bound_scaled(s, eps, t, p, op, phi)?.best())
    }
}

/// ‖Σ_j ∫₁^∞ u^{−1−α} Δ̇^{2r}_{εue_j} f du‖_p.
pub fn axes_kernel_modulus(s: &Spectrum, r: u32, alpha: f64, eps: f64, p: LebesgueExponent) -> Result<f64> {
    let w = WeightSpec::kernel(1.0 + alpha);
    let sign = (-4.0f64).powi(r as i32);
    let out = s.try_map_symbol(|k| {
        let mut acc = 0.0;
        for kj in k {
            acc += weight_sin_integral(&w, r, &[eps * kj])?;
        }
        Ok(Complex64::new(sign * acc, 0.0))
    })?;
    Ok(spectrum_norm(&out, p))
}

/// ‖∫₁^∞ (Δ̇²_{t(e₁+e₂)/n} + Δ̇²_{t(e₁−e₂)/n}) f dt/t²‖_p on the 2-torus.
pub fn diagonal_modulus(s: &Spectrum, n: f64, p: LebesgueExponent) -> Result<f64> {
    if s.dim() != 2 {
        return Err(Error::Domain("the diagonal modulus is defined for d = 2".into()));
    }
    let w = WeightSpec::kernel(2.0);
    let out = s.try_map_symbol(|k| {
        let plus = weight_sin_integral(&w, 1, &[(k[0] + k[1]) / n])?;
        let minus = weight_sin_integral(&w, 1, &[(k[0] - k[1]) / n])?;
        Ok(Complex64::new(-4.0 * (plus + minus), 0.0))
    })?;
    Ok(spectrum_norm(&out, p))
}

/// Spectrum of the conjugate of the antiderivative, −f̂_k/|k|.
pub fn conjugate_antiderivative(s: &Spectrum) -> Spectrum {
    s.map_symbol(|k| if k[0] == 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::new(-1.0 / k[0].abs(), 0.0) })
}

/// Parses `derivative:a`, `laplacian:r`, `axis:a`, `max_degree` or `radial:a`.
pub fn parse_operator(text: &str) -> Result<OperatorSymbol> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::Config(format!("unknown operator `{text}`"));
    let num = |i: usize| -> Result<f64> { parts.get(i).and_then(|v| v.parse().ok()).ok_or_else(bad) };
    let op = match (parts[0], parts.len()) {
        ("derivative", 2) => OperatorSymbol::Derivative(num(1)?),
        ("laplacian", 2) => OperatorSymbol::LaplacianPower(parts[1].parse().map_err(|_| bad())?),
        ("axis", 2) => OperatorSymbol::AxisPower(num(1)?),
        ("max_degree", 1) => OperatorSymbol::MaxDegree,
        ("radial", 2) => OperatorSymbol::RadialPower(num(1)?),
        _ => return Err(bad()),
    };
    Ok(op)
}

fn need(cond: bool, msg: String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Config(msg))
    }
}

/// Runs the sweep; per-row failures become `error` rows, bad configurations are errors.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<EquivalenceRow>> {
    cfg.validate()?;
    let tasks = match cfg.experiment {
        ExperimentKind::BanachSuite => banach_tasks(cfg)?,
        ExperimentKind::WienerScan => wiener_tasks(),
        ExperimentKind::KfuncLemma => lemma_tasks(cfg)?,
        _ => equivalence_tasks(cfg)?,
    };
    let mut rows: Vec<EquivalenceRow> = tasks.par_iter().flat_map_iter(|t| (t.0)()).collect();
    sort_rows(&mut rows);
    Ok(rows)
}

fn equivalence_tasks(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let kind = cfg.experiment;
    let d = cfg.dim();
    let corpus = spectra(cfg)?;
    let exps = cfg.exponents()?;
    let grid = cfg.grid();
    let orders = cfg.orders();
    let alpha = cfg.alpha.unwrap_or(match kind {
        ExperimentKind::Equiv24 => 2.0,
        _ => 1.0,
    });
    let beta = cfg.beta.unwrap_or(1.0);
    match kind {
        ExperimentKind::Equiv24 => {
            need(d == 1, "equiv_2_4 is one-dimensional".into())?;
            need(alpha.fract() == 0.0, format!("equiv_2_4 needs a natural α (got {alpha})"))?;
        }
        ExperimentKind::Equiv34 | ExperimentKind::Equiv35 | ExperimentKind::Equiv38 | ExperimentKind::Equiv39 => {
            need(beta > (d as f64 - 1.0) / 2.0, format!("β = {beta} must exceed (d − 1)/2"))?;
        }
        ExperimentKind::Equiv36 => need(d == 2, "equiv_3_6 is two-dimensional".into())?,
        ExperimentKind::Equiv22 | ExperimentKind::Equiv23 => need(d == 1, format!("{kind} is one-dimensional"))?,
        _ => {}
    }
    for &r in &orders {
        let rf = r as f64;
        let ok = match kind {
            ExperimentKind::Equiv24 | ExperimentKind::Equiv38 => rf > alpha / 2.0,
            ExperimentKind::Equiv39 => rf > 0.5 * (alpha + d as f64 - 1.0),
            _ => true,
        };
        need(ok, format!("order r = {r} is too small for α = {alpha} in {kind}"))?;
    }

    let mut tasks = Vec::new();
    for (name, spec) in &corpus {
        for &p in &exps {
            for &r in &orders {
                for &n in &grid {
                    let eps = 1.0 / n;
                    let s = spec.clone();
                    let (name, ps) = (name.clone(), p.to_string());
                    let rf = r as f64;
                    match kind {
                        ExperimentKind::Equiv22 => tasks.push(single(format!("{kind}:r={r}"), name, ps, n, move || {
                            let s = get(&s)?;
                            let lhs = classical_modulus_spectrum(s, r, &StepSet::unit_segment(), eps, p)?;
                            let rhs = linearized_modulus_spectrum(s, r, eps, p)?;
                            Ok(Outcome { lhs, rhs, violated: rhs > lhs + 1e-9 })
                        })),
                        ExperimentKind::Equiv23 => tasks.push(single(format!("{kind}:r={r}"), name, ps, n, move || {
                            let s = get(&s)?;
                            let lhs = approximation_error(s, &MultiplierDescriptor::trigub(r)?, eps, p)?;
                            let rhs = classical_modulus_spectrum(s, r, &StepSet::unit_segment(), eps, p)?;
                            Ok(Outcome::pair(lhs, rhs))
                        })),
                        ExperimentKind::Equiv24 => tasks.push(single(format!("{kind}:r={r}:alpha={alpha}"), name, ps, n, move || {
                            let s = get(&s)?;
                            let w = weighted_modulus_spectrum(s, r, &WeightSpec::kernel(alpha + 1.0), eps, p)?;
                            let a = alpha as u32;
                            let seg = StepSet::unit_segment();
                            let rhs = if a.is_multiple_of(2) {
                                classical_modulus_spectrum(s, a, &seg, eps, p)?
                            } else {
                                classical_modulus_spectrum(s, a + 1, &seg, eps, p)?
                                    + classical_modulus_spectrum(&conjugate_antiderivative(s), a + 1, &seg, eps, p)? / eps
                            };
                            Ok(Outcome { lhs: w.value, rhs, violated: w.flagged })
                        })),
                        ExperimentKind::Equiv34 | ExperimentKind::Equiv35 => {
                            let radial = kind == ExperimentKind::Equiv34;
                            let phi = if radial {
                                MultiplierDescriptor::bochner_riesz(rf, beta)?
                            } else {
                                MultiplierDescriptor::riesz_axis(2.0 * rf, beta)?
                            };
                            let op = if radial { OperatorSymbol::LaplacianPower(r) } else { OperatorSymbol::AxisPower(2.0 * rf) };
                            let weight = if radial { WeightSpec::BallIndicator } else { WeightSpec::AxesSum };
                            let (s2, phi2, op2, name2, ps2) = (s.clone(), phi.clone(), op.clone(), name.clone(), ps.clone());
                            tasks.push(single(format!("{kind}:r={r}:approx/modulus"), name, ps, n, move || {
                                let s = get(&s)?;
                                let lhs = approximation_error(s, &phi, eps, p)?;
                                let w = weighted_modulus_spectrum(s, r, &weight, eps, p)?;
                                Ok(Outcome { lhs, rhs: w.value, violated: w.flagged })
                            }));
                            tasks.push(single(format!("{kind}:r={r}:k/approx"), name2, ps2, n, move || {
                                let s = get(&s2)?;
                                let rhs = approximation_error(s, &phi2, eps, p)?;
                                let lhs = k_value(s, eps, eps.powf(2.0 * rf), p, &op2, &phi2)?;
                                Ok(Outcome::pair(lhs, rhs))
                            }));
                        }
                        ExperimentKind::Equiv36 => {
                            let deg = n.round() as u32;
                            let phi = MultiplierDescriptor::marcinkiewicz_2d(deg);
                            let (s2, phi2, name2, ps2) = (s.clone(), phi.clone(), name.clone(), ps.clone());
                            tasks.push(single(format!("{kind}:approx/modulus"), name, ps, n, move || {
                                let s = get(&s)?;
                                Ok(Outcome::pair(approximation_error(s, &phi, 1.0, p)?, diagonal_modulus(s, n, p)?))
                            }));
                            tasks.push(single(format!("{kind}:k/approx"), name2, ps2, n, move || {
                                let s = get(&s2)?;
                                let rhs = approximation_error(s, &phi2, 1.0, p)?;
                                let lhs = k_value(s, 1.0, 1.0 / n, p, &OperatorSymbol::MaxDegree, &phi2)?;
                                Ok(Outcome::pair(lhs, rhs))
                            }));
                        }
                        ExperimentKind::Equiv38 | ExperimentKind::Equiv39 => {
                            let axes = kind == ExperimentKind::Equiv38;
                            let phi = if axes {
                                MultiplierDescriptor::riesz_axis(alpha, beta)?
                            } else {
                                MultiplierDescriptor::riesz(alpha, beta)?
                            };
                            let op = if axes { OperatorSymbol::AxisPower(alpha) } else { OperatorSymbol::RadialPower(alpha) };
                            let (s2, phi2, name2, ps2) = (s.clone(), phi.clone(), name.clone(), ps.clone());
                            let label = format!("{kind}:r={r}:alpha={alpha}");
                            tasks.push(single(format!("{label}:approx/modulus"), name, ps, n, move || {
                                let s = get(&s)?;
                                let lhs = approximation_error(s, &phi, eps, p)?;
                                if axes {
                                    Ok(Outcome::pair(lhs, axes_kernel_modulus(s, r, alpha, eps, p)?))
                                } else {
                                    let w = WeightSpec::kernel(alpha + s.dim() as f64);
                                    let m = weighted_modulus_spectrum(s, r, &w, eps, p)?;
                                    Ok(Outcome { lhs, rhs: m.value, violated: m.flagged })
                                }
                            }));
                            tasks.push(single(format!("{label}:k/approx"), name2, ps2, n, move || {
                                let s = get(&s2)?;
                                let rhs = approximation_error(s, &phi2, eps, p)?;
                                let lhs = k_value(s, eps, eps.powf(alpha), p, &op, &phi2)?;
                                Ok(Outcome::pair(lhs, rhs))
                            }));
                        }
                        _ => unreachable!("handled by other task builders"),
                    }
                }
            }
        }
    }
    Ok(tasks)
}

fn lemma_tasks(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let method = cfg.method.clone().unwrap_or_else(|| "fejer".into());
    let phi: MultiplierDescriptor = method.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
    let op = parse_operator(cfg.operator.as_deref().unwrap_or("radial:1"))?;
    let power = cfg.scale_power.unwrap_or(1.0);
    let corpus = spectra(cfg)?;
    let names: Vec<String> = corpus.iter().map(|c| c.0.clone()).collect();
    let eps_grid: Vec<f64> = cfg.grid().iter().map(|n| 1.0 / n).collect();
    let label = format!("kfunc_lemma:{method}");
    let mut tasks = Vec::new();
    for p in cfg.exponents()? {
        let (phi, op, corpus, names, eps_grid, label) =
            (phi.clone(), op.clone(), corpus.clone(), names.clone(), eps_grid.clone(), label.clone());
        tasks.push(Task(Box::new(move || {
            let ps = p.to_string();
            let spectra: Result<Vec<Spectrum>> = corpus.iter().map(|c| get(&c.1).cloned()).collect();
            let report = spectra.and_then(|s| lemma_condition_report(&phi, &op, p, &eps_grid, &s, power));
            let rep = match report {
                Ok(r) => r,
                Err(_) => return vec![EquivalenceRow::error(&label, "@report", &ps, 0.0)],
            };
            let lower = 1.0 / (1.0 + rep.a_beta).max(rep.a_alpha);
            let upper = 1.0 + rep.a_gamma;
            let mut rows: Vec<EquivalenceRow> = rep
                .rows
                .iter()
                .map(|kr| {
                    let outside = kr.ratio.is_some_and(|q| q < lower * (1.0 - 1e-9) || q > upper * (1.0 + 1e-9));
                    EquivalenceRow::new(&label, &names[kr.function], &ps, 1.0 / kr.eps, kr.k, kr.error, outside)
                })
                .collect();
            for (name, v) in [("@a_alpha", rep.a_alpha), ("@a_beta", rep.a_beta), ("@a_gamma", rep.a_gamma)] {
                rows.push(EquivalenceRow::new(&label, name, &ps, 0.0, v, 1.0, !v.is_finite()));
            }
            rows
        })));
    }
    Ok(tasks)
}

/// Maps used by the Banach-space suite.
pub const BANACH_MAPS: [&str; 6] = ["cos", "sin", "exp_i_sin", "affine_r2", "quadratic", "rotation"];

pub fn banach_map(name: &str) -> Result<AbstractFunction> {
    match name {
        "cos" => AbstractFunction::scalar(PI, f64::cos),
        "sin" => AbstractFunction::scalar(PI, f64::sin),
        "quadratic" => AbstractFunction::scalar(1.0, |x| 3.0 * x * x - x),
        "exp_i_sin" => AbstractFunction::new(NormedSpace::real(), NormedSpace::complex(), PI, |x: &[f64]| {
            let t = x[0].sin();
            vec![t.cos(), t.sin()]
        }),
        "affine_r2" => {
            let e = NormedSpace::lp(2, 2.0)?;
            AbstractFunction::new(e.clone(), e, 1.0, |x: &[f64]| vec![2.0 * x[0] - x[1] + 1.0, 0.5 * x[1] - 3.0])
        }
        "rotation" => AbstractFunction::new(NormedSpace::real(), NormedSpace::matrices(2)?, PI, |x: &[f64]| {
            let (s, c) = x[0].sin_cos();
            vec![c, -s, s, c]
        }),
        _ => Err(Error::UnknownFunction(name.to_string())),
    }
}

fn banach_tasks(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let cloud = SampleCloud::new(4096, cfg.seed);
    let grid = cfg.grid();
    let orders = cfg.orders();
    let mut tasks = Vec::new();
    for name in cfg.corpus() {
        let f = Arc::new(banach_map(&name)?);
        let scalar_line = f.domain().dimension() == 1;
        for &r in &orders {
            let rf = r as i32;
            for &n in &grid {
                let h = 1.0 / n;
                let g = f.clone();
                tasks.push(single(format!("banach:scaling:r={r}"), name.clone(), "na".into(), n, move || {
                    let c = banach::scaling_check(&g, r, 2.5, h, &cloud)?;
                    Ok(Outcome { lhs: c.lhs, rhs: c.rhs, violated: !c.holds })
                }));
                let g = f.clone();
                tasks.push(single(format!("banach:ratio:r={r}"), name.clone(), "na".into(), n, move || {
                    let c = banach::ratio_check(&g, r, h, 4.0 * h, &cloud)?;
                    Ok(Outcome { lhs: c.lhs, rhs: c.rhs, violated: !c.holds })
                }));
                let g = f.clone();
                tasks.push(single(format!("banach:chain:r={r}"), name.clone(), "na".into(), n, move || {
                    let c = banach::chain_check(&g, r, h, &cloud)?;
                    Ok(Outcome { lhs: c.omegas[r as usize], rhs: 2f64.powi(rf) * c.omegas[0], violated: !c.holds })
                }));
                let g = f.clone();
                tasks.push(single(format!("banach:marchaud:r={r}"), name.clone(), "na".into(), n, move || {
                    let c = banach::marchaud_check(&g, r, h, 3, &cloud)?;
                    Ok(Outcome { lhs: c.lhs, rhs: c.rhs, violated: !c.holds })
                }));
                if scalar_line {
                    let g = f.clone();
                    tasks.push(single(format!("banach:steklov_deviation:r={r}"), name.clone(), "na".into(), n, move || {
                        let c = banach::steklov_check(&g, r, h, &steklov_points(g.radius()))?;
                        Ok(Outcome { lhs: c.deviation, rhs: c.deviation_bound, violated: !c.holds })
                    }));
                    let g = f.clone();
                    tasks.push(single(format!("banach:steklov_seminorm:r={r}"), name.clone(), "na".into(), n, move || {
                        let c = banach::steklov_check(&g, r, h, &steklov_points(g.radius()))?;
                        Ok(Outcome { lhs: c.seminorm, rhs: c.seminorm_bound, violated: !c.holds })
                    }));
                }
                if r == 1 && f.codomain().is_algebra() {
                    let g = f.clone();
                    tasks.push(single("banach:product:r=1".into(), name.clone(), "na".into(), n, move || {
                        let c = banach::product_modulus_check(&g, &g, 1, h, &cloud)?;
                        Ok(Outcome { lhs: c.lhs, rhs: c.bracket, violated: c.holds != Some(true) })
                    }));
                }
            }
            let g = f.clone();
            let seed = cfg.seed;
            tasks.push(single(format!("banach:identity_star:r={r}"), name.clone(), "na".into(), 0.0, move || {
                identity_star_outcome(&g, r, seed)
            }));
            // sup_h ω_r/h^r is infinite when the r-th derivative is unbounded on the whole space
            if name == "quadratic" && r == 1 {
                continue;
            }
            let g = f.clone();
            tasks.push(single(format!("banach:seminorm_limit:r={r}"), name.clone(), "na".into(), 0.0, move || {
                let steps = [0.2, 0.1, 0.05, 0.025, 0.0125];
                let c = banach::seminorm_limit(&g, r, &steps, 0.05, &cloud)?;
                Ok(Outcome { lhs: c.limit_ratio, rhs: c.sup_ratio, violated: !c.holds })
            }));
        }
        if name == "affine_r2" || name == "quadratic" {
            let r = if name == "affine_r2" { 1 } else { 2 };
            for &n in &grid {
                let g = f.clone();
                tasks.push(single(format!("banach:degenerate:r={r}"), name.clone(), "na".into(), n, move || {
                    let c = banach::degenerate_check(&g, r, 1.0 / n, &cloud)?;
                    Ok(Outcome { lhs: c.omega_h, rhs: c.predicted, violated: c.relative_error > 0.01 || c.next_order > 1e-9 })
                }));
            }
        }
    }
    Ok(tasks)
}

fn steklov_points(radius: f64) -> Vec<f64> {
    (0..256).map(|i| -radius + 2.0 * radius * i as f64 / 256.0).collect()
}

/// Largest identity residual over 25 seeded cases with n = 1..4, against 1e−12(1 + |lhs|).
pub fn identity_star_outcome(f: &AbstractFunction, r: u32, seed: u64) -> Result<Outcome> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (r as u64) << 32);
    let d = f.domain().dimension();
    let (mut worst, mut bound) = (0.0f64, f64::INFINITY);
    for case in 0..25 {
        let n = 1 + case % 4;
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0) * f.radius()).collect();
        let delta: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.25..0.25)).collect();
        let big: Vec<f64> = delta.iter().map(|v| v * n as f64).collect();
        let lhs = f.codomain().norm(&banach::abstract_difference(f, &x, &big, r));
        let res = banach::identity_star_check(f, r, n, &delta, &x)?;
        let b = 1e-12 * (1.0 + lhs);
        if res / b > worst / bound || case == 0 {
            worst = res;
            bound = b;
        }
    }
    Ok(Outcome { lhs: worst, rhs: bound, violated: worst > bound })
}

fn wiener_tasks() -> Vec<Task> {
    let mut tasks = Vec::new();
    for r in 1..=6u32 {
        tasks.push(single("wiener:psi_min".into(), "psi_r".into(), "na".into(), r as f64, move || {
            let s = wiener::psi_r_scan(r, 100.0, 100_000)?;
            Ok(Outcome { lhs: s.min_normalized, rhs: 1.0, violated: !(s.min_modulus > 0.0) })
        }));
    }
    tasks.push(single("wiener:fejer_a_norm".into(), "fejer_hat".into(), "na".into(), 64.0, || {
        let e = wiener::a_norm_estimate_1d(|x| Complex64::new((1.0 - x.abs()).max(0.0), 0.0), 64.0, 64)?;
        Ok(Outcome { lhs: e.estimate, rhs: 1.0, violated: (e.estimate - 1.0).abs() > 1e-2 || !e.converged })
    }));
    tasks.push(single("wiener:transition_b".into(), "riesz:2:1/fejer".into(), "na".into(), 64.0, || {
        let g = wiener::TransitionFunction::from_multipliers(MultiplierDescriptor::riesz(2.0, 1.0)?, MultiplierDescriptor::Fejer);
        let e = wiener::b_norm_upper_bound(
            |x| wiener::transition_eval(&g, &[x]).unwrap_or(Complex64::new(f64::NAN, 0.0)),
            Complex64::new(1.0, 0.0),
            64.0,
            64,
        )?;
        Ok(Outcome { lhs: e.estimate, rhs: 2.0, violated: !e.converged })
    }));
    for theta in [0.25, 0.5, 1.0] {
        for r in 1..=3u32 {
            tasks.push(single("wiener:g0".into(), format!("theta={theta}"), "na".into(), r as f64, move || {
                let v = wiener::transition_eval(&wiener::TransitionFunction::step_pair(r, theta), &[0.0])?;
                let want = (r as f64 + 1.0) * theta.powi(r as i32);
                Ok(Outcome { lhs: v.norm(), rhs: want, violated: (v.norm() - want).abs() > 1e-6 })
            }));
        }
    }
    tasks.push(single("wiener:radial_d3".into(), "gaussian".into(), "na".into(), 2001.0, || {
        let p = wiener::RadialProfile::from_fn(4.0, 2001, 3, |t| (-t * t).exp())?;
        let red = wiener::radial_transform(&p, wiener::RadialDirection::Reduce)?;
        let back = wiener::radial_transform(&red, wiener::RadialDirection::Invert)?;
        let err = back.samples.iter().zip(&p.samples).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok(Outcome { lhs: err, rhs: 1e-4, violated: err > 1e-4 })
    }));
    for (r, alpha) in [(1u32, 1.0), (2, 1.0), (2, 2.0)] {
        let label = format!("r={r}:alpha={alpha}");
        tasks.push(single("wiener:psi_limit".into(), label.clone(), "na".into(), 1000.0, move || {
            let avg = wiener::kernel_psi_period_average(r, alpha, 1000.0)?;
            let lim = wiener::psi_limit(r, alpha, 1);
            Ok(Outcome { lhs: avg, rhs: lim, violated: (avg / lim - 1.0).abs() > 0.02 })
        }));
        tasks.push(single("wiener:near_zero".into(), label, "na".into(), 1e-3, move || {
            let x = 1e-3;
            let v = wiener::kernel_psi(r, alpha, &[x])? / x.powf(alpha);
            let k = wiener::psi_near_zero_constant(r, alpha, 1)?;
            Ok(Outcome { lhs: v, rhs: k, violated: (v / k - 1.0).abs() > 0.01 })
        }));
    }
    tasks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::report::RowFlag;

    fn cfg(kind: ExperimentKind) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(kind);
        c.resolution = Some(if kind.default_dim() == 1 { 256 } else { 32 });
        c.grid = vec![4.0, 8.0];
        c
    }

    #[test]
    fn constant_rows_are_excluded() {
        let mut c = cfg(ExperimentKind::Equiv23);
        c.corpus = vec!["const".into()];
        let rows = run_experiment(&c).unwrap();
        assert!(!rows.is_empty());
        for r in rows {
            assert_eq!((r.lhs, r.rhs, r.flag), (0.0, 0.0, RowFlag::Excluded));
        }
    }

    #[test]
    fn every_kind_runs() {
        for kind in ExperimentKind::ALL {
            let mut c = cfg(kind);
            c.orders = match kind {
                ExperimentKind::Equiv24 | ExperimentKind::Equiv38 | ExperimentKind::Equiv39 => vec![2],
                _ => vec![1],
            };
            c.p = vec![super::super::config::ExponentValue::Text("inf".into())];
            if kind.default_dim() == 1 {
                c.corpus = match kind {
                    ExperimentKind::BanachSuite => vec!["cos".into(), "affine_r2".into()],
                    _ => vec!["random_trig:5:2".into()],
                };
            } else {
                c.corpus = vec!["random_trig_2d:3:2".into()];
            }
            if kind == ExperimentKind::KfuncLemma {
                c.p = vec![super::super::config::ExponentValue::Number(2.0)];
            }
            let rows = run_experiment(&c).unwrap();
            assert!(!rows.is_empty(), "{kind}");
            let failures: Vec<_> = rows.iter().filter(|r| r.is_failure()).collect();
            assert!(failures.is_empty(), "{kind}: {failures:?}");
        }
    }

    #[test]
    fn fejer_lemma_constants() {
        let mut c = cfg(ExperimentKind::KfuncLemma);
        c.corpus = vec!["abs_sin".into(), "random_trig:6:3".into()];
        let rows = run_experiment(&c).unwrap();
        let get = |n: &str| rows.iter().find(|r| r.function == n).unwrap().lhs;
        for c in ["@a_alpha", "@a_beta", "@a_gamma"] {
            assert!(get(c) > 0.0 && get(c) <= 1.0 + 1e-12, "{c} = {}", get(c));
        }
        assert!((get("@a_alpha") - 1.0).abs() < 1e-9);
        assert!(rows.iter().all(|r| !r.is_failure()));
    }

    #[test]
    fn bad_configs() {
        let mut c = cfg(ExperimentKind::Equiv23);
        c.corpus = vec!["nope".into()];
        assert!(matches!(run_experiment(&c), Err(Error::UnknownFunction(_))));
        let mut c = cfg(ExperimentKind::Equiv39);
        c.orders = vec![1];
        c.alpha = Some(2.0);
        assert!(matches!(run_experiment(&c), Err(Error::Config(_))));
        let mut c = cfg(ExperimentKind::KfuncLemma);
        c.operator = Some("bogus".into());
        assert!(matches!(run_experiment(&c), Err(Error::Config(_))));
    }

    #[test]
    fn deterministic() {
        let mut c = cfg(ExperimentKind::Equiv22);
        c.corpus = vec!["weierstrass:0.5".into(), "random_trig:6".into()];
        c.orders = vec![2];
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(a, b);
    }
}
