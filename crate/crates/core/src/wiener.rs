//! Transition functions, A(ℝ)-norm estimates, radial reduction and ψ scans.

use crate::error::{domain, Error, Result};
use crate::moduli::{forward_symbol, psi_r, sin_power_integral, weight_sin_integral, WeightSpec};
use crate::quad::{adaptive, binomial, gl32, richardson_limit, GaussLegendre};
use crate::summation::MultiplierDescriptor;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;

/// One side of a transition quotient.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolPart {
    /// 1 − φ(x) of a summation method.
    Deficit(MultiplierDescriptor),
    /// φ(x) itself.
    Multiplier(MultiplierDescriptor),
    /// (1 − e^{iθx})^r, d = 1.
    Difference { r: u32, theta: f64 },
    /// ψ_r(x) = ∫₀¹(1 − e^{itx})^r dt, d = 1.
    AveragedDifference(u32),
    /// ∫_{|u|≥1} sin^{2r}((x, u)) |u|^{−α−d} du.
    KernelIntegral { r: u32, alpha: f64 },
}

impl SymbolPart {
    pub fn evaluate(&self, x: &[f64]) -> Result<Complex64> {
        let one_d = |name: &str| -> Result<f64> {
            if x.len() != 1 {
                return domain(format!("{name} is defined for d = 1"));
            }
            Ok(x[0])
        };
        match self {
            Self::Deficit(phi) => Ok(Complex64::new(1.0, 0.0) - phi.evaluate(x)?),
            Self::Multiplier(phi) => phi.evaluate(x),
            Self::Difference { r, theta } => Ok(forward_symbol(*r as f64, theta * one_d("difference")?)),
            Self::AveragedDifference(r) => Ok(psi_r(*r, one_d("averaged difference")?)),
            Self::KernelIntegral { r, alpha } => Ok(Complex64::new(kernel_psi(*r, *alpha, x)?, 0.0)),
        }
    }
}

/// g = numerator / denominator, extended by continuity at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionFunction {
    pub numerator: SymbolPart,
    pub denominator: SymbolPart,
    /// Value at the origin; extrapolated when absent.
    pub value_at_zero: Option<Complex64>,
}

impl TransitionFunction {
    /// (1 − φ)/(1 − ψ) for two summation methods.
    pub fn from_multipliers(phi: MultiplierDescriptor, psi: MultiplierDescriptor) -> Self {
        Self { numerator: SymbolPart::Deficit(phi), denominator: SymbolPart::Deficit(psi), value_at_zero: None }
    }

    /// g_{r,θ} = (1 − e^{iθx})^r / ψ_r(x).
    pub fn step_pair(r: u32, theta: f64) -> Self {
        Self {
            numerator: SymbolPart::Difference { r, theta },
            denominator: SymbolPart::AveragedDifference(r),
            value_at_zero: None,
        }
    }

    /// ψ/φ for the kernel modulus against the Riesz method (1 − |x|^α)₊^β.
    pub fn kernel_pair(r: u32, alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self {
            numerator: SymbolPart::KernelIntegral { r, alpha },
            denominator: SymbolPart::Deficit(MultiplierDescriptor::riesz(alpha, beta)?),
            value_at_zero: None,
        })
    }

    fn quotient(&self, x: &[f64]) -> Result<Complex64> {
        let num = self.numerator.evaluate(x)?;
        let den = self.denominator.evaluate(x)?;
        if den.norm() < 1e-12 {
            if num.norm() >= 1e-6 {
                return Err(Error::Numerical(format!("nonremovable singularity at x = {x:?}")));
            }
            return Err(Error::Numerical(format!("0/0 at x = {x:?}")));
        }
        Ok(num / den)
    }
}

/// g(x), using the continuity value where the quotient is 0/0.
///
/// Limits are Richardson-extrapolated from x + h·e₁, h = 2^{−2−i}, 8 levels.
pub fn transition_eval(g: &TransitionFunction, x: &[f64]) -> Result<Complex64> {
    if x.is_empty() || x.iter().any(|v| !v.is_finite()) {
        return domain("transition argument must be a finite point");
    }
    let at_origin = x.iter().all(|v| *v == 0.0);
    if at_origin {
        if let Some(v) = g.value_at_zero {
            return Ok(v);
        }
    }
    match g.quotient(x) {
        Ok(v) if !at_origin => Ok(v),
        Err(Error::Numerical(msg)) if !msg.starts_with("0/0") => Err(Error::Numerical(msg)),
        _ => removable_value(g, x),
    }
}

fn removable_value(g: &TransitionFunction, x: &[f64]) -> Result<Complex64> {
    let fails = std::cell::Cell::new(false);
    let (v, _) = richardson_limit(
        |h| {
            let mut y = x.to_vec();
            y[0] += h;
            g.quotient(&y).unwrap_or_else(|_| {
                fails.set(true);
                Complex64::new(f64::NAN, 0.0)
            })
        },
        0.25,
        8,
    );
    if fails.get() || !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Numerical(format!("no continuity value at x = {x:?}")));
    }
    Ok(v)
}

/// A(ℝ)-norm estimate ∫|ĝ| where f = ∫ g(ξ) e^{ixξ} dξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ANormEstimate {
    /// Value at window 2W.
    pub estimate: f64,
    pub at_window: f64,
    pub at_double_window: f64,
    /// The two windows agree to 1%.
    pub converged: bool,
    /// |x f(x)| grows between [W/2, W] and [W, 2W].
    pub divergent: bool,
}

fn a_norm_window<F: Fn(f64) -> Complex64>(f: &F, window: f64, resolution: usize) -> f64 {
    let m = (2.0 * window * resolution as f64).round() as usize;
    let dx = 2.0 * window / m as f64;
    let mut data: Vec<Complex64> = (0..m).map(|j| f(-window + j as f64 * dx)).collect();
    let fft = FftPlanner::new().plan_fft_forward(m);
    fft.process(&mut data);
    // ĝ(ξ_m) = (dx/2π)Σ f(x_j)e^{−iξ_m x_j}; phases do not affect |ĝ|; dξ = 2π/(m·dx).
    let dxi = 2.0 * PI / (m as f64 * dx);
    data.iter().map(|z| z.norm()).sum::<f64>() * dx / (2.0 * PI) * dxi
}

/// Estimates ‖f‖_A from samples on [−W, W) and [−2W, 2W) at `resolution`
/// points per unit length.
pub fn a_norm_estimate_1d<F: Fn(f64) -> Complex64>(f: F, window: f64, resolution: usize) -> Result<ANormEstimate> {
    if !(window > 0.0 && window.is_finite()) || resolution < 2 {
        return domain("a_norm needs a positive window and resolution ≥ 2");
    }
    let sup = |a: f64, b: f64, weight: bool| -> f64 {
        let n = 2000;
        (0..=n)
            .flat_map(|i| {
                let x = a + (b - a) * i as f64 / n as f64;
                [x, -x]
            })
            .map(|x| f(x).norm() * if weight { x.abs() } else { 1.0 })
            .fold(0.0, f64::max)
    };
    let near = sup(0.0, 1.0, false);
    let c_in = sup(window / 2.0, window, true);
    let c_out = sup(window, 2.0 * window, true);
    let divergent = c_out > 1.5 * c_in.max(near) && c_out > 1e-12;
    let a = a_norm_window(&f, window, resolution);
    let b = a_norm_window(&f, 2.0 * window, resolution);
    let converged = !divergent && ((a - b).abs() <= 0.01 * b.abs() || b.abs() < 1e-14);
    Ok(ANormEstimate { estimate: b, at_window: a, at_double_window: b, converged, divergent })
}

/// ‖g − g(∞)‖_A + |g(∞)|, an upper bound for ‖g‖_B.
pub fn b_norm_upper_bound<F: Fn(f64) -> Complex64>(
    g: F,
    at_infinity: Complex64,
    window: f64,
    resolution: usize,
) -> Result<ANormEstimate> {
    let mut e = a_norm_estimate_1d(|x| g(x) - at_infinity, window, resolution)?;
    let extra = at_infinity.norm();
    e.estimate += extra;
    e.at_window += extra;
    e.at_double_window += extra;
    Ok(e)
}

/// Uniform samples of a radial profile on [0, T].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub t_max: f64,
    pub samples: Vec<f64>,
    pub dim: usize,
}

impl RadialProfile {
    pub fn new(t_max: f64, samples: Vec<f64>, dim: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) || samples.len() < 4 {
            return domain("radial profile needs T > 0 and at least four samples");
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return domain("radial profile samples must be finite");
        }
        if !(1..=3).contains(&dim) {
            return domain(format!("radial profiles support d ∈ 1..=3 (got {dim})"));
        }
        Ok(Self { t_max, samples, dim })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(t_max: f64, count: usize, dim: usize, f: F) -> Result<Self> {
        let step = t_max / (count.max(2) - 1) as f64;
        Self::new(t_max, (0..count).map(|i| f(i as f64 * step)).collect(), dim)
    }

    pub fn step(&self) -> f64 {
        self.t_max / (self.samples.len() - 1) as f64
    }

    pub fn abscissae(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.samples.len()).map(move |i| i as f64 * h)
    }

    /// Catmull–Rom cubic interpolation; quadratic ghost points at the ends.
    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.samples.len();
        let u = (t / self.step()).clamp(0.0, (n - 1) as f64);
        let i = (u.floor() as usize).min(n - 2);
        let s = u - i as f64;
        let y = |j: isize| -> f64 {
            let j = j.clamp(0, n as isize - 1) as usize;
            self.samples[j]
        };
        let (p0, p1, p2, p3) = (
            if i == 0 { 3.0 * (y(0) - y(1)) + y(2) } else { y(i as isize - 1) },
            y(i as isize),
            y(i as isize + 1),
            if i + 2 >= n { 3.0 * (y(n as isize - 1) - y(n as isize - 2)) + y(n as isize - 3) } else { y(i as isize + 2) },
        );
        let s2 = s * s;
        0.5 * (2.0 * p1 + (p2 - p0) * s + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s2 + (3.0 * p1 - p0 - 3.0 * p2 + p3) * s2 * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialDirection {
    Reduce,
    Invert,
}

/// F₀(t) = ∫₀¹ f₀(ut)(1 − u²)^{(d−3)/2} du and its inverse for d = 3.
///
/// Reduction substitutes u = sin θ; d = 1 is the identity. Inversion uses
/// f₀ = (tF₀)′ with centered differences and second-order one-sided ends.
pub fn radial_transform(profile: &RadialProfile, direction: RadialDirection) -> Result<RadialProfile> {
    let d = profile.dim;
    if d == 1 {
        return Ok(profile.clone());
    }
    match direction {
        RadialDirection::Reduce => {
            let gl = gl32();
            let panels = 8;
            let samples = profile
                .abscissae()
                .map(|t| {
                    (0..panels)
                        .map(|j| {
                            let a = 0.5 * PI * j as f64 / panels as f64;
                            let b = 0.5 * PI * (j + 1) as f64 / panels as f64;
                            gl.integrate(a, b, |th| profile.value_at(t * th.sin()) * th.cos().powi(d as i32 - 2))
                        })
                        .sum()
                })
                .collect();
            RadialProfile::new(profile.t_max, samples, d)
        }
        RadialDirection::Invert => {
            if d != 3 {
                return domain("radial inversion is implemented for d = 3 only");
            }
            let h = profile.step();
            let g: Vec<f64> = profile.abscissae().zip(&profile.samples).map(|(t, v)| t * v).collect();
            let n = g.len();
            let samples = (0..n)
                .map(|i| {
                    if i == 0 {
                        (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h)
                    } else if i == n - 1 {
                        (3.0 * g[n - 1] - 4.0 * g[n - 2] + g[n - 3]) / (2.0 * h)
                    } else {
                        (g[i + 1] - g[i - 1]) / (2.0 * h)
                    }
                })
                .collect();
            RadialProfile::new(profile.t_max, samples, d)
        }
    }
}

/// c in F₀ = c·t^γ when f₀ = t^γ: ∫₀¹ u^γ(1 − u²)^{(d−3)/2} du.
pub fn power_reduction_constant(gamma: f64, d: usize) -> Result<f64> {
    if !(gamma > -1.0) || !(2..=3).contains(&d) {
        return domain("power reduction needs γ > −1 and d ∈ {2, 3}");
    }
    let r = adaptive(
        |th: f64| th.sin().powf(gamma) * th.cos().powi(d as i32 - 2),
        0.0,
        0.5 * PI,
        1e-14,
        1e-12,
    );
    Ok(r.value)
}

/// Minimum of |ψ_r| on a uniform grid of (0, X].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiScan {
    pub r: u32,
    pub min_modulus: f64,
    pub argmin: f64,
    /// min of |ψ_r(x)| / min(1, x^r/(r+1)), which discounts the zero at 0.
    pub min_normalized: f64,
    pub normalized_argmin: f64,
}

pub fn psi_r_scan(r: u32, x_max: f64, points: usize) -> Result<PsiScan> {
    if r == 0 || r > 8 || !(x_max > 0.0 && x_max <= 1000.0) || points == 0 {
        return domain("ψ scan needs 1 ≤ r ≤ 8, 0 < X ≤ 1000 and at least one point");
    }
    let mut out = PsiScan {
        r,
        min_modulus: f64::INFINITY,
        argmin: 0.0,
        min_normalized: f64::INFINITY,
        normalized_argmin: 0.0,
    };
    for i in 1..=points {
        let x = x_max * i as f64 / points as f64;
        let m = psi_r(r, x).norm();
        if m < out.min_modulus {
            out.min_modulus = m;
            out.argmin = x;
        }
        let scale = (x.powi(r as i32) / (r as f64 + 1.0)).min(1.0);
        if m / scale < out.min_normalized {
            out.min_normalized = m / scale;
            out.normalized_argmin = x;
        }
    }
    Ok(out)
}

fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

/// ψ(x) = ∫_{|u|≥1} sin^{2r}((x, u)) |u|^{−α−d} du, two-sided in d = 1.
pub fn kernel_psi(r: u32, alpha: f64, x: &[f64]) -> Result<f64> {
    if !(alpha > 0.0) || r == 0 {
        return domain("kernel ψ needs α > 0 and r ≥ 1");
    }
    let d = x.len();
    let one_sided = weight_sin_integral(&WeightSpec::kernel(alpha + d as f64), r, x)?;
    Ok(if d == 1 { 2.0 * one_sided } else { one_sided })
}

/// ψ(∞) = |S^{d−1}| C(2r, r) / (α 4^r).
pub fn psi_limit(r: u32, alpha: f64, d: usize) -> f64 {
    sphere_area(d) * binomial(2.0 * r as f64, r as u64) / (alpha * 4f64.powi(r as i32))
}

/// ψ(x) averaged over y ∈ [x, x + π] along the first axis.
pub fn kernel_psi_period_average(r: u32, alpha: f64, x: f64) -> Result<f64> {
    let gl = GaussLegendre::new(24);
    let mut acc = 0.0;
    let panels = 4;
    for j in 0..panels {
        let a = x + PI * j as f64 / panels as f64;
        let b = x + PI * (j + 1) as f64 / panels as f64;
        let mut err = None;
        acc += gl.integrate(a, b, |y| {
            kernel_psi(r, alpha, &[y]).unwrap_or_else(|e| {
                err = Some(e);
                f64::NAN
            })
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(acc / PI)
}

/// lim_{x→0} ψ(x)/|x|^α = ∫_{S^{d−1}}|θ₁|^α dθ · ∫₀^∞ sin^{2r}u / u^{1+α} du.
pub fn psi_near_zero_constant(r: u32, alpha: f64, d: usize) -> Result<f64> {
    if !(2.0 * r as f64 > alpha) {
        return domain("near-zero law needs 2r > α");
    }
    let angular = match d {
        1 => 2.0,
        2 => {
            let q = adaptive(|t: f64| t.cos().abs().powf(alpha), 0.0, 0.5 * PI, 1e-14, 1e-12);
            4.0 * q.value
        }
        3 => 4.0 * PI / (alpha + 1.0),
        _ => return domain("dimension must be 1, 2 or 3"),
    };
    Ok(angular * sin_power_integral(2 * r, 1.0 + alpha)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn equal_pair_is_one() {
        let g = TransitionFunction::from_multipliers(MultiplierDescriptor::Fejer, MultiplierDescriptor::Fejer);
        for x in [0.1, 0.5, 0.9] {
            assert!((transition_eval(&g, &[x]).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        }
        assert!((transition_eval(&g, &[0.0]).unwrap() - c(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn riesz_over_fejer() {
        let g = TransitionFunction::from_multipliers(
            MultiplierDescriptor::riesz(2.0, 1.0).unwrap(),
            MultiplierDescriptor::Fejer,
        );
        assert!((transition_eval(&g, &[0.5]).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        assert!(transition_eval(&g, &[0.0]).unwrap().norm() < 1e-9);
    }

    #[test]
    fn step_pair_value_at_zero() {
        for r in 1..=3 {
            for theta in [0.25, 0.5, 1.0] {
                let g = TransitionFunction::step_pair(r, theta);
                let v = transition_eval(&g, &[0.0]).unwrap();
                let want = (r as f64 + 1.0) * theta.powi(r as i32);
                assert!((v - c(want, 0.0)).norm() < 1e-6, "{r} {theta}: {v}");
            }
        }
    }

    #[test]
    fn nonremovable_singularity() {
        // 1 − ψ vanishes at 0 while the numerator is Fejér itself, equal to 1.
        let g = TransitionFunction {
            numerator: SymbolPart::Multiplier(MultiplierDescriptor::Fejer),
            denominator: SymbolPart::Deficit(MultiplierDescriptor::Fejer),
            value_at_zero: None,
        };
        assert!(transition_eval(&g, &[0.0]).is_err());
    }

    #[test]
    fn fejer_hat_norm() {
        let e = a_norm_estimate_1d(|x| c((1.0 - x.abs()).max(0.0), 0.0), 64.0, 64).unwrap();
        assert!((e.estimate - 1.0).abs() < 1e-2, "{e:?}");
        assert!(e.converged && !e.divergent);
        let z = a_norm_estimate_1d(|_| c(0.0, 0.0), 16.0, 16).unwrap();
        assert_eq!(z.estimate, 0.0);
        let q = a_norm_estimate_1d(|x| c((1.0 - x * x).max(0.0), 0.0), 32.0, 64).unwrap();
        assert!(q.converged, "{q:?}");
        // modulation invariance and the triangle inequality
        let hat = |x: f64| c((1.0 - x.abs()).max(0.0), 0.0);
        let m = a_norm_estimate_1d(|x| hat(x) * Complex64::from_polar(1.0, 3.0 * x), 64.0, 64).unwrap();
        assert!((m.estimate - e.estimate).abs() < 0.01 * e.estimate);
        let s = a_norm_estimate_1d(|x| hat(x) + c((1.0 - x * x).max(0.0), 0.0), 32.0, 64).unwrap();
        assert!(s.estimate <= 1.02 * (e.estimate + q.estimate));
        let grow = a_norm_estimate_1d(|x| c(x.abs().sqrt(), 0.0), 16.0, 16).unwrap();
        assert!(grow.divergent && !grow.converged);
    }

    #[test]
    fn radial_reduction() {
        // d = 3: F₀(t) = (1/t)∫₀^t f₀
        let p = RadialProfile::from_fn(4.0, 2001, 3, |t| (-t * t).exp()).unwrap();
        let red = radial_transform(&p, RadialDirection::Reduce).unwrap();
        for (t, v) in red.abscissae().zip(&red.samples).skip(1).step_by(97) {
            let want = adaptive(|s| (-s * s).exp(), 0.0, t, 1e-15, 1e-13).value / t;
            assert!((v - want).abs() < 1e-7, "{t}: {v} vs {want}");
        }
        let back = radial_transform(&red, RadialDirection::Invert).unwrap();
        for (a, b) in back.samples.iter().zip(&p.samples) {
            assert!((a - b).abs() < 1e-4);
        }
        // power law with the reduction constant
        for (gamma, d, tol) in [(2.0, 3usize, 1e-5), (2.0, 2, 1e-5), (0.5, 2, 1e-3)] {
            let p = RadialProfile::from_fn(2.0, 1001, d, |t| t.powf(gamma)).unwrap();
            let red = radial_transform(&p, RadialDirection::Reduce).unwrap();
            let c = power_reduction_constant(gamma, d).unwrap();
            for (t, v) in red.abscissae().zip(&red.samples).skip(100).step_by(50) {
                assert!((v - c * t.powf(gamma)).abs() < tol * t.powf(gamma).max(1.0), "{gamma} {d} {t}");
            }
        }
        assert!((power_reduction_constant(2.0, 3).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let p2 = RadialProfile::from_fn(1.0, 16, 2, |t| t).unwrap();
        assert!(radial_transform(&p2, RadialDirection::Invert).is_err());
        let p1 = RadialProfile::from_fn(1.0, 16, 1, |t| t).unwrap();
        assert_eq!(radial_transform(&p1, RadialDirection::Invert).unwrap(), p1);
    }

    #[test]
    fn psi_scan() {
        for r in 1..=6 {
            let s = psi_r_scan(r, 100.0, 100_000).unwrap();
            assert!(s.min_modulus > 0.0);
            assert!(s.min_normalized > 0.05, "{s:?}");
        }
        assert!(psi_r_scan(9, 100.0, 10).is_err());
        let s = psi_r_scan(1, PI, 1).unwrap();
        assert!((s.min_modulus - (1.0 + 4.0 / (PI * PI)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kernel_psi_limits() {
        for (r, alpha) in [(1u32, 1.0), (2, 1.0), (2, 2.0)] {
            let avg = kernel_psi_period_average(r, alpha, 1000.0).unwrap();
            let lim = psi_limit(r, alpha, 1);
            assert!((avg / lim - 1.0).abs() < 0.02, "{r} {alpha}: {avg} vs {lim}");
            let x = 1e-3;
            let near = kernel_psi(r, alpha, &[x]).unwrap() / x.powf(alpha);
            let k = psi_near_zero_constant(r, alpha, 1).unwrap();
            assert!((near / k - 1.0).abs() < 0.01, "{r} {alpha}: {near} vs {k}");
        }
        // closed forms of ∫₀^∞ sin^{2r}u/u^{1+α}du: π/2, π/4, ln 2
        assert!((psi_near_zero_constant(1, 1.0, 1).unwrap() - PI).abs() < 1e-9);
        assert!((psi_near_zero_constant(2, 1.0, 1).unwrap() - PI / 2.0).abs() < 1e-9);
        assert!((psi_near_zero_constant(2, 2.0, 1).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-9);
        assert!(kernel_psi(1, 0.0, &[1.0]).is_err());
    }

    #[test]
    fn kernel_transition_is_finite() {
        let g = TransitionFunction::kernel_pair(2, 1.0, 1.0).unwrap();
        for x in [0.05, 0.5, 1.0, 3.0, 40.0] {
            let v = transition_eval(&g, &[x]).unwrap();
            assert!(v.re > 0.0 && v.re.is_finite());
        }
    }
}
