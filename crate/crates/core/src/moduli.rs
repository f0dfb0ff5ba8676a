//! Finite differences and moduli of smoothness.

use crate::error::{domain, Error, Result};
use crate::quad::{adaptive, bessel_j0_power, bessel_j1, binomial, fourier_power, GaussLegendre};
use crate::spectral::{analyze, spectrum_norm, synthesize, GridFunction, LebesgueExponent, Spectrum};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Forward Δ^r_δ or symmetric Δ̇^{2r}_δ with Δ̇_δ f(x) = f(x − δ) − f(x + δ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DifferenceStyle {
    Forward,
    Symmetric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceSpec {
    /// r; for the symmetric style the applied order is 2r.
    pub order: f64,
    pub style: DifferenceStyle,
    pub step: Vec<f64>,
}

impl DifferenceSpec {
    pub fn forward(order: f64, step: Vec<f64>) -> Result<Self> {
        let s = Self { order, style: DifferenceStyle::Forward, step };
        s.validate()?;
        Ok(s)
    }

    pub fn symmetric(order: u32, step: Vec<f64>) -> Result<Self> {
        let s = Self { order: order as f64, style: DifferenceStyle::Symmetric, step };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.order > 0.0 && self.order.is_finite()) {
            return domain(format!("difference order must be positive (got {})", self.order));
        }
        if self.style == DifferenceStyle::Symmetric && self.order.fract() != 0.0 {
            return domain("fractional order is only defined for forward differences");
        }
        if self.step.is_empty() || self.step.iter().any(|v| !v.is_finite()) {
            return domain("difference step must be a finite vector");
        }
        Ok(())
    }

    /// Symbol at the phase t = (k, δ).
    pub fn symbol(&self, t: f64) -> Complex64 {
        match self.style {
            DifferenceStyle::Forward => forward_symbol(self.order, t),
            DifferenceStyle::Symmetric => symmetric_symbol(self.order as u32, t),
        }
    }
}

/// (1 − e^{it})^r on the principal branch, 0 at t ∈ 2πℤ.
pub fn forward_symbol(order: f64, t: f64) -> Complex64 {
    let tr = t - 2.0 * PI * (t / (2.0 * PI)).round();
    let s = (0.5 * tr).sin();
    if s == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let modulus = 2.0 * s.abs();
    let arg = 0.5 * tr - 0.5 * PI * tr.signum();
    if order.fract() == 0.0 {
        Complex64::from_polar(modulus.powi(order as i32), order * arg)
    } else {
        Complex64::from_polar(modulus.powf(order), order * arg)
    }
}

/// (−2i sin t)^{2r}.
pub fn symmetric_symbol(r: u32, t: f64) -> Complex64 {
    let v = (-4.0f64).powi(r as i32) * t.sin().powi(2 * r as i32);
    Complex64::new(v, 0.0)
}

fn dot(k: &[f64], u: &[f64]) -> f64 {
    k.iter().zip(u).map(|(a, b)| a * b).sum()
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return domain(format!("step h = {h} must be positive"));
    }
    Ok(())
}

/// Δ^r_δ f or Δ̇^{2r}_δ f, applied in coefficient space.
pub fn difference(f: &GridFunction, spec: &DifferenceSpec) -> Result<GridFunction> {
    Ok(synthesize(&difference_spectrum(&analyze(f), spec)?))
}

pub fn difference_spectrum(s: &Spectrum, spec: &DifferenceSpec) -> Result<Spectrum> {
    spec.validate()?;
    if spec.step.len() != s.dim() {
        return Err(Error::ShapeMismatch(format!(
            "step of length {} for dimension {}",
            spec.step.len(),
            s.dim()
        )));
    }
    Ok(s.map_symbol(|k| spec.symbol(dot(k, &spec.step))))
}

/// Star-shaped step set E inside the unit ball.
#[derive(Debug, Clone, PartialEq)]
pub enum StepRegion {
    Ball,
    Axes,
    Segment(Vec<f64>),
    Square,
    Points(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepSet {
    pub region: StepRegion,
    /// Sampling density M.
    pub density: usize,
}

pub const DEFAULT_DENSITY: usize = 128;

impl StepSet {
    pub fn new(region: StepRegion, density: usize) -> Result<Self> {
        if density < 16 {
            return domain(format!("step-set density must be at least 16 (got {density})"));
        }
        match &region {
            StepRegion::Segment(e) => {
                let n = e.iter().map(|v| v * v).sum::<f64>().sqrt();
                if !(n > 0.0 && n <= 1.0 + 1e-12) {
                    return domain("segment direction must be nonzero with |e| ≤ 1");
                }
            }
            StepRegion::Points(pts) => {
                if pts.is_empty() {
                    return domain("explicit step set is empty");
                }
                for u in pts {
                    let n = u.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if !(n <= 1.0 + 1e-12) || u.iter().any(|v| !v.is_finite()) {
                        return domain("explicit steps must lie in the unit ball");
                    }
                }
            }
            _ => {}
        }
        Ok(Self { region, density })
    }

    /// The segment (0, 1] in d = 1.
    pub fn unit_segment() -> Self {
        Self { region: StepRegion::Segment(vec![1.0]), density: DEFAULT_DENSITY }
    }

    pub fn ball(density: usize) -> Result<Self> {
        Self::new(StepRegion::Ball, density)
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        let bad = match &self.region {
            StepRegion::Segment(e) => e.len() != d,
            StepRegion::Points(p) => p.iter().any(|u| u.len() != d),
            _ => false,
        };
        if bad {
            return Err(Error::ShapeMismatch(format!("step set does not live in dimension {d}")));
        }
        Ok(())
    }

    fn refinable(&self) -> bool {
        !matches!(self.region, StepRegion::Points(_))
    }

    /// Sample points of E at density m.
    pub fn samples(&self, d: usize, m: usize) -> Vec<Vec<f64>> {
        let radii = log_uniform(m);
        let scaled = |dir: &[f64], rs: &[f64]| -> Vec<Vec<f64>> {
            rs.iter().map(|t| dir.iter().map(|v| v * t).collect()).collect()
        };
        match &self.region {
            StepRegion::Segment(e) => scaled(e, &radii),
            StepRegion::Axes => (0..d)
                .flat_map(|j| {
                    let mut e = vec![0.0; d];
                    e[j] = 1.0;
                    scaled(&e, &radii)
                })
                .collect(),
            StepRegion::Ball => {
                let dirs = sphere_directions(d, m);
                let rs = if d == 1 { radii } else { log_uniform((m / 4).max(16)) };
                dirs.iter().flat_map(|e| scaled(e, &rs)).collect()
            }
            StepRegion::Square => {
                let side = ((m as f64).powf(1.0 / d as f64).ceil() as usize).max(4) | 1;
                let c = 1.0 / (d as f64).sqrt();
                let coord = |i: usize| c * (2.0 * i as f64 / (side - 1) as f64 - 1.0);
                let total = side.pow(d as u32);
                (0..total)
                    .map(|mut lin| {
                        let mut u = vec![0.0; d];
                        for v in u.iter_mut().rev() {
                            *v = coord(lin % side);
                            lin /= side;
                        }
                        u
                    })
                    .filter(|u| u.iter().any(|v| *v != 0.0))
                    .collect()
            }
            StepRegion::Points(p) => p.clone(),
        }
    }
}

/// t_i = 2^{−10(1 − i/(m−1))}, i < m; nested under m − 1 ↦ 2(m − 1).
fn log_uniform(m: usize) -> Vec<f64> {
    let m = m.max(2);
    (0..m).map(|i| (-10.0 * (1.0 - i as f64 / (m - 1) as f64)).exp2()).collect()
}

fn sphere_directions(d: usize, m: usize) -> Vec<Vec<f64>> {
    match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => {
            let a = (m / 8).max(16);
            (0..a)
                .map(|j| {
                    let th = 2.0 * PI * j as f64 / a as f64;
                    vec![th.cos(), th.sin()]
                })
                .collect()
        }
        _ => {
            let a = (m / 4).max(32);
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..a)
                .map(|j| {
                    let z = 1.0 - 2.0 * (j as f64 + 0.5) / a as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let th = golden * j as f64;
                    vec![rho * th.cos(), rho * th.sin(), z]
                })
                .collect()
        }
    }
}

/// ω_r(f; E; h)_p = sup_{u ∈ E} ‖Δ^r_{hu} f‖_p over sampled u.
///
/// The density is doubled (at most four times) until the value moves by
/// less than 0.5%.
pub fn classical_modulus(
    f: &GridFunction,
    r: u32,
    set: &StepSet,
    h: f64,
    p: LebesgueExponent,
) -> Result<f64> {
    classical_modulus_spectrum(&analyze(f), r, set, h, p)
}

pub fn classical_modulus_spectrum(
    s: &Spectrum,
    r: u32,
    set: &StepSet,
    h: f64,
    p: LebesgueExponent,
) -> Result<f64> {
    check_step(h)?;
    if r == 0 {
        return domain("modulus order must be at least 1");
    }
    set.check_dim(s.dim())?;
    let eval = |m: usize| -> f64 {
        set.samples(s.dim(), m)
            .par_iter()
            .map(|u| {
                let step: Vec<f64> = u.iter().map(|v| v * h).collect();
                let d = s.map_symbol(|k| forward_symbol(r as f64, dot(k, &step)));
                spectrum_norm(&d, p)
            })
            .reduce(|| 0.0, f64::max)
    };
    let mut m = set.density;
    let mut value = eval(m);
    if set.refinable() {
        for _ in 0..4 {
            m = 2 * m - 1;
            let next = eval(m);
            let done = (next - value).abs() <= 0.005 * next.abs();
            value = value.max(next);
            if done {
                break;
            }
        }
    }
    Ok(value)
}

/// ψ_r(x) = ∫₀¹ (1 − e^{itx})^r dt, the symbol of the step-averaged difference.
pub fn psi_r(r: u32, x: f64) -> Complex64 {
    if x == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if x.abs() <= 4.0 * PI {
        let panels = (r as f64 * x.abs() / 4.0).ceil() as usize + 1;
        let gl = gl16();
        let w = 1.0 / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..panels {
            acc += gl.integrate_complex(j as f64 * w, (j + 1) as f64 * w, |t| {
                forward_symbol(r as f64, t * x)
            });
        }
        acc
    } else {
        let i = Complex64::new(0.0, 1.0);
        let mut acc = Complex64::new(1.0, 0.0);
        for nu in 1..=r {
            let sign = if nu % 2 == 0 { 1.0 } else { -1.0 };
            let z = nu as f64 * x;
            acc += sign * binomial(r as f64, nu as u64) * (Complex64::from_polar(1.0, z) - 1.0) / (i * z);
        }
        acc
    }
}

fn gl16() -> &'static GaussLegendre {
    static GL: OnceLock<GaussLegendre> = OnceLock::new();
    GL.get_or_init(|| GaussLegendre::new(16))
}

/// ω̃_r(f; h)_p = ‖(1/h)∫₀^h Δ^r_δ f dδ‖_p.
///
/// For d > 1 the maximum over the coordinate directions is returned.
pub fn linearized_modulus(f: &GridFunction, r: u32, h: f64, p: LebesgueExponent) -> Result<f64> {
    linearized_modulus_spectrum(&analyze(f), r, h, p)
}

pub fn linearized_modulus_spectrum(s: &Spectrum, r: u32, h: f64, p: LebesgueExponent) -> Result<f64> {
    let d = s.dim();
    let mut best: f64 = 0.0;
    for j in 0..d {
        let mut e = vec![0.0; d];
        e[j] = 1.0;
        best = best.max(linearized_modulus_along(s, r, h, &e, p)?);
    }
    Ok(best)
}

/// ω̃_r along a fixed direction e: symbol ψ_r(h(k, e)).
pub fn linearized_modulus_along(
    s: &Spectrum,
    r: u32,
    h: f64,
    direction: &[f64],
    p: LebesgueExponent,
) -> Result<f64> {
    check_step(h)?;
    if r == 0 {
        return domain("modulus order must be at least 1");
    }
    if direction.len() != s.dim() {
        return Err(Error::ShapeMismatch("direction has the wrong dimension".into()));
    }
    let out = s.map_symbol(|k| psi_r(r, h * dot(k, direction)));
    Ok(spectrum_norm(&out, p))
}

/// How the kernel weight |u|^{−q} on |u| ≥ 1 is integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelTail {
    /// Integrated to infinity with oscillatory tail expansions.
    Full,
    /// Cut at |u| = U; the discarded part is bounded and reported.
    Truncated(f64),
}

/// The measure μ in ‖∫ Δ̇^{2r}_{hu} f dμ(u)‖_p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    /// Lebesgue measure on the unit ball.
    BallIndicator,
    /// Sum of 1-d Lebesgue measures on the segments [−e_j, e_j].
    AxesSum,
    /// |u|^{−q} du on |u| ≥ 1. In d = 1 only u ≥ 1 is used.
    Kernel { exponent: f64, tail: KernelTail },
}

impl WeightSpec {
    pub fn kernel(exponent: f64) -> Self {
        Self::Kernel { exponent, tail: KernelTail::Full }
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        if let Self::Kernel { exponent, tail } = self {
            if !(*exponent > d as f64) {
                return domain(format!("kernel exponent q = {exponent} must exceed d = {d}"));
            }
            if let KernelTail::Truncated(u) = tail {
                if !(*u >= 8.0) {
                    return domain(format!("truncation radius U = {u} must be at least 8"));
                }
            }
        }
        Ok(())
    }

    /// μ({|u| > U}) for a truncated kernel, zero otherwise.
    pub fn tail_mass(&self, d: usize) -> f64 {
        match self {
            Self::Kernel { exponent: q, tail: KernelTail::Truncated(u) } => {
                sphere_area(d) * u.powf(d as f64 - q) / (q - d as f64)
            }
            _ => 0.0,
        }
    }
}

/// |S^{d−1}|, with the d = 1 convention of a single direction.
fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 1.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedModulus {
    pub value: f64,
    /// Bound on the part of the integral that was discarded.
    pub tail_bound: f64,
    /// Set when tail_bound exceeds 1e−6 of the value.
    pub flagged: bool,
}

/// Coefficients of sin^{2r}x = c₀ + Σ_{j=1}^r c_j cos(2jx).
pub fn sin_even_power_cosines(r: u32) -> (f64, Vec<f64>) {
    let scale = 4f64.powi(-(r as i32));
    let n = 2.0 * r as f64;
    let c0 = binomial(n, r as u64) * scale;
    let cs = (1..=r)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            2.0 * sign * binomial(n, (r - j) as u64) * scale
        })
        .collect();
    (c0, cs)
}

/// Coefficients of sin^{2n+1}x = Σ_{k=0}^n c_k sin((2k+1)x).
pub fn sin_odd_power_sines(n: u32) -> Vec<f64> {
    let scale = 4f64.powi(-(n as i32));
    (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(2.0 * n as f64 + 1.0, (n - k) as u64) * scale
        })
        .collect()
}

/// ∫_a^b u^{−p} du, b possibly infinite.
fn power_integral(p: f64, a: f64, b: f64) -> f64 {
    if p == 1.0 {
        (b / a).ln()
    } else if b.is_infinite() {
        a.powf(1.0 - p) / (p - 1.0)
    } else {
        (a.powf(1.0 - p) - b.powf(1.0 - p)) / (p - 1.0)
    }
}

/// ∫_a^b u^{−p} sin^m(βu) du for a > 0; b may be infinite.
pub fn sin_power_moment(m: u32, beta: f64, p: f64, a: f64, b: f64) -> f64 {
    let sign = if beta < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
    let beta = beta.abs();
    if beta == 0.0 {
        return 0.0;
    }
    let v = if m.is_multiple_of(2) {
        let (c0, cs) = sin_even_power_cosines(m / 2);
        let mut acc = c0 * power_integral(p, a, b);
        for (j, c) in cs.iter().enumerate() {
            acc += c * fourier_power(2.0 * (j + 1) as f64 * beta, p, a, b).re;
        }
        acc
    } else {
        let cs = sin_odd_power_sines(m / 2);
        cs.iter()
            .enumerate()
            .map(|(k, c)| c * fourier_power((2 * k + 1) as f64 * beta, p, a, b).im)
            .sum()
    };
    sign * v
}

/// ∫₀^∞ sin^m t / t^p dt, for p − 1 < m and p > 1 (or p > 0 when m is odd).
pub fn sin_power_integral(m: u32, p: f64) -> Result<f64> {
    if !(p - 1.0 < m as f64) || !(p > if m % 2 == 1 { 0.0 } else { 1.0 }) {
        return domain(format!("∫₀^∞ sin^{m} t / t^{p} dt diverges"));
    }
    let head = adaptive(|t| if t == 0.0 { 0.0 } else { t.sin().powi(m as i32) / t.powf(p) }, 0.0, 1.0, 1e-15, 1e-13);
    if !head.converged {
        return Err(Error::Numerical("quadrature near zero did not converge".into()));
    }
    Ok(head.value + sin_power_moment(m, 1.0, p, 1.0, f64::INFINITY))
}

/// ∫_{|u|≤1} cos(a(e, u)) du in dimension d.
fn ball_cosine(d: usize, a: f64) -> f64 {
    let a = a.abs();
    match d {
        1 => {
            if a < 1e-8 {
                2.0
            } else {
                2.0 * a.sin() / a
            }
        }
        2 => {
            if a < 1e-8 {
                PI
            } else {
                2.0 * PI * bessel_j1(a) / a
            }
        }
        _ => {
            if a < 1e-2 {
                let a2 = a * a;
                4.0 * PI / 3.0 * (1.0 - a2 / 10.0 + a2 * a2 / 280.0)
            } else {
                4.0 * PI * (a.sin() - a * a.cos()) / (a * a * a)
            }
        }
    }
}

/// ∫_{1≤|u|≤U} |u|^{−q} cos(a(e, u)) du (one-sided in d = 1).
fn kernel_cosine(d: usize, q: f64, a: f64, upper: f64) -> f64 {
    let a = a.abs();
    let area = sphere_area(d);
    if a == 0.0 {
        return area * power_integral(q - d as f64 + 1.0, 1.0, upper);
    }
    match d {
        1 => fourier_power(a, q, 1.0, upper).re,
        2 => {
            let mut v = bessel_j0_power(a, q - 1.0, 1.0);
            if upper.is_finite() {
                v -= bessel_j0_power(a, q - 1.0, upper);
            }
            area * v
        }
        _ => area / a * fourier_power(a, q - 1.0, 1.0, upper).im,
    }
}

/// ∫ sin^{2r}((β, u)) dμ(u).
pub fn weight_sin_integral(weight: &WeightSpec, r: u32, beta: &[f64]) -> Result<f64> {
    let d = beta.len();
    weight.validate(d)?;
    let (c0, cs) = sin_even_power_cosines(r);
    let radial = |g: &dyn Fn(f64) -> f64, b: f64| -> f64 {
        c0 * g(0.0) + cs.iter().enumerate().map(|(j, c)| c * g(2.0 * (j + 1) as f64 * b)).sum::<f64>()
    };
    let norm = beta.iter().map(|v| v * v).sum::<f64>().sqrt();
    let v = match weight {
        WeightSpec::BallIndicator => radial(&|a| ball_cosine(d, a), norm),
        WeightSpec::AxesSum => beta.iter().map(|b| radial(&|a| ball_cosine(1, a), *b)).sum(),
        WeightSpec::Kernel { exponent, tail } => {
            let upper = match tail {
                KernelTail::Full => f64::INFINITY,
                KernelTail::Truncated(u) => *u,
            };
            radial(&|a| kernel_cosine(d, *exponent, a, upper), norm)
        }
    };
    Ok(v)
}

/// ‖∫ Δ̇^{2r}_{hu} f dμ(u)‖_p with symbol (−4)^r ∫ sin^{2r}(h(k, u)) dμ(u).
pub fn weighted_modulus(
    f: &GridFunction,
    r: u32,
    weight: &WeightSpec,
    h: f64,
    p: LebesgueExponent,
) -> Result<WeightedModulus> {
    weighted_modulus_spectrum(&analyze(f), r, weight, h, p)
}

pub fn weighted_modulus_spectrum(
    s: &Spectrum,
    r: u32,
    weight: &WeightSpec,
    h: f64,
    p: LebesgueExponent,
) -> Result<WeightedModulus> {
    check_step(h)?;
    if r == 0 {
        return domain("modulus order must be at least 1");
    }
    weight.validate(s.dim())?;
    let sign = (-4.0f64).powi(r as i32);
    let out = s.try_map_symbol(|k| {
        let beta: Vec<f64> = k.iter().map(|v| h * v).collect();
        Ok(Complex64::new(sign * weight_sin_integral(weight, r, &beta)?, 0.0))
    })?;
    let value = spectrum_norm(&out, p);
    let tail_bound = weight.tail_mass(s.dim()) * 4f64.powi(r as i32) * spectrum_norm(s, p);
    Ok(WeightedModulus { value, tail_bound, flagged: tail_bound > 1e-6 * value })
}

/// λ₁(x) = ψ₁(x)/ψ₂(x) = 2(ix + 1 − e^{ix}) / (2ix + 3 − 4e^{ix} + e^{2ix}).
pub fn lambda1(x: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let e = Complex64::from_polar(1.0, x);
    2.0 * (i * x + 1.0 - e) / (2.0 * i * x + 3.0 - 4.0 * e + e * e)
}

/// Symbol of the anchored product ψ_{r₀}(y)·Π_{j≥1}(ψ₁(y) − λ₁(x_j)ψ₂(y))^{r_j}.
pub fn composite_symbol(anchors: &[(f64, u32)], y: f64) -> Complex64 {
    let mut acc = if anchors[0].1 == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        psi_r(anchors[0].1, y)
    };
    if anchors.len() > 1 {
        let (p1, p2) = (psi_r(1, y), psi_r(2, y));
        for &(x, m) in &anchors[1..] {
            acc *= (p1 - lambda1(x) * p2).powu(m);
        }
    }
    acc
}

fn validate_anchors(anchors: &[(f64, u32)]) -> Result<()> {
    match anchors.first() {
        Some((x, _)) if *x == 0.0 => {}
        _ => return domain("the first anchor must be x₀ = 0"),
    }
    for (j, &(x, _)) in anchors.iter().enumerate() {
        if !(x.abs() < PI) {
            return domain(format!("anchor {x} is outside (−π, π)"));
        }
        if j > 0 && x == 0.0 {
            return domain("only the first anchor may be 0");
        }
        if anchors[..j].iter().any(|&(y, _)| y == x) {
            return domain(format!("duplicate anchor {x}"));
        }
    }
    Ok(())
}

/// Product of step-averaged differences anchored at the points x_j (d = 1).
pub fn composite_difference(f: &GridFunction, anchors: &[(f64, u32)], h: f64) -> Result<GridFunction> {
    Ok(synthesize(&composite_difference_spectrum(&analyze(f), anchors, h)?))
}

pub fn composite_difference_spectrum(s: &Spectrum, anchors: &[(f64, u32)], h: f64) -> Result<Spectrum> {
    check_step(h)?;
    validate_anchors(anchors)?;
    if s.dim() != 1 {
        return domain("composite differences are defined for d = 1");
    }
    Ok(s.map_symbol(|k| composite_symbol(anchors, h * k[0])))
}

/// Signed weights (−1)^ν C(r, ν) of a fractional difference.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalWeights {
    /// Leading weights, at most `MAX_STORED_WEIGHTS` of them.
    pub weights: Vec<f64>,
    /// Number of weights kept before |C(r, ν)| dropped below the tolerance.
    pub count: usize,
    /// Σ|C(r, ν)| with an estimate of the discarded tail added.
    pub abs_sum: f64,
    /// Σ(−1)^ν C(r, ν) with the same tail estimate.
    pub signed_sum: f64,
    pub tail_estimate: f64,
}

pub const MAX_STORED_WEIGHTS: usize = 1 << 20;

/// Weights of Δ^r for real r > 0, kept while |C(r, ν)| ≥ tol.
///
/// The tail Σ_{ν>K}|C(r, ν)| is estimated from |C(r, ν)| ~ c·ν^{−r−1} as
/// |C(r, K)|(K/r − 1/2), K the last kept index.
pub fn fractional_binomial_weights(r: f64, tol: f64) -> Result<FractionalWeights> {
    if !(r > 0.0 && r.is_finite()) || !(tol > 0.0) {
        return domain("fractional weights need r > 0 and tol > 0");
    }
    let integer = r.fract() == 0.0;
    let mut weights = Vec::new();
    let (mut abs_sum, mut signed_sum) = (0.0, 0.0);
    let mut c = 1.0f64;
    let mut nu = 0usize;
    let mut last = 0.0;
    loop {
        if c == 0.0 || (!integer && c.abs() < tol) {
            break;
        }
        let w = if nu.is_multiple_of(2) { c } else { -c };
        if weights.len() < MAX_STORED_WEIGHTS {
            weights.push(w);
        }
        abs_sum += c.abs();
        signed_sum += w;
        last = c.abs();
        c *= (r - nu as f64) / (nu + 1) as f64;
        nu += 1;
    }
    let count = nu;
    let tail_estimate = if integer || count < 2 {
        0.0
    } else {
        let k = (count - 1) as f64;
        (last * (k / r - 0.5)).max(0.0)
    };
    let tail_sign = if (r.floor() as i64 + 1) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(FractionalWeights {
        weights,
        count,
        abs_sum: abs_sum + tail_estimate,
        signed_sum: signed_sum + tail_sign * tail_estimate,
        tail_estimate,
    })
}

/// Default q = ⌈r/2⌉ + 1 for the fractional linearized modulus.
pub fn default_fractional_q(r: f64) -> u32 {
    (r / 2.0).ceil() as u32 + 1
}

/// γ₀ = ½ tan(rπ/2) · ∫₀^∞ sin^{2q}t/t^{r+1}dt / ∫₀^∞ sin^{2q+1}t/t^{r+1}dt.
pub fn gamma0(r: f64, q: u32) -> Result<f64> {
    check_fractional(r, q)?;
    let even = sin_power_integral(2 * q, r + 1.0)?;
    let odd = sin_power_integral(2 * q + 1, r + 1.0)?;
    Ok(0.5 * (r * PI / 2.0).tan() * even / odd)
}

fn check_fractional(r: f64, q: u32) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) || r.fract() == 0.0 {
        return domain(format!("fractional modulus needs a non-integer r > 0 (got {r})"));
    }
    if !((q as f64) > r / 2.0) {
        return domain(format!("q = {q} must exceed r/2"));
    }
    Ok(())
}

/// ‖∫₁^∞ u^{−r−1}(Δ̇^{2q}_{hu} f + γ₀Δ̇^{2q+1}_{hu} f) du‖_p for non-integer r.
pub fn fractional_linearized_modulus(
    f: &GridFunction,
    r: f64,
    h: f64,
    p: LebesgueExponent,
    q: Option<u32>,
) -> Result<f64> {
    fractional_linearized_modulus_spectrum(&analyze(f), r, h, p, q)
}

pub fn fractional_linearized_modulus_spectrum(
    s: &Spectrum,
    r: f64,
    h: f64,
    p: LebesgueExponent,
    q: Option<u32>,
) -> Result<f64> {
    check_step(h)?;
    if s.dim() != 1 {
        return domain("the fractional linearized modulus is defined for d = 1");
    }
    let q = q.unwrap_or_else(|| default_fractional_q(r));
    let g0 = gamma0(r, q)?;
    let scale = (-4.0f64).powi(q as i32);
    let out = s.map_symbol(|k| {
        let b = h * k[0];
        let even = sin_power_moment(2 * q, b, r + 1.0, 1.0, f64::INFINITY);
        let odd = sin_power_moment(2 * q + 1, b, r + 1.0, 1.0, f64::INFINITY);
        scale * (Complex64::new(even, 0.0) + g0 * Complex64::new(0.0, -2.0) * odd)
    });
    Ok(spectrum_norm(&out, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::lp_norm;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cosine(n: usize) -> GridFunction {
        GridFunction::from_real_fn(1, n, |x| x[0].cos()).unwrap()
    }

    fn harmonic(n: usize, k: f64) -> GridFunction {
        GridFunction::from_fn(1, n, |x| Complex64::from_polar(1.0, k * x[0])).unwrap()
    }

    #[test]
    fn differences_of_cosine() {
        let f = cosine(64);
        let d = difference(&f, &DifferenceSpec::forward(1.0, vec![PI]).unwrap()).unwrap();
        assert!(d.max_abs_diff(&f.scale(c(2.0, 0.0))).unwrap() < 1e-13);
        let d = difference(&f, &DifferenceSpec::symmetric(1, vec![PI / 2.0]).unwrap()).unwrap();
        assert!(d.max_abs_diff(&f.scale(c(-4.0, 0.0))).unwrap() < 1e-13);
        let one = GridFunction::constant(1, 32, c(3.0, 0.0)).unwrap();
        let d = difference(&one, &DifferenceSpec::forward(2.5, vec![0.3]).unwrap()).unwrap();
        assert!(lp_norm(&d, LebesgueExponent::INF) < 1e-14);
    }

    #[test]
    fn difference_spec_errors() {
        assert!(DifferenceSpec::forward(0.0, vec![1.0]).is_err());
        let bad = DifferenceSpec { order: 1.5, style: DifferenceStyle::Symmetric, step: vec![1.0] };
        assert!(bad.validate().is_err());
        let f = cosine(16);
        let two_d = DifferenceSpec::forward(1.0, vec![1.0, 0.0]).unwrap();
        assert!(difference(&f, &two_d).is_err());
    }

    #[test]
    fn fractional_symbol_matches_series() {
        // (1 − z)^r = Σ (−1)^ν C(r,ν) z^ν for |z| < 1, pushed to |z| → 1.
        for &t in &[0.3, -1.2, 2.9] {
            let z = Complex64::from_polar(0.999_999, t);
            let mut acc = c(0.0, 0.0);
            let mut zn = c(1.0, 0.0);
            let mut cf = 1.0;
            for nu in 0..400_000 {
                let w = if nu % 2 == 0 { cf } else { -cf };
                acc += w * zn;
                cf *= (0.5 - nu as f64) / (nu + 1) as f64;
                zn *= z;
            }
            assert!((acc - forward_symbol(0.5, t)).norm() < 2e-3, "{t}");
        }
        assert_eq!(forward_symbol(0.5, 2.0 * PI), c(0.0, 0.0));
    }

    #[test]
    fn classical_examples() {
        let set = StepSet::new(StepRegion::Segment(vec![1.0]), 256).unwrap();
        let w = classical_modulus(&cosine(128), 1, &set, PI, LebesgueExponent::INF).unwrap();
        assert!((w - 2.0).abs() < 1e-6, "{w}");
        for h in [0.1, 0.5, 1.0] {
            let w = classical_modulus(&harmonic(64, 1.0), 2, &StepSet::unit_segment(), h, LebesgueExponent::TWO)
                .unwrap();
            assert!((w - 4.0 * (h / 2.0).sin().powi(2)).abs() < 1e-8);
        }
        let one = GridFunction::constant(2, 16, c(1.0, 0.0)).unwrap();
        let w = classical_modulus(&one, 3, &StepSet::ball(16).unwrap(), 0.5, LebesgueExponent::ONE).unwrap();
        assert_eq!(w, 0.0);
        assert!(classical_modulus(&cosine(16), 1, &StepSet::unit_segment(), 0.0, LebesgueExponent::ONE).is_err());
    }

    #[test]
    fn step_sets() {
        assert!(StepSet::new(StepRegion::Ball, 8).is_err());
        assert!(StepSet::new(StepRegion::Points(vec![vec![2.0]]), 16).is_err());
        let s = StepSet::new(StepRegion::Square, 16).unwrap();
        for u in s.samples(2, 16) {
            assert!(u.iter().map(|v| v * v).sum::<f64>() <= 1.0 + 1e-12);
        }
        let b = StepSet::ball(64).unwrap().samples(3, 64);
        assert!(b.iter().all(|u| u.iter().map(|v| v * v).sum::<f64>() <= 1.0 + 1e-12));
        let a = log_uniform(9);
        let b = log_uniform(17);
        assert!(a.iter().all(|t| b.iter().any(|s| (s - t).abs() < 1e-15)));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_r(3, 0.0), c(0.0, 0.0));
        assert!((psi_r(1, PI) - c(1.0, -2.0 / PI)).norm() < 1e-14);
        // both branches agree at the switch point
        for r in 1..=6 {
            let x = 4.0 * PI;
            let i = Complex64::new(0.0, 1.0);
            let mut closed = c(1.0, 0.0);
            for nu in 1..=r {
                let s = if nu % 2 == 0 { 1.0 } else { -1.0 };
                let z = nu as f64 * x;
                closed += s * binomial(r as f64, nu as u64) * (Complex64::from_polar(1.0, z) - 1.0) / (i * z);
            }
            assert!((psi_r(r, x) - closed).norm() < 1e-13);
        }
        // small argument: ψ_r(x) ≈ (−ix)^r/(r+1)
        let x = 1e-6;
        let v = psi_r(2, x);
        assert!((v / c(-x * x / 3.0, 0.0) - 1.0).norm() < 1e-5);
        let w = linearized_modulus(&harmonic(32, 1.0), 1, PI, LebesgueExponent::TWO).unwrap();
        assert!((w - 1.185_447_6).abs() < 1e-6);
        assert!((w - (1.0 + 4.0 / (PI * PI)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn weighted_kernel_one_dimensional() {
        let io = adaptive(|u| if u == 0.0 { 1.0 } else { (u.sin() / u).powi(2) }, 0.0, 1.0, 1e-15, 1e-14).value;
        let full = 4.0 * (PI / 2.0 - io);
        let f = harmonic(32, 1.0);
        let w = weighted_modulus(&f, 1, &WeightSpec::kernel(2.0), 1.0, LebesgueExponent::TWO).unwrap();
        assert!((w.value - full).abs() < 1e-9, "{} vs {full}", w.value);
        assert_eq!(w.tail_bound, 0.0);
        assert!(!w.flagged);
        let trunc = WeightSpec::Kernel { exponent: 2.0, tail: KernelTail::Truncated(64.0) };
        let w = weighted_modulus(&f, 1, &trunc, 1.0, LebesgueExponent::TWO).unwrap();
        let far = 64.0 * 200.0;
        let tail = 4.0 * (adaptive(|u| (u.sin() / u).powi(2), 64.0, far, 1e-14, 1e-12).value + 0.5 / far);
        assert!((w.value - (full - tail)).abs() < 1e-6, "{} vs {}", w.value, full - tail);
        assert!((w.tail_bound - 4.0 / 64.0).abs() < 1e-15);
        assert!(w.flagged);
        let bad = WeightSpec::Kernel { exponent: 1.0, tail: KernelTail::Full };
        assert!(weighted_modulus(&f, 1, &bad, 1.0, LebesgueExponent::TWO).is_err());
    }

    #[test]
    fn weighted_ball_two_dimensional() {
        let f = GridFunction::from_fn(2, 16, |x| Complex64::from_polar(1.0, x[0])).unwrap();
        let h = 0.7;
        let w = weighted_modulus(&f, 1, &WeightSpec::BallIndicator, h, LebesgueExponent::TWO).unwrap();
        // tensor Gauss–Legendre over the disk in polar coordinates
        let gl = GaussLegendre::new(40);
        let mut acc = 0.0;
        for j in 0..8 {
            let (a, b) = (j as f64 * PI / 4.0, (j + 1) as f64 * PI / 4.0);
            acc += gl.integrate(a, b, |th| {
                gl.integrate(0.0, 1.0, |rho| rho * 4.0 * (h * rho * th.cos()).sin().powi(2))
            });
        }
        assert!((w.value - acc).abs() < 1e-10, "{} vs {acc}", w.value);
        let one = GridFunction::constant(2, 16, c(1.0, 0.0)).unwrap();
        for wt in [WeightSpec::BallIndicator, WeightSpec::AxesSum, WeightSpec::kernel(3.0)] {
            let v = weighted_modulus(&one, 2, &wt, 0.3, LebesgueExponent::INF).unwrap();
            assert_eq!(v.value, 0.0);
        }
    }

    #[test]
    fn kernel_two_and_three_dimensional_against_quadrature() {
        // d = 2: 2π∫₁^∞ρ^{1−q}·(1/2π)∫ sin²(bρ cos θ)dθ dρ with q = 4
        let (q, b) = (4.0, 0.9);
        let got = weight_sin_integral(&WeightSpec::kernel(q), 1, &[b, 0.0]).unwrap();
        let gl = GaussLegendre::new(40);
        let inner = |rho: f64| {
            let mut a = 0.0;
            for j in 0..8 {
                let (lo, hi) = (j as f64 * PI / 4.0, (j + 1) as f64 * PI / 4.0);
                a += gl.integrate(lo, hi, |th| (b * rho * th.cos()).sin().powi(2));
            }
            a * rho.powf(1.0 - q)
        };
        let want = adaptive(inner, 1.0, 400.0, 1e-12, 1e-11).value
            + 2.0 * PI * 0.5 * 400f64.powf(2.0 - q) / (q - 2.0);
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        // d = 3 with the closed angular average 2π∫(1 − cos(2bρt))/2 dt
        let q = 5.0;
        let got = weight_sin_integral(&WeightSpec::kernel(q), 1, &[0.0, b, 0.0]).unwrap();
        let inner = |rho: f64| {
            let a = 2.0 * b * rho;
            4.0 * PI * 0.5 * (1.0 - a.sin() / a) * rho.powf(2.0 - q)
        };
        let want = adaptive(inner, 1.0, 1e4, 1e-13, 1e-12).value + 4.0 * PI * 0.5 * 1e4f64.powf(3.0 - q) / (q - 3.0);
        assert!((got - want).abs() < 1e-7, "{got} vs {want}");
    }

    #[test]
    fn lambda1_examples() {
        let x = PI / 2.0;
        let e = Complex64::from_polar(1.0, x);
        let den = 2.0 * c(0.0, x) + 3.0 - 4.0 * e + e * e;
        assert!((den.re - 2.0 * (1.0 - x.cos()).powi(2)).abs() < 1e-14);
        assert!((den.re - 2.0).abs() < 1e-14);
        let want = c(2.0, PI - 2.0) / c(2.0, PI - 4.0);
        assert!((lambda1(x) - want).norm() < 1e-14);
        for x in [0.4, 1.7, -2.5] {
            assert!((lambda1(x) - psi_r(1, x) / psi_r(2, x)).norm() < 1e-12);
            assert!(composite_symbol(&[(0.0, 1), (x, 1)], x).norm() < 1e-14);
        }
    }

    #[test]
    fn composite_difference_checks() {
        let one = GridFunction::constant(1, 32, c(1.0, 0.0)).unwrap();
        let d = composite_difference(&one, &[(0.0, 1), (1.0, 1)], 0.1).unwrap();
        assert!(lp_norm(&d, LebesgueExponent::INF) < 1e-14);
        assert!(composite_difference(&one, &[(0.0, 1), (1.0, 1), (1.0, 2)], 0.1).is_err());
        assert!(composite_difference(&one, &[(0.0, 1), (0.0, 1)], 0.1).is_err());
        assert!(composite_difference(&one, &[(0.5, 1)], 0.1).is_err());
        // the harmonic with hk = x₁ is annihilated
        let f = harmonic(64, 5.0);
        let d = composite_difference(&f, &[(0.0, 1), (1.0, 1)], 0.2).unwrap();
        assert!(lp_norm(&d, LebesgueExponent::INF) < 1e-13);
    }

    #[test]
    fn fractional_weights() {
        let w = fractional_binomial_weights(3.0, 1e-12).unwrap();
        assert_eq!(w.weights, vec![1.0, -3.0, 3.0, -1.0]);
        assert_eq!(w.signed_sum, 0.0);
        let w = fractional_binomial_weights(0.5, 1e-12).unwrap();
        assert!((w.abs_sum - 2.0).abs() < 1e-6, "{}", w.abs_sum);
        assert!(w.signed_sum.abs() < 1e-12 * w.count as f64, "{}", w.signed_sum);
        let w = fractional_binomial_weights(1.5, 1e-12).unwrap();
        // Σ|C(r,ν)| = Σ_{ν≤[r]} C(r,ν)(1 + (−1)^{[r]+ν})
        let want = 2.0 * binomial(1.5, 1);
        assert!((w.abs_sum - want).abs() < 1e-6);
        assert!(w.signed_sum.abs() < 1e-12 * w.count as f64);
    }

    #[test]
    fn sin_power_integrals() {
        assert!((sin_power_integral(1, 1.0).unwrap() - PI / 2.0).abs() < 1e-10);
        assert!((sin_power_integral(2, 2.0).unwrap() - PI / 2.0).abs() < 1e-10);
        assert!((sin_power_integral(4, 2.0).unwrap() - PI / 4.0).abs() < 1e-10);
        assert!((sin_power_integral(4, 3.0).unwrap() - 2f64.ln()).abs() < 1e-10);
        assert!(sin_power_integral(2, 3.5).is_err());
    }

    #[test]
    fn fractional_linearized_modulus_checks() {
        let one = GridFunction::constant(1, 32, c(1.0, 0.0)).unwrap();
        let v = fractional_linearized_modulus(&one, 0.5, 0.2, LebesgueExponent::INF, None).unwrap();
        assert_eq!(v, 0.0);
        assert!(fractional_linearized_modulus(&one, 2.0, 0.2, LebesgueExponent::INF, None).is_err());
        assert!(gamma0(1.5, 0).is_err());
        // single harmonic: |symbol| equals the direct 1-d quadrature
        let (r, h) = (0.5, 0.3);
        let q = default_fractional_q(r);
        let g0 = gamma0(r, q).unwrap();
        let f = harmonic(32, 3.0);
        let got = fractional_linearized_modulus(&f, r, h, LebesgueExponent::TWO, Some(q)).unwrap();
        let b = 3.0 * h;
        let integrand = |u: f64| -> Complex64 {
            let s = (-2.0 * Complex64::i() * (b * u).sin()).powu(2 * q);
            (s + g0 * s * (-2.0 * Complex64::i() * (b * u).sin())) * u.powf(-r - 1.0)
        };
        let head = crate::quad::panel_integrate(integrand, 1.0, 4000.0, 0.5, 0.05);
        let (c0, _) = sin_even_power_cosines(q);
        let tail = (-4.0f64).powi(q as i32) * c0 * 4000f64.powf(-r) / r;
        let want = (head + tail).norm();
        assert!((got - want).abs() < 5e-3 * want, "{got} vs {want}");
    }
}
