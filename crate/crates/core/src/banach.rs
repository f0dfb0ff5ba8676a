//! Moduli of smoothness for bounded maps between finite-dimensional normed spaces.
//!
//! Suprema over (x, δ) are taken on a quasi-random sample cloud. Inequality
//! checks evaluate their right-hand sides on the cloud closed under the
//! translates the underlying identity needs, so a sampled check can only fail
//! through rounding.

use crate::error::{domain, Error, Result};
use crate::moduli::fractional_binomial_weights;
use crate::quad::{binomial, gl20, primes, radical_inverse};
use crate::spectral::Spectrum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

pub type Vector = Vec<f64>;
type NormFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type ProductFn = dyn Fn(&[f64], &[f64]) -> Vector + Send + Sync;
type MapFn = dyn Fn(&[f64]) -> Vector + Send + Sync;

/// Slack used by every inequality check, relative to 1 + |rhs|.
pub const CHECK_TOLERANCE: f64 = 1e-9;

/// ℝ^n with a user norm and optionally a multiplication.
///
/// Callbacks must be pure; they are called from several threads.
#[derive(Clone)]
pub struct NormedSpace {
    name: String,
    dimension: usize,
    norm: Arc<NormFn>,
    product: Option<Arc<ProductFn>>,
}

impl fmt::Debug for NormedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormedSpace")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("algebra", &self.product.is_some())
            .finish()
    }
}

impl NormedSpace {
    pub fn new<N>(name: impl Into<String>, dimension: usize, norm: N) -> Result<Self>
    where
        N: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if dimension == 0 {
            return domain("normed space needs dimension ≥ 1");
        }
        Ok(Self { name: name.into(), dimension, norm: Arc::new(norm), product: None })
    }

    /// Attaches a multiplication; |ab| ≤ |a||b| is the caller's promise.
    pub fn with_product<P>(mut self, product: P) -> Self
    where
        P: Fn(&[f64], &[f64]) -> Vector + Send + Sync + 'static,
    {
        self.product = Some(Arc::new(product));
        self
    }

    /// ℓ_p on ℝ^n, p ∈ [1, ∞].
    pub fn lp(dimension: usize, p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return domain(format!("ℓ_p needs p ≥ 1 (got {p})"));
        }
        let norm = move |v: &[f64]| -> f64 {
            if p.is_infinite() {
                v.iter().fold(0.0, |m, x| m.max(x.abs()))
            } else if p == 1.0 {
                v.iter().map(|x| x.abs()).sum()
            } else if p == 2.0 {
                v.iter().map(|x| x * x).sum::<f64>().sqrt()
            } else {
                v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
            }
        };
        Self::new(format!("l{p}^{dimension}"), dimension, norm)
    }

    /// ℝ with |·| and the usual product.
    pub fn real() -> Self {
        Self::new("R", 1, |v: &[f64]| v[0].abs())
            .expect("dimension 1")
            .with_product(|a: &[f64], b: &[f64]| vec![a[0] * b[0]])
    }

    /// ℂ as ℝ² with the modulus and complex multiplication.
    pub fn complex() -> Self {
        Self::new("C", 2, |v: &[f64]| v[0].hypot(v[1]))
            .expect("dimension 2")
            .with_product(|a: &[f64], b: &[f64]| vec![a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]])
    }

    /// n×n matrices, row-major, Frobenius norm and matrix product.
    pub fn matrices(n: usize) -> Result<Self> {
        let space = Self::new(format!("M{n}"), n * n, |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt())?;
        Ok(space.with_product(move |a: &[f64], b: &[f64]| {
            let mut c = vec![0.0; n * n];
            for i in 0..n {
                for k in 0..n {
                    let aik = a[i * n + k];
                    for j in 0..n {
                        c[i * n + j] += aik * b[k * n + j];
                    }
                }
            }
            c
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_algebra(&self) -> bool {
        self.product.is_some()
    }

    pub fn norm(&self, v: &[f64]) -> f64 {
        (self.norm)(v)
    }

    pub fn product(&self, a: &[f64], b: &[f64]) -> Result<Vector> {
        match &self.product {
            Some(p) => Ok(p(a, b)),
            None => domain(format!("space {} has no multiplication", self.name)),
        }
    }

    /// Spot-checks the norm axioms on random triples to 1e−10.
    pub fn spot_check(&self, trials: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| -> Vector { (0..self.dimension).map(|_| rng.gen_range(-2.0..2.0)).collect() };
        let fail = |what: &str| Err(Error::Domain(format!("norm of {} fails {what}", self.name)));
        if self.norm(&vec![0.0; self.dimension]) != 0.0 {
            return fail("|0| = 0");
        }
        for _ in 0..trials {
            let (x, y) = (draw(&mut rng), draw(&mut rng));
            let lambda: f64 = rng.gen_range(-3.0..3.0);
            let (nx, ny) = (self.norm(&x), self.norm(&y));
            if !(nx > 0.0) || !nx.is_finite() {
                return fail("positivity");
            }
            let scaled: Vector = x.iter().map(|v| lambda * v).collect();
            if (self.norm(&scaled) - lambda.abs() * nx).abs() > 1e-10 * (1.0 + lambda.abs() * nx) {
                return fail("homogeneity");
            }
            let sum: Vector = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            if self.norm(&sum) > nx + ny + 1e-10 * (1.0 + nx + ny) {
                return fail("the triangle inequality");
            }
        }
        Ok(())
    }
}

/// A map E₁ → E₂, sampled on the ball of E₁ with the given radius.
#[derive(Clone)]
pub struct AbstractFunction {
    domain: NormedSpace,
    codomain: NormedSpace,
    radius: f64,
    map: Arc<MapFn>,
}

impl fmt::Debug for AbstractFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AbstractFunction")
            .field("domain", &self.domain)
            .field("codomain", &self.codomain)
            .field("radius", &self.radius)
            .finish()
    }
}

impl AbstractFunction {
    pub fn new<M>(domain: NormedSpace, codomain: NormedSpace, radius: f64, map: M) -> Result<Self>
    where
        M: Fn(&[f64]) -> Vector + Send + Sync + 'static,
    {
        if !(radius > 0.0 && radius.is_finite()) {
            return domain_err("sample radius must be positive and finite");
        }
        Ok(Self { domain, codomain, radius, map: Arc::new(map) })
    }

    /// ℝ → ℝ from a scalar closure.
    pub fn scalar<F>(radius: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(NormedSpace::real(), NormedSpace::real(), radius, move |x: &[f64]| vec![f(x[0])])
    }

    pub fn constant(domain: NormedSpace, codomain: NormedSpace, radius: f64, value: Vector) -> Result<Self> {
        if value.len() != codomain.dimension() {
            return Err(Error::ShapeMismatch(format!(
                "constant has {} components, codomain has dimension {}",
                value.len(),
                codomain.dimension()
            )));
        }
        Self::new(domain, codomain, radius, move |_: &[f64]| value.clone())
    }

    pub fn domain(&self) -> &NormedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &NormedSpace {
        &self.codomain
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn eval(&self, x: &[f64]) -> Vector {
        (self.map)(x)
    }

    /// Pointwise product fg in the algebra E₂.
    pub fn product(&self, other: &AbstractFunction) -> Result<AbstractFunction> {
        if !self.codomain.is_algebra() {
            return domain(format!("space {} has no multiplication", self.codomain.name()));
        }
        if self.domain.dimension() != other.domain.dimension() || self.codomain.dimension() != other.codomain.dimension() {
            return Err(Error::ShapeMismatch("product of maps between different spaces".into()));
        }
        let (f, g, space) = (self.map.clone(), other.map.clone(), self.codomain.clone());
        Self::new(self.domain.clone(), self.codomain.clone(), self.radius.min(other.radius), move |x: &[f64]| {
            space.product(&f(x), &g(x)).expect("algebra checked")
        })
    }

    fn value_norm(&self, x: &[f64]) -> f64 {
        self.codomain.norm(&self.eval(x))
    }
}

fn domain_err<T>(msg: &str) -> Result<T> {
    domain(msg.to_string())
}

/// A point x and a step δ of E₁.
#[derive(Debug, Clone, PartialEq)]
pub struct Pair {
    pub point: Vector,
    pub step: Vector,
}

impl Pair {
    fn shifted(&self, times: f64) -> Vector {
        self.point.iter().zip(&self.step).map(|(x, d)| x + times * d).collect()
    }

    fn scaled_step(&self, factor: f64) -> Pair {
        Pair { point: self.point.clone(), step: self.step.iter().map(|d| d * factor).collect() }
    }
}

/// Shifted Halton pairs: x in the ball of radius R, δ with |δ| ≤ h.
///
/// Even-indexed steps lie on the sphere |δ| = h. The first k pairs of a
/// larger cloud coincide with a smaller cloud of the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleCloud {
    pub count: usize,
    pub seed: u64,
}

impl Default for SampleCloud {
    fn default() -> Self {
        Self { count: Self::DEFAULT_COUNT, seed: 0 }
    }
}

impl SampleCloud {
    pub const DEFAULT_COUNT: usize = 1 << 14;

    pub fn new(count: usize, seed: u64) -> Self {
        Self { count: count.max(1), seed }
    }

    pub fn doubled(&self) -> Self {
        Self { count: self.count * 2, seed: self.seed }
    }

    pub fn pairs(&self, space: &NormedSpace, radius: f64, h: f64) -> Vec<Pair> {
        let d = space.dimension();
        let bases = primes(2 * d + 2);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let shift: Vec<f64> = (0..bases.len()).map(|_| rng.gen::<f64>()).collect();
        let direction = |u: &[f64]| -> Vector {
            let v: Vector = u.iter().map(|t| 2.0 * t - 1.0).collect();
            let n = space.norm(&v);
            if n > 0.0 {
                v.iter().map(|x| x / n).collect()
            } else {
                let mut e = vec![0.0; d];
                e[0] = 1.0 / space.norm(&{
                    let mut e1 = vec![0.0; d];
                    e1[0] = 1.0;
                    e1
                });
                e
            }
        };
        (0..self.count)
            .map(|i| {
                let u: Vec<f64> = bases
                    .iter()
                    .zip(&shift)
                    .map(|(b, s)| (radical_inverse(i as u64 + 1, *b) + s).fract())
                    .collect();
                let x_dir = direction(&u[..d]);
                let x_rad = radius * u[d].powf(1.0 / d as f64);
                let s_dir = direction(&u[d + 1..2 * d + 1]);
                let s_rad = if i % 2 == 0 { h } else { h * u[2 * d + 1].powf(1.0 / d as f64) };
                Pair {
                    point: x_dir.iter().map(|v| v * x_rad).collect(),
                    step: s_dir.iter().map(|v| v * s_rad).collect(),
                }
            })
            .collect()
    }
}

/// Δ^r_δ f(x) = Σ_ν (−1)^ν C(r, ν) f(x + νδ).
pub fn abstract_difference(f: &AbstractFunction, x: &[f64], delta: &[f64], r: u32) -> Vector {
    let mut acc = vec![0.0; f.codomain.dimension()];
    for nu in 0..=r {
        let c = binomial(r as f64, nu as u64) * if nu % 2 == 0 { 1.0 } else { -1.0 };
        let y: Vector = x.iter().zip(delta).map(|(a, d)| a + nu as f64 * d).collect();
        for (a, v) in acc.iter_mut().zip(f.eval(&y)) {
            *a += c * v;
        }
    }
    acc
}

/// Δ^r_δ f(x) for real r > 0, truncated where |C(r, ν)| < tol.
pub fn fractional_abstract_difference(f: &AbstractFunction, x: &[f64], delta: &[f64], r: f64, tol: f64) -> Result<Vector> {
    let w = fractional_binomial_weights(r, tol)?;
    let mut acc = vec![0.0; f.codomain.dimension()];
    for (nu, c) in w.weights.iter().enumerate() {
        let y: Vector = x.iter().zip(delta).map(|(a, d)| a + nu as f64 * d).collect();
        for (a, v) in acc.iter_mut().zip(f.eval(&y)) {
            *a += c * v;
        }
    }
    Ok(acc)
}

fn difference_norm(f: &AbstractFunction, point: &[f64], step: &[f64], r: u32) -> f64 {
    f.codomain.norm(&abstract_difference(f, point, step, r))
}

/// max |Δ^r_δ f(x)|₂ over explicit pairs.
pub fn sampled_modulus(f: &AbstractFunction, r: u32, pairs: &[Pair]) -> f64 {
    pairs
        .par_iter()
        .map(|p| difference_norm(f, &p.point, &p.step, r))
        .reduce(|| 0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulusEstimate {
    pub value: f64,
    pub samples: usize,
    /// The last doubling changed the value by less than 1%.
    pub converged: bool,
}

/// ω_r(f; h) = sup |Δ^r_δ f(x)|₂ over the cloud, doubling it up to three
/// times until the value moves by less than 1%.
pub fn abstract_modulus(f: &AbstractFunction, r: u32, h: f64, cloud: &SampleCloud) -> Result<ModulusEstimate> {
    if !(h > 0.0 && h.is_finite()) {
        return domain(format!("step bound must be positive (got {h})"));
    }
    let mut c = *cloud;
    let mut value = sampled_modulus(f, r, &c.pairs(&f.domain, f.radius, h));
    for _ in 0..3 {
        let next = c.doubled();
        let v = sampled_modulus(f, r, &next.pairs(&f.domain, f.radius, h)).max(value);
        let change = v - value;
        value = v;
        c = next;
        if change <= 0.01 * value {
            return Ok(ModulusEstimate { value, samples: c.count, converged: true });
        }
    }
    Ok(ModulusEstimate { value, samples: c.count, converged: false })
}

/// |Δ^r_{nδ} f(x) − Σ_{ν ∈ [0, n)^r} Δ^r_δ f(x + (ν₁ + … + ν_r)δ)|₂.
pub fn identity_star_check(f: &AbstractFunction, r: u32, n: u32, delta: &[f64], x: &[f64]) -> Result<f64> {
    if r == 0 || n == 0 {
        return domain("identity needs r, n ≥ 1");
    }
    let big: Vector = delta.iter().map(|d| d * n as f64).collect();
    let lhs = abstract_difference(f, x, &big, r);
    // multiplicity of each shift s is the coefficient of z^s in (1 + … + z^{n−1})^r
    let mut counts = vec![1.0f64];
    for _ in 0..r {
        let mut next = vec![0.0; counts.len() + n as usize - 1];
        for (i, c) in counts.iter().enumerate() {
            for j in 0..n as usize {
                next[i + j] += c;
            }
        }
        counts = next;
    }
    let mut rhs = vec![0.0; lhs.len()];
    for (s, c) in counts.iter().enumerate() {
        let y: Vector = x.iter().zip(delta).map(|(a, d)| a + s as f64 * d).collect();
        for (a, v) in rhs.iter_mut().zip(abstract_difference(f, &y, delta, r)) {
            *a += c * v;
        }
    }
    let diff: Vector = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    Ok(f.codomain.norm(&diff))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, holds: lhs <= rhs + CHECK_TOLERANCE * (1.0 + rhs.abs()) }
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return domain(format!("step bound must be positive (got {h})"));
    }
    Ok(())
}

/// ω_r(f; λh) ≤ ⌈λ⌉^r ω_r(f; h) ≤ (λ + 1)^r ω_r(f; h); `rhs` uses ⌈λ⌉^r.
pub fn scaling_check(f: &AbstractFunction, r: u32, lambda: f64, h: f64, cloud: &SampleCloud) -> Result<InequalityCheck> {
    check_step(h)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain("scaling factor must be positive");
    }
    let n = lambda.ceil().max(1.0);
    let pairs = cloud.pairs(&f.domain, f.radius, h);
    let base = sampled_modulus(f, r, &pairs);
    let (lhs, closure) = pairs
        .par_iter()
        .map(|p| {
            let big = p.scaled_step(lambda);
            let lhs = difference_norm(f, &big.point, &big.step, r);
            let sub = p.scaled_step(lambda / n);
            let rhs = (0..=(r as usize) * (n as usize - 1))
                .map(|j| difference_norm(f, &sub.shifted(j as f64), &sub.step, r))
                .fold(0.0, f64::max);
            (lhs, rhs)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    Ok(InequalityCheck::new(lhs, n.powi(r as i32) * base.max(closure)))
}

/// For |u| ≤ |v|: ω_r(f; |v|)/|v|^r ≤ 2^r ω_r(f; |u|)/|u|^r.
pub fn ratio_check(f: &AbstractFunction, r: u32, small: f64, large: f64, cloud: &SampleCloud) -> Result<InequalityCheck> {
    check_step(small)?;
    if large < small {
        return domain("ratio comparison needs small ≤ large");
    }
    let lambda = large / small;
    let s = scaling_check(f, r, lambda, small, cloud)?;
    let base = s.rhs / lambda.ceil().max(1.0).powi(r as i32);
    let rf = r as i32;
    Ok(InequalityCheck::new(s.lhs / large.powi(rf), 2f64.powi(rf) * base / small.powi(rf)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCheck {
    /// ω_0 = ‖f‖_∞, ω_1, …, ω_r on the closed cloud.
    pub omegas: Vec<f64>,
    pub holds: bool,
}

/// ω_j ≤ 2ω_{j−1} for j = 1..r, hence ω_r ≤ 2^r‖f‖_∞.
pub fn chain_check(f: &AbstractFunction, r: u32, h: f64, cloud: &SampleCloud) -> Result<ChainCheck> {
    check_step(h)?;
    let pairs = cloud.pairs(&f.domain, f.radius, h);
    let omegas: Vec<f64> = (0..=r)
        .map(|j| {
            pairs
                .par_iter()
                .map(|p| {
                    (0..=(r - j))
                        .map(|i| difference_norm(f, &p.shifted(i as f64), &p.step, j))
                        .fold(0.0, f64::max)
                })
                .reduce(|| 0.0, f64::max)
        })
        .collect();
    let tol = |v: f64| CHECK_TOLERANCE * (1.0 + v);
    let holds = omegas.windows(2).all(|w| w[1] <= 2.0 * w[0] + tol(2.0 * w[0]))
        && omegas[r as usize] <= 2f64.powi(r as i32) * omegas[0] + tol(2f64.powi(r as i32) * omegas[0]);
    Ok(ChainCheck { omegas, holds })
}

/// ω_r(f; h) ≤ (r/2)Σ_{ν=0}^{k} 2^{−νr}ω_{r+1}(f; 2^ν h) + 2^{−(k+1)r}ω_r(f; 2^{k+1}h).
pub fn marchaud_check(f: &AbstractFunction, r: u32, h: f64, k: u32, cloud: &SampleCloud) -> Result<InequalityCheck> {
    check_step(h)?;
    if r == 0 {
        return domain("Marchaud bound needs r ≥ 1");
    }
    let pairs = cloud.pairs(&f.domain, f.radius, h);
    let lhs = sampled_modulus(f, r, &pairs);
    let rf = r as i32;
    let mut rhs = 0.0;
    for nu in 0..=k {
        let scale = 2f64.powi(nu as i32);
        let higher = pairs
            .par_iter()
            .map(|p| {
                let s = p.scaled_step(scale);
                (0..r).map(|i| difference_norm(f, &s.shifted(i as f64), &s.step, r + 1)).fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        rhs += 0.5 * r as f64 * higher / scale.powi(rf);
    }
    let top = 2f64.powi(k as i32 + 1);
    let tail = pairs
        .par_iter()
        .map(|p| {
            let s = p.scaled_step(top);
            difference_norm(f, &s.point, &s.step, r)
        })
        .reduce(|| 0.0, f64::max);
    rhs += tail / top.powi(rf);
    Ok(InequalityCheck::new(lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegenerateCheck {
    pub omega_h: f64,
    /// ω_r(f; 1)·h^r.
    pub predicted: f64,
    /// ω_{r+1}(f; 1), zero in the degenerate case.
    pub next_order: f64,
    pub relative_error: f64,
}

/// When ω_{r+1} ≡ 0, ω_r(f; h) = ω_r(f; 1)h^r. Uses one set of directions for both steps.
pub fn degenerate_check(f: &AbstractFunction, r: u32, h: f64, cloud: &SampleCloud) -> Result<DegenerateCheck> {
    check_step(h)?;
    let unit = cloud.pairs(&f.domain, f.radius, 1.0);
    let scaled: Vec<Pair> = unit.iter().map(|p| p.scaled_step(h)).collect();
    let omega_h = sampled_modulus(f, r, &scaled);
    let predicted = sampled_modulus(f, r, &unit) * h.powi(r as i32);
    let next_order = sampled_modulus(f, r + 1, &unit);
    let relative_error = if predicted > 0.0 { (omega_h - predicted).abs() / predicted } else { omega_h };
    Ok(DegenerateCheck { omega_h, predicted, next_order, relative_error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductCheck {
    pub lhs: f64,
    /// r = 1: ‖f‖ω(g) + ‖g‖ω(f). r ≥ 2: the four-term bracket.
    pub bracket: f64,
    /// lhs / bracket, the observed c(r).
    pub constant: Option<f64>,
    /// ω_r(f; 1) or ω_r(g; 1) vanished, so its ratio term was taken as 0.
    pub degenerate: bool,
    /// r = 1 only.
    pub holds: Option<bool>,
}

/// ω_r(fg; h) against the product bound in a normed algebra.
pub fn product_modulus_check(
    f: &AbstractFunction,
    g: &AbstractFunction,
    r: u32,
    h: f64,
    cloud: &SampleCloud,
) -> Result<ProductCheck> {
    check_step(h)?;
    if r == 0 {
        return domain("product bound needs r ≥ 1");
    }
    let fg = f.product(g)?;
    let pairs = cloud.pairs(&f.domain, f.radius, h);
    let sup = |u: &AbstractFunction| -> f64 {
        pairs
            .par_iter()
            .map(|p| (0..=r).map(|i| u.value_norm(&p.shifted(i as f64))).fold(0.0, f64::max))
            .reduce(|| 0.0, f64::max)
    };
    let (nf, ng) = (sup(f), sup(g));
    let lhs = sampled_modulus(&fg, r, &pairs);
    let (wf, wg) = (sampled_modulus(f, r, &pairs), sampled_modulus(g, r, &pairs));
    if r == 1 {
        let bracket = nf * wg + ng * wf;
        let c = InequalityCheck::new(lhs, bracket);
        return Ok(ProductCheck {
            lhs,
            bracket,
            constant: (bracket > 0.0).then(|| lhs / bracket),
            degenerate: false,
            holds: Some(c.holds),
        });
    }
    let unit = cloud.pairs(&f.domain, f.radius, 1.0);
    let (uf, ug) = (sampled_modulus(f, r, &unit), sampled_modulus(g, r, &unit));
    let ratio = |w: f64, u: f64| if u > 1e-14 { w / u } else { 0.0 };
    let bracket = ng * wf + nf * wg + nf * ng * h.powi(r as i32) + nf * ng * (ratio(wf, uf) + ratio(wg, ug));
    Ok(ProductCheck {
        lhs,
        bracket,
        constant: (bracket > 0.0).then(|| lhs / bracket),
        degenerate: uf <= 1e-14 || ug <= 1e-14,
        holds: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpolationRatio {
    /// Largest observed ω_{r+m}(1)^r ω_r(h)^{r+m} / (ω_r(1)^{r+m} ω_{r+m}(h)^r).
    pub max_ratio: f64,
    /// Steps where the denominator vanished.
    pub excluded: usize,
}

/// Observed constant in the interpolation inequality between orders r and r + m.
pub fn interpolation_ratio(f: &AbstractFunction, r: u32, m: u32, steps: &[f64], cloud: &SampleCloud) -> Result<InterpolationRatio> {
    if r == 0 || m == 0 || steps.is_empty() {
        return domain("interpolation ratio needs r, m ≥ 1 and a step list");
    }
    let unit = cloud.pairs(&f.domain, f.radius, 1.0);
    let (ur, urm) = (sampled_modulus(f, r, &unit), sampled_modulus(f, r + m, &unit));
    let (ri, rmi) = (r as i32, (r + m) as i32);
    let mut out = InterpolationRatio { max_ratio: 0.0, excluded: 0 };
    for &h in steps {
        check_step(h)?;
        if h > 1.0 {
            return domain("interpolation ratio needs h ≤ 1");
        }
        let pairs: Vec<Pair> = unit.iter().map(|p| p.scaled_step(h)).collect();
        let (wr, wrm) = (sampled_modulus(f, r, &pairs), sampled_modulus(f, r + m, &pairs));
        let num = urm.powi(ri) * wr.powi(rmi);
        let den = ur.powi(rmi) * wrm.powi(ri);
        if den <= 1e-300 {
            out.excluded += 1;
            continue;
        }
        out.max_ratio = out.max_ratio.max(num / den);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeminormLimit {
    pub sup_ratio: f64,
    /// ω_r(f; h)/h^r at the smallest step.
    pub limit_ratio: f64,
    pub holds: bool,
}

/// sup_h ω_r(f; h)/h^r against its value at the smallest step.
pub fn seminorm_limit(f: &AbstractFunction, r: u32, steps: &[f64], tolerance: f64, cloud: &SampleCloud) -> Result<SeminormLimit> {
    if steps.is_empty() {
        return domain("seminorm limit needs a step list");
    }
    let unit = cloud.pairs(&f.domain, f.radius, 1.0);
    let mut sup_ratio = 0.0f64;
    let mut limit_ratio = 0.0;
    let mut smallest = f64::INFINITY;
    for &h in steps {
        check_step(h)?;
        let pairs: Vec<Pair> = unit.iter().map(|p| p.scaled_step(h)).collect();
        let ratio = sampled_modulus(f, r, &pairs) / h.powi(r as i32);
        sup_ratio = sup_ratio.max(ratio);
        if h < smallest {
            smallest = h;
            limit_ratio = ratio;
        }
    }
    Ok(SeminormLimit { sup_ratio, limit_ratio, holds: limit_ratio >= sup_ratio * (1.0 - tolerance) })
}

/// Quadrature (s_i, w_i) for the density of δ₁ + … + δ_r, δ_m uniform on [0, h].
fn sum_density_rule(r: u32, h: f64) -> Vec<(f64, f64)> {
    let gl = gl20();
    let fact: f64 = (1..r).map(|k| k as f64).product();
    let spline = |u: f64| -> f64 {
        (0..=r)
            .map(|k| {
                let t = u - k as f64;
                if t <= 0.0 {
                    0.0
                } else {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(r as f64, k as u64) * t.powi(r as i32 - 1)
                }
            })
            .sum::<f64>()
            / fact
    };
    let mut rule = Vec::new();
    for panel in 0..r {
        let (a, b) = (panel as f64, panel as f64 + 1.0);
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            let u = 0.5 * (a + b) + 0.5 * (b - a) * x;
            rule.push((u * h, 0.5 * w * spline(u)));
        }
    }
    rule
}

fn steklov_coefficient(r: u32, nu: u32) -> f64 {
    binomial(r as f64, nu as u64) * if nu % 2 == 1 { 1.0 } else { -1.0 }
}

/// f_{r,h}(x) = h^{−r}∫₀^h…∫₀^h Σ_{ν=1}^r (−1)^{ν+1}C(r, ν) f(x + ν(δ₁ + … + δ_r)) dδ, E₁ = ℝ.
pub fn steklov_mean(f: &AbstractFunction, r: u32, h: f64) -> Result<AbstractFunction> {
    check_step(h)?;
    if f.domain.dimension() != 1 || r == 0 {
        return domain("Steklov means need E₁ = ℝ and r ≥ 1");
    }
    let rule = sum_density_rule(r, h);
    let g = f.clone();
    let dim = f.codomain.dimension();
    AbstractFunction::new(f.domain.clone(), f.codomain.clone(), f.radius, move |x: &[f64]| {
        let mut acc = vec![0.0; dim];
        for nu in 1..=r {
            let c = steklov_coefficient(r, nu);
            for (s, w) in &rule {
                for (a, v) in acc.iter_mut().zip(g.eval(&[x[0] + nu as f64 * s])) {
                    *a += c * w * v;
                }
            }
        }
        acc
    })
}

/// Multiplier of the Steklov mean at frequency k: Σ_ν (−1)^{ν+1}C(r, ν) m(νkh)^r, m(t) = (e^{it} − 1)/(it).
pub fn steklov_symbol(r: u32, h: f64, k: f64) -> Complex64 {
    let m = |t: f64| -> Complex64 {
        if t.abs() < 1e-8 {
            Complex64::new(1.0 - t * t / 6.0, t / 2.0)
        } else {
            (Complex64::from_polar(1.0, t) - 1.0) / Complex64::new(0.0, t)
        }
    };
    (1..=r).map(|nu| steklov_coefficient(r, nu) * m(nu as f64 * k * h).powu(r)).sum()
}

/// Steklov mean of a one-dimensional periodic spectrum.
pub fn steklov_spectrum(s: &Spectrum, r: u32, h: f64) -> Result<Spectrum> {
    check_step(h)?;
    if s.shape().dim() != 1 || r == 0 {
        return domain("spectral Steklov mean needs d = 1 and r ≥ 1");
    }
    Ok(s.map_symbol(|k| steklov_symbol(r, h, k[0])))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteklovCheck {
    /// max |f − f_{r,h}|₂ over the points.
    pub deviation: f64,
    /// ω_r(f; rh) on the quadrature steps.
    pub deviation_bound: f64,
    /// sup |f_{r,h}^{(r)}|₂ from the exact derivative formula.
    pub seminorm: f64,
    /// (2^r − 1)ω_r(f; h)/h^r.
    pub seminorm_bound: f64,
    pub holds: bool,
}

/// Checks |f − f_{r,h}|₂ ≤ ω_r(f; rh) and |f_{r,h}|_{W^r} ≤ (2^r − 1)ω_r(f; h)/h^r at the given points.
pub fn steklov_check(f: &AbstractFunction, r: u32, h: f64, points: &[f64]) -> Result<SteklovCheck> {
    let mean = steklov_mean(f, r, h)?;
    let rule = sum_density_rule(r, h);
    let rf = r as i32;
    let per_point: Vec<(f64, f64, f64, f64)> = points
        .par_iter()
        .map(|&x| {
            let fx = f.eval(&[x]);
            let mx = mean.eval(&[x]);
            let diff: Vector = fx.iter().zip(&mx).map(|(a, b)| a - b).collect();
            let dev = f.codomain.norm(&diff);
            let dev_bound = rule.iter().map(|(s, _)| difference_norm(f, &[x], &[*s], r)).fold(0.0, f64::max);
            // f_{r,h}^{(r)} = (−h)^{−r} Σ_ν (−1)^{ν+1}C(r, ν) ν^{−r} Δ^r_{νh} f
            let mut deriv = vec![0.0; fx.len()];
            for nu in 1..=r {
                let c = steklov_coefficient(r, nu) / (nu as f64).powi(rf) / (-h).powi(rf);
                for (a, v) in deriv.iter_mut().zip(abstract_difference(f, &[x], &[nu as f64 * h], r)) {
                    *a += c * v;
                }
            }
            let semi = f.codomain.norm(&deriv);
            let local = (0..=(r * (r - 1)) as usize)
                .map(|j| difference_norm(f, &[x + j as f64 * h], &[h], r))
                .fold(0.0, f64::max);
            (dev, dev_bound, semi, local)
        })
        .collect();
    let fold = |i: usize| {
        per_point
            .iter()
            .map(|t| [t.0, t.1, t.2, t.3][i])
            .fold(0.0, f64::max)
    };
    let (deviation, deviation_bound, seminorm) = (fold(0), fold(1), fold(2));
    let seminorm_bound = (2f64.powi(rf) - 1.0) * fold(3) / h.powi(rf);
    let holds =
        InequalityCheck::new(deviation, deviation_bound).holds && InequalityCheck::new(seminorm, seminorm_bound).holds;
    Ok(SteklovCheck { deviation, deviation_bound, seminorm, seminorm_bound, holds })
}
