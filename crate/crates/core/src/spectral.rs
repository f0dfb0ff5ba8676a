//! Band-limited surrogates of periodic functions on 𝕋^d.
//!
//! Samples live on x_j = 2πj/N − π. Coefficients follow
//! f̂_k = (2π)^{-d} ∫ f e^{-i(k,x)} dx and are stored in transform order,
//! k_j ∈ {−N/2, …, N/2 − 1}. The slot k_j = −N/2 carries the Nyquist mode,
//! which symbols treat as the average of ±N/2.

use crate::error::{Error, Result};
use crate::summation::MultiplierDescriptor;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

pub const MAX_DIM: usize = 3;

/// Exponent p ∈ [1, ∞].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LebesgueExponent {
    Finite(f64),
    Infinity,
}

impl LebesgueExponent {
    pub const ONE: Self = Self::Finite(1.0);
    pub const TWO: Self = Self::Finite(2.0);
    pub const INF: Self = Self::Infinity;

    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Self::Finite(p))
        } else {
            Err(Error::Domain(format!("exponent p = {p} must lie in [1, ∞]")))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for LebesgueExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for LebesgueExponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Inf" | "∞" => Ok(Self::Infinity),
            t => {
                let p: f64 = t
                    .parse()
                    .map_err(|_| Error::Config(format!("cannot parse exponent `{t}`")))?;
                Self::new(p)
            }
        }
    }
}

impl Serialize for LebesgueExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(p) => s.serialize_f64(*p),
            Self::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for LebesgueExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(p) => Self::new(p),
            Raw::Text(t) => t.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Dimension and per-axis resolution of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    dim: usize,
    n: usize,
}

impl Shape {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} outside 1..=3")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("resolution {n} must be a power of two ≥ 8")));
        }
        Ok(Self { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.n
    }

    /// Number of samples, N^d.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid node 2πj/N − π.
    pub fn node(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n as f64 - PI
    }

    /// Signed frequency stored in slot m.
    pub fn frequency(&self, m: usize) -> i64 {
        if m < self.n / 2 {
            m as i64
        } else {
            m as i64 - self.n as i64
        }
    }

    /// Per-axis slots of a linear index (axis 0 slowest).
    pub fn unravel(&self, mut lin: usize) -> [usize; MAX_DIM] {
        let mut out = [0; MAX_DIM];
        for a in (0..self.dim).rev() {
            out[a] = lin % self.n;
            lin /= self.n;
        }
        out
    }

    /// Signed frequencies of a linear index.
    pub fn frequencies(&self, lin: usize) -> [i64; MAX_DIM] {
        let m = self.unravel(lin);
        let mut k = [0; MAX_DIM];
        for a in 0..self.dim {
            k[a] = self.frequency(m[a]);
        }
        k
    }

    /// Linear index holding frequency k, if |k_j| ≤ N/2 on every axis.
    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim {
            return None;
        }
        let half = (self.n / 2) as i64;
        let mut lin = 0;
        for &kj in k {
            if kj.abs() > half {
                return None;
            }
            lin = lin * self.n + kj.rem_euclid(self.n as i64) as usize;
        }
        Some(lin)
    }

    /// Grid point of a linear index.
    pub fn point(&self, lin: usize) -> [f64; MAX_DIM] {
        let m = self.unravel(lin);
        let mut x = [0.0; MAX_DIM];
        for a in 0..self.dim {
            x[a] = self.node(m[a]);
        }
        x
    }

    fn check_same(&self, other: &Shape) -> Result<()> {
        if self != other {
            return Err(Error::ShapeMismatch(format!(
                "({}, {}) vs ({}, {})",
                self.dim, self.n, other.dim, other.n
            )));
        }
        Ok(())
    }
}

/// Samples of a function on the uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    shape: Shape,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(dim: usize, n: usize, samples: Vec<Complex64>) -> Result<Self> {
        let shape = Shape::new(dim, n)?;
        if samples.len() != shape.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                shape.len(),
                samples.len()
            )));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        Ok(Self { shape, samples })
    }

    pub fn from_real(dim: usize, n: usize, samples: &[f64]) -> Result<Self> {
        Self::new(dim, n, samples.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples x ↦ f(x) on the grid.
    pub fn from_fn<F: Fn(&[f64]) -> Complex64>(dim: usize, n: usize, f: F) -> Result<Self> {
        let shape = Shape::new(dim, n)?;
        let samples = (0..shape.len()).map(|i| f(&shape.point(i)[..dim])).collect();
        Self::new(dim, n, samples)
    }

    pub fn from_real_fn<F: Fn(&[f64]) -> f64>(dim: usize, n: usize, f: F) -> Result<Self> {
        Self::from_fn(dim, n, |x| Complex64::new(f(x), 0.0))
    }

    pub fn constant(dim: usize, n: usize, c: Complex64) -> Result<Self> {
        let shape = Shape::new(dim, n)?;
        Ok(Self { shape, samples: vec![c; shape.len()] })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim
    }

    pub fn resolution(&self) -> usize {
        self.shape.n
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.samples.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.shape.check_same(&other.shape)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(Self { shape: self.shape, samples })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.shape.check_same(&other.shape)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect();
        Ok(Self { shape: self.shape, samples })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { shape: self.shape, samples: self.samples.iter().map(|z| z * c).collect() }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.shape.check_same(&other.shape)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect();
        Ok(Self { shape: self.shape, samples })
    }

    /// Largest pointwise distance to another function on the same grid.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.shape.check_same(&other.shape)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Fourier coefficients of a surrogate, in transform order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    shape: Shape,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(dim: usize, n: usize) -> Result<Self> {
        let shape = Shape::new(dim, n)?;
        Ok(Self { shape, coeffs: vec![Complex64::new(0.0, 0.0); shape.len()] })
    }

    pub fn from_coefficients(dim: usize, n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let shape = Shape::new(dim, n)?;
        if coeffs.len() != shape.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                shape.len(),
                coeffs.len()
            )));
        }
        Ok(Self { shape, coeffs })
    }

    /// Builds a spectrum from (k, f̂_k) terms; repeated k accumulate.
    pub fn from_terms(dim: usize, n: usize, terms: &[(Vec<i64>, Complex64)]) -> Result<Self> {
        let mut s = Self::zeros(dim, n)?;
        for (k, c) in terms {
            let i = s.shape.index_of(k).ok_or_else(|| {
                Error::Domain(format!("frequency {k:?} outside the band of N = {n}"))
            })?;
            s.coeffs[i] += c;
        }
        Ok(s)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim
    }

    pub fn resolution(&self) -> usize {
        self.shape.n
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// f̂_k, zero outside the band.
    pub fn coefficient(&self, k: &[i64]) -> Complex64 {
        self.shape
            .index_of(k)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn set(&mut self, k: &[i64], c: Complex64) -> Result<()> {
        let i = self
            .shape
            .index_of(k)
            .ok_or_else(|| Error::Domain(format!("frequency {k:?} outside the band")))?;
        self.coeffs[i] = c;
        Ok(())
    }

    /// Iterates (frequency, coefficient) pairs; only the first `dim` entries
    /// of the frequency array are meaningful.
    pub fn iter(&self) -> impl Iterator<Item = ([i64; MAX_DIM], Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(|(i, c)| (self.shape.frequencies(i), *c))
    }

    /// Σ|f̂_k|², equal to ‖f‖₂² under the normalized measure.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Σ|f̂_k|, an upper bound for every ‖f‖_p.
    pub fn absolute_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// f̂_{−k} = conj(f̂_k) on every represented pair.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.shape.dim;
        (0..self.coeffs.len()).all(|i| {
            let k = self.shape.frequencies(i);
            let mut neg = [0i64; MAX_DIM];
            for a in 0..d {
                neg[a] = -k[a];
            }
            let j = self.shape.index_of(&neg[..d]).unwrap_or(i);
            (self.coeffs[j] - self.coeffs[i].conj()).norm() <= tol
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.shape.check_same(&other.shape)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { shape: self.shape, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.shape.check_same(&other.shape)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { shape: self.shape, coeffs })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { shape: self.shape, coeffs: self.coeffs.iter().map(|z| z * c).collect() }
    }

    /// Multiplies every coefficient by symbol(k).
    ///
    /// Axes sitting on the Nyquist slot use the mean of the symbol at ±N/2.
    pub fn try_map_symbol<F>(&self, symbol: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<Complex64> + Sync,
    {
        let d = self.shape.dim;
        let half = (self.shape.n / 2) as i64;
        let shape = self.shape;
        let at = |i: usize| -> Result<Complex64> {
            let kk = shape.frequencies(i);
            let mut k = [0.0; MAX_DIM];
            let mut nyq = [false; MAX_DIM];
            let mut count = 0;
            for a in 0..d {
                k[a] = kk[a] as f64;
                if kk[a] == -half {
                    nyq[a] = true;
                    count += 1;
                }
            }
            if count == 0 {
                return symbol(&k[..d]);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for mask in 0..(1u32 << count) {
                let mut bit = 0;
                let mut kv = k;
                for a in 0..d {
                    if nyq[a] {
                        if mask & (1 << bit) != 0 {
                            kv[a] = half as f64;
                        }
                        bit += 1;
                    }
                }
                acc += symbol(&kv[..d])?;
            }
            Ok(acc / (1u32 << count) as f64)
        };
        let coeffs = if self.coeffs.len() >= PARALLEL_LEN {
            self.coeffs
                .par_iter()
                .enumerate()
                .map(|(i, c)| at(i).map(|m| c * m))
                .collect::<Result<Vec<_>>>()?
        } else {
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| at(i).map(|m| c * m))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Self { shape: self.shape, coeffs })
    }

    pub fn map_symbol<F: Fn(&[f64]) -> Complex64 + Sync>(&self, symbol: F) -> Self {
        self.try_map_symbol(|k| Ok(symbol(k))).expect("infallible symbol")
    }
}

const PARALLEL_LEN: usize = 2048;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_nd(data: &mut [Complex64], shape: Shape, direction: FftDirection) {
    let n = shape.n;
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction));
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..shape.dim {
        let stride = n.pow((shape.dim - 1 - axis) as u32);
        if stride == 1 {
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        let block = stride * n;
        for start in (0..data.len()).step_by(block) {
            for off in 0..stride {
                let base = start + off;
                for (j, v) in line.iter_mut().enumerate() {
                    *v = data[base + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, v) in line.iter().enumerate() {
                    data[base + j * stride] = *v;
                }
            }
        }
    }
}

fn parity_sign(shape: &Shape, lin: usize) -> f64 {
    let m = shape.unravel(lin);
    let s: usize = m[..shape.dim].iter().sum();
    if s.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Fourier coefficients of the sampled function.
pub fn analyze(f: &GridFunction) -> Spectrum {
    let shape = f.shape;
    let mut data = f.samples.clone();
    fft_nd(&mut data, shape, FftDirection::Forward);
    let scale = 1.0 / shape.len() as f64;
    for (i, z) in data.iter_mut().enumerate() {
        *z *= parity_sign(&shape, i) * scale;
    }
    Spectrum { shape, coeffs: data }
}

/// Samples of Σ f̂_k e^{i(k,x)} on the grid.
pub fn synthesize(s: &Spectrum) -> GridFunction {
    let shape = s.shape;
    let mut data: Vec<Complex64> =
        s.coeffs.iter().enumerate().map(|(i, z)| z * parity_sign(&shape, i)).collect();
    fft_nd(&mut data, shape, FftDirection::Inverse);
    GridFunction { shape, samples: data }
}

/// L_p norm under the normalized measure; p = ∞ is the grid maximum.
pub fn lp_norm(f: &GridFunction, p: LebesgueExponent) -> f64 {
    let max = f.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    match p {
        LebesgueExponent::Infinity => max,
        LebesgueExponent::Finite(p) => {
            if max == 0.0 {
                return 0.0;
            }
            let n = f.samples.len() as f64;
            if p == 1.0 {
                f.samples.iter().map(|z| z.norm()).sum::<f64>() / n
            } else if p == 2.0 {
                (f.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / n).sqrt()
            } else {
                let s: f64 = f.samples.iter().map(|z| (z.norm() / max).powf(p)).sum();
                max * (s / n).powf(1.0 / p)
            }
        }
    }
}

/// ‖Σ c_k e_k‖_p for a spectrum.
pub fn spectrum_norm(s: &Spectrum, p: LebesgueExponent) -> f64 {
    if let LebesgueExponent::Finite(q) = p {
        if q == 2.0 {
            return s.energy().sqrt();
        }
    }
    lp_norm(&synthesize(s), p)
}

/// Spectrum of x ↦ f(x + t).
pub fn translate_spectrum(s: &Spectrum, t: &[f64]) -> Result<Spectrum> {
    if t.len() != s.dim() {
        return Err(Error::ShapeMismatch(format!(
            "shift of length {} for dimension {}",
            t.len(),
            s.dim()
        )));
    }
    Ok(s.map_symbol(|k| {
        let phase: f64 = k.iter().zip(t).map(|(a, b)| a * b).sum();
        Complex64::from_polar(1.0, phase)
    }))
}

/// Surrogate of x ↦ f(x + t); t need not be a grid multiple.
pub fn translate(f: &GridFunction, t: &[f64]) -> Result<GridFunction> {
    Ok(synthesize(&translate_spectrum(&analyze(f), t)?))
}

/// Coefficient-wise product φ(εk)·f̂_k.
pub fn apply_multiplier(s: &Spectrum, phi: &MultiplierDescriptor, eps: f64) -> Result<Spectrum> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("ε = {eps} must be positive")));
    }
    phi.check_fits(s.shape())?;
    s.try_map_symbol(|k| {
        let mut x = [0.0; MAX_DIM];
        for (a, kv) in k.iter().enumerate() {
            x[a] = eps * kv;
        }
        phi.evaluate(&x[..k.len()])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn direct_coefficients(f: &GridFunction) -> Vec<Complex64> {
        let shape = f.shape();
        let len = shape.len() as f64;
        (0..shape.len())
            .map(|i| {
                let k = shape.frequencies(i);
                let mut acc = c(0.0, 0.0);
                for (j, v) in f.samples().iter().enumerate() {
                    let x = shape.point(j);
                    let ph: f64 = (0..shape.dim()).map(|a| k[a] as f64 * x[a]).sum();
                    acc += v * Complex64::from_polar(1.0, -ph);
                }
                acc / len
            })
            .collect()
    }

    #[test]
    fn cosine_coefficients() {
        let f = GridFunction::from_real_fn(1, 16, |x| x[0].cos()).unwrap();
        let s = analyze(&f);
        for (k, v) in s.iter() {
            let want = if k[0].abs() == 1 { 0.5 } else { 0.0 };
            assert!((v - c(want, 0.0)).norm() < 1e-14, "k={k:?} v={v}");
        }
    }

    #[test]
    fn constant_has_single_coefficient() {
        let f = GridFunction::constant(2, 8, c(1.0, 0.0)).unwrap();
        let s = analyze(&f);
        assert!((s.coefficient(&[0, 0]) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(s.energy() - 1.0 < 1e-14);
    }

    #[test]
    fn synthesize_cosine_and_zero() {
        let s = Spectrum::from_terms(1, 16, &[(vec![1], c(0.5, 0.0)), (vec![-1], c(0.5, 0.0))])
            .unwrap();
        let f = synthesize(&s);
        let shape = f.shape();
        for (i, v) in f.samples().iter().enumerate() {
            assert!((v - c(shape.node(i).cos(), 0.0)).norm() < 1e-14);
        }
        let z = synthesize(&Spectrum::zeros(2, 8).unwrap());
        assert!(z.samples().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn matches_direct_transform_in_3d() {
        let f = GridFunction::from_fn(3, 8, |x| {
            c((x[0] + 2.0 * x[1]).sin() + (x[2] - x[0]).cos(), (3.0 * x[2]).sin())
        })
        .unwrap();
        let s = analyze(&f);
        let d = direct_coefficients(&f);
        for (a, b) in s.coefficients().iter().zip(&d) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn norms_of_simple_functions() {
        let one = GridFunction::constant(1, 64, c(1.0, 0.0)).unwrap();
        for p in [1.0, 1.5, 2.0, 7.0] {
            assert!((lp_norm(&one, LebesgueExponent::new(p).unwrap()) - 1.0).abs() < 1e-14);
        }
        assert_eq!(lp_norm(&one, LebesgueExponent::INF), 1.0);
        let cosx = GridFunction::from_real_fn(1, 256, |x| x[0].cos()).unwrap();
        assert!((lp_norm(&cosx, LebesgueExponent::TWO) - 0.5f64.sqrt()).abs() < 1e-10);
        // Oracle: the same quadrature at ten times the resolution, taken as exact.
        let fine = GridFunction::from_real_fn(1, 4096, |x| x[0].cos()).unwrap();
        let reference = lp_norm(&fine, LebesgueExponent::ONE);
        assert!((reference - 2.0 / PI).abs() < 1e-5);
        assert!((lp_norm(&cosx, LebesgueExponent::ONE) - reference).abs() < 1e-3);
    }

    #[test]
    fn translation_by_quarter_period() {
        let f = GridFunction::from_real_fn(1, 32, |x| x[0].cos()).unwrap();
        let g = translate(&f, &[PI / 2.0]).unwrap();
        let want = GridFunction::from_real_fn(1, 32, |x| -x[0].sin()).unwrap();
        assert!(g.max_abs_diff(&want).unwrap() < 1e-13);
        assert!(translate(&f, &[0.0]).unwrap().max_abs_diff(&f).unwrap() < 1e-14);
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<LebesgueExponent>().unwrap(), LebesgueExponent::INF);
        assert_eq!("2".parse::<LebesgueExponent>().unwrap(), LebesgueExponent::TWO);
        assert!("0.5".parse::<LebesgueExponent>().is_err());
        let v: Vec<LebesgueExponent> = serde_json::from_str(r#"[1, 2.5, "inf"]"#).unwrap();
        assert_eq!(v[2], LebesgueExponent::INF);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1.0,2.5,"inf"]"#);
    }

    #[test]
    fn invalid_grids_rejected() {
        assert!(Shape::new(4, 8).is_err());
        assert!(Shape::new(1, 12).is_err());
        assert!(Shape::new(1, 4).is_err());
        assert!(GridFunction::new(1, 8, vec![c(f64::NAN, 0.0); 8]).is_err());
    }

    #[test]
    fn hermitian_iff_real() {
        let f = GridFunction::from_real_fn(2, 8, |x| (x[0] - x[1]).sin() + x[0].cos()).unwrap();
        assert!(analyze(&f).is_hermitian(1e-14));
        let g = GridFunction::from_fn(2, 8, |x| Complex64::from_polar(1.0, x[0])).unwrap();
        assert!(!analyze(&g).is_hermitian(1e-6));
    }

    fn random_trig(deg: i64, n: usize, seed: &[f64]) -> Spectrum {
        let mut terms = Vec::new();
        let mut it = seed.iter().cycle();
        for k in -deg..=deg {
            terms.push((vec![k], c(*it.next().unwrap(), *it.next().unwrap())));
        }
        Spectrum::from_terms(1, n, &terms).unwrap()
    }

    proptest! {
        #[test]
        fn round_trip(vals in proptest::collection::vec(-1.0f64..1.0, 34)) {
            let s = random_trig(16, 64, &vals);
            let back = analyze(&synthesize(&s));
            for (a, b) in back.coefficients().iter().zip(s.coefficients()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn parseval(vals in proptest::collection::vec(-1.0f64..1.0, 34)) {
            let s = random_trig(16, 64, &vals);
            let f = synthesize(&s);
            let n2 = lp_norm(&f, LebesgueExponent::TWO).powi(2);
            prop_assert!((n2 - s.energy()).abs() < 1e-10);
        }

        #[test]
        fn translation_round_trip_and_norm(vals in proptest::collection::vec(-1.0f64..1.0, 34), t in -4.0f64..4.0) {
            let s = random_trig(16, 64, &vals);
            let f = synthesize(&s);
            let g = translate(&translate(&f, &[t]).unwrap(), &[-t]).unwrap();
            prop_assert!(g.max_abs_diff(&f).unwrap() < 1e-12);
            let h = translate(&f, &[t]).unwrap();
            let a = lp_norm(&f, LebesgueExponent::TWO);
            prop_assert!((lp_norm(&h, LebesgueExponent::TWO) - a).abs() < 1e-10);
            let shift = 2.0 * PI * 5.0 / 64.0;
            let h = translate(&f, &[shift]).unwrap();
            for p in [LebesgueExponent::ONE, LebesgueExponent::new(3.0).unwrap(), LebesgueExponent::INF] {
                prop_assert!((lp_norm(&h, p) - lp_norm(&f, p)).abs() < 1e-10);
            }
        }

        #[test]
        fn norm_monotone_in_p(vals in proptest::collection::vec(-1.0f64..1.0, 34)) {
            let f = synthesize(&random_trig(16, 64, &vals));
            let ps = [1.0, 1.5, 2.0, 3.0, 8.0];
            for w in ps.windows(2) {
                let a = lp_norm(&f, LebesgueExponent::new(w[0]).unwrap());
                let b = lp_norm(&f, LebesgueExponent::new(w[1]).unwrap());
                prop_assert!(a <= b + 1e-9);
            }
            prop_assert!(lp_norm(&f, LebesgueExponent::new(8.0).unwrap()) <= lp_norm(&f, LebesgueExponent::INF) + 1e-9);
        }

        #[test]
        fn linearity(a in proptest::collection::vec(-1.0f64..1.0, 34), b in proptest::collection::vec(-1.0f64..1.0, 34), z in -2.0f64..2.0) {
            let f = synthesize(&random_trig(16, 64, &a));
            let g = synthesize(&random_trig(16, 64, &b));
            let lhs = analyze(&f.add(&g.scale(c(z, 0.5))).unwrap());
            let rhs = analyze(&f).add(&analyze(&g).scale(c(z, 0.5))).unwrap();
            for (x, y) in lhs.coefficients().iter().zip(rhs.coefficients()) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }
    }
}
