//! Summation-method multipliers φ and the means Φ_ε f = Σ φ(εk) f̂_k e_k.

use crate::error::{descriptor, Error, Result};
use crate::quad::binomial;
use crate::spectral::{analyze, apply_multiplier, spectrum_norm, synthesize, GridFunction};
use crate::spectral::{LebesgueExponent, Shape, Spectrum};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// A named multiplier φ: ℝ^d → ℂ with φ(0) = 1.
#[derive(Debug, Clone, PartialEq)]
pub enum MultiplierDescriptor {
    /// φ ≡ 1.
    Identity,
    /// (1 − |x|)₊.
    Fejer,
    /// (1 − |x|^α)₊^β, radial.
    Riesz { alpha: f64, beta: f64 },
    /// (1 − Σ|x_j|^α)₊^β.
    RieszAxis { alpha: f64, beta: f64 },
    /// (1 − |x|^r)₊ for even r.
    TrigubEven { r: u32 },
    /// (1 − |x|^{r+1})₊ + i|x|^r(1 − |x|)₊ sign x for odd r, d = 1.
    TrigubOdd { r: u32 },
    /// (1 − |x|^r)₊ − i tan(rπ/2)|x|^r(1 − |x|)₊ sign x for r ∉ ℕ, d = 1.
    Fractional { r: f64 },
    /// (1 − |x|^{2r})₊^δ, radial.
    BochnerRiesz { r: f64, delta: f64 },
    /// Arithmetic means of square partial sums of degree 0..=n, d = 2.
    Marcinkiewicz2d { n: u32 },
    /// Generalized Jackson multiplier built from powers of the Dirichlet kernel.
    DirichletPower(DirichletPower),
    /// Radial table with linear interpolation.
    Custom(CustomTable),
}

/// Tabulated coefficients of the normalized kernel D_n^s and the
/// combination Σ_{ν=1}^r (−1)^{ν+1} C(r,ν) κ(νk).
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletPower {
    pub s: u32,
    pub r: u32,
    pub n: u32,
    kernel: Arc<Vec<f64>>,
}

impl DirichletPower {
    /// κ(k) for k = 0..=sn; κ(0) = 1 and κ is even.
    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    /// κ at a real argument, linear between integers, 0 beyond sn.
    pub fn kernel_at(&self, k: f64) -> f64 {
        let k = k.abs();
        let last = self.kernel.len() - 1;
        if k >= last as f64 {
            return 0.0;
        }
        let i = k.floor() as usize;
        let t = k - i as f64;
        self.kernel[i] * (1.0 - t) + self.kernel[i + 1] * t
    }

    /// Standing assumption s ≥ r + 2.
    pub fn standard_range(&self) -> bool {
        self.s >= self.r + 2
    }

    fn value(&self, x: f64) -> f64 {
        let n = self.n as f64;
        (1..=self.r)
            .map(|nu| {
                let sign = if nu % 2 == 1 { 1.0 } else { -1.0 };
                sign * binomial(self.r as f64, nu as u64) * self.kernel_at(nu as f64 * x * n)
            })
            .sum()
    }
}

/// Radial multiplier given by samples at |x| = i·step.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomTable {
    pub step: f64,
    pub values: Arc<Vec<Complex64>>,
}

impl CustomTable {
    pub fn new(step: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(step > 0.0) || values.is_empty() {
            return descriptor("custom table needs a positive step and at least one value");
        }
        if (values[0] - Complex64::new(1.0, 0.0)).norm() > 1e-14 {
            return descriptor("custom table must start at 1");
        }
        Ok(Self { step, values: Arc::new(values) })
    }

    fn value(&self, r: f64) -> Complex64 {
        let u = r / self.step;
        let last = self.values.len() - 1;
        if u >= last as f64 {
            return if u == last as f64 { self.values[last] } else { Complex64::new(0.0, 0.0) };
        }
        let i = u.floor() as usize;
        let t = u - i as f64;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }
}

fn plus_pow(t: f64, beta: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if beta == 0.0 {
        1.0
    } else {
        t.powf(beta)
    }
}

fn radius(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn need_dim(name: &str, x: &[f64], d: usize) -> Result<()> {
    if x.len() != d {
        return descriptor(format!("{name} is defined for d = {d}, got d = {}", x.len()));
    }
    Ok(())
}

impl MultiplierDescriptor {
    pub fn riesz(alpha: f64, beta: f64) -> Result<Self> {
        let m = Self::Riesz { alpha, beta };
        m.validate()?;
        Ok(m)
    }

    pub fn riesz_axis(alpha: f64, beta: f64) -> Result<Self> {
        let m = Self::RieszAxis { alpha, beta };
        m.validate()?;
        Ok(m)
    }

    pub fn trigub_even(r: u32) -> Result<Self> {
        let m = Self::TrigubEven { r };
        m.validate()?;
        Ok(m)
    }

    pub fn trigub_odd(r: u32) -> Result<Self> {
        let m = Self::TrigubOdd { r };
        m.validate()?;
        Ok(m)
    }

    /// φ_r of the order-r method τ_{r,n}: even or odd form by parity.
    pub fn trigub(r: u32) -> Result<Self> {
        if r.is_multiple_of(2) {
            Self::trigub_even(r)
        } else {
            Self::trigub_odd(r)
        }
    }

    pub fn fractional(r: f64) -> Result<Self> {
        let m = Self::Fractional { r };
        m.validate()?;
        Ok(m)
    }

    pub fn bochner_riesz(r: f64, delta: f64) -> Result<Self> {
        let m = Self::BochnerRiesz { r, delta };
        m.validate()?;
        Ok(m)
    }

    pub fn marcinkiewicz_2d(n: u32) -> Self {
        Self::Marcinkiewicz2d { n }
    }

    /// Parameter checks shared by constructors and `evaluate`.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Riesz { alpha, beta } | Self::RieszAxis { alpha, beta } => {
                if !(*alpha > 0.0 && *beta >= 0.0 && alpha.is_finite() && beta.is_finite()) {
                    return descriptor(format!("riesz needs α > 0, β ≥ 0 (got {alpha}, {beta})"));
                }
            }
            Self::TrigubEven { r } => {
                if *r == 0 || r % 2 != 0 {
                    return descriptor(format!("trigub_even needs an even r ≥ 2 (got {r})"));
                }
            }
            Self::TrigubOdd { r } => {
                if r % 2 != 1 {
                    return descriptor(format!("trigub_odd needs an odd r (got {r})"));
                }
            }
            Self::Fractional { r } => {
                if !(*r > 0.0 && r.is_finite()) || r.fract() == 0.0 {
                    return descriptor(format!("fractional needs a non-integer r > 0 (got {r})"));
                }
            }
            Self::BochnerRiesz { r, delta } => {
                if !(*r > 0.0 && *delta >= 0.0) {
                    return descriptor(format!("bochner_riesz needs r > 0, δ ≥ 0 (got {r}, {delta})"));
                }
            }
            Self::DirichletPower(dp)
                if (dp.s < 2 || dp.r == 0 || dp.n == 0) => {
                    return descriptor("dirichlet_power needs s ≥ 2, r ≥ 1, n ≥ 1");
                }
            _ => {}
        }
        Ok(())
    }

    /// φ(x).
    pub fn evaluate(&self, x: &[f64]) -> Result<Complex64> {
        if x.is_empty() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("multiplier argument must be a finite point".into()));
        }
        self.validate()?;
        let v = match self {
            Self::Identity => real(1.0),
            Self::Fejer => real(plus_pow(1.0 - radius(x), 1.0)),
            Self::Riesz { alpha, beta } => real(plus_pow(1.0 - radius(x).powf(*alpha), *beta)),
            Self::RieszAxis { alpha, beta } => {
                let s: f64 = x.iter().map(|v| v.abs().powf(*alpha)).sum();
                real(plus_pow(1.0 - s, *beta))
            }
            Self::TrigubEven { r } => real(plus_pow(1.0 - radius(x).powi(*r as i32), 1.0)),
            Self::TrigubOdd { r } => {
                need_dim("trigub_odd", x, 1)?;
                let a = x[0].abs();
                let re = plus_pow(1.0 - a.powi(*r as i32 + 1), 1.0);
                let im = a.powi(*r as i32) * plus_pow(1.0 - a, 1.0) * x[0].signum();
                Complex64::new(re, if x[0] == 0.0 { 0.0 } else { im })
            }
            Self::Fractional { r } => {
                need_dim("fractional", x, 1)?;
                let a = x[0].abs();
                let re = plus_pow(1.0 - a.powf(*r), 1.0);
                let im = -(r * PI / 2.0).tan() * a.powf(*r) * plus_pow(1.0 - a, 1.0);
                Complex64::new(re, if x[0] == 0.0 { 0.0 } else { im * x[0].signum() })
            }
            Self::BochnerRiesz { r, delta } => {
                real(plus_pow(1.0 - radius(x).powf(2.0 * r), *delta))
            }
            Self::Marcinkiewicz2d { n } => {
                need_dim("marcinkiewicz_2d", x, 2)?;
                let m = x[0].abs().max(x[1].abs());
                let hits = (0..=*n).filter(|&nu| m <= nu as f64).count();
                real(hits as f64 / (*n as f64 + 1.0))
            }
            Self::DirichletPower(dp) => {
                need_dim("dirichlet_power", x, 1)?;
                real(dp.value(x[0]))
            }
            Self::Custom(t) => t.value(radius(x)),
        };
        Ok(v)
    }

    /// Rejects multipliers whose construction does not fit a grid.
    pub fn check_fits(&self, shape: Shape) -> Result<()> {
        if let Self::DirichletPower(dp) = self {
            let degree = dp.s as usize * dp.n as usize;
            if degree > shape.resolution() / 2 {
                return descriptor(format!(
                    "kernel degree s·n = {degree} exceeds N/2 = {}",
                    shape.resolution() / 2
                ));
            }
        }
        Ok(())
    }

    /// Whether φ is real on the real line (needed by the root scan).
    pub fn is_real_valued(&self) -> bool {
        !matches!(self, Self::TrigubOdd { .. } | Self::Fractional { .. })
    }
}

impl fmt::Display for MultiplierDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity => f.write_str("identity"),
            Self::Fejer => f.write_str("fejer"),
            Self::Riesz { alpha, beta } => write!(f, "riesz:{alpha}:{beta}"),
            Self::RieszAxis { alpha, beta } => write!(f, "riesz_axis:{alpha}:{beta}"),
            Self::TrigubEven { r } => write!(f, "trigub_even:{r}"),
            Self::TrigubOdd { r } => write!(f, "trigub_odd:{r}"),
            Self::Fractional { r } => write!(f, "fractional:{r}"),
            Self::BochnerRiesz { r, delta } => write!(f, "bochner_riesz:{r}:{delta}"),
            Self::Marcinkiewicz2d { n } => write!(f, "marcinkiewicz_2d:{n}"),
            Self::DirichletPower(dp) => write!(f, "dirichlet_power:{}:{}:{}", dp.s, dp.r, dp.n),
            Self::Custom(t) => write!(f, "custom:{}x{}", t.values.len(), t.step),
        }
    }
}

fn parse_num<T: FromStr>(s: &str, text: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Config(format!("bad parameter `{s}` in `{text}`")))
}

impl FromStr for MultiplierDescriptor {
    type Err = Error;

    /// Parses `name[:param…]`, e.g. `riesz:2:1`, `trigub_odd:3`,
    /// `dirichlet_power:4:2:16`.
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        let args = &parts[1..];
        let want = |n: usize| -> Result<()> {
            if args.len() != n {
                return Err(Error::Config(format!("`{text}` expects {n} parameter(s)")));
            }
            Ok(())
        };
        match parts[0] {
            "identity" => {
                want(0)?;
                Ok(Self::Identity)
            }
            "fejer" => {
                want(0)?;
                Ok(Self::Fejer)
            }
            "riesz" => {
                want(2)?;
                Self::riesz(parse_num(args[0], text)?, parse_num(args[1], text)?)
            }
            "riesz_axis" => {
                want(2)?;
                Self::riesz_axis(parse_num(args[0], text)?, parse_num(args[1], text)?)
            }
            "trigub_even" => {
                want(1)?;
                Self::trigub_even(parse_num(args[0], text)?)
            }
            "trigub_odd" => {
                want(1)?;
                Self::trigub_odd(parse_num(args[0], text)?)
            }
            "trigub" => {
                want(1)?;
                Self::trigub(parse_num(args[0], text)?)
            }
            "fractional" => {
                want(1)?;
                Self::fractional(parse_num(args[0], text)?)
            }
            "bochner_riesz" => {
                want(2)?;
                Self::bochner_riesz(parse_num(args[0], text)?, parse_num(args[1], text)?)
            }
            "marcinkiewicz_2d" => {
                want(1)?;
                Ok(Self::marcinkiewicz_2d(parse_num(args[0], text)?))
            }
            "dirichlet_power" => {
                want(3)?;
                dirichlet_power_multiplier(
                    parse_num(args[0], text)?,
                    parse_num(args[1], text)?,
                    parse_num(args[2], text)?,
                )
            }
            other => Err(Error::Config(format!("unknown multiplier `{other}`"))),
        }
    }
}

/// Multiplier of the method τ_{s,r,n}.
///
/// The kernel coefficients come from s − 1 exact self-convolutions of the
/// Dirichlet coefficients 1_{|k|≤n}, normalized to κ(0) = 1. Arguments are in
/// the k/n variable, so the value at k/n is Σ_{ν=1}^r (−1)^{ν+1} C(r,ν) κ(νk).
/// Between integers κ is interpolated linearly.
pub fn dirichlet_power_multiplier(s: u32, r: u32, n: u32) -> Result<MultiplierDescriptor> {
    if s < 2 || r == 0 || n == 0 {
        return descriptor(format!("dirichlet_power needs s ≥ 2, r ≥ 1, n ≥ 1 (got {s}, {r}, {n})"));
    }
    let width = 2 * n as usize + 1;
    let mut counts: Vec<u128> = vec![1; width];
    for _ in 1..s {
        let len = counts.len() + width - 1;
        let mut prefix = vec![0u128; counts.len() + 1];
        for (i, c) in counts.iter().enumerate() {
            prefix[i + 1] = prefix[i]
                .checked_add(*c)
                .ok_or_else(|| Error::Descriptor("kernel coefficients overflow".into()))?;
        }
        let mut next = vec![0u128; len];
        for (i, v) in next.iter_mut().enumerate() {
            let hi = i.min(counts.len() - 1);
            let lo = i.saturating_sub(width - 1);
            *v = prefix[hi + 1] - prefix[lo];
        }
        counts = next;
    }
    let centre = counts.len() / 2;
    let peak = counts[centre] as f64;
    let kernel: Vec<f64> = counts[centre..].iter().map(|&c| c as f64 / peak).collect();
    Ok(MultiplierDescriptor::DirichletPower(DirichletPower { s, r, n, kernel: Arc::new(kernel) }))
}

/// Degree attached to ε, n = ⌊1/ε⌋.
pub fn degree_for(eps: f64) -> u64 {
    (1.0 / eps + 1e-9).floor() as u64
}

/// Φ_ε f together with ‖f − Φ_ε f‖_p.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub mean: GridFunction,
    pub error: f64,
}

pub fn approximate(
    f: &GridFunction,
    phi: &MultiplierDescriptor,
    eps: f64,
    p: LebesgueExponent,
) -> Result<Approximation> {
    let s = analyze(f);
    let mean = apply_multiplier(&s, phi, eps)?;
    let error = spectrum_norm(&s.sub(&mean)?, p);
    Ok(Approximation { mean: synthesize(&mean), error })
}

/// ‖f − Φ_ε f‖_p computed from the spectrum.
pub fn approximation_error(
    s: &Spectrum,
    phi: &MultiplierDescriptor,
    eps: f64,
    p: LebesgueExponent,
) -> Result<f64> {
    let mean = apply_multiplier(s, phi, eps)?;
    Ok(spectrum_norm(&s.sub(&mean)?, p))
}

/// Default scan interval for roots of φ_n(x) = 1.
pub fn default_root_interval(phi: &MultiplierDescriptor) -> (f64, f64) {
    match phi {
        MultiplierDescriptor::DirichletPower(dp) => (0.0, PI * dp.s as f64),
        _ => (0.0, PI),
    }
}

/// Positive roots of φ(x) = 1 in (a, b): sign-change scan at `density`
/// points, then bisection to 1e−10. Flat stretches where |φ − 1| ≤ 1e−12
/// (such as the neighbourhood of 0) are not reported.
pub fn find_unit_roots(
    phi: &MultiplierDescriptor,
    interval: (f64, f64),
    density: usize,
) -> Result<Vec<f64>> {
    let (a, b) = interval;
    if !(b > a) || density < 2 {
        return Err(Error::Domain("root scan needs a < b and at least two points".into()));
    }
    let g = |x: f64| -> Result<f64> {
        let v = phi.evaluate(&[x])?;
        if v.im.abs() > 1e-12 {
            return Err(Error::Domain(format!("{phi} is not real at x = {x}")));
        }
        Ok(v.re - 1.0)
    };
    let sign = |v: f64| if v.abs() <= 1e-12 { 0 } else if v < 0.0 { -1 } else { 1 };
    let step = (b - a) / density as f64;
    let mut roots = Vec::new();
    let mut last: Option<(f64, i32)> = None;
    for i in 1..density {
        let x1 = a + step * i as f64;
        let s1 = sign(g(x1)?);
        if s1 == 0 {
            continue;
        }
        if let Some((x0, s0)) = last {
            if s0 != s1 {
                let (mut lo, mut hi) = (x0, x1);
                while hi - lo > 1e-10 {
                    let mid = 0.5 * (lo + hi);
                    let sm = sign(g(mid)?);
                    if sm == s0 {
                        lo = mid;
                    } else if sm == s1 {
                        hi = mid;
                    } else {
                        lo = mid;
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
        }
        last = Some((x1, s1));
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Spectrum;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn catalog_is_one_at_origin() {
        let cases = [
            "identity",
            "fejer",
            "riesz:2:1",
            "riesz:1.5:0",
            "riesz_axis:2:1",
            "trigub_even:2",
            "trigub_odd:3",
            "fractional:0.5",
            "bochner_riesz:1:0.5",
            "dirichlet_power:4:2:8",
        ];
        for s in cases {
            let m: MultiplierDescriptor = s.parse().unwrap();
            assert_eq!(m.evaluate(&[0.0]).unwrap(), c(1.0, 0.0), "{s}");
            assert_eq!(m.to_string(), s);
        }
        let m = MultiplierDescriptor::marcinkiewicz_2d(3);
        assert_eq!(m.evaluate(&[0.0, 0.0]).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn riesz_support_boundary() {
        let m = MultiplierDescriptor::riesz(2.0, 1.0).unwrap();
        assert_eq!(m.evaluate(&[1.0]).unwrap(), c(0.0, 0.0));
        assert_eq!(m.evaluate(&[0.6, 0.8]).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn trigub_odd_value() {
        let m = MultiplierDescriptor::trigub_odd(1).unwrap();
        let v = m.evaluate(&[0.5]).unwrap();
        assert!((v - c(0.75, 0.25)).norm() < 1e-15);
        let v = m.evaluate(&[-0.5]).unwrap();
        assert!((v - c(0.75, -0.25)).norm() < 1e-15);
    }

    #[test]
    fn parameter_domains() {
        assert!(MultiplierDescriptor::riesz(0.0, 1.0).is_err());
        assert!(MultiplierDescriptor::riesz(1.0, -1.0).is_err());
        assert!(MultiplierDescriptor::fractional(2.0).is_err());
        assert!(MultiplierDescriptor::trigub_even(3).is_err());
        assert!(MultiplierDescriptor::trigub_odd(2).is_err());
        assert!("nope".parse::<MultiplierDescriptor>().is_err());
        let bad = MultiplierDescriptor::Riesz { alpha: -1.0, beta: 1.0 };
        assert!(bad.evaluate(&[0.1]).is_err());
        assert!(MultiplierDescriptor::trigub_odd(1).unwrap().evaluate(&[0.1, 0.1]).is_err());
    }

    #[test]
    fn marcinkiewicz_matches_closed_form() {
        // Brute force over square partial-sum indicators against (1 − m/(n+1))₊.
        for n in [0u32, 1, 2, 5, 9] {
            let m = MultiplierDescriptor::marcinkiewicz_2d(n);
            for k1 in -12i64..=12 {
                for k2 in -12i64..=12 {
                    let mx = k1.abs().max(k2.abs()) as f64;
                    let want = (1.0 - mx / (n as f64 + 1.0)).max(0.0);
                    let got = m.evaluate(&[k1 as f64, k2 as f64]).unwrap().re;
                    assert!((got - want).abs() < 1e-15);
                }
            }
        }
        let m = MultiplierDescriptor::marcinkiewicz_2d(1);
        assert_eq!(m.evaluate(&[1.0, 1.0]).unwrap(), c(0.5, 0.0));
    }

    fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn dirichlet_power_small_case() {
        let m = dirichlet_power_multiplier(2, 1, 1).unwrap();
        let MultiplierDescriptor::DirichletPower(dp) = &m else { panic!() };
        let want = [3.0, 2.0, 1.0].map(|v| v / 3.0);
        for (a, b) in dp.kernel().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((m.evaluate(&[1.0]).unwrap().re - 2.0 / 3.0).abs() < 1e-15);
        assert!(!dp.standard_range());
    }

    #[test]
    fn dirichlet_power_matches_float_convolution() {
        let (s, n) = (5u32, 6usize);
        let ones = vec![1.0; 2 * n + 1];
        let mut acc = ones.clone();
        for _ in 1..s {
            acc = convolve(&acc, &ones);
        }
        let centre = acc.len() / 2;
        let m = dirichlet_power_multiplier(s, 3, n as u32).unwrap();
        let MultiplierDescriptor::DirichletPower(dp) = &m else { panic!() };
        assert_eq!(dp.kernel().len(), s as usize * n + 1);
        for (k, v) in dp.kernel().iter().enumerate() {
            assert!((v - acc[centre + k] / acc[centre]).abs() < 1e-14);
        }
        // vanishes beyond the kernel degree
        assert_eq!(dp.kernel_at((s as usize * n) as f64 + 0.5), 0.0);
        assert_eq!(m.evaluate(&[s as f64 + 0.1]).unwrap(), c(0.0, 0.0));
        // combination at k/n: Σ (−1)^{ν+1} C(3,ν) κ(νk)
        let k = 2usize;
        let want = 3.0 * dp.kernel()[k] - 3.0 * dp.kernel()[2 * k] + dp.kernel()[3 * k];
        assert!((m.evaluate(&[k as f64 / n as f64]).unwrap().re - want).abs() < 1e-13);
    }

    #[test]
    fn dirichlet_power_overflow_is_reported() {
        let m = dirichlet_power_multiplier(4, 2, 8).unwrap();
        let s = Spectrum::zeros(1, 32).unwrap();
        assert!(apply_multiplier(&s, &m, 1.0 / 8.0).is_err());
        let s = Spectrum::zeros(1, 64).unwrap();
        assert!(apply_multiplier(&s, &m, 1.0 / 8.0).is_ok());
    }

    #[test]
    fn means_on_single_harmonics() {
        let f = GridFunction::from_real_fn(1, 32, |x| x[0].cos()).unwrap();
        let a = approximate(&f, &MultiplierDescriptor::Fejer, 0.5, LebesgueExponent::TWO).unwrap();
        assert!((a.error - 0.5 * 0.5f64.sqrt()).abs() < 1e-13);
        let half = f.scale(c(0.5, 0.0));
        assert!(a.mean.max_abs_diff(&half).unwrap() < 1e-14);

        let e3 = GridFunction::from_fn(1, 32, |x| Complex64::from_polar(1.0, 3.0 * x[0])).unwrap();
        let r = MultiplierDescriptor::riesz(2.0, 1.0).unwrap();
        for p in [LebesgueExponent::ONE, LebesgueExponent::TWO, LebesgueExponent::INF] {
            let a = approximate(&e3, &r, 0.25, p).unwrap();
            assert!((a.error - 9.0 / 16.0).abs() < 1e-13, "{p}: {}", a.error);
        }
        let e1 = Spectrum::from_terms(1, 16, &[(vec![1], c(1.0, 0.0))]).unwrap();
        let out = apply_multiplier(&e1, &r, 0.5).unwrap();
        assert!((out.coefficient(&[1]) - c(0.75, 0.0)).norm() < 1e-15);
        let out = apply_multiplier(&e1, &MultiplierDescriptor::Identity, 0.3).unwrap();
        assert_eq!(out, e1);

        let one = GridFunction::constant(1, 16, c(2.0, 0.0)).unwrap();
        for m in ["fejer", "riesz:2:1", "trigub_odd:1", "fractional:1.5"] {
            let m: MultiplierDescriptor = m.parse().unwrap();
            assert!(approximate(&one, &m, 0.1, LebesgueExponent::INF).unwrap().error < 1e-14);
        }
    }

    #[test]
    fn root_scan() {
        assert!(find_unit_roots(&MultiplierDescriptor::Fejer, (0.0, 1.0), 10_000).unwrap().is_empty());
        let m = dirichlet_power_multiplier(4, 2, 64).unwrap();
        let roots = find_unit_roots(&m, default_root_interval(&m), 10_000).unwrap();
        assert!(roots.iter().any(|&x| x > 0.0 && x < PI), "{roots:?}");
        let finer = find_unit_roots(&m, default_root_interval(&m), 20_000).unwrap();
        assert_eq!(roots.len(), finer.len());
        for (a, b) in roots.iter().zip(&finer) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!(find_unit_roots(&MultiplierDescriptor::trigub_odd(1).unwrap(), (0.0, 1.0), 100).is_err());
    }

    #[test]
    fn degree_map() {
        assert_eq!(degree_for(1.0 / 8.0), 8);
        assert_eq!(degree_for(0.3), 3);
        assert_eq!(degree_for(1.0 / 3.0), 3);
    }
}
