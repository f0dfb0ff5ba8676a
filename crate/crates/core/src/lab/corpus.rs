//! Test functions with known smoothness, built from explicit coefficients.

use crate::error::{Error, Result};
use crate::spectral::{synthesize, GridFunction, Spectrum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Catalog line: syntax, native dimension, description.
pub struct CatalogEntry {
    pub syntax: &'static str,
    pub dim: usize,
    pub about: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { syntax: "abs_sin", dim: 1, about: "|sin x|, cosine series 2/π − (4/π)Σcos(2mx)/(4m²−1)" },
    CatalogEntry { syntax: "weierstrass:γ", dim: 1, about: "Σ 2^{−jγ}cos(2^j x) over 2^j < N/2" },
    CatalogEntry { syntax: "sawtooth", dim: 1, about: "(π − x)/2 on (0, 2π) = Σ sin(kx)/k" },
    CatalogEntry { syntax: "gaussian_smooth", dim: 1, about: "f̂_k = exp(−k²/32)" },
    CatalogEntry { syntax: "random_trig:deg[:seed]", dim: 1, about: "real trigonometric polynomial, uniform coefficients" },
    CatalogEntry { syntax: "random_trig_2d:deg[:seed]", dim: 2, about: "real polynomial on the square |k_j| ≤ deg" },
    CatalogEntry { syntax: "radial_2d:γ", dim: 2, about: "f̂_k = (1 + |k|²)^{−(2+γ)/2} for |k| < N/2" },
    CatalogEntry { syntax: "tensor_2d:γ1:γ2", dim: 2, about: "product of two lacunary series" },
    CatalogEntry { syntax: "const[:c]", dim: 1, about: "the constant c (default 1)" },
];

/// A parsed corpus name.
#[derive(Debug, Clone, PartialEq)]
pub enum CorpusFunction {
    AbsSin,
    Weierstrass { gamma: f64 },
    Sawtooth,
    GaussianSmooth,
    RandomTrig { degree: u32, seed: Option<u64> },
    RandomTrig2d { degree: u32, seed: Option<u64> },
    Radial2d { gamma: f64 },
    Tensor2d { gamma1: f64, gamma2: f64 },
    Const(f64),
}

fn num<T: FromStr>(s: &str, whole: &str) -> Result<T> {
    s.parse().map_err(|_| Error::UnknownFunction(whole.to_string()))
}

impl FromStr for CorpusFunction {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        let bad = || Error::UnknownFunction(text.to_string());
        let f = match (parts[0], parts.len()) {
            ("abs_sin", 1) => Self::AbsSin,
            ("weierstrass", 2) => Self::Weierstrass { gamma: num(parts[1], text)? },
            ("sawtooth", 1) => Self::Sawtooth,
            ("gaussian_smooth", 1) => Self::GaussianSmooth,
            ("random_trig", 2 | 3) => Self::RandomTrig {
                degree: num(parts[1], text)?,
                seed: parts.get(2).map(|s| num(s, text)).transpose()?,
            },
            ("random_trig_2d", 2 | 3) => Self::RandomTrig2d {
                degree: num(parts[1], text)?,
                seed: parts.get(2).map(|s| num(s, text)).transpose()?,
            },
            ("radial_2d", 2) => Self::Radial2d { gamma: num(parts[1], text)? },
            ("tensor_2d", 3) => Self::Tensor2d { gamma1: num(parts[1], text)?, gamma2: num(parts[2], text)? },
            ("const", 1) => Self::Const(1.0),
            ("const", 2) => Self::Const(num(parts[1], text)?),
            _ => return Err(bad()),
        };
        let positive = |g: f64| g > 0.0 && g.is_finite();
        let ok = match &f {
            Self::Weierstrass { gamma } | Self::Radial2d { gamma } => positive(*gamma),
            Self::Tensor2d { gamma1, gamma2 } => positive(*gamma1) && positive(*gamma2),
            Self::Const(c) => c.is_finite(),
            _ => true,
        };
        if !ok {
            return Err(bad());
        }
        Ok(f)
    }
}

impl fmt::Display for CorpusFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AbsSin => f.write_str("abs_sin"),
            Self::Weierstrass { gamma } => write!(f, "weierstrass:{gamma}"),
            Self::Sawtooth => f.write_str("sawtooth"),
            Self::GaussianSmooth => f.write_str("gaussian_smooth"),
            Self::RandomTrig { degree, seed: Some(s) } => write!(f, "random_trig:{degree}:{s}"),
            Self::RandomTrig { degree, seed: None } => write!(f, "random_trig:{degree}"),
            Self::RandomTrig2d { degree, seed: Some(s) } => write!(f, "random_trig_2d:{degree}:{s}"),
            Self::RandomTrig2d { degree, seed: None } => write!(f, "random_trig_2d:{degree}"),
            Self::Radial2d { gamma } => write!(f, "radial_2d:{gamma}"),
            Self::Tensor2d { gamma1, gamma2 } => write!(f, "tensor_2d:{gamma1}:{gamma2}"),
            Self::Const(c) => write!(f, "const:{c}"),
        }
    }
}

type Terms = Vec<(Vec<i64>, Complex64)>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn lacunary(gamma: f64, n: usize) -> Vec<(i64, f64)> {
    (0..)
        .map(|j| (1i64 << j, 2f64.powf(-(j as f64) * gamma)))
        .take_while(|(k, _)| (*k as usize) < n / 2)
        .collect()
}

impl CorpusFunction {
    pub fn native_dim(&self) -> usize {
        match self {
            Self::RandomTrig2d { .. } | Self::Radial2d { .. } | Self::Tensor2d { .. } => 2,
            _ => 1,
        }
    }

    /// Seed used by random entries; `fallback` when the name has none.
    fn seed(&self, fallback: u64) -> u64 {
        match self {
            Self::RandomTrig { seed, .. } | Self::RandomTrig2d { seed, .. } => seed.unwrap_or(fallback),
            _ => fallback,
        }
    }

    fn terms(&self, n: usize, fallback_seed: u64) -> Result<Terms> {
        let band = (n / 2) as i64;
        let mut t: Terms = Vec::new();
        match self {
            Self::AbsSin => {
                t.push((vec![0], c(2.0 / PI, 0.0)));
                for m in 1.. {
                    if 2 * m >= band {
                        break;
                    }
                    let a = -(2.0 / PI) / (4.0 * (m * m) as f64 - 1.0);
                    t.push((vec![2 * m], c(a, 0.0)));
                    t.push((vec![-2 * m], c(a, 0.0)));
                }
            }
            Self::Weierstrass { gamma } => {
                for (k, a) in lacunary(*gamma, n) {
                    t.push((vec![k], c(0.5 * a, 0.0)));
                    t.push((vec![-k], c(0.5 * a, 0.0)));
                }
            }
            Self::Sawtooth => {
                for k in 1..band {
                    t.push((vec![k], c(0.0, -0.5 / k as f64)));
                    t.push((vec![-k], c(0.0, 0.5 / k as f64)));
                }
            }
            Self::GaussianSmooth => {
                for k in 1 - band..band {
                    t.push((vec![k], c((-((k * k) as f64) / 32.0).exp(), 0.0)));
                }
            }
            Self::RandomTrig { degree, .. } => {
                let deg = *degree as i64;
                if deg >= band {
                    return Err(Error::Domain(format!("degree {deg} does not fit N = {n}")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed(fallback_seed));
                t.push((vec![0], c(rng.gen_range(-1.0..1.0), 0.0)));
                for k in 1..=deg {
                    let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    t.push((vec![k], z));
                    t.push((vec![-k], z.conj()));
                }
            }
            Self::RandomTrig2d { degree, .. } => {
                let deg = *degree as i64;
                if deg >= band {
                    return Err(Error::Domain(format!("degree {deg} does not fit N = {n}")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed(fallback_seed));
                t.push((vec![0, 0], c(rng.gen_range(-1.0..1.0), 0.0)));
                for k1 in 0..=deg {
                    for k2 in -deg..=deg {
                        if k1 == 0 && k2 <= 0 {
                            continue;
                        }
                        let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                        t.push((vec![k1, k2], z));
                        t.push((vec![-k1, -k2], z.conj()));
                    }
                }
            }
            Self::Radial2d { gamma } => {
                for k1 in 1 - band..band {
                    for k2 in 1 - band..band {
                        let r2 = (k1 * k1 + k2 * k2) as f64;
                        if r2 < (band * band) as f64 {
                            t.push((vec![k1, k2], c((1.0 + r2).powf(-(2.0 + gamma) / 2.0), 0.0)));
                        }
                    }
                }
            }
            Self::Tensor2d { gamma1, gamma2 } => {
                for (k, a) in lacunary(*gamma1, n) {
                    for (l, b) in lacunary(*gamma2, n) {
                        for (s1, s2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                            t.push((vec![s1 * k, s2 * l], c(0.25 * a * b, 0.0)));
                        }
                    }
                }
            }
            Self::Const(v) => t.push((vec![0], c(*v, 0.0))),
        }
        Ok(t)
    }

    /// Spectrum on the d-dimensional grid of resolution N. A function of
    /// fewer variables depends on the leading coordinates.
    pub fn spectrum(&self, dim: usize, n: usize, fallback_seed: u64) -> Result<Spectrum> {
        let native = self.native_dim();
        if dim < native {
            return Err(Error::Domain(format!("{self} needs d ≥ {native} (got {dim})")));
        }
        let terms: Terms = self
            .terms(n, fallback_seed)?
            .into_iter()
            .map(|(mut k, v)| {
                k.resize(dim, 0);
                (k, v)
            })
            .collect();
        Spectrum::from_terms(dim, n, &terms)
    }
}

/// Samples the named corpus function on the grid.
pub fn corpus_generate(name: &str, dim: usize, n: usize, seed: u64) -> Result<GridFunction> {
    Ok(synthesize(&name.parse::<CorpusFunction>()?.spectrum(dim, n, seed)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive;
    use crate::spectral::analyze;

    #[test]
    fn abs_sin_coefficients() {
        let s = CorpusFunction::AbsSin.spectrum(1, 64, 0).unwrap();
        for k in [0i64, 2, 4, 6, -8] {
            let want = adaptive(|x: f64| x.sin().abs() * (k as f64 * x).cos(), -PI, PI, 1e-14, 1e-12).value / (2.0 * PI);
            assert!((s.coefficient(&[k]).re - want).abs() < 1e-10, "{k}");
        }
        assert_eq!(s.coefficient(&[3]), c(0.0, 0.0));
    }

    #[test]
    fn names_round_trip() {
        for name in ["abs_sin", "weierstrass:0.5", "random_trig:8:3", "tensor_2d:0.5:1.5", "const:2", "random_trig_2d:4"] {
            assert_eq!(name.parse::<CorpusFunction>().unwrap().to_string(), name);
        }
        for bad in ["nope", "weierstrass", "weierstrass:-1", "random_trig:x", "abs_sin:1"] {
            assert!(matches!(bad.parse::<CorpusFunction>(), Err(Error::UnknownFunction(_))), "{bad}");
        }
    }

    #[test]
    fn random_is_reproducible_and_real() {
        let a = corpus_generate("random_trig:8:5", 1, 64, 0).unwrap();
        let b = corpus_generate("random_trig:8:5", 1, 64, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.is_real(1e-12));
        let c = corpus_generate("random_trig:8", 1, 64, 1).unwrap();
        assert_ne!(a, c);
        assert!(corpus_generate("random_trig_2d:3:1", 2, 16, 0).unwrap().is_real(1e-12));
        assert!(corpus_generate("random_trig:40", 1, 64, 0).is_err());
    }

    #[test]
    fn weierstrass_partial_sum() {
        let s = CorpusFunction::Weierstrass { gamma: 0.5 }.spectrum(1, 64, 0).unwrap();
        let nonzero: Vec<_> = s.iter().filter(|(_, v)| v.norm() > 0.0).map(|(k, _)| k[0]).collect();
        assert_eq!(nonzero.len(), 10);
        assert!((s.coefficient(&[16]).re - 0.5 * 0.25).abs() < 1e-15);
        let f = synthesize(&s);
        let x0 = f.shape().node(0);
        let direct: f64 = (0..5).map(|j| 2f64.powf(-0.5 * j as f64) * (2f64.powi(j) * x0).cos()).sum();
        assert!((f.samples()[0].re - direct).abs() < 1e-12);
    }

    #[test]
    fn lifting() {
        let f = corpus_generate("sawtooth", 2, 16, 0).unwrap();
        let s = analyze(&f);
        assert!(s.coefficient(&[1, 0]).norm() > 0.1);
        assert!(s.coefficient(&[1, 1]).norm() < 1e-14);
        assert!(corpus_generate("radial_2d:1", 1, 16, 0).is_err());
    }
}
