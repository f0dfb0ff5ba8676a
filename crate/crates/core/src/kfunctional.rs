//! Differential operators as symbols, K-functionals and the three-condition check.

use crate::error::{domain, Error, Result};
use crate::spectral::{analyze, apply_multiplier, spectrum_norm, GridFunction, LebesgueExponent, Spectrum};
use crate::summation::MultiplierDescriptor;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Symbol μ_k of a differential operator; μ_0 = 0.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSymbol {
    /// |k|^r e^{iπr/2·sign k}, i.e. (ik)^r for integer r; d = 1.
    Derivative(f64),
    /// (−1)^r|k|^{2r}, the symbol of Δ^r.
    LaplacianPower(u32),
    /// Σ_j |k_j|^α.
    AxisPower(f64),
    /// max_j |k_j|.
    MaxDegree,
    /// |k|^α.
    RadialPower(f64),
    /// Values indexed by the rounded Euclidean length of k.
    Custom(Arc<Vec<Complex64>>),
}

impl OperatorSymbol {
    pub fn evaluate(&self, k: &[f64]) -> Result<Complex64> {
        if k.iter().all(|v| *v == 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let radius = k.iter().map(|v| v * v).sum::<f64>().sqrt();
        let v = match self {
            Self::Derivative(r) => {
                if k.len() != 1 {
                    return domain("the derivative symbol is defined for d = 1");
                }
                Complex64::from_polar(k[0].abs().powf(*r), 0.5 * PI * r * k[0].signum())
            }
            Self::LaplacianPower(r) => {
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(sign * radius.powi(2 * *r as i32), 0.0)
            }
            Self::AxisPower(a) => Complex64::new(k.iter().map(|v| v.abs().powf(*a)).sum(), 0.0),
            Self::MaxDegree => Complex64::new(k.iter().fold(0.0f64, |m, v| m.max(v.abs())), 0.0),
            Self::RadialPower(a) => Complex64::new(radius.powf(*a), 0.0),
            Self::Custom(t) => {
                let i = radius.round() as usize;
                *t.get(i)
                    .ok_or_else(|| Error::Domain(format!("custom symbol table has no entry for |k| = {i}")))?
            }
        };
        Ok(v)
    }

    fn check_params(&self) -> Result<()> {
        match self {
            Self::Derivative(r) | Self::AxisPower(r) | Self::RadialPower(r) if !(*r > 0.0 && r.is_finite()) => {
                domain(format!("operator order must be positive (got {r})"))
            }
            Self::LaplacianPower(0) => domain("laplacian power must be at least 1"),
            _ => Ok(()),
        }
    }

    /// Checks μ_k ≠ 0 off the origin and growth toward the edge of the lattice.
    ///
    /// Nyquist slots are skipped.
    pub fn validate(&self, shape: crate::spectral::Shape) -> Result<()> {
        self.check_params()?;
        let half = (shape.resolution() / 2) as i64;
        let (mut inner, mut outer) = (f64::INFINITY, f64::INFINITY);
        for lin in 0..shape.len() {
            let k = shape.frequencies(lin);
            let k = &k[..shape.dim()];
            if k.iter().any(|v| *v == -half) || k.iter().all(|v| *v == 0) {
                continue;
            }
            let kf: Vec<f64> = k.iter().map(|v| *v as f64).collect();
            let m = self.evaluate(&kf)?.norm();
            if m == 0.0 {
                return domain(format!("operator symbol vanishes at k = {k:?}"));
            }
            let deg = k.iter().map(|v| v.abs()).max().unwrap_or(0);
            if deg == 1 {
                inner = inner.min(m);
            }
            if deg == half - 1 {
                outer = outer.min(m);
            }
        }
        if half > 2 && !(outer > inner) {
            return domain("operator symbol does not grow on the lattice");
        }
        Ok(())
    }
}

/// μ_k f̂_k.
pub fn operator_apply(s: &Spectrum, op: &OperatorSymbol) -> Result<Spectrum> {
    op.check_params()?;
    s.try_map_symbol(|k| op.evaluate(k))
}

/// Candidates bounding K(t; f, L_p, W(D)) from above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KUpperBound {
    /// ‖f − Φ_ε f‖_p + t‖D Φ_ε f‖_p.
    pub via_method: f64,
    /// g = 0: ‖f‖_p.
    pub zero_candidate: f64,
    /// g = f: t‖D f‖_p.
    pub identity_candidate: f64,
}

impl KUpperBound {
    pub fn best(&self) -> f64 {
        self.via_method.min(self.zero_candidate).min(self.identity_candidate)
    }
}

/// Upper bound for K(ε; f) through the splitting g = Φ_ε f.
pub fn k_upper_bound(
    f: &GridFunction,
    eps: f64,
    p: LebesgueExponent,
    op: &OperatorSymbol,
    phi: &MultiplierDescriptor,
) -> Result<KUpperBound> {
    k_upper_bound_scaled(&analyze(f), eps, eps, p, op, phi)
}

/// As `k_upper_bound` with the method run at ε and the K parameter t.
pub fn k_upper_bound_scaled(
    s: &Spectrum,
    eps: f64,
    t: f64,
    p: LebesgueExponent,
    op: &OperatorSymbol,
    phi: &MultiplierDescriptor,
) -> Result<KUpperBound> {
    if !(t >= 0.0) {
        return domain("K parameter must be nonnegative");
    }
    let mean = apply_multiplier(s, phi, eps)?;
    let err = spectrum_norm(&s.sub(&mean)?, p);
    let dmean = spectrum_norm(&operator_apply(&mean, op)?, p);
    Ok(KUpperBound {
        via_method: err + t * dmean,
        zero_candidate: spectrum_norm(s, p),
        identity_candidate: t * spectrum_norm(&operator_apply(s, op)?, p),
    })
}

/// Result of the L₂ K-functional solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KExact {
    pub value: f64,
    /// Stationary λ when the interior solution was used.
    pub lambda: Option<f64>,
    /// Minimum of the objective over the log-spaced λ grid.
    pub grid_value: f64,
    /// value ≤ grid_value·(1 + 1e−6) and the bisection converged.
    pub certified: bool,
}

struct L2Problem {
    a: Vec<f64>,
    m: Vec<f64>,
    eps: f64,
}

impl L2Problem {
    /// Objective at t_k = 1/(1 + λm_k).
    fn objective(&self, lambda: f64) -> f64 {
        let (mut u, mut v) = (0.0, 0.0);
        for (a, m) in self.a.iter().zip(&self.m) {
            let t = 1.0 / (1.0 + lambda * m);
            u += a * (1.0 - t) * (1.0 - t);
            v += a * m * t * t;
        }
        u.sqrt() + self.eps * v.sqrt()
    }

    /// √(Σ a m w / Σ a m² w) with w = (1 + λm)^{−2}; increasing in λ.
    fn ratio(&self, lambda: f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (a, m) in self.a.iter().zip(&self.m) {
            if *m == 0.0 {
                continue;
            }
            let w = 1.0 / ((1.0 + lambda * m) * (1.0 + lambda * m));
            num += a * m * w;
            den += a * m * m * w;
        }
        (num / den).sqrt()
    }
}

const LOG_LAMBDA: f64 = 40.0;

/// K(ε; f, L₂, W(D)) = inf_g ‖f − g‖₂ + ε‖Dg‖₂.
///
/// The optimal g has ĝ_k = t_k f̂_k with t_k = 1/(1 + λ|μ_k|²); λ solves
/// the stationarity condition by bisection in log λ. Endpoint candidates and
/// a log-spaced λ grid guard the result.
pub fn k_exact_l2(f: &GridFunction, eps: f64, op: &OperatorSymbol) -> Result<KExact> {
    k_exact_l2_spectrum(&analyze(f), eps, op)
}

pub fn k_exact_l2_spectrum(s: &Spectrum, eps: f64, op: &OperatorSymbol) -> Result<KExact> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return domain(format!("K parameter {eps} must be finite and nonnegative"));
    }
    let mu = operator_apply(&Spectrum::from_coefficients(s.dim(), s.resolution(), vec![Complex64::new(1.0, 0.0); s.coefficients().len()])?, op)?;
    let mut prob = L2Problem { a: Vec::new(), m: Vec::new(), eps };
    for (c, mk) in s.coefficients().iter().zip(mu.coefficients()) {
        let a = c.norm_sqr();
        if a > 0.0 {
            prob.a.push(a);
            prob.m.push(mk.norm_sqr());
        }
    }
    let norm = prob.a.iter().sum::<f64>().sqrt();
    let nonconst = prob.a.iter().zip(&prob.m).filter(|(_, m)| **m > 0.0).map(|(a, _)| a).sum::<f64>().sqrt();
    let dnorm = prob.a.iter().zip(&prob.m).map(|(a, m)| a * m).sum::<f64>().sqrt();
    let mut value = norm.min(nonconst).min(eps * dnorm);
    if nonconst == 0.0 {
        return Ok(KExact { value: 0.0, lambda: None, grid_value: 0.0, certified: true });
    }

    let grid_value = (0..=2400)
        .map(|i| prob.objective(10f64.powf(-12.0 + 24.0 * i as f64 / 2400.0)))
        .fold(f64::INFINITY, f64::min)
        .min(value);

    let (lo_r, hi_r) = (prob.ratio((-LOG_LAMBDA).exp()), prob.ratio(LOG_LAMBDA.exp()));
    let mut lambda = None;
    let mut converged = true;
    if hi_r > lo_r * (1.0 + 1e-12) && eps > lo_r && eps < hi_r {
        let (mut lo, mut hi) = (-LOG_LAMBDA, LOG_LAMBDA);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if prob.ratio(mid.exp()) < eps {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-14 {
                break;
            }
        }
        let l = (0.5 * (lo + hi)).exp();
        let j = prob.objective(l);
        converged = ((prob.ratio(l) - eps) / eps).abs() < 1e-6;
        if j < value {
            value = j;
            lambda = Some(l);
        }
    }
    if !converged {
        value = value.min(grid_value);
    }
    let certified = converged && value <= grid_value * (1.0 + 1e-6) + 1e-300;
    Ok(KExact { value, lambda, grid_value, certified })
}

/// One (function, ε) row of a condition report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KRow {
    pub function: usize,
    pub eps: f64,
    /// K parameter t = ε^power.
    pub t: f64,
    pub k: f64,
    pub error: f64,
    pub ratio: Option<f64>,
}

/// Observed constants of the three conditions and K-vs-error ratios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KReport {
    pub eps_grid: Vec<f64>,
    pub rows: Vec<KRow>,
    /// max ‖f − Φ_ε f‖ / (t‖Df‖).
    pub a_alpha: f64,
    /// max ‖Φ_ε f‖ / ‖f‖.
    pub a_beta: f64,
    /// max t‖DΦ_ε f‖ / ‖f − Φ_ε f‖; infinite when the numerator is positive
    /// over a vanishing denominator.
    pub a_gamma: f64,
    /// Ratios skipped because the denominator was below 1e−14.
    pub excluded: usize,
}

impl KReport {
    pub fn max_constant(&self) -> f64 {
        self.a_alpha.max(self.a_beta).max(self.a_gamma)
    }

    pub fn passes(&self) -> bool {
        self.max_constant().is_finite()
    }
}

const TINY: f64 = 1e-14;

/// Measures the three constants of the method–operator pair over a corpus.
///
/// The K parameter is t = ε^scale_power: 1 for first-order pairs such as
/// Fejér with |k|, 2r for Riesz(2r, ·) with Δ^r. K is exact for p = 2 and
/// the best candidate bound otherwise.
pub fn lemma_condition_report(
    phi: &MultiplierDescriptor,
    op: &OperatorSymbol,
    p: LebesgueExponent,
    eps_grid: &[f64],
    corpus: &[Spectrum],
    scale_power: f64,
) -> Result<KReport> {
    if corpus.is_empty() {
        return Err(Error::Config("condition report needs a nonempty corpus".into()));
    }
    if eps_grid.is_empty() {
        return Err(Error::Config("condition report needs a nonempty ε grid".into()));
    }
    let mut rep = KReport {
        eps_grid: eps_grid.to_vec(),
        rows: Vec::new(),
        a_alpha: 0.0,
        a_beta: 0.0,
        a_gamma: 0.0,
        excluded: 0,
    };
    let bump = |acc: &mut f64, num: f64, den: f64, excluded: &mut usize| {
        if den < TINY {
            *excluded += 1;
            if num >= TINY {
                *acc = f64::INFINITY;
            }
        } else {
            *acc = acc.max(num / den);
        }
    };
    for (fi, s) in corpus.iter().enumerate() {
        let fnorm = spectrum_norm(s, p);
        let dfnorm = spectrum_norm(&operator_apply(s, op)?, p);
        for &eps in eps_grid {
            let t = eps.powf(scale_power);
            let mean = apply_multiplier(s, phi, eps)?;
            let error = spectrum_norm(&s.sub(&mean)?, p);
            let mnorm = spectrum_norm(&mean, p);
            let dmean = spectrum_norm(&operator_apply(&mean, op)?, p);
            bump(&mut rep.a_alpha, error, t * dfnorm, &mut rep.excluded);
            bump(&mut rep.a_beta, mnorm, fnorm, &mut rep.excluded);
            bump(&mut rep.a_gamma, t * dmean, error, &mut rep.excluded);
            let k = match p {
                LebesgueExponent::Finite(2.0) => k_exact_l2_spectrum(s, t, op)?.value,
                _ => k_upper_bound_scaled(s, eps, t, p, op, phi)?.best(),
            };
            let ratio = if error < TINY {
                rep.excluded += 1;
                None
            } else {
                Some(k / error)
            };
            rep.rows.push(KRow { function: fi, eps, t, k, error, ratio });
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single(dim: usize, k: &[i64], v: Complex64) -> Spectrum {
        Spectrum::from_terms(dim, 32, &[(k.to_vec(), v)]).unwrap()
    }

    #[test]
    fn operator_examples() {
        let out = operator_apply(&single(1, &[1], c(1.0, 0.0)), &OperatorSymbol::LaplacianPower(1)).unwrap();
        assert!((out.coefficient(&[1]) - c(-1.0, 0.0)).norm() < 1e-15);
        let out = operator_apply(&single(1, &[1], c(1.0, 0.0)), &OperatorSymbol::Derivative(0.5)).unwrap();
        assert!((out.coefficient(&[1]) - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
        let out = operator_apply(&single(2, &[1, 1], c(1.0, 0.0)), &OperatorSymbol::AxisPower(2.0)).unwrap();
        assert!((out.coefficient(&[1, 1]) - c(2.0, 0.0)).norm() < 1e-15);
        let out = operator_apply(&single(1, &[-3], c(1.0, 0.0)), &OperatorSymbol::Derivative(1.0)).unwrap();
        assert!((out.coefficient(&[-3]) - c(0.0, -3.0)).norm() < 1e-14);
        let out = operator_apply(&single(1, &[0], c(5.0, 0.0)), &OperatorSymbol::MaxDegree).unwrap();
        assert_eq!(out.coefficient(&[0]), c(0.0, 0.0));
    }

    #[test]
    fn operator_validation() {
        let shape = crate::spectral::Shape::new(2, 16).unwrap();
        assert!(OperatorSymbol::LaplacianPower(1).validate(shape).is_ok());
        assert!(OperatorSymbol::MaxDegree.validate(shape).is_ok());
        assert!(OperatorSymbol::Derivative(1.0).validate(shape).is_err());
        let flat = OperatorSymbol::Custom(Arc::new(vec![c(0.0, 0.0); 40]));
        assert!(flat.validate(shape).is_err());
        assert!(OperatorSymbol::RadialPower(-1.0).validate(shape).is_err());
    }

    #[test]
    fn upper_bound_example() {
        let f = GridFunction::from_fn(1, 32, |x| Complex64::from_polar(1.0, x[0])).unwrap();
        let b = k_upper_bound(&f, 0.5, LebesgueExponent::TWO, &OperatorSymbol::Derivative(1.0), &MultiplierDescriptor::Fejer)
            .unwrap();
        assert!((b.via_method - 0.75).abs() < 1e-14);
        assert!((b.identity_candidate - 0.5).abs() < 1e-14);
        assert!((b.best() - 0.5).abs() < 1e-14);
        let one = GridFunction::constant(1, 32, c(2.0, 0.0)).unwrap();
        let b = k_upper_bound(&one, 0.5, LebesgueExponent::INF, &OperatorSymbol::Derivative(1.0), &MultiplierDescriptor::Fejer)
            .unwrap();
        assert!(b.via_method < 1e-14);
    }

    #[test]
    fn exact_single_harmonic() {
        for (k, eps) in [(1i64, 0.5), (3, 0.1), (5, 0.5), (2, 1e-3)] {
            let s = single(1, &[k], c(0.6, -0.8) * 2.0);
            let op = OperatorSymbol::Derivative(1.0);
            let got = k_exact_l2_spectrum(&s, eps, &op).unwrap();
            let want = 2.0 * (eps * k as f64).min(1.0);
            assert!((got.value - want).abs() < 1e-12, "{k} {eps}: {}", got.value);
            assert!(got.certified);
        }
        let one = GridFunction::constant(1, 16, c(1.0, 0.0)).unwrap();
        assert_eq!(k_exact_l2(&one, 0.3, &OperatorSymbol::Derivative(1.0)).unwrap().value, 0.0);
    }

    fn objective(s: &Spectrum, eps: f64, op: &OperatorSymbol, t: &[f64]) -> f64 {
        let (mut u, mut v) = (0.0, 0.0);
        for ((k, c), t) in s.iter().zip(t) {
            let m = op.evaluate(&k[..s.dim()].iter().map(|x| *x as f64).collect::<Vec<_>>()).unwrap().norm_sqr();
            u += c.norm_sqr() * (1.0 - t) * (1.0 - t);
            v += c.norm_sqr() * m * t * t;
        }
        u.sqrt() + eps * v.sqrt()
    }

    #[test]
    fn exact_beats_random_splittings() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let op = OperatorSymbol::Derivative(2.0);
        for _ in 0..20 {
            let terms: Vec<(Vec<i64>, Complex64)> = (0..4)
                .map(|_| (vec![rng.gen_range(-7..=7)], c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
                .collect();
            let s = Spectrum::from_terms(1, 32, &terms).unwrap();
            let eps = 10f64.powf(rng.gen_range(-3.0..0.0));
            let k = k_exact_l2_spectrum(&s, eps, &op).unwrap();
            assert!(k.certified);
            for _ in 0..50 {
                let t: Vec<f64> = (0..32).map(|_| rng.gen_range(0.0..1.0)).collect();
                assert!(k.value <= objective(&s, eps, &op, &t) + 1e-12);
            }
            // complex splittings: ‖f − g‖ + ε‖Dg‖ with arbitrary ĝ
            let f = crate::spectral::synthesize(&s);
            let g: Vec<Complex64> =
                s.coefficients().iter().map(|c| c * c_rand(&mut rng)).collect();
            let gs = Spectrum::from_coefficients(1, 32, g).unwrap();
            let direct = spectrum_norm(&analyze(&f).sub(&gs).unwrap(), LebesgueExponent::TWO)
                + eps * spectrum_norm(&operator_apply(&gs, &op).unwrap(), LebesgueExponent::TWO);
            assert!(k.value <= direct + 1e-12);
            let ub = k_upper_bound_scaled(&s, eps, eps, LebesgueExponent::TWO, &op, &MultiplierDescriptor::riesz(2.0, 1.0).unwrap())
                .unwrap();
            assert!(k.value <= ub.best() + 1e-9);
        }
    }

    fn c_rand(rng: &mut ChaCha8Rng) -> Complex64 {
        c(rng.gen_range(-0.2..1.2), rng.gen_range(-0.5..0.5))
    }

    #[test]
    fn exact_is_monotone_and_homogeneous() {
        let s = Spectrum::from_terms(1, 32, &[(vec![1], c(1.0, 0.0)), (vec![4], c(0.0, 0.5)), (vec![-9], c(0.2, 0.1))]).unwrap();
        let op = OperatorSymbol::Derivative(1.0);
        let mut prev = 0.0;
        for i in 0..60 {
            let eps = 10f64.powf(-4.0 + i as f64 / 15.0);
            let k = k_exact_l2_spectrum(&s, eps, &op).unwrap().value;
            assert!(k >= prev - 1e-12);
            prev = k;
            let scaled = k_exact_l2_spectrum(&s.scale(c(-3.0, 4.0)), eps, &op).unwrap().value;
            assert!((scaled - 5.0 * k).abs() < 1e-9);
        }
    }

    #[test]
    fn fejer_conditions() {
        let corpus: Vec<Spectrum> = (1..6)
            .map(|k| Spectrum::from_terms(1, 64, &[(vec![k], c(1.0, 0.0)), (vec![-2 * k], c(0.3, 0.0))]).unwrap())
            .collect();
        let grid: Vec<f64> = (1..8).map(|j| 2f64.powi(-j)).collect();
        let rep = lemma_condition_report(&MultiplierDescriptor::Fejer, &OperatorSymbol::RadialPower(1.0), LebesgueExponent::TWO, &grid, &corpus, 1.0)
            .unwrap();
        assert!(rep.a_alpha <= 1.0 + 1e-12);
        assert!(rep.a_gamma <= 1.0 + 1e-12);
        assert!(rep.a_beta <= 1.0 + 1e-12);
        let a = rep.max_constant();
        for row in &rep.rows {
            if let Some(r) = row.ratio {
                assert!(r >= 1.0 / (1.0 + a) - 1e-12 && r <= 1.0 + a + 1e-12);
            }
        }
        let rep = lemma_condition_report(&MultiplierDescriptor::Identity, &OperatorSymbol::RadialPower(1.0), LebesgueExponent::TWO, &grid, &corpus, 1.0)
            .unwrap();
        assert!(rep.a_gamma.is_infinite());
        assert!(!rep.passes());
        assert!(rep.excluded > 0);
    }
}
