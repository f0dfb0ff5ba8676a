//! Quadrature rules, oscillatory integrals and a few special functions.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, z);
                let dz = p / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, z);
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + r * x);
        }
        s * r
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
        let mut s = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += f(c + r * x) * *w;
        }
        s * r
    }
}

/// Shared 20-point rule.
pub fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// Shared 32-point rule.
pub fn gl32() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32))
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = r * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * r, ((k - g) * r).abs())
}

/// Globally adaptive Gauss–Kronrod (7/15) integration on a finite interval.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> QuadResult {
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let max_parts = 4000;
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let error: f64 = parts.iter().map(|p| p.3).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return QuadResult { value, error, converged: true };
        }
        if parts.len() >= max_parts {
            return QuadResult { value, error, converged: false };
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            let value: f64 = parts.iter().map(|p| p.2).sum::<f64>() + v;
            return QuadResult { value, error, converged: false };
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Composite Gauss–Legendre over panels no longer than `max_panel` and no
/// longer than `growth` times their left endpoint (for algebraic decay).
pub fn panel_integrate<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    max_panel: f64,
    growth: f64,
) -> Complex64 {
    let rule = gl20();
    let mut s = Complex64::new(0.0, 0.0);
    let mut u = a;
    while u < b {
        let mut step = max_panel;
        if u > 0.0 {
            step = step.min(growth * u);
        }
        let next = if b - u <= step * 1.0000001 { b } else { u + step };
        s += rule.integrate_complex(u, next, &mut f);
        u = next;
    }
    s
}

/// Asymptotic value of ∫_T^∞ u^{-p} e^{iωu} du for ωT large (ω > 0).
pub fn fourier_power_tail(omega: f64, p: f64, t: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let mut term = i / omega * t.powf(-p);
    let lead = term.norm();
    let mut sum = term;
    let mut prev = lead;
    for m in 1..400 {
        term *= -i * ((p + m as f64 - 1.0) / (omega * t));
        let size = term.norm();
        if size > prev {
            break;
        }
        sum += term;
        if size < 1e-18 * lead {
            break;
        }
        prev = size;
    }
    sum * Complex64::from_polar(1.0, omega * t)
}

/// ∫_a^b u^{-p} e^{iωu} du with 0 < a < b ≤ ∞.
///
/// Finite parts use panels shorter than half a period; an infinite upper limit
/// switches to the integration-by-parts series once ωu ≥ 60.
pub fn fourier_power(omega: f64, p: f64, a: f64, b: f64) -> Complex64 {
    if omega < 0.0 {
        return fourier_power(-omega, p, a, b).conj();
    }
    if omega == 0.0 {
        let v = if (p - 1.0).abs() < 1e-15 {
            (b / a).ln()
        } else if b.is_infinite() {
            if p > 1.0 {
                a.powf(1.0 - p) / (p - 1.0)
            } else {
                f64::INFINITY
            }
        } else {
            (b.powf(1.0 - p) - a.powf(1.0 - p)) / (1.0 - p)
        };
        return Complex64::new(v, 0.0);
    }
    let end = if b.is_finite() { b } else { a.max((60.0 + 2.0 * p) / omega) };
    let mut s = Complex64::new(0.0, 0.0);
    if end > a {
        s = panel_integrate(
            |u| Complex64::from_polar(u.powf(-p), omega * u),
            a,
            end,
            PI / omega,
            0.3,
        );
    }
    if b.is_infinite() {
        s += fourier_power_tail(omega, p, end);
    }
    s
}

/// Bessel function J₀.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < 12.0 {
        let q = -0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..200 {
            term *= q / ((m * m) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        sum
    } else {
        let h = hankel_j0(x);
        (2.0 / (PI * x)).sqrt() * (h * Complex64::from_polar(1.0, x - 0.25 * PI)).re
    }
}

/// Coefficients a_k of the Hankel expansion of J₀: P + iQ = Σ i^k a_k z^{-k}.
fn hankel_coefficient(k: usize) -> f64 {
    hankel_coefficient_nu(0.0, k)
}

fn hankel_coefficient_nu(nu: f64, k: usize) -> f64 {
    let mut a = 1.0;
    for j in 1..=k {
        let odd = (2 * j - 1) as f64;
        a *= (4.0 * nu * nu - odd * odd) / (8.0 * j as f64);
    }
    a
}

fn hankel_sum(nu: f64, z: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let mut sum = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut ik = Complex64::new(1.0, 0.0);
    for k in 1..60 {
        ik *= i;
        let t = hankel_coefficient_nu(nu, k) / z.powi(k as i32);
        if t.abs() > prev {
            break;
        }
        sum += ik * t;
        prev = t.abs();
        if prev < 1e-17 {
            break;
        }
    }
    sum
}

fn hankel_j0(z: f64) -> Complex64 {
    hankel_sum(0.0, z)
}

/// Bessel function J₁.
pub fn bessel_j1(x: f64) -> f64 {
    let sign = x.signum();
    let x = x.abs();
    if x < 12.0 {
        let q = -0.25 * x * x;
        let mut term = 0.5 * x;
        let mut sum = term;
        for m in 1..200 {
            term *= q / ((m * (m + 1)) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        sign * sum
    } else {
        let h = hankel_sum(1.0, x);
        sign * (2.0 / (PI * x)).sqrt() * (h * Complex64::from_polar(1.0, x - 0.75 * PI)).re
    }
}

/// ∫_a^∞ ρ^{-p} J₀(bρ) dρ for b > 0 and p > 1/2.
pub fn bessel_j0_power(b: f64, p: f64, a: f64) -> f64 {
    let end = a.max(60.0 / b);
    let mut s = 0.0;
    if end > a {
        s = panel_integrate(
            |u| Complex64::new(u.powf(-p) * bessel_j0(b * u), 0.0),
            a,
            end,
            PI / b,
            0.3,
        )
        .re;
    }
    let i = Complex64::new(0.0, 1.0);
    let mut ik = Complex64::new(1.0, 0.0);
    let mut tail = Complex64::new(0.0, 0.0);
    for k in 0..6 {
        let c = hankel_coefficient(k) * b.powi(-(k as i32));
        tail += ik * c * fourier_power_tail(b, p + 0.5 + k as f64, end);
        ik *= i;
    }
    let scale = (2.0 / (PI * b)).sqrt();
    s + scale * (tail * Complex64::from_polar(1.0, -0.25 * PI)).re
}

/// Generalized binomial coefficient C(r, k).
pub fn binomial(r: f64, k: u64) -> f64 {
    let mut c = 1.0;
    for j in 0..k {
        c *= (r - j as f64) / (j + 1) as f64;
    }
    c
}

/// Limit of f(h) as h → 0 by Richardson extrapolation on h₀/2^i.
///
/// Assumes an expansion in integer powers of h. Returns the value and the
/// difference between the last two diagonal entries.
pub fn richardson_limit<F: Fn(f64) -> Complex64>(f: F, h0: f64, levels: usize) -> (Complex64, f64) {
    let levels = levels.max(2);
    let mut table: Vec<Vec<Complex64>> = Vec::with_capacity(levels);
    for i in 0..levels {
        let mut row = vec![f(h0 / 2f64.powi(i as i32))];
        for j in 1..=i {
            let factor = 2f64.powi(j as i32) - 1.0;
            let v = row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / factor;
            row.push(v);
        }
        table.push(row);
    }
    let last = &table[levels - 1];
    let prev = &table[levels - 2];
    let est = last[levels - 1];
    (est, (est - prev[levels - 2]).norm())
}

/// Van der Corput radical inverse in the given base.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    r
}

/// The first `n` primes, used as Halton bases.
pub fn primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2u64;
    while out.len() < n {
        if out.iter().all(|p| !c.is_multiple_of(*p)) {
            out.push(c);
        }
        c += 1;
    }
    out
}
