//! The explicit counterexamples: sharpness of the reverse Hardy inequality,
//! its failure for signed functions, and a Carleman-type step function
//! built from the Rudin-Shapiro sequence.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Axis, GridFunction};
use crate::special::{ls_slope, GaussLegendre};

/// `int_a^b h` with geometric panels refined toward `a` (where `h` may
/// carry an integrable power singularity) when `graded_at_a`, else toward `b`.
fn graded_integral(h: impl Fn(f64) -> f64, a: f64, b: f64, graded_at_a: bool, gl: &GaussLegendre) -> f64 {
    let len = b - a;
    let mut s = 0.0;
    for k in 0..64 {
        let (u0, u1) = (len * 0.5f64.powi(k + 1), len * 0.5f64.powi(k));
        s += if graded_at_a { gl.integrate(&h, a + u0, a + u1, 1) } else { gl.integrate(&h, b - u1, b - u0, 1) };
    }
    s
}

/// `ln(e^x + e^y)`.
fn log_add(x: f64, y: f64) -> f64 {
    let m = x.max(y);
    m + ((x - m).exp() + (y - m).exp()).ln()
}

/// Sequences `b_n`, `d_n` of the step counterexample, given by their logs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSequenceSpec {
    pub p: f64,
    /// `b_n = base_b^n`
    pub base_b: f64,
    /// `d_n = base_d^n`
    pub base_d: f64,
}

impl StepSequenceSpec {
    /// `b_n = 4^n`, `d_n = 2^n`.
    pub fn standard(p: f64) -> Self {
        Self { p, base_b: 4.0, base_d: 2.0 }
    }
}

/// Both sides of the reverse Hardy inequality, with logs kept for large `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyPair {
    pub index: u64,
    pub i1: f64,
    pub i2: f64,
    pub ln_i1: f64,
    pub ln_i2: f64,
}

/// `g = a_n` on `(b_n, b_n + d_n)` with `a_n^p = (int t^{p-2})^{-1}` over that
/// interval, so `I1 = 1`; `I2 = int t^{p-2} (Hg)^p`.
pub fn reverse_hardy_pair(spec: &StepSequenceSpec, n: u32) -> Result<HardyPair> {
    let p = spec.p;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < p <= 1, got {p}")));
    }
    if !(spec.base_b > spec.base_d && spec.base_d >= 1.0) {
        return Err(Error::InvalidParameter("need b_n / d_n increasing to infinity".into()));
    }
    let ln_b = n as f64 * spec.base_b.ln();
    let ln_d = n as f64 * spec.base_d.ln();
    let rho = (ln_d - ln_b).exp();
    // int_b^{b+d} t^{p-2} dt = b^{p-1} int_0^rho (1+u)^{p-2} du
    let ln_shape = if rho < 1e-8 {
        (ln_d - ln_b) + (0.5 * (p - 2.0) * rho).ln_1p()
    } else if p == 1.0 {
        rho.ln_1p().ln()
    } else {
        (((p - 1.0) * rho.ln_1p()).exp_m1() / (p - 1.0)).ln()
    };
    let ln_s = (p - 1.0) * ln_b + ln_shape;
    let ln_ap = -ln_s;
    let ln_i1 = ln_ap + ln_s;
    // on (b, b+d): Hg = a (t-b)/t, so t^{p-2} (Hg)^p = a^p (t-b)^p t^{-2};
    // with t = b + d v this is a^p d^{p+1} b^{-2} v^p (1 + rho v)^{-2}
    let gl = GaussLegendre::new(16);
    let inner = graded_integral(|v| v.powf(p) / (1.0 + rho * v).powi(2), 0.0, 1.0, true, &gl);
    let ln_mid = (p + 1.0) * ln_d - 2.0 * ln_b + inner.ln();
    // beyond b+d: Hg = a d / t
    let ln_far = p * ln_d - ln_b - rho.ln_1p();
    let ln_i2 = ln_ap + log_add(ln_mid, ln_far);
    Ok(HardyPair { index: n as u64, i1: ln_i1.exp(), i2: ln_i2.exp(), ln_i1, ln_i2 })
}

/// The signed step function: `0` on `(0,1)`, `a_n` on `(2n-1, 2n)`, `-a_n`
/// on `(2n, 2n+1)` with `a_n = n^{(1-p)/p}` for `n < N`.
pub fn signed_step_function(p: f64, big_n: u64) -> Result<GridFunction> {
    let mut bp = vec![0.0, 1.0];
    let mut vals = vec![0.0];
    for n in 1..big_n.max(1) {
        let a = (n as f64).powf((1.0 - p) / p);
        bp.push(2.0 * n as f64);
        bp.push(2.0 * n as f64 + 1.0);
        vals.push(a);
        vals.push(-a);
    }
    GridFunction::from_real(vec![Axis::new(bp)?], vals)
}

/// `I1 = int t^{p-2} |g|^p` and `I2 = int t^{p-2} |Hg|^p` for the signed
/// step function.
pub fn signed_hardy_pair(p: f64, big_n: u64) -> Result<HardyPair> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < p < 1, got {p}")));
    }
    if big_n < 2 {
        return Err(Error::InvalidParameter("need N >= 2".into()));
    }
    let gl = GaussLegendre::new(16);
    // collected in order so the sum does not depend on the thread count
    let terms: Vec<(f64, f64)> = (1..big_n)
        .into_par_iter()
        .map(|n| {
            let nf = n as f64;
            let ap = nf.powf(1.0 - p);
            let (lo, mid, hi) = (2.0 * nf - 1.0, 2.0 * nf, 2.0 * nf + 1.0);
            let first = (hi.powf(p - 1.0) - lo.powf(p - 1.0)) / (p - 1.0);
            // |Hg| = a_n tri(t) / t, tri rising on (lo, mid) and falling on (mid, hi)
            let up = graded_integral(|t| (t - lo).max(0.0).powf(p) / (t * t), lo, mid, true, &gl);
            let down = graded_integral(|t| (hi - t).max(0.0).powf(p) / (t * t), mid, hi, false, &gl);
            (ap * first, ap * (up + down))
        })
        .collect();
    let (i1, i2) = terms.iter().fold((0.0, 0.0), |acc, t| (acc.0 + t.0, acc.1 + t.1));
    Ok(HardyPair { index: big_n, i1, i2, ln_i1: i1.ln(), ln_i2: i2.ln() })
}

pub fn write_pairs<W: Write>(pairs: &[HardyPair], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["index", "I1", "I2", "ln_I1", "ln_I2"])?;
    for p in pairs {
        wr.write_record([p.index.to_string(), p.i1.to_string(), p.i2.to_string(), p.ln_i1.to_string(), p.ln_i2.to_string()])?;
    }
    wr.flush()?;
    Ok(())
}

/// `(-1)^{#"11" in binary n}`.
pub fn rudin_shapiro(n: u64) -> i8 {
    if (n & (n >> 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Same sequence from `e_{2n} = e_n`, `e_{2n+1} = (-1)^n e_n`, `e_0 = 1`.
pub fn rudin_shapiro_recursive(n: u64) -> i8 {
    if n == 0 {
        1
    } else if n.is_multiple_of(2) {
        rudin_shapiro_recursive(n / 2)
    } else {
        let m = n / 2;
        let s = if m.is_multiple_of(2) { 1 } else { -1 };
        s * rudin_shapiro_recursive(m)
    }
}

/// `1 / (sqrt(n+1) ln^2(n+2))`.
pub fn carleman_weight(n: u64) -> f64 {
    let x = n as f64;
    1.0 / ((x + 1.0).sqrt() * (x + 2.0).ln().powi(2))
}

/// Calibrated constant `C` in `w_k - w_{k+1} <= C / ((k+1)^{3/2} ln^2(k+2))`.
pub const ABEL_CONSTANT: f64 = 1.135_592_040_991_697;

/// Largest observed `(w_k - w_{k+1}) (k+1)^{3/2} ln^2(k+2)` for `k < kmax`.
pub fn calibrate_abel_constant(kmax: u64) -> f64 {
    (0..kmax)
        .map(|k| {
            let x = k as f64;
            (carleman_weight(k) - carleman_weight(k + 1)) * (x + 1.0).powf(1.5) * (x + 2.0).ln().powi(2)
        })
        .fold(0.0, f64::max)
}

/// Coefficients `c_n = e_n w_n` with cached signs.
#[derive(Debug, Clone, PartialEq)]
pub struct Carleman {
    signs: Vec<i8>,
}

impl Carleman {
    pub fn new(n_max: u64) -> Self {
        Self { signs: (0..=n_max).map(rudin_shapiro).collect() }
    }

    pub fn n_max(&self) -> u64 {
        self.signs.len() as u64 - 1
    }

    pub fn coeff(&self, n: u64) -> f64 {
        self.signs[n as usize] as f64 * carleman_weight(n)
    }

    /// `sum_n c_n chi_(n-1/2, n+1/2)`.
    pub fn g(&self) -> GridFunction {
        let n = self.n_max();
        let bp: Vec<f64> = (0..=n + 1).map(|k| k as f64 - 0.5).collect();
        let vals: Vec<f64> = (0..=n).map(|k| self.coeff(k)).collect();
        GridFunction::from_real(vec![Axis::new(bp).unwrap()], vals).unwrap()
    }

    /// `f_n(t) = sum_{k <= n} c_k e^{-ikt}`.
    pub fn f_direct(&self, n: u64, t: f64) -> Complex64 {
        (0..=n).map(|k| Complex64::from_polar(self.coeff(k), -(k as f64) * t)).sum()
    }

    /// `f_n` through partial sums: `sum_{k<n} (w_k - w_{k+1}) P_k + w_n P_n`.
    pub fn f_abel(&self, n: u64, t: f64) -> Complex64 {
        let mut pk = Complex64::new(0.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=n {
            pk += Complex64::from_polar(self.signs[k as usize] as f64, -(k as f64) * t);
            let a = if k < n { carleman_weight(k) - carleman_weight(k + 1) } else { carleman_weight(n) };
            acc += pk * a;
        }
        acc
    }
}

/// `max_k |P_k(t)| / sqrt(k+1)` over `k <= kmax` for each `t`.
pub fn rudin_shapiro_sup_ratio(kmax: u64, ts: &[f64]) -> Vec<f64> {
    let signs: Vec<f64> = (0..=kmax).map(|k| rudin_shapiro(k) as f64).collect();
    ts.par_iter()
        .map(|&t| {
            let mut p = Complex64::new(0.0, 0.0);
            let mut worst: f64 = 0.0;
            for (k, s) in signs.iter().enumerate() {
                p += Complex64::from_polar(*s, -(k as f64) * t);
                worst = worst.max(p.norm() / ((k + 1) as f64).sqrt());
            }
            worst
        })
        .collect()
}

/// Agreement of the two forms of `f_n` and the Cauchy gap `f_{2n} - f_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlemanReport {
    pub n: u64,
    pub max_form_diff: f64,
    pub sup_gap: f64,
    /// `5 C sum_{n <= k < 2n} 1/((k+1) ln^2(k+2)) + 5 w_n sqrt(n+1) + 5 w_{2n} sqrt(2n+1)`
    pub gap_bound: f64,
}

/// Checks `f_n` on `samples` random points of `[0, 2 pi)`.
pub fn carleman_partial_f(n: u64, samples: usize, seed: u64) -> Result<CarlemanReport> {
    if n < 1 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    let c = Carleman::new(2 * n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts: Vec<f64> = (0..samples).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    let (diff, gap) = ts
        .par_iter()
        .map(|&t| {
            let direct = c.f_direct(n, t);
            let abel = c.f_abel(n, t);
            ((direct - abel).norm(), (c.f_direct(2 * n, t) - direct).norm())
        })
        .reduce(|| (0.0, 0.0), |x, y| (x.0.max(y.0), x.1.max(y.1)));
    let series: f64 = (n..2 * n).map(|k| 1.0 / ((k as f64 + 1.0) * (k as f64 + 2.0).ln().powi(2))).sum();
    let edge = |m: u64| 5.0 * carleman_weight(m) * ((m + 1) as f64).sqrt();
    Ok(CarlemanReport { n, max_form_diff: diff, sup_gap: gap, gap_bound: 5.0 * ABEL_CONSTANT * series + edge(n) + edge(2 * n) })
}

/// Partial sums `S(n) = sum_{k<=n} term(k)` at `n = 2^m - 1` and the slope of
/// `ln(S(2^{m+1}-1) - S(2^m-1))` against `m`; a positive slope means the
/// block sums grow and the series diverges.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSumScan {
    pub ms: Vec<u32>,
    pub partial_sums: Vec<f64>,
    pub block_sums: Vec<f64>,
    pub slope: f64,
}

impl PartialSumScan {
    pub fn diverges(&self) -> bool {
        self.slope > 0.0
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["index", "partial_sum", "block_sum", "slope"])?;
        for ((m, s), b) in self.ms.iter().zip(&self.partial_sums).zip(&self.block_sums) {
            wr.write_record([((1u64 << m) - 1).to_string(), s.to_string(), b.to_string(), self.slope.to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Blocks shorter than this are summed term by term.
const DIRECT_BLOCK: u64 = 1 << 14;

/// `sum_{k=lo}^{hi-1} term(k)` for a smooth positive term; long blocks use
/// the midpoint Euler-Maclaurin form `int_{lo-1/2}^{hi-1/2} - (f'(b) - f'(a))/24`.
fn block_sum(term: &(impl Fn(f64) -> f64 + Sync), lo: u64, hi: u64, gl: &GaussLegendre) -> f64 {
    if hi - lo <= DIRECT_BLOCK {
        return (lo..hi).map(|k| term(k as f64)).sum();
    }
    let (a, b) = (lo as f64 - 0.5, hi as f64 - 0.5);
    let (la, lb) = (a.ln(), b.ln());
    // integrate in u = ln x
    let integral = gl.integrate(|u| term(u.exp()) * u.exp(), la, lb, 32);
    let deriv = |x: f64| {
        let h = 1e-3 * x;
        (term(x + h) - term(x - h)) / (2.0 * h)
    };
    integral - (deriv(b) - deriv(a)) / 24.0
}

/// Block-sum scan of `sum term(k)` for `m` in `ms` (blocks `[2^m, 2^{m+1})`);
/// the slope is fitted over the upper half of `ms`.
pub fn partial_sum_scan(term: impl Fn(f64) -> f64 + Sync, ms: &[u32]) -> Result<PartialSumScan> {
    if ms.len() < 4 || ms.windows(2).any(|w| w[1] != w[0] + 1) || ms[0] == 0 || *ms.last().unwrap() > 62 {
        return Err(Error::InvalidParameter("need at least 4 consecutive block exponents in 1..=62".into()));
    }
    let gl = GaussLegendre::new(20);
    let head: f64 = (0..(1u64 << ms[0])).map(|k| term(k as f64)).sum();
    let blocks: Vec<f64> = ms.par_iter().map(|&m| block_sum(&term, 1u64 << m, 1u64 << (m + 1), &gl)).collect();
    let mut s = head;
    let mut partial = Vec::with_capacity(ms.len());
    for b in &blocks {
        s += b;
        partial.push(s);
    }
    let half = ms.len() / 2;
    let xs: Vec<f64> = ms[half..].iter().map(|&m| m as f64).collect();
    let ys: Vec<f64> = blocks[half..].iter().map(|b| b.ln()).collect();
    Ok(PartialSumScan { ms: ms.to_vec(), partial_sums: partial, block_sums: blocks, slope: ls_slope(&xs, &ys) })
}

/// `||g||_p^p` term: `|c_k|^p` (cells have unit length).
pub fn carleman_norm_term(p: f64) -> impl Fn(f64) -> f64 + Sync {
    move |k: f64| (1.0 / ((k + 1.0).sqrt() * (k + 2.0).ln().powi(2))).powf(p)
}

/// `int |x|^{p-2} |g|^p` term: `|c_k|^p int_{k-1/2}^{k+1/2} |x|^{p-2} dx`.
pub fn carleman_weighted_term(p: f64) -> impl Fn(f64) -> f64 + Sync {
    move |k: f64| {
        let w = (1.0 / ((k + 1.0).sqrt() * (k + 2.0).ln().powi(2))).powf(p);
        let e = p - 1.0;
        let cell = if k < 0.5 {
            2.0 * 0.5f64.powf(e) / e
        } else {
            let h = 0.5 / k;
            k.powf(e) * ((e * h.ln_1p()).exp_m1() - (e * (-h).ln_1p()).exp_m1()) / e
        };
        w * cell
    }
}
