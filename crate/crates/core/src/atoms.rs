//! Simple p-atoms, the measure `prod t_j^{-2} dt`, and decay scans of the
//! transformed atoms near the origin of the frequency space.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::cell_transform;
use crate::grid::{contract_axis, for_each_index, Axis, GridFunction};
use crate::special::{ls_slope, GaussLegendre};

/// Highest vanishing moment order, `floor(2/p - 3/2)`.
pub fn moment_order(p: f64) -> usize {
    (2.0 / p - 1.5 + 1e-12).floor().max(0.0) as usize
}

/// `Some(n)` when `(lo, hi)` is `(k 2^-n, (k+1) 2^-n)` for integers `k, n`.
pub fn dyadic_level(lo: f64, hi: f64) -> Option<i32> {
    let w = hi - lo;
    if !(w > 0.0) || !w.is_finite() {
        return None;
    }
    let n = -w.log2().round();
    if (2f64.powf(-n) - w).abs() > 1e-12 * w {
        return None;
    }
    let k = lo / w;
    if (k - k.round()).abs() > 1e-9 {
        return None;
    }
    Some(n as i32)
}

/// Support and resolution of a simple p-atom: dyadic intervals on the
/// moment-bearing axes followed by a rectangle `A` on the remaining ones.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpec {
    pub p: f64,
    pub intervals: Vec<(f64, f64)>,
    /// may be empty; then `|A|` counts as 1
    pub rest: Vec<(f64, f64)>,
    /// cells per axis
    pub cells: usize,
}

impl AtomSpec {
    pub fn new(p: f64, intervals: Vec<(f64, f64)>, rest: Vec<(f64, f64)>, cells: usize) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParameter(format!("atoms need 0 < p <= 1, got {p}")));
        }
        if intervals.is_empty() {
            return Err(Error::InvalidParameter("at least one moment-bearing interval".into()));
        }
        let d = intervals.len() + rest.len();
        if d > crate::grid::MAX_DIM {
            return Err(Error::UnsupportedDimension(d));
        }
        for (i, &(a, b)) in intervals.iter().enumerate() {
            if dyadic_level(a, b).is_none() {
                return Err(Error::InvalidParameter(format!("interval {i} ({a}, {b}) is not dyadic")));
            }
        }
        if rest.iter().any(|&(a, b)| !(b > a) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidParameter("the set A must be a bounded rectangle".into()));
        }
        Ok(Self { p, intervals, rest, cells: cells.max(1) })
    }

    pub fn dim(&self) -> usize {
        self.intervals.len() + self.rest.len()
    }

    pub fn moment_order(&self) -> usize {
        moment_order(self.p)
    }

    fn support_volume(&self) -> f64 {
        self.intervals.iter().chain(&self.rest).map(|(a, b)| b - a).product()
    }

    /// `(prod |I_i| |A|)^{1/2 - 1/p}`.
    pub fn l2_bound(&self) -> f64 {
        self.support_volume().powf(0.5 - 1.0 / self.p)
    }

    fn axes(&self) -> Result<Vec<Axis>> {
        self.intervals.iter().chain(&self.rest).map(|&(a, b)| Axis::uniform(a, b, self.cells)).collect()
    }
}

/// Orthonormal basis (over the cells of `axis`) of the span of the
/// functionals `v -> int x^k v`, `k <= order`.
fn moment_basis(axis: &Axis, order: usize) -> Vec<Vec<f64>> {
    let n = axis.cells();
    let c = 0.5 * (axis.lo() + axis.hi());
    let s = 0.5 * (axis.hi() - axis.lo());
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..=order {
        // the same span, better conditioned in centered coordinates
        let mut row: Vec<f64> = (0..n)
            .map(|j| {
                let (a, b) = axis.cell(j);
                let (u, v) = ((a - c) / s, (b - c) / s);
                s * (v.powi(k as i32 + 1) - u.powi(k as i32 + 1)) / (k as f64 + 1.0)
            })
            .collect();
        for _ in 0..2 {
            for q in &basis {
                let dot: f64 = row.iter().zip(q).map(|(x, y)| x * y).sum();
                row.iter_mut().zip(q).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-14 {
            row.iter_mut().for_each(|x| *x /= norm);
            basis.push(row);
        }
    }
    basis
}

/// Removes the components along `basis` from every fiber of the axis block
/// `axes` (a contiguous range of axes flattened together).
fn project_block(values: &mut [f64], shape: &[usize], axes: std::ops::Range<usize>, basis: &[Vec<f64>]) {
    let outer: usize = shape[..axes.start].iter().product();
    let block: usize = shape[axes.clone()].iter().product();
    let inner: usize = shape[axes.end..].iter().product();
    let mut fiber = vec![0.0; block];
    for o in 0..outer {
        for i in 0..inner {
            let at = |j: usize| (o * block + j) * inner + i;
            for (j, x) in fiber.iter_mut().enumerate() {
                *x = values[at(j)];
            }
            for q in basis {
                let dot: f64 = fiber.iter().zip(q).map(|(x, y)| x * y).sum();
                fiber.iter_mut().zip(q).for_each(|(x, y)| *x -= dot * y);
            }
            for (j, x) in fiber.iter().enumerate() {
                values[at(j)] = *x;
            }
        }
    }
}

/// Projects a candidate onto the atom conditions and rescales it to equality
/// in the L2 bound.
pub fn project_atom(spec: &AtomSpec, candidate: &[f64]) -> Result<GridFunction> {
    let axes = spec.axes()?;
    let shape: Vec<usize> = axes.iter().map(Axis::cells).collect();
    if candidate.len() != shape.iter().product::<usize>() {
        return Err(Error::DimensionMismatch("candidate length".into()));
    }
    let mut v = candidate.to_vec();
    let j = spec.intervals.len();
    for _ in 0..2 {
        for i in 0..j {
            project_block(&mut v, &shape, i..i + 1, &moment_basis(&axes[i], spec.moment_order()));
        }
        if !spec.rest.is_empty() {
            // mean over A for almost every point of the moment axes
            let vols: Vec<f64> = {
                let sub = &axes[j..];
                let mut out = Vec::new();
                for_each_index(&shape[j..], |idx| out.push(idx.iter().zip(sub).map(|(&k, a)| a.width(k)).product()));
                out
            };
            let norm = vols.iter().map(|x| x * x).sum::<f64>().sqrt();
            let q: Vec<f64> = vols.iter().map(|x| x / norm).collect();
            project_block(&mut v, &shape, j..spec.dim(), &[q]);
        }
    }
    let a = GridFunction::from_real(axes, v)?;
    let norm = a.lp_norm(2.0);
    let scale_ref = candidate.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if !(norm > 1e-10 * scale_ref.max(f64::MIN_POSITIVE)) || norm == 0.0 {
        return Err(Error::DegenerateAtom);
    }
    Ok(a.scale_real(spec.l2_bound() / norm))
}

/// Random atom: a uniform candidate projected by [`project_atom`]; a
/// degenerate projection retries with the next seed.
pub fn make_simple_atom(spec: &AtomSpec, seed: u64) -> Result<GridFunction> {
    let count = spec.cells.pow(spec.dim() as u32);
    let mut last = Error::DegenerateAtom;
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let cand: Vec<f64> = (0..count).map(|_| rng.gen_range(-1.0..1.0)).collect();
        match project_atom(spec, &cand) {
            Ok(a) => {
                let check = check_atom(spec, &a)?;
                if check.max_moment < 1e-12 {
                    return Ok(a);
                }
                last = Error::Precondition(format!("moment defect {}", check.max_moment));
            }
            Err(Error::DegenerateAtom) => last = Error::DegenerateAtom,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// `+1/2` on `(0, 1)` and `-1/2` on `(1, 2)`.
pub fn two_cell_atom() -> GridFunction {
    GridFunction::from_real(vec![Axis::new(vec![0.0, 1.0, 2.0]).unwrap()], vec![0.5, -0.5]).unwrap()
}

/// How well a function meets the atom conditions of `spec`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomCheck {
    pub support_ok: bool,
    pub l2_norm: f64,
    pub l2_bound: f64,
    /// largest `|int a x_i^k dx_i|` or `|int_A a|` over all fibers
    pub max_moment: f64,
}

impl AtomCheck {
    pub fn is_atom(&self, tol: f64) -> bool {
        self.support_ok && self.l2_norm <= self.l2_bound * (1.0 + 1e-12) && self.max_moment < tol
    }
}

pub fn check_atom(spec: &AtomSpec, a: &GridFunction) -> Result<AtomCheck> {
    if a.dim() != spec.dim() {
        return Err(Error::DimensionMismatch("atom dimension".into()));
    }
    let bounds: Vec<(f64, f64)> = spec.intervals.iter().chain(&spec.rest).copied().collect();
    let mut support_ok = true;
    for_each_index(&a.shape(), |idx| {
        if a.value(idx).norm() != 0.0 {
            for (i, &k) in idx.iter().enumerate() {
                let (lo, hi) = a.axis(i).cell(k);
                if lo < bounds[i].0 || hi > bounds[i].1 {
                    support_ok = false;
                }
            }
        }
    });
    let values = a.values();
    let shape = a.shape();
    let mut max_moment: f64 = 0.0;
    for i in 0..spec.intervals.len() {
        let axis = a.axis(i);
        for k in 0..=spec.moment_order() {
            let m: Vec<Complex64> = (0..axis.cells())
                .map(|j| {
                    let (lo, hi) = axis.cell(j);
                    Complex64::new((hi.powi(k as i32 + 1) - lo.powi(k as i32 + 1)) / (k as f64 + 1.0), 0.0)
                })
                .collect();
            let out = contract_axis(values, &shape, i, &m, 1);
            max_moment = out.iter().map(|z| z.norm()).fold(max_moment, f64::max);
        }
    }
    if !spec.rest.is_empty() {
        let mut vals = values.to_vec();
        let mut sh = shape.clone();
        for i in spec.intervals.len()..spec.dim() {
            let axis = a.axis(i);
            let m: Vec<Complex64> = (0..axis.cells()).map(|j| Complex64::new(axis.width(j), 0.0)).collect();
            vals = contract_axis(&vals, &sh, i, &m, 1);
            sh[i] = 1;
        }
        max_moment = vals.iter().map(|z| z.norm()).fold(max_moment, f64::max);
    }
    Ok(AtomCheck { support_ok, l2_norm: a.lp_norm(2.0), l2_bound: spec.l2_bound(), max_moment })
}

/// Product of per-axis unions of intervals (endpoints may be infinite).
#[derive(Debug, Clone, PartialEq)]
pub struct EtaRegion {
    pub axes: Vec<Vec<(f64, f64)>>,
}

/// Reflected region of a dyadic rectangle: `(2^{n_i}, inf)` per
/// axis for a side of length `2^{-n_i}`.
pub fn reflected_region(rect: &[(f64, f64)]) -> Result<EtaRegion> {
    let axes = rect
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let n = dyadic_level(a, b).ok_or_else(|| Error::InvalidParameter(format!("side {i} ({a}, {b}) is not dyadic")))?;
            Ok(vec![(2f64.powi(n), f64::INFINITY)])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EtaRegion { axes })
}

/// `int_region prod t_j^{-2} dt` in closed form.
pub fn eta_measure(region: &EtaRegion) -> Result<f64> {
    let mut total = 1.0;
    for (i, ivs) in region.axes.iter().enumerate() {
        let mut ivs: Vec<(f64, f64)> = ivs.iter().copied().filter(|(a, b)| b > a).collect();
        if ivs.iter().any(|&(a, b)| a <= 0.0 && b >= 0.0) {
            return Err(Error::RegionTouchesOrigin(i));
        }
        ivs.sort_by(|x, y| x.0.total_cmp(&y.0));
        // merge overlaps
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (a, b) in ivs {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        let recip = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
        let axis_mass: f64 = merged
            .iter()
            .map(|&(a, b)| if a > 0.0 { recip(a) - recip(b) } else { recip(-b) - recip(-a) })
            .sum();
        total *= axis_mass;
    }
    Ok(total)
}

/// Which transform of the atom is scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanVariant {
    /// `(prod t_j) F a`
    Fourier,
    /// `(prod t_j) H F a`
    HardyFourier,
}

/// Region on the non-moment axes: inside or outside the reflected `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanSide {
    Interior,
    Exterior,
}

impl FromStr for ScanSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "interior" => Ok(Self::Interior),
            "exterior" => Ok(Self::Exterior),
            o => Err(Error::Parse(format!("unknown side {o:?}"))),
        }
    }
}

impl fmt::Display for ScanVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Fourier => "fourier",
            Self::HardyFourier => "hardy_fourier",
        })
    }
}

/// Quadrature settings of a decay scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSettings {
    /// octaves below the smallest scanned region
    pub depth: i32,
    pub nodes: usize,
    /// outer frequency cut on reflected `A`, in units of its inner edge
    pub reach: f64,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self { depth: 48, nodes: 8, reach: 64.0 }
    }
}

/// Decay of `J(r) = int |T a|^p d eta` over the `r`-indexed regions.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayScan {
    pub p: f64,
    pub moment_order: usize,
    pub variant: ScanVariant,
    pub rs: Vec<i32>,
    pub js: Vec<f64>,
    /// estimated mass beyond the frequency cut on the non-moment axes
    pub tails: Vec<f64>,
    pub slope: f64,
    pub predicted: f64,
    pub flags: Vec<String>,
}

impl DecayScan {
    pub fn passes(&self, tol: f64) -> bool {
        self.slope <= self.predicted + tol
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["p", "N", "variant", "r", "J", "slope", "predicted"])?;
        for (r, j) in self.rs.iter().zip(&self.js) {
            wr.write_record([
                self.p.to_string(),
                self.moment_order.to_string(),
                self.variant.to_string(),
                r.to_string(),
                j.to_string(),
                self.slope.to_string(),
                self.predicted.to_string(),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// `int_a^b (1 - e^{-itx}) / (ix) dx`.
fn integrated_cell(a: f64, b: f64, t: f64, gl: &GaussLegendre) -> Complex64 {
    let h = |x: f64| {
        let z = t * x;
        if z.abs() < 1e-4 {
            // (1 - e^{-iz}) / (iz) = 1 - iz/2 - z^2/6 + ...
            Complex64::new(1.0 - z * z / 6.0, -z / 2.0 + z * z * z / 24.0) * t
        } else {
            (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -z)) / Complex64::new(0.0, x)
        }
    };
    let panels = ((t.abs() * (b - a)).ceil() as usize).max(1);
    gl.integrate_complex(h, a, b, panels)
}

/// Coefficient of `int x^k` in the small-`t` expansion of a cell kernel.
fn taylor_coeff(variant: ScanVariant, t: f64, k: usize, fact: f64) -> Complex64 {
    let c = Complex64::new(0.0, -t).powu(k as u32) * t;
    match variant {
        ScanVariant::Fourier => c / fact,
        ScanVariant::HardyFourier => c / (fact * (k + 1) as f64),
    }
}

/// Cell kernel with the terms of order `<= n` in `x` removed. Those terms
/// integrate to zero against an atom, so dropping them changes nothing
/// except the cancellation error at small `t`.
fn remainder_cell(a: f64, b: f64, t: f64, n: usize, variant: ScanVariant, gl: &GaussLegendre) -> Complex64 {
    let x = a.abs().max(b.abs());
    let power = |k: usize| (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k + 1) as f64;
    let mut fact = 1.0;
    if (t * x).abs() <= 1.0 {
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..n + 40 {
            if k > 0 {
                fact *= k as f64;
            }
            if k <= n {
                continue;
            }
            let term = taylor_coeff(variant, t, k, fact) * power(k);
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        return sum;
    }
    let mut exact = match variant {
        ScanVariant::Fourier => cell_transform(a, b, t) * t,
        ScanVariant::HardyFourier => integrated_cell(a, b, t, gl),
    };
    for k in 0..=n {
        if k > 0 {
            fact *= k as f64;
        }
        exact -= taylor_coeff(variant, t, k, fact) * power(k);
    }
    exact
}

/// Row-major kernel (`ts.len()` rows) producing `Psi` along one axis;
/// with `moments = Some(n)` the axis carries `n` vanishing moments.
fn psi_kernel(axis: &Axis, ts: &[f64], variant: ScanVariant, moments: Option<usize>, gl: &GaussLegendre) -> Vec<Complex64> {
    let n = axis.cells();
    let mut m = vec![Complex64::new(0.0, 0.0); ts.len() * n];
    m.par_chunks_mut(n).zip(ts.par_iter()).for_each(|(row, &t)| {
        for (j, slot) in row.iter_mut().enumerate() {
            let (a, b) = axis.cell(j);
            *slot = match (moments, variant) {
                (Some(k), _) => remainder_cell(a, b, t, k, variant, gl),
                (None, ScanVariant::Fourier) => cell_transform(a, b, t) * t,
                (None, ScanVariant::HardyFourier) => integrated_cell(a, b, t, gl),
            };
        }
    });
    m
}

/// Quadrature nodes/weights on `(lo, hi)` split into geometric octaves, both
/// signs; also returns the octave index of each node.
fn octave_nodes(top: f64, octaves: usize, gl: &GaussLegendre) -> (Vec<f64>, Vec<f64>, Vec<usize>) {
    let (mut ts, mut ws, mut oct) = (Vec::new(), Vec::new(), Vec::new());
    for m in 0..octaves {
        let hi = top * 2f64.powi(-(m as i32));
        let lo = 0.5 * hi;
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            let t = lo + 0.5 * (hi - lo) * (x + 1.0);
            for s in [1.0, -1.0] {
                ts.push(s * t);
                ws.push(0.5 * (hi - lo) * w);
                oct.push(m);
            }
        }
    }
    (ts, ws, oct)
}

/// Nodes on `lo < |t| < hi` with panels no wider than `max_w`; the last
/// octave is tagged 1, everything else 0.
fn band_nodes(lo: f64, hi: f64, max_w: f64, gl: &GaussLegendre) -> (Vec<f64>, Vec<f64>, Vec<usize>) {
    let (mut ts, mut ws, mut tag) = (Vec::new(), Vec::new(), Vec::new());
    let mut a = lo;
    while a < hi * (1.0 - 1e-12) {
        let b = (2.0 * a).min(hi);
        let panels = (((b - a) / max_w).ceil() as usize).max(1);
        let h = (b - a) / panels as f64;
        for k in 0..panels {
            let c = a + (k as f64 + 0.5) * h;
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                for s in [1.0, -1.0] {
                    ts.push(s * (c + 0.5 * h * x));
                    ws.push(0.5 * h * w);
                    tag.push(usize::from(b >= hi));
                }
            }
        }
        a = b;
    }
    (ts, ws, tag)
}

/// Scans `J(r)` for `r` in `rs`. In `d = 2` the second axis carries the set
/// `A`: `Interior` integrates over `|t_2| > 1/|A|`, `Exterior` over
/// `|t_2| < 1/|A|`. A zero atom yields a NaN slope and a `zero` flag.
pub fn decay_scan(
    a: &GridFunction,
    spec: &AtomSpec,
    rs: &[i32],
    side: ScanSide,
    variant: ScanVariant,
    settings: &ScanSettings,
) -> Result<DecayScan> {
    let d = a.dim();
    if d != spec.dim() {
        return Err(Error::DimensionMismatch("atom and spec".into()));
    }
    if spec.intervals.len() != 1 || d > 2 {
        return Err(Error::InvalidParameter("decay scans support one moment axis and d <= 2".into()));
    }
    if d == 1 && side == ScanSide::Exterior {
        return Err(Error::InvalidParameter("the exterior region needs a second axis".into()));
    }
    if rs.len() < 4 {
        return Err(Error::InvalidParameter("fit needs at least 4 values of r".into()));
    }
    let p = spec.p;
    let n_mom = spec.moment_order();
    let predicted = -(n_mom as f64 * p + 2.0 * p - 1.0);
    let gl = GaussLegendre::new(settings.nodes);
    let (i0, i1) = spec.intervals[0];
    let k = -(i1 - i0).log2();
    let r_min = *rs.iter().min().unwrap();
    let r_max = *rs.iter().max().unwrap();
    let octaves = (r_max - r_min + settings.depth) as usize;
    let (t1, w1, oct) = octave_nodes(2f64.powf(k - r_min as f64), octaves, &gl);
    let mut flags = Vec::new();
    let moments_vanish = check_atom(spec, a)?.max_moment <= 1e-10 * a.lp_norm(1.0);
    if !moments_vanish {
        flags.push("moments".to_string());
    }
    let m1 = psi_kernel(a.axis(0), &t1, variant, moments_vanish.then_some(n_mom), &gl);
    let mut values = contract_axis(a.values(), &a.shape(), 0, &m1, t1.len());
    let (w2, tag2) = if d == 2 {
        let (lo2, hi2) = spec.rest[0];
        let y = 1.0 / (hi2 - lo2);
        let ext = lo2.abs().max(hi2.abs());
        let (t2, w2, tag2) = match side {
            ScanSide::Interior => band_nodes(y, y * settings.reach, std::f64::consts::PI / (2.0 * ext), &gl),
            ScanSide::Exterior => {
                let (t, w, _) = octave_nodes(y, settings.depth as usize, &gl);
                let n = t.len();
                (t, w, vec![0; n])
            }
        };
        let m2 = psi_kernel(a.axis(1), &t2, variant, moments_vanish.then_some(0), &gl);
        values = contract_axis(&values, &[t1.len(), a.axis(1).cells()], 1, &m2, t2.len());
        let w2: Vec<f64> = t2.iter().zip(&w2).map(|(t, w)| w / (t * t)).collect();
        (w2, tag2)
    } else {
        (vec![1.0], vec![0])
    };
    let n2 = w2.len();
    let mut per_octave = vec![0.0; octaves];
    let mut tail_octave = vec![0.0; octaves];
    for (r1, (&t, &w)) in t1.iter().zip(&w1).enumerate() {
        let base = w / (t * t);
        let row = &values[r1 * n2..(r1 + 1) * n2];
        for (j, z) in row.iter().enumerate() {
            let c = base * w2[j] * z.norm().powf(p);
            per_octave[oct[r1]] += c;
            if tag2[j] == 1 {
                tail_octave[oct[r1]] += c;
            }
        }
    }
    let mut js = Vec::with_capacity(rs.len());
    let mut tails = Vec::with_capacity(rs.len());
    for &r in rs {
        let from = (r - r_min) as usize;
        js.push(per_octave[from..].iter().sum::<f64>());
        tails.push(tail_octave[from..].iter().sum::<f64>());
    }
    let slope = if js.iter().all(|&j| j > 0.0) {
        let xs: Vec<f64> = rs.iter().map(|&r| r as f64).collect();
        let ys: Vec<f64> = js.iter().map(|j| j.log2()).collect();
        ls_slope(&xs, &ys)
    } else {
        flags.push("zero".to_string());
        f64::NAN
    };
    if js.iter().zip(&tails).any(|(j, t)| *t > 0.1 * j) {
        flags.push("tail>10%".to_string());
    }
    Ok(DecayScan { p, moment_order: n_mom, variant, rs: rs.to_vec(), js, tails, slope, predicted, flags })
}

/// Scan of `(prod t_j) F a`.
pub fn atom_decay_scan(a: &GridFunction, spec: &AtomSpec, rs: &[i32], side: ScanSide) -> Result<DecayScan> {
    decay_scan(a, spec, rs, side, ScanVariant::Fourier, &ScanSettings::default())
}

/// Scan of `(prod t_j) H F a`.
pub fn hardy_variant_decay(a: &GridFunction, spec: &AtomSpec, rs: &[i32]) -> Result<DecayScan> {
    decay_scan(a, spec, rs, ScanSide::Interior, ScanVariant::HardyFourier, &ScanSettings::default())
}

/// Largest `|H a|` at cells of the Hardy output grid outside the bounding
/// box of the support of `a`.
pub fn hardy_support_leak(a: &GridFunction) -> Result<f64> {
    let d = a.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for_each_index(&a.shape(), |idx| {
        if a.value(idx).norm() != 0.0 {
            for (i, &k) in idx.iter().enumerate() {
                let (x0, x1) = a.axis(i).cell(k);
                lo[i] = lo[i].min(x0);
                hi[i] = hi[i].max(x1);
            }
        }
    });
    let h = crate::hardy::hardy_eps(a, &crate::hardy::EpsilonMask::zeros(d))?;
    let mut leak: f64 = 0.0;
    for_each_index(&h.shape(), |idx| {
        let outside = idx.iter().enumerate().any(|(i, &k)| {
            let (x0, x1) = h.axis(i).cell(k);
            x1 <= lo[i] || x0 >= hi[i]
        });
        if outside {
            leak = leak.max(h.value(idx).norm());
        }
    });
    Ok(leak)
}
