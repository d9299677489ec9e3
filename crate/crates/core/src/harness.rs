//! Both sides of the weighted Fourier and Hardy inequalities, parameter
//! validation, and refinement sweeps that estimate empirical constants.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{truncated_fourier, FrequencyGrid};
use crate::grid::{weighted_integral, weighted_power_integral, Axis, GridFunction, WeightedNormSpec};
use crate::hardy::{hardy_weighted_power, EpsilonMask, HardyGrid};
use crate::netspace::{net_norm, net_profile, DyadicLattice};
use crate::rearrange::{lorentz_norm, LorentzParams};

/// Which constraint chain the parameters must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Pitt,
    Thm2,
    Thm3,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pitt" => Ok(Self::Pitt),
            "thm2" => Ok(Self::Thm2),
            "thm3" => Ok(Self::Thm3),
            other => Err(Error::Parse(format!("unknown variant {other:?}"))),
        }
    }
}

/// Indices of a weighted Fourier inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PittParams {
    pub d: usize,
    pub r: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub variant: Variant,
}

/// Nearest rational with a modest denominator; decimal inputs such as
/// `0.25` or `1/3` rounded to double map back to their exact values.
fn rational(x: f64) -> Option<Rational64> {
    if !x.is_finite() {
        return None;
    }
    // continued fraction, stop once the approximation reproduces x
    let mut h = (1i64, 0i64);
    let mut k = (0i64, 1i64);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e12 {
            break;
        }
        let ai = a as i64;
        let (h2, k2) = (ai.checked_mul(h.0)?.checked_add(h.1)?, ai.checked_mul(k.0)?.checked_add(k.1)?);
        h = (h2, h.0);
        k = (k2, k.0);
        if k2 > 1_000_000 {
            break;
        }
        if ((h2 as f64) / (k2 as f64) - x).abs() <= 1e-12 * x.abs().max(1.0) {
            return Some(Rational64::new(h2, k2));
        }
        let frac = v - a;
        if frac == 0.0 {
            break;
        }
        v = 1.0 / frac;
    }
    if k.0 > 0 {
        Some(Rational64::new(h.0, k.0))
    } else {
        None
    }
}

/// Every violated clause of the variant's constraint chain, checked in
/// exact rational arithmetic. Empty means valid.
pub fn validate_params(p: &PittParams) -> Vec<String> {
    let mut v = Vec::new();
    if p.d == 0 || p.d > crate::grid::MAX_DIM {
        v.push(format!("dimension {} outside 1..=3", p.d));
    }
    let (Some(r), Some(alpha), Some(beta)) = (rational(p.r), rational(p.alpha), rational(p.beta)) else {
        v.push("r, alpha and beta must be finite".into());
        return v;
    };
    let Some(q) = rational(p.q) else {
        v.push("q < inf".into());
        return v;
    };
    let one = Rational64::from_integer(1);
    if r <= one {
        v.push("1 < r".into());
        return v;
    }
    if r > q {
        v.push("r <= q".into());
    }
    let inv_rp = one - one / r;
    let inv_q = one / q;
    if alpha != inv_rp - inv_q - beta {
        v.push("alpha = 1/r' - 1/q - beta".into());
    }
    match p.variant {
        Variant::Pitt | Variant::Thm2 => {
            if alpha < Rational64::from_integer(0) {
                v.push("0 <= alpha".into());
            }
        }
        Variant::Thm3 => {
            if alpha < inv_rp - inv_q {
                v.push("1/r' - 1/q <= alpha".into());
            }
        }
    }
    if alpha >= inv_rp {
        v.push("alpha < 1/r'".into());
    }
    if p.variant == Variant::Pitt && beta > Rational64::from_integer(0) {
        v.push("beta <= 0".into());
    }
    v
}

/// The inequalities the harness can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IneqKind {
    HausdorffYoung,
    Pitt,
    PittDiag,
    Thm2,
    Thm2Diag,
    Thm3,
    Thm3Diag,
    HardyLp,
    HardyHB,
    ReverseHardy,
    HardyAverages,
}

impl IneqKind {
    pub const ALL: [IneqKind; 11] = [
        Self::HausdorffYoung,
        Self::Pitt,
        Self::PittDiag,
        Self::Thm2,
        Self::Thm2Diag,
        Self::Thm3,
        Self::Thm3Diag,
        Self::HardyLp,
        Self::HardyHB,
        Self::ReverseHardy,
        Self::HardyAverages,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::HausdorffYoung => "hausdorff_young",
            Self::Pitt => "pitt",
            Self::PittDiag => "pitt_diag",
            Self::Thm2 => "thm2",
            Self::Thm2Diag => "thm2_diag",
            Self::Thm3 => "thm3",
            Self::Thm3Diag => "thm3_diag",
            Self::HardyLp => "hardy_lp",
            Self::HardyHB => "hardy_HB",
            Self::ReverseHardy => "reverse_hardy",
            Self::HardyAverages => "hardy_averages",
        }
    }

    /// Kinds whose left side lives on the frequency side.
    pub fn is_transform_side(&self) -> bool {
        matches!(
            self,
            Self::HausdorffYoung | Self::Pitt | Self::PittDiag | Self::Thm2 | Self::Thm2Diag | Self::Thm3 | Self::Thm3Diag
        )
    }
}

impl fmt::Display for IneqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IneqKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::Parse(format!("unknown inequality kind {t:?}")))
    }
}

/// Indices used by a kind. `r` doubles as the Lebesgue exponent `p` for
/// the Hardy kinds; `q` and `beta` parametrize the weighted averages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IneqParams {
    pub r: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl IneqParams {
    pub fn with_r(r: f64) -> Self {
        Self { r, q: r, alpha: 0.0, beta: 0.0 }
    }
}

/// Both sides of one inequality evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub kind: String,
    pub level: usize,
    pub n: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// norm-unit contribution (or bound) from beyond the computed grids
    pub tail_lhs: f64,
    pub tail_rhs: f64,
    pub flags: Vec<String>,
    /// cells of the input grid
    pub cells: usize,
}

impl InequalityReport {
    fn new(kind: &str, lhs: f64, rhs: f64, tail_lhs: f64, tail_rhs: f64, n: f64, cells: usize) -> Self {
        let ratio = if rhs == 0.0 {
            if lhs == 0.0 {
                f64::NAN
            } else {
                f64::INFINITY
            }
        } else {
            lhs / rhs
        };
        let mut flags = Vec::new();
        if ratio.is_nan() {
            flags.push("ratio_nan".to_string());
        } else if ratio.is_infinite() {
            flags.push("ratio_inf".to_string());
        }
        if lhs.is_finite() && tail_lhs > 0.1 * lhs {
            flags.push("tail_lhs>10%".to_string());
        }
        if rhs.is_finite() && tail_rhs > 0.1 * rhs {
            flags.push("tail_rhs>10%".to_string());
        }
        Self { kind: kind.to_string(), level: 0, n, lhs, rhs, ratio, tail_lhs, tail_rhs, flags, cells }
    }

    pub fn flagged(&self) -> bool {
        !self.flags.is_empty()
    }

    pub fn csv_header() -> [&'static str; 9] {
        ["kind", "level", "N", "lhs", "rhs", "ratio", "tail_lhs", "tail_rhs", "flags"]
    }

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.kind.clone(),
            self.level.to_string(),
            self.n.to_string(),
            self.lhs.to_string(),
            self.rhs.to_string(),
            self.ratio.to_string(),
            self.tail_lhs.to_string(),
            self.tail_rhs.to_string(),
            self.flags.join(";"),
        ]
    }
}

pub fn write_reports<W: Write>(reports: &[InequalityReport], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(InequalityReport::csv_header())?;
    for r in reports {
        wr.write_record(r.csv_row())?;
    }
    wr.flush()?;
    Ok(())
}

/// Frequency grid adapted to `f`: geometric near 0, then uniform steps
/// resolving oscillations of period `2 pi / extent`, out to a multiple of
/// the finest jump scale.
pub fn default_frequency_grid(f: &GridFunction) -> Result<FrequencyGrid> {
    let d = f.dim();
    let radius = f.axes().iter().map(|a| a.lo().abs().max(a.hi().abs())).fold(0.0, f64::max);
    let min_w = f.axes().iter().map(Axis::min_width).fold(f64::INFINITY, f64::min);
    let (reach, per_octave) = if d == 1 { (16.0, 8) } else { (4.0, 4) };
    let outer = reach * std::f64::consts::PI / min_w;
    let h_max = std::f64::consts::PI / (if d == 1 { 4.0 } else { 1.5 } * radius);
    let inner = h_max / 64.0;
    let mut half = crate::fourier::geometric_points(inner, outer.max(2.0 * inner), per_octave);
    // cap the cell width
    let mut capped = vec![half[0]];
    for &x in &half[1..] {
        let last = *capped.last().unwrap();
        if x - last > h_max {
            let steps = ((x - last) / h_max).ceil() as usize;
            for s in 1..steps {
                capped.push(last + (x - last) * s as f64 / steps as f64);
            }
        }
        capped.push(x);
    }
    half = capped;
    let mut bp: Vec<f64> = half.iter().rev().map(|x| -x).collect();
    bp.push(0.0);
    bp.extend(&half);
    FrequencyGrid::new(vec![Axis::new(bp)?; d])
}

/// Settings shared by every evaluation of a sweep.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Harness {
    pub hardy: HardyGrid,
    /// frequency grid; derived from the input when unset
    pub xi: Option<FrequencyGrid>,
}

/// Bound on `int (prod |xi|^beta |F f|)^q` outside the frequency grid, from
/// `|F f(xi)| <= C_i / |xi_i|` along each axis.
fn transform_tail_power(f: &GridFunction, xi: &FrequencyGrid, beta: f64, q: f64) -> f64 {
    let d = f.dim();
    let bq = beta * q;
    let mut total = 0.0;
    for i in 0..d {
        let c: f64 = f.fiber_variations(i).iter().map(|(vol, tv)| vol * tv).sum();
        if c == 0.0 {
            continue;
        }
        let w = xi.axes()[i].hi();
        let g = bq - q;
        if g >= -1.0 || bq <= -1.0 {
            return f64::INFINITY;
        }
        let mut term = c.powf(q) * 2.0 * w.powf(g + 1.0) / (-g - 1.0);
        for j in 0..d {
            if j != i {
                let wj = xi.axes()[j].hi();
                term *= 2.0 * wj.powf(bq + 1.0) / (bq + 1.0);
            }
        }
        total += term;
    }
    total
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.into()))
    }
}

fn check_variant(d: usize, r: f64, q: f64, alpha: f64, beta: f64, variant: Variant) -> Result<()> {
    let v = validate_params(&PittParams { d, r, q, alpha, beta, variant });
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("violated: {}", v.join(", "))))
    }
}

/// Weighted norm, `inf` when the weight is not integrable against `f`.
fn weighted_or_inf(f: &GridFunction, w: &WeightedNormSpec) -> Result<f64> {
    match weighted_integral(f, w) {
        Err(Error::NonIntegrableWeight { .. }) => Ok(f64::INFINITY),
        other => other,
    }
}

impl Harness {
    fn xi_for(&self, f: &GridFunction) -> Result<FrequencyGrid> {
        match &self.xi {
            Some(x) => Ok(x.clone()),
            None => default_frequency_grid(f),
        }
    }

    /// Evaluates both sides of `kind` for `f`.
    pub fn ratio(
        &self,
        kind: IneqKind,
        f: &GridFunction,
        params: &IneqParams,
        eps: Option<&EpsilonMask>,
        n: Option<f64>,
    ) -> Result<InequalityReport> {
        let d = f.dim();
        let cells = f.values().len();
        let n = n.unwrap_or(f64::INFINITY);
        let r = params.r;
        let eps_owned = eps.cloned().unwrap_or_else(|| EpsilonMask::zeros(d));
        if eps_owned.dim() != d {
            return Err(Error::DimensionMismatch("mask dimension".into()));
        }
        let name = kind.name();
        // (lhs, rhs, tail_lhs, tail_rhs)
        let sides = match kind {
            IneqKind::HausdorffYoung | IneqKind::Pitt | IneqKind::PittDiag => {
                let (q, alpha, beta) = match kind {
                    IneqKind::HausdorffYoung => {
                        require(r > 1.0 && r <= 2.0, format!("Hausdorff-Young needs 1 < r <= 2, got {r}"))?;
                        (r / (r - 1.0), 0.0, 0.0)
                    }
                    IneqKind::PittDiag => {
                        require(r > 1.0 && r <= 2.0, format!("pitt_diag needs 1 < r <= 2, got {r}"))?;
                        (r, 0.0, 1.0 - 2.0 / r)
                    }
                    _ => {
                        check_variant(d, r, params.q, params.alpha, params.beta, Variant::Pitt)?;
                        (params.q, params.alpha, params.beta)
                    }
                };
                let xi = self.xi_for(f)?;
                let ff = truncated_fourier(f, n, &xi)?;
                let lhs_p = weighted_power_integral(&ff, &WeightedNormSpec::isotropic(d, beta, q)?)?;
                let tail = transform_tail_power(f, &xi, beta, q);
                let lhs = lhs_p.powf(1.0 / q);
                let rhs = weighted_or_inf(f, &WeightedNormSpec::isotropic(d, alpha, r)?)?;
                (lhs, rhs, (lhs_p + tail).powf(1.0 / q) - lhs, 0.0)
            }
            IneqKind::Thm2 | IneqKind::Thm2Diag | IneqKind::Thm3 | IneqKind::Thm3Diag => {
                let (q, alpha, beta, variant) = match kind {
                    IneqKind::Thm2Diag => (r, 0.0, 1.0 - 2.0 / r, Variant::Thm2),
                    IneqKind::Thm3Diag => (r, 1.0 - 2.0 / r, 0.0, Variant::Thm3),
                    IneqKind::Thm2 => (params.q, params.alpha, params.beta, Variant::Thm2),
                    _ => (params.q, params.alpha, params.beta, Variant::Thm3),
                };
                check_variant(d, r, q, alpha, beta, variant)?;
                let xi = self.xi_for(f)?;
                let ff = truncated_fourier(f, n, &xi)?;
                let hp = hardy_weighted_power(&ff, &eps_owned, &self.hardy, &WeightedNormSpec::isotropic(d, beta, q)?)?;
                let lhs = hp.norm(q);
                let cut = transform_tail_power(f, &xi, beta, q);
                let tail = hp.tail_norm(q) + ((hp.grid_part + hp.tail_part + cut).powf(1.0 / q) - lhs);
                let rhs = weighted_or_inf(f, &WeightedNormSpec::isotropic(d, alpha, r)?)?;
                (lhs, rhs, tail, 0.0)
            }
            IneqKind::HardyLp => {
                require(r > 1.0 && r.is_finite(), format!("hardy_lp needs 1 < p < inf, got {r}"))?;
                let hp = hardy_weighted_power(f, &eps_owned, &self.hardy, &WeightedNormSpec::unweighted(d, r)?)?;
                (hp.norm(r), f.lp_norm(r), hp.tail_norm(r), 0.0)
            }
            IneqKind::HardyHB => {
                let bits = eps_owned.bits();
                let all0 = bits.iter().all(|&b| b == 0);
                let all1 = bits.iter().all(|&b| b == 1);
                require(all0 || all1, "hardy_HB needs the all-zeros (H) or all-ones (B) mask")?;
                if all0 {
                    require(r > 1.0, format!("H needs 1 < p <= inf, got {r}"))?;
                } else {
                    require(r >= 1.0 && r.is_finite(), format!("B needs 1 <= p < inf, got {r}"))?;
                }
                if r.is_infinite() {
                    // sup of cell averages; beyond the grid |H f| only decays
                    let h = crate::hardy::hardy_eps_with(f, &eps_owned, &self.hardy)?;
                    (h.sup_abs(), f.sup_abs(), 0.0, 0.0)
                } else {
                    let hp = hardy_weighted_power(f, &eps_owned, &self.hardy, &WeightedNormSpec::unweighted(d, r)?)?;
                    (hp.norm(r), f.lp_norm(r), hp.tail_norm(r), 0.0)
                }
            }
            IneqKind::ReverseHardy => {
                require(r > 0.0 && r <= 1.0, format!("reverse Hardy needs 0 < p <= 1, got {r}"))?;
                if f.values().iter().any(|v| v.im != 0.0 || v.re < 0.0) {
                    return Err(Error::Precondition("reverse Hardy inequality needs f >= 0".into()));
                }
                let w = WeightedNormSpec::isotropic(d, (r - 2.0) / r, r)?;
                let lhs = weighted_or_inf(f, &w)?;
                match hardy_weighted_power(f, &EpsilonMask::zeros(d), &self.hardy, &w) {
                    Ok(hp) => (lhs, hp.norm(r), 0.0, hp.tail_norm(r)),
                    Err(Error::NonIntegrableWeight { .. }) => (lhs, f64::INFINITY, 0.0, 0.0),
                    Err(e) => return Err(e),
                }
            }
            IneqKind::HardyAverages => {
                let q = params.q;
                let beta = params.beta;
                require(q >= 1.0 && q.is_finite(), format!("averages need 1 <= q < inf, got {q}"))?;
                require(
                    beta > -1.0 / q && beta < 1.0 - 1.0 / q,
                    format!("averages need -1/q < beta < 1 - 1/q, got beta = {beta}"),
                )?;
                let w = WeightedNormSpec::isotropic(d, beta, q)?;
                let h = hardy_weighted_power(f, &EpsilonMask::zeros(d), &self.hardy, &w)?;
                let b = hardy_weighted_power(f, &EpsilonMask::ones(d), &self.hardy, &w)?;
                let total = h.grid_part + h.tail_part + b.grid_part + b.tail_part;
                let lhs = total.powf(1.0 / q);
                let inner = (h.grid_part + b.grid_part).powf(1.0 / q);
                (lhs, weighted_or_inf(f, &w)?, lhs - inner, 0.0)
            }
        };
        let (lhs, rhs, tl, tr) = sides;
        Ok(InequalityReport::new(name, lhs, rhs, tl, tr, n, cells))
    }

    /// `||F_N f||_{N_{p',q}}` against `||f||_{L_{p,q}}`.
    pub fn hlp_net_ratio(&self, f: &GridFunction, p: f64, q: f64, n: f64) -> Result<InequalityReport> {
        require(p > 1.0 && p.is_finite(), format!("need 1 < p < inf, got {p}"))?;
        let d = f.dim();
        let xi = match &self.xi {
            Some(x) => x.clone(),
            None => default_net_grid(f)?,
        };
        let ff = truncated_fourier(f, n, &xi)?;
        let lattice = DyadicLattice::covering(&ff);
        let nn = net_norm(&net_profile(&ff, &lattice)?, p / (p - 1.0), q)?;
        let rhs = lorentz_norm(f, &LorentzParams::uniform(d, p, q)?)?;
        let mut rep = InequalityReport::new("hlp_net", nn.value, rhs, nn.value - nn.lattice_value, 0.0, n, f.values().len());
        if nn.truncated {
            rep.flags.push("lattice_truncated".into());
        }
        Ok(rep)
    }

    /// The net-space ratio for each `N`, to exhibit `N`-independence.
    pub fn hlp_net_sweep(&self, f: &GridFunction, p: f64, q: f64, ns: &[f64]) -> Result<Vec<InequalityReport>> {
        let xi = match &self.xi {
            Some(x) => x.clone(),
            None => default_net_grid(f)?,
        };
        let h = Harness { xi: Some(xi), ..self.clone() };
        ns.iter().map(|&n| h.hlp_net_ratio(f, p, q, n)).collect()
    }
}

/// Uniform frequency grid for net norms (the rectangle supremum is
/// quadratic in the number of cells per axis, so keep it modest).
pub fn default_net_grid(f: &GridFunction) -> Result<FrequencyGrid> {
    let d = f.dim();
    let radius = f.axes().iter().map(|a| a.lo().abs().max(a.hi().abs())).fold(0.0, f64::max);
    let min_w = f.axes().iter().map(Axis::min_width).fold(f64::INFINITY, f64::min);
    let pi = std::f64::consts::PI;
    let (reach, per_radian) = if d == 1 { (8.0, 4.0) } else { (2.0, 1.0) };
    let extent = reach * pi / min_w;
    let h = pi / (per_radian * radius);
    let cells = ((extent / h).ceil() as usize).clamp(8, if d == 1 { 2048 } else { 48 });
    FrequencyGrid::uniform(d, extent, cells)
}

pub fn inequality_ratio(
    kind: IneqKind,
    f: &GridFunction,
    params: &IneqParams,
    eps: Option<&EpsilonMask>,
    n: Option<f64>,
) -> Result<InequalityReport> {
    Harness::default().ratio(kind, f, params, eps, n)
}

pub fn hlp_net_ratio(f: &GridFunction, p: f64, q: f64, n: f64) -> Result<InequalityReport> {
    Harness::default().hlp_net_ratio(f, p, q, n)
}

/// Test-function families; level `l` uses `cells * 2^l` cells per axis.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Indicator { bounds: Vec<(f64, f64)> },
    Gaussian { d: usize, sigma: f64, extent: f64 },
    Hat { d: usize, extent: f64 },
    Random { d: usize, extent: f64, seed: u64 },
    Signed { d: usize, extent: f64 },
    Zero { d: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    /// cells per axis at level 0
    pub cells: usize,
}

impl FamilySpec {
    pub fn new(family: Family, cells: usize) -> Self {
        Self { family, cells: cells.max(1) }
    }

    pub fn dim(&self) -> usize {
        match &self.family {
            Family::Indicator { bounds } => bounds.len(),
            Family::Gaussian { d, .. }
            | Family::Hat { d, .. }
            | Family::Random { d, .. }
            | Family::Signed { d, .. }
            | Family::Zero { d } => *d,
        }
    }

    pub fn name(&self) -> &'static str {
        match &self.family {
            Family::Indicator { .. } => "indicator",
            Family::Gaussian { .. } => "gaussian",
            Family::Hat { .. } => "hat",
            Family::Random { .. } => "random",
            Family::Signed { .. } => "signed",
            Family::Zero { .. } => "zero",
        }
    }

    /// The same underlying function on a grid refined `2^level` times.
    pub fn generate(&self, level: usize) -> Result<GridFunction> {
        let n = self.cells << level;
        let sym = |d: usize, extent: f64| -> Result<Vec<Axis>> { Ok(vec![Axis::uniform(-extent, extent, 2 * n)?; d]) };
        match &self.family {
            Family::Indicator { bounds } => {
                let axes = bounds.iter().map(|&(a, b)| Axis::uniform(a, b, n)).collect::<Result<Vec<_>>>()?;
                GridFunction::from_real_fn(axes, |_| 1.0)
            }
            Family::Gaussian { d, sigma, extent } => {
                let s2 = 2.0 * sigma * sigma;
                GridFunction::from_real_fn(sym(*d, *extent)?, |x| (-x.iter().map(|t| t * t).sum::<f64>() / s2).exp())
            }
            Family::Hat { d, extent } => {
                GridFunction::from_real_fn(sym(*d, *extent)?, |x| x.iter().map(|t| 1.0 - t.abs() / extent).product())
            }
            Family::Signed { d, extent } => GridFunction::from_real_fn(sym(*d, *extent)?, |x| {
                x.iter().map(|t| (std::f64::consts::PI * t / extent).sin()).product::<f64>() + 0.25
            }),
            Family::Random { d, extent, seed } => {
                let base_axes = vec![Axis::uniform(-extent, *extent, 2 * self.cells)?; *d];
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let count: usize = base_axes.iter().map(Axis::cells).product();
                let vals: Vec<f64> = (0..count).map(|_| rng.gen::<f64>()).collect();
                let base = GridFunction::from_real(base_axes, vals)?;
                base.resample(&sym(*d, *extent)?)
            }
            Family::Zero { d } => GridFunction::zeros(sym(*d, 1.0)?),
        }
    }
}

/// Everything a sweep needs, readable from flat `key = value` text.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub kind: IneqKind,
    pub family: FamilySpec,
    pub levels: usize,
    pub params: IneqParams,
    pub eps: Option<EpsilonMask>,
    pub n: Option<f64>,
}

fn parse_num<T: FromStr>(map: &BTreeMap<String, String>, key: &str, default: T) -> Result<T> {
    match map.get(key) {
        Some(v) => v.parse::<T>().map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}"))),
        None => Ok(default),
    }
}

fn parse_f64_ext(s: &str) -> Result<f64> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {s:?}"))),
    }
}

impl SweepConfig {
    /// Reads `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            map.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        Self::from_map(&map)
    }

    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let known = [
            "kind", "family", "d", "extent", "sigma", "cells", "levels", "seed", "r", "p", "q", "alpha", "beta", "eps", "n", "bounds",
        ];
        if let Some(k) = map.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown key {k:?}")));
        }
        let kind: IneqKind = map.get("kind").map(String::as_str).unwrap_or("hardy_lp").parse()?;
        let d: usize = parse_num(map, "d", 1)?;
        let extent: f64 = parse_num(map, "extent", 4.0)?;
        let family = match map.get("family").map(|s| s.to_ascii_lowercase()).as_deref().unwrap_or("gaussian") {
            "indicator" => {
                let bounds = match map.get("bounds") {
                    Some(b) => b
                        .split(',')
                        .map(|pair| {
                            let (a, b) = pair
                                .split_once(':')
                                .ok_or_else(|| Error::Parse(format!("bounds entry {pair:?}: expected a:b")))?;
                            Ok((parse_f64_ext(a)?, parse_f64_ext(b)?))
                        })
                        .collect::<Result<Vec<_>>>()?,
                    None => vec![(0.0, 1.0); d],
                };
                Family::Indicator { bounds }
            }
            "gaussian" => Family::Gaussian { d, sigma: parse_num(map, "sigma", 1.0)?, extent },
            "hat" => Family::Hat { d, extent },
            "random" => Family::Random { d, extent, seed: parse_num(map, "seed", 1)? },
            "signed" => Family::Signed { d, extent },
            "zero" => Family::Zero { d },
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        };
        let r = match map.get("r").or_else(|| map.get("p")) {
            Some(v) => parse_f64_ext(v)?,
            None => 2.0,
        };
        let q = match map.get("q") {
            Some(v) => parse_f64_ext(v)?,
            None => r,
        };
        let params = IneqParams { r, q, alpha: parse_num(map, "alpha", 0.0)?, beta: parse_num(map, "beta", 0.0)? };
        let eps = map.get("eps").map(|s| s.parse::<EpsilonMask>()).transpose()?;
        let n = map.get("n").map(|s| parse_f64_ext(s)).transpose()?;
        Ok(Self {
            kind,
            family: FamilySpec::new(family, parse_num(map, "cells", 8)?),
            levels: parse_num(map, "levels", 3)?,
            params,
            eps,
            n,
        })
    }
}

/// Reports per refinement level, in level order. A level whose ratio exceeds
/// the previous one by more than 25% is flagged `growth>25%`.
pub fn refinement_sweep(
    kind: IneqKind,
    family: &FamilySpec,
    levels: usize,
    params: &IneqParams,
    eps: Option<&EpsilonMask>,
    n: Option<f64>,
) -> Result<Vec<InequalityReport>> {
    let base = family.generate(0)?;
    let harness = Harness {
        xi: if kind.is_transform_side() { Some(default_frequency_grid(&base)?) } else { None },
        ..Harness::default()
    };
    let mut reports = (0..levels)
        .into_par_iter()
        .map(|level| {
            let f = family.generate(level)?;
            let mut rep = harness.ratio(kind, &f, params, eps, n)?;
            rep.level = level;
            Ok(rep)
        })
        .collect::<Result<Vec<InequalityReport>>>()?;
    flag_growth(&mut reports);
    Ok(reports)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<InequalityReport>> {
    refinement_sweep(cfg.kind, &cfg.family, cfg.levels, &cfg.params, cfg.eps.as_ref(), cfg.n)
}

fn flag_growth(reports: &mut [InequalityReport]) {
    for l in 1..reports.len() {
        let (prev, cur) = (reports[l - 1].ratio, reports[l].ratio);
        if prev.is_finite() && cur.is_finite() && cur > 1.25 * prev {
            reports[l].flags.push("growth>25%".into());
        }
    }
}

/// `max / min - 1` of the finite ratios (NaN if none).
pub fn ratio_spread(reports: &[InequalityReport]) -> f64 {
    let r: Vec<f64> = reports.iter().map(|x| x.ratio).filter(|x| x.is_finite()).collect();
    if r.is_empty() {
        return f64::NAN;
    }
    let max = r.iter().cloned().fold(f64::MIN, f64::max);
    let min = r.iter().cloned().fold(f64::MAX, f64::min);
    max / min - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(r: f64, q: f64, alpha: f64, beta: f64, variant: Variant) -> PittParams {
        PittParams { d: 1, r, q, alpha, beta, variant }
    }

    #[test]
    fn validation_examples() {
        assert!(validate_params(&pp(4.0, 4.0, 0.0, 0.5, Variant::Thm2)).is_empty());
        assert!(validate_params(&pp(4.0, 4.0, 0.5, 0.0, Variant::Thm3)).is_empty());
        let v = validate_params(&pp(4.0, 2.0, -1.0, 0.0, Variant::Pitt));
        assert!(v.iter().any(|c| c == "0 <= alpha"), "{v:?}");
        assert!(v.iter().any(|c| c == "r <= q"), "{v:?}");
        // thirds survive the round trip through doubles
        assert!(validate_params(&pp(1.5, 1.5, 1.0 - 2.0 / 1.5, 0.0, Variant::Thm3)).is_empty());
        assert!(validate_params(&pp(3.0, 3.0, 0.0, 1.0 / 3.0, Variant::Thm2)).is_empty());
    }

    #[test]
    fn hardy_lp_indicator() {
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let rep = inequality_ratio(IneqKind::HardyLp, &f, &IneqParams::with_r(2.0), None, None).unwrap();
        assert!((rep.lhs - 2f64.sqrt()).abs() < 1e-4, "{rep:?}");
        assert!((rep.ratio - 2f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn reverse_hardy_p1_equality() {
        // at p = 1 both sides equal int f(x) / x dx
        let f = GridFunction::indicator(&[(1.0, 2.0)]).unwrap();
        let rep = inequality_ratio(IneqKind::ReverseHardy, &f, &IneqParams::with_r(1.0), None, None).unwrap();
        assert!((rep.lhs - 2f64.ln()).abs() < 1e-12);
        assert!((rep.rhs - 2f64.ln()).abs() < 1e-3, "{rep:?}");
        // chi_(0,1): both sides diverge at 0
        let g = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let rep = inequality_ratio(IneqKind::ReverseHardy, &g, &IneqParams::with_r(1.0), None, None).unwrap();
        assert!(rep.lhs.is_infinite() && rep.rhs.is_infinite() && rep.ratio.is_nan());
        let s = GridFunction::from_real(vec![Axis::new(vec![1.0, 2.0, 3.0]).unwrap()], vec![1.0, -1.0]).unwrap();
        assert!(inequality_ratio(IneqKind::ReverseHardy, &s, &IneqParams::with_r(0.5), None, None).is_err());
    }

    #[test]
    fn zero_function_flagged() {
        let z = GridFunction::zeros(vec![Axis::uniform(-1.0, 1.0, 4).unwrap()]).unwrap();
        let rep = inequality_ratio(IneqKind::Thm2Diag, &z, &IneqParams::with_r(3.0), None, None).unwrap();
        assert_eq!((rep.lhs, rep.rhs), (0.0, 0.0));
        assert!(rep.ratio.is_nan() && rep.flagged());
    }

    #[test]
    fn homogeneity() {
        let fam = FamilySpec::new(Family::Gaussian { d: 1, sigma: 0.7, extent: 3.0 }, 8);
        let f = fam.generate(0).unwrap();
        let f10 = f.scale_real(10.0);
        for kind in [IneqKind::HardyLp, IneqKind::PittDiag, IneqKind::Thm3Diag] {
            let p = IneqParams::with_r(if kind == IneqKind::Thm3Diag { 4.0 } else { 1.5 });
            let a = inequality_ratio(kind, &f, &p, None, None).unwrap();
            let b = inequality_ratio(kind, &f10, &p, None, None).unwrap();
            assert!((a.ratio - b.ratio).abs() < 1e-10 * a.ratio, "{kind}");
        }
    }

    #[test]
    fn plancherel_normalization_at_r2() {
        // thm2_diag at r = 2 is ||H F f||_2 vs ||f||_2; pitt_diag at r = 2 is Plancherel
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let rep = inequality_ratio(IneqKind::PittDiag, &f, &IneqParams::with_r(2.0), None, None).unwrap();
        let expected = (2.0 * std::f64::consts::PI).sqrt();
        assert!((rep.ratio / expected - 1.0).abs() < 0.02, "{rep:?}");
    }

    #[test]
    fn config_parsing_and_zero_family() {
        let cfg = SweepConfig::parse("# test\nkind = hardy_lp\nfamily = zero\nlevels = 2\np = 2\n").unwrap();
        let reps = run_sweep(&cfg).unwrap();
        assert_eq!(reps.len(), 2);
        assert!(reps.iter().all(|r| r.ratio.is_nan() && r.flagged()));
        assert!(SweepConfig::parse("bogus = 1").is_err());
        let signed = SweepConfig::parse("kind = reverse_hardy\nfamily = signed\np = 0.5\n").unwrap();
        assert!(matches!(run_sweep(&signed), Err(Error::Precondition(_))));
    }

    #[test]
    fn hardy_lp_gaussian_stabilizes() {
        let fam = FamilySpec::new(Family::Gaussian { d: 1, sigma: 1.0, extent: 4.0 }, 8);
        let reps = refinement_sweep(IneqKind::HardyLp, &fam, 4, &IneqParams::with_r(2.0), None, None).unwrap();
        assert!(reps.iter().all(|r| !r.flags.iter().any(|f| f == "growth>25%")));
        assert!(ratio_spread(&reps) < 0.05, "{reps:?}");
    }

    #[test]
    fn hlp_scaling() {
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let a = hlp_net_ratio(&f, 2.0, 2.0, 2.0).unwrap();
        let b = hlp_net_ratio(&f.scale_real(10.0), 2.0, 2.0, 2.0).unwrap();
        assert!((b.lhs / a.lhs - 10.0).abs() < 1e-9 && (b.rhs / a.rhs - 10.0).abs() < 1e-12);
        assert!((a.ratio - b.ratio).abs() < 1e-10 * a.ratio);
        let z = GridFunction::zeros(vec![Axis::uniform(0.0, 1.0, 2).unwrap()]).unwrap();
        assert!(hlp_net_ratio(&z, 2.0, 2.0, 2.0).unwrap().ratio.is_nan());
    }
}
