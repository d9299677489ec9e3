//! Non-increasing rearrangements, iterated rearrangements and the
//! iterated-rearrangement Lorentz norms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{for_each_index, power_integral, strides_of, Axis, GridFunction};

/// Per-axis Lorentz indices `p_i in (0, inf)`, `q_i in (0, inf]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzParams {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl LorentzParams {
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch("p and q lengths differ".into()));
        }
        for (&pi, &qi) in p.iter().zip(&q) {
            if !(pi > 0.0 && pi.is_finite()) || !(qi > 0.0) {
                return Err(Error::InvalidParameter(format!("need 0 < p < inf and 0 < q <= inf, got ({pi}, {qi})")));
            }
        }
        Ok(Self { p, q })
    }

    pub fn uniform(d: usize, p: f64, q: f64) -> Result<Self> {
        Self::new(vec![p; d], vec![q; d])
    }
}

/// Merges breakpoints closer than `tol` (keeps the first of a cluster).
fn merge_close(mut bp: Vec<f64>, tol: f64) -> Vec<f64> {
    bp.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(bp.len());
    for b in bp {
        match out.last() {
            Some(&last) if b - last <= tol => {}
            _ => out.push(b),
        }
    }
    out
}

/// Rearranges `|f|` along axis `i`: on every fiber the cell masses are
/// reordered by decreasing modulus onto `(0, extent)`. Ties keep the original
/// cell order.
pub fn rearrange_axis(f: &GridFunction, i: usize) -> Result<GridFunction> {
    if i >= f.dim() {
        return Err(Error::InvalidParameter(format!("axis {i} out of range for d = {}", f.dim())));
    }
    let shape = f.shape();
    let strides = f.strides();
    let axis = f.axis(i);
    let n = shape[i];
    let mut fiber_shape = shape.clone();
    fiber_shape[i] = 1;

    // sorted (cumulative end, value) per fiber
    let mut fibers: Vec<(usize, Vec<f64>, Vec<f64>)> = Vec::new();
    let mut all_ends = vec![0.0];
    for_each_index(&fiber_shape, |idx| {
        let base: usize = idx.iter().zip(&strides).map(|(&j, s)| j * s).sum();
        let mut cells: Vec<(f64, f64)> = (0..n)
            .map(|j| (f.values()[base + j * strides[i]].norm(), axis.width(j)))
            .collect();
        cells.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut ends = Vec::with_capacity(n);
        let mut vals = Vec::with_capacity(n);
        let mut acc = 0.0;
        for (v, w) in cells {
            acc += w;
            ends.push(acc);
            vals.push(v);
        }
        all_ends.extend_from_slice(&ends);
        fibers.push((base, ends, vals));
    });
    let total = axis.extent();
    let bp = merge_close(all_ends, 1e-14 * total);
    let new_axis = Axis::new(bp)?;
    let m = new_axis.cells();

    let mut out_shape = shape.clone();
    out_shape[i] = m;
    let out_strides = strides_of(&out_shape);
    let mut values = vec![Complex64::new(0.0, 0.0); out_shape.iter().product()];
    for (base, ends, vals) in &fibers {
        // old multi-index of the fiber base -> new flat base
        let mut rem = *base;
        let mut new_base = 0;
        for k in 0..shape.len() {
            let jk = rem / strides[k];
            rem %= strides[k];
            if k != i {
                new_base += jk * out_strides[k];
            }
        }
        let mut pos = 0;
        for j in 0..m {
            let mid = new_axis.midpoint(j);
            while pos + 1 < ends.len() && ends[pos] <= mid {
                pos += 1;
            }
            values[new_base + j * out_strides[i]] = Complex64::new(vals[pos], 0.0);
        }
    }
    let mut axes = f.axes().to_vec();
    axes[i] = new_axis;
    Ok(GridFunction::from_parts_unchecked(axes, values))
}

/// `f^{*_1, ..., *_d}`: rearrangement along axes 0, 1, ..., d-1 in turn.
pub fn iterative_rearrange(f: &GridFunction) -> Result<GridFunction> {
    let mut g = f.clone();
    for i in 0..f.dim() {
        g = rearrange_axis(&g, i)?;
    }
    Ok(g)
}

/// Whether the (real parts of the) values are non-increasing along `axis`,
/// allowing `tol` slack.
pub fn is_nonincreasing_along(f: &GridFunction, axis: usize, tol: f64) -> bool {
    let shape = f.shape();
    let strides = f.strides();
    let mut fiber_shape = shape.clone();
    fiber_shape[axis] = 1;
    let mut ok = true;
    for_each_index(&fiber_shape, |idx| {
        let base: usize = idx.iter().zip(&strides).map(|(&j, s)| j * s).sum();
        for j in 1..shape[axis] {
            let prev = f.values()[base + (j - 1) * strides[axis]].re;
            let cur = f.values()[base + j * strides[axis]].re;
            if cur > prev + tol {
                ok = false;
            }
        }
    });
    ok
}

/// Iterated Lorentz norm: innermost integral over `t_1` with indices
/// `(p_1, q_1)`, outermost over `t_d`. Exact for piecewise-constant profiles.
pub fn lorentz_norm(f: &GridFunction, lp: &LorentzParams) -> Result<f64> {
    let d = f.dim();
    if lp.p.len() != d {
        return Err(Error::DimensionMismatch(format!("{} Lorentz indices for d = {d}", lp.p.len())));
    }
    let rearranged = iterative_rearrange(f)?;
    let mut shape = rearranged.shape();
    let mut vals: Vec<f64> = rearranged.values().iter().map(|v| v.re).collect();
    for i in 0..d {
        let axis = rearranged.axis(i);
        let (p, q) = (lp.p[i], lp.q[i]);
        // current array has axes i..d, axis i leading
        let n = shape[0];
        let inner: usize = shape[1..].iter().product();
        let weights: Vec<f64> = (0..n)
            .map(|j| {
                let (a, b) = axis.cell(j);
                if q.is_infinite() {
                    b.powf(1.0 / p)
                } else {
                    power_integral(a, b, q / p - 1.0)
                }
            })
            .collect();
        let mut next = vec![0.0; inner];
        for (r, slot) in next.iter_mut().enumerate() {
            if q.is_infinite() {
                *slot = (0..n).map(|j| vals[j * inner + r] * weights[j]).fold(0.0, f64::max);
            } else {
                let s: f64 = (0..n)
                    .map(|j| {
                        let v = vals[j * inner + r];
                        if v == 0.0 {
                            0.0
                        } else {
                            v.powf(q) * weights[j]
                        }
                    })
                    .sum();
                if !s.is_finite() {
                    return Err(Error::Precondition("Lorentz profile is not integrable".into()));
                }
                *slot = s.powf(1.0 / q);
            }
        }
        vals = next;
        shape.remove(0);
    }
    Ok(vals[0])
}

/// Both sides of the Hardy-Littlewood-Polya pairing inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HlpPair {
    pub lhs: f64,
    pub rhs: f64,
}

/// Step function on `(0, ends.last())`: value `vals[k]` on `(ends[k-1], ends[k])`.
struct Step {
    ends: Vec<f64>,
    vals: Vec<f64>,
}

impl Step {
    fn from_sorted(mut cells: Vec<(f64, f64)>, descending: bool) -> Self {
        // (value, width)
        if descending {
            cells.sort_by(|a, b| b.0.total_cmp(&a.0));
        } else {
            cells.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        let mut acc = 0.0;
        let mut ends = Vec::with_capacity(cells.len());
        let mut vals = Vec::with_capacity(cells.len());
        for (v, w) in cells {
            acc += w;
            ends.push(acc);
            vals.push(v);
        }
        Self { ends, vals }
    }

    fn product_integral(&self, other: &Step) -> f64 {
        let (mut i, mut j) = (0, 0);
        let mut left = 0.0f64;
        let mut s = 0.0;
        while i < self.ends.len() && j < other.ends.len() {
            let right = self.ends[i].min(other.ends[j]);
            s += self.vals[i] * other.vals[j] * (right - left).max(0.0);
            left = right;
            if self.ends[i] <= right {
                i += 1;
            }
            if other.ends[j] <= right {
                j += 1;
            }
        }
        s
    }
}

/// Evaluates `int_0^inf g*(t) / (phi^{-1})*(t) dt` and `int g phi dx` for
/// one-dimensional `g >= 0` and `phi > 0` monotone on its grid. The measure
/// space is the span of `phi`'s grid; `g` must vanish outside it.
/// `1 / (phi^{-1})*` is the non-decreasing rearrangement of `phi`.
pub fn hlp_pairing(g: &GridFunction, phi: &GridFunction) -> Result<HlpPair> {
    if g.dim() != 1 || phi.dim() != 1 {
        return Err(Error::UnsupportedDimension(g.dim().max(phi.dim())));
    }
    let pv: Vec<f64> = phi.values().iter().map(|v| v.re).collect();
    if phi.values().iter().any(|v| v.im != 0.0 || !(v.re > 0.0)) {
        return Err(Error::Precondition("phi must be strictly positive on its grid".into()));
    }
    let inc = pv.windows(2).all(|w| w[1] >= w[0]);
    let dec = pv.windows(2).all(|w| w[1] <= w[0]);
    if !(inc || dec) {
        return Err(Error::NotMonotone);
    }
    if g.values().iter().any(|v| v.im != 0.0 || v.re < 0.0) {
        return Err(Error::Precondition("g must be real and nonnegative".into()));
    }
    let (lo, hi) = (phi.axis(0).lo(), phi.axis(0).hi());
    let ga = g.axis(0);
    for j in 0..ga.cells() {
        let (a, b) = ga.cell(j);
        if g.values()[j].re != 0.0 && (a < lo || b > hi) {
            return Err(Error::Precondition("g must vanish outside the support of phi".into()));
        }
    }
    let g_star = Step::from_sorted((0..ga.cells()).map(|j| (g.values()[j].re, ga.width(j))).collect(), true);
    let pa = phi.axis(0);
    let phi_inc = Step::from_sorted((0..pa.cells()).map(|j| (pv[j], pa.width(j))).collect(), false);
    let lhs = g_star.product_integral(&phi_inc);

    let axis = ga.union(pa);
    let gr = g.resample(std::slice::from_ref(&axis))?;
    let pr = phi.resample(std::slice::from_ref(&axis))?;
    let rhs = (0..axis.cells())
        .map(|j| gr.values()[j].re * pr.values()[j].re * axis.width(j))
        .sum();
    Ok(HlpPair { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(bp: &[f64], v: &[f64]) -> GridFunction {
        GridFunction::from_real(vec![Axis::new(bp.to_vec()).unwrap()], v.to_vec()).unwrap()
    }

    #[test]
    fn sorts_unit_cells() {
        let f = line(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]);
        let r = rearrange_axis(&f, 0).unwrap();
        assert_eq!(r.axis(0).breakpoints(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(r.real_parts(), vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn nonincreasing_input_is_fixed() {
        let f = line(&[0.0, 0.5, 2.0, 3.0], &[4.0, 2.0, 1.0]);
        assert_eq!(rearrange_axis(&f, 0).unwrap(), f);
        let sq = GridFunction::indicator(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        assert_eq!(iterative_rearrange(&sq).unwrap(), sq);
    }

    #[test]
    fn negative_axis_moves_to_origin() {
        let f = line(&[-2.0, -1.0, 0.0], &[-1.0, 5.0]);
        let r = rearrange_axis(&f, 0).unwrap();
        assert_eq!(r.axis(0).breakpoints(), &[0.0, 1.0, 2.0]);
        assert_eq!(r.real_parts(), vec![5.0, 1.0]);
    }

    #[test]
    fn two_by_two_iterated() {
        // rows (axis 0 index) (1, 4) and (2, 3); unit cells
        let axes = vec![Axis::new(vec![0.0, 1.0, 2.0]).unwrap(), Axis::new(vec![0.0, 1.0, 2.0]).unwrap()];
        let f = GridFunction::from_real(axes, vec![1.0, 4.0, 2.0, 3.0]).unwrap();
        let r = iterative_rearrange(&f).unwrap();
        // brute force: axis 0 sort per column: col0 (1,2)->(2,1), col1 (4,3)->(4,3)
        // giving rows (2,4),(1,3); axis 1 sort per row: (4,2),(3,1)
        assert_eq!(r.real_parts(), vec![4.0, 2.0, 3.0, 1.0]);
        assert!(is_nonincreasing_along(&r, 0, 0.0));
        assert!(is_nonincreasing_along(&r, 1, 0.0));
    }

    #[test]
    fn lorentz_examples() {
        let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let l22 = LorentzParams::uniform(1, 2.0, 2.0).unwrap();
        assert!((lorentz_norm(&f, &l22).unwrap() - 1.0).abs() < 1e-15);
        let l1inf = LorentzParams::uniform(1, 1.0, f64::INFINITY).unwrap();
        assert!((lorentz_norm(&f, &l1inf).unwrap() - 1.0).abs() < 1e-15);
        let z = GridFunction::zeros(vec![Axis::new(vec![0.0, 1.0]).unwrap()]).unwrap();
        assert_eq!(lorentz_norm(&z, &l22).unwrap(), 0.0);
    }

    #[test]
    fn lorentz_p_equals_q_is_lp() {
        let axes = vec![Axis::new(vec![-1.0, 0.5, 1.0, 3.0]).unwrap(), Axis::new(vec![0.0, 0.25, 2.0]).unwrap()];
        let f = GridFunction::from_real(axes, vec![1.0, -2.0, 0.5, 3.0, 0.0, 1.5]).unwrap();
        for p in [0.5, 1.0, 2.0, 3.5] {
            let l = lorentz_norm(&f, &LorentzParams::uniform(2, p, p).unwrap()).unwrap();
            let lp = f.lp_norm(p);
            assert!((l - lp).abs() <= 1e-10 * lp, "p={p}: {l} vs {lp}");
        }
    }

    #[test]
    fn hlp_examples() {
        let g = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let phi = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let r = hlp_pairing(&g, &phi).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);

        let z = GridFunction::zeros(vec![Axis::new(vec![0.0, 1.0]).unwrap()]).unwrap();
        let r = hlp_pairing(&z, &phi).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.rhs >= 0.0);
    }

    #[test]
    fn hlp_rejects_non_monotone_phi() {
        let g = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
        let phi = line(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]);
        assert_eq!(hlp_pairing(&g, &phi), Err(Error::NotMonotone));
    }

    #[test]
    fn hlp_hand_case() {
        // g = (3, 1) on unit cells, phi = (1, 2): minimal pairing puts 3 against 1
        let g = line(&[0.0, 1.0, 2.0], &[1.0, 3.0]);
        let phi = line(&[0.0, 1.0, 2.0], &[1.0, 2.0]);
        let r = hlp_pairing(&g, &phi).unwrap();
        assert!((r.lhs - 5.0).abs() < 1e-15);
        assert!((r.rhs - 7.0).abs() < 1e-15);
    }
}
