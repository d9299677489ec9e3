//! Sine/cosine integrals, Gauss-Legendre quadrature and a least-squares slope.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `(Si(x), Ci(x))` for `x > 0`.
pub fn sici(x: f64) -> (f64, f64) {
    assert!(x > 0.0, "sici needs x > 0");
    if x <= 2.0 {
        // power series; terms shrink fast enough at this range
        let x2 = x * x;
        let mut si = 0.0f64;
        let mut t = x;
        let mut n = 0usize;
        while t.abs() > 1e-18 * si.abs().max(1e-300) || n == 0 {
            si += t / (2 * n + 1) as f64;
            n += 1;
            t *= -x2 / ((2 * n) * (2 * n + 1)) as f64;
            if n > 60 {
                break;
            }
        }
        let mut c = 0.0;
        let mut t = 1.0;
        let mut n = 0usize;
        loop {
            n += 1;
            t *= -x2 / ((2 * n - 1) * (2 * n)) as f64;
            let add = t / (2 * n) as f64;
            c += add;
            if add.abs() < 1e-18 * c.abs().max(1e-300) || n > 60 {
                break;
            }
        }
        (si, EULER_GAMMA + x.ln() + c)
    } else {
        // continued fraction for E1(ix), modified Lentz
        let tiny = 1e-300;
        let mut b = Complex64::new(1.0, x);
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = Complex64::new(1.0, 0.0) / b;
        let mut h = d;
        for i in 2..200 {
            let a = -(((i - 1) * (i - 1)) as f64);
            b += 2.0;
            d = Complex64::new(1.0, 0.0) / (d * a + b);
            c = b + Complex64::new(a, 0.0) / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                break;
            }
        }
        h *= Complex64::new(x.cos(), -x.sin());
        (FRAC_PI_2 + h.im, -h.re)
    }
}

/// `int_x^inf e^{-iu} / u du` for `x > 0`.
pub fn exp_integral_tail(x: f64) -> Complex64 {
    let (si, ci) = sici(x);
    Complex64::new(-ci, -(FRAC_PI_2 - si))
}

/// `int_y^inf e^{-icx} / x^2 dx` for `y > 0` and any real `c`.
pub fn oscillatory_inverse_square(c: f64, y: f64) -> Complex64 {
    if c == 0.0 {
        return Complex64::new(1.0 / y, 0.0);
    }
    let a = c.abs();
    let v = Complex64::from_polar(1.0 / y, -a * y) - Complex64::new(0.0, a) * exp_integral_tail(a * y);
    if c > 0.0 {
        v
    } else {
        v.conj()
    }
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, 0.0);
                for j in 0..n {
                    let p2 = p1;
                    p1 = p0;
                    p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
                }
                dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
                let dz = p0 / dp;
                z -= dz;
                if dz.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// `int_a^b g` using `panels` equal panels.
    pub fn integrate(&self, g: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut s = 0.0;
        for k in 0..panels {
            let c = a + (k as f64 + 0.5) * h;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += w * g(c + 0.5 * h * x);
            }
        }
        0.5 * h * s
    }

    pub fn integrate_complex(&self, g: impl Fn(f64) -> Complex64, a: f64, b: f64, panels: usize) -> Complex64 {
        let h = (b - a) / panels as f64;
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..panels {
            let c = a + (k as f64 + 0.5) * h;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += g(c + 0.5 * h * x) * *w;
            }
        }
        s * (0.5 * h)
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
