//! Quadrature for complex integrands.
//!
//! Two tools live here:
//! * [`gauss_kronrod`]: globally adaptive 7/15-point Gauss–Kronrod on a list
//!   of breakpoints, for single integrals;
//! * [`PanelGrid`]: composite Gauss–Legendre panels with a spectral
//!   cumulative-integration matrix, for iterated (ordered) integrals where the
//!   running integral is needed at every node.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kron * h;
    let error = ((kron - gauss) * h).norm();
    Segment { a, b, value, error }
}

/// Adaptive Gauss–Kronrod over consecutive breakpoints.
///
/// `max_width` caps the initial panel width (the caller passes an
/// oscillation scale such as `1/|κ|`).
pub fn gauss_kronrod<F>(
    mut f: F,
    breakpoints: &[f64],
    max_width: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Complex64,
{
    let mut segs: Vec<Segment> = Vec::new();
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let n = ((b - a) / max_width).ceil().max(1.0) as usize;
        let h = (b - a) / n as f64;
        for i in 0..n {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == n { b } else { lo + h };
            segs.push(gk15(&mut f, lo, hi));
        }
    }
    if segs.is_empty() {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    for _ in 0..20_000 {
        let total: Complex64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.error).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err));
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let s = segs.swap_remove(idx);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::Quadrature(err));
        }
        segs.push(gk15(&mut f, s.a, mid));
        segs.push(gk15(&mut f, mid, s.b));
    }
    let err: f64 = segs.iter().map(|s| s.error).sum();
    Err(Error::Quadrature(err))
}

/// Gauss–Legendre nodes and weights on [−1, 1], ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

fn legendre_all(n: usize, z: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = z;
    }
    for k in 2..=n {
        p[k] = ((2 * k - 1) as f64 * z * p[k - 1] - (k - 1) as f64 * p[k - 2]) / k as f64;
    }
    p
}

/// Composite Gauss–Legendre grid supporting running integrals.
#[derive(Debug, Clone)]
pub struct PanelGrid {
    /// Absolute node positions, panel by panel, ascending.
    pub nodes: Vec<f64>,
    /// Absolute quadrature weights matching `nodes`.
    pub weights: Vec<f64>,
    order: usize,
    half_widths: Vec<f64>,
    /// `cumulative[i][k]`: ∫_{−1}^{t_i} ℓ_k(t) dt on the reference panel.
    cumulative: Vec<Vec<f64>>,
}

impl PanelGrid {
    /// Panels of at most `max_width` between consecutive breakpoints.
    pub fn new(breakpoints: &[f64], max_width: f64, order: usize) -> Self {
        let (t, w) = gauss_legendre(order);
        let mut cumulative = vec![vec![0.0; order]; order];
        let pk: Vec<Vec<f64>> = t.iter().map(|&tk| legendre_all(order, tk)).collect();
        for (i, &ti) in t.iter().enumerate() {
            let pi = legendre_all(order, ti);
            for k in 0..order {
                // ℓ_k(t) = w_k Σ_m (m + ½) P_m(t_k) P_m(t); integrate term-wise.
                let mut s = 0.5 * (ti + 1.0);
                for m in 1..order {
                    s += 0.5 * pk[k][m] * (pi[m + 1] - pi[m - 1]);
                }
                cumulative[i][k] = w[k] * s;
            }
        }

        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut half_widths = Vec::new();
        for win in breakpoints.windows(2) {
            let (a, b) = (win[0], win[1]);
            if b <= a {
                continue;
            }
            let n = ((b - a) / max_width).ceil().max(1.0) as usize;
            let h = (b - a) / n as f64;
            for p in 0..n {
                let lo = a + p as f64 * h;
                let hw = 0.5 * h;
                let c = lo + hw;
                half_widths.push(hw);
                for k in 0..order {
                    nodes.push(c + hw * t[k]);
                    weights.push(hw * w[k]);
                }
            }
        }
        Self {
            nodes,
            weights,
            order,
            half_widths,
            cumulative,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Total integral of sampled values.
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * w)
            .sum()
    }

    /// Running integral `∫_{start}^{x_i} f` at every node.
    pub fn running(&self, values: &[Complex64]) -> Vec<Complex64> {
        let m = self.order;
        let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, hw) in self.half_widths.iter().enumerate() {
            let base = p * m;
            let panel = &values[base..base + m];
            for i in 0..m {
                let mut s = Complex64::new(0.0, 0.0);
                for (k, v) in panel.iter().enumerate() {
                    s += v * self.cumulative[i][k];
                }
                out[base + i] = acc + s * hw;
            }
            let total: Complex64 = panel
                .iter()
                .zip(&self.weights[base..base + m])
                .map(|(v, w)| v * w)
                .sum();
            acc += total;
        }
        out
    }
}
