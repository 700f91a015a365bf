//! Born terms and the Volterra series for α and β.
//!
//! The series works with the phase-stripped functions
//! `A₋ = f e^{iw}`, `B₋ = g e^{−iw}`, `w(x) = (1/2κ)∫_{−∞}^x V`, which obey
//! `f′ = V e^{−iw} + P₊ g`, `g′ = V e^{−2iκx+iw} + P₋ f` with
//! `P± = ±V/(2iκ) e^{±2i(κx−w)}`. Each order is one running integral on a
//! shared panel grid, and the iteration stops on the analytic majorants
//! of the terms rather than on term ratios.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::Potential;
use crate::quad::{gauss_kronrod, PanelGrid};
use crate::transfer::{AmplitudePair, NEAR_ZERO_KAPPA};

type C = Complex64;

const I: C = C::new(0.0, 1.0);
const ZERO: C = C::new(0.0, 0.0);

/// Support cutoff relative to max V for the truncated integrals.
const SUPPORT_EPS: f64 = 1e-14;
const PANEL_ORDER: usize = 16;

fn check(p: &Potential, kappa: C) -> Result<()> {
    if !kappa.is_finite() || kappa.norm() < NEAR_ZERO_KAPPA {
        return Err(Error::NearZeroMomentum(kappa.norm()));
    }
    if let Some(s) = p.min_tail_slope() {
        if kappa.im <= -s {
            return Err(Error::TailLimited { kappa, limit: -s });
        }
    }
    Ok(())
}

fn support(p: &Potential) -> (f64, f64) {
    let vmax = p.max_value();
    if vmax <= 0.0 {
        return (0.0, 0.0);
    }
    p.effective_support(SUPPORT_EPS * vmax)
}

fn breakpoints(p: &Potential, lo: f64, hi: f64) -> Vec<f64> {
    let mut b: Vec<f64> = p
        .breakpoints()
        .into_iter()
        .chain(p.spikes().into_iter().map(|s| s.0))
        .filter(|&x| x > lo && x < hi)
        .collect();
    b.push(lo);
    b.push(hi);
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

fn oscillation_width(kappa: C) -> f64 {
    (1.0 / kappa.norm()).min(0.5)
}

/// First Born terms `α₁ = ∫V`, `β₁ = ∫V e^{−2iκξ}`.
///
/// Exponential tails beyond the truncation point are added analytically.
pub fn born_first_order(p: &Potential, kappa: C) -> Result<AmplitudePair> {
    check(p, kappa)?;
    let mut alpha = ZERO;
    let mut beta = ZERO;
    for (x, v0) in p.spikes() {
        alpha += v0;
        beta += v0 * (-2.0 * I * kappa * x).exp();
    }
    if p.has_smooth_part() && p.max_value() > 0.0 {
        let (lo, hi) = support(p);
        let bp = breakpoints(p, lo, hi);
        let width = oscillation_width(kappa);
        let v = |x: f64| p.evaluate_or_zero(x);
        let (a, _) = gauss_kronrod(|x| C::new(v(x), 0.0), &bp, width, 1e-15, 1e-13)?;
        let (b, _) = gauss_kronrod(|x| v(x) * (-2.0 * I * kappa * x).exp(), &bp, width, 1e-15, 1e-13)?;
        alpha += a;
        beta += b;
        let (lt, rt) = p.tails();
        if let Some(s) = lt.slope() {
            let ve = v(lo);
            alpha += ve / (2.0 * s);
            beta += ve * (-2.0 * I * kappa * lo).exp() / (2.0 * s - 2.0 * I * kappa);
        }
        if let Some(s) = rt.slope() {
            let ve = v(hi);
            alpha += ve / (2.0 * s);
            beta += ve * (-2.0 * I * kappa * hi).exp() / (2.0 * s + 2.0 * I * kappa);
        }
    }
    Ok(AmplitudePair::new(kappa, alpha, beta))
}

/// Ordered double integrals of V against the smooth grid plus spike atoms.
struct Measure {
    grid: PanelGrid,
    v: Vec<f64>,
    spikes: Vec<(f64, f64)>,
}

impl Measure {
    fn new(p: &Potential, width: f64) -> Self {
        let (lo, hi) = support(p);
        let grid = if p.has_smooth_part() && hi > lo {
            PanelGrid::new(&breakpoints(p, lo, hi), width, PANEL_ORDER)
        } else {
            PanelGrid::new(&[], 1.0, PANEL_ORDER)
        };
        let v = grid.nodes.iter().map(|&x| p.evaluate_or_zero(x)).collect();
        Self { grid, v, spikes: p.spikes() }
    }

    /// Second-order terms (α₂, β₂) at momentum κ.
    fn second_order(&self, kappa: C) -> (C, C) {
        let e = |x: f64| (-2.0 * I * kappa * x).exp();
        let nodes = &self.grid.nodes;
        let vw: Vec<C> = self.v.iter().map(|&v| C::new(v, 0.0)).collect();
        let vu: Vec<C> = nodes.iter().zip(&self.v).map(|(&x, &v)| v * e(x)).collect();
        let mut w_run = self.grid.running(&vw);
        let mut u_run = self.grid.running(&vu);
        // atoms strictly before each node
        for &(xs, v0) in &self.spikes {
            for (j, &x) in nodes.iter().enumerate() {
                if x > xs {
                    w_run[j] += v0;
                    u_run[j] += v0 * e(xs);
                }
            }
        }
        let k2 = 2.0 * I * kappa;
        let ia: Vec<C> = (0..nodes.len())
            .map(|j| self.v[j] * (u_run[j] / e(nodes[j]) - w_run[j]))
            .collect();
        let ib: Vec<C> = (0..nodes.len())
            .map(|j| self.v[j] * (u_run[j] - e(nodes[j]) * w_run[j]))
            .collect();
        let mut alpha = self.grid.integrate(&ia);
        let mut beta = self.grid.integrate(&ib);
        for (k, &(xs, v0)) in self.spikes.iter().enumerate() {
            let mut w = ZERO;
            let mut u = ZERO;
            for (j, &x) in nodes.iter().enumerate() {
                if x < xs {
                    w += self.grid.weights[j] * vw[j];
                    u += self.grid.weights[j] * vu[j];
                }
            }
            for &(xp, vp) in &self.spikes[..k] {
                if xp < xs {
                    w += vp;
                    u += vp * e(xp);
                }
            }
            alpha += v0 * (u / e(xs) - w);
            beta += v0 * (u - e(xs) * w);
        }
        (alpha / k2, beta / k2)
    }
}

/// First plus second Born terms.
///
/// The ordered double integrals are evaluated on panel grids refined until
/// two successive grids agree to `tol` (relative to the first-order size).
pub fn born_second_order(p: &Potential, kappa: C, tol: f64) -> Result<AmplitudePair> {
    let first = born_first_order(p, kappa)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    let scale = first.alpha.norm().max(first.beta.norm()).max(f64::MIN_POSITIVE);
    let mut width = oscillation_width(kappa);
    let mut prev = Measure::new(p, width).second_order(kappa);
    for _ in 0..8 {
        width *= 0.5;
        let next = Measure::new(p, width).second_order(kappa);
        let diff = (next.0 - prev.0).norm().max((next.1 - prev.1).norm());
        prev = next;
        if diff <= tol * scale {
            return Ok(AmplitudePair::new(kappa, first.alpha + prev.0, first.beta + prev.1));
        }
    }
    Err(Error::Quadrature((prev.0).norm()))
}

/// Output of [`volterra_series`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub kappa: C,
    /// `f_n(∞)`, `g_n(∞)` for n = 1, 2, …
    pub f_terms: Vec<C>,
    pub g_terms: Vec<C>,
    /// Partial sums of the terms above.
    pub f_partial: Vec<C>,
    pub g_partial: Vec<C>,
    /// `w(∞) = (1/2κ)∫V`.
    pub w_inf: C,
    /// `u±(∞) = (1/2κ)∫V e^{±2iκξ}`.
    pub u_minus: C,
    pub u_plus: C,
    pub amplitudes: AmplitudePair,
    /// Majorant of the neglected remainder at exit.
    pub remainder_bound: f64,
    pub converged: bool,
    pub terms_used: usize,
}

fn factorial_ratio(x: f64, n: i64) -> f64 {
    // xⁿ/n!, zero for negative n
    if n < 0 {
        return 0.0;
    }
    (1..=n).fold(1.0, |acc, k| acc * x / k as f64)
}

/// Term majorants at order n:
///
/// * `f_upper = |2κ||w|ⁿ/n!` bounds |f_n| (Im κ ≥ 0),
/// * `g_upper = |2κ||w|^{n−1}/(n−1)!·|u₋|` bounds |g_n e^{−2iw}| (Im κ ≥ 0),
/// * `f_lower = |2κ||w|^{n−2}/(n−2)!·|u₋u₊|` bounds |f_n e^{2iw}| (Im κ < 0),
/// * `g_lower = g_upper` bounds |g_n| (Im κ < 0).
pub fn series_bounds(p: &Potential, kappa: C, n: usize) -> Result<BTreeMap<String, f64>> {
    check(p, kappa)?;
    if n == 0 {
        return Err(Error::InvalidParameter("series order starts at 1".into()));
    }
    let first = born_first_order(p, kappa)?;
    let w = first.alpha / (2.0 * kappa);
    let um = first.beta / (2.0 * kappa);
    let up = born_first_order(p, -kappa)?.beta / (2.0 * kappa);
    Ok(bounds_from(kappa, w, um, up, n))
}

fn bounds_from(kappa: C, w: C, um: C, up: C, n: usize) -> BTreeMap<String, f64> {
    let k2 = 2.0 * kappa.norm();
    let wn = w.norm();
    let n = n as i64;
    let mut m = BTreeMap::new();
    m.insert("f_upper".to_string(), k2 * factorial_ratio(wn, n));
    m.insert("g_upper".to_string(), k2 * factorial_ratio(wn, n - 1) * um.norm());
    m.insert("f_lower".to_string(), k2 * factorial_ratio(wn, n - 2) * (um * up).norm());
    m.insert("g_lower".to_string(), k2 * factorial_ratio(wn, n - 1) * um.norm());
    m
}

/// Remainder majorant Σ_{m>n} of the bounds, using Σ_{m>n} x^m/m! ≤ x^{n+1}/(n+1)! e^x.
fn remainder(kappa: C, w: C, um: C, up: C, n: usize) -> f64 {
    let k2 = 2.0 * kappa.norm();
    let x = w.norm();
    let n = n as i64;
    let tail = |shift: i64| factorial_ratio(x, n + 1 - shift) * x.exp();
    // the phase factors e^{±2iw} relating bounded and plain terms
    let ph = (2.0 * (I * w).im.abs()).exp();
    let g = k2 * tail(1) * um.norm() * ph;
    let f = if kappa.im >= 0.0 {
        k2 * tail(0)
    } else {
        k2 * tail(2) * (um * up).norm() * ph
    };
    f.max(g)
}

/// Iterate the f/g Volterra series to order `n_max`, stopping once the
/// remainder majorant falls below `tol·|2κ|`.
pub fn volterra_series(p: &Potential, kappa: C, n_max: usize, tol: f64) -> Result<SeriesResult> {
    check(p, kappa)?;
    if !p.spikes().is_empty() {
        return Err(Error::InvalidParameter(
            "the Volterra iteration needs a potential without delta spikes".into(),
        ));
    }
    if n_max == 0 || !(tol > 0.0) {
        return Err(Error::InvalidParameter("n_max must be >= 1 and tol > 0".into()));
    }
    let k2 = 2.0 * I * kappa;
    let m = Measure::new(p, 0.5 * oscillation_width(kappa));
    let grid = &m.grid;
    let x = &grid.nodes;
    let v: Vec<C> = m.v.iter().map(|&v| C::new(v, 0.0)).collect();
    let n = x.len();

    let free = || SeriesResult {
        kappa,
        f_terms: Vec::new(),
        g_terms: Vec::new(),
        f_partial: Vec::new(),
        g_partial: Vec::new(),
        w_inf: ZERO,
        u_minus: ZERO,
        u_plus: ZERO,
        amplitudes: AmplitudePair::free(kappa),
        remainder_bound: 0.0,
        converged: true,
        terms_used: 0,
    };
    if n == 0 {
        return Ok(free());
    }

    let w: Vec<C> = grid.running(&v).into_iter().map(|s| s / (2.0 * kappa)).collect();
    let w_inf = grid.integrate(&v) / (2.0 * kappa);
    let u_minus = grid.integrate(&(0..n).map(|j| v[j] * (-k2 * x[j]).exp()).collect::<Vec<_>>()) / (2.0 * kappa);
    let u_plus = grid.integrate(&(0..n).map(|j| v[j] * (k2 * x[j]).exp()).collect::<Vec<_>>()) / (2.0 * kappa);
    if w_inf.norm() == 0.0 {
        return Ok(free());
    }

    let ph: Vec<C> = (0..n).map(|j| (2.0 * I * (kappa * x[j] - w[j])).exp()).collect();
    let p_plus: Vec<C> = (0..n).map(|j| v[j] / k2 * ph[j]).collect();
    let p_minus: Vec<C> = (0..n).map(|j| -v[j] / k2 / ph[j]).collect();
    let f0: Vec<C> = (0..n).map(|j| v[j] * (-I * w[j]).exp()).collect();
    let g0: Vec<C> = (0..n).map(|j| v[j] * (-k2 * x[j] + I * w[j]).exp()).collect();

    let mut f_n = grid.running(&f0);
    let mut g_n = grid.running(&g0);
    let (mut f_end, mut g_end) = (grid.integrate(&f0), grid.integrate(&g0));
    let mut res = free();
    res.w_inf = w_inf;
    res.u_minus = u_minus;
    res.u_plus = u_plus;
    let (mut fs, mut gs) = (ZERO, ZERO);
    let mut growth = 0;
    let mut last = f64::INFINITY;
    for order in 1..=n_max {
        let (ft, gt) = (f_end, g_end);
        fs += ft;
        gs += gt;
        res.f_terms.push(ft);
        res.g_terms.push(gt);
        res.f_partial.push(fs);
        res.g_partial.push(gs);
        res.terms_used = order;
        res.remainder_bound = remainder(kappa, w_inf, u_minus, u_plus, order);
        if res.remainder_bound <= tol * k2.norm() {
            res.converged = true;
            break;
        }
        let size = ft.norm().max(gt.norm());
        if !size.is_finite() {
            return Err(Error::Divergent(format!("non-finite term at order {order}")));
        }
        growth = if size > last && order as f64 > 2.0 * w_inf.norm() + 2.0 { growth + 1 } else { 0 };
        if growth >= 4 {
            return Err(Error::Divergent(format!(
                "terms grow beyond order {order} at kappa = {kappa}"
            )));
        }
        last = size;
        res.converged = false;
        let fp: Vec<C> = (0..n).map(|j| p_plus[j] * g_n[j]).collect();
        let gp: Vec<C> = (0..n).map(|j| p_minus[j] * f_n[j]).collect();
        f_n = grid.running(&fp);
        g_n = grid.running(&gp);
        f_end = grid.integrate(&fp);
        g_end = grid.integrate(&gp);
    }
    if !res.converged {
        return Err(Error::SeriesExhausted(n_max));
    }
    res.amplitudes = AmplitudePair::new(kappa, fs * (I * w_inf).exp(), gs * (-I * w_inf).exp());
    Ok(res)
}
