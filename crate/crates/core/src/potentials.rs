//! Local, non-negative barrier potentials.
//!
//! A [`Potential`] is immutable after construction. Four representations
//! are supported: closed-form shapes (with optional user closures), sampled
//! grids with monotone cubic Hermite interpolation, zero-width delta spikes,
//! and composites of displaced, non-overlapping parts.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative cutoff used when no explicit `eps_v` is given: `eps_v = 1e-12 · max V`.
pub const DEFAULT_SUPPORT_EPS: f64 = 1e-12;

/// How the potential decays beyond its window on one side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TailKind {
    CompactSupport,
    /// `V ≈ amplitude · exp(−2 · slope · |x − edge|)`.
    Exponential {
        slope: f64,
        amplitude: f64,
    },
    SuperExponential,
}

impl TailKind {
    pub fn exponential(slope: f64, amplitude: f64) -> Result<Self> {
        if !(slope > 0.0) || !(amplitude >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "exponential tail needs slope > 0 and amplitude >= 0 (got {slope}, {amplitude})"
            )));
        }
        Ok(TailKind::Exponential { slope, amplitude })
    }

    pub fn slope(&self) -> Option<f64> {
        match self {
            TailKind::Exponential { slope, .. } => Some(*slope),
            _ => None,
        }
    }
}

/// Closed-form barrier shapes; `Custom` wraps an arbitrary evaluator.
#[derive(Clone)]
pub enum Shape {
    /// `height` for |x| ≤ `half_width`, zero outside.
    Square { height: f64, half_width: f64 },
    /// `height · exp(−|x| / length)`.
    Exponential { height: f64, length: f64 },
    /// `height / cosh²(x / length)`.
    PoschlTeller { height: f64, length: f64 },
    /// `height · exp(−x² / length²)`.
    Gaussian { height: f64, length: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Square { height, half_width } => f
                .debug_struct("Square")
                .field("height", height)
                .field("half_width", half_width)
                .finish(),
            Shape::Exponential { height, length } => f
                .debug_struct("Exponential")
                .field("height", height)
                .field("length", length)
                .finish(),
            Shape::PoschlTeller { height, length } => f
                .debug_struct("PoschlTeller")
                .field("height", height)
                .field("length", length)
                .finish(),
            Shape::Gaussian { height, length } => f
                .debug_struct("Gaussian")
                .field("height", height)
                .field("length", length)
                .finish(),
            Shape::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Shape {
    fn value(&self, x: f64) -> f64 {
        match self {
            Shape::Square { height, half_width } => {
                if x.abs() <= *half_width {
                    *height
                } else {
                    0.0
                }
            }
            Shape::Exponential { height, length } => height * (-(x / length).abs()).exp(),
            Shape::PoschlTeller { height, length } => {
                let c = (x / length).cosh();
                height / (c * c)
            }
            Shape::Gaussian { height, length } => height * (-(x / length).powi(2)).exp(),
            Shape::Custom(f) => f(x),
        }
    }
}

/// A closed-form potential evaluated at `x − shift`.
#[derive(Debug, Clone)]
pub struct AnalyticPotential {
    pub shape: Shape,
    /// Interior interval (before shifting) outside of which the tails apply.
    pub window: (f64, f64),
    pub tails: (TailKind, TailKind),
    pub shift: f64,
}

/// Sampled potential with monotone cubic Hermite interpolation.
#[derive(Debug, Clone)]
pub struct GridPotential {
    x: Vec<f64>,
    v: Vec<f64>,
    slopes: Vec<f64>,
}

impl GridPotential {
    pub fn new(x: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if x.len() < 2 || x.len() != v.len() {
            return Err(Error::InvalidParameter(
                "grid needs at least two abscissas and matching values".into(),
            ));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "grid abscissas must be strictly increasing".into(),
            ));
        }
        if let Some(bad) = v.iter().find(|&&s| !(s >= 0.0) || !s.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "potential samples must be finite and non-negative (got {bad})"
            )));
        }
        let slopes = monotone_slopes(&x, &v);
        Ok(Self { x, v, slopes })
    }

    pub fn abscissas(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    fn range(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    fn interpolate(&self, x: f64) -> Option<f64> {
        let (lo, hi) = self.range();
        if x < lo || x > hi {
            return None;
        }
        let i = self.x.partition_point(|&xi| xi <= x).clamp(1, self.x.len() - 1) - 1;
        let h = self.x[i + 1] - self.x[i];
        let t = (x - self.x[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let y = h00 * self.v[i]
            + h10 * h * self.slopes[i]
            + h01 * self.v[i + 1]
            + h11 * h * self.slopes[i + 1];
        Some(y.max(0.0))
    }
}

/// Fritsch–Butland slopes: monotone between samples, so non-negative data
/// never interpolates below zero.
fn monotone_slopes(x: &[f64], v: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (v[i + 1] - v[i]) / h[i]).collect();
    let mut m = vec![0.0; n];
    if n == 2 {
        m[0] = d[0];
        m[1] = d[0];
        return m;
    }
    for i in 1..n - 1 {
        if d[i - 1] * d[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    m[0] = end_slope(h[0], h[1], d[0], d[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

#[derive(Debug, Clone)]
pub enum Potential {
    Analytic(AnalyticPotential),
    Grid(GridPotential),
    DeltaSpike { strength: f64, position: f64 },
    /// Parts with their displacements; supports must not overlap.
    Composite(Vec<(Potential, f64)>),
}

impl Potential {
    /// The zero potential.
    pub fn free() -> Self {
        Potential::Composite(Vec::new())
    }

    pub fn square(height: f64, half_width: f64) -> Result<Self> {
        check_height(height)?;
        check_length(half_width)?;
        Ok(Potential::Analytic(AnalyticPotential {
            shape: Shape::Square { height, half_width },
            window: (-half_width, half_width),
            tails: (TailKind::CompactSupport, TailKind::CompactSupport),
            shift: 0.0,
        }))
    }

    pub fn exponential(height: f64, length: f64) -> Result<Self> {
        check_height(height)?;
        check_length(length)?;
        let tail = TailKind::exponential(0.5 / length, height)?;
        Ok(Potential::Analytic(AnalyticPotential {
            shape: Shape::Exponential { height, length },
            window: (0.0, 0.0),
            tails: (tail, tail),
            shift: 0.0,
        }))
    }

    pub fn poschl_teller(height: f64, length: f64) -> Result<Self> {
        check_height(height)?;
        check_length(length)?;
        // 1/cosh²(x/x0) ~ 4 e^{-2|x|/x0}
        let tail = TailKind::exponential(1.0 / length, 4.0 * height)?;
        Ok(Potential::Analytic(AnalyticPotential {
            shape: Shape::PoschlTeller { height, length },
            window: (0.0, 0.0),
            tails: (tail, tail),
            shift: 0.0,
        }))
    }

    pub fn gaussian(height: f64, length: f64) -> Result<Self> {
        check_height(height)?;
        check_length(length)?;
        Ok(Potential::Analytic(AnalyticPotential {
            shape: Shape::Gaussian { height, length },
            window: (0.0, 0.0),
            tails: (TailKind::SuperExponential, TailKind::SuperExponential),
            shift: 0.0,
        }))
    }

    pub fn delta(strength: f64, position: f64) -> Result<Self> {
        if !(strength > 0.0) || !strength.is_finite() || !position.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "delta spike strength must be positive (got {strength})"
            )));
        }
        Ok(Potential::DeltaSpike { strength, position })
    }

    /// A user-supplied evaluator. Values must be non-negative; they are
    /// checked on a sample of the window when the potential is built.
    pub fn custom<F>(f: F, window: (f64, f64), tails: (TailKind, TailKind)) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(window.1 >= window.0) {
            return Err(Error::InvalidParameter("window must be ordered".into()));
        }
        let width = (window.1 - window.0).max(1.0);
        for i in 0..=400 {
            let x = window.0 - width + 3.0 * width * i as f64 / 400.0;
            let v = f(x);
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "custom potential is negative or non-finite at x = {x} (V = {v})"
                )));
            }
        }
        Ok(Potential::Analytic(AnalyticPotential {
            shape: Shape::Custom(Arc::new(f)),
            window,
            tails,
            shift: 0.0,
        }))
    }

    pub fn grid(x: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        Ok(Potential::Grid(GridPotential::new(x, v)?))
    }

    /// Sum of displaced parts, rejected when effective supports overlap.
    pub fn composite(parts: Vec<(Potential, f64)>) -> Result<Self> {
        let mut spans: Vec<(f64, f64)> = parts
            .iter()
            .map(|(p, d)| {
                let eps = DEFAULT_SUPPORT_EPS * p.max_value().max(f64::MIN_POSITIVE);
                let (lo, hi) = p.effective_support(eps);
                (lo + d, hi + d)
            })
            .collect();
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in spans.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(Error::OverlappingParts(w[0].0, w[0].1, w[1].0, w[1].1));
            }
        }
        Ok(Potential::Composite(parts))
    }

    /// V(x). Delta spikes are not pointwise evaluable; composites report
    /// their smooth part and fail only exactly on a spike.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        match self {
            Potential::Analytic(a) => Ok(a.shape.value(x - a.shift)),
            Potential::Grid(g) => g.interpolate(x).ok_or_else(|| {
                let (lo, hi) = g.range();
                Error::Extrapolation { x, lo, hi }
            }),
            Potential::DeltaSpike { .. } => Err(Error::NotPointwiseEvaluable(x)),
            Potential::Composite(parts) => {
                let mut sum = 0.0;
                for (p, d) in parts {
                    match p {
                        Potential::DeltaSpike { position, .. } if position + d == x => {
                            return Err(Error::NotPointwiseEvaluable(x));
                        }
                        _ => sum += p.evaluate_or_zero(x - d),
                    }
                }
                Ok(sum)
            }
        }
    }

    /// Smooth part of V(x), zero outside sampled ranges and at spikes.
    pub(crate) fn evaluate_or_zero(&self, x: f64) -> f64 {
        match self {
            Potential::Analytic(a) => a.shape.value(x - a.shift),
            Potential::Grid(g) => g.interpolate(x).unwrap_or(0.0),
            Potential::DeltaSpike { .. } => 0.0,
            Potential::Composite(parts) => parts.iter().map(|(p, d)| p.evaluate_or_zero(x - d)).sum(),
        }
    }

    /// Spikes as (position, strength), ascending by position.
    pub fn spikes(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        self.collect_spikes(0.0, &mut out);
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    fn collect_spikes(&self, offset: f64, out: &mut Vec<(f64, f64)>) {
        match self {
            Potential::DeltaSpike { strength, position } => out.push((position + offset, *strength)),
            Potential::Composite(parts) => {
                for (p, d) in parts {
                    p.collect_spikes(offset + d, out);
                }
            }
            _ => {}
        }
    }

    pub fn has_smooth_part(&self) -> bool {
        match self {
            Potential::Analytic(_) | Potential::Grid(_) => true,
            Potential::DeltaSpike { .. } => false,
            Potential::Composite(parts) => parts.iter().any(|(p, _)| p.has_smooth_part()),
        }
    }

    /// Points where V or its derivative jumps (square edges, kinks, grid
    /// ends, spikes), ascending.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(0.0, &mut out);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn collect_breakpoints(&self, offset: f64, out: &mut Vec<f64>) {
        match self {
            Potential::Analytic(a) => match a.shape {
                Shape::Square { half_width, .. } => {
                    out.push(a.shift + offset - half_width);
                    out.push(a.shift + offset + half_width);
                }
                Shape::Exponential { .. } => out.push(a.shift + offset),
                Shape::Custom(_) => {
                    out.push(a.window.0 + a.shift + offset);
                    out.push(a.window.1 + a.shift + offset);
                }
                _ => {}
            },
            Potential::Grid(g) => {
                let (lo, hi) = g.range();
                out.push(lo + offset);
                out.push(hi + offset);
            }
            Potential::DeltaSpike { position, .. } => out.push(position + offset),
            Potential::Composite(parts) => {
                for (p, d) in parts {
                    p.collect_breakpoints(offset + d, out);
                }
            }
        }
    }

    /// Largest value of the smooth part (or spike strength for a bare spike).
    pub fn max_value(&self) -> f64 {
        match self {
            Potential::Analytic(a) => match &a.shape {
                Shape::Square { height, .. }
                | Shape::Exponential { height, .. }
                | Shape::PoschlTeller { height, .. }
                | Shape::Gaussian { height, .. } => *height,
                Shape::Custom(f) => {
                    let (lo, hi) = a.window;
                    let width = (hi - lo).max(1.0);
                    (0..=2000)
                        .map(|i| f(lo - width + 3.0 * width * i as f64 / 2000.0))
                        .fold(0.0, f64::max)
                }
            },
            Potential::Grid(g) => g.v.iter().copied().fold(0.0, f64::max),
            Potential::DeltaSpike { strength, .. } => *strength,
            Potential::Composite(parts) => parts.iter().map(|(p, _)| p.max_value()).fold(0.0, f64::max),
        }
    }

    /// Interval outside of which V < `eps_v`.
    pub fn effective_support(&self, eps_v: f64) -> (f64, f64) {
        match self {
            Potential::Analytic(a) => {
                let (lo, hi) = analytic_support(a, eps_v);
                (lo + a.shift, hi + a.shift)
            }
            Potential::Grid(g) => g.range(),
            Potential::DeltaSpike { position, .. } => (*position, *position),
            Potential::Composite(parts) => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for (p, d) in parts {
                    let (l, h) = p.effective_support(eps_v);
                    lo = lo.min(l + d);
                    hi = hi.max(h + d);
                }
                if lo > hi {
                    (0.0, 0.0)
                } else {
                    (lo, hi)
                }
            }
        }
    }

    /// Support at the default relative cutoff.
    pub fn default_support(&self) -> (f64, f64) {
        let eps = DEFAULT_SUPPORT_EPS * self.max_value().max(f64::MIN_POSITIVE);
        self.effective_support(eps)
    }

    /// Tail classification at −∞ and +∞. Composites report the slowest
    /// decay present on each side.
    pub fn tails(&self) -> (TailKind, TailKind) {
        match self {
            Potential::Analytic(a) => a.tails,
            Potential::Grid(_) | Potential::DeltaSpike { .. } => {
                (TailKind::CompactSupport, TailKind::CompactSupport)
            }
            Potential::Composite(parts) => {
                let mut left = TailKind::CompactSupport;
                let mut right = TailKind::CompactSupport;
                for (p, _) in parts {
                    let (l, r) = p.tails();
                    left = slower(left, l);
                    right = slower(right, r);
                }
                (left, right)
            }
        }
    }

    /// Smallest exponential tail slope, if any tail is exponential. The
    /// amplitudes are analytic for Im κ > −slope.
    pub fn min_tail_slope(&self) -> Option<f64> {
        let (l, r) = self.tails();
        match (l.slope(), r.slope()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn has_finite_range(&self) -> bool {
        let (l, r) = self.tails();
        l.slope().is_none() && r.slope().is_none()
    }

    /// True for potentials that are mirror symmetric about x = 0.
    pub fn is_even(&self) -> bool {
        match self {
            Potential::Analytic(a) => !matches!(a.shape, Shape::Custom(_)) && a.shift == 0.0,
            Potential::DeltaSpike { position, .. } => *position == 0.0,
            _ => false,
        }
    }

    pub fn displace(&self, d: f64) -> Potential {
        match self {
            Potential::Analytic(a) => {
                let mut a = a.clone();
                a.shift += d;
                Potential::Analytic(a)
            }
            Potential::Grid(g) => Potential::Grid(GridPotential {
                x: g.x.iter().map(|x| x + d).collect(),
                v: g.v.clone(),
                slopes: g.slopes.clone(),
            }),
            Potential::DeltaSpike { strength, position } => Potential::DeltaSpike {
                strength: *strength,
                position: position + d,
            },
            Potential::Composite(parts) => {
                Potential::Composite(parts.iter().map(|(p, pd)| (p.clone(), pd + d)).collect())
            }
        }
    }

    /// Closed-form family and parameters, when this potential has an oracle.
    pub fn family(&self) -> Option<Family> {
        match self {
            Potential::Analytic(a) if a.shift == 0.0 => match a.shape {
                Shape::Square { height, half_width } => Some(Family::Square {
                    height,
                    half_width,
                }),
                Shape::Exponential { height, length } => Some(Family::Exponential { height, length }),
                Shape::PoschlTeller { height, length } => Some(Family::PoschlTeller { height, length }),
                _ => None,
            },
            Potential::DeltaSpike { strength, position } if *position == 0.0 => {
                Some(Family::Delta { strength: *strength })
            }
            _ => None,
        }
    }
}

/// Families with closed-form amplitudes, centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Square { height: f64, half_width: f64 },
    Exponential { height: f64, length: f64 },
    PoschlTeller { height: f64, length: f64 },
    Delta { strength: f64 },
}

fn slower(a: TailKind, b: TailKind) -> TailKind {
    match (a, b) {
        (TailKind::Exponential { slope: s1, .. }, TailKind::Exponential { slope: s2, .. }) => {
            if s1 <= s2 {
                a
            } else {
                b
            }
        }
        (TailKind::Exponential { .. }, _) => a,
        (_, TailKind::Exponential { .. }) => b,
        (TailKind::SuperExponential, _) | (_, TailKind::SuperExponential) => {
            TailKind::SuperExponential
        }
        _ => TailKind::CompactSupport,
    }
}

fn analytic_support(a: &AnalyticPotential, eps: f64) -> (f64, f64) {
    match a.shape {
        Shape::Square { half_width, height } => {
            if height < eps {
                (0.0, 0.0)
            } else {
                (-half_width, half_width)
            }
        }
        Shape::Exponential { height, length } => {
            let r = if height > eps { length * (height / eps).ln() } else { 0.0 };
            (-r, r)
        }
        Shape::PoschlTeller { height, length } => {
            let r = if height > eps {
                length * (height / eps).sqrt().acosh()
            } else {
                0.0
            };
            (-r, r)
        }
        Shape::Gaussian { height, length } => {
            let r = if height > eps {
                length * (height / eps).ln().sqrt()
            } else {
                0.0
            };
            (-r, r)
        }
        Shape::Custom(ref f) => {
            let (lo, hi) = a.window;
            let left = tail_cutoff(f.as_ref(), lo, -1.0, a.tails.0, eps);
            let right = tail_cutoff(f.as_ref(), hi, 1.0, a.tails.1, eps);
            (left, right)
        }
    }
}

/// Outermost point beyond `edge` (in direction `dir`) where V ≥ eps.
fn tail_cutoff(f: &dyn Fn(f64) -> f64, edge: f64, dir: f64, tail: TailKind, eps: f64) -> f64 {
    match tail {
        TailKind::CompactSupport => edge,
        TailKind::Exponential { slope, amplitude } => {
            if amplitude > eps {
                edge + dir * (amplitude / eps).ln() / (2.0 * slope)
            } else {
                edge
            }
        }
        TailKind::SuperExponential => {
            // march outward until V stays below eps over a full step
            let mut step = 0.25;
            let mut x = edge;
            let mut last_above = edge;
            for _ in 0..4000 {
                x += dir * step;
                if f(x) >= eps {
                    last_above = x;
                } else if (x - last_above).abs() > 4.0 * step {
                    break;
                }
                step *= 1.05;
            }
            last_above + dir * step
        }
    }
}

fn check_height(v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "barrier height must be finite and non-negative (got {v})"
        )));
    }
    Ok(())
}

fn check_length(l: f64) -> Result<()> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "length scale must be positive (got {l})"
        )));
    }
    Ok(())
}

fn param(params: &BTreeMap<String, f64>, name: &str, key: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| Error::InvalidParameter(format!("{name}: missing parameter `{key}`")))
}

/// Build a named family from keyed parameters.
///
/// | name            | parameters          |
/// |-----------------|---------------------|
/// | `square`        | `V0`, `x0`          |
/// | `exponential`   | `V0`, `x0`          |
/// | `poschl_teller` | `V0`, `x0`          |
/// | `gaussian`      | `V0`, `x0`          |
/// | `delta`         | `v0`, `position`?   |
/// | `double`        | `V0`, `x0`, `d`     |
/// | `free`          | none                |
pub fn builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<Potential> {
    match name {
        "square" => Potential::square(param(params, name, "V0")?, param(params, name, "x0")?),
        "exponential" => {
            Potential::exponential(param(params, name, "V0")?, param(params, name, "x0")?)
        }
        "poschl_teller" => {
            Potential::poschl_teller(param(params, name, "V0")?, param(params, name, "x0")?)
        }
        "gaussian" => Potential::gaussian(param(params, name, "V0")?, param(params, name, "x0")?),
        "delta" => Potential::delta(
            param(params, name, "v0")?,
            params.get("position").copied().unwrap_or(0.0),
        ),
        "double" => {
            let v0 = param(params, name, "V0")?;
            let x0 = param(params, name, "x0")?;
            let d = param(params, name, "d")?;
            let bump = Potential::square(v0, x0)?;
            Potential::composite(vec![(bump.clone(), -0.5 * d), (bump, 0.5 * d)])
        }
        "free" => Ok(Potential::free()),
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

/// JSON description of a potential.
///
/// ```json
/// {"family": "square", "params": {"V0": 1.0, "x0": 1.0}, "displacement": 0.0}
/// {"family": "composite", "parts": [ {...}, {...} ]}
/// {"family": "grid", "x": [..], "v": [..]}
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PotentialConfig {
    pub family: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub displacement: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<PotentialConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v: Vec<f64>,
}

impl PotentialConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("potential config: {e}")))
    }

    pub fn build(&self) -> Result<Potential> {
        if !self.displacement.is_finite() {
            return Err(Error::InvalidParameter("displacement must be finite".into()));
        }
        let base = match self.family.as_str() {
            "grid" => Potential::grid(self.x.clone(), self.v.clone())?,
            "composite" => {
                let parts = self
                    .parts
                    .iter()
                    .map(|c| {
                        let mut inner = c.clone();
                        let d = inner.displacement;
                        inner.displacement = 0.0;
                        Ok((inner.build()?, d))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Potential::composite(parts)?
            }
            name => builtin(name, &self.params)?,
        };
        Ok(if self.displacement != 0.0 {
            base.displace(self.displacement)
        } else {
            base
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn evaluate_examples() {
        let sq = Potential::square(1.0, 1.0).unwrap();
        assert_eq!(sq.evaluate(0.0).unwrap(), 1.0);
        assert_eq!(sq.evaluate(2.0).unwrap(), 0.0);
        let pt = Potential::poschl_teller(1.0, 1.0).unwrap();
        assert_eq!(pt.evaluate(0.0).unwrap(), 1.0);
    }

    #[test]
    fn delta_is_not_pointwise() {
        let d = Potential::delta(2.0, 0.0).unwrap();
        assert!(matches!(d.evaluate(0.3), Err(Error::NotPointwiseEvaluable(_))));
    }

    #[test]
    fn grid_extrapolation_is_an_error() {
        let g = Potential::grid(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(g.evaluate(2.5), Err(Error::Extrapolation { .. })));
    }

    #[test]
    fn support_examples() {
        let sq = Potential::square(1.0, 1.0).unwrap();
        assert_eq!(sq.effective_support(1e-12), (-1.0, 1.0));
        let ex = Potential::exponential(1.0, 1.0).unwrap();
        let (lo, hi) = ex.effective_support(1e-12);
        let xc = (1e12f64).ln();
        assert!((hi - xc).abs() < 1e-12 && (lo + xc).abs() < 1e-12);
        assert!((xc - 27.631).abs() < 1e-3);
        let d = Potential::delta(2.0, 0.5).unwrap();
        assert_eq!(d.effective_support(1e-12), (0.5, 0.5));
    }

    #[test]
    fn displacement_examples() {
        let sq = Potential::square(1.0, 1.0).unwrap();
        let same = sq.displace(0.0);
        for x in [-1.5, -0.3, 0.9, 1.2] {
            assert_eq!(same.evaluate(x).unwrap(), sq.evaluate(x).unwrap());
        }
        assert_eq!(sq.displace(3.0).evaluate(3.0).unwrap(), 1.0);
        match Potential::delta(2.0, 0.0).unwrap().displace(1.0) {
            Potential::DeltaSpike { strength, position } => {
                assert_eq!((strength, position), (2.0, 1.0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn builtin_tail_metadata() {
        let sq = builtin("square", &params(&[("V0", 1.0), ("x0", 1.0)])).unwrap();
        assert_eq!(sq.tails().0, TailKind::CompactSupport);
        let pt = builtin("poschl_teller", &params(&[("V0", 1.0), ("x0", 1.0)])).unwrap();
        // decay exponent 2s = 2/x0
        assert_eq!(pt.tails().1.slope(), Some(1.0));
        let ex = builtin("exponential", &params(&[("V0", 1.0), ("x0", 1.0)])).unwrap();
        assert_eq!(ex.tails().0.slope(), Some(0.5));
        let g = builtin("gaussian", &params(&[("V0", 1.0), ("x0", 1.0)])).unwrap();
        assert_eq!(g.tails().0, TailKind::SuperExponential);
        match builtin("delta", &params(&[("v0", 2.0)])).unwrap() {
            Potential::DeltaSpike { strength, position } => assert_eq!((strength, position), (2.0, 0.0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(builtin("morse", &BTreeMap::new()), Err(Error::UnknownFamily(_))));
        assert!(matches!(
            builtin("square", &params(&[("V0", 1.0)])),
            Err(Error::InvalidParameter(_))
        ));
        assert!(builtin("square", &params(&[("V0", -1.0), ("x0", 1.0)])).is_err());
    }

    #[test]
    fn pt_tail_matches_asymptotics() {
        let pt = Potential::poschl_teller(1.0, 1.0).unwrap();
        let x: f64 = 12.0;
        let model = 4.0 * (-2.0 * x).exp();
        assert!((pt.evaluate(x).unwrap() / model - 1.0).abs() < 1e-9);
    }

    #[test]
    fn overlapping_composite_rejected() {
        let sq = Potential::square(1.0, 1.0).unwrap();
        assert!(matches!(
            Potential::composite(vec![(sq.clone(), 0.0), (sq.clone(), 1.5)]),
            Err(Error::OverlappingParts(..))
        ));
        assert!(Potential::composite(vec![(sq.clone(), 0.0), (sq, 2.0)]).is_ok());
    }

    #[test]
    fn negative_grid_rejected() {
        assert!(Potential::grid(vec![0.0, 1.0], vec![0.0, -1.0]).is_err());
        assert!(Potential::grid(vec![0.0], vec![0.0]).is_err());
        assert!(Potential::grid(vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = r#"{"family":"composite","parts":[
            {"family":"square","params":{"V0":1.0,"x0":0.5},"displacement":-2.0},
            {"family":"delta","params":{"v0":2.0},"displacement":1.0}]}"#;
        let cfg = PotentialConfig::from_json(text).unwrap();
        let p = cfg.build().unwrap();
        assert_eq!(p.evaluate(-2.0).unwrap(), 1.0);
        assert_eq!(p.spikes(), vec![(1.0, 2.0)]);
        let again: PotentialConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    proptest! {
        #[test]
        fn grid_reproduces_samples(vals in proptest::collection::vec(0.0f64..5.0, 2..20)) {
            let x: Vec<f64> = (0..vals.len()).map(|i| i as f64 * 0.7).collect();
            let g = Potential::grid(x.clone(), vals.clone()).unwrap();
            for (xi, vi) in x.iter().zip(&vals) {
                prop_assert!((g.evaluate(*xi).unwrap() - vi).abs() < 1e-12);
            }
            for i in 0..200 {
                let t = (x[x.len() - 1] * i as f64 / 199.0).min(x[x.len() - 1]);
                prop_assert!(g.evaluate(t).unwrap() >= 0.0);
            }
        }

        #[test]
        fn displacement_composes(d1 in -5.0f64..5.0, d2 in -5.0f64..5.0, x in -8.0f64..8.0) {
            let p = Potential::poschl_teller(1.3, 0.7).unwrap();
            let a = p.displace(d1).displace(d2).evaluate(x).unwrap();
            let b = p.displace(d1 + d2).evaluate(x).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300) + 1e-15);
        }

        #[test]
        fn support_is_monotone(e1 in 1e-14f64..1e-2, e2 in 1e-14f64..1e-2) {
            let (small, large) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            for p in [Potential::exponential(1.0, 1.0).unwrap(),
                      Potential::poschl_teller(2.0, 0.5).unwrap(),
                      Potential::gaussian(1.0, 1.5).unwrap()] {
                let (l1, h1) = p.effective_support(small);
                let (l2, h2) = p.effective_support(large);
                prop_assert!(l1 <= l2 && h1 >= h2);
                prop_assert!(p.evaluate(h1 + 1e-9).unwrap() < small);
            }
        }

        #[test]
        fn builtins_nonnegative(x in -50.0f64..50.0, v0 in 0.0f64..10.0, x0 in 0.05f64..5.0) {
            for name in ["square", "exponential", "poschl_teller", "gaussian"] {
                let p = builtin(name, &params(&[("V0", v0), ("x0", x0)])).unwrap();
                prop_assert!(p.evaluate(x).unwrap() >= 0.0);
            }
        }
    }
}
