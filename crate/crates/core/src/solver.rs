//! Direct integration of `y'' = (V − κ²) y`.
//!
//! Rather than (y, y′), the integrator carries the slowly varying
//! coefficients of the plane-wave decomposition,
//!
//! ```text
//! y₋ = (1 − A/2iκ) e^{−iκx} + (B/2iκ) e^{iκx},
//! A′ = V y₋ e^{iκx},   B′ = V y₋ e^{−iκx},
//! ```
//!
//! so that A → α and B → β at the right end of the support. The right-hand
//! side vanishes wherever V does, which keeps long tails cheap and avoids the
//! cancellation in extracting α, β from oscillating (y, y′).
//!
//! Exponential tails are not truncated crudely: beyond the cutoff the
//! potential is treated as `v e^{∓2s x}`, for which the solutions are
//! `e^{±iκx} ₀F₁(; 1 ± iκ/s; V/4s²)`, and the coefficients are matched
//! exactly at the cutoff.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{Dopri5, Stats};
use crate::potentials::{Potential, TailKind};
use crate::specfun::hyp0f1;
use crate::transfer::{self, AmplitudePair, JostCoefficients, NEAR_ZERO_KAPPA};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub ode_rel_tol: f64,
    pub ode_abs_tol: f64,
    /// Support cutoff relative to max V.
    pub support_eps: f64,
    pub max_step: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            ode_rel_tol: 1e-11,
            ode_abs_tol: 1e-13,
            support_eps: 1e-12,
            max_step: 0.5,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let all = [self.ode_rel_tol, self.ode_abs_tol, self.support_eps, self.max_step];
        if all.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("solver options must be positive: {self:?}")))
        }
    }

    fn integrator(&self, kappa: C) -> Dopri5 {
        Dopri5::new(
            self.ode_rel_tol,
            self.ode_abs_tol,
            self.max_step.min(1.0 / kappa.norm().max(1e-300)),
        )
    }

    /// Same options with both tolerances scaled by `f`.
    pub fn scaled(&self, f: f64) -> Self {
        Self {
            ode_rel_tol: self.ode_rel_tol * f,
            ode_abs_tol: self.ode_abs_tol * f,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// y₋, integrated left to right.
    FromLeft,
    /// y₊, integrated right to left.
    FromRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: f64,
    pub y: C,
    pub dy: C,
}

/// One fundamental solution along the truncated support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalSolution {
    pub kappa: C,
    pub direction: Direction,
    /// (x, y, y′) at every knot, in integration order.
    pub samples: Vec<Sample>,
    /// (A, B) where the integration starts (tail-matched) and ends.
    pub start: (C, C),
    pub end: (C, C),
    /// Asymptotic (A, B) beyond the far end: (α, β) for y₋ and
    /// (A₊(−∞), B₊(−∞)) for y₊.
    pub asymptotic: (C, C),
    pub stats: Stats,
}

impl FundamentalSolution {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// w(y₋, y₊) = y₋′y₊ − y₋y₊′ at each common knot.
pub fn wronskian(left: &FundamentalSolution, right: &FundamentalSolution) -> Vec<(f64, C)> {
    let mut out = Vec::new();
    for s in &left.samples {
        if let Some(r) = right.samples.iter().find(|r| r.x == s.x) {
            out.push((s.x, s.dy * r.y - s.y * r.dy));
        }
    }
    out
}

fn check_kappa(p: &Potential, kappa: C) -> Result<()> {
    if !kappa.is_finite() || kappa.norm() < NEAR_ZERO_KAPPA {
        return Err(Error::NearZeroMomentum(kappa.norm()));
    }
    if let Some(s) = p.min_tail_slope() {
        if kappa.im < -s {
            return Err(Error::TailLimited { kappa, limit: -s });
        }
    }
    Ok(())
}

/// The support used by the solver: V < support_eps · max V outside.
pub fn solver_support(p: &Potential, opts: &SolverOptions) -> (f64, f64) {
    let vmax = p.max_value();
    if vmax <= 0.0 {
        let sp = p.spikes();
        return match (sp.first(), sp.last()) {
            (Some(a), Some(b)) => (a.0, b.0),
            _ => (0.0, 0.0),
        };
    }
    let (lo, hi) = p.effective_support(opts.support_eps * vmax);
    let (lt, rt) = p.tails();
    let lo = match lt.slope() {
        Some(s) => exact_tail_edge(p, lo, hi, s, -1.0),
        None => lo,
    };
    let hi = match rt.slope() {
        Some(s) => exact_tail_edge(p, hi, lo, s, 1.0),
        None => hi,
    };
    (lo, hi)
}

/// Move a matching edge inward while V stays a pure exponential of the
/// given slope (to near rounding) and the tail series stays convergent.
/// Matching closer in keeps the subdominant amplitude well conditioned
/// off the real axis.
fn exact_tail_edge(p: &Potential, edge: f64, other: f64, slope: f64, side: f64) -> f64 {
    const REL: f64 = 1e-13;
    let v_edge = p.evaluate_or_zero(edge);
    if v_edge <= 0.0 {
        return edge;
    }
    let pure = |x: f64| v_edge * (-2.0 * slope * side * (x - edge)).exp();
    let matches = |x: f64| {
        let v = p.evaluate_or_zero(x);
        (v - pure(x)).abs() <= REL * v.abs().max(f64::MIN_POSITIVE)
    };
    let step = 0.125 / slope;
    let mut cur = edge;
    loop {
        let next = cur - side * step;
        if (next - other) * side <= 0.0 {
            break;
        }
        if p.evaluate_or_zero(next) / (4.0 * slope * slope) > 400.0 {
            break;
        }
        // check a few interior points of the new segment as well
        if !(1..=4).all(|j| matches(cur - side * step * j as f64 / 4.0)) {
            break;
        }
        cur = next;
    }
    cur
}

/// Tail basis at a cutoff: u₁ = e^{−iκx}F₁, u₂ = e^{iκx}F₂ with
/// u′ = e^{λx}(λF + D). `sigma` is +1 on the left tail, −1 on the right.
struct TailBasis {
    f1: C,
    d1: C,
    f2: C,
    f2m1: C,
    f1m1: C,
    d2: C,
}

fn tail_basis(kappa: C, slope: f64, v_edge: f64, sigma: f64) -> Result<TailBasis> {
    let q = C::new(v_edge / (4.0 * slope * slope), 0.0);
    let mu1 = -sigma * I * kappa / slope;
    let mu2 = sigma * I * kappa / slope;
    let pole = |e: Error| match e {
        Error::Pole(_) => Error::Pole(kappa),
        other => other,
    };
    let h1 = hyp0f1(mu1 + 1.0, q).map_err(pole)?;
    let h2 = hyp0f1(mu2 + 1.0, q).map_err(pole)?;
    let ds = 2.0 * sigma * slope * q;
    Ok(TailBasis {
        f1: h1.value,
        f1m1: h1.minus_one,
        d1: ds * h1.derivative,
        f2: h2.value,
        f2m1: h2.minus_one,
        d2: ds * h2.derivative,
    })
}

fn edge_slope(t: TailKind) -> Option<f64> {
    t.slope()
}

/// Build the list of integration knots in ascending order.
fn knots(p: &Potential, lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut k: Vec<f64> = p
        .breakpoints()
        .into_iter()
        .chain(extra.iter().copied())
        .filter(|x| *x > lo && *x < hi)
        .collect();
    k.push(lo);
    k.push(hi);
    k.sort_by(f64::total_cmp);
    k.dedup();
    k
}

fn spike_strength_at(spikes: &[(f64, f64)], x: f64) -> f64 {
    spikes.iter().filter(|s| s.0 == x).map(|s| s.1).sum()
}

/// Integrate one fundamental solution with samples at `extra` points.
pub fn fundamental_solution(
    p: &Potential,
    kappa: C,
    direction: Direction,
    opts: &SolverOptions,
    extra: &[f64],
) -> Result<FundamentalSolution> {
    opts.validate()?;
    check_kappa(p, kappa)?;
    let (lo, hi) = solver_support(p, opts);
    let knots = knots(p, lo, hi, extra);
    let spikes = p.spikes();
    let ode = opts.integrator(kappa);
    let mut stats = Stats::default();
    let k2 = 2.0 * I * kappa;
    let (left_tail, right_tail) = p.tails();
    let mut samples = Vec::with_capacity(knots.len());

    match direction {
        Direction::FromLeft => {
            let rhs = |x: f64, s: &[C; 2]| {
                let v = p.evaluate_or_zero(x);
                if v == 0.0 {
                    return [C::new(0.0, 0.0); 2];
                }
                let e = (I * kappa * x).exp();
                let y = (1.0 - s[0] / k2) / e + s[1] * e / k2;
                [v * y * e, v * y / e]
            };
            let start = match edge_slope(left_tail) {
                Some(slope) => {
                    let t = tail_basis(kappa, slope, p.evaluate_or_zero(lo), 1.0)?;
                    // y₋ = e^{−iκx} F₁ on the left tail
                    let d = t.d1;
                    [-k2 * t.f1m1 + d, (-k2 * lo).exp() * d]
                }
                None => [C::new(0.0, 0.0); 2],
            };
            let mut state = start;
            for (i, &x) in knots.iter().enumerate() {
                let v0 = spike_strength_at(&spikes, x);
                let e = (I * kappa * x).exp();
                if v0 != 0.0 {
                    let y = (1.0 - state[0] / k2) / e + state[1] * e / k2;
                    state[0] += v0 * y * e;
                    state[1] += v0 * y / e;
                }
                samples.push(sample_minus(kappa, x, &state));
                if let Some(&next) = knots.get(i + 1) {
                    state = ode.integrate(rhs, x, next, state, &mut stats)?;
                }
            }
            let (a, b) = (state[0], state[1]);
            let asymptotic = match edge_slope(right_tail) {
                Some(slope) => {
                    let t = tail_basis(kappa, slope, p.evaluate_or_zero(hi), -1.0)?;
                    let at = 1.0 - a / k2;
                    let bt = b / k2;
                    let e2 = (k2 * hi).exp();
                    let alpha = a * t.f2 - k2 * t.f2m1 - (at + bt * e2) * t.d2;
                    let beta = b * t.f1 - t.d1 * (at / e2 + bt);
                    (alpha, beta)
                }
                None => (a, b),
            };
            Ok(FundamentalSolution {
                kappa,
                direction,
                samples,
                start: (start[0], start[1]),
                end: (a, b),
                asymptotic,
                stats,
            })
        }
        Direction::FromRight => {
            let rhs = |x: f64, s: &[C; 2]| {
                let v = p.evaluate_or_zero(x);
                if v == 0.0 {
                    return [C::new(0.0, 0.0); 2];
                }
                let e = (I * kappa * x).exp();
                let y = (1.0 - s[0] / k2) * e + s[1] / (e * k2);
                [-v * y / e, -v * y * e]
            };
            let start = match edge_slope(right_tail) {
                Some(slope) => {
                    let t = tail_basis(kappa, slope, p.evaluate_or_zero(hi), -1.0)?;
                    // y₊ = e^{iκx} F₂ on the right tail
                    let d = t.d2;
                    [-k2 * t.f2m1 - d, -d * (k2 * hi).exp()]
                }
                None => [C::new(0.0, 0.0); 2],
            };
            let mut state = start;
            for (i, &x) in knots.iter().enumerate().rev() {
                let v0 = spike_strength_at(&spikes, x);
                let e = (I * kappa * x).exp();
                if v0 != 0.0 {
                    let y = (1.0 - state[0] / k2) * e + state[1] / (e * k2);
                    state[0] += v0 * y / e;
                    state[1] += v0 * y * e;
                }
                samples.push(sample_plus(kappa, x, &state));
                if i > 0 {
                    state = ode.integrate(rhs, x, knots[i - 1], state, &mut stats)?;
                }
            }
            let (a, b) = (state[0], state[1]);
            let asymptotic = match edge_slope(left_tail) {
                Some(slope) => {
                    let t = tail_basis(kappa, slope, p.evaluate_or_zero(lo), 1.0)?;
                    let at = b / k2;
                    let bt = 1.0 - a / k2;
                    let e2 = (k2 * lo).exp();
                    let a_inf = a * t.f1 - k2 * t.f1m1 + t.d1 * (at / e2 + bt);
                    let b_inf = b * t.f2 + (at + bt * e2) * t.d2;
                    (a_inf, b_inf)
                }
                None => (a, b),
            };
            Ok(FundamentalSolution {
                kappa,
                direction,
                samples,
                start: (start[0], start[1]),
                end: (a, b),
                asymptotic,
                stats,
            })
        }
    }
}

fn sample_minus(kappa: C, x: f64, s: &[C; 2]) -> Sample {
    let k2 = 2.0 * I * kappa;
    let e = (I * kappa * x).exp();
    let c1 = (1.0 - s[0] / k2) / e;
    let c2 = s[1] / k2 * e;
    Sample {
        x,
        y: c1 + c2,
        dy: I * kappa * (c2 - c1),
    }
}

fn sample_plus(kappa: C, x: f64, s: &[C; 2]) -> Sample {
    let k2 = 2.0 * I * kappa;
    let e = (I * kappa * x).exp();
    let c1 = (1.0 - s[0] / k2) * e;
    let c2 = s[1] / (k2 * e);
    Sample {
        x,
        y: c1 + c2,
        dy: I * kappa * (c1 - c2),
    }
}

/// α(κ), β(κ) from y₋.
pub fn amplitudes(p: &Potential, kappa: C, opts: &SolverOptions) -> Result<AmplitudePair> {
    let sol = fundamental_solution(p, kappa, Direction::FromLeft, opts, &[])?;
    let (alpha, beta) = sol.asymptotic;
    finite(kappa, alpha, beta)
}

fn finite(kappa: C, alpha: C, beta: C) -> Result<AmplitudePair> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::Integration {
            x: f64::NAN,
            reason: format!("non-finite amplitudes at kappa = {kappa}"),
        });
    }
    Ok(AmplitudePair::new(kappa, alpha, beta))
}

/// Amplitudes together with a conservative error estimate: the change
/// when both ODE tolerances are loosened by 16×.
pub fn amplitudes_with_estimate(
    p: &Potential,
    kappa: C,
    opts: &SolverOptions,
) -> Result<(AmplitudePair, f64)> {
    let fine = amplitudes(p, kappa, opts)?;
    let coarse = amplitudes(p, kappa, &opts.scaled(16.0))?;
    let est = (fine.alpha - coarse.alpha).norm().max((fine.beta - coarse.beta).norm());
    Ok((fine, est))
}

/// Extractions from y₋ and from y₊.
///
/// The second pair holds (A₊(−∞), B₊(−∞)) = (2iκ(1 − c), −2iκ b̄); a = c
/// and, on the real axis, β = conj(B₊(−∞)).
pub fn amplitudes_both_sides(
    p: &Potential,
    kappa: C,
    opts: &SolverOptions,
) -> Result<(AmplitudePair, AmplitudePair)> {
    let left = fundamental_solution(p, kappa, Direction::FromLeft, opts, &[])?;
    let right = fundamental_solution(p, kappa, Direction::FromRight, opts, &[])?;
    Ok((
        finite(kappa, left.asymptotic.0, left.asymptotic.1)?,
        finite(kappa, right.asymptotic.0, right.asymptotic.1)?,
    ))
}

/// a(κ), b(κ) with the continued conjugates attached (evaluated at −κ)
/// whenever κ is off the real axis.
pub fn jost(p: &Potential, kappa: C, opts: &SolverOptions) -> Result<JostCoefficients> {
    let jc = transfer::to_jost(&amplitudes(p, kappa, opts)?)?;
    if kappa.im == 0.0 {
        return Ok(jc);
    }
    let mirror = transfer::to_jost(&amplitudes(p, -kappa, opts)?)?;
    jc.with_mirror(&mirror)
}

/// Endpoint values (ζ₀, ζ₀′, ζ₁, ζ₁′) of the interior basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorBasis {
    pub z0: C,
    pub dz0: C,
    pub z1: C,
    pub dz1: C,
}

impl InteriorBasis {
    /// The basis of an empty interval.
    pub fn identity() -> Self {
        Self {
            z0: C::new(1.0, 0.0),
            dz0: C::new(0.0, 0.0),
            z1: C::new(0.0, 0.0),
            dz1: C::new(1.0, 0.0),
        }
    }

    pub fn wronskian(&self) -> C {
        self.z0 * self.dz1 - self.dz0 * self.z1
    }

    /// Map (y, y′) at x₋ to (y, y′) at x₊.
    pub fn propagate(&self, y: C, dy: C) -> (C, C) {
        (y * self.z0 + dy * self.z1, y * self.dz0 + dy * self.dz1)
    }
}

/// cos(κt) and sin(κt)/κ as functions of κ².
fn cos_sinc(kappa_sq: C, t: f64) -> (C, C) {
    let k = kappa_sq.sqrt();
    if (k * t).norm() < 1e-4 {
        let u = kappa_sq * t * t;
        (
            1.0 - u / 2.0 + u * u / 24.0 - u * u * u / 720.0,
            t * (1.0 - u / 6.0 + u * u / 120.0 - u * u * u / 5040.0),
        )
    } else {
        ((k * t).cos(), (k * t).sin() / k)
    }
}

/// Solutions z₀ (z = 1, z′ = 0 at x₋) and z₁ (z = 0, z′ = 1 at x₋) at x₊.
///
/// The integrator carries modulated coefficients (u, w) with
/// z = u cos κt + w sin(κt)/κ, t = x − x₋, which depend on κ² only.
pub fn interior_basis(
    p: &Potential,
    kappa_sq: C,
    x_minus: f64,
    x_plus: f64,
    opts: &SolverOptions,
) -> Result<InteriorBasis> {
    opts.validate()?;
    if !(x_plus >= x_minus) {
        return Err(Error::InvalidParameter("interior interval must be ordered".into()));
    }
    let vmax = p.max_value();
    if vmax > 0.0 {
        let (lo, hi) = p.effective_support(opts.support_eps * vmax);
        let slack = 1e-9 * (1.0 + x_minus.abs().max(x_plus.abs()));
        if lo < x_minus - slack || hi > x_plus + slack {
            return Err(Error::InvalidParameter(format!(
                "potential does not vanish outside [{x_minus}, {x_plus}] (support [{lo}, {hi}])"
            )));
        }
    }
    for (x, _) in p.spikes() {
        if x < x_minus || x > x_plus {
            return Err(Error::InvalidParameter(format!(
                "delta spike at {x} lies outside [{x_minus}, {x_plus}]"
            )));
        }
    }

    let k = kappa_sq.sqrt();
    let ode = Dopri5::new(
        opts.ode_rel_tol,
        opts.ode_abs_tol,
        opts.max_step.min(1.0 / k.norm().max(1e-300)),
    );
    let rhs = |x: f64, s: &[C; 4]| {
        let v = p.evaluate_or_zero(x);
        if v == 0.0 {
            return [C::new(0.0, 0.0); 4];
        }
        let (c, sn) = cos_sinc(kappa_sq, x - x_minus);
        let z0 = s[0] * c + s[1] * sn;
        let z1 = s[2] * c + s[3] * sn;
        [-sn * v * z0, c * v * z0, -sn * v * z1, c * v * z1]
    };
    let spikes = p.spikes();
    let knots = knots(p, x_minus, x_plus, &[]);
    let mut stats = Stats::default();
    let mut s = [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)];
    for (i, &x) in knots.iter().enumerate() {
        let v0 = spike_strength_at(&spikes, x);
        if v0 != 0.0 {
            let (c, sn) = cos_sinc(kappa_sq, x - x_minus);
            let z0 = s[0] * c + s[1] * sn;
            let z1 = s[2] * c + s[3] * sn;
            s[0] -= sn * v0 * z0;
            s[1] += c * v0 * z0;
            s[2] -= sn * v0 * z1;
            s[3] += c * v0 * z1;
        }
        if let Some(&next) = knots.get(i + 1) {
            s = ode.integrate(rhs, x, next, s, &mut stats)?;
        }
    }
    let (c, sn) = cos_sinc(kappa_sq, x_plus - x_minus);
    Ok(InteriorBasis {
        z0: s[0] * c + s[1] * sn,
        dz0: -kappa_sq * s[0] * sn + s[1] * c,
        z1: s[2] * c + s[3] * sn,
        dz1: -kappa_sq * s[2] * sn + s[3] * c,
    })
}

/// a, b from the interior basis by continuity with plane waves at x±.
///
/// ```text
/// a = e^{iκ(x₊−x₋)}/(2iκ) [−ζ₀′ + iκ(ζ₀ + ζ₁′) + κ²ζ₁]
/// b = e^{−iκ(x₊+x₋)}/(2iκ) [ζ₀′ + iκ(ζ₀ − ζ₁′) + κ²ζ₁]
/// ```
///
/// The bracket for b is the one consistent with b → b e^{−2iκd} under
/// displacement; its mirror image (κ → −κ, overall sign) is the left
/// reflection coefficient b′ = −b̄.
pub fn jost_from_interior(
    zeta: &InteriorBasis,
    kappa: C,
    x_minus: f64,
    x_plus: f64,
) -> Result<JostCoefficients> {
    if kappa.norm() < NEAR_ZERO_KAPPA {
        return Err(Error::NearZeroMomentum(kappa.norm()));
    }
    let k2 = 2.0 * I * kappa;
    let ks = kappa * kappa;
    let a = (I * kappa * (x_plus - x_minus)).exp() / k2
        * (-zeta.dz0 + I * kappa * (zeta.z0 + zeta.dz1) + ks * zeta.z1);
    let b = (-I * kappa * (x_plus + x_minus)).exp() / k2
        * (zeta.dz0 + I * kappa * (zeta.z0 - zeta.dz1) + ks * zeta.z1);
    Ok(JostCoefficients::new(kappa, a, b))
}

/// Interior route on the solver support, for potentials without
/// exponential tails.
pub fn jost_interior_route(p: &Potential, kappa: C, opts: &SolverOptions) -> Result<JostCoefficients> {
    if !p.has_finite_range() {
        return Err(Error::InvalidParameter(
            "interior route needs a potential without exponential tails".into(),
        ));
    }
    let (lo, hi) = solver_support(p, opts);
    let zeta = interior_basis(p, kappa * kappa, lo, hi, opts)?;
    jost_from_interior(&zeta, kappa, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::Potential;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    /// Square barrier a, b via entire functions of p² (test-local oracle).
    fn square_ab(v0: f64, x0: f64, k: C) -> (C, C) {
        let l = 2.0 * x0;
        let p2 = k * k - v0;
        let p = p2.sqrt();
        let (cs, sn) = if (p * l).norm() < 1e-6 {
            (C::new(1.0, 0.0), C::new(l, 0.0))
        } else {
            ((p * l).cos(), (p * l).sin() / p)
        };
        let a = (I * k * l).exp() * (cs + (2.0 * k * k - v0) * sn / (2.0 * I * k));
        let b = v0 * sn / (2.0 * I * k);
        (a, b)
    }

    #[test]
    fn free_particle_has_zero_amplitudes() {
        let ap = amplitudes(&Potential::free(), c(1.0, 0.0), &opts()).unwrap();
        assert_eq!((ap.alpha, ap.beta), (c(0.0, 0.0), c(0.0, 0.0)));
        let (l, r) = amplitudes_both_sides(&Potential::free(), c(1.0, 0.0), &opts()).unwrap();
        assert_eq!(l.alpha.norm() + r.alpha.norm() + l.beta.norm() + r.beta.norm(), 0.0);
    }

    #[test]
    fn square_barrier_matches_closed_form() {
        let p = Potential::square(1.0, 1.0).unwrap();
        for k in [c(2.0, 0.0), c(0.3, 0.0), c(1.0, 0.0), c(1.5, -0.7), c(4.0, 1.0)] {
            let jc = transfer::to_jost(&amplitudes(&p, k, &opts()).unwrap()).unwrap();
            let (a, b) = square_ab(1.0, 1.0, k);
            assert!((jc.a - a).norm() < 1e-9 * a.norm(), "{k}: {} vs {a}", jc.a);
            assert!((jc.b - b).norm() < 1e-9 * a.norm(), "{k}: {} vs {b}", jc.b);
        }
    }

    #[test]
    fn delta_spike_jump() {
        let p = Potential::delta(2.0, 0.0).unwrap();
        let ap = amplitudes(&p, c(1.0, 0.0), &opts()).unwrap();
        assert!((ap.alpha - 2.0).norm() < 1e-14 && (ap.beta - 2.0).norm() < 1e-14);
    }

    #[test]
    fn both_sides_agree() {
        let sq = Potential::square(1.0, 1.0).unwrap();
        let bump = Potential::square(0.7, 0.4).unwrap();
        let asym = Potential::composite(vec![(sq.clone(), -1.5), (bump, 1.2)]).unwrap();
        for (p, k) in [(sq, 1.7), (asym, 2.3)] {
            let k = c(k, 0.0);
            let (l, r) = amplitudes_both_sides(&p, k, &opts()).unwrap();
            let a = 1.0 - l.alpha / (2.0 * I * k);
            let cc = 1.0 - r.alpha / (2.0 * I * k);
            assert!((a - cc).norm() < 1e-9);
            assert!((l.beta - r.beta.conj()).norm() < 1e-9);
        }
    }

    #[test]
    fn wronskian_is_constant() {
        let p = Potential::gaussian(1.5, 0.8).unwrap();
        let k = c(1.3, -0.2);
        let pts: Vec<f64> = (0..21).map(|i| -3.0 + 0.3 * i as f64).collect();
        let l = fundamental_solution(&p, k, Direction::FromLeft, &opts(), &pts).unwrap();
        let r = fundamental_solution(&p, k, Direction::FromRight, &opts(), &pts).unwrap();
        let w = wronskian(&l, &r);
        assert!(w.len() > 20);
        let w0 = w[0].1;
        for (_, wi) in &w {
            assert!((wi - w0).norm() < 1e-9 * w0.norm());
        }
        // w(y₋, y₊) = −2iκa
        let a = 1.0 - l.asymptotic.0 / (2.0 * I * k);
        assert!((w0 + 2.0 * I * k * a).norm() < 1e-9 * w0.norm());
    }

    #[test]
    fn strip_refusal() {
        let p = Potential::poschl_teller(1.0, 1.0).unwrap();
        assert!(matches!(
            amplitudes(&p, c(1.0, -1.2), &opts()),
            Err(Error::TailLimited { .. })
        ));
        assert!(matches!(
            amplitudes(&p, c(1e-10, 0.0), &opts()),
            Err(Error::NearZeroMomentum(_))
        ));
    }

    #[test]
    fn interior_basis_free() {
        let z = interior_basis(&Potential::free(), c(1.0, 0.0), -1.0, 1.0, &opts()).unwrap();
        let two = c(2.0, 0.0);
        assert!((z.z0 - two.cos()).norm() < 1e-14);
        assert!((z.dz0 + two.sin()).norm() < 1e-14);
        assert!((z.z1 - two.sin()).norm() < 1e-14);
        assert!((z.dz1 - two.cos()).norm() < 1e-14);
        for ks in [c(0.3, 2.0), c(-4.0, 0.1), c(25.0, 0.0)] {
            let z = interior_basis(&Potential::free(), ks, 0.0, 3.0, &opts()).unwrap();
            let scale = (z.z0 * z.dz1).norm() + (z.dz0 * z.z1).norm();
            assert!((z.wronskian() - 1.0).norm() < 1e-14 * scale);
        }
    }

    #[test]
    fn interior_basis_at_barrier_top() {
        // κ² = V₀ inside a square: z₁'' = 0, so ζ₁ = L
        let p = Potential::square(1.0, 1.0).unwrap();
        let z = interior_basis(&p, c(1.0, 0.0), -1.0, 1.0, &opts()).unwrap();
        assert!((z.z1 - 2.0).norm() < 1e-10);
        assert!((z.wronskian() - 1.0).norm() < 1e-10);
    }

    #[test]
    fn interior_route_matches_closed_form() {
        let p = Potential::square(1.0, 1.0).unwrap();
        for k in [c(2.0, 0.0), c(0.5, 0.0), c(1.2, -0.8), c(7.0, 0.3)] {
            let jc = jost_interior_route(&p, k, &opts()).unwrap();
            let (a, b) = square_ab(1.0, 1.0, k);
            assert!((jc.a - a).norm() < 1e-10 * a.norm(), "{k}");
            assert!((jc.b - b).norm() < 1e-10 * a.norm(), "{k}");
        }
        let free = jost_from_interior(&InteriorBasis::identity(), c(1.0, 0.0), 0.0, 0.0).unwrap();
        assert!((free.a - 1.0).norm() < 1e-15 && free.b.norm() < 1e-15);
    }

    #[test]
    fn interior_route_on_asymmetric_potential() {
        let bump = Potential::square(0.8, 0.3).unwrap();
        let spike = Potential::delta(1.5, 0.0).unwrap();
        let p = Potential::composite(vec![(bump, -0.6), (spike, 0.9)]).unwrap();
        for k in [c(1.3, 0.0), c(2.1, -0.4)] {
            let direct = transfer::to_jost(&amplitudes(&p, k, &opts()).unwrap()).unwrap();
            let interior = jost_interior_route(&p, k, &opts()).unwrap();
            assert!((direct.a - interior.a).norm() < 1e-9, "{k}");
            assert!((direct.b - interior.b).norm() < 1e-9, "{k}");
        }
        // a lone spike at d: b = v₀ e^{−2iκd}/(2iκ)
        let d = 0.7;
        let spike = Potential::delta(2.0, d).unwrap();
        let k = c(1.1, 0.0);
        let z = interior_basis(&spike, k * k, d, d, &opts()).unwrap();
        let jc = jost_from_interior(&z, k, d, d).unwrap();
        let expect = 2.0 * (-2.0 * I * k * d).exp() / (2.0 * I * k);
        assert!((jc.b - expect).norm() < 1e-14);
    }

    #[test]
    fn routes_agree_on_truncated_gaussian() {
        let p = Potential::gaussian(2.0, 0.7).unwrap();
        for k in [c(0.4, 0.0), c(1.5, 0.0), c(3.0, -0.5), c(6.0, 0.0)] {
            let direct = transfer::to_jost(&amplitudes(&p, k, &opts()).unwrap()).unwrap();
            let interior = jost_interior_route(&p, k, &opts()).unwrap();
            assert!((direct.a - interior.a).norm() < 1e-8 * direct.a.norm(), "{k}");
            assert!((direct.b - interior.b).norm() < 1e-8 * direct.a.norm(), "{k}");
        }
    }

    #[test]
    fn interior_route_is_analytic() {
        // Cauchy–Riemann: ∂a/∂x = −i ∂a/∂y
        let p = Potential::gaussian(1.0, 1.0).unwrap();
        let k = c(1.1, -0.3);
        let h = 1e-4;
        let f = |k: C| jost_interior_route(&p, k, &opts()).unwrap().a;
        let dx = (f(k + h) - f(k - h)) / (2.0 * h);
        let dy = (f(k + I * h) - f(k - I * h)) / (2.0 * h);
        assert!((dx + I * dy).norm() < 1e-6 * dx.norm());
    }

    #[test]
    fn exponential_tails_are_matched_exactly() {
        // pure exponential barrier: a from the solver is unitary and
        // independent of the support cutoff
        let p = Potential::exponential(1.0, 1.0).unwrap();
        let k = c(1.5, 0.0);
        let loose = SolverOptions { support_eps: 1e-4, ..opts() };
        let j1 = transfer::to_jost(&amplitudes(&p, k, &opts()).unwrap()).unwrap();
        let j2 = transfer::to_jost(&amplitudes(&p, k, &loose).unwrap()).unwrap();
        assert!(j1.unitarity_defect() < 1e-9);
        assert!((j1.a - j2.a).norm() < 1e-9 && (j1.b - j2.b).norm() < 1e-9);
    }

    #[test]
    fn tolerance_halving_within_estimate() {
        let p = Potential::poschl_teller(1.0, 1.0).unwrap();
        let k = c(2.0, -0.3);
        let o = SolverOptions { ode_rel_tol: 1e-8, ode_abs_tol: 1e-10, ..opts() };
        let (ap, est) = amplitudes_with_estimate(&p, k, &o).unwrap();
        let half = amplitudes(&p, k, &o.scaled(0.5)).unwrap();
        let change = (ap.alpha - half.alpha).norm().max((ap.beta - half.beta).norm());
        assert!(change <= est, "{change} > {est}");
    }
}
