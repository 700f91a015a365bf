//! Zero counting and location in the complex κ-plane.
//!
//! Windings come from tracking arg f along the contour with adaptive
//! bisection (each accepted step turns the phase by less than
//! [`ContourOptions::max_phase_step`]). Zeros are isolated by recursive
//! quadrisection and polished by a secant iteration.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracles::oracle_for;
use crate::potentials::Potential;
use crate::solver::{amplitudes, SolverOptions};
use crate::transfer::to_jost;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rectangle {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let r = Self { re_min, re_max, im_min, im_max };
        if !(re_min < re_max) || !(im_min < im_max) || ![re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidRectangle(format!(
                "need re_min < re_max and im_min < im_max, got [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(r)
    }

    /// Parse `re0:re1:im0:im1`.
    pub fn parse(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(':')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidRectangle(format!("`{s}`: {e}")))?;
        if v.len() != 4 {
            return Err(Error::InvalidRectangle(format!("`{s}`: expected re0:re1:im0:im1")));
        }
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn center(&self) -> C {
        C::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn contains(&self, z: C) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    fn strictly_contains(&self, z: C) -> bool {
        z.re > self.re_min && z.re < self.re_max && z.im > self.im_min && z.im < self.im_max
    }

    fn size(&self) -> f64 {
        (self.re_max - self.re_min).max(self.im_max - self.im_min)
    }

    fn corners(&self) -> [C; 4] {
        [
            C::new(self.re_min, self.im_min),
            C::new(self.re_max, self.im_min),
            C::new(self.re_max, self.im_max),
            C::new(self.re_min, self.im_max),
        ]
    }

    /// Split at fractions (fx, fy) of the sides.
    fn quarter(&self, fx: f64, fy: f64) -> [Rectangle; 4] {
        let xm = self.re_min + fx * (self.re_max - self.re_min);
        let ym = self.im_min + fy * (self.im_max - self.im_min);
        [
            Rectangle { re_min: self.re_min, re_max: xm, im_min: self.im_min, im_max: ym },
            Rectangle { re_min: xm, re_max: self.re_max, im_min: self.im_min, im_max: ym },
            Rectangle { re_min: self.re_min, re_max: xm, im_min: ym, im_max: self.im_max },
            Rectangle { re_min: xm, re_max: self.re_max, im_min: ym, im_max: self.im_max },
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourOptions {
    /// Initial samples per contour piece.
    pub initial_samples: usize,
    /// Largest accepted phase increment per step (radians, < π/2).
    pub max_phase_step: f64,
    /// Smallest step, relative to the contour piece length.
    pub min_step: f64,
    /// |f| below this fraction of the median boundary |f| counts as a zero
    /// on the contour.
    pub zero_threshold: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            initial_samples: 24,
            max_phase_step: 1.0,
            min_step: 1e-12,
            zero_threshold: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub max_depth: usize,
    /// Refinement tolerance on |Δκ|.
    pub tol: f64,
    pub contour: ContourOptions,
    /// Known poles (location, order) of the scanned function, added back to
    /// cell windings so that pole-zero cancellation does not hide zeros.
    pub known_poles: Vec<(C, u32)>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            max_depth: 10,
            tol: 1e-12,
            contour: ContourOptions::default(),
            known_poles: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoundZero {
    pub location: C,
    pub multiplicity: u32,
    pub residual: f64,
    /// False for a depth-exhausted cluster reported at its cell center.
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub zeros: Vec<FoundZero>,
    /// Winding of f around the scanned rectangle (zeros minus poles).
    pub total_winding: i64,
    pub contour_samples_used: usize,
}

struct Counter(AtomicUsize);

impl Counter {
    fn eval<F: Fn(C) -> Result<C>>(&self, f: &F, z: C) -> Result<C> {
        self.0.fetch_add(1, Ordering::Relaxed);
        let v = f(z)?;
        if !v.is_finite() {
            return Err(Error::Pole(z));
        }
        Ok(v)
    }
}

/// Phase change of f along a parametrized piece `t ∈ [0, 1] ↦ z(t)`.
fn track_piece<F, P>(f: &F, path: P, opts: &ContourOptions, count: &Counter, mins: &mut Vec<(f64, C)>) -> Result<f64>
where
    F: Fn(C) -> Result<C>,
    P: Fn(f64) -> C,
{
    let n = opts.initial_samples.max(2);
    let mut total = 0.0;
    let mut t0 = 0.0;
    let mut z0 = path(0.0);
    let mut f0 = count.eval(f, z0)?;
    mins.push((f0.norm(), z0));
    let mut stack: Vec<f64> = (1..=n).rev().map(|k| k as f64 / n as f64).collect();
    while let Some(t1) = stack.pop() {
        let z1 = path(t1);
        let f1 = count.eval(f, z1)?;
        let d = (f1 / f0).arg();
        let ok = if d.abs() < opts.max_phase_step {
            // midpoint consistency guards against a full turn hidden
            // between samples
            let tm = 0.5 * (t0 + t1);
            let fm = count.eval(f, path(tm))?;
            let d2 = (fm / f0).arg() + (f1 / fm).arg();
            (d2 - d).abs() < 1e-3
        } else {
            false
        };
        if ok {
            total += d;
            t0 = t1;
            z0 = z1;
            f0 = f1;
            mins.push((f1.norm(), z1));
        } else {
            if t1 - t0 < opts.min_step {
                return Err(Error::PhaseTracking(z0));
            }
            stack.push(t1);
            stack.push(0.5 * (t0 + t1));
        }
    }
    Ok(total)
}

/// Contour piece from `start` to `end`; arcs carry (center, radius, θ₀).
type Piece = (C, C, Option<(C, f64, f64)>);

fn winding_of_pieces<F>(f: &F, pieces: &[Piece], opts: &ContourOptions, count: &Counter) -> Result<i64>
where
    F: Fn(C) -> Result<C>,
{
    let mut mins = Vec::new();
    let mut total = 0.0;
    for &(a, b, arc) in pieces {
        total += match arc {
            None => track_piece(f, |t| a + (b - a) * t, opts, count, &mut mins)?,
            Some((c, r, th0)) => {
                let dth = (b - c).arg() - th0;
                let dth = if dth <= 0.0 { dth + 2.0 * PI } else { dth };
                track_piece(f, |t| c + C::from_polar(r, th0 + dth * t), opts, count, &mut mins)?
            }
        };
    }
    check_boundary(&mut mins, opts)?;
    let w = total / (2.0 * PI);
    let r = w.round();
    if (w - r).abs() > 0.05 {
        return Err(Error::PhaseTracking(pieces[0].0));
    }
    Ok(r as i64)
}

fn check_boundary(mins: &mut [(f64, C)], opts: &ContourOptions) -> Result<()> {
    if mins.is_empty() {
        return Ok(());
    }
    mins.sort_by(|x, y| x.0.total_cmp(&y.0));
    let median = mins[mins.len() / 2].0;
    let (m, at) = mins[0];
    if m <= opts.zero_threshold * median {
        return Err(Error::ZeroOnContour { min: m, at });
    }
    Ok(())
}

fn rect_pieces(r: &Rectangle) -> Vec<Piece> {
    let c = r.corners();
    (0..4).map(|i| (c[i], c[(i + 1) % 4], None)).collect()
}

/// Winding number of f around the boundary of `rect` (counter-clockwise):
/// zeros minus poles inside, with multiplicity.
pub fn winding_number<F>(f: &F, rect: &Rectangle, opts: &ContourOptions) -> Result<i64>
where
    F: Fn(C) -> Result<C>,
{
    winding_of_pieces(f, &rect_pieces(rect), opts, &Counter(AtomicUsize::new(0)))
}

/// Winding number of f around the circle |κ − center| = radius.
pub fn winding_on_circle<F>(f: &F, center: C, radius: f64, opts: &ContourOptions) -> Result<i64>
where
    F: Fn(C) -> Result<C>,
{
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter("circle radius must be positive".into()));
    }
    let count = Counter(AtomicUsize::new(0));
    let mut mins = Vec::new();
    let o = ContourOptions { initial_samples: opts.initial_samples.max(16), ..*opts };
    let total = track_piece(f, |t| center + C::from_polar(radius, 2.0 * PI * t), &o, &count, &mut mins)?;
    check_boundary(&mut mins, opts)?;
    let w = total / (2.0 * PI);
    if (w - w.round()).abs() > 0.05 {
        return Err(Error::PhaseTracking(center + radius));
    }
    Ok(w.round() as i64)
}

/// Secant iteration from `seed` until |Δκ| < tol·max(1, |κ|) or f = 0.
pub fn refine_zero<F>(f: &F, seed: C, tol: f64) -> Result<C>
where
    F: Fn(C) -> Result<C>,
{
    let h = 1e-4 * seed.norm().max(1.0);
    let mut z0 = seed;
    let mut z1 = seed + C::new(h, 0.3 * h);
    let mut f0 = f(z0)?;
    let mut f1 = f(z1)?;
    for _ in 0..200 {
        if f1.norm() == 0.0 {
            return Ok(z1);
        }
        let df = f1 - f0;
        if df.norm() == 0.0 || !df.is_finite() {
            break;
        }
        let z2 = z1 - f1 * (z1 - z0) / df;
        if !z2.is_finite() || (z2 - seed).norm() > 1e3 * seed.norm().max(1.0) {
            break;
        }
        let step = (z2 - z1).norm();
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f(z1)?;
        if step < tol * z1.norm().max(1.0) {
            // one more step usually lands at the rounding floor
            let df = f1 - f0;
            if df.norm() > 0.0 {
                let z2 = z1 - f1 * (z1 - z0) / df;
                if let Ok(f2) = f(z2) {
                    if f2.norm() < f1.norm() {
                        return Ok(z2);
                    }
                }
            }
            return Ok(z1);
        }
    }
    Err(Error::NoConvergence(seed))
}

struct Scan<'a, F> {
    f: &'a F,
    opts: &'a ScanOptions,
    count: Counter,
}

const SPLITS: [(f64, f64); 5] = [(0.5, 0.5), (0.51, 0.493), (0.487, 0.515), (0.527, 0.471), (0.461, 0.538)];

impl<F> Scan<'_, F>
where
    F: Fn(C) -> Result<C> + Sync,
{
    fn poles_in(&self, r: &Rectangle) -> i64 {
        self.opts
            .known_poles
            .iter()
            .filter(|(z, _)| r.strictly_contains(*z))
            .map(|&(_, o)| o as i64)
            .sum()
    }

    fn winding(&self, r: &Rectangle) -> Result<i64> {
        winding_of_pieces(self.f, &rect_pieces(r), &self.opts.contour, &self.count)
    }

    fn known_pole_on_edge(&self, r: &Rectangle) -> bool {
        let eps = 1e-9 * r.size();
        self.opts.known_poles.iter().any(|(z, _)| {
            let inside = z.re >= r.re_min - eps && z.re <= r.re_max + eps && z.im >= r.im_min - eps && z.im <= r.im_max + eps;
            inside && !r.strictly_contains(*z)
        })
    }

    /// Zeros in `r`, whose zero count (winding plus enclosed poles) is `n`.
    fn cell(&self, r: Rectangle, n: i64, depth: usize) -> Vec<FoundZero> {
        if n <= 0 {
            return Vec::new();
        }
        let tol = self.opts.tol;
        if let Ok(z) = refine_zero(self.f, r.center(), tol) {
            if r.contains(z) {
                let radius = (0.25 * r.size()).min(1e3 * tol * z.norm().max(1.0)).max(10.0 * tol);
                let circle = winding_on_circle(self.f, z, radius, &self.opts.contour).ok();
                let poles_near: i64 = self
                    .opts
                    .known_poles
                    .iter()
                    .filter(|(p, _)| (p - z).norm() < radius)
                    .map(|&(_, o)| o as i64)
                    .sum();
                if circle.map(|w| w + poles_near) == Some(n) {
                    let residual = (self.f)(z).map(|v| v.norm()).unwrap_or(f64::NAN);
                    return vec![FoundZero { location: z, multiplicity: n as u32, residual, resolved: true }];
                }
            }
        }
        if depth >= self.opts.max_depth {
            let residual = (self.f)(r.center()).map(|v| v.norm()).unwrap_or(f64::NAN);
            return vec![FoundZero { location: r.center(), multiplicity: n as u32, residual, resolved: false }];
        }
        for (fx, fy) in SPLITS {
            let kids = r.quarter(fx, fy);
            if kids.iter().any(|k| self.known_pole_on_edge(k)) {
                continue;
            }
            let counts: Result<Vec<i64>> = kids
                .par_iter()
                .map(|k| Ok(self.winding(k)? + self.poles_in(k)))
                .collect();
            let Ok(counts) = counts else { continue };
            if counts.iter().sum::<i64>() != n {
                continue;
            }
            let found: Vec<Vec<FoundZero>> = kids
                .par_iter()
                .zip(counts.par_iter())
                .map(|(k, &m)| self.cell(*k, m, depth + 1))
                .collect();
            return found.into_iter().flatten().collect();
        }
        let residual = (self.f)(r.center()).map(|v| v.norm()).unwrap_or(f64::NAN);
        vec![FoundZero { location: r.center(), multiplicity: n as u32, residual, resolved: false }]
    }
}

/// Locate the zeros of f inside `rect`.
pub fn find_zeros<F>(f: &F, rect: &Rectangle, opts: &ScanOptions) -> Result<ZeroReport>
where
    F: Fn(C) -> Result<C> + Sync,
{
    if opts.max_depth == 0 || !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter("max_depth >= 1 and tol > 0 required".into()));
    }
    let scan = Scan { f, opts, count: Counter(AtomicUsize::new(0)) };
    let total = scan.winding(rect)?;
    let n = total + scan.poles_in(rect);
    let mut zeros = scan.cell(*rect, n, 0);
    zeros.sort_by(|a, b| a.location.im.total_cmp(&b.location.im).then(a.location.re.total_cmp(&b.location.re)));
    Ok(ZeroReport {
        zeros,
        total_winding: total,
        contour_samples_used: scan.count.0.load(Ordering::Relaxed),
    })
}

/// a(κ) for a potential: the closed form when `use_oracle` and one exists,
/// the solver otherwise.
pub fn jost_a_handle(p: &Potential, use_oracle: bool, opts: SolverOptions) -> impl Fn(C) -> Result<C> + Sync + '_ {
    let family = if use_oracle { p.family() } else { None };
    move |k: C| match family {
        Some(fam) => Ok(oracle_for(fam, k)?.jost.a),
        None => Ok(to_jost(&amplitudes(p, k, &opts)?)?.a),
    }
}

/// Height of the flat side of the half-disc above the real axis, where
/// a has its pole at κ = 0.
pub const HALF_DISC_LIFT: f64 = 0.05;

/// Winding of a(κ) around the half-disc of radius R in the upper
/// half-plane; for V ≥ 0 this is the number of upper-half-plane zeros.
pub fn upper_half_zero_count(p: &Potential, radius: f64, use_oracle: bool, opts: &ContourOptions) -> Result<i64> {
    if !(radius > HALF_DISC_LIFT) {
        return Err(Error::InvalidParameter("radius must exceed the half-disc lift".into()));
    }
    let f = jost_a_handle(p, use_oracle, SolverOptions::default());
    let lift = C::new(0.0, HALF_DISC_LIFT);
    let x = (radius * radius - HALF_DISC_LIFT * HALF_DISC_LIFT).sqrt();
    let a = C::new(-x, 0.0) + lift;
    let b = C::new(x, 0.0) + lift;
    let th0 = b.arg();
    let pieces = [(a, b, None), (b, a, Some((C::new(0.0, 0.0), radius, th0)))];
    winding_of_pieces(&f, &pieces, opts, &Counter(AtomicUsize::new(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{delta_barrier, poschl_teller, square_barrier};
    use crate::semiclassical::square_barrier_zero_asymptotics;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn rect(a: f64, b: f64, c: f64, d: f64) -> Rectangle {
        Rectangle::new(a, b, c, d).unwrap()
    }

    #[test]
    fn winding_examples() {
        let o = ContourOptions::default();
        let f = |k: C| Ok(k - c(1.0, 1.0));
        assert_eq!(winding_number(&f, &rect(0.0, 2.0, 0.0, 2.0), &o).unwrap(), 1);
        assert_eq!(winding_number(&f, &rect(2.0, 3.0, 0.0, 1.0), &o).unwrap(), 0);
        let g = |k: C| Ok((k + c(0.0, 1.0)) * (k + c(0.0, 1.0)));
        assert_eq!(winding_number(&g, &rect(-1.0, 1.0, -2.0, 0.0), &o).unwrap(), 2);
        let h = |k: C| Ok(1.0 / (k - c(0.2, 0.1)));
        assert_eq!(winding_number(&h, &rect(-1.0, 1.0, -1.0, 1.0), &o).unwrap(), -1);
    }

    #[test]
    fn zero_on_contour_is_reported() {
        let f = |k: C| Ok(k - c(1.0, 0.0));
        let e = winding_number(&f, &rect(1.0, 2.0, -1.0, 1.0), &ContourOptions::default()).unwrap_err();
        assert!(matches!(e, Error::ZeroOnContour { .. } | Error::PhaseTracking(_)));
        assert!(Rectangle::new(1.0, 0.0, 0.0, 1.0).is_err());
        assert_eq!(Rectangle::parse("-1:1:-3:-0.1").unwrap(), rect(-1.0, 1.0, -3.0, -0.1));
    }

    #[test]
    fn winding_is_additive() {
        let f = |k: C| Ok((k - c(0.3, 0.2)) * (k - c(-0.6, -0.7)) * (k - c(0.8, -0.4)));
        let o = ContourOptions::default();
        let r = rect(-1.0, 1.0, -1.0, 1.0);
        let parts: i64 = r.quarter(0.5, 0.5).iter().map(|q| winding_number(&f, q, &o).unwrap()).sum();
        assert_eq!(parts, winding_number(&f, &r, &o).unwrap());
        assert_eq!(parts, 3);
    }

    #[test]
    fn refine_examples() {
        let f = |k: C| Ok(k + c(0.0, 1.0));
        assert!((refine_zero(&f, c(0.0, -0.9), 1e-12).unwrap() - c(0.0, -1.0)).norm() < 1e-12);
        let g = |k: C| Ok(k.exp());
        assert!(refine_zero(&g, c(0.0, 0.0), 1e-12).is_err());
        let z = square_barrier_zero_asymptotics(1.0, 1.0, [12]).unwrap()[0];
        let a = |k: C| Ok(square_barrier(1.0, 1.0, k)?.jost.a);
        let r = refine_zero(&a, z, 1e-13).unwrap();
        assert!(a(r).unwrap().norm() < 1e-10);
    }

    #[test]
    fn delta_zero() {
        let a = |k: C| Ok(delta_barrier(2.0, k)?.jost.a);
        let rep = find_zeros(&a, &rect(-1.0, 1.0, -3.0, -0.1), &ScanOptions::default()).unwrap();
        assert_eq!(rep.zeros.len(), 1);
        assert!((rep.zeros[0].location - c(0.0, -1.0)).norm() < 1e-10);
        assert_eq!(rep.total_winding, 1);
        let free = |_k: C| Ok(c(1.0, 0.0));
        assert!(find_zeros(&free, &rect(-1.0, 1.0, -1.0, 1.0), &ScanOptions::default()).unwrap().zeros.is_empty());
    }

    #[test]
    fn poschl_teller_zeros_with_pole_hint() {
        let a = |k: C| Ok(poschl_teller(1.0, 1.0, k)?.jost.a);
        let opts = ScanOptions {
            known_poles: vec![(c(0.0, -1.0), 2), (c(0.0, -2.0), 2), (c(0.0, -3.0), 2)],
            ..ScanOptions::default()
        };
        let rep = find_zeros(&a, &rect(-2.0, 2.0, -2.2, -0.1), &opts).unwrap();
        let s = 3f64.sqrt() / 2.0;
        for n in 0..2 {
            for sg in [1.0, -1.0] {
                let want = c(sg * s, -(n as f64 + 0.5));
                assert!(rep.zeros.iter().any(|z| (z.location - want).norm() < 1e-9), "missing {want}");
            }
        }
        assert_eq!(rep.zeros.len(), 4);
        // the double poles
        let o = ContourOptions::default();
        assert_eq!(winding_on_circle(&a, c(0.0, -1.0), 0.1, &o).unwrap(), -2);
    }

    #[test]
    fn square_zero_pairs_and_double_zero() {
        let a = |k: C| Ok(square_barrier(1.0, 1.0, k)?.jost.a);
        let rep = find_zeros(&a, &rect(-8.0, 8.0, -4.0, -0.05), &ScanOptions::default()).unwrap();
        assert!(!rep.zeros.is_empty());
        for z in &rep.zeros {
            assert!(z.resolved && z.residual < 1e-9);
            let m = -z.location.conj();
            assert!(rep.zeros.iter().any(|w| (w.location - m).norm() < 1e-8), "no mirror of {}", z.location);
        }
        let g = |k: C| Ok((k - c(0.3, -0.4)).powi(2) * (k + 2.0));
        let rep = find_zeros(&g, &rect(-1.0, 1.0, -1.0, 1.0), &ScanOptions::default()).unwrap();
        assert_eq!(rep.zeros.len(), 1);
        assert_eq!(rep.zeros[0].multiplicity, 2);
        assert!((rep.zeros[0].location - c(0.3, -0.4)).norm() < 1e-6);
    }

    #[test]
    fn no_upper_half_plane_zeros() {
        let o = ContourOptions::default();
        let sq = Potential::square(1.0, 1.0).unwrap();
        assert_eq!(upper_half_zero_count(&sq, 20.0, true, &o).unwrap(), 0);
        let pt = Potential::poschl_teller(1.0, 1.0).unwrap();
        assert_eq!(upper_half_zero_count(&pt, 10.0, true, &o).unwrap(), 0);
        let d = Potential::delta(2.0, 0.0).unwrap();
        assert_eq!(upper_half_zero_count(&d, 10.0, false, &o).unwrap(), 0);
        // a made-up function with one zero up there is counted
        let f = |k: C| Ok(k - c(0.5, 2.0));
        let lift = C::new(0.0, HALF_DISC_LIFT);
        let x = (100.0 - HALF_DISC_LIFT * HALF_DISC_LIFT).sqrt();
        let pieces = [
            (lift - x, lift + x, None),
            (lift + x, lift - x, Some((c(0.0, 0.0), 10.0, (lift + x).arg()))),
        ];
        assert_eq!(winding_of_pieces(&f, &pieces, &o, &Counter(AtomicUsize::new(0))).unwrap(), 1);
    }

    #[test]
    fn solver_and_oracle_scans_agree() {
        let sq = Potential::square(1.0, 1.0).unwrap();
        let r = rect(0.5, 4.0, -2.0, -0.05);
        let o = find_zeros(&jost_a_handle(&sq, true, SolverOptions::default()), &r, &ScanOptions::default()).unwrap();
        let s = find_zeros(&jost_a_handle(&sq, false, SolverOptions::default()), &r, &ScanOptions { tol: 1e-10, ..ScanOptions::default() }).unwrap();
        assert_eq!(o.zeros.len(), s.zeros.len());
        for (x, y) in o.zeros.iter().zip(&s.zeros) {
            assert!((x.location - y.location).norm() < 1e-7);
        }
    }
}
