//! WKB amplitudes and asymptotic zeros of a.
//!
//! The interior solutions are replaced by their semiclassical forms
//! `ζ₀ = √(p₋/p₊) cos θ`, `ζ₁ = sin θ/√(p₋p₊)`, … with
//! `θ = ∫√(κ² − V)`, and fed through the same matching formulas as the
//! exact interior route. For a constant V this is exact.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::Potential;
use crate::quad::gauss_kronrod;
use crate::solver::{jost_from_interior, InteriorBasis};
use crate::transfer::{JostCoefficients, NEAR_ZERO_KAPPA};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

/// Relative closeness of κ² to V(x) treated as a turning point.
pub const TURNING_POINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WkbData {
    pub theta: C,
    pub p_minus: C,
    pub p_plus: C,
}

/// √(κ² − V) on the branch that tends to κ: the principal root, flipped
/// when it points away from κ.
pub fn local_momentum(kappa: C, v: f64) -> C {
    let r = (kappa * kappa - v).sqrt();
    if (r * kappa.conj()).re < 0.0 {
        -r
    } else {
        r
    }
}

fn turning_check(kappa: C, v: f64, x: f64) -> Result<()> {
    let k2 = kappa * kappa;
    if (k2 - v).norm() < TURNING_POINT_TOL * k2.norm() {
        return Err(Error::TurningPoint(x));
    }
    Ok(())
}

/// θ and the edge momenta on [x₋, x₊]. Edge momenta use the one-sided
/// limits of V from inside the interval.
pub fn wkb_theta(p: &Potential, kappa: C, x_minus: f64, x_plus: f64) -> Result<WkbData> {
    if !kappa.is_finite() || kappa.norm() < NEAR_ZERO_KAPPA {
        return Err(Error::NearZeroMomentum(kappa.norm()));
    }
    if !(x_plus > x_minus) {
        return Err(Error::InvalidParameter("WKB interval must have x+ > x-".into()));
    }
    if !p.spikes().is_empty() {
        return Err(Error::InvalidParameter("WKB needs a potential without delta spikes".into()));
    }
    let k2 = kappa * kappa;
    let mut bp: Vec<f64> = p
        .breakpoints()
        .into_iter()
        .filter(|&x| x > x_minus && x < x_plus)
        .collect();
    bp.insert(0, x_minus);
    bp.push(x_plus);
    bp.sort_by(f64::total_cmp);
    bp.dedup();

    // a real κ² crossing V somewhere on the path is a turning point even
    // if no sample lands on it
    if k2.im.abs() <= TURNING_POINT_TOL * k2.norm() {
        let n = 4000;
        let mut prev: Option<(f64, f64)> = None;
        for w in bp.windows(2) {
            for j in 0..=n {
                let x = w[0] + (w[1] - w[0]) * j as f64 / n as f64;
                // one-sided values at the segment ends
                let x = match j {
                    0 => w[0].next_up(),
                    _ if j == n => w[1].next_down(),
                    _ => x,
                };
                let d = k2.re - p.evaluate_or_zero(x);
                turning_check(kappa, p.evaluate_or_zero(x), x)?;
                if let Some((_, dp)) = prev {
                    if d * dp < 0.0 && (d - dp).abs() < 0.5 * k2.norm() {
                        // a smooth sign change, not a jump at a discontinuity
                        return Err(Error::TurningPoint(x));
                    }
                }
                prev = Some((x, d));
            }
            prev = None;
        }
    }

    let mut err = None;
    let (theta, _) = gauss_kronrod(
        |x| {
            let v = p.evaluate_or_zero(x);
            if err.is_none() {
                if let Err(e) = turning_check(kappa, v, x) {
                    err = Some(e);
                }
            }
            local_momentum(kappa, v)
        },
        &bp,
        (1.0 / kappa.norm()).min(0.5),
        1e-15,
        1e-14,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    let v_minus = p.evaluate_or_zero(x_minus.next_up());
    let v_plus = p.evaluate_or_zero(x_plus.next_down());
    Ok(WkbData {
        theta,
        p_minus: local_momentum(kappa, v_minus),
        p_plus: local_momentum(kappa, v_plus),
    })
}

/// The semiclassical interior basis.
pub fn wkb_interior(wkb: &WkbData) -> Result<InteriorBasis> {
    if wkb.p_minus.norm() == 0.0 || wkb.p_plus.norm() == 0.0 {
        return Err(Error::Grazing);
    }
    let sm = wkb.p_minus.sqrt();
    let sp = wkb.p_plus.sqrt();
    let (c, s) = (wkb.theta.cos(), wkb.theta.sin());
    Ok(InteriorBasis {
        z0: sm / sp * c,
        dz0: -sm * sp * s,
        z1: s / (sm * sp),
        dz1: sp / sm * c,
    })
}

/// a and b in the semiclassical approximation:
///
/// ```text
/// a = e^{iκ(x₊−x₋)}/(2iκ√(p₋p₊)) [(κ² + p₋p₊) sin θ + iκ(p₋ + p₊) cos θ]
/// ```
///
/// and b from the same interior basis through the matching formula.
pub fn wkb_jost(wkb: &WkbData, kappa: C, x_minus: f64, x_plus: f64) -> Result<JostCoefficients> {
    let zeta = wkb_interior(wkb)?;
    jost_from_interior(&zeta, kappa, x_minus, x_plus)
}

/// WKB amplitudes on an explicit interval, with the continued conjugates
/// taken from the evaluation at −κ.
pub fn wkb_amplitudes(p: &Potential, kappa: C, x_minus: f64, x_plus: f64) -> Result<JostCoefficients> {
    let w = wkb_theta(p, kappa, x_minus, x_plus)?;
    let j = wkb_jost(&w, kappa, x_minus, x_plus)?;
    if kappa.im == 0.0 {
        return Ok(j);
    }
    let wm = wkb_theta(p, -kappa, x_minus, x_plus)?;
    let jm = wkb_jost(&wm, -kappa, x_minus, x_plus)?;
    j.with_mirror(&jm)
}

/// `e^{−2iθ} − (κ − p₋)(κ − p₊)/((κ + p₋)(κ + p₊))`.
pub fn asymptotic_zero_equation_residual(kappa: C, wkb: &WkbData) -> C {
    let rhs = (kappa - wkb.p_minus) * (kappa - wkb.p_plus) / ((kappa + wkb.p_minus) * (kappa + wkb.p_plus));
    (-2.0 * I * wkb.theta).exp() - rhs
}

/// Large-n zeros of the square-barrier a, from the balance
/// `e^{−4ipx₀} ≈ V₀²/(16p⁴)`:
///
/// ```text
/// Re p = πn/(2x₀),   Im p = −(1/x₀) ln(2 Re p/√V₀),   κ² = p² + V₀
/// ```
///
/// One zero per n with Re κ > 0 is returned; −κ̄ is a zero as well.
pub fn square_barrier_zero_asymptotics(v0: f64, x0: f64, n: impl IntoIterator<Item = u32>) -> Result<Vec<C>> {
    if !(v0 > 0.0) || !(x0 > 0.0) {
        return Err(Error::InvalidParameter("need V0 > 0 and x0 > 0".into()));
    }
    n.into_iter()
        .map(|n| {
            if n < 5 {
                return Err(Error::InvalidParameter(format!(
                    "asymptotic zero formula needs n >= 5, got {n}"
                )));
            }
            let re = PI * n as f64 / (2.0 * x0);
            let im = -(2.0 * re / v0.sqrt()).ln() / x0;
            let p = C::new(re, im);
            let k = (p * p + v0).sqrt();
            Ok(if k.re < 0.0 { -k } else { k })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::square_barrier;
    use crate::solver::{amplitudes, SolverOptions};
    use crate::transfer::to_jost;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn theta_examples() {
        let w = wkb_theta(&Potential::free(), c(3.0, 0.0), -1.0, 1.0).unwrap();
        assert!((w.theta - 6.0).norm() < 1e-13 && w.p_minus == c(3.0, 0.0));
        let sq = Potential::square(1.0, 1.0).unwrap();
        let w = wkb_theta(&sq, c(2.0, 0.0), -1.0, 1.0).unwrap();
        assert!((w.theta - 2.0 * 3f64.sqrt()).norm() < 1e-13);
        let w = wkb_theta(&sq, c(0.5, 0.0), -1.0, 1.0).unwrap();
        assert!(w.theta.re.abs() < 1e-14 && (w.theta.im - 2.0 * 0.75f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn free_is_exact() {
        let k = c(1.7, -0.3);
        let w = wkb_theta(&Potential::free(), k, -2.0, 1.0).unwrap();
        let j = wkb_jost(&w, k, -2.0, 1.0).unwrap();
        assert!((j.a - 1.0).norm() < 1e-13 && j.b.norm() < 1e-13);
        let r = asymptotic_zero_equation_residual(k, &w);
        assert!((r - (-2.0 * I * k * 3.0).exp()).norm() < 1e-12);
    }

    #[test]
    fn exact_for_square_barrier() {
        let sq = Potential::square(1.0, 1.0).unwrap();
        for k in [c(0.3, 0.0), c(0.9, 0.0), c(2.5, 0.0), c(1.2, -0.7), c(0.4, 0.5), c(-1.3, -0.2)] {
            let j = wkb_amplitudes(&sq, k, -1.0, 1.0).unwrap();
            let o = square_barrier(1.0, 1.0, k).unwrap().jost;
            let s = o.a.norm();
            assert!((j.a - o.a).norm() < 1e-12 * s, "{k}: {} vs {}", j.a, o.a);
            assert!((j.b - o.b).norm() < 1e-12 * s, "{k}");
        }
    }

    #[test]
    fn displaced_square_b_phase() {
        let sq = Potential::square(1.0, 1.0).unwrap().displace(0.7);
        let k = c(1.6, 0.0);
        let j = wkb_amplitudes(&sq, k, -0.3, 1.7).unwrap();
        let o = square_barrier(1.0, 1.0, k).unwrap().jost;
        assert!((j.b - o.b * (-2.0 * I * k * 0.7).exp()).norm() < 1e-12);
    }

    #[test]
    fn gaussian_high_energy_accuracy() {
        let g = Potential::gaussian(1.0, 1.0).unwrap();
        let (lo, hi) = g.effective_support(1e-14);
        let err = |k: f64| {
            let kc = c(k, 0.0);
            let w = wkb_amplitudes(&g, kc, lo, hi).unwrap();
            let s = to_jost(&amplitudes(&g, kc, &SolverOptions::default()).unwrap()).unwrap();
            (w.a - s.a).norm() / s.a.norm()
        };
        assert!(err(10.0) < 1e-2);
        assert!(err(4.0) < err(2.0));
        // unitary on the real axis with real θ, p±
        let w = wkb_amplitudes(&g, c(3.0, 0.0), lo, hi).unwrap();
        assert!(w.unitarity_defect() < 1e-12);
    }

    #[test]
    fn turning_points_are_refused() {
        let g = Potential::gaussian(1.0, 1.0).unwrap();
        assert!(matches!(wkb_theta(&g, c(0.5, 0.0), -5.0, 5.0), Err(Error::TurningPoint(_))));
        assert!(wkb_theta(&g, c(0.5, 0.2), -5.0, 5.0).is_ok());
    }

    #[test]
    fn no_upper_half_plane_zeros_of_residual() {
        let sq = Potential::square(1.0, 1.0).unwrap();
        for re in [0.5, 1.5, 3.0, 6.0] {
            for im in [0.1, 0.5, 1.5] {
                let k = c(re, im);
                let w = wkb_theta(&sq, k, -1.0, 1.0).unwrap();
                assert!(asymptotic_zero_equation_residual(k, &w).norm() > 0.1, "{k}");
            }
        }
    }

    #[test]
    fn zero_asymptotics_formula() {
        let z = square_barrier_zero_asymptotics(1.0, 1.0, [12]).unwrap()[0];
        let p = (z * z - 1.0).sqrt();
        assert!((p.re - 6.0 * PI).abs() < 1e-12);
        assert!((p.im + (12.0 * PI).ln()).abs() < 1e-12);
        let zs = square_barrier_zero_asymptotics(1.0, 1.0, 10..=40).unwrap();
        for w in zs.windows(2) {
            let (p0, p1) = ((w[0] * w[0] - 1.0).sqrt(), (w[1] * w[1] - 1.0).sqrt());
            assert!(p1.im < p0.im);
        }
        assert!(square_barrier_zero_asymptotics(1.0, 1.0, [4]).is_err());
    }

    #[test]
    fn zero_asymptotics_amplitude_scaling() {
        // at V₀ ≠ 1 the predicted zero is a near-root of the exact equation
        let v0 = 9.0;
        let z = square_barrier_zero_asymptotics(v0, 1.0, [30]).unwrap()[0];
        let mut k = z;
        for _ in 0..60 {
            let f = square_barrier(v0, 1.0, k).unwrap().jost.a;
            let h = 1e-7;
            let df = (square_barrier(v0, 1.0, k + h).unwrap().jost.a - f) / h;
            k -= f / df;
        }
        let (pz, pk) = ((z * z - v0).sqrt(), (k * k - v0).sqrt());
        assert!((pz - pk).norm() < 0.02 * pk.norm(), "{pz} vs {pk}");
        assert!((pz.im - pk.im).abs() < 0.05);
    }
}
