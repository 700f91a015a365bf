//! Dormand–Prince 5(4) with complex state vectors.
//!
//! The integrator is deliberately small: fixed-size state `[Complex64; N]`,
//! forward or backward integration, step-size control on a mixed
//! absolute/relative RMS norm. Dense output is not needed by any caller.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

impl Dopri5 {
    pub fn new(rtol: f64, atol: f64, h_max: f64) -> Self {
        Self {
            rtol,
            atol,
            h_max,
            max_steps: 2_000_000,
        }
    }

    /// Integrate `y' = f(x, y)` from `x0` to `x1` (either direction).
    pub fn integrate<const N: usize, F>(
        &self,
        mut f: F,
        x0: f64,
        x1: f64,
        y0: [Complex64; N],
        stats: &mut Stats,
    ) -> Result<[Complex64; N]>
    where
        F: FnMut(f64, &[Complex64; N]) -> [Complex64; N],
    {
        let span = x1 - x0;
        if span == 0.0 {
            return Ok(y0);
        }
        let dir = span.signum();
        let h_max = self.h_max.min(span.abs());
        let h_floor = 1e-14 * (x0.abs().max(x1.abs()).max(1.0));

        let mut x = x0;
        let mut y = y0;
        let mut k1 = f(x, &y);
        stats.evaluations += 1;
        let mut h = initial_step(&k1, &y, self.rtol, self.atol, h_max);
        let mut steps = 0usize;

        while (x1 - x) * dir > 0.0 {
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::Integration {
                    x,
                    reason: "maximum step count exceeded".into(),
                });
            }
            let mut last = false;
            if h >= (x1 - x).abs() {
                h = (x1 - x).abs();
                last = true;
            }
            let hs = h * dir;

            let k2 = f(x + C2 * hs, &comb(&y, hs, &[(A21, &k1)]));
            let k3 = f(x + C3 * hs, &comb(&y, hs, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(
                x + C4 * hs,
                &comb(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = f(
                x + C5 * hs,
                &comb(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                x + hs,
                &comb(
                    &y,
                    hs,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = comb(
                &y,
                hs,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = f(x + hs, &y_new);
            stats.evaluations += 6;

            let mut err = 0.0;
            for i in 0..N {
                let e = hs
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].norm().max(y_new[i].norm());
                let r = e.norm() / sc;
                err += r * r;
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() {
                return Err(Error::Integration {
                    x,
                    reason: "non-finite state".into(),
                });
            }

            if err <= 1.0 {
                stats.accepted += 1;
                x = if last { x1 } else { x + hs };
                y = y_new;
                k1 = k7;
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = (h * fac).min(h_max);
            } else {
                stats.rejected += 1;
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if h < h_floor {
                    return Err(Error::Integration {
                        x,
                        reason: "step size underflow".into(),
                    });
                }
            }
        }
        Ok(y)
    }
}

fn comb<const N: usize>(
    y: &[Complex64; N],
    h: f64,
    terms: &[(f64, &[Complex64; N])],
) -> [Complex64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn initial_step<const N: usize>(
    k: &[Complex64; N],
    y: &[Complex64; N],
    rtol: f64,
    atol: f64,
    h_max: f64,
) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        let sc = atol + rtol * y[i].norm();
        d0 += (y[i].norm() / sc).powi(2);
        d1 += (k[i].norm() / sc).powi(2);
    }
    let d0 = (d0 / N as f64).sqrt();
    let d1 = (d1 / N as f64).sqrt();
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-3
    } else {
        0.01 * d0 / d1
    };
    h.min(h_max).max(1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_complex_phase() {
        // y' = i y, y(0) = 1  =>  y(x) = e^{ix}
        let ode = Dopri5::new(1e-12, 1e-14, 0.1);
        let mut st = Stats::default();
        let y = ode
            .integrate(
                |_, y: &[Complex64; 1]| [Complex64::i() * y[0]],
                0.0,
                10.0,
                [Complex64::new(1.0, 0.0)],
                &mut st,
            )
            .unwrap();
        assert!((y[0] - Complex64::new(10f64.cos(), 10f64.sin())).norm() < 1e-10);
        assert!(st.accepted > 0);
    }

    #[test]
    fn backward_integration() {
        // y' = -2y from x=1 back to x=0: y(0) = y(1) e^{2}
        let ode = Dopri5::new(1e-12, 1e-14, 1.0);
        let mut st = Stats::default();
        let y = ode
            .integrate(
                |_, y: &[Complex64; 1]| [-2.0 * y[0]],
                1.0,
                0.0,
                [Complex64::new(1.0, 0.0)],
                &mut st,
            )
            .unwrap();
        assert!((y[0].re - 2f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn zero_span_is_identity() {
        let ode = Dopri5::new(1e-8, 1e-10, 1.0);
        let mut st = Stats::default();
        let y0 = [Complex64::new(0.3, -0.1)];
        let y = ode
            .integrate(|_, y: &[Complex64; 1]| [y[0]], 2.0, 2.0, y0, &mut st)
            .unwrap();
        assert_eq!(y, y0);
    }
}
