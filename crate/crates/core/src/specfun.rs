//! Complex special functions used by the closed-form amplitudes.
//!
//! Only two families are needed: the principal log-gamma and the
//! regularized Bessel function
//!
//! ```text
//! Ĵν(z) = Γ(ν+1) (z/2)^(−ν) Jν(z) = Σ_k (−z²/4)^k / (k! (ν+1)_k)
//! ```
//!
//! which is entire in both `ν` and `z` apart from the zeros of the
//! Pochhammer symbol `(ν+1)_k`, i.e. negative integer `ν`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Stirling coefficients B₂ₖ / (2k (2k−1)).
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// Value of Ĵν(z) together with its z-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularBessel {
    pub value: Complex64,
    pub derivative: Complex64,
    pub error_estimate: f64,
}

/// Principal branch of ln Γ(z).
///
/// Arguments with small modulus or negative real part are lifted by the
/// recurrence ln Γ(z) = ln Γ(z+N) − Σ ln(z+k) before the Stirling series is
/// applied; with principal logarithms this reproduces the branch that is
/// continuous off the negative real axis.
pub fn log_gamma(z: Complex64) -> Result<SpecFunResult> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidParameter(format!("log_gamma({z})")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::Pole(z));
    }

    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    let mut shift_mag = 0.0;
    while w.re < 0.5 || (w.re < 20.0 && w.norm() < 30.0) {
        let l = w.ln();
        shift += l;
        shift_mag += l.norm();
        w += 1.0;
    }

    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    let value = (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift;
    let error_estimate = f64::EPSILON * (value.norm() + shift_mag + (w * w.ln()).norm());
    Ok(SpecFunResult {
        value,
        error_estimate,
    })
}

/// Γ(z) by exponentiating [`log_gamma`].
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.value.exp())
}

/// Partial sums of the confluent limit series
/// `F(b; q) = Σ q^k / (k! (b)_k)` together with `dF/dq` and `F − 1`.
///
/// `F − 1` is accumulated without the leading unit term so that callers
/// working with tiny `q` keep full relative precision on the correction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Hyp0F1 {
    pub value: Complex64,
    pub minus_one: Complex64,
    pub derivative: Complex64,
    pub error_estimate: f64,
}

pub(crate) fn hyp0f1(b: Complex64, q: Complex64) -> Result<Hyp0F1> {
    if q.norm() > 625.0 {
        return Err(Error::SeriesRegime(2.0 * q.norm().sqrt()));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut minus_one = Complex64::new(0.0, 0.0);
    let mut derivative = Complex64::new(0.0, 0.0);
    let mut abs_sum = 1.0;
    let mut k = 0usize;
    loop {
        let denom = b + k as f64;
        if denom.norm() == 0.0 {
            return Err(Error::Pole(b));
        }
        // d/dq of the (k+1)-th term equals the k-th term divided by (b+k).
        let dterm = term / denom;
        k += 1;
        term = dterm * q / k as f64;
        minus_one += term;
        derivative += dterm;
        abs_sum += term.norm();
        let scale = (1.0 + minus_one).norm().max(f64::MIN_POSITIVE);
        if term.norm() < 1e-17 * scale && dterm.norm() < 1e-17 * derivative.norm().max(1e-300) {
            break;
        }
        if k > 2000 {
            break;
        }
    }
    Ok(Hyp0F1 {
        value: minus_one + 1.0,
        minus_one,
        derivative,
        error_estimate: 4.0 * f64::EPSILON * abs_sum + term.norm(),
    })
}

/// Ĵν(z) and dĴν/dz from the power series.
///
/// Fails for `|z| > 50` (series regime) and at negative integer `ν`, where
/// the Pochhammer denominator vanishes.
pub fn regular_bessel(nu: Complex64, z: Complex64) -> Result<RegularBessel> {
    if z.norm() > 50.0 {
        return Err(Error::SeriesRegime(z.norm()));
    }
    let q = -z * z / 4.0;
    let f = hyp0f1(nu + 1.0, q)?;
    Ok(RegularBessel {
        value: f.value,
        derivative: f.derivative * (-z / 2.0),
        error_estimate: f.error_estimate,
    })
}

/// Ordinary Jν(z) = (z/2)^ν Ĵν(z) / Γ(ν+1) on the principal branch of the
/// power. Returns 0 where 1/Γ(ν+1) vanishes.
pub fn bessel_j(nu: Complex64, z: Complex64) -> Result<Complex64> {
    let hat = regular_bessel(nu, z)?;
    Ok((z / 2.0).powc(nu) * hat.value * reciprocal_gamma(nu + 1.0)?)
}

/// J′ν(z) by the product rule on (z/2)^ν Ĵν(z) / Γ(ν+1).
pub fn bessel_j_prime(nu: Complex64, z: Complex64) -> Result<Complex64> {
    let hat = regular_bessel(nu, z)?;
    let pow = (z / 2.0).powc(nu);
    Ok(pow * (nu / z * hat.value + hat.derivative) * reciprocal_gamma(nu + 1.0)?)
}

/// 1/Γ(z), entire; zero at the non-positive integers.
pub fn reciprocal_gamma(z: Complex64) -> Result<Complex64> {
    match log_gamma(z) {
        Ok(r) => Ok((-r.value).exp()),
        Err(Error::Pole(_)) => Ok(Complex64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}

/// sin(πz) / π, used by Bessel cross-checks.
pub fn sin_pi_over_pi(z: Complex64) -> Complex64 {
    (z * PI).sin() / PI
}
