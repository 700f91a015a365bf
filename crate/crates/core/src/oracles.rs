//! Closed-form amplitudes for exactly solvable barriers.
//!
//! These are the references the numerical routes are tested against, so
//! they are written in their textbook special-function form rather than
//! through the solver's tail-matching machinery. Every result carries the
//! continued conjugates ā, b̄ (computed as conj f(κ̄)) and the nearest
//! singularities of a and b.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::Family;
use crate::solver::InteriorBasis;
use crate::specfun::{bessel_j, bessel_j_prime, gamma, log_gamma, regular_bessel};
use crate::transfer::{JostCoefficients, NEAR_ZERO_KAPPA};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

/// How many members of each pole/zero lattice are listed.
const LATTICE_TERMS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingularityKind {
    ZeroOfA,
    PoleOfA,
    PoleOfB,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub location: C,
    pub kind: SingularityKind,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub kappa: C,
    pub jost: JostCoefficients,
    /// Nearest members of the pole and zero lattices, closest first.
    pub singularities: Vec<Singularity>,
    pub notes: String,
}

fn check_kappa(kappa: C) -> Result<()> {
    if !kappa.is_finite() || kappa.norm() < NEAR_ZERO_KAPPA {
        return Err(Error::NearZeroMomentum(kappa.norm()));
    }
    Ok(())
}

/// Evaluate `f` at κ and at conj κ, attaching conj f(κ̄) as (ā, b̄).
fn with_conjugates<F>(kappa: C, f: F) -> Result<JostCoefficients>
where
    F: Fn(C) -> Result<(C, C)>,
{
    let (a, b) = f(kappa)?;
    let (ab, bb) = if kappa.im == 0.0 {
        (a.conj(), b.conj())
    } else {
        let (a2, b2) = f(kappa.conj())?;
        (a2.conj(), b2.conj())
    };
    Ok(JostCoefficients::with_conjugates(kappa, a, b, ab, bb))
}

fn finish(kappa: C, jost: JostCoefficients, mut sing: Vec<Singularity>, notes: &str) -> OracleResult {
    sing.sort_by(|x, y| (x.location - kappa).norm().total_cmp(&(y.location - kappa).norm()));
    OracleResult {
        kappa,
        jost,
        singularities: sing,
        notes: notes.to_string(),
    }
}

/// cos(Lp) and sin(Lp)/p as functions of p² (no branch cut).
fn cos_sinc_p2(p2: C, l: f64) -> (C, C) {
    let u = p2 * l * l;
    if u.norm() < 1e-2 {
        // Taylor series in u = (Lp)², ample terms for |u| < 1e-2
        let mut cs = C::new(0.0, 0.0);
        let mut sn = C::new(0.0, 0.0);
        let mut tc = C::new(1.0, 0.0);
        let mut ts = C::new(1.0, 0.0);
        for k in 0..10 {
            cs += tc;
            sn += ts;
            let kf = k as f64;
            tc *= -u / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
            ts *= -u / ((2.0 * kf + 2.0) * (2.0 * kf + 3.0));
        }
        (cs, sn * l)
    } else {
        let p = p2.sqrt();
        ((p * l).cos(), (p * l).sin() / p)
    }
}

/// Square barrier V₀ on |x| < x₀.
///
/// `a = e^{2iκx₀}[cos 2x₀p + (κ² + p²) sin(2x₀p)/(2iκp)]` and
/// `β = V₀ sin(2x₀p)/p`, p² = κ² − V₀; both entire in κ.
pub fn square_barrier(v0: f64, x0: f64, kappa: C) -> Result<OracleResult> {
    check_kappa(kappa)?;
    let l = 2.0 * x0;
    let f = |k: C| -> Result<(C, C)> {
        let p2 = k * k - v0;
        let (cs, sn) = cos_sinc_p2(p2, l);
        let b = v0 * sn / (2.0 * I * k);
        let a = if (p2 * l * l).norm() < 1.0 {
            (I * k * l).exp() * (cs + (k * k + p2) * sn / (2.0 * I * k))
        } else {
            // two-exponential form with p on the branch near κ: both terms
            // stay O(1) near zeros deep in the lower half-plane, where the
            // cos/sinc form cancels
            let mut p = p2.sqrt();
            if (p * k.conj()).re < 0.0 {
                p = -p;
            }
            ((k + p) * (k + p) * (I * (k - p) * l).exp() - (k - p) * (k - p) * (I * (k + p) * l).exp())
                / (4.0 * k * p)
        };
        Ok((a, b))
    };
    let jost = with_conjugates(kappa, f)?;
    Ok(finish(kappa, jost, Vec::new(), "entire in kappa; no singularities"))
}

/// `e^{−4ipx₀} − ((κ − p)/(κ + p))²`; zeros of the square-barrier a are
/// its roots (either branch of p gives the same root set).
pub fn square_barrier_zero_residual(v0: f64, x0: f64, kappa: C) -> C {
    let p = (kappa * kappa - v0).sqrt();
    let r = (kappa - p) / (kappa + p);
    (-4.0 * I * p * x0).exp() - r * r
}

/// Exponential barrier `V₀ e^{−|x|/x₀}` in Bessel form:
///
/// ```text
/// a = −Γ²(1+ν)/(x₀κ) · (z/2)^{−2ν} (z/2i) · J′ν(z) Jν(z)
/// b = π x₀ √V₀ / sinh(2πκx₀) · [J′ν(z) J−ν(z) + Jν(z) J′−ν(z)]
/// ```
///
/// with ν = −2iκx₀ and z = 2ix₀√V₀. a has double poles at
/// κ = −in/(2x₀); b has simple poles at κ = ±in/(2x₀).
pub fn exponential_barrier(v0: f64, x0: f64, kappa: C) -> Result<OracleResult> {
    check_kappa(kappa)?;
    if !(v0 >= 0.0) || !(x0 > 0.0) {
        return Err(Error::InvalidParameter("exponential barrier needs V0 >= 0, x0 > 0".into()));
    }
    let s = 0.5 / x0;
    let f = |k: C| -> Result<(C, C)> {
        if v0 == 0.0 {
            return Ok((C::new(1.0, 0.0), C::new(0.0, 0.0)));
        }
        let nu = -2.0 * I * k * x0;
        let z = C::new(0.0, 2.0 * x0 * v0.sqrt());
        let pole = |e: Error| match e {
            Error::Pole(_) => Error::Pole(k),
            other => other,
        };
        let g = gamma(1.0 + nu).map_err(pole)?;
        let j = bessel_j(nu, z)?;
        let jp = bessel_j_prime(nu, z)?;
        let jm = bessel_j(-nu, z)?;
        let jmp = bessel_j_prime(-nu, z)?;
        let a = -g * g / (x0 * k) * (z / 2.0).powc(-2.0 * nu) * (z / (2.0 * I)) * jp * j;
        let sh = (2.0 * PI * k * x0).sinh();
        if sh.norm() == 0.0 {
            return Err(Error::Pole(k));
        }
        let b = PI * x0 * v0.sqrt() / sh * (jp * jm + j * jmp);
        Ok((a, b))
    };
    let jost = with_conjugates(kappa, f)?;
    let mut sing = Vec::new();
    if v0 > 0.0 {
        for n in 1..=LATTICE_TERMS {
            let y = n as f64 * s;
            sing.push(Singularity { location: C::new(0.0, -y), kind: SingularityKind::PoleOfA, order: 2 });
            sing.push(Singularity { location: C::new(0.0, y), kind: SingularityKind::PoleOfB, order: 1 });
            sing.push(Singularity { location: C::new(0.0, -y), kind: SingularityKind::PoleOfB, order: 1 });
        }
    }
    Ok(finish(kappa, jost, sing, "poles on the imaginary axis at multiples of 1/(2 x0)"))
}

/// Readings of the exponential-barrier formula as typeset, kept for
/// diagnostics: `unit_scale` drops x₀ from ν and from sinh(2πκ).
///
/// ```text
/// a = −Γ²(1+ν)/(x₀κ) (z/2i)^{1−4ν} J′ν Jν
/// b = 2π√V₀ / sinh(2πκ·x₀?) [J′ν J−ν + Jν J′−ν]
/// ```
pub fn exponential_barrier_as_typeset(v0: f64, x0: f64, kappa: C, unit_scale: bool) -> Result<(C, C)> {
    check_kappa(kappa)?;
    let scale = if unit_scale { 1.0 } else { x0 };
    let nu = -2.0 * I * kappa * scale;
    let z = C::new(0.0, 2.0 * x0 * v0.sqrt());
    let g = gamma(1.0 + nu)?;
    let j = bessel_j(nu, z)?;
    let jp = bessel_j_prime(nu, z)?;
    let jm = bessel_j(-nu, z)?;
    let jmp = bessel_j_prime(-nu, z)?;
    let a = -g * g / (x0 * kappa) * (z / (2.0 * I)).powc(1.0 - 4.0 * nu) * jp * j;
    let b = 2.0 * PI * v0.sqrt() / (2.0 * PI * kappa * scale).sinh() * (jp * jm + j * jmp);
    Ok((a, b))
}

/// Pöschl–Teller barrier `V₀ / cosh²(x/x₀)`:
///
/// ```text
/// a = i Γ²(1 − iκx₀) / (κx₀ Γ(½ + iσ − iκx₀) Γ(½ − iσ − iκx₀))
/// b = −i cosh(πσ) / sinh(πκx₀),   σ = √(V₀x₀² − ¼)
/// ```
///
/// Γ ratios go through log-Γ; a vanishes where a denominator Γ has a pole.
pub fn poschl_teller(v0: f64, x0: f64, kappa: C) -> Result<OracleResult> {
    check_kappa(kappa)?;
    if !(v0 >= 0.0) || !(x0 > 0.0) {
        return Err(Error::InvalidParameter("Poschl-Teller barrier needs V0 >= 0, x0 > 0".into()));
    }
    let sigma = C::new(v0 * x0 * x0 - 0.25, 0.0).sqrt();
    let f = |k: C| -> Result<(C, C)> {
        let kx = k * x0;
        let num = log_gamma(1.0 - I * kx).map_err(|_| Error::Pole(k))?.value;
        let d1 = log_gamma(0.5 + I * sigma - I * kx);
        let d2 = log_gamma(0.5 - I * sigma - I * kx);
        let a = match (d1, d2) {
            (Ok(d1), Ok(d2)) => I / kx * (2.0 * num - d1.value - d2.value).exp(),
            (Err(Error::Pole(_)), _) | (_, Err(Error::Pole(_))) => C::new(0.0, 0.0),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let sh = (PI * kx).sinh();
        if sh.norm() < 1e-300 {
            return Err(Error::Pole(k));
        }
        let b = -I * (PI * sigma).cosh() / sh;
        Ok((a, b))
    };
    let jost = with_conjugates(kappa, f)?;
    let mut sing = Vec::new();
    for n in 0..LATTICE_TERMS {
        let nf = n as f64;
        for sgn in [1.0, -1.0] {
            sing.push(Singularity {
                location: (C::new(0.0, -(nf + 0.5)) + sgn * sigma) / x0,
                kind: SingularityKind::ZeroOfA,
                order: 1,
            });
        }
        sing.push(Singularity { location: C::new(0.0, -(nf + 1.0) / x0), kind: SingularityKind::PoleOfA, order: 2 });
        for sgn in [1.0, -1.0] {
            sing.push(Singularity {
                location: C::new(0.0, sgn * (nf + 1.0) / x0),
                kind: SingularityKind::PoleOfB,
                order: 1,
            });
        }
    }
    let notes = if sigma.im != 0.0 {
        "sigma is imaginary (2 x0 < V0^-1/2): zeros of a lie on the imaginary axis"
    } else {
        "zeros of a at kappa x0 = -i(n+1/2) +/- sigma"
    };
    Ok(finish(kappa, jost, sing, notes))
}

/// Delta spike v₀δ(x): α = β = v₀.
pub fn delta_barrier(v0: f64, kappa: C) -> Result<OracleResult> {
    check_kappa(kappa)?;
    let f = |k: C| -> Result<(C, C)> {
        let g = v0 / (2.0 * I * k);
        Ok((1.0 - g, g))
    };
    let jost = with_conjugates(kappa, f)?;
    let sing = vec![Singularity {
        location: C::new(0.0, -0.5 * v0),
        kind: SingularityKind::ZeroOfA,
        order: 1,
    }];
    Ok(finish(kappa, jost, sing, "single zero of a at -i v0/2"))
}

/// Exact matching to exponential tails `V = v₋² e^{2s₋(x−x₋)}` (x < x₋) and
/// `V = v₊² e^{−2s₊(x−x₊)}` (x > x₊) around an interior described by ζ.
///
/// With Ĵ the regularized Bessel function, ν± = −iκ/s±, σ± = iv±/s±,
/// L = Ĵ_{ν₋}(σ₋), M = −iκL + iv₋Ĵ′_{ν₋}(σ₋), R = Ĵ_{ν₊}(σ₊),
/// N = −iκR + iv₊Ĵ′_{ν₊}(σ₊):
///
/// ```text
/// a = −e^{iκ(x₊−x₋)}/(2iκ) [ζ₀′RL + ζ₀NL + ζ₁′RM + ζ₁NM]
/// b = e^{−iκ(x₊+x₋)}/(2iκ) [R̃(ζ₀′L + ζ₁′M) + Ñ(ζ₀L + ζ₁M)]
/// ```
///
/// where R̃ = Ĵ_{−ν₊}(σ₊) and Ñ = iκR̃ + iv₊Ĵ′_{−ν₊}(σ₊).
#[allow(clippy::too_many_arguments)]
pub fn exp_tail_matching(
    zeta: &InteriorBasis,
    v_minus: f64,
    v_plus: f64,
    s_minus: f64,
    s_plus: f64,
    x_minus: f64,
    x_plus: f64,
    kappa: C,
) -> Result<OracleResult> {
    check_kappa(kappa)?;
    if !(s_minus > 0.0) || !(s_plus > 0.0) {
        return Err(Error::InvalidParameter("tail slopes must be positive".into()));
    }
    let f = |k: C| -> Result<(C, C)> {
        let pole = |e: Error| match e {
            Error::Pole(_) => Error::Pole(k),
            other => other,
        };
        let nu_m = -I * k / s_minus;
        let nu_p = -I * k / s_plus;
        let sig_m = C::new(0.0, v_minus / s_minus);
        let sig_p = C::new(0.0, v_plus / s_plus);
        let left = regular_bessel(nu_m, sig_m).map_err(pole)?;
        let right = regular_bessel(nu_p, sig_p).map_err(pole)?;
        let right_m = regular_bessel(-nu_p, sig_p).map_err(pole)?;
        let l = left.value;
        let m = -I * k * l + I * v_minus * left.derivative;
        let r = right.value;
        let n = -I * k * r + I * v_plus * right.derivative;
        let rt = right_m.value;
        let nt = I * k * rt + I * v_plus * right_m.derivative;
        let k2 = 2.0 * I * k;
        let a = -(I * k * (x_plus - x_minus)).exp() / k2
            * (zeta.dz0 * r * l + zeta.z0 * n * l + zeta.dz1 * r * m + zeta.z1 * n * m);
        let b = (-I * k * (x_plus + x_minus)).exp() / k2
            * (rt * (zeta.dz0 * l + zeta.dz1 * m) + nt * (zeta.z0 * l + zeta.z1 * m));
        Ok((a, b))
    };
    let jost = with_conjugates(kappa, f)?;
    let mut sing = Vec::new();
    for n in 1..=LATTICE_TERMS {
        let nf = n as f64;
        if v_minus > 0.0 {
            sing.push(Singularity { location: C::new(0.0, -nf * s_minus), kind: SingularityKind::PoleOfA, order: 1 });
            sing.push(Singularity { location: C::new(0.0, -nf * s_minus), kind: SingularityKind::PoleOfB, order: 1 });
        }
        if v_plus > 0.0 {
            sing.push(Singularity { location: C::new(0.0, -nf * s_plus), kind: SingularityKind::PoleOfA, order: 1 });
            sing.push(Singularity { location: C::new(0.0, nf * s_plus), kind: SingularityKind::PoleOfB, order: 1 });
        }
    }
    merge_coincident(&mut sing);
    Ok(finish(kappa, jost, sing, "poles of a at -i n s-/+; poles of b at +i n s+ and -i n s-"))
}

/// Merge coincident entries of the same kind, adding orders.
fn merge_coincident(sing: &mut Vec<Singularity>) {
    let mut out: Vec<Singularity> = Vec::new();
    for s in sing.drain(..) {
        match out
            .iter_mut()
            .find(|o| o.kind == s.kind && (o.location - s.location).norm() < 1e-12)
        {
            Some(o) => o.order += s.order,
            None => out.push(s),
        }
    }
    *sing = out;
}

/// Symmetric double barrier built from single barriers with
/// a₁ = a₂ = cosh ρ e^{−iδ}, b₁ = i sinh ρ e^{iγ}, b₂ = −b̄₁, centers d apart:
///
/// ```text
/// a = cosh²ρ e^{−2iδ} + sinh²ρ e^{2i(κd + γ)}
/// b = i sinh 2ρ cos(κd + δ + γ)
/// ```
pub fn double_barrier_symmetric(rho: f64, delta: f64, gamma: f64, d: f64, kappa: C) -> Result<OracleResult> {
    let f = |k: C| -> Result<(C, C)> {
        let (ch, sh) = (rho.cosh(), rho.sinh());
        let a = ch * ch * C::from_polar(1.0, -2.0 * delta) + sh * sh * (2.0 * I * (k * d + gamma)).exp();
        let b = I * (2.0 * rho).sinh() * (k * d + delta + gamma).cos();
        Ok((a, b))
    };
    let jost = with_conjugates(kappa, f)?;
    Ok(finish(kappa, jost, Vec::new(), "reflectionless where kappa d + delta + gamma = pi/2 mod pi"))
}

/// The single-barrier coefficients underlying [`double_barrier_symmetric`]
/// (momentum-independent model parameters).
pub fn double_barrier_parts(rho: f64, delta: f64, gamma: f64, kappa: C) -> (JostCoefficients, JostCoefficients) {
    let a1 = C::from_polar(rho.cosh(), -delta);
    let b1 = I * C::from_polar(rho.sinh(), gamma);
    let b2 = -b1.conj();
    (
        JostCoefficients::with_conjugates(kappa, a1, b1, a1.conj(), b1.conj()),
        JostCoefficients::with_conjugates(kappa, a1, b2, a1.conj(), b2.conj()),
    )
}

/// Poles of a (location, order) with Im κ ≥ `im_min`, for scan hints.
pub fn a_pole_lattice(family: Family, im_min: f64) -> Vec<(C, u32)> {
    let (step, order) = match family {
        Family::Exponential { height, length } if height > 0.0 => (0.5 / length, 2),
        Family::PoschlTeller { height, length } if height > 0.0 => (1.0 / length, 2),
        _ => return Vec::new(),
    };
    (1..)
        .map(|n| C::new(0.0, -(n as f64) * step))
        .take_while(|z| z.im >= im_min)
        .map(|z| (z, order))
        .collect()
}

/// Closed form for a potential of a known family, if any.
pub fn oracle_for(family: Family, kappa: C) -> Result<OracleResult> {
    match family {
        Family::Square { height, half_width } => square_barrier(height, half_width, kappa),
        Family::Exponential { height, length } => exponential_barrier(height, length, kappa),
        Family::PoschlTeller { height, length } => poschl_teller(height, length, kappa),
        Family::Delta { strength } => delta_barrier(strength, kappa),
    }
}
