//! On-shell amplitude algebra: α, β → a, b → S, T and monodromy matrices,
//! displacement and composition of separated barriers.
//!
//! Barred quantities (ā, b̄) at complex κ are the analytic continuation of
//! the real-axis conjugate, ā(κ) = conj(a(conj κ)) = a(−κ). They cannot be
//! recovered from a(κ), b(κ) alone, so [`JostCoefficients`] optionally
//! carries them; on the real axis literal conjugation is used.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type C = Complex64;

/// Below this |κ| the divisions by κ in a, b are refused.
pub const NEAR_ZERO_KAPPA: f64 = 1e-8;

const I: C = C::new(0.0, 1.0);

/// α(κ), β(κ): regular at κ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudePair {
    pub kappa: C,
    pub alpha: C,
    pub beta: C,
}

impl AmplitudePair {
    pub fn new(kappa: C, alpha: C, beta: C) -> Self {
        Self { kappa, alpha, beta }
    }

    pub fn free(kappa: C) -> Self {
        Self::new(kappa, C::new(0.0, 0.0), C::new(0.0, 0.0))
    }

    /// |α − ᾱ − (i/2κ)(αᾱ − ββ̄)|, meaningful for real κ.
    pub fn unitarity_defect(&self) -> f64 {
        let (al, be, k) = (self.alpha, self.beta, self.kappa);
        (al - al.conj() - I / (2.0 * k) * (al * al.conj() - be * be.conj())).norm()
    }
}

/// a(κ), b(κ), optionally with the continued conjugates ā(κ), b̄(κ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JostCoefficients {
    pub kappa: C,
    pub a: C,
    pub b: C,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugates: Option<(C, C)>,
}

impl JostCoefficients {
    pub fn new(kappa: C, a: C, b: C) -> Self {
        Self {
            kappa,
            a,
            b,
            conjugates: None,
        }
    }

    /// Attach ā(κ) = a(−κ) and b̄(κ) = b(−κ).
    pub fn with_conjugates(kappa: C, a: C, b: C, a_bar: C, b_bar: C) -> Self {
        Self {
            kappa,
            a,
            b,
            conjugates: Some((a_bar, b_bar)),
        }
    }

    /// Combine values at κ with values computed at −κ.
    pub fn with_mirror(self, mirror: &JostCoefficients) -> Result<Self> {
        if !same_kappa(-self.kappa, mirror.kappa) {
            return Err(Error::MismatchedKappa(-self.kappa, mirror.kappa));
        }
        Ok(Self {
            conjugates: Some((mirror.a, mirror.b)),
            ..self
        })
    }

    pub fn free(kappa: C) -> Self {
        Self::with_conjugates(kappa, C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0))
    }

    pub fn is_real_axis(&self) -> bool {
        self.kappa.im == 0.0
    }

    pub fn a_bar(&self) -> Result<C> {
        match self.conjugates {
            Some((a, _)) => Ok(a),
            None if self.is_real_axis() => Ok(self.a.conj()),
            None => Err(Error::MissingConjugate(self.kappa)),
        }
    }

    pub fn b_bar(&self) -> Result<C> {
        match self.conjugates {
            Some((_, b)) => Ok(b),
            None if self.is_real_axis() => Ok(self.b.conj()),
            None => Err(Error::MissingConjugate(self.kappa)),
        }
    }

    /// |a|² − |b|² − 1; zero for real κ.
    pub fn unitarity_defect(&self) -> f64 {
        (self.a.norm_sqr() - self.b.norm_sqr() - 1.0).abs()
    }

    /// α = 2iκ(1 − a), β = 2iκ b.
    pub fn to_pair(&self) -> AmplitudePair {
        let k2 = 2.0 * I * self.kappa;
        AmplitudePair::new(self.kappa, k2 * (1.0 - self.a), k2 * self.b)
    }
}

fn same_kappa(k1: C, k2: C) -> bool {
    (k1 - k2).norm() <= 1e-14 * k1.norm().max(1.0)
}

fn check_kappa(kappa: C) -> Result<()> {
    if kappa.norm() < NEAR_ZERO_KAPPA {
        return Err(Error::NearZeroMomentum(kappa.norm()));
    }
    Ok(())
}

/// a = 1 − α/(2iκ), b = β/(2iκ).
pub fn to_jost(ap: &AmplitudePair) -> Result<JostCoefficients> {
    check_kappa(ap.kappa)?;
    let k2 = 2.0 * I * ap.kappa;
    Ok(JostCoefficients::new(ap.kappa, 1.0 - ap.alpha / k2, ap.beta / k2))
}

/// Monodromy matrix [[ā, −b̄], [−b, a]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyMatrix {
    pub m: [[C; 2]; 2],
}

impl MonodromyMatrix {
    pub fn from_jost(jc: &JostCoefficients) -> Result<Self> {
        Ok(Self {
            m: [[jc.a_bar()?, -jc.b_bar()?], [-jc.b, jc.a]],
        })
    }

    /// max |(M E M†) − E|, with E = diag(1, −1).
    #[allow(clippy::needless_range_loop)]
    pub fn quasi_unitarity_defect(&self) -> f64 {
        let e = [1.0, -1.0];
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut s = C::new(0.0, 0.0);
                for k in 0..2 {
                    s += self.m[i][k] * e[k] * self.m[j][k].conj();
                }
                let target = if i == j { e[i] } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

/// On-shell S-matrix (1/a)[[1, b], [−b̄, 1]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrix {
    pub s: [[C; 2]; 2],
}

impl SMatrix {
    /// Transmission amplitude S₊₊ = 1/a.
    pub fn transmission(&self) -> C {
        self.s[0][0]
    }

    /// Reflection amplitude S₊₋ = b/a.
    pub fn reflection(&self) -> C {
        self.s[0][1]
    }

    pub fn det(&self) -> C {
        self.s[0][0] * self.s[1][1] - self.s[0][1] * self.s[1][0]
    }

    /// max |S S† − I|.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let s: C = (0..2).map(|k| self.s[i][k] * self.s[j][k].conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

fn check_pole(jc: &JostCoefficients) -> Result<()> {
    if !(jc.a.norm() > 1e-300) || !jc.a.is_finite() {
        return Err(Error::Pole(jc.kappa));
    }
    Ok(())
}

pub fn s_matrix(jc: &JostCoefficients) -> Result<SMatrix> {
    check_pole(jc)?;
    let inv = 1.0 / jc.a;
    Ok(SMatrix {
        s: [[inv, jc.b * inv], [-jc.b_bar()? * inv, inv]],
    })
}

/// |det S − ā/a|.
pub fn det_defect(jc: &JostCoefficients) -> Result<f64> {
    let s = s_matrix(jc)?;
    Ok((s.det() - jc.a_bar()? / jc.a).norm())
}

/// On-shell T = (1/2πa)[[α, β], [β̄, α]] for real κ.
pub fn t_matrix(ap: &AmplitudePair) -> Result<[[C; 2]; 2]> {
    if ap.kappa.im != 0.0 {
        return Err(Error::InvalidParameter(
            "the on-shell T-matrix is defined for real kappa".into(),
        ));
    }
    let jc = to_jost(ap)?;
    check_pole(&jc)?;
    let f = 1.0 / (2.0 * PI * jc.a);
    Ok([[f * ap.alpha, f * ap.beta], [f * ap.beta.conj(), f * ap.alpha]])
}

/// (T, R) = (|1/a|², |b/a|²) for real κ.
pub fn transmission_reflection(jc: &JostCoefficients) -> Result<(f64, f64)> {
    if jc.kappa.im != 0.0 {
        return Err(Error::InvalidParameter(
            "transmission and reflection probabilities need real kappa".into(),
        ));
    }
    check_pole(jc)?;
    let inv = 1.0 / jc.a.norm_sqr();
    Ok((inv, jc.b.norm_sqr() * inv))
}

/// V(x) → V(x − d): a unchanged, b → b e^{−2iκd}.
pub fn displace_jost(jc: &JostCoefficients, d: f64) -> JostCoefficients {
    let phase = (-2.0 * I * jc.kappa * d).exp();
    JostCoefficients {
        kappa: jc.kappa,
        a: jc.a,
        b: jc.b * phase,
        // b̄(κ) = b(−κ) picks up e^{+2iκd}
        conjugates: jc.conjugates.map(|(ab, bb)| (ab, bb / phase)),
    }
}

/// Superposition of two separated barriers displaced by `d1 < d2`.
pub fn compose(
    jc1: &JostCoefficients,
    d1: f64,
    jc2: &JostCoefficients,
    d2: f64,
) -> Result<JostCoefficients> {
    if !same_kappa(jc1.kappa, jc2.kappa) {
        return Err(Error::MismatchedKappa(jc1.kappa, jc2.kappa));
    }
    let k = jc1.kappa;
    let (a1, b1, a2, b2) = (jc1.a, jc1.b, jc2.a, jc2.b);
    let a1b = jc1.a_bar()?;
    let b1b = jc1.b_bar()?;
    let a2b = jc2.a_bar()?;
    let b2b = jc2.b_bar()?;
    let e12 = (2.0 * I * k * (d2 - d1)).exp();
    let e1 = (-2.0 * I * k * d1).exp();
    let e2 = (-2.0 * I * k * d2).exp();
    let a = a1 * a2 + b1 * b2b * e12;
    let b = a1 * b2 * e2 + a2b * b1 * e1;
    let ab = a1b * a2b + b1b * b2 / e12;
    let bb = a1b * b2b / e2 + a2 * b1b / e1;
    Ok(if jc1.conjugates.is_some() || jc2.conjugates.is_some() {
        JostCoefficients::with_conjugates(k, a, b, ab, bb)
    } else {
        JostCoefficients::new(k, a, b)
    })
}

/// Symmetry defects for real κ, given the coefficients at κ and at −κ:
/// `conj_a` = |conj a(κ) − a(−κ)|, `conj_b` = |conj b(κ) − b(−κ)|, and for
/// even potentials `re_b` = |Re b(κ)|.
pub fn symmetry_defects(
    at_kappa: &JostCoefficients,
    at_minus_kappa: &JostCoefficients,
    symmetric: bool,
) -> Result<BTreeMap<String, f64>> {
    if at_kappa.kappa.im != 0.0 || !same_kappa(-at_kappa.kappa, at_minus_kappa.kappa) {
        return Err(Error::MismatchedKappa(-at_kappa.kappa, at_minus_kappa.kappa));
    }
    let mut out = BTreeMap::new();
    out.insert("conj_a".into(), (at_kappa.a.conj() - at_minus_kappa.a).norm());
    out.insert("conj_b".into(), (at_kappa.b.conj() - at_minus_kappa.b).norm());
    if symmetric {
        out.insert("re_b".into(), at_kappa.b.re.abs());
    }
    Ok(out)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn delta(v0: f64, k: f64) -> JostCoefficients {
        let kk = c(k, 0.0);
        to_jost(&AmplitudePair::new(kk, c(v0, 0.0), c(v0, 0.0))).unwrap()
    }

    #[test]
    fn to_jost_examples() {
        let jc = to_jost(&AmplitudePair::free(c(1.0, 0.0))).unwrap();
        assert_eq!((jc.a, jc.b), (c(1.0, 0.0), c(0.0, 0.0)));
        let jc = to_jost(&AmplitudePair::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0))).unwrap();
        assert!((jc.a - c(1.0, 1.0)).norm() < 1e-15);
        assert!((jc.b - c(0.0, -1.0)).norm() < 1e-15);
        let jc = to_jost(&AmplitudePair::new(c(1e-6, 0.0), c(1.0, 0.0), c(1.0, 0.0))).unwrap();
        // 1/|1 − 1/(2iκ)| = 1/|1 − i·5e5|
        let t = 1.0 / jc.a.norm();
        assert!((t / 2e-6 - 1.0).abs() < 1e-6);
        assert!(matches!(
            to_jost(&AmplitudePair::free(c(1e-9, 0.0))),
            Err(Error::NearZeroMomentum(_))
        ));
    }

    #[test]
    fn s_matrix_examples() {
        let s = s_matrix(&JostCoefficients::free(c(1.0, 0.0))).unwrap();
        assert_eq!(s.s, [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        let s = s_matrix(&delta(2.0, 1.0)).unwrap();
        assert!((s.s[0][0] - c(0.5, -0.5)).norm() < 1e-15);
        assert!((s.s[0][0].norm_sqr() - 0.5).abs() < 1e-15);
        let pole = JostCoefficients::new(c(0.0, -1.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(s_matrix(&pole), Err(Error::Pole(_))));
    }

    #[test]
    fn t_matrix_examples() {
        let t = t_matrix(&AmplitudePair::free(c(1.3, 0.0))).unwrap();
        assert!(t.iter().flatten().all(|z| z.norm() == 0.0));
        let ap = AmplitudePair::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0));
        let t = t_matrix(&ap).unwrap();
        let expect = 1.0 / (PI * c(1.0, 1.0));
        for z in t.iter().flatten() {
            assert!((z - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn transmission_reflection_examples() {
        assert_eq!(transmission_reflection(&JostCoefficients::free(c(2.0, 0.0))).unwrap(), (1.0, 0.0));
        let (t, r) = transmission_reflection(&delta(2.0, 1.0)).unwrap();
        assert!((t - 0.5).abs() < 1e-15 && (r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn displacement_keeps_modulus() {
        let jc = delta(2.0, 1.7);
        assert_eq!(displace_jost(&jc, 0.0), JostCoefficients { ..jc });
        let d = displace_jost(&jc, 3.3);
        assert_eq!(d.a, jc.a);
        assert!((d.b.norm() - jc.b.norm()).abs() < 1e-15);
    }

    #[test]
    fn compose_with_free_is_displacement() {
        let jc = delta(2.0, 1.3);
        let free = JostCoefficients::free(jc.kappa);
        let r = compose(&jc, -0.7, &free, 2.0).unwrap();
        let d = displace_jost(&jc, -0.7);
        assert!((r.a - d.a).norm() < 1e-15 && (r.b - d.b).norm() < 1e-15);
    }

    #[test]
    fn compose_requires_same_kappa() {
        assert!(matches!(
            compose(&delta(1.0, 1.0), 0.0, &delta(1.0, 2.0), 1.0),
            Err(Error::MismatchedKappa(..))
        ));
    }

    #[test]
    fn complex_kappa_needs_conjugates() {
        let jc = JostCoefficients::new(c(1.0, -0.2), c(1.0, 0.0), c(0.1, 0.0));
        assert!(matches!(jc.a_bar(), Err(Error::MissingConjugate(_))));
    }

    #[test]
    fn composition_of_deltas_continues_off_axis() {
        // delta jost at κ and −κ, composed, vs the closed form for two spikes
        let v = 2.0;
        let k = c(0.8, -0.3);
        let single = |k: C| {
            let j = 2.0 * I * k;
            JostCoefficients::with_conjugates(k, 1.0 - v / j, v / j, 1.0 + v / j, -v / j)
        };
        let r = compose(&single(k), -1.0, &single(k), 1.0).unwrap();
        // two spikes at ±1: a = (1 − g)² − g² e^{4iκ}, g = v/(2iκ)
        let g = v / (2.0 * I * k);
        let a = (1.0 - g) * (1.0 - g) - g * g * (4.0 * I * k).exp();
        assert!((r.a - a).norm() < 1e-13);
    }

    #[test]
    fn symmetry_defects_free() {
        let k = c(1.1, 0.0);
        let d = symmetry_defects(&JostCoefficients::free(k), &JostCoefficients::free(-k), true).unwrap();
        assert!(d.values().all(|&v| v == 0.0));
    }

    fn unitary(kappa: f64, mag: f64, pa: f64, pb: f64) -> JostCoefficients {
        let bm = mag;
        let am = (1.0 + bm * bm).sqrt();
        JostCoefficients::new(c(kappa, 0.0), C::from_polar(am, pa), C::from_polar(bm, pb))
    }

    proptest! {
        #[test]
        fn algebraic_identities(k in 0.05f64..10.0, mag in 0.0f64..5.0, pa in -3.1f64..3.1, pb in -3.1f64..3.1) {
            let jc = unitary(k, mag, pa, pb);
            let s = s_matrix(&jc).unwrap();
            prop_assert!(s.unitarity_defect() < 1e-12);
            prop_assert!(det_defect(&jc).unwrap() < 1e-12);
            prop_assert!(MonodromyMatrix::from_jost(&jc).unwrap().quasi_unitarity_defect() < 1e-12 * (1.0 + mag * mag));
            let ap = jc.to_pair();
            prop_assert!(ap.unitarity_defect() < 1e-12 * (1.0 + k * (1.0 + mag * mag)));
            let t = t_matrix(&ap).unwrap();
            let f = 2.0 * PI * I / (2.0 * k);
            for i in 0..2 {
                for j in 0..2 {
                    let id = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((id - f * t[i][j] - s.s[i][j]).norm() < 1e-12 * (1.0 + mag));
                }
            }
            let (tt, rr) = transmission_reflection(&jc).unwrap();
            prop_assert!((tt + rr - 1.0).abs() < 1e-12);
        }

        #[test]
        fn composition_preserves_unitarity(k in 0.1f64..5.0, m1 in 0.0f64..3.0, m2 in 0.0f64..3.0,
                                           p in -3.0f64..3.0, q in -3.0f64..3.0, d in 0.0f64..4.0) {
            let j1 = unitary(k, m1, p, q);
            let j2 = unitary(k, m2, q, p);
            let r = compose(&j1, -d, &j2, d).unwrap();
            let scale = (1.0 + m1 * m1) * (1.0 + m2 * m2);
            prop_assert!(r.unitarity_defect() < 1e-12 * scale);
        }

        #[test]
        fn composition_is_associative(k in 0.1f64..5.0, m in 0.0f64..2.0, p in -3.0f64..3.0) {
            let j1 = unitary(k, m, p, 0.3);
            let j2 = unitary(k, 0.5 * m, -p, 1.1);
            let j3 = unitary(k, m, 0.2, p);
            let left = compose(&compose(&j1, 0.0, &j2, 2.0).unwrap(), 0.0, &j3, 5.0).unwrap();
            let right = compose(&j1, 0.0, &compose(&j2, 0.0, &j3, 3.0).unwrap(), 2.0).unwrap();
            prop_assert!((left.a - right.a).norm() < 1e-11 * (1.0 + m).powi(3));
            prop_assert!((left.b - right.b).norm() < 1e-11 * (1.0 + m).powi(3));
        }
    }
}
