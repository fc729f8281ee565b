//! Roots of the characteristic cubic `x^3 - r x^2 - s x - t` and the closed
//! forms built on them.
//!
//! Everything here assumes the discriminant-like quantity
//!
//! ```text
//! delta = r^3 t / 27 - r^2 s^2 / 108 + r s t / 6 - s^3 / 27 + t^2 / 4
//! ```
//!
//! is strictly positive, so the cubic has one real root `alpha` and a
//! conjugate pair `omega1`, `omega2`. Roots come from the Cardano radicals
//!
//! ```text
//! A = cbrt(r^3/27 + r s/6 + t/2 + sqrt(delta))
//! B = cbrt(r^3/27 + r s/6 + t/2 - sqrt(delta))
//! alpha  = r/3 + A + B
//! omega1 = r/3 + eps A + eps^2 B
//! omega2 = r/3 + eps^2 A + eps B,     eps = -1/2 + i sqrt(3)/2
//! ```
//!
//! and are then polished with Newton steps, since the radicals alone lose
//! digits when `A` and `B` nearly cancel.
//!
//! Closed-form values are computed in complex arithmetic and collapsed to
//! the real part at the end; the dropped imaginary part is reported so the
//! caller can see how far from real the evaluation drifted.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::SequenceParams;

/// Root residual bound before scaling by `max(1, |r|, |s|, |t|)^3`.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

const MAX_NEWTON_STEPS: usize = 100;

/// Primitive cube root of unity `-1/2 + i sqrt(3)/2`.
fn eps() -> Complex64 {
    Complex64::new(-0.5, 3f64.sqrt() / 2.0)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact `delta(r, s, t)`.
pub fn discriminant(r: &BigInt, s: &BigInt, t: &BigInt) -> BigRational {
    let r = BigRational::from_integer(r.clone());
    let s = BigRational::from_integer(s.clone());
    let t = BigRational::from_integer(t.clone());
    &r * &r * &r * &t * ratio(1, 27) - &r * &r * &s * &s * ratio(1, 108) + &r * &s * &t * ratio(1, 6)
        - &s * &s * &s * ratio(1, 27)
        + &t * &t * ratio(1, 4)
}

/// Exact Cardano radicand `r^3/27 + r s/6 + t/2` (the part under the cube
/// roots, before `sqrt(delta)` is added or subtracted).
pub fn cardano_radicand(r: &BigInt, s: &BigInt, t: &BigInt) -> BigRational {
    let r = BigRational::from_integer(r.clone());
    let s = BigRational::from_integer(s.clone());
    let t = BigRational::from_integer(t.clone());
    &r * &r * &r * ratio(1, 27) + &r * &s * ratio(1, 6) + &t * ratio(1, 2)
}

pub fn discriminant_f64(r: f64, s: f64, t: f64) -> f64 {
    r * r * r * t / 27.0 - r * r * s * s / 108.0 + r * s * t / 6.0 - s * s * s / 27.0 + t * t / 4.0
}

pub fn cardano_radicand_f64(r: f64, s: f64, t: f64) -> f64 {
    r * r * r / 27.0 + r * s / 6.0 + t / 2.0
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// The real root and the conjugate pair of `x^3 - r x^2 - s x - t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicRoots {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub alpha: f64,
    /// The member of the pair with positive imaginary part.
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub delta: f64,
    /// Present when the coefficients were integers.
    #[serde(skip)]
    pub delta_exact: Option<BigRational>,
    pub a_v: f64,
    pub b_v: f64,
    pub tol_root: f64,
}

impl CubicRoots {
    /// Roots for integer coefficients; the `delta > 0` gate is decided exactly.
    pub fn from_integers(r: &BigInt, s: &BigInt, t: &BigInt) -> Result<Self> {
        let delta = discriminant(r, s, t);
        if !delta.is_positive() {
            return Err(Error::DeltaNotPositive {
                delta: delta.to_string(),
            });
        }
        let (rf, sf, tf) = (big_to_f64(r), big_to_f64(s), big_to_f64(t));
        let delta_f = delta.to_f64().unwrap_or(f64::INFINITY);
        let radicand = cardano_radicand(r, s, t).to_f64().unwrap_or(f64::NAN);
        let mut roots = Self::solve(rf, sf, tf, delta_f, radicand, DEFAULT_ROOT_TOL)?;
        roots.delta_exact = Some(delta);
        // An integer real root is pinned exactly so that seeds lying in a
        // single eigenspace give exactly vanishing closed-form coefficients.
        let rounded = roots.alpha.round();
        if rounded != roots.alpha && rounded.abs() < 2f64.powi(53) {
            let k = BigInt::from(rounded as i64);
            if (&k - r) * &k * &k - s * &k - t == BigInt::from(0) {
                roots.alpha = rounded;
            }
        }
        Ok(roots)
    }

    pub fn for_params(p: &SequenceParams) -> Result<Self> {
        Self::from_integers(&p.r, &p.s, &p.t)
    }

    /// Roots for real coefficients; the gate uses the floating-point delta.
    pub fn from_real(r: f64, s: f64, t: f64) -> Result<Self> {
        Self::from_real_with_tol(r, s, t, DEFAULT_ROOT_TOL)
    }

    pub fn from_real_with_tol(r: f64, s: f64, t: f64, tol: f64) -> Result<Self> {
        let delta = discriminant_f64(r, s, t);
        if delta.is_nan() || delta <= 0.0 {
            return Err(Error::DeltaNotPositive {
                delta: format!("{delta:e}"),
            });
        }
        Self::solve(r, s, t, delta, cardano_radicand_f64(r, s, t), tol)
    }

    fn solve(r: f64, s: f64, t: f64, delta: f64, radicand: f64, tol: f64) -> Result<Self> {
        let sq = delta.sqrt();
        let a_v = (radicand + sq).cbrt();
        let b_v = (radicand - sq).cbrt();
        let shift = r / 3.0;
        let e = eps();
        let alpha0 = shift + a_v + b_v;
        let omega0 = shift + e * a_v + e * e * b_v;

        let scale = 1f64.max(r.abs()).max(s.abs()).max(t.abs());
        let tol_root = tol * scale.powi(3);

        let alpha = polish(Complex64::new(alpha0, 0.0), r, s, t).re;
        let omega1 = polish(omega0, r, s, t);
        let omega1 = if omega1.im < 0.0 { omega1.conj() } else { omega1 };

        let roots = Self {
            r,
            s,
            t,
            alpha,
            omega1,
            omega2: omega1.conj(),
            delta,
            delta_exact: None,
            a_v,
            b_v,
            tol_root,
        };
        let worst = roots.max_residual();
        if worst.is_nan() || worst > tol_root {
            return Err(Error::RootNotConverged {
                residual: worst,
                tolerance: tol_root,
            });
        }
        Ok(roots)
    }

    /// `|z^3 - r z^2 - s z - t|`.
    pub fn residual(&self, z: Complex64) -> f64 {
        cubic_at(z, self.r, self.s, self.t).norm()
    }

    pub fn max_residual(&self) -> f64 {
        self.all()
            .into_iter()
            .map(|z| self.residual(z))
            .fold(0.0, f64::max)
    }

    /// `[alpha, omega1, omega2]`.
    pub fn all(&self) -> [Complex64; 3] {
        [Complex64::new(self.alpha, 0.0), self.omega1, self.omega2]
    }

    /// Elementary symmetric functions `(sum, pairwise sum, product)`; these
    /// approximate `(r, -s, t)`.
    pub fn symmetric_functions(&self) -> (Complex64, Complex64, Complex64) {
        let [a, w1, w2] = self.all();
        (a + w1 + w2, a * w1 + a * w2 + w1 * w2, a * w1 * w2)
    }

    /// `[(a - w1)(a - w2), (a - w1)(w1 - w2), (a - w2)(w1 - w2)]`.
    pub fn denominators(&self) -> [Complex64; 3] {
        let [a, w1, w2] = self.all();
        [(a - w1) * (a - w2), (a - w1) * (w1 - w2), (a - w2) * (w1 - w2)]
    }
}

fn cubic_at(z: Complex64, r: f64, s: f64, t: f64) -> Complex64 {
    ((z - r) * z - s) * z - t
}

/// Newton iteration on the cubic, stopping once a step no longer lowers
/// the residual.
fn polish(mut z: Complex64, r: f64, s: f64, t: f64) -> Complex64 {
    let mut best = cubic_at(z, r, s, t).norm();
    for _ in 0..MAX_NEWTON_STEPS {
        if best == 0.0 {
            break;
        }
        let f = cubic_at(z, r, s, t);
        let df = (z * 3.0 - 2.0 * r) * z - s;
        if df.norm() == 0.0 {
            break;
        }
        let next = z - f / df;
        let res = cubic_at(next, r, s, t).norm();
        if res.is_nan() || res >= best {
            break;
        }
        z = next;
        best = res;
    }
    z
}

/// The seed-dependent coefficients `P`, `Q`, `R` of the closed form:
///
/// ```text
/// P = V2 - (w1 + w2) V1 + w1 w2 V0
/// Q = V2 - (a + w2) V1 + a w2 V0
/// R = V2 - (a + w1) V1 + a w1 V0
/// ```
///
/// They are evaluated as `P = V2 - (r - a) V1 + (a^2 - r a - s) V0` and
/// `Q = (V2 - a V1) - w2 (V1 - a V0)` (likewise `R`), which are the same
/// quantities but vanish exactly in floating point whenever the seeds lie
/// in one eigenspace and `a` is an integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinetConstants {
    pub p_c: Complex64,
    pub q_c: Complex64,
    pub r_c: Complex64,
}

impl BinetConstants {
    pub fn new(seeds: [f64; 3], roots: &CubicRoots) -> Self {
        let [v0, v1, v2] = seeds;
        let (a, r, s) = (roots.alpha, roots.r, roots.s);
        let pair_sum = r - a;
        let pair_product = a * a - r * a - s;
        let p_c = Complex64::new(v2 - pair_sum * v1 + pair_product * v0, 0.0);
        let (head, tail) = (v2 - a * v1, v1 - a * v0);
        Self {
            p_c,
            q_c: head - roots.omega2 * tail,
            r_c: head - roots.omega1 * tail,
        }
    }

    pub fn for_params(p: &SequenceParams, roots: &CubicRoots) -> Self {
        Self::new([&p.v0, &p.v1, &p.v2].map(big_to_f64), roots)
    }

    /// `[P, Q, R]`, aligned with `[alpha, omega1, omega2]`.
    pub fn as_array(&self) -> [Complex64; 3] {
        [self.p_c, self.q_c, self.r_c]
    }
}

/// A closed-form value collapsed to its real part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinetValue {
    pub value: f64,
    /// `|Im|` of the complex sum before it was discarded.
    pub imag_residue: f64,
}

/// Evaluates
///
/// ```text
/// V(n) = P a^n / ((a - w1)(a - w2)) - Q w1^n / ((a - w1)(w1 - w2)) + R w2^n / ((a - w2)(w1 - w2))
/// ```
///
/// for a fixed sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct BinetEvaluator {
    pub roots: CubicRoots,
    pub constants: BinetConstants,
    weights: [Complex64; 3],
}

impl BinetEvaluator {
    pub fn new(p: &SequenceParams) -> Result<Self> {
        let roots = CubicRoots::for_params(p)?;
        let constants = BinetConstants::for_params(p, &roots);
        Ok(Self::assemble(roots, constants))
    }

    /// Real recurrence coefficients with integer-valued seeds given as floats.
    pub fn from_real(seeds: [f64; 3], r: f64, s: f64, t: f64) -> Result<Self> {
        let roots = CubicRoots::from_real(r, s, t)?;
        let constants = BinetConstants::new(seeds, &roots);
        Ok(Self::assemble(roots, constants))
    }

    /// The fundamental sequence, `P = Q = R = 1`.
    pub fn fundamental(roots: CubicRoots) -> Self {
        let constants = BinetConstants::new([0.0, 0.0, 1.0], &roots);
        Self::assemble(roots, constants)
    }

    fn assemble(roots: CubicRoots, constants: BinetConstants) -> Self {
        let [da, dw1, dw2] = roots.denominators();
        let weights = [constants.p_c / da, -constants.q_c / dw1, constants.r_c / dw2];
        Self {
            roots,
            constants,
            weights,
        }
    }

    /// Per-root coefficients `[P / da, -Q / dw1, R / dw2]`, so that
    /// `V(n) = sum_i weight_i * root_i^n`.
    pub fn weights(&self) -> [Complex64; 3] {
        self.weights
    }

    pub fn term_complex(&self, n: u64) -> Complex64 {
        let e = exponent(n);
        self.roots
            .all()
            .iter()
            .zip(self.weights)
            .map(|(z, w)| w * z.powu(e))
            .sum()
    }

    pub fn term(&self, n: u64) -> BinetValue {
        let z = self.term_complex(n);
        BinetValue {
            value: z.re,
            imag_residue: z.im.abs(),
        }
    }
}

pub(crate) fn exponent(n: u64) -> u32 {
    u32::try_from(n).unwrap_or(u32::MAX)
}

/// Closed-form `U(n)` for the roots of a recurrence.
pub fn u_binet(roots: &CubicRoots, n: u64) -> BinetValue {
    BinetEvaluator::fundamental(roots.clone()).term(n)
}

/// Closed-form `V(n)`.
pub fn v_binet(p: &SequenceParams, n: u64) -> Result<BinetValue> {
    Ok(BinetEvaluator::new(p)?.term(n))
}

/// `V(n) = V2 U(n) + (s V1 + t V0) U(n-1) + t V1 U(n-2)` with exact `U`.
pub fn v_from_u(p: &SequenceParams, n: u64) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::IndexTooSmall { n, min: 2 });
    }
    let [um2, um1, u0] = p.fundamental().window(n - 2);
    Ok(&p.v2 * u0 + (&p.s * &p.v1 + &p.t * &p.v0) * um1 + &p.t * &p.v1 * um2)
}

/// Residuals of the quadratic identities
///
/// ```text
/// C z^(n+2) = z^2 V(n+2) + z (s V(n+1) + t V(n)) + t V(n+1)
/// ```
///
/// for `(C, z)` in `[(P, alpha), (Q, omega1), (R, omega2)]`, using exact `V`
/// values and floating roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResiduals {
    /// `|lhs - rhs|` per root.
    pub absolute: [f64; 3],
    /// Total magnitude of the terms on both sides, per root. Zero only for
    /// the zero sequence.
    pub scale: [f64; 3],
}

impl QuadResiduals {
    pub fn relative(&self) -> [f64; 3] {
        std::array::from_fn(|i| relative(self.absolute[i], self.scale[i]))
    }

    pub fn worst_relative(&self) -> f64 {
        self.relative().into_iter().fold(0.0, f64::max)
    }
}

fn relative(abs: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        abs / scale
    } else {
        abs
    }
}

/// Magnitude of `C = V2 - sigma1 V1 + sigma2 V0` summed term by term, where
/// `sigma1`, `sigma2` are the sum and product of the two other roots.
fn constant_magnitude(seeds: [f64; 3], sigma1: Complex64, sigma2: Complex64) -> f64 {
    seeds[2].abs() + sigma1.norm() * seeds[1].abs() + sigma2.norm() * seeds[0].abs()
}

pub fn quad_approx_residuals(p: &SequenceParams, n: u64) -> Result<QuadResiduals> {
    let eval = BinetEvaluator::new(p)?;
    Ok(quad_approx_with(&eval, p, n))
}

pub(crate) fn quad_approx_with(eval: &BinetEvaluator, p: &SequenceParams, n: u64) -> QuadResiduals {
    let v = p.terms_range(n, n + 2).expect("n <= n + 2");
    let [vn, vn1, vn2] = [&v[0], &v[1], &v[2]].map(big_to_f64);
    let (s, t) = (eval.roots.s, eval.roots.t);
    let seeds = [&p.v0, &p.v1, &p.v2].map(big_to_f64);
    let roots = eval.roots.all();
    let consts = eval.constants.as_array();
    let mut absolute = [0.0; 3];
    let mut scale = [0.0; 3];
    for i in 0..3 {
        let z = roots[i];
        let (o1, o2) = (roots[(i + 1) % 3], roots[(i + 2) % 3]);
        let zn2 = z.powu(exponent(n + 2));
        let lhs = consts[i] * zn2;
        let middle = s * vn1 + t * vn;
        let rhs = z * z * vn2 + z * middle + t * vn1;
        absolute[i] = (lhs - rhs).norm();
        scale[i] = zn2.norm() * constant_magnitude(seeds, o1 + o2, o1 * o2)
            + z.norm_sqr() * vn2.abs()
            + z.norm() * (s.abs() * vn1.abs() + t.abs() * vn.abs())
            + t.abs() * vn1.abs();
    }
    QuadResiduals { absolute, scale }
}

/// Residual of `alpha V(n+2) + (s + w1 w2) V(n+1) + t V(n) = P alpha^(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFormResidual {
    pub absolute: f64,
    pub scale: f64,
}

impl LinearFormResidual {
    pub fn relative(&self) -> f64 {
        relative(self.absolute, self.scale)
    }
}

pub fn linear_form_check(p: &SequenceParams, n: u64) -> Result<LinearFormResidual> {
    let eval = BinetEvaluator::new(p)?;
    let v = p.terms_range(n, n + 2)?;
    let [vn, vn1, vn2] = [&v[0], &v[1], &v[2]].map(big_to_f64);
    let roots = &eval.roots;
    let (s, t) = (roots.s, roots.t);
    let a = Complex64::new(roots.alpha, 0.0);
    let w12 = roots.omega1 * roots.omega2;
    let an1 = a.powu(exponent(n + 1));
    let lhs = a * vn2 + (s + w12) * vn1 + t * vn;
    let rhs = eval.constants.p_c * an1;
    let seeds = [&p.v0, &p.v1, &p.v2].map(big_to_f64);
    let scale = a.norm() * vn2.abs()
        + (s.abs() + w12.norm()) * vn1.abs()
        + t.abs() * vn.abs()
        + an1.norm() * constant_magnitude(seeds, roots.omega1 + roots.omega2, w12);
    Ok(LinearFormResidual {
        absolute: (lhs - rhs).norm(),
        scale,
    })
}

/// True when the exact `delta` of the recurrence is positive.
pub fn has_positive_delta(p: &SequenceParams) -> bool {
    discriminant(&p.r, &p.s, &p.t).is_positive()
}
