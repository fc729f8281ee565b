//! Quaternions over a pluggable scalar and the sequence quaternions
//! `Q(n) = V(n) + V(n+1) i + V(n+2) j + V(n+3) k`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{big_to_f64, exponent, BinetEvaluator};
use crate::error::Result;
use crate::sequence::SequenceParams;

/// `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T> Quaternion<T> {
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn components(&self) -> [&T; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Quaternion<U> {
        Quaternion::new(f(&self.w), f(&self.x), f(&self.y), f(&self.z))
    }
}

impl<T> Quaternion<T>
where
    T: Clone + Mul<Output = T>,
{
    /// Multiply every component by a scalar of the same kind.
    pub fn scale(&self, k: &T) -> Self {
        self.map(|c| c.clone() * k.clone())
    }
}

impl<T> Add for Quaternion<T>
where
    T: Add<Output = T>,
{
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl<T> Sub for Quaternion<T>
where
    T: Sub<Output = T>,
{
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl<T> Neg for Quaternion<T>
where
    T: Neg<Output = T>,
{
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product, `i^2 = j^2 = k^2 = ijk = -1`.
impl<T> Mul for Quaternion<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        hamilton_mul(&self, &rhs)
    }
}

pub fn hamilton_mul<T>(a: &Quaternion<T>, b: &Quaternion<T>) -> Quaternion<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let m = |p: &T, q: &T| p.clone() * q.clone();
    Quaternion::new(
        m(&a.w, &b.w) - m(&a.x, &b.x) - m(&a.y, &b.y) - m(&a.z, &b.z),
        m(&a.w, &b.x) + m(&a.x, &b.w) + m(&a.y, &b.z) - m(&a.z, &b.y),
        m(&a.w, &b.y) - m(&a.x, &b.z) + m(&a.y, &b.w) + m(&a.z, &b.x),
        m(&a.w, &b.z) + m(&a.x, &b.y) - m(&a.y, &b.x) + m(&a.z, &b.w),
    )
}

impl Quaternion<BigInt> {
    /// `w^2 + x^2 + y^2 + z^2`.
    pub fn norm_squared(&self) -> BigInt {
        self.components().iter().map(|c| *c * *c).sum()
    }

    pub fn to_complex(&self) -> Quaternion<Complex64> {
        self.map(|c| Complex64::new(big_to_f64(c), 0.0))
    }
}

impl Quaternion<Complex64> {
    pub fn real_parts(&self) -> Quaternion<f64> {
        self.map(|c| c.re)
    }
}

/// `(V(n), V(n+1), V(n+2), V(n+3))`.
pub fn seq_quaternion(p: &SequenceParams, n: u64) -> Quaternion<BigInt> {
    let v = p.terms_range(n, n + 3).expect("n <= n + 3");
    let [w, x, y, z]: [BigInt; 4] = v.try_into().expect("four terms");
    Quaternion::new(w, x, y, z)
}

/// `1 + z i + z^2 j + z^3 k`.
pub fn root_quaternion(z: Complex64) -> Quaternion<Complex64> {
    Quaternion::new(Complex64::new(1.0, 0.0), z, z * z, z * z * z)
}

/// Closed-form sequence quaternion
///
/// ```text
/// Q(n) = P A a^n / ((a - w1)(a - w2)) - Q W1 w1^n / ((a - w1)(w1 - w2)) + R W2 w2^n / ((a - w2)(w1 - w2))
/// ```
///
/// with `A`, `W1`, `W2` the root quaternions of `a`, `w1`, `w2`.
pub fn quaternion_binet(p: &SequenceParams, n: u64) -> Result<Quaternion<Complex64>> {
    Ok(quaternion_binet_with(&BinetEvaluator::new(p)?, n))
}

pub fn quaternion_binet_with(eval: &BinetEvaluator, n: u64) -> Quaternion<Complex64> {
    let e = exponent(n);
    eval.roots
        .all()
        .into_iter()
        .zip(eval.weights())
        .map(|(z, w)| root_quaternion(z).scale(&(w * z.powu(e))))
        .fold(Quaternion::default(), |acc, q| acc + q)
}

/// Componentwise residuals of
///
/// ```text
/// z^2 Q(n+2) + z (s Q(n+1) + t Q(n)) + t Q(n+1) = C Z z^(n+2)
/// ```
///
/// for `(C, z)` in `[(P, alpha), (Q, omega1), (R, omega2)]`, with exact
/// sequence quaternions on the left. Returns `(absolute, scale)` per root,
/// each the worst component.
pub fn lifted_quadratic_residuals(eval: &BinetEvaluator, p: &SequenceParams, n: u64) -> [(f64, f64); 3] {
    let q: Vec<Quaternion<Complex64>> = (n..=n + 2).map(|k| seq_quaternion(p, k).to_complex()).collect();
    let (s, t) = (Complex64::new(eval.roots.s, 0.0), Complex64::new(eval.roots.t, 0.0));
    let consts = eval.constants.as_array();
    let roots = eval.roots.all();
    std::array::from_fn(|i| {
        let z = roots[i];
        let zn2 = z.powu(exponent(n + 2));
        let lhs = q[2].scale(&(z * z)) + (q[1].scale(&s) + q[0].scale(&t)).scale(&z) + q[1].scale(&t);
        let rhs = root_quaternion(z).scale(&(consts[i] * zn2));
        let diff = lhs - rhs;
        let abs = diff.components().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mag = |x: &Quaternion<Complex64>| x.components().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let scale = z.norm_sqr() * mag(&q[2])
            + z.norm() * (s.norm() * mag(&q[1]) + t.norm() * mag(&q[0]))
            + t.norm() * mag(&q[1])
            + mag(&rhs);
        (abs, scale)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::Preset;

    fn qi(w: i64, x: i64, y: i64, z: i64) -> Quaternion<BigInt> {
        Quaternion::new(w.into(), x.into(), y.into(), z.into())
    }

    #[test]
    fn sequence_quaternions() {
        let trib = Preset::Tribonacci.params();
        assert_eq!(seq_quaternion(&trib, 0), qi(0, 0, 1, 1));
        assert_eq!(seq_quaternion(&trib, 4), qi(2, 4, 7, 13));
        let zero = SequenceParams::new(0, 0, 0, 3, 1, 2);
        for n in [0, 5, 17] {
            assert_eq!(seq_quaternion(&zero, n), qi(0, 0, 0, 0));
        }
    }

    #[test]
    fn root_quaternions() {
        assert_eq!(
            root_quaternion(Complex64::new(0.0, 0.0)).real_parts(),
            Quaternion::new(1.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(
            root_quaternion(Complex64::new(1.0, 0.0)).real_parts(),
            Quaternion::new(1.0, 1.0, 1.0, 1.0)
        );
        let eval = BinetEvaluator::new(&Preset::Tribonacci.params()).unwrap();
        let a = root_quaternion(Complex64::new(eval.roots.alpha, 0.0)).real_parts();
        assert!((a.x - 1.839286755214161).abs() < 1e-14);
        assert!((a.y - 3.382975767906237).abs() < 1e-13);
        assert!((a.z - 6.222262523120398).abs() < 1e-13);
    }

    #[test]
    fn hamilton_units() {
        let q = qi(3, -1, 4, 1);
        assert_eq!(qi(1, 0, 0, 0) * q.clone(), q);
        assert_eq!(qi(0, 1, 0, 0) * qi(0, 1, 0, 0), qi(-1, 0, 0, 0));
        assert_eq!(qi(0, 1, 0, 0) * qi(0, 0, 1, 0), qi(0, 0, 0, 1));
        assert_eq!(qi(0, 0, 1, 0) * qi(0, 0, 0, 1), qi(0, 1, 0, 0));
        assert_eq!(qi(0, 0, 0, 1) * qi(0, 1, 0, 0), qi(0, 0, 1, 0));
        assert_eq!(qi(0, 0, 1, 0) * qi(0, 1, 0, 0), qi(0, 0, 0, -1));
        // ijk = -1
        assert_eq!(qi(0, 1, 0, 0) * qi(0, 0, 1, 0) * qi(0, 0, 0, 1), qi(-1, 0, 0, 0));
    }

    #[test]
    fn closed_form_quaternions() {
        let cases = [
            (Preset::Tribonacci.params(), 4, [2.0, 4.0, 7.0, 13.0]),
            (Preset::Padovan.params(), 6, [2.0, 2.0, 3.0, 4.0]),
        ];
        for (p, n, want) in cases {
            let got = quaternion_binet(&p, n).unwrap().real_parts();
            for (g, w) in [got.w, got.x, got.y, got.z].into_iter().zip(want) {
                assert!((g - w).abs() / w.abs().max(1.0) < 1e-8, "{p} n={n}: {got:?}");
            }
        }
        let u = SequenceParams::fundamental_of(2, 1, 3);
        assert!((quaternion_binet(&u, 2).unwrap().w.re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lifted_residuals_vanish() {
        let p = SequenceParams::new(2, -3, 5, 1, 2, 1);
        let eval = BinetEvaluator::new(&p).unwrap();
        for n in 0..=20 {
            for (abs, scale) in lifted_quadratic_residuals(&eval, &p, n) {
                assert!(abs <= 1e-12 * scale, "n={n}: {abs} vs {scale}");
            }
        }
    }
}
