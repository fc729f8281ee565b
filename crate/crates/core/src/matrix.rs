//! 3x3 companion-matrix machinery over exact integers and residues.
//!
//! `M = [[r, s, t], [1, 0, 0], [0, 1, 0]]` advances the window
//! `(V(n+2), V(n+1), V(n))` by one step, so `M^n` applied to the seeds gives
//! `V(n)` in `O(log n)` matrix products. The closed matrix forms of `M^n`
//! (the `U`-form and the shifted `V`-forms) are built here from iterated
//! terms so they can be compared entrywise against [`Mat3::pow`].

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::SequenceParams;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat3 {
    pub a: [[BigInt; 3]; 3],
}

impl Mat3 {
    pub fn from_rows<T: Into<BigInt>>(rows: [[T; 3]; 3]) -> Self {
        Self {
            a: rows.map(|row| row.map(Into::into)),
        }
    }

    pub fn zero() -> Self {
        Self {
            a: std::array::from_fn(|_| std::array::from_fn(|_| BigInt::zero())),
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.a[i][i] = BigInt::one();
        }
        m
    }

    /// Companion matrix `[[r, s, t], [1, 0, 0], [0, 1, 0]]`.
    pub fn companion(p: &SequenceParams) -> Self {
        Self::companion_of(&p.r, &p.s, &p.t)
    }

    pub fn companion_of(r: &BigInt, s: &BigInt, t: &BigInt) -> Self {
        let mut m = Self::zero();
        m.a[0] = [r.clone(), s.clone(), t.clone()];
        m.a[1][0] = BigInt::one();
        m.a[2][1] = BigInt::one();
        m
    }

    /// `[[1, 0, 0], [0, t, 0], [0, s - t, t]]`, the right factor taking the
    /// sum-form shifted matrix to the `(s, t)`-form. Singular when `t = 0`.
    pub fn st_factor(s: &BigInt, t: &BigInt) -> Self {
        let mut m = Self::zero();
        m.a[0][0] = BigInt::one();
        m.a[1][1] = t.clone();
        m.a[2][1] = s - t;
        m.a[2][2] = t.clone();
        m
    }

    pub fn mul(&self, other: &Mat3) -> Mat3 {
        let mut out = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.a[i][j] = &self.a[i][0] * &other.a[0][j]
                    + &self.a[i][1] * &other.a[1][j]
                    + &self.a[i][2] * &other.a[2][j];
            }
        }
        out
    }

    /// `self^n` by left-to-right square-and-multiply; `self^0 = I`.
    pub fn pow(&self, n: u64) -> Mat3 {
        let mut result = Mat3::identity();
        if n == 0 {
            return result;
        }
        for bit in (0..64 - n.leading_zeros()).rev() {
            result = result.mul(&result);
            if (n >> bit) & 1 == 1 {
                result = result.mul(self);
            }
        }
        result
    }

    /// `self^n` reduced modulo `modulus`, with `O(1)`-sized entries throughout.
    pub fn pow_mod(&self, n: u64, modulus: u64) -> Result<Mat3Mod> {
        Ok(Mat3Mod::reduce(self, modulus)?.pow(n))
    }

    /// Exact determinant by cofactor expansion along the first row.
    pub fn det(&self) -> BigInt {
        let a = &self.a;
        &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
            - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
            + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
    }

    pub fn apply(&self, v: &[BigInt; 3]) -> [BigInt; 3] {
        std::array::from_fn(|i| &self.a[i][0] * &v[0] + &self.a[i][1] * &v[1] + &self.a[i][2] * &v[2])
    }

    /// The closed form of `M^n` in terms of the fundamental sequence:
    ///
    /// ```text
    /// [[U(n+2), s U(n+1) + t U(n),   t U(n+1)],
    ///  [U(n+1), s U(n)   + t U(n-1), t U(n)  ],
    ///  [U(n),   s U(n-1) + t U(n-2), t U(n-1)]]
    /// ```
    ///
    /// Built from iterated `U` values, not from matrix products.
    pub fn u_form(r: &BigInt, s: &BigInt, t: &BigInt, n: u64) -> Result<Mat3> {
        if n < 2 {
            return Err(Error::IndexTooSmall { n, min: 2 });
        }
        let fundamental = SequenceParams::fundamental_of(r.clone(), s.clone(), t.clone());
        let u = fundamental.terms_range(n - 2, n + 2)?;
        let (um2, um1, u0, u1, u2) = (&u[0], &u[1], &u[2], &u[3], &u[4]);
        Ok(Mat3 {
            a: [
                [u2.clone(), s * u1 + t * u0, t * u1],
                [u1.clone(), s * u0 + t * um1, t * u0],
                [u0.clone(), s * um1 + t * um2, t * um1],
            ],
        })
    }

    /// The sum-form shifted matrix
    ///
    /// ```text
    /// [[V(n+4), V(n+3) + V(n+2), V(n+3)],
    ///  [V(n+3), V(n+2) + V(n+1), V(n+2)],
    ///  [V(n+2), V(n+1) + V(n),   V(n+1)]]
    /// ```
    pub fn v_shift(p: &SequenceParams, n: u64) -> Mat3 {
        let v = shifted_terms(p, n);
        Mat3 {
            a: [
                [v[4].clone(), &v[3] + &v[2], v[3].clone()],
                [v[3].clone(), &v[2] + &v[1], v[2].clone()],
                [v[2].clone(), &v[1] + &v[0], v[1].clone()],
            ],
        }
    }

    /// The `(s, t)`-form shifted matrix
    ///
    /// ```text
    /// [[V(n+4), s V(n+3) + t V(n+2), t V(n+3)],
    ///  [V(n+3), s V(n+2) + t V(n+1), t V(n+2)],
    ///  [V(n+2), s V(n+1) + t V(n),   t V(n+1)]]
    /// ```
    ///
    /// Equals `v_shift(p, n) * st_factor(s, t)` and `M^n * st_form(p, 0)` for
    /// every `t`, including `t = 0`.
    pub fn st_form(p: &SequenceParams, n: u64) -> Mat3 {
        let v = shifted_terms(p, n);
        let (s, t) = (&p.s, &p.t);
        Mat3 {
            a: [
                [v[4].clone(), s * &v[3] + t * &v[2], t * &v[3]],
                [v[3].clone(), s * &v[2] + t * &v[1], t * &v[2]],
                [v[2].clone(), s * &v[1] + t * &v[0], t * &v[1]],
            ],
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigInt> {
        self.a.iter().flatten()
    }
}

/// `V(n..=n+4)`.
fn shifted_terms(p: &SequenceParams, n: u64) -> Vec<BigInt> {
    p.terms_range(n, n + 4).expect("n <= n + 4")
}

impl Mul for &Mat3 {
    type Output = Mat3;

    fn mul(self, rhs: &Mat3) -> Mat3 {
        Mat3::mul(self, rhs)
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.a.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        write!(f, "]")
    }
}

/// `V(n)` as the last component of `M^n (V2, V1, V0)^T`.
pub fn term_by_matrix(p: &SequenceParams, n: u64) -> BigInt {
    let m = Mat3::companion(p).pow(n);
    let seeds = [p.v2.clone(), p.v1.clone(), p.v0.clone()];
    let [_, _, vn] = m.apply(&seeds);
    vn
}

/// `V(n) mod modulus` via the modular companion-matrix power.
pub fn term_by_matrix_mod(p: &SequenceParams, n: u64, modulus: u64) -> Result<u64> {
    let m = Mat3::companion(p).pow_mod(n, modulus)?;
    let seeds = [&p.v2, &p.v1, &p.v0].map(|v| residue(v, modulus));
    let row = m.a[2];
    let q = modulus as u128;
    let acc = (0..3).fold(0u128, |acc, j| (acc + row[j] as u128 * seeds[j] as u128) % q);
    Ok(acc as u64)
}

/// `x mod modulus` in `[0, modulus)`.
pub fn residue(x: &BigInt, modulus: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(modulus));
    u64::try_from(r).expect("residue below a u64 modulus")
}

/// 3x3 matrix of residues in `[0, modulus)`. No primality is assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat3Mod {
    pub a: [[u64; 3]; 3],
    pub modulus: u64,
}

impl Mat3Mod {
    pub fn identity(modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        let mut a = [[0; 3]; 3];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 1;
        }
        Ok(Self { a, modulus })
    }

    /// Reduce an exact matrix, mapping negative entries into `[0, modulus)`.
    pub fn reduce(m: &Mat3, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self {
            a: std::array::from_fn(|i| std::array::from_fn(|j| residue(&m.a[i][j], modulus))),
            modulus,
        })
    }

    pub fn mul(&self, other: &Mat3Mod) -> Mat3Mod {
        debug_assert_eq!(self.modulus, other.modulus);
        let q = self.modulus as u128;
        let mut a = [[0u64; 3]; 3];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = 0u128;
                for k in 0..3 {
                    acc = (acc + self.a[i][k] as u128 * other.a[k][j] as u128) % q;
                }
                *cell = acc as u64;
            }
        }
        Mat3Mod {
            a,
            modulus: self.modulus,
        }
    }

    pub fn pow(&self, n: u64) -> Mat3Mod {
        let mut result = Mat3Mod::identity(self.modulus).expect("modulus already validated");
        if n == 0 {
            return result;
        }
        for bit in (0..64 - n.leading_zeros()).rev() {
            result = result.mul(&result);
            if (n >> bit) & 1 == 1 {
                result = result.mul(self);
            }
        }
        result
    }
}

fn check_modulus(modulus: u64) -> Result<()> {
    if modulus < 2 {
        Err(Error::InvalidModulus(modulus))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::Preset;

    fn trib_q() -> Mat3 {
        Mat3::companion(&Preset::Tribonacci.params())
    }

    #[test]
    fn companion_matrices() {
        assert_eq!(trib_q(), Mat3::from_rows([[1, 1, 1], [1, 0, 0], [0, 1, 0]]));
        assert_eq!(
            Mat3::companion(&Preset::Narayana(4).params()),
            Mat3::from_rows([[4, 0, 1], [1, 0, 0], [0, 1, 0]])
        );
        assert_eq!(
            Mat3::companion(&Preset::Padovan.params()),
            Mat3::from_rows([[0, 1, 1], [1, 0, 0], [0, 1, 0]])
        );
    }

    #[test]
    fn products() {
        let x = Mat3::from_rows([[3, -1, 4], [1, 5, -9], [2, 6, 5]]);
        assert_eq!(&Mat3::identity() * &x, x);
        assert_eq!(&x * &Mat3::zero(), Mat3::zero());
        let q2 = Mat3::from_rows([[2, 2, 1], [1, 1, 1], [1, 0, 0]]);
        assert_eq!(&trib_q() * &trib_q(), q2);
    }

    #[test]
    fn powers() {
        let x = Mat3::from_rows([[3, -1, 4], [1, 5, -9], [2, 6, 5]]);
        assert_eq!(x.pow(0), Mat3::identity());
        assert_eq!(x.pow(1), x);
        assert_eq!(trib_q().pow(2), &trib_q() * &trib_q());
        assert_eq!(trib_q().pow(5), Mat3::from_rows([[13, 11, 7], [7, 6, 4], [4, 3, 2]]));
        let mut naive = Mat3::identity();
        for n in 0..20 {
            assert_eq!(x.pow(n), naive, "n = {n}");
            naive = &naive * &x;
        }
    }

    #[test]
    fn modular_powers() {
        let x = Mat3::from_rows([[3, -1, 4], [1, 5, -9], [2, 6, 5]]);
        assert_eq!(x.pow_mod(0, 7).unwrap(), Mat3Mod::identity(7).unwrap());
        assert_eq!(
            trib_q().pow_mod(5, 5).unwrap().a,
            [[3, 1, 2], [2, 1, 4], [4, 3, 2]]
        );
        for n in [1u64, 2, 7, 31] {
            let exact = Mat3Mod::reduce(&x.pow(n), 1_000_000_007).unwrap();
            assert_eq!(x.pow_mod(n, 1_000_000_007).unwrap(), exact);
        }
        assert_eq!(x.pow_mod(3, 1), Err(Error::InvalidModulus(1)));
        assert_eq!(x.pow_mod(3, 0), Err(Error::InvalidModulus(0)));
    }

    #[test]
    fn residues_are_normalized() {
        let m = Mat3::from_rows([[-1, -7, 8], [0, 13, -14], [6, 7, -8]]);
        let r = Mat3Mod::reduce(&m, 7).unwrap();
        assert_eq!(r.a, [[6, 0, 1], [0, 6, 0], [6, 0, 6]]);
    }

    #[test]
    fn modular_term_matches_linear_walk() {
        let trib = Preset::Tribonacci.params();
        let q = 998_244_353;
        let n = 1_000_000;
        assert_eq!(
            term_by_matrix_mod(&trib, n, q).unwrap(),
            trib.term_mod(n, q).unwrap()
        );
        // (2,0) entry of Q^n is T(n)
        let m = trib_q().pow_mod(n, q).unwrap();
        assert_eq!(m.a[2][0], trib.term_mod(n, q).unwrap());
    }

    #[test]
    fn u_form_examples() {
        let one = BigInt::one();
        assert_eq!(
            Mat3::u_form(&one, &one, &one, 2).unwrap(),
            Mat3::from_rows([[2, 2, 1], [1, 1, 1], [1, 0, 0]])
        );
        for k in [1i64, 2, 5, -3] {
            let kk = BigInt::from(k);
            assert_eq!(
                Mat3::u_form(&kk, &BigInt::zero(), &one, 2).unwrap(),
                Mat3::from_rows([[k * k, 1, k], [k, 0, 1], [1, 0, 0]])
            );
        }
        let pad = Preset::Padovan.params();
        assert_eq!(
            Mat3::u_form(&pad.r, &pad.s, &pad.t, 3).unwrap(),
            Mat3::companion(&pad).pow(3)
        );
        assert_eq!(
            Mat3::u_form(&one, &one, &one, 1),
            Err(Error::IndexTooSmall { n: 1, min: 2 })
        );
    }

    #[test]
    fn shifted_forms() {
        let trib = Preset::Tribonacci.params();
        assert_eq!(
            Mat3::v_shift(&trib, 0),
            Mat3::from_rows([[2, 2, 1], [1, 1, 1], [1, 0, 0]])
        );
        assert_eq!(
            Mat3::v_shift(&Preset::Padovan.params(), 1),
            Mat3::from_rows([[1, 2, 1], [1, 1, 1], [1, 1, 0]])
        );
        assert_eq!(Mat3::st_form(&trib, 0), Mat3::v_shift(&trib, 0));
        let p = SequenceParams::new(0, 0, 1, 1, 0, 2);
        assert_eq!(
            Mat3::st_form(&p, 0),
            Mat3::from_rows([[1, 2, 2], [1, 0, 2], [1, 0, 0]])
        );
    }

    #[test]
    fn determinants() {
        assert_eq!(Mat3::identity().det(), BigInt::one());
        let p = SequenceParams::new(0, 0, 0, 4, -2, 7);
        assert_eq!(Mat3::companion(&p).det(), BigInt::from(7));
        let one = BigInt::one();
        for n in 2..=10 {
            assert_eq!(Mat3::u_form(&one, &one, &one, n).unwrap().det(), one);
        }
    }

    #[test]
    fn matrix_terms() {
        let trib = Preset::Tribonacci.params();
        assert_eq!(term_by_matrix(&trib, 7), BigInt::from(13));
        let p = SequenceParams::new(1, 2, 3, 2, 1, 1);
        assert_eq!(term_by_matrix(&p, 0), BigInt::from(1));
        assert_eq!(term_by_matrix(&p, 50), p.term(50));
    }
}
