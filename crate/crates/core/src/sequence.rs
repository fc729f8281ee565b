//! Exact definition of the sequence and forward iteration.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The six integers `(V0, V1, V2; r, s, t)` that pin down one sequence.
///
/// Nothing is required of the values at construction; operations that need
/// `t != 0` or a positive discriminant check it themselves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SequenceParams {
    #[serde(with = "bigint_str")]
    pub v0: BigInt,
    #[serde(with = "bigint_str")]
    pub v1: BigInt,
    #[serde(with = "bigint_str")]
    pub v2: BigInt,
    #[serde(with = "bigint_str")]
    pub r: BigInt,
    #[serde(with = "bigint_str")]
    pub s: BigInt,
    #[serde(with = "bigint_str")]
    pub t: BigInt,
}

impl SequenceParams {
    pub fn new(
        v0: impl Into<BigInt>,
        v1: impl Into<BigInt>,
        v2: impl Into<BigInt>,
        r: impl Into<BigInt>,
        s: impl Into<BigInt>,
        t: impl Into<BigInt>,
    ) -> Self {
        Self {
            v0: v0.into(),
            v1: v1.into(),
            v2: v2.into(),
            r: r.into(),
            s: s.into(),
            t: t.into(),
        }
    }

    /// The fundamental sequence `U` sharing this recurrence: seeds `(0, 0, 1)`.
    pub fn fundamental(&self) -> Self {
        Self::fundamental_of(self.r.clone(), self.s.clone(), self.t.clone())
    }

    pub fn fundamental_of(r: impl Into<BigInt>, s: impl Into<BigInt>, t: impl Into<BigInt>) -> Self {
        Self::new(0, 0, 1, r, s, t)
    }

    pub fn is_zero_sequence(&self) -> bool {
        self.v0.is_zero() && self.v1.is_zero() && self.v2.is_zero()
    }

    /// One step of the recurrence given `(V(n-3), V(n-2), V(n-1))`.
    fn step(&self, a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
        &self.r * c + &self.s * b + &self.t * a
    }

    /// `V(n)` by forward iteration, `O(n)` multiplications.
    pub fn term(&self, n: u64) -> BigInt {
        match n {
            0 => return self.v0.clone(),
            1 => return self.v1.clone(),
            2 => return self.v2.clone(),
            _ => {}
        }
        let (mut a, mut b, mut c) = (self.v0.clone(), self.v1.clone(), self.v2.clone());
        for _ in 3..=n {
            let next = self.step(&a, &b, &c);
            a = std::mem::replace(&mut b, std::mem::replace(&mut c, next));
        }
        c
    }

    /// The first `count` terms `V(0), ..., V(count - 1)`.
    pub fn prefix(&self, count: usize) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(count);
        for (i, seed) in [&self.v0, &self.v1, &self.v2].into_iter().enumerate() {
            if i < count {
                out.push(seed.clone());
            }
        }
        while out.len() < count {
            let k = out.len();
            let next = self.step(&out[k - 3], &out[k - 2], &out[k - 1]);
            out.push(next);
        }
        out
    }

    /// `[V(lo), ..., V(hi)]`, inclusive on both ends.
    pub fn terms_range(&self, lo: u64, hi: u64) -> Result<Vec<BigInt>> {
        if lo > hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        let count = usize::try_from(hi - lo + 1).map_err(|_| Error::InvalidRange { lo, hi })?;
        let mut out = Vec::with_capacity(count);
        let [mut a, mut b, mut c] = self.window(lo);
        for _ in 0..count {
            let next = self.step(&a, &b, &c);
            out.push(a);
            a = std::mem::replace(&mut b, std::mem::replace(&mut c, next));
        }
        Ok(out)
    }

    /// `(V(n), V(n+1), V(n+2))`.
    pub fn window(&self, n: u64) -> [BigInt; 3] {
        let [mut a, mut b, mut c] = [self.v0.clone(), self.v1.clone(), self.v2.clone()];
        for _ in 0..n {
            let next = self.step(&a, &b, &c);
            a = std::mem::replace(&mut b, std::mem::replace(&mut c, next));
        }
        [a, b, c]
    }

    /// `V(n) mod modulus` by forward iteration over residues.
    ///
    /// This walks the recurrence directly and never touches the matrix code,
    /// so it serves as the linear-time reference for modular matrix powers.
    pub fn term_mod(&self, n: u64, modulus: u64) -> Result<u64> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        let m = modulus as u128;
        let red = |x: &BigInt| -> u128 {
            let r = x.mod_floor(&BigInt::from(modulus));
            u64::try_from(r).expect("residue fits in u64") as u128
        };
        let (r, s, t) = (red(&self.r), red(&self.s), red(&self.t));
        let seeds = [red(&self.v0), red(&self.v1), red(&self.v2)];
        if n < 3 {
            return Ok(seeds[n as usize] as u64);
        }
        let [mut a, mut b, mut c] = seeds;
        for _ in 3..=n {
            let next = (r * c % m + s * b % m + t * a % m) % m;
            a = b;
            b = c;
            c = next;
        }
        Ok(c as u64)
    }

    /// The seed constant `g(0)` of the determinant identity: the cubic form
    /// [`cassini_form`] evaluated on `V0..V4`.
    pub fn cassini_seed(&self) -> BigInt {
        let v = self.prefix(5);
        cassini_form(&v[0], &v[1], &v[2], &v[3], &v[4])
    }
}

impl fmt::Display for SequenceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{};{},{},{})",
            self.v0, self.v1, self.v2, self.r, self.s, self.t
        )
    }
}

/// The cubic form `w2^3 + w1^2 w4 + w0 w3^2 - w2 (2 w1 w3 + w0 w4)` on five
/// consecutive terms.
///
/// For the fundamental sequence at `w = U(n-2..=n+2)` this is the determinant
/// of the `U`-form of `M^n` and equals `t^(n-2)`; for a general sequence at
/// `w = V(n..=n+4)` it equals `t^n g(0)`.
pub fn cassini_form(w0: &BigInt, w1: &BigInt, w2: &BigInt, w3: &BigInt, w4: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    w2 * w2 * w2 + w1 * w1 * w4 + w0 * w3 * w3 - w2 * (&two * w1 * w3 + w0 * w4)
}

/// `base^exp` for a nonnegative exponent, with `0^0 = 1`.
pub fn int_pow(base: &BigInt, exp: u64) -> BigInt {
    let mut result = BigInt::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}

/// Named members of the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    Tribonacci,
    Padovan,
    /// `k`-Narayana: `b(n) = k b(n-1) + b(n-3)`.
    Narayana(i64),
}

impl Preset {
    pub fn params(&self) -> SequenceParams {
        match self {
            Preset::Tribonacci => SequenceParams::new(0, 0, 1, 1, 1, 1),
            Preset::Padovan => SequenceParams::new(0, 1, 0, 0, 1, 1),
            Preset::Narayana(k) => SequenceParams::new(0, 0, 1, *k, 0, 1),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// Accepts `tribonacci`, `padovan` and `narayana:<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "tribonacci" => Ok(Preset::Tribonacci),
            "padovan" => Ok(Preset::Padovan),
            other => other
                .strip_prefix("narayana:")
                .and_then(|k| k.parse::<i64>().ok())
                .map(Preset::Narayana)
                .ok_or_else(|| Error::UnknownPreset(s.to_string())),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Tribonacci => f.write_str("tribonacci"),
            Preset::Padovan => f.write_str("padovan"),
            Preset::Narayana(k) => write!(f, "narayana:{k}"),
        }
    }
}

/// Serializes a `BigInt` as its decimal string so JSON stays lossless.
pub mod bigint_str {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn presets_match_their_parameters() {
        assert_eq!(Preset::Tribonacci.params(), SequenceParams::new(0, 0, 1, 1, 1, 1));
        assert_eq!(Preset::Padovan.params(), SequenceParams::new(0, 1, 0, 0, 1, 1));
        assert_eq!(Preset::Narayana(2).params(), SequenceParams::new(0, 0, 1, 2, 0, 1));
        assert_eq!("narayana:3".parse::<Preset>().unwrap(), Preset::Narayana(3));
        assert_eq!("Tribonacci".parse::<Preset>().unwrap(), Preset::Tribonacci);
        assert!("fibonacci".parse::<Preset>().is_err());
        assert!("narayana:x".parse::<Preset>().is_err());
    }

    #[test]
    fn iterative_terms() {
        let trib = Preset::Tribonacci.params();
        assert_eq!(trib.term(2), BigInt::from(1));
        assert_eq!(trib.term(7), BigInt::from(13));
        assert_eq!(Preset::Padovan.params().term(8), BigInt::from(3));
        let p = SequenceParams::new(-4, 7, 2, 3, -1, 5);
        assert_eq!(p.term(0), BigInt::from(-4));
        assert_eq!(p.term(1), BigInt::from(7));
    }

    #[test]
    fn ranges() {
        let trib = Preset::Tribonacci.params();
        assert_eq!(trib.terms_range(0, 6).unwrap(), ints(&[0, 0, 1, 1, 2, 4, 7]));
        assert_eq!(trib.terms_range(9, 9).unwrap(), vec![trib.term(9)]);
        assert_eq!(
            Preset::Narayana(1).params().terms_range(0, 8).unwrap(),
            ints(&[0, 0, 1, 1, 1, 2, 3, 4, 6])
        );
        assert_eq!(trib.terms_range(4, 6).unwrap(), ints(&[2, 4, 7]));
        assert_eq!(trib.terms_range(5, 4), Err(Error::InvalidRange { lo: 5, hi: 4 }));
    }

    #[test]
    fn prefix_handles_short_lengths() {
        let p = SequenceParams::new(5, 6, 7, 1, 1, 1);
        assert!(p.prefix(0).is_empty());
        assert_eq!(p.prefix(2), ints(&[5, 6]));
        assert_eq!(p.prefix(4), ints(&[5, 6, 7, 18]));
    }

    #[test]
    fn cassini_seed_values() {
        assert_eq!(Preset::Tribonacci.params().cassini_seed(), BigInt::from(1));
        assert_eq!(SequenceParams::new(1, 1, 1, 1, 1, 1).cassini_seed(), BigInt::from(4));
        for (r, s, t) in [(2, 3, 5), (-4, 0, 1), (0, 0, 0), (5, -5, -3)] {
            assert_eq!(SequenceParams::fundamental_of(r, s, t).cassini_seed(), BigInt::from(1));
        }
    }

    #[test]
    fn modular_iteration_matches_exact() {
        let p = SequenceParams::new(-3, 8, 1, -2, 4, 3);
        for n in [0u64, 1, 2, 3, 10, 57] {
            let exact = p.term(n).mod_floor(&BigInt::from(1_000_003));
            assert_eq!(BigInt::from(p.term_mod(n, 1_000_003).unwrap()), exact);
        }
        assert_eq!(p.term_mod(4, 1), Err(Error::InvalidModulus(1)));
    }

    #[test]
    fn int_pow_edges() {
        assert_eq!(int_pow(&BigInt::from(0), 0), BigInt::from(1));
        assert_eq!(int_pow(&BigInt::from(0), 3), BigInt::from(0));
        assert_eq!(int_pow(&BigInt::from(-2), 5), BigInt::from(-32));
    }

    #[test]
    fn params_json_uses_strings() {
        let p = SequenceParams::new(1, -2, 3, 4, 5, -6);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"v0":"1","v1":"-2","v2":"3","r":"4","s":"5","t":"-6"}"#
        );
        let back: SequenceParams = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
