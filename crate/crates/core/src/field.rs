//! Exact field arithmetic over the rationals and prime fields GF(p).
//!
//! Every scalar in the crate is either an arbitrary-precision rational in
//! lowest terms or a residue in `[0, p)`. Arithmetic never rounds; absence
//! of a square root is a value, not an error.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient domain: the rationals or a prime field GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    PrimeField { p: u64 },
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// Builds the spec for GF(p), rejecting composite moduli.
    pub fn gf(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(FieldSpec::PrimeField { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::PrimeField { .. })
    }

    /// True unless the field is GF(2).
    pub fn char_ne_2(&self) -> bool {
        !matches!(self, FieldSpec::PrimeField { p: 2 })
    }

    /// Guard for operations whose hypotheses exclude characteristic 2.
    pub fn require_char_ne_2(&self) -> Result<()> {
        if self.char_ne_2() {
            Ok(())
        } else {
            Err(Error::CharacteristicTwo)
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_i64(*self, 0)
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_i64(*self, 1)
    }

    /// The nonzero elements of GF(p) in ascending residue order.
    pub fn all_nonzero_scalars(&self) -> Result<impl Iterator<Item = Scalar>> {
        match *self {
            FieldSpec::Rationals => Err(Error::InfiniteField),
            FieldSpec::PrimeField { p } => Ok((1..p).map(move |v| Scalar::Mod { value: v, p })),
        }
    }

    /// All elements of GF(p), zero first.
    pub fn all_scalars(&self) -> Result<impl Iterator<Item = Scalar>> {
        match *self {
            FieldSpec::Rationals => Err(Error::InfiniteField),
            FieldSpec::PrimeField { p } => Ok((0..p).map(move |v| Scalar::Mod { value: v, p })),
        }
    }
}

/// An element of an exact field. Rationals are kept in lowest terms with a
/// positive denominator (the `BigRational` invariant); residues are reduced
/// mod p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, p: u64 },
}

impl Scalar {
    pub fn spec(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Mod { p, .. } => FieldSpec::PrimeField { p: *p },
        }
    }

    pub fn from_i64(spec: FieldSpec, v: i64) -> Self {
        match spec {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField { p } => {
                let r = (v as i128).rem_euclid(p as i128) as u64;
                Scalar::Mod { value: r, p }
            }
        }
    }

    pub fn from_rational(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Rational(BigRational::new(
            BigInt::from(numer),
            BigInt::from(denom),
        )))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    fn check_same(&self, other: &Scalar) -> Result<()> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(Error::MixedField)
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: addmod(*a, *b, *p),
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: mulmod(*a, *b, *p),
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: powmod(*value, *p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.mul(&other.inv()?)
    }

    pub fn square(&self) -> Scalar {
        self.mul(self).expect("same field")
    }

    /// A square root in the field, if one exists. Over GF(p) the smaller of
    /// the two residues is returned; over the rationals the positive root.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    return Some(Scalar::Rational(BigRational::zero()));
                }
                if r.is_negative() {
                    return None;
                }
                let sn = r.numer().sqrt();
                let sd = r.denom().sqrt();
                if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
                    Some(Scalar::Rational(BigRational::new(sn, sd)))
                } else {
                    None
                }
            }
            Scalar::Mod { value, p } => {
                sqrt_mod(*value, *p).map(|v| Scalar::Mod { value: v, p: *p })
            }
        }
    }

    /// Renders `a/b` (plain `a` for integers) over the rationals, and the
    /// residue over GF(p); `parse` accepts the same forms plus a sign.
    pub fn parse(spec: FieldSpec, text: &str) -> Result<Scalar> {
        let s = text.trim();
        let bad = || Error::ParseScalar(text.to_string());
        let (numer_str, denom_str) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let numer: BigInt = numer_str.parse().map_err(|_| bad())?;
        let denom: BigInt = match denom_str {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match spec {
            FieldSpec::Rationals => Ok(Scalar::Rational(BigRational::new(numer, denom))),
            FieldSpec::PrimeField { p } => {
                let n = Scalar::Mod {
                    value: bigint_mod_u64(&numer, p),
                    p,
                };
                let d = Scalar::Mod {
                    value: bigint_mod_u64(&denom, p),
                    p,
                };
                n.div(&d)
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used for deterministic tie-breaking. Within one field it is
/// the numeric order (residue order over GF(p)); across fields the order is
/// arbitrary but fixed.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Mod { value: a, p: pa }, Scalar::Mod { value: b, p: pb }) => {
                pa.cmp(pb).then(a.cmp(b))
            }
            (Scalar::Rational(_), Scalar::Mod { .. }) => Ordering::Less,
            (Scalar::Mod { .. }, Scalar::Rational(_)) => Ordering::Greater,
        }
    }
}

fn bigint_mod_u64(n: &BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let m = n % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    m.to_u64().expect("reduced residue fits u64")
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Tonelli-Shanks square root mod an odd prime; the smaller root is
/// returned. GF(2) is handled directly (every element is its own square).
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a % 2);
    }
    // Euler's criterion.
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        powmod(a, (p + 1) / 4, p)
    } else {
        // Write p - 1 = q * 2^s with q odd.
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        // Any quadratic non-residue serves as the twiddle base.
        let mut z = 2;
        while powmod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = powmod(z, q, p);
        let mut t = powmod(a, q, p);
        let mut r = powmod(a, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mulmod(t2, t2, p);
                i += 1;
            }
            let b = powmod(c, 1 << (m - i - 1), p);
            m = i;
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            r = mulmod(r, b, p);
        }
        r
    };
    Some(root.min(p - root))
}

/// Deterministic Miller-Rabin for u64 moduli.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::gf(p).unwrap()
    }

    fn m(spec: FieldSpec, v: i64) -> Scalar {
        Scalar::from_i64(spec, v)
    }

    #[test]
    fn gf5_arithmetic() {
        let f = gf(5);
        assert_eq!(m(f, 3).add(&m(f, 4)).unwrap(), m(f, 2));
        assert_eq!(m(f, -1), m(f, 4));
        assert_eq!(m(f, 2).inv().unwrap(), m(f, 3));
    }

    #[test]
    fn rational_arithmetic() {
        let q = FieldSpec::Rationals;
        let half = Scalar::from_rational(1, 2).unwrap();
        let third = Scalar::from_rational(1, 3).unwrap();
        assert_eq!(half.add(&third).unwrap(), Scalar::from_rational(5, 6).unwrap());
        assert_eq!(
            Scalar::from_rational(-3, 4).unwrap().inv().unwrap(),
            Scalar::from_rational(-4, 3).unwrap()
        );
        assert!(q.zero().inv().is_err());
    }

    #[test]
    fn gf7_zero_has_no_inverse() {
        assert_eq!(m(gf(7), 0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mixed_field_rejected() {
        assert_eq!(m(gf(5), 1).add(&m(gf(7), 1)), Err(Error::MixedField));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(m(gf(5), 4).sqrt(), Some(m(gf(5), 2)));
        // -1 = 4 in GF(5), a residue since 5 = 1 mod 4.
        assert_eq!(m(gf(5), -1).sqrt(), Some(m(gf(5), 2)));
        // 2 is a non-residue mod 3.
        assert_eq!(m(gf(3), -1).sqrt(), None);
        assert_eq!(
            Scalar::from_rational(9, 4).unwrap().sqrt(),
            Some(Scalar::from_rational(3, 2).unwrap())
        );
        assert_eq!(Scalar::from_rational(2, 1).unwrap().sqrt(), None);
        assert_eq!(Scalar::from_rational(-4, 1).unwrap().sqrt(), None);
    }

    #[test]
    fn sqrt_count_is_half_plus_one() {
        // Exactly (p+1)/2 elements of GF(p) have a square root, 0 included.
        for p in [3u64, 5, 7, 11, 13, 17] {
            let f = gf(p);
            let n = f
                .all_scalars()
                .unwrap()
                .filter(|a| a.sqrt().is_some())
                .count() as u64;
            assert_eq!(n, p.div_ceil(2), "p={p}");
            for a in f.all_scalars().unwrap() {
                if let Some(s) = a.sqrt() {
                    assert_eq!(s.square(), a);
                }
            }
        }
    }

    #[test]
    fn nonzero_scalar_streams() {
        let got: Vec<_> = gf(3).all_nonzero_scalars().unwrap().collect();
        assert_eq!(got, vec![m(gf(3), 1), m(gf(3), 2)]);
        assert_eq!(gf(5).all_nonzero_scalars().unwrap().count(), 4);
        assert!(matches!(
            FieldSpec::Rationals.all_nonzero_scalars(),
            Err(Error::InfiniteField)
        ));
    }

    #[test]
    fn parse_round_trip() {
        let q = FieldSpec::Rationals;
        for s in ["5", "-7", "3/4", "-22/7"] {
            let v = Scalar::parse(q, s).unwrap();
            assert_eq!(Scalar::parse(q, &v.to_string()).unwrap(), v);
        }
        assert_eq!(Scalar::parse(gf(5), "-1").unwrap(), m(gf(5), 4));
        assert_eq!(Scalar::parse(gf(5), "7").unwrap(), m(gf(5), 2));
        assert!(Scalar::parse(gf(5), "x").is_err());
        assert_eq!(Scalar::parse(gf(5), "1/0"), Err(Error::DivisionByZero));
    }

    #[test]
    fn primality_guard() {
        assert!(FieldSpec::gf(2).is_ok());
        assert!(FieldSpec::gf(97).is_ok());
        assert_eq!(FieldSpec::gf(1), Err(Error::NotPrime(1)));
        assert_eq!(FieldSpec::gf(91), Err(Error::NotPrime(91)));
    }

    #[test]
    fn characteristic_two_guard() {
        assert!(gf(2).require_char_ne_2().is_err());
        assert!(gf(3).require_char_ne_2().is_ok());
        assert!(FieldSpec::Rationals.require_char_ne_2().is_ok());
    }
}
