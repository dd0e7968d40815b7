//! Exact Laurent polynomials in `v` and `z` with arbitrary-precision integer
//! coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by `(v_exp, z_exp)` with zero
//! coefficients never stored, so structural equality is polynomial equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("cannot parse polynomial at byte {pos}: {reason}")]
    Parse { pos: usize, reason: String },
}

/// A signed monomial `coeff * v^v * z^z` with `coeff = ±1`; skein-tree edge
/// labels and path products live here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: i8,
    pub v: i32,
    pub z: i32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { coeff: 1, v: 0, z: 0 };
    /// `v^2`: positive parent to its switched child.
    pub const V2: Monomial = Monomial { coeff: 1, v: 2, z: 0 };
    /// `v z`: positive parent to its smoothed child.
    pub const VZ: Monomial = Monomial { coeff: 1, v: 1, z: 1 };
    /// `v^-2`: negative parent to its switched child.
    pub const V_INV2: Monomial = Monomial { coeff: 1, v: -2, z: 0 };
    /// `-v^-1 z`: negative parent to its smoothed child.
    pub const NEG_V_INV_Z: Monomial = Monomial { coeff: -1, v: -1, z: 1 };

    pub fn to_poly(self) -> LaurentPoly2 {
        LaurentPoly2::monomial(self.v, self.z, BigInt::from(self.coeff))
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial { coeff: self.coeff * rhs.coeff, v: self.v + rhs.v, z: self.z + rhs.z }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i32, i32), BigInt>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, BigInt::one())
    }

    pub fn monomial(v: i32, z: i32, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(v, z, coeff.into());
        p
    }

    /// The unlink factor `(v^-1 - v) / z`.
    pub fn delta() -> Self {
        let mut p = Self::zero();
        p.add_term(-1, -1, BigInt::one());
        p.add_term(1, -1, -BigInt::one());
        p
    }

    pub fn delta_power(k: u32) -> Self {
        Self::delta().pow(k)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((i32, i32), C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for ((v, z), c) in terms {
            p.add_term(v, z, c.into());
        }
        p
    }

    pub fn add_term(&mut self, v: i32, z: i32, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry((v, z)).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&(v, z));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending `(v, z)` order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i32, &BigInt)> {
        self.terms.iter().map(|(&(v, z), c)| (v, z, c))
    }

    pub fn coefficient(&self, v: i32, z: i32) -> BigInt {
        self.terms.get(&(v, z)).cloned().unwrap_or_default()
    }

    pub fn mono_mul(&self, v: i32, z: i32, coeff: &BigInt) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(&(a, b), c)| ((a + v, b + z), c * coeff)).collect();
        Self { terms }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(a, b), c)| ((a + m.v, b + m.z), if m.coeff < 0 { -c } else { c.clone() }))
            .collect();
        Self { terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn min_deg_v(&self) -> Result<i32, PolyError> {
        self.terms.keys().map(|&(v, _)| v).min().ok_or(PolyError::ZeroPolynomial)
    }

    pub fn max_deg_v(&self) -> Result<i32, PolyError> {
        self.terms.keys().map(|&(v, _)| v).max().ok_or(PolyError::ZeroPolynomial)
    }

    pub fn max_deg_z(&self) -> Result<i32, PolyError> {
        self.terms.keys().map(|&(_, z)| z).max().ok_or(PolyError::ZeroPolynomial)
    }

    /// Coefficient of `z^max_deg_z` as a polynomial in `v`.
    pub fn highest_z_term(&self) -> Result<LaurentPoly1, PolyError> {
        let top = self.max_deg_z()?;
        Ok(LaurentPoly1::from_terms(
            self.terms.iter().filter(|(&(_, z), _)| z == top).map(|(&(v, _), c)| (v, c.clone())),
        ))
    }

    /// The polynomial of the mirror image: `v -> v^-1`, `z -> -z`.
    pub fn mirror(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(v, z), c)| ((-v, z), if z.rem_euclid(2) == 1 { -c } else { c.clone() }))
            .collect();
        Self { terms }
    }

    /// Substitute `v -> v^-1` only, leaving `z` untouched.
    pub fn invert_v(&self) -> Self {
        let terms = self.terms.iter().map(|(&(v, z), c)| ((-v, z), c.clone())).collect();
        Self { terms }
    }
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        for (&(v, z), c) in &rhs.terms {
            out.add_term(v, z, c.clone());
        }
        out
    }
}

impl Add for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(mut self, rhs: LaurentPoly2) -> LaurentPoly2 {
        for ((v, z), c) in rhs.terms {
            self.add_term(v, z, c);
        }
        self
    }
}

impl Sub for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        for (&(v, z), c) in &rhs.terms {
            out.add_term(v, z, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        LaurentPoly2 { terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }
}

impl Mul for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = LaurentPoly2::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }
}

impl std::iter::Sum for LaurentPoly2 {
    fn sum<I: Iterator<Item = LaurentPoly2>>(iter: I) -> Self {
        iter.fold(LaurentPoly2::zero(), |acc, p| acc + p)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, first: bool, coeff: &BigInt, vars: &[(&str, i32)]) -> fmt::Result {
    let negative = coeff.is_negative();
    if first {
        if negative {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if negative { " - " } else { " + " })?;
    }
    let mag = coeff.abs();
    let factors: Vec<String> = vars
        .iter()
        .filter(|(_, e)| *e != 0)
        .map(|(name, e)| if *e == 1 { name.to_string() } else { format!("{name}^{e}") })
        .collect();
    if factors.is_empty() {
        write!(f, "{mag}")
    } else if mag.is_one() {
        f.write_str(&factors.join("*"))
    } else {
        write!(f, "{mag}*{}", factors.join("*"))
    }
}

/// Sorted by ascending `z` exponent, then descending `v` exponent:
/// `-v^4 + 2*v^2 + v^2*z^2`.
impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(v, z)| (z, std::cmp::Reverse(v)));
        for (i, (v, z)) in keys.into_iter().enumerate() {
            write_monomial(f, i == 0, &self.terms[&(v, z)], &[("v", v), ("z", z)])?;
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly2 {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

impl Serialize for LaurentPoly2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// expr   := ['+'|'-'] term (('+'|'-') term)*
// term   := factor ('*' factor)*
// factor := atom ['^' int]
// atom   := integer | 'v' | 'z' | '(' expr ')'
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, reason: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, reason: reason.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPoly2, PolyError> {
        let mut acc = LaurentPoly2::zero();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { acc + t };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly2, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPoly2, PolyError> {
        let (base, invertible) = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let exp = self.exponent()?;
        if exp >= 0 {
            return Ok(base.pow(exp as u32));
        }
        match invertible {
            Some((v, z)) => Ok(LaurentPoly2::monomial(v * exp, z * exp, 1)),
            None => Err(self.err("negative exponent on a non-monomial")),
        }
    }

    fn exponent(&mut self) -> Result<i32, PolyError> {
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        let n = self.integer()?.to_i32().ok_or_else(|| self.err("exponent out of range"))?;
        if paren {
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
        }
        Ok(if neg { -n } else { n })
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    /// Returns the atom and, for bare variables, the unit exponent pair so a
    /// negative power can be formed.
    fn atom(&mut self) -> Result<(LaurentPoly2, Option<(i32, i32)>), PolyError> {
        match self.peek() {
            Some(b'v') => {
                self.pos += 1;
                Ok((LaurentPoly2::monomial(1, 0, 1), Some((1, 0))))
            }
            Some(b'z') => {
                self.pos += 1;
                Ok((LaurentPoly2::monomial(0, 1, 1), Some((0, 1))))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok((inner, None))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok((LaurentPoly2::monomial(0, 0, n), None))
            }
            _ => Err(self.err("expected integer, 'v', 'z' or '('")),
        }
    }
}

/// Laurent polynomial in `v` alone; houses the top-`z` coefficient `h_L(v)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly1 {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentPoly1 {
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::default();
        for (v, c) in terms {
            let c = c.into();
            if c.is_zero() {
                continue;
            }
            let slot = out.terms.entry(v).or_insert_with(BigInt::zero);
            *slot += c;
            if slot.is_zero() {
                out.terms.remove(&v);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, v: i32) -> BigInt {
        self.terms.get(&v).cloned().unwrap_or_default()
    }

    pub fn min_deg(&self) -> Result<i32, PolyError> {
        self.terms.keys().next().copied().ok_or(PolyError::ZeroPolynomial)
    }

    pub fn max_deg(&self) -> Result<i32, PolyError> {
        self.terms.keys().next_back().copied().ok_or(PolyError::ZeroPolynomial)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.terms.iter().map(|(&v, c)| (v, c))
    }
}

/// Descending `v` exponent: `-v^2 - 1`.
impl fmt::Display for LaurentPoly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&v, c)) in self.terms.iter().rev().enumerate() {
            write_monomial(f, i == 0, c, &[("v", v)])?;
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly1 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly2 {
        s.parse().unwrap()
    }

    #[test]
    fn delta_powers() {
        assert_eq!(LaurentPoly2::delta_power(0), LaurentPoly2::one());
        assert_eq!(LaurentPoly2::delta_power(1).to_string(), "-v*z^-1 + v^-1*z^-1");
        assert_eq!(
            LaurentPoly2::delta_power(1),
            LaurentPoly2::from_terms([((-1, -1), 1), ((1, -1), -1)])
        );
    }

    #[test]
    fn delta_times_z_cancels() {
        let z = LaurentPoly2::monomial(0, 1, 1);
        assert_eq!(&LaurentPoly2::delta() * &z, p("v^-1 - v"));
    }

    #[test]
    fn display_order() {
        let t = LaurentPoly2::from_terms([((2, 0), 2), ((4, 0), -1), ((2, 2), 1)]);
        assert_eq!(t.to_string(), "-v^4 + 2*v^2 + v^2*z^2");
        assert_eq!(LaurentPoly2::zero().to_string(), "0");
        assert_eq!(LaurentPoly2::one().to_string(), "1");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(p("-v^4 + 2*v^2 + v^2*z^2"), LaurentPoly2::from_terms([((2, 0), 2), ((4, 0), -1), ((2, 2), 1)]));
        assert_eq!(p("(2*v^2-v^4)+ v^2*z^2"), p("-v^4 + 2*v^2 + v^2*z^2"));
        assert_eq!(p("v^(-2) - 1 + v^2 - z^2"), p("v^-2 - 1 + v^2 - z^2"));
        assert_eq!(p("(v - v^3)*z^-1 + v*z"), p("v*z^-1 - v^3*z^-1 + v*z"));
        assert_eq!(p("0"), LaurentPoly2::zero());
        assert!("v^".parse::<LaurentPoly2>().is_err());
        assert!("(v+1)^-1".parse::<LaurentPoly2>().is_err());
        assert!("v z".parse::<LaurentPoly2>().is_err());
    }

    #[test]
    fn degrees() {
        let one = LaurentPoly2::one();
        assert_eq!(one.min_deg_v(), Ok(0));
        assert_eq!(one.max_deg_z(), Ok(0));
        assert_eq!(one.highest_z_term().unwrap().to_string(), "1");

        let trefoil = p("-v^4 + 2*v^2 + v^2*z^2");
        assert_eq!(trefoil.min_deg_v(), Ok(2));
        assert_eq!(trefoil.max_deg_z(), Ok(2));
        assert_eq!(trefoil.highest_z_term().unwrap(), LaurentPoly1::from_terms([(2, 1)]));

        let delta = LaurentPoly2::delta();
        assert_eq!(delta.min_deg_v(), Ok(-1));
        assert_eq!(delta.max_deg_z(), Ok(-1));
        assert_eq!(delta.highest_z_term().unwrap().to_string(), "-v + v^-1");

        let zero = LaurentPoly2::zero();
        assert_eq!(zero.min_deg_v(), Err(PolyError::ZeroPolynomial));
        assert_eq!(zero.max_deg_z(), Err(PolyError::ZeroPolynomial));
        assert!(zero.highest_z_term().is_err());
        assert_eq!(trefoil.coefficient(2, 2), BigInt::one());
        assert_eq!(trefoil.coefficient(3, 2), BigInt::zero());
    }

    #[test]
    fn mirror_flips_odd_z_terms() {
        let hopf_pos = p("v*z^-1 - v^3*z^-1 + v*z");
        let hopf_neg = p("v^-3*z^-1 - v^-1*z^-1 - v^-1*z");
        assert_eq!(hopf_pos.mirror(), hopf_neg);
        let trefoil = p("-v^4 + 2*v^2 + v^2*z^2");
        assert_eq!(trefoil.mirror(), trefoil.invert_v());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly2> {
        prop::collection::vec(((-4i32..4, -3i32..3), -5i64..5), 0..6).prop_map(LaurentPoly2::from_terms)
    }

    proptest! {
        #[test]
        fn text_round_trip(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly2>().unwrap(), a);
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(a.mirror().mirror(), a.clone());
        }
    }
}
