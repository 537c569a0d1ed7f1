//! Exact Laurent polynomials in one formal variable with arbitrary-precision
//! integer coefficients.
//!
//! This is the value type for every invariant in the crate: the Kauffman
//! bracket (variable `A`) and the Jones polynomial (variable `q`) are both
//! `LaurentPoly` values; only the letter used for rendering differs.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Dense Laurent polynomial: `coeffs[i]` is the coefficient of
/// `x^(min_exp + i)`.
///
/// Canonical form: the zero polynomial is `(min_exp = 0, coeffs = [])`; a
/// non-zero polynomial has non-zero first and last coefficients. All
/// constructors canonicalize, so equality is plain structural equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    min_exp: i64,
    coeffs: Vec<BigInt>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct LaurentParseError {
    pub pos: usize,
    pub msg: String,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { min_exp: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        LaurentPoly { min_exp: 0, coeffs: vec![BigInt::one()] }
    }

    /// `c * x^e`.
    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        Self::new(exp, vec![coeff.into()])
    }

    /// Builds from a dense coefficient run starting at `min_exp`,
    /// trimming zero padding on both ends.
    pub fn new(min_exp: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { min_exp, coeffs };
        p.canonicalize();
        p
    }

    /// Builds from sparse `(exponent, coefficient)` terms; repeated
    /// exponents are summed.
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize + 1];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += *c;
        }
        Self::new(lo, coeffs)
    }

    fn canonicalize(&mut self) {
        let head = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if head == self.coeffs.len() {
            self.min_exp = 0;
            self.coeffs.clear();
            return;
        }
        let tail = self.coeffs.iter().rev().take_while(|c| c.is_zero()).count();
        self.coeffs.truncate(self.coeffs.len() - tail);
        if head > 0 {
            self.coeffs.drain(..head);
            self.min_exp += head as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.min_exp == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Exponent of the highest term; equals `min_exp` for the zero polynomial.
    pub fn max_exp(&self) -> i64 {
        self.min_exp + self.coeffs.len().saturating_sub(1) as i64
    }

    /// `max_exp - min_exp`; 0 for monomials and for the zero polynomial.
    pub fn span(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.max_exp() - self.min_exp
        }
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        if exp < self.min_exp {
            return BigInt::zero();
        }
        let i = (exp - self.min_exp) as usize;
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    /// Multiplies by `x^delta`.
    pub fn shifted(&self, delta: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { min_exp: self.min_exp + delta, coeffs: self.coeffs.clone() }
    }

    /// Multiplies every coefficient by `k`.
    pub fn scaled(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// `x -> x^{-1}`: negates every exponent.
    pub fn substitute_inverse(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly { min_exp: -self.max_exp(), coeffs }
    }

    /// Sum of all coefficients (the value at `x = 1`).
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.max_exp().max(other.max_exp());
        let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize + 1];
        for (e, c) in self.terms() {
            coeffs[(e - lo) as usize] += c;
        }
        for (e, c) in other.terms() {
            coeffs[(e - lo) as usize] += c;
        }
        Self::new(lo, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::new(self.min_exp + other.min_exp, coeffs)
    }

    /// Exact division: returns `self / divisor` when the quotient is again an
    /// integer Laurent polynomial, `None` otherwise.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dn = divisor.coeffs.len();
        if self.coeffs.len() < dn {
            return None;
        }
        let lead = &divisor.coeffs[dn - 1];
        let mut rem = self.coeffs.clone();
        let qn = rem.len() - dn + 1;
        let mut quot = vec![BigInt::zero(); qn];
        for k in (0..qn).rev() {
            let top = std::mem::take(&mut rem[k + dn - 1]);
            if top.is_zero() {
                continue;
            }
            if (&top % lead) != BigInt::zero() {
                return None;
            }
            let q = &top / lead;
            for (i, d) in divisor.coeffs.iter().enumerate().take(dn - 1) {
                rem[k + i] -= &q * d;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.min_exp - divisor.min_exp, quot))
    }

    /// Total order used for canonical representatives: lexicographic on
    /// `(min_exp, coefficient sequence)`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.min_exp
            .cmp(&other.min_exp)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// Machine text form `min_exp:c0,c1,...`; the zero polynomial renders
    /// as `0:`.
    pub fn render_machine(&self) -> String {
        let body: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{}:{}", self.min_exp, body.join(","))
    }

    /// Human-readable form, terms sorted by ascending exponent, e.g.
    /// `q^-2 + 2 - q^4`.
    pub fn render(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coeff = !mag.is_one() || e == 0;
            if show_coeff {
                out.push_str(&mag.to_string());
            }
            if e != 0 {
                if show_coeff {
                    out.push('*');
                }
                out.push(var);
                if e != 1 {
                    out.push('^');
                    out.push_str(&e.to_string());
                }
            }
        }
        out
    }

    /// Parses either the machine form (`min_exp:c0,c1,...`) or the human
    /// form (`q^2 + q^6 - q^8`). The variable letter of the human form is
    /// whatever single letter the input uses, consistently.
    pub fn parse(text: &str) -> Result<Self, LaurentParseError> {
        if text.contains(':') {
            Self::parse_machine(text)
        } else {
            Self::parse_human(text, None)
        }
    }

    /// Human-form parser with a fixed variable letter.
    pub fn parse_with_var(text: &str, var: char) -> Result<Self, LaurentParseError> {
        Self::parse_human(text, Some(var))
    }

    pub fn parse_machine(text: &str) -> Result<Self, LaurentParseError> {
        let colon = text.find(':').ok_or_else(|| LaurentParseError {
            pos: text.len(),
            msg: "expected ':' separating min_exp from coefficients".into(),
        })?;
        let head = text[..colon].trim();
        let min_exp: i64 = head.parse().map_err(|_| LaurentParseError {
            pos: 0,
            msg: format!("bad minimum exponent {head:?}"),
        })?;
        let tail = text[colon + 1..].trim();
        let mut coeffs = Vec::new();
        if !tail.is_empty() {
            let mut pos = colon + 1;
            for part in tail.split(',') {
                let c = part.trim().parse::<BigInt>().map_err(|_| LaurentParseError {
                    pos,
                    msg: format!("bad coefficient {:?}", part.trim()),
                })?;
                coeffs.push(c);
                pos += part.len() + 1;
            }
        }
        Ok(Self::new(min_exp, coeffs))
    }

    fn parse_human(text: &str, var: Option<char>) -> Result<Self, LaurentParseError> {
        let bytes = text.as_bytes();
        let n = bytes.len();
        let mut i = 0usize;
        let mut var = var;
        let mut terms: Vec<(i64, BigInt)> = Vec::new();
        let skip_ws = |i: &mut usize| {
            while *i < n && bytes[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        skip_ws(&mut i);
        if i == n {
            return Err(LaurentParseError { pos: i, msg: "empty input".into() });
        }
        let mut first = true;
        while i < n {
            // sign
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
                skip_ws(&mut i);
            } else if !first {
                return Err(LaurentParseError {
                    pos: i,
                    msg: "expected '+' or '-' between terms".into(),
                });
            }
            first = false;
            if i == n {
                return Err(LaurentParseError { pos: i, msg: "dangling sign".into() });
            }
            // optional integer coefficient
            let mut coeff: Option<BigInt> = None;
            if bytes[i].is_ascii_digit() {
                let start = i;
                while i < n && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let c: BigInt = text[start..i].parse().unwrap();
                coeff = Some(c);
                skip_ws(&mut i);
                if i < n && bytes[i] == b'*' {
                    i += 1;
                    skip_ws(&mut i);
                }
            }
            // optional variable with exponent
            let mut exp = 0i64;
            let mut saw_var = false;
            if i < n && bytes[i].is_ascii_alphabetic() {
                let v = bytes[i] as char;
                match var {
                    None => var = Some(v),
                    Some(expect) if expect != v => {
                        return Err(LaurentParseError {
                            pos: i,
                            msg: format!("unexpected variable {v:?} (expected {expect:?})"),
                        })
                    }
                    _ => {}
                }
                saw_var = true;
                exp = 1;
                i += 1;
                skip_ws(&mut i);
                if i < n && bytes[i] == b'^' {
                    i += 1;
                    skip_ws(&mut i);
                    let start = i;
                    if i < n && (bytes[i] == b'-' || bytes[i] == b'+') {
                        i += 1;
                    }
                    while i < n && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = text[start..i].parse().map_err(|_| LaurentParseError {
                        pos: start,
                        msg: "bad exponent".into(),
                    })?;
                }
            }
            if coeff.is_none() && !saw_var {
                return Err(LaurentParseError {
                    pos: i,
                    msg: "expected coefficient or variable".into(),
                });
            }
            let c = coeff.unwrap_or_else(BigInt::one) * sign;
            terms.push((exp, c));
            skip_ws(&mut i);
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize + 1];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Ok(Self::new(lo, coeffs))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render('q'))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.render('q'))
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render_machine())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        LaurentPoly::parse_machine(&s).map_err(D::Error::custom)
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}
