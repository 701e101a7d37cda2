use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::{RegimeError, Result};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Q {
    Q::from(BigInt::from(v))
}

/// Extended rational: a finite value or the symbol infinity, with `1/inf = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Ext {
    Finite(Q),
    Infinity,
}

impl Ext {
    pub fn inv(&self) -> Q {
        match self {
            Ext::Finite(v) => Q::one() / v.clone(),
            Ext::Infinity => Q::zero(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Ext::Finite(v) => Some(v),
            Ext::Infinity => None,
        }
    }

    /// Parse "inf", an integer, a fraction "a/b", or a terminating decimal.
    pub fn parse(text: &str) -> Result<Ext> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Ext::Infinity);
        }
        Ok(Ext::Finite(parse_rational(t)?))
    }

    pub fn display(&self) -> String {
        match self {
            Ext::Finite(v) => format_q(v),
            Ext::Infinity => "inf".into(),
        }
    }
}

/// Parse an integer, a fraction "a/b", or a terminating decimal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Q> {
    let t = text.trim();
    let bad = || RegimeError::InvalidParameter(format!("cannot parse rational from '{t}'"));
    if let Some((a, b)) = t.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| bad())?;
        let den: BigInt = b.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(num, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let magnitude = int_part.abs() * &den + frac_num;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Q::new(signed, den));
    }
    let v: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Q::from(v))
}

pub fn format_q(v: &Q) -> String {
    if v.denom().is_one() {
        format!("{}", v.numer())
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn q_to_f64(v: &Q) -> f64 {
    use num::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Integrability/regularity exponents `(alpha, s, gamma, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Exponents {
    pub alpha: Q,
    pub s: Q,
    pub gamma: Ext,
    pub p: Ext,
}

impl Exponents {
    pub fn new(alpha: Q, s: Q, gamma: Ext, p: Ext) -> Result<Self> {
        if alpha < qi(1) || alpha >= qi(2) {
            return Err(RegimeError::OutOfDomain(format!(
                "alpha must lie in [1,2), got {}",
                format_q(&alpha)
            )));
        }
        if s < Q::zero() || s >= qi(3) {
            return Err(RegimeError::OutOfDomain(format!(
                "s must lie in [0,3), got {}",
                format_q(&s)
            )));
        }
        for (name, e) in [("gamma", &gamma), ("p", &p)] {
            if let Ext::Finite(v) = e {
                if *v < Q::one() {
                    return Err(RegimeError::OutOfDomain(format!(
                        "{name} must lie in [1,inf], got {}",
                        format_q(v)
                    )));
                }
            }
        }
        Ok(Self { alpha, s, gamma, p })
    }
}
