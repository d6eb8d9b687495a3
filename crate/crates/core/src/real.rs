//! Real scalars for the numerical code: `f64`, `f32`, and [`BigReal`], an
//! arbitrary-precision binary float.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode};
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::ToPrimitive;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache allocates"));
}

pub trait Real:
    Clone
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Working precision in bits.
    fn precision(&self) -> usize;
    fn from_f64(x: f64, prec: usize) -> Self;
    fn from_bigint(x: &BigInt, prec: usize) -> Self;
    fn ln2(prec: usize) -> Self;
    fn pi(prec: usize) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn powi(&self, n: usize) -> Self;
    fn to_f64(&self) -> f64;
    fn is_finite(&self) -> bool;
    /// Scientific notation, `d.ddd...e<exp>`.
    fn to_sci_string(&self) -> String;

    fn from_biguint(x: &BigUint, prec: usize) -> Self {
        Self::from_bigint(&BigInt::from_biguint(Sign::Plus, x.clone()), prec)
    }

    fn from_rational(x: &BigRational, prec: usize) -> Self {
        Self::from_bigint(x.numer(), prec) / Self::from_bigint(x.denom(), prec)
    }

    fn zero(prec: usize) -> Self {
        Self::from_f64(0.0, prec)
    }

    fn one(prec: usize) -> Self {
        Self::from_f64(1.0, prec)
    }

    fn abs(&self) -> Self {
        if *self < Self::zero(self.precision()) {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `2^-bits` at this value's precision.
    fn ulp_scale(&self, bits: usize) -> Self {
        Self::one(self.precision()) / Self::from_f64(2.0, self.precision()).powi(bits)
    }

    /// Fixed-point text with `decimals` places.
    fn to_fixed(&self, decimals: usize, mode: DecimalMode) -> String {
        fixed_from_sci(&self.to_sci_string(), decimals, mode)
    }
}

/// How [`Real::to_fixed`] drops digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecimalMode {
    /// Round half away from zero.
    Round,
    Truncate,
}

/// Converts `d.ddd...e<exp>` to fixed point.
pub fn fixed_from_sci(sci: &str, decimals: usize, mode: DecimalMode) -> String {
    let (neg, body) = match sci.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, sci),
    };
    let (mant, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().expect("exponent is an integer")),
        None => (body, 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let mut digits: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    // value = 0.d1 d2 ... * 10^point
    let mut point = int_part.len() as i64 + exp;
    if point < 0 {
        digits.splice(0..0, std::iter::repeat_n(0, point.unsigned_abs() as usize));
        point = 0;
    }
    let mut point = point as usize;
    let keep = point + decimals;
    if digits.len() <= keep {
        digits.resize(keep + 1, 0);
    }
    let round_up = mode == DecimalMode::Round && digits[keep] >= 5;
    let mut kept = digits[..keep].to_vec();
    if round_up {
        match kept.iter().rposition(|&d| d != 9) {
            Some(i) => {
                kept[i] += 1;
                kept[i + 1..].iter_mut().for_each(|d| *d = 0);
            }
            None => {
                kept.iter_mut().for_each(|d| *d = 0);
                kept.insert(0, 1);
                point += 1;
            }
        }
    }
    let text = |ds: &[u8]| ds.iter().map(|d| (d + b'0') as char).collect::<String>();
    let int_text = text(&kept[..point]);
    let int_text = match int_text.trim_start_matches('0') {
        "" => "0".to_string(),
        t => t.to_string(),
    };
    let frac = text(&kept[point..]);
    let is_zero = kept.iter().all(|&d| d == 0);
    let sign = if neg && !is_zero { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int_text}")
    } else {
        format!("{sign}{int_text}.{frac}")
    }
}

macro_rules! impl_real_for_float {
    ($t:ty, $bits:expr) => {
        impl Real for $t {
            fn precision(&self) -> usize {
                $bits
            }
            fn from_f64(x: f64, _prec: usize) -> Self {
                x as $t
            }
            fn from_bigint(x: &BigInt, _prec: usize) -> Self {
                x.to_f64().unwrap_or(f64::INFINITY) as $t
            }
            fn ln2(_prec: usize) -> Self {
                std::f64::consts::LN_2 as $t
            }
            fn pi(_prec: usize) -> Self {
                std::f64::consts::PI as $t
            }
            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }
            fn ln(&self) -> Self {
                <$t>::ln(*self)
            }
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }
            fn powi(&self, n: usize) -> Self {
                <$t>::powi(*self, n as i32)
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn is_finite(&self) -> bool {
                <$t>::is_finite(*self)
            }
            fn to_sci_string(&self) -> String {
                format!("{:e}", self)
            }
        }
    };
}

impl_real_for_float!(f64, 53);
impl_real_for_float!(f32, 24);

/// Arbitrary-precision binary float. Binary operations run at the larger
/// of the two operand precisions.
#[derive(Clone)]
pub struct BigReal {
    value: BigFloat,
    prec: usize,
}

impl BigReal {
    pub fn inner(&self) -> &BigFloat {
        &self.value
    }

    fn wrap(value: BigFloat, prec: usize) -> Self {
        BigReal { value, prec }
    }

    /// Parses decimal text such as `0.2808` or `1.5e-3`.
    pub fn parse(text: &str, prec: usize) -> Option<Self> {
        let v = CONSTS.with(|cc| BigFloat::parse(text, astro_float::Radix::Dec, prec, RM, &mut cc.borrow_mut()));
        (!v.is_nan()).then(|| Self::wrap(v, prec))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! bin_op {
    ($tr:ident, $method:ident) => {
        impl $tr for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                let p = self.prec.max(rhs.prec);
                BigReal::wrap(self.value.$method(&rhs.value, p, RM), p)
            }
        }
    };
}

bin_op!(Add, add);
bin_op!(Sub, sub);
bin_op!(Mul, mul);
bin_op!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(self.value.neg(), self.prec)
    }
}

impl Real for BigReal {
    fn precision(&self) -> usize {
        self.prec
    }

    fn from_f64(x: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, prec), prec)
    }

    fn from_bigint(x: &BigInt, prec: usize) -> Self {
        let two64 = BigFloat::from_u128(1u128 << 64, prec);
        let (sign, limbs) = x.to_u64_digits();
        let mut acc = BigFloat::from_u64(0, prec);
        for &limb in limbs.iter().rev() {
            acc = acc.mul(&two64, prec, RM).add(&BigFloat::from_u64(limb, prec), prec, RM);
        }
        if sign == Sign::Minus {
            acc = acc.neg();
        }
        Self::wrap(acc, prec)
    }

    fn ln2(prec: usize) -> Self {
        Self::wrap(CONSTS.with(|cc| cc.borrow_mut().ln_2(prec, RM)), prec)
    }

    fn pi(prec: usize) -> Self {
        Self::wrap(CONSTS.with(|cc| cc.borrow_mut().pi(prec, RM)), prec)
    }

    fn exp(&self) -> Self {
        Self::wrap(CONSTS.with(|cc| self.value.exp(self.prec, RM, &mut cc.borrow_mut())), self.prec)
    }

    fn ln(&self) -> Self {
        Self::wrap(CONSTS.with(|cc| self.value.ln(self.prec, RM, &mut cc.borrow_mut())), self.prec)
    }

    fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.prec, RM), self.prec)
    }

    fn powi(&self, n: usize) -> Self {
        Self::wrap(self.value.powi(n, self.prec, RM), self.prec)
    }

    fn to_f64(&self) -> f64 {
        self.to_sci_string().parse().unwrap_or(f64::NAN)
    }

    fn is_finite(&self) -> bool {
        !self.value.is_nan() && !self.value.is_inf()
    }

    fn to_sci_string(&self) -> String {
        if self.value.is_zero() {
            return "0e0".into();
        }
        format!("{}", self.value)
    }
}
