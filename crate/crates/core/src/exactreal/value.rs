use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::effective::EffReal;
use super::field::{rat_floor, sign_of, FieldElem, NumberField};
use crate::error::{Error, Result};

/// An exact real number.
#[derive(Clone)]
pub enum RealValue {
    Rational(BigRational),
    Field(FieldElem),
    Effective(EffReal),
}

impl fmt::Debug for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Rational(q) => write!(f, "{q}"),
            RealValue::Field(x) => write!(f, "{x:?}"),
            RealValue::Effective(e) => write!(f, "{e:?}"),
        }
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "{self:?}"),
        }
    }
}

impl From<BigRational> for RealValue {
    fn from(q: BigRational) -> Self {
        RealValue::Rational(q)
    }
}

impl From<BigInt> for RealValue {
    fn from(n: BigInt) -> Self {
        RealValue::Rational(BigRational::from_integer(n))
    }
}

impl From<i64> for RealValue {
    fn from(n: i64) -> Self {
        RealValue::from(BigInt::from(n))
    }
}

impl From<FieldElem> for RealValue {
    fn from(x: FieldElem) -> Self {
        RealValue::Field(x)
    }
}

impl From<EffReal> for RealValue {
    fn from(x: EffReal) -> Self {
        RealValue::Effective(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl RealValue {
    pub fn rational(n: i64, d: i64) -> Self {
        RealValue::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn zero() -> Self {
        RealValue::from(0)
    }

    /// Exact rational value, when the number is known to be rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            RealValue::Rational(q) => Some(q.clone()),
            RealValue::Field(x) => x.as_rational(),
            RealValue::Effective(_) => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn field(&self) -> Option<&NumberField> {
        match self {
            RealValue::Field(x) => Some(x.field()),
            _ => None,
        }
    }

    pub fn to_effective(&self) -> EffReal {
        match self {
            RealValue::Rational(q) => EffReal::rational(q.clone()),
            RealValue::Field(x) => EffReal::from_field(x.clone()),
            RealValue::Effective(e) => e.clone(),
        }
    }

    pub fn arith(op: ArithOp, x: &RealValue, y: &RealValue) -> Result<RealValue> {
        use RealValue::*;
        let out = match (x, y) {
            (Rational(a), Rational(b)) => Rational(match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
            }),
            (Field(a), Rational(b)) => Field(match op {
                ArithOp::Add => a.add_rational(b),
                ArithOp::Sub => a.add_rational(&-b),
                ArithOp::Mul => a.scale(b),
            }),
            (Rational(a), Field(b)) => Field(match op {
                ArithOp::Add => b.add_rational(a),
                ArithOp::Sub => b.neg().add_rational(a),
                ArithOp::Mul => b.scale(a),
            }),
            (Field(a), Field(b)) => Field(match op {
                ArithOp::Add => a.add(b)?,
                ArithOp::Sub => a.sub(b)?,
                ArithOp::Mul => a.mul(b)?,
            }),
            _ => {
                let (a, b) = (x.to_effective(), y.to_effective());
                Effective(match op {
                    ArithOp::Add => a.add(&b),
                    ArithOp::Sub => a.sub(&b),
                    ArithOp::Mul => a.mul(&b),
                })
            }
        };
        Ok(out)
    }

    pub fn add(&self, y: &RealValue) -> Result<RealValue> {
        Self::arith(ArithOp::Add, self, y)
    }

    pub fn sub(&self, y: &RealValue) -> Result<RealValue> {
        Self::arith(ArithOp::Sub, self, y)
    }

    pub fn mul(&self, y: &RealValue) -> Result<RealValue> {
        Self::arith(ArithOp::Mul, self, y)
    }

    pub fn neg(&self) -> RealValue {
        match self {
            RealValue::Rational(q) => RealValue::Rational(-q),
            RealValue::Field(x) => RealValue::Field(x.neg()),
            RealValue::Effective(e) => RealValue::Effective(e.neg()),
        }
    }

    pub fn pow(&self, e: u32) -> Result<RealValue> {
        match self {
            RealValue::Rational(q) => Ok(RealValue::Rational(super::super::poly::pow_rat(q, e as usize))),
            RealValue::Field(x) => Ok(RealValue::Field(x.pow(e))),
            RealValue::Effective(_) => {
                let mut acc = RealValue::from(1);
                for _ in 0..e {
                    acc = acc.mul(self)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn sign(&self) -> Result<i8> {
        match self {
            RealValue::Rational(q) => Ok(sign_of(q)),
            RealValue::Field(x) => x.sign(),
            RealValue::Effective(e) => e.sign(),
        }
    }

    /// Sign of `self − other`.
    pub fn cmp_exact(&self, other: &RealValue) -> Result<std::cmp::Ordering> {
        Ok(self.sub(other)?.sign()?.cmp(&0))
    }

    pub fn floor(&self) -> Result<BigInt> {
        match self {
            RealValue::Rational(q) => Ok(rat_floor(q)),
            RealValue::Field(x) => x.floor(),
            RealValue::Effective(e) => e.floor(),
        }
    }

    /// `⌈x⌉ = −⌊−x⌋`.
    pub fn ceil(&self) -> Result<BigInt> {
        Ok(-self.neg().floor()?)
    }

    /// `⌊x + ½⌋`.
    pub fn nint(&self) -> Result<BigInt> {
        self.add(&RealValue::rational(1, 2))?.floor()
    }

    /// `{x} = x − ⌊x⌋`.
    pub fn frac(&self) -> Result<RealValue> {
        let f = self.floor()?;
        self.sub(&RealValue::from(f))
    }

    /// `‖x‖ = |x − ⌊x + ½⌉|`, the distance to the nearest integer.
    pub fn dist(&self) -> Result<RealValue> {
        let d = self.sub(&RealValue::from(self.nint()?))?;
        Ok(if d.sign()? < 0 { d.neg() } else { d })
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealValue::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            RealValue::Field(x) => x.to_f64(),
            RealValue::Effective(e) => e.to_f64(),
        }
    }

    /// Integers `(l, h)` with `l ≤ x·2^bits ≤ h`.
    pub fn fixed_enclosure(&self, bits: u32) -> Result<(BigInt, BigInt)> {
        match self {
            RealValue::Rational(q) => {
                let s = q * BigRational::from_integer(BigInt::one() << bits as usize);
                Ok((rat_floor(&s), -rat_floor(&-s)))
            }
            RealValue::Field(x) => x.fixed_enclosure(bits),
            RealValue::Effective(e) => {
                let (lo, hi) = e.interval(bits + 1)?;
                let s = BigRational::from_integer(BigInt::one() << bits as usize);
                Ok((rat_floor(&(lo * &s)), -rat_floor(&-(hi * &s))))
            }
        }
    }

    /// Label suitable for expression output: rationals in `p/q` form,
    /// field elements as polynomials in `theta`.
    pub fn label(&self) -> String {
        match self {
            RealValue::Rational(q) => format_rational(q),
            RealValue::Field(x) => match x.as_rational() {
                Some(q) => format_rational(&q),
                None => format!("({})", x.to_theta_string()),
            },
            RealValue::Effective(e) => e.label().to_string(),
        }
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        if q.is_negative() {
            format!("({})", q.numer())
        } else {
            q.numer().to_string()
        }
    } else if q.is_negative() {
        format!("(-{}/{})", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

const FIXED_BITS: u32 = 64;

/// Product that tolerates operands from different number fields by
/// switching to effective reals.
pub fn mul_lenient(x: &RealValue, y: &RealValue) -> Result<RealValue> {
    match x.mul(y) {
        Err(Error::FieldMismatch) => Ok(RealValue::from(x.to_effective().mul(&y.to_effective()))),
        r => r,
    }
}

/// Sum that tolerates operands from different number fields.
pub fn add_lenient(x: &RealValue, y: &RealValue) -> Result<RealValue> {
    match x.add(y) {
        Err(Error::FieldMismatch) => Ok(RealValue::from(x.to_effective().add(&y.to_effective()))),
        r => r,
    }
}

/// Fast exact evaluation of `⌊k·s + t⌋` for integer `k`.
///
/// Keeps 64-bit fixed-point enclosures of `s` and `t` in `i128` and only
/// falls back to exact arithmetic when the enclosure straddles an integer.
#[derive(Clone, Debug)]
pub struct AffineFloor {
    slope: RealValue,
    intercept: RealValue,
    fast: Option<((i128, i128), (i128, i128))>,
}

fn to_i128_pair(p: (BigInt, BigInt)) -> Option<(i128, i128)> {
    Some((p.0.to_i128()?, p.1.to_i128()?))
}

impl AffineFloor {
    pub fn new(slope: RealValue, intercept: RealValue) -> Result<Self> {
        let fast = match (slope.fixed_enclosure(FIXED_BITS + 2), intercept.fixed_enclosure(FIXED_BITS + 2)) {
            (Ok(s), Ok(t)) => {
                // widen by one unit to absorb the final rounding
                let s = (s.0 >> 2usize, (s.1 + 3) >> 2usize);
                let t = (t.0 >> 2usize, (t.1 + 3) >> 2usize);
                to_i128_pair(s).zip(to_i128_pair(t)).filter(|(s, t)| {
                    let lim = 1i128 << 100;
                    s.0.abs() < lim && s.1.abs() < lim && t.0.abs() < lim && t.1.abs() < lim
                })
            }
            (Err(e), _) | (_, Err(e)) => {
                if matches!(e, Error::PrecisionExhausted { .. }) {
                    None
                } else {
                    return Err(e);
                }
            }
        };
        Ok(AffineFloor { slope, intercept, fast })
    }

    pub fn slope(&self) -> &RealValue {
        &self.slope
    }

    pub fn intercept(&self) -> &RealValue {
        &self.intercept
    }

    pub fn floor_at(&self, k: i64) -> Result<i128> {
        if let Some(((slo, shi), (tlo, thi))) = self.fast {
            let k = k as i128;
            let (a, b) = if k >= 0 { (slo, shi) } else { (shi, slo) };
            if let (Some(x), Some(y)) = (a.checked_mul(k), b.checked_mul(k)) {
                if let (Some(lo), Some(hi)) = (x.checked_add(tlo), y.checked_add(thi)) {
                    let (fl, fh) = (lo >> FIXED_BITS, hi >> FIXED_BITS);
                    if fl == fh {
                        return Ok(fl);
                    }
                }
            }
        }
        self.floor_exact(k)
    }

    fn floor_exact(&self, k: i64) -> Result<i128> {
        let v = self.slope.mul(&RealValue::from(k))?.add(&self.intercept)?;
        v.floor()?.to_i128().ok_or(Error::Overflow("affine floor"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::effective::pi;
    use crate::poly::int_poly;
    use num_traits::Zero;

    fn golden() -> NumberField {
        NumberField::new(int_poly(&[-1, -1, 1]), BigRational::one(), BigRational::from_integer(2.into())).unwrap()
    }

    #[test]
    fn floor_family() {
        let h = RealValue::rational(-1, 2);
        assert_eq!(h.floor().unwrap(), BigInt::from(-1));
        assert_eq!(h.ceil().unwrap(), BigInt::from(0));
        assert_eq!(h.nint().unwrap(), BigInt::from(0));
        assert_eq!(h.dist().unwrap().as_rational().unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(RealValue::from(3).frac().unwrap().as_rational().unwrap(), BigRational::zero());
    }

    #[test]
    fn mixed_arithmetic() {
        let k = golden();
        let phi = RealValue::from(k.generator());
        let sum = phi.add(&RealValue::from(1)).unwrap();
        assert_eq!(sum.sub(&phi.mul(&phi).unwrap()).unwrap().sign().unwrap(), 0);
        let mixed = phi.add(&RealValue::from(pi())).unwrap();
        assert!(matches!(mixed, RealValue::Effective(_)));
        assert_eq!(mixed.floor().unwrap(), BigInt::from(4));
    }

    #[test]
    fn field_mismatch() {
        let a = RealValue::from(golden().generator());
        let k2 = NumberField::new(int_poly(&[-2, 0, 1]), BigRational::one(), BigRational::from_integer(2.into())).unwrap();
        let b = RealValue::from(k2.generator());
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch)));
    }

    #[test]
    fn affine_floor_matches_exact() {
        let k = golden();
        let s = RealValue::from(k.generator());
        let t = RealValue::rational(-1, 3);
        let af = AffineFloor::new(s.clone(), t.clone()).unwrap();
        for n in -300..300i64 {
            let exact = s.mul(&RealValue::from(n)).unwrap().add(&t).unwrap().floor().unwrap();
            assert_eq!(BigInt::from(af.floor_at(n).unwrap()), exact);
        }
        let r = AffineFloor::new(RealValue::rational(1, 3), RealValue::zero()).unwrap();
        assert_eq!(r.floor_at(3).unwrap(), 1);
        assert_eq!(r.floor_at(-3).unwrap(), -1);
        assert_eq!(r.floor_at(-1).unwrap(), -1);
    }
}
