//! Real algebraic number fields `Q(θ)` with a distinguished real embedding.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{self, IntPoly};

/// Precision of enclosure level `j` is `BASE_BITS << j`.
const BASE_BITS: u32 = 64;
const LEVELS: usize = 13;

/// Enclosures of `θ^0 .. θ^{d-1}` scaled by `2^bits`, rounded outward.
struct Level {
    bits: u32,
    bracket: (BigRational, BigRational),
    powers: Vec<(BigInt, BigInt)>,
}

struct Inner {
    name: Option<String>,
    minpoly: IntPoly,
    interval: (BigRational, BigRational),
    rational_root: Option<BigRational>,
    levels: Vec<OnceLock<Level>>,
}

/// A real number field `Q(θ)` given by a monic irreducible minimal
/// polynomial and a rational interval isolating the real root `θ`.
///
/// Cloning is cheap; the root enclosures are shared and filled on demand.
#[derive(Clone)]
pub struct NumberField(Arc<Inner>);

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({} in [{}, {}])", poly::format_int_poly(&self.0.minpoly), self.0.interval.0, self.0.interval.1)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.minpoly != other.0.minpoly {
            return false;
        }
        let lo = (&self.0.interval.0).max(&other.0.interval.0);
        let hi = (&self.0.interval.1).min(&other.0.interval.1);
        lo <= hi && poly::count_real_roots(&self.0.minpoly, lo, hi) == 1
    }
}

impl Eq for NumberField {}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn interval_mul(a: &(BigInt, BigInt), b: &(BigInt, BigInt), scale: &BigInt) -> (BigInt, BigInt) {
    let cands = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = cands.iter().min().unwrap();
    let hi = cands.iter().max().unwrap();
    (floor_div(lo, scale), ceil_div(hi, scale))
}

pub(crate) fn rat_floor(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

impl NumberField {
    /// Validates `minpoly` and the isolating interval and returns the field.
    pub fn new(minpoly: IntPoly, lo: BigRational, hi: BigRational) -> Result<Self> {
        Self::with_name(None, minpoly, lo, hi)
    }

    pub fn with_name(name: Option<String>, mut minpoly: IntPoly, lo: BigRational, hi: BigRational) -> Result<Self> {
        while minpoly.len() > 1 && minpoly.last().is_some_and(|c| c.is_zero()) {
            minpoly.pop();
        }
        if minpoly.len() < 2 {
            return Err(Error::InvalidPolynomial("degree must be at least 1".into()));
        }
        if !minpoly.last().unwrap().is_one() {
            return Err(Error::InvalidPolynomial("polynomial must be monic".into()));
        }
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
        }
        if let Some(f) = poly::find_factor(&minpoly)? {
            return Err(Error::Reducible(format!("{} has the factor {}", poly::format_int_poly(&minpoly), poly::format_int_poly(&f))));
        }
        match poly::count_real_roots(&minpoly, &lo, &hi) {
            0 => return Err(Error::NoRoot),
            1 => {}
            k => return Err(Error::MultipleRoots(k)),
        }
        let rational_root = (minpoly.len() == 2).then(|| BigRational::from_integer(-minpoly[0].clone()));
        Ok(NumberField(Arc::new(Inner {
            name,
            minpoly,
            interval: (lo, hi),
            rational_root,
            levels: (0..LEVELS).map(|_| OnceLock::new()).collect(),
        })))
    }

    pub fn degree(&self) -> usize {
        self.0.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.0.minpoly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.0.interval.0, &self.0.interval.1)
    }

    pub fn name(&self) -> Option<&str> {
        self.0.name.as_deref()
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// The generator `θ`.
    pub fn generator(&self) -> FieldElem {
        if self.degree() == 1 {
            return self.rational(self.0.rational_root.clone().unwrap());
        }
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[1] = BigRational::one();
        FieldElem { field: self.clone(), coords }
    }

    pub fn rational(&self, q: BigRational) -> FieldElem {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[0] = q;
        FieldElem { field: self.clone(), coords }
    }

    pub fn int(&self, n: impl Into<BigInt>) -> FieldElem {
        self.rational(BigRational::from_integer(n.into()))
    }

    pub fn zero(&self) -> FieldElem {
        self.int(0)
    }

    pub fn one(&self) -> FieldElem {
        self.int(1)
    }

    /// Element with the given coordinates in the power basis `1, θ, …, θ^{d-1}`.
    pub fn from_coords(&self, coords: Vec<BigRational>) -> Result<FieldElem> {
        if coords.len() > self.degree() {
            return Err(Error::InvalidArgument(format!("{} coordinates for a degree {} field", coords.len(), self.degree())));
        }
        let mut c = coords;
        c.resize(self.degree(), BigRational::zero());
        Ok(FieldElem { field: self.clone(), coords: c })
    }

    fn level(&self, j: usize) -> &Level {
        self.0.levels[j].get_or_init(|| {
            let start = if j == 0 { self.0.interval.clone() } else { self.level(j - 1).bracket.clone() };
            self.compute_level(BASE_BITS << j, start)
        })
    }

    fn compute_level(&self, bits: u32, (mut lo, mut hi): (BigRational, BigRational)) -> Level {
        let scale = pow2(bits);
        let target = BigRational::new(BigInt::one(), pow2(bits + 2));
        let p = &self.0.minpoly;
        if let Some(r) = &self.0.rational_root {
            lo = r.clone();
            hi = r.clone();
        } else {
            let lo_sign = poly::eval_int(p, &lo).is_positive();
            let two = BigRational::from_integer(BigInt::from(2));
            while &hi - &lo > target {
                let mid = (&lo + &hi) / &two;
                if poly::eval_int(p, &mid).is_positive() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        let scaled_lo = rat_floor(&(&lo * BigRational::from_integer(scale.clone())));
        let scaled_hi = -rat_floor(&(-(&hi * BigRational::from_integer(scale.clone()))));
        let theta = (scaled_lo, scaled_hi);
        let mut powers = Vec::with_capacity(self.degree());
        powers.push((scale.clone(), scale.clone()));
        for i in 1..self.degree() {
            let next = interval_mul(&powers[i - 1], &theta, &scale);
            powers.push(next);
        }
        Level { bits, bracket: (lo, hi), powers }
    }

    /// Rational interval of width at most `2^-(64·2^j)` containing `θ`.
    pub fn root_bracket(&self, j: usize) -> (BigRational, BigRational) {
        self.level(j.min(LEVELS - 1)).bracket.clone()
    }

    fn check_same(&self, other: &NumberField) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Trace of `θ^i` for `i < 2d`, by Newton's identities.
    pub fn power_traces(&self, count: usize) -> Vec<BigInt> {
        let d = self.degree();
        let p = &self.0.minpoly;
        // e_k with p = x^d - e1 x^{d-1} + e2 x^{d-2} - ...
        let e: Vec<BigInt> = (0..=d).map(|k| if k % 2 == 0 { p[d - k].clone() } else { -p[d - k].clone() }).collect();
        let mut s: Vec<BigInt> = vec![BigInt::from(d)];
        for k in 1..count {
            let mut acc = BigInt::zero();
            for i in 1..=k.min(d) {
                let term = &e[i] * if i == k { BigInt::from(k) } else { s[k - i].clone() };
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            s.push(acc);
        }
        s.truncate(count);
        s
    }
}

/// An element `Σ cᵢ θⁱ` of a [`NumberField`], with rational coordinates.
#[derive(Clone)]
pub struct FieldElem {
    field: NumberField,
    coords: Vec<BigRational>,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.field == other.field
    }
}

impl Eq for FieldElem {}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_theta_string())
    }
}

impl FieldElem {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element is the rational number `q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.field.degree() == 1 {
            return Some(self.coords[0].clone());
        }
        self.coords[1..].iter().all(Zero::is_zero).then(|| self.coords[0].clone())
    }

    fn zip(&self, other: &FieldElem, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Result<FieldElem> {
        self.field.check_same(&other.field)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect();
        Ok(FieldElem { field: self.field.clone(), coords })
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> FieldElem {
        FieldElem { field: self.field.clone(), coords: self.coords.iter().map(|c| c * q).collect() }
    }

    pub fn add_rational(&self, q: &BigRational) -> FieldElem {
        let mut out = self.clone();
        out.coords[0] += q;
        out
    }

    fn reduce(&self, mut prod: Vec<BigRational>) -> FieldElem {
        let d = self.field.degree();
        let m = self.field.minpoly();
        if d == 1 {
            // θ is rational: evaluate directly.
            let t = self.field.0.rational_root.clone().unwrap();
            let v = poly::eval_rat(&prod, &t);
            return self.field.rational(v);
        }
        for k in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for (i, mi) in m.iter().enumerate().take(d) {
                prod[k - d + i] -= &c * BigRational::from_integer(mi.clone());
            }
        }
        prod.resize(d, BigRational::zero());
        FieldElem { field: self.field.clone(), coords: prod }
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.field.check_same(&other.field)?;
        let mut prod = vec![BigRational::zero(); 2 * self.coords.len() - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(self.reduce(prod))
    }

    pub fn pow(&self, mut e: u32) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    pub fn inverse(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        if self.field.degree() == 1 {
            return Ok(self.field.rational(self.coords[0].recip()));
        }
        let m = poly::to_rat(self.field.minpoly());
        let inv = poly::inverse_mod(&self.coords, &m).ok_or(Error::InvalidArgument("non-invertible element".into()))?;
        self.field.from_coords(inv)
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.mul(&other.inverse()?)
    }

    /// Field norm `N_{K/Q}`, the resultant of the minimal polynomial and
    /// the coordinate polynomial.
    pub fn norm(&self) -> BigRational {
        if self.field.degree() == 1 {
            return self.coords[0].clone();
        }
        let m = poly::to_rat(self.field.minpoly());
        poly::resultant(&m, &self.coords)
    }

    /// Field trace `Tr_{K/Q}`.
    pub fn trace(&self) -> BigRational {
        let t = self.field.power_traces(self.field.degree());
        self.coords.iter().zip(&t).map(|(c, ti)| c * BigRational::from_integer(ti.clone())).fold(BigRational::zero(), |a, b| a + b)
    }

    /// Integer numerators `nᵢ` and common denominator `D` of the coordinates.
    fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let den = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self.coords.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        (nums, den)
    }

    /// Enclosure `[lo, hi] / (D · 2^bits)` of the element at level `j`.
    fn scaled_enclosure(&self, j: usize, nums: &[BigInt]) -> (BigInt, BigInt, u32) {
        let level = self.field.level(j);
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (n, (plo, phi)) in nums.iter().zip(&level.powers) {
            if n.is_zero() {
                continue;
            }
            if n.is_positive() {
                lo += n * plo;
                hi += n * phi;
            } else {
                lo += n * phi;
                hi += n * plo;
            }
        }
        (lo, hi, level.bits)
    }

    /// Rational enclosure of the element, tightening with `j`.
    pub fn enclosure(&self, j: usize) -> (BigRational, BigRational) {
        let (nums, den) = self.integer_form();
        let (lo, hi, bits) = self.scaled_enclosure(j.min(LEVELS - 1), &nums);
        let d = den * pow2(bits);
        (BigRational::new(lo, d.clone()), BigRational::new(hi, d))
    }

    /// Integers `(l, h)` with `l ≤ x·2^bits ≤ h` and `h - l ≤ 2`.
    pub fn fixed_enclosure(&self, bits: u32) -> Result<(BigInt, BigInt)> {
        if let Some(q) = self.as_rational() {
            let s = &q * BigRational::from_integer(pow2(bits));
            return Ok((rat_floor(&s), -rat_floor(&(-s.clone()))));
        }
        let (nums, den) = self.integer_form();
        for j in 0..LEVELS {
            let (lo, hi, b) = self.scaled_enclosure(j, &nums);
            if b < bits {
                continue;
            }
            let d = &den << (b - bits) as usize;
            let l = floor_div(&lo, &d);
            let h = ceil_div(&hi, &d);
            if &h - &l <= BigInt::from(2) {
                return Ok((l, h));
            }
        }
        Err(self.exhausted("fixed-point enclosure"))
    }

    fn exhausted(&self, what: &str) -> Error {
        Error::PrecisionExhausted { bits: BASE_BITS << (LEVELS - 1), context: format!("{what} of {self:?}") }
    }

    /// Exact sign; zero is decided from the coordinates.
    pub fn sign(&self) -> Result<i8> {
        if let Some(q) = self.as_rational() {
            return Ok(sign_of(&q));
        }
        let (nums, _) = self.integer_form();
        for j in 0..LEVELS {
            let (lo, hi, _) = self.scaled_enclosure(j, &nums);
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
        }
        Err(self.exhausted("sign"))
    }

    /// The unique integer `m` with `m ≤ x < m + 1`.
    pub fn floor(&self) -> Result<BigInt> {
        if let Some(q) = self.as_rational() {
            return Ok(rat_floor(&q));
        }
        // An element outside Q is irrational, so refinement separates it
        // from every integer.
        let (nums, den) = self.integer_form();
        for j in 0..LEVELS {
            let (lo, hi, bits) = self.scaled_enclosure(j, &nums);
            let d = &den << bits as usize;
            let fl = floor_div(&lo, &d);
            if fl == floor_div(&hi, &d) {
                return Ok(fl);
            }
        }
        Err(self.exhausted("floor"))
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(0);
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Formats the element as a polynomial in `theta`.
    pub fn to_theta_string(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "theta".to_string(),
                _ => format!("theta^{i}"),
            };
            let coeff = if c.is_integer() { c.numer().to_string() } else { format!("{}/{}", c.numer(), c.denom()) };
            parts.push(match (i, c.is_one()) {
                (0, _) => coeff,
                (_, true) => mono,
                _ if c == &-BigRational::one() => format!("-{mono}"),
                _ => format!("{coeff}*{mono}"),
            });
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

pub(crate) fn sign_of(q: &BigRational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int_poly;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sqrt2() -> NumberField {
        NumberField::new(int_poly(&[-2, 0, 1]), q(1, 1), q(2, 1)).unwrap()
    }

    #[test]
    fn rejects_bad_definitions() {
        assert!(matches!(NumberField::new(int_poly(&[-4, 0, 1]), q(1, 1), q(3, 1)), Err(Error::Reducible(_))));
        assert!(matches!(NumberField::new(int_poly(&[-2, 0, 1]), q(2, 1), q(3, 1)), Err(Error::NoRoot)));
        assert!(matches!(NumberField::new(int_poly(&[-2, 0, 1]), q(-2, 1), q(2, 1)), Err(Error::MultipleRoots(2))));
        assert!(matches!(NumberField::new(int_poly(&[-2, 0, 2]), q(0, 1), q(2, 1)), Err(Error::InvalidPolynomial(_))));
    }

    #[test]
    fn degree_one_field() {
        let k = NumberField::new(int_poly(&[-2, 1]), q(2, 1), q(2, 1)).unwrap();
        assert_eq!(k.generator().as_rational(), Some(q(2, 1)));
        assert_eq!(k.generator().floor().unwrap(), BigInt::from(2));
    }

    #[test]
    fn sqrt_two_arithmetic() {
        let k = sqrt2();
        let t = k.generator();
        assert_eq!(t.mul(&t).unwrap(), k.int(2));
        assert_eq!(t.add_rational(&q(-3, 2)).sign().unwrap(), -1);
        assert_eq!(t.scale(&q(5, 1)).floor().unwrap(), BigInt::from(7));
        let inv = t.add_rational(&q(1, 1)).inverse().unwrap();
        assert_eq!(inv, t.add_rational(&q(-1, 1)));
        assert_eq!(t.norm(), q(-2, 1));
        assert_eq!(t.trace(), q(0, 1));
    }

    #[test]
    fn compositum_embeddings() {
        let k = NumberField::new(int_poly(&[1, 0, -10, 0, 1]), q(3, 1), q(4, 1)).unwrap();
        let t = k.generator();
        let t3 = t.pow(3);
        let s2 = t3.sub(&t.scale(&q(9, 1))).unwrap().scale(&q(1, 2));
        let s3 = t.scale(&q(11, 1)).sub(&t3).unwrap().scale(&q(1, 2));
        assert_eq!(s2.mul(&s2).unwrap(), k.int(2));
        assert_eq!(s3.mul(&s3).unwrap(), k.int(3));
        assert_eq!(s2.add(&s3).unwrap(), t);
        assert_eq!(s2.sign().unwrap(), 1);
    }

    #[test]
    fn golden_floor() {
        let k = NumberField::new(int_poly(&[-1, -1, 1]), q(1, 1), q(2, 1)).unwrap();
        let phi = k.generator();
        assert_eq!(phi.scale(&q(4, 1)).floor().unwrap(), BigInt::from(6));
        let z = phi.mul(&phi).unwrap().sub(&phi).unwrap().add_rational(&q(-1, 1));
        assert_eq!(z.sign().unwrap(), 0);
        assert_eq!(k.power_traces(5), vec![2, 1, 3, 4, 7].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn near_integer_floor_needs_refinement() {
        // (1+√2)^40 is within 10^-15 of an integer.
        let k = sqrt2();
        let x = k.generator().add_rational(&q(1, 1)).pow(40);
        let conj = x.norm(); // (1+√2)^40 (1-√2)^40 = 1
        assert_eq!(conj, q(1, 1));
        let f = x.floor().unwrap();
        let y = x.add_rational(&BigRational::from_integer(-f.clone()));
        assert_eq!(y.sign().unwrap(), 1);
        assert_eq!(y.add_rational(&q(-1, 1)).sign().unwrap(), -1);
        assert_eq!(x.trace(), BigRational::from_integer(f.clone() + 1));
    }

    #[test]
    fn fixed_enclosure_brackets() {
        let k = sqrt2();
        let (l, h) = k.generator().fixed_enclosure(64).unwrap();
        assert!(&h - &l <= BigInt::from(2));
        let sq_l = &l * &l;
        let sq_h = &h * &h;
        let two = BigInt::from(2) << 128usize;
        assert!(sq_l <= two && two <= sq_h);
    }
}
