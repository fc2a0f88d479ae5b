//! Exact real arithmetic: algebraic number fields, effective reals and the
//! floor-family functions built on exact sign tests.

mod effective;
mod field;
mod value;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use effective::{construct_nested_real, dist_upper_bound, pi, EffReal, NestedReal, Refiner, DEFAULT_PRECISION_CAP};
pub use field::{FieldElem, NumberField};
pub use value::{add_lenient, format_rational, mul_lenient, AffineFloor, ArithOp, RealValue};

use crate::error::{Error, Result};
use crate::poly::{self, IntPoly};

/// Validating constructor for a number field.
pub fn define_field(minpoly: IntPoly, lo: BigRational, hi: BigRational) -> Result<NumberField> {
    NumberField::new(minpoly, lo, hi)
}

/// Writes `k = s² · f` with `f` square-free and returns `(s, f)`.
pub fn squarefree_split(k: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut f = 1u64;
    let mut rest = k;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= p;
        }
        p += 1;
    }
    (s, f * rest)
}

/// Minimal polynomial of `Σ √gⱼ`, built by repeated resultants
/// `p(x+√g)·p(x−√g)`.
fn multiquadratic_minpoly(gs: &[u64]) -> IntPoly {
    let mut p: IntPoly = vec![BigInt::zero(), BigInt::one()];
    for &g in gs {
        let g = BigInt::from(g);
        let deg = p.len() - 1;
        let mut a = vec![BigInt::zero(); deg + 1];
        let mut b = vec![BigInt::zero(); deg + 1];
        for (i, c) in p.iter().enumerate() {
            let mut binom = BigInt::one();
            for k in 0..=i {
                // term c · C(i,k) · x^{i-k} · y^k, y² = g
                let t = c * &binom * g.pow((k / 2) as u32);
                if k % 2 == 0 {
                    a[i - k] += t;
                } else {
                    b[i - k] += t;
                }
                binom = binom * BigInt::from(i - k) / BigInt::from(k + 1);
            }
        }
        let sq = |u: &[BigInt], v: &[BigInt]| {
            let mut out = vec![BigInt::zero(); u.len() + v.len() - 1];
            for (i, x) in u.iter().enumerate() {
                for (j, y) in v.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let a2 = sq(&a, &a);
        let b2 = sq(&b, &b);
        p = a2.iter().zip(b2.iter()).map(|(x, y)| x - &g * y).collect();
        while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }
    p
}

fn isqrt_bracket(g: u64, bits: u32) -> (BigInt, BigInt) {
    let r = (BigInt::from(g) << (2 * bits as usize)).sqrt();
    let exact = &r * &r == BigInt::from(g) << (2 * bits as usize);
    (r.clone(), if exact { r } else { r + 1 })
}

fn field_cache() -> &'static Mutex<HashMap<Vec<u64>, NumberField>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u64>, NumberField>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn largest_prime(mut g: u64) -> u64 {
    let mut best = 1;
    let mut p = 2;
    while p * p <= g {
        while g.is_multiple_of(p) {
            g /= p;
            best = p;
        }
        p += 1;
    }
    best.max(g)
}

/// Square-free radicands whose square roots generate the same field as the
/// inputs and are multiplicatively independent modulo squares, found by
/// elimination over GF(2) with the largest prime factor as pivot.
fn independent_radicands(gs: &[u64]) -> Vec<u64> {
    let mut basis: Vec<(u64, u64)> = Vec::new();
    for &g in gs {
        let mut g = squarefree_split(g).1;
        for &(pivot, b) in &basis {
            if g.is_multiple_of(pivot) {
                let d = g.gcd(&b);
                g = (g / d) * (b / d);
            }
        }
        if g > 1 {
            basis.push((largest_prime(g), g));
            basis.sort_unstable_by_key(|x| std::cmp::Reverse(x.0));
        }
    }
    basis.into_iter().map(|(_, b)| b).collect()
}

/// `Q(√g₁ + … + √gₘ)` for distinct square-free `gⱼ > 1`; shared per set.
pub fn multiquadratic_field(gs: &[u64]) -> Result<NumberField> {
    let mut gs = independent_radicands(gs);
    gs.sort_unstable();
    if let Some(f) = field_cache().lock().unwrap().get(&gs) {
        return Ok(f.clone());
    }
    let minpoly = multiquadratic_minpoly(&gs);
    let field = if gs.is_empty() {
        NumberField::new(minpoly, BigRational::zero(), BigRational::zero())?
    } else {
        let mut bits = 8;
        loop {
            let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
            for &g in &gs {
                let (l, h) = isqrt_bracket(g, bits);
                lo += l;
                hi += h;
            }
            let den = BigInt::one() << bits as usize;
            let (lo, hi) = (BigRational::new(lo, den.clone()), BigRational::new(hi, den));
            if poly::count_real_roots(&minpoly, &lo, &hi) == 1 {
                break NumberField::new(minpoly, lo, hi)?;
            }
            bits *= 2;
            if bits > 4096 {
                return Err(Error::InvalidPolynomial("could not isolate the compositum generator".into()));
            }
        }
    };
    field_cache().lock().unwrap().insert(gs, field.clone());
    Ok(field)
}

/// `Q(√5)`, the home of the golden ratio.
pub fn golden_field() -> NumberField {
    multiquadratic_field(&[5]).expect("Q(sqrt 5) is a valid field")
}

/// Best rational approximation with denominator at most `max_den`.
fn approx_rational(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - x).abs() < tol {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let f = r - a;
        if f.abs() < 1e-300 {
            break;
        }
        r = 1.0 / f;
    }
    None
}

fn solve_complex(mut m: Vec<Vec<Complex64>>, mut v: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = v.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].norm().partial_cmp(&m[b][col].norm()).unwrap())?;
        if m[piv][col].norm() < 1e-14 {
            return None;
        }
        m.swap(col, piv);
        v.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                if f.norm() == 0.0 {
                    continue;
                }
                for c in col..n {
                    let t = m[col][c];
                    m[r][c] -= f * t;
                }
                let t = v[col];
                v[r] -= f * t;
            }
        }
    }
    Some((0..n).map(|i| v[i] / m[i][i]).collect())
}

const MAX_SQRT_SEARCH_DEGREE: usize = 16;

/// The positive square root of the rational `k` inside `field`, if it lies
/// there.
///
/// Candidates come from solving the Vandermonde system over the complex
/// embeddings for each sign pattern, rounding to rationals; a candidate is
/// accepted only after the exact check `s² = k`.
pub fn sqrt_in_field(field: &NumberField, k: &BigRational) -> Result<Option<FieldElem>> {
    if k.is_negative() {
        return Ok(None);
    }
    let rat_sqrt = |q: &BigRational| {
        let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
        (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
    };
    if let Some(r) = rat_sqrt(k) {
        return Ok(Some(field.rational(r)));
    }
    let d = field.degree();
    if d == 1 || d % 2 == 1 {
        return Ok(None);
    }
    if d > MAX_SQRT_SEARCH_DEGREE {
        return Err(Error::TooLarge(format!("square-root search in a degree {d} field")));
    }
    let roots = poly::complex_roots(field.minpoly());
    let theta = field.generator().to_f64();
    let real_idx = (0..d).min_by(|&a, &b| (roots[a] - theta).norm().partial_cmp(&(roots[b] - theta).norm()).unwrap()).unwrap();
    let mut order: Vec<usize> = vec![real_idx];
    order.extend((0..d).filter(|&i| i != real_idx));
    let vand: Vec<Vec<Complex64>> = order.iter().map(|&i| (0..d).map(|j| roots[i].powu(j as u32)).collect()).collect();
    let sk = k.to_f64().unwrap_or(f64::NAN).sqrt();
    for mask in 0u32..(1u32 << (d - 1)) {
        let rhs: Vec<Complex64> = (0..d)
            .map(|i| {
                let neg = i > 0 && (mask >> (i - 1)) & 1 == 1;
                Complex64::new(if neg { -sk } else { sk }, 0.0)
            })
            .collect();
        let Some(c) = solve_complex(vand.clone(), rhs) else { continue };
        if c.iter().any(|z| z.im.abs() > 1e-6) {
            continue;
        }
        let coords: Option<Vec<BigRational>> = c.iter().map(|z| approx_rational(z.re, 1 << 20, 1e-7)).collect();
        let Some(coords) = coords else { continue };
        let s = field.from_coords(coords)?;
        if s.mul(&s)?.as_rational().as_ref() == Some(k) {
            return Ok(Some(if s.sign()? < 0 { s.neg() } else { s }));
        }
    }
    Ok(None)
}

/// `√k` inside `field`, or `UnknownConstant` when the field does not contain it.
pub fn sqrt_const(field: &NumberField, k: u64) -> Result<FieldElem> {
    let cache_key = (field.minpoly().to_vec(), k);
    type SqrtCache = Mutex<HashMap<(IntPoly, u64), Option<FieldElem>>>;
    static SQRT_CACHE: OnceLock<SqrtCache> = OnceLock::new();
    let cache = SQRT_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(Some(s)) = cache.lock().unwrap().get(&cache_key) {
        if s.field() == field {
            return field.from_coords(s.coords().to_vec());
        }
    }
    let (s, f) = squarefree_split(k);
    let root = sqrt_in_field(field, &BigRational::from_integer(BigInt::from(f)))?
        .ok_or_else(|| Error::UnknownConstant(format!("sqrt({k}) is not in the field {field:?}")))?;
    let out = root.scale(&BigRational::from_integer(BigInt::from(s)));
    cache.lock().unwrap().insert(cache_key, Some(out.clone()));
    Ok(out)
}

/// The golden ratio `(1 + √5)/2` inside `field`.
pub fn phi_const(field: &NumberField) -> Result<FieldElem> {
    let r5 = sqrt_const(field, 5)?;
    Ok(r5.add_rational(&BigRational::one()).scale(&BigRational::new(BigInt::one(), BigInt::from(2))))
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.25`.
pub fn parse_rational(src: &str) -> Result<BigRational> {
    let s = src.trim();
    let bad = || Error::Syntax { position: 0, message: format!("invalid rational `{src}`") };
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        if f.is_empty() || !f.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = i.starts_with('-');
        let ip: BigInt = if i.is_empty() || i == "-" || i == "+" { BigInt::zero() } else { i.parse().map_err(|_| bad())? };
        let fp: BigInt = f.parse().map_err(|_| bad())?;
        let den = BigInt::from(10).pow(f.len() as u32);
        let mag = ip.abs() * &den + fp;
        return Ok(BigRational::new(if neg { -mag } else { mag }, den));
    }
    s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad())
}

/// Parses `field <name> : <polynomial in x> in [<rat>,<rat>]`.
pub fn parse_field_decl(line: &str) -> Result<(String, NumberField)> {
    let err = |m: &str| Error::Syntax { position: 0, message: format!("{m} in `{line}`") };
    let rest = line.trim().strip_prefix("field").ok_or_else(|| err("expected `field`"))?;
    let (name, rest) = rest.split_once(':').ok_or_else(|| err("expected `:`"))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(err("invalid field name"));
    }
    let idx = rest.rfind(" in ").ok_or_else(|| err("expected `in [lo,hi]`"))?;
    let poly_src = &rest[..idx];
    let iv = rest[idx + 4..].trim();
    let iv = iv.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(|| err("expected `[lo,hi]`"))?;
    let (lo, hi) = iv.split_once(',').ok_or_else(|| err("expected `,` in interval"))?;
    let minpoly = poly::parse_int_poly(poly_src)?;
    let field = NumberField::with_name(Some(name.to_string()), minpoly, parse_rational(lo)?, parse_rational(hi)?)?;
    Ok((name.to_string(), field))
}

/// Integer `n` as an exact value.
pub fn int_value(n: impl Into<BigInt>) -> RealValue {
    RealValue::from(n.into())
}

/// `⌊x⌋` reduced to `i128`.
pub fn floor_i128(x: &RealValue) -> Result<i128> {
    x.floor()?.to_i128().ok_or(Error::Overflow("floor"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_split(8), (2, 2));
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(squarefree_split(49), (7, 1));
        assert_eq!(squarefree_split(30), (1, 30));
    }

    #[test]
    fn compositum_of_two_and_three() {
        let k = multiquadratic_field(&[2, 3]).unwrap();
        assert_eq!(k.minpoly(), &poly::int_poly(&[1, 0, -10, 0, 1])[..]);
        let s2 = sqrt_const(&k, 2).unwrap();
        let s3 = sqrt_const(&k, 3).unwrap();
        let t = k.generator();
        // √2 = (θ³ − 9θ)/2, √3 = (11θ − θ³)/2
        assert_eq!(s2, t.pow(3).sub(&t.scale(&q(9, 1))).unwrap().scale(&q(1, 2)));
        assert_eq!(s3, t.scale(&q(11, 1)).sub(&t.pow(3)).unwrap().scale(&q(1, 2)));
        assert_eq!(s2.add(&s3).unwrap(), t);
        assert_eq!(sqrt_const(&k, 6).unwrap().mul(&sqrt_const(&k, 6).unwrap()).unwrap(), k.int(6));
        assert!(sqrt_const(&k, 5).is_err());
        assert_eq!(sqrt_const(&k, 8).unwrap(), s2.scale(&q(2, 1)));
    }

    #[test]
    fn golden_ratio_in_sqrt5() {
        let k = golden_field();
        let phi = phi_const(&k).unwrap();
        let z = phi.mul(&phi).unwrap().sub(&phi).unwrap().add_rational(&q(-1, 1));
        assert!(z.is_zero());
        assert_eq!(phi.scale(&q(4, 1)).floor().unwrap(), BigInt::from(6));
    }

    #[test]
    fn triple_compositum() {
        let k = multiquadratic_field(&[2, 3, 5]).unwrap();
        assert_eq!(k.degree(), 8);
        for g in [2u64, 3, 5, 6, 10, 15, 30] {
            let s = sqrt_const(&k, g).unwrap();
            assert_eq!(s.mul(&s).unwrap(), k.int(g as i64));
        }
    }

    #[test]
    fn dependent_radicands_collapse() {
        let k = multiquadratic_field(&[2, 3, 6]).unwrap();
        assert_eq!(k, multiquadratic_field(&[3, 2]).unwrap());
        assert_eq!(k.degree(), 4);
        assert_eq!(multiquadratic_field(&[6, 10, 15, 8]).unwrap().degree(), 8);
        assert_eq!(multiquadratic_field(&[6, 10, 15]).unwrap().degree(), 4);
        assert_eq!(independent_radicands(&[12, 3, 27]), vec![3]);
        let s = sqrt_const(&k, 6).unwrap();
        assert_eq!(s.mul(&s).unwrap(), k.int(6));
    }

    #[test]
    fn field_declarations() {
        let (name, k) = parse_field_decl("field K : x^4-10*x^2+1 in [3,4]").unwrap();
        assert_eq!(name, "K");
        assert_eq!(k, multiquadratic_field(&[2, 3]).unwrap());
        assert!(parse_field_decl("field K : x^2-4 in [1,3]").is_err());
        let (_, q1) = parse_field_decl("field Q1 : x-2 in [2,2]").unwrap();
        assert_eq!(q1.degree(), 1);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/10").unwrap(), q(1, 10));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
    }
}
