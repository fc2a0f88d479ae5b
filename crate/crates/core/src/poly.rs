//! Dense univariate polynomials over ℤ and ℚ, stored low degree first.
//!
//! Only what the number-field layer needs: exact evaluation, Euclidean
//! division, Sturm root counting, resultants and an irreducibility test.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type IntPoly = Vec<BigInt>;
pub type RatPoly = Vec<BigRational>;

pub fn int_poly(coeffs: &[i64]) -> IntPoly {
    coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn to_rat(p: &[BigInt]) -> RatPoly {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval_int(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

pub fn eval_rat(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &[BigRational]) -> RatPoly {
    p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect()
}

/// Euclidean division `a = q*b + r` with `deg r < deg b`.
pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (RatPoly, RatPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r: RatPoly = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead = &b[db];
    let mut q = vec![BigRational::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] / lead;
        let shift = dr - db;
        for (i, c) in b.iter().enumerate().take(db + 1) {
            r[i + shift] -= &f * c;
        }
        q[shift] = f;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let n = a.len().max(b.len());
    let mut out: RatPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn make_monic(mut p: RatPoly) -> RatPoly {
    trim(&mut p);
    if let Some(lead) = p.last().cloned() {
        for c in p.iter_mut() {
            *c = &*c / &lead;
        }
    }
    p
}

pub fn gcd(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while degree(&y).is_some() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(x)
}

/// Extended Euclid: returns `(g, s)` with `s*a ≡ g (mod m)`, `g` monic.
pub fn inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<RatPoly> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1): (RatPoly, RatPoly) = (Vec::new(), vec![BigRational::one()]);
    trim(&mut r1);
    let (_, r1_red) = divrem(&r1, m);
    r1 = r1_red;
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is the gcd; invertible iff it is a nonzero constant.
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = r0[0].clone();
    let inv: RatPoly = s0.into_iter().map(|x| x / &c).collect();
    Some(divrem(&inv, m).1)
}

/// Sturm sequence of a square-free polynomial.
fn sturm_chain(p: &[BigRational]) -> Vec<RatPoly> {
    let mut chain = vec![p.to_vec(), derivative(p)];
    loop {
        let n = chain.len();
        if degree(&chain[n - 1]).is_none() {
            chain.pop();
            break;
        }
        let (_, r) = divrem(&chain[n - 2], &chain[n - 1]);
        if degree(&r).is_none() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_variations(chain: &[RatPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for q in chain {
        let v = eval_rat(q, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the closed interval `[lo, hi]`.
pub fn count_real_roots(p: &[BigInt], lo: &BigRational, hi: &BigRational) -> usize {
    let rp = to_rat(p);
    let sqf = {
        let g = gcd(&rp, &derivative(&rp));
        divrem(&rp, &g).0
    };
    let chain = sturm_chain(&sqf);
    let open = sign_variations(&chain, lo).saturating_sub(sign_variations(&chain, hi));
    open + usize::from(eval_rat(&sqf, lo).is_zero())
}

/// Resultant of two polynomials over ℚ via the Euclidean recursion.
pub fn resultant(p: &[BigRational], q: &[BigRational]) -> BigRational {
    let (Some(dp), Some(dq)) = (degree(p), degree(q)) else {
        return BigRational::zero();
    };
    if dq == 0 {
        return pow_rat(&q[0], dp);
    }
    if dp < dq {
        let r = resultant(q, p);
        return if (dp * dq) % 2 == 1 { -r } else { r };
    }
    // Res(p, q) = (-1)^{dp dq} lc(q)^{dp - dr} Res(q, r)
    let (_, r) = divrem(p, q);
    let Some(dr) = degree(&r) else {
        return BigRational::zero();
    };
    let sign = if (dp * dq) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
    sign * pow_rat(&q[dq], dp - dr) * resultant(q, &r)
}

pub fn pow_rat(x: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// All complex roots by Durand–Kerner iteration followed by Newton polishing.
pub fn complex_roots(p: &[BigInt]) -> Vec<Complex64> {
    let d = p.len() - 1;
    let lead = p[d].to_f64().unwrap_or(1.0);
    let c: Vec<f64> = p.iter().map(|x| x.to_f64().unwrap_or(f64::MAX) / lead).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let deval = |z: Complex64| c.iter().enumerate().skip(1).rev().fold(Complex64::new(0.0, 0.0), |acc, (i, &a)| acc * z + a * i as f64);
    let radius = 1.0 + c[..d].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut z: Vec<Complex64> =
        (0..d).map(|k| Complex64::from_polar(radius * 0.9, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..5 {
            let dv = deval(*r);
            if dv.norm() == 0.0 {
                break;
            }
            *r -= eval(*r) / dv;
        }
    }
    z
}

/// Exact division of integer polynomials; `None` if `b` does not divide `a`.
pub fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    let (q, r) = divrem(&to_rat(a), &to_rat(b));
    if degree(&r).is_some() {
        return None;
    }
    q.into_iter().map(|c| if c.is_integer() { Some(c.to_integer()) } else { None }).collect()
}

const MAX_FACTOR_DEGREE: usize = 16;

/// Finds a nontrivial monic factor of a monic integer polynomial, if any.
///
/// Every monic factor over ℤ is the product of `x - r` over some subset of
/// the complex roots, so candidates are formed from root subsets, rounded to
/// integers and then confirmed by exact division. Repeated roots are caught
/// exactly through `gcd(p, p')` first.
pub fn find_factor(p: &[BigInt]) -> Result<Option<IntPoly>> {
    let d = p.len() - 1;
    if d <= 1 {
        return Ok(None);
    }
    if d > MAX_FACTOR_DEGREE {
        return Err(Error::InvalidPolynomial(format!("degree {d} exceeds the supported maximum {MAX_FACTOR_DEGREE}")));
    }
    let rp = to_rat(p);
    let g = gcd(&rp, &derivative(&rp));
    if degree(&g).unwrap_or(0) > 0 {
        let gi: Option<IntPoly> = g.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect();
        return Ok(Some(gi.unwrap_or_else(|| p.to_vec())));
    }
    let roots = complex_roots(p);
    for size in 1..=d / 2 {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mut coeffs = vec![Complex64::new(1.0, 0.0)];
            for &i in &idx {
                let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
                for (k, c) in coeffs.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * roots[i];
                }
                coeffs = next;
            }
            let near_integer = coeffs.iter().all(|c| c.im.abs() < 1e-6 && (c.re - c.re.round()).abs() < 1e-6 * (1.0 + c.re.abs()));
            if near_integer {
                let cand: IntPoly = coeffs.iter().map(|c| BigInt::from(c.re.round() as i64)).collect();
                if exact_div(p, &cand).is_some() {
                    return Ok(Some(cand));
                }
            }
            let mut k = size;
            while k > 0 && idx[k - 1] == d - size + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(None)
}

/// Parses an integer polynomial in `x`, e.g. `x^4-10*x^2+1`.
pub fn parse_int_poly(src: &str) -> Result<IntPoly> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |pos: usize, msg: &str| Error::Syntax { position: pos, message: msg.to_string() };
    if s.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let bytes = s.as_bytes();
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if i != 0 {
            return Err(err(i, "expected `+` or `-`"));
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let mut coeff = if i > start { s[start..i].parse::<BigInt>().map_err(|_| err(start, "bad integer"))? } else { BigInt::one() };
        let mut power = 0usize;
        let had_digits = i > start;
        if had_digits && i < bytes.len() && bytes[i] == b'*' {
            i += 1;
            if i >= bytes.len() || bytes[i] != b'x' {
                return Err(err(i, "expected `x` after `*`"));
            }
        }
        if i < bytes.len() && bytes[i] == b'x' {
            i += 1;
            power = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let ps = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                power = s[ps..i].parse().map_err(|_| err(ps, "bad exponent"))?;
            }
        } else if !had_digits {
            return Err(err(i, "expected a term"));
        }
        coeff *= sign;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        coeffs[power] += coeff;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(coeffs)
}

pub fn format_int_poly(p: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        if i == 0 {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_and_format_round_trip() {
        let p = parse_int_poly("x^4-10*x^2+1").unwrap();
        assert_eq!(p, int_poly(&[1, 0, -10, 0, 1]));
        assert_eq!(format_int_poly(&p), "x^4-10*x^2+1");
        assert_eq!(parse_int_poly("x - 2").unwrap(), int_poly(&[-2, 1]));
        assert_eq!(parse_int_poly("3x^2+x").unwrap(), int_poly(&[0, 1, 3]));
        assert!(parse_int_poly("x^^2").is_err());
    }

    #[test]
    fn sturm_counts_roots() {
        let p = int_poly(&[1, 0, -10, 0, 1]); // roots ±√2±√3
        assert_eq!(count_real_roots(&p, &q(3, 1), &q(4, 1)), 1);
        assert_eq!(count_real_roots(&p, &q(-4, 1), &q(4, 1)), 4);
        assert_eq!(count_real_roots(&p, &q(0, 1), &q(1, 4)), 0);
        let lin = int_poly(&[-2, 1]);
        assert_eq!(count_real_roots(&lin, &q(2, 1), &q(2, 1)), 1);
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x^2 - 2, x - 1) = (1 - 2) = -1 ... product of (r - 1) over roots of x^2-2 = (√2-1)(-√2-1) = -1
        let p = to_rat(&int_poly(&[-2, 0, 1]));
        let l = to_rat(&int_poly(&[-1, 1]));
        assert_eq!(resultant(&p, &l), q(-1, 1));
    }

    #[test]
    fn factor_detection() {
        assert!(find_factor(&int_poly(&[1, 0, -10, 0, 1])).unwrap().is_none());
        assert!(find_factor(&int_poly(&[-1, -1, -1, 1])).unwrap().is_none());
        // x^4 - 1 = (x-1)(x+1)(x^2+1)
        assert!(find_factor(&int_poly(&[-1, 0, 0, 0, 1])).unwrap().is_some());
        // (x^2 - 2)(x^2 - 3)
        let f = find_factor(&int_poly(&[6, 0, -5, 0, 1])).unwrap().unwrap();
        assert!(exact_div(&int_poly(&[6, 0, -5, 0, 1]), &f).is_some());
        // repeated root
        assert!(find_factor(&int_poly(&[1, -2, 1])).unwrap().is_some());
    }

    #[test]
    fn modular_inverse() {
        let m = to_rat(&int_poly(&[-2, 0, 1]));
        let a = to_rat(&int_poly(&[1, 1])); // 1 + √2, inverse √2 - 1
        let inv = inverse_mod(&a, &m).unwrap();
        assert_eq!(inv, vec![q(-1, 1), q(1, 1)]);
    }
}
