//! Sum-of-products normal form `g = Σᵢ pᵢ(n) Πⱼ ⌊hᵢⱼ(n)⌋`.

use std::fmt;

use num_bigint::BigInt;

use super::Expr;
use crate::error::{Error, Result};
use crate::exactreal::RealValue;

/// One summand `p(n) · Π ⌊hⱼ(n)⌋`; `poly` holds coefficients, lowest first.
#[derive(Clone, Debug)]
pub struct Term {
    pub poly: Vec<RealValue>,
    pub floors: Vec<Expr>,
}

#[derive(Clone, Debug)]
pub struct SumNormalForm {
    pub terms: Vec<Term>,
}

fn poly_add(a: &[RealValue], b: &[RealValue]) -> Result<Vec<RealValue>> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) | (None, Some(x)) => Ok(x.clone()),
            (None, None) => unreachable!(),
        })
        .collect()
}

fn poly_mul(a: &[RealValue], b: &[RealValue]) -> Result<Vec<RealValue>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![RealValue::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y)?)?;
        }
    }
    Ok(out)
}

fn poly_neg(a: &[RealValue]) -> Vec<RealValue> {
    a.iter().map(RealValue::neg).collect()
}

/// Coefficients of a floor-free expression as a polynomial in `n`.
fn to_poly(e: &Expr) -> Result<Vec<RealValue>> {
    Ok(match e {
        Expr::Const { value, .. } => vec![value.clone()],
        Expr::Var => vec![RealValue::zero(), RealValue::from(1)],
        Expr::Param(i) => return Err(Error::MissingParam(*i)),
        Expr::Add(v) => {
            let mut acc = Vec::new();
            for c in v {
                acc = poly_add(&acc, &to_poly(c)?)?;
            }
            acc
        }
        Expr::Mul(v) => {
            let mut acc = vec![RealValue::from(1)];
            for c in v {
                acc = poly_mul(&acc, &to_poly(c)?)?;
            }
            acc
        }
        Expr::Neg(x) => poly_neg(&to_poly(x)?),
        Expr::Pow(x, k) => {
            let base = to_poly(x)?;
            let mut acc = vec![RealValue::from(1)];
            for _ in 0..*k {
                acc = poly_mul(&acc, &base)?;
            }
            acc
        }
        _ => unreachable!("to_poly called on an expression with floors"),
    })
}

fn single(poly: Vec<RealValue>, floors: Vec<Expr>) -> Vec<Term> {
    vec![Term { poly, floors }]
}

fn negate(terms: Vec<Term>) -> Vec<Term> {
    terms.into_iter().map(|t| Term { poly: poly_neg(&t.poly), floors: t.floors }).collect()
}

fn product(a: &[Term], b: &[Term]) -> Result<Vec<Term>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut floors = x.floors.clone();
            floors.extend(y.floors.iter().cloned());
            out.push(Term { poly: poly_mul(&x.poly, &y.poly)?, floors });
        }
    }
    Ok(out)
}

fn half() -> Expr {
    Expr::constant(RealValue::rational(1, 2))
}

fn build(e: &Expr) -> Result<Vec<Term>> {
    if e.height() == 0 {
        return Ok(single(to_poly(e)?, vec![]));
    }
    let one = || vec![RealValue::from(1)];
    let minus_one = || vec![RealValue::from(-1)];
    Ok(match e {
        Expr::Floor(x) => single(one(), vec![(**x).clone()]),
        Expr::Frac(x) => {
            let mut t = build(x)?;
            t.extend(single(minus_one(), vec![(**x).clone()]));
            t
        }
        Expr::Ceil(x) => single(minus_one(), vec![Expr::neg((**x).clone())]),
        Expr::Nint(x) => single(one(), vec![Expr::Add(vec![(**x).clone(), half()])]),
        Expr::Dist(x) => {
            // ‖x‖ = −2y⌊−y⌋ − y with y = x − ⌊x + ½⌋
            let shifted = Expr::Add(vec![(**x).clone(), half()]);
            let y = Expr::sub((**x).clone(), Expr::floor(shifted.clone()));
            let mut ty = build(x)?;
            ty.extend(single(minus_one(), vec![shifted]));
            let mut t = product(&ty, &single(vec![RealValue::from(-2)], vec![Expr::neg(y)]))?;
            t.extend(negate(ty));
            t
        }
        Expr::Add(v) => {
            let mut t = Vec::new();
            for c in v {
                t.extend(build(c)?);
            }
            t
        }
        Expr::Mul(v) => {
            let mut t = single(one(), vec![]);
            for c in v {
                t = product(&t, &build(c)?)?;
            }
            t
        }
        Expr::Neg(x) => negate(build(x)?),
        Expr::Pow(x, k) => {
            let base = build(x)?;
            let mut t = single(one(), vec![]);
            for _ in 0..*k {
                t = product(&t, &base)?;
            }
            t
        }
        Expr::Const { .. } | Expr::Var | Expr::Param(_) => unreachable!("height 0"),
    })
}

/// Normal form following the induction on height: polynomials are the base
/// case, integer-part operations wrap their argument, sums concatenate and
/// products distribute.
pub fn sum_normal_form(e: &Expr) -> Result<SumNormalForm> {
    Ok(SumNormalForm { terms: build(e)? })
}

fn poly_expr(p: &[RealValue]) -> Expr {
    let mut parts = Vec::new();
    for (k, c) in p.iter().enumerate() {
        let mut factors = vec![Expr::constant(c.clone())];
        match k {
            0 => {}
            1 => factors.push(Expr::Var),
            _ => factors.push(Expr::Pow(Box::new(Expr::Var), k as u32)),
        }
        parts.push(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) });
    }
    match parts.len() {
        0 => Expr::int(0),
        1 => parts.pop().unwrap(),
        _ => Expr::Add(parts),
    }
}

impl SumNormalForm {
    pub fn eval(&self, n: &BigInt) -> Result<RealValue> {
        let nv = RealValue::from(n.clone());
        let mut acc = RealValue::zero();
        for t in &self.terms {
            let mut pv = RealValue::zero();
            for c in t.poly.iter().rev() {
                pv = pv.mul(&nv)?.add(c)?;
            }
            for h in &t.floors {
                pv = pv.mul(&RealValue::from(h.eval(n)?.floor()?))?;
            }
            acc = acc.add(&pv)?;
        }
        Ok(acc)
    }

    /// The normal form as an ordinary expression.
    pub fn to_expr(&self) -> Expr {
        let parts: Vec<Expr> = self
            .terms
            .iter()
            .map(|t| {
                let mut factors = vec![poly_expr(&t.poly)];
                factors.extend(t.floors.iter().cloned().map(Expr::floor));
                if factors.len() == 1 {
                    factors.pop().unwrap()
                } else {
                    Expr::Mul(factors)
                }
            })
            .collect();
        match parts.len() {
            0 => Expr::int(0),
            1 => parts.into_iter().next().unwrap(),
            _ => Expr::Add(parts),
        }
    }

    /// `s` and the `rᵢ`.
    pub fn shape(&self) -> (usize, Vec<usize>) {
        (self.terms.len(), self.terms.iter().map(|t| t.floors.len()).collect())
    }
}

impl fmt::Display for SumNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}
