//! Generalised-polynomial expressions: AST, exact evaluation, structural
//! height and parameter binding.

mod normal;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactreal::RealValue;

pub use normal::{sum_normal_form, SumNormalForm, Term};
pub use parse::{infer_field, parse_expr, ParseContext};

/// A generalised-polynomial expression in the integer variable `n`.
///
/// Constants carry the label they were written with; two constants compare
/// equal when their labels agree.
#[derive(Clone, Debug)]
pub enum Expr {
    Const { label: String, value: RealValue },
    Var,
    Param(u32),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Floor(Box<Expr>),
    Frac(Box<Expr>),
    Ceil(Box<Expr>),
    Nint(Box<Expr>),
    Dist(Box<Expr>),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use Expr::*;
        match (self, other) {
            (Const { label: a, .. }, Const { label: b, .. }) => a == b,
            (Var, Var) => true,
            (Param(a), Param(b)) => a == b,
            (Add(a), Add(b)) | (Mul(a), Mul(b)) => a == b,
            (Neg(a), Neg(b)) | (Floor(a), Floor(b)) | (Frac(a), Frac(b)) => a == b,
            (Ceil(a), Ceil(b)) | (Nint(a), Nint(b)) | (Dist(a), Dist(b)) => a == b,
            (Pow(a, e), Pow(b, f)) => a == b && e == f,
            _ => false,
        }
    }
}

pub type Assignment = BTreeMap<u32, RealValue>;

impl Expr {
    pub fn constant(value: RealValue) -> Expr {
        Expr::Const { label: value.label(), value }
    }

    pub fn labeled(label: impl Into<String>, value: RealValue) -> Expr {
        Expr::Const { label: label.into(), value }
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(RealValue::from(n))
    }

    pub fn floor(e: Expr) -> Expr {
        Expr::Floor(Box::new(e))
    }

    pub fn frac(e: Expr) -> Expr {
        Expr::Frac(Box::new(e))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Add(vec![a, Expr::neg(b)])
    }

    fn children(&self) -> Vec<&Expr> {
        use Expr::*;
        match self {
            Const { .. } | Var | Param(_) => vec![],
            Add(v) | Mul(v) => v.iter().collect(),
            Neg(x) | Pow(x, _) | Floor(x) | Frac(x) | Ceil(x) | Nint(x) | Dist(x) => vec![x],
        }
    }

    /// Indices of the parameter slots occurring in the expression.
    pub fn index_set(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<u32>) {
        if let Expr::Param(i) = self {
            out.insert(*i);
        }
        for c in self.children() {
            c.collect_params(out);
        }
    }

    /// Whether the variable `n` occurs.
    pub fn mentions_var(&self) -> bool {
        matches!(self, Expr::Var) || self.children().iter().any(|c| c.mentions_var())
    }

    pub fn is_parametric(&self) -> bool {
        !self.index_set().is_empty()
    }

    /// Structural height: the nesting depth of integer-part operations.
    ///
    /// `floor`, `frac`, `ceil` and `nint` add one level. `dist` adds two,
    /// matching its expansion `‖x‖ = y(2⌈y⌉ − 1)` with `y = x − ⌊x + ½⌋`.
    pub fn height(&self) -> u32 {
        use Expr::*;
        match self {
            Const { .. } | Var | Param(_) => 0,
            Add(v) | Mul(v) => v.iter().map(Expr::height).max().unwrap_or(0),
            Neg(x) | Pow(x, _) => x.height(),
            Floor(x) | Frac(x) | Ceil(x) | Nint(x) => x.height() + 1,
            Dist(x) => x.height() + 2,
        }
    }

    /// Exact value at the integer `n`.
    pub fn eval(&self, n: &BigInt) -> Result<RealValue> {
        self.eval_with(n, &Assignment::new())
    }

    pub fn eval_i64(&self, n: i64) -> Result<RealValue> {
        self.eval(&BigInt::from(n))
    }

    /// Evaluates with parameter slots read from `params`.
    pub fn eval_with(&self, n: &BigInt, params: &Assignment) -> Result<RealValue> {
        use Expr::*;
        Ok(match self {
            Const { value, .. } => value.clone(),
            Var => RealValue::from(n.clone()),
            Param(i) => params.get(i).cloned().ok_or(Error::MissingParam(*i))?,
            Add(v) => {
                let mut acc = RealValue::zero();
                for c in v {
                    acc = acc.add(&c.eval_with(n, params)?)?;
                }
                acc
            }
            Mul(v) => {
                let mut acc = RealValue::from(1);
                for c in v {
                    acc = acc.mul(&c.eval_with(n, params)?)?;
                }
                acc
            }
            Neg(x) => x.eval_with(n, params)?.neg(),
            Pow(x, e) => x.eval_with(n, params)?.pow(*e)?,
            Floor(x) => RealValue::from(x.eval_with(n, params)?.floor()?),
            Frac(x) => x.eval_with(n, params)?.frac()?,
            Ceil(x) => RealValue::from(x.eval_with(n, params)?.ceil()?),
            Nint(x) => RealValue::from(x.eval_with(n, params)?.nint()?),
            Dist(x) => x.eval_with(n, params)?.dist()?,
        })
    }

    /// Rewrites `frac`, `ceil`, `nint` and `dist` in terms of `floor`.
    pub fn expand_to_floor(&self) -> Expr {
        use Expr::*;
        let half = || Expr::constant(RealValue::rational(1, 2));
        match self {
            Const { .. } | Var | Param(_) => self.clone(),
            Add(v) => Add(v.iter().map(Expr::expand_to_floor).collect()),
            Mul(v) => Mul(v.iter().map(Expr::expand_to_floor).collect()),
            Neg(x) => Expr::neg(x.expand_to_floor()),
            Pow(x, e) => Pow(Box::new(x.expand_to_floor()), *e),
            Floor(x) => Expr::floor(x.expand_to_floor()),
            Frac(x) => {
                let x = x.expand_to_floor();
                Expr::sub(x.clone(), Expr::floor(x))
            }
            Ceil(x) => Expr::neg(Expr::floor(Expr::neg(x.expand_to_floor()))),
            Nint(x) => Expr::floor(Add(vec![x.expand_to_floor(), half()])),
            Dist(x) => {
                let x = x.expand_to_floor();
                let y = Expr::sub(x.clone(), Expr::floor(Add(vec![x, half()])));
                let ceil_y = Expr::neg(Expr::floor(Expr::neg(y.clone())));
                Mul(vec![y, Expr::sub(Mul(vec![Expr::int(2), ceil_y]), Expr::int(1))])
            }
        }
    }

    fn map_params(&self, f: &dyn Fn(u32) -> Result<Expr>) -> Result<Expr> {
        use Expr::*;
        let b = |x: &Expr| -> Result<Box<Expr>> { Ok(Box::new(x.map_params(f)?)) };
        Ok(match self {
            Param(i) => f(*i)?,
            Const { .. } | Var => self.clone(),
            Add(v) => Add(v.iter().map(|c| c.map_params(f)).collect::<Result<_>>()?),
            Mul(v) => Mul(v.iter().map(|c| c.map_params(f)).collect::<Result<_>>()?),
            Neg(x) => Neg(b(x)?),
            Pow(x, e) => Pow(b(x)?, *e),
            Floor(x) => Floor(b(x)?),
            Frac(x) => Frac(b(x)?),
            Ceil(x) => Ceil(b(x)?),
            Nint(x) => Nint(b(x)?),
            Dist(x) => Dist(b(x)?),
        })
    }
}

/// Substitutes every parameter slot; all indices must be assigned.
pub fn bind_params(e: &Expr, assignment: &Assignment) -> Result<Expr> {
    if let Some(missing) = e.index_set().into_iter().find(|i| !assignment.contains_key(i)) {
        return Err(Error::MissingParam(missing));
    }
    e.map_params(&|i| Ok(Expr::constant(assignment[&i].clone())))
}

/// Checks `template_α(n) = base(n + m)` exactly for `n` in `0..window`.
pub fn shift_check(template: &Expr, base: &Expr, m: i64, assignment: &Assignment, window: u64) -> Result<bool> {
    let bound = bind_params(template, assignment)?;
    for n in 0..window {
        let n = BigInt::from(n);
        let lhs = bound.eval(&n)?;
        let rhs = base.eval(&(&n + m))?;
        if lhs.sub(&rhs)?.sign()? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

const PREC_ADD: u8 = 0;
const PREC_MUL: u8 = 1;
const PREC_UNARY: u8 = 2;
const PREC_POW: u8 = 3;
const PREC_ATOM: u8 = 4;

impl Expr {
    fn precedence(&self) -> u8 {
        use Expr::*;
        match self {
            Add(v) if v.len() != 1 => PREC_ADD,
            Mul(v) if v.len() != 1 => PREC_MUL,
            Add(_) | Mul(_) => PREC_ATOM,
            Neg(_) => PREC_UNARY,
            Pow(..) => PREC_POW,
            Const { label, .. } => {
                if label.starts_with('-') {
                    PREC_UNARY
                } else if label.contains('/') && !label.starts_with('(') {
                    PREC_POW
                } else {
                    PREC_ATOM
                }
            }
            _ => PREC_ATOM,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, PREC_ADD)?;
            return write!(f, ")");
        }
        use Expr::*;
        match self {
            Const { label, .. } => write!(f, "{label}"),
            Var => write!(f, "n"),
            Param(i) => write!(f, "a{i}"),
            Add(v) if v.is_empty() => write!(f, "0"),
            Mul(v) if v.is_empty() => write!(f, "1"),
            Add(v) | Mul(v) if v.len() == 1 => {
                write!(f, "(")?;
                v[0].write_at(f, PREC_ADD)?;
                write!(f, ")")
            }
            Add(v) => {
                for (i, c) in v.iter().enumerate() {
                    match c {
                        Neg(inner) if i > 0 => {
                            write!(f, " - ")?;
                            inner.write_at(f, PREC_MUL)?;
                        }
                        _ => {
                            if i > 0 {
                                write!(f, " + ")?;
                            }
                            c.write_at(f, PREC_MUL)?;
                        }
                    }
                }
                Ok(())
            }
            Mul(v) => {
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    c.write_at(f, PREC_UNARY)?;
                }
                Ok(())
            }
            Neg(x) => {
                write!(f, "-")?;
                x.write_at(f, PREC_UNARY)
            }
            Pow(x, e) => {
                x.write_at(f, PREC_ATOM)?;
                write!(f, "^{e}")
            }
            Floor(x) => write_fn(f, "floor", x),
            Frac(x) => write_fn(f, "frac", x),
            Ceil(x) => write_fn(f, "ceil", x),
            Nint(x) => write_fn(f, "nint", x),
            Dist(x) => write_fn(f, "dist", x),
        }
    }
}

fn write_fn(f: &mut fmt::Formatter<'_>, name: &str, x: &Expr) -> fmt::Result {
    write!(f, "{name}(")?;
    x.write_at(f, PREC_ADD)?;
    write!(f, ")")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, PREC_ADD)
    }
}

/// Text form of an expression; `parse_expr` inverts it.
pub fn format_expr(e: &Expr) -> String {
    e.to_string()
}

#[cfg(test)]
mod tests;
