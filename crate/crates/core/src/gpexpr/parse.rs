//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary ("*" unary)*
//! unary  := "-" unary | factor
//! factor := atom ("^" uint)?
//! atom   := uint ("/" uint)? | "n" | "a" uint | fn "(" expr ")" | "(" expr ")"
//!         | "sqrt(" uint ")" | "phi" | "pi" | "theta" | identifier
//! fn     := "floor" | "frac" | "ceil" | "nint" | "dist"
//! ```

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::Expr;
use crate::error::{Error, Result};
use crate::exactreal::{multiquadratic_field, phi_const, pi, sqrt_const, squarefree_split, NumberField, RealValue};

/// Resolution environment for constants.
///
/// When `field` is `None`, a field is inferred from the `sqrt(k)` and `phi`
/// occurrences in the source (their multiquadratic compositum), or from the
/// field of a named constant.
#[derive(Clone, Debug, Default)]
pub struct ParseContext {
    pub field: Option<NumberField>,
    pub constants: HashMap<String, RealValue>,
}

impl ParseContext {
    pub fn with_field(field: NumberField) -> Self {
        ParseContext { field: Some(field), constants: HashMap::new() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((s, Tok::Num(src[s..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((s, Tok::Ident(src[s..i].to_string())));
        } else if "+-*^/()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Syntax { position: i, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

fn is_param(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('a')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Square-free radicands needed by the source, for field inference.
fn scan_radicands(toks: &[(usize, Tok)]) -> Vec<u64> {
    let mut out = Vec::new();
    for (i, (_, t)) in toks.iter().enumerate() {
        match t {
            Tok::Ident(s) if s == "phi" => out.push(5),
            Tok::Ident(s) if s == "sqrt" => {
                if let Some((_, Tok::Num(k))) = toks.get(i + 2) {
                    if let Ok(k) = u64::try_from(k) {
                        out.push(k);
                    }
                }
            }
            _ => {}
        }
    }
    out
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    field: Option<NumberField>,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { position: self.offset(), message: msg.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(Expr::neg(self.term()?));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.unary()?];
        while self.eat('*') {
            factors.push(self.unary()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) })
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::neg(self.unary()?));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    let e = u32::try_from(&k).map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(self.err("expected an unsigned integer exponent")),
            }
        }
        Ok(base)
    }

    fn uint_arg(&mut self) -> Result<BigInt> {
        self.expect('(')?;
        let k = match self.peek().cloned() {
            Some(Tok::Num(k)) => k,
            _ => return Err(self.err("expected an unsigned integer")),
        };
        self.pos += 1;
        self.expect(')')?;
        Ok(k)
    }

    fn field_for(&self, what: &str) -> Result<&NumberField> {
        self.field.as_ref().ok_or_else(|| Error::UnknownConstant(format!("{what} needs a number field")))
    }

    fn resolve_named(&mut self, name: &str) -> Result<RealValue> {
        if let Some(v) = self.ctx.constants.get(name) {
            if let Some(f) = v.field() {
                match &self.field {
                    Some(own) if own != f => return Err(Error::FieldMismatch),
                    Some(_) => {}
                    None => self.field = Some(f.clone()),
                }
            }
            return Ok(v.clone());
        }
        match name {
            "phi" => Ok(RealValue::from(phi_const(self.field_for("phi")?)?)),
            "pi" => Ok(RealValue::from(pi())),
            "theta" => Ok(RealValue::from(self.field_for("theta")?.generator())),
            _ => Err(Error::UnknownConstant(name.to_string())),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = self.offset();
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Num(p) => {
                if self.eat('/') {
                    let q = match self.peek().cloned() {
                        Some(Tok::Num(q)) if q != BigInt::from(0) => q,
                        _ => return Err(self.err("expected a nonzero denominator")),
                    };
                    self.pos += 1;
                    let label = format!("{p}/{q}");
                    return Ok(Expr::labeled(label, RealValue::from(BigRational::new(p, q))));
                }
                Ok(Expr::labeled(p.to_string(), RealValue::from(p)))
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym(c) => Err(Error::Syntax { position: start, message: format!("unexpected `{c}`") }),
            Tok::Ident(name) => {
                let wrap = |f: fn(Box<Expr>) -> Expr, p: &mut Self| -> Result<Expr> {
                    p.expect('(')?;
                    let e = p.expr()?;
                    p.expect(')')?;
                    Ok(f(Box::new(e)))
                };
                match name.as_str() {
                    "n" => Ok(Expr::Var),
                    "floor" => wrap(Expr::Floor, self),
                    "frac" => wrap(Expr::Frac, self),
                    "ceil" => wrap(Expr::Ceil, self),
                    "nint" => wrap(Expr::Nint, self),
                    "dist" => wrap(Expr::Dist, self),
                    "sqrt" => {
                        let k = self.uint_arg()?;
                        let k = u64::try_from(&k).map_err(|_| Error::Syntax { position: start, message: "radicand too large".into() })?;
                        let label = format!("sqrt({k})");
                        let (root, rest) = squarefree_split(k);
                        if rest == 1 {
                            return Ok(Expr::labeled(label, RealValue::from(BigInt::from(root))));
                        }
                        let v = sqrt_const(self.field_for("sqrt")?, k)?;
                        Ok(Expr::labeled(label, RealValue::from(v)))
                    }
                    _ => {
                        if let Some(i) = is_param(&name) {
                            return Ok(Expr::Param(i));
                        }
                        let v = self.resolve_named(&name)?;
                        Ok(Expr::labeled(name, v))
                    }
                }
            }
        }
    }
}

/// Field implied by the `sqrt(k)` and `phi` occurrences anywhere in `src`,
/// which may contain text outside the expression grammar.
pub fn infer_field(src: &str) -> Result<Option<NumberField>> {
    let cleaned: String = src.chars().map(|c| if c.is_ascii_alphanumeric() || "_+-*^/()".contains(c) { c } else { ' ' }).collect();
    let ks = scan_radicands(&tokenize(&cleaned)?);
    if ks.is_empty() {
        return Ok(None);
    }
    let f = multiquadratic_field(&ks)?;
    Ok((f.degree() > 1).then_some(f))
}

/// Parses an expression; `a<k>` leaves make it parametric.
pub fn parse_expr(src: &str, ctx: &ParseContext) -> Result<Expr> {
    let toks = tokenize(src)?;
    let field = match &ctx.field {
        Some(f) => Some(f.clone()),
        None => {
            let ks = scan_radicands(&toks);
            if ks.is_empty() {
                None
            } else {
                let f = multiquadratic_field(&ks)?;
                (f.degree() > 1).then_some(f)
            }
        }
    };
    let mut p = Parser { toks, pos: 0, end: src.len(), field, ctx };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}
