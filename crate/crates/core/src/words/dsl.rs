//! Definition files for fields, constants and words.
//!
//! ```text
//! # comment
//! field K : x^2 - x - 1 in [1, 2]
//! const c = 1/2*(sqrt(5) - 1)
//! word name = source ("|" stage)*
//!
//! source := name                                  a word defined earlier
//!         | sturmian(α, β [, floor | ceil])
//!         | expr(g, {v: label, ...}) | expr(g, lo..hi)
//!         | indicator(g, I) | zero(g) | poly_interval(p, I)
//!         | littlewood(α, β, ε) | heisenberg(α, β, c) | power_digit(α, d)
//!         | recset([a₁, ..., a_d], [x₀, ..., x_{d−1}]) | fibonacci | tribonacci
//!         | sparse(n₀, n₁, ...) | sparse_exp(base, ratio)
//!         | tracked_sparse([f₀, f₁, ...], C) | growth_lambda(p/q)
//!         | set(m₀, m₁, ...) | periodic(s₀, s₁, ...) | constant(label)
//!         | product(w₁, w₂, ...) | case(s₁ => w₁, s₂ => w₂, ...)
//! stage  := code(x: y, ...) | subsequence(h) | progression(A, B)
//!         | dilute(A, pad) | block_permute(A, [π₀, ..., π_{A−1}])
//!         | morphism(x: image, ...) | block(k)
//! ```
//!
//! Interval sets use `[a, b)`, `(a, b]`, `(-inf, b)` joined by `u`.
//! Expressions are in the expression language; a `field` line makes its
//! field the home of `theta` and of every later expression, otherwise the
//! field is inferred per definition from its `sqrt(k)` and `phi` leaves.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{block_word, default_min_ratio};
use super::{
    case_word, code_word_labels, constant_word, enumerated_word, fibonacci_set_word, finite_set_word, growth_lambda, heisenberg,
    interval_indicator, littlewood, morphism_word, periodic_word, poly_interval, power_digit, product_word, rearrange_word, recset, sparse,
    sturmian, subsequence_word, tracked_sparse, word_from_expr, zero_indicator, Alphabet, Coding, IntervalSet, Rearrange, RecurrenceSet,
    SparseSpec, SturmianVariant, Word,
};
use crate::error::{Error, Result};
use crate::exactreal::{parse_field_decl, parse_rational, NumberField, RealValue};
use crate::gpexpr::{infer_field, parse_expr, Expr, ParseContext};

/// Words shipped with the library.
pub const DEFAULT_CATALOG: &str = "\
# Sturmian words
word fib_sturmian = sturmian(1/2*(sqrt(5) - 1), 0, floor)
word fib_sturmian_ceil = sturmian(1/2*(sqrt(5) - 1), 0, ceil)
word silver_sturmian = sturmian(sqrt(2) - 1, 0, floor)
word sturmian_product = product(fib_sturmian, silver_sturmian)
# single-value and interval examples
word one_zero = expr(floor(1 - frac(sqrt(2)*n)), {0: 0, 1: 1})
word frac_half = expr(floor(2*frac(sqrt(2)*n)), {0: a, 1: b})
word golden_square = poly_interval(phi*n^2, [0, 1/4) u (3/4, 1))
word littlewood_23 = littlewood(sqrt(2), sqrt(3), 1/10)
# recurrence and sparse sets
word fib_set = fibonacci
word tribonacci_set = tribonacci
word super_sparse = sparse_exp(2, 2)
word growth_half = growth_lambda(1/2)
word log_tracker = tracked_sparse([1, 1, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4, 4, 4, 5], 1)
# polynomial and nilsystem digits
word power_digit_sqrt2 = power_digit(sqrt(2), 2)
word heisenberg_23 = heisenberg(sqrt(2), sqrt(3), 0)
";

/// Named fields, constants and words loaded from definition files.
#[derive(Clone, Debug, Default)]
pub struct WordCatalog {
    fields: BTreeMap<String, NumberField>,
    constants: BTreeMap<String, RealValue>,
    words: BTreeMap<String, Word>,
    sources: BTreeMap<String, String>,
    current_field: Option<NumberField>,
}

/// Loads definitions into a fresh catalog.
pub fn load_definitions(src: &str) -> Result<WordCatalog> {
    let mut c = WordCatalog::new();
    c.load(src)?;
    Ok(c)
}

fn line_error(line: usize, e: Error) -> Error {
    match e {
        Error::Syntax { message, .. } => Error::Syntax { position: line, message: format!("line {line}: {message}") },
        other => other,
    }
}

fn syntax(message: impl Into<String>) -> Error {
    Error::Syntax { position: 0, message: message.into() }
}

/// Splits at `sep` outside any brackets. Interval notation mixes bracket
/// kinds, so all of `([{` open and all of `)]}` close.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// `name(args)` or a bare `name`.
fn call(s: &str) -> Result<(&str, Vec<&str>)> {
    let s = s.trim();
    match s.find('(') {
        None => {
            if s.is_empty() || !s.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(syntax(format!("expected a name, found `{s}`")));
            }
            Ok((s, Vec::new()))
        }
        Some(i) => {
            let inner = s[i + 1..].strip_suffix(')').ok_or_else(|| syntax(format!("unbalanced call `{s}`")))?;
            let args = if inner.trim().is_empty() { Vec::new() } else { split_top(inner, ',').into_iter().map(str::trim).collect() };
            Ok((s[..i].trim(), args))
        }
    }
}

fn arity(name: &str, args: &[&str], n: std::ops::RangeInclusive<usize>) -> Result<()> {
    if n.contains(&args.len()) {
        Ok(())
    } else {
        Err(syntax(format!("`{name}` takes {}..={} arguments, got {}", n.start(), n.end(), args.len())))
    }
}

fn bracketed(s: &str, open: char, close: char) -> Result<Vec<&str>> {
    let inner = s
        .trim()
        .strip_prefix(open)
        .and_then(|x| x.strip_suffix(close))
        .ok_or_else(|| syntax(format!("expected `{open}...{close}`, found `{s}`")))?;
    Ok(if inner.trim().is_empty() { Vec::new() } else { split_top(inner, ',').into_iter().map(str::trim).collect() })
}

fn int<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| syntax(format!("expected an integer, found `{s}`")))
}

/// `key: value` pairs.
fn pairs(args: &[&str]) -> Result<Vec<(String, String)>> {
    args.iter()
        .map(|a| {
            let (k, v) = a.split_once(':').ok_or_else(|| syntax(format!("expected `x: y`, found `{a}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

impl WordCatalog {
    pub fn new() -> Self {
        WordCatalog::default()
    }

    /// Catalog preloaded with [`DEFAULT_CATALOG`].
    pub fn with_defaults() -> Self {
        load_definitions(DEFAULT_CATALOG).expect("default catalog is valid")
    }

    /// Processes definition lines; returns the names of the words defined.
    pub fn load(&mut self, src: &str) -> Result<Vec<String>> {
        let mut defined = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let lineno = i + 1;
            if line.starts_with("field ") {
                let (name, field) = parse_field_decl(line).map_err(|e| line_error(lineno, e))?;
                self.fields.insert(name, field.clone());
                self.current_field = Some(field);
            } else if let Some(rest) = line.strip_prefix("const ") {
                let (name, rhs) = rest.split_once('=').ok_or_else(|| line_error(lineno, syntax("expected `const name = expr`")))?;
                let v = self.constant(rhs).map_err(|e| line_error(lineno, e))?;
                self.constants.insert(name.trim().to_string(), v);
            } else if let Some(rest) = line.strip_prefix("word ") {
                let (name, rhs) = rest.split_once('=').ok_or_else(|| line_error(lineno, syntax("expected `word name = ...`")))?;
                let name = name.trim();
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(line_error(lineno, syntax(format!("invalid word name `{name}`"))));
                }
                self.define(name, rhs.trim()).map_err(|e| line_error(lineno, e))?;
                defined.push(name.to_string());
            } else {
                return Err(line_error(lineno, syntax(format!("unrecognised definition `{line}`"))));
            }
        }
        Ok(defined)
    }

    /// Defines (or redefines) a word from a pipeline.
    pub fn define(&mut self, name: &str, rhs: &str) -> Result<Word> {
        let w = self.build(rhs)?;
        self.words.insert(name.to_string(), w.clone());
        self.sources.insert(name.to_string(), rhs.to_string());
        Ok(w)
    }

    /// Builds an anonymous word from a pipeline.
    pub fn build(&self, rhs: &str) -> Result<Word> {
        let ctx = self.context_for(rhs)?;
        self.pipeline(rhs, &ctx)
    }

    pub fn get(&self, name: &str) -> Option<&Word> {
        self.words.get(name)
    }

    /// A defined word by name, or else the word built from `spec`.
    pub fn resolve(&self, spec: &str) -> Result<Word> {
        match self.words.get(spec.trim()) {
            Some(w) => Ok(w.clone()),
            None => self.build(spec),
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.words.keys().map(String::as_str)
    }

    pub fn definition(&self, name: &str) -> Option<&str> {
        self.sources.get(name).map(String::as_str)
    }

    pub fn field(&self, name: &str) -> Option<&NumberField> {
        self.fields.get(name)
    }

    /// Parse context for an expression source, with the declared constants.
    pub fn context_for(&self, src: &str) -> Result<ParseContext> {
        let field = match &self.current_field {
            Some(f) => Some(f.clone()),
            None => infer_field(src)?,
        };
        Ok(ParseContext { field, constants: self.constants.iter().map(|(k, v)| (k.clone(), v.clone())).collect() })
    }

    fn constant(&self, src: &str) -> Result<RealValue> {
        let ctx = self.context_for(src)?;
        constant_in(src, &ctx)
    }

    fn pipeline(&self, src: &str, ctx: &ParseContext) -> Result<Word> {
        let stages = split_top(src, '|');
        let mut w = self.source(stages[0], ctx)?;
        for st in &stages[1..] {
            w = self.stage(&w, st, ctx)?;
        }
        Ok(w)
    }

    fn source(&self, src: &str, ctx: &ParseContext) -> Result<Word> {
        let (name, args) = call(src)?;
        let expr = |s: &str| parse_expr(s, ctx);
        let val = |s: &str| constant_in(s, ctx);
        let set = |s: &str| IntervalSet::parse(s, ctx);
        match name {
            "sturmian" => {
                arity(name, &args, 2..=3)?;
                let variant = match args.get(2).copied() {
                    None | Some("floor") => SturmianVariant::Floor,
                    Some("ceil") => SturmianVariant::Ceil,
                    Some(o) => return Err(syntax(format!("unknown sturmian variant `{o}`"))),
                };
                sturmian(val(args[0])?, val(args[1])?, variant)
            }
            "expr" => {
                arity(name, &args, 2..=2)?;
                let coding = if let Some((lo, hi)) = args[1].split_once("..") {
                    Coding::integers(int(lo)?, int(hi)?)
                } else {
                    let entries = pairs(&bracketed(args[1], '{', '}')?)?;
                    Coding::new(entries.into_iter().map(|(k, l)| Ok((val(&k)?, l))).collect::<Result<_>>()?)
                };
                word_from_expr(expr(args[0])?, coding)
            }
            "indicator" => {
                arity(name, &args, 2..=2)?;
                Ok(interval_indicator(expr(args[0])?, set(args[1])?))
            }
            "zero" => {
                arity(name, &args, 1..=1)?;
                Ok(zero_indicator(expr(args[0])?))
            }
            "poly_interval" => {
                arity(name, &args, 2..=2)?;
                Ok(poly_interval(expr(args[0])?, set(args[1])?))
            }
            "littlewood" => {
                arity(name, &args, 3..=3)?;
                littlewood(val(args[0])?, val(args[1])?, val(args[2])?)
            }
            "heisenberg" => {
                arity(name, &args, 3..=3)?;
                heisenberg(val(args[0])?, val(args[1])?, val(args[2])?)
            }
            "power_digit" => {
                arity(name, &args, 2..=2)?;
                power_digit(val(args[0])?, int(args[1])?)
            }
            "recset" => {
                arity(name, &args, 2..=2)?;
                let c = bracketed(args[0], '[', ']')?.iter().map(|s| int(s)).collect::<Result<_>>()?;
                let x = bracketed(args[1], '[', ']')?.iter().map(|s| int(s)).collect::<Result<_>>()?;
                recset(c, x)
            }
            "fibonacci" => {
                arity(name, &args, 0..=0)?;
                Ok(fibonacci_set_word())
            }
            "tribonacci" => {
                arity(name, &args, 0..=0)?;
                Ok(enumerated_word(RecurrenceSet::tribonacci()))
            }
            "sparse" => {
                let terms = args.iter().map(|s| int::<BigInt>(s)).collect::<Result<_>>()?;
                sparse(SparseSpec::Terms(terms), &default_min_ratio())
            }
            "sparse_exp" => {
                arity(name, &args, 2..=2)?;
                sparse(SparseSpec::DoubleExponential { base: int(args[0])?, ratio: int(args[1])? }, &default_min_ratio())
            }
            "tracked_sparse" => {
                arity(name, &args, 2..=2)?;
                let table = bracketed(args[0], '[', ']')?.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
                tracked_sparse(table, int(args[1])?)
            }
            "growth_lambda" => {
                arity(name, &args, 1..=1)?;
                growth_lambda(&parse_rational(args[0])?)
            }
            "set" => Ok(finite_set_word(args.iter().map(|s| int(s)).collect::<Result<Vec<u64>>>()?)),
            "periodic" => {
                let mut labels: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                labels.sort();
                labels.dedup();
                let alphabet = Alphabet::new(labels);
                let pattern = args.iter().map(|a| alphabet.index_of(a).unwrap()).collect();
                periodic_word(alphabet, pattern)
            }
            "constant" => {
                arity(name, &args, 1..=1)?;
                Ok(constant_word(args[0]))
            }
            "product" => {
                if args.len() < 2 {
                    return Err(syntax("`product` needs at least two words"));
                }
                let mut w = self.pipeline(args[0], ctx)?;
                for a in &args[1..] {
                    w = product_word(&w, &self.pipeline(a, ctx)?);
                }
                Ok(w)
            }
            "case" => {
                let mut sels = Vec::new();
                let mut brs = Vec::new();
                for a in &args {
                    let (s, b) = a.split_once("=>").ok_or_else(|| syntax(format!("expected `selector => word`, found `{a}`")))?;
                    sels.push(self.pipeline(s, ctx)?);
                    brs.push(self.pipeline(b, ctx)?);
                }
                case_word(&sels, &brs)
            }
            _ if args.is_empty() => self.words.get(name).cloned().ok_or_else(|| Error::UnknownName(name.to_string())),
            _ => Err(Error::UnknownName(name.to_string())),
        }
    }

    fn stage(&self, w: &Word, src: &str, ctx: &ParseContext) -> Result<Word> {
        let (name, args) = call(src)?;
        match name {
            "code" => code_word_labels(w, &pairs(&args)?),
            "subsequence" => {
                arity(name, &args, 1..=1)?;
                subsequence_word(w, parse_expr(args[0], ctx)?)
            }
            "progression" => {
                arity(name, &args, 2..=2)?;
                rearrange_word(w, Rearrange::Progression { a: int(args[0])?, b: int(args[1])? })
            }
            "dilute" => {
                arity(name, &args, 2..=2)?;
                rearrange_word(w, Rearrange::Dilute { a: int(args[0])?, pad: args[1].to_string() })
            }
            "block_permute" => {
                arity(name, &args, 2..=2)?;
                let pi = bracketed(args[1], '[', ']')?.iter().map(|s| int(s)).collect::<Result<_>>()?;
                rearrange_word(w, Rearrange::BlockPermute { a: int(args[0])?, pi })
            }
            "block" => {
                arity(name, &args, 1..=1)?;
                block_word(w, int(args[0])?)
            }
            "morphism" => {
                let rules = pairs(&args)?;
                let split = |img: &str| -> Vec<String> {
                    if img.contains(char::is_whitespace) {
                        img.split_whitespace().map(String::from).collect()
                    } else {
                        img.chars().map(String::from).collect()
                    }
                };
                let mut target: Vec<String> = Vec::new();
                for (_, img) in &rules {
                    for l in split(img) {
                        if !target.contains(&l) {
                            target.push(l);
                        }
                    }
                }
                let target = Alphabet::new(target);
                let mut images = Vec::new();
                for l in w.alphabet().labels() {
                    let img = rules
                        .iter()
                        .find(|(k, _)| k == l)
                        .ok_or_else(|| Error::InvalidArgument(format!("morphism has no image for `{l}`")))?;
                    images.push(split(&img.1).iter().map(|x| target.index_of(x).unwrap()).collect());
                }
                morphism_word(w, images, target)
            }
            _ => Err(Error::UnknownName(name.to_string())),
        }
    }
}

/// A constant expression (no `n`, no parameters).
pub(crate) fn constant_in(src: &str, ctx: &ParseContext) -> Result<RealValue> {
    let e: Expr = parse_expr(src, ctx)?;
    if e.mentions_var() || e.is_parametric() {
        return Err(syntax(format!("`{src}` must be a constant")));
    }
    e.eval(&BigInt::from(0))
}
