//! Bracket words: lazily generated infinite words with memoised prefixes,
//! the closure operations on them, and a catalogue of constructions.

mod builtins;
mod combinators;
mod dsl;
mod intervals;

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactreal::RealValue;
use crate::gpexpr::Expr;

pub use builtins::*;
pub use combinators::*;
pub use dsl::{load_definitions, WordCatalog, DEFAULT_CATALOG};
pub use intervals::{Bound, Interval, IntervalSet};

/// A symbol is an index into the word's [`Alphabet`].
pub type Sym = u32;

/// Finite alphabet; symbol `i` prints as `labels[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new(labels: Vec<String>) -> Self {
        Alphabet { labels }
    }

    pub fn from_strs(labels: &[&str]) -> Self {
        Alphabet::new(labels.iter().map(|s| s.to_string()).collect())
    }

    /// `{0, 1}` with symbol `1` meaning "member".
    pub fn binary() -> Self {
        Alphabet::from_strs(&["0", "1"])
    }

    /// Digits `0..k` as labels.
    pub fn digits(k: u32) -> Self {
        Alphabet::new((0..k).map(|d| d.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, s: Sym) -> &str {
        &self.labels[s as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<Sym> {
        self.labels.iter().position(|l| l == label).map(|i| i as Sym)
    }

    /// Whether every label is a single character, so words print without
    /// separators.
    pub fn is_compact(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }
}

/// Source of the symbols of a word; `at` must be a pure function of `n`.
pub trait Generator: Send + Sync {
    fn at(&self, n: u64) -> Result<Sym>;

    /// Symbols for `start..start + count`, appended to `out`.
    fn fill(&self, start: u64, count: usize, out: &mut Vec<Sym>) -> Result<()> {
        for n in start..start + count as u64 {
            out.push(self.at(n)?);
        }
        Ok(())
    }

    fn describe(&self) -> String;
}

struct Inner {
    alphabet: Alphabet,
    generator: Box<dyn Generator>,
    cache: Mutex<Vec<Sym>>,
}

/// A lazily generated infinite word.
///
/// `prefix(N)` materialises and caches symbols; repeated or longer requests
/// extend the same cache, so prefixes are always consistent.
#[derive(Clone)]
pub struct Word(Arc<Inner>);

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.0.generator.describe())
    }
}

const FILL_CHUNK: usize = 1 << 14;

impl Word {
    pub fn new(alphabet: Alphabet, generator: impl Generator + 'static) -> Word {
        Word(Arc::new(Inner { alphabet, generator: Box::new(generator), cache: Mutex::new(Vec::new()) }))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.0.alphabet
    }

    pub fn describe(&self) -> String {
        self.0.generator.describe()
    }

    /// The first `len` symbols.
    pub fn prefix(&self, len: usize) -> Result<Vec<Sym>> {
        self.slice(0, len)
    }

    /// Symbols `start..end`; extends the cache as needed but copies only the
    /// requested range.
    pub fn slice(&self, start: usize, end: usize) -> Result<Vec<Sym>> {
        if end <= start {
            return Ok(Vec::new());
        }
        let mut cache = self.0.cache.lock().unwrap();
        while cache.len() < end {
            let from = cache.len();
            let count = (end - from).min(FILL_CHUNK);
            let mut buf = Vec::with_capacity(count);
            self.0.generator.fill(from as u64, count, &mut buf)?;
            cache.extend_from_slice(&buf);
        }
        Ok(cache[start..end].to_vec())
    }

    /// Symbol at index `n`, from the cache when available.
    pub fn at(&self, n: u64) -> Result<Sym> {
        {
            let cache = self.0.cache.lock().unwrap();
            if (n as usize) < cache.len() {
                return Ok(cache[n as usize]);
            }
        }
        self.0.generator.at(n)
    }

    /// Prefix rendered with the alphabet labels.
    pub fn render(&self, len: usize, separator: &str) -> Result<String> {
        let p = self.prefix(len)?;
        let labels: Vec<&str> = p.iter().map(|&s| self.alphabet().label(s)).collect();
        Ok(labels.join(separator))
    }

    /// Prefix rendered compactly when the labels allow it, else space separated.
    pub fn render_auto(&self, len: usize) -> Result<String> {
        let sep = if self.alphabet().is_compact() { "" } else { " " };
        self.render(len, sep)
    }
}

/// Finite map from exact values to symbols.
#[derive(Clone, Debug)]
pub struct Coding {
    entries: Vec<(RealValue, Sym)>,
    alphabet: Alphabet,
}

impl Coding {
    /// `pairs` maps values to symbol labels; equal labels share a symbol.
    pub fn new(pairs: Vec<(RealValue, String)>) -> Self {
        let mut labels: Vec<String> = Vec::new();
        let mut entries = Vec::with_capacity(pairs.len());
        for (v, l) in pairs {
            let idx = match labels.iter().position(|x| x == &l) {
                Some(i) => i,
                None => {
                    labels.push(l);
                    labels.len() - 1
                }
            };
            entries.push((v, idx as Sym));
        }
        Coding { entries, alphabet: Alphabet::new(labels) }
    }

    /// Integers `lo..=hi`, each coded by its decimal form.
    pub fn integers(lo: i64, hi: i64) -> Self {
        Coding::new((lo..=hi).map(|k| (RealValue::from(k), k.to_string())).collect())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn lookup(&self, v: &RealValue) -> Result<Option<Sym>> {
        if let Some(q) = v.as_rational() {
            for (k, s) in &self.entries {
                if k.as_rational().as_ref() == Some(&q) {
                    return Ok(Some(*s));
                }
            }
            if self.entries.iter().all(|(k, _)| k.as_rational().is_some()) {
                return Ok(None);
            }
        }
        for (k, s) in &self.entries {
            if v.sub(k)?.sign()? == 0 {
                return Ok(Some(*s));
            }
        }
        Ok(None)
    }
}

/// `aₙ = c(g(n))`.
struct ExprWord {
    expr: Expr,
    coding: Coding,
}

impl Generator for ExprWord {
    fn at(&self, n: u64) -> Result<Sym> {
        let v = self.expr.eval(&BigInt::from(n))?;
        self.coding.lookup(&v)?.ok_or_else(|| Error::UncodedValue { n, value: v.to_string() })
    }

    fn describe(&self) -> String {
        format!("expr({})", self.expr)
    }
}

pub fn word_from_expr(e: Expr, c: Coding) -> Result<Word> {
    if e.is_parametric() {
        return Err(Error::MissingParam(*e.index_set().iter().next().unwrap()));
    }
    Ok(Word::new(c.alphabet().clone(), ExprWord { expr: e, coding: c }))
}

struct IndicatorWord {
    expr: Expr,
    set: IntervalSet,
}

impl Generator for IndicatorWord {
    fn at(&self, n: u64) -> Result<Sym> {
        let v = self.expr.eval(&BigInt::from(n))?;
        Ok(self.set.contains(&v)? as Sym)
    }

    fn describe(&self) -> String {
        format!("indicator({} in {})", self.expr, self.set)
    }
}

/// `aₙ = 1` iff `g(n) ∈ I`, decided exactly.
pub fn interval_indicator(e: Expr, set: IntervalSet) -> Word {
    Word::new(Alphabet::binary(), IndicatorWord { expr: e, set })
}

struct ZeroWord {
    expr: Expr,
}

impl Generator for ZeroWord {
    fn at(&self, n: u64) -> Result<Sym> {
        Ok((self.expr.eval(&BigInt::from(n))?.sign()? == 0) as Sym)
    }

    fn describe(&self) -> String {
        format!("zero({})", self.expr)
    }
}

/// `aₙ = 1` iff `g(n) = 0` exactly.
pub fn zero_indicator(e: Expr) -> Word {
    Word::new(Alphabet::binary(), ZeroWord { expr: e })
}

/// Constant word on a one-letter alphabet.
pub fn constant_word(label: &str) -> Word {
    struct Constant;
    impl Generator for Constant {
        fn at(&self, _: u64) -> Result<Sym> {
            Ok(0)
        }
        fn describe(&self) -> String {
            "constant".into()
        }
    }
    Word::new(Alphabet::from_strs(&[label]), Constant)
}

/// Word repeating a finite pattern over the given alphabet.
pub fn periodic_word(alphabet: Alphabet, pattern: Vec<Sym>) -> Result<Word> {
    struct Periodic(Vec<Sym>);
    impl Generator for Periodic {
        fn at(&self, n: u64) -> Result<Sym> {
            Ok(self.0[(n % self.0.len() as u64) as usize])
        }
        fn describe(&self) -> String {
            format!("periodic({:?})", self.0)
        }
    }
    if pattern.is_empty() || pattern.iter().any(|&s| s as usize >= alphabet.len()) {
        return Err(Error::InvalidArgument("periodic pattern must be non-empty and use alphabet symbols".into()));
    }
    Ok(Word::new(alphabet, Periodic(pattern)))
}

#[cfg(test)]
mod tests;
