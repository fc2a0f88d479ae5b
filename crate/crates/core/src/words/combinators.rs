use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::{Alphabet, Generator, Sym, Word};
use crate::error::{Error, Result};
use crate::gpexpr::Expr;

struct Product {
    a: Word,
    b: Word,
    width: Sym,
}

impl Generator for Product {
    fn at(&self, n: u64) -> Result<Sym> {
        Ok(self.a.at(n)? * self.width + self.b.at(n)?)
    }

    fn fill(&self, start: u64, count: usize, out: &mut Vec<Sym>) -> Result<()> {
        let s = start as usize;
        let xa = self.a.slice(s, s + count)?;
        let xb = self.b.slice(s, s + count)?;
        out.extend(xa.iter().zip(&xb).map(|(&x, &y)| x * self.width + y));
        Ok(())
    }

    fn describe(&self) -> String {
        format!("product({}, {})", self.a.describe(), self.b.describe())
    }
}

/// `(aₙ, bₙ)` over `Σ_a × Σ_b`; symbol `(i, j)` is `i·|Σ_b| + j`.
pub fn product_word(a: &Word, b: &Word) -> Word {
    let mut labels = Vec::with_capacity(a.alphabet().len() * b.alphabet().len());
    for x in a.alphabet().labels() {
        for y in b.alphabet().labels() {
            labels.push(format!("({x},{y})"));
        }
    }
    let width = b.alphabet().len() as Sym;
    Word::new(Alphabet::new(labels), Product { a: a.clone(), b: b.clone(), width })
}

/// Coordinate `i` (0 or 1) of a word built by [`product_word`] from words
/// with the given alphabets.
pub fn project_word(w: &Word, left: &Alphabet, right: &Alphabet, coord: usize) -> Result<Word> {
    if w.alphabet().len() != left.len() * right.len() || coord > 1 {
        return Err(Error::InvalidArgument("projection does not match a product alphabet".into()));
    }
    let width = right.len() as Sym;
    let map: Vec<Sym> = (0..w.alphabet().len() as Sym).map(|s| if coord == 0 { s / width } else { s % width }).collect();
    code_word(w, &map, if coord == 0 { left.clone() } else { right.clone() })
}

struct Code {
    a: Word,
    map: Vec<Sym>,
}

impl Generator for Code {
    fn at(&self, n: u64) -> Result<Sym> {
        Ok(self.map[self.a.at(n)? as usize])
    }

    fn fill(&self, start: u64, count: usize, out: &mut Vec<Sym>) -> Result<()> {
        let s = start as usize;
        out.extend(self.a.slice(s, s + count)?.iter().map(|&x| self.map[x as usize]));
        Ok(())
    }

    fn describe(&self) -> String {
        format!("code({}, {:?})", self.a.describe(), self.map)
    }
}

/// `φ(aₙ)`; `map[s]` is the image of symbol `s` in `target`.
pub fn code_word(a: &Word, map: &[Sym], target: Alphabet) -> Result<Word> {
    if map.len() != a.alphabet().len() || map.iter().any(|&s| s as usize >= target.len()) {
        return Err(Error::InvalidArgument("symbol map must cover the source alphabet and land in the target".into()));
    }
    Ok(Word::new(target, Code { a: a.clone(), map: map.to_vec() }))
}

/// `φ(aₙ)` with the map given on labels.
pub fn code_word_labels(a: &Word, pairs: &[(String, String)]) -> Result<Word> {
    let mut target: Vec<String> = Vec::new();
    let mut map = Vec::with_capacity(a.alphabet().len());
    for l in a.alphabet().labels() {
        let img = pairs
            .iter()
            .find(|(x, _)| x == l)
            .map(|(_, y)| y.clone())
            .ok_or_else(|| Error::InvalidArgument(format!("symbol map has no image for `{l}`")))?;
        let idx = match target.iter().position(|t| *t == img) {
            Some(i) => i,
            None => {
                target.push(img);
                target.len() - 1
            }
        };
        map.push(idx as Sym);
    }
    code_word(a, &map, Alphabet::new(target))
}

struct Case {
    selectors: Vec<Word>,
    branches: Vec<Word>,
    /// per branch, symbol translation into the merged alphabet
    maps: Vec<Vec<Sym>>,
}

impl Case {
    fn pick(&self, n: u64, sel: impl Fn(usize) -> Result<Sym>) -> Result<usize> {
        let mut chosen = None;
        for i in 0..self.selectors.len() {
            if sel(i)? == 1 {
                if chosen.is_some() {
                    return Err(Error::PartitionViolation(n));
                }
                chosen = Some(i);
            }
        }
        chosen.ok_or(Error::PartitionViolation(n))
    }
}

impl Generator for Case {
    fn at(&self, n: u64) -> Result<Sym> {
        let i = self.pick(n, |i| self.selectors[i].at(n))?;
        Ok(self.maps[i][self.branches[i].at(n)? as usize])
    }

    fn fill(&self, start: u64, count: usize, out: &mut Vec<Sym>) -> Result<()> {
        let s = start as usize;
        let sels: Vec<Vec<Sym>> = self.selectors.iter().map(|w| w.slice(s, s + count)).collect::<Result<_>>()?;
        let brs: Vec<Vec<Sym>> = self.branches.iter().map(|w| w.slice(s, s + count)).collect::<Result<_>>()?;
        for k in 0..count {
            let i = self.pick(start + k as u64, |i| Ok(sels[i][k]))?;
            out.push(self.maps[i][brs[i][k] as usize]);
        }
        Ok(())
    }

    fn describe(&self) -> String {
        let parts: Vec<String> =
            self.selectors.iter().zip(&self.branches).map(|(s, b)| format!("{} => {}", s.describe(), b.describe())).collect();
        format!("case({})", parts.join("; "))
    }
}

/// `aₙ = a⁽ⁱ⁾ₙ` where selector `i` is the unique one emitting `1` at `n`.
///
/// Selectors are binary words; the partition condition is checked at every
/// generated index.
pub fn case_word(selectors: &[Word], branches: &[Word]) -> Result<Word> {
    if selectors.is_empty() || selectors.len() != branches.len() {
        return Err(Error::InvalidArgument("case needs one branch per selector".into()));
    }
    if selectors.iter().any(|s| s.alphabet().len() != 2) {
        return Err(Error::InvalidArgument("case selectors must be words over {0,1}".into()));
    }
    let mut labels: Vec<String> = Vec::new();
    let mut maps = Vec::new();
    for b in branches {
        let mut m = Vec::new();
        for l in b.alphabet().labels() {
            let idx = match labels.iter().position(|x| x == l) {
                Some(i) => i,
                None => {
                    labels.push(l.clone());
                    labels.len() - 1
                }
            };
            m.push(idx as Sym);
        }
        maps.push(m);
    }
    Ok(Word::new(Alphabet::new(labels), Case { selectors: selectors.to_vec(), branches: branches.to_vec(), maps }))
}

struct Subsequence {
    a: Word,
    h: Expr,
}

impl Generator for Subsequence {
    fn at(&self, n: u64) -> Result<Sym> {
        let v = self.h.eval(&BigInt::from(n))?;
        let k = v.as_integer().ok_or_else(|| Error::NotAnInteger(format!("h({n}) = {v}")))?;
        if k.is_negative() {
            return Err(Error::NegativeIndex { n, index: k.to_string() });
        }
        let k = k.to_u64().ok_or(Error::Overflow("subsequence index"))?;
        self.a.at(k)
    }

    fn describe(&self) -> String {
        format!("subsequence({}, {})", self.a.describe(), self.h)
    }
}

/// `a_{h(n)}` for a generalised polynomial `h` with values in `ℕ₀`.
pub fn subsequence_word(a: &Word, h: Expr) -> Result<Word> {
    if h.is_parametric() {
        return Err(Error::MissingParam(*h.index_set().iter().next().unwrap()));
    }
    Ok(Word::new(a.alphabet().clone(), Subsequence { a: a.clone(), h }))
}

/// Rearrangements closed under bracket words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rearrange {
    /// `a_{An+B}`
    Progression { a: u64, b: u64 },
    /// `a_{n/A}` when `A | n`, else the pad symbol
    Dilute { a: u64, pad: String },
    /// `a_{⌊n/A⌋ + π(n mod A)}` with `π : [A] → [A]`
    BlockPermute { a: u64, pi: Vec<u64> },
}

struct Rearranged {
    a: Word,
    mode: Rearrange,
    pad: Sym,
}

impl Rearranged {
    fn source(&self, n: u64) -> Option<u64> {
        match &self.mode {
            Rearrange::Progression { a, b } => Some(a * n + b),
            Rearrange::Dilute { a, .. } => n.is_multiple_of(*a).then(|| n / a),
            Rearrange::BlockPermute { a, pi } => Some(n / a + pi[(n % a) as usize]),
        }
    }
}

impl Generator for Rearranged {
    fn at(&self, n: u64) -> Result<Sym> {
        match self.source(n) {
            Some(k) => self.a.at(k),
            None => Ok(self.pad),
        }
    }

    fn fill(&self, start: u64, count: usize, out: &mut Vec<Sym>) -> Result<()> {
        let end = start + count as u64;
        let (lo, hi) = (start..end).filter_map(|n| self.source(n)).fold((u64::MAX, 0), |(l, h), k| (l.min(k), h.max(k + 1)));
        if lo >= hi {
            out.extend(std::iter::repeat_n(self.pad, count));
            return Ok(());
        }
        let src = self.a.slice(lo as usize, hi as usize)?;
        for n in start..end {
            out.push(match self.source(n) {
                Some(k) => src[(k - lo) as usize],
                None => self.pad,
            });
        }
        Ok(())
    }

    fn describe(&self) -> String {
        format!("rearrange({}, {:?})", self.a.describe(), self.mode)
    }
}

pub fn rearrange_word(a: &Word, mode: Rearrange) -> Result<Word> {
    let mut alphabet = a.alphabet().clone();
    let mut pad = 0;
    match &mode {
        Rearrange::Progression { a, .. } if *a == 0 => {
            return Err(Error::InvalidArgument("progression step must be positive".into()));
        }
        Rearrange::Dilute { a: step, pad: p } => {
            if *step == 0 {
                return Err(Error::InvalidArgument("dilution factor must be positive".into()));
            }
            if alphabet.index_of(p).is_some() {
                return Err(Error::InvalidArgument(format!("pad symbol `{p}` already belongs to the alphabet")));
            }
            let mut labels = alphabet.labels().to_vec();
            labels.push(p.clone());
            pad = (labels.len() - 1) as Sym;
            alphabet = Alphabet::new(labels);
        }
        Rearrange::BlockPermute { a: block, pi } if (*block == 0 || pi.len() as u64 != *block || pi.iter().any(|&x| x >= *block)) => {
            return Err(Error::InvalidArgument("block map must send [A] into [A]".into()));
        }
        _ => {}
    }
    Ok(Word::new(alphabet, Rearranged { a: a.clone(), mode, pad }))
}

struct Morphism {
    a: Word,
    images: Vec<Vec<Sym>>,
    k: u64,
}

impl Generator for Morphism {
    fn at(&self, n: u64) -> Result<Sym> {
        Ok(self.images[self.a.at(n / self.k)? as usize][(n % self.k) as usize])
    }

    fn fill(&self, start: u64, count: usize, out: &mut Vec<Sym>) -> Result<()> {
        let end = start + count as u64;
        let (lo, hi) = (start / self.k, (end - 1) / self.k + 1);
        let src = self.a.slice(lo as usize, hi as usize)?;
        for n in start..end {
            out.push(self.images[src[(n / self.k - lo) as usize] as usize][(n % self.k) as usize]);
        }
        Ok(())
    }

    fn describe(&self) -> String {
        format!("morphism({}, {:?})", self.a.describe(), self.images)
    }
}

/// `σ(a)` for a `k`-uniform morphism; `images[s]` is `σ(s)` over `target`.
pub fn morphism_word(a: &Word, images: Vec<Vec<Sym>>, target: Alphabet) -> Result<Word> {
    if images.len() != a.alphabet().len() {
        return Err(Error::InvalidArgument("morphism must give an image for every symbol".into()));
    }
    let k = images.first().map_or(0, |w| w.len());
    if k == 0 || images.iter().any(|w| w.len() != k) {
        return Err(Error::NonUniformMorphism);
    }
    if images.iter().flatten().any(|&s| s as usize >= target.len()) {
        return Err(Error::InvalidArgument("morphism image uses symbols outside the target alphabet".into()));
    }
    Ok(Word::new(target, Morphism { a: a.clone(), images, k: k as u64 }))
}

/// Limit on `|Σ|^k` for block words.
pub const MAX_BLOCK_ALPHABET: usize = 1 << 20;

struct Block {
    a: Word,
    k: u64,
    base: Sym,
}

impl Generator for Block {
    fn at(&self, n: u64) -> Result<Sym> {
        let mut s = 0;
        for i in 0..self.k {
            s = s * self.base + self.a.at(self.k * n + i)?;
        }
        Ok(s)
    }

    fn fill(&self, start: u64, count: usize, out: &mut Vec<Sym>) -> Result<()> {
        let k = self.k as usize;
        let s0 = start as usize * k;
        let src = self.a.slice(s0, s0 + count * k)?;
        out.extend(src.chunks(k).map(|c| c.iter().fold(0, |s, &x| s * self.base + x)));
        Ok(())
    }

    fn describe(&self) -> String {
        format!("block({}, {})", self.a.describe(), self.k)
    }
}

/// `a_{kn} a_{kn+1} ⋯ a_{kn+k−1}` over `Σ^k`, encoded in base `|Σ|`.
pub fn block_word(a: &Word, k: u32) -> Result<Word> {
    let base = a.alphabet().len();
    if k == 0 {
        return Err(Error::InvalidArgument("block length must be positive".into()));
    }
    let size = (base as u128)
        .checked_pow(k)
        .filter(|&s| s <= MAX_BLOCK_ALPHABET as u128)
        .ok_or_else(|| Error::TooLarge(format!("block alphabet of size {base}^{k} exceeds {MAX_BLOCK_ALPHABET}")))? as usize;
    let sep = if a.alphabet().is_compact() { "" } else { "." };
    let labels = (0..size)
        .map(|mut s| {
            let mut parts = vec![""; k as usize];
            for i in (0..k as usize).rev() {
                parts[i] = a.alphabet().label((s % base) as Sym);
                s /= base;
            }
            parts.join(sep)
        })
        .collect();
    Ok(Word::new(Alphabet::new(labels), Block { a: a.clone(), k: k as u64, base: base as Sym }))
}
