use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactreal::RealValue;
use crate::gpexpr::{parse_expr, ParseContext};

#[derive(Clone, Debug)]
pub enum Bound {
    Unbounded,
    Closed(RealValue),
    Open(RealValue),
}

impl Bound {
    fn value(&self) -> Option<&RealValue> {
        match self {
            Bound::Unbounded => None,
            Bound::Closed(v) | Bound::Open(v) => Some(v),
        }
    }
}

/// Interval with exact endpoints; either side may be infinite.
#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Self {
        Interval { lo, hi }
    }

    /// `[a, b)`.
    pub fn closed_open(a: RealValue, b: RealValue) -> Self {
        Interval { lo: Bound::Closed(a), hi: Bound::Open(b) }
    }

    pub fn open(a: RealValue, b: RealValue) -> Self {
        Interval { lo: Bound::Open(a), hi: Bound::Open(b) }
    }

    pub fn everything() -> Self {
        Interval { lo: Bound::Unbounded, hi: Bound::Unbounded }
    }

    pub fn contains(&self, x: &RealValue) -> Result<bool> {
        let above = match &self.lo {
            Bound::Unbounded => true,
            Bound::Closed(v) => x.cmp_exact(v)? != Ordering::Less,
            Bound::Open(v) => x.cmp_exact(v)? == Ordering::Greater,
        };
        if !above {
            return Ok(false);
        }
        Ok(match &self.hi {
            Bound::Unbounded => true,
            Bound::Closed(v) => x.cmp_exact(v)? != Ordering::Greater,
            Bound::Open(v) => x.cmp_exact(v)? == Ordering::Less,
        })
    }

    fn is_empty(&self) -> Result<bool> {
        let (Some(a), Some(b)) = (self.lo.value(), self.hi.value()) else {
            return Ok(false);
        };
        Ok(match a.cmp_exact(b)? {
            Ordering::Greater => true,
            Ordering::Equal => !matches!((&self.lo, &self.hi), (Bound::Closed(_), Bound::Closed(_))),
            Ordering::Less => false,
        })
    }
}

/// Order of lower bounds: `−∞` first; at equal values a closed bound
/// starts earlier than an open one.
fn cmp_lower(a: &Bound, b: &Bound) -> Result<Ordering> {
    Ok(match (a, b) {
        (Bound::Unbounded, Bound::Unbounded) => Ordering::Equal,
        (Bound::Unbounded, _) => Ordering::Less,
        (_, Bound::Unbounded) => Ordering::Greater,
        _ => {
            let o = a.value().unwrap().cmp_exact(b.value().unwrap())?;
            if o != Ordering::Equal {
                o
            } else {
                match (a, b) {
                    (Bound::Closed(_), Bound::Open(_)) => Ordering::Less,
                    (Bound::Open(_), Bound::Closed(_)) => Ordering::Greater,
                    _ => Ordering::Equal,
                }
            }
        }
    })
}

/// Order of upper bounds: `+∞` last; at equal values a closed bound ends later.
fn cmp_upper(a: &Bound, b: &Bound) -> Result<Ordering> {
    Ok(match (a, b) {
        (Bound::Unbounded, Bound::Unbounded) => Ordering::Equal,
        (Bound::Unbounded, _) => Ordering::Greater,
        (_, Bound::Unbounded) => Ordering::Less,
        _ => {
            let o = a.value().unwrap().cmp_exact(b.value().unwrap())?;
            if o != Ordering::Equal {
                o
            } else {
                match (a, b) {
                    (Bound::Closed(_), Bound::Open(_)) => Ordering::Greater,
                    (Bound::Open(_), Bound::Closed(_)) => Ordering::Less,
                    _ => Ordering::Equal,
                }
            }
        }
    })
}

/// Whether an interval ending at `hi` overlaps or touches one starting at `lo`.
fn joins(hi: &Bound, lo: &Bound) -> Result<bool> {
    let (Some(h), Some(l)) = (hi.value(), lo.value()) else {
        return Ok(true);
    };
    Ok(match l.cmp_exact(h)? {
        Ordering::Less => true,
        Ordering::Equal => matches!(hi, Bound::Closed(_)) || matches!(lo, Bound::Closed(_)),
        Ordering::Greater => false,
    })
}

/// Finite union of intervals, normalised to sorted disjoint pieces.
#[derive(Clone, Debug)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        let mut parts = Vec::new();
        for iv in intervals {
            if !iv.is_empty()? {
                parts.push(iv);
            }
        }
        // insertion sort: comparisons are fallible
        for i in 1..parts.len() {
            let mut j = i;
            while j > 0 && cmp_lower(&parts[j].lo, &parts[j - 1].lo)? == Ordering::Less {
                parts.swap(j, j - 1);
                j -= 1;
            }
        }
        let mut merged: Vec<Interval> = Vec::new();
        for iv in parts {
            if let Some(last) = merged.last_mut() {
                if joins(&last.hi, &iv.lo)? {
                    if cmp_upper(&iv.hi, &last.hi)? == Ordering::Greater {
                        last.hi = iv.hi;
                    }
                    continue;
                }
            }
            merged.push(iv);
        }
        Ok(IntervalSet { parts: merged })
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn contains(&self, x: &RealValue) -> Result<bool> {
        for p in &self.parts {
            if p.contains(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Parses unions such as `[0,1/4) u (3/4,1)` or `(-inf, 0)`; endpoints
    /// are constant expressions.
    pub fn parse(src: &str, ctx: &ParseContext) -> Result<Self> {
        let err = |m: &str| Error::Syntax { position: 0, message: format!("{m} in interval set `{src}`") };
        let normalized = src.replace('∪', " u ");
        let mut pieces = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let chars: Vec<char> = normalized.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                '[' | '(' => depth += 1,
                ']' | ')' => depth -= 1,
                _ => {}
            }
            if depth == 0 && (c == 'u' || c == 'U') && cur.trim_end().ends_with([']', ')']) {
                pieces.push(std::mem::take(&mut cur));
            } else {
                cur.push(c);
            }
            i += 1;
        }
        pieces.push(cur);
        let mut intervals = Vec::new();
        for p in pieces {
            let p = p.trim();
            let open_lo = match p.chars().next() {
                Some('[') => false,
                Some('(') => true,
                _ => return Err(err("expected `[` or `(`")),
            };
            let open_hi = match p.chars().last() {
                Some(']') => false,
                Some(')') => true,
                _ => return Err(err("expected `]` or `)`")),
            };
            let inner = &p[1..p.len() - 1];
            let mut depth = 0;
            let comma = inner
                .char_indices()
                .find(|&(_, c)| {
                    match c {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        _ => {}
                    }
                    c == ',' && depth == 0
                })
                .map(|(i, _)| i)
                .ok_or_else(|| err("expected `,`"))?;
            let endpoint = |s: &str, lower: bool, open: bool| -> Result<Bound> {
                let s = s.trim();
                if (lower && s == "-inf") || (!lower && (s == "inf" || s == "+inf")) {
                    return Ok(Bound::Unbounded);
                }
                let e = parse_expr(s, ctx)?;
                if e.is_parametric() || e.mentions_var() {
                    return Err(err("endpoints must be constants"));
                }
                let v = e.eval_i64(0)?;
                Ok(if open { Bound::Open(v) } else { Bound::Closed(v) })
            };
            intervals.push(Interval::new(endpoint(&inner[..comma], true, open_lo)?, endpoint(&inner[comma + 1..], false, open_hi)?));
        }
        IntervalSet::new(intervals)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            match &p.lo {
                Bound::Unbounded => write!(f, "(-inf")?,
                Bound::Closed(v) => write!(f, "[{}", v.label())?,
                Bound::Open(v) => write!(f, "({}", v.label())?,
            }
            write!(f, ", ")?;
            match &p.hi {
                Bound::Unbounded => write!(f, "inf)")?,
                Bound::Closed(v) => write!(f, "{}]", v.label())?,
                Bound::Open(v) => write!(f, "{})", v.label())?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> RealValue {
        RealValue::rational(n, d)
    }

    #[test]
    fn membership_respects_flags() {
        let s = IntervalSet::parse("[0,1/4) u (3/4,1)", &ParseContext::default()).unwrap();
        assert!(s.contains(&q(0, 1)).unwrap());
        assert!(!s.contains(&q(1, 4)).unwrap());
        assert!(!s.contains(&q(3, 4)).unwrap());
        assert!(s.contains(&q(4, 5)).unwrap());
        assert!(!s.contains(&q(1, 1)).unwrap());
        assert_eq!(s.to_string(), "[0, 1/4) u (3/4, 1)");
    }

    #[test]
    fn merges_overlaps() {
        let s = IntervalSet::parse("(1/2, 2] u [0, 1/2] u (5, inf)", &ParseContext::default()).unwrap();
        assert_eq!(s.parts().len(), 2);
        assert!(s.contains(&q(1, 2)).unwrap());
        assert!(s.contains(&q(100, 1)).unwrap());
        let t = IntervalSet::parse("[0,1/2) u (1/2,1)", &ParseContext::default()).unwrap();
        assert_eq!(t.parts().len(), 2);
        assert!(!t.contains(&q(1, 2)).unwrap());
        let all = IntervalSet::parse("(-inf, inf)", &ParseContext::default()).unwrap();
        assert!(all.contains(&q(-7, 3)).unwrap());
    }

    #[test]
    fn irrational_endpoints() {
        let s = IntervalSet::parse("[sqrt(2), 3/2)", &ParseContext::default()).unwrap();
        assert!(!s.contains(&q(141, 100)).unwrap());
        assert!(s.contains(&q(142, 100)).unwrap());
    }
}
