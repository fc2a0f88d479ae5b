//! Effective reals: numbers presented by nested rational intervals.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{rat_floor, FieldElem};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// Raw approximation procedure: interval of width at most `2^-k`.
/// Must be a pure function of `k`.
pub type Refiner = Arc<dyn Fn(u32) -> Result<(BigRational, BigRational)> + Send + Sync>;

const LADDER: usize = 32;

struct Inner {
    label: String,
    raw: Refiner,
    cap: u32,
    ladder: Vec<OnceLock<Result<(BigRational, BigRational)>>>,
}

/// A real number known through a refinement procedure.
///
/// `interval(k)` has width at most `2^-k` and the intervals are nested:
/// internally the raw refiner is sampled at powers of two and each rung is
/// intersected with the previous one.
#[derive(Clone)]
pub struct EffReal(Arc<Inner>);

impl fmt::Debug for EffReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EffReal({})", self.0.label)
    }
}

fn rung_for(k: u32) -> usize {
    if k <= 1 {
        0
    } else {
        (32 - (k - 1).leading_zeros()) as usize
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn pow2_rat(k: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << k as usize)
}

impl EffReal {
    pub fn new(label: impl Into<String>, raw: Refiner) -> Self {
        Self::with_cap(label, raw, DEFAULT_PRECISION_CAP)
    }

    pub fn with_cap(label: impl Into<String>, raw: Refiner, cap: u32) -> Self {
        EffReal(Arc::new(Inner { label: label.into(), raw, cap, ladder: (0..LADDER).map(|_| OnceLock::new()).collect() }))
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn precision_cap(&self) -> u32 {
        self.0.cap
    }

    pub fn rational(q: BigRational) -> Self {
        let label = q.to_string();
        EffReal::new(label, Arc::new(move |_| Ok((q.clone(), q.clone()))))
    }

    pub fn from_field(x: FieldElem) -> Self {
        let label = format!("{x:?}");
        EffReal::new(
            label,
            Arc::new(move |k| {
                let (l, h) = x.fixed_enclosure(k + 2)?;
                let s = pow2_rat(k + 2);
                Ok((BigRational::from_integer(l) / &s, BigRational::from_integer(h) / &s))
            }),
        )
    }

    fn rung(&self, j: usize) -> Result<(BigRational, BigRational)> {
        if j >= LADDER {
            return Err(self.exhausted(u32::MAX));
        }
        self.0.ladder[j]
            .get_or_init(|| {
                let k = 1u32 << j;
                let (lo, hi) = (self.0.raw)(k)?;
                if lo > hi {
                    return Err(Error::InvalidArgument(format!("refiner for {} returned an empty interval", self.0.label)));
                }
                if j == 0 {
                    return Ok((lo, hi));
                }
                let (plo, phi) = self.rung(j - 1)?;
                let lo = lo.max(plo);
                let hi = hi.min(phi);
                if lo > hi {
                    return Err(Error::InvalidArgument(format!("refiner for {} is not consistent", self.0.label)));
                }
                Ok((lo, hi))
            })
            .clone()
    }

    fn exhausted(&self, k: u32) -> Error {
        Error::PrecisionExhausted { bits: k.min(self.0.cap), context: self.0.label.clone() }
    }

    /// Interval of width at most `2^-k`, nested in all coarser ones.
    pub fn interval(&self, k: u32) -> Result<(BigRational, BigRational)> {
        if k > self.0.cap {
            return Err(self.exhausted(k));
        }
        self.rung(rung_for(k))
    }

    fn rungs(&self) -> impl Iterator<Item = u32> + '_ {
        (0..LADDER as u32).map(|j| 1u32 << j).take_while(|&k| k <= self.0.cap)
    }

    pub fn sign(&self) -> Result<i8> {
        for k in self.rungs() {
            let (lo, hi) = self.interval(k)?;
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            if lo.is_zero() && hi.is_zero() {
                return Ok(0);
            }
        }
        Err(self.exhausted(self.0.cap))
    }

    pub fn floor(&self) -> Result<BigInt> {
        for k in self.rungs() {
            let (lo, hi) = self.interval(k)?;
            let fl = rat_floor(&lo);
            if fl == rat_floor(&hi) {
                return Ok(fl);
            }
        }
        Err(self.exhausted(self.0.cap))
    }

    /// Magnitude bound `|x| ≤ 2^e`.
    fn magnitude_bits(&self) -> Result<u32> {
        let (lo, hi) = self.interval(0)?;
        let m = lo.abs().max(hi.abs());
        let c = -rat_floor(&-m);
        Ok(c.bits() as u32 + 1)
    }

    pub fn neg(&self) -> EffReal {
        let x = self.clone();
        EffReal::with_cap(
            format!("-({})", self.label()),
            Arc::new(move |k| {
                let (l, h) = x.interval(k)?;
                Ok((-h, -l))
            }),
            self.0.cap,
        )
    }

    pub fn add(&self, other: &EffReal) -> EffReal {
        let (x, y) = (self.clone(), other.clone());
        EffReal::with_cap(
            format!("({}) + ({})", self.label(), other.label()),
            Arc::new(move |k| {
                let (a, b) = x.interval(k + 1)?;
                let (c, d) = y.interval(k + 1)?;
                Ok((a + c, b + d))
            }),
            self.0.cap.min(other.0.cap),
        )
    }

    pub fn sub(&self, other: &EffReal) -> EffReal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &EffReal) -> EffReal {
        let (x, y) = (self.clone(), other.clone());
        EffReal::with_cap(
            format!("({}) * ({})", self.label(), other.label()),
            Arc::new(move |k| {
                let extra = x.magnitude_bits()?.max(y.magnitude_bits()?) + 2;
                let (a, b) = x.interval(k + extra)?;
                let (c, d) = y.interval(k + extra)?;
                let p = [&a * &c, &a * &d, &b * &c, &b * &d];
                let lo = p.iter().min().unwrap().clone();
                let hi = p.iter().max().unwrap().clone();
                Ok((lo, hi))
            }),
            self.0.cap.min(other.0.cap),
        )
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self.interval(64) {
            Ok((l, h)) => ((l + h) * half()).to_f64().unwrap_or(f64::NAN),
            Err(_) => f64::NAN,
        }
    }
}

/// `atan(1/x)` scaled by `2^bits`, with an error bound in the same units.
fn atan_inv_fixed(x: u32, bits: u32) -> (BigInt, BigInt) {
    let scale = BigInt::one() << bits as usize;
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = &scale / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut i = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * i + 1);
        if i.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        terms += 1;
        i += 1;
    }
    // each truncating division errs by < 1, plus the omitted tail (< 1)
    (sum, BigInt::from(2 * terms + 2))
}

/// `π` via Machin's formula `π = 16 atan(1/5) − 4 atan(1/239)`.
pub fn pi() -> EffReal {
    EffReal::new(
        "pi",
        Arc::new(|k| {
            let bits = k + 8 + (64 - (k as u64 + 1).leading_zeros());
            let (a, ea) = atan_inv_fixed(5, bits);
            let (b, eb) = atan_inv_fixed(239, bits);
            let p = a * 16 - b * 4;
            let e = ea * 16 + eb * 4;
            let s = pow2_rat(bits);
            Ok((BigRational::from_integer(&p - &e) / &s, BigRational::from_integer(&p + &e) / &s))
        }),
    )
}

/// `√2` by integer square roots, used to place nested-real limits at an
/// irrational point.
fn sqrt2_interval(k: u32) -> (BigRational, BigRational) {
    let scale = BigInt::one() << (2 * k as usize);
    let r = (BigInt::from(2) * &scale).sqrt();
    let den = BigInt::one() << k as usize;
    (BigRational::new(r.clone(), den.clone()), BigRational::new(r + 1, den))
}

/// Result of the nested-interval construction.
#[derive(Clone, Debug)]
pub struct NestedReal {
    pub value: EffReal,
    /// Chosen integers `mᵢ` with `|Nᵢ α − mᵢ| ≤ εᵢ`.
    pub centers: Vec<BigInt>,
    /// Final interval of the construction.
    pub last_interval: (BigRational, BigRational),
}

/// Builds an irrational `α` with `‖Nᵢ α‖ ≤ εᵢ` for every `i`.
///
/// Requires `N_{i+1} ≥ 2 Nᵢ / εᵢ`. At each stage the interval
/// `[(m − ε)/N, (m + ε)/N]` is chosen with `m` the integer nearest to
/// `N` times the previous centre; the growth condition makes it fit inside
/// the previous interval. The limit is placed strictly inside the last
/// interval at an irrational offset.
pub fn construct_nested_real(ns: &[BigInt], eps: &[BigRational]) -> Result<NestedReal> {
    if ns.is_empty() || ns.len() != eps.len() {
        return Err(Error::InvalidArgument("need equally many Nᵢ and εᵢ, at least one".into()));
    }
    for (i, (n, e)) in ns.iter().zip(eps).enumerate() {
        if !n.is_positive() {
            return Err(Error::HypothesisViolated { index: i, detail: format!("N = {n} is not positive") });
        }
        if !e.is_positive() || e >= &BigRational::one() {
            return Err(Error::HypothesisViolated { index: i, detail: format!("ε = {e} is not in (0, 1)") });
        }
        if i + 1 < ns.len() {
            let need = BigRational::from_integer(BigInt::from(2) * n) / e;
            if BigRational::from_integer(ns[i + 1].clone()) < need {
                return Err(Error::HypothesisViolated {
                    index: i,
                    detail: format!("N_{} = {} < 2·{}/{} = {}", i + 1, ns[i + 1], n, e, need),
                });
            }
        }
    }
    let mut centers = Vec::with_capacity(ns.len());
    let mut center = BigRational::new(BigInt::one(), ns[0].clone());
    let mut m = BigInt::one();
    let mut interval = (BigRational::zero(), BigRational::zero());
    for (i, (n, e)) in ns.iter().zip(eps).enumerate() {
        let nr = BigRational::from_integer(n.clone());
        if i > 0 {
            m = rat_floor(&(&center * &nr + half()));
        }
        let lo = (BigRational::from_integer(m.clone()) - e) / &nr;
        let hi = (BigRational::from_integer(m.clone()) + e) / &nr;
        if i > 0 {
            debug_assert!(lo >= interval.0 && hi <= interval.1);
        }
        center = BigRational::from_integer(m.clone()) / &nr;
        interval = (lo, hi);
        centers.push(m.clone());
    }
    let c = (&interval.0 + &interval.1) * half();
    let r = (&interval.1 - &interval.0) * half() * half();
    let label = format!("nested({c} + {r}*(sqrt(2)-1))");
    let (c2, r2) = (c.clone(), r.clone());
    let value = EffReal::new(
        label,
        Arc::new(move |k| {
            let (s_lo, s_hi) = sqrt2_interval(k + 1);
            let one = BigRational::one();
            Ok((&c2 + &r2 * (s_lo - &one), &c2 + &r2 * (s_hi - &one)))
        }),
    );
    Ok(NestedReal { value, centers, last_interval: interval })
}

/// Upper bound for `‖N α‖` from `α`'s interval at depth `k`.
pub fn dist_upper_bound(alpha: &EffReal, n: &BigInt, k: u32) -> Result<BigRational> {
    let (lo, hi) = alpha.interval(k)?;
    let nr = BigRational::from_integer(n.clone());
    let (a, b) = if n.is_negative() { (&hi * &nr, &lo * &nr) } else { (&lo * &nr, &hi * &nr) };
    let m = rat_floor(&((&a + &b) * half() + half()));
    let mr = BigRational::from_integer(m);
    Ok((a - &mr).abs().max((b - &mr).abs()))
}

impl NestedReal {
    /// Checks `‖Nᵢ α‖ ≤ εᵢ` for each `i` by interval evaluation.
    pub fn verify(&self, ns: &[BigInt], eps: &[BigRational]) -> Result<Vec<bool>> {
        let mut out = Vec::with_capacity(ns.len());
        for (n, e) in ns.iter().zip(eps) {
            let mut ok = false;
            for k in [64u32, 256, 1024, 4096] {
                let k = k + n.bits() as u32;
                if k > self.value.precision_cap() {
                    break;
                }
                if &dist_upper_bound(&self.value, n, k)? <= e {
                    ok = true;
                    break;
                }
            }
            out.push(ok);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn pi_bounds() {
        let p = pi();
        let (lo, hi) = p.interval(200).unwrap();
        assert!(&hi - &lo <= BigRational::new(BigInt::one(), BigInt::one() << 200usize));
        assert!(lo < q(314159266, 100000000) && hi > q(314159265, 100000000));
        assert_eq!(p.sub(&EffReal::rational(q(3, 1))).sign().unwrap(), 1);
        assert_eq!(p.floor().unwrap(), BigInt::from(3));
        assert_eq!(p.mul(&EffReal::rational(q(100, 1))).floor().unwrap(), BigInt::from(314));
    }

    #[test]
    fn intervals_are_nested() {
        let p = pi().mul(&pi());
        let mut prev = p.interval(0).unwrap();
        for k in 1..300 {
            let cur = p.interval(k).unwrap();
            assert!(cur.0 >= prev.0 && cur.1 <= prev.1);
            prev = cur;
        }
    }

    #[test]
    fn undecidable_sign_is_an_error() {
        let z = pi().sub(&pi());
        let z = EffReal::with_cap("z", Arc::new(move |k| z.interval(k)), 256);
        assert!(matches!(z.sign(), Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn nested_real_example() {
        let ns = ints(&[1, 8, 128]);
        let eps = vec![q(1, 2), q(1, 4), q(1, 8)];
        let r = construct_nested_real(&ns, &eps).unwrap();
        assert!(r.verify(&ns, &eps).unwrap().iter().all(|&b| b));
        for k in 1..=64 {
            let (lo, hi) = r.value.interval(k).unwrap();
            assert!(lo < hi);
        }
    }

    #[test]
    fn nested_real_rejects_slow_growth() {
        let err = construct_nested_real(&ints(&[1, 2]), &[q(1, 2), q(1, 2)]).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated { index: 0, .. }));
    }
}
