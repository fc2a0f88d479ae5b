use std::collections::BTreeSet;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::{interval_indicator, Alphabet, Generator, IntervalSet, Sym, Word};
use crate::error::{Error, Result};
use crate::exactreal::{add_lenient, golden_field, mul_lenient, multiquadratic_field, phi_const, sqrt_const, AffineFloor, RealValue};
use crate::gpexpr::Expr;

fn idx(n: u64) -> Result<i64> {
    i64::try_from(n).map_err(|_| Error::Overflow("word index"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SturmianVariant {
    Floor,
    Ceil,
}

struct Sturmian {
    floors: AffineFloor,
    ceil: bool,
    base: i128,
    label: String,
}

impl Sturmian {
    /// `⌊kα+β⌋`, or `⌈kα+β⌉` for the ceiling variant.
    fn step(&self, k: i64) -> Result<i128> {
        let f = self.floors.floor_at(k)?;
        Ok(if self.ceil { -f } else { f })
    }
}

impl Generator for Sturmian {
    fn at(&self, n: u64) -> Result<Sym> {
        let n = idx(n)?;
        Ok((self.step(n)? - self.step(n - 1)? - self.base) as Sym)
    }

    fn fill(&self, start: u64, count: usize, out: &mut Vec<Sym>) -> Result<()> {
        let s = idx(start)?;
        let mut prev = self.step(s - 1)?;
        for k in s..s + count as i64 {
            let cur = self.step(k)?;
            out.push((cur - prev - self.base) as Sym);
            prev = cur;
        }
        Ok(())
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// `aₙ = ⌊nα+β⌋ − ⌊(n−1)α+β⌋` (or with ceilings); symbols are the two
/// possible differences `⌊α⌋, ⌊α⌋+1`.
pub fn sturmian(alpha: RealValue, beta: RealValue, variant: SturmianVariant) -> Result<Word> {
    let base = alpha.floor()?.to_i128().ok_or(Error::Overflow("sturmian slope"))?;
    let label =
        format!("sturmian({}, {}, {})", alpha.label(), beta.label(), if variant == SturmianVariant::Ceil { "ceil" } else { "floor" });
    let floors = match variant {
        SturmianVariant::Floor => AffineFloor::new(alpha, beta)?,
        SturmianVariant::Ceil => AffineFloor::new(alpha.neg(), beta.neg())?,
    };
    let alphabet = Alphabet::new(vec![base.to_string(), (base + 1).to_string()]);
    Ok(Word::new(alphabet, Sturmian { floors, ceil: variant == SturmianVariant::Ceil, base, label }))
}

/// `[{p(n)} ∈ I]`.
pub fn poly_interval(p: Expr, set: IntervalSet) -> Word {
    interval_indicator(Expr::frac(p), set)
}

struct Littlewood {
    alpha: RealValue,
    beta: RealValue,
    eps: RealValue,
}

impl Generator for Littlewood {
    fn at(&self, n: u64) -> Result<Sym> {
        if n == 0 {
            return Ok(0);
        }
        let k = RealValue::from(BigInt::from(n));
        let da = self.alpha.mul(&k)?.dist()?;
        let db = self.beta.mul(&k)?.dist()?;
        let v = mul_lenient(&mul_lenient(&da, &db)?, &k)?;
        Ok((v.cmp_exact(&self.eps)? == std::cmp::Ordering::Less) as Sym)
    }

    fn describe(&self) -> String {
        format!("littlewood({}, {}, {})", self.alpha.label(), self.beta.label(), self.eps.label())
    }
}

/// `aₙ = 1` iff `n ≠ 0` and `‖αn‖·‖βn‖ < ε/n`.
pub fn littlewood(alpha: RealValue, beta: RealValue, eps: RealValue) -> Result<Word> {
    if eps.sign()? <= 0 {
        return Err(Error::InvalidArgument("littlewood needs ε > 0".into()));
    }
    Ok(Word::new(Alphabet::binary(), Littlewood { alpha, beta, eps }))
}

/// Membership oracle for a subset of `ℕ₀`.
pub trait SetOracle: Send + Sync {
    /// All members `≤ bound`, sorted ascending. Results for different bounds
    /// must agree on their common range.
    fn members_upto(&self, bound: u64) -> Result<Vec<u64>>;

    fn describe(&self) -> String;
}

struct Enumerated {
    oracle: Box<dyn SetOracle>,
    /// (inclusive bound covered, members up to it)
    state: Mutex<Option<(u64, Vec<u64>)>>,
}

impl Enumerated {
    fn with_members<T>(&self, upto: u64, f: impl FnOnce(&[u64]) -> T) -> Result<T> {
        let mut st = self.state.lock().unwrap();
        let covered = st.as_ref().map(|s| s.0);
        if covered.is_none_or(|c| c < upto) {
            let bound = upto.max(covered.unwrap_or(0).saturating_mul(2)).max(1023);
            *st = Some((bound, self.oracle.members_upto(bound)?));
        }
        Ok(f(&st.as_ref().unwrap().1))
    }
}

impl Generator for Enumerated {
    fn at(&self, n: u64) -> Result<Sym> {
        self.with_members(n, |m| m.binary_search(&n).is_ok() as Sym)
    }

    fn fill(&self, start: u64, count: usize, out: &mut Vec<Sym>) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let end = start + count as u64;
        self.with_members(end - 1, |m| {
            let mut i = m.partition_point(|&x| x < start);
            for n in start..end {
                let hit = i < m.len() && m[i] == n;
                if hit {
                    i += 1;
                }
                out.push(hit as Sym);
            }
        })
    }

    fn describe(&self) -> String {
        self.oracle.describe()
    }
}

/// Indicator word of a set given by an enumeration oracle.
pub fn enumerated_word(oracle: impl SetOracle + 'static) -> Word {
    Word::new(Alphabet::binary(), Enumerated { oracle: Box::new(oracle), state: Mutex::new(None) })
}

struct FiniteSet(Vec<u64>);

impl SetOracle for FiniteSet {
    fn members_upto(&self, bound: u64) -> Result<Vec<u64>> {
        Ok(self.0.iter().copied().take_while(|&x| x <= bound).collect())
    }

    fn describe(&self) -> String {
        format!("set({:?})", self.0)
    }
}

/// Indicator of a finite set.
pub fn finite_set_word(members: impl IntoIterator<Item = u64>) -> Word {
    let set: BTreeSet<u64> = members.into_iter().collect();
    enumerated_word(FiniteSet(set.into_iter().collect()))
}

/// Step limit for enumerating recurrence sets.
const RECSET_STEP_LIMIT: usize = 10_000_000;

/// Value set of `xₖ = a₁xₖ₋₁ + ⋯ + a_d xₖ₋d`.
#[derive(Clone, Debug)]
pub struct RecurrenceSet {
    coeffs: Vec<u64>,
    initial: Vec<u64>,
}

impl RecurrenceSet {
    /// Coefficients must be non-negative with `Σaᵢ ≥ 1`, which makes every
    /// residue class of the sequence eventually non-decreasing and the
    /// enumeration finite for each bound.
    pub fn new(coeffs: Vec<i64>, initial: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() != initial.len() {
            return Err(Error::InvalidArgument("recurrence needs d coefficients and d initial terms".into()));
        }
        if coeffs.iter().chain(&initial).any(|&c| c < 0) || coeffs.iter().sum::<i64>() < 1 {
            return Err(Error::InvalidArgument("recurrence coefficients and terms must be non-negative with Σaᵢ ≥ 1".into()));
        }
        Ok(RecurrenceSet { coeffs: coeffs.iter().map(|&c| c as u64).collect(), initial: initial.iter().map(|&c| c as u64).collect() })
    }

    pub fn fibonacci() -> Self {
        RecurrenceSet::new(vec![1, 1], vec![0, 1]).unwrap()
    }

    pub fn tribonacci() -> Self {
        RecurrenceSet::new(vec![1, 1, 1], vec![0, 1, 1]).unwrap()
    }
}

impl SetOracle for RecurrenceSet {
    fn members_upto(&self, bound: u64) -> Result<Vec<u64>> {
        let d = self.coeffs.len();
        let mut window: Vec<u128> = self.initial.iter().map(|&x| x as u128).collect();
        let mut seen_windows = std::collections::HashSet::new();
        let mut out: BTreeSet<u64> = window.iter().filter(|&&x| x <= bound as u128).map(|&x| x as u64).collect();
        for _ in 0..RECSET_STEP_LIMIT {
            if window.iter().all(|&x| x > bound as u128) || !seen_windows.insert(window.clone()) {
                return Ok(out.into_iter().collect());
            }
            let next = self
                .coeffs
                .iter()
                .enumerate()
                .fold(0u128, |acc, (i, &a)| acc.saturating_add((a as u128).saturating_mul(window[d - 1 - i])));
            if next <= bound as u128 {
                out.insert(next as u64);
            }
            window.remove(0);
            window.push(next);
        }
        Err(Error::TooLarge("recurrence enumeration did not terminate".into()))
    }

    fn describe(&self) -> String {
        format!("recset({:?}, {:?})", self.coeffs, self.initial)
    }
}

/// Indicator of the value set of a linear recurrence.
pub fn recset(coeffs: Vec<i64>, initial: Vec<i64>) -> Result<Word> {
    Ok(enumerated_word(RecurrenceSet::new(coeffs, initial)?))
}

/// `𝟙_F` for the Fibonacci numbers `{0, 1, 2, 3, 5, 8, …}`.
pub fn fibonacci_set_word() -> Word {
    enumerated_word(RecurrenceSet::fibonacci())
}

/// How the terms `n₀ < n₁ < ⋯` of a sparse set are given.
#[derive(Clone, Debug)]
pub enum SparseSpec {
    /// Explicit terms; the set is finite.
    Terms(Vec<BigInt>),
    /// `nᵢ = base^(ratio^i)`.
    DoubleExponential { base: u64, ratio: u32 },
}

/// Default lower bound imposed on `log n_{i+1} / log nᵢ`.
pub fn default_min_ratio() -> BigRational {
    BigRational::new(11.into(), 10.into())
}

struct SparseSet {
    terms: Vec<u64>,
    label: String,
}

impl SetOracle for SparseSet {
    fn members_upto(&self, bound: u64) -> Result<Vec<u64>> {
        Ok(self.terms.iter().copied().take_while(|&x| x <= bound).collect())
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Checks `n_{i+1} ≥ nᵢ^r` (that is `log n_{i+1}/log nᵢ ≥ r`) on consecutive
/// terms, together with `nᵢ ≥ 2` and strict growth.
pub fn validate_sparse(terms: &[BigInt], min_ratio: &BigRational) -> Result<()> {
    let two = BigInt::from(2);
    for (i, t) in terms.iter().enumerate() {
        if *t < two {
            return Err(Error::HypothesisViolated { index: i, detail: format!("term {t} is below 2") });
        }
    }
    let p = min_ratio.numer().to_u32().ok_or(Error::Overflow("sparse ratio"))?;
    let q = min_ratio.denom().to_u32().ok_or(Error::Overflow("sparse ratio"))?;
    for (i, w) in terms.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::HypothesisViolated { index: i + 1, detail: "terms must increase strictly".into() });
        }
        if w[1].pow(q) < w[0].pow(p) {
            return Err(Error::HypothesisViolated { index: i + 1, detail: format!("log {} / log {} < {}", w[1], w[0], min_ratio) });
        }
    }
    Ok(())
}

/// Indicator of a sparse set `{nᵢ}` with `liminf log n_{i+1}/log nᵢ > 1`,
/// the growth condition validated on the provided terms against `min_ratio`.
pub fn sparse(spec: SparseSpec, min_ratio: &BigRational) -> Result<Word> {
    if *min_ratio <= BigRational::one() {
        return Err(Error::InvalidArgument("sparse ratio bound must exceed 1".into()));
    }
    match &spec {
        SparseSpec::Terms(t) => validate_sparse(t, min_ratio)?,
        SparseSpec::DoubleExponential { base, ratio } => {
            if *base < 2 || *ratio < 2 {
                return Err(Error::InvalidArgument("double exponential sparse set needs base ≥ 2 and ratio ≥ 2".into()));
            }
            if BigRational::from_integer(BigInt::from(*ratio)) < *min_ratio {
                return Err(Error::HypothesisViolated { index: 0, detail: format!("ratio {ratio} < {min_ratio}") });
            }
        }
    }
    let (terms, label) = match &spec {
        SparseSpec::Terms(t) => (t.iter().filter_map(|x| x.to_u64()).collect(), format!("sparse({} terms)", t.len())),
        SparseSpec::DoubleExponential { base, ratio } => {
            let mut out = Vec::new();
            let mut e: u32 = 1;
            while let Some(v) = base.checked_pow(e) {
                out.push(v);
                match e.checked_mul(*ratio) {
                    Some(x) => e = x,
                    None => break,
                }
            }
            (out, format!("sparse({base}^({ratio}^i))"))
        }
    };
    Ok(enumerated_word(SparseSet { terms, label }))
}

/// Greedy subset `E ⊂ F + [C]` of shifted Fibonacci numbers with
/// `|E ∩ [N]| = f(N) + O(1)`.
#[derive(Clone, Debug)]
pub struct TrackedSparse {
    table: Vec<BigRational>,
    c: u64,
}

impl TrackedSparse {
    /// `table[n] = f(n)`; beyond the table `f` stays at its last value.
    /// Requires `f > 0`, non-decreasing, and `f(2n) ≤ f(n) + C` on the table.
    pub fn new(table: Vec<BigRational>, c: u64) -> Result<Self> {
        if table.is_empty() || c == 0 {
            return Err(Error::InvalidArgument("tracked sparse needs a non-empty table and C ≥ 1".into()));
        }
        for (i, v) in table.iter().enumerate() {
            if !v.is_positive() {
                return Err(Error::HypothesisViolated { index: i, detail: "f must be positive".into() });
            }
            if i > 0 && *v < table[i - 1] {
                return Err(Error::HypothesisViolated { index: i, detail: "f must be non-decreasing".into() });
            }
        }
        let cc = BigRational::from_integer(BigInt::from(c));
        for n in 1..table.len() {
            if 2 * n < table.len() && table[2 * n] > &table[n] + &cc {
                return Err(Error::HypothesisViolated { index: 2 * n, detail: format!("f(2n) > f(n) + {c} at n = {n}") });
            }
        }
        Ok(TrackedSparse { table, c })
    }

    fn f(&self, n: u64) -> &BigRational {
        &self.table[(n as usize).min(self.table.len() - 1)]
    }
}

impl SetOracle for TrackedSparse {
    fn members_upto(&self, bound: u64) -> Result<Vec<u64>> {
        let mut shifted = BTreeSet::new();
        let (mut a, mut b) = (0u64, 1u64);
        while a <= bound {
            for k in 0..self.c {
                match a.checked_add(k) {
                    Some(x) if x <= bound => {
                        shifted.insert(x);
                    }
                    _ => break,
                }
            }
            let Some(next) = a.checked_add(b) else { break };
            a = b;
            b = next;
        }
        let mut out = Vec::new();
        for n in shifted {
            // |E ∩ [n]| counts members below n
            if *self.f(n) > BigRational::from_integer(BigInt::from(out.len())) {
                out.push(n);
            }
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        format!("tracked_sparse({} values, C = {})", self.table.len(), self.c)
    }
}

pub fn tracked_sparse(table: Vec<BigRational>, c: u64) -> Result<Word> {
    Ok(enumerated_word(TrackedSparse::new(table, c)?))
}

struct Heisenberg {
    alpha: RealValue,
    beta: RealValue,
    c: RealValue,
    half_ab: RealValue,
}

impl Heisenberg {
    fn value(&self, n: u64) -> Result<RealValue> {
        let k = RealValue::from(BigInt::from(n));
        let inner = self.alpha.mul(&k)?.frac()?;
        let t1 = mul_lenient(&mul_lenient(&self.beta, &inner)?, &k)?;
        let t2 = mul_lenient(&self.half_ab, &k.mul(&k)?)?;
        let t3 = self.c.mul(&k)?;
        add_lenient(&add_lenient(&t1, &t2.neg())?, &t3)
    }
}

impl Generator for Heisenberg {
    fn at(&self, n: u64) -> Result<Sym> {
        let f = self.value(n)?.frac()?;
        let d = f.mul(&RealValue::from(10))?.floor()?;
        Ok(d.to_u32().expect("digit of a fractional part"))
    }

    fn describe(&self) -> String {
        format!("heisenberg({}, {}, {})", self.alpha.label(), self.beta.label(), self.c.label())
    }
}

/// `⌊10·{nβ{nα} − n²αβ/2 + cn}⌋` over the digits `0..9`.
pub fn heisenberg(alpha: RealValue, beta: RealValue, c: RealValue) -> Result<Word> {
    let half_ab = mul_lenient(&mul_lenient(&alpha, &beta)?, &RealValue::rational(1, 2))?;
    Ok(Word::new(Alphabet::digits(10), Heisenberg { alpha, beta, c, half_ab }))
}

struct PowerDigit {
    alpha: RealValue,
    d: u32,
    ones: AffineFloor,
    tens: AffineFloor,
}

impl Generator for PowerDigit {
    fn at(&self, n: u64) -> Result<Sym> {
        if let Some(k) = (n as i64).checked_pow(self.d).filter(|_| n <= i64::MAX as u64) {
            return Ok((self.tens.floor_at(k)? - 10 * self.ones.floor_at(k)?) as Sym);
        }
        let k = RealValue::from(BigInt::from(n).pow(self.d));
        let f = self.alpha.mul(&k)?.frac()?;
        Ok(f.mul(&RealValue::from(10))?.floor()?.to_u32().expect("digit"))
    }

    fn describe(&self) -> String {
        format!("power_digit({}, {})", self.alpha.label(), self.d)
    }
}

/// `aₙ = ⌊10{αn^d}⌋`.
pub fn power_digit(alpha: RealValue, d: u32) -> Result<Word> {
    let ones = AffineFloor::new(alpha.clone(), RealValue::zero())?;
    let tens = AffineFloor::new(alpha.mul(&RealValue::from(10))?, RealValue::zero())?;
    Ok(Word::new(Alphabet::digits(10), PowerDigit { alpha, d, ones, tens }))
}

/// `g_A(n) = (⌊{√2n}^A n⌋, ⌊{√3n}^A n⌋)`, an unbounded pair sequence.
#[derive(Clone, Debug)]
pub struct GaProbe {
    a: u32,
    r2: RealValue,
    r3: RealValue,
    /// `√2·2^64` and `√3·2^64` enclosures
    fix2: (i128, i128),
    fix3: (i128, i128),
}

const ONE_64: u128 = 1 << 64;

/// `⌊{s·n}^A·n⌋` from a 64-bit enclosure of `s`, when the enclosure decides it.
fn ga_fast(fix: (i128, i128), n: u64, a: u32) -> Option<u64> {
    if n >= 1 << 40 {
        return None;
    }
    let k = n as i128;
    let (lo, hi) = (fix.0 * k, fix.1 * k);
    let m = lo >> 64;
    if hi >> 64 != m {
        return None;
    }
    let (mut plo, mut phi): (u128, u128) = (ONE_64, ONE_64);
    let (flo, fhi) = ((lo - (m << 64)) as u128, (hi - (m << 64)) as u128);
    for _ in 0..a {
        plo = (plo * flo) >> 64;
        phi = (phi * fhi + (ONE_64 - 1)) >> 64;
    }
    let (vlo, vhi) = ((plo * n as u128) >> 64, (phi * n as u128) >> 64);
    (vlo == vhi).then_some(vlo as u64)
}

impl GaProbe {
    pub fn new(a: u32) -> Result<Self> {
        let r2 = RealValue::from(sqrt_const(&multiquadratic_field(&[2])?, 2)?);
        let r3 = RealValue::from(sqrt_const(&multiquadratic_field(&[3])?, 3)?);
        let fix = |r: &RealValue| -> Result<(i128, i128)> {
            let (l, h) = r.fixed_enclosure(64)?;
            Ok((l.to_i128().ok_or(Error::Overflow("probe"))?, h.to_i128().ok_or(Error::Overflow("probe"))?))
        };
        Ok(GaProbe { a, fix2: fix(&r2)?, fix3: fix(&r3)?, r2, r3 })
    }

    pub fn exponent(&self) -> u32 {
        self.a
    }

    fn exact(&self, r: &RealValue, n: u64) -> Result<BigInt> {
        let k = RealValue::from(BigInt::from(n));
        r.mul(&k)?.frac()?.pow(self.a)?.mul(&k)?.floor()
    }

    pub fn value(&self, n: u64) -> Result<(BigInt, BigInt)> {
        let x = match ga_fast(self.fix2, n, self.a) {
            Some(v) => BigInt::from(v),
            None => self.exact(&self.r2, n)?,
        };
        let y = match ga_fast(self.fix3, n, self.a) {
            Some(v) => BigInt::from(v),
            None => self.exact(&self.r3, n)?,
        };
        Ok((x, y))
    }

    /// Exact evaluation without the fixed-point shortcut.
    pub fn value_exact(&self, n: u64) -> Result<(BigInt, BigInt)> {
        Ok((self.exact(&self.r2, n)?, self.exact(&self.r3, n)?))
    }

    pub fn values(&self, start: u64, count: usize) -> Result<Vec<(BigInt, BigInt)>> {
        (start..start + count as u64).map(|n| self.value(n)).collect()
    }
}

struct GrowthLambda {
    phi: RealValue,
    p: u32,
    q: u32,
    nint: AffineFloor,
    /// `φ·2^96` rounded down
    phi_fix: i128,
}

const GL_BITS: u32 = 96;

impl GrowthLambda {
    fn exact(&self, n: u64) -> Result<bool> {
        let k = RealValue::from(BigInt::from(n));
        let d = self.phi.mul(&k)?.dist()?;
        let lhs = d.pow(self.q)?.mul(&RealValue::from(BigInt::from(n).pow(self.q - self.p)))?;
        Ok(lhs.cmp_exact(&RealValue::from(1))? != std::cmp::Ordering::Greater)
    }
}

impl Generator for GrowthLambda {
    fn at(&self, n: u64) -> Result<Sym> {
        if n == 0 {
            return Ok(0);
        }
        // ‖nφ‖ > 1/(3n), so n·φ·2^96 known to within n units pins ‖nφ‖ to
        // relative precision far below the float margin used here
        if n < 1 << 30 {
            let m = self.nint.floor_at(n as i64)?;
            let x = (n as i128 * self.phi_fix - (m << GL_BITS)).abs();
            let d = x as f64 / (GL_BITS as f64).exp2();
            let gap = self.q as f64 * d.ln() - (self.p as f64 - self.q as f64) * (n as f64).ln();
            if gap.abs() > 1e-6 * self.q as f64 {
                return Ok((gap <= 0.0) as Sym);
            }
        }
        Ok(self.exact(n)? as Sym)
    }

    fn describe(&self) -> String {
        format!("growth_lambda({}/{})", self.p, self.q)
    }
}

/// `E = {n ≥ 1 : ‖nφ‖ ≤ n^{−1+λ}}` for rational `λ = p/q ∈ [0, 1]`, decided as
/// `‖nφ‖^q · n^{q−p} ≤ 1`.
pub fn growth_lambda(lambda: &BigRational) -> Result<Word> {
    if lambda.is_negative() || *lambda > BigRational::one() {
        return Err(Error::InvalidArgument("λ must lie in [0, 1]".into()));
    }
    let p = lambda.numer().to_u32().ok_or(Error::Overflow("λ"))?;
    let q = lambda.denom().to_u32().ok_or(Error::Overflow("λ"))?;
    let field = golden_field();
    let phi = RealValue::from(phi_const(&field)?);
    let nint = AffineFloor::new(phi.clone(), RealValue::rational(1, 2))?;
    let phi_fix = phi.fixed_enclosure(GL_BITS)?.0.to_i128().ok_or(Error::Overflow("φ"))?;
    Ok(Word::new(Alphabet::binary(), GrowthLambda { phi, p, q, nint, phi_fix }))
}
