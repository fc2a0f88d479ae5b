//! Measurements on finite prefixes: subword complexity, frequencies,
//! recurrence, counting functions, discrepancy, balance and growth fits.
//!
//! Every quantity is computed on a prefix of a stated horizon and reported
//! with that horizon; nothing here is a limit.

mod suffix;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactreal::{AffineFloor, RealValue};
use crate::words::{GaProbe, Sym, Word};

pub use suffix::{distinct_factor_counts, lcp_array, suffix_array};

/// `p_a(N)` for the requested lengths, counted on positions `[0, H − N]`.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexityProfile {
    pub horizon: usize,
    pub table: Vec<(usize, u64)>,
}

impl ComplexityProfile {
    pub fn get(&self, n: usize) -> Option<u64> {
        self.table.iter().find(|(m, _)| *m == n).map(|(_, p)| *p)
    }

    /// Violations of `p(N) ≤ p(N+1) ≤ |Σ|·p(N)` and `p(N+M) ≤ p(N)·p(M)`
    /// among tabulated lengths, as human-readable strings.
    pub fn law_violations(&self, alphabet_size: usize) -> Vec<String> {
        let mut out = Vec::new();
        for w in self.table.windows(2) {
            let ((n, p), (m, q)) = (w[0], w[1]);
            if m == n + 1 && (q < p || q > alphabet_size as u64 * p) {
                out.push(format!("p({m}) = {q} outside [p({n}), |Σ|·p({n})] = [{p}, {}]", alphabet_size as u64 * p));
            }
        }
        for &(n, p) in &self.table {
            for &(m, q) in &self.table {
                if let Some(r) = self.get(n + m) {
                    if r > p.saturating_mul(q) {
                        out.push(format!("p({}) = {r} > p({n})·p({m}) = {}", n + m, p * q));
                    }
                }
            }
        }
        out
    }

    /// Least-squares fit of `log p(N)` against `log N` over the table.
    pub fn growth_exponent(&self) -> Result<Fit> {
        let pts: Vec<(f64, f64)> = self.table.iter().filter(|(n, _)| *n > 0).map(|&(n, p)| (n as f64, p as f64)).collect();
        fit_growth(&pts, FitScale::LogLog)
    }
}

/// Subword complexity of the prefix of length `horizon`.
pub fn subword_complexity(a: &Word, ns: &[usize], horizon: usize) -> Result<ComplexityProfile> {
    let s = a.prefix(horizon)?;
    Ok(complexity_of(&s, ns))
}

/// Subword complexity of a finite sequence.
pub fn complexity_of(s: &[Sym], ns: &[usize]) -> ComplexityProfile {
    let counts = distinct_factor_counts(s);
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ComplexityProfile { horizon: s.len(), table: ns.into_iter().map(|n| (n, counts.get(n).copied().unwrap_or(0))).collect() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Periodicity {
    /// `p(n) ≤ n` at the least such tabulated `n`; Morse–Hedlund then gives
    /// eventual periodicity with period at most `p`.
    EventuallyPeriodicEvidence { n: usize, p: u64 },
    /// `p(N) ≥ N + 1` at every tabulated `N ≤ checked_up_to`.
    Aperiodic { checked_up_to: usize },
}

/// Morse–Hedlund test on a tabulated profile.
pub fn periodicity_check(profile: &ComplexityProfile) -> Periodicity {
    for &(n, p) in &profile.table {
        if n >= 1 && p <= n as u64 {
            return Periodicity::EventuallyPeriodicEvidence { n, p };
        }
    }
    Periodicity::Aperiodic { checked_up_to: profile.table.iter().map(|t| t.0).max().unwrap_or(0) }
}

/// Start positions of `w` in `s`.
pub fn occurrences(s: &[Sym], w: &[Sym]) -> Vec<usize> {
    if w.is_empty() {
        return (0..=s.len()).collect();
    }
    s.windows(w.len()).enumerate().filter(|(_, x)| *x == w).map(|(i, _)| i).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FrequencyRow {
    /// window length
    pub n: usize,
    /// `cnt(w; [M, M+N))/N` for each window start `M` of the grid
    pub estimates: Vec<f64>,
    /// exact counts behind the estimates
    pub counts: Vec<u64>,
    /// `max − min` of the estimates over the grid
    pub spread: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrequencyReport {
    pub factor: Vec<Sym>,
    pub starts: Vec<usize>,
    pub horizon: usize,
    pub rows: Vec<FrequencyRow>,
}

/// Occurrence counts of `w` starting in windows `[M, M+N)`, for every `M` in
/// `starts` and `N` in `lengths`. Occurrences must fit inside the horizon.
pub fn frequency(a: &Word, w: &[Sym], starts: &[usize], lengths: &[usize]) -> Result<FrequencyReport> {
    let horizon = starts.iter().flat_map(|m| lengths.iter().map(move |n| m + n)).max().unwrap_or(0) + w.len();
    let s = a.prefix(horizon)?;
    let mut prefix = vec![0u64; s.len() + 1];
    for i in 0..s.len() {
        let hit = i + w.len() <= s.len() && s[i..i + w.len()] == *w;
        prefix[i + 1] = prefix[i] + hit as u64;
    }
    let rows = lengths
        .iter()
        .map(|&n| {
            let counts: Vec<u64> = starts.iter().map(|&m| prefix[m + n] - prefix[m]).collect();
            let estimates: Vec<f64> = counts.iter().map(|&c| if n == 0 { 0.0 } else { c as f64 / n as f64 }).collect();
            let lo = estimates.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = estimates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            FrequencyRow { n, estimates, counts, spread: if starts.is_empty() { 0.0 } else { hi - lo } }
        })
        .collect();
    Ok(FrequencyReport { factor: w.to_vec(), starts: starts.to_vec(), horizon, rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Recurrence {
    /// Every window of this length inside the horizon contains `w`.
    Bounded { rec: usize, horizon: usize },
    /// Gaps keep growing across the horizon (or `w` never occurs).
    Unbounded { max_gap: usize, horizon: usize },
}

/// Horizon-bounded recurrence function `rec(a, w)`.
///
/// The value is `max gap + |w| − 1`, where gaps run between consecutive
/// occurrences and from a virtual occurrence at `−1`. The unbounded marker
/// is reported when `w` never occurs, or when the largest gap over the full
/// horizon (including the open gap at its end) exceeds twice the largest
/// gap over the first quarter.
pub fn recurrence_function(a: &Word, w: &[Sym], horizon: usize) -> Result<Recurrence> {
    let s = a.prefix(horizon)?;
    Ok(recurrence_of(&s, w))
}

pub fn recurrence_of(s: &[Sym], w: &[Sym]) -> Recurrence {
    let horizon = s.len();
    let occ = occurrences(s, w);
    let last_start = (horizon + 1).saturating_sub(w.len().max(1));
    let max_gap = |limit: usize| -> usize {
        let mut prev: isize = -1;
        let mut g = 0usize;
        for &p in occ.iter().take_while(|&&p| p < limit) {
            g = g.max((p as isize - prev) as usize);
            prev = p as isize;
        }
        g.max((limit as isize - prev) as usize)
    };
    if occ.is_empty() {
        return Recurrence::Unbounded { max_gap: horizon, horizon };
    }
    let full = max_gap(last_start);
    let quarter = max_gap(last_start / 4);
    if full > 2 * quarter {
        return Recurrence::Unbounded { max_gap: full, horizon };
    }
    let mut prev: isize = -1;
    let mut g = 0usize;
    for &p in &occ {
        g = g.max((p as isize - prev) as usize);
        prev = p as isize;
    }
    Recurrence::Bounded { rec: g + w.len().max(1) - 1, horizon }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthSample {
    pub n: usize,
    pub count: u64,
    /// `Δ(a; N) = max_x |cnt(a, x; N) − N·freq(x)|` with the reported frequencies
    pub discrepancy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub symbol: Sym,
    pub horizon: usize,
    /// frequency estimates `cnt(a, x; H)/H` used for `Δ`, per symbol, as `p/q`
    pub frequencies: Vec<String>,
    pub samples: Vec<GrowthSample>,
}

/// `cnt(a, x; N)` and `Δ(a; N)` at the sample lengths. Frequencies are the
/// end-of-horizon estimates, recorded in the report.
pub fn counting_and_discrepancy(a: &Word, x: Sym, ns: &[usize], horizon: usize) -> Result<GrowthReport> {
    let horizon = horizon.max(ns.iter().copied().max().unwrap_or(0));
    let s = a.prefix(horizon)?;
    let k = a.alphabet().len();
    let mut total = vec![0u64; k];
    for &c in &s {
        total[c as usize] += 1;
    }
    let freqs: Vec<BigRational> = total.iter().map(|&t| BigRational::new(BigInt::from(t), BigInt::from(horizon.max(1)))).collect();
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    let mut counts = vec![0u64; k];
    let mut i = 0;
    let mut samples = Vec::new();
    for n in ns {
        while i < n {
            counts[s[i] as usize] += 1;
            i += 1;
        }
        let mut disc = BigRational::zero();
        for (c, f) in counts.iter().zip(&freqs) {
            let d = (BigRational::from_integer(BigInt::from(*c)) - f * BigRational::from_integer(BigInt::from(n))).abs();
            if d > disc {
                disc = d;
            }
        }
        samples.push(GrowthSample { n, count: counts[x as usize], discrepancy: disc.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(GrowthReport { symbol: x, horizon, frequencies: freqs.iter().map(crate::exactreal::format_rational).collect(), samples })
}

/// Exact check of `|cnt(a, x; N) − αN| ≤ c` for all `1 ≤ N ≤ n_max`; returns
/// the first failing `N`, if any.
pub fn count_deviation_violation(a: &Word, x: Sym, alpha: &RealValue, c: i64, n_max: usize) -> Result<Option<usize>> {
    let s = a.prefix(n_max)?;
    let up = AffineFloor::new(alpha.clone(), RealValue::zero())?;
    let down = AffineFloor::new(alpha.neg(), RealValue::zero())?;
    let mut cnt: i128 = 0;
    for n in 1..=n_max {
        cnt += (s[n - 1] == x) as i128;
        // cnt − c ≤ αN  ⇔  ⌊αN⌋ ≥ cnt − c;   αN ≤ cnt + c  ⇔  ⌈αN⌉ ≤ cnt + c
        let fl = up.floor_at(n as i64)?;
        let cl = -down.floor_at(n as i64)?;
        if fl < cnt - c as i128 || cl > cnt + c as i128 {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Balance constant of symbol `x`: the largest difference of `x`-counts
/// between two windows of equal length `ℓ ≤ max_len` inside the horizon.
pub fn balance_constant(a: &Word, x: Sym, max_len: usize, horizon: usize) -> Result<u64> {
    let s = a.prefix(horizon)?;
    Ok(balance_of(&s, x, max_len))
}

pub fn balance_of(s: &[Sym], x: Sym, max_len: usize) -> u64 {
    let mut prefix = vec![0u32; s.len() + 1];
    for (i, &c) in s.iter().enumerate() {
        prefix[i + 1] = prefix[i] + (c == x) as u32;
    }
    let mut best = 0;
    for l in 1..=max_len.min(s.len()) {
        let (mut lo, mut hi) = (u32::MAX, 0);
        for i in 0..=s.len() - l {
            let c = prefix[i + l] - prefix[i];
            lo = lo.min(c);
            hi = hi.max(c);
        }
        best = best.max(hi - lo);
    }
    best as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FitScale {
    /// `log y` against `log N`
    LogLog,
    /// `y` against `log N`
    SemiLog,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub window: (f64, f64),
    pub points: usize,
    pub scale: FitScale,
}

impl Fit {
    /// Best rational approximation of the slope with denominator at most `max_den`.
    pub fn slope_rational(&self, max_den: u64) -> (i64, u64) {
        best_rational(self.slope, max_den)
    }
}

/// Least-squares slope; needs at least four points spanning two decades.
pub fn fit_growth(points: &[(f64, f64)], scale: FitScale) -> Result<Fit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, y)| *n > 0.0 && (scale == FitScale::SemiLog || *y > 0.0))
        .map(|&(n, y)| (n.ln(), if scale == FitScale::LogLog { y.ln() } else { y }))
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientSamples(format!("{} usable points, need 4", pts.len())));
    }
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p.0), h.max(p.0)));
    if hi - lo < 2.0 * std::f64::consts::LN_10 - 1e-9 {
        return Err(Error::InsufficientSamples("samples must span two decades".into()));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = pts.iter().map(|p| (p.1 - slope * p.0 - intercept).abs()).fold(0.0, f64::max);
    Ok(Fit { slope, intercept, max_residual, window: (lo.exp(), hi.exp()), points: pts.len(), scale })
}

/// Counting-function growth fit: `cnt(a, x; N)` sampled at `ns`.
pub fn growth_exponent(report: &GrowthReport, scale: FitScale) -> Result<Fit> {
    let pts: Vec<(f64, f64)> = report.samples.iter().map(|s| (s.n as f64, s.count as f64)).collect();
    fit_growth(&pts, scale)
}

fn best_rational(x: f64, max_den: u64) -> (i64, u64) {
    // continued-fraction convergents
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1u64, 1i64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let (p2, q2) = (a as i64 * p1 + p0, a as u64 * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let f = r - a;
        if f.abs() < 1e-12 {
            break;
        }
        r = 1.0 / f;
    }
    if q1 == 0 {
        (x.round() as i64, 1)
    } else {
        (p1, q1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverageTable {
    pub exponent: u32,
    pub bound: u64,
    pub horizon: u64,
    /// `first_hit[k][l]`: least `n < horizon` with `g_A(n) = (k, l)`
    pub first_hit: Vec<Vec<Option<u64>>>,
    /// `0 ≤ g_A(n)ᵢ < n` held at every `n ≥ 1` inspected
    pub components_bounded: bool,
}

impl CoverageTable {
    pub fn hits(&self) -> usize {
        self.first_hit.iter().flatten().filter(|h| h.is_some()).count()
    }
}

/// First hits of `g_A(n) = (k, l)` for `(k, l) ∈ [K]²` over `n < horizon`.
pub fn surjection_coverage(probe: &GaProbe, bound: u64, horizon: u64) -> Result<CoverageTable> {
    if probe.exponent() < 2 {
        return Err(Error::InvalidArgument("coverage needs A ≥ 2".into()));
    }
    let k = bound as usize;
    let mut first_hit = vec![vec![None; k]; k];
    let mut components_bounded = true;
    for n in 0..horizon {
        let (x, y) = probe.value(n)?;
        if n >= 1 && (x.is_negative() || y.is_negative() || x >= BigInt::from(n) || y >= BigInt::from(n)) {
            components_bounded = false;
        }
        if let (Some(x), Some(y)) = (x.to_usize(), y.to_usize()) {
            if x < k && y < k && first_hit[x][y].is_none() {
                first_hit[x][y] = Some(n);
            }
        }
    }
    Ok(CoverageTable { exponent: probe.exponent(), bound, horizon, first_hit, components_bounded })
}
