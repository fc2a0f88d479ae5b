//! Counting the prefixes `g_α|[N]` of `g_α(n) = ⌊Σ αᵢ hᵢ(n)⌋` over a
//! parameter grid, and rebuilding them from lattice data.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::lattice::IntLattice;
use super::relations::{enumerate_relations, rational_form};
use crate::error::{Error, Result};
use crate::exactreal::{format_rational, RealValue};

/// Largest parameter grid enumerated.
pub const MAX_GRID: u64 = 10_000_000;

/// Distinct prefixes over a rational grid in `[−R, R)^d`; a lower bound
/// for the count over all real parameters.
#[derive(Clone, Debug, Serialize)]
pub struct PrefixCountReport {
    pub d: usize,
    pub n: usize,
    /// `max ‖hᵢ‖_∞`.
    pub h: i64,
    pub r: u32,
    pub step: String,
    pub grid_points: u64,
    pub distinct: usize,
    /// `R^d H^{3d²}`.
    pub envelope: f64,
    /// `log distinct / log H`, when `H ≥ 2`.
    pub exponent_in_h: Option<f64>,
}

fn check_sequences(h: &[Vec<i64>]) -> Result<(usize, i64)> {
    let n = h.first().map_or(0, |s| s.len());
    if h.iter().any(|s| s.len() != n) {
        return Err(Error::InvalidArgument("sequences of different lengths".into()));
    }
    let hmax = h.iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
    Ok((n, hmax))
}

/// Distinct `g_α|[N]` for `α` on the grid `−R + step·Z` inside `[−R, R)^d`.
pub fn prefix_count_experiment(h: &[Vec<i64>], r: u32, step: &BigRational) -> Result<PrefixCountReport> {
    let d = h.len();
    let (n, hmax) = check_sequences(h)?;
    if !step.is_positive() {
        return Err(Error::InvalidArgument("grid step must be positive".into()));
    }
    let per = BigRational::from_integer(BigInt::from(2 * r)) / step;
    if !per.is_integer() {
        return Err(Error::InvalidArgument(format!("2R = {} is not a multiple of the step {}", 2 * r, format_rational(step))));
    }
    let per = per.to_integer().to_u64().ok_or_else(|| Error::TooLarge("grid".into()))?;
    let grid = per
        .checked_pow(d as u32)
        .filter(|&g| g <= MAX_GRID)
        .ok_or_else(|| Error::TooLarge(format!("{per}^{d} grid points (at most {MAX_GRID})")))?;
    let p = step.numer().to_i128().ok_or(Error::Overflow("grid step"))?;
    let q = step.denom().to_i128().ok_or(Error::Overflow("grid step"))?;
    // α = (k·p − R·q)/q for k in 0..per
    let nums: Vec<i128> = (0..per as i128).map(|k| k * p - r as i128 * q).collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut idx = vec![0usize; d];
    let mut prefix = vec![0i64; n];
    for _ in 0..grid {
        for (t, out) in prefix.iter_mut().enumerate() {
            let s: i128 = (0..d).map(|i| nums[idx[i]] * h[i][t] as i128).sum();
            *out = s.div_euclid(q) as i64;
        }
        if !seen.contains(&prefix) {
            seen.insert(prefix.clone());
        }
        for c in idx.iter_mut() {
            *c += 1;
            if *c < per as usize {
                break;
            }
            *c = 0;
        }
    }
    let distinct = seen.len();
    let hf = hmax.max(1) as f64;
    Ok(PrefixCountReport {
        d,
        n,
        h: hmax,
        r,
        step: format_rational(step),
        grid_points: grid,
        distinct,
        envelope: (r as f64).powi(d as i32) * hf.powi(3 * (d * d) as i32),
        exponent_in_h: (hmax >= 2).then(|| (distinct as f64).ln() / hf.ln()),
    })
}

fn floor_rat(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// `g_α|[N]` evaluated directly.
pub fn direct_prefix(h: &[Vec<i64>], alpha: &[BigRational]) -> Result<Vec<BigInt>> {
    let (n, _) = check_sequences(h)?;
    if alpha.len() != h.len() {
        return Err(Error::InvalidArgument("one parameter per sequence".into()));
    }
    Ok((0..n)
        .map(|t| {
            let m: Vec<i64> = h.iter().map(|s| s[t]).collect();
            floor_rat(&rational_form(alpha, &m))
        })
        .collect())
}

/// Result of rebuilding `g_α|[N]` from `(α*, Λ ∩ B, Λ⁺ ∩ B)`.
#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    pub alpha: Vec<String>,
    pub eps: String,
    pub alpha_star: Vec<String>,
    pub lattice_rank: usize,
    /// How often each of the three cases (off `Λ`, in `Λ⁺`, in `Λ ∖ Λ⁺`) occurred.
    pub cases: [usize; 3],
    pub mismatches: Vec<usize>,
}

impl Reconstruction {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Rebuilds `g_α|[N]` by the three-case formula with
/// `ε = 1/(100·c_d·(dH)^d)`, `α*` on the grid `(ε/dH)Z` and
/// `Λ = span R_{dH}((1, α), ε)`, and compares it with direct evaluation.
pub fn reconstruct_prefix(h: &[Vec<i64>], alpha: &[BigRational], c_d: &BigRational) -> Result<Reconstruction> {
    let d = h.len();
    let (n, hmax) = check_sequences(h)?;
    if alpha.len() != d {
        return Err(Error::InvalidArgument("one parameter per sequence".into()));
    }
    if !c_d.is_positive() {
        return Err(Error::InvalidArgument("c_d must be positive".into()));
    }
    let dh = (d as i64 * hmax).max(1);
    let dh_r = BigRational::from_integer(dh.into());
    let eps = BigRational::one() / (BigRational::from_integer(100.into()) * c_d * num_traits::pow(dh_r.clone(), d));
    let delta = &eps / &dh_r;

    // g_α = g_{α} on the fractional parts plus Σ ⌊αᵢ⌋hᵢ
    let ip: Vec<BigInt> = alpha.iter().map(floor_rat).collect();
    let fp: Vec<BigRational> = alpha.iter().zip(&ip).map(|(a, i)| a - BigRational::from_integer(i.clone())).collect();
    let star: Vec<BigRational> = fp.iter().map(|a| BigRational::from_integer(floor_rat(&(a / &delta))) * &delta).collect();

    let mut one_alpha = vec![RealValue::from(1)];
    one_alpha.extend(fp.iter().cloned().map(RealValue::from));
    let rel = enumerate_relations(&one_alpha, &RealValue::from(eps.clone()), dh)?;
    let lattice = IntLattice::span(d + 1, &rel.members)?;
    let mut one_fp = vec![BigRational::one()];
    one_fp.extend(fp.iter().cloned());

    let half = BigRational::new(1.into(), 2.into());
    let direct = direct_prefix(h, alpha)?;
    let mut cases = [0usize; 3];
    let mut mismatches = Vec::new();
    for t in 0..n {
        let m: Vec<i64> = h.iter().map(|s| s[t]).collect();
        let x_star = rational_form(&star, &m);
        let h0 = -floor_rat(&(&x_star + &half));
        let mut v = vec![h0.to_i64().ok_or(Error::Overflow("h0"))?];
        v.extend(&m);
        let (case, g) = if !lattice.contains(&v) {
            (0, floor_rat(&x_star))
        } else if !rational_form(&one_fp, &v).is_negative() {
            (1, floor_rat(&(&x_star + &half)))
        } else {
            (2, floor_rat(&(&x_star - &half)))
        };
        cases[case] += 1;
        let shift: BigInt = ip.iter().zip(&m).map(|(i, &k)| i * BigInt::from(k)).sum();
        if g + shift != direct[t] {
            mismatches.push(t);
        }
    }
    Ok(Reconstruction {
        alpha: alpha.iter().map(format_rational).collect(),
        eps: format_rational(&eps),
        alpha_star: star.iter().map(format_rational).collect(),
        lattice_rank: lattice.rank(),
        cases,
        mismatches,
    })
}

/// Aggregate over sampled parameters.
#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionReport {
    pub samples: usize,
    pub matched: usize,
    pub cases: [usize; 3],
    pub max_rank: usize,
    pub failures: Vec<Reconstruction>,
}

/// Samples `α ∈ [−R, R)^d` cycling through three kinds: small
/// denominators (exact relations), large denominators, and small
/// denominators perturbed by `O(10^-9)` (near relations).
pub fn sample_parameters(d: usize, r: u32, count: usize, seed: u64) -> Vec<Vec<BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = r.max(1) as i64;
    (0..count)
        .map(|s| {
            (0..d)
                .map(|_| {
                    let (q, extra) = match s % 3 {
                        0 => (rng.gen_range(1..=12i64), BigRational::zero()),
                        1 => (rng.gen_range(1_000_000..=2_000_000i64), BigRational::zero()),
                        _ => (rng.gen_range(1..=12i64), BigRational::new(rng.gen_range(-50..=50i64).into(), 1_000_000_000.into())),
                    };
                    let p = rng.gen_range(-r * q..r * q);
                    let a = BigRational::new(p.into(), q.into()) + extra;
                    let lo = BigRational::from_integer((-r).into());
                    let hi = BigRational::from_integer(r.into());
                    if a < lo || a >= hi {
                        BigRational::new(p.into(), q.into())
                    } else {
                        a
                    }
                })
                .collect()
        })
        .collect()
}

pub fn reconstruction_experiment(h: &[Vec<i64>], r: u32, samples: usize, seed: u64, c_d: &BigRational) -> Result<ReconstructionReport> {
    let mut report = ReconstructionReport { samples, matched: 0, cases: [0; 3], max_rank: 0, failures: Vec::new() };
    for alpha in sample_parameters(h.len(), r, samples, seed) {
        let rec = reconstruct_prefix(h, &alpha, c_d)?;
        for (c, k) in report.cases.iter_mut().zip(rec.cases) {
            *c += k;
        }
        report.max_rank = report.max_rank.max(rec.lattice_rank);
        if rec.matches() {
            report.matched += 1;
        } else {
            report.failures.push(rec);
        }
    }
    Ok(report)
}
