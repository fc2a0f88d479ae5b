//! Small integer relations `R_N(α, ε)` and their lattice approximation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::lattice::IntLattice;
use crate::error::{Error, Result};
use crate::exactreal::{add_lenient, mul_lenient, RealValue};

/// Largest box `(2N−1)^d` enumerated.
pub const MAX_BOX: u64 = 50_000_000;

const BITS: u32 = 64;

/// `R_N(α, ε) = {m ∈ Z^d : ‖m‖_∞ < N, |Σ mᵢαᵢ| < ε}`.
#[derive(Clone, Debug)]
pub struct RelationSet {
    pub alpha: Vec<RealValue>,
    pub eps: RealValue,
    pub n: i64,
    /// Members in lexicographic order.
    pub members: Vec<Vec<i64>>,
}

impl RelationSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        self.members.binary_search_by(|x| x.as_slice().cmp(m)).is_ok()
    }
}

/// Linear forms `m ↦ Σ mᵢαᵢ`, either exactly as integers over a common
/// denominator or as 64-bit fixed-point enclosures.
enum Form {
    Exact { nums: Vec<i128>, den: i128 },
    Fixed { lo: Vec<i128>, hi: Vec<i128> },
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or(Error::Overflow("relation enumeration"))
}

impl Form {
    fn new(alpha: &[RealValue], exact: bool) -> Result<Self> {
        let rats: Option<Vec<BigRational>> = alpha.iter().map(|a| a.as_rational()).collect();
        if let Some(rats) = rats.filter(|_| exact) {
            let den = rats.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let nums = rats.iter().map(|q| to_i128(&(q.numer() * (&den / q.denom())))).collect::<Result<_>>()?;
            return Ok(Form::Exact { nums, den: to_i128(&den)? });
        }
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for a in alpha {
            let (l, h) = a.fixed_enclosure(BITS)?;
            lo.push(to_i128(&l)?);
            hi.push(to_i128(&h)?);
        }
        Ok(Form::Fixed { lo, hi })
    }

    /// Approximate value, for reporting only.
    fn approx(&self, m: &[i64]) -> f64 {
        match self {
            Form::Exact { nums, den } => {
                let s: i128 = m.iter().zip(nums).map(|(&k, a)| k as i128 * a).sum();
                s as f64 / *den as f64
            }
            Form::Fixed { lo, hi } => {
                let s: f64 = m.iter().zip(lo.iter().zip(hi)).map(|(&k, (l, h))| k as f64 * ((l + h) as f64 / 2.0)).sum();
                s / 2f64.powi(BITS as i32)
            }
        }
    }
}

fn exact_sum(alpha: &[RealValue], m: &[i64]) -> Result<RealValue> {
    let mut s = RealValue::zero();
    for (a, &k) in alpha.iter().zip(m) {
        if k != 0 {
            s = add_lenient(&s, &mul_lenient(a, &RealValue::from(k))?)?;
        }
    }
    Ok(s)
}

fn abs_less(x: &RealValue, eps: &RealValue) -> Result<bool> {
    Ok(add_lenient(x, &eps.neg())?.sign()? < 0 && add_lenient(x, eps)?.sign()? > 0)
}

/// Exhaustive exact enumeration of `R_N(α, ε)`.
pub fn enumerate_relations(alpha: &[RealValue], eps: &RealValue, n: i64) -> Result<RelationSet> {
    if eps.sign()? <= 0 {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let d = alpha.len();
    let side = (2 * n - 1) as u64;
    if side.checked_pow(d as u32).is_none_or(|b| b > MAX_BOX) {
        return Err(Error::TooLarge(format!("box (2·{n}−1)^{d} exceeds {MAX_BOX} points")));
    }
    let mut members = Vec::new();
    let mut m = vec![0i64; d];
    let e = eps.as_rational();
    match Form::new(alpha, e.is_some())? {
        Form::Exact { nums, den } => {
            let e = e.expect("exact forms need a rational ε");
            // |S|/den < p/q  ⇔  |S|·q < p·den
            let q = to_i128(e.denom())?;
            let t = to_i128(&(e.numer() * BigInt::from(den)))?;
            exact_rec(&nums, q, t, n, 0, 0, &mut m, &mut members)?;
        }
        Form::Fixed { lo, hi } => {
            let (el, eh) = eps.fixed_enclosure(BITS)?;
            let (el, eh) = (to_i128(&el)?, to_i128(&eh)?);
            fixed_rec(alpha, eps, &lo, &hi, (el, eh), n, 0, (0, 0), &mut m, &mut members)?;
        }
    }
    Ok(RelationSet { alpha: alpha.to_vec(), eps: eps.clone(), n, members })
}

#[allow(clippy::too_many_arguments)]
fn exact_rec(nums: &[i128], q: i128, t: i128, n: i64, i: usize, s: i128, m: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) -> Result<()> {
    let d = nums.len();
    if d == 0 {
        if 0 < t {
            out.push(Vec::new());
        }
        return Ok(());
    }
    if i + 1 < d {
        for k in -(n - 1)..n {
            m[i] = k;
            let s2 = checked_add(s, checked_mul(k as i128, nums[i])?)?;
            exact_rec(nums, q, t, n, i + 1, s2, m, out)?;
        }
        return Ok(());
    }
    // last coordinate: solve −t < (s + k·a)·q < t for k directly
    let a = nums[i];
    let sq = checked_mul(s, q)?;
    let (lo, hi) = if a == 0 {
        if sq.abs() < t {
            (-(n - 1), n - 1)
        } else {
            (1, 0)
        }
    } else {
        let aq = checked_mul(a, q)?;
        let (l, u) = (-t - sq, t - sq);
        // strict l < k·aq < u
        let (l, u, aq) = if aq > 0 { (l, u, aq) } else { (-u, -l, -aq) };
        let kmin = l.div_euclid(aq) + 1;
        let kmax = (u - 1).div_euclid(aq);
        (kmin.max(-(n as i128 - 1)) as i64, kmax.min(n as i128 - 1) as i64)
    };
    for k in lo..=hi {
        m[i] = k;
        out.push(m.clone());
    }
    Ok(())
}

fn checked_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("relation enumeration"))
}

fn checked_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("relation enumeration"))
}

#[allow(clippy::too_many_arguments)]
fn fixed_rec(
    alpha: &[RealValue],
    eps: &RealValue,
    lo: &[i128],
    hi: &[i128],
    e: (i128, i128),
    n: i64,
    i: usize,
    s: (i128, i128),
    m: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) -> Result<()> {
    if i == lo.len() {
        let (l, h) = s;
        let inside = if h < e.0 && l > -e.0 {
            true
        } else if l >= e.1 || h <= -e.1 {
            false
        } else {
            abs_less(&exact_sum(alpha, m)?, eps)?
        };
        if inside {
            out.push(m.clone());
        }
        return Ok(());
    }
    for k in -(n - 1)..n {
        m[i] = k;
        let k = k as i128;
        let (a, b) = if k >= 0 { (lo[i], hi[i]) } else { (hi[i], lo[i]) };
        let s2 = (checked_add(s.0, checked_mul(k, a)?)?, checked_add(s.1, checked_mul(k, b)?)?);
        fixed_rec(alpha, eps, lo, hi, e, n, i + 1, s2, m, out)?;
    }
    Ok(())
}

/// Evidence for `R_N(α, ε) ⊆ Λ ∩ (−N, N)^d ⊆ R_N(α, Ĉ N^d ε)`.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichCertificate {
    pub relations: usize,
    pub first_inclusion: bool,
    pub lattice_points: usize,
    /// `max |Σ mᵢαᵢ|` over `Λ ∩ (−N, N)^d`.
    pub max_value: f64,
    /// `max_value / (N^d ε)`.
    pub c_hat: f64,
}

/// `Λ = span_Z R_N(α, ε)` with the measured sandwich constant.
pub fn lattice_approx(alpha: &[RealValue], eps: &RealValue, n: i64) -> Result<(IntLattice, SandwichCertificate)> {
    let rel = enumerate_relations(alpha, eps, n)?;
    let lattice = IntLattice::span(alpha.len(), &rel.members)?;
    let first_inclusion = rel.members.iter().all(|m| lattice.contains(m));
    let form = Form::new(alpha, true)?;
    let points = lattice.points_in_box(n);
    let max_value = points.iter().map(|m| form.approx(m).abs()).fold(0.0, f64::max);
    let scale = (n as f64).powi(alpha.len() as i32) * eps.to_f64();
    let cert =
        SandwichCertificate { relations: rel.len(), first_inclusion, lattice_points: points.len(), max_value, c_hat: max_value / scale };
    Ok((lattice, cert))
}

/// `Σ mᵢαᵢ` for rational `α`, exactly.
pub(crate) fn rational_form(alpha: &[BigRational], m: &[i64]) -> BigRational {
    alpha.iter().zip(m).fold(BigRational::zero(), |acc, (a, &k)| acc + a * BigRational::from_integer(k.into()))
}
