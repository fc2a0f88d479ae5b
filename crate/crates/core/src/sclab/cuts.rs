//! Subsets of a finite point set cut out by half-spaces.
//!
//! A subset `A ⊆ S` is `S ∩ H` for a half-space `H` iff `A` and `S ∖ A` are
//! strictly separable. Every such dichotomy is realised by a hyperplane of
//! `aff(S)` through affinely independent points of `S`, with the points on
//! the hyperplane split by a dichotomy of the same kind one dimension down.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::lattice::IntLattice;
use crate::error::{Error, Result};

/// Largest point set handled (subsets are `u64` masks).
pub const MAX_POINTS: usize = 64;

/// Largest number of candidate hyperplanes examined at the top level.
const MAX_HYPERPLANES: u128 = 5_000_000;

/// The family `{S ∩ H}` as bit masks over the input order.
#[derive(Clone, Debug, Serialize)]
pub struct CutFamily {
    pub n: usize,
    pub dim: usize,
    pub cuts: Vec<u64>,
}

impl CutFamily {
    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    /// `2 Σ_{i=0}^{d} C(n−1, i)`.
    pub fn harding_bound(&self) -> u128 {
        harding_bound(self.n, self.dim)
    }

    pub fn within_bound(&self) -> bool {
        self.n == 0 || self.cuts.len() as u128 <= self.harding_bound()
    }

    /// The cut as a sorted list of point indices.
    pub fn members(mask: u64) -> Vec<usize> {
        (0..64).filter(|i| mask >> i & 1 == 1).collect()
    }
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// `2 Σ_{i=0}^{d} C(n−1, i)` for `n ≥ 1`.
pub fn harding_bound(n: usize, d: usize) -> u128 {
    if n == 0 {
        return 1;
    }
    2 * (0..=d as u128).map(|i| binom(n as u128 - 1, i)).sum::<u128>()
}

type Point = Vec<BigRational>;

fn sub(a: &Point, b: &Point) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Row-reduces `rows` and returns the indices of a maximal independent
/// subset together with the pivot columns of the reduced form.
fn independent(rows: &[Point]) -> (Vec<usize>, Vec<usize>) {
    let mut basis: Vec<(Point, usize)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        for (b, c) in &basis {
            if !v[*c].is_zero() {
                let f = &v[*c] / &b[*c];
                for j in 0..v.len() {
                    v[j] -= &f * &b[j];
                }
            }
        }
        if let Some(c) = v.iter().position(|x| !x.is_zero()) {
            basis.push((v, c));
            chosen.push(idx);
        }
    }
    let cols = basis.iter().map(|(_, c)| *c).collect();
    (chosen, cols)
}

fn det(mut m: Vec<Point>) -> BigRational {
    let k = m.len();
    let mut acc = BigRational::from_integer(1.into());
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        acc *= &m[c][c];
        for r in c + 1..k {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for j in c..k {
                    let t = &f * &m[c][j];
                    m[r][j] -= t;
                }
            }
        }
    }
    acc
}

/// Coordinates of `pts` in an affine frame of their hull.
fn reframe(pts: &[Point]) -> Vec<Point> {
    let origin = &pts[0];
    let diffs: Vec<Point> = pts.iter().map(|p| sub(p, origin)).collect();
    let (chosen, _) = independent(&diffs);
    let k = chosen.len();
    if k == 0 {
        return vec![Vec::new(); pts.len()];
    }
    let frame: Vec<Point> = chosen.iter().map(|&i| diffs[i].clone()).collect();
    // solve x · frame = diff using k independent columns of the frame
    let (cols, _) = independent(&transpose(&frame));
    let square: Vec<Point> = frame.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
    let inv = invert(&square);
    diffs
        .iter()
        .map(|dv| {
            let rhs: Point = cols.iter().map(|&c| dv[c].clone()).collect();
            (0..k).map(|j| (0..k).fold(BigRational::zero(), |acc, i| acc + &rhs[i] * &inv[i][j])).collect()
        })
        .collect()
}

fn transpose(m: &[Point]) -> Vec<Point> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

fn invert(m: &[Point]) -> Vec<Point> {
    let k = m.len();
    let mut a: Vec<Point> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..k).map(|j| BigRational::from_integer(i64::from(i == j).into())));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&r| !a[r][c].is_zero()).expect("invertible frame");
        a.swap(p, c);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        for r in 0..k {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * k {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
            }
        }
    }
    a.into_iter().map(|r| r[k..].to_vec()).collect()
}

struct Enumerator {
    memo: HashMap<u64, HashSet<u64>>,
    budget: u128,
}

impl Enumerator {
    /// Separable subsets of the points `pts`, whose global indices are `ids`.
    fn run(&mut self, pts: &[Point], ids: &[usize]) -> Result<HashSet<u64>> {
        let all: u64 = ids.iter().fold(0, |m, &i| m | 1 << i);
        if let Some(hit) = self.memo.get(&all) {
            return Ok(hit.clone());
        }
        let mut out: HashSet<u64> = [0, all].into_iter().collect();
        let coords = reframe(pts);
        let k = coords[0].len();
        if k > 0 {
            let combos = binom_usize(pts.len(), k);
            self.budget = self.budget.checked_sub(combos).ok_or_else(|| Error::TooLarge("half-space enumeration".into()))?;
            let mut subset: Vec<usize> = (0..k).collect();
            loop {
                self.hyperplane(&coords, ids, &subset, &mut out)?;
                if !next_combination(&mut subset, pts.len()) {
                    break;
                }
            }
        }
        self.memo.insert(all, out.clone());
        Ok(out)
    }

    fn hyperplane(&mut self, coords: &[Point], ids: &[usize], t: &[usize], out: &mut HashSet<u64>) -> Result<()> {
        let q0 = &coords[t[0]];
        let dirs: Vec<Point> = t[1..].iter().map(|&j| sub(&coords[j], q0)).collect();
        if independent(&dirs).0.len() != dirs.len() {
            return Ok(());
        }
        let (mut pos, mut neg) = (0u64, 0u64);
        let mut on_pts = Vec::new();
        let mut on_ids = Vec::new();
        for (p, &id) in coords.iter().zip(ids) {
            let mut m = dirs.clone();
            m.push(sub(p, q0));
            let s = det(m);
            if s.is_positive() {
                pos |= 1 << id;
            } else if s.is_negative() {
                neg |= 1 << id;
            } else {
                on_pts.push(p.clone());
                on_ids.push(id);
            }
        }
        for b in self.run(&on_pts, &on_ids)? {
            out.insert(pos | b);
            out.insert(neg | b);
        }
        Ok(())
    }
}

fn binom_usize(n: usize, k: usize) -> u128 {
    binom(n as u128, k as u128)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All distinct sets `S ∩ H` over closed and open half-spaces `H`.
pub fn halfspace_cuts(points: &[Vec<i64>]) -> Result<CutFamily> {
    let n = points.len();
    if n > MAX_POINTS {
        return Err(Error::TooLarge(format!("{n} points (at most {MAX_POINTS})")));
    }
    let dim = points.first().map_or(0, |p| p.len());
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidArgument("points of different dimensions".into()));
    }
    if n == 0 {
        return Ok(CutFamily { n, dim, cuts: vec![0] });
    }
    let pts: Vec<Point> = points.iter().map(|p| p.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let ids: Vec<usize> = (0..n).collect();
    let mut e = Enumerator { memo: HashMap::new(), budget: MAX_HYPERPLANES };
    let set = e.run(&pts, &ids)?;
    let cuts: BTreeSet<u64> = set.into_iter().collect();
    Ok(CutFamily { n, dim, cuts: cuts.into_iter().collect() })
}

/// Pair count for the half-lattice estimate.
#[derive(Clone, Debug, Serialize)]
pub struct HalfLatticeCount {
    /// `|B ∩ Γ|`.
    pub m: usize,
    pub dim: usize,
    /// Distinct sets `Λ ∩ B`.
    pub lattice_sets: usize,
    /// Distinct pairs `(Λ ∩ B, Λ ∩ B ∩ H)`.
    pub pairs: usize,
    /// `pairs / m^{2d}`.
    pub ratio: f64,
}

/// Counts pairs `(Λ ∩ B, Λ ∩ B ∩ H)` for `B ∩ Z^d = points`, with `Λ`
/// ranging over spans of at most `d` of the points and `H` over half-spaces.
pub fn half_lattice_pairs(points: &[Vec<i64>]) -> Result<HalfLatticeCount> {
    let m = points.len();
    if m > MAX_POINTS {
        return Err(Error::TooLarge(format!("{m} points (at most {MAX_POINTS})")));
    }
    let dim = points.first().map_or(0, |p| p.len());
    let mut lattice_sets: BTreeSet<u64> = BTreeSet::new();
    for k in 0..=dim.min(m) {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let gens: Vec<Vec<i64>> = subset.iter().map(|&i| points[i].clone()).collect();
            let lat = IntLattice::span(dim, &gens)?;
            let mask = points.iter().enumerate().filter(|(_, p)| lat.contains(p)).fold(0u64, |acc, (i, _)| acc | 1 << i);
            lattice_sets.insert(mask);
            if k == 0 || !next_combination(&mut subset, m) {
                break;
            }
        }
    }
    let mut pairs = 0usize;
    for &mask in &lattice_sets {
        let idx = CutFamily::members(mask);
        let sub: Vec<Vec<i64>> = idx.iter().map(|&i| points[i].clone()).collect();
        pairs += halfspace_cuts(&sub)?.len();
    }
    let denom = (m as f64).powi(2 * dim as i32);
    Ok(HalfLatticeCount { m, dim, lattice_sets: lattice_sets.len(), pairs, ratio: pairs as f64 / denom })
}
