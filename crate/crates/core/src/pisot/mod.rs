//! Recognising `E = {⌊β^i⌉ : i ≥ 0}` for a cubic Pisot unit `β` with a pair
//! of complex conjugates, by exact computation in `K = Q(β)`.
//!
//! For `n ∈ Z` the system
//!
//! ```text
//! g + h + h* = n,  gβ + hα + h*ᾱ = ⌊βn⌉,  gβ² + hα² + h*ᾱ² = ⌊β²n⌉
//! ```
//!
//! has a unique solution with `g ∈ K`. For large `n`, `n ∈ E` iff `g(n)` is
//! integral, has norm 1 and lies in `[n−1, n+1)`. Small `n` are decided by
//! a table of enumerated powers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactreal::{AffineFloor, FieldElem, NumberField, RealValue};
use crate::words::{Alphabet, Generator, Word};

/// Integers `n ≤ EXCEPTION_BOUND` are decided by direct power enumeration.
pub const EXCEPTION_BOUND: i64 = 1000;

/// Smallest Pisot number (the plastic number), bounding root extraction.
const PLASTIC: f64 = 1.324_717_957_244_746;

type Matrix3 = [[BigRational; 3]; 3];

/// A cubic Pisot unit `β > 1` with minimal polynomial `x³ − ax² − bx − 1`
/// and negative discriminant.
#[derive(Clone, Debug)]
pub struct CubicPisotUnit {
    a: i64,
    b: i64,
    field: NumberField,
    disc: BigInt,
    /// Rows are an integral basis of `O_K` in power coordinates.
    basis: Matrix3,
    basis_inv: Matrix3,
    /// `β = η^k` for a unit `η` with minimal polynomial `x³ − a'x² − b'x − 1`.
    root: Option<(u32, i64, i64)>,
    round_beta: AffineFloor,
    round_beta2: AffineFloor,
    /// `g(n) = n·c[0] + ⌊βn⌉·c[1] + ⌊β²n⌉·c[2]`.
    coeffs: [FieldElem; 3],
    exceptions: Vec<i64>,
}

/// Discriminant `−4a³ + a²b² − 18ab + 4b³ − 27` of `x³ − ax² − bx − 1`.
pub fn discriminant(a: i64, b: i64) -> BigInt {
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    -4 * a.pow(3) + a.pow(2) * b.pow(2) - 18 * &a * &b + 4 * b.pow(3) - 27
}

/// `Tr(β^i)` for `i < count`: seeds `3, a, a² + 2b`, then
/// `tᵢ = a·tᵢ₋₁ + b·tᵢ₋₂ + tᵢ₋₃`.
pub fn traces(a: i64, b: i64, count: usize) -> Vec<BigInt> {
    let (ab, bb) = (BigInt::from(a), BigInt::from(b));
    let mut t = vec![BigInt::from(3), ab.clone(), &ab * &ab + 2 * &bb];
    while t.len() < count {
        let k = t.len();
        let next = &ab * &t[k - 1] + &bb * &t[k - 2] + &t[k - 3];
        t.push(next);
    }
    t.truncate(count);
    t
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn identity() -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { BigRational::one() } else { BigRational::zero() }))
}

fn invert3(m: &Matrix3) -> Option<Matrix3> {
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
    };
    let det = &m[0][0] * c(0, 0) + &m[0][1] * c(0, 1) + &m[0][2] * c(0, 2);
    if det.is_zero() {
        return None;
    }
    Some(std::array::from_fn(|i| std::array::from_fn(|j| c(j, i) / &det)))
}

fn row_times(v: &[BigRational], m: &Matrix3) -> [BigRational; 3] {
    std::array::from_fn(|j| (0..3).fold(BigRational::zero(), |acc, i| acc + &v[i] * &m[i][j]))
}

/// Largest `k ≥ 2` with `β = η^k` for a cubic unit `η > 1`, with `η`'s
/// coefficients `(a', b')`.
fn extract_root(a: i64, b: i64, beta: f64) -> Option<(u32, i64, i64)> {
    let target = traces(a, b, 4);
    let kmax = (beta.ln() / PLASTIC.ln()).floor() as u32 + 1;
    for k in (2..=kmax).rev() {
        let eta = beta.powf(1.0 / k as f64);
        let ra = (eta + 2.0 / eta.sqrt() + 1.0).ceil() as i64;
        let rb = (2.0 * eta.sqrt() + 1.0 / eta + 1.0).ceil() as i64;
        for a2 in -ra..=ra {
            for b2 in -rb..=rb {
                let t = traces(a2, b2, 3 * k as usize + 1);
                // equal power sums t_k, t_2k, t_3k give equal characteristic polynomials
                if (1..=3).all(|j| t[j * k as usize] == target[j]) {
                    return Some((k, a2, b2));
                }
            }
        }
    }
    None
}

impl CubicPisotUnit {
    /// Validates `x³ − ax² − bx − 1` and isolates its real root `β > 1`.
    pub fn new(a: i64, b: i64) -> Result<Self> {
        let name = format!("x^3 - ({a})x^2 - ({b})x - 1");
        // a cubic is reducible iff it has a root ±1
        if a + b == 0 || b == a + 2 {
            return Err(Error::Reducible(name));
        }
        let disc = discriminant(a, b);
        if !disc.is_negative() {
            return Err(Error::NotPisot(format!("{name} (discriminant {disc} is not negative)")));
        }
        if a + b < 0 {
            return Err(Error::NotPisot(format!("{name} (real root below 1)")));
        }
        let bound = 1 + a.abs().max(b.abs()).max(1);
        let minpoly = vec![BigInt::from(-1), BigInt::from(-b), BigInt::from(-a), BigInt::one()];
        let field = NumberField::new(minpoly, rat(1), rat(bound))?;
        let beta = field.generator();
        let beta2 = beta.mul(&beta)?;
        let half = RealValue::rational(1, 2);
        let round_beta = AffineFloor::new(RealValue::from(beta.clone()), half.clone())?;
        let round_beta2 = AffineFloor::new(RealValue::from(beta2.clone()), half)?;

        // g = (⌊β²n⌉ − ⌊βn⌉(a − β) + n/β) / p'(β), p'(β) = 2β² − aβ + 1/β
        let inv_beta = beta.inverse()?;
        let den = beta2.scale(&rat(2)).sub(&beta.scale(&rat(a)))?.add(&inv_beta)?;
        let inv_den = den.inverse()?;
        let coeffs = [inv_beta.mul(&inv_den)?, beta.sub(&field.int(a))?.mul(&inv_den)?, inv_den];

        let root = extract_root(a, b, beta.to_f64());
        let mut exceptions = Vec::new();
        let limit = field.rational(rat(EXCEPTION_BOUND) + BigRational::new(1.into(), 2.into()));
        let mut p = field.one();
        while p.sub(&limit)?.sign()? < 0 {
            let r = p.add_rational(&BigRational::new(1.into(), 2.into())).floor()?;
            exceptions.push(r.to_i64().ok_or(Error::Overflow("power table"))?);
            p = p.mul(&beta)?;
        }
        exceptions.dedup();

        Ok(CubicPisotUnit {
            a,
            b,
            field,
            disc,
            basis: identity(),
            basis_inv: identity(),
            root,
            round_beta,
            round_beta2,
            coeffs,
            exceptions,
        })
    }

    /// Replaces the default basis `{1, β, β²}` of `O_K`. Rows are basis
    /// elements in power coordinates; each must be an algebraic integer and
    /// together they must generate a lattice containing `Z[β]`.
    pub fn with_integral_basis(mut self, rows: Matrix3) -> Result<Self> {
        let inv = invert3(&rows).ok_or_else(|| Error::InvalidArgument("integral basis is singular".into()))?;
        for row in &rows {
            let x = self.field.from_coords(row.to_vec())?;
            if !is_algebraic_integer(&x)? {
                return Err(Error::InvalidArgument(format!("basis element {} is not integral", x.to_theta_string())));
            }
        }
        for i in 0..3 {
            let e: Vec<BigRational> = (0..3).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect();
            if !row_times(&e, &inv).iter().all(|c| c.is_integer()) {
                return Err(Error::InvalidArgument("basis does not contain Z[β]".into()));
            }
        }
        self.basis = rows;
        self.basis_inv = inv;
        Ok(self)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn beta(&self) -> FieldElem {
        self.field.generator()
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// Rows spanning `Λ = {(x, y, z) : x + yβ + zβ² ∈ O_K}`.
    pub fn coefficient_lattice(&self) -> &Matrix3 {
        &self.basis
    }

    /// `α + ᾱ = a − β`, exactly in `K`.
    pub fn conjugate_sum(&self) -> FieldElem {
        self.field.int(self.a).sub(&self.beta()).expect("same field")
    }

    /// `αᾱ = |α|² = 1/β`, exactly in `K`.
    pub fn conjugate_modulus_sq(&self) -> FieldElem {
        self.beta().inverse().expect("β is a unit")
    }

    /// `Some((k, a', b'))` when `β = η^k` with `k ≥ 2` for a unit `η` with
    /// minimal polynomial `x³ − a'x² − b'x − 1`; `None` if `β` is fundamental.
    pub fn root_of(&self) -> Option<(u32, i64, i64)> {
        self.root
    }

    pub fn is_fundamental(&self) -> bool {
        self.root.is_none()
    }

    /// `⌊β^i⌉` for `β^i ≤ EXCEPTION_BOUND + ½`.
    pub fn exception_table(&self) -> &[i64] {
        &self.exceptions
    }

    /// `⌊β^i⌉` computed exactly in `K`.
    pub fn round_power(&self, i: u32) -> Result<BigInt> {
        self.beta().pow(i).add_rational(&BigRational::new(1.into(), 2.into())).floor()
    }

    /// `Tr(β^i)` for `i < count`.
    pub fn trace_sequence(&self, count: usize) -> Vec<BigInt> {
        traces(self.a, self.b, count)
    }

    fn round_pair(&self, n: &BigInt) -> Result<(BigInt, BigInt)> {
        if let Some(k) = n.to_i64() {
            return Ok((self.round_beta.floor_at(k)?.into(), self.round_beta2.floor_at(k)?.into()));
        }
        let nv = RealValue::from(n.clone());
        let r1 = RealValue::from(self.beta()).mul(&nv)?.nint()?;
        let r2 = RealValue::from(self.beta().pow(2)).mul(&nv)?.nint()?;
        Ok((r1, r2))
    }

    /// Exact solution `g(n) ∈ K` of the `(g, h, h*)` system.
    pub fn solve_ghh(&self, n: &BigInt) -> Result<GhhDecomposition> {
        let (r1, r2) = self.round_pair(n)?;
        let g = self.coeffs[0]
            .scale(&BigRational::from_integer(n.clone()))
            .add(&self.coeffs[1].scale(&BigRational::from_integer(r1.clone())))?
            .add(&self.coeffs[2].scale(&BigRational::from_integer(r2.clone())))?;
        Ok(GhhDecomposition { n: n.clone(), round_beta: r1, round_beta2: r2, g })
    }

    /// `(u, v, w) ∈ Λ`.
    pub fn is_integral(&self, g: &FieldElem) -> bool {
        row_times(g.coords(), &self.basis_inv).iter().all(|c| c.is_integer())
    }

    /// The three algebraic conditions on `g(n)`: integrality, unit norm and
    /// `n − 1 ≤ g(n) < n + 1`, plus an exponent filter when `β` is not
    /// fundamental.
    pub fn algebraic_test(&self, n: &BigInt) -> Result<bool> {
        let d = self.solve_ghh(n)?;
        let g = &d.g;
        if !self.is_integral(g) || !g.norm().is_one() {
            return Ok(false);
        }
        let nr = BigRational::from_integer(n.clone());
        if g.add_rational(&(-&nr + rat(1))).sign()? < 0 || g.add_rational(&(-nr - rat(1))).sign()? >= 0 {
            return Ok(false);
        }
        if self.root.is_some() {
            // g is a power of the fundamental unit; keep only powers of β
            let i = (g.to_f64().ln() / self.beta().to_f64().ln()).round();
            if !(0.0..=f64::from(u32::MAX)).contains(&i) {
                return Ok(false);
            }
            return Ok(self.beta().pow(i as u32) == *g);
        }
        Ok(true)
    }

    /// `n ∈ {⌊β^i⌉ : i ≥ 0}`.
    pub fn membership_test(&self, n: &BigInt) -> Result<bool> {
        if *n <= BigInt::from(EXCEPTION_BOUND) {
            let k = n.to_i64().unwrap_or(i64::MIN);
            return Ok(self.exceptions.binary_search(&k).is_ok());
        }
        self.algebraic_test(n)
    }

    pub fn contains(&self, n: i64) -> Result<bool> {
        self.membership_test(&BigInt::from(n))
    }

    /// The indicator word of `{⌊β^i⌉ : i ≥ 0}`.
    pub fn power_word(&self) -> Word {
        Word::new(Alphabet::binary(), PowerWord(self.clone()))
    }
}

/// `make_pisot_unit(a, b)`.
pub fn make_pisot_unit(a: i64, b: i64) -> Result<CubicPisotUnit> {
    CubicPisotUnit::new(a, b)
}

fn is_algebraic_integer(x: &FieldElem) -> Result<bool> {
    let t1 = x.trace();
    let t2 = x.mul(x)?.trace();
    let e2 = (&t1 * &t1 - t2) / rat(2);
    Ok(t1.is_integer() && e2.is_integer() && x.norm().is_integer())
}

/// `g(n)` together with the rounded values it was built from.
#[derive(Clone, Debug)]
pub struct GhhDecomposition {
    pub n: BigInt,
    pub round_beta: BigInt,
    pub round_beta2: BigInt,
    pub g: FieldElem,
}

impl GhhDecomposition {
    /// `(u, v, w)` with `g = u + vβ + wβ²`.
    pub fn coords(&self) -> [BigRational; 3] {
        let c = self.g.coords();
        std::array::from_fn(|i| c.get(i).cloned().unwrap_or_else(BigRational::zero))
    }

    /// `Tr(g) = g + h + h*`, which equals `n`.
    pub fn trace_reconstruction(&self) -> BigRational {
        self.g.trace()
    }

    /// `g·h·h* = N(g)`.
    pub fn norm(&self) -> BigRational {
        self.g.norm()
    }

    /// `h + h* = n − g`.
    pub fn conjugate_sum(&self) -> FieldElem {
        self.g.neg().add_rational(&BigRational::from_integer(self.n.clone()))
    }

    /// `h·h* = N(g)/g`, or `None` when `g = 0`.
    pub fn conjugate_product(&self) -> Option<FieldElem> {
        let inv = self.g.inverse().ok()?;
        Some(inv.scale(&self.g.norm()))
    }
}

struct PowerWord(CubicPisotUnit);

impl Generator for PowerWord {
    fn at(&self, n: u64) -> Result<u32> {
        Ok(self.0.membership_test(&BigInt::from(n))? as u32)
    }

    fn describe(&self) -> String {
        format!("pisot_powers({}, {})", self.0.a, self.0.b)
    }
}

#[cfg(test)]
mod tests;
