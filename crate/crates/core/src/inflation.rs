//! Inflation matrices and what can be computed from them exactly: iterated
//! tile counts, eigenvector checks, Perron frequencies, characteristic
//! polynomials and total volumes.
//!
//! Row convention: `entry[i][j]` is the number of tiles `j` inside the
//! inflated tile `i`. Volumes and Dehn coefficients are therefore right
//! eigenvectors (`M·v = λ·v`), while counts evolve as row vectors
//! (`c ↦ c·M`) and frequencies are a left eigenvector.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::golden::GoldenNumber;
use crate::linalg;
use crate::system::TileSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InflationError {
    #[error("inflation matrix is not primitive: no power up to {bound} is strictly positive")]
    NotPrimitive { bound: usize },
    #[error("eigenspace of {eigenvalue} has dimension {dimension}, expected 1")]
    EigenspaceDimension {
        eigenvalue: Box<GoldenNumber>,
        dimension: usize,
    },
    #[error("Perron eigenvector is not strictly positive")]
    NotPositive,
    #[error("system {0} has no volume data")]
    MissingVolumes(String),
    #[error("vector has {got} entries, matrix has {expected} tiles")]
    Length { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflationMatrix {
    order: Vec<String>,
    entries: Vec<Vec<u64>>,
}

impl InflationMatrix {
    /// Panics unless `entries` is square and matches `order`.
    pub fn from_rows(order: Vec<String>, entries: Vec<Vec<u64>>) -> Self {
        assert_eq!(order.len(), entries.len(), "one row per tile");
        assert!(
            entries.iter().all(|r| r.len() == order.len()),
            "matrix must be square"
        );
        InflationMatrix { order, entries }
    }

    pub fn order(&self) -> &[String] {
        &self.order
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.order.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn trace(&self) -> u64 {
        (0..self.size()).map(|i| self.entries[i][i]).sum()
    }

    /// `M·v` for a column vector over Q(τ).
    pub fn apply(&self, v: &GoldenVector) -> GoldenVector {
        assert_eq!(v.len(), self.size());
        GoldenVector(
            self.entries
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&v.0)
                        .filter(|(&m, _)| m != 0)
                        .map(|(&m, x)| x * &GoldenNumber::from_integer(m))
                        .sum()
                })
                .collect(),
        )
    }

    /// `Mᵀ·v`, i.e. `v` used as a row vector on the left.
    pub fn apply_transpose(&self, v: &GoldenVector) -> GoldenVector {
        assert_eq!(v.len(), self.size());
        GoldenVector(
            (0..self.size())
                .map(|j| {
                    (0..self.size())
                        .filter(|&i| self.entries[i][j] != 0)
                        .map(|i| &v.0[i] * &GoldenNumber::from_integer(self.entries[i][j]))
                        .sum()
                })
                .collect(),
        )
    }

    /// One inflation step on a count row vector: `c·M`.
    pub fn inflate(&self, counts: &CountVector) -> CountVector {
        assert_eq!(
            counts.len(),
            self.size(),
            "count vector must match the tile ordering"
        );
        let mut out = vec![BigUint::zero(); self.size()];
        for (c, row) in counts.0.iter().zip(&self.entries) {
            if c.is_zero() {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(row) {
                if m != 0 {
                    *o += c * m;
                }
            }
        }
        CountVector(out)
    }

    /// Smallest `k <= n²` with `Mᵏ` strictly positive.
    pub fn primitivity_exponent(&self) -> Option<usize> {
        let n = self.size();
        let base: Vec<Vec<bool>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| x > 0).collect())
            .collect();
        let mut power = base.clone();
        for k in 1..=n * n {
            if power.iter().all(|r| r.iter().all(|&x| x)) {
                return Some(k);
            }
            power = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).any(|l| power[i][l] && base[l][j]))
                        .collect()
                })
                .collect();
        }
        None
    }
}

impl fmt::Display for InflationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .chain(self.order.iter().map(String::len))
            .max()
            .unwrap_or(1);
        write!(f, "{:width$}", "")?;
        for name in &self.order {
            write!(f, " {name:>width$}")?;
        }
        for (name, row) in self.order.iter().zip(&self.entries) {
            writeln!(f)?;
            write!(f, "{name:>width$}")?;
            for x in row {
                write!(f, " {x:>width$}")?;
            }
        }
        Ok(())
    }
}

/// Exact tile counts aligned to a tile ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountVector(Vec<BigUint>);

impl CountVector {
    pub fn new(counts: Vec<BigUint>) -> Self {
        CountVector(counts)
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = vec![BigUint::zero(); len];
        v[index] = 1u32.into();
        CountVector(v)
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> BigUint {
        self.0.iter().sum()
    }
}

impl From<Vec<u64>> for CountVector {
    fn from(v: Vec<u64>) -> Self {
        CountVector(v.into_iter().map(BigUint::from).collect())
    }
}

/// Q(τ) entries aligned to a tile ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoldenVector(Vec<GoldenNumber>);

impl GoldenVector {
    pub fn new(entries: Vec<GoldenNumber>) -> Self {
        GoldenVector(entries)
    }

    pub fn entries(&self) -> &[GoldenNumber] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(GoldenNumber::is_zero)
    }

    pub fn scale(&self, c: &GoldenNumber) -> Self {
        GoldenVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn conj(&self) -> Self {
        GoldenVector(self.0.iter().map(GoldenNumber::conj).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.len(), rhs.len());
        GoldenVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }

    pub fn sum(&self) -> GoldenNumber {
        self.0.iter().cloned().sum()
    }
}

impl fmt::Display for GoldenVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn build_matrix(system: &TileSystem) -> InflationMatrix {
    let order = system.order();
    let entries = system
        .rules()
        .iter()
        .map(|rule| order.iter().map(|child| rule.count(child)).collect())
        .collect();
    InflationMatrix { order, entries }
}

/// Counts after `n` inflations of `seed`, i.e. `seed·Mⁿ`.
pub fn matrix_power_counts(m: &InflationMatrix, seed: &CountVector, n: u64) -> CountVector {
    let mut counts = seed.clone();
    for _ in 0..n {
        counts = m.inflate(&counts);
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenReport {
    pub holds: bool,
    /// `M·v`.
    pub product: GoldenVector,
    /// `M·v − λ·v`.
    pub residual: GoldenVector,
}

pub fn verify_eigen(
    m: &InflationMatrix,
    vec: &GoldenVector,
    eigenvalue: &GoldenNumber,
) -> EigenReport {
    let product = m.apply(vec);
    let residual = product.sub(&vec.scale(eigenvalue));
    EigenReport {
        holds: residual.is_zero(),
        product,
        residual,
    }
}

/// Normalized positive left eigenvector for the Perron eigenvalue
/// `perron` (= factor^dimension): asymptotic tile frequencies.
pub fn frequencies(
    m: &InflationMatrix,
    perron: &GoldenNumber,
) -> Result<GoldenVector, InflationError> {
    let n = m.size();
    if m.primitivity_exponent().is_none() {
        return Err(InflationError::NotPrimitive { bound: n * n });
    }
    // Rows of Mᵀ − λI.
    let rows: Vec<Vec<GoldenNumber>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = GoldenNumber::from_integer(m.get(j, i));
                    if i == j {
                        x - perron
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let mut basis = linalg::nullspace(&rows, n);
    if basis.len() != 1 {
        return Err(InflationError::EigenspaceDimension {
            eigenvalue: Box::new(perron.clone()),
            dimension: basis.len(),
        });
    }
    let v = GoldenVector(basis.pop().expect("one basis vector"));
    let total = v.sum();
    let f = v.scale(&total.inv().map_err(|_| InflationError::NotPositive)?);
    if !f.0.iter().all(GoldenNumber::is_positive) {
        return Err(InflationError::NotPositive);
    }
    debug_assert!(m.apply_transpose(&f).sub(&f.scale(perron)).is_zero());
    Ok(f)
}

/// Characteristic polynomial `det(xI − M)` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    /// Ascending degree; the last entry is the leading 1.
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn from_ascending(coeffs: Vec<BigInt>) -> Self {
        CharPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn ascending(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Leading coefficient first.
    pub fn descending(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn eval(&self, x: &GoldenNumber) -> GoldenNumber {
        self.coeffs
            .iter()
            .rev()
            .fold(GoldenNumber::zero(), |acc, c| {
                &acc * x + GoldenNumber::from_integer(c.clone())
            })
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = deg == 0 || mag != BigInt::from(1);
            match (deg, show_mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "{mag}*x")?,
                (1, false) => f.write_str("x")?,
                (_, true) => write!(f, "{mag}*x^{deg}")?,
                (_, false) => write!(f, "x^{deg}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Faddeev–LeVerrier recurrence in exact integers: with `N₁ = I`,
/// `c_{n−k} = −tr(M·N_k)/k` and `N_{k+1} = M·N_k + c_{n−k}·I`. The division
/// by `k` is always exact for integer matrices.
pub fn char_poly(m: &InflationMatrix) -> CharPoly {
    let n = m.size();
    let a: Vec<Vec<BigInt>> = m
        .entries
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::from(1);
    let mut nk: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    for k in 1..=n {
        let mut prod: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| &a[i][l] * &nk[l][j]).sum())
                    .collect()
            })
            .collect();
        let trace: BigInt = (0..n).map(|i| prod[i][i].clone()).sum();
        let (c, rem) = (-trace).div_rem(&BigInt::from(k));
        debug_assert!(rem.is_zero());
        for (i, row) in prod.iter_mut().enumerate() {
            row[i] += &c;
        }
        coeffs[n - k] = c;
        nk = prod;
    }
    CharPoly { coeffs }
}

pub fn total_volume(
    system: &TileSystem,
    counts: &CountVector,
) -> Result<GoldenNumber, InflationError> {
    let vols = system
        .volume_vector()
        .ok_or_else(|| InflationError::MissingVolumes(system.name().to_string()))?;
    if vols.len() != counts.len() {
        return Err(InflationError::Length {
            expected: vols.len(),
            got: counts.len(),
        });
    }
    Ok(vols
        .0
        .iter()
        .zip(&counts.0)
        .filter(|(_, c)| !c.is_zero())
        .map(|(v, c)| v * &GoldenNumber::from_integer(BigInt::from(c.clone())))
        .sum())
}
