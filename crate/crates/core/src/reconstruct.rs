//! Recovering an inflation matrix from invariant eigenvectors alone.
//!
//! Each eigen-equation `M·v = λ·v` over Q(τ) with rational `M` splits into
//! two rational vector equations, one per coordinate in the basis {τ, 1}.
//! Stacking them gives `M·A = B` with one column pair per datum; when `A`
//! has full row rank the solution is unique.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::golden::{GoldenNumber, Rational};
use crate::inflation::{build_matrix, GoldenVector, InflationMatrix};
use crate::linalg;
use crate::system::TileSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("no eigen data given")]
    NoData,
    #[error("eigen data vectors have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("A is {a_rows}x{a_cols} but B is {b_rows}x{b_cols}")]
    ShapeMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },
    #[error("constraints have rank {rank}, {needed} needed for a unique solution")]
    RankDeficient { rank: usize, needed: usize },
    #[error("constraint system M*A = B has no solution")]
    Inconsistent,
    #[error("degenerate datum: {0} vector is zero")]
    Degenerate(String),
    #[error("system {0} lacks {1} data")]
    MissingData(String, &'static str),
    #[error("Dehn data spans {0} angle classes ({1}); reconstruction needs exactly one")]
    MultipleAngles(usize, String),
}

/// An eigenvector together with its eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenDatum {
    vector: GoldenVector,
    eigenvalue: GoldenNumber,
}

impl EigenDatum {
    pub fn new(vector: GoldenVector, eigenvalue: GoldenNumber) -> Option<Self> {
        if vector.is_zero() {
            return None;
        }
        Some(EigenDatum { vector, eigenvalue })
    }

    pub fn vector(&self) -> &GoldenVector {
        &self.vector
    }

    pub fn eigenvalue(&self) -> &GoldenNumber {
        &self.eigenvalue
    }

    /// Rescales the vector by a nonzero rational so that all coefficients
    /// are coprime integers and the first nonzero entry is positive.
    /// `(4τ+2, …)/12` becomes `(4τ+2, …)`, `−5·(τ, 2, …)` becomes `(τ, 2, …)`.
    pub fn primitive(&self) -> Self {
        let entries = self.vector.entries();
        let den = entries
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator_lcm()));
        let content = entries
            .iter()
            .flat_map(|x| [x.rat(), x.gold()])
            .map(|r| (r * Rational::from_integer(den.clone())).to_integer())
            .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
        let mut factor = Rational::new(den, content);
        let first = entries
            .iter()
            .find(|x| !x.is_zero())
            .expect("datum vector is nonzero");
        if !first.scale(&factor).is_positive() {
            factor = -factor;
        }
        EigenDatum {
            vector: GoldenVector::new(entries.iter().map(|x| x.scale(&factor)).collect()),
            eigenvalue: self.eigenvalue.clone(),
        }
    }
}

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "rows must have equal length"
        );
        RationalMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.as_ref()
                        .iter()
                        .map(|&x| Rational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let s = (0..self.cols).fold(Rational::zero(), |acc, k| {
                    acc + self.get(i, k) * rhs.get(k, j)
                });
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Rational::is_integer)
    }

    /// Entries as nonnegative integers, if they all are.
    pub fn to_counts(&self) -> Option<Vec<Vec<u64>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| {
                        if x.is_integer() && !x.is_negative() {
                            u64::try_from(x.to_integer()).ok()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

impl From<&InflationMatrix> for RationalMatrix {
    fn from(m: &InflationMatrix) -> Self {
        RationalMatrix::from_rows(
            m.entries()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| Rational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            let row: Vec<String> = cells[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|c| format!("{c:>width$}"))
                .collect();
            f.write_str(&row.join(" "))?;
        }
        Ok(())
    }
}

/// Splits each datum into τ-part and 1-part columns: vectors into `A`,
/// `eigenvalue·vector` into `B`. With `k` data both are `n × 2k`.
pub fn build_constraints(
    data: &[EigenDatum],
) -> Result<(RationalMatrix, RationalMatrix), ReconstructError> {
    let n = data.first().ok_or(ReconstructError::NoData)?.vector.len();
    if let Some(d) = data.iter().find(|d| d.vector.len() != n) {
        return Err(ReconstructError::LengthMismatch(n, d.vector.len()));
    }
    let mut a = RationalMatrix::zeros(n, 2 * data.len());
    let mut b = RationalMatrix::zeros(n, 2 * data.len());
    for (k, d) in data.iter().enumerate() {
        let image = d.vector.scale(&d.eigenvalue);
        for i in 0..n {
            let v = &d.vector.entries()[i];
            let w = &image.entries()[i];
            a.set(i, 2 * k, v.gold().clone());
            a.set(i, 2 * k + 1, v.rat().clone());
            b.set(i, 2 * k, w.gold().clone());
            b.set(i, 2 * k + 1, w.rat().clone());
        }
    }
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub matrix: RationalMatrix,
    /// Every entry is an integer. A rational but non-integral solution is
    /// reported through this flag rather than rounded.
    pub integral: bool,
}

/// The unique `M` with `M·A = B`, by exact elimination on `Aᵀ·Mᵀ = Bᵀ`.
pub fn solve_matrix(a: &RationalMatrix, b: &RationalMatrix) -> Result<Solution, ReconstructError> {
    let n = a.rows;
    if b.cols != a.cols {
        return Err(ReconstructError::ShapeMismatch {
            a_rows: a.rows,
            a_cols: a.cols,
            b_rows: b.rows,
            b_cols: b.cols,
        });
    }
    let out_rows = b.rows;
    // One equation per column c: Σ_j A[j][c]·M[i][j] = B[i][c] for all i.
    let mut aug: Vec<Vec<Rational>> = (0..a.cols)
        .map(|c| {
            (0..n)
                .map(|j| a.get(j, c).clone())
                .chain((0..out_rows).map(|i| b.get(i, c).clone()))
                .collect()
        })
        .collect();
    let pivots = linalg::rref(&mut aug, n);
    if pivots.len() < n {
        return Err(ReconstructError::RankDeficient {
            rank: pivots.len(),
            needed: n,
        });
    }
    if aug[n..]
        .iter()
        .any(|row| row[n..].iter().any(|x| !x.is_zero()))
    {
        return Err(ReconstructError::Inconsistent);
    }
    let mut m = RationalMatrix::zeros(out_rows, n);
    for (j, row) in aug.iter().take(n).enumerate() {
        for i in 0..out_rows {
            m.set(i, j, row[n + i].clone());
        }
    }
    Ok(Solution {
        integral: m.is_integral(),
        matrix: m,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionReport {
    pub order: Vec<String>,
    pub solution: Solution,
    /// Whether the solved matrix equals the one built from the rules.
    pub matches_rules: bool,
}

/// Eigen data of a system: volumes with `factor^dimension` and the single
/// Dehn coefficient vector with `factor`, both in primitive form.
pub fn system_eigen_data(system: &TileSystem) -> Result<Vec<EigenDatum>, ReconstructError> {
    let name = system.name().to_string();
    let volumes = system
        .volume_vector()
        .ok_or_else(|| ReconstructError::MissingData(name.clone(), "volume"))?;
    if !system.has_dehn() {
        return Err(ReconstructError::MissingData(name, "Dehn invariant"));
    }
    let keys = system.dehn_keys();
    let dehn = match keys.as_slice() {
        [] => return Err(ReconstructError::Degenerate("Dehn invariant".into())),
        [key] => system.dehn_vector(key).expect("Dehn data present"),
        _ => {
            return Err(ReconstructError::MultipleAngles(
                keys.len(),
                keys.join(", "),
            ))
        }
    };
    let vol = EigenDatum::new(volumes, system.volume_eigenvalue())
        .ok_or_else(|| ReconstructError::Degenerate("volume".into()))?;
    let dehn = EigenDatum::new(dehn, system.factor().clone())
        .ok_or_else(|| ReconstructError::Degenerate("Dehn invariant".into()))?;
    Ok(vec![vol.primitive(), dehn.primitive()])
}

pub fn reconstruct(system: &TileSystem) -> Result<ReconstructionReport, ReconstructError> {
    let data = system_eigen_data(system)?;
    let (a, b) = build_constraints(&data)?;
    let solution = solve_matrix(&a, &b)?;
    let matches_rules = solution.matrix == RationalMatrix::from(&build_matrix(system));
    Ok(ReconstructionReport {
        order: system.order(),
        solution,
        matches_rules,
    })
}
