//! Published values for the four-tile Mosseri–Sadoc system, used as fixed
//! reference points by the `verify` suite and the tests.

use crate::golden::GoldenNumber;
use crate::inflation::GoldenVector;

/// Inflation matrix in the ordering z, h, s, a.
pub const MS4_MATRIX: [[u64; 4]; 4] = [[1, 1, 1, 1], [2, 1, 2, 2], [1, 1, 1, 2], [0, 0, 1, 2]];

/// `det(xI − M)` for [`MS4_MATRIX`], leading coefficient first.
pub const MS4_CHAR_POLY: [i64; 5] = [1, -5, 2, 5, 1];

/// Volume constraint block `A` and image block `B` of `M·A = B`, columns
/// (τ-part, 1-part) of the volume vector then of the Dehn vector.
pub const MS4_CONSTRAINTS_A: [[i64; 4]; 4] =
    [[4, 2, 1, 0], [6, 4, 0, 2], [4, 3, 1, -1], [2, 1, -1, 0]];
pub const MS4_CONSTRAINTS_B: [[i64; 4]; 4] = [
    [16, 10, 1, 1],
    [26, 16, 2, 0],
    [18, 11, 0, 1],
    [8, 5, -1, -1],
];

fn vector(entries: &[(i64, i64)], den: i64) -> GoldenVector {
    GoldenVector::new(
        entries
            .iter()
            .map(|&(gold, rat)| GoldenNumber::from_ints(rat, gold, den))
            .collect(),
    )
}

/// Volumes `(4τ+2, 6τ+4, 4τ+3, 2τ+1)/12`.
pub fn ms4_volumes() -> GoldenVector {
    vector(&[(4, 2), (6, 4), (4, 3), (2, 1)], 12)
}

/// `M·volumes = (16τ+10, 26τ+16, 18τ+11, 8τ+5)/12`.
pub fn ms4_volume_image() -> GoldenVector {
    vector(&[(16, 10), (26, 16), (18, 11), (8, 5)], 12)
}

/// Dehn coefficients on the lateral angle with the common factor −5
/// removed: `(τ, 2, τ−1, −τ)`.
pub fn ms4_dehn_stripped() -> GoldenVector {
    vector(&[(1, 0), (0, 2), (1, -1), (-1, 0)], 1)
}

/// `M·(τ, 2, τ−1, −τ) = (τ+1, 2τ, 1, −τ−1)`.
pub fn ms4_dehn_image() -> GoldenVector {
    vector(&[(1, 1), (2, 0), (0, 1), (-1, -1)], 1)
}

/// The Dehn prefactor.
pub fn ms4_dehn_prefactor() -> GoldenNumber {
    GoldenNumber::from(-5)
}
