//! The verification suite behind `verify`: every eigen and stone-inflation
//! identity a system's data should satisfy, plus the published reference
//! values when the system is one of the built-ins.

use serde::Serialize;

use crate::golden::GoldenNumber;
use crate::inflation::{
    build_matrix, char_poly, frequencies, matrix_power_counts, verify_eigen, GoldenVector,
    InflationMatrix,
};
use crate::reconstruct::reconstruct;
use crate::reference;
use crate::system::{compose_h, ms4, ms5, TileSystem};

/// Steps over which the five-tile system is projected onto the four-tile one.
pub const PROJECTION_STEPS: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    /// Exact residual values, rendered; empty when there is nothing to show.
    pub residual: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>, holds: bool, residual: Vec<String>) -> Self {
        Check {
            name: name.into(),
            holds,
            residual,
        }
    }

    fn from_vector(name: impl Into<String>, residual: &GoldenVector) -> Self {
        let holds = residual.is_zero();
        let residual = if holds { Vec::new() } else { render(residual) };
        Check::new(name, holds, residual)
    }

    fn equal(name: impl Into<String>, got: &GoldenVector, want: &GoldenVector) -> Self {
        Check::from_vector(name, &got.sub(want))
    }
}

fn render(v: &GoldenVector) -> Vec<String> {
    v.entries().iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Ms4,
    Ms5,
}

impl Builtin {
    /// Recognizes a built-in system by content, whatever file it came from.
    pub fn detect(system: &TileSystem) -> Option<Builtin> {
        if *system == ms4() {
            Some(Builtin::Ms4)
        } else if *system == ms5() {
            Some(Builtin::Ms5)
        } else {
            None
        }
    }
}

pub fn all_hold(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.holds)
}

pub fn verify_system(system: &TileSystem) -> Vec<Check> {
    let m = build_matrix(system);
    let mut checks = generic_checks(system, &m);
    match Builtin::detect(system) {
        Some(Builtin::Ms4) => checks.extend(ms4_reference_checks(system, &m)),
        Some(Builtin::Ms5) => checks.extend(ms5_reference_checks(system)),
        None => {}
    }
    checks
}

fn generic_checks(system: &TileSystem, m: &InflationMatrix) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(Check::new(
        "primitive",
        m.primitivity_exponent().is_some(),
        Vec::new(),
    ));
    let poly = char_poly(m);
    let root_check = |checks: &mut Vec<Check>, label: &str, x: &GoldenNumber| {
        let value = poly.eval(x);
        let holds = value.is_zero();
        checks.push(Check::new(
            format!("charpoly_vanishes[{label}]"),
            holds,
            if holds {
                Vec::new()
            } else {
                vec![value.to_string()]
            },
        ));
    };

    let lambda = system.volume_eigenvalue();
    if let Some(vol) = system.volume_vector() {
        for (tile, r) in system.volume_identity_residuals().expect("volumes present") {
            let holds = r.is_zero();
            checks.push(Check::new(
                format!("stone_inflation[{tile}]"),
                holds,
                if holds {
                    Vec::new()
                } else {
                    vec![r.to_string()]
                },
            ));
        }
        checks.push(Check::from_vector(
            "volume_eigen",
            &verify_eigen(m, &vol, &lambda).residual,
        ));
        checks.push(Check::from_vector(
            "volume_conjugate_eigen",
            &verify_eigen(m, &vol.conj(), &lambda.conj()).residual,
        ));
        root_check(&mut checks, &format!("volume eigenvalue {lambda}"), &lambda);
        root_check(
            &mut checks,
            &format!("conjugate {}", lambda.conj()),
            &lambda.conj(),
        );
    }

    if system.has_dehn() {
        for (tile, r) in system.dehn_identity_residuals().expect("Dehn data present") {
            checks.push(Check::new(
                format!("dehn_additivity[{tile}]"),
                r.is_zero(),
                if r.is_zero() {
                    Vec::new()
                } else {
                    vec![r.to_string()]
                },
            ));
        }
        let factor = system.factor();
        let keys = system.dehn_keys();
        for key in &keys {
            let d = system.dehn_vector(key).expect("Dehn data present");
            checks.push(Check::from_vector(
                format!("dehn_eigen[{key}]"),
                &verify_eigen(m, &d, factor).residual,
            ));
            checks.push(Check::from_vector(
                format!("dehn_conjugate_eigen[{key}]"),
                &verify_eigen(m, &d.conj(), &factor.conj()).residual,
            ));
        }
        if !keys.is_empty() {
            root_check(&mut checks, &format!("Dehn eigenvalue {factor}"), factor);
            root_check(
                &mut checks,
                &format!("conjugate {}", factor.conj()),
                &factor.conj(),
            );
        }
    }

    let freq = match frequencies(m, &lambda) {
        Ok(_) => Check::new("perron_frequencies", true, Vec::new()),
        Err(e) => Check::new("perron_frequencies", false, vec![e.to_string()]),
    };
    checks.push(freq);
    checks
}

fn ms4_reference_checks(system: &TileSystem, m: &InflationMatrix) -> Vec<Check> {
    let mut checks = Vec::new();
    let matches = m
        .entries()
        .iter()
        .zip(reference::MS4_MATRIX.iter())
        .all(|(a, b)| a.as_slice() == b.as_slice());
    checks.push(Check::new("matrix_matches_published", matches, Vec::new()));

    let vol = system.volume_vector().expect("ms4 has volumes");
    checks.push(Check::equal(
        "volumes_match_published",
        &vol,
        &reference::ms4_volumes(),
    ));
    checks.push(Check::equal(
        "volume_image_matches_published",
        &m.apply(&reference::ms4_volumes()),
        &reference::ms4_volume_image(),
    ));
    let stripped = reference::ms4_dehn_stripped();
    let stored = system
        .dehn_vector(crate::dehn::ALPHA_MS)
        .expect("ms4 has Dehn data");
    checks.push(Check::equal(
        "dehn_matches_published",
        &stored,
        &stripped.scale(&reference::ms4_dehn_prefactor()),
    ));
    checks.push(Check::equal(
        "dehn_image_matches_published",
        &m.apply(&stripped),
        &reference::ms4_dehn_image(),
    ));
    checks.push(Check::from_vector(
        "dehn_conjugate_eigen[published]",
        &verify_eigen(m, &stripped.conj(), &GoldenNumber::tau().conj()).residual,
    ));

    let poly = char_poly(m);
    let want: Vec<_> = reference::MS4_CHAR_POLY.iter().map(|&c| c.into()).collect();
    let holds = poly.descending() == want;
    checks.push(Check::new(
        "charpoly_matches_published",
        holds,
        if holds {
            Vec::new()
        } else {
            vec![poly.to_string()]
        },
    ));

    let (holds, residual) = match reconstruct(system) {
        Ok(r) => (r.matches_rules && r.solution.integral, Vec::new()),
        Err(e) => (false, vec![e.to_string()]),
    };
    checks.push(Check::new("reconstruction_matches_rules", holds, residual));
    checks
}

fn ms5_reference_checks(system: &TileSystem) -> Vec<Check> {
    let four = ms4();
    let mut checks = Vec::new();
    let get_vol = |t: &str| system.volume(t).cloned().unwrap_or_default();
    let union_vol = &get_vol("r") + &get_vol("m");
    let want_vol = four.volume("h").cloned().unwrap_or_default();
    checks.push(Check::equal(
        "h_is_r_union_m[volume]",
        &GoldenVector::new(vec![union_vol]),
        &GoldenVector::new(vec![want_vol]),
    ));
    let get_dehn = |t: &str| system.dehn(t).cloned().unwrap_or_default();
    let union_dehn = &get_dehn("r") + &get_dehn("m");
    let want_dehn = four.dehn("h").cloned().unwrap_or_default();
    checks.push(Check::new(
        "h_is_r_union_m[dehn]",
        union_dehn == want_dehn,
        if union_dehn == want_dehn {
            Vec::new()
        } else {
            vec![union_dehn.to_string(), want_dehn.to_string()]
        },
    ));

    let mismatches = projection_mismatches(system, &four, PROJECTION_STEPS);
    checks.push(Check::new(
        "projection_onto_ms4",
        mismatches.is_empty(),
        mismatches,
    ));
    checks
}

/// Seeds of the five-tile system that correspond to single four-tile
/// tiles: z, s, a, and the pair r ∪ m standing for h.
pub fn paired_seeds() -> [(&'static str, Vec<&'static str>); 4] {
    [
        ("z", vec!["z"]),
        ("h", vec!["r", "m"]),
        ("s", vec!["s"]),
        ("a", vec!["a"]),
    ]
}

/// Seeds and step counts at which composing r ∪ m into h after inflating in
/// the five-tile system disagrees with inflating in the four-tile system.
pub fn projection_mismatches(five: &TileSystem, four: &TileSystem, steps: u64) -> Vec<String> {
    let m5 = build_matrix(five);
    let m4 = build_matrix(four);
    let order5 = five.order();
    let mut out = Vec::new();
    for (tile4, seed5) in paired_seeds() {
        let (Ok(mut c5), Ok(mut c4)) = (five.counts_of(&seed5), four.counts_of(&[tile4])) else {
            out.push(format!("seed {tile4}: tile missing"));
            continue;
        };
        for n in 0..=steps {
            match compose_h(&order5, &c5) {
                Ok(projected) if projected == c4 => {}
                Ok(_) => {
                    out.push(format!("seed {tile4}, step {n}: counts differ"));
                    break;
                }
                Err(e) => {
                    out.push(format!("seed {tile4}, step {n}: {e}"));
                    break;
                }
            }
            c5 = matrix_power_counts(&m5, &c5, 1);
            c4 = m4.inflate(&c4);
        }
    }
    out
}
