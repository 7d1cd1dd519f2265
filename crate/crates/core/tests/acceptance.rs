//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stone_inflation::dehn::{dehn_of_polyhedron, AngleClass, DehnElement, ALPHA_MS};
use stone_inflation::golden::{GoldenNumber, Rational};
use stone_inflation::inflation::{
    build_matrix, char_poly, frequencies, matrix_power_counts, total_volume, verify_eigen,
    CountVector, GoldenVector,
};
use stone_inflation::linalg;
use stone_inflation::reconstruct::{build_constraints, solve_matrix, EigenDatum, RationalMatrix};
use stone_inflation::reference;
use stone_inflation::system::{compose_h, ms4, ms5};
use stone_inflation::verify::{paired_seeds, PROJECTION_STEPS};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, what: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn g(rat: i64, gold: i64, den: i64) -> GoldenNumber {
    GoldenNumber::from_ints(rat, gold, den)
}

fn gv(entries: &[(i64, i64)], den: i64) -> GoldenVector {
    // (τ-coefficient, rational part) pairs, as the vectors are usually written.
    GoldenVector::new(entries.iter().map(|&(t, r)| g(r, t, den)).collect())
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Outcome {
    ensure(
        elapsed < limit,
        format!("{what} took {elapsed:?}, limit {limit:?}"),
    )
}

fn c1_matrix() -> Outcome {
    let system = ms4();
    let start = Instant::now();
    let m = build_matrix(&system);
    let elapsed = start.elapsed();
    let want = [[1, 1, 1, 1], [2, 1, 2, 2], [1, 1, 1, 2], [0, 0, 1, 2]];
    for (i, row) in want.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            ensure(
                m.get(i, j) == x,
                format!("entry ({i},{j}) = {}, want {x}", m.get(i, j)),
            )?;
        }
    }
    ensure(m.order() == ["z", "h", "s", "a"], "tile ordering")?;
    within(elapsed, Duration::from_millis(10), "build_matrix")
}

fn c2_volume_eigen() -> Outcome {
    let system = ms4();
    let m = build_matrix(&system);
    let v = gv(&[(4, 2), (6, 4), (4, 3), (2, 1)], 12);
    ensure(
        system.volume_vector().as_ref() == Some(&v),
        "stored volumes differ from (4τ+2, 6τ+4, 4τ+3, 2τ+1)/12",
    )?;
    let r = verify_eigen(&m, &v, &g(1, 2, 1));
    ensure(
        r.product == gv(&[(16, 10), (26, 16), (18, 11), (8, 5)], 12),
        format!("M·v = {}", r.product),
    )?;
    ensure(r.holds, format!("residual {}", r.residual))
}

fn c3_dehn_eigen() -> Outcome {
    let m = build_matrix(&ms4());
    let d = gv(&[(1, 0), (0, 2), (1, -1), (-1, 0)], 1);
    let r = verify_eigen(&m, &d, &GoldenNumber::tau());
    ensure(
        r.product == gv(&[(1, 1), (2, 0), (0, 1), (-1, -1)], 1),
        format!("M·d = {}", r.product),
    )?;
    ensure(r.holds, format!("residual {}", r.residual))?;
    let scaled = d.scale(&GoldenNumber::from(-5));
    ensure(
        verify_eigen(&m, &scaled, &GoldenNumber::tau()).holds == r.holds,
        "verdict changes under scaling by -5",
    )?;
    let stored = ms4().dehn_vector(ALPHA_MS).ok_or("ms4 lacks Dehn data")?;
    ensure(
        stored == scaled,
        format!("stored Dehn vector {stored} is not -5·(τ, 2, τ−1, −τ)"),
    )
}

fn c4_conjugate_spectrum() -> Outcome {
    let m = build_matrix(&ms4());
    let sd = gv(&[(1, 0), (0, 2), (1, -1), (-1, 0)], 1).conj();
    ensure(
        sd == gv(&[(-1, 1), (0, 2), (-1, 0), (1, -1)], 1),
        format!("σ(d) = {sd}"),
    )?;
    let minus_inv_tau = g(1, -1, 1);
    ensure(
        minus_inv_tau == -GoldenNumber::tau().inv().unwrap(),
        "1 − τ ≠ −τ⁻¹",
    )?;
    let r = verify_eigen(&m, &sd, &minus_inv_tau);
    ensure(r.holds, format!("M·σ(d) − (1−τ)σ(d) = {}", r.residual))?;

    let p = char_poly(&m);
    // Oracle: (x² − x − 1)(x² − 4x − 1) expanded by convolution.
    let f1 = [1i64, -1, -1];
    let f2 = [1i64, -4, -1];
    let mut expanded = [0i64; 5];
    for (i, a) in f1.iter().enumerate() {
        for (j, b) in f2.iter().enumerate() {
            expanded[i + j] += a * b;
        }
    }
    let got: Vec<i64> = p.descending().iter().map(|c| c.to_i64().unwrap()).collect();
    ensure(
        got == expanded,
        format!("char poly {p}, oracle {expanded:?}"),
    )?;
    ensure(
        expanded == reference::MS4_CHAR_POLY,
        "oracle disagrees with x⁴ − 5x³ + 2x² + 5x + 1",
    )?;
    ensure(
        m.trace() == 5 && -got[1] == 5,
        format!("trace {}", m.trace()),
    )?;
    // det M = (−1)⁴·p(0)
    ensure(got[4] == 1, format!("determinant {}", got[4]))
}

fn c5_reconstruction() -> Outcome {
    let system = ms4();
    let vol = EigenDatum::new(system.volume_vector().ok_or("no volumes")?, g(1, 2, 1))
        .ok_or("zero volumes")?;
    let dehn = EigenDatum::new(
        gv(&[(1, 0), (0, 2), (1, -1), (-1, 0)], 1),
        GoldenNumber::tau(),
    )
    .ok_or("zero Dehn")?;
    let (a, b) = build_constraints(&[vol.primitive(), dehn]).map_err(|e| e.to_string())?;
    let want_a = RationalMatrix::from_ints(&reference::MS4_CONSTRAINTS_A);
    let want_b = RationalMatrix::from_ints(&reference::MS4_CONSTRAINTS_B);
    ensure(a == want_a, format!("A =\n{a}"))?;
    ensure(b == want_b, format!("B =\n{b}"))?;
    let sol = solve_matrix(&a, &b).map_err(|e| e.to_string())?;
    ensure(sol.integral, "solution not integral")?;
    ensure(
        sol.matrix == RationalMatrix::from(&build_matrix(&system)),
        format!("solved\n{}", sol.matrix),
    )?;
    // Uniqueness: A has full rank.
    let rows: Vec<Vec<Rational>> = (0..4).map(|i| a.row(i).to_vec()).collect();
    ensure(linalg::rank(&rows, 4) == 4, "A is rank deficient")?;

    let mut perturbed = want_b.clone();
    perturbed.set(
        0,
        0,
        perturbed.get(0, 0) + Rational::from_integer(BigInt::from(1)),
    );
    let sol = solve_matrix(&want_a, &perturbed).map_err(|e| e.to_string())?;
    ensure(
        !sol.integral,
        "perturbed B[0][0] did not raise the non-integer flag",
    )
}

fn c6_ms5_consistency() -> Outcome {
    let five = ms5();
    let four = ms4();
    let m5 = build_matrix(&five);
    let m4 = build_matrix(&four);
    let order5 = five.order();
    for (tile4, seed5) in paired_seeds() {
        let mut c5 = five.counts_of(&seed5).map_err(|e| e.to_string())?;
        let mut c4 = four.counts_of(&[tile4]).map_err(|e| e.to_string())?;
        for n in 0..=PROJECTION_STEPS {
            let projected =
                compose_h(&order5, &c5).map_err(|e| format!("seed {tile4}, n = {n}: {e}"))?;
            ensure(
                projected == c4,
                format!("seed {tile4}, n = {n}: projections differ"),
            )?;
            c5 = matrix_power_counts(&m5, &c5, 1);
            c4 = m4.inflate(&c4);
        }
    }

    ensure(five.volume("r") == Some(&g(1, 4, 12)), "vol r ≠ (4τ+1)/12")?;
    ensure(five.volume("m") == Some(&g(3, 2, 12)), "vol m ≠ (2τ+3)/12")?;
    let alpha = |c: GoldenNumber| DehnElement::single(ALPHA_MS, c);
    ensure(
        five.dehn("r") == Some(&alpha(g(-5, -5, 1))),
        "Dehn r ≠ −5(τ+1)",
    )?;
    ensure(
        five.dehn("m") == Some(&alpha(g(-5, 5, 1))),
        "Dehn m ≠ −5(1−τ)",
    )?;

    let vol_res = five
        .volume_identity_residuals()
        .ok_or("ms5 lacks volumes")?;
    ensure(vol_res.len() == 5, "expected five rules")?;
    for (tile, r) in vol_res {
        ensure(
            r.is_zero(),
            format!("stone-inflation identity for {tile}: residual {r}"),
        )?;
    }
    for (tile, r) in five
        .dehn_identity_residuals()
        .ok_or("ms5 lacks Dehn data")?
    {
        ensure(
            r.is_zero(),
            format!("Dehn additivity for {tile}: residual {r}"),
        )?;
    }
    let h_vol = five.volume("r").unwrap() + five.volume("m").unwrap();
    ensure(Some(&h_vol) == four.volume("h"), "vol r + vol m ≠ vol h")?;
    let h_dehn = five.dehn("r").unwrap() + five.dehn("m").unwrap();
    ensure(Some(&h_dehn) == four.dehn("h"), "D(r) + D(m) ≠ D(h)")
}

fn c7_frequencies() -> Outcome {
    let m = build_matrix(&ms4());
    let lambda = g(1, 2, 1);
    let start = Instant::now();
    let f = frequencies(&m, &lambda).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    // Exact eigenspace of Mᵀ − λI is one-dimensional.
    let rows: Vec<Vec<GoldenNumber>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let x = GoldenNumber::from(m.get(j, i) as i64);
                    if i == j {
                        &x - &lambda
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let kernel = linalg::nullspace(&rows, 4).len();
    ensure(kernel == 1, format!("eigenspace dimension {kernel}"))?;
    ensure(
        f.entries().iter().all(GoldenNumber::is_positive),
        format!("not positive: {f}"),
    )?;
    ensure(f.sum() == GoldenNumber::one(), format!("sum {}", f.sum()))?;
    ensure(m.apply_transpose(&f) == f.scale(&lambda), "Mᵀf ≠ λf")?;

    // Cross-oracle: 30 integer inflation steps from z, normalized.
    let counts = matrix_power_counts(&m, &CountVector::unit(4, 0), 30);
    let total = counts.total().to_f64().ok_or("total too large")?;
    for (i, (c, x)) in counts.counts().iter().zip(f.entries()).enumerate() {
        let ratio = c.to_f64().ok_or("count too large")? / total;
        let err = (ratio - x.to_f64()).abs();
        ensure(
            err < 1e-10,
            format!(
                "tile {i}: power iteration {ratio} vs exact {} (|Δ| = {err:e})",
                x.to_f64()
            ),
        )?;
    }
    within(elapsed, Duration::from_secs(1), "frequencies")
}

fn c8_dehn_calculator() -> Outcome {
    let right = AngleClass::rational_pi(1, 2).map_err(|e| e.to_string())?;
    let cube = vec![(GoldenNumber::one(), right); 12];
    ensure(
        dehn_of_polyhedron(&cube)
            .map_err(|e| e.to_string())?
            .is_zero(),
        "unit cube Dehn invariant nonzero",
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let length = |rng: &mut ChaCha8Rng| loop {
        let x = GoldenNumber::new(
            Rational::new(rng.gen_range(-20..=20).into(), rng.gen_range(1..=9).into()),
            Rational::new(rng.gen_range(-20..=20).into(), rng.gen_range(1..=9).into()),
        );
        if x.is_positive() {
            return x;
        }
    };
    for case in 0..1000 {
        let n = rng.gen_range(0..10);
        let rational_only: Vec<_> = (0..n)
            .map(|_| {
                let q = rng.gen_range(1..=24i64);
                (
                    length(&mut rng),
                    AngleClass::rational_pi(rng.gen_range(-50..50i64), q).unwrap(),
                )
            })
            .collect();
        ensure(
            dehn_of_polyhedron(&rational_only)
                .map_err(|e| e.to_string())?
                .is_zero(),
            format!("case {case}: rational-π edges gave a nonzero invariant"),
        )?;

        let edges = |rng: &mut ChaCha8Rng| -> Vec<(GoldenNumber, AngleClass)> {
            let n = rng.gen_range(0..8);
            (0..n)
                .map(|_| {
                    let angle = if rng.gen_bool(0.3) {
                        AngleClass::rational_pi(rng.gen_range(0..12i64), rng.gen_range(1..12i64))
                            .unwrap()
                    } else {
                        AngleClass::named(["alpha_ms", "x", "y"][rng.gen_range(0..3)])
                    };
                    (length(rng), angle)
                })
                .collect()
        };
        let e1 = edges(&mut rng);
        let e2 = edges(&mut rng);
        let joined: Vec<_> = e1.iter().chain(&e2).cloned().collect();
        let lhs = dehn_of_polyhedron(&joined).map_err(|e| e.to_string())?;
        let rhs = &dehn_of_polyhedron(&e1).map_err(|e| e.to_string())?
            + &dehn_of_polyhedron(&e2).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, format!("case {case}: additivity fails"))?;
    }
    Ok(())
}

fn c9_scale() -> Outcome {
    let system = ms4();
    let m = build_matrix(&system);
    let start = Instant::now();
    let counts = matrix_power_counts(&m, &CountVector::unit(4, 0), 30);
    let volume = total_volume(&system, &counts).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let want = &g(1, 2, 1).pow(30) * &g(2, 4, 12);
    ensure(
        volume == want,
        format!("total volume {volume}, want {want}"),
    )?;
    within(elapsed, Duration::from_secs(1), "30-step inflation")
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "1 inflation matrix of ms4 equals the published matrix",
            c1_matrix,
        ),
        (
            "2 volume eigen-identity with eigenvalue 2τ+1",
            c2_volume_eigen,
        ),
        (
            "3 Dehn eigen-identity with eigenvalue τ, scale-invariant",
            c3_dehn_eigen,
        ),
        (
            "4 conjugate eigenvalue 1−τ and characteristic polynomial",
            c4_conjugate_spectrum,
        ),
        (
            "5 reconstruction from volume and Dehn data",
            c5_reconstruction,
        ),
        (
            "6 ms5 projects onto ms4; derived r, m data consistent",
            c6_ms5_consistency,
        ),
        (
            "7 exact Perron frequencies vs 30-step power iteration",
            c7_frequencies,
        ),
        (
            "8 Dehn calculator: cube, rational angles, additivity",
            c8_dehn_calculator,
        ),
        ("9 30-fold inflation with exact total volume", c9_scale),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS criterion {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!(
        "{}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
