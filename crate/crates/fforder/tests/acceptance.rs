//! The acceptance gate: nine end-to-end criteria, one test each, every
//! test printing a single PASS line with its scale and timing (visible
//! with --nocapture; a panic in a criterion is its FAIL line).
//!
//! Criteria 3, 4 and 5 share one matrix sweep (q in {2,3,5}, r in 1..=4,
//! Dr <= 20, all projective classes for q in {2,3} and a seeded sample of
//! 25 classes for q = 5), built once behind a OnceLock.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fforder::action::{factor_census, frobenius_poly, is_invariant};
use fforder::bounds::{
    asymptotic_floor, closed_form_bound, verify_strictness, BoundItem,
    KNOWN_STRICTNESS_EXCEPTIONS,
};
use fforder::caps::Caps;
use fforder::counting::{count_vectors, FamilyParams};
use fforder::experiment::{records_to_jsonl, run_experiment, AlphaPolicy, ExperimentRecord, RunSpec};
use fforder::factor::factor_poly_seeded;
use fforder::field::{Field, FieldRef};
use fforder::integer::gcd;
use fforder::pgl2::{pgl_order, verify_li_lemmas, Mat2};
use fforder::poly::DensePoly;
use fforder::real::Real;
use fforder::roots::{find_generic_root, verify_lambda_injective};

// ---- criterion 1: exact counts against a dumb box scan ------------------

/// Counts vectors in [-t, s]^rlen with positive-part sum <= s and
/// negative-part sum <= t by scanning the whole box with an odometer.
fn box_scan_count(rlen: usize, s: i64, t: i64) -> u64 {
    let width = (s + t + 1) as usize;
    let mut odo = vec![0usize; rlen];
    let mut total = 0u64;
    loop {
        let mut pos = 0i64;
        let mut neg = 0i64;
        for &digit in &odo {
            let v = digit as i64 - t;
            if v >= 0 {
                pos += v;
            } else {
                neg -= v;
            }
        }
        if pos <= s && neg <= t {
            total += 1;
        }
        let mut carry = 0;
        while carry < rlen {
            odo[carry] += 1;
            if odo[carry] < width {
                break;
            }
            odo[carry] = 0;
            carry += 1;
        }
        if carry == rlen {
            return total;
        }
    }
}

#[test]
fn acceptance_1_counting_matches_brute_force() {
    let start = Instant::now();
    let mut cells = 0u32;
    for rlen in 1..=5u64 {
        for m in 0..=4u64 {
            let d = rlen + m;
            for s in 0..=4u64 {
                for t in 0..=4u64 {
                    let params = FamilyParams::new(d, s, t, m).unwrap();
                    let brute = box_scan_count(rlen as usize, s as i64, t as i64);
                    assert_eq!(
                        count_vectors(&params),
                        BigUint::from(brute),
                        "formula disagrees with the box scan at D={d} s={s} t={t} m={m}"
                    );
                    cells += 1;
                }
            }
        }
    }
    let seven = count_vectors(&FamilyParams::new(2, 1, 1, 0).unwrap());
    assert_eq!(seven, BigUint::from(7u32));
    let nineteen = count_vectors(&FamilyParams::new(3, 2, 2, 1).unwrap());
    assert_eq!(nineteen, BigUint::from(19u32));
    println!(
        "acceptance 1 (counting vs brute force): PASS — {cells} parameter cells, \
         anchors 7 and 19, {:?}",
        start.elapsed()
    );
}

// ---- criterion 2: row-independence lemma suites --------------------------

#[test]
fn acceptance_2_lemma_suites() {
    let start = Instant::now();
    let mut matrices = 0u64;
    let mut li2 = 0u64;
    for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let field = Field::new(p, k).unwrap();
        let report = verify_li_lemmas(&field).unwrap();
        assert_eq!(report.violations, 0, "lemma violation over q = {}", field.q());
        assert!(report.li1_pairs > 0 && report.li3_pairs > 0);
        assert!(report.triangular_checks > 0);
        matrices += report.matrices;
        li2 += report.li2_checks;
    }
    assert!(li2 > 0, "the propagation identity was never exercised");
    println!(
        "acceptance 2 (row-independence lemmas over q in {{2,3,4,5}}): PASS — \
         {matrices} invertible matrices, 0 violations, {:?}",
        start.elapsed()
    );
}

// ---- the shared sweep for criteria 3, 4, 5 -------------------------------

struct SweepCell {
    q: u128,
    matrix: Mat2,
    r: u32,
    d: u128,
    factors: Vec<(DensePoly, u32)>,
    records: Vec<ExperimentRecord>,
}

/// All projective classes of non-scalar invertible matrices, one canonical
/// representative each (the matrix whose entry encoding is smallest among
/// its scalar multiples).
fn projective_reps(field: &FieldRef) -> Vec<Mat2> {
    let q = field.q();
    let encode =
        |m: &Mat2| ((m.a.index() * q + m.b.index()) * q + m.c.index()) * q + m.d.index();
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for ai in 0..q {
        for bi in 0..q {
            for ci in 0..q {
                for di in 0..q {
                    let m = Mat2::new(
                        field.elem(ai).unwrap(),
                        field.elem(bi).unwrap(),
                        field.elem(ci).unwrap(),
                        field.elem(di).unwrap(),
                    );
                    if m.det().is_zero() {
                        continue;
                    }
                    if m.b.is_zero() && m.c.is_zero() && m.a == m.d {
                        continue; // scalar: excluded by hypothesis
                    }
                    let canon = field
                        .elements()
                        .filter(|lambda| !lambda.is_zero())
                        .map(|lambda| {
                            encode(&Mat2::new(
                                &lambda * &m.a,
                                &lambda * &m.b,
                                &lambda * &m.c,
                                &lambda * &m.d,
                            ))
                        })
                        .min()
                        .unwrap();
                    if seen.insert(canon) {
                        reps.push(m);
                    }
                }
            }
        }
    }
    reps
}

fn sweep() -> &'static [SweepCell] {
    static SWEEP: OnceLock<Vec<SweepCell>> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let caps = Caps::default();
        let mut cells = Vec::new();
        for (p, sample) in [(2u64, None), (3, None), (5, Some(25usize))] {
            let field = Field::prime(p).unwrap();
            let mut reps = projective_reps(&field);
            if let Some(n) = sample {
                let mut rng = ChaCha8Rng::seed_from_u64(0);
                reps = reps.choose_multiple(&mut rng, n).cloned().collect();
            }
            for a in reps {
                let d = pgl_order(&a).unwrap();
                for r in 1..=4u32 {
                    if d * r as u128 > 20 {
                        continue;
                    }
                    let poly = frobenius_poly(&a, r, &caps).unwrap();
                    let factors = factor_poly_seeded(&poly, 0).unwrap();
                    let spec = RunSpec { alpha: AlphaPolicy::All, ..RunSpec::new(vec![r]) };
                    let records = run_experiment(&a, &spec, &caps).unwrap();
                    cells.push(SweepCell { q: field.q(), matrix: a.clone(), r, d, factors, records });
                }
            }
        }
        cells
    })
}

// ---- criterion 3: ord(theta + alpha) >= both bounds ----------------------

#[test]
fn acceptance_3_orders_dominate_bounds() {
    let start = Instant::now();
    let cells = sweep();
    let mut records = 0u64;
    let mut with_root = 0u64;
    let mut anchor_seen = false;
    for cell in cells {
        for rec in &cell.records {
            records += 1;
            assert_ne!(
                rec.pass,
                Some(false),
                "order fell below a bound at q={} A=[{}] r={} alpha={}",
                cell.q,
                cell.matrix.entry_string(),
                cell.r,
                rec.alpha
            );
            if rec.pass == Some(true) {
                with_root += 1;
            }
        }
        if cell.q == 2 && cell.matrix.entry_string() == "0,1,1,1" && cell.r == 3 {
            anchor_seen = true;
            for rec in &cell.records {
                assert_eq!(rec.certified_bound, Some(BigUint::from(19u32)));
                let ord = rec.order.clone().unwrap();
                assert!(ord == BigUint::from(73u32) || ord == BigUint::from(511u32));
            }
        }
    }
    assert!(anchor_seen, "the q=2 degree-9 anchor must be part of the sweep");
    assert!(with_root > records / 2, "most sweep instances should have generic roots");
    println!(
        "acceptance 3 (orders dominate certified + analytic bounds): PASS — \
         {} (A, r) cells, {records} records, {with_root} with generic roots, 0 violations, {:?}",
        cells.len(),
        start.elapsed()
    );
}

// ---- criterion 4: exhaustive injectivity ----------------------------------

#[test]
fn acceptance_4_lambda_injectivity() {
    let start = Instant::now();
    let mut checked = 0u64;
    for cell in sweep() {
        for rec in &cell.records {
            if rec.injectivity_checked {
                checked += 1;
                assert_eq!(
                    rec.injective,
                    Some(true),
                    "Lambda not injective at q={} A=[{}] r={} alpha={}",
                    cell.q,
                    cell.matrix.entry_string(),
                    cell.r,
                    rec.alpha
                );
            }
        }
    }
    assert!(checked > 0);

    // Control: past the certified budget the map must collapse, and the
    // checker must see it. theta^2 = -1 here, so theta^4 = 1 = theta^0.
    let f3 = Field::prime(3).unwrap();
    let caps = Caps::default();
    let swap = Mat2::parse(&f3, "0,1,1,0").unwrap();
    let root = find_generic_root(&swap, 1, &caps, 0).unwrap().root.unwrap();
    let too_wide = FamilyParams::new(2, 1, 1, 0).unwrap();
    assert!(
        !verify_lambda_injective(&root.theta, 1, &too_wide, &caps).unwrap(),
        "the deliberate violation case must be detected"
    );

    // Second control: a diagonal Frobenius matrix collapses even the
    // family a triangular certificate of the same size would use
    // (theta^(q^r) is a scalar multiple of theta there), which is why
    // the diagonal case certifies only the singleton. alpha = 2 shifts
    // [[1,0],[1,2]] onto diag(1,2); at r = 4 the 48-vector family folds.
    let a = Mat2::parse(&f3, "1,0,1,2").unwrap();
    let alpha = f3.elem(2).unwrap();
    let root = find_generic_root(&a, 4, &caps, 0).unwrap().root.unwrap();
    let shifted = &root.theta + &root.ext.embed(&alpha);
    let triangular_sized = FamilyParams::new(2, 4, 3, 0).unwrap();
    assert!(
        !verify_lambda_injective(&shifted, 4, &triangular_sized, &caps).unwrap(),
        "the diagonal collapse must be detected"
    );
    println!(
        "acceptance 4 (Lambda injective on certified families): PASS — \
         {checked} families checked exhaustively; both deliberate violations detected, {:?}",
        start.elapsed()
    );
}

// ---- criterion 5: factor degree menu and invariance -----------------------

fn degree_menu(d: u128, r: u32) -> BTreeSet<usize> {
    let mut menu: BTreeSet<usize> = [1, 2].into();
    for k in 1..=r {
        if r.is_multiple_of(k) && gcd((r / k) as u128, d) == 1 {
            menu.insert(d as usize * k as usize);
        }
    }
    menu
}

#[test]
fn acceptance_5_factor_structure() {
    let start = Instant::now();
    let mut factors = 0u64;
    let mut nonlinear = 0u64;
    for cell in sweep() {
        let menu = degree_menu(cell.d, cell.r);
        for (f, mult) in &cell.factors {
            let deg = f.degree().unwrap();
            assert!(
                menu.contains(&deg),
                "degree {deg} outside menu {menu:?} at q={} A=[{}] r={}",
                cell.q,
                cell.matrix.entry_string(),
                cell.r
            );
            if deg > 1 {
                assert_eq!(*mult, 1, "repeated non-linear factor at q={}", cell.q);
                assert!(
                    is_invariant(&cell.matrix, f).unwrap(),
                    "factor not fixed by the matrix action at q={} A=[{}] r={}",
                    cell.q,
                    cell.matrix.entry_string(),
                    cell.r
                );
                nonlinear += 1;
            }
            factors += 1;
        }
    }
    println!(
        "acceptance 5 (factor degrees on the menu, non-linear factors invariant): PASS — \
         {factors} factors, {nonlinear} non-linear, {:?}",
        start.elapsed()
    );
}

// ---- criterion 6: closed forms stay under the exact counts ----------------

#[test]
fn acceptance_6_closed_form_strictness() {
    let start = Instant::now();
    let report = verify_strictness(6, 12).unwrap();
    assert_eq!(report.checked, 150);
    assert_eq!(
        report.violations.as_slice(),
        KNOWN_STRICTNESS_EXCEPTIONS,
        "strictness must fail at the documented cell and nowhere else"
    );
    // The exception is real, not a rounding artifact: at D=2, r=11 the
    // dependent form lands strictly between the exact count 11 and 12.
    let exc = closed_form_bound(BoundItem::C, 2, 11).unwrap();
    assert!(!exc.lt_int(&BigUint::from(11u32)));
    assert!(exc.lt_int(&BigUint::from(12u32)));
    // Anchors at D=2, r=4, well beyond two decimal places.
    let b = closed_form_bound(BoundItem::B, 2, 4).unwrap().to_sig12();
    let c = closed_form_bound(BoundItem::C, 2, 4).unwrap().to_sig12();
    assert!(b.starts_with("5.89888"), "item b anchor drifted: {b}");
    assert!(c.starts_with("3.34286"), "item c anchor drifted: {c}");
    println!(
        "acceptance 6 (closed forms undercut exact counts, 2<=D<=6, 3<=r<=12): PASS — \
         150 cells, one documented exception (item c at D=2, r=11), {:?}",
        start.elapsed()
    );
}

// ---- criterion 7: census trend --------------------------------------------

#[test]
fn acceptance_7_census_trend() {
    let start = Instant::now();
    let f3 = Field::prime(3).unwrap();
    let swap = Mat2::parse(&f3, "0,1,1,0").unwrap();
    let caps = Caps::default();
    let mut ratios = Vec::new();
    for r in 2..=6u32 {
        let census = factor_census(&swap, r, &caps).unwrap();
        let dr = census.d as f64 * r as f64;
        let ratio = census.n_dr as f64 * dr / 3f64.powi(r as i32);
        // The full-degree factor count tracks q^r/(Dr); at desk scale we
        // can only pin it inside a generous band around 1.
        assert!(
            (0.3..=2.0).contains(&ratio),
            "N(Dr) * Dr / q^r = {ratio:.3} escaped [0.3, 2.0] at r={r}"
        );
        ratios.push(format!("r={r}: {ratio:.3}"));
    }
    println!(
        "acceptance 7 (full-degree factor count ~ q^r/(Dr)): PASS — {}, {:?}",
        ratios.join(", "),
        start.elapsed()
    );
}

// ---- criterion 8: asymptotic floors at r = 200 -----------------------------

#[test]
fn acceptance_8_asymptotic_floors() {
    let start = Instant::now();
    let eps = Real::from_ratio(1, 5);
    for d in [2u64, 3, 4] {
        let floor1 = asymptotic_floor(1, d, 200, &eps).unwrap();
        let bound1 = closed_form_bound(BoundItem::B, d, 200).unwrap();
        assert!(floor1 < bound1, "floor (1) must stay under bound (1) at D={d}");

        let floor2 = asymptotic_floor(2, d, 200, &eps).unwrap();
        let bound2 = closed_form_bound(BoundItem::C, d, 200).unwrap();
        if d == 2 {
            // Documented reversal: the floor's constant beats the bound's
            // for every large r at D=2 with eps=0.2 (the floor only drops
            // below once eps > e(1 - e^{-5/48}) ~ 0.269).
            assert!(floor2 > bound2, "the D=2 floor-(2) reversal is real and pinned");
        } else {
            assert!(floor2 < bound2, "floor (2) must stay under bound (2) at D={d}");
        }
    }
    println!(
        "acceptance 8 (asymptotic floors at r=200, eps=0.2): PASS — floor (1) holds at \
         D in {{2,3,4}}, floor (2) at D in {{3,4}} and reverses at D=2 as documented, {:?}",
        start.elapsed()
    );
}

// ---- criterion 9: determinism ----------------------------------------------

#[test]
fn acceptance_9_determinism() {
    let start = Instant::now();
    let caps = Caps::default();

    let f2 = Field::prime(2).unwrap();
    let a = Mat2::parse(&f2, "0,1,1,1").unwrap();
    let spec = RunSpec { alpha: AlphaPolicy::All, ..RunSpec::new(vec![1, 2, 3, 4]) };
    let one = records_to_jsonl(&run_experiment(&a, &spec, &caps).unwrap());
    let two = records_to_jsonl(&run_experiment(&a, &spec, &caps).unwrap());
    assert_eq!(one, two, "full-sweep output must be byte-identical");

    // Large field: the alpha sample and the factorization splits are both
    // seeded, so reruns must reproduce exactly.
    let f83 = Field::prime(83).unwrap();
    let swap = Mat2::parse(&f83, "0,1,1,0").unwrap();
    let spec = RunSpec { seed: 42, ..RunSpec::new(vec![1]) };
    let one = records_to_jsonl(&run_experiment(&swap, &spec, &caps).unwrap());
    let two = records_to_jsonl(&run_experiment(&swap, &spec, &caps).unwrap());
    assert_eq!(one, two, "sampled-alpha output must be byte-identical");
    assert_eq!(one.lines().count(), 17, "header plus 16 sampled shifts");

    println!(
        "acceptance 9 (seeded byte-level determinism): PASS — two configs, \
         identical reruns, {:?}",
        start.elapsed()
    );
}
