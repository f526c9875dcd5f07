//! Acceptance gate for the whole pipeline: eleven numbered criteria, each
//! printing one `[PASS]`/`[FAIL]` line with the measured residual and the
//! tolerance it was held to (run with `-- --nocapture` to see the lines).
//!
//! The expected values are *oracles* computed independently of the code
//! under test: closed-form measures (Dirac, uniform), the Fourier
//! transform of Lebesgue measure, a moment recursion for IFS fixed
//! points solved by hand with linear algebra, and exhaustive span
//! formulas for basis-shift projections. Tolerances are centralized
//! below with their rationale.

use std::fs;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cuntz_measures::diagnostics::{
    cyclicity_test, projection_range_check, subspace_orthogonality_check, DEFAULT_TAU_MASS,
    DEFAULT_TAU_NULL,
};
use cuntz_measures::ifs::eigen_to_ifs_bridge;
use cuntz_measures::measure::{approx_measure, lebesgue_fourier, refinement_residual};
use cuntz_measures::{AffineIFS, AtomicMeasure, Complex, FilterBank, LaurentPoly, Verdict, Word};

/// Residual ceiling for operator relations measured over many basis
/// vectors and sample points: two decades above f64 noise to absorb
/// accumulation, far below any structural failure (those are O(1)).
const RELATION_TOL: f64 = 1e-10;

/// Exact-identity tolerance: identities that hold in exact arithmetic
/// (closed-form weights, refinement, branch pushforward, projections)
/// must land within simple roundoff of their targets.
const EXACT_TOL: f64 = 1e-12;

/// One-line verdict printer; the assert keeps the failure in the test
/// output even when stdout is captured.
fn report(ok: bool, line: &str) {
    println!("[{}] {line}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{line}");
}

fn data_path(kind: &str, name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../data/{kind}/{name}.json"))
}

fn load_bank(name: &str) -> FilterBank {
    let text = fs::read_to_string(data_path("banks", name)).expect("shipped bank file");
    serde_json::from_str(&text).expect("shipped bank parses")
}

fn load_ifs(name: &str) -> AffineIFS {
    let text = fs::read_to_string(data_path("ifs", name)).expect("shipped IFS file");
    serde_json::from_str(&text).expect("shipped IFS parses")
}

const BANK_NAMES: [&str; 5] = ["monomial_N2", "dft_N2", "dft_N3", "shift_N2", "haar_N2"];

fn shipped_banks() -> Vec<(&'static str, FilterBank)> {
    BANK_NAMES
        .iter()
        .map(|&name| (name, load_bank(name)))
        .collect()
}

/// A random polynomial with support in [−8, 8], normalized to ‖f‖ = 1.
fn random_unit_poly(rng: &mut ChaCha8Rng) -> LaurentPoly {
    loop {
        let terms = rng.gen_range(3..=9);
        let poly = LaurentPoly::from_coeffs((0..terms).map(|_| {
            (
                rng.gen_range(-8i64..=8),
                Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        }))
        .unwrap();
        if let Some(unit) = poly.normalized() {
            return unit;
        }
    }
}

#[test]
fn c01_relations_and_unitarity_hold_for_all_shipped_banks() {
    let mut worst_relation = 0.0f64;
    let mut worst_unitarity = 0.0f64;
    for (_, bank) in shipped_banks() {
        let cuntz = bank.verify_cuntz(64).unwrap();
        worst_relation = worst_relation.max(cuntz.max_residual());
        worst_unitarity = worst_unitarity.max(bank.check_unitarity(257));
    }
    report(
        worst_relation <= RELATION_TOL && worst_unitarity <= RELATION_TOL,
        &format!(
            "01 isometry/completeness and matrix unitarity across 5 banks: \
             relation residual {worst_relation:.2e}, unitarity residual {worst_unitarity:.2e} \
             (tolerance {RELATION_TOL:.0e})"
        ),
    );
}

#[test]
fn c02_monomial_bank_concentrates_e0_at_the_origin() {
    let bank = load_bank("monomial_N2");
    let mut worst = f64::INFINITY; // sentinel flips to a real value below
    let mut ok = true;
    for depth in 0..=12 {
        let m = approx_measure(&bank, &LaurentPoly::basis(0), depth).unwrap();
        let single_atom_at_zero = m.len() == 1 && m.atoms()[0].x == 0.0;
        let weight_error = (m.atoms().first().map_or(f64::NAN, |a| a.w) - 1.0).abs();
        ok &= single_atom_at_zero && weight_error <= EXACT_TOL;
        worst = if worst.is_finite() {
            worst.max(weight_error)
        } else {
            weight_error
        };
    }
    report(
        ok,
        &format!(
            "02 point-mass oracle, depths 0..=12: one atom at 0, \
             worst weight error {worst:.2e} (tolerance {EXACT_TOL:.0e})"
        ),
    );
}

/// sup_x |F_μ(x) − x| for a measure on [0, 1): the step function F_μ
/// meets the line worst at atom positions, from one side or the other.
fn sup_distance_to_uniform_cdf(m: &AtomicMeasure) -> f64 {
    let mut worst = 0.0f64;
    for atom in m.atoms() {
        worst = worst.max((m.cdf(atom.x) - atom.x).abs());
        worst = worst.max((m.cdf_left(atom.x) - atom.x).abs());
    }
    worst
}

#[test]
fn c03_haar_bank_spreads_e0_to_the_uniform_measure() {
    let bank = load_bank("haar_N2");
    let mut worst_weight = 0.0f64;
    let mut ok = true;
    for depth in 2..=10u32 {
        let m = approx_measure(&bank, &LaurentPoly::basis(0), depth).unwrap();
        let cells = 1usize << depth;
        ok &= m.len() == cells;
        let target = 1.0 / cells as f64;
        for (j, atom) in m.atoms().iter().enumerate() {
            ok &= atom.x == j as f64 / cells as f64;
            worst_weight = worst_weight.max((atom.w - target).abs());
        }
        let sup = sup_distance_to_uniform_cdf(&m);
        // The step function is 2^{−k} from the line at every jump; the
        // measured sup may sit a few ulps past that from summed weights.
        ok &= sup <= target + EXACT_TOL;
    }
    ok &= worst_weight <= EXACT_TOL;
    report(
        ok,
        &format!(
            "03 uniform-measure oracle, depths 2..=10: worst weight error \
             {worst_weight:.2e} (tolerance {EXACT_TOL:.0e}), CDF within 2^-k of F(x)=x"
        ),
    );
}

#[test]
fn c04_fourier_transforms_obey_the_depth_error_bound() {
    let frequencies = [
        1.0,
        -1.0,
        std::f64::consts::PI,
        -std::f64::consts::PI,
        10.0,
        -10.0,
        50.0,
        -50.0,
    ];
    let haar = load_bank("haar_N2");
    let e0 = LaurentPoly::basis(0);
    let mut worst_margin = f64::NEG_INFINITY;
    let mut ok = true;
    for depth in 1..=10 {
        for &t in &frequencies {
            let report = cuntz_measures::measure::fourier_error_report(
                &haar,
                &e0,
                depth,
                t,
                lebesgue_fourier(t),
            )
            .unwrap();
            ok &= report.pass;
            worst_margin = worst_margin.max(report.error - report.bound);
        }
    }
    // The point-mass limit: the transform is identically 1, error pure roundoff.
    let monomial = load_bank("monomial_N2");
    let mut worst_dirac = 0.0f64;
    for depth in 1..=10 {
        let m = approx_measure(&monomial, &e0, depth).unwrap();
        for &t in &frequencies {
            worst_dirac = worst_dirac.max((m.fourier(t) - Complex::new(1.0, 0.0)).norm());
        }
    }
    ok &= worst_dirac <= EXACT_TOL;
    report(
        ok,
        &format!(
            "04 transform error vs |t|·2^-k bound (8 frequencies, depths 1..=10): \
             worst error-minus-bound {worst_margin:.2e} (allowed slack {EXACT_TOL:.0e}); \
             point-mass transform error {worst_dirac:.2e} (tolerance {EXACT_TOL:.0e})"
        ),
    );
}

fn sweep_vectors() -> Vec<LaurentPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    vec![
        LaurentPoly::basis(0),
        LaurentPoly::basis(1),
        LaurentPoly::basis(-1),
        random_unit_poly(&mut rng),
    ]
}

#[test]
fn c05_depth_refinement_identity_is_exact() {
    let frequencies = [1.0, std::f64::consts::PI, 10.0];
    let mut worst = 0.0f64;
    for (_, bank) in shipped_banks() {
        for f in sweep_vectors() {
            for depth in 1..=6 {
                worst = worst.max(refinement_residual(&bank, &f, depth, &frequencies).unwrap());
            }
        }
    }
    report(
        worst <= EXACT_TOL,
        &format!(
            "05 transform refinement identity, 5 banks x 4 vectors x depths 1..=6: \
             worst residual {worst:.2e} (tolerance {EXACT_TOL:.0e})"
        ),
    );
}

#[test]
fn c06_branch_measures_are_pushforwards() {
    let mut worst = 0.0f64;
    for (_, bank) in shipped_banks() {
        for f in sweep_vectors() {
            for depth in 1..=6 {
                let coarse = approx_measure(&bank, &f, depth - 1).unwrap();
                for i in 0..bank.scale() {
                    let lifted = bank.apply(i, &f).unwrap();
                    let fine = approx_measure(&bank, &lifted, depth).unwrap();
                    let pushed = coarse
                        .pushforward(&cuntz_measures::AffineMap::nadic(bank.scale(), i).unwrap())
                        .unwrap();
                    worst = worst.max(fine.atomwise_distance(&pushed, 1e-12));
                }
            }
        }
    }
    report(
        worst <= EXACT_TOL,
        &format!(
            "06 branch measure = pushforward of coarser measure, same sweep: \
             worst atom discrepancy {worst:.2e} (tolerance {EXACT_TOL:.0e})"
        ),
    );
}

/// Raw moments M_0..=M_order of the fixed point of an affine IFS, from
/// the self-similarity recursion: integrating x^r against the fixed
/// point and expanding (a_i x + b_i)^r gives
/// M_r · (1 − Σ_i p_i a_i^r) = Σ_i p_i Σ_{s<r} C(r,s) a_i^s b_i^{r−s} M_s.
/// Solved forward — an oracle independent of any measure iteration.
fn fixed_point_moments(ifs: &AffineIFS, order: usize) -> Vec<f64> {
    let mut binom = vec![vec![0f64; order + 1]; order + 1];
    for r in 0..=order {
        binom[r][0] = 1.0;
        for s in 1..=r {
            binom[r][s] = binom[r - 1][s - 1] + if s < r { binom[r - 1][s] } else { 0.0 };
        }
    }
    let mut moments = vec![1.0f64];
    for (r, row) in binom.iter().enumerate().skip(1) {
        let mut rhs = 0.0;
        let mut shrink = 0.0;
        for (map, &p) in ifs.maps().iter().zip(ifs.probs()) {
            shrink += p * map.a.powi(r as i32);
            for (s, &past) in moments.iter().enumerate() {
                rhs += p * row[s] * map.a.powi(s as i32) * map.b.powi((r - s) as i32) * past;
            }
        }
        moments.push(rhs / (1.0 - shrink));
    }
    moments
}

#[test]
fn c07_cantor_iteration_matches_the_moment_oracle() {
    let ifs = load_ifs("cantor");
    let oracle = fixed_point_moments(&ifs, 4);
    // Freeze the oracle itself against hand-solved values.
    assert!((oracle[1] - 0.5).abs() <= EXACT_TOL, "hand-solved mean");
    assert!(
        (oracle[2] - 0.375).abs() <= EXACT_TOL,
        "hand-solved second moment"
    );
    let variance = oracle[2] - oracle[1] * oracle[1];
    let central4 = oracle[4] - 4.0 * oracle[3] * oracle[1]
        + 6.0 * oracle[2] * oracle[1] * oracle[1]
        - 3.0 * oracle[1].powi(4);
    assert!((variance - 0.125).abs() <= EXACT_TOL);
    assert!(
        (central4 - 0.021875).abs() <= EXACT_TOL,
        "fourth central moment 7/320"
    );

    let deterministic = ifs
        .hutchinson_iterate(&AtomicMeasure::dirac(0.0), 12)
        .unwrap();
    let det_mean_err = (deterministic.moment(1) - oracle[1]).abs();
    let det_var = deterministic.moment(2) - deterministic.moment(1).powi(2);
    let det_var_err = (det_var - variance).abs();

    let samples = 1_000_000usize;
    let chaos = ifs.chaos_game(2026, samples).unwrap();
    let se_mean = (variance / samples as f64).sqrt();
    let se_var = ((central4 - variance * variance) / samples as f64).sqrt();
    let chaos_mean_err = (chaos.moment(1) - oracle[1]).abs();
    let chaos_var = chaos.moment(2) - chaos.moment(1).powi(2);
    let chaos_var_err = (chaos_var - variance).abs();

    let ok = det_mean_err <= 1e-5
        && det_var_err <= 1e-5
        && chaos_mean_err <= 5.0 * se_mean
        && chaos_var_err <= 5.0 * se_var;
    report(
        ok,
        &format!(
            "07 middle-thirds fixed point: depth-12 iterate mean/variance off by \
             {det_mean_err:.2e}/{det_var_err:.2e} (tolerance 1e-5); chaos game (10^6 samples) \
             off by {chaos_mean_err:.2e}/{chaos_var_err:.2e} \
             (5 standard errors = {:.2e}/{:.2e})",
            5.0 * se_mean,
            5.0 * se_var
        ),
    );
}

#[test]
fn c08_eigenvector_measures_agree_with_ifs_fixed_points() {
    let mut worst_distance = 0.0f64;
    let mut worst_sum = 0.0f64;
    for name in ["dft_N2", "dft_N3"] {
        let bank = load_bank(name);
        let e0 = LaurentPoly::basis(0);
        let eigen = bank.joint_eigen_check(&e0).unwrap();
        worst_sum = worst_sum.max(eigen.weight_sum_error.expect("e_0 is a joint eigenvector"));
        for depth in 1..=6 {
            let bridge = eigen_to_ifs_bridge(&bank, &e0, depth).unwrap();
            worst_distance = worst_distance.max(bridge.distance);
        }
    }
    let (worst_distance, worst_sum) = (worst_distance, worst_sum);
    report(
        worst_distance <= RELATION_TOL && worst_sum <= RELATION_TOL,
        &format!(
            "08 operator measure vs subdivision-IFS iterate for adjoint eigenvectors \
             (2 banks, depths 1..=6): worst atom distance {worst_distance:.2e}, \
             eigen weight-sum error {worst_sum:.2e} (tolerance {RELATION_TOL:.0e})"
        ),
    );
}

#[test]
fn c09_support_test_separates_the_two_canonical_banks() {
    let shift = load_bank("shift_N2");
    let haar = load_bank("haar_N2");
    let e0 = LaurentPoly::basis(0);
    let mut ok = true;
    for depth in 2..=6 {
        let flagged =
            cyclicity_test(&shift, &e0, depth, DEFAULT_TAU_MASS, DEFAULT_TAU_NULL).unwrap();
        ok &= flagged.branches[1].verdict == Verdict::Violated;
        ok &= flagged.branches[0].verdict == Verdict::Consistent;
        let clean = cyclicity_test(&haar, &e0, depth, DEFAULT_TAU_MASS, DEFAULT_TAU_NULL).unwrap();
        ok &= clean.all_consistent();
    }
    report(
        ok,
        &format!(
            "09 support diagnostic, depths 2..=6: basis-shift bank branch 1 VIOLATED, \
             uniform bank all CONSISTENT (thresholds {DEFAULT_TAU_MASS:.0e}/{DEFAULT_TAU_NULL:.0e})"
        ),
    );
}

#[test]
fn c10_shift_projection_ranges_match_the_residue_formula() {
    let mut worst = 0.0f64;
    for depth in 1..=8 {
        worst = worst.max(projection_range_check(depth, 256).unwrap());
    }
    report(
        worst <= EXACT_TOL,
        &format!(
            "10 cylinder projections vs residue-class formula, depths 1..=8, |n| <= 256: \
             worst residual {worst:.2e} (tolerance {EXACT_TOL:.0e})"
        ),
    );
}

#[test]
fn c11_randomized_property_suites() {
    const CASES: usize = 200;
    let bank_pool = shipped_banks();
    let pick_bank = |rng: &mut ChaCha8Rng| &bank_pool[rng.gen_range(0..bank_pool.len())].1;
    let random_word = |rng: &mut ChaCha8Rng, scale: usize, len: usize| {
        Word::new((0..len).map(|_| rng.gen_range(0..scale) as u8).collect())
    };

    // Suite A: total mass of the depth-k measure equals ‖f‖² = 1.
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst_mass = 0.0f64;
    for _ in 0..CASES {
        let bank = pick_bank(&mut rng);
        let f = random_unit_poly(&mut rng);
        let depth = rng.gen_range(1..=5);
        let m = approx_measure(bank, &f, depth).unwrap();
        worst_mass = worst_mass.max((m.total_mass() - 1.0).abs());
    }

    // Suite B: cylinder projections are idempotent and self-adjoint.
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst_proj = 0.0f64;
    for _ in 0..CASES {
        let bank = pick_bank(&mut rng);
        let len = rng.gen_range(1..=4);
        let word = random_word(&mut rng, bank.scale(), len);
        let f = random_unit_poly(&mut rng);
        let g = random_unit_poly(&mut rng);
        let pf = bank.cylinder_projection(&word, &f).unwrap();
        let ppf = bank.cylinder_projection(&word, &pf).unwrap();
        worst_proj = worst_proj.max(ppf.distance(&pf));
        let pg = bank.cylinder_projection(&word, &g).unwrap();
        worst_proj = worst_proj.max((pf.inner(&g) - f.inner(&pg)).norm());
    }

    // Suite C: distinct same-length cylinders carry orthogonal ranges.
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst_orth = 0.0f64;
    for _ in 0..CASES {
        let bank = pick_bank(&mut rng);
        let len = rng.gen_range(1..=4);
        let alpha = random_word(&mut rng, bank.scale(), len);
        let beta = loop {
            let candidate = random_word(&mut rng, bank.scale(), len);
            if candidate != alpha {
                break candidate;
            }
        };
        let f = random_unit_poly(&mut rng);
        let g = random_unit_poly(&mut rng);
        let pa = bank.cylinder_projection(&alpha, &f).unwrap();
        let pb = bank.cylinder_projection(&beta, &g).unwrap();
        worst_orth = worst_orth.max(pa.inner(&pb).norm());
    }

    // Suite D: covariance — prepending a digit to a cylinder is conjugation
    // by that branch isometry: P_{iα} f = S_i P_α S_i* f.
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst_cov = 0.0f64;
    for _ in 0..CASES {
        let bank = pick_bank(&mut rng);
        let len = rng.gen_range(1..=3);
        let word = random_word(&mut rng, bank.scale(), len);
        let i = rng.gen_range(0..bank.scale());
        let f = random_unit_poly(&mut rng);
        let mut digits = vec![i as u8];
        digits.extend_from_slice(word.letters());
        let lhs = bank.cylinder_projection(&Word::new(digits), &f).unwrap();
        let pulled = bank.apply_adjoint(i, &f).unwrap();
        let projected = bank.cylinder_projection(&word, &pulled).unwrap();
        let rhs = bank.apply(i, &projected).unwrap();
        worst_cov = worst_cov.max(lhs.distance(&rhs));
    }

    // Suite E: branch subspaces stay orthogonal under cylinder projections.
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut worst_branch = 0.0f64;
    for _ in 0..CASES {
        let bank = pick_bank(&mut rng);
        let len = rng.gen_range(1..=3);
        let word = random_word(&mut rng, bank.scale(), len);
        let f = random_unit_poly(&mut rng);
        worst_branch = worst_branch
            .max(subspace_orthogonality_check(bank, &f, std::slice::from_ref(&word)).unwrap());
    }

    let ok = worst_mass <= EXACT_TOL
        && worst_proj <= EXACT_TOL
        && worst_orth <= EXACT_TOL
        && worst_cov <= EXACT_TOL
        && worst_branch <= EXACT_TOL;
    let (worst_mass, worst_proj, worst_orth, worst_cov, worst_branch) =
        (worst_mass, worst_proj, worst_orth, worst_cov, worst_branch);
    report(
        ok,
        &format!(
            "11 property suites, 200 cases each: mass {worst_mass:.2e}, \
             idempotent/self-adjoint {worst_proj:.2e}, cylinder orthogonality {worst_orth:.2e}, \
             covariance {worst_cov:.2e}, branch orthogonality {worst_branch:.2e} \
             (tolerance {EXACT_TOL:.0e})"
        ),
    );
}
