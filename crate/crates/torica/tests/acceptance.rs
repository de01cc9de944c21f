//! End-to-end acceptance suite. Each criterion prints one pass/fail line;
//! the test fails if any criterion fails. Expected values are classical
//! invariants (quintic threefold, K3 quartic, plane cubic, genus-4 curve on
//! a quadric, genus-1 curve in P(1,1,2)) frozen as exact integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use torica::coxring::{CoxRing, GradedPolynomial};
use torica::fan::{
    blown_up_p2, p112, product_of_fans, projective_space, weighted_projective, Fan,
};
use torica::forms::{
    module_membership, omega0, omega0_mform, omega_i, omega_i_mform, omega_ij, omega_ij_mform,
    opposite_ray_pairs, poly_differential, residue_differential_identity_check, ExteriorForm,
};
use torica::groebner::DEFAULT_BUDGET;
use torica::hodge::{betti_numbers, JacobianData, Preconditions};
use torica::matrix::{smith_normal_form, Matrix};

type CriterionResult = Result<(), String>;
/// A named hypersurface instance: graded ring, divisor coefficients, polynomial.
type Instance = (CoxRing, Vec<BigInt>, GradedPolynomial);

fn ensure(cond: bool, msg: &str) -> CriterionResult {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn ensure_eq<T: PartialEq + std::fmt::Debug>(got: T, want: T, what: &str) -> CriterionResult {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn ring_for(fan: Fan) -> CoxRing {
    CoxRing::new(fan).expect("valid fan")
}

/// Sum of the listed monomials with coefficient 1.
fn poly(ring: &CoxRing, exps: &[Vec<u32>]) -> GradedPolynomial {
    ring.sum_of_monomials(exps).expect("homogeneous monomial list")
}

/// Fermat-type polynomial sum z_i^k on a simplex fan with n rays.
fn fermat(ring: &CoxRing, k: u32) -> GradedPolynomial {
    let n = ring.n_vars();
    let exps: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut e = vec![0u32; n];
            e[i] = k;
            e
        })
        .collect();
    poly(ring, &exps)
}

fn jacobian(ring: &CoxRing, f: &GradedPolynomial) -> JacobianData {
    JacobianData::new(ring.clone(), f.clone())
}

fn within(elapsed: Duration, limit_secs: u64, what: &str) -> CriterionResult {
    ensure(
        elapsed < Duration::from_secs(limit_secs),
        &format!("{what}: took {elapsed:?}, limit {limit_secs}s"),
    )
}

// ---------------------------------------------------------------------------
// Criterion 1: Fermat quintic threefold in P^4.

fn criterion_1() -> CriterionResult {
    let start = Instant::now();
    let ring = ring_for(projective_space(4));
    let f = fermat(&ring, 5);
    let jd = jacobian(&ring, &f);
    let pre = Preconditions::assume_all();
    ensure_eq(jd.primitive_hodge(3, &pre).unwrap(), 1, "quintic PH^{3,0}")?;
    ensure_eq(jd.primitive_hodge(2, &pre).unwrap(), 101, "quintic PH^{2,1}")?;
    ensure_eq(jd.primitive_hodge(0, &pre).unwrap(), 1, "quintic PH^{0,3}")?;
    ensure_eq(jd.moduli_tangent_dim(&pre).unwrap(), 101, "quintic moduli tangent")?;
    within(start.elapsed(), 30, "quintic runtime")
}

// ---------------------------------------------------------------------------
// Criterion 2: Fermat quartic K3 surface in P^3.

fn criterion_2() -> CriterionResult {
    let start = Instant::now();
    let ring = ring_for(projective_space(3));
    let f = fermat(&ring, 4);
    let jd = jacobian(&ring, &f);
    let pre = Preconditions::assume_all();
    ensure_eq(jd.primitive_hodge(2, &pre).unwrap(), 1, "quartic PH^{2,0}")?;
    ensure_eq(jd.primitive_hodge(1, &pre).unwrap(), 19, "quartic PH^{1,1}")?;
    within(start.elapsed(), 5, "quartic runtime")
}

// ---------------------------------------------------------------------------
// Criterion 3: Fermat cubic curve in P^2 (correction branch with zero defect).

fn criterion_3() -> CriterionResult {
    let start = Instant::now();
    let ring = ring_for(projective_space(2));
    let f = fermat(&ring, 3);
    let jd = jacobian(&ring, &f);
    let pre = Preconditions::assume_all();
    let betti = betti_numbers(ring.fan());
    ensure_eq(betti[2] - betti[0], 0, "P^2 middle Betti defect")?;
    ensure_eq(jd.primitive_hodge(1, &pre).unwrap(), 1, "cubic PH^{1,0}")?;
    ensure_eq(jd.primitive_hodge(0, &pre).unwrap(), 1, "cubic PH^{0,1}")?;
    within(start.elapsed(), 2, "cubic runtime")
}

// ---------------------------------------------------------------------------
// Criterion 4: seed-fixed bidegree (3,3) curve on P^1 x P^1, genus 4.

const P1XP1_SEED: u64 = 0;

fn p1xp1_33() -> Instance {
    let ring = ring_for(product_of_fans(&projective_space(1), &projective_space(1)));
    let b = int_vec(&[3, 0, 3, 0]);
    let beta = ring.group().class_of(&b);
    let f = ring.random_polynomial(&beta, P1XP1_SEED).unwrap();
    (ring, b, f)
}

fn criterion_4() -> CriterionResult {
    let start = Instant::now();
    let (ring, b, f) = p1xp1_33();
    let jd = jacobian(&ring, &f);
    let cert = jd
        .nondegenerate(&b, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    ensure(cert.nondegenerate, "seed-fixed (3,3) curve must be nondegenerate")?;
    let betti = betti_numbers(ring.fan());
    ensure_eq(betti[2] - betti[0], 1, "P^1 x P^1 middle Betti defect")?;
    let pre = Preconditions::assume_all();
    ensure_eq(jd.primitive_hodge(1, &pre).unwrap(), 4, "(3,3) PH^{1,0}")?;
    ensure_eq(jd.primitive_hodge(0, &pre).unwrap(), 4, "(3,3) PH^{0,1}")?;
    ensure_eq(
        jd.primitive_hodge_via_r1(0, &pre).unwrap(),
        4,
        "(3,3) PH^{0,1} via colon ideal",
    )?;
    within(start.elapsed(), 10, "(3,3) runtime")
}

// ---------------------------------------------------------------------------
// Criterion 5: degree-4 curve z1^4 + z2^4 + z3^2 in P(1,1,2), genus 1.

fn p112_quartic() -> Instance {
    let ring = ring_for(p112());
    let b = int_vec(&[4, 0, 0]);
    let f = poly(&ring, &[vec![4, 0, 0], vec![0, 4, 0], vec![0, 0, 2]]);
    (ring, b, f)
}

fn criterion_5() -> CriterionResult {
    let start = Instant::now();
    let (ring, _, f) = p112_quartic();
    let jd = jacobian(&ring, &f);
    let pre = Preconditions::assume_all();
    let betti = betti_numbers(ring.fan());
    ensure_eq(betti[2] - betti[0], 0, "P(1,1,2) middle Betti defect")?;
    ensure_eq(jd.primitive_hodge(1, &pre).unwrap(), 1, "P(1,1,2) PH^{1,0}")?;
    ensure_eq(jd.primitive_hodge(0, &pre).unwrap(), 1, "P(1,1,2) PH^{0,1}")?;
    within(start.elapsed(), 5, "P(1,1,2) runtime")
}

// ---------------------------------------------------------------------------
// Criterion 6: cross-consistency of the two quotient-ring descriptions on a
// corpus of certified-nondegenerate hypersurfaces.

fn fermat_pair(dim: usize, k: u32) -> Instance {
    let ring = ring_for(projective_space(dim));
    let mut b = vec![0i64; dim + 1];
    b[0] = k as i64;
    let f = fermat(&ring, k);
    (ring, int_vec(&b), f)
}

fn criterion_6() -> CriterionResult {
    let corpus: Vec<(&str, Instance)> = vec![
        ("P^2 cubic", fermat_pair(2, 3)),
        ("P^2 quartic", fermat_pair(2, 4)),
        ("P^2 quintic", fermat_pair(2, 5)),
        ("P^3 cubic", fermat_pair(3, 3)),
        ("P^3 quartic", fermat_pair(3, 4)),
        ("P^4 quintic", fermat_pair(4, 5)),
        ("P^1xP^1 (3,3)", p1xp1_33()),
        ("P(1,1,2) quartic", p112_quartic()),
    ];
    ensure(corpus.len() >= 8, "corpus too small")?;
    for (name, (ring, b, f)) in corpus {
        let jd = jacobian(&ring, &f);
        let cert = jd
            .nondegenerate(&b, DEFAULT_BUDGET)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(cert.nondegenerate, &format!("{name}: not nondegenerate"))?;
        let d = ring.fan().dim();
        let betti = betti_numbers(ring.fan());
        let defect = betti[d] - betti[d - 2];
        let group = ring.group();
        let beta = f.degree.clone();
        let beta0 = ring.beta0();
        for p in 0..d {
            let gamma = group.sub(&group.scale(&BigInt::from((d - p) as i64), &beta), &beta0);
            let r = jd.dim_r(&gamma);
            let r1 = jd.dim_r1(&gamma);
            if d % 2 == 0 && p == d / 2 - 1 {
                ensure_eq(
                    r as i64 - r1 as i64,
                    defect,
                    &format!("{name}: middle-degree defect at p = {p}"),
                )?;
            } else {
                ensure_eq(r, r1, &format!("{name}: dim R vs dim R1 at p = {p}"))?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Criterion 7: randomized property suites (>= 100 cases each).

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: 120,
        failure_persistence: None,
        ..Config::default()
    })
}

fn fan_corpus() -> Vec<Fan> {
    vec![
        projective_space(2),
        projective_space(3),
        product_of_fans(&projective_space(1), &projective_space(1)),
        p112(),
        blown_up_p2(),
        weighted_projective(&[1, 2, 3]).unwrap(),
    ]
}

fn prop_snf_identities() -> CriterionResult {
    let strategy = (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c).prop_map(move |entries| (r, c, entries))
    });
    runner()
        .run(&strategy, |(r, c, entries)| {
            let a = Matrix::from_fn(r, c, |i, j| BigInt::from(entries[i * c + j]));
            let s = smith_normal_form(&a);
            prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone(), "U A V != D");
            prop_assert_eq!(s.u.mul(&s.u_inv), Matrix::<BigInt>::identity(r));
            prop_assert_eq!(s.v.mul(&s.v_inv), Matrix::<BigInt>::identity(c));
            let det_u = s.u.to_rational().det();
            let det_v = s.v.to_rational().det();
            prop_assert!(det_u.abs() == BigRational::one(), "U not unimodular");
            prop_assert!(det_v.abs() == BigRational::one(), "V not unimodular");
            let diag = s.diagonal();
            for w in diag.windows(2) {
                prop_assert!(!w[0].is_negative() && !w[1].is_negative());
                if !w[0].is_zero() {
                    prop_assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
                } else {
                    prop_assert!(w[1].is_zero(), "zero before nonzero on diagonal");
                }
            }
            Ok(())
        })
        .map_err(|e| format!("SNF identities: {e}"))
}

fn prop_class_round_trip() -> CriterionResult {
    let fans = fan_corpus();
    let n_fans = fans.len();
    let strategy = (0..n_fans, proptest::collection::vec(-20i64..=20, 6));
    runner()
        .run(&strategy, |(fi, raw)| {
            let ring = CoxRing::new(fans[fi].clone()).unwrap();
            let group = ring.group();
            let b: Vec<BigInt> = (0..ring.n_vars())
                .map(|i| BigInt::from(raw[i % raw.len()]))
                .collect();
            let cls = group.class_of(&b);
            let rep = group.representative(&cls);
            prop_assert_eq!(group.class_of(&rep), cls, "class/representative round trip");
            Ok(())
        })
        .map_err(|e| format!("class round trip: {e}"))
}

fn prop_euler_and_jacobian_membership() -> CriterionResult {
    let fans = fan_corpus();
    let n_fans = fans.len();
    let strategy = (0..n_fans, proptest::collection::vec(0i64..=3, 6), 0u64..1_000_000);
    runner()
        .run(&strategy, |(fi, raw, seed)| {
            let ring = CoxRing::new(fans[fi].clone()).unwrap();
            let group = ring.group();
            let b: Vec<BigInt> = (0..ring.n_vars())
                .map(|i| BigInt::from(raw[i % raw.len()]))
                .collect();
            if b.iter().all(|x| x.is_zero()) {
                return Ok(());
            }
            let beta = group.class_of(&b);
            if ring.graded_dim(&beta) == 0 {
                return Ok(());
            }
            let f = ring.random_polynomial(&beta, seed).unwrap();
            for phi in ring.euler_relations_basis() {
                prop_assert!(
                    ring.euler_identity_holds(&phi, &f).unwrap(),
                    "Euler identity failed"
                );
            }
            let jd = JacobianData::new(ring.clone(), f);
            prop_assert!(jd.f_in_jacobian_check(), "f not in its own Jacobian ideal");
            Ok(())
        })
        .map_err(|e| format!("Euler / Jacobian membership: {e}"))
}

fn prop_codim_bound() -> CriterionResult {
    // codim_z asserts the structural bound internally; this exercises it on
    // the whole corpus plus extra weighted and product fans.
    let mut fans = fan_corpus();
    fans.push(projective_space(4));
    fans.push(weighted_projective(&[1, 1, 2, 2]).unwrap());
    fans.push(product_of_fans(&projective_space(1), &projective_space(2)));
    for fan in &fans {
        let codim = fan.codim_z();
        let n = fan.n_rays();
        let d = fan.dim();
        if n == d + 1 {
            ensure_eq(codim, d + 1, "simplex fan exceptional-locus codim")?;
        } else {
            ensure(
                2 <= codim && codim <= d / 2 + 1,
                &format!("codim bound violated: codim {codim}, dim {d}"),
            )?;
        }
    }
    Ok(())
}

/// Independent oracle: count lattice points of {m : <m, e_i> >= -b_i} by
/// scanning an enclosing box directly against the ray inequalities, without
/// the polytope or monomial-basis machinery.
fn brute_force_lattice_count(fan: &Fan, b: &[BigInt]) -> usize {
    let d = fan.dim();
    let radius: i64 = {
        let sum: BigInt = b.iter().map(|x| x.abs()).sum();
        let s: i64 = sum.try_into().unwrap_or(30);
        4 * s + 4
    };
    let mut count = 0usize;
    let mut point = vec![0i64; d];
    fn scan(
        fan: &Fan,
        b: &[BigInt],
        radius: i64,
        point: &mut Vec<i64>,
        coord: usize,
        count: &mut usize,
    ) {
        if coord == point.len() {
            let m: Vec<BigInt> = point.iter().map(|&x| BigInt::from(x)).collect();
            let inside = (0..fan.n_rays()).all(|i| {
                let pairing: BigInt = m.iter().zip(fan.ray(i)).map(|(x, y)| x * y).sum();
                pairing >= -&b[i]
            });
            if inside {
                *count += 1;
            }
            return;
        }
        for x in -radius..=radius {
            point[coord] = x;
            scan(fan, b, radius, point, coord + 1, count);
        }
    }
    scan(fan, b, radius, &mut point, 0, &mut count);
    count
}

fn prop_lattice_count_matches_graded_dim() -> CriterionResult {
    // 2-dimensional fans only: the box scan is the oracle and must stay cheap.
    let fans: Vec<Fan> = fan_corpus()
        .into_iter()
        .filter(|f| f.dim() == 2)
        .collect();
    let n_fans = fans.len();
    let strategy = (0..n_fans, proptest::collection::vec(-2i64..=5, 5));
    runner()
        .run(&strategy, |(fi, raw)| {
            let ring = CoxRing::new(fans[fi].clone()).unwrap();
            let b: Vec<BigInt> = (0..ring.n_vars())
                .map(|i| BigInt::from(raw[i % raw.len()]))
                .collect();
            let oracle = brute_force_lattice_count(ring.fan(), &b);
            let dim = ring.graded_dim(&ring.group().class_of(&b));
            prop_assert_eq!(dim, oracle, "graded dim vs direct lattice-point count");
            Ok(())
        })
        .map_err(|e| format!("lattice count oracle: {e}"))
}

fn criterion_7() -> CriterionResult {
    prop_snf_identities()?;
    prop_class_round_trip()?;
    prop_euler_and_jacobian_membership()?;
    prop_codim_bound()?;
    prop_lattice_count_matches_graded_dim()
}

// ---------------------------------------------------------------------------
// Criterion 8: exterior-form identity suite.

fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn forms_fans() -> Vec<(Fan, Vec<BigInt>)> {
    vec![
        (projective_space(2), int_vec(&[3, 0, 0])),
        (
            product_of_fans(&projective_space(1), &projective_space(1)),
            int_vec(&[2, 0, 2, 0]),
        ),
        (p112(), int_vec(&[4, 0, 0])),
    ]
}

fn criterion_8() -> CriterionResult {
    // Frozen expansion of the first two generator forms on P^1 x P^1:
    // Omega_1 = z2 (z4 dz3 - z3 dz4), Omega_2 = -z1 (z4 dz3 - z3 dz4).
    let quadric = product_of_fans(&projective_space(1), &projective_space(1));
    let om1 = omega_i(&quadric, 0);
    let mut expected = ExteriorForm::new(4, 1);
    expected.add_term(vec![0, 1, 0, 1], vec![2], rational(1));
    expected.add_term(vec![0, 1, 1, 0], vec![3], rational(-1));
    ensure_eq(om1, expected, "Omega_1 on P^1 x P^1")?;
    let om2 = omega_i(&quadric, 1);
    let mut expected2 = ExteriorForm::new(4, 1);
    expected2.add_term(vec![1, 0, 0, 1], vec![2], rational(-1));
    expected2.add_term(vec![1, 0, 1, 0], vec![3], rational(1));
    ensure_eq(om2, expected2, "Omega_2 on P^1 x P^1")?;

    // Two-variable reductions on opposite ray pairs: Omega_i = z_j Omega_ij
    // and Omega_j = -z_i Omega_ij.
    let ring_q = ring_for(quadric.clone());
    let pairs = opposite_ray_pairs(&quadric);
    ensure(!pairs.is_empty(), "quadric should have opposite ray pairs")?;
    for (i, j) in pairs {
        let om_ij = omega_ij(&quadric, i, j).map_err(|e| e.to_string())?;
        let unit = |k: usize| {
            let mut e = vec![0u32; 4];
            e[k] = 1;
            ring_q.monomial(e)
        };
        ensure_eq(
            omega_i(&quadric, i),
            om_ij.mul_poly(&unit(j)),
            "Omega_i = z_j Omega_ij",
        )?;
        ensure_eq(
            omega_i(&quadric, j),
            om_ij.mul_poly(&unit(i)).scale(&rational(-1)),
            "Omega_j = -z_i Omega_ij",
        )?;
    }

    for (fan, b) in forms_fans() {
        let ring = ring_for(fan.clone());
        let group = ring.group();
        let beta = group.class_of(&b);
        let beta0 = ring.beta0();
        let n = ring.n_vars();

        // Module membership of every generator form.
        ensure(
            module_membership(&fan, &omega0_mform(&fan)),
            "Omega_0 membership",
        )?;
        for i in 0..n {
            ensure(
                module_membership(&fan, &omega_i_mform(&fan, i)),
                "Omega_i membership",
            )?;
        }
        for (i, j) in opposite_ray_pairs(&fan) {
            let om = omega_ij_mform(&fan, i, j).map_err(|e| e.to_string())?;
            ensure(module_membership(&fan, &om), "Omega_ij membership")?;
        }

        // Residue-differential identity on 20 seed-fixed (A, i, k) instances;
        // A must have the compatible degree k beta - beta_0 + beta_i.
        let f = ring.random_polynomial(&beta, 7).unwrap();
        let mut done = 0u32;
        let mut attempt = 0u64;
        while done < 20 {
            attempt += 1;
            ensure(attempt < 500, "could not find 20 residue-identity instances")?;
            let i = (attempt as usize) % n;
            let k = 1 + (attempt % 3) as i64;
            let cls = group.add(
                &group.sub(&group.scale(&BigInt::from(k), &beta), &beta0),
                ring.ray_degree(i),
            );
            if ring.graded_dim(&cls) == 0 {
                continue;
            }
            let a = ring.random_polynomial(&cls, 1000 + attempt).unwrap();
            ensure(
                residue_differential_identity_check(&ring, &f, &a, i, k),
                &format!("residue-differential identity instance {attempt}"),
            )?;
            done += 1;
        }

        // d(d(.)) = 0 on polynomials and on the generator forms.
        for seed in 0..5u64 {
            let g = ring.random_polynomial(&beta, seed).unwrap();
            ensure(
                poly_differential(&ring, &g).exterior_derivative().is_zero(),
                "d(dg) != 0",
            )?;
        }
        ensure(
            omega0(&fan).exterior_derivative().exterior_derivative().is_zero(),
            "d(d Omega_0) != 0",
        )?;
        for i in 0..n {
            ensure(
                omega_i(&fan, i)
                    .exterior_derivative()
                    .exterior_derivative()
                    .is_zero(),
                "d(d Omega_i) != 0",
            )?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Criterion 9: positive and negative smoothness certificates.

fn criterion_9() -> CriterionResult {
    let ring = ring_for(projective_space(4));
    let f = fermat(&ring, 5);
    let jd = jacobian(&ring, &f);
    let qs = jd.quasi_smooth(DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(qs.quasi_smooth, "Fermat quintic must certify quasi-smooth")?;
    let nd = jd
        .nondegenerate(&int_vec(&[5, 0, 0, 0, 0]), DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    ensure(nd.nondegenerate, "Fermat quintic must certify nondegenerate")?;

    let ring2 = ring_for(projective_space(2));
    let g = poly(&ring2, &[vec![3, 0, 0], vec![0, 3, 0]]);
    let jd2 = jacobian(&ring2, &g);
    let qs2 = jd2.quasi_smooth(DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(
        !qs2.quasi_smooth,
        "z1^3 + z2^3 on P^2 must be rejected as not quasi-smooth",
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> CriterionResult);
    let criteria: Vec<Criterion> = vec![
        ("1 quintic threefold Hodge numbers", criterion_1),
        ("2 quartic K3 surface Hodge numbers", criterion_2),
        ("3 plane cubic with zero middle defect", criterion_3),
        ("4 genus-4 curve on the quadric surface", criterion_4),
        ("5 genus-1 curve in P(1,1,2)", criterion_5),
        ("6 quotient-ring cross-consistency corpus", criterion_6),
        ("7 randomized property suites", criterion_7),
        ("8 exterior-form identity suite", criterion_8),
        ("9 smoothness certificates", criterion_9),
    ];
    let mut all_ok = true;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let verdict = match outcome {
            Ok(Ok(())) => "PASS".to_string(),
            Ok(Err(msg)) => format!("FAIL: {msg}"),
            Err(_) => "FAIL: panicked".to_string(),
        };
        println!("criterion {name}: {verdict}");
        if verdict != "PASS" {
            all_ok = false;
        }
    }
    assert!(all_ok, "one or more acceptance criteria failed");
}
