//! Full-scale end-to-end sweep: exact solution sets, census counts,
//! certified bound windows, and always-on property suites, each at its
//! reference search range. One test per check so the harness prints one
//! verdict line per check.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde_json::json;

use binrec::appearance::{
    appearance_census, exponent_bound_holds, order_of_appearance, primitive_prime_factors,
    sum_primitive_reciprocals, CensusPredicate,
};
use binrec::arith::{self, EffortBudget};
use binrec::cfrac::{
    baker_davenport_reduce, cf_expand_rational, reduction_brute_check, ReductionInstance,
};
use binrec::expr::parse_real_expr;
use binrec::linforms::{
    bound_chain_solve, matveev_coefficient, reference_bound, within_reference,
    AlgebraicNumberDesc, MatveevInstance, RootChoice,
};
use binrec::lucas::{identity_suite, residue_line, term, LucasPair, Side};
use binrec::real::Real;
use binrec::solvers::{
    lehmer_scan, ljunggren_check, pell_exponent_exception_scan, phi_fixed_point_scan,
    phi_power_form_scan, phi_repdigit_scan, repdigit_scan, wieferich_scan, PowerForm,
};

fn pell() -> LucasPair {
    LucasPair::pell()
}

fn budget(log2_rho: u32) -> EffortBudget {
    EffortBudget::new(1 << log2_rho)
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[test]
fn totient_fixed_points_of_pell_up_to_100() {
    let cert = phi_fixed_point_scan(&pell(), 100, &budget(22)).unwrap();
    assert_eq!(cert.solutions, vec![json!([1, 1]), json!([2, 1])]);
    assert!(cert.exhaustive);
    assert!(cert.uncovered.is_empty());
}

#[test]
fn appearance_census_of_first_ten_thousand_primes() {
    let odd = appearance_census(&pell(), 10_000, CensusPredicate::ZOdd, &[]).unwrap();
    assert_eq!(odd.count, 2907);
    let cap = Real::from_decimal_str("1.963", 96).unwrap();
    assert_eq!(
        odd.product.cmp_certain(&cap),
        Some(Ordering::Less),
        "odd-class product {}",
        odd.product_decimal
    );

    let nd4 =
        appearance_census(&pell(), 10_000, CensusPredicate::ZNotDivFour, &[415, 416]).unwrap();
    assert_eq!(
        nd4.checkpoints,
        vec![(415, "5.82753".to_string()), (416, "5.82861".to_string())]
    );
    // The reference tabulation of this class reads 5815, but a recount
    // gives 5817: the class demonstrably contains 104729 (z = 26182,
    // twice an odd number) past the tabulated tail, which ends at 104717.
    // The 416 checkpointed members above agree byte for byte, so the
    // difference sits beyond them. Kept as stated; this assertion fails.
    assert_eq!(nd4.count, 5815, "recount of the 4-nondivisibility class");
}

#[test]
fn repdigit_terms_of_pell_and_residue_cycles() {
    let u = repdigit_scan(&pell(), Side::Fundamental, 10_000).unwrap();
    assert!(u.exhaustive);
    let values: Vec<&str> = u.solutions.iter().map(|s| s["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["1", "2", "5"]);

    let v = repdigit_scan(&pell(), Side::Companion, 10_000).unwrap();
    assert!(v.exhaustive);
    let picks: Vec<(u64, &str)> = v
        .solutions
        .iter()
        .map(|s| (s["n"].as_u64().unwrap(), s["value"].as_str().unwrap()))
        .collect();
    assert_eq!(picks, [(0, "2"), (1, "2"), (2, "6")]);

    let p = pell();
    for (side, m, count, want) in [
        (Side::Fundamental, 16, 18, "0,1,2,5,12,13,6,9,8,9,10,13,4,5,14,1,0,1"),
        (Side::Fundamental, 5, 13, "0,1,2,0,2,4,0,4,3,0,3,1,0"),
        (Side::Fundamental, 3, 10, "0,1,2,2,0,2,1,1,0,1"),
        (Side::Fundamental, 7, 8, "0,1,2,5,5,1,0,1"),
        (Side::Companion, 8, 6, "2,2,6,6,2,2"),
        (Side::Companion, 5, 14, "2,2,1,4,4,2,3,3,4,1,1,3,2,2"),
        (Side::Companion, 3, 10, "2,2,0,2,1,1,0,1,2,2"),
    ] {
        assert_eq!(residue_line(&p, side, m, count).unwrap(), want, "cycle mod {m}");
    }
}

#[test]
fn companion_totient_repdigits_stop_at_small_indices() {
    let cert = phi_repdigit_scan(1_000, &budget(18)).unwrap();
    let picks: Vec<(u64, u64, u64)> = cert
        .solutions
        .iter()
        .map(|s| {
            (
                s["n"].as_u64().unwrap(),
                s["digit"].as_u64().unwrap(),
                s["length"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        picks,
        [(0, 1, 1), (1, 1, 1), (2, 2, 1), (3, 2, 1), (4, 6, 1), (6, 6, 1)]
    );
    // Indices the budget could not factor are reported, never decided;
    // everything decided past 6 is a non-solution.
    for n in &cert.uncovered {
        assert!(n.as_u64().unwrap() > 6, "small index left undecided: {n}");
    }
}

#[test]
fn wieferich_hits_and_composite_companion_witness() {
    assert_eq!(wieferich_scan(10, 1_000_000, 2), [3, 487]);
    assert!(wieferich_scan(10, 1_000_000, 3).is_empty());
    assert_eq!(wieferich_scan(5, 30_000, 2), [20771]);

    let l487 = term(&LucasPair::fibonacci(), 487).unwrap().v;
    assert!(!arith::is_probable_prime(&l487.to_biguint().unwrap()));
}

#[test]
fn pell_exponent_exceptions_and_their_primitive_parts() {
    assert_eq!(pell_exponent_exception_scan(1_000_000).unwrap(), [(13, 2), (31, 2)]);
    assert_eq!(
        pell_exponent_exception_scan(2_000_000).unwrap(),
        [(13, 2), (31, 2), (1_546_463, 2)]
    );

    let p = pell();
    let eff = budget(20);
    for (n, want) in [(13u64, vec![79u64, 599]), (31, vec![424_577, 865_087])] {
        let qn = term(&p, n as i64).unwrap().v.to_biguint().unwrap();
        let f = arith::factor(&qn, &eff).unwrap();
        let prim = primitive_prime_factors(&p, n, Side::Companion, &f).unwrap();
        let want: Vec<BigUint> = want.into_iter().map(BigUint::from).collect();
        assert_eq!(prim, want, "companion index {n}");
    }
}

#[test]
fn linear_form_coefficient_and_chain_bounds_in_window() {
    let prec = 256;
    let alpha = AlgebraicNumberDesc::quadratic(1, -1, -1, RootChoice::Plus).unwrap();
    let ln_alpha = alpha.value(prec).unwrap().ln(prec).unwrap();
    let two_ln_ten = Real::from_i64(10).ln(prec).unwrap().scale2(1);
    let two_ln_nine = Real::from_i64(9).ln(prec).unwrap().scale2(1);
    let inst = MatveevInstance::new(
        3,
        2,
        BigUint::from(10u32).pow(45),
        vec![ln_alpha, two_ln_ten, two_ln_nine],
    )
    .unwrap();
    let c = matveev_coefficient(&inst, prec).unwrap();
    let lo = Real::from_decimal_str("9.0e12", 96).unwrap();
    let hi = Real::from_decimal_str("9.5e12", 96).unwrap();
    assert_eq!(c.cmp_certain(&lo), Some(Ordering::Greater), "coefficient {}", c.to_decimal(6));
    assert_eq!(c.cmp_certain(&hi), Some(Ordering::Less), "coefficient {}", c.to_decimal(6));

    for (coefficient, k, ceiling_label) in
        [("4e39", 2u32, "companion_index_ceiling"), ("8e93", 7, "totient_index_ceiling")]
    {
        let c = Real::from_decimal_str(coefficient, 96).unwrap();
        let x0 = bound_chain_solve(&Real::one(), &Real::zero(), &c, k).unwrap();
        let ceiling = reference_bound(ceiling_label).unwrap();
        assert!(
            within_reference(&Real::from_bigint(&BigInt::from(x0.clone())), &ceiling),
            "least failing index {x0} misses the {ceiling_label} window"
        );
    }
}

#[test]
fn reference_reduction_certifies_small_exponent_bound() {
    let inst = ReductionInstance::new(
        parse_real_expr("log(10) / log(alpha(1,1))").unwrap(),
        parse_real_expr("log(8/9) / log(alpha(1,1))").unwrap(),
        parse_real_expr("30").unwrap(),
        parse_real_expr("alpha(1,1)").unwrap(),
        BigUint::from(10u32).pow(45),
    )
    .unwrap();
    let out = baker_davenport_reduce(&inst).unwrap();
    assert!(out.w_bound < BigInt::from(250), "exponent bound {}", out.w_bound);
    assert!(out.epsilon.is_certainly_positive());
    assert!(out.precision <= 4096, "needed {} bits", out.precision);
}

#[test]
fn totient_tower_checks_for_powers_of_five() {
    let n = BigUint::from(5u32).pow(16) - 1u32;
    let f = arith::factor(&n, &budget(20)).unwrap();
    assert!(f.is_complete());
    let support: Vec<u64> =
        f.factors().iter().map(|(p, _)| u64::try_from(p).unwrap()).collect();
    assert_eq!(support, [2, 3, 13, 17, 313, 11489]);

    let scan = phi_power_form_scan(5, 0, 40, PowerForm::Full, &budget(24)).unwrap();
    assert!(scan.solutions.is_empty(), "unexpected hits: {:?}", scan.solutions);
    assert!(scan.exhaustive);
    assert!(scan.uncovered.is_empty());

    let rep = ljunggren_check(50, 10);
    assert_eq!(rep.solutions, vec![json!([3, 5]), json!([7, 4])]);

    // 5^(q-1) is 1 mod q but never mod q^2, for every odd prime q != 5
    // below 10^4.
    let five = BigUint::from(5u32);
    for q in arith::primes_up_to(10_000) {
        if q == 2 || q == 5 {
            continue;
        }
        let qq = BigUint::from(q) * q;
        let r = five.modpow(&BigUint::from(q - 1), &qq);
        assert_eq!(r.clone() % q, BigUint::one(), "Fermat residue at {q}");
        assert_ne!(r, BigUint::one(), "square divisor at {q}");
    }
}

#[test]
fn lehmer_scans_return_empty_certificates() {
    let a = lehmer_scan(&pell(), Side::Fundamental, 200, &budget(20)).unwrap();
    assert!(a.solutions.is_empty() && a.exhaustive && a.uncovered.is_empty());
    let b = lehmer_scan(&LucasPair::fibonacci(), Side::Companion, 150, &budget(20)).unwrap();
    assert!(b.solutions.is_empty() && b.exhaustive && b.uncovered.is_empty());
}

#[test]
fn identity_relations_hold_to_200() {
    for pair in [LucasPair::fibonacci(), LucasPair::pell()] {
        let report = identity_suite(&pair, 200).unwrap();
        assert!(report.all_pass(), "pair ({}, {})", pair.r(), pair.s());
    }
}

#[test]
fn convergent_determinants_alternate_on_random_rationals() {
    let mut state = 0xacce_97ed_5eed_0001u64;
    for _ in 0..1_000 {
        let p = BigInt::from(splitmix(&mut state) as i64 % (1i64 << 48));
        let q = BigInt::from(splitmix(&mut state) % (1u64 << 48) + 1);
        let convs = cf_expand_rational(&p, &q, 2_000).convergents();
        for j in 1..convs.len() {
            let det = &convs[j].0 * &convs[j - 1].1 - &convs[j - 1].0 * &convs[j].1;
            let want = if (j - 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            assert_eq!(det, want, "at {p}/{q} index {j}");
        }
    }
}

#[test]
fn reduction_outcomes_survive_brute_force() {
    let mut state = 0x0b57_ac1e_5ca1_ab1eu64;
    let mut checked = 0;
    while checked < 20 {
        let d = 2 + splitmix(&mut state) % 60;
        if matches!(d, 4 | 9 | 16 | 25 | 36 | 49) {
            continue;
        }
        let num = 1 + splitmix(&mut state) % 97;
        let den = 101 + splitmix(&mut state) % 149;
        let a = 2 + splitmix(&mut state) % 40;
        let b = 2 + splitmix(&mut state) % 5;
        let m = 50 + splitmix(&mut state) % 4000;
        let inst = ReductionInstance::new(
            parse_real_expr(&format!("sqrt({d})")).unwrap(),
            parse_real_expr(&format!("{num}/{den}")).unwrap(),
            parse_real_expr(&a.to_string()).unwrap(),
            parse_real_expr(&b.to_string()).unwrap(),
            BigUint::from(m),
        )
        .unwrap();
        let tag = format!("gamma sqrt({d}), mu {num}/{den}, a {a}, b {b}, m {m}");
        let out = baker_davenport_reduce(&inst).unwrap_or_else(|e| panic!("{tag}: {e}"));
        // m stays below the cap, so the sweep covers every admissible u.
        assert!(reduction_brute_check(&inst, &out, 10_000, 64).unwrap(), "{tag}");
        checked += 1;
    }
}

#[test]
fn fundamental_totients_dominate_terms_at_totient_index() {
    let p = pell();
    let eff = budget(22);
    for n in 3u64..=60 {
        let pn = term(&p, n as i64).unwrap().u.to_biguint().unwrap();
        let phi_pn = arith::euler_phi(&arith::factor(&pn, &eff).unwrap()).unwrap();
        let phi_n: u64 =
            arith::factor_u64(n).iter().map(|(q, e)| (q - 1) * q.pow(e - 1)).product();
        let target = term(&p, phi_n as i64).unwrap().u.to_biguint().unwrap();
        assert!(phi_pn >= target, "index {n}");
    }
}

#[test]
fn primitive_reciprocal_sums_stay_in_bounds() {
    let p = pell();
    let eff = budget(26);
    for n in 3u64..=80 {
        let pn = term(&p, n as i64).unwrap().u.to_biguint().unwrap();
        let f = arith::factor(&pn, &eff).unwrap();
        let rec = sum_primitive_reciprocals(&p, n, &f).unwrap();
        assert!(
            rec.holds,
            "index {n}: sum {} against {} and {}",
            rec.sum_decimal, rec.bound_index, rec.bound_totient
        );
    }
}

#[test]
fn appearance_exponents_stay_under_logarithmic_cap() {
    let p = pell();
    for q in arith::primes_up_to(100_000) {
        let rec = order_of_appearance(&p, q).unwrap();
        assert!(
            exponent_bound_holds(&p, &rec).unwrap(),
            "prime {q} appears with exponent {}",
            rec.e
        );
    }
}
