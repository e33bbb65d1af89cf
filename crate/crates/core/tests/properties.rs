mod common;

use common::*;
use ddelay::{
    binomial, commutative_q, exp_bound, gronwall_bound, mc_eval, ms_eval, simulate, solution_breakdown,
    solve_closed_form, verify, DeterminingTable, ForcingSpec, GronwallProduct, Matrix, NormKind,
    ProblemSpec, Rational, Scalar, TrigEvaluator, Vector,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const NORMS: [NormKind; 2] = [NormKind::Induced1, NormKind::InducedInf];

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig::with_cases(cases)
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn rationals_stay_reduced(n in -1000i64..1000, d in 1i64..1000, k in 1i64..50) {
        let x = frac(n * k, d * k);
        let lit = x.to_literal();
        let back = Rational::parse_literal(&lit).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert!(x.denom().is_positive());
        prop_assert!(num_integer::Integer::gcd(x.numer(), x.denom()) == num_bigint::BigInt::from(1) || x.is_zero());
    }

    #[test]
    fn addition_cancels_exactly(x in arb_q_matrix(3, 9), y in arb_q_matrix(3, 9)) {
        prop_assert_eq!(&(&x + &y) - &y, x);
    }

    #[test]
    fn induced_norms_are_submultiplicative(x in arb_q_matrix(3, 6), y in arb_q_matrix(3, 6), v in arb_q_vector(3, 6)) {
        for kind in NORMS {
            prop_assert!((&x * &y).norm(kind) <= x.norm(kind) * y.norm(kind));
            prop_assert!((&x * &v).norm(kind) <= x.norm(kind) * v.norm(kind));
        }
    }

    #[test]
    fn binomial_pascal(a in 1i64..80, b in -3i64..85) {
        prop_assert_eq!(binomial(a, b), binomial(a - 1, b) + binomial(a - 1, b - 1));
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn determining_recursion_and_support((a, b) in arb_pair(3, 3)) {
        let mut table = DeterminingTable::new(a.clone(), b.clone()).unwrap();
        table.build_to(13);
        // Q(1; 0) = I is initial data; the recursion generates every later row.
        for t in 1..=12usize {
            for s in -2..=t as i64 + 2 {
                let lhs = table.get(t + 1, s).unwrap();
                let rhs = &(&a * table.get(t, s).unwrap()) + &(&b * table.get(t, s - 1).unwrap());
                prop_assert_eq!(lhs, &rhs, "t={} s={}", t, s);
            }
        }
        for t in 0..=13usize {
            for s in -2..=t as i64 + 2 {
                if s < 0 || s > t as i64 - 1 {
                    prop_assert!(table.get(t, s).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn determining_matches_word_expansion((a, b) in arb_pair(2, 3)) {
        let mut table = DeterminingTable::new(a.clone(), b.clone()).unwrap();
        for t in 0..=8usize {
            for s in -1..=t as i64 {
                prop_assert_eq!(table.q_eval(t, s), matrix_from_plain(&q_by_words(&a, &b, t, s)));
            }
        }
    }

    #[test]
    fn pure_delay_determining_values(b in arb_int_matrix(2, 3)) {
        let mut table = DeterminingTable::new(Matrix::zero(2), b.clone()).unwrap();
        table.build_to(21);
        for t in 0..=20usize {
            for j in 0..=20i64 {
                let expected = if j == t as i64 { b.pow(j as u32).unwrap() } else { Matrix::zero(2) };
                prop_assert_eq!(table.get(t + 1, j).unwrap(), &expected);
            }
        }
    }

    #[test]
    fn binomial_formula((a, b) in arb_pair(3, 3)) {
        let mut table = DeterminingTable::new(a.clone(), b.clone()).unwrap();
        let sum = plain_add(&to_plain(&a), &to_plain(&b));
        let mut power = plain_identity(a.rows());
        for t in 0..=12usize {
            prop_assert_eq!(table.nc_binomial_power(t), matrix_from_plain(&power));
            power = plain_mul(&power, &sum);
        }
    }

    #[test]
    fn commutative_reduction_for_polynomials(a in arb_int_matrix(3, 2), c0 in -2i64..=2, c1 in -2i64..=2, c2 in -2i64..=2) {
        let id = Matrix::identity(3);
        let b = &(&id.scale(&q(c0)) + &a.scale(&q(c1))) + &(&a * &a).scale(&q(c2));
        let mut table = DeterminingTable::new(a.clone(), b.clone()).unwrap();
        for t in 0..=10usize {
            for j in 0..=t as i64 + 1 {
                prop_assert_eq!(commutative_q(&a, &b, t, j).unwrap(), table.q_eval(t + 1, j));
            }
        }
    }

    #[test]
    fn determining_norm_bound((a, b) in arb_pair(3, 3)) {
        let mut table = DeterminingTable::new(a, b).unwrap();
        table.build_to(13);
        for kind in NORMS {
            for l in 0..=12i64 {
                for i in 0..=l {
                    let q = table.get(l as usize + 1, i).unwrap();
                    prop_assert!(q.norm(kind) <= table.q_norm_bound(l, i, kind));
                }
            }
        }
    }
}

/// The defining double sums summed over `l <= t`, `0 <= i <= l` with no
/// truncation of the index ranges.
fn untruncated(a: &Matrix<Rational>, b: &Matrix<Rational>, m: usize, t: i64) -> (Matrix<Rational>, Matrix<Rational>) {
    let d = a.rows();
    let mut table = DeterminingTable::new(a.clone(), b.clone()).unwrap();
    let top = t.max(0);
    table.build_to(top as usize + 1);
    let (mut sin, mut cos) = (Matrix::zero(d), Matrix::zero(d));
    for l in 0..=top {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        for i in 0..=l {
            let x = t - i * m as i64;
            let qm = table.get(l as usize + 1, i).unwrap();
            sin.add_scaled_int(&(binomial(x, 2 * l + 1) * sign), qm);
            cos.add_scaled_int(&(binomial(x, 2 * l) * sign), qm);
        }
    }
    (sin, cos)
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn truncation_drops_only_zero_terms((a, b) in arb_pair(3, 3), m in 1usize..=4) {
        let mut ev = TrigEvaluator::new(a.clone(), b.clone(), m).unwrap();
        for t in -3..=16i64 {
            let (sin, cos) = untruncated(&a, &b, m, t);
            prop_assert_eq!(ev.sin_eval(t), sin, "Sin t={}", t);
            prop_assert_eq!(ev.cos_eval(t), cos, "Cos t={}", t);
        }
    }

    #[test]
    fn trig_low_order_invariants((a, b) in arb_pair(3, 3), m in 1usize..=4) {
        let d = a.rows();
        let mut ev = TrigEvaluator::new(a, b, m).unwrap();
        for t in -5..=0 {
            prop_assert!(ev.sin_eval(t).is_zero());
        }
        for t in -5..0 {
            prop_assert!(ev.cos_eval(t).is_zero());
        }
        prop_assert_eq!(ev.sin_eval(1), Matrix::identity(d));
        prop_assert_eq!(ev.cos_eval(0), Matrix::identity(d));
        prop_assert_eq!(ev.cos_eval(1), Matrix::identity(d));
    }

    #[test]
    fn pure_delay_trig_reduction(b in arb_int_matrix(2, 3), m in 1usize..=4) {
        let mut ev = TrigEvaluator::new(Matrix::zero(2), b.clone(), m).unwrap();
        let mi = m as i64;
        for t in -mi - 2..=30 {
            prop_assert_eq!(ev.sin_eval(t + mi), ms_eval(&b, m, t).unwrap(), "M_s t={}", t);
            prop_assert_eq!(ev.cos_eval(t + mi), mc_eval(&b, m, t).unwrap(), "M_c t={}", t);
        }
    }

    #[test]
    fn trig_norm_bounds((a, b) in arb_pair(3, 3), m in 1usize..=4) {
        let mut ev = TrigEvaluator::new(a, b, m).unwrap();
        ev.prepare(25);
        for kind in NORMS {
            for t in 0..=25 {
                prop_assert!(ev.sin_ref(t).unwrap().norm(kind) <= ev.l_s(t, kind));
                prop_assert!(ev.cos_ref(t).unwrap().norm(kind) <= ev.l_c(t, kind));
            }
        }
    }
}

fn residual_is_zero(p: &ProblemSpec<Rational>, y: &ddelay::Trajectory<Rational>) -> bool {
    let m = p.delay() as i64;
    (0..=p.horizon() as i64 - 2).all(|t| {
        let at = |s: i64| y.get(s).unwrap();
        let second = &(&(at(t + 2) - at(t + 1)) - at(t + 1)) + at(t);
        let lhs = &(&second + &(p.a() * at(t))) + &(p.b() * at(t - m));
        lhs == p.forcing_at(t as usize)
    })
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn closed_form_solves_the_system(p in arb_problem(3, 14, 3)) {
        let y = solve_closed_form(&p).unwrap();
        let m = p.delay() as i64;
        for t in -m..=1 {
            prop_assert_eq!(y.get(t).unwrap(), p.phi(t));
        }
        prop_assert!(residual_is_zero(&p, &y));
        prop_assert_eq!(&y, &simulate(&p));
        let plain = plain_iterate(&p);
        for (k, v) in y.values().iter().enumerate() {
            prop_assert_eq!(v.as_slice(), plain[k].as_slice());
        }
    }

    #[test]
    fn breakdown_sums_to_solution(p in arb_problem(2, 10, 3)) {
        let y = solve_closed_form(&p).unwrap();
        for t in 0..=p.horizon() as i64 {
            let parts = solution_breakdown(&p, t).unwrap();
            prop_assert_eq!(&parts.total(), y.get(t).unwrap());
            if matches!(p.forcing(), ForcingSpec::Zero) {
                prop_assert!(parts.forced.is_zero());
            }
        }
    }

    #[test]
    fn simulate_is_deterministic(p in arb_problem(3, 12, 3)) {
        prop_assert_eq!(simulate(&p), simulate(&p.clone()));
    }

    #[test]
    fn report_invariants(p in arb_problem(2, 10, 2)) {
        let report = verify(&p).unwrap();
        prop_assert!(report.passed());
        prop_assert!(report.exact_equal);
        prop_assert!(report.max_abs_discrepancy.is_zero());
        prop_assert!(report.first_divergence_t.is_none());
    }
}

fn geometric_problem() -> impl Strategy<Value = ProblemSpec<Rational>> {
    (arb_problem(3, 12, 2), arb_q_vector(3, 2), prop_oneof![Just(frac(1, 2)), Just(q(1)), Just(q(2)), Just(frac(5, 2))])
        .prop_map(|(p, b1, b2)| {
            let d = p.dim();
            let b1 = Vector::new(b1.as_slice()[..d].to_vec());
            ProblemSpec::new(p.delay(), p.a().clone(), p.b().clone(), p.phi_values().to_vec(), ForcingSpec::Geometric { b1, b2 }, p.horizon()).unwrap()
        })
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn exponential_bound_is_sound(p in geometric_problem()) {
        let y = simulate(&p);
        for kind in NORMS {
            let report = exp_bound(&p, kind).unwrap();
            for t in 0..=p.horizon() {
                let bound = &report.bound_of_t[t];
                prop_assert!(*bound >= report.b_of_t[t]);
                prop_assert!(report.b_of_t[t] >= Rational::zero());
                prop_assert!(y.get(t as i64).unwrap().norm(kind) <= *bound, "t={}", t);
                let hat = report.b1_hat.clone() * Scalar::pow(&report.b2_hat, t as u32);
                prop_assert!(*bound <= hat);
            }
        }
    }

    #[test]
    fn gronwall_inner_index_is_sound(
        y in prop::collection::vec(arb_q(5), 31),
        a in prop::collection::vec((0i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d)), 31),
        f in prop::collection::vec((0i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d)), 31),
        margin in prop::collection::vec((0i64..=3, 1i64..=4).prop_map(|(n, d)| frac(n, d)), 31),
    ) {
        let b = hypothesis_data(&y, &a, &f, &margin);
        let bound = gronwall_bound(&b, &a, &f, GronwallProduct::InnerIndex).unwrap();
        for t in 0..31 {
            prop_assert!(y[t] <= bound[t], "t={}", t);
        }
    }

    #[test]
    fn gronwall_outer_index_is_sound_for_nonincreasing_a(
        b in prop::collection::vec((0i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d)), 31),
        steps in prop::collection::vec((0i64..=2, 1i64..=4).prop_map(|(n, d)| frac(n, d)), 31),
        f in prop::collection::vec((0i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d)), 31),
        slack in prop::collection::vec((0i64..=3, 1i64..=4).prop_map(|(n, d)| frac(n, d)), 31),
    ) {
        // a(t) = Σ_{k>=t} steps(k) is nonnegative and non-increasing; with
        // b >= 0 the outer-index product dominates the inner-index one.
        let mut a = vec![Rational::zero(); 31];
        let mut acc = Rational::zero();
        for t in (0..31).rev() {
            acc += &steps[t];
            a[t] = acc.clone();
        }
        let mut y: Vec<Rational> = Vec::new();
        for t in 0..31 {
            let sum = (0..t).fold(Rational::zero(), |acc, j| acc + &f[j] * &y[j]);
            y.push(&b[t] + &a[t] * sum - &slack[t]);
        }
        let bound = gronwall_bound(&b, &a, &f, GronwallProduct::OuterIndex).unwrap();
        for t in 0..31 {
            prop_assert!(y[t] <= bound[t], "t={}", t);
        }
    }
}

/// `b(t) := y(t) + margin(t) - a(t) Σ_{j<t} f(j) y(j)`, so `y` satisfies the
/// Gronwall hypothesis by construction.
fn hypothesis_data(y: &[Rational], a: &[Rational], f: &[Rational], margin: &[Rational]) -> Vec<Rational> {
    (0..y.len())
        .map(|t| {
            let sum = (0..t).fold(Rational::zero(), |acc, j| acc + &f[j] * &y[j]);
            &y[t] + &margin[t] - &a[t] * sum
        })
        .collect()
}
