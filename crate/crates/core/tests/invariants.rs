use num_bigint::BigUint;
use num_complex::Complex64;
use proptest::prelude::*;
use qwalk::bvp::{q00_simple, q10_simple};
use qwalk::enumerate::{all_series, count, SeriesLabel};
use qwalk::group::{group_order, GroupOrderResult};
use qwalk::kernel::{eval_small, KernelPolys};
use qwalk::singular::classify_first_singularities;
use qwalk::StepSet;

const N: usize = 9;

fn step_set() -> impl Strategy<Value = StepSet> {
    (1u8..=255).prop_map(|m| StepSet::from_mask(m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn count_table_support_bound_and_recurrence(s in step_set()) {
        let t = count(&s, N).unwrap();
        prop_assert_eq!(t.q(0, 0, 0), BigUint::from(1u8));
        let size = BigUint::from(s.cardinality());
        for n in 0..=N {
            let bound = size.pow(n as u32);
            for i in 0..=N {
                for j in 0..=N {
                    let v = t.q(i, j, n);
                    if i.max(j) > n {
                        prop_assert_eq!(&v, &BigUint::from(0u8));
                    }
                    prop_assert!(v <= bound);
                    if n > 0 {
                        let mut expected = BigUint::from(0u8);
                        for (a, b) in s.steps() {
                            let (pi, pj) = (i as i64 - a as i64, j as i64 - b as i64);
                            if pi >= 0 && pj >= 0 {
                                expected += t.q(pi as usize, pj as usize, n - 1);
                            }
                        }
                        prop_assert_eq!(v, expected);
                    }
                }
            }
        }
    }

    #[test]
    fn series_are_layer_sums(s in step_set()) {
        let t = count(&s, N).unwrap();
        let set = all_series(&s, N).unwrap();
        for n in 0..=N {
            let mut x_axis = BigUint::from(0u8);
            let mut y_axis = BigUint::from(0u8);
            let mut total = BigUint::from(0u8);
            for i in 0..=n {
                x_axis += t.q(i, 0, n);
                y_axis += t.q(0, i, n);
                for j in 0..=n {
                    total += t.q(i, j, n);
                }
            }
            prop_assert_eq!(&set.get(SeriesLabel::Q00).coeffs[n], &t.q(0, 0, n));
            prop_assert_eq!(&set.get(SeriesLabel::Q10).coeffs[n], &x_axis);
            prop_assert_eq!(&set.get(SeriesLabel::Q01).coeffs[n], &y_axis);
            prop_assert_eq!(&set.get(SeriesLabel::Q11).coeffs[n], &total);
        }
    }

    #[test]
    fn kernel_polys_sum_to_cardinality(s in step_set()) {
        let k = KernelPolys::new(&s);
        let one = Complex64::new(1.0, 0.0);
        let plain = eval_small(&k.a, one) + eval_small(&k.b, one) + eval_small(&k.c, one);
        let tilde = eval_small(&k.a_tilde, one) + eval_small(&k.b_tilde, one) + eval_small(&k.c_tilde, one);
        prop_assert_eq!(plain.re, s.cardinality() as f64);
        prop_assert_eq!(tilde.re, s.cardinality() as f64);
    }

    #[test]
    fn drift_bounds(s in step_set()) {
        let d = s.drift();
        prop_assert!(d.mx.abs() <= 3 && d.my.abs() <= 3 && d.covariance.abs() <= 12);
        let steps = s.steps();
        let mx: i32 = steps.iter().map(|&(i, _)| i as i32).sum();
        let my: i32 = steps.iter().map(|&(_, j)| j as i32).sum();
        let sxy: i32 = steps.iter().map(|&(i, j)| i as i32 * j as i32).sum();
        prop_assert_eq!((d.mx, d.my, d.covariance), (mx, my, sxy - mx * my));
    }

    #[test]
    fn finite_group_orders_are_even(s in step_set()) {
        if let Ok(GroupOrderResult::Finite { order }) = group_order(&s, 8, 0) {
            prop_assert!(order % 2 == 0 && order >= 4);
        }
    }

    #[test]
    fn classification_ranges(s in step_set()) {
        prop_assume!(s.is_analyzable());
        let r = classify_first_singularities(&s).unwrap();
        for fs in [&r.fs_q10, &r.fs_q01, &r.fs_q11] {
            prop_assert!(fs.value >= r.inv_s - 1e-12 && fs.value <= r.z_g + 1e-12);
        }
        prop_assert!(r.critical_point.alpha > 0.0 && r.critical_point.beta > 0.0);
    }

    #[test]
    fn simple_walk_values_are_positive_and_increasing(z in 0.001f64..0.249) {
        let a = q00_simple(z).unwrap().value;
        let b = q00_simple(z * 0.9).unwrap().value;
        prop_assert!(a > 0.0 && a >= b);
        let c = q10_simple(z).unwrap().value;
        prop_assert!(c >= a);
    }
}

#[test]
fn cli_runs_are_reproducible() {
    let run = |args: &[&str]| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = qwalk::cli::run(std::iter::once("qwalk").chain(args.iter().copied()), &mut out, &mut err);
        (code, out, err)
    };
    for args in [
        &["group", "--preset", "gessel", "--seed", "7"][..],
        &["check", "--preset", "gouyou-beauchamps", "--n", "80", "--seed", "3"][..],
        &["kernel", "--preset", "kreweras", "--z", "0.25", "trace", "--points", "32"][..],
    ] {
        assert_eq!(run(args), run(args), "{args:?}");
    }
}
