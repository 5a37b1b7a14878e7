use proptest::prelude::*;
use wk_core::arith::{frac, int};
use wk_core::pengine::{
    allowed_partitions, bootstrap_p, component, cyclic_trace_sum, direct_p, elementary_coefficients, r_max,
    recursion_remainder, trace_shift_invariance,
};
use wk_core::{Basis, DTable, Rat, Route, SymPoly};

#[test]
fn direct_and_bootstrap_routes_agree() {
    for n in 3..=4usize {
        let p = direct_p(n).unwrap();
        let mut sum = SymPoly::zero(n, Basis::Schur);
        for r in 0..=r_max(n) {
            let b = bootstrap_p(r, n).unwrap();
            assert_eq!(component(&p, r), b, "n={n} r={r}");
            sum = sum.add(&b).unwrap();
        }
        assert_eq!(p, sum, "n={n}");
    }
}

#[test]
#[ignore = "extended suite: runs the n = 5 direct route"]
fn direct_and_bootstrap_routes_agree_at_five() {
    let p = direct_p(5).unwrap();
    for r in 0..=r_max(5) {
        assert_eq!(component(&p, r), bootstrap_p(r, 5).unwrap(), "r={r}");
    }
}

#[test]
fn differences_are_divisible_by_top_elementary() {
    let mut t = DTable::new();
    for n in 3..=5usize {
        t.ensure(n, r_max(n), Route::Auto).unwrap();
    }
    for n in 4..=5usize {
        for r in 0..=r_max(n) {
            let p = t.p_rn(r, n).unwrap();
            let prev = t.p_rn(r, n - 1).unwrap_or_else(|| SymPoly::zero(n - 1, Basis::Schur));
            let q = recursion_remainder(&p, &prev).unwrap();
            let rebuilt = q.mul_en_power(1).unwrap();
            let mut e1_prev = SymPoly::zero(n, Basis::Elementary);
            for (nu, c) in prev.promote(n).unwrap().terms() {
                let mut parts = nu.parts().to_vec();
                parts.push(1);
                e1_prev.add_term(wk_core::Partition::from_unsorted(parts), c.clone()).unwrap();
            }
            assert_eq!(rebuilt.add(&e1_prev).unwrap(), p, "n={n} r={r}");
        }
    }
}

#[test]
fn elementary_coefficients_respect_length_bound() {
    let mut t = DTable::new();
    for n in 3..=5usize {
        t.ensure(n, r_max(n), Route::Auto).unwrap();
        for r in 0..=r_max(n) {
            let c = elementary_coefficients(&t.p_rn(r, n).unwrap()).unwrap();
            let allowed = allowed_partitions(r, n);
            for nu in c.keys() {
                assert!(nu.len() as u32 <= r, "n={n} r={r} ν={nu}");
                assert!(nu.len() as u32 != r || allowed.contains(nu), "n={n} r={r} ν={nu}");
            }
        }
    }
}

fn matrix() -> impl Strategy<Value = [[Rat; 2]; 2]> {
    proptest::array::uniform4((-6i64..=6, 1i64..=4)).prop_map(|e| {
        let f = |(p, q): (i64, i64)| frac(p, q);
        [[f(e[0]), f(e[1])], [f(e[2]), f(e[3])]]
    })
}

fn instance() -> impl Strategy<Value = (Vec<[[Rat; 2]; 2]>, Vec<Rat>, Vec<Rat>)> {
    (3usize..=5).prop_flat_map(|n| {
        (
            proptest::collection::vec(matrix(), n),
            proptest::sample::subsequence((-20i64..=20).collect::<Vec<_>>(), n).prop_shuffle(),
            proptest::collection::vec((-5i64..=5, 1i64..=3), n),
        )
            .prop_map(|(ms, xs, shifts)| {
                (ms, xs.into_iter().map(int).collect(), shifts.into_iter().map(|(p, q)| frac(p, q)).collect())
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cyclic_trace_sum_ignores_identity_shifts((ms, xs, shifts) in instance()) {
        prop_assert!(trace_shift_invariance(&ms, &xs, &shifts).unwrap());
    }

    #[test]
    fn cyclic_trace_sum_is_relabelling_invariant((ms, xs, _) in instance()) {
        let v = cyclic_trace_sum(&ms, &xs).unwrap();
        let mut ms2 = ms.clone();
        let mut xs2 = xs.clone();
        ms2.rotate_left(1);
        xs2.rotate_left(1);
        prop_assert_eq!(cyclic_trace_sum(&ms2, &xs2).unwrap(), v);
    }
}
