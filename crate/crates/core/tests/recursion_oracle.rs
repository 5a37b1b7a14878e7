use proptest::prelude::*;
use wk_core::oracle::{a_gn_oracle, closed_a0n, closed_a1n, one_point, series_reference, virasoro_tau, Series};
use wk_core::pengine::d_rn;
use wk_core::Basis;

#[test]
fn recursion_reproduces_closed_forms() {
    for n in 3..=7usize {
        assert_eq!(a_gn_oracle(0, n).unwrap(), closed_a0n(n).unwrap().to_basis(Basis::Monomial).unwrap(), "n={n}");
    }
    for n in 1..=6usize {
        assert_eq!(a_gn_oracle(1, n).unwrap(), closed_a1n(n).unwrap().to_basis(Basis::Monomial).unwrap(), "n={n}");
    }
}

#[test]
fn recursion_reproduces_generating_series() {
    for (which, n, g_max) in [(Series::A1, 1, 10), (Series::A2, 2, 5), (Series::A3, 3, 4)] {
        let pieces = series_reference(which, d_rn(g_max, n)).unwrap();
        assert_eq!(pieces.len() as u32, g_max + if n == 3 { 1 } else { 0 });
        for (g, a) in pieces {
            assert_eq!(a_gn_oracle(g, n).unwrap(), a, "g={g} n={n}");
        }
    }
    for g in 1..=10 {
        assert_eq!(virasoro_tau(g, &[3 * g - 2]).unwrap(), one_point(g).unwrap());
    }
}

proptest! {
    #[test]
    fn recursion_is_symmetric(g in 0u32..=3, mut d in proptest::collection::vec(0u32..=6, 1..=5), seed in any::<u64>()) {
        prop_assume!(2 * g as i64 - 2 + d.len() as i64 > 0);
        let v = virasoro_tau(g, &d).unwrap();
        let k = d.len();
        d.rotate_left((seed as usize) % k);
        d.swap(0, (seed as usize / 7) % k);
        prop_assert_eq!(virasoro_tau(g, &d).unwrap(), v);
    }
}
