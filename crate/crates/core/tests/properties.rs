use jcurve_core::chern::{enumerate_characteristic_with, EnumOptions};
use jcurve_core::lattice::Block;
use jcurve_core::{Execution, GramLattice, LatticeVector};
use proptest::prelude::*;

fn block() -> impl Strategy<Value = Block> {
    prop_oneof![Just(Block::Plus1), Just(Block::Minus1), Just(Block::H), Just(Block::E8), Just(Block::MinusE8)]
}

fn lattice() -> impl Strategy<Value = GramLattice> {
    prop::collection::vec(block(), 1..5).prop_map(|bs| GramLattice::from_blocks(&bs).unwrap())
}

fn lattice_and_vector() -> impl Strategy<Value = (GramLattice, LatticeVector)> {
    lattice().prop_flat_map(|l| {
        let n = l.rank();
        (Just(l), prop::collection::vec(-6i64..=6, n).prop_map(LatticeVector::new))
    })
}

/// Elementary operations: (kind, i, j) with kind 0 = add column, 1 = swap, 2 = negate.
fn unimodular(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0u8..3, 0..n, 0..n, prop_oneof![Just(-1i64), Just(1)]), 0..40).prop_map(move |ops| {
        let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for (kind, i, j, a) in ops {
            match kind {
                0 if i != j => u.iter_mut().for_each(|r| r[j] += a * r[i]),
                1 => u.iter_mut().for_each(|r| r.swap(i, j)),
                _ => u.iter_mut().for_each(|r| r[i] = -r[i]),
            }
        }
        u
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn k_invariant_does_not_depend_on_c(
        (l, gamma) in lattice_and_vector(),
        shifts in prop::collection::vec(prop::collection::vec(-4i64..=4, 0..=24), 20),
    ) {
        let c = l.find_characteristic();
        let k0 = l.k_invariant_with(&c, &gamma).unwrap();
        for y in shifts {
            let y: Vec<i64> = y.into_iter().chain(std::iter::repeat(0)).take(l.rank()).collect();
            let c2 = &c + &LatticeVector::new(y).scaled(2);
            prop_assert!(l.is_characteristic(&c2).unwrap());
            prop_assert_eq!(l.k_invariant_with(&c2, &gamma).unwrap(), k0);
        }
    }

    #[test]
    fn adjunction_is_integral((l, gamma) in lattice_and_vector(), y in prop::collection::vec(-3i64..=3, 32)) {
        let y: Vec<i64> = y.into_iter().take(l.rank()).collect();
        let c = &l.find_characteristic() + &LatticeVector::new(y).scaled(2);
        let g = l.adjunction_genus(&c, &gamma).unwrap();
        prop_assert_eq!(2 * (g - 1), l.norm(&gamma).unwrap() - l.pair(&c, &gamma).unwrap());
    }

    #[test]
    fn divisibility_is_homogeneous(v in prop::collection::vec(-50i64..=50, 0..10), k in -20i64..=20) {
        let v = LatticeVector::new(v);
        prop_assert_eq!(v.scaled(k).divisibility(), k.unsigned_abs() * v.divisibility());
    }

    #[test]
    fn signature_and_parity_survive_basis_change(
        (l, u) in lattice().prop_flat_map(|l| { let n = l.rank(); (Just(l), unimodular(n)) })
    ) {
        let moved = GramLattice::new(l.transform(&u).unwrap()).unwrap();
        prop_assert_eq!(moved.signature(), l.signature());
        prop_assert_eq!(moved.parity(), l.parity());
        prop_assert_eq!(moved.determinant(), l.determinant());
    }

    #[test]
    fn block_determinant_is_a_sign(bs in prop::collection::vec(block(), 0..4)) {
        let l = GramLattice::from_blocks(&bs).unwrap();
        let odd_negatives = l.signature().b_minus % 2 == 1;
        prop_assert_eq!(l.determinant(), if odd_negatives { -1 } else { 1 });
    }

    #[test]
    fn find_characteristic_is_characteristic(l in lattice()) {
        let c = l.find_characteristic();
        prop_assert!(l.is_characteristic(&c).unwrap());
        for i in 0..l.rank() {
            let e = LatticeVector::basis(l.rank(), i);
            prop_assert_eq!((l.pair(&c, &e).unwrap() - l.norm(&e).unwrap()).rem_euclid(2), 0);
        }
    }

    #[test]
    fn enumeration_ignores_partitioning(
        bs in prop::collection::vec(prop_oneof![Just(Block::Plus1), Just(Block::Minus1), Just(Block::H)], 1..3),
        shift in -2i64..=2,
        chunks in 1usize..200,
    ) {
        let l = GramLattice::from_blocks(&bs).unwrap();
        let h = l.signature().tau() + 8 * shift;
        let seq = EnumOptions { chunks: 1, execution: Execution::Sequential, ..Default::default() };
        let par = EnumOptions { chunks, execution: Execution::Parallel, ..Default::default() };
        let a = enumerate_characteristic_with(&l, h, 6, &seq);
        let b = enumerate_characteristic_with(&l, h, 6, &par);
        prop_assert_eq!(a, b);
    }
}
