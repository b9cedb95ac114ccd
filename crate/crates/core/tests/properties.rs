use std::sync::Arc;

use proptest::prelude::*;
use qpoly::delsarte::random_code;
use qpoly::flags::{flag_polymatroid, random_flag};
use qpoly::lattice::DEFAULT_MAX_MEMBERS;
use qpoly::polymatroid::{intersection_demipolymatroid, intersection_demipolymatroid_dual, sum_polymatroid};
use qpoly::{enumerate_subspaces, h_profiles, wei_duality_report, DelsarteCode, FieldSpec, PolymatroidTable, SubspaceLattice};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SHAPES: [(usize, usize); 5] = [(2, 2), (3, 2), (2, 3), (3, 3), (2, 4)];

fn gf2() -> FieldSpec {
    FieldSpec::prime(2).unwrap()
}

fn lattice(n: usize) -> Arc<SubspaceLattice> {
    enumerate_subspaces(&gf2(), n, DEFAULT_MAX_MEMBERS).unwrap()
}

fn code(shape: usize, k: usize, seed: u64) -> DelsarteCode {
    let (m, n) = SHAPES[shape % SHAPES.len()];
    let k = 1 + k % (m * n - 1);
    random_code(&gf2(), m, n, k, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

/// A code C2 ⊆ C1 obtained by keeping a prefix of C1's generators.
fn nested(c1: &DelsarteCode, keep: usize) -> DelsarteCode {
    let gens = c1.generators();
    let keep = keep % (gens.len() + 1);
    DelsarteCode::span(c1.field(), c1.m(), c1.n(), &gens[..keep]).unwrap()
}

fn wei_holds(t: &PolymatroidTable) -> Result<(), TestCaseError> {
    let w = wei_duality_report(t).unwrap();
    prop_assert!(w.partition_ok(), "partition {:?}", w.residues);
    prop_assert!(w.partialwei_ok(), "partialWei {:?}", w.partialwei_violation);
    prop_assert!(w.monotone_gaps_ok());
    let h = h_profiles(t);
    prop_assert_eq!(h.identity_violation(t.m(), t.rank()), None);
    prop_assert_eq!(h.increment_violation(t.m()), None);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nullity_and_conullity_are_monotone(shape in 0usize..5, k in 0usize..16, seed in any::<u64>()) {
        let c = code(shape, k, seed);
        let lat = lattice(c.n());
        let t = c.to_polymatroid(&lat).unwrap();
        for x in 0..lat.len() {
            for y in 0..lat.len() {
                if lat.leq(x, y) {
                    prop_assert!(t.nullity_at(x) <= t.nullity_at(y));
                    prop_assert!(t.conullity_at(x) <= t.conullity_at(y));
                }
            }
        }
    }

    #[test]
    fn nested_codes_compare_pointwise(shape in 0usize..5, k in 0usize..16, keep in 0usize..16, seed in any::<u64>()) {
        let c1 = code(shape, k, seed);
        let c2 = nested(&c1, keep);
        prop_assert!(c2.is_subcode_of(&c1).unwrap());
        let lat = lattice(c1.n());
        let (t1, t2) = (c1.to_polymatroid(&lat).unwrap(), c2.to_polymatroid(&lat).unwrap());
        let gap = (c1.dim() - c2.dim()) as i64;
        for x in 0..lat.len() {
            prop_assert!(t2.value(x) <= t1.value(x));
            prop_assert!(t1.value(x) - t2.value(x) <= gap);
            prop_assert!(t2.conullity_at(x) <= t1.conullity_at(x));
            prop_assert!(t1.conullity_at(x) - t2.conullity_at(x) <= gap);
        }
    }

    #[test]
    fn flag_rank_is_bounded(shape in 0usize..5, top in 0usize..16, cut in 0usize..16, seed in any::<u64>()) {
        let (m, n) = SHAPES[shape];
        let top = 2 + top % (m * n - 2);
        let mut dims = vec![top, cut % top];
        if cut % 3 == 0 && dims[1] > 0 {
            dims.push(cut % dims[1]);
        }
        let flag = random_flag(&gf2(), m, n, &dims, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let lat = lattice(n);
        let t = flag_polymatroid(&flag, &lat).unwrap();
        let top_table = flag.codes()[0].to_polymatroid(&lat).unwrap();
        for x in 0..lat.len() {
            let v = t.value(x);
            prop_assert!(v >= 0);
            prop_assert!(v <= top_table.value(x));
            prop_assert!(v <= (m * lat.dim(x)) as i64);
        }
        wei_holds(&t)?;
    }

    #[test]
    fn wei_holds_for_codes_and_duals(shape in 0usize..5, k in 0usize..16, seed in any::<u64>()) {
        let c = code(shape, k, seed);
        let lat = lattice(c.n());
        wei_holds(&c.to_polymatroid(&lat).unwrap())?;
        wei_holds(&c.trace_dual().to_polymatroid(&lat).unwrap())?;
        wei_holds(&c.transpose_code().to_polymatroid(&lattice(c.m())).unwrap())?;
    }

    #[test]
    fn wei_holds_for_constructed_tables(n in 1usize..5, picks in prop::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let lat = lattice(n);
        let blocks: Vec<_> = picks.iter().map(|i| lat.member(i.index(lat.len())).clone()).collect();
        let m = blocks.len();
        let sum = sum_polymatroid(lat.clone(), &blocks).unwrap();
        prop_assert_eq!(sum.check_axioms(usize::MAX).unwrap().verdict, qpoly::Verdict::Polymatroid);
        wei_holds(&sum)?;
        let ones = vec![1; m];
        let inter = intersection_demipolymatroid(lat.clone(), &blocks, &ones, m).unwrap();
        let dual = intersection_demipolymatroid_dual(lat.clone(), &blocks, &ones, m).unwrap();
        prop_assert_eq!(inter.dual().first_difference(&dual), None);
        wei_holds(&inter)?;
        wei_holds(&PolymatroidTable::uniform(lat.clone(), picks[0].index(n + 1), m).unwrap())?;
    }

    #[test]
    fn double_dual_is_identity(shape in 0usize..5, k in 0usize..16, seed in any::<u64>()) {
        let c = code(shape, k, seed);
        prop_assert_eq!(c.trace_dual().trace_dual(), c.clone());
        prop_assert_eq!(c.transpose_code().transpose_code(), c.clone());
        let t = c.to_polymatroid(&lattice(c.n())).unwrap();
        prop_assert_eq!(t.dual().dual().first_difference(&t), None);
    }
}
