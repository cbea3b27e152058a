mod common;

use common::{all_relations, dom, preserves};
use omegaclone::finite::{
    cut_of_intersection, generate_clone, geiger_roundtrip, inv, is_closed_under, is_composition_closed, is_polymorphism,
    pol, CloneCaps, FinOp, FinRel,
};
use omegaclone::Elem;
use proptest::prelude::*;
use rayon::prelude::*;

fn op(size: usize, max_arity: usize) -> impl Strategy<Value = FinOp> {
    (0..=max_arity).prop_flat_map(move |k| {
        proptest::collection::vec(0..size as Elem, size.pow(k as u32))
            .prop_map(move |t| FinOp::new(dom(size), k, t).unwrap())
    })
}

fn rel(size: usize, max_arity: usize) -> impl Strategy<Value = FinRel> {
    (1..=max_arity).prop_flat_map(move |n| {
        proptest::collection::vec(any::<bool>(), size.pow(n as u32)).prop_map(move |bits| {
            let tuples = common::all_tuples(size, n);
            FinRel::from_tuples(dom(size), n, tuples.into_iter().zip(bits).filter(|(_, b)| *b).map(|(t, _)| t)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_matches_pointwise(
        f in op(3, 2).prop_filter("positive arity", |f| f.arity() > 0),
        seeds in proptest::collection::vec(proptest::collection::vec(0..3u8, 9), 2),
    ) {
        let gs: Vec<FinOp> = (0..f.arity()).map(|i| FinOp::new(dom(3), 2, seeds[i % 2].iter().map(|&v| (v + i as u8) % 3).collect()).unwrap()).collect();
        let h = f.compose(&gs, 2).unwrap();
        for x in dom(3).tuples(2) {
            let inner: Vec<Elem> = gs.iter().map(|g| g.eval(&x)).collect();
            prop_assert_eq!(h.eval(&x), f.eval(&inner));
        }
    }

    #[test]
    fn saturation_is_a_fixed_point(gens in proptest::collection::vec(op(2, 3), 0..3)) {
        let clone = generate_clone(dom(2), &gens, 2).unwrap();
        prop_assert!(is_composition_closed(&clone));
        prop_assert!(is_closed_under(&clone, &gens));
        let members: Vec<FinOp> = clone.iter().cloned().collect();
        prop_assert_eq!(generate_clone(dom(2), &members, 2).unwrap(), clone);
    }

    #[test]
    fn polymorphism_matches_definition(f in op(3, 2), s in rel(3, 2)) {
        prop_assert_eq!(is_polymorphism(&f, &s), preserves(3, f.arity(), f.table(), &s));
    }

    #[test]
    fn galois_extensive(gens in proptest::collection::vec(op(2, 2), 0..3), rels in proptest::collection::vec(rel(2, 2), 0..3)) {
        let clone = generate_clone(dom(2), &gens, 2).unwrap();
        let members: Vec<FinOp> = clone.iter().cloned().collect();
        let invs: Vec<FinRel> = inv(dom(2), &members, 2).unwrap().iter().cloned().collect();
        let back = pol(dom(2), &invs, 2).unwrap();
        prop_assert!(clone.missing_from(&back).next().is_none());

        let pols: Vec<FinOp> = pol(dom(2), &rels, 2).unwrap().iter().cloned().collect();
        let back = inv(dom(2), &pols, 2).unwrap();
        for s in &rels {
            prop_assert!(back.contains(s.arity(), s));
        }
    }

    #[test]
    fn galois_antitone(a in proptest::collection::vec(rel(2, 2), 0..3), extra in rel(2, 2), f in op(2, 2)) {
        let small = pol(dom(2), &a, 2).unwrap();
        let mut more = a.clone();
        more.push(extra);
        let big = pol(dom(2), &more, 2).unwrap();
        prop_assert!(big.missing_from(&small).next().is_none());

        let ops: Vec<FinOp> = small.iter().take(4).cloned().collect();
        let fewer = inv(dom(2), &ops, 2).unwrap();
        let mut ops_more = ops.clone();
        ops_more.push(f);
        let smaller = inv(dom(2), &ops_more, 2).unwrap();
        prop_assert!(smaller.missing_from(&fewer).next().is_none());
    }

    #[test]
    fn cut_of_intersection_below_padded_cuts(family in proptest::collection::vec(rel(3, 2), 1..3), n in 0usize..3) {
        let cut = cut_of_intersection(dom(3), &family, n).unwrap();
        for s in &family {
            let padded = if s.arity() >= n { s.project_prefix(n).unwrap() } else { s.pad(n).unwrap() };
            prop_assert!(cut.is_subset(&padded));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn geiger_witnesses_on_three_elements(ops in proptest::collection::vec(op(3, 2), 1..=2)) {
        let report = geiger_roundtrip(dom(3), &ops, CloneCaps::new(2, 3)).unwrap();
        if let Some(w) = &report.witness {
            prop_assert!(!report.clone.contains(w.arity(), w));
            prop_assert!(in_pol_inv_by_matrices(&report.clone.slice(w.arity()), w, 3), "{}", w);
        }
    }
}

/// `f ∈ Pol(Inv_{<=n} F)` via `f[m] ∈ {g[m] : g ∈ F^(k)}` for every
/// `n`-row matrix `m`, rows enumerated directly.
fn in_pol_inv_by_matrices(slice: &[FinOp], f: &FinOp, n: usize) -> bool {
    let size = f.domain().size();
    let rows = common::all_tuples(size, f.arity());
    common::all_tuples(rows.len(), n).iter().all(|m| {
        let image: Vec<Elem> = m.iter().map(|&r| f.eval(&rows[r as usize])).collect();
        slice.iter().any(|g| m.iter().map(|&r| g.eval(&rows[r as usize])).eq(image.iter().copied()))
    })
}

/// With relations of arity at most 3 the round trip is exact on every
/// two-generator Boolean clone except those containing an affine binary
/// operation, which need the 4-ary relation `x + y + z + w = 0`.
#[test]
fn geiger_on_every_two_generator_boolean_clone() {
    let ops: Vec<FinOp> = (0..=2)
        .flat_map(|k| {
            let cells = 1usize << k;
            (0..1usize << cells).map(move |t| FinOp::new(dom(2), k, (0..cells).map(|i| (t >> i & 1) as Elem).collect()).unwrap())
        })
        .collect();
    let pairs: Vec<(&FinOp, &FinOp)> = ops.iter().enumerate().flat_map(|(i, a)| ops[i..].iter().map(move |b| (a, b))).collect();
    let xor = FinOp::new(dom(2), 2, vec![0, 1, 1, 0]).unwrap();
    let xnor = FinOp::new(dom(2), 2, vec![1, 0, 0, 1]).unwrap();
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|(a, b)| {
            let report = geiger_roundtrip(dom(2), &[(*a).clone(), (*b).clone()], CloneCaps::new(2, 3)).unwrap();
            let w = report.witness.as_ref()?;
            let affine = report.clone.contains(2, &xor) || report.clone.contains(2, &xnor);
            let genuine = in_pol_inv_by_matrices(report.clone.slice(w.arity()), w, 3);
            (!affine || !genuine).then(|| format!("<{a}, {b}> gives {w}"))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn unary_invariants_of_negation() {
    let not = FinOp::new(dom(2), 1, vec![1, 0]).unwrap();
    let expected: Vec<FinRel> = all_relations(2, 1).into_iter().filter(|s| preserves(2, 1, not.table(), s)).collect();
    assert_eq!(expected.len(), 2);
    assert_eq!(inv(dom(2), &[not], 1).unwrap().slice(1), expected.as_slice());
}
