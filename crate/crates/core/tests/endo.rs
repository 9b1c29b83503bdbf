use morphcat::endo::*;
use morphcat::matrix::ExactMatrix;
use morphcat::morph::*;
use morphcat::{Error, FPModule, Ring};
use num_bigint::BigInt;
use proptest::prelude::*;

fn obj(ring: &Ring, rows: usize, cols: usize, vals: &[i64]) -> MorphObject {
    MorphObject::free_i64(ring, rows, cols, vals)
}

fn example(ring: &Ring) -> MorphObject {
    obj(ring, 2, 2, &[1, 0, 0, 0])
}

fn pair(ring: &Ring, u: i64, v: i64, w: i64, x: i64, y: i64) -> MorphMap {
    MorphMap {
        u0: ExactMatrix::from_i64(ring, &[&[u, 0], &[v, w]]),
        u1: ExactMatrix::from_i64(ring, &[&[u, x], &[0, y]]),
    }
}

fn field_corpus(ring: &Ring, max: usize) -> Vec<MorphObject> {
    let p = match ring {
        Ring::PrimeField(p) => *p as u32,
        _ => unreachable!(),
    };
    let mut out = Vec::new();
    for r in 0..=max {
        for c in 0..=max {
            for x in 0..p.pow((r * c) as u32) {
                let vals: Vec<i64> = (0..r * c).map(|i| ((x / p.pow(i as u32)) % p) as i64).collect();
                out.push(obj(ring, r, c, &vals));
            }
        }
    }
    out
}

fn torsion_corpus() -> Vec<MorphObject> {
    let z4 = Ring::residue(4).unwrap();
    let modules: Vec<FPModule> = [vec![], vec![2], vec![4], vec![2, 4]]
        .iter()
        .map(|d| FPModule::from_divisors(&z4, &d.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()))
        .collect();
    let mut out = Vec::new();
    for m0 in &modules {
        for m1 in &modules {
            let zero = MorphObject::new(m0.clone(), m1.clone(), ExactMatrix::zeros(&z4, m1.ngens(), m0.ngens())).unwrap();
            let hg = morphcat::module::hom_group(m0, m1);
            for h in hg.generators() {
                out.push(MorphObject::new(m0.clone(), m1.clone(), h.matrix.clone()).unwrap());
            }
            out.push(zero);
        }
    }
    out
}

#[test]
fn example_object_has_type_three() {
    for p in [2, 3, 5] {
        let ring = Ring::PrimeField(p);
        let e = endo_algebra(&example(&ring)).unwrap();
        let c = classify(&e);
        assert_eq!(c.dim, 5);
        assert_eq!(c.radical_dim, 2);
        assert_eq!(c.semisimple_dim, 3);
        assert_eq!(c.num_blocks, 3);
        assert_eq!(c.block_division_flags, vec![Some(true); 3]);
        assert_eq!(c.type_n, Some(3));
        assert_eq!(c.is_local, Some(false));
        assert_eq!(c.is_finite_type, Some(true));
        assert!(c.is_semilocal && c.certified);
        assert_eq!((c.e0_dim, c.e1_dim), (3, 3));
        for u in e.basis.iter().map(|b| e.from_normal(b)) {
            assert!(u.is_valid(&e.object, &e.object));
        }
        assert!(radical_membership(&e, &pair(&ring, 0, 1, 0, 0, 0)).unwrap());
        assert!(radical_membership(&e, &pair(&ring, 0, 0, 0, 1, 0)).unwrap());
        assert!(!radical_membership(&e, &pair(&ring, 1, 0, 1, 0, 1)).unwrap());
        assert!(!radical_membership(&e, &pair(&ring, 0, 0, 1, 0, 0)).unwrap());
        assert!(matches!(radical_membership(&e, &pair(&ring, 0, 0, 0, 0, 0).add(&MorphMap {
            u0: ExactMatrix::from_i64(&ring, &[&[0, 1], &[0, 0]]),
            u1: ExactMatrix::zeros(&ring, 2, 2),
        })), Err(Error::InvalidAction(_))));
    }
}

#[test]
fn example_maximal_ideals_match_the_displayed_ideals() {
    let f2 = Ring::PrimeField(2);
    let e = endo_algebra(&example(&f2)).unwrap();
    let st = e.algebra.analyze();
    let mut found: Vec<Vec<bool>> = (0..3).map(|_| Vec::new()).collect();
    let mut displayed: Vec<Vec<bool>> = (0..3).map(|_| Vec::new()).collect();
    for bits in 0..32i64 {
        let [u, v, w, x, y] = [0, 1, 2, 3, 4].map(|i| (bits >> i) & 1);
        let c = e.coords(&pair(&f2, u, v, w, x, y)).expect("element of E_M");
        for (j, f) in found.iter_mut().enumerate() {
            f.push(st.in_maximal_ideal(j, &c));
        }
        displayed[0].push(u == 0);
        displayed[1].push(w == 0);
        displayed[2].push(y == 0);
    }
    assert_eq!(found[0].len(), 32);
    found.sort();
    displayed.sort();
    assert_eq!(found, displayed);
}

#[test]
fn radical_inclusion_is_strict_on_the_example() {
    for p in [2, 3] {
        let ring = Ring::PrimeField(p);
        let e = endo_algebra(&example(&ring)).unwrap();
        // J(M_2(k)) = 0, so E_M meets J(End M0) x J(End M1) only in 0.
        let full = MatrixAlgebra::full(&ring, 2).unwrap();
        assert!(full.radical().is_empty());
        assert_eq!(full.analyze().blocks.len(), 1);
        assert_eq!(full.analyze().blocks[0].division, Some(false));
        assert_eq!(e.radical().len(), 2);
    }
}

#[test]
fn small_examples() {
    for ring in [Ring::PrimeField(2), Ring::PrimeField(7), Ring::Rational] {
        let id = obj(&ring, 1, 1, &[1]);
        let c = classify(&endo_algebra(&id).unwrap());
        assert_eq!((c.dim, c.radical_dim, c.type_n, c.is_local), (1, 0, Some(1), Some(true)));
        assert_eq!(c.maximal_ideals, vec!["I_Md=I_Mc=I_0=I_1=K_0=K_1".to_string()]);

        let zero = obj(&ring, 1, 1, &[0]);
        let c = classify(&endo_algebra(&zero).unwrap());
        assert_eq!((c.dim, c.radical_dim, c.type_n, c.is_local), (2, 0, Some(2), Some(false)));
        let mut tags = c.maximal_ideals.clone();
        tags.sort();
        assert_eq!(tags, vec!["I_Mc=I_1=K_1".to_string(), "I_Md=I_0=K_0".to_string()]);

        // k -> k^2, x -> (x, 0): E_M is the upper-triangular algebra.
        let tri = obj(&ring, 2, 1, &[1, 0]);
        let c = classify(&endo_algebra(&tri).unwrap());
        assert_eq!((c.dim, c.radical_dim, c.num_blocks, c.type_n), (3, 1, 2, Some(2)));
        assert_eq!(c.maximal_ideals, vec!["m1".to_string(), "m2".to_string()]);

        let c = classify(&endo_algebra(&obj(&ring, 2, 2, &[1, 0, 0, 1])).unwrap());
        assert_eq!((c.dim, c.radical_dim, c.num_blocks), (4, 0, 1));
        assert_eq!((c.type_n, c.is_local, c.is_finite_type), (None, Some(false), Some(false)));
    }
}

#[test]
fn trivial_predicates() {
    let f3 = Ring::PrimeField(3);
    let id = obj(&f3, 1, 1, &[1]);
    let preds = ideal_predicates(&id).unwrap();
    let fe = finite_endo(&id, FINITE_LIMIT).unwrap();
    for p in preds {
        let members: Vec<&MorphMap> = fe.elements.iter().filter(|u| p.contains(u, &id)).collect();
        assert_eq!(members.len(), 1);
        assert!(members[0].is_zero(&id));
    }
    assert!(matches!(ideal_predicates(&example(&f3)), Err(Error::PreconditionViolated(_))));
    assert!(matches!(endo_algebra(&obj(&Ring::residue(4).unwrap(), 1, 1, &[1])), Err(Error::UnsupportedRing(_))));
}

#[test]
fn reduction_mod_two() {
    let z4 = Ring::residue(4).unwrap();
    let m = MorphObject::new(FPModule::cyclic(&z4, 4), FPModule::cyclic(&z4, 2), ExactMatrix::from_i64(&z4, &[&[1]])).unwrap();
    let fe = finite_endo(&m, FINITE_LIMIT).unwrap();
    assert_eq!(fe.order(), 4);
    assert!(fe.is_local());
    assert_eq!(fe.radical().len(), 2);
    // (id, 0) does not commute with the reduction; (2, 0) does and lies in K_1.
    let id0 = MorphMap { u0: ExactMatrix::from_i64(&z4, &[&[1]]), u1: ExactMatrix::from_i64(&z4, &[&[0]]) };
    assert!(!id0.is_valid(&m, &m));
    let two0 = MorphMap { u0: ExactMatrix::from_i64(&z4, &[&[2]]), u1: ExactMatrix::from_i64(&z4, &[&[0]]) };
    assert!(two0.is_valid(&m, &m));
    let k1 = MaximalIdealPredicate { tag: Tag::K1 };
    assert!(k1.contains(&two0, &m));
    assert!(!k1.contains(&MorphMap::identity(&m), &m));
    for pred in ideal_predicates(&m).unwrap() {
        let rep = fe.analyze(pred);
        assert_eq!(rep.members, 2, "{:?}", pred.tag);
        assert!(rep.ideal && rep.completely_prime && rep.maximal);
    }
}

#[test]
fn units_are_componentwise_isomorphisms() {
    let mut objects = field_corpus(&Ring::PrimeField(2), 2);
    objects.extend(torsion_corpus().into_iter().filter(|m| hom_space(m, m).order().unwrap() <= BigInt::from(256)));
    for m in objects {
        let fe = finite_endo(&m, 256).unwrap();
        assert_eq!(fe.units, fe.units_by_inverse(), "{}", m.to_json());
    }
}

#[test]
fn radical_agrees_with_brute_force() {
    for ring in [Ring::PrimeField(2), Ring::PrimeField(3)] {
        let max = if ring == Ring::PrimeField(2) { 2 } else { 1 };
        let mut objects = field_corpus(&ring, max);
        if ring == Ring::PrimeField(3) {
            objects.push(example(&ring));
            objects.push(obj(&ring, 2, 1, &[1, 0]));
            objects.push(obj(&ring, 1, 2, &[1, 2]));
        }
        for m in objects {
            let e = endo_algebra(&m).unwrap();
            let j = e.radical();
            let fe = finite_endo(&m, FINITE_LIMIT).unwrap();
            let brute = fe.radical();
            let p = match ring {
                Ring::PrimeField(p) => p as usize,
                _ => unreachable!(),
            };
            assert_eq!(brute.len(), p.pow(j.len() as u32), "{}", m.to_json());
            for &x in &brute {
                assert!(radical_membership(&e, &e.from_normal(&fe.elements[x])).unwrap());
            }
            let c = classify(&e);
            assert_eq!(c.is_local, Some(fe.is_local()));
        }
    }
}

/// `J(End M_i)` by brute force: `x` such that `1 - y x` is an automorphism for all `y`.
fn component_radical(fe: &FiniteEndo, x: usize, i: usize, ends: &[ExactMatrix]) -> bool {
    let m = fe.normal.object.component(i);
    let x = fe.elements[x].component(i);
    let id = ExactMatrix::identity(m.ring(), m.ngens());
    ends.iter().all(|y| {
        let h = morphcat::module::ModuleHom::new(m.clone(), m.clone(), id.sub(&y.mul(x))).unwrap();
        h.is_isomorphism()
    })
}

#[test]
fn componentwise_radical_lies_in_the_radical() {
    let mut objects = torsion_corpus();
    objects.extend(field_corpus(&Ring::PrimeField(2), 2));
    for m in objects {
        let Ok(fe) = finite_endo(&m, 1024) else { continue };
        let ends: Vec<Vec<ExactMatrix>> = (0..2)
            .map(|i| {
                let c = fe.normal.object.component(i);
                let zero = MorphObject::new(c.clone(), FPModule::zero(m.ring()), ExactMatrix::zeros(m.ring(), 0, c.ngens())).unwrap();
                finite_endo(&zero, 1 << 12).unwrap().elements.into_iter().map(|u| u.u0).collect()
            })
            .collect();
        let j: std::collections::HashSet<usize> = fe.radical().into_iter().collect();
        for x in 0..fe.order() {
            if component_radical(&fe, x, 0, &ends[0]) && component_radical(&fe, x, 1, &ends[1]) {
                assert!(j.contains(&x), "{}", m.to_json());
            }
        }
    }
}

#[test]
fn locality_examples() {
    let f2 = Ring::PrimeField(2);
    let rep = locality_criteria_check(&obj(&f2, 1, 1, &[1])).unwrap();
    assert!(rep.is_local && rep.three_cases && rep.agree());
    assert_eq!(rep.local_modules_criterion, Some(true));
    let rep = locality_criteria_check(&obj(&f2, 1, 1, &[0])).unwrap();
    assert!(!rep.is_local && !rep.three_cases && rep.agree());
    let z4 = Ring::residue(4).unwrap();
    let to_zero = MorphObject::new(FPModule::cyclic(&z4, 4), FPModule::zero(&z4), ExactMatrix::zeros(&z4, 0, 1)).unwrap();
    let rep = locality_criteria_check(&to_zero).unwrap();
    assert!(rep.is_local && rep.three_cases && rep.agree());
    let rep = locality_criteria_check(&obj(&f2, 0, 2, &[])).unwrap();
    assert!(!rep.is_local && rep.agree());
    assert!(locality_criteria_check(&obj(&Ring::Rational, 1, 1, &[1])).is_err());
}

#[test]
fn locality_criteria_agree_on_corpora() {
    let mut objects = field_corpus(&Ring::PrimeField(2), 2);
    objects.extend(field_corpus(&Ring::PrimeField(3), 1));
    objects.extend(torsion_corpus());
    let mut checked = 0;
    for m in objects {
        match locality_criteria_check(&m) {
            Ok(rep) => {
                assert!(rep.agree(), "{}: {:?}", m.to_json(), rep);
                checked += 1;
            }
            Err(Error::TooLarge { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
    assert!(checked > 50);
}

#[test]
fn predicates_are_completely_prime_on_uniserial_objects() {
    let z8 = Ring::residue(8).unwrap();
    for a in [2, 4, 8] {
        for b in [2, 4, 8] {
            let (m0, m1) = (FPModule::cyclic(&z8, a), FPModule::cyclic(&z8, b));
            for h in morphcat::module::hom_group(&m0, &m1).generators().into_iter().chain([morphcat::module::ModuleHom::zero(&m0, &m1)]) {
                let m = MorphObject::new(m0.clone(), m1.clone(), h.matrix.clone()).unwrap();
                let fe = finite_endo(&m, FINITE_LIMIT).unwrap();
                for pred in ideal_predicates(&m).unwrap() {
                    let rep = fe.analyze(pred);
                    assert!(rep.proper && rep.ideal && rep.completely_prime, "{}: {:?}", m.to_json(), rep);
                }
            }
        }
    }
}

#[test]
fn type_bound_and_semilocality_on_field_corpora() {
    let mut objects = field_corpus(&Ring::PrimeField(2), 2);
    objects.extend(field_corpus(&Ring::PrimeField(3), 2).into_iter().step_by(7));
    for m in objects {
        let e = endo_algebra(&m).unwrap();
        let c = classify(&e);
        assert!(c.certified);
        if let (Some(t), Some(t0), Some(t1)) = (c.type_n, module_endo_type(&m.m0), module_endo_type(&m.m1)) {
            assert!(t <= t0 + t1, "{}", m.to_json());
        }
        let semilocal: Vec<bool> = (0..2).map(|i| e.component_algebra(i).unwrap().analyze().certified).collect();
        assert_eq!(c.is_semilocal, semilocal[0] && semilocal[1]);
    }
}

fn field_object() -> impl Strategy<Value = MorphObject> {
    (
        prop_oneof![Just(Ring::PrimeField(2)), Just(Ring::PrimeField(3)), Just(Ring::PrimeField(5)), Just(Ring::Rational)],
        0usize..4,
        0usize..4,
        proptest::collection::vec(-2i64..3, 9),
    )
        .prop_map(|(ring, r, c, v)| obj(&ring, r, c, &v[..r * c]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_invariants(m in field_object()) {
        let e = endo_algebra(&m).unwrap();
        let st = e.algebra.analyze();
        prop_assert!(st.certified);
        prop_assert!(e.algebra.is_nilpotent_ideal(&st.radical));
        let c = classify_with(&e, &st);
        prop_assert_eq!(c.dim, c.radical_dim + c.semisimple_dim);
        prop_assert_eq!(st.blocks.iter().map(|b| b.dim).sum::<usize>(), c.semisimple_dim);
        let one_division_block = c.num_blocks == 1 && c.block_division_flags[0] == Some(true);
        prop_assert_eq!(c.is_local == Some(true), one_division_block);
        if c.is_finite_type == Some(true) {
            prop_assert_eq!(c.type_n, Some(c.num_blocks));
        } else {
            prop_assert_eq!(c.type_n, None);
        }
        prop_assert!(radical_membership(&e, &MorphMap::zero(&m, &m)).unwrap());
        prop_assert_eq!(radical_membership(&e, &MorphMap::identity(&m)).unwrap(), c.dim == 0);
        for b in &st.blocks {
            let ee = st.quotient.mul(&b.idempotent, &b.idempotent);
            prop_assert_eq!(&ee, &b.idempotent);
        }
    }

    #[test]
    fn radical_is_closed_under_products(m in field_object()) {
        let e = endo_algebra(&m).unwrap();
        let j = e.radical();
        for x in &j {
            for y in &j {
                let xy = e.element(x).compose(&e.element(y));
                prop_assert!(radical_membership(&e, &xy).unwrap());
            }
        }
    }
}
