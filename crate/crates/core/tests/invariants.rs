use morphcat::invariants::*;
use morphcat::linalg::rank;
use morphcat::matrix::ExactMatrix;
use morphcat::morph::*;
use morphcat::oracle::{brute_force_iso, equivalence_labels};
use morphcat::{Error, FPModule, Ring};
use proptest::prelude::*;

fn obj(ring: &Ring, rows: usize, cols: usize, vals: &[i64]) -> MorphObject {
    MorphObject::free_i64(ring, rows, cols, vals)
}

fn cyc(ring: &Ring, a: i64, b: i64, img: i64) -> MorphObject {
    MorphObject::new(FPModule::cyclic(ring, a), FPModule::cyclic(ring, b), ExactMatrix::from_i64(ring, &[&[img]])).unwrap()
}

fn policy() -> DecisionPolicy {
    DecisionPolicy::default()
}

#[test]
fn field_decomposition_examples() {
    let f2 = Ring::PrimeField(2);
    let d = decompose_field(&obj(&f2, 2, 2, &[1, 0, 0, 0])).unwrap();
    assert_eq!((d.a, d.b, d.c), (1, 1, 1));
    assert_eq!(d.psi(), (2, 2));
    let d = decompose_field(&obj(&f2, 2, 3, &[0; 6])).unwrap();
    assert_eq!((d.a, d.b, d.c), (3, 2, 0));
    let d = decompose_field(&MorphObject::free(&f2, ExactMatrix::identity(&f2, 4))).unwrap();
    assert_eq!((d.a, d.b, d.c), (0, 0, 4));
    assert!(matches!(decompose_field(&obj(&Ring::residue(4).unwrap(), 1, 1, &[1])), Err(Error::NonFieldRing(_))));

    assert_eq!(psi((1, 1, 1)), (2, 2));
    assert_eq!(psi((0, 0, 0)), (0, 0));
    assert_eq!(order_unit_image(2, 5), Some((2, 5)));
    assert_eq!(order_unit_image(3, 3), None);
}

#[test]
fn class_relation_examples() {
    let f2 = Ring::PrimeField(2);
    let id = obj(&f2, 1, 1, &[1]);
    let to_zero = obj(&f2, 0, 1, &[]);
    let r = class_equal(&id, &to_zero, ClassTag::D, &policy()).unwrap();
    assert_eq!(r.verdict, ClassVerdict::NotEqual);
    assert!(r.forward.is_some() && r.backward.is_none());

    let r = class_equal(&id, &id, ClassTag::D, &policy()).unwrap();
    assert_eq!(r.verdict, ClassVerdict::Equal);
    for w in [r.forward.unwrap(), r.backward.unwrap()] {
        assert!(w.is_valid(&id, &id) && ClassTag::D.witnesses(&w, &id, &id));
    }

    let z4 = Ring::residue(4).unwrap();
    let (red, zero) = (cyc(&z4, 4, 2, 1), cyc(&z4, 4, 2, 0));
    let r = class_equal(&red, &zero, ClassTag::E0, &policy()).unwrap();
    assert_eq!(r.verdict, ClassVerdict::NotEqual);
    // u1 red = 0 forces u1 = 0, so no surjective 1-component exists either.
    assert_eq!(class_equal(&red, &zero, ClassTag::E1, &policy()).unwrap().verdict, ClassVerdict::NotEqual);
    assert_eq!(class_equal(&red, &red, ClassTag::E0, &policy()).unwrap().verdict, ClassVerdict::Equal);

    // The codomain relation reads M1, which is zero here.
    assert!(matches!(class_equal(&id, &to_zero, ClassTag::C, &policy()), Err(Error::PreconditionViolated(_))));
    assert!(matches!(
        class_equal(&obj(&f2, 2, 1, &[1, 0]), &id, ClassTag::M1, &policy()),
        Err(Error::PreconditionViolated(m)) if m.contains("M1 not uniserial")
    ));
}

fn uniserial_objects(ring: &Ring, exps: &[i64]) -> Vec<MorphObject> {
    let mut out = Vec::new();
    for &a in exps {
        for &b in exps {
            let (m0, m1) = (FPModule::cyclic(ring, a), FPModule::cyclic(ring, b));
            let hg = morphcat::module::hom_group(&m0, &m1);
            let mut maps = vec![ExactMatrix::zeros(ring, 1, 1)];
            maps.extend(hg.generators().into_iter().map(|h| h.matrix));
            // Multiples of the generator cover every orbit of Hom(Z/a, Z/b).
            let g = maps.last().unwrap().clone();
            for k in [2, 4] {
                maps.push(g.scale(&ring.from_i64(k)));
            }
            for mu in maps {
                out.push(MorphObject::new(m0.clone(), m1.clone(), mu).unwrap());
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|o| seen.insert(o.to_json().to_string()));
    out
}

#[test]
fn class_relations_are_equivalences() {
    let z8 = Ring::residue(8).unwrap();
    let objs = uniserial_objects(&z8, &[2, 4, 8]);
    for tag in ClassTag::UNISERIAL.into_iter().chain(ClassTag::PAIR) {
        let n = objs.len();
        let eq: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| class_equal(&objs[i], &objs[j], tag, &policy()).unwrap().verdict == ClassVerdict::Equal).collect())
            .collect();
        for i in 0..n {
            assert!(eq[i][i]);
            for j in 0..n {
                assert_eq!(eq[i][j], eq[j][i]);
                for k in 0..n {
                    if eq[i][j] && eq[j][k] {
                        assert!(eq[i][k], "{} not transitive", tag.name());
                    }
                }
            }
        }
    }
}

#[test]
fn matching_examples() {
    let z8 = Ring::residue(8).unwrap();
    let objs = uniserial_objects(&z8, &[2, 4]);
    let ms = vec![objs[0].clone(), objs[3].clone(), objs[5].clone()];
    let ns = vec![objs[5].clone(), objs[0].clone(), objs[3].clone()];
    let r = match_decompositions(&ms, &ns, &ClassTag::UNISERIAL, &policy()).unwrap();
    assert_eq!(r.verdict, Verdict::Isomorphic);
    for tag in ClassTag::UNISERIAL {
        let p = &r.permutations[tag.name()];
        for (k, &l) in p.iter().enumerate() {
            assert_eq!(class_equal(&ms[k], &ns[l], tag, &policy()).unwrap().verdict, ClassVerdict::Equal);
        }
    }
    let short = match_decompositions(&ms, &ns[..2], &ClassTag::UNISERIAL, &policy()).unwrap();
    assert_eq!(short.verdict, Verdict::Not);

    // Same domain class, different codomain classes: the two matchings differ.
    let x = cyc(&z8, 2, 2, 0);
    let y = cyc(&z8, 2, 4, 0);
    let r = match_decompositions(&[x.clone(), y.clone()], &[y.clone(), x.clone()], &ClassTag::PAIR, &policy()).unwrap();
    assert_eq!(r.verdict, Verdict::Isomorphic);
    assert_eq!(r.permutations["d"], vec![0, 1]);
    assert_eq!(r.permutations["c"], vec![1, 0]);
    let sum = |v: &[MorphObject]| direct_sum(v, &z8).object;
    assert!(brute_force_iso(&sum(&[x.clone(), y.clone()]), &sum(&[y, x])).unwrap());
}

#[test]
fn matching_agrees_with_brute_force_on_pairs() {
    let z8 = Ring::residue(8).unwrap();
    let objs = uniserial_objects(&z8, &[2, 4]);
    let sum = |v: &[MorphObject]| direct_sum(v, &z8).object;
    let mut isomorphic = 0;
    for i in 0..objs.len() {
        for j in i..objs.len() {
            for k in 0..objs.len() {
                for l in k..objs.len() {
                    let (ms, ns) = ([objs[i].clone(), objs[j].clone()], [objs[k].clone(), objs[l].clone()]);
                    let truth = brute_force_iso(&sum(&ms), &sum(&ns)).unwrap();
                    let r = match_decompositions(&ms, &ns, &ClassTag::UNISERIAL, &policy()).unwrap();
                    assert_eq!(r.verdict == Verdict::Isomorphic, truth);
                    assert_ne!(r.verdict, Verdict::Undecided);
                    isomorphic += truth as usize;
                }
            }
        }
    }
    assert!(isomorphic > 0);
}

#[test]
fn lexicographic_matching() {
    let t = true;
    let f = false;
    assert_eq!(lex_perfect_matching(&[vec![t, t], vec![t, f]]), Some(vec![1, 0]));
    assert_eq!(lex_perfect_matching(&[vec![t, t], vec![t, t]]), Some(vec![0, 1]));
    assert_eq!(lex_perfect_matching(&[vec![t, f], vec![t, f]]), None);
    assert_eq!(lex_perfect_matching(&[]), Some(vec![]));
}

#[test]
fn diagonal_equivalence_examples() {
    let z8 = Ring::residue(8).unwrap();
    let e = |v: &[i64]| v.iter().map(|&x| z8.from_i64(x)).collect::<Vec<_>>();
    let r = diag_equiv(&z8, &e(&[2, 4]), &e(&[4, 2])).unwrap();
    assert!(r.equivalent);
    let r = diag_equiv(&z8, &e(&[2, 4]), &e(&[2, 2])).unwrap();
    assert!(!r.equivalent && r.p.is_none());
    let (a, b) = (e(&[1, 2]), e(&[3, 2]));
    let r = diag_equiv(&z8, &a, &b).unwrap();
    assert!(r.equivalent);
    let (p, q) = (r.p.unwrap(), r.q.unwrap());
    let qinv = morphcat::linalg::inverse(&q).unwrap().unwrap();
    assert_eq!(qinv.mul(&diag_matrix(&z8, &a)).mul(&p), diag_matrix(&z8, &b));
    assert!(matches!(diag_equiv(&Ring::Rational, &[], &[]), Err(Error::UnsupportedRing(_))));
}

#[test]
fn diagonal_equivalence_matches_exhaustive_search_over_z4() {
    let z4 = Ring::residue(4).unwrap();
    let diags: Vec<[u64; 2]> = (0..4).flat_map(|x| (0..4).map(move |y| [x, y])).collect();
    let mats: Vec<Vec<u64>> = diags.iter().map(|d| vec![d[0], 0, 0, d[1]]).collect();
    let labels = equivalence_labels(4, 2, &mats).unwrap();
    for (i, a) in diags.iter().enumerate() {
        for (j, b) in diags.iter().enumerate() {
            let e = |d: &[u64; 2]| d.iter().map(|&x| z4.from_i64(x as i64)).collect::<Vec<_>>();
            let r = diag_equiv(&z4, &e(a), &e(b)).unwrap();
            assert_eq!(r.equivalent, labels[i] == labels[j], "{a:?} {b:?}");
        }
    }
}

fn field_matrix() -> impl Strategy<Value = MorphObject> {
    (
        prop_oneof![Just(Ring::PrimeField(2)), Just(Ring::PrimeField(3)), Just(Ring::PrimeField(5))],
        0usize..5,
        0usize..5,
        proptest::collection::vec(0i64..5, 16),
    )
        .prop_map(|(ring, r, c, v)| obj(&ring, r, c, &v[..r * c]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_is_complete(m in field_matrix()) {
        let d = decompose_field(&m).unwrap();
        let (n, k) = (m.m0.ngens(), m.m1.ngens());
        let r = rank(&m.mu).unwrap();
        prop_assert_eq!((d.a, d.b, d.c), (n - r, k - r, r));
        prop_assert_eq!(d.psi(), (n, k));
        let back = d.reassemble(m.ring());
        prop_assert_eq!(iso_test(&back, &m, &policy()).verdict, Verdict::Isomorphic);
        if r == n && n < k {
            prop_assert_eq!(order_unit_image(n, k), Some((n, k)));
        }
    }
}
