use morphcat::matrix::ExactMatrix;
use morphcat::morph::*;
use morphcat::oracle::*;
use morphcat::{Error, FPModule, Ring};
use num_bigint::BigInt;

fn obj(ring: &Ring, rows: usize, cols: usize, vals: &[i64]) -> MorphObject {
    MorphObject::free_i64(ring, rows, cols, vals)
}

fn spec(ring: Ring, max_gens: usize, max_exponent: u32) -> CorpusSpec {
    CorpusSpec { ring, max_gens, max_exponent, random: 8, seed: 0 }
}

#[test]
fn iso_examples() {
    let f2 = Ring::PrimeField(2);
    assert!(!brute_force_iso(&obj(&f2, 1, 1, &[1]), &obj(&f2, 1, 1, &[0])).unwrap());
    let m = obj(&f2, 2, 2, &[1, 0, 0, 0]);
    assert!(brute_force_iso(&m, &m).unwrap());
    assert!(brute_force_iso(&m, &obj(&f2, 2, 2, &[0, 0, 0, 1])).unwrap());
    assert!(matches!(brute_force_iso(&obj(&Ring::Rational, 1, 1, &[1]), &obj(&Ring::Rational, 1, 1, &[1])), Err(Error::UnsupportedRing(_))));
    let big = obj(&f2, 5, 5, &[0; 25]);
    assert!(matches!(brute_force_iso(&big, &big), Err(Error::TooLarge { .. })));
}

#[test]
fn orbit_examples() {
    let f2 = Ring::PrimeField(2);
    let k = FPModule::free(&f2, 1);
    assert_eq!(orbit_partition(&k, &k).unwrap().sizes(), vec![1, 1]);
    let k2 = FPModule::free(&f2, 2);
    assert_eq!(orbit_partition(&k2, &k2).unwrap().orbits.len(), 3);
    assert_eq!(orbit_partition(&FPModule::zero(&f2), &k2).unwrap().orbits.len(), 1);
    assert!(matches!(orbit_partition(&FPModule::free(&f2, 5), &FPModule::free(&f2, 4)), Err(Error::TooLarge { .. })));
}

#[test]
fn orbits_are_rank_classes_and_isomorphism_classes() {
    for (ring, max) in [(Ring::PrimeField(2), 3), (Ring::PrimeField(3), 2)] {
        for n in 0..=max {
            for m in 0..=max {
                let part = orbit_partition(&FPModule::free(&ring, n), &FPModule::free(&ring, m)).unwrap();
                assert_eq!(part.orbits.len(), n.min(m) + 1);
                let total: usize = part.sizes().iter().sum();
                let q = ring.modulus_u64().unwrap() as usize;
                assert_eq!(total, q.pow((n * m) as u32));
                for i in 0..part.orbits.len() {
                    let rep = part.representative(i);
                    for j in 0..part.orbits[i].len().min(6) {
                        assert!(brute_force_iso(&rep, &part.object(i, j)).unwrap());
                    }
                    for other in i + 1..part.orbits.len() {
                        assert!(!brute_force_iso(&rep, &part.representative(other)).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn torsion_orbits_agree_with_isomorphism() {
    let z8 = Ring::residue(8).unwrap();
    let modules = [FPModule::cyclic(&z8, 2), FPModule::cyclic(&z8, 8), FPModule::from_divisors(&z8, &[BigInt::from(2), BigInt::from(4)])];
    for c0 in &modules {
        for c1 in &modules {
            let part = orbit_partition(c0, c1).unwrap();
            let total: usize = part.sizes().iter().sum();
            assert_eq!(BigInt::from(total), morphcat::module::hom_group(c0, c1).order().unwrap());
            for i in 0..part.orbits.len() {
                for j in 0..part.orbits.len() {
                    let same = brute_force_iso(&part.representative(i), &part.representative(j)).unwrap();
                    assert_eq!(same, i == j);
                }
            }
        }
    }
}

#[test]
fn corpus_contents_and_determinism() {
    let f2 = spec(Ring::PrimeField(2), 2, 1);
    let c = generate_corpus(&f2).unwrap();
    for r in 0..=2 {
        assert!(c.objects.iter().any(|o| o.m0.ngens() == 2 && o.m1.ngens() == 2 && morphcat::linalg::rank(&o.mu).unwrap() == r));
    }
    assert!(c.objects.contains(&obj(&Ring::PrimeField(2), 2, 2, &[1, 0, 0, 0])));
    assert_eq!(c, generate_corpus(&f2).unwrap());

    let z4 = Ring::residue(4).unwrap();
    let c = generate_corpus(&spec(z4.clone(), 1, 2)).unwrap();
    let red = MorphObject::new(FPModule::cyclic(&z4, 4), FPModule::cyclic(&z4, 2), ExactMatrix::from_i64(&z4, &[&[1]])).unwrap();
    assert!(c.objects.contains(&red));
    assert!(c.objects.iter().all(|o| o.mu_hom().matrix.rows() == o.m1.ngens()));
    let mut other = spec(z4, 1, 2);
    other.seed = 1;
    assert_eq!(generate_corpus(&other).unwrap().objects.len() > 0, true);
    assert!(generate_corpus(&spec(Ring::Integer, 1, 1)).is_err());
}

#[test]
fn jsonl_roundtrip() {
    let c = generate_corpus(&spec(Ring::residue(8).unwrap(), 2, 3)).unwrap();
    let text = c.to_jsonl();
    assert_eq!(text.lines().count(), c.objects.len());
    assert_eq!(Corpus::from_jsonl(&text).unwrap(), c);
    assert!(matches!(Corpus::from_jsonl("{\"ring\":\"F_2\"}\nnot json"), Err(Error::Parse(m)) if m.contains("line")));
}

#[test]
fn fast_paths_agree_with_the_oracle() {
    for s in [spec(Ring::PrimeField(2), 2, 1), spec(Ring::residue(4).unwrap(), 2, 2), spec(Ring::PrimeField(3), 1, 1)] {
        let c = generate_corpus(&s).unwrap();
        let objs: Vec<&MorphObject> = c.objects.iter().take(60).collect();
        for a in &objs {
            for b in &objs {
                let Ok(truth) = brute_force_iso(a, b) else { continue };
                let fast = iso_test(a, b, &DecisionPolicy::default());
                match fast.verdict {
                    Verdict::Isomorphic => assert!(truth),
                    Verdict::Not => assert!(!truth),
                    Verdict::Undecided => {}
                }
                if let Ok(count) = brute_force_hom_count(a, b) {
                    assert_eq!(hom_space(a, b).order().unwrap(), BigInt::from(count));
                }
            }
        }
    }
}

#[test]
fn equivalence_labels_examples() {
    // Over Z/8: diag(2,4) ~ diag(4,2), diag(1,2) ~ diag(3,2), diag(2,4) !~ diag(2,2).
    let mats = vec![vec![2, 0, 0, 4], vec![4, 0, 0, 2], vec![2, 0, 0, 2], vec![1, 0, 0, 2], vec![3, 0, 0, 2]];
    let l = equivalence_labels(8, 2, &mats).unwrap();
    assert_eq!(l[0], l[1]);
    assert_ne!(l[0], l[2]);
    assert_eq!(l[3], l[4]);
    assert!(matches!(equivalence_labels(8, 3, &mats), Err(Error::TooLarge { .. })));
}
