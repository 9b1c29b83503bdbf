use morphcat::linalg::inverse;
use morphcat::module::{hom_group, hom_matrices_equal, in_submodule};
use morphcat::{ExactMatrix, FPModule, ModuleHom, Ring};
use num_bigint::BigInt;
use proptest::prelude::*;

fn divs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn invariants_examples() {
    let z = Ring::Integer;
    let inv = FPModule::cyclic(&z, 4).canonical_invariants();
    assert_eq!(inv.divisors, divs(&[4]));
    assert!(inv.is_uniserial && !inv.is_zero);

    let f5 = Ring::PrimeField(5);
    assert_eq!(FPModule::free(&f5, 3).canonical_invariants().dimension, Some(3));

    let m = FPModule::new(&z, 2, ExactMatrix::from_i64(&z, &[&[2, 0], &[0, 3]])).unwrap();
    // Oracle: Z/2 x Z/3 has 6 elements and (1,1) has additive order 6, so the module is cyclic.
    let order_of_11 = (1..=6).find(|k| k % 2 == 0 && k % 3 == 0).unwrap();
    assert_eq!(order_of_11, 6);
    let inv = m.canonical_invariants();
    assert_eq!(inv.divisors, divs(&[6]));
    assert!(!inv.is_uniserial);
    assert_eq!(m.order(), Some(BigInt::from(6)));

    let zf = FPModule::free(&z, 1);
    assert_eq!(zf.divisors(), divs(&[0]));
    assert!(!zf.canonical_invariants().is_uniserial);
    assert!(FPModule::zero(&z).canonical_invariants().is_zero);
}

#[test]
fn hom_group_examples() {
    let z = Ring::Integer;
    let h = hom_group(&FPModule::cyclic(&z, 4), &FPModule::cyclic(&z, 2));
    assert_eq!(h.gens.len(), 1);
    assert_eq!(h.order(), Some(BigInt::from(2)));

    let f3 = Ring::PrimeField(3);
    let k = FPModule::free(&f3, 1);
    let h = hom_group(&k, &k);
    assert_eq!(h.gens.len(), 1);
    assert_eq!(h.order(), Some(BigInt::from(3)));

    let h = hom_group(&FPModule::cyclic(&z, 2), &FPModule::cyclic(&z, 4));
    assert_eq!(h.gens.len(), 1);
    assert_eq!(h.gens[0], ExactMatrix::from_i64(&z, &[&[2]]));
    assert_eq!(h.order(), Some(BigInt::from(2)));
}

#[test]
fn kernel_cokernel_examples() {
    let z = Ring::Integer;
    let z4 = FPModule::cyclic(&z, 4);
    let z2 = FPModule::cyclic(&z, 2);
    let red = ModuleHom::new(z4.clone(), z2.clone(), ExactMatrix::from_i64(&z, &[&[1]])).unwrap();
    let (k, incl) = red.kernel();
    assert_eq!(k.divisors(), divs(&[2]));
    // The kernel is generated by 2 in Z/4.
    assert!(in_submodule(&z4, &incl.matrix, &[z.from_i64(2)]));
    assert!(!in_submodule(&z4, &incl.matrix, &[z.from_i64(1)]));
    let (c, _) = red.cokernel();
    assert!(c.is_zero_module());
    assert!(!red.is_injective() && red.is_surjective());

    let two = ModuleHom::new(z2.clone(), z4.clone(), ExactMatrix::from_i64(&z, &[&[2]])).unwrap();
    assert!(two.is_injective() && !two.is_surjective());

    let id = ModuleHom::identity(&z4);
    assert!(id.is_isomorphism());
    assert!(id.kernel().0.is_zero_module() && id.cokernel().0.is_zero_module());

    let zero = ModuleHom::zero(&z4, &z2);
    assert_eq!(zero.kernel().0.divisors(), z4.divisors());
    assert_eq!(zero.cokernel().0.divisors(), z2.divisors());

    // Not a hom: 1 -> 1 from Z/2 to Z/4 does not respect 2 = 0.
    assert!(ModuleHom::new(z2, z4, ExactMatrix::from_i64(&z, &[&[1]])).is_err());
}

#[test]
fn direct_sum_examples() {
    let z = Ring::Integer;
    let s = FPModule::cyclic(&z, 2).direct_sum(&FPModule::cyclic(&z, 4));
    assert_eq!(s.divisors(), divs(&[2, 4]));
    let m = FPModule::cyclic(&z, 4);
    assert_eq!(m.direct_sum(&FPModule::zero(&z)).divisors(), m.divisors());
    let f2 = Ring::PrimeField(2);
    let k = FPModule::free(&f2, 1);
    assert_eq!(k.direct_sum(&k).canonical_invariants().dimension, Some(2));
}

#[test]
fn biproduct_identities() {
    let r = Ring::residue(8).unwrap();
    let a = FPModule::cyclic(&r, 2);
    let b = FPModule::from_divisors(&r, &divs(&[4, 8]));
    let bp = a.biproduct(&b);
    let [i0, i1] = &bp.inj;
    let [p0, p1] = &bp.proj;
    assert!(p0.compose(i0) == ModuleHom::identity(&a));
    assert!(p1.compose(i1) == ModuleHom::identity(&b));
    assert!(p0.compose(i1).is_zero() && p1.compose(i0).is_zero());
    let sum = i0.compose(p0).add(&i1.compose(p1));
    assert!(sum == ModuleHom::identity(&bp.sum));
}

/// Number of x in Z/p^b with p^a x = 0, by enumeration.
fn brute_hom_count(p: i64, a: u32, b: u32) -> usize {
    let pa = p.pow(a);
    let pb = p.pow(b);
    (0..pb).filter(|x| (pa * x) % pb == 0).count()
}

#[test]
fn cyclic_hom_counts() {
    for ring in [Ring::Integer, Ring::residue(16).unwrap(), Ring::residue(81).unwrap()] {
        for p in [2i64, 3] {
            if ring.prime().is_some_and(|q| q as i64 != p) {
                continue;
            }
            for a in 1..=4u32 {
                for b in 1..=4u32 {
                    let m = FPModule::cyclic(&ring, p.pow(a));
                    let n = FPModule::cyclic(&ring, p.pow(b));
                    let h = hom_group(&m, &n);
                    assert_eq!(h.order(), Some(BigInt::from(brute_hom_count(p, a, b))), "{ring} {p} {a} {b}");
                    assert_eq!(h.order(), Some(BigInt::from(p.pow(a.min(b)))));
                }
            }
        }
    }
}

fn unimodular(ring: &Ring, n: usize, seed: &[i64]) -> ExactMatrix {
    let mut up = ExactMatrix::identity(ring, n);
    let mut lo = ExactMatrix::identity(ring, n);
    for i in 0..n {
        for j in 0..n {
            let v = ring.from_i64(seed[(i * 5 + j) % seed.len()]);
            if i < j {
                up.set(i, j, v);
            } else if i > j {
                lo.set(i, j, v);
            }
        }
    }
    up.mul(&lo)
}

fn ring_strategy() -> impl Strategy<Value = Ring> {
    prop_oneof![
        Just(Ring::Integer),
        Just(Ring::PrimeField(3)),
        Just(Ring::Rational),
        Just(Ring::residue(8).unwrap()),
        Just(Ring::residue(9).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn invariants_survive_change_of_presentation(
        ring in ring_strategy(),
        g in 0usize..4, r in 0usize..4,
        vals in proptest::collection::vec(-6i64..7, 16),
        seed in proptest::collection::vec(-3i64..4, 25),
    ) {
        let rel = ExactMatrix::from_vec_i64(&ring, g, r, &vals[..g * r]);
        let m = FPModule::new(&ring, g, rel.clone()).unwrap();
        let p = unimodular(&ring, g, &seed);
        let q = unimodular(&ring, r, &seed[3..]);
        let m2 = FPModule::new(&ring, g, p.mul(&rel).mul(&q)).unwrap();
        prop_assert_eq!(m.canonical_invariants(), m2.canonical_invariants());
        // p is an isomorphism m -> m2
        let iso = ModuleHom::new(m.clone(), m2.clone(), p.clone()).unwrap();
        prop_assert!(iso.is_isomorphism());
        let pinv = inverse(&p).unwrap().unwrap();
        let back = ModuleHom::new(m2, m.clone(), pinv).unwrap();
        prop_assert!(back.compose(&iso) == ModuleHom::identity(&m));
    }

    #[test]
    fn kernel_cokernel_exactness(
        ring in prop_oneof![Just(Ring::residue(8).unwrap()), Just(Ring::residue(9).unwrap()), Just(Ring::PrimeField(5)), Just(Ring::Integer)],
        da in proptest::collection::vec(0u32..4, 0..3),
        db in proptest::collection::vec(0u32..4, 0..3),
        coeffs in proptest::collection::vec(0i64..50, 64),
    ) {
        let p = ring.prime().unwrap_or(2) as i64;
        let mk = |d: &[u32]| -> Vec<BigInt> {
            if ring.is_field() { vec![BigInt::from(0); d.len()] } else { d.iter().map(|&e| BigInt::from(p.pow(e + 1))).collect() }
        };
        let m = FPModule::from_divisors(&ring, &mk(&da));
        let n = FPModule::from_divisors(&ring, &mk(&db));
        let hg = hom_group(&m, &n);
        let c: Vec<_> = hg.gens.iter().enumerate().map(|(i, _)| ring.from_i64(coeffs[i % coeffs.len()])).collect();
        let f = hg.combination(&c);
        let (k, incl) = f.kernel();
        let (cok, proj) = f.cokernel();
        prop_assert!(incl.is_injective());
        prop_assert!(proj.is_surjective());
        prop_assert!(f.compose(&incl).is_zero());
        prop_assert!(proj.compose(&f).is_zero());
        let (im, _) = f.image();
        if let (Some(om), Some(ok), Some(oi), Some(on), Some(oc)) = (m.order(), k.order(), im.order(), n.order(), cok.order()) {
            prop_assert_eq!(om, &ok * &oi);
            prop_assert_eq!(on, &oi * &oc);
        }
        if ring.is_field() {
            let (a, b, kk, ii, cc) = (m.dim().unwrap(), n.dim().unwrap(), k.dim().unwrap(), im.dim().unwrap(), cok.dim().unwrap());
            prop_assert_eq!(a, kk + ii);
            prop_assert_eq!(b, ii + cc);
        }
        // every element of the kernel's generators maps to zero, every source generator
        // killed by f lies in the kernel
        for j in 0..m.ngens() {
            let e: Vec<_> = (0..m.ngens()).map(|i| if i == j { ring.one() } else { ring.zero() }).collect();
            let img = f.matrix.mul_vec(&e);
            if n.is_zero_elem(&img) {
                prop_assert!(in_submodule(&m, &incl.matrix, &e));
            }
        }
        prop_assert!(hom_matrices_equal(&n, &f.matrix, &f.canonical().matrix));
    }
}
