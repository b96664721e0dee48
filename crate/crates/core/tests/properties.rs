//! Randomized exact-identity checks. Every assertion here is an equality of
//! rationals or integers; there is no tolerance anywhere.

use kt_core::hpn::samples::sample_horizontal;
use kt_core::hpn::structure::build_quat_structure;
use kt_core::hpn::tensors::{polarized_ts, ts_value};
use kt_core::hpn::vbasis::basis_matrices;
use kt_core::linalg::modular::{default_primes, rat_mod, ModMat};
use kt_core::linalg::intmat::IntMat;
use kt_core::linalg::reconstruct::{crt_combine, rat_reconstruct};
use kt_core::op2::chart::{op2_chart, tangent_basis};
use kt_core::op2::deriv::derivation_basis;
use kt_core::op2::h3o::{cross, phi3, H3O};
use kt_core::scalars::oct::Oct;
use kt_core::scalars::rat::{ratio, Int, Rat};
use kt_core::seeding::suite_rng;
use num_traits::Zero;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn oct_strategy() -> impl Strategy<Value = Oct> {
    proptest::array::uniform8(small_rat()).prop_map(Oct::from_coords)
}

fn h3o_strategy() -> impl Strategy<Value = H3O> {
    proptest::collection::vec(small_rat(), 27).prop_map(|c| H3O::from_coords(&c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn octonions_are_alternative(a in oct_strategy(), b in oct_strategy()) {
        prop_assert_eq!(a.mul(&a.mul(&b)), a.mul(&a).mul(&b));
        prop_assert_eq!(a.mul(&b.mul(&b)), a.mul(&b).mul(&b));
    }

    #[test]
    fn octonion_norm_is_multiplicative(a in oct_strategy(), b in oct_strategy()) {
        prop_assert_eq!(a.mul(&b).norm2(), a.norm2() * b.norm2());
    }

    #[test]
    fn conjugation_reverses_products(a in oct_strategy(), b in oct_strategy()) {
        prop_assert_eq!(a.mul(&b).conj(), b.conj().mul(&a.conj()));
    }

    #[test]
    fn moufang_identity_holds(a in oct_strategy(), b in oct_strategy(), c in oct_strategy()) {
        let lhs = a.mul(&b.mul(&a)).mul(&c);
        let rhs = a.mul(&b.mul(&a.mul(&c)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jordan_product_is_commutative_and_traced(a in h3o_strategy(), b in h3o_strategy()) {
        prop_assert_eq!(a.jordan(&b), b.jordan(&a));
        prop_assert_eq!(a.jordan(&b).trace3(), a.inner3(&b));
    }

    #[test]
    fn polarization_recovers_the_determinant(a in h3o_strategy()) {
        prop_assert_eq!(phi3(&a, &a, &a), a.det3());
    }

    #[test]
    fn adjugate_matches_the_self_cross(a in h3o_strategy()) {
        prop_assert_eq!(cross(&a, &a), a.sharp());
        prop_assert_eq!(a.jordan(&a.sharp()).trace3(), a.det3() * Rat::from_integer(3.into()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn tangent_space_dimension_is_sixteen(
        an in -3i64..=3, ad in 1i64..=3, bn in -3i64..=3, bd in 1i64..=3,
    ) {
        let a = Oct::real(ratio(an, ad));
        let mut bc = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero(),
                      Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
        bc[1] = ratio(bn, bd);
        let b = Oct::from_coords(bc);
        let pt = op2_chart(&a, &b).unwrap();
        prop_assert_eq!(tangent_basis(&pt).unwrap().len(), 16);
    }

    #[test]
    fn rational_reconstruction_roundtrips(n in -1000i64..=1000, d in 1i64..=1000) {
        let r = ratio(n, d);
        let residues: Vec<(u64, u64)> = default_primes()
            .iter()
            .map(|&p| (rat_mod(&r, p).unwrap(), p))
            .collect();
        let (value, modulus) = crt_combine(&residues);
        prop_assert_eq!(rat_reconstruct(&value, &modulus), Some(r));
    }
}

#[test]
fn derivations_satisfy_leibniz_and_skew_on_random_inputs() {
    let basis = derivation_basis().unwrap();
    let mut rng = suite_rng(9, "props.deriv");
    use rand::Rng;
    for trial in 0..12 {
        let d = &basis[rng.gen_range(0..basis.len())];
        let a = random_integer_h3o(&mut rng);
        let b = random_integer_h3o(&mut rng);
        let lhs = d.apply(&a.jordan(&b));
        let rhs = d.apply(&a).jordan(&b).add(&a.jordan(&d.apply(&b)));
        assert_eq!(lhs, rhs, "Leibniz failed on trial {trial}");
        assert_eq!(
            d.apply(&a).inner3(&b),
            -a.inner3(&d.apply(&b)),
            "skew-symmetry failed on trial {trial}"
        );
        assert!(d.apply(&a).trace3().is_zero());
    }
}

fn random_integer_h3o(rng: &mut impl rand::Rng) -> H3O {
    let coords: Vec<Rat> = (0..27)
        .map(|_| Rat::from_integer(rng.gen_range(-5i64..=5).into()))
        .collect();
    H3O::from_coords(&coords).unwrap()
}

#[test]
fn quadratic_family_values_are_bihomogeneous_and_bianchi() {
    let n = 2;
    let qs = build_quat_structure(n).unwrap();
    let basis = basis_matrices(n).unwrap();
    let mut rng = suite_rng(11, "props.bihom");
    let draws = sample_horizontal(&qs, 6, &mut rng).unwrap();
    let two = Rat::from_integer(2.into());
    let three = Rat::from_integer(3.into());
    for s in basis.iter().take(4) {
        for w in draws.chunks(2) {
            let (x, p) = (w[0].x(), w[0].p());
            let scaled_x: Vec<Rat> = x.iter().map(|v| v * &two).collect();
            let scaled_p: Vec<Rat> = p.iter().map(|v| v * &three).collect();
            let base = ts_value(s, &qs, x, p);
            assert_eq!(ts_value(s, &qs, &scaled_x, p), &base * &two * &two);
            assert_eq!(ts_value(s, &qs, x, &scaled_p), &base * &three * &three);

            // Pair symmetry and the cyclic identity of the polarization.
            let (y1, y2) = (w[0].x(), w[0].p());
            let (y3, y4) = (w[1].x(), w[1].p());
            let t = |a: &[Rat], b: &[Rat], c: &[Rat], d: &[Rat]| polarized_ts(s, &qs, a, b, c, d);
            assert_eq!(t(y1, y2, y3, y4), t(y2, y1, y3, y4));
            assert_eq!(t(y1, y2, y3, y4), t(y3, y4, y1, y2));
            let cyclic = t(y1, y2, y3, y4) + t(y1, y3, y4, y2) + t(y1, y4, y2, y3);
            assert!(cyclic.is_zero());
        }
    }
}

#[test]
fn horizontal_samples_satisfy_every_pairing() {
    let qs = build_quat_structure(2).unwrap();
    let mut rng = suite_rng(13, "props.horizontal");
    for smp in sample_horizontal(&qs, 40, &mut rng).unwrap() {
        let x = smp.x();
        let p = smp.p();
        let dot = |u: &[Rat], v: &[Rat]| -> Rat { u.iter().zip(v).map(|(a, b)| a * b).sum() };
        assert!(dot(x, p).is_zero());
        for alpha in 1..=3 {
            let jx: Vec<Rat> = (0..x.len())
                .map(|i| (0..x.len()).map(|j| qs.j(alpha).at(i, j) * &x[j]).sum())
                .collect();
            assert!(dot(&jx, p).is_zero());
        }
    }
}

#[test]
fn modular_rank_never_exceeds_exact_rank() {
    let mut rng = suite_rng(17, "props.rank");
    use rand::Rng;
    for _ in 0..6 {
        let rows: Vec<Vec<i128>> = (0..12)
            .map(|_| (0..9).map(|_| rng.gen_range(-30i128..=30)).collect())
            .collect();
        // Plant a dependency so the deficiency is visible.
        let mut stacked = rows.clone();
        let dup: Vec<i128> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a + b).collect();
        stacked.push(dup);
        let m = IntMat::from_rows(stacked);
        let exact = kt_core::linalg::bareiss::rank_exact(&m.to_matr());
        for &p in default_primes() {
            assert!(ModMat::from_intmat(&m, p).rank() <= exact);
        }
        let cert = kt_core::linalg::certify::kernel_certified(&m, default_primes()).unwrap();
        assert_eq!(cert.modular_rank, exact);
        for v in cert.basis_ints().unwrap() {
            assert!(m.matvec_big(&v).iter().all(Int::is_zero));
        }
    }
}
