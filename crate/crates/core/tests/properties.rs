mod common;

use common::{inverse, random_idempotent};
use iqp_matroid::marginals::{self, Projector};
use iqp_matroid::{clifford, codes, tutte, xprogram, Angle, BinaryMatrix, BitVector, Complex64, XProgram};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(max_n: usize, max_l: usize) -> impl Strategy<Value = BinaryMatrix> {
    (0..=max_n, 1..=max_l).prop_flat_map(|(n, l)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), l), n).prop_map(move |rows| {
            BinaryMatrix::from_rows(rows.into_iter().map(BitVector::from_bits).collect(), l).unwrap()
        })
    })
}

fn matrix_and_vector(max_n: usize, max_l: usize) -> impl Strategy<Value = (BinaryMatrix, BitVector)> {
    matrix(max_n, max_l).prop_flat_map(|p| {
        let l = p.ncols();
        (Just(p), prop::collection::vec(any::<bool>(), l).prop_map(BitVector::from_bits))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_nullity((p, _) in matrix_and_vector(20, 20)) {
        let r = p.rank();
        prop_assert!(r <= p.nrows().min(p.ncols()));
        prop_assert_eq!(p.transpose().rank(), r);
        let ker = p.kernel();
        prop_assert_eq!(ker.len() + r, p.ncols());
        for v in &ker {
            prop_assert!(p.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn echelon_reconstructs(p in matrix(64, 64)) {
        let e = p.echelon_reduce();
        prop_assert_eq!(e.reconstruct(), p.clone());
        prop_assert_eq!(e.rank(), p.rank());
        prop_assert_eq!(e.reduced().rank(), p.rank());
        let id = e.reduced().select_rows(e.basis_rows());
        prop_assert_eq!(id, BinaryMatrix::identity(e.rank()));
    }

    #[test]
    fn echelon_form_follows_row_permutation(p in matrix(12, 10), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..p.nrows()).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let q = p.select_rows(&perm);
        let e = p.echelon_reduce();
        let position: Vec<usize> = {
            let mut inv = vec![0; perm.len()];
            for (i, &j) in perm.iter().enumerate() {
                inv[j] = i;
            }
            e.basis_rows().iter().map(|&b| inv[b]).collect()
        };
        let f = q.echelon_reduce_with_basis(&position).unwrap();
        prop_assert_eq!(f.col_map(), e.col_map());
        prop_assert_eq!(f.reduced(), &e.reduced().select_rows(&perm));
    }

    #[test]
    fn dual_map_preserves_products((p, s) in matrix_and_vector(12, 10)) {
        let e = p.echelon_reduce();
        let s2 = e.map_dual(&s).unwrap();
        prop_assert_eq!(e.reduced().mul_vec(&s2).unwrap(), p.mul_vec(&s).unwrap());
    }

    #[test]
    fn weights_count_codewords(p in matrix(16, 16)) {
        let w = codes::weight_enumerator(&p).unwrap();
        prop_assert_eq!(w.weights.len(), p.nrows() + 1);
        prop_assert_eq!(w.weights.iter().sum::<u64>(), 1u64 << w.rank);
        prop_assert_eq!(w.weights[0], 1);
    }

    #[test]
    fn projection_drops_rank_by_at_most_one((p, x) in matrix_and_vector(12, 10)) {
        prop_assume!(!x.is_zero());
        let q = codes::project(&p, &x).unwrap();
        prop_assert_eq!(q.nrows(), p.nrows());
        let (r, rq) = (p.rank(), q.rank());
        prop_assert!(rq == r || rq + 1 == r);
    }

    #[test]
    fn affinification_contains_all_ones((p, s) in matrix_and_vector(12, 10)) {
        let ps = codes::affinify(&p, &s).unwrap();
        prop_assert!(ps.rank() <= p.rank());
        prop_assert!(ps.nrows() <= p.nrows());
        prop_assert!(codes::contains_all_ones(&ps));
    }

    #[test]
    fn alpha_conjugates_under_negation(p in matrix(10, 8), t in 0.0f64..std::f64::consts::TAU) {
        let a = codes::alpha(&p, Angle::radians(t)).unwrap();
        let b = codes::alpha(&p, Angle::radians(-t)).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-12);
        prop_assert!(a.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn greene_at_random_points(p in matrix(10, 6), re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let zeta = Complex64::new(re, im);
        prop_assume!((Complex64::new(1.0, 0.0) - zeta).norm() > 0.1 && zeta.norm() > 0.1);
        let w = codes::weight_enumerator(&p).unwrap();
        let t = tutte::tutte_subset_sum(&p).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let (n, r) = (p.nrows() as i32, w.rank as i32);
        let rhs = zeta.powi(n - r) * (one - zeta).powi(r) * t.eval((one + zeta) / (one - zeta), one / zeta);
        let lhs = w.evaluate(zeta);
        prop_assert!((lhs - rhs).norm() <= 1e-8 * lhs.norm().max(1.0));
    }

    #[test]
    fn deletion_contraction_identity(p in matrix(9, 6), e in 0usize..9, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        prop_assume!(e < p.nrows());
        let rest: Vec<usize> = (0..p.nrows()).filter(|&i| i != e).collect();
        let deleted = p.select_rows(&rest);
        let row = p.row(e).clone();
        prop_assume!(!row.is_zero() && deleted.rank() == p.rank());
        // contract: project out the direction of row e
        let contracted = codes::project(&deleted, &row).unwrap();
        let lead = row.first_one().unwrap();
        let mut cols: Vec<BitVector> = (0..p.ncols()).filter(|&j| j != lead).map(|j| contracted.column(j)).collect();
        if cols.is_empty() {
            cols.push(BitVector::zeros(deleted.nrows()));
        }
        let contracted = BinaryMatrix::from_rows(cols, deleted.nrows()).unwrap().transpose();
        let (x, y) = (Complex64::new(re, im), Complex64::new(im, re));
        let t = tutte::tutte_eval(&p, x, y).unwrap();
        let sum = tutte::tutte_eval(&deleted, x, y).unwrap() + tutte::tutte_eval(&contracted, x, y).unwrap();
        prop_assert!((t - sum).norm() <= 1e-8 * t.norm().max(1.0));
    }

    #[test]
    fn half_pi_rule(p in matrix(12, 8)) {
        let g = clifford::wenum_at_fourth_root(&p, 2).unwrap();
        let a = clifford::alpha_exact(&p, 2).unwrap().to_complex();
        if codes::is_even_code(&p) {
            let expect = Complex64::new(0.0, 1.0).powu(p.nrows() as u32);
            prop_assert!((a - expect).norm() < 1e-12);
            prop_assert_eq!(g.re, 1i128 << codes::weight_enumerator(&p).unwrap().rank);
        } else {
            prop_assert!(g.is_zero());
            prop_assert!(a.norm() < 1e-12);
        }
    }

    #[test]
    fn clifford_support_shape(p in matrix(12, 10)) {
        let s = clifford::clifford_support(&p);
        let l = p.ncols();
        match s.case {
            clifford::SupportCase::One => prop_assert_eq!(s.u_basis.len(), s.v_basis.len()),
            clifford::SupportCase::Two => prop_assert_eq!(s.u_basis.len() + 1, s.v_basis.len()),
        }
        prop_assert_eq!(s.dim, l - s.v_basis.len());
        prop_assert!(s.contains(&s.offset));
    }

    #[test]
    fn betas_are_real_and_bounded((p, s) in matrix_and_vector(10, 8), t in 0.0f64..3.2) {
        let b = xprogram::beta(&XProgram::new(p, Angle::radians(t)), &s).unwrap();
        prop_assert!(b.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn projector_subspaces(l in 1usize..9, k in 0usize..9, seed in any::<u64>()) {
        let k = k.min(l);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = marginals::make_projector(random_idempotent(&mut rng, l, k)).unwrap();
        prop_assert_eq!(m.range_dim(), k);
        prop_assert_eq!(m.kernel_basis().len() + m.range_dim(), l);
        prop_assert_eq!(m.dual_range_basis().len(), k);
        for a in m.dual_kernel_basis() {
            for b in m.range_basis() {
                prop_assert!(!a.dot(b));
            }
        }
        for a in m.dual_range_basis() {
            for b in m.kernel_basis() {
                prop_assert!(!a.dot(b));
            }
        }
        let unsupported = (0..l).filter(|&j| m.apply(&BitVector::unit(l, j)).unwrap().is_zero()).count();
        prop_assert_eq!(m.support_bits(), l - unsupported);
        for i in 0..1usize << k {
            let x = m.range_point(i);
            prop_assert_eq!(m.apply(&x).unwrap(), x.clone());
            prop_assert_eq!(m.coordinates(&x), Some(i));
        }
    }

    #[test]
    fn marginals_normalised(p in matrix(8, 6), t in 0.0f64..3.2, seed in any::<u64>()) {
        let l = p.ncols();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = marginals::make_projector(random_idempotent(&mut rng, l, l.min(3))).unwrap();
        let d = marginals::marginal_distribution(&XProgram::new(p, Angle::radians(t)), &m).unwrap();
        prop_assert!((d.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(d.drift.abs() < 1e-9);
    }

    #[test]
    fn conditional_vectors_are_distributions(p in matrix(8, 6), t in 0.0f64..3.2, seed in any::<u64>()) {
        let l = p.ncols();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = marginals::make_projector(random_idempotent(&mut rng, l, l.min(3))).unwrap();
        let k = marginals::random_dual_kernel(&m, &mut rng);
        let c = marginals::conditional_distribution(&XProgram::new(p, Angle::radians(t)), &m, &k).unwrap();
        prop_assert!(c.iter().all(|&x| x >= -1e-12));
        prop_assert!((c.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn reduced_rows_are_light(p in matrix(8, 7), num in 1i64..16) {
        let red = xprogram::reduce_rows(&XProgram::new(p.clone(), Angle::pi_fraction(num, 8))).unwrap();
        prop_assert!(red.terms.iter().all(|(r, m)| r.weight() as u32 <= red.degree && *m >= 1 && *m < 1 << red.degree));
        prop_assert!(red.phase_units < 2 << red.degree);
    }

    #[test]
    fn bitvector_display_round_trip(bits in prop::collection::vec(any::<bool>(), 0..150)) {
        let v = BitVector::from_bits(bits.iter().copied());
        let s = v.to_string();
        prop_assert_eq!(s.parse::<BitVector>().unwrap(), v);
    }
}

#[test]
fn inverse_helper() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = common::random_invertible(&mut rng, 7);
    assert_eq!(b.mul(&inverse(&b)).unwrap(), BinaryMatrix::identity(7));
    let _ = Projector::identity(3);
}
