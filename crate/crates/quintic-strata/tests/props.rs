//! Property tests for the module invariants: exact linear algebra, form
//! arithmetic, grading bookkeeping.

use proptest::prelude::*;

use quintic_strata::forms::{self, Form};
use quintic_strata::graded::GradedMorphism;
use quintic_strata::linalg::ScalarMatrix;
use quintic_strata::rng::Rng;
use quintic_strata::scalar::{Field, Scalar};

fn small_matrix() -> impl Strategy<Value = ScalarMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec(-6i64..=6, rows * cols).prop_map(move |vals| {
            let entries = vals.iter().map(|&v| Scalar::from_i64(Field::Q, v)).collect();
            ScalarMatrix::new(Field::Q, rows, cols, entries).unwrap()
        })
    })
}

fn small_form(degree: usize) -> impl Strategy<Value = Form> {
    let monos = forms::monomials(degree);
    proptest::collection::vec(-4i64..=4, monos.len()).prop_map(move |vals| {
        let terms = monos
            .iter()
            .zip(vals.iter())
            .map(|(&m, &c)| (m, Scalar::from_i64(Field::Q, c)))
            .collect();
        Form::from_terms(Field::Q, degree, terms).unwrap()
    })
}

proptest! {
    #[test]
    fn rank_equals_rank_of_transpose(m in small_matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_complements_rank(m in small_matrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.cols(), m.rank() + k.len());
        for v in &k {
            let image = m.apply(v).unwrap();
            prop_assert!(image.iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn solve_solutions_are_exact(m in small_matrix(), rhs in proptest::collection::vec(-6i64..=6, 1..5)) {
        if rhs.len() == m.rows() {
            let b: Vec<Scalar> = rhs.iter().map(|&v| Scalar::from_i64(Field::Q, v)).collect();
            if let Some(x) = m.solve(&b).unwrap() {
                prop_assert_eq!(m.apply(&x).unwrap(), b);
            }
        }
    }

    #[test]
    fn divides_iff_gcd_has_divisor_degree(f in small_form(1), h in small_form(2), g in small_form(3)) {
        if !f.is_zero() {
            // A known multiple and an unrelated cubic.
            let multiple = f.mul(&h).unwrap();
            if !multiple.is_zero() {
                prop_assert!(forms::divides(&f, &multiple).unwrap());
                let gg = forms::gcd(&f, &multiple).unwrap();
                prop_assert_eq!(gg.degree(), f.degree());
            }
            if !g.is_zero() {
                let gg = forms::gcd(&f, &g).unwrap();
                let should_divide = gg.degree() == f.degree();
                prop_assert_eq!(forms::divides(&f, &g).unwrap(), should_divide);
            }
        }
    }

    #[test]
    fn gcd_divides_and_cofactors_are_coprime(a in small_form(2), b in small_form(3)) {
        if !a.is_zero() && !b.is_zero() {
            let g = forms::gcd(&a, &b).unwrap();
            prop_assert!(forms::divides(&g, &a).unwrap());
            prop_assert!(forms::divides(&g, &b).unwrap());
            let ca = a.div_exact(&g).unwrap();
            let cb = b.div_exact(&g).unwrap();
            let gg = forms::gcd(&ca, &cb).unwrap();
            prop_assert_eq!(gg.degree(), 0);
        }
    }

    #[test]
    fn span_dim_is_recombination_invariant(forms_in in proptest::collection::vec(small_form(2), 2..4), mix in -3i64..=3) {
        let d0 = forms::linear_span_dim(&forms_in).unwrap();
        // Invertible elementary recombination: add mix * last to first.
        let mut recombined = forms_in.clone();
        let scaled = recombined.last().unwrap().scale(&Scalar::from_i64(Field::Q, mix)).unwrap();
        recombined[0] = recombined[0].add(&scaled).unwrap();
        prop_assert_eq!(forms::linear_span_dim(&recombined).unwrap(), d0);
    }

    #[test]
    fn form_print_parse_roundtrip(f in small_form(3)) {
        let text = f.to_string();
        let parsed = quintic_strata::doc::parse_form(&text, Field::Q).unwrap();
        if f.is_zero() {
            prop_assert!(parsed.is_zero());
        } else {
            prop_assert_eq!(parsed, f);
        }
    }

    #[test]
    fn determinant_is_multiplicative(avals in proptest::collection::vec(-3i64..=3, 9)) {
        // psi: 3O(-2) -> 3O(-1) linear, phi: 3O(-3) -> 3O(-2) linear.
        let mut rng = Rng::new(avals.iter().map(|v| (*v + 4) as u64).sum::<u64>());
        let mut lin = |seed: i64| {
            let mut acc = Form::zero(Field::Q, 1);
            for v in 0..3 {
                let c = Scalar::from_i64(Field::Q, (seed + rng.int(3)) % 4);
                acc = acc.add(&Form::var(Field::Q, v).scale(&c).unwrap()).unwrap();
            }
            acc
        };
        let psi = GradedMorphism::new(vec![-2; 3], vec![-1; 3], avals.iter().map(|&v| lin(v)).collect()).unwrap();
        let phi = GradedMorphism::new(vec![-3; 3], vec![-2; 3], avals.iter().map(|&v| lin(v + 1)).collect()).unwrap();
        let composed = psi.compose(&phi).unwrap();
        let lhs = composed.determinant().unwrap();
        let rhs = psi.determinant().unwrap().mul(&phi.determinant().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// Schwartz-Zippel style check: rank over F_p equals rank over Q for at
/// least 99% of 1000 random matrices with p = 1000003.
#[test]
fn modular_rank_matches_rational_rank() {
    let p = 1_000_003u64;
    let mut rng = Rng::new(314159);
    let mut equal = 0;
    let trials = 1000;
    for _ in 0..trials {
        let rows = 2 + (rng.below(3) as usize);
        let cols = 2 + (rng.below(3) as usize);
        let m = ScalarMatrix::from_fn(Field::Q, rows, cols, |_, _| {
            Scalar::from_i64(Field::Q, rng.int(50))
        })
        .unwrap();
        let mp = m.reduce_mod(p).unwrap();
        assert!(mp.rank() <= m.rank());
        if mp.rank() == m.rank() {
            equal += 1;
        }
    }
    assert!(equal * 100 >= trials * 99, "only {equal}/{trials} ranks matched");
}

/// reduce_mod_linear(q, l) = 0 iff l divides q, over F_p on 1000 random
/// pairs.
#[test]
fn linear_reduction_detects_divisibility() {
    let field = Field::Fp(10007);
    let mut rng = Rng::new(2718);
    for trial in 0..1000 {
        let ell = loop {
            let mut acc = Form::zero(field, 1);
            for v in 0..3 {
                let c = Scalar::from_i64(field, rng.below(10007) as i64);
                acc = acc.add(&Form::var(field, v).scale(&c).unwrap()).unwrap();
            }
            if !acc.is_zero() {
                break acc;
            }
        };
        // Half the trials are planted multiples.
        let q = if trial % 2 == 0 {
            let mut h = Form::zero(field, 2);
            for m in forms::monomials(2) {
                let c = Scalar::from_i64(field, rng.below(10007) as i64);
                h = h.add(&Form::monomial(field, m, c).unwrap()).unwrap();
            }
            ell.mul(&h).unwrap()
        } else {
            let mut q = Form::zero(field, 3);
            for m in forms::monomials(3) {
                let c = Scalar::from_i64(field, rng.below(10007) as i64);
                q = q.add(&Form::monomial(field, m, c).unwrap()).unwrap();
            }
            q
        };
        let reduced_zero = forms::reduce_mod_linear(&q, &ell).unwrap().is_zero();
        let divides = forms::divides(&ell, &q).unwrap();
        assert_eq!(reduced_zero, divides, "trial {trial}");
    }
}

/// Generic square Kronecker modules over F_5 are King-stable with high
/// frequency (at least 90% of 200 trials).
#[test]
fn generic_square_modules_are_usually_stable() {
    let field = Field::Fp(5);
    let opts = quintic_strata::kronecker::KingOptions::default();
    let stable_count: usize = quintic_strata::exec::par_map(200, |t| {
        let mut rng = Rng::new(0xABCD + t as u64);
        let entries: Vec<Form> = (0..25)
            .map(|_| {
                let mut acc = Form::zero(field, 1);
                for v in 0..3 {
                    let c = Scalar::from_i64(field, rng.below(5) as i64);
                    acc = acc.add(&Form::var(field, v).scale(&c).unwrap()).unwrap();
                }
                acc
            })
            .collect();
        let m = quintic_strata::kronecker::KroneckerModule::new(field, 5, 5, entries).unwrap();
        usize::from(m.king_stable(&opts).unwrap())
    })
    .into_iter()
    .sum();
    assert!(stable_count >= 180, "only {stable_count}/200 stable");
}

/// The three maximal minors of a random 3x2 matrix of linear forms over a
/// large prime field span three dimensions almost always.
#[test]
fn random_minor_spans_are_generically_full() {
    let field = Field::Fp(10007);
    let mut rng = Rng::new(4242);
    let mut full = 0;
    for _ in 0..1000 {
        let entries: Vec<Form> = (0..6)
            .map(|_| {
                let mut acc = Form::zero(field, 1);
                for v in 0..3 {
                    let c = Scalar::from_i64(field, rng.below(10007) as i64);
                    acc = acc.add(&Form::var(field, v).scale(&c).unwrap()).unwrap();
                }
                acc
            })
            .collect();
        let m = quintic_strata::kronecker::KroneckerModule::new(field, 3, 2, entries).unwrap();
        if m.minors_profile().unwrap().span_dim == 3 {
            full += 1;
        }
    }
    assert!(full >= 990, "only {full}/1000 full spans");
}

/// Duality bookkeeping: chi negates (up to the twist) and the determinant
/// survives transposition up to sign.
#[test]
fn duality_hilbert_relation() {
    let mut rng = Rng::new(99);
    for seed in 0..20u64 {
        let req = quintic_strata::gallery::SampleRequest::new(
            quintic_strata::strata::ModuliSpaceId::new(3).unwrap(),
            quintic_strata::strata::StratumLabel::X0,
            seed + rng.below(7),
        );
        let phi = quintic_strata::gallery::sample_stratum(&req).unwrap();
        let h = phi.hilbert().unwrap();
        for k in [0i64, 1, 2] {
            let dual = phi.dual_resolution(k).unwrap();
            let hd = dual.hilbert().unwrap();
            assert_eq!(hd.multiplicity, 5);
            assert_eq!(hd.euler, -h.euler + 5 * k);
            let det = phi.determinant().unwrap();
            let det_d = dual.determinant().unwrap();
            assert!(det_d == det || det_d == det.neg());
        }
    }
}
