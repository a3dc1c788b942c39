use discrete_clifford::clifford::{dot_vector, wedge_vector};
use discrete_clifford::lattice::{
    chi_action, dirac_minus, dirac_plus, project_chiral, BoundaryMode, Chirality, LatticeBox,
    Semantics,
};
use discrete_clifford::opcalc::compose;
use discrete_clifford::sample::{random_field, random_operator_expr, rng};
use discrete_clifford::{Blade, Multivector, Signature};
use proptest::prelude::*;

fn signature() -> impl Strategy<Value = Signature> {
    (0usize..=6)
        .prop_flat_map(|total| (0..=total, Just(total)))
        .prop_map(|(p, total)| Signature::new(p, total - p).unwrap())
}

fn multivector(sig: Signature) -> impl Strategy<Value = Multivector> {
    prop::collection::vec(-2.0f64..2.0, sig.blade_count())
        .prop_map(move |c| Multivector::from_real(sig, &c).unwrap())
}

fn triple() -> impl Strategy<Value = (Multivector, Multivector, Multivector)> {
    signature().prop_flat_map(|s| (multivector(s), multivector(s), multivector(s)))
}

/// Product of two blades by moving generators one at a time, independent of
/// the bitmask sign formula.
fn blade_product_by_sorting(sig: Signature, a: &[usize], b: &[usize]) -> (f64, Vec<usize>) {
    let mut word: Vec<usize> = a.iter().chain(b).copied().collect();
    let mut sign = 1.0;
    let mut i = 0;
    while i + 1 < word.len() {
        if word[i] > word[i + 1] {
            word.swap(i, i + 1);
            sign = -sign;
            i = i.saturating_sub(1);
        } else if word[i] == word[i + 1] {
            sign *= sig.square(word[i]);
            word.drain(i..i + 2);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    (sign, word)
}

fn product_by_sorting(a: &Multivector, b: &Multivector) -> Multivector {
    let sig = a.sig();
    let mut out = Multivector::zero(sig);
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            let (s, word) = blade_product_by_sorting(
                sig,
                &Blade(i as u32).indices(),
                &Blade(j as u32).indices(),
            );
            let k = Blade::from_indices(&word).unwrap().0 as usize;
            out.coeffs_mut()[k] += x * y * s;
        }
    }
    out
}

fn close(a: &Multivector, b: &Multivector, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol * b.max_abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_generator_sorting((a, b, _) in triple()) {
        prop_assert!(close(&a.geometric_product(&b).unwrap(), &product_by_sorting(&a, &b), 1e-12));
    }

    #[test]
    fn associativity((a, b, c) in triple()) {
        let left = a.geometric_product(&b).unwrap().geometric_product(&c).unwrap();
        let right = a.geometric_product(&b.geometric_product(&c).unwrap()).unwrap();
        prop_assert!(close(&left, &right, 1e-12));
    }

    #[test]
    fn automorphism_laws((a, b, _) in triple()) {
        let ab = a.geometric_product(&b).unwrap();
        prop_assert!(close(&a.main_involution().geometric_product(&b.main_involution()).unwrap(), &ab.main_involution(), 1e-12));
        prop_assert!(close(&b.reversion().geometric_product(&a.reversion()).unwrap(), &ab.reversion(), 1e-12));
        prop_assert!(close(&b.dagger().geometric_product(&a.dagger()).unwrap(), &ab.dagger(), 1e-12));
        prop_assert_eq!(a.main_involution().main_involution(), a.clone());
        prop_assert_eq!(a.reversion().reversion(), a);
    }

    #[test]
    fn grade_decomposition((a, _, _) in triple()) {
        let sig = a.sig();
        let mut sum = Multivector::zero(sig);
        for r in 0..=sig.dim() {
            let part = a.grade_project(r).unwrap();
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            // The involution only negates generators squaring to -1, so it is
            // the grade involution exactly when every generator does.
            if sig.q() == 0 {
                prop_assert_eq!(part.main_involution(), part.scale(sign));
            }
            sum = sum + part;
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn contraction_is_an_antiderivation(n in 1usize..=4, j in 1usize..=4, seed in any::<u64>()) {
        let j = (j - 1) % n + 1;
        let sig = Signature::field_algebra(n).unwrap();
        let mut r = rng(seed);
        let a = discrete_clifford::sample::random_multivector(sig, &mut r);
        let b = discrete_clifford::sample::random_multivector(sig, &mut r);
        let lhs = dot_vector(j, &a.geometric_product(&b).unwrap()).unwrap();
        let rhs = dot_vector(j, &a).unwrap().geometric_product(&b).unwrap()
            + a.main_involution().geometric_product(&dot_vector(j, &b).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
        // e_j a = e_j ∧ a − e_j⌋a on Cl(0,n)
        let split = wedge_vector(j, &a).unwrap() - dot_vector(j, &a).unwrap();
        prop_assert!(close(&split, &a.left_mul_generator(j).unwrap(), 1e-14));
    }

    #[test]
    fn normal_form_composition_is_associative(n in 1usize..=3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_operator_expr(n, &mut r);
        let b = random_operator_expr(n, &mut r);
        let c = random_operator_expr(n, &mut r);
        prop_assert_eq!(compose(&compose(&a, &b), &c), compose(&a, &compose(&b, &c)));
        // Reducing an already normal form is the identity.
        let ab = compose(&a, &b);
        prop_assert_eq!(compose(&ab, &discrete_clifford::opcalc::OperatorExpr::one()), ab);
    }

    #[test]
    fn chiral_projectors(n in 1usize..=3, seed in any::<u64>()) {
        let bx = LatticeBox::cube(n, 1.0, -2, 2, BoundaryMode::Shrinking).unwrap();
        let f = random_field(&bx, &mut rng(seed));
        let p = project_chiral(&f, Chirality::Plus).unwrap();
        let m = project_chiral(&f, Chirality::Minus).unwrap();
        prop_assert_eq!(p.add(&m).unwrap().max_abs_diff(&f).unwrap(), 0.0);
        prop_assert!(project_chiral(&p, Chirality::Minus).unwrap().max_norm() == 0.0);
        prop_assert!(chi_action(&m).max_abs_diff(&m.scale(-1.0)).unwrap() == 0.0);
    }

    #[test]
    fn lattice_dirac_nilpotent(n in 1usize..=3, seed in any::<u64>(), module in any::<bool>()) {
        let sem = if module { Semantics::Module } else { Semantics::Pointwise };
        let bx = LatticeBox::cube(n, 0.5, 0, 5, BoundaryMode::Shrinking).unwrap();
        let f = random_field(&bx, &mut rng(seed));
        prop_assert!(dirac_plus(&dirac_plus(&f, sem).unwrap(), sem).unwrap().max_norm() < 1e-10);
        prop_assert!(dirac_minus(&dirac_minus(&f, sem).unwrap(), sem).unwrap().max_norm() < 1e-10);
    }
}
