//! Seeded random inputs for the identity suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::clifford::{Multivector, Scalar, Signature};
use crate::lattice::{Field, LatticeBox};
use crate::opcalc::{compose, Coeff, Dir, FunFactor, OperatorExpr, WittLetter};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for an independent stream derived from a base seed and a label.
pub fn derive_seed(base: u64, label: &str) -> u64 {
    // FNV-1a over the label, folded into the base seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ base;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Independent standard-normal real coefficients.
pub fn random_multivector(sig: Signature, rng: &mut impl Rng) -> Multivector {
    let coeffs = (0..sig.blade_count())
        .map(|_| Scalar::new(rng.sample(StandardNormal), 0.0))
        .collect();
    Multivector::from_coeffs(sig, coeffs).expect("length matches signature")
}

/// Random field over the whole box, standard-normal real coefficients.
pub fn random_field(bx: &LatticeBox, rng: &mut impl Rng) -> Field {
    let sig = bx.value_signature();
    Field::from_fn(bx, |_| random_multivector(sig, rng))
}

/// A small random operator expression over the symbols `f`, `g` in `n`
/// dimensions: up to three terms, each with up to two shifted function
/// factors and a Witt word of length at most three.
pub fn random_operator_expr(n: usize, rng: &mut impl Rng) -> OperatorExpr {
    let terms = rng.random_range(1..=3);
    let mut out = OperatorExpr::zero();
    for _ in 0..terms {
        let funs = (0..rng.random_range(0..=2))
            .map(|_| {
                let name = if rng.random_bool(0.5) { "f" } else { "g" };
                let mut factor = FunFactor::new(name, n);
                for s in factor.shift.iter_mut() {
                    *s = rng.random_range(-1..=1);
                }
                factor.inv = rng.random_bool(0.5);
                factor
            })
            .collect();
        let word = (0..rng.random_range(0..=3))
            .map(|_| {
                let dir = if rng.random_bool(0.5) {
                    Dir::Plus
                } else {
                    Dir::Minus
                };
                WittLetter::new(rng.random_range(1..=n), dir)
            })
            .collect();
        let mut term = compose(
            &OperatorExpr::fun_word(funs),
            &OperatorExpr::witt_word(word),
        );
        if rng.random_bool(0.5) {
            term = term.over_h();
        }
        out = out.add(&term.scale(Coeff::from_integer(rng.random_range(-3..=3))));
    }
    out
}
