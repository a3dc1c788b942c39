//! Seeded identity suites producing a [`VerificationReport`].
//!
//! Every random trial draws from its own stream derived from the base seed,
//! so trials can run in parallel and the report is identical across runs
//! and thread counts.

use std::f64::consts::PI;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chebyshev::{
    build_dirac_solutions, build_kg_solution, cheb_hypercomplex, cheb_projected, cheb_projected_at,
    cheb_t, cheb_t0_conjugate_roots, cheb_t0_multi, cheb_table, check_recurrence, chirality_defect,
    hyp2f1_projected, hyp2f1_terminating, projected_field, projected_power,
    projected_spinor_residuals, ChebyshevParams, Convention,
};
use crate::clifford::{
    axis_commutator, dot_vector, generator_endomorphism, involution_operator_k, pseudoscalar_gamma,
    witt_lower, witt_raise, Multivector, Signature,
};
use crate::error::Result;
use crate::lattice::{
    backward_diff, central_dirac, chi_action, dalembert, dirac_dh, dirac_minus, dirac_plus,
    dirac_residual, forward_diff, k_action, project_chiral, shift, star_laplacian, BoundaryMode,
    Chirality, Field, LatticeBox, MassTerm, Semantics,
};
use crate::momentum::{
    central_symbol, chi_momentum_shift_check, dh_symbol, gamma_anticommutator, kg_dispersion,
    massive_square_defect, plane_wave_check, zero_scan, BrillouinGrid, SymbolOperator,
};
use crate::opcalc::{
    check_laplacian_factorization, check_laplacian_half, check_leibniz,
    check_leibniz_without_involution, check_nilpotent, compose, Dir, IdentityCheck,
};
use crate::report::{Anchor, Check, VerificationReport};
use crate::sample::{
    derive_seed, random_field, random_multivector, random_operator_expr, rng, SuiteRng,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Witt,
    Lattice,
    Symbolic,
    Chebyshev,
    Momentum,
    Contested,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Algebra,
        Suite::Witt,
        Suite::Lattice,
        Suite::Symbolic,
        Suite::Chebyshev,
        Suite::Momentum,
        Suite::Contested,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Witt => "witt",
            Suite::Lattice => "lattice",
            Suite::Symbolic => "symbolic",
            Suite::Chebyshev => "chebyshev",
            Suite::Momentum => "momentum",
            Suite::Contested => "contested",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.tag() == s)
    }
}

/// Deliberate defects used to confirm that the harness can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Drop the involution on `f` in the Leibniz rule.
    LeibnizNoInvolution,
    /// Keep only `∂⁺∂⁻` in the Laplacian factorization.
    LaplacianHalf,
}

impl Mutation {
    pub fn parse(s: &str) -> Option<Mutation> {
        match s {
            "leibniz-no-involution" => Some(Mutation::LeibnizNoInvolution),
            "laplacian-half" => Some(Mutation::LaplacianHalf),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    /// Largest lattice dimension exercised by the lattice, symbolic,
    /// Chebyshev, momentum and contested suites.
    pub max_dim: usize,
    /// Largest `n` for `Cl(0,n)` and `Cl(n,n)` in the algebra and Witt suites.
    pub algebra_max_dim: usize,
    pub h_values: Vec<f64>,
    pub masses: Vec<f64>,
    pub seed: u64,
    pub algebra_trials: usize,
    pub witt_trials: usize,
    pub lattice_trials: usize,
    pub plane_wave_trials: usize,
    /// Sites per axis of the random-field boxes.
    pub extent: i64,
    pub suites: Vec<Suite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation: Option<Mutation>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_dim: 3,
            algebra_max_dim: 4,
            h_values: vec![1.0, 0.5],
            masses: vec![0.0, 1.0, 2f64.sqrt()],
            seed: 7,
            algebra_trials: 1000,
            witt_trials: 200,
            lattice_trials: 100,
            plane_wave_trials: 20,
            extent: 8,
            suites: Suite::ALL.to_vec(),
            mutation: None,
        }
    }
}

impl VerifyConfig {
    /// Same suites with every random-trial count set to `trials`.
    pub fn with_trials(mut self, trials: usize) -> Self {
        self.algebra_trials = trials;
        self.witt_trials = trials;
        self.lattice_trials = trials;
        self.plane_wave_trials = trials;
        self
    }
}

const EXACT: f64 = 1e-15;

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Runs `trial` on independent seeded streams and takes the elementwise
/// maximum of the returned residual vectors.
fn trial_max<const K: usize>(
    seed: u64,
    label: &str,
    trials: usize,
    trial: impl Fn(&mut SuiteRng) -> Result<[f64; K]> + Sync,
) -> Result<[f64; K]> {
    let base = derive_seed(seed, label);
    (0..trials)
        .into_par_iter()
        .map(|t| trial(&mut rng(derive_seed(base, &t.to_string()))))
        .try_reduce(
            || [0.0; K],
            |a, b| {
                let mut out = [0.0; K];
                for i in 0..K {
                    out[i] = nan_max(a[i], b[i]);
                }
                Ok(out)
            },
        )
}

fn rel_diff(a: &Multivector, b: &Multivector) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(1.0)
}

fn field_rel_diff(a: &Field, b: &Field) -> Result<f64> {
    Ok(a.max_abs_diff(b)? / b.max_norm().max(1.0))
}

fn sig_label(sig: Signature) -> String {
    format!("Cl({sig})")
}

pub fn run(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new(
        "verify",
        serde_json::to_value(cfg).expect("config serializes"),
    );
    for suite in &cfg.suites {
        report.checks.extend(run_suite(*suite, cfg)?);
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::Algebra => algebra_suite(cfg),
        Suite::Witt => witt_suite(cfg),
        Suite::Lattice => lattice_suite(cfg),
        Suite::Symbolic => symbolic_suite(cfg),
        Suite::Chebyshev => chebyshev_suite(cfg),
        Suite::Momentum => momentum_suite(cfg),
        Suite::Contested => contested_suite(cfg),
    }
}

fn algebra_signatures(cfg: &VerifyConfig) -> Result<Vec<Signature>> {
    let mut sigs = Vec::new();
    for n in 1..=cfg.algebra_max_dim {
        sigs.push(Signature::field_algebra(n)?);
        sigs.push(Signature::operator_algebra(n)?);
    }
    Ok(sigs)
}

pub fn algebra_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let clifford = |claim: &str| Anchor::new("Clifford algebra", claim);
    let mut checks = Vec::new();
    for sig in algebra_signatures(cfg)? {
        let label = sig_label(sig);
        let [assoc, inv, rev, dag, mixed] = trial_max(
            cfg.seed,
            &format!("algebra/{label}"),
            cfg.algebra_trials,
            |r| {
                let a = random_multivector(sig, r);
                let b = random_multivector(sig, r);
                let c = random_multivector(sig, r);
                let ab = a.geometric_product(&b)?;
                let left = ab.geometric_product(&c)?;
                let right = a.geometric_product(&b.geometric_product(&c)?)?;
                Ok([
                    rel_diff(&right, &left),
                    rel_diff(
                        &a.main_involution()
                            .geometric_product(&b.main_involution())?,
                        &ab.main_involution(),
                    ),
                    rel_diff(
                        &b.reversion().geometric_product(&a.reversion())?,
                        &ab.reversion(),
                    ),
                    rel_diff(&b.dagger().geometric_product(&a.dagger())?, &ab.dagger()),
                    rel_diff(&a.main_involution().reversion(), &a.dagger()),
                ])
            },
        )?;
        let tag = |c: Check| c.detail(label.clone());
        checks.push(tag(Check::pass_class(
            format!("algebra.associativity/{label}"),
            clifford("(ab)c = a(bc)"),
            assoc,
            1e-12,
        )));
        checks.push(tag(Check::pass_class(
            format!("algebra.involution-product/{label}"),
            clifford("(ab)′ = a′b′"),
            inv,
            1e-12,
        )));
        checks.push(tag(Check::pass_class(
            format!("algebra.reversion-product/{label}"),
            clifford("(ab)* = b*a*"),
            rev,
            1e-12,
        )));
        checks.push(tag(Check::pass_class(
            format!("algebra.conjugation-product/{label}"),
            clifford("(ab)† = b†a†"),
            dag,
            1e-12,
        )));
        checks.push(tag(Check::pass_class(
            format!("algebra.conjugation-composite/{label}"),
            clifford("(a′)* = a†"),
            mixed,
            1e-12,
        )));

        let mut relation = 0.0f64;
        for j in 1..=sig.dim() {
            for k in 1..=sig.dim() {
                let ej = Multivector::generator(sig, j)?;
                let ek = Multivector::generator(sig, k)?;
                let ac = ej.geometric_product(&ek)? + ek.geometric_product(&ej)?;
                let expected = if j == k { 2.0 * sig.square(j) } else { 0.0 };
                relation = relation.max(ac.max_abs_diff(&Multivector::scalar(sig, expected)));
            }
        }
        checks.push(tag(Check::pass_class(
            format!("algebra.signature-relations/{label}"),
            clifford("e_j e_k + e_k e_j = 2 η_jk"),
            relation,
            EXACT,
        )));
    }

    // Every signature with p + q ≤ 6, fewer trials each.
    let mut general = 0.0f64;
    for total in 1..=6usize {
        for p in 0..=total {
            let sig = Signature::new(p, total - p)?;
            let [e] = trial_max(
                cfg.seed,
                &format!("algebra/general/{sig}"),
                cfg.algebra_trials.div_ceil(10),
                |r| {
                    let a = random_multivector(sig, r);
                    let b = random_multivector(sig, r);
                    let c = random_multivector(sig, r);
                    let left = a.geometric_product(&b)?.geometric_product(&c)?;
                    let right = a.geometric_product(&b.geometric_product(&c)?)?;
                    Ok([rel_diff(&right, &left)])
                },
            )?;
            general = nan_max(general, e);
        }
    }
    checks.push(
        Check::pass_class(
            "algebra.associativity/all-signatures",
            clifford("(ab)c = a(bc)"),
            general,
            1e-12,
        )
        .detail("every Cl(q,p) with p + q <= 6"),
    );
    Ok(checks)
}

pub fn witt_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let witt = |claim: &str| Anchor::new("Witt basis", claim);
    let mut checks = Vec::new();
    for n in 1..=cfg.algebra_max_dim {
        let sig = Signature::field_algebra(n)?;
        let residuals = trial_max::<11>(cfg.seed, &format!("witt/{n}"), cfg.witt_trials, |r| {
            let a = random_multivector(sig, r);
            let b = random_multivector(sig, r);
            let mut out = [0.0f64; 11];
            let mut bump = |i: usize, v: f64| out[i] = nan_max(out[i], v);
            for j in 1..=n {
                for k in 1..=n {
                    let ll =
                        witt_lower(j, &witt_lower(k, &a)?)? + witt_lower(k, &witt_lower(j, &a)?)?;
                    bump(0, ll.max_abs());
                    let rr =
                        witt_raise(j, &witt_raise(k, &a)?)? + witt_raise(k, &witt_raise(j, &a)?)?;
                    bump(1, rr.max_abs());
                    let lr =
                        witt_lower(j, &witt_raise(k, &a)?)? + witt_raise(k, &witt_lower(j, &a)?)?;
                    let expected = if j == k {
                        a.clone()
                    } else {
                        Multivector::zero(sig)
                    };
                    bump(2, lr.max_abs_diff(&expected));
                }
                let lr =
                    |v: &Multivector| -> Result<Multivector> { witt_lower(j, &witt_raise(j, v)?) };
                let rl =
                    |v: &Multivector| -> Result<Multivector> { witt_raise(j, &witt_lower(j, v)?) };
                bump(3, lr(&lr(&a)?)?.max_abs_diff(&lr(&a)?));
                bump(3, rl(&rl(&a)?)?.max_abs_diff(&rl(&a)?));
                bump(
                    4,
                    axis_commutator(j, &axis_commutator(j, &a)?)?.max_abs_diff(&a),
                );

                // e_j⁺e_j⁻ = ½(1 + E_{j+n} E_j)
                let ee = generator_endomorphism(j + n, n, &generator_endomorphism(j, n, &a)?)?;
                bump(6, lr(&a)?.max_abs_diff(&(&a + &ee).scale(0.5)));

                // Literal Clifford forms of the two letters.
                let ej_a = a.left_mul_generator(j)?;
                let a_ej = a.main_involution().right_mul_generator(j)?;
                bump(
                    7,
                    witt_lower(j, &a)?.max_abs_diff(&(&ej_a - &a_ej).scale(-0.5)),
                );
                bump(
                    7,
                    witt_raise(j, &a)?.max_abs_diff(&(&ej_a + &a_ej).scale(0.5)),
                );

                for g in 0..=n {
                    let part = a.grade_project(g)?;
                    let up = witt_raise(j, &part)?;
                    let down = witt_lower(j, &part)?;
                    let up_ok = if g < n {
                        up.max_abs_diff(&up.grade_project(g + 1)?)
                    } else {
                        up.max_abs()
                    };
                    let down_ok = if g > 0 {
                        down.max_abs_diff(&down.grade_project(g - 1)?)
                    } else {
                        down.max_abs()
                    };
                    bump(8, up_ok.max(down_ok));
                }

                let ab = a.geometric_product(&b)?;
                let lhs = dot_vector(j, &ab)?;
                let rhs = dot_vector(j, &a)?.geometric_product(&b)?
                    + a.main_involution().geometric_product(&dot_vector(j, &b)?)?;
                bump(9, rel_diff(&lhs, &rhs));
            }
            bump(
                5,
                involution_operator_k(&a)?.max_abs_diff(&a.main_involution()),
            );
            // Distinct symbols anticommute and square to zero.
            bump(10, witt_lower(1, &witt_lower(1, &a)?)?.max_abs());
            bump(10, witt_raise(1, &witt_raise(1, &a)?)?.max_abs());
            Ok(out)
        })?;
        let tol = 1e-14;
        let items: [(&str, &str, usize, f64); 11] = [
            ("witt.lower-anticommute", "e_j⁺e_k⁺ + e_k⁺e_j⁺ = 0", 0, tol),
            ("witt.raise-anticommute", "e_j⁻e_k⁻ + e_k⁻e_j⁻ = 0", 1, tol),
            (
                "witt.mixed-anticommute",
                "e_j⁺e_k⁻ + e_k⁻e_j⁺ = δ_jk",
                2,
                tol,
            ),
            (
                "witt.idempotent",
                "(e_j⁺e_j⁻)² = e_j⁺e_j⁻, (e_j⁻e_j⁺)² = e_j⁻e_j⁺",
                3,
                tol,
            ),
            ("witt.commutator-square", "[e_j⁺, e_j⁻]² = 1", 4, tol),
            (
                "witt.k-is-main-involution",
                "Π_j [e_j⁺, e_j⁻] a = a′",
                5,
                tol,
            ),
            (
                "witt.operator-algebra-form",
                "e_j⁺e_j⁻ = ½(1 + e_{j+n}e_j)",
                6,
                tol,
            ),
            (
                "witt.clifford-form",
                "e_j⁺a = −½(e_j a − a′e_j), e_j⁻a = ½(e_j a + a′e_j)",
                7,
                tol,
            ),
            (
                "witt.grade-shift",
                "e_j⁻ raises and e_j⁺ lowers the grade by one",
                8,
                tol,
            ),
            (
                "witt.contraction-antiderivation",
                "e_j⁺(ab) = (e_j⁺a)b + a′(e_j⁺b)",
                9,
                1e-12,
            ),
            ("witt.square-zero", "(e_j^±)² = 0", 10, tol),
        ];
        for (id, claim, i, t) in items {
            checks.push(
                Check::pass_class(format!("{id}/n={n}"), witt(claim), residuals[i], t).dim(n),
            );
        }
    }
    Ok(checks)
}

fn random_box(cfg: &VerifyConfig, n: usize, h: f64) -> Result<LatticeBox> {
    LatticeBox::cube(n, h, 0, cfg.extent - 1, BoundaryMode::Shrinking)
}

/// Box symmetric about the origin used for polynomial solutions.
fn solution_box(n: usize, h: f64) -> Result<LatticeBox> {
    let r = if n >= 3 { 3 } else { 4 };
    LatticeBox::cube(n, h, -r, r, BoundaryMode::Shrinking)
}

fn kg_weights(n: usize) -> Vec<Vec<f64>> {
    let uniform = vec![1.0 / n as f64; n];
    let total = (n * (n + 1) / 2) as f64;
    let skewed = (1..=n).map(|j| j as f64 / total).collect();
    if n == 1 {
        vec![uniform]
    } else {
        vec![uniform, skewed]
    }
}

pub fn lattice_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let diffs = |claim: &str| Anchor::new("finite differences", claim);
    let dirac = |claim: &str| Anchor::new("lattice Dirac operator", claim);
    let stag = |claim: &str| Anchor::new("staggered action", claim);
    let mass = |claim: &str| Anchor::new("massive Dirac equation", claim);
    let mut checks = Vec::new();
    for n in 1..=cfg.max_dim {
        for &h in &cfg.h_values {
            let bx = random_box(cfg, n, h)?;
            let place = |c: Check| c.dim(n).mesh(h).on_box(bx.lo(), bx.hi());

            // Semantics-independent identities.
            let r = trial_max::<10>(
                cfg.seed,
                &format!("lattice/{n}/{h}"),
                cfg.lattice_trials,
                |rg| {
                    let f = random_field(&bx, rg);
                    let g = random_field(&bx, rg);
                    let mut out = [0.0; 10];
                    for j in 1..=n {
                        let fwd = forward_diff(&f, j)?;
                        let bwd = backward_diff(&f, j)?;
                        out[0] = nan_max(out[0], shift(&fwd, j, -1)?.max_abs_diff(&bwd)?);
                        out[0] = nan_max(out[0], shift(&bwd, j, 1)?.max_abs_diff(&fwd)?);
                        let fg = f.mul(&g)?;
                        let lhs = forward_diff(&fg, j)?;
                        let rhs = fwd
                            .mul(&g)?
                            .add(&shift(&f, j, 1)?.mul(&forward_diff(&g, j)?)?)?;
                        out[1] = nan_max(out[1], field_rel_diff(&lhs, &rhs)?);
                        let lhs = backward_diff(&fg, j)?;
                        let rhs = bwd
                            .mul(&g)?
                            .add(&shift(&f, j, -1)?.mul(&backward_diff(&g, j)?)?)?;
                        out[1] = nan_max(out[1], field_rel_diff(&lhs, &rhs)?);
                    }
                    let coordinate =
                        (1..=n).try_fold(None::<Field>, |acc, j| -> Result<Option<Field>> {
                            let term = forward_diff(&backward_diff(&f, j)?, j)?;
                            Ok(Some(match acc {
                                None => term,
                                Some(a) => a.add(&term)?,
                            }))
                        })?;
                    let lap = star_laplacian(&f)?;
                    out[2] = field_rel_diff(&coordinate.expect("n >= 1"), &lap)?;

                    let chi = chi_action(&f);
                    out[3] = chi_action(&chi).max_abs_diff(&f)?;
                    let pp = project_chiral(&f, Chirality::Plus)?;
                    let pm = project_chiral(&f, Chirality::Minus)?;
                    out[4] = project_chiral(&pp, Chirality::Plus)?
                        .max_abs_diff(&pp)?
                        .max(project_chiral(&pm, Chirality::Minus)?.max_abs_diff(&pm)?);
                    out[5] = project_chiral(&pm, Chirality::Plus)?.max_norm();
                    out[6] = pp.add(&pm)?.max_abs_diff(&f)?;
                    out[7] = chi_action(&pp)
                        .max_abs_diff(&pp)?
                        .max(chi_action(&pm).max_abs_diff(&pm.scale(-1.0))?);
                    out[8] = k_action(&k_action(&f)).max_abs_diff(&f)?;

                    let split = central_dirac(&f)?.add(&dalembert(&f)?.scale(h / 2.0))?;
                    out[9] = field_rel_diff(&split, &dirac_dh(&f, Semantics::Pointwise)?)?;
                    Ok(out)
                },
            )?;
            checks.push(place(Check::pass_class(
                "lattice.shift-intertwining",
                diffs("τ_{−j} ∂^{+j} = ∂^{−j}, τ_{+j} ∂^{−j} = ∂^{+j}"),
                r[0],
                EXACT,
            )));
            checks.push(place(Check::pass_class(
                "lattice.product-rules",
                diffs("∂^{±j}(fg) = (∂^{±j}f)g + f(x ± he_j)∂^{±j}g"),
                r[1],
                1e-12,
            )));
            checks.push(place(Check::pass_class(
                "lattice.star-laplacian-coordinates",
                diffs("Δ_h = Σ_j ∂^{+j}∂^{−j}"),
                r[2],
                1e-12,
            )));
            checks.push(place(Check::pass_class(
                "lattice.chi-unitary",
                stag("χ_h² = 1"),
                r[3],
                EXACT,
            )));
            checks.push(place(Check::pass_class(
                "lattice.projector-idempotent",
                stag("(½(1 ± χ_h))² = ½(1 ± χ_h)"),
                r[4],
                EXACT,
            )));
            checks.push(place(Check::pass_class(
                "lattice.projector-orthogonal",
                stag("½(1 + χ_h) ½(1 − χ_h) = 0"),
                r[5],
                EXACT,
            )));
            checks.push(place(Check::pass_class(
                "lattice.projector-partition",
                stag("½(1 + χ_h) + ½(1 − χ_h) = 1"),
                r[6],
                EXACT,
            )));
            checks.push(place(Check::pass_class(
                "lattice.projector-eigenspaces",
                stag("χ_h ½(1 ± χ_h) = ±½(1 ± χ_h)"),
                r[7],
                EXACT,
            )));
            checks.push(place(Check::pass_class(
                "lattice.k-involutive",
                stag("K² = 1"),
                r[8],
                EXACT,
            )));
            checks.push(place(
                Check::pass_class(
                    "lattice.symmetric-skew-split",
                    dirac("D_h = ½(D_h⁻ + D_h⁺) + (h/2)□_h"),
                    r[9],
                    1e-12,
                )
                .semantics(Semantics::Pointwise),
            ));

            for sem in Semantics::ALL {
                let masses = cfg.masses.clone();
                let r = trial_max::<5>(
                    cfg.seed,
                    &format!("lattice/{n}/{h}/{sem}"),
                    cfg.lattice_trials,
                    |rg| {
                        let f = random_field(&bx, rg);
                        let plus = dirac_plus(&f, sem)?;
                        let minus = dirac_minus(&f, sem)?;
                        let lap = star_laplacian(&f)?;
                        let nil = dirac_plus(&plus, sem)?
                            .max_norm()
                            .max(dirac_minus(&minus, sem)?.max_norm());
                        let anti = dirac_plus(&minus, sem)?.add(&dirac_minus(&plus, sem)?)?;
                        let fact = field_rel_diff(&anti, &lap)?;
                        let d = dirac_dh(&f, sem)?;
                        let dd = dirac_dh(&d, sem)?;
                        let square = field_rel_diff(&dd, &lap.scale(-1.0))?;
                        let dk = dirac_dh(&k_action(&f), sem)?;
                        let kd = k_action(&d);
                        let kanti = dk.add(&kd)?.max_norm();
                        let mut massive = 0.0f64;
                        for &m in &masses {
                            // (D - mK)² f expanded by linearity.
                            let lhs = dd
                                .sub(&dk.scale(m))?
                                .sub(&kd.scale(m))?
                                .add(&k_action(&k_action(&f)).scale(m * m))?;
                            let rhs = lap.scale(-1.0).add(&f.scale(m * m))?;
                            massive = nan_max(massive, field_rel_diff(&lhs, &rhs)?);
                        }
                        Ok([nil, fact, square, kanti, massive])
                    },
                )?;
                let tagged = |c: Check| place(c.semantics(sem));
                checks.push(tagged(Check::pass_class(
                    "lattice.nilpotent",
                    dirac("(∂_h⁺)² = 0, (∂_h⁻)² = 0"),
                    r[0],
                    1e-10,
                )));
                let pointwise = sem == Semantics::Pointwise;
                let fact = dirac("∂_h⁺∂_h⁻ + ∂_h⁻∂_h⁺ = Δ_h");
                let square = dirac("D_h² = −Δ_h");
                let massive = mass("(D_h − mK)² = −Δ_h + m²");
                if pointwise {
                    checks.push(tagged(Check::pass_class(
                        "lattice.laplacian-factorization",
                        fact,
                        r[1],
                        1e-10,
                    )));
                    checks.push(tagged(Check::pass_class(
                        "lattice.dirac-square",
                        square,
                        r[2],
                        1e-10,
                    )));
                    checks.push(tagged(Check::pass_class(
                        "lattice.k-massive-factorization",
                        massive,
                        r[4],
                        1e-10,
                    )));
                } else {
                    checks.push(tagged(Check::report_only(
                        "lattice.laplacian-factorization",
                        fact,
                        r[1],
                    )));
                    checks.push(tagged(Check::report_only(
                        "lattice.dirac-square",
                        square,
                        r[2],
                    )));
                    checks.push(tagged(Check::report_only(
                        "lattice.k-massive-factorization",
                        massive,
                        r[4],
                    )));
                }
                checks.push(tagged(Check::pass_class(
                    "lattice.k-anticommutation",
                    mass("D_h K + K D_h = 0"),
                    r[3],
                    1e-12,
                )));
            }

            // (D_h − mK) maps Klein–Gordon solutions into the kernel of D_h − mK.
            let sbx = solution_box(n, h)?;
            for sem in Semantics::ALL {
                let mut worst = 0.0f64;
                for &m in &cfg.masses {
                    for (wi, w) in kg_weights(n).iter().enumerate() {
                        let mut r = rng(derive_seed(
                            cfg.seed,
                            &format!("transport/{n}/{h}/{m}/{wi}"),
                        ));
                        let a = random_multivector(Signature::field_algebra(n)?, &mut r);
                        let g = build_kg_solution(h, m, w, &a, &sbx)?.field;
                        let u = dirac_dh(&g, sem)?.sub(&k_action(&g).scale(m))?;
                        worst = nan_max(worst, dirac_residual(&u, m, sem, MassTerm::K)?.1);
                    }
                }
                let anchor = mass("ker(D_h − mK) ⊇ (D_h − mK)[ker(−Δ_h + m²)]");
                let c = if sem == Semantics::Pointwise {
                    Check::pass_class("lattice.kernel-transport", anchor, worst, 1e-9)
                } else {
                    Check::report_only("lattice.kernel-transport", anchor, worst)
                };
                checks.push(
                    c.semantics(sem)
                        .mass_term(MassTerm::K)
                        .dim(n)
                        .mesh(h)
                        .on_box(sbx.lo(), sbx.hi()),
                );
            }
        }
    }
    Ok(checks)
}

fn identity_check(id: String, anchor: Anchor, check: &IdentityCheck, expect_hold: bool) -> Check {
    let as_expected = check.holds == expect_hold;
    let verdict = if check.holds { "equal" } else { "not equal" };
    let mut c = Check::verdict(id, anchor, as_expected).detail(verdict);
    if !as_expected {
        c = c.detail(format!(
            "{verdict}\nlhs = {}\nrhs = {}",
            check.lhs, check.rhs
        ));
    }
    c
}

pub fn symbolic_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let calc = |claim: &str| Anchor::new("operator calculus", claim);
    let mut checks = Vec::new();
    for n in 1..=cfg.max_dim {
        for dir in Dir::ALL {
            let s = dir.symbol();
            let leibniz = match cfg.mutation {
                Some(Mutation::LeibnizNoInvolution) => check_leibniz_without_involution(n, dir),
                _ => check_leibniz(n, dir),
            };
            checks.push(
                identity_check(
                    format!("symbolic.leibniz{s}/n={n}"),
                    calc(&format!("∂_h{s}(fg) = (∂_h{s}f)g + f′(∂_h{s}g)")),
                    &leibniz,
                    true,
                )
                .dim(n),
            );
            checks.push(
                identity_check(
                    format!("symbolic.nilpotent{s}/n={n}"),
                    calc(&format!("(∂_h{s})² = 0")),
                    &check_nilpotent(n, dir),
                    true,
                )
                .dim(n),
            );
            checks.push(
                identity_check(
                    format!("symbolic.mutant-leibniz{s}/n={n}"),
                    calc(&format!("∂_h{s}(fg) ≠ (∂_h{s}f)g + f(∂_h{s}g)")),
                    &check_leibniz_without_involution(n, dir),
                    false,
                )
                .dim(n),
            );
        }
        let lap = match cfg.mutation {
            Some(Mutation::LaplacianHalf) => check_laplacian_half(n),
            _ => check_laplacian_factorization(n),
        };
        checks.push(
            identity_check(
                format!("symbolic.laplacian-factorization/n={n}"),
                calc("∂_h⁺∂_h⁻ + ∂_h⁻∂_h⁺ = Δ_h"),
                &lap,
                true,
            )
            .dim(n),
        );
        checks.push(
            identity_check(
                format!("symbolic.mutant-laplacian-half/n={n}"),
                calc("∂_h⁺∂_h⁻ ≠ Δ_h"),
                &check_laplacian_half(n),
                false,
            )
            .dim(n),
        );

        // The symbolic verdicts must match the pointwise lattice evaluation.
        let bx = random_box(cfg, n, 1.0)?;
        let trials = cfg.lattice_trials.clamp(1, 10);
        let [nil, fact] = trial_max(cfg.seed, &format!("symbolic/cross/{n}"), trials, |rg| {
            let f = random_field(&bx, rg);
            let sem = Semantics::Pointwise;
            let plus = dirac_plus(&f, sem)?;
            let minus = dirac_minus(&f, sem)?;
            let nil = dirac_plus(&plus, sem)?
                .max_norm()
                .max(dirac_minus(&minus, sem)?.max_norm());
            let anti = dirac_plus(&minus, sem)?.add(&dirac_minus(&plus, sem)?)?;
            Ok([nil, field_rel_diff(&anti, &star_laplacian(&f)?)?])
        })?;
        let nil_symbolic = Dir::ALL.iter().all(|&d| check_nilpotent(n, d).holds);
        checks.push(
            Check::verdict(
                format!("symbolic.cross-validate-nilpotent/n={n}"),
                calc("(∂_h^±)² = 0"),
                nil_symbolic == (nil < 1e-10),
            )
            .dim(n)
            .semantics(Semantics::Pointwise)
            .detail(format!("lattice residual {nil:e}")),
        );
        checks.push(
            Check::verdict(
                format!("symbolic.cross-validate-laplacian/n={n}"),
                calc("∂_h⁺∂_h⁻ + ∂_h⁻∂_h⁺ = Δ_h"),
                lap.holds == (fact < 1e-10),
            )
            .dim(n)
            .semantics(Semantics::Pointwise)
            .detail(format!("lattice residual {fact:e}")),
        );

        let trials = cfg.lattice_trials.max(1) * 2;
        let [confluence] = trial_max(
            cfg.seed,
            &format!("symbolic/confluence/{n}"),
            trials,
            |rg| {
                let a = random_operator_expr(n, rg);
                let b = random_operator_expr(n, rg);
                let c = random_operator_expr(n, rg);
                let left = compose(&compose(&a, &b), &c);
                let right = compose(&a, &compose(&b, &c));
                Ok([if left == right { 0.0 } else { 1.0 }])
            },
        )?;
        checks.push(
            Check::pass_class(
                format!("symbolic.confluence/n={n}"),
                calc("(AB)C = A(BC) in normal form"),
                confluence,
                0.5,
            )
            .dim(n),
        );
    }
    Ok(checks)
}

const LAMBDAS: [f64; 9] = [-3.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 3.0];

pub fn chebyshev_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let cheb = |claim: &str| Anchor::new("Chebyshev polynomials", claim);
    let hyper = |claim: &str| Anchor::new("hypercomplex Chebyshev polynomials", claim);
    let mass = |claim: &str| Anchor::new("massive Dirac equation", claim);
    let mut checks = Vec::new();

    let mut rec = 0.0f64;
    let mut sym = 0.0f64;
    for lam in LAMBDAS {
        let table = cheb_table(50, lam);
        for (k, &t) in table.iter().enumerate() {
            rec = nan_max(rec, (cheb_t(k as i64, lam) - t).abs() / t.abs().max(1.0));
            sym = nan_max(
                sym,
                (cheb_t(-(k as i64), lam) - cheb_t(k as i64, lam)).abs(),
            );
        }
    }
    checks.push(Check::pass_class(
        "chebyshev.closed-form-vs-recurrence",
        cheb("T_{k+1} = 2λT_k − T_{k−1}, k ≤ 50"),
        rec,
        1e-9,
    ));
    checks.push(Check::pass_class(
        "chebyshev.negative-index",
        cheb("T_{−k} = T_k"),
        sym,
        EXACT,
    ));

    let mut hyp = 0.0f64;
    for k in 0..=8u32 {
        for i in 0..=80 {
            let lam = -1.0 + 4.0 * f64::from(i) / 80.0;
            let t = cheb_t(i64::from(k), lam);
            hyp = nan_max(
                hyp,
                (hyp2f1_terminating(k, (1.0 - lam) / 2.0) - t).abs() / t.abs().max(1.0),
            );
        }
    }
    checks.push(Check::pass_class(
        "chebyshev.hypergeometric",
        cheb("T_k(λ) = ₂F₁(−k, k; ½; (1 − λ)/2), k ≤ 8"),
        hyp,
        1e-9,
    ));

    let worked = build_kg_solution(
        1.0,
        2f64.sqrt(),
        &[1.0],
        &Multivector::one(Signature::field_algebra(1)?),
        &solution_box(1, 1.0)?,
    )?;
    let seq: Vec<f64> = (0..4)
        .map(|k| {
            worked
                .field
                .get(&[k])
                .map(|v| v.scalar_part().re)
                .unwrap_or(f64::NAN)
        })
        .collect();
    checks.push(
        Check::verdict(
            "chebyshev.worked-sequence",
            cheb("T_k(2) = 1, 2, 7, 26"),
            seq == [1.0, 2.0, 7.0, 26.0],
        )
        .detail(format!("{seq:?}")),
    );

    for n in 1..=cfg.max_dim {
        let sig = Signature::field_algebra(n)?;
        for &h in &cfg.h_values {
            let sbx = solution_box(n, h)?;
            let place = |c: Check| c.dim(n).mesh(h).on_box(sbx.lo(), sbx.hi());
            let mut kg = 0.0f64;
            let mut mean = 0.0f64;
            for &m in &cfg.masses {
                for (wi, w) in kg_weights(n).iter().enumerate() {
                    let mut r = rng(derive_seed(cfg.seed, &format!("kg/{n}/{h}/{m}/{wi}")));
                    let a = random_multivector(sig, &mut r);
                    let g = build_kg_solution(h, m, w, &a, &sbx)?;
                    kg = nan_max(kg, crate::lattice::kg_residual(&g.field, m)?.1);
                    mean = nan_max(mean, crate::lattice::kg_mean_value_residual(&g.field, m)?.1);
                }
            }
            checks.push(place(Check::pass_class(
                "chebyshev.kg-solution",
                cheb("Δ_h g = m² g"),
                kg,
                1e-9,
            )));
            checks.push(place(Check::pass_class(
                "chebyshev.kg-mean-value",
                cheb("Σ_j g(x ± he_j) = ((mh)² + 2n) g(x)"),
                mean,
                1e-9,
            )));

            for &m in &cfg.masses {
                let mut r = rng(derive_seed(cfg.seed, &format!("cheb/{n}/{h}/{m}")));
                let a = random_multivector(sig, &mut r);
                let params = ChebyshevParams::dirac_split(n, h, m, a.clone(), Convention::Static)?;
                let placed = |c: Check| place(c.mass(m));
                checks.push(placed(Check::pass_class(
                    "chebyshev.kg-constraint",
                    hyper("Σ_j (2y_j + 4α_j) = (mh)² + 2n"),
                    params.kg_constraint_defect().abs(),
                    1e-12,
                )));
                let rec = check_recurrence(&params, &sbx)?;
                checks.push(placed(Check::pass_class(
                    "chebyshev.recurrence",
                    hyper("T⁽⁰⁾(x + he_j) + T⁽⁰⁾(x − he_j) = (2y_j + 4α_j) T⁽⁰⁾(x)"),
                    rec.unprojected / cheb_t0_multi(&params, sbx.hi()).max_abs().max(1.0),
                    1e-9,
                )));

                let mut roots = 0.0f64;
                let mut partition = 0.0f64;
                for k in sbx.sites() {
                    let t0 = cheb_t0_multi(&params, &k);
                    roots = nan_max(roots, rel_diff(&cheb_t0_conjugate_roots(&params, &k), &t0));
                    for centre in [k.clone(), vec![0; n]] {
                        let sum = cheb_projected_at(&params, Chirality::Plus, &k, &centre)?
                            + cheb_projected_at(&params, Chirality::Minus, &k, &centre)?;
                        partition = nan_max(partition, rel_diff(&sum, &t0));
                    }
                }
                checks.push(placed(Check::pass_class(
                    "chebyshev.conjugate-roots",
                    hyper("T⁽⁰⁾ = a/2ⁿ Π_j (G(x_j, λ_j, +) + G(x_j, λ_j, −))"),
                    roots,
                    1e-9,
                )));
                checks.push(placed(Check::pass_class(
                    "chebyshev.projector-partition",
                    hyper("T⁽ᵅ⁾ + T⁽⁻ᵅ⁾ = T⁽⁰⁾(x, y + 2α)"),
                    partition,
                    1e-14,
                )));
                let mut chirality = 0.0f64;
                for sign in [Chirality::Plus, Chirality::Minus] {
                    let pf = projected_field(&params, &sbx, sign)?;
                    chirality = nan_max(
                        chirality,
                        chirality_defect(&pf, sign)? / pf.max_norm().max(1.0),
                    );
                }
                checks.push(placed(Check::pass_class(
                    "chebyshev.projected-chirality",
                    hyper("T⁽ᵅ⁾ ∈ Λ*₊, T⁽⁻ᵅ⁾ ∈ Λ*₋"),
                    chirality,
                    EXACT,
                )));

                // Spinor pair with the K mass term.
                let sol = build_dirac_solutions(
                    h,
                    m,
                    &a,
                    &sbx,
                    Semantics::Pointwise,
                    MassTerm::K,
                    Convention::Static,
                )?;
                let scale = sol
                    .f_plus
                    .field
                    .max_norm()
                    .max(sol.f_minus.field.max_norm())
                    .max(1.0);
                let tagged =
                    |c: Check| placed(c.semantics(Semantics::Pointwise).mass_term(MassTerm::K));
                checks.push(tagged(Check::pass_class(
                    "chebyshev.dirac-k-kernel-transport",
                    mass("(D_h − mK) u = 0 for u = (D_h − mK) g"),
                    sol.report.kernel_transport,
                    1e-9,
                )));
                checks.push(tagged(
                    Check::pass_class(
                        "chebyshev.dirac-k-cross-coupled",
                        mass("D_h f₊ = −m f₋, D_h f₋ = m f₊ for f_± = ½(1 ± K)(D_h − mK) g"),
                        sol.report.cross_coupled.max(),
                        1e-9,
                    )
                    .detail(format!("component scale {scale:e}")),
                ));
            }
        }

        // Projector split of the operator-valued series.
        let [binom, series] = trial_max(
            cfg.seed,
            &format!("binomial/{n}"),
            cfg.witt_trials.clamp(1, 50),
            |r| {
                let a = random_multivector(sig, r);
                let c: f64 = r.random_range(-1.5..1.5);
                let mu: f64 = r.random_range(-1.5..1.5);
                let mut binom = 0.0f64;
                let mut series = 0.0f64;
                for sign in [Chirality::Plus, Chirality::Minus] {
                    let p =
                        |v: &Multivector| (v + &v.main_involution().scale(sign.sign())).scale(0.5);
                    let op = |v: &Multivector| v.scale(c) + p(v).scale(mu);
                    let mut power = a.clone();
                    let mut powers = Vec::new();
                    for s in 0..=8u32 {
                        binom = nan_max(
                            binom,
                            rel_diff(&projected_power(c, mu, sign, s, &a), &power),
                        );
                        powers.push(power.clone());
                        power = op(&power);
                    }
                    for k in 0..=8u32 {
                        // Σ_s (−k)_s (k)_s / (½)_s / s! · (c + μP)^s a, summed term by term.
                        let mut coeff = 1.0;
                        let mut literal = Multivector::zero(sig);
                        for (s, pw) in powers.iter().enumerate().take(k as usize + 1) {
                            literal += &pw.scale(coeff);
                            let s = s as f64;
                            let kf = f64::from(k);
                            coeff *= (-kf + s) * (kf + s) / (0.5 + s) / (s + 1.0);
                        }
                        series = nan_max(
                            series,
                            rel_diff(&hyp2f1_projected(k, c, mu, sign, &a), &literal),
                        );
                    }
                }
                Ok([binom, series])
            },
        )?;
        checks.push(
            Check::pass_class(
                format!("chebyshev.binomial-projection/n={n}"),
                hyper("(c + μP)^s a = P(c + μ)^s a + (1 − P)c^s a"),
                binom,
                1e-12,
            )
            .dim(n),
        );
        checks.push(
            Check::pass_class(
                format!("chebyshev.operator-series/n={n}"),
                hyper("₂F₁(−k, k; ½; c + μP) a = P ₂F₁(…; c + μ) a + (1 − P) ₂F₁(…; c) a"),
                series,
                1e-10,
            )
            .dim(n),
        );
    }
    Ok(checks)
}

fn grid_points(n: usize) -> usize {
    if n <= 2 {
        64
    } else {
        32
    }
}

fn random_commensurate_xi(bx: &LatticeBox, r: &mut impl Rng) -> Vec<f64> {
    (0..bx.n())
        .map(|j| {
            let extent = bx.extent(j);
            let t = r.random_range(0..extent) - extent / 2;
            2.0 * PI * t as f64 / (bx.h() * extent as f64)
        })
        .collect()
}

pub fn momentum_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mom = |claim: &str| Anchor::new("momentum space", claim);
    let dbl = |claim: &str| Anchor::new("fermion doubling", claim);
    let mut checks = Vec::new();
    for n in 1..=cfg.max_dim {
        let gamma = pseudoscalar_gamma(n)?;
        let gsq = gamma
            .geometric_product(&gamma)?
            .max_abs_diff(&Multivector::one(gamma.sig()));
        checks.push(
            Check::pass_class(
                format!("momentum.gamma-square/n={n}"),
                mom("γ² = 1"),
                gsq,
                EXACT,
            )
            .dim(n),
        );

        for &h in &cfg.h_values {
            let grid = BrillouinGrid::new(n, h, grid_points(n))?;
            let place = |c: Check| c.dim(n).mesh(h).detail(format!("grid {}^{n}", grid.points));
            let disp = (0..grid.node_count())
                .into_par_iter()
                .map(|i| -> Result<f64> {
                    let xi = grid.node(i);
                    let mag = dh_symbol(&xi, h)?.magnitude;
                    Ok((mag * mag - kg_dispersion(&xi, h, 0.0)).abs())
                })
                .try_reduce(|| 0.0, |a, b| Ok(nan_max(a, b)))?;
            checks.push(place(Check::pass_class(
                "momentum.dh-magnitude-dispersion",
                mom("|S_h(ξ)|² = Σ_j (4/h²) sin²(hξ_j/2)"),
                disp,
                1e-12,
            )));

            let masses = cfg.masses.clone();
            let [anti, sq] = trial_max(cfg.seed, &format!("momentum/gamma/{n}/{h}"), 50, |r| {
                let xi = grid.node(r.random_range(0..grid.node_count()));
                let mut sq = 0.0f64;
                for &m in &masses {
                    sq = nan_max(sq, massive_square_defect(&xi, h, m)?);
                }
                Ok([gamma_anticommutator(&xi, h)?, sq])
            })?;
            checks.push(place(Check::pass_class(
                "momentum.gamma-anticommutation",
                mom("S_h γ + γ S_h = 0"),
                anti,
                1e-12,
            )));
            checks.push(place(Check::pass_class(
                "momentum.massive-symbol-square",
                mom("(S_h − mγ)² = Σ_j (4/h²) sin²(hξ_j/2) + m²"),
                sq,
                1e-12,
            )));

            let central = zero_scan(&grid, SymbolOperator::Central)?;
            let expected = 1usize << n;
            checks.push(place(
                Check::pass_class(
                    "momentum.central-zeros",
                    dbl("central-difference symbol vanishes at every corner ξ_j ∈ {0, π/h}"),
                    (central.count as f64 - expected as f64).abs(),
                    0.5,
                )
                .detail(format!(
                    "{} zeros on the torus (expected {expected}), {} on the closed cube",
                    central.count, central.raw_count
                )),
            ));
            let dh = zero_scan(&grid, SymbolOperator::Dh)?;
            checks.push(place(
                Check::pass_class(
                    "momentum.dh-zeros",
                    dbl("D_h symbol vanishes only at ξ = 0"),
                    (dh.count as f64 - 1.0).abs(),
                    0.5,
                )
                .detail(format!(
                    "{} zeros on the torus, {} on the closed cube",
                    dh.count, dh.raw_count
                )),
            ));
            for &m in cfg.masses.iter().filter(|&&m| m > 0.0) {
                let kg = zero_scan(&grid, SymbolOperator::Kg { m })?;
                checks.push(place(
                    Check::report_only("momentum.kg-zeros", dbl("Σ_j (4/h²) sin²(hξ_j/2) = m² has no grid zeros"), kg.count as f64)
                        .mass(m)
                        .detail(format!(
                            "{} zeros on the torus; nonzero only when the mass shell passes through a grid node",
                            kg.count
                        )),
                ));
            }

            let pbx = LatticeBox::cube(n, h, 0, 7, BoundaryMode::Periodic)?;
            let sig = Signature::field_algebra(n)?;
            let mut ops = vec![SymbolOperator::Central, SymbolOperator::Dh];
            ops.extend(cfg.masses.iter().map(|&m| SymbolOperator::Kg { m }));
            for op in ops {
                let [dev] = trial_max(
                    cfg.seed,
                    &format!("plane/{n}/{h}/{}", op.tag()),
                    cfg.plane_wave_trials,
                    |r| {
                        let xi = random_commensurate_xi(&pbx, r);
                        let w = random_multivector(sig, r);
                        Ok([plane_wave_check(&xi, op, &pbx, &w)?])
                    },
                )?;
                let mut c = Check::pass_class(
                    format!("momentum.plane-wave/{}", op.tag()),
                    mom("operator on e^{i⟨ξ,x⟩}w equals symbol applied to w"),
                    dev,
                    1e-10,
                )
                .dim(n)
                .mesh(h)
                .on_box(pbx.lo(), pbx.hi());
                if let SymbolOperator::Kg { m } = op {
                    c = c.mass(m);
                }
                checks.push(c);
            }
            let [shift_dev] = trial_max(
                cfg.seed,
                &format!("chi-shift/{n}/{h}"),
                cfg.plane_wave_trials,
                |r| {
                    let xi = random_commensurate_xi(&pbx, r);
                    let w = random_multivector(sig, r);
                    Ok([chi_momentum_shift_check(&xi, &pbx, &w)?])
                },
            )?;
            checks.push(
                Check::pass_class(
                    "momentum.staggered-shift",
                    dbl("σ(x) e^{i⟨ξ,x⟩} = e^{i⟨ξ + (π/h)𝟙, x⟩}"),
                    shift_dev,
                    1e-12,
                )
                .dim(n)
                .mesh(h)
                .on_box(pbx.lo(), pbx.hi()),
            );
        }
    }
    Ok(checks)
}

pub fn contested_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mass = |claim: &str| Anchor::new("massive Dirac equation", claim);
    let hyper = |claim: &str| Anchor::new("hypercomplex Chebyshev polynomials", claim);
    let dbl = |claim: &str| Anchor::new("fermion doubling", claim);
    let mut checks = Vec::new();
    for n in 1..=cfg.max_dim {
        let sig = Signature::field_algebra(n)?;
        for &h in &cfg.h_values {
            let bx = random_box(cfg, n, h)?;
            let trials = cfg.lattice_trials.clamp(1, 20);
            for sem in Semantics::ALL {
                let masses = cfg.masses.clone();
                let [anti, fact] =
                    trial_max(cfg.seed, &format!("contested/{n}/{h}/{sem}"), trials, |r| {
                        let f = random_field(&bx, r);
                        let d = dirac_dh(&f, sem)?;
                        let anti = dirac_dh(&chi_action(&f), sem)?.add(&chi_action(&d))?;
                        let anti = anti.max_norm() / f.max_norm().max(1.0);
                        let lap = star_laplacian(&f)?;
                        let mut fact = 0.0f64;
                        for &m in &masses {
                            let op = |v: &Field| -> Result<Field> {
                                dirac_dh(v, sem)?.sub(&chi_action(v).scale(m))
                            };
                            let rhs = lap.scale(-1.0).add(&f.scale(m * m))?;
                            fact = nan_max(fact, field_rel_diff(&op(&op(&f)?)?, &rhs)?);
                        }
                        Ok([anti, fact])
                    })?;
                let place = |c: Check| {
                    c.semantics(sem)
                        .mass_term(MassTerm::Chi)
                        .dim(n)
                        .mesh(h)
                        .on_box(bx.lo(), bx.hi())
                };
                checks.push(place(Check::report_only(
                    "contested.chi-anticommutation",
                    mass("D_h χ_h = −χ_h D_h"),
                    anti,
                )));
                checks.push(place(Check::report_only(
                    "contested.chi-massive-factorization",
                    mass("(D_h − mχ_h)² = −Δ_h + m²"),
                    fact,
                )));
            }

            let sbx = solution_box(n, h)?;
            for &m in &cfg.masses {
                let mut r = rng(derive_seed(
                    cfg.seed,
                    &format!("contested/dirac/{n}/{h}/{m}"),
                ));
                let a = random_multivector(sig, &mut r);
                let place = |c: Check| c.dim(n).mesh(h).mass(m).on_box(sbx.lo(), sbx.hi());

                let k = build_dirac_solutions(
                    h,
                    m,
                    &a,
                    &sbx,
                    Semantics::Pointwise,
                    MassTerm::K,
                    Convention::Static,
                )?;
                checks.push(place(
                    Check::report_only(
                        "contested.k-coupled-system",
                        mass("D_h f₊ = m f₊, D_h f₋ = −m f₋ for f_± = ½(1 ± K)(D_h − mK) g"),
                        k.report.coupled.max(),
                    )
                    .semantics(Semantics::Pointwise)
                    .mass_term(MassTerm::K)
                    .detail("D_h exchanges the ±1 eigenspaces of K, so both sides lie in different eigenspaces unless m = 0"),
                ));

                for sem in Semantics::ALL {
                    for conv in Convention::ALL {
                        let sol = build_dirac_solutions(h, m, &a, &sbx, sem, MassTerm::Chi, conv)?;
                        let tagged = |c: Check| {
                            place(c.semantics(sem).mass_term(MassTerm::Chi).convention(conv))
                        };
                        checks.push(tagged(Check::report_only(
                            "contested.chi-coupled-system",
                            mass(
                                "D_h f₊ = m f₊, D_h f₋ = −m f₋ for f_± = ½(1 ± χ_h)(D_h − mχ_h) g",
                            ),
                            sol.report.coupled.max(),
                        )));
                        checks.push(tagged(Check::report_only(
                            "contested.chi-cross-coupled-system",
                            mass(
                                "D_h f₊ = −m f₋, D_h f₋ = m f₊ for f_± = ½(1 ± χ_h)(D_h − mχ_h) g",
                            ),
                            sol.report.cross_coupled.max(),
                        )));
                        checks.push(tagged(Check::report_only(
                            "contested.chi-kernel-transport",
                            mass("ker(D_h − mχ_h) = (D_h − mχ_h)[ker(−Δ_h + m²)]"),
                            sol.report.kernel_transport,
                        )));
                        let spinor = projected_spinor_residuals(h, m, &a, &sbx, sem, conv)?;
                        checks.push(tagged(Check::report_only(
                            "contested.projected-spinor",
                            hyper("f₊ = D_h T⁽⁻ᵅ⁾ − mT⁽ᵅ⁾, f₋ = D_h T⁽ᵅ⁾ − mT⁽⁻ᵅ⁾ solve the coupled system"),
                            spinor.max(),
                        )));
                    }
                }

                let params = ChebyshevParams::dirac_split(n, h, m, a.clone(), Convention::Static)?;
                let rec = check_recurrence(&params, &sbx)?;
                let scale = cheb_t0_multi(&params, sbx.hi()).max_abs().max(1.0);
                for pr in &rec.projected {
                    let sign = if pr.sign == Chirality::Plus {
                        "+"
                    } else {
                        "−"
                    };
                    checks.push(place(
                        Check::report_only(
                            format!("contested.projected-recurrence{}", if pr.sign == Chirality::Plus { "+" } else { "-" }),
                            hyper(&format!(
                                "T⁽{sign}ᵅ⁾(x + he_j) + T⁽{sign}ᵅ⁾(x − he_j) = (2y_j + 4α_j) T⁽{sign}ᵅ⁾(x)"
                            )),
                            pr.residual / scale,
                        )
                        .convention(pr.convention),
                    ));
                }

                let mut definition = 0.0f64;
                for k in sbx.sites() {
                    for sign in [Chirality::Plus, Chirality::Minus] {
                        let by_definition = cheb_hypercomplex(&params, sign, &k);
                        let projected = cheb_projected(&params, sign, &k)?;
                        definition = nan_max(definition, rel_diff(&by_definition, &projected));
                    }
                }
                checks.push(place(
                    Check::report_only(
                        "contested.hypercomplex-projection",
                        hyper("Π_j ₂F₁(−x_j/h, x_j/h; ½; (1 − y_j)/2 ± α_j χ_h) a = ½(1 ± χ_h) T⁽⁰⁾(x, y + 2α; a)"),
                        definition,
                    )
                    .detail("left side evaluated on the eigenspaces of χ_h(x)"),
                ));
            }

            let grid = BrillouinGrid::new(n, h, grid_points(n))?;
            let central = zero_scan(&grid, SymbolOperator::Central)?;
            let claimed = (2 * n + 1) as f64;
            checks.push(
                Check::report_only(
                    "contested.doubling-count",
                    dbl("central-difference symbol has 2n + 1 zeros in the Brillouin zone"),
                    (central.count as f64 - claimed)
                        .abs()
                        .min((central.raw_count as f64 - claimed).abs()),
                )
                .dim(n)
                .mesh(h)
                .detail(format!(
                    "{} zeros on the torus, {} on the closed cube, claimed {claimed}",
                    central.count, central.raw_count
                )),
            );
            let bare = grid
                .nodes()
                .map(|xi| -> Result<f64> {
                    let central_sq = central_symbol(&xi, h)?.magnitude.powi(2);
                    let skew: f64 = xi.iter().map(|&x| (h * x / 2.0).sin().powi(4)).sum();
                    Ok((central_sq + skew - kg_dispersion(&xi, h, 0.0)).abs())
                })
                .try_fold(0.0, |acc, v| v.map(|v| nan_max(acc, v)))?;
            checks.push(
                Check::report_only(
                    "contested.bare-skew-symbol",
                    dbl("S_h(ξ) = Σ_j i e_j sin(hξ_j)/h + e_{j+n} sin²(hξ_j/2)"),
                    bare,
                )
                .dim(n)
                .mesh(h)
                .detail("squared magnitude compared with Σ_j (4/h²) sin²(hξ_j/2); the operator definition gives the factor 2/h"),
            );
        }
    }
    Ok(checks)
}
