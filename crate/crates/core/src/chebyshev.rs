//! Chebyshev polynomials of the first kind, their multivariable Clifford
//! extension with chirality projections, and exact lattice solutions of the
//! Klein–Gordon and Dirac equations built from them.

use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::lattice::{
    chi_action, coupled_residuals, cross_coupled_residuals, dirac_dh, kg_residual, mass_action,
    neighbour_sum, staggered_sign, Chirality, CoupledResiduals, Field, LatticeBox, MassTerm,
    Semantics,
};

/// How `χ_h` inside a projected polynomial behaves when the polynomial is
/// read at the neighbours of a stencil centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `χ_h` is frozen at the stencil centre.
    Static,
    /// `χ_h` is re-evaluated at every site the stencil touches.
    Shifted,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::Static, Convention::Shifted];

    pub fn tag(&self) -> &'static str {
        match self {
            Convention::Static => "static",
            Convention::Shifted => "shifted",
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// `T_{|k|}(λ)` evaluated in closed form on each branch of `λ`.
pub fn cheb_t(k: i64, lam: f64) -> f64 {
    let k = k.unsigned_abs() as f64;
    if lam.abs() <= 1.0 {
        (k * lam.acos()).cos()
    } else if lam > 1.0 {
        (k * lam.acosh()).cosh()
    } else {
        let parity = if k % 2.0 == 0.0 { 1.0 } else { -1.0 };
        parity * (k * (-lam).acosh()).cosh()
    }
}

/// `T_0(λ), …, T_kmax(λ)` by the three-term recurrence. Exact whenever the
/// recurrence stays in integers.
pub fn cheb_table(kmax: usize, lam: f64) -> Vec<f64> {
    let mut t = Vec::with_capacity(kmax + 1);
    t.push(1.0);
    if kmax >= 1 {
        t.push(lam);
    }
    for k in 2..=kmax {
        t.push(2.0 * lam * t[k - 1] - t[k - 2]);
    }
    t
}

/// `(λ ± √(λ² − 1))^t`, on the complex branch when `|λ| < 1`.
pub fn conjugate_root_power(t: i64, lam: f64, sign: f64) -> Complex64 {
    let root = Complex64::new(lam * lam - 1.0, 0.0).sqrt();
    let base = Complex64::new(lam, 0.0) + root * sign;
    base.powi(t as i32)
}

/// Terminating series `₂F₁(−k, k; ½; t) = Σ_{s=0}^{k} (−k)_s (k)_s / (½)_s · t^s / s!`.
pub fn hyp2f1_terminating(k: u32, t: f64) -> f64 {
    let k = f64::from(k);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut s = 0.0;
    while s < k {
        term *= (-k + s) * (k + s) / (0.5 + s) * t / (s + 1.0);
        sum += term;
        s += 1.0;
    }
    sum
}

fn kernel_projector(sign: Chirality, a: &Multivector) -> Multivector {
    (a + &a.main_involution().scale(sign.sign())).scale(0.5)
}

/// `(c + μP)^s a` with `P = ½(1 ± K)`, split over the eigenspaces of `K`:
/// `P (c + μ)^s a + (1 − P) c^s a`.
pub fn projected_power(c: f64, mu: f64, sign: Chirality, s: u32, a: &Multivector) -> Multivector {
    let pa = kernel_projector(sign, a);
    let rest = a - &pa;
    pa.scale((c + mu).powi(s as i32)) + rest.scale(c.powi(s as i32))
}

/// `₂F₁(−k, k; ½; c + μP) a` with `P = ½(1 ± K)`, split over eigenspaces.
pub fn hyp2f1_projected(k: u32, c: f64, mu: f64, sign: Chirality, a: &Multivector) -> Multivector {
    let pa = kernel_projector(sign, a);
    let rest = a - &pa;
    pa.scale(hyp2f1_terminating(k, c + mu)) + rest.scale(hyp2f1_terminating(k, c))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChebyshevParams {
    pub n: usize,
    pub h: f64,
    pub m: f64,
    pub y: Vec<f64>,
    pub alpha: Vec<f64>,
    pub a: Multivector,
    pub convention: Convention,
}

impl ChebyshevParams {
    pub fn new(
        h: f64,
        m: f64,
        y: Vec<f64>,
        alpha: Vec<f64>,
        a: Multivector,
        convention: Convention,
    ) -> Result<Self> {
        let n = y.len();
        if alpha.len() != n {
            return Err(Error::InvalidParameter(format!(
                "y has {n} entries but alpha has {}",
                alpha.len()
            )));
        }
        if !a.sig().is_field_algebra() || a.sig().dim() != n {
            return Err(Error::NotFieldAlgebra(a.sig().to_string()));
        }
        if h.is_nan() || h <= 0.0 || m.is_nan() || m < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "need h > 0 and m >= 0, got h = {h}, m = {m}"
            )));
        }
        Ok(ChebyshevParams {
            n,
            h,
            m,
            y,
            alpha,
            a,
            convention,
        })
    }

    /// Uniform Dirac split `y_j = (mh)²/(2n)`, `α_j = ½`.
    pub fn dirac_split(
        n: usize,
        h: f64,
        m: f64,
        a: Multivector,
        convention: Convention,
    ) -> Result<Self> {
        let mh = m * h;
        let y = vec![mh * mh / (2.0 * n as f64); n];
        Self::new(h, m, y, vec![0.5; n], a, convention)
    }

    /// Arguments `λ_j = y_j + 2α_j` of the unprojected polynomial.
    pub fn lambda(&self) -> Vec<f64> {
        self.y
            .iter()
            .zip(&self.alpha)
            .map(|(y, a)| y + 2.0 * a)
            .collect()
    }

    /// `Σ_j (2y_j + 4α_j) − ((mh)² + 2n)`.
    pub fn kg_constraint_defect(&self) -> f64 {
        let mh = self.m * self.h;
        let lhs: f64 = self.lambda().iter().map(|l| 2.0 * l).sum();
        lhs - (mh * mh + 2.0 * self.n as f64)
    }

    pub fn satisfies_kg_constraint(&self) -> bool {
        self.kg_constraint_defect().abs() < 1e-12
    }
}

/// `T^{(0)}(x, y + 2α; a) = a · Π_j T_{|k_j|}(y_j + 2α_j)` at site `k`.
pub fn cheb_t0_multi(params: &ChebyshevParams, k: &[i64]) -> Multivector {
    let product: f64 = params
        .lambda()
        .iter()
        .zip(k)
        .map(|(&lam, &kj)| cheb_t(kj, lam))
        .product();
    params.a.scale(product)
}

/// `T^{(0)}` through the conjugate-root form
/// `a/2ⁿ · Π_j (G(k_j, λ_j, +) + G(k_j, λ_j, −))`.
pub fn cheb_t0_conjugate_roots(params: &ChebyshevParams, k: &[i64]) -> Multivector {
    let product: Complex64 = params
        .lambda()
        .iter()
        .zip(k)
        .map(|(&lam, &kj)| {
            let kj = kj.abs();
            conjugate_root_power(kj, lam, 1.0) + conjugate_root_power(kj, lam, -1.0)
        })
        .product();
    params.a.scale(product / 2f64.powi(params.n as i32))
}

fn chi_with_sign(sigma: f64, v: &Multivector) -> Multivector {
    v.main_involution().scale(sigma)
}

fn chiral_part(sigma: f64, sign: Chirality, v: &Multivector) -> Multivector {
    (v + &chi_with_sign(sigma, v).scale(sign.sign())).scale(0.5)
}

/// `½(1 ± χ_h) T^{(0)}(x, y + 2α; a)` with `χ_h` taken at `chi_site`.
pub fn cheb_projected_at(
    params: &ChebyshevParams,
    sign: Chirality,
    k: &[i64],
    chi_site: &[i64],
) -> Result<Multivector> {
    if params.alpha.iter().all(|&a| a == 0.0) {
        return Err(Error::InvalidParameter(
            "projection needs alpha != 0".into(),
        ));
    }
    let t0 = cheb_t0_multi(params, k);
    Ok(chiral_part(staggered_sign(chi_site), sign, &t0))
}

/// The projected polynomial read at a single site, where both conventions
/// agree.
pub fn cheb_projected(params: &ChebyshevParams, sign: Chirality, k: &[i64]) -> Result<Multivector> {
    cheb_projected_at(params, sign, k, k)
}

/// `T^{(±α)}(x, y; a) = Π_j ₂F₁(−k_j, k_j; ½; (1 − y_j)/2 ± α_j χ_h(x)) a`
/// with every operator argument evaluated on the two eigenspaces of `χ_h(x)`.
pub fn cheb_hypercomplex(params: &ChebyshevParams, sign: Chirality, k: &[i64]) -> Multivector {
    let s = sign.sign();
    let on_eigenspace = |chi: f64| -> f64 {
        params
            .y
            .iter()
            .zip(&params.alpha)
            .zip(k)
            .map(|((&y, &alpha), &kj)| {
                hyp2f1_terminating(kj.unsigned_abs() as u32, (1.0 - y) / 2.0 + s * alpha * chi)
            })
            .product()
    };
    let sigma = staggered_sign(k);
    let plus = chiral_part(sigma, Chirality::Plus, &params.a);
    let minus = &params.a - &plus;
    plus.scale(on_eigenspace(1.0)) + minus.scale(on_eigenspace(-1.0))
}

/// `T^{(0)}` on a whole box, with the per-axis factors taken from
/// recurrence tables.
pub fn t0_field(params: &ChebyshevParams, bx: &LatticeBox) -> Result<Field> {
    if bx.n() != params.n {
        return Err(Error::InvalidParameter(format!(
            "box has dimension {} but parameters have {}",
            bx.n(),
            params.n
        )));
    }
    if (bx.h() - params.h).abs() > 0.0 {
        return Err(Error::InvalidParameter(format!(
            "box mesh width {} differs from parameter h = {}",
            bx.h(),
            params.h
        )));
    }
    let tables: Vec<Vec<f64>> = params
        .lambda()
        .iter()
        .enumerate()
        .map(|(j, &lam)| {
            let kmax = bx.lo()[j].unsigned_abs().max(bx.hi()[j].unsigned_abs()) as usize;
            cheb_table(kmax, lam)
        })
        .collect();
    Ok(Field::from_fn(bx, |k| {
        let product: f64 = k
            .iter()
            .zip(&tables)
            .map(|(kj, t)| t[kj.unsigned_abs() as usize])
            .product();
        params.a.scale(product)
    }))
}

/// `½(1 ± χ_h) T^{(0)}` with `χ_h` evaluated at each site.
pub fn projected_field(
    params: &ChebyshevParams,
    bx: &LatticeBox,
    sign: Chirality,
) -> Result<Field> {
    let t0 = t0_field(params, bx)?;
    Ok(t0.map(|k, v| chiral_part(staggered_sign(k), sign, v)))
}

/// Evaluates a stencil operator with `χ_h` frozen at each centre: `op`
/// receives a patch of half-width `radius` around the centre and the
/// staggered sign there, and the result is read back at the centre.
pub fn eval_with_frozen_chi(
    bx: &LatticeBox,
    radius: i64,
    op: impl Fn(&LatticeBox, f64) -> Result<Field>,
) -> Result<Field> {
    let mut region = bx.full_region();
    for j in 0..bx.n() {
        region = region.shrink(j, radius, radius);
    }
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let zero = Multivector::zero(bx.value_signature());
    let values = bx
        .sites()
        .map(|c| {
            if !region.contains(&c) {
                return Ok(zero.clone());
            }
            let lo: Vec<i64> = c.iter().map(|x| x - radius).collect();
            let hi: Vec<i64> = c.iter().map(|x| x + radius).collect();
            let patch = LatticeBox::new(bx.h(), lo, hi, bx.mode())?;
            let out = op(&patch, staggered_sign(&c))?;
            out.get(&c).cloned().ok_or(Error::EmptyRegion)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Field::from_parts(bx.clone(), values, region))
}

fn frozen_projection(t0: &Field, sigma: f64, sign: Chirality) -> Field {
    t0.map(|_, v| chiral_part(sigma, sign, v))
}

fn frozen_chi(f: &Field, sigma: f64) -> Field {
    f.map(|_, v| chi_with_sign(sigma, v))
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionField {
    pub builder: &'static str,
    pub params: ChebyshevParams,
    #[serde(skip)]
    pub field: Field,
}

/// Klein–Gordon solution `g(x) = a · Π_j T_{|k_j|}(λ_j)` with
/// `λ_j = 1 + w_j (mh)²/2`.
pub fn build_kg_solution(
    h: f64,
    m: f64,
    weights: &[f64],
    a: &Multivector,
    bx: &LatticeBox,
) -> Result<SolutionField> {
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "weights sum to {total}, expected 1"
        )));
    }
    let mh = m * h;
    let y: Vec<f64> = weights.iter().map(|w| 1.0 + w * mh * mh / 2.0).collect();
    let params = ChebyshevParams::new(h, m, y, vec![0.0; n], a.clone(), Convention::Static)?;
    let field = t0_field(&params, bx)?;
    Ok(SolutionField {
        builder: "kg",
        params,
        field,
    })
}

/// Residual summary for a pair of candidate spinor components.
#[derive(Debug, Clone, Serialize)]
pub struct DiracSolutionReport {
    pub semantics: Semantics,
    pub mass_term: MassTerm,
    pub convention: Convention,
    /// Klein–Gordon residual of the seed polynomial `g`.
    pub seed_kg: f64,
    /// `D_h u − m X u` for `u = (D_h − m X) g`.
    pub kernel_transport: f64,
    /// `D_h f₊ − m f₊` and `D_h f₋ + m f₋`.
    pub coupled: CoupledResiduals,
    /// `D_h f₊ + m f₋` and `D_h f₋ − m f₊`.
    pub cross_coupled: CoupledResiduals,
}

#[derive(Debug, Clone)]
pub struct DiracSolutions {
    pub f_plus: SolutionField,
    pub f_minus: SolutionField,
    pub report: DiracSolutionReport,
}

fn require_nonempty(f: Result<Field>) -> Result<f64> {
    Ok(f?.max_norm())
}

/// Seeds `g = T^{(0)}(x, y + 2α; a)` with the uniform Dirac split and forms
/// `f_± = ½(1 ± X)(D_h g − m X g)`.
pub fn build_dirac_solutions(
    h: f64,
    m: f64,
    a: &Multivector,
    bx: &LatticeBox,
    sem: Semantics,
    mass_term: MassTerm,
    convention: Convention,
) -> Result<DiracSolutions> {
    let n = bx.n();
    let params = ChebyshevParams::dirac_split(n, h, m, a.clone(), convention)?;
    let g = t0_field(&params, bx)?;
    let (_, seed_kg) = kg_residual(&g, m)?;

    let x = |f: &Field| mass_action(f, mass_term);
    let u = dirac_dh(&g, sem)?.sub(&x(&g).scale(m))?;
    let half =
        |f: &Field, s: Chirality| -> Result<Field> { Ok(f.add(&x(f).scale(s.sign()))?.scale(0.5)) };
    let f_plus = half(&u, Chirality::Plus)?;
    let f_minus = half(&u, Chirality::Minus)?;

    let frozen = mass_term == MassTerm::Chi && convention == Convention::Static;
    let (kernel_transport, coupled, cross_coupled) = if frozen {
        let spinor = |patch: &LatticeBox, sigma: f64| -> Result<(Field, Field, Field)> {
            let g = t0_field(&params, patch)?;
            let u = dirac_dh(&g, sem)?.sub(&frozen_chi(&g, sigma).scale(m))?;
            Ok((
                u.clone(),
                frozen_projection(&u, sigma, Chirality::Plus),
                frozen_projection(&u, sigma, Chirality::Minus),
            ))
        };
        let transport = eval_with_frozen_chi(bx, 2, |patch, sigma| {
            let (u, _, _) = spinor(patch, sigma)?;
            dirac_dh(&u, sem)?.sub(&frozen_chi(&u, sigma).scale(m))
        });
        let eq = |which: usize, cross: bool| {
            eval_with_frozen_chi(bx, 2, |patch, sigma| {
                let (_, fp, fm) = spinor(patch, sigma)?;
                let (own, other, s) = if which == 0 {
                    (&fp, &fm, 1.0)
                } else {
                    (&fm, &fp, -1.0)
                };
                let rhs = if cross {
                    other.scale(-s * m)
                } else {
                    own.scale(s * m)
                };
                dirac_dh(own, sem)?.sub(&rhs)
            })
        };
        (
            require_nonempty(transport)?,
            CoupledResiduals {
                plus: require_nonempty(eq(0, false))?,
                minus: require_nonempty(eq(1, false))?,
            },
            CoupledResiduals {
                plus: require_nonempty(eq(0, true))?,
                minus: require_nonempty(eq(1, true))?,
            },
        )
    } else {
        let transport = dirac_dh(&u, sem)?.sub(&x(&u).scale(m))?.max_norm();
        (
            transport,
            coupled_residuals(&f_plus, &f_minus, m, sem)?,
            cross_coupled_residuals(&f_plus, &f_minus, m, sem)?,
        )
    };

    let report = DiracSolutionReport {
        semantics: sem,
        mass_term,
        convention,
        seed_kg,
        kernel_transport,
        coupled,
        cross_coupled,
    };
    Ok(DiracSolutions {
        f_plus: SolutionField {
            builder: "dirac-plus",
            params: params.clone(),
            field: f_plus,
        },
        f_minus: SolutionField {
            builder: "dirac-minus",
            params,
            field: f_minus,
        },
        report,
    })
}

/// Residuals of the spinor pair
/// `f₊ = D_h T^{(−α)} − m T^{(α)}`, `f₋ = D_h T^{(α)} − m T^{(−α)}` built from
/// the projected polynomials, against `D_h f₊ = m f₊`, `D_h f₋ = −m f₋`.
pub fn projected_spinor_residuals(
    h: f64,
    m: f64,
    a: &Multivector,
    bx: &LatticeBox,
    sem: Semantics,
    convention: Convention,
) -> Result<CoupledResiduals> {
    let params = ChebyshevParams::dirac_split(bx.n(), h, m, a.clone(), convention)?;
    let build = |patch: &LatticeBox, sigma: Option<f64>| -> Result<(Field, Field)> {
        let t0 = t0_field(&params, patch)?;
        let proj = |s: Chirality| match sigma {
            Some(sigma) => Ok(frozen_projection(&t0, sigma, s)),
            None => projected_field(&params, patch, s),
        };
        let tp = proj(Chirality::Plus)?;
        let tm = proj(Chirality::Minus)?;
        let fp = dirac_dh(&tm, sem)?.sub(&tp.scale(m))?;
        let fm = dirac_dh(&tp, sem)?.sub(&tm.scale(m))?;
        Ok((fp, fm))
    };
    match convention {
        Convention::Shifted => {
            let (fp, fm) = build(bx, None)?;
            coupled_residuals(&fp, &fm, m, sem)
        }
        Convention::Static => {
            let plus = eval_with_frozen_chi(bx, 2, |patch, sigma| {
                let (fp, _) = build(patch, Some(sigma))?;
                dirac_dh(&fp, sem)?.sub(&fp.scale(m))
            })?;
            let minus = eval_with_frozen_chi(bx, 2, |patch, sigma| {
                let (_, fm) = build(patch, Some(sigma))?;
                dirac_dh(&fm, sem)?.add(&fm.scale(m))
            })?;
            Ok(CoupledResiduals {
                plus: plus.max_norm(),
                minus: minus.max_norm(),
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectedRecurrence {
    pub convention: Convention,
    pub sign: Chirality,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceReport {
    /// Worst per-axis residual of the unprojected polynomial.
    pub unprojected: f64,
    /// Residual of the summed (mean-value) form.
    pub mean_value: f64,
    pub projected: Vec<ProjectedRecurrence>,
}

fn axis_recurrence(f: &Field, axis: usize, factor: f64) -> Result<Field> {
    use crate::lattice::shift;
    shift(f, axis, 1)?
        .add(&shift(f, axis, -1)?)?
        .sub(&f.scale(factor))
}

fn worst_axis(f: &Field, params: &ChebyshevParams) -> Result<Field> {
    // Combine the per-axis residuals into one field by taking them in turn;
    // the caller only needs the max norm.
    let lam = params.lambda();
    let mut worst: Option<Field> = None;
    for j in 1..=params.n {
        let r = axis_recurrence(f, j, 2.0 * lam[j - 1])?;
        worst = Some(match worst {
            None => r,
            Some(w) => {
                if r.max_norm() > w.max_norm() {
                    r
                } else {
                    w
                }
            }
        });
    }
    worst.ok_or(Error::EmptyRegion)
}

/// Per-axis three-term recurrence
/// `T(x + he_j) + T(x − he_j) = (2y_j + 4α_j) T(x)` for the unprojected
/// polynomial and, under both conventions, for the projected ones.
pub fn check_recurrence(params: &ChebyshevParams, bx: &LatticeBox) -> Result<RecurrenceReport> {
    let t0 = t0_field(params, bx)?;
    let unprojected = worst_axis(&t0, params)?.max_norm();
    let total: f64 = params.lambda().iter().map(|l| 2.0 * l).sum();
    let mean_value = neighbour_sum(&t0)?.sub(&t0.scale(total))?.max_norm();
    let mut projected = Vec::new();
    if params.alpha.iter().any(|&a| a != 0.0) {
        for sign in [Chirality::Plus, Chirality::Minus] {
            let shifted = worst_axis(&projected_field(params, bx, sign)?, params)?.max_norm();
            let frozen = eval_with_frozen_chi(bx, 1, |patch, sigma| {
                let t0 = t0_field(params, patch)?;
                worst_axis(&frozen_projection(&t0, sigma, sign), params)
            })?
            .max_norm();
            projected.push(ProjectedRecurrence {
                convention: Convention::Static,
                sign,
                residual: frozen,
            });
            projected.push(ProjectedRecurrence {
                convention: Convention::Shifted,
                sign,
                residual: shifted,
            });
        }
    }
    Ok(RecurrenceReport {
        unprojected,
        mean_value,
        projected,
    })
}

/// Max norm of `χ_h f ∓ f`, zero when `f` lies in the `±` eigenspace.
pub fn chirality_defect(f: &Field, sign: Chirality) -> Result<f64> {
    chi_action(f)
        .sub(&f.scale(sign.sign()))
        .map(|r| r.max_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{Blade, Signature};
    use crate::lattice::BoundaryMode;

    fn one(n: usize) -> Multivector {
        Multivector::one(Signature::field_algebra(n).unwrap())
    }

    #[test]
    fn cheb_t_examples() {
        assert_eq!(cheb_t(0, 0.37), 1.0);
        assert!((cheb_t(1, -0.7) + 0.7).abs() < 1e-15);
        assert!((cheb_t(3, 2.0) - 26.0).abs() < 1e-12);
        assert_eq!(cheb_t(-5, 1.3), cheb_t(5, 1.3));
        assert!((cheb_t(3, -2.0) + 26.0).abs() < 1e-12);
        assert_eq!(cheb_table(3, 2.0), vec![1.0, 2.0, 7.0, 26.0]);
    }

    #[test]
    fn conjugate_roots() {
        assert_eq!(conjugate_root_power(0, 0.3, 1.0), Complex64::new(1.0, 0.0));
        let g = conjugate_root_power(1, 2.0, 1.0);
        assert!((g.re - (2.0 + 3f64.sqrt())).abs() < 1e-15 && g.im == 0.0);
        for (k, lam) in [(3, 1.7), (-4, 2.5), (6, -1.2)] {
            let p = conjugate_root_power(k, lam, 1.0) * conjugate_root_power(k, lam, -1.0);
            assert!((p - 1.0).norm() < 1e-10, "{k} {lam}: {p}");
        }
        for t in -3..4 {
            let lhs = conjugate_root_power(t + 1, 0.4, 1.0) + conjugate_root_power(t - 1, 0.4, 1.0);
            let rhs = conjugate_root_power(t, 0.4, 1.0) * 0.8;
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn t0_examples() {
        let sig2 = Signature::field_algebra(2).unwrap();
        let e1 = Multivector::generator(sig2, 1).unwrap();
        let p = ChebyshevParams::new(
            1.0,
            0.0,
            vec![2.0, 1.0],
            vec![0.0, 0.0],
            e1.clone(),
            Convention::Static,
        )
        .unwrap();
        assert!(cheb_t0_multi(&p, &[1, 5]).max_abs_diff(&e1.scale(2.0)) < 1e-12);
        let flat = ChebyshevParams::new(
            1.0,
            0.0,
            vec![1.0, 1.0],
            vec![0.0, 0.0],
            e1.clone(),
            Convention::Static,
        )
        .unwrap();
        assert!(cheb_t0_multi(&flat, &[3, -7]).max_abs_diff(&e1) < 1e-12);
        let p1 = ChebyshevParams::new(1.0, 0.0, vec![2.0], vec![0.0], one(1), Convention::Static)
            .unwrap();
        assert!((cheb_t0_multi(&p1, &[2]).scalar_part().re - 7.0).abs() < 1e-12);
        assert!(cheb_t0_conjugate_roots(&p1, &[-3]).max_abs_diff(&one(1).scale(26.0)) < 1e-12);
    }

    #[test]
    fn projected_examples() {
        let p = ChebyshevParams::new(1.0, 0.0, vec![1.0], vec![0.5], one(1), Convention::Static)
            .unwrap();
        let v = cheb_projected(&p, Chirality::Plus, &[0]).unwrap();
        assert!(v.max_abs_diff(&one(1)) < 1e-15);
        let zero_alpha =
            ChebyshevParams::new(1.0, 0.0, vec![2.0], vec![0.0], one(1), Convention::Static)
                .unwrap();
        assert!(cheb_projected(&zero_alpha, Chirality::Plus, &[0]).is_err());

        let sig = Signature::field_algebra(2).unwrap();
        let a = Multivector::from_real(sig, &[0.3, -1.2, 0.7, 2.0]).unwrap();
        let q = ChebyshevParams::new(
            1.0,
            0.5,
            vec![0.2, 0.4],
            vec![0.5, 0.5],
            a,
            Convention::Static,
        )
        .unwrap();
        for k in [[0, 0], [1, 0], [-2, 3]] {
            let plus = cheb_projected(&q, Chirality::Plus, &k).unwrap();
            let minus = cheb_projected(&q, Chirality::Minus, &k).unwrap();
            assert!((&plus + &minus).max_abs_diff(&cheb_t0_multi(&q, &k)) < 1e-15);
            let again = chiral_part(staggered_sign(&k), Chirality::Plus, &plus);
            assert!(again.max_abs_diff(&plus) < 1e-15);
        }
    }

    #[test]
    fn projected_power_matches_literal_operator_power() {
        let sig = Signature::field_algebra(3).unwrap();
        let a = Multivector::from_real(sig, &[1.0, -0.5, 0.25, 2.0, 0.75, -1.5, 0.1, 0.9]).unwrap();
        let (c, mu) = (-0.35, 1.7);
        for sign in [Chirality::Plus, Chirality::Minus] {
            let op = |v: &Multivector| -> Multivector {
                v.scale(c) + kernel_projector(sign, v).scale(mu)
            };
            let mut literal = a.clone();
            for s in 0..6u32 {
                assert!(projected_power(c, mu, sign, s, &a).max_abs_diff(&literal) < 1e-12);
                literal = op(&literal);
            }
        }
    }

    #[test]
    fn kg_builder_examples() {
        let bx = LatticeBox::cube(1, 1.0, -4, 4, BoundaryMode::Shrinking).unwrap();
        let sol = build_kg_solution(1.0, 2f64.sqrt(), &[1.0], &one(1), &bx).unwrap();
        let vals: Vec<f64> = (0..4)
            .map(|k| sol.field.get(&[k]).unwrap().scalar_part().re)
            .collect();
        assert_eq!(vals, vec![1.0, 2.0, 7.0, 26.0]);
        assert!(kg_residual(&sol.field, 2f64.sqrt()).unwrap().1 < 1e-12);

        let flat = build_kg_solution(1.0, 0.0, &[1.0], &one(1), &bx).unwrap();
        assert_eq!(
            flat.field
                .max_abs_diff(&Field::constant(&bx, &one(1)))
                .unwrap(),
            0.0
        );
        assert!(build_kg_solution(1.0, 1.0, &[0.7], &one(1), &bx).is_err());
    }

    #[test]
    fn dirac_k_variant_transports_kernel() {
        let bx = LatticeBox::cube(1, 1.0, -4, 4, BoundaryMode::Shrinking).unwrap();
        let sol = build_dirac_solutions(
            1.0,
            2f64.sqrt(),
            &one(1),
            &bx,
            Semantics::Pointwise,
            MassTerm::K,
            Convention::Static,
        )
        .unwrap();
        assert!(sol.report.seed_kg < 1e-9);
        assert!(sol.report.kernel_transport < 1e-9);
        assert!(sol.report.cross_coupled.max() < 1e-9);
        let _ = Blade::UNIT;
    }

    #[test]
    fn recurrence_examples() {
        let bx = LatticeBox::cube(2, 1.0, -3, 3, BoundaryMode::Shrinking).unwrap();
        let p = ChebyshevParams::dirac_split(2, 1.0, 1.0, one(2), Convention::Static).unwrap();
        assert!(p.satisfies_kg_constraint());
        let r = check_recurrence(&p, &bx).unwrap();
        assert!(r.unprojected < 1e-12);
        assert!(r.mean_value < 1e-12);
        for pr in &r.projected {
            match pr.convention {
                Convention::Static => assert!(pr.residual < 1e-12),
                Convention::Shifted => assert!(pr.residual > 1e-3),
            }
        }
    }
}
