//! Difference operators, lattice Dirac operators and residual evaluators.
//!
//! Axes are 1-based throughout, matching the generator numbering.

use serde::Serialize;

use crate::clifford::{check_axis, witt_lower, witt_raise, Multivector};
use crate::error::{Error, Result};

use super::{staggered_sign, BoundaryMode, Field, MassTerm, Semantics};

/// Sign selecting one of the two chirality projectors `½(1 ± X)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    pub fn sign(&self) -> f64 {
        match self {
            Chirality::Plus => 1.0,
            Chirality::Minus => -1.0,
        }
    }

    pub fn opposite(&self) -> Chirality {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }
}

fn sum_fields(mut terms: impl Iterator<Item = Result<Field>>) -> Result<Field> {
    let mut acc = terms.next().ok_or(Error::EmptyRegion)??;
    for t in terms {
        acc = acc.add(&t?)?;
    }
    Ok(acc)
}

/// `g(k) = f(k + s·e_j)`.
pub fn shift(f: &Field, axis: usize, s: i64) -> Result<Field> {
    let bx = f.lattice();
    check_axis(axis, bx.n())?;
    let a = axis - 1;
    let valid = match bx.mode() {
        BoundaryMode::Periodic => f.valid_region().clone(),
        BoundaryMode::Shrinking => {
            if s >= 0 {
                f.valid_region().shrink(a, 0, s)
            } else {
                f.valid_region().shrink(a, -s, 0)
            }
        }
    };
    if valid.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let zero = Multivector::zero(bx.value_signature());
    let stride = bx.stride(a) as i64;
    let mut values = Vec::with_capacity(bx.site_count());
    bx.walk(|i, k| {
        if !valid.contains(k) {
            values.push(zero.clone());
            return;
        }
        let target = match bx.mode() {
            BoundaryMode::Periodic => bx.wrap(a, k[a] + s),
            BoundaryMode::Shrinking => k[a] + s,
        };
        let src = i as i64 + (target - k[a]) * stride;
        values.push(f.values()[src as usize].clone());
    });
    Ok(Field::from_parts(bx.clone(), values, valid))
}

/// `(f(x + h e_j) - f(x)) / h`.
pub fn forward_diff(f: &Field, axis: usize) -> Result<Field> {
    Ok(shift(f, axis, 1)?.sub(f)?.scale(1.0 / f.h()))
}

/// `(f(x) - f(x - h e_j)) / h`.
pub fn backward_diff(f: &Field, axis: usize) -> Result<Field> {
    Ok(f.sub(&shift(f, axis, -1)?)?.scale(1.0 / f.h()))
}

/// `Δ_h f = Σ_j (f(x + h e_j) + f(x - h e_j) - 2 f(x)) / h²`.
pub fn star_laplacian(f: &Field) -> Result<Field> {
    let h2 = f.h() * f.h();
    sum_fields((1..=f.n()).map(|j| {
        let up = shift(f, j, 1)?;
        let down = shift(f, j, -1)?;
        Ok(up.add(&down)?.sub(&f.scale(2.0))?.scale(1.0 / h2))
    }))
}

/// Sum of the two one-sided neighbours along every axis,
/// `Σ_j f(x + h e_j) + f(x - h e_j)`.
pub fn neighbour_sum(f: &Field) -> Result<Field> {
    sum_fields((1..=f.n()).map(|j| shift(f, j, 1)?.add(&shift(f, j, -1)?)))
}

pub fn witt_lower_field(f: &Field, axis: usize) -> Result<Field> {
    f.try_map(|_, v| witt_lower(axis, v))
}

pub fn witt_raise_field(f: &Field, axis: usize) -> Result<Field> {
    f.try_map(|_, v| witt_raise(axis, v))
}

/// `∂_h⁺ = Σ_j e_j⁺ ∂_h^{+j}`.
///
/// Under [`Semantics::Module`] the symbol is first moved to the right of the
/// differenced function, so the argument is evaluated at `x - h e_j` and
/// involuted before `e_j⁺` acts.
pub fn dirac_plus(f: &Field, sem: Semantics) -> Result<Field> {
    sum_fields((1..=f.n()).map(|j| {
        let d = forward_diff(f, j)?;
        let d = match sem {
            Semantics::Pointwise => d,
            Semantics::Module => shift(&d, j, -1)?.main_involution(),
        };
        witt_lower_field(&d, j)
    }))
}

/// `∂_h⁻ = Σ_j e_j⁻ ∂_h^{-j}`; the module reading evaluates at `x + h e_j`.
pub fn dirac_minus(f: &Field, sem: Semantics) -> Result<Field> {
    sum_fields((1..=f.n()).map(|j| {
        let d = backward_diff(f, j)?;
        let d = match sem {
            Semantics::Pointwise => d,
            Semantics::Module => shift(&d, j, 1)?.main_involution(),
        };
        witt_raise_field(&d, j)
    }))
}

/// `D_h = ∂_h⁻ - ∂_h⁺`.
pub fn dirac_dh(f: &Field, sem: Semantics) -> Result<Field> {
    dirac_minus(f, sem)?.sub(&dirac_plus(f, sem)?)
}

/// Central-difference Dirac operator `½(D_h⁻ + D_h⁺) = Σ_j e_j (∂^{-j} + ∂^{+j})/2`,
/// with `e_j` acting by left multiplication.
pub fn central_dirac(f: &Field) -> Result<Field> {
    sum_fields((1..=f.n()).map(|j| {
        let avg = forward_diff(f, j)?.add(&backward_diff(f, j)?)?.scale(0.5);
        avg.try_map(|_, v| v.left_mul_generator(j))
    }))
}

/// `□_h f = -Σ_j E_{j+n}(∂^{-j} ∂^{+j} f)` with `E_{j+n}(a) = a′ e_j`.
pub fn dalembert(f: &Field) -> Result<Field> {
    let sum = sum_fields((1..=f.n()).map(|j| {
        let second = backward_diff(&forward_diff(f, j)?, j)?;
        second.try_map(|_, v| v.main_involution().right_mul_generator(j))
    }))?;
    Ok(sum.scale(-1.0))
}

/// `χ_h f (k) = σ(k) K f(k)`.
pub fn chi_action(f: &Field) -> Field {
    f.map(|k, v| v.main_involution().scale(staggered_sign(k)))
}

/// `K f (k) = K f(k)`, the site-independent factor of `χ_h`.
pub fn k_action(f: &Field) -> Field {
    f.main_involution()
}

pub fn mass_action(f: &Field, mass_term: MassTerm) -> Field {
    match mass_term {
        MassTerm::Chi => chi_action(f),
        MassTerm::K => k_action(f),
    }
}

/// `½(f ± χ_h f)`.
pub fn project_chiral(f: &Field, sign: Chirality) -> Result<Field> {
    project(f, sign, MassTerm::Chi)
}

/// `½(f ± X f)` for `X = χ_h` or `K`.
pub fn project(f: &Field, sign: Chirality, mass_term: MassTerm) -> Result<Field> {
    let xf = mass_action(f, mass_term);
    Ok(f.add(&xf.scale(sign.sign()))?.scale(0.5))
}

/// `Δ_h f - m² f`, with its max norm.
pub fn kg_residual(f: &Field, m: f64) -> Result<(Field, f64)> {
    let r = star_laplacian(f)?.sub(&f.scale(m * m))?;
    let norm = r.max_norm();
    Ok((r, norm))
}

/// `Σ_j f(x + h e_j) + f(x - h e_j) - ((mh)² + 2n) f(x)`.
pub fn kg_mean_value_residual(f: &Field, m: f64) -> Result<(Field, f64)> {
    let mh = m * f.h();
    let centre = (mh * mh + 2.0 * f.n() as f64) * 1.0;
    let r = neighbour_sum(f)?.sub(&f.scale(centre))?;
    let norm = r.max_norm();
    Ok((r, norm))
}

/// `D_h f - m X f`, with its max norm.
pub fn dirac_residual(
    f: &Field,
    m: f64,
    sem: Semantics,
    mass_term: MassTerm,
) -> Result<(Field, f64)> {
    let r = dirac_dh(f, sem)?.sub(&mass_action(f, mass_term).scale(m))?;
    let norm = r.max_norm();
    Ok((r, norm))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoupledResiduals {
    /// Max norm of the equation for the `+` component.
    pub plus: f64,
    /// Max norm of the equation for the `-` component.
    pub minus: f64,
}

impl CoupledResiduals {
    pub fn max(&self) -> f64 {
        self.plus.max(self.minus)
    }
}

fn require_same_box(a: &Field, b: &Field) -> Result<()> {
    if !a.lattice().compatible(b.lattice()) {
        return Err(Error::BoxMismatch);
    }
    Ok(())
}

/// Residuals of the chirally split system `D_h f₊ = m f₊`, `D_h f₋ = -m f₋`.
pub fn coupled_residuals(
    f_plus: &Field,
    f_minus: &Field,
    m: f64,
    sem: Semantics,
) -> Result<CoupledResiduals> {
    require_same_box(f_plus, f_minus)?;
    let plus = dirac_dh(f_plus, sem)?.sub(&f_plus.scale(m))?.max_norm();
    let minus = dirac_dh(f_minus, sem)?.add(&f_minus.scale(m))?.max_norm();
    Ok(CoupledResiduals { plus, minus })
}

/// Residuals of `D_h f₊ = -m f₋` and `D_h f₋ = m f₊`: the eigenspace
/// components of `D_h f = m X f` when `D_h` anticommutes with `X`, since
/// `D_h` then maps each eigenspace of `X` onto the other.
pub fn cross_coupled_residuals(
    f_plus: &Field,
    f_minus: &Field,
    m: f64,
    sem: Semantics,
) -> Result<CoupledResiduals> {
    require_same_box(f_plus, f_minus)?;
    let plus = dirac_dh(f_plus, sem)?.add(&f_minus.scale(m))?.max_norm();
    let minus = dirac_dh(f_minus, sem)?.sub(&f_plus.scale(m))?.max_norm();
    Ok(CoupledResiduals { plus, minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{Blade, Multivector, Signature};
    use crate::lattice::LatticeBox;
    use crate::sample::{random_field, rng};

    fn line(lo: i64, hi: i64) -> LatticeBox {
        LatticeBox::cube(1, 1.0, lo, hi, BoundaryMode::Shrinking).unwrap()
    }

    fn scalar_field(bx: &LatticeBox, f: impl Fn(&[i64]) -> f64) -> Field {
        let sig = bx.value_signature();
        Field::from_fn(bx, |k| Multivector::scalar(sig, f(k)))
    }

    fn scalar_at(f: &Field, k: &[i64]) -> f64 {
        f.get(k).unwrap().scalar_part().re
    }

    #[test]
    fn shift_examples() {
        let bx = line(-3, 5);
        let sq = scalar_field(&bx, |k| (k[0] * k[0]) as f64);
        let up = shift(&sq, 1, 1).unwrap();
        assert_eq!(scalar_at(&up, &[2]), 9.0);
        assert!(up.get(&[5]).is_none());

        let c = scalar_field(&bx, |_| 4.0);
        assert_eq!(shift(&c, 1, 1).unwrap().max_abs_diff(&c).unwrap(), 0.0);

        let mut r = rng(1);
        let f = random_field(&bx, &mut r);
        let back = shift(&shift(&f, 1, 1).unwrap(), 1, -1).unwrap();
        assert_eq!(back.max_abs_diff(&f).unwrap(), 0.0);
        assert_eq!(back.valid_region().lo, vec![-2]);
        assert_eq!(back.valid_region().hi, vec![4]);
    }

    #[test]
    fn shift_rejects_exhausted_regions() {
        let bx = line(0, 0);
        let f = Field::zero(&bx);
        assert_eq!(shift(&f, 1, 1).unwrap_err(), Error::EmptyRegion);
        assert_eq!(forward_diff(&f, 1).unwrap_err(), Error::EmptyRegion);
        assert!(matches!(shift(&f, 2, 1), Err(Error::AxisOutOfRange { .. })));
    }

    #[test]
    fn periodic_shift_wraps() {
        let bx = LatticeBox::cube(1, 1.0, 0, 3, BoundaryMode::Periodic).unwrap();
        let f = scalar_field(&bx, |k| k[0] as f64);
        let up = shift(&f, 1, 1).unwrap();
        assert_eq!(scalar_at(&up, &[3]), 0.0);
        assert_eq!(scalar_at(&up, &[0]), 1.0);
    }

    #[test]
    fn difference_examples() {
        let bx = line(-4, 4);
        let c = scalar_field(&bx, |_| 2.5);
        assert_eq!(forward_diff(&c, 1).unwrap().max_norm(), 0.0);
        assert_eq!(star_laplacian(&c).unwrap().max_norm(), 0.0);

        let id = scalar_field(&bx, |k| k[0] as f64);
        let one = scalar_field(&bx, |_| 1.0);
        assert_eq!(
            forward_diff(&id, 1).unwrap().max_abs_diff(&one).unwrap(),
            0.0
        );
        assert_eq!(
            backward_diff(&id, 1).unwrap().max_abs_diff(&one).unwrap(),
            0.0
        );

        let sq = scalar_field(&bx, |k| (k[0] * k[0]) as f64);
        let two = scalar_field(&bx, |_| 2.0);
        assert_eq!(
            star_laplacian(&sq).unwrap().max_abs_diff(&two).unwrap(),
            0.0
        );
    }

    #[test]
    fn dirac_examples() {
        let bx = line(-4, 4);
        let sig = bx.value_signature();
        let c = scalar_field(&bx, |_| 3.0);
        for sem in Semantics::ALL {
            assert_eq!(dirac_minus(&c, sem).unwrap().max_norm(), 0.0);
            assert_eq!(dirac_dh(&c, sem).unwrap().max_norm(), 0.0);
        }
        let id = scalar_field(&bx, |k| k[0] as f64);
        let dm = dirac_minus(&id, Semantics::Pointwise).unwrap();
        let e1 = Field::constant(&bx, &Multivector::generator(sig, 1).unwrap());
        assert_eq!(dm.max_abs_diff(&e1).unwrap(), 0.0);
    }

    #[test]
    fn dalembert_example() {
        let bx = line(-4, 4);
        let sig = bx.value_signature();
        let sq = scalar_field(&bx, |k| (k[0] * k[0]) as f64);
        let expected = Field::constant(&bx, &Multivector::generator(sig, 1).unwrap().scale(-2.0));
        assert_eq!(
            dalembert(&sq).unwrap().max_abs_diff(&expected).unwrap(),
            0.0
        );
        let c = scalar_field(&bx, |_| 1.0);
        assert_eq!(dalembert(&c).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn chi_examples() {
        let bx = line(-2, 2);
        let sig = bx.value_signature();
        let e1 = Multivector::generator(sig, 1).unwrap();
        let f = Field::constant(&bx, &e1);
        assert_eq!(chi_action(&f).get(&[1]).unwrap(), &e1);
        assert_eq!(chi_action(&f).get(&[0]).unwrap(), &-&e1);

        let bx2 = LatticeBox::cube(2, 1.0, -1, 1, BoundaryMode::Shrinking).unwrap();
        let one = Multivector::one(bx2.value_signature());
        let g = Field::constant(&bx2, &one);
        assert_eq!(chi_action(&g).get(&[0, 0]).unwrap(), &one);
        assert_eq!(chi_action(&g).get(&[1, 0]).unwrap(), &-&one);
    }

    #[test]
    fn k_action_fixes_scalars() {
        let bx = line(-2, 2);
        let f = scalar_field(&bx, |k| k[0] as f64 + 0.5);
        assert_eq!(k_action(&f), f);
    }

    #[test]
    fn kg_residual_examples() {
        let bx = line(-5, 5);
        let c = scalar_field(&bx, |_| 1.0);
        assert_eq!(kg_residual(&c, 0.0).unwrap().1, 0.0);

        // T_{|k|}(2): 1, 2, 7, 26, 97, 362
        let t = [1.0, 2.0, 7.0, 26.0, 97.0, 362.0];
        let cheb = scalar_field(&bx, |k| t[k[0].unsigned_abs() as usize]);
        assert!(kg_residual(&cheb, 2f64.sqrt()).unwrap().1 < 1e-12);
        assert!(kg_mean_value_residual(&cheb, 2f64.sqrt()).unwrap().1 < 1e-12);

        let mut r = rng(3);
        let f = random_field(&bx, &mut r);
        assert!(kg_residual(&f, 0.7).unwrap().1 > 1e-3);
    }

    #[test]
    fn residual_needs_interior() {
        let bx = line(0, 1);
        let f = Field::zero(&bx);
        assert_eq!(kg_residual(&f, 1.0).unwrap_err(), Error::EmptyRegion);
    }

    #[test]
    fn coupled_residuals_reject_box_mismatch() {
        let a = Field::zero(&line(-2, 2));
        let b = Field::zero(&line(-3, 3));
        assert_eq!(
            coupled_residuals(&a, &b, 1.0, Semantics::Pointwise).unwrap_err(),
            Error::BoxMismatch
        );
        let sig = Signature::field_algebra(1).unwrap();
        let one = Field::constant(&line(-2, 2), &Multivector::one(sig));
        let res = coupled_residuals(&one, &one, 0.0, Semantics::Pointwise).unwrap();
        assert_eq!(res.max(), 0.0);
        let _ = Blade::UNIT;
    }
}
