//! Momentum-space symbols of the lattice Dirac operators over the Brillouin
//! zone `[−π/h, π/h]^n`, zero scans and plane-wave consistency checks.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::{endomorphism_action, pseudoscalar_gamma, Multivector, Signature};
use crate::error::{Error, Result};
use crate::lattice::{
    central_dirac, dirac_dh, staggered_sign, star_laplacian, BoundaryMode, Field, LatticeBox,
    Semantics,
};

/// Magnitude below which a symbol counts as vanishing.
pub const ZERO_THRESHOLD: f64 = 1e-9;

/// A `Cl(n,n)`-valued symbol with `|S|² = ⟨S²⟩₀`.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolValue {
    pub value: Multivector,
    pub magnitude: f64,
}

impl SymbolValue {
    fn from_value(value: Multivector) -> Result<Self> {
        let square = value.geometric_product(&value)?;
        let magnitude = square.scalar_part().re.max(0.0).sqrt();
        Ok(SymbolValue { value, magnitude })
    }
}

fn check_xi(xi: &[f64]) -> Result<Signature> {
    if xi.is_empty() {
        return Err(Error::InvalidParameter(
            "momentum needs at least one component".into(),
        ));
    }
    Signature::operator_algebra(xi.len())
}

/// `Σ_j i e_j sin(hξ_j)/h`, the symbol of `½(D_h⁻ + D_h⁺)`.
pub fn central_symbol(xi: &[f64], h: f64) -> Result<SymbolValue> {
    let sig = check_xi(xi)?;
    let mut value = Multivector::zero(sig);
    for (j, &x) in xi.iter().enumerate() {
        value += &Multivector::generator(sig, j + 1)?.scale(Complex64::new(0.0, (h * x).sin() / h));
    }
    SymbolValue::from_value(value)
}

/// Symbol of `D_h`: the central part plus `Σ_j e_{j+n} (2/h) sin²(hξ_j/2)`.
pub fn dh_symbol(xi: &[f64], h: f64) -> Result<SymbolValue> {
    let sig = check_xi(xi)?;
    let n = xi.len();
    let mut value = central_symbol(xi, h)?.value;
    for (j, &x) in xi.iter().enumerate() {
        let s = (h * x / 2.0).sin();
        value += &Multivector::generator(sig, j + 1 + n)?.scale(2.0 / h * s * s);
    }
    SymbolValue::from_value(value)
}

/// `Σ_j (4/h²) sin²(hξ_j/2) − m²`.
pub fn kg_dispersion(xi: &[f64], h: f64, m: f64) -> f64 {
    xi.iter()
        .map(|&x| {
            let s = (h * x / 2.0).sin();
            4.0 / (h * h) * s * s
        })
        .sum::<f64>()
        - m * m
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SymbolOperator {
    Central,
    Dh,
    Kg { m: f64 },
}

impl SymbolOperator {
    pub fn tag(&self) -> &'static str {
        match self {
            SymbolOperator::Central => "central",
            SymbolOperator::Dh => "dh",
            SymbolOperator::Kg { .. } => "kg",
        }
    }

    /// Symbol magnitude at `ξ`; `|dispersion|` for the Klein–Gordon operator.
    pub fn magnitude(&self, xi: &[f64], h: f64) -> Result<f64> {
        Ok(match self {
            SymbolOperator::Central => central_symbol(xi, h)?.magnitude,
            SymbolOperator::Dh => dh_symbol(xi, h)?.magnitude,
            SymbolOperator::Kg { m } => kg_dispersion(xi, h, *m).abs(),
        })
    }
}

/// Uniform grid on the Brillouin zone, `N` nodes per axis after
/// identifying opposite faces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BrillouinGrid {
    pub n: usize,
    pub h: f64,
    pub points: usize,
}

impl BrillouinGrid {
    pub fn new(n: usize, h: f64, points: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "dimension must be at least 1".into(),
            ));
        }
        if h.is_nan() || h <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mesh width must be positive, got {h}"
            )));
        }
        if points < 4 || !points.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "grid needs an even number of points >= 4, got {points}"
            )));
        }
        Ok(BrillouinGrid { n, h, points })
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -PI / self.h + 2.0 * PI * i as f64 / (self.h * self.points as f64)
    }

    /// Node count after identification, `Nⁿ`.
    pub fn node_count(&self) -> usize {
        self.points.pow(self.n as u32)
    }

    fn node_with(&self, mut index: usize, per_axis: usize) -> Vec<f64> {
        let mut xi = vec![0.0; self.n];
        for j in (0..self.n).rev() {
            xi[j] = self.coordinate(index % per_axis);
            index /= per_axis;
        }
        xi
    }

    /// Node `index` of the identified torus grid, last axis fastest.
    pub fn node(&self, index: usize) -> Vec<f64> {
        self.node_with(index, self.points)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.node_count()).map(|i| self.node(i))
    }

    /// All `(N + 1)ⁿ` nodes of the closed cube, both faces included.
    pub fn closed_nodes(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        let per_axis = self.points + 1;
        (0..per_axis.pow(self.n as u32)).map(move |i| self.node_with(i, per_axis))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroScan {
    pub operator: SymbolOperator,
    pub grid: BrillouinGrid,
    pub threshold: f64,
    /// Zeros on the torus, opposite faces identified.
    pub count: usize,
    /// Zeros on the closed cube, each face counted separately.
    pub raw_count: usize,
    pub locations: Vec<Vec<f64>>,
}

fn scan(nodes: Vec<Vec<f64>>, op: SymbolOperator, h: f64) -> Result<Vec<Vec<f64>>> {
    let hits: Vec<Option<Vec<f64>>> = nodes
        .into_par_iter()
        .map(|xi| Ok((op.magnitude(&xi, h)? < ZERO_THRESHOLD).then_some(xi)))
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

pub fn zero_scan(grid: &BrillouinGrid, op: SymbolOperator) -> Result<ZeroScan> {
    let locations = scan(grid.nodes().collect(), op, grid.h)?;
    let raw_count = scan(grid.closed_nodes().collect(), op, grid.h)?.len();
    Ok(ZeroScan {
        operator: op,
        grid: *grid,
        threshold: ZERO_THRESHOLD,
        count: locations.len(),
        raw_count,
        locations,
    })
}

/// Writes `ξ_1, …, ξ_n, magnitude` for every torus node.
pub fn write_curve_csv<W: Write>(
    grid: &BrillouinGrid,
    op: SymbolOperator,
    writer: W,
) -> Result<()> {
    let rows: Vec<(Vec<f64>, f64)> = (0..grid.node_count())
        .into_par_iter()
        .map(|i| {
            let xi = grid.node(i);
            let mag = op.magnitude(&xi, grid.h)?;
            Ok((xi, mag))
        })
        .collect::<Result<_>>()?;
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (1..=grid.n).map(|j| format!("xi{j}")).collect();
    header.push("magnitude".into());
    w.write_record(&header)?;
    for (xi, mag) in rows {
        let mut row: Vec<String> = xi.iter().map(f64::to_string).collect();
        row.push(mag.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `e^{i⟨ξ, x⟩} w` on the box.
pub fn plane_wave(bx: &LatticeBox, xi: &[f64], w: &Multivector) -> Field {
    let h = bx.h();
    Field::from_fn(bx, |k| {
        let phase: f64 = k.iter().zip(xi).map(|(&kj, &x)| kj as f64 * h * x).sum();
        w.scale(Complex64::from_polar(1.0, phase))
    })
}

fn require_periodic(bx: &LatticeBox, xi: &[f64]) -> Result<()> {
    if bx.mode() != BoundaryMode::Periodic {
        return Err(Error::InvalidBox(
            "plane-wave checks need a periodic box".into(),
        ));
    }
    if xi.len() != bx.n() {
        return Err(Error::InvalidParameter(format!(
            "momentum has {} components for a {}-dimensional box",
            xi.len(),
            bx.n()
        )));
    }
    Ok(())
}

fn require_commensurate(bx: &LatticeBox, xi: &[f64]) -> Result<()> {
    for (j, &x) in xi.iter().enumerate() {
        let turns = x * bx.h() * bx.extent(j) as f64 / (2.0 * PI);
        if (turns - turns.round()).abs() > 1e-9 {
            return Err(Error::Incommensurate);
        }
    }
    Ok(())
}

/// Max deviation between the lattice operator applied to a plane wave and
/// the symbol applied to its amplitude.
pub fn plane_wave_check(
    xi: &[f64],
    op: SymbolOperator,
    bx: &LatticeBox,
    w: &Multivector,
) -> Result<f64> {
    require_periodic(bx, xi)?;
    require_commensurate(bx, xi)?;
    let h = bx.h();
    let pw = plane_wave(bx, xi, w);
    let (applied, symbol_w) = match op {
        SymbolOperator::Central => (
            central_dirac(&pw)?,
            endomorphism_action(&central_symbol(xi, h)?.value, w)?,
        ),
        SymbolOperator::Dh => (
            dirac_dh(&pw, Semantics::Pointwise)?,
            endomorphism_action(&dh_symbol(xi, h)?.value, w)?,
        ),
        SymbolOperator::Kg { m } => (
            star_laplacian(&pw)?.scale(-1.0).sub(&pw.scale(m * m))?,
            w.scale(kg_dispersion(xi, h, m)),
        ),
    };
    let expected = plane_wave(bx, xi, &symbol_w);
    applied.max_abs_diff(&expected)
}

/// Max deviation between `σ(x) e^{i⟨ξ, x⟩} w` and `e^{i⟨ξ + (π/h)𝟙, x⟩} w`.
pub fn chi_momentum_shift_check(xi: &[f64], bx: &LatticeBox, w: &Multivector) -> Result<f64> {
    require_periodic(bx, xi)?;
    if (0..bx.n()).any(|j| bx.extent(j) % 2 != 0) {
        return Err(Error::InvalidBox(
            "staggered sign needs even extents".into(),
        ));
    }
    let pw = plane_wave(bx, xi, w);
    let signed = pw.map(|k, v| v.scale(staggered_sign(k)));
    let moved: Vec<f64> = xi.iter().map(|x| x + PI / bx.h()).collect();
    signed.max_abs_diff(&plane_wave(bx, &moved, w))
}

/// Max coefficient of `S γ + γ S` for the `D_h` symbol at `ξ`.
pub fn gamma_anticommutator(xi: &[f64], h: f64) -> Result<f64> {
    let s = dh_symbol(xi, h)?.value;
    let gamma = pseudoscalar_gamma(xi.len())?;
    let ac = s.geometric_product(&gamma)? + gamma.geometric_product(&s)?;
    Ok(ac.max_abs())
}

/// Max coefficient of `(S − mγ)² − (Σ_j (4/h²) sin²(hξ_j/2) + m²)`.
pub fn massive_square_defect(xi: &[f64], h: f64, m: f64) -> Result<f64> {
    let s = dh_symbol(xi, h)?.value;
    let gamma = pseudoscalar_gamma(xi.len())?;
    let d = &s - &gamma.scale(m);
    let sq = d.geometric_product(&d)?;
    let expected = Multivector::scalar(sq.sig(), kg_dispersion(xi, h, 0.0) + m * m);
    Ok(sq.max_abs_diff(&expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(n: usize) -> Multivector {
        Multivector::one(Signature::field_algebra(n).unwrap())
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(central_symbol(&[0.0], 1.0).unwrap().magnitude, 0.0);
        assert!(central_symbol(&[PI], 1.0).unwrap().magnitude < 1e-15);
        assert!((central_symbol(&[PI / 2.0], 1.0).unwrap().magnitude - 1.0).abs() < 1e-15);
        assert_eq!(dh_symbol(&[0.0, 0.0], 1.0).unwrap().value.max_abs(), 0.0);
        assert!((dh_symbol(&[PI], 1.0).unwrap().magnitude - 2.0).abs() < 1e-14);
    }

    #[test]
    fn dispersion_examples() {
        assert_eq!(kg_dispersion(&[0.0], 1.0, 0.0), 0.0);
        assert!((kg_dispersion(&[PI], 1.0, 0.0) - 4.0).abs() < 1e-14);
        assert!((kg_dispersion(&[PI, PI], 1.0, 2.0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn grid_validation() {
        assert!(BrillouinGrid::new(1, 1.0, 5).is_err());
        assert!(BrillouinGrid::new(1, 1.0, 2).is_err());
        assert!(BrillouinGrid::new(0, 1.0, 8).is_err());
        let g = BrillouinGrid::new(2, 0.5, 8).unwrap();
        assert_eq!(g.node_count(), 64);
        assert_eq!(g.closed_nodes().count(), 81);
        assert_eq!(g.node(0), vec![-2.0 * PI, -2.0 * PI]);
    }

    #[test]
    fn zero_scan_examples() {
        let g = BrillouinGrid::new(1, 1.0, 64).unwrap();
        let c = zero_scan(&g, SymbolOperator::Central).unwrap();
        assert_eq!((c.count, c.raw_count), (2, 3));
        let d = zero_scan(&g, SymbolOperator::Dh).unwrap();
        assert_eq!((d.count, d.raw_count), (1, 1));
        assert_eq!(d.locations, vec![vec![0.0]]);
        assert_eq!(
            zero_scan(&g, SymbolOperator::Kg { m: 1.0 }).unwrap().count,
            0
        );
    }

    #[test]
    fn plane_wave_examples() {
        let bx = LatticeBox::cube(1, 1.0, 0, 7, BoundaryMode::Periodic).unwrap();
        let w = one(1);
        for op in [
            SymbolOperator::Central,
            SymbolOperator::Dh,
            SymbolOperator::Kg { m: 0.3 },
        ] {
            assert!(plane_wave_check(&[0.0], op, &bx, &w).unwrap() < 1e-12);
            assert!(plane_wave_check(&[PI / 4.0], op, &bx, &w).unwrap() < 1e-10);
        }
        assert_eq!(
            plane_wave_check(&[0.3], SymbolOperator::Dh, &bx, &w).unwrap_err(),
            Error::Incommensurate
        );
        let shrinking = bx.with_mode(BoundaryMode::Shrinking);
        assert!(plane_wave_check(&[0.0], SymbolOperator::Dh, &shrinking, &w).is_err());

        // At the zone corner the central operator annihilates the wave while
        // D_h keeps the second-block term.
        let applied = dirac_dh(&plane_wave(&bx, &[PI], &w), Semantics::Pointwise).unwrap();
        assert!(applied.max_norm() > 1.0);
        assert!(
            central_dirac(&plane_wave(&bx, &[PI], &w))
                .unwrap()
                .max_norm()
                < 1e-12
        );
    }

    #[test]
    fn staggered_sign_moves_momentum() {
        let bx = LatticeBox::cube(2, 1.0, 0, 7, BoundaryMode::Periodic).unwrap();
        let w = one(2);
        assert!(chi_momentum_shift_check(&[0.0, 0.0], &bx, &w).unwrap() < 1e-12);
        assert!(chi_momentum_shift_check(&[PI / 4.0, -PI / 2.0], &bx, &w).unwrap() < 1e-12);
        let odd = LatticeBox::cube(1, 1.0, 0, 6, BoundaryMode::Periodic).unwrap();
        assert!(chi_momentum_shift_check(&[0.0], &odd, &one(1)).is_err());
    }

    #[test]
    fn gamma_identities() {
        for xi in [[0.3, -1.1], [PI, 0.0]] {
            assert!(gamma_anticommutator(&xi, 0.5).unwrap() < 1e-12);
            assert!(massive_square_defect(&xi, 0.5, 1.3).unwrap() < 1e-12);
        }
    }
}
