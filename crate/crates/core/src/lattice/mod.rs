//! `Cl(0,n)`-valued lattice functions on finite boxes of `hZ^n`.
//!
//! A [`Field`] stores one multivector per integer site `k` of its box (the
//! physical site is `x = k·h`) together with a valid region. In
//! [`BoundaryMode::Shrinking`] every one-step stencil drops the layer of
//! sites whose neighbour is missing, so results are only ever reported where
//! the operator is fully defined. [`BoundaryMode::Periodic`] wraps instead
//! and keeps the whole box valid; it exists for plane-wave checks.

mod io;
pub mod ops;

pub use io::{read_csv, write_csv};
pub use ops::*;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clifford::{Multivector, Signature};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    Shrinking,
    Periodic,
}

/// How Witt symbols compose with lattice functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Semantics {
    /// Witt symbols act on the value at the same site.
    #[serde(rename = "s1")]
    Pointwise,
    /// Moving `e_j^±` past a function shifts its argument by `∓h e_j` and
    /// applies the main involution: `e_j^± f(x) = f(x ∓ h e_j)′ e_j^±`.
    #[serde(rename = "s2")]
    Module,
}

impl Semantics {
    pub const ALL: [Semantics; 2] = [Semantics::Pointwise, Semantics::Module];

    pub fn tag(&self) -> &'static str {
        match self {
            Semantics::Pointwise => "s1",
            Semantics::Module => "s2",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Mass-term dressing in the lattice Dirac equation `D_h f = m X f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MassTerm {
    /// The staggered action `χ_h(x) = σ(x) K`.
    Chi,
    /// The site-independent involution `K = Π_j [e_j⁺, e_j⁻]`.
    K,
}

impl MassTerm {
    pub fn tag(&self) -> &'static str {
        match self {
            MassTerm::Chi => "chi",
            MassTerm::K => "k",
        }
    }
}

impl fmt::Display for MassTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Inclusive per-axis integer bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Region {
    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        k.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (l, h))| l <= x && x <= h)
    }

    pub fn intersect(&self, other: &Region) -> Region {
        Region {
            lo: self
                .lo
                .iter()
                .zip(&other.lo)
                .map(|(a, b)| *a.max(b))
                .collect(),
            hi: self
                .hi
                .iter()
                .zip(&other.hi)
                .map(|(a, b)| *a.min(b))
                .collect(),
        }
    }

    /// Moves the bounds of `axis` (0-based) inward by the given amounts.
    pub fn shrink(&self, axis: usize, lo_by: i64, hi_by: i64) -> Region {
        let mut r = self.clone();
        r.lo[axis] += lo_by;
        r.hi[axis] -= hi_by;
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeBox {
    n: usize,
    h: f64,
    lo: Vec<i64>,
    hi: Vec<i64>,
    mode: BoundaryMode,
}

impl LatticeBox {
    pub fn new(h: f64, lo: Vec<i64>, hi: Vec<i64>, mode: BoundaryMode) -> Result<Self> {
        let n = lo.len();
        if n == 0 || hi.len() != n {
            return Err(Error::InvalidBox(format!(
                "bounds need one entry per axis (got {} and {})",
                lo.len(),
                hi.len()
            )));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidBox(format!(
                "mesh width must be positive, got {h}"
            )));
        }
        if lo.iter().zip(&hi).any(|(l, u)| l > u) {
            return Err(Error::InvalidBox("lo exceeds hi on some axis".into()));
        }
        // Keeps site indices addressable and the value algebra within bounds.
        Signature::field_algebra(n)?;
        Ok(LatticeBox { n, h, lo, hi, mode })
    }

    /// Same bounds `lo..=hi` on every axis.
    pub fn cube(n: usize, h: f64, lo: i64, hi: i64, mode: BoundaryMode) -> Result<Self> {
        Self::new(h, vec![lo; n], vec![hi; n], mode)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn with_mode(&self, mode: BoundaryMode) -> LatticeBox {
        LatticeBox {
            mode,
            ..self.clone()
        }
    }

    pub fn value_signature(&self) -> Signature {
        Signature::field_algebra(self.n).expect("validated at construction")
    }

    pub fn extent(&self, axis: usize) -> i64 {
        self.hi[axis] - self.lo[axis] + 1
    }

    pub fn site_count(&self) -> usize {
        (0..self.n).map(|j| self.extent(j) as usize).product()
    }

    pub fn full_region(&self) -> Region {
        Region {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        }
    }

    /// Row-major index with the last axis fastest.
    pub fn index(&self, k: &[i64]) -> usize {
        k.iter()
            .zip(&self.lo)
            .enumerate()
            .fold(0usize, |idx, (j, (x, lo))| {
                idx * self.extent(j) as usize + (x - lo) as usize
            })
    }

    pub fn site(&self, mut index: usize) -> Vec<i64> {
        let mut k = vec![0i64; self.n];
        for j in (0..self.n).rev() {
            let ext = self.extent(j) as usize;
            k[j] = self.lo[j] + (index % ext) as i64;
            index /= ext;
        }
        k
    }

    /// Calls `f(index, site)` for every site in index order, reusing one
    /// coordinate buffer.
    pub fn walk(&self, mut f: impl FnMut(usize, &[i64])) {
        let mut k = self.lo.clone();
        for i in 0..self.site_count() {
            f(i, &k);
            for j in (0..self.n).rev() {
                if k[j] < self.hi[j] {
                    k[j] += 1;
                    break;
                }
                k[j] = self.lo[j];
            }
        }
    }

    /// Index offset of one step along `axis` (0-based).
    pub fn stride(&self, axis: usize) -> usize {
        (axis + 1..self.n)
            .map(|j| self.extent(j) as usize)
            .product()
    }

    pub fn sites(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.site_count()).map(move |i| self.site(i))
    }

    /// Wraps a coordinate back into the box along `axis`.
    pub fn wrap(&self, axis: usize, x: i64) -> i64 {
        self.lo[axis] + (x - self.lo[axis]).rem_euclid(self.extent(axis))
    }

    /// Same lattice geometry; the boundary handling may differ only if both
    /// are otherwise identical, which is rejected too.
    pub fn compatible(&self, other: &LatticeBox) -> bool {
        self == other
    }
}

/// Staggered sign `σ(k) = Π_j (-1)^{k_j}`.
pub fn staggered_sign(k: &[i64]) -> f64 {
    if k.iter().map(|x| x.rem_euclid(2)).sum::<i64>() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    bx: LatticeBox,
    values: Vec<Multivector>,
    valid: Region,
}

impl Field {
    pub fn from_fn(bx: &LatticeBox, mut f: impl FnMut(&[i64]) -> Multivector) -> Field {
        let values = bx.sites().map(|k| f(&k)).collect();
        Field {
            bx: bx.clone(),
            values,
            valid: bx.full_region(),
        }
    }

    pub fn try_from_fn(
        bx: &LatticeBox,
        mut f: impl FnMut(&[i64]) -> Result<Multivector>,
    ) -> Result<Field> {
        let sig = bx.value_signature();
        let values = bx
            .sites()
            .map(|k| {
                let v = f(&k)?;
                if v.sig() != sig {
                    return Err(Error::SignatureMismatch(
                        v.sig().to_string(),
                        sig.to_string(),
                    ));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Field {
            bx: bx.clone(),
            values,
            valid: bx.full_region(),
        })
    }

    pub fn constant(bx: &LatticeBox, value: &Multivector) -> Field {
        Field::from_fn(bx, |_| value.clone())
    }

    pub fn zero(bx: &LatticeBox) -> Field {
        Field::constant(bx, &Multivector::zero(bx.value_signature()))
    }

    pub(crate) fn from_parts(bx: LatticeBox, values: Vec<Multivector>, valid: Region) -> Field {
        Field { bx, values, valid }
    }

    pub fn lattice(&self) -> &LatticeBox {
        &self.bx
    }

    pub fn valid_region(&self) -> &Region {
        &self.valid
    }

    pub fn h(&self) -> f64 {
        self.bx.h
    }

    pub fn n(&self) -> usize {
        self.bx.n
    }

    /// Value at `k` if it lies in the valid region.
    pub fn get(&self, k: &[i64]) -> Option<&Multivector> {
        if self.valid.contains(k) {
            Some(&self.values[self.bx.index(k)])
        } else {
            None
        }
    }

    /// All stored values in index order, zero outside the valid region.
    pub(crate) fn values(&self) -> &[Multivector] {
        &self.values
    }

    pub(crate) fn value_at(&self, k: &[i64]) -> &Multivector {
        &self.values[self.bx.index(k)]
    }

    /// Sites of the valid region in index order.
    pub fn valid_sites(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        self.bx.sites().filter(|k| self.valid.contains(k))
    }

    /// Restricts the valid region further.
    pub fn restrict(&self, region: &Region) -> Result<Field> {
        let valid = self.valid.intersect(region);
        if valid.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let mut out = self.clone();
        out.valid = valid;
        out.zero_outside();
        Ok(out)
    }

    fn zero_outside(&mut self) {
        let zero = Multivector::zero(self.bx.value_signature());
        for (i, v) in self.values.iter_mut().enumerate() {
            if !self.valid.contains(&self.bx.site(i)) {
                *v = zero.clone();
            }
        }
    }

    /// Sitewise map over the valid region; other sites stay zero.
    pub fn map(&self, mut f: impl FnMut(&[i64], &Multivector) -> Multivector) -> Field {
        let zero = Multivector::zero(self.bx.value_signature());
        let mut values = Vec::with_capacity(self.values.len());
        self.bx.walk(|i, k| {
            values.push(if self.valid.contains(k) {
                f(k, &self.values[i])
            } else {
                zero.clone()
            });
        });
        Field {
            bx: self.bx.clone(),
            values,
            valid: self.valid.clone(),
        }
    }

    pub fn try_map(
        &self,
        mut f: impl FnMut(&[i64], &Multivector) -> Result<Multivector>,
    ) -> Result<Field> {
        let zero = Multivector::zero(self.bx.value_signature());
        let mut values = Vec::with_capacity(self.values.len());
        let mut failure = None;
        self.bx.walk(|i, k| {
            if failure.is_some() {
                return;
            }
            if !self.valid.contains(k) {
                values.push(zero.clone());
                return;
            }
            match f(k, &self.values[i]) {
                Ok(v) => values.push(v),
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(Field {
            bx: self.bx.clone(),
            values,
            valid: self.valid.clone(),
        })
    }

    /// Sitewise combination on the intersection of the valid regions.
    pub fn zip_with(
        &self,
        other: &Field,
        mut f: impl FnMut(&Multivector, &Multivector) -> Multivector,
    ) -> Result<Field> {
        if !self.bx.compatible(&other.bx) {
            return Err(Error::BoxMismatch);
        }
        let valid = self.valid.intersect(&other.valid);
        if valid.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let zero = Multivector::zero(self.bx.value_signature());
        let mut values = Vec::with_capacity(self.values.len());
        self.bx.walk(|i, k| {
            values.push(if valid.contains(k) {
                f(&self.values[i], &other.values[i])
            } else {
                zero.clone()
            });
        });
        Ok(Field {
            bx: self.bx.clone(),
            values,
            valid,
        })
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise geometric product `f(x) g(x)`.
    pub fn mul(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, s: impl Into<crate::clifford::Scalar>) -> Field {
        let s = s.into();
        self.map(|_, v| v.scale(s))
    }

    pub fn main_involution(&self) -> Field {
        self.map(|_, v| v.main_involution())
    }

    /// Largest coefficient modulus over the valid region.
    pub fn max_norm(&self) -> f64 {
        let mut worst = 0.0f64;
        self.bx.walk(|i, k| {
            if self.valid.contains(k) {
                worst = worst.max(self.values[i].max_abs());
            }
        });
        worst
    }

    /// `max_norm(self - other)` on the common valid region.
    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        Ok(self.sub(other)?.max_norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_validation() {
        assert!(LatticeBox::cube(2, 0.0, 0, 3, BoundaryMode::Shrinking).is_err());
        assert!(LatticeBox::new(1.0, vec![0, 0], vec![3], BoundaryMode::Shrinking).is_err());
        assert!(LatticeBox::new(1.0, vec![4], vec![3], BoundaryMode::Shrinking).is_err());
        assert!(LatticeBox::new(1.0, vec![], vec![], BoundaryMode::Shrinking).is_err());
    }

    #[test]
    fn site_indexing_round_trips() {
        let bx =
            LatticeBox::new(0.5, vec![-2, 0, 1], vec![1, 2, 1], BoundaryMode::Shrinking).unwrap();
        assert_eq!(bx.site_count(), 4 * 3);
        for (i, k) in bx.sites().enumerate() {
            assert_eq!(bx.index(&k), i);
        }
        assert_eq!(bx.site(0), vec![-2, 0, 1]);
        assert_eq!(bx.wrap(0, 2), -2);
        assert_eq!(bx.wrap(0, -3), 1);
    }

    #[test]
    fn staggered_sign_parity() {
        assert_eq!(staggered_sign(&[0, 0]), 1.0);
        assert_eq!(staggered_sign(&[1]), -1.0);
        assert_eq!(staggered_sign(&[-1, 2]), -1.0);
        assert_eq!(staggered_sign(&[-3, -1]), 1.0);
    }

    #[test]
    fn zip_rejects_mismatched_boxes() {
        let a = LatticeBox::cube(1, 1.0, 0, 3, BoundaryMode::Shrinking).unwrap();
        let b = LatticeBox::cube(1, 0.5, 0, 3, BoundaryMode::Shrinking).unwrap();
        let fa = Field::zero(&a);
        let fb = Field::zero(&b);
        assert_eq!(fa.add(&fb), Err(Error::BoxMismatch));
    }
}
