//! Dense multivectors over the real Clifford algebra with `p` generators
//! squaring to `-1` followed by `q` generators squaring to `+1`.
//!
//! Blades are bitmasks: bit `j-1` set means generator `e_j` is a factor, and
//! the canonical factor order is ascending index. Coefficients are complex so
//! plane waves can be pushed through the same code path as real fields; real
//! data simply carries zero imaginary parts.
//!
//! Two instances carry the whole crate:
//!
//! * `Cl(0,n)` ([`Signature::field_algebra`]): `n` generators with `e_j² = -1`,
//!   the value type of lattice fields.
//! * `Cl(n,n)` ([`Signature::operator_algebra`]): `e_1..e_n` square to `-1` and
//!   `e_{n+1}..e_{2n}` square to `+1`. Generators act on `Cl(0,n)` as the left
//!   and right endomorphisms `E_j(a) = e_j a` and `E_{j+n}(a) = a′ e_j`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Scalar = Complex64;

/// Upper bound on `p + q`; `2^12` coefficients per value.
pub const MAX_GENERATORS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    /// `neg` generators squaring to `-1`, then `pos` generators squaring to `+1`.
    pub fn new(neg: usize, pos: usize) -> Result<Self> {
        if neg + pos > MAX_GENERATORS {
            return Err(Error::SignatureTooLarge {
                p: neg,
                q: pos,
                max: MAX_GENERATORS,
            });
        }
        Ok(Signature { p: neg, q: pos })
    }

    /// `Cl(0,n)`: every generator squares to `-1`.
    pub fn field_algebra(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    /// `Cl(n,n)`.
    pub fn operator_algebra(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn blade_count(&self) -> usize {
        1 << self.dim()
    }

    /// Mask of the generators squaring to `-1`.
    pub fn negative_mask(&self) -> u32 {
        (1u32 << self.p) - 1
    }

    pub fn is_field_algebra(&self) -> bool {
        self.q == 0
    }

    pub fn is_operator_algebra(&self) -> bool {
        self.p == self.q
    }

    /// Square of generator `j` (1-based).
    pub fn square(&self, j: usize) -> f64 {
        if j <= self.p {
            -1.0
        } else {
            1.0
        }
    }
}

impl fmt::Display for Signature {
    // Written in the (positive, negative) order used for Cl(0,n) / Cl(n,n).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.q, self.p)
    }
}

/// A basis blade `e_J`, stored as the bitmask of `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(pub u32);

impl Blade {
    pub const UNIT: Blade = Blade(0);

    /// Blade from 1-based generator indices, in any order. Repeated indices are
    /// rejected since `e_J` is only defined for sets.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &j in indices {
            if j == 0 || j > MAX_GENERATORS {
                return Err(Error::AxisOutOfRange {
                    axis: j,
                    n: MAX_GENERATORS,
                });
            }
            let bit = 1u32 << (j - 1);
            if mask & bit != 0 {
                return Err(Error::Parse(format!("repeated generator e_{j}")));
            }
            mask |= bit;
        }
        Ok(Blade(mask))
    }

    pub fn grade(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..32)
            .filter(|b| self.0 >> b & 1 == 1)
            .map(|b| b + 1)
            .collect()
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "e")?;
        for j in self.indices() {
            write!(f, "{j}")?;
        }
        Ok(())
    }
}

/// Sign picked up by reordering the factors of `e_A e_B` into ascending
/// order, before any squares are contracted.
#[inline]
pub fn reorder_sign(a: u32, b: u32) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `e_A e_B = blade_product_sign(A, B) · e_{A xor B}`.
#[inline]
pub fn blade_product_sign(sig: Signature, a: u32, b: u32) -> f64 {
    let neg_contractions = (a & b & sig.negative_mask()).count_ones();
    let contraction = if neg_contractions & 1 == 0 { 1.0 } else { -1.0 };
    reorder_sign(a, b) * contraction
}

/// Row-major `blade_product_sign` table, cached for up to 8 generators.
fn sign_table(sig: Signature) -> Arc<[f64]> {
    static TABLES: OnceLock<RwLock<HashMap<Signature, Arc<[f64]>>>> = OnceLock::new();
    let n = sig.blade_count();
    let build = || -> Arc<[f64]> {
        (0..n * n)
            .map(|k| blade_product_sign(sig, (k / n) as u32, (k % n) as u32))
            .collect()
    };
    if sig.dim() > 8 {
        return build();
    }
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.read().expect("sign table lock").get(&sig) {
        return t.clone();
    }
    let t = build();
    tables
        .write()
        .expect("sign table lock")
        .insert(sig, t.clone());
    t
}

#[inline]
fn parity_sign(count: u32) -> f64 {
    if count & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    sig: Signature,
    coeffs: Vec<Scalar>,
}

impl Multivector {
    pub fn zero(sig: Signature) -> Self {
        Multivector {
            sig,
            coeffs: vec![Scalar::new(0.0, 0.0); sig.blade_count()],
        }
    }

    pub fn scalar(sig: Signature, value: impl Into<Scalar>) -> Self {
        let mut mv = Self::zero(sig);
        mv.coeffs[0] = value.into();
        mv
    }

    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, 1.0)
    }

    pub fn blade(sig: Signature, blade: Blade, value: impl Into<Scalar>) -> Result<Self> {
        if blade.0 as usize >= sig.blade_count() {
            return Err(Error::AxisOutOfRange {
                axis: 32 - blade.0.leading_zeros() as usize,
                n: sig.dim(),
            });
        }
        let mut mv = Self::zero(sig);
        mv.coeffs[blade.0 as usize] = value.into();
        Ok(mv)
    }

    /// The generator `e_j`, 1-based.
    pub fn generator(sig: Signature, j: usize) -> Result<Self> {
        check_axis(j, sig.dim())?;
        Self::blade(sig, Blade(1 << (j - 1)), 1.0)
    }

    /// `Σ_j x_j e_j` over the first `x.len()` generators.
    pub fn vector(sig: Signature, x: &[f64]) -> Result<Self> {
        if x.len() > sig.dim() {
            return Err(Error::AxisOutOfRange {
                axis: x.len(),
                n: sig.dim(),
            });
        }
        let mut mv = Self::zero(sig);
        for (j, &xj) in x.iter().enumerate() {
            mv.coeffs[1 << j] = Scalar::new(xj, 0.0);
        }
        Ok(mv)
    }

    pub fn from_coeffs(sig: Signature, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != sig.blade_count() {
            return Err(Error::CoefficientCount {
                expected: sig.blade_count(),
                got: coeffs.len(),
            });
        }
        Ok(Multivector { sig, coeffs })
    }

    pub fn from_real(sig: Signature, coeffs: &[f64]) -> Result<Self> {
        Self::from_coeffs(sig, coeffs.iter().map(|&c| Scalar::new(c, 0.0)).collect())
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Scalar] {
        &mut self.coeffs
    }

    pub fn coeff(&self, blade: Blade) -> Scalar {
        self.coeffs
            .get(blade.0 as usize)
            .copied()
            .unwrap_or(Scalar::new(0.0, 0.0))
    }

    pub fn scalar_part(&self) -> Scalar {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Multivector) -> f64 {
        assert_same_sig(self, other);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_sig(&self, other: &Multivector) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(
                self.sig.to_string(),
                other.sig.to_string(),
            ));
        }
        Ok(())
    }

    pub fn geometric_product(&self, other: &Multivector) -> Result<Multivector> {
        self.check_sig(other)?;
        let mut out = Multivector::zero(self.sig);
        let n = self.coeffs.len();
        let signs = sign_table(self.sig);
        if self.is_real() && other.is_real() {
            for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| a.re != 0.0) {
                let row = &signs[i * n..(i + 1) * n];
                for (j, b) in other.coeffs.iter().enumerate() {
                    out.coeffs[i ^ j].re += a.re * b.re * row[j];
                }
            }
            return Ok(out);
        }
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b.re == 0.0 && b.im == 0.0 {
                    continue;
                }
                out.coeffs[i ^ j] += a * b * signs[i * n + j];
            }
        }
        Ok(out)
    }

    fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn grade_project(&self, r: usize) -> Result<Multivector> {
        if r > self.sig.dim() {
            return Err(Error::GradeOutOfRange {
                grade: r,
                max: self.sig.dim(),
            });
        }
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            if (mask as u32).count_ones() as usize != r {
                *c = Scalar::new(0.0, 0.0);
            }
        }
        Ok(out)
    }

    fn map_blade_signs(&self, sign: impl Fn(u32) -> f64) -> Multivector {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, &c)| c * sign(mask as u32))
            .collect();
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }

    /// `a ↦ a′`: negates the generators squaring to `-1`, fixes the others.
    /// On `Cl(0,n)` this is the grade involution.
    pub fn main_involution(&self) -> Multivector {
        let neg = self.sig.negative_mask();
        self.map_blade_signs(|mask| parity_sign((mask & neg).count_ones()))
    }

    /// `a ↦ a*`: reverses the factor order of every blade.
    pub fn reversion(&self) -> Multivector {
        self.map_blade_signs(|mask| {
            let r = mask.count_ones();
            parity_sign(r * r.saturating_sub(1) / 2)
        })
    }

    /// `a ↦ a†`, the composition of involution and reversion.
    pub fn dagger(&self) -> Multivector {
        let neg = self.sig.negative_mask();
        self.map_blade_signs(|mask| {
            let r = mask.count_ones();
            parity_sign((mask & neg).count_ones() + r * r.saturating_sub(1) / 2)
        })
    }

    /// `e_j · self` without a full product.
    pub fn left_mul_generator(&self, j: usize) -> Result<Multivector> {
        check_axis(j, self.sig.dim())?;
        let g = 1u32 << (j - 1);
        let mut out = Multivector::zero(self.sig);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            let m = mask as u32;
            out.coeffs[(m ^ g) as usize] += c * blade_product_sign(self.sig, g, m);
        }
        Ok(out)
    }

    /// `self · e_j` without a full product.
    pub fn right_mul_generator(&self, j: usize) -> Result<Multivector> {
        check_axis(j, self.sig.dim())?;
        let g = 1u32 << (j - 1);
        let mut out = Multivector::zero(self.sig);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            let m = mask as u32;
            out.coeffs[(m ^ g) as usize] += c * blade_product_sign(self.sig, m, g);
        }
        Ok(out)
    }

    pub fn scale(&self, s: impl Into<Scalar>) -> Multivector {
        let s = s.into();
        Multivector {
            sig: self.sig,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// Nonzero `(blade mask, re, im)` triples in mask order.
    pub fn entries(&self) -> Vec<(u32, f64, f64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(mask, c)| (mask as u32, c.re, c.im))
            .collect()
    }

    /// Parses `blade:value[,blade:value...]`, where a blade is written as its
    /// digit string of generator indices (`12` is `e_1e_2`) and `0` or an empty
    /// string is the unit blade.
    pub fn parse_blade_list(sig: Signature, text: &str) -> Result<Multivector> {
        let mut mv = Multivector::zero(sig);
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (blade, value) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected blade:value, got `{item}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{value}`")))?;
            let blade = blade.trim();
            let indices = if blade.is_empty() || blade == "0" {
                Vec::new()
            } else {
                blade
                    .chars()
                    .map(|ch| {
                        ch.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("bad blade `{blade}`")))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let blade = Blade::from_indices(&indices)?;
            if blade.0 as usize >= sig.blade_count() {
                return Err(Error::Parse(format!("blade {blade} is outside Cl({sig})")));
            }
            mv.coeffs[blade.0 as usize] += Scalar::new(value, 0.0);
        }
        Ok(mv)
    }
}

pub(crate) fn check_axis(j: usize, n: usize) -> Result<()> {
    if j == 0 || j > n {
        return Err(Error::AxisOutOfRange { axis: j, n });
    }
    Ok(())
}

fn assert_same_sig(a: &Multivector, b: &Multivector) {
    assert!(
        a.sig == b.sig,
        "signature mismatch: Cl({}) vs Cl({})",
        a.sig,
        b.sig
    );
}

fn require_field_algebra(a: &Multivector) -> Result<()> {
    if !a.sig.is_field_algebra() {
        return Err(Error::NotFieldAlgebra(a.sig.to_string()));
    }
    Ok(())
}

/// `e_j • a = -½(e_j a - a′ e_j)` on `Cl(0,n)`: contraction with `e_j`, the
/// pointwise action of the Witt element `e_j⁺`. Lowers grade by one.
pub fn dot_vector(j: usize, a: &Multivector) -> Result<Multivector> {
    require_field_algebra(a)?;
    check_axis(j, a.sig.dim())?;
    let g = 1u32 << (j - 1);
    let mut out = Multivector::zero(a.sig);
    for (mask, &c) in a.coeffs.iter().enumerate() {
        let m = mask as u32;
        if m & g != 0 {
            let below = (m & (g - 1)).count_ones();
            out.coeffs[(m ^ g) as usize] += c * parity_sign(below);
        }
    }
    Ok(out)
}

/// `e_j ∧ a = ½(e_j a + a′ e_j)` on `Cl(0,n)`: the pointwise action of the
/// Witt element `e_j⁻`. Raises grade by one.
pub fn wedge_vector(j: usize, a: &Multivector) -> Result<Multivector> {
    require_field_algebra(a)?;
    check_axis(j, a.sig.dim())?;
    let g = 1u32 << (j - 1);
    let mut out = Multivector::zero(a.sig);
    for (mask, &c) in a.coeffs.iter().enumerate() {
        let m = mask as u32;
        if m & g == 0 {
            let below = (m & (g - 1)).count_ones();
            out.coeffs[(m | g) as usize] += c * parity_sign(below);
        }
    }
    Ok(out)
}

/// Pointwise `e_j⁺`.
pub fn witt_lower(j: usize, a: &Multivector) -> Result<Multivector> {
    dot_vector(j, a)
}

/// Pointwise `e_j⁻`.
pub fn witt_raise(j: usize, a: &Multivector) -> Result<Multivector> {
    wedge_vector(j, a)
}

/// `[e_j⁺, e_j⁻] a = e_j⁺(e_j⁻ a) - e_j⁻(e_j⁺ a)`.
pub fn axis_commutator(j: usize, a: &Multivector) -> Result<Multivector> {
    let lr = witt_lower(j, &witt_raise(j, a)?)?;
    let rl = witt_raise(j, &witt_lower(j, a)?)?;
    Ok(lr - rl)
}

/// `Π_j [e_j⁺, e_j⁻]`, composed axis by axis. Agrees with
/// [`Multivector::main_involution`] on `Cl(0,n)`; the lattice code relies on
/// that and uses the involution directly.
pub fn involution_operator_k(a: &Multivector) -> Result<Multivector> {
    require_field_algebra(a)?;
    let mut out = a.clone();
    for j in 1..=a.sig.dim() {
        out = axis_commutator(j, &out)?;
    }
    Ok(out)
}

/// Acts with a `Cl(n,n)` element on a `Cl(0,n)` value through
/// `E_j(a) = e_j a` and `E_{j+n}(a) = a′ e_j`, so that the blade
/// `e_{i_1}…e_{i_r}` acts as `E_{i_1}∘…∘E_{i_r}`.
pub fn endomorphism_action(op: &Multivector, a: &Multivector) -> Result<Multivector> {
    require_field_algebra(a)?;
    let n = a.sig.dim();
    if !op.sig.is_operator_algebra() || op.sig.p() != n {
        return Err(Error::NotOperatorAlgebra(op.sig.to_string()));
    }
    let mut out = Multivector::zero(a.sig);
    for (mask, &c) in op.coeffs.iter().enumerate() {
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        let mut v = a.clone();
        for bit in (0..2 * n).rev() {
            if mask >> bit & 1 == 1 {
                v = generator_endomorphism(bit + 1, n, &v)?;
            }
        }
        out += &v.scale(c);
    }
    Ok(out)
}

/// The endomorphism of `Cl(0,n)` attached to generator `j` of `Cl(n,n)`.
pub fn generator_endomorphism(j: usize, n: usize, a: &Multivector) -> Result<Multivector> {
    check_axis(j, 2 * n)?;
    if j <= n {
        a.left_mul_generator(j)
    } else {
        a.main_involution().right_mul_generator(j - n)
    }
}

/// `γ = Π_j e_{j+n} e_j` in `Cl(n,n)`.
pub fn pseudoscalar_gamma(n: usize) -> Result<Multivector> {
    let sig = Signature::operator_algebra(n)?;
    let mut gamma = Multivector::one(sig);
    for j in 1..=n {
        let bivector = Multivector::generator(sig, j + n)?
            .geometric_product(&Multivector::generator(sig, j)?)?;
        gamma = gamma.geometric_product(&bivector)?;
    }
    Ok(gamma)
}

impl Serialize for Multivector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.entries();
        let mut seq = serializer.serialize_seq(Some(entries.len()))?;
        for e in entries {
            seq.serialize_element(&e)?;
        }
        seq.end()
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.entries();
        if entries.is_empty() {
            return write!(f, "0");
        }
        for (i, (mask, re, im)) in entries.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if im == 0.0 {
                write!(f, "{re}")?;
            } else {
                write!(f, "({re}{im:+}i)")?;
            }
            if mask != 0 {
                write!(f, "·{}", Blade(mask))?;
            }
        }
        Ok(())
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_same_sig(self, rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        assert_same_sig(self, rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += &rhs;
        self
    }
}

impl Add<&Multivector> for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= &rhs;
        self
    }
}

impl Sub<&Multivector> for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

/// Geometric product. Panics on mismatched signatures; use
/// [`Multivector::geometric_product`] for the checked form.
impl Mul<&Multivector> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        assert_same_sig(self, rhs);
        self.geometric_product(rhs).expect("signatures checked")
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, s: f64) -> Multivector {
        self.scale(s)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, s: f64) -> Multivector {
        self.scale(s)
    }
}
