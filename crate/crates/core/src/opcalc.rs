//! Normal-ordering engine for the formal algebra generated by decorated
//! function symbols and Witt letters.
//!
//! A monomial is stored in normal form `F₁ F₂ … F_r · W · h^{-k}`: a word of
//! function factors followed by a normal-ordered Witt word. Witt letters move
//! right past a function factor by shifting its argument and applying the
//! main involution; the Witt word is then ordered with the canonical
//! anticommutation relations. Coefficients are exact rationals.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

pub type Coeff = Ratio<i64>;

/// The sign attached to a Witt letter or a one-sided difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Plus,
    Minus,
}

impl Dir {
    pub const ALL: [Dir; 2] = [Dir::Plus, Dir::Minus];

    pub fn symbol(&self) -> char {
        match self {
            Dir::Plus => '+',
            Dir::Minus => '-',
        }
    }
}

/// A free function symbol evaluated at `x + h·shift`, optionally involuted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunFactor {
    pub name: String,
    pub shift: Vec<i32>,
    pub inv: bool,
}

impl FunFactor {
    pub fn new(name: &str, n: usize) -> Self {
        FunFactor {
            name: name.to_string(),
            shift: vec![0; n],
            inv: false,
        }
    }

    pub fn shifted(&self, axis: usize, by: i32) -> Self {
        let mut out = self.clone();
        out.shift[axis - 1] += by;
        out
    }

    pub fn involuted(&self) -> Self {
        FunFactor {
            inv: !self.inv,
            ..self.clone()
        }
    }
}

impl fmt::Display for FunFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shift: Vec<String> = self.shift.iter().map(i32::to_string).collect();
        write!(f, "({} [{}]", self.name, shift.join(" "))?;
        if self.inv {
            write!(f, " '")?;
        }
        write!(f, ")")
    }
}

/// `e_j⁻` sorts before `e_j⁺` within an axis, which is the normal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LetterKind {
    /// `e_j⁻`, the exterior (raising) letter.
    Raise,
    /// `e_j⁺`, the contraction (lowering) letter.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WittLetter {
    pub axis: usize,
    pub kind: LetterKind,
}

impl WittLetter {
    pub fn new(axis: usize, dir: Dir) -> Self {
        let kind = match dir {
            Dir::Plus => LetterKind::Lower,
            Dir::Minus => LetterKind::Raise,
        };
        WittLetter { axis, kind }
    }

    /// Rewrites `e_j^± · F` as `F[∓e_j]′ · e_j^±`, returning the new factor.
    pub fn pass(&self, factor: &FunFactor) -> FunFactor {
        let by = match self.kind {
            LetterKind::Lower => -1,
            LetterKind::Raise => 1,
        };
        factor.shifted(self.axis, by).involuted()
    }
}

impl fmt::Display for WittLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.kind {
            LetterKind::Lower => '+',
            LetterKind::Raise => '-',
        };
        write!(f, "e{}{}", self.axis, s)
    }
}

/// Terms sort by Witt word first, then the function word, then the power
/// of `1/h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub witt: Vec<WittLetter>,
    pub funs: Vec<FunFactor>,
    pub inv_h: u32,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial {
            witt: Vec::new(),
            funs: Vec::new(),
            inv_h: 0,
        }
    }
}

/// Brings a Witt word into normal order, returning signed normal words.
fn normal_order(word: Vec<WittLetter>) -> Vec<(i64, Vec<WittLetter>)> {
    let mut out: BTreeMap<Vec<WittLetter>, i64> = BTreeMap::new();
    let mut stack = vec![(1i64, word)];
    while let Some((sign, w)) = stack.pop() {
        let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] >= w[i + 1]) else {
            *out.entry(w).or_insert(0) += sign;
            continue;
        };
        let (a, b) = (w[i], w[i + 1]);
        if a == b {
            // e_j^± e_j^± = 0
            continue;
        }
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        stack.push((-sign, swapped));
        if a.axis == b.axis {
            // e_j⁺ e_j⁻ = 1 - e_j⁻ e_j⁺
            let mut contracted = w.clone();
            contracted.drain(i..i + 2);
            stack.push((sign, contracted));
        }
    }
    out.into_iter()
        .filter(|(_, s)| *s != 0)
        .map(|(w, s)| (s, w))
        .collect()
}

/// A formal sum of normal-ordered monomials with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<Monomial, Coeff>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::unit(), Coeff::from_integer(1))
    }

    pub fn fun(factor: FunFactor) -> Self {
        Self::fun_word(vec![factor])
    }

    pub fn fun_word(funs: Vec<FunFactor>) -> Self {
        Self::from_monomial(
            Monomial {
                funs,
                ..Monomial::unit()
            },
            Coeff::from_integer(1),
        )
    }

    pub fn letter(axis: usize, dir: Dir) -> Self {
        Self::witt_word(vec![WittLetter::new(axis, dir)])
    }

    pub fn witt_word(word: Vec<WittLetter>) -> Self {
        let mut out = Self::zero();
        for (sign, w) in normal_order(word) {
            out.add_term(
                Monomial {
                    witt: w,
                    ..Monomial::unit()
                },
                Coeff::from_integer(sign),
            );
        }
        out
    }

    fn from_monomial(m: Monomial, c: Coeff) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c == Coeff::from_integer(0) {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Coeff::from_integer(0) {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &OperatorExpr) -> OperatorExpr {
        self.add(&other.scale(Coeff::from_integer(-1)))
    }

    pub fn scale(&self, s: Coeff) -> OperatorExpr {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), *c * s);
        }
        out
    }

    /// Multiplies every term by `1/h`.
    pub fn over_h(&self) -> OperatorExpr {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut m = m.clone();
            m.inv_h += 1;
            out.add_term(m, *c);
        }
        out
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "(sum")?;
        for (m, c) in &self.terms {
            write!(f, "\n  (term {c}")?;
            if m.inv_h > 0 {
                write!(f, " (h^-{})", m.inv_h)?;
            }
            for factor in &m.funs {
                write!(f, " {factor}")?;
            }
            if !m.witt.is_empty() {
                let letters: Vec<String> = m.witt.iter().map(WittLetter::to_string).collect();
                write!(f, " (witt {})", letters.join(" "))?;
            }
            write!(f, ")")?;
        }
        write!(f, ")")
    }
}

/// Product `A·B` brought to normal form.
pub fn compose(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let mut funs = ma.funs.clone();
            funs.extend(mb.funs.iter().map(|factor| {
                ma.witt
                    .iter()
                    .rev()
                    .fold(factor.clone(), |acc, letter| letter.pass(&acc))
            }));
            let mut word = ma.witt.clone();
            word.extend(mb.witt.iter().copied());
            for (sign, w) in normal_order(word) {
                out.add_term(
                    Monomial {
                        witt: w,
                        funs: funs.clone(),
                        inv_h: ma.inv_h + mb.inv_h,
                    },
                    *ca * *cb * Coeff::from_integer(sign),
                );
            }
        }
    }
    out
}

/// `∂^{±j}` applied to a product of function factors, expanded with the
/// discrete product rules
/// `∂⁺(FG) = ∂⁺F·G + F[+e_j]·∂⁺G` and `∂⁻(FG) = ∂⁻F·G + F[−e_j]·∂⁻G`.
pub fn diff_expand(axis: usize, dir: Dir, word: &[FunFactor]) -> OperatorExpr {
    let by = match dir {
        Dir::Plus => 1,
        Dir::Minus => -1,
    };
    match word {
        [] => OperatorExpr::zero(),
        [single] => {
            let moved = OperatorExpr::fun(single.shifted(axis, by));
            let here = OperatorExpr::fun(single.clone());
            match dir {
                Dir::Plus => moved.sub(&here),
                Dir::Minus => here.sub(&moved),
            }
            .over_h()
        }
        [head, rest @ ..] => {
            let d_head = compose(
                &diff_expand(axis, dir, std::slice::from_ref(head)),
                &OperatorExpr::fun_word(rest.to_vec()),
            );
            let d_rest = compose(
                &OperatorExpr::fun(head.shifted(axis, by)),
                &diff_expand(axis, dir, rest),
            );
            d_head.add(&d_rest)
        }
    }
}

/// Applies `∂^{±j}` to the function part of every term; Witt words are
/// constant and stay on the right.
pub fn apply_diff(axis: usize, dir: Dir, expr: &OperatorExpr) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    for (m, c) in &expr.terms {
        let tail = OperatorExpr::from_monomial(
            Monomial {
                witt: m.witt.clone(),
                funs: Vec::new(),
                inv_h: m.inv_h,
            },
            *c,
        );
        out = out.add(&compose(&diff_expand(axis, dir, &m.funs), &tail));
    }
    out
}

/// `∂_h^± = Σ_j e_j^± ∂^{±j}` applied to `expr`.
pub fn apply_dirac(n: usize, dir: Dir, expr: &OperatorExpr) -> OperatorExpr {
    (1..=n).fold(OperatorExpr::zero(), |acc, j| {
        acc.add(&compose(
            &OperatorExpr::letter(j, dir),
            &apply_diff(j, dir, expr),
        ))
    })
}

/// Outcome of a symbolic identity check: the verdict and both normal forms.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub holds: bool,
    pub lhs: OperatorExpr,
    pub rhs: OperatorExpr,
}

impl IdentityCheck {
    fn compare(lhs: OperatorExpr, rhs: OperatorExpr) -> Self {
        IdentityCheck {
            holds: lhs == rhs,
            lhs,
            rhs,
        }
    }

    /// Number of terms in `lhs - rhs`.
    pub fn defect_terms(&self) -> usize {
        self.lhs.sub(&self.rhs).len()
    }
}

fn free(name: &str, n: usize) -> FunFactor {
    FunFactor::new(name, n)
}

/// `∂^±(f·g) = (∂^± f)·g + f′·(∂^± g)` with `f`, `g` free symbols.
pub fn check_leibniz(n: usize, dir: Dir) -> IdentityCheck {
    leibniz(n, dir, true)
}

/// The Leibniz rule with `f′` replaced by `f` in the second term, which must
/// fail.
pub fn check_leibniz_without_involution(n: usize, dir: Dir) -> IdentityCheck {
    leibniz(n, dir, false)
}

fn leibniz(n: usize, dir: Dir, involute: bool) -> IdentityCheck {
    let f = free("f", n);
    let g = free("g", n);
    let fg = OperatorExpr::fun_word(vec![f.clone(), g.clone()]);
    let lhs = apply_dirac(n, dir, &fg);
    let df = apply_dirac(n, dir, &OperatorExpr::fun(f.clone()));
    let dg = apply_dirac(n, dir, &OperatorExpr::fun(g.clone()));
    let f_left = if involute { f.involuted() } else { f };
    let rhs = compose(&df, &OperatorExpr::fun(g)).add(&compose(&OperatorExpr::fun(f_left), &dg));
    IdentityCheck::compare(lhs, rhs)
}

/// `(∂_h^±)² f = 0`.
pub fn check_nilpotent(n: usize, dir: Dir) -> IdentityCheck {
    let f = OperatorExpr::fun(free("f", n));
    let lhs = apply_dirac(n, dir, &apply_dirac(n, dir, &f));
    IdentityCheck::compare(lhs, OperatorExpr::zero())
}

/// Star Laplacian `Σ_j (f[+e_j] + f[−e_j] − 2f)/h²` of a free symbol.
pub fn star_laplacian_expr(n: usize) -> OperatorExpr {
    let f = free("f", n);
    let mut out = OperatorExpr::zero();
    for j in 1..=n {
        out = out
            .add(&OperatorExpr::fun(f.shifted(j, 1)))
            .add(&OperatorExpr::fun(f.shifted(j, -1)))
            .sub(&OperatorExpr::fun(f.clone()).scale(Coeff::from_integer(2)));
    }
    out.over_h().over_h()
}

/// `(∂_h⁺∂_h⁻ + ∂_h⁻∂_h⁺) f = Δ_h f`.
pub fn check_laplacian_factorization(n: usize) -> IdentityCheck {
    let f = OperatorExpr::fun(free("f", n));
    let pm = apply_dirac(n, Dir::Plus, &apply_dirac(n, Dir::Minus, &f));
    let mp = apply_dirac(n, Dir::Minus, &apply_dirac(n, Dir::Plus, &f));
    IdentityCheck::compare(pm.add(&mp), star_laplacian_expr(n))
}

/// `∂_h⁺∂_h⁻ f` alone against `Δ_h f`, which must fail.
pub fn check_laplacian_half(n: usize) -> IdentityCheck {
    let f = OperatorExpr::fun(free("f", n));
    let pm = apply_dirac(n, Dir::Plus, &apply_dirac(n, Dir::Minus, &f));
    IdentityCheck::compare(pm, star_laplacian_expr(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: i64) -> Coeff {
        Coeff::from_integer(v)
    }

    #[test]
    fn letter_passes_function() {
        let f = OperatorExpr::fun(FunFactor::new("f", 1));
        let out = compose(&OperatorExpr::letter(1, Dir::Plus), &f);
        let expected = compose(
            &OperatorExpr::fun(FunFactor::new("f", 1).shifted(1, -1).involuted()),
            &OperatorExpr::letter(1, Dir::Plus),
        );
        assert_eq!(out, expected);
        let (m, _) = out.terms().next().unwrap();
        assert_eq!(m.funs[0].shift, vec![-1]);
        assert!(m.funs[0].inv);
        assert_eq!(m.witt, vec![WittLetter::new(1, Dir::Plus)]);
    }

    #[test]
    fn passing_twice_restores_parity() {
        let letter = WittLetter::new(2, Dir::Plus);
        let f = FunFactor::new("f", 3);
        let twice = letter.pass(&letter.pass(&f));
        assert!(!twice.inv);
        assert_eq!(twice.shift, vec![0, -2, 0]);
    }

    #[test]
    fn witt_relations() {
        let pm = compose(
            &OperatorExpr::letter(1, Dir::Plus),
            &OperatorExpr::letter(1, Dir::Minus),
        );
        let expected = OperatorExpr::one().sub(&OperatorExpr::witt_word(vec![
            WittLetter::new(1, Dir::Minus),
            WittLetter::new(1, Dir::Plus),
        ]));
        assert_eq!(pm, expected);

        let a = compose(
            &OperatorExpr::letter(1, Dir::Minus),
            &OperatorExpr::letter(2, Dir::Minus),
        );
        let b = compose(
            &OperatorExpr::letter(2, Dir::Minus),
            &OperatorExpr::letter(1, Dir::Minus),
        );
        assert!(a.add(&b).is_zero());

        let sq = compose(
            &OperatorExpr::letter(3, Dir::Plus),
            &OperatorExpr::letter(3, Dir::Plus),
        );
        assert!(sq.is_zero());
    }

    #[test]
    fn normal_order_is_canonical() {
        let w = vec![
            WittLetter::new(2, Dir::Plus),
            WittLetter::new(1, Dir::Minus),
            WittLetter::new(2, Dir::Minus),
        ];
        // e2+ e1- e2- = -e1- e2+ e2- = -e1- (1 - e2- e2+)
        let expected = OperatorExpr::witt_word(vec![WittLetter::new(1, Dir::Minus)])
            .scale(c(-1))
            .add(&OperatorExpr::witt_word(vec![
                WittLetter::new(1, Dir::Minus),
                WittLetter::new(2, Dir::Minus),
                WittLetter::new(2, Dir::Plus),
            ]));
        assert_eq!(OperatorExpr::witt_word(w), expected);
    }

    #[test]
    fn diff_expand_examples() {
        let f = FunFactor::new("f", 1);
        let d = diff_expand(1, Dir::Plus, std::slice::from_ref(&f));
        let expected = OperatorExpr::fun(f.shifted(1, 1))
            .sub(&OperatorExpr::fun(f.clone()))
            .over_h();
        assert_eq!(d, expected);
        assert!(diff_expand(1, Dir::Minus, &[]).is_zero());

        let g = FunFactor::new("g", 1);
        for dir in Dir::ALL {
            let by = if dir == Dir::Plus { 1 } else { -1 };
            let moved = OperatorExpr::fun_word(vec![f.shifted(1, by), g.shifted(1, by)]);
            let here = OperatorExpr::fun_word(vec![f.clone(), g.clone()]);
            let direct = match dir {
                Dir::Plus => moved.sub(&here),
                Dir::Minus => here.sub(&moved),
            }
            .over_h();
            assert_eq!(diff_expand(1, dir, &[f.clone(), g.clone()]), direct);
        }
    }

    #[test]
    fn identities_hold() {
        for n in 1..=3 {
            for dir in Dir::ALL {
                assert!(check_leibniz(n, dir).holds, "leibniz n={n} {dir:?}");
                assert!(check_nilpotent(n, dir).holds, "nilpotent n={n} {dir:?}");
                assert!(!check_leibniz_without_involution(n, dir).holds);
            }
            assert!(check_laplacian_factorization(n).holds);
            assert!(!check_laplacian_half(n).holds);
        }
    }

    #[test]
    fn single_axis_square_vanishes() {
        let f = OperatorExpr::fun(FunFactor::new("f", 1));
        let once = compose(
            &OperatorExpr::letter(1, Dir::Minus),
            &apply_diff(1, Dir::Minus, &f),
        );
        let twice = compose(
            &OperatorExpr::letter(1, Dir::Minus),
            &apply_diff(1, Dir::Minus, &once),
        );
        assert!(twice.is_zero());
    }

    #[test]
    fn display_is_s_expression() {
        assert_eq!(OperatorExpr::zero().to_string(), "0");
        let e = compose(
            &OperatorExpr::letter(1, Dir::Plus),
            &OperatorExpr::fun(FunFactor::new("f", 1)),
        );
        assert_eq!(e.to_string(), "(sum\n  (term 1 (f [-1] ') (witt e1+)))");
    }
}
