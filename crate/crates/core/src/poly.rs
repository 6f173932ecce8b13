//! Sparse polynomials in the variables `p1, p2, ...` and `q1, q2, ...` over
//! exact rationals, bigraded by weight and s-degree.
//!
//! `p_n` has weight `n` and s-degree `n - 1`; `q_n` has weight `n` and
//! s-degree `n`. The ring does not know about the genus: the symbol `q0` is
//! never a variable (operator constructors replace it by a scalar).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    P,
    Q,
}

/// A ring variable `p_i` or `q_i` with `i >= 1`.
///
/// The derived order is the variable order used by the monomial order:
/// `p1 < q1 < p2 < q2 < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    index: u32,
    kind: Kind,
}

impl Var {
    /// Returns `None` for index 0.
    pub fn new(kind: Kind, index: u32) -> Option<Var> {
        (index >= 1).then_some(Var { index, kind })
    }

    /// `p_index`. Panics on index 0.
    pub fn p(index: u32) -> Var {
        Var::new(Kind::P, index).expect("p0 is not a variable")
    }

    /// `q_index`. Panics on index 0; `q0` is the scalar `g`, not a variable.
    pub fn q(index: u32) -> Var {
        Var::new(Kind::Q, index).expect("q0 is not a variable")
    }

    pub fn kind(self) -> Kind {
        self.kind
    }

    pub fn index(self) -> u32 {
        self.index
    }

    pub fn weight(self) -> u32 {
        self.index
    }

    pub fn sdeg(self) -> u32 {
        match self.kind {
            Kind::P => self.index - 1,
            Kind::Q => self.index,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::P => write!(f, "p{}", self.index),
            Kind::Q => write!(f, "q{}", self.index),
        }
    }
}

/// A monomial, stored as `(variable, exponent)` pairs sorted by variable
/// with strictly positive exponents.
///
/// Ordering compares exponent vectors lexicographically starting from the
/// highest variable, so `q2 > p2 > q1^5 > p1*q1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn power(v: Var, exp: u32) -> Monomial {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs; repeated
    /// variables are merged and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Monomial {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    /// Product of the given variables, with multiplicity.
    pub fn from_vars<I: IntoIterator<Item = Var>>(vars: I) -> Monomial {
        Monomial::from_pairs(vars.into_iter().map(|v| (v, 1)))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|&(v, e)| v.weight() * e).sum()
    }

    pub fn sdeg(&self) -> u32 {
        self.0.iter().map(|&(v, e)| v.sdeg() * e).sum()
    }

    pub fn pdeg(&self) -> u32 {
        self.kind_degree(Kind::P)
    }

    pub fn qdeg(&self) -> u32 {
        self.kind_degree(Kind::Q)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    fn kind_degree(&self, kind: Kind) -> u32 {
        self.0
            .iter()
            .filter(|(v, _)| v.kind() == kind)
            .map(|&(_, e)| e)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            let mut e = e;
            if j < other.0.len() && other.0[j].0 == v {
                let d = other.0[j].1;
                if d > e {
                    return None;
                }
                e -= d;
                j += 1;
            }
            if e > 0 {
                out.push((v, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    /// Applies the derivative `prod_v d_v^{e_v}` described by `partials`.
    /// Returns the integer coefficient and the resulting monomial, or `None`
    /// when the derivative vanishes.
    pub fn differentiate(&self, partials: &Monomial) -> Option<(BigInt, Monomial)> {
        let rest = self.div(partials)?;
        let mut coeff = BigInt::one();
        for &(v, e) in &partials.0 {
            coeff *= falling_factorial(self.exponent(v), e);
        }
        Some((coeff, rest))
    }
}

/// `n (n-1) ... (n-k+1)`.
pub fn falling_factorial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (n - k + 1..=n).fold(BigInt::one(), |acc, x| acc * x)
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter().rev();
        let mut b = other.0.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        return va.cmp(&vb);
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        // p variables before q variables, each by index
        let mut vars = self.0.clone();
        vars.sort_by_key(|(v, _)| (v.kind(), v.index()));
        for (i, &(v, e)) in vars.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// All monomials of exactly weight `w`, in ascending monomial order.
pub fn enumerate_monomials(w: u32) -> Vec<Monomial> {
    // Highest variable first, so each branch fixes the most significant
    // exponent before recursing.
    let vars: Vec<Var> = (1..=w).rev().flat_map(|i| [Var::q(i), Var::p(i)]).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill_monomials(&vars, w, &mut current, &mut out);
    out.sort();
    out
}

fn fill_monomials(
    vars: &[Var],
    remaining: u32,
    current: &mut Vec<(Var, u32)>,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        out.push(Monomial::from_pairs(current.iter().copied()));
        return;
    }
    let Some((&v, rest)) = vars.split_first() else {
        return;
    };
    let max = remaining / v.weight();
    for e in (0..=max).rev() {
        if e > 0 {
            current.push((v, e));
        }
        fill_monomials(rest, remaining - e * v.weight(), current, out);
        if e > 0 {
            current.pop();
        }
    }
}

/// A polynomial with exact rational coefficients; never stores a zero
/// coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Poly {
        Poly::term(Rational::one(), Monomial::var(v))
    }

    pub fn p(i: u32) -> Poly {
        Poly::var(Var::p(i))
    }

    pub fn q(i: u32) -> Poly {
        Poly::var(Var::q(i))
    }

    pub fn term(c: Rational, m: Monomial) -> Poly {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: Monomial) -> Poly {
        Poly::term(Rational::one(), m)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
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

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl DoubleEndedIterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Highest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).max()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, a)| (n.mul(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> Poly {
        let d = Monomial::var(v);
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            m.differentiate(&d)
                .map(|(k, rest)| (rest, c * Rational::from_integer(k)))
        }))
    }

    /// Bigraded homogeneous components keyed by `(weight, sdeg)`.
    pub fn grade(&self) -> BTreeMap<(u32, u32), Poly> {
        let mut out: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry((m.weight(), m.sdeg()))
                .or_default()
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Components keyed by weight only.
    pub fn by_weight(&self) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight())
                .or_default()
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Poly {
        Poly::constant(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Poly {
        Poly::var(v)
    }
}

impl fmt::Display for Poly {
    /// Canonical text form: highest monomial first, e.g. `p2*q1 - 3/4*p1*q1^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(pairs: &[(Var, u32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn difference_of_squares() {
        let a = Poly::p(1) + Poly::q(1);
        let b = Poly::p(1) - Poly::q(1);
        let expected = Poly::p(1).pow(2) - Poly::q(1).pow(2);
        assert_eq!(a * b, expected);
    }

    #[test]
    fn halves_add_up() {
        let half = Poly::p(2).scale(&rat(1, 2));
        assert_eq!(&half + &half, Poly::p(2));
    }

    #[test]
    fn self_difference_is_zero() {
        let f = Poly::q(2) - Poly::q(1).pow(2).scale(&rat(1, 4));
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn partial_derivatives() {
        let f = Poly::monomial(mono(&[(Var::p(2), 2), (Var::q(1), 1)]));
        assert_eq!(
            f.partial(Var::p(2)),
            Poly::monomial(mono(&[(Var::p(2), 1), (Var::q(1), 1)])).scale(&int(2))
        );
        assert!(Poly::p(3).partial(Var::q(1)).is_zero());
        let cube = Poly::p(1).pow(3);
        assert_eq!(
            cube.partial(Var::p(1)).partial(Var::p(1)),
            Poly::p(1).scale(&int(6))
        );
    }

    #[test]
    fn grading_components() {
        let f = Poly::p(1) * Poly::q(1);
        let g = f.grade();
        assert_eq!(g.len(), 1);
        assert_eq!(g[&(2, 1)], f);

        let f = Poly::p(2) + Poly::q(2);
        let g = f.grade();
        assert_eq!(g[&(2, 1)], Poly::p(2));
        assert_eq!(g[&(2, 2)], Poly::q(2));

        let f = Poly::p(1).pow(2) + Poly::p(1) * Poly::q(1) + Poly::q(1).pow(2);
        let keys: Vec<_> = f.grade().into_keys().collect();
        assert_eq!(keys, vec![(2, 0), (2, 1), (2, 2)]);
    }

    #[test]
    fn monomial_order_is_highest_variable_first() {
        let p2q1 = mono(&[(Var::p(2), 1), (Var::q(1), 1)]);
        let p1q1q1 = mono(&[(Var::p(1), 1), (Var::q(1), 2)]);
        assert!(p2q1 > p1q1q1);
        assert!(Monomial::var(Var::q(2)) > mono(&[(Var::q(1), 2)]));
        assert!(Monomial::var(Var::q(2)) > Monomial::var(Var::p(2)));
        assert!(mono(&[(Var::q(1), 2)]) > mono(&[(Var::p(1), 1), (Var::q(1), 1)]));
        assert!(Monomial::one() < Monomial::var(Var::p(1)));
    }

    #[test]
    fn small_weight_enumerations() {
        assert_eq!(enumerate_monomials(0), vec![Monomial::one()]);
        let w2: Vec<String> = enumerate_monomials(2)
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(w2, vec!["p1^2", "p1*q1", "q1^2", "p2", "q2"]);
        assert_eq!(enumerate_monomials(3).len(), 10);
    }

    #[test]
    fn display_canonical_form() {
        let f = Poly::p(2) * Poly::q(1) - (Poly::p(1) * Poly::q(1).pow(2)).scale(&rat(3, 4));
        assert_eq!(f.to_string(), "p2*q1 - 3/4*p1*q1^2");
        assert_eq!((-Poly::p(1)).to_string(), "-p1");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(
            (Poly::one().scale(&rat(-1, 2)) + Poly::q(3)).to_string(),
            "q3 - 1/2"
        );
    }

    #[test]
    fn differentiate_counts_falling_factorials() {
        let m = mono(&[(Var::p(1), 3), (Var::q(2), 1)]);
        let (k, rest) = m.differentiate(&mono(&[(Var::p(1), 2)])).unwrap();
        assert_eq!(k, BigInt::from(6));
        assert_eq!(rest, mono(&[(Var::p(1), 1), (Var::q(2), 1)]));
        assert!(m.differentiate(&Monomial::var(Var::q(1))).is_none());
    }
}
