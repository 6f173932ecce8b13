//! Formal differential operators with polynomial coefficients.
//!
//! A term `c * m * d(v1)...d(vk)` acts as `f -> c * m * (d_v1 ... d_vk f)`
//! (normal ordering: multiplication after differentiation). Operators built
//! from infinite sums are materialized only up to a window `W`: an operator
//! holds every term whose partial multiset has index sum `<= W`, so its
//! action on polynomials of weight `<= W` is exact. Windows propagate
//! through composition so that validity is never overstated.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::binomial;
use crate::poly::{Monomial, Poly, Rational, Var};

/// Window of operators that are exact on every input (no partials dropped).
pub const UNBOUNDED: i64 = i64::MAX / 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("weight {weight} exceeds operator window {window}")]
    WindowExceeded { weight: i64, window: i64 },
}

/// One normal-ordered term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTerm {
    pub coeff: Rational,
    pub multiplier: Monomial,
    pub partials: Monomial,
}

impl OpTerm {
    pub fn weight_shift(&self) -> i64 {
        self.multiplier.weight() as i64 - self.partials.weight() as i64
    }
}

/// A finite normal-ordered sum of terms with a validity window.
///
/// `shift` is an upper bound on the weight shift of every term of the
/// untruncated operator. Composition uses it to shrink windows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    // keyed by (partials, multiplier)
    terms: BTreeMap<(Monomial, Monomial), Rational>,
    window: i64,
    shift: i64,
}

impl Operator {
    pub fn zero() -> Operator {
        Operator {
            terms: BTreeMap::new(),
            window: UNBOUNDED,
            shift: 0,
        }
    }

    pub fn identity() -> Operator {
        Operator::scalar(Rational::one())
    }

    pub fn scalar(c: Rational) -> Operator {
        Operator::multiplication(&Poly::constant(c))
    }

    /// Multiplication by `f`; exact on every input.
    pub fn multiplication(f: &Poly) -> Operator {
        let mut op = Operator::zero();
        op.shift = f.max_weight().map_or(0, i64::from);
        for (m, c) in f.terms() {
            op.add_term(c.clone(), m.clone(), Monomial::one());
        }
        op
    }

    /// The single derivative `d_v`.
    pub fn partial(v: Var) -> Operator {
        Operator::from_terms(
            [(Rational::one(), Monomial::one(), Monomial::var(v))],
            UNBOUNDED,
        )
    }

    /// Builds an operator from explicit terms. Terms with partial index sum
    /// above `window` are dropped; `shift` is taken as the largest term
    /// shift (0 for an empty operator).
    pub fn from_terms<I>(terms: I, window: i64) -> Operator
    where
        I: IntoIterator<Item = (Rational, Monomial, Monomial)>,
    {
        let mut op = Operator {
            terms: BTreeMap::new(),
            window,
            shift: i64::MIN,
        };
        for (c, m, d) in terms {
            op.shift = op.shift.max(m.weight() as i64 - d.weight() as i64);
            op.add_term(c, m, d);
        }
        if op.shift == i64::MIN {
            op.shift = 0;
        }
        op
    }

    /// Empty operator with a declared window and weight shift; filled with
    /// [`Operator::add_term`] by the constructors in `lie`.
    pub fn with_window(window: i64, shift: i64) -> Operator {
        Operator {
            terms: BTreeMap::new(),
            window,
            shift,
        }
    }

    /// Adds `c * multiplier * d^partials`, dropping it if the partials exceed
    /// the window.
    pub fn add_term(&mut self, c: Rational, multiplier: Monomial, partials: Monomial) {
        if c.is_zero() || partials.weight() as i64 > self.window {
            return;
        }
        let key = (partials, multiplier);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// Declared upper bound on the weight shift.
    pub fn weight_shift(&self) -> i64 {
        self.shift
    }

    /// The common weight shift of all stored terms, if there is one.
    pub fn uniform_shift(&self) -> Option<i64> {
        let mut shifts = self.terms().map(|t| t.weight_shift());
        let first = shifts.next()?;
        shifts.all(|s| s == first).then_some(first)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order: by partial multiset, then multiplier.
    pub fn terms(&self) -> impl Iterator<Item = OpTerm> + '_ {
        self.terms.iter().map(|((d, m), c)| OpTerm {
            coeff: c.clone(),
            multiplier: m.clone(),
            partials: d.clone(),
        })
    }

    pub fn coeff(&self, multiplier: &Monomial, partials: &Monomial) -> Rational {
        self.terms
            .get(&(partials.clone(), multiplier.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Restricts the window to `w`, dropping terms beyond it.
    pub fn truncate(&self, w: i64) -> Operator {
        let window = self.window.min(w);
        Operator {
            terms: self
                .terms
                .iter()
                .filter(|((d, _), _)| d.weight() as i64 <= window)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
            window,
            shift: self.shift,
        }
    }

    pub fn scale(&self, c: &Rational) -> Operator {
        if c.is_zero() {
            return Operator {
                terms: BTreeMap::new(),
                ..self.clone()
            };
        }
        Operator {
            terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect(),
            window: self.window,
            shift: self.shift,
        }
    }

    fn check_input(&self, f: &Poly) -> Result<(), OpError> {
        if let Some(w) = f.max_weight() {
            if i64::from(w) > self.window {
                return Err(OpError::WindowExceeded {
                    weight: w.into(),
                    window: self.window,
                });
            }
        }
        Ok(())
    }

    /// Applies the operator to `f`. Errors if `f` has weight beyond the
    /// window.
    pub fn apply(&self, f: &Poly) -> Result<Poly, OpError> {
        self.check_input(f)?;
        let mut out = Poly::zero();
        for ((d, m), c) in &self.terms {
            let reach = d.weight();
            for (mono, a) in f.terms() {
                if reach > mono.weight() {
                    continue;
                }
                if let Some((k, rest)) = mono.differentiate(d) {
                    out.add_term(rest.mul(m), c * a * Rational::from_integer(k));
                }
            }
        }
        Ok(out)
    }

    /// Normal-ordered product `self ∘ other`.
    ///
    /// The window of the result is `min(other.window, self.window -
    /// other.shift)`, the largest weight on which applying `other` then
    /// `self` stays inside both windows.
    pub fn compose(&self, other: &Operator) -> Operator {
        let window = other
            .window
            .min(self.window.saturating_sub(other.shift))
            .min(UNBOUNDED);
        let shift = self.shift.saturating_add(other.shift);
        let mut out = Operator::with_window(window, shift);
        for ((da, ma), ca) in &self.terms {
            for ((db, mb), cb) in &other.terms {
                let coeff = ca * cb;
                leibniz(da, mb, |k, moved, rest_partials| {
                    // da = moved * rest_partials, moved acts on mb
                    let (kk, mb_rest) = mb
                        .differentiate(moved)
                        .expect("leibniz only moves partials that divide the multiplier");
                    let c = &coeff * Rational::from_integer(k * kk);
                    out.add_term(c, ma.mul(&mb_rest), rest_partials.mul(db));
                });
            }
        }
        out
    }

    /// `self ∘ other - other ∘ self`.
    pub fn commutator(&self, other: &Operator) -> Operator {
        &self.compose(other) - &other.compose(self)
    }

    /// Exact equality of all terms with partial index sum `<= w`, which is
    /// equivalent to agreement on every polynomial of weight `<= w`.
    pub fn op_equal(&self, other: &Operator, w: i64) -> Result<bool, OpError> {
        for op in [self, other] {
            if w > op.window {
                return Err(OpError::WindowExceeded {
                    weight: w,
                    window: op.window,
                });
            }
        }
        let a = self.truncate(w);
        let b = other.truncate(w);
        Ok(a.terms == b.terms)
    }

    /// One term per line in the form `c * p1*q2 * d(p1)d(p3)`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for t in self.terms() {
            s.push_str(&t.to_string());
            s.push('\n');
        }
        s
    }
}

/// Calls `emit(multiplicity, moved, remaining)` for every way of splitting
/// the partial multiset `partials` into a part `moved` that acts on the
/// multiplier `target` and the part `remaining` that passes through. The
/// multiplicity is the product of binomials `C(e_v, t_v)`.
fn leibniz<F: FnMut(BigInt, &Monomial, &Monomial)>(
    partials: &Monomial,
    target: &Monomial,
    mut emit: F,
) {
    let shared: Vec<(Var, u32, u32)> = partials
        .pairs()
        .iter()
        .filter_map(|&(v, e)| {
            let t = target.exponent(v);
            (t > 0).then_some((v, e, e.min(t)))
        })
        .collect();
    let mut counts = vec![0u32; shared.len()];
    loop {
        let moved = Monomial::from_pairs(shared.iter().zip(&counts).map(|(&(v, _, _), &t)| (v, t)));
        let remaining = partials.div(&moved).expect("moved part divides partials");
        let mut k = BigInt::one();
        for (&(_, e, _), &t) in shared.iter().zip(&counts) {
            k *= binomial(e as i64, t as i64);
        }
        emit(k, &moved, &remaining);

        // odometer
        let mut i = 0;
        loop {
            if i == counts.len() {
                return;
            }
            if counts[i] < shared[i].2 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

impl fmt::Display for OpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if !self.multiplier.is_one() {
            write!(f, " * {}", self.multiplier)?;
        }
        if !self.partials.is_one() {
            f.write_str(" * ")?;
            for &(v, e) in self.partials.pairs() {
                for _ in 0..e {
                    write!(f, "d({v})")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, t) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl Add<&Operator> for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        let mut out = Operator::with_window(self.window.min(rhs.window), self.shift.max(rhs.shift));
        for op in [self, rhs] {
            for ((d, m), c) in &op.terms {
                out.add_term(c.clone(), m.clone(), d.clone());
            }
        }
        out
    }
}

impl Sub<&Operator> for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self + &(-rhs)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(&-Rational::one())
    }
}

impl Mul<&Operator> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.compose(rhs)
    }
}
