//! Fourier transform `S = exp(e) exp(D) exp(e)` and the Pontryagin product
//! on the quotient by a [`RelationIdeal`].
//!
//! Every exponential is a finite sum because the operators involved are
//! nilpotent on the quotient. Each partial sum is projected back to normal
//! form, which keeps weights bounded by the genus.

use thiserror::Error;

use crate::exec::Exec;
use crate::ideal::{IdealError, RelationIdeal};
use crate::lie::{parity_sign, LieContext};
use crate::poly::{Monomial, Poly, Rational};
use crate::report::{CheckRecord, Report, Status};
use crate::weyl::{OpError, Operator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FourierError {
    #[error("operator is not nilpotent: {0}")]
    NotNilpotent(String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Operator(#[from] OpError),
}

/// Which termination argument makes `exp(A)` a finite sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotence {
    LowersWeight,
    /// Terminates only modulo an ideal containing all high weights.
    RaisesWeight,
    LowersPDegree,
}

/// Classifies `op`, or explains why it cannot be exponentiated.
pub fn nilpotence(op: &Operator) -> Result<Nilpotence, FourierError> {
    let terms: Vec<_> = op.terms().collect();
    let pshift =
        |t: &crate::weyl::OpTerm| i64::from(t.multiplier.pdeg()) - i64::from(t.partials.pdeg());
    if terms.iter().all(|t| t.weight_shift() < 0) {
        Ok(Nilpotence::LowersWeight)
    } else if terms.iter().all(|t| t.weight_shift() > 0) {
        Ok(Nilpotence::RaisesWeight)
    } else if terms.iter().all(|t| pshift(t) < 0) {
        Ok(Nilpotence::LowersPDegree)
    } else {
        let t = terms
            .iter()
            .find(|t| t.weight_shift() == 0 && pshift(t) >= 0)
            .or(terms.first())
            .expect("a nonempty operator failed the test");
        Err(FourierError::NotNilpotent(format!(
            "term {} * {} * d({}) has weight shift {}",
            t.coeff,
            t.multiplier,
            t.partials,
            t.weight_shift()
        )))
    }
}

/// `sum_k A^k(f) / k!`, with `reduce` applied after every step. Stops at the
/// first vanishing term; `max_steps` guards against non-termination.
pub fn exp_series<R>(
    op: &Operator,
    f: &Poly,
    reduce: R,
    max_steps: usize,
) -> Result<Poly, FourierError>
where
    R: Fn(&Poly) -> Poly,
{
    let mut term = reduce(f);
    let mut sum = term.clone();
    for k in 1..=max_steps {
        if term.is_zero() {
            return Ok(sum);
        }
        term = reduce(
            &op.apply(&term)?
                .scale(&Rational::new(1.into(), (k as i64).into())),
        );
        sum += &term;
    }
    if term.is_zero() {
        Ok(sum)
    } else {
        Err(FourierError::NotNilpotent(format!(
            "no termination after {max_steps} steps"
        )))
    }
}

/// `exp(A)(f)` on the quotient by `ideal`.
pub fn exp_apply(op: &Operator, f: &Poly, ideal: &RelationIdeal) -> Result<Poly, FourierError> {
    if op.is_zero() {
        return Ok(ideal.normal_form(f)?);
    }
    nilpotence(op)?;
    let f = ideal.normal_form(f)?;
    let steps = 4 * (ideal.source_cap() as usize + 1);
    exp_series(op, &f, |x| ideal.project(x), steps)
}

/// Multiplies each `(w, s)`-component by `(-1)^s`.
pub fn minus_one_pullback(f: &Poly) -> Poly {
    Poly::from_terms(f.terms().map(|(m, c)| {
        let c = if m.sdeg() % 2 == 0 {
            c.clone()
        } else {
            -c.clone()
        };
        (m.clone(), c)
    }))
}

#[derive(Clone, Debug)]
pub struct FourierMap {
    ideal: RelationIdeal,
    ctx: LieContext,
    e: Operator,
    d: Operator,
}

impl FourierMap {
    pub fn new(ideal: RelationIdeal) -> FourierMap {
        let ctx = LieContext::new(ideal.genus(), ideal.source_cap())
            .expect("ideal has a valid genus and cap");
        let e = ctx.mult_p(1);
        let d = ctx.make_d();
        FourierMap { ideal, ctx, e, d }
    }

    pub fn ideal(&self) -> &RelationIdeal {
        &self.ideal
    }

    pub fn genus(&self) -> u32 {
        self.ideal.genus()
    }

    pub fn context(&self) -> &LieContext {
        &self.ctx
    }

    fn genus_sign(&self) -> Rational {
        parity_sign(i64::from(self.genus()))
    }

    pub fn fourier(&self, f: &Poly) -> Result<Poly, FourierError> {
        let a = exp_apply(&self.e, f, &self.ideal)?;
        let b = exp_apply(&self.d, &a, &self.ideal)?;
        exp_apply(&self.e, &b, &self.ideal)
    }

    /// `S^{-1} = (-1)^g [-1]^* S`.
    pub fn inverse(&self, f: &Poly) -> Result<Poly, FourierError> {
        Ok(minus_one_pullback(&self.fourier(f)?).scale(&self.genus_sign()))
    }

    /// `a * b = S^{-1}(S(a) S(b))`.
    pub fn pontryagin(&self, a: &Poly, b: &Poly) -> Result<Poly, FourierError> {
        let prod = self.ideal.project(&(self.fourier(a)? * self.fourier(b)?));
        self.inverse(&prod)
    }

    /// Unit of the Pontryagin product.
    pub fn pontryagin_unit(&self) -> Result<Poly, FourierError> {
        self.inverse(&Poly::one())
    }

    fn basis(&self) -> Vec<Monomial> {
        self.ideal.full_quotient_basis()
    }

    /// Checks `S^2 = (-1)^g [-1]^*` on every quotient basis element. Hard
    /// for `g <= 3`; reported as informative above.
    pub fn verify_s2(&self, exec: Exec) -> Result<Report, FourierError> {
        let sign = self.genus_sign();
        let results = exec.map(&self.basis(), |m| -> Result<Option<String>, FourierError> {
            let b = Poly::monomial(m.clone());
            let lhs = self.fourier(&self.fourier(&b)?)?;
            let rhs = minus_one_pullback(&b).scale(&sign);
            Ok((lhs != rhs).then(|| {
                format!("S^2({m}) = {lhs}, expected {rhs}; ideal incomplete at tested weights, raise source_cap")
            }))
        });
        let mut counter = None;
        for r in results {
            if let Some(c) = r? {
                counter.get_or_insert(c);
            }
        }
        let mut rec = CheckRecord::new(
            "S^2 = (-1)^g [-1]^*",
            vec![],
            self.genus(),
            self.window(),
            counter.is_none(),
        )
        .with_counterexample(counter);
        if self.genus() > 3 {
            rec.status = Status::Informative;
        }
        Ok(Report { records: vec![rec] })
    }

    fn window(&self) -> i64 {
        i64::from(self.ctx.window())
    }

    /// Checks that `S` maps bidegree `(w, s)` to `(g - w + s, s)`.
    pub fn verify_degrees(&self, exec: Exec) -> Result<Report, FourierError> {
        let g = i64::from(self.genus());
        let results = exec.map(&self.basis(), |m| -> Result<Option<String>, FourierError> {
            let img = self.fourier(&Poly::monomial(m.clone()))?;
            let (w, s) = (i64::from(m.weight()), m.sdeg());
            let bad = img
                .monomials()
                .find(|x| i64::from(x.weight()) != g - w + i64::from(s) || x.sdeg() != s);
            Ok(bad.map(|x| format!("S({m}) contains {x}")))
        });
        let mut counter = None;
        for r in results {
            if let Some(c) = r? {
                counter.get_or_insert(c);
            }
        }
        let rec = CheckRecord::new(
            "S bidegree",
            vec![],
            self.genus(),
            self.window(),
            counter.is_none(),
        )
        .with_counterexample(counter);
        Ok(Report { records: vec![rec] })
    }

    /// Checks `S X_{m,n} S^{-1} = (-1)^n X_{n,m}` and the same for `Y` on
    /// every quotient basis element.
    pub fn verify_conjugation(&self, m: i64, n: i64, exec: Exec) -> Result<Report, FourierError> {
        let sign = parity_sign(n);
        let mut report = Report::default();
        let families: [(&str, Operator, Operator); 2] = [
            (
                "S X S^-1 = (-1)^n X^t",
                self.ctx.make_x(m, n),
                self.ctx.make_x(n, m),
            ),
            (
                "S Y S^-1 = (-1)^n Y^t",
                self.ctx.make_y(m, n),
                self.ctx.make_y(n, m),
            ),
        ];
        for (name, a, b) in families {
            let results = exec.map(
                &self.basis(),
                |mono| -> Result<Option<String>, FourierError> {
                    let basis = Poly::monomial(mono.clone());
                    let inner = self.ideal.project(&a.apply(&self.inverse(&basis)?)?);
                    let lhs = self.fourier(&inner)?;
                    let rhs = self.ideal.project(&b.apply(&basis)?.scale(&sign));
                    Ok((lhs != rhs).then(|| format!("on {mono}: got {lhs}, expected {rhs}")))
                },
            );
            let mut counter = None;
            for r in results {
                if let Some(c) = r? {
                    counter.get_or_insert(c);
                }
            }
            report.records.push(
                CheckRecord::new(
                    name,
                    vec![m, n],
                    self.genus(),
                    self.window(),
                    counter.is_none(),
                )
                .with_counterexample(counter),
            );
        }
        Ok(report)
    }

    /// Conjugation checks for all `m + n <= max_order`.
    pub fn verify_conjugation_all(
        &self,
        max_order: u32,
        exec: Exec,
    ) -> Result<Report, FourierError> {
        let mut report = Report::default();
        for s in 0..=i64::from(max_order) {
            for m in 0..=s {
                report.extend(self.verify_conjugation(m, s - m, exec)?);
            }
        }
        Ok(report)
    }
}
