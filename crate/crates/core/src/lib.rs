//! Exact symbolic model of the tautological ring of a Jacobian.
//!
//! The ring is modelled as `Q[p1, p2, ..., q1, q2, ...]` modulo a relation
//! ideal. On top of it the crate provides
//!
//! * [`weyl`]: differential operators with polynomial coefficients, normal
//!   ordered, with explicit validity windows;
//! * [`lie`]: the operators `X_{m,n}`, `Y_{m,n}`, `D` and the sl2 triple at a
//!   fixed genus, plus exact verification of their brackets;
//! * [`ideal`]: the genus-`g` relation ideal obtained by closing the
//!   vanishing of all weight `> g` classes under `D` and multiplication;
//! * [`fourier`]: the Fourier transform `S = exp(e) exp(D) exp(e)` and the
//!   Pontryagin product on the quotient;
//! * [`newton`]: conversion between special-divisor classes and `p_k - q_k`.

pub mod exec;
pub mod fourier;
pub mod ideal;
pub mod lie;
pub mod linalg;
pub mod newton;
pub mod parse;
pub mod poly;
pub mod report;
pub mod weyl;

pub use exec::Exec;
pub use fourier::{FourierError, FourierMap};
pub use ideal::{IdealError, RelationIdeal};
pub use lie::{LieContext, LieError, Sl2};
pub use parse::{parse_poly, ParseError};
pub use poly::{enumerate_monomials, int, rat, Kind, Monomial, Poly, Rational, Var};
pub use report::{CheckRecord, Report, Status, VerificationFailure};
pub use weyl::{OpError, Operator};

/// Binomial coefficient with the convention `C(n, m) = 0` for `m < 0` or
/// `n < m`.
pub fn binomial(n: i64, m: i64) -> num_bigint::BigInt {
    use num_traits::{One, Zero};
    if m < 0 || n < m || n < 0 {
        return num_bigint::BigInt::zero();
    }
    let m = m.min(n - m);
    let mut acc = num_bigint::BigInt::one();
    for i in 0..m {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(n: u32) -> num_bigint::BigInt {
    (1..=n).fold(num_bigint::BigInt::from(1), |acc, k| acc * k)
}
