//! The operators `D`, `X_{m,n}`, `Y_{m,n}`, `X~_{k,n}` and the sl2 triple
//! at a fixed genus, and exact verification of their brackets.
//!
//! All constructors materialize operators up to the context window and
//! replace the symbol `q0` by the scalar `g`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::exec::Exec;
use crate::poly::{enumerate_monomials, int, Monomial, Poly, Rational, Var};
use crate::report::{CheckRecord, Report};
use crate::weyl::Operator;
use crate::{binomial, factorial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("genus must be at least 2, got {0}")]
    InvalidGenus(u32),
    #[error("window must be at least 1")]
    InvalidWindow,
}

/// Genus and truncation window shared by every constructor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LieContext {
    genus: u32,
    window: u32,
}

/// The sl2 triple `e = p1*`, `f = -D`, `h = [e, f]`.
#[derive(Clone, Debug)]
pub struct Sl2 {
    pub e: Operator,
    pub f: Operator,
    pub h: Operator,
}

fn rational(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Calls `f` for every ordered tuple of `parts` positive integers whose sum
/// is at most `max_sum`.
fn for_each_tuple<F: FnMut(&[u32])>(parts: usize, max_sum: u32, mut f: F) {
    fn rec<F: FnMut(&[u32])>(buf: &mut Vec<u32>, parts: usize, budget: u32, f: &mut F) {
        if buf.len() == parts {
            f(buf);
            return;
        }
        let left = (parts - buf.len() - 1) as u32;
        if budget < left + 1 {
            return;
        }
        for i in 1..=budget - left {
            buf.push(i);
            rec(buf, parts, budget - i, f);
            buf.pop();
        }
    }
    rec(&mut Vec::with_capacity(parts), parts, max_sum, &mut f);
}

fn inverse_factorials(idx: &[u32]) -> BigInt {
    idx.iter().fold(BigInt::one(), |acc, &i| acc * factorial(i))
}

impl LieContext {
    pub fn new(genus: u32, window: u32) -> Result<LieContext, LieError> {
        if genus < 2 {
            return Err(LieError::InvalidGenus(genus));
        }
        if window < 1 {
            return Err(LieError::InvalidWindow);
        }
        Ok(LieContext { genus, window })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    fn w(&self) -> i64 {
        i64::from(self.window)
    }

    /// `q_index` as `(coefficient, monomial)`, with `q0 = g`.
    fn q_or_genus(&self, index: u32) -> (Rational, Monomial) {
        match Var::new(crate::poly::Kind::Q, index) {
            Some(v) => (Rational::one(), Monomial::var(v)),
            None => (int(self.genus.into()), Monomial::one()),
        }
    }

    /// Multiplication by `p_n`.
    pub fn mult_p(&self, n: u32) -> Operator {
        Operator::multiplication(&Poly::p(n))
    }

    /// Multiplication by `q_n`, with `q0 = g`.
    pub fn mult_q(&self, n: u32) -> Operator {
        let (c, m) = self.q_or_genus(n);
        Operator::multiplication(&Poly::term(c, m))
    }

    /// The second-order operator
    /// `D = 1/2 sum C(m+n,n) p_{m+n-1} dp_m dp_n
    ///    + sum C(m+n-1,n) q_{m+n-1} dq_m dp_n - sum q_{n-1} dp_n`.
    pub fn make_d(&self) -> Operator {
        let w = self.window;
        let mut op = Operator::with_window(self.w(), -1);
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        for m in 1..=w {
            for n in 1..=w.saturating_sub(m) {
                let c = &half * rational(binomial((m + n).into(), n.into()));
                op.add_term(
                    c,
                    Monomial::var(Var::p(m + n - 1)),
                    Monomial::from_vars([Var::p(m), Var::p(n)]),
                );
                op.add_term(
                    rational(binomial((m + n - 1).into(), n.into())),
                    Monomial::var(Var::q(m + n - 1)),
                    Monomial::from_vars([Var::q(m), Var::p(n)]),
                );
            }
        }
        for n in 1..=w {
            let (c, m) = self.q_or_genus(n - 1);
            op.add_term(-c, m, Monomial::var(Var::p(n)));
        }
        op
    }

    /// `X_{m,n}`; zero unless `m, n >= 0` and `m + n >= 2`.
    pub fn make_x(&self, m: i64, n: i64) -> Operator {
        if m < 0 || n < 0 || m + n < 2 {
            return Operator::zero();
        }
        let mut op = Operator::with_window(self.w(), n - 1);
        let (mu, nu) = (m as u32, n as u32);
        if m == 0 {
            op.add_term(
                rational(factorial(nu)),
                Monomial::var(Var::p(nu - 1)),
                Monomial::one(),
            );
            return op;
        }
        let sgn = sign(m);
        let mm = int(m);
        // sum over (i_1..i_m): (n+S)!/prod(i!) p_{n+S-1} dp_i...
        for_each_tuple(mu as usize, self.window, |idx| {
            let s: u32 = idx.iter().sum();
            let c = rational(factorial(nu + s)) / rational(inverse_factorials(idx));
            let partials = Monomial::from_vars(idx.iter().map(|&i| Var::p(i)));
            op.add_term(&sgn * c, Monomial::var(Var::p(nu + s - 1)), partials);
        });
        // m * sum over (i_1..i_{m-1}; j): (n+S+j-1)!/(prod(i!) (j-1)!) q_{n+S+j-1} dp_i... dq_j
        for_each_tuple(mu as usize - 1, self.window, |idx| {
            let s: u32 = idx.iter().sum();
            for j in 1..=self.window.saturating_sub(s) {
                let c = rational(factorial(nu + s + j - 1))
                    / rational(inverse_factorials(idx) * factorial(j - 1));
                let partials =
                    Monomial::from_vars(idx.iter().map(|&i| Var::p(i)).chain([Var::q(j)]));
                op.add_term(
                    &sgn * &mm * c,
                    Monomial::var(Var::q(nu + s + j - 1)),
                    partials,
                );
            }
        });
        // -m * sum over (i_1..i_{m-1}): (n+S)!/prod(i!) q_{n+S-1} dp_i...
        // (for m = 1 this is the constant term -n! q_{n-1})
        for_each_tuple(mu as usize - 1, self.window, |idx| {
            let s: u32 = idx.iter().sum();
            let c = rational(factorial(nu + s)) / rational(inverse_factorials(idx));
            let (gq, mult) = self.q_or_genus(nu + s - 1);
            let partials = Monomial::from_vars(idx.iter().map(|&i| Var::p(i)));
            op.add_term(-(&sgn * &mm * c * gq), mult, partials);
        });
        debug_assert!(op.uniform_shift().is_none_or(|s| s == n - 1));
        op
    }

    /// `Y_{m,n}`; zero unless `m, n >= 0`.
    pub fn make_y(&self, m: i64, n: i64) -> Operator {
        if m < 0 || n < 0 {
            return Operator::zero();
        }
        let mut op = Operator::with_window(self.w(), n);
        let (mu, nu) = (m as u32, n as u32);
        let sgn = sign(m);
        for_each_tuple(mu as usize, self.window, |idx| {
            let s: u32 = idx.iter().sum();
            let c = rational(factorial(nu + s)) / rational(inverse_factorials(idx));
            let (gq, mult) = self.q_or_genus(nu + s);
            let partials = Monomial::from_vars(idx.iter().map(|&i| Var::p(i)));
            op.add_term(&sgn * c * gq, mult, partials);
        });
        debug_assert!(op.uniform_shift().is_none_or(|s| s == n));
        op
    }

    /// `X~_{k,n} = X_{k,n} + k n Y_{k-1,n-1}`.
    pub fn make_tilde_x(&self, k: i64, n: i64) -> Operator {
        let x = self.make_x(k, n);
        if k <= 0 || n <= 0 {
            return x;
        }
        &x + &self.make_y(k - 1, n - 1).scale(&int(k * n))
    }

    /// `h = sum (i+1) p_i dp_i + sum j q_j dq_j - g`, which equals `-X_{1,1}`
    /// and acts on a monomial of weight `w` and s-degree `s` by `2w - s - g`.
    pub fn make_h(&self) -> Operator {
        let mut op = Operator::with_window(self.w(), 0);
        for i in 1..=self.window {
            op.add_term(
                int((i + 1).into()),
                Monomial::var(Var::p(i)),
                Monomial::var(Var::p(i)),
            );
            op.add_term(
                int(i.into()),
                Monomial::var(Var::q(i)),
                Monomial::var(Var::q(i)),
            );
        }
        op.add_term(-int(self.genus.into()), Monomial::one(), Monomial::one());
        op
    }

    pub fn make_sl2(&self) -> Sl2 {
        Sl2 {
            e: self.mult_p(1),
            f: -&self.make_d(),
            h: self.make_h(),
        }
    }

    /// Eigenvalue of `h` on a monomial.
    pub fn h_eigenvalue(&self, m: &Monomial) -> i64 {
        2 * i64::from(m.weight()) - i64::from(m.sdeg()) - i64::from(self.genus)
    }
}

/// Identity families checked by [`verify_bracket`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketKind {
    /// `[X_{m,n}, X_{m',n'}] = (n m' - m n') X_{m+m'-1,n+n'-1}`
    XX,
    /// `[X_{m,n}, Y_{m',n'}] = (n m' - m n') Y_{m+m'-1,n+n'-1}`
    XY,
    /// `[Y_{m,n}, Y_{m',n'}] = 0`
    YY,
    /// sl2 relations and the identifications `h = -X11`, `X20 = 2D`, `X02 = 2e`
    Sl2,
    /// brackets of `X~_{k,n}` with each other and with `Y`
    Tilde,
    /// `[h, X] = (n-m) X`, `[h, Y] = (n-m) Y` and bigrading shifts on monomials
    HGrading,
    /// double brackets of `f` with multiplication operators and `f(p_n)`, `f(q_n)`
    Derivation,
}

impl BracketKind {
    pub const ALL: [BracketKind; 7] = [
        BracketKind::XX,
        BracketKind::XY,
        BracketKind::YY,
        BracketKind::Sl2,
        BracketKind::Tilde,
        BracketKind::HGrading,
        BracketKind::Derivation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BracketKind::XX => "XX",
            BracketKind::XY => "XY",
            BracketKind::YY => "YY",
            BracketKind::Sl2 => "sl2",
            BracketKind::Tilde => "tilde",
            BracketKind::HGrading => "hgrading",
            BracketKind::Derivation => "derivation",
        }
    }
}

/// Precomputed `X_{m,n}`, `X~_{m,n}`, `Y_{m,n}` for `m + n <= cap`.
pub struct OperatorTable {
    x: BTreeMap<(i64, i64), Operator>,
    tx: BTreeMap<(i64, i64), Operator>,
    y: BTreeMap<(i64, i64), Operator>,
}

impl OperatorTable {
    pub fn build(ctx: &LieContext, cap: i64, exec: Exec) -> OperatorTable {
        let idx: Vec<(i64, i64)> = (0..=cap)
            .flat_map(|s| (0..=s).map(move |m| (m, s - m)))
            .collect();
        let built = exec.map(&idx, |&(m, n)| {
            let x = ctx.make_x(m, n);
            let y = ctx.make_y(m, n);
            let tx = if m > 0 && n > 0 {
                &x + &y_shifted(ctx, m, n)
            } else {
                x.clone()
            };
            ((m, n), x, tx, y)
        });
        let mut t = OperatorTable {
            x: BTreeMap::new(),
            tx: BTreeMap::new(),
            y: BTreeMap::new(),
        };
        for (k, x, tx, y) in built {
            t.x.insert(k, x);
            t.tx.insert(k, tx);
            t.y.insert(k, y);
        }
        t
    }

    fn get(map: &BTreeMap<(i64, i64), Operator>, m: i64, n: i64) -> Operator {
        map.get(&(m, n)).cloned().unwrap_or_else(Operator::zero)
    }

    pub fn x(&self, m: i64, n: i64) -> Operator {
        OperatorTable::get(&self.x, m, n)
    }

    pub fn tilde_x(&self, m: i64, n: i64) -> Operator {
        OperatorTable::get(&self.tx, m, n)
    }

    pub fn y(&self, m: i64, n: i64) -> Operator {
        OperatorTable::get(&self.y, m, n)
    }
}

fn y_shifted(ctx: &LieContext, k: i64, n: i64) -> Operator {
    ctx.make_y(k - 1, n - 1).scale(&int(k * n))
}

/// Compares two operators on the largest window valid for both and builds
/// a record; on failure the counterexample lists the first terms of the
/// difference.
pub fn check_operators(
    identity: &str,
    params: Vec<i64>,
    ctx: &LieContext,
    lhs: &Operator,
    rhs: &Operator,
) -> CheckRecord {
    let w = lhs.window().min(rhs.window());
    let ok = lhs.op_equal(rhs, w).unwrap_or(false);
    let counter = (!ok).then(|| {
        let diff = (lhs - rhs).truncate(w);
        diff.dump().lines().take(6).collect::<Vec<_>>().join("; ")
    });
    CheckRecord::new(identity, params, ctx.genus(), w, ok).with_counterexample(counter)
}

fn pairs_with_sum(min: i64, max: i64) -> Vec<(i64, i64)> {
    (min..=max)
        .flat_map(|s| (0..=s).map(move |m| (m, s - m)))
        .collect()
}

/// Runs one identity family for all parameters with `m + n <= max_order`.
pub fn verify_bracket(kind: BracketKind, max_order: u32, ctx: &LieContext, exec: Exec) -> Report {
    let k = i64::from(max_order);
    let records = match kind {
        BracketKind::XX | BracketKind::XY | BracketKind::YY | BracketKind::Tilde => {
            let table = OperatorTable::build(ctx, 2 * k, exec);
            verify_pairs(kind, k, ctx, &table, exec)
        }
        BracketKind::Sl2 => verify_sl2(ctx),
        BracketKind::HGrading => {
            let table = OperatorTable::build(ctx, k, exec);
            verify_h_grading(k, ctx, &table, exec)
        }
        BracketKind::Derivation => verify_derivation(k, ctx, exec),
    };
    Report { records }
}

/// Every identity family in turn.
pub fn verify_all(max_order: u32, ctx: &LieContext, exec: Exec) -> Report {
    let mut report = Report::default();
    for kind in BracketKind::ALL {
        report.extend(verify_bracket(kind, max_order, ctx, exec));
    }
    report
}

#[derive(Clone, Copy)]
enum Pair {
    XX,
    XY,
    YY,
    TildeTilde,
    TildeY,
}

fn verify_pairs(
    kind: BracketKind,
    k: i64,
    ctx: &LieContext,
    t: &OperatorTable,
    exec: Exec,
) -> Vec<CheckRecord> {
    let x_idx = pairs_with_sum(2, k);
    let y_idx = pairs_with_sum(0, k);
    let product = |which: Pair,
                   left: &[(i64, i64)],
                   right: &[(i64, i64)]|
     -> Vec<(Pair, i64, i64, i64, i64)> {
        left.iter()
            .flat_map(|&(m, n)| right.iter().map(move |&(a, b)| (which, m, n, a, b)))
            .collect()
    };
    let jobs = match kind {
        BracketKind::XX => product(Pair::XX, &x_idx, &x_idx),
        BracketKind::XY => product(Pair::XY, &x_idx, &y_idx),
        BracketKind::YY => product(Pair::YY, &y_idx, &y_idx),
        _ => {
            let mut v = product(Pair::TildeTilde, &x_idx, &x_idx);
            v.extend(product(Pair::TildeY, &x_idx, &y_idx));
            v
        }
    };
    exec.map(&jobs, |&(which, m, n, m2, n2)| {
        let c = int(n * m2 - m * n2);
        let params = vec![m, n, m2, n2];
        match which {
            Pair::XX => {
                let lhs = t.x(m, n).commutator(&t.x(m2, n2));
                let rhs = t.x(m + m2 - 1, n + n2 - 1).scale(&c);
                check_operators("[X,X]", params, ctx, &lhs, &rhs)
            }
            Pair::XY => {
                let lhs = t.x(m, n).commutator(&t.y(m2, n2));
                let rhs = t.y(m + m2 - 1, n + n2 - 1).scale(&c);
                check_operators("[X,Y]", params, ctx, &lhs, &rhs)
            }
            Pair::YY => {
                let lhs = t.y(m, n).commutator(&t.y(m2, n2));
                check_operators("[Y,Y]", params, ctx, &lhs, &Operator::zero())
            }
            Pair::TildeY => {
                let lhs = t.tilde_x(m, n).commutator(&t.y(m2, n2));
                let rhs = t.y(m + m2 - 1, n + n2 - 1).scale(&c);
                check_operators("[X~,Y]", params, ctx, &lhs, &rhs)
            }
            Pair::TildeTilde => {
                let lhs = t.tilde_x(m, n).commutator(&t.tilde_x(m2, n2));
                let y_coeff = binomial(n, 2) * binomial(m2, 2) - binomial(n2, 2) * binomial(m, 2);
                let rhs = &t.tilde_x(m + m2 - 1, n + n2 - 1).scale(&c)
                    - &t.y(m + m2 - 2, n + n2 - 2)
                        .scale(&(int(4) * rational(y_coeff)));
                check_operators("[X~,X~]", params, ctx, &lhs, &rhs)
            }
        }
    })
}

fn verify_sl2(ctx: &LieContext) -> Vec<CheckRecord> {
    let Sl2 { e, f, h } = ctx.make_sl2();
    let two = int(2);
    let mut out = vec![
        check_operators("[e,f]=h", vec![], ctx, &e.commutator(&f), &h),
        check_operators("[h,e]=2e", vec![], ctx, &h.commutator(&e), &e.scale(&two)),
        check_operators(
            "[h,f]=-2f",
            vec![],
            ctx,
            &h.commutator(&f),
            &f.scale(&-&two),
        ),
        check_operators("h=-X11", vec![], ctx, &h, &-&ctx.make_x(1, 1)),
        check_operators(
            "X20=2D",
            vec![],
            ctx,
            &ctx.make_x(2, 0),
            &ctx.make_d().scale(&two),
        ),
        check_operators("X02=2e", vec![], ctx, &ctx.make_x(0, 2), &e.scale(&two)),
        check_operators(
            "X~11=-h+g",
            vec![],
            ctx,
            &ctx.make_tilde_x(1, 1),
            &(&-&h + &Operator::scalar(int(ctx.genus().into()))),
        ),
    ];
    // h is diagonal with eigenvalue 2w - s - g
    let top = ctx.window().min(8);
    let mut diag_ok = true;
    let mut counter = None;
    for w in 0..=top {
        for m in enumerate_monomials(w) {
            let f = Poly::monomial(m.clone());
            let expected = f.scale(&int(ctx.h_eigenvalue(&m)));
            if h.apply(&f).ok() != Some(expected) {
                diag_ok = false;
                counter.get_or_insert_with(|| format!("h({m})"));
            }
        }
    }
    out.push(
        CheckRecord::new("h diagonal", vec![], ctx.genus(), top.into(), diag_ok)
            .with_counterexample(counter),
    );
    out
}

fn verify_h_grading(k: i64, ctx: &LieContext, t: &OperatorTable, exec: Exec) -> Vec<CheckRecord> {
    let h = ctx.make_h();
    let mut jobs: Vec<(bool, i64, i64)> = pairs_with_sum(2, k)
        .into_iter()
        .map(|(m, n)| (true, m, n))
        .collect();
    jobs.extend(pairs_with_sum(0, k).into_iter().map(|(m, n)| (false, m, n)));
    let top = ctx.window().min(7);
    let monomials: Vec<Monomial> = (0..=top).flat_map(enumerate_monomials).collect();
    exec.map(&jobs, |&(is_x, m, n)| {
        let op = if is_x { t.x(m, n) } else { t.y(m, n) };
        let (dw, ds) = if is_x { (n - 1, n + m - 2) } else { (n, n + m) };
        let name = if is_x { "[h,X]=(n-m)X" } else { "[h,Y]=(n-m)Y" };
        let mut rec = check_operators(
            name,
            vec![m, n],
            ctx,
            &h.commutator(&op),
            &op.scale(&int(n - m)),
        );
        // bigrading shift on monomials
        for mono in &monomials {
            let out = op
                .apply(&Poly::monomial(mono.clone()))
                .expect("monomials are within the window");
            let (w, s) = (i64::from(mono.weight()), i64::from(mono.sdeg()));
            let bad = out
                .monomials()
                .any(|r| i64::from(r.weight()) != w + dw || i64::from(r.sdeg()) != s + ds);
            if bad {
                rec = CheckRecord::new(name, vec![m, n], ctx.genus(), rec.window, false)
                    .with_counterexample(Some(format!("grading shift fails on {mono}")));
                break;
            }
        }
        rec
    })
}

fn verify_derivation(k: i64, ctx: &LieContext, exec: Exec) -> Vec<CheckRecord> {
    let f = -&ctx.make_d();
    let d = ctx.make_d();
    let pairs: Vec<(i64, i64)> = (1..k)
        .flat_map(|n| (1..=k - n).map(move |m| (n, m)))
        .collect();
    let mut out = exec
        .map(&pairs, |&(n, m)| {
            let (nu, mu) = (n as u32, m as u32);
            let fp = f.commutator(&ctx.mult_p(nu));
            let fq = f.commutator(&ctx.mult_q(nu));
            let upp = check_operators(
                "[[f,p_n],p_m]",
                vec![n, m],
                ctx,
                &fp.commutator(&ctx.mult_p(mu)),
                &ctx.mult_p(mu + nu - 1)
                    .scale(&-rational(binomial(m + n, m))),
            );
            let upq = check_operators(
                "[[f,p_n],q_m]",
                vec![n, m],
                ctx,
                &fp.commutator(&ctx.mult_q(mu)),
                &ctx.mult_q(mu + nu - 1)
                    .scale(&-rational(binomial(m + n - 1, m - 1))),
            );
            let uqq = check_operators(
                "[[f,q_n],q_m]",
                vec![n, m],
                ctx,
                &fq.commutator(&ctx.mult_q(mu)),
                &Operator::zero(),
            );
            [upp, upq, uqq]
        })
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();

    let g = ctx.genus();
    for n in 1..=k.min(i64::from(ctx.window())) {
        let nu = n as u32;
        let qn_minus = if nu == 1 {
            Poly::constant(int(g.into()))
        } else {
            Poly::q(nu - 1)
        };
        let fp = f.apply(&Poly::p(nu)).ok();
        out.push(CheckRecord::new(
            "f(p_n)=q_{n-1}",
            vec![n],
            g,
            ctx.window().into(),
            fp.as_ref() == Some(&qn_minus),
        ));
        let fq = f.apply(&Poly::q(nu)).ok();
        out.push(CheckRecord::new(
            "f(q_n)=0",
            vec![n],
            g,
            ctx.window().into(),
            fq.is_some_and(|p| p.is_zero()),
        ));
        // q_n = D(q1 p_n) + q1 q_{n-1}
        if n < i64::from(ctx.window()) {
            let lhs = d
                .apply(&(Poly::q(1) * Poly::p(nu)))
                .ok()
                .map(|x| x + Poly::q(1) * &qn_minus);
            out.push(CheckRecord::new(
                "q_n=D(q1p_n)+q1q_{n-1}",
                vec![n],
                g,
                ctx.window().into(),
                lhs == Some(Poly::q(nu)),
            ));
        }
    }
    out
}

/// Signed integer parity helper exposed for the Fourier sign `(-1)^n`.
pub fn parity_sign(n: i64) -> Rational {
    sign(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn ctx(g: u32) -> LieContext {
        LieContext::new(g, 10).unwrap()
    }

    #[test]
    fn tuples_enumerate_compositions() {
        let mut seen = Vec::new();
        for_each_tuple(2, 4, |t| seen.push(t.to_vec()));
        assert_eq!(seen.len(), 6); // 1+1,1+2,1+3,2+1,2+2,3+1
        let mut count = 0;
        for_each_tuple(0, 4, |t| {
            assert!(t.is_empty());
            count += 1;
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn d_on_p1_pg_gives_pg_relation() {
        for g in 2..=6 {
            let c = ctx(g);
            let out = c.make_d().apply(&(Poly::p(1) * Poly::p(g))).unwrap();
            assert_eq!(out, Poly::p(g) - Poly::p(1) * Poly::q(g - 1), "g={g}");
        }
    }

    #[test]
    fn d_on_q1_pn() {
        let c = ctx(3);
        let d = c.make_d();
        for n in 2..=6 {
            let out = d.apply(&(Poly::q(1) * Poly::p(n))).unwrap();
            assert_eq!(out, Poly::q(n) - Poly::q(1) * Poly::q(n - 1));
        }
    }

    #[test]
    fn d_kills_pure_q() {
        let d = ctx(4).make_d();
        assert!(d.apply(&Poly::q(1).pow(3)).unwrap().is_zero());
    }

    #[test]
    fn d_on_powers_of_p1() {
        for g in [2u32, 3, 5] {
            let d = ctx(g).make_d();
            for k in 1..=6u32 {
                let out = d.apply(&Poly::p(1).pow(k)).unwrap();
                let kk = i64::from(k);
                let expected = Poly::p(1)
                    .pow(k - 1)
                    .scale(&int(kk * (kk - 1 - i64::from(g))));
                assert_eq!(out, expected, "g={g} k={k}");
            }
        }
    }

    #[test]
    fn x0n_is_multiplication() {
        let c = ctx(3);
        let x03 = c.make_x(0, 3);
        assert!(x03
            .op_equal(&Operator::multiplication(&Poly::p(2)).scale(&int(6)), 10)
            .unwrap());
        assert!(c.make_x(1, 0).is_zero());
        assert!(c.make_x(0, 1).is_zero());
        assert!(c.make_x(-1, 3).is_zero());
    }

    #[test]
    fn x20_is_twice_d() {
        for g in [2, 3, 7] {
            let c = ctx(g);
            assert!(c
                .make_x(2, 0)
                .op_equal(&c.make_d().scale(&int(2)), 10)
                .unwrap());
        }
    }

    #[test]
    fn x11_on_p2() {
        for g in [2u32, 3, 5] {
            let c = ctx(g);
            let out = c.make_x(1, 1).apply(&Poly::p(2)).unwrap();
            assert_eq!(out, Poly::p(2).scale(&int(i64::from(g) - 3)));
        }
    }

    #[test]
    fn y_constructors() {
        let c = ctx(3);
        assert!(c
            .make_y(0, 2)
            .op_equal(&Operator::multiplication(&Poly::q(2)).scale(&int(2)), 10)
            .unwrap());
        assert!(c
            .make_y(0, 0)
            .op_equal(&Operator::scalar(int(3)), 10)
            .unwrap());
        let y10 = c.make_y(1, 0);
        for i in 1..=8 {
            assert_eq!(y10.apply(&Poly::p(i)).unwrap(), -Poly::q(i));
        }
        let br = c.make_y(1, 2).commutator(&c.make_y(2, 1));
        assert!(br.op_equal(&Operator::zero(), br.window()).unwrap());
        assert!(c.make_y(-1, 0).is_zero());
    }

    #[test]
    fn tilde_x_constructors() {
        let c = ctx(4);
        for n in 0..5 {
            assert_eq!(c.make_tilde_x(0, n), c.make_x(0, n));
        }
        let expected = &-&c.make_h() + &Operator::scalar(int(4));
        assert!(c.make_tilde_x(1, 1).op_equal(&expected, 10).unwrap());
    }

    #[test]
    fn x02_x20_bracket() {
        let c = LieContext::new(3, 8).unwrap();
        let x02 = c.make_x(0, 2);
        let x20 = c.make_x(2, 0);
        let x11 = c.make_x(1, 1);
        let lhs = x02.commutator(&x20);
        assert!(lhs.op_equal(&x11.scale(&int(4)), lhs.window()).unwrap());
        let lhs = x20.commutator(&x02);
        assert!(lhs.op_equal(&x11.scale(&int(-4)), lhs.window()).unwrap());
    }

    #[test]
    fn x12_x21_bracket() {
        let c = ctx(3);
        let lhs = c.make_x(1, 2).commutator(&c.make_x(2, 1));
        let rhs = c.make_x(2, 2).scale(&int(3));
        assert!(lhs.op_equal(&rhs, lhs.window().min(rhs.window())).unwrap());
    }

    #[test]
    fn sl2_relations() {
        for g in [2, 3, 5] {
            let report = verify_bracket(BracketKind::Sl2, 4, &ctx(g), Exec::Sequential);
            assert!(report.all_passed(), "{:?}", report.first_failure());
        }
        let c = ctx(4);
        let h = c.make_h();
        assert_eq!(h.apply(&Poly::p(1)).unwrap(), Poly::p(1).scale(&int(2 - 4)));
    }

    #[test]
    fn derivation_identities_small() {
        let report = verify_bracket(BracketKind::Derivation, 5, &ctx(3), Exec::Sequential);
        assert!(report.all_passed(), "{:?}", report.first_failure());
    }

    #[test]
    fn shifts_are_uniform() {
        let c = ctx(3);
        for m in 0..5 {
            for n in 0..5 {
                let x = c.make_x(m, n);
                if !x.is_zero() {
                    assert_eq!(x.uniform_shift(), Some(n - 1), "X({m},{n})");
                }
                assert_eq!(c.make_y(m, n).uniform_shift(), Some(n), "Y({m},{n})");
            }
        }
    }

    #[test]
    fn failing_check_carries_difference() {
        let c = ctx(2);
        let rec = check_operators(
            "bogus",
            vec![],
            &c,
            &c.make_d(),
            &c.make_d().scale(&rat(1, 2)),
        );
        assert!(!rec.passed());
        assert!(rec.counterexample.unwrap().contains("d(p"));
    }

    #[test]
    fn invalid_context() {
        assert_eq!(LieContext::new(1, 5), Err(LieError::InvalidGenus(1)));
        assert_eq!(LieContext::new(3, 0), Err(LieError::InvalidWindow));
    }
}
