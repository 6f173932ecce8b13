//! Conversion between special-divisor classes `w_1..w_g` and the
//! differences `d_k = p_k - q_k`.
//!
//! With `w_i` the elementary symmetric functions of roots `l_1..l_g` and
//! `P_k` the power sums, `d_k = -P_k / k!`. Both directions are triangular
//! and work over any commutative coefficient type supplied as [`Poly`].

use crate::factorial;
use crate::poly::{int, Poly, Rational};

fn fact(k: usize) -> Rational {
    Rational::from_integer(factorial(k as u32))
}

fn sign(i: usize) -> Rational {
    if i.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

/// Power sums from elementary symmetric functions:
/// `P_k = w_1 P_{k-1} - w_2 P_{k-2} + ... + (-1)^{k-1} k w_k`.
pub fn power_sums(w: &[Poly]) -> Vec<Poly> {
    let mut p: Vec<Poly> = Vec::with_capacity(w.len());
    for k in 1..=w.len() {
        let mut pk = w[k - 1].scale(&(sign(k - 1) * int(k as i64)));
        for i in 1..k {
            pk += &(&w[i - 1] * &p[k - i - 1]).scale(&sign(i - 1));
        }
        p.push(pk);
    }
    p
}

/// Inverse of [`power_sums`]: `k w_k = sum_{i=1}^{k} (-1)^{i-1} w_{k-i} P_i`
/// with `w_0 = 1`.
pub fn elementary_from_power_sums(p: &[Poly]) -> Vec<Poly> {
    let mut w: Vec<Poly> = Vec::with_capacity(p.len());
    for k in 1..=p.len() {
        let mut acc = p[k - 1].scale(&sign(k - 1));
        for i in 1..k {
            acc += &(&w[k - i - 1] * &p[i - 1]).scale(&sign(i - 1));
        }
        w.push(acc.scale(&Rational::new(1.into(), (k as i64).into())));
    }
    w
}

pub fn w_to_d(w: &[Poly]) -> Vec<Poly> {
    power_sums(w)
        .into_iter()
        .enumerate()
        .map(|(i, pk)| pk.scale(&(-fact(i + 1).recip())))
        .collect()
}

pub fn d_to_w(d: &[Poly]) -> Vec<Poly> {
    let p: Vec<Poly> = d
        .iter()
        .enumerate()
        .map(|(i, dk)| dk.scale(&(-fact(i + 1))))
        .collect();
    elementary_from_power_sums(&p)
}

fn constants(v: &[Rational]) -> Vec<Poly> {
    v.iter().map(|c| Poly::constant(c.clone())).collect()
}

fn to_rationals(v: Vec<Poly>) -> Vec<Rational> {
    v.into_iter()
        .map(|f| f.coeff(&crate::poly::Monomial::one()))
        .collect()
}

pub fn w_to_d_rational(w: &[Rational]) -> Vec<Rational> {
    to_rationals(w_to_d(&constants(w)))
}

pub fn d_to_w_rational(d: &[Rational]) -> Vec<Rational> {
    to_rationals(d_to_w(&constants(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn w(n: usize) -> Vec<Poly> {
        (1..=n as u32).map(Poly::p).collect()
    }

    #[test]
    fn low_degree_formulas() {
        let d = w_to_d(&w(3));
        let (w1, w2, w3) = (Poly::p(1), Poly::p(2), Poly::p(3));
        assert_eq!(d[0], -w1.clone());
        assert_eq!(d[1], w2.clone() - w1.pow(2).scale(&rat(1, 2)));
        let d3 =
            w1.pow(3).scale(&rat(-1, 6)) + (&w1 * &w2).scale(&rat(1, 2)) - w3.scale(&rat(1, 2));
        assert_eq!(d[2], d3);
    }

    #[test]
    fn single_root() {
        let t = rat(3, 2);
        let mut wv = vec![Rational::from_integer(0.into()); 6];
        wv[0] = t.clone();
        let d = w_to_d_rational(&wv);
        for (k, dk) in d.iter().enumerate() {
            let expected = -num_traits::pow(t.clone(), k + 1) / fact(k + 1);
            assert_eq!(*dk, expected);
        }
    }

    #[test]
    fn round_trip_symbolic() {
        let back = d_to_w(&w_to_d(&w(6)));
        assert_eq!(back, w(6));
        let forward = w_to_d(&d_to_w(&w(6)));
        assert_eq!(forward, w(6));
    }

    #[test]
    fn triangular() {
        let d = w_to_d(&w(5));
        for (k, dk) in d.iter().enumerate() {
            for m in dk.monomials() {
                assert!(m.pairs().iter().all(|(v, _)| v.index() as usize <= k + 1));
            }
        }
        let zero = vec![int(0); 4];
        assert_eq!(d_to_w_rational(&zero), zero);
        let d = [rat(-5, 7), int(0), int(0)];
        let wv = d_to_w_rational(&d);
        assert_eq!(wv[..2], [rat(5, 7), rat(25, 98)]);
        assert_eq!(w_to_d_rational(&wv), d);
    }
}
