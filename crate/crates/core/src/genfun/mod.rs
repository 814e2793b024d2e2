//! Rational generating functions of twisted coefficient sequences.
//!
//! The local series `H_n(X) = sum_m a(t p^{2m} n^2) / chi(p^m n) X^m` is the
//! rational function
//!
//! ```text
//!            lead (1 - chi_1(p) p^{k-1} X)
//! H_n(X) = ---------------------------------
//!            1 - tau X + p^{2k-1} X^2
//! ```
//!
//! and its even/odd parts `S_0`, `S_1` share the denominator
//! `(1 - tau X + p^{2k-1} X^2)(1 + tau X + p^{2k-1} X^2)`. Identities between
//! these are checked by cross-multiplying into polynomial equations.

mod poly;
mod sturm;

pub use poly::Polynomial;
pub use sturm::{real_root_count, sturm_sequence};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{rat, rat_pow, Rational};
use crate::error::{Error, Result};
use crate::hecke::HeckeLocalData;

/// Reduced quotient `num / den` with `den(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalGF {
    num: Polynomial,
    den: Polynomial,
}

impl RationalGF {
    /// Cancels `gcd(num, den)` and scales so that `den(0) = 1`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::NotExpandable);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        } else {
            (num, den)
        };
        let c0 = den.coeff(0);
        if c0.is_zero() {
            return Err(Error::NotExpandable);
        }
        let inv = c0.recip();
        Ok(RationalGF { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// Value of the power series at `X = 0`.
    pub fn constant_term(&self) -> Rational {
        self.num.coeff(0)
    }

    /// Exact equality of rational functions by cross-multiplication.
    pub fn cross_eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        let den = &self.den * &other.den;
        RationalGF::new(num, den).expect("product of expandable denominators is expandable")
    }

    pub fn expand(&self, terms: usize) -> Vec<Rational> {
        expand_quotient(&self.num, &self.den, terms)
    }
}

/// First `terms + 1` coefficients of `num / den`; `den(0)` must be nonzero.
///
/// Works over the integers: with `N = L num`, `D = L den` integral, the scaled
/// values `c_m = out_m D_0^{m+1}` satisfy
/// `c_m = N_m D_0^m - sum_i D_i c_{m-i} D_0^{i-1}`.
fn expand_quotient(num: &Polynomial, den: &Polynomial, terms: usize) -> Vec<Rational> {
    let lcm = num
        .coeffs()
        .iter()
        .chain(den.coeffs())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let integral = |p: &Polynomial| -> Vec<BigInt> {
        p.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect()
    };
    let (n, d) = (integral(num), integral(den));
    let d0 = d[0].clone();
    let mut d0_pows = vec![BigInt::one()];
    for _ in 0..=terms {
        let next = d0_pows.last().unwrap() * &d0;
        d0_pows.push(next);
    }
    let mut scaled: Vec<BigInt> = Vec::with_capacity(terms + 1);
    for m in 0..=terms {
        let mut acc = match n.get(m) {
            Some(c) if !c.is_zero() => c * &d0_pows[m],
            _ => BigInt::zero(),
        };
        for (i, di) in d.iter().enumerate().skip(1).take(m) {
            if !di.is_zero() {
                acc -= di * &scaled[m - i] * &d0_pows[i - 1];
            }
        }
        scaled.push(acc);
    }
    scaled
        .into_iter()
        .enumerate()
        .map(|(m, c)| Rational::new(c, d0_pows[m + 1].clone()))
        .collect()
}

/// Power-series coefficients `c_0..=c_M` of `gf`.
pub fn expand(gf: &RationalGF, terms: usize) -> Vec<Rational> {
    gf.expand(terms)
}

/// `1 - trace X + p^{2k-1} X^2`.
pub fn local_denominator(trace: &Rational, p: u64, k: u32) -> Polynomial {
    Polynomial::new(vec![rat(1), -trace.clone(), rat_pow(p, 2 * k - 1)])
}

/// `lead (1 - chi1_p p^{k-1} X) / (1 - trace X + p^{2k-1} X^2)`.
pub fn h_n_closed(lead: &Rational, trace: &Rational, chi1_p: i8, p: u64, k: u32) -> RationalGF {
    let c = rat(chi1_p as i64) * rat_pow(p, k - 1);
    let num = Polynomial::new(vec![lead.clone(), -(lead * c)]);
    RationalGF::new(num, local_denominator(trace, p, k)).expect("denominator has constant term 1")
}

/// `(1 - trace X + n X^2)(1 + trace X + n X^2)`, the common denominator of the
/// even and odd parts before any cancellation.
pub fn split_denominator(trace: &Rational, p: u64, k: u32) -> Polynomial {
    &local_denominator(trace, p, k) * &local_denominator(&-trace, p, k)
}

/// Even part `S_0` and odd part `S_1` of `H_1`, from their closed forms:
///
/// ```text
/// S_1 = X (b_1 - a_t chi_1(p) p^{3k-2} X^2) / D
/// S_0 = a_t (1 + (p^{2k-1} - tau chi_1(p) p^{k-1}) X^2) / D
/// ```
///
/// with `b_1 = a(t p^2) / chi(p)` and `D` the split denominator.
pub fn s_split_closed(
    a_t: &Rational,
    a_tp2_twisted: &Rational,
    trace: &Rational,
    chi1_p: i8,
    p: u64,
    k: u32,
) -> (RationalGF, RationalGF) {
    let chi1 = rat(chi1_p as i64);
    let den = split_denominator(trace, p, k);
    let s1_num = Polynomial::new(vec![
        Rational::zero(),
        a_tp2_twisted.clone(),
        Rational::zero(),
        -(a_t * &chi1 * rat_pow(p, 3 * k - 2)),
    ]);
    let x2 = rat_pow(p, 2 * k - 1) - trace * &chi1 * rat_pow(p, k - 1);
    let s0_num = Polynomial::new(vec![a_t.clone(), Rational::zero(), a_t * x2]);
    (
        RationalGF::new(s0_num, den.clone()).expect("split denominator has constant term 1"),
        RationalGF::new(s1_num, den).expect("split denominator has constant term 1"),
    )
}

/// `S_0.num S_1.den H.den + S_1.num S_0.den H.den - H.num S_0.den S_1.den`,
/// the zero polynomial exactly when `S_0 + S_1 = H`.
pub fn split_identity_residual(s0: &RationalGF, s1: &RationalGF, h: &RationalGF) -> Polynomial {
    let lhs = &(&(&s0.num * &s1.den) + &(&s1.num * &s0.den)) * &h.den;
    let rhs = &(&h.num * &s0.den) * &s1.den;
    &lhs - &rhs
}

/// Lucas sequence `u_0 = 0, u_1 = 1, u_{j+1} = trace u_j - norm u_{j-1}` up to `u_len-1`.
pub fn lucas_u(trace: &Rational, norm: &Rational, len: usize) -> Vec<Rational> {
    let mut u = vec![Rational::zero(), Rational::one()];
    while u.len() < len {
        let j = u.len();
        let next = trace * &u[j - 1] - norm * &u[j - 2];
        u.push(next);
    }
    u.truncate(len);
    u
}

/// The polynomial
/// `(beta alpha^m - alpha beta^m) X^m + (beta^m - alpha^m) X^{m-1} + (alpha - beta)`
/// divided by `alpha - beta`, i.e.
/// `Q(X) = norm u_{m-1} X^m - u_m X^{m-1} + 1`. Its real zeros are those of the
/// original polynomial whenever `alpha != beta`.
pub fn remark_polynomial(local: &HeckeLocalData, m_p: usize) -> Polynomial {
    assert!(m_p >= 1, "m_p must be at least 1");
    let u = lucas_u(&local.trace, &local.norm, m_p + 1);
    let mut coeffs = vec![Rational::zero(); m_p + 1];
    coeffs[0] += Rational::one();
    coeffs[m_p - 1] -= &u[m_p];
    coeffs[m_p] += &local.norm * &u[m_p - 1];
    Polynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{primes_up_to, rat_frac};
    use crate::hecke::{satake_data, RootKind};
    use proptest::prelude::*;

    /// Direct recurrence oracle, written independently of the closed forms.
    fn recurrence(a_t: &Rational, tau: &Rational, chi1_p: i8, p: u64, k: u32, m: usize) -> Vec<Rational> {
        let norm = rat_pow(p, 2 * k - 1);
        let mut b = vec![a_t.clone()];
        b.push((tau - rat(chi1_p as i64) * rat_pow(p, k - 1)) * a_t);
        while b.len() <= m {
            let j = b.len();
            let next = tau * &b[j - 1] - &norm * &b[j - 2];
            b.push(next);
        }
        b.truncate(m + 1);
        b
    }

    #[test]
    fn geometric_series() {
        let gf = RationalGF::new(Polynomial::from_integers([1]), Polynomial::from_integers([1, -1])).unwrap();
        assert_eq!(expand(&gf, 3), vec![rat(1); 4]);
    }

    #[test]
    fn partial_fraction_collapse() {
        let den = &Polynomial::from_integers([1, -4]) * &Polynomial::from_integers([1, -2]);
        let gf = RationalGF::new(Polynomial::from_integers([1, -2]), den).unwrap();
        assert_eq!(gf.den(), &Polynomial::from_integers([1, -4]));
        assert_eq!(expand(&gf, 3), vec![rat(1), rat(4), rat(16), rat(64)]);
    }

    #[test]
    fn not_expandable() {
        assert_eq!(
            RationalGF::new(Polynomial::from_integers([1]), Polynomial::from_integers([0, 1])),
            Err(Error::NotExpandable)
        );
    }

    #[test]
    fn h_closed_examples() {
        let gf = h_n_closed(&rat_frac(3, 7), &rat(5), 1, 3, 2);
        assert_eq!(gf.constant_term(), rat_frac(3, 7));
        let gf = h_n_closed(&rat(1), &rat(0), 0, 2, 2);
        assert_eq!(gf.num(), &Polynomial::from_integers([1]));
        assert_eq!(gf.den(), &Polynomial::from_integers([1, 0, 8]));
    }

    #[test]
    fn split_constant_terms() {
        let (s0, s1) = s_split_closed(&rat(2), &rat(11), &rat(7), -1, 5, 3);
        assert_eq!(s0.constant_term(), rat(2));
        assert_eq!(s1.constant_term(), rat(0));
    }

    #[test]
    fn remark_small_cases() {
        let local = satake_data(&rat(9), 3, 2);
        assert!(remark_polynomial(&local, 1).is_zero());
        assert_eq!(
            remark_polynomial(&local, 2),
            Polynomial::new(vec![rat(1), -rat(9), rat(27)])
        );
    }

    #[test]
    fn remark_matches_symbolic_expansion() {
        // With rational alpha, beta the original polynomial is exact; compare
        // it to (alpha - beta) Q(X).
        let (alpha, beta) = (rat(4), rat(2));
        let local = satake_data(&(&alpha + &beta), 2, 2);
        assert_eq!(local.norm, &alpha * &beta);
        for m in 1..7usize {
            let pow = |x: &Rational, e: usize| (0..e).fold(rat(1), |acc, _| acc * x);
            let mut coeffs = vec![rat(0); m + 1];
            coeffs[m] += &beta * pow(&alpha, m) - &alpha * pow(&beta, m);
            coeffs[m - 1] += pow(&beta, m) - pow(&alpha, m);
            coeffs[0] += &alpha - &beta;
            let original = Polynomial::new(coeffs);
            let q = remark_polynomial(&local, m);
            assert_eq!(original, q.scale(&(&alpha - &beta)), "m={m}");
            if m >= 2 {
                assert_eq!(q.coeff(0), rat(1));
            }
        }
    }

    fn draw() -> impl Strategy<Value = (Rational, Rational, i8, u64, u32)> {
        (2u32..=8, 0usize..15, -9i64..=9, 1i64..=5, -3i64..=3, 1i64..=4, -1i8..=1).prop_map(
            |(k, pi, a_n, a_d, t_n, t_d, chi)| {
                let p = primes_up_to(50)[pi];
                let bound = rat_pow(p, k - 1);
                let trace = bound * rat_frac(t_n, t_d);
                let a_t = if a_n == 0 { rat(1) } else { rat_frac(a_n, a_d) };
                (a_t, trace, chi, p, k)
            },
        )
    }

    proptest! {
        #[test]
        fn closed_form_matches_recurrence((a_t, tau, chi, p, k) in draw()) {
            let gf = h_n_closed(&a_t, &tau, chi, p, k);
            let series = expand(&gf, 40);
            prop_assert_eq!(&series, &recurrence(&a_t, &tau, chi, p, k, 40));
            let norm = rat_pow(p, 2 * k - 1);
            prop_assert_eq!(&tau * &series[0], &series[1] + rat(chi as i64) * rat_pow(p, k - 1) * &series[0]);
            for m in 1..40 {
                prop_assert_eq!(&tau * &series[m], &series[m + 1] + &norm * &series[m - 1]);
            }
        }

        #[test]
        fn split_identities_hold((a_t, tau, chi, p, k) in draw()) {
            let b = recurrence(&a_t, &tau, chi, p, k, 30);
            let (s0, s1) = s_split_closed(&a_t, &b[1], &tau, chi, p, k);
            let h = h_n_closed(&a_t, &tau, chi, p, k);
            prop_assert!(split_identity_residual(&s0, &s1, &h).is_zero());
            prop_assert!(s0.add(&s1).cross_eq(&h));
            let (e0, e1) = (expand(&s0, 30), expand(&s1, 30));
            for m in 0..=30 {
                let (even, odd) = if m % 2 == 0 { (b[m].clone(), rat(0)) } else { (rat(0), b[m].clone()) };
                prop_assert_eq!(&e0[m], &even);
                prop_assert_eq!(&e1[m], &odd);
            }
        }

        #[test]
        fn split_denominator_is_product(tau in (-50i64..50), pi in 0usize..15, k in 2u32..6) {
            let p = primes_up_to(50)[pi];
            let tau = rat(tau);
            let d = split_denominator(&tau, p, k);
            prop_assert_eq!(d, &local_denominator(&tau, p, k) * &local_denominator(&-tau.clone(), p, k));
        }

        #[test]
        fn remark_constant_term(tau in (-50i64..50), pi in 0usize..15, k in 2u32..6, m in 2usize..10) {
            let p = primes_up_to(50)[pi];
            let q = remark_polynomial(&satake_data(&rat(tau), p, k), m);
            prop_assert_eq!(q.coeff(0), rat(1));
        }

        #[test]
        fn complex_pair_quadratic_has_no_real_root(tau in (-1000i64..1000), pi in 0usize..15, k in 2u32..6) {
            let p = primes_up_to(50)[pi];
            let local = satake_data(&rat(tau), p, k);
            prop_assume!(local.root_kind == RootKind::ComplexPair);
            prop_assert_eq!(real_root_count(&remark_polynomial(&local, 2)).unwrap(), 0);
        }
    }
}
