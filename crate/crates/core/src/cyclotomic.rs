//! Exact sums of roots of unity, reduced in `Q(zeta_n) = Q[x] / Phi_n(x)`.

use crate::arith::{divisors, rat, Rational};
use crate::genfun::Polynomial;

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Polynomial {
    assert!(n >= 1);
    let mut acc = Polynomial::monomial(rat(1), n as usize);
    acc = &acc - &Polynomial::constant(rat(1));
    for d in divisors(n) {
        if d < n {
            acc = acc.div_rem(&cyclotomic_polynomial(d)).0;
        }
    }
    acc
}

/// `Q(zeta_n)` with elements represented by their reduced polynomial in `zeta`.
#[derive(Debug, Clone)]
pub struct CyclotomicField {
    n: u64,
    modulus: Polynomial,
}

impl CyclotomicField {
    pub fn new(n: u64) -> Self {
        CyclotomicField { n, modulus: cyclotomic_polynomial(n) }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        p.div_rem(&self.modulus).1
    }

    /// `sum_i c_i zeta^{e_i}`, reduced.
    pub fn sum_of_powers<I: IntoIterator<Item = (u64, Rational)>>(&self, terms: I) -> Polynomial {
        let mut dense = vec![rat(0); self.n as usize];
        for (e, c) in terms {
            dense[(e % self.n) as usize] += c;
        }
        self.reduce(&Polynomial::new(dense))
    }

    /// The rational value of a reduced element, if it lies in `Q`.
    pub fn as_rational(&self, x: &Polynomial) -> Option<Rational> {
        match x.degree() {
            None => Some(rat(0)),
            Some(0) => Some(x.coeff(0)),
            Some(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), Polynomial::from_integers([-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), Polynomial::from_integers([1, 1]));
        assert_eq!(cyclotomic_polynomial(4), Polynomial::from_integers([1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), Polynomial::from_integers([1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), Polynomial::from_integers([1, 0, -1, 0, 1]));
    }

    #[test]
    fn full_sums_vanish() {
        for n in 2..=16u64 {
            let field = CyclotomicField::new(n);
            for k in 0..n {
                let s = field.sum_of_powers((0..n).map(|j| (j * k, rat(1))));
                let expected = if k == 0 { rat(n as i64) } else { rat(0) };
                assert_eq!(field.as_rational(&s), Some(expected), "n={n} k={k}");
            }
        }
        let field = CyclotomicField::new(5);
        assert_eq!(field.as_rational(&field.sum_of_powers([(1, rat(1))])), None);
    }
}
