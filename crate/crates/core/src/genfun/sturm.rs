use num_traits::Signed;

use super::Polynomial;
use crate::error::{Error, Result};

/// Sturm chain `s_0 = p, s_1 = p', s_{i+1} = -rem(s_{i-1}, s_i)`.
pub fn sturm_sequence(p: &Polynomial) -> Vec<Polynomial> {
    let mut chain = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d);
    loop {
        let n = chain.len();
        let r = chain[n - 2].div_rem(&chain[n - 1]).1;
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn lead_sign(p: &Polynomial) -> i8 {
    match p.lead() {
        Some(l) if l.is_positive() => 1,
        Some(_) => -1,
        None => 0,
    }
}

/// Number of distinct real roots, from the Sturm chain of the squarefree part.
pub fn real_root_count(poly: &Polynomial) -> Result<usize> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = poly.gcd(&poly.derivative());
    let squarefree = if g.degree().unwrap_or(0) > 0 { poly.div_rem(&g).0 } else { poly.clone() };
    let chain = sturm_sequence(&squarefree);
    let at_pos_inf = variations(chain.iter().map(lead_sign));
    let at_neg_inf = variations(chain.iter().map(|q| {
        let s = lead_sign(q);
        if q.degree().unwrap_or(0) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    Ok(at_neg_inf - at_pos_inf)
}
