use rug::{Integer, Rational};

use super::poly::RationalPolynomial;
use crate::error::{Error, Result};

/// Rows p(k, x) defined by p(0, x) = 1 and p(k, x) = p'(k-1, x) - 2x p(k-1, x),
/// so that d^k/dx^k exp(-x^2) = p(k, x) exp(-x^2).
#[derive(Clone, Debug)]
pub struct HermiteTable {
    rows: Vec<RationalPolynomial>,
}

impl HermiteTable {
    pub fn new(max_order: usize) -> Self {
        let two_x = RationalPolynomial::monomial(1, Rational::from(2));
        let mut rows = vec![RationalPolynomial::one()];
        for k in 1..=max_order {
            let prev = &rows[k - 1];
            let next = &prev.derivative() - &(&two_x * prev);
            rows.push(next);
        }
        HermiteTable { rows }
    }

    pub fn max_order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, k: usize) -> &RationalPolynomial {
        &self.rows[k]
    }

    pub fn rows(&self) -> &[RationalPolynomial] {
        &self.rows
    }

    /// a_{k,i}: coefficient of x^i in p(k, x).
    pub fn a(&self, k: usize, i: usize) -> Rational {
        self.rows[k].coeff(i)
    }
}

pub fn hermite_table(max_order: usize) -> HermiteTable {
    HermiteTable::new(max_order)
}

/// c_{n,k} = n!/[(n-k)!(k+1)!] * (2n+1-k)!/[2 (2n+1)!]
pub fn spline_coeff(n: usize, k: usize) -> Result<Rational> {
    if k > n {
        return Err(Error::Domain(format!("spline coefficient needs k <= n, got n={n}, k={k}")));
    }
    let f = |m: usize| Integer::from(Integer::factorial(m as u32));
    let num = f(n) * f(2 * n + 1 - k);
    let den = f(n - k) * f(k + 1) * f(2 * n + 1) * 2u32;
    Ok(Rational::from((num, den)))
}

/// All coefficients c_{n,0..=n}.
pub fn spline_coeffs(n: usize) -> Vec<Rational> {
    (0..=n).map(|k| spline_coeff(n, k).expect("k <= n")).collect()
}
