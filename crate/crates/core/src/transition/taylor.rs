use rug::{Integer, Rational};

use crate::approx::{Approximant, Evaluator, PolyExpEvaluator};
use crate::error::{Error, Result};
use crate::exact::{PolyExpSum, RationalPolynomial};
use crate::oracle::PrecisionContext;

/// T_n = (2/sqrt(pi)) sum_{k <= (n-1)/2} (-1)^k x^{2k+1}/(k! (2k+1)), n odd.
#[derive(Clone, Debug)]
pub struct TaylorApproximant {
    pub order: usize,
    /// sqrt(pi) T_n
    pub poly: RationalPolynomial,
}

pub fn taylor(n: usize) -> Result<TaylorApproximant> {
    if n % 2 == 0 {
        return Err(Error::Domain(format!("Taylor order must be odd, got {n}")));
    }
    let mut v = vec![Rational::new(); n + 1];
    let mut fact = Integer::from(1);
    for k in 0..=(n - 1) / 2 {
        if k > 0 {
            fact *= k as u32;
        }
        let mut c = Rational::from((Integer::from(2), Integer::from(&fact * (2 * k as u32 + 1))));
        if k % 2 == 1 {
            c = -c;
        }
        v[2 * k + 1] = c;
    }
    Ok(TaylorApproximant { order: n, poly: RationalPolynomial::new(v) })
}

impl TaylorApproximant {
    pub fn form(&self) -> PolyExpSum {
        PolyExpSum::polynomial(self.poly.clone())
    }
}

impl Approximant for TaylorApproximant {
    fn label(&self) -> String {
        format!("taylor n={}", self.order)
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        Ok(Box::new(PolyExpEvaluator::new(&self.form(), ctx)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients() {
        let t1 = taylor(1).unwrap();
        assert_eq!(t1.poly, RationalPolynomial::monomial(1, Rational::from(2)));
        let t5 = taylor(5).unwrap();
        assert_eq!(t5.poly, RationalPolynomial::from_fracs(&[(0, 1), (2, 1), (0, 1), (-2, 3), (0, 1), (1, 5)]));
        assert!(taylor(2).is_err());
        assert!(taylor(61).unwrap().poly.coeff(0) == 0);
    }
}
