use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};

/// Dense polynomial with exact rational coefficients; index = power of x.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^power`
    pub fn monomial(power: usize, c: Rational) -> Self {
        let mut v = vec![Rational::new(); power + 1];
        v[power] = c;
        Self::new(v)
    }

    /// Builds from `(numerator, denominator)` pairs, lowest power first.
    pub fn from_fracs(fracs: &[(i64, i64)]) -> Self {
        Self::new(fracs.iter().map(|&(n, d)| Rational::from((n, d))).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::new(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, a)| Rational::from(a * i as u64)).collect())
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::new()];
        for (i, a) in self.coeffs.iter().enumerate() {
            v.push(Rational::from(a / (i as u64 + 1)));
        }
        Self::new(v)
    }

    /// p(c x)
    pub fn compose_scaled(&self, c: &Rational) -> Self {
        let mut pow = Rational::from(1);
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(Rational::from(a * &pow));
            pow *= c;
        }
        Self::new(v)
    }

    /// p(x + c)
    pub fn compose_shift(&self, c: &Rational) -> Self {
        let lin = Self::new(vec![c.clone(), Rational::from(1)]);
        let mut out = Self::zero();
        for a in self.coeffs.iter().rev() {
            out = &(&out * &lin) + &Self::constant(a.clone());
        }
        out
    }

    /// Drops every power above `max_power`.
    pub fn truncate(&self, max_power: usize) -> Self {
        Self::new(self.coeffs.iter().take(max_power + 1).cloned().collect())
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| *c == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|c| *c == 0)
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for a in self.coeffs.iter().rev() {
            acc *= x;
            acc += a;
        }
        acc
    }

    /// Horner evaluation at the precision of `x`.
    pub fn eval(&self, x: &Float) -> Float {
        let prec = x.prec();
        let mut acc = Float::new(prec);
        for a in self.coeffs.iter().rev() {
            acc *= x;
            acc += a;
        }
        acc
    }

    pub fn to_floats(&self, prec: u32) -> Vec<Float> {
        self.coeffs.iter().map(|a| Float::with_val(prec, a)).collect()
    }

    /// Renders with `symbol` as the variable, highest power first omitted;
    /// e.g. `1 - x^2/30`.
    pub fn render(&self, symbol: &str) -> String {
        let mut out = String::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            let neg = *a < 0;
            let mag = Rational::from(a.abs_ref());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let num = mag.numer().clone();
            let den = mag.denom().clone();
            let mono = match i {
                0 => String::new(),
                1 => symbol.to_string(),
                _ => format!("{symbol}^{i}"),
            };
            if i == 0 {
                out.push_str(&num.to_string());
            } else if num != 1 {
                out.push_str(&format!("{num} {mono}"));
            } else {
                out.push_str(&mono);
            }
            if den != 1 {
                out.push_str(&format!("/{den}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl<'a> Add<&'a RationalPolynomial> for &'a RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => Rational::from(a + b),
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl<'a> Sub<&'a RationalPolynomial> for &'a RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial { coeffs: self.coeffs.iter().map(|a| Rational::from(-a)).collect() }
    }
}

impl<'a> Mul<&'a RationalPolynomial> for &'a RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut v = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += Rational::from(a * b);
            }
        }
        RationalPolynomial::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(fr: &[(i64, i64)]) -> RationalPolynomial {
        RationalPolynomial::from_fracs(fr)
    }

    #[test]
    fn trims_and_degree() {
        assert_eq!(p(&[(1, 1), (0, 1), (0, 1)]).degree(), 0);
        assert_eq!(RationalPolynomial::zero().degree(), -1);
        assert_eq!(p(&[(0, 1)]).degree(), -1);
    }

    #[test]
    fn arithmetic() {
        let a = p(&[(1, 1), (1, 1)]);
        let b = p(&[(-1, 1), (1, 1)]);
        assert_eq!(&a * &b, p(&[(-1, 1), (0, 1), (1, 1)]));
        assert_eq!(&a + &b, p(&[(0, 1), (2, 1)]));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn calculus() {
        let a = p(&[(1, 1), (0, 1), (3, 1)]);
        assert_eq!(a.derivative(), p(&[(0, 1), (6, 1)]));
        assert_eq!(a.antiderivative().derivative(), a);
        assert_eq!(a.compose_scaled(&Rational::from((1, 2))), p(&[(1, 1), (0, 1), (3, 4)]));
        assert_eq!(a.compose_shift(&Rational::from(1)), p(&[(4, 1), (6, 1), (3, 1)]));
    }

    #[test]
    fn render_fractions() {
        assert_eq!(p(&[(1, 1), (0, 1), (-1, 30)]).to_string(), "1 - x^2/30");
        assert_eq!(p(&[(0, 1), (-2, 1)]).to_string(), "-2 x");
    }
}
