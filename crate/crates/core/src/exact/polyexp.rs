use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Integer, Rational};

use super::poly::RationalPolynomial;
use crate::error::{Error, Result};

/// Sum of terms p_i(x) exp(-k_i x^2) with rational p_i and k_i >= 0.
///
/// Approximant families keep an implicit 1/sqrt(pi) outside this sum.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyExpSum {
    terms: BTreeMap<Rational, RationalPolynomial>,
}

impl PolyExpSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(rate: Rational, poly: RationalPolynomial) -> Self {
        let mut s = Self::zero();
        s.add_term(rate, poly);
        s
    }

    pub fn polynomial(poly: RationalPolynomial) -> Self {
        Self::term(Rational::new(), poly)
    }

    pub fn from_terms<I: IntoIterator<Item = (Rational, RationalPolynomial)>>(it: I) -> Self {
        let mut s = Self::zero();
        for (k, p) in it {
            s.add_term(k, p);
        }
        s
    }

    /// Adds `poly * exp(-rate x^2)`, merging with an equal rate.
    pub fn add_term(&mut self, rate: Rational, poly: RationalPolynomial) {
        assert!(rate >= 0, "decay rates are nonnegative");
        if poly.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&rate) {
            Some(old) => &old + &poly,
            None => poly,
        };
        if !merged.is_zero() {
            self.terms.insert(rate, merged);
        }
    }

    /// Terms ordered by ascending decay rate.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &RationalPolynomial)> {
        self.terms.iter()
    }

    pub fn rates(&self) -> Vec<Rational> {
        self.terms.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn poly(&self, rate: &Rational) -> Option<&RationalPolynomial> {
        self.terms.get(rate)
    }

    /// The rate-0 part, or zero.
    pub fn polynomial_part(&self) -> RationalPolynomial {
        self.terms.get(&Rational::new()).cloned().unwrap_or_default()
    }

    pub fn is_odd(&self) -> bool {
        self.terms.values().all(|p| p.is_odd())
    }

    pub fn is_even(&self) -> bool {
        self.terms.values().all(|p| p.is_even())
    }

    pub fn add(&self, other: &PolyExpSum) -> PolyExpSum {
        let mut s = self.clone();
        for (k, p) in &other.terms {
            s.add_term(k.clone(), p.clone());
        }
        s
    }

    pub fn sub(&self, other: &PolyExpSum) -> PolyExpSum {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, c: &Rational) -> PolyExpSum {
        Self::from_terms(self.terms.iter().map(|(k, p)| (k.clone(), p.scale(c))))
    }

    pub fn multiply_by_poly(&self, q: &RationalPolynomial) -> PolyExpSum {
        Self::from_terms(self.terms.iter().map(|(k, p)| (k.clone(), p * q)))
    }

    /// Multiplies every term by exp(-extra x^2).
    pub fn shift_rates(&self, extra: &Rational) -> PolyExpSum {
        Self::from_terms(self.terms.iter().map(|(k, p)| (Rational::from(k + extra), p.clone())))
    }

    /// Product of two sums; rates add.
    pub fn multiply(&self, other: &PolyExpSum) -> PolyExpSum {
        let mut s = Self::zero();
        for (k1, p1) in &self.terms {
            for (k2, p2) in &other.terms {
                s.add_term(Rational::from(k1 + k2), p1 * p2);
            }
        }
        s
    }

    /// Replaces x by c x: {k, p(x)} becomes {k c^2, p(c x)}.
    pub fn substitute_scaled_argument(&self, c: &Rational) -> PolyExpSum {
        let c2 = Rational::from(c * c);
        Self::from_terms(self.terms.iter().map(|(k, p)| (Rational::from(k * &c2), p.compose_scaled(c))))
    }

    /// d/dx [p exp(-k x^2)] = (p' - 2 k x p) exp(-k x^2)
    pub fn differentiate(&self) -> PolyExpSum {
        Self::from_terms(self.terms.iter().map(|(k, p)| {
            let kx2 = RationalPolynomial::monomial(1, Rational::from(k * 2u32));
            (k.clone(), &p.derivative() - &(&kx2 * p))
        }))
    }

    /// ∫_0^x coeff t^power exp(-rate t^2) dt for odd `power` and `rate > 0`.
    pub fn integrate_odd_term(rate: &Rational, power: usize, coeff: &Rational) -> Result<PolyExpSum> {
        if power % 2 == 0 {
            return Err(Error::Domain(format!("no closed form for an even power x^{power} against exp(-k x^2)")));
        }
        if *rate <= 0 {
            return Err(Error::Domain("integrate_odd_term needs a positive decay rate".into()));
        }
        // (1/2)[ j!/c^{j+1} - exp(-c x^2) sum_i j!/(j-i)! x^{2(j-i)}/c^{i+1} ]
        let j = (power - 1) / 2;
        let fj = Integer::from(Integer::factorial(j as u32));
        let half = Rational::from((1, 2)) * coeff.clone();
        let mut c_pow = rate.clone();
        let mut poly = vec![Rational::new(); 2 * j + 1];
        let mut falling = Integer::from(1);
        for i in 0..=j {
            if i > 0 {
                falling *= (j - i + 1) as u32;
                c_pow *= rate;
            }
            let v = Rational::from((falling.clone(), Integer::from(1))) / c_pow.clone();
            poly[2 * (j - i)] = -Rational::from(&half * &v);
        }
        let constant = Rational::from(&half * &(Rational::from(fj) / c_pow));
        let mut s = PolyExpSum::term(rate.clone(), RationalPolynomial::new(poly));
        s.add_term(Rational::new(), RationalPolynomial::constant(constant));
        Ok(s)
    }

    /// ∫_0^x of the whole sum. Terms with a positive rate must be odd.
    pub fn integrate(&self) -> Result<PolyExpSum> {
        let mut s = Self::zero();
        for (k, p) in &self.terms {
            if *k == 0 {
                s.add_term(Rational::new(), p.antiderivative());
                continue;
            }
            for (power, c) in p.coeffs().iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                s = s.add(&Self::integrate_odd_term(k, power, c)?);
            }
        }
        Ok(s)
    }

    /// Maclaurin polynomial through x^max_degree, expanding each
    /// exp(-k x^2) as sum_j (-k)^j x^{2j}/j!.
    pub fn taylor(&self, max_degree: usize) -> RationalPolynomial {
        let mut out = RationalPolynomial::zero();
        for (k, p) in &self.terms {
            let mut series = vec![Rational::new(); max_degree + 1];
            let mut c = Rational::from(1);
            let mut j = 0usize;
            while 2 * j <= max_degree {
                series[2 * j] = c.clone();
                j += 1;
                c = -Rational::from(&c * k) / j as u64;
                if *k == 0 {
                    break;
                }
            }
            let prod = (p * &RationalPolynomial::new(series)).truncate(max_degree);
            out = &out + &prod;
        }
        out
    }

    pub fn eval_rational_at_zero(&self) -> Rational {
        let mut acc = Rational::new();
        for p in self.terms.values() {
            acc += p.coeff(0);
        }
        acc
    }

    /// Evaluates the stored sum (no 1/sqrt(pi)) at the precision of `x`.
    pub fn eval(&self, x: &Float) -> Float {
        self.compile(x.prec()).eval(x)
    }

    pub fn compile(&self, prec: u32) -> CompiledPolyExp {
        CompiledPolyExp {
            prec,
            terms: self.terms.iter().map(|(k, p)| (Float::with_val(prec, k), k.clone(), p.to_floats(prec))).collect(),
        }
    }

    /// Human-readable form with exp(-k x^2) factors, e.g.
    /// `(x + x^3/3) + (x) e^(-x^2)`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (k, p) in &self.terms {
            let body = format!("({})", p.render("x"));
            if *k == 0 {
                parts.push(body);
            } else {
                parts.push(format!("{body} e^(-{}x^2)", render_rate(k)));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// The `k ` in `e^(-k x^2)`; empty for k = 1.
pub fn render_rate(k: &Rational) -> String {
    if *k == 1 {
        String::new()
    } else if *k.denom() == 1 {
        format!("{} ", k.numer())
    } else {
        format!("{}/{} ", k.numer(), k.denom())
    }
}

impl fmt::Display for PolyExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Float coefficients of a `PolyExpSum` prepared for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPolyExp {
    prec: u32,
    terms: Vec<(Float, Rational, Vec<Float>)>,
}

impl CompiledPolyExp {
    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// One Horner pass per polynomial and one exponential per decay rate.
    pub fn eval(&self, x: &Float) -> Float {
        let x = Float::with_val(self.prec, x);
        let x2 = Float::with_val(self.prec, x.square_ref());
        let mut total = Float::new(self.prec);
        for (k, kq, coeffs) in &self.terms {
            let mut acc = Float::new(self.prec);
            for a in coeffs.iter().rev() {
                acc *= &x;
                acc += a;
            }
            if *kq != 0 {
                let e = (-Float::with_val(self.prec, k * &x2)).exp();
                acc *= e;
            }
            total += acc;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(fr: &[(i64, i64)]) -> RationalPolynomial {
        RationalPolynomial::from_fracs(fr)
    }
    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn differentiate_product_rule() {
        let s = PolyExpSum::term(r(1, 1), p(&[(0, 1), (1, 1)]));
        let d = s.differentiate();
        assert_eq!(d, PolyExpSum::term(r(1, 1), p(&[(1, 1), (0, 1), (-2, 1)])));
    }

    #[test]
    fn integrate_odd_monomial() {
        let s = PolyExpSum::integrate_odd_term(&r(1, 1), 1, &r(1, 1)).unwrap();
        let mut expect = PolyExpSum::term(r(1, 1), p(&[(-1, 2)]));
        expect.add_term(r(0, 1), p(&[(1, 2)]));
        assert_eq!(s, expect);
        assert!(PolyExpSum::integrate_odd_term(&r(1, 1), 2, &r(1, 1)).is_err());
        assert!(PolyExpSum::integrate_odd_term(&r(0, 1), 1, &r(1, 1)).is_err());
    }

    #[test]
    fn substitute_argument() {
        let s = PolyExpSum::term(r(1, 1), p(&[(0, 1), (1, 1)]));
        let t = s.substitute_scaled_argument(&r(1, 4));
        assert_eq!(t, PolyExpSum::term(r(1, 16), p(&[(0, 1), (1, 4)])));
    }

    #[test]
    fn differentiate_then_integrate_round_trip() {
        let mut s = PolyExpSum::term(r(3, 2), p(&[(1, 1), (0, 1), (2, 7), (0, 1), (-1, 3)]));
        s.add_term(r(1, 1), p(&[(0, 1), (0, 1), (5, 1)]));
        let back = s.differentiate().integrate().unwrap();
        let diff = back.sub(&s);
        assert_eq!(diff, PolyExpSum::polynomial(p(&[(-1, 1)])));
    }

    #[test]
    fn compiled_eval_matches_rational() {
        let mut s = PolyExpSum::polynomial(p(&[(0, 1), (1, 1)]));
        s.add_term(r(1, 1), p(&[(0, 1), (1, 1)]));
        let x = Float::with_val(128, 1);
        let v = s.eval(&x);
        let expect = 1.0 + (-1.0f64).exp();
        assert!((v.to_f64() - expect).abs() < 1e-15);
    }
}
