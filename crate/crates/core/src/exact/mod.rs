//! Exact rational algebra: polynomials, the Hermite-type table, spline
//! coefficients and poly-exp sums.

mod hermite;
mod poly;
mod polyexp;

pub use hermite::{hermite_table, spline_coeff, spline_coeffs, HermiteTable};
pub use poly::RationalPolynomial;
pub use polyexp::{render_rate, CompiledPolyExp, PolyExpSum};
pub use rug::Rational;

/// Parses `"p/q"` or an integer string.
pub fn parse_rational(s: &str) -> crate::error::Result<Rational> {
    let t = s.trim();
    let r = match t.split_once('/') {
        Some((n, d)) => {
            let n: rug::Integer = n.trim().parse().map_err(|_| bad(s))?;
            let d: rug::Integer = d.trim().parse().map_err(|_| bad(s))?;
            if d == 0 {
                return Err(bad(s));
            }
            Rational::from((n, d))
        }
        None => Rational::from(t.parse::<rug::Integer>().map_err(|_| bad(s))?),
    };
    Ok(r)
}

/// `"num/den"` with the denominator always present.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn bad(s: &str) -> crate::error::Error {
    crate::error::Error::Usage(format!("not a rational: {s:?}"))
}
