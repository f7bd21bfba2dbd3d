use std::fmt;

use super::Polynomial;

/// Prints terms in descending graded-lex order; coefficients with more than
/// one power-basis summand are parenthesized so the output parses back.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let (negative, coeff) = if c.support_len() > 1 {
                (false, format!("({c})"))
            } else if c.is_negative_monomial() {
                (true, (-c).to_string())
            } else {
                (false, c.to_string())
            };
            let body = if m.is_one() {
                coeff
            } else if coeff == "1" {
                m.to_string()
            } else {
                format!("{coeff}*{m}")
            };
            match (idx == 0, negative) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::polyring::parse_polynomial;
    use crate::scalar::Conductor;

    #[test]
    fn prints_canonically() {
        let k = Conductor::new(3).unwrap();
        let p = parse_polynomial("x2 - 3/2*x1^2 + (1 + z)*x1 - 1", 2, &k).unwrap();
        assert_eq!(p.to_string(), "-3/2*x1^2 + (1 + z)*x1 + x2 - 1");
        let q = parse_polynomial("-z*x1*x2", 2, &k).unwrap();
        assert_eq!(q.to_string(), "-z*x1*x2");
    }
}
