//! Number rendering: exact rationals verbatim, floats to 12 significant
//! digits in text and at full precision in JSON.

use hexlink::Scalar;
use num_complex::Complex;
use serde_json::{json, Value};

pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if rounded == 0.0 {
        "0".into()
    } else if !(1e-4..1e15).contains(&rounded.abs()) {
        format!("{rounded:e}")
    } else {
        rounded.to_string()
    }
}

pub fn text<T: Scalar>(v: &T) -> String {
    if T::EXACT {
        v.to_string()
    } else {
        sig12(v.to_f64())
    }
}

pub fn json<T: Scalar>(v: &T) -> Value {
    if T::EXACT {
        Value::String(v.to_string())
    } else {
        f64_json(v.to_f64())
    }
}

pub fn f64_json(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn complex_text<T: Scalar>(z: &Complex<T>) -> String {
    let re = text(&z.re);
    if z.im.is_zero() {
        return re;
    }
    let im = if z.im.abs() == T::one() { String::new() } else { text(&z.im.abs()) };
    let sign = if z.im < T::zero() { "-" } else { "+" };
    if z.re.is_zero() {
        format!("{}{im}i", if sign == "-" { "-" } else { "" })
    } else {
        format!("({re} {sign} {im}i)")
    }
}

pub fn complex_json<T: Scalar>(z: &Complex<T>) -> Value {
    json!({ "re": json(&z.re), "im": json(&z.im) })
}

/// `x^2 + a1 x + a0` with zero terms dropped.
pub fn quad_text<T: Scalar>(a1: &Complex<T>, a0: &Complex<T>) -> String {
    let mut out = String::from("x^2");
    let term = |z: &Complex<T>| {
        let s = complex_text(z);
        match s.strip_prefix('-') {
            Some(rest) => format!(" - {rest}"),
            None => format!(" + {s}"),
        }
    };
    if !(a1.re.is_zero() && a1.im.is_zero()) {
        out += &format!("{}x", term(a1));
    }
    if !(a0.re.is_zero() && a0.im.is_zero()) {
        out += &term(a0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hexlink::Rational;

    #[test]
    fn floats_round_to_twelve_digits() {
        assert_eq!(sig12(144.00000000000003), "144");
        assert_eq!(sig12(-412.25), "-412.25");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(-0.0), "0");
        assert_eq!(sig12(4.911626660941e-13), "4.91162666094e-13");
        assert_eq!(sig12(2.5e20), "2.5e20");
    }

    #[test]
    fn quadratics_read_naturally() {
        let c = |re: i64, im: i64| Complex::new(Rational::from_i64(re), Rational::from_i64(im));
        assert_eq!(quad_text(&c(0, 0), &c(-144, 0)), "x^2 - 144");
        assert_eq!(quad_text(&c(2, -3), &c(0, 5)), "x^2 + (2 - 3i)x + 5i");
        assert_eq!(quad_text(&c(0, -1), &c(0, 0)), "x^2 - ix");
        assert_eq!(quad_text(&c(0, 0), &c(0, 0)), "x^2");
        let q = Complex::new(Rational::ratio(-1649, 4), Rational::from_i64(0));
        assert_eq!(quad_text(&c(0, 0), &q), "x^2 - 1649/4");
    }
}
