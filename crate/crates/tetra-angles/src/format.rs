//! Fixed-precision number output shared by the mesh writers and the CLI.

/// `x` with 15 significant digits, in the style of C's `%.15g`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.14e}");
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-4..15).contains(&exp) {
        let s = format!("{:.*}", (14 - exp) as usize, x);
        trim_zeros(&s)
    } else {
        format!("{}e{exp}", trim_zeros(mant))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `x` rounded to 15 significant digits; its shortest decimal form is
/// `fmt_sig(x)` up to notation.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    fmt_sig(x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(fmt_sig(0.25), "0.25");
        assert_eq!(fmt_sig(2f64.sqrt()), "1.4142135623731");
        assert_eq!(fmt_sig(-1.0), "-1");
        assert_eq!(fmt_sig(1.5e-7), "1.5e-7");
        assert_eq!(fmt_sig(123456.0), "123456");
        assert_eq!(fmt_sig(1e20), "1e20");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn rounding_is_idempotent() {
        for x in [0.1f64, 1.0 / 3.0, -2.5e-9, 12345.678901234567] {
            let r = round_sig(x);
            assert_eq!(round_sig(r), r);
            assert!((r - x).abs() <= 1e-14 * x.abs());
        }
    }
}
