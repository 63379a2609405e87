//! Shared formatting for CSV and report output.

/// Format a float with 9 significant digits, `%.9g`-style.
///
/// Fixed notation for decimal exponents in [-4, 9), scientific otherwise.
/// All CSV output funnels through this so repeated runs are byte-identical
/// across platforms.
pub fn fmt_g9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let exp = x.abs().log10().floor() as i32;
    // Representative digit count before the decimal point; re-derive after
    // rounding in case formatting rounds up a power of ten (e.g. 0.9999999999).
    let mut s = format_with_exp(x, exp);
    let reparsed: f64 = s.parse().unwrap_or(x);
    if reparsed != 0.0 {
        let exp2 = reparsed.abs().log10().floor() as i32;
        if exp2 != exp {
            s = format_with_exp(x, exp2);
        }
    }
    s
}

fn format_with_exp(x: f64, exp: i32) -> String {
    const SIG: i32 = 9;
    if (-4..SIG).contains(&exp) {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_zeros(&s)
    } else {
        let s = format!("{:.*e}", (SIG - 1) as usize, x);
        // Rust renders exponents as `e-5`/`e5`; keep as-is but trim the
        // mantissa's trailing zeros.
        if let Some(pos) = s.find('e') {
            let (mant, tail) = s.split_at(pos);
            format!("{}{}", trim_zeros(mant), tail)
        } else {
            s
        }
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0');
        t.trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `true`/`false` rendering for CSV columns.
pub fn fmt_bool(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_nine_significant_digits() {
        assert_eq!(fmt_g9(0.110435608), "0.110435608");
        assert_eq!(fmt_g9(1.0 / 9.0), "0.111111111");
        assert_eq!(fmt_g9(0.3395643915), "0.339564392");
        assert_eq!(fmt_g9(2.0), "2");
        assert_eq!(fmt_g9(-0.25), "-0.25");
        assert_eq!(fmt_g9(0.0), "0");
    }

    #[test]
    fn switches_to_scientific_for_extreme_exponents() {
        assert_eq!(fmt_g9(1.23456789e-7), "1.23456789e-7");
        assert_eq!(fmt_g9(9.87654321e12), "9.87654321e12");
    }

    #[test]
    fn rounding_carry_is_handled() {
        assert_eq!(fmt_g9(0.99999999999), "1");
        assert_eq!(fmt_g9(9.9999999999e-5), "0.0001");
    }

    #[test]
    fn round_trips_through_parse_at_tolerance() {
        for &x in &[std::f64::consts::PI, 1e-3 * std::f64::consts::E, -123.456789012] {
            let s = fmt_g9(x);
            let y: f64 = s.parse().unwrap();
            assert!((x - y).abs() <= 1e-8 * x.abs());
        }
    }
}
