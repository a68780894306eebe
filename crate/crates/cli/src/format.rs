//! Number and complex-value formatting/parsing shared by the commands.
//!
//! Human-facing tables use 5 significant digits; CSV output uses 17
//! (lossless for f64).

use fracroot::ComplexValue;

/// Format to 5 significant digits: plain decimal for moderate magnitudes,
/// scientific notation outside `[1e-4, 1e6)`.
pub fn sig5(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.0000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (4 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.4e}")
    }
}

/// `re` for real values, `re+imi` / `re-imi` otherwise, at 5 significant
/// digits per component.
pub fn complex5(z: ComplexValue) -> String {
    if z.im == 0.0 {
        sig5(z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", sig5(z.re), sig5(-z.im))
    } else {
        format!("{}+{}i", sig5(z.re), sig5(z.im))
    }
}

/// Lossless CSV number format, matching the plane CSV writer.
pub fn csv17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parse `re` or `re,im` into a complex value.
pub fn parse_complex(s: &str) -> Result<ComplexValue, String> {
    let s = s.trim();
    let (re_str, im_str) = match s.split_once(',') {
        Some((r, i)) => (r.trim(), Some(i.trim())),
        None => (s, None),
    };
    let re: f64 = re_str.parse().map_err(|_| format!("invalid real part {re_str:?} in {s:?}"))?;
    let im: f64 = match im_str {
        Some(i) => i.parse().map_err(|_| format!("invalid imaginary part {i:?} in {s:?}"))?,
        None => 0.0,
    };
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("complex value must be finite, got {s:?}"));
    }
    Ok(ComplexValue::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig5_spans_magnitudes() {
        assert_eq!(sig5(-0.584), "-0.58400");
        assert_eq!(sig5(3.85126), "3.8513");
        assert_eq!(sig5(151.0), "151.00");
        assert_eq!(sig5(0.0), "0.0000");
        assert_eq!(sig5(8.8776e-10), "8.8776e-10");
        assert_eq!(sig5(1.25e7), "1.2500e7");
    }

    #[test]
    fn complex5_formats_both_signs() {
        assert_eq!(complex5(ComplexValue::new(-3.85126, 1.74602)), "-3.8513+1.7460i");
        assert_eq!(complex5(ComplexValue::new(2.90807, -4.24908)), "2.9081-4.2491i");
        assert_eq!(complex5(ComplexValue::new(-0.584, 0.0)), "-0.58400");
    }

    #[test]
    fn parse_complex_accepts_both_forms() {
        assert_eq!(parse_complex("-1.5").unwrap(), ComplexValue::new(-1.5, 0.0));
        assert_eq!(parse_complex("0.25, -3").unwrap(), ComplexValue::new(0.25, -3.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1,nan").is_err());
    }
}
