//! Fixed-precision float formatting shared by every emitted artifact.

/// Significant digits used for all floating-point output.
pub const SIG_DIGITS: usize = 15;

/// Rounds `x` to [`SIG_DIGITS`] significant decimal digits.
///
/// Any decimal with at most 15 significant digits survives a round trip
/// through `f64`, so the shortest representation of the result is the
/// rounded decimal itself.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Formats `x` with 15 significant digits, trailing zeros trimmed.
pub fn sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        trim_zeros(&s)
    } else {
        let s = format!("{:.*e}", SIG_DIGITS - 1, x);
        match s.split_once('e') {
            Some((mant, e)) => format!("{}e{}", trim_zeros(mant), e),
            None => s,
        }
    }
}

/// `serialize_with` helper: JSON number rounded to 15 significant digits,
/// `null` when not finite.
pub fn ser_sig<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(round_sig(*x))
    } else {
        s.serialize_none()
    }
}

pub fn ser_sig_opt<S: serde::Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_sig(v, s),
        None => s.serialize_none(),
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".into() } else { t.into() }
    } else {
        s.into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_fifteen_digits() {
        assert_eq!(sig(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(sig(12.5), "12.5");
        assert_eq!(sig(-0.0), "0");
        assert_eq!(sig(1.0e-9), "1e-9");
        assert_eq!(sig(2058614.0), "2058614");
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333333);
    }
}
