//! Fixed-precision rendering of floats for reproducible output files.

/// Significant digits used in every JSON and CSV file we write.
pub const SIG_DIGITS: usize = 12;

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

/// `x` rounded to [`SIG_DIGITS`] and printed in shortest decimal form.
pub fn sig12(x: f64) -> String {
    format!("{}", round_sig(x, SIG_DIGITS))
}

/// Serde adapter: `#[serde(serialize_with = "precision::ser")]`.
pub fn ser<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x, SIG_DIGITS))
}

/// Serde adapter for fixed-size float arrays and slices.
pub fn ser_slice<S: serde::Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&round_sig(*x, SIG_DIGITS))?;
    }
    seq.end()
}
