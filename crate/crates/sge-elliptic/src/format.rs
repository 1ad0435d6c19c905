//! Fixed significant-digit number formatting for CSV and report output.

/// Format `x` with `digits` significant digits, `%g` style: positional when
/// the decimal exponent lies in `[-5, digits)`, scientific otherwise.
/// Trailing zeros are kept so every value has the same precision.
pub fn sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    // exponent after rounding, so 9.99..e2 -> 1.00..e3 is handled
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if exp < -5 || exp >= digits as i32 {
        sci
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    }
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn csv(x: f64) -> String {
    sig(x, 17)
}

/// 15 significant digits for parameter tables.
pub fn table(x: f64) -> String {
    sig(x, 15)
}
