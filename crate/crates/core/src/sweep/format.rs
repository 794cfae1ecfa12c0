/// Formats a float with six significant digits, trimming trailing zeros.
/// Magnitudes outside `[1e-5, 1e6)` use scientific notation.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let (mantissa, e) = sci.split_at(sci.find('e').unwrap());
        format!("{}{e}", trim_zeros(mantissa.to_string()))
    }
}

/// Costs are reported to two decimals.
pub fn fmt_cost(x: f64) -> String {
    format!("{x:.2}")
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}
