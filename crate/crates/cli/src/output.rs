use std::fmt::Write as _;

use dynmap::dilation::OracleCheck;
use dynmap::sweep::{ConcurrencePoint, SweepRecord};

/// `%.12g`: 12 significant digits, trailing zeros trimmed, exponent form
/// outside `1e-4 ≤ |x| < 1e12`.
pub fn fmt_g(x: f64) -> String {
    const PREC: i32 = 12;
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // the exponent after rounding to PREC digits
    let sci = format!("{:.*e}", (PREC - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PREC).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (PREC - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn sweep_header(records: &[SweepRecord]) -> String {
    let mut cols = vec!["model", "t1", "t2", "mu"];
    if let Some(r) = records.first() {
        cols.extend(r.params.iter().map(|(k, _)| *k));
    }
    cols.extend(["lambda_min", "lambda2", "lambda3", "lambda4", "verdict"]);
    cols.join(",")
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = sweep_header(records);
    out.push('\n');
    for r in records {
        let mut fields = vec![r.model.to_string(), fmt_g(r.t1), fmt_g(r.t2), fmt_g(r.mu)];
        fields.extend(r.params.iter().map(|&(_, v)| fmt_g(v)));
        let eigs = r.eigenvalues.unwrap_or([f64::NAN; 4]);
        fields.extend(eigs.iter().map(|&e| fmt_g(e)));
        fields.push(r.verdict.as_str().to_string());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn concurrence_csv(points: &[ConcurrencePoint]) -> String {
    let mut out = String::from("t,p,concurrence\n");
    for pt in points {
        let _ = writeln!(out, "{},{},{}", fmt_g(pt.t), fmt_g(pt.p), fmt_g(pt.concurrence));
    }
    out
}

pub fn oracle_csv(checks: &[OracleCheck]) -> String {
    let mut out = String::from("check,points,max_deviation,tolerance,max_constraint_violation,result\n");
    for c in checks {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            c.name,
            c.points,
            fmt_g(c.max_deviation),
            fmt_g(c.tolerance),
            fmt_g(c.max_constraint_violation.unwrap_or(f64::NAN)),
            if c.passed() { "PASS" } else { "FAIL" }
        );
    }
    out
}

/// Splits one CSV line of this crate's output (no quoting is ever needed).
pub fn split_row(line: &str) -> Vec<&str> {
    line.split(',').collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-4.5436, "-4.5436"),
            (0.229_793_296_672_85, "0.229793296673"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (1.5e-5, "1.5e-05"),
            (0.0001, "0.0001"),
            (-2.5e-17, "-2.5e-17"),
            (999999999999.9, "1e+12"),
            (f64::NAN, "NaN"),
        ];
        for (x, expect) in cases {
            assert_eq!(fmt_g(x), expect, "{x}");
        }
    }

    #[test]
    fn round_trips_to_twelve_digits() {
        for x in [std::f64::consts::PI, -1e-9, 6.02214076e23, 0.1 + 0.2] {
            let back: f64 = fmt_g(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11);
        }
    }
}
