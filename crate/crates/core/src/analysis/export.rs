//! CSV and JSON output.
//!
//! Numbers are written with nine significant digits in C `%.9g` style.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::sweep::TransferMap;
use crate::error::{invalid, Result};

/// Amplitude against ε.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub eps_axis: Vec<f64>,
    pub amplitude: Vec<f64>,
}

/// `%.9g`: nine significant digits, trailing zeros trimmed, exponent form
/// below 1e−4 or from 1e9 up.
pub fn format_g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_map_csv(map: &TransferMap, mut w: impl Write) -> Result<()> {
    writeln!(w, "offset_hz,eps_rf,amplitude")?;
    for (ie, &eps) in map.eps_axis.iter().enumerate() {
        for (io, &off) in map.offset_axis_hz.iter().enumerate() {
            writeln!(w, "{},{},{}", format_g9(off), format_g9(eps), format_g9(map.get(ie, io)))?;
        }
    }
    Ok(())
}

pub fn write_curve_csv(curve: &Curve, mut w: impl Write) -> Result<()> {
    if curve.eps_axis.len() != curve.amplitude.len() {
        return Err(invalid("curve axis and values differ in length"));
    }
    writeln!(w, "eps_rf,amplitude")?;
    for (e, a) in curve.eps_axis.iter().zip(&curve.amplitude) {
        writeln!(w, "{},{}", format_g9(*e), format_g9(*a))?;
    }
    Ok(())
}

fn read_rows<const N: usize>(r: impl BufRead, header: &str) -> Result<Vec<[f64; N]>> {
    let mut lines = r.lines();
    let first = lines.next().transpose()?;
    if first.as_deref().map(str::trim_end) != Some(header) {
        return Err(invalid(format!("expected CSV header '{header}'")));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != N {
            return Err(invalid(format!("row {} has {} fields, expected {N}", i + 1, fields.len())));
        }
        let mut row = [0.0; N];
        for (k, f) in fields.iter().enumerate() {
            row[k] = f
                .trim()
                .parse()
                .map_err(|_| invalid(format!("row {}: cannot parse '{f}'", i + 1)))?;
        }
        out.push(row);
    }
    Ok(out)
}

/// Rows of (offset_hz, eps_rf, amplitude).
pub fn read_map_csv(r: impl BufRead) -> Result<Vec<[f64; 3]>> {
    read_rows(r, "offset_hz,eps_rf,amplitude")
}

pub fn read_curve_csv(r: impl BufRead) -> Result<Curve> {
    let rows = read_rows::<2>(r, "eps_rf,amplitude")?;
    Ok(Curve { eps_axis: rows.iter().map(|r| r[0]).collect(), amplitude: rows.iter().map(|r| r[1]).collect() })
}

/// Map with its axes, values and metadata block.
pub fn map_to_json(map: &TransferMap) -> Result<String> {
    Ok(serde_json::to_string_pretty(map)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g9_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-0.5, "-0.5"),
            (0.1, "0.1"),
            (1.0 / 3.0, "0.333333333"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (2.0 / 3.0 * 1e-7, "6.66666667e-08"),
            (99.9999999999, "100"),
            (-1.5e300, "-1.5e+300"),
        ];
        for (x, s) in cases {
            assert_eq!(format_g9(x), s, "{x}");
        }
    }

    #[test]
    fn map_csv_round_trip() {
        let m = TransferMap::new(vec![-1.0, 1.0], vec![0.0, 0.1], vec![0.1, 0.25, 1.0 / 3.0, -0.75]).unwrap();
        let mut buf = Vec::new();
        write_map_csv(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(!text.contains('\r'));
        let rows = read_map_csv(buf.as_slice()).unwrap();
        assert_eq!(rows[1], [1.0, 0.0, 0.25]);
        assert_eq!(rows[2][2], format_g9(1.0 / 3.0).parse::<f64>().unwrap());
    }

    #[test]
    fn empty_map_is_header_only() {
        let m = TransferMap::new(vec![], vec![0.0], vec![]).unwrap();
        let mut buf = Vec::new();
        write_map_csv(&m, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "offset_hz,eps_rf,amplitude\n");
    }

    #[test]
    fn curve_round_trip() {
        let c = Curve { eps_axis: vec![-0.5, 0.5], amplitude: vec![0.123456789123, 1.0] };
        let mut buf = Vec::new();
        write_curve_csv(&c, &mut buf).unwrap();
        let back = read_curve_csv(buf.as_slice()).unwrap();
        assert_eq!(back.amplitude[0], 0.123456789);
        assert!(read_curve_csv("a,b\n".as_bytes()).is_err());
    }
}
