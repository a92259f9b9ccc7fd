//! CSV serialization of run series and tables.
//!
//! Values are printed in scientific notation with 17 significant digits
//! (`{:.16e}`), enough to reproduce every f64 bit-exactly, so golden files
//! and rerun comparisons are byte-stable.

use crate::analysis::RunData;
use crate::error::{CoreError, Result};
use crate::evolution::RunSeries;
use crate::scalar::Real;

/// Fixed-precision scientific formatting used by every emitter.
pub fn fmt_value<T: Real>(x: T) -> String {
    format!("{:.16e}", x.to_f64().unwrap_or(f64::NAN))
}

/// Compact parameter rendering for header names (`2` not `2.0`, `0.75`).
pub fn fmt_param<T: Real>(x: T) -> String {
    let v = x.to_f64().unwrap_or(f64::NAN);
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Header for a series CSV given the configured β and p lists.
pub fn series_header<T: Real>(betas: &[T], ps: &[T]) -> String {
    let mut cols = vec![
        "t".to_string(),
        "E".to_string(),
        "E_C".to_string(),
        "E_C_pos".to_string(),
        "flux".to_string(),
    ];
    for &b in betas {
        cols.push(format!("wL2_beta{}", fmt_param(b)));
    }
    cols.push("wL6".to_string());
    cols.push("wL2_dom".to_string());
    for &p in ps {
        cols.push(format!("angE_p{}", fmt_param(p)));
    }
    cols.join(",")
}

/// Renders a run series; column set follows the records' β and p lists.
pub fn series_to_csv<T: Real>(series: &RunSeries<T>) -> String {
    let mut out = String::new();
    let (betas, ps) = match series.records.first() {
        Some(r) => (
            r.weighted_l2.iter().map(|&(b, _)| b).collect::<Vec<_>>(),
            r.angular_local.iter().map(|&(p, _)| p).collect::<Vec<_>>(),
        ),
        None => (Vec::new(), Vec::new()),
    };
    out.push_str(&series_header(&betas, &ps));
    out.push('\n');
    for r in &series.records {
        let mut cols = vec![
            fmt_value(r.t),
            fmt_value(r.e_total),
            fmt_value(r.e_c),
            fmt_value(r.e_c_positive),
            fmt_value(r.conformal_flux),
        ];
        for &(_, v) in &r.weighted_l2 {
            cols.push(fmt_value(v));
        }
        cols.push(fmt_value(r.weighted_l6));
        cols.push(fmt_value(r.weighted_dom));
        for &(_, v) in &r.angular_local {
            cols.push(fmt_value(v));
        }
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

/// Parses a series CSV back into analysis columns.
pub fn parse_series_csv(text: &str) -> Result<RunData> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CoreError::Format("empty series file".into()))?;
    let names: Vec<&str> = header.split(',').collect();
    let required = ["t", "E", "E_C", "E_C_pos", "flux", "wL6", "wL2_dom"];
    for name in required {
        if !names.contains(&name) {
            return Err(CoreError::Format(format!("missing column {name}")));
        }
    }
    let idx = |name: &str| names.iter().position(|&n| n == name).unwrap();
    let mut betas: Vec<(f64, usize)> = Vec::new();
    let mut ps: Vec<(f64, usize)> = Vec::new();
    for (i, name) in names.iter().enumerate() {
        if let Some(rest) = name.strip_prefix("wL2_beta") {
            let b: f64 = rest
                .parse()
                .map_err(|_| CoreError::Format(format!("bad beta column {name}")))?;
            betas.push((b, i));
        } else if let Some(rest) = name.strip_prefix("angE_p") {
            let p: f64 = rest
                .parse()
                .map_err(|_| CoreError::Format(format!("bad angular column {name}")))?;
            ps.push((p, i));
        }
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let vals: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|s| s.trim().parse::<f64>()).collect();
        let vals = vals.map_err(|e| {
            CoreError::Format(format!("row {}: {e}", lineno + 2))
        })?;
        if vals.len() != names.len() {
            return Err(CoreError::Format(format!(
                "row {}: {} fields, header has {}",
                lineno + 2,
                vals.len(),
                names.len()
            )));
        }
        rows.push(vals);
    }

    let column = |i: usize| rows.iter().map(|r| r[i]).collect::<Vec<f64>>();
    Ok(RunData {
        t: column(idx("t")),
        e: column(idx("E")),
        e_c: column(idx("E_C")),
        e_c_pos: column(idx("E_C_pos")),
        flux: column(idx("flux")),
        weighted_l2: betas.iter().map(|&(b, i)| (b, column(i))).collect(),
        weighted_l6: column(idx("wL6")),
        weighted_dom: column(idx("wL2_dom")),
        angular: ps.iter().map(|&(p, i)| (p, column(i))).collect(),
        boundary_contact: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_formatting() {
        assert_eq!(fmt_param(2.0), "2");
        assert_eq!(fmt_param(0.75), "0.75");
        assert_eq!(fmt_param(1.0), "1");
    }

    #[test]
    fn value_formatting_is_17_sig_digits() {
        let s = fmt_value(1.0 / 3.0);
        assert_eq!(s, "3.3333333333333331e-1");
    }

    #[test]
    fn header_layout() {
        assert_eq!(
            series_header(&[1.0, 2.0], &[0.75]),
            "t,E,E_C,E_C_pos,flux,wL2_beta1,wL2_beta2,wL6,wL2_dom,angE_p0.75"
        );
    }

    #[test]
    fn round_trip_parse() {
        let text = "t,E,E_C,E_C_pos,flux,wL2_beta1,wL2_beta2,wL6,wL2_dom,angE_p0.75\n\
                    1.0,2.0,3.0,3.0,0.5,0.1,0.05,0.2,4.0,0.7\n\
                    2.0,2.0,3.5,3.5,0.4,0.09,0.04,0.19,4.1,0.6\n";
        let data = parse_series_csv(text).unwrap();
        assert_eq!(data.t, vec![1.0, 2.0]);
        assert_eq!(data.e, vec![2.0, 2.0]);
        assert_eq!(data.weighted_l2.len(), 2);
        assert_eq!(data.weighted_l2[0].0, 1.0);
        assert_eq!(data.weighted_l2[1].1, vec![0.05, 0.04]);
        assert_eq!(data.angular[0].0, 0.75);
        assert_eq!(data.weighted_l6, vec![0.2, 0.19]);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(parse_series_csv("").is_err());
        assert!(parse_series_csv("t,E\n1,2\n").is_err());
        let missing_field = "t,E,E_C,E_C_pos,flux,wL6,wL2_dom\n1.0,2.0\n";
        assert!(parse_series_csv(missing_field).is_err());
        let bad_number = "t,E,E_C,E_C_pos,flux,wL6,wL2_dom\n1.0,x,3.0,3.0,0.5,0.2,4.0\n";
        assert!(parse_series_csv(bad_number).is_err());
    }
}
