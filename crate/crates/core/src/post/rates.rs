use std::fmt::Write as _;
use std::path::Path;

use super::norms::ErrorReport;
use crate::error::{Error, Result};

/// Experimental order `log(e_coarse / e_fine) / log(h_coarse / h_fine)`.
pub fn rate(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> Result<f64> {
    let all = [e_coarse, e_fine, h_coarse, h_fine];
    if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "rate needs positive finite inputs, got e = ({e_coarse}, {e_fine}), h = ({h_coarse}, {h_fine})"
        )));
    }
    if !(h_coarse > h_fine) {
        return Err(Error::InvalidArgument(format!("h_coarse = {h_coarse} must exceed h_fine = {h_fine}")));
    }
    Ok((e_coarse / e_fine).ln() / (h_coarse / h_fine).ln())
}

pub const CSV_HEADER: &str = "h,e_sigma,r_sigma,e_u,r_u,e_p,r_p,e_rho,r_rho,e_phi,r_phi,e_lambda,r_lambda";

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub h: f64,
    pub errors: [f64; 6],
    /// `None` in the first row.
    pub rates: Option<[f64; 6]>,
}

/// Errors and observed rates over a refinement sequence.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
}

impl RateTable {
    pub fn from_reports(reports: &[ErrorReport]) -> Result<Self> {
        let mut t = RateTable::default();
        for r in reports {
            t.push(r.h, r.errors())?;
        }
        Ok(t)
    }

    /// Appends a row; `h` must be smaller than the previous row's.
    pub fn push(&mut self, h: f64, errors: [f64; 6]) -> Result<()> {
        let rates = match self.rows.last() {
            None => None,
            Some(prev) => {
                if !(h < prev.h) {
                    return Err(Error::InvalidArgument(format!(
                        "mesh sizes must decrease strictly ({} then {h})",
                        prev.h
                    )));
                }
                let mut r = [f64::NAN; 6];
                for k in 0..6 {
                    r[k] = rate(prev.errors[k], errors[k], prev.h, h).unwrap_or(f64::NAN);
                }
                Some(r)
            }
        };
        self.rows.push(RateRow { h, errors, rates });
        Ok(())
    }

    /// Rates between the last two rows.
    pub fn finest_rates(&self) -> Option<[f64; 6]> {
        self.rows.last().and_then(|r| r.rates)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for row in &self.rows {
            write!(s, "{}", row.h).unwrap();
            for k in 0..6 {
                write!(s, ",{}", row.errors[k]).unwrap();
                match row.rates {
                    Some(r) => write!(s, ",{}", r[k]).unwrap(),
                    None => s.push(','),
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, l)) if l.trim() == CSV_HEADER => {}
            other => {
                return Err(Error::Parse {
                    line: other.map_or(1, |(i, _)| i + 1),
                    column: 1,
                    message: format!("expected header `{CSV_HEADER}`"),
                })
            }
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 13 {
                return Err(Error::Parse {
                    line: i + 1,
                    column: 1,
                    message: format!("expected 13 fields, found {}", fields.len()),
                });
            }
            let num = |k: usize| -> Result<f64> {
                fields[k].trim().parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    column: fields[..k].iter().map(|f| f.len() + 1).sum::<usize>() + 1,
                    message: format!("bad number `{}`: {e}", fields[k]),
                })
            };
            let h = num(0)?;
            let mut errors = [0.0; 6];
            let mut rates = [0.0; 6];
            let mut blank = 0;
            for k in 0..6 {
                errors[k] = num(1 + 2 * k)?;
                if fields[2 + 2 * k].trim().is_empty() {
                    blank += 1;
                } else {
                    rates[k] = num(2 + 2 * k)?;
                }
            }
            let rates = match blank {
                6 => None,
                0 => Some(rates),
                _ => {
                    return Err(Error::Parse {
                        line: i + 1,
                        column: 1,
                        message: "rates must be all present or all blank".into(),
                    })
                }
            };
            rows.push(RateRow { h, errors, rates });
        }
        Ok(RateTable { rows })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    /// Fixed-width text rendering for terminals.
    pub fn to_text(&self) -> String {
        let mut s = format!("{:>10}", "h");
        for name in super::norms::FIELD_NAMES {
            write!(s, " {:>11} {:>6}", format!("e({name})"), "r").unwrap();
        }
        s.push('\n');
        for row in &self.rows {
            write!(s, "{:>10.6}", row.h).unwrap();
            for k in 0..6 {
                write!(s, " {:>11.4e}", row.errors[k]).unwrap();
                match row.rates {
                    Some(r) => write!(s, " {:>6.3}", r[k]).unwrap(),
                    None => write!(s, " {:>6}", "-").unwrap(),
                }
            }
            s.push('\n');
        }
        s
    }
}
