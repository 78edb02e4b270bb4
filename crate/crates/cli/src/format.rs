//! Text forms of matrices, series and certificates.

use std::fmt::Write as _;

use clap::ValueEnum;
use riordan_core::decompose::FactorizationCertificate;
use riordan_core::fps::parse_rational;
use riordan_core::gfparse::eval_str;
use riordan_core::{Rational, RiordanMatrix, Series};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Triangle,
    Csv,
}

/// `{"order": n, "d": [...], "h": [...], "rows": [[...], ...]}` with every
/// rational written as a string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub order: usize,
    pub d: Vec<String>,
    pub h: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub target: MatrixDoc,
    pub factors: Vec<MatrixDoc>,
    pub verified: bool,
    pub widths: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorDoc {
    #[serde(rename = "A")]
    pub a: MatrixDoc,
    #[serde(rename = "B")]
    pub b: MatrixDoc,
    pub verified: bool,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(|q| q.to_string()).collect()
}

fn rationals(v: &[String]) -> Result<Vec<Rational>, CliError> {
    v.iter()
        .map(|s| parse_rational(s).map_err(CliError::from))
        .collect()
}

impl MatrixDoc {
    pub fn new(m: &RiordanMatrix) -> Self {
        MatrixDoc {
            order: m.order(),
            d: strings(m.d().coeffs()),
            h: strings(m.h().coeffs()),
            rows: m.rows().iter().map(|r| strings(r)).collect(),
        }
    }

    /// Rebuilds the matrix from `d` and `h` and insists that `order` and
    /// `rows` agree with it.
    pub fn to_matrix(&self) -> Result<RiordanMatrix, CliError> {
        let n = self.order;
        if self.d.len() != n + 1 || self.h.len() != n + 1 {
            return Err(CliError::Parse(format!(
                "order {n} needs {} coefficients in d and h (got {} and {})",
                n + 1,
                self.d.len(),
                self.h.len()
            )));
        }
        let d = Series::new(rationals(&self.d)?)?;
        let h = Series::new(rationals(&self.h)?)?;
        let m = RiordanMatrix::from_dh(d, h)?;
        let rows = self
            .rows
            .iter()
            .map(|r| rationals(r))
            .collect::<Result<Vec<_>, _>>()?;
        if rows.as_slice() != m.rows() {
            return Err(CliError::Parse("rows do not match d and h".into()));
        }
        Ok(m)
    }
}

pub fn read_matrix(text: &str) -> Result<RiordanMatrix, CliError> {
    let doc: MatrixDoc = serde_json::from_str(text)?;
    doc.to_matrix()
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn render_matrix(m: &RiordanMatrix, format: Format) -> String {
    match format {
        Format::Json => to_json(&MatrixDoc::new(m)),
        Format::Triangle => format!("{m}\n"),
        Format::Csv => {
            let mut out = String::from("row,col,value\n");
            for (i, row) in m.rows().iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    writeln!(out, "{i},{j},{v}").unwrap();
                }
            }
            out
        }
    }
}

pub fn certificate_doc(c: &FactorizationCertificate) -> CertificateDoc {
    CertificateDoc {
        target: MatrixDoc::new(&c.target),
        factors: c.factors.iter().map(MatrixDoc::new).collect(),
        verified: c.verified,
        widths: c.width(),
    }
}

/// Anything mentioning `x` is an expression, and so is a single term that is
/// not a plain rational, such as `1/(1-2)`.
pub fn is_expression(text: &str) -> bool {
    text.contains(['x', 'X']) || (!text.contains(',') && parse_rational(text).is_err())
}

/// A series of order `n`. Expressions are expanded to order `n`; a
/// coefficient list is read as a polynomial, padded with zeros or truncated.
pub fn series_arg(text: &str, n: usize) -> Result<Series, CliError> {
    if is_expression(text) {
        return Ok(eval_str(text, n)?);
    }
    let mut c = text.parse::<Series>()?.into_coeffs();
    c.resize(n + 1, Rational::default());
    Ok(Series::new(c)?)
}

/// Like [`series_arg`], but a coefficient list is taken as given.
pub fn exact_series_arg(text: &str, n: usize) -> Result<Series, CliError> {
    if is_expression(text) {
        return Ok(eval_str(text, n)?);
    }
    Ok(text.parse::<Series>()?)
}
