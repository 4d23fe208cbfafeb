//! Output records and their json / csv / human renderings.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;
use shadowsum::identities::{CheckReport, Comparison};
use shadowsum::Error;

use crate::config::Format;

/// A real number at 15 significant digits.
pub fn decimal(x: f64) -> String {
    // no negative zero in the output
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.14e}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Value {
    pub re: String,
    pub im: String,
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value {
            re: decimal(z.re),
            im: decimal(z.im),
        }
    }
}

/// The same quantity computed another way.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    /// `shadow`, `surgery` or `closed_form`.
    pub pipeline: &'static str,
    pub value: Value,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub input: String,
    pub r: u32,
    pub k: u32,
    pub phase_sign: String,
    /// `shadow` or `surgery`.
    pub pipeline: &'static str,
    pub value: Value,
    pub abs: String,
    pub sigma: i64,
    /// Admissible colorings summed (shadow pipeline).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colorings: Option<usize>,
    /// Surgery components (surgery pipeline).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Wall time; the only field that varies between identical runs.
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    pub certifies: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub closure_cases: usize,
    /// `exact` or the numeric tolerance.
    pub comparison: String,
    pub max_error: String,
    pub failures: Vec<String>,
    pub elapsed_ms: f64,
}

impl From<&CheckReport> for CheckRecord {
    fn from(c: &CheckReport) -> Self {
        CheckRecord {
            check: c.name,
            certifies: c.certifies,
            passed: c.passed(),
            cases: c.cases,
            closure_cases: c.closure_cases,
            comparison: match c.comparison {
                Comparison::Exact => "exact".into(),
                Comparison::Numeric(t) => format!("{t:e}"),
            },
            max_error: decimal(c.max_error),
            failures: c.failures.clone(),
            elapsed_ms: millis(c.elapsed),
        }
    }
}

pub fn millis(d: std::time::Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

/// Exit status and machine-readable record for a failed run.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub exit_code: u8,
}

impl ErrorRecord {
    pub fn new(e: &Error, input: Option<String>) -> Self {
        let (kind, exit_code) = match e {
            Error::Parse(_) => ("parse", 2),
            Error::InvalidShadow(_) => ("invalid_shadow", 2),
            Error::InvalidDiagram(_) => ("invalid_diagram", 2),
            Error::InvalidRoot(_) => ("invalid_root", 2),
            Error::ColorOutOfRange { .. } => ("color_out_of_range", 2),
            Error::MissingData(_) => ("missing_data", 2),
            Error::BudgetExceeded(_) => ("budget_exceeded", 3),
            Error::StrandMismatch { .. } => ("strand_mismatch", 4),
            Error::Indeterminate(_) => ("indeterminate", 4),
            Error::DivisionByZero(_) => ("division_by_zero", 4),
        };
        ErrorRecord {
            kind,
            message: e.to_string(),
            input,
            exit_code,
        }
    }

    pub fn io(message: String, input: Option<String>) -> Self {
        ErrorRecord {
            kind: "io",
            message,
            input,
            exit_code: 2,
        }
    }
}

// csv rows are flat
#[derive(Serialize)]
struct ResultRow<'a> {
    input: &'a str,
    r: u32,
    k: u32,
    phase_sign: &'a str,
    pipeline: &'a str,
    re: &'a str,
    im: &'a str,
    abs: &'a str,
    sigma: i64,
    colorings: Option<usize>,
    components: Option<usize>,
    check_pipeline: Option<&'a str>,
    check_re: Option<&'a str>,
    check_im: Option<&'a str>,
    agree: Option<bool>,
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct CheckRow<'a> {
    check: &'a str,
    passed: bool,
    cases: usize,
    closure_cases: usize,
    comparison: &'a str,
    max_error: &'a str,
    failures: usize,
    elapsed_ms: f64,
    certifies: &'a str,
}

/// Streams records to stdout in the configured format.
pub struct Sink {
    format: Format,
    csv: Option<csv::Writer<std::io::Stdout>>,
}

impl Sink {
    pub fn new(format: Format) -> Self {
        Sink {
            format,
            csv: (format == Format::Csv).then(|| csv::Writer::from_writer(std::io::stdout())),
        }
    }

    pub fn result(&mut self, rec: &ResultRecord) {
        match self.format {
            Format::Json => json_line(rec),
            Format::Csv => {
                let c = rec.cross_check.as_ref();
                self.write_csv(ResultRow {
                    input: &rec.input,
                    r: rec.r,
                    k: rec.k,
                    phase_sign: &rec.phase_sign,
                    pipeline: rec.pipeline,
                    re: &rec.value.re,
                    im: &rec.value.im,
                    abs: &rec.abs,
                    sigma: rec.sigma,
                    colorings: rec.colorings,
                    components: rec.components,
                    check_pipeline: c.map(|c| c.pipeline),
                    check_re: c.map(|c| c.value.re.as_str()),
                    check_im: c.map(|c| c.value.im.as_str()),
                    agree: c.map(|c| c.agree),
                    elapsed_ms: rec.elapsed_ms,
                })
            }
            Format::Human => {
                let mut line = format!(
                    "{:<28} {:<7} r={:<2} k={:<2} {}  |v|={}  σ={}",
                    rec.input,
                    rec.pipeline,
                    rec.r,
                    rec.k,
                    complex(&rec.value),
                    short(&rec.abs),
                    rec.sigma
                );
                if let Some(n) = rec.colorings {
                    line += &format!("  colorings={n}");
                }
                if let Some(n) = rec.components {
                    line += &format!("  components={n}");
                }
                if let Some(c) = &rec.cross_check {
                    line += &format!(
                        "  {}={} agree={}",
                        c.pipeline,
                        complex(&c.value),
                        c.agree
                    );
                }
                println!("{line}");
                for w in &rec.warnings {
                    println!("  warning: {w}");
                }
            }
        }
    }

    pub fn check(&mut self, rec: &CheckRecord) {
        match self.format {
            Format::Json => json_line(rec),
            Format::Csv => self.write_csv(CheckRow {
                check: rec.check,
                passed: rec.passed,
                cases: rec.cases,
                closure_cases: rec.closure_cases,
                comparison: &rec.comparison,
                max_error: &rec.max_error,
                failures: rec.failures.len(),
                elapsed_ms: rec.elapsed_ms,
                certifies: rec.certifies,
            }),
            Format::Human => {
                let closure = if rec.closure_cases > 0 {
                    format!(", {} after closure", rec.closure_cases)
                } else {
                    String::new()
                };
                println!(
                    "{} {:<21} {:>4} cases{closure}, {}, max err {:.1e}, {:.0} ms — {}",
                    if rec.passed { "PASS" } else { "FAIL" },
                    rec.check,
                    rec.cases,
                    rec.comparison,
                    rec.max_error.parse::<f64>().unwrap_or(f64::NAN),
                    rec.elapsed_ms,
                    rec.certifies
                );
                for f in rec.failures.iter().take(10) {
                    println!("    {f}");
                }
                if rec.failures.len() > 10 {
                    println!("    … {} more", rec.failures.len() - 10);
                }
            }
        }
    }

    fn write_csv<T: Serialize>(&mut self, row: T) {
        let w = self.csv.as_mut().expect("csv sink");
        w.serialize(row).expect("stdout is writable");
        w.flush().expect("stdout is writable");
    }

    pub fn finish(&mut self) {
        if let Some(w) = self.csv.as_mut() {
            w.flush().expect("stdout is writable");
        }
        std::io::stdout().flush().expect("stdout is writable");
    }
}

fn json_line<T: Serialize>(rec: &T) {
    println!("{}", serde_json::to_string(rec).expect("records serialize"));
}

// 15 digits are for machines; people get 10
fn short(s: &str) -> String {
    s.parse::<f64>().map(|x| format!("{:.10}", x)).unwrap_or_else(|_| s.into())
}

fn complex(v: &Value) -> String {
    let im = v.im.parse::<f64>().unwrap_or(f64::NAN);
    // rounding noise should not flip the printed sign
    let sign = if im < -5e-11 { '-' } else { '+' };
    format!("{} {sign} {:.10}i", short(&v.re), im.abs())
}
