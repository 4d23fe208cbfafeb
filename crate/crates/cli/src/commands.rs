//! The `invariant`, `table` and `selftest` subcommands.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use clap::ValueEnum;
use num_complex::Complex64;
use shadowsum::arith::eta;
use shadowsum::identities::{run_suite, SuiteConfig};
use shadowsum::shadow::evaluate_shadow;
use shadowsum::skein::Role;
use shadowsum::surgery::{invariant_from_surgery, invariant_with_graph, link_signature, linking_matrix};
use shadowsum::{Error, FramedLink, OracleBudget, Result, RootContext, Shadow};

use crate::config::RunConfig;
use crate::record::{decimal, millis, CheckRecord, CrossCheck, ErrorRecord, ResultRecord, Sink};

/// What a file holds, decided by its top-level keys.
#[derive(Debug)]
pub enum Input {
    Shadow(Shadow),
    Link(FramedLink),
}

impl Input {
    pub fn detect(text: &str) -> Result<Input> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("the top level must be a JSON object".into()))?;
        let shadow = obj.contains_key("regions");
        let link = obj.contains_key("family") || obj.contains_key("diagram");
        match (shadow, link) {
            (true, false) => Ok(Input::Shadow(Shadow::from_json(text)?)),
            (false, true) => Ok(Input::Link(FramedLink::from_json(text)?)),
            (true, true) => Err(Error::Parse(
                "both `regions` (shadow) and `family`/`diagram` (link) keys are present".into(),
            )),
            (false, false) => {
                let keys: Vec<String> = obj.keys().map(|k| format!("`{k}`")).collect();
                Err(Error::Parse(format!(
                    "cannot tell the input kind: expected a top-level `regions`, `family` or `diagram` key, found [{}]",
                    keys.join(", ")
                )))
            }
        }
    }

    #[cfg(test)]
    pub fn to_json(&self) -> String {
        match self {
            Input::Shadow(s) => s.to_json(),
            Input::Link(l) => l.to_json(),
        }
    }
}

fn agree(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    ctx: RootContext,
}

impl Ctx<'_> {
    fn record(&self, input: String, pipeline: &'static str, value: Complex64, sigma: i64, start: Instant) -> ResultRecord {
        ResultRecord {
            input,
            r: self.ctx.r(),
            k: self.ctx.k(),
            phase_sign: self.cfg.phase().to_string(),
            pipeline,
            value: value.into(),
            abs: decimal(value.norm()),
            sigma,
            colorings: None,
            components: None,
            cross_check: None,
            warnings: Vec::new(),
            elapsed_ms: millis(start.elapsed()),
        }
    }

    fn shadow(&self, input: String, s: &Shadow, sigma: Option<i64>) -> Result<ResultRecord> {
        let start = Instant::now();
        s.check()?;
        let ev = evaluate_shadow(&self.ctx, s, sigma, self.cfg.phase())?;
        let mut rec = self.record(input, "shadow", ev.value, ev.sigma, start);
        rec.colorings = Some(ev.colorings);
        rec.warnings = s.warnings();
        Ok(rec)
    }

    fn surgery(&self, input: String, l: &FramedLink) -> Result<ResultRecord> {
        let start = Instant::now();
        let budget = self.cfg.oracle_budget(OracleBudget::default());
        let sigma = link_signature(l)?;
        let value = match l {
            FramedLink::Diagram(d) if !d.vertices.is_empty() || d.strands.iter().any(|s| s.role == Role::Color) => {
                invariant_with_graph(&self.ctx, d, &budget)?
            }
            _ => invariant_from_surgery(&self.ctx, l, &budget)?,
        };
        let mut rec = self.record(input, "surgery", value, sigma, start);
        rec.components = Some(linking_matrix(l)?.len());
        Ok(rec)
    }

    fn with_check(&self, mut rec: ResultRecord, pipeline: &'static str, other: Complex64, value: Complex64) -> ResultRecord {
        rec.cross_check = Some(CrossCheck {
            pipeline,
            value: other.into(),
            agree: agree(value, other, self.cfg.tolerance),
        });
        rec
    }
}

fn value_of(rec: &ResultRecord) -> Complex64 {
    Complex64::new(rec.value.re.parse().unwrap_or(f64::NAN), rec.value.im.parse().unwrap_or(f64::NAN))
}

pub fn invariant(cfg: &RunConfig, file: &Path, sigma: Option<i64>, sink: &mut Sink) -> std::result::Result<(), ErrorRecord> {
    let name = file.display().to_string();
    let fail = |e: Error| ErrorRecord::new(&e, Some(name.clone()));
    let text = std::fs::read_to_string(file).map_err(|e| ErrorRecord::io(e.to_string(), Some(name.clone())))?;
    let c = Ctx {
        cfg,
        ctx: cfg.context().map_err(fail)?,
    };
    let rec = match Input::detect(&text).map_err(fail)? {
        Input::Shadow(s) => c.shadow(name.clone(), &s, sigma),
        Input::Link(l) => {
            if sigma.is_some() {
                return Err(fail(Error::Parse(
                    "`--sigma` applies to shadows; a link's σ comes from its linking matrix".into(),
                )));
            }
            c.surgery(name.clone(), &l)
        }
    }
    .map_err(fail)?;
    sink.result(&rec);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    /// L(n,1): surgery on the n-framed unknot, checked against the gleam-n sphere.
    LensSurgery,
    /// The gleam-n sphere, checked against surgery on the n-framed unknot.
    LensShadow,
    /// #_g(S¹×S²): the 0-framed g-component unlink, checked against η^{1−g}.
    ConnectedSums,
    /// A closed genus-g surface with gleam n.
    SurfaceGleam,
}

/// An inclusive integer range `a:b`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    pub fn iter(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| format!("invalid range {s:?}: expected a:b or a single integer"))
        };
        let (lo, hi) = match s.split_once(':') {
            Some((a, b)) => (num(a)?, num(b)?),
            None => (num(s)?, num(s)?),
        };
        if lo > hi {
            return Err(format!("invalid range {s:?}: {lo} > {hi}"));
        }
        if hi - lo > 10_000 {
            return Err(format!("invalid range {s:?}: more than 10000 values"));
        }
        Ok(Span { lo, hi })
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

pub struct Ranges {
    pub r: Option<Span>,
    pub n: Span,
    pub g: Span,
}

pub fn table(cfg: &RunConfig, family: Family, ranges: &Ranges, sink: &mut Sink) -> std::result::Result<(), ErrorRecord> {
    let fail = |e: Error| ErrorRecord::new(&e, None);
    let rs = ranges.r.unwrap_or(Span {
        lo: cfg.r as i64,
        hi: cfg.r as i64,
    });
    if ranges.g.lo < 0 && matches!(family, Family::ConnectedSums | Family::SurfaceGleam) {
        return Err(fail(Error::Parse(format!("invalid range {}: genus must be non-negative", ranges.g))));
    }
    for r in rs.iter() {
        let r = u32::try_from(r).map_err(|_| fail(Error::InvalidRoot(format!("level r = {r} must be at least 3"))))?;
        let c = Ctx {
            cfg,
            ctx: cfg.context_at(r).map_err(fail)?,
        };
        match family {
            Family::LensSurgery | Family::LensShadow => {
                for n in ranges.n.iter() {
                    let input = format!("lens n={n}");
                    let link = FramedLink::Unknot(n);
                    let sphere = Shadow::sphere(n);
                    let surgery = c.surgery(input.clone(), &link).map_err(fail)?;
                    let shadow = c.shadow(input, &sphere, None).map_err(fail)?;
                    let (a, b) = (value_of(&surgery), value_of(&shadow));
                    let rec = if family == Family::LensSurgery {
                        c.with_check(surgery, "shadow", b, a)
                    } else {
                        c.with_check(shadow, "surgery", a, b)
                    };
                    sink.result(&rec);
                }
            }
            Family::ConnectedSums => {
                for g in ranges.g.iter() {
                    let link = FramedLink::Unlink(vec![0; g as usize]);
                    let rec = c.surgery(format!("connected_sum g={g}"), &link).map_err(fail)?;
                    let expected = eta(&c.ctx).powi(1 - g as i32);
                    let v = value_of(&rec);
                    sink.result(&c.with_check(rec, "closed_form", expected, v));
                }
            }
            Family::SurfaceGleam => {
                for g in ranges.g.iter() {
                    for n in ranges.n.iter() {
                        let rec = c
                            .shadow(format!("surface g={g} n={n}"), &Shadow::genus(g, n), None)
                            .map_err(fail)?;
                        sink.result(&rec);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Runs the identity suite; `Ok(false)` when some check failed.
pub fn selftest(cfg: &RunConfig, max_label_sum: u32, sink: &mut Sink) -> std::result::Result<bool, ErrorRecord> {
    let ctx = cfg.context().map_err(|e| ErrorRecord::new(&e, None))?;
    let defaults = SuiteConfig::default();
    let suite = SuiteConfig {
        max_label_sum,
        tolerance: cfg.tolerance,
        budget: cfg.oracle_budget(defaults.budget),
    };
    let mut ok = true;
    for report in run_suite(&ctx, &suite) {
        ok &= report.passed();
        sink.check(&CheckRecord::from(&report));
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data_files() -> Vec<std::path::PathBuf> {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
        let mut files: Vec<_> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        files
    }

    #[test]
    fn data_files_round_trip() {
        let files = data_files();
        assert!(files.len() >= 5);
        for f in files {
            let text = std::fs::read_to_string(&f).unwrap();
            let once = Input::detect(&text).unwrap().to_json();
            let twice = Input::detect(&once).unwrap().to_json();
            assert_eq!(once, twice, "{}", f.display());
        }
    }

    #[test]
    fn detection_by_root_key() {
        assert!(matches!(Input::detect(r#"{"regions": []}"#), Ok(Input::Shadow(_))));
        assert!(matches!(Input::detect(r#"{"family": "empty"}"#), Ok(Input::Link(FramedLink::Empty))));
        for bad in [r#"[1]"#, r#"{"x": 1}"#, r#"{"regions": [], "family": "empty"}"#, "{"] {
            assert!(matches!(Input::detect(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn spans() {
        assert_eq!("-3:3".parse::<Span>().unwrap(), Span { lo: -3, hi: 3 });
        assert_eq!("4".parse::<Span>().unwrap(), Span { lo: 4, hi: 4 });
        assert_eq!("-3:3".parse::<Span>().unwrap().iter().count(), 7);
        for bad in ["3:1", "a:b", "", "1:2:3"] {
            assert!(bad.parse::<Span>().is_err(), "{bad}");
        }
    }
}
