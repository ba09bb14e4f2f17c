//! Verification reports: JSON document plus a CSV of every fitted series.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::OscillatorSpec;

/// How a measured value is compared with its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    /// `|value - target| <= tolerance`.
    #[serde(rename = "within")]
    Within,
    /// Recorded without a pass/fail condition.
    #[serde(rename = "info")]
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    /// Bound for `<=`/`>=`, target for `within`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pass: Option<bool>,
}

impl Measurement {
    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::Info,
            threshold: None,
            tolerance: None,
            pass: None,
        }
    }

    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::AtMost,
            threshold: Some(bound),
            tolerance: None,
            pass: Some(value <= bound),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::AtLeast,
            threshold: Some(bound),
            tolerance: None,
            pass: Some(value >= bound),
        }
    }

    pub fn within(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::Within,
            threshold: Some(target),
            tolerance: Some(tolerance),
            pass: Some((value - target).abs() <= tolerance),
        }
    }

    /// A finiteness check.
    pub fn finite(name: impl Into<String>, value: f64) -> Self {
        let mut m = Self::at_most(name, value, f64::MAX);
        m.pass = Some(value.is_finite());
        m
    }
}

/// An `(x, y)` series behind a fitted slope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The problem a report was computed on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpecEcho {
    pub n: usize,
    pub k: u32,
    pub l: u32,
    pub domain_half_width: f64,
    pub grid_points: usize,
    pub modes_requested: usize,
    pub trusted_modes: usize,
    pub stencil: String,
}

impl SpecEcho {
    pub fn new(spec: &OscillatorSpec, trusted: usize) -> Self {
        Self {
            n: spec.n,
            k: spec.k,
            l: spec.l,
            domain_half_width: spec.domain_half_width,
            grid_points: spec.grid_points,
            modes_requested: spec.modes,
            trusted_modes: trusted,
            stencil: format!("{:?}", spec.stencil),
        }
    }
}

/// Outcome of one verification test.
///
/// Every field except `runtime` is a deterministic function of the inputs,
/// so serialized reports are byte-identical across runs and thread counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub test_name: String,
    pub spec: SpecEcho,
    pub params: BTreeMap<String, serde_json::Value>,
    pub measurements: Vec<Measurement>,
    #[serde(default)]
    pub series: Vec<Series>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    pub fn new(test_name: impl Into<String>, spec: SpecEcho) -> Self {
        Self {
            test_name: test_name.into(),
            spec,
            params: BTreeMap::new(),
            measurements: Vec::new(),
            series: Vec::new(),
            notes: Vec::new(),
            verdict: Verdict::Pass,
            seed: None,
            runtime: Duration::ZERO,
        }
    }

    /// Records a parameter. Non-finite floats are stored as strings.
    pub fn param(&mut self, name: &str, value: impl Into<serde_json::Value>) -> &mut Self {
        let v = value.into();
        self.params.insert(name.to_string(), v);
        self
    }

    pub fn param_f64(&mut self, name: &str, value: f64) -> &mut Self {
        let v = if value.is_finite() {
            serde_json::Value::from(value)
        } else if value > 0.0 {
            "inf".into()
        } else {
            value.to_string().into()
        };
        self.params.insert(name.to_string(), v);
        self
    }

    pub fn measure(&mut self, m: Measurement) -> &mut Self {
        if m.pass == Some(false) {
            self.verdict = Verdict::Fail;
        }
        self.measurements.push(m);
        self
    }

    pub fn series(&mut self, name: impl Into<String>, points: Vec<(f64, f64)>) -> &mut Self {
        self.series.push(Series {
            name: name.into(),
            points,
        });
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn measurement(&self, name: &str) -> Option<&Measurement> {
        self.measurements.iter().find(|m| m.name == name)
    }

    /// Value of the named measurement; panics if absent.
    pub fn value(&self, name: &str) -> f64 {
        self.measurement(name)
            .unwrap_or_else(|| panic!("report {} has no measurement {name}", self.test_name))
            .value
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        let checks: Vec<String> = self
            .measurements
            .iter()
            .filter(|m| m.pass.is_some())
            .map(|m| format!("{}={:.6e}", m.name, m.value))
            .collect();
        format!(
            "{verdict} {} [{}] ({:.2}s)",
            self.test_name,
            checks.join(", "),
            self.runtime.as_secs_f64()
        )
    }
}

/// Path of the CSV written next to a report file: `<out>.series.csv`.
pub fn series_path(report_path: &Path) -> PathBuf {
    let mut s = report_path.as_os_str().to_owned();
    s.push(".series.csv");
    PathBuf::from(s)
}

/// Formats with 17 significant digits, enough to round-trip any `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `series,x,y` rows for every series of every report.
pub fn write_series_csv<W: Write>(reports: &[&VerificationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["series", "x", "y"]).map_err(io)?;
    for r in reports {
        for s in &r.series {
            let name = format!("{}/{}", r.test_name, s.name);
            for (x, y) in &s.points {
                w.write_record([name.as_str(), &format_f64(*x), &format_f64(*y)])
                    .map_err(io)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads back rows written by [`write_series_csv`].
pub fn read_series_csv<R: Read>(input: R) -> Result<Vec<(String, f64, f64)>> {
    let mut r = csv::Reader::from_reader(input);
    let bad = |m: String| Error::InvalidArgument(m);
    let headers = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["series", "x", "y"] {
        return Err(bad(format!("unexpected CSV header {headers:?}")));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| rec[i].parse::<f64>().map_err(|e| bad(format!("{e}: {:?}", &rec[i])));
        rows.push((rec[0].to_string(), num(1)?, num(2)?));
    }
    Ok(rows)
}

/// Writes the JSON report and, when it has series, the CSV beside it.
pub fn write_report_files(reports: &[&VerificationReport], path: &Path) -> Result<()> {
    let docs: Vec<&VerificationReport> = reports.to_vec();
    let mut text = serde_json::to_string_pretty(&docs).expect("reports always serialize");
    text.push('\n');
    std::fs::write(path, text)?;
    let file = std::fs::File::create(series_path(path))?;
    write_series_csv(reports, std::io::BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let spec = OscillatorSpec::new(1, 1, 10.0, 101, 10);
        let mut r = VerificationReport::new("demo", SpecEcho::new(&spec, 9));
        r.param("trials", 3).param_f64("q", f64::INFINITY);
        r.measure(Measurement::within("slope", 1.01, 1.0, 0.1));
        r.series("log-log", vec![(0.1, 1.0 / 3.0), (std::f64::consts::PI, -2.5e-300)]);
        r
    }

    #[test]
    fn verdict_tracks_failures() {
        let mut r = sample();
        assert!(r.passed());
        r.measure(Measurement::at_most("ratio", 2.0, 1.0));
        assert!(!r.passed());
        r.measure(Measurement::info("extra", -1.0));
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn json_round_trip_without_runtime() {
        let mut r = sample();
        r.runtime = Duration::from_millis(5);
        let text = r.to_json();
        assert!(!text.contains("runtime"));
        assert!(text.contains("\"testName\": \"demo\""));
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        r.runtime = Duration::ZERO;
        assert_eq!(back, r);
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let r = sample();
        let mut buf = Vec::new();
        write_series_csv(&[&r], &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("series,x,y\n"));
        let rows = read_series_csv(&buf[..]).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].1.to_bits(), 0.1f64.to_bits());
        assert_eq!(rows[0].2.to_bits(), (1.0f64 / 3.0).to_bits());
        assert_eq!(rows[1].2.to_bits(), (-2.5e-300f64).to_bits());
    }

    #[test]
    fn series_path_appends_suffix() {
        assert_eq!(
            series_path(Path::new("out/report.json")),
            PathBuf::from("out/report.json.series.csv")
        );
    }
}
