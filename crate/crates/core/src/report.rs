//! Verifier reports and their JSON, CSV and text renderings.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// One evaluated inequality `lhs ≤ rhs`, with `margin = rhs − lhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub label: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Pass/fail record of one check. `pass` holds iff every margin is at least
/// `−tolerance` (and there is at least one sample).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifierReport {
    pub name: String,
    pub scenario: String,
    pub pass: bool,
    pub tolerance: f64,
    pub samples: Vec<SampleRecord>,
    pub worst: Option<SampleRecord>,
    pub quantities: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl VerifierReport {
    pub fn new(name: impl Into<String>, scenario: impl Into<String>, tolerance: f64) -> Self {
        VerifierReport {
            name: name.into(),
            scenario: scenario.into(),
            pass: false,
            tolerance,
            samples: Vec::new(),
            worst: None,
            quantities: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Record `lhs ≤ rhs`.
    pub fn record(&mut self, label: impl Into<String>, params: &[(&str, f64)], lhs: f64, rhs: f64) {
        let margin = if lhs.is_nan() || rhs.is_nan() { f64::NEG_INFINITY } else { rhs - lhs };
        let rec = SampleRecord {
            label: label.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs,
            rhs,
            margin,
        };
        if self.worst.as_ref().is_none_or(|w| margin < w.margin) {
            self.worst = Some(rec.clone());
        }
        self.samples.push(rec);
        self.pass = self.samples.iter().all(|s| s.margin >= -self.tolerance);
    }

    /// Record a computed value with no inequality attached (margin 0).
    pub fn observe(&mut self, label: impl Into<String>, params: &[(&str, f64)], value: f64) {
        self.record(label, params, value, value);
    }

    /// Record `|computed − expected| ≤ allowed`.
    pub fn expect(&mut self, label: impl Into<String>, params: &[(&str, f64)], computed: f64, expected: f64, allowed: f64) {
        let mut p: Vec<(&str, f64)> = params.to_vec();
        p.push(("computed", computed));
        p.push(("expected", expected));
        self.record(label, &p, (computed - expected).abs(), allowed);
    }

    pub fn quantity(&mut self, key: impl Into<String>, value: f64) {
        self.quantities.insert(key.into(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn worst_margin(&self) -> f64 {
        self.worst.as_ref().map_or(f64::NAN, |w| w.margin)
    }

    /// Largest `|margin|`, useful for equality cases.
    pub fn max_abs_margin(&self) -> f64 {
        self.samples.iter().map(|s| s.margin.abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypothesisRecord {
    pub kappa: i32,
    pub k: usize,
}

/// Top-level machine-readable report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub scenario: String,
    pub hypothesis: HypothesisRecord,
    pub checks: Vec<VerifierReport>,
    pub quantities: BTreeMap<String, f64>,
    pub timings: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Floats with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with every float at 17 significant digits (non-finite → null).
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_params(params: &BTreeMap<String, f64>) -> String {
    params.iter().map(|(k, v)| format!("{k}={}", format_f64(*v))).collect::<Vec<_>>().join(" ")
}

/// One row per sample plus one per quantity.
pub fn to_csv(report: &RunReport) -> String {
    let mut out = String::from("scenario,check,kind,label,params,lhs,rhs,margin,pass\n");
    for c in &report.checks {
        for s in &c.samples {
            out.push_str(&format!(
                "{},{},sample,{},{},{},{},{},{}\n",
                csv_field(&report.scenario),
                csv_field(&c.name),
                csv_field(&s.label),
                csv_field(&render_params(&s.params)),
                format_f64(s.lhs),
                format_f64(s.rhs),
                format_f64(s.margin),
                s.margin >= -c.tolerance
            ));
        }
        for (k, v) in &c.quantities {
            out.push_str(&format!(
                "{},{},quantity,{},,{},,,\n",
                csv_field(&report.scenario),
                csv_field(&c.name),
                csv_field(k),
                format_f64(*v)
            ));
        }
    }
    for (k, v) in &report.quantities {
        out.push_str(&format!("{},,quantity,{},,{},,,\n", csv_field(&report.scenario), csv_field(k), format_f64(*v)));
    }
    out
}

/// Human-readable summary.
pub fn to_text(report: &RunReport, verbose: bool) -> String {
    let mut out = format!(
        "focallab {}  scenario {}  (kappa = {}, k = {})\n",
        report.tool_version, report.scenario, report.hypothesis.kappa, report.hypothesis.k
    );
    for c in &report.checks {
        out.push_str(&format!(
            "{} {}  samples {}  worst margin {}  tolerance {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.samples.len(),
            format_f64(c.worst_margin()),
            format_f64(c.tolerance)
        ));
        if let Some(w) = &c.worst {
            out.push_str(&format!("    worst: {} [{}] lhs {} rhs {}\n", w.label, render_params(&w.params), format_f64(w.lhs), format_f64(w.rhs)));
        }
        for (k, v) in &c.quantities {
            out.push_str(&format!("    {k} = {}\n", format_f64(*v)));
        }
        for n in &c.notes {
            out.push_str(&format!("    note: {n}\n"));
        }
        if verbose {
            for s in &c.samples {
                out.push_str(&format!(
                    "      {} [{}] lhs {} rhs {} margin {}\n",
                    s.label,
                    render_params(&s.params),
                    format_f64(s.lhs),
                    format_f64(s.rhs),
                    format_f64(s.margin)
                ));
            }
        }
    }
    for (k, v) in &report.quantities {
        out.push_str(&format!("{k} = {}\n", format_f64(*v)));
    }
    if let Some(t) = &report.timings {
        for (k, v) in t {
            out.push_str(&format!("time {k} = {v:.3} s\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_and_worst_track_margins() {
        let mut r = VerifierReport::new("demo", "none", 1e-6);
        assert!(!r.pass);
        r.record("a", &[("t", 1.0)], 1.0, 2.0);
        assert!(r.pass);
        r.record("b", &[], 2.0, 2.0 - 5e-7);
        assert!(r.pass);
        assert_eq!(r.worst.as_ref().unwrap().label, "b");
        r.record("c", &[], f64::NAN, 0.0);
        assert!(!r.pass);
    }

    #[test]
    fn json_floats_round_trip() {
        let mut r = VerifierReport::new("demo", "none", 1e-6);
        let x = std::f64::consts::PI / 7.0;
        r.record("a", &[("t", x)], x, 0.1 + 0.2);
        r.quantity("nan", f64::NAN);
        let json = to_json(&r);
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["samples"][0]["lhs"].as_f64().unwrap(), x);
        assert_eq!(back["samples"][0]["rhs"].as_f64().unwrap(), 0.1 + 0.2);
        assert!(back["quantities"]["nan"].is_null());
        assert!(json.contains("4.4879895051282759e-1"));
    }

    #[test]
    fn csv_quotes_fields() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}
