//! Verification records and their renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ReportOnly,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ReportOnly => "report-only",
        }
    }
}

/// A parameter value; integers sort numerically, text lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Text(String),
}

impl From<i64> for Param {
    fn from(v: i64) -> Param {
        Param::Int(v)
    }
}

impl From<u64> for Param {
    fn from(v: u64) -> Param {
        Param::Int(v as i64)
    }
}

impl From<u32> for Param {
    fn from(v: u32) -> Param {
        Param::Int(v as i64)
    }
}

impl From<usize> for Param {
    fn from(v: usize) -> Param {
        Param::Int(v as i64)
    }
}

impl From<&str> for Param {
    fn from(v: &str) -> Param {
        Param::Text(v.to_string())
    }
}

impl From<String> for Param {
    fn from(v: String) -> Param {
        Param::Text(v)
    }
}

impl std::fmt::Display for Param {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Param::Int(v) => write!(f, "{v}"),
            Param::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRecord {
    pub check: String,
    pub params: BTreeMap<String, Param>,
    pub status: Status,
    pub witness: String,
}

impl VerificationRecord {
    /// Fail records always carry a witness; `witness` must be non-empty then.
    pub fn new(check: &str, status: Status, witness: impl Into<String>) -> VerificationRecord {
        let witness = witness.into();
        assert!(status != Status::Fail || !witness.is_empty(), "fail record without witness");
        VerificationRecord {
            check: check.to_string(),
            params: BTreeMap::new(),
            status,
            witness,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Param>) -> VerificationRecord {
        self.params.insert(key.to_string(), value.into());
        self
    }

    fn sort_key(&self) -> (&str, Vec<(&String, &Param)>) {
        (&self.check, self.params.iter().collect())
    }
}

/// Records of one suite, in canonical order.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub records: Vec<VerificationRecord>,
}

impl SuiteResult {
    pub fn new(suite: &str, mut records: Vec<VerificationRecord>) -> SuiteResult {
        records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        SuiteResult {
            suite: suite.to_string(),
            records,
        }
    }

    pub fn failed(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub report_only: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: BTreeMap<String, Param>,
    pub summary: Summary,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn new(config: BTreeMap<String, Param>, suites: Vec<SuiteResult>) -> Report {
        let tally = |s| suites.iter().map(|x| x.count(s)).sum();
        Report {
            tool: "zetaforge",
            version: env!("CARGO_PKG_VERSION"),
            config,
            summary: Summary {
                pass: tally(Status::Pass),
                fail: tally(Status::Fail),
                report_only: tally(Status::ReportOnly),
            },
            suites,
        }
    }

    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }
}

fn params_text(params: &BTreeMap<String, Param>) -> String {
    params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

/// One JSON object per line.
pub fn json_lines(suite: &SuiteResult) -> String {
    let mut out = String::new();
    for r in &suite.records {
        let line = serde_json::json!({
            "suite": suite.suite,
            "check": r.check,
            "params": r.params,
            "status": r.status,
            "witness": r.witness,
        });
        writeln!(out, "{line}").expect("string write");
    }
    out
}

pub fn csv_rows(suites: &[SuiteResult]) -> String {
    let quote = |s: &str| {
        if s.contains([',', '"', '\n']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    };
    let mut out = String::from("suite,check,params,status,witness\n");
    for s in suites {
        for r in &s.records {
            writeln!(
                out,
                "{},{},{},{},{}",
                quote(&s.suite),
                quote(&r.check),
                quote(&params_text(&r.params)),
                r.status.as_str(),
                quote(&r.witness)
            )
            .expect("string write");
        }
    }
    out
}

pub fn text_table(suites: &[SuiteResult]) -> String {
    let mut out = String::new();
    for s in suites {
        writeln!(out, "== {} ({} pass, {} fail, {} report-only)", s.suite, s.count(Status::Pass), s.count(Status::Fail), s.count(Status::ReportOnly)).expect("string write");
        for r in &s.records {
            let mut line = format!("  {:<11} {:<28} {}", r.status.as_str(), r.check, params_text(&r.params));
            if !r.witness.is_empty() {
                let w: String = r.witness.chars().take(100).collect();
                let ellipsis = if r.witness.chars().count() > 100 { "..." } else { "" };
                write!(line, "  [{w}{ellipsis}]").expect("string write");
            }
            writeln!(out, "{}", line.trim_end()).expect("string write");
        }
    }
    out
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "zetaforge {} replication report: {} pass, {} fail, {} report-only\n",
            self.version, self.summary.pass, self.summary.fail, self.summary.report_only
        );
        out.push_str(&text_table(&self.suites));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_numeric_then_text() {
        let recs = vec![
            VerificationRecord::new("c", Status::Pass, "").param("r", 10u32),
            VerificationRecord::new("c", Status::Pass, "").param("r", 2u32),
            VerificationRecord::new("b", Status::Pass, "").param("r", 3u32),
        ];
        let s = SuiteResult::new("x", recs);
        let order: Vec<String> = s.records.iter().map(|r| format!("{}{}", r.check, r.params["r"])).collect();
        assert_eq!(order, ["b3", "c2", "c10"]);
    }

    #[test]
    #[should_panic(expected = "witness")]
    fn fail_needs_witness() {
        VerificationRecord::new("c", Status::Fail, "");
    }

    #[test]
    fn renderings() {
        let s = SuiteResult::new(
            "x",
            vec![
                VerificationRecord::new("c", Status::Fail, "(1)/(2)").param("q", 4u64),
                VerificationRecord::new("d", Status::ReportOnly, "a,b").param("q", 4u64),
            ],
        );
        assert!(s.failed());
        let jl = json_lines(&s);
        let first: serde_json::Value = serde_json::from_str(jl.lines().next().unwrap()).unwrap();
        assert_eq!(first["status"], "fail");
        assert_eq!(first["params"]["q"], 4);
        let csv = csv_rows(std::slice::from_ref(&s));
        assert!(csv.contains("report-only,\"a,b\""));
        assert!(text_table(&[s]).contains("1 fail"));
    }
}
