use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::CliError;

pub const MANIFEST_NAME: &str = "manifest.txt";

/// How invariant failures affect the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckMode {
    /// Any failed check exits with status 1.
    Strict,
    /// Failed checks are recorded but the run exits with 0.
    Report,
}

impl CheckMode {
    fn as_str(&self) -> &'static str {
        match self {
            CheckMode::Strict => "strict",
            CheckMode::Report => "report",
        }
    }
}

/// Outcome of one invariant check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Record of a completed run: what was run, how long each stage took, every
/// file written and every check.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub scenario: String,
    pub experiment: String,
    pub check_mode: CheckMode,
    pub out_dir: PathBuf,
    /// Stage name and wall time in seconds.
    pub timings: Vec<(String, f64)>,
    /// File names relative to `out_dir`, sorted.
    pub files: Vec<String>,
    pub checks: Vec<Check>,
}

impl RunManifest {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn path(&self) -> PathBuf {
        self.out_dir.join(MANIFEST_NAME)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("# satflow run manifest\n");
        let _ = writeln!(s, "scenario = {}", self.scenario);
        let _ = writeln!(s, "experiment = {}", self.experiment);
        let _ = writeln!(s, "check = {}", self.check_mode.as_str());
        let _ = writeln!(s, "status = {}", if self.passed() { "pass" } else { "fail" });
        s.push_str("\n[timings]\n");
        for (k, v) in &self.timings {
            let _ = writeln!(s, "{k} = {v:.6}");
        }
        s.push_str("\n[files]\n");
        for f in &self.files {
            let _ = writeln!(s, "{f}");
        }
        s.push_str("\n[checks]\n");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{} = {} ; {}",
                c.name,
                if c.passed { "pass" } else { "fail" },
                c.detail
            );
        }
        s
    }

    pub fn parse(text: &str, out_dir: &Path) -> Result<Self, CliError> {
        let mut m = RunManifest {
            scenario: String::new(),
            experiment: String::new(),
            check_mode: CheckMode::Strict,
            out_dir: out_dir.to_path_buf(),
            timings: Vec::new(),
            files: Vec::new(),
            checks: Vec::new(),
        };
        let bad = |line: usize, msg: &str| CliError::Config(format!("manifest line {}: {msg}", line + 1));
        let mut section = "";
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = match name {
                    "timings" => "timings",
                    "files" => "files",
                    "checks" => "checks",
                    _ => return Err(bad(n, "unknown section")),
                };
                continue;
            }
            if section == "files" {
                m.files.push(line.to_string());
                continue;
            }
            let (key, value) = line.split_once(" = ").ok_or_else(|| bad(n, "expected `key = value`"))?;
            match section {
                "" => match key {
                    "scenario" => m.scenario = value.to_string(),
                    "experiment" => m.experiment = value.to_string(),
                    "check" => {
                        m.check_mode = match value {
                            "strict" => CheckMode::Strict,
                            "report" => CheckMode::Report,
                            _ => return Err(bad(n, "unknown check mode")),
                        }
                    }
                    "status" => {}
                    _ => return Err(bad(n, "unknown key")),
                },
                "timings" => {
                    let v = value.parse().map_err(|_| bad(n, "timing is not a number"))?;
                    m.timings.push((key.to_string(), v));
                }
                _ => {
                    let (flag, detail) = value.split_once(';').unwrap_or((value, ""));
                    let passed = match flag.trim() {
                        "pass" => true,
                        "fail" => false,
                        _ => return Err(bad(n, "check must be `pass` or `fail`")),
                    };
                    m.checks.push(Check::new(key, passed, detail.trim()));
                }
            }
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read manifest {}: {e}", path.display())))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &dir)
    }

    pub fn write(&self) -> Result<(), CliError> {
        std::fs::write(self.path(), self.to_text())
            .map_err(|e| CliError::Output(format!("{}: {e}", self.path().display())))
    }

    /// Adds `name` to the file list, keeping it sorted and unique.
    pub fn record_file(&mut self, name: &str) {
        if let Err(at) = self.files.binary_search_by(|f| f.as_str().cmp(name)) {
            self.files.insert(at, name.to_string());
        }
    }
}
