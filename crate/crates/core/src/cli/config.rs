use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CliError;

/// A parsed experiment file.
///
/// The file is TOML with top-level `scenario` (and optionally `experiment`
/// and `out`) followed by the sections `[grid]`, `[solver]`, `[data]`,
/// `[measure]` and any number of `[ladder.N]` entries.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub data: DataSection,
    #[serde(default)]
    pub measure: MeasureSection,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ladder: BTreeMap<String, LadderEntry>,
    /// Directory that relative data paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub nx: Option<usize>,
    pub nt: Option<usize>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub newton_tol: Option<f64>,
    pub newton_max_iter: Option<u32>,
    pub regularization_n: Option<u32>,
    pub mollify_epsilon: Option<f64>,
}

/// A data function given either as a constant or as a path to a knot file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DataSpec {
    Constant(f64),
    File(PathBuf),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub left: Option<DataSpec>,
    pub right: Option<DataSpec>,
    /// Initial moisture content.
    pub initial: Option<DataSpec>,
    /// Initial potential; takes precedence over `initial`.
    pub potential: Option<DataSpec>,
    /// Skip the sign and amplitude checks on the data.
    pub allow_any: Option<bool>,
    /// Starting `δ` of the optimality experiment.
    pub delta: Option<f64>,
    pub picard_schedule: Option<Vec<u32>>,
    /// Append a fixed-point stage without time cut-off.
    pub limit_stage: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSection {
    pub rho: Option<f64>,
    pub min_gap: Option<f64>,
    pub energy_radius: Option<f64>,
}

/// One refinement level: grid sizes, regularization index and mollifier width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderEntry {
    pub nx: usize,
    pub nt: usize,
    pub n: Option<u32>,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Stationary,
    StepData,
    Collapse,
    BarrierSandwich,
    Optimality,
    Custom,
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "stationary" => Scenario::Stationary,
            "step-data" => Scenario::StepData,
            "collapse" => Scenario::Collapse,
            "barrier-sandwich" => Scenario::BarrierSandwich,
            "optimality" => Scenario::Optimality,
            "custom" => Scenario::Custom,
            other => return Err(CliError::Config(format!("unknown scenario `{other}`"))),
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Stationary => "stationary",
            Scenario::StepData => "step-data",
            Scenario::Collapse => "collapse",
            Scenario::BarrierSandwich => "barrier-sandwich",
            Scenario::Optimality => "optimality",
            Scenario::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Simulate,
    Barriers,
    Optimality,
    RegularitySweep,
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "simulate" => Experiment::Simulate,
            "barriers" => Experiment::Barriers,
            "optimality" => Experiment::Optimality,
            "regularity-sweep" => Experiment::RegularitySweep,
            other => return Err(CliError::Config(format!("unknown experiment `{other}`"))),
        })
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Simulate => "simulate",
            Experiment::Barriers => "barriers",
            Experiment::Optimality => "optimality",
            Experiment::RegularitySweep => "regularity-sweep",
        })
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, CliError> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    /// Canonical TOML form, written next to the run outputs.
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        self.scenario.parse()
    }

    /// The experiment named in the file, or the scenario's natural one.
    pub fn experiment(&self) -> Result<Experiment, CliError> {
        if let Some(e) = &self.experiment {
            return e.parse();
        }
        Ok(match self.scenario()? {
            Scenario::BarrierSandwich => Experiment::Barriers,
            Scenario::Optimality => Experiment::Optimality,
            Scenario::StepData if !self.ladder.is_empty() => Experiment::RegularitySweep,
            _ => Experiment::Simulate,
        })
    }

    /// Ladder entries ordered by their numeric key.
    pub fn ladder_entries(&self) -> Result<Vec<LadderEntry>, CliError> {
        let mut keyed = Vec::with_capacity(self.ladder.len());
        for (k, e) in &self.ladder {
            let idx: u32 = k
                .parse()
                .map_err(|_| CliError::Config(format!("ladder key `{k}` is not an integer")))?;
            keyed.push((idx, *e));
        }
        keyed.sort_by_key(|(k, _)| *k);
        Ok(keyed.into_iter().map(|(_, e)| e).collect())
    }

    fn validate(&self) -> Result<(), CliError> {
        let scenario = self.scenario()?;
        let experiment = self.experiment()?;
        let ok = match experiment {
            Experiment::Simulate => !matches!(scenario, Scenario::Optimality | Scenario::BarrierSandwich),
            Experiment::RegularitySweep => !matches!(scenario, Scenario::Optimality),
            Experiment::Barriers => scenario == Scenario::BarrierSandwich,
            Experiment::Optimality => scenario == Scenario::Optimality,
        };
        if !ok {
            return Err(CliError::Config(format!(
                "experiment `{experiment}` does not apply to scenario `{scenario}`"
            )));
        }
        let d = &self.data;
        let has_problem_data = d.lower.is_some()
            || d.upper.is_some()
            || d.left.is_some()
            || d.right.is_some()
            || d.initial.is_some()
            || d.potential.is_some()
            || d.allow_any.is_some();
        if scenario == Scenario::Custom {
            if d.left.is_none() || d.right.is_none() || (d.initial.is_none() && d.potential.is_none()) {
                return Err(CliError::Config(
                    "custom scenario needs data.left, data.right and data.initial or data.potential".into(),
                ));
            }
        } else if has_problem_data {
            return Err(CliError::Config(format!(
                "boundary and initial data are built into scenario `{scenario}`"
            )));
        }
        let opt_keys = d.delta.is_some() || d.picard_schedule.is_some() || d.limit_stage.is_some();
        if opt_keys && scenario != Scenario::Optimality {
            return Err(CliError::Config(
                "delta and picard keys only apply to `optimality`".into(),
            ));
        }
        if let Some(delta) = d.delta {
            if !(delta > 0.0 && delta < 0.5) {
                return Err(CliError::Config(format!("delta = {delta} outside (0, 1/2)")));
            }
        }
        if let Some(s) = &d.picard_schedule {
            if s.is_empty() || s.contains(&0) {
                return Err(CliError::Config("picard_schedule needs positive entries".into()));
            }
        }
        let entries = self.ladder_entries()?;
        for w in entries.windows(2) {
            let (a, b) = (w[0], w[1]);
            let refines = b.nx >= a.nx
                && b.nt >= a.nt
                && match (a.n, b.n) {
                    (Some(p), Some(q)) => q >= p,
                    _ => true,
                }
                && match (a.epsilon, b.epsilon) {
                    (Some(p), Some(q)) => q <= p,
                    _ => true,
                };
            if !refines {
                return Err(CliError::Config(format!(
                    "ladder entry nx = {} does not refine nx = {}",
                    b.nx, a.nx
                )));
            }
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
        ExperimentConfig::parse(text, Path::new("."))
    }

    #[test]
    fn minimal_and_defaults() {
        let c = parse("scenario = \"stationary\"\n").unwrap();
        assert_eq!(c.scenario().unwrap(), Scenario::Stationary);
        assert_eq!(c.experiment().unwrap(), Experiment::Simulate);
        let c =
            parse("scenario = \"step-data\"\n[ladder.1]\nnx = 101\nnt = 51\n[ladder.2]\nnx = 201\nnt = 101\n").unwrap();
        assert_eq!(c.experiment().unwrap(), Experiment::RegularitySweep);
        assert_eq!(c.ladder_entries().unwrap()[1].nx, 201);
    }

    #[test]
    fn ladder_ordering_is_numeric() {
        let c = parse("scenario = \"step-data\"\n[ladder.10]\nnx = 401\nnt = 201\n[ladder.2]\nnx = 201\nnt = 101\n")
            .unwrap();
        let nx: Vec<usize> = c.ladder_entries().unwrap().iter().map(|e| e.nx).collect();
        assert_eq!(nx, vec![201, 401]);
    }

    #[test]
    fn rejections() {
        assert!(parse("scenario = \"nope\"\n").is_err());
        assert!(parse("scenario = \"stationary\"\nbogus = 1\n").is_err());
        assert!(parse("scenario = \"stationary\"\n[data]\nleft = -1.0\n").is_err());
        assert!(parse("scenario = \"optimality\"\nexperiment = \"simulate\"\n").is_err());
        assert!(parse("scenario = \"optimality\"\n[data]\ndelta = 0.7\n").is_err());
        assert!(parse("scenario = \"custom\"\n[data]\nleft = -1.0\n").is_err());
        let coarsening = "scenario = \"step-data\"\n[ladder.1]\nnx = 201\nnt = 101\n[ladder.2]\nnx = 101\nnt = 101\n";
        assert!(parse(coarsening).is_err());
        let eps_up = "scenario = \"step-data\"\n[ladder.1]\nnx = 101\nnt = 51\nepsilon = 0.01\n[ladder.2]\nnx = 201\nnt = 101\nepsilon = 0.02\n";
        assert!(parse(eps_up).is_err());
    }

    #[test]
    fn data_specs_and_round_trip() {
        let c = parse(
            "scenario = \"custom\"\n[data]\nlower = 1.0\nupper = 2.0\nleft = -1.0\nright = \"g.txt\"\ninitial = \"v0.txt\"\n",
        )
        .unwrap();
        assert_eq!(c.data.left, Some(DataSpec::Constant(-1.0)));
        assert_eq!(c.data.right, Some(DataSpec::File("g.txt".into())));
        let again = parse(&c.to_text()).unwrap();
        assert_eq!(again, c);
    }
}
