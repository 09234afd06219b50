//! Drives an experiment from a config string, as the `satflow run` command
//! does, and lists the run directory.

use std::path::Path;

use satflow::cli::{emit_plotdata, run, CheckMode, ExperimentConfig};

const CONFIG: &str = r#"
scenario = "step-data"
experiment = "regularity-sweep"

[ladder.1]
nx = 101
nt = 51

[ladder.2]
nx = 201
nt = 101
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("satflow-run-config-example");
    let cfg = ExperimentConfig::parse(CONFIG, Path::new("."))?;
    let manifest = run(&cfg, &dir, CheckMode::Report)?;
    emit_plotdata(&manifest.path())?;
    print!("{}", std::fs::read_to_string(manifest.path())?);
    Ok(())
}
