use std::fmt::Write as _;
use std::path::Path;

use crate::free_boundary::{scaling_exponent, FreeBoundaryCurve};
use crate::solver::format_number;

use super::manifest::RunManifest;
use super::CliError;

fn read(dir: &Path, name: &str) -> Result<String, CliError> {
    std::fs::read_to_string(dir.join(name)).map_err(|e| CliError::Config(format!("missing artifact {name}: {e}")))
}

fn parse_interface(text: &str) -> Result<FreeBoundaryCurve, CliError> {
    let mut times = Vec::new();
    let mut positions = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let bad = || CliError::Config(format!("interface line {}: malformed row", n + 1));
        if cells.len() != 3 {
            return Err(bad());
        }
        let t: f64 = cells[0].parse().map_err(|_| bad())?;
        let r: f64 = cells[1].parse().map_err(|_| bad())?;
        times.push(t);
        positions.push(if cells[2] == "1" { r } else { f64::NAN });
    }
    Ok(FreeBoundaryCurve::from_samples(times, positions))
}

// The interface of the finest level when a sweep wrote several.
fn interface_file(m: &RunManifest) -> Option<String> {
    if m.files.iter().any(|f| f == "interface.csv") {
        return Some("interface.csv".into());
    }
    m.files
        .iter()
        .filter_map(|f| {
            let nx: usize = f.strip_prefix("interface_nx")?.strip_suffix(".csv")?.parse().ok()?;
            Some((nx, f.clone()))
        })
        .max()
        .map(|(_, f)| f)
}

fn interface_dat(c: &FreeBoundaryCurve) -> String {
    let mut s = String::from("# t r\n");
    for (t, r) in c.valid_samples() {
        let _ = writeln!(s, "{} {}", format_number(t), format_number(r));
    }
    s
}

fn scaling_dat(c: &FreeBoundaryCurve) -> String {
    let mut pts = c.valid_samples();
    let Some((t0, r0)) = pts.next() else {
        return "# slope unavailable: no interface samples\n".into();
    };
    let mut s = match scaling_exponent(c, t0) {
        Ok((slope, r2)) => format!("# slope = {} r2 = {}\n", format_number(slope), format_number(r2)),
        Err(e) => format!("# slope unavailable: {e}\n"),
    };
    s.push_str(&format!(
        "# origin t = {} r = {}\n# log(t) log|r|\n",
        format_number(t0),
        format_number(r0)
    ));
    for (t, r) in pts {
        if (r - r0).abs() > 0.0 {
            let _ = writeln!(
                s,
                "{} {}",
                format_number((t - t0).ln()),
                format_number((r - r0).abs().ln())
            );
        }
    }
    s
}

fn refinement_dat(csv: &str) -> Result<String, CliError> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let wanted = ["nx", "L", "M", "N", "K", "delta1", "delta2", "energy_ratio"];
    let idx: Vec<usize> = wanted
        .iter()
        .map(|w| {
            header
                .iter()
                .position(|h| h == w)
                .ok_or_else(|| CliError::Config(format!("refinement table lacks column {w}")))
        })
        .collect::<Result<_, _>>()?;
    let mut s = format!("# {}\n", wanted.join(" "));
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let row: Vec<&str> = idx.iter().map(|&i| cells.get(i).copied().unwrap_or("nan")).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    Ok(s)
}

/// Writes gnuplot-ready `.dat` files next to a finished run and adds them to
/// its manifest. Returns the names written.
pub fn emit_plotdata(manifest_path: &Path) -> Result<Vec<String>, CliError> {
    let mut m = RunManifest::load(manifest_path)?;
    let dir = m.out_dir.clone();
    let source = interface_file(&m).ok_or_else(|| CliError::Config("run has no interface file".into()))?;
    let curve = parse_interface(&read(&dir, &source)?)?;
    let mut outputs = vec![
        ("interface.dat".to_string(), interface_dat(&curve)),
        ("scaling.dat".to_string(), scaling_dat(&curve)),
    ];
    if m.files.iter().any(|f| f == "refinement.csv") {
        outputs.push(("refinement.dat".into(), refinement_dat(&read(&dir, "refinement.csv")?)?));
    }
    let mut names = Vec::new();
    for (name, text) in outputs {
        std::fs::write(dir.join(&name), text).map_err(|e| CliError::Output(format!("{name}: {e}")))?;
        m.record_file(&name);
        names.push(name);
    }
    m.write()?;
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_curve_scaling_file() {
        let times: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
        let c = FreeBoundaryCurve::from_fn(&times, |t| -0.3 * t.sqrt());
        let s = scaling_dat(&c);
        let first = s.lines().next().unwrap();
        let slope: f64 = first.split(' ').nth(3).unwrap().parse().unwrap();
        assert!((slope - 0.5).abs() < 1e-12, "{first}");
        assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 20);
        let row: Vec<f64> = s
            .lines()
            .nth(3)
            .unwrap()
            .split(' ')
            .map(|v| v.parse().unwrap())
            .collect();
        assert!((row[0] - (0.05f64).ln()).abs() < 1e-12);
        assert!((row[1] - (0.3 * 0.05f64.sqrt()).ln()).abs() < 1e-12);
    }

    #[test]
    fn interface_round_trip_skips_invalid() {
        let c = FreeBoundaryCurve::from_samples(vec![0.0, 0.5, 1.0], vec![0.1, f64::NAN, 0.3]);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let back = parse_interface(std::str::from_utf8(&buf).unwrap()).unwrap();
        let dat = interface_dat(&back);
        assert_eq!(dat.lines().count(), 3);
        let row: Vec<f64> = dat
            .lines()
            .nth(2)
            .unwrap()
            .split(' ')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(row, vec![1.0, 0.3]);
    }

    #[test]
    fn refinement_columns() {
        let csv = "nx,nt,n,epsilon,L,M,T_half,N,rho0,K,delta1,delta2,energy_ratio\n101,51,101,0.04,1,2,3,4,5,6,7,8,9\n";
        let dat = refinement_dat(csv).unwrap();
        assert_eq!(dat.lines().nth(1).unwrap(), "101 1 2 4 6 7 8 9");
        assert!(refinement_dat("nx,L\n1,2\n").is_err());
    }
}
