//! Solves the step-data problem and prints the interface at a few times.
//! Pass `--csv` to dump the whole field as `t,x,u`.

use satflow::cli::scenario::step_data_problem;
use satflow::free_boundary::{extract, separation_margins};
use satflow::solver::{solve, Grid, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new((-1.0, 1.0), 201, (0.0, 1.0), 101)?;
    let u = solve(&step_data_problem(), &grid, &SolverConfig::for_grid(&grid))?;
    if std::env::args().any(|a| a == "--csv") {
        u.write_csv(&mut std::io::stdout().lock(), ["t", "x", "u"])?;
        return Ok(());
    }
    let curve = extract(&u);
    for k in (0..grid.nt()).step_by(20) {
        println!("t = {:.2}  r = {:+.5}", curve.times[k], curve.positions[k]);
    }
    let (d1, d2) = separation_margins(&curve, 0.5)?;
    println!("second half: r stays {d1:.4} right of -1 and {d2:.4} left of 1");
    Ok(())
}
