//! Regularity constants of the step-data solution along a refinement ladder.

use satflow::cli::scenario::step_data_problem;
use satflow::regularity::{measure, MeasureSpec, RegularityReport};
use satflow::solver::{solve, Grid, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("nx,{}", RegularityReport::CSV_HEADER);
    for nx in [101, 201, 401] {
        let grid = Grid::new((-1.0, 1.0), nx, (0.0, 1.0), (nx - 1) / 2 + 1)?;
        let u = solve(&step_data_problem(), &grid, &SolverConfig::for_grid(&grid))?;
        let spec = MeasureSpec {
            rho: 0.05,
            ..MeasureSpec::for_field(&u)
        };
        println!("{nx},{}", measure(&u, &spec)?.csv_row());
    }
    Ok(())
}
