//! Level-set coordinates of the step-data solution and the residual of
//! h_t = h_yy / h_y² under refinement.

use satflow::cli::scenario::step_data_problem;
use satflow::free_boundary::extract;
use satflow::hodograph::{admissible_level, residual_quasilinear, transform, Inversion};
use satflow::solver::{solve, Grid, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut previous: Option<f64> = None;
    for n in [101, 201, 401] {
        let grid = Grid::new((-1.0, 1.0), n, (0.0, 1.0), n)?;
        let u = solve(&step_data_problem(), &grid, &SolverConfig::for_grid(&grid))?;
        let a0 = admissible_level(&u, 0.5).ok_or("no monotone band")?;
        let h = transform(&u, &extract(&u), a0, Inversion::Cubic)?;
        let res = residual_quasilinear(&h)?;
        match previous {
            Some(p) => println!("n = {n}: residual {res:.3e} (reduction {:.2})", p / res),
            None => println!("n = {n}: residual {res:.3e}"),
        }
        previous = Some(res);
    }
    Ok(())
}
