//! Traps the step-data solution between the traveling-wave subsolution and
//! the parabolic-interface supersolution.

use satflow::barriers::{verify_comparison, Supersolution, TravelingWave};
use satflow::cli::scenario::step_data_problem;
use satflow::solver::{solve, Grid, SolutionField, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = step_data_problem();
    let bounds = problem.bounds;
    let wave = TravelingWave::admissible(&bounds)?;
    println!("subsolution: eps = {}, K = {}", wave.eps(), wave.k());
    for n in [101, 201] {
        let grid = Grid::new((-1.0, 1.0), n, (0.0, 1.0), n)?;
        let u = solve(&problem, &grid, &SolverConfig::for_grid(&grid))?;
        let sup = Supersolution::admissible(bounds, &grid)?;
        let sub = SolutionField::from_fn(grid, |x, t| wave.eval(x, t - 1.0));
        let tol = 10.0 * (grid.dx().powi(2) + grid.dt()) * bounds.upper();
        println!(
            "n = {n}: supersolution eps = {} (flux {:.3} <= {:.3}); sub <= u {:?}; u <= sup {:?}",
            sup.eps,
            sup.max_flux,
            sup.flux_bound,
            verify_comparison(&sub, &u, tol)?,
            verify_comparison(&u, &sup.field, tol)?
        );
    }
    Ok(())
}
