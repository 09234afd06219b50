//! Closed-form heat evolution of the cone |x| against a numerical solve on
//! [-8, 8].

use std::f64::consts::PI;

use satflow::cli::scenario::cone_problem;
use satflow::solver::{heat_cone_solution, solve, Grid, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = PI / 4.0;
    println!(
        "closed form at the apex: {}",
        heat_cone_solution(0.0, 1.0, 0.0, 0.0, 0.0, t)?
    );
    for n in [201, 401, 801] {
        let grid = Grid::new((-8.0, 8.0), n, (0.0, t), n)?;
        let u = solve(&cone_problem(8.0, t), &grid, &SolverConfig::for_grid(&grid))?;
        let centre = u.at(n / 2, n - 1);
        println!(
            "nx = nt = {n:<4} apex value {centre:.6}  relative error {:.2e}",
            (centre - 1.0).abs()
        );
    }
    Ok(())
}
