//! Both boundary values held at -1: the wet region shrinks and disappears in
//! finite time while u⁺ stays continuous in time.

use satflow::cli::scenario::collapse_problem;
use satflow::solver::{solve, Grid, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [101, 201, 401] {
        let grid = Grid::new((-1.0, 1.0), n, (0.0, 1.0), n)?;
        let u = solve(&collapse_problem(), &grid, &SolverConfig::for_grid(&grid))?;
        let dry = (0..n)
            .find(|&k| u.column(k).iter().all(|&v| v <= 0.0))
            .map(|k| grid.t(k));
        let mut jump: f64 = 0.0;
        for k in 1..n {
            for i in 0..n {
                jump = jump.max((u.at(i, k).max(0.0) - u.at(i, k - 1).max(0.0)).abs());
            }
        }
        println!("n = {n}: dry at t = {dry:?}, largest per-step change of u+ = {jump:.4}");
    }
    Ok(())
}
