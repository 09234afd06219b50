//! The Neumann problem in level-set coordinates, solved by Newton and by the
//! cut-off fixed-point iteration, then mapped back to a free boundary pair.

use satflow::hodograph::{back_transform, solve_optimality, OptimalityProblem, Strategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = OptimalityProblem::new(0.1, 201, 201)?;
    let newton = solve_optimality(&p)?;
    print!("{}", newton.summary()?.to_kv());

    let picard = solve_optimality(&p.clone().with_strategy(Strategy::PicardTj {
        schedule: vec![8, 16, 32],
        limit_stage: true,
    }))?;
    for s in &picard.stages {
        println!("stage j = {:?}: {} sweeps, drift {:?}", s.j, s.sweeps, s.drift);
    }
    let gap = newton
        .v
        .values()
        .iter()
        .zip(picard.v.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("Newton vs last fixed-point stage: {gap:.2e}");

    let (u, r) = back_transform(&newton.v, newton.delta)?;
    let g = u.grid();
    println!(
        "reconstructed u on [{:.3}, {:.3}], r(1) = {:.5}",
        g.x_min(),
        g.x_max(),
        r.positions[r.len() - 1]
    );
    Ok(())
}
