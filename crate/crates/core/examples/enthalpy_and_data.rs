//! The regularized enthalpy family, data mollification and the admissibility
//! scan on boundary and initial data.

use satflow::model::{
    mollify, validate_hypotheses, BoundaryData, DataBounds, DataFunction, Enthalpy, InitialData, Mollifier, Piecewise,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("s        c(s)     c_4(s)   c_64(s)");
    for s in [-1.0, -0.25, -0.05, 0.0, 0.5] {
        let c4 = Enthalpy::regularized(4)?;
        let c64 = Enthalpy::regularized(64)?;
        println!(
            "{s:<8} {:<8.4} {:<8.4} {:<8.4}",
            Enthalpy::PositivePart.value(s),
            c4.value(s),
            c64.value(s)
        );
    }

    let step: DataFunction = Piecewise::step(-1.0, 0.0, 1.0, 0.0, 1.0)?.into();
    let m = Mollifier::new(0.1)?;
    println!("\nmollified moisture step, eps = 0.1");
    for x in [-0.15, -0.05, 0.0, 0.05, 0.15] {
        println!("  v0_eps({x:>5}) = {:.6}", mollify(&step, &m, x)?);
    }

    let bounds = DataBounds::new(1.0, 2.0)?;
    let good = BoundaryData::constant(-1.5, 1.5, (0.0, 1.0));
    let bad = BoundaryData::constant(-1.5, 2.5, (0.0, 1.0));
    let init = InitialData::from_moisture(step);
    println!("\nadmissible data: {}", validate_hypotheses(&good, &init, &bounds));
    println!("right data too large: {}", validate_hypotheses(&bad, &init, &bounds));
    Ok(())
}
