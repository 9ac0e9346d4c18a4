//! Lift the critical points of the flag3 potential with twist m = 1.

use fpk_core::fibration::{second_order_potential, FibrationSpec};
use fpk_core::solver::{solve_scenario, SolveOptions};
use fpk_core::toric::Truncation;
use fpk_core::{BigRational, Exact};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let half = BigRational::new(1.into(), 2.into());
    let spec = FibrationSpec::flag3(1, half, BigRational::from_integer(1.into()))?;
    let assembled = second_order_potential::<Exact>(&spec, &Truncation::new(BigRational::from_integer(4.into())))?;
    let w = assembled.potential.collapse();
    let solve = solve_scenario(&w, &SolveOptions::default())?;
    for r in &solve.reports {
        let angles: Vec<String> = r.seed.angles.iter().map(ToString::to_string).collect();
        println!("seed angles ({}) -> {}", angles.join(", "), r.verdict.as_str());
    }
    Ok(())
}
