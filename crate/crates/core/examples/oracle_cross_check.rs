//! Compare the tracker against independent references: the closed form for
//! the square with a center point, the circuit number for circuits, and a
//! sampling lower bound on the minimum. Needs `--features dev-oracles`.

use copositive::oracles::{circuit_tstar, grid_min, square_tstar, SquareSupportCoeffs};
use copositive::geometry::LatticePoint;
use copositive::signomial::{parse_text, HeightFunction, Signomial};
use copositive::tracker::{solve_tstar_nonseparable, TrackerConfig};

fn tstar(f: &Signomial) -> copositive::Result<f64> {
    Ok(solve_tstar_nonseparable(f, &HeightFunction::uniform(f.support()), &TrackerConfig::default())?.t_star)
}

fn main() -> copositive::Result<()> {
    let c = SquareSupportCoeffs { c0: 0.5, c1: 2.0, c2: 3.0, c3: 1.5, c4: 5.0 };
    let f = parse_text(&c.to_text())?;
    let (_, closed) = square_tstar(&c);
    println!("square: tracked {:.15}, closed form {closed:.15}", tstar(&f)?);
    let (min, at) = grid_min(&f, &[(1e-3, 1e3); 2], 20_000, 7);
    println!("        sampled minimum {min:.6e} at {at:?}");

    let pos = vec![
        (LatticePoint(vec![0, 0]), 1.0),
        (LatticePoint(vec![6, 0]), 2.0),
        (LatticePoint(vec![0, 9]), 0.5),
    ];
    let neg = (LatticePoint(vec![2, 3]), 2.5);
    let g = parse_text("1 + 2*x1^6 + 0.5*x2^9 - 2.5*x1^2*x2^3")?;
    println!("circuit: tracked {:.15}, Theta/d {:.15}", tstar(&g)?, circuit_tstar(&pos, &neg)?);
    Ok(())
}
