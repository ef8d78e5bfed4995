//! Decide copositivity of one polynomial and print how the answer was reached.
//!
//! ```text
//! cargo run --example check_polynomial
//! cargo run --example check_polynomial -- "1 + x1^4 + x2^4 - 3*x1*x2"
//! ```

use copositive::decide::{check_copositivity, CheckOptions};
use copositive::signomial::{parse_text, HeightFunction};

fn main() -> copositive::Result<()> {
    let src = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "1 + x1^2 + x2^2 + x1^2*x2^2 - x1*x2".to_string());
    let f = parse_text(&src)?;
    let h = HeightFunction::uniform(f.support());
    let d = check_copositivity(&f, &h, &CheckOptions::default())?;

    println!("f              = {src}");
    println!("support        : {:?}", d.classification);
    println!("method         : {:?}", d.method);
    if let Some(t) = &d.track {
        println!("t*             = {:.15}", t.t_star);
        println!("minimizer x*   = {:?}", t.x_star);
        println!("path           : {} steps, {} Newton iterations", t.steps_taken, t.newton_iters_total);
    }
    if let Some(iv) = d.verdict.t_interval {
        println!("certified t*   in {iv}");
    }
    println!("verdict        : {:?} (certified: {})", d.verdict.kind, d.verdict.certified);
    for w in &d.warnings {
        println!("warning        : {w}");
    }
    Ok(())
}
