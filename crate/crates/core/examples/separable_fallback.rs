//! Separable supports have no single-path guarantee. The multistart fallback
//! searches the faces that meet the negative terms and can only ever prove
//! `NotCopositive`; anything else comes back flagged as non-exhaustive.

use copositive::decide::{check_copositivity, CheckOptions};
use copositive::signomial::{parse_text, HeightFunction};

fn main() -> copositive::Result<()> {
    let cases = [
        "1 + x1^4 + x2^4 + x1^4*x2^4 - 3*x1*x2 - 3*x1^3*x2^3",
        "1 + x1^4 + x2^4 + x1^4*x2^4 - x1*x2 - x1^3*x2^3",
        "1 + x1^4*x2^2 + x1^2*x2^4 + 900*x1^2*x2^2 + 2*x1^2*x2 + 2*x1*x2^2 + 2*x1^3*x2^3 \
         - 60*x1*x2 - 60*x1^3*x2^2 - 60*x1^2*x2^3",
    ];
    for src in cases {
        let f = parse_text(src)?;
        let d = check_copositivity(&f, &HeightFunction::uniform(f.support()), &CheckOptions::default())?;
        println!("{src}");
        println!("  {:?} via {:?}, {} candidate(s)", d.verdict.kind, d.method, d.fallback.len());
        for c in d.fallback.iter().take(3) {
            println!("    face {} at t = {:.9}", c.face, c.t);
        }
        for w in &d.warnings {
            println!("  {w}");
        }
    }
    Ok(())
}
