//! Build a SONC certificate for a copositive polynomial, check it
//! independently, and print it as JSON.

use copositive::signomial::{parse_text, HeightFunction};
use copositive::sonc::{circuit_number, sonc_certificate, verify_certificate};
use copositive::tracker::TrackerConfig;

fn main() -> copositive::Result<()> {
    let src = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "0.7 + 2.5*x1^2 + 1.3*x2^2 + 0.4*x1^2*x2^2 - 3.6*x1*x2".to_string());
    let f = parse_text(&src)?;
    let cert = sonc_certificate(&f, &HeightFunction::uniform(f.support()), &TrackerConfig::default())?;

    println!("f = {src}");
    for (k, q) in cert.circuits.iter().enumerate() {
        let plus: Vec<String> = q.positive.iter().map(|(e, c)| format!("{c:.6} x^{e}")).collect();
        match &q.negative {
            Some((e, d)) => println!(
                "circuit {k}: {} - {d:.6} x^{e}   (Theta = {:.6})",
                plus.join(" + "),
                circuit_number(q)?
            ),
            None => println!("monomial {k}: {}", plus.join(" + ")),
        }
    }

    let report = verify_certificate(&cert);
    println!("verification: pass = {}, residual = {:.2e}", report.pass, report.residual);
    println!("{}", serde_json::to_string_pretty(&cert.to_json()).expect("certificate serializes"));
    Ok(())
}
