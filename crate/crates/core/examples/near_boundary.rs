//! A four-variable circuit whose copositivity threshold is known exactly.
//! Pushing the negative coefficient past it by `eps` leaves `t*` within
//! about `eps` of 1; the interval certificate still separates it.

use copositive::decide::{check_copositivity, CheckOptions};
use copositive::signomial::{parse_text, HeightFunction};

fn main() -> copositive::Result<()> {
    let threshold = (10.0f64 / 9.0).powf(0.9) * 40f64.powf(0.1);
    println!("threshold d0 = {threshold:.17}");
    println!("{:>8}  {:>20}  {:>45}  verdict", "eps", "t*", "certified interval");
    for eps in [1e-3, 1e-5, 1e-7, 1e-10, 1e-12, 1e-14, -1e-7] {
        let d = threshold + eps;
        let f = parse_text(&format!("1 + x1^40 + x2^40 + x3^40 + x4^40 - {d:e}*x1*x2*x3*x4"))?;
        let r = check_copositivity(&f, &HeightFunction::uniform(f.support()), &CheckOptions::default())?;
        let t = r.track.as_ref().map_or(f64::NAN, |t| t.t_star);
        let iv = r.verdict.t_interval.map_or("-".to_string(), |i| i.to_string());
        println!("{eps:>8.0e}  {t:>20.17}  {iv:>45}  {:?}", r.verdict.kind);
    }
    Ok(())
}
