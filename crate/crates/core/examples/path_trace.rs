//! Track the single homotopy path by hand and write its trace as CSV.
//!
//! ```text
//! cargo run --example path_trace > trace.csv
//! ```

use copositive::signomial::{parse_text, HeightFunction};
use copositive::tracker::{build_homotopy, prepare_nonseparable, track_single_path, write_trace_csv, TrackerConfig};

fn main() -> copositive::Result<()> {
    let f = parse_text("1 + 3*x1^4 + x2^4 + x1^3*x2^5 - 4*x1^2*x2^2")?;
    let (rp, _) = prepare_nonseparable(&f, &HeightFunction::uniform(f.support()))?;
    let ph = build_homotopy(&rp)?;
    let cfg = TrackerConfig { trace: true, ..TrackerConfig::default() };
    let r = track_single_path(&ph, &cfg);
    eprintln!(
        "t* = {:.15}, converged = {}, {} accepted steps, residual {:.1e}",
        r.t_star,
        r.converged,
        r.trace.len(),
        r.residual
    );
    write_trace_csv(&r.trace, std::io::stdout().lock()).expect("stdout is writable");
    Ok(())
}
