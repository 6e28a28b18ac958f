//! Convergence table for a manufactured problem on the unit disk.
//!
//! ```text
//! cargo run --release --example convergence_study -- [preset] [k] [levels]
//! ```

use hdgcurve::harness::{run_convergence, RunConfig};

fn main() -> hdgcurve::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let preset = args.first().map_or("disk_sine", String::as_str);
    let k = args.get(1).map_or(1, |s| s.parse().expect("k"));
    let levels = args.get(2).map_or(4, |s| s.parse().expect("levels"));
    let config = RunConfig::parse(&format!("preset = {preset}\nk = {k}\nlevels = {levels}\ntarget_h = 0.25"))?;
    let table = run_convergence(&config)?;
    print!("{}", table.to_console());
    Ok(())
}
