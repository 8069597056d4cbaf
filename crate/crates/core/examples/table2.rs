//! Prints the default six-window comparison table.

use nftaper::experiment::{run_table2, ExperimentConfig};

fn main() {
    let start = std::time::Instant::now();
    let report = run_table2(&ExperimentConfig::default()).expect("default config is valid");
    print!("{}", report.to_text());
    for w in &report.per_window {
        if let Some(d) = w.taper.as_ref().and_then(|t| t.slepian.as_ref()) {
            println!(
                "{}: J = {:.4}, range region [{:.3}, {:.3}] m, {:.1} s",
                w.name, d.j, d.mainlobe.region.r_lo, d.mainlobe.region.r_hi, w.seconds
            );
        }
    }
    println!("total {:.1} s", start.elapsed().as_secs_f64());
}
