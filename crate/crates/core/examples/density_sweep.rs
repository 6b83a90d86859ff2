//! Sweep node density and relate the time-averaged MPR count to
//! throughput and delay with Spearman rank correlation.
//!
//! ```text
//! cargo run --release --example density_sweep [seeds]
//! ```

use dream_olsr::simulator::{run, spearman, Scenario};
use rayon::prelude::*;

fn main() {
    let seeds: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let cells: Vec<(usize, u64)> = [10, 20, 30, 40].iter().flat_map(|&n| (1..=seeds).map(move |s| (n, s))).collect();
    let rows: Vec<(usize, u64, f64, f64, Option<f64>, f64)> = cells
        .par_iter()
        .map(|&(n, seed)| {
            let mut s = Scenario::with_nodes(n);
            s.seed = seed;
            let m = run(&s).expect("valid scenario").metrics;
            (n, seed, m.mpr_count_mean, m.avg_throughput, m.mean_delay, m.pdr)
        })
        .collect();

    println!("{:>5} {:>5} {:>9} {:>12} {:>10} {:>6}", "nodes", "seed", "mprs", "throughput", "delay_ms", "pdr");
    for (n, seed, mprs, tput, delay, pdr) in &rows {
        let delay = delay.map_or("-".to_string(), |d| format!("{:.3}", d * 1e3));
        println!("{n:>5} {seed:>5} {mprs:>9.2} {tput:>12.1} {delay:>10} {pdr:>6.3}");
    }

    let mprs: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let tput: Vec<f64> = rows.iter().map(|r| r.3).collect();
    let with_delay: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.4.map(|d| (r.2, d))).collect();
    let (dm, dd): (Vec<f64>, Vec<f64>) = with_delay.into_iter().unzip();
    println!("spearman(mpr_count, throughput) = {:?}", spearman(&mprs, &tput));
    println!("spearman(mpr_count, delay)      = {:?}", spearman(&dm, &dd));
}
