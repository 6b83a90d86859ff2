//! Run one mobile scenario and print its metrics and drop breakdown.
//!
//! ```text
//! cargo run --release --example simulate [node_count] [seed]
//! ```

use dream_olsr::simulator::{run, DropReason, Scenario};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut scenario = Scenario::with_nodes(n);
    scenario.seed = seed;
    let out = run(&scenario).expect("valid scenario");
    let m = &out.metrics;

    println!("nodes={n} seed={seed} trace_events={}", out.trace.len());
    println!("throughput       {:.1} bit/s", m.avg_throughput);
    println!("pdr              {:.3} ({} of {})", m.pdr, m.data_delivered, m.data_sent);
    match m.mean_delay {
        Some(d) => println!("mean delay       {:.3} ms", d * 1e3),
        None => println!("mean delay       -"),
    }
    println!("tc transmissions {}", m.tc_transmissions);
    println!("mpr count mean   {:.2}", m.mpr_count_mean);
    println!("control bytes    {}", m.control_overhead_bytes);
    for (i, f) in &m.flows {
        let flow = out.flows[*i];
        let drops: Vec<String> =
            DropReason::ALL.iter().filter_map(|r| f.dropped.get(r).map(|c| format!("{r}={c}"))).collect();
        println!(
            "flow {i}: {} -> {}  sent={} delivered={} {}",
            flow.src,
            flow.dst,
            f.sent,
            f.delivered,
            drops.join(" ")
        );
    }
}
