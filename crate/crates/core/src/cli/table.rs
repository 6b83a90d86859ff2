//! The metrics CSV: one row per replication under a fixed header.

use std::io::Write;

use crate::simulator::{Metrics, Scenario};

/// Column names, in order. `mean_delay` is empty when nothing was delivered;
/// `parameter` and `value` are empty for plain runs.
pub const CSV_HEADER: [&str; 13] = [
    "parameter",
    "value",
    "seed",
    "node_count",
    "forwarding",
    "avg_throughput",
    "pdr",
    "mean_delay",
    "tc_transmissions",
    "mpr_count_mean",
    "control_overhead_bytes",
    "data_sent",
    "data_delivered",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub parameter: String,
    pub value: String,
    pub scenario: Scenario,
    pub metrics: Metrics,
}

impl Row {
    fn fields(&self) -> [String; 13] {
        let m = &self.metrics;
        [
            self.parameter.clone(),
            self.value.clone(),
            self.scenario.seed.to_string(),
            self.scenario.node_count.to_string(),
            self.scenario.forwarding.to_string(),
            m.avg_throughput.to_string(),
            m.pdr.to_string(),
            m.mean_delay.map(|d| d.to_string()).unwrap_or_default(),
            m.tc_transmissions.to_string(),
            m.mpr_count_mean.to_string(),
            m.control_overhead_bytes.to_string(),
            m.data_sent.to_string(),
            m.data_delivered.to_string(),
        ]
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn render_csv(rows: &[Row]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}
