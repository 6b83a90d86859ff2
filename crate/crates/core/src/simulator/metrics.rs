//! Metrics computed from a trace, plus rank correlation for sweeps.

use std::collections::BTreeMap;

use super::trace::{DropReason, TraceEvent, TraceKind};
use crate::time::Time;

/// Data-plane counts for one flow.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlowCounts {
    pub sent: u64,
    pub delivered: u64,
    pub dropped: BTreeMap<DropReason, u64>,
}

impl FlowCounts {
    pub fn dropped_total(&self) -> u64 {
        self.dropped.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub window: (Time, Time),
    /// Delivered payload bits per second over the measurement window.
    pub avg_throughput: f64,
    /// Delivered over sent; 1.0 when nothing was sent.
    pub pdr: f64,
    /// Mean source-to-destination delay in seconds; `None` without deliveries.
    pub mean_delay: Option<f64>,
    /// TC frames put on the air, originations and relays alike.
    pub tc_transmissions: u64,
    /// Time-average of the network-wide MPR count over samples in the window.
    pub mpr_count_mean: f64,
    /// Bytes of every non-data frame transmitted.
    pub control_overhead_bytes: u64,
    pub data_sent: u64,
    pub data_delivered: u64,
    pub flows: BTreeMap<usize, FlowCounts>,
}

/// Derive metrics from trace events alone.
pub fn collect_metrics(events: &[TraceEvent]) -> Metrics {
    let mut window = None;
    let mut flows: BTreeMap<usize, FlowCounts> = BTreeMap::new();
    let mut bits = 0u64;
    let mut delay_sum = 0u64;
    let mut tc_tx = 0;
    let mut control_bytes = 0u64;
    let mut samples = Vec::new();
    for e in events {
        match &e.kind {
            TraceKind::Window { start, end } => window = Some((*start, *end)),
            TraceKind::Tx { frame, bytes, .. } => {
                if *frame == super::FrameKind::Tc {
                    tc_tx += 1;
                }
                if frame.is_control() {
                    control_bytes += *bytes as u64;
                }
            }
            TraceKind::Send { flow, .. } => flows.entry(*flow).or_default().sent += 1,
            TraceKind::Deliver { flow, delay, bits: b, .. } => {
                flows.entry(*flow).or_default().delivered += 1;
                bits += u64::from(*b);
                delay_sum += delay.as_micros();
            }
            TraceKind::Drop { flow, reason, .. } => {
                *flows.entry(*flow).or_default().dropped.entry(*reason).or_default() += 1;
            }
            TraceKind::Sample { mpr_count } => samples.push((e.time, *mpr_count)),
            TraceKind::Collision { .. } | TraceKind::Loss { .. } => {}
        }
    }
    let end = events.last().map_or(Time::ZERO, |e| e.time);
    let window = window.unwrap_or((Time::ZERO, end));
    let span = window.1.saturating_since(window.0).as_secs_f64();
    let sent: u64 = flows.values().map(|f| f.sent).sum();
    let delivered: u64 = flows.values().map(|f| f.delivered).sum();
    let in_window: Vec<usize> =
        samples.iter().filter(|(t, _)| *t >= window.0 && *t <= window.1).map(|(_, c)| *c).collect();
    Metrics {
        window,
        avg_throughput: if span > 0.0 { bits as f64 / span } else { 0.0 },
        pdr: if sent == 0 { 1.0 } else { delivered as f64 / sent as f64 },
        mean_delay: (delivered > 0).then(|| delay_sum as f64 / delivered as f64 / 1e6),
        tc_transmissions: tc_tx,
        mpr_count_mean: if in_window.is_empty() {
            0.0
        } else {
            in_window.iter().sum::<usize>() as f64 / in_window.len() as f64
        },
        control_overhead_bytes: control_bytes,
        data_sent: sent,
        data_delivered: delivered,
        flows,
    }
}

/// Ranks starting at 1, ties sharing the mean of the ranks they span.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma).powi(2);
        vb += (y - mb).powi(2);
    }
    (va > 0.0 && vb > 0.0).then(|| cov / (va * vb).sqrt())
}

/// Spearman rank correlation. `None` if the inputs differ in length, have
/// fewer than two points, or either side is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::trace;

    const FIXTURE: &str = "\
0 - WINDOW start=1000000 end=3000000
1000000 - SAMPLE mpr_count=2
1000100 0 TX frame=HELLO bytes=20 fwd=0
1000200 0 SEND flow=0 seq=0 dst=2 bits=64
1000300 0 TX frame=DATA bytes=36 fwd=0
1000500 1 TX frame=TC bytes=24 fwd=0
1000700 2 TX frame=TC bytes=24 fwd=1
1001200 2 DELIVER flow=0 seq=0 delay_us=1000 bits=64 hops=2
1500000 0 SEND flow=0 seq=1 dst=2 bits=64
1500400 1 COLLISION from=0 frame=DATA
1500400 1 DROP flow=0 seq=1 reason=collision
2000000 - SAMPLE mpr_count=4
2000000 0 SEND flow=1 seq=0 dst=1 bits=64
2003000 1 DELIVER flow=1 seq=0 delay_us=3000 bits=64 hops=1
3000000 - SAMPLE mpr_count=3
";

    #[test]
    fn golden_fixture() {
        let m = collect_metrics(&trace::parse(FIXTURE).unwrap());
        assert_eq!(m.window, (Time::from_micros(1_000_000), Time::from_micros(3_000_000)));
        assert_eq!(m.data_sent, 3);
        assert_eq!(m.data_delivered, 2);
        assert!((m.pdr - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.avg_throughput - 64.0).abs() < 1e-12);
        assert!((m.mean_delay.unwrap() - 0.002).abs() < 1e-12);
        assert_eq!(m.tc_transmissions, 2);
        assert_eq!(m.control_overhead_bytes, 68);
        assert!((m.mpr_count_mean - 3.0).abs() < 1e-12);
        assert_eq!(m.flows[&0].dropped[&DropReason::Collision], 1);
    }

    #[test]
    fn empty_trace() {
        let m = collect_metrics(&[]);
        assert_eq!(m.pdr, 1.0);
        assert_eq!(m.mean_delay, None);
        assert_eq!(m.avg_throughput, 0.0);
    }

    #[test]
    fn ranks_average_ties() {
        assert_eq!(average_ranks(&[10.0, 20.0, 20.0, 5.0]), vec![2.0, 3.5, 3.5, 1.0]);
    }

    #[test]
    fn spearman_known_values() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]), None);
        // d = (0, -1, 1, 0): 1 - 6*2/(4*15) = 0.8
        let r = spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.8).abs() < 1e-12);
    }
}
