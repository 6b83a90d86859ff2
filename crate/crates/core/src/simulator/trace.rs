//! Structured simulation trace.
//!
//! Each event renders to one line:
//!
//! ```text
//! <time_us> <node|-> <KIND> [key=value ...]
//! ```
//!
//! Lines parse back with [`TraceEvent::from_str`](std::str::FromStr), so a
//! trace file can be re-analyzed with [`collect_metrics`](super::collect_metrics).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::time::Time;

/// What a transmitted frame carried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FrameKind {
    Hello,
    Tc,
    Mid,
    Control,
    Data,
}

impl FrameKind {
    pub fn is_control(self) -> bool {
        self != FrameKind::Data
    }

    fn as_str(self) -> &'static str {
        match self {
            FrameKind::Hello => "HELLO",
            FrameKind::Tc => "TC",
            FrameKind::Mid => "MID",
            FrameKind::Control => "CONTROL",
            FrameKind::Data => "DATA",
        }
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FrameKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "HELLO" => FrameKind::Hello,
            "TC" => FrameKind::Tc,
            "MID" => FrameKind::Mid,
            "CONTROL" => FrameKind::Control,
            "DATA" => FrameKind::Data,
            _ => return Err(format!("unknown frame kind `{s}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DropReason {
    Collision,
    Loss,
    Ttl,
    NoRoute,
    /// Still in flight when the run ended.
    Expired,
}

impl DropReason {
    pub const ALL: [DropReason; 5] =
        [DropReason::Collision, DropReason::Loss, DropReason::Ttl, DropReason::NoRoute, DropReason::Expired];

    fn as_str(self) -> &'static str {
        match self {
            DropReason::Collision => "collision",
            DropReason::Loss => "loss",
            DropReason::Ttl => "ttl",
            DropReason::NoRoute => "no_route",
            DropReason::Expired => "expired",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DropReason {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        DropReason::ALL.into_iter().find(|r| r.as_str() == s).ok_or_else(|| format!("unknown drop reason `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceKind {
    /// Measurement window, emitted once at time zero.
    Window {
        start: Time,
        end: Time,
    },
    /// A frame went on the air. `forwarded` marks relayed control traffic.
    Tx {
        frame: FrameKind,
        bytes: usize,
        forwarded: bool,
    },
    /// A collision destroyed a reception at this node.
    Collision {
        from: usize,
        frame: FrameKind,
    },
    /// Random loss destroyed a reception at this node.
    Loss {
        from: usize,
        frame: FrameKind,
    },
    /// The application handed a data packet to its source node.
    Send {
        flow: usize,
        seq: u64,
        dst: usize,
        bits: u32,
    },
    /// A data packet reached its destination.
    Deliver {
        flow: usize,
        seq: u64,
        delay: Time,
        bits: u32,
        hops: u32,
    },
    Drop {
        flow: usize,
        seq: u64,
        reason: DropReason,
    },
    /// Number of distinct nodes chosen as MPR by at least one neighbor.
    Sample {
        mpr_count: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent {
    pub time: Time,
    /// `None` for network-wide events.
    pub node: Option<usize>,
    pub kind: TraceKind,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.time.as_micros())?;
        match self.node {
            Some(n) => write!(f, "{n} ")?,
            None => f.write_str("- ")?,
        }
        match &self.kind {
            TraceKind::Window { start, end } => {
                write!(f, "WINDOW start={} end={}", start.as_micros(), end.as_micros())
            }
            TraceKind::Tx { frame, bytes, forwarded } => {
                write!(f, "TX frame={frame} bytes={bytes} fwd={}", u8::from(*forwarded))
            }
            TraceKind::Collision { from, frame } => write!(f, "COLLISION from={from} frame={frame}"),
            TraceKind::Loss { from, frame } => write!(f, "LOSS from={from} frame={frame}"),
            TraceKind::Send { flow, seq, dst, bits } => {
                write!(f, "SEND flow={flow} seq={seq} dst={dst} bits={bits}")
            }
            TraceKind::Deliver { flow, seq, delay, bits, hops } => {
                write!(f, "DELIVER flow={flow} seq={seq} delay_us={} bits={bits} hops={hops}", delay.as_micros())
            }
            TraceKind::Drop { flow, seq, reason } => write!(f, "DROP flow={flow} seq={seq} reason={reason}"),
            TraceKind::Sample { mpr_count } => write!(f, "SAMPLE mpr_count={mpr_count}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("trace line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

struct Fields<'a> {
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Fields<'a> {
    fn new<I: Iterator<Item = &'a str>>(it: I) -> Result<Self, String> {
        let pairs = it
            .map(|tok| tok.split_once('=').ok_or_else(|| format!("expected key=value, got `{tok}`")))
            .collect::<Result<_, _>>()?;
        Ok(Fields { pairs })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T, String>
    where
        T::Err: fmt::Display,
    {
        let (_, v) = self.pairs.iter().find(|(k, _)| *k == key).ok_or_else(|| format!("missing `{key}`"))?;
        v.parse().map_err(|e: T::Err| format!("bad `{key}`: {e}"))
    }

    fn time(&self, key: &str) -> Result<Time, String> {
        self.get::<u64>(key).map(Time::from_micros)
    }
}

impl FromStr for TraceEvent {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, String> {
        let mut it = line.split_whitespace();
        let time: u64 = it.next().ok_or("empty line")?.parse().map_err(|e| format!("bad time: {e}"))?;
        let node = match it.next().ok_or("missing node")? {
            "-" => None,
            n => Some(n.parse().map_err(|e| format!("bad node: {e}"))?),
        };
        let kind = it.next().ok_or("missing event kind")?;
        let f = Fields::new(it)?;
        let kind = match kind {
            "WINDOW" => TraceKind::Window { start: f.time("start")?, end: f.time("end")? },
            "TX" => {
                TraceKind::Tx { frame: f.get("frame")?, bytes: f.get("bytes")?, forwarded: f.get::<u8>("fwd")? != 0 }
            }
            "COLLISION" => TraceKind::Collision { from: f.get("from")?, frame: f.get("frame")? },
            "LOSS" => TraceKind::Loss { from: f.get("from")?, frame: f.get("frame")? },
            "SEND" => {
                TraceKind::Send { flow: f.get("flow")?, seq: f.get("seq")?, dst: f.get("dst")?, bits: f.get("bits")? }
            }
            "DELIVER" => TraceKind::Deliver {
                flow: f.get("flow")?,
                seq: f.get("seq")?,
                delay: f.time("delay_us")?,
                bits: f.get("bits")?,
                hops: f.get("hops")?,
            },
            "DROP" => TraceKind::Drop { flow: f.get("flow")?, seq: f.get("seq")?, reason: f.get("reason")? },
            "SAMPLE" => TraceKind::Sample { mpr_count: f.get("mpr_count")? },
            other => return Err(format!("unknown event kind `{other}`")),
        };
        Ok(TraceEvent { time: Time::from_micros(time), node, kind })
    }
}

/// Render a trace, one event per line.
pub fn render(events: &[TraceEvent]) -> String {
    let mut s = String::new();
    for e in events {
        s.push_str(&e.to_string());
        s.push('\n');
    }
    s
}

/// Parse a rendered trace. Blank lines and `#` comments are skipped.
pub fn parse(text: &str) -> Result<Vec<TraceEvent>, TraceParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| l.parse().map_err(|message| TraceParseError { line: i + 1, message }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples() -> Vec<TraceEvent> {
        let t = Time::from_micros;
        vec![
            TraceEvent { time: t(0), node: None, kind: TraceKind::Window { start: t(5), end: t(60) } },
            TraceEvent {
                time: t(10),
                node: Some(3),
                kind: TraceKind::Tx { frame: FrameKind::Tc, bytes: 28, forwarded: true },
            },
            TraceEvent { time: t(11), node: Some(1), kind: TraceKind::Collision { from: 3, frame: FrameKind::Data } },
            TraceEvent { time: t(12), node: Some(1), kind: TraceKind::Loss { from: 3, frame: FrameKind::Hello } },
            TraceEvent { time: t(13), node: Some(0), kind: TraceKind::Send { flow: 2, seq: 7, dst: 4, bits: 64 } },
            TraceEvent {
                time: t(14),
                node: Some(4),
                kind: TraceKind::Deliver { flow: 2, seq: 7, delay: t(900), bits: 64, hops: 3 },
            },
            TraceEvent {
                time: t(15),
                node: Some(4),
                kind: TraceKind::Drop { flow: 2, seq: 8, reason: DropReason::NoRoute },
            },
            TraceEvent { time: t(16), node: None, kind: TraceKind::Sample { mpr_count: 5 } },
        ]
    }

    #[test]
    fn lines_round_trip() {
        let events = samples();
        let text = render(&events);
        assert_eq!(text.lines().count(), events.len());
        assert_eq!(parse(&text).unwrap(), events);
        assert_eq!(text.lines().nth(1).unwrap(), "10 3 TX frame=TC bytes=28 fwd=1");
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse("0 - WINDOW start=0 end=1\n\n5 2 JUMP\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("JUMP"));
        assert!(parse("5 2 TX frame=TC bytes=x fwd=0").is_err());
        assert!(parse("5 2 DROP flow=1 seq=1 reason=boredom").is_err());
    }
}
