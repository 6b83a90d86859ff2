//! Scenario description, defaults and validation.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::flooding::FloodingMode;

/// Every recognized key with its default and meaning. Indexed keys
/// (`flow.<i>.<field>`, `node.<i>.x|y`) are listed with `<i>`.
pub const DEFAULTS: &[(&str, &str, &str)] = &[
    ("node_count", "(required)", "number of nodes"),
    ("area_width", "1000", "area width, m"),
    ("area_height", "1000", "area height, m"),
    ("radio_range", "250", "unit-disk radio range, m"),
    ("bitrate", "2000000", "shared channel bitrate, bit/s"),
    ("hello_interval", "0.5", "HELLO emission interval, s"),
    ("tc_interval", "0.5", "TC emission interval, s"),
    ("speed_min", "1", "Random Waypoint minimum speed, m/s"),
    ("speed_max", "5", "Random Waypoint maximum speed, m/s"),
    ("pause_time", "1", "Random Waypoint pause at each waypoint, s"),
    ("duration", "60", "simulated time, s"),
    ("seed", "1", "RNG seed"),
    ("warmup", "5", "start of the measurement window, s"),
    ("payload_bits", "64", "default application payload per data packet, bits"),
    ("auto_flows", "5", "random CBR flows generated when no flow.<i> keys are given"),
    ("flow_rate", "4", "default packets per second per flow"),
    ("forwarding", "dream", "TC flooding: blind | mpr | dream"),
    ("willingness", "3", "willingness of every node, 0..7"),
    ("collisions", "true", "overlapping receptions destroy each other"),
    ("loss_probability", "0", "independent per-reception loss probability"),
    ("flow.<i>.src", "-", "flow source node index"),
    ("flow.<i>.dst", "-", "flow destination node index"),
    ("flow.<i>.payload_bits", "payload_bits", "payload per packet, bits"),
    ("flow.<i>.rate", "flow_rate", "packets per second"),
    ("flow.<i>.start", "warmup", "first emission, s"),
    ("flow.<i>.stop", "duration", "no emissions at or after, s"),
    ("node.<i>.x", "random", "fixed initial x position, m"),
    ("node.<i>.y", "random", "fixed initial y position, m"),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pos {
    pub x: f64,
    pub y: f64,
}

impl Pos {
    pub fn distance(self, o: Pos) -> f64 {
        ((self.x - o.x).powi(2) + (self.y - o.y).powi(2)).sqrt()
    }
}

/// A constant-bit-rate flow. Unset optional fields take scenario defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlowSpec {
    pub src: Option<usize>,
    pub dst: Option<usize>,
    pub payload_bits: Option<u32>,
    pub rate: Option<f64>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
}

/// A flow with every field resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flow {
    pub src: usize,
    pub dst: usize,
    pub payload_bits: u32,
    pub rate: f64,
    pub start: f64,
    pub stop: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub node_count: usize,
    pub area: (f64, f64),
    pub radio_range: f64,
    pub bitrate: f64,
    pub hello_interval: f64,
    pub tc_interval: f64,
    pub speed: (f64, f64),
    pub pause_time: f64,
    pub flows: Vec<FlowSpec>,
    pub duration: f64,
    pub seed: u64,
    pub warmup: f64,
    pub payload_bits: u32,
    pub auto_flows: usize,
    pub flow_rate: f64,
    pub forwarding: FloodingMode,
    pub willingness: u8,
    pub collisions: bool,
    pub loss_probability: f64,
    pub positions: BTreeMap<usize, (Option<f64>, Option<f64>)>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            node_count: 0,
            area: (1000.0, 1000.0),
            radio_range: 250.0,
            bitrate: 2_000_000.0,
            hello_interval: 0.5,
            tc_interval: 0.5,
            speed: (1.0, 5.0),
            pause_time: 1.0,
            flows: Vec::new(),
            duration: 60.0,
            seed: 1,
            warmup: 5.0,
            payload_bits: 64,
            auto_flows: 5,
            flow_rate: 4.0,
            forwarding: FloodingMode::Dream,
            willingness: crate::mpr::WILL_DEFAULT,
            collisions: true,
            loss_probability: 0.0,
            positions: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ScenarioError>
where
    T::Err: fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| ScenarioError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ScenarioError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(ScenarioError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
            reason: "expected true or false".into(),
        }),
    }
}

impl Scenario {
    pub fn with_nodes(node_count: usize) -> Self {
        Scenario { node_count, ..Self::default() }
    }

    /// Whether `key` names a scenario field (indexed keys included).
    pub fn is_known_key(key: &str) -> bool {
        let mut probe = Scenario::default();
        !matches!(probe.set(key, "0"), Err(ScenarioError::UnknownKey(_)))
    }

    /// Assign one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ScenarioError> {
        let key = key.trim();
        match key {
            "node_count" => self.node_count = parse(key, value)?,
            "area_width" => self.area.0 = parse(key, value)?,
            "area_height" => self.area.1 = parse(key, value)?,
            "radio_range" => self.radio_range = parse(key, value)?,
            "bitrate" => self.bitrate = parse(key, value)?,
            "hello_interval" => self.hello_interval = parse(key, value)?,
            "tc_interval" => self.tc_interval = parse(key, value)?,
            "speed_min" => self.speed.0 = parse(key, value)?,
            "speed_max" => self.speed.1 = parse(key, value)?,
            "pause_time" => self.pause_time = parse(key, value)?,
            "duration" => self.duration = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "warmup" => self.warmup = parse(key, value)?,
            "payload_bits" => self.payload_bits = parse(key, value)?,
            "auto_flows" => self.auto_flows = parse(key, value)?,
            "flow_rate" => self.flow_rate = parse(key, value)?,
            "forwarding" => self.forwarding = parse(key, value)?,
            "willingness" => self.willingness = parse(key, value)?,
            "collisions" => self.collisions = parse_bool(key, value)?,
            "loss_probability" => self.loss_probability = parse(key, value)?,
            _ => return self.set_indexed(key, value),
        }
        Ok(())
    }

    fn set_indexed(&mut self, key: &str, value: &str) -> Result<(), ScenarioError> {
        let unknown = || ScenarioError::UnknownKey(key.to_string());
        let mut parts = key.split('.');
        let (Some(group), Some(idx), Some(field), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(unknown());
        };
        let idx: usize = idx.parse().map_err(|_| unknown())?;
        match group {
            "flow" => {
                if idx >= 10_000 {
                    return Err(unknown());
                }
                if self.flows.len() <= idx {
                    self.flows.resize(idx + 1, FlowSpec::default());
                }
                let f = &mut self.flows[idx];
                match field {
                    "src" => f.src = Some(parse(key, value)?),
                    "dst" => f.dst = Some(parse(key, value)?),
                    "payload_bits" => f.payload_bits = Some(parse(key, value)?),
                    "rate" => f.rate = Some(parse(key, value)?),
                    "start" => f.start = Some(parse(key, value)?),
                    "stop" => f.stop = Some(parse(key, value)?),
                    _ => return Err(unknown()),
                }
            }
            "node" => {
                let e = self.positions.entry(idx).or_insert((None, None));
                match field {
                    "x" => e.0 = Some(parse(key, value)?),
                    "y" => e.1 = Some(parse(key, value)?),
                    _ => return Err(unknown()),
                }
            }
            _ => return Err(unknown()),
        }
        Ok(())
    }

    /// Textual value of a scalar field, in the form accepted by [`Scenario::set`].
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "node_count" => self.node_count.to_string(),
            "area_width" => self.area.0.to_string(),
            "area_height" => self.area.1.to_string(),
            "radio_range" => self.radio_range.to_string(),
            "bitrate" => self.bitrate.to_string(),
            "hello_interval" => self.hello_interval.to_string(),
            "tc_interval" => self.tc_interval.to_string(),
            "speed_min" => self.speed.0.to_string(),
            "speed_max" => self.speed.1.to_string(),
            "pause_time" => self.pause_time.to_string(),
            "duration" => self.duration.to_string(),
            "seed" => self.seed.to_string(),
            "warmup" => self.warmup.to_string(),
            "payload_bits" => self.payload_bits.to_string(),
            "auto_flows" => self.auto_flows.to_string(),
            "flow_rate" => self.flow_rate.to_string(),
            "forwarding" => self.forwarding.to_string(),
            "willingness" => self.willingness.to_string(),
            "collisions" => self.collisions.to_string(),
            "loss_probability" => self.loss_probability.to_string(),
            _ => return None,
        })
    }

    pub fn is_static(&self) -> bool {
        self.speed.1 <= 0.0
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::Invalid(m));
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if self.node_count == 0 {
            return bad("node_count must be at least 1".into());
        }
        if self.node_count > u16::MAX as usize {
            return bad(format!("node_count {} is too large", self.node_count));
        }
        for (name, v) in [
            ("area_width", self.area.0),
            ("area_height", self.area.1),
            ("radio_range", self.radio_range),
            ("bitrate", self.bitrate),
            ("hello_interval", self.hello_interval),
            ("tc_interval", self.tc_interval),
            ("duration", self.duration),
            ("flow_rate", self.flow_rate),
        ] {
            if !pos(v) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.speed.0 >= 0.0 && self.speed.0 <= self.speed.1 && self.speed.1.is_finite()) {
            return bad(format!("need 0 <= speed_min <= speed_max, got {:?}", self.speed));
        }
        if !(self.pause_time >= 0.0 && self.pause_time.is_finite()) {
            return bad("pause_time must be non-negative".into());
        }
        if !(self.warmup >= 0.0 && self.warmup < self.duration) {
            return bad(format!("warmup must lie in [0, duration), got {}", self.warmup));
        }
        if self.hello_interval * 3.0 > crate::messages::Vtime::MAX_SECS
            || self.tc_interval * 3.0 > crate::messages::Vtime::MAX_SECS
        {
            return bad("emission intervals are too long to encode hold times".into());
        }
        if self.payload_bits == 0 {
            return bad("payload_bits must be positive".into());
        }
        if self.willingness > 7 {
            return bad(format!("willingness {} is outside 0..=7", self.willingness));
        }
        if !(0.0..=1.0).contains(&self.loss_probability) {
            return bad(format!("loss_probability {} is outside [0, 1]", self.loss_probability));
        }
        for (&i, &(x, y)) in &self.positions {
            if i >= self.node_count {
                return bad(format!("node.{i} refers to a node beyond node_count"));
            }
            let (Some(x), Some(y)) = (x, y) else {
                return bad(format!("node.{i} needs both x and y"));
            };
            if !(0.0..=self.area.0).contains(&x) || !(0.0..=self.area.1).contains(&y) {
                return bad(format!("node.{i} position ({x}, {y}) is outside the area"));
            }
        }
        for (i, f) in self.flows.iter().enumerate() {
            let r = self.resolve_flow(f);
            let (Some(src), Some(dst)) = (f.src, f.dst) else {
                return bad(format!("flow.{i} needs src and dst"));
            };
            if src >= self.node_count || dst >= self.node_count {
                return bad(format!("flow.{i} references a node beyond node_count"));
            }
            if src == dst {
                return bad(format!("flow.{i} has identical src and dst"));
            }
            if !pos(r.rate) || r.payload_bits == 0 {
                return bad(format!("flow.{i} needs a positive rate and payload"));
            }
            if !(r.start >= 0.0 && r.start < r.stop) {
                return bad(format!("flow.{i} needs 0 <= start < stop"));
            }
        }
        Ok(())
    }

    pub fn resolve_flow(&self, f: &FlowSpec) -> Flow {
        Flow {
            src: f.src.unwrap_or(0),
            dst: f.dst.unwrap_or(0),
            payload_bits: f.payload_bits.unwrap_or(self.payload_bits),
            rate: f.rate.unwrap_or(self.flow_rate),
            start: f.start.unwrap_or(self.warmup),
            stop: f.stop.unwrap_or(self.duration),
        }
    }

    /// Measurement window: from warmup (or an earlier flow start) to the
    /// end of the run.
    pub fn window(&self, flows: &[Flow]) -> (f64, f64) {
        let start = flows.iter().map(|f| f.start).fold(self.warmup, f64::min);
        (start.min(self.duration), self.duration)
    }
}
