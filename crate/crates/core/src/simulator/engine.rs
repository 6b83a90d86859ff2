use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};
use std::rc::Rc;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::metrics::{collect_metrics, Metrics};
use super::mobility::{Waypoint, WaypointParams};
use super::radio::{Medium, RadioConfig};
use super::scenario::{Flow, Pos, Scenario, ScenarioError};
use super::trace::{DropReason, FrameKind, TraceEvent, TraceKind};
use crate::messages::{Address, MessageType};
use crate::node::{Node, NodeConfig};
use crate::time::Time;

pub const MOBILITY_STEP: Duration = Duration::from_millis(100);
pub const SAMPLE_INTERVAL: Duration = Duration::from_secs(1);
/// IPv4 plus UDP headers carried by every data frame.
pub const DATA_HEADER_BYTES: usize = 28;
pub const DATA_TTL: u8 = 32;

/// Address of the node at `index`.
pub fn address_of(index: usize) -> Address {
    Address(index as u32 + 1)
}

fn index_of(addr: Address) -> usize {
    addr.0 as usize - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Event {
    Hello(usize),
    Tc(usize),
    Forward(u64),
    TxDone(usize),
    Arrival(u64),
    Mobility,
    Emit(usize),
    Sample,
}

#[derive(Debug, Clone)]
struct DataPacket {
    flow: usize,
    seq: u64,
    dst: usize,
    sent_at: Time,
    bits: u32,
    ttl: u8,
    hops: u32,
    next_hop: usize,
}

#[derive(Debug)]
struct Frame {
    kind: FrameKind,
    size: usize,
    forwarded: bool,
    control: Vec<u8>,
    data: Option<DataPacket>,
}

struct SimNode {
    node: Node,
    waypoint: Waypoint,
    queue: VecDeque<Rc<Frame>>,
    busy: bool,
}

/// Result of a completed run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub metrics: Metrics,
    pub trace: Vec<TraceEvent>,
    pub flows: Vec<Flow>,
}

/// A discrete-event run of one scenario.
///
/// All randomness comes from one ChaCha8 stream seeded with
/// `scenario.seed`, drawn in this order: initial positions (x then y for
/// each node), auto-generated flows (source, destination, then a start
/// phase within one packet interval after warmup), first HELLO
/// and TC offsets per node, then runtime draws in event order. Events at
/// equal times run in scheduling order.
pub struct Simulation {
    scenario: Scenario,
    flows: Vec<Flow>,
    now: Time,
    end: Time,
    seq: u64,
    queue: BinaryHeap<Reverse<(Time, u64, Event)>>,
    rng: ChaCha8Rng,
    nodes: Vec<SimNode>,
    medium: Medium,
    radio: RadioConfig,
    mobility: WaypointParams,
    in_flight: BTreeMap<u64, Rc<Frame>>,
    forwards: BTreeMap<u64, (usize, Vec<u8>)>,
    next_forward: u64,
    flow_seq: Vec<u64>,
    outstanding: BTreeMap<(usize, u64), usize>,
    trace: Vec<TraceEvent>,
}

fn secs(s: f64) -> Duration {
    Duration::from_secs_f64(s)
}

impl Simulation {
    pub fn new(scenario: &Scenario) -> Result<Self, ScenarioError> {
        scenario.validate()?;
        let s = scenario.clone();
        let n = s.node_count;
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);

        let mut positions = Vec::with_capacity(n);
        for i in 0..n {
            let x = rng.gen_range(0.0..=s.area.0);
            let y = rng.gen_range(0.0..=s.area.1);
            let p = match s.positions.get(&i) {
                Some(&(Some(px), Some(py))) => Pos { x: px, y: py },
                _ => Pos { x, y },
            };
            positions.push(p);
        }

        let flows: Vec<Flow> = if s.flows.is_empty() {
            let mut v = Vec::new();
            if n >= 2 {
                for _ in 0..s.auto_flows {
                    let src = rng.gen_range(0..n);
                    let mut dst = rng.gen_range(0..n);
                    while dst == src {
                        dst = rng.gen_range(0..n);
                    }
                    let phase = rng.gen_range(0.0..1.0 / s.flow_rate);
                    v.push(s.resolve_flow(&super::scenario::FlowSpec {
                        src: Some(src),
                        dst: Some(dst),
                        start: Some(s.warmup + phase),
                        ..Default::default()
                    }));
                }
            }
            v
        } else {
            s.flows.iter().map(|f| s.resolve_flow(f)).collect()
        };

        let mut config = NodeConfig::with_intervals(secs(s.hello_interval), secs(s.tc_interval));
        config.hello.willingness = s.willingness;
        config.flooding = s.forwarding;
        if let Err(e) = config.validate() {
            return Err(ScenarioError::Invalid(e.to_string()));
        }
        let nodes = positions
            .into_iter()
            .enumerate()
            .map(|(i, p)| SimNode {
                node: Node::new(address_of(i), config.clone()),
                waypoint: Waypoint::new(p),
                queue: VecDeque::new(),
                busy: false,
            })
            .collect();

        let mut sim = Simulation {
            radio: RadioConfig { range: s.radio_range, bitrate: s.bitrate, collisions: s.collisions },
            mobility: WaypointParams { area: s.area, speed: s.speed, pause: secs(s.pause_time) },
            end: Time::from_secs_f64(s.duration),
            flow_seq: vec![0; flows.len()],
            flows,
            now: Time::ZERO,
            seq: 0,
            queue: BinaryHeap::new(),
            rng,
            nodes,
            medium: Medium::new(),
            in_flight: BTreeMap::new(),
            forwards: BTreeMap::new(),
            next_forward: 0,
            outstanding: BTreeMap::new(),
            trace: Vec::new(),
            scenario: s,
        };

        let (ws, we) = sim.scenario.window(&sim.flows);
        sim.record(None, TraceKind::Window { start: Time::from_secs_f64(ws), end: Time::from_secs_f64(we) });
        let h = sim.scenario.hello_interval;
        let tc = sim.scenario.tc_interval;
        for i in 0..n {
            let hello_at = sim.rng.gen_range(0.0..0.1 * h);
            let tc_at = sim.rng.gen_range(0.0..tc);
            sim.schedule(Time::from_secs_f64(hello_at), Event::Hello(i));
            sim.schedule(Time::from_secs_f64(tc_at), Event::Tc(i));
        }
        for f in 0..sim.flows.len() {
            let start = Time::from_secs_f64(sim.flows[f].start);
            sim.schedule(start, Event::Emit(f));
        }
        if !sim.mobility.is_static() {
            sim.schedule(Time::ZERO + MOBILITY_STEP, Event::Mobility);
        }
        sim.schedule(Time::ZERO, Event::Sample);
        Ok(sim)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn flows(&self) -> &[Flow] {
        &self.flows
    }

    pub fn now(&self) -> Time {
        self.now
    }

    pub fn end(&self) -> Time {
        self.end
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i].node
    }

    pub fn position(&self, i: usize) -> Pos {
        self.nodes[i].waypoint.pos
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    fn schedule(&mut self, at: Time, ev: Event) {
        debug_assert!(at >= self.now, "event scheduled in the past");
        self.seq += 1;
        self.queue.push(Reverse((at.max(self.now), self.seq, ev)));
    }

    fn record(&mut self, node: Option<usize>, kind: TraceKind) {
        self.trace.push(TraceEvent { time: self.now, node, kind });
    }

    /// Process every event scheduled at or before `t` (capped at the end
    /// of the run).
    pub fn run_until(&mut self, t: Time) {
        let t = t.min(self.end);
        while let Some(&Reverse((at, _, ev))) = self.queue.peek() {
            if at > t {
                break;
            }
            self.queue.pop();
            self.now = at;
            self.handle(ev);
        }
        self.now = self.now.max(t);
    }

    /// Run to the end, account for packets still in flight and compute metrics.
    pub fn finish(mut self) -> RunOutput {
        self.run_until(self.end);
        self.now = self.end;
        let left: Vec<((usize, u64), usize)> = std::mem::take(&mut self.outstanding).into_iter().collect();
        for ((flow, seq), at) in left {
            self.record(Some(at), TraceKind::Drop { flow, seq, reason: DropReason::Expired });
        }
        RunOutput { metrics: collect_metrics(&self.trace), trace: self.trace, flows: self.flows }
    }

    fn jittered(&mut self, interval: f64) -> Duration {
        secs(interval * self.rng.gen_range(0.9..1.1))
    }

    fn handle(&mut self, ev: Event) {
        match ev {
            Event::Hello(i) => {
                let now = self.now;
                let n = &mut self.nodes[i].node;
                n.tick(now);
                let msg = n.hello_message(n.main_addr(), now);
                if let Ok(bytes) = n.packetize(n.main_addr(), vec![msg]) {
                    self.enqueue_control(i, bytes, FrameKind::Hello, false);
                }
                let d = self.jittered(self.scenario.hello_interval);
                self.schedule(now + d, Event::Hello(i));
            }
            Event::Tc(i) => {
                let now = self.now;
                let n = &mut self.nodes[i].node;
                n.tick(now);
                if let Some(msg) = n.tc_message(now) {
                    if let Ok(bytes) = n.packetize(n.main_addr(), vec![msg]) {
                        self.enqueue_control(i, bytes, FrameKind::Tc, false);
                    }
                }
                let d = self.jittered(self.scenario.tc_interval);
                self.schedule(now + d, Event::Tc(i));
            }
            Event::Forward(id) => {
                let Some((i, raw)) = self.forwards.remove(&id) else { return };
                let n = &mut self.nodes[i].node;
                let kind = frame_kind(raw.first().copied());
                if let Ok(bytes) = n.packetize_raw(n.main_addr(), &[raw]) {
                    self.enqueue_control(i, bytes, kind, true);
                }
            }
            Event::TxDone(i) => {
                self.nodes[i].busy = false;
                self.start_next(i);
            }
            Event::Arrival(id) => self.arrival(id),
            Event::Mobility => {
                let now = self.now;
                for sn in &mut self.nodes {
                    sn.waypoint.step(now, MOBILITY_STEP, &self.mobility, &mut self.rng);
                }
                self.schedule(now + MOBILITY_STEP, Event::Mobility);
            }
            Event::Emit(f) => {
                let flow = self.flows[f];
                let seq = self.flow_seq[f];
                self.flow_seq[f] += 1;
                self.record(Some(flow.src), TraceKind::Send { flow: f, seq, dst: flow.dst, bits: flow.payload_bits });
                self.outstanding.insert((f, seq), flow.src);
                let pkt = DataPacket {
                    flow: f,
                    seq,
                    dst: flow.dst,
                    sent_at: self.now,
                    bits: flow.payload_bits,
                    ttl: DATA_TTL,
                    hops: 0,
                    next_hop: flow.src,
                };
                self.handle_data(flow.src, pkt);
                let next = self.now + secs(1.0 / flow.rate);
                if next < Time::from_secs_f64(flow.stop) && next <= self.end {
                    self.schedule(next, Event::Emit(f));
                }
            }
            Event::Sample => {
                let mprs: BTreeSet<Address> =
                    self.nodes.iter().flat_map(|n| n.node.repositories().mpr_set().iter().copied()).collect();
                self.record(None, TraceKind::Sample { mpr_count: mprs.len() });
                let next = self.now + SAMPLE_INTERVAL;
                self.schedule(next, Event::Sample);
            }
        }
    }

    fn enqueue_control(&mut self, i: usize, bytes: Vec<u8>, kind: FrameKind, forwarded: bool) {
        let frame = Frame { kind, size: bytes.len(), forwarded, control: bytes, data: None };
        self.enqueue(i, frame);
    }

    fn enqueue(&mut self, i: usize, frame: Frame) {
        self.nodes[i].queue.push_back(Rc::new(frame));
        if !self.nodes[i].busy {
            self.start_next(i);
        }
    }

    fn start_next(&mut self, i: usize) {
        let Some(frame) = self.nodes[i].queue.pop_front() else { return };
        self.nodes[i].busy = true;
        self.record(Some(i), TraceKind::Tx { frame: frame.kind, bytes: frame.size, forwarded: frame.forwarded });
        let positions: Vec<Pos> = self.nodes.iter().map(|n| n.waypoint.pos).collect();
        let rxs = self.medium.transmit(&self.radio, &positions, i, self.now, frame.size);
        if let Some(d) = &frame.data {
            if !rxs.iter().any(|r| r.receiver == d.next_hop) {
                self.drop_data(i, d.flow, d.seq, DropReason::Loss);
            }
        }
        for rx in rxs {
            self.in_flight.insert(rx.id, frame.clone());
            self.schedule(rx.end, Event::Arrival(rx.id));
        }
        let done = self.now + super::radio::transmission_time(frame.size, self.radio.bitrate);
        self.schedule(done, Event::TxDone(i));
    }

    fn drop_data(&mut self, at: usize, flow: usize, seq: u64, reason: DropReason) {
        if self.outstanding.remove(&(flow, seq)).is_some() {
            self.record(Some(at), TraceKind::Drop { flow, seq, reason });
        }
    }

    fn arrival(&mut self, id: u64) {
        let Some(rx) = self.medium.complete(id) else { return };
        let Some(frame) = self.in_flight.remove(&id) else { return };
        let r = rx.receiver;
        let intended = frame.data.as_ref().is_none_or(|d| d.next_hop == r);
        let lost = if rx.collided {
            self.record(Some(r), TraceKind::Collision { from: rx.sender, frame: frame.kind });
            Some(DropReason::Collision)
        } else if self.scenario.loss_probability > 0.0 && self.rng.gen_bool(self.scenario.loss_probability) {
            self.record(Some(r), TraceKind::Loss { from: rx.sender, frame: frame.kind });
            Some(DropReason::Loss)
        } else {
            None
        };
        if let Some(reason) = lost {
            if let (Some(d), true) = (&frame.data, intended) {
                self.drop_data(r, d.flow, d.seq, reason);
            }
            return;
        }
        match &frame.data {
            Some(d) if intended => {
                let mut d = d.clone();
                d.hops += 1;
                self.handle_data(r, d);
            }
            Some(_) => {}
            None => {
                let now = self.now;
                let n = &mut self.nodes[r].node;
                n.tick(now);
                let reception = n.receive(&frame.control, n.main_addr(), address_of(rx.sender), now);
                for raw in reception.forwards {
                    let max = (self.scenario.hello_interval / 4.0 * 1e6) as u64;
                    let delay = Duration::from_micros(self.rng.gen_range(1..=max.max(1)));
                    let fid = self.next_forward;
                    self.next_forward += 1;
                    self.forwards.insert(fid, (r, raw));
                    self.schedule(now + delay, Event::Forward(fid));
                }
            }
        }
    }

    fn handle_data(&mut self, x: usize, mut d: DataPacket) {
        if x == d.dst {
            if self.outstanding.remove(&(d.flow, d.seq)).is_some() {
                let delay = Time::from_micros(self.now.saturating_since(d.sent_at).as_micros() as u64);
                self.record(
                    Some(x),
                    TraceKind::Deliver { flow: d.flow, seq: d.seq, delay, bits: d.bits, hops: d.hops },
                );
            }
            return;
        }
        if d.ttl == 0 {
            self.drop_data(x, d.flow, d.seq, DropReason::Ttl);
            return;
        }
        let now = self.now;
        let n = &mut self.nodes[x].node;
        n.tick(now);
        let Some(route) = n.route(address_of(d.dst)) else {
            self.drop_data(x, d.flow, d.seq, DropReason::NoRoute);
            return;
        };
        d.next_hop = index_of(route.next_hop);
        d.ttl -= 1;
        let size = DATA_HEADER_BYTES + (d.bits as usize).div_ceil(8);
        self.enqueue(
            x,
            Frame { kind: FrameKind::Data, size, forwarded: d.hops > 0, control: Vec::new(), data: Some(d) },
        );
    }
}

fn frame_kind(type_code: Option<u8>) -> FrameKind {
    match type_code.map(MessageType::from_code) {
        Some(MessageType::Hello) => FrameKind::Hello,
        Some(MessageType::Tc) => FrameKind::Tc,
        Some(MessageType::Mid) => FrameKind::Mid,
        _ => FrameKind::Control,
    }
}

/// Build and run a scenario to completion.
pub fn run(scenario: &Scenario) -> Result<RunOutput, ScenarioError> {
    Ok(Simulation::new(scenario)?.finish())
}
