//! Deterministic discrete-event MANET simulator.
//!
//! Nodes move under Random Waypoint inside a rectangle and share one
//! unit-disk channel. Frames take `bytes * 8 / bitrate` on air plus
//! propagation delay; receptions that overlap at a receiver destroy each
//! other. Constant-bit-rate flows send data along the OLSR routing tables.
//! Everything observable is written to a [`TraceEvent`] log, and metrics
//! are computed from that log alone.

mod engine;
pub mod metrics;
pub mod mobility;
pub mod radio;
pub mod scenario;
pub mod static_network;
pub mod trace;

pub use engine::{address_of, run, RunOutput, Simulation, DATA_HEADER_BYTES, DATA_TTL, MOBILITY_STEP, SAMPLE_INTERVAL};
pub use metrics::{collect_metrics, spearman, FlowCounts, Metrics};
pub use scenario::{Flow, FlowSpec, Pos, Scenario, ScenarioError, DEFAULTS};
pub use static_network::{FloodReport, StaticNetwork};
pub use trace::{DropReason, FrameKind, TraceEvent, TraceKind};
