//! Shared-channel unit-disk radio with reception-overlap collisions.

use std::collections::BTreeMap;
use std::time::Duration;

use super::scenario::Pos;
use crate::time::Time;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioConfig {
    pub range: f64,
    pub bitrate: f64,
    pub collisions: bool,
}

/// Time on air for `bytes` at `bitrate`, rounded up to whole microseconds.
pub fn transmission_time(bytes: usize, bitrate: f64) -> Duration {
    Duration::from_micros((bytes as f64 * 8.0 / bitrate * 1e6).ceil() as u64)
}

/// Propagation delay over `distance` metres, rounded up to whole microseconds.
pub fn propagation_delay(distance: f64) -> Duration {
    Duration::from_micros((distance / SPEED_OF_LIGHT * 1e6).ceil() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reception {
    pub id: u64,
    pub sender: usize,
    pub receiver: usize,
    pub start: Time,
    pub end: Time,
    pub collided: bool,
}

/// Tracks receptions in progress at each node.
#[derive(Debug, Clone, Default)]
pub struct Medium {
    next_id: u64,
    active: BTreeMap<u64, Reception>,
    by_receiver: BTreeMap<usize, Vec<u64>>,
}

impl Medium {
    pub fn new() -> Self {
        Self::default()
    }

    /// Put a frame of `bytes` on the air from `sender` at `start`. Returns
    /// the receptions created, one per node within range, ordered by node.
    pub fn transmit(
        &mut self,
        cfg: &RadioConfig,
        positions: &[Pos],
        sender: usize,
        start: Time,
        bytes: usize,
    ) -> Vec<Reception> {
        let air = transmission_time(bytes, cfg.bitrate);
        let mut out = Vec::new();
        for (r, &p) in positions.iter().enumerate() {
            let d = positions[sender].distance(p);
            if r == sender || d > cfg.range {
                continue;
            }
            let begin = start + propagation_delay(d);
            let mut rx =
                Reception { id: self.next_id, sender, receiver: r, start: begin, end: begin + air, collided: false };
            self.next_id += 1;
            let ids = self.by_receiver.entry(r).or_default();
            if cfg.collisions {
                for other in ids.iter() {
                    let o = self.active.get_mut(other).expect("indexed reception");
                    if o.start < rx.end && rx.start < o.end {
                        o.collided = true;
                        rx.collided = true;
                    }
                }
            }
            ids.push(rx.id);
            self.active.insert(rx.id, rx.clone());
            out.push(rx);
        }
        out
    }

    /// Finish a reception, returning its final collision status.
    pub fn complete(&mut self, id: u64) -> Option<Reception> {
        let rx = self.active.remove(&id)?;
        if let Some(ids) = self.by_receiver.get_mut(&rx.receiver) {
            ids.retain(|&i| i != id);
        }
        Some(rx)
    }

    pub fn in_progress(&self) -> usize {
        self.active.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(collisions: bool) -> RadioConfig {
        RadioConfig { range: 250.0, bitrate: 2e6, collisions }
    }

    fn line() -> Vec<Pos> {
        [0.0, 200.0, 400.0].iter().map(|&x| Pos { x, y: 0.0 }).collect()
    }

    #[test]
    fn timing() {
        assert_eq!(transmission_time(100, 2e6), Duration::from_micros(400));
        assert_eq!(transmission_time(1, 2e6), Duration::from_micros(4));
        assert_eq!(propagation_delay(0.0), Duration::ZERO);
        assert_eq!(propagation_delay(250.0), Duration::from_micros(1));
    }

    #[test]
    fn unit_disk_reach() {
        let mut m = Medium::new();
        let rx = m.transmit(&cfg(true), &line(), 0, Time::ZERO, 10);
        assert_eq!(rx.iter().map(|r| r.receiver).collect::<Vec<_>>(), vec![1]);
        let rx = m.transmit(&cfg(true), &line(), 1, Time::from_micros(10_000), 10);
        assert_eq!(rx.iter().map(|r| r.receiver).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn hidden_terminal_destroys_both() {
        let mut m = Medium::new();
        let a = m.transmit(&cfg(true), &line(), 0, Time::ZERO, 100);
        let b = m.transmit(&cfg(true), &line(), 2, Time::from_micros(200), 100);
        assert!(m.complete(a[0].id).unwrap().collided);
        assert!(m.complete(b[0].id).unwrap().collided);
        assert_eq!(m.in_progress(), 0);
    }

    #[test]
    fn back_to_back_frames_do_not_collide() {
        let mut m = Medium::new();
        let a = m.transmit(&cfg(true), &line(), 0, Time::ZERO, 100);
        let end = a[0].end;
        let b = m.transmit(&cfg(true), &line(), 2, end, 100);
        assert!(!m.complete(a[0].id).unwrap().collided);
        assert!(!m.complete(b[0].id).unwrap().collided);
    }

    #[test]
    fn collisions_can_be_disabled() {
        let mut m = Medium::new();
        let a = m.transmit(&cfg(false), &line(), 0, Time::ZERO, 100);
        let b = m.transmit(&cfg(false), &line(), 2, Time::ZERO, 100);
        assert!(!m.complete(a[0].id).unwrap().collided);
        assert!(!m.complete(b[0].id).unwrap().collided);
    }
}
