//! Random Waypoint mobility.

use std::time::Duration;

use rand::Rng;

use super::scenario::Pos;
use crate::time::Time;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaypointParams {
    pub area: (f64, f64),
    pub speed: (f64, f64),
    pub pause: Duration,
}

impl WaypointParams {
    pub fn is_static(&self) -> bool {
        self.speed.1 <= 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Waypoint {
    pub pos: Pos,
    target: Option<(Pos, f64)>,
    pause_until: Time,
}

impl Waypoint {
    pub fn new(pos: Pos) -> Self {
        Waypoint { pos, target: None, pause_until: Time::ZERO }
    }

    /// Current destination and speed, if moving.
    pub fn target(&self) -> Option<(Pos, f64)> {
        self.target
    }

    fn pick<R: Rng>(&mut self, p: &WaypointParams, rng: &mut R) {
        let dest = Pos { x: rng.gen_range(0.0..=p.area.0), y: rng.gen_range(0.0..=p.area.1) };
        let speed = if p.speed.0 < p.speed.1 { rng.gen_range(p.speed.0..=p.speed.1) } else { p.speed.0 };
        self.target = Some((dest, speed));
    }

    /// Advance from `now` by `dt`. Static parameters never draw from `rng`.
    pub fn step<R: Rng>(&mut self, now: Time, dt: Duration, p: &WaypointParams, rng: &mut R) {
        if p.is_static() || now < self.pause_until {
            return;
        }
        if self.target.is_none() {
            self.pick(p, rng);
        }
        let Some((dest, speed)) = self.target else { return };
        let remaining = self.pos.distance(dest);
        let travel = speed * dt.as_secs_f64();
        if travel >= remaining {
            self.pos = dest;
            self.target = None;
            self.pause_until = now + dt + p.pause;
        } else {
            let f = travel / remaining;
            self.pos = Pos { x: self.pos.x + (dest.x - self.pos.x) * f, y: self.pos.y + (dest.y - self.pos.y) * f };
        }
    }
}
