//! Simulated clock.
//!
//! Timestamps are integer microseconds so event ordering never depends on
//! floating-point rounding.

use std::fmt;
use std::ops::{Add, AddAssign, Sub};
use std::time::Duration;

/// A point on the simulated timeline, in microseconds since start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Time(u64);

impl Time {
    pub const ZERO: Time = Time(0);

    pub const fn from_micros(us: u64) -> Self {
        Time(us)
    }

    pub fn from_secs_f64(secs: f64) -> Self {
        Time((secs * 1e6).round().max(0.0) as u64)
    }

    pub const fn as_micros(self) -> u64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 1e6
    }

    /// Time elapsed since `earlier`, saturating at zero.
    pub fn saturating_since(self, earlier: Time) -> Duration {
        Duration::from_micros(self.0.saturating_sub(earlier.0))
    }

    /// One microsecond before `self`; used to mark a timestamp as already expired.
    pub fn just_before(self) -> Time {
        Time(self.0.saturating_sub(1))
    }
}

impl Add<Duration> for Time {
    type Output = Time;

    fn add(self, d: Duration) -> Time {
        Time(self.0.saturating_add(d.as_micros() as u64))
    }
}

impl AddAssign<Duration> for Time {
    fn add_assign(&mut self, d: Duration) {
        *self = *self + d;
    }
}

impl Sub<Duration> for Time {
    type Output = Time;

    fn sub(self, d: Duration) -> Time {
        Time(self.0.saturating_sub(d.as_micros() as u64))
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_saturates() {
        let t = Time::from_micros(5);
        assert_eq!(t - Duration::from_secs(1), Time::ZERO);
        assert_eq!(t.just_before(), Time::from_micros(4));
        assert_eq!(Time::ZERO.just_before(), Time::ZERO);
        assert_eq!(Time::from_secs_f64(0.5) + Duration::from_millis(500), Time::from_micros(1_000_000));
        assert_eq!(Time::from_micros(3).saturating_since(Time::from_micros(9)), Duration::ZERO);
    }
}
