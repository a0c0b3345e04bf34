use std::time::{Duration, Instant};

use mgood_core::search::Clock;

/// Wall-clock time since construction.
#[derive(Clone, Copy, Debug)]
pub struct InstantClock {
    start: Instant,
}

impl InstantClock {
    pub fn start() -> Self {
        InstantClock { start: Instant::now() }
    }

    pub fn elapsed_ms(&self) -> u64 {
        self.start.elapsed().as_millis() as u64
    }
}

impl Clock for InstantClock {
    fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}
