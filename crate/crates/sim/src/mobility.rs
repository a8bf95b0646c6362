use ara_core::Time;

use crate::{Position, SimRng};

#[derive(Debug, Clone, PartialEq)]
pub struct RandomWaypoint {
    /// Speed range in m/s; `speed_min` must be positive.
    pub speed_min: f64,
    pub speed_max: f64,
    pub pause: Time,
    /// Time between position updates.
    pub interval: Time,
    /// Movement area `[0, width] × [0, height]` in metres.
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum MobilityModel {
    #[default]
    Static,
    RandomWaypoint(RandomWaypoint),
}

/// Current leg of one node's random-waypoint walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leg {
    pub target: Position,
    pub speed: f64,
    /// Set once the target is reached: when the node may leave again.
    pub pause_until: Option<Time>,
    pub arrived_at: Option<Time>,
}

impl Leg {
    pub fn new(target: Position, speed: f64) -> Self {
        Self {
            target,
            speed,
            pause_until: None,
            arrived_at: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MobilityState {
    model: RandomWaypoint,
    legs: Vec<Leg>,
}

impl MobilityState {
    /// Draws a first leg for every node: target x, target y, then speed,
    /// in address order.
    pub fn init(model: RandomWaypoint, nodes: usize, rng: &mut SimRng) -> Self {
        let legs = (0..nodes).map(|_| draw_leg(&model, rng)).collect();
        Self { model, legs }
    }

    pub fn with_legs(model: RandomWaypoint, legs: Vec<Leg>) -> Self {
        Self { model, legs }
    }

    pub fn model(&self) -> &RandomWaypoint {
        &self.model
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    /// Moves every node over the update interval that ends at `now`.
    ///
    /// A node that reaches its target stops there for the pause time; the
    /// first step after the pause draws a new leg. Movement left over in the
    /// step during which a node arrives or resumes is discarded.
    pub fn step(&mut self, positions: &mut [Position], rng: &mut SimRng, now: Time) {
        let dt = self.model.interval.as_secs_f64();
        let start = now.saturating_sub(self.model.interval);
        for (pos, leg) in positions.iter_mut().zip(self.legs.iter_mut()) {
            if let Some(until) = leg.pause_until {
                if now < until {
                    continue;
                }
                *leg = draw_leg(&self.model, rng);
                continue;
            }
            let remaining = pos.distance(&leg.target);
            let travel = leg.speed * dt;
            if travel >= remaining - 1e-9 {
                *pos = leg.target;
                let arrival = start + Time::from_secs_f64(remaining / leg.speed);
                leg.arrived_at = Some(arrival);
                leg.pause_until = Some(arrival + self.model.pause);
            } else {
                let f = travel / remaining;
                pos.x += (leg.target.x - pos.x) * f;
                pos.y += (leg.target.y - pos.y) * f;
            }
            pos.x = pos.x.clamp(0.0, self.model.width);
            pos.y = pos.y.clamp(0.0, self.model.height);
        }
    }
}

fn draw_leg(model: &RandomWaypoint, rng: &mut SimRng) -> Leg {
    let x = rng.uniform(0.0, model.width);
    let y = rng.uniform(0.0, model.height);
    let speed = rng.uniform(model.speed_min, model.speed_max);
    Leg::new(Position::new(x, y), speed)
}
