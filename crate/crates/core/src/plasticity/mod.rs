//! Three-factor Hebbian learning on NN-BF networks.
//!
//! A weight changes by `alpha * o_pre * o_post * R` and is clamped to
//! `[weight_min, weight_max]`. During a learning event the two neurons of
//! the traversed connection receive external input, which clamps both
//! outputs to 1, so the change reduces to `alpha * R`. Planning never sees
//! external input and never writes weights.

mod nav;
mod seq;

pub use nav::{
    nav_explore_step, nav_learning_run, ExplorationPolicy, Explorer, NavConfig, NavEnvironment,
    NavRunLog, NavRunOptions, NavSnapshot, Rect, Scenario,
};
pub use seq::{
    seq_epoch, seq_learning_run, seq_network, seq_plan, EpochRecord, SequenceRun, SequenceTask,
    DEFAULT_EPOCH_CAP,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Network;
use crate::manifest::sha256_hex;

/// Largest weight a connection can reach; just below 1 so that no learned
/// connection behaves like a zero-cost edge.
pub const WEIGHT_MAX: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearningConfig {
    pub alpha: f64,
    /// Reward slope: `R = 1 - beta * d` for a move of length `d`.
    pub beta: f64,
    pub weight_min: f64,
    pub weight_max: f64,
    /// Iterations between planning snapshots.
    pub plan_interval: usize,
}

impl Default for LearningConfig {
    fn default() -> Self {
        LearningConfig {
            alpha: 0.02,
            beta: 1.0,
            weight_min: 0.0,
            weight_max: WEIGHT_MAX,
            plan_interval: 100,
        }
    }
}

impl LearningConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!("alpha {} must be > 0", self.alpha)));
        }
        if !self.beta.is_finite() {
            return Err(Error::InvalidConfig("beta must be finite".into()));
        }
        if !(0.0 <= self.weight_min && self.weight_min < self.weight_max && self.weight_max < 1.0) {
            return Err(Error::InvalidConfig(
                "weight bounds must satisfy 0 <= min < max < 1".into(),
            ));
        }
        if self.plan_interval == 0 {
            return Err(Error::InvalidConfig("plan_interval must be positive".into()));
        }
        Ok(())
    }
}

/// One traversal of the connection `pre -> post` with its reward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionEvent {
    pub pre: usize,
    pub post: usize,
    pub reward: f64,
}

impl TransitionEvent {
    pub fn new(pre: usize, post: usize, reward: f64) -> Result<Self> {
        if pre == post {
            return Err(Error::SelfLoop(pre));
        }
        Ok(TransitionEvent { pre, post, reward })
    }

    /// External input `I_e` seen by `neuron` during the event.
    pub fn external_input(&self, neuron: usize) -> f64 {
        if neuron == self.pre || neuron == self.post {
            1.0
        } else {
            0.0
        }
    }
}

pub fn hebbian_update(w: f64, o_pre: f64, o_post: f64, reward: f64, config: &LearningConfig) -> f64 {
    (w + config.alpha * o_pre * o_post * reward).clamp(config.weight_min, config.weight_max)
}

/// Applies `event` to `network` in learning mode and returns the new weight.
pub fn apply_event(network: &mut Network, event: &TransitionEvent, config: &LearningConfig) -> Result<f64> {
    let w = network
        .weight(event.pre, event.post)
        .ok_or(Error::MissingEdge(event.pre, event.post))?;
    let o_pre = event.external_input(event.pre);
    let o_post = event.external_input(event.post);
    let updated = hebbian_update(w, o_pre, o_post, event.reward, config);
    network.set_weight(event.pre, event.post, updated)?;
    Ok(updated)
}

/// sha256 over `(pre, post, weight)` of every connection, in
/// [`Network::connections`] order, as little-endian bytes.
pub fn weights_digest(network: &Network) -> String {
    let mut bytes = Vec::with_capacity(network.connection_count() * 24);
    for (pre, post, w) in network.connections() {
        bytes.extend_from_slice(&(pre as u64).to_le_bytes());
        bytes.extend_from_slice(&(post as u64).to_le_bytes());
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    sha256_hex(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn update_examples() {
        let cfg = LearningConfig::default();
        assert!((hebbian_update(0.2, 1.0, 1.0, 0.8, &cfg) - 0.216).abs() < 1e-15);
        assert_eq!(hebbian_update(0.37, 1.0, 1.0, 0.0, &cfg), 0.37);
        let seq = LearningConfig { alpha: 0.9, ..cfg };
        assert_eq!(hebbian_update(0.5, 1.0, 1.0, 1.0, &seq), WEIGHT_MAX);
        assert_eq!(hebbian_update(0.5, 1.0, 1.0, -1.0, &seq), 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(LearningConfig::default().validate().is_ok());
        let bad = LearningConfig { weight_max: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = LearningConfig { alpha: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn event_touches_one_connection() {
        let mut net = Network::new(3).unwrap();
        net.connect(0, 1, 0.1).unwrap();
        net.connect(1, 2, 0.2).unwrap();
        net.connect(1, 0, 0.3).unwrap();
        let ev = TransitionEvent::new(0, 1, 0.5).unwrap();
        assert_eq!(ev.external_input(2), 0.0);
        let w = apply_event(&mut net, &ev, &LearningConfig::default()).unwrap();
        assert!((w - 0.11).abs() < 1e-15);
        assert_eq!(net.weight(1, 2), Some(0.2));
        assert_eq!(net.weight(1, 0), Some(0.3));
        let missing = TransitionEvent::new(2, 0, 1.0).unwrap();
        assert_eq!(
            apply_event(&mut net, &missing, &LearningConfig::default()),
            Err(Error::MissingEdge(2, 0))
        );
        assert_eq!(TransitionEvent::new(1, 1, 0.0), Err(Error::SelfLoop(1)));
    }

    #[test]
    fn digest_tracks_weights() {
        let mut net = Network::new(2).unwrap();
        net.connect(0, 1, 0.0).unwrap();
        let d0 = weights_digest(&net);
        net.set_weight(0, 1, 0.5).unwrap();
        assert_ne!(weights_digest(&net), d0);
        net.set_weight(0, 1, 0.0).unwrap();
        assert_eq!(weights_digest(&net), d0);
    }
}
