//! Sequence learning: events are neurons of a complete network; the plan
//! from the first to the last event is executed and each executed pair is
//! rewarded `+1` if it is adjacent in the target and `-1` otherwise.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{apply_event, weights_digest, LearningConfig, TransitionEvent};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::nnbf::{nnbf_solve, reconstruct_path_from_max_inputs};
use crate::rng_from_seed;

pub const DEFAULT_EPOCH_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceTask {
    /// Ordered events; the first is the start event, the last the end event.
    pub alphabet: Vec<char>,
    pub target: Vec<char>,
    pub init_weight_range: (f64, f64),
    pub alpha: f64,
    pub epoch_cap: usize,
    pub seed: u64,
}

impl SequenceTask {
    /// Task over `alphabet` with the usual `U(0, 0.5)` start weights and
    /// `alpha = 0.9`.
    pub fn new(alphabet: &str, target: &str, seed: u64) -> Result<Self> {
        let task = SequenceTask {
            alphabet: alphabet.chars().collect(),
            target: target.chars().collect(),
            init_weight_range: (0.0, 0.5),
            alpha: 0.9,
            epoch_cap: DEFAULT_EPOCH_CAP,
            seed,
        };
        task.validate()?;
        Ok(task)
    }

    /// Target over the letters `A..F`.
    pub fn letters(target: &str, seed: u64) -> Result<Self> {
        Self::new("ABCDEF", target, seed)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.alphabet.len() < 2 {
            return bad("alphabet needs at least two events".into());
        }
        for (i, c) in self.alphabet.iter().enumerate() {
            if self.alphabet[..i].contains(c) {
                return bad(format!("event `{c}` repeated in alphabet"));
            }
        }
        let pos: Vec<usize> = match self
            .target
            .iter()
            .map(|c| self.index_of(*c).ok_or(*c))
            .collect::<std::result::Result<_, char>>()
        {
            Ok(p) => p,
            Err(c) => return bad(format!("event `{c}` not in alphabet")),
        };
        if pos.first() != Some(&0) || pos.last() != Some(&(self.alphabet.len() - 1)) || pos.len() < 2 {
            return bad(format!(
                "target must start with `{}` and end with `{}`",
                self.alphabet[0],
                self.alphabet[self.alphabet.len() - 1]
            ));
        }
        if pos.windows(2).any(|w| w[0] >= w[1]) {
            return bad("target events must follow alphabet order".into());
        }
        let (lo, hi) = self.init_weight_range;
        if !(0.0 <= lo && lo <= hi && hi < 1.0) {
            return bad("init_weight_range must lie in [0, 1)".into());
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad("alpha must be positive".into());
        }
        Ok(())
    }

    fn index_of(&self, c: char) -> Option<usize> {
        self.alphabet.iter().position(|&a| a == c)
    }

    fn target_adjacent(&self, pre: usize, post: usize) -> bool {
        self.target
            .windows(2)
            .any(|w| self.index_of(w[0]) == Some(pre) && self.index_of(w[1]) == Some(post))
    }

    pub fn learning_config(&self) -> LearningConfig {
        LearningConfig {
            alpha: self.alpha,
            ..LearningConfig::default()
        }
    }
}

/// Complete network over the alphabet, weights drawn from
/// `init_weight_range` in `(pre, post)` row-major order.
pub fn seq_network(task: &SequenceTask) -> Result<Network> {
    let n = task.alphabet.len();
    let (lo, hi) = task.init_weight_range;
    let mut rng = rng_from_seed(task.seed);
    let mut net = Network::new(n)?;
    for pre in 0..n {
        for post in (0..n).filter(|&p| p != pre) {
            let w = if lo == hi { lo } else { rng.random_range(lo..hi) };
            net.connect(pre, post, w)?;
        }
    }
    Ok(net)
}

/// Best-product event sequence from the first to the last event.
pub fn seq_plan(network: &Network, task: &SequenceTask) -> Result<Vec<char>> {
    let end = task.alphabet.len() - 1;
    let result = nnbf_solve(network, 0, true, None)?;
    let path = reconstruct_path_from_max_inputs(&result, end)?.ok_or(Error::Unplannable)?;
    Ok(path.into_iter().map(|i| task.alphabet[i]).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    /// Learning epochs completed before this plan.
    pub epoch: usize,
    pub planned: String,
    pub weights_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceRun {
    pub seed: u64,
    pub epochs: Vec<EpochRecord>,
    /// Epochs of learning after which the plan first matched the target.
    pub converged_at: Option<usize>,
}

/// One epoch: plans, then rewards each executed pair. Returns the plan
/// that was executed.
pub fn seq_epoch(network: &mut Network, task: &SequenceTask, config: &LearningConfig) -> Result<Vec<char>> {
    let plan = seq_plan(network, task)?;
    for w in plan.windows(2) {
        let pre = task.index_of(w[0]).expect("planned events come from the alphabet");
        let post = task.index_of(w[1]).expect("planned events come from the alphabet");
        let reward = if task.target_adjacent(pre, post) { 1.0 } else { -1.0 };
        apply_event(network, &TransitionEvent::new(pre, post, reward)?, config)?;
    }
    Ok(plan)
}

/// Plans, rewards the executed pairs, and repeats until the plan equals the
/// target or `epoch_cap` learning epochs have run.
pub fn seq_learning_run(task: &SequenceTask) -> Result<SequenceRun> {
    task.validate()?;
    let config = task.learning_config();
    let mut net = seq_network(task)?;
    let mut epochs = Vec::new();
    let mut converged_at = None;
    for epoch in 0..=task.epoch_cap {
        let plan = seq_plan(&net, task)?;
        epochs.push(EpochRecord {
            epoch,
            planned: plan.iter().collect(),
            weights_digest: weights_digest(&net),
        });
        if plan == task.target {
            converged_at = Some(epoch);
            break;
        }
        if epoch == task.epoch_cap {
            break;
        }
        seq_epoch(&mut net, task, &config)?;
    }
    Ok(SequenceRun {
        seed: task.seed,
        epochs,
        converged_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SequenceTask::letters("ABCDEF", 0).is_ok());
        assert!(SequenceTask::letters("ACDF", 0).is_ok());
        assert!(SequenceTask::letters("AXF", 0).is_err());
        assert!(SequenceTask::letters("BCF", 0).is_err());
        assert!(SequenceTask::letters("ACE", 0).is_err());
        assert!(SequenceTask::letters("ADCF", 0).is_err());
        assert!(SequenceTask::letters("A", 0).is_err());
        assert!(SequenceTask::new("AA", "AA", 0).is_err());
    }

    #[test]
    fn plan_follows_best_product() {
        let task = SequenceTask::letters("ABCDEF", 0).unwrap();
        let mut net = seq_network(&task).unwrap();
        for (pre, post, _) in net.connections().collect::<Vec<_>>() {
            net.set_weight(pre, post, 0.1).unwrap();
        }
        net.set_weight(0, 1, 0.4).unwrap();
        net.set_weight(1, 5, 0.3).unwrap();
        assert_eq!(seq_plan(&net, &task).unwrap(), vec!['A', 'B', 'F']);
    }

    #[test]
    fn two_letter_alphabet() {
        let task = SequenceTask::new("AF", "AF", 5).unwrap();
        let run = seq_learning_run(&task).unwrap();
        assert_eq!(run.converged_at, Some(0));
        assert_eq!(run.epochs[0].planned, "AF");
    }

    #[test]
    fn learns_full_sequence() {
        for seed in 0..10 {
            let run = seq_learning_run(&SequenceTask::letters("ABCDEF", seed).unwrap()).unwrap();
            let at = run.converged_at.unwrap();
            assert!(at <= 50);
            assert_eq!(run.epochs.last().unwrap().planned, "ABCDEF");
            assert_eq!(run.epochs.len(), at + 1);
        }
    }

    #[test]
    fn unreachable_end_is_unplannable() {
        let task = SequenceTask::letters("ABCDEF", 0).unwrap();
        let mut net = seq_network(&task).unwrap();
        for pre in 0..5 {
            net.set_weight(pre, 5, 0.0).unwrap();
        }
        assert_eq!(seq_plan(&net, &task), Err(Error::Unplannable));
    }
}
