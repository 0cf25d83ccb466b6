use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Edge, Graph};
use crate::error::{Error, Result};
use crate::rng_from_seed;

/// Closed cost interval `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostRange {
    pub min: f64,
    pub max: f64,
}

impl CostRange {
    pub const fn new(min: f64, max: f64) -> Self {
        CostRange { min, max }
    }

    fn validate(&self, what: &str) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() || self.min > self.max {
            return Err(Error::InvalidConfig(format!(
                "{what} range [{}, {}] is empty or not finite",
                self.min, self.max
            )));
        }
        Ok(())
    }

    fn sample<R: Rng>(&self, rng: &mut R, integer: bool) -> f64 {
        if integer {
            let (lo, hi) = (self.min.ceil() as i64, self.max.floor() as i64);
            rng.random_range(lo..=hi) as f64
        } else if self.min == self.max {
            self.min
        } else {
            rng.random_range(self.min..=self.max)
        }
    }
}

/// Parameters of the random directed graph generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub node_count: usize,
    /// Probability that an ordered pair `(u, v)`, `u != v`, gets an edge.
    pub edge_prob: f64,
    pub pos_cost_range: CostRange,
    pub neg_cost_range: CostRange,
    /// Probability that an edge's cost comes from `neg_cost_range`.
    pub neg_prob: f64,
    /// Draw integer costs (uniform over the integers inside the range).
    #[serde(default)]
    pub integer_costs: bool,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            node_count: 100,
            edge_prob: 0.1,
            pos_cost_range: CostRange::new(1.0, 100.0),
            neg_cost_range: CostRange::new(-10.0, -1.0),
            neg_prob: 0.0,
            integer_costs: true,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    /// Positive-cost config with integer costs in `[1, cost_max]`.
    pub fn positive(node_count: usize, edge_prob: f64, cost_max: f64, seed: u64) -> Self {
        GeneratorConfig {
            node_count,
            edge_prob,
            pos_cost_range: CostRange::new(1.0, cost_max),
            seed,
            ..Default::default()
        }
    }

    /// Same config with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorConfig {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        for (name, p) in [("edge_prob", self.edge_prob), ("neg_prob", self.neg_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("{name} {p} not in [0, 1]")));
            }
        }
        self.pos_cost_range.validate("positive cost")?;
        if self.pos_cost_range.min <= 0.0 {
            return Err(Error::InvalidConfig(
                "positive cost range must have a lower bound > 0".into(),
            ));
        }
        if self.neg_prob > 0.0 {
            self.neg_cost_range.validate("negative cost")?;
            if self.neg_cost_range.max >= 0.0 {
                return Err(Error::InvalidConfig(
                    "negative cost range must have an upper bound < 0".into(),
                ));
            }
        }
        if self.integer_costs {
            let mut ranges = vec![self.pos_cost_range];
            if self.neg_prob > 0.0 {
                ranges.push(self.neg_cost_range);
            }
            for r in ranges {
                if r.min.ceil() > r.max.floor() {
                    return Err(Error::InvalidConfig(format!(
                        "range [{}, {}] contains no integer",
                        r.min, r.max
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Draws a random directed graph.
///
/// Ordered pairs are visited source-major (`u` ascending, then `v`
/// ascending); each pair gets an edge with probability `edge_prob`. The cost
/// is drawn from the negative range with probability `neg_prob`, otherwise
/// from the positive range. The same config always yields the same graph.
pub fn generate_random_graph(config: &GeneratorConfig) -> Result<Graph> {
    config.validate()?;
    let n = config.node_count;
    let mut rng = rng_from_seed(config.seed);
    let expected = (config.edge_prob * (n * n.saturating_sub(1)) as f64) as usize;
    let mut edges = Vec::with_capacity(expected + expected / 16 + 8);
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            if !rng.random_bool(config.edge_prob) {
                continue;
            }
            let negative = config.neg_prob > 0.0 && rng.random_bool(config.neg_prob);
            let range = if negative {
                &config.neg_cost_range
            } else {
                &config.pos_cost_range
            };
            edges.push(Edge::new(u, v, range.sample(&mut rng, config.integer_costs)));
        }
    }
    Ok(Graph::new_unchecked(n, edges))
}
