//! Grid navigation: an agent wanders over a jittered `m x m` grid of
//! locations, reinforcing every connection it traverses by
//! `alpha * (1 - beta * d)`. Periodic planning runs NN-BF from the
//! bottom-left location and reads the path to the top-right one.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{apply_event, weights_digest, LearningConfig, TransitionEvent};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::nnbf::{nnbf_solve, reconstruct_path_from_max_inputs};
use crate::rng_from_seed;

/// Jitter redraws allowed before giving up on connecting start and goal.
const MAX_LAYOUT_ATTEMPTS: usize = 1000;

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Rect {
    pub const fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        Rect { xmin, ymin, xmax, ymax }
    }

    /// Whether the closed segment `p q` touches the rectangle (Liang-Barsky
    /// clipping).
    pub fn intersects_segment(&self, p: (f64, f64), q: (f64, f64)) -> bool {
        let (dx, dy) = (q.0 - p.0, q.1 - p.1);
        let mut t0: f64 = 0.0;
        let mut t1: f64 = 1.0;
        let sides = [
            (-dx, p.0 - self.xmin),
            (dx, self.xmax - p.0),
            (-dy, p.1 - self.ymin),
            (dy, self.ymax - p.1),
        ];
        for (dir, dist) in sides {
            if dir == 0.0 {
                if dist < 0.0 {
                    return false;
                }
            } else {
                let t = dist / dir;
                if dir < 0.0 {
                    if t > t1 {
                        return false;
                    }
                    t0 = t0.max(t);
                } else {
                    if t < t0 {
                        return false;
                    }
                    t1 = t1.min(t);
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Several small boxes, `theta_d = 0.25`.
    Static,
    /// One large central bar, `theta_d = 0.35`, removed mid-run.
    Dynamic,
}

impl Scenario {
    /// Iteration after which the dynamic scenario's obstacle disappears.
    pub fn default_removal(self) -> Option<usize> {
        match self {
            Scenario::Static => None,
            Scenario::Dynamic => Some(1500),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Static => "static",
            Scenario::Dynamic => "dynamic",
        })
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(Scenario::Static),
            "dynamic" => Ok(Scenario::Dynamic),
            other => Err(Error::InvalidConfig(format!(
                "unknown scenario `{other}` (expected static or dynamic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NavConfig {
    pub grid_m: usize,
    /// Grid spacing `h`.
    pub spacing: f64,
    /// Jitter bounds `(a, b)`; each coordinate gets `U(a, b)` added.
    pub noise: (f64, f64),
    /// Largest distance a single move may cover.
    pub theta_d: f64,
    pub obstacles: Vec<Rect>,
    pub seed: u64,
}

impl NavConfig {
    pub fn scenario(scenario: Scenario, seed: u64) -> Self {
        let (theta_d, obstacles) = match scenario {
            Scenario::Static => (
                0.25,
                vec![
                    Rect::new(0.46, 0.3, 0.54, 0.5),
                    Rect::new(0.66, 0.5, 0.74, 0.7),
                    Rect::new(0.3, 0.66, 0.5, 0.74),
                ],
            ),
            Scenario::Dynamic => (0.35, vec![Rect::new(0.3, 0.45, 0.9, 0.75)]),
        };
        NavConfig {
            grid_m: 5,
            spacing: 0.2,
            noise: (-0.05, 0.05),
            theta_d,
            obstacles,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.grid_m < 2 {
            return bad("grid_m must be at least 2");
        }
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return bad("spacing must be positive");
        }
        let (a, b) = self.noise;
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return bad("noise bounds must be finite with a <= b");
        }
        if !(self.theta_d > 0.0 && self.theta_d.is_finite()) {
            return bad("theta_d must be positive");
        }
        Ok(())
    }
}

/// Locations, active obstacles and the feasible moves between them.
///
/// Location `k = (j - 1) m + (i - 1)` sits near `(h i, h j)`, so `0` is the
/// bottom-left start and `m^2 - 1` the top-right goal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "EnvSpec", try_from = "EnvSpec")]
pub struct NavEnvironment {
    config: NavConfig,
    locations: Vec<(f64, f64)>,
    obstacles: Vec<Rect>,
    /// Per location, `(neighbour, distance)` in ascending neighbour order.
    neighbours: Vec<Vec<(usize, f64)>>,
}

#[derive(Serialize, Deserialize)]
struct EnvSpec {
    config: NavConfig,
    locations: Vec<(f64, f64)>,
    active_obstacles: Vec<Rect>,
}

impl From<NavEnvironment> for EnvSpec {
    fn from(env: NavEnvironment) -> Self {
        EnvSpec {
            config: env.config,
            locations: env.locations,
            active_obstacles: env.obstacles,
        }
    }
}

impl TryFrom<EnvSpec> for NavEnvironment {
    type Error = Error;

    fn try_from(spec: EnvSpec) -> Result<Self> {
        spec.config.validate()?;
        let m = spec.config.grid_m;
        if spec.locations.len() != m * m {
            return Err(Error::InvalidConfig(format!(
                "{} locations for a {m}x{m} grid",
                spec.locations.len()
            )));
        }
        let neighbours = feasible_moves(&spec.locations, &spec.active_obstacles, spec.config.theta_d);
        Ok(NavEnvironment {
            config: spec.config,
            locations: spec.locations,
            obstacles: spec.active_obstacles,
            neighbours,
        })
    }
}

fn distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).hypot(p.1 - q.1)
}

fn feasible_moves(locations: &[(f64, f64)], obstacles: &[Rect], theta_d: f64) -> Vec<Vec<(usize, f64)>> {
    locations
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            locations
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .filter_map(|(l, &q)| {
                    let d = distance(p, q);
                    let blocked = obstacles.iter().any(|r| r.intersects_segment(p, q));
                    (d <= theta_d && !blocked).then_some((l, d))
                })
                .collect()
        })
        .collect()
}

impl NavEnvironment {
    /// Lays out the grid and derives the feasible moves.
    ///
    /// Jitter is redrawn from the same stream until start and goal are
    /// connected, so every returned arena is solvable.
    pub fn build(config: &NavConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = rng_from_seed(config.seed);
        let (a, b) = config.noise;
        let m = config.grid_m;
        let attempts = if a == b { 1 } else { MAX_LAYOUT_ATTEMPTS };
        for _ in 0..attempts {
            let mut jitter = || if a == b { a } else { rng.random_range(a..b) };
            let mut locations = Vec::with_capacity(m * m);
            for j in 1..=m {
                for i in 1..=m {
                    let x = config.spacing * i as f64 + jitter();
                    let y = config.spacing * j as f64 + jitter();
                    locations.push((x, y));
                }
            }
            let neighbours = feasible_moves(&locations, &config.obstacles, config.theta_d);
            let env = NavEnvironment {
                config: config.clone(),
                locations,
                obstacles: config.obstacles.clone(),
                neighbours,
            };
            if env.reachable_from_start()[env.goal()] {
                return Ok(env);
            }
        }
        Err(Error::InvalidConfig(
            "no layout connects start and goal; loosen theta_d or the obstacles".into(),
        ))
    }

    pub fn config(&self) -> &NavConfig {
        &self.config
    }

    pub fn location_count(&self) -> usize {
        self.locations.len()
    }

    pub fn locations(&self) -> &[(f64, f64)] {
        &self.locations
    }

    /// Obstacles currently in place.
    pub fn obstacles(&self) -> &[Rect] {
        &self.obstacles
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn goal(&self) -> usize {
        self.locations.len() - 1
    }

    pub fn neighbours(&self, k: usize) -> &[(usize, f64)] {
        &self.neighbours[k]
    }

    /// Feasible moves as unordered pairs `(k, l)`, `k < l`.
    pub fn candidate_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (k, nb) in self.neighbours.iter().enumerate() {
            out.extend(nb.iter().filter(|&&(l, _)| l > k).map(|&(l, _)| (k, l)));
        }
        out
    }

    pub fn distance(&self, k: usize, l: usize) -> f64 {
        distance(self.locations[k], self.locations[l])
    }

    /// Euclidean length of a location sequence.
    pub fn path_length(&self, path: &[usize]) -> f64 {
        path.windows(2).map(|w| self.distance(w[0], w[1])).sum()
    }

    /// Removes every obstacle and returns the directed moves that became
    /// feasible, in ascending `(from, to)` order.
    pub fn clear_obstacles(&mut self) -> Vec<(usize, usize)> {
        let before = self.neighbours.clone();
        self.obstacles.clear();
        self.neighbours = feasible_moves(&self.locations, &self.obstacles, self.config.theta_d);
        let mut added = Vec::new();
        for (k, nb) in self.neighbours.iter().enumerate() {
            for &(l, _) in nb {
                if !before[k].iter().any(|&(x, _)| x == l) {
                    added.push((k, l));
                }
            }
        }
        added
    }

    fn reachable_from_start(&self) -> Vec<bool> {
        let mut seen = vec![false; self.locations.len()];
        let mut queue = VecDeque::from([self.start()]);
        seen[self.start()] = true;
        while let Some(k) = queue.pop_front() {
            for &(l, _) in &self.neighbours[k] {
                if !seen[l] {
                    seen[l] = true;
                    queue.push_back(l);
                }
            }
        }
        seen
    }

    /// Network with one zero-weight connection per feasible directed move.
    pub fn blank_network(&self) -> Result<Network> {
        let mut net = Network::new(self.locations.len())?;
        for (k, nb) in self.neighbours.iter().enumerate() {
            for &(l, _) in nb {
                net.connect(k, l, 0.0)?;
            }
        }
        Ok(net)
    }
}

fn move_event(env: &NavEnvironment, current: usize, next: usize, config: &LearningConfig) -> Result<TransitionEvent> {
    TransitionEvent::new(current, next, 1.0 - config.beta * env.distance(current, next))
}

/// One uniformly random move from `current`.
pub fn nav_explore_step<R: Rng + ?Sized>(
    env: &NavEnvironment,
    current: usize,
    config: &LearningConfig,
    rng: &mut R,
) -> Result<TransitionEvent> {
    let nb = env.neighbours(current);
    if nb.is_empty() {
        return Err(Error::IsolatedLocation(current));
    }
    let (next, _) = nb[rng.random_range(0..nb.len())];
    move_event(env, current, next, config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExplorationPolicy {
    /// Every feasible neighbour equally likely.
    Uniform,
    /// The outgoing move taken least often so far, ties broken uniformly.
    LeastVisited,
}

impl FromStr for ExplorationPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(ExplorationPolicy::Uniform),
            "least-visited" => Ok(ExplorationPolicy::LeastVisited),
            other => Err(Error::InvalidConfig(format!(
                "unknown policy `{other}` (expected uniform or least-visited)"
            ))),
        }
    }
}

/// Stateful move chooser.
#[derive(Debug, Clone)]
pub struct Explorer {
    policy: ExplorationPolicy,
    rng: ChaCha8Rng,
    visits: HashMap<(usize, usize), u64>,
}

impl Explorer {
    /// The layout uses stream 0 of `seed`; exploration draws from stream 1.
    pub fn new(policy: ExplorationPolicy, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        rng.set_stream(1);
        Explorer {
            policy,
            rng,
            visits: HashMap::new(),
        }
    }

    pub fn step(&mut self, env: &NavEnvironment, current: usize, config: &LearningConfig) -> Result<TransitionEvent> {
        let event = match self.policy {
            ExplorationPolicy::Uniform => nav_explore_step(env, current, config, &mut self.rng)?,
            ExplorationPolicy::LeastVisited => {
                let count = |l: usize| self.visits.get(&(current, l)).copied().unwrap_or(0);
                let nb = env.neighbours(current);
                let least = nb
                    .iter()
                    .map(|&(l, _)| count(l))
                    .min()
                    .ok_or(Error::IsolatedLocation(current))?;
                let ties: Vec<usize> = nb.iter().map(|&(l, _)| l).filter(|&l| count(l) == least).collect();
                let next = ties[self.rng.random_range(0..ties.len())];
                move_event(env, current, next, config)?
            }
        };
        *self.visits.entry((event.pre, event.post)).or_insert(0) += 1;
        Ok(event)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NavRunOptions {
    pub iterations: usize,
    /// Obstacles vanish after this many iterations.
    pub obstacle_removal_at: Option<usize>,
    pub policy: ExplorationPolicy,
    /// Seed of the exploration stream.
    pub seed: u64,
    /// Keep full weight lists in the snapshots.
    pub record_weights: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NavSnapshot {
    pub iteration: usize,
    pub planned_path: Option<Vec<usize>>,
    pub path_euclidean_length: Option<f64>,
    pub weights_digest: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weights: Option<Vec<(usize, usize, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NavRunLog {
    pub snapshots: Vec<NavSnapshot>,
    /// Moves skipped because the agent stood on an isolated location.
    pub restarts: usize,
    /// Arena as it was at the end of the run.
    pub environment: NavEnvironment,
    pub network: Vec<(usize, usize, f64)>,
}

fn plan(env: &NavEnvironment, net: &Network) -> Result<Option<Vec<usize>>> {
    let result = nnbf_solve(net, env.start(), true, None)?;
    reconstruct_path_from_max_inputs(&result, env.goal())
}

fn snapshot(env: &NavEnvironment, net: &Network, iteration: usize, record_weights: bool) -> Result<NavSnapshot> {
    let path = plan(env, net)?;
    Ok(NavSnapshot {
        iteration,
        path_euclidean_length: path.as_deref().map(|p| env.path_length(p)),
        planned_path: path,
        weights_digest: weights_digest(net),
        weights: record_weights.then(|| net.connections().collect()),
    })
}

/// Explores and learns for `options.iterations` moves, planning at
/// iteration 0 and every `plan_interval` iterations.
///
/// All weights start at 0. When obstacles are removed, learned weights are
/// kept and newly feasible moves join at weight 0.
pub fn nav_learning_run(env: &NavEnvironment, config: &LearningConfig, options: &NavRunOptions) -> Result<NavRunLog> {
    config.validate()?;
    let mut env = env.clone();
    let mut net = env.blank_network()?;
    let mut explorer = Explorer::new(options.policy, options.seed);
    let mut snapshots = vec![snapshot(&env, &net, 0, options.record_weights)?];
    let mut restarts = 0;
    let mut current = env.start();
    for it in 1..=options.iterations {
        if options.obstacle_removal_at == Some(it - 1) {
            for (k, l) in env.clear_obstacles() {
                net.connect(k, l, 0.0)?;
            }
        }
        match explorer.step(&env, current, config) {
            Ok(event) => {
                apply_event(&mut net, &event, config)?;
                current = event.post;
            }
            Err(Error::IsolatedLocation(_)) => {
                restarts += 1;
                current = env.start();
            }
            Err(e) => return Err(e),
        }
        if it % config.plan_interval == 0 {
            snapshots.push(snapshot(&env, &net, it, options.record_weights)?);
        }
    }
    Ok(NavRunLog {
        snapshots,
        restarts,
        network: net.connections().collect(),
        environment: env,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(theta_d: f64, obstacles: Vec<Rect>) -> NavEnvironment {
        NavEnvironment::build(&NavConfig {
            grid_m: 5,
            spacing: 0.2,
            noise: (0.0, 0.0),
            theta_d,
            obstacles,
            seed: 0,
        })
        .unwrap()
    }

    #[test]
    fn flat_grid_four_neighbours() {
        let env = flat(0.25, vec![]);
        // 2 m (m - 1) grid links
        assert_eq!(env.candidate_edges().len(), 40);
        for (k, l) in env.candidate_edges() {
            assert!((env.distance(k, l) - 0.2).abs() < 1e-12);
        }
        assert_eq!(env.neighbours(0).len(), 2);
        assert_eq!(env.neighbours(12).len(), 4);
    }

    #[test]
    fn flat_grid_with_diagonals() {
        let env = flat(0.35, vec![]);
        // 40 straight links plus 2 (m - 1)^2 diagonals
        assert_eq!(env.candidate_edges().len(), 72);
        assert_eq!(env.neighbours(12).len(), 8);
    }

    #[test]
    fn obstacle_cuts_midpoint() {
        // segment between locations 0 (0.2, 0.2) and 1 (0.4, 0.2)
        let env = flat(0.25, vec![Rect::new(0.29, 0.19, 0.31, 0.21)]);
        assert!(!env.candidate_edges().contains(&(0, 1)));
        assert!(env.candidate_edges().contains(&(0, 5)));
        assert_eq!(env.candidate_edges().len(), 39);
    }

    #[test]
    fn segment_rect_cases() {
        let r = Rect::new(0.0, 0.0, 1.0, 1.0);
        assert!(r.intersects_segment((-1.0, 0.5), (2.0, 0.5)));
        assert!(r.intersects_segment((0.5, 0.5), (0.6, 0.6)));
        assert!(!r.intersects_segment((-1.0, 2.0), (2.0, 2.0)));
        assert!(!r.intersects_segment((-1.0, 0.5), (-0.1, 0.5)));
        assert!(!r.intersects_segment((1.5, -1.0), (2.5, 1.0)));
        assert!(r.intersects_segment((1.0, -1.0), (1.0, 2.0)));
    }

    #[test]
    fn scenarios_are_solvable_and_symmetric() {
        for scenario in [Scenario::Static, Scenario::Dynamic] {
            for seed in 0..20 {
                let env = NavEnvironment::build(&NavConfig::scenario(scenario, seed)).unwrap();
                assert!(env.reachable_from_start()[env.goal()]);
                for k in 0..env.location_count() {
                    for &(l, _) in env.neighbours(k) {
                        assert!(env.neighbours(l).iter().any(|&(x, _)| x == k));
                    }
                }
            }
        }
    }

    #[test]
    fn reward_examples() {
        let env = flat(0.25, vec![]);
        let cfg = LearningConfig::default();
        let mut rng = rng_from_seed(1);
        let ev = nav_explore_step(&env, 0, &cfg, &mut rng).unwrap();
        assert!((ev.reward - 0.8).abs() < 1e-12);
        assert_eq!(ev.pre, 0);
        assert!(ev.post == 1 || ev.post == 5);
    }

    #[test]
    fn isolated_location_is_signalled() {
        let mut env = flat(0.25, vec![]);
        env.neighbours[3].clear();
        let mut rng = rng_from_seed(1);
        assert_eq!(
            nav_explore_step(&env, 3, &LearningConfig::default(), &mut rng),
            Err(Error::IsolatedLocation(3))
        );
    }

    #[test]
    fn least_visited_alternates() {
        let env = flat(0.25, vec![]);
        let cfg = LearningConfig::default();
        let mut ex = Explorer::new(ExplorationPolicy::LeastVisited, 3);
        let a = ex.step(&env, 0, &cfg).unwrap().post;
        let b = ex.step(&env, 0, &cfg).unwrap().post;
        assert_ne!(a, b);
    }

    #[test]
    fn no_learning_no_path() {
        let env = NavEnvironment::build(&NavConfig::scenario(Scenario::Static, 0)).unwrap();
        let opts = NavRunOptions {
            iterations: 0,
            obstacle_removal_at: None,
            policy: ExplorationPolicy::LeastVisited,
            seed: 0,
            record_weights: true,
        };
        let log = nav_learning_run(&env, &LearningConfig::default(), &opts).unwrap();
        assert_eq!(log.snapshots.len(), 1);
        assert_eq!(log.snapshots[0].planned_path, None);
        assert!(log.snapshots[0].weights.as_ref().unwrap().iter().all(|w| w.2 == 0.0));
    }

    #[test]
    fn removal_adds_zero_weight_moves() {
        let env = NavEnvironment::build(&NavConfig::scenario(Scenario::Dynamic, 2)).unwrap();
        let before = env.candidate_edges().len();
        let opts = NavRunOptions {
            iterations: 300,
            obstacle_removal_at: Some(100),
            policy: ExplorationPolicy::Uniform,
            seed: 2,
            record_weights: false,
        };
        let log = nav_learning_run(&env, &LearningConfig::default(), &opts).unwrap();
        assert!(log.environment.obstacles().is_empty());
        assert!(log.environment.candidate_edges().len() > before);
        assert_eq!(log.network.len(), 2 * log.environment.candidate_edges().len());
        assert_eq!(log.snapshots.len(), 4);
    }

    #[test]
    fn env_json_round_trip() {
        let env = NavEnvironment::build(&NavConfig::scenario(Scenario::Static, 4)).unwrap();
        let text = serde_json::to_string(&env).unwrap();
        let back: NavEnvironment = serde_json::from_str(&text).unwrap();
        assert_eq!(back, env);
    }
}
