//! Ascent strategies and the registry that selects them by name.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fixed_point::FixedPoint;
use super::problem::Problem;
use super::projected::ProjectedGradient;
use super::simplex::SimplexSupport;
use super::SolverOptions;
use crate::error::{Error, Result};

/// Where a restart begins. Entries outside `support` start (and stay) at
/// zero for the multiplicative schemes.
#[derive(Clone, Debug, PartialEq)]
pub enum StartPoint {
    Uniform { support: Option<Vec<usize>> },
    Random { support: Option<Vec<usize>>, seed: u64 },
}

impl StartPoint {
    /// The start as a point on the nonnegative unit p-sphere.
    pub fn realize(&self, problem: &Problem) -> Vec<f64> {
        let n = problem.n();
        let mut x = vec![0.0; n];
        let all: Vec<usize>;
        let (support, seed) = match self {
            StartPoint::Uniform { support } => (support, None),
            StartPoint::Random { support, seed } => (support, Some(*seed)),
        };
        let support: &[usize] = match support {
            Some(s) => s,
            None => {
                all = (0..n).collect();
                &all
            }
        };
        match seed {
            None => support.iter().for_each(|&v| x[v] = 1.0),
            Some(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                support.iter().for_each(|&v| x[v] = rng.gen_range(0.05..1.0));
            }
        }
        problem.normalize(&mut x);
        x
    }
}

/// Output of a single ascent run, before polishing.
#[derive(Clone, Debug)]
pub struct Ascent {
    pub x: Vec<f64>,
    pub iterations: usize,
}

/// An ascent scheme for the constrained maximum of the polynomial form.
///
/// Implementations must be deterministic functions of their inputs so that
/// restarts can run on any number of workers.
pub trait AscentStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn applicable(&self, rank: usize, p: f64) -> bool;

    fn starts(&self, problem: &Problem, opts: &SolverOptions) -> Vec<StartPoint> {
        default_starts(problem, opts)
    }

    /// Ascends from `x0` (unit p-norm) until the residual drops below
    /// `handoff` or progress stalls.
    fn ascend(&self, problem: &Problem, x0: Vec<f64>, opts: &SolverOptions) -> Ascent;
}

/// Stopping residual of the ascent phase, relative to `max(1, lambda)`;
/// Newton polishing takes over below it.
pub(crate) const HANDOFF: f64 = 1e-8;

/// Iterations without relative improvement beyond `1e-14` before giving up.
pub(crate) const STALL: usize = 400;

/// SplitMix64 finalizer over `(seed, index)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Restart 0 from the uniform point, the rest from seeded random points.
pub fn default_starts(_problem: &Problem, opts: &SolverOptions) -> Vec<StartPoint> {
    (0..opts.restarts.max(1))
        .map(|i| {
            if i == 0 {
                StartPoint::Uniform { support: None }
            } else {
                StartPoint::Random { support: None, seed: derive_seed(opts.seed, i as u64) }
            }
        })
        .collect()
}

pub(crate) struct Stall {
    best: f64,
    since: usize,
}

impl Stall {
    pub(crate) fn new() -> Self {
        Stall { best: f64::NEG_INFINITY, since: 0 }
    }

    /// Records `value`; true once progress has stopped.
    pub(crate) fn stalled(&mut self, value: f64) -> bool {
        if value > self.best + 1e-14 * self.best.abs().max(1.0) {
            self.best = value;
            self.since = 0;
        } else {
            self.since += 1;
        }
        self.since > STALL
    }
}

#[derive(Clone)]
pub struct StrategyRegistry {
    entries: Vec<Arc<dyn AscentStrategy>>,
}

pub const AUTO: &str = "auto";

impl Default for StrategyRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry { entries: Vec::new() }
    }

    pub fn with_defaults() -> Self {
        let mut reg = Self::empty();
        reg.register(Arc::new(FixedPoint));
        reg.register(Arc::new(ProjectedGradient));
        reg.register(Arc::new(SimplexSupport));
        reg
    }

    /// Adds a strategy, replacing any existing one with the same name.
    pub fn register(&mut self, strategy: Arc<dyn AscentStrategy>) {
        self.entries.retain(|s| s.name() != strategy.name());
        self.entries.push(strategy);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|s| s.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn AscentStrategy>> {
        self.entries.iter().find(|s| s.name() == name).cloned().ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    /// `auto`: simplex faces at `p = 1`, projected gradient for
    /// `1 < p <= r - 1`, the damped fixed point above `r - 1`.
    pub fn select(&self, name: &str, rank: usize, p: f64) -> Result<Arc<dyn AscentStrategy>> {
        let resolved = if name == AUTO { auto_name(rank, p) } else { name };
        let s = self.get(resolved)?;
        if !s.applicable(rank, p) {
            return Err(Error::param(format!("strategy `{resolved}` does not apply at rank {rank}, p = {p}")));
        }
        Ok(s)
    }
}

pub fn auto_name(rank: usize, p: f64) -> &'static str {
    if p == 1.0 {
        "simplex-support"
    } else if p <= rank as f64 - 1.0 {
        "projected-gradient"
    } else {
        "fixed-point"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_follows_exponent_regimes() {
        assert_eq!(auto_name(3, 1.0), "simplex-support");
        assert_eq!(auto_name(3, 1.5), "projected-gradient");
        assert_eq!(auto_name(3, 2.0), "projected-gradient");
        assert_eq!(auto_name(3, 2.5), "fixed-point");
        assert_eq!(auto_name(2, 1.2), "fixed-point");
    }

    #[test]
    fn registry_lookup_and_replacement() {
        let mut reg = StrategyRegistry::with_defaults();
        assert_eq!(reg.names(), ["fixed-point", "projected-gradient", "simplex-support"]);
        assert!(matches!(reg.get("nope"), Err(Error::UnknownStrategy(_))));
        assert!(reg.select("fixed-point", 3, 1.0).is_err());
        reg.register(Arc::new(FixedPoint));
        assert_eq!(reg.names().len(), 3);
    }

    #[test]
    fn derived_seeds_differ() {
        let s: Vec<u64> = (0..4).map(|i| derive_seed(7, i)).collect();
        assert!(s.windows(2).all(|w| w[0] != w[1]));
        assert_eq!(derive_seed(7, 3), s[3]);
    }
}
