//! Random juggling walks and their empirical occupancy.
//!
//! Walks are driven by ChaCha8 seeded from a `u64`, so a given
//! `(matrix, start, steps, seed)` produces the same report on every
//! platform. Each row is sampled by inverting its cumulative distribution,
//! converted to `f64` once when the [`Walker`] is built.

use std::fmt::Display;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::chains::{rational_to_f64, stationary_exact, TransitionMatrix};
use crate::error::{range, Error, Result};
use crate::par::{map_collect, Execution};

/// Outcome of one walk (or the merge of several).
#[derive(Debug, Clone, PartialEq)]
pub struct WalkReport {
    pub steps: u64,
    pub seed: u64,
    pub states: Vec<String>,
    /// Visits per state, indexed like `states`; sums to `steps`.
    pub occupancy: Vec<u64>,
    pub empirical: Vec<f64>,
    pub tv_distance: f64,
}

impl WalkReport {
    /// Sum the occupancies of `self` and `other` and recompute the empirical
    /// vector. The reference distribution must be supplied again.
    pub fn merge(&self, other: &WalkReport, reference: &[f64]) -> Result<WalkReport> {
        if self.states != other.states {
            return Err(Error::Shape {
                left: self.states.len(),
                right: other.states.len(),
            });
        }
        let occupancy: Vec<u64> = self
            .occupancy
            .iter()
            .zip(&other.occupancy)
            .map(|(a, b)| a + b)
            .collect();
        let steps = self.steps + other.steps;
        let empirical = normalise(&occupancy, steps);
        let tv = tv_distance(&empirical, reference)?;
        Ok(WalkReport {
            steps,
            seed: self.seed.min(other.seed),
            states: self.states.clone(),
            occupancy,
            empirical,
            tv_distance: tv,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

// {steps, seed, occupancy: {state: count} (visited states, canonical order), tv_distance}
impl Serialize for WalkReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Occupancy<'a>(&'a WalkReport);
        impl Serialize for Occupancy<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let visited: Vec<_> = self
                    .0
                    .states
                    .iter()
                    .zip(&self.0.occupancy)
                    .filter(|(_, &c)| c > 0)
                    .collect();
                let mut map = serializer.serialize_map(Some(visited.len()))?;
                for (s, c) in visited {
                    map.serialize_entry(s, c)?;
                }
                map.end()
            }
        }
        let mut st = serializer.serialize_struct("WalkReport", 4)?;
        st.serialize_field("steps", &self.steps)?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("occupancy", &Occupancy(self))?;
        st.serialize_field("tv_distance", &self.tv_distance)?;
        st.end()
    }
}

fn normalise(counts: &[u64], total: u64) -> Vec<f64> {
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// `1/2 * sum |p_i - q_i|`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Shape {
            left: p.len(),
            right: q.len(),
        });
    }
    let d = 0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

/// Precomputed sampler for one chain plus its exact stationary reference.
#[derive(Debug, Clone)]
pub struct Walker {
    states: Vec<String>,
    // per row: (target, cumulative probability), last cumulative forced to 1
    rows: Vec<Vec<(usize, f64)>>,
    reference: Vec<f64>,
}

impl Walker {
    /// Build a walker whose reports measure distance to the exact
    /// stationary distribution of `m`.
    pub fn new<S: Clone + PartialEq + Display>(m: &TransitionMatrix<S>) -> Result<Self> {
        let reference = stationary_exact(m)?.to_f64();
        Self::with_reference(m, reference)
    }

    pub fn with_reference<S: Clone + PartialEq + Display>(
        m: &TransitionMatrix<S>,
        reference: Vec<f64>,
    ) -> Result<Self> {
        if reference.len() != m.len() {
            return Err(Error::Shape {
                left: m.len(),
                right: reference.len(),
            });
        }
        let rows = m
            .entries
            .iter()
            .map(|row| {
                let mut acc = 0.0;
                let mut cum: Vec<(usize, f64)> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| {
                        acc += rational_to_f64(x);
                        (j, acc)
                    })
                    .collect();
                if let Some(last) = cum.last_mut() {
                    last.1 = 1.0;
                }
                cum
            })
            .collect();
        Ok(Walker {
            states: m.states.iter().map(|s| s.to_string()).collect(),
            rows,
            reference,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    pub fn index_of(&self, state: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| Error::UnknownState(state.to_string()))
    }

    fn step(&self, from: usize, rng: &mut ChaCha8Rng) -> usize {
        let row = &self.rows[from];
        let u: f64 = rng.random();
        row.iter()
            .find(|&&(_, c)| u < c)
            .or(row.last())
            .expect("stochastic rows are non-empty")
            .0
    }

    /// `steps` transitions from `start`; the state before each transition
    /// is counted.
    pub fn walk(&self, start: usize, steps: u64, seed: u64) -> Result<WalkReport> {
        if start >= self.states.len() {
            return Err(Error::UnknownState(format!("index {start}")));
        }
        if steps == 0 {
            return Err(range("steps", 0, "steps >= 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut occupancy = vec![0u64; self.states.len()];
        let mut current = start;
        for _ in 0..steps {
            occupancy[current] += 1;
            current = self.step(current, &mut rng);
        }
        let empirical = normalise(&occupancy, steps);
        let tv = tv_distance(&empirical, &self.reference)?;
        Ok(WalkReport {
            steps,
            seed,
            states: self.states.clone(),
            occupancy,
            empirical,
            tv_distance: tv,
        })
    }

    /// One independent walk per seed, in seed order.
    pub fn walk_many(&self, start: usize, steps: u64, seeds: &[u64]) -> Result<Vec<WalkReport>> {
        self.walk_many_with(Execution::default(), start, steps, seeds)
    }

    pub fn walk_many_with(
        &self,
        exec: Execution,
        start: usize,
        steps: u64,
        seeds: &[u64],
    ) -> Result<Vec<WalkReport>> {
        map_collect(exec, seeds, |&seed| self.walk(start, steps, seed))
            .into_iter()
            .collect()
    }
}

/// Convenience wrapper: build a [`Walker`] and run one walk from `start`.
pub fn random_walk<S: Clone + PartialEq + Display>(
    m: &TransitionMatrix<S>,
    start: &S,
    steps: u64,
    seed: u64,
) -> Result<WalkReport> {
    let start = m.index_of(start)?;
    Walker::new(m)?.walk(start, steps, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::matrix_standard;
    use crate::states::LandingState;

    fn ls(s: &str) -> LandingState {
        s.parse().unwrap()
    }

    #[test]
    fn tv_examples() {
        let v = [0.2, 0.3, 0.5];
        assert_eq!(tv_distance(&v, &v).unwrap(), 0.0);
        assert_eq!(tv_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert!((tv_distance(&[0.75, 0.25], &[0.5, 0.5]).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(
            tv_distance(&[1.0], &[0.5, 0.5]),
            Err(Error::Shape { left: 1, right: 2 })
        ));
    }

    #[test]
    fn single_state_walk() {
        let m = matrix_standard(3, 3).unwrap();
        let r = random_walk(&m, &ls("---"), 100, 42).unwrap();
        assert_eq!(r.occupancy, vec![100]);
        assert_eq!(r.tv_distance, 0.0);
    }

    #[test]
    fn deterministic_and_counts_start() {
        let m = matrix_standard(4, 1).unwrap();
        let a = random_walk(&m, &ls("-xxx"), 1000, 9).unwrap();
        let b = random_walk(&m, &ls("-xxx"), 1000, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.occupancy.iter().sum::<u64>(), 1000);
        let one = random_walk(&m, &ls("-xxx"), 1, 9).unwrap();
        assert_eq!(one.occupancy, vec![0, 0, 0, 1]);
        let json: serde_json::Value = serde_json::from_str(&one.to_json()).unwrap();
        assert_eq!(json["occupancy"], serde_json::json!({"-xxx": 1}));
        assert_eq!(json["steps"], 1);
    }

    #[test]
    fn bad_inputs() {
        let m = matrix_standard(4, 1).unwrap();
        assert!(matches!(
            random_walk(&m, &ls("xx--"), 10, 1),
            Err(Error::UnknownState(_))
        ));
        assert!(random_walk(&m, &ls("xxx-"), 0, 1).is_err());
    }

    #[test]
    fn merge_and_parallel_agree() {
        let m = matrix_standard(4, 1).unwrap();
        let w = Walker::new(&m).unwrap();
        let seeds = [1, 2, 3, 4];
        let seq = w
            .walk_many_with(Execution::Sequential, 0, 5000, &seeds)
            .unwrap();
        let par = w
            .walk_many_with(Execution::Parallel, 0, 5000, &seeds)
            .unwrap();
        assert_eq!(seq, par);
        let merged = seq[0].merge(&seq[1], w.reference()).unwrap();
        assert_eq!(merged.steps, 10_000);
        assert_eq!(merged.occupancy.iter().sum::<u64>(), 10_000);
        let ab = seq[0].merge(&seq[1], w.reference()).unwrap();
        let ba = seq[1].merge(&seq[0], w.reference()).unwrap();
        assert_eq!(ab.occupancy, ba.occupancy);
    }
}
