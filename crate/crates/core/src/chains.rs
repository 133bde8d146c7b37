//! Transition matrices, stationary distributions and the checks that tie
//! the refined throw/landing chain back to the landing-state chain.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::combinatorics::{bell, stirling2};
use crate::error::{range, Error, Result};
use crate::graphs::{
    build_add_drop, build_annihilation, build_standard, build_tl, is_strongly_connected, period,
    Edge, GraphKind, StateGraph,
};
use crate::linalg::{self, Matrix};
use crate::par::{map_range, Execution};
use crate::states::{
    check_h, check_hf, enumerate_all_landing_states, enumerate_landing_states, enumerate_tl_states,
    JugglingState, LandingState, TlState,
};

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn uint_ratio(n: &BigUint, d: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

/// Square row-stochastic matrix over exact rationals; row = source state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix<S> {
    pub states: Vec<S>,
    pub entries: Matrix,
}

impl<S: JugglingState> TransitionMatrix<S> {
    fn from_graph<F>(g: &StateGraph<S>, weight: F) -> Self
    where
        F: Fn(&S, &Edge) -> BigRational,
    {
        let n = g.vertices.len();
        let mut entries = vec![vec![BigRational::zero(); n]; n];
        for e in &g.edges {
            entries[e.source][e.target] += weight(&g.vertices[e.source], e);
        }
        TransitionMatrix {
            states: g.vertices.clone(),
            entries,
        }
    }
}

impl<S: Clone + PartialEq + std::fmt::Display> TransitionMatrix<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, state: &S) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| Error::UnknownState(state.to_string()))
    }

    pub fn entry(&self, from: &S, to: &S) -> Result<&BigRational> {
        Ok(&self.entries[self.index_of(from)?][self.index_of(to)?])
    }

    pub fn row(&self, state: &S) -> Result<&[BigRational]> {
        Ok(&self.entries[self.index_of(state)?])
    }

    /// Every row sums to exactly 1 and no entry is negative.
    pub fn is_row_stochastic(&self) -> bool {
        self.entries.iter().all(|row| {
            row.iter().all(|x| *x >= BigRational::zero())
                && row.iter().sum::<BigRational>() == BigRational::one()
        })
    }

    pub fn column_sum(&self, j: usize) -> BigRational {
        self.entries.iter().map(|row| &row[j]).sum()
    }

    /// Adjacency lists of the positive entries.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(rational_to_f64).collect())
            .collect()
    }

    /// Same matrix with states mapped through `f`; row and column order is kept.
    pub fn relabel<T, F: Fn(&S) -> T>(&self, f: F) -> TransitionMatrix<T> {
        TransitionMatrix {
            states: self.states.iter().map(f).collect(),
            entries: self.entries.clone(),
        }
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact probability vector over a list of states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationaryDistribution<S> {
    pub states: Vec<S>,
    pub probs: Vec<BigRational>,
}

impl<S: Clone + PartialEq + std::fmt::Display> StationaryDistribution<S> {
    pub fn get(&self, state: &S) -> Result<&BigRational> {
        let i = self
            .states
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| Error::UnknownState(state.to_string()))?;
        Ok(&self.probs[i])
    }

    pub fn total(&self) -> BigRational {
        self.probs.iter().sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(rational_to_f64).collect()
    }

    pub fn relabel<T, F: Fn(&S) -> T>(&self, f: F) -> StationaryDistribution<T> {
        StationaryDistribution {
            states: self.states.iter().map(f).collect(),
            probs: self.probs.clone(),
        }
    }

    /// True iff `self * m == self` exactly.
    pub fn is_fixed_by(&self, m: &TransitionMatrix<S>) -> bool {
        self.states == m.states && linalg::vec_mul(&self.probs, &m.entries) == self.probs
    }
}

/// `1` for a wait, `1/(f+1)` for each throw.
pub fn matrix_standard(h: usize, f: usize) -> Result<TransitionMatrix<LandingState>> {
    let g = build_standard(h, f)?;
    let throw_p = ratio(1, f as i64 + 1);
    Ok(TransitionMatrix::from_graph(&g, |v, _| {
        if v.ball_in_hand() {
            throw_p.clone()
        } else {
            BigRational::one()
        }
    }))
}

pub fn matrix_tl(h: usize, f: usize) -> Result<TransitionMatrix<TlState>> {
    let g = build_tl(h, f)?;
    let throw_p = ratio(1, f as i64 + 1);
    Ok(TransitionMatrix::from_graph(&g, |v, _| {
        if v.ball_in_hand() {
            throw_p.clone()
        } else {
            BigRational::one()
        }
    }))
}

/// Uniform over the `f' + 2` add-drop moves, where `f'` counts empty slots
/// in positions `2..=h`.
pub fn matrix_add_drop(h: usize) -> Result<TransitionMatrix<LandingState>> {
    let g = build_add_drop(h)?;
    Ok(TransitionMatrix::from_graph(&g, |v, _| {
        ratio(1, v.empty_count_after_first() as i64 + 2)
    }))
}

/// Every height `0..=h` is thrown with probability `1/(h+1)`; the ones that
/// hit an occupied slot collapse onto the drop edge, which therefore carries
/// `(h - f')/(h+1)`.
pub fn matrix_annihilation(h: usize) -> Result<TransitionMatrix<LandingState>> {
    let g = build_annihilation(h)?;
    let denom = h as i64 + 1;
    Ok(TransitionMatrix::from_graph(&g, |v, e| {
        if e.label == 0 {
            ratio(h as i64 - v.empty_count_after_first() as i64, denom)
        } else {
            ratio(1, denom)
        }
    }))
}

/// Reject chains whose stationary distribution is not unique or whose
/// powers do not converge.
pub fn check_ergodic<S: Clone + PartialEq + std::fmt::Display>(
    m: &TransitionMatrix<S>,
) -> Result<()> {
    let adj = m.support();
    if !is_strongly_connected(&adj) {
        return Err(Error::Structure("reducible"));
    }
    if period(&adj) != 1 {
        return Err(Error::Structure("periodic"));
    }
    Ok(())
}

/// Solve `alpha P = alpha`, `sum alpha = 1` exactly.
pub fn stationary_exact<S: Clone + PartialEq + std::fmt::Display>(
    m: &TransitionMatrix<S>,
) -> Result<StationaryDistribution<S>> {
    check_ergodic(m)?;
    let n = m.len();
    // (P^T - I) alpha^T = 0 with the last equation replaced by sum = 1
    let mut a: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut x = m.entries[j][i].clone();
                    if i == j {
                        x -= BigRational::one();
                    }
                    x
                })
                .collect()
        })
        .collect();
    a[n - 1] = vec![BigRational::one(); n];
    let mut b = vec![BigRational::zero(); n];
    b[n - 1] = BigRational::one();
    let probs = linalg::solve(a, b).ok_or(Error::Structure("singular"))?;
    let dist = StationaryDistribution {
        states: m.states.clone(),
        probs,
    };
    debug_assert!(dist.is_fixed_by(m));
    Ok(dist)
}

/// `Delta(nu) / S(h+1, f+1)` over `St_{h,f}`.
pub fn closed_form_standard(h: usize, f: usize) -> Result<StationaryDistribution<LandingState>> {
    let states = enumerate_landing_states(h, f)?;
    let denom = stirling2(h + 1, f + 1);
    let probs = states
        .iter()
        .map(|s| uint_ratio(&s.weight(), &denom))
        .collect();
    Ok(StationaryDistribution { states, probs })
}

/// Uniform `1 / S(h+1, f+1)` over `Ŝt_{h,f}`.
pub fn closed_form_tl(h: usize, f: usize) -> Result<StationaryDistribution<TlState>> {
    check_hf(h, f)?;
    let states = enumerate_tl_states(h, f)?;
    let p = uint_ratio(&BigUint::one(), &stirling2(h + 1, f + 1));
    let probs = vec![p; states.len()];
    Ok(StationaryDistribution { states, probs })
}

/// `Delta(nu) / B_{h+1}` over all of `St_h`.
pub fn closed_form_add_drop(h: usize) -> Result<StationaryDistribution<LandingState>> {
    let states = enumerate_all_landing_states(h)?;
    let denom = bell(h + 1);
    let probs = states
        .iter()
        .map(|s| uint_ratio(&s.weight(), &denom))
        .collect();
    Ok(StationaryDistribution { states, probs })
}

/// `h!/(h-f)! * Delta(nu) / (h+1)^h`, with `f` the empty count of `nu`.
pub fn closed_form_annihilation(h: usize) -> Result<StationaryDistribution<LandingState>> {
    let states = enumerate_all_landing_states(h)?;
    let denom = BigUint::from(h + 1).pow(h as u32);
    let probs = states
        .iter()
        .map(|s| {
            let f = s.empty_count();
            let falling: BigUint = (h - f + 1..=h).map(BigUint::from).product();
            uint_ratio(&(falling * s.weight()), &denom)
        })
        .collect();
    Ok(StationaryDistribution { states, probs })
}

fn require_f(kind: GraphKind, f: Option<usize>) -> Result<usize> {
    f.ok_or_else(|| Error::Range {
        what: "f",
        value: 0,
        allowed: format!("required for the {kind} model"),
    })
}

/// Closed form for any model, with states rendered as strings.
pub fn closed_form(
    kind: GraphKind,
    h: usize,
    f: Option<usize>,
) -> Result<StationaryDistribution<String>> {
    let label = |s: &dyn std::fmt::Display| s.to_string();
    Ok(match kind {
        GraphKind::Standard => closed_form_standard(h, require_f(kind, f)?)?.relabel(|s| label(s)),
        GraphKind::Tl => closed_form_tl(h, require_f(kind, f)?)?.relabel(|s| label(s)),
        GraphKind::AddDrop => closed_form_add_drop(h)?.relabel(|s| label(s)),
        GraphKind::Annihilation => closed_form_annihilation(h)?.relabel(|s| label(s)),
    })
}

/// Transition matrix for any model, with states rendered as strings.
pub fn matrix_for(kind: GraphKind, h: usize, f: Option<usize>) -> Result<TransitionMatrix<String>> {
    Ok(match kind {
        GraphKind::Standard => matrix_standard(h, require_f(kind, f)?)?.relabel(|s| s.to_string()),
        GraphKind::Tl => matrix_tl(h, require_f(kind, f)?)?.relabel(|s| s.to_string()),
        GraphKind::AddDrop => matrix_add_drop(h)?.relabel(|s| s.to_string()),
        GraphKind::Annihilation => matrix_annihilation(h)?.relabel(|s| s.to_string()),
    })
}

/// Exact `m^l`, `l >= 1`.
pub fn matrix_power<S: Clone>(m: &TransitionMatrix<S>, l: u64) -> Result<TransitionMatrix<S>> {
    matrix_power_with(Execution::default(), m, l)
}

pub fn matrix_power_with<S: Clone>(
    exec: Execution,
    m: &TransitionMatrix<S>,
    l: u64,
) -> Result<TransitionMatrix<S>> {
    if l == 0 {
        return Err(range("l", 0, "l >= 1"));
    }
    Ok(TransitionMatrix {
        states: m.states.clone(),
        entries: linalg::mat_pow(exec, &m.entries, l),
    })
}

/// Outcome of floating-point power iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration {
    pub probs: Vec<f64>,
    pub iterations: usize,
    /// `||vP - v||_1` at the last step.
    pub residual: f64,
}

/// Iterate `v <- vP` from the uniform vector until `||vP - v||_1 <= tol`.
pub fn stationary_power<S: Clone + PartialEq + std::fmt::Display>(
    m: &TransitionMatrix<S>,
    tol: f64,
    max_iter: usize,
) -> Result<PowerIteration> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Range {
            what: "tol",
            value: 0,
            allowed: "tol > 0".into(),
        });
    }
    check_ergodic(m)?;
    let n = m.len();
    let rows: Vec<Vec<(usize, f64)>> = m
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (j, rational_to_f64(x)))
                .collect()
        })
        .collect();
    let mut v = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for iteration in 1..=max_iter {
        let mut next = vec![0.0; n];
        for (vi, row) in v.iter().zip(&rows) {
            for &(j, p) in row {
                next[j] += vi * p;
            }
        }
        residual = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
        v = next;
        if residual <= tol {
            return Ok(PowerIteration {
                probs: v,
                iterations: iteration,
                residual,
            });
        }
    }
    Err(Error::Convergence {
        iterations: max_iter,
        residual,
        last: v,
    })
}

/// `(p_{mu,omega}, p^(2)_{mu,omega}, ..., p^(l_max)_{mu,omega})` for the
/// standard chain with `omega = -..-x..x`. The sequence tends to
/// `1 / S(h+1, f+1)`.
pub fn stirling_convergence_report(
    h: usize,
    f: usize,
    source: &LandingState,
    l_max: usize,
) -> Result<Vec<BigRational>> {
    let target = LandingState::empties_first(h, f)?;
    stirling_convergence_report_to(h, f, source, &target, l_max)
}

pub fn stirling_convergence_report_to(
    h: usize,
    f: usize,
    source: &LandingState,
    target: &LandingState,
    l_max: usize,
) -> Result<Vec<BigRational>> {
    let m = matrix_standard(h, f)?;
    let src = m.index_of(source)?;
    let dst = m.index_of(target)?;
    let mut row = m.entries[src].clone();
    let mut out = Vec::with_capacity(l_max);
    for l in 1..=l_max {
        if l > 1 {
            row = linalg::vec_mul(&row, &m.entries);
        }
        out.push(row[dst].clone());
    }
    Ok(out)
}

/// Result of a column-sum check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnCheck {
    /// First column whose sum is not 1, with that sum.
    pub first_failure: Option<(usize, BigRational)>,
}

impl ColumnCheck {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn check_doubly_stochastic<S: Clone + PartialEq + std::fmt::Display>(
    m: &TransitionMatrix<S>,
) -> ColumnCheck {
    let first_failure = (0..m.len())
        .map(|j| (j, m.column_sum(j)))
        .find(|(_, s)| !s.is_one());
    ColumnCheck { first_failure }
}

/// A TL-state whose probability of moving into a fiber disagrees with the
/// landing chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LumpWitness {
    pub source: LandingState,
    pub tl_source: TlState,
    pub target: LandingState,
    pub expected: BigRational,
    pub found: BigRational,
}

#[derive(Debug, Clone)]
pub struct LumpReport {
    pub witness: Option<LumpWitness>,
    /// Lumped chain, read off the first TL-state of each fiber.
    pub lumped: TransitionMatrix<LandingState>,
}

impl LumpReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// For every `nu`, `omega` and every `mu` in the fiber of `nu`, compare the
/// TL-chain probability of entering the fiber of `omega` with `p_{nu,omega}`.
pub fn verify_lumpability(h: usize, f: usize) -> Result<LumpReport> {
    verify_lumpability_with(Execution::default(), h, f)
}

pub fn verify_lumpability_with(exec: Execution, h: usize, f: usize) -> Result<LumpReport> {
    let p = matrix_standard(h, f)?;
    let tl = matrix_tl(h, f)?;
    let lump_of: Vec<usize> = tl
        .states
        .iter()
        .map(|s| p.index_of(&s.project()))
        .collect::<Result<_>>()?;
    let n = p.len();
    let rows: Vec<Vec<BigRational>> = map_range(exec, tl.len(), |i| {
        let mut row = vec![BigRational::zero(); n];
        for (j, x) in tl.entries[i].iter().enumerate() {
            if !x.is_zero() {
                row[lump_of[j]] += x;
            }
        }
        row
    });

    let mut witness = None;
    let mut lumped = vec![None; n];
    'outer: for (i, row) in rows.iter().enumerate() {
        let nu = lump_of[i];
        for (omega, found) in row.iter().enumerate() {
            if *found != p.entries[nu][omega] {
                witness = Some(LumpWitness {
                    source: p.states[nu],
                    tl_source: tl.states[i].clone(),
                    target: p.states[omega],
                    expected: p.entries[nu][omega].clone(),
                    found: found.clone(),
                });
                break 'outer;
            }
        }
        if lumped[nu].is_none() {
            lumped[nu] = Some(row.clone());
        }
    }
    let entries = lumped
        .into_iter()
        .map(|r| r.unwrap_or_else(|| vec![BigRational::zero(); n]))
        .collect();
    Ok(LumpReport {
        witness,
        lumped: TransitionMatrix {
            states: p.states.clone(),
            entries,
        },
    })
}

/// Check `h >= 1` so callers can validate without building anything.
pub fn validate(kind: GraphKind, h: usize, f: Option<usize>) -> Result<()> {
    if kind.spans_all_f() {
        check_h(h)
    } else {
        check_hf(h, require_f(kind, f)?)
    }
}
