//! Landing states, throw/landing (TL) states and the throwing operators.
//!
//! Slots are numbered from 1. Slot `t` of a landing state records whether a
//! ball comes down `t` beats from now. Positions past `h` are always empty,
//! which is what makes a height-`h` throw legal whenever a ball is in hand.
//!
//! Canonical order (used for every state list in this crate): fewer empty
//! slots first, then lexicographic from slot 1 with a ball sorting before
//! an empty slot. Within one `St_{h,f}` this is plain lexicographic order.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{range, Error, Result};

/// Largest `h` a landing state can represent (one bit per slot).
pub const MAX_REPRESENTABLE_H: usize = 32;

/// Default ceiling on `h` for enumeration.
pub const DEFAULT_MAX_ENUM_H: usize = 16;

/// Contents of a single slot of a landing state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slot {
    Ball,
    Empty,
}

/// Operations shared by every kind of state that appears as a graph vertex.
pub trait JugglingState:
    Clone + Ord + Hash + fmt::Display + fmt::Debug + Send + Sync + 'static
{
    /// Maximum throw height, which is also the tuple length.
    fn height(&self) -> usize;

    /// True if a ball lands on the next beat.
    fn ball_in_hand(&self) -> bool;

    /// Number of empty slots.
    fn empty_count(&self) -> usize;
}

pub(crate) fn check_h(h: usize) -> Result<()> {
    if h == 0 || h > MAX_REPRESENTABLE_H {
        return Err(range("h", h, format!("1..={MAX_REPRESENTABLE_H}")));
    }
    Ok(())
}

pub(crate) fn check_hf(h: usize, f: usize) -> Result<()> {
    check_h(h)?;
    if f > h {
        return Err(range("f", f, format!("0..={h}")));
    }
    Ok(())
}

/// An `h`-tuple over {ball, empty}.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LandingState {
    h: u8,
    // bit t-1 set <=> ball lands at slot t
    balls: u32,
}

impl LandingState {
    /// Build from per-slot flags, `true` meaning a ball lands there.
    pub fn from_balls(slots: &[bool]) -> Result<Self> {
        check_h(slots.len())?;
        let balls = slots
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0u32, |acc, (i, _)| acc | (1 << i));
        Ok(LandingState {
            h: slots.len() as u8,
            balls,
        })
    }

    pub fn from_slots(slots: &[Slot]) -> Result<Self> {
        let flags: Vec<bool> = slots.iter().map(|s| *s == Slot::Ball).collect();
        Self::from_balls(&flags)
    }

    pub fn all_balls(h: usize) -> Result<Self> {
        Self::from_balls(&vec![true; h])
    }

    pub fn all_empty(h: usize) -> Result<Self> {
        Self::from_balls(&vec![false; h])
    }

    /// The state with every empty slot first: `-..-x..x`.
    pub fn empties_first(h: usize, f: usize) -> Result<Self> {
        check_hf(h, f)?;
        let flags: Vec<bool> = (1..=h).map(|t| t > f).collect();
        Self::from_balls(&flags)
    }

    pub fn h(&self) -> usize {
        self.h as usize
    }

    /// Slot `t`; any `t > h` reads as empty.
    pub fn slot(&self, t: usize) -> Slot {
        if self.is_ball(t) {
            Slot::Ball
        } else {
            Slot::Empty
        }
    }

    pub fn is_ball(&self, t: usize) -> bool {
        t >= 1 && t <= self.h() && self.balls & (1 << (t - 1)) != 0
    }

    pub fn slots(&self) -> Vec<Slot> {
        (1..=self.h()).map(|t| self.slot(t)).collect()
    }

    pub fn ball_count(&self) -> usize {
        self.balls.count_ones() as usize
    }

    /// Number of empty slots among positions `2..=h`.
    pub fn empty_count_after_first(&self) -> usize {
        (2..=self.h()).filter(|&t| !self.is_ball(t)).count()
    }

    /// Empty slots strictly after a ball at `t`; zero if slot `t` is empty.
    pub fn phi(&self, t: usize) -> Result<usize> {
        if t == 0 || t > self.h() {
            return Err(range("t", t, format!("1..={}", self.h())));
        }
        if !self.is_ball(t) {
            return Ok(0);
        }
        Ok((t + 1..=self.h()).filter(|&j| !self.is_ball(j)).count())
    }

    /// `prod_t (1 + phi_t)`.
    pub fn weight(&self) -> BigUint {
        (1..=self.h())
            .map(|t| BigUint::from(1 + self.phi(t).expect("t in range")))
            .product()
    }

    /// Raw throwing operator: shift one beat and, for `j >= 1`, put a ball at
    /// slot `j`. Legality is the caller's business.
    pub fn throw(&self, j: usize) -> Result<Self> {
        if j > self.h() {
            return Err(range("throw height", j, format!("0..={}", self.h())));
        }
        let mask = if self.h == 32 {
            u32::MAX
        } else {
            (1u32 << self.h) - 1
        };
        let mut balls = (self.balls >> 1) & mask;
        if j >= 1 {
            balls |= 1 << (j - 1);
        }
        Ok(LandingState { h: self.h, balls })
    }

    // lexicographic key: reading slot 1 first, ball < empty
    fn lex_key(&self) -> u64 {
        (1..=self.h())
            .filter(|&t| !self.is_ball(t))
            .map(|t| 1u64 << (self.h() - t))
            .sum()
    }
}

impl JugglingState for LandingState {
    fn height(&self) -> usize {
        self.h()
    }

    fn ball_in_hand(&self) -> bool {
        self.is_ball(1)
    }

    fn empty_count(&self) -> usize {
        self.h() - self.ball_count()
    }
}

impl Ord for LandingState {
    fn cmp(&self, other: &Self) -> Ordering {
        self.h
            .cmp(&other.h)
            .then(self.empty_count().cmp(&other.empty_count()))
            .then(self.lex_key().cmp(&other.lex_key()))
    }
}

impl PartialOrd for LandingState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LandingState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in 1..=self.h() {
            f.write_str(if self.is_ball(t) { "x" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for LandingState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LandingState({self})")
    }
}

impl FromStr for LandingState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let flags = s
            .chars()
            .map(|c| match c {
                'x' => Ok(true),
                '-' => Ok(false),
                other => Err(Error::Parse {
                    input: s.to_string(),
                    reason: format!("unexpected character {other:?}, expected 'x' or '-'"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        LandingState::from_balls(&flags).map_err(|e| Error::Parse {
            input: s.to_string(),
            reason: e.to_string(),
        })
    }
}

/// A landing state refined with each landing ball's total air time.
///
/// Slot `t` holding `i` means the ball landing in `t` beats was thrown
/// `i - t` beats ago. Air times are fixed at throw time, so shifting leaves
/// the values untouched. Valid states satisfy `i >= t` in every occupied
/// slot and have pairwise distinct throw times `i - t`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TlState {
    // 0 = empty
    slots: Vec<u8>,
}

impl TlState {
    /// Build a TL-state, checking both validity conditions.
    pub fn new(values: &[Option<usize>]) -> Result<Self> {
        check_h(values.len())?;
        let h = values.len();
        let render = || render_tl(values);
        let mut thrown_at = vec![false; h];
        for (idx, v) in values.iter().enumerate() {
            let t = idx + 1;
            let Some(v) = *v else { continue };
            if v == 0 || v > h {
                return Err(Error::InvalidTlState {
                    state: render(),
                    reason: format!("air time {v} at slot {t} outside 1..={h}"),
                });
            }
            if v < t {
                return Err(Error::InvalidTlState {
                    state: render(),
                    reason: format!("ball at slot {t} has air time {v} < {t}; not yet thrown"),
                });
            }
            let ago = v - t;
            if thrown_at[ago] {
                return Err(Error::InvalidTlState {
                    state: render(),
                    reason: format!("two balls thrown {ago} beats ago"),
                });
            }
            thrown_at[ago] = true;
        }
        Ok(TlState {
            slots: values.iter().map(|v| v.unwrap_or(0) as u8).collect(),
        })
    }

    pub fn all_empty(h: usize) -> Result<Self> {
        Self::new(&vec![None; h])
    }

    pub fn h(&self) -> usize {
        self.slots.len()
    }

    /// Air time of the ball landing at slot `t`, if any (`t > h` is empty).
    pub fn value(&self, t: usize) -> Option<usize> {
        match t {
            0 => None,
            t if t > self.h() => None,
            t => match self.slots[t - 1] {
                0 => None,
                v => Some(v as usize),
            },
        }
    }

    pub fn values(&self) -> Vec<Option<usize>> {
        (1..=self.h()).map(|t| self.value(t)).collect()
    }

    /// Forget air times.
    pub fn project(&self) -> LandingState {
        let flags: Vec<bool> = self.slots.iter().map(|&v| v != 0).collect();
        LandingState::from_balls(&flags).expect("h already validated")
    }

    /// Throwing operator on TL-states. A positive-height throw needs a ball in
    /// hand and a free landing slot; the thrown ball gets air time `j`.
    pub fn throw(&self, j: usize) -> Result<Self> {
        let h = self.h();
        if j > h {
            return Err(range("throw height", j, format!("0..={h}")));
        }
        if j >= 1 {
            if self.value(1).is_none() {
                return Err(Error::IllegalThrow {
                    state: self.to_string(),
                    height: j,
                    reason: "no ball in hand",
                });
            }
            if self.value(j + 1).is_some() {
                return Err(Error::IllegalThrow {
                    state: self.to_string(),
                    height: j,
                    reason: "landing slot already occupied",
                });
            }
        }
        let mut slots: Vec<u8> = self.slots[1..].to_vec();
        slots.push(0);
        if j >= 1 {
            slots[j - 1] = j as u8;
        }
        Ok(TlState { slots })
    }
}

impl JugglingState for TlState {
    fn height(&self) -> usize {
        self.h()
    }

    fn ball_in_hand(&self) -> bool {
        self.slots[0] != 0
    }

    fn empty_count(&self) -> usize {
        self.slots.iter().filter(|&&v| v == 0).count()
    }
}

impl Ord for TlState {
    fn cmp(&self, other: &Self) -> Ordering {
        self.project()
            .cmp(&other.project())
            .then_with(|| self.slots.cmp(&other.slots))
    }
}

impl PartialOrd for TlState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Air times above 9 use letters (a = 10, ...).
fn render_tl(values: &[Option<usize>]) -> String {
    values
        .iter()
        .map(|v| match v {
            None => '-',
            Some(v) => std::char::from_digit(*v as u32, 36).unwrap_or('?'),
        })
        .collect()
}

impl fmt::Display for TlState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_tl(&self.values()))
    }
}

impl fmt::Debug for TlState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TlState({self})")
    }
}

impl FromStr for TlState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .map(|c| match c {
                '-' => Ok(None),
                c => c
                    .to_digit(36)
                    .filter(|&d| d > 0)
                    .map(|d| Some(d as usize))
                    .ok_or_else(|| Error::Parse {
                        input: s.to_string(),
                        reason: format!("unexpected character {c:?}"),
                    }),
            })
            .collect::<Result<Vec<_>>>()?;
        TlState::new(&values)
    }
}

/// `St_{h,f}` in canonical order.
pub fn enumerate_landing_states(h: usize, f: usize) -> Result<Vec<LandingState>> {
    enumerate_landing_states_bounded(h, f, DEFAULT_MAX_ENUM_H)
}

pub fn enumerate_landing_states_bounded(
    h: usize,
    f: usize,
    max_h: usize,
) -> Result<Vec<LandingState>> {
    check_hf(h, f)?;
    if h > max_h {
        return Err(range("h", h, format!("1..={max_h} (enumeration bound)")));
    }
    let mut out = Vec::new();
    let mut slots = Vec::with_capacity(h);
    fill_landing(h, h - f, f, &mut slots, &mut out);
    Ok(out)
}

// Ball before empty at every slot yields lexicographic order directly.
fn fill_landing(
    h: usize,
    balls_left: usize,
    empties_left: usize,
    slots: &mut Vec<bool>,
    out: &mut Vec<LandingState>,
) {
    if slots.len() == h {
        out.push(LandingState::from_balls(slots).expect("h checked"));
        return;
    }
    if balls_left > 0 {
        slots.push(true);
        fill_landing(h, balls_left - 1, empties_left, slots, out);
        slots.pop();
    }
    if empties_left > 0 {
        slots.push(false);
        fill_landing(h, balls_left, empties_left - 1, slots, out);
        slots.pop();
    }
}

/// All of `St_h` (every ball count) in canonical order.
pub fn enumerate_all_landing_states(h: usize) -> Result<Vec<LandingState>> {
    enumerate_all_landing_states_bounded(h, DEFAULT_MAX_ENUM_H)
}

pub fn enumerate_all_landing_states_bounded(h: usize, max_h: usize) -> Result<Vec<LandingState>> {
    check_h(h)?;
    let mut out = Vec::with_capacity(1 << h.min(20));
    for f in 0..=h {
        out.extend(enumerate_landing_states_bounded(h, f, max_h)?);
    }
    Ok(out)
}

/// Every TL-state projecting onto `state`, sorted.
///
/// Filled from slot `h` down: a ball at `t` may have any air time in `t..=h`
/// whose throw time `i - t` is not already used by a later ball.
pub fn fiber(state: &LandingState) -> Vec<TlState> {
    let h = state.h();
    let mut out = Vec::new();
    let mut values = vec![None; h];
    let mut used = vec![false; h];
    fill_fiber(state, h, &mut values, &mut used, &mut out);
    out.sort();
    out
}

fn fill_fiber(
    state: &LandingState,
    t: usize,
    values: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    out: &mut Vec<TlState>,
) {
    if t == 0 {
        out.push(TlState {
            slots: values.iter().map(|v| v.unwrap_or(0) as u8).collect(),
        });
        return;
    }
    if !state.is_ball(t) {
        fill_fiber(state, t - 1, values, used, out);
        return;
    }
    let h = state.h();
    for v in t..=h {
        let ago = v - t;
        if used[ago] {
            continue;
        }
        used[ago] = true;
        values[t - 1] = Some(v);
        fill_fiber(state, t - 1, values, used, out);
        values[t - 1] = None;
        used[ago] = false;
    }
}

/// `Ŝt_{h,f}` in canonical order (grouped by projection).
pub fn enumerate_tl_states(h: usize, f: usize) -> Result<Vec<TlState>> {
    enumerate_tl_states_bounded(h, f, DEFAULT_MAX_ENUM_H)
}

pub fn enumerate_tl_states_bounded(h: usize, f: usize, max_h: usize) -> Result<Vec<TlState>> {
    Ok(enumerate_landing_states_bounded(h, f, max_h)?
        .iter()
        .flat_map(fiber)
        .collect())
}
