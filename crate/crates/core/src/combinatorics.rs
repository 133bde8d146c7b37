//! Stirling and Bell numbers, set partitions, and the bijection between
//! TL-states of height `h` and set partitions of `{1, ..., h+1}`.
//!
//! The bijection: a TL-state gets a graph on `{1, ..., h+1}` with one edge
//! per landing ball. The ball landing in `t` beats with air time `v` was
//! thrown `v - t` beats ago; it joins `t` to `i = h + 1 - (v - t)`, so that
//! vertex `i` stands for the throw made `h + 1 - i` beats ago. Written in
//! terms of the state this is `v = h + 1 + t - i`, stated for slot `t`
//! (the landing slot), not slot `i`. The components of that graph are
//! chains and there are exactly `f + 1` of them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{range, Error, Result};
use crate::states::TlState;

/// Stirling number of the second kind `S(a, b)`.
pub fn stirling2(a: usize, b: usize) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    // row[k] = S(i, k), built up for i = 0..=a
    let mut row = vec![BigUint::zero(); b + 1];
    row[0] = BigUint::one();
    for _ in 1..=a {
        for k in (1..=b).rev() {
            row[k] = &row[k] * BigUint::from(k) + &row[k - 1];
        }
        row[0] = BigUint::zero();
    }
    row[b].clone()
}

/// Bell number `B_n = sum_i S(n, i)`.
pub fn bell(n: usize) -> BigUint {
    (0..=n).map(|i| stirling2(n, i)).sum()
}

/// A partition of `{1, ..., n}`; blocks sorted by minimum, elements ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} outside 1..={n}"
                    )));
                }
                if seen[x] {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} appears twice"
                    )));
                }
                seen[x] = true;
            }
        }
        if let Some(missing) = (1..=n).find(|&x| !seen[x]) {
            return Err(Error::InvalidPartition(format!(
                "element {missing} not covered"
            )));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            let items: Vec<String> = block.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Parses `{1,3,7,8}|{4,6}|{2}|{5}`; block order is free.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut blocks = Vec::new();
        for part in s.split('|') {
            let inner = part
                .trim()
                .strip_prefix('{')
                .and_then(|p| p.strip_suffix('}'))
                .ok_or_else(|| bad("blocks must look like {a,b,...}"))?;
            let block = inner
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| bad("non-integer element"))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let n = blocks.iter().map(Vec::len).sum();
        SetPartition::new(n, blocks)
    }
}

/// Graph on `{1, ..., h+1}` attached to a TL-state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainGraph {
    pub n: usize,
    /// Pairs `(t, i)` with `t < i`, one per landing ball, ordered by `t`.
    pub edges: Vec<(usize, usize)>,
}

impl ChainGraph {
    pub fn of(state: &TlState) -> Self {
        let h = state.h();
        let edges = (1..=h)
            .filter_map(|t| state.value(t).map(|v| (t, h + 1 - (v - t))))
            .collect();
        ChainGraph { n: h + 1, edges }
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// No vertex has two smaller or two larger neighbours.
    pub fn is_union_of_chains(&self) -> bool {
        self.neighbours().iter().enumerate().skip(1).all(|(v, ns)| {
            ns.iter().filter(|&&w| w < v).count() <= 1 && ns.iter().filter(|&&w| w > v).count() <= 1
        })
    }

    pub fn components(&self) -> SetPartition {
        let adj = self.neighbours();
        let mut seen = vec![false; self.n + 1];
        let mut blocks = Vec::new();
        for start in 1..=self.n {
            if seen[start] {
                continue;
            }
            let mut block = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                block.push(v);
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            blocks.push(block);
        }
        SetPartition::new(self.n, blocks).expect("components partition the vertex set")
    }
}

/// Set partition of `{1, ..., h+1}` given by the components of the state's
/// chain graph; it has `f + 1` blocks.
pub fn tl_to_partition(state: &TlState) -> SetPartition {
    ChainGraph::of(state).components()
}

/// Inverse of [`tl_to_partition`]. Each block `a_1 < ... < a_m` puts air
/// time `h + 1 + a_l - a_{l+1}` at slot `a_l` for `l < m`; block maxima
/// (and singletons) stay empty.
pub fn partition_to_tl(p: &SetPartition) -> Result<TlState> {
    if p.ground_size() < 2 {
        return Err(Error::InvalidPartition(format!(
            "ground set must be {{1..h+1}} with h >= 1, got n = {}",
            p.ground_size()
        )));
    }
    let h = p.ground_size() - 1;
    let mut values = vec![None; h];
    for block in p.blocks() {
        for pair in block.windows(2) {
            values[pair[0] - 1] = Some(h + 1 + pair[0] - pair[1]);
        }
    }
    TlState::new(&values)
}

/// All partitions of `{1, ..., n}` into `k` blocks, via restricted growth
/// strings in lexicographic order.
pub fn enumerate_partitions(n: usize, k: usize) -> Result<Vec<SetPartition>> {
    if k > n {
        return Err(range("k", k, format!("0..={n}")));
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(SetPartition {
            n: 0,
            blocks: Vec::new(),
        });
        return Ok(out);
    }
    if k == 0 {
        return Ok(out);
    }
    let mut rgs = vec![0usize; n];
    grow(&mut rgs, 1, 1, n, k, &mut out);
    Ok(out)
}

// rgs[0] = 0; rgs[i] <= max(rgs[..i]) + 1; `used` = number of blocks opened
fn grow(rgs: &mut [usize], i: usize, used: usize, n: usize, k: usize, out: &mut Vec<SetPartition>) {
    if i == n {
        if used == k {
            let mut blocks = vec![Vec::new(); k];
            for (x, &b) in rgs.iter().enumerate() {
                blocks[b].push(x + 1);
            }
            out.push(SetPartition { n, blocks });
        }
        return;
    }
    // not enough elements left to open the remaining blocks
    if used + (n - i) < k {
        return;
    }
    for b in 0..=used.min(k - 1) {
        rgs[i] = b;
        let next_used = if b == used { used + 1 } else { used };
        grow(rgs, i + 1, next_used, n, k, out);
    }
}
