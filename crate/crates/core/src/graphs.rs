//! State graphs for the four juggling models.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{
    check_h, check_hf, enumerate_all_landing_states, enumerate_landing_states, enumerate_tl_states,
    JugglingState, LandingState, TlState,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Standard,
    Tl,
    AddDrop,
    Annihilation,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Standard => "standard",
            GraphKind::Tl => "tl",
            GraphKind::AddDrop => "adddrop",
            GraphKind::Annihilation => "annihilation",
        }
    }

    /// Add-drop and annihilation graphs span every ball count.
    pub fn spans_all_f(self) -> bool {
        matches!(self, GraphKind::AddDrop | GraphKind::Annihilation)
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A labelled edge `source -> target` made by a throw of height `label`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: usize,
}

/// How an edge of an add-drop graph is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    Throw,
    Drop,
    Insertion,
}

impl EdgeClass {
    pub fn dot_style(self) -> &'static str {
        match self {
            EdgeClass::Throw => "solid",
            EdgeClass::Drop => "dashed",
            EdgeClass::Insertion => "dotted",
        }
    }
}

/// Directed multigraph on canonically ordered states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateGraph<S> {
    pub kind: GraphKind,
    pub h: usize,
    pub f: Option<usize>,
    pub vertices: Vec<S>,
    pub edges: Vec<Edge>,
}

impl<S: JugglingState> StateGraph<S> {
    fn from_successors<F>(
        kind: GraphKind,
        h: usize,
        f: Option<usize>,
        vertices: Vec<S>,
        succ: F,
    ) -> Self
    where
        F: Fn(&S) -> Vec<(S, usize)>,
    {
        let index: HashMap<&S, usize> = vertices.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut edges = Vec::new();
        for (source, v) in vertices.iter().enumerate() {
            for (w, label) in succ(v) {
                let target = *index
                    .get(&w)
                    .expect("successor lies in the same state universe");
                edges.push(Edge {
                    source,
                    target,
                    label,
                });
            }
        }
        StateGraph {
            kind,
            h,
            f,
            vertices,
            edges,
        }
    }

    pub fn index_of(&self, state: &S) -> Result<usize> {
        // vertices are sorted
        self.vertices
            .binary_search(state)
            .map_err(|_| Error::UnknownState(state.to_string()))
    }

    pub fn out_edges(&self, source: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.source == source)
    }

    /// Every `(u, j)` with an edge `u -> state` labelled `j`.
    pub fn precursors(&self, state: &S) -> Result<Vec<(S, usize)>> {
        let target = self.index_of(state)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.target == target)
            .map(|e| (self.vertices[e.source].clone(), e.label))
            .collect())
    }

    pub fn edge_class(&self, edge: &Edge) -> EdgeClass {
        if !self.kind.spans_all_f() {
            return EdgeClass::Throw;
        }
        let in_hand = self.vertices[edge.source].ball_in_hand();
        match (edge.label, in_hand) {
            (0, true) => EdgeClass::Drop,
            (j, false) if j > 0 => EdgeClass::Insertion,
            _ => EdgeClass::Throw,
        }
    }

    /// Adjacency lists (targets only, multiplicity kept).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.source].push(e.target);
        }
        adj
    }

    /// Graphviz rendering. Add-drop style graphs draw drops dashed and
    /// assistant insertions dotted.
    pub fn export_dot(&self) -> String {
        let mut out = String::new();
        let name = match self.f {
            Some(f) => format!("{}_h{}_f{}", self.kind.name(), self.h, f),
            None => format!("{}_h{}", self.kind.name(), self.h),
        };
        let _ = writeln!(out, "digraph {name} {{");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\", style={}];",
                self.vertices[e.source],
                self.vertices[e.target],
                e.label,
                self.edge_class(e).dot_style()
            );
        }
        out.push_str("}\n");
        out
    }

    /// JSON dump: `{kind, h, f?, vertices, edges: [[src, dst, label]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("kind".into(), self.kind.name().into());
        obj.insert("h".into(), self.h.into());
        if let Some(f) = self.f {
            obj.insert("f".into(), f.into());
        }
        obj.insert(
            "vertices".into(),
            self.vertices
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .into(),
        );
        obj.insert(
            "edges".into(),
            self.edges
                .iter()
                .map(|e| serde_json::json!([e.source, e.target, e.label]))
                .collect::<Vec<_>>()
                .into(),
        );
        serde_json::Value::Object(obj)
    }
}

/// Legal standard throws from `v`: wait when the hand is empty, otherwise
/// any height whose landing slot `j + 1` is free.
pub fn standard_moves(v: &LandingState) -> Vec<(LandingState, usize)> {
    if !v.is_ball(1) {
        return vec![(v.throw(0).expect("0 <= h"), 0)];
    }
    (1..=v.h())
        .filter(|&j| !v.is_ball(j + 1))
        .map(|j| (v.throw(j).expect("j <= h"), j))
        .collect()
}

pub fn tl_moves(v: &TlState) -> Vec<(TlState, usize)> {
    if v.value(1).is_none() {
        return vec![(v.throw(0).expect("wait is always legal"), 0)];
    }
    (1..=v.h())
        .filter(|&j| v.value(j + 1).is_none())
        .map(|j| (v.throw(j).expect("checked legal"), j))
        .collect()
}

/// Add-drop moves: height 0 always, and any height with a free landing
/// slot regardless of whether a ball is in hand.
pub fn add_drop_moves(v: &LandingState) -> Vec<(LandingState, usize)> {
    let mut out = vec![(v.throw(0).expect("0 <= h"), 0)];
    out.extend(
        (1..=v.h())
            .filter(|&j| !v.is_ball(j + 1))
            .map(|j| (v.throw(j).expect("j <= h"), j)),
    );
    out
}

pub fn build_standard(h: usize, f: usize) -> Result<StateGraph<LandingState>> {
    check_hf(h, f)?;
    let vertices = enumerate_landing_states(h, f)?;
    Ok(StateGraph::from_successors(
        GraphKind::Standard,
        h,
        Some(f),
        vertices,
        standard_moves,
    ))
}

pub fn build_tl(h: usize, f: usize) -> Result<StateGraph<TlState>> {
    check_hf(h, f)?;
    let vertices = enumerate_tl_states(h, f)?;
    Ok(StateGraph::from_successors(
        GraphKind::Tl,
        h,
        Some(f),
        vertices,
        tl_moves,
    ))
}

pub fn build_add_drop(h: usize) -> Result<StateGraph<LandingState>> {
    check_h(h)?;
    let vertices = enumerate_all_landing_states(h)?;
    Ok(StateGraph::from_successors(
        GraphKind::AddDrop,
        h,
        None,
        vertices,
        add_drop_moves,
    ))
}

/// Same graph as add-drop; only the edge probabilities differ.
pub fn build_annihilation(h: usize) -> Result<StateGraph<LandingState>> {
    let mut g = build_add_drop(h)?;
    g.kind = GraphKind::Annihilation;
    Ok(g)
}

/// Strong connectivity of a digraph given as adjacency lists.
pub fn is_strongly_connected(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return false;
    }
    let mut reverse = vec![Vec::new(); n];
    for (u, outs) in adj.iter().enumerate() {
        for &v in outs {
            reverse[v].push(u);
        }
    }
    reach_all(adj) && reach_all(&reverse)
}

fn reach_all(adj: &[Vec<usize>]) -> bool {
    bfs_levels(adj).iter().all(Option::is_some)
}

fn bfs_levels(adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let mut level = vec![None; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    level[0] = Some(0);
    queue.push_back(0);
    while let Some(u) = queue.pop_front() {
        let lu = level[u].expect("queued vertices have a level");
        for &v in &adj[u] {
            if level[v].is_none() {
                level[v] = Some(lu + 1);
                queue.push_back(v);
            }
        }
    }
    level
}

/// Period of a strongly connected digraph: gcd over edges `u -> v` of
/// `level(u) + 1 - level(v)` for BFS levels from vertex 0.
pub fn period(adj: &[Vec<usize>]) -> usize {
    let level = bfs_levels(adj);
    let mut g = 0usize;
    for (u, outs) in adj.iter().enumerate() {
        let Some(lu) = level[u] else { continue };
        for &v in outs {
            let Some(lv) = level[v] else { continue };
            let diff = (lu as i64 + 1 - lv as i64).unsigned_abs() as usize;
            g = num_integer::gcd(g, diff);
        }
    }
    g
}
