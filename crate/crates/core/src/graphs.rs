//! The recursive labeled multigraphs whose walk partitions encode every word
//! of degree 2d, the partition read off the certificate monomial, and an
//! exhaustive search confirming that partition is the only one.
//!
//! Vertices are `1..=g^d`. An edge labeled `k` from `r` to `c` stands for the
//! entry variable `x^{(k)}_{r,c}`; letter-1 edges are loops.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::words::{all_words, ceil_log, certificate_path, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub from: usize,
    pub to: usize,
    pub label: usize,
}

/// Directed multigraph `G_d^g` with all multiplicities scaled by `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledMultigraph {
    g: usize,
    d: usize,
    m: u64,
    edges: BTreeMap<EdgeKey, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: usize,
    pub to: usize,
    pub label: usize,
    pub mult: u64,
}

/// JSON form: `{g, d, m, edges: [{from, to, label, mult}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub g: usize,
    pub d: usize,
    pub m: u64,
    pub edges: Vec<EdgeRecord>,
}

/// Builds `G_d^g` scaled by `m`.
///
/// `G_0` is a single vertex. `G_d` multiplies the edges of `G_{d-1}` by `g²`
/// and, for every `i <= g^{d-1}` and letter `k`, adds `g^d` edges labeled `k`
/// from `i` to `i + (k-1) g^{d-1}` and `g^d` back. For `k = 1` both bundles are
/// loops, so each such vertex gains `2 g^d` loops.
pub fn build_graph(g: usize, d: usize, m: u64) -> Result<LabeledMultigraph> {
    if g < 2 {
        return Err(Error::InvalidInput(format!(
            "alphabet size must be at least 2, got {g}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidInput("scale must be positive".into()));
    }
    let mut edges: BTreeMap<EdgeKey, u64> = BTreeMap::new();
    for level in 1..=d {
        let g2 = (g * g) as u64;
        for mult in edges.values_mut() {
            *mult *= g2;
        }
        let h = g.pow(level as u32 - 1);
        let bundle = g.pow(level as u32) as u64;
        for i in 1..=h {
            for k in 1..=g {
                let t = i + (k - 1) * h;
                *edges
                    .entry(EdgeKey {
                        from: i,
                        to: t,
                        label: k,
                    })
                    .or_insert(0) += bundle;
                *edges
                    .entry(EdgeKey {
                        from: t,
                        to: i,
                        label: k,
                    })
                    .or_insert(0) += bundle;
            }
        }
    }
    for mult in edges.values_mut() {
        *mult *= m;
    }
    Ok(LabeledMultigraph { g, d, m, edges })
}

impl LabeledMultigraph {
    pub fn g(&self) -> usize {
        self.g
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.g.pow(self.d as u32)
    }

    pub fn edges(&self) -> &BTreeMap<EdgeKey, u64> {
        &self.edges
    }

    pub fn multiplicity(&self, from: usize, to: usize, label: usize) -> u64 {
        self.edges
            .get(&EdgeKey { from, to, label })
            .copied()
            .unwrap_or(0)
    }

    /// Total number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges.values().sum()
    }

    /// Edge count per label, indexed by `label - 1`.
    pub fn label_counts(&self) -> Vec<u64> {
        let mut counts = vec![0; self.g];
        for (e, &mult) in &self.edges {
            counts[e.label - 1] += mult;
        }
        counts
    }

    pub fn loops_on(&self, v: usize) -> u64 {
        self.edges
            .iter()
            .filter(|(e, _)| e.from == v && e.to == v)
            .map(|(_, &mult)| mult)
            .sum()
    }

    pub fn to_record(&self) -> GraphRecord {
        GraphRecord {
            g: self.g,
            d: self.d,
            m: self.m,
            edges: self
                .edges
                .iter()
                .map(|(e, &mult)| EdgeRecord {
                    from: e.from,
                    to: e.to,
                    label: e.label,
                    mult,
                })
                .collect(),
        }
    }

    /// Graphviz rendering; multiplicities go into the edge label.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph G_{}_{} {{", self.d, self.g);
        for v in 1..=self.vertex_count() {
            let _ = writeln!(out, "  {v};");
        }
        for (e, mult) in &self.edges {
            let style = if e.label == 1 { "dashed" } else { "solid" };
            let name = (b'a' + (e.label - 1) as u8) as char;
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"{name} x{mult}\", style={style}, mult={mult}];",
                e.from, e.to
            );
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Step {
    pub to: usize,
    pub label: usize,
}

/// A walk given by its start vertex and labeled steps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Walk {
    pub start: usize,
    pub steps: Vec<Step>,
}

impl Walk {
    pub fn new(start: usize) -> Self {
        Walk {
            start,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, to: usize, label: usize) {
        self.steps.push(Step { to, label });
    }

    pub fn end(&self) -> usize {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The traversed edges in order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeKey> + '_ {
        let mut at = self.start;
        self.steps.iter().map(move |s| {
            let e = EdgeKey {
                from: at,
                to: s.to,
                label: s.label,
            };
            at = s.to;
            e
        })
    }
}

/// The labels of the walk's edges in traversal order.
pub fn word_of_walk(w: &Walk, g: usize) -> Result<Word> {
    Word::new(w.steps.iter().map(|s| s.label).collect(), g)
}

/// A decomposition of a graph into `m` walks for every ordered pair of
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkPartition {
    pub g: usize,
    pub d: usize,
    pub m: u64,
    pub walks: BTreeMap<(usize, usize), Vec<Walk>>,
}

impl WalkPartition {
    pub fn n_side(&self) -> usize {
        self.g.pow(self.d as u32)
    }

    pub fn walk_count(&self) -> usize {
        self.walks.values().map(Vec::len).sum()
    }
}

/// Reads the walk partition off the certificate monomial for `n = g^d`.
pub fn derive_walks_from_certificate(n: usize, g: usize) -> Result<WalkPartition> {
    if g < 2 || n < 1 {
        return Err(Error::InvalidInput(format!(
            "need g >= 2 and n >= 1, got n={n}, g={g}"
        )));
    }
    let d = ceil_log(g, n);
    if g.pow(d as u32) != n {
        return Err(Error::InvalidInput(format!("{n} is not a power of {g}")));
    }
    let mut walks = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            let mut walk = Walk::new(i);
            for v in certificate_path(g, d, i, j) {
                if v.row != walk.end() {
                    return Err(Error::InvalidInput(format!(
                        "certificate factor for ({i},{j}) does not chain at {v}"
                    )));
                }
                walk.push(v.col, v.letter);
            }
            debug_assert_eq!(walk.end(), j);
            walks.insert((i, j), vec![walk]);
        }
    }
    Ok(WalkPartition { g, d, m: 1, walks })
}

/// Why a candidate partition is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionDefect {
    #[error("partition parameters (g={0}, d={1}, m={2}) do not match the graph")]
    Parameters(usize, usize, u64),
    #[error("slot ({0},{1}) holds {2} walks, expected {3}")]
    SlotSize(usize, usize, usize, u64),
    #[error("slot ({0},{1}) is outside the vertex range")]
    UnknownSlot(usize, usize),
    #[error("a walk in slot ({0},{1}) runs from {2} to {3}")]
    Endpoints(usize, usize, usize, usize),
    #[error("a walk in slot ({0},{1}) has length {2}, expected {3}")]
    Length(usize, usize, usize, usize),
    #[error("edge {0:?} used {1} times but has multiplicity {2}")]
    EdgeUsage(EdgeKey, u64, u64),
    #[error("word {0} occurs {1} times, expected {2}")]
    WordCoverage(String, u64, u64),
}

/// Checks both partition invariants: edge usage reproduces the multiplicity
/// map exactly, and every word of degree `2d` is read `m` times.
pub fn check_partition(
    graph: &LabeledMultigraph,
    partition: &WalkPartition,
) -> std::result::Result<(), PartitionDefect> {
    if (partition.g, partition.d, partition.m) != (graph.g, graph.d, graph.m) {
        return Err(PartitionDefect::Parameters(
            partition.g,
            partition.d,
            partition.m,
        ));
    }
    let side = graph.vertex_count();
    let len = 2 * graph.d;
    for &(i, j) in partition.walks.keys() {
        if !(1..=side).contains(&i) || !(1..=side).contains(&j) {
            return Err(PartitionDefect::UnknownSlot(i, j));
        }
    }
    let mut usage: BTreeMap<EdgeKey, u64> = BTreeMap::new();
    let mut words: BTreeMap<Word, u64> = BTreeMap::new();
    for i in 1..=side {
        for j in 1..=side {
            let slot = partition.walks.get(&(i, j)).map_or(&[][..], Vec::as_slice);
            if slot.len() as u64 != graph.m {
                return Err(PartitionDefect::SlotSize(i, j, slot.len(), graph.m));
            }
            for walk in slot {
                if walk.start != i || walk.end() != j {
                    return Err(PartitionDefect::Endpoints(i, j, walk.start, walk.end()));
                }
                if walk.len() != len {
                    return Err(PartitionDefect::Length(i, j, walk.len(), len));
                }
                for e in walk.edges() {
                    *usage.entry(e).or_insert(0) += 1;
                }
                let word = word_of_walk(walk, graph.g).map_err(|_| {
                    PartitionDefect::Parameters(partition.g, partition.d, partition.m)
                })?;
                *words.entry(word).or_insert(0) += 1;
            }
        }
    }
    for (e, &mult) in &graph.edges {
        let used = usage.remove(e).unwrap_or(0);
        if used != mult {
            return Err(PartitionDefect::EdgeUsage(*e, used, mult));
        }
    }
    if let Some((e, used)) = usage.into_iter().next() {
        return Err(PartitionDefect::EdgeUsage(e, used, 0));
    }
    for w in all_words(graph.g, len) {
        let seen = words.remove(&w).unwrap_or(0);
        if seen != graph.m {
            return Err(PartitionDefect::WordCoverage(w.to_string(), seen, graph.m));
        }
    }
    if let Some((w, seen)) = words.into_iter().next() {
        return Err(PartitionDefect::WordCoverage(w.to_string(), seen, 0));
    }
    Ok(())
}

pub fn verify_partition(graph: &LabeledMultigraph, partition: &WalkPartition) -> bool {
    check_partition(graph, partition).is_ok()
}

/// Strips the first and last edge of every walk.
///
/// Returns the graph formed by the removed edges' complement and the partition
/// formed by the inner segments, which lives on vertices `1..=g^{d-1}` with
/// `g² m` walks per pair.
pub fn peel(
    graph: &LabeledMultigraph,
    partition: &WalkPartition,
) -> Result<(BTreeMap<EdgeKey, u64>, WalkPartition)> {
    if graph.d == 0 {
        return Err(Error::InvalidInput("cannot peel G_0".into()));
    }
    check_partition(graph, partition).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut remaining = graph.edges.clone();
    let mut inner: BTreeMap<(usize, usize), Vec<Walk>> = BTreeMap::new();
    for walks in partition.walks.values() {
        for walk in walks {
            let edges: Vec<EdgeKey> = walk.edges().collect();
            for e in [edges[0], edges[edges.len() - 1]] {
                let slot = remaining.get_mut(&e).expect("edge exists in graph");
                *slot -= 1;
            }
            let mut mid = Walk::new(edges[0].to);
            for e in &edges[1..edges.len() - 1] {
                mid.push(e.to, e.label);
            }
            inner.entry((mid.start, mid.end())).or_default().push(mid);
        }
    }
    remaining.retain(|_, mult| *mult > 0);
    let g2 = (graph.g * graph.g) as u64;
    Ok((
        remaining,
        WalkPartition {
            g: graph.g,
            d: graph.d - 1,
            m: graph.m * g2,
            walks: inner,
        },
    ))
}

/// Search statistics for [`enumerate_partitions`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationOutcome {
    /// Number of partitions found, saturating at the cap.
    pub count: u64,
    pub saturated: bool,
    pub expanded: u64,
}

/// Counts the walk partitions of `graph` by exhaustive backtracking.
///
/// Words are placed in decreasing lexicographic order, `m` copies each; a
/// placement picks a start vertex and follows edges whose labels spell the
/// word, consuming multiplicity and one unit of the `(start, end)` slot.
/// Copies of the same word are placed in nondecreasing placement order, so
/// partitions are counted as multisets of walks. Each tried placement costs
/// one unit of `budget`.
pub fn enumerate_partitions(
    graph: &LabeledMultigraph,
    cap: u64,
    budget: u64,
) -> Result<EnumerationOutcome> {
    if cap < 2 {
        return Err(Error::InvalidInput("cap must be at least 2".into()));
    }
    let mut search = Search::new(graph, cap, budget);
    search.run(0, None)?;
    Ok(EnumerationOutcome {
        count: search.count,
        saturated: search.count >= cap,
        expanded: search.expanded,
    })
}

struct Search {
    side: usize,
    m: u64,
    words: Vec<Vec<usize>>,
    /// adjacency[(v - 1) * g + label - 1] = [(target, edge index)]
    adjacency: Vec<Vec<(usize, usize)>>,
    g: usize,
    remaining: Vec<u64>,
    slots: Vec<u64>,
    count: u64,
    cap: u64,
    expanded: u64,
    budget: u64,
}

/// A walk placement: the visited vertices (start first) and the edges used.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Placement {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl Search {
    fn new(graph: &LabeledMultigraph, cap: u64, budget: u64) -> Self {
        let side = graph.vertex_count();
        let g = graph.g;
        let mut adjacency = vec![Vec::new(); side * g];
        let mut remaining = Vec::with_capacity(graph.edges.len());
        for (idx, (e, &mult)) in graph.edges.iter().enumerate() {
            adjacency[(e.from - 1) * g + e.label - 1].push((e.to, idx));
            remaining.push(mult);
        }
        let words = all_words(g, 2 * graph.d)
            .into_iter()
            .map(|w| w.letters().to_vec())
            .collect();
        Search {
            side,
            m: graph.m,
            words,
            adjacency,
            g,
            remaining,
            slots: vec![graph.m; side * side],
            count: 0,
            cap,
            expanded: 0,
            budget,
        }
    }

    /// Places walk number `idx` (word `idx / m`, copy `idx % m`).
    fn run(&mut self, idx: usize, previous: Option<&Placement>) -> Result<()> {
        let m = self.m as usize;
        if idx == self.words.len() * m {
            // every walk placed; edge totals match, so every edge is used
            self.count += 1;
            return Ok(());
        }
        let word_idx = idx / m;
        let floor = if idx.is_multiple_of(m) {
            None
        } else {
            previous
        };
        let placements = self.placements(word_idx);
        for p in placements {
            if floor.is_some_and(|f| &p < f) {
                continue;
            }
            self.expanded += 1;
            if self.expanded > self.budget {
                return Err(Error::BudgetExceeded {
                    budget: self.budget,
                    expanded: self.expanded,
                });
            }
            let slot = self.slot_index(&p);
            if self.slots[slot] == 0 {
                continue;
            }
            self.apply(&p, slot);
            let r = self.run(idx + 1, Some(&p));
            self.undo(&p, slot);
            r?;
            if self.count >= self.cap {
                return Ok(());
            }
        }
        Ok(())
    }

    fn slot_index(&self, p: &Placement) -> usize {
        let start = p.vertices[0];
        let end = *p.vertices.last().expect("nonempty");
        (start - 1) * self.side + end - 1
    }

    fn apply(&mut self, p: &Placement, slot: usize) {
        self.slots[slot] -= 1;
        for &e in &p.edges {
            self.remaining[e] -= 1;
        }
    }

    fn undo(&mut self, p: &Placement, slot: usize) {
        self.slots[slot] += 1;
        for &e in &p.edges {
            self.remaining[e] += 1;
        }
    }

    /// All ways to spell the word from any start vertex with the edges left.
    fn placements(&self, word_idx: usize) -> Vec<Placement> {
        let word = &self.words[word_idx];
        let mut out = Vec::new();
        let mut used: Vec<u64> = vec![0; self.remaining.len()];
        for start in 1..=self.side {
            let mut cur = Placement {
                vertices: vec![start],
                edges: Vec::new(),
            };
            self.spell(word, &mut cur, &mut used, &mut out);
        }
        out
    }

    fn spell(
        &self,
        word: &[usize],
        cur: &mut Placement,
        used: &mut Vec<u64>,
        out: &mut Vec<Placement>,
    ) {
        let pos = cur.edges.len();
        if pos == word.len() {
            out.push(cur.clone());
            return;
        }
        let at = *cur.vertices.last().expect("nonempty");
        for &(to, e) in &self.adjacency[(at - 1) * self.g + word[pos] - 1] {
            if used[e] >= self.remaining[e] {
                continue;
            }
            used[e] += 1;
            cur.vertices.push(to);
            cur.edges.push(e);
            self.spell(word, cur, used, out);
            cur.edges.pop();
            cur.vertices.pop();
            used[e] -= 1;
        }
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for s in &self.steps {
            write!(f, " -{}-> {}", (b'a' + (s.label - 1) as u8) as char, s.to)?;
        }
        Ok(())
    }
}
