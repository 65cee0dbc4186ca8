//! Bounded bidirectional search over exchange normal forms.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::canon::canonicalize;
use super::gather::{macro_moves, macro_successors, run_macro};
use super::{inverse_path, replay, Move, RewriteError};
use crate::diagram::{Diagram, GenId, GeneratorKind, Slice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Total distinct states stored across both directions.
    pub max_states: usize,
    /// Largest slice count explored; `None` means the larger input plus 8.
    pub max_slices: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_states: 1_000_000,
            max_slices: None,
        }
    }
}

impl Budget {
    pub fn new(max_states: usize, max_slices: Option<usize>) -> Self {
        Budget { max_states, max_slices }
    }

    pub fn slices_for(&self, a: &Diagram, b: &Diagram) -> usize {
        self.max_slices.unwrap_or(a.len().max(b.len()) + 8)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Replaying `path` on the first diagram yields the second.
    Equal { path: Vec<Move> },
    /// The budget ran out. Says nothing about inequality.
    Unknown,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub states_visited: usize,
    pub max_frontier: usize,
    #[serde(with = "millis")]
    pub wall_time: Duration,
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn is_equal(&self) -> bool {
        matches!(self.verdict, Verdict::Equal { .. })
    }

    pub fn path(&self) -> Option<&[Move]> {
        match &self.verdict {
            Verdict::Equal { path } => Some(path),
            Verdict::Unknown => None,
        }
    }
}

type Key = Box<[u32]>;

fn encode(slices: &[Slice]) -> Key {
    slices
        .iter()
        .map(|s| {
            let code = match s.kind {
                GeneratorKind::CapR => 0,
                GeneratorKind::CapL => 1,
                GeneratorKind::CupR => 2,
                GeneratorKind::CupL => 3,
                GeneratorKind::BraidPos => 4,
                GeneratorKind::BraidNeg => 5,
                GeneratorKind::Named(GenId(id)) => 6 + id as u32,
            };
            code << 16 | s.offset as u32
        })
        .collect()
}

fn decode(key: &[u32]) -> Vec<Slice> {
    key.iter()
        .map(|&x| {
            let kind = match x >> 16 {
                0 => GeneratorKind::CapR,
                1 => GeneratorKind::CapL,
                2 => GeneratorKind::CupR,
                3 => GeneratorKind::CupL,
                4 => GeneratorKind::BraidPos,
                5 => GeneratorKind::BraidNeg,
                c => GeneratorKind::Named(GenId((c - 6) as u16)),
            };
            Slice::new(kind, (x & 0xffff) as usize)
        })
        .collect()
}

const ROOT: u32 = u32::MAX;

struct Node {
    key: Key,
    parent: u32,
    via: u32,
}

/// One direction of the search.
struct Tree {
    root: Diagram,
    root_moves: Vec<Move>,
    nodes: Vec<Node>,
    index: HashMap<Key, u32>,
    frontier: BinaryHeap<Reverse<(usize, u64, u32)>>,
}

impl Tree {
    fn new(d: &Diagram) -> Self {
        let (canon, root_moves) = canonicalize(d);
        let key = encode(canon.slices());
        let mut t = Tree {
            root: d.clone(),
            root_moves,
            nodes: Vec::new(),
            index: HashMap::new(),
            frontier: BinaryHeap::new(),
        };
        t.insert(key, ROOT, 0, 0);
        t
    }

    fn insert(&mut self, key: Key, parent: u32, via: u32, seq: u64) -> u32 {
        let id = self.nodes.len() as u32;
        self.frontier.push(Reverse((key.len(), seq, id)));
        self.index.insert(key.clone(), id);
        self.nodes.push(Node { key, parent, via });
        id
    }

    fn diagram(&self, id: u32) -> Diagram {
        self.root.with_slices_trusted(decode(&self.nodes[id as usize].key))
    }

    /// Primitive moves from the root diagram to node `id`.
    fn path_to(&self, id: u32, max_slices: usize) -> Vec<Move> {
        let mut chain = Vec::new();
        let mut cur = id;
        while self.nodes[cur as usize].parent != ROOT {
            chain.push(cur);
            cur = self.nodes[cur as usize].parent;
        }
        let mut path = self.root_moves.clone();
        for &node in chain.iter().rev() {
            let n = &self.nodes[node as usize];
            let parent = self.diagram(n.parent);
            let mv = &macro_moves(&parent, max_slices)[n.via as usize];
            path.extend(run_macro(&parent, mv).expect("recorded macro applies").1);
        }
        path
    }
}

fn check_compatible(a: &Diagram, b: &Diagram) -> Result<(), RewriteError> {
    if a.signature() != b.signature() {
        return Err(RewriteError::SignatureMismatch);
    }
    if a.domain() != b.domain() {
        return Err(RewriteError::BoundaryMismatch(format!(
            "domains {} and {}",
            a.domain(),
            b.domain()
        )));
    }
    let (ca, cb) = (a.codomain(), b.codomain());
    if ca != cb {
        return Err(RewriteError::BoundaryMismatch(format!("codomains {ca} and {cb}")));
    }
    Ok(())
}

/// Searches for a chain of moves turning `a` into `b`. Both directions grow
/// best-first, smallest diagrams first. `Equal` carries a path that has
/// been replayed and checked.
pub fn equiv_search(a: &Diagram, b: &Diagram, budget: Budget) -> Result<SearchResult, RewriteError> {
    check_compatible(a, b)?;
    let started = Instant::now();
    if a == b {
        return Ok(SearchResult {
            verdict: Verdict::Equal { path: Vec::new() },
            stats: SearchStats {
                states_visited: 1,
                max_frontier: 0,
                wall_time: started.elapsed(),
            },
        });
    }
    let max_slices = budget.slices_for(a, b);
    // Run in a fixed order of the two inputs so the verdict is symmetric.
    let swap = encode(canonicalize(b).0.slices()) < encode(canonicalize(a).0.slices());
    let (first, second) = if swap { (b, a) } else { (a, b) };
    let (found, mut stats) = search(first, second, budget.max_states, max_slices);
    stats.wall_time = started.elapsed();
    let verdict = match found {
        None => Verdict::Unknown,
        Some(path) => {
            let path = if swap { inverse_path(b, &path)? } else { path };
            let end = replay(a, &path)?;
            assert!(end == *b, "search produced a path that does not replay");
            Verdict::Equal { path }
        }
    };
    Ok(SearchResult { verdict, stats })
}

fn search(a: &Diagram, b: &Diagram, max_states: usize, max_slices: usize) -> (Option<Vec<Move>>, SearchStats) {
    let mut trees = [Tree::new(a), Tree::new(b)];
    let mut stats = SearchStats {
        states_visited: 2,
        ..SearchStats::default()
    };
    let mut seq = 1u64;
    let meet = |trees: &[Tree; 2], side: usize, id: u32, other: u32| -> Vec<Move> {
        let (ia, ib) = if side == 0 { (id, other) } else { (other, id) };
        let mut path = trees[0].path_to(ia, max_slices);
        let to_b = trees[1].path_to(ib, max_slices);
        path.extend(inverse_path(b, &to_b).expect("recorded path is valid"));
        path
    };
    if let Some(&other) = trees[1].index.get(&trees[0].nodes[0].key) {
        return (Some(meet(&trees, 0, 0, other)), stats);
    }
    loop {
        let peek = |t: &Tree| t.frontier.peek().map(|_| t.nodes.len());
        let side = match (peek(&trees[0]), peek(&trees[1])) {
            (None, None) => return (None, stats),
            (Some(_), None) => 0,
            (None, Some(_)) => 1,
            (Some(x), Some(y)) => usize::from(y < x),
        };
        let Reverse((_, _, id)) = trees[side].frontier.pop().expect("non-empty");
        let d = trees[side].diagram(id);
        for (via, slices) in macro_successors(&d, max_slices) {
            let key = encode(&slices);
            if trees[side].index.contains_key(&key) {
                continue;
            }
            let new_id = trees[side].insert(key.clone(), id, via as u32, seq);
            seq += 1;
            stats.states_visited += 1;
            if let Some(&other) = trees[1 - side].index.get(&key) {
                return (Some(meet(&trees, side, new_id, other)), stats);
            }
            if stats.states_visited >= max_states {
                return (None, stats);
            }
        }
        stats.max_frontier = stats
            .max_frontier
            .max(trees[0].frontier.len() + trees[1].frontier.len());
    }
}
