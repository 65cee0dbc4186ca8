//! Strand topology: which wire segments belong to the same connected piece of
//! string, and the order in which a traversal meets the slices.

use super::{Diagram, GeneratorKind, Object, Orientation};

/// A wire at a given level: `level` is between slices `level - 1` and
/// `level`, `pos` is the 0-based wire index from the left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WirePoint {
    pub level: usize,
    pub pos: usize,
}

impl WirePoint {
    pub fn new(level: usize, pos: usize) -> Self {
        WirePoint { level, pos }
    }
}

/// Direction of travel on the page.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }
}

impl From<Orientation> for Direction {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::Up => Direction::Up,
            Orientation::Down => Direction::Down,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Moved to a neighbouring point, possibly through slice `through`.
    Moved {
        to: WirePoint,
        dir: Direction,
        through: Option<usize>,
    },
    /// Fell off the top or bottom boundary.
    Boundary,
    /// Hit a named generator, which a strand cannot pass through.
    Blocked(usize),
}

/// Walks along strands. Works from slice offsets and arities only, so it
/// also serves diagrams whose wires carry no orientation.
pub struct Walker<'a> {
    slices: &'a [super::Slice],
    arities: Vec<(usize, usize)>,
}

impl<'a> Walker<'a> {
    pub fn new(d: &'a Diagram) -> Self {
        let arities = d.slices().iter().map(|s| d.arity(s.kind)).collect();
        Walker {
            slices: d.slices(),
            arities,
        }
    }

    pub(crate) fn from_parts(slices: &'a [super::Slice], arities: Vec<(usize, usize)>) -> Self {
        Walker { slices, arities }
    }

    pub fn step(&self, at: WirePoint, dir: Direction) -> Step {
        let WirePoint { level, pos } = at;
        match dir {
            Direction::Down => {
                if level == self.slices.len() {
                    return Step::Boundary;
                }
                let s = self.slices[level];
                let (m, n) = self.arities[level];
                let q = s.offset;
                if pos < q {
                    return moved(level + 1, pos, dir, None);
                }
                if pos >= q + m {
                    return moved(level + 1, pos + n - m, dir, None);
                }
                let k = pos - q;
                match s.kind {
                    GeneratorKind::BraidPos | GeneratorKind::BraidNeg => {
                        moved(level + 1, q + 1 - k, Direction::Down, Some(level))
                    }
                    GeneratorKind::CupR | GeneratorKind::CupL => moved(level, q + 1 - k, Direction::Up, Some(level)),
                    _ => Step::Blocked(level),
                }
            }
            Direction::Up => {
                if level == 0 {
                    return Step::Boundary;
                }
                let s = self.slices[level - 1];
                let (m, n) = self.arities[level - 1];
                let q = s.offset;
                if pos < q {
                    return moved(level - 1, pos, dir, None);
                }
                if pos >= q + n {
                    return moved(level - 1, pos + m - n, dir, None);
                }
                let k = pos - q;
                match s.kind {
                    GeneratorKind::BraidPos | GeneratorKind::BraidNeg => {
                        moved(level - 1, q + 1 - k, Direction::Up, Some(level - 1))
                    }
                    GeneratorKind::CapR | GeneratorKind::CapL => {
                        moved(level, q + 1 - k, Direction::Down, Some(level - 1))
                    }
                    _ => Step::Blocked(level - 1),
                }
            }
        }
    }
}

fn moved(level: usize, pos: usize, dir: Direction, through: Option<usize>) -> Step {
    Step::Moved {
        to: WirePoint { level, pos },
        dir,
        through,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    /// True if the strand is a loop.
    pub closed: bool,
    /// Slice indices met along the strand, in traversal order. A crossing
    /// of the strand with itself appears twice. For pieces joined through
    /// named generators the order is by slice index.
    pub slices: Vec<usize>,
    /// Number of (level, position) wire segments in the strand.
    pub segments: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandMap {
    pub strands: Vec<Strand>,
    /// `strand_of[level][pos]` is the index into `strands`.
    pub strand_of: Vec<Vec<usize>>,
}

impl StrandMap {
    pub fn components(&self) -> usize {
        self.strands.len()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Partitions every wire segment of `d` into connected strands.
pub fn trace_strands(d: &Diagram) -> StrandMap {
    let widths = d.widths();
    let mut base = Vec::with_capacity(widths.len());
    let mut total = 0;
    for w in &widths {
        base.push(total);
        total += w;
    }
    let id = |p: WirePoint| base[p.level] + p.pos;
    let mut uf = UnionFind::new(total);
    for (l, s) in d.slices().iter().enumerate() {
        let (m, n) = d.arity(s.kind);
        let q = s.offset;
        for p in 0..q {
            uf.union(id(WirePoint::new(l, p)), id(WirePoint::new(l + 1, p)));
        }
        for p in q + m..widths[l] {
            uf.union(id(WirePoint::new(l, p)), id(WirePoint::new(l + 1, p + n - m)));
        }
        match s.kind {
            GeneratorKind::BraidPos | GeneratorKind::BraidNeg => {
                uf.union(id(WirePoint::new(l, q)), id(WirePoint::new(l + 1, q + 1)));
                uf.union(id(WirePoint::new(l, q + 1)), id(WirePoint::new(l + 1, q)));
            }
            GeneratorKind::CapR | GeneratorKind::CapL => {
                uf.union(id(WirePoint::new(l + 1, q)), id(WirePoint::new(l + 1, q + 1)));
            }
            GeneratorKind::CupR | GeneratorKind::CupL => {
                uf.union(id(WirePoint::new(l, q)), id(WirePoint::new(l, q + 1)));
            }
            GeneratorKind::Named(_) => {
                let ports: Vec<usize> = (q..q + m)
                    .map(|p| id(WirePoint::new(l, p)))
                    .chain((q..q + n).map(|p| id(WirePoint::new(l + 1, p))))
                    .collect();
                for w in ports.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
        }
    }

    let mut root_to_strand = std::collections::HashMap::new();
    let mut strand_of = Vec::with_capacity(widths.len());
    let mut segment_counts: Vec<usize> = Vec::new();
    for (l, w) in widths.iter().enumerate() {
        let mut row = Vec::with_capacity(*w);
        for p in 0..*w {
            let r = uf.find(id(WirePoint::new(l, p)));
            let next = root_to_strand.len();
            let s = *root_to_strand.entry(r).or_insert(next);
            if s == segment_counts.len() {
                segment_counts.push(0);
            }
            segment_counts[s] += 1;
            row.push(s);
        }
        strand_of.push(row);
    }

    let levels = d.levels();
    let walker = Walker::new(d);
    let has_named = d.slices().iter().any(|s| matches!(s.kind, GeneratorKind::Named(_)));
    let mut strands = Vec::with_capacity(segment_counts.len());
    for (s, &segments) in segment_counts.iter().enumerate() {
        let (closed, slices) = if has_named {
            incidences_by_index(d, &strand_of, s)
        } else {
            walk_strand(d, &walker, &strand_of, &levels, s)
        };
        strands.push(Strand {
            closed,
            slices,
            segments,
        });
    }
    StrandMap { strands, strand_of }
}

fn touched_levels(d: &Diagram, l: usize) -> (usize, usize, usize) {
    let s = d.slices()[l];
    let (m, n) = d.arity(s.kind);
    (s.offset, m, n)
}

fn incidences_by_index(d: &Diagram, strand_of: &[Vec<usize>], s: usize) -> (bool, Vec<usize>) {
    let mut slices = Vec::new();
    let mut touches_boundary = strand_of[0].contains(&s) || strand_of.last().is_some_and(|r| r.contains(&s));
    for l in 0..d.len() {
        let (q, m, n) = touched_levels(d, l);
        let hit = (q..q + m).any(|p| strand_of[l][p] == s) || (q..q + n).any(|p| strand_of[l + 1][p] == s);
        if hit {
            slices.push(l);
        }
    }
    if slices.is_empty() && !touches_boundary {
        touches_boundary = true;
    }
    (!touches_boundary, slices)
}

/// Follows a strand from a deterministic start, in its orientation when the
/// wires are oriented.
fn walk_strand(
    d: &Diagram,
    walker: &Walker<'_>,
    strand_of: &[Vec<usize>],
    levels: &[super::ObjectWord],
    s: usize,
) -> (bool, Vec<usize>) {
    let last = strand_of.len() - 1;
    // Open strand: start at the endpoint the orientation leaves from.
    let mut open_start = None;
    for (pos, &t) in strand_of[0].iter().enumerate() {
        if t == s {
            let dir = match levels[0].wires()[pos] {
                Object::Oriented(Orientation::Up) => Direction::Up,
                _ => Direction::Down,
            };
            if dir == Direction::Down {
                open_start = Some((WirePoint::new(0, pos), Direction::Down));
                break;
            }
        }
    }
    if open_start.is_none() {
        for (pos, &t) in strand_of[last].iter().enumerate() {
            if t == s {
                open_start = Some((WirePoint::new(last, pos), Direction::Up));
                if matches!(levels[last].wires()[pos], Object::Oriented(Orientation::Up)) {
                    break;
                }
            }
        }
    }
    if open_start.is_none() {
        // An open strand whose both ends are on top: start from the end whose
        // label says it travels down.
        for (pos, &t) in strand_of[0].iter().enumerate() {
            if t == s {
                open_start = Some((WirePoint::new(0, pos), Direction::Down));
                break;
            }
        }
    }
    if let Some((mut at, mut dir)) = open_start {
        let mut slices = Vec::new();
        while let Step::Moved { to, dir: nd, through } = walker.step(at, dir) {
            if let Some(t) = through {
                slices.push(t);
            }
            at = to;
            dir = nd;
        }
        return (false, slices);
    }

    // Closed loop: start on the exit leg of the earliest cap.
    let (cap_level, cap) = d
        .slices()
        .iter()
        .enumerate()
        .find(|(l, sl)| sl.kind.is_cap() && strand_of[l + 1][sl.offset] == s)
        .map(|(l, sl)| (l, *sl))
        .expect("a closed strand contains a cap");
    let exit = cap_exit_leg(cap.kind, cap.offset);
    let start = WirePoint::new(cap_level + 1, exit);
    let mut slices = vec![cap_level];
    let (mut at, mut dir) = (start, Direction::Down);
    loop {
        match walker.step(at, dir) {
            Step::Moved { to, dir: nd, through } => {
                if through == Some(cap_level) && d.slices()[cap_level].kind.is_cap() && to == start {
                    break;
                }
                if let Some(t) = through {
                    slices.push(t);
                }
                at = to;
                dir = nd;
            }
            Step::Boundary | Step::Blocked(_) => unreachable!("closed strand reached a boundary"),
        }
    }
    (true, slices)
}

/// The leg a traversal leaves a cap by, travelling down.
pub(crate) fn cap_exit_leg(kind: GeneratorKind, offset: usize) -> usize {
    match kind {
        GeneratorKind::CapL => offset,
        _ => offset + 1,
    }
}

/// True iff `d` is closed and consists of exactly one strand.
pub fn is_knot(d: &Diagram) -> bool {
    d.is_closed() && trace_strands(d).components() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_diagram, Diagram, Orientation::Up};

    #[test]
    fn minimal_unknot_is_one_component() {
        let d = parse_diagram("capR @ 0\ncupL @ 0").unwrap();
        let map = trace_strands(&d);
        assert_eq!(map.components(), 1);
        assert!(map.strands[0].closed);
        assert_eq!(map.strands[0].slices, vec![0, 1]);
        assert!(is_knot(&d));
    }

    #[test]
    fn example_knot_is_a_knot() {
        let d = parse_diagram("capR @ 0\ncapL @ 2\nsigma+ @ 1\nsigma- @ 0\nsigma- @ 2\ncupR @ 0\ncupL @ 0").unwrap();
        let map = trace_strands(&d);
        assert_eq!(map.components(), 1);
        // each crossing is met twice, each cap and cup once
        assert_eq!(map.strands[0].slices.len(), 4 + 2 * 3);
    }

    #[test]
    fn two_disjoint_unknots() {
        // hand trace: the inner cap/cup pair closes on itself, and so does the outer
        let d = parse_diagram("capR @ 0\ncapR @ 2\ncupL @ 2\ncupL @ 0").unwrap();
        assert_eq!(trace_strands(&d).components(), 2);
        assert!(!is_knot(&d));
        let nested = parse_diagram("capR @ 0\ncapR @ 1\ncupL @ 1\ncupL @ 0").unwrap();
        assert_eq!(trace_strands(&nested).components(), 2);
    }

    #[test]
    fn identity_is_not_a_knot() {
        let d = Diagram::cc(&[Up], vec![]).unwrap();
        assert_eq!(trace_strands(&d).components(), 1);
        assert!(!is_knot(&d));
    }

    #[test]
    fn segments_partition_levels() {
        let d = parse_diagram("capR @ 0\ncapL @ 2\nsigma+ @ 1\nsigma- @ 0\nsigma- @ 2\ncupR @ 0\ncupL @ 0").unwrap();
        let map = trace_strands(&d);
        let total: usize = d.widths().iter().sum();
        assert_eq!(map.strands.iter().map(|s| s.segments).sum::<usize>(), total);
    }
}
