//! Slice-form string diagrams over a monoidal signature.
//!
//! A [`Diagram`] is a domain word plus a list of [`Slice`]s read top to
//! bottom. Each slice places exactly one generator at a wire offset of the
//! current level; every other wire passes through untouched.

pub(crate) mod parse;
pub(crate) mod strands;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse_diagram, serialize_diagram};
pub use strands::{is_knot, trace_strands, Direction, Step, Strand, StrandMap, Walker, WirePoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("{}type error at level {level}, offset {offset}: {message}", line_prefix(*.line))]
    Type {
        line: Option<usize>,
        level: usize,
        offset: usize,
        message: String,
    },
}

fn line_prefix(line: Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}: "),
        None => String::new(),
    }
}

impl DiagramError {
    fn with_line(self, line: usize) -> Self {
        match self {
            DiagramError::Type {
                level, offset, message, ..
            } => DiagramError::Type {
                line: Some(line),
                level,
                offset,
                message,
            },
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    Up,
    Down,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }

    /// +1 for Up, -1 for Down.
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Up => 1,
            Orientation::Down => -1,
        }
    }
}

/// A generating object: one of the two oriented wires of the cap/cup
/// signature, or a symbol declared by a user signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Object {
    Oriented(Orientation),
    Named(Arc<str>),
}

impl Object {
    pub const UP: Object = Object::Oriented(Orientation::Up);
    pub const DOWN: Object = Object::Oriented(Orientation::Down);

    pub fn orientation(&self) -> Option<Orientation> {
        match self {
            Object::Oriented(o) => Some(*o),
            Object::Named(_) => None,
        }
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Oriented(Orientation::Up) => f.write_str("^"),
            Object::Oriented(Orientation::Down) => f.write_str("v"),
            Object::Named(name) => f.write_str(name),
        }
    }
}

/// A tensor product of generating objects; the empty word is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectWord(pub Vec<Object>);

impl ObjectWord {
    pub fn unit() -> Self {
        ObjectWord(Vec::new())
    }

    pub fn oriented(wires: &[Orientation]) -> Self {
        ObjectWord(wires.iter().map(|o| Object::Oriented(*o)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn wires(&self) -> &[Object] {
        &self.0
    }
}

impl fmt::Display for ObjectWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (i, o) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

/// Index of a named generator inside its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub u16);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorType {
    pub name: Arc<str>,
    pub domain: ObjectWord,
    pub codomain: ObjectWord,
}

/// A monoidal signature: generating objects and named generating morphisms.
///
/// The oriented objects `^`/`v`, the four caps and cups and the braidings
/// are always available; a signature only adds named symbols on top.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    object_names: BTreeSet<Arc<str>>,
    generators: Vec<GeneratorType>,
    by_name: BTreeMap<Arc<str>, GenId>,
}

impl Signature {
    /// The cap/cup signature: no named objects or generators.
    pub fn cc() -> Arc<Signature> {
        Arc::new(Signature::default())
    }

    pub fn is_cc(&self) -> bool {
        self.generators.is_empty() && self.object_names.is_empty()
    }

    pub fn add_object(&mut self, name: &str) -> Arc<str> {
        if let Some(existing) = self.object_names.get(name) {
            return existing.clone();
        }
        let name: Arc<str> = Arc::from(name);
        self.object_names.insert(name.clone());
        name
    }

    /// Declares a named generator. Named objects in its type are added to the
    /// object set. Redeclaring a name is an error.
    pub fn add_generator(&mut self, name: &str, domain: ObjectWord, codomain: ObjectWord) -> Result<GenId, String> {
        if self.by_name.contains_key(name) {
            return Err(format!("generator `{name}` declared twice"));
        }
        if self.generators.len() >= u16::MAX as usize {
            return Err("too many generators".into());
        }
        for obj in domain.0.iter().chain(codomain.0.iter()) {
            if let Object::Named(n) = obj {
                self.add_object(n);
            }
        }
        let id = GenId(self.generators.len() as u16);
        let name: Arc<str> = Arc::from(name);
        self.by_name.insert(name.clone(), id);
        self.generators.push(GeneratorType { name, domain, codomain });
        Ok(id)
    }

    pub fn object_names(&self) -> impl Iterator<Item = &str> {
        self.object_names.iter().map(|s| s.as_ref())
    }

    pub fn generators(&self) -> &[GeneratorType] {
        &self.generators
    }

    pub fn generator(&self, id: GenId) -> &GeneratorType {
        &self.generators[id.0 as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    /// I → ↑↓
    CapR,
    /// I → ↓↑
    CapL,
    /// ↓↑ → I
    CupR,
    /// ↑↓ → I
    CupL,
    BraidPos,
    BraidNeg,
    Named(GenId),
}

impl GeneratorKind {
    pub fn is_cap(self) -> bool {
        matches!(self, GeneratorKind::CapR | GeneratorKind::CapL)
    }

    pub fn is_cup(self) -> bool {
        matches!(self, GeneratorKind::CupR | GeneratorKind::CupL)
    }

    pub fn is_braid(self) -> bool {
        matches!(self, GeneratorKind::BraidPos | GeneratorKind::BraidNeg)
    }

    /// +1 / -1 for braidings, `None` otherwise.
    pub fn braid_sign(self) -> Option<i64> {
        match self {
            GeneratorKind::BraidPos => Some(1),
            GeneratorKind::BraidNeg => Some(-1),
            _ => None,
        }
    }

    pub fn braid_of_sign(sign: i64) -> GeneratorKind {
        if sign >= 0 {
            GeneratorKind::BraidPos
        } else {
            GeneratorKind::BraidNeg
        }
    }

    pub fn inverse_braid(self) -> Option<GeneratorKind> {
        match self {
            GeneratorKind::BraidPos => Some(GeneratorKind::BraidNeg),
            GeneratorKind::BraidNeg => Some(GeneratorKind::BraidPos),
            _ => None,
        }
    }

    /// Keyword used by the `.bmc` format.
    pub fn keyword(self) -> &'static str {
        match self {
            GeneratorKind::CapR => "capR",
            GeneratorKind::CapL => "capL",
            GeneratorKind::CupR => "cupR",
            GeneratorKind::CupL => "cupL",
            GeneratorKind::BraidPos => "sigma+",
            GeneratorKind::BraidNeg => "sigma-",
            GeneratorKind::Named(_) => "gen",
        }
    }
}

/// One generator placed at `offset`, the index of the leftmost wire it
/// touches (or, for generators without inputs, the gap it is inserted at).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slice {
    pub kind: GeneratorKind,
    pub offset: usize,
}

impl Slice {
    pub fn new(kind: GeneratorKind, offset: usize) -> Self {
        Slice { kind, offset }
    }
}

/// A typed slice-form diagram. Construction through [`Diagram::new`]
/// guarantees that it typechecks.
#[derive(Debug, Clone)]
pub struct Diagram {
    signature: Arc<Signature>,
    domain: ObjectWord,
    slices: Vec<Slice>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.slices == other.slices
            && (Arc::ptr_eq(&self.signature, &other.signature) || self.signature == other.signature)
    }
}

impl Eq for Diagram {}

impl std::hash::Hash for Diagram {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.domain.hash(state);
        self.slices.hash(state);
    }
}

impl Diagram {
    pub fn new(signature: Arc<Signature>, domain: ObjectWord, slices: Vec<Slice>) -> Result<Self, DiagramError> {
        let d = Diagram {
            signature,
            domain,
            slices,
        };
        d.typecheck()?;
        Ok(d)
    }

    /// A diagram over the cap/cup signature.
    pub fn cc(domain: &[Orientation], slices: Vec<Slice>) -> Result<Self, DiagramError> {
        Diagram::new(Signature::cc(), ObjectWord::oriented(domain), slices)
    }

    pub fn identity(signature: Arc<Signature>, domain: ObjectWord) -> Self {
        Diagram {
            signature,
            domain,
            slices: Vec::new(),
        }
    }

    /// Builds a diagram that the caller already knows to be well typed.
    pub(crate) fn from_trusted(signature: Arc<Signature>, domain: ObjectWord, slices: Vec<Slice>) -> Self {
        let d = Diagram {
            signature,
            domain,
            slices,
        };
        debug_assert!(d.typecheck().is_ok(), "trusted diagram failed to typecheck");
        d
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn domain(&self) -> &ObjectWord {
        &self.domain
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// Same signature and domain, different slices. Typechecks the result.
    pub fn with_slices(&self, slices: Vec<Slice>) -> Result<Diagram, DiagramError> {
        Diagram::new(self.signature.clone(), self.domain.clone(), slices)
    }

    pub(crate) fn with_slices_trusted(&self, slices: Vec<Slice>) -> Diagram {
        Diagram::from_trusted(self.signature.clone(), self.domain.clone(), slices)
    }

    pub fn into_slices(self) -> Vec<Slice> {
        self.slices
    }

    /// (inputs, outputs) of a generator kind.
    pub fn arity(&self, kind: GeneratorKind) -> (usize, usize) {
        arity_in(&self.signature, kind)
    }

    /// Wire count at every level, `len() + 1` entries.
    pub fn widths(&self) -> Vec<usize> {
        let mut widths = Vec::with_capacity(self.slices.len() + 1);
        let mut w = self.domain.len();
        widths.push(w);
        for s in &self.slices {
            let (m, n) = self.arity(s.kind);
            w = w + n - m;
            widths.push(w);
        }
        widths
    }

    /// The object word at every level, top to bottom.
    pub fn typecheck(&self) -> Result<Vec<ObjectWord>, DiagramError> {
        let mut levels = Vec::with_capacity(self.slices.len() + 1);
        let mut current = self.domain.clone();
        for (level, slice) in self.slices.iter().enumerate() {
            let next = apply_slice(&self.signature, &current, *slice).map_err(|message| DiagramError::Type {
                line: None,
                level,
                offset: slice.offset,
                message,
            })?;
            levels.push(std::mem::replace(&mut current, next));
        }
        levels.push(current);
        Ok(levels)
    }

    /// Level words of a diagram known to be well typed.
    pub fn levels(&self) -> Vec<ObjectWord> {
        self.typecheck().expect("diagram is well typed by construction")
    }

    pub fn codomain(&self) -> ObjectWord {
        self.levels().pop().unwrap_or_default()
    }

    pub fn is_closed(&self) -> bool {
        self.domain.is_empty() && self.widths().last().copied() == Some(0)
    }

    /// Sequential composition: `self` on top, `below` underneath.
    pub fn then(&self, below: &Diagram) -> Result<Diagram, DiagramError> {
        let mut slices = self.slices.clone();
        slices.extend_from_slice(&below.slices);
        Diagram::new(self.signature.clone(), self.domain.clone(), slices)
    }

    pub fn count_where(&self, pred: impl Fn(GeneratorKind) -> bool) -> usize {
        self.slices.iter().filter(|s| pred(s.kind)).count()
    }

    pub fn crossing_count(&self) -> usize {
        self.count_where(GeneratorKind::is_braid)
    }
}

pub(crate) fn arity_in(sig: &Signature, kind: GeneratorKind) -> (usize, usize) {
    match kind {
        GeneratorKind::CapR | GeneratorKind::CapL => (0, 2),
        GeneratorKind::CupR | GeneratorKind::CupL => (2, 0),
        GeneratorKind::BraidPos | GeneratorKind::BraidNeg => (2, 2),
        GeneratorKind::Named(id) => {
            let g = sig.generator(id);
            (g.domain.len(), g.codomain.len())
        }
    }
}

/// Applies one slice to a level word, returning the next level.
pub(crate) fn apply_slice(sig: &Signature, level: &ObjectWord, slice: Slice) -> Result<ObjectWord, String> {
    use Orientation::{Down, Up};
    let (m, _) = arity_in(sig, slice.kind);
    let p = slice.offset;
    if p + m > level.len() {
        return Err(format!(
            "{} needs {m} wire(s) at offset {p} but the level has {} wire(s)",
            slice.kind.keyword(),
            level.len()
        ));
    }
    let inputs = &level.0[p..p + m];
    let outputs: Vec<Object> = match slice.kind {
        GeneratorKind::CapR => vec![Object::UP, Object::DOWN],
        GeneratorKind::CapL => vec![Object::DOWN, Object::UP],
        GeneratorKind::CupR | GeneratorKind::CupL => {
            let want = if slice.kind == GeneratorKind::CupR {
                [Object::Oriented(Down), Object::Oriented(Up)]
            } else {
                [Object::Oriented(Up), Object::Oriented(Down)]
            };
            if inputs != want {
                return Err(format!(
                    "{} requires ({} {}) but found ({} {})",
                    slice.kind.keyword(),
                    want[0],
                    want[1],
                    inputs[0],
                    inputs[1]
                ));
            }
            Vec::new()
        }
        GeneratorKind::BraidPos | GeneratorKind::BraidNeg => {
            vec![inputs[1].clone(), inputs[0].clone()]
        }
        GeneratorKind::Named(id) => {
            let g = sig.generator(id);
            if inputs != g.domain.wires() {
                return Err(format!(
                    "generator {} expects ({}) but found ({})",
                    g.name,
                    g.domain,
                    ObjectWord(inputs.to_vec())
                ));
            }
            g.codomain.0.clone()
        }
    };
    let mut next = Vec::with_capacity(level.len() - m + outputs.len());
    next.extend_from_slice(&level.0[..p]);
    next.extend(outputs);
    next.extend_from_slice(&level.0[p + m..]);
    Ok(ObjectWord(next))
}

#[cfg(test)]
mod tests {
    use super::GeneratorKind::*;
    use super::Orientation::{Down, Up};
    use super::*;

    #[test]
    fn identity_has_single_level() {
        let d = Diagram::cc(&[Up], vec![]).unwrap();
        assert_eq!(d.typecheck().unwrap(), vec![ObjectWord::oriented(&[Up])]);
    }

    #[test]
    fn cap_produces_up_down() {
        let d = Diagram::cc(&[], vec![Slice::new(CapR, 0)]).unwrap();
        assert_eq!(
            d.typecheck().unwrap(),
            vec![ObjectWord::unit(), ObjectWord::oriented(&[Up, Down])]
        );
    }

    #[test]
    fn braiding_swaps_labels() {
        let d = Diagram::cc(&[Up, Down], vec![Slice::new(BraidPos, 0)]).unwrap();
        assert_eq!(
            d.typecheck().unwrap(),
            vec![ObjectWord::oriented(&[Up, Down]), ObjectWord::oriented(&[Down, Up])]
        );
    }

    #[test]
    fn cup_type_mismatch_reports_level_and_offset() {
        let err = Diagram::cc(&[Up, Down], vec![Slice::new(CupR, 0)]).unwrap_err();
        match err {
            DiagramError::Type { level, offset, .. } => assert_eq!((level, offset), (0, 0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn offset_out_of_range() {
        assert!(Diagram::cc(&[Up], vec![Slice::new(BraidPos, 0)]).is_err());
        assert!(Diagram::cc(&[Up], vec![Slice::new(CapR, 2)]).is_err());
        // a cap may sit in the gap right of the last wire
        assert!(Diagram::cc(&[Up], vec![Slice::new(CapR, 1)]).is_ok());
    }

    #[test]
    fn named_generator_types() {
        let mut sig = Signature::default();
        let a = Object::Named(sig.add_object("A"));
        let g = sig
            .add_generator("m", ObjectWord(vec![a.clone(), a.clone()]), ObjectWord(vec![a.clone()]))
            .unwrap();
        let sig = Arc::new(sig);
        let d = Diagram::new(
            sig.clone(),
            ObjectWord(vec![a.clone(), a.clone(), a.clone()]),
            vec![Slice::new(Named(g), 1)],
        )
        .unwrap();
        assert_eq!(d.codomain(), ObjectWord(vec![a.clone(), a.clone()]));
        assert!(Diagram::new(sig, ObjectWord::oriented(&[Up, Up]), vec![Slice::new(Named(g), 0)]).is_err());
    }
}
