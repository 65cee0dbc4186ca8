//! ASCII pictures of diagrams, read top to bottom. Wire rows show each
//! level's objects (`^`, `v`, or the first letter of a named object); slice
//! rows draw caps as `/\`, cups as `\/` and crossings as `x` or `x̄`.

use crate::diagram::{Diagram, GeneratorKind, Object, ObjectWord, Orientation};

const GAP: usize = 3;

fn glyph(o: &Object) -> char {
    match o {
        Object::Oriented(Orientation::Up) => '^',
        Object::Oriented(Orientation::Down) => 'v',
        Object::Named(n) => n.chars().next().unwrap_or('?'),
    }
}

fn wire_row(level: &ObjectWord) -> String {
    let mut row = String::new();
    for (pos, o) in level.wires().iter().enumerate() {
        pad_to(&mut row, pos * GAP);
        row.push(glyph(o));
    }
    row
}

fn pad_to(row: &mut String, col: usize) {
    let width = row.chars().filter(|c| *c != '\u{304}').count();
    row.extend(std::iter::repeat_n(' ', col.saturating_sub(width)));
}

fn slice_row(d: &Diagram, above: &ObjectWord, index: usize) -> String {
    let s = &d.slices()[index];
    let (m, n) = d.arity(s.kind);
    let q = s.offset;
    let mut row = String::new();
    for pos in 0..q {
        pad_to(&mut row, pos * GAP);
        row.push('|');
    }
    let first_right = match s.kind {
        GeneratorKind::CapR | GeneratorKind::CapL => {
            pad_to(&mut row, q * GAP + 1);
            row.push_str("/\\");
            q + 2
        }
        GeneratorKind::CupR | GeneratorKind::CupL => {
            pad_to(&mut row, q * GAP + 1);
            row.push_str("\\/");
            q + 2
        }
        GeneratorKind::BraidPos => {
            pad_to(&mut row, q * GAP + 1);
            row.push('x');
            q + 2
        }
        GeneratorKind::BraidNeg => {
            pad_to(&mut row, q * GAP + 1);
            row.push_str("x\u{304}");
            q + 2
        }
        GeneratorKind::Named(id) => {
            pad_to(&mut row, q * GAP);
            row.push('[');
            row.push_str(&d.signature().generator(id).name);
            row.push(']');
            q + m.max(n)
        }
    };
    // wires right of the generator sit where the wider of the two levels puts them
    for pos in q + m..above.len() {
        let col = (pos + first_right - q - m) * GAP;
        let width = row.chars().filter(|c| *c != '\u{304}').count();
        pad_to(&mut row, col.max(width + 1));
        row.push('|');
    }
    row
}

/// Renders with a slice label to the right of every generator row.
pub fn render(d: &Diagram) -> String {
    let levels = d.levels();
    let rows: Vec<(String, String)> = (0..d.len())
        .flat_map(|i| {
            [
                (wire_row(&levels[i]), String::new()),
                (
                    slice_row(d, &levels[i], i),
                    format!("{} @ {}", label(d, d.slices()[i].kind), d.slices()[i].offset),
                ),
            ]
        })
        .chain([(wire_row(&levels[d.len()]), String::new())])
        .collect();
    let width = rows
        .iter()
        .map(|(r, _)| r.chars().filter(|c| *c != '\u{304}').count())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for (row, tag) in rows {
        let mut line = row;
        if !tag.is_empty() {
            pad_to(&mut line, width + 4);
            line.push_str(&tag);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn label(d: &Diagram, kind: GeneratorKind) -> String {
    match kind {
        GeneratorKind::Named(id) => d.signature().generator(id).name.to_string(),
        k => k.keyword().to_owned(),
    }
}
