//! The `.bmc` text format.
//!
//! ```text
//! # comment
//! sig:
//!   m : A A -> A
//! dom: A A A
//! gen m @ 0
//! sigma+ @ 0
//! ```
//!
//! `^` and `v` are the oriented wires, `I` is the empty word. Slices are
//! `capR`, `capL`, `cupR`, `cupL`, `sigma+`, `sigma-` or `gen NAME`, each
//! followed by `@ offset`.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{Diagram, DiagramError, GeneratorKind, Object, ObjectWord, Signature, Slice};

/// A slice statement before generator names are resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawSlice {
    pub line: usize,
    pub keyword: String,
    pub name: Option<String>,
    pub offset: usize,
}

#[derive(Debug, Default)]
pub(crate) struct RawDocument {
    pub signature: Signature,
    pub domain: Option<(usize, Vec<String>)>,
    pub slices: Vec<RawSlice>,
}

fn syntax(line: usize, message: impl Into<String>) -> DiagramError {
    DiagramError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_word(sig: &mut Signature, tokens: &[&str], line: usize, declare: bool) -> Result<ObjectWord, DiagramError> {
    if tokens == ["I"] {
        return Ok(ObjectWord::unit());
    }
    let mut word = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let obj = match *tok {
            "^" => Object::UP,
            "v" => Object::DOWN,
            "I" => return Err(syntax(line, "`I` must appear alone")),
            name => {
                if !is_identifier(name) {
                    return Err(syntax(line, format!("invalid object name `{name}`")));
                }
                if declare {
                    Object::Named(sig.add_object(name))
                } else {
                    match sig.object_names().find(|n| *n == name) {
                        Some(n) => Object::Named(Arc::from(n)),
                        None => return Err(syntax(line, format!("undeclared object `{name}`"))),
                    }
                }
            }
        };
        word.push(obj);
    }
    Ok(ObjectWord(word))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub(crate) fn parse_raw(text: &str) -> Result<RawDocument, DiagramError> {
    let mut doc = RawDocument::default();
    let mut in_sig = false;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let indented = raw_line.starts_with(' ') || raw_line.starts_with('\t');
        let line = strip_comment(raw_line).trim();
        if line.is_empty() {
            continue;
        }
        if in_sig && indented && line.contains("->") {
            parse_declaration(&mut doc.signature, line, line_no)?;
            continue;
        }
        in_sig = false;
        if let Some(rest) = line.strip_prefix("sig:") {
            let rest = rest.trim();
            if rest.is_empty() {
                in_sig = true;
            } else {
                parse_declaration(&mut doc.signature, rest, line_no)?;
            }
        } else if let Some(rest) = line.strip_prefix("obj:") {
            for name in rest.split_whitespace() {
                if !is_identifier(name) || name == "v" || name == "I" {
                    return Err(syntax(line_no, format!("invalid object name `{name}`")));
                }
                doc.signature.add_object(name);
            }
        } else if let Some(rest) = line.strip_prefix("dom:") {
            if doc.domain.is_some() {
                return Err(syntax(line_no, "duplicate `dom:` header"));
            }
            if !doc.slices.is_empty() {
                return Err(syntax(line_no, "`dom:` must precede all slices"));
            }
            doc.domain = Some((line_no, rest.split_whitespace().map(str::to_owned).collect()));
        } else {
            doc.slices.push(parse_slice_line(line, line_no)?);
        }
    }
    Ok(doc)
}

fn parse_declaration(sig: &mut Signature, decl: &str, line: usize) -> Result<(), DiagramError> {
    let (name, ty) = decl
        .split_once(':')
        .ok_or_else(|| syntax(line, "expected `NAME : WORD -> WORD`"))?;
    let name = name.trim();
    if !is_identifier(name) {
        return Err(syntax(line, format!("invalid generator name `{name}`")));
    }
    let (dom, cod) = ty
        .split_once("->")
        .ok_or_else(|| syntax(line, "expected `->` in generator type"))?;
    let dom: Vec<&str> = dom.split_whitespace().collect();
    let cod: Vec<&str> = cod.split_whitespace().collect();
    if dom.is_empty() || cod.is_empty() {
        return Err(syntax(line, "use `I` for an empty word"));
    }
    let dom = parse_word(sig, &dom, line, true)?;
    let cod = parse_word(sig, &cod, line, true)?;
    sig.add_generator(name, dom, cod).map_err(|m| syntax(line, m))?;
    Ok(())
}

fn parse_slice_line(line: &str, line_no: usize) -> Result<RawSlice, DiagramError> {
    let (head, offset) = line
        .split_once('@')
        .ok_or_else(|| syntax(line_no, format!("expected `KIND @ OFFSET`, found `{line}`")))?;
    let offset: usize = offset
        .trim()
        .parse()
        .map_err(|_| syntax(line_no, format!("invalid offset `{}`", offset.trim())))?;
    let mut words = head.split_whitespace();
    let keyword = words
        .next()
        .ok_or_else(|| syntax(line_no, "missing generator before `@`"))?
        .to_owned();
    let name = words.next().map(str::to_owned);
    if words.next().is_some() {
        return Err(syntax(line_no, "too many tokens before `@`"));
    }
    match (keyword.as_str(), &name) {
        ("gen", None) => return Err(syntax(line_no, "`gen` needs a generator name")),
        ("gen", Some(_)) => {}
        (_, Some(extra)) => return Err(syntax(line_no, format!("unexpected token `{extra}`"))),
        _ => {}
    }
    Ok(RawSlice {
        line: line_no,
        keyword,
        name,
        offset,
    })
}

fn resolve_kind(sig: &Signature, raw: &RawSlice) -> Result<GeneratorKind, DiagramError> {
    Ok(match raw.keyword.as_str() {
        "capR" => GeneratorKind::CapR,
        "capL" => GeneratorKind::CapL,
        "cupR" => GeneratorKind::CupR,
        "cupL" => GeneratorKind::CupL,
        "sigma+" => GeneratorKind::BraidPos,
        "sigma-" => GeneratorKind::BraidNeg,
        "gen" => {
            let name = raw.name.as_deref().unwrap_or_default();
            GeneratorKind::Named(
                sig.lookup(name)
                    .ok_or_else(|| syntax(raw.line, format!("unknown generator `{name}`")))?,
            )
        }
        other => return Err(syntax(raw.line, format!("unknown generator kind `{other}`"))),
    })
}

pub(crate) fn resolve_domain(
    sig: &mut Signature,
    doc_domain: &Option<(usize, Vec<String>)>,
) -> Result<ObjectWord, DiagramError> {
    match doc_domain {
        None => Ok(ObjectWord::unit()),
        Some((line, toks)) if toks.is_empty() => {
            let _ = line;
            Ok(ObjectWord::unit())
        }
        Some((line, toks)) => {
            let toks: Vec<&str> = toks.iter().map(String::as_str).collect();
            parse_word(sig, &toks, *line, false)
        }
    }
}

/// Parses and typechecks a `.bmc` document.
pub fn parse_diagram(text: &str) -> Result<Diagram, DiagramError> {
    let mut doc = parse_raw(text)?;
    let domain = resolve_domain(&mut doc.signature, &doc.domain)?;
    let sig = Arc::new(doc.signature);
    let mut slices = Vec::with_capacity(doc.slices.len());
    for raw in &doc.slices {
        slices.push(Slice::new(resolve_kind(&sig, raw)?, raw.offset));
    }
    // Typecheck slice by slice so errors carry the source line.
    let mut level = domain.clone();
    for (i, (slice, raw)) in slices.iter().zip(&doc.slices).enumerate() {
        level = super::apply_slice(&sig, &level, *slice).map_err(|message| {
            DiagramError::Type {
                line: None,
                level: i,
                offset: slice.offset,
                message,
            }
            .with_line(raw.line)
        })?;
    }
    Ok(Diagram::from_trusted(sig, domain, slices))
}

/// Canonical `.bmc` text. `parse_diagram(&serialize_diagram(d)) == d` and the
/// text is a fixed point of parse-then-serialize.
pub fn serialize_diagram(d: &Diagram) -> String {
    let sig = d.signature();
    let mut out = String::new();
    let mut declared_by_gens = std::collections::BTreeSet::new();
    for g in sig.generators() {
        for o in g.domain.wires().iter().chain(g.codomain.wires()) {
            if let Object::Named(n) = o {
                declared_by_gens.insert(n.to_string());
            }
        }
    }
    let loose: Vec<&str> = sig.object_names().filter(|n| !declared_by_gens.contains(*n)).collect();
    if !loose.is_empty() {
        let _ = writeln!(out, "obj: {}", loose.join(" "));
    }
    if !sig.generators().is_empty() {
        out.push_str("sig:\n");
        for g in sig.generators() {
            let _ = writeln!(out, "  {} : {} -> {}", g.name, g.domain, g.codomain);
        }
    }
    if !d.domain().is_empty() {
        let _ = writeln!(out, "dom: {}", d.domain());
    }
    for s in d.slices() {
        match s.kind {
            GeneratorKind::Named(id) => {
                let _ = writeln!(out, "gen {} @ {}", sig.generator(id).name, s.offset);
            }
            k => {
                let _ = writeln!(out, "{} @ {}", k.keyword(), s.offset);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use GeneratorKind::*;

    #[test]
    fn smallest_closed_diagram() {
        let d = parse_diagram("capR @ 0\ncupL @ 0\n").unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.is_closed());
        assert_eq!(d.codomain(), ObjectWord::unit());
    }

    #[test]
    fn example_knot_transcription() {
        let text = "# oriented knot\ncapR @ 0\ncapL @ 2\nsigma+ @ 1\nsigma- @ 0\nsigma- @ 2\ncupR @ 0\ncupL @ 0\n";
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.len(), 7);
        assert!(d.is_closed());
    }

    #[test]
    fn cup_orientation_error_has_line() {
        let err = parse_diagram("dom: ^ v\ncupR @ 0\n").unwrap_err();
        match err {
            DiagramError::Type {
                line,
                level,
                offset,
                message,
            } => {
                assert_eq!((line, level, offset), (Some(2), 0, 0));
                assert!(message.contains("cupR"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            parse_diagram("capR 0"),
            Err(DiagramError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_diagram("\nfoo @ 1"),
            Err(DiagramError::Syntax { line: 2, .. })
        ));
        assert!(matches!(parse_diagram("capR @ x"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_diagram("gen @ 0"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_diagram("dom: A"), Err(DiagramError::Syntax { .. })));
    }

    #[test]
    fn signature_block_round_trips() {
        let text = "sig:\n  m : A A -> A\n  u : I -> A\ndom: A A A A\nsigma+ @ 1\ngen m @ 0\nsigma- @ 0\nsigma+ @ 1\n";
        let d = parse_diagram(text).unwrap();
        assert_eq!(serialize_diagram(&d), text);
        assert_eq!(parse_diagram(&serialize_diagram(&d)).unwrap(), d);
        assert!(matches!(d.slices()[1].kind, Named(_)));
    }

    #[test]
    fn inline_sig_and_loose_objects() {
        let d = parse_diagram("obj: B\nsig: f : A -> A\ndom: A B\ngen f @ 0\n").unwrap();
        let text = serialize_diagram(&d);
        assert_eq!(text, "obj: B\nsig:\n  f : A -> A\ndom: A B\ngen f @ 0\n");
        assert_eq!(parse_diagram(&text).unwrap(), d);
    }
}
