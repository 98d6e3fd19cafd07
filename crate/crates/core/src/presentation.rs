//! Finite group presentations and their extraction from triangulations.
//!
//! Generators of the fundamental group are the edge classes of the
//! triangulation outside a spanning tree of its 1-skeleton; each face class
//! contributes its boundary word, of length at most three.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::intlinalg::IntMatrix;
use crate::triangulation::{cell_structure, edge_index, validate, CellStructure, Triangulation, TriangulationError};

/// Exponents in `name^k` are expanded letter by letter; this caps the blowup.
pub const MAX_EXPONENT: i64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("bad letter `{0}`")]
    BadLetter(String),
    #[error("generator index {index} out of range for {count} generators")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("invalid generator name `{0}`")]
    BadName(String),
}

/// A word in the free group: letters are `(generator, +1 | -1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Word(Vec<(usize, i8)>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Panics on an exponent other than `±1`.
    pub fn from_letters(letters: Vec<(usize, i8)>) -> Self {
        assert!(letters.iter().all(|&(_, e)| e == 1 || e == -1), "letters have exponent ±1");
        Word(letters)
    }

    pub fn generator(k: usize) -> Self {
        Word(vec![(k, 1)])
    }

    /// `g^n` expanded to `|n|` letters.
    pub fn power_of(k: usize, n: i64) -> Self {
        let e = if n < 0 { -1 } else { 1 };
        Word(vec![(k, e); n.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn pow(&self, n: u32) -> Word {
        Word(self.0.iter().copied().cycle().take(self.0.len() * n as usize).collect())
    }

    /// Cancels adjacent `g g^-1` pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<(usize, i8)> = Vec::with_capacity(self.0.len());
        for &(g, e) in &self.0 {
            match out.last() {
                Some(&(h, f)) if h == g && f == -e => {
                    out.pop();
                }
                _ => out.push((g, e)),
            }
        }
        Word(out)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|&(g, _)| g).max()
    }

    /// Signed exponent sum of generator `k`.
    pub fn exponent_sum(&self, k: usize) -> i64 {
        self.0.iter().filter(|&&(g, _)| g == k).map(|&(_, e)| e as i64).sum()
    }

    /// Replaces each generator by a word.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for &(g, e) in &self.0 {
            if e > 0 {
                out.extend_from_slice(&images[g].0);
            } else {
                out.extend_from_slice(&images[g].inverse().0);
            }
        }
        Word(out)
    }

    /// Parses space-separated letters `name`, `name^-1`, `name^k`; `1` is the
    /// empty word.
    pub fn parse(text: &str, names: &[String]) -> Result<Word, PresentationError> {
        let text = text.trim();
        if text == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (name, exp) = match token.split_once('^') {
                None => (token, 1i64),
                Some((name, exp)) => {
                    let k: i64 = exp.parse().map_err(|_| PresentationError::BadLetter(token.into()))?;
                    if k == 0 || k.abs() > MAX_EXPONENT {
                        return Err(PresentationError::BadLetter(token.into()));
                    }
                    (name, k)
                }
            };
            let index = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| PresentationError::UnknownGenerator(name.into()))?;
            letters.extend(Word::power_of(index, exp).0);
        }
        Ok(Word(letters))
    }

    /// Canonical text: letters separated by spaces, `1` for the empty word.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        WordDisplay { word: self, names }
    }
}

struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, &(g, e)) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.names[g])?;
            if e < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

pub fn default_names(g: usize) -> Vec<String> {
    (0..g).map(|k| format!("x{k}")).collect()
}

/// Names must be identifiers so that words and certificate lines parse back.
pub fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    labels: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    /// Generators named `x0, x1, ...`.
    pub fn new(g: usize, relators: Vec<Word>) -> Self {
        Self::with_labels(default_names(g), relators).expect("default names are valid")
    }

    pub fn with_labels(labels: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        for (i, name) in labels.iter().enumerate() {
            if !valid_name(name) {
                return Err(PresentationError::BadName(name.clone()));
            }
            if labels[..i].contains(name) {
                return Err(PresentationError::DuplicateName(name.clone()));
            }
        }
        for w in &relators {
            if let Some(m) = w.max_generator() {
                if m >= labels.len() {
                    return Err(PresentationError::IndexOutOfRange {
                        index: m,
                        count: labels.len(),
                    });
                }
            }
        }
        Ok(GroupPresentation { labels, relators })
    }

    pub fn parse_relators(names: &[&str], relators: &[&str]) -> Result<Self, PresentationError> {
        let labels: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let words = relators
            .iter()
            .map(|r| Word::parse(r, &labels))
            .collect::<Result<Vec<_>, _>>()?;
        Self::with_labels(labels, words)
    }

    /// `<x, y | x^n1, y^n2, (xy)^n3>`
    pub fn triangle_group(n1: u32, n2: u32, n3: u32) -> Self {
        let xy = Word::from_letters(vec![(0, 1), (1, 1)]);
        GroupPresentation {
            labels: vec!["x".into(), "y".into()],
            relators: vec![
                Word::power_of(0, n1 as i64),
                Word::power_of(1, n2 as i64),
                xy.pow(n3),
            ],
        }
    }

    pub fn generator_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Total symbol length: generators plus all relator letters.
    pub fn size(&self) -> usize {
        self.generator_count() + self.relators.iter().map(Word::len).sum::<usize>()
    }

    pub fn max_relator_length(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    /// `r x g` matrix of exponent sums.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let g = self.generator_count();
        let rows: Vec<Vec<BigInt>> = self
            .relators
            .iter()
            .map(|w| {
                let mut row = vec![BigInt::from(0); g];
                for &(k, e) in w.letters() {
                    row[k] += e as i64;
                }
                row
            })
            .collect();
        IntMatrix::from_rows(g, &rows)
    }

    pub fn word_text(&self, w: &Word) -> String {
        w.display(&self.labels).to_string()
    }

    /// `gens <g> <names...>` followed by one `rel <word>` line per relator.
    pub fn to_text(&self) -> String {
        let mut s = format!("gens {}", self.generator_count());
        for name in &self.labels {
            s.push(' ');
            s.push_str(name);
        }
        s.push('\n');
        for w in &self.relators {
            s.push_str("rel ");
            s.push_str(&self.word_text(w));
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | ", self.labels.join(", "))?;
        let rels: Vec<String> = self.relators.iter().map(|w| self.word_text(w)).collect();
        write!(f, "{} >", rels.join(", "))
    }
}

/// Presentation read off the triangulation, with the bookkeeping needed to
/// interpret its generators.
#[derive(Debug, Clone)]
pub struct Pi1 {
    pub presentation: GroupPresentation,
    /// Edge class of each generator.
    pub generator_edges: Vec<usize>,
    /// Edge classes in the spanning tree of the 1-skeleton.
    pub tree_edges: Vec<usize>,
    pub cells: CellStructure,
}

/// Requires a triangulation that passes [`validate`] and is connected.
pub fn fundamental_group(tri: &Triangulation) -> Result<GroupPresentation, TriangulationError> {
    fundamental_group_detailed(tri).map(|p| p.presentation)
}

pub fn fundamental_group_detailed(tri: &Triangulation) -> Result<Pi1, TriangulationError> {
    if !tri.is_connected() {
        return Err(TriangulationError::Disconnected);
    }
    let report = validate(tri);
    if !report.pass {
        return Err(TriangulationError::NotClosedManifold(format!(
            "chi={}, vertex links {:?}, invalid edges {}",
            report.euler_characteristic, report.vertex_links, report.invalid_edges
        )));
    }
    let cells = cell_structure(tri);

    // breadth-first tree in the identified 1-skeleton, edges in class order
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cells.vertex_count];
    for (e, &(tail, head)) in cells.edge_endpoints.iter().enumerate() {
        incident[tail].push((e, head));
        incident[head].push((e, tail));
    }
    for list in &mut incident {
        list.sort_unstable();
    }
    let mut in_tree = vec![false; cells.edge_count];
    let mut seen = vec![false; cells.vertex_count];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(e, w) in &incident[v] {
            if !seen[w] {
                seen[w] = true;
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }

    let mut generator_of = vec![None; cells.edge_count];
    let mut generator_edges = Vec::new();
    for e in 0..cells.edge_count {
        if !in_tree[e] {
            generator_of[e] = Some(generator_edges.len());
            generator_edges.push(e);
        }
    }

    let mut relators = Vec::with_capacity(cells.face_count);
    for face in &cells.face_reps {
        let mut verts = (0..4u8).filter(|&v| v != face.face);
        let (u, v, w) = (verts.next().unwrap(), verts.next().unwrap(), verts.next().unwrap());
        let mut letters = Vec::with_capacity(3);
        for (a, b, traversed_forward) in [(u, v, true), (v, w, true), (u, w, false)] {
            let (class, reversed) = cells.edge_class[6 * face.tet + edge_index(a, b)];
            if let Some(gen) = generator_of[class] {
                let forward = traversed_forward != reversed;
                letters.push((gen, if forward { 1 } else { -1 }));
            }
        }
        relators.push(Word(letters).free_reduce());
    }

    let presentation = GroupPresentation::new(generator_edges.len(), relators);
    let tree_edges = (0..cells.edge_count).filter(|&e| in_tree[e]).collect();
    Ok(Pi1 {
        presentation,
        generator_edges,
        tree_edges,
        cells,
    })
}
