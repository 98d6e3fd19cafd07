//! Canonical text form of certificates.
//!
//! ```text
//! lenscert v1
//! kind NonAbelianRep
//! level group
//! gens 2 a b
//! rel a b a^-1 b^-1 a b a b^-1 a^-1 b^-1
//! field p=5 deg=2 s=2
//! gen a = [[2+0*w,0+0*w],[0+0*w,3+0*w]]
//! gen b = [[2+0*w,3+0*w],[0+0*w,3+0*w]]
//! witness a b | b a
//! ```
//!
//! A representation may instead name the generators of an intermediate group
//! and give a `surjection` block of `gen <name> -> <word>` lines, one per
//! presentation generator. Abelian certificates carry
//! `target Z/<a> x Z/<b>` and `gen <name> = (<u>,<v>)` lines.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{Certificate, CertificateBody, CertificateError, Level};
use crate::galois::{FieldElement, FieldSpec};
use crate::presentation::{valid_name, GroupPresentation, Word};

pub(super) fn serialize(cert: &Certificate) -> String {
    let mut s = String::from("lenscert v1\n");
    s.push_str(&format!("kind {}\n", cert.kind()));
    s.push_str(&format!("level {}\n", cert.level.as_str()));
    s.push_str(&cert.presentation.to_text());
    let labels = cert.presentation.labels();
    match &cert.body {
        CertificateBody::NonCyclicAbelian { target, images } => {
            s.push_str(&format!("target Z/{} x Z/{}\n", target.0, target.1));
            for (name, (u, v)) in labels.iter().zip(images) {
                s.push_str(&format!("gen {name} = ({u},{v})\n"));
            }
        }
        CertificateBody::NonAbelianRep {
            spec,
            names,
            matrices,
            surjection,
            witness,
        } => {
            s.push_str(&format!("{spec}\n"));
            for (name, m) in names.iter().zip(matrices) {
                let [a, b, c, d] = m.map(|e| spec.fmt_element(e));
                s.push_str(&format!("gen {name} = [[{a},{b}],[{c},{d}]]\n"));
            }
            if let Some(words) = surjection {
                s.push_str("surjection\n");
                for (name, w) in labels.iter().zip(words) {
                    s.push_str(&format!("gen {name} -> {}\n", w.display(names)));
                }
            }
            s.push_str(&format!(
                "witness {} | {}\n",
                witness.0.display(labels),
                witness.1.display(labels)
            ));
        }
    }
    s
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { lines, pos: 0 }
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(1, |&(n, _)| n)
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), CertificateError> {
        let item = self
            .peek()
            .ok_or_else(|| CertificateError::at(self.last_line(), format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(item)
    }

    /// Next line, which must start with `keyword` followed by a space or the
    /// end of the line; returns the remainder.
    fn keyword(&mut self, keyword: &str) -> Result<(usize, &'a str), CertificateError> {
        let (n, line) = self.next(&format!("`{keyword}`"))?;
        match line.strip_prefix(keyword) {
            Some(rest) if rest.is_empty() || rest.starts_with(' ') => Ok((n, rest.trim())),
            _ => Err(CertificateError::at(n, format!("expected `{keyword}`"))),
        }
    }

    fn peek_keyword(&self, keyword: &str) -> bool {
        matches!(self.peek(), Some((_, l)) if l == keyword || l.starts_with(&format!("{keyword} ")))
    }
}

fn parse_int(line: usize, text: &str) -> Result<BigInt, CertificateError> {
    let text = text.trim();
    if text.is_empty() || !text.chars().all(|c| c.is_ascii_digit()) {
        return Err(CertificateError::at(line, format!("expected a decimal integer, found `{text}`")));
    }
    text.parse()
        .map_err(|_| CertificateError::at(line, format!("bad integer `{text}`")))
}

fn parse_u64(line: usize, text: &str) -> Result<u64, CertificateError> {
    let text = text.trim();
    if text.is_empty() || !text.chars().all(|c| c.is_ascii_digit()) {
        return Err(CertificateError::at(line, format!("expected a decimal integer, found `{text}`")));
    }
    text.parse()
        .map_err(|_| CertificateError::at(line, format!("integer `{text}` out of range")))
}

fn coordinate(line: usize, spec: &FieldSpec, text: &str) -> Result<u64, CertificateError> {
    let v = parse_u64(line, text)?;
    if v >= spec.p() {
        return Err(CertificateError::at(line, format!("coordinate {v} not reduced mod {}", spec.p())));
    }
    Ok(v)
}

fn parse_element(line: usize, spec: &FieldSpec, text: &str) -> Result<FieldElement, CertificateError> {
    match spec.degree() {
        1 => Ok(FieldElement::new(coordinate(line, spec, text)?, 0)),
        _ => {
            let (a, rest) = text
                .split_once('+')
                .ok_or_else(|| CertificateError::at(line, format!("expected `a+b*w`, found `{text}`")))?;
            let b = rest
                .strip_suffix("*w")
                .ok_or_else(|| CertificateError::at(line, format!("expected `a+b*w`, found `{text}`")))?;
            Ok(FieldElement::new(coordinate(line, spec, a)?, coordinate(line, spec, b)?))
        }
    }
}

fn parse_matrix(line: usize, spec: &FieldSpec, text: &str) -> Result<[FieldElement; 4], CertificateError> {
    let bad = || CertificateError::at(line, format!("expected `[[a,b],[c,d]]`, found `{text}`"));
    let inner = text
        .strip_prefix("[[")
        .and_then(|t| t.strip_suffix("]]"))
        .ok_or_else(bad)?;
    let (row0, row1) = inner.split_once("],[").ok_or_else(bad)?;
    let mut out = [FieldElement::default(); 4];
    let cells: Vec<&str> = row0.split(',').chain(row1.split(',')).collect();
    if cells.len() != 4 {
        return Err(bad());
    }
    for (slot, cell) in out.iter_mut().zip(cells) {
        *slot = parse_element(line, spec, cell)?;
    }
    Ok(out)
}

fn parse_word(line: usize, text: &str, names: &[String]) -> Result<Word, CertificateError> {
    Word::parse(text, names).map_err(|e| CertificateError::at(line, e.to_string()))
}

/// `gen <name> <sep> <rest>`
fn gen_line<'a>(lines: &mut Lines<'a>, sep: &str) -> Result<(usize, &'a str, &'a str), CertificateError> {
    let (n, rest) = lines.keyword("gen")?;
    let (name, value) = rest
        .split_once(sep)
        .ok_or_else(|| CertificateError::at(n, format!("expected `gen <name> {sep} ...`")))?;
    Ok((n, name.trim(), value.trim()))
}

fn parse_field(line: usize, text: &str) -> Result<FieldSpec, CertificateError> {
    let mut p = None;
    let mut deg = None;
    let mut s = None;
    for token in text.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| CertificateError::at(line, format!("bad field parameter `{token}`")))?;
        let slot = match key {
            "p" => &mut p,
            "deg" => &mut deg,
            "s" => &mut s,
            _ => return Err(CertificateError::at(line, format!("unknown field parameter `{key}`"))),
        };
        if slot.replace(parse_u64(line, value)?).is_some() {
            return Err(CertificateError::at(line, format!("repeated field parameter `{key}`")));
        }
    }
    let p = p.ok_or_else(|| CertificateError::at(line, "missing p"))?;
    let deg = deg.ok_or_else(|| CertificateError::at(line, "missing deg"))?;
    let deg = u8::try_from(deg).map_err(|_| CertificateError::at(line, "bad degree"))?;
    if deg == 2 && s.is_none() {
        return Err(CertificateError::at(line, "degree 2 needs s"));
    }
    FieldSpec::from_parts(p, deg, s).map_err(|e| CertificateError::at(line, e.to_string()))
}

fn parse_presentation(lines: &mut Lines) -> Result<GroupPresentation, CertificateError> {
    let (n, rest) = lines.keyword("gens")?;
    let mut tokens = rest.split_whitespace();
    let g = parse_u64(n, tokens.next().unwrap_or(""))? as usize;
    let labels: Vec<String> = tokens.map(str::to_string).collect();
    if labels.len() != g {
        return Err(CertificateError::at(n, format!("gens {g} lists {} names", labels.len())));
    }
    let mut relators = Vec::new();
    while lines.peek_keyword("rel") {
        let (n, rest) = lines.keyword("rel")?;
        relators.push(parse_word(n, rest, &labels)?);
    }
    GroupPresentation::with_labels(labels, relators).map_err(|e| CertificateError::at(n, e.to_string()))
}

pub fn parse_certificate(text: &str) -> Result<Certificate, CertificateError> {
    let mut lines = Lines::new(text);
    let (n, version) = lines.keyword("lenscert")?;
    if version != "v1" {
        return Err(CertificateError::at(n, format!("unsupported version `{version}`")));
    }
    let (kind_line, kind) = lines.keyword("kind")?;
    let (n, level) = lines.keyword("level")?;
    let level = match level {
        "orbifold" => Level::Orbifold,
        "triangulation" => Level::Triangulation,
        "group" => Level::Group,
        other => return Err(CertificateError::at(n, format!("unknown level `{other}`"))),
    };
    let presentation = parse_presentation(&mut lines)?;
    let labels = presentation.labels().to_vec();
    let g = labels.len();

    let body = match kind {
        "NonCyclicAbelian" => {
            let (n, rest) = lines.keyword("target")?;
            let (a, b) = rest
                .split_once(" x ")
                .ok_or_else(|| CertificateError::at(n, "expected `Z/<a> x Z/<b>`"))?;
            let modulus = |t: &str| -> Result<BigInt, CertificateError> {
                let v = t
                    .trim()
                    .strip_prefix("Z/")
                    .ok_or_else(|| CertificateError::at(n, "expected `Z/<a> x Z/<b>`"))?;
                let v = parse_int(n, v)?;
                if v <= BigInt::one() {
                    return Err(CertificateError::at(n, "target factors must exceed 1"));
                }
                Ok(v)
            };
            let target = (modulus(a)?, modulus(b)?);
            let mut images = Vec::with_capacity(g);
            for label in &labels {
                let (n, name, value) = gen_line(&mut lines, "=")?;
                if name != label {
                    return Err(CertificateError::at(n, format!("expected image of `{label}`, found `{name}`")));
                }
                let pair = value
                    .strip_prefix('(')
                    .and_then(|v| v.strip_suffix(')'))
                    .and_then(|v| v.split_once(','))
                    .ok_or_else(|| CertificateError::at(n, "expected `(<u>,<v>)`"))?;
                let (u, v) = (parse_int(n, pair.0)?, parse_int(n, pair.1)?);
                if u.is_negative() || u >= target.0 || v.is_negative() || v >= target.1 {
                    return Err(CertificateError::at(n, "image coordinates not reduced"));
                }
                images.push((u, v));
            }
            CertificateBody::NonCyclicAbelian { target, images }
        }
        "NonAbelianRep" => {
            let (n, rest) = lines.keyword("field")?;
            let spec = parse_field(n, rest)?;
            let mut names = Vec::new();
            let mut matrices = Vec::new();
            while lines.peek_keyword("gen") {
                let (n, name, value) = gen_line(&mut lines, "=")?;
                if !valid_name(name) || names.iter().any(|x: &String| x == name) {
                    return Err(CertificateError::at(n, format!("bad or repeated generator name `{name}`")));
                }
                names.push(name.to_string());
                matrices.push(parse_matrix(n, &spec, value)?);
            }
            if names.is_empty() {
                return Err(CertificateError::at(lines.last_line(), "no generator matrices"));
            }
            let surjection = if lines.peek_keyword("surjection") {
                let (n, rest) = lines.keyword("surjection")?;
                if !rest.is_empty() {
                    return Err(CertificateError::at(n, "unexpected text after `surjection`"));
                }
                let mut words = Vec::with_capacity(g);
                for label in &labels {
                    let (n, name, value) = gen_line(&mut lines, "->")?;
                    if name != label {
                        return Err(CertificateError::at(n, format!("expected image of `{label}`, found `{name}`")));
                    }
                    words.push(parse_word(n, value, &names)?);
                }
                Some(words)
            } else {
                if names != labels {
                    return Err(CertificateError::at(
                        n,
                        "without a surjection the matrices must be named by the presentation's generators, in order",
                    ));
                }
                None
            };
            let (n, rest) = lines.keyword("witness")?;
            let (w1, w2) = rest
                .split_once('|')
                .ok_or_else(|| CertificateError::at(n, "expected `witness <word> | <word>`"))?;
            let witness = (parse_word(n, w1, &labels)?, parse_word(n, w2, &labels)?);
            CertificateBody::NonAbelianRep {
                spec,
                names,
                matrices,
                surjection,
                witness,
            }
        }
        other => return Err(CertificateError::at(kind_line, format!("unknown kind `{other}`"))),
    };
    if let Some((n, line)) = lines.peek() {
        return Err(CertificateError::at(n, format!("unexpected trailing line `{line}`")));
    }
    Ok(Certificate {
        level,
        presentation,
        body,
    })
}

/// A surjection file: one `gen <name> -> <word>` line per generator of
/// `presentation`, in order, with words over `target_names`.
pub fn parse_surjection(
    text: &str,
    presentation: &GroupPresentation,
    target_names: &[String],
) -> Result<Vec<Word>, CertificateError> {
    let mut lines = Lines::new(text);
    let mut words = Vec::new();
    for label in presentation.labels() {
        let (n, name, value) = gen_line(&mut lines, "->")?;
        if name != label {
            return Err(CertificateError::at(n, format!("expected image of `{label}`, found `{name}`")));
        }
        words.push(parse_word(n, value, target_names)?);
    }
    if let Some((n, line)) = lines.peek() {
        return Err(CertificateError::at(n, format!("unexpected trailing line `{line}`")));
    }
    Ok(words)
}
