//! Text forms of group descriptors and elements.
//!
//! Descriptors: `free:k`, `abelian:d`, `heisenberg`, `cyclic:m`,
//! `product:<desc>,<desc>`. Elements: free words `a.b.A` (uppercase is the
//! inverse, `e` the identity), vectors `(3,-2)`, Heisenberg triples
//! `(1,0,2)`, residues `4`, product pairs `[x|y]`.
//!
//! Free-group letters skip `e`, which is reserved for the identity.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::{Element, Group, GroupKind, Letter, Word, MAX_FREE_RANK};
use crate::{Error, Result};

const ALPHABET: &[u8; 25] = b"abcdfghijklmnopqrstuvwxyz";

fn letter_char(l: Letter) -> char {
    let c = ALPHABET[(l.generator() - 1) as usize] as char;
    if l.is_inverse() {
        c.to_ascii_uppercase()
    } else {
        c
    }
}

fn char_letter(c: char) -> Option<Letter> {
    let lower = c.to_ascii_lowercase() as u8;
    let idx = ALPHABET.iter().position(|&a| a == lower)?;
    Some(Letter::new(idx as u32 + 1, c.is_ascii_uppercase()))
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Free { rank } => write!(f, "free:{rank}"),
            GroupKind::Abelian { dim } => write!(f, "abelian:{dim}"),
            GroupKind::Heisenberg => f.write_str("heisenberg"),
            GroupKind::Cyclic { order } => write!(f, "cyclic:{order}"),
            GroupKind::Product(l, r) => write!(f, "product:{l},{r}"),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = parse_kind(s.trim(), s)?;
        if !rest.is_empty() {
            return Err(Error::parse(s, "trailing input after descriptor"));
        }
        kind.validate()?;
        Ok(kind)
    }
}

/// Consumes one descriptor from the front of `s`.
fn parse_kind<'a>(s: &'a str, whole: &str) -> Result<(GroupKind, &'a str)> {
    let (head, tail) = s.split_once(':').unwrap_or((s, ""));
    let number = |tail: &'a str| -> Result<(u64, &'a str)> {
        let end = tail.find(',').unwrap_or(tail.len());
        let n = tail[..end]
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::parse(whole, "expected a size parameter"))?;
        Ok((n, &tail[end..]))
    };
    match head.trim() {
        "free" => {
            let (n, rest) = number(tail)?;
            Ok((GroupKind::Free { rank: small(n, whole)? }, rest))
        }
        "abelian" => {
            let (n, rest) = number(tail)?;
            Ok((GroupKind::Abelian { dim: small(n, whole)? }, rest))
        }
        "cyclic" => {
            let (n, rest) = number(tail)?;
            Ok((GroupKind::Cyclic { order: n }, rest))
        }
        h if h.starts_with("heisenberg") => {
            let rest = &s[s.find("heisenberg").unwrap() + "heisenberg".len()..];
            Ok((GroupKind::Heisenberg, rest))
        }
        "product" => {
            let (left, rest) = parse_kind(tail, whole)?;
            let rest = rest
                .strip_prefix(',')
                .ok_or_else(|| Error::parse(whole, "product needs two factors"))?;
            let (right, rest) = parse_kind(rest, whole)?;
            Ok((GroupKind::Product(Box::new(left), Box::new(right)), rest))
        }
        _ => Err(Error::parse(whole, "unknown group family")),
    }
}

fn small(n: u64, whole: &str) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::parse(whole, "size parameter too large"))
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Word(w) if w.is_identity() => f.write_str("e"),
            Element::Word(w) => {
                for (i, l) in w.letters().iter().enumerate() {
                    if i > 0 {
                        f.write_str(".")?;
                    }
                    write!(f, "{}", letter_char(*l))?;
                }
                Ok(())
            }
            Element::Vector(v) => write_tuple(f, v),
            Element::Heisenberg(t) => write_tuple(f, t),
            Element::Residue(r) => write!(f, "{r}"),
            Element::Pair(l, r) => write!(f, "[{l}|{r}]"),
        }
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, v: &[i64]) -> fmt::Result {
    f.write_str("(")?;
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str(")")
}

impl Group {
    /// Parses an element in this model's notation. `e` is the identity in
    /// every model; free words are freely reduced; residues are taken mod `m`.
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        parse_element(self.kind(), s.trim(), s)
    }
}

fn parse_element(kind: &GroupKind, s: &str, whole: &str) -> Result<Element> {
    if s == "e" {
        return Ok(super::identity_of(kind));
    }
    match kind {
        GroupKind::Free { rank } => {
            let mut letters = Vec::new();
            for token in s.split('.') {
                let token = token.trim();
                if token == "e" {
                    continue;
                }
                if token.is_empty() {
                    return Err(Error::parse(whole, "empty letter"));
                }
                for c in token.chars() {
                    let l = char_letter(c)
                        .filter(|l| l.generator() <= (*rank).min(MAX_FREE_RANK))
                        .ok_or_else(|| Error::parse(whole, "letter outside the generating set"))?;
                    letters.push(l);
                }
            }
            Ok(Element::Word(Word::reduce(letters)))
        }
        GroupKind::Abelian { dim } => {
            let v = if *dim == 1 && !s.starts_with('(') {
                alloc::vec![integer(s, whole)?]
            } else {
                tuple(s, whole)?
            };
            if v.len() != *dim as usize {
                return Err(Error::parse(whole, "wrong number of coordinates"));
            }
            Ok(Element::Vector(v))
        }
        GroupKind::Heisenberg => {
            let v = tuple(s, whole)?;
            let t: [i64; 3] = v
                .try_into()
                .map_err(|_| Error::parse(whole, "Heisenberg elements are triples"))?;
            Ok(Element::Heisenberg(t))
        }
        GroupKind::Cyclic { order } => {
            let r = integer(s, whole)?;
            Ok(Element::Residue(r.rem_euclid(*order as i64) as u64))
        }
        GroupKind::Product(l, r) => {
            let inner = s
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| Error::parse(whole, "product elements look like [x|y]"))?;
            let split = top_level_bar(inner).ok_or_else(|| Error::parse(whole, "missing `|`"))?;
            Ok(Element::pair(
                parse_element(l, inner[..split].trim(), whole)?,
                parse_element(r, inner[split + 1..].trim(), whole)?,
            ))
        }
    }
}

fn top_level_bar(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            '|' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn integer(s: &str, whole: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(whole, "expected an integer"))
}

fn tuple(s: &str, whole: &str) -> Result<Vec<i64>> {
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::parse(whole, "expected a parenthesized tuple"))?;
    inner.split(',').map(|c| integer(c, whole)).collect()
}

/// Comma-separated element list, respecting brackets and parentheses.
pub fn split_element_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in s.chars() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(core::mem::take(&mut current));
        } else {
            current.push(c);
        }
    }
    if !current.trim().is_empty() {
        out.push(current);
    }
    out.into_iter().map(|t| String::from(t.trim())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn descriptors_round_trip() {
        for s in [
            "free:2",
            "abelian:3",
            "heisenberg",
            "cyclic:5",
            "product:free:1,cyclic:3",
            "product:product:cyclic:2,heisenberg,abelian:1",
        ] {
            let k: GroupKind = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
    }

    #[test]
    fn bad_descriptors_are_rejected() {
        for s in ["free", "free:0", "cyclic:1", "torus:2", "product:free:2", "free:2x", "free:26"] {
            assert!(s.parse::<GroupKind>().is_err(), "{s}");
        }
    }

    #[test]
    fn element_notation_round_trips() {
        let cases = [
            ("free:2", "a.b.A"),
            ("free:2", "e"),
            ("abelian:2", "(3,-2)"),
            ("heisenberg", "(1,0,2)"),
            ("cyclic:7", "4"),
            ("product:free:1,cyclic:3", "[A.A|2]"),
        ];
        for (g, x) in cases {
            let group = Group::new(g.parse().unwrap()).unwrap();
            let el = group.parse_element(x).unwrap();
            assert_eq!(el.to_string(), x);
        }
    }

    #[test]
    fn convenience_forms() {
        let z = Group::new(GroupKind::Abelian { dim: 1 }).unwrap();
        assert_eq!(z.parse_element("-3").unwrap(), Element::Vector(alloc::vec![-3]));
        let c = Group::new(GroupKind::Cyclic { order: 5 }).unwrap();
        assert_eq!(c.parse_element("-1").unwrap(), Element::Residue(4));
        let f = Group::new(GroupKind::Free { rank: 2 }).unwrap();
        assert_eq!(f.parse_element("a.b.B").unwrap().to_string(), "a");
        assert!(f.parse_element("c").is_err());
    }

    #[test]
    fn element_lists_split_at_top_level() {
        assert_eq!(
            split_element_list("(1,2), a.b ,[1|(0,0,1)]"),
            ["(1,2)", "a.b", "[1|(0,0,1)]"]
        );
    }
}
