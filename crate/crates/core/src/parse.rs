//! Text formats shared by the library and the CLI.
//!
//! Lattices are either a `+`-separated list of block tokens with optional
//! positive multipliers (`2H+3<1>+<-1>`, `E8`, `2(-E8)`) or a JSON document
//! `{"gram": [[...], ...]}`. The single token `0` denotes the rank-zero
//! lattice. Vectors are comma-separated integers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Block, GramLattice, LatticeVector};

/// Serialized form of a lattice inside JSON documents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeSpec {
    Blocks(String),
    Gram { gram: Vec<Vec<i64>> },
}

impl LatticeSpec {
    pub fn build(&self) -> Result<GramLattice> {
        match self {
            LatticeSpec::Blocks(s) => parse_lattice(s),
            LatticeSpec::Gram { gram } => GramLattice::new(gram.clone()),
        }
    }

    pub fn of(lattice: &GramLattice) -> Self {
        match lattice.blocks() {
            Some(bs) if bs.is_empty() => LatticeSpec::Blocks("0".into()),
            Some(bs) => LatticeSpec::Blocks(format_blocks(bs)),
            None => LatticeSpec::Gram { gram: lattice.gram().to_vec() },
        }
    }
}

pub fn parse_blocks(s: &str) -> Result<Vec<Block>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "0" {
        return Ok(Vec::new());
    }
    if s.is_empty() {
        return Err(Error::Parse("empty lattice spec".into()));
    }
    let mut blocks = Vec::new();
    for token in split_top_level(&s) {
        let digits: String = token.chars().take_while(|c| c.is_ascii_digit()).collect();
        let rest = &token[digits.len()..];
        let count = if digits.is_empty() {
            1
        } else {
            match digits.parse::<usize>() {
                Ok(k) if k > 0 => k,
                _ => return Err(Error::Parse(format!("bad multiplier in `{token}`"))),
            }
        };
        let block = match rest {
            "<1>" | "<+1>" => Block::Plus1,
            "<-1>" => Block::Minus1,
            "H" => Block::H,
            "E8" => Block::E8,
            "(-E8)" | "-E8" => Block::MinusE8,
            _ => {
                return Err(Error::Parse(format!(
                    "unknown lattice token `{token}` (expected k<1>, k<-1>, kH, kE8 or k(-E8))"
                )))
            }
        };
        blocks.extend(std::iter::repeat(block).take(count));
    }
    Ok(blocks)
}

// `+` inside `<+1>` is not a separator.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '<' | '(' => depth += 1,
            '>' | ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parses either grammar (JSON when the text starts with `{`).
pub fn parse_lattice(s: &str) -> Result<GramLattice> {
    let t = s.trim();
    if t.starts_with('{') {
        let spec: LatticeSpec = serde_json::from_str(t).map_err(|e| Error::Parse(format!("lattice JSON: {e}")))?;
        return spec.build();
    }
    GramLattice::from_blocks(&parse_blocks(t)?)
}

/// Inverse of [`parse_blocks`], grouping consecutive equal blocks.
pub fn format_blocks(blocks: &[Block]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < blocks.len() {
        let mut j = i;
        while j < blocks.len() && blocks[j] == blocks[i] {
            j += 1;
        }
        let k = j - i;
        let tok = blocks[i].token();
        parts.push(if k == 1 { tok.to_string() } else { format!("{k}{tok}") });
        i = j;
    }
    parts.join("+")
}

pub fn parse_vector(s: &str) -> Result<LatticeVector> {
    let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']).trim();
    if t.is_empty() {
        return Ok(LatticeVector::new(Vec::new()));
    }
    t.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad vector coordinate `{}`", x.trim()))))
        .collect::<Result<Vec<_>>>()
        .map(LatticeVector::new)
}
