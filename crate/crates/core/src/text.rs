//! Plain-text file formats.
//!
//! Sequences are one line: blocks separated by `|`, letters in a block
//! separated by spaces, an empty block is an empty segment, and a trailing `*`
//! token marks a block special: `| 0 * | 0 | 0 * |`.
//!
//! Chain collections start with a `m=<m> k=<k>` header followed by one chain
//! per line as its breakpoints, with an optional `xN` multiplicity suffix and
//! an optional `label:` prefix.
//!
//! Lines starting with `#` and blank lines are ignored everywhere.

use std::fmt::{self, Write as _};

use crate::chains::{ChainMultiset, IntervalChain};
use crate::error::{Error, Result};
use crate::seq::{Block, Letter, Sequence};

pub(crate) fn write_blocks(
    f: &mut impl fmt::Write,
    blocks: &[Block],
    special: impl Fn(usize) -> bool,
) -> fmt::Result {
    let last = blocks.len().saturating_sub(1);
    for (i, b) in blocks.iter().enumerate() {
        let mut seg = b
            .letters()
            .iter()
            .map(Letter::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        if special(i) {
            if !seg.is_empty() {
                seg.push(' ');
            }
            seg.push('*');
        }
        if i > 0 {
            f.write_char('|')?;
        }
        if !seg.is_empty() {
            if i > 0 {
                f.write_char(' ')?;
            }
            f.write_str(&seg)?;
            if i < last {
                f.write_char(' ')?;
            }
        }
    }
    Ok(())
}

pub fn format_sequence(seq: &Sequence) -> String {
    seq.to_string()
}

pub fn format_annotated(seq: &Sequence, special: &[bool]) -> String {
    let mut s = String::new();
    write_blocks(&mut s, seq.blocks(), |i| special[i]).expect("writing to a String");
    s
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a sequence with its special-block flags. An input with no content
/// line is the sequence with no blocks.
pub fn parse_annotated(text: &str) -> Result<(Sequence, Vec<bool>)> {
    let mut lines = content_lines(text);
    let Some((lineno, line)) = lines.next() else {
        return Ok((Sequence::default(), Vec::new()));
    };
    if let Some((extra, _)) = lines.next() {
        return Err(parse_err(extra, "expected a single sequence line"));
    }
    let mut blocks = Vec::new();
    let mut special = Vec::new();
    for seg in line.split('|') {
        let mut letters = Vec::new();
        let mut is_special = false;
        for tok in seg.split_whitespace() {
            if is_special {
                return Err(parse_err(lineno, "`*` must be the last token of a block"));
            }
            if tok == "*" {
                is_special = true;
                continue;
            }
            let x: Letter = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad letter `{tok}`")))?;
            letters.push(x);
        }
        let block = Block::new(letters).map_err(|e| parse_err(lineno, e.to_string()))?;
        blocks.push(block);
        special.push(is_special);
    }
    Ok((Sequence::new(blocks), special))
}

/// Parses a sequence, discarding any special-block markers.
pub fn parse_sequence(text: &str) -> Result<Sequence> {
    parse_annotated(text).map(|(s, _)| s)
}

fn parse_header(lineno: usize, line: &str) -> Result<(u32, usize)> {
    let mut m = None;
    let mut k = None;
    for tok in line.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(lineno, format!("bad header token `{tok}`")))?;
        let bad = || parse_err(lineno, format!("bad header value `{tok}`"));
        match key {
            "m" => m = Some(val.parse().map_err(|_| bad())?),
            "k" => k = Some(val.parse().map_err(|_| bad())?),
            _ => return Err(parse_err(lineno, format!("unknown header key `{key}`"))),
        }
    }
    match (m, k) {
        (Some(m), Some(k)) => Ok((m, k)),
        _ => Err(parse_err(lineno, "header must be `m=<m> k=<k>`")),
    }
}

/// One parsed chain line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLine {
    pub label: Option<Letter>,
    pub chain: IntervalChain,
    pub multiplicity: usize,
}

/// Parses a chain collection file into its header and lines, in file order.
pub fn parse_chain_lines(text: &str) -> Result<(u32, usize, Vec<ChainLine>)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `m=<m> k=<k>` header"))?;
    let (m, k) = parse_header(hl, header)?;
    let mut out = Vec::new();
    for (lineno, line) in lines {
        let mut toks: Vec<&str> = line.split_whitespace().collect();
        let mut label = None;
        if let Some(first) = toks.first() {
            if let Some(l) = first.strip_suffix(':') {
                label = Some(
                    l.parse()
                        .map_err(|_| parse_err(lineno, format!("bad label `{first}`")))?,
                );
                toks.remove(0);
            }
        }
        let mut multiplicity = 1;
        if let Some(last) = toks.last() {
            if let Some(n) = last.strip_prefix('x') {
                multiplicity = n
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad multiplicity `{last}`")))?;
                toks.pop();
            }
        }
        let bps = toks
            .iter()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| parse_err(lineno, format!("bad breakpoint `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if bps.len() != k + 1 {
            return Err(parse_err(
                lineno,
                format!("expected {} breakpoints, found {}", k + 1, bps.len()),
            ));
        }
        let chain = IntervalChain::new(bps, m).map_err(|e| parse_err(lineno, e.to_string()))?;
        out.push(ChainLine {
            label,
            chain,
            multiplicity,
        });
    }
    Ok((m, k, out))
}

pub fn parse_chains(text: &str) -> Result<ChainMultiset> {
    let (m, k, lines) = parse_chain_lines(text)?;
    let mut ms = ChainMultiset::new(m, k);
    for l in lines {
        ms.add(l.chain, l.multiplicity)?;
    }
    Ok(ms)
}

fn breakpoints_text(c: &IntervalChain) -> String {
    c.breakpoints()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn format_chains(ms: &ChainMultiset) -> String {
    let mut out = format!("m={} k={}\n", ms.domain(), ms.order());
    for (c, n) in ms.entries() {
        out.push_str(&breakpoints_text(c));
        if n != 1 {
            let _ = write!(out, " x{n}");
        }
        out.push('\n');
    }
    out
}

/// Writes labeled chains, one `label: a0 .. ak` line per chain.
pub fn format_labeled_chains<'a>(
    m: u32,
    k: usize,
    chains: impl IntoIterator<Item = (Letter, &'a IntervalChain)>,
) -> String {
    let mut out = format!("m={m} k={k}\n");
    for (label, c) in chains {
        let _ = writeln!(out, "{label}: {}", breakpoints_text(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_text_shapes() {
        let s = Sequence::from_blocks(vec![vec![0], vec![0, 1], vec![1]]).unwrap();
        assert_eq!(format_sequence(&s), "0 | 0 1 | 1");
        let e = Sequence::from_blocks(vec![vec![], vec![0], vec![], vec![1], vec![]]).unwrap();
        assert_eq!(format_sequence(&e), "| 0 || 1 |");
        assert_eq!(parse_sequence("| 0 || 1 |").unwrap(), e);
        assert_eq!(parse_sequence("# nothing\n").unwrap().block_count(), 0);
    }

    #[test]
    fn annotated_text() {
        let s = Sequence::from_blocks(vec![vec![], vec![0], vec![0], vec![]]).unwrap();
        let flags = [false, true, true, false];
        let text = format_annotated(&s, &flags);
        assert_eq!(text, "| 0 * | 0 * |");
        let (p, f) = parse_annotated(&text).unwrap();
        assert_eq!(p, s);
        assert_eq!(f, flags);
        let empty_special = Sequence::from_blocks(vec![vec![], vec![]]).unwrap();
        let t = format_annotated(&empty_special, &[true, false]);
        assert_eq!(parse_annotated(&t).unwrap().1, vec![true, false]);
    }

    #[test]
    fn sequence_errors_carry_lines() {
        assert_eq!(
            parse_sequence("# c\n0 | 0 0").unwrap_err(),
            Error::Parse {
                line: 2,
                message: "letter 0 appears twice in one block".into()
            }
        );
        assert!(matches!(parse_sequence("0 | a"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_sequence("0 * 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_sequence("0\n1"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn chain_text() {
        let text = "m=4 k=2\n1 2 3 x2\n2 2 4\n";
        let ms = parse_chains(text).unwrap();
        assert_eq!(ms.total(), 3);
        assert_eq!(format_chains(&ms), text);
        assert!(matches!(
            parse_chains("m=4 k=2\n1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_chains("k=2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_chains("m=3 k=1\n\n3 2\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        let (_, _, lines) = parse_chain_lines("m=3 k=1\n7: 1 2\n").unwrap();
        assert_eq!(lines[0].label, Some(7));
    }
}
