use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub c: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("corpus line {line}: {msg}")]
pub struct CorpusError {
    pub line: usize,
    pub msg: String,
}

/// One entry per line, `c [label]`; `#` starts a comment.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CorpusError { line: i + 1, msg };
        let (head, rest) = match line.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (line, ""),
        };
        let c = f64::from_str(head).map_err(|e| err(format!("bad parameter {head:?}: {e}")))?;
        if !(-2.0..=0.25).contains(&c) {
            return Err(err(format!("c = {c} outside [-2, 1/4]")));
        }
        if rest.contains(',') || rest.contains('"') {
            return Err(err("label may not contain commas or quotes".into()));
        }
        out.push(CorpusEntry {
            c,
            label: rest.to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_labels() {
        let v = parse_corpus("# head\n-1 golden\n\n  -1.75   near window # tail\n-0.5").unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v[1].label, "near window");
        assert_eq!(v[2].label, "");
    }

    #[test]
    fn reports_line_number() {
        let e = parse_corpus("-1\n# x\nabc lbl\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_corpus("0.3\n").unwrap_err();
        assert_eq!(e.line, 1);
    }
}
