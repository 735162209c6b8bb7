//! Twitter15-style retweet traces.
//!
//! One event per line:
//!
//! ```text
//! ['ROOT', 'ROOT', 0.0]->['u1', 't1', 0.0]
//! ['u1', 't1', 0.0]->['u2', 't2', 3.5]
//! ```
//!
//! A node is the `(uid, tweet_id)` pair, rendered as the id `uid:tweet_id`.
//! The edge cost is the child time minus the parent time. A line whose parent
//! uid is `ROOT` names the cascade root and adds no edge. Times may also be
//! written quoted (`'3.5'`), as in the public release of the dataset.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::ParseError;
use crate::graph::{GraphBuilder, NodeId, WeightedDigraph};

const ROOT_UID: &str = "ROOT";

/// A parsed trace: the latency graph plus the node its ROOT line declared.
#[derive(Debug, Clone)]
pub struct Twitter15Trace {
    pub graph: WeightedDigraph,
    pub root: NodeId,
}

struct Triple<'a> {
    uid: &'a str,
    tweet: &'a str,
    time: f64,
}

impl Triple<'_> {
    fn node_id(&self) -> String {
        format!("{}:{}", self.uid, self.tweet)
    }
}

struct Cursor<'a> {
    rest: &'a str,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, reason: impl Into<String>) -> ParseError {
        ParseError::MalformedTriple {
            line: self.line,
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        self.skip_ws();
        match self.rest.strip_prefix(token) {
            Some(r) => {
                self.rest = r;
                Ok(())
            }
            None => Err(self.err(format!("expected `{token}`"))),
        }
    }

    fn quoted(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let Some(body) = self.rest.strip_prefix('\'') else {
            return Err(self.err("expected a single-quoted string"));
        };
        let Some(end) = body.find('\'') else {
            return Err(self.err("unterminated quoted string"));
        };
        self.rest = &body[end + 1..];
        Ok(&body[..end])
    }

    fn time(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let raw = if self.rest.starts_with('\'') {
            self.quoted()?
        } else {
            let end = self
                .rest
                .find(|c: char| c == ']' || c.is_whitespace())
                .unwrap_or(self.rest.len());
            let (tok, rest) = self.rest.split_at(end);
            self.rest = rest;
            tok
        };
        let t: f64 = raw
            .trim()
            .parse()
            .map_err(|_| self.err(format!("time {raw:?} is not a number")))?;
        if !t.is_finite() || t < 0.0 {
            return Err(self.err(format!("time {raw:?} is not a non-negative number")));
        }
        Ok(t)
    }

    fn triple(&mut self) -> Result<Triple<'a>, ParseError> {
        self.expect("[")?;
        let uid = self.quoted()?;
        self.expect(",")?;
        let tweet = self.quoted()?;
        self.expect(",")?;
        let time = self.time()?;
        self.expect("]")?;
        Ok(Triple { uid, tweet, time })
    }
}

/// Parses one trace file.
pub fn parse_twitter15_trace(text: &str) -> Result<Twitter15Trace, ParseError> {
    let mut builder = GraphBuilder::default();
    let mut root: Option<(NodeId, String)> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor { rest: raw, line };
        let parent = cur.triple()?;
        cur.expect("->")?;
        let child = cur.triple()?;
        cur.skip_ws();
        if !cur.rest.is_empty() {
            return Err(cur.err(format!("trailing input {:?}", cur.rest)));
        }

        let child_id = child.node_id();
        if parent.uid == ROOT_UID {
            match &root {
                Some((_, existing)) if *existing != child_id => {
                    return Err(ParseError::MultipleRoots {
                        line,
                        node: child_id,
                    });
                }
                Some(_) => {}
                None => {
                    let n = builder.add_node(&child_id);
                    root = Some((n, child_id));
                }
            }
            continue;
        }

        if child.time < parent.time {
            return Err(ParseError::NegativeLatency {
                line,
                parent: parent.time,
                child: child.time,
            });
        }
        builder
            .add_edge(&parent.node_id(), &child_id, child.time - parent.time)
            .map_err(|e| ParseError::from_graph(line, e))?;
    }

    let (root, _) = root.ok_or(ParseError::MissingRoot)?;
    Ok(Twitter15Trace {
        graph: builder.build(),
        root,
    })
}

/// One trace file of a corpus directory.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    /// File stem, which in the public release is the source tweet id.
    pub name: String,
    pub trace: Twitter15Trace,
}

/// Loads every `*.txt` trace in `dir`, in file-name order.
///
/// With `labels = Some((path, keep))`, `path` is read as `label:tweet_id`
/// lines and only traces whose stem carries label `keep` are loaded.
pub fn load_twitter15_corpus(
    dir: &Path,
    labels: Option<(&Path, &str)>,
) -> Result<Vec<CorpusEntry>, ParseError> {
    let io_err = |path: &Path, source| ParseError::Io {
        path: path.display().to_string(),
        source,
    };

    let keep: Option<HashMap<String, String>> = match labels {
        None => None,
        Some((path, _)) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let mut map = HashMap::new();
            for (i, raw) in text.lines().enumerate() {
                let raw = raw.trim();
                if raw.is_empty() {
                    continue;
                }
                let Some((label, id)) = raw.split_once(':') else {
                    return Err(ParseError::InFile {
                        path: path.display().to_string(),
                        source: Box::new(ParseError::MalformedLine {
                            line: i + 1,
                            reason: "expected `label:tweet_id`".into(),
                        }),
                    });
                };
                map.insert(id.trim().to_owned(), label.trim().to_owned());
            }
            Some(map)
        }
    };
    let wanted = labels.map(|(_, l)| l);

    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| io_err(dir, e))? {
        let path = entry.map_err(|e| io_err(dir, e))?.path();
        if path.extension().is_some_and(|x| x == "txt") && path.is_file() {
            files.push(path);
        }
    }
    files.sort();

    let mut out = Vec::new();
    for path in files {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        if let (Some(map), Some(wanted)) = (&keep, wanted) {
            if map.get(&name).map(String::as_str) != Some(wanted) {
                continue;
            }
        }
        let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
        let trace = parse_twitter15_trace(&text).map_err(|e| ParseError::InFile {
            path: path.display().to_string(),
            source: Box::new(e),
        })?;
        out.push(CorpusEntry { name, trace });
    }
    Ok(out)
}
