//! Newick serialization.
//!
//! Children are written in ladderized order: by number of leaves below, then
//! by smallest leaf label. Labels containing whitespace or Newick
//! punctuation are single-quoted, with embedded quotes doubled.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Node, PhyloTree};
use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NewickOptions {
    /// Digits after the decimal point; trailing zeros are trimmed.
    pub precision: usize,
    /// Write negative branch lengths as 0.
    pub clamp_negative: bool,
}

impl Default for NewickOptions {
    fn default() -> Self {
        NewickOptions {
            precision: 6,
            clamp_negative: true,
        }
    }
}

fn format_length(v: f64, opts: &NewickOptions) -> String {
    let v = if opts.clamp_negative && v < 0.0 { 0.0 } else { v };
    let mut s = format!("{:.*}", opts.precision, v);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = String::from("0");
    }
    s
}

fn needs_quotes(label: &str) -> bool {
    label.is_empty()
        || label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | '\'' | ':' | ';' | ','))
}

fn format_label(label: &str) -> String {
    if needs_quotes(label) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        String::from(label)
    }
}

struct Writer<'a> {
    tree: &'a PhyloTree,
    opts: &'a NewickOptions,
    /// (leaf count, smallest leaf label) below each node, from the top node.
    keys: Vec<(usize, String)>,
}

impl Writer<'_> {
    fn children(&self, v: usize, parent: Option<usize>) -> Vec<(usize, f64)> {
        let mut kids: Vec<(usize, f64)> = self.tree.nodes[v]
            .edges
            .iter()
            .copied()
            .filter(|&(w, _)| Some(w) != parent)
            .collect();
        kids.sort_by(|a, b| self.keys[a.0].cmp(&self.keys[b.0]));
        kids
    }

    fn node(&self, out: &mut String, v: usize, parent: Option<usize>) {
        let kids = self.children(v, parent);
        if !kids.is_empty() {
            out.push('(');
            for (i, &(w, len)) in kids.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                self.node(out, w, Some(v));
                out.push(':');
                out.push_str(&format_length(len, self.opts));
            }
            out.push(')');
        }
        if let Some(l) = &self.tree.nodes[v].label {
            out.push_str(&format_label(l));
        }
    }
}

pub(super) fn write(tree: &PhyloTree, opts: &NewickOptions) -> String {
    let mut out = String::new();
    // A lone edge is written rooted at its midpoint.
    if tree.root.is_none() && tree.nodes.len() == 2 && tree.nodes[0].edges.len() == 1 {
        let len = tree.nodes[0].edges[0].1 / 2.0;
        let mut names: Vec<&str> = tree.nodes.iter().map(|n| n.label.as_deref().unwrap_or("")).collect();
        names.sort();
        let l = format_length(len, opts);
        return format!("({}:{l},{}:{l});", format_label(names[0]), format_label(names[1]));
    }
    let top = tree.root.unwrap_or(tree.anchor);
    let mut keys = vec![(0usize, String::new()); tree.nodes.len()];
    for &(v, parent) in tree.preorder(top).iter().rev() {
        if tree.is_leaf(v) {
            keys[v] = (1, tree.label_or_empty(v));
        }
        if let Some(p) = parent {
            let (count, ref min) = keys[v];
            let min = min.clone();
            let entry = &mut keys[p];
            if entry.0 == 0 || min < entry.1 {
                entry.1 = min;
            }
            entry.0 += count;
        }
    }
    let w = Writer { tree, opts, keys };
    w.node(&mut out, top, None);
    out.push(';');
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nodes: Vec<Node>,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Newick {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        loop {
            match self.src.get(self.pos) {
                Some(c) if c.is_ascii_whitespace() => self.pos += 1,
                Some(b'[') => {
                    while self.pos < self.src.len() && self.src[self.pos] != b']' {
                        self.pos += 1;
                    }
                    self.pos += 1;
                }
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn label(&mut self) -> Result<Option<String>> {
        match self.peek() {
            Some(b'\'') => {
                self.pos += 1;
                let mut bytes = Vec::new();
                loop {
                    match self.src.get(self.pos) {
                        None => return Err(self.err("unterminated quoted label")),
                        Some(b'\'') if self.src.get(self.pos + 1) == Some(&b'\'') => {
                            bytes.push(b'\'');
                            self.pos += 2;
                        }
                        Some(b'\'') => {
                            self.pos += 1;
                            break;
                        }
                        Some(&c) => {
                            bytes.push(c);
                            self.pos += 1;
                        }
                    }
                }
                String::from_utf8(bytes)
                    .map(Some)
                    .map_err(|_| self.err("label is not UTF-8"))
            }
            _ => {
                let start = self.pos;
                while let Some(&c) = self.src.get(self.pos) {
                    if c.is_ascii_whitespace() || b"()[]':;,".contains(&c) {
                        break;
                    }
                    self.pos += 1;
                }
                if start == self.pos {
                    return Ok(None);
                }
                let s = core::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.err("label is not UTF-8"))?;
                Ok(Some(String::from(s)))
            }
        }
    }

    fn length(&mut self) -> Result<f64> {
        if self.peek() != Some(b':') {
            return Ok(0.0);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() || matches!(c, b'.' | b'-' | b'+' | b'e' | b'E') {
                self.pos += 1;
            } else {
                break;
            }
        }
        core::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .ok_or_else(|| self.err("bad branch length"))
    }

    /// Parses one subtree and returns its node id.
    fn subtree(&mut self) -> Result<usize> {
        let id = self.nodes.len();
        self.nodes.push(Node {
            label: None,
            edges: Vec::new(),
        });
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                let child = self.subtree()?;
                let len = self.length()?;
                self.nodes[id].edges.push((child, len));
                self.nodes[child].edges.push((id, len));
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.err("expected `,` or `)`")),
                }
            }
        }
        self.nodes[id].label = self.label()?;
        if self.nodes[id].edges.is_empty() && self.nodes[id].label.is_none() {
            return Err(self.err("leaf without a label"));
        }
        Ok(id)
    }
}

/// Parses a single Newick tree. A top-level node with two children makes a
/// rooted tree; three or more make an unrooted tree anchored there.
pub fn parse_newick(text: &str) -> Result<PhyloTree> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nodes: Vec::new(),
    };
    let top = p.subtree()?;
    p.length()?;
    if p.peek() != Some(b';') {
        return Err(p.err("expected `;`"));
    }
    p.pos += 1;
    if p.peek().is_some() {
        return Err(p.err("trailing input after `;`"));
    }
    let degree = p.nodes[top].edges.len();
    if degree == 1 {
        return Err(Error::Newick {
            pos: 0,
            message: "top-level node with a single child".into(),
        });
    }
    let tree = PhyloTree {
        root: if degree == 2 { Some(top) } else { None },
        anchor: top,
        nodes: p.nodes,
    };
    tree.check()?;
    Ok(tree)
}
