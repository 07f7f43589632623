use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Simple undirected graph with 0-based vertices. Edges are stored with
/// the smaller endpoint first, in input order. Colors keep their 1-based
/// input values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInput {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub coloring: Option<Vec<usize>>,
}

impl GraphInput {
    pub fn new(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut norm = Vec::with_capacity(edges.len());
        for (idx, &(u, v)) in edges.iter().enumerate() {
            let bad = |msg: String| Error::GraphParse { line: idx + 2, msg };
            if u >= vertices || v >= vertices {
                return Err(bad(format!("edge ({}, {}) uses an unknown vertex", u + 1, v + 1)));
            }
            if u == v {
                return Err(bad(format!("self-loop at vertex {}", u + 1)));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(bad(format!("duplicate edge ({}, {})", e.0 + 1, e.1 + 1)));
            }
            norm.push(e);
        }
        Ok(GraphInput {
            vertices,
            edges: norm,
            coloring: None,
        })
    }

    pub fn with_coloring(mut self, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != self.vertices || colors.contains(&0) {
            return Err(Error::InvalidParameters(
                "coloring must give every vertex a color >= 1".into(),
            ));
        }
        self.coloring = Some(colors);
        Ok(self)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Parses the edge-list format: a `n m` header, `m` lines `u v`
    /// (1-based), then optional `color v c` lines. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or(Error::GraphParse {
            line: 1,
            msg: "missing `n m` header".into(),
        })?;
        let nums = parse_numbers(hline, header, 2)?;
        let (n, m) = (nums[0], nums[1]);

        let mut edges = Vec::with_capacity(m);
        let mut colors: Vec<Option<usize>> = vec![None; n];
        let mut any_color = false;
        for (line, content) in lines {
            let err = |msg: String| Error::GraphParse { line, msg };
            if let Some(rest) = content.strip_prefix("color") {
                let v = parse_numbers(line, rest, 2)?;
                if v[0] == 0 || v[0] > n {
                    return Err(err(format!("vertex {} out of range", v[0])));
                }
                if v[1] == 0 {
                    return Err(err("colors start at 1".into()));
                }
                if colors[v[0] - 1].replace(v[1]).is_some() {
                    return Err(err(format!("vertex {} colored twice", v[0])));
                }
                any_color = true;
            } else {
                if any_color {
                    return Err(err("edge after color lines".into()));
                }
                let v = parse_numbers(line, content, 2)?;
                if v[0] == 0 || v[1] == 0 || v[0] > n || v[1] > n {
                    return Err(err(format!("edge ({}, {}) out of range", v[0], v[1])));
                }
                edges.push((v[0] - 1, v[1] - 1));
            }
        }
        if edges.len() != m {
            return Err(Error::GraphParse {
                line: hline,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        let mut g = GraphInput::new(n, &edges)?;
        if any_color {
            let total: Option<Vec<usize>> = colors.into_iter().collect();
            let total = total.ok_or(Error::GraphParse {
                line: hline,
                msg: "coloring must cover every vertex".into(),
            })?;
            g = g.with_coloring(total)?;
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.vertices, self.edges.len());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{} {}", u + 1, v + 1);
        }
        if let Some(c) = &self.coloring {
            for (v, col) in c.iter().enumerate() {
                let _ = writeln!(out, "color {} {}", v + 1, col);
            }
        }
        out
    }

    /// Brute-force clique test; fine for the tiny graphs reductions are
    /// exercised on.
    pub fn has_clique(&self, k: usize) -> bool {
        fn extend(g: &GraphInput, chosen: &mut Vec<usize>, from: usize, k: usize) -> bool {
            if chosen.len() == k {
                return true;
            }
            for v in from..g.vertices {
                if chosen.iter().all(|&u| g.has_edge(u, v)) {
                    chosen.push(v);
                    if extend(g, chosen, v + 1, k) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        extend(self, &mut Vec::new(), 0, k)
    }
}

fn parse_numbers(line: usize, text: &str, want: usize) -> Result<Vec<usize>> {
    let nums: std::result::Result<Vec<usize>, _> =
        text.split_whitespace().map(str::parse::<usize>).collect();
    match nums {
        Ok(v) if v.len() == want => Ok(v),
        _ => Err(Error::GraphParse {
            line,
            msg: format!("expected {want} nonnegative integers, got `{}`", text.trim()),
        }),
    }
}
