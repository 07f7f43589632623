//! LP text format: `Maximize`, `Subject To`, `Binary`, `End`.

use std::fmt::Write as _;

use super::model::{IpModel, Row, Sense, Var};
use crate::error::{Error, Result};

/// Expressions are wrapped onto continuation lines past this width.
const LINE_WIDTH: usize = 240;

fn push_wrapped(out: &mut String, head: &str, terms: impl Iterator<Item = String>, tail: &str) {
    let mut line = format!(" {head}:");
    for (k, term) in terms.enumerate() {
        let piece = if k == 0 { format!(" {term}") } else { format!(" + {term}") };
        if line.len() + piece.len() > LINE_WIDTH {
            out.push_str(&line);
            out.push('\n');
            line = String::from("  ");
        }
        line.push_str(&piece);
    }
    line.push_str(tail);
    out.push_str(&line);
    out.push('\n');
}

pub fn export_lp(model: &IpModel) -> String {
    let mut out = String::from("\\ Sequential allocation manipulation\nMaximize\n");
    push_wrapped(
        &mut out,
        "obj",
        model.objective.iter().map(|(c, v)| format!("{c} {}", v.name())),
        "",
    );
    out.push_str("Subject To\n");
    for row in model.rows() {
        let op = match row.sense {
            Sense::Eq => "=",
            Sense::Ge => ">=",
        };
        push_wrapped(
            &mut out,
            &row.name,
            row.terms.iter().map(Var::name),
            &format!(" {op} {}", row.rhs),
        );
    }
    out.push_str("Binary\n");
    let m = model.num_items;
    let names: Vec<String> = (0..m)
        .flat_map(|i| (0..m).map(move |t| Var { item: i, step: t }.name()))
        .collect();
    for chunk in names.chunks(16) {
        let _ = writeln!(out, " {}", chunk.join(" "));
    }
    out.push_str("End\n");
    out
}

fn lp_err(line: usize, msg: impl Into<String>) -> Error {
    Error::LpParse {
        line,
        msg: msg.into(),
    }
}

fn parse_var(line: usize, tok: &str) -> Result<Var> {
    let mut parts = tok.strip_prefix("x_").map(|s| s.split('_'));
    let mut next = || -> Option<usize> { parts.as_mut()?.next()?.parse::<usize>().ok() };
    match (next(), next(), next()) {
        (Some(i), Some(t), None) if i >= 1 && t >= 1 => Ok(Var {
            item: i - 1,
            step: t - 1,
        }),
        _ => Err(lp_err(line, format!("bad variable `{tok}`"))),
    }
}

#[derive(PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Binary,
    Done,
}

/// Reads back text produced by [`export_lp`].
pub fn parse_lp(text: &str) -> Result<IpModel> {
    let mut section = Section::Preamble;
    // (first line, name, body)
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    let mut objective: Option<(usize, String)> = None;
    let mut binaries = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('\\').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match content.to_ascii_lowercase().as_str() {
            "maximize" => {
                section = Section::Objective;
                continue;
            }
            "subject to" => {
                section = Section::Constraints;
                continue;
            }
            "binary" => {
                section = Section::Binary;
                continue;
            }
            "end" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Preamble | Section::Done => {
                return Err(lp_err(line, format!("unexpected `{content}`")))
            }
            Section::Objective => match (&mut objective, content.split_once(':')) {
                (None, Some((_, body))) => objective = Some((line, body.to_string())),
                (Some((_, body)), None) => {
                    body.push(' ');
                    body.push_str(content);
                }
                _ => return Err(lp_err(line, "malformed objective")),
            },
            Section::Constraints => match content.split_once(':') {
                Some((name, body)) => entries.push((line, name.trim().to_string(), body.to_string())),
                None => match entries.last_mut() {
                    Some((_, _, body)) => {
                        body.push(' ');
                        body.push_str(content);
                    }
                    None => return Err(lp_err(line, "constraint without a name")),
                },
            },
            Section::Binary => {
                for tok in content.split_whitespace() {
                    binaries.push(parse_var(line, tok)?);
                }
            }
        }
    }
    if section != Section::Done {
        return Err(lp_err(text.lines().count(), "missing `End`"));
    }

    let m = (binaries.len() as f64).sqrt() as usize;
    if m * m != binaries.len() || binaries.iter().any(|v| v.item >= m || v.step >= m) {
        return Err(lp_err(0, "binary section must list x_i_t for all i, t"));
    }

    let (oline, obody) = objective.ok_or_else(|| lp_err(0, "missing objective"))?;
    let mut obj = Vec::new();
    let toks: Vec<&str> = obody.split_whitespace().filter(|t| *t != "+").collect();
    for pair in toks.chunks(2) {
        match pair {
            [c, v] => {
                let c = c
                    .parse::<u64>()
                    .map_err(|_| lp_err(oline, format!("bad coefficient `{c}`")))?;
                obj.push((c, parse_var(oline, v)?));
            }
            _ => return Err(lp_err(oline, "dangling objective term")),
        }
    }

    let mut eq_rows = Vec::new();
    let mut greedy_rows = Vec::new();
    for (line, name, body) in entries {
        let (lhs, sense, rhs) = if let Some((l, r)) = body.split_once(">=") {
            (l, Sense::Ge, r)
        } else if let Some((l, r)) = body.split_once('=') {
            (l, Sense::Eq, r)
        } else {
            return Err(lp_err(line, "constraint without `=` or `>=`"));
        };
        let rhs = rhs
            .trim()
            .parse::<u64>()
            .map_err(|_| lp_err(line, "bad right-hand side"))?;
        let terms = lhs
            .split('+')
            .map(|t| parse_var(line, t.trim()))
            .collect::<Result<Vec<_>>>()?;
        let row = Row {
            name,
            terms,
            sense,
            rhs,
        };
        match row.sense {
            Sense::Eq => eq_rows.push(row),
            Sense::Ge => greedy_rows.push(row),
        }
    }

    Ok(IpModel {
        num_items: m,
        objective: obj,
        eq_rows,
        greedy_rows,
    })
}
