//! Reading and writing maps in the `surfmap 1` text format.

use std::fmt::Write;

use thiserror::Error;

use crate::map::{CombinatorialMap, MapError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfMapError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("half-edge {0} is not paired with its xor-1 partner")]
    NonStandardPairing(usize),
}

fn syntax(line: usize, msg: impl Into<String>) -> SurfMapError {
    SurfMapError::Syntax {
        line,
        msg: msg.into(),
    }
}

pub fn parse(text: &str) -> Result<CombinatorialMap, SurfMapError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (n, header) = lines.next().ok_or_else(|| syntax(1, "empty input"))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["surfmap", "1"] {
        return Err(syntax(n, "expected `surfmap 1`"));
    }
    let (n, count_line) = lines
        .next()
        .ok_or_else(|| syntax(n + 1, "missing halfedges line"))?;
    let count: usize = match count_line.split_whitespace().collect::<Vec<_>>()[..] {
        ["halfedges", k] => k.parse().map_err(|_| syntax(n, "bad half-edge count"))?,
        _ => return Err(syntax(n, "expected `halfedges <2k>`")),
    };
    if count % 2 == 1 {
        return Err(MapError::OddHalfEdgeCount(count).into());
    }
    let mut rotations: Vec<Option<Vec<usize>>> = Vec::new();
    let mut seen = vec![false; count];
    for (n, l) in lines {
        let rest = l
            .strip_prefix("vertex")
            .ok_or_else(|| syntax(n, "expected `vertex <id>: ...`"))?;
        let (id, hs) = rest
            .split_once(':')
            .ok_or_else(|| syntax(n, "missing `:`"))?;
        let v: usize = id.trim().parse().map_err(|_| syntax(n, "bad vertex id"))?;
        if v >= rotations.len() {
            rotations.resize(v + 1, None);
        }
        if rotations[v].is_some() {
            return Err(syntax(n, format!("vertex {v} listed twice")));
        }
        let mut rot = Vec::new();
        for tok in hs.split_whitespace() {
            let h: usize = tok
                .parse()
                .map_err(|_| syntax(n, format!("bad half-edge `{tok}`")))?;
            if h >= count {
                return Err(syntax(n, format!("half-edge {h} out of range")));
            }
            if std::mem::replace(&mut seen[h], true) {
                return Err(syntax(n, format!("half-edge {h} listed twice")));
            }
            rot.push(h);
        }
        rotations[v] = Some(rot);
    }
    if let Some(h) = seen.iter().position(|s| !s) {
        return Err(MapError::DanglingHalfEdge(h).into());
    }
    let rotations: Vec<Vec<usize>> = rotations
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| syntax(0, format!("vertex {v} missing"))))
        .collect::<Result<_, _>>()?;
    Ok(CombinatorialMap::from_rotations(rotations)?)
}

pub fn emit(map: &CombinatorialMap) -> Result<String, SurfMapError> {
    if let Some(h) = (0..map.half_edge_count()).find(|&h| map.opp(h) != h ^ 1) {
        return Err(SurfMapError::NonStandardPairing(h));
    }
    let mut out = String::new();
    writeln!(out, "surfmap 1").unwrap();
    writeln!(out, "halfedges {}", map.half_edge_count()).unwrap();
    for v in 0..map.vertex_count() {
        write!(out, "vertex {v}:").unwrap();
        for h in map.rotation(v) {
            write!(out, " {h}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}
