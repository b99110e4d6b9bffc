//! Plain-text surrogate files.
//!
//! ```text
//! sgc-surrogate 1
//! dimension <d>
//! F <level:index>{d} <output> <w> <v>        one line per node, S for spline
//! region <dim> <level> <level:index|*>{d} | <knots> | <outputs> | <mid> <half>
//! ```
//! Floats use the shortest representation that round-trips exactly, so a
//! loaded model reproduces the saved one bit for bit. Splines are refitted
//! from their knots on load.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{GridPoint, NodeIndex1D};
use crate::smooth::lines::ANCHOR_FREE;
use crate::smooth::{RegionDatabase, SmoothRegion};
use crate::surrogate::{HierarchicalNode, Provenance, SurrogateModel};

const HEADER: &str = "sgc-surrogate 1";

fn node_token(key: u32) -> String {
    if key == ANCHOR_FREE {
        return "*".into();
    }
    let n = NodeIndex1D::from_dyadic(key).expect("stored keys are valid");
    format!("{}:{}", n.level(), n.index())
}

pub fn to_string(model: &SurrogateModel, regions: &RegionDatabase) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "dimension {}", model.dimension()).unwrap();
    for node in model.nodes() {
        out.push(match node.provenance {
            Provenance::FullModel => 'F',
            Provenance::SplineInterpolated => 'S',
        });
        for &k in node.point.key() {
            write!(out, " {}", node_token(k)).unwrap();
        }
        writeln!(out, " {:e} {:e} {:e}", node.output, node.w, node.v).unwrap();
    }
    for r in regions.regions() {
        write!(out, "region {} {}", r.dim, r.level).unwrap();
        for &k in r.anchor.iter() {
            write!(out, " {}", node_token(k)).unwrap();
        }
        out.push_str(" |");
        for k in &r.knots {
            write!(out, " {k:e}").unwrap();
        }
        out.push_str(" |");
        for o in &r.outputs {
            write!(out, " {o:e}").unwrap();
        }
        writeln!(out, " | {:e} {:e}", r.mid, r.half).unwrap();
    }
    out
}

pub fn save(path: &Path, model: &SurrogateModel, regions: &RegionDatabase) -> Result<()> {
    std::fs::write(path, to_string(model, regions))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<(SurrogateModel, RegionDatabase)> {
    from_str(&std::fs::read_to_string(path)?)
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(line: usize, tok: &str) -> Result<f64> {
    tok.parse()
        .map_err(|_| err(line, format!("invalid number '{tok}'")))
}

fn parse_key(line: usize, tok: &str) -> Result<u32> {
    if tok == "*" {
        return Ok(ANCHOR_FREE);
    }
    let (l, i) = tok
        .split_once(':')
        .ok_or_else(|| err(line, format!("invalid node '{tok}'")))?;
    let level = l.parse().map_err(|_| err(line, format!("invalid level in '{tok}'")))?;
    let index = i.parse().map_err(|_| err(line, format!("invalid index in '{tok}'")))?;
    Ok(NodeIndex1D::new(level, index)?.dyadic())
}

pub fn from_str(text: &str) -> Result<(SurrogateModel, RegionDatabase)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, HEADER)) => {}
        _ => return Err(err(1, "missing surrogate header")),
    }
    let (n, dim_line) = lines.next().ok_or_else(|| err(2, "missing dimension"))?;
    let d: usize = dim_line
        .strip_prefix("dimension ")
        .and_then(|s| s.trim().parse().ok())
        .filter(|&d| d >= 1)
        .ok_or_else(|| err(n, "expected 'dimension <d>'"))?;

    let mut model = SurrogateModel::new(d);
    let mut regions = RegionDatabase::new(d);
    let mut pending: Vec<HierarchicalNode> = Vec::new();
    for (n, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first().copied() {
            None => continue,
            Some("F") | Some("S") => {
                if toks.len() != 1 + d + 3 {
                    return Err(err(n, "wrong number of fields in node line"));
                }
                let key: Vec<u32> = toks[1..=d]
                    .iter()
                    .map(|t| parse_key(n, t))
                    .collect::<Result<_>>()?;
                let point = GridPoint::from_key(&key)?;
                let node = HierarchicalNode {
                    point,
                    output: parse_f64(n, toks[d + 1])?,
                    w: parse_f64(n, toks[d + 2])?,
                    v: parse_f64(n, toks[d + 3])?,
                    provenance: if toks[0] == "F" {
                        Provenance::FullModel
                    } else {
                        Provenance::SplineInterpolated
                    },
                };
                if pending
                    .first()
                    .is_some_and(|p| p.point.depth() != node.point.depth())
                {
                    model.insert_level(std::mem::take(&mut pending))?;
                }
                pending.push(node);
            }
            Some("region") => {
                let parts: Vec<&str> = line["region".len()..].split('|').collect();
                if parts.len() != 4 {
                    return Err(err(n, "region line needs four '|'-separated parts"));
                }
                let head: Vec<&str> = parts[0].split_whitespace().collect();
                if head.len() != 2 + d {
                    return Err(err(n, "wrong number of fields in region header"));
                }
                let dim: usize = head[0]
                    .parse()
                    .map_err(|_| err(n, "invalid region dimension"))?;
                let level: u32 = head[1].parse().map_err(|_| err(n, "invalid region level"))?;
                let anchor: Box<[u32]> = head[2..]
                    .iter()
                    .map(|t| parse_key(n, t))
                    .collect::<Result<_>>()?;
                let floats = |s: &str| -> Result<Vec<f64>> {
                    s.split_whitespace().map(|t| parse_f64(n, t)).collect()
                };
                let knots = floats(parts[1])?;
                let outputs = floats(parts[2])?;
                let region = SmoothRegion::new(dim, anchor, knots, outputs, level)?;
                let tail = floats(parts[3])?;
                if tail != [region.mid, region.half] {
                    return Err(err(n, "region midpoint/half-length disagree with knots"));
                }
                regions.store(region)?;
            }
            Some(other) => return Err(err(n, format!("unexpected record '{other}'"))),
        }
    }
    model.insert_level(pending)?;
    Ok((model, regions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapt::{AdaptiveConfig, ModelFunction};
    use crate::smooth::run_easgc;

    #[test]
    fn round_trip_is_exact() {
        let f = ModelFunction::from_fn(2, |x| (3.0 * x[0]).sin() * (x[1] + 0.1).ln());
        let cfg = AdaptiveConfig::new(2)
            .with_epsilon(1e-3)
            .with_levels(4, 9)
            .with_spline(9, 0.25);
        let out = run_easgc(&f, cfg).unwrap();
        assert!(!out.regions.is_empty());
        let text = to_string(&out.model, &out.regions);
        let (model, regions) = from_str(&text).unwrap();
        assert_eq!(model.nodes(), out.model.nodes());
        assert_eq!(model.counts(), out.model.counts());
        assert_eq!(regions.len(), out.regions.len());
        assert_eq!(to_string(&model, &regions), text);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(from_str("").is_err());
        assert!(from_str("sgc-surrogate 1\ndimension 0\n").is_err());
        let bad = "sgc-surrogate 1\ndimension 1\nF 1:0 1e0 1e0\n";
        assert!(matches!(from_str(bad), Err(Error::Parse { line: 3, .. })));
        let bad = "sgc-surrogate 1\ndimension 1\nF 1:7 1e0 1e0 1e0\n";
        assert!(from_str(bad).is_err());
    }
}
