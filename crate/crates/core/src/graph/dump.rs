//! Plain-text graph dump: a header `n m simple_flag`, then one `u v weight`
//! line per edge in edge-id order. Weights carry 17 significant digits so a
//! dump parses back to the same bits.

use std::fmt::Write as _;
use std::io::{self, Write};

use super::weighted::WeightedGraph;
use crate::error::{Error, Result};

pub fn write_dump<W: Write>(graph: &WeightedGraph, out: &mut W) -> io::Result<()> {
    writeln!(out, "{} {} {}", graph.n(), graph.m(), graph.is_simple() as u8)?;
    let mut line = String::new();
    for (u, v, w) in graph.edges() {
        line.clear();
        let _ = writeln!(line, "{u} {v} {w:.16e}");
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn dump_to_string(graph: &WeightedGraph) -> String {
    let mut buf = Vec::new();
    write_dump(graph, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("dump is ASCII")
}

pub fn parse_dump(text: &str) -> Result<WeightedGraph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty dump".into() })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_err(hl, "header must read `n m simple_flag`"));
    }
    let n: usize = fields[0].parse().map_err(|_| parse_err(hl, "bad vertex count"))?;
    let m: usize = fields[1].parse().map_err(|_| parse_err(hl, "bad edge count"))?;
    let flag = match fields[2] {
        "0" => false,
        "1" => true,
        _ => return Err(parse_err(hl, "simple flag must be 0 or 1")),
    };
    let mut endpoints = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for (i, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(parse_err(i, "edge line must read `u v weight`"));
        }
        let u: u32 = f[0].parse().map_err(|_| parse_err(i, "bad endpoint"))?;
        let v: u32 = f[1].parse().map_err(|_| parse_err(i, "bad endpoint"))?;
        let w: f64 = f[2].parse().map_err(|_| parse_err(i, "bad weight"))?;
        endpoints.push((u, v));
        weights.push(w);
    }
    if endpoints.len() != m {
        return Err(Error::Parse {
            line: hl + 1,
            message: format!("header declares {m} edges, found {}", endpoints.len()),
        });
    }
    let graph = WeightedGraph::from_edges(n, endpoints, Some(weights))?;
    if graph.is_simple() != flag {
        return Err(parse_err(hl, "simple flag disagrees with the edge list"));
    }
    Ok(graph)
}

fn parse_err(zero_based: usize, message: &str) -> Error {
    Error::Parse { line: zero_based + 1, message: message.into() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_bit_exact() {
        let w = vec![0.1, 1.0 / 3.0, std::f64::consts::PI * 1e-7, 123456.789012345678];
        let g = WeightedGraph::from_edges(4, vec![(0, 1), (1, 2), (2, 3), (3, 3)], Some(w)).unwrap();
        let text = dump_to_string(&g);
        assert!(text.starts_with("4 4 0\n"));
        let back = parse_dump(&text).unwrap();
        for (a, b) in g.weights().iter().zip(back.weights()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(back.edges().count(), 4);
    }

    #[test]
    fn rejects_inconsistent_dumps() {
        assert!(parse_dump("2 2 1\n0 1 1.0\n").is_err());
        assert!(parse_dump("2 1 0\n0 1 1.0\n").is_err());
        match parse_dump("3 2 1\n0 1 1.0\n1 x 2.0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
