use crate::error::{Error, Result};

use super::Hypergraph;

/// The `r`-uniform tight cycle on `len` cyclically ordered vertices.
pub fn tight_cycle(r: usize, len: usize) -> Result<Hypergraph> {
    if r < 3 {
        return Err(Error::pre(format!("tight cycle needs r >= 3, got {r}")));
    }
    if len <= r {
        return Err(Error::pre(format!(
            "tight cycle needs more than r = {r} vertices, got {len}"
        )));
    }
    let edges = (0..len)
        .map(|i| (0..r).map(|j| (i + j) % len).collect())
        .collect();
    Hypergraph::new(r, len, edges)
}

/// The grid `r`-graph on `[r]^2`: rows first, then columns. Vertex `(i, j)` is `i*r + j`.
pub fn grid(r: usize) -> Result<Hypergraph> {
    if r < 2 {
        return Err(Error::pre(format!("grid needs r >= 2, got {r}")));
    }
    let rows = (0..r).map(|i| (0..r).map(|j| i * r + j).collect());
    let cols = (0..r).map(|j| (0..r).map(|i| i * r + j).collect());
    Hypergraph::new(r, r * r, rows.chain(cols).collect())
}

/// Bipartite vertex/edge incidence graph. Original vertices keep their
/// indices; edge `j` becomes vertex `v + j`.
pub fn levi(h: &Hypergraph) -> Hypergraph {
    let v = h.vertex_count();
    let edges = h
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(j, e)| e.iter().map(move |&x| vec![x, v + j]))
        .collect();
    Hypergraph::new(2, v + h.edge_count(), edges).expect("incidences are distinct")
}

pub fn single_edge(r: usize) -> Result<Hypergraph> {
    Hypergraph::new(r, r, vec![(0..r).collect()])
}

pub fn complete_graph(n: usize) -> Hypergraph {
    let edges = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| vec![i, j]))
        .collect();
    Hypergraph::new(2, n, edges).expect("valid")
}

/// Path on `n` vertices.
pub fn path_graph(n: usize) -> Hypergraph {
    let edges = (1..n).map(|i| vec![i - 1, i]).collect();
    Hypergraph::new(2, n, edges).expect("valid")
}

pub fn cycle_graph(n: usize) -> Result<Hypergraph> {
    if n < 3 {
        return Err(Error::pre(format!("cycle needs at least 3 vertices, got {n}")));
    }
    let edges = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Hypergraph::new(2, n, edges)
}

/// `K_{1,leaves}` with centre 0.
pub fn star_graph(leaves: usize) -> Hypergraph {
    let edges = (1..=leaves).map(|i| vec![0, i]).collect();
    Hypergraph::new(2, leaves + 1, edges).expect("valid")
}

pub fn petersen() -> Hypergraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push(vec![i, (i + 1) % 5]);
        edges.push(vec![i, i + 5]);
        edges.push(vec![5 + i, 5 + (i + 2) % 5]);
    }
    Hypergraph::new(2, 10, edges).expect("valid")
}

/// A 4-cycle `0-1-2-3` with a pendant leaf `4` on vertex 0.
pub fn pendant_c4() -> Hypergraph {
    Hypergraph::new(
        2,
        5,
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0], vec![0, 4]],
    )
    .expect("valid")
}

/// Parse a named construction: `K:n`, `P:n`, `C:n`, `star:n`, `petersen`,
/// `pendant-c4`, `edge:r`, `tight:r:len`, `grid:r`, `levi:<name>`.
pub fn named(spec: &str) -> Result<Hypergraph> {
    let spec = spec.trim();
    if let Some(inner) = spec.strip_prefix("levi:") {
        return Ok(levi(&named(inner)?));
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |i: usize| -> Result<usize> {
        parts
            .get(i)
            .ok_or_else(|| Error::parse(format!("missing parameter in {spec:?}")))?
            .parse()
            .map_err(|_| Error::parse(format!("bad parameter in {spec:?}")))
    };
    let want = |n: usize| -> Result<()> {
        if parts.len() == n {
            Ok(())
        } else {
            Err(Error::parse(format!("wrong number of parameters in {spec:?}")))
        }
    };
    match parts[0].to_ascii_lowercase().as_str() {
        "k" => want(2).and_then(|_| Ok(complete_graph(num(1)?))),
        "p" | "path" => want(2).and_then(|_| Ok(path_graph(num(1)?))),
        "c" | "cycle" => want(2).and_then(|_| cycle_graph(num(1)?)),
        "star" => want(2).and_then(|_| Ok(star_graph(num(1)?))),
        "edge" => want(2).and_then(|_| single_edge(num(1)?)),
        "tight" => want(3).and_then(|_| tight_cycle(num(1)?, num(2)?)),
        "grid" => want(2).and_then(|_| grid(num(1)?)),
        "petersen" => want(1).map(|_| petersen()),
        "pendant-c4" => want(1).map(|_| pendant_c4()),
        _ => Err(Error::parse(format!("unknown construction {spec:?}"))),
    }
}
