//! Quadrilateral mesh container, boundary sets, and the plain-text exchange
//! format.
//!
//! Format: a header line `n_nodes n_elements`, then one node per line
//! `id x y`, one element per line `id n1 n2 n3 n4` (counter-clockwise),
//! then zero or more boundary-set lines `setname id id ...` holding node ids.
//! Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Hard cap on header counts so a malformed file cannot ask for absurd
/// allocations.
const MAX_COUNT: usize = 10_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("node id {0} out of range")]
    NodeOutOfRange(usize),
    #[error("boundary sets must be disjoint; node {node} is in {a} and {b}")]
    OverlappingSets { node: usize, a: String, b: String },
    #[error("duplicate set name {0}")]
    DuplicateSet(String),
    #[error("unknown boundary set {0}")]
    UnknownSet(String),
}

/// 2D mesh of 4-node quadrilaterals with named boundary node sets.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    /// Reference coordinates per node.
    pub coords: Vec<[f64; 2]>,
    /// Element connectivity, counter-clockwise.
    pub quads: Vec<[usize; 4]>,
    /// Boundary node sets keyed by name; disjoint.
    pub sets: BTreeMap<String, Vec<usize>>,
}

impl Mesh {
    pub fn new(
        coords: Vec<[f64; 2]>,
        quads: Vec<[usize; 4]>,
        sets: BTreeMap<String, Vec<usize>>,
    ) -> Result<Self, MeshError> {
        let mesh = Self { coords, quads, sets };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn n_nodes(&self) -> usize {
        self.coords.len()
    }

    pub fn n_elements(&self) -> usize {
        self.quads.len()
    }

    fn validate(&self) -> Result<(), MeshError> {
        let n = self.coords.len();
        for quad in &self.quads {
            for &id in quad {
                if id >= n {
                    return Err(MeshError::NodeOutOfRange(id));
                }
            }
        }
        let mut owner: BTreeMap<usize, &str> = BTreeMap::new();
        for (name, ids) in &self.sets {
            for &id in ids {
                if id >= n {
                    return Err(MeshError::NodeOutOfRange(id));
                }
                if let Some(prev) = owner.insert(id, name) {
                    if prev != name {
                        return Err(MeshError::OverlappingSets {
                            node: id,
                            a: prev.to_string(),
                            b: name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn set(&self, name: &str) -> Result<&[usize], MeshError> {
        self.sets
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| MeshError::UnknownSet(name.to_string()))
    }

    /// Boundary edges (element edges used by exactly one element) whose both
    /// endpoints belong to the named set, in deterministic element order.
    /// Each edge keeps the element's counter-clockwise orientation.
    pub fn boundary_facets(&self, set: &str) -> Result<Vec<[usize; 2]>, MeshError> {
        let ids = self.set(set)?;
        let in_set: std::collections::BTreeSet<usize> = ids.iter().copied().collect();

        // count undirected edge usage
        let mut usage: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for quad in &self.quads {
            for k in 0..4 {
                let (a, b) = (quad[k], quad[(k + 1) % 4]);
                *usage.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }

        let mut facets = Vec::new();
        for quad in &self.quads {
            for k in 0..4 {
                let (a, b) = (quad[k], quad[(k + 1) % 4]);
                if usage[&(a.min(b), a.max(b))] == 1 && in_set.contains(&a) && in_set.contains(&b)
                {
                    facets.push([a, b]);
                }
            }
        }
        Ok(facets)
    }

    /// Total mesh area from the bilinear quad geometry (exact for straight
    /// edges via the shoelace formula).
    pub fn area(&self) -> f64 {
        self.quads
            .iter()
            .map(|q| {
                let p: Vec<[f64; 2]> = q.iter().map(|&i| self.coords[i]).collect();
                0.5 * ((p[0][0] * p[1][1] - p[1][0] * p[0][1])
                    + (p[1][0] * p[2][1] - p[2][0] * p[1][1])
                    + (p[2][0] * p[3][1] - p[3][0] * p[2][1])
                    + (p[3][0] * p[0][1] - p[0][0] * p[3][1]))
            })
            .sum()
    }

    /// Structured rectangle mesh on `[0, w] x [0, h]`, bottom edge tagged
    /// `contact`, top edge tagged `base`. Node `(i, j)` has id `j*(nx+1)+i`.
    pub fn rectangle(nx: usize, ny: usize, w: f64, h: f64) -> Mesh {
        assert!(nx >= 1 && ny >= 1 && w > 0.0 && h > 0.0);
        let mut coords = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                coords.push([w * i as f64 / nx as f64, h * j as f64 / ny as f64]);
            }
        }
        let id = |i: usize, j: usize| j * (nx + 1) + i;
        let mut quads = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                quads.push([id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        let mut sets = BTreeMap::new();
        sets.insert("contact".to_string(), (0..=nx).map(|i| id(i, 0)).collect());
        sets.insert("base".to_string(), (0..=nx).map(|i| id(i, ny)).collect());
        Mesh { coords, quads, sets }
    }

    /// Parses the plain-text exchange format.
    pub fn parse(text: &str) -> Result<Mesh, MeshError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines
            .next()
            .ok_or_else(|| err(0, "missing header line"))?;
        let mut it = header.split_whitespace();
        let n_nodes = parse_count(it.next(), hline, "node count")?;
        let n_elems = parse_count(it.next(), hline, "element count")?;
        if it.next().is_some() {
            return Err(err(hline, "header must be exactly two counts"));
        }

        let mut coords = vec![None::<[f64; 2]>; n_nodes];
        for _ in 0..n_nodes {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| err(0, "unexpected end of file in node block"))?;
            let tok: Vec<&str> = l.split_whitespace().collect();
            if tok.len() != 3 {
                return Err(err(ln, "node line must be `id x y`"));
            }
            let id = parse_id(tok[0], ln, n_nodes)?;
            let x = parse_f64(tok[1], ln)?;
            let y = parse_f64(tok[2], ln)?;
            if coords[id].replace([x, y]).is_some() {
                return Err(err(ln, &format!("duplicate node id {id}")));
            }
        }
        let coords: Vec<[f64; 2]> = coords
            .into_iter()
            .map(|c| c.ok_or_else(|| err(0, "missing node id in dense range")))
            .collect::<Result<_, _>>()?;

        let mut quads = vec![None::<[usize; 4]>; n_elems];
        for _ in 0..n_elems {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| err(0, "unexpected end of file in element block"))?;
            let tok: Vec<&str> = l.split_whitespace().collect();
            if tok.len() != 5 {
                return Err(err(ln, "element line must be `id n1 n2 n3 n4`"));
            }
            let id = parse_id(tok[0], ln, n_elems)?;
            let mut conn = [0usize; 4];
            for (slot, t) in conn.iter_mut().zip(&tok[1..]) {
                *slot = parse_id(t, ln, n_nodes)?;
            }
            if quads[id].replace(conn).is_some() {
                return Err(err(ln, &format!("duplicate element id {id}")));
            }
        }
        let quads: Vec<[usize; 4]> = quads
            .into_iter()
            .map(|c| c.ok_or_else(|| err(0, "missing element id in dense range")))
            .collect::<Result<_, _>>()?;

        let mut sets = BTreeMap::new();
        for (ln, l) in lines {
            let mut tok = l.split_whitespace();
            let name = tok.next().expect("non-empty line").to_string();
            let ids: Vec<usize> = tok
                .map(|t| parse_id(t, ln, n_nodes))
                .collect::<Result<_, _>>()?;
            if sets.insert(name.clone(), ids).is_some() {
                return Err(MeshError::DuplicateSet(name));
            }
        }

        Mesh::new(coords, quads, sets)
    }

    /// Writes the plain-text exchange format; floats use the shortest
    /// round-trip representation so parse(write(m)) == m.
    pub fn write(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n_nodes(), self.n_elements());
        for (i, c) in self.coords.iter().enumerate() {
            let _ = writeln!(out, "{} {} {}", i, c[0], c[1]);
        }
        for (i, q) in self.quads.iter().enumerate() {
            let _ = writeln!(out, "{} {} {} {} {}", i, q[0], q[1], q[2], q[3]);
        }
        for (name, ids) in &self.sets {
            let _ = write!(out, "{name}");
            for id in ids {
                let _ = write!(out, " {id}");
            }
            out.push('\n');
        }
        out
    }
}

fn err(line: usize, msg: &str) -> MeshError {
    MeshError::Parse {
        line,
        msg: msg.to_string(),
    }
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize, MeshError> {
    let t = tok.ok_or_else(|| err(line, &format!("missing {what}")))?;
    let n: usize = t
        .parse()
        .map_err(|_| err(line, &format!("invalid {what} `{t}`")))?;
    if n > MAX_COUNT {
        return Err(err(line, &format!("{what} {n} exceeds limit {MAX_COUNT}")));
    }
    Ok(n)
}

fn parse_id(tok: &str, line: usize, bound: usize) -> Result<usize, MeshError> {
    let id: usize = tok
        .parse()
        .map_err(|_| err(line, &format!("invalid id `{tok}`")))?;
    if id >= bound {
        return Err(err(line, &format!("id {id} out of range (< {bound})")));
    }
    Ok(id)
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, MeshError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| err(line, &format!("invalid number `{tok}`")))?;
    if !v.is_finite() {
        return Err(err(line, &format!("non-finite number `{tok}`")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_counts_and_sets() {
        let m = Mesh::rectangle(3, 2, 3.0, 1.0);
        assert_eq!(m.n_nodes(), 12);
        assert_eq!(m.n_elements(), 6);
        assert_eq!(m.set("contact").unwrap().len(), 4);
        assert_eq!(m.set("base").unwrap().len(), 4);
        assert!((m.area() - 3.0).abs() < 1e-14);
        let facets = m.boundary_facets("contact").unwrap();
        assert_eq!(facets.len(), 3);
        // bottom edges keep CCW element orientation: left-to-right
        for f in facets {
            assert!(m.coords[f[0]][0] < m.coords[f[1]][0]);
        }
    }

    #[test]
    fn text_round_trip() {
        let m = Mesh::rectangle(4, 3, 2.0, 1.5);
        let text = m.write();
        let back = Mesh::parse(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(Mesh::parse("").is_err());
        assert!(Mesh::parse("2").is_err());
        assert!(Mesh::parse("abc 1").is_err());
        assert!(Mesh::parse("99999999999 1").is_err());
        // node id out of range
        assert!(Mesh::parse("1 0\n5 0 0").is_err());
        // non-finite coordinate
        assert!(Mesh::parse("1 0\n0 inf 0").is_err());
        // element referencing unknown node
        assert!(Mesh::parse("4 1\n0 0 0\n1 1 0\n2 1 1\n3 0 1\n0 0 1 2 9").is_err());
        // duplicate node id
        assert!(Mesh::parse("2 0\n0 0 0\n0 1 0").is_err());
        // truncated element block
        assert!(Mesh::parse("4 2\n0 0 0\n1 1 0\n2 1 1\n3 0 1\n0 0 1 2 3").is_err());
        // overlapping sets
        assert!(Mesh::parse("4 1\n0 0 0\n1 1 0\n2 1 1\n3 0 1\n0 0 1 2 3\na 0 1\nb 1 2").is_err());
        // duplicate set name
        assert!(Mesh::parse("4 1\n0 0 0\n1 1 0\n2 1 1\n3 0 1\n0 0 1 2 3\na 0\na 1").is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# generated\n\n2 0\n# nodes\n0 0.25 0\n1 1 2.5\n\nbase 0 1\n";
        let m = Mesh::parse(text).unwrap();
        assert_eq!(m.n_nodes(), 2);
        assert_eq!(m.coords[0], [0.25, 0.0]);
        assert_eq!(m.set("base").unwrap(), &[0, 1]);
    }
}
