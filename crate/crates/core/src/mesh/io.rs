//! Index-list text format: `v x y z [w]` vertex lines and 1-based
//! `f i j k` face lines. `#` starts a comment; `# ambient round_s3` (or
//! `euclidean_r3`) fixes the ambient space, otherwise four coordinates mean S³.

use std::fmt::Write as _;
use std::path::Path;

use super::{Ambient, MeshSurface, TriangleSoup, V4};
use crate::error::{Error, Result};
use crate::report::write_atomic;

fn ambient_tag(a: Ambient) -> &'static str {
    match a {
        Ambient::EuclideanR3 => "euclidean_r3",
        Ambient::RoundS3 => "round_s3",
    }
}

pub fn to_string(ambient: Ambient, vertices: &[V4], triangles: &[[usize; 3]]) -> String {
    let mut s = format!("# ambient {}\n", ambient_tag(ambient));
    for v in vertices {
        match ambient {
            Ambient::EuclideanR3 => writeln!(s, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]),
            Ambient::RoundS3 => writeln!(s, "v {:.16e} {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2], v[3]),
        }
        .expect("writing to a String");
    }
    for t in triangles {
        writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1).expect("writing to a String");
    }
    s
}

pub fn write_mesh(path: &Path, mesh: &MeshSurface) -> Result<()> {
    write_atomic(path, &to_string(mesh.ambient, &mesh.vertices, &mesh.triangles))
}

/// Stereographic projection from `(0, 0, 0, 1)` into R³, for viewers.
pub fn stereographic(soup: &TriangleSoup) -> TriangleSoup {
    let vertices = soup
        .vertices
        .iter()
        .map(|p| {
            let d = 1.0 - p[3];
            V4::new(p[0] / d, p[1] / d, p[2] / d, 0.0)
        })
        .collect();
    TriangleSoup { vertices, triangles: soup.triangles.clone() }
}

pub fn write_soup(path: &Path, ambient: Ambient, soup: &TriangleSoup) -> Result<()> {
    write_atomic(path, &to_string(ambient, &soup.vertices, &soup.triangles))
}

#[derive(Debug, Clone)]
pub struct ParsedMesh {
    pub ambient: Ambient,
    pub vertices: Vec<V4>,
    pub triangles: Vec<[usize; 3]>,
}

pub fn parse(text: &str) -> Result<ParsedMesh> {
    let mut ambient = None;
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut four = false;
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let bad = |msg: String| Error::MeshFormat { line, msg };
        let body = raw.trim();
        if let Some(comment) = body.strip_prefix('#') {
            let mut it = comment.split_whitespace();
            if it.next() == Some("ambient") {
                ambient = Some(match it.next() {
                    Some("round_s3") => Ambient::RoundS3,
                    Some("euclidean_r3") => Ambient::EuclideanR3,
                    other => return Err(bad(format!("unknown ambient {other:?}"))),
                });
            }
            continue;
        }
        let mut it = body.split_whitespace();
        match it.next() {
            None => {}
            Some("v") => {
                let xs = it
                    .map(|t| t.parse::<f64>().map_err(|e| bad(format!("bad coordinate {t:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                match xs.len() {
                    3 => vertices.push(V4::new(xs[0], xs[1], xs[2], 0.0)),
                    4 => {
                        four = true;
                        vertices.push(V4::new(xs[0], xs[1], xs[2], xs[3]));
                    }
                    k => return Err(bad(format!("vertex needs 3 or 4 coordinates, got {k}"))),
                }
            }
            Some("f") => {
                let ids = it
                    .map(|t| {
                        // Accept `i/j/k`-style tokens by keeping the vertex index.
                        let head = t.split('/').next().unwrap_or(t);
                        head.parse::<usize>().map_err(|e| bad(format!("bad index {t:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if ids.len() != 3 {
                    return Err(bad(format!("faces must be triangles, got {} indices", ids.len())));
                }
                if ids.contains(&0) {
                    return Err(bad("indices are 1-based".into()));
                }
                triangles.push([ids[0] - 1, ids[1] - 1, ids[2] - 1]);
            }
            Some(tag) => return Err(bad(format!("unknown record {tag:?}"))),
        }
    }
    let n = vertices.len();
    if let Some((k, _)) = triangles.iter().enumerate().find(|(_, t)| t.iter().any(|&i| i >= n)) {
        return Err(Error::MeshFormat { line: 0, msg: format!("face {} references a missing vertex", k + 1) });
    }
    let ambient = ambient.unwrap_or(if four { Ambient::RoundS3 } else { Ambient::EuclideanR3 });
    Ok(ParsedMesh { ambient, vertices, triangles })
}

pub fn read_mesh(path: &Path) -> Result<MeshSurface> {
    let p = parse(&std::fs::read_to_string(path)?)?;
    MeshSurface::polyhedral(p.ambient, p.vertices, p.triangles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build::clifford_torus;

    #[test]
    fn round_trip_preserves_bits() {
        let m = clifford_torus(8).unwrap();
        let text = to_string(m.ambient, &m.vertices, &m.triangles);
        let p = parse(&text).unwrap();
        assert_eq!(p.ambient, Ambient::RoundS3);
        assert_eq!(p.vertices, m.vertices);
        assert_eq!(p.triangles, m.triangles);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse("v 0 0 0\nv 1 0 0\nf 1 2\n").unwrap_err();
        assert!(matches!(err, Error::MeshFormat { line: 3, .. }));
        assert!(parse("v 0 0\n").is_err());
        assert!(parse("f 1 2 3\n").is_err());
    }

    #[test]
    fn stereographic_maps_sphere_to_space() {
        let mut s = TriangleSoup::default();
        s.append(&[V4::new(1.0, 0.0, 0.0, 0.0), V4::new(0.0, 0.0, 0.0, -1.0)], &[]);
        let p = stereographic(&s);
        assert_eq!(p.vertices[0], V4::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(p.vertices[1], V4::new(0.0, 0.0, 0.0, 0.0));
    }
}
