//! Text formats: `.ta` table algebras, `.scm` schemes and homomorphism map
//! files.
//!
//! `.ta`:
//! ```text
//! rank 3
//! labels 1 d b
//! star 0 1 2
//! 1 1 0 1      # λ[i][j][k] = v, one nonzero entry per line
//! ```
//!
//! `.scm`: `points n relations r`, then `n` rows of relation indices.
//!
//! Map files: one `source target scalar` line per source basis element.

use std::sync::Arc;

use crate::algebra::{build_algebra, StructureConstants, TableAlgebra};
use crate::error::{Error, Result};
use crate::homquot::{AlgebraHom, HomImage};
use crate::schemes::Scheme;

fn fmt_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| fmt_err(line, format!("cannot parse `{tok}`")))
}

/// A `.ta` document before validation.
#[derive(Debug, Clone, PartialEq)]
pub struct TaDocument {
    pub rank: usize,
    pub labels: Vec<String>,
    pub star: Vec<usize>,
    pub lambda: StructureConstants,
}

impl TaDocument {
    pub fn build(self, tol: f64) -> Result<TableAlgebra> {
        build_algebra(self.rank, self.labels, self.lambda, self.star, tol)
    }
}

pub fn parse_ta_document(text: &str) -> Result<TaDocument> {
    let mut lines = content_lines(text);
    let (ln, toks) = lines.next().ok_or_else(|| fmt_err(1, "empty file"))?;
    if toks.len() != 2 || toks[0] != "rank" {
        return Err(fmt_err(ln, "expected `rank d`"));
    }
    let rank: usize = parse_num(ln, toks[1])?;
    if rank == 0 {
        return Err(fmt_err(ln, "rank must be positive"));
    }
    let (ln, toks) = lines.next().ok_or_else(|| fmt_err(ln + 1, "missing labels line"))?;
    if toks[0] != "labels" || toks.len() != rank + 1 {
        return Err(fmt_err(ln, format!("expected `labels` with {rank} entries")));
    }
    let labels: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
    let (ln, toks) = lines.next().ok_or_else(|| fmt_err(ln + 1, "missing star line"))?;
    if toks[0] != "star" || toks.len() != rank + 1 {
        return Err(fmt_err(ln, format!("expected `star` with {rank} entries")));
    }
    let star = toks[1..]
        .iter()
        .map(|t| parse_num(ln, t))
        .collect::<Result<Vec<usize>>>()?;
    let mut lambda = StructureConstants::zeros(rank);
    for (ln, toks) in lines {
        if toks.len() != 4 {
            return Err(fmt_err(ln, "expected `i j k v`"));
        }
        let i: usize = parse_num(ln, toks[0])?;
        let j: usize = parse_num(ln, toks[1])?;
        let k: usize = parse_num(ln, toks[2])?;
        let v: f64 = parse_num(ln, toks[3])?;
        if i >= rank || j >= rank || k >= rank {
            return Err(fmt_err(ln, "index out of range"));
        }
        if !v.is_finite() {
            return Err(fmt_err(ln, "value is not finite"));
        }
        lambda.set(i, j, k, v);
    }
    Ok(TaDocument {
        rank,
        labels,
        star,
        lambda,
    })
}

/// Parses and validates a `.ta` document.
pub fn parse_ta(text: &str, tol: f64) -> Result<TableAlgebra> {
    parse_ta_document(text)?.build(tol)
}

/// Renders `a` as `.ta`, with `comments` emitted as leading `#` lines.
/// Values use the shortest representation that round-trips.
pub fn write_ta(a: &TableAlgebra, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    let d = a.rank();
    out.push_str(&format!("rank {d}\n"));
    out.push_str(&format!("labels {}\n", a.labels().join(" ")));
    let star: Vec<String> = a.star_map().iter().map(|s| s.to_string()).collect();
    out.push_str(&format!("star {}\n", star.join(" ")));
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let v = a.lambda(i, j, k);
                if v != 0.0 {
                    out.push_str(&format!("{i} {j} {k} {v}\n"));
                }
            }
        }
    }
    out
}

pub fn parse_scm(text: &str) -> Result<Scheme> {
    let mut lines = content_lines(text);
    let (ln, toks) = lines.next().ok_or_else(|| fmt_err(1, "empty file"))?;
    if toks.len() != 4 || toks[0] != "points" || toks[2] != "relations" {
        return Err(fmt_err(ln, "expected `points n relations r`"));
    }
    let n: usize = parse_num(ln, toks[1])?;
    let r: usize = parse_num(ln, toks[3])?;
    let mut rows = Vec::with_capacity(n);
    for (ln, toks) in lines {
        if toks.len() != n {
            return Err(fmt_err(ln, format!("expected {n} relation indices")));
        }
        let row = toks
            .iter()
            .map(|t| parse_num(ln, t))
            .collect::<Result<Vec<usize>>>()?;
        if let Some(&g) = row.iter().find(|&&g| g >= r) {
            return Err(fmt_err(ln, format!("relation {g} out of range")));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(fmt_err(0, format!("expected {n} rows, found {}", rows.len())));
    }
    let s = Scheme::from_relations(rows)?;
    if s.rank() != r {
        return Err(fmt_err(0, format!("header declares {r} relations, matrix uses {}", s.rank())));
    }
    Ok(s)
}

pub fn write_scm(s: &Scheme, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("points {} relations {}\n", s.n(), s.rank()));
    for row in s.rows() {
        let row: Vec<String> = row.iter().map(|g| g.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a map file into a homomorphism `source → target`. Every source
/// index must appear exactly once.
pub fn parse_phi(text: &str, source: Arc<TableAlgebra>, target: Arc<TableAlgebra>) -> Result<AlgebraHom> {
    let mut images: Vec<Option<HomImage>> = vec![None; source.rank()];
    for (ln, toks) in content_lines(text) {
        if toks.len() != 3 {
            return Err(fmt_err(ln, "expected `source target scalar`"));
        }
        let s: usize = parse_num(ln, toks[0])?;
        let t: usize = parse_num(ln, toks[1])?;
        let c: f64 = parse_num(ln, toks[2])?;
        if s >= source.rank() || t >= target.rank() {
            return Err(fmt_err(ln, "index out of range"));
        }
        if images[s].is_some() {
            return Err(fmt_err(ln, format!("source {s} mapped twice")));
        }
        images[s] = Some(HomImage { target: t, scalar: c });
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(s, im)| im.ok_or_else(|| fmt_err(0, format!("source {s} is not mapped"))))
        .collect::<Result<Vec<_>>>()?;
    AlgebraHom::new(source, target, images)
}

pub fn write_phi(phi: &AlgebraHom) -> String {
    phi.images
        .iter()
        .enumerate()
        .map(|(s, im)| format!("{s} {} {}\n", im.target, im.scalar))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn ta_round_trip() {
        for (_, a) in corpus::base_corpus() {
            let text = write_ta(&a, &["test".into()]);
            let b = parse_ta(&text, a.tol()).unwrap();
            assert_eq!(a.constants(), b.constants());
            assert_eq!(a.labels(), b.labels());
            assert_eq!(a.star_map(), b.star_map());
        }
    }

    #[test]
    fn ta_negative_constant() {
        let text = "rank 2\nlabels 1 g\nstar 0 1\n0 0 0 1\n0 1 1 1\n1 0 1 1\n1 1 0 -1\n";
        assert!(matches!(parse_ta(text, 1e-9), Err(Error::NegativeConstant { .. })));
    }

    #[test]
    fn ta_format_errors() {
        assert!(matches!(parse_ta("rank x\n", 1e-9), Err(Error::Format { line: 1, .. })));
        let text = "# c\nrank 2\nlabels 1 g\nstar 0 1\n0 0 0\n";
        assert!(matches!(parse_ta(text, 1e-9), Err(Error::Format { line: 5, .. })));
    }

    #[test]
    fn scm_round_trip() {
        let text = "# K22\npoints 4 relations 3\n0 1 2 2\n1 0 2 2\n2 2 0 1\n2 2 1 0\n";
        let s = parse_scm(text).unwrap();
        assert_eq!(s.valencies(), &[1, 1, 2]);
        assert_eq!(parse_scm(&write_scm(&s, &[])).unwrap(), s);
    }

    #[test]
    fn phi_round_trip() {
        let c = Arc::new(corpus::cyclic(2));
        let a = Arc::new(corpus::cyclic(3));
        let phi = AlgebraHom::trivial(c.clone(), a.clone());
        let back = parse_phi(&write_phi(&phi), c.clone(), a.clone()).unwrap();
        assert_eq!(back.images, phi.images);
        assert!(parse_phi("0 0 1\n", c, a).is_err());
    }
}
