//! Plain-text readers and writers: point clouds, index pairs and distance tables.
//!
//! Cloud files start with a `# dim=D` line followed by one comma-separated
//! point per line. Blank lines and further `#` comments are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::PointCloud;

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let t = tok.trim();
    match t.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => return Ok(f64::INFINITY),
        _ => {}
    }
    t.parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}: cannot parse `{t}` as a number")))
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_cloud(text: &str) -> Result<PointCloud> {
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .ok_or_else(|| Error::Parse("empty cloud file".into()))?;
    let dim: usize = header
        .strip_prefix('#')
        .and_then(|h| h.trim().strip_prefix("dim="))
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected `# dim=D` header, found `{header}`")))?;
    let mut cloud = PointCloud::new(dim);
    for (ln, l) in data_lines(text) {
        let p = l
            .split(',')
            .map(|t| parse_f64(t, ln))
            .collect::<Result<Vec<_>>>()?;
        if p.len() != dim {
            return Err(Error::Parse(format!(
                "line {ln}: {} coordinates, header says {dim}",
                p.len()
            )));
        }
        cloud
            .push(&p)
            .map_err(|e| Error::Parse(format!("line {ln}: {e}")))?;
    }
    Ok(cloud)
}

pub fn format_cloud(cloud: &PointCloud) -> String {
    let mut s = format!("# dim={}\n", cloud.dim());
    for p in cloud.iter() {
        let row: Vec<String> = p.iter().map(|c| format!("{c:?}")).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn read_cloud(path: impl AsRef<Path>) -> Result<PointCloud> {
    parse_cloud(&fs::read_to_string(path)?)
}

pub fn write_cloud(path: impl AsRef<Path>, cloud: &PointCloud) -> Result<()> {
    Ok(fs::write(path, format_cloud(cloud))?)
}

/// Index pairs, one `i,j` per line.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    data_lines(text)
        .map(|(ln, l)| {
            let mut it = l.split(',').map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {ln}: bad index `{}`", t.trim())))
            });
            match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => Ok((a?, b?)),
                _ => Err(Error::Parse(format!("line {ln}: expected `i,j`"))),
            }
        })
        .collect()
}

pub fn read_pairs(path: impl AsRef<Path>) -> Result<Vec<(usize, usize)>> {
    parse_pairs(&fs::read_to_string(path)?)
}

/// Square distance table, one row per line; `inf` allowed.
pub fn parse_table(text: &str) -> Result<(usize, Vec<f64>)> {
    let mut rows = Vec::new();
    for (ln, l) in data_lines(text) {
        let r = l
            .split(',')
            .map(|t| parse_f64(t, ln))
            .collect::<Result<Vec<_>>>()?;
        rows.push(r);
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("distance table is not {n}x{n}")));
    }
    Ok((n, rows.into_iter().flatten().collect()))
}

pub fn read_table(path: impl AsRef<Path>) -> Result<(usize, Vec<f64>)> {
    parse_table(&fs::read_to_string(path)?)
}

pub fn format_table(n: usize, table: &[f64]) -> String {
    let mut s = String::new();
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                s.push(',');
            }
            let v = table[i * n + j];
            if v.is_infinite() {
                s.push_str("inf");
            } else {
                let _ = write!(s, "{v:?}");
            }
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cloud_header_and_mismatch() {
        let c = parse_cloud("# dim=2\n0,0\n1.5,-2\n\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.point(1), &[1.5, -2.0]);
        assert!(parse_cloud("# dim=3\n0,0\n").is_err());
        assert!(parse_cloud("0,0\n").is_err());
        assert!(parse_cloud("# dim=2\n0,nan\n").is_err());
    }

    #[test]
    fn pairs_and_tables() {
        assert_eq!(parse_pairs("0,1\n# c\n2, 3\n").unwrap(), vec![(0, 1), (2, 3)]);
        assert!(parse_pairs("0,1,2\n").is_err());
        let (n, t) = parse_table("0,inf\ninf,0\n").unwrap();
        assert_eq!(n, 2);
        assert!(t[1].is_infinite());
        assert_eq!(parse_table(&format_table(n, &t)).unwrap().1, t);
        assert!(parse_table("0,1\n").is_err());
    }

    proptest! {
        #[test]
        fn cloud_round_trip(v in proptest::collection::vec(-1e6f64..1e6, 3..60)) {
            let n = v.len() / 3 * 3;
            let c = PointCloud::from_flat(3, v[..n].to_vec()).unwrap();
            prop_assert_eq!(parse_cloud(&format_cloud(&c)).unwrap(), c);
        }
    }
}
