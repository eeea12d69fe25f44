//! Plain-text sparse triplet export of a pencil.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::eigensolve::{CsrMatrix, SymmetricPencil};
use crate::error::Result;

/// Writes `row col value` lines, zero-based, with 17 significant digits.
pub fn write_triplets<W: Write>(a: &CsrMatrix, out: &mut W) -> Result<()> {
    for (i, j, v) in a.triplets() {
        writeln!(out, "{i} {j} {v:.16e}")?;
    }
    Ok(())
}

/// Paths `<stem>_A.txt` and `<stem>_M.txt` next to `path`.
pub fn dump_paths(path: &Path) -> (PathBuf, PathBuf) {
    let stem = path.with_extension("");
    let name = stem
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    (
        stem.with_file_name(format!("{name}_A.txt")),
        stem.with_file_name(format!("{name}_M.txt")),
    )
}

/// Dumps both matrices of `p`, returning the files written.
pub fn dump_pencil(p: &SymmetricPencil, path: &Path) -> Result<(PathBuf, PathBuf)> {
    let (pa, pm) = dump_paths(path);
    for (m, dest) in [(&p.a, &pa), (&p.m, &pm)] {
        let mut w = BufWriter::new(File::create(dest)?);
        write_triplets(m, &mut w)?;
        w.flush()?;
    }
    Ok((pa, pm))
}

/// Reads a triplet file back into a matrix of dimension `n`.
pub fn read_triplets(text: &str, n: usize) -> Option<CsrMatrix> {
    let mut b = crate::eigensolve::TripletBuilder::new(n);
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let mut it = line.split_whitespace();
        let i: usize = it.next()?.parse().ok()?;
        let j: usize = it.next()?.parse().ok()?;
        let v: f64 = it.next()?.parse().ok()?;
        if i >= n || j >= n {
            return None;
        }
        b.push(i, j, v);
    }
    Some(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let a = CsrMatrix::from_dense(&[vec![1.0 / 3.0, -0.1], vec![-0.1, 2e-300]]);
        let mut buf = Vec::new();
        write_triplets(&a, &mut buf).unwrap();
        let back = read_triplets(std::str::from_utf8(&buf).unwrap(), 2).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn paths_get_suffixes() {
        let (a, m) = dump_paths(Path::new("/tmp/out/pencil.txt"));
        assert_eq!(a, Path::new("/tmp/out/pencil_A.txt"));
        assert_eq!(m, Path::new("/tmp/out/pencil_M.txt"));
    }
}
