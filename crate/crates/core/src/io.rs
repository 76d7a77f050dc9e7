//! TEG JSON files and CSV exports. All writers replace their target
//! atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clustering::ClusteringResult;
use crate::error::{Error, Result};
use crate::spectral::SpectralEmbedding;
use crate::teg::TimeEvolvingGraph;

/// On-disk form: `t` is 1-based, vertices 0-based, only nonzero entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TegFile {
    pub n: usize,
    #[serde(rename = "M")]
    pub views: usize,
    pub directed: bool,
    pub edges: Vec<(usize, usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<usize>>>,
}

impl TegFile {
    pub fn from_graph(graph: &TimeEvolvingGraph, labels: Option<&[Vec<usize>]>) -> Self {
        let edges = graph
            .snapshots()
            .iter()
            .enumerate()
            .flat_map(|(t, w)| w.iter().map(move |(i, j, v)| (t + 1, i, j, v)))
            .collect();
        Self {
            n: graph.n(),
            views: graph.views(),
            directed: graph.is_directed(),
            edges,
            labels: labels.map(<[_]>::to_vec),
        }
    }

    pub fn into_graph(self) -> Result<(TimeEvolvingGraph, Option<Vec<Vec<usize>>>)> {
        let (n, views) = (self.n, self.views);
        for &(t, i, j, w) in &self.edges {
            if t == 0 || t > views {
                return Err(Error::Format(format!("edge view {t} outside [1, {views}]")));
            }
            if i >= n || j >= n {
                return Err(Error::Format(format!("edge ({i}, {j}) outside [0, {n})")));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::Format(format!("edge ({t}, {i}, {j}) has non-positive weight {w}")));
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != views || labels.iter().any(|l| l.len() != n) {
                return Err(Error::Format(format!("labels must be {views} arrays of {n} integers")));
            }
        }
        let edges = self.edges.into_iter().map(|(t, i, j, w)| (t - 1, i, j, w));
        let graph = TimeEvolvingGraph::from_edges(n, views, self.directed, edges).map_err(|e| match e {
            Error::InvalidGraph(m) | Error::InvalidArgument(m) => Error::Format(m),
            other => other,
        })?;
        Ok((graph, self.labels))
    }
}

pub fn parse_teg(json: &str) -> Result<(TimeEvolvingGraph, Option<Vec<Vec<usize>>>)> {
    let file: TegFile = serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
    file.into_graph()
}

pub fn read_teg(path: &Path) -> Result<(TimeEvolvingGraph, Option<Vec<Vec<usize>>>)> {
    parse_teg(&fs::read_to_string(path)?)
}

pub fn write_teg(path: &Path, graph: &TimeEvolvingGraph, labels: Option<&[Vec<usize>]>) -> Result<()> {
    write_json(path, &TegFile::from_graph(graph, labels))
}

/// Writes `bytes` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name =
        path.file_name().ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

fn csv_bytes<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SpectrumRow {
    pub index: usize,
    pub eigenvalue_c: f64,
    pub eigenvalue_l: f64,
    pub tag: String,
}

/// `index` is 1-based.
pub fn spectrum_rows(emb: &SpectralEmbedding) -> Vec<SpectrumRow> {
    emb.eigenvalues
        .iter()
        .zip(&emb.tags)
        .enumerate()
        .map(|(i, (&l, tag))| SpectrumRow {
            index: i + 1,
            eigenvalue_c: l,
            eigenvalue_l: 1.0 - l,
            tag: tag.as_str().to_string(),
        })
        .collect()
}

pub fn spectrum_csv(emb: &SpectralEmbedding) -> Result<Vec<u8>> {
    let mut bytes = csv_bytes(spectrum_rows(emb))?;
    // Header names follow the published column names.
    let header_end = bytes.iter().position(|&b| b == b'\n').unwrap_or(bytes.len());
    let mut out = b"index,eigenvalue_C,eigenvalue_L,tag".to_vec();
    out.extend_from_slice(&bytes.split_off(header_end));
    Ok(out)
}

/// Rows `(eig_index, view, vertex, value)`; indices 1-based, view 1-based.
pub fn eigenvector_csv(emb: &SpectralEmbedding, indices: &[usize]) -> Result<Vec<u8>> {
    let mut rows = Vec::new();
    for &e in indices {
        let v =
            emb.eigenvectors.get(e).ok_or_else(|| Error::InvalidArgument(format!("eigenvector {e} not computed")))?;
        for (r, &x) in v.iter().enumerate() {
            rows.push((e + 1, r / emb.n + 1, r % emb.n, x));
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["eig_index", "view", "vertex", "value"])?;
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Rows `(view, vertex, label)`, view 1-based.
pub fn labels_csv(result: &ClusteringResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["view", "vertex", "label"])?;
    for (r, &l) in result.labels.iter().enumerate() {
        w.serialize((r / result.n + 1, r % result.n, l))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::CsrMatrix;

    fn sample() -> TimeEvolvingGraph {
        let w = CsrMatrix::from_dense(2, 2, &[0.0, 0.5, 0.5, 0.0]).unwrap();
        TimeEvolvingGraph::new(2, false, vec![w.clone(), w]).unwrap()
    }

    #[test]
    fn roundtrip() {
        let g = sample();
        let labels = vec![vec![0, 1], vec![1, 1]];
        let file = TegFile::from_graph(&g, Some(&labels));
        assert_eq!(file.edges[0], (1, 0, 1, 0.5));
        let json = serde_json::to_string(&file).unwrap();
        assert!(json.contains("\"M\":2"));
        let (back, l) = parse_teg(&json).unwrap();
        assert_eq!(back, g);
        assert_eq!(l.unwrap(), labels);
    }

    #[test]
    fn rejects_bad_records() {
        let bad_view = r#"{"n":2,"M":2,"directed":true,"edges":[[0,0,1,1.0]]}"#;
        assert!(matches!(parse_teg(bad_view), Err(Error::Format(_))));
        let bad_vertex = r#"{"n":2,"M":2,"directed":true,"edges":[[1,0,2,1.0]]}"#;
        assert!(matches!(parse_teg(bad_vertex), Err(Error::Format(_))));
        let bad_weight = r#"{"n":2,"M":2,"directed":true,"edges":[[1,0,1,-1.0]]}"#;
        assert!(matches!(parse_teg(bad_weight), Err(Error::Format(_))));
        let asym = r#"{"n":2,"M":2,"directed":false,"edges":[[1,0,1,1.0]]}"#;
        assert!(matches!(parse_teg(asym), Err(Error::Format(_))));
        assert!(matches!(parse_teg("{"), Err(Error::Format(_))));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn csv_headers() {
        let emb = SpectralEmbedding {
            n: 1,
            views: 2,
            eigenvalues: vec![1.0],
            eigenvectors: vec![vec![1.0, 1.0]],
            tags: vec![crate::spectral::EigenTag::Constant],
        };
        let s = String::from_utf8(spectrum_csv(&emb).unwrap()).unwrap();
        assert_eq!(s, "index,eigenvalue_C,eigenvalue_L,tag\n1,1.0,0.0,constant\n");
        let s = String::from_utf8(eigenvector_csv(&emb, &[0]).unwrap()).unwrap();
        assert_eq!(s, "eig_index,view,vertex,value\n1,1,0,1.0\n1,2,0,1.0\n");
    }
}
