//! Binary cache for a [`WeightIndex`], keyed by the graph's content hash.
//!
//! Layout: 8-byte magic, one version byte, the 64 ASCII hex digits of the
//! graph hash, then little-endian `u64` values: node count, adjacency length,
//! the four per-node weight arrays, the two per-adjacency cumulative arrays,
//! and `Λ₃`, `Λ₄`. Cumulative node arrays are rebuilt on load.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::weights::{Constants, WeightIndex};

const MAGIC: &[u8; 8] = b"GLTWIDX\0";
const VERSION: u8 = 1;

fn put(out: &mut impl Write, values: &[u64]) -> Result<()> {
    for v in values {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn take(input: &mut impl Read, count: usize) -> Result<Vec<u64>> {
    let mut buf = [0u8; 8];
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        input.read_exact(&mut buf).map_err(|_| Error::Cache("truncated cache file".into()))?;
        out.push(u64::from_le_bytes(buf));
    }
    Ok(out)
}

pub fn write_index(out: &mut impl Write, index: &WeightIndex, graph_hash: &str) -> Result<()> {
    if graph_hash.len() != 64 {
        return Err(Error::Cache("graph hash must be 64 hex digits".into()));
    }
    out.write_all(MAGIC)?;
    out.write_all(&[VERSION])?;
    out.write_all(graph_hash.as_bytes())?;
    let n = index.node_weights[0].len() as u64;
    let m = index.acc_sigma.len() as u64;
    put(out, &[n, m])?;
    for w in &index.node_weights {
        put(out, w)?;
    }
    put(out, &index.acc_sigma)?;
    put(out, &index.acc_sigma_check)?;
    put(out, &[index.constants.lambda3, index.constants.lambda4])?;
    Ok(())
}

/// Reads a cached index, refusing it unless it was built for `graph_hash`.
pub fn read_index(input: &mut impl Read, graph_hash: &str) -> Result<WeightIndex> {
    let mut header = [0u8; 9 + 64];
    input.read_exact(&mut header).map_err(|_| Error::Cache("truncated cache header".into()))?;
    if &header[..8] != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    if header[8] != VERSION {
        return Err(Error::Cache(format!("unsupported version {}", header[8])));
    }
    if &header[9..] != graph_hash.as_bytes() {
        return Err(Error::Cache("cache was built for a different graph".into()));
    }
    let dims = take(input, 2)?;
    let (n, m) = (dims[0] as usize, dims[1] as usize);
    let node_weights = [take(input, n)?, take(input, n)?, take(input, n)?, take(input, n)?];
    let acc_sigma = take(input, m)?;
    let acc_sigma_check = take(input, m)?;
    let lambdas = take(input, 2)?;

    let mut node_acc: [Vec<u64>; 4] = Default::default();
    for (acc, w) in node_acc.iter_mut().zip(&node_weights) {
        let mut total = 0u64;
        for &x in w {
            total = total.checked_add(x).ok_or_else(|| Error::Cache("corrupt weights".into()))?;
            acc.push(total);
        }
    }
    let total = |i: usize| node_acc[i].last().copied().unwrap_or(0);
    let constants = Constants {
        gamma: total(0),
        gamma_check: total(1),
        gamma1: total(2),
        gamma2: total(3),
        lambda3: lambdas[0],
        lambda4: lambdas[1],
    };
    Ok(WeightIndex { node_weights, node_acc, acc_sigma, acc_sigma_check, constants })
}

/// Loads the index for `graph` from `path` if a valid cache is there, else
/// builds it and writes the cache.
pub fn load_or_build(path: &Path, graph: &Graph) -> Result<crate::IndexedGraph> {
    let hash = graph.content_hash();
    if let Ok(file) = std::fs::File::open(path) {
        let mut reader = std::io::BufReader::new(file);
        if let Ok(index) = read_index(&mut reader, &hash) {
            return crate::IndexedGraph::with_weights(graph.clone(), index);
        }
    }
    let indexed = crate::IndexedGraph::new(graph.clone())?;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_index(&mut out, &indexed.weights, &hash)?;
    out.flush()?;
    Ok(indexed)
}
