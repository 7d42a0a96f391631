//! DRESS storage: an outer MDS code whose codeword symbols are placed on
//! nodes by an FR code.
//!
//! On-disk layout under the storage root:
//!
//! ```text
//! manifest.json     parameters, field, k, M, per-node SHA-256
//! code.frc          the inner FR code
//! node_<i>.dat      "i alpha" then alpha lines "j value" (1-based, decimal)
//! ```

mod repair;

pub use repair::{execute_repair, plan_repair, RepairPlan, RepairPolicy};

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analyze::{file_size_with, Budget};
use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::galois::{Elem, Field, FieldSpec, MdsCode};
use crate::incidence::FrCode;

pub const MANIFEST_SCHEMA: &str = "frepkit-dress/1";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const CODE_FILE: &str = "code.frc";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub node: usize,
    pub file: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemManifest {
    pub schema: String,
    pub n: usize,
    pub theta: usize,
    pub alpha: usize,
    pub rho: usize,
    pub k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub field: FieldSpec,
    pub systematic: bool,
    /// Seed of the generated file, when the file was generated.
    pub seed: Option<u64>,
    pub file_sha256: String,
    pub nodes: Vec<NodeEntry>,
}

pub fn node_file_name(node: usize) -> String {
    format!("node_{}.dat", node + 1)
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Digest of a file's symbols as decimal lines; recorded so a
/// reconstruction can be checked without keeping the file itself.
pub fn file_digest(file: &[Elem]) -> String {
    let mut s = String::new();
    for v in file {
        let _ = writeln!(s, "{v}");
    }
    sha256_hex(s.as_bytes())
}

/// A uniformly random file of `m` symbols of GF(q), reproducible by seed.
pub fn random_file(m: usize, q: u32, seed: u64) -> Vec<Elem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| rng.random_range(0..q)).collect()
}

fn render_node(node: usize, entries: &[(usize, Elem)]) -> String {
    let mut s = format!("{} {}\n", node + 1, entries.len());
    for &(j, v) in entries {
        let _ = writeln!(s, "{} {v}", j + 1);
    }
    s
}

/// Parses a node file into 0-based `(symbol, value)` pairs.
pub fn parse_node(text: &str, node: usize, alpha: usize) -> Result<Vec<(usize, Elem)>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split_ascii_whitespace().collect();
    if header != [(node + 1).to_string(), alpha.to_string()] {
        return Err(Error::parse(1, format!("expected header \"{} {alpha}\"", node + 1)));
    }
    let mut out = Vec::with_capacity(alpha);
    for (i, line) in lines.enumerate() {
        let mut it = line.split_ascii_whitespace();
        let (Some(j), Some(v), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::parse(i + 2, "expected \"j value\""));
        };
        let j: usize = j.parse().map_err(|_| Error::parse(i + 2, "bad symbol index"))?;
        let v: Elem = v.parse().map_err(|_| Error::parse(i + 2, "bad value"))?;
        if j == 0 {
            return Err(Error::parse(i + 2, "symbol indices are 1-based"));
        }
        out.push((j - 1, v));
    }
    if out.len() != alpha {
        return Err(Error::parse(out.len() + 2, format!("expected {alpha} symbol lines")));
    }
    Ok(out)
}

/// A DRESS instance persisted under `root`.
#[derive(Clone, Debug)]
pub struct StoredSystem {
    code: FrCode,
    mds: MdsCode,
    manifest: SystemManifest,
    root: PathBuf,
}

#[derive(Clone, Debug, Default)]
pub struct StoreOptions {
    /// Field to encode over; default is the smallest GF(2^m) with at least
    /// `theta` elements.
    pub field: Option<FieldSpec>,
    pub seed: Option<u64>,
    pub budget: Option<Budget>,
}

/// Encodes `file` (exactly `M(k)` symbols), places the codeword on the
/// nodes, and writes the system under `root`.
pub fn store(code: &FrCode, k: usize, file: &[Elem], root: impl AsRef<Path>, opts: &StoreOptions) -> Result<StoredSystem> {
    let root = root.as_ref();
    code.ensure_valid()?;
    if k == 0 || k > code.alpha() {
        return Err(Error::params(format!("reconstruction degree k = {k} must be in 1..={}", code.alpha())));
    }
    let m = file_size_with(code, k, opts.budget.unwrap_or_default(), 0)?;
    if file.len() != m {
        return Err(Error::params(format!("file has {} symbols, M({k}) = {m}", file.len())));
    }
    let spec = match &opts.field {
        Some(s) => s.clone(),
        None => FieldSpec::smallest_binary(code.theta())?,
    };
    let mds = MdsCode::new(Field::new(spec.clone())?, code.theta(), m, true)?;
    let codeword = mds.encode(file)?;

    fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
    let mut nodes = Vec::with_capacity(code.n());
    for (i, set) in code.node_sets().iter().enumerate() {
        let entries: Vec<(usize, Elem)> = set.iter().map(|&j| (j, codeword[j])).collect();
        let text = render_node(i, &entries);
        let name = node_file_name(i);
        let path = root.join(&name);
        fs::write(&path, &text).map_err(|e| Error::io(&path, e))?;
        nodes.push(NodeEntry {
            node: i + 1,
            file: name,
            sha256: sha256_hex(text.as_bytes()),
        });
    }
    code.save(root.join(CODE_FILE))?;
    let manifest = SystemManifest {
        schema: MANIFEST_SCHEMA.to_string(),
        n: code.n(),
        theta: code.theta(),
        alpha: code.alpha(),
        rho: code.rho(),
        k,
        m,
        field: spec,
        systematic: true,
        seed: opts.seed,
        file_sha256: file_digest(file),
        nodes,
    };
    let path = root.join(MANIFEST_FILE);
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok(StoredSystem {
        code: code.clone(),
        mds,
        manifest,
        root: root.to_path_buf(),
    })
}

impl StoredSystem {
    pub fn open(root: impl AsRef<Path>) -> Result<Self> {
        let root = root.as_ref();
        let path = root.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let manifest: SystemManifest = serde_json::from_str(&text)?;
        if manifest.schema != MANIFEST_SCHEMA {
            return Err(Error::Integrity(format!("unknown manifest schema {:?}", manifest.schema)));
        }
        let code = FrCode::load(root.join(CODE_FILE))?;
        if (code.n(), code.theta(), code.alpha(), code.rho()) != (manifest.n, manifest.theta, manifest.alpha, manifest.rho)
            || manifest.nodes.len() != code.n()
        {
            return Err(Error::Integrity("manifest parameters disagree with code.frc".into()));
        }
        let mds = MdsCode::new(Field::new(manifest.field.clone())?, code.theta(), manifest.m, manifest.systematic)?;
        Ok(StoredSystem {
            code,
            mds,
            manifest,
            root: root.to_path_buf(),
        })
    }

    pub fn code(&self) -> &FrCode {
        &self.code
    }

    pub fn mds(&self) -> &MdsCode {
        &self.mds
    }

    pub fn manifest(&self) -> &SystemManifest {
        &self.manifest
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn k(&self) -> usize {
        self.manifest.k
    }

    pub fn file_size(&self) -> usize {
        self.manifest.m
    }

    pub fn node_path(&self, node: usize) -> PathBuf {
        self.root.join(node_file_name(node))
    }

    /// Nodes whose files are present.
    pub fn alive(&self) -> BitRow {
        let n = self.code.n();
        BitRow::from_indices(n, (0..n).filter(|&i| self.node_path(i).is_file()))
    }

    /// Raw node file bytes after checking them against the manifest.
    pub(crate) fn read_node_bytes(&self, node: usize) -> Result<Vec<u8>> {
        if node >= self.code.n() {
            return Err(Error::params(format!("node {} outside 1..={}", node + 1, self.code.n())));
        }
        let path = self.node_path(node);
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        if sha256_hex(&bytes) != self.manifest.nodes[node].sha256 {
            return Err(Error::Integrity(format!("checksum mismatch for {}", path.display())));
        }
        Ok(bytes)
    }

    /// Checked contents of one node as 0-based `(symbol, value)` pairs.
    pub fn read_node(&self, node: usize) -> Result<Vec<(usize, Elem)>> {
        let bytes = self.read_node_bytes(node)?;
        let text = std::str::from_utf8(&bytes).map_err(|_| Error::Integrity("node file is not UTF-8".into()))?;
        let entries = parse_node(text, node, self.code.alpha()).map_err(|e| e.with_path(&self.node_path(node)))?;
        if !entries.iter().map(|e| e.0).eq(self.code.node_set(node).iter().copied()) {
            return Err(Error::Integrity(format!("node {} holds the wrong symbols", node + 1)));
        }
        Ok(entries)
    }

    /// Recovers the file from exactly `k` distinct nodes.
    pub fn reconstruct(&self, nodes: &[usize]) -> Result<Vec<Elem>> {
        let k = self.k();
        let mut set = nodes.to_vec();
        set.sort_unstable();
        set.dedup();
        if set.len() != nodes.len() || nodes.len() != k {
            return Err(Error::params(format!(
                "reconstruction needs exactly k = {k} distinct nodes, got {}",
                nodes.len()
            )));
        }
        let mut coords = Vec::new();
        for &i in &set {
            coords.extend(self.read_node(i)?);
        }
        coords.sort_unstable();
        coords.dedup();
        let distinct = coords.iter().map(|c| c.0).collect::<std::collections::BTreeSet<_>>().len();
        assert!(
            distinct >= self.file_size(),
            "any k nodes of a valid system cover at least M symbols"
        );
        let file = self.mds.decode(&coords)?;
        if file_digest(&file) != self.manifest.file_sha256 {
            return Err(Error::Integrity("decoded file does not match the stored digest".into()));
        }
        Ok(file)
    }
}
