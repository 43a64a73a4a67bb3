//! Versioned binary blobs for `--cache-dir`.
//!
//! Layout (little endian): magic "BIANCHI\0", format version u32, code
//! version (u16 length + UTF-8), kind u8, d i64, N i64, payload length u32,
//! payload. A blob whose magic, format version, code version or key does
//! not match is rejected and recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

const MAGIC: &[u8; 8] = b"BIANCHI\0";
pub const FORMAT_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// G₂(0) of the ring of integers: re, im as f64.
    LatticeG2 = 1,
    /// Cusp enumeration summary: see [`CuspSummary`].
    Cusps = 2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Key {
    pub kind: Kind,
    pub d: i64,
    pub n: i64,
}

#[derive(Debug, PartialEq)]
pub enum Lookup {
    Hit(Vec<u8>),
    Miss,
    Rejected(String),
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &Key) -> PathBuf {
        self.dir.join(format!("k{}-d{}-n{}.bin", key.kind as u8, key.d, key.n))
    }

    pub fn get(&self, key: &Key) -> Lookup {
        match fs::read(self.path(key)) {
            Ok(bytes) => match decode(&bytes, key) {
                Ok(p) => Lookup::Hit(p),
                Err(why) => Lookup::Rejected(why),
            },
            Err(_) => Lookup::Miss,
        }
    }

    pub fn put(&self, key: &Key, payload: &[u8]) -> Result<()> {
        let path = self.path(key);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, encode(key, payload)).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, &path).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

pub fn encode(key: &Key, payload: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + payload.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(CODE_VERSION.len() as u16).to_le_bytes());
    out.extend_from_slice(CODE_VERSION.as_bytes());
    out.push(key.kind as u8);
    out.extend_from_slice(&key.d.to_le_bytes());
    out.extend_from_slice(&key.n.to_le_bytes());
    out.extend_from_slice(&(payload.len() as u32).to_le_bytes());
    out.extend_from_slice(payload);
    out
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], String> {
        if self.buf.len() < n {
            return Err("truncated blob".into());
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N], String> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }
}

pub fn decode(bytes: &[u8], key: &Key) -> Result<Vec<u8>, String> {
    let mut r = Reader { buf: bytes };
    if r.take(MAGIC.len())? != MAGIC {
        return Err("bad magic".into());
    }
    let fmt = u32::from_le_bytes(r.array()?);
    if fmt != FORMAT_VERSION {
        return Err(format!("format version {fmt}, expected {FORMAT_VERSION}"));
    }
    let len = u16::from_le_bytes(r.array()?) as usize;
    let code = r.take(len)?;
    if code != CODE_VERSION.as_bytes() {
        return Err(format!(
            "code version {}, expected {CODE_VERSION}",
            String::from_utf8_lossy(code)
        ));
    }
    let kind = r.array::<1>()?[0];
    let d = i64::from_le_bytes(r.array()?);
    let n = i64::from_le_bytes(r.array()?);
    if (kind, d, n) != (key.kind as u8, key.d, key.n) {
        return Err("key mismatch".into());
    }
    let plen = u32::from_le_bytes(r.array()?) as usize;
    let payload = r.take(plen)?.to_vec();
    if !r.buf.is_empty() {
        return Err("trailing bytes".into());
    }
    Ok(payload)
}

/// The parts of a cusp enumeration the CLI reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspSummary {
    pub count: u64,
    pub sigma_fixed: u64,
    pub tau_fixed: u64,
    /// First columns (a, c) of the class representatives, as coordinates
    /// (a₀, a₁, c₀, c₁) in the basis 1, ω of O/N.
    pub reps: Vec<[u32; 4]>,
}

impl CuspSummary {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for v in [self.count, self.sigma_fixed, self.tau_fixed, self.reps.len() as u64] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for r in &self.reps {
            for x in r {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(b: &[u8]) -> Result<Self, String> {
        let mut r = Reader { buf: b };
        let mut head = [0u64; 4];
        for h in &mut head {
            *h = u64::from_le_bytes(r.array()?);
        }
        let mut reps = Vec::with_capacity(head[3] as usize);
        for _ in 0..head[3] {
            let mut q = [0u32; 4];
            for x in &mut q {
                *x = u32::from_le_bytes(r.array()?);
            }
            reps.push(q);
        }
        if !r.buf.is_empty() {
            return Err("trailing bytes".into());
        }
        Ok(CuspSummary { count: head[0], sigma_fixed: head[1], tau_fixed: head[2], reps })
    }
}
