//! Binary basis cache.
//!
//! Little-endian layout:
//!
//! ```text
//! "AKLB"            4 bytes
//! version           u32 (= 1)
//! n, k, l, N, J, J_ok   u32 each
//! L, h              f64 each
//! λ[J]              f64
//! u[J × N^n]        f64, row-major (mode-major)
//! s[J]              f64
//! crc32             u32 over every preceding byte
//! ```

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::SpectralBasis;
use crate::error::{CacheError, Error, Result};
use crate::oscillator::{OscillatorSpec, Stencil, DEFAULT_DENSE_BUDGET};

pub const CACHE_MAGIC: &[u8; 4] = b"AKLB";
pub const CACHE_VERSION: u32 = 1;

const HEADER_LEN: usize = 4 + 4 + 6 * 4 + 2 * 8;

/// Serializes `basis` into `out`.
pub fn write_basis<W: Write>(basis: &SpectralBasis, mut out: W) -> Result<()> {
    let spec = basis.spec();
    if spec.stencil != Stencil::default() {
        return Err(Error::Unsupported(format!(
            "cache format stores only {:?}-stencil bases",
            Stencil::default()
        )));
    }
    let j = basis.modes();
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * j * (basis.grid().len() + 2) + 4);
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    for v in [
        spec.n,
        spec.k as usize,
        spec.l as usize,
        spec.grid_points,
        j,
        basis.trusted(),
    ] {
        let v = u32::try_from(v).map_err(|_| Error::InvalidArgument(format!("{v} does not fit in u32")))?;
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.extend_from_slice(&spec.domain_half_width.to_le_bytes());
    buf.extend_from_slice(&spec.step().to_le_bytes());
    for v in basis.eigenvalues() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for u in basis.eigenfunctions() {
        for v in u {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    for v in basis.sup_norms() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    out.write_all(&buf)?;
    Ok(())
}

/// Decodes a basis from `input`. Nothing is returned unless the whole file
/// validates.
pub fn read_basis<R: Read>(mut input: R) -> Result<SpectralBasis> {
    let mut buf = Vec::new();
    input.read_to_end(&mut buf)?;
    decode(&buf)
}

pub fn save_basis(basis: &SpectralBasis, path: impl AsRef<Path>) -> Result<()> {
    let mut bytes = Vec::new();
    write_basis(basis, &mut bytes)?;
    // write-then-rename so readers never observe a partial file
    let path = path.as_ref();
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, &bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_basis(path: impl AsRef<Path>) -> Result<SpectralBasis> {
    read_basis(fs::File::open(path)?)
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn u32(&mut self) -> u32 {
        let v = u32::from_le_bytes(self.buf[self.pos..self.pos + 4].try_into().unwrap());
        self.pos += 4;
        v
    }

    fn f64(&mut self) -> f64 {
        let v = f64::from_le_bytes(self.buf[self.pos..self.pos + 8].try_into().unwrap());
        self.pos += 8;
        v
    }

    fn f64s(&mut self, count: usize) -> Vec<f64> {
        (0..count).map(|_| self.f64()).collect()
    }
}

fn decode(buf: &[u8]) -> Result<SpectralBasis> {
    let truncated = |needed: usize| CacheError::Truncated {
        needed,
        found: buf.len(),
    };
    if buf.len() < 8 {
        return Err(truncated(HEADER_LEN + 4).into());
    }
    let magic: [u8; 4] = buf[..4].try_into().unwrap();
    if &magic != CACHE_MAGIC {
        return Err(CacheError::BadMagic(magic).into());
    }
    let mut cur = Cursor { buf, pos: 4 };
    let version = cur.u32();
    if version != CACHE_VERSION {
        return Err(CacheError::UnsupportedVersion(version).into());
    }
    if buf.len() < HEADER_LEN {
        return Err(truncated(HEADER_LEN + 4).into());
    }
    let [n, k, l, npts, j, jok] = [0; 6].map(|_| cur.u32() as usize);
    let half_width = cur.f64();
    let h = cur.f64();

    let malformed = |m: String| Error::Cache(CacheError::Malformed(m));
    if !(n == 1 || n == 2) || npts < 2 || j == 0 {
        return Err(malformed(format!("header n={n}, N={npts}, J={j}")));
    }
    let samples = npts
        .checked_pow(n as u32)
        .and_then(|s| s.checked_mul(j))
        .ok_or_else(|| malformed("sample count overflows".into()))?;
    let needed = samples
        .checked_add(2 * j)
        .and_then(|c| c.checked_mul(8))
        .and_then(|c| c.checked_add(HEADER_LEN + 4))
        .ok_or_else(|| malformed("payload size overflows".into()))?;
    if buf.len() < needed {
        return Err(truncated(needed).into());
    }
    if buf.len() > needed {
        return Err(malformed(format!("{} trailing bytes", buf.len() - needed)));
    }
    let body = &buf[..needed - 4];
    let stored = u32::from_le_bytes(buf[needed - 4..].try_into().unwrap());
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(CacheError::Checksum { stored, computed }.into());
    }

    let per_mode = samples / j;
    let eigenvalues = cur.f64s(j);
    let eigenfunctions: Vec<Vec<f64>> = (0..j).map(|_| cur.f64s(per_mode)).collect();
    let sup_norms = cur.f64s(j);

    let spec = OscillatorSpec {
        n,
        k: k as u32,
        l: l as u32,
        domain_half_width: half_width,
        grid_points: npts,
        modes: j,
        stencil: Stencil::default(),
        // the budget is not stored; widen it only if the cached grid needs it
        dense_budget: if n == 2 {
            DEFAULT_DENSE_BUDGET.max(npts * npts)
        } else {
            DEFAULT_DENSE_BUDGET
        },
    };
    spec.validate()
        .map_err(|e| malformed(format!("header describes an invalid spec: {e}")))?;
    if spec.step().to_bits() != h.to_bits() {
        return Err(malformed(format!("grid step {h} inconsistent with L and N")));
    }
    if jok == 0 || jok > j {
        return Err(malformed(format!("trusted modes {jok} outside [1, {j}]")));
    }
    SpectralBasis::from_parts(spec, eigenvalues, eigenfunctions, sup_norms, jok)
}
