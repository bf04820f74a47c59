//! Binary on-disk format for periodic fields.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//!   magic   4 bytes  "EFLD"
//!   version u32      1
//!   rank    u8       0 | 1 | 2
//!   sym     u8       1 if rank-2 symmetric storage (6 components)
//!   ncomp   u16      stored component count
//!   dims    3 x u32  grid points per axis (nx, ny, nz), all equal
//!   time    f64      time tag in seconds
//!   payload ncomp x n^3 f64 values (real fields), or interleaved
//!           (re, im) f64 pairs (complex fields); row-major, z fastest
//! ```
//!
//! Whether the payload is real or complex is determined by its length.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::field::{PeriodicField, Rank};
use super::grid::GridSpec;

const MAGIC: &[u8; 4] = b"EFLD";
const VERSION: u32 = 1;

fn rank_tags(rank: Rank) -> (u8, u8) {
    match rank {
        Rank::Scalar => (0, 0),
        Rank::Vector => (1, 0),
        Rank::SymTensor => (2, 1),
        Rank::Tensor => (2, 0),
    }
}

/// Serialize a field (converted to physical representation).  With
/// `complex_payload = false` the imaginary parts are dropped, which is the
/// standard form for the real fields of the pipeline.
pub fn write_field(field: &PeriodicField, out: &mut impl Write, complex_payload: bool) -> Result<()> {
    let f = field.physical();
    let (rank, sym) = rank_tags(f.rank);
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&[rank, sym])?;
    out.write_all(&(f.ncomp() as u16).to_le_bytes())?;
    let n = f.grid.n as u32;
    for _ in 0..3 {
        out.write_all(&n.to_le_bytes())?;
    }
    out.write_all(&f.time_tag.to_le_bytes())?;
    // Buffer the payload to keep write syscalls coarse.
    let len = f.grid.len();
    let mut buf = Vec::with_capacity(len * 8 * if complex_payload { 2 } else { 1 });
    for c in 0..f.ncomp() {
        buf.clear();
        for z in f.comp(c) {
            buf.extend_from_slice(&z.re.to_le_bytes());
            if complex_payload {
                buf.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        out.write_all(&buf)?;
    }
    Ok(())
}

/// Metadata of a serialized field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldInfo {
    pub rank: Rank,
    pub ncomp: usize,
    pub n: usize,
    pub time_tag: f64,
    pub complex_payload: bool,
}

fn read_exact_array<const K: usize>(r: &mut impl Read) -> Result<[u8; K]> {
    let mut buf = [0u8; K];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

fn parse_header(r: &mut impl Read) -> Result<(Rank, usize, usize, f64)> {
    let magic = read_exact_array::<4>(r)?;
    if &magic != MAGIC {
        return Err(Error::io("bad magic: not an EFLD field file"));
    }
    let version = u32::from_le_bytes(read_exact_array::<4>(r)?);
    if version != VERSION {
        return Err(Error::io(format!("unsupported EFLD version {version}")));
    }
    let [rank_tag, sym] = read_exact_array::<2>(r)?;
    let ncomp = u16::from_le_bytes(read_exact_array::<2>(r)?) as usize;
    let rank = match (rank_tag, sym) {
        (0, _) => Rank::Scalar,
        (1, _) => Rank::Vector,
        (2, 1) => Rank::SymTensor,
        (2, 0) => Rank::Tensor,
        _ => return Err(Error::io(format!("invalid rank tag {rank_tag}"))),
    };
    if ncomp != rank.ncomp() {
        return Err(Error::io(format!(
            "component count {ncomp} does not match rank {rank:?}"
        )));
    }
    let nx = u32::from_le_bytes(read_exact_array::<4>(r)?) as usize;
    let ny = u32::from_le_bytes(read_exact_array::<4>(r)?) as usize;
    let nz = u32::from_le_bytes(read_exact_array::<4>(r)?) as usize;
    if nx != ny || ny != nz {
        return Err(Error::io(format!("non-cubic dims {nx}x{ny}x{nz}")));
    }
    let time_tag = f64::from_le_bytes(read_exact_array::<8>(r)?);
    Ok((rank, ncomp, nx, time_tag))
}

/// Deserialize a field.  The grid takes the given dealias fraction (the
/// format stores only the dimensions).
pub fn read_field(r: &mut impl Read, dealias_fraction: f64) -> Result<PeriodicField> {
    let (rank, ncomp, n, time_tag) = parse_header(r)?;
    let grid = GridSpec::new(n, dealias_fraction)?;
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    let len = grid.len();
    let real_bytes = ncomp * len * 8;
    let complex = if rest.len() == real_bytes {
        false
    } else if rest.len() == 2 * real_bytes {
        true
    } else {
        return Err(Error::io(format!(
            "payload length {} matches neither real ({real_bytes}) nor complex ({})",
            rest.len(),
            2 * real_bytes
        )));
    };
    let mut field = PeriodicField::zeros(grid, rank);
    field.time_tag = time_tag;
    let mut cursor = 0usize;
    let mut next = || {
        let v = f64::from_le_bytes(rest[cursor..cursor + 8].try_into().unwrap());
        cursor += 8;
        v
    };
    for c in 0..ncomp {
        for i in 0..len {
            let re = next();
            let im = if complex { next() } else { 0.0 };
            field.comp_mut(c)[i] = Complex64::new(re, im);
        }
    }
    Ok(field)
}

/// Read only the header of a serialized field.
pub fn read_info(r: &mut impl Read) -> Result<FieldInfo> {
    let (rank, ncomp, n, time_tag) = parse_header(r)?;
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    let real_bytes = ncomp * n * n * n * 8;
    let complex_payload = rest.len() == 2 * real_bytes;
    Ok(FieldInfo { rank, ncomp, n, time_tag, complex_payload })
}
