//! On-disk sieve cache.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "TATL"          4 bytes magic
//! version         1 byte, currently 1
//! limit           8 bytes (u64)
//! body            spf[1..=N]   as u32
//!                 phi[1..=N]   as u32
//!                 mobius[1..=N] as i8
//!                 omega[1..=N]  as u8
//! checksum        8 bytes: the first 8 bytes of SHA-256(body), read as a little-endian u64
//! ```
//!
//! `spf` and `phi` are 4 bytes wide because limits are capped at
//! [`MAX_LIMIT`](crate::sieve::MAX_LIMIT) `< 2^32`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::sieve::{SieveTable, MAX_LIMIT};

pub const MAGIC: &[u8; 4] = b"TATL";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 13;

/// Writes `table` to `out` in the cache format.
pub fn write_table<W: Write>(table: &SieveTable, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    out.write_all(MAGIC)?;
    out.write_all(&[VERSION])?;
    out.write_all(&table.limit().to_le_bytes())?;

    let mut hasher = Sha256::new();
    let mut emit = |bytes: &[u8], out: &mut BufWriter<W>| -> Result<()> {
        hasher.update(bytes);
        out.write_all(bytes)?;
        Ok(())
    };
    let mut buf = Vec::with_capacity(1 << 16);
    for chunk in table.spf_slice()[1..].chunks(1 << 14) {
        buf.clear();
        buf.extend(chunk.iter().flat_map(|v| v.to_le_bytes()));
        emit(&buf, &mut out)?;
    }
    for chunk in table.phi_slice()[1..].chunks(1 << 14) {
        buf.clear();
        buf.extend(chunk.iter().flat_map(|v| v.to_le_bytes()));
        emit(&buf, &mut out)?;
    }
    let mobius: Vec<u8> = table.mobius_slice()[1..].iter().map(|&m| m as u8).collect();
    emit(&mobius, &mut out)?;
    emit(&table.omega_slice()[1..], &mut out)?;

    out.write_all(&checksum(hasher).to_le_bytes())?;
    out.flush()?;
    Ok(())
}

/// Reads and validates a cache image. Rejects wrong magic, unknown versions,
/// truncated files and checksum mismatches with [`Error::CorruptCache`].
pub fn read_table<R: Read>(input: R) -> Result<SieveTable> {
    let mut input = BufReader::new(input);
    let mut header = [0u8; HEADER_LEN];
    input
        .read_exact(&mut header)
        .map_err(|_| corrupt("truncated header"))?;
    if &header[..4] != MAGIC {
        return Err(corrupt("bad magic"));
    }
    if header[4] != VERSION {
        return Err(corrupt(format!("unsupported version {}", header[4])));
    }
    let limit = u64::from_le_bytes(header[5..13].try_into().unwrap());
    if limit == 0 || limit > MAX_LIMIT {
        return Err(corrupt(format!("limit {limit} out of range")));
    }
    let n = limit as usize;

    let mut body = Vec::new();
    input.read_to_end(&mut body)?;
    let body_len = n * 10;
    if body.len() != body_len + 8 {
        return Err(corrupt(format!(
            "expected {} bytes after the header, found {}",
            body_len + 8,
            body.len()
        )));
    }
    let (body, trailer) = body.split_at(body_len);
    let mut hasher = Sha256::new();
    hasher.update(body);
    let stored = u64::from_le_bytes(trailer.try_into().unwrap());
    if checksum(hasher) != stored {
        return Err(corrupt("checksum mismatch"));
    }

    let (spf_bytes, rest) = body.split_at(4 * n);
    let (phi_bytes, rest) = rest.split_at(4 * n);
    let (mobius_bytes, omega_bytes) = rest.split_at(n);

    let words = |bytes: &[u8]| -> Vec<u32> {
        std::iter::once(0)
            .chain(
                bytes
                    .chunks_exact(4)
                    .map(|c| u32::from_le_bytes(c.try_into().unwrap())),
            )
            .collect()
    };
    let spf = words(spf_bytes);
    let phi = words(phi_bytes);
    let mobius = std::iter::once(0)
        .chain(mobius_bytes.iter().map(|&b| b as i8))
        .collect();
    let omega = std::iter::once(0).chain(omega_bytes.iter().copied()).collect();
    Ok(SieveTable::from_parts(spf, phi, mobius, omega))
}

pub fn save(table: &SieveTable, path: impl AsRef<Path>) -> Result<()> {
    write_table(table, File::create(path)?)
}

pub fn load(path: impl AsRef<Path>) -> Result<SieveTable> {
    read_table(File::open(path)?)
}

fn checksum(hasher: Sha256) -> u64 {
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::CorruptCache(msg.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_sieve;

    fn image(limit: u64) -> Vec<u8> {
        let mut bytes = Vec::new();
        write_table(&build_sieve(limit).unwrap(), &mut bytes).unwrap();
        bytes
    }

    #[test]
    fn header_layout() {
        let bytes = image(30);
        assert_eq!(&bytes[..4], b"TATL");
        assert_eq!(bytes[4], 1);
        assert_eq!(u64::from_le_bytes(bytes[5..13].try_into().unwrap()), 30);
        assert_eq!(bytes.len(), HEADER_LEN + 30 * 10 + 8);
        // spf(2) is the second u32 of the body
        assert_eq!(&bytes[HEADER_LEN + 4..HEADER_LEN + 8], &2u32.to_le_bytes());
    }

    #[test]
    fn round_trip() {
        let table = build_sieve(5000).unwrap();
        let mut bytes = Vec::new();
        write_table(&table, &mut bytes).unwrap();
        assert_eq!(read_table(bytes.as_slice()).unwrap(), table);
    }

    #[test]
    fn rejects_corruption() {
        let good = image(100);

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(read_table(bad.as_slice()), Err(Error::CorruptCache(m)) if m.contains("magic")));

        let mut bad = good.clone();
        bad[4] = 2;
        assert!(matches!(read_table(bad.as_slice()), Err(Error::CorruptCache(m)) if m.contains("version")));

        let mut bad = good.clone();
        bad[HEADER_LEN + 17] ^= 1;
        assert!(matches!(read_table(bad.as_slice()), Err(Error::CorruptCache(m)) if m.contains("checksum")));

        let bad = &good[..good.len() - 3];
        assert!(matches!(read_table(bad), Err(Error::CorruptCache(_))));

        assert!(matches!(read_table(&good[..7]), Err(Error::CorruptCache(_))));
    }
}
