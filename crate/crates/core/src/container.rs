//! Shared on-disk container: magic, version, JSON header, raw payload and a
//! trailing SHA-256 over everything before it. Checkpoints, importance maps
//! and ablation masks all use this layout.
//!
//! ```text
//! bytes 0..8    magic (per file type)
//! bytes 8..12   format version, u32 little-endian
//! bytes 12..20  header length H, u64 little-endian
//! bytes 20..20+H  header JSON (UTF-8)
//! ...           payload
//! last 32       SHA-256 of all preceding bytes
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

pub(crate) enum ContainerError {
    Io(std::io::Error),
    VersionMismatch { found: u32, expected: u32 },
    Corrupt,
}

impl From<std::io::Error> for ContainerError {
    fn from(e: std::io::Error) -> Self {
        ContainerError::Io(e)
    }
}

pub(crate) fn write_container(
    path: &Path,
    magic: &[u8; 8],
    version: u32,
    header: &serde_json::Value,
    payload: &[u8],
) -> Result<(), ContainerError> {
    let header_bytes = serde_json::to_vec(header).map_err(|_| ContainerError::Corrupt)?;
    let mut buf = Vec::with_capacity(20 + header_bytes.len() + payload.len() + 32);
    buf.extend_from_slice(magic);
    buf.extend_from_slice(&version.to_le_bytes());
    buf.extend_from_slice(&(header_bytes.len() as u64).to_le_bytes());
    buf.extend_from_slice(&header_bytes);
    buf.extend_from_slice(payload);
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(&buf)?;
    Ok(())
}

pub(crate) fn read_container(
    path: &Path,
    magic: &[u8; 8],
    expected_version: u32,
) -> Result<(serde_json::Value, Vec<u8>), ContainerError> {
    let bytes = fs::read(path)?;
    if bytes.len() < 20 + 32 {
        return Err(ContainerError::Corrupt);
    }
    if &bytes[0..8] != magic {
        return Err(ContainerError::VersionMismatch { found: 0, expected: expected_version });
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != expected_version {
        return Err(ContainerError::VersionMismatch { found: version, expected: expected_version });
    }
    let (body, digest) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != digest {
        return Err(ContainerError::Corrupt);
    }
    let hlen = u64::from_le_bytes(bytes[12..20].try_into().unwrap()) as usize;
    if 20 + hlen > body.len() {
        return Err(ContainerError::Corrupt);
    }
    let header: serde_json::Value =
        serde_json::from_slice(&body[20..20 + hlen]).map_err(|_| ContainerError::Corrupt)?;
    let payload = body[20 + hlen..].to_vec();
    Ok((header, payload))
}

pub(crate) fn f64s_to_le_bytes(values: &[f64], out: &mut Vec<u8>) {
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

pub(crate) fn f64s_from_le_bytes(bytes: &[u8]) -> Option<Vec<f64>> {
    if bytes.len() % 8 != 0 {
        return None;
    }
    Some(
        bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect(),
    )
}
