use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary keystream: four little-endian u32 header words (n, m, L, count)
/// followed by `count` blocks of ceil(m/8) little-endian bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeystreamFile {
    pub n: u32,
    pub m: u32,
    pub register_length: u32,
    pub blocks: Vec<u32>,
}

fn block_bytes(m: u32) -> usize {
    (m as usize).div_ceil(8)
}

pub fn encode_keystream(file: &KeystreamFile) -> Result<Vec<u8>> {
    if file.m == 0 || file.m > 32 {
        return Err(Error::Keystream(format!(
            "block width {} outside 1..=32",
            file.m
        )));
    }
    let w = block_bytes(file.m);
    let mut out = Vec::with_capacity(16 + w * file.blocks.len());
    for h in [
        file.n,
        file.m,
        file.register_length,
        file.blocks.len() as u32,
    ] {
        out.extend_from_slice(&h.to_le_bytes());
    }
    for &z in &file.blocks {
        if file.m < 32 && z >> file.m != 0 {
            return Err(Error::Keystream(format!(
                "block {z:#x} wider than {} bits",
                file.m
            )));
        }
        out.extend_from_slice(&z.to_le_bytes()[..w]);
    }
    Ok(out)
}

pub fn decode_keystream(bytes: &[u8]) -> Result<KeystreamFile> {
    if bytes.len() < 16 {
        return Err(Error::Keystream(format!(
            "truncated header: {} of 16 bytes",
            bytes.len()
        )));
    }
    let word = |k: usize| u32::from_le_bytes(bytes[4 * k..4 * k + 4].try_into().unwrap());
    let (n, m, len, count) = (word(0), word(1), word(2), word(3));
    if m == 0 || m > 32 {
        return Err(Error::Keystream(format!("block width {m} outside 1..=32")));
    }
    let w = block_bytes(m);
    let body = &bytes[16..];
    let need = w * count as usize;
    if body.len() < need {
        return Err(Error::Keystream(format!(
            "truncated keystream: header announces {count} blocks ({need} bytes), {} present",
            body.len()
        )));
    }
    if body.len() > need {
        return Err(Error::Keystream(format!(
            "{} trailing bytes",
            body.len() - need
        )));
    }
    let mut blocks = Vec::with_capacity(count as usize);
    for chunk in body.chunks(w) {
        let mut b = [0u8; 4];
        b[..w].copy_from_slice(chunk);
        let z = u32::from_le_bytes(b);
        if m < 32 && z >> m != 0 {
            return Err(Error::Keystream(format!(
                "block {z:#x} wider than {m} bits"
            )));
        }
        blocks.push(z);
    }
    Ok(KeystreamFile {
        n,
        m,
        register_length: len,
        blocks,
    })
}

pub fn write_keystream(path: &Path, file: &KeystreamFile) -> Result<()> {
    std::fs::write(path, encode_keystream(file)?)?;
    Ok(())
}

pub fn read_keystream(path: &Path) -> Result<KeystreamFile> {
    decode_keystream(&std::fs::read(path)?)
}
