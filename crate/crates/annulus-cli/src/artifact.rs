//! Artifact conventions shared by every subcommand: a provenance header
//! (tool version, seed, config hash) and atomic file writes.

use std::path::Path;

use annulus::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 64-bit FNV-1a over the canonical textual form of a config.
pub fn config_hash(config_repr: &str) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in config_repr.bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

/// The provenance lines embedded in every artifact.
pub fn provenance(seed: u64, config_repr: &str) -> Vec<String> {
    vec![
        format!("tool_version: {TOOL_VERSION}"),
        format!("seed: {seed}"),
        format!("config_hash: {}", config_hash(config_repr)),
    ]
}

/// Provenance as `# `-prefixed CSV comment lines.
pub fn comment_block(seed: u64, config_repr: &str) -> String {
    provenance(seed, config_repr)
        .iter()
        .map(|l| format!("# {l}\n"))
        .collect()
}

/// Write via a temporary sibling file and rename, so readers never observe
/// a partially written artifact.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
