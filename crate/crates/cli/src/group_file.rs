//! The `.grp` text format: a `degree: <n>` line followed by one generator per
//! line in cycle notation. `#` starts a comment and blank lines are ignored.

use permkit_core::{GroupInput, Permutation};
use sha2::{Digest, Sha256};

/// A parsed group file.
#[derive(Clone, Debug)]
pub struct GroupFile {
    pub group: GroupInput,
    /// Normalized text: the degree line and each generator, no comments.
    pub canonical: String,
}

impl GroupFile {
    /// Hex SHA-256 of the canonical text.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical.as_bytes()))
    }
}

/// Parses group-file text. Errors carry the 1-based line number.
pub fn parse(text: &str) -> Result<GroupFile, String> {
    let mut degree: Option<usize> = None;
    let mut gens: Vec<Permutation> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        match degree {
            None => {
                let value = line
                    .strip_prefix("degree:")
                    .ok_or_else(|| format!("line {lineno}: expected `degree: <n>`, found `{line}`"))?
                    .trim();
                let n: usize = value
                    .parse()
                    .map_err(|_| format!("line {lineno}: degree `{value}` is not a positive integer"))?;
                if n == 0 {
                    return Err(format!("line {lineno}: degree must be at least 1"));
                }
                degree = Some(n);
            }
            Some(n) => {
                let g = Permutation::parse_cycles(line, n).map_err(|e| format!("line {lineno}: {e}"))?;
                gens.push(g);
            }
        }
    }
    let n = degree.ok_or("missing `degree: <n>` line")?;
    if gens.is_empty() {
        return Err("no generator lines; write `()` for the trivial group".into());
    }
    let mut canonical = format!("degree: {n}\n");
    for g in &gens {
        canonical.push_str(&g.to_string());
        canonical.push('\n');
    }
    let group = GroupInput::new(n, gens).map_err(|e| e.to_string())?;
    Ok(GroupFile { group, canonical })
}
