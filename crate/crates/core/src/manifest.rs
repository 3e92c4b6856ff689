//! Run manifests: what was run, with which configuration, and digests of
//! everything written.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    /// File name to SHA-256 of its contents.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn config(mut self, key: &str, value: impl ToString) -> Self {
        self.config.insert(key.to_string(), value.to_string());
        self
    }

    pub fn record(&mut self, name: &str, contents: &[u8]) {
        self.outputs.insert(name.to_string(), sha256_hex(contents));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn manifest_is_ordered() {
        let mut m = RunManifest::new("aset run")
            .config("budget", 3)
            .config("alpha", "w");
        m.record("b.json", b"x");
        m.record("a.json", b"y");
        let json = m.to_json();
        assert!(json.find("\"alpha\"").unwrap() < json.find("\"budget\"").unwrap());
        assert!(json.find("a.json").unwrap() < json.find("b.json").unwrap());
    }
}
