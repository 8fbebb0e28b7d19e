//! On-disk scan progress.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ScanError, ScanState};
use crate::semigroup::GapRecord;

/// Progress of a scan through `x_next − 1`. `checksum` is the SHA-256 of the
/// JSON encoding of every other field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config_hash: String,
    pub x_next: u64,
    pub partial_histogram: Option<Vec<u64>>,
    pub violations: Vec<GapRecord>,
    pub gap_count: u64,
    #[serde(with = "crate::real::opt")]
    pub gap_min: Option<f64>,
    #[serde(with = "crate::real::opt")]
    pub gap_max: Option<f64>,
    #[serde(default)]
    pub checksum: String,
}

impl Checkpoint {
    pub(crate) fn from_state(config_hash: &str, state: &ScanState) -> Self {
        let mut c = Self {
            config_hash: config_hash.to_string(),
            x_next: state.x_next,
            partial_histogram: state.histogram.clone(),
            violations: state.violations.clone(),
            gap_count: state.gap_count,
            gap_min: state.gap_min,
            gap_max: state.gap_max,
            checksum: String::new(),
        };
        c.checksum = c.digest();
        c
    }

    pub(crate) fn into_state(self) -> ScanState {
        ScanState {
            x_next: self.x_next,
            histogram: self.partial_histogram,
            violations: self.violations,
            gap_count: self.gap_count,
            gap_min: self.gap_min,
            gap_max: self.gap_max,
        }
    }

    fn digest(&self) -> String {
        let body = Self { checksum: String::new(), ..self.clone() };
        let json = serde_json::to_vec(&body).expect("checkpoint fields serialize");
        hex::encode(Sha256::digest(&json))
    }

    /// Reads `path`, rejecting corrupt files and files from other scans.
    pub fn load(path: &Path, expected_hash: &str) -> Result<Self, ScanError> {
        let bytes = fs::read(path)?;
        let c: Self =
            serde_json::from_slice(&bytes).map_err(|_| ScanError::ChecksumMismatch { path: path.to_path_buf() })?;
        if c.checksum != c.digest() {
            return Err(ScanError::ChecksumMismatch { path: path.to_path_buf() });
        }
        if c.config_hash != expected_hash {
            return Err(ScanError::ConfigMismatch {
                path: path.to_path_buf(),
                expected: expected_hash.to_string(),
                found: c.config_hash,
            });
        }
        Ok(c)
    }

    /// Writes to a sibling temp file and renames it over `path`.
    pub fn store(&self, path: &Path) -> Result<(), ScanError> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = Path::new(&tmp);
        {
            let mut f = fs::File::create(tmp)?;
            serde_json::to_writer(&mut f, self)?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(tmp, path)?;
        Ok(())
    }
}
