//! Run manifests: every command records what it wrote and under which
//! configuration digest.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use lqg_infodesign_core::montecarlo::fnv1a64;

use crate::error::CliResult;

pub struct RunManifest {
    pub command: &'static str,
    pub config_hash: String,
    pub seed: u64,
    pub anchor: Option<&'static str>,
    pub output_files: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &'static str, canonical_config: &str, seed: u64) -> Self {
        Self {
            command,
            config_hash: format!("{:016x}", fnv1a64(canonical_config.as_bytes())),
            seed,
            anchor: None,
            output_files: Vec::new(),
        }
    }

    pub fn record(&mut self, file: &str) {
        self.output_files.push(file.to_string());
    }

    /// Serialize and write `manifest.json` into `out_dir`. Must be called
    /// after the listed files exist.
    pub fn write(&self, out_dir: &Path) -> CliResult<()> {
        let mut obj = serde_json::Map::new();
        obj.insert("command".into(), self.command.into());
        obj.insert("configHash".into(), self.config_hash.clone().into());
        obj.insert("seed".into(), self.seed.into());
        obj.insert(
            "toolVersion".into(),
            env!("CARGO_PKG_VERSION").into(),
        );
        obj.insert("timestamp".into(), iso8601_utc_now().into());
        if let Some(anchor) = self.anchor {
            obj.insert("anchor".into(), anchor.into());
        }
        obj.insert(
            "outputFiles".into(),
            serde_json::Value::Array(
                self.output_files
                    .iter()
                    .map(|f| serde_json::Value::String(f.clone()))
                    .collect(),
            ),
        );
        let text = serde_json::to_string_pretty(&serde_json::Value::Object(obj))
            .expect("manifest serialization cannot fail");
        std::fs::write(out_dir.join("manifest.json"), text + "\n")?;
        Ok(())
    }
}

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
pub fn iso8601_utc_now() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let days = (secs / 86_400) as i64;
    let (y, m, d) = civil_from_days(days);
    let rem = secs % 86_400;
    format!(
        "{y:04}-{m:02}-{d:02}T{:02}:{:02}:{:02}Z",
        rem / 3600,
        (rem % 3600) / 60,
        rem % 60
    )
}

/// Days-since-epoch to (year, month, day), proleptic Gregorian.
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}
