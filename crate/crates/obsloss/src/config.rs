//! Flat key=value configuration files: one key per line, `#` comments,
//! blank lines ignored. Keys mirror the command-line flag names; flags take
//! precedence over file values.

use std::collections::BTreeMap;

use crate::ObsError;

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, ObsError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ObsError::invalid_parameter(format!(
                "config line {}: expected key=value, got {raw:?}",
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}
