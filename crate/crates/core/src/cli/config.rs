use std::collections::BTreeMap;

const KEYS: [&str; 16] = [
    "z",
    "n",
    "n-max",
    "r-max",
    "samples",
    "exclusion",
    "format",
    "out",
    "normalize",
    "v",
    "mass",
    "t",
    "levels",
    "weights",
    "time-steps",
    "t-max",
];

/// Parses `key = value` lines. `#` starts a comment; blank lines are
/// ignored; underscores in keys are read as dashes.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(format!("config line {}: unknown key '{key}'", i + 1));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}
