//! `key = value` config files. Entries become command-line flags appended
//! after the explicit ones, so explicit flags always win.

use std::path::Path;

use erfbp::ErfbpError;

pub fn parse(text: &str) -> Result<Vec<(String, String)>, ErfbpError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with('[') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ErfbpError::InvalidInput(format!("config line {}: expected key = value", n + 1)));
        };
        let key = k.trim().replace('_', "-");
        let value = v.trim().trim_matches('"').to_string();
        if key.is_empty() {
            return Err(ErfbpError::InvalidInput(format!("config line {}: empty key", n + 1)));
        }
        out.push((key, value));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn has_flag(args: &[String], flag: &str) -> bool {
    args.iter().any(|a| a == flag || a.starts_with(&format!("{flag}=")))
}

/// Merges the config file named by `--config` (if any) into `args`.
pub fn merge_args(args: Vec<String>) -> Result<Vec<String>, ErfbpError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| ErfbpError::InvalidInput(format!("cannot read config '{path}': {e}")))?;
    let mut merged = args.clone();
    for (key, value) in parse(&text)? {
        let flag = format!("--{key}");
        if has_flag(&args, &flag) {
            continue;
        }
        match value.as_str() {
            "true" => merged.push(flag),
            "false" => {}
            _ => {
                merged.push(flag);
                merged.push(value);
            }
        }
    }
    Ok(merged)
}
