//! `--config` handling: the JSON object is expanded into flags placed before the user's own,
//! so explicit flags win.

use std::ffi::OsString;
use std::path::PathBuf;

use serde_json::Value;

use crate::error::CliError;

/// Removes `--config <path>` / `--config=<path>` and returns the path.
fn take_config(args: &mut Vec<OsString>) -> Result<Option<PathBuf>, CliError> {
    let mut found = None;
    let mut i = 0;
    while i < args.len() {
        let arg = args[i].to_string_lossy().into_owned();
        if arg == "--config" {
            if i + 1 >= args.len() {
                return Err(CliError::Usage("--config needs a path".into()));
            }
            found = Some(PathBuf::from(args.remove(i + 1)));
            args.remove(i);
        } else if let Some(path) = arg.strip_prefix("--config=") {
            found = Some(PathBuf::from(path));
            args.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(found)
}

fn flags_from(path: &PathBuf) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("--config {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("--config {}: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(CliError::Validation(format!(
            "--config {}: expected a flat JSON object",
            path.display()
        )));
    };
    let mut out = Vec::new();
    for (key, value) in map {
        let flag = format!("--{}", key.trim_start_matches('-').replace('_', "-"));
        match value {
            Value::Bool(true) => out.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => out.push(format!("{flag}={n}").into()),
            Value::String(s) => out.push(format!("{flag}={s}").into()),
            Value::Array(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                out.push(format!("{flag}={}", parts.join(",")).into());
            }
            Value::Object(_) => {
                return Err(CliError::Validation(format!(
                    "--config {}: key `{key}` must not be an object",
                    path.display()
                )))
            }
        }
    }
    Ok(out)
}

/// Arguments with the config file's flags spliced in after the subcommand path.
pub fn expand(mut args: Vec<OsString>) -> Result<(Vec<OsString>, Option<PathBuf>), CliError> {
    let Some(path) = take_config(&mut args)? else {
        return Ok((args, None));
    };
    let flags = flags_from(&path)?;
    // program name plus up to two subcommand tokens
    let mut split = 1;
    while split < args.len() && split < 3 && !args[split].to_string_lossy().starts_with('-') {
        split += 1;
    }
    let mut out: Vec<OsString> = args[..split].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[split..]);
    Ok((out, Some(path)))
}
