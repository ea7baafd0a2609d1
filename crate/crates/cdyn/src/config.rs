//! `key=value` config files.
//!
//! Each line becomes `--key value` (or `-k value` for one-letter keys) and is
//! spliced in right after the subcommand, so flags given on the command line
//! come later and win. `key=true` becomes a bare flag and `key=false` is
//! dropped. Blank lines and lines starting with `#` are ignored.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Subcommands that take a second subcommand word.
const NESTED: [&str; 2] = ["measure", "disc"];

pub fn parse_config(text: &str) -> CliResult<Vec<OsString>> {
    let mut args = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::parse(format!("config line {}: expected key=value", lineno + 1)))?;
        let key = key.trim().trim_start_matches('-');
        let value = value.trim();
        if key.is_empty() {
            return Err(CliError::parse(format!("config line {}: empty key", lineno + 1)));
        }
        let flag = if key.chars().count() == 1 {
            format!("-{key}")
        } else {
            format!("--{key}")
        };
        match value {
            "false" => {}
            "true" => args.push(flag.into()),
            _ => {
                args.push(flag.into());
                args.push(value.into());
            }
        }
    }
    Ok(args)
}

/// Removes `--config PATH` from `argv` and splices the file's flags in after
/// the subcommand words.
pub fn expand_args(argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        match a.to_str() {
            Some("--config") => {
                let p = it
                    .next()
                    .ok_or_else(|| CliError::parse("--config needs a path"))?;
                path = Some(p);
            }
            Some(s) if s.starts_with("--config=") => path = Some(s["--config=".len()..].into()),
            _ => rest.push(a),
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let extra = load(Path::new(&path))?;
    let mut at = 1.min(rest.len());
    if let Some(cmd) = rest.get(at).and_then(|a| a.to_str()).filter(|s| !s.starts_with('-')) {
        at += 1;
        if NESTED.contains(&cmd) && rest.get(at).and_then(|a| a.to_str()).is_some_and(|s| !s.starts_with('-')) {
            at += 1;
        }
    }
    rest.splice(at..at, extra);
    Ok(rest)
}

fn load(path: &Path) -> CliResult<Vec<OsString>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn lines_to_flags() {
        let args = parse_config("# comment\np = -1,0,1\n\nseed=7\npgm-raw=true\nquiet=false\n").unwrap();
        assert_eq!(args, os(&["-p", "-1,0,1", "--seed", "7", "--pgm-raw"]));
        assert!(parse_config("novalue").is_err());
    }

    #[test]
    fn spliced_after_nested_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "n=4\nseed=1\n").unwrap();
        let argv = os(&["cdyn", "--config", path.to_str().unwrap(), "measure", "cesaro-massgap", "-n", "6"]);
        let out = expand_args(argv).unwrap();
        assert_eq!(out, os(&["cdyn", "measure", "cesaro-massgap", "-n", "4", "--seed", "1", "-n", "6"]));
    }

    #[test]
    fn untouched_without_config() {
        let argv = os(&["cdyn", "classify", "-p", "0,0,1"]);
        assert_eq!(expand_args(argv.clone()).unwrap(), argv);
    }
}
