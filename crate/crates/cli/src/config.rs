//! Flat `key = value` config files merged under command-line flags.

use std::path::Path;

use clap::Command;

use crate::CliError;

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// keys are long flag names without the leading dashes.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "line {}: expected `key = value`",
                n + 1
            )));
        };
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() {
            return Err(CliError::Config(format!("line {}: empty key", n + 1)));
        }
        entries.push((key.to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

/// Finds the value of `--config` in raw arguments.
pub fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

fn given(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    args.iter()
        .any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

fn long_names(cmd: &Command) -> Vec<(String, bool)> {
    cmd.get_arguments()
        .filter_map(|a| {
            a.get_long()
                .map(|l| (l.to_string(), a.get_action().takes_values()))
        })
        .collect()
}

/// Rewrites `args` so that entries of the config file at `path` act as flags,
/// unless the same flag was already given on the command line.
pub fn merge(cmd: &Command, args: Vec<String>, path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let entries = parse(&text)?;

    let global = long_names(cmd);
    let sub_pos = args
        .iter()
        .position(|a| cmd.get_subcommands().any(|s| s.get_name() == a));
    let sub_args = sub_pos
        .and_then(|p| cmd.find_subcommand(&args[p]))
        .map(long_names)
        .unwrap_or_default();
    let known_anywhere = |key: &str| {
        global.iter().any(|(k, _)| k == key)
            || cmd
                .get_subcommands()
                .any(|s| long_names(s).iter().any(|(k, _)| k == key))
    };

    let mut leading = Vec::new();
    let mut trailing = Vec::new();
    for (key, value) in entries {
        if key == "config" || given(&args, &key) {
            continue;
        }
        let slot = if let Some((_, takes)) = sub_args.iter().find(|(k, _)| *k == key) {
            Some((&mut trailing, *takes))
        } else if let Some((_, takes)) = global.iter().find(|(k, _)| *k == key) {
            Some((&mut leading, *takes))
        } else if known_anywhere(&key) {
            None
        } else {
            return Err(CliError::Config(format!("unknown key `{key}`")));
        };
        if let Some((target, takes_value)) = slot {
            if takes_value {
                target.push(format!("--{key}={value}"));
            } else if value
                .parse::<bool>()
                .map_err(|_| CliError::Config(format!("`{key}` expects true or false")))?
            {
                target.push(format!("--{key}"));
            }
        }
    }

    let mut out = Vec::with_capacity(args.len() + leading.len() + trailing.len());
    let split = sub_pos.map_or(args.len(), |p| p + 1);
    out.push(args[0].clone());
    out.extend(leading);
    out.extend(args[1..split].iter().cloned());
    out.extend(trailing);
    out.extend(args[split..].iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_dashes() {
        let e = parse("# sweep\nseed = 7\n--trials=20 # fewer\n\n").unwrap();
        assert_eq!(
            e,
            vec![("seed".into(), "7".into()), ("trials".into(), "20".into())]
        );
        assert!(parse("seed 7").is_err());
    }

    #[test]
    fn finds_config_flag() {
        let args: Vec<String> = ["rego", "verify", "--config=x.cfg"]
            .map(String::from)
            .to_vec();
        assert_eq!(config_path(&args).as_deref(), Some("x.cfg"));
    }
}
