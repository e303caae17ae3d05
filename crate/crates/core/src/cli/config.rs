//! `key = value` config files mirroring the long flags.
//!
//! ```text
//! # reference tanh wave
//! family = tanh
//! a = -1
//! lambda = 1
//! all-rows = true
//! ```
//!
//! Keys are long flag names (`_` and `-` are interchangeable); values may be
//! quoted. Flags given on the command line win over the file. Keys that the
//! selected subcommand does not accept are ignored, so one file can configure
//! several subcommands; keys no subcommand accepts are an error.

use std::collections::BTreeSet;

use clap::CommandFactory;

use super::Cli;

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected `key = value`, got `{raw}`", i + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        let v = v.trim();
        let v = v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v);
        out.push((key, v.to_string()));
    }
    Ok(out)
}

fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter();
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

fn long_names(cmd: &clap::Command) -> BTreeSet<String> {
    cmd.get_arguments().filter_map(|a| a.get_long().map(str::to_string)).collect()
}

fn all_long_names(cmd: &clap::Command, acc: &mut BTreeSet<String>) {
    acc.extend(long_names(cmd));
    for s in cmd.get_subcommands() {
        all_long_names(s, acc);
    }
}

/// Flags accepted after the subcommand path named in `argv`.
fn accepted(argv: &[String]) -> BTreeSet<String> {
    let root = Cli::command();
    let mut names = long_names(&root);
    let mut cmd = &root;
    for a in argv.iter().skip(1) {
        if a.starts_with('-') {
            continue;
        }
        match cmd.find_subcommand(a) {
            Some(sub) => {
                cmd = sub;
                names.extend(long_names(cmd));
            }
            None => continue,
        }
    }
    names
}

fn bool_flag(cmd: &clap::Command, name: &str) -> bool {
    let mut stack = vec![cmd];
    while let Some(c) = stack.pop() {
        if let Some(a) = c.get_arguments().find(|a| a.get_long() == Some(name)) {
            return !a.get_action().takes_values();
        }
        stack.extend(c.get_subcommands());
    }
    false
}

/// Append the config file's flags to `argv` (when `--config` is present).
pub fn merge_config(mut argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config file {path}: {e}"))?;
    let entries = parse_config(&text)?;
    let root = Cli::command();
    let mut known = BTreeSet::new();
    all_long_names(&root, &mut known);
    let accepted = accepted(&argv);
    let given: BTreeSet<String> = argv
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    for (key, value) in entries {
        if key == "config" {
            return Err("config files cannot include other config files".into());
        }
        if !known.contains(&key) {
            return Err(format!("unknown config key `{key}`"));
        }
        if !accepted.contains(&key) || given.contains(&key) {
            continue;
        }
        if bool_flag(&root, &key) {
            match value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => argv.push(format!("--{key}")),
                "false" | "no" | "0" => {}
                other => return Err(format!("config key `{key}` expects true or false, got `{other}`")),
            }
        } else {
            argv.push(format!("--{key}"));
            argv.push(value);
        }
    }
    Ok(argv)
}
