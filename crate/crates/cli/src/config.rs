//! key=value config files and the DIOPH_WORKERS default.
//!
//! A config file is a list of `key = value` lines. `#` starts a comment.
//! Keys are flag names without the leading dashes (`x-min`, `N`, `kernel`).
//! Keys before any `[section]` header apply to every subcommand that accepts
//! them; keys under `[residual]` etc. apply to that subcommand only. Flag
//! switches take `true` or `false`.
//!
//! Precedence, lowest first: DIOPH_WORKERS, config file, command-line flags.
//! This works by splicing the file's settings into the argument list just
//! after the subcommand name, so a later flag overrides them.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgAction, Command, CommandFactory};

use crate::Cli;

pub const WORKERS_ENV: &str = "DIOPH_WORKERS";

#[derive(Debug, Clone, Default)]
pub struct Provenance {
    pub config_file: Option<PathBuf>,
    pub env_workers: Option<String>,
}

/// Returns the argument list with config-file and environment settings spliced
/// in, plus where they came from.
pub fn expand_args(args: Vec<OsString>) -> Result<(Vec<OsString>, Provenance)> {
    let root = Cli::command();
    let (config_path, sub_pos) = scan(&args, &root);
    let Some(sub_pos) = sub_pos else {
        return Ok((args, Provenance::default()));
    };
    let sub_name = args[sub_pos].to_string_lossy().into_owned();
    let sub = root
        .find_subcommand(&sub_name)
        .expect("scan only returns known subcommands");

    let mut injected: Vec<OsString> = Vec::new();
    let mut prov = Provenance::default();

    if let Ok(w) = std::env::var(WORKERS_ENV) {
        if takes_key(sub, "workers").is_some() {
            check_pair(&root, &sub_name, "workers", &w)
                .with_context(|| format!("{WORKERS_ENV}={w}"))?;
            injected.push("--workers".into());
            injected.push(w.clone().into());
            prov.env_workers = Some(w);
        }
    }

    if let Some(path) = config_path {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        for (key, value, line) in parse_config(&text, &path, &sub_name, &root)? {
            injected.extend(flag_for(sub, &key, &value, &path, line)?);
        }
        prov.config_file = Some(path);
    }

    let mut out = args[..=sub_pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[sub_pos + 1..]);
    Ok((out, prov))
}

/// Finds `--config PATH` and the position of the subcommand name.
fn scan(args: &[OsString], root: &Command) -> (Option<PathBuf>, Option<usize>) {
    let mut config = None;
    let mut sub = None;
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy();
        if a == "--config" {
            config = args.get(i + 1).map(PathBuf::from);
            i += 2;
            continue;
        }
        if let Some(p) = a.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        } else if sub.is_none() && root.find_subcommand(a.as_ref()).is_some() {
            sub = Some(i);
        }
        i += 1;
    }
    (config, sub)
}

fn takes_key<'a>(cmd: &'a Command, key: &str) -> Option<&'a clap::Arg> {
    cmd.get_arguments().find(|a| a.get_long() == Some(key))
}

/// (key, value, line) for every setting that applies to `sub_name`.
fn parse_config(
    text: &str,
    path: &Path,
    sub_name: &str,
    root: &Command,
) -> Result<Vec<(String, String, usize)>> {
    let mut section: Option<String> = None;
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let name = name.trim();
            if root.find_subcommand(name).is_none() {
                bail!("{}:{line}: unknown section [{name}]", path.display());
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| anyhow!("{}:{line}: expected key = value", path.display()))?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if key == "config" {
            bail!("{}:{line}: config files cannot include other config files", path.display());
        }
        match &section {
            Some(s) => {
                let cmd = root.find_subcommand(s).expect("checked above");
                if takes_key(cmd, &key).is_none() {
                    bail!("{}:{line}: [{s}] has no key {key:?}", path.display());
                }
                if s != sub_name {
                    continue;
                }
            }
            None => {
                if !root.get_subcommands().any(|c| takes_key(c, &key).is_some()) {
                    bail!("{}:{line}: unknown key {key:?}", path.display());
                }
                if takes_key(root.find_subcommand(sub_name).unwrap(), &key).is_none() {
                    continue;
                }
            }
        }
        check_pair(root, sub_name, &key, &value)
            .with_context(|| format!("{}:{line}", path.display()))?;
        out.push((key, value, line));
    }
    Ok(out)
}

fn flag_for(
    sub: &Command,
    key: &str,
    value: &str,
    path: &Path,
    line: usize,
) -> Result<Vec<OsString>> {
    let arg = takes_key(sub, key).expect("validated by parse_config");
    if matches!(arg.get_action(), ArgAction::SetTrue) {
        return match value {
            "true" => Ok(vec![format!("--{key}").into()]),
            "false" => Ok(vec![]),
            _ => bail!("{}:{line}: {key} takes true or false, got {value:?}", path.display()),
        };
    }
    Ok(vec![format!("--{key}").into(), value.into()])
}

/// Parses a single setting on its own so a bad value is reported with its line.
fn check_pair(root: &Command, sub_name: &str, key: &str, value: &str) -> Result<()> {
    let sub = root.find_subcommand(sub_name).expect("known subcommand");
    let arg = takes_key(sub, key).ok_or_else(|| anyhow!("unknown key {key:?}"))?;
    if matches!(arg.get_action(), ArgAction::SetTrue) {
        return Ok(());
    }
    let argv = ["dioph", sub_name, &format!("--{key}"), value];
    root.clone()
        .try_get_matches_from(argv)
        .map(|_| ())
        .map_err(|e| {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            anyhow!("{first}")
        })
}
