//! TOML run configuration.
//!
//! ```toml
//! jobs = 4
//!
//! [generate]
//! treebank = "en_ewt-ud-test.conllu"
//! lang = "en"
//! seed = 42
//!
//! [probe.train]
//! b_dim = 128
//! ```
//!
//! Keys are the long flag names (either `b_dim` or `b-dim`). A value given
//! on the command line replaces the config value; boolean switches set in
//! the config cannot be turned off by flags.

use std::path::Path;

use clap::parser::ValueSource;
use clap::ArgMatches;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{usage, CliError};

const SECTIONS: [&str; 5] = ["generate", "stats", "score", "ttr", "probe"];

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub jobs: Option<usize>,
    table: toml::Table,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| e.message().to_owned())?;
        let jobs = match table.remove("jobs") {
            None => None,
            Some(toml::Value::Integer(n)) if n > 0 => Some(n as usize),
            Some(other) => return Err(format!("`jobs` must be a positive integer, found {other}")),
        };
        for (key, value) in &table {
            if !SECTIONS.contains(&key.as_str()) {
                return Err(format!("unknown section `{key}`"));
            }
            if !value.is_table() {
                return Err(format!("`{key}` must be a table"));
            }
        }
        Ok(ConfigFile { jobs, table })
    }

    fn section(&self, path: &[&str]) -> Option<&toml::Table> {
        let mut table = &self.table;
        for name in path {
            table = table.get(*name)?.as_table()?;
        }
        Some(table)
    }
}

/// Fill options absent from the command line with config values.
pub fn merge<T>(
    args: T,
    matches: &ArgMatches,
    cfg: Option<&ConfigFile>,
    path: &[&str],
) -> Result<T, CliError>
where
    T: Serialize + DeserializeOwned,
{
    let Some(section) = cfg.and_then(|c| c.section(path)) else {
        return Ok(args);
    };
    let name = path.join(".");
    let mut value = serde_json::to_value(&args).map_err(|e| usage(e.to_string()))?;
    let fields = value
        .as_object_mut()
        .expect("argument structs serialize to objects");
    for (key, v) in section {
        let id = key.replace('-', "_");
        if !fields.contains_key(&id) {
            return Err(usage(format!("unknown key `{key}` in [{name}]")));
        }
        if matches.value_source(&id) == Some(ValueSource::CommandLine) {
            continue;
        }
        let v = serde_json::to_value(v).map_err(|e| usage(format!("[{name}] {key}: {e}")))?;
        fields.insert(id, v);
    }
    serde_json::from_value(value).map_err(|e| usage(format!("[{name}]: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{Cli, Command, GenerateArgs};
    use clap::{CommandFactory, FromArgMatches};

    fn merged(argv: &[&str], cfg: &str) -> Result<GenerateArgs, CliError> {
        let matches = Cli::command().try_get_matches_from(argv).unwrap();
        let cli = Cli::from_arg_matches(&matches).unwrap();
        let Command::Generate(a) = cli.command else {
            panic!()
        };
        let cfg = ConfigFile::parse(cfg).map_err(usage)?;
        merge(
            a,
            matches.subcommand_matches("generate").unwrap(),
            Some(&cfg),
            &["generate"],
        )
    }

    #[test]
    fn flags_override_config() {
        let cfg =
            "[generate]\nseed = 7\nlang = \"de\"\nignore-deprels = true\nlexicon = [\"a.tsv\"]\n";
        let a = merged(&["spud", "generate", "--seed", "3"], cfg).unwrap();
        assert_eq!(a.seed, Some(3));
        assert_eq!(a.lang.as_deref(), Some("de"));
        assert!(a.ignore_deprels);
        assert_eq!(a.lexicon, [Path::new("a.tsv")]);
    }

    #[test]
    fn unknown_and_mistyped_keys_rejected() {
        assert!(merged(&["spud", "generate"], "[generate]\nsede = 1\n").is_err());
        assert!(merged(&["spud", "generate"], "[generate]\nseed = \"x\"\n").is_err());
        assert!(merged(&["spud", "generate"], "[genrate]\nseed = 1\n").is_err());
        assert!(ConfigFile::parse("jobs = 0").is_err());
    }

    #[test]
    fn nested_probe_sections() {
        let cfg = ConfigFile::parse("jobs = 2\n[probe.train]\nb_dim = 8\n").unwrap();
        assert_eq!(cfg.jobs, Some(2));
        assert!(cfg.section(&["probe", "train"]).is_some());
        assert!(cfg.section(&["probe", "eval"]).is_none());
    }
}
