//! Batch runs. A config has one job per line:
//!
//! ```text
//! # comment
//! fusion type=B rank=1..8 q=2,4,8
//! dseries-check type=D rank=2..8 dset=[2,4],[1,4]
//! ```
//!
//! `a..b` is an inclusive integer range and `x,y` a list; every combination
//! is one instance. A bracketed value is passed through as one argument.

use std::path::Path;

use blockatlas::{Error, Result};
use clap::error::ContextKind;
use clap::Parser;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{envelope, run, Cli, Command, GridArgs, Outcome};

/// One expanded job.
#[derive(Debug, Clone)]
pub struct Instance {
    pub line: usize,
    /// `command key=value ...` with concrete values.
    pub key: String,
    pub command: Command,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits on commas outside brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn expand_value(raw: &str, line: usize, column: usize) -> Result<Vec<String>> {
    let mut values = Vec::new();
    for item in split_top_level(raw) {
        if item.is_empty() {
            return Err(parse_error(line, column, format!("empty item in `{raw}`")));
        }
        if let Some(inner) = item.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| parse_error(line, column, format!("unbalanced brackets in `{item}`")))?;
            values.push(inner.to_string());
        } else if let Some((a, b)) = item.split_once("..") {
            let bound = |s: &str| {
                s.parse::<i64>()
                    .map_err(|_| parse_error(line, column, format!("bad range bound `{s}`")))
            };
            let (a, b) = (bound(a)?, bound(b)?);
            if a > b {
                return Err(parse_error(line, column, format!("empty range `{item}`")));
            }
            values.extend((a..=b).map(|x| x.to_string()));
        } else {
            values.push(item.to_string());
        }
    }
    Ok(values)
}

/// Parses and expands a config, checking every instance's arguments.
pub fn parse_config(text: &str) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut offset = 0;
        for tok in content.split_whitespace() {
            let at = content[offset..].find(tok).expect("token comes from the line") + offset;
            offset = at + tok.len();
            tokens.push((content[..at].chars().count() + 1, tok));
        }
        let Some(&(cmd_col, cmd)) = tokens.first() else {
            continue;
        };
        if cmd == "grid" {
            return Err(parse_error(line, cmd_col, "grid jobs cannot nest"));
        }
        let mut axes: Vec<(usize, &str, Vec<String>)> = Vec::new();
        for &(col, tok) in &tokens[1..] {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| parse_error(line, col, format!("expected key=value, found `{tok}`")))?;
            if k.is_empty() || axes.iter().any(|(_, seen, _)| *seen == k) {
                return Err(parse_error(line, col, format!("missing or repeated key in `{tok}`")));
            }
            axes.push((col, k, expand_value(v, line, col + k.len() + 1)?));
        }
        let mut combos: Vec<Vec<&str>> = vec![vec![]];
        for (_, _, values) in &axes {
            combos = combos
                .iter()
                .flat_map(|c| {
                    values.iter().map(move |v| {
                        let mut c = c.clone();
                        c.push(v.as_str());
                        c
                    })
                })
                .collect();
        }
        for combo in combos {
            let mut argv = vec!["blockatlas".to_string(), cmd.to_string()];
            let mut key = cmd.to_string();
            for ((_, k, _), v) in axes.iter().zip(&combo) {
                argv.push(format!("--{k}"));
                argv.push(v.to_string());
                key.push_str(&format!(" {k}={v}"));
            }
            let cli = Cli::try_parse_from(&argv).map_err(|e| {
                let column = e
                    .get(ContextKind::InvalidArg)
                    .map(|a| a.to_string())
                    .and_then(|a| {
                        let name = a.trim_start_matches('-').split([' ', '=']).next().unwrap_or("").to_string();
                        axes.iter().find(|(_, k, _)| *k == name).map(|(c, _, _)| *c)
                    })
                    .unwrap_or(cmd_col);
                let msg = e.to_string();
                let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
                parse_error(line, column, format!("`{key}`: {first}"))
            })?;
            out.push(Instance {
                line,
                key,
                command: cli.command,
            });
        }
    }
    Ok(out)
}

fn run_instances(instances: &[Instance], data: Option<&Path>) -> Vec<(usize, String, Outcome)> {
    // par_iter().collect() keeps input order, so the merge is by position in
    // the expanded config, not by completion.
    instances
        .par_iter()
        .map(|inst| (inst.line, inst.key.clone(), run(&inst.command, data)))
        .collect()
}

pub fn run_grid(args: &GridArgs, data: Option<&Path>, inputs: Value) -> Outcome {
    let result = (|| {
        let text = std::fs::read_to_string(&args.config)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", args.config.display())))?;
        let instances = parse_config(&text)?;
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = args.threads {
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        Ok(pool.install(|| run_instances(&instances, data)))
    })();
    let finished = match result {
        Ok(f) => f,
        Err(e) => return envelope("grid", inputs, &Err(e)),
    };
    let code = finished.iter().map(|(_, _, o)| o.code).max().unwrap_or(0);
    let failed = finished.iter().filter(|(_, _, o)| o.code != 0).count();
    let rows: Vec<Value> = finished
        .into_iter()
        .map(|(line, key, o)| {
            let mut row = json!({ "line": line, "key": key, "exit_code": o.code, "status": o.report["status"] });
            match o.report.get("result") {
                Some(r) => row["result"] = r.clone(),
                None => row["error"] = o.report["error"].clone(),
            }
            row
        })
        .collect();
    let mut out = envelope(
        "grid",
        inputs,
        &Ok(json!({ "total": rows.len(), "failed": failed, "instances": rows })),
    );
    out.code = code;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expands_ranges_and_lists() {
        let inst = parse_config("fusion type=B rank=1..3 q=2,4\n").unwrap();
        assert_eq!(inst.len(), 6);
        assert_eq!(inst[0].key, "fusion type=B rank=1 q=2");
        assert_eq!(inst[1].key, "fusion type=B rank=1 q=4");
        assert_eq!(inst[5].key, "fusion type=B rank=3 q=4");
    }

    #[test]
    fn brackets_pass_lists_through() {
        let inst = parse_config("# header\n\ndseries-check type=D rank=4 dset=[2,4],[1,4]  # trailing\n").unwrap();
        assert_eq!(inst.len(), 2);
        assert_eq!(inst[0].line, 3);
        assert_eq!(inst[1].key, "dseries-check type=D rank=4 dset=1,4");
        match &inst[1].command {
            Command::DseriesCheck(a) => assert_eq!(a.dset, vec![1, 4]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let pos = |text: &str| match parse_config(text) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(pos("zsygmondy q=2 d=3\nzsygmondy q=2 d\n"), (2, 15));
        assert_eq!(pos("fusion type=B rank=3..1 q=2"), (1, 20));
        assert_eq!(pos("  frobnicate x=1"), (1, 3));
        assert_eq!(pos("fusion type=B rank=2 q=2 colour=red"), (1, 26));
        assert_eq!(pos("grid config=x"), (1, 1));
        assert_eq!(pos("zsygmondy q=2 q=3"), (1, 15));
    }
}
