use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use loopkit::crypto::{decipher_stream, encipher_stream, key_schedule, CipherScheme, SchemeKind};
use loopkit::cycles::{cycle_census, rho_cycles};
use loopkit::mappings::{inner_group, mult_group, InnerFlavor};
use loopkit::perm::DEFAULT_CLOSURE_BOUND;
use loopkit::properties::{check_identity, PropertyReport};
use loopkit::search::{enumerate_loops, find_example, Catalog, Filter, SearchConfig};
use loopkit::verifier::{verify_catalog, verify_loops, StatementId, VerifyConfig};
use loopkit::{CheckResult, Exec, IdentityId, LoopError, LoopTable, Side};

#[derive(Parser)]
#[command(
    name = "loopkit",
    version,
    about = "Finite loop toolkit: identities, inner mappings, statement batteries, inverse cycles and toy ciphers"
)]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Exit with status 1 when a check fails
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads for enumeration and catalog runs (1 = sequential)
    #[arg(long, global = true, value_name = "J")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one identity on a table
    Check {
        file: PathBuf,
        #[arg(long, value_name = "TAG")]
        identity: IdentityId,
    },
    /// Report every identity, power associativity and universal WIP
    Props { file: PathBuf },
    /// Run a statement battery on a table or a saved catalog
    Verify {
        #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
        file: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        catalog: Option<PathBuf>,
        #[arg(long, value_name = "TAG")]
        statement: StatementId,
        /// Cap on materialized permutation groups
        #[arg(long, default_value_t = DEFAULT_CLOSURE_BOUND)]
        bound: usize,
    },
    /// Inverse cycles of a table, or the cycle census of a catalog
    Cycles {
        #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
        file: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        catalog: Option<PathBuf>,
    },
    /// Orders of the multiplication group and inner mapping groups
    Multgroup {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_BOUND)]
        bound: usize,
    },
    /// Enumerate canonical loops of one order
    Enumerate {
        #[arg(long, value_name = "N")]
        order: usize,
        /// Conjunction such as `OS2 & !LSIP`
        #[arg(long, value_name = "EXPR", default_value = "all")]
        filter: Filter,
        /// Save the catalog (tables plus manifest) here
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "K")]
        limit: Option<usize>,
        /// Print every table
        #[arg(long)]
        tables: bool,
        /// Disable partial-table pruning (results are identical)
        #[arg(long)]
        no_prefilter: bool,
    },
    /// First loop in enumeration order satisfying a conjunction
    Find {
        #[arg(long, value_name = "N")]
        max: usize,
        #[arg(long, value_name = "EXPR")]
        want: Filter,
    },
    /// Encipher or decipher element streams
    Crypto(CryptoArgs),
    /// Check an identity in every principal isotope
    Isotopes {
        file: PathBuf,
        #[arg(long, value_name = "TAG")]
        check: IdentityId,
    },
}

#[derive(Args)]
struct CryptoArgs {
    #[arg(value_enum)]
    direction: Direction,
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    #[arg(long, value_name = "FILE")]
    table: PathBuf,
    #[arg(long, value_name = "K")]
    key: String,
    /// Use keys along the inverse cycle of the key, one per element
    #[arg(long)]
    stream: bool,
    /// Walk the key cycle through λ instead of ρ
    #[arg(long, requires = "stream")]
    lambda: bool,
    /// Characters naming the elements 0..n-1
    #[arg(long, value_name = "STR")]
    alphabet: Option<String>,
    /// Message text (read from stdin when absent)
    #[arg(long)]
    input: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Encrypt,
    Decrypt,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Cip,
    Osborn,
}

/// A finished command: what to print and whether a check failed.
struct Output {
    json: Value,
    text: String,
    failed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        #[cfg(feature = "parallel")]
        {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build_global();
        }
    }
    let exec = match cli.jobs {
        Some(1) => Exec::Sequential,
        _ => Exec::Parallel,
    };
    match run(&cli.command, exec) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("values serialize") + "\n"
            } else {
                out.text
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().write_all(body.as_bytes());
            if cli.strict && out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_table(path: &Path) -> Result<LoopTable, LoopError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoopError::Parse {
        path: path.display().to_string(),
        line: 0,
        msg: e.to_string(),
    })?;
    LoopTable::parse(&text, &path.display().to_string())
}

fn check_json(r: &CheckResult) -> Value {
    json!({
        "holds": r.holds,
        "witness": r.witness,
        "triples_checked": r.triples_checked,
    })
}

fn verdict_text(r: &CheckResult) -> String {
    if r.holds {
        "holds".to_string()
    } else {
        format!("fails at {}", r.witness_text())
    }
}

fn run(cmd: &Command, exec: Exec) -> Result<Output, LoopError> {
    match cmd {
        Command::Check { file, identity } => {
            let l = read_table(file)?;
            let r = check_identity(&l, *identity);
            Ok(Output {
                json: json!({ "identity": identity, "result": check_json(&r) }),
                text: format!(
                    "{identity}: {} ({} tuples checked)\n",
                    verdict_text(&r),
                    r.triples_checked
                ),
                failed: !r.holds,
            })
        }
        Command::Props { file } => {
            let l = read_table(file)?;
            let report = PropertyReport::build(&l);
            Ok(Output {
                json: serde_json::to_value(&report)?,
                text: report.to_text(),
                failed: false,
            })
        }
        Command::Verify {
            file,
            catalog,
            statement,
            bound,
        } => {
            let cfg = VerifyConfig {
                bound: *bound,
                exec,
            };
            let report = match (file, catalog) {
                (_, Some(dir)) => verify_catalog(&Catalog::load(dir)?, *statement, &cfg),
                (Some(f), None) => verify_loops(&[read_table(f)?], *statement, &cfg),
                (None, None) => unreachable!("clap requires a table or a catalog"),
            };
            Ok(Output {
                json: serde_json::to_value(&report)?,
                text: report.to_text(),
                failed: !report.passed(),
            })
        }
        Command::Cycles { file, catalog } => match (file, catalog) {
            (_, Some(dir)) => {
                let cat = Catalog::load(dir)?;
                let census = cycle_census(&cat.loops);
                Ok(Output {
                    json: json!({ "catalog_digest": cat.digest, "census": census }),
                    text: format!("catalog digest: {}\n{}", cat.digest, census.to_text()),
                    failed: false,
                })
            }
            (Some(f), None) => {
                let l = read_table(f)?;
                let d = rho_cycles(&l);
                Ok(Output {
                    json: serde_json::to_value(&d)?,
                    text: d.to_text(),
                    failed: false,
                })
            }
            (None, None) => unreachable!("clap requires a table or a catalog"),
        },
        Command::Multgroup { file, bound } => {
            let l = read_table(file)?;
            let mult = mult_group(&l, *bound)?;
            let inn = mult.stabilizer(0);
            let mut orders = vec![("mult", mult.order()), ("inner", inn.order())];
            for (name, flavor) in [
                ("inner_rho", InnerFlavor::Rho),
                ("inner_lambda", InnerFlavor::Lambda),
                ("inner_mu", InnerFlavor::Mu),
            ] {
                orders.push((name, inner_group(&l, flavor, *bound)?.order()));
            }
            let mut text = String::new();
            let mut obj = serde_json::Map::new();
            obj.insert("degree".into(), json!(l.order()));
            text.push_str(&format!("degree {}\n", l.order()));
            for (name, order) in orders {
                obj.insert(name.into(), json!(order));
                text.push_str(&format!("{name} {order}\n"));
            }
            Ok(Output {
                json: Value::Object(obj),
                text,
                failed: false,
            })
        }
        Command::Enumerate {
            order,
            filter,
            out,
            limit,
            tables,
            no_prefilter,
        } => {
            let cfg = SearchConfig {
                prefilter: !no_prefilter,
                exec,
                ..SearchConfig::default()
            };
            let cat = enumerate_loops(*order, filter, *limit, &cfg)?;
            if let Some(dir) = out {
                cat.save(dir)?;
            }
            let m = cat.manifest();
            let mut text = format!(
                "order {}  filter {}  count {}  digest {}\n",
                order, m.filter, m.count, m.digest
            );
            let mut json = json!({ "manifest": m });
            if *tables {
                let rows: Vec<_> = cat.loops.iter().map(|l| l.rows()).collect();
                json["tables"] = json!(rows);
                for l in &cat.loops {
                    text.push('\n');
                    text.push_str(&l.to_text());
                }
            }
            Ok(Output {
                json,
                text,
                failed: false,
            })
        }
        Command::Find { max, want } => {
            let cfg = SearchConfig {
                exec,
                ..SearchConfig::default()
            };
            let found = find_example(*max, want, &cfg)?;
            Ok(match found {
                Some(l) => Output {
                    json: json!({
                        "want": want.to_string(),
                        "found": true,
                        "order": l.order(),
                        "digest": l.digest(),
                        "rows": l.rows(),
                    }),
                    text: format!(
                        "found order {} digest {}\n{}",
                        l.order(),
                        l.digest(),
                        l.to_text()
                    ),
                    failed: false,
                },
                None => Output {
                    json: json!({ "want": want.to_string(), "found": false }),
                    text: format!("no loop of order <= {max} satisfies {want}\n"),
                    failed: true,
                },
            })
        }
        Command::Crypto(args) => run_crypto(args),
        Command::Isotopes { file, check } => {
            let l = read_table(file)?;
            let n = l.order();
            let mut rows = Vec::new();
            let mut text = String::new();
            let mut failures = 0;
            for u in 0..n {
                for v in 0..n {
                    let r = check_identity(&l.principal_isotope(u, v), *check);
                    failures += usize::from(!r.holds);
                    text.push_str(&format!("u {u} v {v}: {}\n", verdict_text(&r)));
                    rows.push(json!({ "u": u, "v": v, "result": check_json(&r) }));
                }
            }
            text.push_str(&format!(
                "{check}: {} of {} isotopes fail\n",
                failures,
                n * n
            ));
            Ok(Output {
                json: json!({ "identity": check, "isotopes": rows, "failures": failures }),
                text,
                failed: failures > 0,
            })
        }
    }
}

const PROTOTYPE_NOTE: &str =
    "teaching prototype: single-element messages, no padding or chaining, no security claims";

fn run_crypto(args: &CryptoArgs) -> Result<Output, LoopError> {
    let l = read_table(&args.table)?;
    let n = l.order();
    let bad = |msg: String| LoopError::SchemeInvariantViolated(msg);
    let alphabet: Option<Vec<char>> = args.alphabet.as_ref().map(|s| s.chars().collect());
    if let Some(a) = &alphabet {
        if a.len() != n {
            return Err(bad(format!(
                "alphabet has {} characters but the table has order {n}",
                a.len()
            )));
        }
    }
    let decode = |tok: &str| -> Result<usize, LoopError> {
        match &alphabet {
            Some(a) => {
                let mut chars = tok.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => a
                        .iter()
                        .position(|&x| x == c)
                        .ok_or_else(|| bad(format!("`{c}` is not in the alphabet"))),
                    _ => Err(bad(format!("`{tok}` is not a single alphabet character"))),
                }
            }
            None => tok
                .parse::<usize>()
                .ok()
                .filter(|&v| v < n)
                .ok_or_else(|| bad(format!("`{tok}` is not an element index below {n}"))),
        }
    };
    let key = decode(&args.key)?;
    let input = match &args.input {
        Some(s) => s.clone(),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let tokens: Vec<String> = match &alphabet {
        Some(_) => input
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(String::from)
            .collect(),
        None => input.split_whitespace().map(String::from).collect(),
    };
    let msgs = tokens
        .iter()
        .map(|t| decode(t))
        .collect::<Result<Vec<_>, _>>()?;
    let kind = match args.scheme {
        SchemeArg::Cip => SchemeKind::Cip,
        SchemeArg::Osborn => SchemeKind::OsbornCi,
    };
    let scheme = CipherScheme::new(kind, &l, key)?;
    let encrypt = matches!(args.direction, Direction::Encrypt);
    let (out, schedule) = if args.stream {
        let side = if args.lambda { Side::Lambda } else { Side::Rho };
        let ks = key_schedule(&l, key, msgs.len().max(1), side);
        let out = if encrypt {
            encipher_stream(&scheme, &ks, &msgs)?
        } else {
            decipher_stream(&scheme, &ks, &msgs)?
        };
        (out, Some(ks))
    } else {
        let f = |m: &usize| {
            if encrypt {
                scheme.encipher(*m)
            } else {
                scheme.decipher(*m)
            }
        };
        (msgs.iter().map(f).collect(), None)
    };
    let rendered = match &alphabet {
        Some(a) => out.iter().map(|&v| a[v]).collect::<String>(),
        None => out
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    };
    let mut text = format!("{rendered}\n");
    let mut json = json!({
        "note": PROTOTYPE_NOTE,
        "scheme": kind.to_string(),
        "direction": if encrypt { "encrypt" } else { "decrypt" },
        "key": key,
        "input": msgs,
        "output": out,
        "rendered": rendered,
    });
    if let Some(ks) = schedule {
        if ks.reuse_warning {
            text.push_str(&format!(
                "warning: key cycle has period {} but {} keys were needed; keys repeat\n",
                ks.period,
                ks.stream.len()
            ));
        }
        json["schedule"] = serde_json::to_value(&ks)?;
    }
    text.push_str(&format!("note: {PROTOTYPE_NOTE}\n"));
    Ok(Output {
        json,
        text,
        failed: false,
    })
}
