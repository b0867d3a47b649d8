//! `nashforge`: compile CNF reductions, verify profiles, run the validators.
//!
//! Decision commands exit 0 for YES and 1 for NO. Usage, input and IO
//! problems exit 2 with a diagnostic on stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nashforge::equilibrium::{
    check_constrained, enumerate_pure_nash, is_nash, is_pareto_within, strong_check_desk,
    Constraint, StrongSearch, StrongVerdict,
};
use nashforge::game::{validate_game, GameDef, GraphicalGame};
use nashforge::oracle::{
    default_corpus, run_suite, sat_brute_force, Counterexample, CorpusEntry, SuiteConfig,
};
use nashforge::rational::{format_rational, parse_rational, zero, Rational};
use nashforge::reduction::{
    build_action_constrained_instance, build_another_nash_instance, build_gamma_scaled,
    build_gphi, build_payoff_constrained_instance, canonical_profile, parse_dimacs, CnfFormula,
    FEncoding, ReductionArtifacts, TruthAssignment,
};
use nashforge::strategy::{payoff_vector, ProfileDoc};
use nashforge::{Budget, Profile};

const BUDGET_ENV: &str = "NASHFORGE_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "nashforge", version, about = "Exact graphical games and CNF gadget reductions")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Seed for every random choice (corpus generation, sampling).
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Write the output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Enumeration budget; overrides NASHFORGE_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    Base,
    AnotherNash,
    Gamma,
    ActionConstrained,
    PayoffConstrained,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Encoding {
    S2ForFalse,
    S3ForFalse,
}

impl From<Encoding> for FEncoding {
    fn from(e: Encoding) -> Self {
        match e {
            Encoding::S2ForFalse => FEncoding::S2ForFalse,
            Encoding::S3ForFalse => FEncoding::S3ForFalse,
        }
    }
}

#[derive(clap::Args, Debug)]
struct ReduceArgs {
    /// DIMACS CNF file.
    cnf: PathBuf,
    #[arg(long, value_enum, default_value_t = Variant::Base)]
    variant: Variant,
    /// Scaling factor for `--variant gamma`.
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    gamma: String,
    /// Target payoff of E for `--variant payoff-constrained`.
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    alpha: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a CNF formula into a gadget game.
    Reduce(ReduceArgs),
    /// Canonical equilibrium of a truth assignment.
    Canonical {
        #[command(flatten)]
        reduce: ReduceArgs,
        /// Truth values of X1, X2, ... as a string over T/F (or 1/0).
        /// Variables added by padding are set true.
        assignment: String,
        #[arg(long, value_enum, default_value_t = Encoding::S3ForFalse)]
        encoding: Encoding,
    },
    /// Exact Nash check. Accepts a counterexample bundle in place of the
    /// game when the profile is omitted.
    Verify {
        game: PathBuf,
        profile: Option<PathBuf>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        epsilon: String,
    },
    /// All pure Nash equilibria (YES if there is at least one).
    EnumeratePure { game: PathBuf },
    /// Constrained Nash check against a constraints file.
    Check {
        game: PathBuf,
        profile: PathBuf,
        constraints: PathBuf,
    },
    /// Whether a Nash profile is Pareto within a candidate set.
    Pareto {
        game: PathBuf,
        profile: PathBuf,
        candidates: PathBuf,
    },
    /// Bounded coalition search; YES when no improving deviation was found.
    Strong {
        game: PathBuf,
        profile: PathBuf,
        /// Profiles tried as grand-coalition deviations.
        candidates: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        max_coalition_size: usize,
        /// Search the 1/d grid of joint deviations instead of pure ones.
        #[arg(long)]
        grid_denominator: Option<u32>,
    },
    /// Run every validator over the default corpus or the given formulas.
    Validate {
        /// DIMACS files; the default corpus when empty.
        cnf: Vec<PathBuf>,
        /// Only the first N corpus entries.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value_t = 4)]
        grid_denominator: u32,
        #[arg(long, default_value = "2")]
        alpha: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        gammas: Vec<String>,
        /// Random profiles per instance and scaling factor.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Brute-force satisfiability.
    Sat { cnf: PathBuf },
}

struct Outcome {
    yes: bool,
    json: Value,
    human: String,
}

impl Outcome {
    fn new(yes: bool, json: Value, human: impl Into<String>) -> Self {
        Self {
            yes,
            json,
            human: human.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|out| emit(&cli, &out).map(|()| out.yes)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, out: &Outcome) -> Result<()> {
    let mut text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.json)?,
        Format::Human => out.human.clone(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn budget(cli: &Cli) -> Result<Budget> {
    let value = match cli.budget {
        Some(b) => Some(b),
        None => match std::env::var(BUDGET_ENV) {
            Ok(s) => Some(
                s.trim()
                    .parse::<u64>()
                    .with_context(|| format!("{BUDGET_ENV}={s:?} is not a count"))?,
            ),
            Err(_) => None,
        },
    };
    match value {
        Some(0) => bail!("budget must be positive"),
        Some(b) => Ok(Budget::new(b)),
        None => Ok(Budget::default()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn rational(text: &str, what: &str) -> Result<Rational> {
    parse_rational(text).with_context(|| format!("--{what}"))
}

fn load_cnf(path: &Path) -> Result<CnfFormula> {
    parse_dimacs(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn game_from_def(def: &GameDef, origin: &str) -> Result<GraphicalGame> {
    let report = validate_game(def);
    if !report.is_empty() {
        bail!("{origin} is not a valid game:\n{report}");
    }
    GraphicalGame::from_def(def).with_context(|| origin.to_string())
}

fn load_game(path: &Path) -> Result<GraphicalGame> {
    let def: GameDef = serde_json::from_value(read_json(path)?)
        .with_context(|| format!("{} is not a game document", path.display()))?;
    game_from_def(&def, &path.display().to_string())
}

fn profile_from_value(game: &GraphicalGame, value: Value, origin: &str) -> Result<Profile> {
    let doc: ProfileDoc =
        serde_json::from_value(value).with_context(|| format!("{origin} is not a profile"))?;
    Profile::from_doc(game, &doc).with_context(|| origin.to_string())
}

fn load_profile(game: &GraphicalGame, path: &Path) -> Result<Profile> {
    profile_from_value(game, read_json(path)?, &path.display().to_string())
}

/// A JSON array of profiles, or an object holding one under `"candidates"`.
fn load_candidates(game: &GraphicalGame, path: &Path) -> Result<Vec<Profile>> {
    let origin = path.display().to_string();
    let list = match read_json(path)? {
        Value::Array(items) => items,
        Value::Object(mut map) => match map.remove("candidates") {
            Some(Value::Array(items)) => items,
            _ => bail!("{origin}: expected an array of profiles"),
        },
        _ => bail!("{origin}: expected an array of profiles"),
    };
    list.into_iter()
        .enumerate()
        .map(|(i, v)| profile_from_value(game, v, &format!("{origin} candidate {i}")))
        .collect()
}

/// A JSON array of constraints, or an object with a `"constraints"` field
/// (so a `reduce` artifact can be passed directly).
fn load_constraints(path: &Path) -> Result<Vec<Constraint>> {
    let origin = path.display().to_string();
    let value = match read_json(path)? {
        Value::Object(mut map) => map.remove("constraints").unwrap_or(Value::Array(vec![])),
        other => other,
    };
    serde_json::from_value(value).with_context(|| format!("{origin} is not a constraint list"))
}

fn parse_assignment(text: &str) -> Result<TruthAssignment> {
    let values = text
        .chars()
        .filter(|c| !matches!(c, ',' | ' '))
        .map(|c| match c {
            'T' | 't' | '1' => Ok(true),
            'F' | 'f' | '0' => Ok(false),
            other => bail!("assignment character {other:?} is not T/F/1/0"),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruthAssignment::new(values))
}

fn build(args: &ReduceArgs) -> Result<(ReductionArtifacts, Vec<Constraint>)> {
    let cnf = load_cnf(&args.cnf)?;
    Ok(match args.variant {
        Variant::Base => (build_gphi(&cnf)?, vec![]),
        Variant::AnotherNash => (build_another_nash_instance(&cnf)?, vec![]),
        Variant::Gamma => {
            let gamma = rational(&args.gamma, "gamma")?;
            (build_gamma_scaled(&build_gphi(&cnf)?, &gamma)?, vec![])
        }
        Variant::ActionConstrained => {
            let (art, c) = build_action_constrained_instance(&cnf)?;
            (art, vec![c])
        }
        Variant::PayoffConstrained => {
            let alpha = rational(&args.alpha, "alpha")?;
            let (art, c) = build_payoff_constrained_instance(&cnf, &alpha)?;
            (art, vec![c])
        }
    })
}

fn profile_json(game: &GraphicalGame, profile: &Profile) -> Value {
    serde_json::to_value(profile.to_doc(game)).expect("profile serializes")
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Reduce(args) => {
            let (art, constraints) = build(args)?;
            let doc = art.to_doc(&constraints);
            let json = serde_json::to_value(&doc)?;
            let human = art.to_json(&constraints);
            Ok(Outcome::new(true, json, human))
        }
        Command::Canonical {
            reduce,
            assignment,
            encoding,
        } => {
            let (art, _) = build(reduce)?;
            let given = parse_assignment(assignment)?;
            if given.len() > art.cnf.num_vars() {
                bail!(
                    "assignment has {} values, the padded formula has {} variables",
                    given.len(),
                    art.cnf.num_vars()
                );
            }
            let sigma = given.extend_to(art.cnf.num_vars());
            let x = canonical_profile(&art, &sigma, (*encoding).into())?;
            let json = profile_json(&art.game, &x);
            Ok(Outcome::new(true, json.clone(), serde_json::to_string_pretty(&json)?))
        }
        Command::Verify {
            game,
            profile,
            epsilon,
        } => {
            let epsilon = rational(epsilon, "epsilon")?;
            if epsilon < zero() {
                bail!("--epsilon must be non-negative");
            }
            let (g, x) = match profile {
                Some(p) => {
                    let g = load_game(game)?;
                    let x = load_profile(&g, p)?;
                    (g, x)
                }
                None => {
                    let origin = game.display().to_string();
                    let bundle: Counterexample = serde_json::from_value(read_json(game)?)
                        .with_context(|| format!("{origin}: no profile given and not a counterexample bundle"))?;
                    let g = game_from_def(&bundle.game, &origin)?;
                    let x = Profile::from_doc(&g, &bundle.profile).with_context(|| origin.clone())?;
                    (g, x)
                }
            };
            let report = is_nash(&g, &x, &epsilon)?;
            let mut human = format!(
                "{} (epsilon {})",
                if report.is_equilibrium { "NASH" } else { "NOT NASH" },
                format_rational(&epsilon)
            );
            if let Some(w) = &report.worst {
                human += &format!(
                    "\nworst regret {} for {} (deviate to {})",
                    format_rational(&w.regret),
                    w.player,
                    w.witness.as_deref().unwrap_or("-")
                );
            }
            Ok(Outcome::new(report.is_equilibrium, serde_json::to_value(&report)?, human))
        }
        Command::EnumeratePure { game } => {
            let g = load_game(game)?;
            let found = enumerate_pure_nash(&g, &budget(cli)?)?;
            let docs: Vec<Value> = found.iter().map(|x| profile_json(&g, x)).collect();
            let mut human = format!("{} pure Nash equilibria", found.len());
            for x in &found {
                let line: Vec<String> = g
                    .ids()
                    .map(|p| {
                        let a = x.get(p).and_then(|s| s.pure_action()).expect("pure profile");
                        format!("{}={}", g.name(p), g.player(p).actions[a])
                    })
                    .collect();
                human += &format!("\n  {}", line.join(" "));
            }
            Ok(Outcome::new(
                !found.is_empty(),
                json!({ "count": found.len(), "equilibria": docs }),
                human,
            ))
        }
        Command::Check {
            game,
            profile,
            constraints,
        } => {
            let g = load_game(game)?;
            let x = load_profile(&g, profile)?;
            let cs = load_constraints(constraints)?;
            let report = check_constrained(&g, &x, &cs)?;
            let mut human = format!(
                "{}  (Nash: {})",
                if report.is_constrained_equilibrium {
                    "CONSTRAINED NASH"
                } else {
                    "NOT CONSTRAINED NASH"
                },
                report.nash.is_equilibrium
            );
            for (c, ok) in cs.iter().zip(&report.satisfied) {
                human += &format!("\n  {c}: {}", if *ok { "holds" } else { "fails" });
            }
            Ok(Outcome::new(
                report.is_constrained_equilibrium,
                serde_json::to_value(&report)?,
                human,
            ))
        }
        Command::Pareto {
            game,
            profile,
            candidates,
        } => {
            let g = load_game(game)?;
            let x = load_profile(&g, profile)?;
            let ys = load_candidates(&g, candidates)?;
            let verdict = is_pareto_within(&g, &x, &ys)?;
            let pays = |p: &Profile| -> Result<Vec<String>> {
                Ok(payoff_vector(&g, p)?.iter().map(format_rational).collect())
            };
            let mut json = json!({
                "pareto": verdict.pareto,
                "candidates": ys.len(),
                "payoffs": pays(&x)?,
            });
            let human = match verdict.dominating {
                Some(i) => {
                    json["dominating"] = json!({
                        "index": i,
                        "profile": profile_json(&g, &ys[i]),
                        "payoffs": pays(&ys[i])?,
                    });
                    format!("NOT PARETO: candidate {i} gives every player strictly more")
                }
                None => format!("PARETO within {} candidates", ys.len()),
            };
            Ok(Outcome::new(verdict.pareto, json, human))
        }
        Command::Strong {
            game,
            profile,
            candidates,
            max_coalition_size,
            grid_denominator,
        } => {
            let g = load_game(game)?;
            let x = load_profile(&g, profile)?;
            if *max_coalition_size == 0 {
                bail!("--max-coalition-size must be positive");
            }
            if *grid_denominator == Some(0) {
                bail!("--grid-denominator must be positive");
            }
            let seeds = match candidates {
                Some(path) => load_candidates(&g, path)?,
                None => vec![],
            };
            let search = StrongSearch {
                max_coalition_size: *max_coalition_size,
                grid_denominator: *grid_denominator,
                seeds,
                budget: budget(cli)?,
            };
            let report = strong_check_desk(&g, &x, &search)?;
            let refuted = report.verdict == StrongVerdict::Refuted;
            let mut json = json!({
                "verdict": report.verdict,
                "coalitions_examined": report.coalitions_examined,
                "deviations_examined": report.deviations_examined.to_string(),
                "all_at_table_maximum": report.all_at_table_maximum,
            });
            let human = match &report.witness {
                Some(w) => {
                    let members: Vec<&str> = w.coalition.iter().map(|&p| g.name(p)).collect();
                    json["witness"] = json!({
                        "coalition": members,
                        "deviation": profile_json(&g, &w.deviation),
                        "deltas": w.deltas.iter().map(format_rational).collect::<Vec<_>>(),
                    });
                    format!("REFUTED by coalition {{{}}}", members.join(", "))
                }
                None => format!(
                    "NO WITNESS FOUND ({} coalitions, {} deviations{})",
                    report.coalitions_examined,
                    report.deviations_examined,
                    if report.all_at_table_maximum {
                        "; every player is at its table maximum, so this is certain"
                    } else {
                        ""
                    }
                ),
            };
            Ok(Outcome::new(!refuted, json, human))
        }
        Command::Validate {
            cnf,
            limit,
            grid_denominator,
            alpha,
            gammas,
            samples,
        } => {
            if *grid_denominator == 0 {
                bail!("--grid-denominator must be positive");
            }
            let mut corpus = if cnf.is_empty() {
                default_corpus(cli.seed)
            } else {
                cnf.iter()
                    .map(|p| {
                        Ok(CorpusEntry {
                            label: p.display().to_string(),
                            cnf: load_cnf(p)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            if let Some(n) = limit {
                corpus.truncate(*n);
            }
            let config = SuiteConfig {
                seed: cli.seed,
                grid_denominator: *grid_denominator,
                alpha: rational(alpha, "alpha")?,
                gammas: gammas
                    .iter()
                    .map(|g| rational(g, "gammas"))
                    .collect::<Result<_>>()?,
                samples: *samples,
            };
            let report = run_suite(&corpus, &config)?;
            let mut human = format!("{} instances, seed {}", report.instances, report.seed);
            for l in &report.lemmas {
                human += &format!(
                    "\n{} {:<22} {} instances, {} failures",
                    if l.passed() { "PASS" } else { "FAIL" },
                    l.lemma,
                    l.instances_checked(),
                    l.failures()
                );
            }
            Ok(Outcome::new(report.passed(), serde_json::to_value(&report)?, human))
        }
        Command::Sat { cnf } => {
            let f = load_cnf(cnf)?;
            let sigma = sat_brute_force(&f)?;
            let json = json!({
                "satisfiable": sigma.is_some(),
                "assignment": sigma.as_ref().map(|s| s.to_string()),
            });
            let human = match &sigma {
                Some(s) => format!("SAT {s}"),
                None => "UNSAT".to_string(),
            };
            Ok(Outcome::new(sigma.is_some(), json, human))
        }
    }
}
