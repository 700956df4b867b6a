use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lmcalc::harness::{enumerate_typed_terms, run_lemma, with_equations, CorpusSpec, VerifyOptions, LEMMAS};
use lmcalc::reduce::{normalize, reduction_graph, sn_verdict, RuleSet, SnVerdict, Trace, DEFAULT_FUEL};
use lmcalc::syntax::{parse_term, parse_term_any, Mode, Sort, Term};
use lmcalc::translate::{circle, circle_context, circle_typed, diamond, diamond_context, TranslationEnv};
use lmcalc::types::{is_good, parse_type, EquationSet, Goodness, Type};
use lmcalc::typing::{check, infer, Context, System};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "lmcalc", version, about = "Reduction, typing and translations for the λ, λμ and λμ→∧∨ calculi")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rules {
    Beta,
    Betamu,
    BetamuRt,
    Full,
    FullRt,
}

impl Rules {
    fn set(self) -> RuleSet {
        match self {
            Rules::Beta => RuleSet::BETA,
            Rules::Betamu => RuleSet::BETAMU,
            Rules::BetamuRt => RuleSet::BETAMU_RT,
            Rules::Full => RuleSet::FULL,
            Rules::FullRt => RuleSet::FULL_RT,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Church,
    Curry,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Text,
    Lines,
}

#[derive(Clone, Copy, ValueEnum)]
enum SortArg {
    Lambda,
    LambdaMu,
    Full,
}

impl From<SortArg> for Sort {
    fn from(s: SortArg) -> Sort {
        match s {
            SortArg::Lambda => Sort::Lambda,
            SortArg::LambdaMu => Sort::LambdaMu,
            SortArg::Full => Sort::Full,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    S,
    Sc,
    Smu,
    Sfull,
}

#[derive(Clone, Copy, ValueEnum)]
enum Map {
    Diamond,
    Circle,
}

#[derive(Args)]
struct Common {
    /// Type annotations required (church) or optional (curry).
    #[arg(long, value_enum, default_value = "curry")]
    mode: ModeArg,
    /// Recursive type equations, inline or a file name.
    #[arg(long)]
    eqs: Option<String>,
    /// Typing context, inline or a file name.
    #[arg(long)]
    ctx: Option<String>,
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Check a term against a type and print the derivation.
    Check {
        term: String,
        ty: String,
        #[arg(long, value_enum)]
        system: Option<SystemArg>,
        #[command(flatten)]
        common: Common,
    },
    /// Infer the type of an annotated term.
    Infer {
        term: String,
        #[arg(long, value_enum)]
        system: Option<SystemArg>,
        #[command(flatten)]
        common: Common,
    },
    /// Reduce leftmost-outermost and print the trace.
    Reduce {
        term: String,
        #[arg(long, value_enum, default_value = "full-rt")]
        rules: Rules,
        #[command(flatten)]
        common: Common,
    },
    /// Print the reduction graph.
    Graph {
        term: String,
        #[arg(long, value_enum, default_value = "full-rt")]
        rules: Rules,
        #[command(flatten)]
        common: Common,
    },
    /// Length of the longest reduction.
    Eta {
        term: String,
        #[arg(long, value_enum, default_value = "full-rt")]
        rules: Rules,
        #[command(flatten)]
        common: Common,
    },
    /// Strong-normalization verdict, with a looping trace when there is one.
    Sn {
        term: String,
        #[arg(long, value_enum, default_value = "full-rt")]
        rules: Rules,
        #[command(flatten)]
        common: Common,
    },
    /// Translate a term (and context) by diamond or circle.
    Translate {
        term: String,
        #[arg(long, value_enum)]
        map: Map,
        /// For circle: annotate the introduced binders using the source typing.
        #[arg(long)]
        typed: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether an equation set is good.
    Good {
        #[arg(long)]
        eqs: String,
    },
    /// Decide whether two types are congruent under the equations.
    Congruent {
        a: String,
        b: String,
        #[arg(long)]
        eqs: String,
    },
    /// Run a lemma check.
    Verify {
        lemma: String,
        #[arg(long, value_enum)]
        sort: Option<SortArg>,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        #[arg(long)]
        eqs: Option<String>,
        /// Type depth for tran.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print a typed corpus.
    Corpus {
        #[arg(long, value_enum, default_value = "lambda")]
        sort: SortArg,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, value_enum, default_value = "church")]
        mode: ModeArg,
        #[arg(long)]
        eqs: Option<String>,
        /// Draw this many random terms instead of enumerating.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Errors that should exit with the usage code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    anyhow!(Usage(e.to_string()))
}

/// An argument that names an existing file is replaced by its contents.
fn text_arg(s: &str) -> Result<String> {
    let p = Path::new(s);
    if !s.contains('\n') && s.len() < 4096 && p.is_file() {
        return std::fs::read_to_string(p).with_context(|| format!("reading {s}"));
    }
    Ok(s.to_owned())
}

fn parse_eqs(s: &Option<String>) -> Result<Option<EquationSet>> {
    s.as_deref().map(|s| EquationSet::parse(&text_arg(s)?).map_err(usage)).transpose()
}

fn parse_ctx(s: &Option<String>) -> Result<Context> {
    match s {
        Some(s) => Context::parse(&text_arg(s)?).map_err(usage),
        None => Ok(Context::new()),
    }
}

fn parse_mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Church => Mode::Church,
        ModeArg::Curry => Mode::Curry,
    }
}

fn read_term(s: &str, common: &Common) -> Result<Term> {
    let text = text_arg(s)?;
    match common.mode {
        ModeArg::Curry => parse_term_any(&text).map_err(usage),
        // constants only live in the pure λ sort
        ModeArg::Church => parse_term(&text, Sort::Full, Mode::Church)
            .or_else(|e| parse_term(&text, Sort::Lambda, Mode::Church).map_err(|_| e))
            .map_err(usage),
    }
}

fn read_type(s: &str) -> Result<Type> {
    parse_type(&text_arg(s)?).map_err(usage)
}

fn system_for(m: &Term, explicit: Option<SystemArg>) -> System {
    match explicit {
        Some(SystemArg::S) => System::S,
        Some(SystemArg::Sc) => System::Sc,
        Some(SystemArg::Smu) => System::Smu,
        Some(SystemArg::Sfull) => System::Sfull,
        None => {
            let mut has_const = false;
            m.visit(&mut |t| has_const |= matches!(t, Term::Const(_)));
            match m.sort() {
                _ if has_const => System::Sc,
                Some(Sort::Lambda) | None => System::S,
                Some(Sort::LambdaMu) => System::Smu,
                Some(Sort::Full) => System::Sfull,
            }
        }
    }
}

fn print_trace(t: &Trace, format: Format) {
    match format {
        Format::Text => println!("{t}"),
        Format::Lines => {
            println!("start\t{}", t.start);
            for (i, s) in t.steps.iter().enumerate() {
                println!("step\t{}\t{}\t{}\t{}", i + 1, s.label, s.pos, s.term);
            }
            println!("length\t{}\t{}", t.lg(), t.lg_bm());
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { term, ty, system, common } => {
            let m = read_term(&term, &common)?;
            let a = read_type(&ty)?;
            let ctx = parse_ctx(&common.ctx)?;
            let eqs = parse_eqs(&common.eqs)?;
            match check(&ctx, &m, &a, system_for(&m, system), eqs.as_ref()) {
                Ok(d) => {
                    if common.format == Format::Text {
                        println!("{d}");
                    }
                    println!("ok");
                    Ok(0)
                }
                Err(e) => {
                    println!("type error: {e}");
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::Infer { term, system, common } => {
            let m = read_term(&term, &common)?;
            let ctx = parse_ctx(&common.ctx)?;
            let eqs = parse_eqs(&common.eqs)?;
            match infer(&ctx, &m, system_for(&m, system), eqs.as_ref()) {
                Ok(t) => {
                    println!("{t}");
                    Ok(0)
                }
                Err(e) => {
                    println!("type error: {e}");
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::Reduce { term, rules, common } => {
            let m = read_term(&term, &common)?;
            let (t, normal) = normalize(&m, rules.set(), common.fuel);
            print_trace(&t, common.format);
            if normal {
                Ok(0)
            } else {
                println!("fuel exhausted before a normal form");
                Ok(EXIT_UNKNOWN)
            }
        }
        Command::Graph { term, rules, common } => {
            let m = read_term(&term, &common)?;
            let g = reduction_graph(&m, rules.set(), common.fuel);
            for (i, n) in g.nodes.iter().enumerate() {
                match common.format {
                    Format::Text => println!("[{i}] {n}"),
                    Format::Lines => println!("node\t{i}\t{n}"),
                }
            }
            for (i, es) in g.edges.iter().enumerate() {
                for e in es {
                    match common.format {
                        Format::Text => println!("[{i}] --{}@{}--> [{}]", e.label, e.pos, e.target),
                        Format::Lines => println!("edge\t{i}\t{}\t{}\t{}", e.target, e.label, e.pos),
                    }
                }
            }
            let eta = g.longest_path().map_or("-".to_owned(), |n| n.to_string());
            println!("nodes={} edges={} complete={} eta={eta}", g.len(), g.edge_count(), g.complete);
            Ok(if g.complete { 0 } else { EXIT_UNKNOWN })
        }
        Command::Eta { term, rules, common } => {
            let m = read_term(&term, &common)?;
            match sn_verdict(&m, rules.set(), common.fuel) {
                SnVerdict::Sn(n) => {
                    println!("{n}");
                    Ok(0)
                }
                v => {
                    println!("{v}");
                    Ok(if matches!(v, SnVerdict::Loop(_)) { EXIT_FAIL } else { EXIT_UNKNOWN })
                }
            }
        }
        Command::Sn { term, rules, common } => {
            let m = read_term(&term, &common)?;
            let v = sn_verdict(&m, rules.set(), common.fuel);
            println!("{v}");
            Ok(match v {
                SnVerdict::Sn(_) => 0,
                SnVerdict::Loop(t) => {
                    print_trace(&t, common.format);
                    EXIT_FAIL
                }
                SnVerdict::Unknown(_) => EXIT_UNKNOWN,
            })
        }
        Command::Translate { term, map, typed, common } => {
            let m = read_term(&term, &common)?;
            let ctx = parse_ctx(&common.ctx)?;
            let eqs = parse_eqs(&common.eqs)?;
            let (out, out_ctx) = match map {
                Map::Diamond => {
                    let env = TranslationEnv::new(&ctx, &m);
                    (diamond(&m, &env).map_err(usage)?, diamond_context(&ctx, &env))
                }
                Map::Circle => {
                    let t = if typed { circle_typed(&ctx, &m, eqs.as_ref()).map_err(usage)? } else { circle(&m) };
                    (t, circle_context(&ctx).map_err(usage)?)
                }
            };
            println!("{out}");
            if common.ctx.is_some() {
                println!("{out_ctx}");
            }
            Ok(0)
        }
        Command::Good { eqs } => {
            let e = EquationSet::parse(&text_arg(&eqs)?).map_err(usage)?;
            let g = is_good(&e);
            println!("{g}");
            Ok(if g == Goodness::Good { 0 } else { EXIT_FAIL })
        }
        Command::Congruent { a, b, eqs } => {
            let e = EquationSet::parse(&text_arg(&eqs)?).map_err(usage)?;
            let (a, b) = (read_type(&a)?, read_type(&b)?);
            if e.congruent(&a, &b) {
                println!("congruent");
                Ok(0)
            } else {
                println!("not congruent");
                Ok(EXIT_FAIL)
            }
        }
        Command::Verify { lemma, sort, max_size, count, seed, fuel, eqs, depth, format } => {
            if !LEMMAS.contains(&lemma.as_str()) {
                bail!(usage(format!("unknown lemma {lemma:?}; expected one of {}", LEMMAS.join(", "))));
            }
            let opts = VerifyOptions { sort: sort.map(Sort::from), max_size, fuel, seed, count, eqs: parse_eqs(&eqs)?, depth };
            let r = run_lemma(&lemma, &opts).map_err(usage)?;
            match format {
                Format::Text => println!("{r}"),
                Format::Lines => {
                    println!("report\t{}\t{}\t{}\t{}\t{}", r.lemma, r.tried, r.passed, r.failed(), r.inconclusive);
                    for f in &r.failures {
                        println!("failure\t{}\t{}", f.input.replace('\n', " "), f.detail.replace('\n', " "));
                    }
                }
            }
            Ok(if r.failed() > 0 {
                EXIT_FAIL
            } else if r.inconclusive > 0 {
                EXIT_UNKNOWN
            } else {
                0
            })
        }
        Command::Corpus { sort, max_size, mode, eqs, count, seed, format } => {
            let mut spec = match count {
                Some(n) => CorpusSpec::random(sort.into(), max_size, seed, n),
                None => CorpusSpec::exhaustive(sort.into(), max_size),
            };
            spec.mode = parse_mode(mode);
            if let Some(e) = parse_eqs(&eqs)? {
                with_equations(&mut spec, e);
            }
            let items = enumerate_typed_terms(&spec);
            for i in &items {
                match format {
                    Format::Text => {
                        if i.ctx.is_empty() {
                            println!("|- {} : {}", i.term, i.ty)
                        } else {
                            println!("{} |- {} : {}", i.ctx, i.term, i.ty)
                        }
                    }
                    Format::Lines => println!("item\t{}\t{}\t{}", i.ctx, i.term, i.ty),
                }
            }
            println!("count={}", items.len());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<Usage>().is_some() { EXIT_USAGE } else { EXIT_FAIL })
        }
    }
}
