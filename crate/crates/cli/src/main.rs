//! `turanlab` command-line front end.
//!
//! Every subcommand prints one JSON run report on stdout (or CSV rows with
//! `--csv` where a table makes sense). Exit codes: 0 success, 2 when the
//! reported verdict is false, 1 on errors, 64 on usage errors.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use std::io::{BufRead, Write};
use std::process::ExitCode;
use std::time::Instant;
use turanlab::blowup::{copies_in_blowup_poly, WeightedPattern};
use turanlab::constructions::{
    choose_a, counterexample_g, counterexample_h, fig4_h, CounterexampleParams, Fig4Profile,
};
use turanlab::counting::{labeled_copies, unlabeled_copies};
use turanlab::experiments::{
    conjecture2_hypotheses, find_threshold, oracle_ex, theorem2_report, OracleConfig,
    PendantProfile, Theorem1Instance, Theorem1Options, Theorem1Report,
};
use turanlab::graph::{parse_graph6, to_graph6, Graph};
use turanlab::optimizer::{
    default_catalog, density_form, maximize_density, pattern_catalog_search, CatalogOptions,
    DEFAULT_RESTARTS,
};
use turanlab::rational::{format_rational, parse_rational};
use turanlab::Budget;

const EXIT_FALSE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "turanlab",
    version,
    about = "Exact copy counts, blow-ups and generalized Turan checks"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the counterexample graphs or the ten-vertex path family.
    #[command(subcommand)]
    Construct(Construct),
    /// Count copies of a pattern in a host.
    Count(CountArgs),
    /// Copy polynomial of a weighted pattern over a host pattern.
    Poly(PolyArgs),
    /// Check the multipartite counterexample at one n, or search for one.
    #[command(name = "verify-t1")]
    VerifyT1(VerifyArgs),
    /// Complete bipartite optima and the double-star chain for a pendant profile.
    T2(T2Args),
    /// Exhaustive ex(n, H, F) for tiny n.
    Oracle(OracleArgs),
    /// Maximize the density of a weighted pattern over one host pattern.
    Optimize(OptimizeArgs),
    /// Rank K_r-free host patterns by the density they allow.
    #[command(name = "catalog-search")]
    CatalogSearch(CatalogArgs),
    /// Diameter and chromatic number against the bounded-diameter hypotheses.
    Hypotheses(HypothesesArgs),
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// The weighted pattern H for given r and a.
    H1 {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        a: u32,
        /// Also emit the explicit graph in graph6.
        #[arg(long)]
        explicit: bool,
    },
    /// The weighted host G on n vertices.
    G1 {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        explicit: bool,
    },
    /// The path on ten vertices with pendant sets A2, A9, B1, B4, B7, B10.
    Fig4 {
        /// Six sizes: A2,A9,B1,B4,B7,B10.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<u32>,
        #[arg(long)]
        explicit: bool,
    },
}

#[derive(Args, Debug)]
struct CountArgs {
    /// Pattern graph6, or `-` for stdin.
    #[arg(long)]
    pattern: String,
    /// Host graph6, or `-` for stdin.
    #[arg(long)]
    host: String,
    #[arg(long, conflicts_with = "unlabeled")]
    labeled: bool,
    #[arg(long)]
    unlabeled: bool,
    /// Emit a JSON run report instead of the bare count.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct PolyArgs {
    #[arg(long = "pattern-h")]
    pattern_h: String,
    /// Comma-separated weights for the pattern (default all 1).
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u32>>,
    #[arg(long = "pattern-f")]
    pattern_f: String,
    #[command(subcommand)]
    action: Option<PolyAction>,
}

#[derive(Subcommand, Debug)]
enum PolyAction {
    /// Evaluate the polynomial at part sizes.
    Eval {
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<u64>,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    r: usize,
    /// Rational `p/q`.
    #[arg(long)]
    eps: String,
    /// Defaults to the smallest a meeting the constant condition.
    #[arg(long)]
    a: Option<u32>,
    /// Without `--n`, scan multiples of the denominator of eps.
    #[arg(long)]
    n: Option<u64>,
    /// Compare with the exact maximum over K_(m,n-m) (r = 3).
    #[arg(long)]
    exact_bipartite: bool,
    /// Largest n scanned when searching.
    #[arg(long, default_value_t = 100_000)]
    max_n: u64,
}

#[derive(Args, Debug)]
struct T2Args {
    /// JSON such as {"s":2,"t":1,"a":[1,0],"b":[2]}.
    #[arg(long)]
    profile: String,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// One n, or an inclusive range such as `4..7`.
    #[arg(long)]
    n: String,
    #[arg(long)]
    h: String,
    #[arg(long)]
    f: String,
    /// Allow n = 8 (triangle-free searches only).
    #[arg(long, default_value_t = 7)]
    max_n: usize,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    /// Weighted pattern JSON: {"pattern":"<graph6>","weights":[..]}.
    #[arg(long = "h-pattern")]
    h_pattern: String,
    #[arg(long)]
    f: String,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[arg(long = "h-pattern")]
    h_pattern: String,
    #[arg(long)]
    r: usize,
    /// Extra host patterns in graph6, comma separated.
    #[arg(long, value_delimiter = ',')]
    extra: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct HypothesesArgs {
    #[arg(long)]
    h: String,
    #[arg(long)]
    r: usize,
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    parameters: Value,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    wall_time: f64,
    result: Value,
}

/// What a subcommand produced: a JSON payload, or text printed as is.
enum Output {
    Json {
        parameters: Value,
        seed: Option<u64>,
        result: Value,
        verdict: Option<bool>,
    },
    Text {
        body: String,
        verdict: Option<bool>,
    },
}

impl Output {
    fn json(parameters: Value, result: impl Serialize) -> Result<Self> {
        Ok(Output::Json {
            parameters,
            seed: None,
            result: serde_json::to_value(result)?,
            verdict: None,
        })
    }

    fn with_verdict(mut self, ok: bool) -> Self {
        match &mut self {
            Output::Json { verdict, .. } | Output::Text { verdict, .. } => *verdict = Some(ok),
        }
        self
    }

    fn with_seed(mut self, s: u64) -> Self {
        if let Output::Json { seed, .. } = &mut self {
            *seed = Some(s);
        }
        self
    }
}

/// Resolves graph arguments; each `-` consumes the next nonblank stdin line.
struct GraphReader {
    stdin: Option<std::io::Lines<std::io::StdinLock<'static>>>,
}

impl GraphReader {
    fn new() -> Self {
        GraphReader { stdin: None }
    }

    fn read(&mut self, arg: &str) -> Result<Graph> {
        let text = if arg == "-" {
            let lines = self
                .stdin
                .get_or_insert_with(|| std::io::stdin().lock().lines());
            loop {
                match lines.next() {
                    Some(line) => {
                        let line = line.context("reading stdin")?;
                        if !line.trim().is_empty() {
                            break line;
                        }
                    }
                    None => bail!("stdin ended before a graph6 line was read"),
                }
            }
        } else {
            arg.to_string()
        };
        parse_graph6(&text).with_context(|| format!("parsing graph6 {:?}", text.trim()))
    }
}

fn parse_pattern_json(text: &str) -> Result<WeightedPattern> {
    serde_json::from_str(text).with_context(|| format!("parsing weighted pattern {text}"))
}

fn construct(c: &Construct) -> Result<Output> {
    let (params, pattern, explicit, flag) = match c {
        Construct::H1 { r, a, explicit } => (
            json!({"which": "h1", "r": r, "a": a}),
            counterexample_h(*r, *a)?,
            None,
            *explicit,
        ),
        Construct::G1 {
            r,
            eps,
            n,
            explicit,
        } => {
            let e = parse_rational(eps)?;
            let params = json!({"which": "g1", "r": r, "eps": format_rational(&e), "n": n});
            (params, counterexample_g(*r, &e, *n)?, None, *explicit)
        }
        Construct::Fig4 { sizes, explicit } => {
            let profile = Fig4Profile::from_slice(sizes)?;
            let g = if *explicit {
                Some(fig4_h(&profile)?)
            } else {
                None
            };
            (
                json!({"which": "fig4", "sizes": sizes}),
                profile.pattern(),
                g,
                *explicit,
            )
        }
    };
    let explicit = match (explicit, flag) {
        (Some(g), _) => Some(to_graph6(&g)),
        (None, true) => Some(to_graph6(&pattern.explicit()?)),
        (None, false) => None,
    };
    let mut result = json!({
        "pattern": pattern,
        "vertices": pattern.total_weight(),
    });
    if let Some(g6) = explicit {
        result["graph6"] = Value::String(g6);
    }
    Output::json(params, result)
}

fn count(args: &CountArgs, graphs: &mut GraphReader) -> Result<Output> {
    let h = graphs.read(&args.pattern)?;
    let g = graphs.read(&args.host)?;
    let (kind, value) = if args.unlabeled {
        ("unlabeled", unlabeled_copies(&h, &g)?)
    } else {
        ("labeled", labeled_copies(&h, &g))
    };
    if !args.json {
        return Ok(Output::Text {
            body: value.to_string(),
            verdict: None,
        });
    }
    Output::json(
        json!({"pattern": to_graph6(&h), "host": to_graph6(&g), "kind": kind}),
        json!({"count": value.to_string()}),
    )
}

fn poly(args: &PolyArgs, graphs: &mut GraphReader) -> Result<Output> {
    let h = graphs.read(&args.pattern_h)?;
    let f = graphs.read(&args.pattern_f)?;
    let weights = args.weights.clone().unwrap_or_else(|| vec![1; h.order()]);
    let wp = WeightedPattern::new(h, weights)?;
    let p = copies_in_blowup_poly(&wp, &f, Budget::from_env())?;
    let mut params = json!({"pattern_h": wp, "pattern_f": to_graph6(&f)});
    match &args.action {
        None => Output::json(params, &p),
        Some(PolyAction::Eval { sizes }) => {
            params["sizes"] = json!(sizes);
            let value = p.evaluate(sizes)?;
            Output::json(
                params,
                json!({"value": value.to_string(), "terms": p.term_count()}),
            )
        }
    }
}

fn verify_t1(args: &VerifyArgs) -> Result<Output> {
    let eps = parse_rational(&args.eps)?;
    let a = match args.a {
        Some(a) => a,
        None => choose_a(args.r, &eps)?,
    };
    let opts = Theorem1Options {
        exact_bipartite: args.exact_bipartite || args.r == 3,
        budget: Budget::from_env(),
    };
    let mut params = json!({
        "r": args.r,
        "eps": format_rational(&eps),
        "a": a,
        "exact_bipartite": opts.exact_bipartite,
    });
    let report: Theorem1Report = match args.n {
        Some(n) => {
            params["n"] = json!(n);
            let p = CounterexampleParams::new(args.r, eps, a, n)?;
            Theorem1Instance::from_params(&p, opts)?.report(n)?
        }
        None => {
            params["max_n"] = json!(args.max_n);
            let inst = Theorem1Instance::new(args.r, eps, a, opts)?;
            match find_threshold(&inst, args.max_n, Theorem1Report::outcome)? {
                Some(rep) => rep,
                None => bail!("no n up to {} satisfies the comparison", args.max_n),
            }
        }
    };
    let verdict = report.verdict();
    let ok = verdict.outcome;
    Ok(Output::json(params, json!({"verdict": verdict, "report": report}))?.with_verdict(ok))
}

fn t2(args: &T2Args) -> Result<Output> {
    let profile: PendantProfile = serde_json::from_str(&args.profile)
        .with_context(|| format!("parsing profile {}", args.profile))?;
    let rep = theorem2_report(&profile, args.n)?;
    let ok = rep.chain.outcome;
    if args.csv {
        let mut body = String::from("graph,graph6,m,count\n");
        for (name, g6, best) in [("H", &rep.h, &rep.h_best), ("F", &rep.f, &rep.f_best)] {
            body.push_str(&format!("{name},{g6},{},{}\n", best.m, best.count));
        }
        return Ok(Output::Text {
            body,
            verdict: Some(ok),
        });
    }
    Ok(Output::json(json!({"profile": profile, "n": args.n}), &rep)?.with_verdict(ok))
}

fn parse_range(text: &str) -> Result<Vec<usize>> {
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .with_context(|| format!("bad n {s:?}"))
    };
    match text.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                bail!("empty range {text}");
            }
            Ok((lo..=hi).collect())
        }
        None => Ok(vec![parse(text)?]),
    }
}

fn oracle(args: &OracleArgs, graphs: &mut GraphReader) -> Result<Output> {
    let ns = parse_range(&args.n)?;
    let h = graphs.read(&args.h)?;
    let f = graphs.read(&args.f)?;
    let cfg = OracleConfig {
        max_n: args.max_n,
        budget: Budget::from_env(),
    };
    let results = ns
        .iter()
        .map(|&n| oracle_ex(n, &h, &f, cfg))
        .collect::<turanlab::Result<Vec<_>>>()?;
    if args.csv {
        let mut body = String::from("n,max,graphs,extremal\n");
        for r in &results {
            body.push_str(&format!(
                "{},{},{},{}\n",
                r.n,
                r.max,
                r.graphs,
                r.extremal.join(" ")
            ));
        }
        return Ok(Output::Text {
            body,
            verdict: None,
        });
    }
    let params = json!({"n": args.n, "h": to_graph6(&h), "f": to_graph6(&f), "max_n": args.max_n});
    if results.len() == 1 {
        Output::json(params, &results[0])
    } else {
        Output::json(params, &results)
    }
}

fn optimize(args: &OptimizeArgs, graphs: &mut GraphReader) -> Result<Output> {
    let h = parse_pattern_json(&args.h_pattern)?;
    let f = graphs.read(&args.f)?;
    let form = density_form(&h, &f, Budget::from_env())?;
    let best = maximize_density(&form, args.restarts, args.seed);
    let params = json!({"h_pattern": h, "f": to_graph6(&f), "restarts": args.restarts});
    Ok(Output::json(
        params,
        json!({"terms": form.terms().len(), "maximum": best}),
    )?
    .with_seed(args.seed))
}

fn catalog_search(args: &CatalogArgs, graphs: &mut GraphReader) -> Result<Output> {
    let h = parse_pattern_json(&args.h_pattern)?;
    let mut catalog = default_catalog();
    for g6 in &args.extra {
        let g = graphs.read(g6)?;
        catalog.push((to_graph6(&g), g));
    }
    let opts = CatalogOptions {
        restarts: args.restarts,
        seed: args.seed,
        budget: Budget::from_env(),
        ..CatalogOptions::default()
    };
    let report = pattern_catalog_search(&h, args.r, &catalog, opts)?;
    if args.csv {
        let mut body = String::from("rank,name,graph6,value\n");
        for (i, e) in report.entries.iter().enumerate() {
            body.push_str(&format!(
                "{},{},{},{:.15e}\n",
                i + 1,
                e.name,
                e.graph6,
                e.value
            ));
        }
        return Ok(Output::Text {
            body,
            verdict: None,
        });
    }
    let params = json!({
        "h_pattern": h,
        "r": args.r,
        "extra": args.extra,
        "restarts": args.restarts,
    });
    Ok(Output::json(params, &report)?.with_seed(args.seed))
}

fn hypotheses(args: &HypothesesArgs, graphs: &mut GraphReader) -> Result<Output> {
    let h = graphs.read(&args.h)?;
    let rep = conjecture2_hypotheses(&h, args.r);
    Output::json(json!({"h": to_graph6(&h), "r": args.r}), rep)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Construct(_) => "construct",
        Command::Count(_) => "count",
        Command::Poly(_) => "poly",
        Command::VerifyT1(_) => "verify-t1",
        Command::T2(_) => "t2",
        Command::Oracle(_) => "oracle",
        Command::Optimize(_) => "optimize",
        Command::CatalogSearch(_) => "catalog-search",
        Command::Hypotheses(_) => "hypotheses",
    }
}

fn dispatch(cmd: &Command) -> Result<Output> {
    let mut graphs = GraphReader::new();
    match cmd {
        Command::Construct(c) => construct(c),
        Command::Count(a) => count(a, &mut graphs),
        Command::Poly(a) => poly(a, &mut graphs),
        Command::VerifyT1(a) => verify_t1(a),
        Command::T2(a) => t2(a),
        Command::Oracle(a) => oracle(a, &mut graphs),
        Command::Optimize(a) => optimize(a, &mut graphs),
        Command::CatalogSearch(a) => catalog_search(a, &mut graphs),
        Command::Hypotheses(a) => hypotheses(a, &mut graphs),
    }
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        bail!("--threads must be positive");
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the thread pool")?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    configure_threads(cli.threads)?;
    let start = Instant::now();
    let out = dispatch(&cli.command)?;
    let wall_time = start.elapsed().as_secs_f64();
    let mut stdout = std::io::stdout().lock();
    let verdict = match out {
        Output::Text { body, verdict } => {
            write!(stdout, "{body}")?;
            if !body.ends_with('\n') {
                writeln!(stdout)?;
            }
            verdict
        }
        Output::Json {
            parameters,
            seed,
            result,
            verdict,
        } => {
            let report = RunReport {
                command: command_name(&cli.command).to_string(),
                parameters,
                version: env!("CARGO_PKG_VERSION"),
                seed,
                wall_time,
                result,
            };
            serde_json::to_writer_pretty(&mut stdout, &report)?;
            writeln!(stdout)?;
            verdict
        }
    };
    Ok(if verdict == Some(false) {
        EXIT_FALSE
    } else {
        0
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
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
            ExitCode::from(1)
        }
    }
}
