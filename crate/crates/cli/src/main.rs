use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use monozeta::ff_oracle::{verify_class, CountOptions, VerifyReport, DEFAULT_BUDGET};
use monozeta::flatness::non_flat_threshold;
use monozeta::invariants::{lct, structural_pairs};
use monozeta::jets::{components, fiber_class, jet_class};
use monozeta::motivic::{series_check, zeta_motivic};
use monozeta::rational::fmt_rational;
use monozeta::semigroup::{derive_structure, random_plane_semigroup, validate};
use monozeta::topological::{
    check_specialization, global_equals_local_top, poles_with_residues, zeta_top, RatQsDoc,
};
use monozeta::{Error, GeneratorTuple, SemigroupData};

#[derive(Parser, Debug)]
#[command(
    name = "monozeta",
    version,
    about = "Zeta functions, jet schemes and poles of space monomial curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Minimal generators, e.g. 4,6,13
    #[arg(long, conflicts_with = "input")]
    gens: Option<GeneratorTuple>,
    /// JSON file of the form {"generators": [4, 6, 13]}
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Shorthand for --format json
    #[arg(long, conflicts_with_all = ["latex", "format"])]
    json: bool,
    /// Shorthand for --format latex
    #[arg(long, conflicts_with = "format")]
    latex: bool,
}

impl Input {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.latex {
            Format::Latex
        } else {
            self.format
        }
    }
}

#[derive(Deserialize)]
struct InputDoc {
    generators: Vec<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic data, structural pairs, lct and poles
    Invariants(Input),
    /// Motivic zeta function in closed form
    Motivic {
        #[command(flatten)]
        input: Input,
        /// Local zeta function at the origin
        #[arg(long)]
        local: bool,
    },
    /// Topological zeta function
    Topo(Input),
    /// Poles with residues and orders
    Poles(Input),
    /// Components of the jet-scheme fiber over the origin
    Jets {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        m: u64,
    },
    /// Compare the closed form with the jet-class series
    SeriesCheck {
        #[command(flatten)]
        input: Input,
        /// Highest T-degree compared [default: 4*N_1]
        #[arg(long)]
        order: Option<usize>,
    },
    /// Count F_q-points of the jet scheme and compare with its class
    Count {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        count: CountArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: u64,
    },
    /// Non-flatness threshold of the jet-scheme family
    Flatness(Input),
    /// Sample valid generator tuples
    Random {
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 150)]
        bound: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds to sample
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Series check, small point counts, residue table and specialisation
    VerifyAll {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        count: CountArgs,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
}

#[derive(Args, Debug, Clone)]
struct CountArgs {
    /// Count the fiber over the origin only
    #[arg(long)]
    local: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Field-operation budget of the enumeration
    #[arg(long, env = "MONOZETA_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Walk every point instead of using the exact counting shortcuts
    #[arg(long)]
    exhaustive: bool,
}

impl CountArgs {
    fn options(&self) -> CountOptions {
        CountOptions {
            local: self.local,
            threads: self.threads,
            budget: self.budget,
            exhaustive: self.exhaustive,
        }
    }
}

/// What went wrong, mapped to the exit status.
enum Failure {
    /// Bad input or arguments (exit 1).
    Invalid(anyhow::Error),
    /// A verification disagreed (exit 2); the report is still printed.
    Mismatch(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResidueMismatch { .. } => Failure::Mismatch(e.to_string()),
            other => Failure::Invalid(other.into()),
        }
    }
}

fn load(input: &Input) -> Result<SemigroupData, Failure> {
    let gens = match (&input.gens, &input.input) {
        (Some(g), _) => g.clone(),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let doc: InputDoc = serde_json::from_str(&text)
                .with_context(|| format!("{} is not a {{\"generators\": [...]}} document", path.display()))?;
            GeneratorTuple(doc.generators)
        }
        (None, None) => return Err(anyhow!("give the generators with --gens or --input").into()),
    };
    let report = validate(&gens);
    if !report.is_valid() {
        let lines: Vec<String> = report
            .violations()
            .map(|c| format!("  {}: {}", c.name, c.detail))
            .collect();
        return Err(anyhow!("{gens} is not a plane-branch semigroup:\n{}", lines.join("\n")).into());
    }
    Ok(derive_structure(&gens)?)
}

fn pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("documents serialise")
}

struct Output {
    text: String,
    mismatch: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, mismatch: None }
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Invariants(input) => invariants(&input),
        Command::Motivic { input, local } => motivic(&input, local),
        Command::Topo(input) => topo(&input),
        Command::Poles(input) => poles(&input),
        Command::Jets { input, m } => jets(&input, m),
        Command::SeriesCheck { input, order } => series(&input, order),
        Command::Count { input, count, m, q } => count_cmd(&input, &count, m, q),
        Command::Flatness(input) => flatness(&input),
        Command::Random { g, bound, seed, count, format } => random(g, bound, seed, count, format),
        Command::VerifyAll { input, count, eps } => verify_all(&input, &count, eps),
    }
}

fn invariants(input: &Input) -> Result<Output, Failure> {
    let s = load(input)?;
    let pairs = structural_pairs(&s);
    let poles = poles_with_residues(&s)?;
    let lct = fmt_rational(&lct(&s));
    Ok(Output::ok(match input.format() {
        Format::Json => pretty(&json!({
            "semigroup": s,
            "pairs": pairs,
            "lct": lct,
            "poles": poles,
        })),
        _ => {
            let mut t = format!("generators  {}\n", s.generators());
            t += &format!("e           {:?}\n", s.e_all());
            t += &format!("n           {:?}  (n_0 = {})\n", &s.n_all()[1..], s.n0());
            for (k, row) in s.b_rows().iter().enumerate() {
                t += &format!("b_{}         {row:?}\n", k + 1);
            }
            for p in &pairs {
                t += &format!("(N_{0}, nu_{0}) = ({1}, {2})\n", p.i, p.big_n, p.nu);
            }
            t += &format!("lct         {lct}\n");
            for p in &poles {
                t += &format!(
                    "pole {:>10}  residue {}\n",
                    fmt_rational(&p.value),
                    p.residue.as_ref().map(fmt_rational).unwrap_or_default()
                );
            }
            t
        }
    }))
}

fn motivic(input: &Input, local: bool) -> Result<Output, Failure> {
    let s = load(input)?;
    let zeta = zeta_motivic(&s);
    let total = zeta.total(local);
    let cleared = total.cleared();
    Ok(Output::ok(match input.format() {
        Format::Json => pretty(&json!({
            "local": local,
            "zeta": total,
            "normalizer": cleared.shift,
        })),
        Format::Latex => format!("{}\n", total.to_latex()),
        Format::Text => format!("{cleared}\n"),
    }))
}

fn topo(input: &Input) -> Result<Output, Failure> {
    let s = load(input)?;
    let z = zeta_top(&s);
    let poles = poles_with_residues(&s)?;
    Ok(Output::ok(match input.format() {
        Format::Json => pretty(&json!({ "zeta": RatQsDoc::from(&z), "poles": poles })),
        Format::Latex => format!("{}\n", z.to_latex()),
        Format::Text => format!("{z}\n"),
    }))
}

fn poles(input: &Input) -> Result<Output, Failure> {
    let s = load(input)?;
    let poles = poles_with_residues(&s)?;
    Ok(Output::ok(match input.format() {
        Format::Json => pretty(&poles),
        _ => poles
            .iter()
            .map(|p| {
                format!(
                    "{:>10}  (-{}/{})  order {}  residue {}\n",
                    fmt_rational(&p.value),
                    p.nu,
                    p.big_n,
                    p.order,
                    p.residue.as_ref().map(fmt_rational).unwrap_or_default()
                )
            })
            .collect(),
    }))
}

fn jets(input: &Input, m: u64) -> Result<Output, Failure> {
    let s = load(input)?;
    if m == 0 {
        return Err(anyhow!("--m must be at least 1 (the fiber at m = 0 is the origin)").into());
    }
    let comps = components(&s, m);
    Ok(Output::ok(match input.format() {
        Format::Json => pretty(&comps),
        _ => {
            let mut t = String::new();
            for c in &comps {
                let label = match c.kind {
                    monozeta::jets::ComponentKind::Main => format!("B_{m}"),
                    monozeta::jets::ComponentKind::Side { k } => format!("C_{{{m},{k}}}"),
                };
                t += &format!("{label:<12} codim {}\n", c.codim);
            }
            t += &format!("[fiber]      {}\n", fiber_class(&s, m));
            t += &format!("[Y_{m}]        {}\n", jet_class(&s, m));
            t
        }
    }))
}

fn series(input: &Input, order: Option<usize>) -> Result<Output, Failure> {
    let s = load(input)?;
    let order = order.unwrap_or(4 * structural_pairs(&s)[0].big_n as usize);
    if order < 2 {
        return Err(anyhow!("--order must be at least 2").into());
    }
    let zeta = zeta_motivic(&s);
    let global = series_check(&s, &zeta, order, false);
    let local = series_check(&s, &zeta, order, true);
    let doc = json!({
        "order": order,
        "global": global.passed(),
        "local": local.passed(),
        "first_mismatch_global": global.first_mismatch,
        "first_mismatch_local": local.first_mismatch,
    });
    let text = match input.format() {
        Format::Json => pretty(&doc),
        _ => format!(
            "series check to T^{order}: global {}, local {}\n",
            verdict(global.passed()),
            verdict(local.passed())
        ),
    };
    let mismatch = (!(global.passed() && local.passed()))
        .then(|| format!("closed form and jet series differ below T^{order}"));
    Ok(Output { text, mismatch })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn report_text(r: &VerifyReport) -> String {
    format!(
        "m={} q={}{}: count {} expected {} {}{}\n",
        r.m,
        r.q,
        if r.local { " local" } else { "" },
        r.count,
        r.expected,
        verdict(r.matched),
        if r.char_divides_generator { " (q divides a generator)" } else { "" }
    )
}

/// Mismatches at characteristics dividing a generator are reported only.
fn counts_as_failure(r: &VerifyReport) -> bool {
    !r.matched && !r.char_divides_generator
}

fn count_cmd(input: &Input, args: &CountArgs, m: usize, q: u64) -> Result<Output, Failure> {
    let s = load(input)?;
    let r = verify_class(&s, m, q, args.options())?;
    let text = match input.format() {
        Format::Json => pretty(&r),
        _ => report_text(&r),
    };
    let mismatch = counts_as_failure(&r).then(|| "point count differs from the class".to_string());
    Ok(Output { text, mismatch })
}

fn flatness(input: &Input) -> Result<Output, Failure> {
    let s = load(input)?;
    let r = non_flat_threshold(&s);
    Ok(Output::ok(match input.format() {
        Format::Json => pretty(&r),
        _ => match r.verdict {
            monozeta::flatness::FlatnessVerdict::NotFlatForAllM => {
                format!("g = {}: not flat for every m >= 1\n", r.g)
            }
            monozeta::flatness::FlatnessVerdict::NotFlatFrom { m0 } => {
                format!("g = {}: not flat for every m >= {m0}\n", r.g)
            }
            monozeta::flatness::FlatnessVerdict::HypersurfaceFlat => {
                format!("g = {}: plane curve family, flat\n", r.g)
            }
        },
    }))
}

fn random(g: usize, bound: u64, seed: u64, count: u64, format: Format) -> Result<Output, Failure> {
    let mut tuples = Vec::new();
    for k in 0..count {
        tuples.push(random_plane_semigroup(g, bound, seed.wrapping_add(k))?);
    }
    Ok(Output::ok(match format {
        Format::Json => pretty(&tuples),
        _ => tuples.iter().map(|t| format!("{t}\n")).collect(),
    }))
}

/// The two smallest primes from a short list that are admissible for `s`.
fn small_primes(s: &SemigroupData) -> Vec<u64> {
    [5u64, 7, 11, 13, 17, 19, 23]
        .into_iter()
        .filter(|q| s.n_all().iter().all(|n| n % q != 0))
        .take(2)
        .collect()
}

fn verify_all(input: &Input, args: &CountArgs, eps: f64) -> Result<Output, Failure> {
    let s = load(input)?;
    let mut failures = Vec::new();
    let mut lines = Vec::new();

    let order = 4 * structural_pairs(&s)[0].big_n as usize;
    let zeta = zeta_motivic(&s);
    let g_ok = series_check(&s, &zeta, order, false).passed();
    let l_ok = series_check(&s, &zeta, order, true).passed();
    lines.push(json!({"check": "series", "order": order, "global": g_ok, "local": l_ok}));
    if !(g_ok && l_ok) {
        failures.push("series");
    }

    let mut counts = Vec::new();
    for q in small_primes(&s) {
        for m in 0..=2 {
            for local in [false, true] {
                let opts = CountOptions { local, ..args.options() };
                match verify_class(&s, m, q, opts) {
                    Ok(r) => {
                        if counts_as_failure(&r) {
                            failures.push("count");
                        }
                        counts.push(serde_json::to_value(&r).expect("report serialises"));
                    }
                    Err(Error::BudgetExceeded { budget }) => {
                        counts.push(json!({"m": m, "q": q, "local": local, "skipped": format!("budget {budget}")}));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    lines.push(json!({"check": "count", "runs": counts}));

    let residues_ok = poles_with_residues(&s).is_ok();
    lines.push(json!({"check": "residues", "ok": residues_ok}));
    if !residues_ok {
        failures.push("residues");
    }

    let top = zeta_top(&s);
    let samples = [0.0, 0.5, 1.0, 2.0];
    let dev = check_specialization(&s, &zeta, &top, eps, &samples, false)?;
    let spec_ok = dev < 100.0 * eps;
    lines.push(json!({"check": "specialization", "eps": eps, "deviation": dev, "ok": spec_ok}));
    if !spec_ok {
        failures.push("specialization");
    }
    let same = global_equals_local_top(&s, &zeta);
    lines.push(json!({"check": "global_equals_local_top", "ok": same}));
    if !same {
        failures.push("global_equals_local_top");
    }

    let doc = json!({"generators": s.generators().to_string(), "checks": lines, "ok": failures.is_empty()});
    let text = match input.format() {
        Format::Json => pretty(&doc),
        _ => {
            let mut t = format!("series to T^{order}: global {}, local {}\n", verdict(g_ok), verdict(l_ok));
            for c in &counts {
                match serde_json::from_value::<Value>(c.clone()) {
                    Ok(v) if v.get("skipped").is_some() => {
                        t += &format!("m={} q={} local={}: skipped ({})\n", v["m"], v["q"], v["local"], v["skipped"]);
                    }
                    Ok(v) => {
                        t += &format!(
                            "m={} q={}{}: count {} expected {} {}\n",
                            v["m"],
                            v["q"],
                            if v["local"] == true { " local" } else { "" },
                            v["count"].as_str().unwrap_or("?"),
                            v["expected"].as_str().unwrap_or("?"),
                            verdict(v["match"] == true)
                        );
                    }
                    Err(_) => {}
                }
            }
            t += &format!("residue table vs partial fractions: {}\n", verdict(residues_ok));
            t += &format!("specialisation at eps={eps}: deviation {dev:.3e} {}\n", verdict(spec_ok));
            t += &format!("global and local topological zeta agree: {}\n", verdict(same));
            t
        }
    };
    let mismatch = (!failures.is_empty()).then(|| format!("failed checks: {}", failures.join(", ")));
    Ok(Output { text, mismatch })
}

fn main() -> ExitCode {
    // usage errors share exit status 1 with invalid input; 2 is for mismatches
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if !out.text.ends_with('\n') {
                println!();
            }
            match out.mismatch {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    eprintln!("verification failed: {msg}");
                    ExitCode::from(2)
                }
            }
        }
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
