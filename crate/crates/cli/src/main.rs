use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tamecf::engine::{
    group_shape, p_part_shape, parse_prime, Certificate, Engine, EngineError, FiniteTheorem,
};
use tamecf::lmfdbio::{record_to_json, validate_profile, ProfileStore, Query};
use tamecf::par::{self, Execution};
use tamecf::quadfield::{ClassGroup, Modulus, QuadField};
use tamecf::rayclass::{RayClassGroup, RESIDUE_SEED};

#[derive(Parser)]
#[command(
    name = "tamecf",
    version,
    about = "Ray class groups and tame pro-p Galois groups of imaginary quadratic fields"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized internals (residue-ring generator search).
    #[arg(long, global = true, default_value_t = RESIDUE_SEED)]
    seed: u64,
    /// Worker threads for searches; 1 runs sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Class group of Q(sqrt(d)).
    Classgroup(FieldArg),
    /// Ray class group modulo a product of prime ideals.
    Rayclass {
        #[command(flatten)]
        field: FieldArg,
        /// Modulus, e.g. `7`, `151.1`, `5.1^2,13`.
        #[arg(short = 'm', allow_hyphen_values = true)]
        modulus: String,
        #[arg(short = 'p')]
        p: Option<u64>,
    },
    /// Primes q satisfying the one-prime structure theorem.
    FindPrimes {
        #[arg(long, value_enum)]
        theorem: SearchTheorem,
        #[command(flatten)]
        field: FieldArg,
        #[arg(short = 'p')]
        p: u64,
        #[arg(long = "max-norm")]
        max_norm: u64,
    },
    /// Check a structure theorem and print the presentation.
    Present {
        #[arg(long, value_enum)]
        theorem: PresentTheorem,
        #[command(flatten)]
        field: FieldArg,
        #[arg(short = 'p')]
        p: u64,
        #[arg(long = "q")]
        q: String,
        #[arg(long = "q2")]
        q2: Option<String>,
    },
    /// Check a finiteness criterion (3.7, 3.8 or 3.9).
    Finite {
        #[arg(long)]
        theorem: String,
        #[command(flatten)]
        field: FieldArg,
        /// Defaults to 2 for 3.8 and 3.9.
        #[arg(short = 'p')]
        p: Option<u64>,
        #[arg(long = "q")]
        q: Option<String>,
        #[arg(long = "q2")]
        q2: Option<String>,
        /// 3.8 only: search for a pair with norms up to this bound.
        #[arg(long)]
        search: Option<u64>,
    },
    /// Reproduce a worked example.
    VerifyExample {
        #[arg(value_parser = ["5.1", "5.2", "appendix"])]
        id: String,
    },
    /// Look up a number field profile by label or polynomial.
    Fetch {
        #[arg(long)]
        label: String,
    },
}

#[derive(Args)]
struct FieldArg {
    /// Negative squarefree d.
    #[arg(short = 'd', allow_hyphen_values = true)]
    d: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchTheorem {
    S1,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresentTheorem {
    S1,
    S2,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure {
            code: e.exit_code() as u8,
            msg: e.to_string(),
        }
    }
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure {
        code: 1,
        msg: format!("{flag}: {msg}"),
    }
}

/// What a command produced: text, JSON, and the exit code.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            code: 0,
        }
    }

    fn certificate(c: &Certificate) -> Self {
        Output::ok(c.to_text(), serde_json::to_value(c).expect("serializable"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let exec = match cli.threads {
        Some(0) => return fail(usage("--threads", "must be at least 1")),
        Some(1) => Execution::Sequential,
        Some(n) => {
            if let Err(e) = par::set_threads(n) {
                return fail(usage("--threads", e));
            }
            Execution::Parallel
        }
        None => Execution::Parallel,
    };
    let engine = Engine::new(ProfileStore::from_env(), exec);
    match run(&cli, &engine) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("error: {}", f.msg);
    ExitCode::from(f.code)
}

fn field(d: i64) -> Result<QuadField, Failure> {
    QuadField::new(d).map_err(|e| usage("-d", e))
}

fn run(cli: &Cli, engine: &Engine) -> Result<Output, Failure> {
    match &cli.command {
        Command::Classgroup(f) => classgroup(f.d),
        Command::Rayclass {
            field: f,
            modulus,
            p,
        } => rayclass(f.d, modulus, *p, cli.seed),
        Command::FindPrimes {
            theorem: SearchTheorem::S1,
            field: f,
            p,
            max_norm,
        } => find_primes(engine, f.d, *p, *max_norm),
        Command::Present {
            theorem,
            field: f,
            p,
            q,
            q2,
        } => {
            let k = field(f.d)?;
            let q1 = parse_prime(&k, q, "--q")?;
            let c = match (theorem, q2) {
                (PresentTheorem::S1, None) => engine.check_thm_s1(&k, *p, &q1)?,
                (PresentTheorem::S1, Some(_)) => {
                    return Err(usage("--q2", "s1 takes a single prime"))
                }
                (PresentTheorem::S2, Some(q2)) => {
                    let q2 = parse_prime(&k, q2, "--q2")?;
                    engine.check_thm_s2(&k, *p, &q1, &q2)?
                }
                (PresentTheorem::S2, None) => return Err(usage("--q2", "s2 needs a second prime")),
            };
            Ok(Output::certificate(&c))
        }
        Command::Finite {
            theorem,
            field: f,
            p,
            q,
            q2,
            search,
        } => finite(
            engine,
            theorem,
            f.d,
            *p,
            q.as_deref(),
            q2.as_deref(),
            *search,
        ),
        Command::VerifyExample { id } => {
            let r = engine.verify_example(id)?;
            let code = if r.pass { 0 } else { 3 };
            Ok(Output {
                text: r.to_text(),
                json: serde_json::to_value(&r).expect("serializable"),
                code,
            })
        }
        Command::Fetch { label } => fetch(engine, label),
    }
}

fn classgroup(d: i64) -> Result<Output, Failure> {
    let k = field(d)?;
    let cl = ClassGroup::compute(&k);
    let shape = group_shape(cl.group());
    let text = format!(
        "field: {}\ndiscriminant: {}\nclass number: {}\nclass group: {shape}\n",
        k.name(),
        k.discriminant(),
        cl.class_number()
    );
    let json = json!({
        "field": d,
        "discriminant": k.discriminant(),
        "class_number": cl.class_number().to_string(),
        "structure": shape.to_string(),
        "invariants": shape.0.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    });
    Ok(Output::ok(text, json))
}

fn rayclass(d: i64, spec: &str, p: Option<u64>, seed: u64) -> Result<Output, Failure> {
    let k = field(d)?;
    let m = Modulus::parse(&k, spec).map_err(|e| usage("-m", e))?;
    if let Some(p) = p {
        if p < 2 || !tamecf::arith::is_prime_u64(p) {
            return Err(usage("-p", format!("{p} is not prime")));
        }
    }
    let ray = RayClassGroup::with_seed(&k, &m, ClassGroup::compute(&k), seed).map_err(|e| {
        let e = EngineError::from(e);
        Failure {
            code: e.exit_code() as u8,
            msg: format!("-m {spec}: {e}"),
        }
    })?;
    let shape = group_shape(ray.group());
    let mut text = format!(
        "field: {}\nmodulus: {} (norm {})\norder: {}\nstructure: {shape}\n",
        k.name(),
        m.label(),
        m.norm(),
        ray.order()
    );
    let mut json = json!({
        "field": d,
        "modulus": m.label(),
        "norm": m.norm().to_string(),
        "order": ray.order().to_string(),
        "structure": shape.to_string(),
        "invariants": shape.0.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    });
    if let Some(p) = p {
        let part = p_part_shape(ray.group(), p);
        let rank = ray.group().p_rank(p);
        text.push_str(&format!("{p}-part: {part}\n{p}-rank: {rank}\n"));
        json["p"] = json!(p);
        json["p_part"] = json!(part.to_string());
        json["p_rank"] = json!(rank);
    }
    Ok(Output::ok(text, json))
}

fn find_primes(engine: &Engine, d: i64, p: u64, max_norm: u64) -> Result<Output, Failure> {
    let k = field(d)?;
    let hits = engine.search_q_s1(&k, p, max_norm)?;
    let mut text = format!(
        "theorem Thm1.1: d = {d}, p = {p}, norms up to {max_norm}: {} primes\n",
        hits.len()
    );
    for h in &hits {
        let c = &h.certificate.conclusion;
        text.push_str(&format!(
            "  {} (norm {}, {}): {}{}\n",
            h.prime.label,
            h.prime.norm,
            h.prime.generator,
            tamecf::engine::status_text(c.status),
            c.order
                .as_ref()
                .map(|o| format!(", order {o}"))
                .unwrap_or_default()
        ));
    }
    let json = json!({
        "theorem": "Thm1.1",
        "field": d,
        "p": p,
        "max_norm": max_norm,
        "primes": hits,
    });
    Ok(Output::ok(text, json))
}

fn finite(
    engine: &Engine,
    theorem: &str,
    d: i64,
    p: Option<u64>,
    q: Option<&str>,
    q2: Option<&str>,
    search: Option<u64>,
) -> Result<Output, Failure> {
    let t: FiniteTheorem = theorem.parse().map_err(|e| usage("--theorem", e))?;
    let k = field(d)?;
    let p = match (t, p) {
        (_, Some(p)) => p,
        (FiniteTheorem::T37, None) => return Err(usage("-p", "required for 3.7")),
        (_, None) => 2,
    };
    if let Some(bound) = search {
        if t != FiniteTheorem::T38 {
            return Err(usage("--search", "only available for 3.8"));
        }
        if p != 2 {
            return Err(EngineError::NotTwo {
                theorem: t.id().into(),
                p,
            }
            .into());
        }
        return match engine.search_pair_thm38(&k, bound)? {
            Some(c) => Ok(Output::certificate(&c)),
            None => Ok(Output::ok(
                format!("theorem Thm3.8: no pair of primes with norms up to {bound}\n"),
                json!({"theorem": "Thm3.8", "field": d, "p": 2, "search_bound": bound, "found": null}),
            )),
        };
    }
    let q = q.ok_or_else(|| usage("--q", "required"))?;
    let mut s = vec![parse_prime(&k, q, "--q")?];
    if let Some(q2) = q2 {
        s.push(parse_prime(&k, q2, "--q2")?);
    }
    Ok(Output::certificate(&engine.check_finiteness(t, &k, p, &s)?))
}

fn fetch(engine: &Engine, label: &str) -> Result<Output, Failure> {
    let query = Query::parse(label).map_err(|e| usage("--label", e))?;
    let f = engine.store().fetch(&query).map_err(EngineError::from)?;
    let violations = validate_profile(&f.profile);
    let prof = &f.profile;
    let text = format!(
        "label: {}\nprovenance: {}\npolynomial: {}\nsignature: {:?}\nclass group: {}\nclass number: {}\ntorsion order: {}\nfundamental units: {}\nviolations: {}\n",
        prof.label,
        f.provenance,
        prof.defining,
        prof.signature,
        tamecf::abelian::GroupShape(prof.class_group.clone()),
        prof.class_number,
        prof.torsion_order,
        prof.fundamental_units.len(),
        if violations.is_empty() { "none".to_string() } else { violations.join("; ") }
    );
    let json = json!({
        "label": prof.label,
        "provenance": f.provenance,
        "record": record_to_json(prof),
        "violations": violations,
    });
    Ok(Output::ok(text, json))
}
