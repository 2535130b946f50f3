use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use respk_core::amalgam::{theorem41_pipeline, Amalgam, Conjugacy, SurfaceOutcome};
use respk_core::cert::{self, surface_alphabet, Certificate, VerifyReport};
use respk_core::lab::{self, TableGroup};
use respk_core::magnus::{order_exact_witness, residual_p_witness};
use respk_core::pgroups::PHom;
use respk_core::separate::{double_coset_decide, double_coset_witness, separate_conjugacy_free, ConjOutcome};
use respk_core::words::gamma;
use respk_core::{par, Alphabet, Config, Error, Word};

const EXIT_INTERNAL: u8 = 1;
const EXIT_CONJUGATE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "respk", version, about = "Conjugacy p-separability witnesses for free and surface groups")]
#[command(disable_help_flag = true, disable_help_subcommand = true)]
struct Cli {
    /// Print help (`-h` is the second word of a pair).
    #[arg(long, global = true, action = clap::ArgAction::Help)]
    help: Option<bool>,
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

/// Overrides for the keys of the `RESPK_CONFIG` file.
#[derive(Args)]
struct Global {
    /// Largest image enumerated during verification.
    #[arg(long, global = true)]
    enum_cap: Option<String>,
    /// Largest Magnus truncation degree.
    #[arg(long, global = true)]
    degree_cap: Option<String>,
    /// Largest witness-tree depth.
    #[arg(long, global = true)]
    depth_cap: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// `parallel` or `sequential`.
    #[arg(long, global = true)]
    execution: Option<String>,
    /// Comma-separated list from `swap,twist1,twist2`.
    #[arg(long, global = true)]
    normalization: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Witnesses in the free group F(x, y, ...).
    #[command(subcommand)]
    Free(FreeCmd),
    /// Conjugacy and separation in surface groups.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Lower p-central series checks on small groups.
    #[command(subcommand)]
    Lab(LabCmd),
    /// Re-check certificates from their generator images.
    Verify {
        file: Option<PathBuf>,
        /// Verify every `*.cert` / `*.txt` file in a directory.
        #[arg(long, conflicts_with = "file")]
        all: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Pair {
    #[arg(short, long)]
    p: Option<u32>,
    #[arg(short, long)]
    g: String,
    #[arg(short = 'h')]
    h: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FreeCmd {
    /// Separate the conjugacy classes of g and h in F(rank).
    Separate {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// A homomorphism onto a finite p-group not killing g.
    Residual {
        #[arg(short, long)]
        p: Option<u32>,
        #[arg(short, long)]
        g: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// A homomorphism with φ(g) of order exactly p^e.
    OrderWitness {
        #[arg(short, long)]
        p: Option<u32>,
        #[arg(short, long)]
        g: String,
        #[arg(short, long)]
        e: u32,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Separate γ^a g from h γ^b for all a, b in the genus-n surface free cover.
    DoubleCoset {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 1)]
        genus: usize,
    },
}

#[derive(Subcommand)]
enum SurfaceCmd {
    /// Separate g and h in the surface group of (even) genus R.
    Separate {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        genus: usize,
    },
    /// Decide conjugacy of g and h.
    Conjugate {
        #[arg(short, long)]
        g: String,
        #[arg(short = 'h')]
        h: String,
        #[arg(long)]
        genus: usize,
    },
}

#[derive(Args)]
struct LabArgs {
    #[arg(long)]
    group: String,
    #[arg(short, long)]
    p: Option<u32>,
    #[arg(long, default_value_t = 3)]
    depth: usize,
}

#[derive(Subcommand)]
enum LabCmd {
    /// Series orders and containment checks.
    Series(LabArgs),
    /// Sizes of Aut, Inn and I_p.
    Aut(LabArgs),
    /// Filtration claims for A_n and B_n up to --depth.
    Claims(LabArgs),
}

/// A failed run: message and exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_cap() { EXIT_CAP } else { EXIT_INTERNAL };
        Failure(code, e.to_string())
    }
}

type Run = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = config(&cli.global).and_then(|cfg| run(cli.command, cfg));
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn config(g: &Global) -> Result<Config, Failure> {
    let mut cfg = Config::from_env()?;
    let pairs = [
        ("enum-cap", &g.enum_cap),
        ("degree-cap", &g.degree_cap),
        ("depth-cap", &g.depth_cap),
        ("seed", &g.seed),
        ("execution", &g.execution),
        ("normalization", &g.normalization),
    ];
    for (k, v) in pairs {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn with_prime(cfg: &Config, p: Option<u32>) -> Result<Config, Failure> {
    let mut cfg = cfg.clone();
    if let Some(p) = p {
        cfg.prime = p;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cmd: Command, cfg: Config) -> Run {
    match cmd {
        Command::Free(c) => free(c, &cfg),
        Command::Surface(c) => surface(c, &cfg),
        Command::Lab(c) => lab_cmd(c, &cfg),
        Command::Verify { file: Some(f), all: None } => verify_files(&[f], &cfg),
        Command::Verify { file: None, all: Some(dir) } => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
                .map_err(|e| Failure(EXIT_INTERNAL, format!("{}: {e}", dir.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && matches!(p.extension().and_then(|x| x.to_str()), Some("cert" | "txt")))
                .collect();
            files.sort();
            verify_files(&files, &cfg)
        }
        Command::Verify { .. } => Err(Failure(EXIT_INTERNAL, "give a certificate file or --all <dir>".into())),
    }
}

fn parse_word(alphabet: &Alphabet, text: &str) -> Result<Word, Failure> {
    Ok(alphabet.parse(text)?)
}

fn write_cert(cert: &Certificate, out: Option<&Path>) -> Result<(), Failure> {
    let text = cert::emit(cert);
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure(EXIT_INTERNAL, format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_hom(hom: &PHom, alphabet: &Alphabet) {
    println!("target: {}", hom.target());
    for (name, img) in alphabet.names().iter().zip(hom.images()) {
        println!("image {name}: {img}");
    }
}

fn free(cmd: FreeCmd, cfg: &Config) -> Run {
    match cmd {
        FreeCmd::Separate { pair, rank } => {
            let cfg = with_prime(cfg, pair.p)?;
            let alphabet = Alphabet::standard(rank);
            let (g, h) = (parse_word(&alphabet, &pair.g)?, parse_word(&alphabet, &pair.h)?);
            match separate_conjugacy_free(&g, &h, cfg.prime, rank, &cfg)? {
                ConjOutcome::Conjugator(f) => {
                    println!("conjugate: {}", alphabet.format(&f));
                    Ok(EXIT_CONJUGATE)
                }
                ConjOutcome::Witness(w) => {
                    eprintln!("witness: {} nodes, depth {}, {}", w.root.size(), w.root.depth(), w.report.summary());
                    let cert = Certificate::free(cfg.prime, alphabet, w.root, &w.report, cfg.enum_cap);
                    write_cert(&cert, pair.out.as_deref())?;
                    Ok(0)
                }
            }
        }
        FreeCmd::Residual { p, g, rank } => {
            let cfg = with_prime(cfg, p)?;
            let alphabet = Alphabet::standard(rank);
            let g = parse_word(&alphabet, &g)?;
            let hom = residual_p_witness(&g, cfg.prime, rank, &cfg)?;
            print_hom(&hom, &alphabet);
            println!("image g: {}", hom.apply(&g));
            println!("order: {}", hom.order_of(&g));
            Ok(0)
        }
        FreeCmd::OrderWitness { p, g, e, rank } => {
            let cfg = with_prime(cfg, p)?;
            let alphabet = Alphabet::standard(rank);
            let g = parse_word(&alphabet, &g)?;
            let hom = order_exact_witness(&g, cfg.prime, e, rank, &cfg)?;
            print_hom(&hom, &alphabet);
            println!("order: {}", hom.order_of(&g));
            Ok(0)
        }
        FreeCmd::DoubleCoset { pair, genus } => {
            let cfg = with_prime(cfg, pair.p)?;
            let alphabet = Alphabet::surface(genus, false);
            let (g, h) = (parse_word(&alphabet, &pair.g)?, parse_word(&alphabet, &pair.h)?);
            if let Some((a, b)) = double_coset_decide(&g, &h, &gamma(genus)) {
                println!("related: gamma^{a} g = h gamma^{b}");
                return Ok(EXIT_CONJUGATE);
            }
            let w = double_coset_witness(&g, &h, genus, cfg.prime, &cfg)?;
            eprintln!("witness: modulus {}, {} table entries", w.modulus, w.table_size);
            let cert = Certificate::double_coset(cfg.prime, genus, g, h, &w.hom, w.modulus, cfg.enum_cap);
            write_cert(&cert, pair.out.as_deref())?;
            Ok(0)
        }
    }
}

fn half_genus(genus: usize) -> Result<usize, Failure> {
    if genus == 0 || !genus.is_multiple_of(2) {
        return Err(Failure(EXIT_INTERNAL, format!("genus must be even and positive, got {genus}")));
    }
    Ok(genus / 2)
}

fn surface(cmd: SurfaceCmd, cfg: &Config) -> Run {
    match cmd {
        SurfaceCmd::Separate { pair, genus } => {
            let cfg = with_prime(cfg, pair.p)?;
            let n = half_genus(genus)?;
            let alphabet = surface_alphabet(n);
            let (g, h) = (parse_word(&alphabet, &pair.g)?, parse_word(&alphabet, &pair.h)?);
            match theorem41_pipeline(&g, &h, n, cfg.prime, &cfg)? {
                SurfaceOutcome::Conjugator(f) => {
                    println!("conjugate: {}", alphabet.format(&f));
                    Ok(EXIT_CONJUGATE)
                }
                SurfaceOutcome::Witness(w) => {
                    eprintln!("witness: {:?}, {}", w.step, w.report.summary());
                    let cert = Certificate::surface(
                        cfg.prime,
                        n,
                        w.g.clone(),
                        w.h.clone(),
                        w.hom.factor_images(),
                        w.hom.gamma_order,
                        &w.report,
                        cfg.enum_cap,
                    );
                    write_cert(&cert, pair.out.as_deref())?;
                    Ok(0)
                }
            }
        }
        SurfaceCmd::Conjugate { g, h, genus } => {
            let n = half_genus(genus)?;
            let alphabet = surface_alphabet(n);
            let src = Amalgam::surface(n);
            let (ga, ha) = (src.from_word(&parse_word(&alphabet, &g)?), src.from_word(&parse_word(&alphabet, &h)?));
            match src.is_conjugate(&ga, &ha, cfg.enum_cap)? {
                Conjugacy::Conjugate(f) => {
                    println!("verdict: conjugate");
                    println!("conjugator: {}", alphabet.format(&src.to_word(&f)));
                }
                Conjugacy::NotConjugate => println!("verdict: not-conjugate"),
            }
            Ok(0)
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn lab_cmd(cmd: LabCmd, cfg: &Config) -> Run {
    let (args, which) = match cmd {
        LabCmd::Series(a) => (a, 0),
        LabCmd::Aut(a) => (a, 1),
        LabCmd::Claims(a) => (a, 2),
    };
    let p = with_prime(cfg, args.p)?.prime as usize;
    let g = TableGroup::by_name(&args.group)?;
    println!("group: {}", g.name());
    println!("order: {}", g.order());
    println!("prime: {p}");
    match which {
        0 => {
            let chain = lab::lower_p_series(&g, p);
            println!("series-orders: {}", join(&chain.orders()));
            println!("reaches-trivial: {}", chain.reaches_trivial());
            println!("series-normal-nested: {}", lab::check_series(&g, p, &chain));
            println!("commutator-containment: {}", lab::check_lemma21(&g, p, args.depth + 1));
        }
        1 => {
            let auts = lab::aut_group(&g, lab::AUT_CAP)?;
            let inn = lab::inner_automorphisms(&g);
            let ip = lab::ip_kernel(&g, p, &auts);
            println!("aut-order: {}", auts.len());
            println!("inn-order: {}", inn.len());
            println!("ip-order: {}", ip.len());
            println!("inn-in-ip: {}", inn.iter().all(|a| ip.contains(a)));
        }
        _ => {
            let an = lab::an_filtration_checks(&g, p, args.depth)?;
            let bn = lab::bn_filtration_checks(&g, p, args.depth)?;
            println!("depth: {}", args.depth);
            println!("a-orders: {}", join(&an.orders));
            println!("claim1: {}", an.claim1);
            println!("claim3: {}", an.claim3);
            println!("claim4-hom: {}", an.claim4_hom);
            println!("claim4-kernel: {}", an.claim4_kernel);
            println!("b-orders: {}", join(&bn.orders));
            println!("inn-in-b: {}", bn.inn_contained);
            println!("inn-order: {}", bn.inn_order);
            println!("b-intersection-order: {}", bn.intersection_order);
            println!("b-intersection-outer: {}", bn.outer_in_intersection);
            println!("graded-bracket: {}", lab::graded_bracket_check(&g, p));
        }
    }
    Ok(0)
}

enum Checked {
    Report(VerifyReport),
    Unreadable(String),
    Cap(String),
}

fn verify_files(files: &[PathBuf], cfg: &Config) -> Run {
    let results = par::map(cfg.execution, files, |path| {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return Checked::Unreadable(e.to_string()),
        };
        let cert = match cert::parse(&text) {
            Ok(c) => c,
            Err(e) => return Checked::Unreadable(e.to_string()),
        };
        match cert::verify(&cert, cfg.execution) {
            Ok(r) => Checked::Report(r),
            Err(e) if e.is_cap() => Checked::Cap(e.to_string()),
            Err(e) => Checked::Unreadable(e.to_string()),
        }
    });
    let mut code = 0;
    for (path, res) in files.iter().zip(results) {
        let line = match res {
            Checked::Report(r) => {
                if !r.passed() {
                    code = code.max(EXIT_VERIFY);
                }
                r.summary()
            }
            Checked::Unreadable(msg) => {
                code = code.max(EXIT_VERIFY);
                format!("fail: {msg}")
            }
            Checked::Cap(msg) => {
                if code == 0 {
                    code = EXIT_CAP;
                }
                msg
            }
        };
        println!("{}: {line}", path.display());
    }
    Ok(code)
}
