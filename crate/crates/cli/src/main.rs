use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use group_expansions::expand::{expansion_depth, nilpotent_equal, Expansion};
use group_expansions::json;
use group_expansions::kz::transport;
use group_expansions::lie::{lie_ideal_build, lie_quotient_dims};
use group_expansions::malcev::{graded_rank_probe, malcev_present};
use group_expansions::ranks::{distinguish, rank_table, Family, RankKind, RankTable, ValueFlag};
use group_expansions::series::{bch, GradedIdeal};
use group_expansions::words::{default_names, parse_presentation, parse_word};
use group_expansions::{Error, NcSeries, Result};

#[derive(Parser)]
#[command(
    name = "gex",
    version,
    about = "Exact group expansions: truncated series, Malcev presentations, rank tables, iterated integrals"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Exponential,
    Magnus,
}

fn parse_level(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|_| "must be an integer".to_string())?;
    if (1..=12).contains(&n) {
        Ok(n)
    } else {
        Err("truncation level must be in 1..=12".into())
    }
}

#[derive(Args)]
struct ExpandArgs {
    /// word in the generators x1..xn, e.g. "[x1,x2] x1^-2"
    #[arg(long)]
    word: String,
    /// number of free generators
    #[arg(long)]
    n: usize,
    /// truncation level
    #[arg(long = "N", value_parser = parse_level, default_value = "4")]
    level: usize,
    /// expansion kind
    #[arg(long, value_enum, default_value = "exponential")]
    kind: Kind,
    /// machine-readable output
    #[arg(long)]
    json: bool,
}

impl ExpandArgs {
    fn expansion(&self) -> Result<Expansion> {
        match self.kind {
            Kind::Exponential => Expansion::exponential(self.n, self.level),
            Kind::Magnus => Expansion::magnus(self.n, self.level),
        }
    }

    fn parse(&self) -> Result<group_expansions::words::Word> {
        parse_word(&self.word, &default_names(self.n))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand a word into a truncated non-commutative series
    Expand(ExpandArgs),
    /// Test whether a word's image (or a series file) is group-like
    Grouplike {
        /// word in the generators x1..xn (needs --n)
        #[arg(long, conflicts_with = "series", requires = "n")]
        word: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// read the series from a JSON file instead of expanding --word
        #[arg(long)]
        series: Option<std::path::PathBuf>,
        #[arg(long = "N", value_parser = parse_level, default_value = "4")]
        level: usize,
        #[arg(long, value_enum, default_value = "exponential")]
        kind: Kind,
        #[arg(long)]
        json: bool,
    },
    /// log(exp(X_i) exp(X_j)) up to the truncation level
    Bch {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long = "N", value_parser = parse_level, default_value = "4")]
        level: usize,
        #[arg(long)]
        json: bool,
    },
    /// Lowest degree where the expansion of a word differs from 1
    Depth(ExpandArgs),
    /// Decide equality in the free nilpotent quotient of class k
    #[command(name = "nilpotent-eq")]
    NilpotentEq {
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
        /// nilpotency class
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// truncation level (defaults to k)
        #[arg(long = "N", value_parser = parse_level)]
        level: Option<usize>,
        #[arg(long, value_enum, default_value = "exponential")]
        kind: Kind,
        #[arg(long)]
        json: bool,
    },
    /// Malcev presentation from a presentation file: relator logs plus probe
    Malcev {
        /// file with lines "gens: x y ..." and "rel: <word>"
        #[arg(long)]
        presentation: std::path::PathBuf,
        #[arg(long = "N", value_parser = parse_level, default_value = "4")]
        level: usize,
        #[arg(long, value_enum, default_value = "exponential")]
        kind: Kind,
        /// compact machine output instead of pretty-printed
        #[arg(long)]
        json: bool,
    },
    /// Closed-form LCS or Chen rank table for a group family
    Ranks {
        /// family tag: free, surface, pure-braid, mccool, upper-mccool, product-free
        #[arg(long)]
        family: String,
        /// family parameter (strand count or rank)
        #[arg(long)]
        n: Option<usize>,
        /// genus, alias for --n on surface groups
        #[arg(long, conflicts_with = "n")]
        g: Option<usize>,
        /// lcs or chen
        #[arg(long)]
        kind: CliRankKind,
        #[arg(long = "K", value_parser = parse_level, default_value = "4")]
        big_k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compare rank tables of several families and report first differences
    Distinguish {
        /// family with parameter, e.g. pure-braid:4 (repeat two or more times)
        #[arg(long = "family", required = true, num_args = 1)]
        families: Vec<String>,
        #[arg(long, default_value = "chen")]
        kind: CliRankKind,
        #[arg(long = "K", value_parser = parse_level, default_value = "4")]
        big_k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Parallel transport of a flat connection around a loop file
    Kz {
        /// loop JSON file
        #[arg(long = "loop")]
        loop_file: std::path::PathBuf,
        #[arg(long = "K", value_parser = parse_level, default_value = "4")]
        big_k: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Graded dimensions of a preset quotient algebra
    Hilbert {
        #[arg(long, value_enum)]
        preset: Preset,
        /// strands (pure-braid) or rank (commutative)
        #[arg(long)]
        n: Option<usize>,
        /// genus (surface)
        #[arg(long, conflicts_with = "n")]
        g: Option<usize>,
        #[arg(long = "N", value_parser = parse_level, default_value = "4")]
        level: usize,
        /// quotient of the free Lie algebra instead of the tensor algebra
        #[arg(long)]
        lie: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CliRankKind {
    Lcs,
    Chen,
}

impl From<CliRankKind> for RankKind {
    fn from(k: CliRankKind) -> RankKind {
        match k {
            CliRankKind::Lcs => RankKind::Lcs,
            CliRankKind::Chen => RankKind::Chen,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Commutative,
    #[value(name = "pure-braid")]
    PureBraid,
    Surface,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

/// Plain-text rendering: terms length-then-lex, like "1 + X1X2 - 1/2 X2X1".
fn format_series(s: &NcSeries) -> String {
    let mut out = String::new();
    for (w, c) in s.terms() {
        let mag = if c.to_string().starts_with('-') {
            c.to_string()[1..].to_string()
        } else {
            c.to_string()
        };
        let sign = *c < num_traits::Zero::zero();
        if out.is_empty() {
            if sign {
                out.push_str("- ");
            }
        } else {
            out.push_str(if sign { " - " } else { " + " });
        }
        let word: String = w.iter().fold(String::new(), |mut acc, l| {
            let _ = write!(acc, "X{l}");
            acc
        });
        if w.is_empty() {
            let _ = write!(out, "{mag}");
        } else if mag == "1" {
            let _ = write!(out, "{word}");
        } else {
            let _ = write!(out, "{mag} {word}");
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Max |coefficient| of coproduct(s) - s (x) s, as a float.
fn grouplike_defect(s: &NcSeries) -> f64 {
    let cop = s.coproduct();
    let mut m: f64 = 0.0;
    let mut seen = std::collections::BTreeSet::new();
    for ((l, r), c) in cop.terms() {
        let d = c - &(s.coeff(l) * s.coeff(r));
        m = m.max(d.to_f64().map(f64::abs).unwrap_or(f64::INFINITY));
        seen.insert((l.clone(), r.clone()));
    }
    for (l, cl) in s.terms() {
        for (r, cr) in s.terms() {
            if l.len() + r.len() <= s.level() && !seen.contains(&(l.clone(), r.clone())) {
                let d = cl * cr;
                m = m.max(d.to_f64().map(f64::abs).unwrap_or(f64::INFINITY));
            }
        }
    }
    m
}

fn emit_series(s: &NcSeries, as_json: bool) {
    if as_json {
        println!("{}", json::series_to_json(s));
    } else {
        println!("{}", format_series(s));
    }
}

fn family_with_param(tag: &str, n: Option<usize>, g: Option<usize>) -> Result<Family> {
    let param = n
        .or(g)
        .ok_or_else(|| Error::Invalid("give the family parameter with --n (or --g)".into()))?;
    Family::from_str(&format!("{tag}:{param}"))
}

fn render_table(t: &RankTable) -> String {
    let label = match t.kind {
        RankKind::Lcs => "phi",
        RankKind::Chen => "theta",
    };
    let mut cells: Vec<(String, String)> = Vec::new();
    for (k, (v, f)) in t.values.iter().zip(&t.flags).enumerate() {
        let star = if *f == ValueFlag::Asymptotic { "*" } else { "" };
        cells.push(((k + 1).to_string(), format!("{v}{star}")));
    }
    let mut head = format!("{:<8}", "k");
    let mut row = format!("{:<8}", label);
    for (k, v) in &cells {
        let w = k.len().max(v.len()) + 2;
        let _ = write!(head, "{k:>w$}");
        let _ = write!(row, "{v:>w$}");
    }
    let mut out = format!("{} {} ranks through degree {}\n{head}\n{row}", t.family, t.kind, t.values.len());
    if t.flags.contains(&ValueFlag::Asymptotic) {
        out.push_str("\n* closed form valid for large k only");
    }
    out
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Expand(args) => {
            let s = args.expansion()?.expand(&args.parse()?)?;
            emit_series(&s, args.json);
        }
        Cmd::Grouplike { word, n, series, level, kind, json: as_json } => {
            let s = match (&series, &word) {
                (Some(path), _) => json::series_from_json(
                    &serde_json::from_str(&read_file(path)?)
                        .map_err(|e| Error::Json(e.to_string()))?,
                )?,
                (None, Some(w)) => {
                    let n = n.expect("clap enforces --n with --word");
                    let e = match kind {
                        Kind::Exponential => Expansion::exponential(n, level)?,
                        Kind::Magnus => Expansion::magnus(n, level)?,
                    };
                    e.expand(&parse_word(w, &default_names(n))?)?
                }
                (None, None) => {
                    return Err(Error::Invalid("give either --word or --series".into()));
                }
            };
            let ok = s.is_grouplike();
            let defect = grouplike_defect(&s);
            if as_json {
                println!("{}", serde_json::json!({"grouplike": ok, "defect": defect}));
            } else {
                println!("group-like: {ok}");
                println!("defect: {defect:e}");
            }
        }
        Cmd::Bch { i, j, level, json: as_json } => {
            let s = bch::<group_expansions::Rat>(i, j, level)?;
            emit_series(&s, as_json);
        }
        Cmd::Depth(args) => {
            let e = args.expansion()?;
            let d = expansion_depth(&e, &args.parse()?)?;
            if args.json {
                println!("{}", serde_json::json!({"depth": d, "level": args.level}));
            } else {
                match d {
                    Some(d) => println!("{d}"),
                    None => println!("no deviation from 1 through level {}", args.level),
                }
            }
        }
        Cmd::NilpotentEq { w1, w2, k, n, level, kind, json: as_json } => {
            let level = level.unwrap_or(k);
            let e = match kind {
                Kind::Exponential => Expansion::exponential(n, level)?,
                Kind::Magnus => Expansion::magnus(n, level)?,
            };
            let names = default_names(n);
            let eq = nilpotent_equal(&e, &parse_word(&w1, &names)?, &parse_word(&w2, &names)?, k)?;
            if as_json {
                println!("{}", serde_json::json!({"equal": eq, "class": k}));
            } else {
                println!("{eq}");
            }
        }
        Cmd::Malcev { presentation, level, kind, json: as_json } => {
            let p = parse_presentation(&read_file(&presentation)?)?;
            let e = match kind {
                Kind::Exponential => Expansion::exponential(p.rank(), level)?,
                Kind::Magnus => Expansion::magnus(p.rank(), level)?,
            };
            let mp = malcev_present(&p, &e, level)?;
            let probe = graded_rank_probe(&mp)?;
            let v = json::malcev_to_json(&mp, &probe);
            if as_json {
                println!("{v}");
            } else {
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            }
        }
        Cmd::Ranks { family, n, g, kind, big_k, json: as_json } => {
            let fam = family_with_param(&family, n, g)?;
            let t = rank_table(fam, kind.into(), big_k)?;
            if as_json {
                println!("{}", json::rank_table_to_json(&t));
            } else {
                println!("{}", render_table(&t));
            }
        }
        Cmd::Distinguish { families, kind, big_k, json: as_json } => {
            if families.len() < 2 {
                return Err(Error::Invalid("need at least two --family values".into()));
            }
            let tables = families
                .iter()
                .map(|f| rank_table(Family::from_str(f)?, kind.into(), big_k))
                .collect::<Result<Vec<_>>>()?;
            let report = distinguish(&tables)?;
            if as_json {
                println!("{}", json::distinguish_to_json(&report, &families));
            } else {
                let mut starred = false;
                for &(i, j, diff) in &report.pairs {
                    match diff {
                        Some(k) => {
                            let si = if tables[i].flags[k - 1] == ValueFlag::Asymptotic { "*" } else { "" };
                            let sj = if tables[j].flags[k - 1] == ValueFlag::Asymptotic { "*" } else { "" };
                            starred |= !si.is_empty() || !sj.is_empty();
                            println!(
                                "{} vs {}: first difference at k = {k} ({}{} vs {}{})",
                                families[i],
                                families[j],
                                tables[i].values[k - 1],
                                si,
                                tables[j].values[k - 1],
                                sj
                            );
                        }
                        None => println!(
                            "{} vs {}: identical through degree {}",
                            families[i], families[j], report.through
                        ),
                    }
                }
                if starred {
                    println!("* closed form valid for large k only");
                }
            }
        }
        Cmd::Kz { loop_file, big_k, tol, json: as_json } => {
            let v: serde_json::Value = serde_json::from_str(&read_file(&loop_file)?)
                .map_err(|e| Error::Json(e.to_string()))?;
            let lp = json::loop_from_json(&v)?;
            let t = transport(&lp, big_k, tol)?;
            let defect = group_expansions::kz::num_grouplike_defect(&t);
            if as_json {
                println!(
                    "{}",
                    serde_json::json!({
                        "series": json::num_series_to_json(&t),
                        "grouplike_defect": defect,
                    })
                );
            } else {
                for (w, c) in t.terms() {
                    let word: String = w.iter().fold(String::new(), |mut acc, l| {
                        let _ = write!(acc, "X{l}");
                        acc
                    });
                    let word = if word.is_empty() { "1".to_string() } else { word };
                    println!("{word:<12} {:+.9} {:+.9}i", c.re, c.im);
                }
                println!("group-like defect: {defect:e}");
            }
        }
        Cmd::Hilbert { preset, n, g, level, lie, json: as_json } => {
            use group_expansions::presets;
            let (name, dims): (String, Vec<u64>) = match preset {
                Preset::Commutative => {
                    let n = n.ok_or_else(|| Error::Invalid("commutative preset needs --n".into()))?;
                    if lie {
                        return Err(Error::Invalid(
                            "the commutative preset is an associative quotient; drop --lie".into(),
                        ));
                    }
                    let gens = presets::commutative_ideal_gens(n, level)?;
                    let ideal = GradedIdeal::build(n, level, &gens)?;
                    (format!("commutative:{n}"), ideal.hilbert())
                }
                Preset::PureBraid => {
                    let n = n.ok_or_else(|| Error::Invalid("pure-braid preset needs --n".into()))?;
                    let rank = n * (n - 1) / 2;
                    if lie {
                        let gens = presets::pure_braid_lie_gens(n)?;
                        let ideal = lie_ideal_build(rank, level, &gens)?;
                        (format!("pure-braid:{n}"), lie_quotient_dims(&ideal))
                    } else {
                        let gens = presets::pure_braid_assoc_gens(n, level)?;
                        let ideal = GradedIdeal::build(rank, level, &gens)?;
                        (format!("pure-braid:{n}"), ideal.hilbert())
                    }
                }
                Preset::Surface => {
                    let g = g
                        .or(n)
                        .ok_or_else(|| Error::Invalid("surface preset needs --g".into()))?;
                    if lie {
                        let gen = presets::surface_lie_gen(g)?;
                        let ideal = lie_ideal_build(2 * g, level, &[gen])?;
                        (format!("surface:{g}"), lie_quotient_dims(&ideal))
                    } else {
                        let gen = presets::surface_assoc_gen(g, level)?;
                        let ideal = GradedIdeal::build(2 * g, level, &[gen])?;
                        (format!("surface:{g}"), ideal.hilbert())
                    }
                }
            };
            if as_json {
                println!(
                    "{}",
                    serde_json::json!({"preset": name, "lie": lie, "dims": dims})
                );
            } else {
                let list: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                println!("{name} {} dims: {}", if lie { "Lie" } else { "algebra" }, list.join(", "));
            }
        }
    }
    Ok(())
}
