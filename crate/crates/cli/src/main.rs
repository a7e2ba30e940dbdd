use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use solenoid::presentation::abelianize;
use solenoid::qsub::parse_rational;
use solenoid::{
    dyadic_form, limit_member, merge_to_avoid_2, reference_braid, search_homs, tietze_reduce, truncate,
    validate_scheme, verify_hom, DefiningSequence, EmbeddingScheme, EventuallyPeriodic, GroupPresentation,
    HeightDescriptor, HomAssignment, Severity, REFERENCE_BRAIDS,
};

#[derive(Parser)]
#[command(name = "solenoid", version, about = "Complements of braided solenoids in the 3-sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Presentation of the complement of the L-th torus of a scheme
    Present {
        /// scheme file, `-` for stdin
        scheme: String,
        #[arg(long)]
        level: usize,
        /// rewrite on s_i, z_i generators (2 strands at every level)
        #[arg(long)]
        dyadic_form: bool,
        /// eliminate defined generators
        #[arg(long)]
        reduce: bool,
    },
    /// Abelian invariants and generator classes
    Abelianize { presentation: String },
    /// Exit 0 iff the assignment kills every relator
    HomVerify { presentation: String, assignment: String },
    /// Homomorphisms with non-Abelian image into the symmetric group
    HomSearch {
        presentation: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Exit 0 iff the two sequences define homeomorphic solenoids
    SolEquiv { first: String, second: String },
    /// Exit 0 iff the rational lies in the subgroup of the height descriptor
    QMember {
        descriptor: String,
        #[arg(allow_hyphen_values = true)]
        rational: String,
    },
    /// Exit 0 iff the rational lies in the direct limit of the sequence
    LimitMember {
        sequence: String,
        #[arg(allow_hyphen_values = true)]
        rational: String,
    },
    /// Exit 0 iff the two descriptors give isomorphic subgroups
    QIso { first: String, second: String },
    /// Height descriptor of a defining sequence
    Heights { sequence: String },
    /// A defining sequence with the given heights
    SeqFromHeights { descriptor: String },
    /// Print a built-in embedding scheme
    Scheme {
        #[command(subcommand)]
        kind: SchemeKind,
    },
    /// Reference braids with their recorded volumes
    Table1 {
        /// `n,variant`
        #[arg(long)]
        row: Option<String>,
    },
    /// Check a scheme file; exit 1 on errors
    Validate { scheme: String },
}

#[derive(Subcommand)]
enum SchemeKind {
    Unknotted {
        sequence: String,
    },
    Trefoil,
    Geometry {
        sequence: String,
        /// one bit per level, eventually periodic (`0,1 | 1`)
        #[arg(long)]
        choices: String,
        /// merge factors of 2 into neighbours first
        #[arg(long)]
        merge: bool,
    },
}

type Outcome = Result<bool, String>;

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn parse<T>(what: &str, s: &str) -> Result<T, String>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e| format!("{what}: {e}"))
}

fn read<T>(path: &str) -> Result<T, String>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    parse(path, &read_input(path)?)
}

fn parse_bits(s: &str) -> Result<EventuallyPeriodic<bool>, String> {
    let bits: EventuallyPeriodic<u8> = parse("choices", s)?;
    if let Some(b) = bits.prefix().iter().chain(bits.cycle()).find(|&&b| b > 1) {
        return Err(format!("choices: `{b}` is not a bit"));
    }
    Ok(bits.map(|&b| b == 1))
}

fn answer(out: &mut impl Write, yes: bool) -> Outcome {
    writeln!(out, "{yes}").map_err(|e| e.to_string())?;
    Ok(yes)
}

fn run(command: Command, out: &mut impl Write) -> Outcome {
    let io = |e: io::Error| e.to_string();
    match command {
        Command::Present { scheme, level, dyadic_form: dyadic, reduce } => {
            let e: EmbeddingScheme = read(&scheme)?;
            let mut p = if dyadic { dyadic_form(&e, level) } else { truncate(&e, level) }.map_err(|e| e.to_string())?;
            if reduce {
                p = tietze_reduce(&p);
            }
            write!(out, "{p}").map_err(io)?;
            Ok(true)
        }
        Command::Abelianize { presentation } => {
            let p: GroupPresentation = read(&presentation)?;
            let ab = abelianize(&p);
            writeln!(out, "{}", ab.invariants).map_err(io)?;
            for g in p.generators() {
                let coords: Vec<String> = ab.classes[g].iter().map(ToString::to_string).collect();
                writeln!(out, "class {g}: {}", coords.join(" ")).map_err(io)?;
            }
            Ok(true)
        }
        Command::HomVerify { presentation, assignment } => {
            let p: GroupPresentation = read(&presentation)?;
            let a: HomAssignment = read(&assignment)?;
            let ok = verify_hom(&p, &a).map_err(|e| format!("{assignment}: {e}"))?;
            answer(out, ok)
        }
        Command::HomSearch { presentation, degree, budget } => {
            let p: GroupPresentation = read(&presentation)?;
            let r = search_homs(&p, degree, budget);
            for (i, a) in r.homs.iter().enumerate() {
                if i > 0 {
                    writeln!(out).map_err(io)?;
                }
                write!(out, "{a}").map_err(io)?;
            }
            writeln!(out, "# homs: {}, nodes: {}, exhausted: {}", r.homs.len(), r.nodes, r.budget_exhausted)
                .map_err(io)?;
            if r.budget_exhausted && r.homs.is_empty() {
                eprintln!("warning: node budget exhausted; the empty result is inconclusive");
            }
            Ok(!r.homs.is_empty())
        }
        Command::SolEquiv { first, second } => {
            let a: DefiningSequence = parse("first sequence", &first)?;
            let b: DefiningSequence = parse("second sequence", &second)?;
            answer(out, a.homeomorphic(&b))
        }
        Command::QMember { descriptor, rational } => {
            let h: HeightDescriptor = parse("descriptor", &descriptor)?;
            let r = parse_rational(&rational).map_err(|e| format!("rational: {e}"))?;
            answer(out, h.contains(&r))
        }
        Command::LimitMember { sequence, rational } => {
            let s: DefiningSequence = parse("sequence", &sequence)?;
            let r = parse_rational(&rational).map_err(|e| format!("rational: {e}"))?;
            answer(out, limit_member(&s, &r))
        }
        Command::QIso { first, second } => {
            let a: HeightDescriptor = parse("first descriptor", &first)?;
            let b: HeightDescriptor = parse("second descriptor", &second)?;
            answer(out, a.isomorphic(&b))
        }
        Command::Heights { sequence } => {
            let s: DefiningSequence = parse("sequence", &sequence)?;
            writeln!(out, "{}", HeightDescriptor::from_sequence(&s)).map_err(io)?;
            Ok(true)
        }
        Command::SeqFromHeights { descriptor } => {
            let h: HeightDescriptor = parse("descriptor", &descriptor)?;
            writeln!(out, "{}", h.to_sequence()).map_err(io)?;
            Ok(true)
        }
        Command::Scheme { kind } => {
            let e = match kind {
                SchemeKind::Unknotted { sequence } => EmbeddingScheme::unknotted(&parse("sequence", &sequence)?),
                SchemeKind::Trefoil => EmbeddingScheme::trefoil(),
                SchemeKind::Geometry { sequence, choices, merge } => {
                    let mut s: DefiningSequence = parse("sequence", &sequence)?;
                    if merge {
                        s = merge_to_avoid_2(&s);
                    }
                    EmbeddingScheme::geometry(&s, &parse_bits(&choices)?).map_err(|e| e.to_string())?
                }
            };
            write!(out, "{e}").map_err(io)?;
            Ok(true)
        }
        Command::Table1 { row } => {
            let rows: Vec<_> = match row {
                None => REFERENCE_BRAIDS.iter().map(|r| (r.braid(), r.volume, r.strands, r.variant)).collect(),
                Some(arg) => {
                    let (n, v) =
                        arg.split_once(',').ok_or_else(|| format!("row: expected `n,variant`, got `{arg}`"))?;
                    let n: usize = parse("row", n.trim())?;
                    let v: usize = parse("row", v.trim())?;
                    let (b, vol) = reference_braid(n, v).map_err(|e| e.to_string())?;
                    vec![(b, vol, n, v)]
                }
            };
            for (b, volume, n, v) in rows {
                writeln!(out, "{n},{v}\t{b}\t{volume}").map_err(io)?;
            }
            Ok(true)
        }
        Command::Validate { scheme } => {
            let e: EmbeddingScheme = read(&scheme)?;
            let diagnostics = validate_scheme(&e);
            for d in &diagnostics {
                writeln!(out, "{d}").map_err(io)?;
            }
            Ok(!diagnostics.iter().any(|d| d.severity == Severity::Error))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            let _ = out.flush();
            eprintln!("error: {}", msg.lines().next().unwrap_or(""));
            ExitCode::from(2)
        }
    }
}
