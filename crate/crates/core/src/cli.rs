//! The `polarlab` command line.
//!
//! ```text
//! polarlab construct --n 10 --k 528 --out frozen.txt
//! echo 1011 | polarlab encode --n 3 --k 4
//! polarlab decode --frozen frozen.txt --crc CRC-16 --decoder scl --list-size 8 llrs.txt
//! polarlab simulate --config sweep.json --out bler.csv
//! polarlab complexity --n 11 --lvec 32x11
//! ```
//!
//! Exit status is 0 on success, 2 on configuration or usage errors and 1 on
//! I/O or malformed data.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::crc::CrcSpec;
use crate::decoder::BoxplusMode;
use crate::error::{Error, Result};
use crate::polar::{Construction, FrozenSetFile, PolarCode};
use crate::sim::{
    complexity_report, CodeSpec, CrcMode, DecoderSpec, LVectorSpec, MultiCrcSpec, RVectorSpec, SimConfig, Simulation,
};

#[derive(Debug, Parser)]
#[command(
    name = "polarlab",
    version,
    about = "Polar code construction, decoding and BLER simulation"
)]
struct Cli {
    /// Seed for Monte-Carlo construction and simulation; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON simulation config; also supplies code, CRC and decoder to encode/decode.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a frozen-set file.
    Construct {
        #[command(flatten)]
        code: ConstructArgs,
    },
    /// Read message bits from stdin, write codeword bits.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Read channel LLRs, write the decoded message bits.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        decoder: DecoderArgs,
        /// LLR file, whitespace or comma separated; stdin when omitted.
        input: Option<PathBuf>,
    },
    /// Run a BLER sweep from `--config` and write CSV.
    Simulate {
        /// Worker threads; defaults to POLARLAB_THREADS or all cores.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print `space,time` for a list-size vector.
    Complexity {
        #[arg(long)]
        n: usize,
        /// A name (`L1`..`L9`) or a vector such as `32x11` or `1,1,1,8x11`.
        #[arg(long)]
        lvec: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    GaussianApproxAwgn,
    BhattacharyyaBec,
    MonteCarlo,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Number of unfrozen bits, message plus CRC.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "gaussian-approx-awgn")]
    method: Method,
    /// Design Eb/N0 in dB, or the erasure probability for the BEC method.
    #[arg(long)]
    param: Option<f64>,
    /// Monte-Carlo trials per bit channel.
    #[arg(long, default_value_t = 2000)]
    trials: usize,
}

#[derive(Debug, Args)]
struct CodeArgs {
    #[command(flatten)]
    construct: ConstructArgs,
    /// Use the information set from a frozen-set file.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["n", "k"])]
    frozen: Option<PathBuf>,
    /// Single CRC, as a polynomial or a name such as CRC-16.
    #[arg(long, conflicts_with = "r_vec")]
    crc: Option<String>,
    /// Multi-CRC lengths, e.g. `2,2,2,10` or `R1`; needs `--s`.
    #[arg(long, requires = "s")]
    r_vec: Option<String>,
    /// log2 of the number of multi-CRC sub-blocks.
    #[arg(long)]
    s: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DecoderKind {
    Sc,
    Scl,
    Rscl,
}

#[derive(Debug, Args)]
struct DecoderArgs {
    #[arg(long, value_enum)]
    decoder: Option<DecoderKind>,
    #[arg(long, default_value_t = 8)]
    list_size: usize,
    #[arg(long)]
    lvec: Option<String>,
    #[arg(long)]
    min_sum: bool,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("polarlab: {e}");
            match e {
                Error::Io(_) | Error::Dimension { .. } => 1,
                _ => 2,
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let output = match &cli.command {
        Command::Construct { code } => {
            let (n, k) = match (code.n, code.k) {
                (Some(n), Some(k)) => (n, k),
                _ => return Err(Error::Config("construct needs --n and --k".into())),
            };
            let spec = construction(code, cli.seed)?;
            let polar = PolarCode::construct(n, k, &spec)?;
            FrozenSetFile::from_code(&polar, &spec).to_string()
        }
        Command::Encode { code } => {
            let sim = simulation(cli, code, None)?;
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            let bits = parse_bits(&text)?;
            let message_len = sim.message_len();
            if bits.is_empty() || bits.len() % message_len != 0 {
                return Err(Error::dimension(message_len, bits.len()));
            }
            let mut out = String::new();
            for chunk in bits.chunks(message_len) {
                out.push_str(&format_bits(&sim.encode(chunk)?));
                out.push('\n');
            }
            out
        }
        Command::Decode { code, decoder, input } => {
            let sim = simulation(cli, code, Some(decoder))?;
            let text = match input {
                Some(path) => read_file(path)?,
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            let llrs = parse_llrs(&text)?;
            let len = sim.code().len();
            if llrs.is_empty() || llrs.len() % len != 0 {
                return Err(Error::dimension(len, llrs.len()));
            }
            let mut out = String::new();
            for block in llrs.chunks(len) {
                out.push_str(&format_bits(&sim.decode(block)?.0));
                out.push('\n');
            }
            out
        }
        Command::Simulate { threads } => {
            let path = cli
                .config
                .as_ref()
                .ok_or_else(|| Error::Config("simulate needs --config".into()))?;
            let mut config = load_config(path)?;
            if let Some(seed) = cli.seed {
                config.seed = seed;
            }
            let threads = threads.or_else(crate::sim::threads_from_env);
            crate::sim::run_bler_sweep_with_threads(&config, threads)?.to_csv()
        }
        Command::Complexity { n, lvec } => {
            let lvec = LVectorSpec::Text(lvec.clone()).resolve()?;
            let report = complexity_report(*n, &lvec)?;
            format!("{},{}\n", report.space_units, report.time_units)
        }
    };
    emit(cli.out.as_deref(), &output)
}

fn construction(args: &ConstructArgs, seed: Option<u64>) -> Result<Construction> {
    let spec = match args.method {
        Method::GaussianApproxAwgn => Construction::GaussianApproxAwgn {
            design_ebno_db: args.param.unwrap_or(2.0),
        },
        Method::BhattacharyyaBec => Construction::BhattacharyyaBec {
            erasure: args.param.unwrap_or(0.5),
        },
        Method::MonteCarlo => Construction::MonteCarlo {
            design_ebno_db: args.param.unwrap_or(2.0),
            trials: args.trials,
            seed: seed.unwrap_or(0),
        },
    };
    spec.validate()?;
    Ok(spec)
}

fn simulation(cli: &Cli, args: &CodeArgs, decoder: Option<&DecoderArgs>) -> Result<Simulation> {
    let mut config = match &cli.config {
        Some(path) => load_config(path)?,
        None => SimConfig {
            code: CodeSpec {
                n: 0,
                k: 0,
                construction: construction(&args.construct, cli.seed)?,
            },
            crc: CrcMode::None,
            decoder: DecoderSpec::Sc,
            snr_points_db: vec![0.0],
            max_trials: 1,
            max_block_errors: 1,
            seed: cli.seed.unwrap_or(0),
            boxplus: BoxplusMode::Exact,
        },
    };
    if let Some(crc) = &args.crc {
        config.crc = CrcMode::Single(crc.parse::<CrcSpec>()?);
    }
    if let Some(r) = &args.r_vec {
        let r_vec = if r.contains(',') || r.parse::<usize>().is_ok() {
            RVectorSpec::Explicit(
                r.split(',')
                    .map(|x| {
                        x.trim()
                            .parse()
                            .map_err(|_| Error::Config(format!("bad r-vector `{r}`")))
                    })
                    .collect::<Result<_>>()?,
            )
        } else {
            RVectorSpec::Named(r.clone())
        };
        config.crc = CrcMode::Multi(MultiCrcSpec {
            s: args.s.unwrap_or(0),
            r_vec,
            crc_polynomials: None,
        });
    }
    if let Some(d) = decoder {
        if let Some(kind) = d.decoder {
            config.decoder = match kind {
                DecoderKind::Sc => DecoderSpec::Sc,
                DecoderKind::Scl => DecoderSpec::Scl { list_size: d.list_size },
                DecoderKind::Rscl => DecoderSpec::Rscl {
                    lvec: LVectorSpec::Text(
                        d.lvec
                            .clone()
                            .ok_or_else(|| Error::Config("rscl needs --lvec".into()))?,
                    ),
                },
            };
        }
        if d.min_sum {
            config.boxplus = BoxplusMode::MinSum;
        }
    }
    let crc_bits = match &config.crc {
        CrcMode::None => 0,
        CrcMode::Single(spec) => spec.degree(),
        CrcMode::Multi(m) => m.layout_spec()?.total_crc_bits(),
    };
    if let Some(path) = &args.frozen {
        let file: FrozenSetFile = read_file(path)?.parse()?;
        let code = file.to_code()?;
        config.code.n = code.exponent();
        config.code.k = code
            .dimension()
            .checked_sub(crc_bits)
            .ok_or_else(|| Error::Config("frozen set smaller than the CRC".into()))?;
        return Simulation::with_code(&config, code);
    }
    if let Some(n) = args.construct.n {
        config.code.n = n;
    }
    if let Some(k) = args.construct.k {
        config.code.k = k
            .checked_sub(crc_bits)
            .ok_or_else(|| Error::Config(format!("--k {k} smaller than {crc_bits} CRC bits")))?;
    }
    if config.code.n == 0 {
        return Err(Error::Config("no code given: use --n/--k, --frozen or --config".into()));
    }
    Simulation::new(&config)
}

fn load_config(path: &Path) -> Result<SimConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// Whitespace is ignored; any character other than `0` or `1` is an error.
fn parse_bits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Io(format!("unexpected character `{other}` in bit stream"))),
        })
        .collect()
}

fn parse_llrs(text: &str) -> Result<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::Io(format!("bad LLR value `{t}`"))))
        .collect()
}

fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_and_llr_parsing() {
        assert_eq!(parse_bits("10 1\n1").unwrap(), vec![1, 0, 1, 1]);
        assert!(parse_bits("102").is_err());
        assert_eq!(parse_llrs("1.5, -2\n3e1").unwrap(), vec![1.5, -2.0, 30.0]);
        assert!(parse_llrs("1.5 x").is_err());
        assert_eq!(format_bits(&[0, 1, 1]), "011");
    }

    #[test]
    fn complexity_command() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("c.txt");
        let code = run([
            "polarlab",
            "complexity",
            "--n",
            "11",
            "--lvec",
            "32x11",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(fs::read_to_string(&out).unwrap(), "65504,720896\n");
        assert_eq!(run(["polarlab", "complexity", "--n", "10", "--lvec", "L1"]), 2);
        assert_eq!(run(["polarlab", "bogus"]), 2);
    }
}
