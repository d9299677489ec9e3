//! Batch front-end. Every subcommand writes UTF-8 CSV with a header row.
//!
//! Exit codes: 0 success, 2 invalid input or parameters, 3 a flagged
//! non-convergence, 1 I/O failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::atoms::{check_atom, decay_scan, make_simple_atom, two_cell_atom, AtomSpec, ScanSettings, ScanSide, ScanVariant};
use crate::counterexamples::{
    carleman_norm_term, carleman_partial_f, carleman_weighted_term, partial_sum_scan, reverse_hardy_pair,
    rudin_shapiro_sup_ratio, signed_hardy_pair, write_pairs, Carleman, StepSequenceSpec,
};
use crate::error::{Error, Result};
use crate::fourier::{truncated_fourier, FrequencyGrid};
use crate::grid::{weighted_integral, GridFunction, WeightedNormSpec};
use crate::hardy::{hardy_eps, t_epsilon, EpsilonMask};
use crate::harness::{run_sweep, write_reports, IneqKind, SweepConfig};
use crate::netspace::{net_norm, net_profile, DyadicLattice};
use crate::rearrange::{lorentz_norm, LorentzParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ha-lab", version, about = "Hardy averages, truncated Fourier transforms and weighted inequality sweeps")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Norms of a serialized grid function
    Norms(NormsArgs),
    /// Truncated Fourier transform on a frequency grid
    Fourier(FourierArgs),
    /// Hardy operators, or their limit on truncated transforms
    Hardy(HardyArgs),
    /// Inequality sweeps from a key = value config file
    Verify(VerifyArgs),
    /// Random simple atoms and decay scans
    Atoms(AtomsArgs),
    /// Reverse Hardy counterexamples
    Counterexample(CounterArgs),
    /// The Rudin-Shapiro step function and its partial sums
    Carleman(CarlemanArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NormsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// L_p norm; repeatable, `inf` allowed
    #[arg(long, value_parser = parse_ext)]
    lp: Vec<f64>,
    /// Lorentz norm with the same (p, q) on every axis
    #[arg(long, num_args = 2, value_names = ["P", "Q"], value_parser = parse_ext)]
    lorentz: Option<Vec<f64>>,
    /// net-space norm over the covering dyadic lattice
    #[arg(long, num_args = 2, value_names = ["P", "Q"], value_parser = parse_ext)]
    net: Option<Vec<f64>>,
    /// (int prod |x_i|^{a p} |f|^p)^{1/p}
    #[arg(long, num_args = 2, value_names = ["A", "P"], value_parser = parse_ext)]
    weighted: Option<Vec<f64>>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct FreqArgs {
    /// half-width of the frequency box
    #[arg(long, default_value_t = 32.0)]
    extent: f64,
    /// cells on each side of 0
    #[arg(long, default_value_t = 256)]
    cells: usize,
}

impl FreqArgs {
    fn grid(&self, d: usize) -> Result<FrequencyGrid> {
        FrequencyGrid::uniform(d, self.extent, self.cells)
    }
}

#[derive(Args, Debug)]
struct FourierArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// edge of the truncation cube (`inf` for the full transform)
    #[arg(long = "N", alias = "n", value_parser = parse_ext, default_value = "inf")]
    n: f64,
    #[command(flatten)]
    freq: FreqArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct HardyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// per-axis bits, 0 = Cesaro average, 1 = Bellman tail
    #[arg(long, default_value = "0")]
    eps: String,
    /// apply to F_N f along this N schedule instead of f itself
    #[arg(long, value_delimiter = ',', value_parser = parse_ext)]
    schedule: Option<Vec<f64>>,
    /// sup-gap tolerance for the last schedule step
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    freq: FreqArgs,
    /// where to write the operator output grid function
    #[arg(long)]
    dump: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    levels: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Fourier,
    Hardy,
    Both,
}

#[derive(Args, Debug)]
struct AtomsArgs {
    #[arg(long, value_parser = parse_ext, default_value = "1")]
    p: f64,
    /// moment-bearing dyadic interval `a:b` (default 0:1)
    #[arg(long, value_parser = parse_interval)]
    interval: Option<(f64, f64)>,
    /// rectangle side of the set A, `a:b`; repeatable
    #[arg(long, value_parser = parse_interval)]
    rest: Vec<(f64, f64)>,
    #[arg(long, default_value_t = 16)]
    cells: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// use the two-cell atom +1/2, -1/2 on (0, 2) (p = 1 only)
    #[arg(long)]
    two_cell: bool,
    #[arg(long, default_value_t = 3)]
    r_min: i32,
    #[arg(long, default_value_t = 10)]
    r_max: i32,
    #[arg(long, value_enum, default_value_t = VariantArg::Both)]
    variant: VariantArg,
    #[arg(long, default_value = "interior")]
    side: String,
    /// where to write the atom itself
    #[arg(long)]
    atom_out: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CounterMode {
    #[value(name = "reverse_hardy", alias = "reverse-hardy")]
    ReverseHardy,
    Signed,
}

#[derive(Args, Debug)]
struct CounterArgs {
    #[arg(long, value_enum)]
    mode: CounterMode,
    #[arg(long, value_parser = parse_ext)]
    p: f64,
    /// reverse_hardy: rows n = 1..=n
    #[arg(long, default_value_t = 8)]
    n: u32,
    /// signed: cut-off index; comma-separated list allowed
    #[arg(long = "N", value_delimiter = ',', default_value = "16,64,256")]
    big_n: Vec<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CarlemanWhat {
    /// the step function g on (-1/2, n_max + 1/2)
    G,
    /// f_n: Abel form agreement and the Cauchy gap f_{2n} - f_n
    F,
    /// block sums of ||g||_2^2, ||g||_p^p and the weighted integral
    Divergence,
    /// max_k |P_k(t)| / sqrt(k+1) at random t
    Partial,
}

#[derive(Args, Debug)]
struct CarlemanArgs {
    #[arg(long, value_enum, default_value_t = CarlemanWhat::Divergence)]
    what: CarlemanWhat,
    #[arg(long, default_value_t = 256)]
    n_max: u64,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// exponent of the unweighted divergent norm
    #[arg(long, default_value_t = 1.5)]
    p: f64,
    /// exponent of the weighted integral
    #[arg(long, default_value_t = 3.0)]
    weighted_p: f64,
    #[arg(long, default_value_t = 10)]
    m_min: u32,
    #[arg(long, default_value_t = 60)]
    m_max: u32,
    #[command(flatten)]
    output: Output,
}

fn parse_ext(s: &str) -> std::result::Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("{s:?}: {e}")),
    }
}

fn parse_interval(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("{s:?}: expected a:b"))?;
    Ok((parse_ext(a)?, parse_ext(b)?))
}

fn read_grid(path: &PathBuf) -> Result<GridFunction> {
    GridFunction::read_csv(BufReader::new(File::open(path)?))
}

fn sink(out: &Option<PathBuf>, stdout: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn write_rows(w: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(header)?;
    for r in rows {
        wr.write_record(r)?;
    }
    wr.flush()?;
    Ok(())
}

fn configure_threads() {
    if let Ok(v) = std::env::var("HA_LAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            // a pool may already exist when run() is called twice in-process
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Parses `argv` (including the program name) and runs one subcommand.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    configure_threads();
    match dispatch(cli.cmd, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Io(_) => EXIT_IO,
                _ => EXIT_INVALID,
            }
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Norms(a) => norms(a, stdout),
        Command::Fourier(a) => {
            let f = read_grid(&a.input)?;
            let g = truncated_fourier(&f, a.n, &a.freq.grid(f.dim())?)?;
            sink(&a.output.out, stdout, |w| g.write_csv(w))?;
            Ok(EXIT_OK)
        }
        Command::Hardy(a) => hardy(a, stdout),
        Command::Verify(a) => verify(a, stdout),
        Command::Atoms(a) => atoms(a, stdout),
        Command::Counterexample(a) => counterexample(a, stdout),
        Command::Carleman(a) => carleman(a, stdout),
    }
}

fn norms(a: NormsArgs, stdout: &mut dyn Write) -> Result<i32> {
    let f = read_grid(&a.input)?;
    let d = f.dim();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let lps = if a.lp.is_empty() && a.lorentz.is_none() && a.net.is_none() && a.weighted.is_none() {
        vec![1.0, 2.0, f64::INFINITY]
    } else {
        a.lp.clone()
    };
    for p in lps {
        if !(p > 0.0) {
            return Err(Error::InvalidParameter(format!("L_p needs p > 0, got {p}")));
        }
        rows.push(vec![format!("L{p}"), f.lp_norm(p).to_string()]);
    }
    if let Some(v) = &a.lorentz {
        let value = lorentz_norm(&f, &LorentzParams::uniform(d, v[0], v[1])?)?;
        rows.push(vec![format!("lorentz({},{})", v[0], v[1]), value.to_string()]);
    }
    if let Some(v) = &a.net {
        let nn = net_norm(&net_profile(&f, &DyadicLattice::covering(&f))?, v[0], v[1])?;
        let name = if nn.truncated { format!("net({},{}) truncated", v[0], v[1]) } else { format!("net({},{})", v[0], v[1]) };
        rows.push(vec![name, nn.value.to_string()]);
    }
    if let Some(v) = &a.weighted {
        let value = weighted_integral(&f, &WeightedNormSpec::isotropic(d, v[0], v[1])?)?;
        rows.push(vec![format!("weighted({},{})", v[0], v[1]), value.to_string()]);
    }
    sink(&a.output.out, stdout, |w| write_rows(w, &["norm", "value"], &rows))?;
    Ok(EXIT_OK)
}

fn hardy(a: HardyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let f = read_grid(&a.input)?;
    let eps: EpsilonMask = if a.eps.len() == 1 && f.dim() > 1 { a.eps.repeat(f.dim()).parse()? } else { a.eps.parse()? };
    match &a.schedule {
        None => {
            let h = hardy_eps(&f, &eps)?;
            let target = a.dump.clone().or(a.output.out.clone());
            sink(&target, stdout, |w| h.write_csv(w))?;
            Ok(EXIT_OK)
        }
        Some(schedule) => {
            let (h, rep) = t_epsilon(&f, &eps, schedule, &a.freq.grid(f.dim())?, a.tol)?;
            if let Some(p) = &a.dump {
                h.write_csv(BufWriter::new(File::create(p)?))?;
            }
            let mut rows = Vec::new();
            for (i, n) in rep.schedule.iter().enumerate() {
                let gap = if i == 0 { String::new() } else { rep.gaps[i - 1].to_string() };
                rows.push(vec![n.to_string(), gap, rep.converged.to_string()]);
            }
            sink(&a.output.out, stdout, |w| write_rows(w, &["N", "gap", "converged"], &rows))?;
            Ok(if rep.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
        }
    }
}

fn verify(a: VerifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let text = std::fs::read_to_string(&a.config)?;
    let mut cfg = SweepConfig::parse(&text)?;
    if let Some(k) = &a.kind {
        cfg.kind = k.parse::<IneqKind>()?;
    }
    if let Some(l) = a.levels {
        cfg.levels = l;
    }
    let reports = run_sweep(&cfg)?;
    sink(&a.output.out, stdout, |w| write_reports(&reports, w))?;
    let grew = reports.iter().any(|r| r.flags.iter().any(|f| f.starts_with("growth")));
    Ok(if grew { EXIT_NOT_CONVERGED } else { EXIT_OK })
}

fn atoms(a: AtomsArgs, stdout: &mut dyn Write) -> Result<i32> {
    let (spec, atom) = if a.two_cell {
        if a.p != 1.0 {
            return Err(Error::InvalidParameter("the two-cell atom is a p = 1 atom".into()));
        }
        (AtomSpec::new(1.0, vec![(0.0, 2.0)], vec![], 2)?, two_cell_atom())
    } else {
        let spec = AtomSpec::new(a.p, vec![a.interval.unwrap_or((0.0, 1.0))], a.rest.clone(), a.cells)?;
        let atom = make_simple_atom(&spec, a.seed)?;
        (spec, atom)
    };
    if !check_atom(&spec, &atom)?.is_atom(1e-12) {
        return Err(Error::Precondition("generated function fails the atom conditions".into()));
    }
    if let Some(p) = &a.atom_out {
        atom.write_csv(BufWriter::new(File::create(p)?))?;
    }
    if a.r_max < a.r_min + 3 {
        return Err(Error::InvalidParameter("need r_max >= r_min + 3".into()));
    }
    let rs: Vec<i32> = (a.r_min..=a.r_max).collect();
    let side: ScanSide = a.side.parse()?;
    let variants: &[ScanVariant] = match a.variant {
        VariantArg::Fourier => &[ScanVariant::Fourier],
        VariantArg::Hardy => &[ScanVariant::HardyFourier],
        VariantArg::Both => &[ScanVariant::Fourier, ScanVariant::HardyFourier],
    };
    let mut rows = Vec::new();
    let mut ok = true;
    for &v in variants {
        let scan = decay_scan(&atom, &spec, &rs, side, v, &ScanSettings::default())?;
        ok &= scan.passes(0.15) && scan.flags.is_empty();
        for (r, j) in scan.rs.iter().zip(&scan.js) {
            rows.push(vec![
                scan.p.to_string(),
                scan.moment_order.to_string(),
                v.to_string(),
                r.to_string(),
                j.to_string(),
                scan.slope.to_string(),
                scan.predicted.to_string(),
            ]);
        }
    }
    sink(&a.output.out, stdout, |w| write_rows(w, &["p", "N", "variant", "r", "J", "slope", "predicted"], &rows))?;
    Ok(if ok { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn counterexample(a: CounterArgs, stdout: &mut dyn Write) -> Result<i32> {
    let pairs = match a.mode {
        CounterMode::ReverseHardy => {
            let spec = StepSequenceSpec::standard(a.p);
            (1..=a.n).map(|n| reverse_hardy_pair(&spec, n)).collect::<Result<Vec<_>>>()?
        }
        CounterMode::Signed => a.big_n.iter().map(|&n| signed_hardy_pair(a.p, n)).collect::<Result<Vec<_>>>()?,
    };
    sink(&a.output.out, stdout, |w| write_pairs(&pairs, w))?;
    Ok(EXIT_OK)
}

fn carleman(a: CarlemanArgs, stdout: &mut dyn Write) -> Result<i32> {
    match a.what {
        CarlemanWhat::G => {
            let g = Carleman::new(a.n_max).g();
            sink(&a.output.out, stdout, |w| g.write_csv(w))?;
            Ok(EXIT_OK)
        }
        CarlemanWhat::F => {
            let rep = carleman_partial_f(a.n_max, a.samples, a.seed)?;
            let rows = vec![vec![
                rep.n.to_string(),
                rep.max_form_diff.to_string(),
                rep.sup_gap.to_string(),
                rep.gap_bound.to_string(),
            ]];
            sink(&a.output.out, stdout, |w| write_rows(w, &["n", "abel_diff", "sup_gap", "gap_bound"], &rows))?;
            Ok(if rep.sup_gap <= rep.gap_bound { EXIT_OK } else { EXIT_NOT_CONVERGED })
        }
        CarlemanWhat::Divergence => {
            if a.m_max < a.m_min + 3 {
                return Err(Error::InvalidParameter("need m_max >= m_min + 3".into()));
            }
            let ms: Vec<u32> = (a.m_min..=a.m_max).collect();
            let scans = [
                ("l2".to_string(), partial_sum_scan(carleman_norm_term(2.0), &ms)?),
                (format!("l{}", a.p), partial_sum_scan(carleman_norm_term(a.p), &ms)?),
                (format!("weighted{}", a.weighted_p), partial_sum_scan(carleman_weighted_term(a.weighted_p), &ms)?),
            ];
            let mut rows = Vec::new();
            for (name, s) in &scans {
                for ((m, ps), b) in s.ms.iter().zip(&s.partial_sums).zip(&s.block_sums) {
                    rows.push(vec![name.clone(), ((1u64 << (m + 1)) - 1).to_string(), ps.to_string(), b.to_string(), s.slope.to_string()]);
                }
            }
            sink(&a.output.out, stdout, |w| write_rows(w, &["series", "index", "partial_sum", "block_sum", "slope"], &rows))?;
            Ok(EXIT_OK)
        }
        CarlemanWhat::Partial => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
            let ts: Vec<f64> = (0..a.samples).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
            let ratios = rudin_shapiro_sup_ratio(a.n_max, &ts);
            let rows: Vec<Vec<String>> = ts.iter().zip(&ratios).map(|(t, r)| vec![t.to_string(), r.to_string()]).collect();
            sink(&a.output.out, stdout, |w| write_rows(w, &["t", "max_ratio"], &rows))?;
            Ok(if ratios.iter().all(|&r| r <= 5.0) { EXIT_OK } else { EXIT_NOT_CONVERGED })
        }
    }
}
