//! Command-line front end: config parsing, subcommands and output formatting.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constants::{
    constants_for, corollary_constants, crossover_log, eval_bound, integrate_regions, small_t_bound, BoundMode,
    ConstantSet, LinearBound, RegionIntegrals, SMALL_T_LIMIT,
};
use crate::error::{Error, Result};
use crate::optimize::{optimize, ConstName, Fixed, Objective, SearchResult};
use crate::quad::QuadratureSpec;
use crate::regions::{BoundParams, LineBound};
use crate::study::{appendix_theorem_check, cluster_first, interval_averages, scan_extremes};
use crate::zeros::{find_zeros, ingest_zeros, write_zeros, ZeroList};

/// (c, r, eta) of the five published parameter rows.
pub const PROFILE_POINTS: [(&str, [f64; 3]); 5] = [
    ("row1", [1.000225, 1.000605, 0.000158]),
    ("row2", [1.070007, 1.182997, 0.069901]),
    ("row3", [1.0434, 1.25045, 0.04]),
    ("row4", [1.00006, 1.499556, 1.54244e-5]),
    ("row5", [1.499159, 1.998357, 0.499050]),
];

pub const DEFAULT_ZEROS: &str = "zeros.txt";

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub profiles: BTreeMap<String, BoundParams>,
    pub quadrature: QuadratureSpec,
    /// keys without a profile prefix, applied on top of the selected profile
    overrides: Vec<(usize, String, String)>,
}

impl Default for Config {
    fn default() -> Self {
        let profiles = PROFILE_POINTS
            .iter()
            .map(|(name, x)| (name.to_string(), BoundParams::published(x[0], x[1], x[2])))
            .collect();
        Config { profiles, quadrature: QuadratureSpec::default(), overrides: Vec::new() }
    }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("line {line}: {key} expects a number, got {v:?}")))
}

fn parse_usize(line: usize, key: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("line {line}: {key} expects a non-negative integer, got {v:?}")))
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|x| parse_f64(line, key, x)).collect()
}

fn parse_line_bound(line: usize, key: &str, v: &str) -> Result<LineBound> {
    let xs = parse_list(line, key, v)?;
    if xs.len() != 4 {
        return Err(Error::Config(format!("line {line}: {key} expects coeff, t_power, log_power, t_min")));
    }
    Ok(LineBound { coeff: xs[0], t_power: xs[1], log_power: xs[2], t_min: xs[3] })
}

fn apply_key(p: &mut BoundParams, line: usize, key: &str, v: &str) -> Result<()> {
    match key {
        "c" => p.c = parse_f64(line, key, v)?,
        "r" => p.r = parse_f64(line, key, v)?,
        "eta" => p.eta = parse_f64(line, key, v)?,
        "n" => {
            let n = parse_usize(line, key, v)?;
            *p = p.with_n(n);
        }
        "q" => p.q = parse_list(line, key, v)?,
        "j1" => p.j1 = parse_usize(line, key, v)?,
        "j2" => p.j2 = parse_usize(line, key, v)?,
        "t0" => p.t0 = parse_f64(line, key, v)?,
        "line1" => p.line1 = parse_line_bound(line, key, v)?,
        "line_half" => p.line_half = parse_line_bound(line, key, v)?,
        "b" => p.b = parse_f64(line, key, v)?,
        "big_b" => p.big_b = parse_f64(line, key, v)?,
        _ => return Err(Error::Config(format!("line {line}: unknown key {key:?}"))),
    }
    Ok(())
}

impl Config {
    /// `key = value` lines with '#' comments. `name.key = value` edits (or
    /// creates, starting from row1) the profile `name`; bare keys apply to
    /// whichever profile is selected.
    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        let mut abs_tol = cfg.quadrature.abs_tol;
        let mut max_sub = cfg.quadrature.max_subdivisions;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line}: expected key = value, got {s:?}")))?;
            let k = k.trim().to_ascii_lowercase();
            match k.as_str() {
                "abs_tol" => abs_tol = parse_f64(line, &k, v)?,
                "max_subdivisions" => max_sub = parse_usize(line, &k, v)?,
                _ => match k.split_once('.') {
                    Some((prof, key)) => {
                        let base = cfg.profiles["row1"].clone();
                        let p = cfg.profiles.entry(prof.to_string()).or_insert(base);
                        apply_key(p, line, key, v)?;
                    }
                    None => {
                        apply_key(&mut BoundParams::published(1.0, 1.0, 0.0), line, &k, v)?;
                        cfg.overrides.push((line, k.clone(), v.trim().to_string()));
                    }
                },
            }
        }
        cfg.quadrature = QuadratureSpec::new(abs_tol, max_sub).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>) -> Result<Config> {
        match path {
            Some(p) => Config::parse(&std::fs::read_to_string(p)?),
            None => Ok(Config::default()),
        }
    }

    /// The named profile with bare-key overrides applied, validated.
    pub fn params(&self, profile: &str) -> Result<BoundParams> {
        let mut p = self
            .profiles
            .get(profile)
            .cloned()
            .ok_or_else(|| Error::Config(format!("unknown profile {profile:?}")))?;
        for (line, k, v) in &self.overrides {
            apply_key(&mut p, *line, k, v)?;
        }
        p.validate()?;
        Ok(p)
    }
}

// ---------------------------------------------------------------- formatting

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct Output {
    pub format: Format,
    pub full_precision: bool,
}

impl Output {
    pub fn num(&self, x: f64) -> String {
        if self.full_precision {
            format!("{x}")
        } else {
            sig10(x)
        }
    }

    fn table(&self, header: &[&str], rows: &[Vec<String>]) -> String {
        let sep = if self.format == Format::Tsv { "\t" } else { " " };
        let mut out = String::new();
        let _ = writeln!(out, "{}", header.join(sep));
        for r in rows {
            let _ = writeln!(out, "{}", r.join(sep));
        }
        out
    }
}

/// Ten significant digits, fixed notation inside [1e-4, 1e10).
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..10).contains(&e) {
        let dec = (9 - e).max(0) as usize;
        format!("{x:.dec$}")
    } else {
        format!("{x:.9e}")
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

// ---------------------------------------------------------------- commands

#[derive(Debug, Serialize)]
struct ConstantsReport<'a> {
    profile: &'a str,
    params: &'a BoundParams,
    integrals: &'a RegionIntegrals,
    raw: ConstantSet,
    rounded_up: ConstantSet,
}

pub fn cmd_constants(cfg: &Config, profile: &str, out: Output) -> Result<String> {
    let p = cfg.params(profile)?;
    let ri = integrate_regions(&p, &cfg.quadrature)?;
    let raw = crate::constants::assemble(&p, &ri)?;
    let up = raw.rounded_up();
    if out.format == Format::Json {
        return Ok(json(&ConstantsReport { profile, params: &p, integrals: &ri, raw, rounded_up: up }));
    }
    let mut s = String::new();
    if out.format == Format::Tsv {
        let rows: Vec<Vec<String>> = ConstantSet::NAMES
            .iter()
            .zip(raw.as_array().iter().zip(up.as_array()))
            .map(|(n, (r, u))| vec![n.to_string(), out.num(*r), format!("{u:.5}")])
            .collect();
        return Ok(out.table(&["name", "raw", "rounded_up"], &rows));
    }
    let _ = writeln!(s, "# profile {profile}: c = {}, r = {}, eta = {}", p.c, p.r, p.eta);
    let _ = writeln!(s, "# region integrals");
    for (k, v) in [
        ("Cbar1", ri.cbar1),
        ("Cbar2", ri.cbar2),
        ("D3", ri.d3),
        ("kappa1", ri.kappa1),
        ("kappa2", ri.kappa2),
        ("kappa3", ri.kappa3),
        ("M1", ri.m1),
        ("M2", ri.m2),
    ] {
        let _ = writeln!(s, "{k} {}", out.num(v));
    }
    let _ = writeln!(s, "# integral of F over each region at T0");
    for (id, v) in &ri.per_region {
        let _ = writeln!(s, "{id} {}", out.num(*v));
    }
    let _ = writeln!(s, "# constants, raw");
    for (n, v) in ConstantSet::NAMES.iter().zip(raw.as_array()) {
        let _ = writeln!(s, "{n} {}", out.num(v));
    }
    let _ = writeln!(s, "# constants, rounded up");
    for (n, v) in ConstantSet::NAMES.iter().zip(up.as_array()) {
        let _ = writeln!(s, "{n} {v:.5}");
    }
    Ok(s)
}

/// "C1" or "C1=2,C3=0.5".
pub fn parse_weights(spec: &str) -> Result<BTreeMap<ConstName, f64>> {
    let mut w = BTreeMap::new();
    for part in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (name, val) = match part.split_once('=') {
            Some((n, v)) => (n, v.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad weight {part:?}")))?),
            None => (part, 1.0),
        };
        w.insert(name.parse::<ConstName>()?, val);
    }
    Ok(w)
}

pub fn cmd_optimize(
    cfg: &Config,
    profile: &str,
    minimize: &str,
    fixed: Fixed,
    seed: u64,
    budget: usize,
    out: Output,
) -> Result<(String, SearchResult)> {
    // the point of the base profile is irrelevant, only its other fields are used
    let mut base = cfg.profiles.get(profile).cloned().ok_or_else(|| Error::Config(format!("unknown profile {profile:?}")))?;
    for (line, k, v) in &cfg.overrides {
        apply_key(&mut base, *line, k, v)?;
    }
    let mut obj = Objective::new(parse_weights(minimize)?, fixed, base)?;
    obj.quadrature = cfg.quadrature;
    let res = optimize(&obj, seed, budget)?;
    let text = match out.format {
        Format::Json => json(&res),
        _ => {
            let mut rows = vec![
                vec!["c".into(), out.num(res.params.c)],
                vec!["r".into(), out.num(res.params.r)],
                vec!["eta".into(), out.num(res.params.eta)],
                vec!["objective".into(), out.num(res.objective_value)],
                vec!["evaluations".into(), res.evaluations.to_string()],
            ];
            for (n, v) in ConstantSet::NAMES.iter().zip(res.constants.as_array()) {
                rows.push(vec![n.to_string(), out.num(v)]);
            }
            out.table(&["name", "value"], &rows)
        }
    };
    Ok((text, res))
}

pub fn cmd_zeros_compute(t_max: f64, path: &Path) -> Result<String> {
    let z = find_zeros(t_max)?;
    write_zeros(&z, path)?;
    Ok(format!("{} zeros up to {} written to {}\n", z.len(), z.t_max_verified, path.display()))
}

pub fn cmd_zeros_ingest(src: &Path, dest: Option<&Path>) -> Result<String> {
    let z = ingest_zeros(src)?;
    if let Some(d) = dest {
        write_zeros(&z, d)?;
    }
    let first = z.ordinates.first().map_or("-".to_string(), |v| v.to_string());
    Ok(format!("{} zeros, first {first}, covered to {}\n", z.len(), z.coverage()))
}

pub fn cmd_clusters(z: &ZeroList, n_max: usize, out: Output) -> Result<String> {
    let rep = cluster_first(n_max, z)?;
    if out.format == Format::Json {
        return Ok(json(&rep));
    }
    let mut rows: Vec<Vec<String>> = rep.rows.iter().map(|r| vec![r.n.to_string(), out.num(r.t_first)]).collect();
    let mut s = out.table(&["n", "t_first"], &rows);
    rows.clear();
    let _ = writeln!(s, "# max window/log t = {} at t = {}", out.num(rep.max_ratio), out.num(rep.argmax));
    Ok(s)
}

pub fn cmd_extremes(z: &ZeroList, out: Output) -> Result<String> {
    let recs = scan_extremes(z);
    if out.format == Format::Json {
        return Ok(json(&recs));
    }
    let rows: Vec<Vec<String>> = recs
        .iter()
        .map(|r| vec![r.n.to_string(), out.num(r.t_n), out.num(r.eps_plus), out.num(r.eps_minus)])
        .collect();
    let mut s = out.table(&["n", "t_n", "eps_plus", "eps_minus"], &rows);
    if recs.is_empty() {
        s.push_str("# no exceptions found\n");
    }
    Ok(s)
}

pub fn cmd_averages(z: &ZeroList, chunks: usize, out: Output) -> Result<String> {
    let av = interval_averages(z, chunks)?;
    if out.format == Format::Json {
        return Ok(json(&av));
    }
    let rows: Vec<Vec<String>> = av.iter().map(|(i, m)| vec![i.to_string(), out.num(*m), out.num(m - 1.375)]).collect();
    Ok(out.table(&["chunk", "mean", "mean_minus_11_8"], &rows))
}

/// (text, passed)
pub fn cmd_theorem_check(z: &ZeroList) -> (String, bool) {
    let ok = appendix_theorem_check(z);
    (if ok { "PASS\n" } else { "FAIL\n" }.to_string(), ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pair {
    /// first counting bound of row 1 against that of row 3
    Th1,
    /// the two S(T) bounds of row 1
    Corst,
    /// the two counting bounds of row 4
    Cor13,
}

pub fn pair_bounds(cfg: &Config, pair: Pair) -> Result<(LinearBound, LinearBound)> {
    let cs = |name: &str| -> Result<ConstantSet> {
        Ok(constants_for(&cfg.params(name)?, &cfg.quadrature)?.rounded_up())
    };
    Ok(match pair {
        Pair::Th1 => (cs("row1")?.nt_first(), cs("row3")?.nt_first()),
        Pair::Corst => {
            let c = cs("row1")?;
            (c.st_first(), c.st_second())
        }
        Pair::Cor13 => {
            let c = cs("row4")?;
            (c.nt_first(), c.nt_second())
        }
    })
}

pub fn cmd_crossover(cfg: &Config, pair: Pair, out: Output) -> Result<String> {
    let (a, b) = pair_bounds(cfg, pair)?;
    let l = crossover_log(&a, &b)?;
    Ok(match out.format {
        Format::Json => json(&serde_json::json!({ "log_t": l, "first": a, "second": b })),
        _ => out.table(&["log_T", "T"], &[vec![out.num(l), out.num(l.exp())]]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Nt,
    St,
    SmallT,
}

impl From<ModeArg> for BoundMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Nt => BoundMode::NT,
            ModeArg::St => BoundMode::ST,
            ModeArg::SmallT => BoundMode::SmallT,
        }
    }
}

pub fn cmd_bound_eval(cfg: &Config, profile: &str, ts: &[f64], mode: ModeArg, out: Output) -> Result<String> {
    let cs = constants_for(&cfg.params(profile)?, &cfg.quadrature)?.rounded_up();
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        rows.push(vec![out.num(t), out.num(eval_bound(t, &cs, mode.into())?)]);
    }
    Ok(out.table(&["T", "bound"], &rows))
}

/// 200 log-spaced (T, bound) pairs on [e, t_max] plus the small-T constant where it applies.
pub fn dump_curve(cfg: &Config, profile: &str, t_max: f64, path: &Path) -> Result<()> {
    let cs = constants_for(&cfg.params(profile)?, &cfg.quadrature)?.rounded_up();
    let (lo, hi) = (1.0f64, t_max.max(std::f64::consts::E).ln());
    let mut s = String::from("T\tnt\tst\tsmall_t\n");
    for i in 0..200 {
        let t = (lo + (hi - lo) * i as f64 / 199.0).exp();
        let small = if t <= SMALL_T_LIMIT { small_t_bound().to_string() } else { "nan".into() };
        let _ = writeln!(
            s,
            "{t}\t{}\t{}\t{small}",
            eval_bound(t, &cs, BoundMode::NT)?,
            eval_bound(t, &cs, BoundMode::ST)?
        );
    }
    std::fs::write(path, s)?;
    Ok(())
}

pub fn cmd_corollary(cfg: &Config, profile: &str, out: Output) -> Result<String> {
    let cs = constants_for(&cfg.params(profile)?, &cfg.quadrature)?.rounded_up();
    let cc = corollary_constants(&cs);
    if out.format == Format::Json {
        return Ok(json(&cc));
    }
    let rows = vec![
        vec!["script_C3".into(), out.num(cc.script_c3)],
        vec!["script_C3p".into(), out.num(cc.script_c3p)],
        vec!["script_D3".into(), out.num(cc.script_d3)],
        vec!["script_D3p".into(), out.num(cc.script_d3p)],
        vec!["script_E".into(), out.num(cc.script_e)],
        vec!["script_Ep".into(), out.num(cc.script_ep)],
    ];
    Ok(out.table(&["name", "value"], &rows))
}

// ---------------------------------------------------------------- clap surface

#[derive(Debug, Parser)]
#[command(name = "zerocount", version, about = "Explicit bounds for N(T) and S(T), and zero statistics")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// key = value configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// parameter profile (row1..row5 or one defined in the config)
    #[arg(long, global = true, default_value = "row1")]
    pub profile: String,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// print numbers with full precision instead of 10 significant digits
    #[arg(long, global = true)]
    pub full_precision: bool,
    /// worker thread cap
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// region integrals and the assembled constants
    Constants,
    /// search (c, r, eta) minimizing a weighted sum of constants
    Optimize {
        /// constants to minimize, e.g. C1 or C1=1,C3=0.5
        #[arg(long, default_value = "C1")]
        minimize: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20000)]
        budget: usize,
        #[arg(long)]
        fix_c: Option<f64>,
        #[arg(long)]
        fix_r: Option<f64>,
        #[arg(long)]
        fix_eta: Option<f64>,
    },
    /// compute or ingest zero ordinates
    Zeros {
        #[command(subcommand)]
        action: ZerosCmd,
    },
    /// statistics over a zero file
    Study {
        /// zero file
        #[arg(long, default_value = DEFAULT_ZEROS)]
        zeros: PathBuf,
        #[command(subcommand)]
        action: StudyCmd,
    },
    /// evaluate bounds
    Bound {
        #[command(subcommand)]
        action: BoundCmd,
    },
    /// constants of the unit- and short-interval corollaries
    Corollary,
}

#[derive(Debug, Subcommand)]
pub enum ZerosCmd {
    Compute {
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value = DEFAULT_ZEROS)]
        out: PathBuf,
    },
    Ingest {
        path: PathBuf,
        /// rewrite the validated list here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum StudyCmd {
    Clusters {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    Extremes,
    Averages {
        #[arg(long, default_value_t = 1)]
        chunks: usize,
    },
    TheoremCheck,
}

#[derive(Debug, Subcommand)]
pub enum BoundCmd {
    Eval {
        /// heights, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long, value_enum, default_value = "nt")]
        mode: ModeArg,
        /// also write 200 (T, bound) pairs up to the largest t to this file
        #[arg(long)]
        dump_curve: Option<PathBuf>,
    },
    Crossover {
        #[arg(long, value_enum, default_value = "th1")]
        pair: Pair,
    },
}

/// Runs one command; returns the text for standard output and the exit code.
pub fn run(cli: Cli) -> Result<(String, i32)> {
    if let Some(n) = cli.global.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let g = &cli.global;
    let cfg = Config::load(g.config.as_deref())?;
    let out = Output { format: g.format, full_precision: g.full_precision };
    let text = match cli.command {
        Command::Constants => cmd_constants(&cfg, &g.profile, out)?,
        Command::Optimize { minimize, seed, budget, fix_c, fix_r, fix_eta } => {
            let fixed = Fixed { c: fix_c, r: fix_r, eta: fix_eta };
            cmd_optimize(&cfg, &g.profile, &minimize, fixed, seed, budget, out)?.0
        }
        Command::Zeros { action: ZerosCmd::Compute { t_max, out: path } } => cmd_zeros_compute(t_max, &path)?,
        Command::Zeros { action: ZerosCmd::Ingest { path, out: dest } } => cmd_zeros_ingest(&path, dest.as_deref())?,
        Command::Study { zeros, action } => {
            let z = ingest_zeros(&zeros)?;
            match action {
                StudyCmd::Clusters { n_max } => cmd_clusters(&z, n_max, out)?,
                StudyCmd::Extremes => cmd_extremes(&z, out)?,
                StudyCmd::Averages { chunks } => cmd_averages(&z, chunks, out)?,
                StudyCmd::TheoremCheck => {
                    let (s, ok) = cmd_theorem_check(&z);
                    return Ok((s, if ok { 0 } else { 3 }));
                }
            }
        }
        Command::Bound { action: BoundCmd::Eval { t, mode, dump_curve: dump } } => {
            let s = cmd_bound_eval(&cfg, &g.profile, &t, mode, out)?;
            if let Some(path) = dump {
                let top = t.iter().copied().fold(std::f64::consts::E, f64::max);
                dump_curve(&cfg, &g.profile, top, &path)?;
            }
            s
        }
        Command::Bound { action: BoundCmd::Crossover { pair } } => cmd_crossover(&cfg, pair, out)?,
        Command::Corollary => cmd_corollary(&cfg, &g.profile, out)?,
    };
    Ok((text, 0))
}
