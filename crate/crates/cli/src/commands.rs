use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use infosynth::boolfn;
use infosynth::evolve;
use infosynth::gatelib::GateLibrary;
use infosynth::geometry::{self, CapacityMode, CapacityReport, Candidate, Geometry, Precision, TargetShape};
use infosynth::io::{self, LibrarySpec, RunConfig};
use infosynth::metrics::{self, NetworkMetrics};
use infosynth::TruthTable;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

impl From<infosynth::Error> for CliError {
    fn from(e: infosynth::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

const FUNCTION_FORMATS: &str = "\
Function files are either PLA or truth-vector text.

PLA: `.i N`, `.o M`, optional `.p P`, then one `<inputs> <outputs>` row per
input assignment and `.e`. Every one of the 2^N rows must appear exactly once;
don't-care symbols (`-`, `~`) are rejected because entropies are defined over
fully specified functions.

Truth vector: a header `n=<N> m=<M>` followed by lines `out<j>=<2^N bits>`,
row 0 first, with x1 as the most significant bit of the row index.";

#[derive(Parser, Debug)]
#[command(name = "infosynth", version, about = "Information measures and evolutionary synthesis of gate-level circuits", after_help = FUNCTION_FORMATS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Entropy of each output and conditional entropy given each input.
    Measure {
        /// PLA or truth-vector file.
        file: PathBuf,
        #[arg(long)]
        csv: bool,
    },
    /// Library, cell and geometry capacity of a cell array.
    Capacity {
        /// Levels x gates per level, e.g. 3x3.
        #[arg(long)]
        geometry: String,
        /// Built-in gates, e.g. NOT,AND,OR.
        #[arg(long, conflicts_with = "library_file", required_unless_present = "library_file")]
        library: Option<String>,
        /// Library definition file.
        #[arg(long)]
        library_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        /// Use full-precision gate measures instead of 0.01-bit tabulated ones.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Rank candidate geometries for a target shape.
    Advise {
        /// Target inputs and outputs, e.g. 4,2.
        #[arg(long)]
        target_shape: String,
        /// One candidate per line: `PxQ GATES [lb=K]`, where GATES is a
        /// comma list of built-ins or `@file` naming a library file.
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Evolve a circuit as described by a run configuration.
    Synth {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `netlist_out`.
        #[arg(long)]
        netlist_out: Option<PathBuf>,
        /// Overrides `history_out`.
        #[arg(long)]
        history_out: Option<PathBuf>,
    },
    /// Print the truth table of a netlist JSON file.
    Simulate {
        #[arg(long)]
        netlist: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Vector)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Flat,
    Attenuated,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Vector,
    Pla,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Measure { file, csv } => measure(&file, csv, out),
        Command::Capacity {
            geometry,
            library,
            library_file,
            mode,
            exact,
            csv,
        } => capacity(&geometry, library.as_deref(), library_file.as_deref(), mode, exact, csv, out),
        Command::Advise {
            target_shape,
            candidates,
            exact,
            csv,
        } => advise(&target_shape, &candidates, exact, csv, out),
        Command::Synth {
            config,
            seed,
            netlist_out,
            history_out,
        } => synth(&config, seed, netlist_out, history_out, out),
        Command::Simulate { netlist, format } => simulate(&netlist, format, out),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_function(path: &Path) -> CliResult<TruthTable> {
    io::parse_function(&read(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_library(spec: &LibrarySpec, base: &Path) -> CliResult<GateLibrary> {
    match spec {
        LibrarySpec::Names(names) => Ok(GateLibrary::from_names(names)?),
        LibrarySpec::File(path) => {
            let path = base.join(path);
            GateLibrary::parse(&read(&path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
        }
    }
}

/// Writes every file through a temporary sibling and renames it into place
/// only after all temporaries were written.
fn write_files(files: &[(PathBuf, String)]) -> CliResult {
    let mut staged = Vec::new();
    for (path, contents) in files {
        let mut tmp = path.clone().into_os_string();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        if let Err(e) = fs::write(&tmp, contents) {
            for t in &staged {
                let _ = fs::remove_file(t);
            }
            return Err(CliError::Data(format!("{}: {e}", path.display())));
        }
        staged.push(tmp);
    }
    for (tmp, (path, _)) in staged.iter().zip(files) {
        fs::rename(tmp, path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn measure(file: &Path, csv: bool, out: &mut dyn Write) -> CliResult {
    let tt = load_function(file)?;
    let n = tt.n_inputs();
    let mut rows = Vec::new();
    for j in 0..tt.n_outputs() {
        let mut row = vec![boolfn::entropy(&tt, j)?];
        for v in 0..n {
            row.push(boolfn::conditional_entropy_on_var(&tt, j, v)?);
        }
        rows.push(row);
    }
    if csv {
        let mut header = String::from("output,H(f)");
        for v in 1..=n {
            header.push_str(&format!(",H(f|x{v})"));
        }
        writeln!(out, "{header}")?;
        for (j, row) in rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|h| format!("{h:.6}")).collect();
            writeln!(out, "out{j},{}", cells.join(","))?;
        }
        return Ok(());
    }
    let mut header = format!("{:<8}{:>9}", "output", "H(f)");
    for v in 1..=n {
        header.push_str(&format!("{:>10}", format!("H(f|x{v})")));
    }
    writeln!(out, "{header}")?;
    for (j, row) in rows.iter().enumerate() {
        let mut line = format!("{:<8}{:>9.4}", format!("out{j}"), row[0]);
        for h in &row[1..] {
            line.push_str(&format!("{h:>10.4}"));
        }
        writeln!(out, "{line}")?;
    }
    writeln!(out)?;
    writeln!(out, "H(X)        {:.4} bits", boolfn::input_entropy(n)?)?;
    writeln!(out, "joint H(f)  {:.4} bits", boolfn::joint_entropy(&tt))?;
    writeln!(out, "I_NW        {:.4} bits", metrics::network_information(&tt))?;
    Ok(())
}

fn precision(exact: bool) -> Precision {
    if exact {
        Precision::Exact
    } else {
        Precision::Tabulated
    }
}

fn capacity(
    geometry: &str,
    library: Option<&str>,
    library_file: Option<&Path>,
    mode: ModeArg,
    exact: bool,
    csv: bool,
    out: &mut dyn Write,
) -> CliResult {
    let (p, q) = Geometry::parse_dims(geometry).map_err(|e| CliError::Usage(e.to_string()))?;
    let geom = Geometry::array(p, q).map_err(|e| CliError::Usage(e.to_string()))?;
    let lib = match (library, library_file) {
        (Some(names), _) => load_library(&LibrarySpec::Names(names.into()), Path::new("."))?,
        (None, Some(path)) => load_library(&LibrarySpec::File(path.into()), Path::new("."))?,
        (None, None) => return Err(CliError::Usage("--library or --library-file is required".into())),
    };
    let modes: &[CapacityMode] = match mode {
        ModeArg::Flat => &[CapacityMode::Flat],
        ModeArg::Attenuated => &[CapacityMode::Attenuated],
        ModeArg::Both => &[CapacityMode::Attenuated, CapacityMode::Flat],
    };
    let reports: Vec<CapacityReport> = modes
        .iter()
        .map(|&m| geometry::geometry_capacity(&geom, &lib, m, precision(exact)))
        .collect();
    if csv {
        writeln!(out, "mode,level,cell_capacity,level_contribution,total")?;
        for r in &reports {
            for (l, (c, t)) in r.level_cell_capacity.iter().zip(&r.level_contribution).enumerate() {
                writeln!(out, "{},{},{c:.6},{t:.6},{:.6}", r.mode, l + 1, r.total)?;
            }
        }
        return Ok(());
    }
    let first = &reports[0];
    writeln!(
        out,
        "geometry {geom} (levels x gates per level), library {{{}}}, {} gate measures",
        lib.names(),
        if exact { "exact" } else { "tabulated" }
    )?;
    writeln!(out, "library capacity I_L  {:.4} bits", first.library_capacity)?;
    writeln!(out, "cell capacity I_G     {:.4} bits", first.cell_capacity)?;
    writeln!(out)?;
    writeln!(out, "{:<12}{:>10}  per-level cell capacity", "mode", "total")?;
    for r in &reports {
        let levels: Vec<String> = r.level_cell_capacity.iter().map(|c| format!("{c:.4}")).collect();
        writeln!(out, "{:<12}{:>10.4}  {}", r.mode.to_string(), r.total, levels.join(" "))?;
    }
    Ok(())
}

fn parse_shape(s: &str) -> CliResult<TargetShape> {
    let bad = || CliError::Usage(format!("--target-shape expects nI,nO, got {s:?}"));
    let (i, o) = s.split_once(',').ok_or_else(bad)?;
    let n_inputs: usize = i.trim().parse().map_err(|_| bad())?;
    let n_outputs: usize = o.trim().parse().map_err(|_| bad())?;
    if n_inputs == 0 || n_outputs == 0 {
        return Err(bad());
    }
    Ok(TargetShape { n_inputs, n_outputs })
}

fn parse_candidates(text: &str, base: &Path, target: TargetShape) -> CliResult<Vec<Candidate>> {
    let mut cands = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| CliError::Data(format!("candidates line {}: {m}", idx + 1));
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(err("expected `PxQ GATES [lb=K]`".into()));
        }
        let (p, q) = Geometry::parse_dims(tokens[0]).map_err(|e| err(e.to_string()))?;
        let lb = match tokens.get(2) {
            Some(t) => t
                .strip_prefix("lb=")
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| err(format!("bad levels-back {t:?}")))?,
            None => p,
        };
        let spec = match tokens[1].strip_prefix('@') {
            Some(path) => LibrarySpec::File(path.into()),
            None => LibrarySpec::Names(tokens[1].into()),
        };
        let library = load_library(&spec, base).map_err(|e| err(e.to_string()))?;
        // Arrays too small for the target keep their own shape; advise
        // reports them as infeasible.
        let geometry = Geometry::new(p, q, lb, target.n_inputs, target.n_outputs)
            .or_else(|_| Geometry::new(p, q, lb, target.n_inputs, 1))
            .map_err(|e| err(e.to_string()))?;
        cands.push(Candidate { geometry, library });
    }
    Ok(cands)
}

fn advise(shape: &str, candidates: &Path, exact: bool, csv: bool, out: &mut dyn Write) -> CliResult {
    let target = parse_shape(shape)?;
    let base = candidates.parent().unwrap_or(Path::new("."));
    let cands = parse_candidates(&read(candidates)?, base, target)?;
    let ranked = geometry::advise(target, &cands, precision(exact))?;
    if csv {
        writeln!(out, "rank,geometry,levels_back,library,capacity,used_per_level,effective_capacity,feasible")?;
        for a in &ranked {
            writeln!(
                out,
                "{},{},{},\"{}\",{:.6},{},{:.6},{}",
                a.rank,
                a.candidate.geometry,
                a.candidate.geometry.levels_back(),
                a.candidate.library.names(),
                a.report.total,
                a.utilized_per_level,
                a.effective_capacity,
                a.feasible
            )?;
        }
        return Ok(());
    }
    writeln!(
        out,
        "target {} inputs, {} outputs",
        target.n_inputs, target.n_outputs
    )?;
    writeln!(
        out,
        "{:<5}{:<9}{:<22}{:>10}{:>10}{:>11}  notes",
        "rank", "geometry", "library", "capacity", "used/lvl", "effective"
    )?;
    for a in &ranked {
        let notes = if a.feasible {
            String::new()
        } else {
            format!("infeasible: {}", a.notes.join("; "))
        };
        writeln!(
            out,
            "{:<5}{:<9}{:<22}{:>10.4}{:>10}{:>11.4}  {notes}",
            a.rank,
            a.candidate.geometry.to_string(),
            format!("{{{}}}", a.candidate.library.names()),
            a.report.total,
            a.utilized_per_level,
            a.effective_capacity
        )?;
    }
    Ok(())
}

fn synth(
    config_path: &Path,
    seed: Option<u64>,
    netlist_out: Option<PathBuf>,
    history_out: Option<PathBuf>,
    out: &mut dyn Write,
) -> CliResult {
    let base = config_path.parent().unwrap_or(Path::new("."));
    let mut config = RunConfig::parse(&read(config_path)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", config_path.display())))?;
    if let Some(s) = seed {
        config.params.seed = s;
    }
    let target = load_function(&base.join(&config.target))?;
    let library = load_library(&config.library, base)?.with_inverted_inputs(config.polarity);
    let geom = config.geometry(target.n_inputs(), target.n_outputs())?;
    let result = evolve::evolve(&target, geom, Arc::new(library.clone()), &config.params)?;

    let trace = metrics::ht_trace(&result.history, &target);
    let nm = NetworkMetrics::compute(&target, &result.netlist, &result.history);
    let final_geom = *result.best.geometry();
    let cap = geometry::geometry_capacity(&final_geom, &library, config.capacity_mode, Precision::Tabulated);
    let effective = geometry::effective_capacity(&final_geom, &library, result.netlist.used_cells(), Precision::Tabulated)?;
    let netlist_json = io::emit_netlist(&result.netlist);

    let mut files = Vec::new();
    let netlist_path = netlist_out.or_else(|| config.netlist_out.as_ref().map(|p| base.join(p)));
    let history_path = history_out.or_else(|| config.history_out.as_ref().map(|p| base.join(p)));
    if let Some(p) = &netlist_path {
        files.push((p.clone(), netlist_json.clone()));
    }
    if let Some(p) = &history_path {
        files.push((p.clone(), io::emit_trace_csv(&trace)));
    }
    write_files(&files)?;

    let opt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.4}"));
    writeln!(out, "seed              {}", config.params.seed)?;
    writeln!(out, "geometry          {final_geom} (levels back {})", final_geom.levels_back())?;
    writeln!(out, "library           {{{}}}", library.names())?;
    writeln!(out, "evaluations       {}", result.evaluations)?;
    writeln!(out, "generations       {}", result.history.len() - 1)?;
    writeln!(out, "functionality     {:.4}", result.fitness.functionality())?;
    writeln!(out, "active gates      {}", result.fitness.active_gates)?;
    writeln!(
        out,
        "verified          {}",
        match result.verified {
            Some(true) => "yes",
            Some(false) => "NO",
            None => "n/a",
        }
    )?;
    writeln!(out, "I_NW              {:.4} bits", nm.network_information)?;
    writeln!(out, "logical work      {:.4} bits", nm.logical_work)?;
    writeln!(out, "potential Q       {}", opt(nm.information_potential))?;
    writeln!(out, "vitality T        {}", opt(nm.vitality))?;
    writeln!(out, "capacity          {:.4} bits ({})", cap.total, cap.mode)?;
    writeln!(out, "used capacity     {:.4} bits", effective)?;
    if netlist_path.is_none() {
        writeln!(out)?;
        write!(out, "{netlist_json}")?;
    }
    Ok(())
}

fn simulate(path: &Path, format: FormatArg, out: &mut dyn Write) -> CliResult {
    let nl = io::parse_netlist(&read(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let tt = nl.simulate();
    let text = match format {
        FormatArg::Vector => io::emit_truthvector(&tt),
        FormatArg::Pla => io::emit_pla(&tt),
    };
    write!(out, "{text}")?;
    Ok(())
}
