use std::path::{Path, PathBuf};
use std::time::Instant;

use maxpoly::cert::{certify as certify_assignment, Certificate};
use maxpoly::formulation::{
    apply_sigma, assignment_to_polygon, build_program, Assignment, ProgramOptions,
    QuadraticProgram,
};
use maxpoly::geometry::{diameter_graph, render_svg, upper_bound_area, Polygon};
use maxpoly::reference::{Published, PUBLISHED, TABLE_VERSION};
use maxpoly::relaxation::{build_relaxation, export_sdpa, extract, stats};
use maxpoly::solver::{solve as solve_program, SolveResultJson, SolverConfig, StartStatus};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const MAX_N: usize = 24;
const THREADS_ENV: &str = "MAXPOLY_THREADS";

pub fn check_n(n: usize, allow_large: bool) -> CliResult<usize> {
    if n < 4 || n % 2 != 0 {
        return Err(CliError::Usage(format!(
            "n must be an even integer of at least 4, got {n}"
        )));
    }
    if n > MAX_N {
        if !allow_large {
            return Err(CliError::Usage(format!(
                "n = {n} exceeds {MAX_N}; pass --allow-large-n to proceed anyway"
            )));
        }
        eprintln!("warning: n = {n} is above {MAX_N}; expect long runtimes and large files");
    }
    Ok(n)
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, text: &str) -> CliResult {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(Some(t)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

fn program(n: usize, symmetric: bool) -> CliResult<QuadraticProgram> {
    let opts = if symmetric {
        ProgramOptions::symmetric()
    } else {
        ProgramOptions::for_n(n)
    };
    Ok(build_program(n, opts)?)
}

pub fn build(
    n: usize,
    symmetric: bool,
    relax_closing_edge: bool,
    order_cut: Option<bool>,
    include_bound_implied: bool,
    out: Option<&Path>,
) -> CliResult {
    let defaults = ProgramOptions::for_n(n);
    let opts = ProgramOptions {
        symmetric,
        relax_closing_edge,
        order_cut: order_cut.unwrap_or(defaults.order_cut),
        include_bound_implied,
    };
    let p = build_program(n, opts)?;
    let text = p.to_json();
    match out {
        Some(path) => {
            write(path, &text)?;
            println!(
                "wrote {} ({} variables, {} constraints)",
                path.display(),
                p.variables.len(),
                p.constraints.len()
            );
        }
        None => println!("{text}"),
    }
    Ok(())
}

pub fn solve(
    n: usize,
    symmetric: bool,
    starts: usize,
    seed: u64,
    json: bool,
    out: Option<&Path>,
) -> CliResult {
    let p = program(n, symmetric)?;
    let config = SolverConfig {
        starts,
        rng_seed: seed,
        threads: threads_from_env()?,
        ..SolverConfig::default()
    };
    config.validate()?;
    let t = Instant::now();
    let r = solve_program(&p, &config)?;
    let elapsed = t.elapsed();
    let doc = r.to_json();
    if let Some(path) = out {
        write(path, &doc)?;
    }
    if json {
        println!("{doc}");
        return Ok(());
    }
    let converged = r
        .starts
        .iter()
        .filter(|s| s.status == StartStatus::Converged)
        .count();
    println!(
        "n = {n}, {} program, {starts} starts (seed {seed}), {:.2} s",
        if symmetric { "symmetric" } else { "full" },
        elapsed.as_secs_f64()
    );
    println!("area            {:.8}", r.objective);
    println!("max violation   {:.1e}", r.max_violation);
    println!("KKT residual    {:.1e}", r.kkt_residual);
    println!("winning start   {} ({converged}/{starts} converged)", r.winning_start);
    for (v, x) in p.x_vars().iter().zip(&r.best.x) {
        println!("{v:<15} {x:.8}");
    }
    if let Some(path) = out {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn default_cert_path(result: &Path) -> PathBuf {
    let stem = result
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "result".into());
    result.with_file_name(format!("{stem}.cert.json"))
}

pub fn certify(result: &Path, json: bool, out: Option<&Path>) -> CliResult {
    let doc = SolveResultJson::from_json(&read(result)?)?;
    let cert = certify_assignment(doc.n, &doc.assignment())?;
    let upper = upper_bound_area(doc.n)?;
    let text = cert.to_json();
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| default_cert_path(result));
    write(&path, &text)?;
    if json {
        println!("{text}");
    } else {
        print_certificate(&cert, upper, &path);
    }
    match cert.certified_lower_bound {
        Some(_) => Ok(()),
        None => Err(CliError::Failed(format!(
            "not certified: {}",
            cert.failure.as_deref().unwrap_or("unknown reason")
        ))),
    }
}

fn print_certificate(cert: &Certificate, upper: f64, path: &Path) {
    println!("n = {}", cert.n);
    println!(
        "convexity        {}",
        if cert.convex_verified { "verified" } else { "NOT verified" }
    );
    println!("area             {}", cert.area);
    println!("diameter^2       {}", cert.diameter_sq);
    match cert.certified_lower_bound {
        Some(lb) => {
            println!("certified lower  {lb:.10}");
            println!("analytic upper   {upper:.10}");
            println!("bracket          {lb:.8} <= A_{}* <= {upper:.8}", cert.n);
        }
        None => println!("reason           {}", cert.failure.as_deref().unwrap_or("-")),
    }
    println!("wrote {}", path.display());
}

pub struct RelaxArgs {
    pub n: usize,
    pub order: usize,
    pub symmetric: bool,
    pub sdpa: Option<PathBuf>,
    pub stats: bool,
    pub moments: Option<PathBuf>,
    pub json: bool,
}

fn parse_moments(text: &str) -> CliResult<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',' || c == '[' || c == ']')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("moment value {t:?} is not a number")))
        })
        .collect()
}

pub fn relax(a: RelaxArgs) -> CliResult {
    let p = program(a.n, a.symmetric)?;
    let s = build_relaxation(&p, a.order)?;
    let st = stats(&s);
    let show_stats = a.stats || (a.sdpa.is_none() && a.moments.is_none());
    if show_stats && !a.json {
        println!(
            "moment vars: {}, moment matrix: {}",
            st.num_moment_vars, st.moment_matrix_size
        );
        let sizes: std::collections::BTreeSet<usize> = st.localizing_sizes.iter().copied().collect();
        println!(
            "localizing blocks: {} (size {}), equality rows: {}",
            st.localizing_blocks,
            sizes
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join("/"),
            st.equality_rows
        );
    }
    if let Some(path) = &a.sdpa {
        let (text, sidecar) = export_sdpa(&s);
        let side_path = path.with_extension("moments.json");
        write(path, &text)?;
        write(&side_path, &sidecar.to_json())?;
        if !a.json {
            println!("wrote {} and {}", path.display(), side_path.display());
        }
    }
    let extraction = match &a.moments {
        Some(path) => Some(extract(&s, &parse_moments(&read(path)?)?)?),
        None => None,
    };
    if a.json {
        let doc = serde_json::json!({ "stats": st, "extraction": extraction });
        println!("{}", serde_json::to_string_pretty(&doc).expect("plain data serializes"));
    } else if let Some(e) = &extraction {
        println!("upper bound      {:.10}", e.upper_bound);
        println!("rank M_d         {}", e.moment_matrix_rank);
        println!("rank M_(d-1)     {}", e.lower_rank);
        println!("flat             {}", e.flat);
        println!("certified        {}", e.certified);
        for (v, x) in p.x_vars().iter().zip(&e.candidate.x) {
            println!("{v:<16} {x:.8}");
        }
    }
    Ok(())
}

fn load_polygon(text: &str) -> CliResult<Polygon> {
    if let Ok(doc) = SolveResultJson::from_json(text) {
        return Ok(assignment_to_polygon(doc.n, &doc.assignment())?);
    }
    Polygon::from_json(text).map_err(|e| {
        CliError::Usage(format!("input is neither a result nor a polygon document: {e}"))
    })
}

pub fn render(input: &Path, out: Option<&Path>, tol: f64) -> CliResult {
    let poly = load_polygon(&read(input)?)?;
    let graph = match diameter_graph(&poly, tol) {
        Ok(g) => Some(g),
        Err(e) => {
            eprintln!("warning: no diameter graph drawn: {e}");
            None
        }
    };
    let svg = render_svg(&poly, graph.as_ref());
    match out {
        Some(path) => {
            write(path, &svg)?;
            println!("wrote {}", path.display());
        }
        None => print!("{svg}"),
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ReproRow {
    n: usize,
    symmetric: bool,
    objective: f64,
    published: f64,
    abs_error: f64,
    tolerance: f64,
    /// Distance to the published coordinates (up to reflection); informational.
    x_deviation: Option<f64>,
    pass: bool,
    seconds: f64,
    source: &'static str,
}

fn x_deviation(row: &Published, n: usize, x: &[f64]) -> Option<f64> {
    let published = row.x?;
    let dist = |a: &[f64]| {
        a.iter()
            .zip(published)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    };
    let direct = dist(x);
    if row.symmetric {
        return Some(direct);
    }
    let mirrored = apply_sigma(&Assignment::from_x(x.to_vec()), n).ok()?;
    Some(direct.min(dist(&mirrored.x)))
}

pub fn reproduce(json: bool, starts: usize) -> CliResult {
    let config = SolverConfig {
        starts,
        threads: threads_from_env()?,
        ..SolverConfig::default()
    };
    config.validate()?;
    let mut rows = Vec::new();
    for row in PUBLISHED {
        let p = program(row.n, row.symmetric)?;
        let t = Instant::now();
        let (objective, x_dev) = match solve_program(&p, &config) {
            Ok(r) => (r.objective, x_deviation(row, row.n, &r.best.x)),
            Err(maxpoly::Error::Infeasible { .. }) => (f64::NAN, None),
            Err(e) => return Err(e.into()),
        };
        let abs_error = (objective - row.objective).abs();
        rows.push(ReproRow {
            n: row.n,
            symmetric: row.symmetric,
            objective,
            published: row.objective,
            abs_error,
            tolerance: row.tolerance,
            x_deviation: x_dev,
            pass: abs_error <= row.tolerance,
            seconds: t.elapsed().as_secs_f64(),
            source: row.source,
        });
    }
    let all_pass = rows.iter().all(|r| r.pass);
    if json {
        let doc = serde_json::json!({
            "version": "maxpoly-reproduce/1",
            "reference_table": TABLE_VERSION,
            "starts": starts,
            "rows": rows,
            "all_pass": all_pass,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("plain data serializes"));
    } else {
        println!(
            "{:>3} {:<9} {:>12} {:>12} {:>9} {:>7} {:>9} {:>7}  status",
            "n", "program", "obtained", "published", "|error|", "tol", "x dev", "time"
        );
        for r in &rows {
            println!(
                "{:>3} {:<9} {:>12.8} {:>12.8} {:>9.1e} {:>7.0e} {:>9} {:>6.2}s  {}",
                r.n,
                if r.symmetric { "symmetric" } else { "full" },
                r.objective,
                r.published,
                r.abs_error,
                r.tolerance,
                r.x_deviation.map_or("-".into(), |d| format!("{d:.1e}")),
                r.seconds,
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{} of {} rows outside tolerance",
            rows.iter().filter(|r| !r.pass).count(),
            rows.len()
        )))
    }
}
