use std::io::Write;
use std::path::Path;

use eee_core::simulator::{departure_trace, replicate, run_nic_sim, run_tandem_sim, RunSpec};
use eee_core::stats::{Metric, SimStats};
use eee_core::traffic::{generate, read_trace, write_trace_to, ArrivalStream};
use eee_core::{CoalescerConfig, EeeConfig, LinkConfig, Nanos};
use rayon::prelude::*;

use super::{alpha_column, bunch_of, check_loads, points, process_name, to_load, traffic_spec, Point};
use crate::args::SimArgs;
use crate::error::{domain, input, CliError};
use crate::output::{self, num, opt, write_csv};
use crate::settings::{self, Coalescer, Traffic, DEFAULT_FRAMES, DEFAULT_REPS, DEFAULT_SEED};

const INPUT_COLUMNS: &[&str] = &[
    "process",
    "alpha",
    "load",
    "rate",
    "frame_bits",
    "h_s",
    "d_s",
    "bunch_s",
    "propagation_s",
    "frames",
    "reps",
    "seed",
];

fn header() -> Vec<String> {
    let mut h: Vec<String> = INPUT_COLUMNS.iter().map(|s| s.to_string()).collect();
    for m in Metric::ALL {
        for suffix in ["mean", "se", "ci95"] {
            h.push(format!("{}_{suffix}", m.key()));
        }
    }
    h
}

struct Setup {
    link: LinkConfig,
    frame_bits: u64,
    traffic: Traffic,
    coal: Coalescer,
    frames: usize,
    reps: usize,
    seed: u64,
}

pub fn run(args: SimArgs) -> Result<(), CliError> {
    let file = settings::load_config(args.link.config.as_deref())?;
    let (link, frame_bits) = settings::link(&args.link, &file)?;
    let (hs, ds) = settings::eee(&args.eee, &file)?;
    let traffic = settings::traffic(&args.traffic, &file)?;
    let coal = settings::coalescer(&args.coalescer, &file)?;
    check_loads(traffic.loads.as_deref())?;
    let frames = args.frames.or(file.sim.frames).unwrap_or(DEFAULT_FRAMES);
    let reps = args.reps.or(file.sim.reps).unwrap_or(DEFAULT_REPS);
    let seed = args.seed.or(file.sim.seed).unwrap_or(DEFAULT_SEED);
    let jobs = args.jobs.or(file.sim.jobs).unwrap_or(0);
    if frames == 0 {
        return Err(CliError::usage("--frames must be at least 1"));
    }
    if args.trace.is_none() {
        if reps < 2 {
            return Err(CliError::usage("--reps must be at least 2 for confidence intervals"));
        }
        if traffic.loads.is_none() {
            return Err(CliError::usage("sim needs --load or --trace"));
        }
    }
    let trace = args.trace.as_deref().map(read_trace).transpose().map_err(input)?;
    let loads = if trace.is_some() { None } else { traffic.loads.as_deref() };
    let grid = points(&hs, &ds, &coal.bunching, loads);
    if args.departures_out.is_some() && grid.len() != 1 {
        return Err(CliError::usage(format!("--departures-out needs a single grid point, got {}", grid.len())));
    }
    let setup = Setup { link, frame_bits, traffic, coal, frames, reps, seed };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {jobs} worker threads: {e}")))?;
    let rows: Vec<Vec<String>> = pool.install(|| {
        grid.par_iter()
            .map(|p| match &trace {
                Some(t) => trace_row(&setup, p, t),
                None => generated_row(&setup, p),
            })
            .collect::<Result<_, _>>()
    })?;
    let header = header();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(args.out.as_deref(), &header, &rows)?;

    if let Some(path) = &args.departures_out {
        let p = &grid[0];
        let bunch = bunch_of(p, &setup.coal.bunching, setup.coal.delta, &setup.link, frame_bits)?;
        let arrivals = match &trace {
            Some(t) => t.clone(),
            None => {
                let spec =
                    traffic_spec(&setup.traffic, p.load.expect("generated grids have loads"), &setup.link, frame_bits)?;
                generate(&spec, frames, seed).map_err(domain)?
            }
        };
        let coal = bunch.map(|b| CoalescerConfig { bunch: b, propagation: setup.coal.propagation });
        let stats = simulate(&arrivals, coal.as_ref(), &p.eee, &setup.link)?;
        write_departures(path, &arrivals, &stats, &p.eee, seed)?;
    }
    Ok(())
}

fn simulate(
    arrivals: &ArrivalStream,
    coal: Option<&CoalescerConfig>,
    eee: &EeeConfig,
    link: &LinkConfig,
) -> Result<SimStats, CliError> {
    match coal {
        None => run_nic_sim(arrivals, eee, link),
        Some(c) => run_tandem_sim(arrivals, c, eee, link).map(|t| t.nic),
    }
    .map_err(domain)
}

fn input_columns(
    s: &Setup,
    p: &Point,
    bunch: Option<Nanos>,
    rate: Option<f64>,
    frames: usize,
    reps: usize,
) -> Vec<String> {
    vec![
        process_name(s.traffic.process).to_string(),
        alpha_column(&s.traffic),
        opt(p.load),
        opt(rate),
        s.frame_bits.to_string(),
        num(p.eee.h_star()),
        num(p.eee.d()),
        opt(bunch.map(Nanos::as_secs_f64)),
        num(s.coal.propagation.as_secs_f64()),
        frames.to_string(),
        reps.to_string(),
        s.seed.to_string(),
    ]
}

fn generated_row(s: &Setup, p: &Point) -> Result<Vec<String>, CliError> {
    let rho = p.load.expect("generated grids have loads");
    let spec = traffic_spec(&s.traffic, rho, &s.link, s.frame_bits)?;
    let rate = to_load(rho, &s.link, s.frame_bits)?.rate;
    let bunch = bunch_of(p, &s.coal.bunching, s.coal.delta, &s.link, s.frame_bits)?;
    let mut run = RunSpec::new(spec, s.frames, p.eee, s.link);
    if let Some(b) = bunch {
        run = run.with_coalescer(CoalescerConfig { bunch: b, propagation: s.coal.propagation });
    }
    let summary = replicate(&run, s.reps, s.seed).map_err(domain)?;
    let mut row = input_columns(s, p, bunch, Some(rate), s.frames, s.reps);
    for m in Metric::ALL {
        let v = summary.get(m);
        row.extend([num(v.mean), num(v.std_err), num(v.ci95_halfwidth)]);
    }
    Ok(row)
}

/// A trace gives one run: no standard error or interval.
fn trace_row(s: &Setup, p: &Point, trace: &ArrivalStream) -> Result<Vec<String>, CliError> {
    let bunch = bunch_of(p, &s.coal.bunching, s.coal.delta, &s.link, s.frame_bits)?;
    let coal = bunch.map(|b| CoalescerConfig { bunch: b, propagation: s.coal.propagation });
    let stats = simulate(trace, coal.as_ref(), &p.eee, &s.link)?;
    let mut row = input_columns(s, p, bunch, None, trace.len(), 1);
    for m in Metric::ALL {
        row.extend([num(m.extract(&stats)), String::new(), String::new()]);
    }
    Ok(row)
}

/// LPI entries that fall between two frames of the departure trace. A
/// sleep entered before the first frame (possible behind a coalescer or
/// when the trace starts late) leaves no gap.
pub fn visible_lpi_events(departures: &ArrivalStream, stats: &SimStats, eee: &EeeConfig) -> u64 {
    let before_first = departures.frames().first().is_some_and(|f| f.at > eee.hysteresis);
    stats.lpi_entries - u64::from(before_first && stats.lpi_entries > 0)
}

fn write_departures(
    path: &Path,
    arrivals: &ArrivalStream,
    stats: &SimStats,
    eee: &EeeConfig,
    seed: u64,
) -> Result<(), CliError> {
    let dep = departure_trace(arrivals, stats);
    let io = |source| CliError::Io(eee_core::Error::Io { path: path.to_owned(), source });
    let mut w = output::open(Some(path))?;
    writeln!(w, "# departures, seed {seed}").map_err(io)?;
    writeln!(w, "# lpi_events {}", visible_lpi_events(&dep, stats, eee)).map_err(io)?;
    write_trace_to(&dep, &mut w).map_err(io)?;
    w.flush().map_err(io)
}
