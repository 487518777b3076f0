use std::io::Write;

use eee_core::tuner::{bunch_bound_ideal, equivalent_delay, tune, TuningResult, TuningTarget};
use eee_core::{Nanos, TrafficSpec};

use super::{check_loads, points, to_load};
use crate::args::{CoalescerArgs, TrafficArgs, TuneArgs, TuneTarget};
use crate::error::{domain, input, CliError};
use crate::output::{self, human_secs, num, opt, write_csv};
use crate::settings::{self, Bunching};

const NO_BUNCHING: &str = "no bunching needed";

const BUNCH_HEADER: &[&str] = &[
    "target",
    "load",
    "rate",
    "frame_bits",
    "h_s",
    "delta",
    "bunch_exact_s",
    "bunch_approx_s",
    "worst_case_load",
    "clamped",
    "note",
];

const DELAY_HEADER: &[&str] = &["target", "load", "rate", "frame_bits", "h_s", "bunch_s", "delay_s"];

pub fn run(args: TuneArgs) -> Result<(), CliError> {
    let file = settings::load_config(args.link.config.as_deref())?;
    let (link, frame_bits) = settings::link(&args.link, &file)?;
    let (hs, ds) = settings::eee(&args.eee, &file)?;
    let loads = settings::traffic(&TrafficArgs { load: args.load.clone(), ..TrafficArgs::default() }, &file)?.loads;
    check_loads(loads.as_deref())?;
    let coal = settings::coalescer(
        &CoalescerArgs { bunch: args.bunch.clone(), delta: args.delta, ..CoalescerArgs::default() },
        &file,
    )?;
    let delta = coal.delta;
    if args.target != TuneTarget::Ideal && loads.is_none() {
        return Err(CliError::usage("this target needs --load"));
    }

    let mut rows = Vec::new();
    let mut report = String::new();
    match args.target {
        TuneTarget::Ideal | TuneTarget::FrameTx => {
            if args.bunch.is_some() {
                return Err(CliError::usage("--bunch only applies to the delay target"));
            }
            for p in points(&hs, &ds, &Bunching::None, loads.as_deref()) {
                let load = p.load.map(|rho| to_load(rho, &link, frame_bits)).transpose()?;
                let (name, r) = if args.target == TuneTarget::Ideal {
                    let r = match load {
                        None => bunch_bound_ideal(&p.eee, &link, frame_bits, delta),
                        Some(l) => tune(TuningTarget::ApproxIdeal { delta }, Some(l), &p.eee, &link, frame_bits),
                    };
                    ("ideal", r.map_err(domain)?)
                } else {
                    ("frame-tx", tune(TuningTarget::MatchFrameTx, load, &p.eee, &link, frame_bits).map_err(domain)?)
                };
                let ideal = args.target == TuneTarget::Ideal;
                rows.push(vec![
                    name.to_string(),
                    opt(p.load),
                    opt(load.map(|l| l.rate)),
                    frame_bits.to_string(),
                    num(p.eee.h_star()),
                    if ideal { num(delta) } else { String::new() },
                    num(r.bunch_exact),
                    num(r.bunch_approx),
                    opt(r.worst_case_load),
                    r.clamped.to_string(),
                    if r.clamped { NO_BUNCHING.to_string() } else { String::new() },
                ]);
                report_bunch(&mut report, ideal, delta, p.eee.hysteresis, p.load, &r);
            }
        }
        TuneTarget::Delay => {
            let Bunching::Grid(bunches) = coal.bunching else {
                return Err(CliError::usage("the delay target needs --bunch"));
            };
            for p in points(&hs, &[Nanos::ZERO], &Bunching::Grid(bunches), loads.as_deref()) {
                let rho = p.load.expect("checked above");
                let b = p.bunch.expect("bunch grid");
                let traffic = TrafficSpec::poisson(rho, &link, frame_bits).map_err(input)?;
                let d = equivalent_delay(b, &traffic, p.eee.hysteresis, &link).map_err(domain)?;
                rows.push(vec![
                    "delay".into(),
                    num(rho),
                    num(to_load(rho, &link, frame_bits)?.rate),
                    frame_bits.to_string(),
                    num(p.eee.h_star()),
                    num(b.as_secs_f64()),
                    num(d.as_secs_f64()),
                ]);
                push_block(
                    &mut report,
                    &[
                        ("target", "wake delay sleeping as long as coalescing".into()),
                        ("h*", p.eee.hysteresis.to_string()),
                        ("load", num(rho)),
                        ("bunch", b.to_string()),
                        ("equivalent wake delay", human_secs(d.as_secs_f64())),
                    ],
                );
            }
        }
    }
    if args.csv {
        let header = if args.target == TuneTarget::Delay { DELAY_HEADER } else { BUNCH_HEADER };
        write_csv(args.out.as_deref(), header, &rows)
    } else {
        let mut w = output::open(args.out.as_deref())?;
        w.write_all(report.as_bytes())?;
        w.flush()?;
        Ok(())
    }
}

fn push_block(report: &mut String, lines: &[(&str, String)]) {
    if !report.is_empty() {
        report.push('\n');
    }
    for (k, v) in lines {
        report.push_str(&format!("{k}: {v}\n"));
    }
}

fn bunch_text(secs: f64, clamped: bool) -> String {
    if clamped {
        NO_BUNCHING.to_string()
    } else {
        human_secs(secs)
    }
}

fn report_bunch(report: &mut String, ideal: bool, delta: f64, h: Nanos, load: Option<f64>, r: &TuningResult) {
    let mut lines = vec![];
    if ideal {
        let scope = if load.is_some() { "" } else { ", at any load" };
        lines.push(("target", format!("sleep within {delta} of 1 - load{scope}")));
    } else {
        lines.push(("target", "sleep as much as frame transmission mode".to_string()));
    }
    lines.push(("h*", h.to_string()));
    if let Some(rho) = load {
        lines.push(("load", num(rho)));
    }
    match (ideal, load) {
        (true, None) => {
            lines.push(("bunch (h*/delta)", human_secs(r.bunch_approx)));
            lines.push(("bunch (exact bound)", bunch_text(r.bunch_exact, r.clamped)));
            lines.push(("worst-case load", opt(r.worst_case_load)));
        }
        (true, Some(_)) => {
            lines.push(("bunch (exact)", bunch_text(r.bunch_exact, r.clamped)));
            lines.push(("bunch (h*/delta)", human_secs(r.bunch_approx)));
        }
        (false, _) => {
            lines.push(("bunch (exact)", bunch_text(r.bunch_exact, r.clamped)));
            lines.push(("bunch (approx)", human_secs(r.bunch_approx)));
        }
    }
    push_block(report, &lines);
}
