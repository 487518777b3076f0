use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use eee_core::analyzer::estimate_lpi;
use eee_core::simulator::coalesce;
use eee_core::traffic::{read_trace, write_trace_to, ArrivalStream, Frame};
use eee_core::CoalescerConfig;

use crate::args::{AnalyzeArgs, CoalesceArgs};
use crate::error::{domain, input, CliError};
use crate::output::{self, num, write_csv};
use crate::settings;

pub fn coalesce_cmd(args: CoalesceArgs) -> Result<(), CliError> {
    let file = settings::load_config(args.link.config.as_deref())?;
    let (link, _) = settings::link(&args.link, &file)?;
    let trace = read_trace(&args.input).map_err(input)?;
    let c = coalesce(&trace, &CoalescerConfig::new(args.bunch), &link);
    let frames = trace.iter().zip(&c.releases).map(|(f, &at)| Frame::new(at, f.size_bits)).collect();
    let out = ArrivalStream::new(frames).map_err(domain)?;
    let mut w = output::open(args.out.as_deref())?;
    write_trace_to(&out, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Value of a `# lpi_events N` comment line, if the trace has one.
fn lpi_events_comment(path: &Path) -> Result<Option<usize>, CliError> {
    let f = std::fs::File::open(path)
        .map_err(|source| CliError::Io(eee_core::Error::Io { path: path.to_owned(), source }))?;
    for line in BufReader::new(f).lines() {
        let line = line.map_err(|source| CliError::Io(eee_core::Error::Io { path: path.to_owned(), source }))?;
        if !line.starts_with('#') {
            break;
        }
        if let Some(n) = line.strip_prefix("# lpi_events ") {
            return n
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| CliError::usage(format!("{}: bad lpi_events line '{line}'", path.display())));
        }
    }
    Ok(None)
}

pub fn analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let file = settings::load_config(args.link.config.as_deref())?;
    let (link, _) = settings::link(&args.link, &file)?;
    let eee = settings::single_eee(&args.eee, &file)?;
    let events = match args.events {
        Some(n) => n,
        None => lpi_events_comment(&args.trace)?
            .ok_or_else(|| CliError::usage("--events is required when the trace has no '# lpi_events' line"))?,
    };
    let trace = read_trace(&args.trace).map_err(input)?;
    let e = estimate_lpi(&trace, &link, &eee, events, args.accounting.into()).map_err(domain)?;
    let row = vec![num(e.rate_bps), num(e.lpi_events_per_s), num(e.mean_lpi_duration), num(e.time_in_lpi * 100.0)];
    write_csv(args.out.as_deref(), &["rate_bps", "lpi_events_per_s", "mean_lpi_duration_s", "time_in_lpi_pct"], &[row])
}
