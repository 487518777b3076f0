//! Value lists for sweep flags.
//!
//! A grid is a comma-separated list of values, or a range written
//! `lin:<lo>:<hi>:<n>` / `log:<lo>:<hi>:<n>` (n points, both ends included).
//! Durations carry a unit on every value, ranges included.

use eee_core::Nanos;

use crate::error::CliError;

fn range(spec: &str, parse: &dyn Fn(&str) -> Result<f64, CliError>) -> Result<Option<Vec<f64>>, CliError> {
    let (log, rest) = match spec.split_once(':') {
        Some(("lin", rest)) => (false, rest),
        Some(("log", rest)) => (true, rest),
        _ => return Ok(None),
    };
    let parts: Vec<&str> = rest.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(CliError::usage(format!("range '{spec}' must look like lin:<lo>:<hi>:<n>")));
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    let n: usize = n.trim().parse().map_err(|_| CliError::usage(format!("bad point count '{n}' in '{spec}'")))?;
    if n == 0 {
        return Err(CliError::usage(format!("range '{spec}' has no points")));
    }
    if log && (lo <= 0.0 || hi <= 0.0) {
        return Err(CliError::usage(format!("log range '{spec}' needs positive ends")));
    }
    if n == 1 {
        return Ok(Some(vec![lo]));
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    Ok(Some((0..n).map(|i| if log { lo * (hi / lo).powf(step(i)) } else { lo + (hi - lo) * step(i) }).collect()))
}

fn parse_with(spec: &str, parse: &dyn Fn(&str) -> Result<f64, CliError>) -> Result<Vec<f64>, CliError> {
    let spec = spec.trim();
    if let Some(v) = range(spec, parse)? {
        return Ok(v);
    }
    let values: Vec<f64> = spec.split(',').map(|s| parse(s.trim())).collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(CliError::usage("empty value list"));
    }
    Ok(values)
}

fn number(s: &str) -> Result<f64, CliError> {
    s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| CliError::usage(format!("'{s}' is not a number")))
}

pub fn numbers(spec: &str) -> Result<Vec<f64>, CliError> {
    parse_with(spec, &number)
}

pub fn durations(spec: &str) -> Result<Vec<Nanos>, CliError> {
    let secs =
        |s: &str| -> Result<f64, CliError> { s.parse::<Nanos>().map(Nanos::as_secs_f64).map_err(CliError::Usage) };
    parse_with(spec, &secs)?.into_iter().map(|s| Nanos::from_secs_f64(s).map_err(CliError::Usage)).collect()
}
