//! Arrival streams: seeded generators and the plain-text trace format.
//!
//! Random streams use xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Uniforms are drawn on (0, 1] from
//! the top 53 bits of each output, and interarrivals are obtained by inverse
//! CDF, so a stream is fully determined by `(seed, parameters)`:
//!
//! * exponential: `−ln(u)/λ`
//! * Pareto: `x_m·u^(−1/α)` with `x_m = (α − 1)/(αλ)`, giving mean 1/λ
//!
//! The first frame of every generated stream arrives at t = 0 and timestamps
//! are the running sum of interarrivals rounded to the nanosecond.
//!
//! Trace files hold one `<timestamp_ns> <size_bits>` record per LF-terminated
//! line, both decimal ASCII integers separated by a single space. Lines
//! starting with `#` and empty lines are ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::config::{ArrivalProcess, TrafficSpec};
use crate::error::{check_positive, Error, Result};
use crate::units::Nanos;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frame {
    pub at: Nanos,
    pub size_bits: u64,
}

impl Frame {
    pub const fn new(at: Nanos, size_bits: u64) -> Self {
        Frame { at, size_bits }
    }
}

/// Frames ordered by non-decreasing timestamp, all with positive size.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArrivalStream {
    frames: Vec<Frame>,
}

impl ArrivalStream {
    pub fn new(frames: Vec<Frame>) -> Result<Self> {
        for (i, w) in frames.windows(2).enumerate() {
            if w[1].at < w[0].at {
                return Err(Error::invalid(
                    "arrival stream",
                    format!("frame {} at {} ns precedes frame {} at {} ns", i + 1, w[1].at.0, i, w[0].at.0),
                ));
            }
        }
        if let Some(i) = frames.iter().position(|f| f.size_bits == 0) {
            return Err(Error::invalid("arrival stream", format!("frame {i} has zero size")));
        }
        Ok(ArrivalStream { frames })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Frame> {
        self.frames.iter()
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }

    /// All timestamps shifted later by `offset`.
    pub fn shifted(&self, offset: Nanos) -> ArrivalStream {
        ArrivalStream { frames: self.frames.iter().map(|f| Frame::new(f.at + offset, f.size_bits)).collect() }
    }

    pub(crate) fn from_sorted_unchecked(frames: Vec<Frame>) -> Self {
        debug_assert!(frames.windows(2).all(|w| w[0].at <= w[1].at));
        ArrivalStream { frames }
    }
}

impl<'a> IntoIterator for &'a ArrivalStream {
    type Item = &'a Frame;
    type IntoIter = std::slice::Iter<'a, Frame>;

    fn into_iter(self) -> Self::IntoIter {
        self.frames.iter()
    }
}

#[derive(Clone, Copy, Debug)]
enum Interarrival {
    Exponential { rate: f64 },
    Pareto { alpha: f64, scale: f64 },
}

/// Unbounded renewal arrival generator. Yields frames in time order.
#[derive(Clone, Debug)]
pub struct RenewalArrivals {
    rng: Xoshiro256PlusPlus,
    law: Interarrival,
    frame_bits: u64,
    clock_ns: f64,
    started: bool,
}

impl RenewalArrivals {
    pub fn poisson(rate: f64, frame_bits: u64, seed: u64) -> Result<Self> {
        check_positive("arrival rate", rate)?;
        Self::with_law(Interarrival::Exponential { rate }, frame_bits, seed)
    }

    pub fn pareto(alpha: f64, rate: f64, frame_bits: u64, seed: u64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::invalid("pareto shape", format!("{alpha} is outside (1, 2]")));
        }
        Self::pareto_any_shape(alpha, rate, frame_bits, seed)
    }

    fn pareto_any_shape(alpha: f64, rate: f64, frame_bits: u64, seed: u64) -> Result<Self> {
        check_positive("arrival rate", rate)?;
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::invalid("pareto shape", format!("{alpha} must exceed 1 for a finite mean")));
        }
        let scale = (alpha - 1.0) / (alpha * rate);
        Self::with_law(Interarrival::Pareto { alpha, scale }, frame_bits, seed)
    }

    fn with_law(law: Interarrival, frame_bits: u64, seed: u64) -> Result<Self> {
        if frame_bits == 0 {
            return Err(Error::invalid("frame size", "must be positive"));
        }
        Ok(RenewalArrivals {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            law,
            frame_bits,
            clock_ns: 0.0,
            started: false,
        })
    }

    /// Uniform on (0, 1].
    fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn next_gap_secs(&mut self) -> f64 {
        let u = self.uniform();
        match self.law {
            Interarrival::Exponential { rate } => -u.ln() / rate,
            Interarrival::Pareto { alpha, scale } => scale * u.powf(-1.0 / alpha),
        }
    }
}

impl Iterator for RenewalArrivals {
    type Item = Frame;

    fn next(&mut self) -> Option<Frame> {
        if self.started {
            self.clock_ns += self.next_gap_secs() * 1e9;
        }
        self.started = true;
        Some(Frame::new(Nanos(self.clock_ns.round() as u64), self.frame_bits))
    }
}

fn take_stream(gen: RenewalArrivals, n_frames: usize) -> Result<ArrivalStream> {
    if n_frames == 0 {
        return Err(Error::invalid("frame count", "must be at least 1"));
    }
    Ok(ArrivalStream::from_sorted_unchecked(gen.take(n_frames).collect()))
}

pub fn gen_poisson(lambda: f64, frame_bits: u64, n_frames: usize, seed: u64) -> Result<ArrivalStream> {
    take_stream(RenewalArrivals::poisson(lambda, frame_bits, seed)?, n_frames)
}

/// Pareto renewal arrivals with mean interarrival 1/λ. The shape must lie in
/// (1, 2], the infinite-variance regime.
pub fn gen_pareto(alpha: f64, lambda: f64, frame_bits: u64, n_frames: usize, seed: u64) -> Result<ArrivalStream> {
    take_stream(RenewalArrivals::pareto(alpha, lambda, frame_bits, seed)?, n_frames)
}

pub fn gen_periodic(period: Nanos, frame_bits: u64, n: usize) -> Result<ArrivalStream> {
    if period.is_zero() {
        return Err(Error::invalid("period", "must be positive"));
    }
    if n == 0 {
        return Err(Error::invalid("frame count", "must be at least 1"));
    }
    if frame_bits == 0 {
        return Err(Error::invalid("frame size", "must be positive"));
    }
    let frames = (0..n as u64).map(|k| Frame::new(Nanos(k * period.0), frame_bits)).collect();
    Ok(ArrivalStream::from_sorted_unchecked(frames))
}

/// Materializes `n_frames` of `traffic`. Traces are read whole; `n_frames`
/// and `seed` are ignored for them and for periodic traffic's seed.
pub fn generate(traffic: &TrafficSpec, n_frames: usize, seed: u64) -> Result<ArrivalStream> {
    match &traffic.process {
        ArrivalProcess::Poisson { rate } => gen_poisson(*rate, traffic.frame_bits, n_frames, seed),
        ArrivalProcess::Pareto { alpha, rate } => gen_pareto(*alpha, *rate, traffic.frame_bits, n_frames, seed),
        ArrivalProcess::Periodic { period } => gen_periodic(*period, traffic.frame_bits, n_frames),
        ArrivalProcess::Trace(path) => read_trace(path),
    }
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<ArrivalStream> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    parse_trace(BufReader::new(file), path)
}

pub fn parse_trace(reader: impl BufRead, path: &Path) -> Result<ArrivalStream> {
    let parse_err = |line: usize, reason: String| Error::TraceParse { path: path.to_owned(), line, reason };
    let mut frames: Vec<Frame> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|source| Error::Io { path: path.to_owned(), source })?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (ts, size) = line
            .split_once(' ')
            .ok_or_else(|| parse_err(lineno, format!("expected '<timestamp_ns> <size_bits>', got '{line}'")))?;
        let ts: u64 = parse_decimal(ts).ok_or_else(|| parse_err(lineno, format!("bad timestamp '{ts}'")))?;
        let size: u64 = parse_decimal(size).ok_or_else(|| parse_err(lineno, format!("bad frame size '{size}'")))?;
        if size == 0 {
            return Err(parse_err(lineno, "frame size must be positive".into()));
        }
        if let Some(prev) = frames.last() {
            if ts < prev.at.0 {
                return Err(parse_err(lineno, format!("timestamp {ts} precedes previous timestamp {}", prev.at.0)));
            }
        }
        frames.push(Frame::new(Nanos(ts), size));
    }
    Ok(ArrivalStream::from_sorted_unchecked(frames))
}

fn parse_decimal(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn write_trace(stream: &ArrivalStream, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io { path: path.to_owned(), source };
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    write_trace_to(stream, &mut out).map_err(io_err)?;
    out.flush().map_err(io_err)
}

pub fn write_trace_to(stream: &ArrivalStream, out: &mut impl Write) -> std::io::Result<()> {
    for f in stream {
        writeln!(out, "{} {}", f.at.0, f.size_bits)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaps_secs(s: &ArrivalStream) -> Vec<f64> {
        s.frames().windows(2).map(|w| (w[1].at - w[0].at).as_secs_f64()).collect()
    }

    fn mean_sd(x: &[f64]) -> (f64, f64) {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        let v = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0);
        (m, v.sqrt())
    }

    #[test]
    fn poisson_mean_and_cv() {
        let lambda = 8_333.333_333;
        let s = gen_poisson(lambda, 12_000, 1_000_001, 7).unwrap();
        let g = gaps_secs(&s);
        let (m, sd) = mean_sd(&g);
        let se = (1.0 / lambda) / (g.len() as f64).sqrt();
        assert!((m - 1.0 / lambda).abs() < 3.0 * se, "mean {m}");
        assert!((sd / m - 1.0).abs() < 0.01, "cv {}", sd / m);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_poisson(1e5, 12_000, 1000, 42).unwrap();
        let b = gen_poisson(1e5, 12_000, 1000, 42).unwrap();
        let c = gen_poisson(1e5, 12_000, 1000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let p = gen_pareto(1.8, 1e5, 12_000, 1000, 42).unwrap();
        assert_eq!(p, gen_pareto(1.8, 1e5, 12_000, 1000, 42).unwrap());
        assert_eq!(a.frames()[0].at, Nanos::ZERO);
    }

    #[test]
    fn pareto_mean_support_and_tail() {
        let lambda = 8_333.333_333;
        let alpha = 1.8;
        let s = gen_pareto(alpha, lambda, 12_000, 1_000_001, 11).unwrap();
        let g = gaps_secs(&s);
        let (m, _) = mean_sd(&g);
        assert!((m * lambda - 1.0).abs() < 0.05, "mean ratio {}", m * lambda);
        let xm = (alpha - 1.0) / (alpha * lambda);
        // Rounding to the nanosecond clock can move a gap by under 1 ns.
        assert!(g.iter().all(|&x| x >= xm - 1e-9));

        // Regression of log CCDF on log gap over one tail decade [10 x_m, 100 x_m].
        let mut sorted = g.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy, mut k) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..=40 {
            let x = 10.0 * xm * 10f64.powf(i as f64 / 40.0);
            let above = sorted.len() - sorted.partition_point(|&v| v <= x);
            let ccdf = above as f64 / n;
            let (lx, ly) = (x.ln(), ccdf.ln());
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            k += 1.0;
        }
        let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        assert!((slope + alpha).abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn pareto_shape_is_restricted() {
        assert!(gen_pareto(1.0, 1e3, 8, 10, 0).is_err());
        assert!(gen_pareto(2.5, 1e3, 8, 10, 0).is_err());
        assert!(gen_pareto(2.0, 1e3, 8, 10, 0).is_ok());
    }

    #[test]
    fn large_shape_degenerates_to_even_spacing() {
        let lambda = 1e4;
        let s = take_stream(RenewalArrivals::pareto_any_shape(50.0, lambda, 8, 3).unwrap(), 100_001).unwrap();
        let g = gaps_secs(&s);
        let (m, sd) = mean_sd(&g);
        assert!((m * lambda - 1.0).abs() < 0.01);
        assert!(sd / m < 0.05, "cv {}", sd / m);
    }

    #[test]
    fn periodic_examples() {
        let s = gen_periodic(Nanos::from_millis(1), 12_000, 3).unwrap();
        let ts: Vec<u64> = s.iter().map(|f| f.at.0).collect();
        assert_eq!(ts, vec![0, 1_000_000, 2_000_000]);
        assert_eq!(gen_periodic(Nanos::from_millis(1), 12_000, 1).unwrap().len(), 1);
        assert!(gen_periodic(Nanos::ZERO, 12_000, 3).is_err());
    }

    #[test]
    fn trace_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.trace");
        let s = gen_poisson(1e5, 12_000, 500, 1).unwrap();
        write_trace(&s, &path).unwrap();
        assert_eq!(read_trace(&path).unwrap(), s);
    }

    #[test]
    fn trace_parsing_rules() {
        let p = Path::new("mem");
        let ok = "# comment\n0 12000\n\n5 800\n5 800\n";
        let s = parse_trace(ok.as_bytes(), p).unwrap();
        assert_eq!(s.len(), 3);
        assert!(parse_trace("".as_bytes(), p).unwrap().is_empty());

        let err = parse_trace("0 12000\n10 12000\n5 12000\n".as_bytes(), p).unwrap_err();
        assert!(matches!(err, Error::TraceParse { line: 3, .. }), "{err}");
        for bad in ["0  12000\n", "0\t12000\n", "-1 12000\n", "0 0\n", "1.5 10\n", "0 12000 7\n"] {
            assert!(matches!(parse_trace(bad.as_bytes(), p), Err(Error::TraceParse { line: 1, .. })), "{bad:?}");
        }
    }

    #[test]
    fn stream_validation() {
        assert!(ArrivalStream::new(vec![Frame::new(Nanos(5), 1), Frame::new(Nanos(4), 1)]).is_err());
        assert!(ArrivalStream::new(vec![Frame::new(Nanos(5), 0)]).is_err());
        assert!(ArrivalStream::new(vec![Frame::new(Nanos(5), 1), Frame::new(Nanos(5), 1)]).is_ok());
    }
}
