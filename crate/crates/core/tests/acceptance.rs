//! Acceptance suite. Prints one PASS/FAIL line per criterion, followed by
//! indented detail lines, and exits non-zero when a criterion outside
//! `KNOWN_MISSES` fails.
//!
//! Scale: 10^5 frames per run, 10 replications per point.

use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use eee_core::analytic::{
    expected_h_poisson, expected_n_poisson, expected_tlpi_poisson, frame_tx_fraction, hyst_delay_model,
    precoalesce_fraction, precoalesce_fraction_renewal, precoalesce_mean_wait, sleep_fraction_hyst_delay,
};
use eee_core::analyzer::{estimate_lpi, LpiAccounting};
use eee_core::simulator::{departure_trace, replicate, run_nic_sim, run_tandem_sim, RunSpec};
use eee_core::stats::{Metric, MetricSummary};
use eee_core::traffic::generate;
use eee_core::tuner::{bunch_bound_ideal, bunch_match_frame_tx};
use eee_core::{CoalescerConfig, EeeConfig, LinkConfig, Load, Nanos, Preset, TrafficSpec};

const FRAMES: usize = 100_000;
const REPS: usize = 10;
const SEED: u64 = 1;
const L: u64 = 12_000;
const PARETO_ALPHA: f64 = 1.8;

/// Criteria that fail for reasons recorded in the README's "Known deviations".
/// Their FAIL lines are still printed.
const KNOWN_MISSES: &[u32] = &[6, 7];

struct Outcome {
    id: u32,
    pass: bool,
    summary: String,
    details: Vec<String>,
}

fn link() -> LinkConfig {
    LinkConfig::ten_gig()
}

fn us(x: u64) -> Nanos {
    Nanos::from_micros(x)
}

fn poisson(rho: f64) -> TrafficSpec {
    TrafficSpec::poisson(rho, &link(), L).unwrap()
}

fn pareto(rho: f64) -> TrafficSpec {
    TrafficSpec::pareto(PARETO_ALPHA, rho, &link(), L).unwrap()
}

fn load(rho: f64) -> Load {
    Load::from_rho(rho, &link(), L).unwrap()
}

fn nic(traffic: TrafficSpec, eee: EeeConfig) -> RunSpec {
    RunSpec::new(traffic, FRAMES, eee, link())
}

fn tandem(traffic: TrafficSpec, eee: EeeConfig, bunch: Nanos) -> RunSpec {
    nic(traffic, eee).with_coalescer(CoalescerConfig::new(bunch))
}

fn summary(spec: &RunSpec, metric: Metric) -> MetricSummary {
    replicate(spec, REPS, SEED).unwrap().get(metric)
}

fn rho_lpi(spec: &RunSpec) -> MetricSummary {
    summary(spec, Metric::RhoLpi)
}

/// One simulated point compared with a model value.
struct Point {
    label: String,
    sim: MetricSummary,
    model: f64,
    tol: f64,
}

impl Point {
    fn new(label: String, sim: MetricSummary, model: f64, floor: f64) -> Self {
        let tol = floor.max(3.0 * sim.std_err);
        Point { label, sim, model, tol }
    }

    fn diff(&self) -> f64 {
        (self.sim.mean - self.model).abs()
    }

    fn ok(&self) -> bool {
        self.diff() <= self.tol
    }

    fn line(&self) -> String {
        format!(
            "{}: sim {:.4} ± {:.4} (SE), model {:.4}, |Δ| {:.4}, tol {:.4}{}",
            self.label,
            self.sim.mean,
            self.sim.std_err,
            self.model,
            self.diff(),
            self.tol,
            if self.ok() { "" } else { "  <-- miss" }
        )
    }
}

/// Pass flag, count line and the miss lines (or the worst point when all pass).
fn grade(points: &[Point]) -> (bool, String, Vec<String>) {
    let ok = points.iter().filter(|p| p.ok()).count();
    let worst = points.iter().max_by(|a, b| (a.diff() / a.tol).total_cmp(&(b.diff() / b.tol))).unwrap();
    let mut details: Vec<String> = points.iter().filter(|p| !p.ok()).map(Point::line).collect();
    if details.is_empty() {
        details.push(format!("closest to tolerance: {}", worst.line()));
    }
    (ok == points.len(), format!("{ok}/{} points within tolerance", points.len()), details)
}

fn c1() -> Outcome {
    let grid: Vec<(u64, f64)> =
        [0, 10, 100, 500, 1000].iter().flat_map(|&h| [0.001, 0.01, 0.1, 0.5].map(move |r| (h, r))).collect();
    let points: Vec<Point> = grid
        .par_iter()
        .map(|&(h, rho)| {
            let eee = EeeConfig::new(us(h), Nanos::ZERO);
            let model = hyst_delay_model(load(rho), &eee, &link()).unwrap().rho_lpi;
            Point::new(format!("h*={h}us rho={rho}"), rho_lpi(&nic(poisson(rho), eee)), model, 0.01)
        })
        .collect();
    let (pass, summary, details) = grade(&points);
    Outcome { id: 1, pass, summary: format!("hysteresis model, Poisson: {summary}"), details }
}

fn c2() -> Outcome {
    let grid: Vec<(u64, u64, f64)> = [0, 10, 100, 500, 1000]
        .iter()
        .flat_map(|&h| [0, 6, 20, 200, 500].iter().flat_map(move |&d| [0.001, 0.01, 0.1].map(move |r| (h, d, r))))
        .collect();
    let points: Vec<Point> = grid
        .par_iter()
        .map(|&(h, d, rho)| {
            let eee = EeeConfig::new(us(h), us(d));
            let model = hyst_delay_model(load(rho), &eee, &link()).unwrap().rho_lpi;
            Point::new(format!("h*={h}us d={d}us rho={rho}"), rho_lpi(&nic(poisson(rho), eee)), model, 0.01)
        })
        .collect();
    let (grid_ok, summary, mut details) = grade(&points);

    let at = |d: u64| rho_lpi(&nic(poisson(0.01), EeeConfig::new(us(100), us(d)))).mean;
    let (r0, r6, r200) = (at(0), at(6), at(200));
    let big = r200 - r0 > 0.05;
    let small = r6 - r0 < 0.02;
    details.push(format!(
        "rho=0.01 h*=100us: rho_lpi(d=200us) - rho_lpi(0) = {:.4} (need > 0.05), rho_lpi(d=6us) - rho_lpi(0) = {:.4} (need < 0.02)",
        r200 - r0,
        r6 - r0
    ));
    Outcome {
        id: 2,
        pass: grid_ok && big && small,
        summary: format!(
            "delay model, Poisson: {summary}; threshold effect {}",
            if big && small { "reproduced" } else { "missing" }
        ),
        details,
    }
}

fn c3() -> Outcome {
    let non = rho_lpi(&nic(poisson(0.01), Preset::NonAggressive.eee()));
    let agg = rho_lpi(&nic(poisson(0.01), Preset::Aggressive.eee()));
    let model = hyst_delay_model(load(0.01), &Preset::Aggressive.eee(), &link()).unwrap().rho_lpi;
    let pass = non.mean < 0.05 && (0.75..=0.85).contains(&agg.mean);
    Outcome {
        id: 3,
        pass,
        summary: format!(
            "rho=0.01: (600us, 6us) rho_lpi {:.4} (need < 0.05); (20us, 6us) rho_lpi {:.4} (need in [0.75, 0.85])",
            non.mean, agg.mean
        ),
        details: vec![format!("analytic value for (20us, 6us): {model:.4}")],
    }
}

fn c4() -> Outcome {
    let tb = link().transitions();
    let mut poisson_grid = Vec::new();
    for h in [0u64, 10, 100, 500] {
        for b in [20u64, 50, 100, 200, 500, 1000, 5000] {
            for d in [0u64, 6, 20] {
                if (b as f64) * 1e-6 > h as f64 * 1e-6 + tb && d < b {
                    poisson_grid.push((h, b, d));
                }
            }
        }
    }
    let closed_form = |traffic: &TrafficSpec, h: u64, b: u64, d: u64| {
        let l = traffic.load(&link()).unwrap();
        precoalesce_fraction(l, b as f64 * 1e-6, &EeeConfig::new(us(h), us(d)), &link()).valid()
    };
    let run =
        |traffic: TrafficSpec, h: u64, b: u64, d: u64| rho_lpi(&tandem(traffic, EeeConfig::new(us(h), us(d)), us(b)));

    let poisson_points: Vec<Point> = poisson_grid
        .par_iter()
        .filter_map(|&(h, b, d)| {
            let t = poisson(0.01);
            let model = closed_form(&t, h, b, d)?;
            Some(Point::new(format!("Poisson rho=0.01 h*={h}us B={b}us d={d}us"), run(t, h, b, d), model, 0.01))
        })
        .collect();

    let pareto_grid: Vec<(f64, u64, u64)> = [0.001, 0.01, 0.05, 0.1, 0.3]
        .iter()
        .flat_map(|&r| [(100, 0), (100, 50), (500, 0), (500, 200), (1000, 0), (1000, 500)].map(move |(b, d)| (r, b, d)))
        .collect();
    let pareto_points: Vec<Point> = pareto_grid
        .par_iter()
        .filter_map(|&(rho, b, d)| {
            let t = pareto(rho);
            let model = closed_form(&t, 10, b, d)?;
            let p = Point::new(format!("Pareto rho={rho} h*=10us B={b}us d={d}us"), run(t, 10, b, d), model, 0.05);
            // Fixed absolute tolerance for heavy-tailed input.
            Some(Point { tol: 0.05, ..p })
        })
        .collect();

    let (p_ok, p_sum, mut details) = grade(&poisson_points);
    let (x_ok, x_sum, x_details) = grade(&pareto_points);
    details.extend(x_details);

    // Higher loads, outside the graded grid: record how the λB
    // form and the renewal form fare against the tandem simulation.
    let extra: Vec<(f64, u64, u64, u64)> = [0.1, 0.5]
        .iter()
        .flat_map(|&r| poisson_grid.iter().filter(|g| g.2 == 0).map(move |&(h, b, d)| (r, h, b, d)))
        .collect();
    type Extra = (String, f64, Option<f64>, Option<f64>, MetricSummary);
    let extra_res: Vec<Extra> = extra
        .par_iter()
        .map(|&(rho, h, b, d)| {
            let t = poisson(rho);
            let l = load(rho);
            let eee = EeeConfig::new(us(h), us(d));
            let pub_form = precoalesce_fraction(l, b as f64 * 1e-6, &eee, &link()).valid();
            let renewal = precoalesce_fraction_renewal(l, b as f64 * 1e-6, &eee, &link()).valid();
            (format!("rho={rho} h*={h}us B={b}us"), rho, pub_form, renewal, run(t, h, b, d))
        })
        .collect();
    let miss = |m: Option<f64>, s: &MetricSummary| m.is_some_and(|m| (s.mean - m).abs() > 0.01f64.max(3.0 * s.std_err));
    let pub_miss: Vec<&str> = extra_res.iter().filter(|e| miss(e.2, &e.4)).map(|e| e.0.as_str()).collect();
    let ren_miss = extra_res.iter().filter(|e| miss(e.3, &e.4)).count();
    details.push(format!(
        "extra (not graded) Poisson rho in {{0.1, 0.5}}, d=0: closed form misses {}/{} [{}]; renewal form misses {}/{}",
        pub_miss.len(),
        extra_res.len(),
        pub_miss.join(", "),
        ren_miss,
        extra_res.len()
    ));

    Outcome {
        id: 4,
        pass: p_ok && x_ok,
        summary: format!("pre-coalescing model: Poisson {p_sum} (max(0.01, 3 SE)); Pareto {x_sum} (0.05)"),
        details,
    }
}

fn c5() -> Outcome {
    let s = rho_lpi(&tandem(poisson(0.01), EeeConfig::new(us(100), Nanos::ZERO), Nanos::from_millis(1)));
    Outcome {
        id: 5,
        pass: s.mean >= 0.8,
        summary: format!("rho=0.01 h*=100us B=1ms: rho_lpi {:.4} (need >= 0.8)", s.mean),
        details: vec![],
    }
}

fn c6() -> Outcome {
    let delta = 0.1;
    let grid: Vec<(&str, Preset, f64)> = ["Poisson", "Pareto"]
        .iter()
        .flat_map(|&k| [Preset::Aggressive, Preset::NonAggressive].map(move |p| (k, p)))
        .flat_map(|(k, p)| [0.005, 0.01, 0.05, 0.1].map(move |r| (k, p, r)))
        .collect();
    let traffic = |kind: &str, rho: f64| if kind == "Poisson" { poisson(rho) } else { pareto(rho) };
    let rows: Vec<(String, f64, f64, f64)> = grid
        .par_iter()
        .map(|&(kind, p, rho)| {
            let eee = p.eee();
            let bound = bunch_bound_ideal(&eee, &link(), L, delta).unwrap();
            let approx = Nanos::from_secs_f64(bound.bunch_approx).unwrap();
            let exact = Nanos::from_secs_f64(bound.bunch_exact).unwrap();
            let s = rho_lpi(&tandem(traffic(kind, rho), eee, approx)).mean;
            let with_exact = rho_lpi(&tandem(traffic(kind, rho), eee, exact)).mean;
            (format!("{kind} {p} rho={rho} B={approx}"), s, 1.0 - rho - delta - 0.01, with_exact)
        })
        .collect();
    let ok = rows.iter().filter(|r| r.1 >= r.2).count();
    let mut details: Vec<String> = rows
        .iter()
        .filter(|r| r.1 < r.2)
        .map(|r| {
            format!(
                "{}: rho_lpi {:.4}, need >= {:.4}  <-- miss (with the exact load-independent bound: {:.4})",
                r.0, r.1, r.2, r.3
            )
        })
        .collect();
    let worst = rows.iter().min_by(|a, b| (a.1 - a.2).total_cmp(&(b.1 - b.2))).unwrap();
    details.push(format!("smallest margin: {} at {:.4} vs {:.4}", worst.0, worst.1, worst.2));
    Outcome {
        id: 6,
        pass: ok == rows.len(),
        summary: format!(
            "B = h*/delta, delta=0.1, Poisson and Pareto alpha=1.8: {ok}/{} points reach 1 - rho - delta - 0.01",
            rows.len()
        ),
        details,
    }
}

fn c7() -> Outcome {
    let grid: Vec<(Preset, f64)> =
        [Preset::Aggressive, Preset::NonAggressive].iter().flat_map(|&p| [0.01, 0.1].map(move |r| (p, r))).collect();
    let points: Vec<Point> = grid
        .par_iter()
        .map(|&(p, rho)| {
            let eee = p.eee();
            let r = bunch_match_frame_tx(load(rho), &eee, &link());
            let b = Nanos::from_secs_f64(r.bunch_exact).unwrap();
            let s = rho_lpi(&tandem(poisson(rho), eee, b));
            Point::new(format!("{p} rho={rho} B={b}"), s, frame_tx_fraction(load(rho), &link()), 0.01)
        })
        .collect();
    let (pass, summary, mut details) = grade(&points);
    if !pass {
        details.push("all points:".into());
        details.extend(points.iter().filter(|p| p.ok()).map(Point::line));
    }
    Outcome { id: 7, pass, summary: format!("frame-transmission matching with exact bunch length: {summary}"), details }
}

fn c8() -> Outcome {
    let link = link();
    let eee = Preset::NonAggressive.eee();
    let delta = 0.1;
    let tuned = Nanos::from_secs_f64(bunch_bound_ideal(&eee, &link, L, delta).unwrap().bunch_approx).unwrap();
    let mean_check = |rho: f64, b: Nanos| {
        let s = summary(&tandem(poisson(rho), eee, b), Metric::MeanWait);
        let model = precoalesce_mean_wait(load(rho).rate, rho, 0.0, b.as_secs_f64(), link.tw()).unwrap();
        let rel = (s.mean - model).abs() / model;
        (
            rel <= 0.05,
            format!(
                "rho={rho} B={b}: mean wait {:.4e} s, model {:.4e} s, rel {:.4} (need <= 0.05)",
                s.mean, model, rel
            ),
        )
    };
    let (m1, l1) = mean_check(0.01, Nanos::from_millis(6));
    let (m2, l2) = mean_check(0.1, tuned);
    let mut details = vec![l1, l2];

    let p95 = |eee: EeeConfig, b: Nanos, rho: f64| {
        let s = summary(&tandem(poisson(rho), eee, b), Metric::P95Wait);
        let bound = b.as_secs_f64() + link.tw() + 2.0 * link.service_secs(L);
        (s.mean <= bound, s.mean, bound)
    };
    let mut p_ok = true;
    for rho in [0.005, 0.01, 0.05, 0.1] {
        let (ok, v, bound) = p95(eee, tuned, rho);
        p_ok &= ok;
        details.push(format!(
            "{} rho={rho} B={tuned}: p95 {:.4e} s <= {:.4e} s{}",
            Preset::NonAggressive,
            v,
            bound,
            if ok { "" } else { "  <-- miss" }
        ));
    }
    let agg = Preset::Aggressive.eee();
    let agg_b = Nanos::from_secs_f64(bunch_bound_ideal(&agg, &link, L, delta).unwrap().bunch_approx).unwrap();
    let agg_rows: Vec<String> = [0.005, 0.01, 0.05, 0.1]
        .iter()
        .map(|&rho| {
            let (ok, v, bound) = p95(agg, agg_b, rho);
            let m = summary(&tandem(poisson(rho), agg, agg_b), Metric::MeanWait).mean;
            let model = precoalesce_mean_wait(load(rho).rate, rho, 0.0, agg_b.as_secs_f64(), link.tw()).unwrap();
            format!(
                "extra (not graded) {} rho={rho} B={agg_b}: p95 {:.4e} s vs {:.4e} s ({}), mean rel error {:.4}",
                Preset::Aggressive,
                v,
                bound,
                if ok { "within" } else { "above" },
                (m - model).abs() / model
            )
        })
        .collect();
    details.extend(agg_rows);
    Outcome {
        id: 8,
        pass: m1 && m2 && p_ok,
        summary: format!(
            "frame delay, {}: mean wait {} the model within 5%, p95 {} B + T_W + 2L/C",
            Preset::NonAggressive,
            if m1 && m2 { "matches" } else { "misses" },
            if p_ok { "stays below" } else { "exceeds" }
        ),
        details,
    }
}

/// Sample mean and standard error.
fn mean_se(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut n, mut s, mut s2) = (0.0, 0.0, 0.0);
    for x in xs {
        n += 1.0;
        s += x;
        s2 += x * x;
    }
    let m = s / n;
    (m, ((s2 / n - m * m) * n / (n - 1.0) / n).sqrt())
}

fn c9() -> Outcome {
    let link = link();
    let mut details = Vec::new();
    let mut pass = true;

    // M/D/1: no bunch, no wake time leaves only the Pollaczek-Khinchine wait.
    let mut worst = 0.0f64;
    for rho in [0.01, 0.1, 0.5, 0.8] {
        let l = load(rho);
        let w = precoalesce_mean_wait(l.rate, rho, 0.0, 0.0, 0.0).unwrap();
        let s = link.service_secs(L);
        let md1 = rho * s / (2.0 * (1.0 - rho));
        worst = worst.max((w - md1).abs() / md1);
    }
    pass &= worst <= 1e-9;
    details.push(format!("M/D/1 wait: worst relative error {worst:.2e} (need <= 1e-9)"));

    let mut worst = 0.0f64;
    for i in 1..=99 {
        let rho = i as f64 / 100.0;
        let a = sleep_fraction_hyst_delay(&poisson(rho), &EeeConfig::frame_transmission(), &link).unwrap().rho_lpi;
        let b = frame_tx_fraction(load(rho), &link);
        worst = worst.max((a - b).abs() / b);
    }
    pass &= worst <= 1e-12;
    details.push(format!("h*=0,d=0 model vs frame transmission: worst relative error {worst:.2e} (need <= 1e-12)"));

    const N: usize = 1_000_000;
    let mut rng = StdRng::seed_from_u64(9);
    for (lambda, h) in [(8_333.3, 20e-6), (83_333.3, 10e-6), (8_333.3, 100e-6), (416_666.7, 2e-6)] {
        let exp = Exp::new(lambda).unwrap();
        let mut counts = Vec::with_capacity(N);
        let mut lengths = Vec::with_capacity(N);
        for _ in 0..N {
            let mut n = 1u64;
            loop {
                let x: f64 = exp.sample(&mut rng);
                if x >= h {
                    lengths.push(h);
                    break;
                }
                lengths.push(x);
                n += 1;
            }
            counts.push(n as f64);
        }
        let (mn, sn) = mean_se(counts.iter().copied());
        let (mh, sh) = mean_se(lengths.iter().copied());
        let en = expected_n_poisson(lambda, h).unwrap();
        let eh = expected_h_poisson(lambda, h).unwrap();
        let ok = (mn - en).abs() <= 3.0 * sn && (mh - eh).abs() <= 3.0 * sh;
        pass &= ok;
        details.push(format!(
            "E[n], E[h] at lambda={lambda} h*={h}: MC {mn:.5}/{mh:.4e} vs {en:.5}/{eh:.4e}, |Δ|/SE {:.2}/{:.2}",
            (mn - en).abs() / sn,
            (mh - eh).abs() / sh
        ));
    }
    let ts = link.ts();
    for (lambda, d) in [(8_333.3, 0.0), (83_333.3, 1e-6), (833_333.3, 2e-6), (83_333.3, 6e-6), (8_333.3, 200e-6)] {
        let exp = Exp::new(lambda).unwrap();
        let (m, se) = mean_se((0..N).map(|_| {
            let x: f64 = exp.sample(&mut rng);
            (x + d - ts).max(0.0)
        }));
        let e = expected_tlpi_poisson(lambda, d, ts).unwrap();
        let ok = (m - e).abs() <= 3.0 * se;
        pass &= ok;
        details.push(format!(
            "E[T_LPI] at lambda={lambda} d={d}: MC {m:.5e} vs {e:.5e}, |Δ|/SE {:.2}",
            (m - e).abs() / se
        ));
    }
    Outcome { id: 9, pass, summary: "closed-form oracle identities and Monte Carlo checks".into(), details }
}

fn c10() -> Outcome {
    let link = link();
    let eee = EeeConfig::new(us(20), Nanos::ZERO);
    let bunch = us(200);
    let mut details = Vec::new();
    let mut est_ok = true;
    for (mbps, rho) in [(10, 0.001), (100, 0.01), (850, 0.085)] {
        let arrivals = generate(&pareto(rho), FRAMES, SEED).unwrap();
        let plain = run_nic_sim(&arrivals, &eee, &link).unwrap();
        let coal = run_tandem_sim(&arrivals, &CoalescerConfig::new(bunch), &eee, &link).unwrap().nic;
        for (name, st) in [("no coalescing", &plain), ("200us coalescing", &coal)] {
            let dep = departure_trace(&arrivals, st);
            // An LPI period entered before the first frame leaves no gap in the trace.
            let hidden = usize::from(dep.frames()[0].at > eee.hysteresis);
            let events = st.lpi_entries as usize - hidden;
            let e = estimate_lpi(&dep, &link, &eee, events, LpiAccounting::KeepDelay).unwrap();
            let diff = (e.time_in_lpi - st.rho_lpi_measured).abs();
            est_ok &= diff <= 0.02;
            details.push(format!(
                "{mbps} Mb/s {name}: {:.0} LPI events/s, mean LPI {:.1} us, time in LPI {:.1}% (simulator {:.1}%, |Δ| {:.4})",
                e.lpi_events_per_s,
                e.mean_lpi_duration * 1e6,
                e.time_in_lpi * 100.0,
                st.rho_lpi_measured * 100.0,
                diff
            ));
        }
    }
    let ratio = |traffic: TrafficSpec| {
        let a = summary(&nic(traffic.clone(), eee), Metric::LpiEventsPerSec).mean;
        let b = summary(&tandem(traffic, eee, bunch), Metric::LpiEventsPerSec).mean;
        a / b
    };
    let r = ratio(pareto(0.01));
    let ratio_ok = (2.2..=3.0).contains(&r);
    details.push(format!("extra (not graded) same ratio with Poisson input: {:.3}", ratio(poisson(0.01))));
    Outcome {
        id: 10,
        pass: est_ok && ratio_ok,
        summary: format!(
            "analyzer {} ground truth within 0.02 at 10/100/850 Mb/s; LPI event rate ratio without/with coalescing at 100 Mb/s {:.3} (need in [2.2, 3.0])",
            if est_ok { "recovers" } else { "misses" },
            r
        ),
        details,
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [fn() -> Outcome; 10] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10];
    let mut unexpected = Vec::new();
    for c in criteria {
        let t = Instant::now();
        let o = c();
        println!(
            "criterion {:>2} {}: {} [{:.1}s]",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.summary,
            t.elapsed().as_secs_f64()
        );
        for d in &o.details {
            println!("    {d}");
        }
        if !o.pass && !KNOWN_MISSES.contains(&o.id) {
            unexpected.push(o.id);
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
