use eee_core::analytic::{
    energy_from_sleep, frame_tx_fraction, precoalesce_fraction, precoalesce_fraction_renewal, precoalesce_mean_wait,
    sleep_fraction_hyst_delay, Prediction,
};
use eee_core::Error;

use super::{alpha_column, bunch_of, check_loads, points, process_name, require_load, to_load, traffic_spec, Point};
use crate::args::{ModelArgs, ModelKind, ProcessKind};
use crate::error::{domain, CliError};
use crate::output::{num, opt, write_csv};
use crate::settings::{self, Bunching};

const HEADER: &[&str] = &[
    "model",
    "process",
    "alpha",
    "load",
    "rate",
    "frame_bits",
    "h_s",
    "d_s",
    "bunch_s",
    "valid",
    "violation",
    "rho_lpi",
    "sigma",
    "exp_tlpi_s",
    "exp_n",
    "exp_h_s",
    "exp_tcycle_s",
    "mean_wait_s",
];

#[derive(Default)]
struct Values {
    valid: bool,
    violation: String,
    rho_lpi: Option<f64>,
    exp_tlpi: Option<f64>,
    exp_n: Option<f64>,
    exp_h: Option<f64>,
    exp_tcycle: Option<f64>,
    mean_wait: Option<f64>,
}

fn model_name(k: ModelKind) -> &'static str {
    match k {
        ModelKind::Auto => "auto",
        ModelKind::HystDelay => "hyst-delay",
        ModelKind::FrameTx => "frame-tx",
        ModelKind::Coalesced => "coalesced",
        ModelKind::CoalescedRenewal => "coalesced-renewal",
    }
}

pub fn run(args: ModelArgs) -> Result<(), CliError> {
    let file = settings::load_config(args.link.config.as_deref())?;
    let (link, frame_bits) = settings::link(&args.link, &file)?;
    let (hs, ds) = settings::eee(&args.eee, &file)?;
    let traffic = settings::traffic(&args.traffic, &file)?;
    let coal = settings::coalescer(&args.coalescer, &file)?;
    check_loads(traffic.loads.as_deref())?;
    if traffic.loads.is_none() {
        return Err(CliError::usage("model needs --load"));
    }
    let kind = match settings::model_kind(args.model, &file)? {
        ModelKind::Auto if coal.bunching == Bunching::None => ModelKind::HystDelay,
        ModelKind::Auto => ModelKind::Coalesced,
        k => k,
    };
    let coalesced = matches!(kind, ModelKind::Coalesced | ModelKind::CoalescedRenewal);
    if coalesced == (coal.bunching == Bunching::None) {
        let need = if coalesced { "needs --bunch or --bunch-rule" } else { "takes no bunch length" };
        return Err(CliError::usage(format!("model {} {need}", model_name(kind))));
    }

    let mut rows = Vec::new();
    for p in points(&hs, &ds, &coal.bunching, traffic.loads.as_deref()) {
        let rho = require_load(&p)?;
        let load = to_load(rho, &link, frame_bits)?;
        let spec = traffic_spec(&traffic, rho, &link, frame_bits)?;
        let bunch = bunch_of(&p, &coal.bunching, coal.delta, &link, frame_bits)?;
        let v = evaluate(kind, &p, bunch.map(|b| b.as_secs_f64()), load, &spec, &traffic.process, &link)?;
        let sigma = v.rho_lpi.map(|r| energy_from_sleep(link.sigma_lpi, r)).transpose().map_err(domain)?;
        rows.push(vec![
            model_name(kind).to_string(),
            process_name(traffic.process).to_string(),
            alpha_column(&traffic),
            num(rho),
            num(load.rate),
            frame_bits.to_string(),
            num(p.eee.h_star()),
            num(p.eee.d()),
            opt(bunch.map(|b| b.as_secs_f64())),
            v.valid.to_string(),
            v.violation,
            opt(v.rho_lpi),
            opt(sigma),
            opt(v.exp_tlpi),
            opt(v.exp_n),
            opt(v.exp_h),
            opt(v.exp_tcycle),
            opt(v.mean_wait),
        ]);
    }
    write_csv(args.out.as_deref(), HEADER, &rows)
}

fn evaluate(
    kind: ModelKind,
    p: &Point,
    bunch: Option<f64>,
    load: eee_core::Load,
    spec: &eee_core::TrafficSpec,
    process: &ProcessKind,
    link: &eee_core::LinkConfig,
) -> Result<Values, CliError> {
    let prediction = |pred: Prediction| match pred {
        Prediction::Valid(v) => Values { valid: true, rho_lpi: Some(v), ..Values::default() },
        Prediction::OutOfValidity(why) => Values { violation: why.to_string(), ..Values::default() },
    };
    Ok(match kind {
        ModelKind::HystDelay => match sleep_fraction_hyst_delay(spec, &p.eee, link) {
            Ok(m) => Values {
                valid: true,
                rho_lpi: Some(m.rho_lpi),
                exp_tlpi: Some(m.exp_tlpi),
                exp_n: Some(m.exp_n),
                exp_h: Some(m.exp_h),
                exp_tcycle: m.exp_tcycle,
                ..Values::default()
            },
            Err(e @ Error::Overflow { .. }) => Values { violation: e.to_string(), ..Values::default() },
            Err(e) => return Err(domain(e)),
        },
        ModelKind::FrameTx => Values { valid: true, rho_lpi: Some(frame_tx_fraction(load, link)), ..Values::default() },
        ModelKind::Coalesced | ModelKind::CoalescedRenewal => {
            let b = bunch.expect("coalesced models have a bunch");
            let mut v = if kind == ModelKind::Coalesced {
                prediction(precoalesce_fraction(load, b, &p.eee, link))
            } else {
                prediction(precoalesce_fraction_renewal(load, b, &p.eee, link))
            };
            if *process == ProcessKind::Poisson {
                v.mean_wait = Some(precoalesce_mean_wait(load.rate, load.rho, 0.0, b, link.tw()).map_err(domain)?);
            }
            v
        }
        ModelKind::Auto => unreachable!("resolved before evaluation"),
    })
}
