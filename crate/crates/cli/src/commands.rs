//! The sweep subcommands.

use std::f64::consts::LN_2;

use clap::Args;
use relay_outage::capacity::{invert_outage, snr_loss_approx, OutageCapacity};
use relay_outage::channel::db_to_linear;
use relay_outage::dmt::finite_snr_dmt_with;
use relay_outage::mcsim::{estimate_outage, point_seed, McOptions, McProtocol};
use relay_outage::multirelay::RelaySet;
use relay_outage::outage::{lowout_config, Protocol};
use relay_outage::{Error, Result};

use crate::grid::Grid;
use crate::scenario::{describe, ScenarioArgs};
use crate::table::{Cell, Table};

#[derive(Debug, Args)]
pub struct OutageArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Normalized threshold grid x = (2^R − 1)/γ
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["rate_bits", "snr_db"])]
    pub x: Option<Grid>,
    /// Rate grid in bits/s/Hz
    #[arg(long, allow_hyphen_values = true, requires = "snr_db")]
    pub rate_bits: Option<Grid>,
    /// SNR grid in dB
    #[arg(long, allow_hyphen_values = true, requires = "rate_bits")]
    pub snr_db: Option<Grid>,
    #[arg(long, default_value = "af")]
    pub protocol: Protocol,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Outage level grid
    #[arg(long)]
    pub eps: Grid,
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Grid,
    #[arg(long, default_value = "af")]
    pub protocol: Protocol,
}

#[derive(Debug, Args)]
pub struct DmtArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Grid,
    /// Multiplexing gain grid
    #[arg(long)]
    pub r: Grid,
    #[arg(long, default_value = "af")]
    pub protocol: Protocol,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub rate_bits: Grid,
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Grid,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "af")]
    pub protocol: Protocol,
    /// Pick the best relay per draw
    #[arg(long)]
    pub selection: bool,
}

#[derive(Debug, Args)]
pub struct SelectionArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Grid,
    #[arg(long, default_value = "af")]
    pub protocol: Protocol,
}

fn header(command: &str, set: &RelaySet) -> Vec<String> {
    let mut h = vec![format!("relay-outage {} {command}", env!("CARGO_PKG_VERSION"))];
    h.extend(describe(set));
    h
}

fn threshold(rate_bits: f64, gamma: f64) -> f64 {
    (rate_bits * LN_2).exp_m1() / gamma
}

/// Low-outage approximation of the selection outage; None unless every link
/// is Rayleigh and the protocol is AF.
pub fn approx_outage(set: &RelaySet, protocol: Protocol, x: f64) -> Option<f64> {
    if protocol != Protocol::Af {
        return None;
    }
    let mut p = set.direct_link_outage().unwrap_or(1.0);
    for l in set.links() {
        p *= lowout_config(l).ok()?.eval(x);
    }
    Some(p)
}

pub fn outage(a: &OutageArgs) -> Result<String> {
    let set = a.scenario.relay_set()?;
    let mut h = header("outage", &set);
    h.push(format!("protocol: {}", a.protocol));
    let mut rows = Vec::new();
    match (&a.x, &a.rate_bits, &a.snr_db) {
        (Some(x), None, None) => {
            h.push(format!("x: {x}"));
            for &x in x.values() {
                rows.push((None, x));
            }
        }
        (None, Some(rate), Some(snr)) => {
            h.push(format!("rate_bits: {rate}"));
            h.push(format!("snr_db: {snr}"));
            for &rb in rate.values() {
                for &db in snr.values() {
                    rows.push((Some((rb, db)), threshold(rb, db_to_linear(db))));
                }
            }
        }
        _ => {
            return Err(Error::Validation(
                "give either --x or both --rate-bits and --snr-db".into(),
            ))
        }
    }
    let mut t = Table::new(&h);
    let by_rate = a.x.is_none();
    if by_rate {
        t.columns(&["rate_bits", "snr_db", "x", "p", "p_approx"]);
    } else {
        t.columns(&["x", "p", "p_approx"]);
    }
    for (rs, x) in rows {
        let p = set.outage(x, a.protocol)?;
        let approx = approx_outage(&set, a.protocol, x);
        let mut cells: Vec<Cell> = Vec::new();
        if let Some((rb, db)) = rs {
            cells.push(rb.into());
            cells.push(db.into());
        }
        cells.extend([x.into(), p.into(), approx.into()]);
        t.row(cells);
    }
    Ok(t.into_string())
}

pub fn capacity(a: &CapacityArgs) -> Result<String> {
    let set = a.scenario.relay_set()?;
    let mut h = header("capacity", &set);
    h.push(format!("protocol: {}", a.protocol));
    h.push(format!("eps: {}", a.eps));
    h.push(format!("snr_db: {}", a.snr_db));
    h.push("capacities in nats/s/Hz".into());
    let mut t = Table::new(&h);
    t.columns(&[
        "eps", "snr_db", "x_eps", "x_eps_approx", "c_awgn", "c_exact", "c_high_snr", "c_low_snr", "c_approx",
    ]);
    let single = set.len() == 1 && set.direct_link_outage().is_none() && a.protocol == Protocol::Af;
    for &eps in a.eps.values() {
        let x = invert_outage(eps, |x| set.outage(x, a.protocol))?;
        let x_approx = if single {
            snr_loss_approx(eps, &set.links()[0]).ok().and_then(|s| s.x_eps)
        } else {
            None
        };
        for &db in a.snr_db.values() {
            let gamma = db_to_linear(db);
            let c = OutageCapacity::from_x(eps, gamma, x);
            t.row(vec![
                eps.into(),
                db.into(),
                x.into(),
                x_approx.into(),
                c.awgn().into(),
                c.exact.into(),
                c.high_snr.into(),
                c.low_snr.into(),
                x_approx.map(|xa| (gamma * xa).ln_1p()).into(),
            ]);
        }
    }
    Ok(t.into_string())
}

pub fn dmt(a: &DmtArgs) -> Result<String> {
    let set = a.scenario.relay_set()?;
    let mut h = header("dmt", &set);
    h.push(format!("protocol: {}", a.protocol));
    h.push(format!("snr_db: {}", a.snr_db));
    h.push(format!("r: {}", a.r));
    h.push("rate: e^R - 1 = snr^r".into());
    let mut t = Table::new(&h);
    t.columns(&["snr_db", "r", "d", "d_asymptotic", "saturated"]);
    for &db in a.snr_db.values() {
        for &r in a.r.values() {
            let pt = finite_snr_dmt_with(db_to_linear(db), r, |x| set.outage(x, a.protocol))?;
            t.row(vec![
                db.into(),
                r.into(),
                pt.d.into(),
                set.asymptotic_dmt(r)?.into(),
                pt.saturated.into(),
            ]);
        }
    }
    Ok(t.into_string())
}

pub fn mc(a: &McArgs) -> Result<String> {
    let set = a.scenario.relay_set()?;
    let protocol = match (a.protocol, a.selection) {
        (Protocol::Af, false) => McProtocol::Af,
        (Protocol::Df, false) => McProtocol::Df,
        (Protocol::Af, true) => McProtocol::AfSelection,
        (Protocol::Df, true) => McProtocol::DfSelection,
    };
    let mut h = header("mc", &set);
    h.push(format!("protocol: {protocol}"));
    h.push(format!("rate_bits: {}", a.rate_bits));
    h.push(format!("snr_db: {}", a.snr_db));
    h.push(format!("trials: {}", a.trials));
    h.push(format!("seed: {} (point i uses seed + i*0x9e3779b97f4a7c15)", a.seed));
    let mut t = Table::new(&h);
    t.columns(&["rate_bits", "snr_db", "p_mc", "stderr", "trials", "events", "p_analytic"]);
    let mut i = 0;
    for &rb in a.rate_bits.values() {
        for &db in a.snr_db.values() {
            let gamma = db_to_linear(db);
            let opts = McOptions::new(a.trials, point_seed(a.seed, i));
            i += 1;
            let est = estimate_outage(&set, rb * LN_2, gamma, protocol, opts)?;
            let p = set.outage(threshold(rb, gamma), a.protocol)?;
            t.row(vec![
                rb.into(),
                db.into(),
                est.p_hat.into(),
                est.stderr.into(),
                est.trials.into(),
                est.events.into(),
                p.into(),
            ]);
        }
    }
    Ok(t.into_string())
}

pub fn selection(a: &SelectionArgs) -> Result<String> {
    let set = a.scenario.relay_set()?;
    let mut h = header("selection", &set);
    h.push(format!("protocol: {}", a.protocol));
    h.push(format!("x: {}", a.x));
    let mut t = Table::new(&h);
    let mut cols: Vec<String> = (1..=set.len()).map(|i| format!("p_relay_{i}")).collect();
    cols.insert(0, "x".into());
    cols.extend(["p_selection".into(), "p_lowout".into()]);
    t.columns(&cols);
    for &x in a.x.values() {
        let per = set.link_outages(x, a.protocol)?;
        let mut cells: Vec<Cell> = vec![x.into()];
        cells.extend(per.iter().map(|&p| Cell::from(p)));
        cells.push(set.outage(x, a.protocol)?.into());
        cells.push(approx_outage(&set, a.protocol, x).into());
        t.row(cells);
    }
    Ok(t.into_string())
}
