//! Canned sweeps reproducing the reference figure set (fig2..fig6).

use std::f64::consts::LN_2;

use clap::{Args, ValueEnum};
use relay_outage::capacity::{snr_loss, snr_loss_approx};
use relay_outage::channel::{db_to_linear, ChannelConfig, CorrelationMatrix};
use relay_outage::mcsim::{estimate_outage_single, point_seed, snr_loss_mc, McOptions, McProtocol};
use relay_outage::multirelay::RelaySet;
use relay_outage::outage::{lowout_config, lowout_iid, outage_probability, Protocol};
use relay_outage::Result;

use crate::grid::Grid;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// 2x2, rho = 0.5: outage vs relay noise ratio
    Fig2,
    /// 1x1, 2x1, 1x2 at alpha = 1: outage vs x, exact, low-outage and MC
    Fig3,
    /// 2x1 at alpha = 0, x = 0.01: outage vs correlation
    Fig4,
    /// 1x1, 2x1, 1x2 at r = 0, alpha = 1: outage vs SNR, exact and MC
    Fig5,
    /// 1x1, 2x1 at eps = 0.05, alpha = 0: outage capacity vs SNR
    Fig6,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    /// Monte-Carlo trials per point
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

const SHAPES: [(usize, usize); 3] = [(1, 1), (2, 1), (1, 2)];

fn iid(m: usize, n: usize, alpha: f64) -> Result<ChannelConfig> {
    ChannelConfig::iid(m, n, alpha)
}

fn names(prefix: &str, shapes: &[(usize, usize)]) -> Vec<String> {
    shapes.iter().map(|(m, n)| format!("{prefix}_{m}x{n}")).collect()
}

fn header(a: &FigureArgs, lines: &[&str]) -> Vec<String> {
    let name = a.figure.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let mut h = vec![format!("relay-outage {} figure {name}", env!("CARGO_PKG_VERSION"))];
    h.extend(lines.iter().map(|s| s.to_string()));
    h
}

fn mc_lines(a: &FigureArgs) -> String {
    format!(
        "monte-carlo: {} trials per point, seed {} (point i uses seed + i*0x9e3779b97f4a7c15)",
        a.trials, a.seed
    )
}

pub fn run(a: &FigureArgs) -> Result<String> {
    match a.figure {
        Figure::Fig2 => fig2(a),
        Figure::Fig3 => fig3(a),
        Figure::Fig4 => fig4(a),
        Figure::Fig5 => fig5(a),
        Figure::Fig6 => fig6(a),
    }
}

fn fig2(a: &FigureArgs) -> Result<String> {
    let corr = CorrelationMatrix::two_antenna(0.5.into())?;
    let xs = [1e-1, 1e-2, 1e-3];
    let mut t = Table::new(&header(
        a,
        &["2x2 af, rho_sr = rho_rd = 0.5", "alpha: logspace 1e-3..1e2, 51 points"],
    ));
    t.columns(&["alpha", "p_x1e-1", "p_x1e-2", "p_x1e-3"]);
    for alpha in Grid::logspace(1e-3, 1e2, 51) {
        let cfg = iid(2, 2, alpha)?.with_correlation(corr.clone(), corr.clone())?;
        let mut cells: Vec<Cell> = vec![alpha.into()];
        for x in xs {
            cells.push(outage_probability(&cfg, x, Protocol::Af)?.into());
        }
        t.row(cells);
    }
    Ok(t.into_string())
}

fn fig3(a: &FigureArgs) -> Result<String> {
    let cfgs = SHAPES.map(|(m, n)| iid(m, n, 1.0));
    let mut t = Table::new(&header(
        a,
        &[
            "af, i.i.d. rayleigh, alpha = 1",
            "x: logspace 1e-4..10, 51 points",
            "p_mc at rate ln 2 nats and snr 1/x",
            &mc_lines(a),
        ],
    ));
    let mut cols = vec!["x".to_string()];
    for p in ["p_exact", "p_approx", "p_mc"] {
        cols.extend(names(p, &SHAPES));
    }
    t.columns(&cols);
    let xs = Grid::logspace(1e-4, 10.0, 51);
    let mut k = 0;
    for &x in &xs {
        let mut exact = Vec::new();
        let mut approx = Vec::new();
        let mut mc = Vec::new();
        for (cfg, (m, n)) in cfgs.iter().zip(SHAPES) {
            let cfg = cfg.as_ref().map_err(Clone::clone)?;
            exact.push(outage_probability(cfg, x, Protocol::Af)?);
            approx.push(lowout_iid(1.0, m, n)?.eval(x));
            let opts = McOptions::new(a.trials, point_seed(a.seed, k));
            k += 1;
            mc.push(estimate_outage_single(cfg, LN_2, 1.0 / x, McProtocol::Af, opts)?.p_hat);
        }
        let mut cells: Vec<Cell> = vec![x.into()];
        cells.extend(exact.into_iter().chain(approx).chain(mc).map(Cell::from));
        t.row(cells);
    }
    Ok(t.into_string())
}

fn fig4(a: &FigureArgs) -> Result<String> {
    let x = 1e-2;
    let base = iid(1, 1, 0.0)?;
    let p11 = outage_probability(&base, x, Protocol::Af)?;
    let mut t = Table::new(&header(
        a,
        &["af, alpha = 0, x = 0.01", "2x1 with correlation rho on the source-relay link", "rho: 0..0.99 step 0.01"],
    ));
    t.columns(&["rho", "p_exact_2x1", "p_approx_2x1", "p_exact_1x1"]);
    for rho in Grid::linspace(0.0, 0.99, 100) {
        let cfg = iid(2, 1, 0.0)?.with_correlation(
            CorrelationMatrix::two_antenna(rho.into())?,
            CorrelationMatrix::identity(1)?,
        )?;
        t.row(vec![
            rho.into(),
            outage_probability(&cfg, x, Protocol::Af)?.into(),
            lowout_config(&cfg)?.eval(x).into(),
            p11.into(),
        ]);
    }
    Ok(t.into_string())
}

fn fig5(a: &FigureArgs) -> Result<String> {
    let mut t = Table::new(&header(
        a,
        &[
            "af, i.i.d. rayleigh, alpha = 1, r = 0 (rate ln 2 nats, x = 1/snr)",
            "snr_db: 0..40 step 2",
            &mc_lines(a),
        ],
    ));
    let mut cols = vec!["snr_db".to_string()];
    cols.extend(names("p_exact", &SHAPES));
    cols.extend(names("p_mc", &SHAPES));
    t.columns(&cols);
    let mut k = 0;
    for db in Grid::linspace(0.0, 40.0, 21) {
        let gamma = db_to_linear(db);
        let mut exact = Vec::new();
        let mut mc = Vec::new();
        for (m, n) in SHAPES {
            let cfg = iid(m, n, 1.0)?;
            exact.push(outage_probability(&cfg, 1.0 / gamma, Protocol::Af)?);
            let opts = McOptions::new(a.trials, point_seed(a.seed, k));
            k += 1;
            mc.push(estimate_outage_single(&cfg, LN_2, gamma, McProtocol::Af, opts)?.p_hat);
        }
        let mut cells: Vec<Cell> = vec![db.into()];
        cells.extend(exact.into_iter().chain(mc).map(Cell::from));
        t.row(cells);
    }
    Ok(t.into_string())
}

fn fig6(a: &FigureArgs) -> Result<String> {
    let eps = 0.05;
    let shapes = [(1, 1), (2, 1)];
    let mut x_exact = Vec::new();
    let mut x_approx = Vec::new();
    let mut x_mc = Vec::new();
    for (k, (m, n)) in shapes.into_iter().enumerate() {
        let cfg = iid(m, n, 0.0)?;
        x_exact.push(snr_loss(eps, &cfg, Protocol::Af)?);
        x_approx.push(snr_loss_approx(eps, &cfg)?.x_eps);
        let set = RelaySet::new(vec![cfg], None)?;
        let opts = McOptions::new(a.trials, point_seed(a.seed, k));
        x_mc.push(snr_loss_mc(&set, eps, McProtocol::Af, opts)?);
    }
    let fmt_x = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ");
    let mut t = Table::new(&header(
        a,
        &[
            "af, i.i.d. rayleigh, alpha = 0, eps = 0.05; capacities in nats/s/Hz",
            "snr_db: -10..40 step 2",
            "c_mc uses the empirical eps-quantile of the normalized end-to-end snr",
            &format!("x_eps exact (1x1, 2x1): {}", fmt_x(&x_exact)),
            &mc_lines(a),
        ],
    ));
    let mut cols = vec!["snr_db".to_string(), "c_awgn".to_string()];
    for p in ["c_exact", "c_approx", "c_mc", "norm_exact", "norm_approx", "norm_mc"] {
        cols.extend(names(p, &shapes));
    }
    t.columns(&cols);
    for db in Grid::linspace(-10.0, 40.0, 26) {
        let gamma = db_to_linear(db);
        let awgn = gamma.ln_1p();
        let cap = |x: f64| (gamma * x).ln_1p();
        let exact: Vec<f64> = x_exact.iter().map(|&x| cap(x)).collect();
        let approx: Vec<f64> = x_approx.iter().map(|x| x.map_or(f64::NAN, cap)).collect();
        let mc: Vec<f64> = x_mc.iter().map(|&x| cap(x)).collect();
        let mut cells: Vec<Cell> = vec![db.into(), awgn.into()];
        for v in [&exact, &approx, &mc] {
            cells.extend(v.iter().map(|&c| Cell::from(c)));
        }
        for v in [&exact, &approx, &mc] {
            cells.extend(v.iter().map(|&c| Cell::from(c / awgn)));
        }
        t.row(cells);
    }
    Ok(t.into_string())
}
