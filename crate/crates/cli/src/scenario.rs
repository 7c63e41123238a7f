//! Scenario flags, optionally layered over a TOML scenario file.

use std::path::PathBuf;

use clap::Args;
use relay_outage::channel::{ChannelConfig, CorrelationMatrix};
use relay_outage::multirelay::RelaySet;
use relay_outage::scenario::{RhoSpec, ScenarioFile};
use relay_outage::Result;

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Source antennas
    #[arg(long)]
    pub m: Option<usize>,
    /// Destination antennas
    #[arg(long)]
    pub n: Option<usize>,
    /// Relay noise ratio
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Exponential correlation on the source-relay link: re or re,im
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rho)]
    pub rho_sr: Option<RhoSpec>,
    /// Exponential correlation on the relay-destination link: re or re,im
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rho)]
    pub rho_rd: Option<RhoSpec>,
    /// TOML scenario file; flags override its top-level keys
    #[arg(long)]
    pub corr_file: Option<PathBuf>,
    /// rayleigh, rician:K, nakagami:m or weibull:shape
    #[arg(long)]
    pub fading_sr: Option<String>,
    #[arg(long)]
    pub fading_rd: Option<String>,
    /// Source transmits without channel knowledge
    #[arg(long)]
    pub no_csi: bool,
    /// Identical relays for selection relaying
    #[arg(long)]
    pub relays: Option<usize>,
    /// Outage probability of the direct link
    #[arg(long)]
    pub direct_p: Option<f64>,
}

fn parse_rho(s: &str) -> std::result::Result<RhoSpec, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("'{p}' is not a number")))
        .collect::<std::result::Result<_, _>>()?;
    match parts[..] {
        [re] => Ok(RhoSpec::Real(re)),
        [re, im] => Ok(RhoSpec::Complex([re, im])),
        _ => Err("expected re or re,im".into()),
    }
}

impl ScenarioArgs {
    pub fn file(&self) -> Result<ScenarioFile> {
        let mut f = match &self.corr_file {
            Some(path) => ScenarioFile::load(path)?,
            None => ScenarioFile::default(),
        };
        f.m = self.m.or(f.m);
        f.n = self.n.or(f.n);
        f.alpha = self.alpha.or(f.alpha);
        if self.no_csi {
            f.csi_at_source = Some(false);
        }
        if self.rho_sr.is_some() {
            f.rho_sr = self.rho_sr;
            f.corr_sr = None;
        }
        if self.rho_rd.is_some() {
            f.rho_rd = self.rho_rd;
            f.corr_rd = None;
        }
        if self.fading_sr.is_some() {
            f.fading_sr = self.fading_sr.clone();
        }
        if self.fading_rd.is_some() {
            f.fading_rd = self.fading_rd.clone();
        }
        f.relays = self.relays.or(f.relays);
        f.direct_p = self.direct_p.or(f.direct_p);
        Ok(f)
    }

    pub fn relay_set(&self) -> Result<RelaySet> {
        self.file()?.relay_set()
    }

}

fn matrix(c: &CorrelationMatrix) -> String {
    let e = c.entries();
    let rows: Vec<String> = (0..e.nrows())
        .map(|i| {
            let cells: Vec<String> = (0..e.ncols())
                .map(|j| {
                    let z = e[(i, j)];
                    if z.im == 0.0 {
                        format!("{}", z.re)
                    } else {
                        format!("{}{:+}i", z.re, z.im)
                    }
                })
                .collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn describe_link(cfg: &ChannelConfig) -> String {
    format!(
        "m={} n={} alpha={} csi_at_source={} fading_sr={} fading_rd={} corr_sr={} corr_rd={}",
        cfg.m,
        cfg.n,
        cfg.alpha,
        cfg.csi_at_source,
        cfg.fading_sr,
        cfg.fading_rd,
        matrix(&cfg.corr_sr),
        matrix(&cfg.corr_rd)
    )
}

pub fn describe(set: &RelaySet) -> Vec<String> {
    let mut lines = vec![format!("relays: {}", set.len())];
    for (i, l) in set.links().iter().enumerate() {
        lines.push(format!("relay {}: {}", i + 1, describe_link(l)));
    }
    lines.push(match set.direct_link_outage() {
        Some(p) => format!("direct link outage: {p}"),
        None => "direct link: none".into(),
    });
    lines
}
