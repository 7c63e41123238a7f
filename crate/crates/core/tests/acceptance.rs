use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relay_outage::capacity::{invert_outage, outage_capacity, snr_loss};
use relay_outage::channel::{ChannelConfig, CorrelationMatrix, Eigenspectrum, FadingModel, PowerGain};
use relay_outage::dmt::finite_snr_dmt;
use relay_outage::mcsim::{diversity_slope, estimate_outage, estimate_outage_single, McOptions, McProtocol};
use relay_outage::multirelay::{selection_lowout, RelaySet};
use relay_outage::outage::{
    lowout_iid, outage_af_correlated, outage_af_iid, outage_af_iid_accurate, outage_af_quadrature,
    outage_probability, explicit_table, series_table_noiseless, Protocol, SERIES_MAX_ORDER,
};

type Outcome = Result<String, String>;

fn iid(m: usize, n: usize, alpha: f64) -> ChannelConfig {
    ChannelConfig::iid(m, n, alpha).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_budget(start: Instant, budget: Duration, detail: String, ok: bool) -> Outcome {
    let t = start.elapsed();
    let detail = format!("{detail}; {:.2} s (budget {} s)", t.as_secs_f64(), budget.as_secs());
    check(ok && t < budget, detail)
}

const GRID_X: [f64; 3] = [1e-1, 1e-2, 1e-3];
const GRID_ALPHA: [f64; 3] = [0.0, 0.01, 1.0];

fn oracle_tolerance(a: f64, b: f64) -> bool {
    (a - b).abs() <= f64::max(1e-8, 1e-6 * b.abs())
}

fn random_spectrum(rng: &mut ChaCha8Rng, dim: usize) -> Eigenspectrum<f64> {
    loop {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(0.1..2.5)).collect();
        let s: f64 = v.iter().sum();
        v.iter_mut().for_each(|e| *e *= dim as f64 / s);
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if v.windows(2).all(|w| w[0] - w[1] > 0.1 * w[0]) {
            return Eigenspectrum::new(v).unwrap();
        }
    }
}

fn closed_forms_vs_quadrature() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    let mut count = 0;
    for m in 1..=3 {
        for n in 1..=3 {
            let (s, d) = iid(m, n, 0.0).link_distributions().unwrap();
            for alpha in GRID_ALPHA {
                for x in GRID_X {
                    let a = outage_af_iid(x, alpha, m, n).unwrap();
                    let q = outage_af_quadrature(x, alpha, &s, &d).unwrap();
                    worst = worst.max((a - q).abs() / f64::max(1e-8, 1e-6 * q) * 1e-6);
                    count += 1;
                    if !oracle_tolerance(a, q) {
                        bad.push(format!("{m}x{n} a={alpha} x={x}: {a:e} vs {q:e}"));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10 {
        let (m, n) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let sr = random_spectrum(&mut rng, m);
        let rd = random_spectrum(&mut rng, n);
        let s = PowerGain::correlated(&sr).unwrap();
        let d = PowerGain::correlated(&rd).unwrap();
        for alpha in GRID_ALPHA {
            for x in GRID_X {
                let a = outage_af_correlated(x, alpha, &sr, &rd).unwrap();
                let q = outage_af_quadrature(x, alpha, &s, &d).unwrap();
                worst = worst.max((a - q).abs() / f64::max(1e-8, 1e-6 * q) * 1e-6);
                count += 1;
                if !oracle_tolerance(a, q) {
                    bad.push(format!("{:?}/{:?} a={alpha} x={x}: {a:e} vs {q:e}", sr.values(), rd.values()));
                }
            }
        }
    }
    within_budget(
        start,
        Duration::from_secs(5),
        format!("{count} points, worst error {worst:.2e} of tolerance scale, {} failures {bad:?}", bad.len()),
        bad.is_empty(),
    )
}

fn monte_carlo_agreement() -> Outcome {
    let start = Instant::now();
    let gamma = 10.0;
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    let mut count = 0;
    let mut seed = 100;
    for m in 1..=2 {
        for n in 1..=2 {
            for alpha in [0.0, 1.0] {
                for x in [0.1, 0.01] {
                    let cfg = iid(m, n, alpha);
                    let p = outage_probability(&cfg, x, Protocol::Af).unwrap();
                    if p < 1e-4 {
                        continue;
                    }
                    seed += 1;
                    let rate = (gamma * x).ln_1p();
                    let e = estimate_outage_single(&cfg, rate, gamma, McProtocol::Af, McOptions::new(1_000_000, seed))
                        .unwrap();
                    let z = (e.p_hat - p).abs() / e.stderr;
                    worst = worst.max(z);
                    count += 1;
                    if z > 4.0 {
                        bad.push(format!("{m}x{n} a={alpha} x={x}: {} vs {p}", e.p_hat));
                    }
                }
            }
        }
    }
    within_budget(
        start,
        Duration::from_secs(60),
        format!("{count} points, worst |z| = {worst:.2} {bad:?}"),
        bad.is_empty(),
    )
}

fn series_equivalence() -> Outcome {
    let mut worst_abs = 0.0f64;
    let mut worst_rel = 0.0f64;
    let mut bad = Vec::new();
    for m in 1..=3 {
        for n in 1..=3 {
            for alpha in GRID_ALPHA {
                let table = explicit_table::<f64>(alpha, m, n, SERIES_MAX_ORDER).unwrap();
                let noiseless = series_table_noiseless::<f64>(m, n, SERIES_MAX_ORDER).unwrap();
                for x in GRID_X {
                    let e = outage_af_iid(x, alpha, m, n).unwrap();
                    let mut values = vec![table.eval(x)];
                    if alpha == 0.0 {
                        values.push(noiseless.eval(x));
                    }
                    for (s, _, converged) in values {
                        let err = (s - e).abs();
                        worst_abs = worst_abs.max(err);
                        worst_rel = worst_rel.max(err / e);
                        if !converged || err > 1e-10 {
                            bad.push(format!("{m}x{n} a={alpha} x={x}: {s:e} vs {e:e}"));
                        }
                    }
                }
            }
        }
    }
    check(
        bad.is_empty(),
        format!("worst |diff| {worst_abs:.2e} (relative {worst_rel:.2e}) {bad:?}"),
    )
}

fn symmetry() -> Outcome {
    let mut worst = 0.0f64;
    for m in 1..=4 {
        for n in 1..=4 {
            for x in [1e-4, 1e-3, 1e-2, 0.1, 1.0, 5.0] {
                let a: f64 = outage_af_iid(x, 0.0, m, n).unwrap();
                let b = outage_af_iid(x, 0.0, n, m).unwrap();
                worst = worst.max((a - b).abs());
            }
        }
    }
    check(worst <= 1e-12, format!("worst |P(m,n) - P(n,m)| = {worst:.2e}"))
}

fn low_outage_convergence() -> Outcome {
    let x = 1e-5;
    let mut parts = Vec::new();
    let mut ok = true;
    for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        for alpha in [0.0, 1.0] {
            let exact = outage_af_iid_accurate(x, alpha, m, n).unwrap();
            let ratio = lowout_iid(alpha, m, n).unwrap().eval(x) / exact;
            ok &= (0.95..=1.05).contains(&ratio);
            parts.push(format!("{m}x{n}/a={alpha}: {ratio:.4}"));
        }
    }
    check(ok, parts.join(", "))
}

fn fig5_gap() -> Outcome {
    let gamma = 1e4;
    let a = finite_snr_dmt(gamma, 0.0, &iid(1, 1, 1.0), Protocol::Af).unwrap();
    let b = finite_snr_dmt(gamma, 0.0, &iid(2, 1, 1.0), Protocol::Af).unwrap();
    // P = γ^{-d}
    let ratio = gamma.powf(b.d - a.d);
    check((7.0..=14.0).contains(&ratio), format!("P(1x1)/P(2x1) = {ratio:.3}"))
}

fn correlated_2x2(alpha: f64) -> ChannelConfig {
    let r = CorrelationMatrix::two_antenna(Complex64::new(0.5, 0.0)).unwrap();
    iid(2, 2, alpha).with_correlation(r.clone(), r).unwrap()
}

fn fig2_relay_noise() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for x in GRID_X {
        let p0 = outage_probability(&correlated_2x2(0.0), x, Protocol::Af).unwrap();
        let p1 = outage_probability(&correlated_2x2(0.1), x, Protocol::Af).unwrap();
        ok &= p1 / p0 < 1.1;
        parts.push(format!("x={x}: {:.4}", p1 / p0));
        let mut prev = 0.0;
        for k in 0..=50 {
            let alpha = 10f64.powf(-3.0 + 5.0 * k as f64 / 50.0);
            let p = outage_probability(&correlated_2x2(alpha), x, Protocol::Af).unwrap();
            if p < prev {
                ok = false;
                parts.push(format!("decrease at alpha={alpha}"));
            }
            prev = p;
        }
    }
    check(ok, format!("P(0.1)/P(0) {}; nondecreasing in alpha", parts.join(", ")))
}

fn two_by_one(rho: f64) -> ChannelConfig {
    let cfg = iid(2, 1, 0.0);
    if rho == 0.0 {
        return cfg;
    }
    let r = CorrelationMatrix::two_antenna(Complex64::new(rho, 0.0)).unwrap();
    cfg.with_correlation(r, CorrelationMatrix::identity(1).unwrap()).unwrap()
}

fn fig4_correlation() -> Outcome {
    let x = 1e-2;
    let mut worst = 0.0f64;
    for k in 10..=90 {
        let rho = k as f64 / 100.0;
        let exact = outage_probability(&two_by_one(rho), x, Protocol::Af).unwrap();
        let approx = x / (2.0 * rho) * ((1.0 + rho) / (1.0 - rho)).ln();
        worst = worst.max((approx / exact - 1.0).abs());
    }
    let ratio = outage_probability(&two_by_one(0.5), x, Protocol::Af).unwrap()
        / outage_probability(&two_by_one(0.0), x, Protocol::Af).unwrap();
    check(
        worst <= 0.1 && (1.05..=1.15).contains(&ratio),
        format!("worst approximation error {:.2}%, P(0.5)/P(0) = {ratio:.4}", 100.0 * worst),
    )
}

fn dmt_slopes() -> Outcome {
    let start = Instant::now();
    let rayleigh = |m, n| RelaySet::new(vec![iid(m, n, 0.0)], None).unwrap();
    let one_by_one = |f: FadingModel| RelaySet::new(vec![iid(1, 1, 0.0).with_fading(f, f).unwrap()], None).unwrap();
    let cases: [(&str, RelaySet, McProtocol, Vec<f64>, u64, f64); 4] = [
        ("rayleigh 2x3 af", rayleigh(2, 3), McProtocol::Af, vec![10.0, 12.0, 14.0, 16.0, 18.0], 4_000_000, 2.0),
        (
            "nakagami(2) 1x1 af",
            one_by_one(FadingModel::Nakagami { m: 2.0 }),
            McProtocol::Af,
            vec![24.0, 28.0, 32.0, 36.0],
            40_000_000,
            2.0,
        ),
        (
            "rician(5) 1x1 af",
            one_by_one(FadingModel::Rician { k_factor: 5.0 }),
            McProtocol::Af,
            vec![20.0, 24.0, 28.0, 32.0],
            4_000_000,
            1.0,
        ),
        ("rayleigh 2x2 df", rayleigh(2, 2), McProtocol::Df, vec![10.0, 12.0, 14.0, 16.0, 18.0, 20.0], 4_000_000, 2.0),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (i, (name, set, protocol, grid, trials, want)) in cases.into_iter().enumerate() {
        let target = set.asymptotic_dmt(0.0).unwrap();
        assert_eq!(target, want);
        match diversity_slope(&set, protocol, 0.0, &grid, trials, 900 + i as u64) {
            Ok(fit) => {
                ok &= (fit.slope - target).abs() <= 0.3;
                parts.push(format!("{name}: {:.3} (target {target})", fit.slope));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    within_budget(start, Duration::from_secs(600), parts.join(", "), ok)
}

fn selection_relaying() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let mut seed = 300;
    for (m, n, alpha, x) in [(1, 2, 1.0, 0.3), (2, 1, 0.0, 0.2), (1, 1, 0.5, 0.05)] {
        for relays in [2, 3] {
            let set = RelaySet::identical(iid(m, n, alpha), relays, None).unwrap();
            let p = set.outage(x, Protocol::Af).unwrap();
            seed += 1;
            let e = estimate_outage(&set, x.ln_1p(), 1.0, McProtocol::AfSelection, McOptions::new(1_000_000, seed))
                .unwrap();
            let z = (e.p_hat - p).abs() / e.stderr;
            ok &= z <= 4.0;
            parts.push(format!("{m}x{n}/N={relays}: z={z:.2}"));
        }
    }
    for relays in [2, 3] {
        let set = RelaySet::identical(iid(2, 1, 0.0), relays, None).unwrap();
        let exact = set.outage(1e-3, Protocol::Af).unwrap();
        let approx = selection_lowout(0.0, 2, 1, relays).unwrap().eval(1e-3);
        let ratio = approx / exact;
        ok &= (ratio - 1.0).abs() <= 0.1;
        parts.push(format!("power law N={relays}: ratio {ratio:.4}"));
    }
    check(ok, parts.join(", "))
}

fn outage_capacity_checks() -> Outcome {
    let mut worst_p = 0.0f64;
    let mut worst_x = 0.0f64;
    for (m, n, alpha) in [(1, 1, 0.0), (2, 1, 0.0), (1, 2, 1.0), (2, 2, 0.5), (3, 2, 1.0)] {
        let cfg = iid(m, n, alpha);
        for k in 0..=20 {
            let eps = 10f64.powf(-6.0 + k as f64 * (6.0 + 0.5f64.log10()) / 20.0);
            let x = snr_loss(eps, &cfg, Protocol::Af).unwrap();
            let p = outage_probability(&cfg, x, Protocol::Af).unwrap();
            worst_p = worst_p.max((p - eps).abs() / eps);
            let x2 = invert_outage(p, |t| outage_probability(&cfg, t, Protocol::Af)).unwrap();
            worst_x = worst_x.max((x2 / x - 1.0).abs());
        }
    }
    let gamma = 0.1;
    let c1 = outage_capacity(0.05, gamma, &iid(1, 1, 0.0), Protocol::Af).unwrap();
    let c2 = outage_capacity(0.05, gamma, &iid(2, 1, 0.0), Protocol::Af).unwrap();
    let ratio = c2.exact / c1.exact;
    check(
        worst_p <= 1e-9 && worst_x <= 1e-9 && (3.5..=6.0).contains(&ratio),
        format!(
            "roundtrip worst |P - eps|/eps {worst_p:.1e}, |dx|/x {worst_x:.1e}; C(2x1)/C(1x1) at -10 dB = {ratio:.3}"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("closed forms agree with quadrature", closed_forms_vs_quadrature),
        ("Monte-Carlo agrees with the analytic outage", monte_carlo_agreement),
        ("series tables reproduce the closed form", series_equivalence),
        ("noiseless outage is symmetric in m and n", symmetry),
        ("low-outage expansions converge", low_outage_convergence),
        ("1x1 over 2x1 outage gap at 40 dB", fig5_gap),
        ("relay noise below one is negligible", fig2_relay_noise),
        ("2x1 correlation approximation", fig4_correlation),
        ("empirical diversity slopes", dmt_slopes),
        ("selection relaying", selection_relaying),
        ("outage capacity", outage_capacity_checks),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail}", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
