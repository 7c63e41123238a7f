use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_relay-outage"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

struct Csv {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut lines = text.lines().filter(|l| !l.starts_with('#'));
        let columns = lines.next().expect("column line").split(',').map(String::from).collect();
        let rows = lines
            .map(|l| {
                l.split(',')
                    .map(|c| match c {
                        "true" => 1.0,
                        "false" => 0.0,
                        c => c.parse().unwrap(),
                    })
                    .collect()
            })
            .collect();
        Csv { columns, rows }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let i = self.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i]).collect()
    }
}

fn ok(args: &[&str]) -> Csv {
    let r = run(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    Csv::parse(&r.stdout)
}

#[test]
fn outage_on_single_antenna_link_with_correlation_is_rejected() {
    let r = run(&["outage", "--m", "2", "--n", "1", "--alpha", "0", "--rho-rd", "0.5", "--x", "0.01"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("rho_rd"), "{}", r.stderr);
}

#[test]
fn correlated_two_by_one() {
    let t = ok(&["outage", "--m", "2", "--n", "1", "--alpha", "0", "--rho-sr", "0.5", "--x", "0.01"]);
    assert_eq!(t.rows.len(), 1);
    let p = t.col("p")[0];
    let approx = t.col("p_approx")[0];
    assert!((approx - 0.0110).abs() < 5e-5, "{approx}");
    assert!((p / 0.0110 - 1.0).abs() < 0.04, "{p}");
}

#[test]
fn mc_example() {
    let t = ok(&[
        "mc", "--m", "1", "--n", "1", "--alpha", "0", "--rate-bits", "1", "--snr-db", "20", "--trials", "1000000",
        "--seed", "42",
    ]);
    let p = t.col("p_mc")[0];
    let se = t.col("stderr")[0];
    assert!((p - 0.0448).abs() <= 4.0 * se, "{p} ± {se}");
    assert!((t.col("p_analytic")[0] - 0.0448).abs() < 1e-4);
    assert_eq!(t.col("trials")[0], 1e6);
}

#[test]
fn rate_and_snr_match_threshold() {
    let a = ok(&["outage", "--m", "2", "--n", "2", "--alpha", "1", "--rate-bits", "1", "--snr-db", "20"]);
    let b = ok(&["outage", "--m", "2", "--n", "2", "--alpha", "1", "--x", "0.01"]);
    assert!((a.col("x")[0] - 0.01).abs() < 1e-15);
    assert!((a.col("p")[0] / b.col("p")[0] - 1.0).abs() < 1e-12);
}

#[test]
fn grids_expand() {
    let t = ok(&["outage", "--m", "1", "--n", "2", "--x", "1e-3:1:4:log"]);
    assert_eq!(t.col("x"), vec![1e-3, 1e-2, 1e-1, 1.0]);
    let p = t.col("p");
    assert!(p.windows(2).all(|w| w[0] < w[1]));
    let t = ok(&["mc", "--m", "1", "--n", "1", "--rate-bits", "0.5,1", "--snr-db", "-10:10:3", "--trials", "1000"]);
    assert_eq!(t.rows.len(), 6);
}

#[test]
fn header_echoes_configuration() {
    let r = run(&["outage", "--m", "2", "--n", "3", "--alpha", "0.5", "--fading-rd", "nakagami:2", "--x", "0.1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("# relay-outage "));
    assert!(r.stdout.contains("m=2 n=3 alpha=0.5"));
    assert!(r.stdout.contains("fading_rd=nakagami:2"));
    assert!(r.stdout.contains("# x: 0.1\n"));
    let t = Csv::parse(&r.stdout);
    assert!(t.col("p_approx")[0].is_nan());
}

#[test]
fn scenario_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.toml");
    std::fs::write(&path, "m = 2\nn = 2\nalpha = 1.0\nrho_sr = 0.5\n").unwrap();
    let p = path.to_str().unwrap();
    let a = ok(&["outage", "--corr-file", p, "--x", "0.01"]);
    let b = ok(&["outage", "--m", "2", "--n", "2", "--alpha", "1", "--rho-sr", "0.5", "--x", "0.01"]);
    assert_eq!(a.col("p"), b.col("p"));
    let c = ok(&["outage", "--corr-file", p, "--alpha", "0", "--x", "0.01"]);
    assert!(c.col("p")[0] < a.col("p")[0]);
    std::fs::write(&path, "m = 2\nn = 2\nbogus = 1\n").unwrap();
    assert_eq!(run(&["outage", "--corr-file", p, "--x", "0.01"]).code, 2);
}

#[test]
fn capacity_inverts_outage() {
    let t = ok(&["capacity", "--m", "2", "--n", "1", "--eps", "0.01,0.1", "--snr-db", "0,20"]);
    assert_eq!(t.rows.len(), 4);
    let x = t.col("x_eps");
    let p = ok(&["outage", "--m", "2", "--n", "1", "--x", &format!("{:.17e}", x[0])]).col("p")[0];
    assert!((p / 0.01 - 1.0).abs() < 1e-9, "{p}");
    let c = t.col("c_exact");
    let awgn = t.col("c_awgn");
    assert!(c.iter().zip(&awgn).all(|(c, a)| c < a));
    assert!(t.col("x_eps_approx").iter().all(|v| v.is_finite()));
}

#[test]
fn dmt_columns() {
    let t = ok(&["dmt", "--m", "2", "--n", "1", "--alpha", "1", "--snr-db", "40", "--r", "0,0.5"]);
    let d = t.col("d");
    assert!((d[0] - 1.0).abs() < 0.1, "{d:?}");
    assert_eq!(t.col("d_asymptotic"), vec![1.0, 0.5]);
    assert_eq!(t.col("saturated"), vec![0.0, 0.0]);
}

#[test]
fn selection_multiplies() {
    let t = ok(&["selection", "--m", "1", "--n", "2", "--relays", "3", "--direct-p", "0.5", "--x", "0.001"]);
    let p1 = t.col("p_relay_1")[0];
    assert_eq!(t.col("p_relay_3")[0], p1);
    let sel = t.col("p_selection")[0];
    assert!((sel / (0.5 * p1.powi(3)) - 1.0).abs() < 1e-10);
    assert!((t.col("p_lowout")[0] / sel - 1.0).abs() < 0.05);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["outage", "--m", "1", "--n", "1", "--x", "1:2"]).code, 2);
    assert_eq!(run(&["outage", "--m", "1", "--n", "1", "--x", "0.1", "--protocol", "xf"]).code, 2);
    assert_eq!(run(&["outage", "--n", "1", "--x", "0.1"]).code, 2);
    assert_eq!(run(&["outage", "--m", "1", "--n", "1"]).code, 2);
    assert_eq!(run(&["outage", "--m", "1", "--n", "1", "--x", "-0.1"]).code, 2);
    assert_eq!(run(&["capacity", "--m", "1", "--n", "1", "--eps", "1.5", "--snr-db", "0"]).code, 2);
    assert_eq!(run(&["dmt", "--m", "1", "--n", "1", "--snr-db", "10", "--r", "2"]).code, 2);
    assert_eq!(run(&["mc", "--m", "1", "--n", "1", "--rate-bits", "1", "--snr-db", "0", "--trials", "0"]).code, 2);
    assert_eq!(run(&["outage", "--m", "1", "--n", "1", "--fading-sr", "lognormal", "--x", "0.1"]).code, 2);
    assert_eq!(run(&["figure", "fig9"]).code, 2);
    assert_eq!(run(&["outage", "--m", "1", "--n", "1", "--x", "0.1"]).code, 0);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["mc", "--m", "2", "--n", "1", "--rate-bits", "1", "--snr-db", "0:10:3", "--trials", "50000", "--seed", "9"],
        vec!["mc", "--m", "1", "--n", "1", "--relays", "2", "--selection", "--protocol", "df", "--rate-bits", "1",
            "--snr-db", "5", "--trials", "30000"],
        vec!["figure", "fig6", "--trials", "20000"],
        vec!["figure", "fig2"],
    ] {
        let mut texts = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("run{k}.csv"));
            let mut full = args.clone();
            full.extend(["--out", path.to_str().unwrap()]);
            let r = run(&full);
            assert_eq!(r.code, 0, "{}", r.stderr);
            assert!(r.stdout.is_empty());
            texts.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(texts[0], texts[1], "{args:?}");
    }
}

#[test]
fn figure3_series() {
    let t = ok(&["figure", "fig3", "--trials", "20000"]);
    assert_eq!(
        t.columns.join(","),
        "x,p_exact_1x1,p_exact_2x1,p_exact_1x2,p_approx_1x1,p_approx_2x1,p_approx_1x2,p_mc_1x1,p_mc_2x1,p_mc_1x2"
    );
    let x = t.col("x");
    assert_eq!(x.len(), 51);
    assert_eq!((x[0], x[50]), (1e-4, 10.0));
    for s in ["1x1", "2x1", "1x2"] {
        let exact = t.col(&format!("p_exact_{s}"));
        let approx = t.col(&format!("p_approx_{s}"));
        for i in 0..x.len() {
            if x[i] < 1e-2 {
                assert!((approx[i] / exact[i] - 1.0).abs() < 0.05, "{s} x={}", x[i]);
            }
        }
        let mc = t.col(&format!("p_mc_{s}"));
        let i = x.iter().position(|&v| v >= 0.1).unwrap();
        let se = (exact[i] * (1.0 - exact[i]) / 20000.0).sqrt();
        assert!((mc[i] - exact[i]).abs() <= 4.0 * se, "{s}");
    }
}

#[test]
fn figure_properties() {
    let t = ok(&["figure", "fig2"]);
    for c in ["p_x1e-1", "p_x1e-2", "p_x1e-3"] {
        assert!(t.col(c).windows(2).all(|w| w[0] <= w[1]), "{c}");
    }
    let t = ok(&["figure", "fig4"]);
    let p = t.col("p_exact_2x1");
    assert_eq!(p.len(), 100);
    assert!((1.05..=1.15).contains(&(p[50] / p[0])));
    let t = ok(&["figure", "fig6", "--trials", "200000"]);
    let (a, b) = (t.col("norm_exact_1x1")[0], t.col("norm_exact_2x1")[0]);
    assert!((3.5..=6.0).contains(&(b / a)), "{}", b / a);
    let mc = t.col("norm_mc_2x1")[0];
    assert!((mc / b - 1.0).abs() < 0.05);
}

#[test]
fn figure5_gap() {
    let t = ok(&["figure", "fig5", "--trials", "20000"]);
    let db = t.col("snr_db");
    assert_eq!(db.len(), 21);
    let last = db.len() - 1;
    assert_eq!(db[last], 40.0);
    let ratio = t.col("p_exact_1x1")[last] / t.col("p_exact_2x1")[last];
    assert!((7.0..=14.0).contains(&ratio), "{ratio}");
}
