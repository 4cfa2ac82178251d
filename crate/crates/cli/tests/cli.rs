use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lattice_dsp::io::{self, EdgePolicy};
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn latdsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latdsp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = latdsp(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    latdsp(args).status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Value column of an `element,value` CSV.
fn column(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect()
}

#[test]
fn validate_reports_structure() {
    let out = ok(&["validate", p(&fixture("semilattice8.lat"))]);
    assert!(out.starts_with("meet-semilattice; 8 elements\n"));
    assert!(out.contains("meet generators: c,e,f,g,h\n"));
    assert!(out.contains("maximal: g,h\n"));

    let bad = latdsp(&["validate", p(&fixture("bowtie.lat"))]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("witness: (d,e)"));

    let dir = TempDir::new().unwrap();
    let one = dir.path().join("one.lat");
    fs::write(&one, "elem x\n").unwrap();
    assert!(ok(&["validate", p(&one)]).starts_with("lattice; 1 element\n"));
}

#[test]
fn validate_require_policy() {
    let l = fixture("semilattice8.lat");
    assert_eq!(code(&["validate", p(&l), "--require", "meet"]), 0);
    assert_eq!(code(&["validate", p(&l), "--require", "join"]), 2);
    assert_eq!(code(&["validate", p(&l), "--require", "lattice"]), 2);
    assert_eq!(code(&["validate", p(&fixture("cube3.lat")), "--require", "lattice"]), 0);
}

#[test]
fn usage_and_parse_errors_exit_one() {
    let l = fixture("semilattice8.lat");
    let s = fixture("semilattice8_signal.csv");
    assert_eq!(code(&["dlt", p(&l), p(&s)]), 1, "variant is required");
    assert_eq!(
        code(&["noise", p(&l), "--variant", "meet", "--sigma", "1"]),
        1,
        "seed is required"
    );
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["validate", "/nonexistent/file.lat"]), 1);

    let dir = TempDir::new().unwrap();
    let broken = dir.path().join("broken.lat");
    fs::write(&broken, "elem a\nedge a b\n").unwrap();
    let out = latdsp(&["validate", p(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn domain_errors_exit_two() {
    let l = fixture("semilattice8.lat");
    let s = fixture("semilattice8_signal.csv");
    assert_eq!(code(&["shift", p(&l), p(&s), "--variant", "meet", "--by", "zz"]), 2);
    assert_eq!(code(&["dlt", p(&l), p(&s), "--variant", "join"]), 2);
    let cube_signal = TempDir::new().unwrap();
    let other = cube_signal.path().join("s.csv");
    fs::write(&other, "element,value\na,1\n").unwrap();
    assert_eq!(code(&["dlt", p(&l), p(&other), "--variant", "meet"]), 2);
}

#[test]
fn transform_of_sparse_signal_has_four_nonzeros() {
    let l = fixture("semilattice8.lat");
    let s = fixture("semilattice8_signal.csv");
    let direct = ok(&["dlt", p(&l), p(&s), "--variant", "meet"]);
    assert_eq!(column(&direct).iter().filter(|v| **v != 0.0).count(), 4);
    assert_eq!(
        ok(&["dlt", p(&l), p(&s), "--variant", "meet", "--fast", "--check"]),
        direct
    );

    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("spec.csv");
    fs::write(&spec, &direct).unwrap();
    let back = ok(&["idlt", p(&l), p(&spec), "--variant", "meet", "--fast"]);
    assert_eq!(back, fs::read_to_string(&s).unwrap());
}

#[test]
fn lowpass_response_matches_up_set_sums() {
    let path = fixture("semilattice8.lat");
    let lattice = io::read_lattice(&path, EdgePolicy::Strict).unwrap();
    let h = column(&fs::read_to_string(fixture("semilattice8_lowpass.csv")).unwrap());
    let oracle: Vec<f64> = (0..lattice.len())
        .map(|y| (0..lattice.len()).filter(|&x| lattice.leq(y, x)).map(|x| h[x]).sum())
        .collect();
    let out = ok(&[
        "freqresp",
        p(&path),
        p(&fixture("semilattice8_lowpass.csv")),
        "--variant",
        "meet",
    ]);
    assert_eq!(column(&out), oracle);
    assert_eq!(column(&out), [6.0, 4.0, 4.0, 4.0, 3.0, 3.0, 2.0, 2.0]);

    let dir = TempDir::new().unwrap();
    let resp = dir.path().join("resp.csv");
    fs::write(&resp, &out).unwrap();
    let coeffs = ok(&["filter", p(&path), "--variant", "meet", "--response", p(&resp)]);
    assert_eq!(column(&coeffs), h);
    assert_eq!(ok(&["filter", p(&path), "--variant", "meet", "--lowpass"]), coeffs);
}

#[test]
fn sampling_pipeline_reconstructs_exactly() {
    let l = fixture("semilattice8.lat");
    let s = fixture("semilattice8_signal.csv");
    let dir = TempDir::new().unwrap();
    let supp = dir.path().join("support.txt");
    let samples = dir.path().join("samples.csv");
    ok(&["support", p(&l), p(&s), "--variant", "meet", "-o", p(&supp)]);
    assert_eq!(fs::read_to_string(&supp).unwrap(), "a\nb\nd\ne\n");
    ok(&[
        "sample",
        p(&l),
        p(&s),
        "--variant",
        "meet",
        "--support",
        p(&supp),
        "-o",
        p(&samples),
    ]);
    let rec = ok(&[
        "reconstruct",
        p(&l),
        p(&samples),
        "--variant",
        "meet",
        "--plan",
        p(&supp),
    ]);
    assert_eq!(rec, fs::read_to_string(&s).unwrap());
}

#[test]
fn shift_convolve_and_tv() {
    let l = fixture("semilattice8.lat");
    let s = fixture("semilattice8_signal.csv");
    // shifting by e reads s at x ∧ e
    let shifted = ok(&["shift", p(&l), p(&s), "--variant", "meet", "--by", "e"]);
    assert_eq!(column(&shifted), [2.0, 1.0, 2.0, 2.0, 5.0, 1.0, 2.0, 5.0]);

    let dir = TempDir::new().unwrap();
    let identity = dir.path().join("identity.csv");
    fs::write(&identity, ok(&["filter", p(&l), "--variant", "meet", "--trivial"])).unwrap();
    let out = ok(&["convolve", p(&l), p(&identity), p(&s), "--variant", "meet"]);
    assert_eq!(out, fs::read_to_string(&s).unwrap());

    // the lowest basis vector is constant
    let constant = dir.path().join("one.csv");
    fs::write(&constant, "element,value\na,1\nb,1\nc,1\nd,1\ne,1\nf,1\ng,1\nh,1\n").unwrap();
    let tv = ok(&["tv", p(&l), p(&constant), "--variant", "meet"]);
    assert!(tv.ends_with("stv,0\n"), "{tv}");
    let order = ok(&["tv", p(&l), "--variant", "meet"]);
    assert!(order.starts_with("frequency,stv\na,0\n"));
    assert!(order.ends_with("g,4\nh,4\n"));
}

#[test]
fn concept_lattice_of_telco_context() {
    let dir = TempDir::new().unwrap();
    let signal = dir.path().join("churn.csv");
    let out = latdsp(&[
        "fcl",
        p(&fixture("telco_context.csv")),
        "--labels",
        p(&fixture("telco_churn.csv")),
        "--signal-out",
        p(&signal),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lattice = io::parse_lattice(&text, EdgePolicy::Strict).unwrap();
    assert_eq!(lattice.len(), 14);
    let values = io::parse_values::<f64>(&fs::read_to_string(&signal).unwrap(), &lattice).unwrap();
    let bottom = lattice.minimum().unwrap();
    assert!((values[bottom] - 4.0 / 7.0).abs() < 1e-15);
    assert!(String::from_utf8_lossy(&out.stderr).contains("14 concepts"));
}

#[test]
fn concept_lattice_of_degenerate_contexts() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, ",p\nu,0\n").unwrap();
    let text = ok(&["fcl", p(&empty)]);
    let lattice = io::parse_lattice(&text, EdgePolicy::Strict).unwrap();
    assert_eq!(lattice.len(), 2);

    let twins = dir.path().join("twins.csv");
    fs::write(&twins, ",p,q\nu,1,0\nv,1,0\nw,0,1\n").unwrap();
    let labels = dir.path().join("labels.csv");
    fs::write(&labels, "object,value\nu,1\nv,0\nw,1\n").unwrap();
    let plain = dir.path().join("plain.csv");
    let merged = dir.path().join("merged.csv");
    let a = ok(&["fcl", p(&twins), "--labels", p(&labels), "--signal-out", p(&plain)]);
    let b = ok(&[
        "fcl",
        p(&twins),
        "--clarify",
        "--labels",
        p(&labels),
        "--signal-out",
        p(&merged),
    ]);
    let strip = |s: &str| {
        s.lines()
            .map(|l| l.split('#').next().unwrap().trim_end().to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b), "clarification keeps the lattice");
    assert_eq!(fs::read_to_string(plain).unwrap(), fs::read_to_string(merged).unwrap());
}

#[test]
fn multiset_generation() {
    let text = ok(&["multiset", "gen", "--m", "6,14,9"]);
    assert_eq!(text.lines().filter(|l| l.starts_with("elem ")).count(), 1050);
    let lattice = io::parse_lattice(&text, EdgePolicy::Strict).unwrap();
    assert_eq!(lattice.len(), 1050);
    assert_eq!(lattice.id(lattice.minimum().unwrap()), "0.0.0");
    assert_eq!(lattice.id(lattice.maximum().unwrap()), "6.14.9");

    let a = ok(&[
        "multiset",
        "bidder",
        "--m",
        "2,3",
        "--type",
        "primary",
        "--variant",
        "meet",
        "--seed",
        "7",
    ]);
    let b = ok(&[
        "multiset",
        "bidder",
        "--m",
        "2,3",
        "--type",
        "primary",
        "--variant",
        "meet",
        "--seed",
        "7",
    ]);
    assert_eq!(a, b);
    assert_eq!(
        code(&[
            "multiset",
            "bidder",
            "--m",
            "2,3",
            "--type",
            "primary",
            "--variant",
            "meet"
        ]),
        1
    );
}

#[test]
fn noise_is_seeded_and_scales_with_sigma() {
    let l = fixture("semilattice8.lat");
    let zero = ok(&["noise", p(&l), "--variant", "meet", "--sigma", "0", "--seed", "3"]);
    assert!(zero.lines().skip(1).all(|line| line.ends_with(",0+0i")), "{zero}");
    let a = ok(&["noise", p(&l), "--variant", "meet", "--sigma", "1", "--seed", "3"]);
    let b = ok(&["noise", p(&l), "--variant", "meet", "--sigma", "1", "--seed", "3"]);
    let c = ok(&["noise", p(&l), "--variant", "meet", "--sigma", "1", "--seed", "4"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(
        code(&["noise", p(&l), "--variant", "meet", "--sigma", "-1", "--seed", "3"]),
        2
    );
}

#[test]
fn wiener_fit_and_apply() {
    let dir = TempDir::new().unwrap();
    let path = |name: &str| dir.path().join(name);
    ok(&["multiset", "gen", "--m", "3,4,2", "-o", p(&path("m.lat"))]);
    let bidder = |kind: &str, seed: &str, out: &str| {
        ok(&[
            "multiset",
            "bidder",
            "--m",
            "3,4,2",
            "--type",
            kind,
            "--variant",
            "join",
            "--seed",
            seed,
            "-o",
            out,
        ]);
    };
    bidder("secondary", "1", p(&path("ref.csv")));
    let noisy = |input: &Path, seed: &str, out: &Path| {
        ok(&[
            "noise",
            p(&path("m.lat")),
            "--variant",
            "join",
            "--snr",
            "12.5",
            "--signal",
            p(input),
            "--seed",
            seed,
            "-o",
            p(out),
        ]);
    };
    noisy(&path("ref.csv"), "2", &path("noisy.csv"));
    ok(&[
        "wiener",
        "fit",
        p(&path("m.lat")),
        "--variant",
        "join",
        "--order",
        "3",
        "--ref",
        p(&path("ref.csv")),
        "--noisy",
        p(&path("noisy.csv")),
        "-o",
        p(&path("model.json")),
    ]);
    let model: serde_json::Value = serde_json::from_str(&fs::read_to_string(path("model.json")).unwrap()).unwrap();
    assert_eq!(model["order"], 3);
    assert_eq!(model["coefficients"].as_array().unwrap().len(), 4);

    let out = ok(&[
        "wiener",
        "apply",
        p(&path("m.lat")),
        "--variant",
        "join",
        "--model",
        p(&path("model.json")),
        p(&path("noisy.csv")),
    ]);
    assert_eq!(out.lines().count(), 1 + 4 * 5 * 3);

    // order must stay below |L|
    let too_high = code(&[
        "wiener",
        "fit",
        p(&path("m.lat")),
        "--variant",
        "join",
        "--order",
        "60",
        "--ref",
        p(&path("ref.csv")),
        "--noisy",
        p(&path("noisy.csv")),
    ]);
    assert_eq!(too_high, 2);
}

#[test]
fn dot_export() {
    let l = fixture("semilattice8.lat");
    let dot = ok(&["export-dot", p(&l)]);
    assert!(dot.starts_with("digraph \"lattice\" {"));
    assert_eq!(dot.matches(" -> ").count(), 10);
    assert!(dot.contains("\"a\" -> \"b\";"));
    let dual = ok(&["export-dot", p(&l), "--dual"]);
    assert!(dual.contains("\"b\" -> \"a\";"));
    assert!(!dual.contains("\"a\" -> \"b\";"));

    let dir = TempDir::new().unwrap();
    let values = dir.path().join("v.csv");
    fs::write(&values, "element,value\na,2.50\nb,1\nc,2\nd,5\ne,5\nf,4\ng,5\nh,8e0\n").unwrap();
    let labelled = ok(&["export-dot", p(&l), "--values", p(&values)]);
    assert!(labelled.contains("2.50"));
    assert!(labelled.contains("8e0"));
    assert_eq!(labelled, ok(&["export-dot", p(&l), "--values", p(&values)]));
}

#[test]
fn reduce_flag_accepts_implied_edges() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("chain.lat");
    fs::write(&file, "elem a\nelem b\nelem c\ncover b a\ncover c b\ncover c a\n").unwrap();
    assert_eq!(code(&["validate", p(&file)]), 2);
    assert!(ok(&["--reduce", "validate", p(&file)]).starts_with("lattice; 3 elements"));
}

#[test]
fn precision_flag() {
    let l = fixture("semilattice8.lat");
    let dir = TempDir::new().unwrap();
    let third = dir.path().join("third.csv");
    fs::write(&third, "element,value\na,0.1\nb,0\nc,0\nd,0\ne,0\nf,0\ng,0\nh,0\n").unwrap();
    let full = ok(&["idlt", p(&l), p(&third), "--variant", "meet"]);
    assert!(full.contains("0.10000000000000001"));
    let short = ok(&["idlt", p(&l), p(&third), "--variant", "meet", "--precision", "3"]);
    assert!(short.contains("a,0.1\n"));
}
