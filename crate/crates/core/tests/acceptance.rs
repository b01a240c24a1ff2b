//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! print.

use std::process::ExitCode;
use std::time::Instant;

use berge_spectral::hgraph::{construct_graph, suspension, GraphFamily, UniformHypergraph};
use berge_spectral::spectral::{p_spectral_radius, star_lambda, star_plus_lambda_p2, SolverOptions};
use berge_spectral::verify::{
    verify_cycle_theorem, verify_expansion_minimum, verify_merge_lemma, verify_move_edge_lemma, verify_p_monotonicity,
    verify_path_exchange, verify_path_theorem, verify_star_theorem, verify_star_theorem_with, verify_suspension_lemma,
    Outcome, VerificationReport, DEFAULT_SAMPLES, MONOTONICITY_GRID, SHIFTING_P_SET, SUSPENSION_GRID,
};

const STAR_SAMPLES: usize = 10_000;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Verdict { passed, detail: detail.into() }
    }
}

fn graph(family: GraphFamily, k: usize) -> UniformHypergraph {
    construct_graph(&family, &[k]).expect("family parameters are valid").to_hypergraph()
}

fn lambda(h: &UniformHypergraph, p: f64, opts: &SolverOptions) -> f64 {
    p_spectral_radius(h, p, opts).expect("solver accepts the input").lambda
}

fn label(r: &VerificationReport) -> String {
    ["k", "p"].iter().filter_map(|key| r.params.get(*key).map(|v| format!("{key}={v}"))).collect::<Vec<_>>().join(" ")
}

/// Every report passes and audits clean; failures are named.
fn all_pass(reports: &[VerificationReport]) -> Verdict {
    let mut bad = Vec::new();
    for r in reports {
        if r.outcome != Outcome::Pass || !r.is_consistent() {
            let checks: Vec<&str> = r.failed_checks().map(|c| c.name.as_str()).collect();
            bad.push(format!("{} {}: {:?} [{}]", r.scenario, label(r), r.outcome, checks.join("; ")));
        }
    }
    let summary: Vec<String> = reports
        .iter()
        .map(|r| match r.margin {
            Some(m) => format!("{} {} margin {m:.3e}", r.scenario, label(r)),
            None => format!("{} {} checks", r.scenario, r.checks.len()),
        })
        .collect();
    if bad.is_empty() {
        Verdict::new(true, summary.join(", "))
    } else {
        Verdict::new(false, bad.join(" | "))
    }
}

fn closed_forms(opts: &SolverOptions) -> Verdict {
    let started = Instant::now();
    let mut worst: Vec<String> = Vec::new();
    let mut ok = true;
    let mut expect = |label: String, got: f64, want: f64, tol: f64| {
        if (got - want).abs() > tol || !got.is_finite() {
            ok = false;
            worst.push(format!("{label}: {got} vs {want}"));
        }
    };
    for n in [5, 10, 17] {
        let s = graph(GraphFamily::Star, n);
        expect(format!("S_{n} at p=2"), lambda(&s, 2.0, opts), ((n - 1) as f64).sqrt(), 1e-9);
    }
    for n in [5, 10] {
        let s = graph(GraphFamily::Star, n);
        for p in [1.0, 2.0, 4.0] {
            let want = 2f64.powf(1.0 - 2.0 / p) * ((n - 1) as f64).powf(1.0 - 1.0 / p);
            expect(format!("S_{n} at p={p}"), lambda(&s, p, opts), want, 1e-8);
            expect(format!("closed form S_{n} at p={p}"), star_lambda(n, p), want, 1e-12);
        }
    }
    // S_{n-1}^+ has n - 1 vertices; the cubic is indexed by n
    expect("S_9+ cubic root".into(), star_plus_lambda_p2(10), 3.0, 0.0);
    expect("S_9+ solver".into(), lambda(&graph(GraphFamily::StarPlus, 9), 2.0, opts), 3.0, 1e-8);
    for k in [6, 8] {
        let h = suspension(&graph(GraphFamily::StarPlus, k - 1), 1).expect("suspension of a graph");
        expect(format!("S_{}+ * K_1 at p=1", k - 1), lambda(&h, 1.0, opts), 4.0 / 27.0, 1e-7);
    }
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        ok = false;
        worst.push(format!("took {elapsed:.2}s"));
    }
    let detail = if worst.is_empty() { format!("all anchors hold, {elapsed:.2}s") } else { worst.join("; ") };
    Verdict::new(ok, detail)
}

fn path_reports(opts: &SolverOptions) -> Vec<VerificationReport> {
    let mut out: Vec<VerificationReport> =
        [1.0, 2.0, 3.0, 4.0].iter().map(|&p| verify_path_theorem(6, p, opts).expect("P_6 catalog")).collect();
    out.push(verify_path_theorem(7, 3.0, opts).expect("P_7 catalog"));
    out
}

fn cycle_reports(opts: &SolverOptions) -> Vec<VerificationReport> {
    [2.0, 3.0].iter().map(|&p| verify_cycle_theorem(6, p, opts).expect("C_6 catalog")).collect()
}

fn star_reports(opts: &SolverOptions) -> Vec<VerificationReport> {
    let mut out = vec![verify_star_theorem(6, 1.0, opts).expect("exhaustive star")];
    for k in 11..=15 {
        for p in [2.0, 3.0] {
            out.push(verify_star_theorem_with(k, p, STAR_SAMPLES, opts).expect("structural star"));
        }
    }
    out.push(verify_star_theorem_with(10, 2.0, STAR_SAMPLES, opts).expect("boundary star"));
    out
}

fn suspension_report(opts: &SolverOptions) -> VerificationReport {
    verify_suspension_lemma(DEFAULT_SAMPLES, &SUSPENSION_GRID, opts).expect("suspension suite")
}

fn shifting_reports(opts: &SolverOptions) -> Vec<VerificationReport> {
    vec![
        verify_move_edge_lemma(DEFAULT_SAMPLES, &SHIFTING_P_SET, opts).expect("move suite"),
        verify_merge_lemma(DEFAULT_SAMPLES, &SHIFTING_P_SET, opts).expect("merge suite"),
        verify_path_exchange(DEFAULT_SAMPLES, &SHIFTING_P_SET, opts).expect("exchange suite"),
    ]
}

fn expansion_reports(opts: &SolverOptions) -> Vec<VerificationReport> {
    [(GraphFamily::Path, 3), (GraphFamily::Path, 4), (GraphFamily::Complete, 3)]
        .iter()
        .map(|(f, k)| {
            let g = construct_graph(f, &[*k]).expect("small base");
            verify_expansion_minimum(&g, 3.0, opts).expect("expansion suite")
        })
        .collect()
}

/// Oracle checks from every report: each compares the solver with the
/// brute-force oracle on hypergraphs with at most six vertices.
fn oracle_agreement(reports: &[&VerificationReport]) -> Verdict {
    let checks: Vec<_> = reports.iter().flat_map(|r| r.checks.iter()).filter(|c| c.name.contains("oracle")).collect();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let worst = checks.iter().map(|c| c.lhs).fold(0.0, f64::max);
    let passed = !checks.is_empty() && failed.is_empty() && checks.iter().all(|c| c.asserted && c.tol <= 1e-7);
    let detail = if failed.is_empty() {
        format!("{} oracle checks, largest deviation {worst:.2e}", checks.len())
    } else {
        format!("failed: {}", failed.join("; "))
    };
    Verdict::new(passed, detail)
}

fn fingerprint(reports: &[VerificationReport]) -> Vec<String> {
    reports.iter().map(|r| serde_json::to_string(&r.without_timing()).expect("report serializes")).collect()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool").install(f)
}

fn determinism(
    first_paths: &[VerificationReport],
    first_suspension: &VerificationReport,
    opts: &SolverOptions,
) -> Verdict {
    let mut base = fingerprint(first_paths);
    base.extend(fingerprint(std::slice::from_ref(first_suspension)));
    let rerun = |threads: usize| {
        in_pool(threads, || {
            let mut f = fingerprint(&path_reports(opts));
            f.extend(fingerprint(&[suspension_report(opts)]));
            f
        })
    };
    let one = rerun(1);
    let eight = rerun(8);
    let same_one = one == base;
    let same_eight = eight == base;
    Verdict::new(
        same_one && same_eight,
        format!("{} reports; 1 worker identical: {same_one}, 8 workers identical: {same_eight}", base.len()),
    )
}

fn main() -> ExitCode {
    let opts = SolverOptions::default();
    let mut verdicts: Vec<(usize, &str, Verdict)> = Vec::new();
    let mut record = |n: usize, name: &'static str, v: Verdict| {
        println!("{} criterion {n:>2} {name}: {}", if v.passed { "PASS" } else { "FAIL" }, v.detail);
        verdicts.push((n, name, v));
    };

    record(1, "closed-form anchors", closed_forms(&opts));
    let paths = path_reports(&opts);
    record(2, "path catalogs", all_pass(&paths));
    let cycles = cycle_reports(&opts);
    record(3, "cycle catalogs", all_pass(&cycles));
    let stars = star_reports(&opts);
    record(4, "star maximum", all_pass(&stars));
    let started = Instant::now();
    let sus = suspension_report(&opts);
    let sus_secs = started.elapsed().as_secs_f64();
    let mut v5 = all_pass(std::slice::from_ref(&sus));
    if sus_secs >= 120.0 {
        v5 = Verdict::new(false, format!("took {sus_secs:.1}s"));
    } else {
        v5.detail = format!("{}, {sus_secs:.1}s", v5.detail);
    }
    record(5, "suspension identity", v5);
    let mono = verify_p_monotonicity(DEFAULT_SAMPLES, &MONOTONICITY_GRID, &opts).expect("monotonicity suite");
    record(6, "p-monotonicity", all_pass(std::slice::from_ref(&mono)));
    let shifts = shifting_reports(&opts);
    record(7, "shifting suites", all_pass(&shifts));
    let expansions = expansion_reports(&opts);
    let everything: Vec<&VerificationReport> =
        paths.iter().chain(&cycles).chain(&stars).chain([&sus, &mono]).chain(&shifts).chain(&expansions).collect();
    record(8, "oracle agreement", oracle_agreement(&everything));
    record(9, "expansion minimum", all_pass(&expansions));
    record(10, "determinism", determinism(&paths, &sus, &opts));

    let failed: Vec<usize> = verdicts.iter().filter(|(_, _, v)| !v.passed).map(|(n, _, _)| *n).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", verdicts.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
