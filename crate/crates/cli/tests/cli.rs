//! End-to-end coverage of the command-line surface: subcommands, exit
//! codes, format switches, determinism, and schema round-trips.

use epr_games_cli::{run, Outcome};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn invoke(args: &[&str]) -> Outcome {
    let mut full = vec!["epr-games"];
    full.extend_from_slice(args);
    run(full)
}

#[test]
fn check_pd_passes_on_the_pd_game() {
    let out = invoke(&["game", "check-pd", &fixture("pd7.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("generalized PD: yes"));
}

#[test]
fn check_pd_fails_on_the_ratio_game() {
    // theta = omega violates strict condition (b).
    let out = invoke(&["game", "check-pd", &fixture("ratio_unit_game.json")]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("generalized PD: no"));
    assert!(out.stdout.contains("theta > omega"));
}

#[test]
fn payoff_on_deterministic_coins_reproduces_pure_payoffs() {
    let out = invoke(&[
        "payoff",
        &fixture("pd7.json"),
        &fixture("ones_coins.json"),
        "--profile",
        "1,1,1",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("alice: 7.00000"), "{}", out.stdout);

    // Coins (1,0) per player embed the three-coin game: each context's
    // outcome deterministically mirrors its profile, so the all-second
    // corner earns omega.
    let out = invoke(&[
        "payoff",
        &fixture("pd7.json"),
        &fixture("det_coins.json"),
        "--profile",
        "0,0,0",
    ]);
    assert!(out.stdout.contains("alice: 1.00000"), "{}", out.stdout);
}

#[test]
fn probs_check_accepts_the_completion_and_rejects_uniform() {
    let out = invoke(&["probs", "check", &fixture("example_independents.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("overall: yes"));

    // Uniform 1/8 everywhere is normalized and no-signaling but breaks the
    // embedding zeros.
    let out = invoke(&["probs", "check", &fixture("uniform_behavior.json")]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("normalization: yes"));
    assert!(out.stdout.contains("no-signaling: yes"));
    assert!(out.stdout.contains("embedding zeros: no"));
}

#[test]
fn probs_factorize_on_the_uniform_behavior() {
    let out = invoke(&["probs", "factorize", &fixture("uniform_behavior.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("factorizable: yes"));
    assert!(out.stdout.contains("alice: 0.50000 0.50000"));
}

#[test]
fn probs_factorize_on_the_example_behavior() {
    let out = invoke(&["probs", "factorize", &fixture("example_independents.json")]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("factorizable: no"));
    assert!(out.stdout.contains("witness: p1"));
}

#[test]
fn probs_complete_emits_the_full_behavior() {
    let out = invoke(&[
        "probs",
        "complete",
        &fixture("example_independents.json"),
        "--exact",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("p2 = 7/50"));
    assert!(out.stdout.contains("p40 = 31/50"));
    assert!(out.stdout.contains("p64 = 1"));
}

#[test]
fn probs_complete_reports_infeasibility() {
    let dir = std::env::temp_dir().join("epr-games-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("overweight.json");
    std::fs::write(
        &path,
        r#"{"independent": {"p1": 0.9, "p3": 0, "p5": 0, "p6": 0, "p13": 0,
            "p15": 0, "p18": 0, "p20": 0, "p22": 0, "p27": 0}}"#,
    )
    .unwrap();
    let out = invoke(&["probs", "complete", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("feasible: no"));
    assert!(out.stdout.contains("p7"));
}

#[test]
fn ne_verify_full_cooperation_on_the_example_behavior() {
    let out = invoke(&[
        "ne",
        "verify",
        &fixture("ratio_unit_game.json"),
        &fixture("example_independents.json"),
        "--profile",
        "1,1,1",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("is ne: yes"));
    assert!(out.stdout.contains("margins: 0.10663 0.09643 0.01720"), "{}", out.stdout);

    // An interior profile with nonzero slope is not an equilibrium.
    let out = invoke(&[
        "ne",
        "verify",
        &fixture("pd7.json"),
        &fixture("zc_coins.json"),
        "--profile",
        "1/2,1/2,1/2",
    ]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("is ne: no"));
}

#[test]
fn ne_enumerate_lists_equilibria_in_canonical_order() {
    let out = invoke(&[
        "ne",
        "enumerate",
        &fixture("ratio_unit_game.json"),
        &fixture("example_independents.json"),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("equilibria: (1,1,1) (0,0,0)"), "{}", out.stdout);

    let out = invoke(&["ne", "enumerate", &fixture("pd7.json"), &fixture("zc_coins.json")]);
    assert!(out.stdout.contains("equilibria: (0,0,0)"));
}

#[test]
fn ne_ccc_margins_matches_the_documented_output() {
    let out = invoke(&[
        "ne",
        "ccc-margins",
        &fixture("example_ratios.json"),
        &fixture("example_independents.json"),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("margins: 0.10663 0.09643 0.01720"), "{}", out.stdout);

    let exact = invoke(&[
        "ne",
        "ccc-margins",
        &fixture("example_ratios.json"),
        &fixture("example_independents.json"),
        "--exact",
    ]);
    assert!(exact.stdout.contains("10663/100000"));
}

#[test]
fn ne_ccc_margins_rejects_unconstrained_behaviors() {
    let out = invoke(&[
        "ne",
        "ccc-margins",
        &fixture("example_ratios.json"),
        &fixture("uniform_behavior.json"),
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("must vanish"), "{}", out.stderr);
}

#[test]
fn quantum_generate_ghz_all_z() {
    let out = invoke(&[
        "quantum",
        "generate",
        &fixture("ghz_state.json"),
        &fixture("allz_setup.json"),
        "--format",
        "json",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(value["normalization_pass"], true);
    assert_eq!(value["no_signaling_pass"], true);
    assert!((value["p"][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((value["p"][7].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(value["p"][1].as_f64().unwrap(), 0.0);

    // The JSON report is itself a loadable behavior file.
    let behavior: epr_games::Behavior<f64> =
        epr_games::files::parse_behavior(&out.stdout).unwrap();
    assert!((behavior.p(1) - 0.5).abs() < 1e-12);
}

#[test]
fn quantum_generate_accepts_density_operators() {
    // The maximally mixed state gives the uniform behavior under any setup,
    // which certifies factorizable with fair coins.
    let out = invoke(&[
        "quantum",
        "generate",
        &fixture("mixed_state.json"),
        &fixture("allz_setup.json"),
        "--format",
        "json",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let behavior: epr_games::Behavior<f64> =
        epr_games::files::parse_behavior(&out.stdout).unwrap();
    for i in 1..=64 {
        assert!((behavior.p(i) - 0.125).abs() < 1e-12, "p{i}");
    }
}

#[test]
fn search_ccc_exact_mode_returns_fraction_margins() {
    let out = invoke(&["search", "ccc", &fixture("exact_problem.json"), "--exact"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("status: feasible"));
    assert!(out.stdout.contains("1/100"), "{}", out.stdout);
    assert!(out.stdout.contains("factorizable: no"));
}

#[test]
fn quantum_generate_rejects_exact_mode() {
    let out = invoke(&[
        "quantum",
        "generate",
        &fixture("ghz_state.json"),
        &fixture("allz_setup.json"),
        "--exact",
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("float-only"));
}

#[test]
fn search_ccc_is_feasible_and_deterministic() {
    let args = [
        "search",
        "ccc",
        &fixture("example_problem.json"),
        "--format",
        "json",
        "--seed",
        "3",
    ];
    let a = invoke(&args);
    let b = invoke(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout, "identical inputs and seed must be byte-identical");

    let value: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(value["status"], "feasible");
    // The embedded behavior round-trips through the behavior schema.
    let behavior: epr_games::Behavior<f64> =
        epr_games::files::parse_behavior(&a.stdout).unwrap();
    assert!(epr_games::behavior::check_embedding_zeros(&behavior, &1e-12).pass);
}

#[test]
fn reports_are_deterministic_across_runs() {
    for args in [
        vec!["game", "check-pd", &fixture("pd7.json"), "--format", "json"],
        vec![
            "ne",
            "ccc-margins",
            &fixture("example_ratios.json"),
            &fixture("example_independents.json"),
            "--format",
            "json",
        ],
        vec!["probs", "factorize", &fixture("uniform_behavior.json"), "--format", "json"],
    ] {
        let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let strs: Vec<&str> = owned.iter().map(|s| s.as_str()).collect();
        let a = invoke(&strs);
        let b = invoke(&strs);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn output_flag_writes_the_json_report() {
    let dir = std::env::temp_dir().join("epr-games-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("completion.json");
    let out = invoke(&[
        "probs",
        "complete",
        &fixture("example_independents.json"),
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let written = std::fs::read_to_string(&path).unwrap();
    let behavior: epr_games::Behavior<f64> = epr_games::files::parse_behavior(&written).unwrap();
    assert!((behavior.p(36) - 0.38).abs() < 1e-12);
}

#[test]
fn malformed_json_and_wrong_schemas_exit_2() {
    let out = invoke(&["game", "check-pd", &fixture("malformed.json")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error:"));

    let out = invoke(&["probs", "check", &fixture("wrong_schema.json")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("behavior"), "{}", out.stderr);

    let out = invoke(&["probs", "check", "/nonexistent/nowhere.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("cannot read file"));
}

#[test]
fn unknown_flags_are_rejected() {
    let out = invoke(&["game", "check-pd", &fixture("pd7.json"), "--frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("unexpected argument"));
}

#[test]
fn bad_profile_arguments_exit_2() {
    let out = invoke(&[
        "payoff",
        &fixture("pd7.json"),
        &fixture("ones_coins.json"),
        "--profile",
        "1,1",
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("profile"));

    let out = invoke(&[
        "payoff",
        &fixture("pd7.json"),
        &fixture("ones_coins.json"),
        "--profile",
        "2,0,0",
    ]);
    assert_eq!(out.code, 2);
}

#[test]
fn non_finite_tolerances_exit_2() {
    let out = invoke(&["probs", "check", &fixture("uniform_behavior.json"), "--tol", "inf"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--tol"));
}

#[test]
fn help_exits_zero() {
    let out = invoke(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("Usage"));
}
