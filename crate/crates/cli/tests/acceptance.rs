//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use subtext_core::corpus::{count_spans, tokenize, Text};
use subtext_core::metric::{
    metric_coproduct, metric_product, to_metric, to_unit, tropical_add, tropical_scale,
    MetricCopresheaf, TropicalScalar,
};
use subtext_core::semantics::{
    coproduct, internal_hom, is_copresheaf, oracle_weighted_limit, product, representable,
    weighted_limit, yoneda_check, WeightedDiagram,
};
use subtext_core::syntax::{
    is_subtext, neg_ln, verify_category_axioms, Category, SyntaxCategory,
};
use subtext_core::verify::{
    random_category, run_suite, HomTable, RandomCategorySpec, Sampling, SuiteConfig,
};

fn toy_category() -> SyntaxCategory {
    let doc = tokenize("a b a c", true);
    SyntaxCategory::from_stats(&count_spans(&doc, 4).unwrap())
}

fn criterion(n: u32, name: &str, ok: bool, detail: &str) {
    println!("acceptance {n:2} ({name}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} ({name}) failed: {detail}");
}

fn ulp_eq(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    if a.is_infinite() || b.is_infinite() || a.signum() != b.signum() {
        return false;
    }
    (a.to_bits() as i64 - b.to_bits() as i64).abs() <= 1
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subtext"))
}

fn toy_corpus_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/toy.txt")
}

#[test]
fn acceptance_01_category_axioms() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();

    let check_axioms = |cat: &dyn Fn(usize, usize) -> f64,
                        leq: &dyn Fn(usize, usize) -> bool,
                        n: usize,
                        tag: &str,
                        ok: &mut bool,
                        detail: &mut String| {
        for x in 0..n {
            if (cat(x, x) - 1.0).abs() > 1e-12 {
                *ok = false;
                detail.push_str(&format!("{tag}: identity at {x}; "));
            }
            for y in 0..n {
                for z in 0..n {
                    let composite = cat(x, y) * cat(y, z);
                    if composite > cat(x, z) + 1e-12 {
                        *ok = false;
                        detail.push_str(&format!("{tag}: composition at {x},{y},{z}; "));
                    }
                    if leq(x, y) && leq(y, z) && !ulp_eq(composite, cat(x, z)) {
                        *ok = false;
                        detail.push_str(&format!("{tag}: chain equality at {x},{y},{z}; "));
                    }
                }
            }
        }
    };

    let toy = toy_category();
    assert_eq!(toy.object_count(), 9);
    check_axioms(
        &|x, y| toy.hom_by_ids(x, y),
        &|x, y| toy.leq_by_ids(x, y),
        9,
        "toy",
        &mut ok,
        &mut detail,
    );

    for seed in 0..50u64 {
        let cat = random_category(&RandomCategorySpec {
            n_objects: 6,
            seed,
            chain_density: 0.3 + 0.01 * seed as f64,
        })
        .unwrap();
        check_axioms(
            &|x, y| cat.hom_by_ids(x, y),
            &|x, y| cat.leq_by_ids(x, y),
            6,
            &format!("random-{seed}"),
            &mut ok,
            &mut detail,
        );
        let report = verify_category_axioms(&cat, &Sampling::Exhaustive, 1e-12);
        if !report.pass() {
            ok = false;
            detail.push_str(&format!("random-{seed} report failed; "));
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        ok = false;
        detail.push_str(&format!("runtime {elapsed:.3}s >= 1s"));
    }
    criterion(1, "category axioms, toy + 50 random", ok, &detail);
}

#[test]
fn acceptance_02_representables_are_functors() {
    let toy = toy_category();
    let mut ok = true;
    let mut detail = String::new();
    for x in 0..toy.object_count() {
        let report = is_copresheaf(&toy, &representable(&toy, x), 1e-12);
        let entry = &report.entries()[0];
        if entry.checked != 81 || entry.max_violation > 1e-12 {
            ok = false;
            detail.push_str(&format!(
                "h^{}: checked {} violation {}; ",
                toy.label(x),
                entry.checked,
                entry.max_violation
            ));
        }
    }
    criterion(2, "all 9 representables pass the functor check", ok, &detail);
}

#[test]
fn acceptance_03_yoneda_inequality() {
    let toy = toy_category();
    let report = yoneda_check(&toy, 1e-12);
    let entry = &report.entries()[0];
    let ok = report.pass() && entry.checked == 81;
    criterion(
        3,
        "Yoneda inequality on all 81 pairs",
        ok,
        &format!("checked {} violation {}", entry.checked, entry.max_violation),
    );
}

#[test]
fn acceptance_04_product_coproduct_tables() {
    let toy = toy_category();
    let n = toy.object_count();
    let mut ok = true;
    let mut detail = String::new();
    for x in 0..n {
        for y in 0..n {
            let (hx, hy) = (representable(&toy, x), representable(&toy, y));
            let and = product(&hx, &hy);
            let or = coproduct(&hx, &hy);
            for c in 0..n {
                let ratio = |a: usize| toy.measure_by_id(c) as f64 / toy.measure_by_id(a) as f64;
                let (x_in, y_in) = (toy.leq_by_ids(x, c), toy.leq_by_ids(y, c));
                let expected_and = if x_in && y_in {
                    ratio(x).min(ratio(y))
                } else {
                    0.0
                };
                let expected_or = match (x_in, y_in) {
                    (true, true) => ratio(x).max(ratio(y)),
                    (true, false) => ratio(x),
                    (false, true) => ratio(y),
                    (false, false) => 0.0,
                };
                if and.value(c) != expected_and || or.value(c) != expected_or {
                    ok = false;
                    detail.push_str(&format!("value mismatch at {x},{y},{c}; "));
                }
                if (and.value(c) > 0.0) != (x_in && y_in)
                    || (or.value(c) > 0.0) != (x_in || y_in)
                {
                    ok = false;
                    detail.push_str(&format!("support mismatch at {x},{y},{c}; "));
                }
            }
        }
    }
    criterion(4, "product/coproduct case tables exact", ok, &detail);
}

#[test]
fn acceptance_05_weighted_limits_match_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let weights = [1.0, 0.5, 0.25, 0.2, 0.1, 0.05];
    let mut ok = true;
    let mut detail = String::new();

    for i in 0..120u64 {
        let n_objects = 3 + (i as usize % 4);
        let cat = random_category(&RandomCategorySpec {
            n_objects,
            seed: 1000 + i,
            chain_density: rng.gen_range(0.0..=1.0),
        })
        .unwrap();
        let n_legs = 2 + (i as usize % 2);
        let legs: Vec<(f64, _)> = (0..n_legs)
            .map(|_| {
                (
                    weights[rng.gen_range(0..weights.len())],
                    representable(&cat, rng.gen_range(0..n_objects)),
                )
            })
            .collect();
        let trivial = WeightedDiagram::new(
            legs.iter().map(|(_, f)| (1.0, f.clone())).collect(),
        )
        .unwrap();
        let diagram = WeightedDiagram::new(legs.clone()).unwrap();

        // trivial weights give exactly the product of the legs
        let mut expected = legs[0].1.clone();
        for (_, leg) in &legs[1..] {
            expected = product(&expected, leg);
        }
        if weighted_limit(&trivial) != expected {
            ok = false;
            detail.push_str(&format!("diagram {i}: trivial != product; "));
        }

        let closed = weighted_limit(&diagram);
        let oracle = oracle_weighted_limit(&cat, &diagram, 0.05).unwrap();
        for c in 0..n_objects {
            let gap = closed.value(c) - oracle.value(c);
            if !(-1e-9..=0.05 + 1e-9).contains(&gap) {
                ok = false;
                detail.push_str(&format!("diagram {i} object {c}: gap {gap}; "));
            }
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        ok = false;
        detail.push_str(&format!("runtime {elapsed:.1}s >= 60s"));
    }
    criterion(
        5,
        "weighted limits within one grid step of the oracle on 120 diagrams",
        ok,
        &detail,
    );
}

#[test]
fn acceptance_06_implication_support() {
    let toy = toy_category();
    let n = toy.object_count();
    let mut ok = true;
    let mut detail = String::new();
    for x in 0..n {
        for y in 0..n {
            let imp = internal_hom(&toy, &representable(&toy, x), &representable(&toy, y));
            let report = is_copresheaf(&toy, &imp, 1e-12);
            if !report.pass() {
                ok = false;
                detail.push_str(&format!("functor check failed at {x},{y}; "));
            }
            for c in 0..n {
                // Boolean implication over the containment order: true at c
                // when every extension containing x also contains y
                let expected = (0..n).all(|d| {
                    !(is_subtext(toy.object(c), toy.object(d))
                        && is_subtext(toy.object(x), toy.object(d)))
                        || is_subtext(toy.object(y), toy.object(d))
                });
                if (imp.value(c) > 0.0) != expected {
                    ok = false;
                    detail.push_str(&format!("support mismatch at {x},{y},{c}; "));
                }
            }
        }
    }
    criterion(6, "implication support matches Boolean implication", ok, &detail);
}

#[test]
fn acceptance_07_metric_transport() {
    let toy = toy_category();
    let n = toy.object_count();
    let mut ok = true;
    let mut detail = String::new();

    for x in 0..n {
        let f = representable(&toy, x);
        let back = to_unit(&to_metric(&f)).unwrap();
        for c in 0..n {
            let (orig, round) = (f.value(c), back.value(c));
            let fine = if orig == 0.0 || orig == 1.0 {
                orig == round
            } else {
                (orig - round).abs() / orig <= 1e-12
            };
            if !fine {
                ok = false;
                detail.push_str(&format!("round trip at {x},{c}; "));
            }
        }
    }

    for x in 0..n {
        for y in 0..n {
            let (f, g) = (representable(&toy, x), representable(&toy, y));
            let (mf, mg) = (to_metric(&f), to_metric(&g));
            if to_metric(&product(&f, &g)) != metric_product(&mf, &mg)
                || to_metric(&coproduct(&f, &g)) != metric_coproduct(&mf, &mg)
            {
                ok = false;
                detail.push_str(&format!("conjugation at {x},{y}; "));
            }
        }
    }

    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let via = neg_ln(toy.hom_by_ids(x, y)) + neg_ln(toy.hom_by_ids(y, z));
                let direct = neg_ln(toy.hom_by_ids(x, z));
                if via < direct - 1e-12 {
                    ok = false;
                    detail.push_str(&format!("triangle at {x},{y},{z}; "));
                }
            }
        }
    }
    criterion(7, "metric transport identities and triangle inequality", ok, &detail);
}

#[test]
fn acceptance_08_tropical_module_laws() {
    let mut rng = ChaCha20Rng::seed_from_u64(88);
    let mut ok = true;
    let mut detail = String::new();
    let len = 6;

    // dyadic draws keep min/+ arithmetic exact
    let draw_vec = |rng: &mut ChaCha20Rng| {
        MetricCopresheaf::new(
            (0..len)
                .map(|_| {
                    if rng.gen_range(0..4) == 0 {
                        f64::INFINITY
                    } else {
                        f64::from(rng.gen_range(0u32..16384)) / 1024.0
                    }
                })
                .collect(),
        )
        .unwrap()
    };

    for i in 0..1000 {
        let f = draw_vec(&mut rng);
        let g = draw_vec(&mut rng);
        let h = draw_vec(&mut rng);
        let s = TropicalScalar::new(f64::from(rng.gen_range(0u32..64)) / 16.0).unwrap();
        let t = TropicalScalar::new(f64::from(rng.gen_range(0u32..64)) / 16.0).unwrap();
        let st = TropicalScalar::new(s.value() + t.value()).unwrap();
        let zero = TropicalScalar::new(0.0).unwrap();
        let top = MetricCopresheaf::new(vec![f64::INFINITY; len]).unwrap();

        let laws: [(MetricCopresheaf, MetricCopresheaf); 7] = [
            (tropical_add(&f, &g), tropical_add(&g, &f)),
            (
                tropical_add(&tropical_add(&f, &g), &h),
                tropical_add(&f, &tropical_add(&g, &h)),
            ),
            (tropical_add(&f, &f), f.clone()),
            (tropical_add(&f, &top), f.clone()),
            (tropical_scale(zero, &f), f.clone()),
            (
                tropical_scale(st, &f),
                tropical_scale(s, &tropical_scale(t, &f)),
            ),
            (
                tropical_scale(s, &tropical_add(&f, &g)),
                tropical_add(&tropical_scale(s, &f), &tropical_scale(s, &g)),
            ),
        ];
        for (k, (left, right)) in laws.iter().enumerate() {
            for c in 0..len {
                if !ulp_eq(left.value(c), right.value(c)) {
                    ok = false;
                    detail.push_str(&format!("instance {i} law {k} object {c}; "));
                }
            }
        }
    }
    criterion(8, "tropical module laws on 1000 instances", ok, &detail);
}

#[test]
fn acceptance_09_cli_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    let mut ok = true;
    let mut detail = String::new();

    let build = bin()
        .args(["build", toy_corpus_path().to_str().unwrap(), "--out"])
        .arg(&model)
        .output()
        .unwrap();
    if !build.status.success()
        || String::from_utf8_lossy(&build.stdout) != "objects: 9\ntotal tokens: 4\n"
    {
        ok = false;
        detail.push_str("build failed; ");
    }

    let hom = bin()
        .args(["query", model.to_str().unwrap(), "hom", "a", "a b"])
        .output()
        .unwrap();
    if String::from_utf8_lossy(&hom.stdout) != "0.5\n" {
        ok = false;
        detail.push_str(&format!("hom printed {:?}; ", String::from_utf8_lossy(&hom.stdout)));
    }

    let dist = bin()
        .args(["query", model.to_str().unwrap(), "dist", "a", "b"])
        .output()
        .unwrap();
    if String::from_utf8_lossy(&dist.stdout) != "inf\n" {
        ok = false;
        detail.push_str(&format!("dist printed {:?}; ", String::from_utf8_lossy(&dist.stdout)));
    }

    let verify = bin()
        .args(["verify", model.to_str().unwrap()])
        .output()
        .unwrap();
    if verify.status.code() != Some(0) {
        ok = false;
        detail.push_str(&format!("verify exited {:?}; ", verify.status.code()));
    }

    // corrupted model: monotonicity violation must surface in the report
    let corrupt = dir.path().join("corrupt.json");
    std::fs::write(
        &corrupt,
        r#"{
  "version": 1,
  "max_span": 2,
  "total_tokens": 4,
  "spans": [
    {"t": ["a"], "c": 2},
    {"t": ["a", "b"], "c": 3},
    {"t": ["b"], "c": 3}
  ]
}"#,
    )
    .unwrap();
    let report_path = dir.path().join("corrupt_report.json");
    let bad = bin()
        .args(["verify", corrupt.to_str().unwrap(), "--out"])
        .arg(&report_path)
        .output()
        .unwrap();
    if bad.status.code() == Some(0) {
        ok = false;
        detail.push_str("corrupted model verified clean; ");
    }
    let report = std::fs::read_to_string(&report_path).unwrap_or_default();
    if !(report.contains("\"pass\": false") && report.contains("a b")) {
        ok = false;
        detail.push_str("witness missing from corruption report; ");
    }

    criterion(9, "CLI build, query, verify round trip", ok, &detail);
}

#[test]
fn acceptance_10_planted_fault_sensitivity() {
    let toy = toy_category();
    let resolve = |s: &str| {
        toy.object_id(&Text::new(s.split_whitespace()).unwrap())
            .unwrap()
    };
    let config = SuiteConfig::default();
    let mut ok = true;
    let mut detail = String::new();

    // one planted fault per law group; the faulted entry must belong to it
    #[allow(clippy::type_complexity)]
    let cases: [(&str, &[&str], (&str, &str, f64)); 9] = [
        (
            "category axioms",
            &["identity", "composition-bound", "chain-equality"],
            ("a", "a", 1e-6),
        ),
        (
            "representable functoriality",
            &["representable-functoriality"],
            ("a", "a b a", -1e-6),
        ),
        ("yoneda", &["yoneda-inequality"], ("a", "a b", 1e-6)),
        (
            "case tables",
            &["product-table", "coproduct-table"],
            ("b", "a b", -1e-6),
        ),
        (
            "weighted limits",
            &[
                "weighted-limit-trivial",
                "weighted-limit-oracle",
                "weighted-limit-functorial",
            ],
            ("a", "a b a", -1e-6),
        ),
        (
            "implication",
            &["implication-support", "implication-functorial"],
            ("b", "a c", 1e-6),
        ),
        ("metric transport", &["metric-transport"], ("a", "a b a", -1e-6)),
        ("metric triangle", &["metric-triangle"], ("a", "a b", 1e-6)),
        ("tropical module", &["tropical-module"], ("a", "a b a", -1e-6)),
    ];

    for (group, laws, (from, to, delta)) in cases {
        let mut table = HomTable::snapshot(&toy);
        table.perturb_hom(resolve(from), resolve(to), delta);
        let report = run_suite(&table, &config);
        if report.pass() {
            ok = false;
            detail.push_str(&format!("{group}: fault not detected at all; "));
            continue;
        }
        let hit = report
            .entries()
            .iter()
            .any(|e| laws.contains(&e.law.as_str()) && e.max_violation > config.tolerance);
        if !hit {
            ok = false;
            detail.push_str(&format!("{group}: fault missed by its own laws; "));
        }
    }

    // the same mechanism reaches exit code 3 through the CLI
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    let build = bin()
        .args(["build", toy_corpus_path().to_str().unwrap(), "--out"])
        .arg(&model)
        .output()
        .unwrap();
    assert!(build.status.success());
    let verify = bin()
        .args([
            "verify",
            model.to_str().unwrap(),
            "--perturb-from",
            "a",
            "--perturb-to",
            "a b",
            "--perturb-delta",
            "1e-6",
        ])
        .output()
        .unwrap();
    if verify.status.code() != Some(3) {
        ok = false;
        detail.push_str(&format!("CLI exited {:?}, expected 3; ", verify.status.code()));
    }

    criterion(10, "every law group detects its planted fault", ok, &detail);
}
