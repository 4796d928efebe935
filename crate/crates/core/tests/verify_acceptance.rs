//! Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{brute_force, golden, small_corpus, vectors, PUBLISHED_ROWS};
use keyterm_core::weighting::{tf2, tfdf, tfidf};
use keyterm_core::wordnet::fixture::MiniWordNet;
use keyterm_core::wordnet::WORDNET_DIR_ENV;
use keyterm_core::{
    build_index, compute_matrix, lexical_categories, load_wordnet, porter_stem, run_pipeline, select_joint,
    select_key_terms, Aggregation, LogBase, PipelineConfig, ReductionRow, Scheme, TermVector, Thresholds,
    WordNetPolicy,
};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::{Fail, Pass, Skip};

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    if elapsed <= limit {
        Pass(format!("{detail} in {elapsed:.2?}"))
    } else {
        Fail(format!("{detail} but took {elapsed:.2?} (limit {limit:?})"))
    }
}

fn percentage_formula() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for (n, k, printed) in PUBLISHED_ROWS {
        let row = ReductionRow::from_counts("table", Scheme::TfIdf, 0.0, n, k).expect("k <= n");
        if row.removed_pct != printed {
            mismatches.push(format!("{n}/{k}: {} vs printed {printed}", row.removed_pct));
        }
    }
    let matched = PUBLISHED_ROWS.len() - mismatches.len();
    let detail = format!("{matched}/{} rows reproduce the printed string", PUBLISHED_ROWS.len());
    if mismatches.is_empty() {
        within(start.elapsed(), Duration::from_secs(1), detail)
    } else {
        Fail(format!("{detail}; differing: {}", mismatches.join(", ")))
    }
}

fn porter_fixture() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let voc = fs::read_to_string(dir.join("porter_voc.txt")).unwrap();
    let out = fs::read_to_string(dir.join("porter_output.txt")).unwrap();
    let start = Instant::now();
    let mut total = 0;
    let mut agree = 0;
    for (w, expected) in voc.lines().zip(out.lines()) {
        total += 1;
        if porter_stem(w).map(|s| s == expected).unwrap_or(false) {
            agree += 1;
        }
    }
    let detail = format!("{agree}/{total} reference pairs agree");
    if agree == total && total > 23_000 {
        within(start.elapsed(), Duration::from_secs(5), detail)
    } else {
        Fail(detail)
    }
}

fn weighting_oracle() -> Outcome {
    let start = Instant::now();
    let cells = std::cell::Cell::new(0usize);
    let result = runner(200).run(&small_corpus(), |counts| {
        let idx = build_index(vectors(&counts)).unwrap();
        let b = brute_force(&counts);
        for (scheme, expected) in [
            (Scheme::TfIdf, &b.tfidf),
            (Scheme::TfDf, &b.tfdf),
            (Scheme::Tf2, &b.tf2),
        ] {
            let m = compute_matrix(&idx, scheme, LogBase::E);
            if m.entry_count() != expected.len() {
                return Err(TestCaseError::fail(format!("{scheme}: cell count differs")));
            }
            for (i, j, w) in m.cells() {
                let want = expected[&(i, idx.vocabulary()[j].clone())];
                if (w - want).abs() > 1e-9 {
                    return Err(TestCaseError::fail(format!("{scheme} ({i},{j}): {w} vs {want}")));
                }
                cells.set(cells.get() + 1);
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => within(
            start.elapsed(),
            Duration::from_secs(10),
            format!("200 random corpora, {} cells within 1e-9", cells.get()),
        ),
        Err(e) => Fail(e.to_string()),
    }
}

fn algebraic_identities() -> Outcome {
    let strategy = (small_corpus(), 2u64..10);
    let result = runner(500).run(&strategy, |(counts, k)| {
        let idx = build_index(vectors(&counts)).unwrap();
        let n = idx.doc_count() as u64;
        for i in 0..idx.doc_count() {
            let mut tf_sum = 0.0;
            for &(j, f) in idx.row(i) {
                let (a, d, p) = (
                    tfidf(&idx, i, j).unwrap(),
                    tfdf(&idx, i, j).unwrap(),
                    tf2(&idx, i, j).unwrap(),
                );
                if (p - a * d).abs() > 1e-12 * p.abs() {
                    return Err(TestCaseError::fail("tf2 != tfidf * tfdf"));
                }
                if (idx.df(j) == n) != (a == 0.0) {
                    return Err(TestCaseError::fail("tfidf zero iff df = |D| violated"));
                }
                tf_sum += f as f64 / idx.doc_total(i) as f64;
            }
            if !idx.row(i).is_empty() && (tf_sum - 1.0).abs() > 1e-9 {
                return Err(TestCaseError::fail("TF does not sum to 1"));
            }
        }
        let scaled: Vec<TermVector> = counts
            .iter()
            .enumerate()
            .map(|(i, m)| TermVector::from_counts(format!("d{i}"), m.iter().map(|(t, c)| (t.clone(), c * k))))
            .collect();
        let sidx = build_index(scaled).unwrap();
        for scheme in Scheme::ALL {
            let a = compute_matrix(&idx, scheme, LogBase::E);
            let b = compute_matrix(&sidx, scheme, LogBase::E);
            for ((_, _, x), (_, _, y)) in a.cells().zip(b.cells()) {
                if (x - y).abs() > 1e-12 * x.abs().max(1.0) {
                    return Err(TestCaseError::fail(format!("{scheme} changed under scaling by {k}")));
                }
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => Pass("500 random corpora: product, zero-idf, TF sum and scaling identities hold".into()),
        Err(e) => Fail(e.to_string()),
    }
}

fn selection_monotonicity() -> Outcome {
    let start = Instant::now();
    let strategy = (
        small_corpus(),
        0.0f64..1.5,
        0.0f64..1.5,
        (0.0f64..0.5, 0.0f64..1.5, 0.0f64..0.5),
    );
    let result = runner(1000).run(&strategy, |(counts, t1, dt, th)| {
        let idx = build_index(vectors(&counts)).unwrap();
        let ms: Vec<_> = Scheme::ALL
            .iter()
            .map(|&s| compute_matrix(&idx, s, LogBase::E))
            .collect();
        let thresholds = Thresholds::new(th.0, th.1, th.2).unwrap();
        for agg in [Aggregation::Max, Aggregation::Mean] {
            let joint = select_joint([&ms[0], &ms[1], &ms[2]], thresholds, agg).unwrap();
            for m in &ms {
                let low = select_key_terms(m, t1, agg).unwrap();
                let high = select_key_terms(m, t1 + dt, agg).unwrap();
                if !high.terms.is_subset(&low.terms) {
                    return Err(TestCaseError::fail(format!("{} not monotone", m.scheme())));
                }
                let single = select_key_terms(m, thresholds.for_scheme(m.scheme()), agg).unwrap();
                if !joint.terms.is_subset(&single.terms) {
                    return Err(TestCaseError::fail("joint set escapes a per-scheme set"));
                }
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => within(
            start.elapsed(),
            Duration::from_secs(10),
            "1000 cases: KD(t2) within KD(t1), joint within every scheme".into(),
        ),
        Err(e) => Fail(e.to_string()),
    }
}

fn wordnet_lookup() -> Outcome {
    let Some(dir) = std::env::var_os(WORDNET_DIR_ENV).map(PathBuf::from) else {
        return Skip(format!("no WordNet database ({WORDNET_DIR_ENV} unset)"));
    };
    if !dir.join("index.noun").is_file() {
        return Skip(format!("{} holds no WordNet database", dir.display()));
    }
    let start = Instant::now();
    let db = match load_wordnet(&dir) {
        Ok(db) => db,
        Err(e) => return Fail(format!("load failed: {e}")),
    };
    let load = start.elapsed();

    let words = ["dog", "washington", "zzzzqx"];
    let start = Instant::now();
    let rounds = 1000;
    for _ in 0..rounds {
        for w in words {
            std::hint::black_box(lexical_categories(&db, w));
        }
    }
    let per_lookup = start.elapsed() / (rounds * words.len() as u32);

    let dog = lexical_categories(&db, "dog");
    let wash = lexical_categories(&db, "washington");
    let unknown = lexical_categories(&db, "zzzzqx");
    let mut problems = Vec::new();
    if !dog.categories.contains("noun.animal") {
        problems.push("dog lacks noun.animal".to_owned());
    }
    if !(wash.categories.contains("noun.location") && wash.categories.contains("noun.person")) {
        problems.push(format!("washington categories {:?}", wash.categories));
    }
    if db.version() == "2.1" && wash.categories.len() != 3 {
        problems.push(format!("washington has {} categories under 2.1", wash.categories.len()));
    }
    if unknown.in_wordnet || !unknown.categories.is_empty() {
        problems.push("unknown lemma reported as present".into());
    }
    if load > Duration::from_secs(10) {
        problems.push(format!("load took {load:.2?}"));
    }
    if per_lookup > Duration::from_millis(1) {
        problems.push(format!("lookup took {per_lookup:.2?}"));
    }
    let detail = format!(
        "WordNet {}: washington -> {:?}; load {load:.2?}, lookup {per_lookup:.2?}",
        db.version(),
        wash.categories
    );
    if problems.is_empty() {
        Pass(detail)
    } else {
        Fail(format!("{detail}; {}", problems.join("; ")))
    }
}

fn mini_config(out: &Path) -> PipelineConfig {
    PipelineConfig {
        corpus: common::mini_corpus(),
        out: out.to_path_buf(),
        ..PipelineConfig::default()
    }
}

fn end_to_end() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let start = Instant::now();
    let ra = match run_pipeline(&mini_config(&a)) {
        Ok(r) => r,
        Err(e) => return Fail(e.to_string()),
    };
    let elapsed = start.elapsed();
    if let Err(e) = run_pipeline(&mini_config(&b)) {
        return Fail(e.to_string());
    }
    let mut problems = Vec::new();
    for path in &ra.artifacts {
        let name = path.file_name().unwrap();
        if name != "metadata.json" && fs::read(path).ok() != fs::read(b.join(name)).ok() {
            problems.push(format!("{} differs between runs", name.to_string_lossy()));
        }
    }
    let sizes: Vec<usize> = ra.key_terms.iter().map(|k| k.len()).collect();
    if ra.key_terms.iter().any(|k| k.len() >= k.vocabulary_size) {
        problems.push("a scheme removed nothing".into());
    }
    let want = [golden::TFIDF, golden::TFDF, golden::TF2];
    if ra.vocabulary_size != golden::VOCABULARY || sizes != want || ra.joint.len() != golden::JOINT {
        problems.push(format!(
            "sizes {}/{sizes:?}/{} differ from golden {}/{want:?}/{}",
            ra.vocabulary_size,
            ra.joint.len(),
            golden::VOCABULARY,
            golden::JOINT
        ));
    }
    if elapsed > Duration::from_secs(5) {
        problems.push(format!("run took {elapsed:.2?}"));
    }
    let pcts: Vec<String> = ra
        .rows
        .iter()
        .map(|r| format!("{} {}%", r.scheme, r.removed_pct))
        .collect();
    let detail = format!(
        "{} terms, KD {sizes:?}, joint {}, removed [{}], run {elapsed:.2?}",
        ra.vocabulary_size,
        ra.joint.len(),
        pcts.join(", ")
    );
    if problems.is_empty() {
        Pass(detail)
    } else {
        Fail(format!("{detail}; {}", problems.join("; ")))
    }
}

fn stage_order() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let wn = tmp.path().join("wordnet");
    MiniWordNet::standard().write(&wn).unwrap();
    let mut seen = Vec::new();
    for (policy, expected) in [
        (WordNetPolicy::AnnotateOnly, vec![1, 2, 3, 4, 5, 6, 7]),
        (WordNetPolicy::FilterNonwordnet, vec![1, 2, 3, 4, 5, 6, 7]),
        (WordNetPolicy::Off, vec![1, 2, 3, 5, 6, 7]),
    ] {
        let mut c = mini_config(&tmp.path().join(policy.as_str()));
        c.wordnet_dir = Some(wn.clone());
        c.wordnet_policy = policy;
        let steps: Vec<u8> = match run_pipeline(&c) {
            Ok(r) => r.stages.iter().filter_map(|s| s.step()).collect(),
            Err(e) => return Fail(e.to_string()),
        };
        if steps != expected {
            return Fail(format!("{policy}: steps {steps:?}, expected {expected:?}"));
        }
        seen.push(format!("{policy} {steps:?}"));
    }
    Pass(seen.join("; "))
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 8] = [
        ("percentage-removed formula", percentage_formula),
        ("porter reference fixture", porter_fixture),
        ("weighting brute-force oracle", weighting_oracle),
        ("algebraic identities", algebraic_identities),
        ("selection monotonicity and joint containment", selection_monotonicity),
        ("wordnet parsing and lookup", wordnet_lookup),
        ("end-to-end determinism and reduction", end_to_end),
        ("pipeline stage order", stage_order),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let (status, detail) = match check() {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Skip(d) => ("SKIP", d),
        };
        println!("criterion {} [{status}] {name}: {detail}", n + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
