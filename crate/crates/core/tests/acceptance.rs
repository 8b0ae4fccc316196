//! Acceptance criteria. Runs as a plain binary (`harness = false`) so that
//! it prints exactly one PASS/FAIL line per criterion; any failure makes the
//! process exit non-zero and fails `cargo test`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spamkit_core::classifiers::lr::LrObjective;
use spamkit_core::classifiers::nb::train_nb;
use spamkit_core::classifiers::svm::train_svm;
use spamkit_core::featurizer::{chi_square, odds_ratio, ContingencyCounts, ScoredTerm};
use spamkit_core::metrics::auc;
use spamkit_core::normalizer::inject_teencode;
use spamkit_core::{
    build_feature_space, evaluate, generate_synthetic, stratified_split, Classifier, Corpus, EvalReport, FeatureSpace,
    FeatureVector, Hyperparameters, Label, Lexicon, LexiconKind, ModelKind, NormalizationMap, Preprocessor, Selector,
    SyntheticSpec, TokenizedReview, TrainedModel,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

// 1 -------------------------------------------------------------------------

fn formula_oracles() -> Outcome {
    let chi = [((5, 5, 5, 5), 0.0), ((10, 0, 0, 10), 20.0), ((4, 1, 2, 8), 5.0)];
    for ((a, b, c, d), want) in chi {
        let got = chi_square(&ContingencyCounts::new(a, b, c, d));
        ensure(close(got, want, 1e-12), || format!("chi2({a},{b},{c},{d}) = {got}, want {want}"))?;
    }
    let or = [((5, 5, 5, 5), 1.0), ((10, 1, 1, 10), 100.0)];
    for ((a, b, c, d), want) in or {
        let got = odds_ratio(&ContingencyCounts::new(a, b, c, d));
        ensure(close(got, want, 1e-12), || format!("OR({a},{b},{c},{d}) = {got}, want {want}"))?;
    }
    Ok("3 chi-square and 2 odds-ratio values exact to 1e-12".into())
}

// 2 -------------------------------------------------------------------------

fn complement_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_chi: f64 = 0.0;
    let mut worst_or: f64 = 0.0;
    for _ in 0..1000 {
        let cells = ContingencyCounts::new(
            rng.gen_range(1..200),
            rng.gen_range(1..200),
            rng.gen_range(1..200),
            rng.gen_range(1..200),
        );
        let comp = cells.complement();
        worst_chi = worst_chi.max(rel_err(chi_square(&cells), chi_square(&comp)));
        worst_or = worst_or.max(rel_err(odds_ratio(&comp), 1.0 / odds_ratio(&cells)));
    }
    ensure(worst_chi <= 1e-9, || format!("chi2 symmetry rel err {worst_chi:e}"))?;
    ensure(worst_or <= 1e-9, || format!("OR reciprocal rel err {worst_or:e}"))?;
    Ok(format!("1000 tables; max rel err chi2 {worst_chi:.1e}, OR {worst_or:.1e}"))
}

// 3 -------------------------------------------------------------------------

fn random_labels(rng: &mut ChaCha8Rng, n: usize) -> Vec<Label> {
    let mut y: Vec<Label> = (0..n)
        .map(|_| if rng.gen::<bool>() { Label::Spam } else { Label::NonSpam })
        .collect();
    y[0] = Label::Spam;
    y[1] = Label::NonSpam;
    y
}

fn lr_gradient_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let dim = rng.gen_range(1..=10);
        let n = rng.gen_range(2..=20);
        let x: Vec<FeatureVector> = (0..n)
            .map(|_| FeatureVector((0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect()))
            .collect();
        let y = random_labels(&mut rng, n);
        let lambda = rng.gen_range(0.0..1.0);
        let obj = LrObjective::new(&x, &y, lambda);
        let params: Vec<f64> = (0..=dim).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let analytic = obj.gradient(&params);
        let numeric: Vec<f64> = (0..=dim)
            .map(|j| {
                let mut up = params.clone();
                let mut down = params.clone();
                up[j] += h;
                down[j] -= h;
                (obj.value(&up) - obj.value(&down)) / (2.0 * h)
            })
            .collect();
        let diff = analytic.iter().zip(&numeric).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let scale = analytic.iter().chain(&numeric).map(|v| v.abs()).fold(0.0, f64::max);
        let err = if scale == 0.0 { diff } else { diff / scale };
        worst = worst.max(err);
    }
    ensure(worst <= 1e-4, || format!("max relative gradient error {worst:e}"))?;
    Ok(format!("100 problems; max relative error {worst:.1e} (h = 1e-5)"))
}

// 4 -------------------------------------------------------------------------

fn gaussian_density(x: f64, mean: f64, var: f64) -> f64 {
    (-(x - mean) * (x - mean) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

fn nb_brute_force() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for _ in 0..100 {
        let dim = rng.gen_range(1..=3);
        let n = rng.gen_range(4..=20);
        let x: Vec<FeatureVector> = (0..n)
            .map(|_| FeatureVector((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()))
            .collect();
        let y = random_labels(&mut rng, n);
        let m = train_nb(&x, &y, 1e-9).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let q: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let joint = |label: Label| {
                let c = m.class(label);
                c.prior
                    * q.iter()
                        .enumerate()
                        .map(|(j, &v)| gaussian_density(v, c.mean[j], c.variance[j]))
                        .product::<f64>()
            };
            let (js, jn) = (joint(Label::Spam), joint(Label::NonSpam));
            if js + jn == 0.0 {
                continue;
            }
            let brute = js / (js + jn);
            let (ps, pn) = m.posteriors(&FeatureVector(q.clone())).map_err(|e| e.to_string())?;
            worst = worst.max((ps - brute).abs());
            worst_sum = worst_sum.max((ps + pn - 1.0).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("posterior deviates from direct Bayes rule by {worst:e}"))?;
    ensure(worst_sum <= 1e-12, || format!("posteriors sum off by {worst_sum:e}"))?;
    Ok(format!("100 problems x 10 queries; max |err| {worst:.1e}, max |sum-1| {worst_sum:.1e}"))
}

// 5 -------------------------------------------------------------------------

fn svm_separable() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for i in 0..40 {
        let spam = i % 2 == 0;
        let x1 = if spam { rng.gen_range(1.0..3.0) } else { rng.gen_range(-3.0..-1.0) };
        x.push(FeatureVector(vec![x1, rng.gen_range(-2.0..2.0)]));
        y.push(if spam { Label::Spam } else { Label::NonSpam });
    }
    let model = |seed| -> Result<TrainedModel, String> {
        let svm = train_svm(&x, &y, 0.01, 200, seed).map_err(|e| e.to_string())?;
        let terms = ["x1", "x2"]
            .iter()
            .map(|t| ScoredTerm { term: t.to_string(), score: 1.0, doc_freq: 1 })
            .collect();
        let space = FeatureSpace::from_parts(terms, vec![], vec![], 40, Selector::ChiSquare, 2).map_err(|e| e.to_string())?;
        TrainedModel::new(Classifier::Svm(svm), space, Hyperparameters::Svm { lambda: 0.01, epochs: 200 }, seed)
            .map_err(|e| e.to_string())
    };
    let a = model(11)?;
    let Classifier::Svm(svm) = a.classifier() else { unreachable!() };
    let correct = x
        .iter()
        .zip(&y)
        .filter(|(v, l)| svm.predict(v).unwrap() == **l)
        .count();
    ensure(correct == 40, || format!("training accuracy {correct}/40"))?;
    let b = model(11)?;
    ensure(a.to_text().as_bytes() == b.to_text().as_bytes(), || "same seed gave different model bytes".into())?;
    Ok(format!("accuracy 40/40, w = ({:.3}, {:.3}), b = {:.3}; identical bytes on re-run", svm.w[0], svm.w[1], svm.b))
}

// 6 -------------------------------------------------------------------------

/// ROC curve by threshold sweep, integrated with the trapezoid rule.
fn trapezoid_auc(truth: &[Label], scores: &[f64]) -> f64 {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]));
    let p = truth.iter().filter(|l| l.is_spam()).count() as f64;
    let n = truth.len() as f64 - p;
    let (mut tp, mut fp) = (0.0, 0.0);
    let (mut prev_tpr, mut prev_fpr) = (0.0, 0.0);
    let mut area = 0.0;
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if truth[order[i]].is_spam() {
                tp += 1.0;
            } else {
                fp += 1.0;
            }
            i += 1;
        }
        let (tpr, fpr) = (tp / p, fp / n);
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_tpr = tpr;
        prev_fpr = fpr;
    }
    area
}

fn auc_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for round in 0..100 {
        let n = rng.gen_range(2..200);
        let truth = random_labels(&mut rng, n);
        // half the sets use coarse scores so that ties occur
        let scores: Vec<f64> = if round % 2 == 0 {
            (0..n).map(|_| rng.gen::<f64>()).collect()
        } else {
            (0..n).map(|_| rng.gen_range(0..8) as f64).collect()
        };
        let mw = auc(&truth, &scores).map_err(|e| e.to_string())?;
        worst = worst.max((mw - trapezoid_auc(&truth, &scores)).abs());
    }
    ensure(worst <= 1e-9, || format!("Mann-Whitney vs trapezoid differ by {worst:e}"))?;
    let perfect = auc(&[Label::Spam, Label::Spam, Label::NonSpam], &[0.9, 0.7, 0.2]).map_err(|e| e.to_string())?;
    ensure(perfect == 1.0, || format!("perfect ranking gave {perfect}"))?;
    let tied = auc(&[Label::Spam, Label::NonSpam, Label::NonSpam], &[0.4; 3]).map_err(|e| e.to_string())?;
    ensure(tied == 0.5, || format!("all-tied scores gave {tied}"))?;
    Ok(format!("100 score sets; max |MW - trapezoid| {worst:.1e}; perfect = 1, tied = 0.5"))
}

// 7-9: end-to-end experiments on the synthetic corpus ----------------------

struct Experiment {
    train: Vec<TokenizedReview>,
    test: Vec<TokenizedReview>,
    test_corpus: Corpus,
    pre: Preprocessor,
}

const GEN_SEED: u64 = 7;
const SPLIT_SEED: u64 = 42;
const TRAIN_SEED: u64 = 42;

fn experiment() -> Result<Experiment, String> {
    let corpus = generate_synthetic(500, &SyntheticSpec::default(), GEN_SEED).map_err(|e| e.to_string())?;
    let (train, test) = stratified_split(&corpus, 0.5, SPLIT_SEED).map_err(|e| e.to_string())?;
    let pre = Preprocessor::builtin();
    Ok(Experiment {
        train: pre.tokenize_corpus(&train),
        test: pre.tokenize_corpus(&test),
        test_corpus: test,
        pre,
    })
}

fn space(train: &[TokenizedReview], with_lexicons: bool) -> Result<FeatureSpace, String> {
    let opinion = Lexicon::builtin(LexiconKind::Opinion);
    let question = Lexicon::builtin(LexiconKind::Question);
    let (o, q) = if with_lexicons { (Some(&opinion), Some(&question)) } else { (None, None) };
    build_feature_space(train, Selector::ChiSquare, 500, o, q).map_err(|e| e.to_string())
}

fn run(exp_train: &[TokenizedReview], test: &[TokenizedReview], kind: ModelKind, lex: bool) -> Result<EvalReport, String> {
    let space = space(exp_train, lex)?;
    let model = TrainedModel::train(space, exp_train, Hyperparameters::defaults(kind), TRAIN_SEED).map_err(|e| e.to_string())?;
    evaluate(&model, test).map_err(|e| e.to_string())
}

fn end_to_end(exp: &Experiment) -> Outcome {
    let mut parts = Vec::new();
    for kind in [ModelKind::Svm, ModelKind::Logistic, ModelKind::NaiveBayes] {
        let r = run(&exp.train, &exp.test, kind, true)?;
        ensure(r.n == 500, || format!("test half has {} reviews", r.n))?;
        ensure(r.spam.f1 >= 0.95, || format!("{kind}: F1 {:.4} < 0.95", r.spam.f1))?;
        parts.push(format!("{kind} F1 {:.4} AUC {:.4}", r.spam.f1, r.auc));
    }
    Ok(format!("1000 reviews, 1:1 split, chi2 k=500: {}", parts.join("; ")))
}

fn lexicon_features_help(exp: &Experiment) -> Outcome {
    let with = run(&exp.train, &exp.test, ModelKind::Svm, true)?;
    let without = run(&exp.train, &exp.test, ModelKind::Svm, false)?;
    ensure(with.spam.f1 >= without.spam.f1, || {
        format!("SVM F1 with lexicons {:.4} < without {:.4}", with.spam.f1, without.spam.f1)
    })?;
    Ok(format!("SVM F1 with lexicon features {:.4} >= without {:.4}", with.spam.f1, without.spam.f1))
}

fn normalization_helps(exp: &Experiment) -> Outcome {
    let map = NormalizationMap::builtin();
    let noisy = inject_teencode(&exp.test_corpus, &map, 0.3, 9).map_err(|e| e.to_string())?;
    let (mut changed, mut total) = (0usize, 0usize);
    for (a, b) in exp.test_corpus.iter().zip(noisy.iter()) {
        for (x, y) in a.text.split_whitespace().zip(b.text.split_whitespace()) {
            total += 1;
            changed += usize::from(x != y);
        }
    }
    ensure(changed > 0, || "no test token was corrupted".into())?;

    let space = space(&exp.train, true)?;
    let model = TrainedModel::train(space, &exp.train, Hyperparameters::defaults(ModelKind::Svm), TRAIN_SEED)
        .map_err(|e| e.to_string())?;
    let normalized = evaluate(&model, &exp.pre.tokenize_corpus(&noisy)).map_err(|e| e.to_string())?;
    let raw = evaluate(&model, &exp.pre.without_normalization().tokenize_corpus(&noisy)).map_err(|e| e.to_string())?;
    ensure(normalized.spam.f1 >= raw.spam.f1, || {
        format!("SVM F1 normalized {:.4} < raw {:.4}", normalized.spam.f1, raw.spam.f1)
    })?;
    Ok(format!(
        "{changed}/{total} test tokens rewritten; SVM F1 normalized {:.4} >= raw {:.4}",
        normalized.spam.f1, raw.spam.f1
    ))
}

// 10 ------------------------------------------------------------------------

fn round_trips(exp: &Experiment) -> Outcome {
    let corpus = generate_synthetic(200, &SyntheticSpec::default(), 10).map_err(|e| e.to_string())?;
    let tsv = corpus.to_tsv();
    let back = Corpus::parse_str(&tsv).map_err(|e| e.to_string())?;
    ensure(back == corpus && back.to_tsv() == tsv, || "corpus round trip differs".into())?;

    let space = space(&exp.train, true)?;
    let text = space.to_text();
    let back = FeatureSpace::parse_str(&text).map_err(|e| e.to_string())?;
    ensure(back == space && back.to_text() == text, || "feature space round trip differs".into())?;

    let vocab: Vec<String> = space
        .feature_names()
        .into_iter()
        .map(|n| n.trim_start_matches("opinion:").trim_start_matches("question:").to_string())
        .chain(["lạ", "xyz", "unknown"].map(String::from))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let docs: Vec<TokenizedReview> = (0..1000)
        .map(|i| {
            let len = rng.gen_range(0..40);
            let tokens = (0..len).map(|_| vocab[rng.gen_range(0..vocab.len())].clone()).collect();
            TokenizedReview::new(format!("d{i}"), tokens, None)
        })
        .collect();

    for kind in [ModelKind::Svm, ModelKind::Logistic, ModelKind::NaiveBayes] {
        let model = TrainedModel::train(space.clone(), &exp.train, Hyperparameters::defaults(kind), TRAIN_SEED)
            .map_err(|e| e.to_string())?;
        let text = model.to_text();
        let back = TrainedModel::parse_str(&text).map_err(|e| e.to_string())?;
        ensure(back == model && back.to_text() == text, || format!("{kind} model round trip differs"))?;
        for d in &docs {
            let (l1, s1) = model.predict(d).map_err(|e| e.to_string())?;
            let (l2, s2) = back.predict(d).map_err(|e| e.to_string())?;
            ensure(l1 == l2 && s1.to_bits() == s2.to_bits(), || format!("{kind} prediction differs on {}", d.id))?;
        }
    }
    Ok("corpus, feature space and svm/lr/nb models bit-exact; 1000 random docs predict identically".into())
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let exp = experiment();
    let with_exp = |f: fn(&Experiment) -> Outcome| {
        let exp = &exp;
        move || match exp {
            Ok(e) => f(e),
            Err(msg) => Err(format!("experiment setup failed: {msg}")),
        }
    };
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("C1 formula oracles", Box::new(formula_oracles)),
        ("C2 chi2 symmetry / OR reciprocal", Box::new(complement_properties)),
        ("C3 LR gradient vs finite differences", Box::new(lr_gradient_check)),
        ("C4 NB posterior vs brute-force Bayes", Box::new(nb_brute_force)),
        ("C5 SVM separable 2D set", Box::new(svm_separable)),
        ("C6 AUC Mann-Whitney vs ROC trapezoid", Box::new(auc_cross_check)),
        ("C7 end-to-end synthetic F1 >= 0.95", Box::new(with_exp(end_to_end))),
        ("C8 lexicon features do not hurt", Box::new(with_exp(lexicon_features_help))),
        ("C9 normalization does not hurt", Box::new(with_exp(normalization_helps))),
        ("C10 serialization round trips", Box::new(with_exp(round_trips))),
    ];

    let mut failures = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
