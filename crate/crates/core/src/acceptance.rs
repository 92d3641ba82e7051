//! The acceptance suite: twelve property checks, each with a pinned
//! tolerance, run from a single seed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

use crate::closures::{hwm_hadamard, hwm_sum, normalize_closed_graph};
use crate::config::RunConfig;
use crate::crosswords::{
    crossword_combine_hwm, crossword_row_col_hwm, crossword_split, encode_crossword, row_col_oracle,
    Crossword,
};
use crate::encodings::{
    anbn_hwm, check_trace_lemma, circular_trace_hwm, encode_anbn_graph, encode_circular,
    encode_string, encode_string_bare, encode_tree, is_anbn, lift_string_series,
    lift_string_series_iota_eq_tau, lift_tree_series, string_series_eval, trace_of_product,
    tree_oracle_mu, StringLinearRep, Tree, TreeLinearRep,
};
use crate::engine::{eval, Engine, EvalConfig, Hwm};
use crate::hypergraph::{Hypergraph, PortRef, RankedAlphabet, Vertex};
use crate::numeric::{rel_diff, C64, ZERO};
use crate::random::{self, Rng64};
use crate::tiling::{
    enumerate_hypergraphs, find_tilings, finite_support_hwm, is_tiling_free, tiling_hwm,
};

#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub tolerance: f64,
    pub time_limit: Option<Duration>,
    run: fn(&Ctx, &mut Tally),
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion { id: 1, name: "engine agreement", tolerance: 1e-8, time_limit: Some(Duration::from_secs(60)), run: engines },
    Criterion { id: 2, name: "string lift", tolerance: 1e-8, time_limit: None, run: string_lift },
    Criterion { id: 3, name: "iota=tau complex lift", tolerance: 1e-8, time_limit: None, run: iota_tau_lift },
    Criterion { id: 4, name: "tree lift", tolerance: 1e-8, time_limit: None, run: tree_lift },
    Criterion { id: 5, name: "circular trace", tolerance: 1e-8, time_limit: None, run: circular },
    Criterion { id: 6, name: "sum and Hadamard closures", tolerance: 1e-8, time_limit: None, run: closures },
    Criterion { id: 7, name: "closed-graph normalization", tolerance: 1e-7, time_limit: None, run: normalization },
    Criterion { id: 8, name: "trace-lemma harness", tolerance: 1e-9, time_limit: None, run: trace_lemma },
    Criterion { id: 9, name: "tiling sweep", tolerance: 0.0, time_limit: Some(Duration::from_secs(120)), run: tiling_sweep },
    Criterion { id: 10, name: "finite support and its obstruction", tolerance: 1e-8, time_limit: None, run: finite_support },
    Criterion { id: 11, name: "a^n b^n support", tolerance: 0.0, time_limit: None, run: anbn },
    Criterion { id: 12, name: "crossword factorization", tolerance: 1e-8, time_limit: None, run: crosswords },
];

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub failed: usize,
    /// Largest discrepancy seen, in the criterion's own measure.
    pub worst: f64,
    pub tolerance: f64,
    pub elapsed: Duration,
    pub time_limit: Option<Duration>,
    /// The first few failing cases.
    pub failures: Vec<String>,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {:<36} {}  cases={} failed={} worst={:.3e} tol={:.0e} time={:.2}s",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.cases,
            self.failed,
            self.worst,
            self.tolerance,
            self.elapsed.as_secs_f64(),
        )?;
        if let Some(limit) = self.time_limit {
            write!(f, " limit={}s", limit.as_secs())?;
        }
        Ok(())
    }
}

struct Ctx {
    seed: u64,
    tol: f64,
    eval: EvalConfig,
}

impl Ctx {
    fn rng(&self, salt: u64) -> Rng64 {
        random::rng(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

const MAX_REPORTED: usize = 5;

#[derive(Default)]
struct Tally {
    cases: usize,
    failed: usize,
    worst: f64,
    failures: Vec<String>,
}

impl Tally {
    fn fail(&mut self, msg: String) {
        self.cases += 1;
        self.failed += 1;
        if self.failures.len() < MAX_REPORTED {
            self.failures.push(msg);
        }
    }

    /// Records `err`, failing the case when it is not within `tol`.
    fn check(&mut self, err: f64, tol: f64, what: impl FnOnce() -> String) {
        if err.is_nan() || err > tol {
            self.worst = if err.is_nan() { f64::NAN } else { self.worst.max(err) };
            self.fail(format!("{} (error {err:.3e})", what()));
        } else {
            self.cases += 1;
            self.worst = self.worst.max(err);
        }
    }

    fn record(&mut self, outcome: Result<f64, String>, tol: f64, what: impl FnOnce() -> String) {
        match outcome {
            Ok(err) => self.check(err, tol, what),
            Err(e) => self.fail(format!("{}: {e}", what())),
        }
    }
}

/// Runs one criterion.
pub fn run_criterion(c: &Criterion, cfg: &RunConfig) -> CriterionReport {
    let ctx = Ctx {
        seed: cfg.seed.wrapping_add(c.id as u64),
        // Exact criteria keep their zero tolerance under an override.
        tol: if c.tolerance == 0.0 { 0.0 } else { cfg.tolerance_or(c.tolerance) },
        eval: cfg.eval_config(),
    };
    let start = Instant::now();
    let mut tally = Tally::default();
    (c.run)(&ctx, &mut tally);
    let elapsed = start.elapsed();
    let in_time = c.time_limit.is_none_or(|l| elapsed <= l);
    if !in_time {
        tally.failures.push(format!("took {:.1}s", elapsed.as_secs_f64()));
    }
    CriterionReport {
        id: c.id,
        name: c.name,
        passed: tally.failed == 0 && tally.cases > 0 && in_time,
        cases: tally.cases,
        failed: tally.failed,
        worst: tally.worst,
        tolerance: ctx.tol,
        elapsed,
        time_limit: c.time_limit,
        failures: tally.failures,
    }
}

/// Runs every criterion, on `cfg.workers` threads when set.
pub fn run_all(cfg: &RunConfig) -> Vec<CriterionReport> {
    let go = || CRITERIA.iter().map(|c| run_criterion(c, cfg)).collect();
    match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(go),
        None => go(),
    }
}

fn err_string<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn value(m: &Hwm, g: &Hypergraph, engine: Engine, cfg: &EvalConfig) -> Result<C64, String> {
    eval(m, g, engine, cfg).map(|r| r.value).map_err(err_string)
}

fn random_word(rng: &mut Rng64, symbols: &[&str], min: usize, max: usize) -> Vec<String> {
    let n = rng.random_range(min..=max);
    (0..n)
        .map(|_| symbols[rng.random_range(0..symbols.len())].to_string())
        .collect()
}

fn random_string_rep(rng: &mut Rng64, d: usize, complex: bool) -> StringLinearRep {
    let v = |rng: &mut Rng64| DVector::from_fn(d, |_, _| random::scalar(rng, complex));
    let iota = v(rng);
    let tau = v(rng);
    let matrices = ["a", "b"]
        .into_iter()
        .map(|s| (s.to_string(), DMatrix::from_fn(d, d, |_, _| random::scalar(rng, complex))))
        .collect();
    StringLinearRep::new(iota, tau, matrices).expect("shapes agree")
}

/// Leaf `a`, unary `g`, binary `f`.
const TREE_SYMBOLS: [(&str, usize); 3] = [("a", 0), ("g", 1), ("f", 2)];

fn random_tree(rng: &mut Rng64, budget: usize) -> Tree {
    let options: Vec<(&str, usize)> = TREE_SYMBOLS
        .iter()
        .copied()
        .filter(|&(_, r)| r < budget)
        .collect();
    let (label, rank) = options[rng.random_range(0..options.len())];
    let mut left = budget - 1 - rank;
    let mut children = Vec::with_capacity(rank);
    for _ in 0..rank {
        let extra = if left == 0 { 0 } else { rng.random_range(0..=left) };
        left -= extra;
        children.push(random_tree(rng, 1 + extra));
    }
    Tree::node(label, children)
}

fn random_tree_rep(rng: &mut Rng64, d: usize) -> TreeLinearRep {
    let lambda = random::alpha(rng, d, false);
    let mu = TREE_SYMBOLS
        .iter()
        .map(|&(s, r)| (s.to_string(), random::tensor(rng, r + 1, d, 1.0, false)))
        .collect();
    TreeLinearRep::new(lambda, mu).expect("dense tensors of matching dimension")
}

/// Random alphabet and graph with at most `max_ports` ports.
fn small_graph(rng: &mut Rng64, max_ports: usize) -> Hypergraph {
    loop {
        let alphabet = random::alphabet(rng, 2, 3);
        let n = rng.random_range(1..=4);
        let g = random::hypergraph(rng, &alphabet, n, 3);
        if g.port_count() <= max_ports {
            return g;
        }
    }
}

fn random_model(rng: &mut Rng64, alphabet: &RankedAlphabet, max_dim: usize) -> Hwm {
    let d = rng.random_range(1..=max_dim);
    let complex = rng.random_bool(0.5);
    let alg = random::dense_algebra(rng, d, complex);
    random::hwm(rng, alphabet, alg, 0.7, complex)
}

fn engines(ctx: &Ctx, t: &mut Tally) {
    let mut rng = ctx.rng(1);
    let cases: Vec<(Hwm, Hypergraph)> = (0..200)
        .map(|_| {
            let g = small_graph(&mut rng, 8);
            let m = if rng.random_bool(0.35) {
                let d = rng.random_range(1..=3);
                let complex = rng.random_bool(0.5);
                random::identity_hwm(&mut rng, g.alphabet(), d, complex)
            } else {
                random_model(&mut rng, g.alphabet(), 3)
            };
            (m, g)
        })
        .collect();
    let outcomes: Vec<Result<f64, String>> = cases
        .par_iter()
        .map(|(m, g)| {
            let reference = value(m, g, Engine::Naive, &ctx.eval)?;
            let mut worst: f64 = 0.0;
            for engine in [Engine::Factored, Engine::Support, Engine::GammaId, Engine::Auto] {
                if engine == Engine::GammaId && !m.algebra().is_identity_ones() {
                    continue;
                }
                let v = value(m, g, engine, &ctx.eval).map_err(|e| format!("{engine}: {e}"))?;
                worst = worst.max(rel_diff(v, reference));
            }
            Ok(worst)
        })
        .collect();
    for (i, o) in outcomes.into_iter().enumerate() {
        t.record(o, ctx.tol, || format!("pair {i}"));
    }
}

fn string_corpus(ctx: &Ctx) -> Vec<(StringLinearRep, Vec<Vec<String>>)> {
    let mut rng = ctx.rng(2);
    (0..100)
        .map(|_| {
            let d = rng.random_range(1..=4);
            let rep = random_string_rep(&mut rng, d, false);
            let words = (0..5).map(|_| random_word(&mut rng, &["a", "b"], 0, 6)).collect();
            (rep, words)
        })
        .collect()
}

fn string_lift(ctx: &Ctx, t: &mut Tally) {
    for (i, (rep, words)) in string_corpus(ctx).iter().enumerate() {
        let m = lift_string_series(rep);
        for w in words {
            let outcome = (|| {
                let g = encode_string(w).map_err(err_string)?;
                let got = value(&m, &g, Engine::Auto, &ctx.eval)?;
                let want = string_series_eval(rep, w).map_err(err_string)?;
                Ok(rel_diff(got, want))
            })();
            t.record(outcome, ctx.tol, || format!("rep {i}, word {:?}", w.concat()));
        }
    }
}

fn iota_tau_lift(ctx: &Ctx, t: &mut Tally) {
    for (i, (rep, words)) in string_corpus(ctx).iter().enumerate() {
        let lift = match lift_string_series_iota_eq_tau(rep, ctx.seed.wrapping_add(i as u64)) {
            Ok(l) => l,
            Err(e) => {
                t.fail(format!("rep {i}: {e}"));
                continue;
            }
        };
        for w in words.iter().filter(|w| !w.is_empty()) {
            let outcome = (|| {
                let g = encode_string_bare(w).map_err(err_string)?;
                let got = value(&lift.model, &g, Engine::Auto, &ctx.eval)?;
                let want = string_series_eval(rep, w).map_err(err_string)?;
                Ok(rel_diff(got, want))
            })();
            t.record(outcome, ctx.tol, || format!("rep {i}, word {:?}", w.concat()));
        }
    }
}

fn tree_lift(ctx: &Ctx, t: &mut Tally) {
    let mut rng = ctx.rng(4);
    for i in 0..100 {
        let d = rng.random_range(1..=3);
        let rep = random_tree_rep(&mut rng, d);
        let m = lift_tree_series(&rep);
        for _ in 0..5 {
            let size = rng.random_range(1..=8);
            let tree = random_tree(&mut rng, size);
            let outcome = (|| {
                let g = encode_tree(&tree).map_err(err_string)?;
                let got = value(&m, &g, Engine::Auto, &ctx.eval)?;
                let want = tree_oracle_mu(&rep, &tree).map_err(err_string)?;
                Ok(rel_diff(got, want))
            })();
            t.record(outcome, ctx.tol, || format!("rep {i}, tree {tree}"));
        }
    }
}

fn circular(ctx: &Ctx, t: &mut Tally) {
    let mut rng = ctx.rng(5);
    for i in 0..50 {
        let d = rng.random_range(1..=3);
        let mats: BTreeMap<String, DMatrix<C64>> = ["a", "b"]
            .into_iter()
            .map(|s| (s.to_string(), DMatrix::from_fn(d, d, |_, _| random::scalar(&mut rng, true))))
            .collect();
        let m = circular_trace_hwm(&mats).expect("shared dimension");
        for _ in 0..5 {
            let w = random_word(&mut rng, &["a", "b"], 1, 6);
            let outcome = (|| {
                let got = value(&m, &encode_circular(&w).map_err(err_string)?, Engine::Auto, &ctx.eval)?;
                let want = trace_of_product(&mats, &w).map_err(err_string)?;
                let mut err = rel_diff(got, want);
                for r in 1..w.len() {
                    let mut rotated = w.clone();
                    rotated.rotate_left(r);
                    let g = encode_circular(&rotated).map_err(err_string)?;
                    err = err.max(rel_diff(value(&m, &g, Engine::Auto, &ctx.eval)?, got));
                }
                Ok(err)
            })();
            t.record(outcome, ctx.tol, || format!("family {i}, word {:?}", w.concat()));
        }
    }
}

fn closures(ctx: &Ctx, t: &mut Tally) {
    let mut rng = ctx.rng(6);
    for i in 0..100 {
        let g = loop {
            let g = small_graph(&mut rng, 8);
            if g.is_connected() {
                break g;
            }
        };
        let a = random_model(&mut rng, g.alphabet(), 2);
        let b = random_model(&mut rng, g.alphabet(), 2);
        let outcome = (|| {
            let s = hwm_sum(&a, &b).map_err(err_string)?;
            let va = value(&a, &g, Engine::Auto, &ctx.eval)?;
            let vb = value(&b, &g, Engine::Auto, &ctx.eval)?;
            let vs = value(&s, &g, Engine::Auto, &ctx.eval)?;
            Ok((vs - va - vb).norm() / 1f64.max(va.norm()).max(vb.norm()))
        })();
        t.record(outcome, ctx.tol, || format!("sum case {i}"));
    }
    let mut disconnected = 0;
    for i in 0..100 {
        let g = small_graph(&mut rng, 8);
        disconnected += usize::from(!g.is_connected());
        let a = random_model(&mut rng, g.alphabet(), 2);
        let b = random_model(&mut rng, g.alphabet(), 2);
        let outcome = (|| {
            let h = hwm_hadamard(&a, &b).map_err(err_string)?;
            let va = value(&a, &g, Engine::Auto, &ctx.eval)?;
            let vb = value(&b, &g, Engine::Auto, &ctx.eval)?;
            let vh = value(&h, &g, Engine::Auto, &ctx.eval)?;
            Ok((vh - va * vb).norm() / 1f64.max((va * vb).norm()))
        })();
        t.record(outcome, ctx.tol, || format!("Hadamard case {i}"));
    }
    if disconnected == 0 {
        t.fail("no disconnected graph among the Hadamard cases".into());
    }
}

/// Random graph whose hyperedges all have two ports.
fn binary_graph(rng: &mut Rng64, alphabet: &RankedAlphabet) -> Hypergraph {
    use rand::seq::SliceRandom;
    let symbols: Vec<(&str, usize)> = alphabet.symbols().collect();
    loop {
        let n = rng.random_range(1..=4);
        let vertices: Vec<Vertex> = (1..=n)
            .map(|i| Vertex::new(format!("v{i}"), symbols[rng.random_range(0..symbols.len())].0))
            .collect();
        let mut ports: Vec<PortRef> = vertices
            .iter()
            .flat_map(|v| {
                (1..=alphabet.arity(&v.label).unwrap()).map(move |s| PortRef::new(v.id.clone(), s))
            })
            .collect();
        if ports.len() % 2 == 1 || ports.len() > 8 {
            continue;
        }
        ports.shuffle(rng);
        let edges = ports.chunks(2).map(<[PortRef]>::to_vec).collect();
        return Hypergraph::new(alphabet.clone(), vertices, edges).expect("valid by construction");
    }
}

fn normalization(ctx: &Ctx, t: &mut Tally) {
    let mut rng = ctx.rng(7);
    for i in 0..50 {
        let alphabet = random::alphabet(&mut rng, 2, 3);
        let d = rng.random_range(1..=3);
        let alg = random::dense_algebra(&mut rng, d, false);
        let m = random::hwm(&mut rng, &alphabet, alg, 0.8, false);
        let g = binary_graph(&mut rng, &alphabet);
        let outcome = (|| {
            let n = normalize_closed_graph(&m, 1e-12).map_err(err_string)?;
            let want = value(&m, &g, Engine::Auto, &ctx.eval)?;
            let got = value(&n, &g, Engine::Auto, &ctx.eval)?;
            Ok(rel_diff(got, want))
        })();
        t.record(outcome, ctx.tol, || format!("model {i}"));
    }
}

/// Generic, nilpotent conjugated by an orthogonal matrix, or nilpotent
/// plus a block with a nonzero eigenvalue.
fn trace_lemma_matrix(rng: &mut Rng64, kind: usize, d: usize) -> DMatrix<f64> {
    match kind {
        0 => random::gaussian_matrix(rng, d),
        _ => {
            let mut n = DMatrix::from_fn(d, d, |i, j| if j > i { random::gaussian(rng) } else { 0.0 });
            if kind == 2 {
                let lambda: f64 = rng.random_range(0.5..2.0);
                n[(0, 0)] = if rng.random_bool(0.5) { lambda } else { -lambda };
            }
            let p = random::orthogonal(rng, d);
            &p * n * p.transpose()
        }
    }
}

fn trace_lemma(ctx: &Ctx, t: &mut Tally) {
    let mut rng = ctx.rng(8);
    let mut premises = 0;
    for i in 0..10_000 {
        let d = rng.random_range(1..=6);
        let m = trace_lemma_matrix(&mut rng, i % 3, d);
        match check_trace_lemma(&m, d + 1, ctx.tol) {
            Ok(r) => {
                premises += usize::from(r.premise_holds);
                if r.is_counterexample() {
                    t.fail(format!("matrix {i}: traces {:?}", r.traces));
                } else {
                    t.check(0.0, 0.0, String::new);
                }
            }
            Err(e) => t.fail(format!("matrix {i}: {e}")),
        }
    }
    t.worst = t.failed as f64;
    if premises == 0 {
        t.fail("the premise never held; the harness tests nothing".into());
    }
}

fn tiling_sweep(ctx: &Ctx, t: &mut Tally) {
    let alphabet = RankedAlphabet::new([("a", 1), ("b", 2)]).expect("distinct");
    let graphs = enumerate_hypergraphs(&alphabet, 4);
    type Outcome = (usize, usize, Result<f64, String>);
    let outcomes: Vec<Vec<Outcome>> = graphs
        .par_iter()
        .enumerate()
        .map(|(j, hat)| {
            let m = tiling_hwm(hat, C64::new(1.0, 0.0));
            graphs
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let outcome = (|| {
                        let count = find_tilings(g, hat, usize::MAX).map_err(err_string)?.maps.len();
                        let v = value(&m, g, Engine::Support, &ctx.eval)?;
                        let exact = v == C64::new(count as f64, 0.0);
                        if (v != ZERO) != (count > 0) {
                            return Err(format!("value {v} but {count} tiling maps"));
                        }
                        Ok(if exact { 0.0 } else { (v - count as f64).norm() })
                    })();
                    (i, j, outcome)
                })
                .collect()
        })
        .collect();
    for (i, j, o) in outcomes.into_iter().flatten() {
        t.record(o, 0.0, || format!("G #{i} on template #{j}"));
    }
}

fn rooted_tree(text: &str) -> Hypergraph {
    encode_tree(&crate::encodings::parse_tree(text).expect("literal")).expect("literal")
}

fn finite_support(ctx: &Ctx, t: &mut Tally) {
    // Obstruction on circular strings.
    let ab = encode_circular(&["a", "b"]).expect("literal");
    let abab = encode_circular(&["a", "b", "a", "b"]).expect("literal");
    match value(&tiling_hwm(&ab, C64::new(1.0, 0.0)), &abab, Engine::Support, &ctx.eval) {
        Ok(v) if v != ZERO => t.check(0.0, ctx.tol, String::new),
        Ok(_) => t.fail("circular abab evaluates to zero under the ab tiling model".into()),
        Err(e) => t.fail(format!("circular obstruction: {e}")),
    }
    // Finite support on rooted trees.
    let listed = ["a", "g(a)", "f(a,a)", "g(g(a))", "f(g(a),a)"];
    let values = [2.0, 3.0, 5.0, 7.0, 11.0];
    let others = ["g(f(a,a))", "f(a,g(a))", "g(g(g(a)))", "f(f(a,a),a)"];
    let all: Vec<Hypergraph> = listed.iter().chain(&others).map(|s| rooted_tree(s)).collect();
    match is_tiling_free(&all) {
        Ok(None) => {}
        Ok(Some(w)) => t.fail(format!("family is not tiling free: {w:?}")),
        Err(e) => t.fail(format!("tiling freeness: {e}")),
    }
    let pairs: Vec<(Hypergraph, C64)> = all
        .iter()
        .zip(values)
        .map(|(g, y)| (g.clone(), C64::new(y, 0.0)))
        .collect();
    let m = match finite_support_hwm(&pairs) {
        Ok(m) => m,
        Err(e) => {
            t.fail(format!("finite support model: {e}"));
            return;
        }
    };
    for (k, g) in all.iter().enumerate() {
        let want = values.get(k).map_or(ZERO, |&y| C64::new(y, 0.0));
        let name = listed.iter().chain(&others).nth(k).copied().unwrap_or_default();
        let outcome = value(&m, g, Engine::Support, &ctx.eval).map(|v| rel_diff(v, want));
        t.record(outcome, ctx.tol, || format!("tree {name}"));
    }
}

fn anbn(ctx: &Ctx, t: &mut Tally) {
    let m = anbn_hwm();
    let mut support = BTreeSet::new();
    for len in (2..=8).step_by(2) {
        for bits in 0u32..(1 << len) {
            let w: Vec<&str> = (0..len).map(|i| if bits >> (len - 1 - i) & 1 == 1 { "b" } else { "a" }).collect();
            let outcome = (|| {
                let g = encode_anbn_graph(&w).map_err(err_string)?;
                let f = value(&m, &g, Engine::Factored, &ctx.eval)?;
                let s = value(&m, &g, Engine::Support, &ctx.eval)?;
                if f != s {
                    return Err(format!("engines disagree: {f} vs {s}"));
                }
                if f != ZERO {
                    support.insert(w.concat());
                }
                Ok(if (f != ZERO) == is_anbn(&w) { 0.0 } else { 1.0 })
            })();
            t.record(outcome, 0.0, || format!("word {}", w.concat()));
        }
    }
    let expected: BTreeSet<String> = ["ab", "aabb", "aaabbb", "aaaabbbb"].iter().map(|s| s.to_string()).collect();
    if support != expected {
        t.fail(format!("support {support:?}"));
    }
}

fn random_crossword(rng: &mut Rng64) -> Crossword {
    let (m, n) = (rng.random_range(1..=3), rng.random_range(1..=3));
    Crossword::new(
        (0..m)
            .map(|_| (0..n).map(|_| if rng.random_bool(0.5) { "a" } else { "b" }.to_string()).collect())
            .collect(),
    )
    .expect("nonempty rectangle")
}

fn crosswords(ctx: &Ctx, t: &mut Tally) {
    let mut rng = ctx.rng(12);
    let sigma = RankedAlphabet::new([("a", 2), ("b", 2)]).expect("distinct");
    for i in 0..30 {
        let a = random_model(&mut rng, &sigma, 2);
        let b = random_model(&mut rng, &sigma, 2);
        let w = random_crossword(&mut rng);
        let outcome = (|| {
            let c = crossword_combine_hwm(&a, &b).map_err(err_string)?;
            let (h, v) = crossword_split(&w);
            let got = value(&c, &encode_crossword(&w), Engine::Auto, &ctx.eval)?;
            let want = value(&a, &h, Engine::Auto, &ctx.eval)? * value(&b, &v, Engine::Auto, &ctx.eval)?;
            Ok(rel_diff(got, want))
        })();
        t.record(outcome, ctx.tol, || format!("factorization case {i}, crossword {w:?}"));
    }
    for i in 0..30 {
        let (da, db) = (rng.random_range(1..=2), rng.random_range(1..=2));
        let ra = random_string_rep(&mut rng, da, false);
        let rb = random_string_rep(&mut rng, db, false);
        let w = random_crossword(&mut rng);
        let outcome = (|| {
            let c = crossword_row_col_hwm(&ra, &rb, ctx.seed.wrapping_add(i)).map_err(err_string)?;
            let got = value(&c, &encode_crossword(&w), Engine::Auto, &ctx.eval)?;
            let want = row_col_oracle(&ra, &rb, &w).map_err(err_string)?;
            Ok(rel_diff(got, want))
        })();
        t.record(outcome, ctx.tol, || format!("row-column case {i}, crossword {w:?}"));
    }
}
