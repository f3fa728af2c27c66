//! Acceptance checks, one line per criterion.
//!
//! Runs without the libtest harness so every line is printed even when all
//! checks pass. Exits nonzero if any criterion fails.

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};
use turanlab::blowup::{aut_count_blowup, copies_in_blowup_poly, WeightedPattern};
use turanlab::constructions::{choose_a, counterexample_h};
use turanlab::counting::{automorphism_count, labeled_copies, unlabeled_copies};
use turanlab::experiments::{
    best_complete_bipartite, canonical_form, conjecture2_hypotheses, double_star,
    double_star_bookkeeping, find_threshold, muirhead_check_s, muirhead_check_x,
    muirhead_strict_expected, oracle_ex, OracleConfig, PendantProfile, Theorem1Instance,
    Theorem1Options, Theorem1Report,
};
use turanlab::graph::{
    chromatic_number, diameter, is_triangle_free, to_graph6, Distance, Graph, PartSizes,
};
use turanlab::optimizer::{maximize_density, DensityForm, DensityTerm};
use turanlab::rational::{format_rational, parse_rational, Rational};
use turanlab::{BigCount, Budget};

const ORACLE_INSTANCES: usize = 200;
const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const R3_LIMIT: Duration = Duration::from_secs(300);
const R4_LIMIT: Duration = Duration::from_secs(600);
const ZYKOV_LIMIT: Duration = Duration::from_secs(600);
/// Largest `n` scanned when looking for a threshold.
const SEARCH_CAP: u64 = 100_000;
const R4_EPS: &str = "1/20";
const MUIRHEAD_TRIALS: usize = 1000;
const GRADIENT_TOL: f64 = 1e-6;
const FD_STEP: f64 = 1e-5;
const VALUE_TOL: f64 = 1e-9;
const POINT_TOL: f64 = 1e-6;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, pass: String, fail: String) -> Outcome {
    if cond {
        Ok(pass)
    } else {
        Err(fail)
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut nonzero = 0;
    for i in 0..ORACLE_INSTANCES {
        let k = rng.random_range(1..=5);
        let h = random_graph(&mut rng, k, 0.5);
        let weights: Vec<u32> = (0..k).map(|_| rng.random_range(1..=2)).collect();
        let h = WeightedPattern::new(h, weights).unwrap();
        let m = rng.random_range(1..=5);
        let f = random_graph(&mut rng, m, 0.6);
        let s: Vec<usize> = (0..m).map(|_| rng.random_range(1..=3)).collect();
        let poly = copies_in_blowup_poly(&h, &f, Budget::unlimited()).unwrap();
        let sizes: Vec<u64> = s.iter().map(|&x| x as u64).collect();
        let fast = poly.evaluate(&sizes).unwrap();
        let host = f.blowup(&PartSizes::new(s.clone()).unwrap()).unwrap();
        let slow = labeled_copies(&h.explicit().unwrap(), &host);
        if fast != slow {
            return Err(format!(
                "instance {i}: H = {} w = {:?}, F = {}, s = {s:?}: polynomial {fast} vs explicit {slow}",
                to_graph6(h.pattern()),
                h.weights(),
                to_graph6(&f)
            ));
        }
        nonzero += usize::from(!slow.is_zero());
    }
    let t = start.elapsed();
    check(
        t < ORACLE_LIMIT,
        format!("{ORACLE_INSTANCES} instances agree ({nonzero} nonzero) in {t:.1?}"),
        format!("all instances agree but took {t:.1?} (limit {ORACLE_LIMIT:?})"),
    )
}

/// Smallest grid `n` where labeled copies beat the closed-form bound, then
/// the smallest where they beat `|Aut(H)|` times it. Both also require the
/// exact bipartite maximum (r = 3 only) to be beaten.
fn theorem1(r: usize, eps: &str, limit: Duration) -> Outcome {
    let start = Instant::now();
    let eps = parse_rational(eps).unwrap();
    let a = choose_a(r, &eps).unwrap();
    let opts = Theorem1Options {
        exact_bipartite: true,
        budget: Budget::unlimited(),
    };
    let inst = Theorem1Instance::new(r, eps.clone(), a, opts).unwrap();
    let poly_time = start.elapsed();
    let plain = find_threshold(&inst, SEARCH_CAP, Theorem1Report::outcome).unwrap();
    let scaled = find_threshold(&inst, SEARCH_CAP, |rep| {
        rep.exceeds_aut_scaled_bound && rep.exceeds_bipartite_max != Some(false)
    })
    .unwrap();
    let t = start.elapsed();
    let head = format!(
        "r = {r}, eps = {}, a = {a}, {} host terms in {poly_time:.1?}",
        format_rational(&eps),
        inst.host_polynomial().term_count()
    );
    let plain_text = match &plain {
        Some(rep) => format!(
            "labeled count beats n^{}(n/2)^{} from n = {}",
            2 * r - 2,
            2 * a,
            rep.n
        ),
        None => format!(
            "labeled count never beats n^{}(n/2)^{} up to n = {SEARCH_CAP}",
            2 * r - 2,
            2 * a
        ),
    };
    match scaled {
        Some(rep) if t < limit => Ok(format!(
            "{head}; {plain_text}; |Aut(H)|-scaled bound beaten at n = {} in {t:.1?}",
            rep.n
        )),
        Some(rep) => Err(format!(
            "{head}; threshold n = {} found but took {t:.1?}",
            rep.n
        )),
        None => {
            // Labeled copies number at most (n)_{v(H)} < n^{v(H)}, while the
            // scaled bound is |Aut(H)| / 4^a times n^{v(H)}.
            let v = (2 * r - 2) as u64 + 2 * u64::from(a);
            let at = plain.as_ref().map_or(SEARCH_CAP, |rep| rep.n);
            let rep = inst.report_with(at, false).unwrap();
            let ratio = log10_ratio(
                &Rational::from_integer(rep.labeled.clone().into()),
                &rep.aut_scaled_bound,
            );
            let scale = Rational::from_integer(inst.aut_h().clone().into())
                / Rational::from_integer(BigCount::from(4u32).pow(a).into());
            Err(format!(
                "{head}; {plain_text}; no n <= {SEARCH_CAP} beats |Aut(H)| n^{}(n/2)^{} \
                 (|Aut(H)| = {}, at n = {at} labeled / scaled bound = 10^{ratio:.1}; \
                 labeled <= n^{v} and |Aut(H)|/4^{a} = 10^{:.1} > 1, so no n can pass)",
                2 * r - 2,
                2 * a,
                inst.aut_h(),
                log10(&scale)
            ))
        }
    }
}

fn log10(x: &Rational) -> f64 {
    // Drop low bits so both parts fit an f64, remembering the shift.
    let top = |b: &num_bigint::BigInt| (b.bits() as i64 - 60).max(0);
    let (sn, sd) = (top(x.numer()), top(x.denom()));
    let num = (x.numer() >> sn as usize).to_f64().unwrap();
    let den = (x.denom() >> sd as usize).to_f64().unwrap();
    (num / den).log10() + (sn - sd) as f64 * 2f64.log10()
}

fn log10_ratio(a: &Rational, b: &Rational) -> f64 {
    log10(&(a / b))
}

fn criterion_2() -> Outcome {
    let eps = parse_rational("1/16").unwrap();
    let a = choose_a(3, &eps).unwrap();
    if a != 13 {
        return Err(format!("choose_a(3, 1/16) = {a}, expected 13"));
    }
    theorem1(3, "1/16", R3_LIMIT)
}

fn criterion_3() -> Outcome {
    theorem1(4, R4_EPS, R4_LIMIT)
}

fn random_degrees(rng: &mut ChaCha8Rng, len: usize) -> Vec<u64> {
    if rng.random_bool(0.2) {
        vec![rng.random_range(1..=20); len]
    } else {
        (0..len).map(|_| rng.random_range(1..=20)).collect()
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut tight_s, mut tight_x) = (0, 0);
    for trial in 0..MUIRHEAD_TRIALS {
        let s = rng.random_range(1..=4);
        let a: Vec<u32> = (0..s).map(|_| rng.random_range(0..=4)).collect();
        let d = random_degrees(&mut rng, s);
        let v = muirhead_check_s(&d, &a).unwrap();
        let strict = muirhead_strict_expected(&d, &a);
        if !v.outcome || v.is_tight() == strict {
            return Err(format!(
                "s-set trial {trial}: degrees {d:?}, a = {a:?}: lhs {} rhs {}",
                format_rational(&v.lhs),
                format_rational(&v.rhs)
            ));
        }
        tight_s += usize::from(v.is_tight());
    }
    for trial in 0..MUIRHEAD_TRIALS {
        let t = rng.random_range(1..=4);
        let x = rng.random_range(t..=t + 4);
        let b: Vec<u32> = (0..t).map(|_| rng.random_range(0..=4)).collect();
        let d = random_degrees(&mut rng, x);
        let v = muirhead_check_x(&d, &b, t).unwrap();
        let strict = muirhead_strict_expected(&d, &b);
        if !v.outcome || v.is_tight() == strict {
            return Err(format!(
                "X trial {trial}: degrees {d:?}, b = {b:?}: lhs {} rhs {}",
                format_rational(&v.lhs),
                format_rational(&v.rhs)
            ));
        }
        tight_x += usize::from(v.is_tight());
    }
    Ok(format!(
        "{MUIRHEAD_TRIALS} + {MUIRHEAD_TRIALS} sequences hold; equality in {tight_s} and {tight_x}, \
         exactly where the sequence is constant or at most one exponent is nonzero"
    ))
}

fn random_triangle_free(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p = rng.random_range(0.2..0.8);
    let mut g = Graph::empty(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) && g.neighbors(u) & g.neighbors(v) == 0 {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut nonzero = 0;
    for gi in 0..50 {
        let n = rng.random_range(2..=9);
        let g = random_triangle_free(&mut rng, n);
        assert!(is_triangle_free(&g));
        for pi in 0..10 {
            let s = rng.random_range(1..=3);
            let t = rng.random_range(1..=3);
            let p = PendantProfile::new(
                (0..s).map(|_| rng.random_range(0..=1)).collect(),
                (0..t).map(|_| rng.random_range(0..=1)).collect(),
            )
            .unwrap();
            let f = double_star(&p).unwrap();
            let exact = labeled_copies(&f, &g);
            let book = double_star_bookkeeping(&g, &p);
            if exact != book {
                return Err(format!(
                    "graph {gi} ({}), profile {pi} {p:?}: bookkeeping {book} vs count {exact}",
                    to_graph6(&g)
                ));
            }
            nonzero += usize::from(!exact.is_zero());
        }
    }
    Ok(format!(
        "500 pairs agree on triangle-free hosts ({nonzero} nonzero)"
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cfg = OracleConfig {
        max_n: 7,
        budget: Budget::unlimited(),
    };
    let k2 = Graph::complete(2).unwrap();
    let k3 = Graph::complete(3).unwrap();
    let k4 = Graph::complete(4).unwrap();
    let mut found = Vec::new();
    for n in 4..=7 {
        let got = oracle_ex(n, &k3, &k4, cfg).unwrap().max;
        let want = unlabeled_copies(&k3, &Graph::turan(n, 3).unwrap()).unwrap();
        if got != want {
            return Err(format!("ex({n}, K3, K4) = {got}, Turan graph has {want}"));
        }
        found.push(got.to_string());
    }
    for n in 3..=7 {
        let got = oracle_ex(n, &k2, &k3, cfg).unwrap().max;
        let want = BigCount::from((n * n / 4) as u64);
        if got != want {
            return Err(format!("ex({n}, K2, K3) = {got}, expected {want}"));
        }
    }
    let t = start.elapsed();
    check(
        t < ZYKOV_LIMIT,
        format!(
            "triangles in K4-free graphs n = 4..7: {} ; Mantel n = 3..7 in {t:.1?}",
            found.join(", ")
        ),
        format!("values match but took {t:.1?}"),
    )
}

fn criterion_7() -> Outcome {
    let p4 = Graph::path(4).unwrap();
    let k3 = Graph::complete(3).unwrap();
    let cfg = OracleConfig {
        max_n: 7,
        budget: Budget::unlimited(),
    };
    let mut found = Vec::new();
    for n in 4..=7 {
        let oracle = oracle_ex(n, &p4, &k3, cfg).unwrap();
        let best = best_complete_bipartite(&p4, n as u64).unwrap();
        let witness = Graph::complete_multipartite(
            &PartSizes::new(vec![best.m as usize, n - best.m as usize]).unwrap(),
        )
        .unwrap();
        if oracle.max != best.count {
            return Err(format!(
                "n = {n}: oracle {} (extremal {:?}) vs K_({},{}) {} ({})",
                oracle.max,
                oracle.extremal,
                best.m,
                n as u64 - best.m,
                best.count,
                to_graph6(&canonical_form(&witness).unwrap())
            ));
        }
        found.push(format!("{}", oracle.max));
    }
    Ok(format!(
        "P4 in triangle-free graphs n = 4..7: {}",
        found.join(", ")
    ))
}

/// Twin-free graphs on 1..=5 vertices, one per isomorphism class.
fn twin_free_classes() -> Vec<Graph> {
    let mut out = std::collections::BTreeSet::new();
    for k in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (1..k).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        for code in 0u32..(1 << pairs.len()) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| code >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::from_edges(k, &edges).unwrap();
            if g.is_twin_free() {
                out.insert(to_graph6(&canonical_form(&g).unwrap()));
            }
        }
    }
    out.iter()
        .map(|s| turanlab::graph::parse_graph6(s).unwrap())
        .collect()
}

fn criterion_8() -> Outcome {
    let classes = twin_free_classes();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cases = 0;
    for g in &classes {
        let k = g.order();
        let mut weights: Vec<Vec<u32>> = Vec::new();
        if k <= 3 {
            let total = 3usize.pow(k as u32);
            for code in 0..total {
                weights.push(
                    (0..k)
                        .map(|i| (code / 3usize.pow(i as u32) % 3) as u32 + 1)
                        .collect(),
                );
            }
        } else {
            for _ in 0..8 {
                weights.push((0..k).map(|_| rng.random_range(1..=3)).collect());
            }
        }
        for w in weights {
            let h = WeightedPattern::new(g.clone(), w.clone()).unwrap();
            let formula = aut_count_blowup(&h).unwrap();
            let direct = automorphism_count(&h.explicit().unwrap());
            if formula != direct {
                return Err(format!(
                    "{} with weights {w:?}: formula {formula}, explicit {direct}",
                    to_graph6(g)
                ));
            }
            cases += 1;
        }
    }
    check(
        cases >= 100,
        format!(
            "{cases} weighted patterns over {} twin-free classes agree",
            classes.len()
        ),
        format!("only {cases} cases generated"),
    )
}

fn random_form(rng: &mut ChaCha8Rng) -> DensityForm {
    let order = rng.random_range(2..=5);
    let terms = (0..rng.random_range(1..=4))
        .map(|_| DensityTerm {
            coeff: rng.random_range(0.5..3.0),
            exponents: (0..order).map(|_| rng.random_range(0..=2)).collect(),
            factors: (0..rng.random_range(0..=2))
                .map(|_| {
                    (
                        rng.random_range(1..(1u64 << order)),
                        rng.random_range(1..=2),
                    )
                })
                .collect(),
        })
        .collect();
    DensityForm::from_terms(order, terms).unwrap()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for fi in 0..10 {
        let f = random_form(&mut rng);
        for _ in 0..10 {
            let x: Vec<f64> = (0..f.order())
                .map(|_| rng.random_range(0.05..1.0))
                .collect();
            let g = f.gradient(&x);
            for i in 0..x.len() {
                let (mut hi, mut lo) = (x.clone(), x.clone());
                hi[i] += FD_STEP;
                lo[i] -= FD_STEP;
                let fd = (f.value(&hi) - f.value(&lo)) / (2.0 * FD_STEP);
                let rel = (g[i] - fd).abs() / g[i].abs().max(1.0);
                worst = worst.max(rel);
                if rel >= GRADIENT_TOL {
                    return Err(format!(
                        "form {fi}, x = {x:?}, coordinate {i}: analytic {} vs fd {fd}",
                        g[i]
                    ));
                }
            }
        }
    }
    let two_xy = DensityForm::from_terms(
        2,
        vec![DensityTerm {
            coeff: 2.0,
            exponents: vec![1, 1],
            factors: vec![],
        }],
    )
    .unwrap();
    let best = maximize_density(&two_xy, 8, 0);
    let ok = (best.value - 0.5).abs() <= VALUE_TOL
        && best.weights.iter().all(|&w| (w - 0.5).abs() <= POINT_TOL);
    check(
        ok,
        format!(
            "100 gradients within {GRADIENT_TOL:e} (worst {worst:.1e}); max 2xy = {:.12} at {:?}",
            best.value, best.weights
        ),
        format!("max 2xy = {} at {:?}", best.value, best.weights),
    )
}

fn criterion_10() -> Outcome {
    let h3 = counterexample_h(3, 2).unwrap().explicit().unwrap();
    let rep = conjecture2_hypotheses(&h3, 3);
    let h4 = counterexample_h(4, 2).unwrap().explicit().unwrap();
    let rep4 = conjecture2_hypotheses(&h4, 4);
    let ok = rep.diameter == Distance::Finite(5)
        && chromatic_number(&h3) == 2
        && rep.chromatic_number == 2
        && !rep.hypotheses_hold;
    let r4 = format!(
        "r = 4: diameter {} (limit {}), chromatic number {}",
        diameter(&h4),
        rep4.diameter_limit,
        rep4.chromatic_number
    );
    check(
        ok,
        format!(
            "r = 3: diameter {} > {}, chromatic number {}; {r4}",
            rep.diameter, rep.diameter_limit, rep.chromatic_number
        ),
        format!("r = 3 report {rep:?}; {r4}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("blow-up polynomial vs explicit count", criterion_1),
        ("counterexample r = 3", criterion_2),
        ("counterexample r = 4", criterion_3),
        ("Muirhead steps", criterion_4),
        ("double-star bookkeeping", criterion_5),
        ("Zykov and Mantel baselines", criterion_6),
        ("paths in triangle-free graphs", criterion_7),
        ("automorphisms of blow-ups", criterion_8),
        ("optimizer gradient and 2xy", criterion_9),
        ("diameter hypothesis report", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("PASS {:>2} {name} [{t:.1?}]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{t:.1?}]: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
