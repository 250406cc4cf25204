//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use sparsecount::calculators::{erdos_rogers_shape, geometry_graph_params, no_sparse_host_params};
use sparsecount::generators::gnp;
use sparsecount::sparsifier::{sample_sparsifier, sparsifier_chain};
use sparsecount::suites::{
    container_step_exhaustive, container_step_suite, count_bound_suite, determinism_suite, independent_sets_suite,
    sparsifier_suite, strongest_grid_point, Instance, SuiteReport,
};
use sparsecount::{DensityParams, Graph, ScaleLimits};

const STEP_SUITE_BUDGET: Duration = Duration::from_secs(10 * 60);
const COUNT_SUITE_BUDGET: Duration = Duration::from_secs(20 * 60);
const EXHAUSTIVE_MAX_N: usize = 8;
const STEP_RANDOM_INSTANCES: usize = 500;
const DETERMINISM_RUNS: usize = 200;
const DETERMINISM_EXTRA: usize = 10;
const COUNT_INSTANCES: usize = 100;
const INDEPENDENT_INSTANCES: usize = 1000;
const SPARSIFIER_TRIALS: usize = 200;
const REPEATS: usize = 3;
const MIN_INVOCATIONS: usize = 12;

fn instance(n: usize, p: f64, seed: u64) -> Instance {
    Instance {
        label: format!("gnp:{n}:{p}:{seed}"),
        graph: gnp(n, p, seed).expect("valid generator"),
    }
}

/// n from 8 to 16, p in {0.3, 0.5, 0.7}, seed = index.
fn step_instances() -> Vec<Instance> {
    (0..STEP_RANDOM_INSTANCES)
        .map(|i| instance(8 + i % 9, [0.3, 0.5, 0.7][(i / 9) % 3], i as u64))
        .collect()
}

fn summary(r: &SuiteReport) -> String {
    format!(
        "instances={} checks={} violations={} refusals={}",
        r.instances,
        r.checks,
        r.violations.len(),
        r.refusals
    )
}

fn first_violations(r: &SuiteReport) -> String {
    r.violations
        .iter()
        .take(5)
        .map(|v| format!("\n    {}: {}", v.instance, v.detail))
        .collect()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn container_step_soundness() -> Outcome {
    let start = Instant::now();
    let mut report = container_step_exhaustive(EXHAUSTIVE_MAX_N);
    let exhaustive_checks = report.checks;
    report.absorb(container_step_suite(&step_instances()));
    let elapsed = start.elapsed();
    Outcome {
        pass: report.passed() && exhaustive_checks > 0 && report.checks > exhaustive_checks && elapsed <= STEP_SUITE_BUDGET,
        detail: format!(
            "{} (all graphs n <= {EXHAUSTIVE_MAX_N}: {exhaustive_checks} checks) in {:.1}s{}",
            summary(&report),
            elapsed.as_secs_f64(),
            first_violations(&report)
        ),
    }
}

fn determinism() -> Outcome {
    let report = determinism_suite(&step_instances(), DETERMINISM_RUNS, DETERMINISM_EXTRA, 0);
    let expected = (DETERMINISM_RUNS * (1 + DETERMINISM_EXTRA)) as u64;
    Outcome {
        pass: report.passed() && report.checks == expected,
        detail: format!("{} (expected {expected} rebuilds){}", summary(&report), first_violations(&report)),
    }
}

fn count_bound() -> Outcome {
    let start = Instant::now();
    let limits = ScaleLimits::default();
    let mut instances = Vec::new();
    let mut seed = 0u64;
    while instances.len() < COUNT_INSTANCES && seed < 10_000 {
        let inst = instance(8 + (seed % 7) as usize, [0.7, 0.8, 0.9][(seed / 7 % 3) as usize], seed);
        if strongest_grid_point(&inst.graph, &limits).expect("n <= 14 is in scale").is_some() {
            instances.push(inst);
        }
        seed += 1;
    }
    let report = count_bound_suite(&instances, &limits);
    let elapsed = start.elapsed();
    Outcome {
        pass: instances.len() == COUNT_INSTANCES
            && report.passed()
            && report.checks > 0
            && report.refusals == 0
            && elapsed <= COUNT_SUITE_BUDGET,
        detail: format!(
            "{} over {seed} seeds in {:.1}s; {}{}",
            summary(&report),
            elapsed.as_secs_f64(),
            report.notes.join("; "),
            first_violations(&report)
        ),
    }
}

fn independent_sets() -> Outcome {
    let instances: Vec<Instance> = (0..INDEPENDENT_INSTANCES)
        .map(|i| instance(1 + i % 16, [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9][(i / 16) % 9], i as u64))
        .collect();
    let report = independent_sets_suite(&instances, &ScaleLimits::default());
    Outcome {
        pass: report.passed() && report.refusals == 0 && report.instances == INDEPENDENT_INSTANCES,
        detail: format!("{}{}", summary(&report), first_violations(&report)),
    }
}

fn sparsifier() -> Outcome {
    let limits = ScaleLimits::default();
    let instances: Vec<Instance> = (0..SPARSIFIER_TRIALS)
        .map(|i| instance(8 + i % 7, [0.7, 0.8, 0.9][(i / 7) % 3], 1000 + i as u64))
        .collect();
    let runs: Vec<String> = (0..REPEATS)
        .map(|_| serde_json::to_string(&sparsifier_suite(&instances, 7, &limits)).unwrap())
        .collect();
    let report = sparsifier_suite(&instances, 7, &limits);
    let samples: Vec<String> = (0..REPEATS)
        .map(|_| {
            let r = sample_sparsifier(
                &Graph::complete(2000),
                &DensityParams::parse("1/2", "1/2").unwrap(),
                1,
                11,
                20,
                None,
                &limits,
            )
            .unwrap();
            serde_json::to_string(&r).unwrap()
        })
        .collect();
    let identical = runs.windows(2).all(|w| w[0] == w[1]) && samples.windows(2).all(|w| w[0] == w[1]);
    let passes = report.bad_set_passes.unwrap_or(0);
    Outcome {
        pass: report.passed() && report.refusals == 0 && passes > 0 && identical,
        detail: format!(
            "{} bad-set passes re-checked exactly={passes} repeat runs identical={identical}{}",
            summary(&report),
            first_violations(&report)
        ),
    }
}

fn calculators() -> Result<String, String> {
    let g = geometry_graph_params(&BigUint::from(3u32)).map_err(|e| e.to_string())?;
    if g.vertex_count.exact != "63" {
        return Err(format!("N_3 = {}", g.vertex_count.exact));
    }
    let s = erdos_rogers_shape(&BigUint::from(1000u32), &BigRational::from_integer(0.into()), &BigRational::one())
        .map_err(|e| e.to_string())?;
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let four_thirds = BigRational::new(BigInt::from(4), BigInt::from(3));
    if s.exponents != (third, four_thirds) {
        return Err(format!("exponents {:?}", s.exponents));
    }
    let mut chains = 0;
    for (q, d) in [(1u64 << 13, 1u64), (1 << 20, 2), (99_991, 3), (3, 1)] {
        let q = BigUint::from(q);
        let bound = BigUint::from(d);
        let chained = no_sparse_host_params(&q, &bound).map_err(|e| e.to_string())?;
        // independent recomputation from raw q
        let q2 = &q * &q;
        let n = &q2 * (&q2 - &q + 1u32);
        let zeta = BigRational::new(BigInt::from(1u64 << 25), BigInt::from(q2.clone()));
        let dd = BigRational::new(BigInt::one(), BigInt::from(&q * 128u32));
        let direct = sparsifier_chain(&n, &zeta, &dd, &bound).ok();
        if chained.chain != direct {
            return Err(format!("chain for q = {q} differs"));
        }
        let again = no_sparse_host_params(&q, &bound).map_err(|e| e.to_string())?;
        if serde_json::to_string(&again).unwrap() != serde_json::to_string(&chained).unwrap() {
            return Err(format!("recomputation for q = {q} is not bit-identical"));
        }
        chains += 1;
    }
    let q41 = BigUint::one() << 41u32;
    let big = no_sparse_host_params(&q41, &BigUint::one()).map_err(|e| e.to_string())?;
    if !big.validity_flags.iter().all(|f| f.holds) {
        return Err("q = 2^41 flags do not all hold".into());
    }
    Ok(format!("N_3 = 63, alpha = 0 exponents (1/3, 4/3), {chains} chains bit-identical"))
}

fn cli_contract() -> Outcome {
    let failures: Vec<String> = common::INVOCATIONS.iter().filter_map(|i| common::check(i).err()).collect();
    let goldens = common::INVOCATIONS.iter().filter(|i| i.golden).count();
    Outcome {
        pass: failures.is_empty() && common::INVOCATIONS.len() >= MIN_INVOCATIONS,
        detail: format!(
            "{} invocations, {goldens} golden reports{}",
            common::INVOCATIONS.len(),
            failures.iter().map(|f| format!("\n    {f}")).collect::<String>()
        ),
    }
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("container-step soundness", Box::new(container_step_soundness)),
        ("fingerprint determinism", Box::new(determinism)),
        ("counting bound", Box::new(count_bound)),
        ("D=1 independent-set regression", Box::new(independent_sets)),
        ("sparsifier verification", Box::new(sparsifier)),
        (
            "calculator fidelity",
            Box::new(|| match calculators() {
                Ok(detail) => Outcome { pass: true, detail },
                Err(detail) => Outcome { pass: false, detail },
            }),
        ),
        ("CLI contract", Box::new(cli_contract)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        if !out.pass {
            failed += 1;
        }
        println!(
            "acceptance {} {name}: {} - {}",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
