//! Acceptance suite: one test per release criterion, each printing a single
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`).
//! All runs are fixed-seed and therefore reproducible.

use std::collections::BTreeSet;
use std::time::Instant;

use cascade_discovery::baselines::{collision_as_influence, temporal_precedence, TraceDataset};
use cascade_discovery::estimator::{recovery_stats, run_once};
use cascade_discovery::graph::{compare_graphs, random_tree, transitive_reduction, AncestorMatrix};
use cascade_discovery::scm::{sample_complexity_bound, sample_episode, CascadeModel, Intervention};
use cascade_discovery::seed::mix_seed;
use cascade_discovery::sim::simulate_trace;
use cascade_discovery::sweep::{run_sweep, run_sweep_sequential, SweepSpec};
use cascade_discovery::{catalog, exec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "[{}] criterion {id}: {name} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

/// Criterion 1: blocking a node never leaves any of its descendants active,
/// across every catalog model and noise level, with zero tolerance.
#[test]
fn criterion_1_cascade_suppression() {
    let started = Instant::now();
    let mut models: Vec<(String, CascadeModel)> = Vec::new();
    for env in catalog::ENVIRONMENTS {
        for p in [0.0, 0.1, 0.3] {
            let tree = catalog::tree(env.name).unwrap();
            models.push((
                format!("{}@p={p}", env.name),
                CascadeModel::with_uniform_failure(tree, p).unwrap(),
            ));
        }
    }
    for s in catalog::SYNTHETIC {
        models.push((s.name.to_string(), catalog::model(s.name).unwrap()));
    }

    let per_model = 100_000usize.div_ceil(models.len());
    let mut episodes = 0usize;
    let mut violations = 0usize;
    for (m_idx, (name, model)) in models.iter().enumerate() {
        let n = model.node_count();
        let downstream: Vec<BTreeSet<usize>> = (0..n)
            .map(|i| model.tree().descendants(i).unwrap())
            .collect();
        for e in 0..per_model {
            let target = e % n;
            let ep = sample_episode(
                model,
                Intervention::Block(target),
                mix_seed(0xC1 + m_idx as u64, e as u64),
            )
            .unwrap();
            episodes += 1;
            if ep.active[target] || downstream[target].iter().any(|&j| ep.active[j]) {
                violations += 1;
                eprintln!("violation in {name}, episode {e}");
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    let ok = violations == 0 && episodes >= 100_000 && secs < 30.0;
    report(
        1,
        "cascade suppression",
        ok,
        &format!("{violations} violations in {episodes} episodes across {} models, {secs:.1}s (limit 30s)", models.len()),
    );
}

/// Criterion 2: for every non-descendant pair, the chance of a spurious
/// ancestor claim after n interventions matches (1 - p_ij)^n within 4 sigma
/// and never beats the exponential envelope exp(-q_min n).
#[test]
fn criterion_2_false_positive_rate_matches_theory() {
    let started = Instant::now();
    let model = catalog::model("synthetic_parallel_triggers_0.1").unwrap();
    let tree = model.tree();
    let n = model.node_count();
    let q_min = model.min_nondescendant_activation().unwrap();
    assert!((q_min - 0.478).abs() < 1e-3);

    let reps: u64 = 10_000;
    let mut checked_pairs = 0usize;
    let mut worst_z = 0.0f64;
    for n_i in [1usize, 2, 4, 8] {
        for blocked in 0..n {
            let reps_list: Vec<u64> = (0..reps).collect();
            // one replicate = n_i fresh episodes under the same block; a bit
            // per node records "never active in this replicate"
            let never_counts: Vec<u64> = exec::map(&reps_list, |&rep| {
                let rep_seed = mix_seed(0xC2 + n_i as u64, ((blocked as u64) << 32) | rep);
                let mut never: u64 = (1 << n) - 1;
                for e in 0..n_i {
                    let ep = sample_episode(
                        &model,
                        Intervention::Block(blocked),
                        mix_seed(rep_seed, e as u64),
                    )
                    .unwrap();
                    for (j, &a) in ep.active.iter().enumerate() {
                        if a {
                            never &= !(1 << j);
                        }
                    }
                }
                never
            })
            .into_iter()
            .fold(vec![0u64; n], |mut acc, bits| {
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot += (bits >> j) & 1;
                }
                acc
            });

            let downstream = tree.descendants(blocked).unwrap();
            for j in 0..n {
                if j == blocked {
                    continue;
                }
                if downstream.contains(&j) {
                    assert_eq!(
                        never_counts[j], reps,
                        "descendant {j} of {blocked} activated"
                    );
                    continue;
                }
                let p_ij = model.activation_probability(blocked, j).unwrap();
                let q = (1.0 - p_ij).powi(n_i as i32);
                let freq = never_counts[j] as f64 / reps as f64;
                let sigma = (q * (1.0 - q) / reps as f64).sqrt();
                let z = (freq - q).abs() / sigma.max(1e-12);
                worst_z = worst_z.max(z);
                assert!(
                    (freq - q).abs() <= 4.0 * sigma,
                    "pair ({blocked}, {j}) at n={n_i}: freq {freq:.6} vs (1-p)^n {q:.6}"
                );
                let envelope = (-q_min * n_i as f64).exp() + 4.0 * sigma;
                assert!(
                    freq <= envelope,
                    "pair ({blocked}, {j}) at n={n_i}: freq {freq:.6} beats envelope {envelope:.6}"
                );
                checked_pairs += 1;
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    let ok = checked_pairs == 91 * 4 && secs < 120.0;
    report(
        2,
        "false-positive rate matches theory",
        ok,
        &format!("{checked_pairs} pair/n checks within 4 sigma (worst z = {worst_z:.2}), {secs:.1}s (limit 120s)"),
    );
}

/// Criterion 3: at the theoretical per-object intervention budget for
/// delta = 0.05, at least 95 of 100 seeds recover the exact tree.
#[test]
fn criterion_3_exact_recovery_at_the_bound() {
    let mut details = Vec::new();
    let mut ok = true;
    for (name, expect_bound) in [
        ("synthetic_parallel_triggers_0.1", 17u64),
        ("synthetic_large_slot_machine_0.1", 51u64),
    ] {
        let model = catalog::model(name).unwrap();
        let q_min = model.min_nondescendant_activation().unwrap();
        let bound = sample_complexity_bound(q_min, model.node_count(), 0.05).unwrap();
        ok &= bound == expect_bound;
        let seeds: Vec<u64> = (0..100).map(|s| mix_seed(0x03, s)).collect();
        let summary = recovery_stats(&model, bound as usize, &seeds).unwrap();
        ok &= summary.exact_fraction >= 0.95;
        details.push(format!(
            "{name}: bound={bound} exact={}/100",
            (summary.exact_fraction * 100.0).round()
        ));
    }
    report(3, "exact recovery at the bound", ok, &details.join("; "));
}

/// Criterion 4: mean skeleton error decays exponentially in the number of
/// interventions per object: strictly decreasing and log-linear (R^2 >= 0.9).
#[test]
fn criterion_4_exponential_skeleton_decay() {
    let model = catalog::model("synthetic_parallel_triggers_0.1").unwrap();
    let seeds: Vec<u64> = (0..500).map(|s| mix_seed(0x04, s)).collect();
    let ns = [1usize, 2, 3, 4, 5];
    let means: Vec<f64> = ns
        .iter()
        .map(|&n| recovery_stats(&model, n, &seeds).unwrap().mean_skeleton_shd)
        .collect();

    let strictly_decreasing = means.windows(2).all(|w| w[1] < w[0]);

    // least-squares fit of ln(mean) against n over the resolvable points
    let points: Vec<(f64, f64)> = ns
        .iter()
        .zip(&means)
        .filter(|(_, &m)| m >= 0.01)
        .map(|(&n, &m)| (n as f64, m.ln()))
        .collect();
    let k = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let r2 = 1.0 - ss_res / ss_tot;

    let ok = strictly_decreasing && points.len() >= 3 && r2 >= 0.9 && slope < 0.0;
    report(
        4,
        "exponential skeleton decay",
        ok,
        &format!(
            "means {:?}, log-linear R^2 = {r2:.3} over {} points, slope {slope:.2}",
            means
                .iter()
                .map(|m| (m * 1000.0).round() / 1000.0)
                .collect::<Vec<_>>(),
            points.len()
        ),
    );
}

/// Criterion 5: without execution noise a single round of interventions
/// recovers every catalog environment exactly, on every seed.
#[test]
fn criterion_5_noiseless_single_round_recovery() {
    let mut ok = true;
    let mut details = Vec::new();
    for env in catalog::ENVIRONMENTS {
        let model = catalog::model(env.name).unwrap();
        let seeds: Vec<u64> = (0..100).map(|s| mix_seed(0x05, s)).collect();
        let summary = recovery_stats(&model, 1, &seeds).unwrap();
        ok &= summary.exact_fraction == 1.0;
        details.push(format!(
            "{} {}/100",
            env.name,
            (summary.exact_fraction * 100.0).round()
        ));
    }
    report(
        5,
        "noiseless single-round recovery",
        ok,
        &details.join(", "),
    );
}

/// Brute-force reduction oracle: keep an edge iff no other path of length
/// >= 2 connects its endpoints. Independent of the library implementation.
fn brute_reduction(rel: &AncestorMatrix) -> BTreeSet<(usize, usize)> {
    let n = rel.node_count();
    let edges: BTreeSet<(usize, usize)> = rel.pairs().into_iter().collect();
    let mut kept = BTreeSet::new();
    for &(i, j) in &edges {
        let mut stack: Vec<usize> = (0..n)
            .filter(|&k| k != j && edges.contains(&(i, k)))
            .collect();
        let mut seen = vec![false; n];
        let mut reachable = false;
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if v == j {
                reachable = true;
                break;
            }
            stack.extend((0..n).filter(|&w| edges.contains(&(v, w))));
        }
        if !reachable {
            kept.insert((i, j));
        }
    }
    kept
}

/// Criterion 6: transitive reduction agrees with the brute-force oracle on
/// 1000 random trees and 200 random acyclic relations, with zero mismatches.
#[test]
fn criterion_6_reduction_against_brute_force() {
    let mut tree_mismatches = 0usize;
    for k in 0..1000u64 {
        let n = (k % 10) as usize + 1;
        let tree = random_tree(n, mix_seed(0x06, k)).unwrap();
        let reduced = transitive_reduction(&tree.ancestor_matrix()).unwrap();
        if reduced.edges().collect::<Vec<_>>() != tree.edges() {
            tree_mismatches += 1;
        }
    }

    let mut rel_mismatches = 0usize;
    for k in 0..200u64 {
        let n = 2 + (k % 7) as usize;
        let density = 0.1 + 0.8 * ((k as f64 * 0.618) % 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(0x66, k));
        let mut order: Vec<usize> = (0..n).collect();
        for idx in (1..n).rev() {
            let j = rng.gen_range(0..=idx);
            order.swap(idx, j);
        }
        let mut rel = AncestorMatrix::new(n);
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.gen::<f64>() < density {
                    rel.set(order[a], order[b], true);
                }
            }
        }
        let reduced: BTreeSet<(usize, usize)> =
            transitive_reduction(&rel).unwrap().edges().collect();
        if reduced != brute_reduction(&rel) {
            rel_mismatches += 1;
        }
    }

    let ok = tree_mismatches == 0 && rel_mismatches == 0;
    report(
        6,
        "reduction against brute force",
        ok,
        &format!(
            "{tree_mismatches}/1000 tree mismatches, {rel_mismatches}/200 relation mismatches"
        ),
    );
}

/// Criterion 7: on the simultaneous-branch scenario with non-contact edges,
/// both observational heuristics stay wrong on unlimited traces while two
/// interventions per object recover the tree.
#[test]
fn criterion_7_baseline_separation() {
    let mm = catalog::scenario("parallel_triggers_simultaneous").unwrap();
    let truth = mm.model().tree();
    let traces: Vec<_> = (0..100)
        .map(|k| simulate_trace(&mm, Intervention::Observational, mix_seed(0x07, k)).unwrap())
        .collect();

    // per-trace skeleton error of the temporal heuristic
    let mut sshd_sum = 0usize;
    for t in &traces {
        let single = TraceDataset::new(truth.node_count(), vec![t.clone()]).unwrap();
        sshd_sum += compare_graphs(&temporal_precedence(&single), truth)
            .unwrap()
            .skeleton_shd;
    }
    let mean_sshd = sshd_sum as f64 / traces.len() as f64;

    let data = TraceDataset::new(truth.node_count(), traces).unwrap();
    let collision_metrics = compare_graphs(&collision_as_influence(&data), truth).unwrap();
    let temporal_metrics = compare_graphs(&temporal_precedence(&data), truth).unwrap();

    let exact = (0..100)
        .filter(|&s| run_once(mm.model(), 2, mix_seed(0x72, s)).unwrap().shd == 0)
        .count();

    let ok = collision_metrics.recall < 1.0
        && temporal_metrics.skeleton_shd > 0
        && mean_sshd > 0.0
        && exact >= 95;
    report(
        7,
        "baseline separation",
        ok,
        &format!(
            "collision recall {:.3} (< 1), temporal SSHD {} on 100 traces (mean per trace {mean_sshd:.2}), interventional exact {exact}/100 at 2 rounds",
            collision_metrics.recall, temporal_metrics.skeleton_shd
        ),
    );
}

/// Criterion 8: identical sweep spec and seed produce byte-identical CSV,
/// in parallel and sequential execution alike.
#[test]
fn criterion_8_sweep_determinism() {
    let tree = catalog::tree("parallel_triggers").unwrap();
    let spec = SweepSpec {
        failure_probs: vec![0.1],
        n_per_object: vec![1, 2, 4, 8],
        seed_count: 40,
        base_seed: 2024,
        ..SweepSpec::new("synthetic_parallel_triggers_0.1", tree)
    };
    let a = run_sweep(&spec).unwrap();
    let b = run_sweep(&spec).unwrap();
    let c = run_sweep_sequential(&spec).unwrap();
    let ok = a.csv == b.csv && a.csv == c.csv && a.summary_text == b.summary_text;
    report(
        8,
        "sweep determinism",
        ok,
        &format!(
            "two parallel runs and one sequential run: {} identical bytes x 3",
            a.csv.len()
        ),
    );
}

/// Criterion 9: a full sweep of the 24-node model (n <= 10, 100 seeds)
/// finishes within 60 s on a single core.
#[test]
fn criterion_9_performance_envelope() {
    let tree = catalog::tree("large_slot_machine").unwrap();
    let spec = SweepSpec {
        failure_probs: vec![0.1],
        n_per_object: (1..=10).collect(),
        seed_count: 100,
        base_seed: 9,
        ..SweepSpec::new("synthetic_large_slot_machine_0.1", tree)
    };
    let started = Instant::now();
    let result = run_sweep_sequential(&spec).unwrap();
    let secs = started.elapsed().as_secs_f64();
    let ok = secs < 60.0 && result.records.len() == 1000;
    report(
        9,
        "performance envelope",
        ok,
        &format!(
            "1000 pipeline runs (N=24) in {secs:.1}s single-core (limit 60s), {:.2} ms/run",
            secs * 1000.0 / 1000.0
        ),
    );
}
