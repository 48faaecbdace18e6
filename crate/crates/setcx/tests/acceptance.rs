//! Release acceptance suite: one test per shipping criterion.
//!
//! Each test prints exactly one `ACCEPTANCE <n> <name>: PASS|FAIL (...)`
//! line (run with `cargo test --test acceptance -- --nocapture` to see the
//! lines for passing tests; failing tests repeat the line in the panic
//! message). All tolerances are pinned as constants below; the tests state
//! the shipped contract and must not be loosened to make a build green.
//!
//! Two criteria (8 and the endpoint clause of 10) encode targets that the
//! reference compressor does not reach; they are expected to fail and the
//! reasons are documented in the README's "Known limitations".

use rand::Rng;

use setcx::bitstring::{BitString, EncodingMode};
use setcx::compression::CompressorSpec;
use setcx::dist::{ncd_raw, DistanceMatrix};
use setcx::experiments::{
    adjusted_experiment, noise_experiment, substitution_experiment, ExperimentConfig,
};
use setcx::graph::{graph_psi, maximize_psi, Graph, PsiMode};
use setcx::measures::{decomposition, psi, theta_pair, Kernel, Norm, StringSet};
use setcx::rbn::{lambda_exponent, sweep, BooleanNetwork, SweepConfig};
use setcx::seed::seeded_rng;

// ----- pinned tolerances and targets -------------------------------------

/// 1: product-mode score of two disjoint 5-cliques.
const TWO_CLIQUE_PSI: f64 = 0.192;
const TWO_CLIQUE_TOL: f64 = 0.005;
/// 2: complement (conjugate) invariance of the graph score.
const CONJUGATE_TOL: f64 = 1e-12;
const CONJUGATE_GRAPHS: usize = 100;
/// 3: 10-node search must beat the clique baseline by at least this score.
const SEARCH_N10_MIN_PSI: f64 = 1.53;
const SEARCH_N10_RESTARTS: usize = 20;
const SEARCH_N10_ITERATIONS: usize = 500;
/// 5: mean-field decomposition identity, relative to max(1, |psi|).
const DECOMPOSITION_TOL: f64 = 1e-10;
const DECOMPOSITION_INSTANCES: usize = 1000;
/// 6: uniform-distance law, relative tolerance.
const UNIFORM_LAW_TOL: f64 = 1e-12;
/// 7: a noiseless (identical) set must score below this fraction of the
/// noise-curve peak.
const DEGENERATE_FRACTION: f64 = 0.02;
/// 8: required mean raw distance of independent random pairs.
const RANDOM_PAIR_TARGET: f64 = 0.92;
const RANDOM_PAIR_TOL: f64 = 0.05;
const RANDOM_PAIR_COUNT: usize = 300;
/// 9: substitution curve end/start ratio.
const SUBSTITUTION_RATIO: f64 = 1.8;
const SUBSTITUTION_RATIO_TOL: f64 = 0.4;
const SUBSTITUTION_SEEDS: [u64; 5] = [101, 202, 303, 404, 505];
/// 10: adjusted curve shape. Secondary local maxima may not rise more than
/// this fraction of (peak - lower endpoint) above their surrounding saddle,
/// and the two endpoints must agree to this fraction of the peak.
const UNIMODAL_PROMINENCE: f64 = 0.05;
const ENDPOINT_GAP_FRACTION: f64 = 0.10;
/// 11: the sweep's score peak must sit at a bias whose expected-sensitivity
/// exponent is within these bounds of criticality (exponent 0).
const SWEEP_MEAN_LAMBDA_TOL: f64 = 0.15;
const SWEEP_STD_LAMBDA_TOL: f64 = 0.25;
/// 12: independently re-evaluated network trajectories.
const NETWORK_SEEDS: usize = 200;

fn verdict(num: u32, name: &str, pass: bool, details: &str) {
    let line = format!(
        "ACCEPTANCE {num} {name}: {} ({details})",
        if pass { "PASS" } else { "FAIL" }
    );
    println!("{line}");
    assert!(pass, "{line}");
}

// ----- 1: two disjoint 5-cliques ------------------------------------------

#[test]
fn acceptance_01_two_clique_graph_score() {
    let g = Graph::two_five_cliques();
    let value = graph_psi(&g, PsiMode::Product).unwrap();
    let pass = (value - TWO_CLIQUE_PSI).abs() <= TWO_CLIQUE_TOL;
    verdict(
        1,
        "two_clique_graph_score",
        pass,
        &format!("psi = {value:.6}, target {TWO_CLIQUE_PSI} +/- {TWO_CLIQUE_TOL}"),
    );
}

// ----- 2: conjugate invariance ---------------------------------------------

#[test]
fn acceptance_02_conjugate_invariance() {
    let mut worst: f64 = 0.0;
    for i in 0..CONJUGATE_GRAPHS {
        let n = 5 + (i % 26); // covers 5..=30
        let p = [0.2, 0.5, 0.8][i % 3];
        let mut rng = seeded_rng(9_000 + i as u64);
        let g = Graph::random(n, p, &mut rng).unwrap();
        let c = g.conjugate();
        for mode in [PsiMode::Product, PsiMode::PairMax] {
            let a = graph_psi(&g, mode).unwrap();
            let b = graph_psi(&c, mode).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    let pass = worst < CONJUGATE_TOL;
    verdict(
        2,
        "conjugate_invariance",
        pass,
        &format!("worst |psi(g) - psi(conj g)| = {worst:.3e} over {CONJUGATE_GRAPHS} graphs, bound {CONJUGATE_TOL:.0e}"),
    );
}

// ----- 3: search beats the clique baseline ---------------------------------

#[test]
fn acceptance_03_graph_search_beats_cliques() {
    let found = maximize_psi(
        10,
        SEARCH_N10_ITERATIONS,
        SEARCH_N10_RESTARTS,
        424_242,
        PsiMode::Product,
    )
    .unwrap();
    let baseline = graph_psi(&Graph::two_five_cliques(), PsiMode::Product).unwrap();
    let pass = found.psi >= SEARCH_N10_MIN_PSI;
    verdict(
        3,
        "graph_search_beats_cliques",
        pass,
        &format!(
            "best psi = {:.4} (restart {}), required >= {SEARCH_N10_MIN_PSI}, clique baseline = {baseline:.4}",
            found.psi, found.restart
        ),
    );
}

// ----- 4: exhaustive agreement on 4 nodes ----------------------------------

#[test]
fn acceptance_04_small_graph_search_is_exhaustive() {
    let edge_slots = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut brute_best = f64::NEG_INFINITY;
    for mask in 0u32..64 {
        let edges: Vec<(usize, usize)> = edge_slots
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        let g = Graph::from_edges(4, &edges).unwrap();
        brute_best = brute_best.max(graph_psi(&g, PsiMode::Product).unwrap());
    }
    let found = maximize_psi(4, 100, 5, 7, PsiMode::Product).unwrap();
    let pass = (found.psi - brute_best).abs() < 1e-15;
    verdict(
        4,
        "small_graph_search_is_exhaustive",
        pass,
        &format!(
            "search psi = {:.6}, brute-force optimum over all 64 graphs = {brute_best:.6}",
            found.psi
        ),
    );
}

// ----- 5: decomposition identity -------------------------------------------

#[test]
fn acceptance_05_decomposition_identity() {
    let mut worst = 0.0_f64;
    for i in 0..DECOMPOSITION_INSTANCES {
        let n = 3 + i % 6;
        let l = 50 + 17 * (i % 9);
        let mut rng = seeded_rng(40_000 + i as u64);
        let members: Vec<BitString> = (0..n)
            .map(|_| BitString::random(l, &mut rng).unwrap())
            .collect();
        let set = StringSet::new(members, CompressorSpec::default(), EncodingMode::Ascii01)
            .unwrap();
        let entries: Vec<f64> = (0..n * (n - 1) / 2).map(|_| rng.gen::<f64>()).collect();
        let matrix = DistanceMatrix::from_lower_triangle(n, entries, true).unwrap();
        for norm in [Norm::Xi, Norm::PairsMean] {
            let (lambda, delta_sq, value) = decomposition(&set, &matrix, norm).unwrap();
            let residual =
                (lambda * (1.0 - lambda) - delta_sq - value).abs() / value.abs().max(1.0);
            worst = worst.max(residual);
        }
    }
    let pass = worst < DECOMPOSITION_TOL;
    verdict(
        5,
        "decomposition_identity",
        pass,
        &format!(
            "worst relative residual = {worst:.3e} over {DECOMPOSITION_INSTANCES} sets x 2 norms, bound {DECOMPOSITION_TOL:.0e}"
        ),
    );
}

// ----- 6: uniform-distance law ---------------------------------------------

#[test]
fn acceptance_06_uniform_distance_law() {
    let mut rng = seeded_rng(606);
    let members: Vec<BitString> = (0..5)
        .map(|_| BitString::random(200, &mut rng).unwrap())
        .collect();
    let set =
        StringSet::new(members, CompressorSpec::default(), EncodingMode::Ascii01).unwrap();
    let pairs = set.len() * (set.len() - 1) / 2;

    let mut worst = 0.0_f64;
    let mut best_d = -1.0;
    let mut best_value = f64::NEG_INFINITY;
    for step in 0..=20 {
        let d = step as f64 * 0.05;
        let matrix =
            DistanceMatrix::from_lower_triangle(set.len(), vec![d; pairs], true).unwrap();
        for norm in [Norm::Xi, Norm::PairsMean] {
            let value = psi(&set, &matrix, &Kernel::default(), norm).unwrap().psi;
            let expect = d * (1.0 - d) * theta_pair(&set, norm).unwrap();
            worst = worst.max((value - expect).abs() / expect.abs().max(1.0));
            if norm == Norm::Xi && value > best_value {
                best_value = value;
                best_d = d;
            }
        }
    }
    let pass = worst < UNIFORM_LAW_TOL && (best_d - 0.5).abs() < 1e-12;
    verdict(
        6,
        "uniform_distance_law",
        pass,
        &format!(
            "worst relative gap = {worst:.3e} on the 21-point grid, maximum at d = {best_d}"
        ),
    );
}

// ----- 7: degenerate sets score zero ---------------------------------------

#[test]
fn acceptance_07_degenerate_sets_score_zero() {
    let mut rng = seeded_rng(707);
    let members: Vec<BitString> = (0..6)
        .map(|_| BitString::random(150, &mut rng).unwrap())
        .collect();
    let set =
        StringSet::new(members, CompressorSpec::default(), EncodingMode::Ascii01).unwrap();
    let pairs = set.len() * (set.len() - 1) / 2;
    let mut exact_zero = true;
    for d in [0.0, 1.0] {
        let matrix =
            DistanceMatrix::from_lower_triangle(set.len(), vec![d; pairs], true).unwrap();
        for norm in [Norm::Xi, Norm::PairsMean] {
            exact_zero &= psi(&set, &matrix, &Kernel::default(), norm).unwrap().psi == 0.0;
        }
    }

    // Pipeline check: the calibrated noise curve starts at an identical set,
    // which must score a negligible fraction of the curve's own peak.
    let cfg = ExperimentConfig {
        set_size: 6,
        length: 300,
        steps: Some(60),
        replicates: 3,
        record_every: 12,
        ..ExperimentConfig::new(70_707)
    };
    let curve = noise_experiment(&cfg).unwrap();
    let start = curve.points[0].value;
    let peak = curve.peak().value;
    let pipeline_ok = peak > 0.0 && start < DEGENERATE_FRACTION * peak;

    let pass = exact_zero && pipeline_ok;
    verdict(
        7,
        "degenerate_sets_score_zero",
        pass,
        &format!(
            "uniform d in {{0,1}} psi exactly 0: {exact_zero}; identical-set curve start = {start:.4} vs peak {peak:.2} (< {DEGENERATE_FRACTION} required)"
        ),
    );
}

// ----- 8: random-pair distance level (known to fail) ------------------------

#[test]
fn acceptance_08_random_pair_distance_level() {
    let spec = CompressorSpec::default();
    let mut rng = seeded_rng(808);
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for _ in 0..RANDOM_PAIR_COUNT {
        let x = BitString::random(1000, &mut rng).unwrap();
        let y = BitString::random(1000, &mut rng).unwrap();
        let d = ncd_raw(&x, &y, &spec, EncodingMode::Ascii01);
        sum += d;
        min = min.min(d);
        max = max.max(d);
    }
    let mean = sum / RANDOM_PAIR_COUNT as f64;
    let pass = (mean - RANDOM_PAIR_TARGET).abs() <= RANDOM_PAIR_TOL;
    verdict(
        8,
        "random_pair_distance_level",
        pass,
        &format!(
            "mean raw distance = {mean:.4} over {RANDOM_PAIR_COUNT} pairs (range {min:.4}..{max:.4}), required {RANDOM_PAIR_TARGET} +/- {RANDOM_PAIR_TOL}; the deflate backend tops out near 0.85 for kilobit inputs"
        ),
    );
}

// ----- 9: substitution endpoint ratio ---------------------------------------

#[test]
fn acceptance_09_substitution_endpoint_ratio() {
    let mut ratios = Vec::new();
    for seed in SUBSTITUTION_SEEDS {
        let cfg = ExperimentConfig {
            replicates: 2,
            ..ExperimentConfig::new(seed)
        };
        let curve = substitution_experiment(&cfg).unwrap();
        let (first, last) = curve.endpoints();
        ratios.push(last.value / first.value);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let pass = (mean - SUBSTITUTION_RATIO).abs() <= SUBSTITUTION_RATIO_TOL;
    verdict(
        9,
        "substitution_endpoint_ratio",
        pass,
        &format!(
            "mean end/start ratio = {mean:.3} over {} seeds (per-seed: {:?}), required {SUBSTITUTION_RATIO} +/- {SUBSTITUTION_RATIO_TOL}",
            SUBSTITUTION_SEEDS.len(),
            ratios.iter().map(|r| (r * 1000.0).round() / 1000.0).collect::<Vec<_>>()
        ),
    );
}

// ----- 10: adjusted curve shape (endpoint clause known to fail) --------------

#[test]
fn acceptance_10_adjusted_curve_shape() {
    let cfg = ExperimentConfig {
        record_every: 25,
        ..ExperimentConfig::new(1_010)
    };
    let curve = adjusted_experiment(&cfg).unwrap();
    let values: Vec<f64> = curve.points.iter().map(|p| p.value).collect();
    let last = values.len() - 1;

    let peak_idx = (0..values.len())
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap();
    let peak = values[peak_idx];
    let v0 = values[0];
    let vl = values[last];
    let interior_peak = peak_idx != 0 && peak_idx != last && peak > v0 && peak > vl;

    // A secondary strict local maximum only breaks unimodality if it rises
    // meaningfully above the valley separating it from the main peak.
    let floor = peak - v0.min(vl);
    let mut worst_prominence = 0.0_f64;
    for i in 1..last {
        if i == peak_idx || !(values[i] > values[i - 1] && values[i] > values[i + 1]) {
            continue;
        }
        let (lo, hi) = if i < peak_idx { (i, peak_idx) } else { (peak_idx, i) };
        let saddle = values[lo..=hi].iter().cloned().fold(f64::INFINITY, f64::min);
        worst_prominence = worst_prominence.max(values[i] - saddle);
    }
    let unimodal = interior_peak && worst_prominence <= UNIMODAL_PROMINENCE * floor;

    let endpoint_gap = (v0 - vl).abs();
    let endpoints_close = endpoint_gap <= ENDPOINT_GAP_FRACTION * peak;

    let pass = unimodal && endpoints_close;
    verdict(
        10,
        "adjusted_curve_shape",
        pass,
        &format!(
            "unimodal interior peak: {unimodal} (peak {peak:.1} at step {}, worst secondary prominence {worst_prominence:.2}); endpoint gap = {endpoint_gap:.1} = {:.0}% of peak, required <= {:.0}%; the fixed calibration leaves the fully-randomized tail above the identical-set start",
            curve.points[peak_idx].step,
            100.0 * endpoint_gap / peak,
            100.0 * ENDPOINT_GAP_FRACTION
        ),
    );
}

// ----- 11: network sweep peaks at criticality --------------------------------

#[test]
fn acceptance_11_network_sweep_peaks_at_criticality() {
    let mut details = Vec::new();
    let mut pass = true;
    for (label, config) in [
        ("reduced", SweepConfig::reduced(10, 111_111).unwrap()),
        ("full", SweepConfig::full(20, 222_222).unwrap()),
    ] {
        let k = config.k;
        let result = sweep(&config).unwrap();
        let mean_row = result.argmax_mean();
        let std_row = result.argmax_std();
        let mean_lambda = lambda_exponent(k, mean_row.p);
        let std_lambda = lambda_exponent(k, std_row.p);
        pass &= mean_lambda.abs() <= SWEEP_MEAN_LAMBDA_TOL
            && std_lambda.abs() <= SWEEP_STD_LAMBDA_TOL;
        details.push(format!(
            "{label}: mean peak p = {:.2} (exponent {mean_lambda:+.3}, bound {SWEEP_MEAN_LAMBDA_TOL}), std peak p = {:.2} (exponent {std_lambda:+.3}, bound {SWEEP_STD_LAMBDA_TOL})",
            mean_row.p, std_row.p
        ));
    }
    verdict(
        11,
        "network_sweep_peaks_at_criticality",
        pass,
        &details.join("; "),
    );
}

// ----- 12: trajectories match an independent evaluator ------------------------

/// Re-evaluates one synchronous update with nothing shared with the library:
/// the first listed input is the high-order bit of the table index.
fn brute_step(inputs: &[Vec<usize>], tables: &[Vec<u8>], state: &[u8]) -> Vec<u8> {
    inputs
        .iter()
        .zip(tables)
        .map(|(wires, table)| {
            let k = wires.len();
            let mut idx = 0usize;
            for (pos, &src) in wires.iter().enumerate() {
                if state[src] == 1 {
                    idx += 1 << (k - 1 - pos);
                }
            }
            table[idx]
        })
        .collect()
}

#[test]
fn acceptance_12_network_update_rule_matches_brute_force() {
    let mut checked_states = 0usize;
    for i in 0..NETWORK_SEEDS {
        let n = 1 + i % 4;
        let k = 1 + (i / 4) % n;
        let p = 0.2 + 0.15 * (i % 5) as f64;
        let burn_in = i % 4;
        let len = 2 + i % 3;

        let mut net_rng = seeded_rng(120_000 + i as u64);
        let net = BooleanNetwork::generate(n, k, p, &mut net_rng).unwrap();

        let traj_seed = 130_000 + i as u64;
        let mut traj_rng = seeded_rng(traj_seed);
        let traj = net.trajectory(burn_in, len, &mut traj_rng).unwrap();

        // The trajectory draws exactly one random state; replay that draw
        // and iterate the independent evaluator.
        let mut replay_rng = seeded_rng(traj_seed);
        let mut state = BitString::random(n, &mut replay_rng).unwrap().bits().to_vec();
        for _ in 0..burn_in {
            state = brute_step(net.inputs(), net.tables(), &state);
        }
        for recorded in traj.states() {
            state = brute_step(net.inputs(), net.tables(), &state);
            assert_eq!(
                recorded.bits(),
                &state[..],
                "trajectory mismatch at network {i} (n={n}, k={k})"
            );
            checked_states += 1;
        }
    }
    verdict(
        12,
        "network_update_rule_matches_brute_force",
        true,
        &format!("{checked_states} recorded states across {NETWORK_SEEDS} networks match the independent evaluator"),
    );
}
