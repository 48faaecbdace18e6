//! Random Boolean networks and the criticality sweep.
//!
//! A network has `n` nodes, each wired to `k` distinct input nodes (possibly
//! including itself) and equipped with a random truth table whose entries
//! are 1 with probability `p` (the bias). All nodes update synchronously.
//!
//! The annealed sensitivity of such an ensemble is `s = 2·k·p·(1−p)`; its
//! logarithm is the Lyapunov-style order parameter `λ = ln s`. Networks are
//! ordered for `s < 1`, chaotic for `s > 1`, and critical at `s = 1`
//! (for `k = 3` the critical bias is `p ≈ 0.2113`).
//!
//! [`sweep`] scores trajectory sets with the calibrated set complexity:
//! for each bias it generates networks, records a short post-burn-in
//! trajectory from each, and computes the set complexity of the trajectory
//! states. The mean peaks near criticality — ordered trajectories collapse
//! to near-identical states, chaotic ones to mutually random states, and
//! both ends score near zero.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bitstring::{BitString, EncodingMode};
use crate::compression::CompressorSpec;
use crate::dist::{calibrate, distance_matrix};
use crate::error::{Error, Result};
use crate::measures::{psi, Kernel, Norm, StringSet};
use crate::seed::{derive_seed, seeded_rng};

/// A synchronous random Boolean network.
#[derive(Debug, Clone)]
pub struct BooleanNetwork {
    n: usize,
    k: usize,
    /// Per node, the `k` distinct input node indices. The first listed
    /// input is the most significant bit of the truth-table index.
    inputs: Vec<Vec<usize>>,
    /// Per node, `2^k` outputs (0 or 1), indexed by the input pattern.
    tables: Vec<Vec<u8>>,
}

impl BooleanNetwork {
    /// Samples a network: each node draws `k` distinct inputs uniformly
    /// (self-inputs allowed) and a truth table with i.i.d. Bernoulli(`p`)
    /// entries.
    pub fn generate(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("network needs at least 1 node"));
        }
        if k == 0 || k > n {
            return Err(Error::domain(format!(
                "in-degree k = {k} must satisfy 1 <= k <= n = {n}"
            )));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("bias p = {p} must lie in (0, 1)")));
        }
        let inputs = (0..n)
            .map(|_| {
                let mut chosen: Vec<usize> = Vec::with_capacity(k);
                while chosen.len() < k {
                    let c = rng.gen_range(0..n);
                    if !chosen.contains(&c) {
                        chosen.push(c);
                    }
                }
                chosen
            })
            .collect();
        let tables = (0..n)
            .map(|_| (0..1usize << k).map(|_| rng.gen_bool(p) as u8).collect())
            .collect();
        Ok(BooleanNetwork { n, k, inputs, tables })
    }

    /// Builds a network from explicit wiring and tables. Every node must
    /// have the same in-degree `k`, distinct in-range inputs, and a table
    /// of exactly `2^k` entries, each 0 or 1.
    pub fn from_parts(inputs: Vec<Vec<usize>>, tables: Vec<Vec<u8>>) -> Result<Self> {
        let n = inputs.len();
        if n == 0 {
            return Err(Error::domain("network needs at least 1 node"));
        }
        if tables.len() != n {
            return Err(Error::domain(format!(
                "{} input lists but {} tables",
                n,
                tables.len()
            )));
        }
        let k = inputs[0].len();
        if k == 0 || k > n {
            return Err(Error::domain(format!(
                "in-degree k = {k} must satisfy 1 <= k <= n = {n}"
            )));
        }
        for (v, ins) in inputs.iter().enumerate() {
            if ins.len() != k {
                return Err(Error::domain(format!(
                    "node {v} has {} inputs, expected k = {k}",
                    ins.len()
                )));
            }
            for (t, &src) in ins.iter().enumerate() {
                if src >= n {
                    return Err(Error::domain(format!(
                        "node {v} input {t} points at node {src}, but n = {n}"
                    )));
                }
                if ins[..t].contains(&src) {
                    return Err(Error::domain(format!(
                        "node {v} lists input {src} twice"
                    )));
                }
            }
        }
        for (v, table) in tables.iter().enumerate() {
            if table.len() != 1 << k {
                return Err(Error::domain(format!(
                    "node {v} table has {} entries, expected 2^{k} = {}",
                    table.len(),
                    1 << k
                )));
            }
            if let Some(&bad) = table.iter().find(|&&b| b > 1) {
                return Err(Error::domain(format!(
                    "node {v} table contains {bad}, entries must be 0 or 1"
                )));
            }
        }
        Ok(BooleanNetwork { n, k, inputs, tables })
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    /// In-degree of every node.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Per-node input lists (first input = most significant table-index
    /// bit).
    pub fn inputs(&self) -> &[Vec<usize>] {
        &self.inputs
    }

    /// Per-node truth tables, `2^k` entries each.
    pub fn tables(&self) -> &[Vec<u8>] {
        &self.tables
    }

    /// One synchronous update. The table index of node `v` is built by
    /// reading its inputs in listed order, most significant bit first.
    pub fn step(&self, state: &BitString) -> Result<BitString> {
        if state.len() != self.n {
            return Err(Error::domain(format!(
                "state has {} bits but the network has {} nodes",
                state.len(),
                self.n
            )));
        }
        let bits = state.bits();
        let next: Vec<u8> = (0..self.n)
            .map(|v| {
                let mut idx = 0usize;
                for &src in &self.inputs[v] {
                    idx = (idx << 1) | bits[src] as usize;
                }
                self.tables[v][idx]
            })
            .collect();
        BitString::from_bits(next)
    }

    /// Runs the network from a uniform random initial state, discards
    /// `burn_in` update steps, then records the next `len` states.
    ///
    /// The initial random state is never recorded: with `burn_in = 0` the
    /// first recorded state is `step(initial)`. Exactly one random draw is
    /// made (the initial state); everything after is deterministic.
    pub fn trajectory(
        &self,
        burn_in: usize,
        len: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Trajectory> {
        if len == 0 {
            return Err(Error::domain("trajectory length must be at least 1"));
        }
        let mut state = BitString::random(self.n, rng)?;
        for _ in 0..burn_in {
            state = self.step(&state)?;
        }
        let mut states = Vec::with_capacity(len);
        for _ in 0..len {
            state = self.step(&state)?;
            states.push(state.clone());
        }
        Ok(Trajectory { states, burn_in })
    }
}

/// A recorded run of a Boolean network.
#[derive(Debug, Clone)]
pub struct Trajectory {
    states: Vec<BitString>,
    burn_in: usize,
}

impl Trajectory {
    /// The recorded states, oldest first.
    pub fn states(&self) -> &[BitString] {
        &self.states
    }

    /// Update steps discarded before recording began.
    pub fn burn_in(&self) -> usize {
        self.burn_in
    }

    /// Packages the states as a string set for complexity scoring.
    pub fn to_string_set(
        &self,
        spec: CompressorSpec,
        encoding: EncodingMode,
    ) -> Result<StringSet> {
        StringSet::new(self.states.clone(), spec, encoding)
    }
}

/// Annealed sensitivity `s = 2·k·p·(1−p)` of the (k, p) ensemble.
pub fn sensitivity(k: usize, p: f64) -> f64 {
    2.0 * k as f64 * p * (1.0 - p)
}

/// Order parameter `λ = ln s`; negative when ordered, positive when
/// chaotic, zero at criticality.
pub fn lambda_exponent(k: usize, p: f64) -> f64 {
    sensitivity(k, p).ln()
}

/// The bias `p ≤ 1/2` at which sensitivity equals 1 for the given `k`
/// (`k = 3` gives `p ≈ 0.21132`). No such bias exists below `k = 2`.
pub fn critical_bias(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain(format!(
            "sensitivity 2kp(1-p) cannot reach 1 for k = {k} (max is k/2)"
        )));
    }
    Ok((1.0 - (1.0 - 2.0 / k as f64).sqrt()) / 2.0)
}

/// Parameters of a criticality sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n: usize,
    pub k: usize,
    pub p_values: Vec<f64>,
    pub networks_per_p: usize,
    pub burn_in: usize,
    pub traj_len: usize,
    pub seed: u64,
    pub spec: CompressorSpec,
    pub encoding: EncodingMode,
}

/// The inclusive bias grid `p_min, p_min+step, …, p_max`, with each value
/// rounded to 6 decimals so accumulated float drift never leaks into
/// output.
pub fn bias_grid(p_min: f64, p_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::domain(format!("bias step {step} must be positive")));
    }
    if p_min > p_max {
        return Err(Error::domain(format!(
            "bias range is empty: p_min = {p_min} > p_max = {p_max}"
        )));
    }
    let count = ((p_max - p_min) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count)
        .map(|i| ((p_min + i as f64 * step) * 1e6).round() / 1e6)
        .collect();
    if grid.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
        return Err(Error::domain(format!(
            "bias grid [{p_min}, {p_max}] leaves (0, 1)"
        )));
    }
    Ok(grid)
}

impl SweepConfig {
    /// The standard sweep: n = 1000, k = 3, 20-state trajectories after a
    /// 100-step burn-in, biases 0.05–0.50 in steps of 0.01.
    pub fn full(networks_per_p: usize, seed: u64) -> Result<Self> {
        Ok(SweepConfig {
            n: 1000,
            k: 3,
            p_values: bias_grid(0.05, 0.50, 0.01)?,
            networks_per_p,
            burn_in: 100,
            traj_len: 20,
            seed,
            spec: CompressorSpec::default(),
            encoding: EncodingMode::Ascii01,
        })
    }

    /// A cheaper preset (n = 400, trajectories unchanged at 20 states)
    /// that preserves the critical-peak location.
    pub fn reduced(networks_per_p: usize, seed: u64) -> Result<Self> {
        let mut cfg = Self::full(networks_per_p, seed)?;
        cfg.n = 400;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("sweep needs n >= 1"));
        }
        if self.k == 0 || self.k > self.n {
            return Err(Error::domain(format!(
                "in-degree k = {} must satisfy 1 <= k <= n = {}",
                self.k, self.n
            )));
        }
        if self.p_values.is_empty() {
            return Err(Error::domain("sweep needs at least one bias value"));
        }
        for &p in &self.p_values {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::domain(format!("bias p = {p} must lie in (0, 1)")));
            }
        }
        if self.networks_per_p < 2 {
            return Err(Error::domain(
                "sweep needs at least 2 networks per bias (sample std)",
            ));
        }
        if self.traj_len < 2 {
            return Err(Error::domain(
                "trajectory sets need at least 2 states for pairwise measures",
            ));
        }
        Ok(())
    }
}

/// Aggregated results for one bias value.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub p: f64,
    pub s: f64,
    pub lambda: f64,
    pub mean_psi: f64,
    pub std_psi: f64,
    /// Per-network calibrated psi values in network-index order.
    pub psis: Vec<f64>,
}

/// A completed sweep: one row per bias, in grid order.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// The row with the highest mean psi.
    pub fn argmax_mean(&self) -> &SweepRow {
        self.rows
            .iter()
            .max_by(|a, b| a.mean_psi.total_cmp(&b.mean_psi))
            .expect("sweep has at least one row")
    }

    /// The row with the highest psi standard deviation.
    pub fn argmax_std(&self) -> &SweepRow {
        self.rows
            .iter()
            .max_by(|a, b| a.std_psi.total_cmp(&b.std_psi))
            .expect("sweep has at least one row")
    }

    /// CSV with the pinned header
    /// `p,s,lambda,mean_psi,std_psi,n,k,networks,traj_len,burn_in,seed`,
    /// one row per bias.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,s,lambda,mean_psi,std_psi,n,k,networks,traj_len,burn_in,seed\n");
        let c = &self.config;
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                row.p,
                row.s,
                row.lambda,
                row.mean_psi,
                row.std_psi,
                c.n,
                c.k,
                c.networks_per_p,
                c.traj_len,
                c.burn_in,
                c.seed
            ));
        }
        out
    }
}

/// Calibrated set complexity of one network's trajectory. Networks whose
/// trajectories are too uniform to calibrate (all recorded states
/// effectively identical, as deep in the ordered regime) score 0 — the
/// correct limit, since a constant set carries no set complexity.
fn network_psi(config: &SweepConfig, p: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let net = BooleanNetwork::generate(config.n, config.k, p, rng)?;
    let traj = net.trajectory(config.burn_in, config.traj_len, rng)?;
    let set = traj.to_string_set(config.spec, config.encoding)?;
    let cal = match calibrate(&set, rng) {
        Ok(cal) => cal,
        Err(Error::Calibration { .. }) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    let d = distance_matrix(&set, Some(&cal))?;
    Ok(psi(&set, &d, &Kernel::DTimesOneMinusD, Norm::Xi)?.psi)
}

/// Runs the sweep. Every (bias, network) job owns a seed derived from
/// `(config.seed, bias index, network index)`, so results are independent
/// of thread count and bitwise reproducible.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let nets = config.networks_per_p;
    let jobs = config.p_values.len() * nets;
    let psis: Vec<f64> = (0..jobs)
        .into_par_iter()
        .map(|job| {
            let (pi, ni) = (job / nets, job % nets);
            let p = config.p_values[pi];
            let mut rng = seeded_rng(derive_seed(config.seed, "rbn-net", pi as u64, ni as u64));
            network_psi(config, p, &mut rng)
        })
        .collect::<Result<_>>()?;
    let rows = config
        .p_values
        .iter()
        .enumerate()
        .map(|(pi, &p)| {
            let slice = &psis[pi * nets..(pi + 1) * nets];
            let mean = slice.iter().sum::<f64>() / nets as f64;
            let var = slice.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
                / (nets as f64 - 1.0);
            SweepRow {
                p,
                s: sensitivity(config.k, p),
                lambda: lambda_exponent(config.k, p),
                mean_psi: mean,
                std_psi: var.sqrt(),
                psis: slice.to_vec(),
            }
        })
        .collect();
    Ok(SweepResult { config: config.clone(), rows })
}
