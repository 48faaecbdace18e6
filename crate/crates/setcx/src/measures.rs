//! The set-complexity measure family over string sets.
//!
//! Given a set `S` with cached compressed sizes `C(x_i)` and a pairwise
//! distance matrix `d_ij`, the family is (with `C_max(i,j) = max(C_i, C_j)`
//! and a normalization factor `ν` from [`Norm`]):
//!
//! | measure      | definition                               |
//! |--------------|------------------------------------------|
//! | `theta`      | `Σ_i C(x_i)` — the plain information sum |
//! | `theta_pair` | `ν · Σ_pairs C_max`                       |
//! | `lambda`     | `ν · Σ_pairs C_max · d` — weighted average distance |
//! | `phi`        | `ν · Σ_pairs C_max · (1 − d)` — mutual-information sum |
//! | `psi`        | `ν · Σ_pairs C_max · kernel(d)` — set complexity |
//! | `delta_sq`   | `ν · Σ_pairs C_max · d² − lambda²` — fluctuation term |
//!
//! With the default kernel `d(1−d)` the exact mean-field decomposition
//! `psi = lambda·(1 − lambda) − delta_sq` holds for any `ν`; `psi` vanishes
//! when all distances are 0 (all strings identical) and when all are 1
//! (mutually random strings), peaking for sets that balance shared context
//! against novelty.
//!
//! All pair sums iterate in a canonical order (members sorted by increasing
//! compressed size, ties by encoded bytes), which makes every measure
//! exactly invariant — bit for bit — under reordering of the input
//! collection.

use rayon::prelude::*;

use crate::bitstring::{BitString, EncodingMode};
use crate::compression::CompressorSpec;
use crate::dist::DistanceMatrix;
use crate::error::{Error, Result};

/// Normalization factor for pair sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Norm {
    /// `ξ(N) = 1/(N−1)`: the computational set-complexity normalization
    /// (default).
    #[default]
    Xi,
    /// `2/(N(N−1))`: plain mean over pairs, the "average conditional
    /// complexity" reading.
    PairsMean,
}

impl Norm {
    /// The factor `ν` for a set of `n` members.
    pub fn factor(self, n: usize) -> f64 {
        match self {
            Norm::Xi => 1.0 / (n as f64 - 1.0),
            Norm::PairsMean => 2.0 / (n as f64 * (n as f64 - 1.0)),
        }
    }

    /// Parses the id used in CLI flags (`xi` or `pairs-mean`).
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "xi" => Ok(Norm::Xi),
            "pairs-mean" => Ok(Norm::PairsMean),
            other => Err(Error::config(format!(
                "unknown norm {other:?} (expected xi or pairs-mean)"
            ))),
        }
    }

    /// The id used in CLI flags and output headers.
    pub fn id(self) -> &'static str {
        match self {
            Norm::Xi => "xi",
            Norm::PairsMean => "pairs-mean",
        }
    }
}

/// One term of a generalized kernel: `a · d^alpha · (1−d)^beta`.
///
/// Exponents must be ≥ 1 so every term vanishes at both `d = 0` and
/// `d = 1` — the defining constraint of a set-complexity kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTerm {
    pub alpha: u32,
    pub beta: u32,
    pub coefficient: f64,
}

/// Pairwise distance weighting function.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// `d(1−d)` — the set-complexity kernel (default).
    DTimesOneMinusD,
    /// `d` — recovers the weighted average distance.
    D,
    /// `1−d` — recovers the mutual-information sum.
    OneMinusD,
    /// `d·ln d`, continuously extended to 0 at the endpoints.
    DLnD,
    /// `(1−d)·ln(1−d)`, continuously extended to 0 at the endpoints.
    OneMinusDLnOneMinusD,
    /// Finite sum of `a·d^alpha(1−d)^beta` terms; build via
    /// [`Kernel::general`].
    General(Vec<KernelTerm>),
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::DTimesOneMinusD
    }
}

impl Kernel {
    /// Builds a generalized kernel, validating that all exponents are ≥ 1.
    pub fn general(terms: Vec<KernelTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("generalized kernel needs at least one term"));
        }
        for t in &terms {
            if t.alpha < 1 || t.beta < 1 {
                return Err(Error::domain(format!(
                    "kernel exponents must be >= 1 so the kernel vanishes at \
                     d = 0 and d = 1 (got alpha = {}, beta = {})",
                    t.alpha, t.beta
                )));
            }
        }
        Ok(Kernel::General(terms))
    }

    /// Parses the id used in CLI flags.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "d1d" => Ok(Kernel::DTimesOneMinusD),
            "d" => Ok(Kernel::D),
            "1d" => Ok(Kernel::OneMinusD),
            "dlnd" => Ok(Kernel::DLnD),
            "1dln1d" => Ok(Kernel::OneMinusDLnOneMinusD),
            other => Err(Error::config(format!(
                "unknown kernel {other:?} (expected d1d, d, 1d, dlnd, or 1dln1d)"
            ))),
        }
    }

    /// The id used in CLI flags and output headers.
    pub fn id(&self) -> String {
        match self {
            Kernel::DTimesOneMinusD => "d1d".to_string(),
            Kernel::D => "d".to_string(),
            Kernel::OneMinusD => "1d".to_string(),
            Kernel::DLnD => "dlnd".to_string(),
            Kernel::OneMinusDLnOneMinusD => "1dln1d".to_string(),
            Kernel::General(terms) => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|t| format!("{}:{}:{}", t.alpha, t.beta, t.coefficient))
                    .collect();
                format!("general({})", parts.join(","))
            }
        }
    }

    /// Evaluates the kernel at a distance `d ∈ [0, 1]`. Logarithmic kernels
    /// use the continuous extension `x·ln x → 0` at the endpoints.
    pub fn eval(&self, d: f64) -> f64 {
        match self {
            Kernel::DTimesOneMinusD => d * (1.0 - d),
            Kernel::D => d,
            Kernel::OneMinusD => 1.0 - d,
            Kernel::DLnD => {
                if d <= 0.0 {
                    0.0
                } else {
                    d * d.ln()
                }
            }
            Kernel::OneMinusDLnOneMinusD => {
                let u = 1.0 - d;
                if u <= 0.0 {
                    0.0
                } else {
                    u * u.ln()
                }
            }
            Kernel::General(terms) => terms
                .iter()
                .map(|t| t.coefficient * d.powi(t.alpha as i32) * (1.0 - d).powi(t.beta as i32))
                .sum(),
        }
    }
}

/// An ordered collection of bit strings with cached encodings and
/// compressed sizes.
///
/// `order` sorts member indices by increasing compressed size (ties broken
/// by encoded bytes, then original index); measure sums iterate pairs in
/// this order, making them independent of how the caller arranged the
/// collection.
#[derive(Debug, Clone)]
pub struct StringSet {
    members: Vec<BitString>,
    encoded: Vec<Vec<u8>>,
    sizes: Vec<usize>,
    order: Vec<usize>,
    spec: CompressorSpec,
    encoding: EncodingMode,
}

impl StringSet {
    /// Builds a set, computing all compressed sizes (in parallel) and the
    /// complexity ordering. Needs at least one member.
    pub fn new(
        members: Vec<BitString>,
        spec: CompressorSpec,
        encoding: EncodingMode,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::domain("string set must have at least 1 member"));
        }
        let encoded: Vec<Vec<u8>> = members.par_iter().map(|m| m.encode(encoding)).collect();
        let sizes: Vec<usize> = encoded.par_iter().map(|b| spec.compressed_size(b)).collect();
        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by(|&a, &b| {
            sizes[a]
                .cmp(&sizes[b])
                .then_with(|| encoded[a].cmp(&encoded[b]))
                .then_with(|| a.cmp(&b))
        });
        Ok(StringSet { members, encoded, sizes, order, spec, encoding })
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Always false: empty sets cannot be constructed.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The members, in the caller's original order.
    pub fn members(&self) -> &[BitString] {
        &self.members
    }

    /// Cached compressed size of member `i` (original indexing).
    pub fn size(&self, i: usize) -> usize {
        self.sizes[i]
    }

    /// All cached compressed sizes (original indexing).
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Cached encoded bytes of member `i` (original indexing).
    pub(crate) fn encoded(&self, i: usize) -> &[u8] {
        &self.encoded[i]
    }

    /// Member indices sorted by increasing complexity.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// The backend this set's sizes were computed with.
    pub fn spec(&self) -> &CompressorSpec {
        &self.spec
    }

    /// The byte encoding this set's sizes were computed with.
    pub fn encoding(&self) -> EncodingMode {
        self.encoding
    }

    /// Pairs `(i, j)` of original indices in canonical (complexity-sorted)
    /// iteration order.
    fn canonical_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let ord = &self.order;
        (0..ord.len()).flat_map(move |a| {
            ((a + 1)..ord.len()).map(move |b| (ord[a], ord[b]))
        })
    }
}

/// Per-pair detail row of a [`MeasureReport`].
#[derive(Debug, Clone, Copy)]
pub struct PairTerm {
    /// Original indices of the pair, `i < j`.
    pub i: usize,
    pub j: usize,
    /// The larger compressed size of the pair.
    pub c_max: f64,
    /// The pair's (possibly calibrated) distance.
    pub d: f64,
    /// `c_max · kernel(d)` before normalization.
    pub contribution: f64,
}

/// The full measure family of one set/distance-matrix pair.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub n: usize,
    pub norm: Norm,
    pub theta: f64,
    pub theta_pair: f64,
    pub lambda: f64,
    pub phi: f64,
    pub psi: f64,
    pub delta_sq: f64,
    /// Per-pair contributions (kernel-weighted), when requested.
    pub per_pair: Option<Vec<PairTerm>>,
}

impl MeasureReport {
    /// The pinned CSV header for report rows.
    pub fn csv_header() -> &'static str {
        "n,norm,theta,theta_pair,lambda,phi,psi,delta_sq"
    }

    /// One CSV row matching [`csv_header`](Self::csv_header).
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.norm.id(),
            self.theta,
            self.theta_pair,
            self.lambda,
            self.phi,
            self.psi,
            self.delta_sq
        )
    }
}

fn check_consistent(set: &StringSet, d: &DistanceMatrix) -> Result<()> {
    if set.len() < 2 {
        return Err(Error::domain("pairwise measures need at least 2 strings"));
    }
    if d.n() != set.len() {
        return Err(Error::domain(format!(
            "distance matrix is {}x{} but the set has {} members",
            d.n(),
            d.n(),
            set.len()
        )));
    }
    Ok(())
}

/// `theta`: the plain sum of member complexities, in bytes.
pub fn theta(set: &StringSet) -> Result<f64> {
    // Sum in canonical order so the value is bit-identical under input
    // reordering.
    Ok(set.order().iter().map(|&i| set.size(i) as f64).sum())
}

/// `theta_pair`: `ν · Σ_pairs C_max` — the kernel-free complexity weight of
/// the pair sum; the exact pairwise identity `phi + lambda = theta_pair`
/// holds for every norm.
pub fn theta_pair(set: &StringSet, norm: Norm) -> Result<f64> {
    if set.len() < 2 {
        return Err(Error::domain("pairwise measures need at least 2 strings"));
    }
    let sum: f64 = set
        .canonical_pairs()
        .map(|(i, j)| set.size(i).max(set.size(j)) as f64)
        .sum();
    Ok(norm.factor(set.len()) * sum)
}

/// `lambda`: the complexity-weighted average distance.
pub fn lambda_avg(set: &StringSet, d: &DistanceMatrix, norm: Norm) -> Result<f64> {
    check_consistent(set, d)?;
    let sum: f64 = set
        .canonical_pairs()
        .map(|(i, j)| set.size(i).max(set.size(j)) as f64 * d.get(i, j))
        .sum();
    Ok(norm.factor(set.len()) * sum)
}

/// `phi`: the complexity-weighted mutual-information sum.
pub fn phi(set: &StringSet, d: &DistanceMatrix, norm: Norm) -> Result<f64> {
    check_consistent(set, d)?;
    let sum: f64 = set
        .canonical_pairs()
        .map(|(i, j)| set.size(i).max(set.size(j)) as f64 * (1.0 - d.get(i, j)))
        .sum();
    Ok(norm.factor(set.len()) * sum)
}

/// `psi` with the full companion family; `with_pairs` additionally records
/// per-pair contributions.
pub fn report(
    set: &StringSet,
    d: &DistanceMatrix,
    kernel: &Kernel,
    norm: Norm,
    with_pairs: bool,
) -> Result<MeasureReport> {
    check_consistent(set, d)?;
    let n = set.len();
    let nu = norm.factor(n);
    let mut sum_cmax = 0.0;
    let mut sum_d = 0.0;
    let mut sum_d2 = 0.0;
    let mut sum_kernel = 0.0;
    let mut pairs = with_pairs.then(Vec::new);
    for (i, j) in set.canonical_pairs() {
        let c_max = set.size(i).max(set.size(j)) as f64;
        let dij = d.get(i, j);
        let contribution = c_max * kernel.eval(dij);
        sum_cmax += c_max;
        sum_d += c_max * dij;
        sum_d2 += c_max * dij * dij;
        sum_kernel += contribution;
        if let Some(p) = pairs.as_mut() {
            p.push(PairTerm {
                i: i.min(j),
                j: i.max(j),
                c_max,
                d: dij,
                contribution,
            });
        }
    }
    let lambda = nu * sum_d;
    Ok(MeasureReport {
        n,
        norm,
        theta: theta(set)?,
        theta_pair: nu * sum_cmax,
        lambda,
        phi: nu * (sum_cmax - sum_d),
        psi: nu * sum_kernel,
        delta_sq: nu * sum_d2 - lambda * lambda,
        per_pair: pairs,
    })
}

/// `psi`: the set complexity under the given kernel and norm.
pub fn psi(
    set: &StringSet,
    d: &DistanceMatrix,
    kernel: &Kernel,
    norm: Norm,
) -> Result<MeasureReport> {
    report(set, d, kernel, norm, false)
}

/// Generalized kernel sum: `ν · Σ_pairs C_max · Σ_t a_t d^α_t (1−d)^β_t`.
pub fn pi_general(
    set: &StringSet,
    d: &DistanceMatrix,
    terms: Vec<KernelTerm>,
    norm: Norm,
) -> Result<f64> {
    let kernel = Kernel::general(terms)?;
    Ok(report(set, d, &kernel, norm, false)?.psi)
}

/// The mean-field decomposition `(lambda, delta_sq, psi)`; the identity
/// `psi = lambda·(1 − lambda) − delta_sq` holds to floating tolerance for
/// either norm (it is exact algebra for the `d(1−d)` kernel).
pub fn decomposition(
    set: &StringSet,
    d: &DistanceMatrix,
    norm: Norm,
) -> Result<(f64, f64, f64)> {
    let r = report(set, d, &Kernel::DTimesOneMinusD, norm, false)?;
    Ok((r.lambda, r.delta_sq, r.psi))
}

/// Plain mean of the strict lower-triangle distances.
pub fn avg_distance(d: &DistanceMatrix) -> Result<f64> {
    if d.n() < 2 {
        return Err(Error::domain("average distance needs n >= 2"));
    }
    let pairs = crate::dist::lower_triangle(d.n());
    let total: f64 = pairs.iter().map(|&(i, j)| d.get(i, j)).sum();
    Ok(total / pairs.len() as f64)
}

/// Conditional complexity estimate `d · max(C(x), C(y))`: how much of the
/// more complex string remains to be described given the other.
pub fn conditional_complexity(cx: usize, cy: usize, d: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::domain(format!("distance {d} outside [0, 1]")));
    }
    Ok(d * cx.max(cy) as f64)
}

/// Mutual-information estimate `(1 − d) · max(C(x), C(y))`: the information
/// the two strings share.
pub fn mutual_info_estimate(cx: usize, cy: usize, d: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::domain(format!("distance {d} outside [0, 1]")));
    }
    Ok((1.0 - d) * cx.max(cy) as f64)
}
