//! Normalized compression distance (NCD), calibration, and distance
//! matrices.
//!
//! The raw pairwise distance is
//!
//! ```text
//! ncd(x, y) = (C(xy) − min(C(x), C(y))) / max(C(x), C(y))
//! ```
//!
//! where `C` is a compressed size. Raw values carry estimator bias: a string
//! is never at distance zero from itself (the compressed copy costs a few
//! bytes) and independent strings can exceed 1. [`Calibration`] linearly
//! rescales raw values so the set's observable floor maps to 0 and the
//! observable ceiling (distances among bit-permuted copies, which are
//! mutually random by construction) maps to 1.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bitstring::BitString;
use crate::compression::CompressorSpec;
use crate::error::{Error, Result};
use crate::measures::StringSet;

/// Computes the raw NCD of two encoded byte strings given their cached
/// compressed sizes. Concatenation order is canonical — smaller compressed
/// size first, ties broken by lexicographic byte order — so the result is
/// symmetric in its arguments by construction.
pub(crate) fn ncd_from_encoded(
    x: &[u8],
    cx: usize,
    y: &[u8],
    cy: usize,
    spec: &CompressorSpec,
) -> f64 {
    let (a, b) = if (cx, x) <= (cy, y) { (x, y) } else { (y, x) };
    let joint = spec.joint_size(a, b) as f64;
    let (lo, hi) = (cx.min(cy) as f64, cx.max(cy) as f64);
    (joint - lo) / hi
}

/// Raw NCD of two bit strings under the given backend and encoding.
///
/// The value is typically a small positive number for `y = x` (the
/// calibration floor) and close to (in principle even above) 1 for
/// independent random strings.
pub fn ncd_raw(
    x: &BitString,
    y: &BitString,
    spec: &CompressorSpec,
    encoding: crate::bitstring::EncodingMode,
) -> f64 {
    let xb = x.encode(encoding);
    let yb = y.encode(encoding);
    let cx = spec.compressed_size(&xb);
    let cy = spec.compressed_size(&yb);
    ncd_from_encoded(&xb, cx, &yb, cy, spec)
}

/// Linear rescaling of raw NCD values onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    d_min: f64,
    d_max: f64,
}

impl Calibration {
    /// Builds a calibration; requires `0 ≤ d_min < d_max`.
    pub fn new(d_min: f64, d_max: f64) -> Result<Self> {
        if !(d_min >= 0.0 && d_max > d_min) {
            return Err(Error::Calibration { d_min, d_max });
        }
        Ok(Calibration { d_min, d_max })
    }

    /// The observable floor (minimum self-distance in the calibrated set).
    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    /// The observable ceiling (maximum distance among permuted copies).
    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    /// Maps a raw distance to `clamp((d − d_min)/(d_max − d_min), 0, 1)`.
    pub fn apply(&self, d: f64) -> f64 {
        ((d - self.d_min) / (self.d_max - self.d_min)).clamp(0.0, 1.0)
    }
}

/// The observable floor of a set: the minimum over members of `ncd(x, x)`,
/// floored at 0.
pub fn min_self_distance(set: &StringSet) -> Result<f64> {
    let spec = *set.spec();
    Ok((0..set.len())
        .into_par_iter()
        .map(|i| {
            let xb = set.encoded(i);
            ncd_from_encoded(xb, set.size(i), xb, set.size(i), &spec)
        })
        .reduce(|| f64::INFINITY, f64::min)
        .max(0.0))
}

/// The observable ceiling of a set: one seeded bit-permuted copy is drawn
/// per member and the maximum raw NCD over all pairs of those copies is
/// returned. Permutation preserves length and bit balance, so the copies
/// are mutually random strings with the same statistics as the originals.
pub fn max_permuted_distance(set: &StringSet, rng: &mut ChaCha8Rng) -> Result<f64> {
    if set.len() < 2 {
        return Err(Error::domain(
            "the permuted-copy ceiling needs at least 2 strings",
        ));
    }
    let spec = *set.spec();
    // Draw permutations serially from the caller's stream (order defines
    // the result), then size and compare pairs in parallel.
    let permuted: Vec<Vec<u8>> = set
        .members()
        .iter()
        .map(|m| m.permuted(rng).encode(set.encoding()))
        .collect();
    let sizes: Vec<usize> = permuted
        .par_iter()
        .map(|b| spec.compressed_size(b))
        .collect();
    let pairs: Vec<(usize, usize)> = lower_triangle(set.len());
    Ok(pairs
        .into_par_iter()
        .map(|(i, j)| {
            ncd_from_encoded(&permuted[i], sizes[i], &permuted[j], sizes[j], &spec)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max))
}

/// Measures the observable distance range of a set:
/// [`min_self_distance`] becomes the floor, [`max_permuted_distance`] the
/// ceiling.
///
/// Fails with a calibration error when `d_max ≤ d_min` (degenerate sets:
/// identical constant strings whose permutations equal themselves, strings
/// too short to carry any signal, ...).
pub fn calibrate(set: &StringSet, rng: &mut ChaCha8Rng) -> Result<Calibration> {
    if set.len() < 2 {
        return Err(Error::domain("calibration needs at least 2 strings"));
    }
    let d_min = min_self_distance(set)?;
    let d_max = max_permuted_distance(set, rng)?;
    Calibration::new(d_min, d_max)
}

/// All index pairs `(i, j)` with `i < j`, in row-major order.
pub(crate) fn lower_triangle(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Symmetric pairwise distance matrix with zero diagonal.
///
/// Stores the strict lower triangle; each unordered pair is evaluated
/// exactly once under the canonical concatenation order, so the matrix is
/// exactly symmetric, and parallel assembly is bit-identical to serial
/// (entries are independent and collected in a fixed order).
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    /// Entry (i, j), i < j, at index `pair_index(i, j)`.
    entries: Vec<f64>,
    calibrated: bool,
}

impl DistanceMatrix {
    /// Number of strings the matrix was built over.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether entries were calibrated (vs only clamped to `[0, 1]`).
    pub fn is_calibrated(&self) -> bool {
        self.calibrated
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        // Row-major position of (i, j) in the strict lower-triangle list.
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Distance between members `i` and `j`; 0 on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index out of range");
        if i == j {
            0.0
        } else {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            self.entries[self.pair_index(a, b)]
        }
    }

    /// Builds a matrix directly from pre-computed entries (synthetic
    /// matrices for identity checks and tests). `entries[k]` must follow
    /// row-major `i < j` order.
    pub fn from_lower_triangle(n: usize, entries: Vec<f64>, calibrated: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("distance matrix needs n >= 2"));
        }
        if entries.len() != n * (n - 1) / 2 {
            return Err(Error::domain(format!(
                "expected {} lower-triangle entries for n = {n}, got {}",
                n * (n - 1) / 2,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::domain(format!("distance {bad} outside [0, 1]")));
        }
        Ok(DistanceMatrix { n, entries, calibrated })
    }

    /// Writes the matrix as CSV: header `i,j,d`, one row per pair `i < j`.
    pub fn write_csv(&self, out: &mut impl std::io::Write) -> Result<()> {
        writeln!(out, "i,j,d")?;
        for (i, j) in lower_triangle(self.n) {
            writeln!(out, "{i},{j},{}", self.get(i, j))?;
        }
        Ok(())
    }
}

/// Computes the pairwise distance matrix of a set: calibrated through `cal`
/// when given, otherwise raw values clamped to `[0, 1]`. Pair evaluations
/// run in parallel over the strict lower triangle.
pub fn distance_matrix(set: &StringSet, cal: Option<&Calibration>) -> Result<DistanceMatrix> {
    if set.len() < 2 {
        return Err(Error::domain("distance matrix needs at least 2 strings"));
    }
    let spec = *set.spec();
    let entries: Vec<f64> = lower_triangle(set.len())
        .into_par_iter()
        .map(|(i, j)| {
            let d = ncd_from_encoded(
                set.encoded(i),
                set.size(i),
                set.encoded(j),
                set.size(j),
                &spec,
            );
            match cal {
                Some(c) => c.apply(d),
                None => d.clamp(0.0, 1.0),
            }
        })
        .collect();
    DistanceMatrix {
        n: set.len(),
        entries,
        calibrated: cal.is_some(),
    }
    .validated()
}

impl DistanceMatrix {
    fn validated(self) -> Result<Self> {
        debug_assert!(self.entries.iter().all(|d| (0.0..=1.0).contains(d)));
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::EncodingMode;
    use crate::seed::seeded_rng;

    fn make_set(strings: Vec<BitString>) -> StringSet {
        StringSet::new(strings, CompressorSpec::default(), EncodingMode::Ascii01).unwrap()
    }

    #[test]
    fn self_ncd_is_a_small_positive_floor() {
        let mut rng = seeded_rng(1);
        let x = BitString::random(1000, &mut rng).unwrap();
        let d = ncd_raw(&x, &x, &CompressorSpec::default(), EncodingMode::Ascii01);
        // Frozen observed band for the reference backend.
        assert!(
            (0.02..=0.15).contains(&d),
            "self-NCD {d} outside expected floor band"
        );
    }

    #[test]
    fn random_pairs_are_nearly_maximally_distant() {
        let mut rng = seeded_rng(2);
        let spec = CompressorSpec::default();
        let mut sum = 0.0;
        let n = 40;
        for _ in 0..n {
            let x = BitString::random(1000, &mut rng).unwrap();
            let y = BitString::random(1000, &mut rng).unwrap();
            sum += ncd_raw(&x, &y, &spec, EncodingMode::Ascii01);
        }
        let mean = sum / n as f64;
        // Frozen observed band for the reference backend (see also the
        // acceptance suite, which checks the published 0.92 target).
        assert!(
            (0.80..=0.92).contains(&mean),
            "mean random-pair NCD {mean}"
        );
    }

    #[test]
    fn calibration_anchors_map_to_zero_half_one() {
        let cal = Calibration::new(0.1, 0.9).unwrap();
        assert_eq!(cal.apply(0.1), 0.0);
        assert_eq!(cal.apply(0.9), 1.0);
        assert!((cal.apply(0.5) - 0.5).abs() < 1e-12);
        assert_eq!(cal.apply(0.0), 0.0);
        assert_eq!(cal.apply(1.5), 1.0);
    }

    #[test]
    fn degenerate_range_is_a_calibration_error() {
        assert!(Calibration::new(0.5, 0.5).is_err());
        assert!(Calibration::new(0.5, 0.2).is_err());
        assert!(Calibration::new(-0.1, 0.5).is_err());
    }

    #[test]
    fn identical_strings_calibrate_to_zero_distance() {
        let mut rng = seeded_rng(3);
        let x = BitString::random(1000, &mut rng).unwrap();
        let set = make_set(vec![x.clone(), x]);
        let cal = calibrate(&set, &mut rng).unwrap();
        let m = distance_matrix(&set, Some(&cal)).unwrap();
        assert_eq!(m.get(0, 1), 0.0);
    }

    #[test]
    fn permuted_pair_calibrates_near_one() {
        let mut rng = seeded_rng(4);
        // Balanced string so its permutation is statistically random.
        let mut bits = vec![0u8; 1000];
        bits[..500].fill(1);
        let x = BitString::from_bits(bits).unwrap();
        let y = x.permuted(&mut rng);
        let set = make_set(vec![x, y]);
        let cal = calibrate(&set, &mut rng).unwrap();
        let m = distance_matrix(&set, Some(&cal)).unwrap();
        assert!(m.get(0, 1) > 0.7, "calibrated distance {}", m.get(0, 1));
    }

    #[test]
    fn calibration_of_identical_constant_strings_fails() {
        // All-zeros strings: permutations equal the originals, so the
        // observable ceiling cannot exceed the floor.
        let zeros = BitString::from_bits(vec![0u8; 200]).unwrap();
        let set = make_set(vec![zeros.clone(), zeros]);
        let err = calibrate(&set, &mut seeded_rng(5)).unwrap_err();
        assert!(matches!(err, Error::Calibration { .. }), "{err:?}");
    }

    #[test]
    fn calibration_ceiling_matches_observed_band() {
        let mut rng = seeded_rng(6);
        let strings: Vec<BitString> =
            (0..25).map(|_| BitString::random(1000, &mut rng).unwrap()).collect();
        let set = make_set(strings);
        let cal = calibrate(&set, &mut rng).unwrap();
        assert!(
            (0.85..1.05).contains(&cal.d_max()),
            "d_max {} outside expected band",
            cal.d_max()
        );
        assert!(cal.d_min() < 0.15, "d_min {}", cal.d_min());
    }

    #[test]
    fn matrix_is_exactly_symmetric_with_zero_diagonal() {
        let mut rng = seeded_rng(7);
        let strings: Vec<BitString> =
            (0..6).map(|_| BitString::random(300, &mut rng).unwrap()).collect();
        let set = make_set(strings);
        let m = distance_matrix(&set, None).unwrap();
        for i in 0..6 {
            assert_eq!(m.get(i, i), 0.0);
            for j in 0..6 {
                assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
    }

    #[test]
    fn parallel_and_serial_assembly_agree_bitwise() {
        let mut rng = seeded_rng(8);
        let strings: Vec<BitString> =
            (0..10).map(|_| BitString::random(500, &mut rng).unwrap()).collect();
        let set = make_set(strings);
        let parallel = distance_matrix(&set, None).unwrap();
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| distance_matrix(&set, None))
            .unwrap();
        for (i, j) in lower_triangle(10) {
            assert_eq!(parallel.get(i, j).to_bits(), serial.get(i, j).to_bits());
        }
    }

    #[test]
    fn monotone_degradation_under_increasing_perturbation() {
        // Mean calibrated distance d(x, flip(x, m)) must be non-decreasing
        // in m; averaged over 20 seeds at each flip count.
        let spec = CompressorSpec::default();
        let grid: Vec<usize> = (0..=10).map(|k| k * 50).collect();
        let mut means = Vec::new();
        for &m in &grid {
            let mut total = 0.0;
            for seed in 0..20u64 {
                let mut rng = seeded_rng(1000 + seed);
                let x = BitString::random(1000, &mut rng).unwrap();
                let mut positions: Vec<usize> = (0..1000).collect();
                use rand::seq::SliceRandom;
                positions.shuffle(&mut rng);
                let y = x.flip_bits(&positions[..m]).unwrap();
                let set = StringSet::new(
                    vec![x, y],
                    spec,
                    EncodingMode::Ascii01,
                )
                .unwrap();
                let cal = calibrate(&set, &mut rng).unwrap();
                let d = distance_matrix(&set, Some(&cal)).unwrap();
                total += d.get(0, 1);
            }
            means.push(total / 20.0);
        }
        // Strict rise while the signal is strong, then saturation near 1
        // with only statistical wobble.
        for w in means.windows(2).take(4) {
            assert!(w[1] > w[0], "early region must rise: {means:?}");
        }
        for w in means.windows(2) {
            assert!(
                w[1] >= w[0] - 0.01,
                "calibrated distance dropped beyond noise: {means:?}"
            );
        }
        assert_eq!(means[0], 0.0);
        assert!(means[10] > 0.9, "endpoint {}", means[10]);
    }

    #[test]
    fn csv_export_lists_each_pair_once() {
        let m = DistanceMatrix::from_lower_triangle(3, vec![0.1, 0.2, 0.3], false).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "i,j,d\n0,1,0.1\n0,2,0.2\n1,2,0.3\n");
    }

    #[test]
    fn synthetic_matrix_validates_inputs() {
        assert!(DistanceMatrix::from_lower_triangle(1, vec![], false).is_err());
        assert!(DistanceMatrix::from_lower_triangle(3, vec![0.1], false).is_err());
        assert!(DistanceMatrix::from_lower_triangle(3, vec![0.1, 1.2, 0.0], false).is_err());
    }
}
