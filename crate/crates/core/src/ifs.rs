//! Affine iterated function systems on the unit interval.
//!
//! An IFS here is a finite list of affine contractions σ_i(x) = a_i x + b_i
//! with strictly positive branch probabilities p_i summing to one. Its
//! invariant (Hutchinson) measure is the unique fixed point of
//!
//! ```text
//! μ ↦ Σ_i p_i · (μ ∘ σ_i^{−1}),
//! ```
//!
//! approached geometrically by iterating that map on any starting
//! measure ([`AffineIFS::hutchinson_iterate`]) and stochastically by the
//! chaos game ([`AffineIFS::chaos_game`]).
//!
//! The N-adic subdivision maps σ_j(x) = (x + j)/N are the special case
//! tying this module to the operator side: a unit vector f with
//! S_j* f = λ_j f for all j pushes the operator-derived measure and the
//! Hutchinson iteration onto the same atoms with the same weights
//! Π_i |λ_{α_i}|². [`eigen_to_ifs_bridge`] checks the two routes against
//! each other atom by atom.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cuntz::{FilterBank, Word, DEFAULT_WORD_CAP, EIGEN_TOL};
use crate::error::{Error, Result};
use crate::laurent::{Complex, LaurentPoly};
use crate::measure::{approx_measure, Atom, AtomicMeasure};

/// Ceiling on atoms a deterministic iteration may hold; one step from m
/// atoms produces (branches × m) before merging.
pub const DEFAULT_ATOM_CAP: u128 = 1 << 20;

/// Steps the chaos game discards before it starts recording; the orbit
/// needs time to fall onto the attractor from the arbitrary start at 0.
pub const CHAOS_BURN_IN: usize = 100;

/// Probabilities summing to 1 are accepted within this slack.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Cylinder intervals counted as overlapping only when their interiors
/// do; shared endpoints (touching cells) are fine.
const OVERLAP_TOL: f64 = 1e-12;

/// The affine map x ↦ a·x + b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub a: f64,
    pub b: f64,
}

impl AffineMap {
    /// Build a map with finite coefficients.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite {
                context: "affine map coefficients",
            });
        }
        Ok(AffineMap { a, b })
    }

    /// The N-adic branch map σ_j(x) = (x + j)/N.
    pub fn nadic(scale: usize, j: usize) -> Result<Self> {
        if scale < 2 {
            return Err(Error::InvalidScale { scale, min: 2 });
        }
        if j >= scale {
            return Err(Error::LetterOutOfRange { letter: j, scale });
        }
        let n = scale as f64;
        AffineMap::new(1.0 / n, j as f64 / n)
    }

    /// Evaluate a·x + b.
    pub fn apply(&self, x: f64) -> f64 {
        self.a * x + self.b
    }

    /// The composition self ∘ inner: first `inner`, then `self`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            a: self.a * inner.a,
            b: self.a * inner.b + self.b,
        }
    }

    /// Image of an interval; a negative slope flips the endpoints.
    pub fn image(&self, iv: Interval) -> Interval {
        let p = self.apply(iv.lo);
        let q = self.apply(iv.hi);
        Interval {
            lo: p.min(q),
            hi: p.max(q),
        }
    }
}

/// A closed interval [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// The unit interval [0, 1].
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    /// Build with ordered endpoints.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// hi − lo.
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Level-k cylinder cells of an IFS: one interval σ_{α_1}∘⋯∘σ_{α_k}(domain)
/// per length-k word, in lexicographic word order.
#[derive(Debug, Clone)]
pub struct CellReport {
    pub cells: Vec<(Word, Interval)>,
    /// Largest cell length; bounded by (max |a_i|)^k · |domain|.
    pub max_diameter: f64,
    /// True when any two cells share interior points.
    pub overlapping: bool,
}

/// An affine IFS with branch probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineIFS {
    maps: Vec<AffineMap>,
    probs: Vec<f64>,
}

impl AffineIFS {
    /// Validate and bundle branches: at least one map, one strictly
    /// positive probability per map, probabilities summing to one within
    /// [`PROB_SUM_TOL`]. Contractivity is *not* required here — it is
    /// checked by the operations whose convergence depends on it.
    pub fn new(maps: Vec<AffineMap>, probs: Vec<f64>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::EmptySystem {
                what: "iterated function system",
            });
        }
        if probs.len() != maps.len() {
            return Err(Error::BranchCountMismatch {
                expected: maps.len(),
                got: probs.len(),
            });
        }
        for map in &maps {
            if !map.a.is_finite() || !map.b.is_finite() {
                return Err(Error::NonFinite {
                    context: "affine map coefficients",
                });
            }
        }
        for (index, &p) in probs.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite {
                    context: "branch probability",
                });
            }
            if p <= 0.0 {
                return Err(Error::NonPositiveProbability { index, value: p });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::ProbabilitySum {
                sum,
                tol: PROB_SUM_TOL,
            });
        }
        Ok(AffineIFS { maps, probs })
    }

    /// The uniform N-adic subdivision system σ_j(x) = (x + j)/N, p_j = 1/N.
    pub fn nadic_uniform(scale: usize) -> Result<Self> {
        let maps = (0..scale)
            .map(|j| AffineMap::nadic(scale, j))
            .collect::<Result<_>>()?;
        AffineIFS::new(maps, vec![1.0 / scale as f64; scale])
    }

    /// Number of branches.
    pub fn branch_count(&self) -> usize {
        self.maps.len()
    }

    /// The branch maps.
    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    /// The branch probabilities.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// max_i |a_i| — strict contractivity means this is below one.
    pub fn contraction_factor(&self) -> f64 {
        self.maps.iter().map(|m| m.a.abs()).fold(0.0, f64::max)
    }

    /// True when every branch strictly contracts.
    pub fn is_contractive(&self) -> bool {
        self.contraction_factor() < 1.0
    }

    fn require_contractive(&self) -> Result<()> {
        if !self.is_contractive() {
            return Err(Error::NotContractive {
                max_slope: self.contraction_factor(),
            });
        }
        Ok(())
    }

    /// The level-k cylinder cells over a starting domain, with the word
    /// bookkeeping needed to relate cells back to operator words.
    pub fn attractor_cells(&self, domain: Interval, depth: u32) -> Result<CellReport> {
        let count = (self.maps.len() as u128)
            .checked_pow(depth)
            .filter(|&c| c <= DEFAULT_WORD_CAP)
            .ok_or(Error::WordCapExceeded {
                required: u128::MAX,
                cap: DEFAULT_WORD_CAP,
            })?;
        let _ = count;
        // Grow (word, composed map) pairs breadth-first so cells come out
        // in lexicographic word order.
        let mut layer: Vec<(Vec<u8>, AffineMap)> = vec![(Vec::new(), AffineMap { a: 1.0, b: 0.0 })];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(layer.len() * self.maps.len());
            for (word, composed) in &layer {
                for (i, map) in self.maps.iter().enumerate() {
                    let mut extended = word.clone();
                    extended.push(i as u8);
                    next.push((extended, composed.compose(map)));
                }
            }
            layer = next;
        }
        let cells: Vec<(Word, Interval)> = layer
            .into_iter()
            .map(|(word, composed)| (Word::new(word), composed.image(domain)))
            .collect();
        let max_diameter = cells.iter().map(|(_, iv)| iv.length()).fold(0.0, f64::max);
        let mut spans: Vec<Interval> = cells.iter().map(|&(_, iv)| iv).collect();
        spans.sort_unstable_by(|p, q| p.lo.partial_cmp(&q.lo).expect("finite endpoints"));
        let overlapping = spans.windows(2).any(|w| w[1].lo < w[0].hi - OVERLAP_TOL);
        Ok(CellReport {
            cells,
            max_diameter,
            overlapping,
        })
    }

    /// One application of the Hutchinson map to a measure:
    /// μ ↦ Σ_i p_i · (μ ∘ σ_i^{−1}). Total mass is preserved.
    pub fn hutchinson_step(&self, measure: &AtomicMeasure, cap: u128) -> Result<AtomicMeasure> {
        self.require_contractive()?;
        let required = (self.maps.len() as u128) * (measure.len() as u128);
        if required > cap {
            return Err(Error::AtomCapExceeded { required, cap });
        }
        let mut atoms = Vec::with_capacity(measure.len() * self.maps.len());
        for (map, &p) in self.maps.iter().zip(&self.probs) {
            for atom in measure.atoms() {
                atoms.push(Atom {
                    x: map.apply(atom.x),
                    w: p * atom.w,
                });
            }
        }
        AtomicMeasure::new(atoms)
    }

    /// Iterate the Hutchinson map `steps` times from `start`, under the
    /// default atom cap. From δ_0 the k-th iterate is exactly
    /// Σ_{|α| = k} p_{α_1}⋯p_{α_k} δ_{σ_α(0)}.
    pub fn hutchinson_iterate(&self, start: &AtomicMeasure, steps: u32) -> Result<AtomicMeasure> {
        self.hutchinson_iterate_capped(start, steps, DEFAULT_ATOM_CAP)
    }

    /// [`AffineIFS::hutchinson_iterate`] with an explicit atom cap.
    pub fn hutchinson_iterate_capped(
        &self,
        start: &AtomicMeasure,
        steps: u32,
        cap: u128,
    ) -> Result<AtomicMeasure> {
        self.require_contractive()?;
        let mut current = start.clone();
        for _ in 0..steps {
            current = self.hutchinson_step(&current, cap)?;
        }
        Ok(current)
    }

    /// The chaos game: drive the orbit x ↦ σ_J(x) with J drawn from the
    /// branch probabilities, discard [`CHAOS_BURN_IN`] steps, then record
    /// `samples` points with weight 1/samples each. Deterministic in the
    /// seed: the generator is a fixed, portable ChaCha8 stream cipher, so
    /// identical seeds give identical measures on every platform.
    pub fn chaos_game(&self, seed: u64, samples: usize) -> Result<AtomicMeasure> {
        assert!(samples >= 1, "need at least one sample");
        self.require_contractive()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = 0.0f64;
        let weight = 1.0 / samples as f64;
        let mut atoms = Vec::with_capacity(samples);
        for step in 0..CHAOS_BURN_IN + samples {
            let draw: f64 = rng.gen();
            let mut branch = self.maps.len() - 1;
            let mut acc = 0.0;
            for (i, &p) in self.probs.iter().enumerate() {
                acc += p;
                if draw < acc {
                    branch = i;
                    break;
                }
            }
            x = self.maps[branch].apply(x);
            if step >= CHAOS_BURN_IN {
                atoms.push(Atom { x, w: weight });
            }
        }
        AtomicMeasure::new(atoms)
    }
}

/// On-disk form: `{"maps": [{"a": …, "b": …}, …], "probs": [… ]}`.
#[derive(Serialize, Deserialize)]
struct IfsRepr {
    maps: Vec<AffineMap>,
    probs: Vec<f64>,
}

impl Serialize for AffineIFS {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IfsRepr {
            maps: self.maps.clone(),
            probs: self.probs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AffineIFS {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = IfsRepr::deserialize(deserializer)?;
        AffineIFS::new(repr.maps, repr.probs).map_err(serde::de::Error::custom)
    }
}

/// Outcome of [`eigen_to_ifs_bridge`]: the same measure computed two ways.
#[derive(Debug, Clone)]
pub struct BridgeReport {
    pub depth: u32,
    /// Adjoint eigenvalues λ_j, in branch order.
    pub eigenvalues: Vec<Complex>,
    /// |Σ_j |λ_j|² − 1| before normalization.
    pub weight_sum_error: f64,
    /// Worst atom weight discrepancy between the two routes.
    pub distance: f64,
    /// Depth-k Hutchinson iterate of δ_0 under probabilities |λ_j|².
    pub hutchinson: AtomicMeasure,
    /// Depth-k operator measure μ_f^(k).
    pub operator: AtomicMeasure,
}

/// Branches whose eigen weight |λ|² falls below this are dropped when
/// assembling the bridge IFS; residuals within [`EIGEN_TOL`] cannot
/// produce genuine weights this small.
const BRIDGE_WEIGHT_FLOOR: f64 = 1e-18;

/// For f a joint eigenvector of the adjoints (S_j* f = λ_j f, ‖f‖ = 1),
/// the operator measure μ_f^(k) equals the k-th Hutchinson iterate of δ_0
/// under the subdivision maps σ_j(x) = (x + j)/N with probabilities
/// |λ_j|²: both put weight Π_i |λ_{α_i}|² on x(α). This runs the two
/// constructions independently and reports how far apart they land.
pub fn eigen_to_ifs_bridge(bank: &FilterBank, f: &LaurentPoly, depth: u32) -> Result<BridgeReport> {
    let eigen = bank.joint_eigen_check(f)?;
    if let Some((branch, &residual)) = eigen
        .residuals
        .iter()
        .enumerate()
        .find(|(_, &r)| r > EIGEN_TOL)
    {
        return Err(Error::NotJointEigenvector {
            branch,
            residual,
            tol: EIGEN_TOL,
        });
    }
    let weight_sum_error = eigen
        .weight_sum_error
        .expect("all residuals passed, so the sum was computed");

    let mut maps = Vec::new();
    let mut probs = Vec::new();
    for (j, lambda) in eigen.eigenvalues.iter().enumerate() {
        let weight = lambda.norm_sqr();
        if weight > BRIDGE_WEIGHT_FLOOR {
            maps.push(AffineMap::nadic(bank.scale(), j)?);
            probs.push(weight);
        }
    }
    // Renormalize the kept weights so the IFS constructor's exact-sum
    // contract holds; the discrepancy being folded in is at most
    // weight_sum_error, which the report already exposes.
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    let ifs = AffineIFS::new(maps, probs)?;

    let hutchinson = ifs.hutchinson_iterate(&AtomicMeasure::dirac(0.0), depth)?;
    let operator = approx_measure(bank, f, depth)?;
    let distance = operator.atomwise_distance(&hutchinson, 1e-12);
    Ok(BridgeReport {
        depth,
        eigenvalues: eigen.eigenvalues,
        weight_sum_error,
        distance,
        hutchinson,
        operator,
    })
}
