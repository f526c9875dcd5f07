//! Discrete measures on [0, 1) and the operator-to-measure pipeline.
//!
//! For a unitary N-band filter bank, the range projections of the
//! operator products S_α cut L²(T) into orthogonal pieces indexed by
//! digit strings α. Reading ‖S_α* f‖² as the mass a unit vector f puts
//! on the N-adic cylinder α produces, at depth k, the discrete measure
//!
//! ```text
//! μ_f^(k) = Σ_{|α| = k} ‖S_α* f‖² · δ_{x(α)},   x(α) = Σ_i α_i N^{−i},
//! ```
//!
//! supported on the left endpoints of the level-k cylinders. These
//! approximants converge (weakly) as k → ∞; [`fourier_error_report`]
//! certifies the rate |μ̂_f(t) − μ̂_f^(k)(t)| ≤ |t|·N^{−k} against a
//! caller-supplied limit, and [`refinement_residual`] checks the exact
//! self-similarity relation the approximants satisfy at finite depth:
//!
//! ```text
//! μ̂_f^(k)(t) = Σ_j e^{ijt/N} · μ̂_{S_j* f}^(k−1)(t/N).
//! ```
//!
//! [`AtomicMeasure`] itself is a plain sorted list of weighted points,
//! usable for anything of the form Σ w_i δ_{x_i} on [0, 1).

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cuntz::{FilterBank, Word, DEFAULT_WORD_CAP};
use crate::error::{Error, Result};
use crate::ifs::AffineMap;
use crate::laurent::{Complex, LaurentPoly};

/// Atoms closer than this are merged into one during construction.
/// Distinct level-k cylinder endpoints are at least N^{−k} ≥ 2^{−20}
/// apart under the word cap, so merging never conflates honest atoms.
pub const MERGE_TOL: f64 = 1e-13;

/// A weighted point: mass `w` at position `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub w: f64,
}

/// A finite positive atomic measure on [0, 1): atoms sorted by position,
/// duplicates merged, zero weights dropped. Construction validates that
/// positions lie in [0, 1) and weights are finite and non-negative.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
    /// cum[i] = Σ_{j ≤ i} atoms[j].w, for O(log n) CDF queries.
    cum: Vec<f64>,
}

impl AtomicMeasure {
    /// The zero measure.
    pub fn empty() -> Self {
        AtomicMeasure::default()
    }

    /// Unit point mass at x ∈ [0, 1).
    pub fn dirac(x: f64) -> Self {
        Self::new(vec![Atom { x, w: 1.0 }]).expect("a unit mass in [0, 1) is always valid")
    }

    /// Validate, sort, merge, and index a list of atoms.
    pub fn new(mut atoms: Vec<Atom>) -> Result<Self> {
        for atom in &atoms {
            if !atom.x.is_finite() || !atom.w.is_finite() {
                return Err(Error::NonFinite {
                    context: "measure atom",
                });
            }
            if atom.w < 0.0 {
                return Err(Error::NegativeWeight { w: atom.w });
            }
            if !(0.0..1.0).contains(&atom.x) {
                return Err(Error::AtomOutsideDomain { x: atom.x });
            }
        }
        atoms.retain(|a| a.w > 0.0);
        atoms.sort_unstable_by(|a, b| a.x.partial_cmp(&b.x).expect("positions are finite"));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            match merged.last_mut() {
                Some(last) if atom.x - last.x <= MERGE_TOL => last.w += atom.w,
                _ => merged.push(atom),
            }
        }
        let mut cum = Vec::with_capacity(merged.len());
        let mut acc = 0.0;
        for atom in &merged {
            acc += atom.w;
            cum.push(acc);
        }
        Ok(AtomicMeasure { atoms: merged, cum })
    }

    /// Build from (position, weight) pairs.
    pub fn from_pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(x, w)| Atom { x, w }).collect())
    }

    /// The atoms in increasing position order.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Number of distinct atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// True for the zero measure.
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total mass μ([0, 1)).
    pub fn total_mass(&self) -> f64 {
        self.cum.last().copied().unwrap_or(0.0)
    }

    /// μ([0, x]) — the **closed**-interval CDF, so F evaluated exactly at
    /// an atom includes that atom's weight.
    pub fn cdf(&self, x: f64) -> f64 {
        let idx = self.atoms.partition_point(|a| a.x <= x);
        if idx == 0 {
            0.0
        } else {
            self.cum[idx - 1]
        }
    }

    /// μ([0, x)) — the left limit of the CDF at x.
    pub fn cdf_left(&self, x: f64) -> f64 {
        let idx = self.atoms.partition_point(|a| a.x < x);
        if idx == 0 {
            0.0
        } else {
            self.cum[idx - 1]
        }
    }

    /// The Fourier transform μ̂(t) = Σ w e^{itx}.
    pub fn fourier(&self, t: f64) -> Complex {
        self.atoms
            .iter()
            .map(|a| Complex::from_polar(a.w, t * a.x))
            .sum()
    }

    /// The r-th raw moment Σ w x^r.
    pub fn moment(&self, order: u32) -> f64 {
        self.atoms
            .iter()
            .fold(0.0, |acc, a| acc + a.w * a.x.powi(order as i32))
    }

    /// ∫ ψ dμ for a real integrand.
    pub fn integrate<F: Fn(f64) -> f64>(&self, psi: F) -> f64 {
        self.atoms.iter().fold(0.0, |acc, a| acc + a.w * psi(a.x))
    }

    /// ∫ ψ dμ for a complex integrand.
    pub fn integrate_complex<F: Fn(f64) -> Complex>(&self, psi: F) -> Complex {
        self.atoms.iter().map(|a| psi(a.x) * a.w).sum()
    }

    /// Image measure μ ∘ σ^{−1}: every atom moves through the map, with
    /// weights unchanged. Fails if an image point leaves [0, 1).
    pub fn pushforward(&self, map: &AffineMap) -> Result<AtomicMeasure> {
        AtomicMeasure::new(
            self.atoms
                .iter()
                .map(|a| Atom {
                    x: map.apply(a.x),
                    w: a.w,
                })
                .collect(),
        )
    }

    /// Kolmogorov (sup) distance between the CDFs of two atomic measures.
    /// The supremum over x of |F − G| is attained either at an atom of
    /// one of the measures or just before one, so both one-sided limits
    /// are checked at every atom position of both measures.
    pub fn cdf_sup_distance(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for atom in self.atoms.iter().chain(other.atoms.iter()) {
            let at = (self.cdf(atom.x) - other.cdf(atom.x)).abs();
            let before = (self.cdf_left(atom.x) - other.cdf_left(atom.x)).abs();
            worst = worst.max(at).max(before);
        }
        worst
    }

    /// Largest weight discrepancy after pairing atoms whose positions
    /// agree within `pos_tol`; unpaired atoms count with their full
    /// weight. Suitable when both measures live on a common grid known
    /// to be coarser than `pos_tol`.
    pub fn atomwise_distance(&self, other: &Self, pos_tol: f64) -> f64 {
        let mut worst = 0.0f64;
        let (mut i, mut j) = (0, 0);
        while i < self.atoms.len() && j < other.atoms.len() {
            let a = self.atoms[i];
            let b = other.atoms[j];
            if (a.x - b.x).abs() <= pos_tol {
                worst = worst.max((a.w - b.w).abs());
                i += 1;
                j += 1;
            } else if a.x < b.x {
                worst = worst.max(a.w);
                i += 1;
            } else {
                worst = worst.max(b.w);
                j += 1;
            }
        }
        for a in &self.atoms[i..] {
            worst = worst.max(a.w);
        }
        for b in &other.atoms[j..] {
            worst = worst.max(b.w);
        }
        worst
    }
}

impl Serialize for AtomicMeasure {
    /// Serializes as the bare atom list, sorted by position.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.atoms.len()))?;
        for atom in &self.atoms {
            seq.serialize_element(atom)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for AtomicMeasure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let atoms = Vec::<Atom>::deserialize(deserializer)?;
        AtomicMeasure::new(atoms).map_err(serde::de::Error::custom)
    }
}

/// A digit string together with the point it names: the left endpoint
/// x = Σ_i α_i N^{−i} of the corresponding level-k cylinder.
#[derive(Debug, Clone, PartialEq)]
pub struct NadicPoint {
    word: Word,
    value: f64,
}

impl NadicPoint {
    /// Evaluate a word at a scale. Letters are validated.
    pub fn from_word(word: Word, scale: usize) -> Result<Self> {
        word.validate(scale)?;
        let value = horner_value(word.letters(), scale);
        Ok(NadicPoint { word, value })
    }

    /// The digit string.
    pub fn word(&self) -> &Word {
        &self.word
    }

    /// The point in [0, 1).
    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Σ_i d_i N^{−i} evaluated from the innermost digit out, matching how
/// the tail of an expansion is rescaled by one application of x ↦
/// (x + d)/N. For N a power of two every step is exact in f64, so these
/// endpoints agree bit-for-bit with composed affine pushforwards.
pub(crate) fn horner_value(digits: &[u8], scale: usize) -> f64 {
    let n = scale as f64;
    digits
        .iter()
        .rev()
        .fold(0.0, |acc, &d| (acc + f64::from(d)) / n)
}

/// The depth-k measure μ_f^(k) = Σ_{|α| = k} ‖S_α* f‖² δ_{x(α)} under the
/// default word cap of 2^20 leaves.
pub fn approx_measure(bank: &FilterBank, f: &LaurentPoly, depth: u32) -> Result<AtomicMeasure> {
    approx_measure_capped(bank, f, depth, DEFAULT_WORD_CAP)
}

/// [`approx_measure`] with an explicit leaf cap. The recursion walks the
/// N-ary word tree depth-first, branching through each adjoint S_j* and
/// pruning subtrees as soon as the running vector hits exact zero —
/// for banks with sparse adjoint action the live tree is far smaller
/// than N^k, but the worst case is checked against the cap up front.
pub fn approx_measure_capped(
    bank: &FilterBank,
    f: &LaurentPoly,
    depth: u32,
    cap: u128,
) -> Result<AtomicMeasure> {
    let leaves = (bank.scale() as u128)
        .checked_pow(depth)
        .ok_or(Error::WordCapExceeded {
            required: u128::MAX,
            cap,
        })?;
    if leaves > cap {
        return Err(Error::WordCapExceeded {
            required: leaves,
            cap,
        });
    }
    let mut atoms = Vec::new();
    let mut digits = Vec::with_capacity(depth as usize);
    descend(bank, f, depth, &mut digits, &mut atoms)?;
    AtomicMeasure::new(atoms)
}

fn descend(
    bank: &FilterBank,
    v: &LaurentPoly,
    remaining: u32,
    digits: &mut Vec<u8>,
    out: &mut Vec<Atom>,
) -> Result<()> {
    if v.is_zero() {
        return Ok(());
    }
    if remaining == 0 {
        out.push(Atom {
            x: horner_value(digits, bank.scale()),
            w: v.norm_sq(),
        });
        return Ok(());
    }
    for j in 0..bank.scale() {
        let next = bank.apply_adjoint(j, v)?;
        digits.push(j as u8);
        descend(bank, &next, remaining - 1, digits, out)?;
        digits.pop();
    }
    Ok(())
}

/// Max over the given frequencies of the defect in the depth-k
/// self-similarity relation
/// μ̂_f^(k)(t) − Σ_j e^{ijt/N} μ̂_{S_j* f}^(k−1)(t/N).
/// This holds *exactly* for the discrete approximants of any filter
/// bank, so anything above roundoff indicates an implementation bug —
/// it is a consistency probe, not a convergence estimate.
pub fn refinement_residual(
    bank: &FilterBank,
    f: &LaurentPoly,
    depth: u32,
    frequencies: &[f64],
) -> Result<f64> {
    if depth < 1 {
        return Err(Error::InvalidDepth { got: depth, min: 1 });
    }
    let n = bank.scale() as f64;
    let whole = approx_measure(bank, f, depth)?;
    let parts: Vec<AtomicMeasure> = (0..bank.scale())
        .map(|j| approx_measure(bank, &bank.apply_adjoint(j, f)?, depth - 1))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for &t in frequencies {
        let lhs = whole.fourier(t);
        let rhs: Complex = parts
            .iter()
            .enumerate()
            .map(|(j, part)| Complex::from_polar(1.0, j as f64 * t / n) * part.fourier(t / n))
            .sum();
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Outcome of [`fourier_error_report`]: the measured transform error at
/// one frequency, the a-priori bound |t|·N^{−k}, and whether the error
/// respects the bound (with 1e-12 headroom for roundoff).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FourierErrorReport {
    pub t: f64,
    pub error: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Compare μ̂_f^(k)(t) against a caller-supplied limit transform value.
/// Because consecutive approximants move atoms by at most N^{−k}, the
/// depth-k transform sits within |t|·N^{−k} of the limit.
pub fn fourier_error_report(
    bank: &FilterBank,
    f: &LaurentPoly,
    depth: u32,
    t: f64,
    limit: Complex,
) -> Result<FourierErrorReport> {
    let measure = approx_measure(bank, f, depth)?;
    let error = (measure.fourier(t) - limit).norm();
    let bound = t.abs() * (bank.scale() as f64).powi(-(depth as i32));
    Ok(FourierErrorReport {
        t,
        error,
        bound,
        pass: error <= bound + 1e-12,
    })
}

/// A-priori bound on |∫ψ dμ_f − ∫ψ dμ_f^(k)| for test functions with
/// ∫|t·ψ̂(t)| dt finite: the bound is that weighted L¹ norm times N^{−k}.
pub fn integral_error_bound(scale: usize, depth: u32, weighted_l1: f64) -> f64 {
    weighted_l1 * (scale as f64).powi(-(depth as i32))
}

/// Fourier transform of Lebesgue measure on [0, 1]: (e^{it} − 1)/(it),
/// evaluated by series near t = 0 where the quotient loses precision.
pub fn lebesgue_fourier(t: f64) -> Complex {
    if t.abs() < 1e-2 {
        // Σ_{n≤5} (it)^n/(n+1)!; the n = 6 tail is below 3e-19 here,
        // while the quotient's cancellation error at the seam is ~1e-14.
        let t2 = t * t;
        Complex::new(
            1.0 - t2 / 6.0 + t2 * t2 / 120.0,
            t / 2.0 - t2 * t / 24.0 + t2 * t2 * t / 720.0,
        )
    } else {
        let num = Complex::from_polar(1.0, t) - Complex::new(1.0, 0.0);
        num / Complex::new(0.0, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn uniform_level(depth: u32) -> AtomicMeasure {
        let cells = 1usize << depth;
        AtomicMeasure::from_pairs((0..cells).map(|j| (j as f64 / cells as f64, 1.0 / cells as f64)))
            .unwrap()
    }

    #[test]
    fn construction_sorts_merges_and_prunes() {
        let m = AtomicMeasure::from_pairs([
            (0.75, 0.25),
            (0.25, 0.5),
            (0.25 + 5e-14, 0.25),
            (0.1, 0.0),
        ])
        .unwrap();
        assert_eq!(m.len(), 2);
        assert!((m.atoms()[0].x - 0.25).abs() <= TOL);
        assert!((m.atoms()[0].w - 0.75).abs() <= TOL);
        assert!((m.total_mass() - 1.0).abs() <= TOL);
    }

    #[test]
    fn construction_rejects_bad_atoms() {
        assert!(matches!(
            AtomicMeasure::from_pairs([(0.5, -0.1)]),
            Err(Error::NegativeWeight { .. })
        ));
        assert!(matches!(
            AtomicMeasure::from_pairs([(1.0, 0.1)]),
            Err(Error::AtomOutsideDomain { .. })
        ));
        assert!(matches!(
            AtomicMeasure::from_pairs([(f64::NAN, 0.1)]),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn cdf_uses_closed_intervals() {
        let m = uniform_level(3);
        assert!(
            (m.cdf(0.25) - 0.375).abs() <= TOL,
            "[0, 1/4] holds three atoms"
        );
        assert!((m.cdf_left(0.25) - 0.25).abs() <= TOL, "[0, 1/4) holds two");
        assert!((m.cdf(0.2499) - 0.25).abs() <= TOL);
        assert_eq!(m.cdf(-0.5), 0.0);
        assert!((m.cdf(2.0) - 1.0).abs() <= TOL);
    }

    #[test]
    fn moments_of_the_uniform_grid() {
        let m = uniform_level(3);
        assert!((m.moment(0) - 1.0).abs() <= TOL);
        // mean of {j/8} = (1 − 1/8)/2 = 7/16.
        assert!((m.moment(1) - 0.4375).abs() <= TOL);
    }

    #[test]
    fn fourier_of_dirac_and_uniform() {
        let d = AtomicMeasure::dirac(0.0);
        for t in [-31.0, 0.0, 2.5] {
            assert!((d.fourier(t) - Complex::new(1.0, 0.0)).norm() <= TOL);
        }
        // Geometric closed form: Σ_{j<M} e^{itj/M}/M = (e^{it} − 1)/(M(e^{it/M} − 1)).
        let m = uniform_level(4);
        let t = 1.7f64;
        let cells = 16.0;
        let expected = (Complex::from_polar(1.0, t) - 1.0)
            / ((Complex::from_polar(1.0, t / cells) - 1.0) * cells);
        assert!((m.fourier(t) - expected).norm() <= TOL);
    }

    #[test]
    fn pushforward_moves_atoms_and_checks_domain() {
        let m = uniform_level(2);
        let half = AffineMap::new(0.5, 0.0).unwrap();
        let pushed = m.pushforward(&half).unwrap();
        assert_eq!(pushed.len(), 4);
        assert!((pushed.atoms()[3].x - 0.375).abs() <= TOL);
        assert!((pushed.total_mass() - 1.0).abs() <= TOL);
        let shove = AffineMap::new(1.0, 0.9).unwrap();
        assert!(matches!(
            m.pushforward(&shove),
            Err(Error::AtomOutsideDomain { .. })
        ));
    }

    #[test]
    fn sup_distance_between_consecutive_uniform_grids() {
        let coarse = uniform_level(3);
        let fine = uniform_level(4);
        // Just left of 1/16 the fine grid has 1/16 of mass, the coarse none...
        // rather: F_coarse jumps by 1/8 at 0, F_fine by 1/16: the gap peaks
        // at exactly 2^{−4} approaching each odd fine atom from the left.
        assert!((coarse.cdf_sup_distance(&fine) - 0.0625).abs() <= TOL);
        assert_eq!(coarse.cdf_sup_distance(&coarse), 0.0);
    }

    #[test]
    fn atomwise_distance_pairs_and_penalizes() {
        let a = AtomicMeasure::from_pairs([(0.25, 0.5), (0.5, 0.5)]).unwrap();
        let b = AtomicMeasure::from_pairs([(0.25, 0.4), (0.75, 0.6)]).unwrap();
        // 0.25 pairs (gap 0.1); 0.5 and 0.75 are unpaired (0.5, 0.6).
        assert!((a.atomwise_distance(&b, 1e-9) - 0.6).abs() <= TOL);
        assert_eq!(a.atomwise_distance(&a, 1e-9), 0.0);
    }

    #[test]
    fn measure_json_round_trip() {
        let m = uniform_level(2);
        let text = serde_json::to_string(&m).unwrap();
        let back: AtomicMeasure = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn nadic_points_evaluate_by_horner() {
        let p = NadicPoint::from_word(Word::from([1, 0, 1]), 2).unwrap();
        assert_eq!(p.value(), 0.625);
        let q = NadicPoint::from_word(Word::from([2, 1]), 3).unwrap();
        assert!((q.value() - (2.0 / 3.0 + 1.0 / 9.0)).abs() <= TOL);
        assert!(NadicPoint::from_word(Word::from([3]), 3).is_err());
        assert_eq!(
            NadicPoint::from_word(Word::empty(), 2).unwrap().value(),
            0.0
        );
    }

    #[test]
    fn shift_bank_concentrates_at_zero() {
        let bank = FilterBank::monomial(2).unwrap();
        let m = approx_measure(&bank, &LaurentPoly::basis(0), 6).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.atoms()[0].x, 0.0);
        assert!((m.atoms()[0].w - 1.0).abs() <= TOL);
    }

    #[test]
    fn shift_bank_sends_e1_to_one_half() {
        // S_1* e_1 = e_0 and S_0* e_1 = 0, so only words 1,0,0,… survive.
        let bank = FilterBank::monomial(2).unwrap();
        let m = approx_measure(&bank, &LaurentPoly::basis(1), 3).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.atoms()[0].x, 0.5);
        assert!((m.atoms()[0].w - 1.0).abs() <= TOL);
    }

    #[test]
    fn haar_bank_spreads_e0_uniformly() {
        let bank = FilterBank::haar();
        let m = approx_measure(&bank, &LaurentPoly::basis(0), 3).unwrap();
        assert_eq!(m.len(), 8);
        for (j, atom) in m.atoms().iter().enumerate() {
            assert_eq!(atom.x, j as f64 / 8.0, "endpoints are exact dyadics");
            assert!((atom.w - 0.125).abs() <= TOL);
        }
    }

    #[test]
    fn depth_zero_is_the_norm_at_the_origin() {
        let bank = FilterBank::haar();
        let f = LaurentPoly::basis(2).scaled_real(0.5);
        let m = approx_measure(&bank, &f, 0).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.atoms()[0].x, 0.0);
        assert!((m.atoms()[0].w - 0.25).abs() <= TOL);
    }

    #[test]
    fn mass_is_conserved_at_every_depth() {
        let f = LaurentPoly::from_coeffs([
            (-3, Complex::new(0.4, 0.1)),
            (0, Complex::new(-0.2, 0.7)),
            (5, Complex::new(0.3, -0.45)),
        ])
        .unwrap();
        for bank in [FilterBank::haar(), FilterBank::dft(3).unwrap()] {
            for depth in 0..=5 {
                let m = approx_measure(&bank, &f, depth).unwrap();
                assert!(
                    (m.total_mass() - f.norm_sq()).abs() <= 1e-11,
                    "depth {depth}, scale {}",
                    bank.scale()
                );
            }
        }
    }

    #[test]
    fn word_cap_refuses_oversized_depths() {
        let bank = FilterBank::haar();
        let err = approx_measure(&bank, &LaurentPoly::basis(0), 21).unwrap_err();
        assert!(matches!(
            err,
            Error::WordCapExceeded {
                required: 2097152,
                cap: DEFAULT_WORD_CAP
            }
        ));
        // An explicit cap opts in.
        assert!(approx_measure_capped(
            &FilterBank::monomial(2).unwrap(),
            &LaurentPoly::basis(0),
            21,
            1 << 21
        )
        .is_ok());
    }

    #[test]
    fn refinement_relation_is_exact_at_finite_depth() {
        let freqs: Vec<f64> = (-20..=20).map(|k| k as f64 * 2.0).collect();
        let f = LaurentPoly::from_real_coeffs([(-1, 0.6), (2, 0.8)]).unwrap();
        for bank in [
            FilterBank::haar(),
            FilterBank::dft(3).unwrap(),
            FilterBank::monomial(2).unwrap(),
        ] {
            let residual = refinement_residual(&bank, &f, 4, &freqs).unwrap();
            assert!(residual <= 1e-12, "scale {}: {residual}", bank.scale());
        }
        assert!(matches!(
            refinement_residual(&FilterBank::haar(), &f, 0, &freqs),
            Err(Error::InvalidDepth { .. })
        ));
    }

    #[test]
    fn uniform_limit_respects_the_fourier_bound() {
        let bank = FilterBank::haar();
        let f = LaurentPoly::basis(0);
        for t in [-40.0, -1.0, 0.0, 0.5, 17.0] {
            let report = fourier_error_report(&bank, &f, 6, t, lebesgue_fourier(t)).unwrap();
            assert!(
                report.pass,
                "t = {t}: error {} vs bound {}",
                report.error, report.bound
            );
        }
    }

    #[test]
    fn lebesgue_transform_is_smooth_through_zero() {
        assert!((lebesgue_fourier(0.0) - Complex::new(1.0, 0.0)).norm() <= TOL);
        // Series and quotient branches must agree where they meet.
        for t in [9e-3, 1.1e-2, -9e-3, -1.1e-2] {
            let quotient = (Complex::from_polar(1.0, t) - 1.0) / Complex::new(0.0, t);
            assert!(
                (lebesgue_fourier(t) - quotient).norm() <= 1e-13,
                "seam at t = {t}"
            );
        }
    }

    #[test]
    fn integral_bound_scales_geometrically() {
        assert_eq!(integral_error_bound(2, 6, 3.0), 3.0 / 64.0);
        assert_eq!(integral_error_bound(3, 2, 1.0), 1.0 / 9.0);
    }
}
