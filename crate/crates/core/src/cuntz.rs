//! Filter banks and the operators they induce on L²(T).
//!
//! An N-band filter bank is a list of Laurent polynomials m_0, …, m_{N−1}.
//! Each filter induces an operator on L²(T):
//!
//! ```text
//! (S_j f)(z) = m_j(z) · f(z^N)
//! ```
//!
//! In coefficients, (S_j f)_m = Σ_n c_{j, m−Nn} f_n where c_{j,·} are the
//! coefficients of m_j, and the adjoint acts by
//!
//! ```text
//! (S_j* f)_n = Σ_k conj(c_{j,k}) · f_{Nn+k}.
//! ```
//!
//! When the bank is unitary — the N×N matrix U_{jk}(z) = N^{−1/2}
//! m_j(z·e^{2πik/N}) is unitary for every |z| = 1 — these operators
//! satisfy the Cuntz relations: each S_j is an isometry, S_j* S_k = δ_jk I,
//! and Σ_j S_j S_j* = I. [`FilterBank::check_unitarity`] and
//! [`FilterBank::verify_cuntz`] measure how far a given bank is from that
//! ideal; nothing here assumes it silently.
//!
//! Products S_α = S_{α_1} ⋯ S_{α_k} are indexed by [`Word`]s over the
//! digit alphabet {0, …, N−1}. The range projection S_α S_α* of such a
//! product is the cylinder projection for the digit string α.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::{Complex, LaurentPoly};

/// Hard ceiling on the number of words any enumeration may produce.
/// N^k grows fast; callers must opt into anything above 2^20 explicitly.
pub const DEFAULT_WORD_CAP: u128 = 1 << 20;

/// Residual tolerance under which a candidate vector is accepted as a
/// joint eigenvector of the adjoint operators.
pub const EIGEN_TOL: f64 = 1e-9;

/// Tolerance for "this vector has unit norm" preconditions.
pub const UNIT_NORM_TOL: f64 = 1e-9;

/// A finite digit string α = (α_1, …, α_k) over {0, …, N−1}, indexing the
/// operator product S_α = S_{α_1} ⋯ S_{α_k}. The empty word indexes the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u8>);

impl Word {
    /// The empty word (identity operator, whole-interval cylinder).
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Wrap a digit string. Letters are validated against a scale at use
    /// time, not here, so words can be built before choosing a bank.
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for the empty word.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The letters α_1, …, α_k in order.
    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Check every letter lies in 0..scale.
    pub fn validate(&self, scale: usize) -> Result<()> {
        for &letter in &self.0 {
            if usize::from(letter) >= scale {
                return Err(Error::LetterOutOfRange {
                    letter: letter.into(),
                    scale,
                });
            }
        }
        Ok(())
    }

    /// All scale^len words of a given length in lexicographic order.
    /// Refuses enumerations larger than [`DEFAULT_WORD_CAP`].
    pub fn enumerate(scale: usize, len: u32) -> Result<Vec<Word>> {
        if scale < 2 {
            return Err(Error::InvalidScale { scale, min: 2 });
        }
        let count = (scale as u128)
            .checked_pow(len)
            .filter(|&c| c <= DEFAULT_WORD_CAP)
            .ok_or(Error::WordCapExceeded {
                required: u128::MAX,
                cap: DEFAULT_WORD_CAP,
            })?;
        if count > DEFAULT_WORD_CAP {
            return Err(Error::WordCapExceeded {
                required: count,
                cap: DEFAULT_WORD_CAP,
            });
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut digits = vec![0u8; len as usize];
        loop {
            out.push(Word(digits.clone()));
            // Odometer increment; done once the leading digit wraps.
            let mut pos = len as usize;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                digits[pos] += 1;
                if usize::from(digits[pos]) < scale {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    /// Lexicographic rank of this word among words of its length:
    /// Σ_i α_i · scale^{k−i}, i.e. the digits read as a base-N integer.
    pub fn index(&self, scale: usize) -> u128 {
        self.0
            .iter()
            .fold(0u128, |acc, &d| acc * scale as u128 + u128::from(d))
    }

    /// Inverse of [`Word::index`] for a given length.
    pub fn from_index(scale: usize, len: u32, mut index: u128) -> Word {
        let mut digits = vec![0u8; len as usize];
        for slot in digits.iter_mut().rev() {
            *slot = (index % scale as u128) as u8;
            index /= scale as u128;
        }
        Word(digits)
    }
}

impl From<&[u8]> for Word {
    fn from(letters: &[u8]) -> Self {
        Word(letters.to_vec())
    }
}

impl<const K: usize> From<[u8; K]> for Word {
    fn from(letters: [u8; K]) -> Self {
        Word(letters.to_vec())
    }
}

/// e^{2πi·num/den} with the four cardinal directions produced exactly,
/// so banks built from roots of unity have clean coefficients.
fn root_of_unity(num: usize, den: usize) -> Complex {
    let m = num % den;
    if (4 * m).is_multiple_of(den) {
        match 4 * m / den {
            0 => Complex::new(1.0, 0.0),
            1 => Complex::new(0.0, 1.0),
            2 => Complex::new(-1.0, 0.0),
            _ => Complex::new(0.0, -1.0),
        }
    } else {
        Complex::from_polar(1.0, std::f64::consts::TAU * m as f64 / den as f64)
    }
}

/// An N-band filter bank: a scale N ≥ 2 and one Laurent polynomial per
/// band. Construction checks shape only; unitarity is a property you
/// *measure* with [`FilterBank::check_unitarity`], never an assumption.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    scale: usize,
    filters: Vec<LaurentPoly>,
}

impl FilterBank {
    /// Bundle N filters at scale N.
    pub fn new(scale: usize, filters: Vec<LaurentPoly>) -> Result<Self> {
        if scale < 2 {
            return Err(Error::InvalidScale { scale, min: 2 });
        }
        if filters.len() != scale {
            return Err(Error::FilterCountMismatch {
                expected: scale,
                got: filters.len(),
            });
        }
        Ok(FilterBank { scale, filters })
    }

    /// The monomial bank m_j(z) = z^j. Unitary for every N; S_j maps
    /// e_n ↦ e_{Nn+j}, permuting the basis.
    pub fn monomial(scale: usize) -> Result<Self> {
        let filters = (0..scale).map(|j| LaurentPoly::basis(j as i64)).collect();
        FilterBank::new(scale, filters)
    }

    /// The DFT bank m_j(z) = N^{−1/2} Σ_k e^{2πijk/N} z^k. Unitary for
    /// every N; the adjoints all send e_0 to N^{−1/2} e_0.
    pub fn dft(scale: usize) -> Result<Self> {
        if scale < 2 {
            return Err(Error::InvalidScale { scale, min: 2 });
        }
        // sqrt(1/N) rounds once; 1.0/sqrt(N) would round twice and land
        // one ulp off the best representable 1/√2.
        let amp = (1.0 / scale as f64).sqrt();
        let filters = (0..scale)
            .map(|j| {
                LaurentPoly::from_coeffs(
                    (0..scale).map(|k| (k as i64, root_of_unity(j * k, scale) * amp)),
                )
                .expect("roots of unity are finite")
            })
            .collect();
        FilterBank::new(scale, filters)
    }

    /// The two-band Haar pair m_0 = (1 + z)/√2, m_1 = (1 − z)/√2.
    /// Coincides with [`FilterBank::dft`] at scale 2.
    pub fn haar() -> Self {
        Self::dft(2).expect("scale 2 is valid")
    }

    /// The scale N.
    pub fn scale(&self) -> usize {
        self.scale
    }

    /// The filters m_0, …, m_{N−1}.
    pub fn filters(&self) -> &[LaurentPoly] {
        &self.filters
    }

    /// One filter by band index.
    pub fn filter(&self, j: usize) -> Result<&LaurentPoly> {
        self.check_letter(j)?;
        Ok(&self.filters[j])
    }

    fn check_letter(&self, j: usize) -> Result<()> {
        if j >= self.scale {
            return Err(Error::LetterOutOfRange {
                letter: j,
                scale: self.scale,
            });
        }
        Ok(())
    }

    /// Max over sampled |z| = 1 of the Frobenius distance of
    /// U(z) U(z)* from the identity, where U_{jk}(z) = N^{−1/2}
    /// m_j(z·ω^k) and ω = e^{2πi/N}. Near zero exactly when the bank is
    /// unitary; samples are spread uniformly over the circle, and a
    /// prime count such as the default 257 avoids aliasing against the
    /// polynomial's own periodicities.
    pub fn check_unitarity(&self, samples: usize) -> f64 {
        assert!(samples >= 1, "need at least one sample point");
        let n = self.scale;
        let amp = 1.0 / (n as f64).sqrt();
        let omega: Vec<Complex> = (0..n).map(|k| root_of_unity(k, n)).collect();
        let mut worst = 0.0f64;
        for s in 0..samples {
            let z = Complex::from_polar(1.0, std::f64::consts::TAU * s as f64 / samples as f64);
            // U[j][k] = N^{−1/2} m_j(z ω^k).
            let u: Vec<Vec<Complex>> = self
                .filters
                .iter()
                .map(|m| {
                    (0..n)
                        .map(|k| m.eval_unchecked(z * omega[k]) * amp)
                        .collect()
                })
                .collect();
            let mut frob_sq = 0.0;
            for j in 0..n {
                for l in 0..n {
                    let mut g: Complex = u[j].iter().zip(&u[l]).map(|(a, b)| a * b.conj()).sum();
                    if j == l {
                        g -= Complex::new(1.0, 0.0);
                    }
                    frob_sq += g.norm_sqr();
                }
            }
            worst = worst.max(frob_sq.sqrt());
        }
        worst
    }

    /// Apply S_j: f(z) ↦ m_j(z) f(z^N).
    pub fn apply(&self, j: usize, f: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_letter(j)?;
        let up = f.upsample(self.scale)?;
        Ok(&self.filters[j] * &up)
    }

    /// Apply the adjoint S_j*: in coefficients,
    /// (S_j* f)_n = Σ_k conj(c_{j,k}) f_{Nn+k}.
    pub fn apply_adjoint(&self, j: usize, f: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_letter(j)?;
        let n = self.scale as i64;
        let mut pairs = Vec::new();
        for (k, c) in self.filters[j].terms() {
            for (e, fe) in f.terms() {
                let d = e - k;
                if d.rem_euclid(n) == 0 {
                    pairs.push((d / n, c.conj() * fe));
                }
            }
        }
        LaurentPoly::from_coeffs(pairs)
    }

    /// Apply the product S_α = S_{α_1} ⋯ S_{α_k}: the *last* letter acts
    /// first, matching how operator composition reads right-to-left.
    pub fn apply_word(&self, word: &Word, f: &LaurentPoly) -> Result<LaurentPoly> {
        word.validate(self.scale)?;
        let mut acc = f.clone();
        for &letter in word.letters().iter().rev() {
            acc = self.apply(letter.into(), &acc)?;
        }
        Ok(acc)
    }

    /// Apply (S_α)* = S_{α_k}* ⋯ S_{α_1}*: the *first* letter's adjoint
    /// acts first.
    pub fn apply_word_adjoint(&self, word: &Word, f: &LaurentPoly) -> Result<LaurentPoly> {
        word.validate(self.scale)?;
        let mut acc = f.clone();
        for &letter in word.letters() {
            acc = self.apply_adjoint(letter.into(), &acc)?;
        }
        Ok(acc)
    }

    /// The cylinder projection P_α = S_α S_α*, the orthogonal projection
    /// onto the range of S_α (when the bank is unitary).
    pub fn cylinder_projection(&self, word: &Word, f: &LaurentPoly) -> Result<LaurentPoly> {
        let pulled = self.apply_word_adjoint(word, f)?;
        self.apply_word(word, &pulled)
    }

    /// Measure the Cuntz relations on the basis vectors e_n, |n| ≤ degree:
    /// how far S_j* S_k is from δ_jk I (isometry/orthogonality) and how
    /// far Σ_j S_j S_j* is from I (completeness). Both residuals are
    /// worst-case Euclidean distances.
    pub fn verify_cuntz(&self, degree: i64) -> Result<CuntzReport> {
        let mut isometry = 0.0f64;
        let mut completeness = 0.0f64;
        for n in -degree..=degree {
            let e = LaurentPoly::basis(n);
            let mut resolved = LaurentPoly::zero();
            for j in 0..self.scale {
                let adj = self.apply_adjoint(j, &e)?;
                resolved = &resolved + &self.apply(j, &adj)?;
                for k in 0..self.scale {
                    let lifted = self.apply(k, &e)?;
                    let back = self.apply_adjoint(j, &lifted)?;
                    let res = if j == k {
                        back.distance(&e)
                    } else {
                        back.norm()
                    };
                    isometry = isometry.max(res);
                }
            }
            completeness = completeness.max(resolved.distance(&e));
        }
        Ok(CuntzReport {
            degree,
            isometry_residual: isometry,
            completeness_residual: completeness,
        })
    }

    /// Test whether f is a joint eigenvector of all the adjoints,
    /// S_j* f = λ_j f. Requires ‖f‖ = 1. Each λ_j is the best least-squares
    /// eigenvalue ⟨f, S_j* f⟩; the residual is ‖S_j* f − λ_j f‖. When every
    /// residual passes [`EIGEN_TOL`], the report also carries
    /// |Σ_j |λ_j|² − 1|, which must vanish for unitary banks.
    pub fn joint_eigen_check(&self, f: &LaurentPoly) -> Result<JointEigenReport> {
        let norm = f.norm();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NotUnitNorm {
                norm,
                tol: UNIT_NORM_TOL,
            });
        }
        let mut eigenvalues = Vec::with_capacity(self.scale);
        let mut residuals = Vec::with_capacity(self.scale);
        for j in 0..self.scale {
            let g = self.apply_adjoint(j, f)?;
            let lambda = f.inner(&g);
            residuals.push((&g - &f.scaled(lambda)).norm());
            eigenvalues.push(lambda);
        }
        let weight_sum_error = if residuals.iter().all(|&r| r <= EIGEN_TOL) {
            let sum: f64 = eigenvalues.iter().map(|l| l.norm_sqr()).sum();
            Some((sum - 1.0).abs())
        } else {
            None
        };
        Ok(JointEigenReport {
            eigenvalues,
            residuals,
            weight_sum_error,
        })
    }
}

/// Worst-case residuals of the Cuntz relations over a band of basis
/// vectors; see [`FilterBank::verify_cuntz`].
#[derive(Debug, Clone, Serialize)]
pub struct CuntzReport {
    /// Basis vectors e_n with |n| ≤ degree were tested.
    pub degree: i64,
    /// Worst ‖S_j* S_k e_n − δ_jk e_n‖.
    pub isometry_residual: f64,
    /// Worst ‖Σ_j S_j S_j* e_n − e_n‖.
    pub completeness_residual: f64,
}

impl CuntzReport {
    /// The larger of the two residuals.
    pub fn max_residual(&self) -> f64 {
        self.isometry_residual.max(self.completeness_residual)
    }
}

/// Outcome of [`FilterBank::joint_eigen_check`].
#[derive(Debug, Clone)]
pub struct JointEigenReport {
    /// Least-squares eigenvalue λ_j = ⟨f, S_j* f⟩ per branch.
    pub eigenvalues: Vec<Complex>,
    /// ‖S_j* f − λ_j f‖ per branch.
    pub residuals: Vec<f64>,
    /// |Σ_j |λ_j|² − 1|, present only when every residual passes
    /// [`EIGEN_TOL`]; `None` means "not an eigenvector, sum is moot".
    pub weight_sum_error: Option<f64>,
}

impl JointEigenReport {
    /// True when every branch residual passes [`EIGEN_TOL`].
    pub fn is_joint_eigenvector(&self) -> bool {
        self.residuals.iter().all(|&r| r <= EIGEN_TOL)
    }
}

/// On-disk form: `{"N": scale, "filters": [[{n, re, im}, …], …]}`.
#[derive(Serialize, Deserialize)]
struct BankRepr {
    #[serde(rename = "N")]
    scale: usize,
    filters: Vec<LaurentPoly>,
}

impl Serialize for FilterBank {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BankRepr {
            scale: self.scale,
            filters: self.filters.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FilterBank {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = BankRepr::deserialize(deserializer)?;
        FilterBank::new(repr.scale, repr.filters).map_err(serde::de::Error::custom)
    }
}
