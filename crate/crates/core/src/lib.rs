//! Representations of Cuntz relations from filter banks, and the measures
//! they induce on the unit interval.
//!
//! The pipeline, bottom to top:
//!
//! * [`laurent`] — Laurent polynomials with exact integer exponents over
//!   complex `f64` coefficients; the model of L²(T) everything acts on.
//! * [`cuntz`] — N-band filter banks, the operators
//!   (S_j f)(z) = m_j(z) f(z^N) with their adjoints and word products,
//!   plus residual checks for unitarity and the Cuntz relations.
//! * [`measure`] — atomic measures on [0, 1); the depth-k approximants
//!   μ_f^(k) = Σ_{|α|=k} ‖S_α* f‖² δ_{x(α)} with their Fourier
//!   transforms, CDFs, moments, refinement identity, and certified
//!   error bounds against limit transforms.
//! * [`ifs`] — affine iterated function systems: Hutchinson iteration,
//!   the chaos game, cylinder cell geometry, and the bridge identifying
//!   eigenvector-induced operator measures with IFS fixed points.
//! * [`diagnostics`] — the finite-depth cyclicity (support) test and
//!   closed-form projection/orthogonality cross-checks.
//!
//! Numerical contract: constructions validate structure and finiteness;
//! analytic properties (unitarity, contractivity, eigen equations) are
//! measured as residuals or checked against explicit tolerances, never
//! assumed. Everything is deterministic; the one randomized algorithm
//! (the chaos game) takes an explicit seed.

pub mod cuntz;
pub mod diagnostics;
pub mod error;
pub mod ifs;
pub mod laurent;
pub mod measure;

pub use cuntz::{CuntzReport, FilterBank, JointEigenReport, Word};
pub use diagnostics::{BranchVerdict, CyclicityReport, Verdict};
pub use error::{Error, Result};
pub use ifs::{AffineIFS, AffineMap, BridgeReport, CellReport, Interval};
pub use laurent::{Complex, LaurentPoly};
pub use measure::{Atom, AtomicMeasure, FourierErrorReport, NadicPoint};
