//! Gaussian entanglement measures over the steady-state covariance:
//! bipartite logarithmic negativity and the tripartite minimum residual
//! contangle.
//!
//! Conventions are locked to vacuum quadrature variance 1/2: a partition is
//! entangled iff the smallest symplectic eigenvalue of the partially
//! transposed covariance drops below 1/2, and `E_N = max(0, -ln 2ν⁻)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lyapunov::CovarianceMatrix;

/// One of the four modes, with its frozen quadrature offset into the 8×8
/// covariance: horizontal optical (0), vertical optical (2), mechanical
/// resonators (4, 6).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModeId {
    OpticalH,
    OpticalV,
    Mech1,
    Mech2,
}

impl ModeId {
    pub const ALL: [ModeId; 4] = [ModeId::OpticalH, ModeId::OpticalV, ModeId::Mech1, ModeId::Mech2];

    /// Index of the mode's position quadrature in the 8×8 ordering.
    pub fn offset(self) -> usize {
        match self {
            ModeId::OpticalH => 0,
            ModeId::OpticalV => 2,
            ModeId::Mech1 => 4,
            ModeId::Mech2 => 6,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModeId::OpticalH => "ah",
            ModeId::OpticalV => "av",
            ModeId::Mech1 => "m1",
            ModeId::Mech2 => "m2",
        }
    }

    pub fn parse(s: &str) -> Option<ModeId> {
        match s {
            "ah" => Some(ModeId::OpticalH),
            "av" => Some(ModeId::OpticalV),
            "m1" => Some(ModeId::Mech1),
            "m2" => Some(ModeId::Mech2),
            _ => None,
        }
    }
}

/// Mode sets involved in a measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Partition {
    /// One-vs-rest bipartition; the first set is the transposed side.
    Bipartite(Vec<ModeId>, Vec<ModeId>),
    /// Unordered mode triple of a genuine three-way measure.
    Tripartite(ModeId, ModeId, ModeId),
}

/// A measure value together with its diagnostic symplectic data.
#[derive(Debug, Clone, Serialize)]
pub struct EntanglementResult {
    /// The measure itself (logarithmic negativity or residual contangle).
    pub value: f64,
    /// Smallest symplectic eigenvalue of the partially transposed covariance
    /// behind `value` (for tripartite results: of the minimizing focus).
    pub nu_min: f64,
    pub partition: Partition,
    /// For tripartite results: whether all focus residuals respect monogamy
    /// within tolerance. `None` for bipartite results.
    pub monogamy_ok: Option<bool>,
}

/// Margin below the separability bound required before a state is reported
/// entangled; absorbs sign-flip jitter at the boundary.
pub const SEPARABILITY_MARGIN: f64 = 1e-12;
/// Residual contangles above this negative floor are attributed to round-off
/// and clamped; anything lower is surfaced as a monogamy violation.
pub const MONOGAMY_TOL: f64 = 1e-9;

/// Extracts the reduced covariance of the listed modes, in the listed order.
/// Duplicate modes are rejected.
pub fn extract_submatrix(v: &CovarianceMatrix, modes: &[ModeId]) -> Result<DMatrix<f64>> {
    for (i, m) in modes.iter().enumerate() {
        if modes[..i].contains(m) {
            return Err(Error::DuplicateMode(*m));
        }
    }
    let idx: Vec<usize> = modes
        .iter()
        .flat_map(|m| [m.offset(), m.offset() + 1])
        .collect();
    Ok(DMatrix::from_fn(idx.len(), idx.len(), |r, c| {
        v.matrix()[(idx[r], idx[c])]
    }))
}

/// Applies partial transposition: conjugation by the diagonal sign matrix
/// with -1 at the momentum quadrature of each flipped mode position.
pub fn partial_transpose(chi: &DMatrix<f64>, flip: &[usize]) -> DMatrix<f64> {
    let k = chi.nrows() / 2;
    let mut sign = vec![1.0; 2 * k];
    for &f in flip {
        assert!(f < k, "flip position {f} out of range for {k} modes");
        sign[2 * f + 1] = -1.0;
    }
    DMatrix::from_fn(2 * k, 2 * k, |r, c| sign[r] * chi[(r, c)] * sign[c])
}

/// Symplectic spectrum of a 2k×2k covariance: the k distinct absolute values
/// of the eigenvalues of `iΩχ`, ascending. `Ω` is the direct sum of k copies
/// of `[[0, 1], [-1, 0]]`.
pub fn symplectic_eigenvalues(chi: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = chi.nrows();
    debug_assert_eq!(n % 2, 0);
    debug_assert_eq!(n, chi.ncols());
    let k = n / 2;

    let mut omega = DMatrix::<f64>::zeros(n, n);
    for j in 0..k {
        omega[(2 * j, 2 * j + 1)] = 1.0;
        omega[(2 * j + 1, 2 * j)] = -1.0;
    }
    let eig = crate::model::complex_eigenvalues(&(omega * chi), "symplectic spectrum")?;
    let mut moduli: Vec<f64> = eig.iter().map(|e| e.norm()).collect();
    moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Eigenvalues of Ωχ come in ± pairs; collapse each adjacent pair.
    Ok((0..k).map(|j| 0.5 * (moduli[2 * j] + moduli[2 * j + 1])).collect())
}

fn log_neg_from_nu(nu: f64) -> f64 {
    if nu < 0.5 - SEPARABILITY_MARGIN {
        -(2.0 * nu).ln()
    } else {
        0.0
    }
}

/// Logarithmic negativity of the (a, b) pair: extract the 4×4 reduction,
/// partially transpose mode `a`, and evaluate `max(0, -ln 2ν⁻)`.
pub fn log_negativity(v: &CovarianceMatrix, a: ModeId, b: ModeId) -> Result<EntanglementResult> {
    if a == b {
        return Err(Error::DuplicateMode(a));
    }
    let chi = extract_submatrix(v, &[a, b])?;
    let nu = symplectic_eigenvalues(&partial_transpose(&chi, &[0]))?[0];
    Ok(EntanglementResult {
        value: log_neg_from_nu(nu),
        nu_min: nu,
        partition: Partition::Bipartite(vec![a], vec![b]),
        monogamy_ok: None,
    })
}

fn one_vs_many(v: &CovarianceMatrix, a: ModeId, b: &[ModeId]) -> Result<(f64, f64)> {
    let mut modes = vec![a];
    modes.extend_from_slice(b);
    let chi = extract_submatrix(v, &modes)?;
    let nu = symplectic_eigenvalues(&partial_transpose(&chi, &[0]))?[0];
    Ok((log_neg_from_nu(nu), nu))
}

/// Contangle (squared logarithmic negativity) of the `a | b` partition, with
/// `|b|` of one or two modes. The transposed side is always `a`.
pub fn contangle(v: &CovarianceMatrix, a: ModeId, b: &[ModeId]) -> Result<f64> {
    if b.is_empty() || b.len() > 2 {
        return Err(Error::BadPartition(format!(
            "contangle needs 1 or 2 modes on the second side, got {}",
            b.len()
        )));
    }
    if b.contains(&a) {
        return Err(Error::BadPartition(format!(
            "partition sides must be disjoint ({:?} appears on both)",
            a
        )));
    }
    let (en, _) = one_vs_many(v, a, b)?;
    Ok(en * en)
}

/// Residual contangle of a focus decomposition, with the parts it is built
/// from. `value` may be slightly negative from round-off; `monogamy_ok`
/// records whether it stayed above `-`[`MONOGAMY_TOL`].
#[derive(Debug, Clone, Serialize)]
pub struct ResidualContangle {
    pub value: f64,
    /// Contangle of the focus mode against the other two jointly.
    pub one_vs_two: f64,
    /// Pairwise contangles of the focus against each remaining mode.
    pub pairwise: (f64, f64),
    /// Smallest symplectic eigenvalue behind the one-vs-two transposition.
    pub nu_min: f64,
    pub monogamy_ok: bool,
}

/// Residual contangle `R^{u|v|w} = R^{u|(vw)} - R^{u|v} - R^{u|w}` with focus
/// mode `u`. A value below `-`[`MONOGAMY_TOL`] marks a monogamy violation:
/// it is surfaced (flag and warning), never clamped.
pub fn residual_contangle(
    v: &CovarianceMatrix,
    u: ModeId,
    b1: ModeId,
    b2: ModeId,
) -> Result<ResidualContangle> {
    if u == b1 || u == b2 || b1 == b2 {
        return Err(Error::BadPartition(format!(
            "residual contangle needs three distinct modes, got ({u:?}, {b1:?}, {b2:?})"
        )));
    }
    let (en_joint, nu_min) = one_vs_many(v, u, &[b1, b2])?;
    let one_vs_two = en_joint * en_joint;
    let c1 = contangle(v, u, &[b1])?;
    let c2 = contangle(v, u, &[b2])?;
    let value = one_vs_two - c1 - c2;
    let monogamy_ok = value >= -MONOGAMY_TOL;
    if !monogamy_ok {
        log::warn!(
            "monogamy violation: R^({u:?}|{b1:?}|{b2:?}) = {value:.3e} < -{MONOGAMY_TOL:.0e}"
        );
    }
    Ok(ResidualContangle {
        value,
        one_vs_two,
        pairwise: (c1, c2),
        nu_min,
        monogamy_ok,
    })
}

/// Minimum residual contangle over the three focus rotations of a mode
/// triple; the permutation-invariant genuine tripartite measure.
///
/// Values within `-`[`MONOGAMY_TOL`] of zero are clamped to zero; a larger
/// violation is kept (and flagged) rather than hidden.
pub fn min_residual_contangle(
    v: &CovarianceMatrix,
    triple: (ModeId, ModeId, ModeId),
) -> Result<EntanglementResult> {
    let (u, w1, w2) = triple;
    let foci = [
        residual_contangle(v, u, w1, w2)?,
        residual_contangle(v, w1, u, w2)?,
        residual_contangle(v, w2, u, w1)?,
    ];
    let (min_idx, min_res) = foci
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.value.partial_cmp(&b.value).unwrap())
        .expect("three foci");
    let monogamy_ok = foci.iter().all(|r| r.monogamy_ok);
    let value = if min_res.value < 0.0 && monogamy_ok {
        0.0
    } else {
        min_res.value
    };
    Ok(EntanglementResult {
        value,
        nu_min: foci[min_idx].nu_min,
        partition: Partition::Tripartite(u, w1, w2),
        monogamy_ok: Some(monogamy_ok),
    })
}
