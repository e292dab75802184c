//! Jointly Gaussian covariance models and conditional mutual information.
//!
//! All signals are circularly-symmetric complex Gaussian, so
//! `h(X) = log det(πe Σ_X)` and
//!
//! ```text
//! I(A; B | C) = log det Σ_AC + log det Σ_BC − log det Σ_C − log det Σ_ABC
//! ```
//!
//! in bits, with the log-det of an empty set taken as zero.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::ChannelGains;
use crate::error::{invalid, Error, Result};
use crate::rates::PowerSplit;

pub const X1C: &str = "x1c";
pub const X1P: &str = "x1p";
pub const X2C: &str = "x2c";
pub const X2P: &str = "x2p";
pub const Y1: &str = "y1";
pub const Y2: &str = "y2";
pub const YH1: &str = "yh1";
pub const YH2: &str = "yh2";

/// MI values within this distance of zero are reported as exactly zero.
pub const MI_ZERO_TOL: f64 = 1e-9;

const HERMITIAN_TOL: f64 = 1e-9;
const PSD_FLOOR: f64 = 1e-9;
// Relative Cholesky pivot floor; a pivot below this fraction of its original
// diagonal entry marks the submatrix singular.
const PIVOT_TOL: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct CovarianceModel {
    labels: Vec<String>,
    matrix: DMatrix<Complex64>,
}

impl CovarianceModel {
    /// Validates that `matrix` is a Hermitian positive-semidefinite covariance
    /// over distinct `labels`.
    pub fn new(labels: Vec<String>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = labels.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension(format!(
                "{} labels but a {}x{} matrix",
                n,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(invalid(format!("duplicate label `{l}`")));
            }
        }
        let scale = (0..n).map(|i| matrix[(i, i)].re.abs()).fold(1.0, f64::max);
        for i in 0..n {
            let d = matrix[(i, i)];
            if !(d.re.is_finite() && d.im.is_finite()) || d.im.abs() > HERMITIAN_TOL * scale || d.re < 0.0 {
                return Err(invalid(format!("diagonal entry for `{}` is not real and nonnegative", labels[i])));
            }
            for j in 0..i {
                let (a, b) = (matrix[(i, j)], matrix[(j, i)].conj());
                if !(a.re.is_finite() && a.im.is_finite()) || (a - b).norm() > HERMITIAN_TOL * scale {
                    return Err(invalid(format!("matrix is not Hermitian at ({}, {})", labels[i], labels[j])));
                }
            }
        }
        let min_eig = matrix.clone().symmetric_eigenvalues().min();
        if min_eig < -PSD_FLOOR * scale {
            return Err(invalid(format!("matrix is not positive semidefinite (eigenvalue {min_eig:e})")));
        }
        Ok(Self { labels, matrix })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Variance of a single signal.
    pub fn variance(&self, label: &str) -> Result<f64> {
        let i = self.index_of(label)?;
        Ok(self.matrix[(i, i)].re)
    }

    pub fn covariance(&self, a: &str, b: &str) -> Result<Complex64> {
        Ok(self.matrix[(self.index_of(a)?, self.index_of(b)?)])
    }

    /// `log2 det` of the principal submatrix over `idx`.
    fn log2_det(&self, idx: &[usize]) -> Result<f64> {
        hermitian_log2_det(&self.matrix.select_rows(idx).select_columns(idx)).ok_or_else(|| Error::Degenerate {
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
        })
    }
}

/// `log2 det` of a Hermitian positive-definite matrix through a Cholesky
/// factorization, or `None` if a pivot falls below the relative floor.
pub(crate) fn hermitian_log2_det(m: &DMatrix<Complex64>) -> Option<f64> {
    let n = m.nrows();
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    let mut acc = 0.0;
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > PIVOT_TOL * m[(j, j)].re.abs()) || d <= 0.0 {
            return None;
        }
        let ljj = d.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        acc += d.log2();
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Some(acc)
}

/// Conditional mutual information `I(A; B | C)` in bits.
///
/// The three label sets must be disjoint. Singular submatrices (for example
/// a signal duplicated in `A` and `B`) give [`Error::Degenerate`].
pub fn gaussian_mi(cov: &CovarianceModel, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
    let idx = |set: &[&str]| set.iter().map(|l| cov.index_of(l)).collect::<Result<Vec<_>>>();
    let (ia, ib, ic) = (idx(a)?, idx(b)?, idx(c)?);
    let mut seen = Vec::with_capacity(ia.len() + ib.len() + ic.len());
    for &i in ia.iter().chain(&ib).chain(&ic) {
        if seen.contains(&i) {
            return Err(Error::OverlappingSets(cov.labels[i].clone()));
        }
        seen.push(i);
    }
    if ia.is_empty() || ib.is_empty() {
        return Ok(0.0);
    }
    let join = |x: &[usize], y: &[usize]| x.iter().chain(y).copied().collect::<Vec<_>>();
    let log_det = |s: &[usize]| if s.is_empty() { Ok(0.0) } else { cov.log2_det(s) };

    let abc = join(&join(&ia, &ib), &ic);
    let ld_abc = log_det(&abc)?;
    let value = log_det(&join(&ia, &ic))? + log_det(&join(&ib, &ic))? - log_det(&ic)? - ld_abc;
    Ok(if value.abs() < MI_ZERO_TOL { 0.0 } else { value })
}

/// Covariance over `x1c, x1p, x2c, x2p, y1, y2, yh1, yh2` for the given gains,
/// power splits and quantization distortions.
///
/// `x_i = x_ic + x_ip` with independent components, `y_i` carries unit noise
/// and `yh_i = y_i + ẑ_i` with `ẑ_i ~ CN(0, delta_i)` independent of
/// everything else.
pub fn build_covariance(
    gains: &ChannelGains,
    split1: &PowerSplit,
    split2: &PowerSplit,
    delta1: f64,
    delta2: f64,
) -> Result<CovarianceModel> {
    if !(delta1.is_finite() && delta1 >= 0.0 && delta2.is_finite() && delta2 >= 0.0) {
        return Err(invalid("quantization distortions must be finite and >= 0"));
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // Rows express each labelled signal in the independent sources
    // (x1c, x1p, x2c, x2p, z1, z2, ẑ1, ẑ2).
    let (h11, h12, h21, h22) = (gains.h11, gains.h12, gains.h21, gains.h22);
    #[rustfmt::skip]
    let mix = DMatrix::from_row_slice(8, 8, &[
        one,  zero, zero, zero, zero, zero, zero, zero,
        zero, one,  zero, zero, zero, zero, zero, zero,
        zero, zero, one,  zero, zero, zero, zero, zero,
        zero, zero, zero, one,  zero, zero, zero, zero,
        h11,  h11,  h12,  h12,  one,  zero, zero, zero,
        h21,  h21,  h22,  h22,  zero, one,  zero, zero,
        h11,  h11,  h12,  h12,  one,  zero, one,  zero,
        h21,  h21,  h22,  h22,  zero, one,  zero, one,
    ]);
    let powers = [split1.pc, split1.pp, split2.pc, split2.pp, 1.0, 1.0, delta1, delta2];
    let source = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        8,
        powers.iter().map(|&p| Complex64::new(p, 0.0)),
    ));
    let mut matrix = &mix * source * mix.adjoint();
    // Exact Hermitian symmetry; the product is only symmetric up to round-off.
    for i in 0..8 {
        matrix[(i, i)].im = 0.0;
        for j in 0..i {
            matrix[(j, i)] = matrix[(i, j)].conj();
        }
    }
    let labels = [X1C, X1P, X2C, X2P, Y1, Y2, YH1, YH2].map(String::from).to_vec();
    CovarianceModel::new(labels, matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SymmetricParams;
    use approx::assert_relative_eq;

    fn model(labels: &[&str], rows: &[&[f64]]) -> CovarianceModel {
        let n = labels.len();
        let data: Vec<Complex64> = rows.iter().flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0))).collect();
        CovarianceModel::new(labels.iter().map(|s| s.to_string()).collect(), DMatrix::from_row_slice(n, n, &data))
            .unwrap()
    }

    #[test]
    fn independent_signals_share_nothing() {
        let m = model(&["a", "b", "c"], &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert_eq!(gaussian_mi(&m, &["a"], &["b"], &[]).unwrap(), 0.0);
        assert_eq!(gaussian_mi(&m, &["a"], &["b", "c"], &[]).unwrap(), 0.0);
        assert_eq!(gaussian_mi(&m, &["a"], &["b"], &["c"]).unwrap(), 0.0);
    }

    #[test]
    fn correlated_pair() {
        let m = model(&["a", "b"], &[&[1.0, 0.5], &[0.5, 1.0]]);
        // −log2(1 − ρ²); the 2x2 determinant is 1 − 0.25.
        let expected = -(1.0f64 - 0.25).log2();
        assert_relative_eq!(gaussian_mi(&m, &["a"], &["b"], &[]).unwrap(), expected, epsilon = 1e-12);
        assert_relative_eq!(expected, 0.415037499, epsilon = 1e-9);
    }

    #[test]
    fn duplicated_signal_is_degenerate() {
        let m = model(&["a", "b"], &[&[1.0, 1.0], &[1.0, 1.0]]);
        match gaussian_mi(&m, &["a"], &["b"], &[]) {
            Err(Error::Degenerate { labels }) => assert_eq!(labels, vec!["a", "b"]),
            other => panic!("expected degenerate error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_label_sets() {
        let m = model(&["a", "b"], &[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(matches!(gaussian_mi(&m, &["a"], &["a"], &[]), Err(Error::OverlappingSets(_))));
        assert!(matches!(gaussian_mi(&m, &["a"], &["z"], &[]), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn rejects_non_psd() {
        let data = [1.0, 2.0, 2.0, 1.0].map(|x| Complex64::new(x, 0.0));
        let r = CovarianceModel::new(vec!["a".into(), "b".into()], DMatrix::from_row_slice(2, 2, &data));
        assert!(r.is_err());
    }

    #[test]
    fn noise_only_model() {
        let g = ChannelGains::from_symmetric(&SymmetricParams::new(100.0, 10.0, 0.0).unwrap(), [0.0; 4]).unwrap();
        let silent = PowerSplit { pc: 0.0, pp: 0.0 };
        let m = build_covariance(&g, &silent, &silent, 2.0, 3.0).unwrap();
        let expected = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 3.0, 4.0];
        for (i, e) in expected.iter().enumerate() {
            assert_relative_eq!(m.matrix()[(i, i)].re, *e, epsilon = 1e-12);
        }
        assert_relative_eq!(m.covariance(Y1, YH1).unwrap().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn received_power_and_cross_covariance() {
        let g = ChannelGains::from_symmetric(&SymmetricParams::new(100.0, 10.0, 0.0).unwrap(), [0.0; 4]).unwrap();
        let split = PowerSplit { pc: 0.9, pp: 0.1 };
        let m = build_covariance(&g, &split, &split, 0.0, 0.0).unwrap();
        assert_relative_eq!(m.variance(Y1).unwrap(), 111.0, max_relative = 1e-12);
        let c = m.covariance(Y1, Y2).unwrap();
        assert_relative_eq!(c.re, 20.0 * 10f64.sqrt(), max_relative = 1e-12);
        assert!(c.im.abs() < 1e-12);
    }

    #[test]
    fn cross_covariance_matches_sampling() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        let g = ChannelGains::from_symmetric(&SymmetricParams::new(100.0, 10.0, 0.0).unwrap(), [0.0; 4]).unwrap();
        let split = PowerSplit { pc: 0.9, pp: 0.1 };
        let m = build_covariance(&g, &split, &split, 0.0, 0.0).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut cn = |var: f64| {
            let s = (var / 2.0).sqrt();
            // Box-Muller pair.
            let (u1, u2): (f64, f64) = (rng.gen::<f64>().max(1e-300), rng.gen());
            let r = (-2.0 * u1.ln()).sqrt() * s;
            Complex64::new(r * (2.0 * std::f64::consts::PI * u2).cos(), r * (2.0 * std::f64::consts::PI * u2).sin())
        };
        let n = 200_000;
        let mut acc = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let x1 = cn(0.9) + cn(0.1);
            let x2 = cn(0.9) + cn(0.1);
            let y1 = g.h11 * x1 + g.h12 * x2 + cn(1.0);
            let y2 = g.h21 * x1 + g.h22 * x2 + cn(1.0);
            acc += y1 * y2.conj();
        }
        let estimate = acc / n as f64;
        let exact = m.covariance(Y1, Y2).unwrap();
        assert!((estimate - exact).norm() < 1.5, "estimate {estimate} vs {exact}");
    }
}
