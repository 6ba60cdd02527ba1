//! Pairwise Granger causality with an OLS F-test.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::error::{Error, Result};

/// Default number of own and cross lags.
pub const DEFAULT_ORDER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FTest {
    pub f: f64,
    pub p_value: f64,
    pub df1: usize,
    pub df2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrangerResult {
    pub order: usize,
    /// Do lags of x improve the prediction of y?
    pub x_to_y: FTest,
    /// Do lags of y improve the prediction of x?
    pub y_to_x: FTest,
}

/// Test both directions with `order` lags and an intercept.
///
/// Requires at least `20 * order` observations.
pub fn granger(x: &[f64], y: &[f64], order: usize) -> Result<GrangerResult> {
    if x.len() != y.len() {
        return Err(Error::InvalidParams(format!(
            "series lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if order < 1 || x.len() < 20 * order {
        return Err(Error::InvalidParams(format!(
            "granger order {order} needs at least {} observations, got {}",
            20 * order.max(1),
            x.len()
        )));
    }
    Ok(GrangerResult {
        order,
        x_to_y: f_test(y, x, order)?,
        y_to_x: f_test(x, y, order)?,
    })
}

/// Does `cause` help predict `effect`?
pub fn f_test(effect: &[f64], cause: &[f64], p: usize) -> Result<FTest> {
    if effect.len() != cause.len() || p < 1 || effect.len() < 3 * p + 2 {
        return Err(Error::InvalidParams(format!(
            "F test with {p} lags needs equal lengths of at least {}, got {} and {}",
            3 * p + 2,
            effect.len(),
            cause.len()
        )));
    }
    let n = effect.len() - p;
    let target = DVector::from_iterator(n, effect[p..].iter().copied());
    let own = |row: usize, lag: usize| effect[p + row - lag];
    let cross = |row: usize, lag: usize| cause[p + row - lag];

    let restricted = DMatrix::from_fn(n, 1 + p, |i, j| if j == 0 { 1.0 } else { own(i, j) });
    let unrestricted = DMatrix::from_fn(n, 1 + 2 * p, |i, j| match j {
        0 => 1.0,
        j if j <= p => own(i, j),
        j => cross(i, j - p),
    });

    let rss0 = rss(restricted, &target)?;
    let rss1 = rss(unrestricted, &target)?;
    let df1 = p;
    let df2 = n - 2 * p - 1;
    if rss1 <= 0.0 {
        return Err(Error::SingularDesign(
            "unrestricted model fits exactly".into(),
        ));
    }
    let f = (((rss0 - rss1) / df1 as f64) / (rss1 / df2 as f64)).max(0.0);
    let dist = FisherSnedecor::new(df1 as f64, df2 as f64)
        .map_err(|e| Error::InvalidParams(format!("F distribution: {e}")))?;
    let p_value = dist.sf(f).clamp(0.0, 1.0);
    Ok(FTest {
        f,
        p_value,
        df1,
        df2,
    })
}

/// Residual sum of squares of the least-squares fit via Householder QR.
fn rss(design: DMatrix<f64>, target: &DVector<f64>) -> Result<f64> {
    let k = design.ncols();
    let qr = design.clone().qr();
    let r = qr.r();
    let diag_max = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if (0..k).any(|i| r[(i, i)].abs() <= 1e-10 * diag_max) || diag_max == 0.0 {
        return Err(Error::SingularDesign(format!(
            "regression matrix with {k} columns is rank-deficient"
        )));
    }
    let qtb = qr.q().transpose() * target;
    let beta = r
        .solve_upper_triangular(&qtb)
        .ok_or_else(|| Error::SingularDesign("triangular solve failed".into()))?;
    let resid = target - design * beta;
    Ok(resid.norm_squared())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicated_series_is_singular() {
        let x: Vec<f64> = (0..200).map(|i| ((i * 37 % 101) as f64).sin()).collect();
        assert!(matches!(granger(&x, &x, 2), Err(Error::SingularDesign(_))));
    }

    #[test]
    fn too_short() {
        let x = vec![0.0; 50];
        assert!(matches!(granger(&x, &x, 3), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn degrees_of_freedom() {
        let x: Vec<f64> = (0..300).map(|i| ((i * 13 % 97) as f64).cos()).collect();
        let y: Vec<f64> = (0..300).map(|i| ((i * 29 % 89) as f64).sin()).collect();
        let g = granger(&x, &y, 3).unwrap();
        assert_eq!((g.y_to_x.df1, g.y_to_x.df2), (3, 300 - 3 - 7));
    }
}
