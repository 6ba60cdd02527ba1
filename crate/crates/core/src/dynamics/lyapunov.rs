//! Largest Lyapunov exponent of the discrete maps.

use serde::{Deserialize, Serialize};

use crate::dynamics::maps::{coupled, coupled_jacobian, lde, lde_derivative};
use crate::dynamics::params::{ChainParams, ChainState};
use crate::error::{Chain, Error, Result};

/// Iterations discarded before averaging.
pub const DEFAULT_BURN_IN: usize = 1000;
pub const MIN_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSystem {
    Logistic { r: f64 },
    Lde { r: f64, k: f64 },
    Coupled(ChainParams),
}

/// Average of `ln |f'(x_n)|` over `n_iter` iterations after `n_burn`
/// discarded ones. Single-chain systems start from `initial.x`; the coupled
/// system uses tangent-vector renormalization.
///
/// An orbit that lands on a critical point (zero derivative) yields
/// negative infinity.
pub fn lyapunov_exponent(
    system: &MapSystem,
    initial: ChainState,
    n_iter: usize,
    n_burn: usize,
) -> Result<f64> {
    if n_iter < MIN_ITERATIONS {
        return Err(Error::InvalidParams(format!(
            "lyapunov estimate needs at least {MIN_ITERATIONS} iterations, got {n_iter}"
        )));
    }
    match *system {
        MapSystem::Logistic { r } => {
            if !(r > 0.0 && r <= 4.0) || !(0.0..=1.0).contains(&initial.x) {
                return Err(Error::DomainViolation(format!(
                    "logistic map needs r in (0, 4] and x in [0, 1], got r={r}, x={}",
                    initial.x
                )));
            }
            Ok(scalar(
                initial.x,
                n_iter,
                n_burn,
                |x| r * x * (1.0 - x),
                |x| r * (1.0 - 2.0 * x),
            ))
            .and_then(check)
        }
        MapSystem::Lde { r, k } => {
            if !(r > 0.0 && k > 0.0) || !(initial.x.is_finite() && initial.x > 0.0) {
                return Err(Error::DomainViolation(format!(
                    "LDE needs r, K, x0 > 0, got r={r}, K={k}, x0={}",
                    initial.x
                )));
            }
            let mut x = initial.x;
            let mut sum = 0.0;
            for n in 0..n_burn + n_iter {
                if n >= n_burn {
                    sum += lde_derivative(x, r, k).abs().ln();
                }
                x = lde(x, r, k);
                if !x.is_finite() {
                    return Err(Error::NonFinite {
                        chain: Chain::X,
                        index: n + 1,
                    });
                }
            }
            check(sum / n_iter as f64)
        }
        MapSystem::Coupled(params) => coupled_exponent(&params, initial, n_iter, n_burn),
    }
}

fn scalar<F, D>(x0: f64, n_iter: usize, n_burn: usize, f: F, df: D) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = x0;
    for _ in 0..n_burn {
        x = f(x);
    }
    let mut sum = 0.0;
    for _ in 0..n_iter {
        sum += df(x).abs().ln();
        x = f(x);
    }
    sum / n_iter as f64
}

fn check(lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda == f64::INFINITY {
        Err(Error::NonFinite {
            chain: Chain::X,
            index: 0,
        })
    } else {
        Ok(lambda)
    }
}

fn coupled_exponent(
    params: &ChainParams,
    initial: ChainState,
    n_iter: usize,
    n_burn: usize,
) -> Result<f64> {
    params.validate()?;
    initial.validate()?;
    let mut s = ChainState { n: 0, ..initial };
    for _ in 0..n_burn {
        s = coupled(&s, params)?;
    }
    let mut v = [std::f64::consts::FRAC_1_SQRT_2; 2];
    let mut sum = 0.0;
    for _ in 0..n_iter {
        let j = coupled_jacobian(&s, params);
        let w = [
            j[0][0] * v[0] + j[0][1] * v[1],
            j[1][0] * v[0] + j[1][1] * v[1],
        ];
        let norm = w[0].hypot(w[1]);
        sum += norm.ln();
        if norm == 0.0 || !norm.is_finite() {
            return check(if norm == 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            });
        }
        v = [w[0] / norm, w[1] / norm];
        s = coupled(&s, params)?;
    }
    check(sum / n_iter as f64)
}
