//! ADMM on the relaxed problem
//!
//! ```text
//! min  Tr(B Z) + beta ||P||_* + <alpha, z - 1> + rho/2 ||z - 1||^2
//!      + <Gamma, P - Z> + rho/2 ||P - Z||_F^2      s.t. P >= 0
//! ```
//!
//! with `B = -Ã` and `z = diag(Z)`. Each iteration solves the Z block in
//! closed form, the P block by eigenvalue soft-thresholding, then takes
//! dual steps on `alpha` and `Gamma`.

use std::fmt::Write as _;

use ndarray::{Array1, Array2, Zip};

use crate::error::{Error, Result};
use crate::graph::{ClusterAssignment, Graph, SensitiveAttributes};
use crate::numerics::{frobenius_norm, leading_eigenpairs, power_iteration, svt_psd, sym_eig, EigenOrdering};
use crate::spectral::{build_penalized, PenalizedMatrix, SolverConfig};

/// Which iterates feed the P step and the `alpha` step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdmmVariant {
    /// Freshest iterates everywhere.
    #[default]
    Standard,
    /// The P step's proximity term and the `alpha` step use the previous
    /// iteration's `Z`.
    Lagged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmConfig {
    pub rho: f64,
    pub beta: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub variant: AdmmVariant,
    pub solver: SolverConfig,
}

impl AdmmConfig {
    pub fn new(solver: SolverConfig) -> Self {
        AdmmConfig {
            rho: 1.0,
            beta: 1.0,
            max_iter: 1000,
            tol: 1e-6,
            variant: AdmmVariant::Standard,
            solver,
        }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {}", self.rho)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be non-negative, got {}", self.beta)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub z: Array2<f64>,
    pub p: Array2<f64>,
    pub alpha: Array1<f64>,
    pub gamma: Array2<f64>,
    pub iteration: usize,
    /// `||P - Z||_F`
    pub residual_split: f64,
    /// `max_i |Z_ii - 1|`
    pub residual_diag: f64,
}

impl AdmmState {
    /// `Z = 0`, `P = 0`, `Gamma = 11^T`, `alpha = 1`.
    pub fn initial(n: usize) -> Self {
        AdmmState {
            z: Array2::zeros((n, n)),
            p: Array2::zeros((n, n)),
            alpha: Array1::ones(n),
            gamma: Array2::ones((n, n)),
            iteration: 0,
            residual_split: 0.0,
            residual_diag: 1.0,
        }
    }

    pub fn n(&self) -> usize {
        self.z.nrows()
    }

    fn refresh_residuals(&mut self) {
        self.residual_split = frobenius_norm(&(&self.p - &self.z));
        self.residual_diag = self.z.diag().iter().fold(0.0f64, |m, &d| m.max((d - 1.0).abs()));
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub residual_split: f64,
    pub residual_diag: f64,
}

#[derive(Debug, Clone)]
pub struct AdmmSolution {
    pub state: AdmmState,
    pub trace: Vec<TraceRow>,
    pub converged: bool,
}

/// Minimizer of the Z subproblem with `P`, `Gamma`, `alpha` held fixed:
/// off-diagonal `P_ij + (Gamma_ij - B_ij) / rho`, diagonal
/// `(rho (1 + P_ii) + Gamma_ii - B_ii - alpha_i) / (2 rho)`.
pub fn z_update(state: &AdmmState, b: &Array2<f64>, cfg: &AdmmConfig) -> Array2<f64> {
    let rho = cfg.rho;
    let mut z = Array2::zeros(b.raw_dim());
    Zip::from(&mut z)
        .and(&state.p)
        .and(&state.gamma)
        .and(b)
        .for_each(|z, &p, &g, &b| *z = p + (g - b) / rho);
    for i in 0..z.nrows() {
        let (p, g, bi) = (state.p[[i, i]], state.gamma[[i, i]], b[[i, i]]);
        z[[i, i]] = (rho * (1.0 + p) + g - bi - state.alpha[i]) / (2.0 * rho);
    }
    z
}

/// `argmin_{P >= 0} beta ||P||_* + <Gamma, P - Z> + rho/2 ||P - Z||_F^2`
/// for `Z = state.z`.
pub fn p_update(state: &AdmmState, cfg: &AdmmConfig) -> Result<Array2<f64>> {
    p_step(&state.z, &state.gamma, cfg)
}

fn p_step(z: &Array2<f64>, gamma: &Array2<f64>, cfg: &AdmmConfig) -> Result<Array2<f64>> {
    let target = z - &(gamma / cfg.rho);
    svt_psd(&target, cfg.beta / cfg.rho)
}

/// The objective above at the current iterate.
pub fn augmented_lagrangian(state: &AdmmState, b: &Array2<f64>, cfg: &AdmmConfig) -> Result<f64> {
    let trace_bz = (b * &state.z).sum();
    let nuclear: f64 = sym_eig(&state.p)?.eigenvalues.iter().map(|l| l.abs()).sum();
    let zd = state.z.diag().mapv(|d| d - 1.0);
    let split = &state.p - &state.z;
    Ok(trace_bz
        + cfg.beta * nuclear
        + state.alpha.dot(&zd)
        + 0.5 * cfg.rho * zd.dot(&zd)
        + (&state.gamma * &split).sum()
        + 0.5 * cfg.rho * split.iter().map(|x| x * x).sum::<f64>())
}

fn first_non_finite(state: &AdmmState) -> Option<&'static str> {
    if state.z.iter().any(|x| !x.is_finite()) {
        Some("Z")
    } else if state.p.iter().any(|x| !x.is_finite()) {
        Some("P")
    } else if state.alpha.iter().any(|x| !x.is_finite()) {
        Some("alpha")
    } else if state.gamma.iter().any(|x| !x.is_finite()) {
        Some("Gamma")
    } else {
        None
    }
}

pub fn admm_solve(g: &Graph, s: &SensitiveAttributes, cfg: &AdmmConfig) -> Result<AdmmSolution> {
    let penalized = build_penalized(g, s, &cfg.solver)?;
    admm_solve_penalized(&penalized, cfg)
}

/// Runs until both residuals drop below `tol` or `max_iter` iterations.
pub fn admm_solve_penalized(penalized: &PenalizedMatrix, cfg: &AdmmConfig) -> Result<AdmmSolution> {
    cfg.validate()?;
    let b = penalized.matrix.mapv(|x| -x);
    let mut state = AdmmState::initial(penalized.n());
    let mut trace = Vec::with_capacity(cfg.max_iter.min(10_000));
    let mut converged = false;

    for it in 1..=cfg.max_iter {
        let z_prev_diag = state.z.diag().to_owned();
        let z_new = z_update(&state, &b, cfg);
        let p_new = match cfg.variant {
            AdmmVariant::Standard => p_step(&z_new, &state.gamma, cfg)?,
            AdmmVariant::Lagged => {
                // the inner product term is constant in P, only the proximity
                // centre moves back to the previous Z
                p_step(&state.z, &state.gamma, cfg)?
            }
        };
        state.z = z_new;
        state.p = p_new;

        let rho = cfg.rho;
        let step_diag = match cfg.variant {
            AdmmVariant::Standard => state.z.diag().to_owned(),
            AdmmVariant::Lagged => z_prev_diag,
        };
        Zip::from(&mut state.alpha)
            .and(&step_diag)
            .for_each(|a, &z| *a += rho * (z - 1.0));
        Zip::from(&mut state.gamma)
            .and(&state.p)
            .and(&state.z)
            .for_each(|g, &p, &z| *g += rho * (p - z));

        state.iteration = it;
        if let Some(quantity) = first_non_finite(&state) {
            return Err(Error::Diverged { iteration: it, quantity });
        }
        state.refresh_residuals();
        trace.push(TraceRow {
            iteration: it,
            residual_split: state.residual_split,
            residual_diag: state.residual_diag,
        });
        if state.residual_split < cfg.tol && state.residual_diag < cfg.tol {
            converged = true;
            break;
        }
    }
    log::debug!(
        "admm stopped after {} iterations (split {:e}, diag {:e})",
        state.iteration,
        state.residual_split,
        state.residual_diag
    );
    Ok(AdmmSolution {
        state,
        trace,
        converged,
    })
}

/// Rounded assignment plus a flag for an uninformative `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rounding {
    pub assignment: ClusterAssignment,
    /// The two largest eigenvalues of `P` are within `1e-6` relative.
    pub low_confidence: bool,
}

/// Splits nodes by the sign of the leading eigenvector of `P`.
pub fn round_assignment(state: &AdmmState) -> Result<ClusterAssignment> {
    round_with_confidence(state).map(|r| r.assignment)
}

pub fn round_with_confidence(state: &AdmmState) -> Result<Rounding> {
    let p = &state.p;
    let v = match power_iteration(p, 1e-10, 20_000) {
        Ok((_, v)) => v,
        Err(Error::NoConvergence(..)) => {
            let eig = sym_eig(p)?;
            eig.eigenvectors.column(0).to_owned()
        }
        Err(e) => return Err(e),
    };
    let signs: Vec<i8> = v.iter().map(|&x| if x >= 0.0 { 1 } else { -1 }).collect();

    let low_confidence = if p.nrows() < 2 {
        false
    } else {
        let top = leading_eigenpairs(p, 2, EigenOrdering::LargestAlgebraic)?.values;
        (top[0] - top[1]).abs() <= 1e-6 * top[0].abs().max(f64::MIN_POSITIVE)
    };
    Ok(Rounding {
        assignment: ClusterAssignment::from_signs(&signs),
        low_confidence,
    })
}

/// `iteration,residual_split,residual_diag` rows.
pub fn format_trace(trace: &[TraceRow]) -> String {
    let mut out = String::from("iteration,residual_split,residual_diag\n");
    for r in trace {
        let _ = writeln!(out, "{},{:e},{:e}", r.iteration, r.residual_split, r.residual_diag);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::fair_spectral_binary;
    use ndarray::array;

    fn cfg() -> AdmmConfig {
        AdmmConfig::new(SolverConfig::binary(0.0, 1.0))
    }

    #[test]
    fn z_update_zero_inputs() {
        let mut st = AdmmState::initial(3);
        st.gamma.fill(0.0);
        st.alpha.fill(0.0);
        let z = z_update(&st, &Array2::zeros((3, 3)), &cfg());
        assert_eq!(z, Array2::from_diag(&array![0.5, 0.5, 0.5]));
    }

    #[test]
    fn p_update_hand_cases() {
        let mut st = AdmmState::initial(2);
        st.gamma.fill(0.0);
        st.z = array![[3.0, 0.0], [0.0, 1.0]];
        assert_eq!(p_update(&st, &cfg()).unwrap(), array![[2.0, 0.0], [0.0, 0.0]]);

        let mut c = cfg();
        c.beta = 0.0;
        st.z = array![[2.0, 1.0], [1.0, 2.0]];
        let p = p_update(&st, &c).unwrap();
        assert!((&p - &st.z).iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn rank_one_rounding() {
        let y = array![1.0, -1.0, 1.0, 1.0, -1.0];
        let mut st = AdmmState::initial(5);
        st.p = Array2::from_shape_fn((5, 5), |(i, j)| y[i] * y[j]);
        let r = round_with_confidence(&st).unwrap();
        let l = r.assignment.labels();
        for i in 0..5 {
            assert_eq!(l[i] == l[0], y[i] == y[0]);
        }
        assert!(!r.low_confidence);

        st.p = Array2::eye(5);
        let r = round_with_confidence(&st).unwrap();
        assert!(r.low_confidence);
        assert_eq!(r, round_with_confidence(&st).unwrap());
    }

    #[test]
    fn rejects_bad_config() {
        let mut c = cfg();
        c.rho = 0.0;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.beta = -1.0;
        assert!(c.validate().is_err());
        assert!(cfg().with_max_iter(0).validate().is_err());
    }

    #[test]
    fn cliques_match_spectral() {
        let n = 9;
        let a = Array2::from_shape_fn((n, n), |(i, j)| if i != j && (i < 4) == (j < 4) { 1.0 } else { 0.0 });
        let g = Graph::new(a).unwrap();
        let s = SensitiveAttributes::binary((0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect()).unwrap();
        let c = cfg().with_max_iter(500);
        let sol = admm_solve(&g, &s, &c).unwrap();
        let admm = round_assignment(&sol.state).unwrap();
        let pen = build_penalized(&g, &s, &c.solver).unwrap();
        let svd = fair_spectral_binary(&pen).unwrap();
        let same = admm.labels().iter().zip(svd.labels()).all(|(a, b)| a == b)
            || admm.labels().iter().zip(svd.labels()).all(|(a, b)| a != b);
        assert!(same, "{:?} vs {:?}", admm.labels(), svd.labels());
        assert_eq!(sol.trace.len(), sol.state.iteration);
        assert!(sol.trace[sol.trace.len() - 1].residual_split < sol.trace[49].residual_split);
    }

    #[test]
    fn iterates_stay_symmetric() {
        let n = 6;
        let pen = PenalizedMatrix {
            matrix: Array2::from_shape_fn((n, n), |(i, j)| ((i * 7 + j * 7) % 5) as f64 * 0.3 - 0.5),
        };
        let sol = admm_solve_penalized(&pen, &cfg().with_max_iter(60)).unwrap();
        let st = &sol.state;
        for m in [&st.z, &st.p, &st.gamma] {
            assert_eq!(m, &m.t().to_owned());
        }
        let eig = sym_eig(&st.p).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| l > -1e-8));
        let b = pen.matrix.mapv(|x| -x);
        assert!(augmented_lagrangian(st, &b, &cfg()).unwrap().is_finite());
    }

    #[test]
    fn trace_csv_header() {
        let rows = [TraceRow {
            iteration: 1,
            residual_split: 0.5,
            residual_diag: 0.25,
        }];
        assert_eq!(format_trace(&rows), "iteration,residual_split,residual_diag\n1,5e-1,2.5e-1\n");
    }
}
