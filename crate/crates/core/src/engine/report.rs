//! Convergence trajectories `n -> B_n(f, x0)` and their verdicts.

use rayon::prelude::*;
use serde::Serialize;

use super::{bernstein_eval_mode, target_or_value, Mode, Num, Target};
use crate::error::{Error, Result};
use crate::gallery::GalleryFn;
use crate::scalar::ExactScalar;

/// Tolerance used when none is configured.
pub const DEFAULT_TOL: (i64, i64) = (1, 50);

/// Doubling schedule `2^4 ..= 2^12` (exact) or `2^4 ..= 2^20` (float).
pub fn default_schedule(mode: Mode) -> Vec<u64> {
    let top = match mode {
        Mode::Exact => 12,
        Mode::Float => 20,
    };
    (4..=top).map(|e| 1u64 << e).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    /// Errors are below `tol` from `at_n` to the end of the schedule, which
    /// covers at least the last three entries.
    Converged { tol: ExactScalar, at_n: u64 },
    /// The last three values agree within `tol` but miss the target.
    NotConverged,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub x0: ExactScalar,
    pub mode: super::Mode,
    pub schedule: Vec<u64>,
    pub values: Vec<Num>,
    pub target: Target,
    pub errors: Vec<Num>,
    pub tol: ExactScalar,
    #[serde(flatten)]
    pub verdict: Verdict,
}

pub(crate) fn check_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::Domain("schedule is empty".into()));
    }
    if schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("schedule must be strictly increasing positive degrees".into()));
    }
    Ok(())
}

/// `B_n(f, x0)` for every `n` in the schedule, in schedule order.
pub fn trajectory(f: &GalleryFn, x0: &ExactScalar, schedule: &[u64], mode: Mode) -> Result<Vec<Num>> {
    check_schedule(schedule)?;
    schedule.par_iter().map(|&n| bernstein_eval_mode(f, n, x0, mode)).collect()
}

/// True when the last three values lie pairwise within `tol`.
pub fn stabilized(values: &[Num], tol: &ExactScalar) -> bool {
    if values.len() < 3 {
        return false;
    }
    let tail = &values[values.len() - 3..];
    (0..3).all(|i| (i + 1..3).all(|j| tail[i].abs_diff_num(&tail[j]).lt(tol)))
}

pub fn converge_report(
    f: &GalleryFn,
    x0: &ExactScalar,
    schedule: &[u64],
    tol: &ExactScalar,
    mode: Mode,
) -> Result<ConvergenceReport> {
    if !tol.is_positive() {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let target = target_or_value(f, x0)?;
    let values = trajectory(f, x0, schedule, mode)?;
    let errors: Vec<Num> = values.iter().map(|v| v.abs_diff(&target.value)).collect();
    let verdict = verdict(schedule, &values, &errors, tol);
    Ok(ConvergenceReport {
        x0: x0.clone(),
        mode,
        schedule: schedule.to_vec(),
        values,
        target,
        errors,
        tol: tol.clone(),
        verdict,
    })
}

fn verdict(schedule: &[u64], values: &[Num], errors: &[Num], tol: &ExactScalar) -> Verdict {
    if schedule.len() < 3 {
        return Verdict::Inconclusive;
    }
    let below = errors.iter().rev().take_while(|e| e.lt(tol)).count();
    if below >= 3 {
        return Verdict::Converged { tol: tol.clone(), at_n: schedule[schedule.len() - below] };
    }
    if stabilized(values, tol) {
        Verdict::NotConverged
    } else {
        Verdict::Inconclusive
    }
}
