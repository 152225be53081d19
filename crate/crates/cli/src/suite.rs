//! Runs every configured check and assembles the report in config order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sonine_core::asymptotics::{convergence_study, ConvergenceTable, FitStatus};
use sonine_core::identities::{evaluate, IdentityId, IdentityReport, Status};

use crate::config::{ConvergenceSpec, RawPoint, SuiteConfig};

/// Relative gap allowed at every `N` of an exact finite-N identity.
pub const EXACT_RELATIVE_TOLERANCE: f64 = 1e-10;
/// Default largest gap at the last `N` of a limit study.
pub const DEFAULT_FINAL_GAP: f64 = 1e-2;
/// Default number of steps where a limit study's gap may grow.
pub const DEFAULT_NON_MONOTONE: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    ConjecturePass,
    Error,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::ConjecturePass => "conjecture-pass",
            Outcome::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CheckReport {
    Identity {
        outcome: Outcome,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        expect_error: bool,
        report: IdentityReport,
    },
    Convergence {
        outcome: Outcome,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        expect_error: bool,
        spec: ConvergenceSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<ConvergenceTable>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        message: Option<String>,
    },
}

impl CheckReport {
    pub fn outcome(&self) -> Outcome {
        match self {
            CheckReport::Identity { outcome, .. } | CheckReport::Convergence { outcome, .. } => *outcome,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub conjecture_passed: usize,
    pub errored: usize,
}

impl Summary {
    fn tally(checks: &[CheckReport]) -> Self {
        let mut s = Summary {
            total: checks.len(),
            ..Summary::default()
        };
        for c in checks {
            match c.outcome() {
                Outcome::Pass => s.passed += 1,
                Outcome::Fail => s.failed += 1,
                Outcome::ConjecturePass => s.conjecture_passed += 1,
                Outcome::Error => s.errored += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub tool_version: String,
    pub summary: Summary,
    pub config_echo: SuiteConfig,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    /// 0 when nothing failed or errored; conjecture passes do not count against the run.
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed == 0 && self.summary.errored == 0 {
            0
        } else {
            1
        }
    }
}

enum Job<'a> {
    Identity { id: IdentityId, point: RawPoint, expect_error: bool },
    Convergence(&'a ConvergenceSpec),
}

/// With `expect_error`, an evaluation error is the passing result and anything else fails.
fn identity_outcome(status: Status, expect_error: bool) -> Outcome {
    match (status, expect_error) {
        (Status::Error, true) => Outcome::Pass,
        (_, true) => Outcome::Fail,
        (Status::Pass, false) => Outcome::Pass,
        (Status::Fail, false) => Outcome::Fail,
        (Status::ConjecturePass, false) => Outcome::ConjecturePass,
        (Status::Error, false) => Outcome::Error,
    }
}

fn run_identity(config: &SuiteConfig, id: IdentityId, point: RawPoint, expect_error: bool) -> CheckReport {
    let report = match point.params() {
        Ok(params) => evaluate(id, &params, &config.tolerances),
        Err(err) => {
            // Orders that cannot even be represented; keep the raw point visible.
            let params = sonine_core::identities::IdentityParams {
                alpha: sonine_core::Order::of(0.0),
                beta: None,
                x: point.x,
                y: point.y,
                nu: None,
            };
            let mut r = IdentityReport::failed_evaluation(id, params, &err);
            r.message = Some(format!("{err} (alpha {}, beta {:?}, nu {:?})", point.alpha, point.beta, point.nu));
            r
        }
    };
    CheckReport::Identity {
        outcome: identity_outcome(report.status, expect_error),
        expect_error,
        report,
    }
}

/// Pass rule of a study; `Err` carries the reason for failing.
fn judge(spec: &ConvergenceSpec, table: &ConvergenceTable) -> Result<(), String> {
    if spec.target.is_exact() {
        for e in &table.entries {
            let scale = e.finite_value.abs().max(e.limit_value.abs());
            if !(e.abs_error <= EXACT_RELATIVE_TOLERANCE * scale) {
                return Err(format!("exact identity misses by {:e} at N = {}", e.abs_error, e.n));
            }
        }
        return Ok(());
    }
    let last = table.entries.last().ok_or("empty table")?;
    let gap = spec.max_final_gap.unwrap_or(DEFAULT_FINAL_GAP);
    if !(last.abs_error <= gap) {
        return Err(format!("gap {:e} at N = {} exceeds {gap:e}", last.abs_error, last.n));
    }
    let allowed = spec.max_non_monotone.unwrap_or(DEFAULT_NON_MONOTONE);
    let steps = table.non_monotone_steps();
    if steps > allowed {
        return Err(format!("gap grows at {steps} steps, at most {allowed} allowed"));
    }
    if let Some((lo, hi)) = spec.rate_window {
        if table.fit_status != FitStatus::Fitted {
            return Err(format!("rate required but the fit is {:?}", table.fit_status));
        }
        if !(lo..=hi).contains(&table.fitted_rate) {
            return Err(format!("fitted rate {} outside [{lo}, {hi}]", table.fitted_rate));
        }
    }
    Ok(())
}

fn run_convergence(spec: &ConvergenceSpec) -> CheckReport {
    let (outcome, table, message) = match convergence_study(spec.target, &spec.n_list) {
        Ok(table) => match (judge(spec, &table), spec.expect_error) {
            (_, true) => (Outcome::Fail, Some(table), Some("expected an error".to_string())),
            (Ok(()), false) => (Outcome::Pass, Some(table), None),
            (Err(why), false) => (Outcome::Fail, Some(table), Some(why)),
        },
        Err(err) => {
            let outcome = if spec.expect_error { Outcome::Pass } else { Outcome::Error };
            (outcome, None, Some(err.to_string()))
        }
    };
    CheckReport::Convergence {
        outcome,
        expect_error: spec.expect_error,
        spec: spec.clone(),
        table,
        message,
    }
}

/// Evaluates every check, in parallel; the report keeps config order.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let mut jobs: Vec<Job> = config
        .expand_identities()
        .into_iter()
        .map(|(grid, id, point)| Job::Identity {
            id,
            point,
            expect_error: config.identities[grid].expect_error,
        })
        .collect();
    jobs.extend(config.convergence.iter().map(Job::Convergence));
    let checks: Vec<CheckReport> = jobs
        .par_iter()
        .map(|job| match *job {
            Job::Identity { id, point, expect_error } => run_identity(config, id, point, expect_error),
            Job::Convergence(spec) => run_convergence(spec),
        })
        .collect();
    SuiteReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        summary: Summary::tally(&checks),
        config_echo: config.clone(),
        checks,
    }
}
