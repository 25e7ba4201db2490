//! Parallel differential harness: generated cases, every property, greedy
//! shrinking of failures.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::json;
use tricheck_core::oracle::gen::{gen_case_at, Case, GenConfig};
use tricheck_core::oracle::properties::{check_property, Outcome, Property};
use tricheck_core::oracle::shrink::shrink;
use tricheck_core::triples::Mutation;
use tricheck_core::State;

use crate::render::state_json;

/// One property failure on one generated case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureRecord {
    /// Index of the case in the run, fixed before dispatch.
    pub index: u64,
    pub triple: String,
    pub property: Property,
    /// Names the disagreeing verdicts.
    pub detail: String,
    pub counterexample: Option<State>,
    pub shrunk: String,
}

impl FailureRecord {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "case": self.index,
            "triple": self.triple,
            "property": self.property.name(),
            "detail": self.detail,
            "counterexample": self.counterexample.as_ref().map(state_json),
            "shrunk": self.shrunk,
        })
    }
}

impl fmt::Display for FailureRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "case {}: {} fails {}",
            self.index,
            self.triple,
            self.property.name()
        )?;
        writeln!(f, "  {}", self.detail)?;
        if let Some(s) = &self.counterexample {
            writeln!(f, "  counterexample: {s}")?;
        }
        write!(f, "  shrunk: {}", self.shrunk)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub cases_run: usize,
    /// Sorted by case index, then property.
    pub failures: Vec<FailureRecord>,
    /// Cases skipped because generation was exhausted.
    pub exhausted: usize,
    pub wall_time: Duration,
}

impl Report {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} cases, {} failures, {} generation failures, {:.2}s",
            self.cases_run,
            self.failures.len(),
            self.exhausted,
            self.wall_time.as_secs_f64()
        )
    }

    /// One JSON record per failure, one per line.
    pub fn json_lines(&self) -> String {
        self.failures
            .iter()
            .map(|f| format!("{}\n", f.to_json()))
            .collect()
    }
}

/// Which properties to run on which cases.
#[derive(Clone)]
pub struct Harness {
    pub config: GenConfig,
    pub properties: Vec<Property>,
    pub mutation: Option<Mutation>,
    /// Only cases passing the filter count towards `n_cases`.
    pub filter: Option<fn(&Case) -> bool>,
    pub shrink: bool,
}

impl Harness {
    pub fn new(config: GenConfig) -> Self {
        Harness {
            config,
            properties: Property::ALL.to_vec(),
            mutation: None,
            filter: None,
            shrink: true,
        }
    }

    pub fn properties(mut self, props: &[Property]) -> Self {
        self.properties = props.to_vec();
        self
    }

    pub fn mutation(mut self, m: Mutation) -> Self {
        self.mutation = Some(m);
        self
    }

    pub fn filter(mut self, f: fn(&Case) -> bool) -> Self {
        self.filter = Some(f);
        self
    }

    /// The first `n` accepted cases, by generation index.
    pub fn cases(&self, n: usize) -> (Vec<(u64, Case)>, usize) {
        let mut out = Vec::with_capacity(n);
        let mut exhausted = 0;
        let mut next = 0u64;
        while out.len() < n {
            let batch = (n - out.len()).max(16) as u64 * 2;
            let got: Vec<Option<(u64, Case)>> = (next..next + batch)
                .into_par_iter()
                .map(|i| gen_case_at(&self.config, i).ok().map(|c| (i, c)))
                .collect();
            next += batch;
            for item in got {
                match item {
                    None => exhausted += 1,
                    Some((i, c)) if self.filter.is_none_or(|f| f(&c)) => out.push((i, c)),
                    Some(_) => {}
                }
                if out.len() == n {
                    break;
                }
            }
            if exhausted as u64 == next {
                break;
            }
        }
        (out, exhausted)
    }

    pub fn run(&self, n_cases: usize) -> Report {
        let start = Instant::now();
        let (cases, exhausted) = self.cases(n_cases);
        let mut failures: Vec<FailureRecord> = cases
            .par_iter()
            .flat_map_iter(|(i, case)| self.run_case(*i, case))
            .collect();
        failures.sort_by_key(|f| (f.index, f.property));
        Report {
            cases_run: cases.len(),
            failures,
            exhausted,
            wall_time: start.elapsed(),
        }
    }

    fn run_case(&self, index: u64, case: &Case) -> Vec<FailureRecord> {
        let mut out = Vec::new();
        for &prop in &self.properties {
            let (detail, counterexample) = match check_property(prop, case, self.mutation) {
                Ok(Outcome::Fail(f)) => (f.detail, f.counterexample),
                Err(e) => (format!("error: {e}"), None),
                Ok(_) => continue,
            };
            let shrunk = if self.shrink {
                shrink(case, |c| {
                    !matches!(
                        check_property(prop, c, self.mutation),
                        Ok(Outcome::Pass | Outcome::Vacuous)
                    )
                })
            } else {
                case.clone()
            };
            out.push(FailureRecord {
                index,
                triple: case.to_string(),
                property: prop,
                detail,
                counterexample,
                shrunk: shrunk.to_string(),
            });
        }
        out
    }
}

/// Every property on `n_cases` cases.
pub fn differential_run(cfg: &GenConfig, n_cases: usize) -> Report {
    Harness::new(cfg.clone()).run(n_cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cases() {
        let r = differential_run(&GenConfig::default(), 0);
        assert_eq!(r.cases_run, 0);
        assert!(r.failures.is_empty() && r.is_success());
    }

    #[test]
    fn deterministic_per_seed() {
        let h = Harness::new(GenConfig::default()).properties(&Property::AGREEMENT);
        let (a, _) = h.cases(30);
        let (b, _) = h.cases(30);
        assert_eq!(a, b);
        assert_eq!(a.len(), 30);
    }
}
