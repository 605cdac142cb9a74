//! Parallel driver for the dimension-4 base case.
//!
//! Configurations are independent work items, so the two search phases
//! spread over worker threads through a shared work queue. Every
//! per-configuration outcome is a pure function of the configuration and
//! the budget - workers share no search state - and the settle phase merges
//! results in configuration order, so the final ledger is byte-identical
//! for any job count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use cubepath_core::config::Configuration;
use cubepath_core::paths::CertificateData;
use cubepath_core::search::{
    find_covering_path, search_attempts, settle_found, CoverageLedger, SearchBudget,
    SearchError, SearchOutcome,
};
use cubepath_core::symmetry::enumerate_normalized_4configs_chunk;

#[derive(Debug, Clone)]
pub struct BaseCaseOptions {
    pub seed: u64,
    pub jobs: usize,
    pub budget_nodes: u64,
    pub budget_secs: u64,
}

impl Default for BaseCaseOptions {
    fn default() -> Self {
        BaseCaseOptions { seed: 0, jobs: 1, budget_nodes: 400_000, budget_secs: 0 }
    }
}

impl BaseCaseOptions {
    fn budget(&self) -> SearchBudget {
        let mut b = SearchBudget::seeded(self.seed, self.budget_nodes);
        if self.budget_secs > 0 {
            b.per_config_time_limit = Duration::from_secs(self.budget_secs);
        }
        b
    }
}

// stop closure enforcing the per-configuration wall-clock limit
fn deadline_stop(budget: &SearchBudget) -> impl FnMut() -> bool {
    let limit = budget.per_config_time_limit;
    let start = Instant::now();
    move || !limit.is_zero() && start.elapsed() >= limit
}

/// All normalised 4-configurations of `Q(4)`, enumerated across `jobs`
/// workers.
pub fn enumerate_n4_parallel(jobs: usize) -> Result<Vec<Configuration>, SearchError> {
    let jobs = jobs.max(1);
    if jobs == 1 {
        return Ok(cubepath_core::symmetry::enumerate_normalized_4configs(4)?);
    }
    let chunks: Vec<Vec<Configuration>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|part| scope.spawn(move || enumerate_normalized_4configs_chunk(4, part, jobs)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("enumeration worker panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut set = std::collections::BTreeSet::new();
    for chunk in chunks {
        set.extend(chunk);
    }
    Ok(set.into_iter().collect())
}

// runs `work` over the queue on `jobs` threads, collecting the per-item
// results
fn parallel_map<T, R, F>(items: &[T], jobs: usize, work: F) -> Result<Vec<R>, SearchError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, SearchError> + Sync,
{
    let jobs = jobs.max(1).min(items.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<R>>> =
        Mutex::new((0..items.len()).map(|_| None).collect());
    let run: Result<(), SearchError> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|_| {
                scope.spawn(|| -> Result<(), SearchError> {
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= items.len() {
                            return Ok(());
                        }
                        let r = work(&items[i])?;
                        if let Some(slot) = results.lock().expect("poisoned").get_mut(i) {
                            *slot = Some(r);
                        }
                    }
                })
            })
            .collect();
        for h in handles {
            h.join().expect("search worker panicked")?;
        }
        Ok(())
    });
    run?;
    Ok(results
        .into_inner()
        .expect("poisoned")
        .into_iter()
        .map(|r| r.expect("all items processed"))
        .collect())
}

/// The three-phase base-case pipeline, parallelised over configurations:
/// budgeted attempts, deterministic settling, then exhaustive searches for
/// whatever remains unresolved.
pub fn run_base_case_parallel(
    opts: &BaseCaseOptions,
    progress: &mut (dyn FnMut(usize, usize) + Send),
) -> Result<CoverageLedger, SearchError> {
    let all = enumerate_n4_parallel(opts.jobs)?;
    let total = all.len();
    let budget = opts.budget();

    let done = AtomicUsize::new(0);
    let founds = AtomicUsize::new(0);
    let progress_cell = Mutex::new(progress);
    let outcomes = parallel_map(&all, opts.jobs, |c| {
        let mut stop = deadline_stop(&budget);
        let out = search_attempts(c, &budget, &mut stop)?;
        if matches!(out, SearchOutcome::Covered(_)) {
            founds.fetch_add(1, Ordering::Relaxed);
        }
        let d = done.fetch_add(1, Ordering::Relaxed) + 1;
        if d % 64 == 0 || d == total {
            (progress_cell.lock().expect("poisoned"))(
                founds.load(Ordering::Relaxed),
                total - d,
            );
        }
        Ok(out)
    })?;

    let mut ledger = CoverageLedger::default();
    let found: Vec<(Configuration, CertificateData)> = all
        .iter()
        .zip(&outcomes)
        .filter_map(|(c, o)| match o {
            SearchOutcome::Covered(cert) => Some((c.clone(), cert.clone())),
            _ => None,
        })
        .collect();
    settle_found(&mut ledger, &found)?;

    let remaining: Vec<Configuration> =
        all.iter().filter(|c| !ledger.covered.contains_key(*c)).cloned().collect();
    // phase 1 already spent the seeded attempts; go straight to exhaustion
    let exhaustive = SearchBudget { restart_seeds: Vec::new(), ..budget.clone() };
    let verdicts = parallel_map(&remaining, opts.jobs, |c| {
        let mut stop = deadline_stop(&exhaustive);
        find_covering_path(c, &exhaustive, &mut stop)
    })?;
    let mut late = Vec::new();
    for (c, v) in remaining.iter().zip(&verdicts) {
        match v {
            SearchOutcome::Covered(cert) => late.push((c.clone(), cert.clone())),
            SearchOutcome::ProvenUncovered { .. } => {
                ledger.uncovered.insert(c.clone());
            }
            SearchOutcome::Inconclusive { .. } => {
                ledger.inconclusive.insert(c.clone());
            }
        }
    }
    settle_found(&mut ledger, &late)?;
    let covered = &ledger.covered;
    ledger.uncovered.retain(|c| !covered.contains_key(c));
    ledger.inconclusive.retain(|c| !covered.contains_key(c));
    Ok(ledger)
}
