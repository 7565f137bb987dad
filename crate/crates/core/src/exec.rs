//! Serial and data-parallel execution of independent indexed jobs.
//!
//! With the `parallel` feature off, [`Schedule::Parallel`] runs serially.

/// How a batch of independent jobs is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    Serial,
    #[default]
    Parallel,
}

impl Schedule {
    /// Whether [`Schedule::Parallel`] actually uses worker threads in this build.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// `(0..count).map(job)` collected in index order, whatever the schedule.
pub fn map_indexed<T, F>(count: u64, schedule: Schedule, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match schedule {
        Schedule::Serial => (0..count).map(job).collect(),
        Schedule::Parallel => parallel_map(count, job),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(count: u64, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(job).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(count: u64, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..count).map(job).collect()
}
