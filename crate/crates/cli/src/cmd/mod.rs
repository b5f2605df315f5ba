pub mod blayer;
pub mod euler;
pub mod ode;
pub mod pde;
pub mod pi;
pub mod roots;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::error::CliError;

/// Evaluates independent sweep points in parallel, dispatching them in a
/// seed-determined order, and returns the results in input order.
pub fn sweep<T, R, F>(points: &[T], seed: u64, f: F) -> Result<Vec<R>, CliError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, CliError> + Sync,
{
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut StdRng::seed_from_u64(seed));
    let mut done: Vec<(usize, Result<R, CliError>)> = order.into_par_iter().map(|i| (i, f(&points[i]))).collect();
    done.sort_by_key(|(i, _)| *i);
    done.into_iter().map(|(_, r)| r).collect()
}
