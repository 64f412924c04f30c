//! Batch classification over many parameter points.
//!
//! The classifier is embarrassingly parallel across points, so the batch
//! entry point distributes work with rayon when the `parallel` feature
//! (enabled by default) is active and falls back to the sequential path
//! otherwise.  Both paths preserve input order and produce identical
//! results; the bench suite compares their throughput.

use crate::classify::{classify, Classification};
use crate::families::TLeibParams;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Classifies every point of the batch, preserving input order.
#[cfg(feature = "parallel")]
pub fn classify_batch(points: &[TLeibParams], tol: f64) -> Vec<Classification> {
    points.par_iter().map(|p| classify(p, tol)).collect()
}

/// Classifies every point of the batch, preserving input order.
#[cfg(not(feature = "parallel"))]
pub fn classify_batch(points: &[TLeibParams], tol: f64) -> Vec<Classification> {
    classify_batch_seq(points, tol)
}

/// Sequential reference implementation of [`classify_batch`].
pub fn classify_batch_seq(points: &[TLeibParams], tol: f64) -> Vec<Classification> {
    points.iter().map(|p| classify(p, tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_tleib, rng_from_seed};
    use crate::scalar::ZeroTest;

    #[test]
    fn parallel_and_sequential_paths_agree() {
        let mut rng = rng_from_seed(72026);
        let points: Vec<TLeibParams> = (0..200)
            .map(|i| random_tleib(if i % 2 == 0 { 5 } else { 6 }, &mut rng))
            .collect();
        let par = classify_batch(&points, ZeroTest::DEFAULT_TOL);
        let seq = classify_batch_seq(&points, ZeroTest::DEFAULT_TOL);
        assert_eq!(par.len(), seq.len());
        for (a, b) in par.iter().zip(&seq) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.degenerate, b.degenerate);
            assert_eq!(a.invariants, b.invariants);
            assert_eq!(
                a.canonical.as_ref().map(|c| c.coords()),
                b.canonical.as_ref().map(|c| c.coords())
            );
        }
    }
}
