//! Seeded inputs shared by the kernel benchmarks.

use rand::seq::index::sample;
use symdiff::{rng, LineSet, Plane, PointSet};

/// `count` random sets of `size` lines, reproducible from `name`.
pub fn random_line_sets(plane: &Plane, size: usize, count: usize, name: &str) -> Vec<LineSet> {
    let mut stream = rng::stream(0, name);
    (0..count).map(|_| LineSet::from_indices(plane.n(), sample(&mut stream, plane.n(), size))).collect()
}

/// `count` random sets of `size` points, reproducible from `name`.
pub fn random_point_sets(plane: &Plane, size: usize, count: usize, name: &str) -> Vec<PointSet> {
    random_line_sets(plane, size, count, name).iter().map(|s| s.retag()).collect()
}
