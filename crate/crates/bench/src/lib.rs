//! Fixtures shared by the benchmarks.

use ordplanes::generators::{ExtremalKind, ExtremalSpec};
use ordplanes::PointSet;

/// A prism or anti-prism with the generic apex `(1, 2)`.
pub fn extremal(kind: ExtremalKind, m: usize) -> PointSet {
    ExtremalSpec::new(kind, m)
        .with_apex_ints(1, 2)
        .build()
        .expect("m >= 3")
}
