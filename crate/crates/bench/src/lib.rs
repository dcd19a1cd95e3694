//! Fixtures shared by the benchmarks.

use nuradial_core::{InversePolyPotential, Preset};

/// Magnetic-interaction potential used across benchmarks.
pub fn magnetic() -> InversePolyPotential {
    Preset::Magnetic {
        alpha: -1.0,
        a: 1.0,
        b: 0.1,
        c: 0.01,
    }
    .build()
    .expect("valid preset")
}
