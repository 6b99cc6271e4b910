//! Small biquivers used throughout the documentation and tests.

use crate::bocs::biquiver;
use crate::dg::DiffBiquiver;

/// Three vertices, solid `a, b, c`, dashed `phi, psi, chi` with
/// `d(chi) = psi@phi` and `d(c) = psi*a + b*phi`.
pub fn running_example() -> DiffBiquiver {
    let mut q = biquiver(
        3,
        &[("a", 1, 2), ("b", 2, 3), ("c", 1, 3)],
        &[("phi", 1, 2), ("psi", 2, 3), ("chi", 1, 3)],
    );
    q.set_diff("chi", "psi*phi");
    q.set_diff("c", "psi*a + b*phi");
    q
}

/// One solid and one dashed arrow between two vertices.
pub fn two_vertex() -> DiffBiquiver {
    biquiver(2, &[("a", 1, 2)], &[("phi", 1, 2)])
}
