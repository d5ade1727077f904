use serde::{Deserialize, Serialize};

use crate::par;
use crate::spectral::{sobolev_norm, Field};

/// Mass and energy `E(u) = ½∫|∇u|² + ¼∫|u|⁴`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConservedSet {
    pub mass: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub energy: f64,
}

/// Conserved quantities of the defocusing flow.
pub fn conserved_set(u: &Field) -> ConservedSet {
    conserved_set_with(u, 1.0)
}

/// Same, with the quartic term scaled by `coupling` (0 for the free flow).
pub fn conserved_set_with(u: &Field, coupling: f64) -> ConservedSet {
    let mass = u.l2_norm().powi(2);
    let kinetic = 0.5 * sobolev_norm(u, 1.0, true).powi(2);
    let potential = coupling * 0.25 * quartic_integral(u);
    ConservedSet { mass, kinetic, potential, energy: kinetic + potential }
}

/// `∫|u|⁴` by grid quadrature.
pub fn quartic_integral(u: &Field) -> f64 {
    let p = u.to_physical();
    let d = p.data();
    p.grid().cell_volume() * par::sum_by(d.len(), |i| d[i].norm_sqr().powi(2))
}

/// Fraction of mass inside `|x| ≤ L/4`.
pub fn box_containment(u: &Field) -> f64 {
    let p = u.to_physical();
    let grid = *p.grid();
    let d = p.data();
    let r = grid.length() / 4.0;
    let total = par::sum_by(d.len(), |i| d[i].norm_sqr());
    if total == 0.0 {
        return 1.0;
    }
    let inner = par::sum_by(d.len(), |i| {
        let x = grid.position(i);
        if x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= r * r {
            d[i].norm_sqr()
        } else {
            0.0
        }
    });
    inner / total
}
