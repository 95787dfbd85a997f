use serde::Serialize;

use super::predicates::is_outward_positive;
use super::LabeledPolyhedron;
use crate::rational::rvec;

/// Normal fan with ray multiplicities: ray `i` is the primitive normal of facet `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StackyFan {
    /// `(primitive generator, multiplicity)`.
    pub rays: Vec<(Vec<i64>, u64)>,
    /// Ray-index sets of the cones, one per nonempty face (the zero cone included).
    pub cones: Vec<Vec<usize>>,
}

impl StackyFan {
    pub fn maximal_cones(&self) -> Vec<&[usize]> {
        self.cones
            .iter()
            .filter(|c| !self.cones.iter().any(|d| d.len() > c.len() && c.iter().all(|i| d.contains(i))))
            .map(Vec::as_slice)
            .collect()
    }
}

pub fn stacky_normal_fan(p: &LabeledPolyhedron) -> StackyFan {
    let rays: Vec<(Vec<i64>, u64)> = p.facets.iter().map(|f| (f.primitive(), f.label)).collect();
    if let Some(rd) = &p.root_datum {
        if is_outward_positive(p) {
            assert!(rays.iter().all(|(r, _)| rd.is_dominant_coweight(&rvec(r))));
        }
    }
    let cones = p.faces().into_iter().map(|f| f.active).collect();
    StackyFan { rays, cones }
}
