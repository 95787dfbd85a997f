use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::predicates::outward_positivity;
use super::{Ambient, Facet, LabeledPolyhedron, Violation};
use crate::rational::{rat, Rat};
use crate::{Error, Result};

/// The `W`-invariant set `WP` whose intersection with the chamber is `P`.
///
/// Facets are `(w beta_i, xi_i, m_i)` over the Weyl orbit of each normal. A normal
/// reached from several facets keeps the smallest level, since the other copies are
/// implied by it.
pub fn w_invariant_extension(p: &LabeledPolyhedron) -> Result<LabeledPolyhedron> {
    let rd = p.root_datum()?;
    if p.ambient != Ambient::Chamber {
        return Err(Error::InvalidPolyhedron("extension needs a chamber-relative set".into()));
    }
    if let Some(Violation::NegativeNormal { facet, root }) = outward_positivity(p).certificate {
        return Err(Error::NotOutwardPositive { facet, root });
    }
    let mut best: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
    let mut order = Vec::new();
    for f in &p.facets {
        let b: Vec<Rat> = f.beta.iter().map(|&v| rat(v)).collect();
        for wb in rd.weyl_orbit_coweight(&b) {
            let key: Vec<i64> = wb.iter().map(|v| v.to_integer().to_i64().unwrap()).collect();
            match best.get_mut(&key) {
                Some(x) if *x <= f.xi => {}
                Some(x) => *x = f.xi.clone(),
                None => {
                    best.insert(key.clone(), f.xi.clone());
                    order.push(key);
                }
            }
        }
    }
    let facets = order
        .into_iter()
        .map(|b| {
            let xi = best[&b].clone();
            Facet::new(b, xi)
        })
        .collect();
    LabeledPolyhedron::new(p.root_datum.clone(), Ambient::Full, p.dim, facets)
}
