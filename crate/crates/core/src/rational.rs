//! Rational orbit structure: classification of orbits, the complete set of
//! rational preperiodic points, rational preimages, and inverse-limit lifts.
//!
//! The engine behind completeness is the comparison constant C: a
//! preperiodic point has canonical height zero, hence Weil height at most
//! C/(d-1), so the preperiodic set lives inside a finite, explicitly
//! enumerable box.  Conversely an orbit that climbs above that threshold
//! has positive canonical height and provably wanders.  Orbit walks
//! therefore terminate: below the threshold there are only finitely many
//! points (pigeonhole forces a revisit), and any excess above it multiplies
//! by at least d per step.

use crate::error::{Error, Result};
use crate::heights::{comparison_constant, enumerate_points, enumeration_size, log_height};
use crate::morphism::ProjMorphism;
use crate::projective::ProjPointQ;
use crate::roots::rational_projective_roots;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Float-safety margin added to the escape threshold C/(d-1): absorbs the
/// few-ulp error in computed heights so an escape verdict is trustworthy.
const ESCAPE_MARGIN: f64 = 1e-9;

/// How an orbit closed up or escaped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitClass {
    /// The starting point lies on a cycle of the given length.
    Periodic { period: u32 },
    /// After `tail` steps the orbit enters a cycle of length `period`.
    Preperiodic { tail: u32, period: u32 },
    /// At `escape_index` the height exceeded C/(d-1) + margin, which forces
    /// positive canonical height.
    Wandering { escape_index: u32 },
}

/// An orbit walk: the visited points (up to and including the first revisit
/// or the escape point) and the classification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub start: ProjPointQ,
    pub class: OrbitClass,
    pub orbit: Vec<ProjPointQ>,
}

impl OrbitRecord {
    pub fn is_preperiodic(&self) -> bool {
        !matches!(self.class, OrbitClass::Wandering { .. })
    }
}

/// Walk the orbit of x until it either revisits a point (periodic or
/// preperiodic) or climbs above the escape threshold (wandering).
pub fn classify_orbit(f: &ProjMorphism, x: &ProjPointQ) -> Result<OrbitRecord> {
    let cc = comparison_constant(f)?;
    let threshold = cc.value / (f.degree() as f64 - 1.0) + ESCAPE_MARGIN;
    let mut orbit: Vec<ProjPointQ> = Vec::new();
    let mut index: HashMap<ProjPointQ, u32> = HashMap::new();
    let mut current = x.clone();
    loop {
        let step = orbit.len() as u32;
        if log_height(&current) > threshold {
            orbit.push(current);
            return Ok(OrbitRecord {
                start: x.clone(),
                class: OrbitClass::Wandering { escape_index: step },
                orbit,
            });
        }
        if let Some(&first) = index.get(&current) {
            let period = step - first;
            let class = if first == 0 {
                OrbitClass::Periodic { period }
            } else {
                OrbitClass::Preperiodic { tail: first, period }
            };
            return Ok(OrbitRecord { start: x.clone(), class, orbit });
        }
        index.insert(current.clone(), step);
        orbit.push(current.clone());
        current = f.apply(&current)?;
    }
}

/// The complete set of rational preperiodic points, in coordinate order.
///
/// Every preperiodic point has height at most C/(d-1); the search
/// enumerates all points of the bounding box and classifies each orbit.
/// `budget` caps the number of raw enumeration candidates.
pub fn preperiodic_points(f: &ProjMorphism, budget: u128) -> Result<Vec<ProjPointQ>> {
    let cc = comparison_constant(f)?;
    let d = f.degree() as f64;
    // Positive rounding guard so a boundary bound like exp(log 2) = 2
    // cannot round down and silently drop boundary points.
    let bound = ((cc.value / (d - 1.0)).exp() * (1.0 + 1e-12)).floor() as u64;
    let bound = bound.max(1);
    let required = enumeration_size(f.dim(), bound);
    if required > budget {
        return Err(Error::BudgetExceeded { required, allowed: budget });
    }
    let candidates = enumerate_points(f.dim(), bound);
    let mut found: Vec<ProjPointQ> = candidates
        .par_iter()
        .map(|p| classify_orbit(f, p).map(|rec| rec.is_preperiodic().then(|| p.clone())))
        .collect::<Result<Vec<Option<ProjPointQ>>>>()?
        .into_iter()
        .flatten()
        .collect();
    found.sort();
    Ok(found)
}

/// All rational points mapping to y under a self-map of the line, ordered
/// by (denominator, numerator) of the affine value.
pub fn rational_preimages(f: &ProjMorphism, y: &ProjPointQ) -> Result<Vec<ProjPointQ>> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch(
            "rational preimages are implemented on the projective line".into(),
        ));
    }
    if y.dim() != 1 {
        return Err(Error::DimensionMismatch(
            "target point must lie on the projective line".into(),
        ));
    }
    let a = &y.coords()[0];
    let b = &y.coords()[1];
    // x maps to (a:b) exactly when b*F0(x) - a*F1(x) = 0.
    let g = f.forms()[0].scale(b).sub(&f.forms()[1].scale(a))?;
    debug_assert!(!g.is_zero(), "validated maps are nonconstant");
    let roots = rational_projective_roots(&g);
    #[cfg(debug_assertions)]
    for r in &roots {
        debug_assert_eq!(&f.apply(r).unwrap(), y);
    }
    Ok(roots)
}

/// Does y have a rational preimage under f?
pub fn image_contains(f: &ProjMorphism, y: &ProjPointQ) -> Result<bool> {
    Ok(!rational_preimages(f, y)?.is_empty())
}

/// A node of the inverse-limit tree: a point together with its rational
/// preimages one level deeper.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftNode {
    pub point: ProjPointQ,
    pub children: Vec<LiftNode>,
}

impl LiftNode {
    /// All maximal chains from the root, deepest point last.
    pub fn chains(&self) -> Vec<Vec<ProjPointQ>> {
        if self.children.is_empty() {
            return vec![vec![self.point.clone()]];
        }
        let mut out = Vec::new();
        for c in &self.children {
            for mut chain in c.chains() {
                chain.insert(0, self.point.clone());
                out.push(chain);
            }
        }
        out
    }

    /// Number of nodes at each depth, root first.
    pub fn level_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        let mut level: Vec<&LiftNode> = vec![self];
        while !level.is_empty() {
            counts.push(level.len());
            level = level.iter().flat_map(|n| n.children.iter()).collect();
        }
        counts
    }
}

/// Build the tree of successive rational preimages of y: children of the
/// root are the preimages under maps[0], their children the preimages of
/// those under maps[1], and so on.  A branch dies where no rational
/// preimage exists.
pub fn inverse_limit_tree(maps: &[ProjMorphism], y: &ProjPointQ) -> Result<LiftNode> {
    fn build(maps: &[ProjMorphism], point: &ProjPointQ) -> Result<LiftNode> {
        let children = match maps.split_first() {
            None => Vec::new(),
            Some((head, rest)) => rational_preimages(head, point)?
                .iter()
                .map(|p| build(rest, p))
                .collect::<Result<Vec<LiftNode>>>()?,
        };
        Ok(LiftNode { point: point.clone(), children })
    }
    build(maps, y)
}
