//! Breadth-first closures over bit-packed F2 matrices, forms, and classes.
//!
//! Used for exact orders of generated matrix groups and for orbit
//! computations. Results are deterministic: the frontier is expanded in a
//! fixed order (state order, then generator order) and new states are
//! deduplicated in that order, so counts and orbit lists do not depend on
//! scheduling. With the `parallel` feature the per-frontier expansion is
//! farmed out to rayon; the sequential path is always compiled.

use std::collections::HashSet;

use crate::f2::{ClassF2, MatrixF2};
use crate::quadform::QuadraticForm;
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Outcome of a group-order closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureOutcome {
    /// Number of distinct elements reached.
    pub order: usize,
    /// False when the cap stopped the search early, making `order` a
    /// partial count.
    pub complete: bool,
}

/// Exact order of the group generated by the given F2 matrices, by
/// breadth-first closure. `cap` bounds the number of stored elements;
/// exceeding it returns an error carrying the partial count.
pub fn group_order_bfs(gens: &[MatrixF2], cap: usize) -> Result<usize> {
    match closure_with_cap(gens, cap)? {
        ClosureOutcome {
            order,
            complete: true,
        } => Ok(order),
        ClosureOutcome { order, .. } => Err(Error::ClosureCapExceeded(order)),
    }
}

/// Like `group_order_bfs` but reports the partial count instead of erroring.
pub fn closure_with_cap(gens: &[MatrixF2], cap: usize) -> Result<ClosureOutcome> {
    closure_impl(gens, cap, expand_frontier)
}

/// Sequential-only closure, kept unconditionally for comparison benches.
pub fn group_order_bfs_seq(gens: &[MatrixF2], cap: usize) -> Result<usize> {
    match closure_impl(gens, cap, expand_frontier_seq)? {
        ClosureOutcome {
            order,
            complete: true,
        } => Ok(order),
        ClosureOutcome { order, .. } => Err(Error::ClosureCapExceeded(order)),
    }
}

type Expander = fn(&[MatrixF2], &[MatrixF2], &HashSet<MatrixF2>) -> Vec<MatrixF2>;

fn closure_impl(gens: &[MatrixF2], cap: usize, expand: Expander) -> Result<ClosureOutcome> {
    if gens.is_empty() {
        return Ok(ClosureOutcome {
            order: 1,
            complete: true,
        });
    }
    let genus = gens[0].genus();
    let identity = MatrixF2::identity(genus);
    let mut seen: HashSet<MatrixF2> = HashSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    while !frontier.is_empty() {
        let produced = expand(&frontier, gens, &seen);
        frontier.clear();
        for m in produced {
            if seen.contains(&m) {
                continue;
            }
            seen.insert(m.clone());
            frontier.push(m);
            if seen.len() > cap {
                return Ok(ClosureOutcome {
                    order: seen.len(),
                    complete: false,
                });
            }
        }
    }
    Ok(ClosureOutcome {
        order: seen.len(),
        complete: true,
    })
}

#[cfg(feature = "parallel")]
fn expand_frontier(
    frontier: &[MatrixF2],
    gens: &[MatrixF2],
    seen: &HashSet<MatrixF2>,
) -> Vec<MatrixF2> {
    if frontier.len() < 256 {
        return expand_frontier_seq(frontier, gens, seen);
    }
    frontier
        .par_iter()
        .flat_map_iter(|m| gens.iter().map(move |g| m.mul(g)))
        .filter(|m| !seen.contains(m))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn expand_frontier(
    frontier: &[MatrixF2],
    gens: &[MatrixF2],
    seen: &HashSet<MatrixF2>,
) -> Vec<MatrixF2> {
    expand_frontier_seq(frontier, gens, seen)
}

fn expand_frontier_seq(
    frontier: &[MatrixF2],
    gens: &[MatrixF2],
    seen: &HashSet<MatrixF2>,
) -> Vec<MatrixF2> {
    let mut out = Vec::new();
    for m in frontier {
        for g in gens {
            let next = m.mul(g);
            if !seen.contains(&next) {
                out.push(next);
            }
        }
    }
    out
}

/// Orbit of a form under the right action of the generated group, in BFS
/// order from the starting form.
pub fn form_orbit(start: &QuadraticForm, gens: &[MatrixF2]) -> Vec<QuadraticForm> {
    let mut seen: HashSet<QuadraticForm> = HashSet::new();
    let mut order = Vec::new();
    seen.insert(*start);
    order.push(*start);
    let mut head = 0;
    while head < order.len() {
        let q = order[head];
        head += 1;
        for g in gens {
            let next = q.act_unchecked(g);
            if seen.insert(next) {
                order.push(next);
            }
        }
    }
    order
}

/// Orbit of a class under the left action of the generated group, in BFS
/// order from the starting class.
pub fn class_orbit(start: &ClassF2, gens: &[MatrixF2]) -> Vec<ClassF2> {
    let mut seen: HashSet<ClassF2> = HashSet::new();
    let mut order = Vec::new();
    seen.insert(*start);
    order.push(*start);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for g in gens {
            let next = g.apply(&v);
            if seen.insert(next) {
                order.push(next);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::z2_transvection;
    use crate::genus::Genus;

    #[test]
    fn closure_of_single_transvection() {
        let g2 = Genus::new(2).unwrap();
        let t = z2_transvection(&ClassF2::x(g2, 1)).unwrap();
        // An involution generates a group of order 2.
        assert_eq!(group_order_bfs(std::slice::from_ref(&t), 10).unwrap(), 2);
        assert_eq!(group_order_bfs_seq(&[t], 10).unwrap(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let g2 = Genus::new(2).unwrap();
        let a = z2_transvection(&ClassF2::x(g2, 1)).unwrap();
        let b = z2_transvection(&ClassF2::y(g2, 1)).unwrap();
        assert!(matches!(
            group_order_bfs(&[a, b], 3),
            Err(Error::ClosureCapExceeded(_))
        ));
    }

    #[test]
    fn orbit_of_form_under_one_transvection() {
        let g2 = Genus::new(2).unwrap();
        let q1 = QuadraticForm::q1(g2);
        let t = z2_transvection(&ClassF2::x(g2, 2)).unwrap();
        let orbit = form_orbit(&q1, &[t]);
        assert_eq!(orbit.len(), 2);
        assert_eq!(orbit[0], q1);
    }
}
