//! k-body invariant descriptors.
//!
//! For a centre node and its neighbours, every ordered `(k-1)`-tuple of
//! neighbours (with repetition) yields one descriptor: the colour sequence,
//! the Gram matrix of the stacked vectors `[centre vectors, then per
//! neighbour its vectors and its relative position]`, and under `SO` the
//! orientation sign of that stack. Ordered tuples need no further
//! canonicalisation.

use std::cmp::Ordering;

use crate::graph::GroupSpec;
use crate::linalg::{orientation_sign, Vector};
use crate::numeric::Num;

use super::object::Colour;

/// Neighbour record: colour, vector features and relative position.
#[derive(Clone, Copy, Debug)]
pub struct Neighbour<'a> {
    pub colour: Colour,
    pub vectors: &'a [Vector],
    pub rel: &'a Vector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BodyDescriptor {
    pub colours: Vec<Colour>,
    /// Upper triangle (with diagonal) of the Gram matrix, row by row.
    pub gram: Vec<Num>,
    pub sign: i8,
}

impl BodyDescriptor {
    pub(crate) fn total_cmp(&self, other: &BodyDescriptor) -> Ordering {
        self.colours
            .cmp(&other.colours)
            .then_with(|| self.gram.len().cmp(&other.gram.len()))
            .then_with(|| {
                for (a, b) in self.gram.iter().zip(&other.gram) {
                    let o = a.total_cmp(b);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
            .then_with(|| self.sign.cmp(&other.sign))
    }
}

/// Sorted descriptors of all ordered `(k-1)`-tuples of `nbrs`.
pub fn body_descriptors(
    centre_colour: Colour,
    centre_vectors: &[Vector],
    nbrs: &[Neighbour<'_>],
    k: usize,
    group: GroupSpec,
) -> Vec<BodyDescriptor> {
    let arity = k.saturating_sub(1);
    if nbrs.is_empty() || arity == 0 {
        return Vec::new();
    }
    let total = nbrs.len().pow(arity as u32);
    let mut out = Vec::with_capacity(total);
    let mut tuple = vec![0usize; arity];
    for _ in 0..total {
        let mut colours = Vec::with_capacity(k);
        colours.push(centre_colour);
        let mut stack: Vec<Vector> = centre_vectors.to_vec();
        for &t in &tuple {
            let nb = &nbrs[t];
            colours.push(nb.colour);
            stack.extend(nb.vectors.iter().cloned());
            stack.push(nb.rel.clone());
        }
        let mut gram = Vec::with_capacity(stack.len() * (stack.len() + 1) / 2);
        for i in 0..stack.len() {
            for j in i..stack.len() {
                gram.push(stack[i].dot(&stack[j]));
            }
        }
        let sign = if group.is_rotation_only() {
            orientation_sign(&stack, group.dim)
        } else {
            0
        };
        out.push(BodyDescriptor { colours, gram, sign });
        // Odometer increment over the tuple.
        for slot in tuple.iter_mut().rev() {
            *slot += 1;
            if *slot < nbrs.len() {
                break;
            }
            *slot = 0;
        }
    }
    out.sort_by(BodyDescriptor::total_cmp);
    out
}
