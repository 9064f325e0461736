use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GwlError, Result};
use crate::linalg::{gram, orientation_sign, Matrix, Vector};
use crate::numeric::{Num, NumericMode};

/// A colour identifier issued by an [`OrbitRegistry`](super::OrbitRegistry).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Colour(pub u32);

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One child entry of a [`GeometricObject::Node`]: the neighbour's colour,
/// its geometric object from the previous depth and the relative position
/// `x_i - x_j`.
#[derive(Clone, Debug)]
pub struct Child {
    pub colour: Colour,
    pub object: Arc<GeometricObject>,
    pub rel: Vector,
}

/// Nested geometric neighbourhood object.
///
/// A leaf holds a node colour and the node's vector features. A node at depth
/// `t` holds the centre's colour and depth `t-1` object plus a multiset of
/// children at depth `t-1`. The group acts on every vector in the tree at
/// once. Subobjects are shared through `Arc`, so objects built by repeated
/// refinement form a DAG whose size grows linearly with depth.
#[derive(Clone, Debug)]
pub enum GeometricObject {
    Leaf {
        colour: Colour,
        vectors: Vec<Vector>,
    },
    Node {
        depth: usize,
        centre_colour: Colour,
        centre: Arc<GeometricObject>,
        children: Vec<Child>,
    },
}

impl GeometricObject {
    pub fn leaf(colour: Colour, vectors: Vec<Vector>) -> Arc<GeometricObject> {
        Arc::new(GeometricObject::Leaf { colour, vectors })
    }

    /// Builds a depth `t >= 1` node. The centre and all children must have
    /// depth `t - 1`.
    pub fn node(
        centre_colour: Colour,
        centre: Arc<GeometricObject>,
        children: Vec<Child>,
    ) -> Result<Arc<GeometricObject>> {
        let depth = centre.depth() + 1;
        if let Some(bad) = children.iter().find(|c| c.object.depth() + 1 != depth) {
            return Err(GwlError::InvalidParameter(format!(
                "child depth {} under a depth {depth} node",
                bad.object.depth()
            )));
        }
        Ok(Arc::new(GeometricObject::Node {
            depth,
            centre_colour,
            centre,
            children,
        }))
    }

    pub fn depth(&self) -> usize {
        match self {
            GeometricObject::Leaf { .. } => 0,
            GeometricObject::Node { depth, .. } => *depth,
        }
    }

    /// Leaf colour, or the centre colour of a node.
    pub fn own_colour(&self) -> Colour {
        match self {
            GeometricObject::Leaf { colour, .. } => *colour,
            GeometricObject::Node { centre_colour, .. } => *centre_colour,
        }
    }

    /// Squared norms of the top-level vectors (leaf vectors, or child
    /// relative positions), sorted.
    pub fn top_norms(&self) -> Vec<Num> {
        let mut out: Vec<Num> = match self {
            GeometricObject::Leaf { vectors, .. } => vectors.iter().map(Vector::norm2).collect(),
            GeometricObject::Node { children, .. } => {
                children.iter().map(|c| c.rel.norm2()).collect()
            }
        };
        out.sort_by(Num::total_cmp);
        out
    }

    /// Visits every distinct subobject once.
    pub fn for_each_distinct<F: FnMut(&GeometricObject)>(&self, mut f: F) {
        let mut seen = std::collections::HashSet::new();
        fn walk<F: FnMut(&GeometricObject)>(
            o: &GeometricObject,
            seen: &mut std::collections::HashSet<usize>,
            f: &mut F,
        ) {
            if !seen.insert(o as *const _ as usize) {
                return;
            }
            f(o);
            if let GeometricObject::Node {
                centre, children, ..
            } = o
            {
                walk(centre, seen, f);
                for c in children {
                    walk(&c.object, seen, f);
                }
            }
        }
        walk(self, &mut seen, &mut f);
    }

    /// Dimension and numeric mode of the vectors, if there are any. Errors if
    /// they are not uniform.
    pub fn geometry_kind(&self) -> Result<Option<(usize, NumericMode)>> {
        let mut kind: Option<(usize, NumericMode)> = None;
        let mut err = None;
        self.for_each_distinct(|o| {
            let vs: Vec<&Vector> = match o {
                GeometricObject::Leaf { vectors, .. } => vectors.iter().collect(),
                GeometricObject::Node { children, .. } => children.iter().map(|c| &c.rel).collect(),
            };
            for v in vs {
                let k = (v.dim(), v.mode());
                match kind {
                    None => kind = Some(k),
                    Some((d, m)) if err.is_none() => {
                        if d != k.0 {
                            err = Some(GwlError::DimensionMismatch {
                                expected: d,
                                found: k.0,
                            });
                        } else if m != k.1 {
                            err = Some(GwlError::ModeMismatch(m, k.1));
                        }
                    }
                    _ => {}
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(kind),
        }
    }

    /// Applies `m` (column convention) to every vector, preserving sharing.
    pub fn transform(self: &Arc<Self>, m: &Matrix) -> Arc<GeometricObject> {
        let mut memo = HashMap::new();
        transform_memo(self, m, &mut memo)
    }

    /// Deterministic depth-first vector trace: a leaf contributes its
    /// vectors; a node contributes its centre's trace and then, per child in
    /// stored order, the child's trace followed by the relative position.
    pub fn trace(&self) -> VectorTrace {
        let mut out = VectorTrace::default();
        self.trace_into(&mut out);
        out
    }

    fn trace_into(&self, out: &mut VectorTrace) {
        match self {
            GeometricObject::Leaf { colour, vectors } => {
                out.colours.push(*colour);
                out.vectors.extend(vectors.iter().cloned());
            }
            GeometricObject::Node {
                centre_colour,
                centre,
                children,
                ..
            } => {
                out.colours.push(*centre_colour);
                centre.trace_into(out);
                for c in children {
                    out.colours.push(c.colour);
                    c.object.trace_into(out);
                    out.vectors.push(c.rel.clone());
                }
            }
        }
    }
}

pub(crate) fn transform_memo(
    o: &Arc<GeometricObject>,
    m: &Matrix,
    memo: &mut HashMap<usize, Arc<GeometricObject>>,
) -> Arc<GeometricObject> {
    let key = Arc::as_ptr(o) as usize;
    if let Some(done) = memo.get(&key) {
        return done.clone();
    }
    let out = match o.as_ref() {
        GeometricObject::Leaf { colour, vectors } => Arc::new(GeometricObject::Leaf {
            colour: *colour,
            vectors: vectors.iter().map(|v| m.apply(v)).collect(),
        }),
        GeometricObject::Node {
            depth,
            centre_colour,
            centre,
            children,
        } => Arc::new(GeometricObject::Node {
            depth: *depth,
            centre_colour: *centre_colour,
            centre: transform_memo(centre, m, memo),
            children: children
                .iter()
                .map(|c| Child {
                    colour: c.colour,
                    object: transform_memo(&c.object, m, memo),
                    rel: m.apply(&c.rel),
                })
                .collect(),
        }),
    };
    memo.insert(key, out.clone());
    out
}

/// Vectors (and the interleaved colour sequence) of one traversal of an
/// object. The length depends only on the object's structure.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VectorTrace {
    pub colours: Vec<Colour>,
    pub vectors: Vec<Vector>,
}

impl VectorTrace {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn gram(&self) -> Vec<Vec<Num>> {
        gram(&self.vectors)
    }

    pub fn orientation_sign(&self, dim: usize) -> i8 {
        orientation_sign(&self.vectors, dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_is_checked() {
        let l = GeometricObject::leaf(Colour(0), vec![]);
        let n1 = GeometricObject::node(Colour(0), l.clone(), vec![]).unwrap();
        let bad = GeometricObject::node(
            Colour(0),
            n1.clone(),
            vec![Child {
                colour: Colour(0),
                object: l,
                rel: Vector::from_ints(&[1, 0]),
            }],
        );
        assert!(bad.is_err());
        assert_eq!(n1.depth(), 1);
    }

    #[test]
    fn trace_length_is_structural() {
        let leaf = GeometricObject::leaf(Colour(1), vec![Vector::from_ints(&[1, 2])]);
        let child = |x: i64| Child {
            colour: Colour(1),
            object: leaf.clone(),
            rel: Vector::from_ints(&[x, 0]),
        };
        let o = GeometricObject::node(Colour(1), leaf.clone(), vec![child(1), child(5)]).unwrap();
        let t = o.trace();
        assert_eq!(t.len(), 1 + 2 * 2);
        assert_eq!(t.colours.len(), 1 + 1 + 2 * 2);
    }

    #[test]
    fn geometry_kind_detects_mixing() {
        let o = GeometricObject::leaf(
            Colour(0),
            vec![Vector::from_ints(&[1, 0]), Vector::from_f64s(&[1.0, 0.0])],
        );
        assert!(matches!(o.geometry_kind(), Err(GwlError::ModeMismatch(..))));
    }
}
