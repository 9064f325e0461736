use std::collections::HashMap;
use std::sync::Arc;

use super::body::{body_descriptors, BodyDescriptor, Neighbour};
use super::object::{Colour, GeometricObject};
use super::orbit::{eq_watch, orbit_equal};
use crate::error::{GwlError, Result};
use crate::graph::GroupSpec;
use crate::linalg::Vector;
use crate::numeric::{Num, NumericMode};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct PreKey {
    depth: usize,
    colour: Colour,
    child_colours: Vec<Colour>,
    leaf_vectors: usize,
}

impl PreKey {
    fn of(o: &GeometricObject) -> PreKey {
        let (child_colours, leaf_vectors) = match o {
            GeometricObject::Leaf { vectors, .. } => (Vec::new(), vectors.len()),
            GeometricObject::Node { children, .. } => {
                let mut c: Vec<Colour> = children.iter().map(|c| c.colour).collect();
                c.sort_unstable();
                (c, 0)
            }
        };
        PreKey {
            depth: o.depth(),
            colour: o.own_colour(),
            child_colours,
            leaf_vectors,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct BodyKey {
    centre: Colour,
    k: usize,
    colour_rows: Vec<Vec<Colour>>,
}

/// Orbit-injective colouring.
///
/// Holds one representative per orbit seen so far and issues colours densely
/// in insertion order. Scalar tuples, plain refinement keys and k-body
/// descriptor multisets share the same colour counter. A registry is owned by
/// one refinement run and shared by both graphs of the compared pair.
#[derive(Debug)]
pub struct OrbitRegistry {
    group: GroupSpec,
    mode: Option<NumericMode>,
    next: u32,
    scalars: HashMap<Vec<String>, Colour>,
    keys: HashMap<Vec<u32>, Colour>,
    objects: Vec<(Arc<GeometricObject>, Vec<Num>, Colour)>,
    object_index: HashMap<PreKey, Vec<usize>>,
    bodies: Vec<(Vec<BodyDescriptor>, Colour)>,
    body_index: HashMap<BodyKey, Vec<usize>>,
}

impl OrbitRegistry {
    pub fn new(group: GroupSpec) -> OrbitRegistry {
        OrbitRegistry {
            group,
            mode: None,
            next: 0,
            scalars: HashMap::new(),
            keys: HashMap::new(),
            objects: Vec::new(),
            object_index: HashMap::new(),
            bodies: Vec::new(),
            body_index: HashMap::new(),
        }
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    /// Number of colours issued so far.
    pub fn len(&self) -> usize {
        self.next as usize
    }

    pub fn is_empty(&self) -> bool {
        self.next == 0
    }

    fn fresh(&mut self) -> Colour {
        let c = Colour(self.next);
        self.next += 1;
        c
    }

    fn check_mode(&mut self, mode: NumericMode) -> Result<()> {
        match self.mode {
            None => {
                self.mode = Some(mode);
                Ok(())
            }
            Some(m) if m == mode => Ok(()),
            Some(m) => Err(GwlError::ModeMismatch(m, mode)),
        }
    }

    /// Colour of a discrete attribute tuple.
    pub fn intern_scalars(&mut self, tuple: &[String]) -> Colour {
        if let Some(&c) = self.scalars.get(tuple) {
            return c;
        }
        let c = self.fresh();
        self.scalars.insert(tuple.to_vec(), c);
        c
    }

    /// Colour of an arbitrary integer key (used by plain colour refinement).
    pub fn intern_key(&mut self, key: Vec<u32>) -> Colour {
        if let Some(&c) = self.keys.get(&key) {
            return c;
        }
        let c = self.fresh();
        self.keys.insert(key, c);
        c
    }

    /// The colour of the first registered representative in the same orbit
    /// as `o`, or a fresh colour with `o` registered as a new representative.
    pub fn i_hash(&mut self, o: &Arc<GeometricObject>) -> Result<Colour> {
        if let Some((d, mode)) = o.geometry_kind()? {
            if d != self.group.dim {
                return Err(GwlError::DimensionMismatch {
                    expected: self.group.dim,
                    found: d,
                });
            }
            self.check_mode(mode)?;
        }
        let key = PreKey::of(o);
        let norms = o.top_norms();
        if let Some(bucket) = self.object_index.get(&key) {
            for &idx in bucket {
                let (rep, rep_norms, colour) = &self.objects[idx];
                if rep_norms.len() != norms.len()
                    || rep_norms.iter().zip(&norms).any(|(a, b)| !eq_watch(a, b))
                {
                    continue;
                }
                if orbit_equal(o, rep, self.group)? {
                    return Ok(*colour);
                }
            }
        }
        let colour = self.fresh();
        self.object_index.entry(key).or_default().push(self.objects.len());
        self.objects.push((o.clone(), norms, colour));
        Ok(colour)
    }

    /// k-body colour of a centre and its neighbourhood: the multiset of
    /// descriptors over all ordered `(k-1)`-tuples of neighbours, interned.
    /// With no neighbours the key is the centre colour alone.
    pub fn i_hash_k(
        &mut self,
        centre_colour: Colour,
        centre_vectors: &[Vector],
        nbrs: &[Neighbour<'_>],
        k: usize,
    ) -> Result<Colour> {
        if k < 2 {
            return Err(GwlError::InvalidBodyOrder(k));
        }
        for v in centre_vectors.iter().chain(nbrs.iter().flat_map(|n| n.vectors.iter().chain(std::iter::once(n.rel)))) {
            if v.dim() != self.group.dim {
                return Err(GwlError::DimensionMismatch {
                    expected: self.group.dim,
                    found: v.dim(),
                });
            }
            self.check_mode(v.mode())?;
        }
        let descriptors = body_descriptors(centre_colour, centre_vectors, nbrs, k, self.group);
        let key = BodyKey {
            centre: centre_colour,
            k,
            colour_rows: descriptors.iter().map(|d| d.colours.clone()).collect(),
        };
        if let Some(bucket) = self.body_index.get(&key) {
            for &idx in bucket {
                let (rep, colour) = &self.bodies[idx];
                if same_descriptors(rep, &descriptors) {
                    return Ok(*colour);
                }
            }
        }
        let colour = self.fresh();
        self.body_index.entry(key).or_default().push(self.bodies.len());
        self.bodies.push((descriptors, colour));
        Ok(colour)
    }
}

fn same_descriptors(a: &[BodyDescriptor], b: &[BodyDescriptor]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.colours == y.colours
                && x.sign == y.sign
                && x.gram.len() == y.gram.len()
                && x.gram.iter().zip(&y.gram).all(|(p, q)| eq_watch(p, q))
        })
}

#[cfg(test)]
mod tests {
    use super::super::object::Child;
    use super::*;
    use crate::linalg::Matrix;

    fn star(rels: &[[i64; 2]]) -> Arc<GeometricObject> {
        let leaf = GeometricObject::leaf(Colour(0), vec![]);
        let children = rels
            .iter()
            .map(|r| Child {
                colour: Colour(0),
                object: leaf.clone(),
                rel: Vector::from_ints(r),
            })
            .collect();
        GeometricObject::node(Colour(0), leaf, children).unwrap()
    }

    #[test]
    fn issuing_order_replays() {
        let mut reg = OrbitRegistry::new(GroupSpec::orthogonal(2));
        let a = star(&[[1, 0]]);
        let b = star(&[[2, 0]]);
        let ids: Vec<u32> = [&a, &b, &a].iter().map(|o| reg.i_hash(o).unwrap().0).collect();
        assert_eq!(ids, vec![0, 1, 0]);
    }

    #[test]
    fn rotation_invariant_colour() {
        let mut reg = OrbitRegistry::new(GroupSpec::special(2));
        let a = star(&[[1, 0], [0, 3]]);
        let r = a.transform(&Matrix::from_ints(&[&[0, -1], &[1, 0]]));
        assert_eq!(reg.i_hash(&a).unwrap(), reg.i_hash(&r).unwrap());
    }

    #[test]
    fn distinct_leaf_norms_distinct_colours() {
        let mut reg = OrbitRegistry::new(GroupSpec::orthogonal(2));
        let a = GeometricObject::leaf(Colour(0), vec![Vector::from_ints(&[1, 0])]);
        let b = GeometricObject::leaf(Colour(0), vec![Vector::from_ints(&[1, 1])]);
        assert_ne!(reg.i_hash(&a).unwrap(), reg.i_hash(&b).unwrap());
    }

    #[test]
    fn mode_is_fixed_per_registry() {
        let mut reg = OrbitRegistry::new(GroupSpec::orthogonal(2));
        let a = GeometricObject::leaf(Colour(0), vec![Vector::from_ints(&[1, 0])]);
        let b = GeometricObject::leaf(Colour(0), vec![Vector::from_f64s(&[1.0, 0.0])]);
        reg.i_hash(&a).unwrap();
        assert!(matches!(reg.i_hash(&b), Err(GwlError::ModeMismatch(..))));
    }

    fn k_colour(reg: &mut OrbitRegistry, rels: &[Vector], k: usize) -> Colour {
        let nbrs: Vec<Neighbour> = rels
            .iter()
            .map(|rel| Neighbour {
                colour: Colour(0),
                vectors: &[],
                rel,
            })
            .collect();
        reg.i_hash_k(Colour(0), &[], &nbrs, k).unwrap()
    }

    #[test]
    fn two_body_sees_only_distances() {
        let right = [Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1])];
        let straight = [Vector::from_ints(&[1, 0]), Vector::from_ints(&[-1, 0])];
        let mut reg = OrbitRegistry::new(GroupSpec::orthogonal(2));
        assert_eq!(k_colour(&mut reg, &right, 2), k_colour(&mut reg, &straight, 2));
        assert_ne!(k_colour(&mut reg, &right, 3), k_colour(&mut reg, &straight, 3));
    }

    #[test]
    fn body_order_below_two_rejected() {
        let mut reg = OrbitRegistry::new(GroupSpec::orthogonal(2));
        assert!(matches!(reg.i_hash_k(Colour(0), &[], &[], 1), Err(GwlError::InvalidBodyOrder(1))));
    }
}
