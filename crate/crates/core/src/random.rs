//! Seeded samplers for point clouds, graphs and isometries.
//!
//! Everything is driven by a `ChaCha8Rng`, so results are identical across
//! platforms and runs for a given seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::{build_radial_graph, GeometricGraph, GroupSpec, IsometryWitness, PointRecord};
use crate::linalg::{invert, Matrix, Vector};
use crate::numeric::{Num, NumericMode};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p / q` with `q ∈ 1..=max_den` and `|p / q| <= bound`.
pub fn small_rational<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> Num {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(-bound * q..=bound * q);
    Num::ratio(p, q)
}

/// A coordinate: a small rational in exact mode, uniform in `[-1, 1]` in
/// float mode.
pub fn coordinate<R: Rng>(rng: &mut R, mode: NumericMode) -> Num {
    match mode {
        NumericMode::Exact => small_rational(rng, 2, 4),
        NumericMode::Float => Num::float(rng.gen_range(-1.0..=1.0)),
    }
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize, mode: NumericMode) -> Vector {
    Vector::new((0..dim).map(|_| coordinate(rng, mode)).collect())
}

pub fn random_points<R: Rng>(rng: &mut R, n: usize, dim: usize, mode: NumericMode) -> Vec<Vector> {
    (0..n).map(|_| random_vector(rng, dim, mode)).collect()
}

/// A random element of `SO(d)`.
///
/// Exact mode uses the Cayley transform `(I - A)(I + A)^-1` of a skew matrix
/// with small rational entries, which is rational and orthogonal. Float mode
/// uses a uniform angle in 2D and a float Cayley transform in 3D.
pub fn random_rotation<R: Rng>(rng: &mut R, dim: usize, mode: NumericMode) -> Matrix {
    if dim == 1 {
        return Matrix::identity(1, mode);
    }
    if dim == 2 && mode == NumericMode::Float {
        return Matrix::rotation_2d(rng.gen_range(0.0..std::f64::consts::TAU));
    }
    let mut a = vec![vec![Num::zero(mode); dim]; dim];
    for i in 0..dim {
        for j in i + 1..dim {
            let v = match mode {
                NumericMode::Exact => small_rational(rng, 3, 5),
                NumericMode::Float => Num::float(rng.gen_range(-3.0..=3.0)),
            };
            a[j][i] = -v.clone();
            a[i][j] = v;
        }
    }
    let id = Matrix::identity(dim, mode);
    let minus: Vec<Vec<Num>> = (0..dim)
        .map(|i| (0..dim).map(|j| &id.0[i][j] - &a[i][j]).collect())
        .collect();
    let plus: Vec<Vec<Num>> = (0..dim)
        .map(|i| (0..dim).map(|j| &id.0[i][j] + &a[i][j]).collect())
        .collect();
    // I + A is invertible for skew A
    let inv = invert(&plus).expect("I + A is invertible for skew-symmetric A");
    Matrix(minus).mul(&Matrix(inv))
}

/// A random element of `O(d)`: a rotation, composed with a reflection half
/// of the time.
pub fn random_orthogonal<R: Rng>(rng: &mut R, dim: usize, mode: NumericMode) -> Matrix {
    let q = random_rotation(rng, dim, mode);
    if rng.gen_bool(0.5) {
        let mut f = Matrix::identity(dim, mode);
        f.0[0][0] = -Num::one(mode);
        f.mul(&q)
    } else {
        q
    }
}

/// A random isometry of `n` nodes whose matrix lies in `group`.
pub fn random_witness<R: Rng>(rng: &mut R, n: usize, group: GroupSpec, mode: NumericMode) -> IsometryWitness {
    let mut permutation: Vec<usize> = (0..n).collect();
    permutation.shuffle(rng);
    let rotation = if group.is_rotation_only() {
        random_rotation(rng, group.dim, mode)
    } else {
        random_orthogonal(rng, group.dim, mode)
    };
    IsometryWitness {
        permutation,
        rotation,
        translation: random_vector(rng, group.dim, mode),
    }
}

/// Offsets used to grow connected clouds: components are multiples of
/// `1/den` in `[-1, 1]`, nonzero, of norm at most 1.
fn step<R: Rng>(rng: &mut R, dim: usize, mode: NumericMode, den: i64) -> Vector {
    loop {
        let v = match mode {
            NumericMode::Exact => Vector::new((0..dim).map(|_| Num::ratio(rng.gen_range(-den..=den), den)).collect()),
            NumericMode::Float => Vector::from_f64s(&(0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect::<Vec<_>>()),
        };
        let n2 = v.norm2().to_f64();
        if n2 > 1e-4 && n2 <= 1.0 {
            return v;
        }
    }
}

/// A connected radial graph with cutoff 1: every new point is placed within
/// unit distance of an earlier one, and never on top of an existing point.
/// In exact mode the coordinates live on the lattice `(1/den)Z^d`.
pub fn connected_radial_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    dim: usize,
    mode: NumericMode,
    den: i64,
) -> Result<GeometricGraph> {
    let mut pts: Vec<Vector> = vec![Vector::zeros(dim, mode)];
    while pts.len() < n {
        let parent = pts[rng.gen_range(0..pts.len())].clone();
        let p = parent.add(&step(rng, dim, mode, den));
        if pts.iter().all(|q| !q.sub(&p).is_zero()) {
            pts.push(p);
        }
    }
    build_radial_graph(pts.into_iter().map(PointRecord::at).collect(), &Num::one(mode))
}

/// Copy of `g` with one node moved within unit distance of another node,
/// edges rebuilt by the unit cutoff. Often but not always non-isomorphic to
/// `g`, and connected whenever the result of removing the node was.
pub fn perturbed_copy<R: Rng>(rng: &mut R, g: &GeometricGraph, den: i64) -> Result<GeometricGraph> {
    let n = g.len();
    let mode = g.mode();
    loop {
        let moved = rng.gen_range(0..n);
        let anchor = loop {
            let a = rng.gen_range(0..n);
            if a != moved || n == 1 {
                break a;
            }
        };
        let p = g.position(anchor).add(&step(rng, g.dim(), mode, den));
        let mut pts: Vec<Vector> = g.positions().to_vec();
        if pts.iter().enumerate().any(|(i, q)| i != moved && q.sub(&p).is_zero()) {
            continue;
        }
        pts[moved] = p;
        let h = build_radial_graph(pts.into_iter().map(PointRecord::at).collect(), &Num::one(mode))?;
        if h.is_connected() || n == 1 {
            return Ok(h);
        }
    }
}

/// Complete graph on `n` random points.
pub fn fully_connected<R: Rng>(rng: &mut R, n: usize, dim: usize, mode: NumericMode) -> Result<GeometricGraph> {
    let pts = random_points(rng, n, dim, mode);
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    GeometricGraph::from_positions(dim, pts, &edges)
}

/// A connected induced subgraph of the integer grid `Z^dim` with unit
/// edges: a random lattice walk of `n` distinct sites.
pub fn unit_grid_graph<R: Rng>(rng: &mut R, n: usize, dim: usize) -> Result<GeometricGraph> {
    let mut sites: Vec<Vec<i64>> = vec![vec![0; dim]];
    while sites.len() < n {
        let mut s = sites[rng.gen_range(0..sites.len())].clone();
        let axis = rng.gen_range(0..dim);
        s[axis] += if rng.gen_bool(0.5) { 1 } else { -1 };
        if !sites.contains(&s) {
            sites.push(s);
        }
    }
    let pts = sites.iter().map(|s| PointRecord::at(Vector::from_ints(s))).collect();
    build_radial_graph(pts, &Num::int(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotations_are_orthogonal_and_proper() {
        let mut r = rng(7);
        for d in 1..=3 {
            for mode in [NumericMode::Exact, NumericMode::Float] {
                let q = random_rotation(&mut r, d, mode);
                assert_eq!(q.mode(), mode);
                assert_eq!(q.orthogonality_residual(), 0.0);
                assert_eq!(q.det().signum(), 1);
                let o = random_orthogonal(&mut r, d, mode);
                assert_eq!(o.orthogonality_residual(), 0.0);
            }
        }
    }

    #[test]
    fn grown_clouds_are_connected() {
        let mut r = rng(3);
        for mode in [NumericMode::Exact, NumericMode::Float] {
            let g = connected_radial_graph(&mut r, 8, 3, mode, 2).unwrap();
            assert!(g.is_connected());
            let h = perturbed_copy(&mut r, &g, 2).unwrap();
            assert!(h.is_connected());
        }
        let grid = unit_grid_graph(&mut r, 9, 2).unwrap();
        assert!(grid.is_connected());
        assert!(grid.edges().iter().all(|&(i, j)| grid.relative(i, j).norm2() == Num::int(1)));
    }

    #[test]
    fn same_seed_same_output() {
        let a = random_points(&mut rng(11), 5, 3, NumericMode::Exact);
        let b = random_points(&mut rng(11), 5, 3, NumericMode::Exact);
        assert_eq!(a, b);
    }
}
