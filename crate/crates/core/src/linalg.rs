//! Small dense linear algebra over [`Num`] for d ≤ 3.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::numeric::{Num, NumericMode};

/// A d-vector in one numeric mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<Num>);

impl Vector {
    pub fn new(components: Vec<Num>) -> Vector {
        Vector(components)
    }

    pub fn zeros(dim: usize, mode: NumericMode) -> Vector {
        Vector(vec![Num::zero(mode); dim])
    }

    pub fn from_ints(components: &[i64]) -> Vector {
        Vector(components.iter().map(|&c| Num::int(c)).collect())
    }

    pub fn from_f64s(components: &[f64]) -> Vector {
        Vector(components.iter().map(|&c| Num::float(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Mode of the components; float if any component is float.
    pub fn mode(&self) -> NumericMode {
        if self.0.iter().any(|c| c.mode() == NumericMode::Float) {
            NumericMode::Float
        } else {
            NumericMode::Exact
        }
    }

    pub fn in_mode(&self, mode: NumericMode) -> Vector {
        Vector(self.0.iter().map(|c| c.in_mode(mode)).collect())
    }

    pub fn dot(&self, other: &Vector) -> Num {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Num::zero(self.mode());
        for (a, b) in self.0.iter().zip(&other.0) {
            acc = acc + a * b;
        }
        acc
    }

    pub fn norm2(&self) -> Num {
        self.dot(self)
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: &Num) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Num::is_zero)
    }

    /// Cross product, 3D only.
    pub fn cross(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), 3, "cross product needs 3D vectors");
        let (a, b) = (&self.0, &other.0);
        Vector(vec![
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ])
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.0.iter().map(Num::to_f64).collect()
    }

    /// Lexicographic total order used for canonical sorting.
    pub fn total_cmp(&self, other: &Vector) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            let o = a.total_cmp(b);
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        self.dim().cmp(&other.dim())
    }

    fn magnitude(&self) -> f64 {
        self.0.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl Index<usize> for Vector {
    type Output = Num;
    fn index(&self, i: usize) -> &Num {
        &self.0[i]
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matrix(pub Vec<Vec<Num>>);

impl Matrix {
    pub fn identity(dim: usize, mode: NumericMode) -> Matrix {
        Matrix(
            (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| if i == j { Num::one(mode) } else { Num::zero(mode) })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn from_ints(rows: &[&[i64]]) -> Matrix {
        Matrix(rows.iter().map(|r| r.iter().map(|&c| Num::int(c)).collect()).collect())
    }

    pub fn from_f64s(rows: &[&[f64]]) -> Matrix {
        Matrix(rows.iter().map(|r| r.iter().map(|&c| Num::float(c)).collect()).collect())
    }

    /// Counter-clockwise 2D rotation by `angle` radians (float mode).
    pub fn rotation_2d(angle: f64) -> Matrix {
        let (s, c) = angle.sin_cos();
        Matrix::from_f64s(&[&[c, -s], &[s, c]])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn mode(&self) -> NumericMode {
        if self.0.iter().flatten().any(|c| c.mode() == NumericMode::Float) {
            NumericMode::Float
        } else {
            NumericMode::Exact
        }
    }

    pub fn in_mode(&self, mode: NumericMode) -> Matrix {
        Matrix(
            self.0
                .iter()
                .map(|r| r.iter().map(|c| c.in_mode(mode)).collect())
                .collect(),
        )
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.dim();
        Matrix((0..n).map(|i| (0..n).map(|j| self.0[j][i].clone()).collect()).collect())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.dim();
        let mode = self.mode();
        Matrix(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut acc = Num::zero(mode);
                            for k in 0..n {
                                acc = acc + &self.0[i][k] * &other.0[k][j];
                            }
                            acc
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// Column convention: returns `M v`.
    pub fn apply(&self, v: &Vector) -> Vector {
        Vector(
            self.0
                .iter()
                .map(|row| {
                    let mut acc = Num::zero(v.mode());
                    for (m, c) in row.iter().zip(&v.0) {
                        acc = acc + m * c;
                    }
                    acc
                })
                .collect(),
        )
    }

    /// Row convention: returns `v M` (the row vector right-multiplied).
    pub fn apply_right(&self, v: &Vector) -> Vector {
        self.transpose().apply(v)
    }

    pub fn det(&self) -> Num {
        let rows: Vec<Vector> = self.0.iter().map(|r| Vector(r.clone())).collect();
        det(&rows)
    }

    /// Max absolute entry of `M Mᵀ - I`.
    pub fn orthogonality_residual(&self) -> f64 {
        let p = self.mul(&self.transpose());
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                let e = &p.0[i][j] - &Num::from_i64(target as i64, p.mode());
                let r = if e.is_zero() { 0.0 } else { e.to_f64().abs().max(f64::MIN_POSITIVE) };
                worst = worst.max(r);
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Num;
    fn index(&self, (i, j): (usize, usize)) -> &Num {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Num {
        &mut self.0[i][j]
    }
}

/// Determinant of the square matrix whose rows are `rows`.
pub fn det(rows: &[Vector]) -> Num {
    let n = rows.len();
    let mode = rows.first().map(Vector::mode).unwrap_or(NumericMode::Exact);
    match n {
        0 => Num::one(mode),
        1 => rows[0][0].clone(),
        2 => &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0],
        3 => {
            let (a, b, c) = (&rows[0], &rows[1], &rows[2]);
            &a[0] * &(&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * &(&b[0] * &c[2] - &b[2] * &c[0])
                + &a[2] * &(&b[0] * &c[1] - &b[1] * &c[0])
        }
        _ => {
            let m: Vec<Vec<Num>> = rows.iter().map(|r| r.0.clone()).collect();
            gauss_det(m)
        }
    }
}

fn gauss_det(mut m: Vec<Vec<Num>>) -> Num {
    let n = m.len();
    let mode = m[0][0].mode();
    let mut acc = Num::one(mode);
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| {
            m[a][col].to_f64().abs().total_cmp(&m[b][col].to_f64().abs())
        });
        let Some(p) = pivot.filter(|&p| !m[p][col].is_zero()) else {
            return Num::zero(mode);
        };
        if p != col {
            m.swap(p, col);
            acc = -acc;
        }
        let piv = m[col][col].clone();
        acc = acc * &piv;
        for r in col + 1..n {
            let f = &m[r][col] / &piv;
            for c in col..n {
                let v = &m[col][c] * &f;
                m[r][c] = &m[r][c] - &v;
            }
        }
    }
    acc
}

/// Gram matrix `G[i][j] = <v_i, v_j>`.
pub fn gram(vs: &[Vector]) -> Vec<Vec<Num>> {
    (0..vs.len())
        .map(|i| (0..vs.len()).map(|j| vs[i].dot(&vs[j])).collect())
        .collect()
}

fn gram_det_is_zero(vs: &[Vector]) -> bool {
    let g = gram(vs);
    let rows: Vec<Vector> = g.into_iter().map(Vector).collect();
    let scale: f64 = vs.iter().map(|v| v.magnitude().powi(2).max(1.0)).product();
    det(&rows).is_zero_rel(scale)
}

/// Indices of a maximal linearly independent subset, chosen greedily in the
/// given order. The selection depends only on the Gram matrix of `vs`.
pub fn greedy_basis(vs: &[Vector]) -> Vec<usize> {
    greedy_basis_by(vs.len(), |i| &vs[i])
}

/// As [`greedy_basis`] over `order`, returning positions into `order`.
pub fn greedy_basis_by<'a, F>(len: usize, get: F) -> Vec<usize>
where
    F: Fn(usize) -> &'a Vector,
{
    let mut picked: Vec<usize> = Vec::new();
    let mut basis: Vec<Vector> = Vec::new();
    let dim = if len > 0 { get(0).dim() } else { 0 };
    for i in 0..len {
        if basis.len() == dim {
            break;
        }
        let v = get(i);
        if v.is_zero() {
            continue;
        }
        basis.push(v.clone());
        if gram_det_is_zero(&basis) {
            basis.pop();
        } else {
            picked.push(i);
        }
    }
    picked
}

pub fn rank(vs: &[Vector]) -> usize {
    greedy_basis(vs).len()
}

/// Orientation datum of an ordered vector list: the determinant sign of the
/// first maximal independent subset when it has full rank `dim`, else 0.
pub fn orientation_sign(vs: &[Vector], dim: usize) -> i8 {
    let basis = greedy_basis(vs);
    if basis.len() < dim {
        return 0;
    }
    let rows: Vec<Vector> = basis.iter().map(|&i| vs[i].clone()).collect();
    let scale: f64 = rows.iter().map(|v| v.magnitude().max(1.0)).product();
    det(&rows).signum_rel(scale)
}

/// Inverse of a small square matrix by Gauss-Jordan elimination.
pub fn invert(m: &[Vec<Num>]) -> Option<Vec<Vec<Num>>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mode = m[0][0].mode();
    let mut a: Vec<Vec<Num>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Num::one(mode) } else { Num::zero(mode) }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).max_by(|&x, &y| {
            a[x][col].to_f64().abs().total_cmp(&a[y][col].to_f64().abs())
        })?;
        if a[p][col].is_zero() {
            return None;
        }
        a.swap(p, col);
        let piv = a[col][col].clone();
        for c in 0..2 * n {
            a[col][c] = &a[col][c] / &piv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() && a[r][col].mode() == NumericMode::Exact {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let v = &a[col][c] * &f;
                a[r][c] = &a[r][c] - &v;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// The linear map sending span(`from`) onto span(`to`) by `from[i] ↦ to[i]`
/// and annihilating the orthogonal complement of span(`from`).
///
/// `from` must be linearly independent. When the Gram matrices of both lists
/// agree, the result is an isometry on span(`from`).
pub fn span_map(from: &[Vector], to: &[Vector], dim: usize) -> Option<Matrix> {
    let mode = from
        .first()
        .or(to.first())
        .map(Vector::mode)
        .unwrap_or(NumericMode::Exact);
    if from.is_empty() {
        return Some(Matrix(vec![vec![Num::zero(mode); dim]; dim]));
    }
    let ginv = invert(&gram(from))?;
    let r = from.len();
    // M = B2 G^{-1} B1ᵀ with B as column matrices.
    let mut m = vec![vec![Num::zero(mode); dim]; dim];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = Num::zero(mode);
            for a in 0..r {
                for b in 0..r {
                    if ginv[a][b].is_zero() && ginv[a][b].mode() == NumericMode::Exact {
                        continue;
                    }
                    acc = acc + &(&to[a][i] * &ginv[a][b]) * &from[b][j];
                }
            }
            *cell = acc;
        }
    }
    Some(Matrix(m))
}

/// A nonzero vector orthogonal to every vector in `span` (whose rank must be
/// below `dim`). Rational whenever the inputs are.
pub fn complement_vector(span: &[Vector], dim: usize, mode: NumericMode) -> Vector {
    let basis: Vec<Vector> = greedy_basis(span).into_iter().map(|i| span[i].clone()).collect();
    let axes: Vec<Vector> = (0..dim)
        .map(|k| {
            let mut v = Vector::zeros(dim, mode);
            v.0[k] = Num::one(mode);
            v
        })
        .collect();
    match (dim, basis.len()) {
        (_, 0) => axes[0].clone(),
        (2, 1) => Vector(vec![-&basis[0][1], basis[0][0].clone()]),
        (3, 2) => basis[0].cross(&basis[1]),
        (3, 1) => axes
            .iter()
            .map(|e| basis[0].cross(e))
            .max_by(|a, b| a.norm2().to_f64().total_cmp(&b.norm2().to_f64()))
            .expect("three axes"),
        _ => {
            // Project axes off the span and keep the largest remainder.
            let g = invert(&gram(&basis)).expect("independent basis");
            axes.iter()
                .map(|e| {
                    let mut out = e.clone();
                    for a in 0..basis.len() {
                        for b in 0..basis.len() {
                            let c = &g[a][b] * &basis[b].dot(e);
                            out = out.sub(&basis[a].scale(&c));
                        }
                    }
                    out
                })
                .max_by(|a, b| a.norm2().to_f64().total_cmp(&b.norm2().to_f64()))
                .expect("nonempty axes")
        }
    }
}

/// Reflection `I - 2 u uᵀ / |u|²`.
pub fn householder(u: &Vector) -> Matrix {
    let dim = u.dim();
    let mode = u.mode();
    let n2 = u.norm2();
    let two = Num::from_i64(2, mode);
    let mut m = Matrix::identity(dim, mode);
    for i in 0..dim {
        for j in 0..dim {
            let v = &(&two * &(&u[i] * &u[j])) / &n2;
            m.0[i][j] = &m.0[i][j] - &v;
        }
    }
    m
}

/// An orthogonal `Q` (column convention) with `Q from[i] = to[i]`, built as a
/// product of reflections so that it stays rational on rational input. The
/// lists must have equal Gram matrices. With `rotation`, the result has
/// determinant +1 when the spans are rank-deficient; at full rank the
/// determinant is forced by the data and returned as is.
pub fn align_orthogonal(from: &[Vector], to: &[Vector], dim: usize, rotation: bool) -> Matrix {
    let mode = from
        .first()
        .map(Vector::mode)
        .unwrap_or(NumericMode::Exact);
    let mut q = Matrix::identity(dim, mode);
    let mut reflections = 0usize;
    for idx in greedy_basis(from) {
        let image = q.apply(&from[idx]);
        let u = image.sub(&to[idx]);
        if !u.is_zero() {
            q = householder(&u).mul(&q);
            reflections += 1;
        }
    }
    if rotation && reflections % 2 == 1 && rank(to) < dim {
        let w = complement_vector(to, dim, mode);
        q = householder(&w).mul(&q);
    }
    q
}
