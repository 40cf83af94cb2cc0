//! Dense exact linear algebra: row reduction, kernels, linear solves and
//! incrementally maintained subspaces.
//!
//! Vectors are column vectors; a matrix acts on the left (`m * v`). Subspace
//! bases are stored as rows.

use std::fmt;

use crate::field::Field;

#[derive(Clone)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field.spec())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { field: field.clone(), rows: n, cols, data }
    }

    /// Convenience for tests and small literals.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, rows)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, e) in c.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                let orow = other.row(k);
                let base = r * other.cols;
                for (c, b) in orow.iter().enumerate() {
                    f.mul_add_assign(&mut out.data[base + c], a, b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let f = &self.field;
        let nonzero: Vec<usize> = (0..v.len()).filter(|&i| !f.is_zero(&v[i])).collect();
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let mut acc = f.zero();
                for &i in &nonzero {
                    f.mul_add_assign(&mut acc, &row[i], &v[i]);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, s)).collect(),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: &F::Elem, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if self.field.is_zero(s) {
            return;
        }
        let f = self.field.clone();
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            f.mul_add_assign(a, s, b);
        }
    }

    pub fn kronecker(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if f.is_zero(a) {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.get(r2, c2);
                        if f.is_zero(b) {
                            continue;
                        }
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = rref_in_place(&self.field, &mut rows, self.cols);
        (Self::from_rows(&self.field, self.cols, rows), pivots)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        rref_in_place(&self.field, &mut rows, self.cols).len()
    }

    /// Rows form a basis of `{ v : self * v = 0 }`.
    pub fn kernel_basis(&self) -> Self {
        let f = &self.field;
        let mut rows = self.to_rows();
        let pivots = rref_in_place(f, &mut rows, self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(&rows[i][free]);
            }
            basis.push(v);
        }
        Self::from_rows(f, self.cols, basis)
    }

    /// Some `x` with `self * x = rhs`, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "right-hand side has the wrong row count");
        let f = &self.field;
        let width = self.cols + rhs.cols;
        let mut rows: Vec<Vec<F::Elem>> = (0..self.rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend_from_slice(rhs.row(r));
                row
            })
            .collect();
        let pivots = rref_in_place(f, &mut rows, width);
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(f, self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(p, c, rows[i][self.cols + c].clone());
            }
        }
        Some(x)
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let rows = (0..self.rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend_from_slice(other.row(r));
                row
            })
            .collect();
        Self::from_rows(&self.field, self.cols + other.cols, rows)
    }

    /// Span of the columns, as a subspace of the target space.
    pub fn column_space(&self) -> Subspace<F> {
        let mut s = Subspace::new(&self.field, self.rows);
        for c in 0..self.cols {
            s.insert(self.column(c));
        }
        s
    }
}

/// Gauss-Jordan elimination restricted to the first `width` columns.
fn rref_in_place<F: Field>(f: &F, rows: &mut [Vec<F::Elem>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
        if !f.is_one(&inv) {
            for e in rows[r][c..].iter_mut() {
                *e = f.mul(e, &inv);
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(tail.iter_mut()) {
            if f.is_zero(&other[c]) {
                continue;
            }
            let factor = f.neg(&other[c]);
            for k in c..other.len() {
                if f.is_zero(&pivot_row[k]) {
                    continue;
                }
                f.mul_add_assign(&mut other[k], &factor, &pivot_row[k]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A subspace of `F^n` kept in reduced row echelon form, rows sorted by pivot.
///
/// For a vector `v` in the subspace, its coordinates are the entries of `v`
/// at the pivot columns.
#[derive(Clone)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}, pivots {:?})", self.dim(), self.ambient, self.pivots)
    }
}

impl<F: Field> Subspace<F> {
    pub fn new(field: &F, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        let mut s = Self::new(field, ambient);
        for i in 0..ambient {
            s.insert(unit_vector(field, ambient, i));
        }
        s
    }

    pub fn from_vectors<I: IntoIterator<Item = Vec<F::Elem>>>(field: &F, ambient: usize, vs: I) -> Self {
        let mut s = Self::new(field, ambient);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn from_matrix_rows(m: &Matrix<F>) -> Self {
        Self::from_vectors(m.field(), m.cols(), m.to_rows())
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtract the component along the subspace, leaving zeros at pivots.
    pub fn reduce(&self, v: &mut [F::Elem]) {
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let factor = f.neg(&v[p]);
            for (k, e) in row.iter().enumerate() {
                if !f.is_zero(e) {
                    f.mul_add_assign(&mut v[k], &factor, e);
                }
            }
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|e| self.field.is_zero(e))
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length does not match ambient dimension");
        let f = self.field.clone();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|e| !f.is_zero(e)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("nonzero");
        for e in v.iter_mut() {
            *e = f.mul(e, &inv);
        }
        for row in self.rows.iter_mut() {
            if f.is_zero(&row[p]) {
                continue;
            }
            let factor = f.neg(&row[p]);
            for (k, e) in v.iter().enumerate() {
                if !f.is_zero(e) {
                    f.mul_add_assign(&mut row[k], &factor, e);
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, v);
        true
    }

    /// Coordinates of `v` with respect to `basis()`. Only meaningful when
    /// `v` lies in the subspace.
    pub fn coords(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn combine(&self, coords: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.rows) {
            if f.is_zero(c) {
                continue;
            }
            for (k, e) in row.iter().enumerate() {
                f.mul_add_assign(&mut out[k], c, e);
            }
        }
        out
    }

    /// Columns that carry no pivot; the unit vectors at these columns span a
    /// complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Coordinates of the class of `v` in the quotient by this subspace, in
    /// the basis given by the free columns.
    pub fn quotient_coords(&self, v: &[F::Elem], free: &[usize]) -> Vec<F::Elem> {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        free.iter().map(|&c| w[c].clone()).collect()
    }

    pub fn to_matrix(&self) -> Matrix<F> {
        Matrix::from_rows(&self.field, self.ambient, self.rows.clone())
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.pivots == other.pivots && self.rows == other.rows
    }
}

/// Coordinates with respect to an arbitrary list of independent vectors.
#[derive(Clone, Debug)]
pub struct CoordinateSystem<F: Field> {
    span: Subspace<F>,
    // Row i expresses the i-th rref basis row as a combination of the
    // original vectors.
    transform: Vec<Vec<F::Elem>>,
    count: usize,
}

impl<F: Field> CoordinateSystem<F> {
    /// `None` when the vectors are linearly dependent.
    pub fn new(field: &F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Option<Self> {
        let n = vectors.len();
        let mut rows: Vec<Vec<F::Elem>> = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut row = v.clone();
                row.extend(unit_vector(field, n, i));
                row
            })
            .collect();
        let pivots = rref_in_place(field, &mut rows, ambient);
        if pivots.len() != n {
            return None;
        }
        let basis: Vec<Vec<F::Elem>> = rows.iter().map(|r| r[..ambient].to_vec()).collect();
        let transform = rows.iter().map(|r| r[ambient..].to_vec()).collect();
        let span = Subspace { field: field.clone(), ambient, rows: basis, pivots };
        Some(CoordinateSystem { span, transform, count: n })
    }

    pub fn span(&self) -> &Subspace<F> {
        &self.span
    }

    /// Coefficients `c` with `v = sum c_i vectors[i]`, or `None` if `v` is
    /// outside the span.
    pub fn coords(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if !self.span.contains(v) {
            return None;
        }
        let f = &self.span.field;
        let r = self.span.coords(v);
        let mut out = vec![f.zero(); self.count];
        for (ri, trow) in r.iter().zip(&self.transform) {
            add_scaled_vec(f, &mut out, ri, trow);
        }
        Some(out)
    }
}

pub fn unit_vector<F: Field>(field: &F, n: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

pub fn is_zero_vec<F: Field>(field: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|e| field.is_zero(e))
}

pub fn add_scaled_vec<F: Field>(field: &F, acc: &mut [F::Elem], s: &F::Elem, v: &[F::Elem]) {
    if field.is_zero(s) {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        field.mul_add_assign(a, s, b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix<F: Field>(f: &F, rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix<F> {
        let rows = (0..r)
            .map(|_| (0..c).map(|_| f.sample_small(rng)).collect())
            .collect();
        Matrix::from_rows(f, c, rows)
    }

    #[test]
    fn rref_identity_and_zero() {
        let f = Rationals;
        let id = Matrix::identity(&f, 2);
        let (r, p) = id.rref();
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1]);
        let z = Matrix::zeros(&f, 3, 3);
        let (r, p) = z.rref();
        assert_eq!(r, z);
        assert!(p.is_empty());
    }

    #[test]
    fn rref_over_gf5_hand_reduced() {
        // [[2,4],[1,2]]: scale row 0 by 2^-1 = 3 -> [1,2]; row 1 becomes 0.
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64(&f, &[&[2, 4], &[1, 2]]);
        let (r, p) = m.rref();
        assert_eq!(r, Matrix::from_i64(&f, &[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_edge_cases() {
        let f = PrimeField::new(1009).unwrap();
        assert_eq!(Matrix::identity(&f, 4).kernel_basis().rows(), 0);
        let k = Matrix::zeros(&f, 3, 3).kernel_basis();
        assert_eq!(k, Matrix::identity(&f, 3));
    }

    #[test]
    fn solve_edge_cases() {
        let f = Rationals;
        let rhs = Matrix::from_i64(&f, &[&[3, 1], &[-2, 5]]);
        let x = Matrix::identity(&f, 2).solve(&rhs).unwrap();
        assert_eq!(x, rhs);
        let z = Matrix::zeros(&f, 2, 2);
        assert!(z.solve(&Matrix::from_i64(&f, &[&[1], &[0]])).is_none());
    }

    fn rank_nullity_and_solve<F: Field>(f: F, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let r = rng.gen_range(1..7);
            let c = rng.gen_range(1..7);
            let m = random_matrix(&f, &mut rng, r, c);
            let k = m.kernel_basis();
            assert_eq!(m.rank() + k.rows(), c);
            assert_eq!(k.rank(), k.rows());
            for row in k.to_rows() {
                assert!(is_zero_vec(&f, &m.mul_vec(&row)));
            }
            let (once, _) = m.rref();
            let (twice, _) = once.rref();
            assert_eq!(once, twice);
            let x0 = random_matrix(&f, &mut rng, c, 2);
            let rhs = m.mul(&x0);
            let x = m.solve(&rhs).expect("consistent system");
            assert_eq!(m.mul(&x), rhs);
        }
    }

    #[test]
    fn random_systems_prime_field() {
        rank_nullity_and_solve(PrimeField::new(1009).unwrap(), 7);
    }

    #[test]
    fn random_systems_rationals() {
        rank_nullity_and_solve(Rationals, 11);
    }

    #[test]
    fn subspace_coordinates_and_quotients() {
        let f = Rationals;
        let vs = vec![
            vec![f.from_i64(1), f.from_i64(2), f.from_i64(0)],
            vec![f.from_i64(2), f.from_i64(4), f.from_i64(1)],
        ];
        let s = Subspace::from_vectors(&f, 3, vs.clone());
        assert_eq!(s.dim(), 2);
        for v in &vs {
            assert!(s.contains(v));
            assert_eq!(&s.combine(&s.coords(v)), v);
        }
        let free = s.free_columns();
        assert_eq!(free, vec![1]);
        let q = s.quotient_coords(&[f.from_i64(0), f.from_i64(1), f.from_i64(0)], &free);
        assert_eq!(q, vec![f.one()]);
    }
}
