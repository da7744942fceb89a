//! Dense exact linear algebra: matrices, row reduction and subspaces.
//!
//! Subspaces are stored by their reduced row echelon basis, so two equal
//! subspaces compare equal structurally.

use std::fmt;

use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<F>>) -> Self {
        assert_eq!(entries.len(), rows);
        let mut data = Vec::with_capacity(rows * cols);
        for row in entries {
            assert_eq!(row.len(), cols);
            data.extend(row);
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c).clone() + a.clone() * b.clone();
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(lead, p);
            let inv = self.get(lead, c).inverse().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self.get(lead, j).clone() * inv.clone();
                self.set(lead, j, v);
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.get(r, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let pv = self.get(lead, j);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = self.get(r, j).clone() - factor.clone() * pv.clone();
                    self.set(r, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![F::zero(); self.cols];
                x[f] = F::one();
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = -m.get(r, f).clone();
                }
                x
            })
            .collect()
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<F>]) -> Matrix<F> {
        let mut m = Self::zeros(rows, cols.len());
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), rows);
            for (r, x) in v.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }
}

pub fn add_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale_vec<F: Field>(s: &F, a: &[F]) -> Vec<F> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

pub fn is_zero_vec<F: Field>(a: &[F]) -> bool {
    a.iter().all(Field::is_zero)
}

/// A linear subspace of `F^n`, stored as a reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, Matrix::<F>::identity(ambient).to_rows())
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<F>>) -> Self {
        let rows: Vec<Vec<F>> = vectors.into_iter().collect();
        if rows.is_empty() || ambient == 0 {
            return Self::zero(ambient);
        }
        let n = rows.len();
        let mut m = Matrix::from_rows(n, ambient, rows);
        let rank = m.rref_in_place().len();
        Subspace {
            ambient,
            basis: m.to_rows().into_iter().take(rank).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.ambient);
        if is_zero_vec(v) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Subspace::span(self.ambient, rows).dim() == self.dim()
    }

    pub fn contains_space(&self, other: &Subspace<F>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        assert_eq!(self.ambient, other.ambient);
        Subspace::span(
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Subspace<F> {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // x = B1^T c1 = B2^T c2
        let b1 = Matrix::from_columns(self.ambient, &self.basis);
        let neg_b2 = Matrix::from_columns(
            self.ambient,
            &other
                .basis
                .iter()
                .map(|v| v.iter().map(|x| -x.clone()).collect())
                .collect::<Vec<_>>(),
        );
        let kernel = b1.hstack(&neg_b2).kernel();
        let k1 = self.basis.len();
        Subspace::span(
            self.ambient,
            kernel.into_iter().map(|c| b1.mul_vec(&c[..k1])),
        )
    }

    /// Image `A(U)` in the target space of `A`.
    pub fn image(&self, a: &Matrix<F>) -> Subspace<F> {
        assert_eq!(a.cols(), self.ambient);
        Subspace::span(a.rows(), self.basis.iter().map(|v| a.mul_vec(v)))
    }

    /// Preimage `{x : A x ∈ U}` in the source space of `A`.
    pub fn preimage(&self, a: &Matrix<F>) -> Subspace<F> {
        assert_eq!(a.rows(), self.ambient);
        let n = a.cols();
        if self.is_zero() {
            return Subspace::span(n, a.kernel());
        }
        let neg_b = Matrix::from_columns(
            self.ambient,
            &self
                .basis
                .iter()
                .map(|v| v.iter().map(|x| -x.clone()).collect())
                .collect::<Vec<_>>(),
        );
        let kernel = a.hstack(&neg_b).kernel();
        Subspace::span(n, kernel.into_iter().map(|v| v[..n].to_vec()))
    }

    /// Writes `v = x + y` with `x` in `self` and `y` in `other`, if possible.
    pub fn split(&self, other: &Subspace<F>, v: &[F]) -> Option<(Vec<F>, Vec<F>)> {
        let cols: Vec<Vec<F>> = self.basis.iter().chain(&other.basis).cloned().collect();
        if cols.is_empty() {
            return is_zero_vec(v).then(|| (v.to_vec(), v.to_vec()));
        }
        let m = Matrix::from_columns(self.ambient, &cols);
        let c = m.solve(v)?;
        let mut x = vec![F::zero(); self.ambient];
        for (i, b) in self.basis.iter().enumerate() {
            x = add_vec(&x, &scale_vec(&c[i], b));
        }
        let y = sub_vec(v, &x);
        Some((x, y))
    }
}

/// An affine subspace `point + linear`, or the empty set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Affine<F> {
    pub point: Vec<F>,
    pub linear: Subspace<F>,
}

impl<F: Field> Affine<F> {
    pub fn point(v: Vec<F>) -> Self {
        let n = v.len();
        Affine {
            point: v,
            linear: Subspace::zero(n),
        }
    }

    pub fn meets(&self, u: &Subspace<F>) -> bool {
        self.linear.split(u, &self.point).is_some()
    }

    /// `A(self)`.
    pub fn image(&self, a: &Matrix<F>) -> Affine<F> {
        Affine {
            point: a.mul_vec(&self.point),
            linear: self.linear.image(a),
        }
    }

    /// `{x : A x ∈ self}`; `None` when empty.
    pub fn preimage(&self, a: &Matrix<F>) -> Option<Affine<F>> {
        let n = a.cols();
        let neg_b = Matrix::from_columns(
            a.rows(),
            &self
                .linear
                .basis()
                .iter()
                .map(|v| v.iter().map(|x| -x.clone()).collect())
                .collect::<Vec<_>>(),
        );
        let sys = if self.linear.is_zero() {
            a.clone()
        } else {
            a.hstack(&neg_b)
        };
        let sol = sys.solve(&self.point)?;
        Some(Affine {
            point: sol[..n].to_vec(),
            linear: self.linear.preimage(a),
        })
    }

    /// Normalized representative of the class `{c·self : c ≠ 0}`.
    ///
    /// Returns the pair (linear part, span of the whole set); both are
    /// canonical, and together they determine the affine set up to scaling.
    pub fn projective_key(&self) -> (Subspace<F>, Subspace<F>) {
        let span = self
            .linear
            .sum(&Subspace::span(self.point.len(), [self.point.clone()]));
        (self.linear.clone(), span)
    }
}
