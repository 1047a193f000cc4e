//! Dense vectors, matrices, and canonical subspaces over GF(p), plus
//! Grassmannian enumeration. Dimensions here never exceed ten or so, which
//! is why everything is dense and why rank is plain Gaussian elimination.
//!
//! Dimension mismatches between operands are programming errors and panic;
//! fallible results are reserved for genuine runtime conditions (overflow).

use std::fmt;

use thiserror::Error;

use crate::field::PrimeField;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("Gaussian binomial [{d} choose {k}]_{p} overflows u64")]
    BinomialOverflow { d: usize, k: usize, p: u64 },
    #[error("subspace parameters out of range: k = {k}, d = {d}")]
    BadDimensions { d: usize, k: usize },
}

/// A coordinate vector over GF(p), entries reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    field: PrimeField,
    entries: Vec<u64>,
}

impl Vector {
    pub fn new(field: PrimeField, entries: Vec<u64>) -> Self {
        let entries = entries.into_iter().map(|e| e % field.p()).collect();
        Vector { field, entries }
    }

    pub fn from_signed(field: PrimeField, entries: &[i64]) -> Self {
        Vector {
            field,
            entries: entries.iter().map(|&e| field.elem(e)).collect(),
        }
    }

    pub fn zero(field: PrimeField, dim: usize) -> Self {
        Vector {
            field,
            entries: vec![0; dim],
        }
    }

    pub fn basis(field: PrimeField, dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut v = Vector::zero(field, dim);
        v.entries[i] = 1;
        v
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> u64 {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: u64) {
        self.entries[i] = value % self.field.p();
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector {
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| self.field.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector {
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| self.field.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u64) -> Vector {
        Vector {
            field: self.field,
            entries: self.entries.iter().map(|&a| self.field.mul(a, c)).collect(),
        }
    }

    pub fn add_scaled(&self, other: &Vector, c: u64) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector {
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| self.field.add(a, self.field.mul(b, c)))
                .collect(),
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(out, "{}", words.join(" "))
    }
}

/// A dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vector]) -> Self {
        let cols = rows.first().map_or(0, Vector::dim);
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.dim(), cols);
            for j in 0..cols {
                m.set(i, j, r.get(j));
            }
        }
        m
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut entry: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut m = Matrix::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, entry(i, j) % field.p());
            }
        }
        m
    }

    /// Builds a permutation matrix sending basis vector `j` to basis vector
    /// `perm[j]`, i.e. column `j` is e_{perm[j]}.
    pub fn permutation(field: PrimeField, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Matrix::zeros(field, n, n);
        for (j, &i) in perm.iter().enumerate() {
            assert!(i < n);
            m.set(i, j, 1);
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        self.data[r * self.cols + c] = value % self.field.p();
    }

    pub fn row(&self, r: usize) -> Vector {
        Vector {
            field: self.field,
            entries: self.data[r * self.cols..(r + 1) * self.cols].to_vec(),
        }
    }

    pub fn col(&self, c: usize) -> Vector {
        Vector {
            field: self.field,
            entries: (0..self.rows).map(|r| self.get(r, c)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let f = self.field;
        Matrix::from_fn(f, self.rows, other.cols, |i, j| {
            let mut acc = 0;
            for k in 0..self.cols {
                acc = f.add(acc, f.mul(self.get(i, k), other.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim());
        let f = self.field;
        Vector {
            field: f,
            entries: (0..self.rows)
                .map(|i| {
                    let mut acc = 0;
                    for k in 0..self.cols {
                        acc = f.add(acc, f.mul(self.get(i, k), v.get(k)));
                    }
                    acc
                })
                .collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let tmp = self.get(a, j);
            let va = self.get(b, j);
            self.data[a * self.cols + j] = va;
            self.data[b * self.cols + j] = tmp;
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(src) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(row, src);
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = f.mul(m.get(row, j), inv);
                m.data[row * m.cols + j] = v;
            }
            for r in 0..m.rows {
                if r != row && m.get(r, col) != 0 {
                    let c = m.get(r, col);
                    for j in 0..m.cols {
                        let v = f.sub(m.get(r, j), f.mul(c, m.get(row, j)));
                        m.data[r * m.cols + j] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// The right kernel {v : Mv = 0} as a canonical subspace of GF(p)^cols.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = Vector::zero(self.field, self.cols);
            v.set(fc, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                v.set(pc, self.field.neg(r.get(i, fc)));
            }
            basis.push(v);
        }
        Subspace::from_rows(self.field, self.cols, &basis)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = self.field;
        if n == 0 {
            return Some(Matrix::zeros(f, 0, 0));
        }
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(f, n, n, |i, j| r.get(i, n + j)))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(out, "{}", self.row(i))?;
        }
        Ok(())
    }
}

/// A subspace of GF(p)^d in reduced-row-echelon representation. The basis is
/// canonical, so two values compare equal exactly when they are the same
/// subspace; `Eq` and `Hash` come for free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_rows(field: PrimeField, ambient: usize, rows: &[Vector]) -> Self {
        if rows.is_empty() {
            return Subspace::zero(field, ambient);
        }
        let (r, pivots) = Matrix::from_rows(field, rows).rref();
        let k = pivots.len();
        let basis = Matrix::from_fn(field, k, ambient, |i, j| r.get(i, j));
        Subspace {
            field,
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn line(generator: &Vector) -> Self {
        Subspace::from_rows(generator.field(), generator.dim(), std::slice::from_ref(generator))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_row(&self, i: usize) -> Vector {
        self.basis.row(i)
    }

    pub fn basis_rows(&self) -> Vec<Vector> {
        (0..self.dim()).map(|i| self.basis.row(i)).collect()
    }

    /// Eliminates the pivot coordinates of `v` against the basis; the result
    /// is zero exactly when `v` lies in the subspace.
    pub fn reduce(&self, v: &Vector) -> Vector {
        assert_eq!(v.dim(), self.ambient);
        let f = self.field;
        let mut out = v.clone();
        for (i, &c) in self.pivots.iter().enumerate() {
            let coeff = out.get(c);
            if coeff != 0 {
                out = out.add_scaled(&self.basis.row(i), f.neg(coeff));
            }
        }
        out
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.dim() <= other.dim() && (0..self.dim()).all(|i| other.contains(&self.basis.row(i)))
    }

    /// The image of this subspace under a linear map (columns index the
    /// domain, so the map must accept `ambient`-dimensional input).
    pub fn map(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        let rows: Vec<Vector> = (0..self.dim()).map(|i| m.mul_vec(&self.basis.row(i))).collect();
        Subspace::from_rows(self.field, m.rows(), &rows)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == 0 {
            return write!(out, "0");
        }
        let rows: Vec<String> = (0..self.dim()).map(|i| self.basis.row(i).to_string()).collect();
        write!(out, "{}", rows.join("; "))
    }
}

/// The number of k-dimensional subspaces of GF(p)^d.
pub fn gaussian_binomial(d: usize, k: usize, p: u64) -> Result<u64, LinalgError> {
    if k > d {
        return Err(LinalgError::BadDimensions { d, k });
    }
    let overflow = || LinalgError::BinomialOverflow { d, k, p };
    let pw = |e: usize| -> Result<u128, LinalgError> {
        let mut acc: u128 = 1;
        for _ in 0..e {
            acc = acc.checked_mul(p as u128).ok_or_else(overflow)?;
        }
        Ok(acc)
    };
    // r_{t} = r_{t-1} * (p^(d-t+1) - 1) / (p^t - 1) stays integral at every step
    let mut r: u128 = 1;
    for t in 1..=k {
        let num = pw(d - t + 1)? - 1;
        let den = pw(t)? - 1;
        r = r.checked_mul(num).ok_or_else(overflow)?;
        debug_assert_eq!(r % den, 0);
        r /= den;
    }
    u64::try_from(r).map_err(|_| overflow())
}

/// Enumerates every k-dimensional subspace of GF(p)^d exactly once, in a
/// deterministic order: lexicographic over echelon pivot patterns, then over
/// the free entries row-major. The total count is the Gaussian binomial,
/// which must fit in u64 or the call fails up front.
pub fn enumerate_subspaces(
    field: PrimeField,
    d: usize,
    k: usize,
) -> Result<SubspaceIter, LinalgError> {
    if k > d {
        return Err(LinalgError::BadDimensions { d, k });
    }
    gaussian_binomial(d, k, field.p())?;
    Ok(SubspaceIter {
        field,
        d,
        k,
        pivots: (0..k).collect(),
        free_values: None,
        done: false,
    })
}

pub struct SubspaceIter {
    field: PrimeField,
    d: usize,
    k: usize,
    pivots: Vec<usize>,
    /// Values for the free cells of the current pivot pattern, row-major;
    /// `None` means the pattern was just entered.
    free_values: Option<Vec<u64>>,
    done: bool,
}

impl SubspaceIter {
    fn free_cells(&self) -> Vec<(usize, usize)> {
        let mut cells = Vec::new();
        for (i, &pc) in self.pivots.iter().enumerate() {
            for j in pc + 1..self.d {
                if !self.pivots.contains(&j) {
                    cells.push((i, j));
                }
            }
        }
        cells
    }

    fn build(&self, cells: &[(usize, usize)], values: &[u64]) -> Subspace {
        let mut basis = Matrix::zeros(self.field, self.k, self.d);
        for (i, &pc) in self.pivots.iter().enumerate() {
            basis.set(i, pc, 1);
        }
        for (&(i, j), &v) in cells.iter().zip(values) {
            basis.set(i, j, v);
        }
        Subspace {
            field: self.field,
            ambient: self.d,
            pivots: self.pivots.clone(),
            basis,
        }
    }

    fn advance_pivots(&mut self) -> bool {
        // next k-combination of 0..d in lexicographic order
        if self.k == 0 {
            return false;
        }
        let mut i = self.k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if self.pivots[i] < self.d - (self.k - i) {
                self.pivots[i] += 1;
                for t in i + 1..self.k {
                    self.pivots[t] = self.pivots[t - 1] + 1;
                }
                return true;
            }
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        if self.k == 0 {
            self.done = true;
            return Some(Subspace::zero(self.field, self.d));
        }
        let p = self.field.p();
        loop {
            let cells = self.free_cells();
            match self.free_values.take() {
                None => {
                    let values = vec![0; cells.len()];
                    let out = self.build(&cells, &values);
                    self.free_values = Some(values);
                    return Some(out);
                }
                Some(mut values) => {
                    // odometer, last cell fastest, so tuples come out in
                    // lexicographic order
                    let mut pos = cells.len();
                    let advanced = loop {
                        if pos == 0 {
                            break false;
                        }
                        pos -= 1;
                        values[pos] += 1;
                        if values[pos] < p {
                            break true;
                        }
                        values[pos] = 0;
                    };
                    if advanced {
                        let out = self.build(&cells, &values);
                        self.free_values = Some(values);
                        return Some(out);
                    }
                    // pattern exhausted, move to the next pivot set
                    if !self.advance_pivots() {
                        self.done = true;
                        return None;
                    }
                }
            }
        }
    }
}

/// Enumerates the projective points of GF(p)^d: one representative per line,
/// normalized so the first nonzero coordinate is 1. Deterministic order.
pub fn projective_points(field: PrimeField, d: usize) -> impl Iterator<Item = Vector> {
    let p = field.p();
    (0..d).flat_map(move |lead| {
        let tail = d - lead - 1;
        let count = p.pow(tail as u32);
        (0..count).map(move |mut k| {
            let mut v = Vector::zero(field, d);
            v.set(lead, 1);
            for t in 0..tail {
                v.set(lead + 1 + t, k % p);
                k /= p;
            }
            v
        })
    })
}

/// Enumerates all vectors of GF(p)^d, including zero, first coordinate fastest.
pub fn all_vectors(field: PrimeField, d: usize) -> impl Iterator<Item = Vector> {
    let p = field.p();
    let total = p.pow(d as u32);
    (0..total).map(move |mut k| {
        let mut v = Vector::zero(field, d);
        for i in 0..d {
            v.set(i, k % p);
            k /= p;
        }
        v
    })
}
