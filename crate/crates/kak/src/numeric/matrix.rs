use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::quaternion::{Quaternion, Unit};
use crate::error::{Error, Result};

/// Scalar field of a matrix, ordered by inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub fn beta(self) -> u8 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    pub fn from_beta(beta: u8) -> Option<Field> {
        match beta {
            1 => Some(Field::R),
            2 => Some(Field::C),
            4 => Some(Field::H),
            _ => None,
        }
    }

    /// Field with half the real dimension (`C -> R`, `H -> C`).
    pub fn half(self) -> Option<Field> {
        match self {
            Field::R => None,
            Field::C => Some(Field::R),
            Field::H => Some(Field::C),
        }
    }

    /// Field with twice the real dimension (`R -> C`, `C -> H`).
    pub fn double(self) -> Option<Field> {
        match self {
            Field::R => Some(Field::C),
            Field::C => Some(Field::H),
            Field::H => None,
        }
    }

    /// The natural conjugate transpose over this field.
    pub fn star(self) -> TransposeKind {
        match self {
            Field::R => TransposeKind::T,
            Field::C => TransposeKind::H,
            Field::H => TransposeKind::D,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        }
    }

    pub fn parse(s: &str) -> Option<Field> {
        match s {
            "R" | "r" | "real" => Some(Field::R),
            "C" | "c" | "complex" => Some(Field::C),
            "H" | "h" | "quaternion" => Some(Field::H),
            _ => None,
        }
    }

    pub fn contains(self, q: Quaternion) -> bool {
        match self {
            Field::R => q.is_real(),
            Field::C => q.is_complex(),
            Field::H => true,
        }
    }

    fn project(self, q: Quaternion) -> Quaternion {
        match self {
            Field::R => Quaternion::real(q.w),
            Field::C => Quaternion::new(q.w, q.x, 0.0, 0.0),
            Field::H => q,
        }
    }
}

/// Transpose variants. `T` is the plain transpose (not an anti-automorphism
/// over the quaternions), `H` the complex conjugate transpose, `D` the
/// quaternion conjugate transpose and `DUnit(eta)` the twisted transpose
/// with entries `-eta * conj(q) * eta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransposeKind {
    T,
    H,
    D,
    DUnit(Unit),
}

impl TransposeKind {
    fn check(self, field: Field) -> Result<()> {
        let ok = match self {
            TransposeKind::T | TransposeKind::H => field != Field::H,
            TransposeKind::D | TransposeKind::DUnit(_) => field == Field::H,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidTranspose { kind: self, field })
        }
    }

    fn apply(self, q: Quaternion) -> Quaternion {
        match self {
            TransposeKind::T => q,
            TransposeKind::H | TransposeKind::D => q.conj(),
            TransposeKind::DUnit(eta) => q.d_unit(eta),
        }
    }
}

/// Row-major dense matrix with quaternion storage and a field tag.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix<{:?}> {}x{}", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let q = self.get(i, j);
                    match self.field {
                        Field::R => format!("{:.6}", q.w),
                        Field::C => format!("{:.6}{:+.6}i", q.w, q.x),
                        Field::H => format!("{q:.6}"),
                    }
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl DenseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        DenseMatrix { field, rows, cols, data: vec![Quaternion::ZERO; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Quaternion::ONE;
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(field.project(f(i, j)));
            }
        }
        DenseMatrix { field, rows, cols, data }
    }

    /// Builds a matrix from row-major entries, rejecting entries outside `field`.
    pub fn from_entries(field: Field, rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|q| !field.contains(*q)) {
            return Err(Error::Parse(format!("entry {pos} is not in {field:?}")));
        }
        Ok(DenseMatrix { field, rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "from_real: wrong entry count");
        DenseMatrix { field: Field::R, rows, cols, data: data.iter().map(|&v| Quaternion::real(v)).collect() }
    }

    pub fn from_complex(rows: usize, cols: usize, data: &[Complex64]) -> Self {
        assert_eq!(data.len(), rows * cols, "from_complex: wrong entry count");
        DenseMatrix { field: Field::C, rows, cols, data: data.iter().map(|&c| Quaternion::from_complex(c)).collect() }
    }

    /// Diagonal matrix with the given real entries.
    pub fn diag_real(field: Field, d: &[f64]) -> Self {
        let mut m = Self::zeros(field, d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, Quaternion::real(v));
        }
        m
    }

    pub fn diag(field: Field, d: &[Quaternion]) -> Self {
        let mut m = Self::zeros(field, d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Quaternion) {
        self.data[i * self.cols + j] = self.field.project(v);
    }

    /// Re-tags the matrix over a larger field. Fails when asked to shrink.
    pub fn promote(&self, field: Field) -> Result<Self> {
        if field < self.field {
            return Err(Error::WrongField { expected: field, found: self.field });
        }
        let mut m = self.clone();
        m.field = field;
        Ok(m)
    }

    /// Re-tags over a smaller field, dropping the discarded components.
    pub fn project_to(&self, field: Field) -> Self {
        DenseMatrix {
            field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|q| field.project(*q)).collect(),
        }
    }

    /// Frobenius norm of the components that `project_to(field)` would drop.
    pub fn field_defect(&self, field: Field) -> f64 {
        self.data.iter().map(|q| (*q - field.project(*q)).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|q| q * s)
    }

    /// `q * self`, entry by entry from the left.
    pub fn left_scalar(&self, q: Quaternion) -> Self {
        let field = self.field.max(field_of(q));
        let mut m = self.map(|v| q * v);
        m.field = field;
        m
    }

    /// `self * q`, entry by entry from the right.
    pub fn right_scalar(&self, q: Quaternion) -> Self {
        let field = self.field.max(field_of(q));
        let mut m = self.map(|v| v * q);
        m.field = field;
        m
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> Self {
        DenseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&q| self.field.project(f(q))).collect(),
        }
    }

    /// Entrywise conjugate. Over the quaternions this is the full quaternion
    /// conjugate, which is not multiplicative; callers use it for `C` only.
    pub fn conj(&self) -> Self {
        self.map(Quaternion::conj)
    }

    pub fn transpose(&self, kind: TransposeKind) -> Result<Self> {
        kind.check(self.field)?;
        Ok(self.transpose_unchecked(kind))
    }

    fn transpose_unchecked(&self, kind: TransposeKind) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(kind.apply(self.get(i, j)));
            }
        }
        DenseMatrix { field: self.field, rows: self.cols, cols: self.rows, data }
    }

    /// Plain transpose, defined over every field as an entry shuffle.
    pub fn t(&self) -> Self {
        self.transpose_unchecked(TransposeKind::T)
    }

    /// Conjugate transpose natural to the field.
    pub fn star(&self) -> Self {
        self.transpose_unchecked(self.field.star())
    }

    pub fn try_mul(&self, o: &DenseMatrix) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let field = self.field.max(o.field);
        let (n, m, k) = (self.rows, o.cols, self.cols);
        let mut data = vec![Quaternion::ZERO; n * m];
        match field {
            Field::R => {
                for i in 0..n {
                    for l in 0..k {
                        let a = self.data[i * k + l].w;
                        if a == 0.0 {
                            continue;
                        }
                        let row = &o.data[l * m..(l + 1) * m];
                        for (out, b) in data[i * m..(i + 1) * m].iter_mut().zip(row) {
                            out.w += a * b.w;
                        }
                    }
                }
            }
            Field::C => {
                for i in 0..n {
                    for l in 0..k {
                        let a = self.data[i * k + l];
                        if a.w == 0.0 && a.x == 0.0 {
                            continue;
                        }
                        let row = &o.data[l * m..(l + 1) * m];
                        for (out, b) in data[i * m..(i + 1) * m].iter_mut().zip(row) {
                            out.w += a.w * b.w - a.x * b.x;
                            out.x += a.w * b.x + a.x * b.w;
                        }
                    }
                }
            }
            Field::H => {
                for i in 0..n {
                    for l in 0..k {
                        let a = self.data[i * k + l];
                        if a == Quaternion::ZERO {
                            continue;
                        }
                        let row = &o.data[l * m..(l + 1) * m];
                        for (out, b) in data[i * m..(i + 1) * m].iter_mut().zip(row) {
                            *out += a * *b;
                        }
                    }
                }
            }
        }
        Ok(DenseMatrix { field, rows: n, cols: m, data })
    }

    fn zip_with(&self, o: &DenseMatrix, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> Result<Self> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(DenseMatrix {
            field: self.field.max(o.field),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn try_add(&self, o: &DenseMatrix) -> Result<Self> {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn try_sub(&self, o: &DenseMatrix) -> Result<Self> {
        self.zip_with(o, |a, b| a - b)
    }

    /// `||self - o||_F`, panicking on shape mismatch.
    pub fn distance(&self, o: &DenseMatrix) -> f64 {
        (self - o).frobenius_norm()
    }

    /// `self * o - o * self`.
    pub fn commutator(&self, o: &DenseMatrix) -> Self {
        &(self * o) - &(o * self)
    }

    pub fn trace(&self) -> Quaternion {
        let mut t = Quaternion::ZERO;
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "submatrix out of range");
        let mut data = Vec::with_capacity(nr * nc);
        for i in r0..r0 + nr {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c0 + nc]);
        }
        DenseMatrix { field: self.field, rows: nr, cols: nc, data }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &DenseMatrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "set_block out of range");
        if b.field > self.field {
            self.field = b.field;
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = b.get(i, j);
            }
        }
    }

    pub fn block_diag(blocks: &[DenseMatrix]) -> Self {
        let field = blocks.iter().map(|b| b.field).max().unwrap_or(Field::R);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    /// Assembles a matrix from a grid of blocks. Row heights come from the
    /// first column, widths from the first row.
    pub fn from_blocks(grid: &[Vec<DenseMatrix>]) -> Self {
        let heights: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let field = grid.iter().flatten().map(|b| b.field).max().unwrap_or(Field::R);
        let mut m = Self::zeros(field, heights.iter().sum(), widths.iter().sum());
        let mut r = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c = 0;
            for (bj, b) in row.iter().enumerate() {
                assert_eq!((b.rows, b.cols), (heights[bi], widths[bj]), "from_blocks: ragged grid");
                m.set_block(r, c, b);
                c += widths[bj];
            }
            r += heights[bi];
        }
        m
    }

    /// Column `j` as an `n x 1` matrix.
    pub fn column(&self, j: usize) -> Self {
        self.submatrix(0, j, self.rows, 1)
    }

    /// Reorders columns: column `k` of the result is column `perm[k]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        DenseMatrix::from_fn(self.field, self.rows, perm.len(), |i, k| self.get(i, perm[k]))
    }

    /// Reorders rows: row `k` of the result is row `perm[k]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        DenseMatrix::from_fn(self.field, perm.len(), self.cols, |k, j| self.get(perm[k], j))
    }

    /// `[[Re, Im], [-Im, Re]]` for a complex (or real) matrix.
    pub fn realify(&self) -> Result<Self> {
        if self.field == Field::H {
            return Err(Error::WrongField { expected: Field::C, found: Field::H });
        }
        let (n, m) = (self.rows, self.cols);
        Ok(DenseMatrix::from_fn(Field::R, 2 * n, 2 * m, |i, j| {
            let q = self.get(i % n, j % m);
            let v = match (i < n, j < m) {
                (true, true) | (false, false) => q.w,
                (true, false) => q.x,
                (false, true) => -q.x,
            };
            Quaternion::real(v)
        }))
    }

    /// Inverse of `realify`. Averages the redundant blocks.
    pub fn derealify(&self) -> Result<Self> {
        if self.field != Field::R || !self.rows.is_multiple_of(2) || !self.cols.is_multiple_of(2) {
            return Err(Error::ShapeMismatch("derealify expects an even real matrix".into()));
        }
        let (n, m) = (self.rows / 2, self.cols / 2);
        Ok(DenseMatrix::from_fn(Field::C, n, m, |i, j| {
            let re = 0.5 * (self.get(i, j).w + self.get(i + n, j + m).w);
            let im = 0.5 * (self.get(i, j + m).w - self.get(i + n, j).w);
            Quaternion::new(re, im, 0.0, 0.0)
        }))
    }

    /// `[[A, B], [-conj(B), conj(A)]]` for `Y = A + B j`.
    pub fn complexify(&self) -> Self {
        let (n, m) = (self.rows, self.cols);
        DenseMatrix::from_fn(Field::C, 2 * n, 2 * m, |i, j| {
            let q = self.get(i % n, j % m);
            let (a, b) = (q.complex_part(), q.j_part());
            let v = match (i < n, j < m) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => -b.conj(),
                (false, false) => a.conj(),
            };
            Quaternion::from_complex(v)
        })
    }

    /// Inverse of `complexify`. Averages the redundant blocks.
    pub fn decomplexify(&self) -> Result<Self> {
        if self.field == Field::H || !self.rows.is_multiple_of(2) || !self.cols.is_multiple_of(2) {
            return Err(Error::ShapeMismatch("decomplexify expects an even complex matrix".into()));
        }
        let (n, m) = (self.rows / 2, self.cols / 2);
        Ok(DenseMatrix::from_fn(Field::H, n, m, |i, j| {
            let a = (self.get(i, j).complex_part() + self.get(i + n, j + m).complex_part().conj()) * 0.5;
            let b = (self.get(i, j + m).complex_part() - self.get(i + n, j).complex_part().conj()) * 0.5;
            Quaternion::from_pair(a, b)
        }))
    }

    /// Distance of an even complex matrix from the image of `complexify`,
    /// i.e. `||-J conj(M) J - M||`.
    pub fn complex_structure_defect(&self) -> f64 {
        let (n, m) = (self.rows / 2, self.cols / 2);
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..m {
                let a = self.get(i, j).complex_part();
                let b = self.get(i, j + m).complex_part();
                let c = self.get(i + n, j).complex_part();
                let d = self.get(i + n, j + m).complex_part();
                acc += 2.0 * ((a - d.conj()).norm_sqr() + (b + c.conj()).norm_sqr());
            }
        }
        acc.sqrt()
    }

    /// Distance of an even real matrix from the image of `realify`,
    /// i.e. `||-J M J - M||`.
    pub fn real_structure_defect(&self) -> f64 {
        let (n, m) = (self.rows / 2, self.cols / 2);
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..m {
                let a = self.get(i, j).w;
                let b = self.get(i, j + m).w;
                let c = self.get(i + n, j).w;
                let d = self.get(i + n, j + m).w;
                acc += 2.0 * ((a - d).powi(2) + (b + c).powi(2));
            }
        }
        acc.sqrt()
    }
}

fn field_of(q: Quaternion) -> Field {
    if q.is_real() {
        Field::R
    } else if q.is_complex() {
        Field::C
    } else {
        Field::H
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, o: &DenseMatrix) -> DenseMatrix {
        self.try_mul(o).expect("matrix product shape mismatch")
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, o: &DenseMatrix) -> DenseMatrix {
        self.try_add(o).expect("matrix sum shape mismatch")
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, o: &DenseMatrix) -> DenseMatrix {
        self.try_sub(o).expect("matrix difference shape mismatch")
    }
}

impl Neg for &DenseMatrix {
    type Output = DenseMatrix;
    fn neg(self) -> DenseMatrix {
        self.map(|q| -q)
    }
}

/// `I_{p,q} = diag(I_p, -I_q)`.
pub fn signature(field: Field, p: usize, q: usize) -> DenseMatrix {
    let d: Vec<f64> = (0..p + q).map(|i| if i < p { 1.0 } else { -1.0 }).collect();
    DenseMatrix::diag_real(field, &d)
}

/// `J_n = [[0, I_n], [-I_n, 0]]`.
pub fn symplectic_j(field: Field, n: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(field, 2 * n, 2 * n);
    for i in 0..n {
        m.set(i, n + i, Quaternion::ONE);
        m.set(n + i, i, -Quaternion::ONE);
    }
    m
}

/// The exchange matrix with ones on the anti-diagonal.
pub fn exchange(field: Field, n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(field, n, n, |i, j| if i + j + 1 == n { Quaternion::ONE } else { Quaternion::ZERO })
}
