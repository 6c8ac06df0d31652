//! Matrices over field scalars and over polynomials.
//!
//! Both kinds are dense row-major with all entries in one field and
//! positive dimensions. Scalar matrices use ordinary Gaussian elimination;
//! polynomial matrices use fraction-free (Bareiss) elimination so every
//! intermediate stays in the polynomial ring. Column subsets in minor
//! lists are enumerated in lexicographic order on strictly increasing
//! index tuples, and reduced-echelon pivot columns are reported with
//! columns numbered from 1.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::{Degree, Poly};
use std::fmt;

/// A matrix of field scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct ConstMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ConstMatrix {
    pub fn from_fn<F: FnMut(usize, usize) -> Scalar>(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> ConstMatrix {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert!(e.field() == field, "entry from {}", e.field());
                entries.push(e);
            }
        }
        ConstMatrix {
            field: field.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Result<ConstMatrix> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        for r in &rows {
            for e in r {
                if e.field() != field {
                    return Err(Error::FieldMismatch(
                        field.spec_string(),
                        e.field().spec_string(),
                    ));
                }
            }
        }
        let nrows = rows.len();
        let entries: Vec<Scalar> = rows.into_iter().flatten().collect();
        Ok(ConstMatrix {
            field: field.clone(),
            rows: nrows,
            cols,
            entries,
        })
    }

    /// Embeds small integers; convenient in tests.
    pub fn from_int_rows(field: &Field, rows: &[&[i64]]) -> ConstMatrix {
        ConstMatrix::from_fn(field, rows.len(), rows[0].len(), |i, j| {
            assert_eq!(rows[i].len(), rows[0].len(), "ragged rows");
            field.embed_int(rows[i][j])
        })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> ConstMatrix {
        ConstMatrix::from_fn(field, rows, cols, |_, _| field.zero())
    }

    pub fn identity(field: &Field, n: usize) -> ConstMatrix {
        ConstMatrix::from_fn(
            field,
            n,
            n,
            |i, j| {
                if i == j {
                    field.one()
                } else {
                    field.zero()
                }
            },
        )
    }

    pub fn random<R: rand::Rng>(
        field: &Field,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> ConstMatrix {
        ConstMatrix::from_fn(field, rows, cols, |_, _| field.random_scalar(rng))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(v.field() == &self.field, "entry from {}", v.field());
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> ConstMatrix {
        ConstMatrix::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn add(&self, other: &ConstMatrix) -> ConstMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ConstMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).add(other.get(i, j))
        })
    }

    pub fn sub(&self, other: &ConstMatrix) -> ConstMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ConstMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).sub(other.get(i, j))
        })
    }

    pub fn neg(&self) -> ConstMatrix {
        ConstMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).neg()
        })
    }

    pub fn mul(&self, other: &ConstMatrix) -> ConstMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        ConstMatrix::from_fn(&self.field, self.rows, other.cols, |i, j| {
            let mut acc = self.field.zero();
            for t in 0..self.cols {
                acc = acc.add(&self.get(i, t).mul(other.get(t, j)));
            }
            acc
        })
    }

    /// Matrix-vector product, returned as a plain coefficient vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length differs from cols");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (t, x) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, t).mul(x));
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &Scalar) -> ConstMatrix {
        ConstMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).mul(c)
        })
    }

    pub fn hstack(&self, other: &ConstMatrix) -> ConstMatrix {
        assert_eq!(self.rows, other.rows, "row counts differ");
        ConstMatrix::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &ConstMatrix) -> ConstMatrix {
        assert_eq!(self.cols, other.cols, "column counts differ");
        ConstMatrix::from_fn(&self.field, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> ConstMatrix {
        ConstMatrix::from_fn(&self.field, row_idx.len(), col_idx.len(), |i, j| {
            self.get(row_idx[i], col_idx[j]).clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Determinant by Gaussian elimination with row pivoting.
    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::NonSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut w: Vec<Vec<Scalar>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut acc = self.field.one();
        for k in 0..n {
            let pivot = match (k..n).find(|&i| !w[i][k].is_zero()) {
                Some(i) => i,
                None => return Ok(self.field.zero()),
            };
            if pivot != k {
                w.swap(k, pivot);
                acc = acc.neg();
            }
            acc = acc.mul(&w[k][k]);
            let inv = w[k][k].inv().expect("pivot is nonzero");
            for i in k + 1..n {
                if w[i][k].is_zero() {
                    continue;
                }
                let factor = w[i][k].mul(&inv);
                for j in k..n {
                    let delta = factor.mul(&w[k][j]);
                    w[i][j] = w[i][j].sub(&delta);
                }
            }
        }
        Ok(acc)
    }

    /// Determinant by first-row cofactor expansion. Exponential; used as
    /// an independent cross-check for small sizes.
    pub fn det_cofactor(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::NonSquare(self.rows, self.cols));
        }
        fn go(m: &ConstMatrix, rows: &[usize], cols: &[usize]) -> Scalar {
            if rows.len() == 1 {
                return m.get(rows[0], cols[0]).clone();
            }
            let mut acc = m.field.zero();
            for (t, &c) in cols.iter().enumerate() {
                let a = m.get(rows[0], c);
                if a.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let sub = go(m, &rows[1..], &rest);
                let term = a.mul(&sub);
                acc = if t % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
        let all: Vec<usize> = (0..self.rows).collect();
        Ok(go(self, &all, &all))
    }

    /// Reduced row echelon form. Returns (R, rank, pivot columns) with
    /// pivot columns numbered from 1.
    pub fn rref(&self) -> (ConstMatrix, usize, Vec<usize>) {
        let mut w: Vec<Vec<Scalar>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| !w[i][c].is_zero()) else {
                continue;
            };
            w.swap(r, pr);
            let inv = w[r][c].inv().expect("pivot is nonzero");
            for j in c..self.cols {
                w[r][j] = w[r][j].mul(&inv);
            }
            for i in 0..self.rows {
                if i == r || w[i][c].is_zero() {
                    continue;
                }
                let factor = w[i][c].clone();
                for j in c..self.cols {
                    let delta = factor.mul(&w[r][j]);
                    w[i][j] = w[i][j].sub(&delta);
                }
            }
            pivots.push(c + 1);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        let m = ConstMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| w[i][j].clone());
        (m, pivots.len(), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Basis of the right kernel {v : Mv = 0}, one vector per free
    /// column, ordered by free column index.
    pub fn right_nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, _, pivots1) = self.rref();
        let pivots0: Vec<usize> = pivots1.iter().map(|p| p - 1).collect();
        let mut out = Vec::new();
        for f in 0..self.cols {
            if pivots0.contains(&f) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (i, &p) in pivots0.iter().enumerate() {
                v[p] = r.get(i, f).neg();
            }
            out.push(v);
        }
        out
    }

    /// One solution of Mx = b with free variables set to zero, or None if
    /// the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{} equations, {} right-hand entries",
                self.rows,
                b.len()
            )));
        }
        let rhs = ConstMatrix::from_fn(&self.field, self.rows, 1, |i, _| b[i].clone());
        let aug = self.hstack(&rhs);
        let (r, _, pivots1) = aug.rref();
        if pivots1.contains(&(self.cols + 1)) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &p1) in pivots1.iter().enumerate() {
            x[p1 - 1] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<ConstMatrix> {
        if self.rows != self.cols {
            return Err(Error::NonSquare(self.rows, self.cols));
        }
        let aug = self.hstack(&ConstMatrix::identity(&self.field, self.rows));
        let (r, _, pivots) = aug.rref();
        // Invertible iff every pivot lands in the left block.
        if pivots.len() != self.rows || pivots[self.rows - 1] > self.cols {
            return Err(Error::ZeroDeterminant);
        }
        let idx: Vec<usize> = (self.cols..2 * self.cols).collect();
        let all: Vec<usize> = (0..self.rows).collect();
        Ok(r.submatrix(&all, &idx))
    }

    /// Determinants of all rows×rows column selections, in lexicographic
    /// order on the column subsets.
    pub fn maximal_minors(&self) -> Result<Vec<Scalar>> {
        if self.rows > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is taller than wide",
                self.rows, self.cols
            )));
        }
        let all_rows: Vec<usize> = (0..self.rows).collect();
        lex_subsets(self.cols, self.rows)
            .iter()
            .map(|cols| self.submatrix(&all_rows, cols).det())
            .collect()
    }

    pub fn to_poly(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            Poly::constant(self.get(i, j).clone())
        })
    }
}

impl fmt::Display for ConstMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(Scalar::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ConstMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{} over {}\n{}",
            self.rows, self.cols, self.field, self
        )
    }
}

/// A matrix of polynomials.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn from_fn<F: FnMut(usize, usize) -> Poly>(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> PolyMatrix {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert!(e.field() == field, "entry from {}", e.field());
                entries.push(e);
            }
        }
        PolyMatrix {
            field: field.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Poly>>) -> Result<PolyMatrix> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        for r in &rows {
            for e in r {
                if e.field() != field {
                    return Err(Error::FieldMismatch(
                        field.spec_string(),
                        e.field().spec_string(),
                    ));
                }
            }
        }
        let nrows = rows.len();
        let entries: Vec<Poly> = rows.into_iter().flatten().collect();
        Ok(PolyMatrix {
            field: field.clone(),
            rows: nrows,
            cols,
            entries,
        })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix::from_fn(field, rows, cols, |_, _| Poly::zero(field))
    }

    pub fn identity(field: &Field, n: usize) -> PolyMatrix {
        PolyMatrix::from_fn(field, n, n, |i, j| {
            if i == j {
                Poly::one(field)
            } else {
                Poly::zero(field)
            }
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        assert!(v.field() == &self.field, "entry from {}", v.field());
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).add(other.get(i, j))
        })
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).sub(other.get(i, j))
        })
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        PolyMatrix::from_fn(&self.field, self.rows, other.cols, |i, j| {
            let mut acc = Poly::zero(&self.field);
            for t in 0..self.cols {
                acc = acc.add(&self.get(i, t).mul(other.get(t, j)));
            }
            acc
        })
    }

    pub fn scale_poly(&self, p: &Poly) -> PolyMatrix {
        PolyMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).mul(p)
        })
    }

    pub fn scale(&self, c: &Scalar) -> PolyMatrix {
        PolyMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).scale(c)
        })
    }

    pub fn hstack(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.rows, other.rows, "row counts differ");
        PolyMatrix::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.cols, "column counts differ");
        PolyMatrix::from_fn(&self.field, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(&self.field, row_idx.len(), col_idx.len(), |i, j| {
            self.get(row_idx[i], col_idx[j]).clone()
        })
    }

    pub fn columns(&self, col_idx: &[usize]) -> PolyMatrix {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, col_idx)
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn eval_at(&self, x: &Scalar) -> ConstMatrix {
        ConstMatrix::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).eval(x)
        })
    }

    pub fn max_entry_degree(&self) -> Degree {
        self.entries
            .iter()
            .map(Poly::degree)
            .max()
            .unwrap_or(Degree::NegInf)
    }

    /// Determinant by fraction-free elimination with row pivoting; every
    /// division is exact in the polynomial ring.
    pub fn det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::NonSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(self.get(0, 0).clone());
        }
        let mut w: Vec<Vec<Poly>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = Poly::one(&self.field);
        for k in 0..n - 1 {
            if w[k][k].is_zero() {
                let Some(pivot) = (k + 1..n).find(|&i| !w[i][k].is_zero()) else {
                    return Ok(Poly::zero(&self.field));
                };
                w.swap(k, pivot);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = w[k][k].mul(&w[i][j]).sub(&w[i][k].mul(&w[k][j]));
                    w[i][j] = num.div_exact(&prev)?;
                }
                w[i][k] = Poly::zero(&self.field);
            }
            prev = w[k][k].clone();
        }
        let d = w[n - 1][n - 1].clone();
        Ok(if negate { d.neg() } else { d })
    }

    /// Determinant by first-row cofactor expansion; exponential, used as
    /// an independent cross-check for small sizes.
    pub fn det_cofactor(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::NonSquare(self.rows, self.cols));
        }
        fn go(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Poly {
            if rows.len() == 1 {
                return m.get(rows[0], cols[0]).clone();
            }
            let mut acc = Poly::zero(&m.field);
            for (t, &c) in cols.iter().enumerate() {
                let a = m.get(rows[0], c);
                if a.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let sub = go(m, &rows[1..], &rest);
                let term = a.mul(&sub);
                acc = if t % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
        let all: Vec<usize> = (0..self.rows).collect();
        Ok(go(self, &all, &all))
    }

    /// Adjugate via signed cofactors; satisfies M·adj(M) = det(M)·I.
    pub fn adjugate(&self) -> Result<PolyMatrix> {
        if self.rows != self.cols {
            return Err(Error::NonSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(PolyMatrix::identity(&self.field, 1));
        }
        let mut adj = PolyMatrix::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = self.submatrix(&rows, &cols).det()?;
                let signed = if (i + j) % 2 == 0 { minor } else { minor.neg() };
                adj.set(j, i, signed);
            }
        }
        Ok(adj)
    }

    /// Rank over the rational function field, by fraction-free
    /// elimination with column skipping.
    pub fn rank(&self) -> usize {
        let mut w: Vec<Vec<Poly>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut prev = Poly::one(&self.field);
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !w[i][c].is_zero()) else {
                continue;
            };
            w.swap(r, pr);
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let num = w[r][c].mul(&w[i][j]).sub(&w[i][c].mul(&w[r][j]));
                    w[i][j] = num.div_exact(&prev).expect("fraction-free step is exact");
                }
                w[i][c] = Poly::zero(&self.field);
            }
            prev = w[r][c].clone();
            r += 1;
        }
        r
    }

    /// Determinants of all rows×rows column selections, in lexicographic
    /// order on the column subsets.
    pub fn maximal_minors(&self) -> Result<Vec<Poly>> {
        if self.rows > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is taller than wide",
                self.rows, self.cols
            )));
        }
        lex_subsets(self.cols, self.rows)
            .iter()
            .map(|cols| self.columns(cols).det())
            .collect()
    }

    /// Left prime iff the greatest common divisor of all maximal minors
    /// is a nonzero constant.
    pub fn is_left_prime(&self) -> Result<bool> {
        let minors = self.maximal_minors()?;
        let mut g = Poly::zero(&self.field);
        for m in &minors {
            g = g.gcd(m);
        }
        Ok(g.degree() == Degree::Of(0))
    }

    /// Largest degree among the maximal minors; the degree sentinel when
    /// the matrix is rank deficient.
    pub fn system_degree(&self) -> Result<Degree> {
        let minors = self.maximal_minors()?;
        Ok(minors
            .iter()
            .map(Poly::degree)
            .max()
            .unwrap_or(Degree::NegInf))
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(Poly::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{} over {}\n{}",
            self.rows, self.cols, self.field, self
        )
    }
}

/// All k-subsets of {0..n-1} in lexicographic order.
pub(crate) fn lex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(k <= n);
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k == 0 {
        return vec![vec![]];
    }
    loop {
        out.push(cur.clone());
        // Advance the rightmost index that still has room.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// The polynomial matrix sI - A.
pub fn si_minus_a(a: &ConstMatrix) -> Result<PolyMatrix> {
    if a.rows() != a.cols() {
        return Err(Error::NonSquare(a.rows(), a.cols()));
    }
    let field = a.field().clone();
    Ok(PolyMatrix::from_fn(&field, a.rows(), a.cols(), |i, j| {
        let diag = if i == j {
            Poly::var(&field)
        } else {
            Poly::zero(&field)
        };
        diag.sub(&Poly::constant(a.get(i, j).clone()))
    }))
}

/// Determinant of the square stack [[K],[M]] with the scalar matrix K on
/// top of the polynomial matrix M.
pub fn stacked_det(k: &ConstMatrix, m: &PolyMatrix) -> Result<Poly> {
    if k.cols() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {} columns",
            k.cols(),
            m.cols()
        )));
    }
    if k.rows() + m.rows() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "stack is {}x{}",
            k.rows() + m.rows(),
            m.cols()
        )));
    }
    if k.field() != m.field() {
        return Err(Error::FieldMismatch(
            k.field().spec_string(),
            m.field().spec_string(),
        ));
    }
    k.to_poly().vstack(m).det()
}

/// Row space of flattened coefficient vectors kept in reduced echelon
/// form; insert reports whether the vector enlarged the space.
struct RowSpace {
    field: Field,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    fn new(field: &Field) -> RowSpace {
        RowSpace {
            field: field.clone(),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, y) in v.iter_mut().zip(row.iter()) {
                *x = x.sub(&factor.mul(y));
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("pivot is nonzero");
        for x in v.iter_mut() {
            *x = x.mul(&inv);
        }
        // Keep older rows reduced at the new pivot so that a single
        // reduction pass stays complete.
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (x, y) in row.iter_mut().zip(v.iter()) {
                *x = x.sub(&factor.mul(y));
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        let _ = &self.field;
        true
    }
}

/// Minimal left kernel basis of a tall polynomial matrix T with more rows
/// than columns and full column rank: returns B with B·T = 0, rows of
/// minimal degree found by an ascending degree sweep, and a full-rank
/// leading row coefficient matrix. Rows are ordered by degree of
/// discovery and scaled so the leading coefficient of the first nonzero
/// entry is 1. The sweep is bounded by the column count; exhausting the
/// bound reports DegreeBoundExceeded.
pub fn left_kernel_min_basis(t: &PolyMatrix) -> Result<PolyMatrix> {
    let field = t.field().clone();
    let (rows, cols) = (t.rows(), t.cols());
    if rows <= cols {
        return Err(Error::DimensionMismatch(format!(
            "{rows}x{cols} has no guaranteed left kernel"
        )));
    }
    let target = rows - cols;
    let bound = cols;
    let maxdeg = t.max_entry_degree().finite().unwrap_or(0);
    let mut basis: Vec<(usize, Vec<Poly>)> = Vec::new();

    for d in 0..=bound {
        // Span of everything the current basis reaches at degree <= d,
        // flattened as coefficient vectors (entry i, power e) -> i*(d+1)+e.
        let width = rows * (d + 1);
        let mut seen = RowSpace::new(&field);
        for (bd, brow) in &basis {
            for shift in 0..=(d - bd) {
                let mut flat = vec![field.zero(); width];
                for (i, poly) in brow.iter().enumerate() {
                    for (e, c) in poly.coeffs().iter().enumerate() {
                        flat[i * (d + 1) + e + shift] = c.clone();
                    }
                }
                seen.insert(flat);
            }
        }

        // Coefficient-matching system for v·T = 0 with deg(v_i) <= d.
        let unknowns = rows * (d + 1);
        let eqs = cols * (d + maxdeg + 1);
        let a = ConstMatrix::from_fn(&field, eqs, unknowns, |eq, un| {
            let (j, tdeg) = (eq / (d + maxdeg + 1), eq % (d + maxdeg + 1));
            let (i, e) = (un / (d + 1), un % (d + 1));
            if tdeg >= e {
                t.get(i, j).coeff(tdeg - e)
            } else {
                field.zero()
            }
        });
        for cand in a.right_nullspace() {
            let row: Vec<Poly> = (0..rows)
                .map(|i| Poly::from_coeffs(&field, cand[i * (d + 1)..(i + 1) * (d + 1)].to_vec()))
                .collect();
            let flat: Vec<Scalar> = cand.clone();
            if seen.insert(flat) {
                basis.push((d, row));
                if basis.len() == target {
                    break;
                }
            }
        }
        if basis.len() == target {
            break;
        }
    }

    if basis.len() < target {
        return Err(Error::DegreeBoundExceeded(bound));
    }
    // Normalize each row so the leading coefficient of its first nonzero
    // entry is 1, making the basis deterministic.
    let rows: Vec<Vec<Poly>> = basis
        .into_iter()
        .map(|(_, row)| {
            let lead = row
                .iter()
                .find(|p| !p.is_zero())
                .and_then(|p| p.leading_coeff().cloned())
                .expect("basis row is nonzero");
            let inv = lead.inv().expect("leading coefficient is nonzero");
            row.iter().map(|p| p.scale(&inv)).collect()
        })
        .collect();
    let b = PolyMatrix::from_rows(&field, rows)?;
    if !b.mul(t).is_zero() {
        return Err(Error::Internal("kernel basis fails to annihilate".into()));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(q: u64) -> Field {
        Field::finite(q).unwrap()
    }

    fn pm(field: &Field, rows: &[&[&[i64]]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            field,
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|coeffs| Poly::from_int_coeffs(field, coeffs))
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn const_det_examples() {
        let q = Field::rationals();
        assert_eq!(ConstMatrix::identity(&q, 3).det().unwrap(), q.one());
        let m = ConstMatrix::from_int_rows(&q, &[&[1, 2], &[3, 4]]);
        assert_eq!(m.det().unwrap(), q.embed_int(-2));
        assert!(matches!(
            ConstMatrix::zeros(&q, 2, 3).det(),
            Err(Error::NonSquare(2, 3))
        ));
    }

    #[test]
    fn const_det_matches_cofactor_exhaustively_2x2_f2() {
        let f2 = f(2);
        for bits in 0..16u32 {
            let m = ConstMatrix::from_fn(&f2, 2, 2, |i, j| {
                f2.embed_int(((bits >> (2 * i + j)) & 1) as i64)
            });
            assert_eq!(m.det().unwrap(), m.det_cofactor().unwrap());
        }
    }

    #[test]
    fn poly_det_examples() {
        let f3 = f(3);
        let m = pm(&f3, &[&[&[0, 1], &[1]], &[&[1], &[0, 1]]]);
        // det [[s,1],[1,s]] = s^2 - 1.
        assert_eq!(m.det().unwrap(), Poly::from_int_coeffs(&f3, &[-1, 0, 1]));
        assert_eq!(PolyMatrix::identity(&f3, 3).det().unwrap(), Poly::one(&f3));
        assert_eq!(m.det().unwrap(), m.det_cofactor().unwrap());
    }

    #[test]
    fn poly_det_matches_cofactor_on_random_4x4() {
        let f5 = f(5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = PolyMatrix::from_fn(&f5, 4, 4, |_, _| {
                let d = rng.gen_range(0..=2);
                let coeffs: Vec<Scalar> = (0..=d).map(|_| f5.random_scalar(&mut rng)).collect();
                Poly::from_coeffs(&f5, coeffs)
            });
            assert_eq!(m.det().unwrap(), m.det_cofactor().unwrap());
        }
    }

    #[test]
    fn rref_examples() {
        let q = Field::rationals();
        let m = ConstMatrix::from_int_rows(&q, &[&[0, 1], &[1, 0]]);
        let (r, rank, pivots) = m.rref();
        assert_eq!(r, ConstMatrix::identity(&q, 2));
        assert_eq!((rank, pivots), (2, vec![1, 2]));

        let f5 = f(5);
        let k = ConstMatrix::from_int_rows(&f5, &[&[0, 1, 2, 0], &[0, 0, 0, 1]]);
        let (_, rank, pivots) = k.rref();
        assert_eq!((rank, pivots), (2, vec![2, 4]));

        assert_eq!(ConstMatrix::zeros(&q, 3, 3).rank(), 0);
    }

    #[test]
    fn rref_is_idempotent() {
        let f7 = f(7);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let m = ConstMatrix::random(&f7, 3, 5, &mut rng);
            let (r, _, p) = m.rref();
            let (rr, _, pp) = r.rref();
            assert_eq!(r, rr);
            assert_eq!(p, pp);
        }
    }

    #[test]
    fn nullspace_solve_inverse() {
        let f7 = f(7);
        let m = ConstMatrix::from_int_rows(&f7, &[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.right_nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for i in 0..m.rows() {
                let mut acc = f7.zero();
                for j in 0..m.cols() {
                    acc = acc.add(&m.get(i, j).mul(&v[j]));
                }
                assert!(acc.is_zero());
            }
        }

        let a = ConstMatrix::from_int_rows(&f7, &[&[1, 1], &[0, 1]]);
        let x = a
            .solve(&[f7.embed_int(3), f7.embed_int(2)])
            .unwrap()
            .unwrap();
        assert_eq!(x, vec![f7.embed_int(1), f7.embed_int(2)]);
        let inconsistent = ConstMatrix::from_int_rows(&f7, &[&[1, 1], &[1, 1]]);
        assert_eq!(
            inconsistent
                .solve(&[f7.embed_int(0), f7.embed_int(1)])
                .unwrap(),
            None
        );

        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), ConstMatrix::identity(&f7, 2));
        let sing = ConstMatrix::from_int_rows(&f7, &[&[1, 1], &[1, 1]]);
        assert_eq!(sing.inverse(), Err(Error::ZeroDeterminant));
    }

    #[test]
    fn lex_subsets_order() {
        assert_eq!(
            lex_subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(lex_subsets(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn maximal_minors_of_monomial_example() {
        // [[1, 0, s^2, 2s^3], [0, 1, s, s^2]] over F_5: each minor is the
        // determinant of the chosen column pair, lex order.
        let f5 = f(5);
        let m = pm(
            &f5,
            &[
                &[&[1], &[0], &[0, 0, 1], &[0, 0, 0, 2]],
                &[&[0], &[1], &[0, 1], &[0, 0, 1]],
            ],
        );
        let minors = m.maximal_minors().unwrap();
        let expect = vec![
            Poly::from_int_coeffs(&f5, &[1]),
            Poly::from_int_coeffs(&f5, &[0, 1]),
            Poly::from_int_coeffs(&f5, &[0, 0, 1]),
            Poly::from_int_coeffs(&f5, &[0, 0, -1]),
            Poly::from_int_coeffs(&f5, &[0, 0, 0, -2]),
            Poly::from_int_coeffs(&f5, &[0, 0, 0, 0, -1]),
        ];
        assert_eq!(minors, expect);
    }

    #[test]
    fn maximal_minors_of_identity_block() {
        let f5 = f(5);
        let m = pm(&f5, &[&[&[1], &[0], &[0], &[0]], &[&[0], &[1], &[0], &[0]]]);
        let minors = m.maximal_minors().unwrap();
        assert_eq!(minors[0], Poly::one(&f5));
        assert!(minors[1..].iter().all(Poly::is_zero));
    }

    #[test]
    fn stacked_det_block_triangular() {
        let f3 = f(3);
        let k = ConstMatrix::from_int_rows(&f3, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let d = pm(&f3, &[&[&[0, 1], &[1]], &[&[0], &[0, 0, 1]]]);
        let m = PolyMatrix::zeros(&f3, 2, 2).hstack(&d);
        assert_eq!(stacked_det(&k, &m).unwrap(), d.det().unwrap());
    }

    #[test]
    fn stacked_det_of_degenerate_witness_is_zero() {
        // K = [[0,1,2,0],[0,0,0,1]] against [[1,s,s,s^2],[0,1,2,3s]]
        // over F_5 yields the zero polynomial.
        let f5 = f(5);
        let k = ConstMatrix::from_int_rows(&f5, &[&[0, 1, 2, 0], &[0, 0, 0, 1]]);
        let m = pm(
            &f5,
            &[
                &[&[1], &[0, 1], &[0, 1], &[0, 0, 1]],
                &[&[0], &[1], &[2], &[0, 3]],
            ],
        );
        assert!(stacked_det(&k, &m).unwrap().is_zero());
    }

    #[test]
    fn stacked_det_dimension_errors() {
        let f3 = f(3);
        let k = ConstMatrix::identity(&f3, 2);
        let m = PolyMatrix::identity(&f3, 3);
        assert!(matches!(
            stacked_det(&k, &m),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn adjugate_examples() {
        let q = Field::rationals();
        assert_eq!(
            PolyMatrix::identity(&q, 3).adjugate().unwrap(),
            PolyMatrix::identity(&q, 3)
        );
        let m = pm(&q, &[&[&[0, 1], &[1]], &[&[0], &[0, 1]]]);
        let adj = m.adjugate().unwrap();
        let expect = pm(&q, &[&[&[0, 1], &[-1]], &[&[0], &[0, 1]]]);
        assert_eq!(adj, expect);

        let f7 = f(7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let m = PolyMatrix::from_fn(&f7, 3, 3, |_, _| {
                let coeffs: Vec<Scalar> = (0..=1).map(|_| f7.random_scalar(&mut rng)).collect();
                Poly::from_coeffs(&f7, coeffs)
            });
            let adj = m.adjugate().unwrap();
            let det = m.det().unwrap();
            let mut det_i = PolyMatrix::zeros(&f7, 3, 3);
            for i in 0..3 {
                det_i.set(i, i, det.clone());
            }
            assert_eq!(m.mul(&adj), det_i);
        }
    }

    #[test]
    fn left_primeness_and_degree() {
        let f2 = f(2);
        // [sI_2 | -I_2].
        let si = si_minus_a(&ConstMatrix::zeros(&f2, 2, 2)).unwrap();
        let m = si.hstack(&PolyMatrix::identity(&f2, 2).scale(&f2.embed_int(-1)));
        assert!(m.is_left_prime().unwrap());
        assert_eq!(m.system_degree().unwrap(), Degree::Of(2));

        // [s I_2 | s I_2]: every minor divisible by s^2.
        let s_i = PolyMatrix::from_fn(&f2, 2, 2, |i, j| {
            if i == j {
                Poly::var(&f2)
            } else {
                Poly::zero(&f2)
            }
        });
        let bad = s_i.hstack(&s_i);
        assert!(!bad.is_left_prime().unwrap());
    }

    #[test]
    fn poly_rank_by_elimination() {
        let f5 = f(5);
        let m = pm(&f5, &[&[&[0, 1], &[0]], &[&[0], &[0]]]);
        assert_eq!(m.rank(), 1);
        let full = pm(&f5, &[&[&[0, 1], &[1]], &[&[1], &[0, 1]]]);
        assert_eq!(full.rank(), 2);
        // Rows proportional over the function field.
        let dep = pm(&f5, &[&[&[1], &[0, 1]], &[&[0, 1], &[0, 0, 1]]]);
        assert_eq!(dep.rank(), 1);
    }

    #[test]
    fn kernel_basis_of_simple_column() {
        let q = Field::rationals();
        let t = pm(&q, &[&[&[0, 1]], &[&[1]]]);
        let b = left_kernel_min_basis(&t).unwrap();
        assert_eq!((b.rows(), b.cols()), (1, 2));
        assert_eq!(b.get(0, 0), &Poly::one(&q));
        assert_eq!(b.get(0, 1), &Poly::from_int_coeffs(&q, &[0, -1]));
    }

    #[test]
    fn kernel_basis_of_observable_shift_pair() {
        // T = [[sI - A], [C]] for the 2-state shift with C = [1 0]: one
        // kernel row of degree 2 whose last entry is a degree-2 monomial.
        let q = Field::rationals();
        let a = ConstMatrix::from_int_rows(&q, &[&[0, 1], &[0, 0]]);
        let c = ConstMatrix::from_int_rows(&q, &[&[1, 0]]);
        let t = si_minus_a(&a).unwrap().vstack(&c.to_poly());
        let b = left_kernel_min_basis(&t).unwrap();
        assert_eq!((b.rows(), b.cols()), (1, 3));
        assert!(b.mul(&t).is_zero());
        let row_deg = (0..3).map(|j| b.get(0, j).degree()).max().unwrap();
        assert_eq!(row_deg, Degree::Of(2));
        let d_part = b.get(0, 2);
        assert_eq!(d_part.degree(), Degree::Of(2));
        assert_eq!(d_part.coeff(0), q.zero());
        assert_eq!(d_part.coeff(1), q.zero());
    }

    #[test]
    fn kernel_basis_rows_sum_to_state_dimension() {
        // Observable pairs: kernel row degrees sum to n and the leading
        // row coefficient matrix has full rank.
        let f5 = f(5);
        let a = ConstMatrix::from_int_rows(&f5, &[&[0, 1, 0], &[0, 0, 1], &[1, 2, 3]]);
        let c = ConstMatrix::from_int_rows(&f5, &[&[1, 0, 0], &[0, 0, 1]]);
        let t = si_minus_a(&a).unwrap().vstack(&c.to_poly());
        let b = left_kernel_min_basis(&t).unwrap();
        assert_eq!(b.rows(), 2);
        assert!(b.mul(&t).is_zero());
        let degs: Vec<usize> = (0..b.rows())
            .map(|i| {
                (0..b.cols())
                    .map(|j| b.get(i, j).degree())
                    .max()
                    .unwrap()
                    .finite()
                    .unwrap()
            })
            .collect();
        assert_eq!(degs.iter().sum::<usize>(), 3);
        let lead = ConstMatrix::from_fn(&f5, b.rows(), b.cols(), |i, j| b.get(i, j).coeff(degs[i]));
        assert_eq!(lead.rank(), b.rows());
    }

    #[test]
    fn si_minus_a_shape() {
        let f3 = f(3);
        let a = ConstMatrix::from_int_rows(&f3, &[&[1, 2], &[0, 1]]);
        let m = si_minus_a(&a).unwrap();
        assert_eq!(m.get(0, 0), &Poly::from_int_coeffs(&f3, &[-1, 1]));
        assert_eq!(m.get(0, 1), &Poly::from_int_coeffs(&f3, &[-2]));
        assert_eq!(m.det().unwrap(), Poly::from_int_coeffs(&f3, &[1, -2, 1]));
    }

    #[test]
    fn laplace_expansion_matches_direct_determinant() {
        // stacked_det(K, M) = sum over column pairs beta of
        // sign(beta) * minor_beta(K) * minor_complement(M), with
        // sign(beta) = (-1)^(m(m+1)/2 + sum beta) on 1-based columns.
        let f7 = f(7);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..25 {
            let k = ConstMatrix::random(&f7, 2, 4, &mut rng);
            let m = PolyMatrix::from_fn(&f7, 2, 4, |_, _| {
                let coeffs: Vec<Scalar> = (0..=1).map(|_| f7.random_scalar(&mut rng)).collect();
                Poly::from_coeffs(&f7, coeffs)
            });
            let direct = stacked_det(&k, &m).unwrap();
            let k_minors = k.maximal_minors().unwrap();
            let m_minors = m.maximal_minors().unwrap();
            let subsets = lex_subsets(4, 2);
            let mut expansion = Poly::zero(&f7);
            for (b_rank, beta) in subsets.iter().enumerate() {
                let comp: Vec<usize> = (0..4).filter(|x| !beta.contains(x)).collect();
                let c_rank = subsets.iter().position(|s| *s == comp).unwrap();
                let sum_beta: usize = beta.iter().map(|x| x + 1).sum();
                let exp = 3 + sum_beta;
                let term = m_minors[c_rank].scale(&k_minors[b_rank]);
                expansion = if exp % 2 == 0 {
                    expansion.add(&term)
                } else {
                    expansion.sub(&term)
                };
            }
            assert_eq!(direct, expansion);
        }
    }
}
