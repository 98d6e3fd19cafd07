//! Integer matrices, Smith normal form and abelian groups.
//!
//! Entries are arbitrary precision: elimination on exponent matrices of
//! modest size can still blow past machine words.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::presentation::GroupPresentation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds from rows; every row must have `cols` entries.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|v| i64::try_from(v).ok())
                    .collect()
            })
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(source, j)] * factor;
            self[(target, j)] += v;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, source)] * factor;
            self[(i, target)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// `N = U * A * V` with `N` diagonal, `diag[i] | diag[i+1]` over the nonzero
/// prefix. `U` and `V` are present only when requested.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub left: Option<IntMatrix>,
    pub right: Option<IntMatrix>,
}

impl SnfResult {
    /// Invariant factors different from 1, i.e. the torsion part.
    pub fn nonunit_factors(&self) -> Vec<BigInt> {
        self.diag
            .iter()
            .take(self.rank)
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Smith normal form by repeated smallest-pivot elimination.
///
/// Pivot: nonzero entry of least absolute value in the trailing block, ties
/// broken row-major.
pub fn smith_normal_form(a: &IntMatrix, want_transforms: bool) -> SnfResult {
    let (rows, cols) = (a.rows, a.cols);
    let mut m = a.clone();
    let mut left = want_transforms.then(|| IntMatrix::identity(rows));
    let mut right = want_transforms.then(|| IntMatrix::identity(cols));
    let mut rank = 0;

    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = find_pivot(&m, k) else {
            break;
        };
        m.swap_rows(k, pi);
        m.swap_cols(k, pj);
        if let Some(u) = left.as_mut() {
            u.swap_rows(k, pi);
        }
        if let Some(v) = right.as_mut() {
            v.swap_cols(k, pj);
        }

        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let q = -m[(i, k)].div_floor(&m[(k, k)]);
                m.add_row_multiple(i, k, &q);
                if let Some(u) = left.as_mut() {
                    u.add_row_multiple(i, k, &q);
                }
                dirty |= !m[(i, k)].is_zero();
            }
            for j in k + 1..cols {
                if m[(k, j)].is_zero() {
                    continue;
                }
                let q = -m[(k, j)].div_floor(&m[(k, k)]);
                m.add_col_multiple(j, k, &q);
                if let Some(v) = right.as_mut() {
                    v.add_col_multiple(j, k, &q);
                }
                dirty |= !m[(k, j)].is_zero();
            }
            if dirty {
                // a remainder smaller than the pivot survived; re-pivot
                let (pi, pj) = find_pivot(&m, k).expect("nonzero remainder exists");
                m.swap_rows(k, pi);
                m.swap_cols(k, pj);
                if let Some(u) = left.as_mut() {
                    u.swap_rows(k, pi);
                }
                if let Some(v) = right.as_mut() {
                    v.swap_cols(k, pj);
                }
                continue;
            }
            // row and column are clear; enforce divisibility on the block
            let pivot = m[(k, k)].clone();
            let offender = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[(i, j)].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    m.add_row_multiple(k, i, &one);
                    if let Some(u) = left.as_mut() {
                        u.add_row_multiple(k, i, &one);
                    }
                }
                None => break,
            }
        }

        if m[(k, k)].is_negative() {
            m.negate_row(k);
            if let Some(u) = left.as_mut() {
                u.negate_row(k);
            }
        }
        rank += 1;
    }

    let diag = (0..rows.min(cols)).map(|i| m[(i, i)].clone()).collect();
    SnfResult {
        diag,
        rank,
        left,
        right,
    }
}

fn find_pivot(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..m.rows {
        for j in k..m.cols {
            let v = &m[(i, j)];
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m[(bi, bj)].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// `Z^free_rank + Z/torsion[0] + ...` with the torsion factors forming a
/// divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        AbelianGroup { free_rank, torsion }
    }

    /// `Z`, a finite cyclic group, or trivial.
    pub fn is_cyclic(&self) -> bool {
        match self.free_rank {
            0 => self.torsion.len() <= 1,
            1 => self.torsion.is_empty(),
            _ => false,
        }
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn is_cyclic(g: &AbelianGroup) -> bool {
    g.is_cyclic()
}

pub fn abelianization(pres: &GroupPresentation) -> AbelianGroup {
    let a = pres.exponent_matrix();
    let snf = smith_normal_form(&a, false);
    AbelianGroup::new(pres.generator_count() - snf.rank, snf.nonunit_factors())
}

/// The abelianization together with the image of every generator, in
/// coordinates `(torsion components..., free components...)`. Torsion
/// coordinates are reduced into `[0, d)`.
#[derive(Debug, Clone)]
pub struct AbelianQuotient {
    pub group: AbelianGroup,
    pub images: Vec<Vec<BigInt>>,
}

pub fn abelianization_map(pres: &GroupPresentation) -> AbelianQuotient {
    let g = pres.generator_count();
    let a = pres.exponent_matrix();
    let snf = smith_normal_form(&a, true);
    let v = snf.right.as_ref().expect("transforms requested");
    // column i of N carries diag[i] for i < rank, and a free Z beyond it
    let mut torsion_cols = Vec::new();
    for (i, d) in snf.diag.iter().enumerate().take(snf.rank) {
        if !d.is_one() {
            torsion_cols.push((i, d.clone()));
        }
    }
    let free_cols: Vec<usize> = (snf.rank..g).collect();
    let images = (0..g)
        .map(|k| {
            let mut coords: Vec<BigInt> = torsion_cols
                .iter()
                .map(|(i, d)| v[(k, *i)].mod_floor(d))
                .collect();
            coords.extend(free_cols.iter().map(|&i| v[(k, i)].clone()));
            coords
        })
        .collect();
    AbelianQuotient {
        group: AbelianGroup::new(free_cols.len(), torsion_cols.into_iter().map(|(_, d)| d).collect()),
        images,
    }
}

/// `l^r` with `l` the longest relator (at least 1) and `r` the relator
/// count; bounds the torsion order of the abelianization by Hadamard's
/// inequality.
pub fn hadamard_torsion_bound(pres: &GroupPresentation) -> BigUint {
    let l = pres.relators().iter().map(|w| w.len()).max().unwrap_or(0).max(1);
    let r = pres.relators().len();
    BigUint::from(l).pow(r as u32)
}
