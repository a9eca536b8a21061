//! First homology of the manifold presented by a Heegaard graph.
//!
//! Rows index generators `A_i` (one per 1-handle), columns index relators
//! `R_j` (one per 2-handle). All arithmetic is checked `i64`; overflow is an
//! error, never a wrong answer.

use std::fmt;

use thiserror::Error;

use crate::model::{HeegaardGraph, LinkDiagram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("no integral solution: the link class is not in the relator lattice")]
    NoIntegralSolution,
    #[error("solution set too large to search for a minimal representative ({0} candidates)")]
    SearchTooLarge(u128),
}

type Result<T> = std::result::Result<T, HomologyError>;

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(HomologyError::Overflow)
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(HomologyError::Overflow)
}

fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(HomologyError::Overflow)
}

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows.concat() }
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

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(HomologyError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0i64;
                for k in 0..self.cols {
                    acc = add(acc, mul(self.get(i, k), other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.cols {
            return Err(HomologyError::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        (0..self.rows).map(|i| (0..self.cols).try_fold(0i64, |acc, j| add(acc, mul(self.get(i, j), x[j])?))).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: i64) -> Result<()> {
        for j in 0..self.cols {
            let v = add(self.get(dst, j), mul(q, self.get(src, j))?)?;
            self.set(dst, j, v);
        }
        Ok(())
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: i64) -> Result<()> {
        for i in 0..self.rows {
            let v = add(self.get(i, dst), mul(q, self.get(i, src))?)?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<()> {
        for j in 0..self.cols {
            let v = self.get(i, j).checked_neg().ok_or(HomologyError::Overflow)?;
            self.set(i, j, v);
        }
        Ok(())
    }

    /// Fraction-free Gaussian elimination (Bareiss).
    pub fn determinant(&self) -> Result<i64> {
        if !self.is_square() {
            return Err(HomologyError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.clone();
        let mut sign = 1i64;
        let mut prev = 1i64;
        for k in 0..n - 1 {
            if a.get(k, k) == 0 {
                match (k + 1..n).find(|&i| a.get(i, k) != 0) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = sub(mul(a.get(i, j), a.get(k, k))?, mul(a.get(i, k), a.get(k, j))?)?;
                    a.set(i, j, num / prev);
                }
            }
            prev = a.get(k, k);
        }
        mul(sign, a.get(n - 1, n - 1))
    }
}

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, each nonzero
/// diagonal entry positive and dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<i64>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| **d != 0).count()
    }

    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.u.rows(), self.v.cols());
        for (k, x) in self.diagonal.iter().enumerate() {
            d.set(k, k, *x);
        }
        d
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = a.get(i, j).unsigned_abs();
                    if x != 0 && pivot.is_none_or(|(pi, pj)| x < a.get(pi, pj).unsigned_abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(a, u, v, v_inv);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let p = a.get(t, t);
            let mut clean = true;
            for i in t + 1..r {
                let q = a.get(i, t) / p;
                if q != 0 {
                    a.add_row(i, t, -q)?;
                    u.add_row(i, t, -q)?;
                }
                clean &= a.get(i, t) == 0;
            }
            for j in t + 1..c {
                let q = a.get(t, j) / p;
                if q != 0 {
                    a.add_col(j, t, -q)?;
                    v.add_col(j, t, -q)?;
                    v_inv.add_row(t, j, q)?;
                }
                clean &= a.get(t, j) == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| a.get(i, j) % p != 0));
            match offender {
                Some(i) => {
                    a.add_row(t, i, 1)?;
                    u.add_row(t, i, 1)?;
                }
                None => break,
            }
        }
        if a.get(t, t) < 0 {
            a.negate_row(t)?;
            u.negate_row(t)?;
        }
    }
    finish(a, u, v, v_inv)
}

fn finish(a: IntMatrix, u: IntMatrix, v: IntMatrix, v_inv: IntMatrix) -> Result<SmithForm> {
    let diagonal = (0..a.rows().min(a.cols())).map(|k| a.get(k, k)).collect();
    Ok(SmithForm { diagonal, u, v, v_inv })
}

/// `r[i][j]`: signed passes of the color-`j` cycle through handle `i`. An edge
/// whose head lies on `V_i^+` enters handle `i` positively.
pub fn relator_matrix(graph: &HeegaardGraph) -> IntMatrix {
    let g = graph.genus;
    let mut m = IntMatrix::zeros(g, g);
    for e in &graph.edges {
        let (i, j) = (e.head.vertex.handle - 1, e.color - 1);
        m.set(i, j, m.get(i, j) + e.head.vertex.side.pass_value());
    }
    m
}

/// Signed passage count of the whole link through each handle.
pub fn link_class(graph: &HeegaardGraph, diagram: &LinkDiagram) -> Vec<i64> {
    let mut class = vec![0; graph.genus];
    for p in &diagram.passages {
        class[p.from.vertex.handle - 1] += p.from.vertex.side.pass_value();
    }
    class
}

pub fn certify_homology_sphere(r: &IntMatrix) -> Result<bool> {
    Ok(r.determinant()?.abs() == 1)
}

/// Above this many lattice points the minimal-solution search gives up.
pub const SEARCH_LIMIT: u128 = 2_000_000;

/// Integer `x` with `r * x = l`. When the solution is not unique, the one
/// minimizing `sum |x_j|`, ties broken lexicographically.
pub fn solve_extension_coefficients(r: &IntMatrix, l: &[i64]) -> Result<Vec<i64>> {
    if l.len() != r.rows() {
        return Err(HomologyError::DimensionMismatch { expected: r.rows(), found: l.len() });
    }
    let snf = smith_normal_form(r)?;
    let rank = snf.rank();
    let ul = snf.u.mul_vec(l)?;
    let mut y = vec![0i64; r.cols()];
    for (k, b) in ul.iter().enumerate() {
        if k < rank {
            let d = snf.diagonal[k];
            if b % d != 0 {
                return Err(HomologyError::NoIntegralSolution);
            }
            y[k] = b / d;
        } else if *b != 0 {
            return Err(HomologyError::NoIntegralSolution);
        }
    }
    let x0 = snf.v.mul_vec(&y)?;
    if rank == r.cols() {
        return Ok(x0);
    }
    minimal_in_coset(&snf, rank, x0)
}

fn minimal_in_coset(snf: &SmithForm, rank: usize, x0: Vec<i64>) -> Result<Vec<i64>> {
    let n = x0.len();
    let norm0: i64 = x0.iter().try_fold(0i64, |acc, x| add(acc, x.abs()))?;
    if norm0 == 0 {
        return Ok(x0);
    }
    let kernel: Vec<Vec<i64>> = (rank..n).map(|k| snf.v.column(k)).collect();
    // Any x with |x|_1 <= |x0|_1 has kernel coordinates t_k = (V^-1 x)_k
    // bounded by max|V^-1 row k| * |x0|_1.
    let bounds: Vec<i64> = (rank..n)
        .map(|k| {
            let row_max = snf.v_inv.row(k).iter().map(|x| x.abs()).max().unwrap_or(0);
            mul(row_max, norm0)
        })
        .collect::<Result<_>>()?;
    let count = bounds.iter().fold(1u128, |acc, b| acc.saturating_mul(2 * *b as u128 + 1));
    if count > SEARCH_LIMIT {
        return Err(HomologyError::SearchTooLarge(count));
    }
    let mut t: Vec<i64> = bounds.iter().map(|b| -b).collect();
    let mut best: Option<(i64, Vec<i64>)> = None;
    loop {
        let mut x = x0.clone();
        for (tk, col) in t.iter().zip(&kernel) {
            for (xi, ci) in x.iter_mut().zip(col) {
                *xi = add(*xi, mul(*tk, *ci)?)?;
            }
        }
        let norm = x.iter().try_fold(0i64, |acc, v| add(acc, v.abs()))?;
        let better = match &best {
            None => true,
            Some((bn, bx)) => norm < *bn || (norm == *bn && x < *bx),
        };
        if better {
            best = Some((norm, x));
        }
        // odometer
        let mut k = 0;
        loop {
            if k == t.len() {
                return Ok(best.map(|b| b.1).unwrap_or(x0));
            }
            if t[k] < bounds[k] {
                t[k] += 1;
                break;
            }
            t[k] = -bounds[k];
            k += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyPresentation {
    pub generators: usize,
    pub relators: IntMatrix,
    pub determinant: i64,
    pub snf: Vec<i64>,
    pub is_zhs: bool,
}

impl HomologyPresentation {
    pub fn from_matrix(relators: IntMatrix) -> Result<Self> {
        let determinant = relators.determinant()?;
        let snf = smith_normal_form(&relators)?.diagonal;
        Ok(HomologyPresentation {
            generators: relators.rows(),
            is_zhs: determinant.abs() == 1,
            determinant,
            snf,
            relators,
        })
    }

    pub fn from_graph(graph: &HeegaardGraph) -> Result<Self> {
        Self::from_matrix(relator_matrix(graph))
    }
}

fn signed_sum(coeffs: &[i64]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if *c == 0 {
            continue;
        }
        if *c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if c.unsigned_abs() != 1 {
            out.push_str(&c.unsigned_abs().to_string());
        }
        out.push_str(&format!("A{}", i + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `⟨A1, A2 | -A1+2A2, -2A1+3A2⟩`
pub fn presentation_text(p: &HomologyPresentation) -> String {
    let gens: Vec<String> = (1..=p.generators).map(|i| format!("A{i}")).collect();
    let rels: Vec<String> = (0..p.relators.cols()).map(|j| signed_sum(&p.relators.column(j))).collect();
    format!("⟨{} | {}⟩", gens.join(", "), rels.join(", "))
}
