//! Matrices over a polynomial ring: determinants, full minor enumeration,
//! gcd chains of minors, reduced minors, and elementary row/column operations.
//!
//! Minor indexing is fixed once and for all: subsets of rows and of columns
//! are enumerated in lexicographic subset order ({0,1} < {0,2} < {1,2} ...),
//! and the minor list for order i walks row subsets in the outer loop and
//! column subsets in the inner loop. Everything downstream (reduced minor
//! profiles, ideal generators, reports) relies on that layout.

use std::collections::HashMap;
use std::ops::Mul;
use std::sync::Arc;

use crate::context::{same_context, VarContext};
use crate::error::{Error, Result};
use crate::poly::{gcd_many, Polynomial};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    ctx: Arc<VarContext>,
    entries: Vec<Polynomial>,
}

impl std::fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl PolyMatrix {
    /// Builds from row vectors; all rows must have equal length and every
    /// entry must share one context.
    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<PolyMatrix> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::DimensionMismatch("matrix needs at least one entry".into()));
        }
        let cols = rows[0].len();
        let ctx = rows[0][0].context().clone();
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "ragged rows: {} vs {}",
                    row.len(),
                    cols
                )));
            }
            for e in row {
                if !same_context(&ctx, e.context()) {
                    return Err(Error::ContextMismatch);
                }
                entries.push(e.clone());
            }
        }
        Ok(PolyMatrix { rows: rows.len(), cols, ctx, entries })
    }

    pub fn from_fn(
        ctx: &Arc<VarContext>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> PolyMatrix {
        assert!(rows > 0 && cols > 0, "matrix needs at least one entry");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert!(same_context(ctx, e.context()), "mismatched variable contexts");
                entries.push(e);
            }
        }
        PolyMatrix { rows, cols, ctx: ctx.clone(), entries }
    }

    pub fn identity(ctx: &Arc<VarContext>, n: usize) -> PolyMatrix {
        PolyMatrix::from_fn(ctx, n, n, |i, j| {
            if i == j {
                Polynomial::one(ctx)
            } else {
                Polynomial::zero(ctx)
            }
        })
    }

    pub fn zero(ctx: &Arc<VarContext>, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix::from_fn(ctx, rows, cols, |_, _| Polynomial::zero(ctx))
    }

    /// Embeds `diag` along the main diagonal of a rows x cols matrix.
    pub fn diagonal(
        ctx: &Arc<VarContext>,
        diag: &[Polynomial],
        rows: usize,
        cols: usize,
    ) -> Result<PolyMatrix> {
        if diag.len() > rows.min(cols) {
            return Err(Error::DimensionMismatch(format!(
                "{} diagonal entries do not fit in {rows}x{cols}",
                diag.len()
            )));
        }
        Ok(PolyMatrix::from_fn(ctx, rows, cols, |i, j| {
            if i == j && i < diag.len() {
                diag[i].clone()
            } else {
                Polynomial::zero(ctx)
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn at(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn map(&self, mut f: impl FnMut(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ctx, self.rows, self.cols, |i, j| f(self.at(i, j)))
    }

    pub fn matmul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if !same_context(&self.ctx, &rhs.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(PolyMatrix::from_fn(&self.ctx, self.rows, rhs.cols, |i, j| {
            let mut acc = Polynomial::zero(&self.ctx);
            for k in 0..self.cols {
                acc = acc.add(&self.at(i, k).mul(rhs.at(k, j)));
            }
            acc
        }))
    }

    /// Fraction-free Bareiss elimination; every division along the way is
    /// exact by the Bareiss identity, so the result is the exact determinant.
    pub fn determinant(&self) -> Result<Polynomial> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 1 {
            return Ok(self.at(0, 0).clone());
        }
        let mut m: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = Polynomial::one(&self.ctx);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        negate = !negate;
                    }
                    None => return Ok(Polynomial::zero(&self.ctx)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = num
                        .exact_div(&prev)
                        .expect("Bareiss elimination divides exactly");
                }
                m[i][k] = Polynomial::zero(&self.ctx);
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { det.neg() } else { det })
    }

    /// All order-i minors in the fixed subset convention. For each row subset
    /// the determinants are grown one row at a time, memoized over column
    /// subsets, so shared sub-determinants are computed once.
    pub fn minors_of_order(&self, order: usize) -> Result<Vec<Polynomial>> {
        let max = self.rows.min(self.cols);
        if order == 0 || order > max {
            return Err(Error::OrderOutOfRange { order, max });
        }
        let col_subsets = k_subsets(self.cols, order);
        let mut out = Vec::with_capacity(binomial(self.rows, order) * col_subsets.len());
        for row_set in k_subsets(self.rows, order) {
            let table = self.minor_table(&row_set);
            for cols in &col_subsets {
                out.push(table[&subset_mask(cols)].clone());
            }
        }
        Ok(out)
    }

    /// Laplace expansion along the last row of the subset, cached by column
    /// bitmask layer by layer.
    fn minor_table(&self, row_set: &[usize]) -> HashMap<u64, Polynomial> {
        let mut layer: HashMap<u64, Polynomial> = HashMap::new();
        layer.insert(0, Polynomial::one(&self.ctx));
        for (step, &row) in row_set.iter().enumerate() {
            let mut next: HashMap<u64, Polynomial> = HashMap::new();
            for subset in k_subsets(self.cols, step + 1) {
                let mask = subset_mask(&subset);
                let mut det = Polynomial::zero(&self.ctx);
                for (pos, &col) in subset.iter().enumerate() {
                    let entry = self.at(row, col);
                    if entry.is_zero() {
                        continue;
                    }
                    let sub = &layer[&(mask & !(1u64 << col))];
                    if sub.is_zero() {
                        continue;
                    }
                    let term = entry.mul(sub);
                    det = if (step + pos) % 2 == 0 { det.add(&term) } else { det.sub(&term) };
                }
                next.insert(mask, det);
            }
            layer = next;
        }
        layer
    }

    /// Largest order with a nonzero minor; the zero matrix has rank 0. Once
    /// every order-i minor vanishes all larger orders do too, so the scan
    /// stops at the first all-zero level.
    pub fn rank(&self) -> usize {
        let max = self.rows.min(self.cols);
        for i in 1..=max {
            let minors = self.minors_of_order(i).expect("order in range");
            if minors.iter().all(|m| m.is_zero()) {
                return i - 1;
            }
        }
        max
    }

    /// The chain d_0 = 1, d_i = monic gcd of all order-i minors, up to the
    /// rank; entries beyond the rank are zero and are not listed.
    pub fn d_chain(&self) -> Vec<Polynomial> {
        self.minor_scan().d
    }

    /// Minors and gcds for every order up to the rank, computed in one pass.
    pub(crate) fn minor_scan(&self) -> MinorScan {
        let max = self.rows.min(self.cols);
        let mut d = vec![Polynomial::one(&self.ctx)];
        let mut minors_by_order = Vec::new();
        for i in 1..=max {
            let minors = self.minors_of_order(i).expect("order in range");
            if minors.iter().all(|m| m.is_zero()) {
                break;
            }
            let g = gcd_many(&minors).expect("nonempty minor list");
            debug_assert!(
                g.exact_div(&d[i - 1]).is_some(),
                "minor gcds must form a divisibility chain"
            );
            d.push(g);
            minors_by_order.push(minors);
        }
        MinorScan { d, minors_by_order }
    }

    /// Order-i minors divided by their gcd d_i. Orders beyond the rank have
    /// d_i = 0 and no reduced minors, hence the range error.
    pub fn reduced_minor_profile(&self, order: usize) -> Result<MinorProfile> {
        let scan = self.minor_scan();
        let rank = scan.d.len() - 1;
        if order == 0 || order > rank {
            return Err(Error::OrderOutOfRange { order, max: rank });
        }
        profile_from_parts(order, scan.minors_by_order[order - 1].clone(), scan.d[order].clone())
    }

    /// Square with a determinant that is a nonzero constant.
    pub fn is_unimodular(&self) -> Result<bool> {
        let det = self.determinant()?;
        Ok(!det.is_zero() && det.is_constant())
    }

    /// Applies one elementary row/column operation, returning the new matrix.
    pub fn apply_elementary(&self, op: &ElementaryOp) -> Result<PolyMatrix> {
        let mut out = self.clone();
        match op {
            ElementaryOp::RowSwap(a, b) => {
                self.check_row(*a)?;
                self.check_row(*b)?;
                for j in 0..self.cols {
                    out.entries.swap(a * self.cols + j, b * self.cols + j);
                }
            }
            ElementaryOp::ColSwap(a, b) => {
                self.check_col(*a)?;
                self.check_col(*b)?;
                for i in 0..self.rows {
                    out.entries.swap(i * self.cols + a, i * self.cols + b);
                }
            }
            ElementaryOp::RowScale(i, c) => {
                self.check_row(*i)?;
                check_scale(c)?;
                for j in 0..self.cols {
                    let idx = i * self.cols + j;
                    out.entries[idx] = out.entries[idx].mul_scalar(c);
                }
            }
            ElementaryOp::ColScale(j, c) => {
                self.check_col(*j)?;
                check_scale(c)?;
                for i in 0..self.rows {
                    let idx = i * self.cols + j;
                    out.entries[idx] = out.entries[idx].mul_scalar(c);
                }
            }
            ElementaryOp::RowAddMul { dst, src, factor } => {
                self.check_row(*dst)?;
                self.check_row(*src)?;
                if dst == src {
                    return Err(Error::IndexOutOfRange("row added to itself".into()));
                }
                for j in 0..self.cols {
                    let add = self.at(*src, j).mul(factor);
                    let idx = dst * self.cols + j;
                    out.entries[idx] = out.entries[idx].add(&add);
                }
            }
            ElementaryOp::ColAddMul { dst, src, factor } => {
                self.check_col(*dst)?;
                self.check_col(*src)?;
                if dst == src {
                    return Err(Error::IndexOutOfRange("column added to itself".into()));
                }
                for i in 0..self.rows {
                    let add = self.at(i, *src).mul(factor);
                    let idx = i * self.cols + dst;
                    out.entries[idx] = out.entries[idx].add(&add);
                }
            }
        }
        Ok(out)
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if i < self.rows {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("row {i} of {}", self.rows)))
        }
    }

    fn check_col(&self, j: usize) -> Result<()> {
        if j < self.cols {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("column {j} of {}", self.cols)))
        }
    }
}

impl Mul for &PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.matmul(rhs).expect("compatible dimensions")
    }
}

fn check_scale(c: &Scalar) -> Result<()> {
    if c.is_zero() {
        Err(Error::ZeroScale)
    } else {
        Ok(())
    }
}

pub(crate) struct MinorScan {
    /// d_0 through d_rank.
    pub d: Vec<Polynomial>,
    /// minors_by_order[i-1] holds the order-i minors, orders 1 through rank.
    pub minors_by_order: Vec<Vec<Polynomial>>,
}

pub(crate) fn profile_from_parts(
    order: usize,
    minors: Vec<Polynomial>,
    d: Polynomial,
) -> Result<MinorProfile> {
    let reduced = minors
        .iter()
        .map(|a| {
            if a.is_zero() {
                Polynomial::zero(a.context())
            } else {
                a.exact_div(&d).expect("d_i divides every order-i minor")
            }
        })
        .collect();
    Ok(MinorProfile { order, minors, d, reduced })
}

/// Order-i minors of a matrix together with their monic gcd d and the reduced
/// minors (each minor divided by d). Lists follow the fixed subset convention.
#[derive(Debug, Clone)]
pub struct MinorProfile {
    pub order: usize,
    pub minors: Vec<Polynomial>,
    pub d: Polynomial,
    pub reduced: Vec<Polynomial>,
}

impl MinorProfile {
    /// Number of minors at this order.
    pub fn count(&self) -> usize {
        self.minors.len()
    }
}

/// One elementary row or column operation. Scales must be nonzero constants;
/// add-multiples may use any polynomial factor, keeping the operation
/// invertible over the ring.
#[derive(Debug, Clone)]
pub enum ElementaryOp {
    RowSwap(usize, usize),
    ColSwap(usize, usize),
    RowScale(usize, Scalar),
    ColScale(usize, Scalar),
    RowAddMul { dst: usize, src: usize, factor: Polynomial },
    ColAddMul { dst: usize, src: usize, factor: Polynomial },
}

impl ElementaryOp {
    /// The inverse operation, so that applying both is the identity.
    pub fn inverse(&self) -> ElementaryOp {
        match self {
            ElementaryOp::RowSwap(a, b) => ElementaryOp::RowSwap(*a, *b),
            ElementaryOp::ColSwap(a, b) => ElementaryOp::ColSwap(*a, *b),
            ElementaryOp::RowScale(i, c) => ElementaryOp::RowScale(*i, c.inv()),
            ElementaryOp::ColScale(j, c) => ElementaryOp::ColScale(*j, c.inv()),
            ElementaryOp::RowAddMul { dst, src, factor } => {
                ElementaryOp::RowAddMul { dst: *dst, src: *src, factor: factor.neg() }
            }
            ElementaryOp::ColAddMul { dst, src, factor } => {
                ElementaryOp::ColAddMul { dst: *dst, src: *src, factor: factor.neg() }
            }
        }
    }

    /// The square matrix E such that applying a row op equals E * M, and a
    /// column op equals M * E (with `size` = rows resp. cols of M).
    pub fn matrix(&self, ctx: &Arc<VarContext>, size: usize) -> Result<PolyMatrix> {
        PolyMatrix::identity(ctx, size).apply_elementary(self)
    }
}

/// All k-element subsets of {0..n} in lexicographic order.
pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let remaining = k - current.len();
        for v in start..=n.saturating_sub(remaining) {
            current.push(v);
            rec(n, k, v + 1, current, out);
            current.pop();
        }
    }
    if k <= n {
        rec(n, k, 0, &mut current, &mut out);
    }
    out
}

fn subset_mask(subset: &[usize]) -> u64 {
    subset.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::MonomialOrder;
    use crate::parse::parse_polynomial;
    use crate::scalar::Field;

    fn ctx() -> Arc<VarContext> {
        VarContext::new(&["x1", "x2"], Field::Rational, MonomialOrder::GrevLex).unwrap()
    }

    fn mat(c: &Arc<VarContext>, rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_polynomial(s, c).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn p(c: &Arc<VarContext>, s: &str) -> Polynomial {
        parse_polynomial(s, c).unwrap()
    }

    /// Plain cofactor expansion along the first row, kept deliberately naive
    /// to cross-check Bareiss and the minor tables.
    fn naive_det(m: &PolyMatrix) -> Polynomial {
        assert!(m.is_square());
        let n = m.rows();
        if n == 1 {
            return m.at(0, 0).clone();
        }
        let mut acc = Polynomial::zero(m.context());
        for j in 0..n {
            let sub = PolyMatrix::from_fn(m.context(), n - 1, n - 1, |r, c| {
                m.at(r + 1, if c < j { c } else { c + 1 }).clone()
            });
            let term = m.at(0, j).mul(&naive_det(&sub));
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    #[test]
    fn determinant_matches_naive_expansion() {
        let c = ctx();
        let m = mat(&c, &[&["x1", "x2"], &["1", "x1"]]);
        let d = m.determinant().unwrap();
        assert_eq!(d, p(&c, "x1^2-x2"));
        assert_eq!(d, naive_det(&m));

        let m = mat(&c, &[
            &["x1", "x2", "1"],
            &["0", "x1*x2", "x2"],
            &["1", "0", "x1"],
        ]);
        assert_eq!(m.determinant().unwrap(), naive_det(&m));

        // zero pivot forces a row swap
        let m = mat(&c, &[&["0", "x1"], &["x2", "0"]]);
        assert_eq!(m.determinant().unwrap(), p(&c, "-x1*x2"));
        assert_eq!(m.determinant().unwrap(), naive_det(&m));

        let m = mat(&c, &[&["x1", "x2"]]);
        assert!(matches!(m.determinant(), Err(Error::NotSquare { rows: 1, cols: 2 })));
    }

    #[test]
    fn minor_ordering_convention() {
        let c = ctx();
        // 2x3: row subsets of order 2 = {{0,1}}, column subsets in lex order
        let m = mat(&c, &[&["1", "0", "0"], &["0", "x1", "0"]]);
        let minors = m.minors_of_order(2).unwrap();
        assert_eq!(minors.len(), 3);
        assert_eq!(minors[0], p(&c, "x1")); // cols {0,1}
        assert!(minors[1].is_zero()); // cols {0,2}
        assert!(minors[2].is_zero()); // cols {1,2}

        // order 1 minors of a 2x2 walk rows outer, columns inner
        let m = mat(&c, &[&["1", "2"], &["3", "4"]]);
        let minors = m.minors_of_order(1).unwrap();
        let got: Vec<String> = minors.iter().map(|p| p.to_string()).collect();
        assert_eq!(got, vec!["1", "2", "3", "4"]);

        assert!(matches!(m.minors_of_order(0), Err(Error::OrderOutOfRange { .. })));
        assert!(matches!(m.minors_of_order(3), Err(Error::OrderOutOfRange { .. })));
    }

    #[test]
    fn minors_match_naive_determinants() {
        let c = ctx();
        let m = mat(&c, &[
            &["x1", "x2", "1", "0"],
            &["x2", "x1", "0", "1"],
            &["1", "0", "x1*x2", "x2^2"],
        ]);
        for order in 1..=3usize {
            let minors = m.minors_of_order(order).unwrap();
            let row_sets = k_subsets(3, order);
            let col_sets = k_subsets(4, order);
            assert_eq!(minors.len(), row_sets.len() * col_sets.len());
            let mut idx = 0;
            for rs in &row_sets {
                for cs in &col_sets {
                    let sub = PolyMatrix::from_fn(&c, order, order, |i, j| {
                        m.at(rs[i], cs[j]).clone()
                    });
                    assert_eq!(minors[idx], naive_det(&sub), "order {order} index {idx}");
                    idx += 1;
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        let c = ctx();
        assert_eq!(mat(&c, &[&["x1", "x2"], &["x1*x2", "x2^2"]]).rank(), 1);
        assert_eq!(mat(&c, &[&["x1", "x2"], &["x2", "x1"]]).rank(), 2);
        assert_eq!(PolyMatrix::zero(&c, 2, 3).rank(), 0);
        assert_eq!(PolyMatrix::identity(&c, 3).rank(), 3);
    }

    #[test]
    fn d_chain_examples() {
        let c = ctx();
        let m = mat(&c, &[&["x1", "0"], &["0", "x1*x2"]]);
        let d = m.d_chain();
        assert_eq!(d.len(), 3);
        assert!(d[0].is_one());
        assert_eq!(d[1], p(&c, "x1"));
        assert_eq!(d[2], p(&c, "x1^2*x2"));

        // rank-1 matrix stops after d_1
        let m = mat(&c, &[&["x1", "x2"], &["x1*x2", "x2^2"]]);
        let d = m.d_chain();
        assert_eq!(d.len(), 2);
        assert!(d[1].is_one());

        // d_i chain is monic even when minors are not
        let m = mat(&c, &[&["2*x1", "0"], &["0", "3*x1"]]);
        let d = m.d_chain();
        assert_eq!(d[1], p(&c, "x1"));
        assert_eq!(d[2], p(&c, "x1^2"));
    }

    #[test]
    fn reduced_minors_two_by_two() {
        let c = ctx();
        let m = mat(&c, &[&["x1", "0"], &["0", "x2"]]);
        let profile = m.reduced_minor_profile(1).unwrap();
        assert!(profile.d.is_one());
        assert_eq!(profile.reduced, profile.minors);
        let profile = m.reduced_minor_profile(2).unwrap();
        assert_eq!(profile.d, p(&c, "x1*x2"));
        assert!(profile.reduced[0].is_one());

        let m = mat(&c, &[&["x1", "0"], &["0", "x1"]]);
        let profile = m.reduced_minor_profile(1).unwrap();
        assert_eq!(profile.d, p(&c, "x1"));
        let got: Vec<String> = profile.reduced.iter().map(|b| b.to_string()).collect();
        assert_eq!(got, vec!["1", "0", "0", "1"]);

        assert!(matches!(m.reduced_minor_profile(3), Err(Error::OrderOutOfRange { .. })));
        // rank 1 matrix: order 2 exceeds the rank
        let m = mat(&c, &[&["x1", "x2"], &["x1*x2", "x2^2"]]);
        assert!(matches!(m.reduced_minor_profile(2), Err(Error::OrderOutOfRange { .. })));
    }

    #[test]
    fn reduced_minors_have_trivial_gcd() {
        let c = ctx();
        let m = mat(&c, &[
            &["x1^2", "x1*x2", "x2"],
            &["0", "x1", "x2^2"],
            &["x1", "0", "x1*x2"],
        ]);
        let scan = m.minor_scan();
        for order in 1..scan.d.len() {
            let profile = m.reduced_minor_profile(order).unwrap();
            let g = gcd_many(&profile.reduced).unwrap();
            assert!(g.is_one(), "order {order}: gcd {g}");
            // reconstruction: minor = d * reduced
            for (a, b) in profile.minors.iter().zip(&profile.reduced) {
                assert_eq!(a, &profile.d.mul(b));
            }
        }
    }

    #[test]
    fn unimodular_checks() {
        let c = ctx();
        assert!(PolyMatrix::identity(&c, 3).is_unimodular().unwrap());
        let shear = mat(&c, &[&["1", "x1^2+x2"], &["0", "1"]]);
        assert!(shear.is_unimodular().unwrap());
        let m = mat(&c, &[&["x1", "0"], &["0", "1"]]);
        assert!(!m.is_unimodular().unwrap());
        assert!(!PolyMatrix::zero(&c, 2, 2).is_unimodular().unwrap());
        assert!(mat(&c, &[&["x1", "x2"]]).is_unimodular().is_err());
    }

    #[test]
    fn matmul_and_transpose() {
        let c = ctx();
        let a = mat(&c, &[&["x1", "1"], &["0", "x2"]]);
        let b = mat(&c, &[&["1", "0"], &["x1", "1"]]);
        let ab = a.matmul(&b).unwrap();
        assert_eq!(ab, mat(&c, &[&["2*x1", "1"], &["x1*x2", "x2"]]));
        let id = PolyMatrix::identity(&c, 2);
        assert_eq!(a.matmul(&id).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
        let wide = mat(&c, &[&["1", "0", "0"], &["0", "1", "0"]]);
        assert!(a.matmul(&wide).is_ok());
        assert!(wide.matmul(&a).is_err());
    }

    #[test]
    fn elementary_ops_match_their_matrices() {
        let c = ctx();
        let m = mat(&c, &[&["x1", "x2", "1"], &["0", "x1", "x2"]]);
        let ops = vec![
            ElementaryOp::RowSwap(0, 1),
            ElementaryOp::RowScale(1, Field::Rational.integer(-3)),
            ElementaryOp::RowAddMul { dst: 0, src: 1, factor: p(&c, "x1*x2") },
            ElementaryOp::ColSwap(0, 2),
            ElementaryOp::ColScale(2, Field::Rational.integer(2)),
            ElementaryOp::ColAddMul { dst: 1, src: 0, factor: p(&c, "x2-1") },
        ];
        for op in &ops {
            let applied = m.apply_elementary(op).unwrap();
            let expected = match op {
                ElementaryOp::RowSwap(..)
                | ElementaryOp::RowScale(..)
                | ElementaryOp::RowAddMul { .. } => {
                    op.matrix(&c, 2).unwrap().matmul(&m).unwrap()
                }
                _ => m.matmul(&op.matrix(&c, 3).unwrap()).unwrap(),
            };
            assert_eq!(applied, expected);
            // the elementary matrix is unimodular and the op round-trips
            let size = match op {
                ElementaryOp::RowSwap(..)
                | ElementaryOp::RowScale(..)
                | ElementaryOp::RowAddMul { .. } => 2,
                _ => 3,
            };
            assert!(op.matrix(&c, size).unwrap().is_unimodular().unwrap());
            let back = applied.apply_elementary(&op.inverse()).unwrap();
            assert_eq!(back, m);
        }
        assert!(m
            .apply_elementary(&ElementaryOp::RowScale(0, Field::Rational.integer(0)))
            .is_err());
        assert!(m
            .apply_elementary(&ElementaryOp::RowAddMul {
                dst: 1,
                src: 1,
                factor: p(&c, "1")
            })
            .is_err());
        assert!(m.apply_elementary(&ElementaryOp::RowSwap(0, 5)).is_err());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(
            k_subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(k_subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(k_subsets(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }
}
