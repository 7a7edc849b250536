//! The equivalence decision procedure and its supporting oracles.
//!
//! [`decide`] answers whether a matrix is equivalent to its Smith form by the
//! reduced-minor criterion: when the rank-order minor gcd involves only the
//! first variable, equivalence holds exactly when every order of reduced
//! minors generates the unit ideal. The rest of the module supplies
//! necessary-condition checkers used as independent test oracles
//! ([`check_equivalence_invariants`], [`verify_cauchy_binet`],
//! [`verify_multiplicativity`]) and seeded generators that manufacture
//! instances with known ground truth.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::{Monomial, VarContext};
use crate::error::{Error, Result};
use crate::ideal::{groebner, is_unit_ideal, unit_cofactors};
use crate::matrix::{binomial, ElementaryOp, PolyMatrix};
use crate::poly::{gcd, Polynomial};
use crate::scalar::{Field, Scalar};
use crate::smith::{factor_univariate, SmithForm};

/// Outcome of [`decide`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    EquivalentToSmithForm,
    NotEquivalent,
    /// The rank-order minor gcd involves more than the first variable, so the
    /// criterion does not apply.
    PreconditionViolated,
}

/// Evidence gathered at one minor order.
#[derive(Debug, Clone)]
pub struct OrderRecord {
    pub order: usize,
    /// Number of minors of this order, counting zeros.
    pub minor_count: usize,
    /// Monic gcd of the minors of this order.
    pub d: Polynomial,
    /// Whether the reduced minors generate the unit ideal.
    pub unit_ideal: bool,
    /// Cofactors witnessing 1 as a combination of the reduced minors, indexed
    /// like the minor list; only computed on request.
    pub cofactors: Option<Vec<Polynomial>>,
}

/// Full account of a [`decide`] run.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub rows: usize,
    pub cols: usize,
    /// True when the input had more rows than columns and was transposed
    /// internally; every reported quantity is transposition-invariant.
    pub transposed: bool,
    pub rank: usize,
    /// Minor gcd chain d_0 = 1 through d_rank.
    pub d_chain: Vec<Polynomial>,
    /// One record per order 1..=rank; empty when the precondition failed.
    pub orders: Vec<OrderRecord>,
    pub verdict: Verdict,
    /// The Smith form, attached only when the verdict is equivalence.
    pub smith: Option<SmithForm>,
    /// First order whose reduced minors fail to generate the unit ideal.
    pub failing_order: Option<usize>,
}

/// Decides equivalence of a nonzero matrix to its Smith form.
pub fn decide(f: &PolyMatrix) -> Result<EquivalenceReport> {
    decide_with(f, false)
}

/// [`decide`] with optional cofactor certificates on every unit-ideal order.
pub fn decide_with(f: &PolyMatrix, certify: bool) -> Result<EquivalenceReport> {
    if f.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let transposed = f.rows() > f.cols();
    let work = if transposed { f.transpose() } else { f.clone() };
    let scan = work.minor_scan();
    let d = scan.d;
    let rank = d.len() - 1;

    if !d[rank].is_univariate_in(0) {
        return Ok(EquivalenceReport {
            rows: f.rows(),
            cols: f.cols(),
            transposed,
            rank,
            d_chain: d,
            orders: Vec::new(),
            verdict: Verdict::PreconditionViolated,
            smith: None,
            failing_order: None,
        });
    }

    let mut orders = Vec::with_capacity(rank);
    let mut failing_order = None;
    for i in 1..=rank {
        let reduced = reduce_minors(&scan.minors_by_order[i - 1], &d[i]);
        let unit_ideal = reduced_generate_unit(&reduced);
        let cofactors =
            if certify && unit_ideal { Some(unit_cofactors(&reduced)?) } else { None };
        if !unit_ideal && failing_order.is_none() {
            failing_order = Some(i);
        }
        orders.push(OrderRecord {
            order: i,
            minor_count: reduced.len(),
            d: d[i].clone(),
            unit_ideal,
            cofactors,
        });
    }

    let verdict = if failing_order.is_none() {
        Verdict::EquivalentToSmithForm
    } else {
        Verdict::NotEquivalent
    };
    let smith = if verdict == Verdict::EquivalentToSmithForm {
        let diag: Vec<Polynomial> = (1..=rank)
            .map(|i| d[i].exact_div(&d[i - 1]).expect("minor gcds form a divisibility chain"))
            .collect();
        Some(
            SmithForm::new(f.rows(), f.cols(), diag)
                .expect("gcd chain quotients are a Smith diagonal"),
        )
    } else {
        None
    };
    debug_assert_eq!(
        verdict == Verdict::EquivalentToSmithForm,
        orders.iter().all(|r| r.unit_ideal),
        "verdict must equal the conjunction of the per-order flags"
    );
    Ok(EquivalenceReport {
        rows: f.rows(),
        cols: f.cols(),
        transposed,
        rank,
        d_chain: d,
        orders,
        verdict,
        smith,
        failing_order,
    })
}

fn reduce_minors(minors: &[Polynomial], d: &Polynomial) -> Vec<Polynomial> {
    minors
        .iter()
        .map(|a| {
            if a.is_zero() {
                a.clone()
            } else {
                a.exact_div(d).expect("the order gcd divides each minor")
            }
        })
        .collect()
}

/// Unit-ideal test with the cheap shortcut: any nonzero constant among the
/// generators settles it without a basis computation.
fn reduced_generate_unit(reduced: &[Polynomial]) -> bool {
    if reduced.iter().any(|b| b.is_constant() && !b.is_zero()) {
        return true;
    }
    is_unit_ideal(reduced)
}

/// What [`check_equivalence_invariants`] found first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchKind {
    /// Minor gcds differ at this order (or the ranks differ).
    DValue,
    /// Reduced Groebner bases of the reduced-minor ideals differ.
    ReducedMinorIdeal,
}

/// Result of comparing the equivalence invariants of two matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantReport {
    pub orders_checked: usize,
    pub mismatch: Option<(usize, MismatchKind)>,
}

impl InvariantReport {
    pub fn agrees(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares the two quantities equivalence preserves: the minor gcd chain and
/// the reduced-minor ideals (via their unique reduced Groebner bases) at every
/// order. Agreement is necessary for equivalence, never sufficient.
pub fn check_equivalence_invariants(
    a: &PolyMatrix,
    b: &PolyMatrix,
) -> Result<InvariantReport> {
    if !crate::context::same_context(a.context(), b.context()) {
        return Err(Error::ContextMismatch);
    }
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let scan_a = a.minor_scan();
    let scan_b = b.minor_scan();
    let (ra, rb) = (scan_a.d.len() - 1, scan_b.d.len() - 1);
    let top = ra.max(rb);
    for i in 1..=top {
        if i > ra || i > rb || scan_a.d[i] != scan_b.d[i] {
            return Ok(InvariantReport { orders_checked: i, mismatch: Some((i, MismatchKind::DValue)) });
        }
        let gb_a = reduced_minor_basis(&scan_a.minors_by_order[i - 1], &scan_a.d[i])?;
        let gb_b = reduced_minor_basis(&scan_b.minors_by_order[i - 1], &scan_b.d[i])?;
        if gb_a != gb_b {
            return Ok(InvariantReport {
                orders_checked: i,
                mismatch: Some((i, MismatchKind::ReducedMinorIdeal)),
            });
        }
    }
    Ok(InvariantReport { orders_checked: top, mismatch: None })
}

fn reduced_minor_basis(minors: &[Polynomial], d: &Polynomial) -> Result<Vec<Polynomial>> {
    let reduced = reduce_minors(minors, d);
    let order = reduced[0].context().order();
    Ok(groebner(&reduced, order)?.generators().to_vec())
}

/// Checks that every order-i minor of A*B equals the bilinear sum of order-i
/// minors of A and B over the shared index subsets, with both sides computed
/// by independent code paths.
pub fn verify_cauchy_binet(a: &PolyMatrix, b: &PolyMatrix, order: usize) -> Result<bool> {
    let ab = a.matmul(b)?;
    let ma = a.minors_of_order(order)?;
    let mb = b.minors_of_order(order)?;
    let mab = ab.minors_of_order(order)?;
    let row_count = binomial(a.rows(), order);
    let mid_count = binomial(a.cols(), order);
    let col_count = binomial(b.cols(), order);
    let ctx = a.context();
    for ri in 0..row_count {
        for ci in 0..col_count {
            let mut sum = Polynomial::zero(ctx);
            for si in 0..mid_count {
                sum = sum.add(&ma[ri * mid_count + si].mul(&mb[si * col_count + ci]));
            }
            if sum != mab[ri * col_count + ci] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per-order outcome of [`verify_multiplicativity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultOrderCheck {
    pub order: usize,
    /// d_i of the product equals the product of the factors' d_i.
    pub d_holds: bool,
    /// When the product's reduced minors generate the unit ideal, so do both
    /// factors'; vacuously true otherwise.
    pub unit_propagation_holds: bool,
}

/// Result of [`verify_multiplicativity`]: inapplicable when the determinant
/// gcd is nonconstant (the hypothesis fails), else one check per order.
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplicativity {
    Inapplicable { det_gcd: Polynomial },
    Checked(Vec<MultOrderCheck>),
}

impl Multiplicativity {
    pub fn holds(&self) -> bool {
        match self {
            Multiplicativity::Inapplicable { .. } => false,
            Multiplicativity::Checked(checks) => {
                checks.iter().all(|c| c.d_holds && c.unit_propagation_holds)
            }
        }
    }
}

/// Verifies, for square factors of equal size with coprime determinants, that
/// minor gcds multiply across the product at every order and that unit-ideal
/// reduced minors of the product force unit-ideal reduced minors of both
/// factors.
pub fn verify_multiplicativity(f1: &PolyMatrix, f2: &PolyMatrix) -> Result<Multiplicativity> {
    if !crate::context::same_context(f1.context(), f2.context()) {
        return Err(Error::ContextMismatch);
    }
    let det1 = f1.determinant()?;
    let det2 = f2.determinant()?;
    if f1.rows() != f2.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            f1.rows(),
            f1.cols(),
            f2.rows(),
            f2.cols()
        )));
    }
    let det_gcd = gcd(&det1, &det2);
    if !det_gcd.is_constant() || det_gcd.is_zero() {
        return Ok(Multiplicativity::Inapplicable { det_gcd });
    }

    let n = f1.rows();
    let prod = f1.matmul(f2)?;
    let scan1 = f1.minor_scan();
    let scan2 = f2.minor_scan();
    let scan_p = prod.minor_scan();
    let ctx = f1.context();
    let d_at = |scan: &crate::matrix::MinorScan, i: usize| -> Polynomial {
        scan.d.get(i).cloned().unwrap_or_else(|| Polynomial::zero(ctx))
    };

    let mut checks = Vec::with_capacity(n);
    for i in 1..=n {
        let lhs = d_at(&scan_p, i);
        let rhs = d_at(&scan1, i).mul(&d_at(&scan2, i));
        let d_holds = lhs == rhs;
        let prod_unit = i < scan_p.d.len()
            && reduced_generate_unit(&reduce_minors(&scan_p.minors_by_order[i - 1], &scan_p.d[i]));
        let unit_propagation_holds = if prod_unit {
            i < scan1.d.len()
                && i < scan2.d.len()
                && reduced_generate_unit(&reduce_minors(&scan1.minors_by_order[i - 1], &scan1.d[i]))
                && reduced_generate_unit(&reduce_minors(&scan2.minors_by_order[i - 1], &scan2.d[i]))
        } else {
            true
        };
        checks.push(MultOrderCheck { order: i, d_holds, unit_propagation_holds });
    }
    Ok(Multiplicativity::Checked(checks))
}

/// Random polynomial with `terms` terms of total degree at most
/// `degree_bound`, drawn from the seeded stream. Terms can cancel, so the
/// result occasionally has fewer terms or is zero.
fn random_poly(
    ctx: &Arc<VarContext>,
    rng: &mut ChaCha8Rng,
    degree_bound: u32,
    terms: usize,
) -> Polynomial {
    let n = ctx.n_vars();
    let mut list = Vec::with_capacity(terms);
    for _ in 0..terms {
        let total = rng.gen_range(0..=degree_bound);
        let mut exps = vec![0u32; n];
        for _ in 0..total {
            exps[rng.gen_range(0..n)] += 1;
        }
        list.push((Monomial::from_exps(exps), random_unit_scalar(ctx.field(), rng)));
    }
    Polynomial::from_terms(ctx, list)
}

/// Nonzero scalar from the seeded stream: small integers over the rationals,
/// uniform nonzero residues over GF(p).
fn random_unit_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        Field::Rational => {
            let mut v = 0i64;
            while v == 0 {
                v = rng.gen_range(-3..=3);
            }
            field.integer(v)
        }
        Field::Prime(p) => Scalar::Mod { value: rng.gen_range(1..p), modulus: p },
    }
}

fn random_elementary(
    ctx: &Arc<VarContext>,
    size: usize,
    degree_bound: u32,
    rng: &mut ChaCha8Rng,
) -> ElementaryOp {
    if size == 1 {
        return ElementaryOp::RowScale(0, random_unit_scalar(ctx.field(), rng));
    }
    let i = rng.gen_range(0..size);
    let mut j = rng.gen_range(0..size - 1);
    if j >= i {
        j += 1;
    }
    match rng.gen_range(0..10u32) {
        0 => ElementaryOp::RowSwap(i, j),
        1 => ElementaryOp::ColSwap(i, j),
        2 => ElementaryOp::RowScale(i, random_unit_scalar(ctx.field(), rng)),
        3 => ElementaryOp::ColScale(i, random_unit_scalar(ctx.field(), rng)),
        k if k % 2 == 0 => ElementaryOp::RowAddMul {
            dst: i,
            src: j,
            factor: random_poly(ctx, rng, degree_bound, 2),
        },
        _ => ElementaryOp::ColAddMul {
            dst: i,
            src: j,
            factor: random_poly(ctx, rng, degree_bound, 2),
        },
    }
}

fn random_unimodular_from(
    ctx: &Arc<VarContext>,
    size: usize,
    op_count: usize,
    degree_bound: u32,
    rng: &mut ChaCha8Rng,
) -> PolyMatrix {
    let mut m = PolyMatrix::identity(ctx, size);
    for _ in 0..op_count {
        let op = random_elementary(ctx, size, degree_bound, rng);
        m = m.apply_elementary(&op).expect("generated ops are in range");
    }
    debug_assert!(m.is_unimodular().expect("square"), "elementary products stay unimodular");
    m
}

/// Product of `op_count` seeded random elementary matrices: swaps, nonzero
/// scalings, and shears whose polynomials have total degree at most
/// `degree_bound`. Deterministic per seed.
pub fn random_unimodular(
    ctx: &Arc<VarContext>,
    size: usize,
    op_count: usize,
    degree_bound: u32,
    seed: u64,
) -> PolyMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unimodular_from(ctx, size, op_count, degree_bound, &mut rng)
}

/// Matrix of seeded random polynomial entries (up to three terms each, total
/// degree at most `degree_bound`), for property suites that need arbitrary
/// inputs rather than ground-truth instances.
pub fn random_matrix(
    ctx: &Arc<VarContext>,
    rows: usize,
    cols: usize,
    degree_bound: u32,
    seed: u64,
) -> PolyMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<Vec<Polynomial>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    let terms = rng.gen_range(1..=3);
                    random_poly(ctx, &mut rng, degree_bound, terms)
                })
                .collect()
        })
        .collect();
    PolyMatrix::from_rows(entries).expect("rectangular by construction")
}

/// Builds F = U * D * V with known Smith form D from a per-prime exponent
/// table: row i of `table` pairs an irreducible univariate prime with its
/// nondecreasing exponents across the diagonal. Returns the matrix and the
/// ground-truth Smith form.
pub fn random_smith_instance(
    ctx: &Arc<VarContext>,
    size: usize,
    table: &[(Polynomial, Vec<u32>)],
    seed: u64,
) -> Result<(PolyMatrix, SmithForm)> {
    random_smith_instance_with(ctx, size, table, seed, size + 2, 1)
}

/// [`random_smith_instance`] with explicit transform size knobs: `op_count`
/// elementary operations per side, shear degrees bounded by `degree_bound`.
pub fn random_smith_instance_with(
    ctx: &Arc<VarContext>,
    size: usize,
    table: &[(Polynomial, Vec<u32>)],
    seed: u64,
    op_count: usize,
    degree_bound: u32,
) -> Result<(PolyMatrix, SmithForm)> {
    if size == 0 {
        return Err(Error::MalformedExponentTable("size must be at least 1".into()));
    }
    let mut primes = Vec::with_capacity(table.len());
    for (p, exps) in table {
        if !p.is_univariate_in(0) || p.is_constant() {
            return Err(Error::MalformedExponentTable(format!(
                "prime {p} is not a nonconstant polynomial in {} alone",
                ctx.name(0)
            )));
        }
        let p = p.monic();
        let check = factor_univariate(&p)?;
        if check.factors.len() != 1 || check.factors[0].1 != 1 {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        if primes.contains(&p) {
            return Err(Error::MalformedExponentTable(format!("duplicate prime {p}")));
        }
        if exps.len() != size {
            return Err(Error::MalformedExponentTable(format!(
                "exponent row for {p} has {} entries, expected {size}",
                exps.len()
            )));
        }
        if exps.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::MalformedExponentTable(format!(
                "exponent row for {p} is not nondecreasing"
            )));
        }
        primes.push(p);
    }

    let diag: Vec<Polynomial> = (0..size)
        .map(|j| {
            let mut e = Polynomial::one(ctx);
            for (i, p) in primes.iter().enumerate() {
                e = e.mul(&p.pow(table[i].1[j]));
            }
            e
        })
        .collect();
    let truth = SmithForm::new(size, size, diag)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_unimodular_from(ctx, size, op_count, degree_bound, &mut rng);
    let v = random_unimodular_from(ctx, size, op_count, degree_bound, &mut rng);
    let f = u.matmul(&truth.embed(ctx)).expect("square").matmul(&v).expect("square");
    Ok((f, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::MonomialOrder;
    use crate::parse::parse_polynomial;
    use proptest::prelude::*;
    use rand::Rng;

    fn ctx2() -> Arc<VarContext> {
        VarContext::new(&["x1", "x2"], Field::Rational, MonomialOrder::GrevLex).unwrap()
    }

    fn p(c: &Arc<VarContext>, s: &str) -> Polynomial {
        parse_polynomial(s, c).unwrap()
    }

    fn mat(c: &Arc<VarContext>, rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_polynomial(s, c).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn diag_strings(report: &EquivalenceReport) -> Vec<String> {
        report
            .smith
            .as_ref()
            .expect("equivalent verdicts carry a Smith form")
            .diagonal()
            .iter()
            .map(|e| e.to_string())
            .collect()
    }

    #[test]
    fn decide_identity_is_equivalent() {
        let c = ctx2();
        let report = decide(&PolyMatrix::identity(&c, 3)).unwrap();
        assert_eq!(report.verdict, Verdict::EquivalentToSmithForm);
        assert_eq!(report.rank, 3);
        assert!(report.orders.iter().all(|r| r.unit_ideal));
        assert_eq!(diag_strings(&report), vec!["1", "1", "1"]);
        assert_eq!(report.failing_order, None);
        assert!(!report.transposed);
    }

    #[test]
    fn decide_shear_fails_at_order_one() {
        let c = ctx2();
        let report = decide(&mat(&c, &[&["x1", "x2"], &["0", "x1"]])).unwrap();
        assert_eq!(report.verdict, Verdict::NotEquivalent);
        assert_eq!(report.failing_order, Some(1));
        assert!(!report.orders[0].unit_ideal);
        assert!(report.orders[1].unit_ideal);
        assert!(report.smith.is_none());
        assert_eq!(report.d_chain[2], p(&c, "x1^2"));
    }

    #[test]
    fn decide_constructed_equivalent_case() {
        let c = ctx2();
        // [[1,0],[x2,1]] * diag{1, x1^2} * [[1,x2],[0,1]]
        let report = decide(&mat(&c, &[&["1", "x2"], &["x2", "x1^2+x2^2"]])).unwrap();
        assert_eq!(report.verdict, Verdict::EquivalentToSmithForm);
        assert_eq!(diag_strings(&report), vec!["1", "x1^2"]);
    }

    #[test]
    fn decide_precondition_violation() {
        let c = ctx2();
        let report = decide(&mat(&c, &[&["x2", "0"], &["0", "x2"]])).unwrap();
        assert_eq!(report.verdict, Verdict::PreconditionViolated);
        assert!(report.orders.is_empty());
        assert!(report.smith.is_none());
        assert_eq!(report.rank, 2);
        assert_eq!(report.d_chain[2], p(&c, "x2^2"));
    }

    #[test]
    fn decide_rejects_zero_and_transposes_tall_input() {
        let c = ctx2();
        assert!(matches!(decide(&PolyMatrix::zero(&c, 2, 2)), Err(Error::ZeroMatrix)));

        let tall = mat(&c, &[&["1", "0"], &["0", "x1"], &["0", "0"]]);
        let report = decide(&tall).unwrap();
        assert!(report.transposed);
        assert_eq!(report.rows, 3);
        assert_eq!(report.cols, 2);
        let wide = decide(&tall.transpose()).unwrap();
        assert_eq!(report.verdict, wide.verdict);
        assert_eq!(report.d_chain, wide.d_chain);
        assert_eq!(diag_strings(&report), diag_strings(&wide));
    }

    #[test]
    fn decide_certificates_expand_to_one() {
        let c = ctx2();
        let f = mat(&c, &[&["1", "x2"], &["x2", "x1^2+x2^2"]]);
        let report = decide_with(&f, true).unwrap();
        let scan_minors = |order: usize| f.minors_of_order(order).unwrap();
        for rec in &report.orders {
            let cof = rec.cofactors.as_ref().expect("certified run");
            let minors = scan_minors(rec.order);
            assert_eq!(cof.len(), minors.len());
            let mut acc = Polynomial::zero(&c);
            for (u, a) in cof.iter().zip(&minors) {
                let b = if a.is_zero() { a.clone() } else { a.exact_div(&rec.d).unwrap() };
                acc = acc.add(&u.mul(&b));
            }
            assert!(acc.is_one());
        }
    }

    #[test]
    fn invariants_agree_on_self_and_elementary_conjugates() {
        let c = ctx2();
        let f = mat(&c, &[&["x1", "x2"], &["0", "x1"]]);
        assert!(check_equivalence_invariants(&f, &f).unwrap().agrees());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..8 {
            let e1 = random_elementary(&c, 2, 1, &mut rng);
            let e2 = random_elementary(&c, 2, 1, &mut rng);
            let g = f
                .apply_elementary(&e1)
                .unwrap()
                .apply_elementary(&e2)
                .unwrap();
            let report = check_equivalence_invariants(&f, &g).unwrap();
            assert!(report.agrees(), "mismatch after {e1:?}, {e2:?}: {report:?}");
        }
    }

    #[test]
    fn invariants_detect_mismatches() {
        let c = ctx2();
        let a = mat(&c, &[&["1", "0"], &["0", "x1"]]);
        let b = mat(&c, &[&["1", "0"], &["0", "x1^2"]]);
        let report = check_equivalence_invariants(&a, &b).unwrap();
        assert_eq!(report.mismatch, Some((2, MismatchKind::DValue)));

        // same d-chain, different reduced-minor ideals
        let f = mat(&c, &[&["x1", "x2"], &["0", "x1"]]);
        let s = mat(&c, &[&["1", "0"], &["0", "x1^2"]]);
        let report = check_equivalence_invariants(&f, &s).unwrap();
        assert_eq!(report.mismatch, Some((1, MismatchKind::ReducedMinorIdeal)));

        // rank mismatch surfaces as a d-value mismatch
        let r1 = mat(&c, &[&["1", "0"], &["0", "0"]]);
        let report = check_equivalence_invariants(&a, &r1).unwrap();
        assert_eq!(report.mismatch, Some((2, MismatchKind::DValue)));

        let wide = mat(&c, &[&["1", "0", "0"], &["0", "1", "0"]]);
        assert!(check_equivalence_invariants(&a, &wide).is_err());
    }

    #[test]
    fn cauchy_binet_on_fixed_and_random_pairs() {
        let c = ctx2();
        let a = mat(&c, &[&["x1", "1", "0"], &["x2", "0", "1"]]);
        let b = mat(&c, &[&["1", "x2"], &["x1", "0"], &["0", "x1+x2"]]);
        assert!(verify_cauchy_binet(&a, &b, 1).unwrap());
        assert!(verify_cauchy_binet(&a, &b, 2).unwrap());
        assert!(matches!(verify_cauchy_binet(&a, &b, 3), Err(Error::OrderOutOfRange { .. })));
        assert!(verify_cauchy_binet(&b, &a, 3).is_err());

        for seed in 0..6 {
            let a = random_matrix(&c, 3, 3, 2, seed);
            let b = random_matrix(&c, 3, 3, 2, seed + 100);
            for order in 1..=3 {
                assert!(verify_cauchy_binet(&a, &b, order).unwrap());
            }
        }
    }

    #[test]
    fn multiplicativity_applicable_and_not() {
        let c = ctx2();
        let f1 = mat(&c, &[&["x1", "0"], &["0", "x1"]]);
        assert!(matches!(
            verify_multiplicativity(&f1, &f1).unwrap(),
            Multiplicativity::Inapplicable { .. }
        ));

        // identity against anything nonsingular holds trivially
        let f2 = mat(&c, &[&["x1-1", "x2"], &["0", "x1-1"]]);
        let id = PolyMatrix::identity(&c, 2);
        assert!(verify_multiplicativity(&id, &f2).unwrap().holds());

        // coprime determinants x1^2 and (x1-1)^2
        let report = verify_multiplicativity(&f1, &f2).unwrap();
        assert!(report.holds(), "{report:?}");

        let rect = mat(&c, &[&["1", "0", "0"], &["0", "1", "0"]]);
        assert!(verify_multiplicativity(&f1, &rect).is_err());
    }

    #[test]
    fn random_unimodular_properties() {
        let c = ctx2();
        assert_eq!(random_unimodular(&c, 3, 0, 2, 42), PolyMatrix::identity(&c, 3));
        let a = random_unimodular(&c, 3, 6, 2, 42);
        let b = random_unimodular(&c, 3, 6, 2, 42);
        assert_eq!(a, b);
        assert!(a.is_unimodular().unwrap());
        assert!(!a.determinant().unwrap().is_zero());
        let other = random_unimodular(&c, 3, 6, 2, 43);
        assert!(other.is_unimodular().unwrap());
    }

    #[test]
    fn smith_instance_ground_truth() {
        let c = ctx2();
        let table = vec![(p(&c, "x1"), vec![0, 2])];
        let (f, truth) = random_smith_instance(&c, 2, &table, 11).unwrap();
        let got: Vec<String> = truth.diagonal().iter().map(|e| e.to_string()).collect();
        assert_eq!(got, vec!["1", "x1^2"]);
        let report = decide(&f).unwrap();
        assert_eq!(report.verdict, Verdict::EquivalentToSmithForm);
        assert_eq!(report.smith.as_ref().unwrap().diagonal(), truth.diagonal());

        // all-zero exponents make a unimodular instance
        let table = vec![(p(&c, "x1"), vec![0, 0])];
        let (f, truth) = random_smith_instance(&c, 2, &table, 3).unwrap();
        assert!(f.is_unimodular().unwrap());
        assert_eq!(truth.diagonal().len(), 2);
        assert!(truth.diagonal().iter().all(|e| e.is_one()));
    }

    #[test]
    fn smith_instance_rejects_malformed_tables() {
        let c = ctx2();
        let err = |table: Vec<(Polynomial, Vec<u32>)>| {
            random_smith_instance(&c, 2, &table, 0).unwrap_err()
        };
        assert!(matches!(
            err(vec![(p(&c, "x2"), vec![0, 1])]),
            Error::MalformedExponentTable(_)
        ));
        assert!(matches!(
            err(vec![(p(&c, "x1^2-1"), vec![0, 1])]),
            Error::NotIrreducible(_)
        ));
        assert!(matches!(
            err(vec![(p(&c, "x1"), vec![0, 1, 2])]),
            Error::MalformedExponentTable(_)
        ));
        assert!(matches!(
            err(vec![(p(&c, "x1"), vec![2, 1])]),
            Error::MalformedExponentTable(_)
        ));
        assert!(matches!(
            err(vec![(p(&c, "x1"), vec![0, 1]), (p(&c, "2*x1"), vec![0, 1])]),
            Error::MalformedExponentTable(_)
        ));
    }

    #[test]
    fn negative_family_fails_at_order_one() {
        let c = ctx2();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            // p monic nonconstant in x1; q divisible by x2 with unit cofactor,
            // so gcd(p, q) = 1 while <p, q> stays proper
            let deg = rng.gen_range(1..=3u32);
            let mut pe = Polynomial::variable(&c, 0).unwrap().pow(deg);
            for k in 0..deg {
                if rng.gen_bool(0.5) {
                    let term = Polynomial::variable(&c, 0)
                        .unwrap()
                        .pow(k)
                        .mul_scalar(&random_unit_scalar(Field::Rational, &mut rng));
                    pe = pe.add(&term);
                }
            }
            let x2 = Polynomial::variable(&c, 1).unwrap();
            let q = x2.mul(
                &Polynomial::one(&c).add(&x2.mul(&random_poly(&c, &mut rng, 1, 1))),
            );
            let f = PolyMatrix::from_rows(vec![
                vec![pe.clone(), q],
                vec![Polynomial::zero(&c), pe],
            ])
            .unwrap();
            let report = decide(&f).unwrap();
            assert_eq!(report.verdict, Verdict::NotEquivalent, "for {f:?}");
            assert_eq!(report.failing_order, Some(1));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn positive_soundness_small(seed in 0u64..4096, size in 2usize..=3, three_vars: bool) {
            let names: &[&str] = if three_vars { &["x1", "x2", "x3"] } else { &["x1", "x2"] };
            let c = VarContext::new(names, Field::Rational, MonomialOrder::GrevLex).unwrap();
            let x1 = Polynomial::variable(&c, 0).unwrap();
            let x1m1 = x1.sub(&Polynomial::one(&c));
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
            let mut row = || {
                let mut exps: Vec<u32> = (0..size).map(|_| rng.gen_range(0..=2)).collect();
                exps.sort_unstable();
                exps
            };
            let table = vec![(x1, row()), (x1m1, row())];
            let (f, truth) = random_smith_instance(&c, size, &table, seed).unwrap();
            let report = decide(&f).unwrap();
            prop_assert_eq!(report.verdict, Verdict::EquivalentToSmithForm);
            prop_assert_eq!(report.smith.as_ref().unwrap().diagonal(), truth.diagonal());
            // internal consistency: verdict matches the per-order conjunction
            prop_assert!(report.orders.iter().all(|r| r.unit_ideal));
        }

        #[test]
        fn decide_is_invariant_under_unimodular_factors(seed in 0u64..4096) {
            let c = ctx2();
            let f = mat(&c, &[&["x1", "x2"], &["0", "x1"]]);
            let u = random_unimodular(&c, 2, 4, 1, seed);
            let v = random_unimodular(&c, 2, 4, 1, seed.wrapping_add(1));
            let g = u.matmul(&f).unwrap().matmul(&v).unwrap();
            let rf = decide(&f).unwrap();
            let rg = decide(&g).unwrap();
            prop_assert_eq!(rf.verdict, rg.verdict);
            prop_assert_eq!(rf.d_chain, rg.d_chain);
            prop_assert_eq!(rf.failing_order, rg.failing_order);
        }
    }
}
