//! Smith forms and univariate factorization.
//!
//! Three layers live here. [`smith_candidate`] turns the minor-gcd chain of
//! any matrix into the diagonal the Smith form must have. [`factor_univariate`]
//! factors polynomials in the first variable: over the rationals by Yun
//! square-free splitting, rational root extraction, and Kronecker
//! interpolation up to a degree bound; over GF(p) by square-free splitting,
//! distinct-degree factorization, and seeded Cantor-Zassenhaus splitting.
//! [`smith_univariate`] diagonalizes a univariate matrix by Euclidean pivoting
//! and returns unimodular transforms certifying the result.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::VarContext;
use crate::error::{Error, Result};
use crate::matrix::{ElementaryOp, PolyMatrix};
use crate::poly::Polynomial;
use crate::scalar::{Field, Scalar};

/// Diagonal of a Smith form: monic entries, each dividing the next, embedded
/// in an ambient rows x cols shape. Construction checks the divisibility
/// chain, so holding a value of this type is itself a certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithForm {
    rows: usize,
    cols: usize,
    diag: Vec<Polynomial>,
}

impl SmithForm {
    pub fn new(rows: usize, cols: usize, diag: Vec<Polynomial>) -> Result<SmithForm> {
        if diag.len() > rows.min(cols) {
            return Err(Error::DimensionMismatch(format!(
                "{} diagonal entries in a {rows}x{cols} form",
                diag.len()
            )));
        }
        for (k, e) in diag.iter().enumerate() {
            if e.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            if !e.leading_coefficient().unwrap().is_one() {
                return Err(Error::Document(format!("diagonal entry {e} is not monic")));
            }
            if k > 0 && e.exact_div(&diag[k - 1]).is_none() {
                return Err(Error::Document(format!(
                    "diagonal entry {} does not divide its successor {e}",
                    diag[k - 1]
                )));
            }
        }
        Ok(SmithForm { rows, cols, diag })
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn diagonal(&self) -> &[Polynomial] {
        &self.diag
    }

    /// The full rows x cols matrix with the diagonal in place.
    pub fn embed(&self, ctx: &Arc<VarContext>) -> PolyMatrix {
        PolyMatrix::diagonal(ctx, &self.diag, self.rows, self.cols)
            .expect("rank fits ambient dimensions")
    }
}

/// The Smith diagonal any equivalent-to-Smith matrix must have: successive
/// quotients of the minor gcd chain. This is always well defined; whether the
/// matrix actually attains it is the equivalence question.
pub fn smith_candidate(f: &PolyMatrix) -> SmithForm {
    let d = f.d_chain();
    let diag: Vec<Polynomial> = (1..d.len())
        .map(|i| d[i].exact_div(&d[i - 1]).expect("minor gcds form a divisibility chain"))
        .collect();
    SmithForm::new(f.rows(), f.cols(), diag).expect("quotients of a gcd chain are a Smith diagonal")
}

/// factor multiplicities of a factored polynomial: unit * product p^e.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeFactorization {
    pub unit: Scalar,
    /// Monic irreducible factors with multiplicities, sorted by degree then by
    /// canonical coefficient comparison.
    pub factors: Vec<(Polynomial, u32)>,
}

impl PrimeFactorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self, ctx: &Arc<VarContext>) -> Polynomial {
        let mut acc = Polynomial::constant(ctx, self.unit.clone());
        for (p, e) in &self.factors {
            acc = acc.mul(&p.pow(*e));
        }
        acc
    }
}

/// Knobs for [`factor_univariate_with`].
#[derive(Debug, Clone)]
pub struct FactorOptions {
    /// Largest degree the Kronecker factor search will take on over the
    /// rationals; parts that remain above it need hints.
    pub degree_bound: usize,
    /// Candidate factors to divide out first. Each is verified by division;
    /// irreducibility is additionally checked when the hint's degree is within
    /// the bound, and trusted otherwise.
    pub hints: Vec<Polynomial>,
    /// Seed for the randomized equal-degree splitting over GF(p).
    pub seed: u64,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions { degree_bound: 8, hints: Vec::new(), seed: 0 }
    }
}

/// Factors a polynomial univariate in the first variable into monic
/// irreducibles with default options.
pub fn factor_univariate(f: &Polynomial) -> Result<PrimeFactorization> {
    factor_univariate_with(f, &FactorOptions::default())
}

pub fn factor_univariate_with(
    f: &Polynomial,
    opts: &FactorOptions,
) -> Result<PrimeFactorization> {
    let ctx = f.context();
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_univariate_in(0) {
        return Err(Error::NotUnivariate(ctx.name(0).to_string()));
    }

    let unit = f.leading_coefficient().unwrap().clone();
    let mut work = UPoly::from_polynomial(&f.monic());
    let mut found: Vec<(UPoly, u32)> = Vec::new();

    for hint in &opts.hints {
        if !hint.is_univariate_in(0) {
            return Err(Error::NotUnivariate(ctx.name(0).to_string()));
        }
        if hint.is_constant() {
            continue;
        }
        let h = UPoly::from_polynomial(&hint.monic());
        let mut count = 0u32;
        while let Some(q) = work.exact_div(&h) {
            work = q;
            count += 1;
        }
        if count == 0 {
            continue;
        }
        if h.degree() <= opts.degree_bound {
            let inner = factor_univariate_with(
                &h.to_polynomial(ctx),
                &FactorOptions { degree_bound: opts.degree_bound, hints: Vec::new(), seed: opts.seed },
            )?;
            if inner.factors.len() != 1 || inner.factors[0].1 != 1 {
                return Err(Error::NotIrreducible(hint.to_string()));
            }
        }
        found.push((h, count));
    }

    if work.degree() > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        match ctx.field() {
            Field::Rational => {
                for (part, mult) in yun_squarefree(&work) {
                    for p in factor_squarefree_rational(part, opts.degree_bound)? {
                        found.push((p, mult));
                    }
                }
            }
            Field::Prime(p) => {
                for (part, mult) in squarefree_mod_p(&work, p) {
                    for (sub, d) in distinct_degree(&part, p) {
                        for irr in equal_degree_split(&sub, d, p, &mut rng) {
                            found.push((irr, mult));
                        }
                    }
                }
            }
        }
    }

    // merge duplicates (a hint can coincide with a discovered factor), then
    // fix the deterministic order
    let mut factors: Vec<(Polynomial, u32)> = Vec::new();
    'merge: for (u, e) in found {
        let p = u.to_polynomial(ctx);
        for (q, me) in factors.iter_mut() {
            if *q == p {
                *me += e;
                continue 'merge;
            }
        }
        factors.push((p, e));
    }
    factors.sort_by(|a, b| {
        a.0.total_degree().cmp(&b.0.total_degree()).then_with(|| a.0.canonical_cmp(&b.0))
    });

    let result = PrimeFactorization { unit, factors };
    assert_eq!(result.expand(ctx), *f, "factorization must reproduce the input");
    Ok(result)
}

/// Valuation profile of a square matrix at one irreducible prime p: the
/// exponent of p in each Smith diagonal entry, read off the minor gcd chain.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeSmithProfile {
    pub prime: Polynomial,
    /// s_1 <= ... <= s_l; all zero when p does not divide the determinant.
    pub exponents: Vec<u32>,
}

impl PrimeSmithProfile {
    /// diag{p^s_1, ..., p^s_l} as a square matrix.
    pub fn embed(&self) -> PolyMatrix {
        let ctx = self.prime.context();
        let diag: Vec<Polynomial> =
            self.exponents.iter().map(|&e| self.prime.pow(e)).collect();
        let n = diag.len();
        PolyMatrix::diagonal(ctx, &diag, n, n).expect("square embedding")
    }
}

/// Per-prime Smith profile of a square matrix whose determinant is nonzero
/// and univariate in the first variable. The prime must be irreducible and
/// univariate in the same variable; it is monic-normalized internally.
pub fn smith_wrt_prime(f: &PolyMatrix, prime: &Polynomial) -> Result<PrimeSmithProfile> {
    let ctx = f.context();
    let var = ctx.name(0).to_string();
    if !prime.is_univariate_in(0) {
        return Err(Error::NotUnivariate(var));
    }
    if prime.is_constant() {
        return Err(Error::NotIrreducible(prime.to_string()));
    }
    let p = prime.monic();
    let check = factor_univariate(&p)?;
    if check.factors.len() != 1 || check.factors[0].1 != 1 {
        return Err(Error::NotIrreducible(prime.to_string()));
    }

    let det = f.determinant()?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    if !det.is_univariate_in(0) {
        return Err(Error::NotUnivariate(var));
    }

    let d = f.d_chain();
    debug_assert_eq!(d.len(), f.rows() + 1, "nonzero determinant means full rank");
    let vals: Vec<u32> = d
        .iter()
        .map(|di| {
            debug_assert!(di.is_univariate_in(0), "divisors of a univariate stay univariate");
            valuation(di, &p)
        })
        .collect();
    let exponents: Vec<u32> = (1..vals.len()).map(|j| vals[j] - vals[j - 1]).collect();
    debug_assert!(
        exponents.windows(2).all(|w| w[0] <= w[1]),
        "per-prime exponents inherit the divisibility chain"
    );
    Ok(PrimeSmithProfile { prime: p, exponents })
}

/// Exponent of `p` in `f`: the number of times p divides f exactly.
fn valuation(f: &Polynomial, p: &Polynomial) -> u32 {
    let mut k = 0;
    let mut cur = f.clone();
    while let Some(q) = cur.exact_div(p) {
        cur = q;
        k += 1;
    }
    k
}

/// Unimodular U and V from a diagonalization, with U * A * V = S.
#[derive(Debug, Clone)]
pub struct TransformPair {
    pub u: PolyMatrix,
    pub v: PolyMatrix,
}

/// Smith decomposition of a matrix univariate in the first variable:
/// Euclidean reduction drives the smallest-degree pivot to each diagonal slot,
/// clears its row and column, and enforces divisibility into the lower block.
/// Returns the transforms and the Smith form; the identity U A V = S and the
/// unimodularity of U and V are re-verified before returning.
pub fn smith_univariate(a: &PolyMatrix) -> Result<(TransformPair, SmithForm)> {
    let ctx = a.context();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if !a.at(i, j).is_univariate_in(0) {
                return Err(Error::NotUnivariate(ctx.name(0).to_string()));
            }
        }
    }
    let (l, m) = (a.rows(), a.cols());
    let mut work = a.clone();
    let mut u = PolyMatrix::identity(ctx, l);
    let mut v = PolyMatrix::identity(ctx, m);

    fn row_op(work: &mut PolyMatrix, u: &mut PolyMatrix, op: ElementaryOp) {
        *work = work.apply_elementary(&op).expect("valid row op");
        *u = u.apply_elementary(&op).expect("valid row op");
    }
    fn col_op(work: &mut PolyMatrix, v: &mut PolyMatrix, op: ElementaryOp) {
        *work = work.apply_elementary(&op).expect("valid col op");
        *v = v.apply_elementary(&op).expect("valid col op");
    }

    let mut t = 0;
    while t < l.min(m) {
        // smallest-degree nonzero entry of the trailing block becomes the pivot
        let mut pivot: Option<(usize, usize, u32)> = None;
        for i in t..l {
            for j in t..m {
                let e = work.at(i, j);
                if e.is_zero() {
                    continue;
                }
                let deg = e.degree_in(0);
                if pivot.map_or(true, |(_, _, d)| deg < d) {
                    pivot = Some((i, j, deg));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        if pi != t {
            row_op(&mut work, &mut u, ElementaryOp::RowSwap(t, pi));
        }
        if pj != t {
            col_op(&mut work, &mut v, ElementaryOp::ColSwap(t, pj));
        }

        'pivot: loop {
            // clear the column below the pivot; a nonzero remainder hands the
            // pivot role to the smaller-degree entry
            let mut i = t + 1;
            while i < l {
                if work.at(i, t).is_zero() {
                    i += 1;
                    continue;
                }
                let (q, r) = euclid_step(work.at(i, t), work.at(t, t));
                row_op(
                    &mut work,
                    &mut u,
                    ElementaryOp::RowAddMul { dst: i, src: t, factor: q.neg() },
                );
                if !r.is_zero() {
                    row_op(&mut work, &mut u, ElementaryOp::RowSwap(t, i));
                    i = t + 1;
                    continue;
                }
                i += 1;
            }
            // clear the row right of the pivot; a column swap here can dirty
            // the column again, so restart the whole stage when it happens
            let mut swapped = false;
            let mut j = t + 1;
            while j < m {
                if work.at(t, j).is_zero() {
                    j += 1;
                    continue;
                }
                let (q, r) = euclid_step(work.at(t, j), work.at(t, t));
                col_op(
                    &mut work,
                    &mut v,
                    ElementaryOp::ColAddMul { dst: j, src: t, factor: q.neg() },
                );
                if !r.is_zero() {
                    col_op(&mut work, &mut v, ElementaryOp::ColSwap(t, j));
                    swapped = true;
                    break;
                }
                j += 1;
            }
            if swapped {
                continue 'pivot;
            }
            // divisibility sweep: pull any offending row up so the next pass
            // strictly shrinks the pivot degree
            let mut offender: Option<usize> = None;
            'find: for i in t + 1..l {
                for j in t + 1..m {
                    if !work.at(i, j).is_zero()
                        && work.at(i, j).exact_div(work.at(t, t)).is_none()
                    {
                        offender = Some(i);
                        break 'find;
                    }
                }
            }
            match offender {
                Some(i) => {
                    row_op(
                        &mut work,
                        &mut u,
                        ElementaryOp::RowAddMul {
                            dst: t,
                            src: i,
                            factor: Polynomial::one(ctx),
                        },
                    );
                    continue 'pivot;
                }
                None => break 'pivot,
            }
        }

        let lc = work.at(t, t).leading_coefficient().unwrap().clone();
        if !lc.is_one() {
            row_op(&mut work, &mut u, ElementaryOp::RowScale(t, lc.inv()));
        }
        t += 1;
    }

    let diag: Vec<Polynomial> =
        (0..t).map(|k| work.at(k, k).clone()).collect();
    let smith = SmithForm::new(l, m, diag).expect("pivots form a monic divisibility chain");
    let product = u.matmul(a).expect("square transform").matmul(&v).expect("square transform");
    assert_eq!(product, smith.embed(ctx), "transform identity U*A*V = S must hold");
    assert!(u.is_unimodular().expect("square"), "U must be unimodular");
    assert!(v.is_unimodular().expect("square"), "V must be unimodular");
    Ok((TransformPair { u, v }, smith))
}

/// Quotient and remainder of univariate division by a nonzero divisor.
fn euclid_step(f: &Polynomial, d: &Polynomial) -> (Polynomial, Polynomial) {
    let (mut qs, r) = f.divrem(std::slice::from_ref(d)).expect("nonzero pivot");
    (qs.remove(0), r)
}

/// Dense univariate polynomial over a field, lowest degree first. Used only
/// inside factorization where degree-indexed access matters more than
/// sparsity.
#[derive(Debug, Clone, PartialEq)]
struct UPoly {
    field: Field,
    c: Vec<Scalar>,
}

impl UPoly {
    fn zero(field: Field) -> UPoly {
        UPoly { field, c: Vec::new() }
    }

    fn constant(field: Field, s: Scalar) -> UPoly {
        let mut u = UPoly { field, c: vec![s] };
        u.trim();
        u
    }

    fn x(field: Field) -> UPoly {
        UPoly { field, c: vec![field.zero(), field.one()] }
    }

    fn from_polynomial(p: &Polynomial) -> UPoly {
        let field = p.context().field();
        let mut c = vec![field.zero(); p.degree_in(0) as usize + 1];
        for (m, s) in p.terms() {
            c[m.exp(0) as usize] = s.clone();
        }
        let mut u = UPoly { field, c };
        u.trim();
        u
    }

    fn to_polynomial(&self, ctx: &Arc<VarContext>) -> Polynomial {
        use crate::context::Monomial;
        Polynomial::from_terms(
            ctx,
            self.c.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(k, s)| {
                (Monomial::var(ctx.n_vars(), 0).pow(k as u32), s.clone())
            }),
        )
    }

    fn trim(&mut self) {
        while matches!(self.c.last(), Some(s) if s.is_zero()) {
            self.c.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree with zero mapped to 0 (callers branch on is_zero first).
    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn lc(&self) -> &Scalar {
        self.c.last().expect("nonzero")
    }

    fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    fn monic(&self) -> UPoly {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        let inv = self.lc().inv();
        UPoly { field: self.field, c: self.c.iter().map(|s| s.mul(&inv)).collect() }
    }

    fn add(&self, other: &UPoly) -> UPoly {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.c.get(k).cloned().unwrap_or_else(|| self.field.zero());
            let b = other.c.get(k).cloned().unwrap_or_else(|| self.field.zero());
            c.push(a.add(&b));
        }
        let mut u = UPoly { field: self.field, c };
        u.trim();
        u
    }

    fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    fn neg(&self) -> UPoly {
        UPoly { field: self.field, c: self.c.iter().map(|s| s.neg()).collect() }
    }

    fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        let mut u = UPoly { field: self.field, c };
        u.trim();
        u
    }

    fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero");
        if self.is_zero() || self.degree() < d.degree() {
            return (UPoly::zero(self.field), self.clone());
        }
        let mut r = self.c.clone();
        let dd = d.degree();
        let lc_inv = d.lc().inv();
        let mut q = vec![self.field.zero(); self.degree() - dd + 1];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let f = r[k].mul(&lc_inv);
            q[k - dd] = f.clone();
            for (j, dc) in d.c.iter().enumerate() {
                r[k - dd + j] = r[k - dd + j].sub(&f.mul(dc));
            }
        }
        let mut qu = UPoly { field: self.field, c: q };
        qu.trim();
        r.truncate(dd);
        let mut ru = UPoly { field: self.field, c: r };
        ru.trim();
        (qu, ru)
    }

    fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    fn gcd(&self, other: &UPoly) -> UPoly {
        let mut f = self.monic();
        let mut g = other.monic();
        while !g.is_zero() {
            let r = f.rem(&g).monic();
            f = g;
            g = r;
        }
        f
    }

    fn derivative(&self) -> UPoly {
        if self.c.len() <= 1 {
            return UPoly::zero(self.field);
        }
        let c: Vec<Scalar> = self.c[1..]
            .iter()
            .enumerate()
            .map(|(k, s)| s.mul(&self.field.integer(k as i64 + 1)))
            .collect();
        let mut u = UPoly { field: self.field, c };
        u.trim();
        u
    }

    /// self^e mod m by square and multiply over the bits of e.
    fn pow_mod(&self, e: &BigUint, m: &UPoly) -> UPoly {
        let mut acc = UPoly::constant(self.field, self.field.one());
        let mut base = self.rem(m);
        let bits = e.bits();
        for k in 0..bits {
            if e.bit(k) {
                acc = acc.mul(&base).rem(m);
            }
            if k + 1 < bits {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }
}

/// Yun's square-free decomposition in characteristic zero: returns pairwise
/// coprime square-free parts with their multiplicities (degree-0 parts are
/// dropped). Input monic, nonconstant.
fn yun_squarefree(f: &UPoly) -> Vec<(UPoly, u32)> {
    let mut out = Vec::new();
    let df = f.derivative();
    let g = f.gcd(&df);
    let mut b = f.exact_div(&g).expect("gcd divides");
    let mut c = df.exact_div(&g).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut i = 1u32;
    loop {
        let a = b.gcd(&d);
        if a.degree() > 0 {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a).expect("gcd divides");
        if b.degree() == 0 {
            break;
        }
        c = d.exact_div(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Square-free decomposition over GF(p), handling the vanishing-derivative
/// case via p-th roots (the Frobenius fixes scalars, so the root just
/// contracts exponents).
fn squarefree_mod_p(f: &UPoly, p: u64) -> Vec<(UPoly, u32)> {
    fn pth_root(f: &UPoly, p: u64) -> UPoly {
        let step = p as usize;
        let c: Vec<Scalar> = f.c.iter().step_by(step).cloned().collect();
        let mut u = UPoly { field: f.field, c };
        u.trim();
        u
    }

    let mut out: Vec<(UPoly, u32)> = Vec::new();
    let f = f.monic();
    if f.degree() == 0 {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        // f = h(x^p); recurse and scale multiplicities
        let h = pth_root(&f, p);
        for (part, mult) in squarefree_mod_p(&h, p) {
            out.push((part, mult * p as u32));
        }
        return out;
    }
    let mut g = f.gcd(&df);
    let mut w = f.exact_div(&g).expect("gcd divides");
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&g);
        let z = w.exact_div(&y).expect("gcd divides");
        if z.degree() > 0 {
            out.push((z, i));
        }
        w = y;
        g = g.exact_div(&w).expect("gcd divides");
        i += 1;
    }
    if g.degree() > 0 {
        // leftover p-th power part
        let h = pth_root(&g, p);
        for (part, mult) in squarefree_mod_p(&h, p) {
            out.push((part, mult * p as u32));
        }
    }
    out
}

/// Distinct-degree stage: splits a monic square-free polynomial into products
/// of irreducibles of equal degree d, returned with that d.
fn distinct_degree(f: &UPoly, p: u64) -> Vec<(UPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.monic();
    let x = UPoly::x(f.field);
    let mut h = x.clone();
    let mut d = 0usize;
    while f.degree() > 0 {
        d += 1;
        if 2 * d > f.degree() {
            out.push((f.clone(), f.degree()));
            break;
        }
        h = h.pow_mod(&BigUint::from(p), &f);
        let g = f.gcd(&h.sub(&x));
        if g.degree() > 0 {
            out.push((g.clone(), d));
            f = f.exact_div(&g).expect("gcd divides");
            h = h.rem(&f);
        }
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting with a deterministic seeded
/// stream; the p = 2 case uses the trace map instead of the odd-power trick.
fn equal_degree_split(f: &UPoly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<UPoly> {
    let f = f.monic();
    if f.degree() == d {
        return vec![f];
    }
    let field = f.field;
    loop {
        // random element of GF(p)[x] / (f), nonconstant preferred
        let c: Vec<Scalar> = (0..f.degree())
            .map(|_| Scalar::Mod { value: rng.gen_range(0..p), modulus: p })
            .collect();
        let mut a = UPoly { field, c };
        a.trim();
        if a.is_zero() || a.degree() == 0 {
            continue;
        }
        let g = f.gcd(&a);
        let h = if g.degree() > 0 {
            g
        } else if p == 2 {
            // trace map a + a^2 + a^4 + ... + a^(2^(d-1)) mod f
            let mut tr = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = cur.mul(&cur).rem(&f);
                tr = tr.add(&cur);
            }
            f.gcd(&tr)
        } else {
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            let b = a.pow_mod(&e, &f);
            f.gcd(&b.sub(&UPoly::constant(field, field.one())))
        };
        if h.degree() > 0 && h.degree() < f.degree() {
            let rest = f.exact_div(&h).expect("gcd divides");
            let mut out = equal_degree_split(&h, d, p, rng);
            out.extend(equal_degree_split(&rest, d, p, rng));
            return out;
        }
    }
}

/// Factors a monic square-free rational polynomial: linear factors by root
/// extraction, everything else by Kronecker interpolation bounded by
/// `degree_bound`.
fn factor_squarefree_rational(f: UPoly, degree_bound: usize) -> Result<Vec<UPoly>> {
    let mut out = Vec::new();
    let mut work = f;

    // x itself divides iff the constant term vanishes
    if !work.is_zero() && work.c[0].is_zero() {
        let x = UPoly::x(Field::Rational);
        work = work.exact_div(&x).expect("constant term is zero");
        out.push(x);
    }

    // rational roots r/s with r | constant, s | leading (integer model)
    'roots: loop {
        if work.degree() <= 1 {
            break;
        }
        let zp = to_integer_poly(&work);
        let a0 = zp.first().expect("nonzero").clone();
        let an = zp.last().expect("nonzero").clone();
        debug_assert!(!a0.is_zero(), "x factors already removed");
        for r in divisors(&a0) {
            for s in divisors(&an) {
                for sign in [1i64, -1] {
                    let root = BigRational::new(r.clone() * BigInt::from(sign), s.clone());
                    if eval_rational(&work, &root).is_zero() {
                        let lin = UPoly {
                            field: Field::Rational,
                            c: vec![Scalar::Rat(-root.clone()), Scalar::Rat(BigRational::one())],
                        };
                        work = work.exact_div(&lin).expect("root divides");
                        out.push(lin);
                        continue 'roots;
                    }
                }
            }
        }
        break;
    }

    match work.degree() {
        0 => {}
        1 => out.push(work.monic()),
        _ => out.extend(kronecker_factor(work, degree_bound)?),
    }
    Ok(out)
}

/// Kronecker's method on a square-free polynomial with no rational roots:
/// search factor degrees 2..=deg/2 by interpolating through divisor
/// combinations of integer point values. Degrees above the bound error out.
fn kronecker_factor(f: UPoly, degree_bound: usize) -> Result<Vec<UPoly>> {
    let n = f.degree();
    if n > degree_bound {
        return Err(Error::FactorDegreeBound { degree: n, bound: degree_bound });
    }
    let zp = to_integer_poly(&f);
    let points: Vec<BigInt> = sample_points(n / 2 + 1);
    let values: Vec<BigInt> = points.iter().map(|e| eval_integer(&zp, e)).collect();
    debug_assert!(values.iter().all(|v| !v.is_zero()), "roots were extracted before");

    for dd in 2..=n / 2 {
        let pts = &points[..=dd];
        let divisor_lists: Vec<Vec<BigInt>> = values[..=dd]
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let mut ds = divisors(v);
                if k > 0 {
                    // both signs except at the first point, where the factor's
                    // sign is normalized
                    let negs: Vec<BigInt> = ds.iter().map(|d| -d).collect();
                    ds.extend(negs);
                }
                ds
            })
            .collect();
        let mut choice = vec![0usize; dd + 1];
        'combos: loop {
            let ws: Vec<BigInt> =
                choice.iter().enumerate().map(|(k, &c)| divisor_lists[k][c].clone()).collect();
            if let Some(g) = interpolate(pts, &ws) {
                if g.degree() == dd {
                    if let Some(q) = f.exact_div(&g) {
                        let mut out = kronecker_factor(g.monic(), degree_bound)?;
                        out.extend(kronecker_factor(q.monic(), degree_bound)?);
                        return Ok(out);
                    }
                }
            }
            // odometer over the divisor combinations
            for k in 0..=dd {
                choice[k] += 1;
                if choice[k] < divisor_lists[k].len() {
                    continue 'combos;
                }
                choice[k] = 0;
            }
            break;
        }
    }
    Ok(vec![f.monic()])
}

/// 0, 1, -1, 2, -2, ... as evaluation points.
fn sample_points(count: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(count);
    let mut k = 0i64;
    while out.len() < count {
        if k == 0 {
            out.push(BigInt::zero());
        } else {
            out.push(BigInt::from(k));
            if out.len() < count {
                out.push(BigInt::from(-k));
            }
        }
        k += 1;
    }
    out
}

/// Positive divisors of |n| by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Clears denominators and content: the primitive integer model with positive
/// leading coefficient, lowest degree first.
fn to_integer_poly(f: &UPoly) -> Vec<BigInt> {
    let mut den_lcm = BigInt::one();
    for s in &f.c {
        let Scalar::Rat(r) = s else { panic!("rational coefficients expected") };
        den_lcm = num_integer::lcm(den_lcm, r.denom().clone());
    }
    let mut ints: Vec<BigInt> = f
        .c
        .iter()
        .map(|s| {
            let Scalar::Rat(r) = s else { unreachable!() };
            r.numer() * (&den_lcm / r.denom())
        })
        .collect();
    let mut content = BigInt::zero();
    for v in &ints {
        content = num_integer::gcd(content, v.clone());
    }
    if !content.is_one() && !content.is_zero() {
        for v in &mut ints {
            *v /= &content;
        }
    }
    if ints.last().map_or(false, |l| l.is_negative()) {
        for v in &mut ints {
            *v = -&*v;
        }
    }
    ints
}

fn eval_integer(zp: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in zp.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn eval_rational(f: &UPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for s in f.c.iter().rev() {
        let Scalar::Rat(r) = s else { panic!("rational coefficients expected") };
        acc = acc * x + r;
    }
    acc
}

/// Lagrange interpolation through integer points; None when the data does not
/// produce a polynomial (never happens for distinct points, but the guard
/// keeps the caller honest).
fn interpolate(points: &[BigInt], values: &[BigInt]) -> Option<UPoly> {
    let field = Field::Rational;
    let mut acc = UPoly::zero(field);
    for (j, vj) in values.iter().enumerate() {
        let mut basis = UPoly::constant(field, Scalar::Rat(BigRational::from_integer(vj.clone())));
        for (k, pk) in points.iter().enumerate() {
            if k == j {
                continue;
            }
            let denom = &points[j] - pk;
            if denom.is_zero() {
                return None;
            }
            // multiply by (x - pk) / (pj - pk)
            let lin = UPoly {
                field,
                c: vec![
                    Scalar::Rat(BigRational::new(-pk.clone(), denom.clone())),
                    Scalar::Rat(BigRational::new(BigInt::one(), denom)),
                ],
            };
            basis = basis.mul(&lin);
        }
        acc = acc.add(&basis);
    }
    Some(acc)
}
