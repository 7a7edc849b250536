//! Canonical sparse multivariate polynomials over an exact field.
//!
//! A polynomial is a term list sorted strictly decreasing under the context's
//! monomial order with no zero coefficients, so structural equality is
//! mathematical equality. Arithmetic keeps the invariant; constructors
//! canonicalize. Operations between polynomials of different contexts panic,
//! matching the shape-mismatch convention of the scalar layer.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::context::{same_context, Monomial, MonomialOrder, VarContext};
use crate::error::{Error, Result};
use crate::scalar::{abs, is_negative, Scalar};

#[derive(Clone)]
pub struct Polynomial {
    ctx: Arc<VarContext>,
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VarContext>) -> Polynomial {
        Polynomial { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Polynomial {
        Polynomial::constant(ctx, ctx.field().one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Scalar) -> Polynomial {
        assert_eq!(c.field(), ctx.field(), "scalar from a different field");
        if c.is_zero() {
            Polynomial::zero(ctx)
        } else {
            Polynomial { ctx: ctx.clone(), terms: vec![(Monomial::one(ctx.n_vars()), c)] }
        }
    }

    pub fn integer(ctx: &Arc<VarContext>, n: i64) -> Polynomial {
        Polynomial::constant(ctx, ctx.field().integer(n))
    }

    pub fn variable(ctx: &Arc<VarContext>, idx: usize) -> Result<Polynomial> {
        if idx >= ctx.n_vars() {
            return Err(Error::IndexOutOfRange(format!(
                "variable {idx} in a {}-variable context",
                ctx.n_vars()
            )));
        }
        Ok(Polynomial {
            ctx: ctx.clone(),
            terms: vec![(Monomial::var(ctx.n_vars(), idx), ctx.field().one())],
        })
    }

    /// Canonicalizes an arbitrary term list: merges duplicate monomials, drops
    /// zeros, sorts descending under the context order.
    pub fn from_terms(
        ctx: &Arc<VarContext>,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Polynomial {
        let order = ctx.order();
        let mut list: Vec<(Monomial, Scalar)> = Vec::new();
        for (m, c) in terms {
            assert_eq!(m.n_vars(), ctx.n_vars(), "exponent vector of wrong width");
            assert_eq!(c.field(), ctx.field(), "scalar from a different field");
            list.push((m, c));
        }
        list.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(list.len());
        for (m, c) in list {
            match out.last_mut() {
                Some((last_m, last_c)) if *last_m == m => {
                    *last_c = last_c.add(&c);
                    if last_c.is_zero() {
                        out.pop();
                    }
                }
                _ => {
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                }
            }
        }
        Polynomial { ctx: ctx.clone(), terms: out }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The scalar value when the polynomial is constant.
    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            Some(self.ctx.field().zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Leading (monomial, coefficient) under the context order; None for zero.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self) -> Option<&Scalar> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Total degree; zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(var)).max().unwrap_or(0)
    }

    /// Largest variable index with a nonzero exponent anywhere; None when constant.
    pub fn max_present_var(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (m, _) in &self.terms {
            for (i, &e) in m.exps().iter().enumerate().rev() {
                if e > 0 {
                    best = Some(best.map_or(i, |b| b.max(i)));
                    break;
                }
            }
        }
        best
    }

    /// True when every term uses only the given variable (constants included).
    pub fn is_univariate_in(&self, var: usize) -> bool {
        self.terms.iter().all(|(m, _)| {
            m.exps().iter().enumerate().all(|(i, &e)| i == var || e == 0)
        })
    }

    pub fn same_context(&self, other: &Polynomial) -> bool {
        same_context(&self.ctx, &other.ctx)
    }

    fn assert_same_context(&self, other: &Polynomial) {
        assert!(self.same_context(other), "mismatched variable contexts");
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_context(other);
        let order = self.ctx.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match order.cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.add(&other.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { ctx: self.ctx.clone(), terms: out }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    /// Multiplies by a single term. Monomial orders respect multiplication, so
    /// the sorted invariant survives without a re-sort.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(tm, tc)| (tm.mul(m), tc.mul(c))).collect(),
        }
    }

    pub fn mul_scalar(&self, c: &Scalar) -> Polynomial {
        self.mul_term(&Monomial::one(self.ctx.n_vars()), c)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_context(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        if self.nterms() == 1 {
            let (m, c) = (&self.terms[0].0, &self.terms[0].1);
            return other.mul_term(m, c);
        }
        if other.nterms() == 1 {
            let (m, c) = (&other.terms[0].0, &other.terms[0].1);
            return self.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(existing) => *existing = existing.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let order = self.ctx.order();
        let mut terms: Vec<(Monomial, Scalar)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { ctx: self.ctx.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multivariate division with remainder by an ordered divisor list: returns
    /// (quotients, remainder) with `self = sum q_k d_k + r` and no remainder
    /// term divisible by any divisor's leading monomial.
    pub fn divrem(&self, divisors: &[Polynomial]) -> Result<(Vec<Polynomial>, Polynomial)> {
        for d in divisors {
            if d.is_zero() {
                return Err(Error::ZeroDivisor);
            }
            if !self.same_context(d) {
                return Err(Error::ContextMismatch);
            }
        }
        let mut quotients = vec![Polynomial::zero(&self.ctx); divisors.len()];
        let mut rem_terms: Vec<(Monomial, Scalar)> = Vec::new();
        let mut p = self.clone();
        'outer: while let Some((lm, lc)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            for (k, d) in divisors.iter().enumerate() {
                let (dm, dc) = d.leading().expect("divisors are nonzero");
                if let Some(q_mono) = lm.div(dm) {
                    let q_coeff = lc.div(dc);
                    quotients[k] = quotients[k].add(&Polynomial {
                        ctx: self.ctx.clone(),
                        terms: vec![(q_mono.clone(), q_coeff.clone())],
                    });
                    p = p.sub(&d.mul_term(&q_mono, &q_coeff));
                    continue 'outer;
                }
            }
            // leading terms strictly decrease, so pushing keeps rem_terms sorted
            rem_terms.push((lm, lc));
            p.terms.remove(0);
        }
        let remainder = Polynomial { ctx: self.ctx.clone(), terms: rem_terms };
        Ok((quotients, remainder))
    }

    /// Quotient when the division is exact, None otherwise (including zero divisor).
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        let (mut qs, r) = self.divrem(std::slice::from_ref(d)).ok()?;
        if r.is_zero() {
            Some(qs.remove(0))
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Polynomial) -> bool {
        !self.is_zero() && other.exact_div(self).is_some()
    }

    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.mul_scalar(&lc.inv()),
        }
    }

    /// Re-sorts the term list under another monomial order (new context).
    pub fn with_order(&self, order: MonomialOrder) -> Polynomial {
        if self.ctx.order() == order {
            return self.clone();
        }
        let ctx = self.ctx.with_order(order);
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { ctx, terms }
    }

    /// Rebinds to an equal context (used to collapse Arc duplication).
    pub fn with_context(&self, ctx: &Arc<VarContext>) -> Polynomial {
        assert!(same_context(&self.ctx, ctx), "mismatched variable contexts");
        Polynomial { ctx: ctx.clone(), terms: self.terms.clone() }
    }

    /// Substitutes polynomials for named variables; a ring homomorphism.
    pub fn substitute(&self, assignments: &[(&str, Polynomial)]) -> Result<Polynomial> {
        let mut by_index: HashMap<usize, &Polynomial> = HashMap::new();
        for (name, value) in assignments {
            let idx = self
                .ctx
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            if !same_context(&self.ctx, value.context()) {
                return Err(Error::ContextMismatch);
            }
            by_index.insert(idx, value);
        }
        // power tables keep repeated exponentiation of the same value cheap
        let mut powers: HashMap<usize, Vec<Polynomial>> = HashMap::new();
        for (&idx, &value) in &by_index {
            let max_e = self.degree_in(idx);
            let mut table = Vec::with_capacity(max_e as usize + 1);
            table.push(Polynomial::one(&self.ctx));
            for _ in 0..max_e {
                table.push(table.last().unwrap().mul(value));
            }
            powers.insert(idx, table);
        }
        let mut result = Polynomial::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut kept = vec![0u32; self.ctx.n_vars()];
            let mut piece = Polynomial::constant(&self.ctx, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match powers.get(&i) {
                    Some(table) => piece = piece.mul(&table[e as usize]),
                    None => kept[i] = e,
                }
            }
            piece = piece.mul_term(&Monomial::from_exps(kept), &self.ctx.field().one());
            result = result.add(&piece);
        }
        Ok(result)
    }

    /// Substitutes scalar values for named variables.
    pub fn substitute_scalars(&self, assignments: &[(&str, Scalar)]) -> Result<Polynomial> {
        let polys: Vec<(&str, Polynomial)> = assignments
            .iter()
            .map(|(name, s)| (*name, Polynomial::constant(&self.ctx, s.clone())))
            .collect();
        self.substitute(&polys)
    }

    /// Deterministic total order independent of the active monomial order:
    /// compares lex-sorted term sequences, monomials first, then coefficients.
    pub fn canonical_cmp(&self, other: &Polynomial) -> Ordering {
        let a = self.lex_terms();
        let b = other.lex_terms();
        for ((ma, ca), (mb, cb)) in a.iter().zip(&b) {
            match MonomialOrder::Lex.cmp(ma, mb) {
                Ordering::Equal => {}
                ord => return ord,
            }
            match ca.canonical_cmp(cb) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        a.len().cmp(&b.len())
    }

    /// Terms sorted lex-descending regardless of the context order.
    fn lex_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut view: Vec<(&Monomial, &Scalar)> =
            self.terms.iter().map(|(m, c)| (m, c)).collect();
        if self.ctx.order() != MonomialOrder::Lex {
            view.sort_by(|a, b| MonomialOrder::Lex.cmp(b.0, a.0));
        }
        view
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

/// Printing is always lex-descending so output is stable across monomial
/// orders, and the result re-parses to the same polynomial: rationals as a/b,
/// explicit `*` everywhere, `^` only for exponents above 1.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.lex_terms().iter().enumerate() {
            let neg = is_negative(c);
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let mag = abs(c);
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                let mut first = true;
                for (i, &e) in m.exps().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, "*")?;
                    }
                    first = false;
                    write!(f, "{}", self.ctx.name(i))?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Monic gcd of two polynomials. `gcd(f, 0)` is the monic normalization of f;
/// any nonzero constant input collapses the gcd to 1.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    assert!(a.same_context(b), "mismatched variable contexts");
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.context());
    }
    gcd_inner(a, b).monic()
}

/// Monic gcd of a list, folding smallest inputs first and stopping as soon as
/// the running gcd hits a constant.
pub fn gcd_many(polys: &[Polynomial]) -> Result<Polynomial> {
    if polys.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut nonzero: Vec<&Polynomial> = polys.iter().filter(|p| !p.is_zero()).collect();
    match nonzero.first() {
        None => return Ok(polys[0].clone()),
        Some(first) => {
            for p in &nonzero {
                assert!(first.same_context(p), "mismatched variable contexts");
            }
        }
    }
    nonzero.sort_by(|a, b| {
        (a.total_degree(), a.nterms())
            .cmp(&(b.total_degree(), b.nterms()))
            .then_with(|| a.canonical_cmp(b))
    });
    let mut acc = nonzero[0].monic();
    for p in &nonzero[1..] {
        if acc.is_one() {
            break;
        }
        acc = gcd(&acc, p);
    }
    Ok(acc)
}

/// Gcd up to a nonzero scalar factor; both inputs nonzero and nonconstant.
fn gcd_inner(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let va = a.max_present_var().expect("nonconstant");
    let vb = b.max_present_var().expect("nonconstant");
    let v = va.max(vb);
    if a.is_univariate_in(v) && b.is_univariate_in(v) {
        return univariate_gcd(a, b);
    }
    let (ca, pa) = content_and_primitive(a, v);
    let (cb, pb) = content_and_primitive(b, v);
    let cont = gcd(&ca, &cb);
    let mut f = pa;
    let mut g = pb;
    if f.degree_in(v) < g.degree_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    // primitive polynomial remainder sequence in the variable v
    while !g.is_zero() {
        let mut r = pseudo_rem(&f, &g, v);
        if !r.is_zero() {
            r = primitive_part(&r, v).monic();
        }
        f = g;
        g = r;
    }
    cont.mul(&f)
}

/// Euclid with monic remainders for polynomials sharing a single variable.
fn univariate_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut f = a.monic();
    let mut g = b.monic();
    while !g.is_zero() {
        let (_, r) = f.divrem(std::slice::from_ref(&g)).expect("nonzero divisor");
        f = g;
        g = r.monic();
    }
    f
}

/// Repeatedly cancels the leading coefficient in `v`; the result is a scalar
/// multiple of the pseudo-remainder, which is all the PRS needs because the
/// caller takes a primitive part immediately after.
fn pseudo_rem(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let db = b.degree_in(v);
    let lb = coeff_in(b, v, db);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < db {
            break;
        }
        let lr = coeff_in(&r, v, dr);
        let shift = Monomial::var(r.context().n_vars(), v).pow(dr - db);
        // lb * r - lr * x_v^(dr-db) * b kills the degree-dr coefficient
        r = r.mul(&lb).sub(&lr.mul_term(&shift, &r.context().field().one()).mul(b));
    }
    r
}

/// Coefficient of v^k viewed in (K[others])[v].
fn coeff_in(p: &Polynomial, v: usize, k: u32) -> Polynomial {
    let terms: Vec<(Monomial, Scalar)> = p
        .terms()
        .iter()
        .filter(|(m, _)| m.exp(v) == k)
        .map(|(m, c)| {
            let mut e = m.exps().to_vec();
            e[v] = 0;
            (Monomial::from_exps(e), c.clone())
        })
        .collect();
    Polynomial::from_terms(p.context(), terms)
}

/// (content, primitive part) of p with respect to v: the content is the monic
/// gcd of the v-coefficients, and p = content * primitive exactly.
fn content_and_primitive(p: &Polynomial, v: usize) -> (Polynomial, Polynomial) {
    let mut coeffs = Vec::new();
    for k in 0..=p.degree_in(v) {
        let c = coeff_in(p, v, k);
        if !c.is_zero() {
            coeffs.push(c);
        }
    }
    let content = gcd_many(&coeffs).expect("nonzero polynomial has coefficients");
    let primitive = p.exact_div(&content).expect("content divides exactly");
    (content, primitive)
}

fn primitive_part(p: &Polynomial, v: usize) -> Polynomial {
    content_and_primitive(p, v).1
}
