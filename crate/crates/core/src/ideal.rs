//! Ideal membership machinery: Buchberger's algorithm, reduced bases, unit
//! ideal tests, and cofactor certificates for 1.
//!
//! The pair queue uses the normal selection strategy (smallest lcm under the
//! active order) and prunes with the coprime-leading-term criterion and the
//! chain criterion. As soon as any reduction produces a nonzero constant the
//! ideal is the whole ring and the basis collapses to {1}; this short circuit
//! is what keeps unit-ideal testing cheap on the inputs that matter here.

use std::collections::HashSet;
use std::sync::Arc;

use crate::context::{same_context, Monomial, MonomialOrder, VarContext};
use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// A Groebner basis, reduced unless constructed by hand.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealBasis {
    ctx: Arc<VarContext>,
    gens: Vec<Polynomial>,
    reduced: bool,
}

impl IdealBasis {
    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    /// Basis elements, monic, sorted by ascending leading monomial.
    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// The zero ideal has an empty basis.
    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }
}

fn check_contexts(gens: &[Polynomial]) -> Result<Option<Arc<VarContext>>> {
    let mut ctx: Option<&Arc<VarContext>> = None;
    for g in gens {
        match ctx {
            None => ctx = Some(g.context()),
            Some(c) => {
                if !same_context(c, g.context()) {
                    return Err(Error::ContextMismatch);
                }
            }
        }
    }
    Ok(ctx.cloned())
}

/// Fully reduces `f` against `basis`: no remainder term is divisible by any
/// basis leading monomial.
fn reduce_full(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    if basis.is_empty() || f.is_zero() {
        return f.clone();
    }
    let (_, r) = f.divrem(basis).expect("basis elements are nonzero");
    r
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fm, fc) = f.leading().expect("nonzero");
    let (gm, gc) = g.leading().expect("nonzero");
    let l = fm.lcm(gm);
    let a = f.mul_term(&l.div(fm).unwrap(), &fc.inv());
    let b = g.mul_term(&l.div(gm).unwrap(), &gc.inv());
    a.sub(&b)
}

/// Computes the reduced Groebner basis of the ideal generated by `gens` under
/// `order`. Inputs are re-sorted into the requested order first. The zero
/// ideal yields an empty basis; the whole ring yields exactly {1}.
pub fn groebner(gens: &[Polynomial], order: MonomialOrder) -> Result<IdealBasis> {
    let ctx = match check_contexts(gens)? {
        None => return Err(Error::EmptyInput),
        Some(c) => c,
    };
    let target_ctx = if ctx.order() == order { ctx.clone() } else { ctx.with_order(order) };
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let g = if ctx.order() == order {
            g.with_context(&target_ctx)
        } else {
            g.with_order(order).with_context(&target_ctx)
        };
        if g.is_constant() {
            return Ok(unit_basis(&target_ctx));
        }
        basis.push(g.monic());
    }
    if basis.is_empty() {
        return Ok(IdealBasis { ctx: target_ctx, gens: Vec::new(), reduced: true });
    }

    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..basis.len() {
        for j in 0..i {
            let l = basis[i].leading_monomial().unwrap().lcm(basis[j].leading_monomial().unwrap());
            pairs.push((j, i, l));
        }
    }

    while !pairs.is_empty() {
        // normal strategy: smallest lcm first, index pair breaking ties
        let mut best = 0;
        for k in 1..pairs.len() {
            let ord = order.cmp(&pairs[k].2, &pairs[best].2);
            if ord == std::cmp::Ordering::Less
                || (ord == std::cmp::Ordering::Equal
                    && (pairs[k].0, pairs[k].1) < (pairs[best].0, pairs[best].1))
            {
                best = k;
            }
        }
        let (i, j, lcm) = pairs.swap_remove(best);
        done.insert((i, j));

        let lm_i = basis[i].leading_monomial().unwrap();
        let lm_j = basis[j].leading_monomial().unwrap();
        // coprime criterion: disjoint leading terms reduce to zero
        if lm_i.mul(lm_j) == lcm {
            continue;
        }
        // chain criterion: a third element dividing the lcm whose pairs with
        // both ends are already settled makes this pair redundant
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(&lcm)
                && done.contains(&key(i, k))
                && done.contains(&key(j, k))
        });
        if chained {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j]);
        let h = reduce_full(&s, &basis);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit_basis(&target_ctx));
        }
        let h = h.monic();
        let new_idx = basis.len();
        for k in 0..new_idx {
            let l = basis[k].leading_monomial().unwrap().lcm(h.leading_monomial().unwrap());
            pairs.push((k, new_idx, l));
        }
        basis.push(h);
    }

    Ok(IdealBasis { ctx: target_ctx, gens: interreduce(basis, order), reduced: true })
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn unit_basis(ctx: &Arc<VarContext>) -> IdealBasis {
    IdealBasis { ctx: ctx.clone(), gens: vec![Polynomial::one(ctx)], reduced: true }
}

/// Minimizes (drops elements whose leading monomial another divides) and then
/// tail-reduces, producing the unique reduced basis sorted by leading monomial.
fn interreduce(mut basis: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    basis.sort_by(|a, b| {
        order
            .cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
            .then_with(|| a.canonical_cmp(b))
    });
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.leading_monomial().unwrap();
        if !minimal.iter().any(|m| m.leading_monomial().unwrap().divides(lm)) {
            minimal.push(g);
        }
    }
    let snapshot = minimal.clone();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (k, g) in snapshot.iter().enumerate() {
        let others: Vec<Polynomial> = snapshot
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, p)| p.clone())
            .collect();
        let r = if others.is_empty() { g.clone() } else { reduce_full(g, &others) };
        debug_assert!(!r.is_zero(), "minimal basis element reduced to zero");
        reduced.push(r.monic());
    }
    reduced
}

/// Normal form of `f` modulo a reduced basis: the unique remainder of full
/// division, independent of how the basis is listed.
pub fn normal_form(f: &Polynomial, basis: &IdealBasis) -> Result<Polynomial> {
    if !basis.reduced {
        return Err(Error::BasisNotReduced);
    }
    if !same_context(f.context(), &basis.ctx) {
        return Err(Error::ContextMismatch);
    }
    Ok(reduce_full(f, &basis.gens))
}

/// Does the ideal generated by `gens` contain 1? Empty and all-zero inputs
/// give the zero ideal, so the answer is no. A nonzero constant generator
/// answers immediately without running Buchberger.
pub fn is_unit_ideal(gens: &[Polynomial]) -> bool {
    if gens.iter().any(|g| !g.is_zero() && g.is_constant()) {
        return true;
    }
    if gens.iter().all(|g| g.is_zero()) {
        return false;
    }
    let basis = groebner(gens, gens[0].context().order()).expect("generators share a context");
    basis.is_unit_ideal()
}

/// When the ideal is the whole ring, returns cofactors u with
/// sum u_k * gens[k] = 1, indexed like the input; the identity is re-verified
/// by expansion before returning. Errors with [`Error::NotUnitIdeal`] otherwise.
///
/// This runs Buchberger with representation tracking, which costs more than
/// [`is_unit_ideal`]; ask for certificates only when you need them.
pub fn unit_cofactors(gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let ctx = match check_contexts(gens)? {
        None => return Err(Error::EmptyInput),
        Some(c) => c,
    };
    let order = ctx.order();
    let zero_rep = || vec![Polynomial::zero(&ctx); gens.len()];

    let finish = |rep: Vec<Polynomial>, value: &Polynomial| -> Result<Vec<Polynomial>> {
        let c = value.constant_value().expect("constant");
        let inv = c.inv();
        let cofactors: Vec<Polynomial> = rep.iter().map(|u| u.mul_scalar(&inv)).collect();
        let mut check = Polynomial::zero(&ctx);
        for (u, g) in cofactors.iter().zip(gens) {
            check = check.add(&u.mul(g));
        }
        assert!(check.is_one(), "cofactor certificate failed to expand to 1");
        Ok(cofactors)
    };

    // tracked element: (polynomial, representation over the original gens)
    let mut basis: Vec<(Polynomial, Vec<Polynomial>)> = Vec::new();
    for (idx, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut rep = zero_rep();
        rep[idx] = Polynomial::one(&ctx);
        if g.is_constant() {
            return finish(rep, g);
        }
        let lc = g.leading_coefficient().unwrap().inv();
        rep[idx] = Polynomial::constant(&ctx, lc.clone());
        basis.push((g.mul_scalar(&lc), rep));
    }
    if basis.is_empty() {
        return Err(Error::NotUnitIdeal);
    }

    // full reduction that carries the representation along
    let tracked_reduce = |f: &Polynomial,
                          rep: &[Polynomial],
                          basis: &[(Polynomial, Vec<Polynomial>)]|
     -> (Polynomial, Vec<Polynomial>) {
        let divisors: Vec<Polynomial> = basis.iter().map(|(p, _)| p.clone()).collect();
        let (qs, r) = f.divrem(&divisors).expect("nonzero basis");
        let mut out = rep.to_vec();
        for (q, (_, brep)) in qs.iter().zip(basis) {
            if q.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(brep) {
                *o = o.sub(&q.mul(b));
            }
        }
        (r, out)
    };

    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..basis.len() {
        for j in 0..i {
            let l = basis[i].0.leading_monomial().unwrap().lcm(basis[j].0.leading_monomial().unwrap());
            pairs.push((j, i, l));
        }
    }

    while !pairs.is_empty() {
        let mut best = 0;
        for k in 1..pairs.len() {
            let ord = order.cmp(&pairs[k].2, &pairs[best].2);
            if ord == std::cmp::Ordering::Less
                || (ord == std::cmp::Ordering::Equal
                    && (pairs[k].0, pairs[k].1) < (pairs[best].0, pairs[best].1))
            {
                best = k;
            }
        }
        let (i, j, lcm) = pairs.swap_remove(best);
        done.insert((i, j));

        let lm_i = basis[i].0.leading_monomial().unwrap();
        let lm_j = basis[j].0.leading_monomial().unwrap();
        if lm_i.mul(lm_j) == lcm {
            continue;
        }
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].0.leading_monomial().unwrap().divides(&lcm)
                && done.contains(&key(i, k))
                && done.contains(&key(j, k))
        });
        if chained {
            continue;
        }

        // tracked S-polynomial
        let (fi, ri) = &basis[i];
        let (fj, rj) = &basis[j];
        let mi = lcm.div(fi.leading_monomial().unwrap()).unwrap();
        let mj = lcm.div(fj.leading_monomial().unwrap()).unwrap();
        let ci = fi.leading_coefficient().unwrap().inv();
        let cj = fj.leading_coefficient().unwrap().inv();
        let s = fi.mul_term(&mi, &ci).sub(&fj.mul_term(&mj, &cj));
        let mut rep = zero_rep();
        for ((o, a), b) in rep.iter_mut().zip(ri).zip(rj) {
            *o = a.mul_term(&mi, &ci).sub(&b.mul_term(&mj, &cj));
        }

        let (h, hrep) = tracked_reduce(&s, &rep, &basis);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return finish(hrep, &h);
        }
        let lc = h.leading_coefficient().unwrap().inv();
        let h = h.mul_scalar(&lc);
        let hrep: Vec<Polynomial> = hrep.iter().map(|u| u.mul_scalar(&lc)).collect();
        let new_idx = basis.len();
        for k in 0..new_idx {
            let l = basis[k].0.leading_monomial().unwrap().lcm(h.leading_monomial().unwrap());
            pairs.push((k, new_idx, l));
        }
        basis.push((h, hrep));
    }

    Err(Error::NotUnitIdeal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::scalar::Field;
    use proptest::prelude::*;

    fn ctx() -> Arc<VarContext> {
        VarContext::new(&["x1", "x2"], Field::Rational, MonomialOrder::GrevLex).unwrap()
    }

    fn p(c: &Arc<VarContext>, s: &str) -> Polynomial {
        parse_polynomial(s, c).unwrap()
    }

    #[test]
    fn unit_ideal_from_coprime_pair() {
        let c = ctx();
        // x2*(x1) - (x1*x2 - 1) = 1 certifies the unit ideal
        let gens = vec![p(&c, "x1*x2-1"), p(&c, "x1")];
        let basis = groebner(&gens, MonomialOrder::GrevLex).unwrap();
        assert!(basis.is_unit_ideal());
        assert!(is_unit_ideal(&gens));
        let u = unit_cofactors(&gens).unwrap();
        let expanded = u[0].mul(&gens[0]).add(&u[1].mul(&gens[1]));
        assert!(expanded.is_one());
    }

    #[test]
    fn proper_ideal_stays_proper() {
        let c = ctx();
        let gens = vec![p(&c, "x1"), p(&c, "x2")];
        let basis = groebner(&gens, MonomialOrder::GrevLex).unwrap();
        assert!(!basis.is_unit_ideal());
        assert_eq!(basis.generators().len(), 2);
        assert!(!is_unit_ideal(&gens));
        assert!(matches!(unit_cofactors(&gens), Err(Error::NotUnitIdeal)));
    }

    #[test]
    fn shifted_pair_certificate() {
        let c = ctx();
        let gens = vec![p(&c, "x1-1"), p(&c, "x1")];
        assert!(is_unit_ideal(&gens));
        let u = unit_cofactors(&gens).unwrap();
        assert_eq!(u[0], p(&c, "-1"));
        assert_eq!(u[1], p(&c, "1"));
    }

    #[test]
    fn zero_and_degenerate_ideals() {
        let c = ctx();
        assert!(!is_unit_ideal(&[]));
        assert!(!is_unit_ideal(&[Polynomial::zero(&c)]));
        assert!(is_unit_ideal(&[p(&c, "5")]));
        assert!(matches!(groebner(&[], MonomialOrder::Lex), Err(Error::EmptyInput)));
        let zero_basis = groebner(&[Polynomial::zero(&c)], MonomialOrder::Lex).unwrap();
        assert!(zero_basis.is_zero_ideal());
        assert!(matches!(unit_cofactors(&[]), Err(Error::EmptyInput)));
        assert!(matches!(
            unit_cofactors(&[Polynomial::zero(&c)]),
            Err(Error::NotUnitIdeal)
        ));
        // cofactors of {1} are just {1}
        let u = unit_cofactors(&[Polynomial::one(&c)]).unwrap();
        assert!(u[0].is_one());
    }

    #[test]
    fn textbook_basis_lex() {
        // {x1^2 - x2, x1^3 - x1} under lex. By hand: S(g1, g2) reduces to
        // x1*x2 - x1, whose S-pair with g1 reduces to x2^2 - x2, and then
        // x1^3 - x1 is redundant. The three survivors are already reduced.
        let c = VarContext::new(&["x1", "x2"], Field::Rational, MonomialOrder::Lex).unwrap();
        let gens = vec![p(&c, "x1^2-x2"), p(&c, "x1^3-x1")];
        let basis = groebner(&gens, MonomialOrder::Lex).unwrap();
        let got: Vec<String> = basis.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(got, vec!["x2^2-x2", "x1*x2-x1", "x1^2-x2"]);
        // every original generator reduces to zero
        for g in &gens {
            assert!(normal_form(g, &basis).unwrap().is_zero());
        }
    }

    #[test]
    fn normal_form_examples() {
        let c = VarContext::new(&["x1", "x2"], Field::Rational, MonomialOrder::Lex).unwrap();
        let basis = groebner(&[p(&c, "x1*x2-1")], MonomialOrder::Lex).unwrap();
        // x1^2*x2 + x2 = x1*(x1*x2 - 1) + x1 + x2
        assert_eq!(normal_form(&p(&c, "x1^2*x2+x2"), &basis).unwrap(), p(&c, "x1+x2"));
        assert!(normal_form(&p(&c, "x1*x2-1"), &basis).unwrap().is_zero());
        let unreduced = IdealBasis { ctx: c.clone(), gens: vec![p(&c, "x1")], reduced: false };
        assert!(matches!(
            normal_form(&p(&c, "x1"), &unreduced),
            Err(Error::BasisNotReduced)
        ));
    }

    #[test]
    fn reduced_basis_properties() {
        let c = ctx();
        let gens = vec![p(&c, "x1^2+x2^2-1"), p(&c, "x1*x2-1"), p(&c, "x1^3-x2")];
        let basis = groebner(&gens, MonomialOrder::GrevLex).unwrap();
        let bs = basis.generators();
        for (i, g) in bs.iter().enumerate() {
            assert!(g.leading_coefficient().unwrap().is_one());
            for (j, h) in bs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let hlm = h.leading_monomial().unwrap();
                // no leading monomial divides another, and no tail term either
                assert!(!hlm.divides(g.leading_monomial().unwrap()));
                assert!(g.terms().iter().all(|(m, _)| !hlm.divides(m)));
            }
        }
        // S-polynomials of the reduced basis all reduce to zero
        for i in 0..bs.len() {
            for j in 0..i {
                let s = s_polynomial(&bs[i], &bs[j]);
                assert!(reduce_full(&s, bs).is_zero());
            }
        }
    }

    #[test]
    fn order_agreement_on_unit_ideals() {
        let c = ctx();
        let gens = vec![p(&c, "x1^2-1"), p(&c, "x1+3")];
        let lex = groebner(&gens, MonomialOrder::Lex).unwrap();
        let grevlex = groebner(&gens, MonomialOrder::GrevLex).unwrap();
        assert_eq!(lex.is_unit_ideal(), grevlex.is_unit_ideal());
        assert!(lex.is_unit_ideal());
    }

    #[test]
    fn prime_field_ideal() {
        let c = VarContext::new(&["x1", "x2"], Field::prime(7).unwrap(), MonomialOrder::GrevLex)
            .unwrap();
        let gens = vec![p(&c, "x1^2+1"), p(&c, "x2-3"), p(&c, "x1*x2+2")];
        // substitute x2 = 3: need x1^2 + 1 and 3 x1 + 2 to clash; they do
        assert!(is_unit_ideal(&gens));
        let u = unit_cofactors(&gens).unwrap();
        let total = u
            .iter()
            .zip(&gens)
            .fold(Polynomial::zero(&c), |acc, (a, g)| acc.add(&a.mul(g)));
        assert!(total.is_one());
    }

    fn small_gens(c: Arc<VarContext>) -> impl Strategy<Value = Vec<Polynomial>> {
        use crate::context::Monomial;
        prop::collection::vec(
            prop::collection::vec((prop::collection::vec(0u32..3, 2), -3i64..4), 1..4),
            1..4,
        )
        .prop_map(move |gens| {
            gens.into_iter()
                .map(|raw| {
                    Polynomial::from_terms(
                        &c,
                        raw.into_iter()
                            .map(|(e, k)| (Monomial::from_exps(e), c.field().integer(k))),
                    )
                })
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn lex_and_grevlex_agree_on_unit(gens in small_gens(ctx())) {
            prop_assume!(gens.iter().any(|g| !g.is_zero()));
            let lex = groebner(&gens, MonomialOrder::Lex).unwrap();
            let grevlex = groebner(&gens, MonomialOrder::GrevLex).unwrap();
            prop_assert_eq!(lex.is_unit_ideal(), grevlex.is_unit_ideal());
        }

        #[test]
        fn generators_reduce_to_zero(gens in small_gens(ctx())) {
            prop_assume!(gens.iter().any(|g| !g.is_zero()));
            let basis = groebner(&gens, MonomialOrder::GrevLex).unwrap();
            for g in &gens {
                let g = g.with_order(MonomialOrder::GrevLex).with_context(basis.context());
                prop_assert!(normal_form(&g, &basis).unwrap().is_zero());
            }
        }

        #[test]
        fn certificates_expand_to_one(gens in small_gens(ctx())) {
            prop_assume!(gens.iter().any(|g| !g.is_zero()));
            if let Ok(u) = unit_cofactors(&gens) {
                prop_assert!(is_unit_ideal(&gens));
                let total = u
                    .iter()
                    .zip(&gens)
                    .fold(Polynomial::zero(gens[0].context()), |acc, (a, g)| {
                        acc.add(&a.mul(g))
                    });
                prop_assert!(total.is_one());
            } else {
                prop_assert!(!is_unit_ideal(&gens));
            }
        }
    }
}
