//! Acceptance gate: one test per shipping criterion, each printing a single
//! PASS/FAIL line (visible under `cargo test -- --nocapture`). Budgets are
//! asserted with wall-clock timers.

use std::sync::Arc;
use std::time::{Duration, Instant};

use smithkit::cli::negative_instance;
use smithkit::{
    check_equivalence_invariants, decide, random_matrix, random_smith_instance,
    run_command, smith_candidate, smith_univariate, smith_wrt_prime,
    verify_cauchy_binet, verify_multiplicativity, Field, MonomialOrder, Polynomial,
    VarContext, Verdict,
};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> smithkit::CommandOutput {
    let mut argv = vec!["smithkit".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run_command(argv)
}

fn report(criterion: usize, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

fn three_var_ctx() -> Arc<VarContext> {
    VarContext::new(&["x1", "x2", "x3"], Field::Rational, MonomialOrder::GrevLex).unwrap()
}

/// diag{1, p1 p2, p1^2 p2 p3, p1^3 p2^2 p3} for p1 = x1, p2 = x1-1, p3 = x1+1.
fn reference_table(ctx: &Arc<VarContext>) -> Vec<(Polynomial, Vec<u32>)> {
    let x1 = Polynomial::variable(ctx, 0).unwrap();
    let one = Polynomial::one(ctx);
    vec![
        (x1.clone(), vec![0, 1, 2, 3]),
        (x1.sub(&one), vec![0, 1, 1, 2]),
        (x1.add(&one), vec![0, 0, 1, 1]),
    ]
}

fn reference_diagonal(ctx: &Arc<VarContext>) -> Vec<Polynomial> {
    let table = reference_table(ctx);
    (0..4)
        .map(|j| {
            table.iter().fold(Polynomial::one(ctx), |acc, (p, exps)| {
                acc.mul(&p.pow(exps[j]))
            })
        })
        .collect()
}

#[test]
fn acceptance_1_recovers_known_smith_form_in_three_variables() {
    let ctx = three_var_ctx();
    let table = reference_table(&ctx);
    let expected = reference_diagonal(&ctx);
    let x1 = Polynomial::variable(&ctx, 0).unwrap();

    let mut worst = Duration::ZERO;
    let mut pass = true;
    let mut detail = String::new();
    for seed in 0..10u64 {
        let start = Instant::now();
        let (f, truth) = random_smith_instance(&ctx, 4, &table, seed).unwrap();
        let decided = decide(&f).unwrap();
        let profile = smith_wrt_prime(&f, &x1).unwrap();
        let elapsed = start.elapsed();
        worst = worst.max(elapsed);

        let ok = decided.verdict == Verdict::EquivalentToSmithForm
            && decided.smith.as_ref().map(|s| s.diagonal()) == Some(&expected[..])
            && truth.diagonal() == &expected[..]
            && profile.exponents == [0, 1, 2, 3]
            && elapsed <= Duration::from_secs(60);
        if !ok && pass {
            pass = false;
            detail = format!("seed {seed} failed in {elapsed:?}");
        }
    }
    if pass {
        detail = format!("10 seeds, worst case {worst:?}");
    }
    report(1, pass, &detail);
}

#[test]
fn acceptance_2_invariants_match_the_embedded_smith_form() {
    let ctx = three_var_ctx();
    let table = reference_table(&ctx);

    let mut pass = true;
    let mut detail = String::from("10 seeds agree");
    for seed in 0..10u64 {
        let (f, truth) = random_smith_instance(&ctx, 4, &table, seed).unwrap();
        let inv = check_equivalence_invariants(&f, &truth.embed(&ctx)).unwrap();
        if !inv.agrees() {
            pass = false;
            detail = format!("seed {seed}: mismatch {:?}", inv.mismatch);
            break;
        }
    }
    report(2, pass, &detail);
}

#[test]
fn acceptance_3_shear_family_fails_at_order_one() {
    let ctx =
        VarContext::new(&["x1", "x2"], Field::Rational, MonomialOrder::GrevLex).unwrap();
    let start = Instant::now();

    let mut pass = true;
    let mut detail = String::new();

    let out = cli(&["decide", &fixture("shear.mat")]);
    if out.code != 1 || !out.stdout.contains("verdict: NotEquivalent") {
        pass = false;
        detail = format!("fixture exit {}", out.code);
    }

    for seed in 0..20u64 {
        let f = negative_instance(&ctx, seed);
        let decided = decide(&f).unwrap();
        if decided.verdict != Verdict::NotEquivalent || decided.failing_order != Some(1) {
            pass = false;
            detail = format!(
                "seed {seed}: {:?} failing {:?}",
                decided.verdict, decided.failing_order
            );
            break;
        }
    }

    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(5) {
        pass = false;
        detail = format!("took {elapsed:?}");
    }
    if pass {
        detail = format!("fixture exit 1 plus 20 seeds in {elapsed:?}");
    }
    report(3, pass, &detail);
}

#[test]
fn acceptance_4_minor_gcds_multiply_across_coprime_products() {
    let ctx =
        VarContext::new(&["x1", "x2"], Field::Rational, MonomialOrder::GrevLex).unwrap();
    let x1 = Polynomial::variable(&ctx, 0).unwrap();
    let x1m1 = x1.sub(&Polynomial::one(&ctx));

    let mut pass = true;
    let mut detail = String::from("50 coprime pairs hold");
    for seed in 0..50u64 {
        let row = |s: u64| {
            let mut exps: Vec<u32> = (0..3).map(|k| ((s >> (2 * k)) % 3) as u32).collect();
            exps.sort_unstable();
            exps
        };
        let (f1, _) = random_smith_instance(
            &ctx, 3, &[(x1.clone(), row(seed.wrapping_mul(5).wrapping_add(1)))], seed,
        )
        .unwrap();
        let (f2, _) = random_smith_instance(
            &ctx, 3, &[(x1m1.clone(), row(seed.wrapping_mul(3).wrapping_add(2)))],
            seed ^ 0xbeef,
        )
        .unwrap();
        match verify_multiplicativity(&f1, &f2) {
            Ok(m) if m.holds() => {}
            other => {
                pass = false;
                detail = format!("seed {seed}: {other:?}");
                break;
            }
        }
    }
    report(4, pass, &detail);
}

#[test]
fn acceptance_5_product_minors_expand_bilinearly() {
    let ctx =
        VarContext::new(&["x1", "x2"], Field::Rational, MonomialOrder::GrevLex).unwrap();

    let mut pass = true;
    let mut detail = String::from("50 pairs, orders 1..3");
    'outer: for seed in 0..50u64 {
        let a = random_matrix(&ctx, 3, 3, 2, seed);
        let b = random_matrix(&ctx, 3, 3, 2, seed ^ 0x5eed);
        for order in 1..=3 {
            if !verify_cauchy_binet(&a, &b, order).unwrap() {
                pass = false;
                detail = format!("seed {seed} order {order}");
                break 'outer;
            }
        }
    }
    report(5, pass, &detail);
}

#[test]
fn acceptance_6_univariate_diagonalization_is_verified_and_fast() {
    let ctx = VarContext::new(&["x1"], Field::Rational, MonomialOrder::Lex).unwrap();
    let start = Instant::now();

    let mut pass = true;
    let mut detail = String::new();
    for seed in 0..200u64 {
        let rows = 1 + (seed % 4) as usize;
        let cols = 1 + ((seed / 4) % 4) as usize;
        let a = random_matrix(&ctx, rows, cols, 4, seed);
        match smith_univariate(&a) {
            Ok((t, s)) => {
                let product = t.u.matmul(&a).unwrap().matmul(&t.v).unwrap();
                let chain_ok = s
                    .diagonal()
                    .windows(2)
                    .all(|w| w[1].exact_div(&w[0]).is_some());
                if product != s.embed(&ctx)
                    || !t.u.is_unimodular().unwrap()
                    || !t.v.is_unimodular().unwrap()
                    || !chain_ok
                    || s != smith_candidate(&a)
                {
                    pass = false;
                    detail = format!("seed {seed}: transform checks failed");
                    break;
                }
            }
            Err(e) => {
                pass = false;
                detail = format!("seed {seed}: {e}");
                break;
            }
        }
    }

    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(30) {
        pass = false;
        detail = format!("took {elapsed:?}");
    }
    if pass {
        detail = format!("200 matrices in {elapsed:?}");
    }
    report(6, pass, &detail);
}

#[test]
fn acceptance_7_multivariate_gcd_chain_is_rejected_up_front() {
    let f = smithkit::parse_matrix_file(fixture("precond.mat").as_ref()).unwrap();
    let decided = decide(&f.matrix).unwrap();
    let out = cli(&["decide", &fixture("precond.mat")]);

    let pass = decided.verdict == Verdict::PreconditionViolated
        && decided.orders.is_empty()
        && decided.smith.is_none()
        && out.code == 2;
    report(
        7,
        pass,
        &format!("verdict {:?}, exit {}", decided.verdict, out.code),
    );
}

#[test]
fn acceptance_8_reports_are_reproducible_byte_for_byte() {
    let decide_args = ["decide", &fixture("smith2.mat"), "--format", "json"];
    let verify_args = [
        "verify", "--suite", "positive", "--seeds", "5", "--seed", "11", "--format", "json",
    ];

    let d1 = cli(&decide_args);
    let d2 = cli(&decide_args);
    let v1 = cli(&verify_args);
    let v2 = cli(&verify_args);

    let pass = d1.stdout == d2.stdout
        && v1.stdout == v2.stdout
        && d1.code == 0
        && v1.code == 0
        && !d1.stdout.is_empty()
        && !v1.stdout.is_empty();
    report(8, pass, "decide and verify reruns identical");
}
