//! End-to-end acceptance checks, one pass/fail line per criterion.

use lsakit::builtins::{
    cayley, corpus, eastwood_ezhov, euclidean_metric, fili, parab, sigma_family, six_dim,
};
use lsakit::cli_io::{parse_algebra_file, run_command, serialize_algebra, FileError};
use lsakit::koszul::{
    graph_extend, induced_algebra, principal_idempotent, weight_decomposition,
};
use lsakit::lsa_core::{
    char_poly_lsa, classify, helmstetter_rhs, jet_at_zero, log_charpoly_truncated,
    mult_operators, trace_form, validate_lsa, Algebra, Triangularization,
};
use lsakit::ma_verify::{flow_sample, graph_restrict, ma_constant, translational_axis};
use lsakit::polyring::{parse_poly, MPoly};
use lsakit::qlinalg::{frac, rat, rational_eigendata, QMatrix, Rat};
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};

fn rand_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=4).into())
}

fn rand_unit_rat(rng: &mut ChaCha8Rng) -> Rat {
    // in [-1, 1]
    let d = rng.gen_range(1i64..=8);
    Rat::new(rng.gen_range(-d..=d).into(), d.into())
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let argv: Vec<String> =
        std::iter::once("lsakit".to_string()).chain(args.iter().map(|s| s.to_string())).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_command(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn temp_algebra_file(a: &Algebra) -> std::path::PathBuf {
    let path =
        std::env::temp_dir().join(format!("lsakit_accept_{}_{}.lsa", std::process::id(), a.name));
    std::fs::write(&path, serialize_algebra(a)).unwrap();
    path
}

/// 1. kappa(cayley(n)) = (-1)^{n(n-1)/2} n^{n+1} for n = 2..6, through the
/// CLI `report` pipeline.
fn criterion_cayley_kappa() {
    let expected = ["-8", "-81", "1024", "15625", "-279936"];
    for (n, want) in (2..=6usize).zip(expected) {
        let a = cayley(n).unwrap();
        let file = temp_algebra_file(&a);
        let (code, out) = run_cli(&["report", file.to_str().unwrap()]);
        assert_eq!(code, 0);
        let line = format!("kappa = {want}");
        assert!(out.lines().any(|l| l == line), "n = {n}: missing '{line}'");
    }
}

/// 2. ma_constant on the closed-form solutions of H(F) = 4F^3 and
/// H(G) = -G^3.
fn criterion_hand_examples() {
    let p = parse_poly("x3 - x1^2 - x2^2", 3).unwrap();
    assert_eq!(ma_constant(&p, None).kappa, Some(rat(4)));
    let q = parse_poly("1/3*x1^3 - x1*x2 + x3", 3).unwrap();
    assert_eq!(ma_constant(&q, None).kappa, Some(rat(-1)));
}

/// 3. The 6-dimensional example: displayed characteristic polynomial and
/// |H(f)| = 6^5 on the graph restriction (sign from the oracle: +7776).
fn criterion_six_dim() {
    let a = six_dim();
    let p = char_poly_lsa(&a);
    let display =
        parse_poly("6*x1*x2*x3 + 6*x2^2*x3 - 6*x1*x4 - 6*x2*x5 - 3*x3^2 + x6 + 1", 6).unwrap();
    assert_eq!(p, display);
    let k = principal_idempotent(&a).unwrap();
    let (_, hf) = graph_restrict(&p, &k.u).unwrap();
    assert!(hf.is_constant());
    assert_eq!(hf.constant_term().abs(), rat(7776));
    assert_eq!(hf.constant_term(), rat(7776));
}

/// 4. Eastwood-Ezhov polynomials: partition sum, recursion, and
/// (1 - P_n)/n agree for n = 1..6.
fn criterion_eastwood_ezhov() {
    for n in 1..=6usize {
        // partition sum vs recursion is asserted inside the constructor
        let phi = eastwood_ezhov(n).unwrap();
        let p = char_poly_lsa(&cayley(n).unwrap());
        let lhs = MPoly::one(n).sub(&p).scale(&frac(1, n as i64));
        assert_eq!(phi, lhs, "n = {n}");
    }
}

/// 5. Principal idempotents: r(cayley(n)) = e_n/n with base weights
/// {1/n, ..., (n-1)/n}; r(six_dim) = e_6 with tr R(r) = 1;
/// r(sigma-family) = e_4.
fn criterion_principal_idempotents() {
    for n in 2..=6usize {
        let a = cayley(n).unwrap();
        let k = principal_idempotent(&a).unwrap();
        let mut r = vec![Rat::zero(); n];
        r[n - 1] = frac(1, n as i64);
        assert_eq!(k.u, r);
        // Pi(A, L(r)) = {1/n, ..., (n-1)/n, 1}
        let eig = rational_eigendata(&a.l_op(&k.u)).unwrap();
        assert!(eig.splits_over_q);
        let weights: Vec<Rat> = eig.rational_roots.iter().map(|(w, _)| w.clone()).collect();
        let expected: Vec<Rat> =
            (1..n).map(|i| frac(i as i64, n as i64)).chain([Rat::one()]).collect();
        assert_eq!(weights, expected, "n = {n}");
        // and on the base: {1/n, ..., (n-1)/n}
        let ind = induced_algebra(&a, &k).unwrap();
        let wd = weight_decomposition(&ind.base, &ind.metric, &ind.derivation);
        let base_weights: Vec<(Rat, usize)> =
            (1..n).map(|i| (frac(i as i64, n as i64), 1)).collect();
        assert_eq!(wd.weights, base_weights);
    }
    let s = six_dim();
    let k = principal_idempotent(&s).unwrap();
    assert_eq!(k.u, s.basis_vector(5));
    assert_eq!(k.rank, Rat::one());
    let sf = sigma_family(&rat(2));
    let k = principal_idempotent(&sf).unwrap();
    assert_eq!(k.u, sf.basis_vector(3));
}

/// 6. Classification truth table over the whole corpus.
fn criterion_truth_table() {
    for a in corpus() {
        let c = classify(&a, false);
        // completeness triple-equivalence: tr R = 0, P = 1, tau = 0
        let (_, rf) = mult_operators(&a);
        let tr_r_zero = rf.trace().is_zero();
        let p_one = char_poly_lsa(&a) == MPoly::one(a.dim);
        let tau_zero = trace_form(&a).matrix.is_zero();
        assert_eq!(tr_r_zero, p_one, "{}", a.name);
        assert_eq!(tr_r_zero, tau_zero, "{}", a.name);
        assert_eq!(c.complete, tr_r_zero, "{}", a.name);
        // nilpotent <=> right-nilpotent and Lie-nilpotent
        assert_eq!(c.nilpotent, c.right_nilpotent && c.lie_nilpotent, "{}", a.name);
        // right-nilpotent => triangularizable
        if c.right_nilpotent {
            assert!(
                matches!(c.triangularizable, Triangularization::Basis(_)),
                "{}",
                a.name
            );
        }
        // a Koszul form rules out right nilpotence
        if principal_idempotent(&a).is_ok() {
            assert!(!c.right_nilpotent, "{}", a.name);
        }
    }
}

/// 7. Helmstetter's jet identities for k = 1, 2, 3 on small corpus
/// algebras and on 50 random basis-change perturbations of fili(4).
fn criterion_helmstetter() {
    fn check(a: &Algebra, rng: &mut ChaCha8Rng) {
        let n = a.dim;
        let p = char_poly_lsa(a);
        let logp = log_charpoly_truncated(&p, 4);
        for k in 1..=3usize {
            for _ in 0..3 {
                let dirs: Vec<Vec<Rat>> =
                    (0..=k).map(|_| (0..n).map(|_| rand_rat(rng)).collect()).collect();
                let lhs = jet_at_zero(&logp, &dirs);
                let rhs = helmstetter_rhs(a, &dirs[0], &dirs[1..]);
                assert_eq!(lhs, rhs, "{} k={k}", a.name);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x68656c6d);
    for a in corpus() {
        if a.dim <= 5 {
            check(&a, &mut rng);
        }
    }
    // random invertible basis changes of fili(4)
    let base = fili(4).unwrap();
    let mut produced = 0;
    while produced < 50 {
        let rows: Vec<Vec<Rat>> =
            (0..4).map(|_| (0..4).map(|_| rand_rat(&mut rng)).collect()).collect();
        let b = QMatrix::from_rows(rows);
        let Some(binv) = b.inverse() else { continue };
        let mut t = Algebra::zero_algebra(format!("fili4_twist{produced}"), 4);
        for i in 0..4 {
            for j in 0..4 {
                let prod = base.product(&b.col(i), &b.col(j));
                let coords = binv.mul_vec(&prod);
                for (k, c) in coords.into_iter().enumerate() {
                    t.set_c(i, j, k, c);
                }
            }
        }
        let t = validate_lsa(t).expect("basis change preserves left symmetry");
        check(&t, &mut rng);
        produced += 1;
    }
}

/// 8. Graph-extension round trips: cayley(n) from its induced base for
/// n = 2..5, and parab(delta, 2) from the trivial line.
fn criterion_round_trip() {
    for n in 2..=5usize {
        let a = cayley(n).unwrap();
        let k = principal_idempotent(&a).unwrap();
        let ind = induced_algebra(&a, &k).unwrap();
        let ge = graph_extend(&ind.base, &ind.metric, &ind.derivation).unwrap();
        let psi = |v: &[Rat]| -> Vec<Rat> {
            let mut w: Vec<Rat> = v[..n - 1].to_vec();
            w.push(&v[n - 1] * frac(1, n as i64));
            w
        };
        for i in 0..n {
            for j in 0..n {
                let ei = ge.algebra.basis_vector(i);
                let ej = ge.algebra.basis_vector(j);
                assert_eq!(
                    psi(&ge.algebra.product(&ei, &ej)),
                    a.product(&psi(&ei), &psi(&ej)),
                    "n={n} ({i},{j})"
                );
            }
        }
    }
    let line = validate_lsa(Algebra::zero_algebra("pt", 1)).unwrap();
    let ge = graph_extend(&line, &QMatrix::identity(1), &QMatrix::identity(1).scale(&frac(1, 2)))
        .unwrap();
    let p2 = parab(&euclidean_metric(2), 2).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                assert_eq!(ge.algebra.c(i, j, k), p2.c(i, j, k));
            }
        }
    }
}

/// 9. Characteristic-polynomial factorization of graph extensions: the
/// random-point protocol runs on every extension built here (including
/// the incomplete sigma-family algebras rebuilt from their induced data),
/// and the symbolic identity is verified for every complete base.
fn criterion_papb() {
    // sigma family: ambient algebra incomplete; its base is recovered and
    // re-extended, which runs the 10-point factorization check internally
    for sigma in [rat(2), frac(-1, 3), frac(1, 2)] {
        let a = sigma_family(&sigma);
        let c = classify(&a, false);
        assert!(!c.complete);
        let k = principal_idempotent(&a).unwrap();
        let ind = induced_algebra(&a, &k).unwrap();
        let ge = graph_extend(&ind.base, &ind.metric, &ind.derivation).unwrap();
        // the base here is complete, so the symbolic identity was checked too
        assert!(ge.base_complete);
        assert_eq!(char_poly_lsa(&ge.algebra), char_poly_lsa(&a));
    }
    // complete bases: fili(n-1) inside cayley(n), and trivial lines
    for n in 2..=5usize {
        let a = cayley(n).unwrap();
        let k = principal_idempotent(&a).unwrap();
        let ind = induced_algebra(&a, &k).unwrap();
        let ge = graph_extend(&ind.base, &ind.metric, &ind.derivation).unwrap();
        assert!(ge.base_complete);
    }
}

/// 10. Flow-character residuals below 1e-9 on cayley(2..4) and
/// parab(delta, 3) for t in {0.1, 0.5, 1.0} at random points.
fn criterion_flow() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x666c6f77);
    let mut algebras: Vec<Algebra> = (2..=4).map(|n| cayley(n).unwrap()).collect();
    algebras.push(parab(&euclidean_metric(3), 3).unwrap());
    for a in &algebras {
        for t in [0.1, 0.5, 1.0] {
            for _ in 0..3 {
                let dir: Vec<Rat> = (0..a.dim).map(|_| rand_unit_rat(&mut rng)).collect();
                let x0: Vec<Rat> = (0..a.dim).map(|_| rand_unit_rat(&mut rng)).collect();
                let s = flow_sample(a, &dir, &x0, t);
                assert!(
                    s.character_residual < 1e-9,
                    "{} t={t} residual={}",
                    a.name,
                    s.character_residual
                );
            }
        }
    }
}

/// 11. Parser round trip over the corpus and the malformed-input suite.
fn criterion_parser() {
    for a in corpus() {
        let text = serialize_algebra(&a);
        let b = parse_algebra_file(&text).unwrap();
        assert_eq!(serialize_algebra(&b), text, "{}", a.name);
        assert_eq!(a.name, b.name);
    }
    assert!(matches!(
        parse_algebra_file("lsa t\ndim 4\nprod 1 1 : 1*e5\n"),
        Err(FileError::IndexOutOfRange { .. })
    ));
    assert!(matches!(
        parse_algebra_file("lsa t\ndim 2\nprod 1 1 : 1*e1\nprod 1 1 : 1*e2\n"),
        Err(FileError::DuplicateProduct { .. })
    ));
    assert!(matches!(
        parse_algebra_file("lsa t\ndim 2\nprod 1 1 : 1/0*e1\n"),
        Err(FileError::ZeroDenominator { .. })
    ));
    assert!(matches!(
        parse_algebra_file("what is this\n"),
        Err(FileError::Syntax { .. })
    ));
    // axis sanity for the six_dim level sets used in criterion 3
    let p = char_poly_lsa(&six_dim());
    let axis = translational_axis(&p, None).unwrap();
    assert_eq!(axis.0, six_dim().basis_vector(5));
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn()); 11] = [
        ("1 cayley kappa law", criterion_cayley_kappa),
        ("2 hand examples", criterion_hand_examples),
        ("3 six-dim example", criterion_six_dim),
        ("4 eastwood-ezhov consistency", criterion_eastwood_ezhov),
        ("5 principal idempotents", criterion_principal_idempotents),
        ("6 classification truth table", criterion_truth_table),
        ("7 helmstetter jets", criterion_helmstetter),
        ("8 graph-extension round trip", criterion_round_trip),
        ("9 charpoly factorization", criterion_papb),
        ("10 flow residuals", criterion_flow),
        ("11 parser round trip", criterion_parser),
    ];
    let mut failures = Vec::new();
    for (name, f) in criteria {
        let ok = catch_unwind(AssertUnwindSafe(f)).is_ok();
        println!("criterion {name}: {}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures.push(name);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
