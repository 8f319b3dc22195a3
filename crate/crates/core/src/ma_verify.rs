//! Symbolic verification that e^P solves H(e^P) = kappa e^{nP}:
//! translational axes, the Monge-Ampere constant det(Hess P + dP (x) dP),
//! the Euler-field identity, graph restriction of a level set, and a
//! floating-point flow sampler for relative invariance of P.

use crate::koszul::principal_idempotent;
use crate::lsa_core::{char_poly_lsa, Algebra};
use crate::polyring::{MPoly, PolyMatrix};
use crate::qlinalg::{rat, Rat};
use num::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MaError {
    #[error("NOT_AN_AXIS: P(x+tv) - P(x) is not linear in t with unit slope")]
    NotAnAxis,
    #[error("ZERO_AXIS: the axis vector vanishes")]
    ZeroAxis,
}

/// Checks whether P(x + tv) = P(x) + lambda t holds identically; this is
/// equivalent to dP(v) being a constant polynomial.
pub fn translational_axis(
    p: &MPoly,
    candidate: Option<&[Rat]>,
) -> Option<(Vec<Rat>, Rat)> {
    let n = p.nvars;
    let grad = p.gradient();
    let dp_of = |v: &[Rat]| -> MPoly {
        let mut acc = MPoly::zero(n);
        for (g, c) in grad.iter().zip(v) {
            acc = acc.add(&g.scale(c));
        }
        acc
    };
    if let Some(v) = candidate {
        assert_eq!(v.len(), n);
        if v.iter().all(|c| c.is_zero()) {
            return None;
        }
        let dpv = dp_of(v);
        if dpv.is_constant() {
            return Some((v.to_vec(), dpv.constant_term()));
        }
        return None;
    }
    // Solve for all v with dP(v) constant: one linear equation per
    // non-constant monomial of the gradient components.
    let mut monomials: BTreeSet<Vec<u32>> = BTreeSet::new();
    for g in &grad {
        for (m, _) in g.terms() {
            if m.iter().any(|&e| e > 0) {
                monomials.insert(m.clone());
            }
        }
    }
    let rows: Vec<Vec<Rat>> = monomials
        .iter()
        .map(|m| grad.iter().map(|g| g.coeff(m)).collect())
        .collect();
    let kernel = if rows.is_empty() {
        (0..n)
            .map(|i| {
                (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()
            })
            .collect()
    } else {
        crate::qlinalg::QMatrix::from_rows(rows).kernel_basis()
    };
    if kernel.is_empty() {
        return None;
    }
    let lambda_of = |v: &[Rat]| dp_of(v).constant_term();
    for v in &kernel {
        let lam = lambda_of(v);
        if !lam.is_zero() {
            let s = lam.recip();
            return Some((v.iter().map(|c| c * &s).collect(), Rat::one()));
        }
    }
    Some((kernel[0].clone(), Rat::zero()))
}

/// det(Hess P + dP (x) dP) as a polynomial.
pub fn twisted_det(p: &MPoly) -> MPoly {
    let n = p.nvars;
    let grad = p.gradient();
    let hess = p.hessian();
    let m = PolyMatrix::from_fn(n, n, n, |i, j| {
        hess.at(i, j).add(&grad[i].mul(&grad[j]))
    });
    m.det()
}

/// Same with the one-form scaled by c, for the scaling identity
/// det(Hess P + c dP (x) dP) = c det(Hess P + dP (x) dP).
pub fn twisted_det_scaled(p: &MPoly, c: &Rat) -> MPoly {
    let n = p.nvars;
    let grad = p.gradient();
    let hess = p.hessian();
    let m = PolyMatrix::from_fn(n, n, n, |i, j| {
        hess.at(i, j).add(&grad[i].mul(&grad[j]).scale(c))
    });
    m.det()
}

#[derive(Clone, Debug)]
pub struct MAReport {
    /// a translational axis with its increment, when one exists
    pub axis: Option<(Vec<Rat>, Rat)>,
    /// det(Hess P + dP (x) dP) when it is a degree-0 polynomial
    pub kappa: Option<Rat>,
    pub sign_of_kappa: Option<i8>,
    /// 2 tr L = (n+1) tr R as linear forms, when an algebra is supplied
    pub trace_condition_2l_n1r: Option<bool>,
    /// dP(E) = P for the Euler field E_x = r + r*x, when r exists
    pub euler_identity: Option<bool>,
}

pub fn ma_constant(p: &MPoly, alg: Option<&Algebra>) -> MAReport {
    let axis = translational_axis(p, None);
    let q = twisted_det(p);
    let kappa = if q.is_constant() { Some(q.constant_term()) } else { None };
    let sign_of_kappa = kappa.as_ref().map(|k| {
        if k.is_zero() {
            0
        } else if k.is_positive() {
            1
        } else {
            -1
        }
    });
    let mut trace_condition = None;
    let mut euler = None;
    if let Some(a) = alg {
        let n = a.dim;
        let two = Rat::one() + Rat::one();
        let np1 = rat(n as i64 + 1);
        trace_condition = Some((0..n).all(|i| {
            let e = a.basis_vector(i);
            &two * a.l_op(&e).trace() == &np1 * a.r_op(&e).trace()
        }));
        if let Ok(k) = principal_idempotent(a) {
            euler = Some(euler_check(a, p, &k.u));
        }
    }
    MAReport { axis, kappa, sign_of_kappa, trace_condition_2l_n1r: trace_condition, euler_identity: euler }
}

/// Verifies dP(E) = P identically, where E_x = r + r*x.
pub fn euler_check(a: &Algebra, p: &MPoly, r: &[Rat]) -> bool {
    let n = a.dim;
    assert_eq!(p.nvars, n);
    let lr = a.l_op(r);
    let mut acc = MPoly::zero(n);
    for i in 0..n {
        // E_i = r_i + (L(r) x)_i
        let mut e_i = MPoly::constant(n, r[i].clone());
        for j in 0..n {
            if !lr.at(i, j).is_zero() {
                e_i = e_i.add(&MPoly::var(n, j).scale(lr.at(i, j)));
            }
        }
        acc = acc.add(&p.derivative(i).mul(&e_i));
    }
    acc == *p
}

/// The level set {P = P(0)} written as a graph along the axis v: returns
/// the graphing function f on the hyperplane {x_m = 0} (in its n-1
/// coordinates, scaled by v_m so x_m = f on the level set) together with
/// the determinant of its coordinate Hessian.
pub fn graph_restrict(p: &MPoly, v: &[Rat]) -> Result<(MPoly, MPoly), MaError> {
    let n = p.nvars;
    assert_eq!(v.len(), n);
    if v.iter().all(|c| c.is_zero()) {
        return Err(MaError::ZeroAxis);
    }
    match translational_axis(p, Some(v)) {
        Some((_, lam)) if lam.is_one() => {}
        _ => return Err(MaError::NotAnAxis),
    }
    // graph coordinate: largest axis component
    let m = (0..n)
        .max_by(|&i, &j| v[i].abs().cmp(&v[j].abs()))
        .unwrap();
    // embed the hyperplane {x_m = 0} using the remaining n-1 coordinates
    let mut args = Vec::with_capacity(n);
    let mut pos = 0;
    for i in 0..n {
        if i == m {
            args.push(MPoly::zero(n - 1));
        } else {
            args.push(MPoly::var(n - 1, pos));
            pos += 1;
        }
    }
    let p0 = p.evaluate(&vec![Rat::zero(); n]);
    let restricted = p.compose(&args);
    // P(w + t v) = P(w) + t = P(0) at t = P(0) - P(w); x_m there is t v_m
    let f = MPoly::constant(n - 1, p0).sub(&restricted).scale(&v[m]);
    let hf = f.hessian().det();
    Ok((f, hf))
}

#[derive(Clone, Debug)]
pub struct FlowSample {
    pub endpoint: Vec<f64>,
    pub character_residual: f64,
}

fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational fits in f64")
}

pub fn eval_f64(p: &MPoly, x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = rat_f64(c);
        for (e, xi) in m.iter().zip(x) {
            t *= xi.powi(*e as i32);
        }
        acc += t;
    }
    acc
}

/// exp(M) by scaling and squaring with a truncated Taylor series.
fn expm(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let norm: f64 = m
        .iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = 2f64.powi(s as i32);
    let a: Vec<Vec<f64>> =
        m.iter().map(|row| row.iter().map(|x| x / scale).collect()).collect();
    let matmul = |x: &[Vec<f64>], y: &[Vec<f64>]| -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                let xik = x[i][k];
                if xik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i][j] += xik * y[k][j];
                }
            }
        }
        out
    };
    let mut result = vec![vec![0.0; n]; n];
    for (i, row) in result.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut term = result.clone();
    for k in 1..=20 {
        term = matmul(&term, &a);
        let kf = k as f64;
        for i in 0..n {
            for j in 0..n {
                term[i][j] /= kf;
                result[i][j] += term[i][j];
            }
        }
    }
    let mut out = result;
    for _ in 0..s {
        out = matmul(&out, &out);
    }
    out
}

/// Integrates the right-invariant flow through x0 for time t by
/// exponentiating the affine matrix [[L(a), a], [0, 0]], and measures the
/// relative-invariance residual |P(endpoint) - e^{t tr R(a)} P(x0)|.
pub fn flow_sample(alg: &Algebra, a: &[Rat], x0: &[Rat], t: f64) -> FlowSample {
    let n = alg.dim;
    assert_eq!(a.len(), n);
    assert_eq!(x0.len(), n);
    let la = alg.l_op(a);
    let mut m = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = rat_f64(la.at(i, j)) * t;
        }
        m[i][n] = rat_f64(&a[i]) * t;
    }
    let e = expm(&m);
    let mut endpoint = vec![0.0; n];
    for (i, ep) in endpoint.iter_mut().enumerate() {
        for j in 0..n {
            *ep += e[i][j] * rat_f64(&x0[j]);
        }
        *ep += e[i][n];
    }
    let p = char_poly_lsa(alg);
    let x0f: Vec<f64> = x0.iter().map(rat_f64).collect();
    let trr = rat_f64(&alg.r_op(a).trace());
    let expected = (t * trr).exp() * eval_f64(&p, &x0f);
    let character_residual = (eval_f64(&p, &endpoint) - expected).abs();
    FlowSample { endpoint, character_residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{cayley, euclidean_metric, fili, parab, six_dim};
    use crate::polyring::parse_poly;
    use crate::qlinalg::{frac, rat};

    #[test]
    fn axis_of_cayley_is_principal_idempotent() {
        for n in 1..=5usize {
            let a = cayley(n).unwrap();
            let p = char_poly_lsa(&a);
            let mut r = vec![Rat::zero(); n];
            r[n - 1] = frac(1, n as i64);
            let (v, lam) = translational_axis(&p, Some(&r)).unwrap();
            assert_eq!((v, lam), (r.clone(), Rat::one()));
            // auto-detection finds the same normalized axis
            let (v2, lam2) = translational_axis(&p, None).unwrap();
            assert_eq!(lam2, Rat::one());
            let embed: Vec<MPoly> = (0..n).map(|i| MPoly::var(n + 1, i)).collect();
            assert_eq!(
                p.compose(&shift(&p, &v2)),
                p.compose(&embed).add(&MPoly::var(n + 1, n))
            );
            let _ = v2;
        }
    }

    // x |-> x + t v inside n+1 variables (t is the last one)
    fn shift(p: &MPoly, v: &[Rat]) -> Vec<MPoly> {
        let n = p.nvars;
        (0..n)
            .map(|i| MPoly::var(n + 1, i).add(&MPoly::var(n + 1, n).scale(&v[i])))
            .collect()
    }

    #[test]
    fn axis_detection_simple_cases() {
        let p = parse_poly("x3 - x1^2 - x2^2", 3).unwrap();
        let (v, lam) = translational_axis(&p, None).unwrap();
        assert_eq!(v, vec![rat(0), rat(0), rat(1)]);
        assert!(lam.is_one());
        let q = parse_poly("x1^2", 1).unwrap();
        assert!(translational_axis(&q, None).is_none());
    }

    #[test]
    fn ma_constants_from_closed_forms() {
        let p = parse_poly("x3 - x1^2 - x2^2", 3).unwrap();
        assert_eq!(ma_constant(&p, None).kappa, Some(rat(4)));
        let q = parse_poly("1/3*x1^3 - x1*x2 + x3", 3).unwrap();
        assert_eq!(ma_constant(&q, None).kappa, Some(rat(-1)));
    }

    #[test]
    fn cayley_kappa_values() {
        // (-1)^{n(n-1)/2} n^{n+1}
        let expected = [rat(-8), rat(-81), rat(1024), rat(15625), rat(-279936)];
        for (n, want) in (2..=6usize).zip(expected) {
            let a = cayley(n).unwrap();
            let rep = ma_constant(&char_poly_lsa(&a), Some(&a));
            assert_eq!(rep.kappa, Some(want), "n = {n}");
            assert_eq!(rep.trace_condition_2l_n1r, Some(true));
            assert_eq!(rep.euler_identity, Some(true));
        }
    }

    #[test]
    fn scaling_identity() {
        let a = cayley(3).unwrap();
        let p = char_poly_lsa(&a);
        let base = twisted_det(&p);
        for c in [rat(2), rat(-1), rat(5)] {
            assert_eq!(twisted_det_scaled(&p, &c), base.scale(&c));
        }
    }

    #[test]
    fn euler_identity_examples() {
        // dP(E) = P with E = r + r*x; cayley(2): E = (x1/2, 1/2 + x2)
        let a = cayley(2).unwrap();
        let p = char_poly_lsa(&a);
        let r = vec![Rat::zero(), frac(1, 2)];
        assert!(euler_check(&a, &p, &r));
        let s = six_dim();
        let k = principal_idempotent(&s).unwrap();
        assert!(euler_check(&s, &char_poly_lsa(&s), &k.u));
        let pb = parab(&euclidean_metric(4), 4).unwrap();
        let k = principal_idempotent(&pb).unwrap();
        assert!(euler_check(&pb, &char_poly_lsa(&pb), &k.u));
    }

    #[test]
    fn graph_restriction_examples() {
        // cayley(2): P = 1 + 2 x2 - x1^2, level P = 1 is x2 = x1^2/2
        let a = cayley(2).unwrap();
        let p = char_poly_lsa(&a);
        let (f, hf) = graph_restrict(&p, &[rat(0), frac(1, 2)]).unwrap();
        assert_eq!(f, parse_poly("1/2*x1^2", 1).unwrap());
        assert_eq!(hf, MPoly::one(1));
        let q = parse_poly("x3 - x1^2 - x2^2", 3).unwrap();
        let (f, hf) = graph_restrict(&q, &[rat(0), rat(0), rat(1)]).unwrap();
        assert_eq!(f, parse_poly("x1^2 + x2^2", 2).unwrap());
        assert_eq!(hf, MPoly::constant(2, rat(4)));
        assert_eq!(
            graph_restrict(&q, &vec![Rat::zero(); 3]).unwrap_err(),
            MaError::ZeroAxis
        );
        assert_eq!(
            graph_restrict(&q, &[rat(1), rat(0), rat(0)]).unwrap_err(),
            MaError::NotAnAxis
        );
    }

    #[test]
    fn graph_restriction_consistency() {
        // (-1)^{n-1} H(f) = v_m^{n+1} kappa
        for n in 2..=4usize {
            let a = cayley(n).unwrap();
            let p = char_poly_lsa(&a);
            let kappa = twisted_det(&p);
            assert!(kappa.is_constant());
            let mut r = vec![Rat::zero(); n];
            r[n - 1] = frac(1, n as i64);
            let (_, hf) = graph_restrict(&p, &r).unwrap();
            assert!(hf.is_constant());
            let sign = if (n - 1) % 2 == 0 { rat(1) } else { rat(-1) };
            let vm = frac(1, n as i64);
            let mut scale = Rat::one();
            for _ in 0..=n {
                scale *= &vm;
            }
            assert_eq!(hf.constant_term() * sign, kappa.constant_term() * scale);
        }
    }

    #[test]
    fn six_dim_graph_restriction() {
        let a = six_dim();
        let p = char_poly_lsa(&a);
        let k = principal_idempotent(&a).unwrap();
        let (f, hf) = graph_restrict(&p, &k.u).unwrap();
        assert_eq!(f.nvars, 5);
        assert!(hf.is_constant());
        assert_eq!(hf.constant_term().abs(), rat(7776));
        assert_eq!(hf.constant_term(), rat(7776));
        // consistency with the ambient constant: H(f) = -kappa here
        let kappa = twisted_det(&p);
        assert_eq!(kappa.constant_term(), rat(-7776));
    }

    #[test]
    fn flow_character_residuals() {
        let a = cayley(2).unwrap();
        let r = vec![Rat::zero(), frac(1, 2)];
        let zero = vec![Rat::zero(); 2];
        let s = flow_sample(&a, &r, &zero, 1.0);
        // endpoint (0, (e-1)/2), P(endpoint) = e
        assert!((s.endpoint[1] - (1f64.exp() - 1.0) / 2.0).abs() < 1e-12);
        assert!(s.character_residual < 1e-9);
        let s0 = flow_sample(&a, &r, &zero, 0.0);
        assert_eq!(s0.endpoint, vec![0.0, 0.0]);
        assert_eq!(s0.character_residual, 0.0);
        // complete algebra: P stays 1 along every flow
        let f = fili(4).unwrap();
        let dir: Vec<Rat> = (0..4).map(|i| frac(i as i64 + 1, 3)).collect();
        let x0: Vec<Rat> = (0..4).map(|i| frac(1 - i as i64, 2)).collect();
        let sf = flow_sample(&f, &dir, &x0, 0.7);
        let pf = char_poly_lsa(&f);
        let endf: Vec<f64> = sf.endpoint.clone();
        assert!((eval_f64(&pf, &endf) - 1.0).abs() < 1e-9);
        assert!(sf.character_residual < 1e-9);
    }
}
