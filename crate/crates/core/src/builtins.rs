//! Generators for the concrete algebra and polynomial families used as the
//! regression corpus: Cayley algebras, Eastwood-Ezhov polynomials, truncated
//! power-series algebras, paraboloid algebras, a distinguished 6-dimensional
//! algebra, and the negative-eigenvalue families over a trivial base.

use crate::lsa_core::{validate_lsa, Algebra};
use crate::polyring::MPoly;
use crate::qlinalg::{frac, rat, QMatrix, Rat};
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuiltinError {
    #[error("dimension must be at least 1")]
    DimensionTooSmall,
    #[error("metric must be symmetric")]
    AsymmetricMetric,
    #[error("metric must be nondegenerate")]
    DegenerateMetric,
    #[error("IDENTITY_FAILED({0})")]
    IdentityFailed(String),
}

/// The n-dimensional Cayley algebra:
/// x * y = sum_i (i x_n y_i + sum_{j<i} x_{i-j} y_j) e_i.
pub fn cayley(n: usize) -> Result<Algebra, BuiltinError> {
    if n < 1 {
        return Err(BuiltinError::DimensionTooSmall);
    }
    let mut a = Algebra::zero_algebra(format!("cayley{n}"), n);
    // e_a * e_b = e_{a+b} for a + b <= n (from the convolution part, a < n)
    for ai in 0..n - 1 {
        for bi in 0..n {
            if ai + bi + 2 <= n {
                a.set_c(ai, bi, ai + bi + 1, Rat::one());
            }
        }
    }
    // e_n * e_b contributes b e_b, and e_n * e_n = n e_n
    for bi in 0..n {
        let mut v = a.c(n - 1, bi, bi).clone();
        v += rat(bi as i64 + 1);
        a.set_c(n - 1, bi, bi, v);
    }
    Ok(validate_lsa(a).expect("Cayley products are left-symmetric"))
}

/// Truncated power-series algebra on m generators: e_i o e_j = e_{i+j} when
/// i + j <= m, else 0. Complete, commutative, nilpotent.
pub fn fili(m: usize) -> Result<Algebra, BuiltinError> {
    if m < 1 {
        return Err(BuiltinError::DimensionTooSmall);
    }
    let mut a = Algebra::zero_algebra(format!("fili{m}"), m);
    for i in 0..m {
        for j in 0..m {
            if i + j + 2 <= m {
                a.set_c(i, j, i + j + 1, Rat::one());
            }
        }
    }
    Ok(validate_lsa(a).expect("truncated power series are associative"))
}

/// Paraboloid algebra on V + <u> with x*y = g(x,y)u, x*u = 0, u*x = x/2,
/// u*u = u, for a symmetric nondegenerate g on the (n-1)-dimensional V.
pub fn parab(g: &QMatrix, n: usize) -> Result<Algebra, BuiltinError> {
    if n < 1 {
        return Err(BuiltinError::DimensionTooSmall);
    }
    assert_eq!((g.rows, g.cols), (n - 1, n - 1), "metric size must be dim - 1");
    if g != &g.transpose() {
        return Err(BuiltinError::AsymmetricMetric);
    }
    if n > 1 && g.det().unwrap().is_zero() {
        return Err(BuiltinError::DegenerateMetric);
    }
    let mut a = Algebra::zero_algebra(format!("parab{n}"), n);
    let u = n - 1;
    for i in 0..u {
        for j in 0..u {
            a.set_c(i, j, u, g.at(i, j).clone());
        }
        a.set_c(u, i, i, frac(1, 2));
    }
    a.set_c(u, u, u, Rat::one());
    Ok(validate_lsa(a).expect("paraboloid algebra is left-symmetric"))
}

/// The identity metric of size n-1, for parab(delta, n).
pub fn euclidean_metric(n: usize) -> QMatrix {
    QMatrix::identity(n.saturating_sub(1))
}

/// The displayed L(x) of the 6-dimensional example, for the transcription test.
pub fn six_dim_l_reference() -> crate::polyring::PolyMatrix {
    six_dim_reference(true)
}

/// The displayed R(x) of the 6-dimensional example.
pub fn six_dim_r_reference() -> crate::polyring::PolyMatrix {
    six_dim_reference(false)
}

fn six_dim_reference(left: bool) -> crate::polyring::PolyMatrix {
    use crate::polyring::PolyMatrix;
    let nv = 6;
    let x = |i: usize| MPoly::var(nv, i - 1);
    let z = MPoly::zero(nv);
    let rows_l: Vec<Vec<MPoly>> = vec![
        vec![x(6).scale(&frac(1, 4)), z.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), x(6).scale(&frac(1, 4)), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), x(6).scale(&frac(1, 2)), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), x(2), x(6).scale(&frac(3, 4)), z.clone(), z.clone()],
        vec![x(3), x(3), x(1).add(&x(2).scale(&rat(2))), z.clone(), x(6).scale(&frac(3, 4)), z.clone()],
        vec![
            x(4).scale(&rat(6)),
            x(5).scale(&rat(6)),
            x(3).scale(&rat(6)),
            x(1).scale(&rat(6)),
            x(2).scale(&rat(6)),
            x(6),
        ],
    ];
    let rows_r: Vec<Vec<MPoly>> = vec![
        vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), x(1).scale(&frac(1, 4))],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), x(2).scale(&frac(1, 4))],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), x(3).scale(&frac(1, 2))],
        vec![z.clone(), x(3), z.clone(), z.clone(), z.clone(), x(4).scale(&frac(3, 4))],
        vec![x(3), x(3).scale(&rat(2)), x(1).add(&x(2)), z.clone(), z.clone(), x(5).scale(&frac(3, 4))],
        vec![
            x(4).scale(&rat(6)),
            x(5).scale(&rat(6)),
            x(3).scale(&rat(6)),
            x(1).scale(&rat(6)),
            x(2).scale(&rat(6)),
            x(6),
        ],
    ];
    let rows = if left { rows_l } else { rows_r };
    PolyMatrix::from_fn(6, 6, nv, |i, j| rows[i][j].clone())
}

/// A 6-dimensional incomplete LSA with nondegenerate trace form and
/// nilpotent non-abelian derived algebra.
pub fn six_dim() -> Algebra {
    let mut a = Algebra::zero_algebra("six_dim", 6);
    // transcription of L(x): entry (k,j) = sum_i x_i c_{ijk}, 1-based below
    let entries: &[(usize, usize, usize, Rat)] = &[
        (6, 1, 1, frac(1, 4)),
        (6, 2, 2, frac(1, 4)),
        (6, 3, 3, frac(1, 2)),
        (2, 3, 4, rat(1)),
        (6, 4, 4, frac(3, 4)),
        (3, 1, 5, rat(1)),
        (3, 2, 5, rat(1)),
        (1, 3, 5, rat(1)),
        (2, 3, 5, rat(2)),
        (6, 5, 5, frac(3, 4)),
        (4, 1, 6, rat(6)),
        (5, 2, 6, rat(6)),
        (3, 3, 6, rat(6)),
        (1, 4, 6, rat(6)),
        (2, 5, 6, rat(6)),
        (6, 6, 6, rat(1)),
    ];
    for (i, j, k, v) in entries {
        a.set_c(i - 1, j - 1, k - 1, v.clone());
    }
    validate_lsa(a).expect("transcribed structure constants form an LSA")
}

/// Parameters for the graph-extension-of-a-trivial-base family: a metric
/// x^t J y, a weight map D, and a nilpotent correction N on the n-dim base.
#[derive(Clone, Debug)]
pub struct NegeigParams {
    pub n: usize,
    pub j: QMatrix,
    pub d: QMatrix,
    pub nil: QMatrix,
    pub alpha: Rat,
}

impl NegeigParams {
    /// Checks the exact identities DJ + JD = J, [D, N] = 0, N^t J = -JN.
    pub fn validate(&self) -> Result<(), BuiltinError> {
        let n = self.n;
        for m in [&self.j, &self.d, &self.nil] {
            assert_eq!((m.rows, m.cols), (n, n));
        }
        if self.alpha.is_zero() {
            return Err(BuiltinError::IdentityFailed("alpha = 0".into()));
        }
        if self.d.mul(&self.j).add(&self.j.mul(&self.d)) != self.j {
            return Err(BuiltinError::IdentityFailed("DJ+JD≠J".into()));
        }
        if self.d.mul(&self.nil) != self.nil.mul(&self.d) {
            return Err(BuiltinError::IdentityFailed("[D,N]≠0".into()));
        }
        if self.nil.transpose().mul(&self.j) != self.j.mul(&self.nil).scale(&-Rat::one()) {
            return Err(BuiltinError::IdentityFailed("NᵀJ≠−JN".into()));
        }
        Ok(())
    }
}

/// Incomplete LSA of dimension n+1 over a trivial base:
/// x * y = (x_hat (D+N) y_bar, alpha x_bar^t J y_bar + x_hat y_hat).
pub fn negeig(params: &NegeigParams) -> Result<Algebra, BuiltinError> {
    params.validate()?;
    let n = params.n;
    let dim = n + 1;
    let dn = params.d.add(&params.nil);
    let mut a = Algebra::zero_algebra(format!("negeig{dim}"), dim);
    for i in 0..n {
        for j in 0..n {
            a.set_c(i, j, n, &params.alpha * params.j.at(i, j));
        }
    }
    for j in 0..n {
        for k in 0..n {
            a.set_c(n, j, k, dn.at(k, j).clone());
        }
    }
    a.set_c(n, n, n, Rat::one());
    Ok(validate_lsa(a).expect("negeig identities guarantee left-symmetry"))
}

fn antidiag(n: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |i, j| if i + j + 1 == n { Rat::one() } else { Rat::zero() })
}

/// Preset with D = diag(sigma, 1/2, 1-sigma), N = 0:
/// weight set {sigma, 1/2, 1-sigma, 1}.
pub fn sigma_family(sigma: &Rat) -> Algebra {
    let d = QMatrix::from_rows(vec![
        vec![sigma.clone(), Rat::zero(), Rat::zero()],
        vec![Rat::zero(), frac(1, 2), Rat::zero()],
        vec![Rat::zero(), Rat::zero(), Rat::one() - sigma],
    ]);
    let params = NegeigParams {
        n: 3,
        j: antidiag(3),
        d,
        nil: QMatrix::zero(3, 3),
        alpha: Rat::one(),
    };
    let mut a = negeig(&params).expect("sigma family parameters are consistent");
    a.name = "sigma_family".into();
    a
}

/// Preset with D = I/2 and a nontrivial nilpotent N: L(r) has a Jordan
/// block for t != 0, but the same P as the sigma family at sigma = 1/2.
pub fn jordan_family(t: &Rat) -> Algebra {
    let nil = QMatrix::from_rows(vec![
        vec![Rat::zero(), Rat::zero(), Rat::zero()],
        vec![t.clone(), Rat::zero(), Rat::zero()],
        vec![Rat::zero(), -t.clone(), Rat::zero()],
    ]);
    let params = NegeigParams {
        n: 3,
        j: antidiag(3),
        d: QMatrix::identity(3).scale(&frac(1, 2)),
        nil,
        alpha: Rat::one(),
    };
    let mut a = negeig(&params).expect("jordan family parameters are consistent");
    a.name = "jordan_family".into();
    a
}

/// Phi_n by the partition sum: sum over partitions lambda of n of
/// (-1)^{|lambda|} c_lambda / |lambda| x_(lambda), with c_lambda the number
/// of compositions refining lambda.
fn ee_partition_sum(n: usize) -> MPoly {
    let mut acc = MPoly::zero(n);
    let mut partition: Vec<usize> = Vec::new();
    fn rec(remaining: usize, max_part: usize, partition: &mut Vec<usize>, acc: &mut MPoly, n: usize) {
        if remaining == 0 {
            let len = partition.len();
            // multiplicities and c_lambda = len! / prod m_i!
            let mut mult = vec![0u32; n + 1];
            for &p in partition.iter() {
                mult[p] += 1;
            }
            let mut c = Rat::one();
            for k in 2..=len {
                c *= rat(k as i64);
            }
            for &m in &mult {
                for k in 2..=m {
                    c /= rat(k as i64);
                }
            }
            let sign = if len % 2 == 1 { -Rat::one() } else { Rat::one() };
            let coeff = sign * c / rat(len as i64);
            let exps: Vec<u32> = (1..=n).map(|i| mult[i]).collect();
            *acc = acc.add(&MPoly::monomial(n, exps, coeff));
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            partition.push(p);
            rec(remaining - p, p, partition, acc, n);
            partition.pop();
        }
    }
    rec(n, n, &mut partition, &mut acc, n);
    acc
}

/// Phi_n by the recursion Phi_n = -x_n + sum_{i<n} (i/n - 1) x_i Phi_{n-i},
/// with all of Phi_1..Phi_n expressed in n variables.
fn ee_recursion(n: usize) -> Vec<MPoly> {
    let mut phis: Vec<MPoly> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut p = MPoly::var(n, m - 1).neg();
        for i in 1..m {
            let w = frac(i as i64, m as i64) - Rat::one();
            let term = MPoly::var(n, i - 1).mul(&phis[m - i - 1]).scale(&w);
            p = p.add(&term);
        }
        phis.push(p);
    }
    phis
}

/// The n-th Eastwood-Ezhov polynomial Phi_n, built independently from the
/// partition sum and from the recursion; panics when the two disagree.
pub fn eastwood_ezhov(n: usize) -> Result<MPoly, BuiltinError> {
    if n < 1 {
        return Err(BuiltinError::DimensionTooSmall);
    }
    let by_recursion = ee_recursion(n).pop().unwrap();
    // the partition sum lives in n variables already
    let by_partitions = ee_partition_sum(n);
    assert_eq!(
        by_recursion, by_partitions,
        "Eastwood-Ezhov constructions disagree at n = {n}"
    );
    Ok(by_recursion)
}

/// The standard test corpus: every named family at small sizes.
pub fn corpus() -> Vec<Algebra> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push(cayley(n).unwrap());
    }
    for m in 1..=5 {
        out.push(fili(m).unwrap());
    }
    for n in 2..=5 {
        out.push(parab(&euclidean_metric(n), n).unwrap());
    }
    out.push(six_dim());
    out.push(sigma_family(&rat(2)));
    out.push(sigma_family(&frac(-1, 3)));
    out.push(jordan_family(&Rat::one()));
    for n in 1..=4 {
        let mut a = Algebra::zero_algebra(format!("trivial{n}"), n);
        a.name = format!("trivial{n}");
        out.push(validate_lsa(a).unwrap());
    }
    out
}
