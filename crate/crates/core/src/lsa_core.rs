//! The algebra object: structure constants, axiom validation, operator
//! fields L(x) and R(x), trace form, characteristic polynomial det(I + R(x)),
//! ideal series, classification predicates, and flag triangularization.

use crate::par::par_map;
use crate::polyring::{MPoly, PolyMatrix};
use crate::qlinalg::{rat, rational_eigendata, QMatrix, Rat, Subspace};
use num::{One, Zero};
use thiserror::Error;

/// Finite-dimensional algebra over Q given by structure constants:
/// e_i * e_j = sum_k c[i][j][k] e_k (indices 0-based internally).
#[derive(Clone, Debug)]
pub struct Algebra {
    pub name: String,
    pub dim: usize,
    c: Vec<Rat>,
    validated: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("left-symmetry violated at basis triple ({i}, {j}, {k})")]
pub struct LsaViolation {
    /// 1-based basis indices of the failing triple
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub residual: Vec<Rat>,
}

impl Algebra {
    pub fn new(name: impl Into<String>, dim: usize, c: Vec<Rat>) -> Self {
        assert_eq!(c.len(), dim * dim * dim, "structure constant table size");
        Algebra { name: name.into(), dim, c, validated: false }
    }

    pub fn zero_algebra(name: impl Into<String>, dim: usize) -> Self {
        Self::new(name, dim, vec![Rat::zero(); dim * dim * dim])
    }

    /// Coefficient of e_k in e_i * e_j, all 0-based.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn set_c(&mut self, i: usize, j: usize, k: usize, v: Rat) {
        assert!(!self.validated, "algebra is immutable once validated");
        self.c[(i * self.dim + j) * self.dim + k] = v;
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        v[i] = Rat::one();
        v
    }

    pub fn product(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let n = self.dim;
        assert!(x.len() == n && y.len() == n);
        let mut out = vec![Rat::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// L(a): matrix of x -> a * x.
    pub fn l_op(&self, a: &[Rat]) -> QMatrix {
        let n = self.dim;
        QMatrix::from_fn(n, n, |k, j| {
            let mut s = Rat::zero();
            for i in 0..n {
                if !a[i].is_zero() {
                    s += &a[i] * self.c(i, j, k);
                }
            }
            s
        })
    }

    /// R(a): matrix of x -> x * a.
    pub fn r_op(&self, a: &[Rat]) -> QMatrix {
        let n = self.dim;
        QMatrix::from_fn(n, n, |k, j| {
            let mut s = Rat::zero();
            for i in 0..n {
                if !a[i].is_zero() {
                    s += &a[i] * self.c(j, i, k);
                }
            }
            s
        })
    }
}

/// Checks left-symmetry of the associator on all basis triples; sufficient
/// by trilinearity. Returns the validated algebra or the first violation.
pub fn validate_lsa(mut a: Algebra) -> Result<Algebra, LsaViolation> {
    let n = a.dim;
    let results: Vec<Option<LsaViolation>> = par_map(n, |i| {
        let ei = a.basis_vector(i);
        for j in 0..n {
            let ej = a.basis_vector(j);
            let eij = a.product(&ei, &ej);
            let eji = a.product(&ej, &ei);
            for k in 0..n {
                let ek = a.basis_vector(k);
                // assoc(i,j,k) - assoc(j,i,k)
                let lhs = a.product(&eij, &ek);
                let l2 = a.product(&ei, &a.product(&ej, &ek));
                let rhs = a.product(&eji, &ek);
                let r2 = a.product(&ej, &a.product(&ei, &ek));
                let residual: Vec<Rat> = (0..n)
                    .map(|m| &lhs[m] - &l2[m] - (&rhs[m] - &r2[m]))
                    .collect();
                if residual.iter().any(|r| !r.is_zero()) {
                    return Some(LsaViolation { i: i + 1, j: j + 1, k: k + 1, residual });
                }
            }
        }
        None
    });
    if let Some(v) = results.into_iter().flatten().next() {
        return Err(v);
    }
    a.validated = true;
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Left,
    Right,
}

/// Symbolic multiplication operator: entries are degree <= 1 polynomials in
/// x1..xn; evaluating at e_a recovers L(e_a)/R(e_a).
#[derive(Clone, Debug)]
pub struct OperatorField {
    pub kind: OperatorKind,
    pub entries: PolyMatrix,
}

impl OperatorField {
    pub fn evaluate(&self, a: &[Rat]) -> QMatrix {
        self.entries.evaluate(a)
    }

    pub fn trace(&self) -> MPoly {
        self.entries.trace()
    }
}

pub fn mult_operators(a: &Algebra) -> (OperatorField, OperatorField) {
    let n = a.dim;
    let lin = |cf: &dyn Fn(usize) -> Rat| {
        let mut p = MPoly::zero(n);
        for i in 0..n {
            p = p.add(&MPoly::var(n, i).scale(&cf(i)));
        }
        p
    };
    let l = PolyMatrix::from_fn(n, n, n, |k, j| lin(&|i| a.c(i, j, k).clone()));
    let r = PolyMatrix::from_fn(n, n, n, |k, j| lin(&|i| a.c(j, i, k).clone()));
    (
        OperatorField { kind: OperatorKind::Left, entries: l },
        OperatorField { kind: OperatorKind::Right, entries: r },
    )
}

#[derive(Clone, Debug)]
pub struct TraceForm {
    /// tau_{ij} = tr R(e_i)R(e_j)
    pub matrix: QMatrix,
    pub nondegenerate: bool,
}

/// The trace form tau(x,y) = tr R(x)R(y); also cross-checks the consequence
/// tau(e_i,e_j) = tr R(e_i * e_j) of the left-symmetry axiom and panics on a
/// mismatch, which would signal a validation bug.
pub fn trace_form(a: &Algebra) -> TraceForm {
    assert!(a.validated, "trace_form requires a validated algebra");
    let n = a.dim;
    let r_ops: Vec<QMatrix> = (0..n).map(|i| a.r_op(&a.basis_vector(i))).collect();
    let matrix = QMatrix::from_fn(n, n, |i, j| r_ops[i].mul(&r_ops[j]).trace());
    for i in 0..n {
        for j in 0..n {
            let prod = a.product(&a.basis_vector(i), &a.basis_vector(j));
            let alt = a.r_op(&prod).trace();
            assert_eq!(
                *matrix.at(i, j),
                alt,
                "trace form inconsistency at ({i},{j}): axiom check is broken"
            );
        }
    }
    let nondegenerate = !matrix.det().unwrap().is_zero();
    TraceForm { matrix, nondegenerate }
}

/// Characteristic polynomial P(x) = det(I + R(x)).
pub fn char_poly_lsa(a: &Algebra) -> MPoly {
    assert!(a.validated);
    let n = a.dim;
    let (_, rf) = mult_operators(a);
    let i_plus_r = PolyMatrix::from_fn(n, n, n, |i, j| {
        if i == j {
            rf.entries.at(i, j).add(&MPoly::one(n))
        } else {
            rf.entries.at(i, j).clone()
        }
    });
    i_plus_r.det()
}

#[derive(Clone, Debug)]
pub struct SeriesReport {
    /// derived series of the underlying Lie algebra, starting at [A,A]
    pub lie_derived: Vec<Subspace>,
    /// lower central series of the underlying Lie algebra, starting at [A,A]
    pub lie_lower_central: Vec<Subspace>,
    /// rnil^1 = A, rnil^{i+1} = rnil^i * A
    pub rnil: Vec<Subspace>,
    /// triv^1 = ker L ∩ ker R, triv^{i+1} = {z : z*A ⊆ triv^i, A*z ⊆ triv^i}
    pub triv_ascending: Vec<Subspace>,
    pub right_nilpotent: bool,
    pub nilpotent: bool,
    pub lie_solvable: bool,
    pub lie_nilpotent: bool,
}

fn bilinear_span(a: &Algebra, u: &Subspace, v: &Subspace, f: impl Fn(&[Rat], &[Rat]) -> Vec<Rat>) -> Subspace {
    let mut vectors = Vec::new();
    for x in &u.basis {
        for y in &v.basis {
            vectors.push(f(x, y));
        }
    }
    Subspace::span(a.dim, vectors)
}

/// span { x * y : x in U, y in V }
pub fn product_span(a: &Algebra, u: &Subspace, v: &Subspace) -> Subspace {
    bilinear_span(a, u, v, |x, y| a.product(x, y))
}

/// span { [x, y] : x in U, y in V }
pub fn bracket_span(a: &Algebra, u: &Subspace, v: &Subspace) -> Subspace {
    bilinear_span(a, u, v, |x, y| {
        let xy = a.product(x, y);
        let yx = a.product(y, x);
        xy.iter().zip(&yx).map(|(p, q)| p - q).collect()
    })
}

/// One ascending step: {z : z*e_j in target and e_j*z in target for all j}.
fn triv_step(a: &Algebra, target: &Subspace) -> Subspace {
    let n = a.dim;
    // rows of eqs vanish exactly on `target`
    let eqs: Vec<Vec<Rat>> = if target.is_zero() {
        (0..n).map(|i| a.basis_vector(i)).collect()
    } else {
        QMatrix::from_rows(target.basis.clone()).kernel_basis()
    };
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for j in 0..n {
        let ej = a.basis_vector(j);
        for m in [a.r_op(&ej), a.l_op(&ej)] {
            for e in &eqs {
                // e . (M z) as a row in z
                rows.push((0..n).map(|col| {
                    let mut s = Rat::zero();
                    for (ri, ev) in e.iter().enumerate() {
                        if !ev.is_zero() {
                            s += ev * m.at(ri, col);
                        }
                    }
                    s
                }).collect());
            }
        }
    }
    if rows.is_empty() {
        return Subspace::full(n);
    }
    Subspace::span(n, QMatrix::from_rows(rows).kernel_basis())
}

pub fn series(a: &Algebra) -> SeriesReport {
    assert!(a.validated);
    let n = a.dim;
    let full = Subspace::full(n);

    let mut lie_derived = vec![bracket_span(a, &full, &full)];
    loop {
        let last = lie_derived.last().unwrap();
        let next = bracket_span(a, last, last);
        if &next == last {
            break;
        }
        lie_derived.push(next);
    }

    let mut lie_lower_central = vec![bracket_span(a, &full, &full)];
    loop {
        let last = lie_lower_central.last().unwrap();
        let next = bracket_span(a, &full, last);
        if &next == last {
            break;
        }
        lie_lower_central.push(next);
    }

    let mut rnil = vec![full.clone()];
    loop {
        let last = rnil.last().unwrap();
        let next = product_span(a, last, &full);
        if &next == last {
            break;
        }
        rnil.push(next);
    }

    let mut triv_ascending = vec![triv_step(a, &Subspace::zero(n))];
    loop {
        let last = triv_ascending.last().unwrap();
        let next = triv_step(a, last);
        if &next == last {
            break;
        }
        triv_ascending.push(next);
    }

    let right_nilpotent = rnil.last().unwrap().is_zero();
    let nilpotent = triv_ascending.last().unwrap().is_full();
    let lie_solvable = lie_derived.last().unwrap().is_zero();
    let lie_nilpotent = lie_lower_central.last().unwrap().is_zero();
    SeriesReport {
        lie_derived,
        lie_lower_central,
        rnil,
        triv_ascending,
        right_nilpotent,
        nilpotent,
        lie_solvable,
        lie_nilpotent,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Triangularization {
    /// columns form the flag basis; every conjugated L(e_i) is lower triangular
    Basis(QMatrix),
    NotSolvable,
    IrrationalEigenvalues,
}

/// Searches for an ordered basis making every L(e_i) lower triangular, by
/// recursive common-eigenvector extraction in successive quotients, branching
/// over rational eigenvalues.
pub fn triangularize(a: &Algebra) -> Triangularization {
    assert!(a.validated);
    let rep = series(a);
    if !rep.lie_solvable {
        return Triangularization::NotSolvable;
    }
    let n = a.dim;
    let ops: Vec<QMatrix> = (0..n).map(|i| a.l_op(&a.basis_vector(i))).collect();
    let mut chosen: Vec<Vec<Rat>> = Vec::new();
    while chosen.len() < n {
        let k = chosen.len();
        let m = n - k;
        // complement coordinates: standard basis vectors off the pivots
        let flag_space = Subspace::span(n, chosen.clone());
        let pivots: Vec<usize> = flag_space
            .basis
            .iter()
            .map(|row| row.iter().position(|x| !x.is_zero()).unwrap())
            .collect();
        let comp: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        // change of basis: columns = chosen then complement
        let b = QMatrix::from_fn(n, n, |i, j| {
            if j < k {
                chosen[j][i].clone()
            } else if comp[j - k] == i {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let binv = b.inverse().expect("flag basis is independent");
        // quotient action = lower-right block of B^-1 M B
        let quot_ops: Vec<QMatrix> = ops
            .iter()
            .map(|op| {
                let conj = binv.mul(op).mul(&b);
                QMatrix::from_fn(m, m, |i, j| conj.at(k + i, k + j).clone())
            })
            .collect();
        let Some(w) = common_eigenvector(&quot_ops, Subspace::full(m)) else {
            return Triangularization::IrrationalEigenvalues;
        };
        // lift along complement coordinates
        let mut v = vec![Rat::zero(); n];
        for (ci, wi) in comp.iter().zip(&w) {
            v[*ci] = wi.clone();
        }
        chosen.push(v);
    }
    // lower triangular wants the invariant flag at the tail
    chosen.reverse();
    let t = QMatrix::from_fn(n, n, |i, j| chosen[j][i].clone());
    let tinv = t.inverse().unwrap();
    for op in &ops {
        let conj = tinv.mul(op).mul(&t);
        for i in 0..n {
            for j in i + 1..n {
                assert!(conj.at(i, j).is_zero(), "flag search produced a non-triangular basis");
            }
        }
    }
    Triangularization::Basis(t)
}

fn common_eigenvector(ops: &[QMatrix], space: Subspace) -> Option<Vec<Rat>> {
    if space.is_zero() {
        return None;
    }
    match ops.split_first() {
        None => Some(space.basis[0].clone()),
        Some((op, rest)) => {
            let n = op.rows;
            let eig = rational_eigendata(op).expect("square operator");
            for (alpha, _) in &eig.rational_roots {
                let mut shifted = op.clone();
                for i in 0..n {
                    *shifted.at_mut(i, i) -= alpha;
                }
                let eigenspace = Subspace::span(n, shifted.kernel_basis());
                let next = space.intersect(&eigenspace);
                if let Some(v) = common_eigenvector(rest, next) {
                    return Some(v);
                }
            }
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub is_lsa: bool,
    pub complete: bool,
    /// R(x) nilpotent for all x (polynomial identity)
    pub right_nil: bool,
    /// L(x) nilpotent for all x (polynomial identity)
    pub left_nil: bool,
    /// rnil series reaches 0
    pub right_nilpotent: bool,
    /// triv ascending series reaches the whole algebra
    pub nilpotent: bool,
    pub lie_solvable: bool,
    pub lie_nilpotent: bool,
    pub perfect: bool,
    pub trace_form_nondegenerate: bool,
    pub derived_codim: usize,
    /// None when not defined (complete or degenerate trace form)
    pub ker_trr_unimodular: Option<bool>,
    pub triangularizable: Triangularization,
    /// 2 tr L = (n+1) tr R as an identity of linear forms
    pub condition_2trl_eq_n1trr: bool,
    pub tr_l: MPoly,
    pub tr_r: MPoly,
    pub series: SeriesReport,
}

/// True iff every evaluation of the operator field is nilpotent, decided by
/// the vanishing of tr(M^k) for k = 1..dim as polynomial identities.
fn field_nil(field: &OperatorField, dim: usize) -> bool {
    let mut power = field.entries.clone();
    for _ in 0..dim {
        if !power.trace().is_zero() {
            return false;
        }
        power = power.mul(&field.entries);
    }
    true
}

pub fn classify(a: &Algebra, thorough: bool) -> ClassificationReport {
    assert!(a.validated);
    let n = a.dim;
    let (lf, rf) = mult_operators(a);
    let tr_l = lf.trace();
    let tr_r = rf.trace();
    let complete = tr_r.is_zero();
    // complete <=> every R(x) nilpotent; the symbolic identity is the
    // expensive cross-check
    let right_nil = if thorough {
        let direct = rf.entries.pow(n as u32).is_zero();
        assert_eq!(direct, complete, "completeness equivalences disagree");
        direct
    } else {
        complete
    };
    let left_nil = field_nil(&lf, n);
    if thorough {
        assert_eq!(left_nil, lf.entries.pow(n as u32).is_zero());
    }
    let rep = series(a);
    let full = Subspace::full(n);
    let all_products = product_span(a, &full, &full);
    let perfect = all_products.is_full();
    let derived_codim = n - rep.lie_derived[0].dim();
    debug_assert!(derived_codim >= 1, "derived subalgebra of an LSA is proper");
    let tf = trace_form(a);
    let ker_trr_unimodular = if complete || !tf.nondegenerate {
        None
    } else {
        // right principal idempotent: tau(r, .) = tr R(.)
        let lam: Vec<Rat> = (0..n).map(|i| a.r_op(&a.basis_vector(i)).trace()).collect();
        let r = tf.matrix.solve(&lam).expect("nondegenerate trace form");
        let trlr = a.l_op(&r).trace();
        let trrr = a.r_op(&r).trace();
        // tr R(r) tr L = tr L(r) tr R checked on the basis
        Some((0..n).all(|i| {
            let ei = a.basis_vector(i);
            &trrr * a.l_op(&ei).trace() == &trlr * a.r_op(&ei).trace()
        }))
    };
    let triangularizable = triangularize(a);
    let condition = tr_l.scale(&rat(2)) == tr_r.scale(&rat(n as i64 + 1));
    ClassificationReport {
        is_lsa: true,
        complete,
        right_nil,
        left_nil,
        right_nilpotent: rep.right_nilpotent,
        nilpotent: rep.nilpotent,
        lie_solvable: rep.lie_solvable,
        lie_nilpotent: rep.lie_nilpotent,
        perfect,
        trace_form_nondegenerate: tf.nondegenerate,
        derived_codim,
        ker_trr_unimodular,
        triangularizable,
        condition_2trl_eq_n1trr: condition,
        tr_l,
        tr_r,
        series: rep,
    }
}

/// log P truncated to total degree <= order, valid since P(0) = 1.
pub fn log_charpoly_truncated(p: &MPoly, order: u32) -> MPoly {
    let n = p.nvars;
    let q = p.sub(&MPoly::one(n));
    let mut acc = MPoly::zero(n);
    let mut qk = MPoly::one(n);
    for k in 1..=order {
        qk = truncate(&qk.mul(&q), order);
        if qk.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
        acc = acc.add(&qk.scale(&(sign / rat(k as i64))));
    }
    acc
}

fn truncate(p: &MPoly, order: u32) -> MPoly {
    let mut out = MPoly::zero(p.nvars);
    for (m, c) in p.terms() {
        if m.iter().sum::<u32>() <= order {
            out = out.add(&MPoly::monomial(p.nvars, m.clone(), c.clone()));
        }
    }
    out
}

/// Iterated directional derivative of `f` along the tuple, evaluated at 0.
pub fn jet_at_zero(f: &MPoly, directions: &[Vec<Rat>]) -> Rat {
    let mut g = f.clone();
    for a in directions {
        let grad = g.gradient();
        let mut d = MPoly::zero(g.nvars);
        for (gi, ai) in grad.iter().zip(a) {
            d = d.add(&gi.scale(ai));
        }
        g = d;
    }
    g.constant_term()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    fn heap(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            heap(n - 1, cur, out);
            if n % 2 == 0 {
                cur.swap(i, n - 1);
            } else {
                cur.swap(0, n - 1);
            }
        }
    }
    heap(k, &mut cur, &mut out);
    out
}

/// Right side of Helmstetter's identity:
/// (-1)^k sum over permutations sigma of tr(R(a_sigma(1))..R(a_sigma(k)) R(a_0)).
pub fn helmstetter_rhs(a: &Algebra, a0: &[Rat], rest: &[Vec<Rat>]) -> Rat {
    let k = rest.len();
    let r0 = a.r_op(a0);
    let rs: Vec<QMatrix> = rest.iter().map(|v| a.r_op(v)).collect();
    let mut acc = Rat::zero();
    for perm in permutations(k) {
        let mut m = QMatrix::identity(a.dim);
        for &idx in &perm {
            m = m.mul(&rs[idx]);
        }
        acc += m.mul(&r0).trace();
    }
    if k % 2 == 1 {
        -acc
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::frac;

    /// dim-2 commutative associative algebra e1*e1 = e1 (rest 0): an LSA.
    fn idempotent_line() -> Algebra {
        let mut a = Algebra::zero_algebra("line", 2);
        a.set_c(0, 0, 0, Rat::one());
        validate_lsa(a).unwrap()
    }

    fn trivial(n: usize) -> Algebra {
        validate_lsa(Algebra::zero_algebra("trivial", n)).unwrap()
    }

    /// e_i ∘ e_j = e_{i+j} for i+j <= m, truncated; complete commutative LSA.
    fn fili_local(m: usize) -> Algebra {
        let mut a = Algebra::zero_algebra("fili", m);
        for i in 0..m {
            for j in 0..m {
                if i + j + 2 <= m {
                    a.set_c(i, j, i + j + 1, Rat::one());
                }
            }
        }
        validate_lsa(a).unwrap()
    }

    #[test]
    fn trivial_algebra_validates() {
        let a = trivial(3);
        assert!(a.is_validated());
    }

    #[test]
    fn violation_witness() {
        // e1*e1 = e2, e2*e2 = e1: not left-symmetric
        let mut a = Algebra::zero_algebra("bad", 2);
        a.set_c(0, 0, 1, Rat::one());
        a.set_c(1, 1, 0, Rat::one());
        let err = validate_lsa(a).unwrap_err();
        assert_eq!((err.i, err.j, err.k), (1, 2, 1));
        assert!(err.residual.iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn operator_fields_recover_point_operators() {
        let a = idempotent_line();
        let (lf, rf) = mult_operators(&a);
        for i in 0..2 {
            let e = a.basis_vector(i);
            assert_eq!(lf.evaluate(&e), a.l_op(&e));
            assert_eq!(rf.evaluate(&e), a.r_op(&e));
        }
    }

    #[test]
    fn trace_form_symmetric() {
        let a = idempotent_line();
        let tf = trace_form(&a);
        assert_eq!(tf.matrix, tf.matrix.transpose());
    }

    #[test]
    fn charpoly_constant_term_and_linear_part() {
        let a = idempotent_line();
        let p = char_poly_lsa(&a);
        assert_eq!(p.constant_term(), Rat::one());
        let (_, rf) = mult_operators(&a);
        let trr = rf.trace();
        for i in 0..2 {
            let mut m = vec![0u32; 2];
            m[i] = 1;
            assert_eq!(p.coeff(&m), trr.coeff(&m));
        }
    }

    #[test]
    fn fili3_series_shape() {
        let a = fili_local(3);
        let rep = series(&a);
        let dims: Vec<usize> = rep.rnil.iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![3, 2, 1, 0]);
        let tdims: Vec<usize> = rep.triv_ascending.iter().map(Subspace::dim).collect();
        assert_eq!(tdims, vec![1, 2, 3]);
        assert!(rep.rnil[1].contains(&[rat(0), rat(1), rat(0)]));
        assert!(rep.rnil[2].contains(&[rat(0), rat(0), rat(1)]));
        assert!(rep.right_nilpotent && rep.nilpotent);
    }

    #[test]
    fn trivial_series() {
        let rep = series(&trivial(2));
        assert_eq!(rep.rnil.iter().map(Subspace::dim).collect::<Vec<_>>(), vec![2, 0]);
        assert!(rep.triv_ascending[0].is_full());
    }

    #[test]
    fn classify_fili() {
        let a = fili_local(4);
        let rep = classify(&a, true);
        assert!(rep.complete && rep.right_nil && rep.left_nil);
        assert!(rep.right_nilpotent && rep.nilpotent && rep.lie_nilpotent);
        assert!(!rep.perfect);
        assert!(!rep.trace_form_nondegenerate);
        assert!(rep.ker_trr_unimodular.is_none());
        assert!(matches!(rep.triangularizable, Triangularization::Basis(_)));
        assert_eq!(char_poly_lsa(&a), MPoly::one(4));
    }

    #[test]
    fn classify_idempotent_line() {
        let a = idempotent_line();
        let rep = classify(&a, true);
        assert!(!rep.complete);
        assert!(!rep.right_nilpotent && !rep.nilpotent);
        assert!(rep.lie_solvable);
        assert!(matches!(rep.triangularizable, Triangularization::Basis(_)));
    }

    #[test]
    fn triangularize_rejects_irrational() {
        // complex numbers as a 2-dim LSA (associative commutative):
        // e1 = 1, e2 = i; L(e2) has char poly t^2 + 1
        let mut a = Algebra::zero_algebra("complex", 2);
        a.set_c(0, 0, 0, Rat::one());
        a.set_c(0, 1, 1, Rat::one());
        a.set_c(1, 0, 1, Rat::one());
        a.set_c(1, 1, 0, -Rat::one());
        let a = validate_lsa(a).unwrap();
        assert_eq!(triangularize(&a), Triangularization::IrrationalEigenvalues);
    }

    #[test]
    fn hessian_of_log_p_is_minus_trace_form() {
        let a = idempotent_line();
        let p = char_poly_lsa(&a);
        let tf = trace_form(&a);
        let logp = log_charpoly_truncated(&p, 2);
        for i in 0..2 {
            for j in 0..2 {
                let h = jet_at_zero(&logp, &[a.basis_vector(i), a.basis_vector(j)]);
                assert_eq!(h, -tf.matrix.at(i, j).clone());
            }
        }
    }

    #[test]
    fn helmstetter_first_jet() {
        // k = 1: (d d log P)_0(a_0, a_1) = -tr R(a_1)R(a_0), i.e. -tau
        let a = fili_local(3);
        let p = char_poly_lsa(&a);
        let logp = log_charpoly_truncated(&p, 4);
        for i in 0..3 {
            for j in 0..3 {
                let lhs = jet_at_zero(&logp, &[a.basis_vector(i), a.basis_vector(j)]);
                let rhs = helmstetter_rhs(&a, &a.basis_vector(i), &[a.basis_vector(j)]);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn product_respects_scaling() {
        let a = idempotent_line();
        let x = vec![frac(1, 2), rat(3)];
        let y = vec![rat(2), frac(-1, 4)];
        let xy = a.product(&x, &y);
        let sx: Vec<Rat> = x.iter().map(|v| v * rat(2)).collect();
        let sxy = a.product(&sx, &y);
        assert_eq!(sxy, xy.iter().map(|v| v * rat(2)).collect::<Vec<_>>());
    }
}
