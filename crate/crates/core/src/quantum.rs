//! Projection-valued measurements and finite-dimensional quantum strategies.
//!
//! A PVM over an outcome set `0..n` is a list of `n` orthogonal projectors
//! summing to the identity. A tuple of PVMs over `Y` belongs to a relation of
//! the quantised template when some joint PVM over the relation's tuples
//! marginalizes to each of them. This is decided by the product criterion:
//! the PVMs commute pairwise and every product `E¹_{y1} ... Eʳ_{yr}` with
//! `(y1, ..., yr)` outside the relation vanishes. The products on the
//! relation then form the witness.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{Counterexample, Reason, Verdict};
use crate::linalg::{inner, norm, random_orthonormal, ComplexMatrix, C64, ONE, ZERO};
use crate::patterns::{tuple_partition, Partition};
use crate::powers::alice_encode;
use crate::structures::{is_homomorphism, Relation, Structure, Vertex};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const MAX_DIMENSION: usize = 16;

fn check_dimension(d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIMENSION {
        return Err(Error::InvalidParameter(format!("dimension {d} outside 1..={MAX_DIMENSION}")));
    }
    Ok(())
}

/// Projectors indexed by outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ComplexMatrix>", into = "Vec<ComplexMatrix>")]
pub struct Pvm {
    projectors: Vec<ComplexMatrix>,
}

impl TryFrom<Vec<ComplexMatrix>> for Pvm {
    type Error = Error;

    fn try_from(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        Pvm::new(projectors)
    }
}

impl From<Pvm> for Vec<ComplexMatrix> {
    fn from(p: Pvm) -> Self {
        p.projectors
    }
}

impl Pvm {
    /// Checks shapes only; see [`validate_pvm`] for the algebraic conditions.
    pub fn new(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = projectors.first() else {
            return Err(Error::ShapeMismatch("a PVM needs at least one outcome".into()));
        };
        let d = first.rows();
        if projectors.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::ShapeMismatch("PVM projectors must share one square shape".into()));
        }
        Ok(Pvm { projectors })
    }

    /// `I` on `outcome`, `0` elsewhere.
    pub fn deterministic(outcome: usize, outcomes: usize, d: usize) -> Result<Self> {
        if outcome >= outcomes {
            return Err(Error::InvalidParameter(format!("outcome {outcome} outside 0..{outcomes}")));
        }
        Ok(Pvm {
            projectors: (0..outcomes)
                .map(|s| if s == outcome { ComplexMatrix::identity(d) } else { ComplexMatrix::zeros(d, d) })
                .collect(),
        })
    }

    /// `E_s = Σ_{j : labels[j] = s} v_j v_j*` for an orthonormal basis.
    pub fn from_basis(basis: &[Vec<C64>], labels: &[usize], outcomes: usize) -> Result<Self> {
        let d = basis.len();
        if labels.len() != d || basis.iter().any(|v| v.len() != d) {
            return Err(Error::ShapeMismatch("need d labels for d vectors of length d".into()));
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= outcomes) {
            return Err(Error::InvalidParameter(format!("label {l} outside 0..{outcomes}")));
        }
        let projectors = (0..outcomes)
            .map(|s| {
                let vs: Vec<&[C64]> =
                    basis.iter().zip(labels).filter(|(_, &l)| l == s).map(|(v, _)| v.as_slice()).collect();
                ComplexMatrix::projector(&vs, d)
            })
            .collect();
        Ok(Pvm { projectors })
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn projector(&self, s: usize) -> &ComplexMatrix {
        &self.projectors[s]
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// Same outcome count and every projector within `tol`.
    pub fn approx_eq(&self, other: &Pvm, tol: f64) -> bool {
        self.outcomes() == other.outcomes()
            && self.dim() == other.dim()
            && self.projectors.iter().zip(&other.projectors).all(|(a, b)| a.distance(b).expect("same shape") <= tol)
    }

    /// Relabels outcomes: the projector of outcome `s` moves to `perm[s]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Pvm> {
        let n = self.outcomes();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&t| t >= n || std::mem::replace(&mut seen[t], true)) {
            return Err(Error::InvalidParameter("not a permutation of the outcomes".into()));
        }
        let mut projectors = vec![ComplexMatrix::zeros(self.dim(), self.dim()); n];
        for (s, &t) in perm.iter().enumerate() {
            projectors[t] = self.projectors[s].clone();
        }
        Ok(Pvm { projectors })
    }
}

/// A random PVM: a random orthonormal basis with uniformly random outcome
/// labels. Some projectors may be zero.
pub fn random_pvm<G: Rng + ?Sized>(d: usize, outcomes: usize, rng: &mut G) -> Result<Pvm> {
    check_dimension(d)?;
    let basis = random_orthonormal(d, d, rng);
    let labels: Vec<usize> = (0..d).map(|_| rng.random_range(0..outcomes)).collect();
    Pvm::from_basis(&basis, &labels, outcomes)
}

/// Frobenius-norm residuals of the PVM conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PvmReport {
    /// `max ‖E² − E‖`.
    pub idempotence: f64,
    /// `max ‖E − E*‖`.
    pub self_adjointness: f64,
    /// `‖Σ E − I‖`.
    pub completeness: f64,
    /// `max_{s ≠ t} ‖E_s E_t‖`.
    pub orthogonality: f64,
}

impl PvmReport {
    pub fn max_residual(&self) -> f64 {
        self.idempotence.max(self.self_adjointness).max(self.completeness).max(self.orthogonality)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

pub fn validate_pvm(p: &Pvm) -> PvmReport {
    let d = p.dim();
    let mut report = PvmReport { idempotence: 0.0, self_adjointness: 0.0, completeness: 0.0, orthogonality: 0.0 };
    let mut sum = ComplexMatrix::zeros(d, d);
    for (s, e) in p.projectors.iter().enumerate() {
        report.idempotence = report.idempotence.max((e * e).distance(e).expect("square"));
        report.self_adjointness = report.self_adjointness.max(e.adjoint().distance(e).expect("square"));
        sum = &sum + e;
        for f in &p.projectors[s + 1..] {
            report.orthogonality = report.orthogonality.max((e * f).frobenius_norm());
        }
    }
    report.completeness = sum.distance(&ComplexMatrix::identity(d)).expect("square");
    report
}

/// Largest commutator norm between projectors of `p` and `q`.
pub fn max_commutator_norm(p: &Pvm, q: &Pvm) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::ShapeMismatch(format!("dimensions {} and {}", p.dim(), q.dim())));
    }
    let mut worst: f64 = 0.0;
    for e in &p.projectors {
        for f in &q.projectors {
            worst = worst.max(e.commutator(f)?.frobenius_norm());
        }
    }
    Ok(worst)
}

pub fn pvms_commute(p: &Pvm, q: &Pvm, tol: f64) -> Result<bool> {
    Ok(max_commutator_norm(p, q)? <= tol)
}

/// A joint PVM over the tuples of a relation, stored as the tuples with
/// their projectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointPvm {
    pub support: Vec<Vec<Vertex>>,
    pub projectors: Vec<ComplexMatrix>,
}

impl JointPvm {
    /// Tuples whose projector has norm above `tol`.
    pub fn nonzero_support(&self, tol: f64) -> Vec<&[Vertex]> {
        self.support
            .iter()
            .zip(&self.projectors)
            .filter(|(_, f)| f.frobenius_norm() > tol)
            .map(|(t, _)| t.as_slice())
            .collect()
    }

    /// The joint PVM as a PVM whose outcomes are the support tuples.
    pub fn as_pvm(&self) -> Result<Pvm> {
        Pvm::new(self.projectors.clone())
    }
}

fn check_pvm_tuple(pvms: &[Pvm], rel: &Relation) -> Result<(usize, usize)> {
    if pvms.len() != rel.arity() {
        return Err(Error::ShapeMismatch(format!("{} PVMs for a relation of arity {}", pvms.len(), rel.arity())));
    }
    let d = pvms[0].dim();
    let n = pvms[0].outcomes();
    if pvms.iter().any(|p| p.dim() != d) {
        return Err(Error::ShapeMismatch("PVMs of different dimensions".into()));
    }
    if pvms.iter().any(|p| p.outcomes() != n) {
        return Err(Error::DomainMismatch("PVMs over different outcome sets".into()));
    }
    if rel.iter().flatten().any(|&v| v >= n) {
        return Err(Error::DomainMismatch(format!("relation mentions vertices outside 0..{n}")));
    }
    Ok((d, n))
}

/// Decides whether a tuple of PVMs over `Y` lies in the quantised relation.
/// Returns the witness (the products over the relation's tuples) or `None`.
pub fn quantum_relation_membership(pvms: &[Pvm], rel: &Relation, tol: f64) -> Result<Option<JointPvm>> {
    if pvms.is_empty() {
        return Err(Error::ShapeMismatch("empty PVM tuple".into()));
    }
    let (d, n) = check_pvm_tuple(pvms, rel)?;
    for (i, p) in pvms.iter().enumerate() {
        for q in &pvms[i + 1..] {
            if !pvms_commute(p, q, tol)? {
                return Ok(None);
            }
        }
    }
    // Depth-first over prefixes; a vanishing prefix product kills the subtree.
    let r = pvms.len();
    let mut witness: Vec<ComplexMatrix> = vec![ComplexMatrix::zeros(d, d); rel.len()];
    let mut stack: Vec<(Vec<Vertex>, ComplexMatrix)> = vec![(Vec::new(), ComplexMatrix::identity(d))];
    while let Some((prefix, product)) = stack.pop() {
        if prefix.len() == r {
            match rel.position(&prefix) {
                Some(idx) => witness[idx] = product,
                None => return Ok(None),
            }
            continue;
        }
        let i = prefix.len();
        for y in (0..n).rev() {
            let next = &product * pvms[i].projector(y);
            if next.frobenius_norm() <= tol {
                continue;
            }
            let mut p = prefix.clone();
            p.push(y);
            stack.push((p, next));
        }
    }
    Ok(Some(JointPvm { support: rel.tuples().to_vec(), projectors: witness }))
}

/// `max_{i, y} ‖E⁽ⁱ⁾_y − Σ_{ȳ : y_i = y} F_ȳ‖`.
pub fn marginal_residual(pvms: &[Pvm], joint: &JointPvm) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, p) in pvms.iter().enumerate() {
        let d = p.dim();
        for y in 0..p.outcomes() {
            let mut sum = ComplexMatrix::zeros(d, d);
            for (t, f) in joint.support.iter().zip(&joint.projectors) {
                if t.get(i) == Some(&y) {
                    sum = &sum + f;
                }
            }
            worst = worst.max(p.projector(y).distance(&sum)?);
        }
    }
    Ok(worst)
}

/// Deterministic PVMs reproducing a classical tuple: `E⁽ⁱ⁾` puts `I` on
/// outcome `ȳ_i`. The witness puts `I` on `ȳ`.
pub fn pvm_tuple_from_classical(
    tuple: &[Vertex],
    rel: &Relation,
    outcomes: usize,
    d: usize,
) -> Result<(Vec<Pvm>, JointPvm)> {
    check_dimension(d)?;
    if !rel.contains(tuple) {
        return Err(Error::Precondition(format!("{tuple:?} is not in the relation")));
    }
    let pvms = tuple.iter().map(|&y| Pvm::deterministic(y, outcomes, d)).collect::<Result<Vec<_>>>()?;
    let projectors =
        rel.iter().map(|t| if t == tuple { ComplexMatrix::identity(d) } else { ComplexMatrix::zeros(d, d) }).collect();
    Ok((pvms, JointPvm { support: rel.tuples().to_vec(), projectors }))
}

/// The same construction without the membership precondition; used to build
/// tuples that must be rejected.
pub fn deterministic_pvm_tuple(tuple: &[Vertex], outcomes: usize, d: usize) -> Result<Vec<Pvm>> {
    check_dimension(d)?;
    tuple.iter().map(|&y| Pvm::deterministic(y, outcomes, d)).collect()
}

/// Partition of positions by equality of the PVMs (within `tol`).
pub fn pvm_tuple_partition(pvms: &[Pvm], tol: f64) -> Result<Partition> {
    let mut labels: Vec<usize> = Vec::with_capacity(pvms.len());
    for (i, p) in pvms.iter().enumerate() {
        let same = (0..i).find(|&j| pvms[j].approx_eq(p, tol));
        labels.push(same.map_or(i, |j| labels[j]));
    }
    tuple_partition(&labels)
}

/// `sqrt((1 + sqrt(1 − 1/d²)) / 2)`.
pub fn alpha_threshold(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let d = d as f64;
    Ok(((1.0 + (1.0 - 1.0 / (d * d)).sqrt()) / 2.0).sqrt())
}

/// Precomputed data for certifying equality of two commuting PVMs from a
/// basis and a labelling `τ: [d] → S`.
///
/// Only the norms `‖E_s v_j‖`, `‖F_s v_j‖` enter the certificate, so they are
/// computed once and each labelling is checked in `O(d)`.
#[derive(Clone, Debug)]
pub struct CloseEqualityCheck {
    alpha: f64,
    norms_p: Vec<Vec<f64>>,
    norms_q: Vec<Vec<f64>>,
    equal: bool,
    overlap_trace: f64,
}

impl CloseEqualityCheck {
    pub fn new(p: &Pvm, q: &Pvm, basis: &[Vec<C64>], tol: f64) -> Result<Self> {
        let d = p.dim();
        if q.dim() != d || q.outcomes() != p.outcomes() {
            return Err(Error::Precondition("the PVMs must share dimension and outcomes".into()));
        }
        if !pvms_commute(p, q, tol)? {
            return Err(Error::Precondition("the PVMs do not commute".into()));
        }
        if basis.len() != d || basis.iter().any(|v| v.len() != d) {
            return Err(Error::Precondition(format!("need {d} basis vectors of length {d}")));
        }
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let expected = if i == j { ONE } else { ZERO };
                if (inner(u, v) - expected).norm() > tol {
                    return Err(Error::Precondition("basis is not orthonormal".into()));
                }
            }
        }
        let norms = |m: &Pvm| -> Vec<Vec<f64>> {
            m.projectors().iter().map(|e| basis.iter().map(|v| norm(&e.apply(v))).collect()).collect()
        };
        let mut overlap = ComplexMatrix::zeros(d, d);
        for (e, f) in p.projectors().iter().zip(q.projectors()) {
            overlap = &overlap + &(e * f);
        }
        Ok(CloseEqualityCheck {
            alpha: alpha_threshold(d)?,
            norms_p: norms(p),
            norms_q: norms(q),
            equal: p.approx_eq(q, tol),
            overlap_trace: overlap.trace().re,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Whether the two PVMs agree entrywise within the tolerance.
    pub fn pvms_equal(&self) -> bool {
        self.equal
    }

    /// `tr(Σ_s E_s F_s)`; equals `d` exactly when the PVMs coincide.
    pub fn overlap_trace(&self) -> f64 {
        self.overlap_trace
    }

    /// The certificate for the labelling `tau[j] = s` (block `τ_s` holds the
    /// basis indices labelled `s`).
    pub fn certify(&self, tau: &[usize]) -> Result<bool> {
        let d = self.norms_p.first().map_or(0, Vec::len);
        let outcomes = self.norms_p.len();
        if tau.len() != d || tau.iter().any(|&s| s >= outcomes) {
            return Err(Error::Precondition(format!("τ must label each of {d} basis vectors with an outcome")));
        }
        Ok(tau.iter().enumerate().all(|(j, &s)| self.norms_p[s][j] > self.alpha && self.norms_q[s][j] > self.alpha))
    }

    /// Tries every labelling `τ` and returns the first that certifies.
    pub fn search(&self) -> Option<Vec<usize>> {
        let d = self.norms_p.first().map_or(0, Vec::len);
        let outcomes = self.norms_p.len();
        let mut tau = vec![0; d];
        loop {
            if self.certify(&tau).expect("labelling in range") {
                return Some(tau);
            }
            let mut p = d;
            loop {
                if p == 0 {
                    return None;
                }
                p -= 1;
                tau[p] += 1;
                if tau[p] < outcomes {
                    break;
                }
                tau[p] = 0;
            }
        }
    }
}

/// One-shot form of [`CloseEqualityCheck::certify`].
pub fn close_pvm_equality(p: &Pvm, q: &Pvm, basis: &[Vec<C64>], tau: &[usize], tol: f64) -> Result<bool> {
    CloseEqualityCheck::new(p, q, basis, tol)?.certify(tau)
}

/// Shared state plus Alice's PVM per relation tuple (outcomes are `Y^r` in
/// lexicographic order) and Bob's PVM per vertex (outcomes `Y`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumStrategy {
    pub d: usize,
    /// Entry `i * d + j` is the coefficient of `e_i ⊗ e_j`.
    pub psi: Vec<C64>,
    /// `alice[R][t]` for the `t`-th tuple of `R^X`.
    pub alice: Vec<Vec<Pvm>>,
    pub bob: Vec<Pvm>,
}

/// `(1/√d) Σ_i e_i ⊗ e_i`.
pub fn maximally_entangled(d: usize) -> Vec<C64> {
    let mut psi = vec![ZERO; d * d];
    let c = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        psi[i * d + i] = c;
    }
    psi
}

/// The classical strategy of `h` run on a maximally entangled state:
/// Alice's PVM for `x̄` is deterministic on `h(x̄)`, Bob's for `x` on `h(x)`.
pub fn quantum_strategy_from_hom(x: &Structure, y: &Structure, h: &[Vertex], d: usize) -> Result<QuantumStrategy> {
    check_dimension(d)?;
    if !is_homomorphism(h, x, y)? {
        return Err(Error::NotAHomomorphism("the map does not preserve every relation".into()));
    }
    let n = y.size();
    let alice = x
        .relations()
        .iter()
        .map(|rel| {
            let outcomes = n.pow(rel.arity() as u32);
            rel.iter()
                .map(|t| {
                    let image: Vec<Vertex> = t.iter().map(|&v| h[v]).collect();
                    Pvm::deterministic(alice_encode(&image, n), outcomes, d)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let bob = h.iter().map(|&v| Pvm::deterministic(v, n, d)).collect::<Result<Vec<_>>>()?;
    Ok(QuantumStrategy { d, psi: maximally_entangled(d), alice, bob })
}

impl QuantumStrategy {
    fn check(&self, x: &Structure, y: &Structure, tol: f64) -> Result<()> {
        x.ensure_same_signature(y)?;
        check_dimension(self.d)?;
        let d = self.d;
        let n = y.size();
        if self.psi.len() != d * d {
            return Err(Error::ShapeMismatch(format!("state has {} entries, expected {}", self.psi.len(), d * d)));
        }
        if (norm(&self.psi) - 1.0).abs() > tol {
            return Err(Error::Precondition("the shared state is not a unit vector".into()));
        }
        if self.bob.len() != x.size() {
            return Err(Error::DomainMismatch("one Bob PVM per vertex of X is required".into()));
        }
        if self.alice.len() != x.signature().len()
            || self.alice.iter().zip(x.relations()).any(|(a, r)| a.len() != r.len())
        {
            return Err(Error::DomainMismatch("one Alice PVM per tuple of X is required".into()));
        }
        let check_pvm = |p: &Pvm, outcomes: usize, what: String| -> Result<()> {
            if p.dim() != d || p.outcomes() != outcomes {
                return Err(Error::DomainMismatch(format!("{what}: expected dimension {d} and {outcomes} outcomes")));
            }
            let report = validate_pvm(p);
            if !report.is_valid(tol) {
                return Err(Error::Precondition(format!(
                    "{what} is not a PVM (residual {:.3e})",
                    report.max_residual()
                )));
            }
            Ok(())
        };
        for (v, p) in self.bob.iter().enumerate() {
            check_pvm(p, n, format!("Bob's PVM at vertex {v}"))?;
        }
        for (symbol, (table, rel)) in self.alice.iter().zip(x.relations()).enumerate() {
            let outcomes = n.pow(rel.arity() as u32);
            for (p, t) in table.iter().zip(rel.iter()) {
                check_pvm(p, outcomes, format!("Alice's PVM at {} {t:?}", x.signature().name(symbol)))?;
            }
        }
        Ok(())
    }
}

/// Plays every referee question and checks that each losing answer pair has
/// probability at most `tol`. Questions are visited in the same order as the
/// classical referee, and the first losing one is reported. A question fails
/// on plausibility if Alice has weight on a tuple outside the relation,
/// otherwise on consistency.
#[allow(clippy::needless_range_loop)]
pub fn verify_perfect_quantum(x: &Structure, y: &Structure, s: &QuantumStrategy, tol: f64) -> Result<Verdict> {
    s.check(x, y, tol)?;
    let d = s.d;
    let n = y.size();
    // psi reshaped to a d x d matrix; P(A ⊗ B) = tr(A Ψ Bᵀ Ψ*).
    let psi = ComplexMatrix::from_rows(s.psi.chunks(d).map(<[C64]>::to_vec).collect())?;
    let psi_adj = psi.adjoint();
    let reduced = &psi * &psi_adj;
    let bob_ops: Vec<Vec<ComplexMatrix>> =
        s.bob.iter().map(|p| p.projectors().iter().map(|b| &(&psi * &b.transpose()) * &psi_adj).collect()).collect();
    // tr(A M) without forming the product.
    let pairing = |a: &ComplexMatrix, m: &ComplexMatrix| -> f64 {
        let mut acc = ZERO;
        for i in 0..d {
            for j in 0..d {
                acc += a[(i, j)] * m[(j, i)];
            }
        }
        acc.re
    };
    for (symbol, rel) in x.relations().iter().enumerate() {
        let target = y.relation(symbol);
        let r = rel.arity();
        for (t, tuple) in rel.iter().enumerate() {
            let pvm = &s.alice[symbol][t];
            let live: Vec<(Vec<Vertex>, &ComplexMatrix)> = pvm
                .projectors()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.frobenius_norm() > tol)
                .map(|(code, a)| (crate::powers::alice_decode(code, n, r), a))
                .collect();
            let implausible = live.iter().any(|(w, a)| !target.contains(w) && pairing(a, &reduced) > tol);
            for v in 0..x.size() {
                let reason = if implausible {
                    Some(Reason::Plausibility)
                } else {
                    let positions: Vec<usize> = (0..r).filter(|&i| tuple[i] == v).collect();
                    let inconsistent = !positions.is_empty()
                        && live.iter().any(|(w, a)| {
                            (0..n).any(|b| positions.iter().any(|&i| w[i] != b) && pairing(a, &bob_ops[v][b]) > tol)
                        });
                    inconsistent.then_some(Reason::Consistency)
                };
                if let Some(reason) = reason {
                    return Ok(Verdict::fails(Counterexample {
                        symbol: x.signature().name(symbol).to_string(),
                        tuple: tuple.to_vec(),
                        vertex: v,
                        reason,
                    }));
                }
            }
        }
    }
    Ok(Verdict::perfect())
}
