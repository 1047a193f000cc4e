//! Isoclinism of class-2 special p-groups at the form level.
//!
//! Two forms are isoclinic when invertible maps (phi on V, theta on W) make
//! theta(B1(x, y)) = B2(phi x, phi y) hold everywhere. Fast invariant
//! fingerprints separate most pairs; an exhaustive backtracking search over
//! GL(V) certifies equivalence at desk scale. Theta is never searched: once
//! phi is fixed, the values of B1 span W and determine theta by linear
//! algebra, so the search space is GL(V) alone.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::budget::Budgets;
use crate::canon::{
    canonical_line, canonical_plane, canonical_plane_gf2, canonicalize_line, canonicalize_plane,
    canonicalize_plane_gf2, CanonResult,
};
use crate::form::{AlternatingMap, FormError};
use crate::linalg::{all_vectors, projective_points, Matrix, Vector};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IsoclinismError {
    #[error("certificate fails the diagram at basis pair ({i}, {j})")]
    BadCertificate { i: usize, j: usize },
    #[error("certificate maps are not invertible")]
    SingularCertificate,
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Base-change invariants cheap enough to compute on every instance. Equal
/// fingerprints are necessary for isoclinism, never sufficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub p: u64,
    pub dim_v: usize,
    pub dim_w: usize,
    /// Breadth census over nonzero vectors of V.
    pub breadth_profile: BTreeMap<usize, u64>,
    /// Number of unordered pairs of distinct projective points that commute.
    pub commuting_pairs: u64,
    /// For every projective functional on W, the rank of the induced
    /// alternating form on V; stored as a rank census.
    pub functional_rank_census: BTreeMap<usize, u64>,
}

pub fn fingerprint(form: &AlternatingMap, budgets: &Budgets) -> Result<Fingerprint, FormError> {
    let f = form.field();
    let p = f.p();
    let profile = form.breadth_profile(budgets)?;

    let points: Vec<Vector> = projective_points(f, form.dim_v()).collect();
    let pair_work = (points.len() as u128) * (points.len() as u128) / 2;
    if pair_work > budgets.form_scan as u128 {
        return Err(FormError::BudgetExceeded {
            needed: pair_work,
            budget: budgets.form_scan,
        });
    }
    let mut commuting_pairs = 0u64;
    for (i, x) in points.iter().enumerate() {
        let adj = form.adjoint(x);
        for y in points.iter().skip(i + 1) {
            if adj.mul_vec(y).is_zero() {
                commuting_pairs += 1;
            }
        }
    }

    let mut census = BTreeMap::new();
    if form.dim_w() > 0 {
        for lambda in projective_points(f, form.dim_w()) {
            let a = Matrix::from_fn(f, form.dim_v(), form.dim_v(), |i, j| {
                let v = form.value(i, j);
                let mut acc = 0;
                for k in 0..form.dim_w() {
                    acc = f.add(acc, f.mul(lambda.get(k), v.get(k)));
                }
                acc
            });
            *census.entry(a.rank()).or_insert(0u64) += 1;
        }
    }

    Ok(Fingerprint {
        p,
        dim_v: form.dim_v(),
        dim_w: form.dim_w(),
        breadth_profile: profile.counts().clone(),
        commuting_pairs,
        functional_rank_census: census,
    })
}

/// An explicit isoclinism from a source form to a target form. Construction
/// checks the commuting diagram on every basis pair, so a value of this type
/// is proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoclinismCertificate {
    pub phi: Matrix,
    pub theta: Matrix,
}

impl IsoclinismCertificate {
    pub fn new(
        source: &AlternatingMap,
        target: &AlternatingMap,
        phi: Matrix,
        theta: Matrix,
    ) -> Result<Self, IsoclinismError> {
        if !phi.is_invertible() || !theta.is_invertible() {
            return Err(IsoclinismError::SingularCertificate);
        }
        let cols: Vec<Vector> = (0..source.dim_v()).map(|j| phi.col(j)).collect();
        for i in 0..source.dim_v() {
            for j in i + 1..source.dim_v() {
                let lhs = theta.mul_vec(&source.value(i, j));
                let rhs = target.evaluate(&cols[i], &cols[j]);
                if lhs != rhs {
                    return Err(IsoclinismError::BadCertificate { i, j });
                }
            }
        }
        Ok(IsoclinismCertificate { phi, theta })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoclinismOutcome {
    Isoclinic(IsoclinismCertificate),
    NotIsoclinic { reason: String },
    Inconclusive { reason: String },
}

impl IsoclinismOutcome {
    pub fn is_isoclinic(&self) -> bool {
        matches!(self, IsoclinismOutcome::Isoclinic(_))
    }
}

/// |GL(n, p)| as a u128.
pub fn gl_order(n: usize, p: u64) -> u128 {
    let pn = (p as u128).pow(n as u32);
    let mut acc: u128 = 1;
    let mut pi: u128 = 1;
    for _ in 0..n {
        acc = acc.saturating_mul(pn - pi);
        pi *= p as u128;
    }
    acc
}

/// Incremental linear-constraint solver for theta: rows (lhs | rhs) kept in
/// echelon form by lhs leading index. New rows never rewrite old ones, so a
/// rollback is a truncation.
struct ThetaSolver {
    field: crate::field::PrimeField,
    rows: Vec<(Vector, Vector)>,
}

impl ThetaSolver {
    fn new(field: crate::field::PrimeField) -> Self {
        ThetaSolver {
            field,
            rows: Vec::new(),
        }
    }

    fn reduce(&self, mut lhs: Vector, mut rhs: Vector) -> (Vector, Vector) {
        let f = self.field;
        for (l, r) in &self.rows {
            let lead = l.entries().iter().position(|&e| e != 0).expect("echelon row");
            let c = lhs.get(lead);
            if c != 0 {
                lhs = lhs.add_scaled(l, f.neg(c));
                rhs = rhs.add_scaled(r, f.neg(c));
            }
        }
        (lhs, rhs)
    }

    /// Adds theta(lhs) = rhs; reports false on contradiction.
    fn push(&mut self, lhs: Vector, rhs: Vector) -> bool {
        let f = self.field;
        let (lhs, rhs) = self.reduce(lhs, rhs);
        match lhs.entries().iter().position(|&e| e != 0) {
            None => rhs.is_zero(),
            Some(lead) => {
                let inv = f.inv(lhs.get(lead)).expect("nonzero lead");
                self.rows.push((lhs.scale(inv), rhs.scale(inv)));
                true
            }
        }
    }

    fn checkpoint(&self) -> usize {
        self.rows.len()
    }

    fn rollback(&mut self, cp: usize) {
        self.rows.truncate(cp);
    }

    /// Solves for theta once the lhs rows span W.
    fn solve(&self, dim_w: usize) -> Option<Matrix> {
        if self.rows.len() != dim_w {
            return None;
        }
        let f = self.field;
        let lhs_t = Matrix::from_fn(f, dim_w, dim_w, |r, c| self.rows[c].0.get(r));
        let rhs_t = Matrix::from_fn(f, dim_w, dim_w, |r, c| self.rows[c].1.get(r));
        let inv = lhs_t.inverse()?;
        Some(rhs_t.mul(&inv))
    }
}

/// Searches GL(V) for an isoclinism from `b1` to `b2`, columns chosen in
/// counting order with two prunes: candidate columns must stay independent,
/// and the partial theta constraints must stay consistent. Returns the first
/// certificate found, a definitive negative after a fingerprint split
/// or an exhausted search, or an honest Inconclusive when the search space
/// exceeds the budget.
pub fn find_isoclinism(
    b1: &AlternatingMap,
    b2: &AlternatingMap,
    budgets: &Budgets,
) -> IsoclinismOutcome {
    if b1.field() != b2.field() || b1.dim_v() != b2.dim_v() || b1.dim_w() != b2.dim_w() {
        return IsoclinismOutcome::NotIsoclinic {
            reason: "dimension or field mismatch".to_string(),
        };
    }
    match (fingerprint(b1, budgets), fingerprint(b2, budgets)) {
        (Ok(f1), Ok(f2)) if f1 != f2 => {
            return IsoclinismOutcome::NotIsoclinic {
                reason: "fingerprints differ".to_string(),
            };
        }
        _ => {}
    }
    let n = b1.dim_v();
    let p = b1.field().p();
    let space = gl_order(n, p);
    if space > budgets.gl_search as u128 {
        return IsoclinismOutcome::Inconclusive {
            reason: format!(
                "fingerprints match but |GL({n}, {p})| = {space} exceeds the search budget"
            ),
        };
    }

    let f = b1.field();
    let candidates: Vec<Vector> = all_vectors(f, n).filter(|v| !v.is_zero()).collect();
    let mut chosen: Vec<Vector> = Vec::with_capacity(n);
    let mut solver = ThetaSolver::new(f);
    let mut span = ThetaSolver::new(f); // reused as an independence tracker

    fn recurse(
        b1: &AlternatingMap,
        b2: &AlternatingMap,
        candidates: &[Vector],
        chosen: &mut Vec<Vector>,
        solver: &mut ThetaSolver,
        span: &mut ThetaSolver,
        k: usize,
    ) -> Option<(Matrix, Matrix)> {
        let n = b1.dim_v();
        let f = b1.field();
        if k == n {
            let theta = solver.solve(b1.dim_w())?;
            if !theta.is_invertible() {
                return None;
            }
            let phi = Matrix::from_fn(f, n, n, |r, c| chosen[c].get(r));
            return Some((phi, theta));
        }
        for cand in candidates {
            let span_cp = span.checkpoint();
            // independence prune: the candidate must extend the span
            let zero = Vector::zero(f, 1);
            let (reduced, _) = span.reduce(cand.clone(), zero.clone());
            if reduced.is_zero() {
                continue;
            }
            span.push(cand.clone(), zero.clone());
            let cp = solver.checkpoint();
            let mut ok = true;
            for (i, prev) in chosen.iter().enumerate() {
                let lhs = b1.value(i, k);
                let rhs = b2.evaluate(prev, cand);
                if !solver.push(lhs, rhs) {
                    ok = false;
                    break;
                }
            }
            if ok {
                chosen.push(cand.clone());
                if let Some(hit) = recurse(b1, b2, candidates, chosen, solver, span, k + 1) {
                    return Some(hit);
                }
                chosen.pop();
            }
            solver.rollback(cp);
            span.rollback(span_cp);
        }
        None
    }

    match recurse(b1, b2, &candidates, &mut chosen, &mut solver, &mut span, 0) {
        Some((phi, theta)) => {
            let cert = IsoclinismCertificate::new(b1, b2, phi, theta)
                .expect("search output satisfies the diagram");
            IsoclinismOutcome::Isoclinic(cert)
        }
        None => IsoclinismOutcome::NotIsoclinic {
            reason: "exhausted GL(V) without a certificate".to_string(),
        },
    }
}

/// The classes of the desk-scale classification of conjugate type {1, p^3}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassLabel {
    /// Camina group with derived subgroup of order p^3; generator count is
    /// unbounded across the class, so no single representative is stored.
    CaminaCubed,
    /// The universal four-generator special group of order p^10.
    FullFourGenerator,
    /// Its quotient by the canonical central line, order p^9.
    LineQuotient,
    /// Its quotient by the canonical central plane, order p^8.
    PlaneQuotient,
}

impl ClassLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassLabel::CaminaCubed => "camina-derived-p3",
            ClassLabel::FullFourGenerator => "full-4gen",
            ClassLabel::LineQuotient => "line-quotient",
            ClassLabel::PlaneQuotient => "plane-quotient",
        }
    }
}

/// The stored representative of a label, when the label is one isoclinism
/// class (all but the Camina case).
pub fn representative(label: ClassLabel, p: u64) -> Option<AlternatingMap> {
    let field = crate::field::PrimeField::new(p).ok()?;
    let full = AlternatingMap::full(4, field);
    match label {
        ClassLabel::CaminaCubed => None,
        ClassLabel::FullFourGenerator => Some(full),
        ClassLabel::LineQuotient => {
            Some(full.quotient(&canonical_line(field, 4, 2)).expect("fits"))
        }
        ClassLabel::PlaneQuotient => {
            let plane = if p == 2 {
                canonical_plane_gf2()
            } else {
                canonical_plane(field)
            };
            Some(full.quotient(&plane).expect("fits"))
        }
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub label: ClassLabel,
    /// Certificate from the classified form to the stored representative;
    /// absent exactly for the Camina class.
    pub certificate: Option<IsoclinismCertificate>,
    /// Set when an in-budget exhaustive search double-checked the label.
    pub search_confirmed: bool,
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("classification needs conjugate type {{1, p^3}}, got {got}")]
    WrongConjugateType { got: String },
    #[error("counterexample: {detail}")]
    Counterexample { detail: String },
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Certificate(#[from] IsoclinismError),
}

/// Labels a form of conjugate type {1, p^3} against the four classes and
/// builds an explicit certificate to the stored representative: camina
/// groups by the derived-subgroup test, everything else by recovering the
/// kernel of the linearization and canonicalizing it. A `confirm` run adds
/// an independent exhaustive search against the representative when the
/// budget allows. A non-camina instance that resists labeling is reported
/// as a counterexample; none exists at desk scale.
pub fn classify(
    form: &AlternatingMap,
    budgets: &Budgets,
    confirm: bool,
) -> Result<Classification, ClassifyError> {
    let p = form.field().p();
    let expected: BTreeSet<u64> = [1, p.pow(3)].into_iter().collect();
    let got = form.conjugate_type();
    if got != expected {
        return Err(ClassifyError::WrongConjugateType {
            got: crate::form::format_conjugate_type(&got),
        });
    }

    if form.dim_w() == 3 {
        // breadth three everywhere with a three-dimensional W is exactly
        // the Camina property
        debug_assert!(form.is_camina());
        return Ok(Classification {
            label: ClassLabel::CaminaCubed,
            certificate: None,
            search_confirmed: false,
        });
    }

    if form.dim_v() != 4 {
        return Err(ClassifyError::Counterexample {
            detail: format!(
                "type {{1, p^3}} with dimW = {} > 3 forces four generators, got {}",
                form.dim_w(),
                form.dim_v()
            ),
        });
    }

    let f = form.field();
    let full = AlternatingMap::full(4, f);
    let bhat = form.linearization();
    let kernel = bhat.kernel();
    debug_assert_eq!(kernel.dim(), 6 - form.dim_w());

    let (label, cert) = match kernel.dim() {
        0 => {
            // the linearization is an isomorphism from the exterior square
            let theta = bhat.inverse().expect("rank six");
            let cert = IsoclinismCertificate::new(form, &full, Matrix::identity(f, 4), theta)?;
            (ClassLabel::FullFourGenerator, cert)
        }
        dim @ (1 | 2) => {
            let reduced = if dim == 1 {
                canonicalize_line(&full, &kernel)
            } else if p == 2 {
                canonicalize_plane_gf2(&full, &kernel)
            } else {
                canonicalize_plane(&full, &kernel)
            }
            .expect("full form with a central subspace of fitting dimension");
            let success = match reduced {
                CanonResult::Canonical(s) => s,
                CanonResult::Rejected(w) => {
                    return Err(ClassifyError::Counterexample {
                        detail: format!(
                            "type {{1, p^3}} but the linearization kernel rejects with witness x = {}, y = {}",
                            w.x, w.y
                        ),
                    });
                }
            };
            let label = if dim == 1 {
                ClassLabel::LineQuotient
            } else {
                ClassLabel::PlaneQuotient
            };
            let rep = representative(label, p).expect("non-camina label");

            // iota: quotient-of-full coordinates -> this form's W, columns
            // are the linearization applied to the surviving basis vectors
            let survivors: Vec<usize> =
                (0..6).filter(|c| !kernel.pivots().contains(c)).collect();
            let iota = Matrix::from_fn(f, form.dim_w(), form.dim_w(), |r, c| {
                bhat.col(survivors[c]).get(r)
            });
            let iota_inv = iota.inverse().expect("survivors complement the kernel");

            // theta-bar: induced map between the two quotient coordinate
            // systems, columns are projections of theta on survivors
            let proj_canon = full.quotient_projection(&success.subspace)?;
            let theta_bar = Matrix::from_fn(f, form.dim_w(), form.dim_w(), |r, c| {
                proj_canon
                    .mul_vec(&success.theta.col(survivors[c]))
                    .get(r)
            });

            let cert = IsoclinismCertificate::new(
                form,
                &rep,
                success.transform.clone(),
                theta_bar.mul(&iota_inv),
            )?;
            (label, cert)
        }
        other => {
            return Err(ClassifyError::Counterexample {
                detail: format!("linearization kernel has impossible dimension {other}"),
            });
        }
    };

    let mut search_confirmed = false;
    if confirm {
        if let Some(rep) = representative(label, p) {
            if gl_order(4, p) <= budgets.gl_search as u128 {
                match find_isoclinism(form, &rep, budgets) {
                    IsoclinismOutcome::Isoclinic(_) => search_confirmed = true,
                    IsoclinismOutcome::Inconclusive { .. } => {}
                    IsoclinismOutcome::NotIsoclinic { reason } => {
                        return Err(ClassifyError::Counterexample {
                            detail: format!(
                                "direct certificate exists but the exhaustive search disagrees: {reason}"
                            ),
                        });
                    }
                }
            }
        }
    }

    Ok(Classification {
        label,
        certificate: Some(cert),
        search_confirmed,
    })
}
