//! End-to-end verification sweeps with machine-readable reports.
//!
//! Every sweep derives its counts from two independent routes (the reducer
//! and a brute-force scan of the quotient) and asserts they agree. Reports
//! are deterministic given inputs and budgets: the canonical section has a
//! fixed key order and no timestamps, so two runs produce byte-identical
//! JSON; wall-clock timings live in a separate non-canonical block.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::budget::Budgets;
use crate::canon::{
    canonical_line, canonical_plane, canonical_plane_gf2, canonicalize_line, canonicalize_plane,
    canonicalize_plane_gf2, CanonResult,
};
use crate::field::PrimeField;
use crate::form::{wedge_square, AlternatingMap};
use crate::group::{CocycleKind, GroupModel};
use crate::isoclinism::{classify, find_isoclinism, fingerprint, ClassLabel};
use crate::linalg::{all_vectors, enumerate_subspaces, gaussian_binomial, Matrix, Subspace, Vector};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unsupported parameters for {target}: {reason}")]
    Unsupported { target: String, reason: String },
    #[error(transparent)]
    Form(#[from] crate::form::FormError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetsRecord {
    pub form_scan: u64,
    pub element_scan: u64,
    pub gl_search: u64,
}

impl From<&Budgets> for BudgetsRecord {
    fn from(b: &Budgets) -> Self {
        BudgetsRecord {
            form_scan: b.form_scan,
            element_scan: b.element_scan,
            gl_search: b.gl_search,
        }
    }
}

/// One verified claim: what was checked, whether it held, and the counts
/// the check produced. Failed claims carry a serialized witness.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimRecord {
    pub id: String,
    pub anchor: String,
    pub statement: String,
    pub pass: bool,
    pub counts: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// The deterministic body of a report.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalReport {
    pub schema: &'static str,
    pub target: String,
    pub params: BTreeMap<String, u64>,
    pub budgets: BudgetsRecord,
    pub scope: String,
    pub claims: Vec<ClaimRecord>,
    pub verdict: String,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub canonical: CanonicalReport,
    pub timing_ms: BTreeMap<String, u128>,
}

#[derive(Serialize)]
struct FullReport<'a> {
    report: &'a CanonicalReport,
    timing_ms: &'a BTreeMap<String, u128>,
}

impl VerificationReport {
    /// The canonical section only; byte-identical across runs.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.canonical).expect("report serializes")
    }

    /// Canonical section plus the non-canonical timing block.
    pub fn full_json(&self) -> String {
        serde_json::to_string_pretty(&FullReport {
            report: &self.canonical,
            timing_ms: &self.timing_ms,
        })
        .expect("report serializes")
    }

    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "target {} (scope: {})",
            self.canonical.target, self.canonical.scope
        )
        .unwrap();
        for c in &self.canonical.claims {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            let counts: Vec<String> = c
                .counts
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            writeln!(out, "  [{mark}] {} : {} ({})", c.anchor, c.statement, counts.join(", "))
                .unwrap();
            if let Some(w) = &c.witness {
                writeln!(out, "         witness: {w}").unwrap();
            }
        }
        writeln!(out, "verdict: {}", self.canonical.verdict).unwrap();
        out
    }

    pub fn verdict_exit_code(&self) -> i32 {
        match self.canonical.verdict.as_str() {
            "verified" => 0,
            "incomplete" => 2,
            _ => 1,
        }
    }
}

struct ReportBuilder {
    target: String,
    params: BTreeMap<String, u64>,
    budgets: BudgetsRecord,
    scope: String,
    claims: Vec<ClaimRecord>,
    timing_ms: BTreeMap<String, u128>,
    incomplete: bool,
    started: Instant,
}

impl ReportBuilder {
    fn new(target: &str, params: BTreeMap<String, u64>, budgets: &Budgets, scope: &str) -> Self {
        ReportBuilder {
            target: target.to_string(),
            params,
            budgets: budgets.into(),
            scope: scope.to_string(),
            claims: Vec::new(),
            timing_ms: BTreeMap::new(),
            incomplete: false,
            started: Instant::now(),
        }
    }

    fn claim(&mut self, record: ClaimRecord, elapsed: u128) {
        self.timing_ms.insert(record.id.clone(), elapsed);
        self.claims.push(record);
    }

    fn run_claim<F>(&mut self, id: &str, anchor: &str, statement: &str, body: F)
    where
        F: FnOnce() -> (bool, BTreeMap<String, u64>, Option<String>),
    {
        let t0 = Instant::now();
        let (pass, counts, witness) = body();
        self.claim(
            ClaimRecord {
                id: id.to_string(),
                anchor: anchor.to_string(),
                statement: statement.to_string(),
                pass,
                counts,
                witness,
            },
            t0.elapsed().as_millis(),
        );
    }

    fn finish(mut self) -> VerificationReport {
        let verdict = if self.incomplete {
            "incomplete"
        } else if self.claims.iter().all(|c| c.pass) {
            "verified"
        } else {
            "failed"
        };
        self.timing_ms
            .insert("total".to_string(), self.started.elapsed().as_millis());
        VerificationReport {
            canonical: CanonicalReport {
                schema: "conjtype-report-v1",
                target: self.target,
                params: self.params,
                budgets: self.budgets,
                scope: self.scope,
                claims: self.claims,
                verdict: verdict.to_string(),
            },
            timing_ms: self.timing_ms,
        }
    }
}

fn counts(entries: &[(&str, u64)]) -> BTreeMap<String, u64> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect()
}

/// Brute-force route: does the quotient by `k` keep the uniform conjugate
/// type {1, p^(dimV - 1)}? Decided by an exhaustive projective breadth scan
/// of the quotient form, with no reference to the reducers.
pub fn quotient_keeps_uniform_type(form: &AlternatingMap, k: &Subspace) -> bool {
    let q = form.quotient(k).expect("subspace sits in W");
    let expect = form.field().p().pow((form.dim_v() - 1) as u32);
    q.conjugate_type() == [1, expect].into_iter().collect::<BTreeSet<u64>>()
}

/// Exhaustive sweep of the central lines of the universal form on n
/// generators: the reducer's accept set must coincide with the brute-force
/// accept set, accepted transforms must land on the canonical line, and the
/// rejected count must equal the Grassmannian count of decomposable lines.
pub fn verify_lemma4(p: u64, n: usize, budgets: &Budgets) -> Result<VerificationReport, VerifyError> {
    let field = PrimeField::new(p)?;
    if n < 4 {
        return Err(VerifyError::Unsupported {
            target: "lemma4".to_string(),
            reason: format!("need n >= 4, got {n}"),
        });
    }
    let wdim = n * (n - 1) / 2;
    let lines = gaussian_binomial(wdim, 1, p)?;
    let points = (p.pow(n as u32) - 1) / (p - 1);
    let params: BTreeMap<String, u64> = [
        ("p".to_string(), p),
        ("n".to_string(), n as u64),
    ]
    .into();
    let mut rb = ReportBuilder::new("lemma4", params, budgets, "full");
    let cost = lines as u128 * points as u128;
    if cost > budgets.form_scan as u128 {
        rb.incomplete = true;
        rb.run_claim(
            "budget",
            &format!("lemma4/p={p}/n={n}"),
            "sweep skipped: estimated cost exceeds the form budget",
            || {
                (
                    false,
                    counts(&[("estimated_cost", cost.min(u64::MAX as u128) as u64)]),
                    None,
                )
            },
        );
        return Ok(rb.finish());
    }

    let form = AlternatingMap::full(n, field);
    let expected_canonical: Vec<Subspace> =
        (0..=n / 2).map(|m| canonical_line(field, n, m.max(1))).collect();

    let mut total = 0u64;
    let mut accepted = 0u64;
    let mut rejected = 0u64;
    let mut mismatches = 0u64;
    let mut transform_failures = 0u64;
    let mut witness_count = 0u64;
    let mut m_census: BTreeMap<usize, u64> = BTreeMap::new();
    let mut first_mismatch: Option<String> = None;

    let t0 = Instant::now();
    for line in enumerate_subspaces(field, wdim, 1)? {
        total += 1;
        let reduced = canonicalize_line(&form, &line).expect("valid input");
        let brute = quotient_keeps_uniform_type(&form, &line);
        if reduced.is_canonical() != brute {
            mismatches += 1;
            if first_mismatch.is_none() {
                first_mismatch = Some(format!("line {line}: reducer {} vs brute-force {brute}",
                    reduced.is_canonical()));
            }
        }
        match reduced {
            CanonResult::Canonical(s) => {
                accepted += 1;
                let m = s.m_value.expect("lines carry a block count");
                *m_census.entry(m).or_insert(0) += 1;
                // independent re-check of the certified transform
                if line.map(&s.theta) != expected_canonical[m]
                    || s.theta != wedge_square(&s.transform)
                {
                    transform_failures += 1;
                }
            }
            CanonResult::Rejected(w) => {
                rejected += 1;
                // constructor already checked; re-verify from scratch
                let value = form.evaluate(&w.x, &w.y);
                let ok = !value.is_zero()
                    && line.contains(&value)
                    && Matrix::from_rows(field, &[w.x.clone(), w.y.clone()]).rank() == 2;
                if ok {
                    witness_count += 1;
                }
            }
        }
    }
    let sweep_ms = t0.elapsed().as_millis();

    let anchor = format!("lemma4/p={p}/n={n}");
    rb.claim(
        ClaimRecord {
            id: "accept-sets-identical".to_string(),
            anchor: anchor.clone(),
            statement: "reducer accept set equals the brute-force accept set over every central line"
                .to_string(),
            pass: mismatches == 0,
            counts: counts(&[
                ("total", total),
                ("accepted", accepted),
                ("rejected", rejected),
                ("mismatches", mismatches),
            ]),
            witness: first_mismatch,
        },
        sweep_ms,
    );

    let decomposable = gaussian_binomial(n, 2, p)?;
    rb.run_claim(
        "rejected-lines-are-decomposable",
        &anchor,
        "rejected count equals the Grassmannian count of decomposable lines",
        || {
            (
                rejected == decomposable && accepted + rejected == lines,
                counts(&[
                    ("rejected", rejected),
                    ("decomposable_lines", decomposable),
                    ("total_lines", lines),
                ]),
                None,
            )
        },
    );

    let m_counts: Vec<(String, u64)> = m_census
        .iter()
        .map(|(m, c)| (format!("m_{m}"), *c))
        .collect();
    rb.run_claim(
        "accepted-transforms-verified",
        &anchor,
        "every accepted line is carried onto its canonical form by the returned base change",
        || {
            let mut c = counts(&[("accepted", accepted), ("transform_failures", transform_failures)]);
            for (k, v) in &m_counts {
                c.insert(k.clone(), *v);
            }
            (transform_failures == 0, c, None)
        },
    );

    rb.run_claim(
        "rejection-witnesses-valid",
        &anchor,
        "every rejected line carries an independent commuting pair inside it",
        || {
            (
                witness_count == rejected,
                counts(&[("rejected", rejected), ("valid_witnesses", witness_count)]),
                None,
            )
        },
    );

    Ok(rb.finish())
}

/// Scope of the plane sweep: the whole Grassmannian or only the residual
/// two-parameter family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneScope {
    Auto,
    Full,
    Family,
}

/// Exhaustive sweep of the central planes of the four-generator universal
/// form at odd p; at p = 5 the default scope narrows to the residual
/// (i1, i2) family, which the acceptance criterion pins exhaustively.
pub fn verify_lemma7(
    p: u64,
    budgets: &Budgets,
    scope: PlaneScope,
) -> Result<VerificationReport, VerifyError> {
    let field = PrimeField::new(p)?;
    if p == 2 {
        return Err(VerifyError::Unsupported {
            target: "lemma7".to_string(),
            reason: "p = 2 is covered by lemma10".to_string(),
        });
    }
    let planes = gaussian_binomial(6, 2, p)?;
    let points = (p.pow(4) - 1) / (p - 1);
    let full_cost = planes as u128 * points as u128;
    let effective = match scope {
        PlaneScope::Full => PlaneScope::Full,
        PlaneScope::Family => PlaneScope::Family,
        PlaneScope::Auto => {
            if full_cost <= budgets.form_scan as u128 {
                PlaneScope::Full
            } else {
                PlaneScope::Family
            }
        }
    };
    let scope_name = match effective {
        PlaneScope::Full => "full-grassmannian",
        _ => "residual-family",
    };
    let params: BTreeMap<String, u64> = [("p".to_string(), p)].into();
    let mut rb = ReportBuilder::new("lemma7", params, budgets, scope_name);
    let anchor = format!("lemma7/p={p}");
    let form = AlternatingMap::full(4, field);
    let canon = canonical_plane(field);

    if effective == PlaneScope::Full {
        if full_cost > budgets.form_scan as u128 {
            rb.incomplete = true;
            rb.run_claim(
                "budget",
                &anchor,
                "full sweep skipped: estimated cost exceeds the form budget",
                || {
                    (
                        false,
                        counts(&[("estimated_cost", full_cost.min(u64::MAX as u128) as u64)]),
                        None,
                    )
                },
            );
            return Ok(rb.finish());
        }
        let mut total = 0u64;
        let mut accepted = 0u64;
        let mut rejected = 0u64;
        let mut mismatches = 0u64;
        let mut canon_failures = 0u64;
        let mut witness_count = 0u64;
        let mut first_mismatch = None;
        let t0 = Instant::now();
        for plane in enumerate_subspaces(field, 6, 2)? {
            total += 1;
            let reduced = canonicalize_plane(&form, &plane).expect("valid input");
            let brute = quotient_keeps_uniform_type(&form, &plane);
            if reduced.is_canonical() != brute {
                mismatches += 1;
                if first_mismatch.is_none() {
                    first_mismatch = Some(format!("plane {plane}"));
                }
            }
            match reduced {
                CanonResult::Canonical(s) => {
                    accepted += 1;
                    if s.subspace != canon || plane.map(&s.theta) != canon {
                        canon_failures += 1;
                    }
                }
                CanonResult::Rejected(w) => {
                    rejected += 1;
                    let value = form.evaluate(&w.x, &w.y);
                    if !value.is_zero()
                        && plane.contains(&value)
                        && Matrix::from_rows(field, &[w.x.clone(), w.y.clone()]).rank() == 2
                    {
                        witness_count += 1;
                    }
                }
            }
        }
        rb.claim(
            ClaimRecord {
                id: "accept-sets-identical".to_string(),
                anchor: anchor.clone(),
                statement:
                    "reducer accept set equals the brute-force accept set over every central plane"
                        .to_string(),
                pass: mismatches == 0 && total == planes,
                counts: counts(&[
                    ("total", total),
                    ("accepted", accepted),
                    ("rejected", rejected),
                    ("mismatches", mismatches),
                ]),
                witness: first_mismatch,
            },
            t0.elapsed().as_millis(),
        );
        rb.run_claim(
            "accepted-planes-canonicalize",
            &anchor,
            "every accepted plane is carried onto the canonical plane by the returned base change",
            || {
                (
                    canon_failures == 0,
                    counts(&[("accepted", accepted), ("canon_failures", canon_failures)]),
                    None,
                )
            },
        );
        rb.run_claim(
            "rejection-witnesses-valid",
            &anchor,
            "every rejected plane carries an independent commuting pair inside it",
            || {
                (
                    witness_count == rejected,
                    counts(&[("rejected", rejected), ("valid_witnesses", witness_count)]),
                    None,
                )
            },
        );
    }

    // the residual family: planes spanned by e01 + e23 and
    // e02 + i1 e13 + i2 e23, acceptance exactly at non-square discriminant
    let t0 = Instant::now();
    let mut family_total = 0u64;
    let mut family_accepted = 0u64;
    let mut family_mismatch = 0u64;
    let mut family_bad_witness = 0u64;
    for i1 in 0..p {
        for i2 in 0..p {
            family_total += 1;
            let g1 = Vector::new(field, vec![1, 0, 0, 0, 0, 1]);
            let mut g2 = Vector::zero(field, 6);
            g2.set(1, 1);
            g2.set(4, i1);
            g2.set(5, i2);
            let plane = Subspace::from_rows(field, 6, &[g1, g2]);
            let disc = field.add(field.mul(i2, i2), field.mul(field.elem(4), i1));
            let expect_accept = !field.is_square(disc).expect("odd p");
            let reduced = canonicalize_plane(&form, &plane).expect("valid input");
            if reduced.is_canonical() != expect_accept
                || reduced.is_canonical() != quotient_keeps_uniform_type(&form, &plane)
            {
                family_mismatch += 1;
            }
            match reduced {
                CanonResult::Canonical(_) => family_accepted += 1,
                CanonResult::Rejected(w) => {
                    let value = form.evaluate(&w.x, &w.y);
                    if value.is_zero() || !plane.contains(&value) {
                        family_bad_witness += 1;
                    }
                }
            }
        }
    }
    rb.claim(
        ClaimRecord {
            id: "residual-family-square-criterion".to_string(),
            anchor: anchor.clone(),
            statement:
                "over the residual family, acceptance is exactly a non-square discriminant i2^2 + 4 i1, and rejections carry valid commuting witnesses"
                    .to_string(),
            pass: family_mismatch == 0 && family_bad_witness == 0,
            counts: counts(&[
                ("family_total", family_total),
                ("family_accepted", family_accepted),
                ("family_mismatches", family_mismatch),
                ("family_bad_witnesses", family_bad_witness),
            ]),
            witness: None,
        },
        t0.elapsed().as_millis(),
    );

    Ok(rb.finish())
}

/// Exhaustive sweep of the 651 central planes over GF(2): the accept set,
/// the brute-force set, and the orbit of the canonical plane under all
/// 20160 base changes must be one and the same set.
pub fn verify_lemma10(budgets: &Budgets) -> Result<VerificationReport, VerifyError> {
    let field = PrimeField::new(2)?;
    let params: BTreeMap<String, u64> = [("p".to_string(), 2)].into();
    let mut rb = ReportBuilder::new("lemma10", params, budgets, "full");
    let anchor = "lemma10/p=2";
    let form = AlternatingMap::full(4, field);
    let canon = canonical_plane_gf2();

    let t0 = Instant::now();
    let mut accept_set = BTreeSet::new();
    let mut brute_set = BTreeSet::new();
    let mut witness_ok = 0u64;
    let mut rejected = 0u64;
    let mut total = 0u64;
    for plane in enumerate_subspaces(field, 6, 2)? {
        total += 1;
        let reduced = canonicalize_plane_gf2(&form, &plane).expect("valid input");
        if quotient_keeps_uniform_type(&form, &plane) {
            brute_set.insert(plane.clone());
        }
        match reduced {
            CanonResult::Canonical(s) => {
                assert_eq!(s.subspace, canon);
                accept_set.insert(plane);
            }
            CanonResult::Rejected(w) => {
                rejected += 1;
                let value = form.evaluate(&w.x, &w.y);
                if !value.is_zero() && plane.contains(&value) {
                    witness_ok += 1;
                }
            }
        }
    }
    let sweep_ms = t0.elapsed().as_millis();

    // the orbit of the canonical plane under every invertible base change
    let t1 = Instant::now();
    let mut orbit = BTreeSet::new();
    let mut gl_count = 0u64;
    for m0 in all_vectors(field, 4) {
        for m1 in all_vectors(field, 4) {
            for m2 in all_vectors(field, 4) {
                for m3 in all_vectors(field, 4) {
                    let phi = Matrix::from_rows(field, &[m0.clone(), m1.clone(), m2.clone(), m3.clone()])
                        .transpose();
                    if !phi.is_invertible() {
                        continue;
                    }
                    gl_count += 1;
                    orbit.insert(canon.map(&wedge_square(&phi)));
                }
            }
        }
    }
    let orbit_ms = t1.elapsed().as_millis();

    rb.claim(
        ClaimRecord {
            id: "accept-set-matches-brute-force".to_string(),
            anchor: anchor.to_string(),
            statement: "reducer accept set equals the brute-force accept set over all planes"
                .to_string(),
            pass: accept_set == brute_set && total == 651,
            counts: counts(&[
                ("total", total),
                ("accepted", accept_set.len() as u64),
                ("rejected", rejected),
                ("valid_witnesses", witness_ok),
            ]),
            witness: None,
        },
        sweep_ms,
    );
    rb.claim(
        ClaimRecord {
            id: "accept-set-is-one-orbit".to_string(),
            anchor: anchor.to_string(),
            statement:
                "the accept set is exactly the orbit of the canonical plane under all 20160 base changes"
                    .to_string(),
            pass: accept_set == orbit && gl_count == 20160,
            counts: counts(&[
                ("orbit_size", orbit.len() as u64),
                ("accepted", accept_set.len() as u64),
                ("gl_elements", gl_count),
            ]),
            witness: None,
        },
        orbit_ms,
    );

    Ok(rb.finish())
}

/// Desk-scale classification sweep for odd p: every central subspace of the
/// four-generator universal group of dimension at most two whose quotient
/// keeps type {1, p^3} must classify into the four labels, with explicit
/// certificates; the four representatives must be pairwise non-isoclinic.
pub fn verify_theorem1(p: u64, budgets: &Budgets) -> Result<VerificationReport, VerifyError> {
    if p == 2 {
        return Err(VerifyError::Unsupported {
            target: "theorem1".to_string(),
            reason: "p = 2 is covered by theorem2".to_string(),
        });
    }
    classification_sweep("theorem1", p, budgets)
}

/// The same classification sweep at p = 2, plus the isoclinism of two
/// distinct-cocycle members of the four-generator family, certified by the
/// exhaustive GL(4, 2) search.
pub fn verify_theorem2(budgets: &Budgets) -> Result<VerificationReport, VerifyError> {
    let mut report = classification_sweep("theorem2", 2, budgets)?;
    let field = PrimeField::new(2)?;

    let t0 = Instant::now();
    // member one: the collection model on the universal form
    let full = AlternatingMap::full(4, field);
    let member_a = GroupModel::new(full.clone(), CocycleKind::Collection).expect("p = 2");
    // member two: a sheared copy of the form with a perturbed squaring map
    let shear = Matrix::from_fn(field, 4, 4, |i, j| u64::from(j == i || j == i + 1));
    let (sheared, _) = full.base_change(&shear).expect("invertible shear");
    let base = GroupModel::new(sheared.clone(), CocycleKind::Collection).expect("p = 2");
    let mut cocycle: Vec<Vector> = (0..16)
        .map(|k| base.cocycle_value(k / 4, k % 4).clone())
        .collect();
    cocycle[0] = Vector::basis(field, 6, 2); // nontrivial square for the first generator
    let member_b = GroupModel::with_cocycle(sheared, cocycle).expect("antisymmetrization intact");

    let form_a = member_a.derive_form();
    let form_b = member_b.derive_form();
    let sq = |m: &GroupModel, i: usize| {
        let g = m.generator(i);
        m.multiply(&g, &g).expect("member").w
    };
    let cocycles_differ = (0..4).any(|i| sq(&member_a, i) != sq(&member_b, i)) || form_a != form_b;
    let outcome = find_isoclinism(&form_a, &form_b, budgets);
    let elapsed = t0.elapsed().as_millis();
    let search_nontrivial = form_a != form_b;
    let pass = cocycles_differ && search_nontrivial && outcome.is_isoclinic();
    report.timing_ms.insert("distinct-cocycle-members-isoclinic".to_string(), elapsed);
    report.canonical.claims.push(ClaimRecord {
        id: "distinct-cocycle-members-isoclinic".to_string(),
        anchor: "lemma8/p=2".to_string(),
        statement:
            "two four-generator members with different cocycles are certified isoclinic by the exhaustive GL(4,2) search"
                .to_string(),
        pass,
        counts: counts(&[
            ("order_a", member_a.order() as u64),
            ("order_b", member_b.order() as u64),
            ("gl_size", 20160),
        ]),
        witness: None,
    });
    // recompute the verdict with the extra claim folded in
    if report.canonical.verdict != "incomplete" {
        report.canonical.verdict = if report.canonical.claims.iter().all(|c| c.pass) {
            "verified".to_string()
        } else {
            "failed".to_string()
        };
    }
    Ok(report)
}

fn classification_sweep(
    target: &str,
    p: u64,
    budgets: &Budgets,
) -> Result<VerificationReport, VerifyError> {
    let field = PrimeField::new(p)?;
    let params: BTreeMap<String, u64> = [("p".to_string(), p)].into();
    let mut rb = ReportBuilder::new(target, params, budgets, "full");
    let anchor = |part: &str| format!("{target}/p={p}/{part}");
    let form = AlternatingMap::full(4, field);

    let planes = gaussian_binomial(6, 2, p)?;
    let points = (p.pow(4) - 1) / (p - 1);
    let cost = (planes as u128 + gaussian_binomial(6, 1, p)? as u128) * points as u128;
    if cost > budgets.form_scan as u128 {
        rb.incomplete = true;
        rb.run_claim(
            "budget",
            &anchor("budget"),
            "classification sweep skipped: estimated cost exceeds the form budget",
            || {
                (
                    false,
                    counts(&[("estimated_cost", cost.min(u64::MAX as u128) as u64)]),
                    None,
                )
            },
        );
        return Ok(rb.finish());
    }

    // the full group itself is the dimension-zero case
    rb.run_claim(
        "full-group-labeled",
        &anchor("full"),
        "the universal four-generator group classifies as its own label with a certificate",
        || match classify(&form, budgets, false) {
            Ok(c) => (
                c.label == ClassLabel::FullFourGenerator && c.certificate.is_some(),
                counts(&[("labeled", 1)]),
                None,
            ),
            Err(e) => (false, counts(&[]), Some(e.to_string())),
        },
    );

    // dimension one and two: every admissible quotient must classify, and
    // the first admissible instance of each dimension is search-confirmed
    for (dim, label, claim_id) in [
        (1usize, ClassLabel::LineQuotient, "line-quotients-labeled"),
        (2usize, ClassLabel::PlaneQuotient, "plane-quotients-labeled"),
    ] {
        let t0 = Instant::now();
        let mut admissible = 0u64;
        let mut labeled = 0u64;
        let mut certified = 0u64;
        let mut search_confirmed = 0u64;
        let mut counterexamples = 0u64;
        let mut first_issue: Option<String> = None;
        for k in enumerate_subspaces(field, 6, dim)? {
            if !quotient_keeps_uniform_type(&form, &k) {
                continue;
            }
            admissible += 1;
            let quotient = form.quotient(&k)?;
            // search-confirm the first instance, certify the rest directly
            let confirm = admissible == 1;
            match classify(&quotient, budgets, confirm) {
                Ok(c) => {
                    if c.label == label {
                        labeled += 1;
                    } else if first_issue.is_none() {
                        first_issue = Some(format!("subspace {k}: labeled {}", c.label.as_str()));
                    }
                    if c.certificate.is_some() {
                        certified += 1;
                    }
                    if c.search_confirmed {
                        search_confirmed += 1;
                    }
                }
                Err(e) => {
                    counterexamples += 1;
                    if first_issue.is_none() {
                        first_issue = Some(format!("subspace {k}: {e}"));
                    }
                }
            }
        }
        rb.claim(
            ClaimRecord {
                id: claim_id.to_string(),
                anchor: anchor(&format!("dim{dim}")),
                statement: format!(
                    "every admissible dimension-{dim} central quotient classifies as {} with a machine-checked certificate",
                    label.as_str()
                ),
                pass: counterexamples == 0
                    && labeled == admissible
                    && certified == admissible
                    && search_confirmed >= 1,
                counts: counts(&[
                    ("admissible", admissible),
                    ("labeled", labeled),
                    ("certified", certified),
                    ("search_confirmed", search_confirmed),
                    ("counterexamples", counterexamples),
                ]),
                witness: first_issue,
            },
            t0.elapsed().as_millis(),
        );
    }

    // the Camina example
    rb.run_claim(
        "camina-example-labeled",
        &anchor("camina"),
        "the unitriangular group over GF(p^3) classifies as the Camina label",
        || {
            let h = match AlternatingMap::heisenberg(p, 3) {
                Ok(h) => h,
                Err(e) => return (false, counts(&[]), Some(e.to_string())),
            };
            match classify(&h, budgets, false) {
                Ok(c) => (
                    c.label == ClassLabel::CaminaCubed,
                    counts(&[("labeled", 1)]),
                    None,
                ),
                Err(e) => (false, counts(&[]), Some(e.to_string())),
            }
        },
    );

    // pairwise separation of the four representatives by fingerprints
    rb.run_claim(
        "representatives-pairwise-non-isoclinic",
        &anchor("separation"),
        "the four class representatives have pairwise distinct fingerprints (dimW 3, 6, 5, 4)",
        || {
            let reps = [
                AlternatingMap::heisenberg(p, 3).expect("in range"),
                form.clone(),
                crate::isoclinism::representative(ClassLabel::LineQuotient, p).expect("odd or 2"),
                crate::isoclinism::representative(ClassLabel::PlaneQuotient, p).expect("odd or 2"),
            ];
            let mut distinct_pairs = 0u64;
            let mut failures = 0u64;
            for i in 0..4 {
                for j in i + 1..4 {
                    let fi = fingerprint(&reps[i], budgets);
                    let fj = fingerprint(&reps[j], budgets);
                    match (fi, fj) {
                        (Ok(a), Ok(b)) if a != b => distinct_pairs += 1,
                        _ => failures += 1,
                    }
                }
            }
            let dims: Vec<u64> = reps.iter().map(|r| r.dim_w() as u64).collect();
            (
                distinct_pairs == 6 && failures == 0 && dims == vec![3, 6, 5, 4],
                counts(&[("distinct_pairs", distinct_pairs), ("failures", failures)]),
                None,
            )
        },
    );

    Ok(rb.finish())
}
