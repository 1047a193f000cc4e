//! Concrete element arithmetic for the groups behind the forms.
//!
//! An element is a pair (v, w) with v in V and w in W, multiplied through a
//! bilinear cocycle f: (v, w)(v', w') = (v + v', w + w' + f(v, v')). Any
//! bilinear f whose antisymmetrization is the commutator form B produces a
//! class-2 group realizing B; the choice of f fixes the power maps. This
//! model is the independent oracle against which the form-level engine is
//! validated: class sizes here are computed by enumerating actual products.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::budget::Budgets;
use crate::field::PrimeField;
use crate::form::{AlternatingMap, FormError};
use crate::linalg::{all_vectors, Vector};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("the half-commutator cocycle needs an odd prime")]
    BaerNeedsOddPrime,
    #[error("cocycle antisymmetrization disagrees with the form at pair ({i}, {j})")]
    CocycleMismatch { i: usize, j: usize },
    #[error("element does not belong to this model (dims {dim_v}/{dim_w} expected)")]
    ForeignElement { dim_v: usize, dim_w: usize },
    #[error("scan of {needed} items exceeds the element budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("only cocycles supported on pairs i > j can be serialized")]
    UnserializableCocycle,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A group element: coset coordinates v over the center, central part w.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub v: Vector,
    pub w: Vector,
}

impl GroupElement {
    pub fn is_identity(&self) -> bool {
        self.v.is_zero() && self.w.is_zero()
    }
}

/// Built-in cocycle conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CocycleKind {
    /// f = (1/2) B on every pair; odd p only. The resulting group has
    /// exponent p (the Baer correspondence).
    HalfCommutator,
    /// f(e_i, e_j) = B(e_i, e_j) for i > j, zero otherwise; works at every
    /// prime and matches the usual collection process bookkeeping.
    Collection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupModel {
    form: AlternatingMap,
    /// f(e_i, e_j) on all ordered pairs, row-major dim_v x dim_v grid.
    cocycle: Vec<Vector>,
}

impl GroupModel {
    pub fn new(form: AlternatingMap, kind: CocycleKind) -> Result<Self, GroupError> {
        let f = form.field();
        let n = form.dim_v();
        let mut cocycle = vec![Vector::zero(f, form.dim_w()); n * n];
        match kind {
            CocycleKind::HalfCommutator => {
                if f.p() == 2 {
                    return Err(GroupError::BaerNeedsOddPrime);
                }
                let half = f.inv(2).expect("odd p");
                for i in 0..n {
                    for j in 0..n {
                        cocycle[i * n + j] = form.value(i, j).scale(half);
                    }
                }
            }
            CocycleKind::Collection => {
                for i in 0..n {
                    for j in 0..i {
                        cocycle[i * n + j] = form.value(i, j);
                    }
                }
            }
        }
        Ok(GroupModel { form, cocycle })
    }

    /// The exponent-p model at odd p, the collection model at p = 2.
    pub fn default_for(form: AlternatingMap) -> Self {
        let kind = if form.field().p() == 2 {
            CocycleKind::Collection
        } else {
            CocycleKind::HalfCommutator
        };
        GroupModel::new(form, kind).expect("kind matches parity")
    }

    /// A model with an explicit cocycle grid (row-major, dim_v x dim_v).
    /// The antisymmetrization must reproduce the form.
    pub fn with_cocycle(form: AlternatingMap, cocycle: Vec<Vector>) -> Result<Self, GroupError> {
        let n = form.dim_v();
        assert_eq!(cocycle.len(), n * n);
        for i in 0..n {
            for j in i + 1..n {
                let anti = cocycle[i * n + j].sub(&cocycle[j * n + i]);
                if anti != form.value(i, j) {
                    return Err(GroupError::CocycleMismatch { i, j });
                }
            }
        }
        Ok(GroupModel { form, cocycle })
    }

    pub fn form(&self) -> &AlternatingMap {
        &self.form
    }

    pub fn field(&self) -> PrimeField {
        self.form.field()
    }

    pub fn dim_v(&self) -> usize {
        self.form.dim_v()
    }

    pub fn dim_w(&self) -> usize {
        self.form.dim_w()
    }

    pub fn order(&self) -> u128 {
        (self.field().p() as u128).pow((self.dim_v() + self.dim_w()) as u32)
    }

    pub fn cocycle_value(&self, i: usize, j: usize) -> &Vector {
        &self.cocycle[i * self.dim_v() + j]
    }

    /// The cocycle f(x, y) by bilinear expansion.
    pub fn cocycle_eval(&self, x: &Vector, y: &Vector) -> Vector {
        let f = self.field();
        let n = self.dim_v();
        let mut acc = Vector::zero(f, self.dim_w());
        for i in 0..n {
            let xi = x.get(i);
            if xi == 0 {
                continue;
            }
            for j in 0..n {
                let c = f.mul(xi, y.get(j));
                if c != 0 {
                    acc = acc.add_scaled(&self.cocycle[i * n + j], c);
                }
            }
        }
        acc
    }

    fn check_member(&self, g: &GroupElement) -> Result<(), GroupError> {
        if g.v.dim() != self.dim_v()
            || g.w.dim() != self.dim_w()
            || g.v.field() != self.field()
        {
            return Err(GroupError::ForeignElement {
                dim_v: self.dim_v(),
                dim_w: self.dim_w(),
            });
        }
        Ok(())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            v: Vector::zero(self.field(), self.dim_v()),
            w: Vector::zero(self.field(), self.dim_w()),
        }
    }

    pub fn element(&self, v: Vector, w: Vector) -> GroupElement {
        GroupElement { v, w }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement {
            v: Vector::basis(self.field(), self.dim_v(), i),
            w: Vector::zero(self.field(), self.dim_w()),
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(g)?;
        self.check_member(h)?;
        Ok(GroupElement {
            v: g.v.add(&h.v),
            w: g.w.add(&h.w).add(&self.cocycle_eval(&g.v, &h.v)),
        })
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(g)?;
        let f = self.field();
        let neg_v = g.v.scale(f.neg(1));
        // (v, w)(-v, -w + f(v, v)) = (0, 0)
        let w = g.w.scale(f.neg(1)).add(&self.cocycle_eval(&g.v, &g.v));
        Ok(GroupElement { v: neg_v, w })
    }

    /// g^{-1} h^{-1} g h, by honest multiplication. Always central.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        let gi = self.inverse(g)?;
        let hi = self.inverse(h)?;
        let a = self.multiply(&gi, &hi)?;
        let b = self.multiply(&a, g)?;
        self.multiply(&b, h)
    }

    pub fn element_order(&self, g: &GroupElement) -> Result<u64, GroupError> {
        self.check_member(g)?;
        let p = self.field().p();
        let mut acc = g.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = self.multiply(&acc, g)?;
            k += 1;
            assert!(k <= p * p, "order exceeds p^2 in a class-2 p-group");
        }
        Ok(k)
    }

    /// The conjugacy class of g: since [g, h] = (0, B(v_g, v_h)) is central,
    /// conjugation by h multiplies g by that commutator, so the class is
    /// g . { (0, B(v_g, u)) : u in V }.
    pub fn conjugacy_class(
        &self,
        g: &GroupElement,
        budgets: &Budgets,
    ) -> Result<BTreeSet<GroupElement>, GroupError> {
        self.check_member(g)?;
        let f = self.field();
        let needed = (f.p() as u128).pow(self.dim_v() as u32);
        if needed > budgets.element_scan as u128 {
            return Err(GroupError::BudgetExceeded {
                needed,
                budget: budgets.element_scan,
            });
        }
        let mut class = BTreeSet::new();
        let adj = self.form.adjoint(&g.v);
        for u in all_vectors(f, self.dim_v()) {
            let delta = adj.mul_vec(&u);
            class.insert(GroupElement {
                v: g.v.clone(),
                w: g.w.add(&delta),
            });
        }
        Ok(class)
    }

    pub fn class_size(&self, g: &GroupElement, budgets: &Budgets) -> Result<u64, GroupError> {
        Ok(self.conjugacy_class(g, budgets)?.len() as u64)
    }

    /// Distinct conjugacy class sizes across the whole group. The class of
    /// (v, w) is (v, w) shifted by the set of commutator values at v, so the
    /// scan runs over v and counts distinct values by enumeration.
    pub fn conjugate_type_elements(&self, budgets: &Budgets) -> Result<BTreeSet<u64>, GroupError> {
        let f = self.field();
        if self.order() > budgets.element_scan as u128 {
            return Err(GroupError::BudgetExceeded {
                needed: self.order(),
                budget: budgets.element_scan,
            });
        }
        let mut sizes = BTreeSet::new();
        for v in all_vectors(f, self.dim_v()) {
            let adj = self.form.adjoint(&v);
            let mut values = BTreeSet::new();
            for u in all_vectors(f, self.dim_v()) {
                values.insert(adj.mul_vec(&u));
            }
            sizes.insert(values.len() as u64);
        }
        Ok(sizes)
    }

    /// Re-derives the commutator form from element-level commutators of the
    /// generators. Always equals the stored form; used as a cross-check and
    /// to hand models to the isoclinism machinery.
    pub fn derive_form(&self) -> AlternatingMap {
        let n = self.dim_v();
        let mut pairs = Vec::with_capacity(crate::form::pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                let c = self
                    .commutator(&self.generator(i), &self.generator(j))
                    .expect("generators are members");
                debug_assert!(c.v.is_zero());
                pairs.push(c.w);
            }
        }
        AlternatingMap::new(self.field(), n, self.dim_w(), pairs)
            .expect("commutator values span W")
    }

    /// Element-level structural census: center, derived subgroup, exponent,
    /// generator count, and the specialness property Z = G' = Phi(G).
    pub fn structural_report(&self, budgets: &Budgets) -> Result<GroupReport, GroupError> {
        let f = self.field();
        let p = f.p();
        let n = self.dim_v();
        if self.order() > budgets.element_scan as u128 {
            return Err(GroupError::BudgetExceeded {
                needed: self.order(),
                budget: budgets.element_scan,
            });
        }

        // center: (v, w) commutes with everything iff B(v, e_j) = 0 for all j
        let mut central_v = 0u64;
        for v in all_vectors(f, n) {
            if self.form.adjoint(&v).rank() == 0 {
                central_v += 1;
            }
        }
        let center_order = central_v as u128 * (p as u128).pow(self.dim_w() as u32);

        // derived subgroup: additive span of all commutator values, collected
        // by enumerating ordered pairs of coset representatives
        let pair_scan = (p as u128).pow(2 * n as u32);
        if pair_scan > budgets.element_scan as u128 {
            return Err(GroupError::BudgetExceeded {
                needed: pair_scan,
                budget: budgets.element_scan,
            });
        }
        let mut commutator_values: Vec<Vector> = Vec::new();
        for x in all_vectors(f, n) {
            let adj = self.form.adjoint(&x);
            for y in all_vectors(f, n) {
                commutator_values.push(adj.mul_vec(&y));
            }
        }
        let derived = crate::linalg::Subspace::from_rows(f, self.dim_w(), &commutator_values);
        let derived_order = (p as u128).pow(derived.dim() as u32);

        // exponent and the p-th power subgroup, by scanning every element
        let mut exponent = 1u64;
        let mut power_in_center = true;
        let mut omega1_center = 0u128;
        for v in all_vectors(f, n) {
            let v_central = self.form.adjoint(&v).rank() == 0;
            for w in all_vectors(f, self.dim_w()) {
                let g = GroupElement {
                    v: v.clone(),
                    w,
                };
                let ord = self.element_order(&g)?;
                exponent = exponent.max(ord);
                if v_central && ord <= p {
                    omega1_center += 1;
                }
                // g^p must be central for Phi(G) = G' G^p to equal G'
                let mut acc = g.clone();
                for _ in 1..p {
                    acc = self.multiply(&acc, &g)?;
                }
                if !acc.v.is_zero() || !derived.contains(&acc.w) {
                    power_in_center = false;
                }
            }
        }

        let frattini_is_derived = power_in_center;
        let is_special = center_order == derived_order
            && derived.dim() == self.dim_w()
            && central_v == 1
            && frattini_is_derived;

        Ok(GroupReport {
            p,
            order: self.order(),
            center_order,
            derived_order,
            derived_dim: derived.dim(),
            exponent,
            min_generators: n,
            frattini_quotient_dim: n,
            is_special,
            omega1_center_order: omega1_center,
        })
    }
}

/// Outcome of the element-level structural census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupReport {
    pub p: u64,
    pub order: u128,
    pub center_order: u128,
    pub derived_order: u128,
    pub derived_dim: usize,
    pub exponent: u64,
    pub min_generators: usize,
    pub frattini_quotient_dim: usize,
    pub is_special: bool,
    pub omega1_center_order: u128,
}

// --- group files -----------------------------------------------------------
//
// A group file is a form file, optionally followed by a line `cocycle` and
// rows `i j w_1 .. w_dimW` with i > j giving the nonzero cocycle values on
// the strictly lower pairs. A file without the section denotes the default
// model for its prime. Only lower-supported cocycles are serializable.

impl GroupModel {
    pub fn to_text(&self) -> Result<String, GroupError> {
        let n = self.dim_v();
        let default = GroupModel::default_for(self.form.clone());
        if self.cocycle == default.cocycle {
            return Ok(self.form.to_text());
        }
        for i in 0..n {
            for j in i..n {
                if !self.cocycle[i * n + j].is_zero() {
                    return Err(GroupError::UnserializableCocycle);
                }
            }
        }
        let mut out = self.form.to_text();
        out.push_str("cocycle\n");
        for i in 0..n {
            for j in 0..i {
                let v = &self.cocycle[i * n + j];
                if !v.is_zero() {
                    writeln!(out, "{} {} {}", i, j, v).unwrap();
                }
            }
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<GroupModel, GroupError> {
        let form = AlternatingMap::parse(text)?;
        let n = form.dim_v();
        let dim_w = form.dim_w();
        let field = form.field();
        let Some(section_at) = text.lines().position(|l| l.trim() == "cocycle") else {
            return Ok(GroupModel::default_for(form));
        };
        let mut cocycle = vec![Vector::zero(field, dim_w); n * n];
        for (idx, raw) in text.lines().enumerate().skip(section_at + 1) {
            let line_no = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            let words: Vec<&str> = trimmed.split_whitespace().collect();
            let parse_err = |reason: &str| GroupError::Parse {
                line: line_no,
                reason: reason.to_string(),
            };
            if words.len() != 2 + dim_w {
                return Err(parse_err(&format!("expected `i j` plus {dim_w} entries")));
            }
            let i: usize = words[0].parse().map_err(|_| parse_err("bad index"))?;
            let j: usize = words[1].parse().map_err(|_| parse_err("bad index"))?;
            if j >= i || i >= n {
                return Err(parse_err("cocycle pairs must satisfy j < i < dimV"));
            }
            let mut entries = Vec::with_capacity(dim_w);
            for word in &words[2..] {
                let e: u64 = word.parse().map_err(|_| parse_err("bad entry"))?;
                if e >= field.p() {
                    return Err(parse_err("entry not reduced mod p"));
                }
                entries.push(e);
            }
            cocycle[i * n + j] = Vector::new(field, entries);
        }
        GroupModel::with_cocycle(form, cocycle)
    }
}

/// Formats a class-size census like `{1, 27}`.
pub fn format_sizes(sizes: &BTreeMap<u64, u64>) -> String {
    let words: Vec<String> = sizes.keys().map(|s| s.to_string()).collect();
    format!("{{{}}}", words.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn g3_model() -> GroupModel {
        GroupModel::default_for(AlternatingMap::full(4, gf(3)))
    }

    fn random_element(model: &GroupModel, rng: &mut ChaCha8Rng) -> GroupElement {
        let p = model.field().p();
        let v = Vector::new(
            model.field(),
            (0..model.dim_v()).map(|_| rng.gen_range(0..p)).collect(),
        );
        let w = Vector::new(
            model.field(),
            (0..model.dim_w()).map(|_| rng.gen_range(0..p)).collect(),
        );
        model.element(v, w)
    }

    #[test]
    fn identity_and_inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for model in [
            g3_model(),
            GroupModel::default_for(AlternatingMap::heisenberg(2, 3).unwrap()),
        ] {
            for _ in 0..200 {
                let g = random_element(&model, &mut rng);
                let gi = model.inverse(&g).unwrap();
                assert!(model.multiply(&g, &gi).unwrap().is_identity());
                assert!(model.multiply(&gi, &g).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn associativity_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for model in [
            g3_model(),
            GroupModel::default_for(AlternatingMap::heisenberg(2, 3).unwrap()),
        ] {
            for _ in 0..10_000 {
                let a = random_element(&model, &mut rng);
                let b = random_element(&model, &mut rng);
                let c = random_element(&model, &mut rng);
                let left = model
                    .multiply(&model.multiply(&a, &b).unwrap(), &c)
                    .unwrap();
                let right = model
                    .multiply(&a, &model.multiply(&b, &c).unwrap())
                    .unwrap();
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn commutator_realizes_the_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for model in [
            g3_model(),
            GroupModel::new(AlternatingMap::full(4, gf(2)), CocycleKind::Collection).unwrap(),
            GroupModel::default_for(AlternatingMap::heisenberg(3, 2).unwrap()),
        ] {
            let n = model.dim_v();
            // exhaustive on basis pairs
            for i in 0..n {
                for j in 0..n {
                    let c = model
                        .commutator(&model.generator(i), &model.generator(j))
                        .unwrap();
                    assert!(c.v.is_zero());
                    assert_eq!(c.w, model.form().value(i, j));
                }
            }
            // randomized on general pairs, including central parts
            for _ in 0..300 {
                let g = random_element(&model, &mut rng);
                let h = random_element(&model, &mut rng);
                let c = model.commutator(&g, &h).unwrap();
                assert!(c.v.is_zero());
                assert_eq!(c.w, model.form().evaluate(&g.v, &h.v));
            }
        }
    }

    #[test]
    fn g3_basis_commutator_is_first_basis_vector() {
        let model = g3_model();
        let c = model
            .commutator(&model.generator(0), &model.generator(1))
            .unwrap();
        assert_eq!(c.w, Vector::basis(gf(3), 6, 0));
        let central = model.element(Vector::zero(gf(3), 4), Vector::basis(gf(3), 6, 2));
        let g = model.generator(2);
        assert!(model.commutator(&central, &g).unwrap().is_identity());
    }

    #[test]
    fn element_orders() {
        let model = g3_model();
        assert_eq!(model.element_order(&model.identity()).unwrap(), 1);
        // odd-p half-commutator model has exponent p, exhaustively
        let small = GroupModel::default_for(AlternatingMap::full(3, gf(3)));
        for v in all_vectors(gf(3), 3) {
            for w in all_vectors(gf(3), 3) {
                let g = small.element(v.clone(), w);
                let ord = small.element_order(&g).unwrap();
                assert!(ord == 1 || ord == 3);
            }
        }
        let p5 = GroupModel::default_for(AlternatingMap::full(2, gf(5)));
        for v in all_vectors(gf(5), 2) {
            for w in all_vectors(gf(5), 1) {
                let g = p5.element(v.clone(), w);
                assert!(p5.element_order(&g).unwrap() <= 5);
            }
        }
    }

    #[test]
    fn two_group_orders_divide_four() {
        let model = GroupModel::new(AlternatingMap::heisenberg(2, 3).unwrap(), CocycleKind::Collection)
            .unwrap();
        let mut saw_order_four = false;
        for v in all_vectors(gf(2), 6) {
            for w in all_vectors(gf(2), 3) {
                let g = model.element(v.clone(), w);
                let ord = model.element_order(&g).unwrap();
                assert!(ord == 1 || ord == 2 || ord == 4, "order {ord}");
                saw_order_four |= ord == 4;
            }
        }
        assert!(saw_order_four, "collection cocycle squares nontrivially here");
    }

    #[test]
    fn conjugacy_class_examples() {
        let budgets = Budgets::default();
        let model = g3_model();
        let central = model.element(Vector::zero(gf(3), 4), Vector::basis(gf(3), 6, 1));
        let class = model.conjugacy_class(&central, &budgets).unwrap();
        assert_eq!(class.len(), 1);
        let a = model.generator(0);
        let class_a = model.conjugacy_class(&a, &budgets).unwrap();
        assert_eq!(class_a.len(), 27);
        // honest conjugation lands inside the computed class
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let h = random_element(&model, &mut rng);
            let hi = model.inverse(&h).unwrap();
            let conj = model
                .multiply(&model.multiply(&hi, &a).unwrap(), &h)
                .unwrap();
            assert!(class_a.contains(&conj));
        }
    }

    #[test]
    fn class_size_equals_p_to_breadth_exhaustive_small() {
        // keystone cross-check: enumeration-level class size against the
        // form-level rank, every element of every small model
        let budgets = Budgets::default();
        let models = [
            GroupModel::default_for(AlternatingMap::full(3, gf(3))),
            GroupModel::default_for(AlternatingMap::full(4, gf(2))),
            GroupModel::default_for(AlternatingMap::heisenberg(2, 3).unwrap()),
            GroupModel::default_for(AlternatingMap::heisenberg(3, 2).unwrap()),
        ];
        for model in &models {
            assert!(model.order() <= 1024);
            let p = model.field().p();
            for v in all_vectors(model.field(), model.dim_v()) {
                for w in all_vectors(model.field(), model.dim_w()) {
                    let g = model.element(v.clone(), w);
                    let size = model.class_size(&g, &budgets).unwrap();
                    let b = model.form().breadth(&g.v);
                    assert_eq!(size, p.pow(b as u32));
                }
            }
        }
        // the ten-dimensional group at p = 3: all cosets, two central parts
        let big = GroupModel::default_for(AlternatingMap::full(4, gf(3)));
        let shifts = [Vector::zero(gf(3), 6), Vector::basis(gf(3), 6, 0)];
        for v in all_vectors(gf(3), 4) {
            for w in &shifts {
                let g = big.element(v.clone(), w.clone());
                let size = big.class_size(&g, &budgets).unwrap();
                assert_eq!(size, 3u64.pow(big.form().breadth(&g.v) as u32));
            }
        }
    }

    #[test]
    fn element_level_conjugate_type() {
        let budgets = Budgets::default();
        let model = g3_model();
        assert_eq!(
            model.conjugate_type_elements(&budgets).unwrap(),
            [1u64, 27].into_iter().collect()
        );
        assert_eq!(
            model.form().conjugate_type(),
            model.conjugate_type_elements(&budgets).unwrap()
        );
        let abelian = GroupModel::default_for(AlternatingMap::zero_map(gf(3), 2));
        assert_eq!(
            abelian.conjugate_type_elements(&budgets).unwrap(),
            [1u64].into_iter().collect()
        );
    }

    #[test]
    fn quotient_model_keeps_type() {
        let budgets = Budgets::default();
        let f = gf(3);
        let b = AlternatingMap::full(4, f);
        let m = crate::linalg::Subspace::line(&Vector::new(f, vec![1, 0, 0, 0, 0, 1]));
        let model = GroupModel::default_for(b.quotient(&m).unwrap());
        assert_eq!(
            model.conjugate_type_elements(&budgets).unwrap(),
            [1u64, 27].into_iter().collect()
        );
    }

    #[test]
    fn structural_reports() {
        let budgets = Budgets::default();
        let g3 = g3_model().structural_report(&budgets).unwrap();
        assert_eq!(g3.order, 59049); // 3^10
        assert_eq!(g3.center_order, 729); // 3^6
        assert_eq!(g3.derived_order, 729);
        assert_eq!(g3.exponent, 3);
        assert_eq!(g3.min_generators, 4);
        assert!(g3.is_special);
        assert!(g3.omega1_center_order >= 27);

        let h = GroupModel::default_for(AlternatingMap::heisenberg(2, 3).unwrap());
        let rep = h.structural_report(&budgets).unwrap();
        assert_eq!(rep.order, 512); // 2^9
        assert_eq!(rep.derived_order, 8);
        assert!(rep.is_special);
        assert!(rep.omega1_center_order >= 8);
    }

    #[test]
    fn conjugate_type_independent_of_cocycle() {
        let budgets = Budgets::default();
        let form = AlternatingMap::full(4, gf(2));
        let collection =
            GroupModel::new(form.clone(), CocycleKind::Collection).unwrap();
        // perturb the squaring map through the diagonal
        let n = form.dim_v();
        let mut cocycle = collection.cocycle.clone();
        cocycle[0] = Vector::basis(gf(2), 6, 3); // f(e_0, e_0)
        cocycle[n + 1] = Vector::basis(gf(2), 6, 5); // f(e_1, e_1)
        let perturbed = GroupModel::with_cocycle(form, cocycle).unwrap();
        assert_ne!(collection, perturbed);
        assert_eq!(
            collection.conjugate_type_elements(&budgets).unwrap(),
            perturbed.conjugate_type_elements(&budgets).unwrap()
        );
        assert_eq!(collection.derive_form(), perturbed.derive_form());
    }

    #[test]
    fn derive_form_round_trip() {
        for model in [
            g3_model(),
            GroupModel::default_for(AlternatingMap::heisenberg(3, 2).unwrap()),
            GroupModel::new(AlternatingMap::full(4, gf(2)), CocycleKind::Collection).unwrap(),
        ] {
            assert_eq!(&model.derive_form(), model.form());
        }
    }

    #[test]
    fn mixed_model_elements_rejected() {
        let model = g3_model();
        let other = GroupModel::default_for(AlternatingMap::heisenberg(3, 2).unwrap());
        let foreign = other.generator(0);
        assert!(matches!(
            model.multiply(&model.identity(), &foreign),
            Err(GroupError::ForeignElement { .. })
        ));
    }

    #[test]
    fn group_file_round_trip() {
        // default model round-trips through the bare form file
        let model = g3_model();
        let text = model.to_text().unwrap();
        assert!(!text.contains("cocycle"));
        assert_eq!(GroupModel::parse(&text).unwrap(), model);

        // collection model at odd p needs the explicit section
        let coll = GroupModel::new(AlternatingMap::full(3, gf(3)), CocycleKind::Collection).unwrap();
        let text = coll.to_text().unwrap();
        assert!(text.contains("cocycle"));
        let parsed = GroupModel::parse(&text).unwrap();
        assert_eq!(parsed, coll);
        assert_eq!(parsed.to_text().unwrap(), text);

        // at p = 2 the collection model is the default
        let two = GroupModel::new(AlternatingMap::full(4, gf(2)), CocycleKind::Collection).unwrap();
        assert!(!two.to_text().unwrap().contains("cocycle"));
    }

    #[test]
    fn budget_errors() {
        let model = g3_model();
        let tiny = Budgets::with_all(10);
        assert!(matches!(
            model.conjugate_type_elements(&tiny),
            Err(GroupError::BudgetExceeded { .. })
        ));
        assert!(matches!(
            model.conjugacy_class(&model.generator(0), &tiny),
            Err(GroupError::BudgetExceeded { .. })
        ));
    }
}
