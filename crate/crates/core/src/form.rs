//! Alternating bilinear maps B : V x V -> W over GF(p), the commutator
//! structure of a nilpotency-class-2 group whose center equals its derived
//! subgroup. V stands for the group modulo its center, W for the derived
//! subgroup, both elementary abelian and written additively.
//!
//! Everything about conjugacy falls out of the form: the conjugacy class of
//! an element with image x in V has size p^rank(B(x, .)), so class sizes,
//! the Camina property, and the effect of central quotients are all linear
//! algebra over GF(p).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::budget::Budgets;
use crate::field::PrimeField;
use crate::linalg::{projective_points, Matrix, Subspace, Vector};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("the stored values must span W: their rank is {rank}, dim W is {dim_w}")]
    ValuesDoNotSpan { rank: usize, dim_w: usize },
    #[error("expected {expected} pair values for dim V = {dim_v}, got {got}")]
    WrongPairCount {
        dim_v: usize,
        expected: usize,
        got: usize,
    },
    #[error("subspace of dimension {sub} does not sit in W of dimension {dim_w}")]
    NotInW { sub: usize, dim_w: usize },
    #[error("base change is singular")]
    SingularBaseChange,
    #[error("no induced map on W: the values at basis pair ({i}, {j}) are inconsistent")]
    InconsistentInducedMap { i: usize, j: usize },
    #[error("scan of {needed} vectors exceeds the form budget {budget}; reduce dimensions or raise the budget (projective-line scans cut the cost by a factor of p-1)")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

/// Index of the pair (i, j), i < j, in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Number of unordered pairs from n generators, which is dim of the second
/// exterior power of V.
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// An alternating bilinear map B : V x V -> W, stored by its values on basis
/// pairs i < j. Alternation is forced by the storage; the values are required
/// to span W (the derived subgroup really is generated by commutators).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingMap {
    field: PrimeField,
    dim_v: usize,
    dim_w: usize,
    pairs: Vec<Vector>,
}

impl AlternatingMap {
    pub fn new(
        field: PrimeField,
        dim_v: usize,
        dim_w: usize,
        pairs: Vec<Vector>,
    ) -> Result<Self, FormError> {
        if pairs.len() != pair_count(dim_v) {
            return Err(FormError::WrongPairCount {
                dim_v,
                expected: pair_count(dim_v),
                got: pairs.len(),
            });
        }
        for v in &pairs {
            assert_eq!(v.dim(), dim_w);
            assert_eq!(v.field(), field);
        }
        let form = AlternatingMap {
            field,
            dim_v,
            dim_w,
            pairs,
        };
        let rank = form.linearization().rank();
        if rank != dim_w {
            return Err(FormError::ValuesDoNotSpan {
                rank,
                dim_w,
            });
        }
        Ok(form)
    }

    /// The zero map on n generators; the abelian case, with trivial W.
    pub fn zero_map(field: PrimeField, dim_v: usize) -> Self {
        AlternatingMap {
            field,
            dim_v,
            dim_w: 0,
            pairs: vec![Vector::zero(field, 0); pair_count(dim_v)],
        }
    }

    /// The universal alternating map on n generators: W is the full second
    /// exterior power and B(e_i, e_j) is its dedicated basis vector. This is
    /// the commutator structure of the free-est special p-group on n
    /// generators, of order p^(n + n(n-1)/2).
    pub fn full(n: usize, field: PrimeField) -> Self {
        assert!(n >= 2, "need at least two generators");
        let dim_w = pair_count(n);
        let pairs = (0..dim_w).map(|k| Vector::basis(field, dim_w, k)).collect();
        AlternatingMap {
            field,
            dim_v: n,
            dim_w,
            pairs,
        }
    }

    /// The commutator form of the group of 3 x 3 unitriangular matrices over
    /// GF(p^m), expanded over GF(p) coordinates: V = GF(p^m)^2 (the two
    /// off-diagonal corners), W = GF(p^m), and
    /// B((a1, a3), (b1, b3)) = a1 b3 - a3 b1.
    pub fn heisenberg(p: u64, m: usize) -> Result<Self, FormError> {
        let base = PrimeField::new(p)?;
        let ext = crate::field::ExtField::with_default_modulus(base, m)?;
        let dim_v = 2 * m;
        let dim_w = m;
        let mut pairs = Vec::with_capacity(pair_count(dim_v));
        let coords = |i: usize| -> (Vec<u64>, Vec<u64>) {
            // basis vector i of V as a pair of field elements
            if i < m {
                (ext.monomial(i), ext.zero())
            } else {
                (ext.zero(), ext.monomial(i - m))
            }
        };
        for i in 0..dim_v {
            for j in i + 1..dim_v {
                let (a1, a3) = coords(i);
                let (b1, b3) = coords(j);
                let value = ext.sub(&ext.mul(&a1, &b3), &ext.mul(&a3, &b1));
                pairs.push(Vector::new(base, value));
            }
        }
        AlternatingMap::new(base, dim_v, dim_w, pairs)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_w(&self) -> usize {
        self.dim_w
    }

    /// Whether this is exactly the universal map in standard coordinates:
    /// W has one dedicated basis vector per generator pair.
    pub fn is_full(&self) -> bool {
        self.dim_w == pair_count(self.dim_v)
            && self
                .pairs
                .iter()
                .enumerate()
                .all(|(k, v)| *v == Vector::basis(self.field, self.dim_w, k))
    }

    /// Group order p^(dimV + dimW), as base and exponent.
    pub fn order_exponent(&self) -> (u64, usize) {
        (self.field.p(), self.dim_v + self.dim_w)
    }

    /// B(e_i, e_j) for any i, j, with the sign handled.
    pub fn value(&self, i: usize, j: usize) -> Vector {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Less => self.pairs[pair_index(self.dim_v, i, j)].clone(),
            Ordering::Equal => Vector::zero(self.field, self.dim_w),
            Ordering::Greater => self.pairs[pair_index(self.dim_v, j, i)]
                .scale(self.field.neg(1)),
        }
    }

    pub fn pair_values(&self) -> &[Vector] {
        &self.pairs
    }

    /// B(x, y) by bilinear expansion: the coefficient of B(e_i, e_j) is
    /// x_i y_j - x_j y_i.
    pub fn evaluate(&self, x: &Vector, y: &Vector) -> Vector {
        assert_eq!(x.dim(), self.dim_v);
        assert_eq!(y.dim(), self.dim_v);
        let f = self.field;
        let mut acc = Vector::zero(f, self.dim_w);
        for i in 0..self.dim_v {
            for j in i + 1..self.dim_v {
                let c = f.sub(f.mul(x.get(i), y.get(j)), f.mul(x.get(j), y.get(i)));
                if c != 0 {
                    acc = acc.add_scaled(&self.pairs[pair_index(self.dim_v, i, j)], c);
                }
            }
        }
        acc
    }

    /// Matrix of the linear map y -> B(x, y), dim W rows by dim V columns.
    pub fn adjoint(&self, x: &Vector) -> Matrix {
        assert_eq!(x.dim(), self.dim_v);
        let f = self.field;
        let mut cols: Vec<Vector> = Vec::with_capacity(self.dim_v);
        for j in 0..self.dim_v {
            let mut acc = Vector::zero(f, self.dim_w);
            for i in 0..self.dim_v {
                let xi = x.get(i);
                if xi == 0 || i == j {
                    continue;
                }
                // B(e_i, e_j) with sign
                if i < j {
                    acc = acc.add_scaled(&self.pairs[pair_index(self.dim_v, i, j)], xi);
                } else {
                    acc = acc.add_scaled(
                        &self.pairs[pair_index(self.dim_v, j, i)],
                        f.neg(xi),
                    );
                }
            }
            cols.push(acc);
        }
        Matrix::from_fn(f, self.dim_w, self.dim_v, |r, c| cols[c].get(r))
    }

    /// The breadth of x: rank of y -> B(x, y). The conjugacy class of any
    /// preimage of x has exactly p^breadth elements.
    pub fn breadth(&self, x: &Vector) -> usize {
        self.adjoint(x).rank()
    }

    /// The set of conjugacy class sizes {1} and p^b over nonzero x. Breadth
    /// is constant on lines, so the scan runs over projective points only.
    pub fn conjugate_type(&self) -> BTreeSet<u64> {
        let mut sizes = BTreeSet::new();
        sizes.insert(1);
        for x in projective_points(self.field, self.dim_v) {
            let b = self.breadth(&x);
            sizes.insert(self.field.p().pow(b as u32));
        }
        sizes
    }

    /// Whether every non-central element has its full coset as conjugacy
    /// class, i.e. every nonzero x maps onto all of W. The abelian case
    /// (dim W = 0) is degenerate and reports false.
    pub fn is_camina(&self) -> bool {
        if self.dim_w == 0 {
            return false;
        }
        projective_points(self.field, self.dim_v).all(|x| self.breadth(&x) == self.dim_w)
    }

    /// Column k is B(e_i, e_j) for the k-th pair: the linearization of B as
    /// a map from the second exterior power of V onto W.
    pub fn linearization(&self) -> Matrix {
        Matrix::from_fn(self.field, self.dim_w, self.pairs.len(), |r, c| {
            self.pairs[c].get(r)
        })
    }

    /// The projection W -> W/U in explicit coordinates: the echelon basis of
    /// U is completed by the standard basis vectors at its non-pivot indices,
    /// and those coordinates survive.
    pub fn quotient_projection(&self, u: &Subspace) -> Result<Matrix, FormError> {
        if u.ambient() != self.dim_w {
            return Err(FormError::NotInW {
                sub: u.ambient(),
                dim_w: self.dim_w,
            });
        }
        let survivors: Vec<usize> = (0..self.dim_w)
            .filter(|c| !u.pivots().contains(c))
            .collect();
        let f = self.field;
        let mut proj = Matrix::zeros(f, survivors.len(), self.dim_w);
        for t in 0..self.dim_w {
            let reduced = u.reduce(&Vector::basis(f, self.dim_w, t));
            for (r, &q) in survivors.iter().enumerate() {
                proj.set(r, t, reduced.get(q));
            }
        }
        Ok(proj)
    }

    /// The composition of B with W -> W/U. dim W drops by dim U; the values
    /// of the quotient map still span, since the projection is onto.
    pub fn quotient(&self, u: &Subspace) -> Result<AlternatingMap, FormError> {
        let proj = self.quotient_projection(u)?;
        let pairs: Vec<Vector> = self.pairs.iter().map(|v| proj.mul_vec(v)).collect();
        AlternatingMap::new(self.field, self.dim_v, self.dim_w - u.dim(), pairs)
    }

    /// Pulls B back along an invertible map phi of V, returning the new form
    /// B'(x, y) = B(phi x, phi y) together with the induced map theta on W
    /// satisfying theta(B(x, y)) = B'(x, y). Theta exists whenever the values
    /// of B' satisfy every linear relation the values of B do; for the full
    /// map it always does (it is the second exterior power of phi).
    pub fn base_change(&self, phi: &Matrix) -> Result<(AlternatingMap, Matrix), FormError> {
        assert_eq!(phi.rows(), self.dim_v);
        assert_eq!(phi.cols(), self.dim_v);
        if !phi.is_invertible() {
            return Err(FormError::SingularBaseChange);
        }
        let cols: Vec<Vector> = (0..self.dim_v).map(|j| phi.col(j)).collect();
        let mut new_pairs = Vec::with_capacity(self.pairs.len());
        for i in 0..self.dim_v {
            for j in i + 1..self.dim_v {
                new_pairs.push(self.evaluate(&cols[i], &cols[j]));
            }
        }
        let changed = AlternatingMap {
            field: self.field,
            dim_v: self.dim_v,
            dim_w: self.dim_w,
            pairs: new_pairs,
        };

        // solve theta on the span of the old values, then check consistency
        let source = self.linearization();
        let target = changed.linearization();
        let (_, src_pivots) = source.rref();
        debug_assert_eq!(src_pivots.len(), self.dim_w);
        let f = self.field;
        let s0 = Matrix::from_fn(f, self.dim_w, self.dim_w, |r, c| {
            source.get(r, src_pivots[c])
        });
        let t0 = Matrix::from_fn(f, self.dim_w, self.dim_w, |r, c| {
            target.get(r, src_pivots[c])
        });
        let s0_inv = s0.inverse().expect("pivot columns are independent");
        let theta = t0.mul(&s0_inv);
        // every pair must agree, not only the pivot ones
        let check = theta.mul(&source);
        if check != target {
            let mut k = 0;
            for i in 0..self.dim_v {
                for j in i + 1..self.dim_v {
                    if check.col(k) != target.col(k) {
                        return Err(FormError::InconsistentInducedMap { i, j });
                    }
                    k += 1;
                }
            }
            unreachable!("a mismatching column exists");
        }
        if !theta.is_invertible() {
            return Err(FormError::SingularBaseChange);
        }
        Ok((changed, theta))
    }

    /// Census of breadths over all nonzero x. Counts sum to p^dimV - 1.
    pub fn breadth_profile(&self, budgets: &Budgets) -> Result<BreadthProfile, FormError> {
        let needed = (self.field.p() as u128).pow(self.dim_v as u32);
        if needed > budgets.form_scan as u128 {
            return Err(FormError::BudgetExceeded {
                needed,
                budget: budgets.form_scan,
            });
        }
        let mut counts = BTreeMap::new();
        let per_line = self.field.p() - 1;
        for x in projective_points(self.field, self.dim_v) {
            *counts.entry(self.breadth(&x)).or_insert(0) += per_line;
        }
        Ok(BreadthProfile { counts })
    }
}

/// Census of breadths: for each breadth value, how many nonzero x attain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreadthProfile {
    counts: BTreeMap<usize, u64>,
}

impl BreadthProfile {
    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn max_breadth(&self) -> usize {
        self.counts.keys().max().copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// If the nonzero breadths are exactly {n}, returns n.
    pub fn uniform_nonzero_breadth(&self) -> Option<usize> {
        let nonzero: Vec<usize> = self.counts.keys().copied().filter(|&b| b != 0).collect();
        match nonzero.as_slice() {
            [n] => Some(*n),
            _ => None,
        }
    }
}

/// The second exterior power of a map on V, acting on pair coordinates:
/// column (i, j) holds the coordinates of (phi e_i) wedge (phi e_j).
pub fn wedge_square(phi: &Matrix) -> Matrix {
    let n = phi.rows();
    assert_eq!(phi.cols(), n);
    let f = phi.field();
    let m = pair_count(n);
    let mut out = Matrix::zeros(f, m, m);
    for i in 0..n {
        for j in i + 1..n {
            let col = pair_index(n, i, j);
            for k in 0..n {
                for l in k + 1..n {
                    let row = pair_index(n, k, l);
                    // coefficient of e_k ^ e_l in phi(e_i) ^ phi(e_j)
                    let c = f.sub(
                        f.mul(phi.get(k, i), phi.get(l, j)),
                        f.mul(phi.get(l, i), phi.get(k, j)),
                    );
                    out.set(row, col, c);
                }
            }
        }
    }
    out
}

/// One structural check with its outcome.
#[derive(Debug, Clone)]
pub struct StructureCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the structural-bound suite on one form.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub checks: Vec<StructureCheck>,
}

impl StructureReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Verifies the classical structural bounds on this instance: the derived
/// subgroup bound dimW <= b(b+1)/2 for maximal breadth b; and when the
/// conjugate type is exactly {1, p^n}, the generator bound dimV >= n, the
/// center bound dimW >= n, and for n = 3 with p odd the dichotomy
/// (dimW = 3 and dimV >= 4) or (dimW >= 4 and dimV = 4).
pub fn check_structure_constraints(form: &AlternatingMap) -> StructureReport {
    let mut checks = Vec::new();
    let mut max_b = 0;
    let mut nonzero_breadths = BTreeSet::new();
    for x in projective_points(form.field(), form.dim_v()) {
        let b = form.breadth(&x);
        max_b = max_b.max(b);
        nonzero_breadths.insert(b);
    }
    checks.push(StructureCheck {
        name: "derived-subgroup-bound",
        passed: form.dim_w() <= max_b * (max_b + 1) / 2,
        detail: format!(
            "dimW = {} <= b(b+1)/2 = {} with b = {}",
            form.dim_w(),
            max_b * (max_b + 1) / 2,
            max_b
        ),
    });
    let uniform = match nonzero_breadths.iter().copied().collect::<Vec<_>>().as_slice() {
        [n] if *n != 0 => Some(*n),
        _ => None,
    };
    if let Some(n) = uniform {
        checks.push(StructureCheck {
            name: "generator-count-bound",
            passed: form.dim_v() >= n,
            detail: format!("conjugate type {{1, p^{}}}: dimV = {} >= {}", n, form.dim_v(), n),
        });
        checks.push(StructureCheck {
            name: "center-order-bound",
            passed: form.dim_w() >= n,
            detail: format!("conjugate type {{1, p^{}}}: dimW = {} >= {}", n, form.dim_w(), n),
        });
        if n == 3 && form.field().p() > 2 {
            let case_small = form.dim_w() == 3 && form.dim_v() >= 4;
            let case_large = form.dim_w() >= 4 && form.dim_v() == 4;
            checks.push(StructureCheck {
                name: "breadth-three-dichotomy",
                passed: case_small || case_large,
                detail: format!(
                    "dimW = {}, dimV = {}: expected dimW = 3 with dimV >= 4, or dimW >= 4 with dimV = 4",
                    form.dim_w(),
                    form.dim_v()
                ),
            });
        }
    }
    StructureReport { checks }
}

// --- plain-text serialization -------------------------------------------
//
// Header line `p dimV dimW`, then one line per basis pair with a nonzero
// value: `i j w_1 .. w_dimW`, 0-indexed, i < j, lexicographic order. Pairs
// with value zero are omitted. The rendering is canonical, so a parse
// followed by a render reproduces the input byte for byte.

impl AlternatingMap {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {} {}", self.field.p(), self.dim_v, self.dim_w).unwrap();
        for i in 0..self.dim_v {
            for j in i + 1..self.dim_v {
                let v = &self.pairs[pair_index(self.dim_v, i, j)];
                if !v.is_zero() {
                    writeln!(out, "{} {} {}", i, j, v).unwrap();
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<AlternatingMap, FormError> {
        let parse_err = |line: usize, reason: &str| FormError::Parse {
            line,
            reason: reason.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty input"))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 3 {
            return Err(parse_err(1, "header must be `p dimV dimW`"));
        }
        let p: u64 = head[0]
            .parse()
            .map_err(|_| parse_err(1, "p is not an integer"))?;
        let field = PrimeField::new(p)?;
        let dim_v: usize = head[1]
            .parse()
            .map_err(|_| parse_err(1, "dimV is not an integer"))?;
        let dim_w: usize = head[2]
            .parse()
            .map_err(|_| parse_err(1, "dimW is not an integer"))?;
        if !(1..=16).contains(&dim_v) {
            return Err(parse_err(1, "dimV out of supported range 1..=16"));
        }
        let mut pairs = vec![Vector::zero(field, dim_w); pair_count(dim_v)];
        let mut seen = vec![false; pair_count(dim_v)];
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed == "cocycle" {
                // group files append a cocycle section; the form parser stops here
                break;
            }
            let words: Vec<&str> = trimmed.split_whitespace().collect();
            if words.len() != 2 + dim_w {
                return Err(parse_err(
                    line_no,
                    &format!("expected `i j` plus {dim_w} entries"),
                ));
            }
            let i: usize = words[0]
                .parse()
                .map_err(|_| parse_err(line_no, "bad index"))?;
            let j: usize = words[1]
                .parse()
                .map_err(|_| parse_err(line_no, "bad index"))?;
            if i >= j || j >= dim_v {
                return Err(parse_err(line_no, "pair must satisfy i < j < dimV"));
            }
            let k = pair_index(dim_v, i, j);
            if seen[k] {
                return Err(parse_err(line_no, "duplicate pair"));
            }
            seen[k] = true;
            let mut entries = Vec::with_capacity(dim_w);
            for w in &words[2..] {
                let e: u64 = w.parse().map_err(|_| parse_err(line_no, "bad entry"))?;
                if e >= p {
                    return Err(parse_err(line_no, "entry not reduced mod p"));
                }
                entries.push(e);
            }
            pairs[k] = Vector::new(field, entries);
        }
        AlternatingMap::new(field, dim_v, dim_w, pairs)
    }
}

/// Renders a conjugate type like `{1, 27}`.
pub fn format_conjugate_type(sizes: &BTreeSet<u64>) -> String {
    let words: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
    format!("{{{}}}", words.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::all_vectors;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn e(field: PrimeField, dim: usize, i: usize) -> Vector {
        Vector::basis(field, dim, i)
    }

    #[test]
    fn full_map_dimensions() {
        let b = AlternatingMap::full(4, gf(3));
        assert_eq!(b.dim_v(), 4);
        assert_eq!(b.dim_w(), 6);
        assert_eq!(b.order_exponent(), (3, 10));
        let h = AlternatingMap::full(2, gf(7));
        assert_eq!(h.dim_w(), 1);
    }

    #[test]
    fn evaluate_is_alternating_and_bilinear() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in [2u64, 3, 5] {
            let f = gf(p);
            let b = AlternatingMap::full(4, f);
            for _ in 0..200 {
                let rv = |rng: &mut rand_chacha::ChaCha8Rng| {
                    Vector::new(f, (0..4).map(|_| rng.gen_range(0..p)).collect())
                };
                let x = rv(&mut rng);
                let y = rv(&mut rng);
                let z = rv(&mut rng);
                assert!(b.evaluate(&x, &x).is_zero());
                let xy = b.evaluate(&x, &y);
                let yx = b.evaluate(&y, &x);
                assert_eq!(xy.scale(f.neg(1)), yx);
                assert_eq!(
                    b.evaluate(&x.add(&z), &y),
                    b.evaluate(&x, &y).add(&b.evaluate(&z, &y))
                );
            }
        }
    }

    #[test]
    fn adjoint_matches_evaluate() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f = gf(3);
        let b = AlternatingMap::heisenberg(3, 2).unwrap();
        for _ in 0..100 {
            let x = Vector::new(f, (0..4).map(|_| rng.gen_range(0..3)).collect());
            let m = b.adjoint(&x);
            for j in 0..4 {
                assert_eq!(m.col(j), b.evaluate(&x, &e(f, 4, j)));
            }
        }
    }

    #[test]
    fn heisenberg_shapes_and_types() {
        let h23 = AlternatingMap::heisenberg(2, 3).unwrap();
        assert_eq!(h23.dim_v(), 6);
        assert_eq!(h23.dim_w(), 3);
        assert_eq!(h23.order_exponent(), (2, 9));
        // every one of the 63 nonzero vectors has breadth 3
        for x in all_vectors(gf(2), 6) {
            if !x.is_zero() {
                assert_eq!(h23.breadth(&x), 3);
            }
        }
        let h31 = AlternatingMap::heisenberg(3, 1).unwrap();
        assert_eq!(h31.conjugate_type(), [1, 3].into_iter().collect());
        let h33 = AlternatingMap::heisenberg(3, 3).unwrap();
        assert_eq!(h33.conjugate_type(), [1, 27].into_iter().collect());
    }

    #[test]
    fn breadth_examples() {
        let f = gf(3);
        let b = AlternatingMap::full(4, f);
        assert_eq!(b.breadth(&Vector::zero(f, 4)), 0);
        for x in projective_points(f, 4) {
            assert_eq!(b.breadth(&x), 3);
            // the kernel of B(x, .) is exactly the line through x
            let ker = b.adjoint(&x).kernel();
            assert_eq!(ker, Subspace::line(&x));
        }
    }

    #[test]
    fn conjugate_type_examples() {
        let b = AlternatingMap::full(4, gf(3));
        assert_eq!(b.conjugate_type(), [1, 27].into_iter().collect());
        let z = AlternatingMap::zero_map(gf(5), 3);
        assert_eq!(z.conjugate_type(), [1].into_iter().collect());
        // quotient by a decomposable line leaves a breadth-2 element
        let m = Subspace::line(&e(gf(3), 6, 0));
        let q = b.quotient(&m).unwrap();
        assert!(q.conjugate_type().contains(&9));
    }

    #[test]
    fn camina_examples() {
        for (p, m) in [(2u64, 3usize), (3, 2), (3, 3)] {
            assert!(AlternatingMap::heisenberg(p, m).unwrap().is_camina());
        }
        assert!(!AlternatingMap::full(4, gf(3)).is_camina());
        assert!(AlternatingMap::full(2, gf(5)).is_camina());
        assert!(!AlternatingMap::zero_map(gf(3), 2).is_camina());
    }

    #[test]
    fn quotient_by_zero_is_identity() {
        let b = AlternatingMap::full(4, gf(3));
        let q = b.quotient(&Subspace::zero(gf(3), 6)).unwrap();
        assert_eq!(q, b);
    }

    #[test]
    fn quotient_examples_keep_type() {
        let f = gf(3);
        let b = AlternatingMap::full(4, f);
        // the line through [a,b][c,d]
        let m = Subspace::line(&Vector::new(f, vec![1, 0, 0, 0, 0, 1]));
        let q = b.quotient(&m).unwrap();
        assert_eq!(q.dim_w(), 5);
        assert_eq!(q.conjugate_type(), [1, 27].into_iter().collect());
        // the plane through [a,b][c,d] and [a,c][b,d]^2, 2 being the
        // non-square mod 3
        let n = Subspace::from_rows(
            f,
            6,
            &[
                Vector::new(f, vec![1, 0, 0, 0, 0, 1]),
                Vector::new(f, vec![0, 1, 0, 0, 2, 0]),
            ],
        );
        let qn = b.quotient(&n).unwrap();
        assert_eq!(qn.dim_w(), 4);
        assert_eq!(qn.conjugate_type(), [1, 27].into_iter().collect());
    }

    #[test]
    fn quotient_breadth_matches_projected_adjoint() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let f = gf(3);
        let b = AlternatingMap::full(4, f);
        let u = Subspace::from_rows(
            f,
            6,
            &[
                Vector::new(f, vec![1, 0, 0, 0, 0, 1]),
                Vector::new(f, vec![0, 1, 0, 0, 2, 0]),
            ],
        );
        let q = b.quotient(&u).unwrap();
        let proj = b.quotient_projection(&u).unwrap();
        for _ in 0..100 {
            let x = Vector::new(f, (0..4).map(|_| rng.gen_range(0..3)).collect());
            let direct = q.breadth(&x);
            let via_projection = proj.mul(&b.adjoint(&x)).rank();
            assert_eq!(direct, via_projection);
        }
    }

    #[test]
    fn base_change_identity_and_swap() {
        let f = gf(3);
        let b = AlternatingMap::full(4, f);
        let (same, theta) = b.base_change(&Matrix::identity(f, 4)).unwrap();
        assert_eq!(same, b);
        assert_eq!(theta, Matrix::identity(f, 6));

        // swapping e_0 and e_1 negates the (0,1) coordinate and fixes (2,3)
        let swap = Matrix::permutation(f, &[1, 0, 2, 3]);
        let (_, theta) = b.base_change(&swap).unwrap();
        let e01 = Vector::basis(f, 6, 0);
        assert_eq!(theta.mul_vec(&e01), e01.scale(f.neg(1)));
        let e23 = Vector::basis(f, 6, 5);
        assert_eq!(theta.mul_vec(&e23), e23);
    }

    #[test]
    fn base_change_theta_is_wedge_square_on_full() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for p in [2u64, 3, 5] {
            let f = gf(p);
            let b = AlternatingMap::full(4, f);
            for _ in 0..30 {
                let phi = loop {
                    let cand = Matrix::from_fn(f, 4, 4, |_, _| rng.gen_range(0..p));
                    if cand.is_invertible() {
                        break cand;
                    }
                };
                let (_, theta) = b.base_change(&phi).unwrap();
                assert_eq!(theta, wedge_square(&phi));
                assert!(theta.is_invertible());
            }
        }
    }

    #[test]
    fn base_change_rejects_singular() {
        let f = gf(3);
        let b = AlternatingMap::full(4, f);
        let z = Matrix::zeros(f, 4, 4);
        assert_eq!(b.base_change(&z), Err(FormError::SingularBaseChange));
    }

    #[test]
    fn base_change_on_zero_map() {
        // trivial W still produces a (vacuous) induced map
        let f = gf(3);
        let z = AlternatingMap::zero_map(f, 3);
        let phi = Matrix::permutation(f, &[1, 2, 0]);
        let (changed, theta) = z.base_change(&phi).unwrap();
        assert_eq!(changed, z);
        assert_eq!(theta.rows(), 0);
    }

    #[test]
    fn base_change_preserves_type_and_camina() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let f = gf(3);
        let forms = [
            AlternatingMap::heisenberg(3, 2).unwrap(),
            AlternatingMap::full(4, f)
                .quotient(&Subspace::line(&Vector::new(f, vec![1, 0, 0, 0, 0, 1])))
                .unwrap(),
        ];
        for b in &forms {
            let n = b.dim_v();
            for _ in 0..25 {
                let phi = loop {
                    let cand = Matrix::from_fn(f, n, n, |_, _| rng.gen_range(0..3));
                    if cand.is_invertible() {
                        break cand;
                    }
                };
                match b.base_change(&phi) {
                    Ok((changed, _)) => {
                        assert_eq!(changed.conjugate_type(), b.conjugate_type());
                        assert_eq!(changed.is_camina(), b.is_camina());
                    }
                    Err(FormError::InconsistentInducedMap { .. }) => {
                        // phi does not stabilize the quotient kernel; the
                        // pulled-back form still has the same type
                        let cols: Vec<Vector> = (0..n).map(|j| phi.col(j)).collect();
                        let mut pairs = Vec::new();
                        for i in 0..n {
                            for j in i + 1..n {
                                pairs.push(b.evaluate(&cols[i], &cols[j]));
                            }
                        }
                        let changed =
                            AlternatingMap::new(f, n, b.dim_w(), pairs).unwrap();
                        assert_eq!(changed.conjugate_type(), b.conjugate_type());
                    }
                    Err(other) => panic!("unexpected error: {other}"),
                }
            }
        }
    }

    #[test]
    fn breadth_constant_on_lines() {
        let f = gf(5);
        let b = AlternatingMap::full(3, f);
        for x in projective_points(f, 3) {
            let base = b.breadth(&x);
            for c in 2..5 {
                assert_eq!(b.breadth(&x.scale(c)), base);
            }
        }
    }

    #[test]
    fn breadth_profiles() {
        let budgets = Budgets::default();
        let b42 = AlternatingMap::full(4, gf(2));
        assert_eq!(
            b42.breadth_profile(&budgets).unwrap().counts(),
            &[(3usize, 15u64)].into_iter().collect()
        );
        let z = AlternatingMap::zero_map(gf(3), 2);
        assert_eq!(
            z.breadth_profile(&budgets).unwrap().counts(),
            &[(0usize, 8u64)].into_iter().collect()
        );
        let h32 = AlternatingMap::heisenberg(3, 2).unwrap();
        assert_eq!(
            h32.breadth_profile(&budgets).unwrap().counts(),
            &[(2usize, 80u64)].into_iter().collect()
        );
    }

    #[test]
    fn breadth_profile_budget() {
        let b = AlternatingMap::full(4, gf(3));
        let tiny = Budgets::with_all(10);
        assert!(matches!(
            b.breadth_profile(&tiny),
            Err(FormError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn structure_constraints_on_known_groups() {
        let b = AlternatingMap::full(4, gf(3));
        let report = check_structure_constraints(&b);
        assert!(report.all_passed(), "{:?}", report.checks);
        // bound is tight here: dimW = 6 = 3*4/2
        assert!(report.checks[0].detail.contains("dimW = 6 <= b(b+1)/2 = 6"));

        let h = AlternatingMap::heisenberg(3, 3).unwrap();
        assert!(check_structure_constraints(&h).all_passed());

        let f = gf(3);
        let n = Subspace::from_rows(
            f,
            6,
            &[
                Vector::new(f, vec![1, 0, 0, 0, 0, 1]),
                Vector::new(f, vec![0, 1, 0, 0, 2, 0]),
            ],
        );
        let q = b.quotient(&n).unwrap();
        assert!(check_structure_constraints(&q).all_passed());
    }

    #[test]
    fn spanning_is_enforced() {
        let f = gf(3);
        // one generator pair, two-dimensional W, value only hits a line
        let pairs = vec![Vector::new(f, vec![1, 0])];
        assert!(matches!(
            AlternatingMap::new(f, 2, 2, pairs),
            Err(FormError::ValuesDoNotSpan { rank: 1, dim_w: 2 })
        ));
    }

    #[test]
    fn text_round_trip() {
        let forms = vec![
            AlternatingMap::full(4, gf(3)),
            AlternatingMap::heisenberg(2, 3).unwrap(),
            AlternatingMap::full(4, gf(3))
                .quotient(&Subspace::line(&Vector::new(gf(3), vec![1, 0, 0, 0, 0, 1])))
                .unwrap(),
        ];
        for b in forms {
            let text = b.to_text();
            let parsed = AlternatingMap::parse(&text).unwrap();
            assert_eq!(parsed, b);
            assert_eq!(parsed.to_text(), text);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(AlternatingMap::parse("").is_err());
        assert!(AlternatingMap::parse("4 2 1\n0 1 1\n").is_err()); // 4 not prime
        assert!(AlternatingMap::parse("3 2 1\n1 0 1\n").is_err()); // i >= j
        assert!(AlternatingMap::parse("3 2 1\n0 1 5\n").is_err()); // entry >= p
        assert!(AlternatingMap::parse("3 2 1\n0 1 1\n0 1 1\n").is_err()); // dup
    }

    #[test]
    fn fixture_text_is_canonical() {
        let text = "2 3 3\n0 1 1 0 0\n0 2 0 1 0\n1 2 0 0 1\n";
        let b = AlternatingMap::parse(text).unwrap();
        assert_eq!(b.to_text(), text);
        assert_eq!(b, AlternatingMap::full(3, gf(2)));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// A pseudo-random valid form: the universal map in scrambled
        /// coordinates, optionally quotiented by the line through one of
        /// its values.
        fn arb_form() -> impl Strategy<Value = AlternatingMap> {
            (
                prop_oneof![Just(2u64), Just(3), Just(5)],
                2usize..=4,
                any::<u64>(),
                proptest::bool::ANY,
            )
                .prop_map(|(p, n, seed, take_quotient)| {
                    let f = PrimeField::new(p).unwrap();
                    let full = AlternatingMap::full(n, f);
                    let mut s = seed;
                    let mut next = move || {
                        s = s.wrapping_mul(6364136223846793005).wrapping_add(97);
                        (s >> 33) % p
                    };
                    let phi = loop {
                        let cand = Matrix::from_fn(f, n, n, |_, _| next());
                        if cand.is_invertible() {
                            break cand;
                        }
                    };
                    let (scrambled, _) = full.base_change(&phi).expect("full always lifts");
                    if take_quotient && scrambled.dim_w() > 1 {
                        let line = Subspace::line(&scrambled.value(0, 1));
                        if line.dim() == 1 {
                            return scrambled.quotient(&line).expect("line sits in W");
                        }
                    }
                    scrambled
                })
        }

        proptest! {
            #[test]
            fn text_round_trip_is_exact(form in arb_form()) {
                let text = form.to_text();
                let parsed = AlternatingMap::parse(&text).unwrap();
                prop_assert_eq!(&parsed, &form);
                prop_assert_eq!(parsed.to_text(), text);
            }

            #[test]
            fn breadth_is_constant_on_lines(form in arb_form(), scale in 1u64..5) {
                let f = form.field();
                for x in projective_points(f, form.dim_v()) {
                    let c = 1 + scale % (f.p() - 1).max(1);
                    prop_assert_eq!(form.breadth(&x), form.breadth(&x.scale(c)));
                }
            }
        }
    }
}
