//! Reduction of central subspaces of the universal form to canonical shape.
//!
//! For the universal map B on n generators, W is the second exterior power
//! of V and every invertible map on V acts on W through its wedge square.
//! Quotients of the group by central subspaces U and U' are isoclinic
//! exactly when some wedge square carries U to U'. The reducers here decide,
//! for a line or a plane inside W, whether the quotient keeps the uniform
//! conjugate type {1, p^(n-1)}:
//!
//! * on success they return the canonical subspace together with the base
//!   change realizing it (built step by step from generator substitutions:
//!   permutations, scalings, and shears);
//! * on failure they return a commuting-pair witness (x, y): independent
//!   vectors with B(x, y) inside the subspace, which forces a short
//!   conjugacy class in the quotient.
//!
//! Both answers are machine-checked at construction, so a returned value is
//! self-certifying.

use thiserror::Error;

use crate::field::PrimeField;
use crate::form::{pair_count, pair_index, wedge_square, AlternatingMap};
use crate::linalg::{Matrix, Subspace, Vector};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CanonError {
    #[error("the reducer needs the universal form in standard coordinates")]
    NotFullForm,
    #[error("expected a subspace of dimension {expected}, got {got}")]
    WrongSubspaceDim { expected: usize, got: usize },
    #[error("subspace lives in dimension {got}, the form's W has dimension {expected}")]
    WrongAmbient { expected: usize, got: usize },
    #[error("line reduction needs at least four generators, got {got}")]
    TooFewGenerators { got: usize },
    #[error("plane reduction is specific to four generators, got {got}")]
    NotFourGenerators { got: usize },
    #[error("this reducer handles odd p; route p = 2 to the GF(2) variant")]
    WantOddPrime,
    #[error("this reducer handles p = 2 only")]
    WantCharTwo,
    #[error("subspace field does not match the form")]
    FieldMismatch,
}

/// A commuting pair certifying that the quotient type degenerates:
/// independent x, y with B(x, y) a nonzero element of the subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub x: Vector,
    pub y: Vector,
    /// B(x, y), which lies in the rejected subspace.
    pub value: Vector,
}

/// A successful reduction: the canonical subspace, the base change on V
/// realizing it, and the induced wedge-square action on W.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonSuccess {
    pub subspace: Subspace,
    pub transform: Matrix,
    pub theta: Matrix,
    /// Number of blocks in the canonical line generator; absent for planes.
    pub m_value: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonResult {
    Canonical(CanonSuccess),
    Rejected(Witness),
}

impl CanonResult {
    pub fn is_canonical(&self) -> bool {
        matches!(self, CanonResult::Canonical(_))
    }

    fn canonical_checked(
        input: &Subspace,
        transform: Matrix,
        expected: Subspace,
        m_value: Option<usize>,
    ) -> CanonResult {
        assert!(transform.is_invertible(), "reduction transform degenerated");
        let theta = wedge_square(&transform);
        assert_eq!(
            input.map(&theta),
            expected,
            "the induced map must carry the input to the canonical subspace"
        );
        CanonResult::Canonical(CanonSuccess {
            subspace: expected,
            transform,
            theta,
            m_value,
        })
    }

    fn rejected_checked(
        form: &AlternatingMap,
        input: &Subspace,
        x: Vector,
        y: Vector,
    ) -> CanonResult {
        let value = form.evaluate(&x, &y);
        assert!(!value.is_zero(), "witness pair must not commute upstairs");
        assert!(
            input.contains(&value),
            "witness commutator must land in the subspace"
        );
        let indep = Matrix::from_rows(x.field(), &[x.clone(), y.clone()]).rank() == 2;
        assert!(indep, "witness vectors must be independent");
        CanonResult::Rejected(Witness { x, y, value })
    }
}

/// The canonical line generator e01 + e23 + ... over m blocks.
pub fn canonical_line(field: PrimeField, n: usize, m: usize) -> Subspace {
    let mut g = Vector::zero(field, pair_count(n));
    for t in 0..m {
        g.set(pair_index(n, 2 * t, 2 * t + 1), 1);
    }
    Subspace::line(&g)
}

/// The canonical plane for odd p: spanned by e01 + e23 and e02 + r e13 with
/// r the least non-residue.
pub fn canonical_plane(field: PrimeField) -> Subspace {
    let r = field.smallest_nonsquare().expect("odd p");
    let g1 = Vector::new(field, vec![1, 0, 0, 0, 0, 1]);
    let mut g2 = Vector::zero(field, 6);
    g2.set(1, 1);
    g2.set(4, r);
    Subspace::from_rows(field, 6, &[g1, g2])
}

/// The canonical plane over GF(2): spanned by e01 + e23 and e02 + e13 + e23.
pub fn canonical_plane_gf2() -> Subspace {
    let field = PrimeField::new(2).unwrap();
    let g1 = Vector::new(field, vec![1, 0, 0, 0, 0, 1]);
    let g2 = Vector::new(field, vec![0, 1, 0, 0, 1, 1]);
    Subspace::from_rows(field, 6, &[g1, g2])
}

/// Accumulates generator substitutions left to right and mirrors their
/// wedge-square action on a tracked W-subspace.
struct Reducer {
    n: usize,
    phi: Matrix,
    space: Subspace,
}

impl Reducer {
    fn new(n: usize, space: Subspace) -> Self {
        Reducer {
            n,
            phi: Matrix::identity(space.field(), n),
            space,
        }
    }

    fn apply(&mut self, step: Matrix) {
        debug_assert!(step.is_invertible());
        self.space = self.space.map(&wedge_square(&step));
        self.phi = step.mul(&self.phi);
    }

    /// Pulls a vector of the current coordinates back to input coordinates.
    fn pull_back(&self, v: &Vector) -> Vector {
        self.phi
            .inverse()
            .expect("accumulated transform is invertible")
            .mul_vec(v)
    }

    fn identity_step(&self) -> Matrix {
        Matrix::identity(self.space.field(), self.n)
    }
}

fn check_subspace(
    form: &AlternatingMap,
    subspace: &Subspace,
    dim: usize,
) -> Result<(), CanonError> {
    if !form.is_full() {
        return Err(CanonError::NotFullForm);
    }
    if subspace.field() != form.field() {
        return Err(CanonError::FieldMismatch);
    }
    if subspace.ambient() != form.dim_w() {
        return Err(CanonError::WrongAmbient {
            expected: form.dim_w(),
            got: subspace.ambient(),
        });
    }
    if subspace.dim() != dim {
        return Err(CanonError::WrongSubspaceDim {
            expected: dim,
            got: subspace.dim(),
        });
    }
    Ok(())
}

/// Reduces a central line of the universal form on n >= 4 generators.
///
/// The generator is a bivector; repeated block reduction brings it to
/// e01 + e23 + ... + e_{2m-2,2m-1}. The quotient keeps conjugate type
/// {1, p^(n-1)} exactly when m >= 2; a decomposable generator (m = 1) is
/// rejected with the pair that spans it.
pub fn canonicalize_line(
    form: &AlternatingMap,
    line: &Subspace,
) -> Result<CanonResult, CanonError> {
    check_subspace(form, line, 1)?;
    let n = form.dim_v();
    if n < 4 {
        return Err(CanonError::TooFewGenerators { got: n });
    }
    let f = form.field();
    let mut red = Reducer::new(n, line.clone());
    let mut blocks = 0usize;
    loop {
        let lo = 2 * blocks;
        if lo + 1 >= n {
            break;
        }
        let current = red.space.basis_row(0);
        // smallest remaining pair with a nonzero coefficient
        let mut pivot = None;
        'scan: for i in lo..n {
            for j in i + 1..n {
                if current.get(pair_index(n, i, j)) != 0 {
                    pivot = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = pivot else { break };

        if (i, j) != (lo, lo + 1) {
            // order-preserving relabel sending i -> lo, j -> lo + 1
            let mut perm = vec![usize::MAX; n];
            perm[i] = lo;
            perm[j] = lo + 1;
            let mut targets = (0..n).filter(|t| *t != lo && *t != lo + 1);
            for (s, slot) in perm.iter_mut().enumerate() {
                if *slot == usize::MAX {
                    *slot = targets.next().expect("counts match");
                    let _ = s;
                }
            }
            red.apply(Matrix::permutation(f, &perm));
        }

        let block_pair = pair_index(n, lo, lo + 1);
        let coeff = red.space.basis_row(0).get(block_pair);
        debug_assert_ne!(coeff, 0);
        if coeff != 1 {
            // the echelon basis renormalizes the generator for a line, so
            // a lingering non-unit coefficient only occurs past block 0;
            // rescale the second generator of the block
            let mut step = red.identity_step();
            step.set(lo + 1, lo + 1, f.inv(coeff).expect("nonzero"));
            red.apply(step);
        }

        // clear pairs (lo, j) for j >= lo + 2 through the second block label
        let current = red.space.basis_row(0);
        let mut step = red.identity_step();
        let mut dirty = false;
        for j in lo + 2..n {
            let c = current.get(pair_index(n, lo, j));
            if c != 0 {
                step.set(j, lo + 1, f.neg(c));
                dirty = true;
            }
        }
        if dirty {
            red.apply(step);
        }

        // clear pairs (lo + 1, j) for j >= lo + 2 through the first block label
        let current = red.space.basis_row(0);
        let mut step = red.identity_step();
        let mut dirty = false;
        for j in lo + 2..n {
            let c = current.get(pair_index(n, lo + 1, j));
            if c != 0 {
                step.set(j, lo, c);
                dirty = true;
            }
        }
        if dirty {
            red.apply(step);
        }

        blocks += 1;
    }
    assert!(blocks >= 1, "a line has a nonzero generator");

    if blocks == 1 {
        // decomposable generator: its two factors already commute downstairs
        let x = red.pull_back(&Vector::basis(f, n, 0));
        let y = red.pull_back(&Vector::basis(f, n, 1));
        return Ok(CanonResult::rejected_checked(form, line, x, y));
    }
    Ok(CanonResult::canonical_checked(
        line,
        red.phi.clone(),
        canonical_line(f, n, blocks),
        Some(blocks),
    ))
}

/// W coordinate labels for four generators a, b, c, d:
/// 0 = ab, 1 = ac, 2 = ad, 3 = bc, 4 = bd, 5 = cd.
const AB: usize = 0;
const AC: usize = 1;
const AD: usize = 2;
const BC: usize = 3;
const BD: usize = 4;
const CD: usize = 5;

enum Normalized {
    /// Both generators re-shaped to pivots {ab, ac}.
    Shaped(Reducer),
    /// The plane holds a pure basis bivector; the generator pair rejects it.
    PureReject(usize, usize),
}

/// Brings a plane to echelon pivots {ab, ac} by relabelling generators, the
/// shape the reduction chain consumes. The only planes that cannot be
/// re-shaped are those spanned by a complementary pure pair (such as ab and
/// cd); these contain a pure bivector and are rejected on the spot.
fn normalize_plane(plane: &Subspace, n4: usize) -> Normalized {
    let f = plane.field();
    // all 24 relabellings of the four generators, lexicographic
    let mut perms = Vec::with_capacity(24);
    for a in 0..4usize {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let perm = [a, b, c, d];
                    let mut seen = [false; 4];
                    perm.iter().for_each(|&t| seen[t] = true);
                    if seen.iter().all(|&s| s) {
                        perms.push(perm);
                    }
                }
            }
        }
    }
    for perm in &perms {
        let phi = Matrix::permutation(f, perm);
        let moved = plane.map(&wedge_square(&phi));
        if moved.pivots() == [AB, AC] {
            let mut red = Reducer::new(n4, plane.clone());
            red.apply(phi);
            return Normalized::Shaped(red);
        }
    }
    for i in 0..4usize {
        for j in i + 1..4 {
            let pure = Vector::basis(f, 6, pair_index(4, i, j));
            if plane.contains(&pure) {
                return Normalized::PureReject(i, j);
            }
        }
    }
    // a plane with no relabelling to pivots {ab, ac} is spanned by a pure
    // complementary pair, so the scan above always finds something
    unreachable!("every plane is shaped or holds a pure bivector")
}

struct PlaneGens {
    g1: Vector,
    g2: Vector,
}

fn plane_gens(red: &Reducer) -> PlaneGens {
    debug_assert_eq!(red.space.pivots(), [AB, AC]);
    PlaneGens {
        g1: red.space.basis_row(0),
        g2: red.space.basis_row(1),
    }
}

/// Runs the shared head of the plane reduction: clears the ad column, then
/// the bc/bd coefficients of the first generator, scales the cd coefficient
/// to one, and clears the bc coefficient of the second generator. Ends with
/// generators e01 + e23 and e02 + i1 e13 + i2 e23, i1 nonzero, or rejects.
enum ChainOutcome {
    Reduced { red: Reducer, i1: u64, i2: u64 },
    Reject(CanonResult),
}

fn reduce_plane_chain(
    form: &AlternatingMap,
    plane: &Subspace,
    mut red: Reducer,
) -> ChainOutcome {
    let f = plane.field();
    let e = |i: usize| Vector::basis(f, 4, i);

    // b -> b - g1[ad] d and c -> c - g2[ad] d
    let g = plane_gens(&red);
    if g.g1.get(AD) != 0 || g.g2.get(AD) != 0 {
        let mut step = red.identity_step();
        step.set(3, 1, f.neg(g.g1.get(AD)));
        step.set(3, 2, f.neg(g.g2.get(AD)));
        red.apply(step);
    }

    // a -> a + g1[bc] c + g1[bd] d
    let g = plane_gens(&red);
    if g.g1.get(BC) != 0 || g.g1.get(BD) != 0 {
        let mut step = red.identity_step();
        step.set(2, 0, g.g1.get(BC));
        step.set(3, 0, g.g1.get(BD));
        red.apply(step);
    }

    // first generator is now ab + i cd; i = 0 means a and b commute downstairs
    let g = plane_gens(&red);
    debug_assert!(g.g1.get(AC) == 0 && g.g1.get(AD) == 0);
    debug_assert!(g.g1.get(BC) == 0 && g.g1.get(BD) == 0);
    let i = g.g1.get(CD);
    if i == 0 {
        let x = red.pull_back(&e(0));
        let y = red.pull_back(&e(1));
        return ChainOutcome::Reject(CanonResult::rejected_checked(form, plane, x, y));
    }
    if i != 1 {
        let mut step = red.identity_step();
        step.set(3, 3, f.inv(i).expect("nonzero"));
        red.apply(step);
    }

    // second generator ac + j1 bc + j2 bd + j3 cd; j2 = 0 makes
    // a + j1 b - j3 d commute with c downstairs
    let g = plane_gens(&red);
    let j1 = g.g2.get(BC);
    let j2 = g.g2.get(BD);
    let j3 = g.g2.get(CD);
    if j2 == 0 {
        let mut x_up = e(0);
        x_up = x_up.add_scaled(&e(1), j1);
        x_up = x_up.add_scaled(&e(3), f.neg(j3));
        let x = red.pull_back(&x_up);
        let y = red.pull_back(&e(2));
        return ChainOutcome::Reject(CanonResult::rejected_checked(form, plane, x, y));
    }
    if j1 != 0 {
        // d -> d - (j1/j2) c clears the bc coefficient
        let mut step = red.identity_step();
        step.set(2, 3, f.neg(f.mul(j1, f.inv(j2).expect("nonzero"))));
        red.apply(step);
    }

    let g = plane_gens(&red);
    debug_assert_eq!(g.g1.entries(), &[1, 0, 0, 0, 0, 1]);
    debug_assert_eq!(g.g2.get(BC), 0);
    let i1 = g.g2.get(BD);
    let i2 = g.g2.get(CD);
    debug_assert_ne!(i1, 0);
    ChainOutcome::Reduced { red, i1, i2 }
}

/// Reduces a central plane of the universal form on four generators, odd p.
///
/// The quotient keeps conjugate type {1, p^3} exactly when, after the chain,
/// the residual parameters satisfy a quadratic with non-square discriminant;
/// the canonical representative is spanned by e01 + e23 and e02 + r e13 for
/// the least non-residue r. Rejections carry the commuting pair produced by
/// solving i1 k^2 - i2 k - 1 = 0.
pub fn canonicalize_plane(
    form: &AlternatingMap,
    plane: &Subspace,
) -> Result<CanonResult, CanonError> {
    check_subspace(form, plane, 2)?;
    let n = form.dim_v();
    if n != 4 {
        return Err(CanonError::NotFourGenerators { got: n });
    }
    let f = form.field();
    if f.p() == 2 {
        return Err(CanonError::WantOddPrime);
    }
    let e = |i: usize| Vector::basis(f, 4, i);

    let red = match normalize_plane(plane, n) {
        Normalized::Shaped(red) => red,
        Normalized::PureReject(i, j) => {
            return Ok(CanonResult::rejected_checked(form, plane, e(i), e(j)));
        }
    };
    let (mut red, i1, i2) = match reduce_plane_chain(form, plane, red) {
        ChainOutcome::Reject(result) => return Ok(result),
        ChainOutcome::Reduced { red, i1, i2 } => (red, i1, i2),
    };

    let disc = f.add(f.mul(i2, i2), f.mul(f.elem(4), i1));
    if f.is_square(disc).expect("odd p") {
        // a commuting pair exists: k solves i1 k^2 - i2 k - 1 = 0
        let k = (0..f.p())
            .find(|&k| {
                let quad = f.sub(f.mul(i1, f.mul(k, k)), f.add(f.mul(i2, k), 1));
                quad == 0
            })
            .expect("square discriminant with i1 nonzero has a root");
        let j = f.neg(f.mul(k, i1));
        let x = red.pull_back(&e(0).add_scaled(&e(3), j));
        let y = red.pull_back(&e(1).add_scaled(&e(2), k));
        return Ok(CanonResult::rejected_checked(form, plane, x, y));
    }

    let r = f.smallest_nonsquare().expect("odd p");
    if i2 != 0 {
        // a -> l a + t d, c -> t b + l c with t = i2/2, l^2 = disc / 4r
        let t = f.mul(i2, f.inv(2).expect("odd p"));
        let l_sq = f.mul(disc, f.inv(f.mul(f.elem(4), r)).expect("nonzero"));
        let l = f.sqrt(l_sq).expect("quotient of non-residues is a residue");
        let mut step = red.identity_step();
        step.set(0, 0, l);
        step.set(3, 0, t);
        step.set(1, 2, t);
        step.set(2, 2, l);
        red.apply(step);
    } else if i1 != r {
        // c -> c / l, d -> l d with l^2 = r / i1
        let l_sq = f.mul(r, f.inv(i1).expect("nonzero"));
        let l = f.sqrt(l_sq).expect("quotient of non-residues is a residue");
        let mut step = red.identity_step();
        step.set(2, 2, f.inv(l).expect("nonzero"));
        step.set(3, 3, l);
        red.apply(step);
    }

    Ok(CanonResult::canonical_checked(
        plane,
        red.phi.clone(),
        canonical_plane(f),
        None,
    ))
}

/// Reduces a central plane of the universal form on four generators over
/// GF(2). After the shared chain the two residual bits must both be one,
/// giving the unique canonical plane e01 + e23, e02 + e13 + e23; either bit
/// vanishing produces an explicit commuting pair.
pub fn canonicalize_plane_gf2(
    form: &AlternatingMap,
    plane: &Subspace,
) -> Result<CanonResult, CanonError> {
    check_subspace(form, plane, 2)?;
    let n = form.dim_v();
    if n != 4 {
        return Err(CanonError::NotFourGenerators { got: n });
    }
    let f = form.field();
    if f.p() != 2 {
        return Err(CanonError::WantCharTwo);
    }
    let e = |i: usize| Vector::basis(f, 4, i);

    let red = match normalize_plane(plane, n) {
        Normalized::Shaped(red) => red,
        Normalized::PureReject(i, j) => {
            return Ok(CanonResult::rejected_checked(form, plane, e(i), e(j)));
        }
    };
    let (red, i1, i2) = match reduce_plane_chain(form, plane, red) {
        ChainOutcome::Reject(result) => return Ok(result),
        ChainOutcome::Reduced { red, i1, i2 } => (red, i1, i2),
    };
    debug_assert_eq!(i1, 1);

    if i2 == 0 {
        // a + d commutes with b + c downstairs
        let x = red.pull_back(&e(0).add(&e(3)));
        let y = red.pull_back(&e(1).add(&e(2)));
        return Ok(CanonResult::rejected_checked(form, plane, x, y));
    }
    Ok(CanonResult::canonical_checked(
        plane,
        red.phi.clone(),
        canonical_plane_gf2(),
        None,
    ))
}
