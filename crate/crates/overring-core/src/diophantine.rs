//! Linear Diophantine systems over the nonnegative integers with
//! congruence rows, their Hilbert bases, and the membership questions
//! over a finitely generated abelian group built on top of them.
//!
//! One completion kernel serves every predicate: a breadth-first search
//! computes the minimal nonnegative solutions of a homogeneous equation
//! system, expanding a frontier vector `t` by a unit vector `e_i` only
//! when the value vectors satisfy `<A*t, A*e_i> < 0`.  That geometric
//! restriction preserves completeness and guarantees termination.
//!
//! Congruence rows stay out of the lattice search wherever possible.
//! [`hilbert_basis`] lifts them with one nonnegative multiplier column
//! per row (coefficients reduced into `[0, d)` make the row sum
//! nonnegative, so a single `-d` column suffices) and re-minimalizes the
//! projections, which is exact because the solution monoid of a
//! congruence system is closed under subtraction within the
//! componentwise order.  Feasibility and the positive-multiple question
//! instead decompose: the exact rows contribute a Hilbert basis and a
//! finite set of minimal particular solutions (homogenization with the
//! extra coordinate capped at 1 — sound because the search path to a
//! minimal solution stays componentwise below it), while the congruence
//! rows only see images in a finite residue group, handled by
//! reachability closure over the generator images.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use thiserror::Error;

use crate::abelian::{AbelianError, FgAbelianGroup, GroupElement};
use crate::matrix::IntMat;
use crate::snf::smith_normal_form;

/// Default cap on frontier expansions for the completion procedure.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiophantineError {
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("step budget of {budget} frontier expansions exceeded")]
    ResourceExceeded { budget: u64 },
    #[error("coefficient out of range for the solver kernel")]
    Overflow,
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// Domain of a single variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarDomain {
    Nonnegative,
    FreeInteger,
}

/// `coeffs * v = target` row-wise, where a row with modulus 0 is an exact
/// equation over the integers and a row with modulus `d >= 2` is a
/// congruence mod `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    coeffs: Vec<Vec<BigInt>>,
    row_moduli: Vec<BigInt>,
    var_domains: Vec<VarDomain>,
    target: Vec<BigInt>,
}

impl LinearSystem {
    pub fn new(
        coeffs: Vec<Vec<BigInt>>,
        row_moduli: Vec<BigInt>,
        var_domains: Vec<VarDomain>,
        target: Vec<BigInt>,
    ) -> Result<Self, DiophantineError> {
        let p = coeffs.len();
        let q = var_domains.len();
        if row_moduli.len() != p || target.len() != p {
            return Err(DiophantineError::InvalidSystem(format!(
                "{} rows but {} moduli and {} target entries",
                p,
                row_moduli.len(),
                target.len()
            )));
        }
        for (i, row) in coeffs.iter().enumerate() {
            if row.len() != q {
                return Err(DiophantineError::InvalidSystem(format!(
                    "row {} has {} coefficients, expected {}",
                    i,
                    row.len(),
                    q
                )));
            }
        }
        for (i, d) in row_moduli.iter().enumerate() {
            if !d.is_zero() && *d < BigInt::from(2) {
                return Err(DiophantineError::InvalidSystem(format!(
                    "row modulus {} at row {} (must be 0 or >= 2)",
                    d, i
                )));
            }
        }
        Ok(LinearSystem {
            coeffs,
            row_moduli,
            var_domains,
            target,
        })
    }

    /// Homogeneous all-nonnegative system.
    pub fn homogeneous(
        coeffs: Vec<Vec<BigInt>>,
        row_moduli: Vec<BigInt>,
        num_vars: usize,
    ) -> Result<Self, DiophantineError> {
        let p = coeffs.len();
        LinearSystem::new(
            coeffs,
            row_moduli,
            vec![VarDomain::Nonnegative; num_vars],
            vec![BigInt::zero(); p],
        )
    }

    pub fn from_i64(
        coeffs: &[&[i64]],
        row_moduli: &[i64],
        var_domains: Vec<VarDomain>,
        target: &[i64],
    ) -> Result<Self, DiophantineError> {
        LinearSystem::new(
            coeffs
                .iter()
                .map(|r| r.iter().map(|&c| BigInt::from(c)).collect())
                .collect(),
            row_moduli.iter().map(|&d| BigInt::from(d)).collect(),
            var_domains,
            target.iter().map(|&t| BigInt::from(t)).collect(),
        )
    }

    pub fn num_rows(&self) -> usize {
        self.coeffs.len()
    }

    pub fn num_vars(&self) -> usize {
        self.var_domains.len()
    }

    pub fn coeffs(&self) -> &[Vec<BigInt>] {
        &self.coeffs
    }

    pub fn row_moduli(&self) -> &[BigInt] {
        &self.row_moduli
    }

    pub fn var_domains(&self) -> &[VarDomain] {
        &self.var_domains
    }

    pub fn target(&self) -> &[BigInt] {
        &self.target
    }

    pub fn is_homogeneous(&self) -> bool {
        self.target.iter().all(Zero::is_zero)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.var_domains
            .iter()
            .all(|d| *d == VarDomain::Nonnegative)
    }

    /// Whether `v` satisfies every row (exactly or modulo the row modulus)
    /// and respects the variable domains.
    pub fn is_solution(&self, v: &[BigInt]) -> bool {
        if v.len() != self.num_vars() {
            return false;
        }
        for (x, dom) in v.iter().zip(&self.var_domains) {
            if *dom == VarDomain::Nonnegative && x.is_negative() {
                return false;
            }
        }
        for (i, row) in self.coeffs.iter().enumerate() {
            let dot: BigInt = row.iter().zip(v).map(|(c, x)| c * x).sum();
            let residual = dot - &self.target[i];
            let d = &self.row_moduli[i];
            let ok = if d.is_zero() {
                residual.is_zero()
            } else {
                residual.mod_floor(d).is_zero()
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

/// The minimal generating set of the solution monoid of a homogeneous
/// system, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub generators: Vec<Vec<BigInt>>,
}

fn to_i64(x: &BigInt) -> Result<i64, DiophantineError> {
    x.to_i64().ok_or(DiophantineError::Overflow)
}

/// The completion kernel: minimal nonnegative solutions of `A v = 0`,
/// restricted to `v[i] <= caps[i]`.
///
/// A cap only suppresses expansions, and the completion lemma guarantees
/// that the search path to any minimal solution `m` stays componentwise
/// below `m`, so the result is exactly the set of minimal solutions
/// within the caps.
///
/// Machine integers suffice internally because every value is a small
/// combination of small inputs; all additions are overflow-checked and an
/// overflow surfaces as an explicit error rather than a wrong answer.
fn minimal_solutions(
    cols: &[Vec<i64>],
    caps: &[i64],
    budget: u64,
) -> Result<Vec<Vec<i64>>, DiophantineError> {
    let dims = cols.len();
    let p = cols.first().map_or(0, Vec::len);
    let mut basis: Vec<Vec<i64>> = Vec::new();
    let mut spent: u64 = 0;

    // frontier maps candidate vector -> value vector A*t
    let mut frontier: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    for i in 0..dims {
        if caps[i] < 1 {
            continue;
        }
        let mut t = vec![0i64; dims];
        t[i] = 1;
        frontier.insert(t, cols[i].clone());
    }

    while !frontier.is_empty() {
        // solutions of this level first, so that expansions below are
        // pruned against every solution of equal or smaller norm
        for (t, v) in &frontier {
            if v.iter().all(|&x| x == 0) {
                basis.push(t.clone());
            }
        }
        let mut next: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        for (t, v) in &frontier {
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            spent += 1;
            if spent > budget {
                return Err(DiophantineError::ResourceExceeded { budget });
            }
            for (i, col) in cols.iter().enumerate() {
                if t[i] >= caps[i] {
                    continue;
                }
                let product: i128 = v
                    .iter()
                    .zip(col)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum();
                if product >= 0 {
                    continue;
                }
                let mut t2 = t.clone();
                t2[i] = t2[i].checked_add(1).ok_or(DiophantineError::Overflow)?;
                if basis.iter().any(|b| b.iter().zip(&t2).all(|(x, y)| x <= y)) {
                    continue;
                }
                if next.contains_key(&t2) {
                    continue;
                }
                let mut v2 = vec![0i64; p];
                for k in 0..p {
                    v2[k] = v[k].checked_add(col[k]).ok_or(DiophantineError::Overflow)?;
                }
                next.insert(t2, v2);
            }
        }
        frontier = next;
    }
    basis.sort();
    Ok(basis)
}

/// Drops zero vectors and non-minimal vectors, deduplicates, sorts.
fn minimal_filter(mut vecs: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    vecs.sort();
    vecs.dedup();
    vecs.retain(|v| v.iter().any(|&x| x != 0));
    let keep: Vec<bool> = vecs
        .iter()
        .map(|v| {
            !vecs
                .iter()
                .any(|w| w != v && w.iter().zip(v).all(|(a, b)| a <= b))
        })
        .collect();
    vecs.into_iter()
        .zip(keep)
        .filter_map(|(v, k)| k.then_some(v))
        .collect()
}

/// Computes the Hilbert basis of a homogeneous system with all variables
/// nonnegative: the minimal generating set of
/// `{ v in N^q : coeffs * v = 0 row-wise (mod the row moduli) }`.
pub fn hilbert_basis(sys: &LinearSystem) -> Result<HilbertBasis, DiophantineError> {
    hilbert_basis_budgeted(sys, DEFAULT_BUDGET)
}

/// [`hilbert_basis`] with an explicit frontier-expansion budget.
pub fn hilbert_basis_budgeted(
    sys: &LinearSystem,
    budget: u64,
) -> Result<HilbertBasis, DiophantineError> {
    if !sys.is_homogeneous() {
        return Err(DiophantineError::InvalidSystem(
            "hilbert_basis requires a zero target vector".into(),
        ));
    }
    if !sys.all_nonnegative() {
        return Err(DiophantineError::InvalidSystem(
            "hilbert_basis requires all variables nonnegative; sign-split free variables first"
                .into(),
        ));
    }
    let q = sys.num_vars();
    let p = sys.num_rows();

    // Congruence-row coefficients are reduced into [0, d), which makes
    // each congruence row sum nonnegative over nonnegative variables, so
    // a single multiplier column -d per row lifts the congruence to an
    // exact equation.  The multipliers are projected away afterwards;
    // the solution monoid of a congruence system is closed under
    // subtraction within the componentwise order, so re-minimalizing the
    // projections yields exactly its Hilbert basis.
    let congruence_rows: Vec<usize> = (0..p).filter(|&i| !sys.row_moduli[i].is_zero()).collect();
    let total = q + congruence_rows.len();
    let mut cols: Vec<Vec<i64>> = vec![vec![0i64; p]; total];
    for (j, col) in cols.iter_mut().enumerate().take(q) {
        for (i, slot) in col.iter_mut().enumerate() {
            let c = to_i64(&sys.coeffs[i][j])?;
            *slot = if sys.row_moduli[i].is_zero() {
                c
            } else {
                c.rem_euclid(to_i64(&sys.row_moduli[i])?)
            };
        }
    }
    for (k, &row) in congruence_rows.iter().enumerate() {
        cols[q + k][row] = -to_i64(&sys.row_moduli[row])?;
    }

    let caps = vec![i64::MAX; total];
    let lifted = minimal_solutions(&cols, &caps, budget)?;
    let projected: Vec<Vec<i64>> = lifted.into_iter().map(|v| v[..q].to_vec()).collect();
    let generators = minimal_filter(projected)
        .into_iter()
        .map(|v| v.into_iter().map(BigInt::from).collect())
        .collect();
    Ok(HilbertBasis { generators })
}

/// Outcome of a nonnegative-feasibility question.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<BigInt>),
    Infeasible,
}

/// Decides whether `coeffs * v = target` (row-wise, with congruences)
/// admits a solution respecting the variable domains, and produces a
/// witness when it does.
pub fn solve_nonneg(sys: &LinearSystem) -> Result<Feasibility, DiophantineError> {
    solve_nonneg_budgeted(sys, DEFAULT_BUDGET)
}

pub fn solve_nonneg_budgeted(
    sys: &LinearSystem,
    budget: u64,
) -> Result<Feasibility, DiophantineError> {
    let p = sys.num_rows();
    let q = sys.num_vars();

    // sign-split free variables
    let mut split_cols: Vec<(usize, bool)> = Vec::new(); // (orig var, negated?)
    for (j, dom) in sys.var_domains.iter().enumerate() {
        split_cols.push((j, false));
        if *dom == VarDomain::FreeInteger {
            split_cols.push((j, true));
        }
    }
    let n = split_cols.len();
    let mut exact_cols: Vec<Vec<i64>> = vec![Vec::new(); n];
    let mut exact_targets: Vec<i64> = Vec::new();
    let mut cong_rows: Vec<Vec<i64>> = Vec::new();
    let mut cong_moduli: Vec<i64> = Vec::new();
    let mut cong_targets: Vec<i64> = Vec::new();
    for i in 0..p {
        let split_row: Vec<i64> = split_cols
            .iter()
            .map(|&(j, negated)| {
                let c = to_i64(&sys.coeffs[i][j])?;
                Ok(if negated { -c } else { c })
            })
            .collect::<Result<_, DiophantineError>>()?;
        let t = to_i64(&sys.target[i])?;
        if sys.row_moduli[i].is_zero() {
            for (col, c) in exact_cols.iter_mut().zip(&split_row) {
                col.push(*c);
            }
            exact_targets.push(t);
        } else {
            let d = to_i64(&sys.row_moduli[i])?;
            cong_rows.push(split_row.iter().map(|c| c.rem_euclid(d)).collect());
            cong_moduli.push(d);
            cong_targets.push(t.rem_euclid(d));
        }
    }

    let recombine = |v: &[i64]| -> Vec<BigInt> {
        let mut witness = vec![BigInt::zero(); q];
        for (k, &(j, negated)) in split_cols.iter().enumerate() {
            if negated {
                witness[j] -= BigInt::from(v[k]);
            } else {
                witness[j] += BigInt::from(v[k]);
            }
        }
        witness
    };

    match feasibility_search(
        &exact_cols,
        &exact_targets,
        &cong_rows,
        &cong_moduli,
        &cong_targets,
        budget,
    )? {
        Some(v) => {
            let witness = recombine(&v);
            debug_assert!(sys.is_solution(&witness));
            Ok(Feasibility::Feasible(witness))
        }
        None => Ok(Feasibility::Infeasible),
    }
}

/// A finite product of cyclic groups, used as the value space for the
/// torsion part of a decomposed system.
struct TorsionSpace {
    moduli: Vec<i64>,
}

impl TorsionSpace {
    fn size(&self) -> u64 {
        self.moduli
            .iter()
            .map(|&d| d as u64)
            .try_fold(1u64, u64::checked_mul)
            .unwrap_or(u64::MAX)
    }

    fn index(&self, residues: &[i64]) -> usize {
        let mut idx: usize = 0;
        for (r, &d) in residues.iter().zip(&self.moduli) {
            idx = idx * d as usize + *r as usize;
        }
        idx
    }

    fn zero(&self) -> Vec<i64> {
        vec![0; self.moduli.len()]
    }

    fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((x, y), &d)| (x + y).rem_euclid(d))
            .collect()
    }

    fn image(&self, rows: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
        rows.iter()
            .zip(&self.moduli)
            .map(|(row, &d)| {
                row.iter().zip(v).fold(0i64, |acc, (c, x)| {
                    (acc + c.rem_euclid(d) * x).rem_euclid(d)
                })
            })
            .collect()
    }
}

/// Feasibility of `exact_cols * v = exact_targets` and
/// `cong_rows * v = cong_targets mod cong_moduli` over nonnegative `v`.
///
/// Decomposition: the exact rows alone have a Hilbert basis `R` and a
/// finite set of minimal particular solutions, and every solution is
/// one particular solution plus a combination of `R`.  The congruence
/// rows only see the image of that combination in the finite group of
/// residues, so their contribution is a reachability closure over the
/// images of `R`, never part of the lattice search.
fn feasibility_search(
    exact_cols: &[Vec<i64>],
    exact_targets: &[i64],
    cong_rows: &[Vec<i64>],
    cong_moduli: &[i64],
    cong_targets: &[i64],
    budget: u64,
) -> Result<Option<Vec<i64>>, DiophantineError> {
    let n = exact_cols.len();
    let caps = vec![i64::MAX; n];

    // minimal particular solutions of the exact rows: homogenize with a
    // capped h column; the h = 1 slice is complete because the search
    // path to any minimal solution stays below it
    let mut lifted_cols: Vec<Vec<i64>> = exact_cols.to_vec();
    lifted_cols.push(exact_targets.iter().map(|t| -t).collect());
    let mut lifted_caps = vec![i64::MAX; n + 1];
    lifted_caps[n] = 1;
    let lifted = minimal_solutions(&lifted_cols, &lifted_caps, budget)?;
    let particulars: Vec<Vec<i64>> = lifted
        .into_iter()
        .filter(|v| v[n] == 1)
        .map(|v| v[..n].to_vec())
        .collect();
    if particulars.is_empty() {
        return Ok(None);
    }
    if cong_rows.is_empty() {
        return Ok(Some(particulars.into_iter().next().expect("nonempty")));
    }

    let space = TorsionSpace {
        moduli: cong_moduli.to_vec(),
    };
    let homogeneous = minimal_solutions(exact_cols, &caps, budget)?;

    // reachability closure of the generator images in the residue group,
    // with a witness combination per reached residue
    let size = space.size();
    if size > 4_000_000 {
        return Err(DiophantineError::InvalidSystem(format!(
            "congruence residue space of size {size} is too large for the feasibility search"
        )));
    }
    let size = size as usize;
    let mut combo: Vec<Option<Vec<i64>>> = vec![None; size];
    let zero_state = space.zero();
    combo[space.index(&zero_state)] = Some(vec![0; homogeneous.len()]);
    let mut queue = std::collections::VecDeque::from([zero_state]);
    let images: Vec<Vec<i64>> = homogeneous
        .iter()
        .map(|r| space.image(cong_rows, r))
        .collect();
    while let Some(state) = queue.pop_front() {
        let current = combo[space.index(&state)]
            .clone()
            .expect("queued states are reached");
        for (k, image) in images.iter().enumerate() {
            let next = space.add(&state, image);
            let slot = &mut combo[space.index(&next)];
            if slot.is_none() {
                let mut c = current.clone();
                c[k] += 1;
                *slot = Some(c);
                queue.push_back(next);
            }
        }
    }

    for particular in &particulars {
        let base = space.image(cong_rows, particular);
        let needed: Vec<i64> = cong_targets
            .iter()
            .zip(&base)
            .zip(cong_moduli)
            .map(|((t, b), d)| (t - b).rem_euclid(*d))
            .collect();
        if let Some(c) = &combo[space.index(&needed)] {
            let mut v = particular.clone();
            for (mult, r) in c.iter().zip(&homogeneous) {
                for (slot, x) in v.iter_mut().zip(r) {
                    *slot += mult * x;
                }
            }
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Result of a monoid-membership question `x in M(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoidMembership {
    /// `sum exponents[i] * T[i] = x` with nonnegative exponents.
    In {
        exponents: Vec<BigInt>,
    },
    NotIn,
}

/// Result of a subgroup-membership question `x in G(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupMembership {
    /// `sum coefficients[i] * T[i] = x` with integer coefficients.
    In {
        coefficients: Vec<BigInt>,
    },
    NotIn,
}

/// Rows, row moduli, and target of a system over group elements.
type ElementSystem = (Vec<Vec<BigInt>>, Vec<BigInt>, Vec<BigInt>);

/// Builds the rows of `sum_j v_j * t_j = x` over `g`: one exact row per
/// free coordinate, one congruence row per torsion factor.
fn element_equation(
    g: &FgAbelianGroup,
    t: &[GroupElement],
    x: &GroupElement,
) -> Result<ElementSystem, DiophantineError> {
    for e in t.iter().chain(std::iter::once(x)) {
        if !g.contains(e) {
            return Err(AbelianError::Shape("element does not belong to the group".into()).into());
        }
    }
    let rank = g.rank();
    let moduli = g.torsion_moduli();
    let mut coeffs = Vec::with_capacity(rank + moduli.len());
    let mut row_moduli = Vec::with_capacity(rank + moduli.len());
    let mut target = Vec::with_capacity(rank + moduli.len());
    for i in 0..rank {
        coeffs.push(t.iter().map(|e| e.free()[i].clone()).collect());
        row_moduli.push(BigInt::zero());
        target.push(x.free()[i].clone());
    }
    for (k, d) in moduli.iter().enumerate() {
        coeffs.push(t.iter().map(|e| e.torsion()[k].clone()).collect());
        row_moduli.push(d.clone());
        target.push(x.torsion()[k].clone());
    }
    Ok((coeffs, row_moduli, target))
}

/// Decides `x in M(T)`, the submonoid of `g` generated by `T`
/// (`M(empty) = {0}`).
pub fn monoid_membership(
    g: &FgAbelianGroup,
    t: &[GroupElement],
    x: &GroupElement,
) -> Result<MonoidMembership, DiophantineError> {
    monoid_membership_budgeted(g, t, x, DEFAULT_BUDGET)
}

pub fn monoid_membership_budgeted(
    g: &FgAbelianGroup,
    t: &[GroupElement],
    x: &GroupElement,
    budget: u64,
) -> Result<MonoidMembership, DiophantineError> {
    let (coeffs, row_moduli, target) = element_equation(g, t, x)?;
    let sys = LinearSystem::new(
        coeffs,
        row_moduli,
        vec![VarDomain::Nonnegative; t.len()],
        target,
    )?;
    match solve_nonneg_budgeted(&sys, budget)? {
        Feasibility::Feasible(exponents) => Ok(MonoidMembership::In { exponents }),
        Feasibility::Infeasible => Ok(MonoidMembership::NotIn),
    }
}

/// Decides `x in G(T)`, the subgroup of `g` generated by `T`
/// (`G(empty) = {0}`).  Always terminates: this is linear algebra over
/// the integers via Smith normal form, no search involved.
pub fn subgroup_membership(
    g: &FgAbelianGroup,
    t: &[GroupElement],
    x: &GroupElement,
) -> Result<SubgroupMembership, DiophantineError> {
    let (coeffs, row_moduli, target) = element_equation(g, t, x)?;
    let p = coeffs.len();
    let m = t.len();
    // integer matrix [T-columns | modulus columns]: congruence rows get a
    // dedicated column carrying their modulus
    let congruence_rows: Vec<usize> = (0..p).filter(|&i| !row_moduli[i].is_zero()).collect();
    let total = m + congruence_rows.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(p);
    for i in 0..p {
        let mut row = Vec::with_capacity(total);
        row.extend(coeffs[i].iter().cloned());
        for &cr in &congruence_rows {
            row.push(if cr == i {
                row_moduli[i].clone()
            } else {
                BigInt::zero()
            });
        }
        rows.push(row);
    }
    let mat = IntMat::from_rows(rows, total).expect("consistent row widths");
    let s = smith_normal_form(&mat);

    // solve D z = U b, then y = V z
    let ub: Vec<BigInt> = (0..p)
        .map(|i| {
            target
                .iter()
                .enumerate()
                .map(|(j, bj)| &s.u[(i, j)] * bj)
                .sum()
        })
        .collect();
    let diag = s.diagonal();
    let mut z = vec![BigInt::zero(); total];
    for (i, ubi) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !ubi.is_zero() {
                return Ok(SubgroupMembership::NotIn);
            }
        } else {
            let (quot, rem) = ubi.div_rem(&d);
            if !rem.is_zero() {
                return Ok(SubgroupMembership::NotIn);
            }
            z[i] = quot;
        }
    }
    let y: Vec<BigInt> = (0..total)
        .map(|i| z.iter().enumerate().map(|(k, zk)| &s.v[(i, k)] * zk).sum())
        .collect();
    let coefficients = y[..m].to_vec();
    // replay the certificate before handing it out
    debug_assert!({
        let mut acc = g.zero();
        for (c, e) in coefficients.iter().zip(t) {
            let term = g.scalar_mul(c, e).expect("shape checked");
            acc = g.add(&acc, &term).expect("shape checked");
        }
        acc == *x
    });
    Ok(SubgroupMembership::In { coefficients })
}

/// One generator of the intersection monoid `M(s1) ∩ G(s2)`, together
/// with the evidence for both memberships.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionGenerator {
    pub element: GroupElement,
    /// `element = sum monoid_exponents[i] * s1[i]`, nonnegative.
    pub monoid_exponents: Vec<BigInt>,
    /// `element = sum group_coefficients[j] * s2[j]`, integer.
    pub group_coefficients: Vec<BigInt>,
}

/// Linear conditions cutting out the subgroup `G(t)` inside `g`: a lift
/// `z` of an element satisfies `pi(z) in G(t)` iff `row . z = 0 mod mu`
/// for every returned `(row, mu)`, with `mu = 0` meaning exact equality
/// over the integers.
///
/// Via Smith normal form of the lattice spanned by the lifts of `t` and
/// the torsion relations: after the unimodular coordinate change the
/// lattice is diagonal, so membership is one divisibility condition per
/// coordinate.
fn subgroup_conditions(g: &FgAbelianGroup, t: &[GroupElement]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let rank = g.rank();
    let moduli = g.torsion_moduli();
    let m = g.dims();
    let mut lattice_rows: Vec<Vec<BigInt>> = t.iter().map(GroupElement::flat).collect();
    for (j, d) in moduli.iter().enumerate() {
        let mut row = vec![BigInt::zero(); m];
        row[rank + j] = d.clone();
        lattice_rows.push(row);
    }
    let nrows = lattice_rows.len();
    let b = IntMat::from_rows(lattice_rows, m).expect("flat coordinates have group width");
    let s = smith_normal_form(&b);
    let diag = s.diagonal();
    let mut rows = Vec::new();
    let mut out_moduli = Vec::new();
    for i in 0..m {
        let delta = diag
            .get(i)
            .filter(|_| i < nrows)
            .cloned()
            .unwrap_or_else(BigInt::zero);
        if delta.is_one() {
            continue;
        }
        // row i of V^T is column i of V
        let row: Vec<BigInt> = (0..m).map(|j| s.v[(j, i)].clone()).collect();
        rows.push(row);
        out_moduli.push(delta);
    }
    (rows, out_moduli)
}

/// Monoid generators of `M(s1) ∩ G(s2)` with membership evidence,
/// ordered by element.
///
/// The exponent vectors `u` with `sum u_i s1_i` in `G(s2)` form the
/// solution monoid of a homogeneous congruence system in the `u`
/// variables alone (the subgroup conditions composed with the `s1`
/// coordinates), so its Hilbert basis maps exactly onto a generating set
/// of the intersection.
pub fn intersection_generators_detailed(
    g: &FgAbelianGroup,
    s1: &[GroupElement],
    s2: &[GroupElement],
    budget: u64,
) -> Result<Vec<IntersectionGenerator>, DiophantineError> {
    for e in s1.iter().chain(s2) {
        if !g.contains(e) {
            return Err(AbelianError::Shape("element does not belong to the group".into()).into());
        }
    }
    let n1 = s1.len();
    let (cond_rows, cond_moduli) = subgroup_conditions(g, s2);
    let lifts: Vec<Vec<BigInt>> = s1.iter().map(GroupElement::flat).collect();
    let coeffs: Vec<Vec<BigInt>> = cond_rows
        .iter()
        .map(|row| {
            (0..n1)
                .map(|k| row.iter().zip(&lifts[k]).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    let sys = LinearSystem::homogeneous(coeffs, cond_moduli, n1)?;
    let basis = hilbert_basis_budgeted(&sys, budget)?;

    let mut out: Vec<IntersectionGenerator> = Vec::new();
    for gen in &basis.generators {
        let mut element = g.zero();
        for (u, e) in gen.iter().zip(s1) {
            let term = g.scalar_mul(u, e)?;
            element = g.add(&element, &term)?;
        }
        if element.is_zero() {
            continue;
        }
        if out.iter().any(|existing| existing.element == element) {
            continue;
        }
        let group_coefficients = match subgroup_membership(g, s2, &element)? {
            SubgroupMembership::In { coefficients } => coefficients,
            SubgroupMembership::NotIn => {
                unreachable!("subgroup conditions certified membership of {element}")
            }
        };
        out.push(IntersectionGenerator {
            element,
            monoid_exponents: gen.clone(),
            group_coefficients,
        });
    }
    out.sort_by(|a, b| a.element.cmp(&b.element));
    Ok(out)
}

/// Monoid generators of `M(s1) ∩ G(s2)`.
pub fn intersection_generators(
    g: &FgAbelianGroup,
    s1: &[GroupElement],
    s2: &[GroupElement],
) -> Result<Vec<GroupElement>, DiophantineError> {
    Ok(intersection_generators_detailed(g, s1, s2, DEFAULT_BUDGET)?
        .into_iter()
        .map(|gen| gen.element)
        .collect())
}

/// Result of the positive-multiple question `∃ n >= 1 : n*x in M(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PositiveMultiple {
    /// `n * x = sum exponents[i] * T[i]`, `n >= 1`, exponents nonnegative.
    Yes {
        n: BigInt,
        exponents: Vec<BigInt>,
    },
    No,
}

/// Decides whether some positive multiple of `x` lies in `M(T)`.
///
/// Complete: solve the homogeneous system `sum e_i T_i - n x = 0` over
/// `N^{|T|+1}`; the `n` coordinate of any solution is a sum of generator
/// `n` coordinates, so a solution with `n >= 1` exists iff some Hilbert
/// generator has `n >= 1`.  Returns the witness of smallest `n`.
pub fn exists_positive_multiple_in_monoid(
    g: &FgAbelianGroup,
    t: &[GroupElement],
    x: &GroupElement,
) -> Result<PositiveMultiple, DiophantineError> {
    exists_positive_multiple_in_monoid_budgeted(g, t, x, DEFAULT_BUDGET)
}

pub fn exists_positive_multiple_in_monoid_budgeted(
    g: &FgAbelianGroup,
    t: &[GroupElement],
    x: &GroupElement,
    budget: u64,
) -> Result<PositiveMultiple, DiophantineError> {
    for e in t.iter().chain(std::iter::once(x)) {
        if !g.contains(e) {
            return Err(AbelianError::Shape("element does not belong to the group".into()).into());
        }
    }
    let m = t.len();
    let nvars = m + 1; // exponents, then the multiplier n

    // exact part: sum e_j t_j - n x = 0 on the free coordinates
    let mut exact_cols: Vec<Vec<i64>> = vec![Vec::with_capacity(g.rank()); nvars];
    for i in 0..g.rank() {
        for (j, gen) in t.iter().enumerate() {
            exact_cols[j].push(to_i64(&gen.free()[i])?);
        }
        exact_cols[m].push(-to_i64(&x.free()[i])?);
    }
    let caps = vec![i64::MAX; nvars];
    let generators = minimal_solutions(&exact_cols, &caps, budget)?;

    let answer = |gen: &[i64]| PositiveMultiple::Yes {
        n: BigInt::from(gen[m]),
        exponents: gen[..m].iter().map(|&e| BigInt::from(e)).collect(),
    };

    if g.torsion_moduli().is_empty() {
        let best = generators
            .iter()
            .filter(|gen| gen[m] >= 1)
            .min_by(|a, b| a[m].cmp(&b[m]).then_with(|| a.cmp(b)));
        return Ok(best.map_or(PositiveMultiple::No, |gen| answer(gen)));
    }

    // torsion part: the total residue of a combination must vanish, and
    // the combination must use at least one generator with a positive
    // multiplier; shortest-total-multiplier search over the finite
    // residue group, states doubled by the "used a positive multiplier"
    // flag
    let moduli: Vec<i64> = g
        .torsion_moduli()
        .iter()
        .map(to_i64)
        .collect::<Result<_, _>>()?;
    let space = TorsionSpace { moduli };
    let size = space.size();
    if size > 4_000_000 {
        return Err(DiophantineError::InvalidSystem(format!(
            "torsion residue space of size {size} is too large for the multiple search"
        )));
    }
    let size = size as usize;
    let cong_rows: Vec<Vec<i64>> = (0..space.moduli.len())
        .map(|k| {
            let d = space.moduli[k];
            let mut row: Vec<i64> = t
                .iter()
                .map(|gen| to_i64(&gen.torsion()[k]).map(|c| c.rem_euclid(d)))
                .collect::<Result<_, _>>()?;
            row.push((-to_i64(&x.torsion()[k])?).rem_euclid(d));
            Ok::<_, DiophantineError>(row)
        })
        .collect::<Result<_, _>>()?;
    let images: Vec<Vec<i64>> = generators
        .iter()
        .map(|r| space.image(&cong_rows, r))
        .collect();

    #[derive(Clone, PartialEq, Eq)]
    struct Best {
        cost: i64,
        combo: Vec<i64>,
    }
    let better = |cand: &Best, cur: &Option<Best>| match cur {
        None => true,
        Some(b) => cand.cost < b.cost || (cand.cost == b.cost && cand.combo < b.combo),
    };
    // state = residue index * 2 + positive-multiplier flag
    let mut best: Vec<Option<Best>> = vec![None; size * 2];
    best[space.index(&space.zero()) * 2] = Some(Best {
        cost: 0,
        combo: vec![0; generators.len()],
    });
    loop {
        let mut changed = false;
        for idx in 0..size * 2 {
            let Some(cur) = best[idx].clone() else {
                continue;
            };
            let flag = idx % 2;
            let residues = decode_residues(idx / 2, &space);
            for (k, image) in images.iter().enumerate() {
                let next = space.add(&residues, image);
                let next_flag = if generators[k][m] >= 1 { 1 } else { flag };
                let next_idx = space.index(&next) * 2 + next_flag;
                let mut combo = cur.combo.clone();
                combo[k] += 1;
                let cand = Best {
                    cost: cur.cost + generators[k][m],
                    combo,
                };
                if better(&cand, &best[next_idx]) {
                    best[next_idx] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    match &best[space.index(&space.zero()) * 2 + 1] {
        None => Ok(PositiveMultiple::No),
        Some(b) => {
            let mut total = vec![0i64; nvars];
            for (mult, r) in b.combo.iter().zip(&generators) {
                for (slot, x) in total.iter_mut().zip(r) {
                    *slot += mult * x;
                }
            }
            debug_assert_eq!(total[m], b.cost);
            Ok(answer(&total))
        }
    }
}

fn decode_residues(mut idx: usize, space: &TorsionSpace) -> Vec<i64> {
    let mut out = vec![0i64; space.moduli.len()];
    for k in (0..space.moduli.len()).rev() {
        let d = space.moduli[k] as usize;
        out[k] = (idx % d) as i64;
        idx /= d;
    }
    out
}
