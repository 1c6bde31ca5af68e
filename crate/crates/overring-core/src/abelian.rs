//! Finitely generated abelian groups and exact element arithmetic.
//!
//! A group is `Z^rank + Z/d1 + ... + Z/dm` with every modulus at least 2.
//! Moduli are kept exactly as given on construction; [`FgAbelianGroup::normalized`]
//! produces the canonical invariant-factor form (divisibility chain)
//! through Smith normal form.  Elements store their torsion coordinates
//! reduced into `[0, d)`, so equality is plain coordinatewise equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::matrix::IntMat;
use crate::snf::smith_normal_form;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("invalid torsion modulus {0} (every modulus must be >= 2)")]
    InvalidModulus(BigInt),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// A finitely generated abelian group `Z^rank + Z/d1 + ... + Z/dm`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion_moduli: Vec<BigInt>,
}

/// An element of an [`FgAbelianGroup`]: a free integer vector followed by
/// torsion residues, each reduced into `[0, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    free: Vec<BigInt>,
    torsion: Vec<BigInt>,
}

/// The order of a group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl FgAbelianGroup {
    /// Builds a group from a rank and a list of torsion moduli, kept in
    /// the given order.
    pub fn new<I: Into<BigInt>>(rank: usize, torsion_moduli: Vec<I>) -> Result<Self, AbelianError> {
        let moduli: Vec<BigInt> = torsion_moduli.into_iter().map(Into::into).collect();
        for d in &moduli {
            if *d < BigInt::from(2) {
                return Err(AbelianError::InvalidModulus(d.clone()));
            }
        }
        Ok(FgAbelianGroup {
            rank,
            torsion_moduli: moduli,
        })
    }

    /// The infinite cyclic group `Z`.
    pub fn integers() -> Self {
        FgAbelianGroup {
            rank: 1,
            torsion_moduli: Vec::new(),
        }
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        FgAbelianGroup {
            rank: 0,
            torsion_moduli: Vec::new(),
        }
    }

    /// The finite cyclic group `Z/d`.
    pub fn cyclic<I: Into<BigInt>>(d: I) -> Result<Self, AbelianError> {
        FgAbelianGroup::new(0, vec![d])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion_moduli(&self) -> &[BigInt] {
        &self.torsion_moduli
    }

    /// Number of stored coordinates of an element: rank + #moduli.
    pub fn dims(&self) -> usize {
        self.rank + self.torsion_moduli.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion_moduli.is_empty()
    }

    /// True exactly when the group has no free part.
    pub fn is_torsion(&self) -> bool {
        self.rank == 0
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.rank],
            torsion: vec![BigInt::zero(); self.torsion_moduli.len()],
        }
    }

    /// Builds an element from free and torsion coordinates, reducing the
    /// torsion part into `[0, d)`.
    pub fn element(
        &self,
        free: Vec<BigInt>,
        torsion: Vec<BigInt>,
    ) -> Result<GroupElement, AbelianError> {
        if free.len() != self.rank || torsion.len() != self.torsion_moduli.len() {
            return Err(AbelianError::Shape(format!(
                "expected {} free and {} torsion coordinates, got {} and {}",
                self.rank,
                self.torsion_moduli.len(),
                free.len(),
                torsion.len()
            )));
        }
        let torsion = torsion
            .into_iter()
            .zip(&self.torsion_moduli)
            .map(|(x, d)| x.mod_floor(d))
            .collect();
        Ok(GroupElement { free, torsion })
    }

    /// Builds an element from one flat coordinate list, free part first.
    pub fn element_from_flat(&self, coords: &[i64]) -> Result<GroupElement, AbelianError> {
        if coords.len() != self.dims() {
            return Err(AbelianError::Shape(format!(
                "expected {} coordinates, got {}",
                self.dims(),
                coords.len()
            )));
        }
        let free = coords[..self.rank]
            .iter()
            .map(|&c| BigInt::from(c))
            .collect();
        let torsion = coords[self.rank..]
            .iter()
            .map(|&c| BigInt::from(c))
            .collect();
        self.element(free, torsion)
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.free.len() == self.rank && x.torsion.len() == self.torsion_moduli.len()
    }

    fn check(&self, x: &GroupElement) -> Result<(), AbelianError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(AbelianError::Shape(format!(
                "element with {} free / {} torsion coordinates does not belong to a group of shape {} / {}",
                x.free.len(),
                x.torsion.len(),
                self.rank,
                self.torsion_moduli.len()
            )))
        }
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, AbelianError> {
        self.check(x)?;
        self.check(y)?;
        let free = x.free.iter().zip(&y.free).map(|(a, b)| a + b).collect();
        let torsion = x
            .torsion
            .iter()
            .zip(&y.torsion)
            .zip(&self.torsion_moduli)
            .map(|((a, b), d)| (a + b).mod_floor(d))
            .collect();
        Ok(GroupElement { free, torsion })
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement, AbelianError> {
        self.check(x)?;
        let free = x.free.iter().map(|a| -a).collect();
        let torsion = x
            .torsion
            .iter()
            .zip(&self.torsion_moduli)
            .map(|(a, d)| (-a).mod_floor(d))
            .collect();
        Ok(GroupElement { free, torsion })
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, AbelianError> {
        let ny = self.neg(y)?;
        self.add(x, &ny)
    }

    pub fn scalar_mul(&self, n: &BigInt, x: &GroupElement) -> Result<GroupElement, AbelianError> {
        self.check(x)?;
        let free = x.free.iter().map(|a| a * n).collect();
        let torsion = x
            .torsion
            .iter()
            .zip(&self.torsion_moduli)
            .map(|(a, d)| (a * n).mod_floor(d))
            .collect();
        Ok(GroupElement { free, torsion })
    }

    /// The smallest `n >= 1` with `n*x = 0`, or [`Order::Infinite`] when
    /// the free part of `x` is nonzero.
    pub fn element_order(&self, x: &GroupElement) -> Result<Order, AbelianError> {
        self.check(x)?;
        if x.free.iter().any(|a| !a.is_zero()) {
            return Ok(Order::Infinite);
        }
        let mut order = BigInt::one();
        for (a, d) in x.torsion.iter().zip(&self.torsion_moduli) {
            let g = a.gcd(d);
            let component = d / g;
            order = order.lcm(&component);
        }
        Ok(Order::Finite(order))
    }

    /// Canonical generators: one per free factor and one per torsion
    /// factor, in coordinate order.
    pub fn canonical_generators(&self) -> Vec<GroupElement> {
        let mut gens = Vec::with_capacity(self.dims());
        for i in 0..self.rank {
            let mut z = self.zero();
            z.free[i] = BigInt::one();
            gens.push(z);
        }
        for j in 0..self.torsion_moduli.len() {
            let mut z = self.zero();
            z.torsion[j] = BigInt::one();
            gens.push(z);
        }
        gens
    }

    /// Canonical invariant-factor form of this group: same rank, moduli
    /// replaced by the invariant factors of the diagonal relation matrix.
    pub fn normalized(&self) -> FgAbelianGroup {
        let q = self.dims();
        let rows: Vec<Vec<BigInt>> = (0..self.torsion_moduli.len())
            .map(|j| {
                let mut row = vec![BigInt::zero(); q];
                row[self.rank + j] = self.torsion_moduli[j].clone();
                row
            })
            .collect();
        group_from_relations(q, rows)
            .expect("torsion relation rows always have the right width")
            .0
    }

    /// True when the two groups are isomorphic (equal canonical forms).
    pub fn is_isomorphic_to(&self, other: &FgAbelianGroup) -> bool {
        self.normalized() == other.normalized()
    }
}

impl GroupElement {
    pub fn free(&self) -> &[BigInt] {
        &self.free
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }

    /// Flat coordinate list, free part first.
    pub fn flat(&self) -> Vec<BigInt> {
        self.free.iter().chain(&self.torsion).cloned().collect()
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let coords: Vec<String> = self.flat().iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", coords.join(","))
    }
}

impl std::fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion_moduli {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Maps exponent vectors over the original generators of a presentation
/// onto elements of the presented group.
#[derive(Clone, Debug)]
pub struct GeneratorProjection {
    /// Transpose of the column transform from the Smith decomposition.
    vt: IntMat,
    /// Per new coordinate: 0 for a free factor, the invariant factor
    /// otherwise (entries equal to 1 are dropped coordinates).
    diag: Vec<BigInt>,
    group: FgAbelianGroup,
}

impl GeneratorProjection {
    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    /// Image of a generator-exponent vector in the presented group.
    pub fn project(&self, exponents: &[BigInt]) -> Result<GroupElement, AbelianError> {
        let q = self.vt.nrows();
        if exponents.len() != q {
            return Err(AbelianError::Shape(format!(
                "expected {} generator exponents, got {}",
                q,
                exponents.len()
            )));
        }
        let mut free = Vec::with_capacity(self.group.rank());
        let mut torsion = Vec::with_capacity(self.group.torsion_moduli().len());
        for i in 0..q {
            let mut z = BigInt::zero();
            for (j, e) in exponents.iter().enumerate() {
                z += &self.vt[(i, j)] * e;
            }
            if self.diag[i].is_zero() {
                free.push(z);
            } else if self.diag[i] > BigInt::one() {
                torsion.push(z);
            }
        }
        self.group.element(free, torsion)
    }

    pub fn project_i64(&self, exponents: &[i64]) -> Result<GroupElement, AbelianError> {
        let exps: Vec<BigInt> = exponents.iter().map(|&e| BigInt::from(e)).collect();
        self.project(&exps)
    }
}

/// Presents `Z^num_generators` modulo the row span of `relations` and
/// returns the quotient group in canonical invariant-factor form together
/// with the projection of generator-exponent vectors.
pub fn group_from_relations(
    num_generators: usize,
    relations: Vec<Vec<BigInt>>,
) -> Result<(FgAbelianGroup, GeneratorProjection), AbelianError> {
    for (i, row) in relations.iter().enumerate() {
        if row.len() != num_generators {
            return Err(AbelianError::Shape(format!(
                "relation {} has {} entries, expected {}",
                i,
                row.len(),
                num_generators
            )));
        }
    }
    let p = relations.len();
    let q = num_generators;
    let m = IntMat::from_rows(relations, q).expect("row widths checked above");
    let s = smith_normal_form(&m);

    let mut diag = vec![BigInt::zero(); q];
    for (i, d) in s.diagonal().into_iter().enumerate().take(p.min(q)) {
        diag[i] = d;
    }
    let rank = diag.iter().filter(|d| d.is_zero()).count();
    let moduli: Vec<BigInt> = diag
        .iter()
        .filter(|d| **d > BigInt::one())
        .cloned()
        .collect();
    let group = FgAbelianGroup::new(rank, moduli)?;
    let projection = GeneratorProjection {
        vt: s.v.transpose(),
        diag,
        group: group.clone(),
    };
    Ok((group, projection))
}
