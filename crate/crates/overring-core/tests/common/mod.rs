//! Test-side oracle: decides memberships in finitely generated monoids
//! and subgroups by exhaustive enumeration of elements, sharing no code
//! with the library's solver kernel.
//!
//! Membership `x in M(S)` is decided by a breadth-first closure of the
//! monoid inside a coordinate box: any representation of `x` can be
//! reordered so every partial sum stays within `|x| + rank * max|S|`
//! of the origin (a rearrangement bound), so a box with margin
//! [`MARGIN`] makes the enumeration conclusive for the queried element.
//! Torsion coordinates are finite and always enumerated in full.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use overring_core::abelian::{FgAbelianGroup, GroupElement};
use overring_core::dedekind::{
    AlmostWellCentered, AnalysisReport, Localization, OverringConfig, WellCentered,
};

/// Box margin covering partial-sum excursions: rank <= 2 and generator
/// coordinates bounded by 3 give a rearrangement bound of 6; 9 adds
/// headroom.
pub const MARGIN: i64 = 9;

/// Hard cap on enumerated states, to fail loudly instead of thrashing.
pub const STATE_CAP: usize = 8_000_000;

/// Plain machine-integer mirror of a group, free coordinates first.
#[derive(Clone, Debug)]
pub struct OracleGroup {
    pub rank: usize,
    pub moduli: Vec<i64>,
}

pub type Coords = Vec<i64>;

impl OracleGroup {
    pub fn of(g: &FgAbelianGroup) -> Self {
        OracleGroup {
            rank: g.rank(),
            moduli: g
                .torsion_moduli()
                .iter()
                .map(|d| d.to_i64().expect("desk-scale modulus"))
                .collect(),
        }
    }

    pub fn coords(&self, e: &GroupElement) -> Coords {
        e.flat()
            .iter()
            .map(|c| c.to_i64().expect("desk-scale coordinate"))
            .collect()
    }

    pub fn dims(&self) -> usize {
        self.rank + self.moduli.len()
    }

    pub fn zero(&self) -> Coords {
        vec![0; self.dims()]
    }

    pub fn reduce(&self, mut v: Coords) -> Coords {
        for (k, d) in self.moduli.iter().enumerate() {
            let slot = &mut v[self.rank + k];
            *slot = slot.rem_euclid(*d);
        }
        v
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Coords {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &[i64]) -> Coords {
        self.reduce(a.iter().map(|x| -x).collect())
    }

    pub fn smul(&self, n: i64, a: &[i64]) -> Coords {
        self.reduce(a.iter().map(|x| n * x).collect())
    }

    /// Largest absolute free coordinate.
    pub fn norm(&self, a: &[i64]) -> i64 {
        a[..self.rank].iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self, a: &[i64]) -> bool {
        a.iter().all(|&x| x == 0)
    }
}

/// A set of group elements with free coordinates confined to
/// `[-bound, bound]`, stored as one flat bitset.
pub struct BoxSet {
    rank: usize,
    moduli: Vec<i64>,
    bound: i64,
    bits: Vec<u64>,
}

impl BoxSet {
    pub fn new(g: &OracleGroup, bound: i64) -> BoxSet {
        let side = (2 * bound + 1) as usize;
        let mut states: usize = 1;
        for _ in 0..g.rank {
            states = states.checked_mul(side).expect("state space overflow");
        }
        for d in &g.moduli {
            states = states
                .checked_mul(*d as usize)
                .expect("state space overflow");
        }
        assert!(
            states <= STATE_CAP,
            "oracle box of {states} states exceeds the cap; bound {bound} too large"
        );
        BoxSet {
            rank: g.rank,
            moduli: g.moduli.clone(),
            bound,
            bits: vec![0u64; states.div_ceil(64)],
        }
    }

    fn index(&self, v: &[i64]) -> Option<usize> {
        let mut idx: usize = 0;
        for &c in &v[..self.rank] {
            if c.abs() > self.bound {
                return None;
            }
            idx = idx * (2 * self.bound + 1) as usize + (c + self.bound) as usize;
        }
        for (k, &d) in self.moduli.iter().enumerate() {
            idx = idx * d as usize + v[self.rank + k] as usize;
        }
        Some(idx)
    }

    pub fn insert(&mut self, v: &[i64]) -> bool {
        let idx = self.index(v).expect("insert outside the box");
        let word = idx / 64;
        let bit = 1u64 << (idx % 64);
        let fresh = self.bits[word] & bit == 0;
        self.bits[word] |= bit;
        fresh
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        match self.index(v) {
            Some(idx) => self.bits[idx / 64] & (1u64 << (idx % 64)) != 0,
            None => false,
        }
    }
}

/// Breadth-first closure of the monoid generated by `gens` (plus the
/// negated generators when `with_inverses`), confined to the box.
pub fn closure(g: &OracleGroup, gens: &[Coords], with_inverses: bool, bound: i64) -> BoxSet {
    let mut steps: Vec<Coords> = gens.to_vec();
    if with_inverses {
        steps.extend(gens.iter().map(|v| g.neg(v)));
    }
    let mut set = BoxSet::new(g, bound);
    let mut queue = std::collections::VecDeque::new();
    set.insert(&g.zero());
    queue.push_back(g.zero());
    while let Some(v) = queue.pop_front() {
        for s in &steps {
            let w = g.add(&v, s);
            if g.norm(&w) > bound {
                continue;
            }
            if set.insert(&w) {
                queue.push_back(w);
            }
        }
    }
    set
}

/// Exact membership `x in M(gens)` by exhaustive enumeration: the box is
/// sized from the query, so a miss is a genuine non-membership.
pub fn monoid_contains(g: &OracleGroup, gens: &[Coords], x: &[i64]) -> bool {
    let bound = g.norm(x) + MARGIN;
    closure(g, gens, false, bound).contains(x)
}

/// Exact membership `x in G(gens)`.
pub fn subgroup_contains(g: &OracleGroup, gens: &[Coords], x: &[i64]) -> bool {
    let bound = g.norm(x) + MARGIN;
    closure(g, gens, true, bound).contains(x)
}

/// All nonzero elements of `M(kept) ∩ G(inverted)` with free coordinates
/// bounded by `window`.
pub fn intersection_window(
    g: &OracleGroup,
    kept: &[Coords],
    inverted: &[Coords],
    window: i64,
) -> Vec<Coords> {
    let mk = closure(g, kept, false, window + MARGIN);
    let gi = closure(g, inverted, true, window + MARGIN);
    let mut out = Vec::new();
    enumerate_box(g, window, &mut |v| {
        if !g.is_zero(v) && mk.contains(v) && gi.contains(v) {
            out.push(v.to_vec());
        }
    });
    out
}

/// Visits every element with free coordinates in `[-bound, bound]`.
fn enumerate_box(g: &OracleGroup, bound: i64, visit: &mut impl FnMut(&[i64])) {
    let dims = g.dims();
    let mut v = vec![0i64; dims];
    for slot in v.iter_mut().take(g.rank) {
        *slot = -bound;
    }
    loop {
        visit(&v);
        let mut i = 0;
        loop {
            if i == dims {
                return;
            }
            v[i] += 1;
            let limit = if i < g.rank {
                bound
            } else {
                g.moduli[i - g.rank] - 1
            };
            if v[i] <= limit {
                break;
            }
            v[i] = if i < g.rank { -bound } else { 0 };
            i += 1;
        }
    }
}

/// True when `target` is NOT a nonnegative rational combination of the
/// free parts of `gens` — a necessary condition for any positive
/// multiple of the corresponding element to land in the monoid, checked
/// exactly with integer cross products (rank <= 2).
pub fn cone_excludes(g: &OracleGroup, gens: &[Coords], target: &[i64]) -> bool {
    let t: Vec<i64> = target[..g.rank].to_vec();
    if t.iter().all(|&c| c == 0) {
        return false;
    }
    let frees: Vec<Vec<i64>> = gens.iter().map(|v| v[..g.rank].to_vec()).collect();
    match g.rank {
        0 => false,
        1 => !frees
            .iter()
            .any(|f| f[0] != 0 && f[0].signum() == t[0].signum()),
        2 => {
            let cross = |a: &[i64], b: &[i64]| a[0] * b[1] - a[1] * b[0];
            let dot = |a: &[i64], b: &[i64]| a[0] * b[0] + a[1] * b[1];
            // single generators: t on the ray of f
            for f in &frees {
                if (f[0] != 0 || f[1] != 0) && cross(f, &t) == 0 && dot(f, &t) > 0 {
                    return false;
                }
            }
            // pairs: any cone point is a combination of two generators
            for (i, f) in frees.iter().enumerate() {
                for h in &frees[i + 1..] {
                    let det = cross(f, h);
                    if det == 0 {
                        continue;
                    }
                    // lambda1 = cross(t, h) / det, lambda2 = cross(f, t) / det
                    if cross(&t, h) * det.signum() >= 0 && cross(f, &t) * det.signum() >= 0 {
                        return false;
                    }
                }
            }
            true
        }
        _ => panic!("cone check implemented for rank <= 2 only"),
    }
}

/// Independent arithmetic replay: `sum coeffs[i] * gens[i] == x` in the
/// oracle's machine-integer arithmetic.
pub fn combination_equals(g: &OracleGroup, coeffs: &[BigInt], gens: &[Coords], x: &[i64]) -> bool {
    if coeffs.len() != gens.len() {
        return false;
    }
    let mut acc = g.zero();
    for (c, gen) in coeffs.iter().zip(gens) {
        let c = c.to_i64().expect("desk-scale coefficient");
        acc = g.add(&acc, &g.smul(c, gen));
    }
    acc == x
}

/// Window (in free-coordinate norm) of intersection elements checked
/// exhaustively, and the cap on multiples searched for them.
pub const WINDOW: i64 = 8;
pub const N_WINDOW: i64 = 32;

pub fn assert_chain(report: &AnalysisReport, context: &str) {
    let (loc, wc, awc) = report
        .verdict_triple()
        .unwrap_or_else(|| panic!("config did not validate: {context}"));
    assert!(
        !loc || wc,
        "localization without well-centeredness: {context}"
    );
    assert!(!wc || awc, "well-centered but not almost: {context}");
}

/// Full independent check of one report against the enumeration oracle:
/// the localization verdict is re-decided from scratch; every No-claim
/// is re-verified exactly (with a cone-exclusion check, or a bounded
/// consistency slice, for the unbounded multiple question); every
/// Yes-certificate is replayed arithmetically; and the window of small
/// intersection elements is checked exhaustively against the verdicts.
pub fn oracle_check(config: &OverringConfig, report: &AnalysisReport) {
    let context = format!("{config:?}");
    let og = OracleGroup::of(config.group());
    let kept: Vec<Coords> = config.kept_classes().iter().map(|c| og.coords(c)).collect();
    let inverted: Vec<Coords> = config
        .inverted_classes()
        .iter()
        .map(|c| og.coords(c))
        .collect();

    // localization: fully independent verdict
    let mut oracle_loc_witness = None;
    for c in &inverted {
        if !monoid_contains(&og, &inverted, &og.neg(c)) {
            oracle_loc_witness = Some(c.clone());
            break;
        }
    }
    match &report.localization {
        Some(Localization::Yes { certificates }) => {
            assert!(
                oracle_loc_witness.is_none(),
                "oracle refutes localization: {context}"
            );
            for cert in certificates {
                let class = og.coords(&cert.class);
                assert!(cert.exponents.iter().all(|e| !e.is_negative()));
                assert!(
                    combination_equals(&og, &cert.exponents, &inverted, &og.neg(&class)),
                    "localization certificate fails to replay: {context}"
                );
            }
        }
        Some(Localization::No { witness }) => {
            let w = og.coords(witness);
            assert_eq!(
                oracle_loc_witness.as_ref(),
                Some(&w),
                "localization witness mismatch: {context}"
            );
        }
        None => panic!("valid config without localization verdict: {context}"),
    }

    let window = intersection_window(&og, &kept, &inverted, WINDOW);

    match &report.well_centered {
        Some(WellCentered::Yes { certificates }) => {
            // every window element must be in -M(inverted), exactly
            let minv = closure(&og, &inverted, false, WINDOW + MARGIN);
            for x in &window {
                assert!(
                    minv.contains(&og.neg(x)),
                    "oracle refutes well-centeredness at {x:?}: {context}"
                );
            }
            for cert in certificates {
                let elem = og.coords(&cert.generator.element);
                assert!(
                    combination_equals(&og, &cert.generator.monoid_exponents, &kept, &elem),
                    "generator does not replay over kept classes: {context}"
                );
                assert!(
                    combination_equals(&og, &cert.exponents, &inverted, &og.neg(&elem)),
                    "well-centered certificate fails to replay: {context}"
                );
            }
        }
        Some(WellCentered::No { counterexample }) => {
            let elem = og.coords(&counterexample.element);
            assert!(counterexample
                .monoid_exponents
                .iter()
                .all(|e| !e.is_negative()));
            assert!(
                combination_equals(&og, &counterexample.monoid_exponents, &kept, &elem),
                "counterexample not in the kept monoid: {context}"
            );
            assert!(
                subgroup_contains(&og, &inverted, &elem),
                "counterexample not in the inverted subgroup: {context}"
            );
            assert!(
                !monoid_contains(&og, &inverted, &og.neg(&elem)),
                "oracle refutes the well-centered counterexample: {context}"
            );
        }
        None => panic!("valid config without well-centered verdict: {context}"),
    }

    match &report.almost_well_centered {
        Some(AlmostWellCentered::Yes { certificates }) => {
            if !window.is_empty() {
                let minv = closure(&og, &inverted, false, N_WINDOW * WINDOW + MARGIN);
                for x in &window {
                    let found = (1..=N_WINDOW).any(|n| minv.contains(&og.smul(n, &og.neg(x))));
                    assert!(
                        found,
                        "oracle finds no positive multiple for {x:?}: {context}"
                    );
                }
            }
            for cert in certificates {
                let elem = og.coords(&cert.generator.element);
                let n = cert.n.to_i64().expect("desk-scale multiple");
                assert!(n >= 1);
                assert!(
                    combination_equals(
                        &og,
                        &cert.exponents,
                        &inverted,
                        &og.smul(n, &og.neg(&elem))
                    ),
                    "multiple certificate fails to replay: {context}"
                );
            }
        }
        Some(AlmostWellCentered::No { counterexample }) => {
            let elem = og.coords(&counterexample.element);
            assert!(
                combination_equals(&og, &counterexample.monoid_exponents, &kept, &elem),
                "counterexample not in the kept monoid: {context}"
            );
            assert!(
                subgroup_contains(&og, &inverted, &elem),
                "counterexample not in the inverted subgroup: {context}"
            );
            let neg = og.neg(&elem);
            if cone_excludes(&og, &inverted, &neg) {
                // no positive rational multiple exists at all: confirmed
            } else {
                // consistency slice: no small multiple may work
                let norm = og.norm(&elem).max(1);
                let states_at = |b: i64| -> u64 {
                    let side = (2 * b + 1) as u64;
                    let mut s = 1u64;
                    for _ in 0..og.rank {
                        s = s.saturating_mul(side);
                    }
                    for d in &og.moduli {
                        s = s.saturating_mul(*d as u64);
                    }
                    s
                };
                let mut k = 8i64;
                while k > 1 && states_at(k * norm + MARGIN) > 4_000_000 {
                    k -= 1;
                }
                let minv = closure(&og, &inverted, false, k * norm + MARGIN);
                for n in 1..=k {
                    assert!(
                        !minv.contains(&og.smul(n, &neg)),
                        "oracle finds multiple n={n} for claimed counterexample: {context}"
                    );
                }
            }
        }
        None => panic!("valid config without almost-well-centered verdict: {context}"),
    }

    assert_chain(report, &context);
}
