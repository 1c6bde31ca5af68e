//! The overring model: a Dedekind domain `A` is represented by its class
//! group together with the ideal classes of the primes kept in the
//! overring `B` and the classes of the primes inverted by it.
//!
//! Only the class *sets* matter.  Every criterion decided here depends on
//! the kept-class set and the inverted-class set alone: a single prime of
//! class `c` already realizes every multiple `n*c` as the class of one of
//! its powers, so multiplicities of classes are irrelevant to the model.
//!
//! The three predicates, each with a replayable certificate or a concrete
//! counterexample:
//!
//! - localization: every inverted class `c` has `-c` in the monoid
//!   generated by the inverted classes (each inverted prime contains a
//!   principal ideal supported on inverted primes);
//! - well-centered: every generator of `M(kept) ∩ G(inverted)` lies in
//!   `-M(inverted)`;
//! - almost well-centered: every such generator has a positive integer
//!   multiple in `-M(inverted)`.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::abelian::{group_from_relations, AbelianError, FgAbelianGroup, GroupElement, Order};
use crate::diophantine::{
    exists_positive_multiple_in_monoid_budgeted, intersection_generators_detailed,
    monoid_membership_budgeted, subgroup_membership, DiophantineError, IntersectionGenerator,
    MonoidMembership, PositiveMultiple, SubgroupMembership, DEFAULT_BUDGET,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
    #[error("not realizable: canonical generator {missing} is not a nonnegative combination of the configured classes")]
    NotRealizable { missing: GroupElement },
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
}

/// Class data of an overring `B` of a Dedekind domain `A`:
/// the class group of `A`, the classes of primes kept in `B`, and the
/// classes of primes inverted by `B`.  Class sets are stored deduplicated
/// and sorted.  The `finitely_generated` flag records (semantics only)
/// that the inverted primes form a finite set, i.e. `B` is a finitely
/// generated `A`-algebra; it alters no predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverringConfig {
    group: FgAbelianGroup,
    kept_classes: Vec<GroupElement>,
    inverted_classes: Vec<GroupElement>,
    finitely_generated: Option<bool>,
}

impl OverringConfig {
    pub fn new(
        group: FgAbelianGroup,
        kept_classes: Vec<GroupElement>,
        inverted_classes: Vec<GroupElement>,
        finitely_generated: Option<bool>,
    ) -> Result<Self, ModelError> {
        for c in kept_classes.iter().chain(&inverted_classes) {
            if !group.contains(c) {
                return Err(AbelianError::Shape(
                    "class does not belong to the configured group".into(),
                )
                .into());
            }
        }
        let mut kept = kept_classes;
        kept.sort();
        kept.dedup();
        let mut inverted = inverted_classes;
        inverted.sort();
        inverted.dedup();
        Ok(OverringConfig {
            group,
            kept_classes: kept,
            inverted_classes: inverted,
            finitely_generated,
        })
    }

    /// Convenience constructor from flat coordinate lists.
    pub fn from_flat(
        group: FgAbelianGroup,
        kept: &[&[i64]],
        inverted: &[&[i64]],
        finitely_generated: Option<bool>,
    ) -> Result<Self, ModelError> {
        let kept = kept
            .iter()
            .map(|c| group.element_from_flat(c))
            .collect::<Result<Vec<_>, _>>()?;
        let inverted = inverted
            .iter()
            .map(|c| group.element_from_flat(c))
            .collect::<Result<Vec<_>, _>>()?;
        OverringConfig::new(group, kept, inverted, finitely_generated)
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn kept_classes(&self) -> &[GroupElement] {
        &self.kept_classes
    }

    pub fn inverted_classes(&self) -> &[GroupElement] {
        &self.inverted_classes
    }

    pub fn finitely_generated(&self) -> Option<bool> {
        self.finitely_generated
    }

    /// All configured classes (kept and inverted), deduplicated.
    pub fn all_classes(&self) -> Vec<GroupElement> {
        let mut all = self.kept_classes.clone();
        all.extend(self.inverted_classes.iter().cloned());
        all.sort();
        all.dedup();
        all
    }
}

/// A nonzero ideal of `A` supported on kept primes, recorded as labelled
/// prime powers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Divisor {
    entries: BTreeMap<String, (GroupElement, BigInt)>,
}

impl Divisor {
    pub fn new() -> Self {
        Divisor::default()
    }

    /// Adds a prime with the given class and positive exponent.
    pub fn insert(
        &mut self,
        label: impl Into<String>,
        class: GroupElement,
        exponent: BigInt,
    ) -> Result<(), ModelError> {
        if exponent < BigInt::one() {
            return Err(ModelError::InvalidDivisor(format!(
                "exponent {exponent} is not a positive integer"
            )));
        }
        self.entries.insert(label.into(), (class, exponent));
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &GroupElement, &BigInt)> {
        self.entries.iter().map(|(l, (c, e))| (l.as_str(), c, e))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Checks realizability: the configured classes must generate the class
/// group as a monoid, i.e. every canonical generator (both signs of each
/// free generator, each torsion generator) must be a nonnegative
/// combination of kept and inverted classes.
pub fn validate(config: &OverringConfig) -> Result<(), ModelError> {
    validate_budgeted(config, DEFAULT_BUDGET)
}

pub fn validate_budgeted(config: &OverringConfig, budget: u64) -> Result<(), ModelError> {
    let g = config.group();
    let all = config.all_classes();
    let mut required = Vec::new();
    for (i, gen) in g.canonical_generators().into_iter().enumerate() {
        if i < g.rank() {
            required.push(gen.clone());
            required.push(g.neg(&gen)?);
        } else {
            // torsion generators carry their inverses with them
            required.push(gen);
        }
    }
    for target in required {
        match monoid_membership_budgeted(g, &all, &target, budget)? {
            MonoidMembership::In { .. } => {}
            MonoidMembership::NotIn => {
                return Err(ModelError::NotRealizable { missing: target });
            }
        }
    }
    Ok(())
}

/// The ideal class of a divisor: the exponent-weighted sum of its prime
/// classes.  Every prime class must be a kept class of the config.
pub fn divisor_class(config: &OverringConfig, d: &Divisor) -> Result<GroupElement, ModelError> {
    let g = config.group();
    let mut acc = g.zero();
    for (label, class, exponent) in d.entries() {
        if !config.kept_classes.contains(class) {
            return Err(ModelError::InvalidDivisor(format!(
                "prime {label} has class {class}, which is not a kept class"
            )));
        }
        let term = g.scalar_mul(exponent, class)?;
        acc = g.add(&acc, &term)?;
    }
    Ok(acc)
}

/// Whether the extended ideal `IB` is principal in `B`, for `I` of class
/// `c`: equivalent to `c` lying in the subgroup generated by the
/// inverted classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrincipalInOverring {
    /// `c = sum coefficients[j] * inverted[j]`.
    Yes {
        coefficients: Vec<BigInt>,
    },
    No,
}

pub fn is_principal_in_overring(
    config: &OverringConfig,
    c: &GroupElement,
) -> Result<PrincipalInOverring, ModelError> {
    match subgroup_membership(config.group(), &config.inverted_classes, c)? {
        SubgroupMembership::In { coefficients } => Ok(PrincipalInOverring::Yes { coefficients }),
        SubgroupMembership::NotIn => Ok(PrincipalInOverring::No),
    }
}

/// Whether `IB` is the extension of a principal ideal of `A`, for `I` of
/// class `c`: equivalent to `-c` lying in the monoid generated by the
/// inverted classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionOfPrincipal {
    /// `-c = sum exponents[j] * inverted[j]` with nonnegative exponents.
    Yes {
        exponents: Vec<BigInt>,
    },
    No,
}

pub fn is_extension_of_principal(
    config: &OverringConfig,
    c: &GroupElement,
) -> Result<ExtensionOfPrincipal, ModelError> {
    let g = config.group();
    let neg = g.neg(c)?;
    match monoid_membership_budgeted(g, &config.inverted_classes, &neg, DEFAULT_BUDGET)? {
        MonoidMembership::In { exponents } => Ok(ExtensionOfPrincipal::Yes { exponents }),
        MonoidMembership::NotIn => Ok(ExtensionOfPrincipal::No),
    }
}

/// Evidence that one intersection generator lies in `-M(inverted)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCertificate {
    pub generator: IntersectionGenerator,
    /// `-generator.element = sum exponents[j] * inverted[j]`.
    pub exponents: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WellCentered {
    Yes {
        certificates: Vec<GeneratorCertificate>,
    },
    /// A member of `M(kept) ∩ G(inverted)` that is not in `-M(inverted)`.
    No {
        counterexample: IntersectionGenerator,
    },
}

impl WellCentered {
    pub fn is_yes(&self) -> bool {
        matches!(self, WellCentered::Yes { .. })
    }
}

/// Decides well-centeredness: `M(kept) ∩ G(inverted) ⊆ -M(inverted)`.
/// It suffices to check the monoid generators of the intersection, since
/// the right-hand side is closed under addition.
pub fn is_well_centered(config: &OverringConfig) -> Result<WellCentered, ModelError> {
    is_well_centered_budgeted(config, DEFAULT_BUDGET)
}

pub fn is_well_centered_budgeted(
    config: &OverringConfig,
    budget: u64,
) -> Result<WellCentered, ModelError> {
    let g = config.group();
    let gens = intersection_generators_detailed(
        g,
        &config.kept_classes,
        &config.inverted_classes,
        budget,
    )?;
    let mut certificates = Vec::with_capacity(gens.len());
    for gen in gens {
        let neg = g.neg(&gen.element)?;
        match monoid_membership_budgeted(g, &config.inverted_classes, &neg, budget)? {
            MonoidMembership::In { exponents } => {
                certificates.push(GeneratorCertificate {
                    generator: gen,
                    exponents,
                });
            }
            MonoidMembership::NotIn => {
                return Ok(WellCentered::No {
                    counterexample: gen,
                });
            }
        }
    }
    Ok(WellCentered::Yes { certificates })
}

/// Evidence that one intersection generator has a positive multiple in
/// `-M(inverted)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipleCertificate {
    pub generator: IntersectionGenerator,
    pub n: BigInt,
    /// `-n * generator.element = sum exponents[j] * inverted[j]`.
    pub exponents: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlmostWellCentered {
    Yes {
        certificates: Vec<MultipleCertificate>,
    },
    No {
        counterexample: IntersectionGenerator,
    },
}

impl AlmostWellCentered {
    pub fn is_yes(&self) -> bool {
        matches!(self, AlmostWellCentered::Yes { .. })
    }
}

/// Decides almost-well-centeredness: every element of
/// `M(kept) ∩ G(inverted)` has a positive integer multiple in
/// `-M(inverted)`.  Checking generators suffices: for a sum take the lcm
/// of the generator multiples.
pub fn is_almost_well_centered(config: &OverringConfig) -> Result<AlmostWellCentered, ModelError> {
    is_almost_well_centered_budgeted(config, DEFAULT_BUDGET)
}

pub fn is_almost_well_centered_budgeted(
    config: &OverringConfig,
    budget: u64,
) -> Result<AlmostWellCentered, ModelError> {
    let g = config.group();
    let gens = intersection_generators_detailed(
        g,
        &config.kept_classes,
        &config.inverted_classes,
        budget,
    )?;
    let mut certificates = Vec::with_capacity(gens.len());
    for gen in gens {
        let neg = g.neg(&gen.element)?;
        match exists_positive_multiple_in_monoid_budgeted(
            g,
            &config.inverted_classes,
            &neg,
            budget,
        )? {
            PositiveMultiple::Yes { n, exponents } => {
                certificates.push(MultipleCertificate {
                    generator: gen,
                    n,
                    exponents,
                });
            }
            PositiveMultiple::No => {
                return Ok(AlmostWellCentered::No {
                    counterexample: gen,
                });
            }
        }
    }
    Ok(AlmostWellCentered::Yes { certificates })
}

/// Evidence that one inverted class `c` has `-c` in `M(inverted)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCertificate {
    pub class: GroupElement,
    /// `-class = sum exponents[j] * inverted[j]`.
    pub exponents: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Localization {
    Yes { certificates: Vec<ClassCertificate> },
    No { witness: GroupElement },
}

impl Localization {
    pub fn is_yes(&self) -> bool {
        matches!(self, Localization::Yes { .. })
    }
}

/// Decides whether `B` is a localization of `A`: for every inverted
/// class `c`, `-c` must lie in `M(inverted)` (every inverted prime then
/// meets the multiplicative set `A` minus the union of kept primes).
pub fn is_localization(config: &OverringConfig) -> Result<Localization, ModelError> {
    is_localization_budgeted(config, DEFAULT_BUDGET)
}

pub fn is_localization_budgeted(
    config: &OverringConfig,
    budget: u64,
) -> Result<Localization, ModelError> {
    let g = config.group();
    let mut certificates = Vec::with_capacity(config.inverted_classes.len());
    for c in &config.inverted_classes {
        let neg = g.neg(c)?;
        match monoid_membership_budgeted(g, &config.inverted_classes, &neg, budget)? {
            MonoidMembership::In { exponents } => {
                certificates.push(ClassCertificate {
                    class: c.clone(),
                    exponents,
                });
            }
            MonoidMembership::NotIn => {
                return Ok(Localization::No { witness: c.clone() });
            }
        }
    }
    Ok(Localization::Yes { certificates })
}

/// Class group of the overring: the quotient of the class group by the
/// subgroup generated by the inverted classes, in canonical
/// invariant-factor form.
pub fn overring_class_group(config: &OverringConfig) -> FgAbelianGroup {
    let g = config.group();
    let rank = g.rank();
    let moduli = g.torsion_moduli();
    let q = g.dims();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (j, d) in moduli.iter().enumerate() {
        let mut row = vec![BigInt::from(0); q];
        row[rank + j] = d.clone();
        rows.push(row);
    }
    for c in &config.inverted_classes {
        rows.push(c.flat());
    }
    group_from_relations(q, rows)
        .expect("relation rows constructed with matching width")
        .0
}

/// In a Dedekind domain a prime is the radical of a principal ideal
/// exactly when some power of it is principal, i.e. when its class has
/// finite order.
pub fn prime_class_is_radical_of_principal(g: &FgAbelianGroup, c: &GroupElement) -> bool {
    matches!(g.element_order(c), Ok(Order::Finite(_)))
}

/// Aggregate result of [`classify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub valid: bool,
    /// First canonical generator missing from the class monoid, when the
    /// config is not realizable.
    pub not_realizable: Option<GroupElement>,
    pub localization: Option<Localization>,
    pub well_centered: Option<WellCentered>,
    pub almost_well_centered: Option<AlmostWellCentered>,
    pub overring_class_group: Option<FgAbelianGroup>,
    pub is_pid: Option<bool>,
}

impl AnalysisReport {
    pub fn verdict_triple(&self) -> Option<(bool, bool, bool)> {
        Some((
            self.localization.as_ref()?.is_yes(),
            self.well_centered.as_ref()?.is_yes(),
            self.almost_well_centered.as_ref()?.is_yes(),
        ))
    }
}

/// Runs validation and all predicates over a config.
///
/// An unreal config yields `valid = false` and no predicate results; a
/// budget exhaustion surfaces as an error rather than a wrong verdict.
pub fn classify(config: &OverringConfig) -> Result<AnalysisReport, ModelError> {
    classify_budgeted(config, DEFAULT_BUDGET)
}

pub fn classify_budgeted(
    config: &OverringConfig,
    budget: u64,
) -> Result<AnalysisReport, ModelError> {
    match validate_budgeted(config, budget) {
        Ok(()) => {}
        Err(ModelError::NotRealizable { missing }) => {
            return Ok(AnalysisReport {
                valid: false,
                not_realizable: Some(missing),
                localization: None,
                well_centered: None,
                almost_well_centered: None,
                overring_class_group: None,
                is_pid: None,
            })
        }
        Err(e) => return Err(e),
    }
    let localization = is_localization_budgeted(config, budget)?;
    let well_centered = is_well_centered_budgeted(config, budget)?;
    let almost = is_almost_well_centered_budgeted(config, budget)?;
    let quotient = overring_class_group(config);
    let is_pid = quotient.is_trivial();
    Ok(AnalysisReport {
        valid: true,
        not_realizable: None,
        localization: Some(localization),
        well_centered: Some(well_centered),
        almost_well_centered: Some(almost),
        overring_class_group: Some(quotient),
        is_pid: Some(is_pid),
    })
}

/// Replays every certificate and counterexample of a report under plain
/// group arithmetic.  Returns an error naming the first certificate that
/// fails to replay.
pub fn replay_report(config: &OverringConfig, report: &AnalysisReport) -> Result<(), String> {
    let g = config.group();
    let combine = |coeffs: &[BigInt], gens: &[GroupElement]| -> Result<GroupElement, String> {
        if coeffs.len() != gens.len() {
            return Err("certificate length mismatch".into());
        }
        let mut acc = g.zero();
        for (c, e) in coeffs.iter().zip(gens) {
            let term = g.scalar_mul(c, e).map_err(|e| e.to_string())?;
            acc = g.add(&acc, &term).map_err(|e| e.to_string())?;
        }
        Ok(acc)
    };
    let check_generator = |gen: &IntersectionGenerator| -> Result<(), String> {
        if gen.monoid_exponents.iter().any(|e| e.is_negative()) {
            return Err("negative monoid exponent".into());
        }
        let via_kept = combine(&gen.monoid_exponents, config.kept_classes())?;
        if via_kept != gen.element {
            return Err(format!(
                "generator {} does not replay over kept classes",
                gen.element
            ));
        }
        let via_inverted = combine(&gen.group_coefficients, config.inverted_classes())?;
        if via_inverted != gen.element {
            return Err(format!(
                "generator {} does not replay over inverted classes",
                gen.element
            ));
        }
        Ok(())
    };

    if let Some(Localization::Yes { certificates }) = &report.localization {
        for cert in certificates {
            if !config.inverted_classes().contains(&cert.class) {
                return Err(format!("{} is not an inverted class", cert.class));
            }
            if cert.exponents.iter().any(|e| e.is_negative()) {
                return Err("negative exponent in localization certificate".into());
            }
            let sum = combine(&cert.exponents, config.inverted_classes())?;
            let neg = g.neg(&cert.class).map_err(|e| e.to_string())?;
            if sum != neg {
                return Err(format!("localization certificate for {} fails", cert.class));
            }
        }
    }
    if let Some(Localization::No { witness }) = &report.localization {
        if !config.inverted_classes().contains(witness) {
            return Err(format!(
                "localization witness {witness} is not an inverted class"
            ));
        }
    }
    match &report.well_centered {
        Some(WellCentered::Yes { certificates }) => {
            for cert in certificates {
                check_generator(&cert.generator)?;
                if cert.exponents.iter().any(|e| e.is_negative()) {
                    return Err("negative exponent in well-centered certificate".into());
                }
                let sum = combine(&cert.exponents, config.inverted_classes())?;
                let neg = g.neg(&cert.generator.element).map_err(|e| e.to_string())?;
                if sum != neg {
                    return Err(format!(
                        "well-centered certificate for {} fails",
                        cert.generator.element
                    ));
                }
            }
        }
        Some(WellCentered::No { counterexample }) => check_generator(counterexample)?,
        None => {}
    }
    match &report.almost_well_centered {
        Some(AlmostWellCentered::Yes { certificates }) => {
            for cert in certificates {
                check_generator(&cert.generator)?;
                if cert.n < BigInt::one() {
                    return Err("non-positive multiple in certificate".into());
                }
                if cert.exponents.iter().any(|e| e.is_negative()) {
                    return Err("negative exponent in multiple certificate".into());
                }
                let sum = combine(&cert.exponents, config.inverted_classes())?;
                let scaled = g
                    .scalar_mul(&cert.n, &cert.generator.element)
                    .map_err(|e| e.to_string())?;
                let neg = g.neg(&scaled).map_err(|e| e.to_string())?;
                if sum != neg {
                    return Err(format!(
                        "multiple certificate for {} fails",
                        cert.generator.element
                    ));
                }
            }
        }
        Some(AlmostWellCentered::No { counterexample }) => check_generator(counterexample)?,
        None => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn z() -> FgAbelianGroup {
        FgAbelianGroup::integers()
    }

    fn el(g: &FgAbelianGroup, coords: &[i64]) -> GroupElement {
        g.element_from_flat(coords).unwrap()
    }

    /// The class data behind the almost-well-centered, not well-centered
    /// overring: class group Z, kept class -1, inverted classes 2 and 3.
    fn config_b() -> OverringConfig {
        OverringConfig::from_flat(z(), &[&[-1]], &[&[2], &[3]], None).unwrap()
    }

    /// The well-centered, non-localization overring: class group Z, kept
    /// class -1, inverted class 1.
    fn config_a() -> OverringConfig {
        OverringConfig::from_flat(z(), &[&[-1]], &[&[1]], None).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&config_b()).is_ok());

        let bad = OverringConfig::from_flat(z(), &[&[1]], &[&[2]], None).unwrap();
        match validate(&bad) {
            Err(ModelError::NotRealizable { missing }) => {
                assert_eq!(missing, el(&z(), &[-1]));
            }
            other => panic!("expected NotRealizable, got {other:?}"),
        }

        let trivial = OverringConfig::from_flat(FgAbelianGroup::trivial(), &[], &[], None).unwrap();
        assert!(validate(&trivial).is_ok());
    }

    #[test]
    fn divisor_class_examples() {
        let cfg = config_b();
        let minus_one = el(&z(), &[-1]);

        let mut d = Divisor::new();
        d.insert("P", minus_one.clone(), BigInt::one()).unwrap();
        assert_eq!(divisor_class(&cfg, &d).unwrap(), minus_one);

        let mut d = Divisor::new();
        d.insert("P1", minus_one.clone(), BigInt::from(2)).unwrap();
        d.insert("P2", minus_one.clone(), BigInt::from(3)).unwrap();
        assert_eq!(divisor_class(&cfg, &d).unwrap(), el(&z(), &[-5]));

        assert!(divisor_class(&cfg, &Divisor::new()).unwrap().is_zero());

        let mut bad = Divisor::new();
        bad.insert("Q", el(&z(), &[2]), BigInt::one()).unwrap();
        assert!(matches!(
            divisor_class(&cfg, &bad),
            Err(ModelError::InvalidDivisor(_))
        ));

        let mut d = Divisor::new();
        assert!(d.insert("P", minus_one, BigInt::zero()).is_err());
    }

    #[test]
    fn principal_in_overring_examples() {
        let cfg = config_b();
        match is_principal_in_overring(&cfg, &el(&z(), &[-1])).unwrap() {
            PrincipalInOverring::Yes { coefficients } => {
                assert_eq!(coefficients, vec![BigInt::one(), BigInt::from(-1)]);
            }
            PrincipalInOverring::No => panic!("expected principal"),
        }
        let cfg2 = OverringConfig::from_flat(z(), &[&[-1], &[1]], &[&[2]], None).unwrap();
        assert_eq!(
            is_principal_in_overring(&cfg2, &el(&z(), &[1])).unwrap(),
            PrincipalInOverring::No
        );
        match is_principal_in_overring(&cfg, &z().zero()).unwrap() {
            PrincipalInOverring::Yes { coefficients } => {
                assert!(coefficients.iter().all(Zero::is_zero));
            }
            PrincipalInOverring::No => panic!("zero class is always principal"),
        }
    }

    #[test]
    fn extension_of_principal_examples() {
        let cfg = config_b();
        match is_extension_of_principal(&cfg, &el(&z(), &[-5])).unwrap() {
            ExtensionOfPrincipal::Yes { exponents } => {
                assert_eq!(exponents, vec![BigInt::one(), BigInt::one()]);
            }
            ExtensionOfPrincipal::No => panic!("expected extension"),
        }
        assert_eq!(
            is_extension_of_principal(&cfg, &el(&z(), &[-1])).unwrap(),
            ExtensionOfPrincipal::No
        );
        match is_extension_of_principal(&cfg, &z().zero()).unwrap() {
            ExtensionOfPrincipal::Yes { exponents } => {
                assert!(exponents.iter().all(Zero::is_zero));
            }
            ExtensionOfPrincipal::No => panic!("zero class is always an extension"),
        }
    }

    #[test]
    fn well_centered_examples() {
        match is_well_centered(&config_b()).unwrap() {
            WellCentered::No { counterexample } => {
                assert_eq!(counterexample.element, el(&z(), &[-1]));
            }
            WellCentered::Yes { .. } => panic!("expected not well-centered"),
        }
        assert!(is_well_centered(&config_a()).unwrap().is_yes());
        let empty_kept = OverringConfig::from_flat(z(), &[], &[&[1], &[-1]], None).unwrap();
        assert!(is_well_centered(&empty_kept).unwrap().is_yes());
    }

    #[test]
    fn almost_well_centered_examples() {
        match is_almost_well_centered(&config_b()).unwrap() {
            AlmostWellCentered::Yes { certificates } => {
                assert_eq!(certificates.len(), 1);
                let cert = &certificates[0];
                assert_eq!(cert.generator.element, el(&z(), &[-1]));
                assert_eq!(cert.n, BigInt::from(2));
                assert_eq!(cert.exponents, vec![BigInt::one(), BigInt::zero()]);
            }
            AlmostWellCentered::No { .. } => panic!("expected almost well-centered"),
        }

        let cfg = OverringConfig::from_flat(z(), &[&[-1], &[1]], &[&[2]], None).unwrap();
        match is_almost_well_centered(&cfg).unwrap() {
            AlmostWellCentered::No { counterexample } => {
                assert_eq!(counterexample.element, el(&z(), &[2]));
            }
            AlmostWellCentered::Yes { .. } => panic!("expected failure on class 2"),
        }

        let empty_kept = OverringConfig::from_flat(z(), &[], &[&[1], &[-1]], None).unwrap();
        assert!(is_almost_well_centered(&empty_kept).unwrap().is_yes());
    }

    #[test]
    fn localization_examples() {
        match is_localization(&config_b()).unwrap() {
            Localization::No { witness } => assert_eq!(witness, el(&z(), &[2])),
            Localization::Yes { .. } => panic!("expected non-localization"),
        }
        let nothing_inverted = OverringConfig::from_flat(z(), &[&[1], &[-1]], &[], None).unwrap();
        assert!(is_localization(&nothing_inverted).unwrap().is_yes());
        // over a torsion group every valid config is a localization
        let z4 = FgAbelianGroup::cyclic(4).unwrap();
        let cfg = OverringConfig::from_flat(z4, &[&[1]], &[&[1], &[2]], None).unwrap();
        assert!(is_localization(&cfg).unwrap().is_yes());
    }

    #[test]
    fn overring_class_group_examples() {
        assert!(overring_class_group(&config_b()).is_trivial());
        let cfg = OverringConfig::from_flat(z(), &[&[-1], &[1]], &[&[2]], None).unwrap();
        assert_eq!(
            overring_class_group(&cfg),
            FgAbelianGroup::cyclic(2).unwrap()
        );
        let nothing_inverted = OverringConfig::from_flat(z(), &[&[1], &[-1]], &[], None).unwrap();
        assert_eq!(overring_class_group(&nothing_inverted), z());
    }

    #[test]
    fn radical_of_principal_examples() {
        assert!(!prime_class_is_radical_of_principal(&z(), &el(&z(), &[1])));
        let z4 = FgAbelianGroup::cyclic(4).unwrap();
        assert!(prime_class_is_radical_of_principal(&z4, &el(&z4, &[2])));
        let g = FgAbelianGroup::new(1, vec![2]).unwrap();
        assert!(prime_class_is_radical_of_principal(&g, &el(&g, &[0, 1])));
    }

    #[test]
    fn classify_examples() {
        let report = classify(&config_b()).unwrap();
        assert!(report.valid);
        assert_eq!(report.verdict_triple(), Some((false, false, true)));
        assert_eq!(report.is_pid, Some(true));

        let report = classify(&config_a()).unwrap();
        assert_eq!(report.verdict_triple(), Some((false, true, true)));
        assert_eq!(report.is_pid, Some(true));

        let trivial = OverringConfig::from_flat(FgAbelianGroup::trivial(), &[], &[], None).unwrap();
        let report = classify(&trivial).unwrap();
        assert_eq!(report.verdict_triple(), Some((true, true, true)));

        let invalid = OverringConfig::from_flat(z(), &[&[1]], &[&[2]], None).unwrap();
        let report = classify(&invalid).unwrap();
        assert!(!report.valid);
        assert_eq!(report.not_realizable, Some(el(&z(), &[-1])));
        assert!(report.localization.is_none());
    }

    #[test]
    fn reports_replay() {
        for cfg in [
            config_a(),
            config_b(),
            OverringConfig::from_flat(z(), &[&[-1], &[1]], &[&[2]], None).unwrap(),
            OverringConfig::from_flat(FgAbelianGroup::cyclic(6).unwrap(), &[&[1]], &[&[1]], None)
                .unwrap(),
        ] {
            let report = classify(&cfg).unwrap();
            replay_report(&cfg, &report).unwrap();
        }
    }

    #[test]
    fn duplicate_classes_change_nothing() {
        let plain = config_b();
        let doubled =
            OverringConfig::from_flat(z(), &[&[-1], &[-1]], &[&[2], &[3], &[2]], None).unwrap();
        assert_eq!(plain, doubled);
        assert_eq!(classify(&plain).unwrap(), classify(&doubled).unwrap());
    }

    /// A group is torsion exactly when every class is the radical of a
    /// principal ideal (has finite order): checked over the canonical
    /// generators and random elements.
    #[test]
    fn radical_law() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let rank = rng.gen_range(0..=2usize);
            let nmod = rng.gen_range(0..=2usize);
            let moduli: Vec<i64> = (0..nmod).map(|_| rng.gen_range(2..=8)).collect();
            let g = FgAbelianGroup::new(rank, moduli).unwrap();
            let all_radical = g
                .canonical_generators()
                .iter()
                .all(|c| prime_class_is_radical_of_principal(&g, c));
            assert_eq!(g.is_torsion(), all_radical, "group {g}");
            for _ in 0..5 {
                let coords: Vec<i64> = (0..g.dims()).map(|_| rng.gen_range(-5..=5)).collect();
                let c = g.element_from_flat(&coords).unwrap();
                if g.is_torsion() {
                    assert!(prime_class_is_radical_of_principal(&g, &c));
                }
            }
        }
    }

    #[test]
    fn extension_implies_principal() {
        let cfg = config_b();
        for c in [-6i64, -5, -3, -2, 0, 2, 5] {
            let class = el(&z(), &[c]);
            if matches!(
                is_extension_of_principal(&cfg, &class).unwrap(),
                ExtensionOfPrincipal::Yes { .. }
            ) {
                assert!(matches!(
                    is_principal_in_overring(&cfg, &class).unwrap(),
                    PrincipalInOverring::Yes { .. }
                ));
            }
        }
    }
}
