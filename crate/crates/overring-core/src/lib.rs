//! Exact arithmetic for analyzing overrings of Dedekind domains through
//! their ideal-class data.
//!
//! An overring `B` of a Dedekind domain `A` is determined by the set of
//! maximal ideals that survive into `B`; everything this crate decides
//! about `B` (is it a localization of `A`? is it well-centered? almost
//! well-centered?) depends only on the class group of `A` together with
//! the ideal classes of the surviving and inverted primes.  The crate
//! models exactly that data and decides the predicates with replayable
//! certificates.
//!
//! Modules:
//!
//! - [`matrix`], [`snf`]: dense arbitrary-precision integer matrices and
//!   Smith normal form.
//! - [`abelian`]: finitely generated abelian groups in invariant-factor
//!   form and their element arithmetic.
//! - [`diophantine`]: Hilbert bases of linear Diophantine systems with
//!   congruence rows, nonnegative feasibility, and monoid/subgroup
//!   membership over a group.
//! - [`dedekind`]: the overring model and its decision procedures.
//! - [`suite`]: seeded property checks replicating the structural
//!   theorems behind the model.
//! - [`witness`]: exact verification of the explicit ring-theoretic
//!   witness computations (quadratic-number powers, polynomial
//!   identities).
//! - [`format`]: file formats for configs, systems, and reports.

pub mod abelian;
pub mod dedekind;
pub mod diophantine;
pub mod format;
pub mod matrix;
pub mod snf;
pub mod suite;
pub mod witness;

pub use abelian::{FgAbelianGroup, GroupElement, Order};
pub use dedekind::{classify, AnalysisReport, OverringConfig};
pub use diophantine::{hilbert_basis, solve_nonneg, HilbertBasis, LinearSystem};
