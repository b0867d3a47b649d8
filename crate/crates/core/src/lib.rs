//! Exact graphical games, equilibrium checks, and the CNF-to-game gadget
//! reductions that show why constrained, Pareto and strong equilibria are
//! hard to reason about.
//!
//! The crate is organised bottom-up:
//!
//! * [`game`]: games `⟨P, Neigh, Act, U⟩`, validation, dependency graphs.
//! * [`strategy`]: mixed strategies, profiles and exact expected payoffs.
//! * [`equilibrium`]: Nash, constrained, Pareto and strong checks.
//! * [`reduction`]: DIMACS input and the gadget-game compilers.
//! * [`oracle`]: brute-force SAT and the lemma validators.
//!
//! All arithmetic is over [`Rational`]; nothing in the crate uses floating
//! point.
//!
//! ```
//! use nashforge::reduction::{build_gphi, canonical_profile, parse_dimacs, FEncoding, TruthAssignment};
//! use nashforge::equilibrium::is_nash;
//! use nashforge::rational::zero;
//!
//! let cnf = parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0\n").unwrap();
//! let art = build_gphi(&cnf).unwrap();
//! let sigma = TruthAssignment::new(vec![true, false]);
//! let x = canonical_profile(&art, &sigma, FEncoding::S3ForFalse).unwrap();
//! assert!(is_nash(&art.game, &x, &zero()).unwrap().is_equilibrium);
//! ```

pub mod budget;
pub mod equilibrium;
pub mod game;
pub mod oracle;
pub mod rational;
pub mod reduction;
pub mod strategy;

pub use budget::{Budget, BudgetExceeded};
pub use game::{GameDef, GraphicalGame, PlayerId};
pub use rational::Rational;
pub use strategy::{MixedStrategy, Profile};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/equilibria.md")]
    mod equilibria {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/refinements.md")]
    mod refinements {}
    #[doc = include_str!("../../../book/src/validation.md")]
    mod validation {}
}
