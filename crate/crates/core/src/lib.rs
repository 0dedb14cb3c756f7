//! Cayley automatic structures for restricted wreath products `G ≀ H`, where
//! `G` carries its own Cayley automatic structure and `H` is virtually
//! infinite cyclic.
//!
//! The pieces, bottom up:
//!
//! - [`automata`]: finite automata, convolutions and letter transducers
//! - [`groups`]: brute-force group oracles for `G`, `H` and `G ≀ H`
//! - [`base`]: structures `(S₀, Λ₀, L₀, ψ₀)` for the base group
//! - [`wreath`]: the normal-form language and multiplier automata for `G ≀ H`
//! - [`word_problem`]: deciding triviality by folding multipliers over a word
//! - [`audit`]: exhaustive and randomized checks against the oracle
//!
//! ```
//! use cayley_wreath::{fixtures, word_problem};
//!
//! let ws = fixtures::lamplighter().unwrap();
//! let trace = word_problem::solve_text(&ws, "a t a t^-1 a").unwrap();
//! assert_eq!(ws.format_word(trace.final_form()), "B0 C* B C a");
//! ```

pub mod audit;
pub mod automata;
pub mod base;
pub mod fixtures;
pub mod groups;
pub mod par;
pub mod word_problem;
pub mod wreath;
