//! Finite automata over indexed alphabets, Büchi automata for ω-words, and
//! transition monoids.

mod alphabet;
mod buchi;
mod dfa;
mod nfa;

pub use alphabet::{Alphabet, Letter, Word};
pub use buchi::{all_words, arrow_membership, BuchiAutomaton, LassoWord};
pub use dfa::{preimage_dfa, Dfa, TransitionMonoidResult};
