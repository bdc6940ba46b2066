//! The running example: words over `{a, b, d, s}` where `d` and `s` generate
//! `S3` (a 3-cycle and a transposition), with one marker letter.
//!
//! `L_a`: exactly one `a`, no `b`, and the `d`/`s` letters multiply to an odd
//! permutation. `L_b`: exactly one `b`, no `a`, and the `d`/`s` letters
//! multiply to the 3-cycle. The language is `L_a ∪ L_b`.

use crate::automata::{Alphabet, Dfa};
use crate::groups::{is_odd_permutation, permutation_index, symmetric};
use crate::monoid::Elem;

/// The 3-cycle `δ` in [`symmetric`]`(3)`.
pub fn delta() -> Elem {
    permutation_index(&[1, 2, 0])
}

/// The transposition `σ` in [`symmetric`]`(3)`.
pub fn sigma() -> Elem {
    permutation_index(&[1, 0, 2])
}

pub fn alphabet() -> Alphabet {
    Alphabet::from_chars("abds")
}

/// Tracks the `S3` value and a marker in {none, a, b}, plus a dead state.
pub fn dfa() -> Dfa {
    let s3 = symmetric(3);
    let gens = [delta(), sigma()];
    let dead = 18;
    Dfa::from_fn(
        alphabet(),
        19,
        0,
        |q, letter| {
            if q == dead {
                return dead;
            }
            let (marker, g) = (q / 6, q % 6);
            match letter {
                0 | 1 if marker != 0 => dead,
                0 => 6 + g,
                1 => 12 + g,
                _ => marker * 6 + s3.mul(g, gens[letter - 2]),
            }
        },
        |q| match q / 6 {
            1 => is_odd_permutation(3, q % 6),
            2 => q % 6 == delta(),
            _ => false,
        },
    )
}
