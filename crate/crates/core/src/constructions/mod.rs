//! Monoid constructions: local divisors, Rees extensions, expansions that
//! remember visited prefix values, and a pair-set product for concatenation.

mod expansion;
mod local;
mod rees;
mod schutzenberger;

pub use expansion::{birget_rhodes_full, birget_rhodes_reachable, Expansion};
pub use local::{local_divisor, LocalDivisor};
pub use rees::{local_rees, rees_divisor_lift, rees_extension, LiftedRees, LocalRees, ReesElem, ReesResult};
pub use schutzenberger::{schutzenberger_product, PairSetProduct};

use crate::monoid::Monoid;

/// Builds a table from a product function; the caller guarantees
/// associativity and that `0` is neutral.
pub(crate) fn table_from_fn(n: usize, mul: impl Fn(usize, usize) -> usize) -> Monoid {
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            table[x * n + y] = mul(x, y) as u32;
        }
    }
    Monoid::from_raw(n, table)
}
