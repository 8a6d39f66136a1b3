use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::poly::{Monomial, MAX_VARS};

/// Monomial order used by a Gröbner computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermOrder {
    /// Graded reverse lexicographic, first variable largest.
    Grevlex,
    /// Block order eliminating the first `k` variables: grevlex on the
    /// front block, ties broken by grevlex on the rest.
    Elimination(usize),
}

impl TermOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            TermOrder::Grevlex => a.grevlex_cmp(b),
            TermOrder::Elimination(k) => a
                .grevlex_cmp_range(b, 0..k)
                .then_with(|| a.grevlex_cmp_range(b, k..MAX_VARS)),
        }
    }

    /// Leading monomial of a list of terms.
    pub fn leading<'a, C>(&self, terms: &'a [(Monomial, C)]) -> Option<&'a (Monomial, C)> {
        terms.iter().max_by(|x, y| self.cmp(&x.0, &y.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elimination_prefers_front_block() {
        let t = Monomial::from_exps(&[1, 0, 0]);
        let big = Monomial::from_exps(&[0, 5, 5]);
        assert_eq!(TermOrder::Elimination(1).cmp(&t, &big), Ordering::Greater);
        assert_eq!(TermOrder::Grevlex.cmp(&t, &big), Ordering::Less);
    }
}
