//! Proper colourings of the commutation graph.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{CommutationGraph, Gen, GroupElement};

/// Largest generator count the exact chromatic solver accepts by default.
pub const EXACT_SEARCH_CAP: usize = 24;

/// A map `S → {1..n}`. Commuting generators must get different colours.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Coloring {
    assignment: Vec<usize>,
    n: usize,
}

impl Coloring {
    /// Wraps an assignment indexed by generator. `n` is the largest colour used.
    /// The result is not checked against any graph; see [`validate_coloring`].
    pub fn from_assignment(assignment: Vec<usize>) -> Result<Self> {
        if let Some(&c) = assignment.iter().find(|&&c| c == 0) {
            return Err(Error::InvalidColoring(format!("colour {c} is out of range; colours start at 1")));
        }
        let n = assignment.iter().copied().max().unwrap_or(0);
        Ok(Coloring { assignment, n })
    }

    /// Builds and validates a colouring for `g`.
    pub fn checked(g: &CommutationGraph, assignment: Vec<usize>) -> Result<Self> {
        let col = Self::from_assignment(assignment)?;
        check(g, &col).map_err(Error::InvalidColoring)?;
        Ok(col)
    }

    /// Builds a colouring from `(generator, colour)` pairs covering every generator.
    pub fn from_pairs(g: &CommutationGraph, pairs: &[(Gen, usize)]) -> Result<Self> {
        let mut assignment = vec![0; g.rank()];
        for &(s, c) in pairs {
            assignment[s.index()] = c;
        }
        if let Some(i) = assignment.iter().position(|&c| c == 0) {
            return Err(Error::InvalidColoring(format!("generator `{}` has no colour", g.names()[i])));
        }
        Self::checked(g, assignment)
    }

    /// Number of colours `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colour(&self, s: Gen) -> usize {
        self.assignment[s.index()]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn colours(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    fn check_colour(&self, c: usize) -> Result<()> {
        if (1..=self.n).contains(&c) {
            Ok(())
        } else {
            Err(Error::UnknownColour { colour: c, n: self.n })
        }
    }

    /// `ℓ_c(a)`: letters of colour `c` in the normal form. Every reduced word
    /// has the same letter multiset, so any of them gives the same count.
    pub fn colored_length(&self, a: &GroupElement, c: usize) -> Result<usize> {
        self.check_colour(c)?;
        Ok(self.count_colour(a.letters(), c))
    }

    pub(crate) fn count_colour(&self, letters: &[Gen], c: usize) -> usize {
        letters.iter().filter(|&&s| self.colour(s) == c).count()
    }
}

fn check(g: &CommutationGraph, col: &Coloring) -> std::result::Result<(), String> {
    if col.assignment.len() != g.rank() {
        return Err(format!("{} colours given for {} generators", col.assignment.len(), g.rank()));
    }
    for (s, t) in g.edges() {
        if col.colour(s) == col.colour(t) {
            return Err(format!(
                "commuting generators `{}` and `{}` share colour {}",
                g.name(s),
                g.name(t),
                col.colour(s)
            ));
        }
    }
    for c in 1..=col.n {
        if !col.assignment.contains(&c) {
            return Err(format!("colour {c} is unused"));
        }
    }
    Ok(())
}

/// True iff the colouring is proper on `g` and uses every colour in `1..=n`.
pub fn validate_coloring(g: &CommutationGraph, col: &Coloring) -> bool {
    check(g, col).is_ok()
}

/// A minimum colouring, with the default generator cap.
pub fn chromatic_coloring(g: &CommutationGraph) -> Result<Coloring> {
    chromatic_coloring_with_cap(g, EXACT_SEARCH_CAP)
}

/// Exact minimum colouring by backtracking in generator order.
///
/// Returns the lexicographically least assignment among all minimum
/// colourings. Candidate colour counts run from a clique-free lower bound up
/// to the greedy upper bound.
pub fn chromatic_coloring_with_cap(g: &CommutationGraph, cap: usize) -> Result<Coloring> {
    let k = g.rank();
    if k > cap {
        return Err(Error::CapExceeded { cap });
    }
    let adjacency: Vec<u64> = g.generators().map(|s| g.commuting_mask(s)).collect();
    let upper = greedy(&adjacency);
    let lower = if adjacency.iter().any(|&m| m != 0) { 2 } else { 1 };
    for colours in lower..=upper {
        let mut assignment = vec![0usize; k];
        if extend(&adjacency, colours, 0, 0, &mut assignment) {
            return Coloring::checked(g, assignment);
        }
    }
    unreachable!("the greedy colouring uses {upper} colours")
}

fn greedy(adjacency: &[u64]) -> usize {
    let mut assignment = vec![0usize; adjacency.len()];
    for v in 0..adjacency.len() {
        let mut c = 1;
        while (0..v).any(|u| adjacency[v] >> u & 1 == 1 && assignment[u] == c) {
            c += 1;
        }
        assignment[v] = c;
    }
    assignment.into_iter().max().unwrap_or(1)
}

/// Colours vertex `v` onward; colours are tried in increasing order and a new
/// colour is only opened as `max_used + 1`, so the first success is lex-least.
fn extend(adjacency: &[u64], colours: usize, v: usize, max_used: usize, assignment: &mut [usize]) -> bool {
    if v == adjacency.len() {
        return max_used == colours;
    }
    // Every remaining vertex can open at most one new colour.
    if max_used + (adjacency.len() - v) < colours {
        return false;
    }
    for c in 1..=colours.min(max_used + 1) {
        let clash = (0..v).any(|u| adjacency[v] >> u & 1 == 1 && assignment[u] == c);
        if !clash {
            assignment[v] = c;
            if extend(adjacency, colours, v + 1, max_used.max(c), assignment) {
                return true;
            }
        }
    }
    assignment[v] = 0;
    false
}
