//! Embeddings of the Cayley graph into products of trees.
//!
//! For each colour `c`, `φ_c` sends an element to the sequence of
//! colour-`c` walls crossed by a geodesic from the identity; the `κ`-th wall
//! has level `κ`, so the sequence is a vertex of the tree whose level-`κ`
//! labels are the level-`κ` reflections. `μ` is the product of the `φ_c`
//! and is an isometry for the `l₁` metric. `ψ` replaces every reflection by
//! a finite label (generator plus a modular matrix residue), which keeps the
//! map bilipschitz while making each tree locally finite.

use std::collections::HashMap;

use serde::Serialize;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::geometry::Reflection;
use crate::group::{CommutationGraph, Gen, GroupElement};
use crate::matrix::{sigma, ResidueMatrix};
use crate::params::SeparationParams;
use crate::tree::{ProductPoint, TreeVertex};

/// Colour-`c` walls crossed from the identity, labelled by level.
pub type ReflectionSequence = TreeVertex<Reflection>;

/// The finite label `fin(r)` of a reflection at its level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FinLabel {
    #[serde(skip)]
    generator: Gen,
    residue: ResidueMatrix,
}

impl FinLabel {
    pub fn generator(&self) -> Gen {
        self.generator
    }

    pub fn residue(&self) -> &ResidueMatrix {
        &self.residue
    }
}

fn check_colour(col: &Coloring, c: usize) -> Result<()> {
    if (1..=col.n()).contains(&c) {
        Ok(())
    } else {
        Err(Error::UnknownColour { colour: c, n: col.n() })
    }
}

/// `φ_c(a)`, read off the normal form of `a`.
pub fn phi_c(g: &CommutationGraph, a: &GroupElement, col: &Coloring, c: usize) -> Result<ReflectionSequence> {
    phi_c_along(g, a.letters(), col, c)
}

/// `φ_c` read off an arbitrary reduced word. Any reduced word of the same
/// element gives the same sequence.
pub fn phi_c_along(g: &CommutationGraph, word: &[Gen], col: &Coloring, c: usize) -> Result<ReflectionSequence> {
    check_colour(col, c)?;
    let mut out = TreeVertex::root();
    let mut prefix = g.identity();
    for &s in word {
        if col.colour(s) == c {
            let r = Reflection::new(g, g.conjugate(&prefix, s), col)?;
            out.push(r);
        }
        prefix = g.mul_gen(&prefix, s);
    }
    Ok(out)
}

/// `μ(a) = (φ_1(a), …, φ_n(a))`.
pub fn mu(g: &CommutationGraph, a: &GroupElement, col: &Coloring) -> ProductPoint<Reflection> {
    let coords = col.colours().map(|c| phi_c(g, a, col, c).expect("colour in range")).collect();
    ProductPoint::new(coords)
}

/// `fin(r)` at level `i`: the generator together with `σ(r)` for `ν = ν(i)`.
pub fn fin(g: &CommutationGraph, r: &Reflection, i: u32, params: &SeparationParams) -> Result<FinLabel> {
    if r.level() != i {
        return Err(Error::LevelMismatch { expected: i, actual: r.level() });
    }
    Ok(FinLabel { generator: r.generator(), residue: sigma(g, r.element(), params.nu(i)) })
}

/// `ψ(a)`: `μ(a)` with every reflection replaced by its fin label.
pub fn psi(
    g: &CommutationGraph,
    a: &GroupElement,
    col: &Coloring,
    params: &SeparationParams,
) -> ProductPoint<FinLabel> {
    let coords = col
        .colours()
        .map(|c| {
            let phi = phi_c(g, a, col, c).expect("colour in range");
            TreeVertex::new(phi.labels().iter().map(|r| fin(g, r, r.level(), params).expect("level matches")).collect())
        })
        .collect();
    ProductPoint::new(coords)
}

/// Interns labels to dense ids so batch scans compare integers.
#[derive(Debug)]
pub struct Interner<L> {
    ids: HashMap<L, u32>,
    labels: Vec<L>,
}

impl<L: std::hash::Hash + Eq + Clone> Default for Interner<L> {
    fn default() -> Self {
        Interner { ids: HashMap::new(), labels: Vec::new() }
    }
}

impl<L: std::hash::Hash + Eq + Clone> Interner<L> {
    pub fn intern(&mut self, label: &L) -> u32 {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len() as u32;
        self.ids.insert(label.clone(), id);
        self.labels.push(label.clone());
        id
    }

    pub fn get(&self, id: u32) -> &L {
        &self.labels[id as usize]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Batch evaluation of `μ` and `ψ` with shared label caches.
///
/// Points come back over interned ids: reflection ids for `μ`, and ids of
/// distinct fin labels for `ψ`. Fin labels are computed once per reflection.
#[derive(Debug)]
pub struct Embedder<'a> {
    graph: &'a CommutationGraph,
    coloring: &'a Coloring,
    params: SeparationParams,
    pub reflections: Interner<Reflection>,
    pub fin_labels: Interner<FinLabel>,
    fin_of_reflection: Vec<u32>,
}

impl<'a> Embedder<'a> {
    pub fn new(graph: &'a CommutationGraph, coloring: &'a Coloring, params: SeparationParams) -> Self {
        Embedder {
            graph,
            coloring,
            params,
            reflections: Interner::default(),
            fin_labels: Interner::default(),
            fin_of_reflection: Vec::new(),
        }
    }

    pub fn mu(&mut self, a: &GroupElement) -> ProductPoint<u32> {
        let point = mu(self.graph, a, self.coloring);
        point.map(|r| self.reflections.intern(r))
    }

    /// Fin-label id of an interned reflection.
    pub fn fin_id(&mut self, reflection_id: u32) -> u32 {
        while self.fin_of_reflection.len() <= reflection_id as usize {
            let r = self.reflections.get(self.fin_of_reflection.len() as u32).clone();
            let label = fin(self.graph, &r, r.level(), &self.params).expect("level matches");
            let id = self.fin_labels.intern(&label);
            self.fin_of_reflection.push(id);
        }
        self.fin_of_reflection[reflection_id as usize]
    }

    /// `ψ` of a point already embedded by [`Embedder::mu`].
    pub fn psi_of_mu(&mut self, mu_point: &ProductPoint<u32>) -> ProductPoint<u32> {
        mu_point.map(|&id| self.fin_id(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::chromatic_coloring;
    use crate::tree::{product_distance, tree_distance};

    fn hexagon() -> (CommutationGraph, Coloring) {
        let g = CommutationGraph::parse(
            "generators: s1 s2 s3 s4 s5 s6\n\
             edge: s1 s2\nedge: s2 s3\nedge: s3 s4\nedge: s4 s5\nedge: s5 s6\nedge: s6 s1\n",
        )
        .unwrap();
        let col = chromatic_coloring(&g).unwrap();
        (g, col)
    }

    fn el(g: &CommutationGraph, w: &str) -> GroupElement {
        g.parse_element(w).unwrap()
    }

    #[test]
    fn phi_examples() {
        let (g, col) = hexagon();
        assert!(phi_c(&g, &g.identity(), &col, 1).unwrap().is_root());
        let s1 = el(&g, "s1");
        let phi = phi_c(&g, &s1, &col, 1).unwrap();
        assert_eq!(phi.labels().len(), 1);
        assert_eq!(phi.labels()[0].element(), &s1);

        let a = el(&g, "s1 s2 s3");
        let phi = phi_c(&g, &a, &col, 2).unwrap();
        assert_eq!(phi.labels().len(), 1);
        assert_eq!(phi.labels()[0].element(), &el(&g, "s2"));
        let other = [g.generator("s2").unwrap(), g.generator("s1").unwrap(), g.generator("s3").unwrap()];
        assert_eq!(phi_c_along(&g, &other, &col, 2).unwrap(), phi);
        assert_eq!(phi_c(&g, &a, &col, 3).unwrap_err(), Error::UnknownColour { colour: 3, n: 2 });
    }

    #[test]
    fn mu_examples() {
        let (g, col) = hexagon();
        assert_eq!(mu(&g, &g.identity(), &col), ProductPoint::roots(2));
        let a = el(&g, "s1 s2");
        let p = mu(&g, &a, &col);
        assert_eq!(p.coordinate(1).labels()[0].element(), &el(&g, "s1"));
        assert_eq!(p.coordinate(2).labels()[0].element(), &el(&g, "s2"));
        let root = ProductPoint::roots(2);
        assert_eq!(tree_distance(p.coordinate(1), root.coordinate(1)), 1);
        assert_eq!(product_distance(&p, &mu(&g, &g.identity(), &col)).unwrap(), 2);
    }

    #[test]
    fn levels_are_positions() {
        let (g, col) = hexagon();
        let a = el(&g, "s1 s3 s5 s1 s4 s2 s6");
        for c in col.colours() {
            for (k, r) in phi_c(&g, &a, &col, c).unwrap().labels().iter().enumerate() {
                assert_eq!(r.level() as usize, k + 1);
            }
        }
    }

    #[test]
    fn fin_examples() {
        let (g, col) = hexagon();
        let params = SeparationParams::new(col.n(), 3);
        let r = Reflection::new(&g, el(&g, "s1 s3 s1"), &col).unwrap();
        assert_eq!(r.level(), 2);
        assert_eq!(fin(&g, &r, 2, &params).unwrap(), fin(&g, &r, 2, &params).unwrap());
        assert_eq!(fin(&g, &r, 1, &params).unwrap_err(), Error::LevelMismatch { expected: 1, actual: 2 });

        // Same generator s1, level 1 (s4 has colour 2), mirror distance 2 < ν(1) = 8.
        let a = Reflection::new(&g, el(&g, "s1"), &col).unwrap();
        let b = Reflection::new(&g, el(&g, "s4 s1 s4"), &col).unwrap();
        assert_eq!((a.level(), b.level(), a.generator()), (1, 1, b.generator()));
        assert_ne!(fin(&g, &a, 1, &params).unwrap(), fin(&g, &b, 1, &params).unwrap());

        let c = Reflection::new(&g, el(&g, "s3"), &col).unwrap();
        assert_ne!(fin(&g, &a, 1, &params).unwrap().generator(), fin(&g, &c, 1, &params).unwrap().generator());
    }

    #[test]
    fn psi_examples() {
        let (g, col) = hexagon();
        let params = SeparationParams::new(col.n(), 3);
        assert_eq!(psi(&g, &g.identity(), &col, &params), ProductPoint::roots(2));
        let a = el(&g, "s1 s3 s4");
        let b = el(&g, "s1 s2 s6");
        let d = g.distance(&a, &b);
        let dpsi = product_distance(&psi(&g, &a, &col, &params), &psi(&g, &b, &col, &params)).unwrap();
        assert!(dpsi <= d);
        assert!(d <= 16 * col.n() * dpsi);
    }

    #[test]
    fn embedder_matches_direct_evaluation() {
        let (g, col) = hexagon();
        let params = SeparationParams::new(col.n(), 3);
        let mut emb = Embedder::new(&g, &col, params);
        let a = el(&g, "s1 s3 s5 s2");
        let b = el(&g, "s4 s6 s1");
        let (ma, mb) = (emb.mu(&a), emb.mu(&b));
        assert_eq!(
            product_distance(&ma, &mb).unwrap(),
            product_distance(&mu(&g, &a, &col), &mu(&g, &b, &col)).unwrap()
        );
        let (pa, pb) = (emb.psi_of_mu(&ma), emb.psi_of_mu(&mb));
        assert_eq!(
            product_distance(&pa, &pb).unwrap(),
            product_distance(&psi(&g, &a, &col, &params), &psi(&g, &b, &col, &params)).unwrap()
        );
    }
}
