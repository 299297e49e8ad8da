//! Cayley-graph geometry: balls, geodesics, medians, halfspaces and walls.
//!
//! Walls are handled combinatorially. The wall of the reflection
//! `r = γsγ⁻¹` is the class of Cayley-graph edges `[γw, γws]` with
//! `w ∈ Z_s(Γ)`; each edge crosses exactly one wall.

use std::collections::HashMap;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::group::{CommutationGraph, Gen, GroupElement, Letters};

/// Default element cap for [`ball`].
pub const BALL_CAP: usize = 1_000_000;

/// An oriented Cayley-graph edge `[from, from·generator]` inside a ball,
/// with endpoints given as indices into the ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BallEdge {
    pub from: usize,
    pub to: usize,
    pub generator: Gen,
}

/// The ball `B(1, radius)` of the Cayley graph.
#[derive(Clone, Debug)]
pub struct Ball {
    center: GroupElement,
    radius: usize,
    elements: Vec<GroupElement>,
    layer_starts: Vec<usize>,
    index: HashMap<GroupElement, usize>,
    edges: Vec<BallEdge>,
}

impl Ball {
    pub fn center(&self) -> &GroupElement {
        &self.center
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Elements in BFS layer order, lex-ordered within a layer.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements at distance exactly `r` from the center.
    pub fn layer(&self, r: usize) -> &[GroupElement] {
        if r > self.radius {
            return &[];
        }
        &self.elements[self.layer_starts[r]..self.layer_starts[r + 1]]
    }

    /// Elements with `d(1, ·) ≤ r`.
    pub fn within(&self, r: usize) -> &[GroupElement] {
        &self.elements[..self.layer_starts[r.min(self.radius) + 1]]
    }

    pub fn index_of(&self, a: &GroupElement) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        self.index.contains_key(a)
    }

    /// Edges oriented away from the center.
    pub fn edges(&self) -> &[BallEdge] {
        &self.edges
    }
}

pub fn ball(g: &CommutationGraph, radius: usize) -> Result<Ball> {
    ball_with_cap(g, radius, BALL_CAP)
}

/// Breadth-first enumeration of `B(1, radius)`.
pub fn ball_with_cap(g: &CommutationGraph, radius: usize, cap: usize) -> Result<Ball> {
    let identity = g.identity();
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity.clone(), 0);
    let mut layer_starts = vec![0, 1];
    let mut edges = Vec::new();
    for _ in 0..radius {
        let (lo, hi) = (layer_starts[layer_starts.len() - 2], layer_starts[layer_starts.len() - 1]);
        let mut next: Vec<GroupElement> = Vec::new();
        let mut pending: Vec<(usize, Gen, GroupElement)> = Vec::new();
        for (from, parent) in elements.iter().enumerate().take(hi).skip(lo) {
            for s in g.generators() {
                if g.right_descent(parent, s) {
                    continue;
                }
                let child = g.mul_gen(parent, s);
                if !index.contains_key(&child) {
                    index.insert(child.clone(), usize::MAX);
                    next.push(child.clone());
                }
                pending.push((from, s, child));
            }
        }
        next.sort();
        if elements.len() + next.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
        for child in next {
            index.insert(child.clone(), elements.len());
            elements.push(child);
        }
        layer_starts.push(elements.len());
        edges.extend(pending.into_iter().map(|(from, generator, child)| BallEdge {
            from,
            to: index[&child],
            generator,
        }));
    }
    Ok(Ball { center: identity, radius, elements, layer_starts, index, edges })
}

/// The geodesic from `a` to `b` that follows the normal form of `a⁻¹b`.
pub fn geodesic(g: &CommutationGraph, a: &GroupElement, b: &GroupElement) -> Vec<GroupElement> {
    let step = g.multiply(&g.inverse(a), b).expect("same group");
    path_along(g, a, step.letters())
}

/// Vertices visited from `start` following `letters`.
pub fn path_along(g: &CommutationGraph, start: &GroupElement, letters: &[Gen]) -> Vec<GroupElement> {
    let mut path = Vec::with_capacity(letters.len() + 1);
    path.push(start.clone());
    for &s in letters {
        let next = g.mul_gen(path.last().unwrap(), s);
        path.push(next);
    }
    path
}

/// The median of three points: the unique `δ` lying between each pair.
///
/// Translate so that `c` is the identity, take a geodesic from `a` to `b`,
/// and flatten local maxima of the norm along it. At a local maximum the two
/// steps commute, so swapping them gives another geodesic whose norm
/// sequence has a local minimum there instead. When no local maximum is
/// left, the norm minimum lies between the identity and both endpoints.
pub fn median(g: &CommutationGraph, a: &GroupElement, b: &GroupElement, c: &GroupElement) -> GroupElement {
    assert!([a, b, c].iter().all(|e| e.group() == g.id()), "median of elements from another group");
    let product = |left: &mut Letters, right: &[Gen]| right.iter().for_each(|&s| g.append(left, s));
    let c_inv: Letters = c.letters().iter().rev().copied().collect();
    let mut x = c_inv.clone();
    product(&mut x, a.letters());
    let mut y = c_inv;
    product(&mut y, b.letters());
    let mut x_inv: Letters = x.iter().rev().copied().collect();
    product(&mut x_inv, &y);
    let mut steps: Vec<Gen> = x_inv.to_vec();
    // Path vertices as reduced words; only their lengths matter until the end.
    let mut path: Vec<Letters> = Vec::with_capacity(steps.len() + 1);
    path.push(x);
    for &s in &steps {
        let mut next = path.last().unwrap().clone();
        g.append(&mut next, s);
        path.push(next);
    }
    while let Some(i) = (1..steps.len()).find(|&i| {
        let (l0, l1, l2) = (path[i - 1].len(), path[i].len(), path[i + 1].len());
        l0 < l1 && l1 > l2
    }) {
        debug_assert!(g.commute(steps[i - 1], steps[i]));
        steps.swap(i - 1, i);
        let mut replaced = path[i - 1].clone();
        g.append(&mut replaced, steps[i - 1]);
        path[i] = replaced;
    }
    let delta = path.into_iter().min_by_key(|p| p.len()).expect("path is non-empty");
    let mut m: Letters = c.letters().iter().copied().collect();
    product(&mut m, &delta);
    g.wrap(m)
}

/// `a ∈ H_s`, i.e. `ℓ(s·a) > ℓ(a)`.
pub fn in_halfspace(g: &CommutationGraph, a: &GroupElement, s: Gen) -> bool {
    !g.left_descent(s, a)
}

/// `a ∈ ∂H_s`. The boundary is exactly `Z⁰_s(Γ)`.
pub fn in_halfspace_boundary(g: &CommutationGraph, a: &GroupElement, s: Gen) -> bool {
    g.in_proper_centralizer(a, s)
}

/// A reflection `γsγ⁻¹` together with its generator, colour and level.
///
/// Two reflections are equal iff their elements are; the other fields are
/// functions of the element once the colouring is fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Reflection {
    element: GroupElement,
    generator: Gen,
    colour: usize,
    level: u32,
}

impl Reflection {
    /// Classifies a group element as a reflection.
    pub fn new(g: &CommutationGraph, element: GroupElement, col: &Coloring) -> Result<Self> {
        let (conjugator, generator) = reflection_witness(g, &element)?;
        let colour = col.colour(generator);
        let level = col.count_colour(conjugator.letters(), colour) as u32 + 1;
        Ok(Reflection { element, generator, colour, level })
    }

    pub fn element(&self) -> &GroupElement {
        &self.element
    }

    /// `g(r)`.
    pub fn generator(&self) -> Gen {
        self.generator
    }

    /// `c(r) = c(g(r))`.
    pub fn colour(&self) -> usize {
        self.colour
    }

    /// `lev(r)`.
    pub fn level(&self) -> u32 {
        self.level
    }
}

/// `lev(r)`, the number of colour-`c(r)` walls met on a shortest path from
/// the identity to the wall of `r`, the wall itself included.
pub fn level(r: &Reflection) -> u32 {
    r.level
}

/// Writes a reflection `r` as `γsγ⁻¹` with `ℓ(γs) > ℓ(γ)` and `γ` shortest.
///
/// Descent: while `ℓ(r) > 1`, conjugate by the first letter `u` of the normal
/// form, which shortens `r` by two. The letters `u` collected in order form
/// `γ`, and `ℓ(r) = 2ℓ(γ) + 1`.
pub fn reflection_witness(g: &CommutationGraph, r: &GroupElement) -> Result<(GroupElement, Gen)> {
    let not_reflection = || Error::NotAReflection(g.format(r));
    if r.len().is_multiple_of(2) {
        return Err(not_reflection());
    }
    let mut current = r.clone();
    let mut conjugator = Vec::with_capacity(r.len() / 2);
    while current.len() > 1 {
        let u = current.letters()[0];
        let next = g.mul_gen(&g.gen_mul(u, &current), u);
        if next.len() + 2 != current.len() {
            return Err(not_reflection());
        }
        conjugator.push(u);
        current = next;
    }
    let s = current.letters()[0];
    let gamma = g.reduce(&conjugator.into()).expect("letters come from the group");
    if gamma.len() * 2 + 1 != r.len() {
        return Err(not_reflection());
    }
    Ok((gamma, s))
}

/// `g(r)`: the unique generator conjugate to `r`.
pub fn reflection_generator(g: &CommutationGraph, r: &GroupElement) -> Result<Gen> {
    reflection_witness(g, r).map(|(_, s)| s)
}

/// Orients the edge `{γ, γs}` away from the identity and returns its start.
pub fn orient_edge(g: &CommutationGraph, gamma: &GroupElement, s: Gen) -> GroupElement {
    if g.right_descent(gamma, s) {
        g.mul_gen(gamma, s)
    } else {
        gamma.clone()
    }
}

/// The wall crossed by the edge `{γ, γs}`; either endpoint may be passed.
pub fn wall_of_edge(g: &CommutationGraph, gamma: &GroupElement, s: Gen, col: &Coloring) -> Reflection {
    let start = orient_edge(g, gamma, s);
    let element = g.conjugate(&start, s);
    Reflection::new(g, element, col).expect("conjugates of generators are reflections")
}

/// `ℓ_c(γ) + 1` computed from this particular edge, with `c = c(s)`.
pub fn level_from_edge(g: &CommutationGraph, gamma: &GroupElement, s: Gen, col: &Coloring) -> u32 {
    let start = orient_edge(g, gamma, s);
    col.count_colour(start.letters(), col.colour(s)) as u32 + 1
}

/// The walls crossed by the geodesic from `a` to `b`, in path order.
pub fn crossing_walls(g: &CommutationGraph, a: &GroupElement, b: &GroupElement, col: &Coloring) -> Vec<Reflection> {
    let step = g.multiply(&g.inverse(a), b).expect("same group");
    crossing_walls_along(g, a, step.letters(), col)
}

/// The walls crossed by the edge path from `start` following `letters`.
pub fn crossing_walls_along(
    g: &CommutationGraph,
    start: &GroupElement,
    letters: &[Gen],
    col: &Coloring,
) -> Vec<Reflection> {
    let path = path_along(g, start, letters);
    letters.iter().zip(&path).map(|(&s, p)| wall_of_edge(g, p, s, col)).collect()
}

/// Ball edges crossing the wall of `r`.
pub fn crossing_edges(g: &CommutationGraph, r: &Reflection, ball: &Ball) -> Vec<BallEdge> {
    ball.edges()
        .iter()
        .filter(|e| e.generator == r.generator && g.conjugate(&ball.elements[e.from], e.generator) == r.element)
        .copied()
        .collect()
}

/// `min d(γ₁, γ₂) + 1` over endpoints `γᵢ` of crossing edges of the two walls
/// inside `ball`; `None` if either wall misses the ball.
pub fn mirror_distance(g: &CommutationGraph, r1: &Reflection, r2: &Reflection, ball: &Ball) -> Result<Option<usize>> {
    if r1.colour != r2.colour {
        return Err(Error::ColourMismatch(r1.colour, r2.colour));
    }
    let endpoints = |r: &Reflection| -> Vec<usize> {
        let mut v: Vec<usize> = crossing_edges(g, r, ball).iter().flat_map(|e| [e.from, e.to]).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let (p1, p2) = (endpoints(r1), endpoints(r2));
    let mut best: Option<usize> = None;
    for &i in &p1 {
        for &j in &p2 {
            let d = g.distance(&ball.elements[i], &ball.elements[j]) + 1;
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    Ok(best)
}

/// A mirror distance with the radius at which it stabilized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilizedDistance {
    pub value: Option<usize>,
    pub radius: usize,
}

/// Grows the search ball from `start_radius` until the value is found and
/// unchanged for two consecutive radii, or `max_radius` is reached.
pub fn mirror_distance_stabilized(
    g: &CommutationGraph,
    r1: &Reflection,
    r2: &Reflection,
    start_radius: usize,
    max_radius: usize,
) -> Result<StabilizedDistance> {
    let mut previous: Option<usize> = None;
    let mut radius = start_radius;
    loop {
        let b = ball(g, radius)?;
        let value = mirror_distance(g, r1, r2, &b)?;
        if (value.is_some() && value == previous) || radius >= max_radius {
            return Ok(StabilizedDistance { value, radius });
        }
        previous = value;
        radius += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::chromatic_coloring;

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

    fn gen(g: &CommutationGraph, s: &str) -> Gen {
        g.generator(s).unwrap()
    }

    #[test]
    fn ball_small_radii() {
        let (g, _) = hexagon();
        let b0 = ball(&g, 0).unwrap();
        assert_eq!(b0.len(), 1);
        assert!(b0.edges().is_empty());
        let b1 = ball(&g, 1).unwrap();
        assert_eq!(b1.len(), 7);
        assert_eq!(b1.edges().len(), 6);
    }

    #[test]
    fn ball_radius_two_hexagon() {
        // 30 ordered pairs s≠t, the 6 commuting pairs collapse: 24 elements of length 2.
        let (g, _) = hexagon();
        let b = ball(&g, 2).unwrap();
        assert_eq!(b.layer(2).len(), 24);
        assert_eq!(b.len(), 31);
        // Edges into layer 2: each length-2 element has one incoming edge per
        // right descent, 2 for the commuting products and 1 otherwise.
        assert_eq!(b.edges().len(), 6 + 6 * 2 + 18);
    }

    #[test]
    fn ball_cap() {
        let (g, _) = hexagon();
        assert_eq!(ball_with_cap(&g, 3, 50).unwrap_err(), Error::CapExceeded { cap: 50 });
    }

    #[test]
    fn ball_layers_are_sorted() {
        let (g, _) = hexagon();
        let b = ball(&g, 3).unwrap();
        for r in 0..=3 {
            let layer = b.layer(r);
            assert!(layer.windows(2).all(|w| w[0] < w[1]));
            assert!(layer.iter().all(|a| a.len() == r));
        }
    }

    #[test]
    fn geodesic_examples() {
        let (g, _) = hexagon();
        let a = el(&g, "s1 s3");
        assert_eq!(geodesic(&g, &a, &a), vec![a.clone()]);
        let s = el(&g, "s4");
        assert_eq!(geodesic(&g, &g.identity(), &s), vec![g.identity(), s]);
        let path = geodesic(&g, &g.identity(), &el(&g, "s1 s2"));
        assert_eq!(path, vec![g.identity(), el(&g, "s1"), el(&g, "s1 s2")]);
    }

    #[test]
    fn median_examples() {
        let (g, _) = hexagon();
        let a = el(&g, "s1 s3");
        let b = el(&g, "s5");
        assert_eq!(median(&g, &a, &a, &b), a);
        // s1 and s3 do not commute.
        assert_eq!(median(&g, &g.identity(), &el(&g, "s1"), &el(&g, "s3")), g.identity());
        // Brute force over B(1,2) finds the identity as the only median of 1, s1, s2.
        let ball = ball(&g, 2).unwrap();
        let (x, y, z) = (g.identity(), el(&g, "s1"), el(&g, "s2"));
        let between = |p: &GroupElement, q: &GroupElement, d: &GroupElement| {
            g.distance(p, d) + g.distance(d, q) == g.distance(p, q)
        };
        let medians: Vec<_> =
            ball.elements().iter().filter(|d| between(&x, &y, d) && between(&y, &z, d) && between(&x, &z, d)).collect();
        assert_eq!(medians, vec![&g.identity()]);
        assert_eq!(median(&g, &x, &y, &z), g.identity());
    }

    #[test]
    fn median_flattens_a_local_maximum() {
        let (g, _) = hexagon();
        // The normal-form geodesic from s1 to s2 passes through s1 s2.
        let m = median(&g, &el(&g, "s1"), &el(&g, "s2"), &g.identity());
        assert!(m.is_identity());
    }

    #[test]
    fn halfspace_examples() {
        let (g, _) = hexagon();
        for s in g.generators() {
            assert!(in_halfspace(&g, &g.identity(), s));
            assert!(!in_halfspace(&g, &g.element(s), s));
        }
        assert!(!in_halfspace(&g, &el(&g, "s2 s1"), gen(&g, "s1")));
    }

    #[test]
    fn wall_of_edge_examples() {
        let (g, col) = hexagon();
        let s = gen(&g, "s4");
        let r = wall_of_edge(&g, &g.identity(), s, &col);
        assert_eq!((r.element(), r.generator(), r.level()), (&g.element(s), s, 1));

        let r = wall_of_edge(&g, &el(&g, "s1"), gen(&g, "s2"), &col);
        assert_eq!(r.element(), &el(&g, "s2"));
        assert_eq!((r.generator(), r.level()), (gen(&g, "s2"), 1));

        // Either endpoint may be given.
        let r2 = wall_of_edge(&g, &el(&g, "s1 s2"), gen(&g, "s2"), &col);
        assert_eq!(r, r2);

        // s1 and s2 commute, so the wall of (s2, s2 s1) is s1 itself.
        let r = wall_of_edge(&g, &el(&g, "s2"), gen(&g, "s1"), &col);
        assert_eq!(r.element(), &el(&g, "s1"));
        assert_eq!(r.level(), 1);
    }

    #[test]
    fn reflection_generator_examples() {
        let (g, _) = hexagon();
        assert_eq!(reflection_generator(&g, &el(&g, "s3")).unwrap(), gen(&g, "s3"));
        assert_eq!(reflection_generator(&g, &el(&g, "s1 s2 s1")).unwrap(), gen(&g, "s2"));
        let r = el(&g, "s1 s3 s1");
        assert_eq!(r.len(), 3);
        assert_eq!(reflection_generator(&g, &r).unwrap(), gen(&g, "s3"));
        let s1 = gen(&g, "s1");
        assert_eq!(g.mul_gen(&g.gen_mul(s1, &r), s1), el(&g, "s3"));
    }

    #[test]
    fn reflection_generator_rejects_non_reflections() {
        let (g, _) = hexagon();
        assert!(matches!(reflection_generator(&g, &el(&g, "s1 s3")), Err(Error::NotAReflection(_))));
        assert!(matches!(reflection_generator(&g, &g.identity()), Err(Error::NotAReflection(_))));
        // Odd length but not an involution.
        assert!(matches!(reflection_generator(&g, &el(&g, "s1 s3 s5")), Err(Error::NotAReflection(_))));
    }

    #[test]
    fn level_examples() {
        let (g, col) = hexagon();
        assert_eq!(col.assignment(), &[1, 2, 1, 2, 1, 2]);
        for s in g.generators() {
            assert_eq!(level(&Reflection::new(&g, g.element(s), &col).unwrap()), 1);
        }
        // c(s3) = 1 and ℓ_1(s1) = 1.
        let r = Reflection::new(&g, el(&g, "s1 s3 s1"), &col).unwrap();
        assert_eq!(r.level(), 2);
        // s3 s2 s3 collapses to s2.
        let r = Reflection::new(&g, el(&g, "s3 s2 s3"), &col).unwrap();
        assert_eq!(r.element(), &el(&g, "s2"));
        assert_eq!(r.level(), 1);
    }

    #[test]
    fn crossing_walls_examples() {
        let (g, col) = hexagon();
        let a = el(&g, "s1 s3");
        assert!(crossing_walls(&g, &a, &a, &col).is_empty());
        let s = gen(&g, "s5");
        let walls = crossing_walls(&g, &g.identity(), &g.element(s), &col);
        assert_eq!(walls.len(), 1);
        assert_eq!(walls[0].element(), &g.element(s));

        let target = el(&g, "s1 s2");
        let mut one: Vec<_> = crossing_walls(&g, &g.identity(), &target, &col);
        let mut other = crossing_walls_along(&g, &g.identity(), &[gen(&g, "s2"), gen(&g, "s1")], &col);
        one.sort();
        other.sort();
        assert_eq!(one, other);
    }

    #[test]
    fn mirror_distance_examples() {
        let (g, col) = hexagon();
        let b = ball(&g, 5).unwrap();
        let s1 = Reflection::new(&g, el(&g, "s1"), &col).unwrap();
        assert_eq!(mirror_distance(&g, &s1, &s1, &b).unwrap(), Some(1));

        // Brute force over the coset description: crossing edges of the wall
        // γsγ⁻¹ start at γw, w ∈ Z_s(Γ); both endpoints represent the wall.
        let r2 = Reflection::new(&g, el(&g, "s3 s1 s3"), &col).unwrap();
        assert_eq!(r2.generator(), gen(&g, "s1"));
        let z = b.within(2).iter().filter(|w| g.in_centralizer(w, gen(&g, "s1"))).cloned().collect::<Vec<_>>();
        let s3 = el(&g, "s3");
        let mut oracle = usize::MAX;
        for w1 in &z {
            for w2 in &z {
                let gamma2 = g.multiply(&s3, w2).unwrap();
                oracle = oracle.min(g.distance(w1, &gamma2) + 1);
            }
        }
        assert_eq!(oracle, 2);
        assert_eq!(mirror_distance(&g, &s1, &r2, &b).unwrap(), Some(oracle));

        let other_colour = Reflection::new(&g, el(&g, "s2"), &col).unwrap();
        assert_eq!(mirror_distance(&g, &s1, &other_colour, &b).unwrap_err(), Error::ColourMismatch(1, 2));
    }

    #[test]
    fn distinct_same_coloured_walls_are_at_distance_at_least_one() {
        // Walls through edges at a common vertex give d = 0 + 1.
        let (g, col) = hexagon();
        let b = ball(&g, 3).unwrap();
        let s1 = Reflection::new(&g, el(&g, "s1"), &col).unwrap();
        let s3 = Reflection::new(&g, el(&g, "s3"), &col).unwrap();
        assert_eq!(mirror_distance(&g, &s1, &s3, &b).unwrap(), Some(1));
    }

    #[test]
    fn mirror_distance_outside_ball() {
        let (g, col) = hexagon();
        let b = ball(&g, 1).unwrap();
        let s1 = Reflection::new(&g, el(&g, "s1"), &col).unwrap();
        let far = Reflection::new(&g, el(&g, "s3 s5 s1 s5 s3"), &col).unwrap();
        assert_eq!(mirror_distance(&g, &s1, &far, &b).unwrap(), None);
        let st = mirror_distance_stabilized(&g, &s1, &far, 1, 6).unwrap();
        assert!(st.value.is_some());
        assert!(st.radius <= 6);
    }
}
