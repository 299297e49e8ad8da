//! Brute-force verification suites.
//!
//! Each suite scans a ball of the Cayley graph, compares the library against
//! definitions computed the slow way, and records every disagreement as a
//! replayable counterexample.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::builtin::TestGroup;
use super::report::{counterexample, Tally, VerificationReport};
use crate::embed::{phi_c, phi_c_along, Embedder};
use crate::error::{Error, Result};
use crate::geometry::{
    ball, crossing_edges, crossing_walls, crossing_walls_along, geodesic, in_halfspace, in_halfspace_boundary,
    level_from_edge, median, mirror_distance_stabilized, reflection_witness, wall_of_edge, Ball, Reflection,
};
use crate::group::{CommutationGraph, Gen, GroupElement, Word, REDUCED_WORDS_CAP};
use crate::matrix::{element_matrix, reflection_matrix, sigma, IntMatrix};
use crate::params::SeparationParams;
use crate::tree::product_distance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    NormalForm,
    Halfspace,
    Median,
    Walls,
    IsometryMu,
    BilipschitzPsi,
    LocalIsometry,
    Separation,
    Representation,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::NormalForm,
        Suite::Halfspace,
        Suite::Median,
        Suite::Walls,
        Suite::IsometryMu,
        Suite::BilipschitzPsi,
        Suite::LocalIsometry,
        Suite::Separation,
        Suite::Representation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::NormalForm => "normal-form",
            Suite::Halfspace => "halfspace",
            Suite::Median => "median",
            Suite::Walls => "walls",
            Suite::IsometryMu => "isometry-mu",
            Suite::BilipschitzPsi => "bilipschitz-psi",
            Suite::LocalIsometry => "local-isometry",
            Suite::Separation => "separation",
            Suite::Representation => "representation",
        }
    }

    /// Radius used when none is given: 8 for representation scans, 5 for
    /// median triples, 10 for the line-like free group on two generators,
    /// 6 otherwise.
    pub fn default_radius(self, group: &str) -> usize {
        match (self, group) {
            (Suite::Representation, _) => 8,
            (Suite::Median, "free-2") => 10,
            (Suite::Median, _) => 5,
            (_, "free-2") => 10,
            _ => 6,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Runs one suite. The report is a function of the inputs alone, apart from
/// its wall-clock field.
pub fn run_suite(
    suite: Suite,
    group: &TestGroup,
    radius: usize,
    params: &SeparationParams,
    seed: u64,
) -> Result<VerificationReport> {
    params.validate(group.coloring.n())?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    let ctx = Ctx { g: &group.graph, tg: group };
    match suite {
        Suite::NormalForm => normal_form(&ctx, radius, &mut rng, &mut tally)?,
        Suite::Halfspace => halfspace(&ctx, radius, &mut tally)?,
        Suite::Median => median_suite(&ctx, radius, &mut rng, &mut tally)?,
        Suite::Walls => walls(&ctx, radius, &mut rng, &mut tally)?,
        Suite::IsometryMu => isometry_mu(&ctx, radius, params, &mut rng, &mut tally)?,
        Suite::BilipschitzPsi => bilipschitz_psi(&ctx, radius, params, &mut tally)?,
        Suite::LocalIsometry => local_isometry(&ctx, radius, params, &mut tally)?,
        Suite::Separation => separation(&ctx, radius, params, &mut tally)?,
        Suite::Representation => representation(&ctx, radius, &mut rng, &mut tally)?,
    }
    tally.stat("failures_total", tally.failures_total);
    Ok(VerificationReport {
        suite: suite.name().to_string(),
        group: group.name.clone(),
        radius,
        seed,
        checks_run: tally.checks,
        failures: tally.failures,
        stats: tally.stats,
        wall_clock: start.elapsed(),
    })
}

struct Ctx<'a> {
    g: &'a CommutationGraph,
    tg: &'a TestGroup,
}

impl Ctx<'_> {
    fn w(&self, a: &GroupElement) -> String {
        self.g.format(a)
    }

    fn word(&self, letters: &[Gen]) -> String {
        self.g.format_word(letters)
    }
}

/// A uniformly random choice among the letters that can be moved to the
/// front, repeated: a random reduced word of `a`.
pub fn random_reduced_word(g: &CommutationGraph, a: &GroupElement, rng: &mut impl Rng) -> Vec<Gen> {
    let mut rest: Vec<Gen> = a.letters().to_vec();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let movable: Vec<usize> =
            (0..rest.len()).filter(|&i| rest[..i].iter().all(|&x| g.commute(x, rest[i]))).collect();
        let pick = *movable.choose(rng).expect("the first letter is movable");
        out.push(rest.remove(pick));
    }
    out
}

// ---------------------------------------------------------------------------
// normal-form

/// All words reachable by swapping adjacent commuting letters.
fn commutation_class(g: &CommutationGraph, w: &[Gen]) -> Vec<Vec<Gen>> {
    let mut seen: HashSet<Vec<Gen>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.to_vec());
    queue.push_back(w.to_vec());
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        for i in 0..v.len().saturating_sub(1) {
            if g.commute(v[i], v[i + 1]) {
                let mut next = v.clone();
                next.swap(i, i + 1);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        out.push(v);
    }
    out
}

/// Rewriting oracle: delete a random available `ss` (after any commutation
/// moves) until none is left, then take the lex-least word of the class.
fn rewrite_to_normal_form(g: &CommutationGraph, w: &[Gen], rng: &mut impl Rng) -> Vec<Gen> {
    let mut current = w.to_vec();
    loop {
        let class = commutation_class(g, &current);
        let deletions: Vec<(usize, usize)> = class
            .iter()
            .enumerate()
            .flat_map(|(k, v)| (0..v.len().saturating_sub(1)).filter(move |&i| v[i] == v[i + 1]).map(move |i| (k, i)))
            .collect();
        match deletions.choose(rng) {
            None => return class.into_iter().min().expect("class contains the word itself"),
            Some(&(k, i)) => {
                let mut next = class[k].clone();
                next.drain(i..i + 2);
                current = next;
            }
        }
    }
}

fn all_words(k: usize, len: usize) -> Vec<Vec<Gen>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |s| {
                    let mut v = w.clone();
                    v.push(Gen::from_index(s));
                    v
                })
            })
            .collect();
    }
    out
}

const EXHAUSTIVE_WORD_BUDGET: usize = 20_000;
const MAX_WORD_LENGTH: usize = 8;
const RANDOM_WORDS: usize = 2_000;

fn normal_form(ctx: &Ctx, radius: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let g = ctx.g;
    let k = g.rank();

    for s in g.generators() {
        let ss = g.multiply(&g.element(s), &g.element(s))?;
        tally.check(ss.is_identity(), || counterexample("involution", vec![ctx.word(&[s, s])], "", ctx.w(&ss)));
    }

    // Exhaustive short words, then random words up to length 8.
    let mut words = Vec::new();
    let mut total = 0;
    for len in 0..=MAX_WORD_LENGTH {
        let count = k.checked_pow(len as u32).unwrap_or(usize::MAX);
        if total + count > EXHAUSTIVE_WORD_BUDGET {
            break;
        }
        total += count;
        words.extend(all_words(k, len));
    }
    tally.stat("exhaustive_words", words.len() as u64);
    for _ in 0..RANDOM_WORDS {
        let len = rng.gen_range(0..=MAX_WORD_LENGTH);
        words.push((0..len).map(|_| Gen::from_index(rng.gen_range(0..k))).collect());
    }
    for w in &words {
        let reduced = g.reduce(&Word::from(w.as_slice()))?;
        let oracle = rewrite_to_normal_form(g, w, rng);
        tally.check(reduced.letters() == oracle.as_slice(), || {
            counterexample("confluence", vec![ctx.word(w)], ctx.word(&oracle), ctx.w(&reduced))
        });
        tally.check(reduced.len() % 2 == w.len() % 2, || {
            counterexample("parity", vec![ctx.word(w)], format!("length ≡ {} mod 2", w.len() % 2), reduced.len())
        });
    }

    let b = ball(g, radius)?;
    let mut skipped = 0;
    for a in b.elements() {
        match g.all_reduced_words(a, REDUCED_WORDS_CAP) {
            Ok(class) => {
                let mut multiset: Vec<Gen> = a.letters().to_vec();
                multiset.sort();
                for w in &class {
                    let mut letters = w.letters().to_vec();
                    letters.sort();
                    tally.check(letters == multiset && g.reduce(w)? == *a, || {
                        counterexample(
                            "letter-multiset",
                            vec![ctx.w(a), ctx.word(w.letters())],
                            ctx.w(a),
                            "different letters",
                        )
                    });
                }
            }
            Err(Error::CapExceeded { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
        for s in g.generators() {
            let sa = g.gen_mul(s, a);
            let by_length = sa.len() < a.len();
            tally.check(g.left_descent(s, a) == by_length, || {
                counterexample("left-descent", vec![g.name(s).to_string(), ctx.w(a)], by_length, !by_length)
            });
            let commutes = g.mul_gen(a, s) == sa;
            tally.check(g.in_centralizer(a, s) == commutes, || {
                counterexample("centralizer", vec![ctx.w(a), g.name(s).to_string()], commutes, !commutes)
            });
        }
    }
    tally.stat("reduced_word_classes_skipped", skipped);
    Ok(())
}

// ---------------------------------------------------------------------------
// halfspace

fn halfspace(ctx: &Ctx, radius: usize, tally: &mut Tally) -> Result<()> {
    let g = ctx.g;
    let b = ball(g, radius)?;
    for a in b.elements() {
        for s in g.generators() {
            let here = in_halfspace(g, a, s);
            let there = in_halfspace(g, &g.gen_mul(s, a), s);
            tally.check(here != there, || {
                counterexample(
                    "halfspace-partition",
                    vec![ctx.w(a), g.name(s).to_string()],
                    "exactly one",
                    format!("{here} {there}"),
                )
            });
        }
    }

    let inner = radius.saturating_sub(1);
    for s in g.generators() {
        let members: Vec<&GroupElement> = b.within(inner).iter().filter(|a| in_halfspace(g, a, s)).collect();
        let mut boundary = Vec::new();
        for &a in &members {
            let by_definition = g.generators().any(|t| !in_halfspace(g, &g.mul_gen(a, t), s));
            tally.check(by_definition == in_halfspace_boundary(g, a, s), || {
                counterexample(
                    "halfspace-boundary",
                    vec![ctx.w(a), g.name(s).to_string()],
                    by_definition,
                    !by_definition,
                )
            });
            if by_definition {
                boundary.push(a);
            }
        }
        for (set, name, member) in [
            (
                &members,
                "halfspace-convexity",
                &(|x: &GroupElement| in_halfspace(g, x, s)) as &dyn Fn(&GroupElement) -> bool,
            ),
            (&boundary, "boundary-convexity", &|x: &GroupElement| in_halfspace_boundary(g, x, s)),
        ] {
            for (i, &x) in set.iter().enumerate() {
                for &y in &set[i + 1..] {
                    let path = geodesic(g, x, y);
                    let escape = path.iter().find(|p| !member(p));
                    tally.check(escape.is_none(), || {
                        counterexample(
                            name,
                            vec![ctx.w(x), ctx.w(y), g.name(s).to_string()],
                            "geodesic inside",
                            ctx.w(escape.unwrap()),
                        )
                    });
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// median

/// Largest number of unordered triples scanned exhaustively.
const FULL_TRIPLE_BUDGET: usize = 20_000_000;
const RANDOM_TRIPLES: usize = 200_000;

fn triple_count(n: usize) -> usize {
    n * (n + 1) * (n + 2) / 6
}

fn median_suite(ctx: &Ctx, radius: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let g = ctx.g;
    let b = ball(g, radius)?;
    let els = b.elements();
    // Pairwise distances inside the ball, looked up by index.
    let size = els.len();
    let mut dist = vec![0u8; size * size];
    for i in 0..size {
        for j in i + 1..size {
            let d = g.distance(&els[i], &els[j]) as u8;
            dist[i * size + j] = d;
            dist[j * size + i] = d;
        }
    }
    let d = |i: usize, a: &GroupElement, m: &GroupElement, mi: Option<usize>| match mi {
        Some(k) => dist[i * size + k] as usize,
        None => g.distance(a, m),
    };
    let mut check = |i: usize, j: usize, l: usize| {
        let (x, y, z) = (&els[i], &els[j], &els[l]);
        let m = median(g, x, y, z);
        let mi = b.index_of(&m);
        let (dx, dy, dz) = (d(i, x, &m, mi), d(j, y, &m, mi), d(l, z, &m, mi));
        let ok = dx + dy == dist[i * size + j] as usize
            && dx + dz == dist[i * size + l] as usize
            && dy + dz == dist[j * size + l] as usize;
        tally.check(ok, || {
            counterexample("median-betweenness", vec![ctx.w(x), ctx.w(y), ctx.w(z)], "between all pairs", ctx.w(&m))
        });
    };

    // Every triple of the largest sub-ball within budget.
    let full = (0..=radius).rev().find(|&r| triple_count(b.within(r).len()) <= FULL_TRIPLE_BUDGET).unwrap_or(0);
    let inner = b.within(full);
    for i in 0..inner.len() {
        for j in i..inner.len() {
            for l in j..inner.len() {
                check(i, j, l);
            }
        }
    }

    // Every triple through the identity, with the identity in each argument
    // position. Up to translation these are all triples in which one point
    // is within `radius` of the other two.
    if full < radius {
        for i in 1..size {
            for j in i..size {
                check(0, i, j);
                check(i, 0, j);
                check(i, j, 0);
            }
        }
        for _ in 0..RANDOM_TRIPLES {
            check(rng.gen_range(0..size), rng.gen_range(0..size), rng.gen_range(0..size));
        }
    }
    tally.stat("full_triple_radius", full as u64);
    Ok(())
}

// ---------------------------------------------------------------------------
// walls

const WALL_PAIRS: usize = 100;
const COSET_WALLS: usize = 50;

/// `Z⁰_s(Γ)` up to the given length.
fn proper_centralizer(g: &CommutationGraph, s: Gen, max_len: usize) -> Vec<GroupElement> {
    let gens: Vec<Gen> = g.generators().filter(|&t| g.commute(s, t)).collect();
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    let mut frontier = vec![g.identity()];
    seen.insert(g.identity());
    for _ in 0..max_len {
        let mut next = Vec::new();
        for a in &frontier {
            for &t in &gens {
                let c = g.mul_gen(a, t);
                if seen.insert(c.clone()) {
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

fn walls(ctx: &Ctx, radius: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let g = ctx.g;
    let col = &ctx.tg.coloring;
    let b = ball(g, radius)?;
    let els = b.elements();

    // Crossing walls do not depend on the geodesic.
    for _ in 0..WALL_PAIRS {
        let a = &els[rng.gen_range(0..els.len())];
        let c = &els[rng.gen_range(0..els.len())];
        let step = g.multiply(&g.inverse(a), c)?;
        let other = random_reduced_word(g, &step, rng);
        let mut one = crossing_walls(g, a, c, col);
        let mut two = crossing_walls_along(g, a, &other, col);
        one.sort();
        two.sort();
        let distinct: BTreeSet<&Reflection> = one.iter().collect();
        let ok = one == two && distinct.len() == g.distance(a, c);
        tally.check(ok, || {
            counterexample(
                "crossing-walls",
                vec![ctx.w(a), ctx.w(c), ctx.word(&other)],
                format!("{} distinct walls on both geodesics", g.distance(a, c)),
                format!("{} vs {} ({} distinct)", one.len(), two.len(), distinct.len()),
            )
        });
    }

    // Level from each crossing edge agrees with the canonical level, and the
    // canonical witness is the half-length prefix of the normal form.
    let mut distinct_walls: BTreeMap<GroupElement, Reflection> = BTreeMap::new();
    for e in b.edges() {
        let from = &els[e.from];
        let r = wall_of_edge(g, from, e.generator, col);
        let from_edge = level_from_edge(g, from, e.generator, col);
        tally.check(from_edge == r.level(), || {
            counterexample(
                "level-well-defined",
                vec![ctx.w(from), g.name(e.generator).to_string()],
                r.level(),
                from_edge,
            )
        });
        distinct_walls.entry(r.element().clone()).or_insert(r);
    }
    tally.stat("walls", distinct_walls.len() as u64);
    for r in distinct_walls.values() {
        let (witness, _) = reflection_witness(g, r.element())?;
        let k = r.element().len() / 2;
        let prefix = g.reduce(&Word::from(&r.element().letters()[..k]))?;
        tally.check(witness == prefix, || {
            counterexample("level-prefix-witness", vec![ctx.w(r.element())], ctx.w(&prefix), ctx.w(&witness))
        });
    }

    // Crossing edges of a wall γsγ⁻¹ are exactly the edges (γw, s), w ∈ Z_s(Γ).
    let edge_ball = ball(g, radius.min(5))?;
    let near: Vec<&Reflection> = distinct_walls.values().filter(|r| r.element().len() <= 3).take(COSET_WALLS).collect();
    for r in near {
        let (gamma, s) = reflection_witness(g, r.element())?;
        let gamma_inv = g.inverse(&gamma);
        let filtered: BTreeSet<(usize, usize)> =
            crossing_edges(g, r, &edge_ball).iter().map(|e| (e.from, e.to)).collect();
        let coset: BTreeSet<(usize, usize)> = edge_ball
            .edges()
            .iter()
            .filter(|e| e.generator == s)
            .filter(|e| g.in_centralizer(&g.multiply(&gamma_inv, &edge_ball.elements()[e.from]).unwrap(), s))
            .map(|e| (e.from, e.to))
            .collect();
        tally.check(filtered == coset, || {
            counterexample("crossing-edges-coset", vec![ctx.w(r.element())], coset.len(), filtered.len())
        });
    }

    // Walls crossing a common square have different colours; walls at a
    // common vertex are distinct.
    for gamma in b.within(radius.saturating_sub(2)) {
        for s in g.generators() {
            for t in g.generators().filter(|&t| t > s) {
                let (rs, rt) = (wall_of_edge(g, gamma, s, col), wall_of_edge(g, gamma, t, col));
                let ok = rs != rt && (!g.commute(s, t) || rs.colour() != rt.colour());
                tally.check(ok, || {
                    counterexample(
                        "same-colour-disjoint",
                        vec![ctx.w(gamma), g.name(s).to_string(), g.name(t).to_string()],
                        "distinct walls, different colours on squares",
                        format!("{} / {}", ctx.w(rs.element()), ctx.w(rt.element())),
                    )
                });
            }
        }
    }

    // For c(s) = c(t): γ·∂H_s lies in H_t or in tH_t.
    let outer = radius.saturating_sub(2);
    for s in g.generators() {
        let boundary = proper_centralizer(g, s, outer + radius);
        for t in g.generators().filter(|&t| col.colour(t) == col.colour(s)) {
            for gamma in b.within(outer) {
                let sides: BTreeSet<bool> = boundary
                    .iter()
                    .map(|alpha| g.multiply(gamma, alpha).unwrap())
                    .filter(|x| x.len() <= radius)
                    .map(|x| in_halfspace(g, &x, t))
                    .collect();
                tally.check(sides.len() <= 1, || {
                    counterexample(
                        "colour-side",
                        vec![ctx.w(gamma), g.name(s).to_string(), g.name(t).to_string()],
                        "one side of the wall",
                        "both sides",
                    )
                });
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// embeddings

const WELL_DEFINED_ELEMENTS: usize = 200;
const WELL_DEFINED_WORDS: usize = 3;
const EQUIVARIANCE_PAIRS: usize = 1_000;

fn isometry_mu(
    ctx: &Ctx,
    radius: usize,
    params: &SeparationParams,
    rng: &mut ChaCha8Rng,
    tally: &mut Tally,
) -> Result<()> {
    let g = ctx.g;
    let col = &ctx.tg.coloring;
    let b = ball(g, radius)?;
    let els = b.elements();
    let mut emb = Embedder::new(g, col, *params);
    let points: Vec<_> = els.iter().map(|a| emb.mu(a)).collect();

    for (a, p) in els.iter().zip(&points) {
        let ok = p
            .coordinates()
            .iter()
            .all(|v| v.labels().iter().enumerate().all(|(k, &id)| emb.reflections.get(id).level() as usize == k + 1));
        tally.check(ok, || counterexample("level-stratification", vec![ctx.w(a)], "level κ at position κ", "mismatch"));
    }

    for i in 0..els.len() {
        for j in i + 1..els.len() {
            let d = g.distance(&els[i], &els[j]);
            let dmu = product_distance(&points[i], &points[j])?;
            tally.check(d == dmu, || counterexample("mu-isometry", vec![ctx.w(&els[i]), ctx.w(&els[j])], d, dmu));
        }
    }

    // Distances are invariant under left translation by generators.
    for _ in 0..EQUIVARIANCE_PAIRS.min(els.len() * els.len()) {
        let (a, c) = (&els[rng.gen_range(0..els.len())], &els[rng.gen_range(0..els.len())]);
        let base = product_distance(&crate::embed::mu(g, a, col), &crate::embed::mu(g, c, col))?;
        for t in g.generators() {
            let (ta, tc) = (g.gen_mul(t, a), g.gen_mul(t, c));
            let moved = product_distance(&crate::embed::mu(g, &ta, col), &crate::embed::mu(g, &tc, col))?;
            tally.check(moved == base, || {
                counterexample("mu-equivariance", vec![ctx.w(a), ctx.w(c), g.name(t).to_string()], base, moved)
            });
        }
    }

    // φ_c does not depend on the reduced word.
    let wider = ball(g, radius + 1)?;
    let pool = wider.elements();
    for _ in 0..WELL_DEFINED_ELEMENTS {
        let a = &pool[rng.gen_range(0..pool.len())];
        for _ in 0..WELL_DEFINED_WORDS {
            let w = random_reduced_word(g, a, rng);
            for c in col.colours() {
                let canonical = phi_c(g, a, col, c)?;
                let other = phi_c_along(g, &w, col, c)?;
                tally.check(canonical == other, || {
                    counterexample(
                        "phi-well-defined",
                        vec![ctx.w(a), ctx.word(&w), c.to_string()],
                        canonical.labels().len(),
                        format!("different sequence of length {}", other.labels().len()),
                    )
                });
            }
        }
    }
    Ok(())
}

/// `μ` and `ψ` over a ball, as interned points.
fn embed_ball(
    ctx: &Ctx,
    b: &Ball,
    params: &SeparationParams,
) -> (Vec<crate::ProductPoint<u32>>, Vec<crate::ProductPoint<u32>>, usize) {
    let mut emb = Embedder::new(ctx.g, &ctx.tg.coloring, *params);
    let mu: Vec<_> = b.elements().iter().map(|a| emb.mu(a)).collect();
    let psi: Vec<_> = mu.iter().map(|p| emb.psi_of_mu(p)).collect();
    (mu, psi, emb.fin_labels.len())
}

fn bilipschitz_psi(ctx: &Ctx, radius: usize, params: &SeparationParams, tally: &mut Tally) -> Result<()> {
    let g = ctx.g;
    let n = ctx.tg.coloring.n();
    let b = ball(g, radius)?;
    let els = b.elements();
    let (_, psi, labels) = embed_ball(ctx, &b, params);
    tally.stat("fin_labels", labels as u64);
    let mut contracted = 0;
    for i in 0..els.len() {
        for j in i + 1..els.len() {
            let d = g.distance(&els[i], &els[j]);
            let dpsi = product_distance(&psi[i], &psi[j])?;
            tally.check(dpsi <= d, || {
                counterexample("psi-lipschitz", vec![ctx.w(&els[i]), ctx.w(&els[j])], format!("≤ {d}"), dpsi)
            });
            tally.check(d <= 16 * n * dpsi, || {
                counterexample(
                    "psi-lower-bound",
                    vec![ctx.w(&els[i]), ctx.w(&els[j])],
                    format!("≥ {d}/{}", 16 * n),
                    dpsi,
                )
            });
            if dpsi < d {
                contracted += 1;
            }
        }
    }
    tally.stat("contracted_pairs", contracted);
    Ok(())
}

fn local_isometry(ctx: &Ctx, radius: usize, params: &SeparationParams, tally: &mut Tally) -> Result<()> {
    let g = ctx.g;
    let b = ball(g, radius)?;
    let els = b.elements();
    let (_, psi, _) = embed_ball(ctx, &b, params);
    // Two points lie in a common ball of radius r iff they are at most 2r apart.
    let span = 2 * params.r_local as usize;
    for i in 0..els.len() {
        for j in i + 1..els.len() {
            let d = g.distance(&els[i], &els[j]);
            if d > span {
                continue;
            }
            let dpsi = product_distance(&psi[i], &psi[j])?;
            tally.check(d == dpsi, || {
                counterexample("psi-local-isometry", vec![ctx.w(&els[i]), ctx.w(&els[j])], d, dpsi)
            });
        }
    }
    Ok(())
}

/// Extra radius the mirror-distance search may grow beyond the scan radius.
const MIRROR_SEARCH_SLACK: usize = 3;

fn separation(ctx: &Ctx, radius: usize, params: &SeparationParams, tally: &mut Tally) -> Result<()> {
    let g = ctx.g;
    let col = &ctx.tg.coloring;
    let n = col.n();
    let b = ball(g, radius)?;
    let mut emb = Embedder::new(g, col, *params);
    let mut walls: BTreeSet<Reflection> = BTreeSet::new();
    for e in b.edges() {
        walls.insert(wall_of_edge(g, &b.elements()[e.from], e.generator, col));
    }
    let mut buckets: HashMap<(usize, u32, u32), Vec<Reflection>> = HashMap::new();
    for r in &walls {
        let id = emb.reflections.intern(r);
        let fin = emb.fin_id(id);
        buckets.entry((r.colour(), r.level(), fin)).or_default().push(r.clone());
        tally.checks += 1;
    }
    tally.stat("reflections", walls.len() as u64);
    let mut collisions = 0;
    let mut max_stabilization = 0;
    let mut keys: Vec<_> = buckets.keys().copied().collect();
    keys.sort();
    for key in keys {
        let bucket = &buckets[&key];
        for (i, r1) in bucket.iter().enumerate() {
            for r2 in &bucket[i + 1..] {
                collisions += 1;
                let level = r1.level() as usize;
                let bound = 4 * n * level;
                let found = mirror_distance_stabilized(g, r1, r2, radius, radius + MIRROR_SEARCH_SLACK)?;
                max_stabilization = max_stabilization.max(found.radius);
                let ok = found.value.is_none_or(|d| d >= bound);
                tally.check(ok, || {
                    counterexample(
                        "fin-separation",
                        vec![ctx.w(r1.element()), ctx.w(r2.element())],
                        format!("mirror distance ≥ {bound}"),
                        format!("{:?} (stabilized at radius {})", found.value, found.radius),
                    )
                });
            }
        }
    }
    tally.stat("collisions", collisions);
    tally.stat("max_stabilization_radius", max_stabilization as u64);
    Ok(())
}

// ---------------------------------------------------------------------------
// representation

const MULTIPLICATIVE_PAIRS: usize = 500;
const SIGMA_NU: u64 = 2;

fn representation(ctx: &Ctx, radius: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let g = ctx.g;
    let dim = g.rank();
    for s in g.generators() {
        let h = reflection_matrix(s, g);
        tally.check(h.mul(&h).is_identity(), || {
            counterexample("reflection-involution", vec![g.name(s).to_string()], "I", "not I")
        });
    }

    let b = ball(g, radius)?;
    let els = b.elements();
    for _ in 0..MULTIPLICATIVE_PAIRS {
        let (a, c) = (&els[rng.gen_range(0..els.len())], &els[rng.gen_range(0..els.len())]);
        let ac = g.multiply(a, c)?;
        let ok = element_matrix(g, &ac) == element_matrix(g, a).mul(&element_matrix(g, c));
        tally.check(ok, || {
            counterexample("matrix-multiplicative", vec![ctx.w(a), ctx.w(c)], "h(ac) = h(a)h(c)", "differs")
        });
    }

    let sigma_radius = (2 * SIGMA_NU + 2) as usize;
    let mut max_ratio_hit = 0;
    for a in &els[1..] {
        let h = element_matrix(g, a);
        tally.check(!h.is_identity(), || counterexample("faithful", vec![ctx.w(a)], "h(a) ≠ I", "I"));
        let bound = num_traits::pow(BigInt::from(3), a.len());
        let max = h.max_abs_entry();
        if max == bound {
            max_ratio_hit += 1;
        }
        tally.check(max <= bound, || counterexample("entry-bound", vec![ctx.w(a)], format!("≤ {bound}"), &max));
        if a.len() <= sigma_radius {
            let res = sigma(g, a, SIGMA_NU);
            tally.check(!res.is_identity(), || counterexample("sigma-separates", vec![ctx.w(a)], "σ(a) ≠ I", "I"));
            let reduced = h.reduce_mod(res.modulus());
            tally.check(reduced == res, || {
                counterexample("sigma-reduction", vec![ctx.w(a)], reduced.to_string(), res.to_string())
            });
        }
    }
    tally.stat("entry_bound_attained", max_ratio_hit);
    debug_assert_eq!(IntMatrix::identity(dim).dim(), dim);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("nope".parse::<Suite>().unwrap_err(), Error::UnknownSuite("nope".into()));
    }

    #[test]
    fn rewriting_oracle_on_a_small_word() {
        let tg = TestGroup::builtin("hexagon").unwrap();
        let g = &tg.graph;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = g.parse_word("s2 s1 s3 s1 s2").unwrap();
        let oracle = rewrite_to_normal_form(g, w.letters(), &mut rng);
        assert_eq!(g.format_word(&oracle), g.format(&g.reduce(&w).unwrap()));
    }

    #[test]
    fn random_reduced_words_represent_the_element() {
        let tg = TestGroup::builtin("pentagon").unwrap();
        let g = &tg.graph;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = g.parse_element("s1 s2 s4 s3 s5 s1").unwrap();
        for _ in 0..20 {
            let w = random_reduced_word(g, &a, &mut rng);
            assert_eq!(w.len(), a.len());
            assert_eq!(g.reduce(&Word::from(w)).unwrap(), a);
        }
    }

    #[test]
    fn proper_centralizer_of_hexagon_generator_is_infinite_dihedral() {
        let tg = TestGroup::builtin("hexagon").unwrap();
        let g = &tg.graph;
        let z = proper_centralizer(g, g.generator("s1").unwrap(), 4);
        assert_eq!(z.len(), 9);
        assert!(z.iter().all(|a| crate::geometry::in_halfspace_boundary(g, a, g.generator("s1").unwrap())));
    }

    #[test]
    fn small_runs_pass() {
        let tg = TestGroup::builtin("hexagon").unwrap();
        let params = SeparationParams::new(tg.coloring.n(), 3);
        for suite in Suite::ALL {
            let radius = match suite {
                Suite::Median => 2,
                Suite::Representation => 4,
                _ => 3,
            };
            let report = run_suite(suite, &tg, radius, &params, 11).unwrap();
            assert!(report.passed(), "{suite}: {:?}", report.failures);
            assert!(report.checks_run > 0, "{suite} ran no checks");
        }
    }

    #[test]
    fn params_must_cover_the_colour_count() {
        let tg = TestGroup::builtin("pentagon").unwrap();
        let params = SeparationParams::new(2, 3);
        assert!(matches!(run_suite(Suite::Separation, &tg, 2, &params, 0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn label_collisions_are_measured() {
        // ν = 0 gives modulus 10, far below the separation threshold, so
        // distinct walls share labels.
        let tg = TestGroup::builtin("hexagon").unwrap();
        let params = SeparationParams { r_local: 0, per_level: 0, floor: 0 };
        let ctx = Ctx { g: &tg.graph, tg: &tg };
        let mut tally = Tally::default();
        separation(&ctx, 4, &params, &mut tally).unwrap();
        assert!(tally.stats["collisions"] > 0);
        for f in &tally.failures {
            assert_eq!(f.check, "fin-separation");
            assert!(f.actual.starts_with("Some("), "{f:?}");
        }
    }
}
