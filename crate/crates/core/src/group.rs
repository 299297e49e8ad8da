//! Right-angled Coxeter presentations and word combinatorics.
//!
//! A group is given by its commutation graph: the generators are involutions
//! and the only other relations are `st = ts` for the listed pairs. Elements
//! are stored by their normal form, the lexicographically least reduced word
//! under the declared generator order.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Generators are tracked in `u64` bitmasks.
pub const MAX_GENERATORS: usize = 64;

/// Default cap for [`CommutationGraph::all_reduced_words`].
pub const REDUCED_WORDS_CAP: usize = 100_000;

/// A generator, identified by its position in the declared order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(u8);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(index: usize) -> Self {
        debug_assert!(index < MAX_GENERATORS);
        Gen(index as u8)
    }

    fn bit(self) -> u64 {
        1 << self.0
    }
}

pub(crate) type Letters = SmallVec<[Gen; 16]>;

/// A finite sequence of generators, not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Letters);

impl Word {
    pub fn new() -> Self {
        Word(Letters::new())
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, s: Gen) {
        self.0.push(s);
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Gen> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl From<Vec<Gen>> for Word {
    fn from(v: Vec<Gen>) -> Self {
        Word(v.into_iter().collect())
    }
}

impl From<&[Gen]> for Word {
    fn from(v: &[Gen]) -> Self {
        Word(v.iter().copied().collect())
    }
}

impl FromIterator<Gen> for Word {
    fn from_iter<I: IntoIterator<Item = Gen>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Structural fingerprint of a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId(u64);

/// A group element in canonical normal form.
///
/// Equality is letter-identity of normal forms within the same presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: GroupId,
    normal_form: Word,
}

impl GroupElement {
    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn normal_form(&self) -> &Word {
        &self.normal_form
    }

    pub fn letters(&self) -> &[Gen] {
        self.normal_form.letters()
    }

    /// Word length `ℓ(a)`, which is the Cayley-graph distance to the identity.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.normal_form.len()
    }

    pub fn is_identity(&self) -> bool {
        self.normal_form.is_empty()
    }
}

/// The presentation of a right-angled Coxeter group.
#[derive(Clone, Debug)]
pub struct CommutationGraph {
    id: GroupId,
    names: Vec<String>,
    index: HashMap<String, Gen>,
    /// `commute[s]` is the bitmask of `Z⁰_s(S)`.
    commute: Vec<u64>,
}

impl PartialEq for CommutationGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.commute == other.commute
    }
}

impl Eq for CommutationGraph {}

impl CommutationGraph {
    /// Builds a presentation. Generator order is the iteration order of `generators`.
    pub fn new<A, B>(generators: A, edges: B) -> Result<Self>
    where
        A: IntoIterator,
        A::Item: AsRef<str>,
        B: IntoIterator,
        B::Item: AsRef<[String]>,
    {
        let names: Vec<String> = generators.into_iter().map(|s| s.as_ref().to_string()).collect();
        let pairs: Vec<(String, String)> = edges
            .into_iter()
            .map(|e| {
                let e = e.as_ref();
                (e[0].clone(), e[1].clone())
            })
            .collect();
        Self::from_parts(names, pairs)
    }

    pub(crate) fn from_parts(names: Vec<String>, edges: Vec<(String, String)>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::NoGenerators);
        }
        if names.len() > MAX_GENERATORS {
            return Err(Error::TooManyGenerators(names.len()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), Gen::from_index(i)).is_some() {
                return Err(Error::DuplicateGenerator(name.clone()));
            }
        }
        let mut commute = vec![0u64; names.len()];
        for (a, b) in &edges {
            let s = *index.get(a).ok_or_else(|| Error::UnknownGenerator(a.clone()))?;
            let t = *index.get(b).ok_or_else(|| Error::UnknownGenerator(b.clone()))?;
            if s == t {
                return Err(Error::SelfLoop(a.clone()));
            }
            commute[s.index()] |= t.bit();
            commute[t.index()] |= s.bit();
        }
        let mut hasher = DefaultHasher::new();
        names.hash(&mut hasher);
        commute.hash(&mut hasher);
        Ok(CommutationGraph { id: GroupId(hasher.finish()), names, index, commute })
    }

    /// Parses a group-definition document and returns its graph.
    pub fn parse(text: &str) -> Result<Self> {
        Ok(GroupDocument::parse(text)?.graph)
    }

    pub fn id(&self) -> GroupId {
        self.id
    }

    /// Number of generators `|S|`.
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn generators(&self) -> impl ExactSizeIterator<Item = Gen> + Clone {
        (0..self.names.len()).map(Gen::from_index)
    }

    pub fn name(&self, s: Gen) -> &str {
        &self.names[s.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator(&self, name: &str) -> Result<Gen> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// True iff `s ≠ t` and `st = ts`.
    pub fn commute(&self, s: Gen, t: Gen) -> bool {
        self.commute[s.index()] & t.bit() != 0
    }

    /// Bitmask of `Z⁰_s(S)`, the generators other than `s` commuting with `s`.
    pub fn commuting_mask(&self, s: Gen) -> u64 {
        self.commute[s.index()]
    }

    /// The commuting pairs `(s, t)` with `s < t`.
    pub fn edges(&self) -> Vec<(Gen, Gen)> {
        let mut out = Vec::new();
        for s in self.generators() {
            for t in self.generators().filter(|&t| t > s) {
                if self.commute(s, t) {
                    out.push((s, t));
                }
            }
        }
        out
    }

    /// Parses whitespace-separated generator names.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split_whitespace().map(|tok| self.generator(tok)).collect()
    }

    pub fn format_word(&self, letters: &[Gen]) -> String {
        let names: Vec<&str> = letters.iter().map(|&s| self.name(s)).collect();
        names.join(" ")
    }

    /// Renders an element's normal form; the identity renders as the empty string.
    pub fn format(&self, a: &GroupElement) -> String {
        self.format_word(a.letters())
    }

    pub fn display<'a>(&'a self, a: &'a GroupElement) -> impl fmt::Display + 'a {
        DisplayElement { graph: self, element: a }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { group: self.id, normal_form: Word::new() }
    }

    pub fn element(&self, s: Gen) -> GroupElement {
        GroupElement { group: self.id, normal_form: Word(std::iter::once(s).collect()) }
    }

    /// Parses a word and reduces it.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        self.reduce(&self.parse_word(text)?)
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.iter().find(|s| s.index() >= self.rank()) {
            Some(s) => Err(Error::UnknownGenerator(format!("#{}", s.index()))),
            None => Ok(()),
        }
    }

    fn ensure_member(&self, a: &GroupElement) -> Result<()> {
        if a.group == self.id {
            Ok(())
        } else {
            Err(Error::MixedGroups)
        }
    }

    pub(crate) fn wrap(&self, reduced: Letters) -> GroupElement {
        GroupElement { group: self.id, normal_form: Word(self.lex_normalize(&reduced)) }
    }

    /// Reduces a word to its element.
    ///
    /// Letters are prepended right to left onto a reduced word; a letter that
    /// is a left descent cancels against its first occurrence, otherwise it is
    /// pushed on the front. The result is then brought to lex-least form.
    pub fn reduce(&self, w: &Word) -> Result<GroupElement> {
        self.check_word(w)?;
        let mut reduced = Letters::new();
        for s in w.iter().rev() {
            self.prepend(&mut reduced, s);
        }
        Ok(self.wrap(reduced))
    }

    /// Left multiplication by `s` on a reduced word.
    fn prepend(&self, reduced: &mut Letters, s: Gen) {
        match self.left_descent_position(reduced, s) {
            Some(i) => {
                reduced.remove(i);
            }
            None => reduced.insert(0, s),
        }
    }

    /// Right multiplication by `s` on a reduced word.
    pub(crate) fn append(&self, reduced: &mut Letters, s: Gen) {
        match self.right_descent_position(reduced, s) {
            Some(i) => {
                reduced.remove(i);
            }
            None => reduced.push(s),
        }
    }

    /// Position of the letter `s` that cancels with a prepended `s`, if any.
    fn left_descent_position(&self, reduced: &[Gen], s: Gen) -> Option<usize> {
        let commuting = self.commute[s.index()];
        for (i, &x) in reduced.iter().enumerate() {
            if x == s {
                return Some(i);
            }
            if commuting & x.bit() == 0 {
                return None;
            }
        }
        None
    }

    fn right_descent_position(&self, reduced: &[Gen], s: Gen) -> Option<usize> {
        let commuting = self.commute[s.index()];
        for (i, &x) in reduced.iter().enumerate().rev() {
            if x == s {
                return Some(i);
            }
            if commuting & x.bit() == 0 {
                return None;
            }
        }
        None
    }

    /// Lex-least rearrangement of a reduced word under commutation moves.
    ///
    /// Greedy: repeatedly emit the smallest letter that can be moved to the
    /// front, i.e. one whose predecessors all commute with it.
    pub(crate) fn lex_normalize(&self, reduced: &[Gen]) -> Letters {
        let mut rest: Letters = reduced.iter().copied().collect();
        let mut out = Letters::with_capacity(rest.len());
        while !rest.is_empty() {
            let mut seen = 0u64;
            let mut best: Option<usize> = None;
            for (i, &x) in rest.iter().enumerate() {
                if seen & !self.commute[x.index()] == 0 && best.is_none_or(|b| x < rest[b]) {
                    best = Some(i);
                }
                seen |= x.bit();
            }
            let b = best.expect("first letter is always movable");
            out.push(rest.remove(b));
        }
        out
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.ensure_member(a)?;
        self.ensure_member(b)?;
        let mut reduced: Letters = a.letters().iter().copied().collect();
        for s in b.normal_form.iter() {
            self.append(&mut reduced, s);
        }
        Ok(self.wrap(reduced))
    }

    /// `a · s`.
    pub fn mul_gen(&self, a: &GroupElement, s: Gen) -> GroupElement {
        let mut reduced: Letters = a.letters().iter().copied().collect();
        self.append(&mut reduced, s);
        self.wrap(reduced)
    }

    /// `s · a`.
    pub fn gen_mul(&self, s: Gen, a: &GroupElement) -> GroupElement {
        let mut reduced: Letters = a.letters().iter().copied().collect();
        self.prepend(&mut reduced, s);
        self.wrap(reduced)
    }

    /// The reversed normal form is reduced and represents the inverse.
    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        let reversed: Letters = a.letters().iter().rev().copied().collect();
        self.wrap(reversed)
    }

    /// `γ s γ⁻¹`.
    pub fn conjugate(&self, gamma: &GroupElement, s: Gen) -> GroupElement {
        let mut reduced: Letters = gamma.letters().iter().copied().collect();
        self.append(&mut reduced, s);
        for &x in gamma.letters().iter().rev() {
            self.append(&mut reduced, x);
        }
        self.wrap(reduced)
    }

    /// `d(a, b) = ℓ(a⁻¹b)`, without building the normal form.
    pub fn distance(&self, a: &GroupElement, b: &GroupElement) -> usize {
        let mut reduced: Letters = a.letters().iter().rev().copied().collect();
        for &s in b.letters() {
            self.append(&mut reduced, s);
        }
        reduced.len()
    }

    /// True iff `ℓ(s·a) < ℓ(a)`.
    pub fn left_descent(&self, s: Gen, a: &GroupElement) -> bool {
        self.left_descent_position(a.letters(), s).is_some()
    }

    /// True iff `ℓ(a·s) < ℓ(a)`.
    pub fn right_descent(&self, a: &GroupElement, s: Gen) -> bool {
        self.right_descent_position(a.letters(), s).is_some()
    }

    /// Membership in the centralizer `Z_s(Γ)`, generated by `Z_s(S)`.
    pub fn in_centralizer(&self, a: &GroupElement, s: Gen) -> bool {
        let allowed = self.commute[s.index()] | s.bit();
        a.letters().iter().all(|x| allowed & x.bit() != 0)
    }

    /// Membership in `Z⁰_s(Γ)`, generated by `Z⁰_s(S)`.
    pub fn in_proper_centralizer(&self, a: &GroupElement, s: Gen) -> bool {
        let allowed = self.commute[s.index()];
        a.letters().iter().all(|x| allowed & x.bit() != 0)
    }

    /// Every reduced word representing `a`: the closure of the normal form
    /// under swaps of adjacent commuting letters.
    pub fn all_reduced_words(&self, a: &GroupElement, cap: usize) -> Result<BTreeSet<Word>> {
        let start = a.normal_form.clone();
        let mut seen: HashSet<Word> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(w) = queue.pop_front() {
            for i in 0..w.len().saturating_sub(1) {
                let (x, y) = (w.0[i], w.0[i + 1]);
                if self.commute(x, y) {
                    let mut next = w.clone();
                    next.0.swap(i, i + 1);
                    if !seen.contains(&next) {
                        if seen.len() >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        seen.insert(next.clone());
                        queue.push_back(next);
                    }
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

struct DisplayElement<'a> {
    graph: &'a CommutationGraph,
    element: &'a GroupElement,
}

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.element.is_identity() {
            f.write_str("1")
        } else {
            f.write_str(&self.graph.format(self.element))
        }
    }
}

/// A parsed group-definition document: the graph plus optional colour overrides.
#[derive(Clone, Debug)]
pub struct GroupDocument {
    pub graph: CommutationGraph,
    /// `(generator, colour)` pairs from `colour:` lines, in document order.
    pub colours: Vec<(Gen, usize)>,
}

impl GroupDocument {
    /// Parses the line format
    ///
    /// ```text
    /// # comment
    /// generators: s1 s2 s3
    /// edge: s1 s2
    /// colour: s1 1
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut edges = Vec::new();
        let mut colour_lines = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| Error::Parse { line: lineno, message: message.to_string() };
            let (key, rest) = line.split_once(':').ok_or_else(|| err("expected `key: value`"))?;
            let args: Vec<&str> = rest.split_whitespace().collect();
            match key.trim() {
                "generators" => {
                    if names.is_some() {
                        return Err(err("repeated `generators` line"));
                    }
                    names = Some(args.iter().map(|s| s.to_string()).collect());
                }
                "edge" => match args.as_slice() {
                    [a, b] => edges.push((a.to_string(), b.to_string())),
                    _ => return Err(err("`edge` takes two generators")),
                },
                "colour" => match args.as_slice() {
                    [s, c] => {
                        let c: usize = c.parse().map_err(|_| err("colour must be a positive integer"))?;
                        if c == 0 {
                            return Err(err("colours start at 1"));
                        }
                        colour_lines.push((s.to_string(), c));
                    }
                    _ => return Err(err("`colour` takes a generator and a colour")),
                },
                other => return Err(err(&format!("unknown key `{other}`"))),
            }
        }
        let names = names.ok_or(Error::Parse { line: 0, message: "missing `generators` line".into() })?;
        let graph = CommutationGraph::from_parts(names, edges)?;
        let colours =
            colour_lines.into_iter().map(|(s, c)| Ok((graph.generator(&s)?, c))).collect::<Result<Vec<_>>>()?;
        Ok(GroupDocument { graph, colours })
    }
}
