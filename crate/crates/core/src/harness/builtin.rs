use crate::coloring::{chromatic_coloring, Coloring};
use crate::error::{Error, Result};
use crate::group::{CommutationGraph, GroupDocument};

fn names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("s{i}")).collect()
}

fn cycle(k: usize) -> CommutationGraph {
    let n = names(k);
    let edges = (0..k).map(|i| (n[i].clone(), n[(i + 1) % k].clone())).collect();
    CommutationGraph::from_parts(n, edges).expect("cycle graph is valid")
}

/// Builtin presentations: `hexagon`, `pentagon`, `free-k` (no relations
/// besides involutions) and `cube-k` (all pairs commute, giving `(ℤ₂)^k`).
/// Generators are named `s1, s2, …`.
pub fn builtin_group(name: &str) -> Result<CommutationGraph> {
    let unknown = || Error::UnknownBuiltin(name.to_string());
    match name {
        "hexagon" => Ok(cycle(6)),
        "pentagon" => Ok(cycle(5)),
        _ => {
            let (family, k) = name.split_once('-').ok_or_else(unknown)?;
            let k: usize = k.parse().map_err(|_| unknown())?;
            if k == 0 {
                return Err(unknown());
            }
            let n = names(k);
            match family {
                "free" => CommutationGraph::from_parts(n, Vec::new()),
                "cube" => {
                    let mut edges = Vec::new();
                    for i in 0..k {
                        for j in i + 1..k {
                            edges.push((n[i].clone(), n[j].clone()));
                        }
                    }
                    CommutationGraph::from_parts(n, edges)
                }
                _ => Err(unknown()),
            }
        }
    }
}

/// A named group with the colouring used for its embeddings.
#[derive(Clone, Debug)]
pub struct TestGroup {
    pub name: String,
    pub graph: CommutationGraph,
    pub coloring: Coloring,
}

impl TestGroup {
    /// A builtin group with its minimum colouring.
    pub fn builtin(name: &str) -> Result<Self> {
        let graph = builtin_group(name)?;
        let coloring = chromatic_coloring(&graph)?;
        Ok(TestGroup { name: name.to_string(), graph, coloring })
    }

    /// A parsed document; `colour:` lines, when present, replace the solver.
    pub fn from_document(name: &str, doc: GroupDocument) -> Result<Self> {
        let coloring = if doc.colours.is_empty() {
            chromatic_coloring(&doc.graph)?
        } else {
            Coloring::from_pairs(&doc.graph, &doc.colours)?
        };
        Ok(TestGroup { name: name.to_string(), graph: doc.graph, coloring })
    }

    /// Resolves `builtin:<name>` or reads a group-definition file.
    pub fn load(source: &str) -> std::result::Result<Self, LoadError> {
        if let Some(name) = source.strip_prefix("builtin:") {
            return Ok(Self::builtin(name)?);
        }
        let text = std::fs::read_to_string(source).map_err(|e| LoadError::Io(source.to_string(), e))?;
        let doc = GroupDocument::parse(&text)?;
        Ok(Self::from_document(source, doc)?)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read `{0}`: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Group(#[from] Error),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ball;

    #[test]
    fn hexagon_is_a_six_cycle() {
        let g = builtin_group("hexagon").unwrap();
        assert_eq!(g.rank(), 6);
        let edges: Vec<(usize, usize)> = g.edges().iter().map(|(s, t)| (s.index(), t.index())).collect();
        assert_eq!(edges, vec![(0, 1), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn cube_three_is_finite() {
        let g = builtin_group("cube-3").unwrap();
        assert_eq!(g.edges().len(), 3);
        let b = ball(&g, 3).unwrap();
        assert_eq!(b.len(), 8);
        assert_eq!(ball(&g, 5).unwrap().len(), 8);
    }

    #[test]
    fn free_two_is_a_line() {
        let g = builtin_group("free-2").unwrap();
        let b = ball(&g, 10).unwrap();
        assert_eq!(b.len(), 21);
        assert!((1..=10).all(|r| b.layer(r).len() == 2));
    }

    #[test]
    fn unknown_names() {
        for name in ["heptagon", "free-0", "free-x", "cube", "torus-3"] {
            assert_eq!(builtin_group(name).unwrap_err(), Error::UnknownBuiltin(name.to_string()));
        }
    }

    #[test]
    fn document_colours_override_the_solver() {
        let doc =
            GroupDocument::parse("generators: a b c\nedge: a b\ncolour: a 1\ncolour: b 2\ncolour: c 3\n").unwrap();
        let tg = TestGroup::from_document("doc", doc).unwrap();
        assert_eq!(tg.coloring.n(), 3);
        let doc = GroupDocument::parse("generators: a b\nedge: a b\ncolour: a 1\ncolour: b 1\n").unwrap();
        assert!(TestGroup::from_document("doc", doc).is_err());
    }
}
