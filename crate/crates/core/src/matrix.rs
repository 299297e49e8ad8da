//! The integral reflection representation and its modular reductions.
//!
//! `h(s)` acts on the basis `{v_t}` by `v_s ↦ −v_s`, `v_t ↦ v_t + 2v_s`
//! when `s` and `t` do not commute, and fixes `v_t` when they do. Entries
//! of `h(a)` are bounded by `3^ℓ(a)`, which is what makes reduction modulo
//! `3^(2ν+2) + 1` injective on short elements.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::group::{CommutationGraph, Gen, GroupElement};

/// A square matrix with unbounded integer entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        IntMatrix { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        IntMatrix { dim, entries: rows.into_iter().flatten().map(BigInt::from).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or_default()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        IntMatrix { dim: n, entries }
    }

    /// In-place right multiplication by `h(s)`; only column operations are needed.
    pub fn mul_reflection(&mut self, s: Gen, g: &CommutationGraph) {
        right_multiply_by_reflection(self.dim, &mut self.entries, s, g);
    }

    /// Entries reduced to least nonnegative residues.
    pub fn reduce_mod(&self, modulus: &BigInt) -> ResidueMatrix {
        ResidueMatrix {
            modulus: modulus.clone(),
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.mod_floor(modulus)).collect(),
        }
    }
}

/// A matrix over `ℤ/mℤ` with canonical entries in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResidueMatrix {
    #[serde(serialize_with = "serialize_bigint")]
    modulus: BigInt,
    dim: usize,
    #[serde(serialize_with = "serialize_bigints")]
    entries: Vec<BigInt>,
}

fn serialize_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|e| e.to_string()))
}

impl ResidueMatrix {
    pub fn identity(dim: usize, modulus: &BigInt) -> Self {
        IntMatrix::identity(dim).reduce_mod(modulus)
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim, &self.modulus)
    }

    /// In-place right multiplication by `h(s)` modulo `m`.
    pub fn mul_reflection(&mut self, s: Gen, g: &CommutationGraph) {
        right_multiply_by_reflection(self.dim, &mut self.entries, s, g);
        for e in &mut self.entries {
            *e = e.mod_floor(&self.modulus);
        }
    }

    /// Canonical text form: entries in row-major order separated by spaces.
    pub fn canonical_string(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        format!("mod {}: {}", self.modulus, parts.join(" "))
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

/// `(M·h(s))[i][j]` is `−M[i][s]` for `j = s`, `M[i][j] + 2M[i][s]` when
/// `j ≠ s` does not commute with `s`, and `M[i][j]` otherwise.
fn right_multiply_by_reflection(dim: usize, entries: &mut [BigInt], s: Gen, g: &CommutationGraph) {
    let si = s.index();
    for row in entries.chunks_mut(dim) {
        let x = std::mem::take(&mut row[si]);
        for t in g.generators() {
            if t != s && !g.commute(s, t) {
                row[t.index()] += &x * 2;
            }
        }
        row[si] = -x;
    }
}

/// `h(s)` in the basis `{v_t}`; column `t` is the image of `v_t`.
pub fn reflection_matrix(s: Gen, g: &CommutationGraph) -> IntMatrix {
    let n = g.rank();
    let mut m = IntMatrix::identity(n);
    let si = s.index();
    m.entries[si * n + si] = BigInt::from(-1);
    for t in g.generators().filter(|&t| t != s) {
        if !g.commute(s, t) {
            m.entries[si * n + t.index()] = BigInt::from(2);
        }
    }
    m
}

/// `h(a)`, the product of `h(s)` over the normal-form letters of `a`.
pub fn element_matrix(g: &CommutationGraph, a: &GroupElement) -> IntMatrix {
    let mut m = IntMatrix::identity(g.rank());
    for &s in a.letters() {
        m.mul_reflection(s, g);
    }
    m
}

/// `3^(2ν+2) + 1`.
pub fn separation_modulus(nu: u64) -> BigInt {
    num_traits::pow(BigInt::from(3), (2 * nu + 2) as usize) + 1
}

/// `σ(a)`: `h(a)` with entries reduced modulo `3^(2ν+2) + 1`.
///
/// Reduces after every factor, which agrees with reducing the exact product.
pub fn sigma(g: &CommutationGraph, a: &GroupElement, nu: u64) -> ResidueMatrix {
    let mut m = ResidueMatrix::identity(g.rank(), &separation_modulus(nu));
    for &s in a.letters() {
        m.mul_reflection(s, g);
    }
    m
}
