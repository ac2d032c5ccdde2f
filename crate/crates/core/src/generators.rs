//! Anticommuting generator sets emitted from qubit trees.
//!
//! Every node `j` with fewer than three children contributes `r_j σ_j^μ` for each
//! missing label `μ`, where `r_j` is the node's stub. A tree with `m` nodes always
//! yields `2m + 1` pairwise anticommuting generators whose product is a phase
//! times the identity.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliTerm};
use crate::tree::QubitTree;

/// Generators of one tree, with the `(node, label)` each was emitted from.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    tree: QubitTree,
    generators: Vec<PauliTerm>,
    origins: Vec<(u32, Letter)>,
}

/// Outcome of the structural checks on a generator set.
#[derive(Clone, Debug, PartialEq)]
pub struct Validation {
    pub count: usize,
    pub expected_count: usize,
    /// First pair `(a, b)` (list indices) found to commute, if any.
    pub commuting_pair: Option<(usize, usize)>,
    /// Product of all generators in list order.
    pub product: PauliTerm,
}

impl Validation {
    pub fn count_ok(&self) -> bool {
        self.count == self.expected_count
    }

    pub fn all_anticommute(&self) -> bool {
        self.commuting_pair.is_none()
    }

    pub fn product_is_scalar(&self) -> bool {
        self.product.is_identity_word()
    }

    pub fn passed(&self) -> bool {
        self.count_ok() && self.all_anticommute() && self.product_is_scalar()
    }
}

impl GeneratorSet {
    /// Emits the generators of `tree`.
    ///
    /// Complete binary x-y trees with two or more nodes use the consecutive indexing where the first
    /// `m` entries are the z-generators of nodes `1..=m` and terminal node `t`
    /// then contributes its x and y generators at indices `2t` and `2t+1`
    /// (1-based). All other trees, the single node included, are ordered by `(node id, label)`.
    pub fn from_tree(tree: &QubitTree) -> GeneratorSet {
        let mut emitted = Vec::with_capacity(2 * tree.node_count() + 1);
        for &id in tree.ids() {
            let stub = tree.stub(id).expect("node from the tree");
            let pos = tree.position(id).unwrap();
            for l in Letter::XYZ {
                if tree.child(id, l).unwrap().is_none() {
                    let mut g = stub.clone();
                    g.set_letter(pos, l);
                    emitted.push(((id, l), g));
                }
            }
        }
        if tree.node_count() > 1 && tree.cf_binary_levels().is_some() {
            let rank = |&((id, l), _): &((u32, Letter), PauliTerm)| match l {
                Letter::Z => (0, id, 0),
                Letter::X => (1, id, 0),
                _ => (1, id, 1),
            };
            emitted.sort_by_key(rank);
        }
        let (origins, generators) = emitted.into_iter().unzip();
        GeneratorSet {
            tree: tree.clone(),
            generators,
            origins,
        }
    }

    pub fn tree(&self) -> &QubitTree {
        &self.tree
    }

    pub fn width(&self) -> usize {
        self.tree.node_count()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[PauliTerm] {
        &self.generators
    }

    pub fn origins(&self) -> &[(u32, Letter)] {
        &self.origins
    }

    /// Generator emitted at `(node, label)`, if that label is free at the node.
    pub fn index_of(&self, node: u32, label: Letter) -> Option<usize> {
        self.origins.iter().position(|&o| o == (node, label))
    }

    /// The path word (`"xzy"` …) recognised by the tree automaton for generator `idx`.
    pub fn path_word(&self, idx: usize) -> String {
        let (node, l) = self.origins[idx];
        self.tree
            .path_to(node)
            .unwrap()
            .into_iter()
            .map(|(_, l)| l.label())
            .chain(std::iter::once(l.label()))
            .collect()
    }

    pub fn validate(&self) -> Validation {
        let mut commuting_pair = None;
        'outer: for a in 0..self.len() {
            for b in a + 1..self.len() {
                if !self.generators[a]
                    .anticommutes(&self.generators[b])
                    .unwrap()
                {
                    commuting_pair = Some((a, b));
                    break 'outer;
                }
            }
        }
        let product = self
            .generators
            .iter()
            .fold(PauliTerm::identity(self.width()), |acc, g| &acc * g);
        Validation {
            count: self.len(),
            expected_count: 2 * self.width() + 1,
            commuting_pair,
            product,
        }
    }

    /// `σ^z ⊗ g_j` on a new leading qubit: `2m+1` anticommuting terms whose
    /// product is a phase times `σ^z` on the new qubit.
    pub fn extend_odd(&self) -> Vec<PauliTerm> {
        self.generators
            .iter()
            .map(|g| g.prepend(Letter::Z))
            .collect()
    }

    /// `σ^x ⊗ g_j` for every generator plus `iσ^y ⊗ 1`: `2m+2` anticommuting terms.
    ///
    /// The extra element carries the factor `i` so that it squares to `-1` like
    /// the others. Undefined for a single node, where `g_1 g_2 = g_3`.
    pub fn extend_spin_even(&self) -> Result<Vec<PauliTerm>> {
        if self.width() < 2 {
            return Err(Error::Unsupported(
                "even extension needs m > 1: for one qubit the product of two generators equals the third".into(),
            ));
        }
        let mut out: Vec<PauliTerm> = self
            .generators
            .iter()
            .map(|g| g.prepend(Letter::X))
            .collect();
        out.push(
            PauliTerm::identity(self.width())
                .prepend(Letter::Y)
                .with_phase(1),
        );
        Ok(out)
    }

    /// Whether products of subsets of the generators reach all `4^m` Pauli words
    /// (up to phase). Enumerates `2^(2m+1)` subsets, so only `m <= 4` is accepted.
    pub fn spans_pauli_basis(&self) -> Result<bool> {
        let m = self.width();
        if m > 4 {
            return Err(Error::InvalidArgument(format!(
                "basis completeness check limited to m <= 4, got {m}"
            )));
        }
        let n = self.len();
        let mut words = HashSet::new();
        for mask in 0u32..(1 << n) {
            let mut acc = PauliTerm::identity(m);
            for (k, g) in self.generators.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    acc = &acc * g;
                }
            }
            words.insert(acc.word());
        }
        Ok(words.len() == 1 << (2 * m))
    }
}
