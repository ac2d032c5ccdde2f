//! XOR relations between qubit bits `n` and encoded occupation bits `ň`.
//!
//! Each node `j` couples to a set `c(j)` of "children" in the general-tree
//! sense: both children `2j, 2j+1` in a binary x-y tree, or the z-linked chain
//! hanging off the x-child in an x-z tree. Then `ň_j = n_j ⊕ n_{c(j)}` and the
//! inverse is `n_j = ň_j ⊕ ň_{D(j)}` with `D(j)` the general-tree descendants.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliTerm};
use crate::tree::QubitTree;

/// Rooted tree with unbounded fan-out; children keep their given order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GTree {
    root: u32,
    children: BTreeMap<u32, Vec<u32>>,
}

impl GTree {
    /// Builds a tree from `(child, parent)` pairs. Children are ordered by id.
    pub fn from_parents(root: u32, parents: &[(u32, u32)]) -> Result<Self> {
        let mut children: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        children.entry(root).or_default();
        for &(c, p) in parents {
            children.entry(p).or_default().push(c);
            children.entry(c).or_default();
        }
        for list in children.values_mut() {
            list.sort_unstable();
        }
        GTree::new(root, children)
    }

    /// Builds a tree from explicit ordered child lists.
    pub fn new(root: u32, mut children: BTreeMap<u32, Vec<u32>>) -> Result<Self> {
        let listed: Vec<u32> = children.values().flatten().copied().collect();
        for &c in &listed {
            children.entry(c).or_default();
        }
        children.entry(root).or_default();
        let mut seen = BTreeMap::new();
        let mut stack = vec![root];
        while let Some(j) = stack.pop() {
            if seen.insert(j, ()).is_some() {
                return Err(Error::InvalidTree(format!("node {j} reached twice")));
            }
            stack.extend(children[&j].iter().copied());
        }
        if seen.len() != children.len() || listed.len() + 1 != children.len() {
            return Err(Error::InvalidTree(
                "general tree is not connected and acyclic".into(),
            ));
        }
        Ok(GTree { root, children })
    }

    /// Fenwick tree on ids `0..n`: the parent of `j` is `j | (j + 1)`.
    pub fn fenwick(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "Fenwick tree needs at least one node".into(),
            ));
        }
        let parents: Vec<(u32, u32)> = (0..n)
            .filter_map(|j| {
                let p = j | (j + 1);
                (p < n).then_some((j, p))
            })
            .collect();
        let roots: Vec<u32> = (0..n).filter(|j| (j | (j + 1)) >= n).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "Fenwick structure on {n} nodes is a forest; use a power of two"
            )));
        }
        GTree::from_parents(roots[0], &parents)
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    pub fn children(&self, id: u32) -> Result<&[u32]> {
        self.children
            .get(&id)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownNode(id))
    }

    /// Proper descendants of `id`, depth first in child order.
    pub fn descendants(&self, id: u32) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        let mut stack: Vec<u32> = self.children(id)?.iter().rev().copied().collect();
        while let Some(j) = stack.pop() {
            out.push(j);
            stack.extend(self.children[&j].iter().rev().copied());
        }
        Ok(out)
    }

    /// Encodes as a binary x-z qubit tree: node `j` with children `c_1 … c_l`
    /// gets an x-edge to `c_1` and the children are chained `c_1 → … → c_l` by z-edges.
    pub fn to_xz_tree(&self) -> Result<QubitTree> {
        let mut edges = Vec::with_capacity(self.node_count() - 1);
        for (&j, ch) in &self.children {
            if let Some(&first) = ch.first() {
                edges.push((j, first, Letter::X));
            }
            for w in ch.windows(2) {
                edges.push((w[0], w[1], Letter::Z));
            }
        }
        QubitTree::new(self.root, &edges)
    }
}

/// Encodes a general tree as an x-z qubit tree.
pub fn gtree_to_xz(gtree: &GTree) -> Result<QubitTree> {
    gtree.to_xz_tree()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Internal,
    Terminal,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Internal => "internal",
            NodeKind::Terminal => "terminal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Entry {
    chain: Vec<usize>,
    tree_desc: Vec<usize>,
    gen_desc: Vec<usize>,
}

/// Per-node index sets driving the forward and inverse XOR maps.
///
/// Bit vectors are indexed by qubit position (the node's rank among the ids).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccupationMap {
    ids: Vec<u32>,
    entries: Vec<Entry>,
}

impl OccupationMap {
    /// Map of a complete binary x-y tree: `c(j) = {2j, 2j+1}` for internal `j`.
    pub fn binary_xy(tree: &QubitTree) -> Result<Self> {
        if tree.cf_binary_levels().is_none() {
            return Err(Error::InvalidArgument(
                "expected a complete binary x-y tree".into(),
            ));
        }
        Self::from_coupling(tree, |j| {
            Ok(tree.children(j)?.into_iter().map(|(_, c)| c).collect())
        })
    }

    /// Map of an x-z tree: `c(j)` is the z-chain starting at the x-child of `j`.
    pub fn xz(tree: &QubitTree) -> Result<Self> {
        if tree.labels_used().contains(&Letter::Y) {
            return Err(Error::InvalidArgument(
                "x-z tree must not contain y-edges".into(),
            ));
        }
        Self::from_coupling(tree, |j| z_chain_from_x_child(tree, j))
    }

    /// Jordan-Wigner map: every node is its own occupation bit.
    pub fn identity(tree: &QubitTree) -> Result<Self> {
        Self::from_coupling(tree, |_| Ok(Vec::new()))
    }

    fn from_coupling(tree: &QubitTree, coupling: impl Fn(u32) -> Result<Vec<u32>>) -> Result<Self> {
        let ids = tree.ids().to_vec();
        let pos = |id: u32| tree.position(id).unwrap();
        let chains: Vec<Vec<usize>> = ids
            .iter()
            .map(|&j| Ok(coupling(j)?.into_iter().map(pos).collect()))
            .collect::<Result<_>>()?;
        // D(j): transitive closure of the coupling relation.
        let gen_desc: Vec<Vec<usize>> = (0..ids.len())
            .map(|p| {
                let mut out = Vec::new();
                let mut stack: Vec<usize> = chains[p].iter().rev().copied().collect();
                while let Some(q) = stack.pop() {
                    out.push(q);
                    stack.extend(chains[q].iter().rev().copied());
                }
                out
            })
            .collect();
        let entries = ids
            .iter()
            .enumerate()
            .map(|(p, &j)| Entry {
                chain: chains[p].clone(),
                tree_desc: tree.descendants(j).unwrap().into_iter().map(pos).collect(),
                gen_desc: gen_desc[p].clone(),
            })
            .collect();
        Ok(OccupationMap { ids, entries })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    fn position(&self, id: u32) -> Result<usize> {
        self.ids
            .binary_search(&id)
            .map_err(|_| Error::UnknownNode(id))
    }

    fn to_ids(&self, ps: &[usize]) -> Vec<u32> {
        ps.iter().map(|&p| self.ids[p]).collect()
    }

    pub fn kind(&self, id: u32) -> Result<NodeKind> {
        let e = &self.entries[self.position(id)?];
        Ok(if e.chain.is_empty() {
            NodeKind::Terminal
        } else {
            NodeKind::Internal
        })
    }

    /// `c(j)`: nodes whose bits are XOR-ed into `ň_j`.
    pub fn chain(&self, id: u32) -> Result<Vec<u32>> {
        Ok(self.to_ids(&self.entries[self.position(id)?].chain))
    }

    /// `d(j)`: descendants in the qubit tree.
    pub fn tree_descendants(&self, id: u32) -> Result<Vec<u32>> {
        Ok(self.to_ids(&self.entries[self.position(id)?].tree_desc))
    }

    /// `D(j)`: descendants in the general tree encoded by the coupling.
    pub fn descendants(&self, id: u32) -> Result<Vec<u32>> {
        Ok(self.to_ids(&self.entries[self.position(id)?].gen_desc))
    }

    /// `s(j) = {j} ∪ D(j)`.
    pub fn subtree(&self, id: u32) -> Result<Vec<u32>> {
        let mut out = vec![id];
        out.extend(self.descendants(id)?);
        Ok(out)
    }

    /// `z` word on `{j} ∪ c(j)`; the number operator of mode `j` is `(1 - word)/2`.
    pub fn parity_word(&self, id: u32) -> Result<PauliTerm> {
        let p = self.position(id)?;
        Ok(PauliTerm::z_string(
            self.len(),
            std::iter::once(p).chain(self.entries[p].chain.iter().copied()),
        ))
    }

    fn check_len(&self, bits: &[bool]) -> Result<()> {
        if bits.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: bits.len(),
            });
        }
        Ok(())
    }

    /// `ň_j = n_j ⊕ ⨁_{k ∈ c(j)} n_k`.
    pub fn forward(&self, n: &[bool]) -> Result<Vec<bool>> {
        self.check_len(n)?;
        Ok(self
            .entries
            .iter()
            .enumerate()
            .map(|(p, e)| e.chain.iter().fold(n[p], |acc, &k| acc ^ n[k]))
            .collect())
    }

    /// `n_j = ň_j ⊕ ⨁_{k ∈ D(j)} ň_k`.
    pub fn inverse(&self, encoded: &[bool]) -> Result<Vec<bool>> {
        self.check_len(encoded)?;
        Ok(self
            .entries
            .iter()
            .enumerate()
            .map(|(p, e)| {
                e.gen_desc
                    .iter()
                    .fold(encoded[p], |acc, &k| acc ^ encoded[k])
            })
            .collect())
    }

    /// CSV with header `node,kind,c,s,D`; sets are space-separated ids.
    pub fn to_csv(&self) -> String {
        let join = |v: Vec<u32>| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        let mut out = String::from("node,kind,c,s,D\n");
        for &id in &self.ids {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                id,
                self.kind(id).unwrap().as_str(),
                join(self.chain(id).unwrap()),
                join(self.subtree(id).unwrap()),
                join(self.descendants(id).unwrap()),
            ));
        }
        out
    }
}

/// Chain `c_1 → c_2 → …` reached from `j` by one x-edge followed by z-edges.
pub(crate) fn z_chain_from_x_child(tree: &QubitTree, j: u32) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = tree.child(j, Letter::X)?;
    while let Some(c) = cur {
        out.push(c);
        cur = tree.child(c, Letter::Z)?;
    }
    Ok(out)
}

/// Parses a bit string such as `"0110"`.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("bit string {s:?} contains {c:?}"))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    #[test]
    fn binary_forward_by_hand() {
        let map = OccupationMap::binary_xy(&QubitTree::cf_binary(2).unwrap()).unwrap();
        assert_eq!(map.forward(&bits("110")).unwrap(), bits("010"));
        assert_eq!(map.forward(&bits("000")).unwrap(), bits("000"));
        assert_eq!(map.chain(1).unwrap(), vec![2, 3]);
        assert_eq!(map.kind(2).unwrap(), NodeKind::Terminal);
    }

    #[test]
    fn length_mismatch() {
        let map = OccupationMap::binary_xy(&QubitTree::cf_binary(2).unwrap()).unwrap();
        assert!(matches!(
            map.forward(&bits("11")),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(map.inverse(&bits("1111")).is_err());
    }

    #[test]
    fn fenwick_eight() {
        let g = GTree::fenwick(8).unwrap();
        assert_eq!(g.root(), 7);
        assert_eq!(g.children(7).unwrap(), &[3, 5, 6]);
        assert_eq!(g.children(3).unwrap(), &[1, 2]);
        assert_eq!(g.children(1).unwrap(), &[0]);
        assert_eq!(g.children(5).unwrap(), &[4]);
        assert!(GTree::fenwick(6).is_err());
    }

    #[test]
    fn gtree_encoding_of_three_children() {
        let mut ch = BTreeMap::new();
        ch.insert(1, vec![2, 3, 4]);
        let g = GTree::new(1, ch).unwrap();
        let t = g.to_xz_tree().unwrap();
        assert_eq!(
            t.edges(),
            vec![(1, 2, Letter::X), (2, 3, Letter::Z), (3, 4, Letter::Z)]
        );
        let mut ch = BTreeMap::new();
        ch.insert(1, vec![2]);
        let t = GTree::new(1, ch).unwrap().to_xz_tree().unwrap();
        assert_eq!(t.edges(), vec![(1, 2, Letter::X)]);
    }

    #[test]
    fn bk_descendant_sets() {
        let t = GTree::fenwick(8).unwrap().to_xz_tree().unwrap();
        let map = OccupationMap::xz(&t).unwrap();
        let mut d = map.descendants(3).unwrap();
        d.sort();
        assert_eq!(d, vec![0, 1, 2]);
        let mut td = map.tree_descendants(3).unwrap();
        td.sort();
        assert_eq!(td, vec![0, 1, 2, 4, 5, 6]);
    }

    #[test]
    fn invalid_gtrees() {
        let mut ch = BTreeMap::new();
        ch.insert(1, vec![2]);
        ch.insert(2, vec![1]);
        assert!(GTree::new(1, ch).is_err());
        let mut ch = BTreeMap::new();
        ch.insert(1, vec![2]);
        ch.insert(3, vec![4]);
        assert!(GTree::new(1, ch).is_err());
    }

    #[test]
    fn csv_rows() {
        let map = OccupationMap::binary_xy(&QubitTree::cf_binary(2).unwrap()).unwrap();
        assert_eq!(
            map.to_csv(),
            "node,kind,c,s,D\n1,internal,2 3,1 2 3,2 3\n2,terminal,,2,\n3,terminal,,3,\n"
        );
    }
}
