//! Rooted qubit trees with `x`/`y`/`z`-labelled edges.
//!
//! Node ids are arbitrary `u32` values; the qubit position of a node is its rank
//! among the sorted ids, so trees numbered `1..=m` put node `j` on qubit `j-1`
//! and trees numbered `0..m` put node `j` on qubit `j`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliTerm};

/// Upper bound on the node count accepted by the builders.
pub const MAX_NODES: usize = 1 << 16;

fn slot(letter: Letter) -> Result<usize> {
    match letter {
        Letter::X => Ok(0),
        Letter::Y => Ok(1),
        Letter::Z => Ok(2),
        Letter::I => Err(Error::InvalidTree("edge label must be x, y or z".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitTree {
    ids: Vec<u32>,
    pos: HashMap<u32, usize>,
    root: usize,
    parent: Vec<Option<(usize, Letter)>>,
    children: Vec<[Option<usize>; 3]>,
}

/// JSON form: `{"m": 4, "root": 1, "edges": [[1, 2, "x"], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFile {
    pub m: usize,
    pub root: u32,
    pub edges: Vec<(u32, u32, String)>,
}

impl QubitTree {
    /// Builds and validates a tree from its root and `(parent, child, label)` edges.
    pub fn new(root: u32, edges: &[(u32, u32, Letter)]) -> Result<Self> {
        let mut id_set = BTreeSet::new();
        id_set.insert(root);
        for &(p, c, _) in edges {
            id_set.insert(p);
            id_set.insert(c);
        }
        if id_set.len() > MAX_NODES {
            return Err(Error::InvalidTree(format!(
                "{} nodes exceed the limit of {MAX_NODES}",
                id_set.len()
            )));
        }
        let ids: Vec<u32> = id_set.into_iter().collect();
        let pos: HashMap<u32, usize> = ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
        let n = ids.len();
        let mut parent = vec![None; n];
        let mut children = vec![[None; 3]; n];
        for &(p, c, l) in edges {
            let s = slot(l)?;
            if p == c {
                return Err(Error::InvalidTree(format!("self-loop at node {p}")));
            }
            let (pp, cp) = (pos[&p], pos[&c]);
            if c == root {
                return Err(Error::InvalidTree(format!(
                    "root {root} cannot have a parent"
                )));
            }
            if parent[cp].is_some() {
                return Err(Error::InvalidTree(format!(
                    "node {c} has more than one parent"
                )));
            }
            if children[pp][s].is_some() {
                return Err(Error::InvalidTree(format!(
                    "node {p} has two children labelled {}",
                    l.label()
                )));
            }
            parent[cp] = Some((pp, l));
            children[pp][s] = Some(cp);
        }
        let tree = QubitTree {
            root: pos[&root],
            ids,
            pos,
            parent,
            children,
        };
        let reached = tree.bfs_positions().len();
        if reached != n {
            return Err(Error::InvalidTree(format!(
                "{} of {n} nodes are not reachable from root {root}",
                n - reached
            )));
        }
        Ok(tree)
    }

    /// A lone root node.
    pub fn single(id: u32) -> Self {
        QubitTree::new(id, &[]).expect("single node tree")
    }

    /// Complete full ternary tree with `levels` levels, ids `1..=(3^levels-1)/2`
    /// in level order and children of each node labelled x, y, z.
    pub fn cf_ternary(levels: u32) -> Result<Self> {
        if levels == 0 {
            return Err(Error::InvalidArgument(
                "tree needs at least one level".into(),
            ));
        }
        let m = 3usize
            .checked_pow(levels)
            .map(|p| (p - 1) / 2)
            .filter(|&m| m <= MAX_NODES)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("ternary tree with {levels} levels is too large"))
            })?;
        let internal = (m - 1) / 3;
        let mut edges = Vec::with_capacity(m - 1);
        for j in 1..=internal as u32 {
            for (k, l) in Letter::XYZ.into_iter().enumerate() {
                edges.push((j, 3 * j - 1 + k as u32, l));
            }
        }
        QubitTree::new(1, &edges)
    }

    /// Complete full binary x-y tree: node `j` has children `2j` (x) and `2j+1` (y).
    pub fn cf_binary(levels: u32) -> Result<Self> {
        Self::cf_binary_labelled(levels, 1, Letter::X, Letter::Y, None)
    }

    /// Complete full binary x-z tree on ids `1..2^levels` (children `2j` via x,
    /// `2j+1` via z) with an extra root `0` attached to node 1 by an x-edge.
    pub fn cf_xz_rooted(levels: u32) -> Result<Self> {
        Self::cf_binary_labelled(levels, 1, Letter::X, Letter::Z, Some(0))
    }

    fn cf_binary_labelled(
        levels: u32,
        first: u32,
        left: Letter,
        right: Letter,
        extra_root: Option<u32>,
    ) -> Result<Self> {
        if levels == 0 {
            return Err(Error::InvalidArgument(
                "tree needs at least one level".into(),
            ));
        }
        if levels > 16 {
            return Err(Error::InvalidArgument(format!(
                "binary tree with {levels} levels is too large"
            )));
        }
        let m = (1u32 << levels) - 1;
        let mut edges = Vec::with_capacity(m as usize);
        if let Some(r) = extra_root {
            edges.push((r, first, Letter::X));
        }
        for j in 1..(1u32 << (levels - 1)) {
            edges.push((j, 2 * j, left));
            edges.push((j, 2 * j + 1, right));
        }
        QubitTree::new(extra_root.unwrap_or(first), &edges)
    }

    /// Jordan-Wigner chain `1 → 2 → … → m` with every edge labelled z.
    pub fn jw_chain(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_NODES {
            return Err(Error::InvalidArgument(format!(
                "chain length {m} out of range"
            )));
        }
        let edges: Vec<_> = (1..m as u32).map(|j| (j, j + 1, Letter::Z)).collect();
        QubitTree::new(1, &edges)
    }

    pub fn from_file(file: &TreeFile) -> Result<Self> {
        let edges = file
            .edges
            .iter()
            .enumerate()
            .map(|(k, (p, c, l))| {
                let letter = match l.as_str() {
                    "x" => Letter::X,
                    "y" => Letter::Y,
                    "z" => Letter::Z,
                    other => {
                        return Err(Error::Parse(format!(
                            "edges[{k}]: label must be \"x\", \"y\" or \"z\", got {other:?}"
                        )))
                    }
                };
                Ok((*p, *c, letter))
            })
            .collect::<Result<Vec<_>>>()?;
        let tree = QubitTree::new(file.root, &edges)?;
        if tree.node_count() != file.m {
            return Err(Error::Parse(format!(
                "field m = {} but edges describe {} nodes",
                file.m,
                tree.node_count()
            )));
        }
        Ok(tree)
    }

    pub fn to_file(&self) -> TreeFile {
        TreeFile {
            m: self.node_count(),
            root: self.root(),
            edges: self
                .edges()
                .into_iter()
                .map(|(p, c, l)| (p, c, l.label().to_string()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TreeFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("tree file: {e}")))?;
        QubitTree::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("tree serialization")
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn root(&self) -> u32 {
        self.ids[self.root]
    }

    /// Node ids in qubit order.
    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn contains(&self, id: u32) -> bool {
        self.pos.contains_key(&id)
    }

    /// Qubit position of node `id`.
    pub fn position(&self, id: u32) -> Result<usize> {
        self.pos.get(&id).copied().ok_or(Error::UnknownNode(id))
    }

    pub fn id_at(&self, position: usize) -> u32 {
        self.ids[position]
    }

    /// Parent id and the label of the edge into `id`.
    pub fn parent(&self, id: u32) -> Result<Option<(u32, Letter)>> {
        let p = self.position(id)?;
        Ok(self.parent[p].map(|(q, l)| (self.ids[q], l)))
    }

    pub fn child(&self, id: u32, label: Letter) -> Result<Option<u32>> {
        let p = self.position(id)?;
        Ok(self.children[p][slot(label)?].map(|c| self.ids[c]))
    }

    /// Children as `(label, id)` in x, y, z order.
    pub fn children(&self, id: u32) -> Result<Vec<(Letter, u32)>> {
        let p = self.position(id)?;
        Ok(Letter::XYZ
            .into_iter()
            .zip(self.children[p])
            .filter_map(|(l, c)| c.map(|c| (l, self.ids[c])))
            .collect())
    }

    pub fn is_leaf(&self, id: u32) -> Result<bool> {
        Ok(self.children(id)?.is_empty())
    }

    /// All edges, sorted by parent id then label.
    pub fn edges(&self) -> Vec<(u32, u32, Letter)> {
        let mut out = Vec::with_capacity(self.node_count().saturating_sub(1));
        for (p, ch) in self.children.iter().enumerate() {
            for (l, c) in Letter::XYZ.into_iter().zip(ch) {
                if let Some(c) = c {
                    out.push((self.ids[p], self.ids[*c], l));
                }
            }
        }
        out
    }

    /// Labels occurring on at least one edge.
    pub fn labels_used(&self) -> BTreeSet<Letter> {
        self.edges().into_iter().map(|e| e.2).collect()
    }

    /// Number of nodes on the path from the root to `id`, inclusive.
    pub fn level(&self, id: u32) -> Result<usize> {
        Ok(self.path_to(id)?.len() + 1)
    }

    /// `(ancestor id, label)` pairs along the root-to-`id` path, excluding `id`.
    pub fn path_to(&self, id: u32) -> Result<Vec<(u32, Letter)>> {
        let mut p = self.position(id)?;
        let mut out = Vec::new();
        while let Some((q, l)) = self.parent[p] {
            out.push((self.ids[q], l));
            p = q;
        }
        out.reverse();
        Ok(out)
    }

    /// Proper descendants of `id`, breadth first.
    pub fn descendants(&self, id: u32) -> Result<Vec<u32>> {
        let start = self.position(id)?;
        let mut out = Vec::new();
        let mut queue: VecDeque<usize> = self.children[start].iter().flatten().copied().collect();
        while let Some(p) = queue.pop_front() {
            out.push(self.ids[p]);
            queue.extend(self.children[p].iter().flatten().copied());
        }
        Ok(out)
    }

    /// Positions in breadth-first order from the root.
    pub(crate) fn bfs_positions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.ids.len());
        let mut seen = vec![false; self.ids.len()];
        let mut queue = VecDeque::from([self.root]);
        seen[self.root] = true;
        while let Some(p) = queue.pop_front() {
            out.push(p);
            for &c in self.children[p].iter().flatten() {
                if !seen[c] {
                    seen[c] = true;
                    queue.push_back(c);
                }
            }
        }
        out
    }

    /// Removes `id` together with its whole subtree.
    pub fn prune(&self, id: u32) -> Result<QubitTree> {
        self.position(id)?;
        if id == self.root() {
            return Err(Error::InvalidArgument("cannot prune the root".into()));
        }
        let removed: BTreeSet<u32> = std::iter::once(id).chain(self.descendants(id)?).collect();
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .filter(|(_, c, _)| !removed.contains(c))
            .collect();
        QubitTree::new(self.root(), &edges)
    }

    /// Stub operator: `i` times `σ^μ` on every ancestor, with `μ` the label of the
    /// edge leaving that ancestor towards `id`.
    pub fn stub(&self, id: u32) -> Result<PauliTerm> {
        let path = self.path_to(id)?;
        let mut t = PauliTerm::identity(self.node_count()).with_phase(1);
        for (anc, l) in path {
            t.set_letter(self.pos[&anc], l);
        }
        Ok(t)
    }

    /// `Some(levels)` if this is exactly [`QubitTree::cf_binary`]`(levels)`.
    pub fn cf_binary_levels(&self) -> Option<u32> {
        let m = self.node_count();
        if !(m + 1).is_power_of_two() || self.root() != 1 {
            return None;
        }
        let levels = (m + 1).trailing_zeros();
        let expected = QubitTree::cf_binary(levels).ok()?;
        (expected == *self).then_some(levels)
    }

    /// Per-node levels keyed by id.
    pub fn levels(&self) -> BTreeMap<u32, usize> {
        let mut lv = vec![0usize; self.node_count()];
        for p in self.bfs_positions() {
            lv[p] = match self.parent[p] {
                Some((q, _)) => lv[q] + 1,
                None => 1,
            };
        }
        self.ids.iter().copied().zip(lv).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ternary_sizes() {
        assert_eq!(QubitTree::cf_ternary(1).unwrap().node_count(), 1);
        let t2 = QubitTree::cf_ternary(2).unwrap();
        assert_eq!(t2.node_count(), 4);
        assert_eq!(
            t2.children(1).unwrap(),
            vec![(Letter::X, 2), (Letter::Y, 3), (Letter::Z, 4)]
        );
        assert_eq!(QubitTree::cf_ternary(3).unwrap().node_count(), 13);
        assert!(QubitTree::cf_ternary(0).is_err());
    }

    #[test]
    fn ternary_level_three_layout() {
        let t = QubitTree::cf_ternary(3).unwrap();
        assert_eq!(
            t.children(2).unwrap(),
            vec![(Letter::X, 5), (Letter::Y, 6), (Letter::Z, 7)]
        );
        assert_eq!(
            t.children(4).unwrap(),
            vec![(Letter::X, 11), (Letter::Y, 12), (Letter::Z, 13)]
        );
        assert_eq!(t.stub(13).unwrap().to_string(), "+iZIIZIIIIIIIII");
    }

    #[test]
    fn binary_sizes() {
        assert_eq!(QubitTree::cf_binary(1).unwrap().node_count(), 1);
        let b2 = QubitTree::cf_binary(2).unwrap();
        assert_eq!(b2.edges(), vec![(1, 2, Letter::X), (1, 3, Letter::Y)]);
        let b4 = QubitTree::cf_binary(4).unwrap();
        assert_eq!(b4.node_count(), 15);
        for leaf in 8..=15 {
            assert!(b4.is_leaf(leaf).unwrap());
        }
        assert!(!b4.is_leaf(7).unwrap());
        assert_eq!(b4.cf_binary_levels(), Some(4));
        assert!(QubitTree::cf_binary(0).is_err());
    }

    #[test]
    fn chain() {
        assert_eq!(QubitTree::jw_chain(1).unwrap().node_count(), 1);
        let c = QubitTree::jw_chain(3).unwrap();
        assert_eq!(c.edges(), vec![(1, 2, Letter::Z), (2, 3, Letter::Z)]);
        assert_eq!(c.cf_binary_levels(), None);
    }

    #[test]
    fn stubs_binary() {
        let b = QubitTree::cf_binary(2).unwrap();
        assert_eq!(b.stub(1).unwrap().to_string(), "+iIII");
        assert_eq!(b.stub(2).unwrap().to_string(), "+iXII");
        assert_eq!(b.stub(3).unwrap().to_string(), "+iYII");
        assert!(matches!(b.stub(9), Err(Error::UnknownNode(9))));
    }

    #[test]
    fn prune_examples() {
        let t = QubitTree::cf_ternary(2).unwrap().prune(4).unwrap();
        assert_eq!(t.node_count(), 3);
        let c = QubitTree::jw_chain(3).unwrap().prune(3).unwrap();
        assert_eq!(c, QubitTree::jw_chain(2).unwrap());
        assert!(QubitTree::jw_chain(3).unwrap().prune(1).is_err());
        assert!(QubitTree::jw_chain(3).unwrap().prune(7).is_err());
        let sub = QubitTree::cf_ternary(3).unwrap().prune(2).unwrap();
        assert_eq!(sub.node_count(), 9);
    }

    #[test]
    fn invalid_trees() {
        use Letter::*;
        assert!(QubitTree::new(1, &[(1, 2, X), (1, 3, X)]).is_err());
        assert!(QubitTree::new(1, &[(1, 2, X), (3, 2, Y)]).is_err());
        assert!(QubitTree::new(1, &[(2, 3, X)]).is_err());
        assert!(QubitTree::new(1, &[(1, 1, X)]).is_err());
        assert!(QubitTree::new(1, &[(1, 2, I)]).is_err());
        assert!(QubitTree::new(1, &[(1, 2, X), (2, 1, Y)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = QubitTree::cf_xz_rooted(3).unwrap();
        let back = QubitTree::from_json(&t.to_json()).unwrap();
        assert_eq!(t, back);
        let text = r#"{"m": 3, "root": 1, "edges": [[1, 2, "x"], [1, 3, "w"]]}"#;
        assert!(matches!(QubitTree::from_json(text), Err(Error::Parse(_))));
        let text = r#"{"m": 4, "root": 1, "edges": [[1, 2, "x"], [1, 3, "y"]]}"#;
        assert!(matches!(QubitTree::from_json(text), Err(Error::Parse(_))));
    }

    #[test]
    fn rooted_xz_layout() {
        let t = QubitTree::cf_xz_rooted(3).unwrap();
        assert_eq!(t.node_count(), 8);
        assert_eq!(t.root(), 0);
        assert_eq!(t.stub(7).unwrap().to_string(), "+iXZIZIIII");
    }
}
