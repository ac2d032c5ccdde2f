//! Ladder operators built from pairs of tree generators.
//!
//! A mode pairs two anticommuting generators `e′, e″` (each squaring to `-1`)
//! into `a = (e′ + i e″)/(2i)`. Writing `e′ = iP′`, `e″ = iP″` with Hermitian
//! words gives `a = ½P′ + ½iP″`.

use crate::dense::{DenseOperator, StateVector, C64};
use crate::error::{Error, Result};
use crate::generators::GeneratorSet;
use crate::occupation::{z_chain_from_x_child, GTree, OccupationMap};
use crate::pauli::{Letter, PauliTerm};
use crate::tree::QubitTree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderOperator {
    mode: u32,
    e_prime: PauliTerm,
    e_dprime: PauliTerm,
}

fn squares_to_minus_one(t: &PauliTerm) -> bool {
    let sq = t * t;
    sq.is_identity_word() && sq.phase() == 2
}

impl LadderOperator {
    pub fn new(mode: u32, e_prime: PauliTerm, e_dprime: PauliTerm) -> Result<Self> {
        if !squares_to_minus_one(&e_prime) || !squares_to_minus_one(&e_dprime) {
            return Err(Error::InvalidArgument(format!(
                "mode {mode}: both generators must square to -1"
            )));
        }
        if !e_prime.anticommutes(&e_dprime)? {
            return Err(Error::InvalidArgument(format!(
                "mode {mode}: generators commute"
            )));
        }
        Ok(LadderOperator {
            mode,
            e_prime,
            e_dprime,
        })
    }

    pub fn mode(&self) -> u32 {
        self.mode
    }

    pub fn e_prime(&self) -> &PauliTerm {
        &self.e_prime
    }

    pub fn e_dprime(&self) -> &PauliTerm {
        &self.e_dprime
    }

    pub fn width(&self) -> usize {
        self.e_prime.width()
    }

    /// Hermitian words `(P′, P″)` with `a = ½P′ + ½iP″`.
    pub fn hermitian_parts(&self) -> (PauliTerm, PauliTerm) {
        (
            self.e_prime.clone().times_i(3),
            self.e_dprime.clone().times_i(3),
        )
    }

    /// Dense matrix of the annihilator.
    pub fn annihilator(&self) -> Result<DenseOperator> {
        let (p1, p2) = self.hermitian_parts();
        Ok(&p1.to_dense()?.scale(C64::new(0.5, 0.0)) + &p2.to_dense()?.scale(C64::new(0.0, 0.5)))
    }

    /// Dense matrix of the creator.
    pub fn creator(&self) -> Result<DenseOperator> {
        Ok(self.annihilator()?.adjoint())
    }

    /// Two-line listing of `a_j` and `a_j†` as Pauli sums.
    pub fn listing(&self) -> String {
        let (p1, p2) = self.hermitian_parts();
        format!(
            "a_{j} = ½({p1}) + ½i({p2})\na_{j}† = ½({p1}) - ½i({p2})",
            j = self.mode
        )
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EncodingKind {
    JordanWigner,
    BinaryXy,
    Xz,
}

/// Number operator `(1 - P)/2` stored through its z-only word `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberOperator {
    node: u32,
    parity: PauliTerm,
}

impl NumberOperator {
    pub fn node(&self) -> u32 {
        self.node
    }

    pub fn parity_word(&self) -> &PauliTerm {
        &self.parity
    }

    /// Eigenvalue on the basis state with qubit bits `bits`.
    pub fn eigenvalue(&self, bits: &[bool]) -> Result<bool> {
        if bits.len() != self.parity.width() {
            return Err(Error::LengthMismatch {
                expected: self.parity.width(),
                got: bits.len(),
            });
        }
        Ok(self
            .parity
            .support()
            .into_iter()
            .fold(false, |acc, p| acc ^ bits[p]))
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        let m = self.parity.width();
        let half = C64::new(0.5, 0.0);
        Ok(&DenseOperator::identity(m)?.scale(half) - &self.parity.to_dense()?.scale(half))
    }
}

/// A complete set of ladder operators on one qubit tree.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionEncoding {
    kind: EncodingKind,
    generators: GeneratorSet,
    ladders: Vec<LadderOperator>,
    occupation: OccupationMap,
}

impl FermionEncoding {
    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    pub fn tree(&self) -> &QubitTree {
        self.generators.tree()
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn width(&self) -> usize {
        self.ladders.len()
    }

    /// Ladder operators ordered by node id.
    pub fn ladders(&self) -> &[LadderOperator] {
        &self.ladders
    }

    pub fn ladder(&self, mode: u32) -> Result<&LadderOperator> {
        let p = self.tree().position(mode)?;
        Ok(&self.ladders[p])
    }

    pub fn occupation(&self) -> &OccupationMap {
        &self.occupation
    }

    pub fn number_operator(&self, mode: u32) -> Result<NumberOperator> {
        Ok(NumberOperator {
            node: mode,
            parity: self.occupation.parity_word(mode)?,
        })
    }

    /// Whether the `2m` terms `e′_j, e″_j` pairwise anticommute.
    pub fn symbolic_car(&self) -> bool {
        let terms: Vec<&PauliTerm> = self
            .ladders
            .iter()
            .flat_map(|l| [&l.e_prime, &l.e_dprime])
            .collect();
        terms
            .iter()
            .enumerate()
            .all(|(a, ta)| terms[a + 1..].iter().all(|tb| ta.anticommutes(tb).unwrap()))
    }

    /// Largest entry deviation from `{a_j, a_k} = 0` and `{a_j, a_k†} = δ_jk`.
    pub fn car_deviation(&self) -> Result<f64> {
        let m = self.width();
        let a: Vec<DenseOperator> = self
            .ladders
            .iter()
            .map(|l| l.annihilator())
            .collect::<Result<_>>()?;
        let ad: Vec<DenseOperator> = a.iter().map(DenseOperator::adjoint).collect();
        let id = DenseOperator::identity(m)?;
        let zero = DenseOperator::zeros(m)?;
        let mut worst = 0.0f64;
        for j in 0..m {
            for k in 0..m {
                if k >= j {
                    worst = worst.max(a[j].anticommutator(&a[k]).max_deviation(&zero));
                }
                let target = if j == k { &id } else { &zero };
                worst = worst.max(a[j].anticommutator(&ad[k]).max_deviation(target));
            }
        }
        Ok(worst)
    }

    /// Largest amplitude of `a_j|0…0⟩` over all modes.
    pub fn vacuum_residual(&self) -> Result<f64> {
        let vac = StateVector::vacuum(self.width())?;
        self.ladders.iter().try_fold(0.0f64, |acc, l| {
            Ok(acc.max(l.annihilator()?.apply(&vac)?.norm()))
        })
    }

    pub fn listing(&self) -> String {
        self.ladders.iter().map(|l| l.listing() + "\n").collect()
    }
}

fn pair(
    gs: &GeneratorSet,
    node: u32,
    a: (u32, Letter),
    b: (u32, Letter),
) -> Result<LadderOperator> {
    let get = |(n, l): (u32, Letter)| {
        gs.index_of(n, l)
            .map(|i| gs.generators()[i].clone())
            .ok_or_else(|| Error::InvalidTree(format!("node {n} has no free {} label", l.label())))
    };
    LadderOperator::new(node, get(a)?, get(b)?)
}

/// Ladders of a complete binary x-y tree: `(e′_j, e″_j) = (g_{2j}, g_{2j+1})`,
/// leaving `g_1` unused. A single node pairs its x and y generators.
pub fn ladder_binary_xy(tree: &QubitTree) -> Result<FermionEncoding> {
    if tree.cf_binary_levels().is_none() {
        return Err(Error::InvalidArgument(
            "expected a complete binary x-y tree".into(),
        ));
    }
    let generators = GeneratorSet::from_tree(tree);
    let g = generators.generators();
    let ladders = tree
        .ids()
        .iter()
        .map(|&j| {
            let k = 2 * j as usize;
            if tree.node_count() == 1 {
                return LadderOperator::new(j, g[0].clone(), g[1].clone());
            }
            LadderOperator::new(j, g[k - 1].clone(), g[k].clone())
        })
        .collect::<Result<_>>()?;
    Ok(FermionEncoding {
        kind: EncodingKind::BinaryXy,
        occupation: OccupationMap::binary_xy(tree)?,
        generators,
        ladders,
    })
}

/// Standard Jordan-Wigner ladders on the chain `1 → … → m`.
pub fn ladder_jw(m: usize) -> Result<FermionEncoding> {
    let tree = QubitTree::jw_chain(m)?;
    let generators = GeneratorSet::from_tree(&tree);
    let ladders = tree
        .ids()
        .iter()
        .map(|&j| pair(&generators, j, (j, Letter::X), (j, Letter::Y)))
        .collect::<Result<_>>()?;
    Ok(FermionEncoding {
        kind: EncodingKind::JordanWigner,
        occupation: OccupationMap::identity(&tree)?,
        generators,
        ladders,
    })
}

/// Ladders of an x-z tree. Node `j` pairs its y-generator with the
/// z-generator at the end of the z-chain below its x-child, or with its own
/// x-generator when it has no x-child.
pub fn ladder_xz(tree: &QubitTree) -> Result<FermionEncoding> {
    if tree.labels_used().contains(&Letter::Y) {
        return Err(Error::InvalidArgument(
            "x-z tree must not contain y-edges".into(),
        ));
    }
    let generators = GeneratorSet::from_tree(tree);
    let ladders = tree
        .ids()
        .iter()
        .map(|&j| {
            let first = match z_chain_from_x_child(tree, j)?.last() {
                Some(&end) => (end, Letter::Z),
                None => (j, Letter::X),
            };
            pair(&generators, j, first, (j, Letter::Y))
        })
        .collect::<Result<_>>()?;
    Ok(FermionEncoding {
        kind: EncodingKind::Xz,
        occupation: OccupationMap::xz(tree)?,
        generators,
        ladders,
    })
}

/// Number operator of mode `j` in `encoding`.
pub fn number_operator(encoding: &FermionEncoding, j: u32) -> Result<NumberOperator> {
    encoding.number_operator(j)
}

/// `r_j = i^phase · Z_{C(j)} X_{U(j)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StubFactors {
    pub phase: u8,
    pub z_set: Vec<u32>,
    pub x_set: Vec<u32>,
}

/// Splits the stub of an x-z tree node into its z part and x part.
pub fn stub_factors(tree: &QubitTree, j: u32) -> Result<StubFactors> {
    let stub = tree.stub(j)?;
    let m = tree.node_count();
    let (mut z_set, mut x_set) = (Vec::new(), Vec::new());
    for p in stub.support() {
        match stub.letter(p) {
            Letter::Z => z_set.push(tree.id_at(p)),
            Letter::X => x_set.push(tree.id_at(p)),
            _ => {
                return Err(Error::InvalidArgument(
                    "stub of an x-z tree contains y".into(),
                ))
            }
        }
    }
    let pos = |ids: &[u32]| {
        ids.iter()
            .map(|&i| tree.position(i).unwrap())
            .collect::<Vec<_>>()
    };
    let zx = &PauliTerm::z_string(m, pos(&z_set))
        * &PauliTerm::from_sparse(
            m,
            0,
            &pos(&x_set)
                .into_iter()
                .map(|p| (p, Letter::X))
                .collect::<Vec<_>>(),
        );
    Ok(StubFactors {
        phase: (stub.phase() + 4 - zx.phase()) % 4,
        z_set,
        x_set,
    })
}

/// The Bravyi-Kitaev instance: the Fenwick tree on BK ids encoded as an x-z tree.
#[derive(Clone, Debug, PartialEq)]
pub struct BkStandard {
    encoding: FermionEncoding,
    renumbering: Vec<u32>,
    gtree: GTree,
}

impl BkStandard {
    /// x-z tree with BK ids.
    pub fn tree(&self) -> &QubitTree {
        self.encoding.tree()
    }

    pub fn encoding(&self) -> &FermionEncoding {
        &self.encoding
    }

    pub fn gtree(&self) -> &GTree {
        &self.gtree
    }

    /// `renumbering()[t]` is the BK id of node `t` of the level-ordered x-z tree.
    pub fn renumbering(&self) -> &[u32] {
        &self.renumbering
    }

    pub fn ladders(&self) -> &[LadderOperator] {
        self.encoding.ladders()
    }

    pub fn stub_factors(&self, j: u32) -> Result<StubFactors> {
        stub_factors(self.tree(), j)
    }

    /// Flip set `F(j)`: the Fenwick children of `j`.
    pub fn flip_set(&self, j: u32) -> Result<Vec<u32>> {
        Ok(self.gtree.children(j)?.to_vec())
    }
}

/// Builds the BK encoding on `m = 2^Λ` modes (`m <= 1024`).
pub fn bk_standard(m: usize) -> Result<BkStandard> {
    if !m.is_power_of_two() || m > 1024 {
        return Err(Error::InvalidArgument(format!(
            "BK instance needs a power of two m <= 1024, got {m}"
        )));
    }
    let gtree = GTree::fenwick(m as u32)?;
    let tree = gtree.to_xz_tree()?;
    let renumbering = if m == 1 {
        vec![0]
    } else {
        let reference = QubitTree::cf_xz_rooted(m.trailing_zeros())?;
        isomorphism(&reference, &tree)?
    };
    Ok(BkStandard {
        encoding: ladder_xz(&tree)?,
        renumbering,
        gtree,
    })
}

/// Label-preserving map from the nodes of `a` onto those of `b`, indexed by position in `a`.
fn isomorphism(a: &QubitTree, b: &QubitTree) -> Result<Vec<u32>> {
    if a.node_count() != b.node_count() {
        return Err(Error::InvalidTree("trees differ in size".into()));
    }
    let mut map = vec![0u32; a.node_count()];
    let mut stack = vec![(a.root(), b.root())];
    while let Some((u, v)) = stack.pop() {
        map[a.position(u)?] = v;
        for l in Letter::XYZ {
            match (a.child(u, l)?, b.child(v, l)?) {
                (Some(cu), Some(cv)) => stack.push((cu, cv)),
                (None, None) => {}
                _ => return Err(Error::InvalidTree(format!("shapes differ below node {u}"))),
            }
        }
    }
    Ok(map)
}
