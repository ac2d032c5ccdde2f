//! Circuit files, tree builder specs, and the step-by-step runner.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dense::{exp_hamiltonian, StateVector, C64, MAX_OPERATOR_QUBITS};
use crate::error::{Error, Result};
use crate::fermion::{bk_standard, ladder_binary_xy, ladder_jw, ladder_xz, FermionEncoding};
use crate::generators::GeneratorSet;
use crate::modes::{mode_unitary, propagate_path_state, ModeHamiltonian, PathStateVector};
use crate::occupation::parse_bits;
use crate::pauli::Letter;
use crate::spin::{
    adjoint_rotation, basis_covariance, basis_expectations, mean_occupations, state_covariance,
    state_expectations, QuadraticHamiltonian,
};
use crate::tree::{QubitTree, TreeFile};

/// Builds a tree from `"cf-ternary:L"`, `"cf-binary:L"`, `"cf-xz:L"`, `"jw:m"` or `"bk:m"`.
pub fn build_tree(spec: &str) -> Result<QubitTree> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("builder spec {spec:?} lacks ':'")))?;
    let n: u32 = arg
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("builder spec {spec:?}: {arg:?} is not a count")))?;
    match kind.trim() {
        "cf-ternary" => QubitTree::cf_ternary(n),
        "cf-binary" => QubitTree::cf_binary(n),
        "cf-xz" => QubitTree::cf_xz_rooted(n),
        "jw" => QubitTree::jw_chain(n as usize),
        "bk" => Ok(bk_standard(n as usize)?.tree().clone()),
        other => Err(Error::Parse(format!("unknown tree builder {other:?}"))),
    }
}

/// The natural ladder encoding of a tree: binary x-y, x-z, or none.
pub fn encoding_for_tree(tree: &QubitTree) -> Result<FermionEncoding> {
    if tree.cf_binary_levels().is_some() && tree.node_count() > 1 {
        ladder_binary_xy(tree)
    } else if !tree.labels_used().contains(&Letter::Y) {
        if tree.labels_used().iter().all(|&l| l == Letter::Z)
            && tree.root() == 1
            && tree.ids().last() == Some(&(tree.node_count() as u32))
        {
            ladder_jw(tree.node_count())
        } else {
            ladder_xz(tree)
        }
    } else {
        Err(Error::Unsupported(
            "no ladder pairing for trees mixing y-edges outside the complete binary shape".into(),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeRef {
    Spec(String),
    File(TreeFile),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Spin,
    Ladder,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    /// `[j, k, value]` (spin, 1-based generator indices) or
    /// `[j, k, re, im?]` (ladder, 1-based mode positions).
    pub coeffs: Vec<Vec<f64>>,
    pub tau: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub tree: TreeRef,
    pub basis: Basis,
    pub steps: Vec<Step>,
    /// Initial computational basis state for the spin form (default all zeros).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    /// Initial path-state amplitudes `[re, im]` for the ladder form (default first mode).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<[f64; 2]>>,
    /// Nodes whose `⟨ň_j⟩` is reported.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observe: Vec<u32>,
    /// Keep the first generator out of spin Hamiltonians.
    #[serde(default)]
    pub exclude_first: bool,
}

impl CircuitFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("circuit file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    /// Resolves the tree reference (builder spec or inline tree file).
    pub fn tree(&self) -> Result<QubitTree> {
        match &self.tree {
            TreeRef::Spec(s) => build_tree(s),
            TreeRef::File(f) => QubitTree::from_file(f),
        }
    }
}

fn index(x: f64, n: usize, what: &str) -> Result<usize> {
    if x.fract() != 0.0 || x < 1.0 || x > n as f64 {
        return Err(Error::InvalidArgument(format!(
            "{what} index {x} outside 1..={n}"
        )));
    }
    Ok(x as usize - 1)
}

/// Spin Hamiltonian of one step.
pub fn spin_step<'a>(
    basis: &'a GeneratorSet,
    step: &Step,
    exclude_first: bool,
) -> Result<QuadraticHamiltonian<'a>> {
    let n = basis.len();
    let mut h = if exclude_first {
        QuadraticHamiltonian::without_first(basis, step.tau)
    } else {
        QuadraticHamiltonian::new(basis, step.tau)
    };
    for c in &step.coeffs {
        if c.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "spin coefficient {c:?} must be [j, k, value]"
            )));
        }
        h.add_term(
            index(c[0], n, "generator")?,
            index(c[1], n, "generator")?,
            c[2],
        )?;
    }
    Ok(h)
}

/// Ladder Hamiltonian of one step.
pub fn ladder_step(m: usize, step: &Step) -> Result<ModeHamiltonian> {
    let mut h = ModeHamiltonian::zeros(m);
    for c in &step.coeffs {
        let im = match c.len() {
            3 => 0.0,
            4 => c[3],
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "ladder coefficient {c:?} must be [j, k, re, im?]"
                )))
            }
        };
        let (j, k) = (index(c[0], m, "mode")?, index(c[1], m, "mode")?);
        if j == k && im != 0.0 {
            return Err(Error::NotHermitian(im.abs()));
        }
        h.add_hopping(j, k, C64::new(c[2], im))?;
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub time: f64,
    pub values: Vec<f64>,
    pub occupations: Vec<f64>,
    pub oracle_deviation: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub basis: Basis,
    pub qubits: usize,
    pub value_columns: Vec<String>,
    pub observed: Vec<u32>,
    pub records: Vec<StepRecord>,
    pub timings: Vec<(String, Duration)>,
}

impl RunOutput {
    pub fn max_oracle_deviation(&self) -> Option<f64> {
        self.records
            .iter()
            .filter_map(|r| r.oracle_deviation)
            .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.max(d))))
    }
}

/// Runs a circuit; with `oracle` every step is cross-checked against dense evolution.
pub fn run_circuit(circuit: &CircuitFile, oracle: bool) -> Result<RunOutput> {
    let start = Instant::now();
    let tree = circuit.tree()?;
    let m = tree.node_count();
    if oracle && m > MAX_OPERATOR_QUBITS {
        return Err(Error::OracleTooLarge {
            width: m,
            limit: MAX_OPERATOR_QUBITS,
        });
    }
    let timings = vec![("build".to_string(), start.elapsed())];
    let out = match circuit.basis {
        Basis::Spin => run_spin(circuit, &tree, oracle, timings),
        Basis::Ladder => run_ladder(circuit, &tree, oracle, timings),
    }?;
    Ok(out)
}

fn observed_positions(enc: &FermionEncoding, observe: &[u32]) -> Result<Vec<usize>> {
    observe.iter().map(|&j| enc.tree().position(j)).collect()
}

fn run_spin(
    circuit: &CircuitFile,
    tree: &QubitTree,
    oracle: bool,
    mut timings: Vec<(String, Duration)>,
) -> Result<RunOutput> {
    let m = tree.node_count();
    let t0 = Instant::now();
    let basis = GeneratorSet::from_tree(tree);
    let encoding = if circuit.observe.is_empty() {
        None
    } else {
        Some(encoding_for_tree(tree)?)
    };
    let obs_pos = match &encoding {
        Some(e) => observed_positions(e, &circuit.observe)?,
        None => Vec::new(),
    };
    let bits = match &circuit.initial {
        Some(s) => parse_bits(s)?,
        None => vec![false; m],
    };
    let mut v = basis_expectations(&basis, &bits)?;
    let mut cov = basis_covariance(&basis, &bits)?;
    let mut dense = if oracle {
        Some(StateVector::from_bits(&bits)?)
    } else {
        None
    };
    timings.push(("initial state".into(), t0.elapsed()));

    let occupations = |cov: &DMatrix<f64>| -> Result<Vec<f64>> {
        match &encoding {
            Some(e) => {
                let all = mean_occupations(e, cov)?;
                Ok(obs_pos.iter().map(|&p| all[p]).collect())
            }
            None => Ok(Vec::new()),
        }
    };
    let deviation = |v: &[f64], cov: &DMatrix<f64>, occ: &[f64], s: &StateVector| -> Result<f64> {
        let vo = state_expectations(&basis, s)?;
        let mo = state_covariance(&basis, s)?;
        let mut d = v
            .iter()
            .zip(&vo)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        d = d.max((cov - mo).amax());
        if let Some(e) = &encoding {
            for (&p, &o) in obs_pos.iter().zip(occ) {
                let parity = e
                    .number_operator(e.tree().id_at(p))?
                    .parity_word()
                    .support();
                d = d.max((s.parity_probability(&parity)? - o).abs());
            }
        }
        Ok(d)
    };

    let mut records = Vec::with_capacity(circuit.steps.len() + 1);
    let occ = occupations(&cov)?;
    let dev0 = match &dense {
        Some(s) => Some(deviation(&v, &cov, &occ, s)?),
        None => None,
    };
    records.push(StepRecord {
        step: 0,
        time: 0.0,
        values: v.clone(),
        occupations: occ,
        oracle_deviation: dev0,
    });

    let (mut t_prop, mut t_oracle) = (Duration::ZERO, Duration::ZERO);
    let mut time = 0.0;
    for (i, step) in circuit.steps.iter().enumerate() {
        let t1 = Instant::now();
        let h = spin_step(&basis, step, circuit.exclude_first)?;
        let r = adjoint_rotation(&h)?;
        r.apply_to_vector(&mut v)?;
        r.apply_to_covariance(&mut cov)?;
        let occ = occupations(&cov)?;
        t_prop += t1.elapsed();
        time += step.tau;
        let t2 = Instant::now();
        let dev = match dense.as_mut() {
            Some(s) => {
                *s = h.dense_unitary()?.apply(s)?;
                Some(deviation(&v, &cov, &occ, s)?)
            }
            None => None,
        };
        t_oracle += t2.elapsed();
        records.push(StepRecord {
            step: i + 1,
            time,
            values: v.clone(),
            occupations: occ,
            oracle_deviation: dev,
        });
    }
    timings.push(("propagation".into(), t_prop));
    if oracle {
        timings.push(("oracle".into(), t_oracle));
    }
    Ok(RunOutput {
        basis: Basis::Spin,
        qubits: m,
        value_columns: (1..=basis.len()).map(|k| format!("g{k}")).collect(),
        observed: circuit.observe.clone(),
        records,
        timings,
    })
}

fn run_ladder(
    circuit: &CircuitFile,
    tree: &QubitTree,
    oracle: bool,
    mut timings: Vec<(String, Duration)>,
) -> Result<RunOutput> {
    let m = tree.node_count();
    let t0 = Instant::now();
    let encoding = encoding_for_tree(tree)?;
    if !circuit.observe.is_empty() {
        return Err(Error::Unsupported(
            "occupation columns are reported for the spin form only".into(),
        ));
    }
    let mut chi = match &circuit.chi {
        Some(c) => {
            if c.len() != m {
                return Err(Error::LengthMismatch {
                    expected: m,
                    got: c.len(),
                });
            }
            PathStateVector::new(DVector::from_iterator(
                m,
                c.iter().map(|&[re, im]| C64::new(re, im)),
            ))
        }
        None => PathStateVector::unit(m, 0)?,
    };
    let mut dense = if oracle {
        Some(chi.to_dense(&encoding)?)
    } else {
        None
    };
    timings.push(("initial state".into(), t0.elapsed()));

    let values = |chi: &PathStateVector| {
        chi.amplitudes()
            .iter()
            .flat_map(|c| [c.re, c.im])
            .collect::<Vec<_>>()
    };
    let mut records = vec![StepRecord {
        step: 0,
        time: 0.0,
        values: values(&chi),
        occupations: Vec::new(),
        oracle_deviation: dense.as_ref().map(|_| 0.0),
    }];
    let (mut t_prop, mut t_oracle) = (Duration::ZERO, Duration::ZERO);
    let mut time = 0.0;
    for (i, step) in circuit.steps.iter().enumerate() {
        let t1 = Instant::now();
        let h = ladder_step(m, step)?;
        let u = mode_unitary(&h, step.tau)?;
        chi = propagate_path_state(&u, &chi)?;
        t_prop += t1.elapsed();
        time += step.tau;
        let t2 = Instant::now();
        let dev = match dense.as_mut() {
            Some(s) => {
                *s = exp_hamiltonian(&h.to_dense(&encoding)?, step.tau)?.apply(s)?;
                Some(chi.to_dense(&encoding)?.max_deviation(s))
            }
            None => None,
        };
        t_oracle += t2.elapsed();
        records.push(StepRecord {
            step: i + 1,
            time,
            values: values(&chi),
            occupations: Vec::new(),
            oracle_deviation: dev,
        });
    }
    timings.push(("propagation".into(), t_prop));
    if oracle {
        timings.push(("oracle".into(), t_oracle));
    }
    Ok(RunOutput {
        basis: Basis::Ladder,
        qubits: m,
        value_columns: (1..=m)
            .flat_map(|k| [format!("re{k}"), format!("im{k}")])
            .collect(),
        observed: Vec::new(),
        records,
        timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_specs() {
        assert_eq!(build_tree("cf-ternary:2").unwrap().node_count(), 4);
        assert_eq!(build_tree("cf-binary:3").unwrap().node_count(), 7);
        assert_eq!(build_tree("jw:5").unwrap().node_count(), 5);
        assert_eq!(build_tree("bk:8").unwrap().root(), 7);
        assert_eq!(build_tree("cf-xz:3").unwrap().node_count(), 8);
        for bad in ["cf-binary", "cf-binary:x", "tern:2", "bk:6"] {
            assert!(build_tree(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn parse_circuit_with_inline_tree() {
        let text = r#"{"tree": {"m": 2, "root": 1, "edges": [[1, 2, "z"]]},
                       "basis": "ladder", "steps": [{"coeffs": [[1, 2, 0.5, 0.1]], "tau": 0.3}]}"#;
        let c = CircuitFile::from_json(text).unwrap();
        assert_eq!(c.tree().unwrap().node_count(), 2);
        let out = run_circuit(&c, true).unwrap();
        assert!(out.max_oracle_deviation().unwrap() < 1e-10);
    }

    #[test]
    fn zero_circuit_is_identity() {
        let text = r#"{"tree": "cf-binary:2", "basis": "spin", "observe": [1, 2, 3],
                       "steps": [{"coeffs": [], "tau": 1.0}]}"#;
        let out = run_circuit(&CircuitFile::from_json(text).unwrap(), true).unwrap();
        assert_eq!(out.records[0].values, out.records[1].values);
        assert_eq!(out.records[1].occupations, vec![0.0, 0.0, 0.0]);
        assert_eq!(out.max_oracle_deviation(), Some(0.0));
    }

    #[test]
    fn spin_circuit_matches_oracle() {
        let text = r#"{"tree": "cf-binary:2", "basis": "spin", "initial": "010", "observe": [1, 3],
                       "steps": [{"coeffs": [[1, 2, 0.4], [3, 6, -0.8], [2, 7, 0.3]], "tau": 0.7},
                                 {"coeffs": [[4, 5, 1.1], [1, 7, 0.2]], "tau": 0.5}]}"#;
        let out = run_circuit(&CircuitFile::from_json(text).unwrap(), true).unwrap();
        assert!(out.max_oracle_deviation().unwrap() < 1e-9);
    }

    #[test]
    fn malformed_circuits() {
        assert!(CircuitFile::from_json(r#"{"tree": "jw:2", "basis": "spin"}"#).is_err());
        assert!(CircuitFile::from_json(r#"{"tree": "jw:2", "basis": "up", "steps": []}"#).is_err());
        let bad_index =
            r#"{"tree": "jw:2", "basis": "spin", "steps": [{"coeffs": [[1, 9, 1.0]], "tau": 1}]}"#;
        assert!(run_circuit(&CircuitFile::from_json(bad_index).unwrap(), false).is_err());
        let big = r#"{"tree": "cf-binary:4", "basis": "spin", "steps": []}"#;
        assert!(matches!(
            run_circuit(&CircuitFile::from_json(big).unwrap(), true),
            Err(Error::OracleTooLarge { .. })
        ));
    }
}
