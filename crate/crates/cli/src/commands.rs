use std::path::Path;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use nalgebra::DVector;
use qtree_core::dense::{apply_pauli, MAX_STATE_QUBITS};
use qtree_core::occupation::{format_bits, parse_bits};
use qtree_core::{
    build_tree, encoding_for_tree, run_circuit, Basis, CircuitFile, GeneratorSet, NodeKind,
    QubitTree, StateVector, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{fmt_float, RunReport, Table};

/// Resolves a tree source: an existing file path is read as a tree file,
/// anything else is treated as a builder spec.
pub fn load_tree(source: &str) -> Result<(QubitTree, String)> {
    if Path::new(source).is_file() {
        let text = std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?;
        let tree = QubitTree::from_json(&text).with_context(|| format!("tree file {source}"))?;
        Ok((tree, text))
    } else {
        let tree = build_tree(source).with_context(|| format!("tree source {source:?}"))?;
        Ok((tree, source.to_string()))
    }
}

fn join_ids(ids: &[u32]) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn tree(command: String, source: &str) -> Result<RunReport> {
    let (tree, input) = load_tree(source)?;
    let mut report = RunReport::new(command, &[&input]);
    let json = tree.to_json();
    let mut table = Table::new("edges", &["parent", "child", "label"]);
    for (p, c, l) in tree.edges() {
        table.push(vec![p.to_string(), c.to_string(), l.label().to_string()]);
    }
    table.listing = Some(json.clone() + "\n");
    report.outputs.push(table);
    let reparsed = QubitTree::from_json(&json)?;
    report.verdict("tree file round trip", reparsed == tree, None);
    Ok(report)
}

pub fn gen(command: String, source: &str, oracle: bool, seed: u64) -> Result<RunReport> {
    let (tree, input) = load_tree(source)?;
    let mut report = RunReport::new(command, &[&input]);
    let t0 = Instant::now();
    let gs = GeneratorSet::from_tree(&tree);
    report.time("generate", t0.elapsed());

    let mut table = Table::new("generators", &["index", "term", "node", "label"]);
    let mut listing = String::new();
    for (k, (g, (node, label))) in gs.generators().iter().zip(gs.origins()).enumerate() {
        table.push(vec![
            (k + 1).to_string(),
            g.to_string(),
            node.to_string(),
            label.label().to_string(),
        ]);
        listing.push_str(&format!("g{:<4} {g}  ({node},{})\n", k + 1, label.label()));
    }
    table.listing = Some(listing);
    report.outputs.push(table);

    let t1 = Instant::now();
    let v = gs.validate();
    report.verdict("generator count is 2m+1", v.count_ok(), None);
    report.verdict("pairwise anticommutation", v.all_anticommute(), None);
    report.verdict(
        "product is a multiple of identity",
        v.product_is_scalar(),
        None,
    );
    report.time("validate", t1.elapsed());

    if oracle {
        let m = tree.node_count();
        ensure!(
            m <= MAX_STATE_QUBITS,
            "dense check limited to {MAX_STATE_QUBITS} qubits, got {m}"
        );
        let t2 = Instant::now();
        let dev = dense_anticommutation(&gs, seed)?;
        report.verdict("dense anticommutation", dev <= 1e-10, Some(dev));
        report.time("oracle", t2.elapsed());
    }
    Ok(report)
}

/// Largest deviation of `{g_a, g_b} + 2δ_ab` on a seeded random state.
fn dense_anticommutation(gs: &GeneratorSet, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << gs.width();
    let amp = (0..dim).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let psi = StateVector::from_amplitudes(DVector::from_iterator(dim, amp))?.normalized();
    let images: Vec<StateVector> = gs
        .generators()
        .iter()
        .map(|g| apply_pauli(g, &psi))
        .collect::<Result<_, _>>()?;
    let mut worst: f64 = 0.0;
    for (a, ga) in gs.generators().iter().enumerate() {
        for (b, gb) in gs.generators().iter().enumerate().skip(a) {
            let sum = apply_pauli(ga, &images[b])?.add(&apply_pauli(gb, &images[a])?);
            let expected = psi.scale(C64::new(if a == b { -2.0 } else { 0.0 }, 0.0));
            worst = worst.max(sum.max_deviation(&expected));
        }
    }
    Ok(worst)
}

pub fn ladder(command: String, source: &str, oracle: bool) -> Result<RunReport> {
    let (tree, input) = load_tree(source)?;
    let mut report = RunReport::new(command, &[&input]);
    let t0 = Instant::now();
    let enc = encoding_for_tree(&tree)?;
    report.time("encode", t0.elapsed());
    let mut table = Table::new("ladders", &["mode", "p_prime", "p_double_prime"]);
    for a in enc.ladders() {
        let (p1, p2) = a.hermitian_parts();
        table.push(vec![a.mode().to_string(), p1.to_string(), p2.to_string()]);
    }
    table.listing = Some(enc.listing());
    report.outputs.push(table);
    report.verdict(
        "symbolic canonical anticommutation",
        enc.symbolic_car(),
        None,
    );
    if oracle {
        let t1 = Instant::now();
        let car = enc.car_deviation()?;
        report.verdict("dense canonical anticommutation", car <= 1e-10, Some(car));
        let vac = enc.vacuum_residual()?;
        report.verdict("vacuum annihilation", vac <= 1e-10, Some(vac));
        report.time("oracle", t1.elapsed());
    }
    Ok(report)
}

pub fn occupation(command: String, source: &str) -> Result<RunReport> {
    let (tree, input) = load_tree(source)?;
    let mut report = RunReport::new(command, &[&input]);
    let enc = encoding_for_tree(&tree)?;
    let occ = enc.occupation();
    let mut table = Table::new("occupation", &["node", "kind", "c", "s", "D"]);
    let mut terminal_ok = true;
    for &id in occ.ids() {
        let kind = occ.kind(id)?;
        let desc = occ.descendants(id)?;
        terminal_ok &= kind != NodeKind::Terminal || desc.is_empty();
        table.push(vec![
            id.to_string(),
            kind.as_str().to_string(),
            join_ids(&occ.chain(id)?),
            join_ids(&occ.subtree(id)?),
            join_ids(&desc),
        ]);
    }
    report.outputs.push(table);
    report.verdict("terminal nodes have no descendants", terminal_ok, None);
    Ok(report)
}

pub struct MapArgs<'a> {
    pub source: &'a str,
    pub bits: &'a [String],
    pub inverse: bool,
    pub all: bool,
    pub random: Option<usize>,
    pub seed: u64,
}

pub fn map(command: String, args: MapArgs) -> Result<RunReport> {
    let (tree, input) = load_tree(args.source)?;
    let mut report = RunReport::new(command, &[&input]);
    let enc = encoding_for_tree(&tree)?;
    let occ = enc.occupation();
    let m = occ.len();

    let mut inputs: Vec<Vec<bool>> = Vec::new();
    if args.all {
        ensure!(
            m <= 12,
            "--all enumerates 2^m vectors and is limited to m <= 12, got m = {m}"
        );
        inputs.extend((0..1usize << m).map(|i| qtree_core::dense::index_to_bits(i, m)));
    }
    for b in args.bits {
        let bits = parse_bits(b)?;
        ensure!(
            bits.len() == m,
            "bit vector {b:?} has length {}, tree has m = {m}",
            bits.len()
        );
        inputs.push(bits);
    }
    if let Some(count) = args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        inputs.extend(
            (0..count).map(|_| (0..m).map(|_| rng.random_bool(0.5)).collect::<Vec<bool>>()),
        );
    }
    if inputs.is_empty() {
        bail!("no bit vectors given (pass BITS, --all or --random N)");
    }

    let t0 = Instant::now();
    let run = |b: &[bool], inverse: bool| {
        if inverse {
            occ.inverse(b)
        } else {
            occ.forward(b)
        }
    };
    let name = if args.inverse { "inverse" } else { "forward" };
    let mut table = Table::new(name, &["input", "output"]);
    let mut round_trip = true;
    for bits in &inputs {
        let out = run(bits, args.inverse)?;
        round_trip &= run(&out, !args.inverse)? == *bits;
        table.push(vec![format_bits(bits), format_bits(&out)]);
    }
    report.time("map", t0.elapsed());
    if args.bits.len() == 1 && !args.all && args.random.is_none() {
        table.listing = Some(table.rows[0][1].clone() + "\n");
    }
    report.outputs.push(table);
    report.verdict("occupation map round trip", round_trip, None);
    Ok(report)
}

pub fn simulate(command: String, path: &Path, oracle: bool, tol: f64) -> Result<RunReport> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let circuit = CircuitFile::from_json(&text)
        .with_context(|| format!("circuit file {}", path.display()))?;
    let mut report = RunReport::new(command, &[&text]);
    let out = run_circuit(&circuit, oracle)?;

    let mut header: Vec<String> = vec!["step".into(), "time".into()];
    header.extend(out.value_columns.iter().cloned());
    header.extend(out.observed.iter().map(|j| format!("n{j}")));
    if oracle {
        header.push("oracle_deviation".into());
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new("steps", &header_refs);
    for r in &out.records {
        let mut row = vec![r.step.to_string(), fmt_float(r.time)];
        row.extend(r.values.iter().map(|&x| fmt_float(x)));
        row.extend(r.occupations.iter().map(|&x| fmt_float(x)));
        if let Some(d) = r.oracle_deviation {
            row.push(fmt_float(d));
        }
        table.push(row);
    }
    report.outputs.push(table);
    for (phase, d) in &out.timings {
        report.time(phase, *d);
    }
    if let Some(d) = out.max_oracle_deviation() {
        let name = match out.basis {
            Basis::Spin => "dense agreement of expectations and covariances",
            Basis::Ladder => "dense agreement of the path state",
        };
        report.verdict(name, d <= tol, Some(d));
    }
    Ok(report)
}
