//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits with status 1 if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use morse_moduli::arrangement::{
    collect_regions, crossed_hyperplanes, generic_witness_point, is_morse_region, is_realizable, matching_complex,
    matching_to_flat, sign_vector, witness_point, Sign, SignVector, DEFAULT_GUARD,
};
use morse_moduli::barcode::{barcode_edit_distance, induced_barcode, BarBudget};
use morse_moduli::complex::Complex;
use morse_moduli::corpus::{builtin, hexagon_function, hexagon_source, small_corpus};
use morse_moduli::function::DiscreteFunction;
use morse_moduli::io;
use morse_moduli::merge_tree::{
    apply_edit_valued, edit_distance, elementary_distance, enumerate_shapes, induced_merge_tree, EditBudget, EditMove,
    MergeTree, TreeEditSearch,
};
use morse_moduli::morphism::{pullback, CellMap};
use morse_moduli::morse::{induced_matching, is_acyclic_matching, is_discrete_morse, straight_line};
use morse_moduli::rational::{frac, int, Rational};
use morse_moduli::sample::{random_mb_function, random_morse_function, random_subcomplex, random_well_branched_tree};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn binary(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_morse-moduli"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run binary: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "binary exited with {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| format!("bad JSON from binary: {e}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = binary(&["regions", "--complex", "simplex2", "--facets-of-critical"])?;
    ensure(out["count"] == json!(9), || format!("facet count {}", out["count"]))?;
    ensure(out["essential_rank"] == json!(6), || {
        format!("essential rank {}", out["essential_rank"])
    })?;
    within(start, Duration::from_secs(1))?;
    Ok("9 facets, essential rank 6".into())
}

/// Sign of `upper - lower` for each cover, computed directly from the values.
fn direct_signs(x: &Complex, values: &[Rational]) -> Vec<i8> {
    x.covers()
        .iter()
        .map(|c| match values[c.lower].cmp(&values[c.upper]) {
            std::cmp::Ordering::Less => 1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => -1,
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let x = builtin("I").map_err(|e| e.to_string())?;
    ensure(x.covers().len() == 2, || format!("{} hyperplanes", x.covers().len()))?;

    // every open region meets the grid {0,1,2}^3
    let mut oracle_regions = BTreeSet::new();
    let mut oracle_morse = BTreeSet::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let values = vec![int(a), int(b), int(c)];
                let signs = direct_signs(&x, &values);
                if signs.contains(&0) {
                    continue;
                }
                let f = DiscreteFunction::from_values(&x, values).map_err(|e| e.to_string())?;
                oracle_regions.insert(signs.clone());
                if is_discrete_morse(&x, &f) {
                    oracle_morse.insert(signs);
                }
            }
        }
    }
    let regions = collect_regions(&x, false, DEFAULT_GUARD).map_err(|e| e.to_string())?;
    let morse = collect_regions(&x, true, DEFAULT_GUARD).map_err(|e| e.to_string())?;
    ensure(regions.len() == 4 && oracle_regions.len() == 4, || {
        format!("{} regions, oracle {}", regions.len(), oracle_regions.len())
    })?;
    ensure(morse.len() == 3 && oracle_morse.len() == 3, || {
        format!("{} Morse regions, oracle {}", morse.len(), oracle_morse.len())
    })?;
    let as_ints = |v: &SignVector| -> Vec<i8> {
        v.signs
            .iter()
            .map(|s| match s {
                Sign::Plus => 1,
                Sign::Zero => 0,
                Sign::Minus => -1,
            })
            .collect()
    };
    let found: BTreeSet<Vec<i8>> = morse.iter().map(as_ints).collect();
    ensure(found == oracle_morse, || "Morse regions differ from the oracle".into())?;

    let simplices = matching_complex(&x, 3);
    let vertices = simplices.iter().filter(|m| m.len() == 1).count();
    let higher = simplices.iter().filter(|m| m.len() > 1).count();
    ensure(vertices == 2 && higher == 0, || {
        format!("{vertices} vertices, {higher} higher simplices")
    })?;
    let flats: BTreeSet<Vec<Vec<String>>> = simplices.iter().map(|m| matching_to_flat(&x, m).ids(&x)).collect();
    ensure(flats.len() == simplices.len(), || {
        "matching_to_flat is not injective".into()
    })?;
    within(start, Duration::from_secs(1))?;
    Ok("2 hyperplanes, 4 regions, 3 Morse regions, 2 vertices".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (name, x) in small_corpus() {
        for v in collect_regions(&x, false, DEFAULT_GUARD).map_err(|e| e.to_string())? {
            let morse = is_morse_region(&x, &v).map_err(|e| e.to_string())?;
            for f in [witness_point(&x, &v), generic_witness_point(&x, &v)] {
                let f = f.map_err(|e| e.to_string())?;
                ensure(sign_vector(&x, &f) == v, || format!("{name}: witness off its region"))?;
                ensure(is_discrete_morse(&x, &f) == morse, || {
                    format!("{name}: region {:?} disagrees with its witness", v.to_map(&x))
                })?;
            }
            checked += 1;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{checked} regions"))
}

fn random_t(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.gen_range(1..=64);
    frac(rng.gen_range(0..=d), d)
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let names = [
        "simplex2",
        "boundary3",
        "cycle5",
        "star4",
        "hexagon",
        "disk_nr",
        "sphere_nr",
        "path4",
    ];
    for k in 0..200 {
        let x = builtin(names[k % names.len()]).map_err(|e| e.to_string())?;
        let f = random_morse_function(&x, &mut rng);
        for _ in 0..20 {
            let t = random_t(&mut rng);
            let g = straight_line(&x, &f, &t).map_err(|e| e.to_string())?;
            ensure(is_discrete_morse(&x, &g), || {
                format!("straight line leaves Morse at t = {t}")
            })?;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok("4000 points".into())
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for (name, x) in small_corpus() {
        for v in collect_regions(&x, true, DEFAULT_GUARD).map_err(|e| e.to_string())? {
            let f = generic_witness_point(&x, &v).map_err(|e| e.to_string())?;
            let m = induced_matching(&x, &f).map_err(|e| e.to_string())?;
            ensure(m.is_partial_matching(&x), || format!("{name}: not a matching"))?;
            ensure(is_acyclic_matching(&x, &m), || format!("{name}: cyclic matching"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} Morse regions"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let names = [
        "simplex2",
        "simplex3",
        "boundary3",
        "cycle4",
        "path5",
        "star3",
        "hexagon",
        "square",
    ];
    for k in 0..500 {
        let name = names[k % names.len()];
        let x = builtin(name).map_err(|e| e.to_string())?;
        let f = random_mb_function(&x, &mut rng).map_err(|e| e.to_string())?;
        ensure(!sign_vector(&x, &f).has(Sign::Minus), || {
            format!("{name}: negative sign")
        })?;
    }
    Ok("500 functions".into())
}

fn criterion_7() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let source = hexagon_source().map_err(|e| e.to_string())?;
    let f = hexagon_function(&source).map_err(|e| e.to_string())?;
    let assignment: BTreeMap<&str, &str> = morse_moduli::corpus::hexagon_assignment().into_iter().collect();
    let map = json!({"source": "hexagon", "target": "square", "assignment": assignment});
    let map_path = dir.path().join("map.json");
    let function_path = dir.path().join("f.json");
    std::fs::write(&map_path, map.to_string()).map_err(|e| e.to_string())?;
    std::fs::write(&function_path, io::function_to_json(&source, &f).to_string()).map_err(|e| e.to_string())?;
    let out = binary(&[
        "pushforward",
        "--map",
        map_path.to_str().ok_or("path")?,
        "--function",
        function_path.to_str().ok_or("path")?,
    ])?;
    let values = &out["function"]["values"];
    let expect = [
        ("G", "2"),
        ("P", "2"),
        ("GP", "7/2"),
        ("R", "3"),
        ("L", "2"),
        ("GR", "3"),
        ("PR", "11/2"),
        ("GL", "3"),
        ("PL", "3"),
        ("GPR", "6"),
        ("GPL", "5"),
    ];
    for (cell, value) in expect {
        ensure(values[cell] == json!(value), || {
            format!("{cell} = {}, expected {value}", values[cell])
        })?;
    }
    Ok("G = 2, P = 2, GP = 7/2, copies verbatim".into())
}

/// Applies a random strictly increasing map to the values of `f`.
fn monotone_transform(x: &Complex, f: &DiscreteFunction, rng: &mut ChaCha8Rng) -> DiscreteFunction {
    let distinct: BTreeSet<&Rational> = f.values().iter().collect();
    let mut next = frac(rng.gen_range(-6..=6), 2);
    let mut image = BTreeMap::new();
    for v in distinct {
        image.insert(v.clone(), next.clone());
        next += frac(rng.gen_range(1..=9), rng.gen_range(1..=3));
    }
    let values = f.values().iter().map(|v| image[v].clone()).collect();
    DiscreteFunction::from_values(x, values).expect("same length")
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let names = [
        "simplex2",
        "boundary2",
        "boundary3",
        "cycle5",
        "star4",
        "path5",
        "hexagon",
        "square",
    ];
    for k in 0..200 {
        let name = names[k % names.len()];
        let x = builtin(name).map_err(|e| e.to_string())?;
        let f = random_morse_function(&x, &mut rng);
        let g = monotone_transform(&x, &f, &mut rng);
        let crossings = crossed_hyperplanes(&x, &f, &g).map_err(|e| e.to_string())?;
        ensure(crossings.is_empty(), || {
            format!("{name}: pair not in a common braid region")
        })?;
        let (mf, mg) = (
            induced_merge_tree(&x, &f).map_err(|e| e.to_string())?,
            induced_merge_tree(&x, &g).map_err(|e| e.to_string())?,
        );
        ensure(mf.poset() == mg.poset(), || format!("{name}: shapes differ"))?;
        let (d, _) = elementary_distance(&mf, &mg).map_err(|e| e.to_string())?;
        let squared = d.single_squared().ok_or("elementary distance is not a single term")?;
        ensure(squared <= f.squared_distance(&g), || {
            format!("{name}: {squared} > {}", f.squared_distance(&g))
        })?;
    }
    Ok("200 pairs".into())
}

/// A label-free description of a valued tree.
fn signature(t: &MergeTree) -> String {
    fn at(t: &MergeTree, i: usize) -> String {
        let mut children: Vec<String> = t.poset().children(i).iter().map(|&c| at(t, c)).collect();
        children.sort();
        format!("{}({})", t.value(i), children.join(","))
    }
    at(t, t.poset().root())
}

fn criterion_9() -> Outcome {
    let mut checked = 0;
    let mut names: Vec<&str> = small_corpus().into_iter().map(|(n, _)| n).collect();
    names.extend(["cycle5", "star4", "boundary3"]);
    for name in names {
        let x = builtin(name).map_err(|e| e.to_string())?;
        if !x.is_regular() || !x.is_connected() {
            continue;
        }
        for v in collect_regions(&x, true, DEFAULT_GUARD).map_err(|e| e.to_string())? {
            for (e, c) in x.covers().iter().enumerate() {
                if x.dim(c.lower) != 0 || v.signs[e] != Sign::Plus {
                    continue;
                }
                let mut flipped = v.clone();
                flipped.signs[e] = Sign::Minus;
                if !is_realizable(&x, &flipped).map_err(|e| e.to_string())?
                    || !is_morse_region(&x, &flipped).map_err(|e| e.to_string())?
                {
                    continue;
                }
                let mut face = v.clone();
                face.signs[e] = Sign::Zero;
                if !is_realizable(&x, &face).map_err(|e| e.to_string())? {
                    continue;
                }
                let p = generic_witness_point(&x, &face).map_err(|e| e.to_string())?;
                let shifted = |delta: Rational| {
                    let mut values = p.values().to_vec();
                    values[c.lower] += delta;
                    DiscreteFunction::from_values(&x, values).expect("same length")
                };
                let plus = shifted(frac(-1, 2));
                let minus = shifted(frac(1, 2));
                let crossings = crossed_hyperplanes(&x, &plus, &minus).map_err(|e| e.to_string())?;
                if crossings.len() != 1 || sign_vector(&x, &plus) != v || sign_vector(&x, &minus) != flipped {
                    continue;
                }
                let tree_plus = induced_merge_tree(&x, &plus).map_err(|e| e.to_string())?;
                let tree_minus = induced_merge_tree(&x, &minus).map_err(|e| e.to_string())?;
                let leaf = x.id(c.lower).to_string();
                let (removed, _, _) = apply_edit_valued(
                    &tree_plus,
                    &EditMove::RemoveLeaf { leaf: leaf.clone() },
                    &BTreeMap::new(),
                )
                .map_err(|err| format!("{name}: removing leaf {leaf}: {err}"))?;
                ensure(signature(&removed) == signature(&tree_minus), || {
                    format!(
                        "{name}: crossing {}: {} minus {leaf} is not {}",
                        x.cover_key(e),
                        signature(&tree_plus),
                        signature(&tree_minus)
                    )
                })?;
                checked += 1;
            }
        }
    }
    ensure(checked > 0, || "no crossing was checked".into())?;
    Ok(format!("{checked} crossings"))
}

fn strict_trees(max_nodes: usize, top: i64) -> Vec<MergeTree> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for shape in enumerate_shapes(max_nodes) {
        let n = shape.len();
        let mut values = vec![0i64; n];
        loop {
            let strict = (0..n).all(|i| shape.parent(i).is_none_or(|p| values[i] < values[p]));
            if strict {
                let nodes: Vec<(String, Option<String>, Rational)> = (0..n)
                    .map(|i| {
                        (
                            format!("n{i}"),
                            shape.parent(i).map(|p| format!("n{p}")),
                            int(values[i]),
                        )
                    })
                    .collect();
                let t = MergeTree::from_nodes(&nodes).expect("strict tree");
                if seen.insert(signature(&t)) {
                    out.push(t);
                }
            }
            let Some(k) = values.iter().position(|&v| v < top) else {
                break;
            };
            values[k] += 1;
            values[..k].iter_mut().for_each(|v| *v = 0);
        }
    }
    out
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let trees = strict_trees(4, 3);
    let refs: Vec<&MergeTree> = trees.iter().collect();
    let budget = EditBudget {
        max_nodes: Some(5),
        max_steps: None,
        grid: Some((0..=3).map(int).collect()),
    };
    let search = TreeEditSearch::new(&budget, &refs).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<f64>> = trees
        .iter()
        .map(|t| {
            let row = search.distances_from(t, &trees).map_err(|e| e.to_string())?;
            ensure(row.iter().all(|d| d.exact), || "an inexact distance".into())?;
            Ok(row.iter().map(|d| d.distance.approx()).collect())
        })
        .collect::<Result<_, String>>()?;
    const EPS: f64 = 1e-9;
    let n = trees.len();
    for i in 0..n {
        ensure(rows[i][i] == 0.0, || {
            format!("d(θ,θ) = {} for {}", rows[i][i], signature(&trees[i]))
        })?;
        for j in 0..n {
            ensure((rows[i][j] - rows[j][i]).abs() < EPS, || {
                format!("asymmetric: {} vs {}", signature(&trees[i]), signature(&trees[j]))
            })?;
            ensure(i == j || rows[i][j] > EPS, || {
                format!("zero distance: {} vs {}", signature(&trees[i]), signature(&trees[j]))
            })?;
            for k in 0..n {
                ensure(rows[i][k] <= rows[i][j] + rows[j][k] + EPS, || {
                    format!(
                        "triangle fails: {} {} {}",
                        signature(&trees[i]),
                        signature(&trees[j]),
                        signature(&trees[k])
                    )
                })?;
            }
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{n} trees, {} states", search.state_count().unwrap_or(0)))
}

/// The same tree with its values moved by a random strictly increasing map,
/// so the order of all node values is unchanged.
fn reorder_free_transform(t: &MergeTree, rng: &mut ChaCha8Rng) -> MergeTree {
    let distinct: BTreeSet<&Rational> = t.values().iter().collect();
    let mut next = int(rng.gen_range(-3..=3));
    let mut image = BTreeMap::new();
    for v in distinct {
        image.insert(v.clone(), next.clone());
        next += frac(rng.gen_range(1..=4), 2);
    }
    let nodes: Vec<(String, Option<String>, Rational)> = t
        .nodes()
        .into_iter()
        .map(|(id, p, v)| (id, p, image[&v].clone()))
        .collect();
    MergeTree::from_nodes(&nodes).expect("monotone image of a tree")
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let leaves = rng.gen_range(2..=6);
        let t = random_well_branched_tree(leaves, &mut rng);
        let b = induced_barcode(&t).map_err(|e| e.to_string())?;
        ensure(b.len() == leaves, || format!("{} bars for {leaves} leaves", b.len()))?;
        let p = t.poset();
        let leaf_values: BTreeSet<&Rational> = p.leaves().into_iter().map(|i| t.value(i)).collect();
        let inner_values: BTreeSet<&Rational> = (0..p.len()).filter(|&i| !p.is_leaf(i)).map(|i| t.value(i)).collect();
        for bar in b.bars() {
            ensure(leaf_values.contains(&bar.birth), || {
                format!("birth {} is not a leaf value", bar.birth)
            })?;
            ensure(inner_values.contains(&bar.death), || {
                format!("death {} is not an inner value", bar.death)
            })?;
        }
    }
    for _ in 0..60 {
        let leaves = rng.gen_range(2..=3);
        let t = random_well_branched_tree(leaves, &mut rng);
        let u = reorder_free_transform(&t, &mut rng);
        let budget = EditBudget {
            max_nodes: Some(t.len()),
            ..EditBudget::default()
        };
        let tree = edit_distance(&t, &u, &budget).map_err(|e| e.to_string())?;
        ensure(tree.exact, || "inexact tree distance".into())?;
        let (bt, bu) = (
            induced_barcode(&t).map_err(|e| e.to_string())?,
            induced_barcode(&u).map_err(|e| e.to_string())?,
        );
        let bars = barcode_edit_distance(&bt, &bu, &BarBudget::default()).map_err(|e| e.to_string())?;
        ensure(bars.exact, || "inexact barcode distance".into())?;
        ensure(bars.distance.approx() <= tree.distance.approx() + 1e-9, || {
            format!("{} > {}", bars.distance.approx(), tree.distance.approx())
        })?;
    }
    Ok("500 trees, 60 continuity pairs".into())
}

fn criterion_12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let names = [
        "simplex2",
        "simplex3",
        "boundary3",
        "cycle5",
        "star4",
        "hexagon",
        "square",
        "path6",
    ];
    for k in 0..100 {
        let name = names[k % names.len()];
        let x = builtin(name).map_err(|e| e.to_string())?;
        let sub = random_subcomplex(&x, &mut rng);
        let phi = CellMap::inclusion(&sub, &x).map_err(|e| e.to_string())?;
        let g = random_morse_function(&x, &mut rng);
        let f = pullback(&phi, &g).map_err(|e| e.to_string())?;
        ensure(is_discrete_morse(&sub, &f), || format!("{name}: pullback is not Morse"))?;
    }
    Ok("100 inclusions".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("critical region facets of the 2-simplex", criterion_1),
        ("moduli of the interval", criterion_2),
        ("Morse predicate matches Morse regions", criterion_3),
        ("straight lines to the dimension function", criterion_4),
        ("induced matchings of Morse regions", criterion_5),
        ("Morse-Benedetti functions have no negative sign", criterion_6),
        ("hexagon pushforward", criterion_7),
        ("merge-tree continuity in a braid region", criterion_8),
        ("leaf crossing removes one leaf", criterion_9),
        ("edit distance metric axioms", criterion_10),
        ("elder rule and barcode continuity", criterion_11),
        ("pullback along inclusions", criterion_12),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({took:.2?})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({took:.2?})", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
