//! Named example complexes.
//!
//! Parametric families accept a numeric suffix: `simplexN`, `boundaryN`,
//! `pathN`, `cycleN`, `starN`.

use crate::complex::{Cell, Complex};
use crate::error::{Error, Result};
use crate::function::DiscreteFunction;
use crate::rational::{frac, int};

pub const FIXED_NAMES: &[&str] = &[
    "point",
    "I",
    "interval",
    "two_intervals",
    "circle_nr",
    "sphere_nr",
    "disk_nr",
    "hexagon",
    "square",
];

fn vertex(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("v{k}")
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn from_index_simplices(simplices: Vec<Vec<usize>>) -> Result<Complex> {
    let named: Vec<Vec<String>> = simplices
        .into_iter()
        .map(|s| s.into_iter().map(vertex).collect())
        .collect();
    Complex::from_maximal_simplices(&named)
}

fn nonregular(cells: &[(&str, usize)], covers: &[(&str, &str, bool)]) -> Result<Complex> {
    let cells = cells
        .iter()
        .map(|(id, dim)| Cell {
            id: id.to_string(),
            dim: *dim,
        })
        .collect();
    let covers: Vec<(String, String, bool)> = covers
        .iter()
        .map(|(l, u, r)| (l.to_string(), u.to_string(), *r))
        .collect();
    Complex::new(cells, &covers, false)
}

fn family(name: &str) -> Option<(&str, usize)> {
    let split = name.find(|c: char| c.is_ascii_digit())?;
    let n = name[split..].parse().ok()?;
    Some((&name[..split], n))
}

/// Looks up a builtin complex by name.
pub fn builtin(name: &str) -> Result<Complex> {
    let unknown = || Error::OutOfRange(format!("unknown builtin complex `{name}`"));
    match name {
        "point" => return from_index_simplices(vec![vec![0]]),
        "I" | "interval" => return from_index_simplices(vec![vec![0, 1]]),
        "two_intervals" => return from_index_simplices(vec![vec![0, 1], vec![2, 3]]),
        "circle_nr" => return nonregular(&[("v", 0), ("e", 1)], &[("v", "e", false)]),
        "sphere_nr" => return nonregular(&[("v", 0), ("s", 2)], &[("v", "s", false)]),
        "disk_nr" => {
            return nonregular(
                &[("v", 0), ("e", 1), ("d", 2)],
                &[("v", "e", false), ("e", "d", true), ("v", "d", false)],
            )
        }
        "hexagon" => return hexagon_source(),
        "square" => return hexagon_target(),
        _ => {}
    }
    let (kind, n) = family(name).ok_or_else(unknown)?;
    match kind {
        "simplex" if n <= 8 => from_index_simplices(vec![(0..=n).collect()]),
        "boundary" if (1..=8).contains(&n) => from_index_simplices(subsets(n + 1, n)),
        "path" if (1..=64).contains(&n) => {
            if n == 1 {
                from_index_simplices(vec![vec![0]])
            } else {
                from_index_simplices((0..n - 1).map(|i| vec![i, i + 1]).collect())
            }
        }
        "cycle" if (3..=64).contains(&n) => from_index_simplices((0..n).map(|i| vec![i, (i + 1) % n]).collect()),
        "star" if (1..=24).contains(&n) => from_index_simplices((1..=n).map(|i| vec![0, i]).collect()),
        _ => Err(unknown()),
    }
}

/// Every complex with at most eight cells used by the exhaustive checks.
pub fn small_corpus() -> Vec<(&'static str, Complex)> {
    [
        "point",
        "I",
        "path3",
        "boundary2",
        "two_intervals",
        "simplex2",
        "star3",
        "cycle4",
        "circle_nr",
        "sphere_nr",
        "disk_nr",
    ]
    .into_iter()
    .map(|name| (name, builtin(name).expect("builtin complex")))
    .collect()
}

fn cw(cells: &[(&str, usize)], faces: &[(&str, &[&str])]) -> Result<Complex> {
    let cell_list = cells
        .iter()
        .map(|(id, dim)| Cell {
            id: id.to_string(),
            dim: *dim,
        })
        .collect();
    let covers: Vec<(String, String, bool)> = faces
        .iter()
        .flat_map(|(upper, lower)| lower.iter().map(move |l| (l.to_string(), upper.to_string(), true)))
        .collect();
    Complex::new(cell_list, &covers, true)
}

/// A hexagon subdivided into a quadrilateral between two triangles.
pub fn hexagon_source() -> Result<Complex> {
    cw(
        &[
            ("G1", 0),
            ("G2", 0),
            ("R", 0),
            ("L", 0),
            ("P1", 0),
            ("P2", 0),
            ("G1G2", 1),
            ("G1P1", 1),
            ("G2P2", 1),
            ("G2R", 1),
            ("P2R", 1),
            ("G1L", 1),
            ("P1L", 1),
            ("P1P2", 1),
            ("Q", 2),
            ("TR", 2),
            ("TL", 2),
        ],
        &[
            ("G1G2", &["G1", "G2"]),
            ("G1P1", &["G1", "P1"]),
            ("G2P2", &["G2", "P2"]),
            ("G2R", &["G2", "R"]),
            ("P2R", &["P2", "R"]),
            ("G1L", &["G1", "L"]),
            ("P1L", &["P1", "L"]),
            ("P1P2", &["P1", "P2"]),
            ("Q", &["G1G2", "G2P2", "P1P2", "G1P1"]),
            ("TR", &["G2R", "P2R", "G2P2"]),
            ("TL", &["G1P1", "P1L", "G1L"]),
        ],
    )
}

/// A square with one diagonal, the image of [`hexagon_source`] when the
/// quadrilateral is crushed onto its middle edge.
pub fn hexagon_target() -> Result<Complex> {
    cw(
        &[
            ("G", 0),
            ("P", 0),
            ("R", 0),
            ("L", 0),
            ("GP", 1),
            ("GR", 1),
            ("PR", 1),
            ("GL", 1),
            ("PL", 1),
            ("GPR", 2),
            ("GPL", 2),
        ],
        &[
            ("GP", &["G", "P"]),
            ("GR", &["G", "R"]),
            ("PR", &["P", "R"]),
            ("GL", &["G", "L"]),
            ("PL", &["P", "L"]),
            ("GPR", &["GP", "GR", "PR"]),
            ("GPL", &["GP", "GL", "PL"]),
        ],
    )
}

pub fn hexagon_assignment() -> Vec<(&'static str, &'static str)> {
    vec![
        ("G1", "G"),
        ("G2", "G"),
        ("G1G2", "G"),
        ("P1", "P"),
        ("P2", "P"),
        ("P1P2", "P"),
        ("R", "R"),
        ("L", "L"),
        ("G1P1", "GP"),
        ("G2P2", "GP"),
        ("Q", "GP"),
        ("G2R", "GR"),
        ("P2R", "PR"),
        ("G1L", "GL"),
        ("P1L", "PL"),
        ("TR", "GPR"),
        ("TL", "GPL"),
    ]
}

/// The discrete function on [`hexagon_source`] used in the worked example.
pub fn hexagon_function(source: &Complex) -> Result<DiscreteFunction> {
    DiscreteFunction::from_pairs(
        source,
        &[
            ("G1", int(3)),
            ("G2", int(1)),
            ("R", int(3)),
            ("L", int(2)),
            ("P1", int(4)),
            ("P2", int(5)),
            ("G1G2", int(5)),
            ("G1P1", int(5)),
            ("G2P2", int(6)),
            ("G2R", int(3)),
            ("P2R", frac(11, 2)),
            ("G1L", int(3)),
            ("P1L", int(3)),
            ("P1P2", int(5)),
            ("Q", int(7)),
            ("TR", int(6)),
            ("TL", int(5)),
        ],
    )
}
