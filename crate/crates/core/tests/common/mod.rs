#![allow(dead_code)]

use std::path::PathBuf;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::Value;

use lenscert::triangulation::{pairing_consistent, FacePairing, FaceRef, Perm4, Triangulation};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn manifest() -> Vec<Value> {
    serde_json::from_str::<Value>(&fixture_text("manifest.json"))
        .unwrap()
        .as_array()
        .unwrap()
        .clone()
}

pub fn load_fixture(entry: &Value) -> Triangulation {
    Triangulation::parse(&fixture_text(entry["file"].as_str().unwrap())).unwrap()
}

/// Exhaustive search over all `2^t` sign assignments.
pub fn orientable_by_brute_force(tri: &Triangulation) -> bool {
    let t = tri.size();
    assert!(t <= 20, "brute force is exponential");
    let pairings = tri.pairings();
    (0u32..1 << t).any(|mask| {
        let sign = |k: usize| if mask >> k & 1 == 1 { -1 } else { 1 };
        pairings
            .iter()
            .all(|p| pairing_consistent(&p.perm, sign(p.source.tet), sign(p.target.tet)))
    })
}

/// A random closed gluing table: faces are matched uniformly at random and
/// each pair gets a random compatible permutation. Not necessarily a
/// manifold, nor connected.
pub fn random_gluing<R: Rng>(rng: &mut R, t: usize) -> Triangulation {
    let mut slots: Vec<FaceRef> = (0..t)
        .flat_map(|tet| (0..4u8).map(move |face| FaceRef { tet, face }))
        .collect();
    slots.shuffle(rng);
    let pairings: Vec<FacePairing> = slots
        .chunks(2)
        .map(|pair| {
            let (a, b) = (pair[0], pair[1]);
            let choices: Vec<Perm4> = Perm4::all()
                .filter(|p| p.apply(a.face) == b.face)
                .collect();
            FacePairing {
                source: a,
                target: b,
                perm: *choices.choose(rng).unwrap(),
            }
        })
        .collect();
    Triangulation::from_pairings(t, &pairings).unwrap()
}

/// Connected random gluing, by rejection.
pub fn random_connected_gluing<R: Rng>(rng: &mut R, t: usize) -> Triangulation {
    loop {
        let tri = random_gluing(rng, t);
        if tri.is_connected() {
            return tri;
        }
    }
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det_i128(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors as `d_k / d_{k-1}`, with `d_k` the gcd of all `k x k`
/// minors. Returns the nonzero factors only.
pub fn invariant_factors_by_minors(rows: &[Vec<i64>], cols: usize) -> Vec<i64> {
    let m = rows.len();
    let mut factors = Vec::new();
    let mut prev: i128 = 1;
    for k in 1..=m.min(cols) {
        let mut g: i128 = 0;
        for rs in subsets(m, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| rows[r][c] as i128).collect())
                    .collect();
                g = g.gcd(&det_i128(&minor));
            }
        }
        if g == 0 {
            break;
        }
        factors.push((g / prev) as i64);
        prev = g;
    }
    factors
}
