#![allow(dead_code)]

use std::process::{Command, Output};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tropical_mle::linalg::Rat;
use tropical_mle::model::ModelMatrix;
use tropical_mle::subset::Subset;
use tropical_mle::tropical::{TropVector, TropicalData};

pub fn model(rows: &[&[i64]]) -> ModelMatrix {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    ModelMatrix::from_rows(&rows).unwrap()
}

pub fn binary() -> ModelMatrix {
    model(&[&[1, 1, 1, 1], &[0, 1, 0, 1], &[0, 0, 1, 1]])
}

pub fn hirzebruch() -> ModelMatrix {
    model(&[&[1, 1, 1, 1, 1, 1], &[0, 1, 0, 1, 2, 3], &[0, 0, 1, 1, 1, 1]])
}

pub fn pentagon() -> ModelMatrix {
    model(&[&[1, 1, 1, 1, 1], &[0, 1, 2, 1, 0], &[0, 0, 1, 2, 1]])
}

pub fn eight_bases() -> ModelMatrix {
    model(&[&[1, 1, 1, 1, 1], &[1, 0, 2, 2, 0], &[1, 0, 0, 2, 2]])
}

pub fn prism() -> ModelMatrix {
    model(&[&[1, 1, 1, 1, 1, 1], &[0, 1, 0, 0, 1, 0], &[0, 0, 1, 0, 0, 1], &[0, 0, 0, 1, 1, 1]])
}

pub fn curve(a: &[i64]) -> ModelMatrix {
    model(&[&vec![1; a.len()], a])
}

pub fn data(v: &[i64]) -> TropicalData {
    TropicalData::from_ints(v).unwrap()
}

pub fn tv(v: &[i64]) -> TropVector {
    TropVector::from_ints(v)
}

/// Subset from 1-based labels.
pub fn s(labels: &[usize]) -> Subset {
    Subset::from_labels(labels).unwrap()
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

/// A random valid model: a row of ones over `k−1` rows with entries in `0..=max_entry`.
pub fn random_model(rng: &mut ChaCha8Rng, min_n: usize, max_n: usize, max_entry: i64) -> ModelMatrix {
    loop {
        let n = rng.gen_range(min_n..=max_n);
        let k = rng.gen_range(1..=n.min(4));
        let mut rows = vec![vec![1i64; n]];
        for _ in 1..k {
            rows.push((0..n).map(|_| rng.gen_range(0..=max_entry)).collect());
        }
        if let Ok(m) = ModelMatrix::from_rows(&rows) {
            return m;
        }
    }
}

/// Random tropical data of length `n` with entries in `0..=max` and at least one zero.
pub fn random_data(rng: &mut ChaCha8Rng, n: usize, max: i64) -> TropicalData {
    let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
    if !v.contains(&0) {
        let i = rng.gen_range(0..n);
        v[i] = 0;
    }
    data(&v)
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> TropVector {
    TropVector((0..n).map(|_| Rat::new(rng.gen_range(lo..=hi), rng.gen_range(1..=3i64))).collect())
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Run the binary with `args`, feeding `stdin`.
pub fn run_cli(args: &[&str], stdin: &str) -> Output {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_tropical-mle"))
        .args(args)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .expect("spawn binary");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| *x).collect()).collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det_i128(&minor)
            })
            .sum(),
    }
}

fn int_columns(model: &ModelMatrix) -> Vec<Vec<i128>> {
    use num_traits::ToPrimitive;
    (0..model.n())
        .map(|c| model.matrix().column(c).iter().map(|x| x.to_i128().unwrap()).collect())
        .collect()
}

/// Index sets of the lower facets of the lifted configuration `{(a_i, ω_i)}`,
/// found by trying the hyperplane through every `k` lifted points.
pub fn lower_facets(model: &ModelMatrix, omega: &[i64]) -> Vec<Subset> {
    let (k, n) = (model.k(), model.n());
    let lifted: Vec<Vec<i128>> = int_columns(model)
        .into_iter()
        .zip(omega)
        .map(|(mut col, &w)| {
            col.push(w as i128);
            col
        })
        .collect();
    let mut facets = Vec::new();
    for f in tropical_mle::subset::combinations(n, k) {
        let rows: Vec<&Vec<i128>> = f.iter().map(|i| &lifted[i]).collect();
        // normal vector by cofactor expansion
        let mut h: Vec<i128> = (0..=k)
            .map(|c| {
                let minor: Vec<Vec<i128>> =
                    rows.iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| *x).collect()).collect();
                if c % 2 == 0 { det_i128(&minor) } else { -det_i128(&minor) }
            })
            .collect();
        if h[k] == 0 {
            continue;
        }
        if h[k] < 0 {
            h.iter_mut().for_each(|x| *x = -*x);
        }
        let heights: Vec<i128> = lifted.iter().map(|v| v.iter().zip(&h).map(|(a, b)| a * b).sum()).collect();
        if heights.iter().all(|&x| x >= 0) {
            let on: Subset = (0..n).filter(|&i| heights[i] == 0).collect();
            if !facets.contains(&on) {
                facets.push(on);
            }
        }
    }
    facets.sort();
    facets
}

/// Twice the area of the convex hull of `(row 1, row 2)` for a model with a ones row.
pub fn hull_double_area(model: &ModelMatrix) -> i128 {
    let cols = int_columns(model);
    let mut pts: Vec<(i128, i128)> = cols.iter().map(|c| (c[1], c[2])).collect();
    pts.sort();
    pts.dedup();
    let cross = |o: (i128, i128), a: (i128, i128), b: (i128, i128)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(i128, i128)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i128, i128)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    (0..hull.len()).map(|i| {
        let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
        a.0 * b.1 - a.1 * b.0
    }).sum::<i128>().abs()
}
