//! Independent dense reference implementations built from explicit 2x2
//! matrices and Kronecker products. Site 0 is the least significant bit of
//! the computational-basis index; bit value 1 is spin up.
#![allow(dead_code)]

use std::collections::BTreeSet;

use faer::{Mat, Side};

pub type Dense = Mat<f64>;

pub fn id2() -> Dense {
    Mat::from_fn(2, 2, |i, j| if i == j { 1.0 } else { 0.0 })
}

pub fn sz() -> Dense {
    Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => -1.0,
        (1, 1) => 1.0,
        _ => 0.0,
    })
}

pub fn sx() -> Dense {
    Mat::from_fn(2, 2, |i, j| if i != j { 1.0 } else { 0.0 })
}

/// Raises: `|up><down|`.
pub fn sp() -> Dense {
    Mat::from_fn(2, 2, |i, j| if (i, j) == (1, 0) { 1.0 } else { 0.0 })
}

pub fn sm() -> Dense {
    Mat::from_fn(2, 2, |i, j| if (i, j) == (0, 1) { 1.0 } else { 0.0 })
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// `prod_k op_k` with `ops` given as `(site, 2x2)` on `n` sites.
pub fn string(n: usize, ops: &[(usize, Dense)]) -> Dense {
    let mut out = Mat::from_fn(1, 1, |_, _| 1.0);
    for site in (0..n).rev() {
        let mut local = id2();
        for (s, op) in ops {
            if *s == site {
                local = &local * op;
            }
        }
        out = kron(&out, &local);
    }
    out
}

pub fn zeros(n: usize) -> Dense {
    Mat::zeros(1 << n, 1 << n)
}

pub fn add_scaled(acc: &mut Dense, m: &Dense, c: f64) {
    for j in 0..acc.ncols() {
        for i in 0..acc.nrows() {
            acc[(i, j)] += c * m[(i, j)];
        }
    }
}

pub fn field(n: usize) -> Dense {
    let mut h = zeros(n);
    for i in 0..n {
        add_scaled(&mut h, &string(n, &[(i, sz())]), 1.0);
    }
    h
}

fn unordered(pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<(usize, usize)> {
    pairs
        .into_iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

pub fn ring_bonds(n: usize, d: usize) -> Vec<(usize, usize)> {
    unordered((0..n).map(|i| (i, (i + d) % n)))
}

pub fn torus_bonds(lx: usize, ly: usize) -> Vec<(usize, usize)> {
    let site = |x: usize, y: usize| (y % ly) * lx + (x % lx);
    unordered((0..ly).flat_map(|y| (0..lx).flat_map(move |x| [(site(x, y), site(x + 1, y)), (site(x, y), site(x, y + 1))])))
}

/// `s+_a s+_b + s-_a s-_b`.
pub fn pair(n: usize, a: usize, b: usize) -> Dense {
    let mut m = string(n, &[(a, sp()), (b, sp())]);
    add_scaled(&mut m, &string(n, &[(a, sm()), (b, sm())]), 1.0);
    m
}

/// `s+_a s-_b + s-_a s+_b`.
pub fn hop(n: usize, a: usize, b: usize) -> Dense {
    let mut m = string(n, &[(a, sp()), (b, sm())]);
    add_scaled(&mut m, &string(n, &[(a, sm()), (b, sp())]), 1.0);
    m
}

/// `sum_i V_i` on a ring: nearest and next-nearest pair terms.
pub fn pair_sum(n: usize) -> Dense {
    let mut v = zeros(n);
    for d in [1, 2] {
        for (a, b) in ring_bonds(n, d) {
            add_scaled(&mut v, &pair(n, a, b), 1.0);
        }
    }
    v
}

pub fn h1d(n: usize, j: f64) -> Dense {
    let mut h = field(n);
    add_scaled(&mut h, &pair_sum(n), 4.0 * j);
    h
}

/// `(1 + 8J^2) sum z + 4J^2 sum_i z_i sum_{j<k in N(i)} (s+_j s-_k + h.c.)`
/// with `N(i) = {i-2, i-1, i+1, i+2}`.
pub fn h1dsw(n: usize, j: f64) -> Dense {
    let mut h = zeros(n);
    add_scaled(&mut h, &field(n), 1.0 + 8.0 * j * j);
    for i in 0..n {
        let nb: Vec<usize> = [n - 2, n - 1, 1, 2].iter().map(|d| (i + d) % n).collect();
        for a in 0..4 {
            for b in a + 1..4 {
                let (x, y) = (nb[a], nb[b]);
                let mut t = string(n, &[(i, sz()), (x, sp()), (y, sm())]);
                add_scaled(&mut t, &string(n, &[(i, sz()), (x, sm()), (y, sp())]), 1.0);
                add_scaled(&mut h, &t, 4.0 * j * j);
            }
        }
    }
    h
}

pub fn h2dtfim(lx: usize, ly: usize, j: f64) -> Dense {
    let n = lx * ly;
    let mut h = field(n);
    for (a, b) in torus_bonds(lx, ly) {
        add_scaled(&mut h, &string(n, &[(a, sx()), (b, sx())]), j);
    }
    h
}

pub fn h2dpt(lx: usize, ly: usize, j: f64) -> Dense {
    let n = lx * ly;
    let mut h = field(n);
    for (a, b) in torus_bonds(lx, ly) {
        add_scaled(&mut h, &hop(n, a, b), j);
    }
    h
}

/// SW generator `J sum (s+s+ - s-s-)` over nn and nnn ring bonds.
pub fn sw_generator(n: usize, j: f64) -> Dense {
    let mut s = zeros(n);
    for d in [1, 2] {
        for (a, b) in ring_bonds(n, d) {
            add_scaled(&mut s, &string(n, &[(a, sp()), (b, sp())]), j);
            add_scaled(&mut s, &string(n, &[(a, sm()), (b, sm())]), -j);
        }
    }
    s
}

pub fn commutator(a: &Dense, b: &Dense) -> Dense {
    a * b - b * a
}

pub fn max_abs(m: &Dense) -> f64 {
    let mut w: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            w = w.max(m[(i, j)].abs());
        }
    }
    w
}

pub fn spectrum(m: &Dense) -> Vec<f64> {
    let mut e = m.self_adjoint_eigenvalues(Side::Lower).expect("dense oracle eigenvalues");
    e.sort_by(f64::total_cmp);
    e
}

/// Largest elementwise difference of two sorted multisets.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets differ in size");
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Mean gap ratio over the central 20% of an ascending spectrum, written out
/// directly from the definition.
pub fn reference_r_ave(e: &[f64]) -> f64 {
    let d = e.len() as f64;
    let lo = (0.4 * d).round() as usize;
    let hi = (0.6 * d).round() as usize;
    let gaps: Vec<f64> = (lo..hi - 1).map(|i| e[i + 1] - e[i]).collect();
    let r: Vec<f64> = (0..gaps.len() - 1).map(|i| gaps[i].min(gaps[i + 1]) / gaps[i].max(gaps[i + 1])).collect();
    r.iter().sum::<f64>() / r.len() as f64
}
