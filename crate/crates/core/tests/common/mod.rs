#![allow(dead_code)]

use lattice_cft_core::surface::{Orientation, Surface};
use lattice_cft_core::Rational;
use num_complex::Complex64;
use rand::Rng;
use std::collections::BTreeMap;

/// Rank over Q by exact elimination.
pub fn rank_q(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != Rational::from_integer(0)) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c];
        for i in 0..m.len() {
            if i != rank && m[i][c] != Rational::from_integer(0) {
                let f = m[i][c] / pivot;
                for j in 0..cols {
                    let v = m[rank][j];
                    m[i][j] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Components and first Betti number of the glued surface, from a cell
/// structure on each piece: a vertex per component and per circle, loops
/// `a_j, b_j`, a tail `t_i` and loop `c_i` per circle, one face bounded by
/// `Π[a_j, b_j]·Π t_i c_i t_i⁻¹`. Gluing identifies `c_in` with `c_out` reversed.
pub fn cw_homology(pieces: &Surface, matching: &[(String, String)]) -> (usize, usize) {
    let mut vertex = BTreeMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut loop_edge: BTreeMap<String, usize> = BTreeMap::new();
    let mut faces: Vec<Vec<String>> = Vec::new();
    let mut nv = 0;
    for (k, comp) in pieces.components().iter().enumerate() {
        let centre = nv;
        vertex.insert(format!("#{k}"), centre);
        nv += 1;
        for _ in 0..2 * comp.genus {
            edges.push((centre, centre));
        }
        for b in &comp.boundaries {
            vertex.insert(b.id.clone(), nv);
            edges.push((centre, nv));
            loop_edge.insert(b.id.clone(), edges.len());
            edges.push((nv, nv));
            nv += 1;
        }
        faces.push(comp.boundaries.iter().map(|b| b.id.clone()).collect());
    }
    let mut vmap: Vec<usize> = (0..nv).collect();
    let mut emap: Vec<(usize, i64)> = (0..edges.len()).map(|e| (e, 1)).collect();
    for (x, y) in matching {
        let (out, inn) = match pieces.boundary(x).unwrap().1.orientation {
            Orientation::Out => (x, y),
            Orientation::In => (y, x),
        };
        vmap[vertex[inn]] = vertex[out];
        emap[loop_edge[inn]] = (loop_edge[out], -1);
    }
    let vroot = |mut v: usize| {
        while vmap[v] != v {
            v = vmap[v];
        }
        v
    };
    let verts: Vec<usize> = (0..nv).filter(|&v| vroot(v) == v).collect();
    let live: Vec<usize> = (0..edges.len()).filter(|&e| emap[e].0 == e).collect();
    let d1: Vec<Vec<i64>> = live
        .iter()
        .map(|&e| {
            let (t, h) = edges[e];
            verts
                .iter()
                .map(|&v| (vroot(h) == v) as i64 - (vroot(t) == v) as i64)
                .collect()
        })
        .collect();
    let d2: Vec<Vec<i64>> = faces
        .iter()
        .map(|f| {
            let mut row = vec![0i64; live.len()];
            for id in f {
                let (e, s) = emap[loop_edge[id]];
                row[live.iter().position(|&x| x == e).unwrap()] += s;
            }
            row
        })
        .collect();
    let r1 = rank_q(&d1);
    let r2 = rank_q(&d2);
    (verts.len() - r1, live.len() - r1 - r2)
}

pub fn random_piece<R: Rng>(prefix: &str, rng: &mut R) -> Surface {
    let g = rng.gen_range(0..=2);
    let b = rng.gen_range(1..=4);
    let ids: Vec<String> = (0..b).map(|i| format!("{prefix}{i}")).collect();
    let bs: Vec<(&str, Orientation)> = ids
        .iter()
        .map(|id| (id.as_str(), if rng.gen_bool(0.5) { Orientation::Out } else { Orientation::In }))
        .collect();
    Surface::connected(g, &bs).unwrap()
}

/// Random disjoint pairs of opposite orientation.
pub fn random_matching<R: Rng>(s: &Surface, rng: &mut R) -> Vec<(String, String)> {
    let mut outs: Vec<String> = s.boundaries().filter(|b| b.orientation == Orientation::Out).map(|b| b.id.clone()).collect();
    let mut ins: Vec<String> = s.boundaries().filter(|b| b.orientation == Orientation::In).map(|b| b.id.clone()).collect();
    let mut pairs = Vec::new();
    while !outs.is_empty() && !ins.is_empty() && (pairs.is_empty() || rng.gen_bool(0.6)) {
        let o = outs.swap_remove(rng.gen_range(0..outs.len()));
        let i = ins.swap_remove(rng.gen_range(0..ins.len()));
        if rng.gen_bool(0.5) {
            pairs.push((o, i));
        } else {
            pairs.push((i, o));
        }
    }
    pairs
}

/// Classes of `G⁻¹y mod Z^r` for `y` in a box, with `q = yᵀG⁻¹y mod 2`.
pub fn dual_cosets(gram: &[Vec<i64>]) -> Vec<(Vec<Rational>, Rational)> {
    let r = gram.len();
    let inv = rational_inverse(gram);
    let det = rational_det(gram).to_integer();
    let mut seen = BTreeMap::new();
    let total = (det as usize).pow(r as u32);
    for idx in 0..total {
        let mut rest = idx;
        let y: Vec<i64> = (0..r)
            .map(|_| {
                let c = (rest % det as usize) as i64;
                rest /= det as usize;
                c
            })
            .collect();
        let x: Vec<Rational> = (0..r)
            .map(|i| (0..r).map(|j| inv[i][j] * Rational::from_integer(y[j])).sum())
            .collect();
        let frac: Vec<Rational> = x.iter().map(|v| v - v.floor()).collect();
        let q: Rational = (0..r).map(|i| Rational::from_integer(y[i]) * x[i]).sum();
        let q = q - (q / 2).floor() * 2;
        seen.entry(frac).or_insert(q);
    }
    seen.into_iter().collect()
}

pub fn rational_det(m: &[Vec<i64>]) -> Rational {
    let n = m.len();
    if n == 1 {
        return Rational::from_integer(m[0][0]);
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            Rational::from_integer(s * m[0][j]) * rational_det(&minor)
        })
        .sum()
}

pub fn rational_inverse(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let det = rational_det(m);
    if n == 1 {
        return vec![vec![Rational::from_integer(1) / det]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m
                        .iter()
                        .enumerate()
                        .filter(|&(r, _)| r != j)
                        .map(|(_, row)| row.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect())
                        .collect();
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    Rational::from_integer(s) * rational_det(&minor) / det
                })
                .collect()
        })
        .collect()
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn cis(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * turns)
}
