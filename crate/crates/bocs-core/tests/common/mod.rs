#![allow(dead_code)]

use bocs_core::dg::{DgQuiver, Poly, Word};
use bocs_core::linalg::Matrix;
use bocs_core::scalar::{q, Q};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Seed from `BOCSKIT_SEED`, or a fixed default.
pub fn rng(salt: u64) -> ChaCha8Rng {
    let seed = std::env::var("BOCSKIT_SEED").ok().and_then(|s| s.parse::<u64>().ok()).unwrap_or(0x5eed);
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Differential of a word, as coordinates over the given list of words.
fn coords(p: &Poly, index: &BTreeMap<Word, usize>) -> Option<Vec<Q>> {
    let mut v = vec![Q::zero(); index.len()];
    for (w, c) in &p.0 {
        v[*index.get(w)?] = c.clone();
    }
    Some(v)
}

/// A random free differential biquiver on at most `max_n` vertices with
/// differential coefficients in `{0, 1, -1}`. Generators are added in
/// order of increasing span, and each differential is drawn from the
/// cycles of the part already built.
pub fn random_biquiver(rng: &mut ChaCha8Rng, max_n: usize) -> DgQuiver {
    let n = if max_n > 2 && rng.gen_bool(0.85) { rng.gen_range(3..=max_n) } else { 2 };
    let mut q = DgQuiver::new(n);
    let mut pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |l| (i, l))).collect();
    pairs.sort_by_key(|(i, l)| (l - i, *i));
    let names = ["a", "b", "c", "d", "e", "f", "g", "h"];
    let dnames = ["p", "r", "s", "t", "u", "v", "x", "y"];
    let mut k = 0;
    for (i, l) in pairs {
        let solid = rng.gen_range(0..=if l - i == 1 { 1 } else { 2 });
        let dashed = rng.gen_range(0..=1);
        for (count, deg, base) in [(dashed, 1, &dnames), (solid, 0, &names)] {
            for _ in 0..count {
                let name = format!("{}{}", base[k % base.len()], k);
                k += 1;
                let g = q.add_gen(&name, i, l, deg);
                q.diff[g] = random_cycle(rng, &q, i, l, deg + 1, g);
            }
        }
    }
    q
}

fn random_cycle(rng: &mut ChaCha8Rng, q: &DgQuiver, i: usize, l: usize, deg: i32, own: usize) -> Poly {
    let words = q.all_words();
    let cands: Vec<Word> = words
        .get(&(i, l, deg))
        .into_iter()
        .flatten()
        .filter(|w| !w.is_trivial() && !w.letters.contains(&own))
        .cloned()
        .collect();
    if cands.is_empty() {
        return Poly::zero();
    }
    let targets: Vec<Word> = words.get(&(i, l, deg + 1)).cloned().unwrap_or_default();
    let tindex: BTreeMap<Word, usize> = targets.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
    let mut m = Matrix::zeros(targets.len().max(1), cands.len());
    for (j, w) in cands.iter().enumerate() {
        let d = q.d(&Poly::word(w.clone()));
        let Some(v) = coords(&d, &tindex) else { return Poly::zero() };
        for (r, x) in v.into_iter().enumerate() {
            m[(r, j)] = x;
        }
    }
    let kernel = m.nullspace();
    for _ in 0..8 {
        let mut v = vec![Q::zero(); cands.len()];
        for b in &kernel {
            let c = q_small(rng);
            for (x, y) in v.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        if v.iter().all(|x| x.is_zero() || x.abs_one()) {
            let mut p = Poly::zero();
            for (w, c) in cands.iter().zip(v) {
                p.add_term(w.clone(), c);
            }
            return p;
        }
    }
    Poly::zero()
}

trait AbsOne {
    fn abs_one(&self) -> bool;
}

impl AbsOne for Q {
    fn abs_one(&self) -> bool {
        self.is_one() || (-self.clone()).is_one()
    }
}

fn q_small(rng: &mut ChaCha8Rng) -> Q {
    if rng.gen_bool(0.2) {
        Q::zero()
    } else {
        q(if rng.gen_bool(0.5) { 1 } else { -1 })
    }
}

/// A random object over `b` with basis vectors sorted by vertex and each
/// structure coefficient nonzero with probability `density`.
pub fn random_object(rng: &mut ChaCha8Rng, b: &bocs_core::bocs::Bocs, max_per_vertex: usize, density: f64) -> bocs_core::rep::NObject {
    let mut vertex = Vec::new();
    for i in 1..=b.n() {
        for _ in 0..rng.gen_range(0..=max_per_vertex) {
            vertex.push(i);
        }
    }
    let labels = (0..vertex.len()).map(|k| format!("y{k}")).collect();
    let mut y = bocs_core::rep::NObject::new(vertex.clone(), labels);
    for k in 0..vertex.len() {
        for (k2, &v2) in vertex.iter().enumerate() {
            for x in &b.vbar_basis {
                if x.tgt == vertex[k] && x.src == v2 && rng.gen_bool(density) {
                    y.add(k, x.clone(), k2, q(if rng.gen_bool(0.5) { 1 } else { -1 }));
                }
            }
        }
    }
    y
}

/// All paths of the solid part of a quiver without relations, found by
/// extending trivial paths one arrow at a time.
pub fn solid_paths(q: &DgQuiver) -> Vec<Word> {
    let mut out: Vec<Word> = (1..=q.n).map(Word::trivial).collect();
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            for (g, gen) in q.gens.iter().enumerate() {
                if gen.deg == 0 && gen.src == p.tgt {
                    next.push(q.gen_word(g).compose(p).expect("composable"));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Dimension of `Hom_A(M, A)` for the left module `M = A e_l ⊗ e_i A`,
/// or `M = A` when `pair` is `None`, by solving the linearity equations
/// for an unknown matrix `M → A`. `A` must be free.
pub fn left_linear_maps(q: &DgQuiver, pair: Option<(usize, usize)>) -> usize {
    let paths = solid_paths(q);
    let index: BTreeMap<Word, usize> = paths.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
    // M basis as (left factor, right factor)
    let m_basis: Vec<(Word, Option<Word>)> = match pair {
        None => paths.iter().map(|p| (p.clone(), None)).collect(),
        Some((i, l)) => paths
            .iter()
            .filter(|p| p.src == l)
            .flat_map(|p| paths.iter().filter(|r| r.tgt == i).map(move |r| (p.clone(), Some(r.clone()))))
            .collect(),
    };
    let m_index: BTreeMap<(Word, Option<Word>), usize> = m_basis.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
    let (na, nm) = (paths.len(), m_basis.len());
    let unknown = |r: usize, m: usize| r * nm + m;
    let mut acts: Vec<Word> = (1..=q.n).map(Word::trivial).collect();
    acts.extend((0..q.gens.len()).filter(|&g| q.gens[g].deg == 0).map(|g| q.gen_word(g)));
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for x in &acts {
        let left = |p: &Word| if x.src == p.tgt { x.compose(p) } else { None };
        for (m, (p, r)) in m_basis.iter().enumerate() {
            // F(x m) - x F(m) = 0, one equation per basis path of A
            for t in 0..na {
                let mut row = vec![Q::zero(); na * nm];
                if let Some(xp) = left(p) {
                    row[unknown(t, m_index[&(xp, r.clone())])] += Q::one();
                }
                for (s, path) in paths.iter().enumerate() {
                    if left(path).is_some_and(|xs| index[&xs] == t) {
                        row[unknown(s, m)] -= Q::one();
                    }
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let mut mat = Matrix::zeros(rows.len().max(1), na * nm);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, c) in row.into_iter().enumerate() {
            mat[(i, j)] = c;
        }
    }
    mat.nullspace().len()
}

/// `dim Hom_A(V, A)` for a free bocs, one summand of `V` at a time.
pub fn right_algebra_oracle(q: &DgQuiver) -> usize {
    let mut total = left_linear_maps(q, None);
    for g in q.gens.iter().filter(|g| g.deg == 1) {
        total += left_linear_maps(q, Some((g.src, g.tgt)));
    }
    total
}
