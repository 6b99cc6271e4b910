//! Koszul and Ringel duals of a directed bocs, regularisation, and
//! dimension data.

use crate::bocs::{display_poly, Bocs, BocsError};
use crate::dg::{d_squared_residues, DgQuiver, DiffBiquiver, Gen, Poly, Word};
use crate::linalg::span_rank;
use crate::rep::{morphism_space, BocsModule};
use crate::scalar::{one, Q};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_traits::Zero;

/// Generators, relations and differential of a dual bocs. Degree `-1`
/// generators stand for relations, degree `0` for solid and degree `1`
/// for dashed arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPresentation {
    pub dg: DgQuiver,
    /// Whether this is a Ringel dual (vertex order reversed).
    pub ringel: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualError {
    /// The differential of the dual does not square to zero.
    NotSquareZero(String, String),
    /// The presentation still has relations in its degree 0 or 1 part.
    MixedRelations(String),
}

impl core::fmt::Display for DualError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DualError::NotSquareZero(g, r) => write!(f, "dual differential does not square to zero at {g}: {r}"),
            DualError::MixedRelations(g) => write!(f, "generator {g} has a differential involving relation generators"),
        }
    }
}

fn hat_name(gens: &[Gen], w: &Word, reverse: bool) -> (String, Vec<String>) {
    let mut names: Vec<String> = w.letters.iter().map(|&l| gens[l].name.clone()).collect();
    if reverse {
        names.reverse();
    }
    let mut key = names.clone();
    key.reverse();
    (format!("[{}]", names.join(".")), key)
}

/// Signs attached to the dual structure maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignRule {
    /// Koszul signs from the grading; always squares to zero.
    #[default]
    Graded,
    /// Every dual structure map enters with coefficient `+1`.
    Positive,
}

fn kappa(rule: SignRule, t: i32, w: &Word) -> Q {
    if rule == SignRule::Positive {
        return one();
    }
    match t {
        2 => -one(),
        0 if w.len().is_multiple_of(2) => -one(),
        _ => one(),
    }
}

fn build_dual(b: &Bocs, reverse_names: bool, rule: SignRule) -> Result<DgQuiver, DualError> {
    let gens = b.gens();
    let rad = b.rad_basis();
    let layers: [(i32, &[Word]); 3] = [(0, &rad), (1, &b.vbar_basis), (2, &b.vbar2_basis)];
    let mut q = DgQuiver::new(b.n());
    let mut idx: BTreeMap<Word, (usize, i32)> = BTreeMap::new();
    for (t, basis) in [(2, &b.vbar2_basis), (1, &b.vbar_basis), (0, &rad)] {
        for w in basis.iter() {
            let (name, key) = hat_name(gens, w, reverse_names);
            let g = q.add_gen(&name, w.src, w.tgt, 1 - t);
            q.gens[g].key = key;
            idx.insert(w.clone(), (g, t));
        }
    }
    let gword = |q: &DgQuiver, w: &Word| Word::gen(&q.gens, idx[w].0);
    let mut diff = vec![Poly::zero(); q.gens.len()];
    for (t, basis) in layers.into_iter().take(2) {
        for y in basis.iter() {
            let ky = kappa(rule, t, y);
            let lin = if t % 2 == 1 && rule == SignRule::Graded { -ky.clone() } else { ky.clone() };
            for (x, c) in &b.d(&Poly::word(y.clone())).0 {
                let (gx, tx) = idx[x];
                let coeff = kappa(rule, tx, x) * c * &lin;
                diff[gx].add_term(gword(&q, y), coeff);
            }
        }
    }
    for (ty, ys) in layers {
        for (tz, zs) in layers {
            if ty + tz > 2 {
                continue;
            }
            let s = tz + (1 - ty) * (1 - tz);
            let sgn = if s.rem_euclid(2) == 1 && rule == SignRule::Graded { -one() } else { one() };
            for y in ys.iter() {
                for z in zs.iter().filter(|z| z.tgt == y.src) {
                    let prod = b.mul(&Poly::word(y.clone()), &Poly::word(z.clone()));
                    let yz = gword(&q, y).compose(&gword(&q, z)).expect("composable");
                    for (x, c) in &prod.0 {
                        let (gx, tx) = idx[x];
                        let coeff = kappa(rule, tx, x) * kappa(rule, ty, y) * kappa(rule, tz, z) * c * &sgn;
                        diff[gx].add_term(yz.clone(), coeff);
                    }
                }
            }
        }
    }
    q.diff = diff;
    if let Some((g, r)) = d_squared_residues(&q).into_iter().next() {
        return Err(DualError::NotSquareZero(g, display_poly(&q.gens, &r)));
    }
    Ok(q)
}

/// The Koszul dual presentation, with generator `[x]` dual to the basis
/// element `x` of `rad A`, `V̄` or `V̄⊗_A V̄` and written with the same
/// endpoints and word order as `x`.
pub fn koszul_dual(b: &Bocs) -> Result<DualPresentation, DualError> {
    koszul_dual_with(b, SignRule::Graded)
}

pub fn koszul_dual_with(b: &Bocs, rule: SignRule) -> Result<DualPresentation, DualError> {
    Ok(DualPresentation { dg: build_dual(b, false, rule)?, ringel: false })
}

/// The Ringel dual: the Koszul dual of the opposite bocs. Vertices carry
/// the reversed labels `n+1-i`; generator names spell the original words.
pub fn ringel_dual(b: &Bocs) -> Result<DualPresentation, DualError> {
    ringel_dual_with(b, SignRule::Graded)
}

pub fn ringel_dual_with(b: &Bocs, rule: SignRule) -> Result<DualPresentation, DualError> {
    Ok(DualPresentation { dg: build_dual(&b.opposite(), true, rule)?, ringel: true })
}

impl DualPresentation {
    pub fn names(&self, deg: i32) -> Vec<String> {
        self.dg.gens.iter().filter(|g| g.deg == deg).map(|g| g.name.clone()).collect()
    }

    pub fn counts(&self) -> (usize, usize) {
        (self.dg.count(0), self.dg.count(1))
    }

    pub fn relation_count(&self) -> usize {
        self.dg.count(-1)
    }

    pub fn differential(&self, name: &str) -> Option<String> {
        let g = self.dg.index(name)?;
        Some(display_poly(&self.dg.gens, &self.dg.diff[g]))
    }

    /// The biquiver of the dual: relations come from the degree `-1`
    /// generators, keeping only terms free of them.
    pub fn as_bocs(&self) -> Result<DiffBiquiver, DualError> {
        let q = &self.dg;
        let neg: BTreeSet<usize> = (0..q.gens.len()).filter(|&g| q.gens[g].deg < 0).collect();
        for (g, gen) in q.gens.iter().enumerate() {
            if gen.deg >= 0 && neg.iter().any(|&r| q.diff[g].mentions(r)) {
                return Err(DualError::MixedRelations(gen.name.clone()));
            }
        }
        let mut out = q.clone();
        let mut relations = q.relations.clone();
        for &r in &neg {
            let mut rel = Poly::zero();
            for (w, c) in &q.diff[r].0 {
                if !w.letters.iter().any(|l| neg.contains(l)) {
                    rel.add_term(w.clone(), c.clone());
                }
            }
            if !rel.is_zero() {
                relations.push(rel);
            }
        }
        out.remove_gens(&neg);
        let keep: Vec<usize> = (0..q.gens.len()).filter(|g| !neg.contains(g)).collect();
        let mut map = vec![usize::MAX; q.gens.len()];
        for (i, &g) in keep.iter().enumerate() {
            map[g] = i;
        }
        out.relations = relations
            .iter()
            .map(|p| {
                let mut r = Poly::zero();
                for (w, c) in &p.0 {
                    let letters = w.letters.iter().map(|&l| map[l]).collect();
                    r.add_term(Word { src: w.src, tgt: w.tgt, letters }, c.clone());
                }
                r
            })
            .collect();
        Ok(out)
    }
}

/// A generator `x` whose differential is `λ·y + rest` with `y` a
/// generator not occurring in `rest`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superfluous {
    pub x: usize,
    pub y: usize,
    pub lambda: Q,
}

pub fn find_superfluous(q: &DgQuiver) -> Vec<Superfluous> {
    let mut out = Vec::new();
    for (x, d) in q.diff.iter().enumerate() {
        for (w, c) in &d.0 {
            if w.letters.len() != 1 {
                continue;
            }
            let y = w.letters[0];
            if y == x || q.gens[y].deg != q.gens[x].deg + 1 {
                continue;
            }
            let elsewhere = d.0.keys().any(|v| v != w && v.letters.contains(&y));
            if !elsewhere {
                out.push(Superfluous { x, y, lambda: c.clone() });
            }
        }
    }
    out
}

/// Removes `x` and `y`, replacing `y` by `-(1/λ)·rest` and `x` by zero.
pub fn regularize_once(q: &DgQuiver, s: &Superfluous) -> DgQuiver {
    let mut out = q.clone();
    let yw = Word::gen(&q.gens, s.y);
    let mut rest = q.diff[s.x].clone();
    rest.0.remove(&yw);
    let value = rest.scale(&(-one() / &s.lambda));
    out.diff[s.x] = Poly::zero();
    out.substitute(s.x, &Poly::zero());
    out.substitute(s.y, &value);
    out.diff[s.y] = Poly::zero();
    out.remove_gens(&[s.x, s.y].into_iter().collect());
    out
}

/// How competing superfluous pairs are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairOrder {
    /// Lowest degree first, then `(source, target, key)` of `x`.
    Standard,
    /// The largest pair under the standard order.
    Reversed,
}

fn pair_cmp(q: &DgQuiver, a: &Superfluous, b: &Superfluous) -> Ordering {
    let k = |s: &Superfluous| {
        let g = &q.gens[s.x];
        let h = &q.gens[s.y];
        (g.deg, g.src, g.tgt, g.key.clone(), h.key.clone())
    };
    k(a).cmp(&k(b))
}

/// A record of one regularisation step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegStep {
    pub removed: String,
    pub with: String,
}

pub fn regularize_with(q: &DgQuiver, order: PairOrder) -> (DgQuiver, Vec<RegStep>) {
    let mut cur = q.clone();
    let mut steps = Vec::new();
    loop {
        let cands = find_superfluous(&cur);
        let pick = match order {
            PairOrder::Standard => cands.iter().min_by(|a, b| pair_cmp(&cur, a, b)),
            PairOrder::Reversed => cands.iter().max_by(|a, b| pair_cmp(&cur, a, b)),
        };
        let Some(s) = pick.cloned() else { break };
        steps.push(RegStep { removed: cur.gens[s.x].name.clone(), with: cur.gens[s.y].name.clone() });
        cur = regularize_once(&cur, &s);
    }
    (cur, steps)
}

pub fn regularize(q: &DgQuiver) -> (DgQuiver, Vec<RegStep>) {
    regularize_with(q, PairOrder::Standard)
}

/// Regularises a presentation and drops relation generators whose
/// differential vanishes.
pub fn regularize_dual(p: &DualPresentation) -> (DualPresentation, Vec<RegStep>) {
    regularize_dual_with(p, PairOrder::Standard)
}

pub fn regularize_dual_with(p: &DualPresentation, order: PairOrder) -> (DualPresentation, Vec<RegStep>) {
    let (mut dg, mut steps) = regularize_with(&p.dg, order);
    let dead: BTreeSet<usize> = (0..dg.gens.len())
        .filter(|&g| dg.gens[g].deg < 0 && dg.diff[g].is_zero() && !dg.diff.iter().any(|d| d.mentions(g)))
        .collect();
    for &g in &dead {
        steps.push(RegStep { removed: dg.gens[g].name.clone(), with: "0".into() });
    }
    dg.remove_gens(&dead);
    (DualPresentation { dg, ringel: p.ringel }, steps)
}

pub fn is_regular(b: &Bocs) -> bool {
    find_superfluous(&b.quiver).is_empty()
}

/// Dimension data of a bocs, matrices indexed `[i-1][l-1]` for pairs `i → l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimReport {
    pub solid: Vec<Vec<usize>>,
    pub dashed: Vec<Vec<usize>>,
    pub hom: Vec<Vec<usize>>,
    pub ext: Vec<Vec<usize>>,
    pub dim_a: usize,
    pub dim_vbar: usize,
    pub right_algebra: usize,
}

/// `dim Hom(Δ_i, Δ_l)` through bocs morphisms between simples, and
/// `dim Ext¹(Δ_i, Δ_l)` as `dim e_l (rad A / rad² A) e_i`.
pub fn hom_ext_matrices(b: &Bocs) -> DimReport {
    let n = b.n();
    let simples: Vec<BocsModule> = (1..=n).map(|i| BocsModule::simple(b, i)).collect();
    let mut hom = vec![vec![0; n]; n];
    for i in 0..n {
        for l in 0..n {
            hom[i][l] = morphism_space(b, &simples[i], &simples[l]).len();
        }
    }
    let rad = b.rad_basis();
    let mut ext = vec![vec![0; n]; n];
    for i in 1..=n {
        for l in 1..=n {
            let part: Vec<&Word> = rad.iter().filter(|w| w.src == i && w.tgt == l).collect();
            if part.is_empty() {
                continue;
            }
            let idx: BTreeMap<&Word, usize> = part.iter().enumerate().map(|(k, w)| (*w, k)).collect();
            let mut sq = Vec::new();
            for x in &rad {
                for y in rad.iter().filter(|y| y.src == i && y.tgt == x.src && x.tgt == l) {
                    let p = b.mul(&Poly::word(x.clone()), &Poly::word(y.clone()));
                    let mut v = vec![Q::zero(); part.len()];
                    for (w, c) in &p.0 {
                        v[idx[w]] = c.clone();
                    }
                    sq.push(v);
                }
            }
            ext[i - 1][l - 1] = part.len() - span_rank(&sq, part.len());
        }
    }
    DimReport {
        solid: b.quiver.count_matrix(0),
        dashed: b.quiver.count_matrix(1),
        hom,
        ext,
        dim_a: b.a_basis.len(),
        dim_vbar: b.vbar_basis.len(),
        right_algebra: right_algebra_dim(b).0,
    }
}

/// `dim R` and the contribution of `A` and of each dashed generator.
pub fn right_algebra_dim(b: &Bocs) -> (usize, Vec<(String, usize)>) {
    let n = b.n();
    let mut right = vec![0; n + 1];
    for w in &b.a_basis {
        right[w.tgt] += 1;
    }
    let mut parts = vec![("A".to_string(), b.a_basis.len())];
    for g in b.gens().iter().filter(|g| g.deg == 1) {
        parts.push((g.name.clone(), right[g.src] * right[g.tgt]));
    }
    (parts.iter().map(|p| p.1).sum(), parts)
}

/// Whether the number of dashed generators between each pair of distinct
/// vertices equals `dim Hom(L(i), L(l))`.
pub fn generator_count_check(b: &Bocs) -> bool {
    let r = hom_ext_matrices(b);
    let n = b.n();
    (0..n).all(|i| (0..n).all(|l| i == l || r.hom[i][l] == r.dashed[i][l]))
}

/// Regularised Ringel dual of a bocs, as a presentation.
pub fn regular_ringel_dual(b: &Bocs) -> Result<DualPresentation, DualError> {
    Ok(regularize_dual(&ringel_dual(b)?).0)
}

/// Builds the bocs of a presentation once no relation generators remain
/// in the degree 0 and 1 differentials.
pub fn presentation_bocs(p: &DualPresentation) -> Result<Result<Bocs, BocsError>, DualError> {
    Ok(Bocs::new(&p.as_bocs()?))
}

