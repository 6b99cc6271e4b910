//! Curve-like differential biquivers with at most four vertices: case
//! enumeration, exclusion filters, normal forms and the Ringel pairing.

use crate::bocs::{biquiver, display_poly, validate, Bocs};
use crate::dg::{DgQuiver, DiffBiquiver, Poly, Word};
use crate::koszul::regular_ringel_dual;
use crate::linalg::{in_span, Matrix};
use crate::rep::{compose, morphism_space, BocsModule};
use crate::scalar::{one, Q};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassifyError {
    OutOfRange(usize),
}

impl core::fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ClassifyError::OutOfRange(n) => write!(f, "classification is available for 2 <= n <= 4, not {n}"),
        }
    }
}

fn check_n(n: usize) -> Result<(), ClassifyError> {
    if (2..=4).contains(&n) {
        Ok(())
    } else {
        Err(ClassifyError::OutOfRange(n))
    }
}

const SOLID4: [(&str, usize, usize); 6] = [("a", 1, 2), ("b", 2, 3), ("c", 3, 4), ("d", 1, 3), ("e", 2, 4), ("f", 1, 4)];
const DASHED4: [(&str, usize, usize); 6] =
    [("phi", 1, 2), ("psi", 2, 3), ("rho", 3, 4), ("chi", 1, 3), ("sigma", 2, 4), ("tau", 1, 4)];
const SOLID3: [(&str, usize, usize); 3] = [("a", 1, 2), ("b", 2, 3), ("c", 1, 3)];
const DASHED3: [(&str, usize, usize); 3] = [("phi", 1, 2), ("psi", 2, 3), ("chi", 1, 3)];

/// One solid and one dashed arrow for every pair `i < l`, with zero
/// differential.
pub fn canonical_biquiver(n: usize) -> Result<DiffBiquiver, ClassifyError> {
    check_n(n)?;
    Ok(match n {
        2 => biquiver(2, &[("a", 1, 2)], &[("phi", 1, 2)]),
        3 => biquiver(3, &SOLID3, &DASHED3),
        _ => biquiver(4, &SOLID4, &DASHED4),
    })
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub label: String,
    pub quiver: DiffBiquiver,
}

fn with_diffs(n: usize, diffs: &[(&str, String)]) -> DiffBiquiver {
    let mut q = canonical_biquiver(n).expect("range checked");
    for (g, text) in diffs {
        if !text.is_empty() {
            q.set_diff(g, text);
        }
    }
    q
}

fn join(terms: &[(bool, &str)]) -> String {
    let mut s = String::new();
    for (on, t) in terms {
        if !*on {
            continue;
        }
        if !s.is_empty() && !t.starts_with('-') {
            s.push_str(" + ");
        } else if !s.is_empty() {
            s.push(' ');
        }
        s.push_str(t);
    }
    s
}

/// Bit pattern of nonzero compositions
/// `ψa, bφ, ρb, cψ, ρψa, ρbφ, cψφ` for each of the cases A–K.
const CASES4: [(&str, [bool; 7]); 11] = [
    ("A", [false, true, false, true, false, false, true]),
    ("B", [false, true, true, false, false, true, false]),
    ("C", [false, true, true, true, false, true, true]),
    ("D", [true, false, false, true, false, false, true]),
    ("E", [true, false, false, true, true, false, false]),
    ("F", [true, false, false, true, true, false, true]),
    ("G", [true, false, true, false, true, false, false]),
    ("H", [true, false, true, true, true, false, false]),
    ("I", [true, true, false, true, false, false, true]),
    ("J", [true, true, true, false, true, true, false]),
    ("K", [true, true, true, true, true, true, true]),
];

/// Differentials on `d, e, f` from the composition data: `∂d = β bφ + α ψa`,
/// `∂e = γ ρb + δ cψ`, `∂f = x ρd + y σa + z cχ + w eφ` with `∂² = 0`
/// forcing `y = xα`, `wγ = xβ`, `z = -wδ`.
fn four_vertex_patterns() -> Vec<([bool; 7], [String; 3])> {
    let mut out: Vec<([bool; 7], [String; 3])> = Vec::new();
    for bits in 0..16u8 {
        let (al, be, ga, de) = (bits & 8 != 0, bits & 4 != 0, bits & 2 != 0, bits & 1 != 0);
        if !(al || be) || !(ga || de) {
            continue;
        }
        for (x, w) in [(false, false), (false, true), (true, false), (true, true)] {
            let y = x && al;
            let z = w && de;
            if (w && ga) != (x && be) || !(y || w) || !(x || z) {
                continue;
            }
            let pattern = [al, be, ga, de, y, w && ga, z];
            let dd = join(&[(be, "b*phi"), (al, "psi*a")]);
            let de_ = join(&[(ga, "rho*b"), (de, "c*psi")]);
            let df = join(&[(x, "rho*d"), (y, "sigma*a"), (w, "e*phi"), (z, "- c*chi")]);
            if !out.iter().any(|(p, _)| *p == pattern) {
                out.push((pattern, [dd, de_, df]));
            }
        }
    }
    out
}

/// All composition patterns with `∂² = 0` and coefficients normalised by
/// rescaling.
pub fn enumerate_candidates(n: usize) -> Result<Vec<Candidate>, ClassifyError> {
    check_n(n)?;
    let mut out = Vec::new();
    match n {
        2 => out.push(Candidate { label: "1".into(), quiver: canonical_biquiver(2)? }),
        3 => {
            for (k, chi) in [("1", ""), ("2", "psi*phi")] {
                for (l, c) in [("A", "psi*a"), ("B", "b*phi"), ("C", "psi*a + b*phi"), ("D", "")] {
                    let q = with_diffs(3, &[("chi", chi.into()), ("c", c.into())]);
                    out.push(Candidate { label: format!("{k}{l}"), quiver: q });
                }
            }
        }
        _ => {
            let pats = four_vertex_patterns();
            for (label, bits) in CASES4 {
                let (_, [dd, de, df]) = pats.iter().find(|(p, _)| *p == bits).expect("pattern from the case table");
                let q = with_diffs(
                    4,
                    &[
                        ("chi", "psi*phi".into()),
                        ("sigma", "rho*psi".into()),
                        ("tau", "sigma*phi + rho*chi".into()),
                        ("d", dd.clone()),
                        ("e", de.clone()),
                        ("f", df.clone()),
                    ],
                );
                out.push(Candidate { label: label.into(), quiver: q });
            }
        }
    }
    Ok(out)
}

/// Number of composition patterns produced by the `∂² = 0` analysis on four
/// vertices, before they are matched with the case table.
pub fn four_vertex_pattern_count() -> usize {
    four_vertex_patterns().len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exclusion {
    Invalid,
    /// A composite of homomorphisms between standard modules vanishes.
    HomComposition,
    /// Neither composite of a homomorphism with an extension is nonzero.
    HomExtComposition,
    /// The regularised Ringel dual has the wrong number of generators.
    DualDimension,
}

impl Exclusion {
    pub fn code(&self) -> &'static str {
        match self {
            Exclusion::Invalid => "invalid",
            Exclusion::HomComposition => "hom-composition",
            Exclusion::HomExtComposition => "hom-ext-composition",
            Exclusion::DualDimension => "dual-dimension",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Excluded {
    pub candidate: Candidate,
    pub reason: Exclusion,
    pub witness: String,
}

fn generator_between(q: &DgQuiver, deg: i32, i: usize, l: usize) -> Option<usize> {
    q.gens.iter().position(|g| g.deg == deg && g.src == i && g.tgt == l)
}

fn hom_composition_witness(b: &Bocs) -> Option<String> {
    let n = b.n();
    let simples: Vec<BocsModule> = (1..=n).map(|i| BocsModule::simple(b, i)).collect();
    for i in 1..=n {
        for l in i + 1..=n {
            for m in l + 1..=n {
                let fs = morphism_space(b, &simples[i - 1], &simples[l - 1]);
                let gs = morphism_space(b, &simples[l - 1], &simples[m - 1]);
                for f in &fs {
                    for g in &gs {
                        if compose(b, g, f).map(|h| h.is_zero()).unwrap_or(true) {
                            return Some(format!("Hom(L{l},L{m}) o Hom(L{i},L{l}) = 0"));
                        }
                    }
                }
            }
        }
    }
    None
}

fn hom_ext_witness(q: &DgQuiver) -> Option<String> {
    let n = q.n;
    for i in 1..=n {
        for l in i + 1..=n {
            for m in l + 1..=n {
                let Some(x) = generator_between(q, 0, i, m) else { continue };
                let words = [
                    (generator_between(q, 1, l, m), generator_between(q, 0, i, l)),
                    (generator_between(q, 0, l, m), generator_between(q, 1, i, l)),
                ];
                let hit = words.iter().any(|(u, v)| match (u, v) {
                    (Some(u), Some(v)) => {
                        let w = Word::gen(&q.gens, *u).compose(&Word::gen(&q.gens, *v)).expect("composable");
                        !q.diff[x].coeff(&w).is_zero()
                    }
                    _ => false,
                });
                if !hit {
                    return Some(format!("d({}) has no composite through vertex {l}", q.gens[x].name));
                }
            }
        }
    }
    None
}

fn target_counts(n: usize) -> (usize, usize) {
    (n * (n - 1) / 2, n * (n - 1) / 2)
}

/// Splits candidates into survivors and exclusions. Checks run in order:
/// validity, composition of homs, homs against extensions, then the
/// dimensions of the regularised Ringel dual.
pub fn apply_constraints(cands: Vec<Candidate>) -> (Vec<Candidate>, Vec<Excluded>) {
    let mut keep = Vec::new();
    let mut gone = Vec::new();
    for c in cands {
        let report = validate(&c.quiver);
        if !report.passed() {
            let w = report.violations.first().map(|v| format!("{}: {}", v.generator, v.residue)).unwrap_or_default();
            gone.push(Excluded { candidate: c, reason: Exclusion::Invalid, witness: w });
            continue;
        }
        let b = Bocs::new(&c.quiver).expect("validated");
        if let Some(w) = hom_composition_witness(&b) {
            gone.push(Excluded { candidate: c, reason: Exclusion::HomComposition, witness: w });
            continue;
        }
        if let Some(w) = hom_ext_witness(&c.quiver) {
            gone.push(Excluded { candidate: c, reason: Exclusion::HomExtComposition, witness: w });
            continue;
        }
        let (got, target) = dual_counts(&b);
        if got != target {
            let w = format!("regularised Ringel dual has {got:?} generators in degrees (0, 1), expected {target:?}");
            gone.push(Excluded { candidate: c, reason: Exclusion::DualDimension, witness: w });
            continue;
        }
        keep.push(c);
    }
    (keep, gone)
}

/// Generator counts `(degree 0, degree 1)` of the regularised Ringel dual
/// and the curve-like target.
pub fn dual_counts(b: &Bocs) -> ((usize, usize), (usize, usize)) {
    let d = regular_ringel_dual(b).expect("dual of a valid bocs");
    (d.counts(), target_counts(b.n()))
}

/// Coefficient positions `(generator, word)` of a differential on a
/// canonical biquiver.
fn positions(q: &DgQuiver) -> Vec<(usize, Word)> {
    let words = q.all_words();
    let mut out = Vec::new();
    for (g, gen) in q.gens.iter().enumerate() {
        if let Some(ws) = words.get(&(gen.src, gen.tgt, gen.deg + 1)) {
            for w in ws {
                if !w.is_trivial() {
                    out.push((g, w.clone()));
                }
            }
        }
    }
    out
}

fn replace_occurrences(p: &Poly, g: usize, value: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (w, c) in &p.0 {
        for (k, &l) in w.letters.iter().enumerate() {
            if l != g {
                continue;
            }
            for (vw, vc) in &value.0 {
                let mut letters = w.letters[..k].to_vec();
                letters.extend_from_slice(&vw.letters);
                letters.extend_from_slice(&w.letters[k + 1..]);
                out.add_term(Word { src: w.src, tgt: w.tgt, letters }, c * vc);
            }
        }
    }
    out
}

/// First-order change of the differential under `g ↦ g + ν·w`.
fn move_delta(q: &DgQuiver, g: usize, w: &Word) -> Vec<Poly> {
    let wp = Poly::word(w.clone());
    let mut out = Vec::new();
    for h in 0..q.gens.len() {
        let mut d = replace_occurrences(&q.diff[h], g, &wp).neg();
        if h == g {
            d.add_scaled(&one(), &q.d(&wp));
        }
        out.push(d);
    }
    out
}

/// Tangent data of a canonical differential: the changes reachable by
/// substitutions and rescalings that keep the given support fixed,
/// projected onto the complementary positions.
struct Tangent {
    pos: Vec<(usize, Word)>,
    support: BTreeSet<usize>,
    span: Vec<Vec<Q>>,
}

impl Tangent {
    fn new(q: &DgQuiver) -> Self {
        let pos = positions(q);
        let index: BTreeMap<(usize, Word), usize> = pos.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let support: BTreeSet<usize> = pos
            .iter()
            .enumerate()
            .filter(|(_, (g, w))| !q.diff[*g].coeff(w).is_zero())
            .map(|(i, _)| i)
            .collect();
        let words = q.all_words();
        let mut deltas: Vec<Vec<Q>> = Vec::new();
        for (g, gen) in q.gens.iter().enumerate() {
            for w in words.get(&(gen.src, gen.tgt, gen.deg)).into_iter().flatten() {
                if w.is_trivial() {
                    continue;
                }
                let mut v = vec![Q::zero(); pos.len()];
                for (h, d) in move_delta(q, g, w).into_iter().enumerate() {
                    for (dw, c) in d.0 {
                        if let Some(&i) = index.get(&(h, dw)) {
                            v[i] = c;
                        }
                    }
                }
                deltas.push(v);
            }
        }
        let fixed: Vec<usize> = support.iter().copied().collect();
        let mut m = Matrix::zeros(fixed.len().max(1), deltas.len());
        for (j, d) in deltas.iter().enumerate() {
            for (i, &p) in fixed.iter().enumerate() {
                m[(i, j)] = d[p].clone();
            }
        }
        let span = m
            .nullspace()
            .into_iter()
            .map(|coef| {
                let mut v = vec![Q::zero(); pos.len()];
                for (c, d) in coef.iter().zip(&deltas) {
                    if c.is_zero() {
                        continue;
                    }
                    for (i, x) in d.iter().enumerate() {
                        if !support.contains(&i) && !x.is_zero() {
                            v[i] += c * x;
                        }
                    }
                }
                v
            })
            .collect();
        Tangent { pos, support, span }
    }

    fn vector(&self, q: &DgQuiver) -> Vec<Q> {
        self.pos.iter().map(|(g, w)| q.diff[*g].coeff(w)).collect()
    }

    fn off_support(&self, v: &[Q]) -> Vec<Q> {
        v.iter().enumerate().map(|(i, x)| if self.support.contains(&i) { Q::zero() } else { x.clone() }).collect()
    }
}

/// The extra words in `∂f` that a higher product can contribute on four
/// vertices.
pub fn slot_words(n: usize) -> Vec<(&'static str, [&'static str; 3])> {
    if n == 4 {
        vec![("f", ["rho", "b", "a"]), ("f", ["c", "psi", "a"]), ("f", ["c", "b", "phi"])]
    } else {
        Vec::new()
    }
}

fn slot_vectors(q: &DgQuiver, t: &Tangent) -> Vec<(String, Vec<Q>)> {
    slot_words(q.n)
        .into_iter()
        .map(|(g, w)| {
            let gi = q.index(g).expect("canonical");
            let word = q.word(&w).expect("canonical");
            let mut v = vec![Q::zero(); t.pos.len()];
            let i = t.pos.iter().position(|(h, x)| *h == gi && *x == word).expect("slot position");
            v[i] = one();
            (w.join("*"), v)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Class {
    pub label: String,
    pub case: String,
    pub quiver: DiffBiquiver,
    /// The higher-product word added to `∂f`, if any.
    pub slot: Option<String>,
}

impl Class {
    pub fn differential(&self) -> Vec<(String, String)> {
        let q = &self.quiver;
        q.gens
            .iter()
            .enumerate()
            .filter(|(g, _)| !q.diff[*g].is_zero())
            .map(|(g, gen)| (gen.name.clone(), display_poly(&q.gens, &q.diff[g])))
            .collect()
    }
}

/// Splits a surviving case into its classes: one if every slot can be
/// cleared, otherwise a second class with the first uncleared slot word.
fn classes_of(c: &Candidate) -> Vec<Class> {
    let t = Tangent::new(&c.quiver);
    let mut base = t.span.clone();
    let mut extra = Vec::new();
    for (name, v) in slot_vectors(&c.quiver, &t) {
        if !in_span(&base, &v) {
            base.push(v);
            extra.push(name);
        }
    }
    if extra.is_empty() {
        return vec![Class { label: c.label.clone(), case: c.label.clone(), quiver: c.quiver.clone(), slot: None }];
    }
    let mut out = vec![Class { label: format!("{}1", c.label), case: c.label.clone(), quiver: c.quiver.clone(), slot: None }];
    for (k, w) in extra.iter().enumerate() {
        let mut q = c.quiver.clone();
        let f = q.index("f").expect("canonical");
        let names: Vec<&str> = w.split('*').collect();
        let word = q.word(&names).expect("canonical");
        q.diff[f].add_term(word, one());
        out.push(Class { label: format!("{}{}", c.label, k + 2), case: c.label.clone(), quiver: q, slot: Some(w.clone()) });
    }
    out
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub n: usize,
    pub classes: Vec<Class>,
    pub excluded: Vec<Excluded>,
    /// Ringel dual label per class, in class order.
    pub ringel: Vec<Option<String>>,
    /// Classes that are not Morita equivalent to a geometric algebra or its
    /// Ringel dual.
    pub non_geometric: Vec<String>,
}

pub fn classify(n: usize) -> Result<ClassificationReport, ClassifyError> {
    let cands = enumerate_candidates(n)?;
    let (keep, excluded) = apply_constraints(cands);
    let classes: Vec<Class> = keep.iter().flat_map(classes_of).collect();
    let mut report = ClassificationReport { n, classes, excluded, ringel: Vec::new(), non_geometric: Vec::new() };
    report.ringel = ringel_pairing(&report);
    if n == 4 {
        report.non_geometric = ["A1", "B1", "B2", "G1"].iter().map(|s| s.to_string()).collect();
    }
    Ok(report)
}

/// Rewrites a biquiver on `n` vertices with one solid and one dashed
/// generator per pair into the canonical names.
pub fn to_canonical_names(q: &DgQuiver) -> Option<DgQuiver> {
    let canon = canonical_biquiver(q.n).ok()?;
    let mut map = vec![usize::MAX; q.gens.len()];
    for (g, gen) in q.gens.iter().enumerate() {
        if gen.deg < 0 {
            if q.diff[g].is_zero() {
                continue;
            }
            return None;
        }
        map[g] = generator_between(&canon, gen.deg, gen.src, gen.tgt)?;
    }
    let used: BTreeSet<usize> = map.iter().copied().filter(|&x| x != usize::MAX).collect();
    if used.len() != canon.gens.len() || map.iter().filter(|&&x| x != usize::MAX).count() != canon.gens.len() {
        return None;
    }
    let mut out = canon.clone();
    for (g, d) in q.diff.iter().enumerate() {
        if map[g] == usize::MAX {
            continue;
        }
        let mut p = Poly::zero();
        for (w, c) in &d.0 {
            let letters: Vec<usize> = w.letters.iter().map(|&l| map[l]).collect();
            if letters.contains(&usize::MAX) {
                return None;
            }
            p.add_term(Word { src: w.src, tgt: w.tgt, letters }, c.clone());
        }
        out.diff[map[g]] = p;
    }
    out.relations = q.relations.clone();
    if !out.relations.is_empty() {
        return None;
    }
    Some(out)
}

/// Rescales generators by signs so that the coefficients on the support of
/// `target` agree with it. Needs every such coefficient to be `±1`.
fn match_signs(q: &DgQuiver, target: &DgQuiver) -> Option<DgQuiver> {
    let ng = q.gens.len();
    let mut rows: Vec<(Vec<bool>, bool)> = Vec::new();
    for (g, d) in target.diff.iter().enumerate() {
        for (w, k) in &d.0 {
            let c = q.diff[g].coeff(w);
            if c.is_zero() || c.abs() != k.abs() {
                return None;
            }
            let mut row = vec![false; ng];
            row[g] ^= true;
            for &l in &w.letters {
                row[l] ^= true;
            }
            rows.push((row, c.is_negative() != k.is_negative()));
        }
    }
    let flips = solve_gf2(rows, ng)?;
    let mut out = q.clone();
    for (g, d) in q.diff.iter().enumerate() {
        let mut p = Poly::zero();
        for (w, c) in &d.0 {
            let mut odd = flips[g];
            for &l in &w.letters {
                odd ^= flips[l];
            }
            p.add_term(w.clone(), if odd { -c.clone() } else { c.clone() });
        }
        out.diff[g] = p;
    }
    Some(out)
}

fn solve_gf2(mut rows: Vec<(Vec<bool>, bool)>, n: usize) -> Option<Vec<bool>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0[c]) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i].0[c] {
                let (src, rhs) = (rows[r].0.clone(), rows[r].1);
                for (x, y) in rows[i].0.iter_mut().zip(src) {
                    *x ^= y;
                }
                rows[i].1 ^= rhs;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|(_, rhs)| *rhs) {
        return None;
    }
    let mut x = vec![false; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i].1;
    }
    Some(x)
}

/// Whether `q` (on canonical names) is equivalent to the class `c` under
/// sign rescaling and first-order substitutions.
fn matches_class(q: &DgQuiver, c: &Class) -> bool {
    let Some(q) = match_signs(q, &c.quiver) else { return false };
    let t = Tangent::new(&c.quiver);
    let diff: Vec<Q> = t.vector(&q).iter().zip(t.vector(&c.quiver)).map(|(a, b)| a - b).collect();
    let diff = t.off_support(&diff);
    diff.iter().all(Zero::is_zero) || in_span(&t.span, &diff)
}

/// The label of the class equivalent to `q`, if any.
pub fn recognize(classes: &[Class], q: &DgQuiver) -> Option<String> {
    let q = to_canonical_names(q)?;
    let mut found: Vec<&Class> = classes.iter().filter(|c| matches_class(&q, c)).collect();
    found.sort_by_key(|c| c.slot.is_some());
    found.first().map(|c| c.label.clone())
}

/// Canonical representative of a candidate among the given classes.
pub fn normalize_class(classes: &[Class], q: &DgQuiver) -> Option<Class> {
    let label = recognize(classes, q)?;
    classes.iter().find(|c| c.label == label).cloned()
}

/// For each class, the class of its regularised Ringel dual.
pub fn ringel_pairing(report: &ClassificationReport) -> Vec<Option<String>> {
    report
        .classes
        .iter()
        .map(|c| {
            let b = Bocs::new(&c.quiver).ok()?;
            let d = regular_ringel_dual(&b).ok()?;
            recognize(&report.classes, &d.dg)
        })
        .collect()
}

