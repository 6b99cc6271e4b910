//! The bocs of a differential biquiver: bases of `A`, `V̄`, `V̄⊗_A V̄`,
//! the structure maps, and the comultiplication on `V = Aω ⊕ V̄`.

use crate::dg::{cmp_words, d_squared_residues, display_terms, DgQuiver, DiffBiquiver, Gen, PathEngine, Poly, Word};
use crate::linalg::Matrix;
use crate::scalar::{one, Q};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub generator: String,
    pub residue: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, generator: impl Into<String>, residue: impl Into<String>) {
        self.violations.push(Violation { generator: generator.into(), residue: residue.into() });
    }
}

/// Formats a word, separating tensor factors by `@`.
pub fn tensor_name(gens: &[Gen], w: &Word) -> String {
    if w.letters.is_empty() {
        return format!("e{}", w.src);
    }
    let mut s = String::new();
    for (i, &l) in w.letters.iter().enumerate() {
        if i > 0 {
            let prev = w.letters[i - 1];
            let more = w.letters[i..].iter().any(|&x| gens[x].deg != 0);
            s.push_str(if gens[prev].deg != 0 && more { " @ " } else { "*" });
        }
        s.push_str(&gens[l].name);
    }
    s
}

pub fn display_poly(gens: &[Gen], p: &Poly) -> String {
    display_terms(&p.sorted_terms(gens), |w| tensor_name(gens, w))
}

/// Checks `∂²=0` on generators, `∂(relations) ⊆ I` and the degree and
/// directedness constraints of a biquiver.
pub fn validate(q: &DiffBiquiver) -> ValidationReport {
    let mut report = ValidationReport::default();
    if let Err(e) = q.check_structure() {
        report.push("structure", e.to_string());
        return report;
    }
    for g in &q.gens {
        if g.deg != 0 && g.deg != 1 {
            report.push(g.name.clone(), "degree must be 0 or 1");
        }
    }
    for r in &q.relations {
        if r.0.keys().any(|w| w.deg(&q.gens) != 0) {
            report.push("relation", format!("{} involves dashed arrows", r.display(&q.gens)));
        }
    }
    if !report.passed() {
        return report;
    }
    for (name, res) in d_squared_residues(q) {
        report.push(name, display_poly(&q.gens, &res));
    }
    report
}

#[derive(Clone, Debug)]
pub enum BocsError {
    Invalid(ValidationReport),
}

impl core::fmt::Display for BocsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BocsError::Invalid(r) => {
                write!(f, "invalid biquiver:")?;
                for v in &r.violations {
                    write!(f, " [{}: {}]", v.generator, v.residue)?;
                }
                Ok(())
            }
        }
    }
}

/// Coordinates of a polynomial in a basis given by an index map.
pub fn coords(index: &BTreeMap<Word, usize>, p: &Poly) -> Vec<Q> {
    let mut v = alloc::vec![Q::default(); index.len()];
    for (w, c) in &p.0 {
        let i = *index.get(w).expect("word outside the basis");
        v[i] = c.clone();
    }
    v
}

fn index_of(basis: &[Word]) -> BTreeMap<Word, usize> {
    basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect()
}

/// A linear map `left ⊗_L right → target` given by word multiplication.
#[derive(Clone, Debug)]
pub struct ProductMap {
    pub pairs: Vec<(usize, usize)>,
    pub matrix: Matrix,
}

#[derive(Clone, Debug)]
pub struct Bocs {
    pub quiver: DiffBiquiver,
    pub engine: PathEngine,
    pub a_basis: Vec<Word>,
    pub vbar_basis: Vec<Word>,
    pub vbar2_basis: Vec<Word>,
    /// Comultiplication of each dashed generator, by generator index,
    /// written with the extended letters of [`Bocs::ext_gens`].
    pub mu_dashed: BTreeMap<usize, Poly>,
    ext: Vec<Gen>,
    a_index: BTreeMap<Word, usize>,
    vbar_index: BTreeMap<Word, usize>,
    vbar2_index: BTreeMap<Word, usize>,
}

impl Bocs {
    /// Builds the bocs of a validated biquiver.
    pub fn new(q: &DiffBiquiver) -> Result<Bocs, BocsError> {
        let report = validate(q);
        if !report.passed() {
            return Err(BocsError::Invalid(report));
        }
        Ok(Self::build(q))
    }

    fn build(q: &DiffBiquiver) -> Bocs {
        let engine = PathEngine::new(q);
        let a_basis = engine.basis_deg(0);
        let mut vbar_basis = engine.basis_deg(1);
        vbar_basis.sort_by(|x, y| vbar_order(&q.gens, x, y));
        let vbar2_basis = engine.basis_deg(2);
        let mut ext = q.gens.clone();
        for i in 1..=q.n {
            ext.push(Gen::new(&format!("w{i}"), i, i, 1));
        }
        let mut b = Bocs {
            quiver: q.clone(),
            a_index: index_of(&a_basis),
            vbar_index: index_of(&vbar_basis),
            vbar2_index: index_of(&vbar2_basis),
            engine,
            a_basis,
            vbar_basis,
            vbar2_basis,
            mu_dashed: BTreeMap::new(),
            ext,
        };
        for (g, gen) in q.gens.iter().enumerate() {
            if gen.deg == 1 {
                let v = Poly::word(Word::gen(&q.gens, g));
                let mut m = b.omega_poly(gen.tgt).mul(&v);
                m.add_scaled(&one(), &v.mul(&b.omega_poly(gen.src)));
                m.add_scaled(&one(), &q.diff[g]);
                b.mu_dashed.insert(g, m);
            }
        }
        b
    }

    pub fn n(&self) -> usize {
        self.quiver.n
    }

    pub fn gens(&self) -> &[Gen] {
        &self.quiver.gens
    }

    /// Generators extended by the grouplike components `w1..wn`.
    pub fn ext_gens(&self) -> &[Gen] {
        &self.ext
    }

    pub fn omega_letter(&self, i: usize) -> usize {
        self.quiver.gens.len() + i - 1
    }

    pub fn omega_poly(&self, i: usize) -> Poly {
        Poly::word(Word { src: i, tgt: i, letters: alloc::vec![self.omega_letter(i)] })
    }

    pub fn is_omega(&self, l: usize) -> bool {
        l >= self.quiver.gens.len()
    }

    pub fn a_index(&self) -> &BTreeMap<Word, usize> {
        &self.a_index
    }

    pub fn vbar_index(&self) -> &BTreeMap<Word, usize> {
        &self.vbar_index
    }

    pub fn vbar2_index(&self) -> &BTreeMap<Word, usize> {
        &self.vbar2_index
    }

    /// Nontrivial paths of the basis of `A`.
    pub fn rad_basis(&self) -> Vec<Word> {
        self.a_basis.iter().filter(|w| !w.is_trivial()).cloned().collect()
    }

    /// Normal words of degree `j` starting at vertex `i`.
    pub fn tensor_basis_from(&self, j: i32, i: usize) -> Vec<Word> {
        self.engine.basis_deg(j).into_iter().filter(|w| w.src == i).collect()
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.engine.mul(a, b)
    }

    pub fn word_poly(&self, w: &Word) -> Poly {
        Poly::word(w.clone())
    }

    /// The differential, extended by Leibniz and reduced.
    pub fn d(&self, p: &Poly) -> Poly {
        self.engine.normal(&self.quiver.d(p))
    }

    pub fn d0_matrix(&self) -> Matrix {
        self.linear_matrix(&self.a_basis, &self.vbar_index)
    }

    pub fn d1_matrix(&self) -> Matrix {
        self.linear_matrix(&self.vbar_basis, &self.vbar2_index)
    }

    fn linear_matrix(&self, domain: &[Word], target: &BTreeMap<Word, usize>) -> Matrix {
        let mut m = Matrix::zeros(target.len(), domain.len());
        for (j, w) in domain.iter().enumerate() {
            let v = coords(target, &self.d(&Poly::word(w.clone())));
            for (i, c) in v.into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        m
    }

    pub fn product_map(&self, left: &[Word], right: &[Word], target: &[Word]) -> ProductMap {
        let index = index_of(target);
        let mut pairs = Vec::new();
        for (i, x) in left.iter().enumerate() {
            for (j, y) in right.iter().enumerate() {
                if x.src == y.tgt {
                    pairs.push((i, j));
                }
            }
        }
        let mut matrix = Matrix::zeros(target.len(), pairs.len());
        for (col, &(i, j)) in pairs.iter().enumerate() {
            let p = self.mul(&Poly::word(left[i].clone()), &Poly::word(right[j].clone()));
            for (r, c) in coords(&index, &p).into_iter().enumerate() {
                matrix[(r, col)] = c;
            }
        }
        ProductMap { pairs, matrix }
    }

    pub fn m_a(&self) -> ProductMap {
        self.product_map(&self.a_basis, &self.a_basis, &self.a_basis)
    }

    pub fn m_l(&self) -> ProductMap {
        self.product_map(&self.a_basis, &self.vbar_basis, &self.vbar_basis)
    }

    pub fn m_r(&self) -> ProductMap {
        self.product_map(&self.vbar_basis, &self.a_basis, &self.vbar_basis)
    }

    pub fn m_vbar(&self) -> ProductMap {
        self.product_map(&self.vbar_basis, &self.vbar_basis, &self.vbar2_basis)
    }

    pub fn m_big_l(&self) -> ProductMap {
        self.product_map(&self.a_basis, &self.vbar2_basis, &self.vbar2_basis)
    }

    pub fn m_big_r(&self) -> ProductMap {
        self.product_map(&self.vbar2_basis, &self.a_basis, &self.vbar2_basis)
    }

    /// `dim e_l A e_i` indexed `[l-1][i-1]`.
    pub fn a_dims(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut m = alloc::vec![alloc::vec![0; n]; n];
        for w in &self.a_basis {
            m[w.tgt - 1][w.src - 1] += 1;
        }
        m
    }

    /// Basis of `V = Aω ⊕ V̄`: the words `x·ω_i` followed by `V̄`.
    pub fn v_basis(&self) -> Vec<Word> {
        let mut out: Vec<Word> = self
            .a_basis
            .iter()
            .map(|x| {
                let mut letters = x.letters.clone();
                letters.push(self.omega_letter(x.src));
                Word { src: x.src, tgt: x.tgt, letters }
            })
            .collect();
        out.extend(self.vbar_basis.iter().cloned());
        out
    }

    /// Normal form of a combination of words in the solid, dashed and
    /// grouplike letters: every `ω a` is rewritten to `a ω - ∂₀(a)` and
    /// solid blocks are reduced modulo the relations.
    pub fn vnormal(&self, p: &Poly) -> Poly {
        let g = &self.quiver.gens;
        let mut todo = p.clone();
        let mut done = Poly::zero();
        while let Some((w, c)) = todo.0.pop_first() {
            let pos = w
                .letters
                .windows(2)
                .position(|x| self.is_omega(x[0]) && !self.is_omega(x[1]) && g[x[1]].deg == 0);
            match pos {
                Some(i) => {
                    let a = w.letters[i + 1];
                    let mut moved = w.letters[..i].to_vec();
                    moved.push(a);
                    moved.push(self.omega_letter(g[a].src));
                    moved.extend_from_slice(&w.letters[i + 2..]);
                    todo.add_term(Word { src: w.src, tgt: w.tgt, letters: moved }, c.clone());
                    for (dw, dc) in &self.quiver.diff[a].0 {
                        let mut letters = w.letters[..i].to_vec();
                        letters.extend_from_slice(&dw.letters);
                        letters.extend_from_slice(&w.letters[i + 2..]);
                        todo.add_term(Word { src: w.src, tgt: w.tgt, letters }, -(&c * dc));
                    }
                }
                None => done.add_scaled(&c, &self.reduce_blocks(&w)),
            }
        }
        done
    }

    fn reduce_blocks(&self, w: &Word) -> Poly {
        if !w.letters.iter().any(|&l| self.is_omega(l)) {
            return self.engine.normal(&Poly::word(w.clone()));
        }
        let mut acc = Poly::word(Word::trivial(w.tgt));
        let mut i = 0;
        while i < w.letters.len() {
            let l = w.letters[i];
            if self.is_omega(l) {
                let v = l - self.quiver.gens.len() + 1;
                acc = acc.mul(&Poly::word(Word { src: v, tgt: v, letters: alloc::vec![l] }));
                i += 1;
                continue;
            }
            let mut j = i;
            while j < w.letters.len() && !self.is_omega(w.letters[j]) {
                j += 1;
            }
            let block = Word::from_letters(&self.quiver.gens, w.letters[i..j].to_vec()).expect("composable block");
            acc = acc.mul(&self.engine.normal(&Poly::word(block)));
            i = j;
        }
        acc
    }

    fn replace_letter(&self, w: &Word, pos: usize, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (vw, vc) in &value.0 {
            let mut letters = w.letters[..pos].to_vec();
            letters.extend_from_slice(&vw.letters);
            letters.extend_from_slice(&w.letters[pos + 1..]);
            out.add_term(Word { src: w.src, tgt: w.tgt, letters }, vc.clone());
        }
        out
    }

    fn letter_mu(&self, l: usize) -> Poly {
        if self.is_omega(l) {
            let v = l - self.quiver.gens.len() + 1;
            Poly::word(Word { src: v, tgt: v, letters: alloc::vec![l, l] })
        } else {
            self.mu_dashed.get(&l).cloned().unwrap_or_default()
        }
    }

    fn letter_eps(&self, l: usize) -> Poly {
        if self.is_omega(l) {
            let v = l - self.quiver.gens.len() + 1;
            Poly::word(Word::trivial(v))
        } else {
            Poly::zero()
        }
    }

    fn tensor_positions(&self, w: &Word) -> Vec<usize> {
        w.letters
            .iter()
            .enumerate()
            .filter(|(_, &l)| self.is_omega(l) || self.quiver.gens[l].deg != 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Applies `f` to the `k`-th tensor factor of every word.
    fn on_factor(&self, p: &Poly, k: usize, f: &dyn Fn(usize) -> Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in &p.0 {
            let pos = self.tensor_positions(w);
            out.add_scaled(c, &self.replace_letter(w, pos[k], &f(w.letters[pos[k]])));
        }
        self.vnormal(&out)
    }

    pub fn mu(&self, p: &Poly) -> Poly {
        self.on_factor(p, 0, &|l| self.letter_mu(l))
    }

    pub fn epsilon(&self, p: &Poly) -> Poly {
        self.on_factor(p, 0, &|l| self.letter_eps(l))
    }

    pub fn v_display(&self, p: &Poly) -> String {
        display_poly(&self.ext, p)
    }

    /// Counit, coassociativity, grouplike and consistency checks.
    pub fn check_coalgebra(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mu = |l: usize| self.letter_mu(l);
        let eps = |l: usize| self.letter_eps(l);
        for x in self.v_basis() {
            let xp = Poly::word(x.clone());
            let label = tensor_name(&self.ext, &x);
            let m = self.mu(&xp);
            let left = self.on_factor(&m, 0, &eps);
            let right = self.on_factor(&m, 1, &eps);
            if left != xp || right != xp {
                report.push(label.clone(), "counit axiom fails");
            }
            let c1 = self.on_factor(&m, 0, &mu);
            let c2 = self.on_factor(&m, 1, &mu);
            if c1 != c2 {
                report.push(label.clone(), format!("coassociativity residue {}", self.v_display(&c1.sub(&c2))));
            }
        }
        for i in 1..=self.n() {
            let w = self.omega_poly(i);
            if self.mu(&w) != w.mul(&w) || self.epsilon(&w) != Poly::word(Word::trivial(i)) {
                report.push(format!("w{i}"), "not grouplike");
            }
        }
        for (g, gen) in self.quiver.gens.iter().enumerate() {
            if gen.deg == 1 {
                let v = Poly::word(Word::gen(&self.quiver.gens, g));
                let mut expect = self.omega_poly(gen.tgt).mul(&v);
                expect.add_scaled(&one(), &v.mul(&self.omega_poly(gen.src)));
                expect.add_scaled(&one(), &self.quiver.diff[g]);
                let got = self.mu(&v);
                if got != self.vnormal(&expect) {
                    report.push(gen.name.clone(), format!("comultiplication differs from w@v + v@w + d(v) by {}", self.v_display(&got.sub(&expect))));
                }
            } else {
                let a = Poly::word(Word::gen(&self.quiver.gens, g));
                let wa = self.omega_poly(gen.tgt).mul(&a);
                let lhs = self.mu(&self.vnormal(&wa));
                let rhs = self.vnormal(&self.omega_poly(gen.tgt).mul(&self.omega_poly(gen.tgt)).mul(&a));
                if lhs != rhs {
                    report.push(gen.name.clone(), format!("comultiplication is not a bimodule map: {}", self.v_display(&lhs.sub(&rhs))));
                }
            }
        }
        report
    }

    pub fn opposite(&self) -> Bocs {
        Bocs::build(&self.quiver.opposite())
    }

    pub fn display(&self, p: &Poly) -> String {
        display_poly(&self.quiver.gens, p)
    }
}

/// Order on `V̄` words `p·v·q`: dashed name, then `p`, then `q`.
pub fn vbar_order(gens: &[Gen], x: &Word, y: &Word) -> Ordering {
    let split = |w: &Word| {
        let i = w.letters.iter().position(|&l| gens[l].deg == 1).unwrap_or(0);
        let v = w.letters[i];
        let p = Word { src: gens[v].tgt, tgt: w.tgt, letters: w.letters[..i].to_vec() };
        let q = Word { src: w.src, tgt: gens[v].src, letters: w.letters[i + 1..].to_vec() };
        (v, p, q)
    };
    let (v1, p1, q1) = split(x);
    let (v2, p2, q2) = split(y);
    gens[v1]
        .name
        .cmp(&gens[v2].name)
        .then_with(|| cmp_words(gens, &p1, &p2))
        .then_with(|| cmp_words(gens, &q1, &q2))
}

/// Bocs data with an arbitrary comultiplication on dashed generators, for
/// diagnosing hand-built structures.
pub fn with_mu_override(b: &Bocs, name: &str, mu: Poly) -> Bocs {
    let mut out = b.clone();
    let g = b.quiver.index(name).expect("unknown generator");
    out.mu_dashed.insert(g, mu);
    out
}

/// Convenience constructor for fixed data.
pub fn biquiver(n: usize, solid: &[(&str, usize, usize)], dashed: &[(&str, usize, usize)]) -> DgQuiver {
    let mut q = DgQuiver::new(n);
    for (name, s, t) in solid {
        q.add_gen(name, *s, *t, 0);
    }
    for (name, s, t) in dashed {
        q.add_gen(name, *s, *t, 1);
    }
    q
}
