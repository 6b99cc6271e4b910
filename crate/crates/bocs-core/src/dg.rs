//! Graded quivers with a differential, words in function order and
//! normal forms modulo homogeneous relations.

use crate::linalg::Matrix;
use crate::scalar::{one, Q};
use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gen {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    pub deg: i32,
    /// Ordering key used when several generators compete (for example
    /// during regularisation). Defaults to the name.
    pub key: Vec<String>,
}

impl Gen {
    pub fn new(name: &str, src: usize, tgt: usize, deg: i32) -> Self {
        Gen { name: name.to_string(), src, tgt, deg, key: vec![name.to_string()] }
    }
}

/// A path written in function order: `letters[0]` is applied last.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub src: usize,
    pub tgt: usize,
    pub letters: Vec<usize>,
}

impl Word {
    pub fn trivial(v: usize) -> Self {
        Word { src: v, tgt: v, letters: Vec::new() }
    }

    pub fn gen(gens: &[Gen], g: usize) -> Self {
        Word { src: gens[g].src, tgt: gens[g].tgt, letters: vec![g] }
    }

    pub fn from_letters(gens: &[Gen], letters: Vec<usize>) -> Option<Self> {
        let first = *letters.first()?;
        let last = *letters.last()?;
        for w in letters.windows(2) {
            if gens[w[0]].src != gens[w[1]].tgt {
                return None;
            }
        }
        Some(Word { src: gens[last].src, tgt: gens[first].tgt, letters })
    }

    pub fn is_trivial(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self · right`, that is `right` first.
    pub fn compose(&self, right: &Word) -> Option<Word> {
        if self.src != right.tgt {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&right.letters);
        Some(Word { src: right.src, tgt: self.tgt, letters })
    }

    pub fn deg(&self, gens: &[Gen]) -> i32 {
        self.letters.iter().map(|&g| gens[g].deg).sum()
    }

    pub fn name(&self, gens: &[Gen]) -> String {
        if self.letters.is_empty() {
            let mut s = String::from("e");
            s.push_str(&self.src.to_string());
            return s;
        }
        let parts: Vec<&str> = self.letters.iter().map(|&g| gens[g].name.as_str()).collect();
        parts.join("*")
    }
}

/// Standard ordering of words: length, then the name sequence, then vertex.
pub fn cmp_words(gens: &[Gen], a: &Word, b: &Word) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| {
            for (x, y) in a.letters.iter().zip(&b.letters) {
                let c = gens[*x].name.cmp(&gens[*y].name);
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
        .then_with(|| (a.src, a.tgt).cmp(&(b.src, b.tgt)))
}

/// A finite linear combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly(pub BTreeMap<Word, Q>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, one())
    }

    pub fn term(w: Word, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Q, other: &Poly) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.0 {
            self.add_term(w.clone(), c * v);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_scaled(&one(), other);
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_scaled(&-one(), other);
        p
    }

    pub fn scale(&self, c: &Q) -> Poly {
        let mut p = Poly::zero();
        p.add_scaled(c, self);
        p
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-one())
    }

    /// `self · right` with non-composable products discarded.
    pub fn mul(&self, right: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (a, x) in &self.0 {
            for (b, y) in &right.0 {
                if let Some(w) = a.compose(b) {
                    p.add_term(w, x * y);
                }
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.0.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mentions(&self, g: usize) -> bool {
        self.0.keys().any(|w| w.letters.contains(&g))
    }

    /// Terms sorted by the standard word order.
    pub fn sorted_terms<'a>(&'a self, gens: &[Gen]) -> Vec<(&'a Word, &'a Q)> {
        let mut t: Vec<_> = self.0.iter().collect();
        t.sort_by(|a, b| cmp_words(gens, a.0, b.0));
        t
    }

    pub fn display(&self, gens: &[Gen]) -> String {
        display_terms(&self.sorted_terms(gens), |w| w.name(gens))
    }
}

/// Renders `c1 w1 + c2 w2 - ...`, with `0` for the empty sum.
pub fn display_terms<F: Fn(&Word) -> String>(terms: &[(&Word, &Q)], name: F) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (w, c)) in terms.iter().enumerate() {
        let neg = crate::scalar::is_neg(c);
        let abs = if neg { -(*c).clone() } else { (*c).clone() };
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            s.push_str(&crate::scalar::fmt_q(&abs));
            s.push(' ');
        }
        s.push_str(&name(w));
    }
    s
}

/// A quiver with graded generators, a differential on generators and
/// homogeneous relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgQuiver {
    pub n: usize,
    pub gens: Vec<Gen>,
    pub diff: Vec<Poly>,
    pub relations: Vec<Poly>,
}

/// A differential biquiver is a dg quiver whose generators have degree 0
/// (solid) or 1 (dashed).
pub type DiffBiquiver = DgQuiver;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureError {
    BadVertex(String),
    NotDirected(String),
    DuplicateName(String),
    BadDegree(String),
    BadDifferential(String),
    BadRelation(String),
}

impl core::fmt::Display for StructureError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            StructureError::BadVertex(s) => write!(f, "vertex out of range for {s}"),
            StructureError::NotDirected(s) => write!(f, "arrow {s} does not go from a smaller to a larger vertex"),
            StructureError::DuplicateName(s) => write!(f, "duplicate generator name {s}"),
            StructureError::BadDegree(s) => write!(f, "unsupported degree for {s}"),
            StructureError::BadDifferential(s) => write!(f, "differential of {s} has mismatched endpoints or degree"),
            StructureError::BadRelation(s) => write!(f, "relation {s} is not homogeneous or contains a trivial path"),
        }
    }
}

impl DgQuiver {
    pub fn new(n: usize) -> Self {
        DgQuiver { n, gens: Vec::new(), diff: Vec::new(), relations: Vec::new() }
    }

    pub fn add_gen(&mut self, name: &str, src: usize, tgt: usize, deg: i32) -> usize {
        self.gens.push(Gen::new(name, src, tgt, deg));
        self.diff.push(Poly::zero());
        self.gens.len() - 1
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn gen_word(&self, g: usize) -> Word {
        Word::gen(&self.gens, g)
    }

    /// Parses a word given as generator names in function order.
    pub fn word(&self, names: &[&str]) -> Option<Word> {
        let letters = names.iter().map(|n| self.index(n)).collect::<Option<Vec<_>>>()?;
        Word::from_letters(&self.gens, letters)
    }

    /// Convenience: `"psi*a + b*phi"` style sums with optional integer
    /// coefficients, for tests and fixed data.
    pub fn poly(&self, text: &str) -> Option<Poly> {
        let mut p = Poly::zero();
        let text = text.replace('-', "+-");
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                continue;
            }
            let (sign, rest) = match term.strip_prefix('-') {
                Some(r) => (-one(), r.trim()),
                None => (one(), term),
            };
            let mut parts = rest.splitn(2, ' ');
            let first = parts.next()?;
            let (c, body) = match crate::scalar::parse_q(first) {
                Some(c) if parts.clone().next().is_some() => (c, parts.next()?.trim()),
                _ => (one(), rest),
            };
            let names: Vec<&str> = body.split(['*', '@']).map(str::trim).collect();
            p.add_term(self.word(&names)?, sign * c);
        }
        Some(p)
    }

    pub fn set_diff(&mut self, name: &str, text: &str) {
        let g = self.index(name).expect("unknown generator");
        self.diff[g] = self.poly(text).expect("bad differential");
    }

    pub fn count(&self, deg: i32) -> usize {
        self.gens.iter().filter(|g| g.deg == deg).count()
    }

    /// Generator counts per vertex pair, indexed `[src-1][tgt-1]`.
    pub fn count_matrix(&self, deg: i32) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.n]; self.n];
        for g in self.gens.iter().filter(|g| g.deg == deg) {
            m[g.src - 1][g.tgt - 1] += 1;
        }
        m
    }

    pub fn check_structure(&self) -> Result<(), StructureError> {
        let mut seen = BTreeSet::new();
        for g in &self.gens {
            if g.src == 0 || g.tgt == 0 || g.src > self.n || g.tgt > self.n {
                return Err(StructureError::BadVertex(g.name.clone()));
            }
            if g.src >= g.tgt {
                return Err(StructureError::NotDirected(g.name.clone()));
            }
            if !seen.insert(g.name.clone()) {
                return Err(StructureError::DuplicateName(g.name.clone()));
            }
        }
        for (g, d) in self.gens.iter().zip(&self.diff) {
            for w in d.0.keys() {
                if w.src != g.src || w.tgt != g.tgt || w.deg(&self.gens) != g.deg + 1 {
                    return Err(StructureError::BadDifferential(g.name.clone()));
                }
            }
        }
        for r in &self.relations {
            let mut key = None;
            for w in r.0.keys() {
                let k = (w.src, w.tgt, w.deg(&self.gens));
                if w.is_trivial() || key.is_some_and(|x| x != k) {
                    return Err(StructureError::BadRelation(r.display(&self.gens)));
                }
                key = Some(k);
            }
        }
        Ok(())
    }

    pub fn is_biquiver(&self) -> bool {
        self.gens.iter().all(|g| g.deg == 0 || g.deg == 1)
    }

    /// Leibniz extension of the differential to a single word.
    pub fn d_word(&self, w: &Word) -> Poly {
        let mut out = Poly::zero();
        let mut sign_deg = 0;
        for (i, &g) in w.letters.iter().enumerate() {
            let sign = if sign_deg % 2 == 0 { one() } else { -one() };
            for (dw, c) in &self.diff[g].0 {
                let mut letters = w.letters[..i].to_vec();
                letters.extend_from_slice(&dw.letters);
                letters.extend_from_slice(&w.letters[i + 1..]);
                out.add_term(Word { src: w.src, tgt: w.tgt, letters }, &sign * c);
            }
            sign_deg += self.gens[g].deg;
        }
        out
    }

    pub fn d(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in &p.0 {
            out.add_scaled(c, &self.d_word(w));
        }
        out
    }

    /// Replaces every occurrence of generator `g` by `value` in all
    /// differentials and relations.
    pub fn substitute(&mut self, g: usize, value: &Poly) {
        let subst = |p: &Poly| -> Poly {
            if !p.mentions(g) {
                return p.clone();
            }
            let mut out = Poly::zero();
            for (w, c) in &p.0 {
                let mut acc = Poly::term(Word::trivial(w.tgt), c.clone());
                for &l in &w.letters {
                    let f = if l == g { value.clone() } else { Poly::word(Word::gen(&self.gens, l)) };
                    acc = acc.mul(&f);
                }
                out.add_scaled(&one(), &acc);
            }
            out
        };
        let diff: Vec<Poly> = self.diff.iter().map(subst).collect();
        let relations: Vec<Poly> = self.relations.iter().map(subst).filter(|p| !p.is_zero()).collect();
        self.diff = diff;
        self.relations = relations;
    }

    /// Drops generators that no longer occur anywhere, reindexing words.
    pub fn remove_gens(&mut self, remove: &BTreeSet<usize>) {
        let mut map = vec![usize::MAX; self.gens.len()];
        let mut next = 0;
        for (i, m) in map.iter_mut().enumerate() {
            if !remove.contains(&i) {
                *m = next;
                next += 1;
            }
        }
        let remap = |p: &Poly| -> Poly {
            let mut out = Poly::zero();
            for (w, c) in &p.0 {
                let letters: Vec<usize> = w.letters.iter().map(|&l| map[l]).collect();
                assert!(letters.iter().all(|&l| l != usize::MAX), "removed generator still in use");
                out.add_term(Word { src: w.src, tgt: w.tgt, letters }, c.clone());
            }
            out
        };
        let mut gens = Vec::new();
        let mut diff = Vec::new();
        for i in 0..self.gens.len() {
            if !remove.contains(&i) {
                gens.push(self.gens[i].clone());
                diff.push(remap(&self.diff[i]));
            }
        }
        self.relations = self.relations.iter().map(remap).collect();
        self.gens = gens;
        self.diff = diff;
    }

    /// Relabels `i ↦ n+1-i`, reverses every word and applies the Koszul
    /// sign of the reversal.
    pub fn opposite(&self) -> DgQuiver {
        let n = self.n;
        let gens: Vec<Gen> = self
            .gens
            .iter()
            .map(|g| Gen { name: g.name.clone(), src: n + 1 - g.tgt, tgt: n + 1 - g.src, deg: g.deg, key: g.key.clone() })
            .collect();
        let rev = |p: &Poly| -> Poly {
            let mut out = Poly::zero();
            for (w, c) in &p.0 {
                let degs: Vec<i32> = w.letters.iter().map(|&l| self.gens[l].deg).collect();
                let mut s = 0;
                for i in 0..degs.len() {
                    for j in i + 1..degs.len() {
                        s += degs[i] * degs[j];
                    }
                }
                let mut letters = w.letters.clone();
                letters.reverse();
                let c = if s % 2 == 0 { c.clone() } else { -c.clone() };
                out.add_term(Word { src: n + 1 - w.tgt, tgt: n + 1 - w.src, letters }, c);
            }
            out
        };
        DgQuiver {
            n,
            gens,
            diff: self.diff.iter().map(rev).collect(),
            relations: self.relations.iter().map(rev).collect(),
        }
    }

    /// Every word (including trivial ones) grouped by `(src, tgt, deg)`,
    /// each group sorted by the standard order.
    pub fn all_words(&self) -> BTreeMap<(usize, usize, i32), Vec<Word>> {
        let mut out: BTreeMap<(usize, usize, i32), Vec<Word>> = BTreeMap::new();
        let mut stack: Vec<Word> = (1..=self.n).map(Word::trivial).collect();
        while let Some(w) = stack.pop() {
            for (g, gen) in self.gens.iter().enumerate() {
                if gen.src == w.tgt {
                    let mut letters = vec![g];
                    letters.extend_from_slice(&w.letters);
                    stack.push(Word { src: w.src, tgt: gen.tgt, letters });
                }
            }
            out.entry((w.src, w.tgt, w.deg(&self.gens))).or_default().push(w);
        }
        for v in out.values_mut() {
            v.sort_by(|a, b| cmp_words(&self.gens, a, b));
        }
        out
    }

    pub fn display_gen(&self, g: usize) -> String {
        self.gens[g].name.clone()
    }
}

/// Normal forms modulo the two-sided ideal generated by the relations.
/// The normal words of each component form its basis; reduction rewrites
/// the largest words in terms of smaller ones.
#[derive(Clone, Debug)]
pub struct PathEngine {
    pub gens: Vec<Gen>,
    words: BTreeMap<(usize, usize, i32), Vec<Word>>,
    rules: BTreeMap<Word, Poly>,
}

impl PathEngine {
    pub fn new(q: &DgQuiver) -> Self {
        let words = q.all_words();
        let mut rules = BTreeMap::new();
        if !q.relations.is_empty() {
            let all: Vec<&Word> = words.values().flatten().collect();
            let mut spans: BTreeMap<(usize, usize, i32), Vec<Poly>> = BTreeMap::new();
            for r in &q.relations {
                let Some(w0) = r.0.keys().next() else { continue };
                let (rs, rt) = (w0.src, w0.tgt);
                for u in all.iter().filter(|u| u.src == rt) {
                    for w in all.iter().filter(|w| w.tgt == rs) {
                        let p = Poly::word((*u).clone()).mul(r).mul(&Poly::word((*w).clone()));
                        if let Some(k) = p.0.keys().next() {
                            spans.entry((k.src, k.tgt, k.deg(&q.gens))).or_default().push(p);
                        }
                    }
                }
            }
            for (key, polys) in spans {
                let comp = &words[&key];
                let cols: Vec<&Word> = comp.iter().rev().collect();
                let index: BTreeMap<&Word, usize> = cols.iter().enumerate().map(|(i, w)| (*w, i)).collect();
                let mut m = Matrix::zeros(polys.len(), cols.len());
                for (i, p) in polys.iter().enumerate() {
                    for (w, c) in &p.0 {
                        m[(i, index[w])] = c.clone();
                    }
                }
                let (r, pivots) = m.rref();
                for (row, &pc) in pivots.iter().enumerate() {
                    let mut rhs = Poly::zero();
                    for (j, w) in cols.iter().enumerate() {
                        if j != pc && !r[(row, j)].is_zero() {
                            rhs.add_term((*w).clone(), -r[(row, j)].clone());
                        }
                    }
                    rules.insert(cols[pc].clone(), rhs);
                }
            }
        }
        PathEngine { gens: q.gens.clone(), words, rules }
    }

    pub fn normal(&self, p: &Poly) -> Poly {
        if self.rules.is_empty() {
            return p.clone();
        }
        let mut out = Poly::zero();
        for (w, c) in &p.0 {
            match self.rules.get(w) {
                Some(r) => out.add_scaled(c, r),
                None => out.add_term(w.clone(), c.clone()),
            }
        }
        out
    }

    pub fn is_normal_word(&self, w: &Word) -> bool {
        !self.rules.contains_key(w)
    }

    /// Normal words with the given endpoints and degree.
    pub fn basis(&self, src: usize, tgt: usize, deg: i32) -> Vec<Word> {
        self.words
            .get(&(src, tgt, deg))
            .map(|ws| ws.iter().filter(|w| self.is_normal_word(w)).cloned().collect())
            .unwrap_or_default()
    }

    /// All normal words of the given degree, sorted by the standard order.
    pub fn basis_deg(&self, deg: i32) -> Vec<Word> {
        let mut out: Vec<Word> = self
            .words
            .iter()
            .filter(|((_, _, d), _)| *d == deg)
            .flat_map(|(_, ws)| ws.iter().filter(|w| self.is_normal_word(w)).cloned())
            .collect();
        out.sort_by(|a, b| cmp_words(&self.gens, a, b));
        out
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.normal(&a.mul(b))
    }
}

/// Residues of `∂²` on generators and of `∂` on relations, modulo the
/// relations. Empty means the differential squares to zero.
pub fn d_squared_residues(q: &DgQuiver) -> Vec<(String, Poly)> {
    let engine = PathEngine::new(q);
    let mut out = Vec::new();
    for r in &q.relations {
        let res = engine.normal(&q.d(r));
        if !res.is_zero() {
            out.push((r.display(&q.gens), res));
        }
    }
    for (g, gen) in q.gens.iter().enumerate() {
        let dd = engine.normal(&q.d(&engine.normal(&q.diff[g])));
        if !dd.is_zero() {
            out.push((gen.name.clone(), dd));
        }
    }
    out
}

/// `±1` as a scalar.
pub fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}
