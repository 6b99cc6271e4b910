//! Modules over a bocs, morphisms in the sense of the bocs category,
//! complexes of such, and the comodule descriptions of filtered objects.

use crate::bocs::{tensor_name, Bocs};
use crate::dg::{Poly, Word};
use crate::linalg::Matrix;
use crate::scalar::{one, Q};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BocsModule {
    /// Dimension at each vertex, index `i-1`.
    pub dims: Vec<usize>,
    /// Action of each solid generator (by generator index).
    pub action: BTreeMap<usize, Matrix>,
}

impl BocsModule {
    pub fn zero(b: &Bocs, dims: Vec<usize>) -> Self {
        let mut action = BTreeMap::new();
        for (g, gen) in b.gens().iter().enumerate() {
            if gen.deg == 0 {
                action.insert(g, Matrix::zeros(dims[gen.tgt - 1], dims[gen.src - 1]));
            }
        }
        BocsModule { dims, action }
    }

    pub fn simple(b: &Bocs, i: usize) -> Self {
        let mut dims = vec![0; b.n()];
        dims[i - 1] = 1;
        Self::zero(b, dims)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Action of a path, composed in function order.
    pub fn path(&self, w: &Word) -> Matrix {
        let mut m = Matrix::identity(self.dims[w.src - 1]);
        for &l in w.letters.iter().rev() {
            m = self.action[&l].mul(&m);
        }
        m
    }

    pub fn element(&self, p: &Poly, src: usize, tgt: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dims[tgt - 1], self.dims[src - 1]);
        for (w, c) in &p.0 {
            m.add_scaled(c, &self.path(w));
        }
        m
    }

    /// Relations of `A` that do not act as zero.
    pub fn relation_violations(&self, b: &Bocs) -> Vec<String> {
        let mut out = Vec::new();
        for r in &b.quiver.relations {
            let Some(w) = r.0.keys().next() else { continue };
            if !self.element(r, w.src, w.tgt).is_zero() {
                out.push(b.display(r));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BocsMorphism {
    pub source: BocsModule,
    pub target: BocsModule,
    /// `f(ω_i)`, index `i-1`.
    pub omega: Vec<Matrix>,
    /// `f(v)` for each dashed generator `v: i ⇢ l`, a map `M_i → N_l`.
    pub dashed: BTreeMap<usize, Matrix>,
}

impl BocsMorphism {
    pub fn zero(b: &Bocs, source: &BocsModule, target: &BocsModule) -> Self {
        let omega = (0..b.n()).map(|i| Matrix::zeros(target.dims[i], source.dims[i])).collect();
        let mut dashed = BTreeMap::new();
        for (g, gen) in b.gens().iter().enumerate() {
            if gen.deg == 1 {
                dashed.insert(g, Matrix::zeros(target.dims[gen.tgt - 1], source.dims[gen.src - 1]));
            }
        }
        BocsMorphism { source: source.clone(), target: target.clone(), omega, dashed }
    }

    pub fn identity(b: &Bocs, m: &BocsModule) -> Self {
        let mut f = Self::zero(b, m, m);
        for i in 0..b.n() {
            f.omega[i] = Matrix::identity(m.dims[i]);
        }
        f
    }

    /// Value on an element of `V̄` with the given endpoints.
    pub fn on_vbar(&self, b: &Bocs, x: &Poly, src: usize, tgt: usize) -> Matrix {
        let g = b.gens();
        let mut m = Matrix::zeros(self.target.dims[tgt - 1], self.source.dims[src - 1]);
        for (w, c) in &x.0 {
            let k = w.letters.iter().position(|&l| g[l].deg == 1).expect("element of V̄");
            let v = w.letters[k];
            let p = Word { src: g[v].tgt, tgt: w.tgt, letters: w.letters[..k].to_vec() };
            let q = Word { src: w.src, tgt: g[v].src, letters: w.letters[k + 1..].to_vec() };
            let t = self.target.path(&p).mul(&self.dashed[&v]).mul(&self.source.path(&q));
            m.add_scaled(c, &t);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.omega.iter().all(Matrix::is_zero) && self.dashed.values().all(Matrix::is_zero)
    }

    pub fn add(&self, other: &BocsMorphism) -> BocsMorphism {
        let mut out = self.clone();
        for (a, b) in out.omega.iter_mut().zip(&other.omega) {
            *a = a.add(b);
        }
        for (k, m) in out.dashed.iter_mut() {
            *m = m.add(&other.dashed[k]);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> BocsMorphism {
        let mut out = self.clone();
        for a in out.omega.iter_mut() {
            *a = a.scale(c);
        }
        for m in out.dashed.values_mut() {
            *m = m.scale(c);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepError {
    Shape(String),
}

impl core::fmt::Display for RepError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RepError::Shape(s) => write!(f, "dimension mismatch: {s}"),
        }
    }
}

fn check_shapes(b: &Bocs, f: &BocsMorphism) -> Result<(), RepError> {
    for i in 0..b.n() {
        let m = &f.omega[i];
        if (m.rows, m.cols) != (f.target.dims[i], f.source.dims[i]) {
            return Err(RepError::Shape(format!("f(w{})", i + 1)));
        }
    }
    for (g, m) in &f.dashed {
        let gen = &b.gens()[*g];
        if (m.rows, m.cols) != (f.target.dims[gen.tgt - 1], f.source.dims[gen.src - 1]) {
            return Err(RepError::Shape(format!("f({})", gen.name)));
        }
    }
    Ok(())
}

/// Residues `f(ω_l)M(a) - N(a)f(ω_i) + f(∂₀a)` that are nonzero, by solid
/// generator name.
pub fn check_morphism(b: &Bocs, f: &BocsMorphism) -> Result<Vec<(String, Matrix)>, RepError> {
    check_shapes(b, f)?;
    let mut out = Vec::new();
    for (g, gen) in b.gens().iter().enumerate() {
        if gen.deg != 0 {
            continue;
        }
        let (i, l) = (gen.src, gen.tgt);
        let mut r = f.omega[l - 1].mul(&f.source.action[&g]);
        r = r.sub(&f.target.action[&g].mul(&f.omega[i - 1]));
        r = r.add(&f.on_vbar(b, &b.quiver.diff[g], i, l));
        if !r.is_zero() {
            out.push((gen.name.clone(), r));
        }
    }
    Ok(out)
}

/// Composition `g ∘ f` in the bocs category.
pub fn compose(b: &Bocs, g: &BocsMorphism, f: &BocsMorphism) -> Result<BocsMorphism, RepError> {
    if f.target.dims != g.source.dims {
        return Err(RepError::Shape("target of f differs from source of g".into()));
    }
    let gens = b.gens();
    let mut out = BocsMorphism::zero(b, &f.source, &g.target);
    for i in 0..b.n() {
        out.omega[i] = g.omega[i].mul(&f.omega[i]);
    }
    for (&v, m) in out.dashed.iter_mut() {
        let (i, l) = (gens[v].src, gens[v].tgt);
        let mut r = g.omega[l - 1].mul(&f.dashed[&v]).add(&g.dashed[&v].mul(&f.omega[i - 1]));
        for (w, c) in &b.quiver.diff[v].0 {
            let k = w.letters.iter().position(|&x| gens[x].deg == 1).expect("tensor term");
            let x1 = Word::from_letters(gens, w.letters[..=k].to_vec()).expect("factor");
            let x2 = Word::from_letters(gens, w.letters[k + 1..].to_vec()).expect("factor");
            let mid = x1.src;
            let t = g.on_vbar(b, &Poly::word(x1.clone()), mid, l).mul(&f.on_vbar(b, &Poly::word(x2.clone()), i, mid));
            r.add_scaled(c, &t);
        }
        *m = r;
    }
    Ok(out)
}

/// A bounded complex: `terms[k]` sits in degree `lo + k` and
/// `diffs[k]: terms[k] → terms[k+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BocsComplex {
    pub lo: i32,
    pub terms: Vec<BocsModule>,
    pub diffs: Vec<BocsMorphism>,
    /// Optional basis labels, `labels[k][i-1]` for term `k` at vertex `i`.
    pub labels: Vec<Vec<Vec<String>>>,
}

impl BocsComplex {
    /// Total dimension of each term, lowest degree first.
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(BocsModule::total_dim).collect()
    }

    pub fn single(m: BocsModule, deg: i32) -> Self {
        BocsComplex { lo: deg, terms: vec![m], diffs: Vec::new(), labels: Vec::new() }
    }

    fn label(&self, k: usize, vertex: usize, idx: usize) -> String {
        self.labels
            .get(k)
            .and_then(|l| l.get(vertex - 1))
            .and_then(|l| l.get(idx))
            .cloned()
            .unwrap_or_else(|| format!("#{idx}@{vertex}"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexReport {
    /// Human-readable residues, for example `d^0 d^-1 (w3)(e3 ⊗ w3) = ...`.
    pub residues: Vec<String>,
}

impl ComplexReport {
    pub fn passed(&self) -> bool {
        self.residues.is_empty()
    }
}

/// Checks every differential and every composite `d∘d`.
pub fn verify_complex(b: &Bocs, c: &BocsComplex) -> Result<ComplexReport, RepError> {
    let mut report = ComplexReport::default();
    for (k, d) in c.diffs.iter().enumerate() {
        for (name, _) in check_morphism(b, d)? {
            report.residues.push(format!("d^{} is not a morphism at {}", c.lo + k as i32, name));
        }
    }
    for k in 0..c.diffs.len().saturating_sub(1) {
        let dd = compose(b, &c.diffs[k + 1], &c.diffs[k])?;
        let deg = c.lo + k as i32;
        for i in 1..=b.n() {
            push_residues(&mut report, c, k, (i, i), &dd.omega[i - 1], &format!("d^{}d^{}(w{i})", deg + 1, deg));
        }
        for (v, m) in &dd.dashed {
            let gen = &b.gens()[*v];
            push_residues(&mut report, c, k, (gen.src, gen.tgt), m, &format!("d^{}d^{}({})", deg + 1, deg, gen.name));
        }
    }
    Ok(report)
}

fn push_residues(report: &mut ComplexReport, c: &BocsComplex, k: usize, (src, tgt): (usize, usize), m: &Matrix, head: &str) {
    for col in 0..m.cols {
        let mut entries = Vec::new();
        for row in 0..m.rows {
            if !m[(row, col)].is_zero() {
                entries.push((row, m[(row, col)].clone()));
            }
        }
        if entries.is_empty() {
            continue;
        }
        let mut s = format!("{head}({}) = ", c.label(k, src, col));
        for (j, (row, q)) in entries.iter().enumerate() {
            let neg = crate::scalar::is_neg(q);
            match (j, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let abs = if neg { -q.clone() } else { q.clone() };
            if abs != one() {
                s.push_str(&crate::scalar::fmt_q(&abs));
                s.push(' ');
            }
            s.push_str(&c.label(k + 2, tgt, *row));
        }
        report.residues.push(s);
    }
}

/// Elements of `U ⊗_L Y`: coefficients on pairs (word, basis index of `Y`).
pub type TensorVec = BTreeMap<(Word, usize), Q>;

fn tv_add(t: &mut TensorVec, key: (Word, usize), c: Q) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(key.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&key);
    }
}

/// An `L`-module `Y` with a structure map `c_Y: Y → V̄ ⊗_L Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NObject {
    /// Vertex of each basis vector.
    pub vertex: Vec<usize>,
    pub labels: Vec<String>,
    pub c: Vec<TensorVec>,
}

impl NObject {
    pub fn new(vertex: Vec<usize>, labels: Vec<String>) -> Self {
        let c = vec![TensorVec::new(); vertex.len()];
        NObject { vertex, labels, c }
    }

    /// Sets `c(y) += coeff · x ⊗ y'`.
    pub fn add(&mut self, y: usize, x: Word, y2: usize, coeff: Q) {
        tv_add(&mut self.c[y], (x, y2), coeff);
    }

    pub fn dim(&self) -> usize {
        self.vertex.len()
    }

    pub fn simple(i: usize) -> Self {
        NObject::new(vec![i], vec![format!("e{i}")])
    }

    fn label(&self, y: usize) -> String {
        self.labels.get(y).cloned().unwrap_or_else(|| format!("y{y}"))
    }
}

/// Checks `L`-linearity of a tensor-valued map.
pub fn is_l_linear(vertex_src: &[usize], vertex_tgt: &[usize], c: &[TensorVec]) -> bool {
    c.iter().enumerate().all(|(y, t)| t.keys().all(|(x, z)| x.tgt == vertex_src[y] && x.src == vertex_tgt[*z]))
}

fn show_tensor(b: &Bocs, labels: &dyn Fn(usize) -> String, t: &TensorVec) -> String {
    if t.is_empty() {
        return "0".into();
    }
    let mut terms: Vec<_> = t.iter().collect();
    terms.sort_by(|a, b2| crate::dg::cmp_words(b.gens(), &a.0 .0, &b2.0 .0).then(a.0 .1.cmp(&b2.0 .1)));
    let mut s = String::new();
    for (j, ((w, y), c)) in terms.into_iter().enumerate() {
        let neg = crate::scalar::is_neg(c);
        let abs = if neg { -c.clone() } else { c.clone() };
        if j == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if abs != one() {
            s.push_str(&crate::scalar::fmt_q(&abs));
            s.push(' ');
        }
        s.push_str(&tensor_name(b.gens(), w));
        s.push_str(" ⊗ ");
        s.push_str(&labels(*y));
    }
    s
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NReport {
    /// Nonzero values of the defining identity, by basis vector.
    pub residues: Vec<(String, String)>,
    pub linear: bool,
    pub filtration: bool,
    /// Dimensions of the kernel tower `Y_1 ⊆ Y_2 ⊆ ...`.
    pub tower: Vec<usize>,
}

impl NReport {
    pub fn passed(&self) -> bool {
        self.linear && self.residues.is_empty() && self.filtration
    }
}

/// Evaluates `(∂₁⊗1)c_Y + (m_V̄⊗1)(1⊗c_Y)c_Y` and the kernel tower.
pub fn check_n_object(b: &Bocs, y: &NObject) -> NReport {
    let mut report = NReport { linear: is_l_linear(&y.vertex, &y.vertex, &y.c), ..Default::default() };
    for k in 0..y.dim() {
        let mut res = TensorVec::new();
        for ((x, y2), c) in &y.c[k] {
            for (w, dc) in &b.d(&Poly::word(x.clone())).0 {
                tv_add(&mut res, (w.clone(), *y2), c * dc);
            }
            for ((x2, y3), c2) in &y.c[*y2] {
                let p = b.mul(&Poly::word(x.clone()), &Poly::word(x2.clone()));
                for (w, pc) in &p.0 {
                    tv_add(&mut res, (w.clone(), *y3), c * c2 * pc);
                }
            }
        }
        if !res.is_empty() {
            report.residues.push((y.label(k), show_tensor(b, &|i| y.label(i), &res)));
        }
    }
    report.tower = kernel_tower(b, y);
    report.filtration = report.tower.last().copied().unwrap_or(0) == y.dim();
    report
}

fn kernel_tower(b: &Bocs, y: &NObject) -> Vec<usize> {
    let dim = y.dim();
    if dim == 0 {
        return vec![0];
    }
    let vb = &b.vbar_basis;
    let vindex = b.vbar_index();
    let mut tower = Vec::new();
    let mut sub: Vec<Vec<Q>> = Vec::new();
    loop {
        let ann: Vec<Vec<Q>> = if sub.is_empty() {
            (0..dim).map(|i| (0..dim).map(|j| if i == j { one() } else { Q::zero() }).collect()).collect()
        } else {
            let data = sub.iter().flat_map(|v| v.iter().cloned()).collect();
            Matrix::from_rows(sub.len(), dim, data).nullspace()
        };
        let rows = vb.len() * ann.len();
        let mut m = Matrix::zeros(rows.max(1), dim);
        for yy in 0..dim {
            for ((x, y2), c) in &y.c[yy] {
                let xi = vindex[x];
                for (k, a) in ann.iter().enumerate() {
                    if !a[*y2].is_zero() {
                        m[(xi * ann.len() + k, yy)] += c * &a[*y2];
                    }
                }
            }
        }
        let next = m.nullspace();
        let d = next.len();
        tower.push(d);
        if d == sub.len() || d == dim {
            break;
        }
        sub = next;
    }
    tower
}

/// The complex `Ξ(Y)` with `V̄^{⊗j} ⊗_L Y` in degree `j`.
pub fn xi_expand(b: &Bocs, y: &NObject) -> BocsComplex {
    let n = b.n();
    let gens = b.gens();
    let mut bases: Vec<Vec<Vec<(Word, usize)>>> = Vec::new();
    for j in 0..n as i32 {
        let mut per = vec![Vec::new(); n];
        for (yy, &v) in y.vertex.iter().enumerate() {
            for x in b.tensor_basis_from(j, v) {
                per[x.tgt - 1].push((x, yy));
            }
        }
        bases.push(per);
    }
    while bases.len() > 1 && bases.last().is_some_and(|p| p.iter().all(Vec::is_empty)) {
        bases.pop();
    }
    let index: Vec<BTreeMap<(Word, usize), usize>> = bases
        .iter()
        .map(|per| per.iter().flat_map(|l| l.iter().cloned().enumerate().map(|(i, k)| (k, i))).collect())
        .collect();
    let mut terms = Vec::new();
    let mut labels = Vec::new();
    for (j, per) in bases.iter().enumerate() {
        let dims: Vec<usize> = per.iter().map(Vec::len).collect();
        let mut m = BocsModule::zero(b, dims);
        for (g, gen) in gens.iter().enumerate() {
            if gen.deg != 0 {
                continue;
            }
            let a = Poly::word(Word::gen(gens, g));
            let act = m.action.get_mut(&g).expect("solid");
            for (col, (x, yy)) in per[gen.src - 1].iter().enumerate() {
                for (w, c) in &b.mul(&a, &Poly::word(x.clone())).0 {
                    act[(index[j][&(w.clone(), *yy)], col)] += c;
                }
            }
        }
        terms.push(m);
        labels.push(
            per.iter()
                .map(|l| l.iter().map(|(x, yy)| format!("{} ⊗ {}", tensor_name(gens, x), y.label(*yy))).collect())
                .collect(),
        );
    }
    let mut diffs = Vec::new();
    for j in 0..bases.len().saturating_sub(1) {
        let mut d = BocsMorphism::zero(b, &terms[j], &terms[j + 1]);
        let sign = if j % 2 == 0 { one() } else { -one() };
        for l in 1..=n {
            for (col, (x, yy)) in bases[j][l - 1].iter().enumerate() {
                for (w, c) in &b.d(&Poly::word(x.clone())).0 {
                    d.omega[l - 1][(index[j + 1][&(w.clone(), *yy)], col)] -= c;
                }
                for ((x2, y2), c2) in &y.c[*yy] {
                    for (w, c) in &b.mul(&Poly::word(x.clone()), &Poly::word(x2.clone())).0 {
                        d.omega[l - 1][(index[j + 1][&(w.clone(), *y2)], col)] += &sign * c2 * c;
                    }
                }
            }
        }
        for (&v, m) in d.dashed.iter_mut() {
            let vp = Poly::word(Word::gen(gens, v));
            for (col, (x, yy)) in bases[j][gens[v].src - 1].iter().enumerate() {
                for (w, c) in &b.mul(&vp, &Poly::word(x.clone())).0 {
                    m[(index[j + 1][&(w.clone(), *yy)], col)] += c;
                }
            }
        }
        diffs.push(d);
    }
    BocsComplex { lo: 0, terms, diffs, labels }
}

pub fn box_complex(b: &Bocs, i: usize) -> BocsComplex {
    xi_expand(b, &NObject::simple(i))
}

/// The dual module over the opposite bocs.
pub fn dualize_module(b: &Bocs, m: &BocsModule) -> BocsModule {
    let n = b.n();
    let dims = (1..=n).map(|i| m.dims[n - i]).collect();
    let action = m.action.iter().map(|(g, a)| (*g, a.transpose())).collect();
    BocsModule { dims, action }
}

/// `Df: DN → DM` over the opposite bocs.
pub fn dualize_morphism(b: &Bocs, f: &BocsMorphism) -> BocsMorphism {
    let n = b.n();
    BocsMorphism {
        source: dualize_module(b, &f.target),
        target: dualize_module(b, &f.source),
        omega: (1..=n).map(|i| f.omega[n - i].transpose()).collect(),
        dashed: f.dashed.iter().map(|(v, m)| (*v, m.transpose().scale(&-one()))).collect(),
    }
}

pub fn dualize_complex(b: &Bocs, c: &BocsComplex) -> BocsComplex {
    let n = b.n();
    let len = c.terms.len() as i32;
    BocsComplex {
        lo: -(c.lo + len - 1),
        terms: c.terms.iter().rev().map(|m| dualize_module(b, m)).collect(),
        diffs: c.diffs.iter().rev().map(|d| dualize_morphism(b, d)).collect(),
        labels: c
            .labels
            .iter()
            .rev()
            .map(|per| (1..=n).map(|i| per[n - i].iter().map(|s| format!("({s})*")).collect()).collect())
            .collect(),
    }
}

/// The dual of the Box complex of the opposite bocs at the matching vertex.
pub fn diamond_complex(b: &Bocs, i: usize) -> BocsComplex {
    let op = b.opposite();
    let bx = box_complex(&op, b.n() + 1 - i);
    dualize_complex(&op, &bx)
}

/// `(degree, dim H^j)` of the scalar complex `(C_i, d(ω_i))`.
pub fn cohomology_dims(c: &BocsComplex, i: usize) -> Vec<(i32, usize)> {
    let ranks: Vec<usize> = c.diffs.iter().map(|d| d.omega[i - 1].rank()).collect();
    (0..c.terms.len())
        .map(|k| {
            let dim = c.terms[k].dims[i - 1];
            let out = if k < ranks.len() { ranks[k] } else { 0 };
            let inc = if k > 0 { ranks[k - 1] } else { 0 };
            (c.lo + k as i32, dim - out - inc)
        })
        .collect()
}

/// Dimension of homotopy classes of maps `Box_i → C`, i.e. `dim H^0`.
pub fn hom_classes(c: &BocsComplex, i: usize) -> usize {
    cohomology_dims(c, i).into_iter().find(|(d, _)| *d == 0).map(|(_, h)| h).unwrap_or(0)
}

/// A basis of the space of bocs morphisms `M → N`.
pub fn morphism_space(b: &Bocs, m: &BocsModule, nmod: &BocsModule) -> Vec<BocsMorphism> {
    let zero = BocsMorphism::zero(b, m, nmod);
    let mut slots: Vec<(Option<usize>, usize, usize, usize)> = Vec::new();
    for i in 0..b.n() {
        for r in 0..nmod.dims[i] {
            for c in 0..m.dims[i] {
                slots.push((None, i, r, c));
            }
        }
    }
    for (v, mat) in &zero.dashed {
        for r in 0..mat.rows {
            for c in 0..mat.cols {
                slots.push((Some(*v), 0, r, c));
            }
        }
    }
    let unit = |s: &(Option<usize>, usize, usize, usize)| {
        let mut f = zero.clone();
        match s.0 {
            None => f.omega[s.1][(s.2, s.3)] = one(),
            Some(v) => f.dashed.get_mut(&v).expect("dashed")[(s.2, s.3)] = one(),
        }
        f
    };
    let columns: Vec<Vec<Q>> = slots
        .iter()
        .map(|s| {
            let f = unit(s);
            let mut v = Vec::new();
            for (g, gen) in b.gens().iter().enumerate() {
                if gen.deg != 0 {
                    continue;
                }
                let (i, l) = (gen.src, gen.tgt);
                let r = f.omega[l - 1]
                    .mul(&m.action[&g])
                    .sub(&nmod.action[&g].mul(&f.omega[i - 1]))
                    .add(&f.on_vbar(b, &b.quiver.diff[g], i, l));
                v.extend(r.entries().iter().cloned());
            }
            v
        })
        .collect();
    let rows = columns.first().map(Vec::len).unwrap_or(0);
    let mut eq = Matrix::zeros(rows.max(1), slots.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            eq[(i, j)] = x.clone();
        }
    }
    eq.nullspace()
        .into_iter()
        .map(|sol| {
            let mut f = zero.clone();
            for (s, x) in slots.iter().zip(sol) {
                if !x.is_zero() {
                    f = f.add(&unit(s).scale(&x));
                }
            }
            f
        })
        .collect()
}

/// `s(x̂) = ` matrix `Z × Y` for every basis element `x` of `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SData {
    pub basis: Vec<Word>,
    pub maps: Vec<Matrix>,
    /// `(dim Z, dim Y)`, the shape of every map.
    pub shape: (usize, usize),
}

impl SData {
    pub fn get(&self, index: &BTreeMap<Word, usize>, w: &Word) -> &Matrix {
        &self.maps[index[w]]
    }
}

/// `Ψ`: turns `g: Y → U ⊗ Z` into `s: DU → Hom(Y, Z)` over the basis `u_basis` of `U`.
pub fn psi(u_basis: &[Word], ydim: usize, zdim: usize, g: &[TensorVec]) -> SData {
    let index: BTreeMap<&Word, usize> = u_basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut maps = vec![Matrix::zeros(zdim, ydim); u_basis.len()];
    for (y, t) in g.iter().enumerate() {
        for ((x, z), c) in t {
            maps[index[x]][(*z, y)] += c;
        }
    }
    SData { basis: u_basis.to_vec(), maps, shape: (zdim, ydim) }
}

/// `Φ`, the inverse of [`psi`].
pub fn phi(s: &SData) -> Vec<TensorVec> {
    let ydim = s.shape.1;
    let mut g = vec![TensorVec::new(); ydim];
    for (x, m) in s.basis.iter().zip(&s.maps) {
        for z in 0..m.rows {
            for y in 0..m.cols {
                tv_add(&mut g[y], (x.clone(), z), m[(z, y)].clone());
            }
        }
    }
    g
}

/// The dual data `s_Y` of an object.
pub fn r_object(b: &Bocs, y: &NObject) -> SData {
    psi(&b.vbar_basis, y.dim(), y.dim(), &y.c)
}

/// Evaluates `s_Y D∂ + m(s_Y⊗s_Y) p D m_V̄` on each dual basis element of
/// `V̄⊗_A V̄`; returns the names of those where it is nonzero.
pub fn check_r_object(b: &Bocs, s: &SData) -> Vec<String> {
    let vb = &b.vbar_basis;
    let idx = b.vbar2_index();
    let dim = s.shape.1;
    let mut acc = vec![Matrix::zeros(dim, dim); b.vbar2_basis.len()];
    for (k, x) in vb.iter().enumerate() {
        for (w, c) in &b.d(&Poly::word(x.clone())).0 {
            acc[idx[w]].add_scaled(c, &s.maps[k]);
        }
    }
    for (k1, x1) in vb.iter().enumerate() {
        for (k2, x2) in vb.iter().enumerate() {
            if x1.src != x2.tgt {
                continue;
            }
            for (w, c) in &b.mul(&Poly::word(x1.clone()), &Poly::word(x2.clone())).0 {
                acc[idx[w]].add_scaled(c, &s.maps[k2].mul(&s.maps[k1]));
            }
        }
    }
    b.vbar2_basis
        .iter()
        .zip(&acc)
        .filter(|(_, m)| !m.is_zero())
        .map(|(w, _)| tensor_name(b.gens(), w))
        .collect()
}

/// `c_f: Y → A ⊗_L Z` for an N-morphism.
pub type NMorphism = Vec<TensorVec>;

/// The unit `y ↦ e ⊗ y`.
pub fn n_identity(y: &NObject) -> NMorphism {
    (0..y.dim()).map(|k| [((Word::trivial(y.vertex[k]), k), one())].into_iter().collect()).collect()
}

/// Evaluates the morphism identity for `c_f` between `y` and `z`; returns
/// residues by basis vector of `Y`.
pub fn check_n_morphism(b: &Bocs, f: &NMorphism, y: &NObject, z: &NObject) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for k in 0..y.dim() {
        let mut res = TensorVec::new();
        for ((p, zz), c) in &f[k] {
            for ((x, z2), c2) in &z.c[*zz] {
                for (w, pc) in &b.mul(&Poly::word(p.clone()), &Poly::word(x.clone())).0 {
                    tv_add(&mut res, (w.clone(), *z2), -(c * c2 * pc));
                }
            }
            for (w, dc) in &b.d(&Poly::word(p.clone())).0 {
                tv_add(&mut res, (w.clone(), *zz), c * dc);
            }
        }
        for ((x, y2), c) in &y.c[k] {
            for ((p, zz), c2) in &f[*y2] {
                for (w, pc) in &b.mul(&Poly::word(x.clone()), &Poly::word(p.clone())).0 {
                    tv_add(&mut res, (w.clone(), *zz), c * c2 * pc);
                }
            }
        }
        if !res.is_empty() {
            out.push((y.label(k), show_tensor(b, &|i| z.label(i), &res)));
        }
    }
    out
}

/// Evaluates the dual morphism identity on each dual basis element of `V̄`.
pub fn check_r_morphism(b: &Bocs, sf: &SData, sy: &SData, sz: &SData) -> Vec<String> {
    let v_index = b.vbar_index();
    let (zd, yd) = sf.shape;
    let mut acc = vec![Matrix::zeros(zd, yd); b.vbar_basis.len()];
    for (ky, x) in b.vbar_basis.iter().enumerate() {
        for (kp, p) in b.a_basis.iter().enumerate() {
            if x.src == p.tgt {
                for (w, c) in &b.mul(&Poly::word(x.clone()), &Poly::word(p.clone())).0 {
                    acc[v_index[w]].add_scaled(c, &sf.maps[kp].mul(&sy.maps[ky]));
                }
            }
            if p.src == x.tgt {
                for (w, c) in &b.mul(&Poly::word(p.clone()), &Poly::word(x.clone())).0 {
                    acc[v_index[w]].add_scaled(&-c.clone(), &sz.maps[ky].mul(&sf.maps[kp]));
                }
            }
        }
    }
    for (kp, p) in b.a_basis.iter().enumerate() {
        for (w, c) in &b.d(&Poly::word(p.clone())).0 {
            acc[v_index[w]].add_scaled(c, &sf.maps[kp]);
        }
    }
    b.vbar_basis
        .iter()
        .zip(&acc)
        .filter(|(_, m)| !m.is_zero())
        .map(|(w, _)| tensor_name(b.gens(), w))
        .collect()
}

/// Composition of N-morphisms `c_{gf} = (m_A⊗1)(1⊗c_g)c_f`.
pub fn n_compose(b: &Bocs, g: &NMorphism, f: &NMorphism) -> NMorphism {
    f.iter()
        .map(|t| {
            let mut out = TensorVec::new();
            for ((q, z), c) in t {
                for ((r, w), c2) in &g[*z] {
                    for (pw, pc) in &b.mul(&Poly::word(q.clone()), &Poly::word(r.clone())).0 {
                        tv_add(&mut out, (pw.clone(), *w), c * c2 * pc);
                    }
                }
            }
            out
        })
        .collect()
}

/// Composition of R-morphisms `s_{gf}(p̂) = Σ_{qr=p} s_g(r̂) s_f(q̂)`.
pub fn r_compose(b: &Bocs, sg: &SData, sf: &SData) -> SData {
    let idx = b.a_index();
    let (zd, yd) = (sg.shape.0, sf.shape.1);
    let mut maps = vec![Matrix::zeros(zd, yd); b.a_basis.len()];
    for (kq, q) in b.a_basis.iter().enumerate() {
        for (kr, r) in b.a_basis.iter().enumerate() {
            if q.src != r.tgt {
                continue;
            }
            for (w, c) in &b.mul(&Poly::word(q.clone()), &Poly::word(r.clone())).0 {
                maps[idx[w]].add_scaled(c, &sg.maps[kr].mul(&sf.maps[kq]));
            }
        }
    }
    SData { basis: b.a_basis.clone(), maps, shape: (zd, yd) }
}

