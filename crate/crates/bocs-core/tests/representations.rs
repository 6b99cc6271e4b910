mod common;

use bocs_core::bocs::{biquiver, Bocs};
use bocs_core::catalog::running_example;
use bocs_core::dg::Word;
use bocs_core::linalg::Matrix;
use bocs_core::rep::*;
use bocs_core::scalar::one;

fn running() -> Bocs {
    Bocs::new(&running_example()).unwrap()
}

fn word(b: &Bocs, s: &str) -> Word {
    b.quiver.word(&s.split('*').collect::<Vec<_>>()).unwrap()
}

/// `Y` with basis `v1, v2, v3, w3` at vertices `1, 2, 3, 3`.
fn four_dim() -> NObject {
    NObject::new(vec![1, 2, 3, 3], ["v1", "v2", "v3", "w3"].map(String::from).to_vec())
}

fn c_y(b: &Bocs) -> NObject {
    let mut y = four_dim();
    y.add(2, word(b, "psi"), 1, one());
    y.add(3, word(b, "psi"), 1, one());
    y
}

fn c_y_tilde(b: &Bocs) -> NObject {
    let mut y = four_dim();
    y.add(2, word(b, "psi"), 1, one());
    y.add(3, word(b, "chi"), 0, one());
    y
}

#[test]
fn box_complexes() {
    let b = running();
    let dims: Vec<_> = (1..=3).map(|i| box_complex(&b, i).dims()).collect();
    assert_eq!(dims, [vec![4, 4, 1], vec![2, 1], vec![1]]);
    for i in 1..=3 {
        let c = box_complex(&b, i);
        assert_eq!(c.lo, 0);
        assert!(verify_complex(&b, &c).unwrap().passed());
        let at_i = cohomology_dims(&c, i);
        assert_eq!(at_i[0], (0, 1));
        assert!(at_i[1..].iter().all(|(_, h)| *h == 0), "Box_{i} at {i}: {at_i:?}");
        assert_eq!(hom_classes(&c, i), 1);
    }
    assert_eq!(box_complex(&b, 1).terms[0].dims, [1, 1, 2]);
}

#[test]
fn diamond_complexes() {
    let b = running();
    let shapes: Vec<_> = (1..=3).map(|i| {
        let d = diamond_complex(&b, i);
        assert!(verify_complex(&b, &d).unwrap().passed());
        (d.lo, d.dims())
    }).collect();
    assert_eq!(shapes, [(0, vec![1]), (-1, vec![1, 2]), (-2, vec![1, 4, 4])]);
    for i in 1..=3 {
        assert_eq!(hom_classes(&diamond_complex(&b, i), i), 1);
    }
}

#[test]
fn box_of_two_vertex_bocs() {
    let mut qv = biquiver(2, &[("a", 1, 2)], &[("phi", 1, 2)]);
    qv.set_diff("a", "phi");
    let b = Bocs::new(&qv).unwrap();
    // a is homotopic to zero, so Box_1 is just the simple at 1
    assert_eq!(cohomology_dims(&box_complex(&b, 1), 2).iter().map(|x| x.1).sum::<usize>(), 0);
}

#[test]
fn object_with_psi_entries_is_valid() {
    let b = running();
    let y = c_y(&b);
    let report = check_n_object(&b, &y);
    assert!(report.passed(), "{report:?}");
    let x = xi_expand(&b, &y);
    assert!(verify_complex(&b, &x).unwrap().passed());
    assert!(check_r_object(&b, &r_object(&b, &y)).is_empty());
}

#[test]
fn dual_data_of_the_object() {
    let b = running();
    let s = r_object(&b, &c_y(&b));
    let psi = s.get(b.vbar_index(), &word(&b, "psi"));
    // s(psi) sends v3 and w3 to v2
    let mut expected = Matrix::zeros(4, 4);
    expected[(1, 2)] = one();
    expected[(1, 3)] = one();
    assert_eq!(psi, &expected);
    assert!(s.get(b.vbar_index(), &word(&b, "chi")).is_zero());
    assert_eq!(phi(&s), c_y(&b).c);
}

#[test]
fn object_with_extra_chi_entry_fails_everywhere() {
    let b = running();
    let y = c_y_tilde(&b);
    let report = check_n_object(&b, &y);
    assert!(!report.passed());
    assert_eq!(report.residues, [("w3".to_string(), "psi @ phi ⊗ v1".to_string())]);
    assert_eq!(check_r_object(&b, &r_object(&b, &y)), ["psi @ phi"]);
    let complex = verify_complex(&b, &xi_expand(&b, &y)).unwrap();
    assert_eq!(complex.residues, ["d^1d^0(w3)(e3 ⊗ w3) = -psi @ phi ⊗ v1"]);
}

#[test]
fn structure_maps_must_respect_vertices() {
    let b = running();
    let mut y = four_dim();
    y.add(0, word(&b, "phi"), 1, one());
    assert!(!check_n_object(&b, &y).linear);
}

#[test]
fn identity_morphisms() {
    let b = running();
    let y = c_y(&b);
    let id = n_identity(&y);
    assert!(check_n_morphism(&b, &id, &y, &y).is_empty());
    let s_id = psi(&b.a_basis, 4, 4, &id);
    let sy = r_object(&b, &y);
    assert!(check_r_morphism(&b, &s_id, &sy, &sy).is_empty());
    assert_eq!(n_compose(&b, &id, &id), id);
    assert_eq!(r_compose(&b, &s_id, &s_id), s_id);
}

#[test]
fn n_and_r_morphism_checks_agree() {
    let b = running();
    let y = c_y(&b);
    let mut f = n_identity(&y);
    f[2].insert((word(&b, "b"), 1), one());
    let residues = check_n_morphism(&b, &f, &y, &y);
    let sf = psi(&b.a_basis, 4, 4, &f);
    let sy = r_object(&b, &y);
    assert_eq!(residues.is_empty(), check_r_morphism(&b, &sf, &sy, &sy).is_empty());
}

/// Rank over the rationals by elimination on `f64`; entries are small integers.
fn float_rank(rows: &[Vec<f64>]) -> usize {
    let mut m = rows.to_vec();
    let mut rank = 0;
    let cols = m.first().map(Vec::len).unwrap_or(0);
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c].abs() > 1e-9) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank {
                let f = m[r][c] / m[rank][c];
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot) {
                    *x -= f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn morphisms_between_simples_match_linear_part_of_differential() {
    let mut rng = common::rng(21);
    for _ in 0..30 {
        let qv = common::random_biquiver(&mut rng, 4);
        let b = Bocs::new(&qv).unwrap();
        for i in 1..=qv.n {
            for j in 1..=qv.n {
                let got = morphism_space(&b, &BocsModule::simple(&b, i), &BocsModule::simple(&b, j)).len();
                let dashed: Vec<usize> = (0..qv.gens.len()).filter(|&g| qv.gens[g].deg == 1 && (qv.gens[g].src, qv.gens[g].tgt) == (i, j)).collect();
                let rows: Vec<Vec<f64>> = (0..qv.gens.len())
                    .filter(|&g| qv.gens[g].deg == 0 && (qv.gens[g].src, qv.gens[g].tgt) == (i, j))
                    .map(|g| dashed.iter().map(|&x| {
                        let c = qv.diff[g].coeff(&qv.gen_word(x));
                        c.numer().to_string().parse::<f64>().unwrap() / c.denom().to_string().parse::<f64>().unwrap()
                    }).collect())
                    .collect();
                let expected = usize::from(i == j) + dashed.len() - float_rank(&rows);
                assert_eq!(got, expected, "S{i} -> S{j}");
            }
        }
    }
}

#[test]
fn morphism_space_of_the_running_example() {
    let b = running();
    let dims: Vec<Vec<usize>> = (1..=3)
        .map(|i| (1..=3).map(|j| morphism_space(&b, &BocsModule::simple(&b, i), &BocsModule::simple(&b, j)).len()).collect())
        .collect();
    assert_eq!(dims, [[1, 1, 1], [0, 1, 1], [0, 0, 1]]);
}

#[test]
fn morphism_composition_respects_the_identity() {
    let b = running();
    let m = BocsModule::simple(&b, 1);
    let n = BocsModule::simple(&b, 3);
    let id_m = BocsMorphism::identity(&b, &m);
    let id_n = BocsMorphism::identity(&b, &n);
    for f in morphism_space(&b, &m, &n) {
        assert_eq!(compose(&b, &f, &id_m).unwrap(), f);
        assert_eq!(compose(&b, &id_n, &f).unwrap(), f);
        assert!(check_morphism(&b, &f).unwrap().is_empty());
    }
}

#[test]
fn round_trip_without_dashed_arrows() {
    let b = Bocs::new(&biquiver(2, &[("a", 1, 2)], &[])).unwrap();
    let y = NObject::new(vec![1, 2], vec!["u".into(), "v".into()]);
    let s = r_object(&b, &y);
    assert!(s.maps.is_empty());
    assert_eq!(s.shape, (2, 2));
    assert_eq!(phi(&s), y.c);
}

fn dashed_index(b: &Bocs, name: &str) -> usize {
    b.gens().iter().position(|g| g.name == name).unwrap()
}

#[test]
fn composing_along_the_dashed_path() {
    let b = running();
    let f_space = morphism_space(&b, &BocsModule::simple(&b, 1), &BocsModule::simple(&b, 2));
    let g_space = morphism_space(&b, &BocsModule::simple(&b, 2), &BocsModule::simple(&b, 3));
    let (f, g) = (&f_space[0], &g_space[0]);
    let (phi, psi, chi) = (dashed_index(&b, "phi"), dashed_index(&b, "psi"), dashed_index(&b, "chi"));
    assert_eq!(f.dashed[&phi], Matrix::from_i64(1, 1, &[1]));
    assert_eq!(g.dashed[&psi], Matrix::from_i64(1, 1, &[1]));
    let gf = compose(&b, g, f).unwrap();
    assert_eq!(gf.dashed[&chi], Matrix::from_i64(1, 1, &[1]));

    let flat = Bocs::new(&bocs_core::bocs::biquiver(
        3,
        &[("a", 1, 2), ("b", 2, 3)],
        &[("phi", 1, 2), ("psi", 2, 3), ("chi", 1, 3)],
    ))
    .unwrap();
    let f = &morphism_space(&flat, &BocsModule::simple(&flat, 1), &BocsModule::simple(&flat, 2))[0];
    let g = &morphism_space(&flat, &BocsModule::simple(&flat, 2), &BocsModule::simple(&flat, 3))[0];
    assert!(compose(&flat, g, f).unwrap().is_zero());
}

fn random_module(rng: &mut impl rand::Rng, b: &Bocs) -> BocsModule {
    let dims: Vec<usize> = (0..b.n()).map(|_| rng.gen_range(0..=2)).collect();
    let mut m = BocsModule::zero(b, dims);
    for a in m.action.values_mut() {
        let data: Vec<i64> = (0..a.rows * a.cols).map(|_| rng.gen_range(-2..=2)).collect();
        *a = Matrix::from_i64(a.rows, a.cols, &data);
    }
    m
}

fn random_combination(rng: &mut impl rand::Rng, b: &Bocs, m: &BocsModule, n: &BocsModule) -> BocsMorphism {
    let mut f = BocsMorphism::zero(b, m, n);
    for basis in morphism_space(b, m, n) {
        let c = bocs_core::scalar::q(rng.gen_range(-3..=3));
        f = f.add(&basis.scale(&c));
    }
    f
}

#[test]
fn composition_is_associative() {
    let b = running();
    let mut rng = common::rng(5);
    for _ in 0..20 {
        let ms: Vec<BocsModule> = (0..4).map(|_| random_module(&mut rng, &b)).collect();
        let f = random_combination(&mut rng, &b, &ms[0], &ms[1]);
        let g = random_combination(&mut rng, &b, &ms[1], &ms[2]);
        let h = random_combination(&mut rng, &b, &ms[2], &ms[3]);
        let left = compose(&b, &h, &compose(&b, &g, &f).unwrap()).unwrap();
        let right = compose(&b, &compose(&b, &h, &g).unwrap(), &f).unwrap();
        assert_eq!(left, right);
        assert!(check_morphism(&b, &left).unwrap().is_empty());
    }
}
