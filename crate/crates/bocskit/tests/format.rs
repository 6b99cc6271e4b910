use bocs_core::bocs::validate;
use bocs_core::catalog::running_example;
use bocs_core::dg::{DgQuiver, Poly};
use bocs_core::scalar::{q, qf};
use bocskit::format::{parse_biquiver, write_biquiver};
use proptest::prelude::*;

const RUNNING: &str = "\
# three vertices
vertices 3
solid a: 1 -> 2
solid b: 2 -> 3
solid c: 1 -> 3
dashed phi: 1 -> 2
dashed psi: 2 -> 3
dashed chi: 1 -> 3
d(c) = psi*a + b*phi
d(chi) = psi @ phi
";

fn error_at(text: &str) -> (usize, usize, String) {
    let e = parse_biquiver(text).unwrap_err();
    (e.line, e.col, e.msg)
}

#[test]
fn parses_the_running_example() {
    let qv = parse_biquiver(RUNNING).unwrap();
    assert_eq!(qv, running_example());
    assert!(validate(&qv).passed());
}

#[test]
fn shipped_data_files_parse() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    let run = std::fs::read_to_string(format!("{dir}/run2C.bocs")).unwrap();
    assert_eq!(parse_biquiver(&run).unwrap(), running_example());
    let bad = std::fs::read_to_string(format!("{dir}/leibniz_fail.bocs")).unwrap();
    assert!(!validate(&parse_biquiver(&bad).unwrap()).passed());
}

#[test]
fn document_without_differentials() {
    let qv = parse_biquiver("vertices 2\nsolid a: 1 -> 2\ndashed phi: 1 -> 2\n").unwrap();
    assert!(qv.diff.iter().all(Poly::is_zero));
    assert!(validate(&qv).passed());
}

#[test]
fn coefficients_and_trivial_paths() {
    let text = "vertices 2\nsolid a: 1 -> 2\nsolid b: 1 -> 2\ndashed phi: 1 -> 2\nd(a) = -3/2 phi\nd(b) = 2*phi*e1\n";
    let qv = parse_biquiver(text).unwrap();
    let phi = qv.poly("phi").unwrap();
    assert_eq!(qv.diff[0], phi.scale(&qf(-3, 2)));
    assert_eq!(qv.diff[1], phi.scale(&q(2)));
}

#[test]
fn zero_differential_and_relations() {
    let text = "vertices 3\nsolid a: 1 -> 2\nsolid b: 2 -> 3\nsolid c: 1 -> 3\nrelation b*a - c\nd(c) = 0\n";
    let qv = parse_biquiver(text).unwrap();
    assert_eq!(qv.relations, [qv.poly("b*a - c").unwrap()]);
    assert!(qv.diff[2].is_zero());
}

#[test]
fn rejects_arrows_against_the_order() {
    let (line, col, msg) = error_at("vertices 3\nsolid a: 2 -> 1\n");
    assert_eq!((line, col), (2, 7));
    assert!(msg.contains("directedness"), "{msg}");
    assert!(error_at("vertices 3\ndashed x: 2 -> 2\n").2.contains("directedness"));
}

#[test]
fn error_positions() {
    assert_eq!(error_at("solid a: 1 -> 2\n").0, 1);
    assert!(error_at("solid a: 1 -> 2\n").2.contains("'vertices' must come first"));
    let (line, col, msg) = error_at("vertices 2\nsolid a: 1 -> 2\ndashed phi: 1 -> 2\nd(a) = phi + zeta\n");
    assert_eq!((line, col), (4, 14));
    assert!(msg.contains("unknown arrow 'zeta'"));
    let (line, _, msg) = error_at("vertices 2\nsolid a: 1 -> 3\n");
    assert_eq!(line, 2);
    assert!(msg.contains("outside"));
    let (line, _, msg) = error_at("vertices 2\nsolid a: 1 -> 2\nsolid a: 1 -> 2\n");
    assert_eq!(line, 3);
    assert!(msg.contains("declared twice"));
    assert!(error_at("vertices 2\nsolid a: 1 -> 2\nd(a) = a\n").2.contains("degree"));
    assert!(error_at("vertices 2\nsolid a: 1 -> 2\nfrobnicate\n").2.contains("unknown directive"));
    assert!(error_at("").2.contains("missing 'vertices'"));
    assert!(error_at("vertices 0\n").2.contains("positive"));
}

#[test]
fn rejects_bad_terms() {
    let base = "vertices 3\nsolid a: 1 -> 2\nsolid b: 2 -> 3\nsolid c: 1 -> 3\ndashed phi: 1 -> 2\ndashed psi: 2 -> 3\n";
    assert!(error_at(&format!("{base}d(c) = a*b\n")).2.contains("does not compose"));
    assert!(error_at(&format!("{base}d(c) = psi*a + phi\n")).2.contains("term does not go 1 -> 3"));
    assert!(error_at(&format!("{base}d(c) = 2\n")).2.contains("coefficient without a path"));
    assert!(error_at(&format!("{base}d(c) = psi*a psi*a\n")).2.contains("expected '+' or '-'"));
    assert!(error_at(&format!("{base}d(c) = psi*a\nd(c) = psi*a\n")).2.contains("given twice"));
    assert!(error_at(&format!("{base}relation b*a + phi\n")).2.contains("relation"));
}

#[test]
fn error_message_format() {
    let e = parse_biquiver("vertices 3\nsolid a: 2 -> 1\n").unwrap_err();
    assert_eq!(e.to_string(), format!("line 2, column 7: {}", e.msg));
}

#[test]
fn written_output_is_stable() {
    let text = write_biquiver(&running_example());
    assert_eq!(
        text,
        "vertices 3\nsolid a: 1 -> 2\nsolid b: 2 -> 3\nsolid c: 1 -> 3\ndashed phi: 1 -> 2\ndashed psi: 2 -> 3\ndashed chi: 1 -> 3\nd(c) = b*phi + psi*a\nd(chi) = psi @ phi\n"
    );
}

/// A biquiver on up to four vertices with arbitrary (not necessarily
/// valid) differentials, built from a list of choices.
fn build(n: usize, arrows: &[(usize, usize, bool)], coeffs: &[(i64, i64)]) -> DgQuiver {
    let mut qv = DgQuiver::new(n);
    for (k, &(s, span, dashed)) in arrows.iter().enumerate() {
        let s = 1 + s % (n - 1);
        let t = (s + 1 + span % (n - s)).min(n);
        qv.add_gen(&format!("{}{k}", if dashed { "x" } else { "a" }), s, t, i32::from(dashed));
    }
    let words = qv.all_words();
    let mut next = coeffs.iter().cycle();
    for g in 0..qv.gens.len() {
        let gen = qv.gens[g].clone();
        let mut p = Poly::zero();
        for w in words.get(&(gen.src, gen.tgt, gen.deg + 1)).into_iter().flatten() {
            let (num, den) = *next.next().unwrap();
            if !w.is_trivial() && num != 0 {
                p.add_term(w.clone(), qf(num, den));
            }
        }
        qv.diff[g] = p;
    }
    qv
}

proptest! {
    #[test]
    fn write_then_parse_is_identity(
        n in 2usize..=4,
        arrows in prop::collection::vec((0usize..4, 0usize..4, any::<bool>()), 0..8),
        coeffs in prop::collection::vec((-3i64..=3, 1i64..=3), 1..16),
    ) {
        let qv = build(n, &arrows, &coeffs);
        let text = write_biquiver(&qv);
        prop_assert_eq!(parse_biquiver(&text).unwrap(), qv);
    }
}
