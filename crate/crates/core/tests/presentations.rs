use bifinite::field::{PrimeField, Rationals};
use bifinite::presentation::parse_presentation;
use bifinite::quiver::BoundQuiverAlgebra;

fn load(name: &str) -> String {
    std::fs::read_to_string(format!("{}/presentations/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn golden_dimensions() {
    let f = PrimeField::new(1009).unwrap();
    for (name, dim_a, dim_b, verts) in [("ex1.pres", 26, 25, 4), ("ex2.pres", 30, 26, 6), ("kx2.pres", 2, 1, 1), ("a2.pres", 3, 2, 2), ("a3.pres", 5, 4, 3), ("cyc2.pres", 5, 3, 2)] {
        let pres = parse_presentation(&load(name)).unwrap();
        let a = BoundQuiverAlgebra::build(&f, &pres).unwrap();
        assert_eq!(a.dim(), dim_a, "{name}");
        let emb = a.subalgebra(&pres, false).unwrap();
        assert_eq!(emb.small.dim(), dim_b, "{name}");
        assert!(emb.check());
        assert_eq!(emb.small.primitive_idempotents().unwrap().len(), verts, "{name}");
        assert_eq!(*a.algebra().radical().unwrap(), a.arrow_ideal(), "{name}");
        let q = BoundQuiverAlgebra::build(&Rationals, &pres).unwrap();
        assert_eq!(q.dim(), dim_a);
    }
}

#[test]
fn quotient_resolutions_are_exact_and_minimal() {
    use bifinite::module::{minimal_resolution, ExtensionRings, PdStatus};
    let f = PrimeField::new(1009).unwrap();
    for (name, dim_q, n_b) in [("ex1.pres", 1, 2), ("ex2.pres", 4, 2), ("kx2.pres", 1, 0), ("a2.pres", 1, 0), ("a3.pres", 1, 1)] {
        let pres = parse_presentation(&load(name)).unwrap();
        let a = BoundQuiverAlgebra::build(&f, &pres).unwrap();
        let rings = ExtensionRings::new(a.subalgebra(&pres, false).unwrap());
        let q = rings.quotient_bimodule();
        q.validate().unwrap();
        assert_eq!(q.dim(), dim_q, "{name}");
        let res = minimal_resolution(&q, 10).unwrap();
        assert_eq!(res.status, PdStatus::Finite(n_b), "{name}");
        assert!(res.exactness().is_exact(), "{name}");
        assert!(res.is_minimal(), "{name}");
    }
}

#[test]
fn builtins_match_files() {
    for (name, text) in bifinite::corpus::BUILTINS {
        assert_eq!(*text, load(&format!("{name}.pres")), "{name}");
    }
}
