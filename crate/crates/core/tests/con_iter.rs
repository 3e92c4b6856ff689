use conlab_core::con_iter::{
    check_downward, check_monotone_finite, check_monotone_finite_boxed, con_iter, con_star,
    unfold_once,
};
use conlab_core::formula::{classify, godel_encode, parse, ComplexityClass, Formula};
use conlab_core::OrdNotation;
use std::time::Instant;

#[test]
fn monotonicity_up_to_six() {
    for n in 0..=6 {
        let t = Instant::now();
        assert!(check_monotone_finite(n).is_established(), "n = {n}");
        assert!(
            check_monotone_finite_boxed(n).is_established(),
            "boxed n = {n}"
        );
        eprintln!("n = {n}: {:?}", t.elapsed());
    }
}

#[test]
fn iterates_weaken_downward() {
    let phi = parse("(exists x (= x x))").unwrap();
    for n in 0..4 {
        assert!(check_downward(n, &phi).is_established(), "n = {n}");
    }
}

#[test]
fn replay_at_several_instances() {
    let phi = parse("(forall x (le (z) x))").unwrap();
    for a in ["0", "3", "w", "w^2+w*2"] {
        let alpha: OrdNotation = a.parse().unwrap();
        con_star()
            .replay(&[(1, alpha.code()), (2, godel_encode(&phi))])
            .unwrap();
    }
}

#[test]
fn limit_unfolds_at_every_smaller_finite_stage() {
    let phi = Formula::top();
    let w = con_iter(&"w".parse().unwrap(), &phi).unwrap();
    for k in 0..4u64 {
        let beta = OrdNotation::finite(k);
        let step = unfold_once(&w, &beta).unwrap();
        let inner = con_iter(&beta, &phi).unwrap().rendered;
        assert_eq!(step, Formula::con(Formula::and(phi.clone(), inner)));
        assert_eq!(classify(&step).unwrap(), ComplexityClass::pi(1));
    }
}
