use conlab_core::aset::Enumeration;
use conlab_core::formula::Formula;
use conlab_core::gops::*;
use std::time::Instant;

fn op(alpha: u64, e: Enumeration, budget: u32) -> GOperator {
    GOperator::new(conlab_core::OrdNotation::finite(alpha), e, budget).unwrap()
}

fn bot_first() -> Enumeration {
    Enumeration::Curated {
        prefix: vec![Formula::bot()],
        then: Box::new(Enumeration::Decidable),
    }
}

#[test]
fn dir1_members_of_three_stages() {
    for alpha in [1, 2] {
        let g = op(alpha, Enumeration::Decidable, 3);
        let stage1 = g.run.node(1).numerated.clone();
        let stage2 = g.run.node(3).numerated.clone();
        assert_eq!(g.run.node(3).stage, 2);
        for theta in [Formula::top(), stage1, stage2] {
            let t = Instant::now();
            let v = verify_thm41_dir1(&g, &theta).unwrap();
            assert!(v.is_established(), "alpha {alpha}: {v:?}");
            eprintln!("dir1 alpha {alpha}: {:?}", t.elapsed());
        }
    }
}

#[test]
fn dir2_forward_and_converse() {
    for alpha in [1, 2] {
        let g = op(alpha, Enumeration::Decidable, 2);
        let stage2 = g.run.node(3).numerated.clone();
        for psi in [Formula::top(), stage2] {
            let t = Instant::now();
            let v = verify_thm41_dir2(&g, &psi).unwrap();
            assert!(v.is_established(), "alpha {alpha}: {v:?}");
            eprintln!("dir2 alpha {alpha}: {:?}", t.elapsed());
        }
        let g = op(alpha, bot_first(), 2);
        let psi = Formula::top();
        let phi = Formula::and(psi.clone(), g.con_of(&psi));
        assert!(verify_thm41_converse(&g, &phi).unwrap().is_established());
        let g = op(alpha, Enumeration::Decidable, 1);
        assert!(verify_thm41_converse(&g, &phi).unwrap().is_undecided());
    }
}

#[test]
fn prop51_and_its_failure_at_alpha_one() {
    for budget in 1..=4 {
        let t = Instant::now();
        let g0 = GOperator::g0(bot_first(), budget).unwrap();
        let v = verify_prop51(&g0).unwrap();
        assert!(v.is_established(), "budget {budget}: {v:?}");
        eprintln!("prop51 budget {budget}: {:?}", t.elapsed());
    }
    let g1 = op(1, bot_first(), 2);
    let v = verify_prop51_alpha1_analogue(&g1).unwrap();
    let m = v.countermodel().expect("countermodel");
    assert!(m.is_gl_frame());
}

#[test]
fn monotone_and_weakening() {
    let g = op(1, Enumeration::Decidable, 2);
    let p = generic_sentence();
    let q = Formula::exists(Formula::eq(
        conlab_core::Term::bound(0),
        conlab_core::Term::bound(0),
    ));
    assert!(check_monotone(&g, &p, &q).unwrap().is_established());
    let g0 = GOperator::g0(bot_first(), 3).unwrap();
    assert!(check_truncations_weaken(&g0, &p).unwrap().is_established());
}
