use conlab_core::aset::*;
use conlab_core::formula::{eval_sentence, parse, Formula, TruthValue};
use std::time::Instant;

fn run(alpha: &str, e: Enumeration, budget: u32) -> AsetRun {
    run_enumeration(&AsetConfig::new(alpha.parse().unwrap(), e, budget)).unwrap()
}

#[test]
fn budget_five_structure() {
    for alpha in ["0", "1", "2"] {
        let t = Instant::now();
        let r = run(alpha, Enumeration::Decidable, 5);
        for n in 0..=5 {
            assert_eq!(r.cumulative(n), (1 << (n + 1)) - 1);
        }
        assert!(check_counts(&r).is_established());
        assert!(check_descendant_implication(&r).is_established());
        assert!(check_branch_inconsistency(&r).is_established());
        assert!(check_same_branch_sat(&r).is_established());
        assert!(check_membership_consistency(&r).is_established());
        eprintln!("alpha {alpha}: {:?}", t.elapsed());
    }
}

#[test]
fn godel_order_run_is_deterministic() {
    let a = run("w", Enumeration::Godel, 4).event_log_json();
    let b = run("w", Enumeration::Godel, 4).event_log_json();
    assert_eq!(a, b);
}

#[test]
fn refutable_entry_at_index_two_is_found_at_stage_three() {
    let e = Enumeration::curated(vec![
        parse("(= (num 0) (num 0))").unwrap(),
        parse("(le (num 1) (num 3))").unwrap(),
        parse("(= (num 0) (s (num 0)))").unwrap(),
    ]);
    let r = run("1", e, 3);
    assert_eq!(first_refutable_index(&r), Some(2));
    assert!(check_refutable_member(&r).is_established());
    assert_eq!(refutable_member(&r).unwrap().stage, 3);
}

#[test]
fn true_path_is_unique_per_stage() {
    let r = run("1", Enumeration::Decidable, 5);
    let path = true_path(&r).unwrap();
    assert_eq!(path.len(), 6);
    for (stage, &id) in path.iter().enumerate() {
        assert_eq!(r.node(id).stage as usize, stage);
        if stage > 0 {
            let phi = &r.enumeration[stage - 1];
            let truth = eval_sentence(phi).unwrap() == TruthValue::True;
            assert_eq!(r.node(id).polarity, Some(truth));
            assert!(!path.contains(&sibling(&r, id)));
        }
    }
}

fn sibling(r: &AsetRun, id: usize) -> usize {
    let [a, b] = r.node(r.node(id).parent.unwrap()).children.unwrap();
    if a == id {
        b
    } else {
        a
    }
}

#[test]
fn unfolded_children_carry_parent_consistency() {
    let r = run_enumeration(
        &AsetConfig::new("1".parse().unwrap(), Enumeration::Decidable, 2).unfolded(),
    )
    .unwrap();
    let root = r.root();
    let child = r.node(root.children.unwrap()[0]);
    assert_eq!(
        child.numerated,
        Formula::and(
            Formula::and(Formula::top(), root.con.clone()),
            r.enumeration[0].clone()
        )
    );
}
