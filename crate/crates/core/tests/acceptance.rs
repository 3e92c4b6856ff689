//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use conlab_core::aset::{self, AsetConfig, AsetRun, Enumeration};
use conlab_core::con_iter::{self, con_iter, con_star, unfold_finite};
use conlab_core::diagonal::fixed_point;
use conlab_core::formula::{
    classify, eval_term, godel_decode, godel_encode, print, ComplexityClass,
};
use conlab_core::gen;
use conlab_core::gl::{
    gl_decide, gl_prove, lob_rule_check, semantic_valid, GlOutcome, KripkeModel,
};
use conlab_core::gops::{self, GOperator};
use conlab_core::modal::{parse_modal, ModalFormula, ModalKind};
use conlab_core::suite::{run_suite, SuiteOptions, SUITES};
use conlab_core::{Formula, OrdNotation, Verdict};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn established(v: &Verdict, what: &str) -> Result<(), String> {
    ensure(
        v.is_established(),
        format!("{what}: {} ({})", v.status(), v.scope_or_note()),
    )
}

// Independent Kripke semantics: frames given as successor lists.

fn holds(f: &ModalFormula, w: usize, succ: &[Vec<usize>], val: &[BTreeSet<String>]) -> bool {
    match f.kind() {
        ModalKind::Atom(a) => val[w].contains(&**a),
        ModalKind::Top => true,
        ModalKind::Bot => false,
        ModalKind::Not(a) => !holds(a, w, succ, val),
        ModalKind::And(a, b) => holds(a, w, succ, val) && holds(b, w, succ, val),
        ModalKind::Or(a, b) => holds(a, w, succ, val) || holds(b, w, succ, val),
        ModalKind::Imp(a, b) => !holds(a, w, succ, val) || holds(b, w, succ, val),
        ModalKind::Box(a) => succ[w].iter().all(|&v| holds(a, v, succ, val)),
    }
}

fn transitive_irreflexive(n: usize, edges: &[(usize, usize)]) -> bool {
    let has = |a, b| edges.contains(&(a, b));
    edges.iter().all(|&(a, b)| a < n && b < n && a != b)
        && edges
            .iter()
            .all(|&(a, b)| (0..n).all(|c| !has(b, c) || has(a, c)))
}

fn genuinely_refutes(m: &KripkeModel, f: &ModalFormula) -> bool {
    let succ: Vec<Vec<usize>> = (0..m.worlds)
        .map(|w| m.edges.iter().filter(|e| e.0 == w).map(|e| e.1).collect())
        .collect();
    transitive_irreflexive(m.worlds, &m.edges)
        && m.valuation.len() == m.worlds
        && m.root < m.worlds
        && !holds(f, m.root, &succ, &m.valuation)
}

fn atoms_of(f: &ModalFormula, out: &mut Vec<String>) {
    match f.kind() {
        ModalKind::Atom(a) => {
            if !out.iter().any(|x| **x == **a) {
                out.push(a.to_string());
            }
        }
        ModalKind::Top | ModalKind::Bot => {}
        ModalKind::Not(a) | ModalKind::Box(a) => atoms_of(a, out),
        ModalKind::And(a, b) | ModalKind::Or(a, b) | ModalKind::Imp(a, b) => {
            atoms_of(a, out);
            atoms_of(b, out);
        }
    }
}

/// Whether some GL model with one or two worlds falsifies `f`. Up to
/// isomorphism the frames are: a point, two unrelated points, and 0 → 1.
fn falsified_on_two_worlds(f: &ModalFormula) -> bool {
    let mut atoms = Vec::new();
    atoms_of(f, &mut atoms);
    let k = atoms.len();
    let frames: [(usize, Vec<Vec<usize>>); 3] = [
        (1, vec![vec![]]),
        (2, vec![vec![], vec![]]),
        (2, vec![vec![1], vec![]]),
    ];
    frames.iter().any(|(n, succ)| {
        (0u32..1 << (k * n)).any(|bits| {
            let val: Vec<BTreeSet<String>> = (0..*n)
                .map(|w| {
                    (0..k)
                        .filter(|i| bits >> (w * k + i) & 1 == 1)
                        .map(|i| atoms[i].clone())
                        .collect()
                })
                .collect();
            (0..*n).any(|w| !holds(f, w, succ, &val))
        })
    })
}

fn c1_gl_oracle() -> Outcome {
    let corpus = gen::all_modal_formulas(8, 3);
    let mut count = 0;
    let (mut proved, mut refuted) = (0, 0);
    for f in corpus.iter().flatten() {
        count += 1;
        match gl_decide(f, conlab_core::gl::DEFAULT_BUDGET) {
            GlOutcome::Proved(p) => {
                proved += 1;
                ensure(p.check(f), format!("proof of {f} does not check"))?;
                ensure(
                    semantic_valid(f),
                    format!("{f} proved but semantically invalid"),
                )?;
                ensure(
                    !falsified_on_two_worlds(f),
                    format!("{f} proved but has a small countermodel"),
                )?;
            }
            GlOutcome::Refuted(m) => {
                refuted += 1;
                ensure(
                    genuinely_refutes(&m, f),
                    format!("bad countermodel for {f}"),
                )?;
                ensure(
                    !semantic_valid(f),
                    format!("{f} refuted but semantically valid"),
                )?;
                ensure(
                    m.worlds > 2 || falsified_on_two_worlds(f),
                    format!("{f}: small countermodel missed by brute force"),
                )?;
            }
            GlOutcome::Undecided { .. } => return Err(format!("{f} undecided")),
        }
    }
    Ok(format!(
        "{count} formulas of tree size ≤ 8 over ≤ 3 atoms: {proved} proved, {refuted} refuted"
    ))
}

fn c2_lob() -> Outcome {
    let lob = parse_modal("box(box p -> p) -> box p").unwrap();
    established(&gl_prove(&lob), "Löb axiom")?;
    let mut rng = gen::rng(0);
    let mut premise_provable = 0;
    for i in 0..500 {
        let f = gen::random_modal(&mut rng, 3 + i % 6, 3);
        established(&lob_rule_check(&f), &format!("Löb rule on {f}"))?;
        let premise = ModalFormula::imp(ModalFormula::boxed(f.clone()), f.clone());
        if gl_prove(&premise).is_established() {
            premise_provable += 1;
            established(&gl_prove(&f), &format!("conclusion {f}"))?;
        }
    }
    Ok(format!("axiom proved; rule holds on 500 seeded formulas ({premise_provable} with provable premise)"))
}

fn c3_godel2() -> Outcome {
    let f = parse_modal("~box F").unwrap();
    let v = gl_prove(&f);
    ensure(v.is_refuted(), format!("~box F: {}", v.status()))?;
    let m = v.countermodel().ok_or("no countermodel")?;
    ensure(
        m.worlds == 1,
        format!("countermodel has {} worlds", m.worlds),
    )?;
    ensure(
        genuinely_refutes(m, &f),
        "countermodel does not falsify ~box F",
    )?;
    Ok("refuted by a one-world countermodel".into())
}

fn c4_monotone() -> Outcome {
    let limit = Duration::from_secs(60);
    let mut slowest = Duration::ZERO;
    for n in 0..=6 {
        for (kind, check) in [
            (
                "plain",
                con_iter::check_monotone_finite as fn(u64) -> Verdict,
            ),
            ("boxed", con_iter::check_monotone_finite_boxed),
        ] {
            let start = Instant::now();
            let v = check(n);
            let took = start.elapsed();
            established(&v, &format!("n={n} {kind}"))?;
            ensure(took <= limit, format!("n={n} {kind} took {took:?}"))?;
            slowest = slowest.max(took);
        }
    }
    Ok(format!(
        "n = 0..6 plain and boxed; slowest {:.2}s",
        slowest.as_secs_f64()
    ))
}

/// Shape check independent of the classifier: one leading unbounded
/// universal, no other unbounded quantifier, provability only negated.
fn looks_pi1(text: &str) -> bool {
    text.starts_with("(forall ")
        && text.matches("(forall ").count() == 1
        && !text.contains("(exists ")
        && text.matches("(pr ").count() == text.matches("(not (pr ").count()
}

fn c5_base_cases() -> Outcome {
    let mut rng = gen::rng(0);
    let phis: Vec<Formula> = (0..10)
        .map(|i| gen::random_sentence(&mut rng, 2 + i % 4))
        .collect();
    for phi in &phis {
        established(
            &con_iter::check_base_cases(phi),
            &format!("base cases for {}", print(phi)),
        )?;
        ensure(
            unfold_finite(&OrdNotation::zero(), phi) == Ok(Formula::top()),
            "unfold at 0 is not T",
        )?;
    }
    let alphas = ["0", "1", "2", "w", "w+1", "w*2"];
    for a in alphas {
        let alpha: OrdNotation = a.parse().unwrap();
        for phi in &phis {
            let s = con_iter(&alpha, phi).map_err(|e| e.to_string())?;
            ensure(
                classify(&s.rendered) == Ok(ComplexityClass::pi(1)),
                format!("con_iter({a}) not classified Pi_1"),
            )?;
            ensure(
                looks_pi1(&print(&s.rendered)),
                format!("con_iter({a}) has a non-Pi_1 shape"),
            )?;
        }
    }
    Ok("base cases on 10 sentences; Pi_1 at α ∈ {0,1,2,ω,ω+1,ω·2} × 10".into())
}

fn c6_diagonal() -> Outcome {
    let star = con_star();
    let fixed = eval_term(&star.self_term).map_err(|e| e.to_string())?;
    ensure(
        godel_decode(&fixed).map_err(|e| e.to_string())? == star.result,
        "Con* self term does not denote its sentence",
    )?;
    let mut rng = gen::rng(0);
    let mut n = 0;
    for a in ["0", "1", "2", "w", "w+1", "w*2"] {
        let alpha: OrdNotation = a.parse().unwrap();
        for phi in [Formula::top(), gen::random_sentence(&mut rng, 3)] {
            star.replay(&[(1, alpha.code()), (2, godel_encode(&phi))])
                .map_err(|e| format!("Con* replay at {a}: {e}"))?;
            n += 1;
        }
    }
    for i in 0..100 {
        let tpl = gen::random_template(&mut rng, 1 + i % 4);
        let cert = fixed_point(&tpl, 0).map_err(|e| e.to_string())?;
        cert.replay(&[])
            .map_err(|e| format!("template {}: {e}", print(&tpl)))?;
        let value = eval_term(&cert.self_term).map_err(|e| e.to_string())?;
        ensure(
            godel_decode(&value).map_err(|e| e.to_string())? == cert.result,
            format!("template {} self term mismatch", print(&tpl)),
        )?;
    }
    Ok(format!(
        "Con* replays at {n} instances; 100/100 random templates"
    ))
}

fn bot_first() -> Enumeration {
    Enumeration::Curated {
        prefix: vec![Formula::bot()],
        then: Box::new(Enumeration::Decidable),
    }
}

fn tree_shape_ok(run: &AsetRun) -> Result<(), String> {
    let b = run.budget;
    ensure(
        run.len() == (1usize << (b + 1)) - 1,
        format!("{} nodes at budget {b}", run.len()),
    )?;
    for n in &run.nodes {
        match n.children {
            Some([l, r]) => {
                let (l, r) = (run.node(l), run.node(r));
                ensure(n.stage < b, "expanded leaf")?;
                ensure(
                    l.parent == Some(n.id) && r.parent == Some(n.id),
                    "parent links",
                )?;
                ensure(
                    l.stage == n.stage + 1 && r.stage == n.stage + 1,
                    "child stage",
                )?;
                ensure(l.polarity != r.polarity, "sibling polarities")?;
            }
            None => ensure(n.stage == b, "unexpanded interior node")?,
        }
    }
    for s in 0..=b {
        ensure(
            run.at_stage(s).count() == 1 << s,
            format!("stage {s} count"),
        )?;
    }
    Ok(())
}

fn c7_aset() -> Outcome {
    for a in ["0", "1", "2"] {
        let alpha: OrdNotation = a.parse().unwrap();
        let run = aset::run_enumeration(&AsetConfig::new(alpha.clone(), Enumeration::Decidable, 5))
            .map_err(|e| e.to_string())?;
        tree_shape_ok(&run)?;
        let tag = |k: &str| format!("alpha={a} {k}");
        established(&aset::check_counts(&run), &tag("counts"))?;
        established(
            &aset::check_branch_inconsistency(&run),
            &tag("cross-branch unsat"),
        )?;
        established(&aset::check_same_branch_sat(&run), &tag("same-branch sat"))?;
        established(
            &aset::check_membership_consistency(&run),
            &tag("membership"),
        )?;

        let path = aset::true_path(&run).map_err(|e| e.to_string())?;
        ensure(path.len() == 6, tag("true path length"))?;
        for w in path.windows(2) {
            ensure(
                run.node(w[1]).parent == Some(w[0]),
                tag("true path is not a branch"),
            )?;
        }

        let with_bot = aset::run_enumeration(&AsetConfig::new(alpha, bot_first(), 5))
            .map_err(|e| e.to_string())?;
        established(
            &aset::check_refutable_member(&with_bot),
            &tag("refutable member"),
        )?;
        ensure(
            aset::first_refutable_index(&with_bot) == Some(0),
            tag("⊥ is not the first refutable entry"),
        )?;
    }
    Ok("α ∈ {0,1,2} at budget 5: 63 nodes each, all tree lemmas established".into())
}

fn c8_dir1() -> Outcome {
    let mut n = 0;
    for budget in 2..=3 {
        for alpha in [1, 2] {
            let g = GOperator::new(OrdNotation::finite(alpha), Enumeration::Decidable, budget)
                .map_err(|e| e.to_string())?;
            for (label, id) in [("top", 0usize), ("stage-1", 1), ("stage-2", 3)] {
                let theta = g.run.node(id).numerated.clone();
                let v = gops::verify_thm41_dir1(&g, &theta).map_err(|e| e.to_string())?;
                established(&v, &format!("budget={budget} alpha={alpha} theta={label}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} instances established"))
}

fn c9_dir2() -> Outcome {
    for alpha in [1, 2] {
        let g = GOperator::new(OrdNotation::finite(alpha), Enumeration::Decidable, 2)
            .map_err(|e| e.to_string())?;
        for (label, id) in [("top", 0usize), ("stage-2", 3)] {
            let psi = g.run.node(id).numerated.clone();
            let v = gops::verify_thm41_dir2(&g, &psi).map_err(|e| e.to_string())?;
            established(&v, &format!("alpha={alpha} psi={label}"))?;
        }
        let g = GOperator::new(OrdNotation::finite(alpha), bot_first(), 2)
            .map_err(|e| e.to_string())?;
        let phi = Formula::and(Formula::top(), g.con_of(&Formula::top()));
        let v = gops::verify_thm41_converse(&g, &phi).map_err(|e| e.to_string())?;
        established(&v, &format!("alpha={alpha} converse"))?;
    }
    Ok("forward at ψ ∈ {⊤, stage-2} and converse, α ∈ {1,2}".into())
}

fn c10_prop51() -> Outcome {
    for b in 1..=4 {
        let g0 = GOperator::g0(bot_first(), b).map_err(|e| e.to_string())?;
        established(
            &gops::verify_prop51(&g0).map_err(|e| e.to_string())?,
            &format!("budget {b}"),
        )?;
    }
    let g1 = GOperator::new(OrdNotation::finite(1), bot_first(), 2).map_err(|e| e.to_string())?;
    let v = gops::verify_prop51_alpha1_analogue(&g1).map_err(|e| e.to_string())?;
    ensure(v.is_refuted(), format!("α=1 analogue: {}", v.status()))?;
    let m = v
        .countermodel()
        .ok_or("α=1 analogue refuted without a countermodel")?;
    ensure(
        transitive_irreflexive(m.worlds, &m.edges),
        "countermodel frame is not GL",
    )?;
    Ok(format!(
        "budgets 1..4 established; α=1 analogue refuted ({}-world countermodel)",
        m.worlds
    ))
}

fn c11_determinism() -> Outcome {
    let options = SuiteOptions::default();
    for name in SUITES {
        let a = run_suite(name, &options)
            .map_err(|e| e.to_string())?
            .to_json();
        let b = run_suite(name, &options)
            .map_err(|e| e.to_string())?
            .to_json();
        ensure(a == b, format!("suite {name} output differs between runs"))?;
    }
    Ok(format!(
        "{} suites byte-identical across two runs",
        SUITES.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("gl prover vs exhaustive oracles", c1_gl_oracle),
        ("Löb axiom and rule", c2_lob),
        ("unprovability of consistency", c3_godel2),
        ("finite monotonicity", c4_monotone),
        ("base cases and Pi_1 form", c5_base_cases),
        ("diagonal replay", c6_diagonal),
        ("sentence tree lemmas", c7_aset),
        ("main equivalence, direction 1", c8_dir1),
        ("main equivalence, direction 2", c9_dir2),
        ("Con versus g0", c10_prop51),
        ("deterministic reports", c11_determinism),
    ];
    let results: Vec<(usize, &str, Outcome, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .enumerate()
            .map(|(i, (name, f))| {
                let handle = std::thread::Builder::new()
                    .stack_size(256 << 20)
                    .spawn_scoped(s, move || {
                        let start = Instant::now();
                        let r = f();
                        (r, start.elapsed())
                    })
                    .expect("spawn");
                (i, *name, handle)
            })
            .collect();
        handles
            .into_iter()
            .map(|(i, name, h)| {
                let (r, t) = h
                    .join()
                    .unwrap_or_else(|_| (Err("panicked".into()), Duration::ZERO));
                (i + 1, name, r, t)
            })
            .collect()
    });
    let mut failed = 0;
    for (i, name, r, t) in &results {
        match r {
            Ok(detail) => println!("PASS {i:>2} {name}: {detail} [{:.1}s]", t.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {i:>2} {name}: {why} [{:.1}s]", t.as_secs_f64());
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
