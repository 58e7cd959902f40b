//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (run with `--nocapture` to see the lines).

use std::process::Command;

use bridgelab::consequence::{admissible_models, agreement, valid, Relation, Sequent, DEFAULT_CAP};
use bridgelab::proofs::{builtin, check_proof};
use bridgelab::scenarios::{half_model, run_scenario, scenario_json, BRIDGE_FRAME_JSON};
use bridgelab::semantics::{eval, ConnectiveFamily, Half, One, TruthValue, Zero};
use bridgelab::syntax::{parse, parse_context, parse_with_defs, QuotationContext};
use bridgelab::temporal::{eval_at, eval_at_in_history, eval_fut, BranchingFrame};

const SK: ConnectiveFamily = ConnectiveFamily::StrongKleene;
const COOPER: ConnectiveFamily = ConnectiveFamily::Cooper;

fn report(criterion: &str, ok: bool) {
    println!(
        "criterion {criterion}: {}",
        if ok { "pass" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed");
}

fn simple_sequent(premises: &[&str], conclusion: &str) -> Sequent {
    let ctx = QuotationContext::new();
    Sequent::new(
        premises.iter().map(|p| parse(p, &ctx).unwrap()).collect(),
        parse(conclusion, &ctx).unwrap(),
    )
}

#[test]
fn criterion_01_buridan_classicality() {
    let r = run_scenario("buridan").unwrap();
    let ok = r["classicalTransparentCompletions"] == 2
        && r["allModelsSatisfyNotPhi"] == true
        && r["proof"]["allValid"] == true;
    report("01 buridan classicality", ok);
}

#[test]
fn criterion_02_church_footnote() {
    let proof = builtin("church").unwrap();
    let verdicts = check_proof(&proof, &[Relation::Cl], SK, DEFAULT_CAP).unwrap();
    let root = verdicts.last().unwrap();
    let ok = verdicts.iter().all(|v| v.per_relation[&Relation::Cl].valid)
        && root.sequent.conclusion.to_string() == "~S"
        && root.per_relation[&Relation::Cl].models_checked == 16;
    report("02 church footnote", ok);
}

#[test]
fn criterion_03_cervantes_model() {
    let model = half_model().unwrap();
    let b = model.names.get("b").unwrap().clone();
    let (ctx, defs) = parse_context(
        "name b := Fut Pun(a)\n\
         def T := forall x. forall y. (Says(x,y) -> (True(y) -> ~Fut Pun(x)))\n\
         def F := forall x. forall y. (Says(x,y) -> (~True(y) -> Fut Pun(x)))\n",
    )
    .unwrap();
    let phi = parse_with_defs("T & F", &ctx, &defs).unwrap();
    let proof = builtin("bridge-future").unwrap();
    let verdicts = check_proof(&proof, &[Relation::Tt], COOPER, DEFAULT_CAP).unwrap();
    let ok = eval(&b, &model, COOPER).unwrap() == Half
        && eval(&phi, &model, COOPER).unwrap() == Half
        && verdicts.iter().all(|v| v.per_relation[&Relation::Tt].valid);
    report("03 cervantes model", ok);
}

#[test]
fn criterion_04_mp_failure_and_recovery() {
    let mp = simple_sequent(&["A", "A -> B"], "B");
    let sk = valid(&mp, Relation::Tt, SK, DEFAULT_CAP).unwrap();
    let cooper = valid(&mp, Relation::Tt, COOPER, DEFAULT_CAP).unwrap();
    let cm = sk.countermodel.as_ref().map(|m| {
        (m.atoms["A"], m.atoms["B"])
    });
    let ok = !sk.valid
        && cm == Some((Half, Zero))
        && cooper.valid
        && cooper.models_checked == 9;
    report("04 mp failure/recovery", ok);
}

#[test]
fn criterion_05_s_rule() {
    let s_rule = simple_sequent(&["A <-> ~A"], "~Simp A & ~Simp ~A");
    let v = valid(&s_rule, Relation::Tt, SK, DEFAULT_CAP).unwrap();
    let model = half_model().unwrap();
    let ctx = model.names.clone();
    let simp_t = parse("Simp True(b)", &ctx).unwrap();
    let simp_f = parse("Simp ~True(b)", &ctx).unwrap();
    let ok = v.valid
        && eval(&simp_t, &model, SK).unwrap() == Zero
        && eval(&simp_f, &model, SK).unwrap() == Zero;
    report("05 s-rule", ok);
}

#[test]
fn criterion_06_st_ss_split_on_lem_reductio() {
    let proof = builtin("lem-reductio").unwrap();
    let verdicts =
        check_proof(&proof, &[Relation::Ss, Relation::St], SK, DEFAULT_CAP).unwrap();
    let (last, body) = verdicts.split_last().unwrap();
    let ok = body.iter().all(|v| v.per_relation[&Relation::Ss].valid)
        && !last.per_relation[&Relation::Ss].valid
        && last.per_relation[&Relation::Ss].countermodel.is_some()
        && verdicts.iter().all(|v| v.per_relation[&Relation::St].valid);
    report("06 st/ss split on the reductio", ok);
}

#[test]
fn criterion_07_supervaluationist_future() {
    let frame = BranchingFrame::from_json(BRIDGE_FRAME_JSON).unwrap();
    let ctx = QuotationContext::new();
    let pun = parse("Pun(a)", &ctx).unwrap();
    let fut = parse("Fut Pun(a)", &ctx).unwrap();
    let lem = parse("Fut Pun(a) | ~Fut Pun(a)", &ctx).unwrap();
    let retro_h1 = eval_at_in_history(&fut, &frame, "h1", "t").unwrap();
    let retro_h2 = eval_at_in_history(&fut, &frame, "h2", "t").unwrap();
    let ok = eval_fut(&pun, &frame, "t").unwrap() == Half
        && eval_at(&lem, &frame, "t", SK).unwrap() == Half
        && retro_h1 == One
        && retro_h2 == Zero;
    report("07 supervaluationist future", ok);
}

#[test]
fn criterion_08_liar_within_bridge() {
    let (ctx, _) = parse_context("name l := ~True(l)\n").unwrap();
    let liar_bicond = parse("True(l) <-> ~True(l)", &ctx).unwrap();
    let seq = Sequent {
        premises: Vec::new(),
        conclusion: liar_bicond,
        domain: vec!["l".into()],
        ctx,
        transparent: true,
    };
    let classical: Vec<_> = admissible_models(&seq, true, SK, DEFAULT_CAP).unwrap().collect();
    let three: Vec<_> = admissible_models(&seq, false, SK, DEFAULT_CAP).unwrap().collect();
    let tt = valid(&seq, Relation::Tt, SK, DEFAULT_CAP).unwrap();
    let ok = classical.is_empty()
        && three.len() == 1
        && three[0].atoms["True(l)"] == TruthValue::Half
        && tt.valid;
    report("08 liar within bridge", ok);
}

#[test]
fn criterion_09_relation_containments() {
    let r = agreement::classical_agreement(2, SK);
    report("09 relation containments", r.violations.is_empty());
}

#[test]
fn criterion_10_scenario_determinism() {
    let bin = env!("CARGO_BIN_EXE_bridgelab");
    let mut ok = true;
    for name in ["buridan", "cervantes", "jacquette", "liar-bridge"] {
        let run = || {
            Command::new(bin)
                .args(["scenario", "run", name, "--json"])
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        ok &= a.status.success() && a.stdout == b.stdout;
        ok &= a.stdout == scenario_json(name).unwrap().as_bytes();
    }
    report("10 scenario determinism", ok);
}
