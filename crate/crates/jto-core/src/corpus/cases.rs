//! The built-in cases. Agents are p (the teacher), e (the student), and j
//! (the judge); the agreement is at instant 0, the suit at 5, the
//! pronouncement at 10, the second suit at 15.

use std::collections::BTreeSet;

use crate::lemmas::{
    emit_boxdot_elim, emit_boxdot_idem, emit_box_step, emit_sofar_at, emit_sofar_down,
    emit_sofar_unfold, emit_weak_until_unfold, ttp,
};
use crate::proof::{Cite, ProofScript, ScriptBuilder};
use crate::search::SearchBounds;
use crate::semantics::{
    LassoRun, NeighborhoodModel, NeighborhoodRule, NeighborhoodTable, NonNormalValuation,
    SchemaPattern, StatePattern, StateSet, TermPattern, Universe,
};
use crate::syntax::{parse_formula_with, AgentTable, Formula};

use super::{CorpusCase, Expectation};

struct Vocab {
    agents: AgentTable,
    contract: Formula,
    court: Formula,
    contract_r: Formula,
    court_r: Formula,
    psue: Formula,
    no_win_first: Formula,
    no_win_first_strict: Formula,
    past_looking: Formula,
    judge2_rule: Formula,
    contract_proj: Formula,
    court_proj: Formula,
    time10: Formula,
    p_goal: Formula,
    e_goal: Formula,
    rp_goal: Formula,
    re_goal: Formula,
}

fn vocab() -> Vocab {
    let mut agents = AgentTable::declared(["p", "e", "j"]);
    let mut f = |s: &str| parse_formula_with(s, &mut agents).expect(s);
    let contract = f("A(winfirst_e <-> O[a]_e pay)");
    let court = f("true_10((~win_p <-> winfirst_e) & (win_p -> O[verdict_p]_e pay) & (~win_p -> ~O[verdict_e]_e pay))");
    let contract_r =
        f("A((X ~O[a]_e pay W winfirst_e) & (winfirst_e -> (X O[a]_e pay W pay)))");
    let court_r = f("true_10((~win_p <-> winfirst_e) & (win_p -> (X O[verdict_p]_e pay W pay)) & (~win_p -> G ~O[verdict_e]_e pay))");
    let psue = f("A(P[a]_p sue_p <-> Ys(~pay S winfirst_e) & ~pay)");
    let no_win_first = f("true_5(H ~winfirst_e)");
    let no_win_first_strict = f("true_10(H Yw ~winfirst_e)");
    let past_looking = f("true_10(H Yw ~winfirst_e -> ~win_p)");
    let judge2_rule = f("true_15(Ys(~pay S winfirst_e) & ~pay -> winsecond_p)");
    let contract_proj = f("A(winfirst_e <-> O_e pay)");
    let court_proj =
        f("true_10((~win_p <-> winfirst_e) & (win_p -> O_e pay) & (~win_p -> ~O_e pay))");
    let time10 = f("time=10");
    let p_goal = f("O[verdict_p]_e pay | O[a]_e pay");
    let e_goal = f("~O[a]_e pay | ~O[verdict_e]_e pay");
    let rp_goal = f("(X O[verdict_p]_e pay W pay) | (X O[a]_e pay W pay)");
    let re_goal = f("X ~O[a]_e pay | X ~O[verdict_e]_e pay");
    Vocab {
        agents,
        contract,
        court,
        contract_r,
        court_r,
        psue,
        no_win_first,
        no_win_first_strict,
        past_looking,
        judge2_rule,
        contract_proj,
        court_proj,
        time10,
        p_goal,
        e_goal,
        rp_goal,
        re_goal,
    }
}

fn fm(agents: &AgentTable, s: &str) -> Formula {
    let mut table = agents.clone();
    parse_formula_with(s, &mut table).expect(s)
}

/// Strip one boxdot: the inner body of an `A`-rooted assumption.
fn body_of(f: &Formula) -> Formula {
    match f {
        Formula::Boxdot(inner) => (**inner).clone(),
        _ => panic!("expected a boxdot-rooted assumption"),
    }
}

/// `unfold:<name>`: the theorem `A body -> body` for an always-rooted
/// assumption.
fn unfold_script(name: &str, assumption: &Formula) -> ProofScript {
    let mut b = ScriptBuilder::new(&format!("unfold:{name}"));
    emit_boxdot_elim(&mut b, &body_of(assumption));
    b.finish()
}

/// Support bundle shared by the proof-bearing cases.
fn common_support(v: &Vocab) -> Vec<ProofScript> {
    let mut out = vec![
        unfold_script("contract", &v.contract),
        unfold_script("court", &v.court),
        unfold_script("contract'", &v.contract_r),
        unfold_script("court'", &v.court_r),
        unfold_script("psue", &v.psue),
        unfold_script("no-win-first", &v.no_win_first),
        unfold_script("no-win-first'", &v.no_win_first_strict),
        unfold_script("past-looking", &v.past_looking),
        unfold_script("judge2-rule", &v.judge2_rule),
        unfold_script("contract-proj", &v.contract_proj),
        unfold_script("court-proj", &v.court_proj),
    ];
    // Weak-until unfolding at the contract instance and the box step for
    // the refined argument.
    let mut b = ScriptBuilder::new("w-unfold:agreement");
    emit_weak_until_unfold(
        &mut b,
        &fm(&v.agents, "X ~O[a]_e pay"),
        &fm(&v.agents, "winfirst_e"),
    );
    out.push(b.finish());
    let mut b = ScriptBuilder::new("box-step:verdict-e");
    emit_box_step(&mut b, &fm(&v.agents, "~O[verdict_e]_e pay"));
    out.push(b.finish());
    out
}

// ---------------------------------------------------------------------------
// Headline scripts.
// ---------------------------------------------------------------------------

fn protagoras_script(v: &Vocab) -> ProofScript {
    let mut b = ScriptBuilder::new("protagoras-v1");
    let l1 = b.hyp(v.time10.clone());
    let l2 = b.taut(
        vec![Cite::Line(l1), Cite::Hyp(v.court.clone()), Cite::Ref("unfold:court".into())],
        fm(&v.agents, "win_p -> O[verdict_p]_e pay"),
    );
    let l3 = b.taut(
        vec![Cite::Line(l1), Cite::Hyp(v.court.clone()), Cite::Ref("unfold:court".into())],
        fm(&v.agents, "~win_p -> winfirst_e"),
    );
    let l4 = b.taut(
        vec![Cite::Hyp(v.contract.clone()), Cite::Ref("unfold:contract".into())],
        fm(&v.agents, "winfirst_e -> O[a]_e pay"),
    );
    let l5 = b.taut(
        vec![Cite::Line(l3), Cite::Line(l4)],
        fm(&v.agents, "~win_p -> O[a]_e pay"),
    );
    let l6 = b.taut(vec![], fm(&v.agents, "win_p | ~win_p"));
    b.taut(
        vec![Cite::Line(l2), Cite::Line(l5), Cite::Line(l6)],
        v.p_goal.clone(),
    );
    b.finish_with_goal(
        vec![v.contract.clone(), v.court.clone(), v.time10.clone()],
        v.p_goal.clone(),
    )
}

fn euathlus_script(v: &Vocab) -> ProofScript {
    let mut b = ScriptBuilder::new("euathlus-v1");
    let l1 = b.hyp(v.time10.clone());
    let l2 = b.taut(
        vec![Cite::Line(l1), Cite::Hyp(v.court.clone()), Cite::Ref("unfold:court".into())],
        fm(&v.agents, "win_p -> ~winfirst_e"),
    );
    let l3 = b.taut(
        vec![Cite::Hyp(v.contract.clone()), Cite::Ref("unfold:contract".into())],
        fm(&v.agents, "~winfirst_e -> ~O[a]_e pay"),
    );
    let l4 = b.taut(
        vec![Cite::Line(l2), Cite::Line(l3)],
        fm(&v.agents, "win_p -> ~O[a]_e pay"),
    );
    let l5 = b.taut(
        vec![Cite::Line(l1), Cite::Hyp(v.court.clone()), Cite::Ref("unfold:court".into())],
        fm(&v.agents, "~win_p -> ~O[verdict_e]_e pay"),
    );
    let l6 = b.taut(vec![], fm(&v.agents, "win_p | ~win_p"));
    b.taut(
        vec![Cite::Line(l4), Cite::Line(l5), Cite::Line(l6)],
        v.e_goal.clone(),
    );
    b.finish_with_goal(
        vec![v.contract.clone(), v.court.clone(), v.time10.clone()],
        v.e_goal.clone(),
    )
}

fn sdl_bottom_script(v: &Vocab) -> ProofScript {
    let mut b = ScriptBuilder::new("sdl-bottom");
    let l1 = b.hyp(v.time10.clone());
    let l2 = b.taut(
        vec![
            Cite::Hyp(v.contract_proj.clone()),
            Cite::Ref("unfold:contract-proj".into()),
        ],
        fm(&v.agents, "winfirst_e <-> O_e pay"),
    );
    let l3 = b.taut(
        vec![
            Cite::Line(l1),
            Cite::Hyp(v.court_proj.clone()),
            Cite::Ref("unfold:court-proj".into()),
        ],
        fm(
            &v.agents,
            "(~win_p <-> winfirst_e) & (win_p -> O_e pay) & (~win_p -> ~O_e pay)",
        ),
    );
    b.taut(vec![Cite::Line(l2), Cite::Line(l3)], Formula::Bottom);
    b.finish_with_goal(
        vec![v.contract_proj.clone(), v.court_proj.clone(), v.time10.clone()],
        Formula::Bottom,
    )
}

fn refined_protagoras_script(v: &Vocab) -> ProofScript {
    let mut b = ScriptBuilder::new("refined-protagoras");
    let l1 = b.hyp(v.time10.clone());
    let l2 = b.taut(
        vec![Cite::Line(l1), Cite::Hyp(v.court_r.clone()), Cite::Ref("unfold:court'".into())],
        fm(&v.agents, "win_p -> (X O[verdict_p]_e pay W pay)"),
    );
    let l3 = b.taut(
        vec![Cite::Line(l1), Cite::Hyp(v.court_r.clone()), Cite::Ref("unfold:court'".into())],
        fm(&v.agents, "~win_p -> winfirst_e"),
    );
    let l4 = b.taut(
        vec![Cite::Hyp(v.contract_r.clone()), Cite::Ref("unfold:contract'".into())],
        fm(&v.agents, "winfirst_e -> (X O[a]_e pay W pay)"),
    );
    let l5 = b.taut(
        vec![Cite::Line(l3), Cite::Line(l4)],
        fm(&v.agents, "~win_p -> (X O[a]_e pay W pay)"),
    );
    let l6 = b.taut(vec![], fm(&v.agents, "win_p | ~win_p"));
    b.taut(
        vec![Cite::Line(l2), Cite::Line(l5), Cite::Line(l6)],
        v.rp_goal.clone(),
    );
    b.finish_with_goal(
        vec![v.contract_r.clone(), v.court_r.clone(), v.time10.clone()],
        v.rp_goal.clone(),
    )
}

fn refined_euathlus_script(v: &Vocab) -> ProofScript {
    let mut b = ScriptBuilder::new("refined-euathlus");
    let l1 = b.hyp(v.time10.clone());
    let l2 = b.taut(
        vec![Cite::Line(l1), Cite::Hyp(v.court_r.clone()), Cite::Ref("unfold:court'".into())],
        fm(&v.agents, "win_p -> ~winfirst_e"),
    );
    let l3 = b.taut(
        vec![Cite::Hyp(v.contract_r.clone()), Cite::Ref("unfold:contract'".into())],
        fm(&v.agents, "X ~O[a]_e pay W winfirst_e"),
    );
    let l4 = b.taut(
        vec![Cite::Line(l3)],
        fm(&v.agents, "win_p -> (X ~O[a]_e pay W winfirst_e)"),
    );
    let l5 = b.taut(
        vec![Cite::Line(l2), Cite::Line(l4)],
        fm(&v.agents, "win_p -> ~winfirst_e & (X ~O[a]_e pay W winfirst_e)"),
    );
    let l6 = b.taut(
        vec![Cite::Line(l5), Cite::Ref("w-unfold:agreement".into())],
        fm(
            &v.agents,
            "win_p -> X ~O[a]_e pay & X(X ~O[a]_e pay W winfirst_e)",
        ),
    );
    let l7 = b.taut(vec![Cite::Line(l6)], fm(&v.agents, "win_p -> X ~O[a]_e pay"));
    let l8 = b.taut(
        vec![Cite::Line(l1), Cite::Hyp(v.court_r.clone()), Cite::Ref("unfold:court'".into())],
        fm(&v.agents, "~win_p -> G ~O[verdict_e]_e pay"),
    );
    let l9 = b.taut(
        vec![Cite::Line(l8), Cite::Ref("box-step:verdict-e".into())],
        fm(&v.agents, "~win_p -> X ~O[verdict_e]_e pay"),
    );
    let l10 = b.taut(vec![], fm(&v.agents, "win_p | ~win_p"));
    b.taut(
        vec![Cite::Line(l7), Cite::Line(l9), Cite::Line(l10)],
        v.re_goal.clone(),
    );
    b.finish_with_goal(
        vec![v.contract_r.clone(), v.court_r.clone(), v.time10.clone()],
        v.re_goal.clone(),
    )
}

/// `contract, no-win-first |- true_5(H ~O[a]_e pay)`.
fn no_obligation_script(v: &Vocab) -> ProofScript {
    let mut b = ScriptBuilder::new("no-obligation-before-5");
    let goal = fm(&v.agents, "true_5(H ~O[a]_e pay)");
    let s1 = b.taut(
        vec![Cite::Ref("unfold:contract".into())],
        fm(
            &v.agents,
            "A(winfirst_e <-> O[a]_e pay) & ~winfirst_e -> ~O[a]_e pay",
        ),
    );
    let s2 = b.nec_sofar(s1);
    let cw = fm(&v.agents, "A(winfirst_e <-> O[a]_e pay) & ~winfirst_e");
    let s3 = b.taut(
        vec![],
        Formula::implies(
            v.contract.clone(),
            Formula::implies(fm(&v.agents, "~winfirst_e"), cw.clone()),
        ),
    );
    let s4 = b.nec_sofar(s3);
    let s5 = b.axiom(
        crate::axioms::AxiomName::SofarK,
        crate::axioms::instantiate(
            crate::axioms::AxiomName::SofarK,
            &v.contract,
            &Formula::implies(fm(&v.agents, "~winfirst_e"), cw.clone()),
            &crate::syntax::Term::var("$x"),
            &crate::syntax::Term::var("$x"),
            crate::syntax::Agent(0),
        ),
    );
    let s6 = b.axiom(
        crate::axioms::AxiomName::SofarK,
        crate::axioms::instantiate(
            crate::axioms::AxiomName::SofarK,
            &fm(&v.agents, "~winfirst_e"),
            &cw,
            &crate::syntax::Term::var("$x"),
            &crate::syntax::Term::var("$x"),
            crate::syntax::Agent(0),
        ),
    );
    let s7 = b.axiom(
        crate::axioms::AxiomName::SofarK,
        crate::axioms::instantiate(
            crate::axioms::AxiomName::SofarK,
            &cw,
            &fm(&v.agents, "~O[a]_e pay"),
            &crate::syntax::Term::var("$x"),
            &crate::syntax::Term::var("$x"),
            crate::syntax::Agent(0),
        ),
    );
    let s8 = b.taut(
        vec![Cite::Line(s2), Cite::Line(s4), Cite::Line(s5), Cite::Line(s6), Cite::Line(s7)],
        Formula::implies(
            Formula::and(
                Formula::sofar(v.contract.clone()),
                fm(&v.agents, "H ~winfirst_e"),
            ),
            fm(&v.agents, "H ~O[a]_e pay"),
        ),
    );
    let s9 = b.hyp(v.contract.clone());
    let s10 = emit_boxdot_idem(&mut b, &body_of(&v.contract));
    let s11 = b.taut(
        vec![Cite::Line(s9), Cite::Line(s10)],
        Formula::sofar(v.contract.clone()),
    );
    let s12 = b.taut(
        vec![Cite::Hyp(v.no_win_first.clone()), Cite::Ref("unfold:no-win-first".into())],
        fm(&v.agents, "time=5 -> H ~winfirst_e"),
    );
    let s13 = b.taut(
        vec![Cite::Line(s8), Cite::Line(s11), Cite::Line(s12)],
        fm(&v.agents, "time=5 -> H ~O[a]_e pay"),
    );
    b.boxdot_lift(s13);
    b.finish_with_goal(vec![v.contract.clone(), v.no_win_first.clone()], goal)
}

/// `psue, no-win-first |- true_5(~P[a]_p sue_p)`: the nine numbered lines
/// and the lifting.
fn psue_not_permitted_script(v: &Vocab) -> ProofScript {
    let pse_body = body_of(&v.psue);
    let sofar_no_wf = fm(&v.agents, "H ~winfirst_e");
    let mut b = ScriptBuilder::new("psue-not-permitted");
    let l1 = b.hyp(pse_body.clone());
    let l2 = b.hyp(sofar_no_wf.clone());
    let l3 = b.taut(
        vec![Cite::Line(l2), Cite::Ref("sofar-unfold:no-winfirst".into())],
        fm(&v.agents, "Yw H ~winfirst_e"),
    );
    let l4 = b.taut(
        vec![Cite::Line(l3)],
        fm(&v.agents, "Yw ~P- ~ ~winfirst_e"),
    );
    let l5 = b.taut(
        vec![Cite::Line(l4), Cite::Ref("rm:once-double-negation".into())],
        fm(&v.agents, "Yw ~P- winfirst_e"),
    );
    let l6 = b.taut(vec![Cite::Line(l5)], fm(&v.agents, "~Ys P- winfirst_e"));
    let l7 = b.taut(
        vec![Cite::Line(l6), Cite::Ref("rm:sprev-since1".into())],
        fm(&v.agents, "~Ys(~pay S winfirst_e)"),
    );
    let l8 = b.taut(
        vec![Cite::Line(l7)],
        fm(&v.agents, "~Ys(~pay S winfirst_e) | pay"),
    );
    let l9 = b.taut(
        vec![Cite::Line(l1), Cite::Line(l8)],
        fm(&v.agents, "~P[a]_p sue_p"),
    );
    let l10 = b.deduce(l9, sofar_no_wf);
    let l11 = b.taut(
        vec![Cite::Hyp(v.no_win_first.clone()), Cite::Ref("unfold:no-win-first".into())],
        fm(&v.agents, "time=5 -> H ~winfirst_e"),
    );
    let l12 = b.taut(
        vec![Cite::Line(l10), Cite::Line(l11)],
        fm(&v.agents, "time=5 -> ~P[a]_p sue_p"),
    );
    b.boxdot_lift(l12);
    b.finish_with_goal(
        vec![v.psue.clone(), v.no_win_first.clone()],
        fm(&v.agents, "true_5(~P[a]_p sue_p)"),
    )
}

/// Support for the not-permitted argument: the rules of the admissible-rule
/// lemma at the needed instances.
fn psue_support(v: &Vocab) -> Vec<ProofScript> {
    let mut out = Vec::new();
    // H ~wf -> Yw H ~wf (sofar unfolding at the body).
    let mut b = ScriptBuilder::new("sofar-unfold:no-winfirst");
    let u = emit_sofar_unfold(&mut b, &fm(&v.agents, "~winfirst_e"));
    b.taut(
        vec![Cite::Line(u)],
        fm(&v.agents, "H ~winfirst_e -> Yw H ~winfirst_e"),
    );
    out.push(b.finish());
    // Yw ~P- ~~wf -> Yw ~P- wf (monotone lifts of double negation).
    let mut b = ScriptBuilder::new("rm:once-double-negation");
    let t1 = b.taut(vec![], fm(&v.agents, "winfirst_e -> ~ ~winfirst_e"));
    let o1 = b.once_rm(t1);
    let t2 = b.taut(
        vec![Cite::Line(o1)],
        fm(&v.agents, "~P- ~ ~winfirst_e -> ~P- winfirst_e"),
    );
    let w1 = b.wprev_rm(t2);
    let _ = w1;
    out.push(b.finish());
    // Ys(~pay S wf) -> Ys P- wf (since entails once, under strong previous).
    let mut b = ScriptBuilder::new("rm:sprev-since1");
    let a = b.axiom(
        crate::axioms::AxiomName::Since1,
        crate::axioms::instantiate(
            crate::axioms::AxiomName::Since1,
            &fm(&v.agents, "~pay"),
            &fm(&v.agents, "winfirst_e"),
            &crate::syntax::Term::var("$x"),
            &crate::syntax::Term::var("$x"),
            crate::syntax::Agent(0),
        ),
    );
    let t = b.taut(
        vec![Cite::Line(a)],
        fm(&v.agents, "~P- winfirst_e -> ~(~pay S winfirst_e)"),
    );
    let w = b.wprev_rm(t);
    b.taut(
        vec![Cite::Line(w)],
        fm(&v.agents, "Ys(~pay S winfirst_e) -> Ys P- winfirst_e"),
    );
    out.push(b.finish());
    out
}

/// The walk from instant 10 to 15: shared by the permitted-to-sue lemma and
/// the second verdict.
fn sue_walk_support(v: &Vocab) -> Vec<ProofScript> {
    let mut out = Vec::new();
    let chain = fm(&v.agents, "~pay S winfirst_e");
    let no_pay = fm(&v.agents, "~pay");
    // Elimination for the first hypothesis.
    let mut b = ScriptBuilder::new("unfold:true10-winfirst");
    emit_boxdot_elim(&mut b, &fm(&v.agents, "time=10 -> winfirst_e"));
    out.push(b.finish());
    // The since fixpoint instance.
    let mut b = ScriptBuilder::new("s2:pay-winfirst");
    b.axiom(
        crate::axioms::AxiomName::Since2,
        crate::axioms::since2_instance(&no_pay, &fm(&v.agents, "winfirst_e")),
    );
    out.push(b.finish());
    // One time-shift per step of the walk.
    for m in 10..=14usize {
        out.push(ttp(8, m, &chain, &format!("ttp8:{m}")).unwrap());
    }
    // The no-payment statement walked back from 15 to 11, then read off at
    // each instant along the way.
    let mut b = ScriptBuilder::new("sofar-down:15-11");
    emit_sofar_down(&mut b, 15, 11, &no_pay);
    out.push(b.finish());
    let mut b = ScriptBuilder::new("sofar-at:11-11");
    emit_sofar_at(&mut b, 11, 11, &no_pay);
    out.push(b.finish());
    for k in 12..=15usize {
        let mut b = ScriptBuilder::new(&format!("sofar-at:15-{k}"));
        emit_sofar_at(&mut b, 15, k, &no_pay);
        out.push(b.finish());
    }
    out
}

/// The 10-to-15 walk of the permitted-to-sue argument, appended to a
/// builder. Returns the index of
/// `time=15 -> Ys(~pay S winfirst_e) & ~pay`.
fn emit_sue_walk(b: &mut ScriptBuilder, v: &Vocab, h1: usize, h2: usize) -> usize {
    let l5 = b.taut(
        vec![Cite::Line(h1), Cite::Ref("unfold:true10-winfirst".into())],
        fm(&v.agents, "time=10 -> winfirst_e"),
    );
    let l6 = b.taut(
        vec![Cite::Line(l5), Cite::Ref("s2:pay-winfirst".into())],
        fm(&v.agents, "time=10 -> (~pay S winfirst_e)"),
    );
    let mut cur = l6;
    for m in 10..=14usize {
        let hyps = b.hypotheses_of(cur);
        let shifted = b.lemma(
            &format!("ttp8:{m}"),
            vec![cur],
            hyps,
            Formula::implies(
                crate::syntax::time_literal(m + 1),
                fm(&v.agents, "Ys(~pay S winfirst_e)"),
            ),
        );
        let no_pay = if m == 10 {
            // The first instant spells out the extraction: walk the sofar
            // statement back, then read it off.
            let down = b.taut(
                vec![Cite::Line(h2), Cite::Ref("sofar-down:15-11".into())],
                fm(&v.agents, "true_11(H ~pay)"),
            );
            b.taut(
                vec![Cite::Line(down), Cite::Ref("sofar-at:11-11".into())],
                fm(&v.agents, "time=11 -> ~pay"),
            )
        } else {
            b.taut(
                vec![Cite::Line(h2), Cite::Ref(format!("sofar-at:15-{}", m + 1))],
                Formula::implies(crate::syntax::time_literal(m + 1), fm(&v.agents, "~pay")),
            )
        };
        if m < 14 {
            cur = b.taut(
                vec![Cite::Line(shifted), Cite::Line(no_pay), Cite::Ref("s2:pay-winfirst".into())],
                Formula::implies(
                    crate::syntax::time_literal(m + 1),
                    fm(&v.agents, "~pay S winfirst_e"),
                ),
            );
        } else {
            cur = b.taut(
                vec![Cite::Line(shifted), Cite::Line(no_pay)],
                fm(&v.agents, "time=15 -> Ys(~pay S winfirst_e) & ~pay"),
            );
        }
    }
    cur
}

/// The 24-line permitted-to-sue-at-15 script.
fn sue_permitted_script(v: &Vocab) -> ProofScript {
    let mut b = ScriptBuilder::new("sue-permitted-15");
    let h1 = b.hyp(fm(&v.agents, "true_10(winfirst_e)"));
    let h2 = b.hyp(fm(&v.agents, "true_15(H ~pay)"));
    let h3 = b.hyp(v.psue.clone());
    let _h4 = b.hyp(fm(&v.agents, "time=15"));
    let l23 = emit_sue_walk(&mut b, v, h1, h2);
    let l24 = b.taut(
        vec![Cite::Line(h3), Cite::Line(l23), Cite::Ref("unfold:psue".into())],
        fm(&v.agents, "time=15 -> P[a]_p sue_p"),
    );
    b.boxdot_lift(l24);
    b.finish_with_goal(
        vec![
            fm(&v.agents, "true_10(winfirst_e)"),
            fm(&v.agents, "true_15(H ~pay)"),
            v.psue.clone(),
            fm(&v.agents, "time=15"),
        ],
        fm(&v.agents, "true_15(P[a]_p sue_p)"),
    )
}

/// Judge's verdict in the first case: six lines plus lifting.
fn judge_first_script(v: &Vocab) -> ProofScript {
    let mut b = ScriptBuilder::new("judge-first-case");
    let body = fm(&v.agents, "~win_p & winfirst_e & O[a]_e pay");
    let l1 = b.hyp(v.time10.clone());
    let l2 = b.taut(
        vec![
            Cite::Line(l1),
            Cite::Hyp(v.no_win_first_strict.clone()),
            Cite::Ref("unfold:no-win-first'".into()),
        ],
        fm(&v.agents, "H Yw ~winfirst_e"),
    );
    let l3 = b.taut(
        vec![
            Cite::Line(l1),
            Cite::Line(l2),
            Cite::Hyp(v.past_looking.clone()),
            Cite::Ref("unfold:past-looking".into()),
        ],
        fm(&v.agents, "~win_p"),
    );
    let l4 = b.taut(
        vec![
            Cite::Line(l1),
            Cite::Line(l3),
            Cite::Hyp(v.court.clone()),
            Cite::Ref("unfold:court".into()),
        ],
        fm(&v.agents, "winfirst_e"),
    );
    let l5 = b.taut(
        vec![Cite::Line(l4), Cite::Hyp(v.contract.clone()), Cite::Ref("unfold:contract".into())],
        fm(&v.agents, "O[a]_e pay"),
    );
    let l6 = b.taut(
        vec![Cite::Line(l3), Cite::Line(l4), Cite::Line(l5)],
        body.clone(),
    );
    let l7 = b.deduce(l6, v.time10.clone());
    b.boxdot_lift(l7);
    b.finish_with_goal(
        vec![
            v.contract.clone(),
            v.court.clone(),
            v.no_win_first_strict.clone(),
            v.past_looking.clone(),
        ],
        fm(&v.agents, "true_10(~win_p & winfirst_e & O[a]_e pay)"),
    )
}

/// Judge's verdict in the second case, from the walk and the award rule.
fn judge_second_script(v: &Vocab) -> ProofScript {
    let mut b = ScriptBuilder::new("judge-second-case");
    let h1 = b.hyp(fm(&v.agents, "true_10(winfirst_e)"));
    let h2 = b.hyp(fm(&v.agents, "true_15(H ~pay)"));
    let h3 = b.hyp(v.judge2_rule.clone());
    let l = emit_sue_walk(&mut b, v, h1, h2);
    let l2 = b.taut(
        vec![Cite::Line(h3), Cite::Line(l), Cite::Ref("unfold:judge2-rule".into())],
        fm(&v.agents, "time=15 -> winsecond_p"),
    );
    b.boxdot_lift(l2);
    b.finish_with_goal(
        vec![
            fm(&v.agents, "true_10(winfirst_e)"),
            fm(&v.agents, "true_15(H ~pay)"),
            v.judge2_rule.clone(),
        ],
        fm(&v.agents, "true_15(winsecond_p)"),
    )
}

// ---------------------------------------------------------------------------
// Models.
// ---------------------------------------------------------------------------

fn atoms(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn all_states(n: usize) -> StateSet {
    (0..n).fold(0, |acc, i| acc | (1 << i))
}

fn timeline_states(extra: &[&str]) -> Vec<String> {
    let mut out: Vec<String> = (0..=16).map(|i| format!("w{i}")).collect();
    out.extend(extra.iter().map(|s| s.to_string()));
    out
}

fn timeline_run() -> LassoRun {
    LassoRun::new((0..16).collect(), vec![16])
}

fn rules(spec: Vec<(StatePattern, TermPattern, Vec<StateSet>)>) -> NeighborhoodTable {
    NeighborhoodTable {
        rules: spec
            .into_iter()
            .map(|(state, term, family)| NeighborhoodRule { state, term, family })
            .collect(),
    }
}

/// The timeline model carrying the simple contract and court: a single run
/// w0 w1 ... with payment everywhere, the first win only at instant 10, and
/// the agreement term active only there.
fn model_i1(v: &Vocab) -> NeighborhoodModel {
    let n = 17;
    let s = all_states(n);
    let term_a = TermPattern::Exact(crate::syntax::Term::var("a"));
    let nbr = rules(vec![(StatePattern::Any, TermPattern::AnyTerm, vec![s])]);
    let nbr_o = rules(vec![
        (StatePattern::One(10), term_a.clone(), vec![s]),
        (StatePattern::Any, term_a, vec![]),
        (StatePattern::Any, TermPattern::AnyVar, vec![]),
        (StatePattern::Any, TermPattern::AnyTerm, vec![s]),
    ]);
    let mut valuation: Vec<BTreeSet<String>> = (0..n).map(|_| atoms(&["pay"])).collect();
    valuation[10] = atoms(&["pay", "winfirst_e"]);
    NeighborhoodModel {
        name: "I1".into(),
        states: timeline_states(&[]),
        agents: v.agents.clone(),
        runs: vec![timeline_run()],
        nbr: vec![nbr.clone(), nbr.clone(), nbr.clone()],
        nbr_o: vec![nbr_o.clone(), nbr_o.clone(), nbr_o],
        valuation,
        nonnormal: vec![NonNormalValuation::default(); n],
    }
}

/// The one-state constant run with the empty valuation: the refined
/// contract holds while a first win never comes.
fn model_i2(v: &Vocab) -> NeighborhoodModel {
    let s = 0b1;
    let nbr = rules(vec![(StatePattern::Any, TermPattern::AnyTerm, vec![s])]);
    NeighborhoodModel {
        name: "I2".into(),
        states: vec!["w".into()],
        agents: v.agents.clone(),
        runs: vec![LassoRun::new(vec![], vec![0])],
        nbr: vec![nbr.clone(), nbr.clone(), nbr.clone()],
        nbr_o: vec![nbr.clone(), nbr.clone(), nbr],
        valuation: vec![BTreeSet::new()],
        nonnormal: vec![NonNormalValuation::default()],
    }
}

/// The timeline with the first win and payment everywhere and the agreement
/// active at every instant.
fn model_i3(v: &Vocab) -> NeighborhoodModel {
    let n = 17;
    let s = all_states(n);
    let term_a = TermPattern::Exact(crate::syntax::Term::var("a"));
    let nbr = rules(vec![(StatePattern::Any, TermPattern::AnyTerm, vec![s])]);
    let nbr_o = rules(vec![
        (StatePattern::Any, term_a, vec![s]),
        (StatePattern::Any, TermPattern::AnyVar, vec![]),
        (StatePattern::Any, TermPattern::AnyTerm, vec![s]),
    ]);
    NeighborhoodModel {
        name: "I3".into(),
        states: timeline_states(&[]),
        agents: v.agents.clone(),
        runs: vec![timeline_run()],
        nbr: vec![nbr.clone(), nbr.clone(), nbr.clone()],
        nbr_o: vec![nbr_o.clone(), nbr_o.clone(), nbr_o],
        valuation: (0..n).map(|_| atoms(&["winfirst_e", "pay"])).collect(),
        nonnormal: vec![NonNormalValuation::default(); n],
    }
}

/// The timeline where the teacher wins and nobody ever pays: a non-normal
/// state carries the payment proposition, so the verdict-driven obligation
/// holds without payment ever being true on the run.
fn model_i4(v: &Vocab) -> NeighborhoodModel {
    let n = 18; // w0..w16 plus v
    let vstate: StateSet = 1 << 17;
    let s = all_states(n);
    let term_vp = TermPattern::Exact(crate::syntax::Term::var("verdict_p"));
    let nbr = rules(vec![(StatePattern::Any, TermPattern::AnyTerm, vec![s])]);
    let nbr_o = rules(vec![
        (StatePattern::Any, term_vp, vec![vstate]),
        (StatePattern::Any, TermPattern::AnyVar, vec![]),
        (StatePattern::Any, TermPattern::AnyConst, vec![]),
        (StatePattern::Any, TermPattern::AnyTerm, vec![vstate, s]),
    ]);
    let mut valuation: Vec<BTreeSet<String>> = (0..n).map(|_| atoms(&["win_p"])).collect();
    valuation[17] = BTreeSet::new();
    let mut nonnormal = vec![NonNormalValuation::default(); n];
    nonnormal[17] = NonNormalValuation {
        formulas: [fm(&v.agents, "pay").desugar()].into_iter().collect(),
        schemas: vec![SchemaPattern::ObligatedFactivityInstances],
    };
    NeighborhoodModel {
        name: "I4".into(),
        states: timeline_states(&["v"]),
        agents: v.agents.clone(),
        runs: vec![timeline_run()],
        nbr: vec![nbr.clone(), nbr.clone(), nbr.clone()],
        nbr_o: vec![nbr_o.clone(), nbr_o.clone(), nbr_o],
        valuation,
        nonnormal,
    }
}

/// Regularity fails: the body and its doubled conjunction have different
/// truth sets because the non-normal state lists only one of them.
fn cm_regularity(agents: &AgentTable) -> NeighborhoodModel {
    let w: StateSet = 0b01;
    let s: StateSet = 0b11;
    let nbr = rules(vec![
        (StatePattern::Any, TermPattern::AnyVar, vec![w]),
        (StatePattern::Any, TermPattern::AnyConst, vec![w]),
        (StatePattern::Any, TermPattern::AnyTerm, vec![w, s]),
    ]);
    let nbr_o = rules(vec![(StatePattern::Any, TermPattern::AnyTerm, vec![w, s])]);
    let pp = fm(agents, "p & p").desugar();
    NeighborhoodModel {
        name: "CM-regularity".into(),
        states: vec!["w".into(), "v".into()],
        agents: agents.clone(),
        runs: vec![LassoRun::new(vec![], vec![0])],
        nbr: vec![nbr.clone()],
        nbr_o: vec![nbr_o],
        valuation: vec![atoms(&["p"]), BTreeSet::new()],
        nonnormal: vec![
            NonNormalValuation::default(),
            NonNormalValuation { formulas: [pp].into_iter().collect(), schemas: vec![] },
        ],
    }
}

/// An obligation of the impossible: the non-normal state makes falsity
/// "true", so its singleton is an admissible obligation.
fn cm_consistency(agents: &AgentTable) -> NeighborhoodModel {
    let w: StateSet = 0b01;
    let vset: StateSet = 0b10;
    let s: StateSet = 0b11;
    let nbr = rules(vec![(StatePattern::Any, TermPattern::AnyTerm, vec![w, s])]);
    let nbr_o = rules(vec![(StatePattern::Any, TermPattern::AnyTerm, vec![vset, s])]);
    NeighborhoodModel {
        name: "CM-consistency".into(),
        states: vec!["w".into(), "v".into()],
        agents: agents.clone(),
        runs: vec![LassoRun::new(vec![], vec![0])],
        nbr: vec![nbr],
        nbr_o: vec![nbr_o],
        valuation: vec![BTreeSet::new(), BTreeSet::new()],
        nonnormal: vec![
            NonNormalValuation::default(),
            NonNormalValuation {
                formulas: [Formula::Bottom].into_iter().collect(),
                schemas: vec![SchemaPattern::ObligatedFactivityInstances],
            },
        ],
    }
}

/// Conflicting obligations under different reasons are satisfiable. The
/// families at compound terms also carry the closure conclusions (the
/// doubleton with the bridge state, and the empty proposition on the
/// normative side), which the application conditions force over the case
/// universe.
fn cm_strong_no_conflicts(agents: &AgentTable) -> NeighborhoodModel {
    let w: StateSet = 0b001;
    let wv: StateSet = 0b011;
    let vu: StateSet = 0b110;
    let vset: StateSet = 0b010;
    let s: StateSet = 0b111;
    let x = TermPattern::Exact(crate::syntax::Term::var("x"));
    let y = TermPattern::Exact(crate::syntax::Term::var("y"));
    let nbr = rules(vec![
        (StatePattern::Any, TermPattern::AnyVar, vec![w, s]),
        (StatePattern::Any, TermPattern::AnyConst, vec![w, s]),
        (StatePattern::Any, TermPattern::AnyTerm, vec![w, wv, s]),
    ]);
    let nbr_o = rules(vec![
        (StatePattern::Any, x, vec![wv]),
        (StatePattern::Any, y, vec![vu]),
        (StatePattern::Any, TermPattern::AnyVar, vec![]),
        (StatePattern::Any, TermPattern::AnyConst, vec![]),
        (StatePattern::Any, TermPattern::AnyTerm, vec![0, vset, wv]),
    ]);
    let not_p = fm(agents, "~p").desugar();
    let p = fm(agents, "p").desugar();
    NeighborhoodModel {
        name: "CM-strong-noc".into(),
        states: vec!["w".into(), "v".into(), "u".into()],
        agents: agents.clone(),
        runs: vec![LassoRun::new(vec![], vec![0])],
        nbr: vec![nbr],
        nbr_o: vec![nbr_o],
        valuation: vec![atoms(&["p"]), BTreeSet::new(), BTreeSet::new()],
        nonnormal: vec![
            NonNormalValuation::default(),
            NonNormalValuation {
                formulas: [p, not_p.clone()].into_iter().collect(),
                schemas: vec![SchemaPattern::ObligatedFactivityInstances],
            },
            NonNormalValuation { formulas: [not_p].into_iter().collect(), schemas: vec![] },
        ],
    }
}

// ---------------------------------------------------------------------------
// Cases.
// ---------------------------------------------------------------------------

fn case_arguments_v1(v: &Vocab) -> CorpusCase {
    let i1 = model_i1(v);
    let gamma = [v.contract.clone(), v.court.clone(), v.time10.clone()];
    let uni = Universe::from_formulas(
        gamma.iter().chain([v.p_goal.clone(), v.e_goal.clone()].iter()),
    );
    let conj = Formula::and(
        Formula::and(v.contract.clone(), v.court.clone()),
        v.time10.clone(),
    );
    CorpusCase {
        name: "arguments-v1".into(),
        description: "Both closing arguments derive, and the assumptions stay jointly satisfiable: the two obligations live under different reasons.".into(),
        agents: v.agents.clone(),
        assumptions: vec![
            ("contract".into(), v.contract.clone()),
            ("court".into(), v.court.clone()),
        ],
        support: common_support(v),
        scripts: vec![protagoras_script(v), euathlus_script(v)],
        neighborhood_models: vec![(i1, uni)],
        fitting_models: vec![],
        expectations: vec![
            Expectation::Proof { script: "protagoras-v1".into() },
            Expectation::Proof { script: "euathlus-v1".into() },
            Expectation::ValidateNbr { model: "I1".into() },
            Expectation::McNbr {
                model: "I1".into(),
                run: 0,
                pos: 10,
                formula: conj,
                expect: true,
            },
            Expectation::McNbr {
                model: "I1".into(),
                run: 0,
                pos: 10,
                formula: v.p_goal.clone(),
                expect: true,
            },
            Expectation::McNbr {
                model: "I1".into(),
                run: 0,
                pos: 10,
                formula: v.e_goal.clone(),
                expect: true,
            },
        ],
    }
}

fn case_sdl_projection(v: &Vocab) -> CorpusCase {
    CorpusCase {
        name: "sdl-projection".into(),
        description: "Erasing the reasons collapses the two obligations into one, and the same arguments close into a contradiction.".into(),
        agents: v.agents.clone(),
        assumptions: vec![
            ("contract-proj".into(), v.contract_proj.clone()),
            ("court-proj".into(), v.court_proj.clone()),
        ],
        support: common_support(v),
        scripts: vec![sdl_bottom_script(v)],
        neighborhood_models: vec![],
        fitting_models: vec![],
        expectations: vec![
            Expectation::Proof { script: "sdl-bottom".into() },
            Expectation::Search {
                label: "projected-assumptions@10".into(),
                formulas: vec![v.contract_proj.clone(), v.court_proj.clone()],
                at: Some(10),
                bounds: SearchBounds::new(12, 2),
                expect_sat: false,
            },
            Expectation::Search {
                label: "justified-assumptions@10".into(),
                formulas: vec![v.contract.clone(), v.court.clone()],
                at: Some(10),
                bounds: SearchBounds::new(12, 2),
                expect_sat: true,
            },
        ],
    }
}

fn case_refined_v2(v: &Vocab) -> CorpusCase {
    let i2 = model_i2(v);
    let i3 = model_i3(v);
    let i4 = model_i4(v);
    let delta = [v.contract_r.clone(), v.court_r.clone()];
    let uni2 = Universe::from_formulas(
        [v.contract_r.clone(), fm(&v.agents, "F winfirst_e")].iter(),
    );
    let uni3 = Universe::from_formulas(delta.iter().chain([v.time10.clone()].iter()));
    let uni4 = Universe::from_formulas(delta.iter().chain(
        [v.time10.clone(), fm(&v.agents, "true_10(~pay)")].iter(),
    ));
    CorpusCase {
        name: "refined-v2".into(),
        description: "The interval reading of the obligations: weak until instead of until, and the same split verdicts stay consistent, even when payment never happens.".into(),
        agents: v.agents.clone(),
        assumptions: vec![
            ("contract'".into(), v.contract_r.clone()),
            ("court'".into(), v.court_r.clone()),
        ],
        support: common_support(v),
        scripts: vec![refined_protagoras_script(v), refined_euathlus_script(v)],
        neighborhood_models: vec![(i2, uni2), (i3, uni3), (i4, uni4)],
        fitting_models: vec![],
        expectations: vec![
            Expectation::Proof { script: "refined-protagoras".into() },
            Expectation::Proof { script: "refined-euathlus".into() },
            Expectation::ValidateNbr { model: "I2".into() },
            Expectation::McNbr {
                model: "I2".into(),
                run: 0,
                pos: 0,
                formula: v.contract_r.clone(),
                expect: true,
            },
            Expectation::McNbr {
                model: "I2".into(),
                run: 0,
                pos: 0,
                formula: fm(&v.agents, "F winfirst_e"),
                expect: false,
            },
            Expectation::ValidateNbr { model: "I3".into() },
            Expectation::McNbr {
                model: "I3".into(),
                run: 0,
                pos: 10,
                formula: Formula::and(
                    Formula::and(v.contract_r.clone(), v.court_r.clone()),
                    v.time10.clone(),
                ),
                expect: true,
            },
            Expectation::ValidateNbr { model: "I4".into() },
            Expectation::McNbr {
                model: "I4".into(),
                run: 0,
                pos: 10,
                formula: Formula::and(
                    Formula::and(
                        Formula::and(v.contract_r.clone(), v.court_r.clone()),
                        v.time10.clone(),
                    ),
                    fm(&v.agents, "true_10(~pay)"),
                ),
                expect: true,
            },
        ],
    }
}

fn case_permission_to_sue(v: &Vocab) -> CorpusCase {
    let mut support = common_support(v);
    support.extend(psue_support(v));
    support.extend(sue_walk_support(v));
    CorpusCase {
        name: "permission-to-sue".into(),
        description: "Permission to sue tracks the unpaid first win: absent before the first case, present by the second.".into(),
        agents: v.agents.clone(),
        assumptions: vec![
            ("psue".into(), v.psue.clone()),
            ("no-win-first".into(), v.no_win_first.clone()),
        ],
        support,
        scripts: vec![
            no_obligation_script(v),
            psue_not_permitted_script(v),
            sue_permitted_script(v),
        ],
        neighborhood_models: vec![],
        fitting_models: vec![],
        expectations: vec![
            Expectation::Proof { script: "no-obligation-before-5".into() },
            Expectation::Proof { script: "psue-not-permitted".into() },
            Expectation::Proof { script: "sue-permitted-15".into() },
        ],
    }
}

fn case_judge(v: &Vocab) -> CorpusCase {
    let mut support = common_support(v);
    support.extend(sue_walk_support(v));
    let i1 = model_i1(v);
    let judged = [
        v.contract.clone(),
        v.court.clone(),
        v.no_win_first_strict.clone(),
        v.past_looking.clone(),
    ];
    let uni = Universe::from_formulas(judged.iter());
    let conj = judged
        .iter()
        .skip(1)
        .fold(judged[0].clone(), |acc, f| Formula::and(acc, f.clone()));
    CorpusCase {
        name: "judge".into(),
        description: "A past-looking court decides for the student in the first case; the unpaid win then hands the teacher the second case.".into(),
        agents: v.agents.clone(),
        assumptions: vec![
            ("no-win-first'".into(), v.no_win_first_strict.clone()),
            ("past-looking".into(), v.past_looking.clone()),
            ("judge2-rule".into(), v.judge2_rule.clone()),
        ],
        support,
        scripts: vec![
            judge_first_script(v),
            sue_permitted_script(v),
            judge_second_script(v),
        ],
        neighborhood_models: vec![(i1, uni)],
        fitting_models: vec![],
        expectations: vec![
            Expectation::Proof { script: "judge-first-case".into() },
            Expectation::McNbr {
                model: "I1".into(),
                run: 0,
                pos: 0,
                formula: conj,
                expect: true,
            },
            Expectation::Proof { script: "sue-permitted-15".into() },
            Expectation::Proof { script: "judge-second-case".into() },
        ],
    }
}

fn case_non_validity(_v: &Vocab) -> CorpusCase {
    let mut single = AgentTable::declared(["i"]);
    let f = |s: &str, t: &mut AgentTable| parse_formula_with(s, t).expect(s);
    let reg = cm_regularity(&single);
    let cons = cm_consistency(&single);
    let snc = cm_strong_no_conflicts(&single);
    let jre_target = f("[x]_i p <-> [x]_i (p & p)", &mut single);
    let jre_context = f("p <-> p & p", &mut single);
    let cons_target = f("~O[x]_i false", &mut single);
    let snc_target = f("O[x]_i p & O[y]_i ~p", &mut single);
    let uni_reg = Universe::from_formulas([&jre_target, &jre_context]);
    let uni_cons = Universe::from_formulas([&cons_target]);
    let uni_snc = Universe::from_formulas([&snc_target]);
    CorpusCase {
        name: "non-validity".into(),
        description: "The three countermodels: regularity fails for justification boxes, obligations of falsity are satisfiable with an empty deontic constant specification, and conflicting obligations under different reasons coexist.".into(),
        agents: single.clone(),
        assumptions: vec![],
        support: vec![],
        scripts: vec![],
        neighborhood_models: vec![(reg, uni_reg), (cons, uni_cons), (snc, uni_snc)],
        fitting_models: vec![],
        expectations: vec![
            Expectation::ValidateNbr { model: "CM-regularity".into() },
            Expectation::McNbr {
                model: "CM-regularity".into(),
                run: 0,
                pos: 0,
                formula: jre_context,
                expect: true,
            },
            Expectation::McNbr {
                model: "CM-regularity".into(),
                run: 0,
                pos: 0,
                formula: jre_target,
                expect: false,
            },
            Expectation::ValidateNbr { model: "CM-consistency".into() },
            Expectation::McNbr {
                model: "CM-consistency".into(),
                run: 0,
                pos: 0,
                formula: cons_target,
                expect: false,
            },
            Expectation::ValidateNbr { model: "CM-strong-noc".into() },
            Expectation::McNbr {
                model: "CM-strong-noc".into(),
                run: 0,
                pos: 0,
                formula: snc_target,
                expect: true,
            },
        ],
    }
}

/// The built-in cases, in presentation order.
pub fn load_corpus() -> Vec<CorpusCase> {
    let v = vocab();
    vec![
        case_arguments_v1(&v),
        case_sdl_projection(&v),
        case_refined_v2(&v),
        case_permission_to_sue(&v),
        case_judge(&v),
        case_non_validity(&v),
    ]
}

#[cfg(test)]
mod tests {
    use super::super::{run_case, run_case_by_name, CorpusError};
    use super::*;

    #[test]
    fn all_cases_pass() {
        for case in load_corpus() {
            let report = run_case(&case).unwrap();
            assert!(report.all_pass(), "{report}");
        }
    }

    #[test]
    fn arguments_case_has_six_expectations() {
        let report = run_case_by_name("arguments-v1").unwrap();
        assert_eq!(report.total(), 6);
        assert!(report.all_pass());
    }

    #[test]
    fn unknown_case_errors() {
        assert!(matches!(
            run_case_by_name("nosuchcase"),
            Err(CorpusError::UnknownCase(_))
        ));
    }

    #[test]
    fn headline_scripts_have_the_stated_line_counts() {
        let v = vocab();
        assert_eq!(protagoras_script(&v).lines.len(), 7);
        assert_eq!(euathlus_script(&v).lines.len(), 7);
        assert_eq!(refined_protagoras_script(&v).lines.len(), 7);
        assert_eq!(refined_euathlus_script(&v).lines.len(), 11);
        // Nine numbered lines plus four lifting lines.
        assert_eq!(psue_not_permitted_script(&v).lines.len(), 13);
        assert_eq!(sue_permitted_script(&v).lines.len(), 24);
        // Six numbered lines plus two lifting lines.
        assert_eq!(judge_first_script(&v).lines.len(), 8);
    }
}
