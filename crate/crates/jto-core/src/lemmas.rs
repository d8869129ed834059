//! Bundled derivations: the basic temporal facts (box unfolding, weak-until
//! fixpoint, always-idempotence) and the temporal-truth-predicate facts, as
//! scripts the kernel checks. Each `emit_*` appends theorem lines to a
//! builder and returns the 1-based index of the proven line, so bundles can
//! inline each other.

use thiserror::Error;

use crate::axioms::{instantiate, AxiomName};
use crate::proof::{Cite, ProofScript, ScriptBuilder};
use crate::syntax::{time_literal, true_at, Formula, Term};

fn ax(name: AxiomName, phi: &Formula, psi: &Formula) -> Formula {
    instantiate(name, phi, psi, &Term::var("$x"), &Term::var("$x"), crate::syntax::Agent(0))
}

fn ln(cites: &[usize]) -> Vec<Cite> {
    cites.iter().map(|&i| Cite::Line(i)).collect()
}

/// `G f -> (f & X G f)`
pub fn emit_box_unfold(b: &mut ScriptBuilder, phi: &Formula) -> usize {
    let not_phi = Formula::not(phi.clone());
    let u = Formula::until(Formula::Top, not_phi.clone());
    let a1 = b.axiom(AxiomName::Until2, ax(AxiomName::Until2, &Formula::Top, &not_phi));
    let a2 = b.axiom(AxiomName::Fun, ax(AxiomName::Fun, &u, &u));
    b.taut(
        ln(&[a1, a2]),
        Formula::implies(
            Formula::always(phi.clone()),
            Formula::and(phi.clone(), Formula::next(Formula::always(phi.clone()))),
        ),
    )
}

/// `f & X G f -> G f`
pub fn emit_box_fold(b: &mut ScriptBuilder, phi: &Formula) -> usize {
    let not_phi = Formula::not(phi.clone());
    let u = Formula::until(Formula::Top, not_phi.clone());
    let a1 = b.axiom(AxiomName::Until2, ax(AxiomName::Until2, &Formula::Top, &not_phi));
    let a2 = b.axiom(AxiomName::Fun, ax(AxiomName::Fun, &u, &u));
    b.taut(
        ln(&[a1, a2]),
        Formula::implies(
            Formula::and(phi.clone(), Formula::next(Formula::always(phi.clone()))),
            Formula::always(phi.clone()),
        ),
    )
}

/// `G f -> X f`
pub fn emit_box_step(b: &mut ScriptBuilder, phi: &Formula) -> usize {
    let l1 = emit_box_unfold(b, phi);
    let g = Formula::always(phi.clone());
    let t = b.taut(ln(&[l1]), Formula::implies(g.clone(), phi.clone()));
    let n = b.nec_next(t);
    let k = b.axiom(AxiomName::NextK, ax(AxiomName::NextK, &g, phi));
    b.taut(
        ln(&[l1, n, k]),
        Formula::implies(g, Formula::next(phi.clone())),
    )
}

/// `H f -> (f & Yw H f)`
pub fn emit_sofar_unfold(b: &mut ScriptBuilder, phi: &Formula) -> usize {
    let not_phi = Formula::not(phi.clone());
    let a1 = b.axiom(AxiomName::Since2, ax(AxiomName::Since2, &Formula::Top, &not_phi));
    b.taut(
        ln(&[a1]),
        Formula::implies(
            Formula::sofar(phi.clone()),
            Formula::and(phi.clone(), Formula::weak_prev(Formula::sofar(phi.clone()))),
        ),
    )
}

/// `H f -> Yw f`
pub fn emit_sofar_step(b: &mut ScriptBuilder, phi: &Formula) -> usize {
    let l1 = emit_sofar_unfold(b, phi);
    let h = Formula::sofar(phi.clone());
    let t = b.taut(ln(&[l1]), Formula::implies(h.clone(), phi.clone()));
    let n = b.nec_wprev(t);
    let k = b.axiom(AxiomName::WPrevK, ax(AxiomName::WPrevK, &h, phi));
    b.taut(
        ln(&[l1, n, k]),
        Formula::implies(h, Formula::weak_prev(phi.clone())),
    )
}

/// `A f -> f`
pub fn emit_boxdot_elim(b: &mut ScriptBuilder, phi: &Formula) -> usize {
    let l1 = emit_sofar_unfold(b, phi);
    b.taut(
        ln(&[l1]),
        Formula::implies(Formula::boxdot(phi.clone()), phi.clone()),
    )
}

/// Lift a theorem implication through next: from line `G f -> g` conclude
/// `X f -> X g` (wait: from any `a -> b`).
pub fn emit_next_rm(b: &mut ScriptBuilder, premise: usize) -> usize {
    let (ant, con) = match b.formula(premise).clone() {
        Formula::Implies(a, c) => (*a, *c),
        other => match other.desugar() {
            Formula::Implies(a, c) => (*a, *c),
            _ => panic!("emit_next_rm needs an implication"),
        },
    };
    let n = b.nec_next(premise);
    let k = b.axiom(AxiomName::NextK, ax(AxiomName::NextK, &ant, &con));
    b.taut(
        ln(&[n, k]),
        Formula::implies(Formula::next(ant), Formula::next(con)),
    )
}

/// `Yw a & ~Yw false -> Ys a` packaged as: lines proving
/// `Yw f -> (Yw ~f -> Yw false)` (the K-combination for weak previous).
fn emit_wprev_clash(b: &mut ScriptBuilder, phi: &Formula) -> usize {
    let not_phi = Formula::not(phi.clone());
    let inner = Formula::implies(not_phi.clone(), Formula::Bottom);
    let t = b.taut(vec![], Formula::implies(phi.clone(), inner.clone()));
    let n = b.nec_wprev(t);
    let k1 = b.axiom(AxiomName::WPrevK, ax(AxiomName::WPrevK, phi, &inner));
    let k2 = b.axiom(AxiomName::WPrevK, ax(AxiomName::WPrevK, &not_phi, &Formula::Bottom));
    b.taut(
        ln(&[n, k1, k2]),
        Formula::implies(
            Formula::weak_prev(phi.clone()),
            Formula::implies(
                Formula::weak_prev(not_phi),
                Formula::weak_prev(Formula::Bottom),
            ),
        ),
    )
}

/// `Yw X f & ~Yw false -> f` (yesterday's tomorrow is today, away from the
/// origin).
fn emit_wprev_next_elim(b: &mut ScriptBuilder, phi: &Formula) -> usize {
    let not_phi = Formula::not(phi.clone());
    let nphi = Formula::next(phi.clone());
    let a_pf = b.axiom(AxiomName::Pf, ax(AxiomName::Pf, &not_phi, &not_phi));
    let a_fun = b.axiom(AxiomName::Fun, ax(AxiomName::Fun, phi, phi));
    let t = b.taut(
        ln(&[a_fun]),
        Formula::implies(Formula::next(not_phi.clone()), Formula::not(nphi.clone())),
    );
    let w = b.wprev_rm(t);
    let clash = emit_wprev_clash(b, &nphi);
    b.taut(
        ln(&[a_pf, w, clash]),
        Formula::implies(
            Formula::and(
                Formula::weak_prev(nphi),
                Formula::not(Formula::weak_prev(Formula::Bottom)),
            ),
            phi.clone(),
        ),
    )
}

/// `X X-inverse`: `X Ys f -> f` is false in general; what holds is
/// `X Ys f <- f` (FP) and `X Ys f -> X Ys f`. This helper derives
/// `X Ys f -> f`... no: it derives `X Ys f -> f` via the functionality of
/// next: from `~f` one gets `X Ys ~f`, and `Ys ~f -> ~Ys f`.
fn emit_next_sprev_elim(b: &mut ScriptBuilder, phi: &Formula) -> usize {
    let not_phi = Formula::not(phi.clone());
    let sprev = Formula::strong_prev(phi.clone());
    let a_fp = b.axiom(AxiomName::Fp, ax(AxiomName::Fp, &not_phi, &not_phi));
    let a_sw = b.axiom(AxiomName::Sw, ax(AxiomName::Sw, &not_phi, &not_phi));
    let t = b.taut(
        ln(&[a_sw]),
        Formula::implies(Formula::strong_prev(not_phi.clone()), Formula::not(sprev.clone())),
    );
    let lifted = emit_next_rm(b, t);
    let a_fun = b.axiom(AxiomName::Fun, ax(AxiomName::Fun, &sprev, &sprev));
    b.taut(
        ln(&[a_fp, lifted, a_fun]),
        Formula::implies(Formula::next(sprev), phi.clone()),
    )
}

/// `X Yw f -> f`.
fn emit_next_wprev_elim(b: &mut ScriptBuilder, phi: &Formula) -> usize {
    let not_phi = Formula::not(phi.clone());
    let wprev = Formula::weak_prev(phi.clone());
    let a_fp = b.axiom(AxiomName::Fp, ax(AxiomName::Fp, &not_phi, &not_phi));
    let t = b.taut(vec![], Formula::implies(phi.clone(), Formula::not(not_phi.clone())));
    let w = b.wprev_rm(t);
    let t2 = b.taut(
        ln(&[w]),
        Formula::implies(Formula::strong_prev(not_phi.clone()), Formula::not(wprev.clone())),
    );
    let lifted = emit_next_rm(b, t2);
    let a_fun = b.axiom(AxiomName::Fun, ax(AxiomName::Fun, &wprev, &wprev));
    b.taut(
        ln(&[a_fp, lifted, a_fun]),
        Formula::implies(Formula::next(wprev), phi.clone()),
    )
}

/// `A f -> X A f` and `A f -> Yw A f`, then the induction axioms, giving
/// `A f <-> A A f`.
pub fn emit_boxdot_idem(b: &mut ScriptBuilder, phi: &Formula) -> usize {
    let f = phi.clone();
    let not_f = Formula::not(f.clone());
    let bx = Formula::always(f.clone());
    let sf = Formula::sofar(f.clone());
    let dd = Formula::boxdot(f.clone());
    let u = Formula::until(Formula::Top, not_f.clone());

    // Future half: A f -> X A f, then Ind.
    let a1 = b.axiom(AxiomName::Until2, ax(AxiomName::Until2, &Formula::Top, &not_f));
    let a2 = b.axiom(AxiomName::Fun, ax(AxiomName::Fun, &u, &u));
    let t3 = b.taut(
        ln(&[a1, a2]),
        Formula::implies(bx.clone(), Formula::and(f.clone(), Formula::next(bx.clone()))),
    );
    let t4 = b.taut(ln(&[t3]), Formula::implies(bx.clone(), f.clone()));
    let n5 = b.nec_next(t4);
    let a6 = b.axiom(AxiomName::NextK, ax(AxiomName::NextK, &bx, &f));
    let t7 = b.taut(
        ln(&[t3, n5, a6]),
        Formula::implies(bx.clone(), Formula::next(f.clone())),
    );
    let a8 = b.axiom(AxiomName::Since2, ax(AxiomName::Since2, &Formula::Top, &not_f));
    let a9 = b.axiom(AxiomName::Sw, ax(AxiomName::Sw, &sf, &sf));
    let sprev_sf = Formula::strong_prev(sf.clone());
    let t10 = b.taut(
        ln(&[a8, a9]),
        Formula::implies(Formula::and(sprev_sf.clone(), f.clone()), sf.clone()),
    );
    let n11 = b.nec_next(t10);
    let a12 = b.axiom(
        AxiomName::NextK,
        ax(AxiomName::NextK, &Formula::and(sprev_sf.clone(), f.clone()), &sf),
    );
    let t13 = b.taut(
        vec![],
        Formula::implies(
            sprev_sf.clone(),
            Formula::implies(f.clone(), Formula::and(sprev_sf.clone(), f.clone())),
        ),
    );
    let n14 = b.nec_next(t13);
    let a15 = b.axiom(
        AxiomName::NextK,
        ax(
            AxiomName::NextK,
            &sprev_sf,
            &Formula::implies(f.clone(), Formula::and(sprev_sf.clone(), f.clone())),
        ),
    );
    let a16 = b.axiom(
        AxiomName::NextK,
        ax(AxiomName::NextK, &f, &Formula::and(sprev_sf.clone(), f.clone())),
    );
    let a17 = b.axiom(AxiomName::Fp, ax(AxiomName::Fp, &sf, &sf));
    let t18 = b.taut(
        ln(&[t3, t7, n11, a12, n14, a15, a16, a17]),
        Formula::implies(
            dd.clone(),
            Formula::and(Formula::next(sf.clone()), Formula::next(bx.clone())),
        ),
    );
    let t19 = b.taut(
        vec![],
        Formula::implies(
            sf.clone(),
            Formula::implies(bx.clone(), Formula::and(sf.clone(), bx.clone())),
        ),
    );
    let n20 = b.nec_next(t19);
    let a21 = b.axiom(
        AxiomName::NextK,
        ax(
            AxiomName::NextK,
            &sf,
            &Formula::implies(bx.clone(), Formula::and(sf.clone(), bx.clone())),
        ),
    );
    let a22 = b.axiom(
        AxiomName::NextK,
        ax(AxiomName::NextK, &bx, &Formula::and(sf.clone(), bx.clone())),
    );
    let t23 = b.taut(
        ln(&[t18, n20, a21, a22]),
        Formula::implies(dd.clone(), Formula::next(Formula::and(sf.clone(), bx.clone()))),
    );
    // The conjunction under X equals X of the boxdot body.
    let t23b = b.taut(
        ln(&[t23]),
        Formula::implies(dd.clone(), Formula::next(dd.clone())),
    );
    let n24 = b.nec_always(t23b);
    let a25 = b.axiom(AxiomName::Ind, ax(AxiomName::Ind, &dd, &dd));
    let t26 = b.taut(ln(&[n24, a25]), Formula::implies(dd.clone(), Formula::always(dd.clone())));

    // Past half: A f -> Yw A f, then SofarInd.
    let t27 = b.taut(
        ln(&[a1, a2]),
        Formula::implies(Formula::and(f.clone(), Formula::next(bx.clone())), bx.clone()),
    );
    let w28 = b.wprev_rm(t27);
    let a29 = b.axiom(AxiomName::Pf, ax(AxiomName::Pf, &bx, &bx));
    let t30 = b.taut(ln(&[a8]), Formula::implies(sf.clone(), f.clone()));
    let n31 = b.nec_wprev(t30);
    let a32 = b.axiom(AxiomName::WPrevK, ax(AxiomName::WPrevK, &sf, &f));
    let t33 = b.taut(
        ln(&[a8, n31, a32]),
        Formula::implies(sf.clone(), Formula::weak_prev(f.clone())),
    );
    let nbx = Formula::next(bx.clone());
    let t34 = b.taut(
        vec![],
        Formula::implies(
            f.clone(),
            Formula::implies(nbx.clone(), Formula::and(f.clone(), nbx.clone())),
        ),
    );
    let n35 = b.nec_wprev(t34);
    let a36 = b.axiom(
        AxiomName::WPrevK,
        ax(
            AxiomName::WPrevK,
            &f,
            &Formula::implies(nbx.clone(), Formula::and(f.clone(), nbx.clone())),
        ),
    );
    let a37 = b.axiom(
        AxiomName::WPrevK,
        ax(AxiomName::WPrevK, &nbx, &Formula::and(f.clone(), nbx.clone())),
    );
    let t38 = b.taut(
        ln(&[t33, a29, n35, a36, a37, w28, a8]),
        Formula::implies(dd.clone(), Formula::weak_prev(bx.clone())),
    );
    let t39 = b.taut(
        ln(&[a8, t38]),
        Formula::implies(
            dd.clone(),
            Formula::and(
                Formula::weak_prev(sf.clone()),
                Formula::weak_prev(bx.clone()),
            ),
        ),
    );
    let n41 = b.nec_wprev(t19);
    let a42 = b.axiom(
        AxiomName::WPrevK,
        ax(
            AxiomName::WPrevK,
            &sf,
            &Formula::implies(bx.clone(), Formula::and(sf.clone(), bx.clone())),
        ),
    );
    let a43 = b.axiom(
        AxiomName::WPrevK,
        ax(AxiomName::WPrevK, &bx, &Formula::and(sf.clone(), bx.clone())),
    );
    let t44 = b.taut(
        ln(&[t39, n41, a42, a43]),
        Formula::implies(dd.clone(), Formula::weak_prev(dd.clone())),
    );
    let n45 = b.nec_sofar(t44);
    let a46 = b.axiom(AxiomName::SofarInd, ax(AxiomName::SofarInd, &dd, &dd));
    let t47 = b.taut(ln(&[n45, a46]), Formula::implies(dd.clone(), Formula::sofar(dd.clone())));

    // Combine, and the converse via unfolding at the doubled formula.
    let t48 = b.taut(
        ln(&[t26, t47]),
        Formula::implies(dd.clone(), Formula::boxdot(dd.clone())),
    );
    let not_dd = Formula::not(dd.clone());
    let a49 = b.axiom(AxiomName::Since2, ax(AxiomName::Since2, &Formula::Top, &not_dd));
    let t50 = b.taut(
        ln(&[a49]),
        Formula::implies(Formula::boxdot(dd.clone()), dd.clone()),
    );
    b.taut(ln(&[t48, t50]), Formula::iff(dd.clone(), Formula::boxdot(dd)))
}

/// `f W g <-> g | (f & X (f W g))`.
pub fn emit_weak_until_unfold(b: &mut ScriptBuilder, phi: &Formula, psi: &Formula) -> usize {
    let f = phi.clone();
    let g = psi.clone();
    let w = Formula::weak_until(f.clone(), g.clone());
    let u = Formula::until(f.clone(), g.clone());
    let bx = Formula::always(f.clone());
    let not_f = Formula::not(f.clone());
    let u2 = Formula::until(Formula::Top, not_f.clone());
    let rhs = Formula::or(
        g.clone(),
        Formula::and(f.clone(), Formula::next(w.clone())),
    );

    let a1 = b.axiom(AxiomName::Until2, ax(AxiomName::Until2, &f, &g));
    let a2 = b.axiom(AxiomName::Until2, ax(AxiomName::Until2, &Formula::Top, &not_f));
    let a3 = b.axiom(AxiomName::Fun, ax(AxiomName::Fun, &u2, &u2));
    let t4 = b.taut(vec![], Formula::implies(u.clone(), w.clone()));
    let l5 = emit_next_rm(b, t4);
    let t6 = b.taut(vec![], Formula::implies(bx.clone(), w.clone()));
    let l7 = emit_next_rm(b, t6);
    let t_fwd = b.taut(
        ln(&[a1, a2, a3, l5, l7]),
        Formula::implies(w.clone(), rhs.clone()),
    );
    let t8 = b.taut(
        vec![],
        Formula::implies(w.clone(), Formula::implies(Formula::not(u.clone()), bx.clone())),
    );
    let l9 = emit_next_rm(b, t8);
    let a10 = b.axiom(
        AxiomName::NextK,
        ax(AxiomName::NextK, &Formula::not(u.clone()), &bx),
    );
    let a11 = b.axiom(AxiomName::Fun, ax(AxiomName::Fun, &u, &u));
    let t_bwd = b.taut(
        ln(&[a1, a2, a3, l9, a10, a11]),
        Formula::implies(rhs.clone(), w.clone()),
    );
    b.taut(ln(&[t_fwd, t_bwd]), Formula::iff(w, rhs))
}

/// Items of the basic temporal-facts bundle: which item proves what.
///
/// 1. `G f -> (f & X G f)`
/// 2. `G f -> X f`
/// 3. `H f -> (f & Yw H f)`
/// 4. `H f -> Yw f`
/// 5. `A f -> f`
/// 6. `A f <-> A A f`
/// 7. `f W g <-> g | (f & X (f W g))`
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("no such bundled lemma item: {0}")]
pub struct OutOfRange(pub u8);

/// Build the chosen basic temporal fact as a standalone checkable script.
/// `psi` is only used by item 7.
pub fn lemma2(item: u8, phi: &Formula, psi: &Formula, name: &str) -> Result<ProofScript, OutOfRange> {
    let mut b = ScriptBuilder::new(name);
    match item {
        1 => emit_box_unfold(&mut b, phi),
        2 => emit_box_step(&mut b, phi),
        3 => emit_sofar_unfold(&mut b, phi),
        4 => emit_sofar_step(&mut b, phi),
        5 => emit_boxdot_elim(&mut b, phi),
        6 => emit_boxdot_idem(&mut b, phi),
        7 => emit_weak_until_unfold(&mut b, phi, psi),
        other => return Err(OutOfRange(other)),
    };
    Ok(b.finish())
}

// ---------------------------------------------------------------------------
// Temporal truth predicate facts.
// ---------------------------------------------------------------------------

/// `A h -> Yw h` as theorem lines (through the sofar half).
fn emit_boxdot_to_wprev(b: &mut ScriptBuilder, h: &Formula) -> usize {
    let l = emit_sofar_step(b, h);
    b.taut(
        ln(&[l]),
        Formula::implies(Formula::boxdot(h.clone()), Formula::weak_prev(h.clone())),
    )
}

/// `A h -> X h` as theorem lines (through the always half).
fn emit_boxdot_to_next(b: &mut ScriptBuilder, h: &Formula) -> usize {
    let l = emit_box_step(b, h);
    b.taut(
        ln(&[l]),
        Formula::implies(Formula::boxdot(h.clone()), Formula::next(h.clone())),
    )
}

/// `time=m+1 -> ~Yw false`: a strong-previous chain rules out the origin.
fn emit_time_not_origin(b: &mut ScriptBuilder, m: usize) -> usize {
    let tm = time_literal(m);
    let t = b.taut(
        vec![],
        Formula::implies(Formula::Bottom, Formula::not(tm.clone())),
    );
    let w = b.wprev_rm(t);
    b.taut(
        ln(&[w]),
        Formula::implies(
            time_literal(m + 1),
            Formula::not(Formula::weak_prev(Formula::Bottom)),
        ),
    )
}

/// `(true_m(f) & time=m) -> f`
fn emit_ttp1(b: &mut ScriptBuilder, m: usize, f: &Formula) -> usize {
    let chi = Formula::implies(time_literal(m), f.clone());
    let l = emit_boxdot_elim(b, &chi);
    b.taut(
        ln(&[l]),
        Formula::implies(
            Formula::and(true_at(m, f.clone()), time_literal(m)),
            f.clone(),
        ),
    )
}

/// Direction `true_m(X f) -> true_{m+1}(f)`.
fn emit_ttp2_fwd(b: &mut ScriptBuilder, m: usize, f: &Formula) -> usize {
    let psi = Formula::implies(time_literal(m), Formula::next(f.clone()));
    let hyp_f = true_at(m, Formula::next(f.clone()));
    let h = b.hyp(hyp_f.clone());
    let e = emit_boxdot_to_wprev(b, &psi);
    let t = b.taut(
        vec![Cite::Line(h), Cite::Line(e)],
        Formula::weak_prev(psi.clone()),
    );
    let a_sw = b.axiom(
        AxiomName::Sw,
        ax(AxiomName::Sw, &time_literal(m), &time_literal(m)),
    );
    let a_k = b.axiom(
        AxiomName::WPrevK,
        ax(AxiomName::WPrevK, &time_literal(m), &Formula::next(f.clone())),
    );
    let e_elim = emit_wprev_next_elim(b, f);
    let e_origin = emit_time_not_origin(b, m);
    let goal = b.taut(
        ln(&[t, a_sw, a_k, e_elim, e_origin]),
        Formula::implies(time_literal(m + 1), f.clone()),
    );
    let lifted = b.boxdot_lift(goal);
    b.deduce(lifted, hyp_f)
}

/// Direction `true_{m+1}(f) -> true_m(X f)`.
fn emit_ttp2_bwd(b: &mut ScriptBuilder, m: usize, f: &Formula) -> usize {
    let chi = Formula::implies(time_literal(m + 1), f.clone());
    let hyp_f = true_at(m + 1, f.clone());
    let h = b.hyp(hyp_f.clone());
    let e = emit_boxdot_to_next(b, &chi);
    let t = b.taut(
        vec![Cite::Line(h), Cite::Line(e)],
        Formula::next(chi.clone()),
    );
    let a_fp = b.axiom(
        AxiomName::Fp,
        ax(AxiomName::Fp, &time_literal(m), &time_literal(m)),
    );
    let a_k = b.axiom(
        AxiomName::NextK,
        ax(AxiomName::NextK, &time_literal(m + 1), f),
    );
    let goal = b.taut(
        ln(&[t, a_fp, a_k]),
        Formula::implies(time_literal(m), Formula::next(f.clone())),
    );
    let lifted = b.boxdot_lift(goal);
    b.deduce(lifted, hyp_f)
}

/// `true_m(X f) <-> true_{m+1}(f)`
fn emit_ttp2(b: &mut ScriptBuilder, m: usize, f: &Formula) -> usize {
    let d1 = emit_ttp2_fwd(b, m, f);
    let d2 = emit_ttp2_bwd(b, m, f);
    b.taut(
        ln(&[d1, d2]),
        Formula::iff(
            true_at(m, Formula::next(f.clone())),
            true_at(m + 1, f.clone()),
        ),
    )
}

/// `true_{m+1}(Ys f) <-> true_m(f)`
fn emit_ttp3(b: &mut ScriptBuilder, m: usize, f: &Formula) -> usize {
    // Forward: true_{m+1}(Ys f) -> true_m(f).
    let psi = Formula::implies(time_literal(m + 1), Formula::strong_prev(f.clone()));
    let hyp_fwd = true_at(m + 1, Formula::strong_prev(f.clone()));
    let h = b.hyp(hyp_fwd.clone());
    let e = emit_boxdot_to_next(b, &psi);
    let t = b.taut(vec![Cite::Line(h), Cite::Line(e)], Formula::next(psi.clone()));
    let a_fp = b.axiom(
        AxiomName::Fp,
        ax(AxiomName::Fp, &time_literal(m), &time_literal(m)),
    );
    let a_k = b.axiom(
        AxiomName::NextK,
        ax(
            AxiomName::NextK,
            &time_literal(m + 1),
            &Formula::strong_prev(f.clone()),
        ),
    );
    let e_elim = emit_next_sprev_elim(b, f);
    let goal = b.taut(
        ln(&[t, a_fp, a_k, e_elim]),
        Formula::implies(time_literal(m), f.clone()),
    );
    let lifted = b.boxdot_lift(goal);
    let d1 = b.deduce(lifted, hyp_fwd);

    // Backward: true_m(f) -> true_{m+1}(Ys f).
    let chi = Formula::implies(time_literal(m), f.clone());
    let hyp_bwd = true_at(m, f.clone());
    let h = b.hyp(hyp_bwd.clone());
    let e = emit_boxdot_to_wprev(b, &chi);
    let t = b.taut(vec![Cite::Line(h), Cite::Line(e)], Formula::weak_prev(chi.clone()));
    let a_sw = b.axiom(
        AxiomName::Sw,
        ax(AxiomName::Sw, &time_literal(m), &time_literal(m)),
    );
    let a_k = b.axiom(
        AxiomName::WPrevK,
        ax(AxiomName::WPrevK, &time_literal(m), f),
    );
    let clash = emit_wprev_clash(b, f);
    let origin = emit_time_not_origin(b, m);
    let goal = b.taut(
        ln(&[t, a_sw, a_k, clash, origin]),
        Formula::implies(time_literal(m + 1), Formula::strong_prev(f.clone())),
    );
    let lifted = b.boxdot_lift(goal);
    let d2 = b.deduce(lifted, hyp_bwd);

    b.taut(
        ln(&[d1, d2]),
        Formula::iff(
            true_at(m + 1, Formula::strong_prev(f.clone())),
            true_at(m, f.clone()),
        ),
    )
}

/// `true_{m+1}(Yw f) <-> true_m(f)`
fn emit_ttp4(b: &mut ScriptBuilder, m: usize, f: &Formula) -> usize {
    // Forward.
    let psi = Formula::implies(time_literal(m + 1), Formula::weak_prev(f.clone()));
    let hyp_fwd = true_at(m + 1, Formula::weak_prev(f.clone()));
    let h = b.hyp(hyp_fwd.clone());
    let e = emit_boxdot_to_next(b, &psi);
    let t = b.taut(vec![Cite::Line(h), Cite::Line(e)], Formula::next(psi.clone()));
    let a_fp = b.axiom(
        AxiomName::Fp,
        ax(AxiomName::Fp, &time_literal(m), &time_literal(m)),
    );
    let a_k = b.axiom(
        AxiomName::NextK,
        ax(
            AxiomName::NextK,
            &time_literal(m + 1),
            &Formula::weak_prev(f.clone()),
        ),
    );
    let e_elim = emit_next_wprev_elim(b, f);
    let goal = b.taut(
        ln(&[t, a_fp, a_k, e_elim]),
        Formula::implies(time_literal(m), f.clone()),
    );
    let lifted = b.boxdot_lift(goal);
    let d1 = b.deduce(lifted, hyp_fwd);

    // Backward.
    let chi = Formula::implies(time_literal(m), f.clone());
    let hyp_bwd = true_at(m, f.clone());
    let h = b.hyp(hyp_bwd.clone());
    let e = emit_boxdot_to_wprev(b, &chi);
    let t = b.taut(vec![Cite::Line(h), Cite::Line(e)], Formula::weak_prev(chi.clone()));
    let a_sw = b.axiom(
        AxiomName::Sw,
        ax(AxiomName::Sw, &time_literal(m), &time_literal(m)),
    );
    let a_k = b.axiom(
        AxiomName::WPrevK,
        ax(AxiomName::WPrevK, &time_literal(m), f),
    );
    let goal = b.taut(
        ln(&[t, a_sw, a_k]),
        Formula::implies(time_literal(m + 1), Formula::weak_prev(f.clone())),
    );
    let lifted = b.boxdot_lift(goal);
    let d2 = b.deduce(lifted, hyp_bwd);

    b.taut(
        ln(&[d1, d2]),
        Formula::iff(
            true_at(m + 1, Formula::weak_prev(f.clone())),
            true_at(m, f.clone()),
        ),
    )
}

/// `true_{m+1}(H f) -> true_m(f)`
fn emit_ttp5(b: &mut ScriptBuilder, m: usize, f: &Formula) -> usize {
    let hf = Formula::sofar(f.clone());
    let psi = Formula::implies(time_literal(m + 1), hf.clone());
    let hyp_f = true_at(m + 1, hf.clone());
    let h = b.hyp(hyp_f.clone());
    let e = emit_boxdot_to_next(b, &psi);
    let t = b.taut(vec![Cite::Line(h), Cite::Line(e)], Formula::next(psi.clone()));
    let a_fp = b.axiom(
        AxiomName::Fp,
        ax(AxiomName::Fp, &time_literal(m), &time_literal(m)),
    );
    let a_k = b.axiom(
        AxiomName::NextK,
        ax(AxiomName::NextK, &time_literal(m + 1), &hf),
    );
    let step = emit_sofar_step(b, f);
    let lift_step = emit_next_rm(b, step);
    let e_elim = emit_next_wprev_elim(b, f);
    let goal = b.taut(
        ln(&[t, a_fp, a_k, lift_step, e_elim]),
        Formula::implies(time_literal(m), f.clone()),
    );
    let lifted = b.boxdot_lift(goal);
    b.deduce(lifted, hyp_f)
}

/// `A f -> true_m(f)`
fn emit_ttp6(b: &mut ScriptBuilder, m: usize, f: &Formula) -> usize {
    let hyp_f = Formula::boxdot(f.clone());
    let h = b.hyp(hyp_f.clone());
    let e = emit_boxdot_elim(b, f);
    let t = b.taut(
        vec![Cite::Line(h), Cite::Line(e)],
        Formula::implies(time_literal(m), f.clone()),
    );
    let lifted = b.boxdot_lift(t);
    b.deduce(lifted, hyp_f)
}

/// `A true_m(f) <-> true_m(f)`
fn emit_ttp7(b: &mut ScriptBuilder, m: usize, f: &Formula) -> usize {
    let tm = true_at(m, f.clone());
    let chi = Formula::implies(time_literal(m), f.clone());
    let e1 = emit_boxdot_elim(b, &tm);
    let d1 = b.taut(
        ln(&[e1]),
        Formula::implies(Formula::boxdot(tm.clone()), tm.clone()),
    );
    let e2 = emit_boxdot_idem(b, &chi);
    let d2 = b.taut(
        ln(&[e2]),
        Formula::implies(tm.clone(), Formula::boxdot(tm.clone())),
    );
    b.taut(ln(&[d1, d2]), Formula::iff(Formula::boxdot(tm.clone()), tm))
}

/// Hypothesis-style step: `true_m(f) |- time=m+1 -> Ys f`.
fn emit_ttp8(b: &mut ScriptBuilder, m: usize, f: &Formula) -> usize {
    let chi = Formula::implies(time_literal(m), f.clone());
    let hyp_f = true_at(m, f.clone());
    let h = b.hyp(hyp_f);
    let e = emit_boxdot_to_wprev(b, &chi);
    let t = b.taut(vec![Cite::Line(h), Cite::Line(e)], Formula::weak_prev(chi.clone()));
    let a_sw = b.axiom(
        AxiomName::Sw,
        ax(AxiomName::Sw, &time_literal(m), &time_literal(m)),
    );
    let a_k = b.axiom(
        AxiomName::WPrevK,
        ax(AxiomName::WPrevK, &time_literal(m), f),
    );
    let clash = emit_wprev_clash(b, f);
    let origin = emit_time_not_origin(b, m);
    b.taut(
        ln(&[t, a_sw, a_k, clash, origin]),
        Formula::implies(time_literal(m + 1), Formula::strong_prev(f.clone())),
    )
}

/// Monotonicity rule: from the theorem line `prem: f -> g`, derive
/// `true_m(f) -> true_m(g)`.
pub fn emit_ttp9(b: &mut ScriptBuilder, m: usize, prem: usize) -> usize {
    let (f, g) = match b.formula(prem).clone().desugar() {
        Formula::Implies(a, c) => (*a, *c),
        _ => panic!("emit_ttp9 needs an implication premise"),
    };
    let hyp_f = true_at(m, f.clone());
    let h = b.hyp(hyp_f.clone());
    let chi = Formula::implies(time_literal(m), f.clone());
    let e = emit_boxdot_elim(b, &chi);
    let t = b.taut(
        vec![Cite::Line(h), Cite::Line(e), Cite::Line(prem)],
        Formula::implies(time_literal(m), g.clone()),
    );
    let lifted = b.boxdot_lift(t);
    b.deduce(lifted, hyp_f)
}

/// Build the chosen temporal-truth-predicate fact as a standalone script.
/// Items 1-7 are theorems, item 8 is a hypothesis-carrying derivation, and
/// item 9 needs `f` to be an implication provable outright (here: by the
/// propositional rule); the general rule form is `emit_ttp9`.
pub fn ttp(item: u8, m: usize, f: &Formula, name: &str) -> Result<ProofScript, OutOfRange> {
    let mut b = ScriptBuilder::new(name);
    match item {
        1 => emit_ttp1(&mut b, m, f),
        2 => emit_ttp2(&mut b, m, f),
        3 => emit_ttp3(&mut b, m, f),
        4 => emit_ttp4(&mut b, m, f),
        5 => emit_ttp5(&mut b, m, f),
        6 => emit_ttp6(&mut b, m, f),
        7 => emit_ttp7(&mut b, m, f),
        8 => emit_ttp8(&mut b, m, f),
        9 => {
            let prem = b.axiom(AxiomName::Taut, f.clone());
            emit_ttp9(&mut b, m, prem)
        }
        other => return Err(OutOfRange(other)),
    };
    Ok(b.finish())
}

/// `true_m(H f) -> true_k(H f)` for k < m: the sofar statement persists
/// backwards along the timeline.
pub fn emit_sofar_down(b: &mut ScriptBuilder, m: usize, k: usize, f: &Formula) -> usize {
    assert!(k < m);
    let hf = Formula::sofar(f.clone());
    let mut cur: Option<usize> = None; // proves true_m(H f) -> true_j(H f)
    let mut j = m;
    while j > k {
        // step: true_j(H f) -> true_{j-1}(H f)
        let unf = emit_sofar_unfold(b, f);
        let mono = b.taut(
            ln(&[unf]),
            Formula::implies(hf.clone(), Formula::weak_prev(hf.clone())),
        );
        let t9 = emit_ttp9(b, j, mono);
        let t4 = emit_ttp4(b, j - 1, &hf);
        let step = b.taut(
            ln(&[t9, t4]),
            Formula::implies(true_at(j, hf.clone()), true_at(j - 1, hf.clone())),
        );
        cur = Some(match cur {
            None => step,
            Some(prev) => b.taut(
                ln(&[prev, step]),
                Formula::implies(true_at(m, hf.clone()), true_at(j - 1, hf.clone())),
            ),
        });
        j -= 1;
    }
    cur.unwrap()
}

/// `true_m(H f) -> (time=k -> f)` for k <= m: walk the sofar statement down
/// the timeline and read it off at instant k.
pub fn emit_sofar_at(b: &mut ScriptBuilder, m: usize, k: usize, f: &Formula) -> usize {
    assert!(k <= m);
    let hf = Formula::sofar(f.clone());
    let cur = if k < m { Some(emit_sofar_down(b, m, k, f)) } else { None };
    // true_k(H f) -> (time=k -> f): eliminate the boxdot and the sofar.
    let chi = Formula::implies(time_literal(k), hf.clone());
    let e1 = emit_boxdot_elim(b, &chi);
    let e2 = emit_sofar_unfold(b, f);
    let mut cites = vec![e1, e2];
    if let Some(c) = cur {
        cites.push(c);
    }
    b.taut(
        ln(&cites),
        Formula::implies(true_at(m, hf.clone()), Formula::implies(time_literal(k), f.clone())),
    )
}

/// Both directions of the equivalence between the no-conflicts axiom shape
/// and its negated-conjunction form, as two one-line scripts.
pub fn no_conflicts_equivalence(
    agent: crate::syntax::Agent,
    t: &Term,
    phi: &Formula,
) -> (ProofScript, ProofScript) {
    let obox = Formula::obox(agent, t.clone(), phi.clone()).unwrap();
    let obox_neg = Formula::obox(agent, t.clone(), Formula::not(phi.clone())).unwrap();
    let permit = Formula::opermit(agent, t.clone(), phi.clone()).unwrap();
    let noc = Formula::implies(obox.clone(), permit.clone());
    let conj = Formula::not(Formula::and(obox, obox_neg));
    let mut b = ScriptBuilder::new("no-conflicts.to-conjunction");
    b.taut(vec![], Formula::implies(noc.clone(), conj.clone()));
    let fwd = b.finish();
    let mut b = ScriptBuilder::new("no-conflicts.from-conjunction");
    b.taut(vec![], Formula::implies(conj, noc));
    let bwd = b.finish();
    (fwd, bwd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cs::ConstantSpecification;
    use crate::proof::Checker;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn check(script: &ProofScript) {
        let report = Checker::new(ConstantSpecification::empty()).check_only(script);
        assert!(report.accepted, "{report}");
    }

    #[test]
    fn lemma2_items_check() {
        let phi = f("p");
        let psi = f("q");
        for item in 1..=7u8 {
            let script = lemma2(item, &phi, &psi, &format!("l2.{item}")).unwrap();
            let report = Checker::new(ConstantSpecification::empty()).check_only(&script);
            assert!(report.accepted, "item {item}: {report}");
        }
        assert!(lemma2(8, &phi, &psi, "x").is_err());
    }

    #[test]
    fn lemma2_on_compound_bodies() {
        let phi = f("[t]_1 p -> q U r");
        let psi = f("O[a]_0 pay");
        for item in [1u8, 5, 6, 7] {
            let script = lemma2(item, &phi, &psi, &format!("l2c.{item}")).unwrap();
            check(&script);
        }
    }

    #[test]
    fn ttp_items_check() {
        let phi = f("p & X q");
        for item in 1..=8u8 {
            let script = ttp(item, 2, &phi, &format!("ttp.{item}")).unwrap();
            let report = Checker::new(ConstantSpecification::empty()).check_only(&script);
            assert!(report.accepted, "item {item}: {report}");
        }
        // Item 9 with a propositional implication premise.
        let script = ttp(9, 3, &f("p & q -> p"), "ttp.9").unwrap();
        check(&script);
        assert!(ttp(10, 0, &phi, "x").is_err());
        assert!(ttp(0, 0, &phi, "x").is_err());
    }

    #[test]
    fn ttp8_is_hypothesis_style() {
        let script = ttp(8, 4, &f("~pay S winfirst_e"), "ttp8").unwrap();
        assert_eq!(script.goal_hypotheses.len(), 1);
        check(&script);
    }

    #[test]
    fn sofar_at_walks_down() {
        let mut b = ScriptBuilder::new("sofar-at");
        emit_sofar_at(&mut b, 5, 3, &f("~pay"));
        let script = b.finish();
        check(&script);
        assert_eq!(
            script.goal,
            Formula::implies(
                true_at(5, Formula::sofar(f("~pay"))),
                Formula::implies(time_literal(3), f("~pay"))
            )
        );
    }

    #[test]
    fn no_conflicts_equivalence_checks() {
        let (fwd, bwd) =
            no_conflicts_equivalence(crate::syntax::Agent(0), &Term::var("t"), &f("p"));
        check(&fwd);
        check(&bwd);
    }
}
