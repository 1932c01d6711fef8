//! Acceptance gate: runs the seven acceptance criteria and prints one PASS/FAIL line
//! for each. Exits nonzero when any criterion fails.

use bp_core::functor::{Ladder, LadderWindow};
use bp_core::gmod::{self, GradedModule};
use bp_core::grading::{Dichotomy, GradeElement, GroupEmbedding, WeightSystem};
use bp_core::linalg::Field;
use bp_core::mforacle::{self, AuditWindow};
use bp_core::qalg::{self, RelationKind};
use bp_core::stable::StableObject;
use bp_core::tilting::{self, FamilyKind};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn w(p: &[i64]) -> WeightSystem {
    WeightSystem::new(p.to_vec()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cuboid_u(ws: &WeightSystem, l: &[i64]) -> StableObject {
    StableObject::cuboid(&ws.normalize(l, 0)).unwrap()
}

fn fam_of(ws: &WeightSystem, objs: Vec<StableObject>) -> tilting::TiltingFamily {
    tilting::TiltingFamily { weights: ws.clone(), kind: "listed".into(), objects: objs }
}

/// Calculus against the oracle on cuboid pairs with twists in `[-s, s] + [-2, 2] c` and
/// shifts in `[-4, 4]`.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let field = Field::default();
    let mut lines = Vec::new();
    let (mut pairs, mut unknown) = (0, 0);
    for p in [vec![2i64, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2], vec![3, 4]] {
        let rep = mforacle::audit(&w(&p), AuditWindow::default(), field).map_err(|e| e.to_string())?;
        ensure(rep.disagreements.is_empty(), || {
            format!("{}: {} disagreements, first {:?}", rep.weights, rep.disagreements.len(), rep.disagreements[0])
        })?;
        ensure(rep.unknown_rate < 0.2, || format!("{}: unknown rate {:.3}", rep.weights, rep.unknown_rate))?;
        pairs += rep.pairs;
        unknown += rep.unknown;
        lines.push(format!("{} {}", rep.weights, rep.pairs));
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(600), || format!("took {took:?}"))?;
    Ok(format!(
        "{pairs} pairs ({}), 0 disagreements, unknown rate {:.2}%, {:.1}s",
        lines.join(", "),
        100.0 * unknown as f64 / pairs as f64,
        took.as_secs_f64()
    ))
}

/// Weight tuples with `prod (p_i - 1) <= bound`: every ordering for `n <= 3`,
/// nondecreasing for `n = 4`.
fn small_types(bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<i64>> = vec![vec![]];
    for n in 1..=4 {
        let mut next = Vec::new();
        for t in &frontier {
            let prod: i64 = t.iter().map(|p| p - 1).product();
            for p in 2..=bound + 1 {
                if prod * (p - 1) <= bound {
                    let mut u = t.clone();
                    u.push(p);
                    next.push(u);
                }
            }
        }
        for t in &next {
            if n <= 3 || t.windows(2).all(|a| a[0] <= a[1]) {
                out.push(t.clone());
            }
        }
        frontier = next;
    }
    out
}

fn endo_equals(ws: &WeightSystem, kind: &FamilyKind) -> Result<(), String> {
    let fam = tilting::family(ws, kind).map_err(|e| e.to_string())?;
    let h = tilting::hom_matrix(&fam).map_err(|e| format!("{ws} {kind}: {e}"))?;
    let pred = tilting::predicted_algebra(ws, kind).map_err(|e| e.to_string())?;
    ensure(h == pred.cartan, || format!("{ws} {kind}:\n{}", tilting::diff_table(&fam.labels(), &h, &pred.cartan)))
}

/// Hom matrices of the cuboid, extended and replicated families against the Cartan
/// matrices of their predicted endomorphism algebras.
fn criterion_2() -> Outcome {
    let types = small_types(24);
    for p in &types {
        endo_equals(&w(p), &FamilyKind::Cuboid)?;
    }
    let mut ext = 0;
    for p in [vec![3i64, 4], vec![3, 4, 5]] {
        let ws = w(&p);
        for mask in 0..(1usize << ws.n()) {
            endo_equals(&ws, &FamilyKind::Extended((0..ws.n()).filter(|i| mask >> i & 1 == 1).collect()))?;
            ext += 1;
        }
    }
    let mut rep = 0;
    for p in [vec![3i64, 4], vec![3, 4, 5]] {
        let ws = w(&p);
        for t in 0..ws.n() {
            endo_equals(&ws, &FamilyKind::Replicated(t))?;
            rep += 1;
        }
    }
    Ok(format!("cuboid on {} types, {ext} extended, {rep} replicated: all equal", types.len()))
}

/// Ladder checks for every admissible split of (3,4) and (3,4,5).
fn criterion_3() -> Outcome {
    let mut lines = Vec::new();
    for p in [vec![3i64, 4], vec![3, 4, 5]] {
        let ws = w(&p);
        let pn = *p.last().unwrap();
        for q in 2..pn {
            let lad = Ladder::build(&ws, q).map_err(|e| e.to_string())?;
            let rep = lad.check_recollement(&LadderWindow::standard(&ws)).map_err(|e| e.to_string())?;
            let tag = format!("{ws} q={q}");
            ensure(rep.composite_zero, || format!("{tag}: composite {:?}", rep.composite_failures))?;
            ensure(rep.periodicity, || format!("{tag}: periodicity {:?}", rep.periodicity_failures))?;
            ensure(rep.partition, || format!("{tag}: partition"))?;
            ensure(rep.ff_disagreements() == 0, || format!("{tag}: full faithfulness"))?;
            ensure(rep.adjunction.len() >= 50, || format!("{tag}: only {} adjunction pairs", rep.adjunction.len()))?;
            ensure(rep.adjunction.iter().all(|a| a.phi_psi && a.psi_phi), || format!("{tag}: adjunction"))?;
            lines.push(format!(
                "{tag}: {} composites, {} periods, {} adjunction pairs",
                rep.composite_checked,
                rep.periodicity_checked,
                rep.adjunction.len()
            ));
        }
    }
    Ok(lines.join("; "))
}

fn same_profile(a: &StableObject, b: &StableObject, field: Field) -> Result<bool, String> {
    let pa = mforacle::hom_profile(a, field).map_err(|e| e.to_string())?;
    let pb = mforacle::hom_profile(b, field).map_err(|e| e.to_string())?;
    Ok(pa == pb)
}

/// Rewriting identities as equalities of oracle Hom profiles.
fn criterion_4() -> Outcome {
    let field = Field::default();
    let mut checked = 0;
    for p in [vec![3i64, 4], vec![2, 2, 2]] {
        let ws = w(&p);
        let n = ws.n() as i64;
        let hi: Vec<i64> = p.iter().map(|a| a - 1).collect();
        for ell in ws.box_elements(&vec![1; ws.n()], &hi) {
            let u = StableObject::u(ell.clone(), ws.zero(), 0).unwrap();
            for y in [ws.zero(), ws.x(0), ws.s().neg()] {
                let o = u.twist_obj(&y);
                let two = StableObject::u(ell.clone(), y.clone(), 2).unwrap();
                let c = StableObject::u(ell.clone(), y.add(&ws.c()), 0).unwrap();
                ensure(same_profile(&two, &c, field)?, || format!("[2] vs (c) on {o}"))?;
                checked += 1;
            }
            let bar = ws.c().scale(n).sub(&ell);
            let lhs = StableObject::u(ell.clone(), ws.zero(), n).unwrap();
            let rhs = StableObject::u(ws.normalize(bar.coeffs(), 0), bar.clone(), 0).unwrap();
            ensure(bar.level() == 0, || format!("nc - l = {bar} is not a cuboid parameter"))?;
            ensure(same_profile(&lhs, &rhs, field)?, || format!("reflection identity on {ell}"))?;
            checked += 1;
        }
        let top = StableObject::cuboid(&ws.s().add(&ws.delta())).unwrap();
        let rho = StableObject::u(ws.s(), ws.s(), -n).unwrap();
        ensure(same_profile(&top, &rho, field)?, || format!("top cuboid vs rho(s)[-n] on {ws}"))?;
        checked += 1;
    }
    // Knorrer transport (3) -> (2,3) preserves every Hom dimension between probes
    let w3 = w(&[3]);
    let probes = mforacle::probes(&w3);
    let mut knorrer = 0;
    for a in &probes {
        for b in &probes {
            for m in -2..=2 {
                let b2 = b.suspend(m);
                let d1 = mforacle::oracle_hom(a, &b2, field).map_err(|e| e.to_string())?;
                let d2 = mforacle::oracle_hom(&a.knorrer_transport(), &b2.knorrer_transport(), field)
                    .map_err(|e| e.to_string())?;
                ensure(d1 == d2, || format!("Knorrer: Hom({a}, {b2}) = {d1} but {d2} after transport"))?;
                knorrer += 1;
            }
        }
    }
    Ok(format!("{checked} profile identities on (3,4) and (2,2,2), {knorrer} Knorrer Hom pairs"))
}

/// Coxeter polynomial suites, each under five seconds.
fn criterion_5() -> Outcome {
    let mut lines = Vec::new();
    for name in ["happel-seidel", "replicated", "dynkin"] {
        let start = Instant::now();
        let rows = qalg::suite(name).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        for r in &rows {
            ensure(r.equal, || format!("{name} {}: {:?} dets {:?}", r.case, r.polynomials, r.determinants))?;
        }
        ensure(took < Duration::from_secs(5), || format!("{name} took {took:?}"))?;
        lines.push(format!("{name} {} rows {:.2}s", rows.len(), took.as_secs_f64()));
    }
    Ok(lines.join(", "))
}

/// Worked examples: the quivers of Lambda(2,2) and Gamma^t, and the two gluings.
fn criterion_6() -> Outcome {
    let w34 = w(&[3, 4]);
    let lam = qalg::lambda_q(&w34, &[2, 2]).map_err(|e| e.to_string())?;
    let q = lam.quiver.as_ref().unwrap();
    ensure(
        lam.size() == 6
            && q.arrows.len() == 7
            && q.count(RelationKind::Commutativity) == 2
            && q.count(RelationKind::Nilpotency) == 2,
        || format!("Lambda(2,2): {} vertices, {} arrows", lam.size(), q.arrows.len()),
    )?;
    ensure(lam.quiver_cartan().as_ref() == Some(&lam.cartan), || "Lambda(2,2) relations".into())?;

    let w345 = w(&[3, 4, 5]);
    for t in 0..3 {
        let g = qalg::gamma_quiver(&w345, t).map_err(|e| e.to_string())?;
        let gq = g.quiver.as_ref().unwrap();
        ensure(g.size() == 24, || format!("Gamma^{} has {} vertices", t + 1, g.size()))?;
        let label: String = (0..3).filter(|&k| k != t).map(|k| format!("x{}", k + 1)).collect();
        let conn: Vec<_> = gq.arrows.iter().filter(|a| a.label == label).collect();
        let copies = [3usize, 4, 5][t] - 1;
        ensure(conn.len() == copies - 1, || format!("Gamma^{}: {} connecting arrows", t + 1, conn.len()))?;
        let mut hi: Vec<i64> = vec![2, 3, 4];
        hi[t] = [2, 3, 4][t];
        let top = w345.normalize(&hi, 0);
        let mut lo = vec![1; 3];
        lo[t] = hi[t];
        let bottom = w345.normalize(&lo, 0);
        for a in &conn {
            let (src, dst) = (&g.vertices[a.src], &g.vertices[a.dst]);
            let (ls, cs) = src.split_once('#').unwrap();
            let (ld, cd) = dst.split_once('#').unwrap();
            let cs: usize = cs.parse().unwrap();
            let cd: usize = cd.parse().unwrap();
            ensure(ls == top.to_string() && ld == bottom.to_string() && cd == cs + 1, || {
                format!("Gamma^{}: connecting arrow {src} -> {dst}", t + 1)
            })?;
        }
        let slab: usize = (0..3).filter(|&k| k != t).map(|k| [2usize, 3, 4][k]).product();
        ensure(slab * copies == 24, || "slab count".into())?;
        ensure(g.quiver_cartan().as_ref() == Some(&g.cartan), || format!("Gamma^{} relations", t + 1))?;
    }

    let lad = Ladder::build(&w34, 3).map_err(|e| e.to_string())?;
    let (r1, r2) = (lad.reduced(1).clone(), lad.reduced(2).clone());
    let t1 = tilting::family(&r1, &FamilyKind::Cuboid).unwrap();
    let t2 = tilting::family(&r2, &FamilyKind::Cuboid).unwrap();
    let parse_all = |ws: &WeightSystem, v: &[String]| fam_of(ws, v.iter().map(|s| StableObject::parse(ws, s).unwrap()).collect());

    // first gluing: psi_{1,2} and psi_{2,0}
    let (glued, rep) = tilting::glue(&lad, &t1, &t2, 2, 0, None).map_err(|e| e.to_string())?;
    ensure(rep.vanishes, || format!("first gluing obstruction {:?}", rep.obstruction_left))?;
    let cub = tilting::family(&w34, &FamilyKind::Cuboid).unwrap();
    ensure(glued.same_objects(&cub), || "first gluing is not the cuboid".into())?;
    let img1 = fam_of(&w34, [[1, 1], [2, 1], [1, 2], [2, 2]].iter().map(|l| cuboid_u(&w34, l)).collect());
    ensure(parse_all(&w34, &rep.images1).same_objects(&img1), || format!("psi_(1,2)(T_1) = {:?}", rep.images1))?;
    let img2 = fam_of(&w34, vec![cuboid_u(&w34, &[1, 3]), cuboid_u(&w34, &[2, 3])]);
    ensure(parse_all(&w34, &rep.images2).same_objects(&img2), || format!("psi_(2,0)(T_2) = {:?}", rep.images2))?;
    let t2p = parse_all(&r1, &rep.reduced_second);
    ensure(t2p.objects.iter().all(|o| t1.objects.iter().any(|t| t.same_object(o))), || {
        format!("T_2' = {:?} is not in add T_1", rep.reduced_second)
    })?;

    // second gluing: psi_{1,1} and psi_{2,-1}
    let (glued, rep) = tilting::glue(&lad, &t1, &t2, 1, -1, None).map_err(|e| e.to_string())?;
    ensure(rep.vanishes, || format!("second gluing obstruction {:?}", rep.obstruction_right))?;
    let kos = tilting::family(&w34, &FamilyKind::Koszul).unwrap();
    ensure(glued.same_objects(&kos), || "second gluing is not the Koszul family".into())?;
    let img1 = fam_of(&w34, [[1, 1], [2, 1], [1, 3], [2, 3]].iter().map(|l| cuboid_u(&w34, l)).collect());
    ensure(parse_all(&w34, &rep.images1).same_objects(&img1), || format!("psi_(1,1)(T_1) = {:?}", rep.images1))?;
    let two_x2 = w34.x_mul(1, 2);
    let img2 = fam_of(
        &w34,
        vec![
            StableObject::u(w34.s(), two_x2.clone(), -2).unwrap(),
            StableObject::u(w34.normalize(&[2, 1], 0), two_x2, -2).unwrap(),
        ],
    );
    ensure(parse_all(&w34, &rep.images2).same_objects(&img2), || format!("psi_(2,-1)(T_2) = {:?}", rep.images2))?;
    let back: Vec<StableObject> =
        img1.objects.iter().map(|o| lad.reduce(2, 0, o).unwrap()).filter(|o| !o.is_zero()).collect();
    ensure(fam_of(&r2, back).same_objects(&t2), || "phi_(2,0) psi_(1,1)(T_1) differs from T_2".into())?;
    let h = tilting::hom_matrix(&kos).map_err(|e| e.to_string())?;
    ensure(h == lam.cartan, || "End of the Koszul family differs from Lambda(2,2)".into())?;
    Ok("Lambda(2,2): 6 vertices, 7 arrows, 2+2 relations; Gamma^1..3 of (3,4,5): 24 vertices; both gluings reproduced".into())
}

fn arb_weights() -> impl Strategy<Value = Vec<i64>> {
    prop::sample::select(vec![vec![2i64], vec![5], vec![3, 4], vec![2, 2, 2], vec![2, 3, 5], vec![3, 4, 5], vec![2, 3, 3, 4]])
}

fn arb_element() -> impl Strategy<Value = GradeElement> {
    arb_weights()
        .prop_flat_map(|p| {
            let n = p.len();
            (Just(p), prop::collection::vec(-40i64..40, n), -5i64..5)
        })
        .prop_map(|(p, raw, lv)| w(&p).normalize(&raw, lv))
}

fn arb_object() -> impl Strategy<Value = StableObject> {
    arb_weights()
        .prop_flat_map(|p| {
            let n = p.len();
            (Just(p), prop::collection::vec(0i64..100, n), prop::collection::vec(-9i64..9, n), -3i64..3, -5i64..5)
        })
        .prop_map(|(p, e, t, lv, k)| {
            let ws = w(&p);
            let ell: Vec<i64> = e.iter().zip(&p).map(|(a, pi)| 1 + a % (pi - 1)).collect();
            StableObject::u(ws.normalize(&ell, 0), ws.normalize(&t, lv), k).unwrap()
        })
}

fn run_suite<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<String, String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))?;
    Ok(format!("{name} {cases}"))
}

/// Randomized invariant suites, 10^4 cases each.
fn criterion_7() -> Outcome {
    const CASES: u32 = 10_000;
    let mut done = Vec::new();

    done.push(run_suite("normal form", CASES, (arb_element(), -30i64..30, -30i64..30), |(a, i, k)| {
        let ws = a.weights().clone();
        let n = ws.n();
        let idx = (i.unsigned_abs() as usize) % n;
        let b = ws.x_mul(idx, k);
        prop_assert!(a.coeffs().iter().zip(ws.p()).all(|(&c, &p)| (0..p).contains(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&a.neg()), ws.zero());
        prop_assert_eq!(ws.x_mul(idx, ws.p()[idx]), ws.c());
        let raw: Vec<i64> = a.coeffs().iter().enumerate().map(|(j, &c)| c + if j == idx { k * ws.p()[j] } else { 0 }).collect();
        prop_assert_eq!(ws.normalize(&raw, a.level() - k), a.clone());
        Ok(())
    })?);

    done.push(run_suite("dichotomy", CASES, arb_element(), |a| {
        let ws = a.weights().clone();
        let bound = ws.c().scale(ws.n() as i64 - 2).add(&ws.omega());
        let d = a.dichotomy();
        prop_assert_eq!(d == Dichotomy::NonNegative, a.is_nonneg());
        prop_assert_eq!(d == Dichotomy::BelowBound, a.leq(&bound));
        Ok(())
    })?);

    done.push(run_suite("module relations", CASES, (arb_object(), 0usize..2, 0i64..4), move |(o, j, k)| {
        let u = o.as_u().unwrap();
        let ws = o.weights().clone();
        let m = GradedModule::make_e(&u.ell, &u.twist).unwrap();
        prop_assert!(m.check_relations().is_ok());
        prop_assert!(m.direct_sum(&m.twist(&ws.x(0))).check_relations().is_ok());
        let pn = *ws.p().last().unwrap();
        if pn >= 3 {
            let emb = GroupEmbedding::new(&ws, (2, pn - 1), j + 1).unwrap();
            let red = gmod::phi_module(&emb, k, &m);
            prop_assert!(red.check_relations().is_ok());
            let back = gmod::psi_module(&emb, k, &red);
            prop_assert!(back.check_relations().is_ok());
        }
        Ok(())
    })?);

    done.push(run_suite("factorization d o d = f", CASES, arb_object(), |o| {
        let mf = mforacle::mf_of(&o).unwrap();
        prop_assert!(mf.check().is_ok());
        let c = o.weights().c();
        prop_assert!(mf.shift(1).check().is_ok());
        prop_assert!(mf.twist(&c).shift(-2).check().is_ok());
        Ok(())
    })?);

    done.push(run_suite("canonical forms", CASES, (arb_object(), 0usize..4), |(o, i)| {
        let c = o.canonicalize();
        prop_assert_eq!(c.canonicalize(), c.clone());
        let i = i % o.weights().n();
        prop_assert_eq!(o.reflect(i).unwrap().canonicalize(), c.clone());
        prop_assert_eq!(o.suspend(2).canonicalize(), o.twist_obj(&o.weights().c()).canonicalize());
        prop_assert_eq!(o.serre().serre_inv(), c);
        Ok(())
    })?);

    let lad34 = Ladder::build(&w(&[3, 4]), 3).unwrap();
    let lad345 = Ladder::build(&w(&[3, 4, 5]), 2).unwrap();
    done.push(run_suite("functor periodicity", CASES, (0usize..2, -8i64..8, 0usize..2, 0usize..60), move |(l, k, j, e)| {
        let lad = if l == 0 { &lad34 } else { &lad345 };
        let objs = bp_core::functor::cuboid_objects(&lad.full);
        let o = &objs[e % objs.len()];
        let j = j + 1;
        let pn = *lad.full.p().last().unwrap();
        let red = lad.reduced(j);
        let conj = red.x_mul(red.n() - 1, -(pn - lad.emb(j).pjn()));
        let a = lad.reduce(j, k + pn, o).unwrap();
        let b = lad.reduce(j, k, o).unwrap().twist_obj(&conj);
        prop_assert!(a.same_object(&b));
        let back = lad.insert(j, k, &lad.reduce(j, k, o).unwrap()).unwrap();
        prop_assert_eq!(back.weights(), &lad.full);
        Ok(())
    })?);

    done.push(run_suite("Cartan from relations", 2_000, (1usize..7, 1usize..7, 1usize..4, 1usize..4), |(a, m, b, k)| {
        let alg = qalg::tensor(&qalg::nakayama(a, m).unwrap(), &qalg::nakayama(b, k).unwrap());
        prop_assert_eq!(alg.quiver_cartan().unwrap(), alg.cartan.clone());
        let rep = qalg::replicated(&qalg::nakayama(a, a).unwrap(), k);
        prop_assert_eq!(rep.quiver_cartan().unwrap(), rep.cartan.clone());
        Ok(())
    })?);

    Ok(done.join(", "))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("oracle agreement", criterion_1),
        ("endomorphism matrices", criterion_2),
        ("ladder verification", criterion_3),
        ("rewriting identities", criterion_4),
        ("derived invariants", criterion_5),
        ("worked examples", criterion_6),
        ("randomized invariants", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} [{secs:.1}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} [{secs:.1}s] {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
