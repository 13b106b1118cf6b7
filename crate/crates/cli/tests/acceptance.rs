//! Acceptance gate: twelve exact checks, one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mvtensor::bridge::{gamma, lambda, tensor_fu_ring, UnitGroup};
use mvtensor::terms::free_pmv_evidence;
use mvtensor::tower::{
    adjunction_shadow, check_eps_gamma_identities, functor_on_hom, lift_hom, pmv_fixed_point_check, product_audit,
};
use mvtensor::{
    amalgamate_mv, amalgamate_pmv, associativity_witness, boolean, build_tower, chain, commutativity_witness,
    extend_from_generators, extend_hom, generate_subalgebra, has_infinitesimal, iso_check, tensor, FiniteAlgebra, Hom,
    PointFunction, PointSet, Rational01, Signature, Tower,
};
use mvtensor_cli::run_args;
use num_rational::Ratio;

const CAP: usize = 20_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn arc(a: FiniteAlgebra) -> Arc<FiniteAlgebra> {
    Arc::new(a)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs()))
}

/// Boolean algebra of all 0/1 functions on the given points, with products.
fn boolean_on(labels: &[&str]) -> Arc<FiniteAlgebra> {
    let pts = PointSet::new(labels.iter().copied()).unwrap();
    let atoms: Vec<PointFunction> = (0..labels.len())
        .map(|i| {
            let v = (0..labels.len()).map(|j| if i == j { Rational01::ONE } else { Rational01::ZERO }).collect();
            PointFunction::new(pts.clone(), v).unwrap()
        })
        .collect();
    arc(generate_subalgebra(&pts, &atoms, Signature::Pmv, CAP).unwrap())
}

/// Product closure of one 0/1 function.
fn product_closure(values: &[u64]) -> Arc<FiniteAlgebra> {
    let pts = PointSet::new((0..values.len()).map(|i| format!("s{i}"))).unwrap();
    let g = PointFunction::new(pts.clone(), values.iter().map(|&v| Rational01::ratio(v, 1)).collect()).unwrap();
    arc(generate_subalgebra(&pts, &[g], Signature::Pmv, CAP).unwrap())
}

/// `Ł₂` embedded diagonally in `Ł₂ × Ł₂`.
fn diagonal() -> Arc<FiniteAlgebra> {
    let pts = PointSet::new(["l", "r"]).unwrap();
    let half = Rational01::ratio(1, 2);
    let g = PointFunction::new(pts.clone(), vec![half, half]).unwrap();
    arc(generate_subalgebra(&pts, &[g], Signature::Mv, CAP).unwrap())
}

/// Pull back along a map of points: `(f ∘ σ)(u) = f(σ(u))`.
fn pullback(src: &Arc<FiniteAlgebra>, tgt: &Arc<FiniteAlgebra>, sigma: &[usize]) -> Hom {
    let pts = tgt.points().clone();
    Hom::from_values(src.clone(), tgt.clone(), |f| {
        PointFunction::new(pts.clone(), sigma.iter().map(|&s| f.at(s)).collect()).unwrap()
    })
    .unwrap()
}

fn chain_inclusion(n: u64, m: u64) -> Hom {
    let (a, b) = (arc(chain(n)), arc(chain(m)));
    extend_from_generators(&a, &b, &[(m / n) as usize]).unwrap()
}

/// Closure of `{0, 1, step}` under truncated sum and complement by plain fixpoint.
fn naive_chain(step: Ratio<u64>) -> BTreeSet<Ratio<u64>> {
    let one = Ratio::from_integer(1);
    let mut set: BTreeSet<Ratio<u64>> = [Ratio::from_integer(0), one, step].into();
    loop {
        let mut next = set.clone();
        for &x in &set {
            next.insert(one - x);
            for &y in &set {
                next.insert((x + y).min(one));
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

fn c1_chain_tensor_law() -> Outcome {
    let start = Instant::now();
    for n in 1..=6u64 {
        for m in 1..=6u64 {
            let t = tensor(&arc(chain(n)), &arc(chain(m)), CAP).map_err(|e| e.to_string())?;
            ensure(iso_check(&t.algebra, &arc(chain(n * m))).is_some(), || format!("Ł{n}⊗Ł{m} not ≅ Ł{}", n * m))?;
            let got: BTreeSet<Ratio<u64>> =
                (0..t.algebra.len()).map(|i| t.algebra.values(i)[0]).map(|v| Ratio::new(v.num(), v.den())).collect();
            ensure(got == naive_chain(Ratio::new(1, n * m)), || format!("Ł{n}⊗Ł{m} differs from the oracle"))?;
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok("36/36 chain pairs isomorphic to Ł_nm and equal to the oracle closure".into())
}

fn c2_commutativity_associativity() -> Outcome {
    let start = Instant::now();
    let corpus = [("Ł2", arc(chain(2))), ("Ł3", arc(chain(3))), ("Bool", arc(boolean())), ("diag", diagonal())];
    let mut triples = 0;
    for (na, a) in &corpus {
        for (nb, b) in &corpus {
            let swap = commutativity_witness(a, b, CAP).map_err(|e| format!("{na}⊗{nb}: {e}"))?;
            ensure(swap.is_bijective(), || format!("swap {na}⊗{nb} not bijective"))?;
            for (nc, c) in &corpus {
                let w = associativity_witness(a, b, c, CAP).map_err(|e| format!("{na}⊗{nb}⊗{nc}: {e}"))?;
                ensure(w.triple_equal() && w.regroup.is_bijective(), || format!("{na}⊗{nb}⊗{nc}: brackets differ"))?;
                triples += 1;
            }
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{triples} triples and 16 swaps over {{Ł2, Ł3, Boolean, diagonal}}"))
}

fn c3_identities() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in [2, 3] {
        let tw = build_tower(&arc(chain(n)), 3, CAP).map_err(|e| e.to_string())?;
        let r = check_eps_gamma_identities(&tw, CAP).map_err(|e| e.to_string())?;
        ensure(r.results.len() == 5, || "expected five identities".into())?;
        for x in &r.results {
            ensure(x.passed && x.checked > 0, || format!("Ł{n}: {} failed at {:?}", x.name, x.witness))?;
            checked += x.checked;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("identities (1)-(5) on T^≤3(Ł2), T^≤3(Ł3): {checked} instances"))
}

fn c4_product_laws() -> Outcome {
    let mut checked = 0;
    for n in [2, 3] {
        let tw = build_tower(&arc(chain(n)), 3, CAP).map_err(|e| e.to_string())?;
        let r = product_audit(&tw).map_err(|e| e.to_string())?;
        for x in &r.results {
            ensure(x.passed, || format!("Ł{n}: {} failed at {:?}", x.name, x.witness))?;
            checked += x.checked;
        }
    }
    Ok(format!("well-definedness, bilinearity, associativity, unit: {checked} instances, 0 violations"))
}

fn eps_injective(tw: &Tower) -> bool {
    (1..=tw.max_level()).all(|n| {
        (n..=tw.max_level()).all(|m| {
            let t = tw.eps_table(n, m);
            t.iter().collect::<BTreeSet<_>>().len() == t.len()
        })
    })
}

fn c5_no_infinitesimals() -> Outcome {
    let corpus: Vec<(&str, Arc<FiniteAlgebra>, usize)> = vec![
        ("Ł2", arc(chain(2)), 3),
        ("Ł3", arc(chain(3)), 3),
        ("Ł4", arc(chain(4)), 3),
        ("Boolean", arc(boolean()), 4),
        ("diagonal", diagonal(), 2),
        ("Boolean²", boolean_on(&["a", "b"]), 3),
        ("Ł2×Ł3", arc(gamma(&UnitGroup::new(vec![2, 3]).unwrap())), 2),
    ];
    let mut levels = 0;
    for (name, a, n) in corpus {
        let tw = build_tower(&a, n, CAP).map_err(|e| format!("{name}: {e}"))?;
        for (k, lv) in tw.levels().iter().enumerate() {
            ensure(has_infinitesimal(&**lv).is_none(), || format!("{name}: infinitesimal at level {}", k + 1))?;
            levels += 1;
        }
        ensure(eps_injective(&tw), || format!("{name}: some ε is not injective"))?;
    }
    Ok(format!("{levels} tower levels over 7 bases: no infinitesimals, all ε injective"))
}

fn c6_universal_property() -> Outcome {
    let mut count = 0;
    let b1 = arc(boolean());
    let (b2, b3) = (boolean_on(&["a", "b"]), boolean_on(&["u", "v", "w"]));
    let bool_tower = build_tower(&b1, 3, CAP).map_err(|e| e.to_string())?;
    let b2_tower = build_tower(&b2, 3, CAP).map_err(|e| e.to_string())?;
    let mut lifts: Vec<(&Tower, Hom)> = Vec::new();
    for p in [&b1, &b2, &b3] {
        lifts.push((&bool_tower, extend_hom(&b1, p, &[]).map_err(|e| e.to_string())?));
    }
    for sigma in [[0, 1], [1, 0], [0, 0], [1, 1]] {
        lifts.push((&b2_tower, pullback(&b2, &b2, &sigma)));
    }
    for sigma in [[0, 1, 1], [1, 0, 0], [0, 0, 1]] {
        lifts.push((&b2_tower, pullback(&b2, &b3, &sigma)));
    }
    for (tw, f) in &lifts {
        let lift = lift_hom(tw, f.target(), f).map_err(|e| e.to_string())?;
        let audit = lift.audit(tw, f);
        ensure(audit.all_passed(), || format!("lift audit failed: {:?}", audit.results))?;
        count += 1;
    }

    let towers: Vec<(u64, Tower)> =
        [1, 2, 3, 4, 6, 8].iter().map(|&n| (n, build_tower(&arc(chain(n)), 3, CAP).unwrap())).collect();
    let tower = |n: u64| &towers.iter().find(|(m, _)| *m == n).unwrap().1;
    let mut functor_cases = 0;
    for (n, m) in [(1, 2), (2, 4), (4, 8), (2, 8), (3, 6), (1, 3), (2, 2)] {
        let h = chain_inclusion(n, m);
        let hs = functor_on_hom(tower(n), tower(m), &h).map_err(|e| e.to_string())?;
        ensure(hs.triangle(tower(n), tower(m), &h) && hs.natural(tower(n), tower(m)), || {
            format!("h♯∘ε₁ ≠ ε₁∘h for Ł{n} → Ł{m}")
        })?;
        functor_cases += 1;
    }
    for (a, b, c) in [(1, 2, 4), (2, 4, 8), (1, 2, 8)] {
        let (h, g) = (chain_inclusion(a, b), chain_inclusion(b, c));
        let composite = functor_on_hom(tower(a), tower(c), &h.then(&g).unwrap()).map_err(|e| e.to_string())?;
        let stepwise = functor_on_hom(tower(a), tower(b), &h)
            .and_then(|x| x.then(&functor_on_hom(tower(b), tower(c), &g)?))
            .map_err(|e| e.to_string())?;
        ensure(composite.same_tables(&stepwise), || format!("(g∘h)♯ ≠ g♯∘h♯ for Ł{a} → Ł{b} → Ł{c}"))?;
    }
    let swap = pullback(&b2, &b2, &[1, 0]);
    let hs = functor_on_hom(&b2_tower, &b2_tower, &swap).map_err(|e| e.to_string())?;
    ensure(hs.triangle(&b2_tower, &b2_tower, &swap), || "swap on Boolean²".into())?;
    functor_cases += 1;
    ensure(count + functor_cases >= 10, || "fewer than ten morphisms".into())?;
    Ok(format!("{count} lifts f♯∘ε₁ = f, {functor_cases} maps h♯∘ε₁ = ε₁∘h, 3 composites"))
}

fn c7_fixed_points() -> Outcome {
    let corpus = [
        ("Boolean", arc(boolean())),
        ("Boolean²", boolean_on(&["a", "b"])),
        ("⟨(1,0,0)⟩", product_closure(&[1, 0, 0])),
        ("⟨(1,1,0,0)⟩", product_closure(&[1, 1, 0, 0])),
        ("⟨(0,1,1)⟩", product_closure(&[0, 1, 1])),
    ];
    for (name, p) in &corpus {
        let v = pmv_fixed_point_check(p, 3, CAP).map_err(|e| format!("{name}: {e}"))?;
        ensure(v.holds, || format!("{name}: {:?}", v.witness))?;
    }
    Ok(format!("{} product-closed carriers absorb T^≤3", corpus.len()))
}

fn c8_scalars_and_towers() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (n, d) in [(2, 2), (2, 3), (3, 2)] {
        let s = adjunction_shadow(&arc(chain(n)), d, 2, CAP).map_err(|e| e.to_string())?;
        ensure(s.isomorphic, || format!("Ł{n}, d={d}: {:?} against {:?}", s.scalar_side, s.tower_side))?;
        parts.push(format!("(Ł{n},{d})→Ł{}", s.tower_side[0]));
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("level 2: {}", parts.join(", ")))
}

fn c9_amalgamation() -> Outcome {
    let b1 = arc(boolean());
    let (b2, b3) = (boolean_on(&["a", "b"]), boolean_on(&["u", "v", "w"]));
    let l2 = arc(chain(2));
    let diag22 = {
        let g = arc(gamma(&UnitGroup::new(vec![2, 2]).unwrap()));
        pullback(&l2, &g, &[0, 0])
    };
    let triples: Vec<(&str, Hom, Hom)> = vec![
        ("Ł2→Ł4, Ł2→Ł6", chain_inclusion(2, 4), chain_inclusion(2, 6)),
        ("Ł1→Ł2, Ł1→Ł3", chain_inclusion(1, 2), chain_inclusion(1, 3)),
        ("Ł3→Ł6, Ł3→Ł9", chain_inclusion(3, 6), chain_inclusion(3, 9)),
        ("Ł2→Ł2², Ł2→Ł4", diag22, chain_inclusion(2, 4)),
        ("B→B², B→B³", extend_hom(&b1, &b2, &[]).unwrap(), extend_hom(&b1, &b3, &[]).unwrap()),
        ("B²→B³, B²→B²", pullback(&b2, &b3, &[0, 1, 1]), pullback(&b2, &b2, &[1, 0])),
    ];
    let mut e12 = false;
    for (name, za, zb) in &triples {
        for (variant, am) in [("mv", amalgamate_mv(za, zb, CAP)), ("pmv", amalgamate_pmv(za, zb, CAP))] {
            let am = am.map_err(|e| format!("{name} ({variant}): {e}"))?;
            let z = za.source();
            let commutes = (0..z.len()).all(|i| am.f_a.apply(za.apply(i)) == am.f_b.apply(zb.apply(i)));
            ensure(commutes && am.f_a.is_injective() && am.f_b.is_injective(), || format!("{name} ({variant})"))?;
            if *name == "Ł2→Ł4, Ł2→Ł6" {
                e12 |= iso_check(&am.algebra, &arc(chain(12))).is_some();
            }
        }
    }
    ensure(e12, || "Ł2/Ł4/Ł6 did not yield Ł12".into())?;
    Ok(format!("{} triples, both variants; Ł2/Ł4/Ł6 gives Ł12", triples.len()))
}

fn c10_gamma_lambda() -> Outcome {
    let groups: Vec<Vec<u64>> =
        vec![vec![1], vec![2], vec![3], vec![6], vec![2, 3], vec![2, 2], vec![4, 1], vec![3, 1, 2]];
    for f in &groups {
        let g = UnitGroup::new(f.clone()).unwrap();
        let l = lambda(&gamma(&g)).map_err(|e| e.to_string())?;
        ensure(l.group.factor_multiset() == g.factor_multiset(), || format!("Λ(Γ({f:?})) = {:?}", l.group.factors))?;
    }
    let t23 = tensor(&arc(chain(2)), &arc(chain(3)), CAP).unwrap().algebra;
    let algebras: Vec<Arc<FiniteAlgebra>> =
        (1..=6).map(|n| arc(chain(n))).chain([diagonal(), boolean_on(&["a", "b"]), t23, arc(boolean())]).collect();
    for a in &algebras {
        let l = lambda(a).map_err(|e| e.to_string())?;
        ensure(iso_check(&arc(gamma(&l.group)), &arc(a.mv_reduct())).is_some() && l.iso.is_bijective(), || {
            format!("Γ(Λ(A)) not ≅ A for {:?}", l.group.factors)
        })?;
    }
    let fu = tensor_fu_ring(&UnitGroup::new(vec![2]).unwrap(), 3, CAP).map_err(|e| e.to_string())?;
    ensure(fu.factor_sequences() == vec![vec![2], vec![4], vec![8]], || format!("{:?}", fu.factor_sequences()))?;
    for (lv, t) in fu.levels.iter().zip(fu.tower.levels()) {
        ensure(iso_check(&arc(gamma(&lv.group)), t).is_some(), || "Γ(T^n(G)) not ≅ T^n(Γ(G))".into())?;
    }
    ensure(fu.embeddings.iter().all(|m| m.is_injective()), || "transported ε not injective".into())?;
    Ok(format!("{} groups, {} algebras round-trip; T^n((1/2)ℤ) factors 2, 4, 8", groups.len(), algebras.len()))
}

fn c11_free_evidence() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (k, d) in [(1, 1), (1, 2), (2, 1)] {
        let e = free_pmv_evidence(k, d, 2, CAP, false).map_err(|e| format!("k={k}, d={d}: {e}"))?;
        ensure(e.holds, || format!("k={k}, d={d}: {:?} / {:?}", e.pmv.witness, e.riesz.witness))?;
        parts.push(format!("({k},{d}):{}", e.pmv.left_size));
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("carriers equal at {}", parts.join(" ")))
}

const SUITE: &[&[&str]] = &[
    &["alg", "chain", "6"],
    &["tensor", "chain:2", "chain:3"],
    &["tensor", "assoc", "chain:2", "boolean", "chain:3"],
    &["tower", "chain:2", "--levels", "3", "--check-lemma21", "--check-pmv"],
    &["tower", "chain:3", "--levels", "3", "--check-pmv"],
    &["gamma", "2,3"],
    &["fu-ring", "2", "--levels", "3"],
    &["term", "grid", "(prod x1 (oplus x2 x2))", "2", "3"],
    &["term", "equal", "(scal 1/2 x1)", "(odot x1 x1)", "1", "4"],
    &["free-evidence", "1", "2"],
    &["free-evidence", "2", "1"],
];

fn c12_determinism() -> Outcome {
    let run = || -> Vec<Vec<u8>> {
        SUITE
            .iter()
            .map(|args| run_args(std::iter::once("mvt").chain(args.iter().copied())).unwrap().payload_bytes())
            .collect()
    };
    let (first, second) = (run(), run());
    for (i, (a, b)) in first.iter().zip(&second).enumerate() {
        ensure(a == b, || format!("`{}` differs between runs", SUITE[i].join(" ")))?;
    }
    let bytes: usize = first.iter().map(Vec::len).sum();
    Ok(format!("{} commands, {bytes} payload bytes identical across two runs", SUITE.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("chain tensor law", c1_chain_tensor_law),
        ("commutativity and associativity witnesses", c2_commutativity_associativity),
        ("ε/γ identities", c3_identities),
        ("tower product laws", c4_product_laws),
        ("no infinitesimals, injective ε", c5_no_infinitesimals),
        ("lifts and functoriality", c6_universal_property),
        ("product-closed fixed points", c7_fixed_points),
        ("scalar extension commutes with the tower", c8_scalars_and_towers),
        ("amalgamation", c9_amalgamation),
        ("Γ/Λ round trips and transported tower", c10_gamma_lambda),
        ("free-object grid evidence", c11_free_evidence),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
