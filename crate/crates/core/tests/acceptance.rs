//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tb_core::circle::{cyclic_between, Angle, PLCircleMap};
use tb_core::diagram::ArcDiagram;
use tb_core::element::{Element, Generator};
use tb_core::lamination::{arc_for_label, arcs_to_level, central_label, double_arc, gap_depth, is_central, GapId};
use tb_core::membership::{recognize, t3_check, MembershipError};
use tb_core::thompson_t::{boundary_action, eval_t_word, tau, tau_inv, TGen, TLetter, TreePair};
use tb_core::words::{
    abelianize, decompose, decompose_traced, eval_word, random_element, transport_gap_to_center, DecomposeTrace,
};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gen(g: Generator) -> Element {
    Element::generator(g)
}

/// Seeded element with word length in `0..=max_len`.
fn sample(seed: u64, max_len: usize) -> Element {
    random_element(seed, (seed as usize * 7 + 3) % (max_len + 1))
}

fn pl(s: &str) -> PLCircleMap {
    s.parse().expect("valid PL map")
}

fn generator_fidelity() -> Check {
    let table = [
        (Generator::Alpha, "1/3:1/6,2/3:5/6"),
        (Generator::Beta, "1/6:1/6,2/3:7/24,17/24:1/3,5/6:5/6"),
        (Generator::Gamma, "1/6:1/6,7/24:19/96,29/96:5/24,1/3:1/3"),
    ];
    for (g, text) in table {
        let got = gen(g).to_pl();
        ensure(got.real_breakpoints() == pl(text).breakpoints(), || {
            format!("{:?}: {}", g, got)
        })?;
    }
    let delta = gen(Generator::Delta).to_pl();
    ensure(
        delta.is_rotation() && delta == PLCircleMap::rotation(Angle::frac(1, 2)),
        || format!("delta: {}", delta),
    )?;
    for k in 0..48 {
        let t = Angle::new(k, 48).unwrap();
        ensure(delta.eval(&t).unwrap() == t.add(&Angle::frac(1, 2)), || {
            format!("delta at {}", t)
        })?;
    }
    Ok(())
}

fn relation() -> Check {
    let a = gen(Generator::Alpha);
    let d = gen(Generator::Delta);
    let lhs = a.compose(&a);
    let rhs = d.inverse().compose(&d.conjugate_by(&a));
    ensure(lhs.equal(&rhs), || format!("{} vs {}", lhs, rhs))
}

fn reduced_uniqueness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for seed in 0..500 {
        let f = sample(seed, 12);
        let canonical = f.reduce().to_string();
        for _ in 0..2 {
            let mut g = f.clone();
            for _ in 0..rng.gen_range(0..=8) {
                g = g.expand_domain(rng.gen_range(0..g.leaf_count()));
            }
            let got = g.reduce().to_string();
            ensure(got == canonical, || format!("seed {}: {} vs {}", seed, got, canonical))?;
        }
    }
    Ok(())
}

fn group_axioms() -> Check {
    let id = Element::identity();
    for seed in 0..200 {
        let (f, g, h) = (sample(3 * seed, 8), sample(3 * seed + 1, 8), sample(3 * seed + 2, 8));
        ensure(f.compose(&g).compose(&h) == f.compose(&g.compose(&h)), || {
            format!("associativity, seed {}", seed)
        })?;
        ensure(f.compose(&f.inverse()) == id && f.inverse().compose(&f) == id, || {
            format!("inverse, seed {}", seed)
        })?;
        ensure(f.compose(&id) == f.reduce() && id.compose(&f) == f.reduce(), || {
            format!("identity, seed {}", seed)
        })?;
    }
    Ok(())
}

fn membership() -> Check {
    for seed in 0..500 {
        let f = sample(seed, 12).reduce();
        let map = f.to_pl();
        ensure(t3_check(&map), || format!("t3 check, seed {}", seed))?;
        match recognize(&map) {
            Ok(g) => ensure(g == f, || format!("seed {}: recognized {} for {}", seed, g, f))?,
            Err(e) => return Err(format!("seed {}: rejected {} ({})", seed, f, e)),
        }
    }
    match recognize(&pl("0:1/3")) {
        Err(e @ MembershipError::ArcNotPreserved(_)) => {
            ensure(e.witness() == "{1/3,2/3}", || format!("witness {}", e.witness()))?
        }
        other => return Err(format!("rotation by 1/3: {:?}", other)),
    }
    let slope3 = pl("0:0,1/6:1/2");
    match recognize(&slope3) {
        Err(MembershipError::SlopeNotPowerOfTwo { .. }) => {}
        other => return Err(format!("slope 3: {:?}", other)),
    }
    ensure(!t3_check(&slope3), || "slope 3 passes t3_check".into())
}

fn t_sample(rng: &mut ChaCha8Rng) -> TreePair {
    let len = rng.gen_range(0..=8);
    let word: Vec<TLetter> = (0..len)
        .map(|_| TLetter {
            gen: [TGen::B, TGen::G, TGen::D][rng.gen_range(0..3)],
            inverse: rng.gen(),
        })
        .collect();
    eval_t_word(&word)
}

fn stab_sample(seed: u64) -> Element {
    let f = sample(seed, 8);
    let gap = f.image_of_gap(&GapId::Central).unwrap();
    eval_word(&transport_gap_to_center(&gap)).compose(&f)
}

fn tau_isomorphism() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..200 {
        let (f, g) = (tau_inv(&t_sample(&mut rng)), tau_inv(&t_sample(&mut rng)));
        ensure(f.is_in_rist_c() && g.is_in_rist_c(), || {
            format!("pair {} not in rist", i)
        })?;
        let (tf, tg) = (tau(&f).unwrap(), tau(&g).unwrap());
        ensure(tau(&f.compose(&g)).unwrap() == tf.compose(&tg), || {
            format!("pair {}: not multiplicative", i)
        })?;
        ensure(tau_inv(&tf) == f, || format!("pair {}: tau_inv(tau(f)) != f", i))?;
    }
    ensure(
        tau(&gen(Generator::Delta)).unwrap() == TreePair::half_rotation(),
        || "tau(delta)".into(),
    )?;
    for seed in 0..100 {
        let (f, g) = (stab_sample(2 * seed), stab_sample(2 * seed + 1));
        ensure(f.is_in_stab_c(), || format!("seed {} not in stab", seed))?;
        let lhs = boundary_action(&f.compose(&g)).unwrap();
        let rhs = boundary_action(&f).unwrap().compose(&boundary_action(&g).unwrap());
        ensure(lhs == rhs, || format!("boundary action, seed {}", seed))?;
    }
    Ok(())
}

fn generation() -> Check {
    for seed in 0..300 {
        let f = sample(seed, 10);
        let mut trace = DecomposeTrace::default();
        let w = decompose_traced(&f, &mut trace);
        ensure(eval_word(&w) == f.reduce(), || {
            format!("seed {}: {} does not evaluate to {}", seed, w, f)
        })?;
        ensure(trace.measures.iter().all(|(before, after)| after < before), || {
            format!("seed {}: measure did not decrease: {:?}", seed, trace.measures)
        })?;
    }
    ensure(
        eval_word(&decompose(&gen(Generator::Delta))) == gen(Generator::Delta),
        || "delta".into(),
    )
}

fn gap_transitivity() -> Check {
    let mut gaps = vec![GapId::Central];
    gaps.extend(arcs_to_level(7).into_iter().map(GapId::Behind));
    gaps.retain(|g| gap_depth(g) <= 4);
    let mut depths = BTreeSet::new();
    for gap in &gaps {
        depths.insert(gap_depth(gap));
        let f = eval_word(&transport_gap_to_center(gap));
        let image = f.image_of_gap(gap).map_err(|e| e.to_string())?;
        ensure(image == GapId::Central, || format!("{} goes to {}", gap, image))?;
    }
    ensure(depths == (0..=4).collect(), || format!("depths seen: {:?}", depths))
}

fn abelianization() -> Check {
    ensure(abelianize(&gen(Generator::Alpha)) == 1, || "alpha".into())?;
    for g in [Generator::Beta, Generator::Gamma, Generator::Delta] {
        ensure(abelianize(&gen(g)) == 0, || format!("{:?}", g))?;
    }
    for seed in 0..200 {
        let (f, g) = (sample(2 * seed, 8), sample(2 * seed + 1, 8));
        ensure(abelianize(&f.compose(&g)) == abelianize(&f) ^ abelianize(&g), || {
            format!("pair {}", seed)
        })?;
        if seed < 100 {
            let c = f.inverse().compose(&g.inverse()).compose(&f).compose(&g);
            ensure(abelianize(&c) == 0, || format!("commutator {}", seed))?;
            let w = decompose(&f);
            ensure(w.alpha_exponent().rem_euclid(2) as u8 == abelianize(&f), || {
                format!("parity {}", seed)
            })?;
        }
    }
    Ok(())
}

fn lamination_oracle() -> Check {
    let arcs = arcs_to_level(common::MAX_LEVEL);
    let leaves: Vec<common::Leaf> = arcs.iter().map(common::as_leaf).collect();
    for (i, p) in leaves.iter().enumerate() {
        for q in &leaves[i + 1..] {
            ensure(common::compatible(*p, *q), || format!("{:?} crosses {:?}", p, q))?;
        }
    }
    let set: BTreeSet<common::Leaf> = leaves.iter().copied().collect();
    for arc in &arcs {
        ensure(set.contains(&common::as_leaf(&double_arc(arc))), || {
            format!("{} doubles out", arc)
        })?;
    }
    let oracle = common::pullback_oracle();
    ensure(set == oracle, || {
        format!("{} generated, {} from pullback", set.len(), oracle.len())
    })?;
    let labels: Vec<Angle> = (0..64u64).map(|k| Angle::new(k, 64u64).unwrap()).collect();
    let central: Vec<_> = labels
        .iter()
        .map(|d| arc_for_label(d).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let distinct: BTreeSet<(Angle, Angle)> = central.iter().map(|a| a.endpoints()).collect();
    ensure(distinct.len() == 64, || "labels are not injective".into())?;
    for (d, arc) in labels.iter().zip(&central) {
        ensure(is_central(arc) && &central_label(arc).unwrap() == d, || {
            format!("label {}", d)
        })?;
    }
    let mids: Vec<Angle> = central
        .iter()
        .map(|a| a.farside().lo.ccw_midpoint(&a.farside().hi))
        .collect();
    for k in 0..64 {
        ensure(
            cyclic_between(&mids[k], &mids[(k + 1) % 64], &mids[(k + 2) % 64]),
            || format!("order at {}", k),
        )?;
    }
    Ok(())
}

fn structural_counts() -> Check {
    let base = ArcDiagram::base();
    let expected: BTreeSet<(Angle, Angle)> = [(1, 6, 1, 3), (1, 3, 2, 3), (2, 3, 5, 6), (5, 6, 1, 6)]
        .iter()
        .map(|&(a, b, c, d)| (Angle::frac(a, b), Angle::frac(c, d)))
        .collect();
    let got: BTreeSet<(Angle, Angle)> = base.leaves().iter().map(|l| (l.lo().clone(), l.hi())).collect();
    ensure(got == expected, || format!("base intervals {:?}", got))?;
    ensure(base.arc_count() == 2 && base.leaf_count() == 4, || "base counts".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..300 {
        let mut f = sample(seed, 10);
        for _ in 0..3 {
            for d in [f.domain(), f.range()] {
                ensure(d.leaf_count() == 2 * d.arc_count(), || format!("seed {}: {}", seed, d))?;
                ensure(d.leaves().len() == d.leaf_count(), || {
                    format!("seed {}: leaf list", seed)
                })?;
            }
            f = f.expand_domain(rng.gen_range(0..f.leaf_count()));
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("generator fidelity", generator_fidelity),
        ("relation alpha^2 = delta^-1 delta^alpha", relation),
        ("reduced-form uniqueness", reduced_uniqueness),
        ("group axioms", group_axioms),
        ("membership", membership),
        ("tau isomorphism", tau_isomorphism),
        ("generation", generation),
        ("gap transitivity", gap_transitivity),
        ("abelianization", abelianization),
        ("lamination oracle", lamination_oracle),
        ("structural counts", structural_counts),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(payload) => Err(payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS {} ({:.1}s)", i + 1, name, secs),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {} ({:.1}s): {}", i + 1, name, secs, why);
            }
        }
    }
    let total = start.elapsed();
    println!(
        "acceptance: {} of {} passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        total.as_secs_f64()
    );
    if total > Duration::from_secs(60) {
        println!("acceptance: over the 60s budget");
        failed += 1;
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
