//! End-to-end acceptance checks. Runs without the libtest harness so each
//! criterion prints exactly one PASS/FAIL line; any failure makes the
//! process exit non-zero.

use std::collections::{BTreeSet, HashSet};
use std::io::Cursor;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use haarforge::census::CensusRecord;
use haarforge::classify::{classify, is_arc_transitive, is_cayley, is_haar, verify_haar_witness, verify_theorems};
use haarforge::graph::{
    bipartition, cayley_graph, cyclic_cover_sigma0, double_generalized_petersen, generalized_petersen, haar_graph,
    kronecker_cover, voltage_double_cover,
};
use haarforge::graph6::encode_graph6_string;
use haarforge::groups::{cyclic, direct_product, generalized_dihedral, semidirect_cyclic};
use haarforge::perm::closure;
use haarforge::search::{automorphism_group, brute_force_automorphisms, canonical_form, is_isomorphic};
use haarforge::{ElementSubset, FiniteGroup, Graph, Permutation};

const CATALOG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/groups/order20");

type Outcome = Result<String, String>;

fn cli(args: &[&str]) -> (u8, String, String) {
    let mut stdin = Cursor::new(Vec::new());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("haarforge").chain(args.iter().copied());
    let code = haarforge_cli::run(argv, &mut stdin, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn dgp(n: usize, r: usize) -> Graph {
    double_generalized_petersen(n, r).unwrap().0
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Generators are automorphisms and close to a group of order `order`
/// without fixed points.
fn semiregular_witness(graph: &Graph, gens: &[Permutation], order: usize) -> bool {
    let n = graph.order();
    gens.iter().all(|g| graph.is_automorphism(g))
        && closure(n, gens, order + 1)
            .is_some_and(|e| e.len() == order && e.iter().filter(|x| !x.is_identity()).all(|x| !x.has_fixed_point()))
}

fn f40_profile() -> Outcome {
    let (code, g6, _) = cli(&["construct", "--family", "dgp", "--n", "10", "--r", "2"]);
    ensure(code == 0, || format!("construct exited {code}"))?;
    let (code, json, err) = cli(&["analyze", g6.trim()]);
    ensure(code == 0, || format!("analyze exited {code}: {err}"))?;
    let report: Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let expected = serde_json::json!({
        "order": 40, "edges": 60, "valency": 3, "bipartite": true, "girth": 8, "aut_order": 480,
        "vertex_transitive": true, "arc_transitive": true, "cayley": false, "haar": true,
    });
    for (key, want) in expected.as_object().unwrap() {
        ensure(report[key] == *want, || format!("{key} = {} (want {want})", report[key]))?;
    }
    Ok("order 40, 60 edges, cubic, bipartite, girth 8, |Aut| 480, VT, AT, non-Cayley, Haar".into())
}

fn theorem_cross_check() -> Outcome {
    let sweep = verify_theorems(30);
    let bad = sweep.mismatches();
    ensure(bad.is_empty(), || format!("{} mismatches, first {:?}", bad.len(), bad[0].prediction))?;
    let expected_rows: usize = (3..=30).map(|n| n - 1).sum();
    ensure(sweep.rows.len() == expected_rows, || format!("{} rows, want {expected_rows}", sweep.rows.len()))?;
    let even = sweep.rows.iter().filter(|r| r.prediction.n % 2 == 0);
    for row in even.clone() {
        ensure(row.haar == row.vertex_transitive, || format!("D({},{}) haar != vt", row.prediction.n, row.prediction.r))?;
    }
    let (code, _, _) = cli(&["verify-theorems", "--max-n", "30"]);
    ensure(code == 0, || format!("verify-theorems exited {code}"))?;
    Ok(format!("{} pairs (n <= 30), 0 mismatches, haar = vt on {} even-n pairs", sweep.rows.len(), even.count()))
}

fn isomorphism_suite() -> Outcome {
    let mut checks = 0;
    let mut expect = |a: &Graph, b: &Graph, want: bool, what: String| {
        checks += 1;
        ensure(is_isomorphic(a, b) == want, || format!("{what}: expected {}", if want { "yes" } else { "no" }))
    };
    for n in 3..=16 {
        for r in 1..n {
            expect(&dgp(n, r), &dgp(n, n - r), true, format!("D({n},{r}) vs D({n},{})", n - r))?;
        }
    }
    for n in 2..=10 {
        for r in 1..n {
            expect(&dgp(2 * n, r), &dgp(2 * n, n - r), true, format!("D({},{r}) vs D({},{})", 2 * n, 2 * n, n - r))?;
        }
    }
    for r in 1..=6 {
        let gp = generalized_petersen(4 * r + 2, 2).unwrap();
        expect(&dgp(2 * r + 1, r), &gp, true, format!("D({},{r}) vs G({},2)", 2 * r + 1, 4 * r + 2))?;
    }
    expect(&dgp(7, 2), &dgp(7, 3), false, "D(7,2) vs D(7,3)".into())?;
    let f40 = dgp(10, 2);
    expect(&kronecker_cover(&generalized_petersen(10, 2).unwrap()), &f40, true, "Kronecker cover of G(10,2)".into())?;
    let g103 = generalized_petersen(10, 3).unwrap();
    let inner: Vec<_> = g103.edges().filter(|&(u, v)| u >= 10 && v >= 10).collect();
    expect(&voltage_double_cover(&g103, &inner).unwrap(), &f40, true, "inner double cover of G(10,3)".into())?;
    for n in 3..=12 {
        // k = 2r = n would give Σ₀ parallel edges.
        for r in (1..n).filter(|&r| 2 * r != n) {
            let sigma = cyclic_cover_sigma0(n, 1, 2 * r as i64, 1).unwrap();
            expect(&sigma, &dgp(n, r), true, format!("Σ₀({n},1,{},1) vs D({n},{r})", 2 * r))?;
        }
    }
    let g6 = |g: &Graph| encode_graph6_string(g).unwrap();
    let (code, text, _) = cli(&["iso", &g6(&dgp(7, 2)), &g6(&dgp(7, 3))]);
    ensure(code == 1 && text.trim() == "no", || format!("iso D(7,2) D(7,3) gave {code} {text:?}"))?;
    Ok(format!("{checks} pairs decided as expected; CLI iso exits 1 on D(7,2), D(7,3)"))
}

fn delta_witnesses() -> Outcome {
    for (n, r) in [(4usize, 1usize), (10, 3), (20, 3), (26, 5)] {
        let rep = verify_haar_witness(n, r).map_err(|e| format!("D({n},{r}): {e}"))?;
        let d = &rep.delta;
        let (graph, _) = double_generalized_petersen(n, d.r).unwrap();
        ensure(graph.is_automorphism(&d.delta), || format!("D({n},{r}): delta is not an automorphism"))?;
        let bp = bipartition(&graph).unwrap();
        let keeps = bp.part0.iter().all(|&v| bp.color[d.delta.apply(v)] == 0);
        ensure(keeps, || format!("D({n},{r}): delta swaps parts"))?;
        let e = rep.conjugation_exponent.ok_or_else(|| format!("D({n},{r}): α² conjugates to no ±2r power"))?;
        let ni = n as i64;
        let two_r = 2 * r as i64;
        ensure(
            [two_r, -two_r].iter().any(|t| (e - t).rem_euclid(ni) == 0),
            || format!("D({n},{r}): exponent {e} is not ±{two_r} mod {n}"),
        )?;
        ensure(rep.group_order == 2 * n as u64, || format!("D({n},{r}): |<α²,δ>| = {}", rep.group_order))?;
        ensure(rep.regular_on_part0 && rep.regular_on_part1, || format!("D({n},{r}): not regular on both parts"))?;
        let (code, _, err) = cli(&["delta", "--n", &n.to_string(), "--r", &r.to_string()]);
        ensure(code == 0, || format!("delta --n {n} --r {r} exited {code}: {err}"))?;
    }
    Ok("(4,1) (10,3) (20,3) (26,5): δ edge- and part-preserving, α² ↦ α^±2r, order 2n, regular on both parts".into())
}

fn random_graph(rng: &mut StdRng, n: usize) -> Graph {
    let p: f64 = rng.gen_range(0.2..0.8);
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
    Graph::from_edges(n, edges).unwrap()
}

fn random_permutation(rng: &mut StdRng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let z4 = cyclic(4).unwrap();
    let mut corpus = vec![
        generalized_petersen(5, 2).unwrap(),
        generalized_petersen(4, 1).unwrap(),
        Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap(),
        Graph::from_edges(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v)))).unwrap(),
        Graph::from_edges(5, (1..5).map(|v| (0, v))).unwrap(),
        Graph::from_edges(6, (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v)))).unwrap(),
        Graph::empty(5),
        haar_graph(&z4, &ElementSubset::new(&z4, [0, 1]).unwrap()).unwrap(),
    ];
    let fixtures = corpus.len();
    let mut rng = StdRng::seed_from_u64(40);
    corpus.extend((0..240).map(|i| {
        let n = 4 + i % 5;
        random_graph(&mut rng, n)
    }));
    let mut relabelings = 0;
    for (i, g) in corpus.iter().enumerate() {
        let fast = automorphism_group(g);
        let slow = brute_force_automorphisms(g).map_err(|e| e.to_string())?;
        ensure(fast.order() == slow.order(), || format!("graph {i}: |Aut| {} vs {}", fast.order(), slow.order()))?;
        let mutual = fast.generators().iter().all(|p| slow.contains(p)) && slow.generators().iter().all(|p| fast.contains(p));
        ensure(mutual, || format!("graph {i}: generators not mutually contained"))?;
        let cert = canonical_form(g);
        for _ in 0..20 {
            let p = random_permutation(&mut rng, g.order());
            let h = g.relabel(&p).unwrap();
            ensure(canonical_form(&h) == cert, || format!("graph {i}: certificate changed under relabeling"))?;
            relabelings += 1;
        }
    }
    Ok(format!("{fixtures} fixtures + 240 random graphs (order 4-8) agree with brute force; {relabelings} relabelings keep certificates"))
}

fn fixture_groups() -> Vec<(String, FiniteGroup)> {
    vec![
        ("Z6".into(), cyclic(6).unwrap()),
        ("Z8".into(), cyclic(8).unwrap()),
        ("Z2xZ4".into(), direct_product(&cyclic(2).unwrap(), &cyclic(4).unwrap())),
        ("D5".into(), generalized_dihedral(&cyclic(5).unwrap()).unwrap()),
        ("D6".into(), generalized_dihedral(&cyclic(6).unwrap()).unwrap()),
        ("Z7:Z3".into(), semidirect_cyclic(7, 3, 2).unwrap()),
        ("Z3:Z4".into(), semidirect_cyclic(3, 4, 2).unwrap()),
    ]
}

fn symmetric_subset(rng: &mut StdRng, g: &FiniteGroup, picks: usize) -> ElementSubset {
    let mut members = BTreeSet::new();
    for _ in 0..picks {
        let x = rng.gen_range(1..g.order());
        members.insert(x);
        members.insert(g.inv(x));
    }
    ElementSubset::new(g, members).unwrap()
}

fn recognition_soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let (mut cayley_count, mut haar_count, mut abelian_haar) = (0, 0, 0);
    for (name, g) in fixture_groups() {
        for picks in 1..=3 {
            for _ in 0..3 {
                let s = symmetric_subset(&mut rng, &g, picks);
                let graph = cayley_graph(&g, &s).unwrap();
                let (yes, w) = is_cayley(&graph);
                let ok = yes && w.as_deref().is_some_and(|w| semiregular_witness(&graph, w, graph.order()));
                ensure(ok, || format!("Cay({name}, {:?}) not recognized with a valid witness", s.members()))?;
                let bip = bipartition(&graph).is_some();
                ensure(is_haar(&graph).0 == bip, || format!("Cay({name}, {:?}): is_haar != bipartite", s.members()))?;
                cayley_count += 1;
            }
        }
        for size in 1..=4 {
            for _ in 0..2 {
                let mut members: Vec<usize> = (0..g.order()).collect();
                members.shuffle(&mut rng);
                let s = ElementSubset::new(&g, members[..size].iter().copied()).unwrap();
                let graph = haar_graph(&g, &s).unwrap();
                let (yes, w) = is_haar(&graph);
                let ok = yes && w.as_deref().is_some_and(|w| semiregular_witness(&graph, w, g.order()));
                ensure(ok, || format!("H({name}, {:?}) not recognized as Haar", s.members()))?;
                haar_count += 1;
                if g.is_abelian() {
                    let (yes, w) = is_cayley(&graph);
                    let ok = yes && w.as_deref().is_some_and(|w| semiregular_witness(&graph, w, graph.order()));
                    ensure(ok, || format!("abelian H({name}, {:?}) not recognized as Cayley", s.members()))?;
                    abelian_haar += 1;
                }
            }
        }
    }
    Ok(format!("{cayley_count} Cayley fixtures with verified witnesses, {haar_count} Haar fixtures, {abelian_haar} abelian Haar graphs Cayley"))
}

fn arc_transitivity_restriction() -> Outcome {
    let expected: BTreeSet<(usize, usize)> = [(5, 2), (5, 3), (10, 2), (10, 3), (10, 7), (10, 8)].into();
    let mut found = BTreeSet::new();
    let mut total = 0;
    for n in 3..=20 {
        for r in 1..n {
            total += 1;
            if is_arc_transitive(&dgp(n, r)).map_err(|e| e.to_string())? {
                found.insert((n, r));
            }
        }
    }
    ensure(found == expected, || format!("arc-transitive set {found:?}"))?;
    Ok(format!("{total} pairs (n <= 20); arc-transitive exactly at {expected:?}"))
}

fn census_records(valency: &str, workers: &str) -> Result<Vec<CensusRecord>, String> {
    let args = ["census", "--catalog", CATALOG, "--order", "40", "--valency", valency, "--filter", "vt-noncayley"];
    let mut args = args.to_vec();
    args.extend(["--workers", workers, "--json"]);
    let (code, out, err) = cli(&args);
    ensure(code == 0, || format!("census exited {code}: {err}"))?;
    out.lines().map(|l| serde_json::from_str(l).map_err(|e| e.to_string())).collect()
}

fn trivalent_census() -> Outcome {
    let records = census_records("3", "1")?;
    ensure(records.len() == 1, || format!("{} classes", records.len()))?;
    let f40 = canonical_form(&dgp(10, 2));
    ensure(records[0].certificate == f40.as_str(), || "the class is not D(10,2)".into())?;
    Ok(format!("one class, certificate-equal to D(10,2), from {} {:?}", records[0].group, records[0].subset))
}

fn full_census() -> Outcome {
    let records = census_records("3-17", "1")?;
    let valencies: BTreeSet<usize> = records.iter().map(|r| r.valency).collect();
    ensure(records.len() == 60, || format!("{} classes", records.len()))?;
    ensure(valencies == (3..=17).collect(), || format!("valencies {valencies:?}"))?;
    let certs: HashSet<&str> = records.iter().map(|r| r.certificate.as_str()).collect();
    ensure(certs.len() == 60, || "duplicate certificates".into())?;
    let again = census_records("3-17", "3")?;
    let again: HashSet<&str> = again.iter().map(|r| r.certificate.as_str()).collect();
    ensure(again == certs, || "record set depends on the worker count".into())?;
    // Reconstruct a tenth of the records from their provenance.
    let groups = haarforge::catalog::load_catalog(std::path::Path::new(CATALOG)).map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(9);
    for rec in records.choose_multiple(&mut rng, 6) {
        let g = groups.iter().find(|g| g.name() == rec.group).ok_or("unknown group")?;
        let graph = rec.rebuild(g);
        ensure(canonical_form(&graph).as_str() == rec.certificate, || format!("{rec:?} does not rebuild"))?;
        ensure(is_haar(&graph).0, || format!("{rec:?} is not Haar"))?;
    }
    Ok("60 classes, valencies 3 through 17, same set with 1 and 3 workers, 6 sampled records rebuild as Haar".into())
}

fn corollary_sweep() -> Outcome {
    for r in 2..=4usize {
        let m = r * r + 1;
        let report = classify(&dgp(2 * m, r));
        ensure(report.haar && report.vertex_transitive && !report.cayley, || {
            format!("D({},{r}): haar {} vt {} cayley {}", 2 * m, report.haar, report.vertex_transitive, report.cayley)
        })?;
    }
    Ok("D(10,2), D(20,3), D(34,4): Haar, vertex-transitive, non-Cayley".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 10] = [
        ("F40 profile", f40_profile, Some(Duration::from_secs(10))),
        ("theorem cross-check", theorem_cross_check, Some(Duration::from_secs(15 * 60))),
        ("isomorphism suite", isomorphism_suite, Some(Duration::from_secs(2 * 60))),
        ("delta witnesses", delta_witnesses, Some(Duration::from_secs(60))),
        ("oracle equivalence", oracle_equivalence, Some(Duration::from_secs(5 * 60))),
        ("recognition soundness", recognition_soundness, Some(Duration::from_secs(2 * 60))),
        ("arc-transitivity restriction", arc_transitivity_restriction, Some(Duration::from_secs(10 * 60))),
        ("trivalent census", trivalent_census, Some(Duration::from_secs(30 * 60))),
        ("full order-40 census", full_census, None),
        ("corollary sweep", corollary_sweep, Some(Duration::from_secs(20 * 60))),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(limit)) if took > limit => Err(format!("took {took:.1?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
