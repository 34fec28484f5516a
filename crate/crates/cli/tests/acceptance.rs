//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use granule_cli::document::RealizationDocument;
use granule_core::control::{
    component_count, controllability_test, controllable_subrealization, lemma_quotients, no_crossing,
};
use granule_core::examples;
use granule_core::factorize::{
    controller_canonical, first_state_chain, granule_products, is_homomorphic, size_formulas,
    structurally_nonhomomorphic, technical_lemma_check, verify_unique_factorization, Decomposer,
};
use granule_core::fragments::{all_fragments, covering_pairs, hasse_dot, Fragment};
use granule_core::granules::GranuleTable;
use granule_core::testing::{oracle, random};
use granule_core::trellis::is_reduced;
use granule_core::{compute_behavior, reduce, GroupElement, Realization};
use rand::rngs::StdRng;
use rand::SeedableRng;

const RANDOM_INSTANCES: usize = 520;
const ORACLE_TUPLE_LIMIT: u128 = 4096;

/// Collects failure messages for one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.failures.push(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }

    fn within(&mut self, started: Instant, limit: Duration) {
        let elapsed = started.elapsed();
        self.notes.push(format!("{:.2}s", elapsed.as_secs_f64()));
        self.check(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"));
    }
}

fn t(residues: &[u32]) -> GroupElement {
    GroupElement::new(residues.to_vec())
}

/// The worked example over Z4, checked against the published values.
fn criterion_1() -> Checks {
    let started = Instant::now();
    let mut c = Checks::default();
    let r = examples::z4_conventional();
    let bundle = compute_behavior(&r);
    let table = GranuleTable::build(&bundle);

    c.eq("|B|", bundle.behavior.order(), 4);
    c.eq("invariant factors of B", bundle.behavior.invariant_factors(), vec![4]);
    // Published elements (a, s_0 s_1 s_2 s_0); S_2 = {0, 2} is stored as Z2.
    for (a, s) in [
        ([0, 0, 0], [0, 0, 0]),
        ([1, 1, 2], [0, 1, 2]),
        ([2, 2, 0], [0, 2, 0]),
        ([3, 3, 2], [0, 3, 2]),
    ] {
        let x = t(&[a[0], a[1], a[2], s[0], s[1], s[2] / 2]);
        c.check(bundle.behavior.contains_element(&x), || format!("{x} missing from B"));
    }
    let b1 = &table.chain().levels[1];
    c.eq("|B_1|", b1.order(), 2);
    c.eq("B_1 = B^[0,1]", b1, &table.proper(0, 1).sub);
    c.eq(
        "B_1 elements",
        b1.elements().to_vec(),
        vec![t(&[0; 6]), t(&[2, 2, 0, 0, 2, 0])],
    );

    let nontrivial: Vec<_> = table
        .nontrivial()
        .map(|rec| (rec.fragment, rec.granule.order(), rec.granule.invariant_factors()))
        .collect();
    c.eq(
        "nontrivial granules",
        nontrivial,
        vec![
            (Fragment::proper(3, 0, 1), 2, vec![2]),
            (Fragment::proper(3, 0, 2), 2, vec![2]),
        ],
    );
    c.eq("P", granule_products(&table).1, 4);
    let test = controllability_test(&r, &bundle).expect("test runs");
    c.check(test.controllable, || "not controllable".into());
    c.eq("components", component_count(&r, &bundle).ok(), Some(1));

    let ct = controller_canonical(&r, &bundle, &table).expect("reduced");
    c.eq("atomic trellises", ct.atoms.len(), 2);
    for atom in &ct.atoms {
        let states: BTreeSet<usize> = (0..3).map(|j| atom.state_count(j)).collect();
        c.eq(
            &format!("state counts of atom {}", atom.fragment),
            states,
            BTreeSet::from([1, 2]),
        );
    }
    c.eq(
        "canonical trajectories",
        ct.trajectories(),
        bundle.behavior.elements().to_vec(),
    );
    c.check(!is_homomorphic(&ct), || "canonical realization is homomorphic".into());
    c.check(structurally_nonhomomorphic(&table), || {
        "Z2 x Z2 vs Z4 not detected".into()
    });
    c.within(started, Duration::from_secs(1));
    c
}

/// The two-state cycle: the smallest uncontrollable realization.
fn criterion_2() -> Checks {
    let started = Instant::now();
    let mut c = Checks::default();
    let r = examples::two_state_cycle();
    let bundle = compute_behavior(&r);
    let table = GranuleTable::build(&bundle);
    let test = controllability_test(&r, &bundle).expect("test runs");
    c.eq("|U|, |B|", (test.universe_order, test.extended_order), (4, 2));
    c.eq("ratio", test.ratio(), (2, 4));
    c.check(!test.controllable, || "reported controllable".into());
    c.eq("|Gamma_R|", table.top_granule().order(), 2);
    c.eq("components", component_count(&r, &bundle).ok(), Some(2));
    let (_, p) = granule_products(&table);
    c.eq("P", p, 2);
    c.eq("|B|", u128::from(bundle.behavior.order()), p);
    c.check(table.controllable_subbehavior().is_trivial(), || {
        "B^c is not trivial".into()
    });
    c.within(started, Duration::from_secs(1));
    c
}

struct Instance {
    raw: Realization,
    reduced: Realization,
}

fn instances() -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let params = random::Params::default();
    (0..RANDOM_INSTANCES)
        .map(|_| {
            let raw = random::realization(&mut rng, &params);
            let reduced = reduce(&raw);
            Instance { raw, reduced }
        })
        .collect()
}

/// Every theorem on random reduced realizations.
fn criterion_3(cases: &[Instance]) -> Checks {
    let started = Instant::now();
    let mut c = Checks::default();
    let mut uncontrollable = 0;
    let mut oracle_runs = 0;
    let mut homomorphic = 0;
    let mut transitions_match = 0;
    let mut lengths = BTreeSet::new();
    let mut sizes = Vec::new();
    for (k, case) in cases.iter().enumerate() {
        let r = &case.reduced;
        let n = r.n();
        lengths.insert(n);
        let bundle = compute_behavior(r);
        let table = GranuleTable::build(&bundle);
        sizes.push(bundle.behavior.order());
        let tag = |what: &str| format!("instance {k} (n = {n}): {what}");
        c.check(is_reduced(r, &bundle), || tag("not reduced"));
        c.check((0..n).all(|j| r.state_alphabet(j).order() <= 16), || {
            tag("state alphabet over 16")
        });

        // (a)
        let test = match controllability_test(r, &bundle) {
            Ok(test) => test,
            Err(e) => {
                c.failures.push(tag(&e.to_string()));
                continue;
            }
        };
        let (quotient, states) = test.ratio();
        let top = table.top_granule().order();
        let components = component_count(r, &bundle).unwrap_or(0);
        c.check(quotient <= states, || tag("|U|/|B| exceeds |S|"));
        c.check(
            test.controllable == (top == 1) && (top == 1) == (components == 1) && components == top,
            || {
                tag(&format!(
                    "controllable {} but |Gamma_R| {top}, components {components}",
                    test.controllable
                ))
            },
        );
        c.check(no_crossing(r, &bundle, &table).unwrap_or(false), || {
            tag("a branch crosses cosets")
        });
        uncontrollable += usize::from(!test.controllable);

        // (b)
        match verify_unique_factorization(r, &bundle, &table) {
            Ok(f) => c.check(f.holds && f.holds_c, || tag(&format!("{f:?}"))),
            Err(e) => c.failures.push(tag(&e.to_string())),
        }
        let (_, p) = granule_products(&table);

        // (c)
        let rc = controllable_subrealization(r, &table);
        let bc = compute_behavior(&rc);
        c.check(&bc.behavior == table.controllable_subbehavior(), || {
            tag("R^c does not realize B^c")
        });
        c.check(controllability_test(&rc, &bc).is_ok_and(|t| t.controllable), || {
            tag("R^c fails the controllability test")
        });

        // (d)
        c.check(
            lemma_quotients(r, &bundle, &table).is_ok_and(|rows| rows.iter().all(|row| row.holds)),
            || tag("state or constraint quotient differs from Gamma_R"),
        );

        // (e)
        for j in 0..n {
            c.check(
                first_state_chain(r, &bundle, &table, j).is_ok_and(|chain| chain.holds()),
                || tag(&format!("first-state chain at {j}")),
            );
        }

        // (f)
        c.check(
            size_formulas(r, &bundle, &table).is_ok_and(|rows| rows.iter().all(|row| row.holds())),
            || tag("size formulas"),
        );
        c.check(
            technical_lemma_check(r, &bundle, &table).is_ok_and(|rows| rows.iter().all(|row| row.holds())),
            || tag("controllable constraint sizes"),
        );

        // (g)
        match Decomposer::new(&table) {
            Ok(decomposer) => {
                let mut seen = BTreeSet::new();
                let reference = (p <= ORACLE_TUPLE_LIMIT).then(|| oracle::factorization_map(&table));
                if let Some(map) = &reference {
                    oracle_runs += 1;
                    c.check(map.keys().eq(bundle.behavior.elements().iter()), || {
                        tag("representative sums are not exactly B")
                    });
                }
                for x in bundle.behavior.elements() {
                    match decomposer.decompose(x) {
                        Ok(d) => {
                            c.check(&d.sum(&bundle.layout) == x, || tag(&format!("{x} does not round-trip")));
                            if let Some(map) = &reference {
                                let tuples = map.get(x).map(Vec::as_slice).unwrap_or(&[]);
                                c.check(tuples.len() == 1 && tuples[0] == d.parts, || {
                                    tag(&format!("{x}: oracle found {} tuples", tuples.len()))
                                });
                            }
                            c.check(seen.insert(d.parts), || tag("two trajectories share a decomposition"));
                        }
                        Err(e) => c.failures.push(tag(&format!("{x}: {e}"))),
                    }
                }
            }
            Err(e) => c.failures.push(tag(&e.to_string())),
        }

        // (h)
        match controller_canonical(r, &bundle, &table) {
            Ok(ct) => {
                c.check(ct.trajectories() == bundle.behavior.elements(), || {
                    tag("canonical trajectories differ from B")
                });
                let minimal: Vec<usize> = (0..n).map(|j| r.state_alphabet(j).order() as usize).collect();
                c.eq(&tag("canonical state sizes"), ct.state_counts(), minimal);
                let branches: Vec<usize> = (0..n).map(|j| r.constraint(j).order() as usize).collect();
                transitions_match += usize::from(ct.branch_counts() == branches);
                homomorphic += usize::from(is_homomorphic(&ct));
            }
            Err(e) => c.failures.push(tag(&e.to_string())),
        }
    }
    c.check(cases.len() >= 500, || format!("only {} instances", cases.len()));
    c.check(uncontrollable > 0, || "no uncontrollable instance was generated".into());
    c.eq("lengths covered", lengths, (1..=6).collect());
    sizes.sort_unstable();
    c.notes.push(format!(
        "|B| median {} max {}, {} with |B| > 1",
        sizes[sizes.len() / 2],
        sizes[sizes.len() - 1],
        sizes.iter().filter(|&&b| b > 1).count()
    ));
    c.notes.push(format!(
        "{} realizations, {uncontrollable} uncontrollable, {oracle_runs} checked against the tuple oracle, \
         {homomorphic} with homomorphic canonical form, transition counts equal |C_j| in {transitions_match}",
        cases.len()
    ));
    c.within(started, Duration::from_secs(60));
    c
}

/// Relation composition against the brute-force configuration filter.
fn criterion_4(cases: &[Instance]) -> Checks {
    let started = Instant::now();
    let mut c = Checks::default();
    let mut compared = 0;
    for (k, case) in cases.iter().enumerate() {
        for r in [&case.raw, &case.reduced] {
            if r.universe_order() > 1_000_000 {
                continue;
            }
            compared += 1;
            let fast = compute_behavior(r);
            let slow = oracle::brute_force_behavior(r);
            c.check(fast.behavior == slow, || format!("instance {k}: behaviors differ"));
            c.check(fast.extended.order() == slow.order(), || {
                format!("instance {k}: |B̄| != |B|")
            });
        }
    }
    c.check(compared >= 500, || format!("only {compared} comparisons"));
    c.notes.push(format!("{compared} realizations compared"));
    c.within(started, Duration::from_secs(120));
    c
}

/// The fragment poset: counts, covers and grading.
fn criterion_5() -> Checks {
    let mut c = Checks::default();
    c.eq("fragments for n = 4", all_fragments(4).len(), 17);
    let dot = hasse_dot(4);
    c.eq("Hasse nodes", dot.lines().filter(|l| l.contains("[label=")).count(), 17);
    c.eq("Hasse edges", dot.lines().filter(|l| l.contains("->")).count(), 28);
    for n in 1..=8 {
        let all = all_fragments(n);
        c.eq(&format!("fragment count n = {n}"), all.len(), n * n + 1);
        // Covers straight from the order relation.
        let mut covers = Vec::new();
        for lo in &all {
            for hi in &all {
                let between = all.iter().any(|m| lo.strictly_below(m) && m.strictly_below(hi));
                if lo.strictly_below(hi) && !between {
                    covers.push((*lo, *hi));
                }
            }
        }
        covers.sort();
        c.eq(&format!("covering pairs n = {n}"), covering_pairs(n), covers.clone());
        for f in &all {
            let below = covers.iter().filter(|(_, hi)| hi == f).count();
            if !f.is_full() && f.level() >= 1 {
                c.eq(&format!("covers of {f} (n = {n})"), below, 2);
            }
        }
        c.check(covers.iter().all(|(lo, hi)| lo.level() + 1 == hi.level()), || {
            format!("n = {n}: a cover skips a level")
        });
    }
    c
}

fn write_documents(dir: &Path, cases: &[Instance]) -> Vec<PathBuf> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut paths: Vec<PathBuf> = ["z4_example.json", "two_state_cycle.json", "trivial.json"]
        .iter()
        .map(|f| data.join(f))
        .collect();
    for (k, case) in cases.iter().take(5).enumerate() {
        let path = dir.join(format!("random_{k}.json"));
        let doc = RealizationDocument::from_realization(&case.raw);
        fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
        paths.push(path);
    }
    paths
}

/// Two runs of `analyze` on the same document print the same bytes.
fn criterion_6(cases: &[Instance]) -> Checks {
    let mut c = Checks::default();
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    fs::create_dir_all(&dir).unwrap();
    for path in write_documents(&dir, cases) {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_granule"))
                .args(["analyze", "--reduce"])
                .arg(&path)
                .output()
                .expect("binary runs")
        };
        let (first, second) = (run(), run());
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        c.check(first.status.success(), || {
            format!("{name}: exit {:?}", first.status.code())
        });
        c.check(!first.stdout.is_empty(), || format!("{name}: empty report"));
        c.check(first.stdout == second.stdout, || format!("{name}: outputs differ"));
    }
    c
}

fn main() {
    let cases = instances();
    let results = [
        (1, "Z4 worked example", criterion_1()),
        (2, "uncontrollable two-state cycle", criterion_2()),
        (3, "theorem suite on random reduced realizations", criterion_3(&cases)),
        (4, "behavior matches the brute-force oracle", criterion_4(&cases)),
        (5, "fragment poset structure", criterion_5()),
        (6, "analyze output is deterministic", criterion_6(&cases)),
    ];
    let mut failed = 0;
    for (id, title, checks) in &results {
        let verdict = if checks.failures.is_empty() { "PASS" } else { "FAIL" };
        let notes = if checks.notes.is_empty() {
            String::new()
        } else {
            format!(" [{}]", checks.notes.join("; "))
        };
        println!("criterion {id}: {verdict} {title}{notes}");
        for f in checks.failures.iter().take(10) {
            println!("    {f}");
        }
        if checks.failures.len() > 10 {
            println!("    ... {} more", checks.failures.len() - 10);
        }
        failed += usize::from(!checks.failures.is_empty());
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
