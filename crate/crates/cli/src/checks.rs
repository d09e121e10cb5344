//! Fixed fixture grids with a verdict each. The acceptance suite and the
//! demo runner both call these.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use csp_comm::games::{
    brute_force_search, strategy_space_size, truthful_strategy, verify_perfect, Direction, Strategy,
};
use csp_comm::geometry::{
    build_sphere_coloring, check_frame_adjacency, color_frame, is_frame, sample_adjacent_frames, SphereColoring,
};
use csp_comm::linalg::{random_unitary, C64};
use csp_comm::patterns::{
    central_vertices, clique_into_alice_power, clique_into_alice_power_digraph, complete_into_bob_power,
    complete_structure, covering_array, digraph_power_exponent, pattern_of,
};
use csp_comm::powers::{
    alice_decode, alice_one_bit_helps, alice_power, bob_one_bit_helps, bob_power, is_homomorphism_into_alice_power,
};
use csp_comm::quantum::{
    deterministic_pvm_tuple, marginal_residual, pvm_tuple_from_classical, quantum_relation_membership,
    quantum_strategy_from_hom, random_pvm, validate_pvm, verify_perfect_quantum, CloseEqualityCheck, Pvm,
};
use csp_comm::structures::{
    find_homomorphism, find_isomorphism, is_homomorphism, make_named, CatalogName, Structure, Vertex,
};
use csp_comm::Result;

pub const TOL: f64 = 1e-9;

/// Outcome of one check with the evidence behind it.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub passed: bool,
    pub details: Vec<String>,
    pub elapsed_ms: u128,
}

struct Recorder {
    start: Instant,
    passed: bool,
    details: Vec<String>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { start: Instant::now(), passed: true, details: Vec::new() }
    }

    fn note(&mut self, line: impl Into<String>) {
        self.details.push(line.into());
    }

    fn expect(&mut self, ok: bool, line: impl Into<String>) {
        let line = line.into();
        self.passed &= ok;
        self.details.push(if ok { line } else { format!("FAILED: {line}") });
    }

    fn finish(mut self, limit: Option<Duration>) -> Check {
        let elapsed = self.start.elapsed();
        if let Some(limit) = limit {
            self.expect(elapsed <= limit, format!("finished in {elapsed:.2?} (limit {limit:?})"));
        }
        Check { passed: self.passed, details: self.details, elapsed_ms: elapsed.as_millis() }
    }
}

fn named(name: CatalogName, params: &[usize]) -> Structure {
    make_named(name, params).expect("catalog parameters are fixed")
}

fn label(name: CatalogName, params: &[usize]) -> String {
    match params {
        [] => name.to_string(),
        _ => format!("{name}{}", params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")),
    }
}

type Identity = (&'static str, fn() -> Result<Structure>, Structure);

/// Alice-power and Bob-power identities for cliques, NAE and rainbow
/// templates, each with an explicit isomorphism.
pub fn power_identities() -> Result<Check> {
    let mut rec = Recorder::new();
    let cases: [Identity; 6] = [
        (
            "alice_power(clique2, 2) = clique4",
            || alice_power(&named(CatalogName::Clique, &[2]), 2),
            named(CatalogName::Clique, &[4]),
        ),
        (
            "alice_power(clique3, 2) = clique9",
            || alice_power(&named(CatalogName::Clique, &[3]), 2),
            named(CatalogName::Clique, &[9]),
        ),
        (
            "alice_power(nae2, 2) = nae4",
            || alice_power(&named(CatalogName::Nae, &[2]), 2),
            named(CatalogName::Nae, &[4]),
        ),
        (
            "bob_power(clique3, 2) = clique6",
            || bob_power(&named(CatalogName::Clique, &[3]), 2),
            named(CatalogName::Clique, &[6]),
        ),
        ("bob_power(nae2, 3) = nae6", || bob_power(&named(CatalogName::Nae, &[2]), 3), named(CatalogName::Nae, &[6])),
        (
            "bob_power(rainbow3, 2) = rainbow6",
            || bob_power(&named(CatalogName::Rainbow, &[3]), 2),
            named(CatalogName::Rainbow, &[6]),
        ),
    ];
    for (name, build, expected) in cases {
        let t = Instant::now();
        let power = build()?;
        let iso = find_isomorphism(&power, &expected)?;
        let elapsed = t.elapsed();
        let ok = iso.is_some() && elapsed < Duration::from_secs(1);
        let witness = iso.map_or("none".to_string(), |h| format!("{:?}", h.as_slice()));
        rec.expect(ok, format!("{name}: isomorphism {witness} in {elapsed:.2?}"));
    }
    Ok(rec.finish(None))
}

/// Every binary structure on one or two vertices with at most two tuples.
pub fn small_binary_instances() -> Vec<Structure> {
    let mut out = Vec::new();
    for n in 1..=2 {
        let pairs: Vec<Vec<Vertex>> = (0..n).flat_map(|a| (0..n).map(move |b| vec![a, b])).collect();
        for mask in 0u32..1 << pairs.len() {
            if mask.count_ones() <= 2 {
                let tuples =
                    pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone()).collect();
                out.push(Structure::single("E", 2, n, tuples).expect("valid by construction"));
            }
        }
    }
    out
}

/// The 4-ary pair where a two-message Bob channel wins and no Alice
/// channel with up to three messages does.
pub fn four_ary_instance() -> (Structure, Structure) {
    let x = Structure::single("R", 4, 2, vec![vec![0, 0, 1, 1]]).expect("fixed fixture");
    let y = Structure::single("R", 4, 2, vec![vec![0, 1, 1, 1], vec![1, 1, 1, 0]]).expect("fixed fixture");
    (x, y)
}

fn channel_agreement(direction: Direction, rec: &mut Recorder) -> Result<()> {
    let templates =
        [("directed_edge", named(CatalogName::DirectedEdge, &[])), ("clique2", named(CatalogName::Clique, &[2]))];
    let instances = small_binary_instances();
    let (mut runs, mut wins, mut disagreements) = (0, 0, 0);
    for x in &instances {
        for (_, y) in &templates {
            for k in 1..=2 {
                let brute = brute_force_search(x, y, k, direction, csp_comm::games::DEFAULT_STRATEGY_CAP)?;
                let power = match direction {
                    Direction::Bob => bob_power(y, k)?,
                    _ => alice_power(y, k)?,
                };
                let hom = find_homomorphism(x, &power)?;
                runs += 1;
                wins += usize::from(brute.is_some());
                if brute.is_some() != hom.is_some() {
                    disagreements += 1;
                    rec.note(format!("disagreement: X = {}, k = {k}", x.to_json()));
                }
                if let Some(s) = brute {
                    if !verify_perfect(x, y, &s)?.perfect {
                        disagreements += 1;
                        rec.note(format!("brute-force strategy is not perfect: X = {}", x.to_json()));
                    }
                }
            }
        }
    }
    rec.expect(
        disagreements == 0,
        format!(
            "{direction} channel: {} instances x 2 templates x k in 1..=2 = {runs} runs, {wins} winnable, {disagreements} disagreements",
            instances.len()
        ),
    );
    Ok(())
}

/// Brute-force strategy search with an Alice channel agrees with
/// homomorphisms into Alice powers.
pub fn alice_channel_oracle() -> Result<Check> {
    let mut rec = Recorder::new();
    channel_agreement(Direction::Alice, &mut rec)?;
    Ok(rec.finish(Some(Duration::from_secs(60))))
}

fn four_ary_checks(rec: &mut Recorder) -> Result<()> {
    let (x, y) = four_ary_instance();
    let bob = brute_force_search(&x, &y, 2, Direction::Bob, csp_comm::games::DEFAULT_STRATEGY_CAP)?;
    let bob_hom = find_homomorphism(&x, &bob_power(&y, 2)?)?;
    let witness = match &bob {
        Some(s) => serde_json::to_string(&s.to_file(&x))?,
        None => "none".into(),
    };
    rec.expect(bob.is_some() && bob_hom.is_some(), format!("4-ary fixture, Bob channel k = 2: strategy {witness}"));
    for k in 1..=3 {
        let alice = brute_force_search(&x, &y, k, Direction::Alice, csp_comm::games::DEFAULT_STRATEGY_CAP)?;
        let hom = find_homomorphism(&x, &alice_power(&y, k)?)?;
        rec.expect(
            alice.is_none() && hom.is_none(),
            format!("4-ary fixture, Alice channel k = {k}: no strategy, no homomorphism into the Alice power"),
        );
    }
    Ok(())
}

/// Brute-force strategy search with a Bob channel agrees with homomorphisms
/// into Bob powers; the 4-ary fixture separates the two channels.
pub fn bob_channel_oracle() -> Result<Check> {
    let mut rec = Recorder::new();
    channel_agreement(Direction::Bob, &mut rec)?;
    four_ary_checks(&mut rec)?;
    Ok(rec.finish(Some(Duration::from_secs(120))))
}

/// The 4-ary fixture on its own.
pub fn four_ary_bob_only() -> Result<Check> {
    let mut rec = Recorder::new();
    four_ary_checks(&mut rec)?;
    Ok(rec.finish(None))
}

pub fn predicate_catalog() -> Vec<(String, Structure)> {
    [
        (CatalogName::Loop, vec![]),
        (CatalogName::DirectedEdge, vec![]),
        (CatalogName::Clique, vec![2]),
        (CatalogName::Clique, vec![3]),
        (CatalogName::Nae, vec![2]),
        (CatalogName::Rainbow, vec![3]),
        (CatalogName::OneInThree, vec![]),
    ]
    .into_iter()
    .map(|(n, p)| (label(n, &p), named(n, &p)))
    .collect()
}

/// One-bit predicates against the direct test: one extra message helps iff
/// the two-message power does not map back to the template.
pub fn one_bit_predicates() -> Result<Check> {
    let mut rec = Recorder::new();
    for (name, y) in predicate_catalog() {
        let alice_direct = find_homomorphism(&alice_power(&y, 2)?, &y)?.is_none();
        let bob_direct = find_homomorphism(&bob_power(&y, 2)?, &y)?.is_none();
        let (a, b) = (alice_one_bit_helps(&y), bob_one_bit_helps(&y));
        rec.expect(
            a == alice_direct && b == bob_direct,
            format!("{name}: Alice bit helps {a} (direct {alice_direct}), Bob bit helps {b} (direct {bob_direct})"),
        );
    }
    Ok(rec.finish(None))
}

/// An edge against a single arc: two messages suffice from Alice, never
/// from Bob.
pub fn edge_versus_arc() -> Result<Check> {
    let mut rec = Recorder::new();
    let k2 = named(CatalogName::Clique, &[2]);
    let d2 = named(CatalogName::DirectedEdge, &[]);
    let cap = csp_comm::games::DEFAULT_STRATEGY_CAP;
    let bob = brute_force_search(&k2, &d2, 2, Direction::Bob, cap)?;
    rec.expect(
        bob.is_none(),
        format!(
            "clique2 vs directed_edge, Bob channel k = 2: no perfect strategy among {} ",
            strategy_space_size(&k2, &d2, 2, Direction::Bob)
        ),
    );
    let alice = brute_force_search(&k2, &d2, 2, Direction::Alice, cap)?;
    let witness = match &alice {
        Some(s) => serde_json::to_string(&s.to_file(&k2))?,
        None => "none".into(),
    };
    rec.expect(alice.is_some(), format!("clique2 vs directed_edge, Alice channel k = 2: strategy {witness}"));
    Ok(rec.finish(None))
}

/// One row of the covering-array table.
#[derive(Clone, Debug, Serialize)]
pub struct CoveringRow {
    pub n: usize,
    pub r: usize,
    pub q: usize,
    pub columns: usize,
    pub requirements: u128,
    pub verified: bool,
    /// `columns / log2 n`.
    pub ratio: f64,
}

const CHECK_BUDGET: u128 = 1_000_000;

/// Covering arrays for `n in 4..=20`, `r, q in {2, 3}`, seed 0.
pub fn covering_table() -> Result<Vec<CoveringRow>> {
    let mut rows = Vec::new();
    for r in [2, 3] {
        for q in [2, 3] {
            for n in 4..=20 {
                let ca = covering_array(n, r, q, &mut ChaCha8Rng::seed_from_u64(0))?;
                if ca.requirement_count() > CHECK_BUDGET {
                    continue;
                }
                rows.push(CoveringRow {
                    n,
                    r,
                    q,
                    columns: ca.column_count(),
                    requirements: ca.requirement_count(),
                    verified: ca.verify(),
                    ratio: ca.column_count() as f64 / (n as f64).log2(),
                });
            }
        }
    }
    Ok(rows)
}

fn table_lines(rows: &[CoveringRow], rec: &mut Recorder) {
    for r in [2, 3] {
        for q in [2, 3] {
            let line: Vec<String> = rows
                .iter()
                .filter(|row| row.r == r && row.q == q)
                .map(|row| format!("{}:{}", row.n, row.columns))
                .collect();
            rec.note(format!("r = {r}, q = {q}, n:columns  {}", line.join(" ")));
        }
    }
}

/// Covering arrays verify exhaustively, and the constant `C(n) = m / log2 n`
/// does not grow from `n = 10` to `n = 20`.
pub fn covering_arrays() -> Result<Check> {
    let mut rec = Recorder::new();
    let rows = covering_table()?;
    let unverified = rows.iter().filter(|r| !r.verified).count();
    rec.expect(unverified == 0, format!("{} arrays built, {unverified} failed exhaustive verification", rows.len()));
    table_lines(&rows, &mut rec);
    for r in [2, 3] {
        for q in [2, 3] {
            let at = |n: usize| rows.iter().find(|row| row.r == r && row.q == q && row.n == n).map(|row| row.ratio);
            let (Some(c10), Some(c20)) = (at(10), at(20)) else { continue };
            let sup = rows
                .iter()
                .filter(|row| row.r == r && row.q == q && row.n >= 10)
                .map(|row| row.ratio)
                .fold(0.0, f64::max);
            rec.expect(
                c20 <= c10,
                format!("r = {r}, q = {q}: C(10) = {c10:.3}, C(20) = {c20:.3}, max over 10..=20 = {sup:.3}"),
            );
        }
    }
    Ok(rec.finish(None))
}

/// The covering-array fixtures: every array verifies; the growth of
/// `m / log2 n` is reported.
pub fn covering_arrays_fixture() -> Result<Check> {
    let mut rec = Recorder::new();
    let rows = covering_table()?;
    let unverified = rows.iter().filter(|r| !r.verified).count();
    rec.expect(unverified == 0, format!("{} arrays built, {unverified} failed exhaustive verification", rows.len()));
    table_lines(&rows, &mut rec);
    Ok(rec.finish(None))
}

/// Clique embeddings into Alice powers are homomorphisms.
pub fn clique_embeddings() -> Result<Check> {
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut failures = 0;
    let mut count = 0;
    for (name, y) in [
        ("clique2", named(CatalogName::Clique, &[2])),
        ("directed_edge", named(CatalogName::DirectedEdge, &[])),
        ("nae2", named(CatalogName::Nae, &[2])),
    ] {
        let pattern = pattern_of(&y);
        for n in 1..=4 {
            count += 1;
            let e = clique_into_alice_power(&y, n, &mut rng)?;
            let source = complete_structure(n, &pattern)?;
            let ok = is_homomorphism_into_alice_power(&source, &y, e.k, &e.rows)?;
            // Cross-check on the materialized power when it is small.
            let materialized = match alice_power(&y, e.k) {
                Ok(p) => Some(is_homomorphism(e.to_homomorphism(y.size())?.as_slice(), &source, &p)?),
                Err(err) if err.is_cap_exceeded() => None,
                Err(err) => return Err(err),
            };
            let ok = ok && materialized != Some(false);
            failures += usize::from(!ok);
            rec.expect(
                ok,
                format!(
                    "{name}, n = {n}: k = {}{}",
                    e.k,
                    if materialized.is_some() { ", also checked on the materialized power" } else { "" }
                ),
            );
        }
    }
    let d2 = named(CatalogName::DirectedEdge, &[]);
    for m in 2..=8 {
        count += 1;
        let e = clique_into_alice_power_digraph(&d2, m)?;
        let expected = digraph_power_exponent(m);
        let clique = named(CatalogName::Clique, &[m]);
        let ok =
            e.k == expected && is_homomorphism(e.to_homomorphism(2)?.as_slice(), &clique, &alice_power(&d2, e.k)?)?;
        failures += usize::from(!ok);
        rec.expect(ok, format!("clique{m} into alice_power(directed_edge, {}): rows {:?}", e.k, e.rows));
    }
    rec.expect(failures == 0, format!("{count} embeddings, {failures} failures"));
    Ok(rec.finish(None))
}

pub fn central_fixtures() -> Vec<(String, Structure)> {
    let four_ary = Structure::single("R", 4, 7, vec![vec![0, 0, 1, 2], vec![3, 4, 0, 0], vec![5, 5, 6, 6]])
        .expect("fixed fixture");
    let mut out = vec![("four_ary7".to_string(), four_ary)];
    for (n, p) in [
        (CatalogName::DirectedEdge, vec![]),
        (CatalogName::Clique, vec![3]),
        (CatalogName::Clique, vec![2]),
        (CatalogName::DirectedCycle, vec![3]),
        (CatalogName::Loop, vec![]),
        (CatalogName::Nae, vec![2]),
        (CatalogName::OneInThree, vec![]),
    ] {
        out.push((label(n, &p), named(n, &p)));
    }
    out
}

fn exhaustive_hom_exists(source: &Structure, target: &Structure) -> Result<bool> {
    let (n, m) = (source.size(), target.size());
    let total = (m as u128).pow(n as u32);
    for code in 0..total as usize {
        if is_homomorphism(&alice_decode(code, m, n), source, target)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The central-vertex embedding of the two-element complete structure into
/// the Bob power exists exactly when a central vertex exists; checked
/// against exhaustive search for `k <= 2`.
pub fn central_vertex_embeddings() -> Result<Check> {
    let mut rec = Recorder::new();
    for (name, y) in central_fixtures() {
        let central = central_vertices(&y);
        let embedding = complete_into_bob_power(&y, 2)?;
        let source = complete_structure(2, &pattern_of(&y))?;
        let mut exhaustive = false;
        for k in 1..=2 {
            exhaustive |= exhaustive_hom_exists(&source, &bob_power(&y, k)?)?;
        }
        let ok = embedding.is_some() == !central.is_empty() && exhaustive == !central.is_empty();
        let map = embedding.map_or("none".to_string(), |e| format!("{:?}", e.map));
        rec.expect(
            ok,
            format!(
                "{name}: central {central:?}, embedding {map}, exhaustive search finds one for k <= 2: {exhaustive}"
            ),
        );
    }
    Ok(rec.finish(None))
}

fn membership_catalog() -> Vec<(String, Structure)> {
    [
        (CatalogName::Clique, vec![2]),
        (CatalogName::Clique, vec![3]),
        (CatalogName::Nae, vec![2]),
        (CatalogName::Nae, vec![3]),
        (CatalogName::Rainbow, vec![3]),
        (CatalogName::DirectedEdge, vec![]),
        (CatalogName::DirectedCycle, vec![3]),
        (CatalogName::OneInThree, vec![]),
        (CatalogName::Loop, vec![]),
    ]
    .into_iter()
    .map(|(n, p)| (label(n, &p), named(n, &p)))
    .collect()
}

/// PVM validation, the product criterion on classical tuples, witness
/// marginals, and the equality certificate for commuting PVMs.
pub fn quantum_layer() -> Result<Check> {
    let mut rec = Recorder::new();
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(i);
        let d = 1 + (i as usize % 8);
        let p = random_pvm(d, 2 + (i as usize % 3), &mut rng)?;
        worst = worst.max(validate_pvm(&p).max_residual());
    }
    rec.expect(worst <= 1e-9, format!("100 random PVMs (d <= 8): largest residual {worst:.2e}"));

    let (mut accepted, mut on, mut rejected, mut off) = (0, 0, 0, 0);
    let mut residual: f64 = 0.0;
    for (_, y) in membership_catalog() {
        let n = y.size();
        let rel = y.relation(0);
        let r = rel.arity();
        for code in 0..n.pow(r as u32) {
            let t = alice_decode(code, n, r);
            for d in [1, 2] {
                if rel.contains(&t) {
                    on += 1;
                    let (pvms, _) = pvm_tuple_from_classical(&t, rel, n, d)?;
                    if let Some(w) = quantum_relation_membership(&pvms, rel, TOL)? {
                        accepted += 1;
                        residual = residual.max(marginal_residual(&pvms, &w)?);
                    }
                } else {
                    off += 1;
                    let pvms = deterministic_pvm_tuple(&t, n, d)?;
                    if quantum_relation_membership(&pvms, rel, TOL)?.is_none() {
                        rejected += 1;
                    }
                }
            }
        }
    }
    rec.expect(
        accepted == on && rejected == off,
        format!(
            "classical tuples: {accepted}/{on} on-relation accepted, {}/{off} off-relation accepted",
            off - rejected
        ),
    );
    rec.expect(residual <= 1e-8, format!("largest marginal residual of a witness: {residual:.2e}"));

    let (mut equal_pairs, mut false_certs, mut missed) = (0, 0, 0);
    for trial in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + trial);
        let d = 1 + (trial as usize % 6);
        let outcomes = 2 + (trial as usize % 2);
        let u = random_unitary(d, &mut rng);
        let basis: Vec<Vec<C64>> = (0..d).map(|j| u.column(j)).collect();
        let lp: Vec<usize> = (0..d).map(|_| rng.random_range(0..outcomes)).collect();
        let lq: Vec<usize> =
            if rng.random_bool(0.5) { lp.clone() } else { (0..d).map(|_| rng.random_range(0..outcomes)).collect() };
        let p = Pvm::from_basis(&basis, &lp, outcomes)?;
        let q = Pvm::from_basis(&basis, &lq, outcomes)?;
        let check = CloseEqualityCheck::new(&p, &q, &basis, TOL)?;
        let fired = check.search().is_some();
        equal_pairs += usize::from(check.pvms_equal());
        false_certs += usize::from(fired && !check.pvms_equal());
        missed += usize::from(!fired && check.pvms_equal());
    }
    rec.expect(
        false_certs == 0 && missed == 0,
        format!("500 commuting pairs (d <= 6), {equal_pairs} equal: {false_certs} false certificates, {missed} missed"),
    );
    Ok(rec.finish(Some(Duration::from_secs(120))))
}

fn random_instance(seed: u64) -> Result<(Structure, Structure, Vec<Vertex>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let templates = [
        named(CatalogName::Clique, &[2]),
        named(CatalogName::Clique, &[3]),
        named(CatalogName::DirectedCycle, &[3]),
        named(CatalogName::Nae, &[2]),
        named(CatalogName::OneInThree, &[]),
    ];
    let y = templates[seed as usize % templates.len()].clone();
    let size = rng.random_range(3..=5);
    let h: Vec<Vertex> = (0..size).map(|_| rng.random_range(0..y.size())).collect();
    let rel = y.relation(0);
    let mut tuples = Vec::new();
    for _ in 0..rng.random_range(1..=4) {
        let target = &rel.tuples()[rng.random_range(0..rel.len())];
        let pre: Option<Vec<Vertex>> = target
            .iter()
            .map(|&b| {
                let options: Vec<Vertex> = (0..size).filter(|&v| h[v] == b).collect();
                (!options.is_empty()).then(|| options[rng.random_range(0..options.len())])
            })
            .collect();
        if let Some(t) = pre {
            tuples.push(t);
        }
    }
    if tuples.is_empty() {
        // Force one tuple: pull the target's entries onto fresh images.
        let target = rel.tuples()[0].clone();
        let mut h = h;
        let t: Vec<Vertex> = target
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let v = i % size;
                h[v] = b;
                v
            })
            .collect();
        let x = Structure::new(y.signature().clone(), size, vec![vec![t.clone()]])?;
        if is_homomorphism(&h, &x, &y)? {
            return Ok((x, y, h));
        }
        let x = Structure::new(y.signature().clone(), size, vec![vec![]])?;
        return Ok((x, y, h));
    }
    let x = Structure::new(y.signature().clone(), size, vec![tuples])?;
    Ok((x, y, h))
}

/// Quantum and classical verifiers agree on diagonal embeddings of
/// homomorphisms, and on copies where one of Bob's measurements is
/// relabelled.
pub fn quantum_verifier() -> Result<Check> {
    let mut rec = Recorder::new();
    let (mut agree, mut tampered_reported) = (0, 0);
    for i in 0..50u64 {
        let (x, y, h) = random_instance(i)?;
        let d = 1 + (i as usize % 3);
        let mut q = quantum_strategy_from_hom(&x, &y, &h, d)?;
        let mut classical = truthful_strategy(&x, &y, &h)?;
        let tamper = i >= 25;
        if tamper {
            let used: Vec<Vertex> = x.relations().iter().flat_map(|r| r.iter().flatten().copied()).collect();
            let v = used[i as usize % used.len()];
            let n = y.size();
            let shift: Vec<usize> = (0..n).map(|s| (s + 1) % n).collect();
            q.bob[v] = q.bob[v].permuted(&shift)?;
            classical.bob[v] = (classical.bob[v] + 1) % n;
        }
        let qv = verify_perfect_quantum(&x, &y, &q, TOL)?;
        let cv = verify_perfect(&x, &y, &Strategy::NoChannel(classical))?;
        agree += usize::from(qv == cv);
        if tamper && qv.counterexample.is_some() {
            tampered_reported += 1;
        }
        if qv != cv {
            rec.note(format!("fixture {i}: quantum {qv:?} vs classical {cv:?}"));
        }
    }
    rec.expect(agree == 50, format!("{agree}/50 verdicts agree"));
    rec.expect(tampered_reported == 25, format!("{tampered_reported}/25 tampered fixtures report a counterexample"));
    Ok(rec.finish(None))
}

/// Frame sampling, certified sphere colorings, and frame colorings of
/// adjacent pairs.
pub fn geometry() -> Result<Check> {
    let mut rec = Recorder::new();
    let mut bad = 0;
    for i in 0..1000u64 {
        let n = 2 + (i as usize % 3);
        let d = 1 + (i as usize / 3 % 3);
        let s = sample_adjacent_frames(n, d, i)?;
        let ok = is_frame(&s.m, TOL).is_frame
            && is_frame(&s.m_prime, TOL).is_frame
            && is_frame(&s.witness, TOL).is_frame
            && check_frame_adjacency(&s.m, &s.m_prime, &s.witness, TOL)?;
        bad += usize::from(!ok);
    }
    rec.expect(bad == 0, format!("1000 sampled adjacent triples (n <= 4, d <= 3): {bad} failures"));

    let mut colorings: Vec<SphereColoring> = Vec::new();
    for dim in 2..=5 {
        let c = build_sphere_coloring(dim, None, 0)?;
        let violations = c.audit_orthogonal_pairs(100_000, dim as u64);
        rec.expect(
            c.is_certified() && violations == 0,
            format!(
                "dimension {dim}: {} colors, certified with mesh gap {:.3}, {violations} violations in 100000 orthogonal pairs",
                c.color_count(),
                c.delta
            ),
        );
        colorings.push(c);
    }
    let six = build_sphere_coloring(6, None, 0)?;
    rec.note(format!("dimension 6: {} colors, certified with mesh gap {:.3}", six.color_count(), six.delta));
    let mut clashes = 0;
    for i in 0..200u64 {
        let n = 2 + (i as usize % 3);
        let d = 1 + (i as usize / 3 % 3);
        let s = sample_adjacent_frames(n, d, 5000 + i)?.realified(TOL)?;
        let c = if d == 3 { &six } else { &colorings[2 * d - 2] };
        if color_frame(c, &s.m, TOL)? == color_frame(c, &s.m_prime, TOL)? {
            clashes += 1;
        }
    }
    rec.expect(clashes == 0, format!("200 realified adjacent pairs: {clashes} share a color"));
    Ok(rec.finish(Some(Duration::from_secs(300))))
}
