//! The referee, strategy tables for the three game variants, the
//! translations between perfect strategies and homomorphisms into powers,
//! and an exhaustive strategy search used as an independent oracle.
//!
//! A referee question is a symbol `R`, a tuple `x̄` of `R^X` for Alice and a
//! vertex `x` for Bob. Alice answers a tuple `ȳ`, Bob a vertex `y`. They win
//! when `ȳ` is in `R^Y` (plausibility) and `y_i = y` whenever `x_i = x`
//! (consistency).
//!
//! Strategy tables are indexed by the position of `x̄` in the sorted tuple
//! list of `R^X`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::powers::{alice_decode, alice_map, bob_contains};
use crate::structures::{Homomorphism, Structure, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    Plausibility,
    Consistency,
}

/// A losing referee question.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub symbol: String,
    pub tuple: Vec<Vertex>,
    pub vertex: Vertex,
    pub reason: Reason,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.reason {
            Reason::Plausibility => "Alice's answer is not in the relation",
            Reason::Consistency => "Alice and Bob disagree on a shared vertex",
        };
        write!(f, "{} {:?} with Bob asked {}: {what}", self.symbol, self.tuple, self.vertex)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub perfect: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    pub fn perfect() -> Self {
        Verdict { perfect: true, counterexample: None }
    }

    pub fn fails(counterexample: Counterexample) -> Self {
        Verdict { perfect: false, counterexample: Some(counterexample) }
    }
}

/// No communication: Alice answers from the tuple alone, Bob from his vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoChannelStrategy {
    /// `answers[R][t]`: Alice's tuple for the `t`-th tuple of `R^X`.
    pub answers: Vec<Vec<Vec<Vertex>>>,
    /// `bob[x]`: Bob's vertex.
    pub bob: Vec<Vertex>,
}

/// Alice sends Bob one of `k` messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AliceChannelStrategy {
    pub k: usize,
    /// `answers[R][t]`: Alice's tuple.
    pub answers: Vec<Vec<Vec<Vertex>>>,
    /// `messages[R][t]`: the message Alice sends, in `0..k`.
    pub messages: Vec<Vec<usize>>,
    /// `bob[x][j]`: Bob's vertex after receiving message `j`.
    pub bob: Vec<Vec<Vertex>>,
}

/// Bob sends Alice one of `k` messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BobChannelStrategy {
    pub k: usize,
    /// `bob[x]`: Bob's vertex.
    pub bob: Vec<Vertex>,
    /// `messages[x]`: the message Bob sends, in `0..k`.
    pub messages: Vec<usize>,
    /// `answers[R][t][j]`: Alice's tuple after receiving message `j`.
    pub answers: Vec<Vec<Vec<Vec<Vertex>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    NoChannel(NoChannelStrategy),
    Alice(AliceChannelStrategy),
    Bob(BobChannelStrategy),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    None,
    Alice,
    Bob,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::None => "none",
            Direction::Alice => "alice",
            Direction::Bob => "bob",
        })
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Direction::None),
            "alice" => Ok(Direction::Alice),
            "bob" => Ok(Direction::Bob),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

impl Strategy {
    pub fn direction(&self) -> Direction {
        match self {
            Strategy::NoChannel(_) => Direction::None,
            Strategy::Alice(_) => Direction::Alice,
            Strategy::Bob(_) => Direction::Bob,
        }
    }

    /// Message alphabet size; 1 without a channel.
    pub fn k(&self) -> usize {
        match self {
            Strategy::NoChannel(_) => 1,
            Strategy::Alice(s) => s.k,
            Strategy::Bob(s) => s.k,
        }
    }

    /// Answers for one question: Alice's tuple and Bob's vertex.
    fn play(&self, symbol: usize, t: usize, x: Vertex) -> (&[Vertex], Vertex) {
        match self {
            Strategy::NoChannel(s) => (&s.answers[symbol][t], s.bob[x]),
            Strategy::Alice(s) => {
                let j = s.messages[symbol][t];
                (&s.answers[symbol][t], s.bob[x][j])
            }
            Strategy::Bob(s) => (&s.answers[symbol][t][s.messages[x]], s.bob[x]),
        }
    }

    /// Checks that every table is total and in range for `x` and `y`.
    pub fn check_shape(&self, x: &Structure, y: &Structure) -> Result<()> {
        x.ensure_same_signature(y)?;
        let n = y.size();
        let bad = |what: &str| Err(Error::DomainMismatch(what.to_string()));
        let tuple_ok = |symbol: usize, t: &[Vertex]| t.len() == x.signature().arity(symbol) && t.iter().all(|&v| v < n);
        let per_symbol_len = |lens: Vec<usize>| {
            lens.len() == x.signature().len() && lens.iter().zip(x.relations()).all(|(&l, r)| l == r.len())
        };
        match self {
            Strategy::NoChannel(s) => {
                if !per_symbol_len(s.answers.iter().map(Vec::len).collect()) {
                    return bad("answer table does not match the tuples of X");
                }
                if s.bob.len() != x.size() || s.bob.iter().any(|&v| v >= n) {
                    return bad("Bob's table does not match X and Y");
                }
                for (symbol, table) in s.answers.iter().enumerate() {
                    if !table.iter().all(|t| tuple_ok(symbol, t)) {
                        return bad("an answer tuple has the wrong arity or leaves Y");
                    }
                }
            }
            Strategy::Alice(s) => {
                if s.k == 0 {
                    return bad("k must be at least 1");
                }
                if !per_symbol_len(s.answers.iter().map(Vec::len).collect())
                    || !per_symbol_len(s.messages.iter().map(Vec::len).collect())
                {
                    return bad("answer or message table does not match the tuples of X");
                }
                if s.messages.iter().flatten().any(|&j| j >= s.k) {
                    return bad("a message is outside 0..k");
                }
                if s.bob.len() != x.size() || s.bob.iter().any(|row| row.len() != s.k || row.iter().any(|&v| v >= n)) {
                    return bad("Bob's table does not match X, k and Y");
                }
                for (symbol, table) in s.answers.iter().enumerate() {
                    if !table.iter().all(|t| tuple_ok(symbol, t)) {
                        return bad("an answer tuple has the wrong arity or leaves Y");
                    }
                }
            }
            Strategy::Bob(s) => {
                if s.k == 0 {
                    return bad("k must be at least 1");
                }
                if s.bob.len() != x.size() || s.bob.iter().any(|&v| v >= n) {
                    return bad("Bob's table does not match X and Y");
                }
                if s.messages.len() != x.size() || s.messages.iter().any(|&j| j >= s.k) {
                    return bad("Bob's message table does not match X and k");
                }
                if !per_symbol_len(s.answers.iter().map(Vec::len).collect()) {
                    return bad("answer table does not match the tuples of X");
                }
                for (symbol, table) in s.answers.iter().enumerate() {
                    for per_msg in table {
                        if per_msg.len() != s.k || !per_msg.iter().all(|t| tuple_ok(symbol, t)) {
                            return bad("an answer row does not have k tuples over Y of the right arity");
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Plays every referee question in order (symbol, tuple, Bob's vertex) and
/// reports the first loss.
pub fn verify_perfect(x: &Structure, y: &Structure, s: &Strategy) -> Result<Verdict> {
    s.check_shape(x, y)?;
    for (symbol, rel) in x.relations().iter().enumerate() {
        let target = y.relation(symbol);
        for (t, tuple) in rel.iter().enumerate() {
            for v in 0..x.size() {
                let (answer, reply) = s.play(symbol, t, v);
                let reason = if !target.contains(answer) {
                    Some(Reason::Plausibility)
                } else if tuple.iter().zip(answer).any(|(&xi, &yi)| xi == v && yi != reply) {
                    Some(Reason::Consistency)
                } else {
                    None
                };
                if let Some(reason) = reason {
                    return Ok(Verdict::fails(Counterexample {
                        symbol: x.signature().name(symbol).to_string(),
                        tuple: tuple.to_vec(),
                        vertex: v,
                        reason,
                    }));
                }
            }
        }
    }
    Ok(Verdict::perfect())
}

/// The strategy in which both players answer through `h: X -> Y`.
pub fn truthful_strategy(x: &Structure, y: &Structure, h: &[Vertex]) -> Result<NoChannelStrategy> {
    if !crate::structures::is_homomorphism(h, x, y)? {
        return Err(Error::NotAHomomorphism("the map does not preserve every relation".into()));
    }
    Ok(NoChannelStrategy {
        answers: x
            .relations()
            .iter()
            .map(|rel| rel.iter().map(|t| t.iter().map(|&v| h[v]).collect()).collect())
            .collect(),
        bob: h.to_vec(),
    })
}

/// Builds an Alice-channel strategy from a map `X -> Y^k` given as rows.
/// For each tuple Alice reports the least coordinate `j` whose projection
/// lies in the relation and sends `j`; Bob answers coordinate `j` of his row.
pub fn alice_strategy_from_rows(
    x: &Structure,
    y: &Structure,
    k: usize,
    rows: &[Vec<Vertex>],
) -> Result<AliceChannelStrategy> {
    x.ensure_same_signature(y)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if rows.len() != x.size() || rows.iter().any(|r| r.len() != k || r.iter().any(|&v| v >= y.size())) {
        return Err(Error::InvalidMap(format!("expected {} rows of {k} vertices of Y", x.size())));
    }
    let mut answers = Vec::new();
    let mut messages = Vec::new();
    for (symbol, rel) in x.relations().iter().enumerate() {
        let target = y.relation(symbol);
        let mut a = Vec::with_capacity(rel.len());
        let mut m = Vec::with_capacity(rel.len());
        for t in rel.iter() {
            let found = (0..k).find_map(|j| {
                let proj: Vec<Vertex> = t.iter().map(|&v| rows[v][j]).collect();
                target.contains(&proj).then_some((j, proj))
            });
            let Some((j, proj)) = found else {
                return Err(Error::NotAHomomorphism(format!(
                    "no coordinate maps {} {t:?} into the relation",
                    x.signature().name(symbol)
                )));
            };
            a.push(proj);
            m.push(j);
        }
        answers.push(a);
        messages.push(m);
    }
    Ok(AliceChannelStrategy { k, answers, messages, bob: rows.to_vec() })
}

/// As [`alice_strategy_from_rows`], for a homomorphism into the materialized
/// Alice power.
pub fn alice_strategy_from_hom(
    x: &Structure,
    y: &Structure,
    k: usize,
    h: &Homomorphism,
) -> Result<AliceChannelStrategy> {
    let rows: Vec<Vec<Vertex>> = h.as_slice().iter().map(|&v| alice_decode(v, y.size(), k)).collect();
    alice_strategy_from_rows(x, y, k, &rows)
}

/// Reads off the map `x -> (b(x, 0), ..., b(x, k-1))` from a perfect
/// Alice-channel strategy.
pub fn rows_from_alice_strategy(s: &AliceChannelStrategy, x: &Structure, y: &Structure) -> Result<Vec<Vec<Vertex>>> {
    let strategy = Strategy::Alice(s.clone());
    if let Some(c) = verify_perfect(x, y, &strategy)?.counterexample {
        return Err(Error::NotPerfect(c.to_string()));
    }
    Ok(s.bob.clone())
}

/// As [`rows_from_alice_strategy`], encoded as a homomorphism into the
/// Alice power.
pub fn hom_from_alice_strategy(s: &AliceChannelStrategy, x: &Structure, y: &Structure) -> Result<Homomorphism> {
    let rows = rows_from_alice_strategy(s, x, y)?;
    Ok(Homomorphism::new(alice_map(&rows, y.size(), s.k)?))
}

/// Builds a Bob-channel strategy from a map `X -> [k] x Y`. Writing
/// `h(x) = (s, y)`, Bob answers `y` and sends `s`. On message `s`, Alice
/// answers the least tuple of the relation that agrees with `h` on the
/// positions whose image has slot `s`.
pub fn bob_strategy_from_map(
    x: &Structure,
    y: &Structure,
    k: usize,
    map: &[(usize, Vertex)],
) -> Result<BobChannelStrategy> {
    x.ensure_same_signature(y)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if map.len() != x.size() || map.iter().any(|&(s, v)| s >= k || v >= y.size()) {
        return Err(Error::InvalidMap(format!("expected {} pairs in [{k}] x Y", x.size())));
    }
    let mut answers = Vec::new();
    for (symbol, rel) in x.relations().iter().enumerate() {
        let target = y.relation(symbol);
        let mut per_tuple = Vec::with_capacity(rel.len());
        for t in rel.iter() {
            let mut per_msg = Vec::with_capacity(k);
            for s in 0..k {
                let ans = target
                    .iter()
                    .find(|cand| t.iter().zip(cand.iter()).all(|(&xi, &ci)| map[xi].0 != s || map[xi].1 == ci));
                let Some(ans) = ans else {
                    return Err(Error::NotAHomomorphism(format!(
                        "no tuple of {} agrees with slot {s} on {t:?}",
                        x.signature().name(symbol)
                    )));
                };
                per_msg.push(ans.to_vec());
            }
            per_tuple.push(per_msg);
        }
        answers.push(per_tuple);
    }
    Ok(BobChannelStrategy {
        k,
        bob: map.iter().map(|p| p.1).collect(),
        messages: map.iter().map(|p| p.0).collect(),
        answers,
    })
}

/// As [`bob_strategy_from_map`], for a homomorphism into the materialized
/// Bob power (vertex `(s, y)` encoded as `s * |Y| + y`).
pub fn bob_strategy_from_hom(x: &Structure, y: &Structure, k: usize, h: &Homomorphism) -> Result<BobChannelStrategy> {
    if y.size() == 0 {
        return Err(Error::InvalidParameter("Y has an empty domain".into()));
    }
    let map: Vec<(usize, Vertex)> = h.as_slice().iter().map(|&v| crate::powers::bob_decode(v, y.size())).collect();
    bob_strategy_from_map(x, y, k, &map)
}

/// Reads off `x -> (m(x), b(x))` from a perfect Bob-channel strategy.
pub fn map_from_bob_strategy(s: &BobChannelStrategy, x: &Structure, y: &Structure) -> Result<Vec<(usize, Vertex)>> {
    let strategy = Strategy::Bob(s.clone());
    if let Some(c) = verify_perfect(x, y, &strategy)?.counterexample {
        return Err(Error::NotPerfect(c.to_string()));
    }
    Ok(s.messages.iter().copied().zip(s.bob.iter().copied()).collect())
}

/// As [`map_from_bob_strategy`], encoded as a homomorphism into the Bob power.
pub fn hom_from_bob_strategy(s: &BobChannelStrategy, x: &Structure, y: &Structure) -> Result<Homomorphism> {
    let map = map_from_bob_strategy(s, x, y)?;
    Ok(Homomorphism::new(map.iter().map(|&(slot, v)| crate::powers::bob_encode(slot, v, y.size())).collect()))
}

impl AliceChannelStrategy {
    /// The same strategy over `k + 1` messages; the new message is never sent
    /// and Bob treats it like message 0.
    pub fn lift(&self) -> Self {
        let mut s = self.clone();
        s.k += 1;
        for row in &mut s.bob {
            row.push(row[0]);
        }
        s
    }
}

impl BobChannelStrategy {
    /// The same strategy over `k + 1` messages; the new message is never sent
    /// and Alice treats it like message 0.
    pub fn lift(&self) -> Self {
        let mut s = self.clone();
        s.k += 1;
        for per_tuple in &mut s.answers {
            for per_msg in per_tuple {
                per_msg.push(per_msg[0].clone());
            }
        }
        s
    }
}

impl Strategy {
    /// The same strategy with one more message; no-channel strategies become
    /// Alice-channel strategies with two messages.
    pub fn lift(&self) -> Strategy {
        match self {
            Strategy::NoChannel(s) => Strategy::Alice(AliceChannelStrategy {
                k: 2,
                answers: s.answers.clone(),
                messages: s.answers.iter().map(|t| vec![0; t.len()]).collect(),
                bob: s.bob.iter().map(|&v| vec![v, v]).collect(),
            }),
            Strategy::Alice(s) => Strategy::Alice(s.lift()),
            Strategy::Bob(s) => Strategy::Bob(s.lift()),
        }
    }
}

/// Default bound on the number of strategies [`brute_force_search`] may face.
pub const DEFAULT_STRATEGY_CAP: u128 = 10_000_000;

fn pow_sat(base: u128, exp: u128) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Size of the full strategy space of a variant: every table entry ranges
/// over all of its codomain.
pub fn strategy_space_size(x: &Structure, y: &Structure, k: usize, direction: Direction) -> u128 {
    let ny = y.size() as u128;
    let nx = x.size() as u128;
    let k = k as u128;
    let mut size: u128 = match direction {
        Direction::None => pow_sat(ny, nx),
        Direction::Alice => pow_sat(ny, nx * k),
        Direction::Bob => pow_sat(ny * k, nx),
    };
    for rel in x.relations() {
        let answers = pow_sat(ny, rel.arity() as u128);
        let per_tuple = match direction {
            Direction::None => answers,
            Direction::Alice => answers.saturating_mul(k),
            Direction::Bob => pow_sat(answers, k),
        };
        size = size.saturating_mul(pow_sat(per_tuple, rel.len() as u128));
    }
    size
}

/// Advances `digits` (most significant first) through `0..base`; false after
/// the last value.
fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Tuples of `0..n` of length `r` in lexicographic order.
fn all_words(n: usize, r: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut w = vec![0; r];
    loop {
        out.push(w.clone());
        if !odometer(&mut w, n) {
            return out;
        }
    }
}

/// Searches the whole strategy space of a variant for a perfect strategy.
///
/// Bob's tables are enumerated in odometer order. Once Bob's side is fixed,
/// the questions about different tuples of `X` no longer interact, so Alice's
/// entries are searched tuple by tuple over all of `Y^r` (and every message
/// in the Alice-channel game). No homomorphism reasoning is used.
pub fn brute_force_search(
    x: &Structure,
    y: &Structure,
    k: usize,
    direction: Direction,
    cap: u128,
) -> Result<Option<Strategy>> {
    x.ensure_same_signature(y)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if direction == Direction::None && k != 1 {
        return Err(Error::InvalidParameter("the no-channel game has k = 1".into()));
    }
    let size = strategy_space_size(x, y, k, direction);
    if size > cap {
        return Err(Error::CapExceeded { what: "strategy space", size, cap });
    }
    let ny = y.size();
    if ny == 0 {
        // No answers exist; only an instance without questions is winnable.
        return Ok(None);
    }
    let words: Vec<Vec<Vec<Vertex>>> = x.relations().iter().map(|rel| all_words(ny, rel.arity())).collect();
    let wins = |symbol: usize, tuple: &[Vertex], answer: &[Vertex], reply: &dyn Fn(Vertex) -> Option<Vertex>| {
        y.relation(symbol).contains(answer)
            && tuple.iter().zip(answer).all(|(&xi, &yi)| reply(xi).is_none_or(|b| b == yi))
    };
    match direction {
        Direction::None => {
            let mut bob = vec![0; x.size()];
            loop {
                let reply = |v: Vertex| Some(bob[v]);
                if let Some(answers) = alice_tables(x, &words, |symbol, tuple, w| wins(symbol, tuple, w, &reply)) {
                    return Ok(Some(Strategy::NoChannel(NoChannelStrategy { answers, bob })));
                }
                if !odometer(&mut bob, ny) {
                    return Ok(None);
                }
            }
        }
        Direction::Alice => {
            // Flattened Bob table: entry x * k + j.
            let mut flat = vec![0; x.size() * k];
            loop {
                let mut answers = Vec::new();
                let mut messages = Vec::new();
                let mut ok = true;
                'symbols: for (symbol, rel) in x.relations().iter().enumerate() {
                    let mut a = Vec::new();
                    let mut m = Vec::new();
                    for t in rel.iter() {
                        let found = words[symbol].iter().find_map(|w| {
                            (0..k)
                                .find(|&j| {
                                    let reply = |v: Vertex| Some(flat[v * k + j]);
                                    wins(symbol, t, w, &reply)
                                })
                                .map(|j| (w.clone(), j))
                        });
                        match found {
                            Some((w, j)) => {
                                a.push(w);
                                m.push(j);
                            }
                            None => {
                                ok = false;
                                break 'symbols;
                            }
                        }
                    }
                    answers.push(a);
                    messages.push(m);
                }
                if ok {
                    let bob = flat.chunks(k).map(<[Vertex]>::to_vec).collect();
                    return Ok(Some(Strategy::Alice(AliceChannelStrategy { k, answers, messages, bob })));
                }
                if !odometer(&mut flat, ny) {
                    return Ok(None);
                }
            }
        }
        Direction::Bob => {
            // Per vertex the digit m(x) * |Y| + b(x).
            let mut flat = vec![0; x.size()];
            loop {
                let messages: Vec<usize> = flat.iter().map(|d| d / ny).collect();
                let bob: Vec<Vertex> = flat.iter().map(|d| d % ny).collect();
                let mut answers = Vec::new();
                let mut ok = true;
                'symbols: for (symbol, rel) in x.relations().iter().enumerate() {
                    let mut per_tuple = Vec::new();
                    for t in rel.iter() {
                        let mut per_msg = Vec::with_capacity(k);
                        for s in 0..k {
                            let sent = messages.contains(&s);
                            // Bob's reply is only seen for vertices sending message s.
                            let reply = |v: Vertex| (messages[v] == s).then_some(bob[v]);
                            let found = if sent {
                                words[symbol].iter().find(|w| wins(symbol, t, w, &reply))
                            } else {
                                words[symbol].first()
                            };
                            match found {
                                Some(w) => per_msg.push(w.clone()),
                                None => {
                                    ok = false;
                                    break 'symbols;
                                }
                            }
                        }
                        per_tuple.push(per_msg);
                    }
                    answers.push(per_tuple);
                }
                if ok {
                    return Ok(Some(Strategy::Bob(BobChannelStrategy { k, bob, messages, answers })));
                }
                if !odometer(&mut flat, ny * k) {
                    return Ok(None);
                }
            }
        }
    }
}

/// Picks, per tuple, the first answer word accepted by `ok`.
fn alice_tables(
    x: &Structure,
    words: &[Vec<Vec<Vertex>>],
    ok: impl Fn(usize, &[Vertex], &[Vertex]) -> bool,
) -> Option<Vec<Vec<Vec<Vertex>>>> {
    x.relations()
        .iter()
        .enumerate()
        .map(|(symbol, rel)| rel.iter().map(|t| words[symbol].iter().find(|w| ok(symbol, t, w)).cloned()).collect())
        .collect()
}

/// Whether the map `X -> [k] x Y` read off a Bob-channel strategy sends
/// every tuple into the Bob power; used to cross-check extracted maps.
pub fn bob_map_is_homomorphism(x: &Structure, y: &Structure, map: &[(usize, Vertex)]) -> bool {
    x.relations().iter().zip(y.relations()).all(|(rx, ry)| {
        rx.iter().all(|t| {
            let entries: Vec<(usize, Vertex)> = t.iter().map(|&v| map[v]).collect();
            bob_contains(ry, &entries)
        })
    })
}

type Answer = (Vec<Vertex>, usize);

/// One `[tuple, answer, message]` entry of a strategy file.
pub type AnswerRow = (Vec<Vertex>, Vec<Vertex>, usize);

/// Serialized strategy: `answers[R]` lists `[tuple, answer, message]`,
/// `bob` lists `[x, message, y]`.
///
/// For the Alice channel the message in `answers` is the one Alice sends and
/// `bob` gives Bob's reply per received message. For the Bob channel the
/// message in `bob` is the one Bob sends and `answers` gives Alice's reply
/// per received message. Without a channel every message is 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    pub variant: Direction,
    pub k: usize,
    pub answers: BTreeMap<String, Vec<AnswerRow>>,
    pub bob: Vec<(Vertex, usize, Vertex)>,
}

impl Strategy {
    pub fn to_file(&self, x: &Structure) -> StrategyFile {
        let mut answers = BTreeMap::new();
        let mut bob = Vec::new();
        for (symbol, rel) in x.relations().iter().enumerate() {
            let name = x.signature().name(symbol).to_string();
            let mut rows = Vec::new();
            for (t, tuple) in rel.iter().enumerate() {
                match self {
                    Strategy::NoChannel(s) => rows.push((tuple.to_vec(), s.answers[symbol][t].clone(), 0)),
                    Strategy::Alice(s) => {
                        rows.push((tuple.to_vec(), s.answers[symbol][t].clone(), s.messages[symbol][t]))
                    }
                    Strategy::Bob(s) => {
                        for (j, a) in s.answers[symbol][t].iter().enumerate() {
                            rows.push((tuple.to_vec(), a.clone(), j));
                        }
                    }
                }
            }
            answers.insert(name, rows);
        }
        for v in 0..x.size() {
            match self {
                Strategy::NoChannel(s) => bob.push((v, 0, s.bob[v])),
                Strategy::Alice(s) => {
                    for (j, &b) in s.bob[v].iter().enumerate() {
                        bob.push((v, j, b));
                    }
                }
                Strategy::Bob(s) => bob.push((v, s.messages[v], s.bob[v])),
            }
        }
        StrategyFile { variant: self.direction(), k: self.k(), answers, bob }
    }

    /// Rebuilds the tables from a file, requiring every entry exactly once.
    pub fn from_file(file: &StrategyFile, x: &Structure, y: &Structure) -> Result<Strategy> {
        let k = file.k;
        if k == 0 || (file.variant == Direction::None && k != 1) {
            return Err(Error::DomainMismatch(format!("invalid k = {k} for variant {}", file.variant)));
        }
        if let Some(name) = file.answers.keys().find(|n| x.signature().index_of(n).is_none()) {
            return Err(Error::DomainMismatch(format!("unknown symbol `{name}` in answers")));
        }
        let dup = |what: String| Error::DomainMismatch(format!("duplicate or missing entry: {what}"));
        let mut alice: Vec<Vec<Vec<Option<Answer>>>> = Vec::new();
        for (symbol, rel) in x.relations().iter().enumerate() {
            let slots = if file.variant == Direction::Bob { k } else { 1 };
            let mut table = vec![vec![None; slots]; rel.len()];
            let name = x.signature().name(symbol);
            for (tuple, answer, msg) in file.answers.get(name).map(Vec::as_slice).unwrap_or(&[]) {
                let t = rel
                    .position(tuple)
                    .ok_or_else(|| Error::DomainMismatch(format!("{tuple:?} is not a tuple of {name} in X")))?;
                let slot = if file.variant == Direction::Bob { *msg } else { 0 };
                if slot >= slots || *msg >= k {
                    return Err(Error::DomainMismatch(format!("message {msg} outside 0..{k}")));
                }
                if table[t][slot].replace((answer.clone(), *msg)).is_some() {
                    return Err(dup(format!("{name} {tuple:?} message {msg}")));
                }
            }
            alice.push(table);
        }
        let bob_slots = if file.variant == Direction::Alice { k } else { 1 };
        let mut bob: Vec<Vec<Option<(usize, Vertex)>>> = vec![vec![None; bob_slots]; x.size()];
        for &(v, msg, reply) in &file.bob {
            if v >= x.size() || msg >= k {
                return Err(Error::DomainMismatch(format!("Bob entry ({v}, {msg}) out of range")));
            }
            let slot = if file.variant == Direction::Alice { msg } else { 0 };
            if bob[v][slot].replace((msg, reply)).is_some() {
                return Err(dup(format!("Bob vertex {v} message {msg}")));
            }
        }
        let take = |o: &Option<(Vec<Vertex>, usize)>| o.clone().ok_or_else(|| dup("Alice table incomplete".into()));
        let take_b = |o: &Option<(usize, Vertex)>| o.ok_or_else(|| dup("Bob table incomplete".into()));
        let strategy = match file.variant {
            Direction::None => Strategy::NoChannel(NoChannelStrategy {
                answers: alice
                    .iter()
                    .map(|tab| tab.iter().map(|e| take(&e[0]).map(|p| p.0)).collect::<Result<_>>())
                    .collect::<Result<_>>()?,
                bob: bob.iter().map(|e| take_b(&e[0]).map(|p| p.1)).collect::<Result<_>>()?,
            }),
            Direction::Alice => {
                let mut answers = Vec::new();
                let mut messages = Vec::new();
                for tab in &alice {
                    let pairs: Vec<(Vec<Vertex>, usize)> = tab.iter().map(|e| take(&e[0])).collect::<Result<_>>()?;
                    messages.push(pairs.iter().map(|p| p.1).collect());
                    answers.push(pairs.into_iter().map(|p| p.0).collect());
                }
                Strategy::Alice(AliceChannelStrategy {
                    k,
                    answers,
                    messages,
                    bob: bob
                        .iter()
                        .map(|row| row.iter().map(|e| take_b(e).map(|p| p.1)).collect::<Result<_>>())
                        .collect::<Result<_>>()?,
                })
            }
            Direction::Bob => {
                let pairs: Vec<(usize, Vertex)> = bob.iter().map(|e| take_b(&e[0])).collect::<Result<_>>()?;
                Strategy::Bob(BobChannelStrategy {
                    k,
                    bob: pairs.iter().map(|p| p.1).collect(),
                    messages: pairs.iter().map(|p| p.0).collect(),
                    answers: alice
                        .iter()
                        .map(|tab| {
                            tab.iter()
                                .map(|row| row.iter().map(|e| take(e).map(|p| p.0)).collect::<Result<_>>())
                                .collect::<Result<_>>()
                        })
                        .collect::<Result<_>>()?,
                })
            }
        };
        strategy.check_shape(x, y)?;
        Ok(strategy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powers::{alice_power, bob_power};
    use crate::structures::{find_homomorphism, is_homomorphism, make_named, CatalogName};

    fn named(name: CatalogName, params: &[usize]) -> Structure {
        make_named(name, params).unwrap()
    }

    fn remark_fixture() -> (Structure, Structure) {
        let x = Structure::single("R", 4, 2, vec![vec![0, 0, 1, 1]]).unwrap();
        let y = Structure::single("R", 4, 2, vec![vec![0, 1, 1, 1], vec![1, 1, 1, 0]]).unwrap();
        (x, y)
    }

    #[test]
    fn truthful_strategy_is_perfect() {
        let k3 = named(CatalogName::Clique, &[3]);
        let s = truthful_strategy(&k3, &k3, &[0, 1, 2]).unwrap();
        assert_eq!(verify_perfect(&k3, &k3, &Strategy::NoChannel(s)).unwrap(), Verdict::perfect());
    }

    #[test]
    fn counterexamples_are_reported_in_order() {
        let k3 = named(CatalogName::Clique, &[3]);
        let mut s = truthful_strategy(&k3, &k3, &[0, 1, 2]).unwrap();
        s.bob[1] = 2;
        let v = verify_perfect(&k3, &k3, &Strategy::NoChannel(s.clone())).unwrap();
        let c = v.counterexample.unwrap();
        assert_eq!((c.tuple, c.vertex, c.reason), (vec![0, 1], 1, Reason::Consistency));
        s.answers[0][0] = vec![1, 1];
        let c = verify_perfect(&k3, &k3, &Strategy::NoChannel(s)).unwrap().counterexample.unwrap();
        assert_eq!((c.tuple, c.vertex, c.reason), (vec![0, 1], 0, Reason::Plausibility));
    }

    #[test]
    fn edge_versus_directed_edge() {
        let k2 = named(CatalogName::Clique, &[2]);
        let d2 = named(CatalogName::DirectedEdge, &[]);
        assert!(brute_force_search(&k2, &d2, 2, Direction::Bob, DEFAULT_STRATEGY_CAP).unwrap().is_none());
        let s = brute_force_search(&k2, &d2, 2, Direction::Alice, DEFAULT_STRATEGY_CAP).unwrap().unwrap();
        assert!(verify_perfect(&k2, &d2, &s).unwrap().perfect);
        assert_eq!(strategy_space_size(&k2, &d2, 2, Direction::Alice), 64 * 16);
    }

    #[test]
    fn alice_translation_round_trip() {
        let k2 = named(CatalogName::Clique, &[2]);
        let d2 = named(CatalogName::DirectedEdge, &[]);
        let p = alice_power(&d2, 2).unwrap();
        let h = find_homomorphism(&k2, &p).unwrap().unwrap();
        let s = alice_strategy_from_hom(&k2, &d2, 2, &h).unwrap();
        assert!(verify_perfect(&k2, &d2, &Strategy::Alice(s.clone())).unwrap().perfect);
        let back = hom_from_alice_strategy(&s, &k2, &d2).unwrap();
        assert!(is_homomorphism(back.as_slice(), &k2, &p).unwrap());
        assert!(verify_perfect(&k2, &d2, &Strategy::Alice(s.lift())).unwrap().perfect);
    }

    #[test]
    fn clique_identity_gives_one_bit_strategy() {
        let k4 = named(CatalogName::Clique, &[4]);
        let k2 = named(CatalogName::Clique, &[2]);
        let id = Homomorphism::new((0..4).collect());
        let s = alice_strategy_from_hom(&k4, &k2, 2, &id).unwrap();
        assert!(verify_perfect(&k4, &k2, &Strategy::Alice(s)).unwrap().perfect);
        let s = bob_strategy_from_hom(&k4, &k2, 2, &id).unwrap();
        assert!(verify_perfect(&k4, &k2, &Strategy::Bob(s)).unwrap().perfect);
    }

    #[test]
    fn bob_translation_on_remark_fixture() {
        let (x, y) = remark_fixture();
        let p = bob_power(&y, 2).unwrap();
        let h = find_homomorphism(&x, &p).unwrap().unwrap();
        let s = bob_strategy_from_hom(&x, &y, 2, &h).unwrap();
        assert!(verify_perfect(&x, &y, &Strategy::Bob(s.clone())).unwrap().perfect);
        // Bob's reply is the same vertex whatever he is asked.
        assert!(s.bob.iter().all(|&b| b == 1));
        let back = hom_from_bob_strategy(&s, &x, &y).unwrap();
        assert!(is_homomorphism(back.as_slice(), &x, &p).unwrap());
        for k in 1..=3 {
            assert!(brute_force_search(&x, &y, k, Direction::Alice, DEFAULT_STRATEGY_CAP).unwrap().is_none());
        }
        assert!(brute_force_search(&x, &y, 2, Direction::Bob, DEFAULT_STRATEGY_CAP).unwrap().is_some());
    }

    #[test]
    fn imperfect_strategies_are_rejected() {
        let k2 = named(CatalogName::Clique, &[2]);
        let d2 = named(CatalogName::DirectedEdge, &[]);
        let s = AliceChannelStrategy {
            k: 1,
            answers: vec![vec![vec![0, 1], vec![0, 1]]],
            messages: vec![vec![0, 0]],
            bob: vec![vec![0], vec![1]],
        };
        assert!(matches!(hom_from_alice_strategy(&s, &k2, &d2), Err(Error::NotPerfect(_))));
        let s = BobChannelStrategy {
            k: 1,
            bob: vec![0, 1],
            messages: vec![0, 0],
            answers: vec![vec![vec![vec![0, 1]], vec![vec![0, 1]]]],
        };
        assert!(matches!(hom_from_bob_strategy(&s, &k2, &d2), Err(Error::NotPerfect(_))));
    }

    #[test]
    fn no_channel_on_single_edge() {
        let d2 = named(CatalogName::DirectedEdge, &[]);
        let s = brute_force_search(&d2, &d2, 1, Direction::None, DEFAULT_STRATEGY_CAP).unwrap().unwrap();
        assert!(verify_perfect(&d2, &d2, &s).unwrap().perfect);
    }

    #[test]
    fn cap_is_enforced() {
        let k3 = named(CatalogName::Clique, &[3]);
        let err = brute_force_search(&k3, &k3, 2, Direction::Alice, 1000).unwrap_err();
        assert!(err.is_cap_exceeded());
    }

    #[test]
    fn files_round_trip() {
        let (x, y) = remark_fixture();
        for (k, dir) in [(1, Direction::None), (2, Direction::Bob), (3, Direction::Bob)] {
            if let Some(s) = brute_force_search(&x, &y, k, dir, DEFAULT_STRATEGY_CAP).unwrap() {
                let file = s.to_file(&x);
                let json = serde_json::to_string(&file).unwrap();
                let back: StrategyFile = serde_json::from_str(&json).unwrap();
                assert_eq!(Strategy::from_file(&back, &x, &y).unwrap(), s);
            }
        }
        let k2 = named(CatalogName::Clique, &[2]);
        let d2 = named(CatalogName::DirectedEdge, &[]);
        let s = brute_force_search(&k2, &d2, 2, Direction::Alice, DEFAULT_STRATEGY_CAP).unwrap().unwrap();
        let file = s.to_file(&k2);
        assert_eq!(Strategy::from_file(&file, &k2, &d2).unwrap(), s);
        let mut broken = file.clone();
        broken.bob.pop();
        assert!(Strategy::from_file(&broken, &k2, &d2).is_err());
    }
}
