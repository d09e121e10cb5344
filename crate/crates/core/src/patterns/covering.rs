use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `n x m` matrix over `0..alphabet` in which every choice of `strength`
/// rows shows every word of length `strength` in some column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringArray {
    strength: usize,
    alphabet: usize,
    rows: Vec<Vec<usize>>,
}

/// Candidate columns scored per greedy step.
const CANDIDATES: usize = 24;

fn r_subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (r - cur.len()) {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

fn word_code(subset: &[usize], column: &[usize], q: usize) -> usize {
    subset.iter().fold(0, |acc, &row| acc * q + column[row])
}

impl CoveringArray {
    /// Wraps an explicit matrix given as rows; no coverage check is made.
    pub fn from_rows(strength: usize, alphabet: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m || r.iter().any(|&x| x >= alphabet)) {
            return Err(Error::InvalidParameter(
                "covering array rows must have equal length and entries below the alphabet size".into(),
            ));
        }
        Ok(CoveringArray { strength, alphabet, rows })
    }

    fn from_columns(strength: usize, alphabet: usize, n: usize, columns: &[Vec<usize>]) -> Self {
        let rows = (0..n).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        CoveringArray { strength, alphabet, rows }
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Number of (row subset, word) requirements an exhaustive check covers.
    pub fn requirement_count(&self) -> u128 {
        let n = self.row_count() as u128;
        let r = self.strength as u128;
        let mut subsets: u128 = 1;
        for i in 0..r {
            subsets = subsets * (n - i) / (i + 1);
        }
        subsets * (self.alphabet as u128).pow(self.strength as u32)
    }

    /// Exhaustive check of every row subset against every word.
    pub fn verify(&self) -> bool {
        let n = self.row_count();
        let r = self.strength;
        if r > n {
            return false;
        }
        let words = self.alphabet.pow(r as u32);
        let m = self.column_count();
        let mut seen = vec![false; words];
        r_subsets(n, r).iter().all(|subset| {
            seen.iter_mut().for_each(|s| *s = false);
            for c in 0..m {
                let code = subset.iter().fold(0, |acc, &row| acc * self.alphabet + self.rows[row][c]);
                seen[code] = true;
            }
            seen.iter().all(|&s| s)
        })
    }
}

/// Builds a verified covering array with `n` rows, strength `r` and alphabet
/// `0..q`.
///
/// Columns are added greedily: each step builds a batch of candidate columns
/// row by row, each seeded with a random uncovered requirement, and keeps the
/// one covering the most new requirements. Redundant columns are
/// then dropped. If the column budget runs out the build restarts with twice
/// the budget. With `n == r` the result is the full list of `q^r` words.
pub fn covering_array<G: Rng + ?Sized>(n: usize, r: usize, q: usize, rng: &mut G) -> Result<CoveringArray> {
    if r == 0 || n < r {
        return Err(Error::InvalidParameter(format!("covering array needs n >= r >= 1, got n = {n}, r = {r}")));
    }
    if q == 0 {
        return Err(Error::InvalidParameter("covering array needs a nonempty alphabet".into()));
    }
    let words = (q as u128).pow(r as u32);
    if words > 1 << 20 {
        return Err(Error::CapExceeded { what: "covering array words", size: words, cap: 1 << 20 });
    }
    let words = words as usize;
    if n == r || q == 1 {
        let columns: Vec<Vec<usize>> = (0..words)
            .map(|mut code| {
                let mut col = vec![0; n];
                for slot in col.iter_mut().rev() {
                    *slot = code % q;
                    code /= q;
                }
                col
            })
            .collect();
        return Ok(CoveringArray::from_columns(r, q, n, &columns));
    }

    let subsets = r_subsets(n, r);
    let log_n = (n as f64).log2().ceil() as usize;
    let mut budget = words * (log_n + 1) * 4;
    for _ in 0..8 {
        if let Some(columns) = greedy(n, q, words, &subsets, budget, rng) {
            let ca = CoveringArray::from_columns(r, q, n, &columns);
            if !ca.verify() {
                return Err(Error::ConstructionFailed("greedy covering array failed verification".into()));
            }
            return Ok(ca);
        }
        budget *= 2;
    }
    Err(Error::ConstructionFailed(format!("no covering array within {budget} columns")))
}

/// Builds one column the way AETG does: the rows of one uncovered
/// requirement get its word, then the remaining rows in random order each
/// take the value completing the most uncovered requirements among rows
/// already set (ties broken at random).
#[allow(clippy::too_many_arguments)]
fn aetg_column<G: Rng + ?Sized>(
    n: usize,
    q: usize,
    words: usize,
    subsets: &[Vec<usize>],
    containing: &[Vec<usize>],
    count: &[u32],
    target: usize,
    rng: &mut G,
) -> Vec<usize> {
    let mut col = vec![0; n];
    let mut set = vec![false; n];
    let (s, mut code) = (target / words, target % words);
    for &row in subsets[s].iter().rev() {
        col[row] = code % q;
        set[row] = true;
        code /= q;
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| !set[i]).collect();
    order.shuffle(rng);
    let mut gains = vec![0usize; q];
    for row in order {
        gains.iter_mut().for_each(|g| *g = 0);
        for &t in &containing[row] {
            let subset = &subsets[t];
            if subset.iter().any(|&i| i != row && !set[i]) {
                continue;
            }
            for (v, g) in gains.iter_mut().enumerate() {
                col[row] = v;
                if count[t * words + word_code(subset, &col, q)] == 0 {
                    *g += 1;
                }
            }
        }
        let best = *gains.iter().max().expect("q >= 1");
        let ties: Vec<usize> = (0..q).filter(|&v| gains[v] == best).collect();
        col[row] = ties[rng.random_range(0..ties.len())];
        set[row] = true;
    }
    col
}

fn greedy<G: Rng + ?Sized>(
    n: usize,
    q: usize,
    words: usize,
    subsets: &[Vec<usize>],
    budget: usize,
    rng: &mut G,
) -> Option<Vec<Vec<usize>>> {
    let mut containing = vec![Vec::new(); n];
    for (t, subset) in subsets.iter().enumerate() {
        for &row in subset {
            containing[row].push(t);
        }
    }
    let mut count = vec![0u32; subsets.len() * words];
    let mut uncovered = subsets.len() * words;
    let mut columns: Vec<Vec<usize>> = Vec::new();
    let gain = |col: &[usize], count: &[u32]| -> usize {
        subsets.iter().enumerate().filter(|(s, subset)| count[s * words + word_code(subset, col, q)] == 0).count()
    };
    while uncovered > 0 {
        if columns.len() >= budget {
            return None;
        }
        let open: Vec<usize> = (0..count.len()).filter(|&i| count[i] == 0).collect();
        let (mut best, mut best_gain) = (Vec::new(), 0);
        for _ in 0..CANDIDATES {
            let target = open[rng.random_range(0..open.len())];
            let cand = aetg_column(n, q, words, subsets, &containing, &count, target, rng);
            let g = gain(&cand, &count);
            if g > best_gain {
                best_gain = g;
                best = cand;
            }
        }
        for (s, subset) in subsets.iter().enumerate() {
            let slot = &mut count[s * words + word_code(subset, &best, q)];
            if *slot == 0 {
                uncovered -= 1;
            }
            *slot += 1;
        }
        columns.push(best);
    }
    // Drop columns whose every requirement is also met elsewhere, newest first.
    let mut c = columns.len();
    while c > 0 {
        c -= 1;
        let col = &columns[c];
        let redundant = subsets.iter().enumerate().all(|(s, subset)| count[s * words + word_code(subset, col, q)] > 1);
        if redundant {
            for (s, subset) in subsets.iter().enumerate() {
                count[s * words + word_code(subset, col, q)] -= 1;
            }
            columns.remove(c);
        }
    }
    Some(columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn square_case_enumerates_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ca = covering_array(3, 3, 2, &mut rng).unwrap();
        assert_eq!(ca.column_count(), 8);
        assert!(ca.verify());
    }

    #[test]
    fn binary_strength_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ca = covering_array(20, 2, 2, &mut rng).unwrap();
        assert!(ca.verify());
        assert_eq!(ca.requirement_count(), 190 * 4);
    }

    #[test]
    fn verify_rejects_gaps() {
        // Four rows, four columns: too few for binary strength two.
        let ca = CoveringArray::from_rows(
            2,
            2,
            vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![0, 1, 1, 0], vec![1, 0, 0, 1]],
        )
        .unwrap();
        assert!(!ca.verify());
    }

    #[test]
    fn bad_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(covering_array(2, 3, 2, &mut rng).is_err());
        assert!(covering_array(4, 0, 2, &mut rng).is_err());
        assert!(covering_array(4, 2, 0, &mut rng).is_err());
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let a = covering_array(12, 3, 3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = covering_array(12, 3, 3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
    }
}
