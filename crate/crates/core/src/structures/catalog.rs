//! Named structures that serve as templates and fixtures.

use std::fmt;
use std::str::FromStr;

use super::{Structure, Vertex};
use crate::error::{Error, Result};

/// Graph-like catalog entries use a binary symbol `E`, the ternary ones a
/// symbol `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogName {
    /// `clique n`: all non-loop pairs, both orientations.
    Clique,
    /// `nae n`: all non-constant triples over `0..n`.
    Nae,
    /// `rainbow n`: all triples with three distinct entries.
    Rainbow,
    /// A single directed edge `0 -> 1`.
    DirectedEdge,
    /// `directed_cycle n`: `i -> i+1 mod n`.
    DirectedCycle,
    /// Boolean ternary relation `{100, 010, 001}`.
    OneInThree,
    /// A single vertex with a loop.
    Loop,
}

impl CatalogName {
    pub const ALL: [CatalogName; 7] = [
        CatalogName::Clique,
        CatalogName::Nae,
        CatalogName::Rainbow,
        CatalogName::DirectedEdge,
        CatalogName::DirectedCycle,
        CatalogName::OneInThree,
        CatalogName::Loop,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogName::Clique => "clique",
            CatalogName::Nae => "nae",
            CatalogName::Rainbow => "rainbow",
            CatalogName::DirectedEdge => "directed_edge",
            CatalogName::DirectedCycle => "directed_cycle",
            CatalogName::OneInThree => "one_in_three",
            CatalogName::Loop => "loop",
        }
    }

    /// Number of integer parameters the entry takes.
    pub fn param_count(self) -> usize {
        match self {
            CatalogName::Clique | CatalogName::Nae | CatalogName::Rainbow | CatalogName::DirectedCycle => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogName::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

fn all_tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<Vertex>> {
    let total = n.checked_pow(arity as u32).unwrap_or(0);
    (0..total).map(move |mut code| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        t
    })
}

/// Builds a catalog structure. Parameters are checked against
/// [`CatalogName::param_count`].
pub fn make_named(name: CatalogName, params: &[usize]) -> Result<Structure> {
    if params.len() != name.param_count() {
        return Err(Error::InvalidParameter(format!(
            "`{name}` takes {} parameter(s), got {}",
            name.param_count(),
            params.len()
        )));
    }
    let n = params.first().copied().unwrap_or(0);
    match name {
        CatalogName::Clique => {
            if n < 1 {
                return Err(Error::InvalidParameter("clique needs n >= 1".into()));
            }
            let edges = all_tuples(n, 2).filter(|t| t[0] != t[1]).collect();
            Structure::single("E", 2, n, edges)
        }
        CatalogName::Nae => {
            if n < 1 {
                return Err(Error::InvalidParameter("nae needs n >= 1".into()));
            }
            let triples = all_tuples(n, 3).filter(|t| !(t[0] == t[1] && t[1] == t[2])).collect();
            Structure::single("R", 3, n, triples)
        }
        CatalogName::Rainbow => {
            if n < 1 {
                return Err(Error::InvalidParameter("rainbow needs n >= 1".into()));
            }
            let triples = all_tuples(n, 3).filter(|t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2]).collect();
            Structure::single("R", 3, n, triples)
        }
        CatalogName::DirectedEdge => Structure::single("E", 2, 2, vec![vec![0, 1]]),
        CatalogName::DirectedCycle => {
            if n < 1 {
                return Err(Error::InvalidParameter("directed_cycle needs n >= 1".into()));
            }
            let edges = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
            Structure::single("E", 2, n, edges)
        }
        CatalogName::OneInThree => Structure::single("R", 3, 2, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
        CatalogName::Loop => Structure::single("E", 2, 1, vec![vec![0, 0]]),
    }
}
