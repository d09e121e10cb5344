use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition of the positions `0..r`, stored as canonical block labels:
/// position 0 gets label 0, and every later position either reuses an
/// earlier label or takes the next unused one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    /// Builds a partition from arbitrary labels, canonicalizing them.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Result<Self> {
        tuple_partition(labels)
    }

    /// The partition with every position in its own block.
    pub fn discrete(r: usize) -> Self {
        Partition { labels: (0..r).collect() }
    }

    /// The partition with a single block.
    pub fn indiscrete(r: usize) -> Self {
        Partition { labels: vec![0; r] }
    }

    /// Number of positions.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn block_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |&m| m + 1)
    }

    /// Blocks as ascending lists of 0-based positions, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (p, &l) in self.labels.iter().enumerate() {
            blocks[l].push(p);
        }
        blocks
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    /// `self ⪯ other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> Result<bool> {
        if self.len() != other.len() {
            return Err(Error::InvalidParameter(format!(
                "partitions of {} and {} positions are not comparable",
                self.len(),
                other.len()
            )));
        }
        Ok(self.refines_unchecked(other))
    }

    pub(crate) fn refines_unchecked(&self, other: &Partition) -> bool {
        let r = self.len();
        (0..r).all(|i| (i + 1..r).all(|j| !self.same_block(i, j) || other.same_block(i, j)))
    }

    /// Every partition of `0..r`, in lexicographic order of labels.
    pub fn all(r: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut labels = vec![0; r];
        fn rec(p: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if p == labels.len() {
                out.push(Partition { labels: labels.clone() });
                return;
            }
            for l in 0..=max + 1 {
                labels[p] = l;
                rec(p + 1, max.max(l), labels, out);
            }
        }
        if r == 0 {
            out.push(Partition { labels });
        } else {
            rec(1, 0, &mut labels, &mut out);
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(labels: Vec<usize>) -> Result<Self> {
        tuple_partition(&labels)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.labels
    }
}

/// Written with 1-based positions, e.g. `{{1,2},{3}}`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (i, p) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// The partition of positions into classes of equal entries.
pub fn tuple_partition<T: PartialEq>(t: &[T]) -> Result<Partition> {
    if t.is_empty() {
        return Err(Error::InvalidParameter("tuple_partition of an empty tuple".into()));
    }
    let mut labels = Vec::with_capacity(t.len());
    let mut next = 0;
    for (p, x) in t.iter().enumerate() {
        match t[..p].iter().position(|y| y == x) {
            Some(q) => labels.push(labels[q]),
            None => {
                labels.push(next);
                next += 1;
            }
        }
    }
    Ok(Partition { labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_of_tuples() {
        assert_eq!(tuple_partition(&['a', 'a', 'b']).unwrap().to_string(), "{{1,2},{3}}");
        assert_eq!(tuple_partition(&['a', 'b', 'c']).unwrap().to_string(), "{{1},{2},{3}}");
        assert_eq!(tuple_partition(&['x', 'y', 'x', 'y']).unwrap().to_string(), "{{1,3},{2,4}}");
        assert!(tuple_partition::<u8>(&[]).is_err());
    }

    #[test]
    fn refinement() {
        let p = tuple_partition(&[0, 0, 1]).unwrap();
        let q = tuple_partition(&[0, 1, 0]).unwrap();
        for other in Partition::all(3) {
            assert!(Partition::discrete(3).refines(&other).unwrap());
        }
        assert!(p.refines(&Partition::indiscrete(3)).unwrap());
        assert!(!p.refines(&q).unwrap());
        assert!(p.refines(&Partition::discrete(2)).is_err());
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..7).map(|r| Partition::all(r).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn serde_canonicalizes() {
        let p: Partition = serde_json::from_str("[5,5,2]").unwrap();
        assert_eq!(p.labels(), &[0, 0, 1]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[0,0,1]");
    }
}
