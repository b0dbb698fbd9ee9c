//! Subsets of a ground set `{0, …, n-1}` with `n ≤ 64`, stored as bitsets.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const MAX_GROUND: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Subset {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, …, n-1}`
    pub fn full(n: usize) -> Subset {
        assert!(n <= MAX_GROUND);
        if n == MAX_GROUND {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_GROUND && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1u64 << i)
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1u64 << i))
    }

    /// `self - out + inn`
    pub fn exchange(self, out: usize, inn: usize) -> Subset {
        self.without(out).with(inn)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// Complement inside `{0, …, n-1}`.
    pub fn complement(self, n: usize) -> Subset {
        Subset(!self.0).intersection(Subset::full(n))
    }

    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Elements as 1-based labels, the convention used in files and output.
    pub fn to_labels(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    pub fn from_labels(labels: &[usize]) -> Option<Subset> {
        labels
            .iter()
            .try_fold(Subset::EMPTY, |s, &l| (1..=MAX_GROUND).contains(&l).then(|| s.with(l - 1)))
    }

    /// Image under a map of ground elements.
    pub fn map(self, f: impl Fn(usize) -> usize) -> Subset {
        self.iter().fold(Subset::EMPTY, |s, i| s.with(f(i)))
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Subset {
        iter.into_iter().fold(Subset::EMPTY, Subset::with)
    }
}

pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

impl Ord for Subset {
    /// Lexicographic on the ascending element lists.
    fn cmp(&self, other: &Subset) -> Ordering {
        let (mut a, mut b) = (self.iter(), other.iter());
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) if x != y => return x.cmp(&y),
                _ => {}
            }
        }
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Subset) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    /// Compact 1-based label, e.g. `256`; braces and commas once labels exceed 9.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.to_labels();
        if labels.iter().all(|&l| l <= 9) && !labels.is_empty() {
            for l in labels {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = labels.iter().map(ToString::to_string).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_labels().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Subset, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        Subset::from_labels(&labels)
            .ok_or_else(|| serde::de::Error::custom(format!("labels must lie in 1..=64: {labels:?}")))
    }
}

/// All `k`-subsets of `{0, …, n-1}` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Subset> {
    fn rec(start: usize, n: usize, k: usize, acc: Subset, out: &mut Vec<Subset>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..=n - k {
            rec(i + 1, n, k - 1, acc.with(i), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, Subset::EMPTY, &mut out);
    }
    out
}
