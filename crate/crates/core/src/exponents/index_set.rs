use serde::{Deserialize, Serialize};

/// Subsets of the positive integers used to split an exponent sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexSet {
    All,
    Evens,
    Odds,
    /// `{start, start + step, start + 2 step, ...}`.
    Stride { step: u64, start: u64 },
    /// An explicit finite set.
    List { indices: Vec<u64> },
    Complement { set: Box<IndexSet> },
}

impl IndexSet {
    pub fn stride(step: u64, start: u64) -> Self {
        IndexSet::Stride { step, start }
    }

    pub fn list(mut indices: Vec<u64>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSet::List { indices }
    }

    /// Complement, collapsing a double complement back to the original set.
    pub fn complement(self) -> Self {
        match self {
            IndexSet::Complement { set } => *set,
            other => IndexSet::Complement {
                set: Box::new(other),
            },
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            IndexSet::All => true,
            IndexSet::Evens => n.is_multiple_of(2),
            IndexSet::Odds => n % 2 == 1,
            IndexSet::Stride { step, start } => n >= *start && (n - start).is_multiple_of(*step),
            IndexSet::List { indices } => indices.binary_search(&n).is_ok(),
            IndexSet::Complement { set } => !set.contains(n),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            IndexSet::Stride { step, start } => {
                if *step == 0 {
                    return Err("stride step must be positive".into());
                }
                if *start == 0 {
                    return Err("stride start must be a positive index".into());
                }
                Ok(())
            }
            IndexSet::List { indices } => {
                if indices.contains(&0) {
                    return Err("indices start at 1".into());
                }
                if indices.windows(2).any(|w| w[0] >= w[1]) {
                    return Err("list indices must be strictly increasing".into());
                }
                Ok(())
            }
            IndexSet::Complement { set } => set.validate(),
            _ => Ok(()),
        }
    }

    /// Ascending iterator over the members.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=u64::MAX).filter(move |&n| self.contains(n))
    }

    /// Eventual periodic form of the set.
    pub fn region(&self) -> Region {
        match self {
            IndexSet::All => Region::all(),
            IndexSet::Evens => Region::residues(2, &[0]),
            IndexSet::Odds => Region::residues(2, &[1]),
            IndexSet::Stride { step, start } => {
                let mut r = Region::residues(*step, &[start % step]);
                r.onset = *start;
                r
            }
            IndexSet::List { indices } => Region {
                modulus: 1,
                mask: vec![false],
                onset: indices.last().map_or(1, |m| m + 1),
            },
            IndexSet::Complement { set } => set.region().complement(),
        }
    }
}

/// Largest modulus tracked exactly when intersecting periodic regions.
pub const MAX_MODULUS: u64 = 1 << 16;

/// Eventually periodic index set: for `n >= onset`, `n` is a member iff
/// `mask[n % modulus]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub modulus: u64,
    pub mask: Vec<bool>,
    pub onset: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Region {
    pub fn all() -> Self {
        Region {
            modulus: 1,
            mask: vec![true],
            onset: 1,
        }
    }

    pub fn residues(modulus: u64, residues: &[u64]) -> Self {
        let mut mask = vec![false; modulus as usize];
        for &r in residues {
            mask[(r % modulus) as usize] = true;
        }
        Region {
            modulus,
            mask,
            onset: 1,
        }
    }

    /// True when the region has infinitely many members.
    pub fn is_infinite(&self) -> bool {
        self.mask.iter().any(|&b| b)
    }

    pub fn is_everything(&self) -> bool {
        self.mask.iter().all(|&b| b)
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.onset && self.mask[(n % self.modulus) as usize]
    }

    pub fn complement(&self) -> Region {
        Region {
            modulus: self.modulus,
            mask: self.mask.iter().map(|b| !b).collect(),
            onset: self.onset,
        }
    }

    pub fn with_onset(mut self, onset: u64) -> Region {
        self.onset = self.onset.max(onset);
        self
    }

    /// Intersection, or `None` when the combined period exceeds [`MAX_MODULUS`].
    pub fn intersect(&self, other: &Region) -> Option<Region> {
        let g = gcd(self.modulus, other.modulus);
        let modulus = (self.modulus / g).checked_mul(other.modulus)?;
        if modulus > MAX_MODULUS {
            return None;
        }
        let mask = (0..modulus)
            .map(|r| self.mask[(r % self.modulus) as usize] && other.mask[(r % other.modulus) as usize])
            .collect();
        Some(Region {
            modulus,
            mask,
            onset: self.onset.max(other.onset),
        })
    }

    /// First member `>= from`, if any.
    pub fn first_member_from(&self, from: u64) -> Option<u64> {
        if !self.is_infinite() {
            return None;
        }
        let start = from.max(self.onset);
        (start..start.saturating_add(self.modulus)).find(|&n| self.contains(n))
    }

    /// Lower bound on the number of members in `[lo, hi]`.
    pub fn count_lower(&self, lo: u64, hi: u64) -> u128 {
        let lo = lo.max(self.onset);
        if hi < lo {
            return 0;
        }
        let per_period = self.mask.iter().filter(|&&b| b).count() as u128;
        let span = (hi - lo + 1) as u128;
        (span / self.modulus as u128) * per_period
    }

    pub fn describe(&self) -> String {
        if self.is_everything() {
            format!("n >= {}", self.onset)
        } else {
            let residues: Vec<String> = self
                .mask
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(r, _)| r.to_string())
                .collect();
            format!(
                "n >= {} with n mod {} in {{{}}}",
                self.onset,
                self.modulus,
                residues.join(", ")
            )
        }
    }
}
