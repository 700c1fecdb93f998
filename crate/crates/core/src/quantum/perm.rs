use crate::error::{Error, Result};

/// Bijection on `0..n`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermutationMetric {
    /// Minimum number of transpositions.
    Cayley,
    /// Minimum number of adjacent transpositions.
    KendallTau,
    /// Number of positions that differ.
    Hamming,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Config(format!("{image:?} is not a permutation")));
            }
        }
        Ok(Self(image))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Self(other.0.iter().map(|&i| self.0[i]).collect()))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut cycles = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
            }
        }
        cycles
    }

    pub fn inversions(&self) -> usize {
        let p = &self.0;
        (0..p.len())
            .map(|i| p[i + 1..].iter().filter(|&&q| q < p[i]).count())
            .sum()
    }

    /// All `n!` permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation(prefix.clone()));
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i);
                    extend(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
        out
    }
}

pub fn permutation_distance(p: &Permutation, q: &Permutation, metric: PermutationMetric) -> Result<usize> {
    let rel = p.compose(&q.inverse())?;
    Ok(match metric {
        PermutationMetric::Cayley => rel.len() - rel.cycle_count(),
        PermutationMetric::KendallTau => rel.inversions(),
        PermutationMetric::Hamming => p.0.iter().zip(&q.0).filter(|(a, b)| a != b).count(),
    })
}
