//! Frame labels {μ, μ̃, 0}, their linear order, the frame metric h, and the
//! relabeling symmetry that turns any canonical structure N_M into N_S.

use std::collections::BTreeSet;

use chart_engine::{Arr2, C64};

use crate::NullFrameError;

/// Indices are 1-based to match the usual μ = 1..m notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FrameLabel {
    Unprimed(usize),
    Tilde(usize),
    Zero,
}

impl FrameLabel {
    pub fn to_index(self, m: usize) -> usize {
        match self {
            FrameLabel::Unprimed(mu) => {
                debug_assert!((1..=m).contains(&mu));
                mu - 1
            }
            FrameLabel::Tilde(mu) => {
                debug_assert!((1..=m).contains(&mu));
                m + mu - 1
            }
            FrameLabel::Zero => 2 * m,
        }
    }

    pub fn from_index(i: usize, m: usize, epsilon: usize) -> FrameLabel {
        if i < m {
            FrameLabel::Unprimed(i + 1)
        } else if i < 2 * m {
            FrameLabel::Tilde(i - m + 1)
        } else {
            debug_assert!(epsilon == 1 && i == 2 * m);
            FrameLabel::Zero
        }
    }

    pub fn parse(s: &str) -> Result<FrameLabel, NullFrameError> {
        let bad = || NullFrameError::LabelMismatch(format!("unrecognized label {s:?}"));
        if s == "z0" {
            return Ok(FrameLabel::Zero);
        }
        let (kind, idx) = s.split_at(1);
        let idx: usize = idx.parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        match kind {
            "x" => Ok(FrameLabel::Unprimed(idx)),
            "t" => Ok(FrameLabel::Tilde(idx)),
            _ => Err(bad()),
        }
    }

    pub fn name(self) -> String {
        match self {
            FrameLabel::Unprimed(mu) => format!("x{mu}"),
            FrameLabel::Tilde(mu) => format!("t{mu}"),
            FrameLabel::Zero => "z0".to_string(),
        }
    }
}

/// Canonical pairing matrix h in frame indices; h⁻¹ = h.
pub fn frame_metric(m: usize, epsilon: usize) -> Arr2 {
    let n = 2 * m + epsilon;
    let one = C64::new(1.0, 0.0);
    let mut h = Arr2::zeros(n);
    for mu in 0..m {
        h.set(mu, m + mu, one);
        h.set(m + mu, mu, one);
    }
    if epsilon == 1 {
        h.set(2 * m, 2 * m, one);
    }
    h
}

/// The index pairing with h: Unprimed ↔ Tilde, Zero fixed.
pub fn dual_index(i: usize, m: usize, epsilon: usize) -> usize {
    let _ = epsilon;
    if i < m {
        m + i
    } else if i < 2 * m {
        i - m
    } else {
        i
    }
}

/// M ⊆ {1..m}, selecting N_M = span{ξ_μ: μ∈M} ∪ {ξ̃_ν̃: ν∉M}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalStructure {
    pub m: usize,
    pub members: BTreeSet<usize>,
}

impl CanonicalStructure {
    pub fn new(m: usize, members: impl IntoIterator<Item = usize>) -> Result<Self, NullFrameError> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&mu| mu == 0 || mu > m) {
            return Err(NullFrameError::LabelMismatch(format!(
                "structure index {bad} outside 1..={m}"
            )));
        }
        Ok(CanonicalStructure { m, members })
    }

    pub fn full(m: usize) -> Self {
        CanonicalStructure { m, members: (1..=m).collect() }
    }

    pub fn empty(m: usize) -> Self {
        CanonicalStructure { m, members: BTreeSet::new() }
    }

    pub fn contains(&self, mu: usize) -> bool {
        self.members.contains(&mu)
    }

    /// All 2^m structures, in subset-bitmask order.
    pub fn enumerate(m: usize) -> Vec<CanonicalStructure> {
        (0u32..(1 << m))
            .map(|mask| CanonicalStructure {
                m,
                members: (1..=m).filter(|mu| mask & (1 << (mu - 1)) != 0).collect(),
            })
            .collect()
    }

    /// Frame indices of the vectors spanning N_M.
    pub fn span_indices(&self) -> Vec<usize> {
        let m = self.m;
        let mut out = Vec::with_capacity(m);
        for mu in 1..=m {
            if self.contains(mu) {
                out.push(mu - 1);
            } else {
                out.push(m + mu - 1);
            }
        }
        out
    }

    /// Frame indices spanning N_M^⊥ (equal to N_M when ε = 0, plus ξ_0 when ε = 1).
    pub fn perp_indices(&self, epsilon: usize) -> Vec<usize> {
        let mut out = self.span_indices();
        if epsilon == 1 {
            out.push(2 * self.m);
        }
        out
    }
}

/// Involutive permutation of frame indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelPerm {
    pub map: Vec<usize>,
}

impl LabelPerm {
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_involutive(&self) -> bool {
        (0..self.map.len()).all(|i| self.map[self.map[i]] == i)
    }
}

/// Swap ξ_μ ↔ ξ̃_μ̃ exactly for μ ∉ M; afterwards N_M looks like N_S.
pub fn relabel_for(structure: &CanonicalStructure, epsilon: usize) -> LabelPerm {
    let m = structure.m;
    let n = 2 * m + epsilon;
    let mut map: Vec<usize> = (0..n).collect();
    for mu in 1..=m {
        if !structure.contains(mu) {
            map[mu - 1] = m + mu - 1;
            map[m + mu - 1] = mu - 1;
        }
    }
    LabelPerm { map }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_index_roundtrip() {
        let m = 3;
        for i in 0..7 {
            let l = FrameLabel::from_index(i, m, 1);
            assert_eq!(l.to_index(m), i);
            assert_eq!(FrameLabel::parse(&l.name()).unwrap(), l);
        }
    }

    #[test]
    fn relabel_is_involutive_for_all_m() {
        for m in 2..=4 {
            for s in CanonicalStructure::enumerate(m) {
                let p = relabel_for(&s, 1);
                assert!(p.is_involutive());
            }
            assert_eq!(CanonicalStructure::enumerate(m).len(), 1 << m);
        }
    }

    #[test]
    fn relabel_examples() {
        // M = S → identity; M = ∅ → full swap; m=3, M={1} swaps pairs 2, 3.
        let m = 3;
        let id = relabel_for(&CanonicalStructure::full(m), 0);
        assert_eq!(id.map, vec![0, 1, 2, 3, 4, 5]);
        let swap = relabel_for(&CanonicalStructure::empty(m), 0);
        assert_eq!(swap.map, vec![3, 4, 5, 0, 1, 2]);
        let partial = relabel_for(&CanonicalStructure::new(m, [1]).unwrap(), 0);
        assert_eq!(partial.map, vec![0, 4, 5, 3, 1, 2]);
    }

    #[test]
    fn frame_metric_self_inverse() {
        for (m, eps) in [(2, 0), (2, 1), (3, 0), (3, 1), (4, 0), (4, 1)] {
            let h = frame_metric(m, eps);
            let n = 2 * m + eps;
            for a in 0..n {
                for b in 0..n {
                    let mut s = C64::new(0.0, 0.0);
                    for c in 0..n {
                        s += h.get(a, c) * h.get(c, b);
                    }
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert_eq!(s, C64::new(expect, 0.0));
                }
            }
            for i in 0..n {
                assert_eq!(dual_index(dual_index(i, m, eps), m, eps), i);
            }
        }
    }
}
