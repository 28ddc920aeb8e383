//! Real slices of the complex model: which real indices a signature admits,
//! the conjugation that pins a null frame to that slice, and the induced
//! pairing of canonical structures.

use null_frame::{CanonicalStructure, FrameLabel};

use crate::ClassError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignatureInfo {
    pub p: usize,
    pub q: usize,
    pub m: usize,
    pub epsilon: usize,
}

impl SignatureInfo {
    pub fn new(p: usize, q: usize) -> Result<Self, ClassError> {
        let n = p + q;
        if n < 4 {
            return Err(ClassError::Malformed(format!(
                "signature ({p},{q}) has dimension {n} < 4"
            )));
        }
        Ok(SignatureInfo { p, q, m: n / 2, epsilon: n % 2 })
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }
}

/// Real indices r realizable in signature (p,q): r never exceeds min(p,q),
/// and in even dimension r has the parity of min(p,q).
pub fn real_index_allowed(sig: &SignatureInfo) -> Vec<usize> {
    let l = sig.p.min(sig.q);
    if sig.epsilon == 0 {
        (0..=l).filter(|r| r % 2 == l % 2).collect()
    } else {
        (0..=l).collect()
    }
}

/// The antilinear frame involution realizing real index r in signature (p,q).
/// ξ_1..ξ_r and their duals are fixed; the remaining hyperbolic pairs are
/// swapped, with sign +1 up to slot s and −1 after; in odd dimension ξ_0
/// picks up a sign set by the parity of r − min(p,q).
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugationAction {
    pub m: usize,
    pub epsilon: usize,
    pub r: usize,
    pub s: usize,
    /// image row of each canonical frame row
    pub targets: Vec<usize>,
    /// sign carried by each image
    pub signs: Vec<f64>,
}

pub fn conjugation_action(sig: &SignatureInfo, r: usize) -> Result<ConjugationAction, ClassError> {
    if !real_index_allowed(sig).contains(&r) {
        return Err(ClassError::InvalidRealIndex { r, p: sig.p, q: sig.q });
    }
    let (m, epsilon) = (sig.m, sig.epsilon);
    let k = sig.p.max(sig.q);
    let l = sig.p.min(sig.q);
    let (s, sigma0) = if epsilon == 0 {
        ((k + r) / 2, 1.0)
    } else if (r + l) % 2 == 1 {
        // r − min(p,q) odd: the odd direction flips
        ((k + r) / 2, -1.0)
    } else {
        ((k + r - 1) / 2, 1.0)
    };
    debug_assert!(r <= s && s <= m);
    let n = 2 * m + epsilon;
    let mut targets = vec![0usize; n];
    let mut signs = vec![1.0f64; n];
    for mu in 1..=m {
        let (ui, ti) = (FrameLabel::Unprimed(mu).to_index(m), FrameLabel::Tilde(mu).to_index(m));
        if mu <= r {
            targets[ui] = ui;
            targets[ti] = ti;
        } else {
            let sign = if mu <= s { 1.0 } else { -1.0 };
            targets[ui] = ti;
            targets[ti] = ui;
            signs[ui] = sign;
            signs[ti] = sign;
        }
    }
    if epsilon == 1 {
        let zi = FrameLabel::Zero.to_index(m);
        targets[zi] = zi;
        signs[zi] = sigma0;
    }
    Ok(ConjugationAction { m, epsilon, r, s, targets, signs })
}

impl ConjugationAction {
    pub fn apply_label(&self, label: FrameLabel) -> (FrameLabel, f64) {
        let i = label.to_index(self.m);
        (FrameLabel::from_index(self.targets[i], self.m, self.epsilon), self.signs[i])
    }

    /// Image of N_M under the conjugation.  The span of N_M is carried
    /// vector by vector; a spanning ξ landing on a ±ξ̃ moves its slot to
    /// the complement and vice versa.
    pub fn conjugate_structure(&self, structure: &CanonicalStructure) -> CanonicalStructure {
        let mut members = Vec::new();
        for mu in 1..=self.m {
            let label = if structure.contains(mu) {
                FrameLabel::Unprimed(mu)
            } else {
                FrameLabel::Tilde(mu)
            };
            match self.apply_label(label).0 {
                FrameLabel::Unprimed(nu) => members.push(nu),
                FrameLabel::Tilde(_) => {}
                FrameLabel::Zero => unreachable!("conjugation never mixes ξ_0 into a pair"),
            }
        }
        CanonicalStructure::new(self.m, members)
            .expect("conjugation permutes pair slots within range")
    }

    /// Orbits of the 2^m canonical structures under conjugation:
    /// (lex-least representative, orbit size), in enumeration order.
    pub fn quotient_structures(&self) -> Vec<(CanonicalStructure, usize)> {
        let mask = |st: &CanonicalStructure| -> usize {
            (1..=self.m).filter(|&mu| st.contains(mu)).map(|mu| 1usize << (mu - 1)).sum()
        };
        let mut out = Vec::new();
        let mut seen = vec![false; 1 << self.m];
        for st in CanonicalStructure::enumerate(self.m) {
            let a = mask(&st);
            if seen[a] {
                continue;
            }
            let image = self.conjugate_structure(&st);
            let b = mask(&image);
            seen[a] = true;
            if b == a {
                out.push((st, 1));
            } else {
                seen[b] = true;
                out.push((st, 2));
            }
        }
        out
    }
}

/// Convenience wrapper pairing a signature's real index with its quotient.
pub fn quotient_structures(
    sig: &SignatureInfo,
    r: usize,
) -> Result<Vec<(CanonicalStructure, usize)>, ClassError> {
    Ok(conjugation_action(sig, r)?.quotient_structures())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn allowed_real_indices_by_signature() {
        let euclid = SignatureInfo::new(6, 0).unwrap();
        assert_eq!(real_index_allowed(&euclid), vec![0]);
        let lorentz = SignatureInfo::new(5, 1).unwrap();
        assert_eq!(real_index_allowed(&lorentz), vec![1]);
        let split33 = SignatureInfo::new(3, 3).unwrap();
        assert_eq!(real_index_allowed(&split33), vec![1, 3]);
        let odd = SignatureInfo::new(4, 3).unwrap();
        assert_eq!(real_index_allowed(&odd), vec![0, 1, 2, 3]);
        assert!(SignatureInfo::new(2, 1).is_err());
    }

    #[test]
    fn euclidean_conjugation_swaps_every_pair_unsigned() {
        let sig = SignatureInfo::new(6, 0).unwrap();
        let act = conjugation_action(&sig, 0).unwrap();
        assert_eq!(act.s, 3);
        for mu in 1..=3 {
            assert_eq!(act.apply_label(FrameLabel::Unprimed(mu)), (FrameLabel::Tilde(mu), 1.0));
            assert_eq!(act.apply_label(FrameLabel::Tilde(mu)), (FrameLabel::Unprimed(mu), 1.0));
        }
        assert!(conjugation_action(&sig, 2).is_err());
    }

    #[test]
    fn lorentzian_even_conjugation_fixes_one_pair() {
        let sig = SignatureInfo::new(5, 1).unwrap();
        let act = conjugation_action(&sig, 1).unwrap();
        assert_eq!(act.s, 3); // all swapped pairs carry +
        assert_eq!(act.apply_label(FrameLabel::Unprimed(1)), (FrameLabel::Unprimed(1), 1.0));
        assert_eq!(act.apply_label(FrameLabel::Tilde(1)), (FrameLabel::Tilde(1), 1.0));
        for mu in 2..=3 {
            assert_eq!(act.apply_label(FrameLabel::Unprimed(mu)), (FrameLabel::Tilde(mu), 1.0));
        }
    }

    #[test]
    fn split_signature_conjugation_is_the_identity_permutation() {
        let sig = SignatureInfo::new(3, 3).unwrap();
        let act = conjugation_action(&sig, 3).unwrap();
        for mu in 1..=3 {
            assert_eq!(act.apply_label(FrameLabel::Unprimed(mu)), (FrameLabel::Unprimed(mu), 1.0));
        }
    }

    #[test]
    fn odd_dimension_signs_follow_the_parity_of_r() {
        // (4,3): r − q odd ⇒ ξ_0 flips; r − q even ⇒ ξ_0 fixed
        let sig = SignatureInfo::new(4, 3).unwrap();
        let act0 = conjugation_action(&sig, 0).unwrap();
        assert_eq!(act0.apply_label(FrameLabel::Zero), (FrameLabel::Zero, -1.0));
        assert_eq!(act0.s, 2);
        let act1 = conjugation_action(&sig, 1).unwrap();
        assert_eq!(act1.apply_label(FrameLabel::Zero), (FrameLabel::Zero, 1.0));
        assert_eq!(act1.s, 2);
        let act2 = conjugation_action(&sig, 2).unwrap();
        assert_eq!(act2.apply_label(FrameLabel::Zero), (FrameLabel::Zero, -1.0));
        assert_eq!(act2.s, 3);
    }

    #[test]
    fn conjugation_applied_twice_is_the_identity() {
        for n in 4..=9usize {
            for p in 0..=n {
                let q = n - p;
                let Ok(sig) = SignatureInfo::new(p, q) else { continue };
                for r in real_index_allowed(&sig) {
                    let act = conjugation_action(&sig, r).unwrap();
                    let dim = 2 * act.m + act.epsilon;
                    for i in 0..dim {
                        let j = act.targets[i];
                        assert_eq!(act.targets[j], i, "({p},{q}) r={r}");
                        assert_eq!(act.signs[i] * act.signs[j], 1.0, "({p},{q}) r={r}");
                    }
                    for st in CanonicalStructure::enumerate(act.m) {
                        let back = act.conjugate_structure(&act.conjugate_structure(&st));
                        assert_eq!(back, st);
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_sizes_count_every_structure_once() {
        let sig = SignatureInfo::new(4, 0).unwrap();
        let q = quotient_structures(&sig, 0).unwrap();
        assert_eq!(q.len(), 2);
        assert!(q.iter().all(|(_, size)| *size == 2));
        let split = SignatureInfo::new(2, 2).unwrap();
        let qs = quotient_structures(&split, 2).unwrap();
        assert_eq!(qs.len(), 4);
        assert!(qs.iter().all(|(_, size)| *size == 1));
        for (sig, r) in [(SignatureInfo::new(3, 1).unwrap(), 1)] {
            let q = quotient_structures(&sig, r).unwrap();
            let total: usize = q.iter().map(|(_, size)| size).sum();
            assert_eq!(total, 1 << sig.m);
            assert_eq!(q.len(), 2);
        }
    }
}
