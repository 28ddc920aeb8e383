//! Frame tensors: dense rank-3/4 arrays over frame labels, symmetry-class
//! residuals, JSON exchange with orbit completion, and extraction of frame
//! components from coordinate tensors.

use chart_engine::{Arr3, Arr4, C64};
use null_frame::{frame_metric, FrameLabel, LabelPerm};

use crate::ClassError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryClass {
    Weyl,
    CottonYork,
    General,
}

impl SymmetryClass {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::Weyl => "weyl",
            SymmetryClass::CottonYork => "cotton_york",
            SymmetryClass::General => "general",
        }
    }
}

/// Dense tensor in frame components, rows ordered ξ_1..ξ_m, ξ̃_1..ξ̃_m, ξ_0.
#[derive(Clone, Debug)]
pub struct FrameTensor {
    pub m: usize,
    pub epsilon: usize,
    pub rank: usize,
    pub symmetry_class: SymmetryClass,
    entries: Vec<C64>,
}

impl FrameTensor {
    pub fn zeros(
        m: usize,
        epsilon: usize,
        rank: usize,
        symmetry_class: SymmetryClass,
    ) -> Result<Self, ClassError> {
        if m < 2 || epsilon > 1 {
            return Err(ClassError::Malformed(format!(
                "need m >= 2 and epsilon in {{0,1}}, got m={m}, epsilon={epsilon}"
            )));
        }
        if rank != 3 && rank != 4 {
            return Err(ClassError::Malformed(format!("rank must be 3 or 4, got {rank}")));
        }
        let n = 2 * m + epsilon;
        Ok(FrameTensor { m, epsilon, rank, symmetry_class, entries: vec![C64::new(0.0, 0.0); n.pow(rank as u32)] })
    }

    pub fn n(&self) -> usize {
        2 * self.m + self.epsilon
    }

    fn flat(&self, ix: &[usize]) -> usize {
        debug_assert_eq!(ix.len(), self.rank);
        let n = self.n();
        ix.iter().fold(0, |acc, &i| {
            debug_assert!(i < n);
            acc * n + i
        })
    }

    pub fn get(&self, ix: &[usize]) -> C64 {
        self.entries[self.flat(ix)]
    }

    pub fn set(&mut self, ix: &[usize], v: C64) {
        let f = self.flat(ix);
        self.entries[f] = v;
    }

    pub fn get_labeled(&self, labels: &[FrameLabel]) -> C64 {
        let ix: Vec<usize> = labels.iter().map(|l| l.to_index(self.m)).collect();
        self.get(&ix)
    }

    pub fn data(&self) -> &[C64] {
        &self.entries
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.entries
    }

    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Decode a flat position back into frame row indices.
    pub fn decode(&self, mut flat: usize) -> Vec<usize> {
        let n = self.n();
        let mut ix = vec![0usize; self.rank];
        for slot in (0..self.rank).rev() {
            ix[slot] = flat % n;
            flat /= n;
        }
        ix
    }

    /// T'[i..] = T[p(i)..]; the relabelings we use are involutive and
    /// preserve the frame metric, so the symmetry class survives.
    pub fn relabeled(&self, perm: &LabelPerm) -> FrameTensor {
        let mut out = self.clone();
        for f in 0..self.entries.len() {
            let ix = self.decode(f);
            let mapped: Vec<usize> = ix.iter().map(|&i| perm.apply(i)).collect();
            out.entries[f] = self.get(&mapped);
        }
        out
    }

    /// Worst absolute violation of the declared class symmetries
    /// (antisymmetries, pair swap / cyclic identity, traces against h).
    pub fn symmetry_residual(&self) -> f64 {
        match self.symmetry_class {
            SymmetryClass::General => 0.0,
            SymmetryClass::Weyl => weyl_residual(self),
            SymmetryClass::CottonYork => cotton_residual(self),
        }
    }
}

fn weyl_residual(t: &FrameTensor) -> f64 {
    debug_assert_eq!(t.rank, 4);
    let n = t.n();
    let h = frame_metric(t.m, t.epsilon);
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = t.get(&[a, b, c, d]);
                    worst = worst.max((v + t.get(&[b, a, c, d])).norm());
                    worst = worst.max((v + t.get(&[a, b, d, c])).norm());
                    worst = worst.max((v - t.get(&[c, d, a, b])).norm());
                    let cyc = v + t.get(&[a, c, d, b]) + t.get(&[a, d, b, c]);
                    worst = worst.max(cyc.norm());
                }
            }
        }
    }
    // Trace over slots 1 and 3; the remaining traces follow from the above.
    for b in 0..n {
        for d in 0..n {
            let mut tr = C64::new(0.0, 0.0);
            for a in 0..n {
                for c in 0..n {
                    let hac = h.get(a, c);
                    if hac.norm() > 0.0 {
                        tr += hac * t.get(&[a, b, c, d]);
                    }
                }
            }
            worst = worst.max(tr.norm());
        }
    }
    worst
}

fn cotton_residual(t: &FrameTensor) -> f64 {
    debug_assert_eq!(t.rank, 3);
    let n = t.n();
    let h = frame_metric(t.m, t.epsilon);
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = t.get(&[a, b, c]);
                worst = worst.max((v + t.get(&[a, c, b])).norm());
                let cyc = v + t.get(&[b, c, a]) + t.get(&[c, a, b]);
                worst = worst.max(cyc.norm());
            }
        }
    }
    for c in 0..n {
        let mut tr = C64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                let hab = h.get(a, b);
                if hab.norm() > 0.0 {
                    tr += hab * t.get(&[a, b, c]);
                }
            }
        }
        worst = worst.max(tr.norm());
    }
    worst
}

/// Index-symmetry orbit of a position, with signs: the loader and serializer
/// complete entries by these orbits only (linear identities like the cyclic
/// one are checked elsewhere, not imposed).
fn symmetry_orbit(class: SymmetryClass, ix: &[usize]) -> Vec<(Vec<usize>, f64)> {
    match (class, ix.len()) {
        (SymmetryClass::Weyl, 4) => {
            let mut out = Vec::with_capacity(8);
            for sa in 0..2 {
                for sc in 0..2 {
                    for sp in 0..2 {
                        let mut u = [ix[0], ix[1], ix[2], ix[3]];
                        if sa == 1 {
                            u.swap(0, 1);
                        }
                        if sc == 1 {
                            u.swap(2, 3);
                        }
                        if sp == 1 {
                            u = [u[2], u[3], u[0], u[1]];
                        }
                        let sign = if (sa + sc) % 2 == 1 { -1.0 } else { 1.0 };
                        out.push((u.to_vec(), sign));
                    }
                }
            }
            out
        }
        (SymmetryClass::CottonYork, 3) => {
            vec![(ix.to_vec(), 1.0), (vec![ix[0], ix[2], ix[1]], -1.0)]
        }
        _ => vec![(ix.to_vec(), 1.0)],
    }
}

fn parse_label(s: &str, m: usize, epsilon: usize) -> Result<FrameLabel, ClassError> {
    let label = FrameLabel::parse(s).map_err(|e| ClassError::Malformed(e.to_string()))?;
    let ok = match label {
        FrameLabel::Unprimed(mu) | FrameLabel::Tilde(mu) => mu >= 1 && mu <= m,
        FrameLabel::Zero => epsilon == 1,
    };
    if !ok {
        return Err(ClassError::Malformed(format!("label {s:?} out of range for m={m}, epsilon={epsilon}")));
    }
    Ok(label)
}

/// Loader: an independent set of entries is expanded through the symmetry
/// orbit; assigning the same position twice with different values is a hard
/// conflict.
pub fn frame_tensor_from_json(v: &serde_json::Value) -> Result<FrameTensor, ClassError> {
    let bad = |msg: String| ClassError::Malformed(msg);
    let field = |key: &str| -> Result<u64, ClassError> {
        v.get(key)
            .and_then(|x| x.as_u64())
            .ok_or_else(|| bad(format!("tensor file needs integer \"{key}\"")))
    };
    let rank = field("rank")? as usize;
    let m = field("m")? as usize;
    let epsilon = field("epsilon")? as usize;
    let class = match v.get("class").and_then(|c| c.as_str()) {
        None => {
            if rank == 4 {
                SymmetryClass::Weyl
            } else {
                SymmetryClass::CottonYork
            }
        }
        Some("weyl") => SymmetryClass::Weyl,
        Some("cotton_york") => SymmetryClass::CottonYork,
        Some("general") => SymmetryClass::General,
        Some(other) => return Err(bad(format!("unknown class {other:?}"))),
    };
    let mut t = FrameTensor::zeros(m, epsilon, rank, class)?;
    let mut assigned = vec![false; t.entries.len()];
    let entries = v
        .get("entries")
        .and_then(|e| e.as_array())
        .ok_or_else(|| bad("tensor file needs an \"entries\" list".to_string()))?;
    for e in entries {
        let idx = e
            .get("idx")
            .and_then(|i| i.as_array())
            .ok_or_else(|| bad("entry needs an \"idx\" list".to_string()))?;
        if idx.len() != rank {
            return Err(bad(format!("entry has {} indices, rank is {rank}", idx.len())));
        }
        let mut rows = Vec::with_capacity(rank);
        for l in idx {
            let s = l.as_str().ok_or_else(|| bad("indices must be label strings".to_string()))?;
            rows.push(parse_label(s, m, epsilon)?.to_index(m));
        }
        let re = e.get("re").and_then(|x| x.as_f64()).unwrap_or(0.0);
        let im = e.get("im").and_then(|x| x.as_f64()).unwrap_or(0.0);
        let val = C64::new(re, im);
        for (pos, sign) in symmetry_orbit(class, &rows) {
            let f = t.flat(&pos);
            let w = val * sign;
            if assigned[f] && (t.entries[f] - w).norm() > 1e-12 * w.norm().max(1.0) {
                let names: Vec<String> =
                    pos.iter().map(|&i| FrameLabel::from_index(i, m, epsilon).name()).collect();
                return Err(bad(format!("symmetry conflict at [{}]", names.join(", "))));
            }
            t.entries[f] = w;
            assigned[f] = true;
        }
    }
    Ok(t)
}

/// Serializer: one entry per nonzero orbit, keyed by its lexicographically
/// least position.
pub fn frame_tensor_to_json(t: &FrameTensor) -> serde_json::Value {
    let mut entries = Vec::new();
    for f in 0..t.entries.len() {
        let ix = t.decode(f);
        let rep = symmetry_orbit(t.symmetry_class, &ix)
            .into_iter()
            .map(|(pos, _)| pos)
            .min()
            .expect("orbit is never empty");
        let v = t.entries[f];
        if rep == ix && v != C64::new(0.0, 0.0) {
            let names: Vec<String> = ix
                .iter()
                .map(|&i| FrameLabel::from_index(i, t.m, t.epsilon).name())
                .collect();
            entries.push(serde_json::json!({ "idx": names, "re": v.re, "im": v.im }));
        }
    }
    serde_json::json!({
        "rank": t.rank,
        "m": t.m,
        "epsilon": t.epsilon,
        "class": t.symmetry_class.name(),
        "entries": entries,
    })
}

fn check_frame_shape(n: usize, vectors: &[Vec<C64>]) -> Result<(), ClassError> {
    if vectors.len() != n || vectors.iter().any(|v| v.len() != n) {
        return Err(ClassError::Malformed(format!(
            "need {n} frame vectors of {n} components for the contraction"
        )));
    }
    Ok(())
}

/// Frame components of a covariant rank-4 coordinate tensor:
/// T_{abcd} = T_{pqrs} ξ_a^p ξ_b^q ξ_c^r ξ_d^s, one slot at a time.
pub fn frame_components4(
    coord: &Arr4,
    vectors: &[Vec<C64>],
    m: usize,
    epsilon: usize,
    class: SymmetryClass,
) -> Result<FrameTensor, ClassError> {
    let n = 2 * m + epsilon;
    if coord.n() != n {
        return Err(ClassError::Malformed(format!(
            "coordinate tensor has dimension {}, frame has {n}",
            coord.n()
        )));
    }
    check_frame_shape(n, vectors)?;
    // Contract the leading slot against the frame and rotate it to the back;
    // four passes leave the frame indices in the original slot order.
    let mut cur = coord.clone();
    for _slot in 0..4 {
        let mut next = Arr4::zeros(n);
        for a in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let mut acc = C64::new(0.0, 0.0);
                        for p in 0..n {
                            let w = vectors[a][p];
                            if w.norm() > 0.0 {
                                acc += w * cur.get(p, q, r, s);
                            }
                        }
                        next.set(q, r, s, a, acc);
                    }
                }
            }
        }
        cur = next;
    }
    let mut t = FrameTensor::zeros(m, epsilon, 4, class)?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    t.set(&[a, b, c, d], cur.get(a, b, c, d));
                }
            }
        }
    }
    Ok(t)
}

/// Rank-3 version of the same contraction.
pub fn frame_components3(
    coord: &Arr3,
    vectors: &[Vec<C64>],
    m: usize,
    epsilon: usize,
    class: SymmetryClass,
) -> Result<FrameTensor, ClassError> {
    let n = 2 * m + epsilon;
    if coord.n() != n {
        return Err(ClassError::Malformed(format!(
            "coordinate tensor has dimension {}, frame has {n}",
            coord.n()
        )));
    }
    check_frame_shape(n, vectors)?;
    let mut cur = coord.clone();
    for _slot in 0..3 {
        let mut next = Arr3::zeros(n);
        for a in 0..n {
            for q in 0..n {
                for r in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for p in 0..n {
                        let w = vectors[a][p];
                        if w.norm() > 0.0 {
                            acc += w * cur.get(p, q, r);
                        }
                    }
                    next.set(q, r, a, acc);
                }
            }
        }
        cur = next;
    }
    let mut t = FrameTensor::zeros(m, epsilon, 3, class)?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                t.set(&[a, b, c], cur.get(a, b, c));
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_completes_the_orbit() {
        let src = serde_json::json!({
            "rank": 4, "m": 3, "epsilon": 0,
            "entries": [ { "idx": ["t1", "t2", "t1", "t2"], "re": 1.0, "im": 0.0 } ],
        });
        let t = frame_tensor_from_json(&src).unwrap();
        let m = 3;
        let r1 = FrameLabel::Tilde(1).to_index(m);
        let r2 = FrameLabel::Tilde(2).to_index(m);
        assert_eq!(t.get(&[r1, r2, r1, r2]), C64::new(1.0, 0.0));
        assert_eq!(t.get(&[r2, r1, r1, r2]), C64::new(-1.0, 0.0));
        assert_eq!(t.get(&[r1, r2, r2, r1]), C64::new(-1.0, 0.0));
        assert_eq!(t.get(&[r2, r1, r2, r1]), C64::new(1.0, 0.0));
        let back = frame_tensor_to_json(&t);
        let t2 = frame_tensor_from_json(&back).unwrap();
        assert_eq!(t.data(), t2.data());
        assert_eq!(back["entries"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn json_conflicts_and_bad_labels_are_rejected() {
        let conflicting = serde_json::json!({
            "rank": 4, "m": 2, "epsilon": 0,
            "entries": [
                { "idx": ["x1", "x2", "x1", "x2"], "re": 1.0 },
                { "idx": ["x2", "x1", "x1", "x2"], "re": 1.0 },
            ],
        });
        assert!(matches!(frame_tensor_from_json(&conflicting), Err(ClassError::Malformed(_))));

        let diagonal = serde_json::json!({
            "rank": 4, "m": 2, "epsilon": 0,
            "entries": [ { "idx": ["x1", "x1", "x1", "x2"], "re": 0.5 } ],
        });
        assert!(frame_tensor_from_json(&diagonal).is_err());

        let out_of_range = serde_json::json!({
            "rank": 3, "m": 2, "epsilon": 0,
            "entries": [ { "idx": ["z0", "x1", "x2"], "re": 0.5 } ],
        });
        assert!(frame_tensor_from_json(&out_of_range).is_err());
    }

    #[test]
    fn relabel_is_an_involution_on_entries() {
        let src = serde_json::json!({
            "rank": 3, "m": 2, "epsilon": 1,
            "entries": [
                { "idx": ["x1", "x2", "t1"], "re": 0.3, "im": -0.1 },
                { "idx": ["z0", "x1", "t2"], "re": -0.8 },
            ],
        });
        let t = frame_tensor_from_json(&src).unwrap();
        let s = null_frame::CanonicalStructure::new(2, [2]).unwrap();
        let perm = null_frame::relabel_for(&s, 1);
        let twice = t.relabeled(&perm).relabeled(&perm);
        assert_eq!(t.data(), twice.data());
    }
}
