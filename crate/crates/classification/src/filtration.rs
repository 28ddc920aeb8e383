//! Filtration level of a frame tensor with respect to a canonical structure.
//!
//! A tensor sits at level t when every component whose index-weight sum s
//! satisfies s ≥ 1 − t vanishes; the reported level is the largest such t.
//! With doubled integers this reads s2 ≥ 2 − t2, so the level is simply
//! −max{s2 over surviving components}, capped by the zero-section top.

use std::collections::BTreeMap;

use null_frame::{relabel_for, CanonicalStructure, FrameLabel};

use crate::tensor::{FrameTensor, SymmetryClass};
use crate::weight::doubled_weight;
use crate::ClassError;

/// Doubled (bottom, top) of the level range for a class and parity.
pub fn level_range2(rank: usize, epsilon: usize) -> (i32, i32) {
    match (rank, epsilon) {
        (4, 0) => (-4, 6),
        (4, 1) => (-8, 10),
        (3, 0) => (-3, 5),
        (3, 1) => (-6, 8),
        _ => unreachable!("rank checked before"),
    }
}

#[derive(Clone, Debug)]
pub struct FiltrationReport {
    pub structure: CanonicalStructure,
    /// Twice the level, so half-integer Cotton-York levels stay exact.
    pub level2: i32,
    pub bottom2: i32,
    pub top2: i32,
    pub is_zero: bool,
    /// τ·‖t‖_∞, the magnitude below which a component counts as vanishing.
    pub threshold: f64,
    /// Doubled weight sum → max component magnitude at that weight.
    pub grading_profile: BTreeMap<i32, f64>,
    /// Components within a factor 10 of the vanishing threshold.
    pub marginal: Vec<(Vec<FrameLabel>, f64)>,
    pub warning: Option<String>,
}

impl FiltrationReport {
    pub fn level(&self) -> f64 {
        self.level2 as f64 / 2.0
    }

    pub fn member2(&self, t2: i32) -> bool {
        t2 <= self.level2
    }
}

pub fn filtration_level(
    t: &FrameTensor,
    structure: &CanonicalStructure,
    tau: f64,
) -> Result<FiltrationReport, ClassError> {
    if structure.m != t.m {
        return Err(ClassError::Malformed(format!(
            "structure is over m={}, tensor over m={}",
            structure.m, t.m
        )));
    }
    match (t.symmetry_class, t.rank) {
        (SymmetryClass::Weyl, 4) | (SymmetryClass::CottonYork, 3) => {}
        _ => {
            return Err(ClassError::Malformed(
                "filtration applies to Weyl (rank 4) or Cotton-York (rank 3) tensors".to_string(),
            ))
        }
    }
    let norm = t.max_norm();
    let residual = t.symmetry_residual();
    let tolerance = tau * norm.max(1e-300);
    if residual > tolerance {
        return Err(ClassError::SymmetryViolation { residual, tolerance });
    }

    // Weight of an original frame row, seen from the frame adapted to N_M.
    let perm = relabel_for(structure, t.epsilon);
    let n = t.n();
    let row_weight2: Vec<i32> = (0..n)
        .map(|i| {
            doubled_weight(FrameLabel::from_index(perm.apply(i), t.m, t.epsilon), t.epsilon)
        })
        .collect();

    let (bottom2, top2) = level_range2(t.rank, t.epsilon);
    let threshold = tau * norm;
    let mut grading_profile: BTreeMap<i32, f64> = BTreeMap::new();
    let mut marginal = Vec::new();
    let mut s2_max: Option<i32> = None;
    for f in 0..t.data().len() {
        let ix = t.decode(f);
        let s2: i32 = ix.iter().map(|&i| row_weight2[i]).sum();
        let mag = t.data()[f].norm();
        let slot = grading_profile.entry(s2).or_insert(0.0);
        if mag > *slot {
            *slot = mag;
        }
        if norm > 0.0 {
            if mag >= threshold {
                s2_max = Some(s2_max.map_or(s2, |cur| cur.max(s2)));
            }
            if mag >= threshold / 10.0 && mag < threshold * 10.0 {
                let labels: Vec<FrameLabel> =
                    ix.iter().map(|&i| FrameLabel::from_index(i, t.m, t.epsilon)).collect();
                marginal.push((labels, mag));
            }
        }
    }
    let level2 = match s2_max {
        None => top2,
        Some(s2) => -s2,
    };
    debug_assert!(level2 >= bottom2 && level2 <= top2);

    // Monotone membership: level t holds iff every component at s2 ≥ 2−t2
    // vanishes; spot-check the whole range against the single-max shortcut.
    #[cfg(debug_assertions)]
    {
        let mut t2 = bottom2;
        while t2 <= top2 {
            let member = grading_profile
                .iter()
                .all(|(&s2, &mag)| s2 < 2 - t2 || mag < threshold || norm == 0.0);
            debug_assert_eq!(member, t2 <= level2, "membership not monotone at t2={t2}");
            t2 += 2;
        }
    }

    let warning = if t.m == 2 && t.epsilon == 0 {
        Some(
            "four-dimensional input: the self-dual/anti-self-dual refinement is not applied; \
             levels use the generic weight grading only"
                .to_string(),
        )
    } else {
        None
    };

    Ok(FiltrationReport {
        structure: structure.clone(),
        level2,
        bottom2,
        top2,
        is_zero: norm == 0.0,
        threshold,
        grading_profile,
        marginal,
        warning,
    })
}

/// Zero out every component whose doubled weight sum (w.r.t. the given
/// structure) is ≥ the cut.  Weight truncation commutes with all class
/// symmetries — permutations preserve the weight multiset and h pairs
/// cancelling weights — so the class survives exactly.  This is how
/// synthetic tensors at a prescribed level are made.
pub fn weight_truncate(
    t: &FrameTensor,
    structure: &CanonicalStructure,
    cut2: i32,
) -> Result<FrameTensor, ClassError> {
    if structure.m != t.m {
        return Err(ClassError::Malformed(format!(
            "structure is over m={}, tensor over m={}",
            structure.m, t.m
        )));
    }
    let perm = relabel_for(structure, t.epsilon);
    let n = t.n();
    let row_weight2: Vec<i32> = (0..n)
        .map(|i| {
            doubled_weight(FrameLabel::from_index(perm.apply(i), t.m, t.epsilon), t.epsilon)
        })
        .collect();
    let mut out = t.clone();
    for f in 0..out.data().len() {
        let ix = out.decode(f);
        let s2: i32 = ix.iter().map(|&i| row_weight2[i]).sum();
        if s2 >= cut2 {
            out.data_mut()[f] = chart_engine::C64::new(0.0, 0.0);
        }
    }
    Ok(out)
}
