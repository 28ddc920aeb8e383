//! Random tensors lying exactly in a prescribed degeneracy class.  Weight
//! truncation commutes with all the class symmetries, so projecting a raw
//! random array and then chopping weights ≥ the class cut gives an exact,
//! generically-filled member.

use chart_engine::{jet_at, Arr3, Arr4, ChartMetric, RatPoly, C64};
use classification::{
    cotton_project, symmetry_project, weight_truncate, FrameTensor,
};
use null_frame::{pointwise_null_frame, CanonicalStructure, FrameField, FrameLabel};
use rand::Rng;

use crate::GsError;

/// Constant frame field whose vectors form an exact null basis at `point`.
/// Away from the point the pairing drifts, but every identity evaluated here
/// is pointwise, and a pointwise-null basis is all they require.
pub fn constant_null_frame(chart: &ChartMetric, point: &[C64]) -> Result<FrameField, GsError> {
    let (m, epsilon) = (chart.m, chart.epsilon);
    let n = 2 * m + epsilon;
    let jet = jet_at(chart, point)?;
    let vecs = pointwise_null_frame(&jet.g0, epsilon)?;
    let labeled = vecs
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            (
                FrameLabel::from_index(i, m, epsilon),
                v.into_iter().map(|c| RatPoly::constant(n, c)).collect(),
            )
        })
        .collect();
    Ok(FrameField::new(m, epsilon, labeled)?)
}

/// Doubled Cotton-York level needed alongside a degenerate Weyl tensor of
/// degree k: k−1/2 in even dimension, k−1 in odd.
pub fn required_cy_level2(epsilon: usize, k: usize) -> i32 {
    2 * k as i32 - 1 - epsilon as i32
}

fn random_c64<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Weyl-symmetric tensor lying in the degree-k class (components of doubled
/// weight ≥ 2−2k vanish), generic otherwise.
pub fn random_class_weyl<R: Rng>(
    m: usize,
    epsilon: usize,
    k: usize,
    rng: &mut R,
) -> Result<FrameTensor, GsError> {
    let n = 2 * m + epsilon;
    let mut raw = Arr4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    raw.set(a, b, c, d, random_c64(rng));
                }
            }
        }
    }
    let w = symmetry_project(&raw, m, epsilon)?;
    let s = CanonicalStructure::full(m);
    Ok(weight_truncate(&w, &s, 2 - 2 * k as i32)?)
}

/// Cotton-York-symmetric tensor at the level that accompanies a degree-k Weyl
/// class (doubled cut 3−2k even, 4−2k odd).
pub fn random_class_cy<R: Rng>(
    m: usize,
    epsilon: usize,
    k: usize,
    rng: &mut R,
) -> Result<FrameTensor, GsError> {
    let n = 2 * m + epsilon;
    let mut raw = Arr3::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                raw.set(a, b, c, random_c64(rng));
            }
        }
    }
    let a = cotton_project(&raw, m, epsilon)?;
    let s = CanonicalStructure::full(m);
    Ok(weight_truncate(&a, &s, 2 - required_cy_level2(epsilon, k))?)
}

/// Weakened Weyl projection: pair antisymmetry and pair swap only — no cyclic
/// identity, no trace removal.  The determinant-split probes need symbols that
/// stay supported on a single dihedral orbit; the full projection would smear
/// a probe across every component tied to it by traces.
pub fn weak_weyl_project(t: &Arr4) -> Arr4 {
    let n = t.n();
    let mut out = Arr4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = (t.get(a, b, c, d) - t.get(b, a, c, d) - t.get(a, b, d, c)
                        + t.get(b, a, d, c)
                        + t.get(c, d, a, b)
                        - t.get(d, c, a, b)
                        - t.get(c, d, b, a)
                        + t.get(d, c, b, a))
                        / 8.0;
                    out.set(a, b, c, d, v);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use classification::filtration_level;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn class_tensors_sit_at_their_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(m, epsilon) in &[(2usize, 0usize), (2, 1), (3, 0), (3, 1)] {
            let s = CanonicalStructure::full(m);
            let kmax = if epsilon == 0 { 2 } else { 4 };
            for k in 0..=kmax {
                let w = random_class_weyl(m, epsilon, k, &mut rng).unwrap();
                let rep = filtration_level(&w, &s, 1e-12).unwrap();
                assert!(rep.level2 >= 2 * k as i32, "weyl m={m} eps={epsilon} k={k}: {}", rep.level2);
                // generic within the class: not accidentally deeper
                assert_eq!(rep.level2, 2 * k as i32, "weyl too degenerate at m={m} eps={epsilon} k={k}");
                let a = random_class_cy(m, epsilon, k, &mut rng).unwrap();
                let rep = filtration_level(&a, &s, 1e-12).unwrap();
                assert_eq!(rep.level2, required_cy_level2(epsilon, k), "cy m={m} eps={epsilon} k={k}");
            }
        }
    }

    #[test]
    fn weak_projection_is_idempotent_and_keeps_single_orbits() {
        let n = 7;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut raw = Arr4::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        raw.set(a, b, c, d, C64::new(rng.gen_range(-1.0..1.0), 0.0));
                    }
                }
            }
        }
        let p = weak_weyl_project(&raw);
        let pp = weak_weyl_project(&p);
        let mut diff = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        diff = diff.max((p.get(a, b, c, d) - pp.get(a, b, c, d)).norm());
                    }
                }
            }
        }
        assert!(diff < 1e-14);

        // a single seeded component spreads only over its dihedral orbit
        let mut probe = Arr4::zeros(n);
        probe.set(0, 1, 2, 3, C64::new(1.0, 0.0));
        let p = weak_weyl_project(&probe);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let inside = [(a, b, c, d), (c, d, a, b)]
                            .iter()
                            .any(|&(x, y, u, v)| {
                                (x.min(y), x.max(y), u.min(v), u.max(v)) == (0, 1, 2, 3)
                            });
                        if !inside {
                            assert_eq!(p.get(a, b, c, d), C64::new(0.0, 0.0));
                        }
                    }
                }
            }
        }
    }
}
