//! Classifying with respect to N_M must agree with adapting the frame to
//! N_M (relabeling the rows) and classifying with respect to the reference
//! structure.

use chart_engine::{Arr3, Arr4, C64};
use classification::{
    cotton_project, filtration_level, symmetry_project, weight_truncate, FrameTensor,
};
use null_frame::{relabel_for, CanonicalStructure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_weyl(m: usize, eps: usize, rng: &mut ChaCha8Rng) -> FrameTensor {
    let n = 2 * m + eps;
    let mut a = Arr4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    a.set(i, j, k, l, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                }
            }
        }
    }
    symmetry_project(&a, m, eps).unwrap()
}

fn random_cotton(m: usize, eps: usize, rng: &mut ChaCha8Rng) -> FrameTensor {
    let n = 2 * m + eps;
    let mut a = Arr3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                a.set(i, j, k, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
        }
    }
    cotton_project(&a, m, eps).unwrap()
}

fn check_all_structures(t: &FrameTensor, m: usize, eps: usize) {
    let full = CanonicalStructure::full(m);
    for structure in CanonicalStructure::enumerate(m) {
        let direct = filtration_level(t, &structure, 1e-8).unwrap();
        let relabeled = t.relabeled(&relabel_for(&structure, eps));
        let adapted = filtration_level(&relabeled, &full, 1e-8).unwrap();
        assert_eq!(direct.level2, adapted.level2, "m={m}, eps={eps}, {structure:?}");
        assert_eq!(direct.grading_profile, adapted.grading_profile);
        assert_eq!(direct.threshold, adapted.threshold);
    }
}

#[test]
fn relabeling_matches_structure_choice() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x65717569);
    let configs = [(2usize, 0usize), (3, 0), (2, 1), (3, 1)];
    for trial in 0..50 {
        let (m, eps) = configs[trial % configs.len()];
        let t = if trial % 2 == 0 {
            random_weyl(m, eps, &mut rng)
        } else {
            random_cotton(m, eps, &mut rng)
        };
        check_all_structures(&t, m, eps);

        // generic tensors bottom out everywhere; a truncation w.r.t. one
        // structure makes the level genuinely depend on the structure
        let all = CanonicalStructure::enumerate(m);
        let pick = all[rng.gen_range(0..all.len())].clone();
        let (bottom2, top2) = {
            let rep = filtration_level(&t, &pick, 1e-8).unwrap();
            (rep.bottom2, rep.top2)
        };
        let cut2 = 2 - rng.gen_range(bottom2..=top2);
        let truncated = weight_truncate(&t, &pick, cut2).unwrap();
        if truncated.max_norm() > 0.0 {
            check_all_structures(&truncated, m, eps);
        }
    }
}
