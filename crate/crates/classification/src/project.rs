//! Orthogonal projection of raw component arrays onto the Weyl and
//! Cotton-York symmetry classes.
//!
//! Both projections are closed-form.  For rank 4: antisymmetrize each pair,
//! symmetrize the pair swap, remove the totally antisymmetric part (the
//! cyclic identity for pair-symmetric tensors), then split off the trace
//! part exactly — the trace complement inside the curvature-symmetric space
//! is spanned by h-wedge products of symmetric matrices, and that family is
//! orthogonal to trace-free tensors because h is real and self-inverse.  The
//! rank-3 analogue uses the same trace-representer trick; there the Gram
//! matrix of the representers is (n−1)/2 times the identity.

use chart_engine::{Arr3, Arr4, C64};
use null_frame::frame_metric;

use crate::tensor::{FrameTensor, SymmetryClass};
use crate::ClassError;

fn perms_with_sign(k: usize) -> Vec<(Vec<usize>, f64)> {
    fn build(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                build(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    build(&mut Vec::new(), &mut vec![false; k], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let mut inversions = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn symmetry_project(raw: &Arr4, m: usize, epsilon: usize) -> Result<FrameTensor, ClassError> {
    let n = 2 * m + epsilon;
    if raw.n() != n {
        return Err(ClassError::Malformed(format!(
            "array dimension {} does not match 2m+epsilon = {n}",
            raw.n()
        )));
    }
    let h = frame_metric(m, epsilon);

    // Pair antisymmetries and pair-swap symmetry (all commute).
    let mut t = Arr4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = (raw.get(a, b, c, d) - raw.get(b, a, c, d) - raw.get(a, b, d, c)
                        + raw.get(b, a, d, c))
                        / 4.0;
                    t.set(a, b, c, d, v);
                }
            }
        }
    }
    let mut q = Arr4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    q.set(a, b, c, d, (t.get(a, b, c, d) + t.get(c, d, a, b)) / 2.0);
                }
            }
        }
    }

    // Remove the totally antisymmetric part.
    let perms = perms_with_sign(4);
    let mut t2 = Arr4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let ix = [a, b, c, d];
                    let mut alt = zero();
                    for (p, s) in &perms {
                        alt += q.get(ix[p[0]], ix[p[1]], ix[p[2]], ix[p[3]]) * *s;
                    }
                    t2.set(a, b, c, d, q.get(a, b, c, d) - alt / 24.0);
                }
            }
        }
    }

    // Exact trace split: t2 = weyl + h∧S with S symmetric, where the
    // 13-trace of h∧S is (n−2)S + h·tr_h(S).
    let mut tr = vec![vec![zero(); n]; n];
    for b in 0..n {
        for d in 0..n {
            let mut acc = zero();
            for a in 0..n {
                for c in 0..n {
                    let hac = h.get(a, c);
                    if hac.norm() > 0.0 {
                        acc += hac * t2.get(a, b, c, d);
                    }
                }
            }
            tr[b][d] = acc;
        }
    }
    let mut trt = zero();
    for b in 0..n {
        for d in 0..n {
            let hbd = h.get(b, d);
            if hbd.norm() > 0.0 {
                trt += hbd * tr[b][d];
            }
        }
    }
    let nf = n as f64;
    let mut s_mat = vec![vec![zero(); n]; n];
    for b in 0..n {
        for d in 0..n {
            s_mat[b][d] = (tr[b][d] - h.get(b, d) * trt / (2.0 * nf - 2.0)) / (nf - 2.0);
        }
    }
    let mut out = FrameTensor::zeros(m, epsilon, 4, SymmetryClass::Weyl)?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let kn = h.get(a, c) * s_mat[b][d] - h.get(a, d) * s_mat[b][c]
                        - h.get(b, c) * s_mat[a][d]
                        + h.get(b, d) * s_mat[a][c];
                    out.set(&[a, b, c, d], t2.get(a, b, c, d) - kn);
                }
            }
        }
    }
    Ok(out)
}

pub fn cotton_project(raw: &Arr3, m: usize, epsilon: usize) -> Result<FrameTensor, ClassError> {
    let n = 2 * m + epsilon;
    if raw.n() != n {
        return Err(ClassError::Malformed(format!(
            "array dimension {} does not match 2m+epsilon = {n}",
            raw.n()
        )));
    }
    let h = frame_metric(m, epsilon);

    // Antisymmetrize the last two slots, then drop the fully antisymmetric
    // part (equivalently, enforce the cyclic identity).
    let mut t = Arr3::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                t.set(a, b, c, (raw.get(a, b, c) - raw.get(a, c, b)) / 2.0);
            }
        }
    }
    let perms = perms_with_sign(3);
    let mut t2 = Arr3::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let ix = [a, b, c];
                let mut alt = zero();
                for (p, s) in &perms {
                    alt += t.get(ix[p[0]], ix[p[1]], ix[p[2]]) * *s;
                }
                t2.set(a, b, c, t.get(a, b, c) - alt / 6.0);
            }
        }
    }

    // Trace removal along W_c = antisym_bc(h ⊗ e_c); these stay inside the
    // symmetric class (the full antisymmetrization of h ⊗ e_c vanishes) and
    // are mutually orthogonal with squared norm (n−1)/2.
    let mut trace = vec![zero(); n];
    for c in 0..n {
        let mut acc = zero();
        for a in 0..n {
            for b in 0..n {
                let hab = h.get(a, b);
                if hab.norm() > 0.0 {
                    acc += hab * t2.get(a, b, c);
                }
            }
        }
        trace[c] = acc;
    }
    let nf = n as f64;
    let mut out = FrameTensor::zeros(m, epsilon, 3, SymmetryClass::CottonYork)?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // W_e[a][b][c] = (h_ab δ_ce − h_ac δ_be)/2
                let mut corr = zero();
                let hab = h.get(a, b);
                if hab.norm() > 0.0 {
                    corr += trace[c] * hab / 2.0;
                }
                let hac = h.get(a, c);
                if hac.norm() > 0.0 {
                    corr -= trace[b] * hac / 2.0;
                }
                out.set(&[a, b, c], t2.get(a, b, c) - corr * 2.0 / (nf - 1.0));
            }
        }
    }
    Ok(out)
}
