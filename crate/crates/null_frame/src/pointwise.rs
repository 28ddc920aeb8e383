//! Canonical null basis at a single point, from a Gram matrix alone.
//!
//! Hyperbolic-pair reduction for a complex-bilinear symmetric form: split off
//! a null vector and a null partner normalized to unit pairing, project the
//! rest onto their orthogonal complement, repeat m times, and in odd
//! dimension finish with a unit vector. Every pivot choice takes the first
//! index attaining the extremum, so the output depends only on the input.

use chart_engine::{Arr2, C64, ChartError};

use crate::NullFrameError;

fn pairing(g0: &Arr2, x: &[C64], y: &[C64]) -> C64 {
    let n = g0.n();
    let mut s = C64::new(0.0, 0.0);
    for r in 0..n {
        if x[r] == C64::new(0.0, 0.0) {
            continue;
        }
        for c in 0..n {
            s += g0.get(r, c) * x[r] * y[c];
        }
    }
    s
}

fn inf_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// Divide by the first component of maximal modulus, making it exactly one.
fn normalize(v: &mut [C64]) {
    let mx = inf_norm(v);
    let lead = v.iter().position(|z| z.norm() == mx).unwrap();
    let pivot = v[lead];
    for z in v.iter_mut() {
        *z /= pivot;
    }
}

// First index attaining the maximum of `score` over 0..d, skipping `skip`.
fn argmax_first(d: usize, skip: Option<usize>, score: impl Fn(usize) -> f64) -> usize {
    let mut best = f64::NEG_INFINITY;
    let mut at = 0;
    for i in 0..d {
        if Some(i) == skip {
            continue;
        }
        let s = score(i);
        if s > best {
            best = s;
            at = i;
        }
    }
    at
}

fn degenerate(seen: f64, floor: f64) -> NullFrameError {
    NullFrameError::Chart(ChartError::DegenerateMetric {
        det: seen,
        floor,
    })
}

/// Builds vectors satisfying the canonical pairings at one point: returned
/// order is ξ_1..ξ_m, ξ̃_1..ξ̃_m, then ξ_0 when ε = 1. A metric already in
/// canonical form comes back as the identity frame.
pub fn pointwise_null_frame(
    g0: &Arr2,
    epsilon: usize,
) -> Result<Vec<Vec<C64>>, NullFrameError> {
    let n = g0.n();
    if epsilon > 1 || n < 4 || (n - epsilon) % 2 != 0 {
        return Err(NullFrameError::Chart(ChartError::Malformed(format!(
            "dimension {n} incompatible with epsilon {epsilon}"
        ))));
    }
    let m = (n - epsilon) / 2;
    let mut sym = 0.0f64;
    let mut scale0 = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            sym = sym.max((g0.get(a, b) - g0.get(b, a)).norm());
            scale0 = scale0.max(g0.get(a, b).norm());
        }
    }
    if scale0 == 0.0 {
        return Err(degenerate(0.0, 0.0));
    }
    if sym > 1e-12 * scale0 {
        return Err(NullFrameError::Chart(ChartError::Malformed(format!(
            "asymmetric gram matrix, residual {sym:.3e}"
        ))));
    }

    // Working set: spans the orthogonal complement of the pairs built so far.
    let mut work: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[i] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    let mut unprimed: Vec<Vec<C64>> = Vec::with_capacity(m);
    let mut tilde: Vec<Vec<C64>> = Vec::with_capacity(m);

    for _ in 0..m {
        let d = work.len();
        let mut gram = vec![vec![C64::new(0.0, 0.0); d]; d];
        let mut gmax = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                gram[i][j] = pairing(g0, &work[i], &work[j]);
                gmax = gmax.max(gram[i][j].norm());
            }
        }
        if gmax <= 1e-12 * scale0 {
            return Err(degenerate(gmax, 1e-12 * scale0));
        }
        let tiny = 1e-11 * gmax;

        // Null direction: take a null diagonal if one exists, otherwise mix
        // the least-norm diagonal with the strongest partner and solve
        // q(w_i + t w_j) = 0 with the principal square root.
        let istar = argmax_first(d, None, |i| -gram[i][i].norm());
        let mut x = work[istar].clone();
        if gram[istar][istar].norm() > tiny {
            let jstar = argmax_first(d, Some(istar), |j| {
                gram[istar][j].norm().max(gram[j][j].norm())
            });
            let qa = gram[istar][istar];
            let qb = gram[istar][jstar];
            let qc = gram[jstar][jstar];
            // All diagonals exceed `tiny` on this branch, so qc is safe to
            // divide by.
            let t = (-qb + (qb * qb - qa * qc).sqrt()) / qc;
            for (xr, wr) in x.iter_mut().zip(work[jstar].iter()) {
                *xr += t * wr;
            }
        }
        normalize(&mut x);

        // Partner with the largest pairing against x; remove its own null
        // defect, then scale the pairing to one.
        let pair_with_x: Vec<C64> =
            work.iter().map(|w| pairing(g0, &x, w)).collect();
        let jbest = argmax_first(d, None, |j| pair_with_x[j].norm());
        if pair_with_x[jbest].norm() <= tiny {
            return Err(degenerate(pair_with_x[jbest].norm(), tiny));
        }
        let mut y = work[jbest].clone();
        let corr = pairing(g0, &y, &y) / (2.0 * pair_with_x[jbest]);
        for (yr, xr) in y.iter_mut().zip(x.iter()) {
            *yr -= corr * xr;
        }
        let gxy = pairing(g0, &x, &y);
        for yr in y.iter_mut() {
            *yr /= gxy;
        }

        // Project every working vector onto the complement of the pair, then
        // keep d-2 independent ones by partial-pivot elimination.
        let mut proj: Vec<Vec<C64>> = work
            .iter()
            .map(|w| {
                let a = pairing(g0, w, &y);
                let b = pairing(g0, w, &x);
                let mut p = w.clone();
                for r in 0..n {
                    p[r] -= a * x[r] + b * y[r];
                }
                p
            })
            .collect();
        let mut next: Vec<Vec<C64>> = Vec::with_capacity(d - 2);
        for _ in 0..d - 2 {
            let r = argmax_first(proj.len(), None, |i| inf_norm(&proj[i]));
            let row = proj.remove(r);
            let nrm = inf_norm(&row);
            if nrm <= 1e-11 {
                return Err(degenerate(nrm, 1e-11));
            }
            let c = row.iter().position(|z| z.norm() == nrm).unwrap();
            for other in proj.iter_mut() {
                let f = other[c] / row[c];
                for (o, rr) in other.iter_mut().zip(row.iter()) {
                    *o -= f * rr;
                }
            }
            next.push(row);
        }
        work = next;
        unprimed.push(x);
        tilde.push(y);
    }

    let mut frame = unprimed;
    frame.append(&mut tilde);
    if epsilon == 1 {
        let w = work.pop().unwrap();
        let q = pairing(g0, &w, &w);
        if q.norm() <= 1e-12 * scale0 {
            return Err(degenerate(q.norm(), 1e-12 * scale0));
        }
        let root = q.sqrt();
        frame.push(w.iter().map(|z| z / root).collect());
    }
    Ok(frame)
}
