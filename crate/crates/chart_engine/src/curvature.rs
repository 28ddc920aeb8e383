//! Curvature of a chart metric at a point, in coordinate indices.
//!
//! Everything is assembled from the exact jet: Christoffels and their first
//! and second derivatives, Riemann (up and all-covariant) with its first
//! derivative, Ricci, scalar, the trace adjustment Rho making Weyl totally
//! trace-free, Weyl with its first derivative, and Cotton-York
//! A_{abc} = ∇_b Ρ_{ca} − ∇_c Ρ_{ba}.

use crate::jet::CoordJet;
use crate::tensor::{Arr2, Arr3, Arr4, Arr5};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub struct CurvatureAtPoint {
    /// Γ^a_{bc}, stored (a,b,c), symmetric in (b,c).
    pub gamma: Arr3,
    /// R_{abcd}, all covariant.
    pub riemann: Arr4,
    /// ∂_e R_{abcd}, stored (e,a,b,c,d).
    pub d_riemann: Arr5,
    pub ricci: Arr2,
    pub scalar: C64,
    pub rho: Arr2,
    /// ∂_e Ρ_{ab}, stored (e,a,b).
    pub d_rho: Arr3,
    pub weyl: Arr4,
    /// ∂_e C_{abcd}, stored (e,a,b,c,d).
    pub d_weyl: Arr5,
    pub cotton_york: Arr3,
}

// S_d(b,c) = ∂_b g_{dc} + ∂_c g_{bd} − ∂_d g_{bc}  (2 g_{de} Γ^e_{bc})
#[inline]
fn s_term(jet: &CoordJet, d: usize, b: usize, c: usize) -> C64 {
    jet.dg.get(b, d, c) + jet.dg.get(c, b, d) - jet.dg.get(d, b, c)
}

#[inline]
fn ds_term(jet: &CoordJet, e: usize, d: usize, b: usize, c: usize) -> C64 {
    jet.ddg.get(e, b, d, c) + jet.ddg.get(e, c, b, d) - jet.ddg.get(e, d, b, c)
}

#[inline]
fn dds_term(jet: &CoordJet, f: usize, e: usize, d: usize, b: usize, c: usize) -> C64 {
    jet.dddg.get(f, e, b, d, c) + jet.dddg.get(f, e, c, b, d) - jet.dddg.get(f, e, d, b, c)
}

fn christoffel_jets(jet: &CoordJet) -> (Arr3, Arr4, Arr5) {
    let n = jet.n();
    let half = C64::new(0.5, 0.0);
    let mut gamma = Arr3::zeros(n);
    let mut dgamma = Arr4::zeros(n);
    let mut ddgamma = Arr5::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                let mut v = ZERO;
                for d in 0..n {
                    v += jet.ginv.get(a, d) * s_term(jet, d, b, c);
                }
                v *= half;
                gamma.set(a, b, c, v);
                gamma.set(a, c, b, v);
                for e in 0..n {
                    let mut dv = ZERO;
                    for d in 0..n {
                        dv += jet.dginv.get(e, a, d) * s_term(jet, d, b, c)
                            + jet.ginv.get(a, d) * ds_term(jet, e, d, b, c);
                    }
                    dv *= half;
                    dgamma.set(e, a, b, c, dv);
                    dgamma.set(e, a, c, b, dv);
                    for f in e..n {
                        let mut ddv = ZERO;
                        for d in 0..n {
                            ddv += jet.ddginv.get(f, e, a, d) * s_term(jet, d, b, c)
                                + jet.dginv.get(e, a, d) * ds_term(jet, f, d, b, c)
                                + jet.dginv.get(f, a, d) * ds_term(jet, e, d, b, c)
                                + jet.ginv.get(a, d) * dds_term(jet, f, e, d, b, c);
                        }
                        ddv *= half;
                        for (x, y) in [(e, f), (f, e)] {
                            ddgamma.set(x, y, a, b, c, ddv);
                            ddgamma.set(x, y, a, c, b, ddv);
                        }
                    }
                }
            }
        }
    }
    (gamma, dgamma, ddgamma)
}

pub fn curvature_at(jet: &CoordJet) -> CurvatureAtPoint {
    let n = jet.n();
    let (gamma, dgamma, ddgamma) = christoffel_jets(jet);

    // R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}
    let mut rup = Arr4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut v = dgamma.get(c, a, d, b) - dgamma.get(d, a, c, b);
                    for e in 0..n {
                        v += gamma.get(a, c, e) * gamma.get(e, d, b)
                            - gamma.get(a, d, e) * gamma.get(e, c, b);
                    }
                    rup.set(a, b, c, d, v);
                }
            }
        }
    }

    // ∂_w R^a_{bcd} by the product rule on the closed form above.
    let mut drup = Arr5::zeros(n);
    for w in 0..n {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut v = ddgamma.get(w, c, a, d, b) - ddgamma.get(w, d, a, c, b);
                        for e in 0..n {
                            v += dgamma.get(w, a, c, e) * gamma.get(e, d, b)
                                + gamma.get(a, c, e) * dgamma.get(w, e, d, b)
                                - dgamma.get(w, a, d, e) * gamma.get(e, c, b)
                                - gamma.get(a, d, e) * dgamma.get(w, e, c, b);
                        }
                        drup.set(w, a, b, c, d, v);
                    }
                }
            }
        }
    }

    let mut riemann = Arr4::zeros(n);
    let mut d_riemann = Arr5::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut v = ZERO;
                    for e in 0..n {
                        v += jet.g0.get(a, e) * rup.get(e, b, c, d);
                    }
                    riemann.set(a, b, c, d, v);
                    for w in 0..n {
                        let mut dv = ZERO;
                        for e in 0..n {
                            dv += jet.dg.get(w, a, e) * rup.get(e, b, c, d)
                                + jet.g0.get(a, e) * drup.get(w, e, b, c, d);
                        }
                        d_riemann.set(w, a, b, c, d, dv);
                    }
                }
            }
        }
    }

    // Ric_{bd} = g^{ac} R_{abcd} = R^c_{bcd}
    let mut ricci = Arr2::zeros(n);
    let mut d_ricci = Arr3::zeros(n);
    for b in 0..n {
        for d in 0..n {
            let mut v = ZERO;
            for c in 0..n {
                v += rup.get(c, b, c, d);
            }
            ricci.set(b, d, v);
            for w in 0..n {
                let mut dv = ZERO;
                for c in 0..n {
                    dv += drup.get(w, c, b, c, d);
                }
                d_ricci.set(w, b, d, dv);
            }
        }
    }

    let mut scalar = ZERO;
    let mut d_scalar = vec![ZERO; n];
    for b in 0..n {
        for d in 0..n {
            scalar += jet.ginv.get(b, d) * ricci.get(b, d);
            for w in 0..n {
                d_scalar[w] += jet.dginv.get(w, b, d) * ricci.get(b, d)
                    + jet.ginv.get(b, d) * d_ricci.get(w, b, d);
            }
        }
    }

    // Ρ is pinned by total trace-freeness of C (contract the split once):
    //   tr Ρ = Scal/(2−2n),  Ρ_{bd} = (Ric_{bd} + trΡ·g_{bd})/(2−n)
    let nf = n as f64;
    let inv_tr = C64::new(1.0 / (2.0 - 2.0 * nf), 0.0);
    let inv_p = C64::new(1.0 / (2.0 - nf), 0.0);
    let trp = scalar * inv_tr;
    let mut rho = Arr2::zeros(n);
    let mut d_rho = Arr3::zeros(n);
    for b in 0..n {
        for d in 0..n {
            rho.set(b, d, (ricci.get(b, d) + trp * jet.g0.get(b, d)) * inv_p);
            for w in 0..n {
                let dtrp = d_scalar[w] * inv_tr;
                d_rho.set(
                    w,
                    b,
                    d,
                    (d_ricci.get(w, b, d)
                        + dtrp * jet.g0.get(b, d)
                        + trp * jet.dg.get(w, b, d))
                        * inv_p,
                );
            }
        }
    }

    // C_{abcd} = R_{abcd} + g_{ac}Ρ_{bd} − g_{ad}Ρ_{bc} − g_{bc}Ρ_{ad} + g_{bd}Ρ_{ac}
    let mut weyl = Arr4::zeros(n);
    let mut d_weyl = Arr5::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = riemann.get(a, b, c, d)
                        + jet.g0.get(a, c) * rho.get(b, d)
                        - jet.g0.get(a, d) * rho.get(b, c)
                        - jet.g0.get(b, c) * rho.get(a, d)
                        + jet.g0.get(b, d) * rho.get(a, c);
                    weyl.set(a, b, c, d, v);
                    for w in 0..n {
                        let dv = d_riemann.get(w, a, b, c, d)
                            + jet.dg.get(w, a, c) * rho.get(b, d)
                            + jet.g0.get(a, c) * d_rho.get(w, b, d)
                            - jet.dg.get(w, a, d) * rho.get(b, c)
                            - jet.g0.get(a, d) * d_rho.get(w, b, c)
                            - jet.dg.get(w, b, c) * rho.get(a, d)
                            - jet.g0.get(b, c) * d_rho.get(w, a, d)
                            + jet.dg.get(w, b, d) * rho.get(a, c)
                            + jet.g0.get(b, d) * d_rho.get(w, a, c);
                        d_weyl.set(w, a, b, c, d, dv);
                    }
                }
            }
        }
    }

    // Built-in self-check: C must come out totally trace-free. When C itself
    // is (near) zero the residual is pure cancellation noise from R, so the
    // floor follows the Riemann scale.
    #[cfg(debug_assertions)]
    {
        let scale = f64::max(
            weyl.max_norm(),
            1e-4 * f64::max(riemann.max_norm(), 1.0),
        );
        let mut worst = 0.0f64;
        for b in 0..n {
            for d in 0..n {
                let mut tr = ZERO;
                for a in 0..n {
                    for c in 0..n {
                        tr += jet.ginv.get(a, c) * weyl.get(a, b, c, d);
                    }
                }
                worst = worst.max(tr.norm());
            }
        }
        debug_assert!(worst < 1e-10 * scale, "Weyl trace residual {worst:.3e}");
    }

    // A_{abc} = ∂_b Ρ_{ca} − ∂_c Ρ_{ba} − Γ^e_{ba}Ρ_{ce} + Γ^e_{ca}Ρ_{be}
    let mut cotton_york = Arr3::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut v = d_rho.get(b, c, a) - d_rho.get(c, b, a);
                for e in 0..n {
                    v += -gamma.get(e, b, a) * rho.get(c, e) + gamma.get(e, c, a) * rho.get(b, e);
                }
                cotton_york.set(a, b, c, v);
            }
        }
    }

    CurvatureAtPoint {
        gamma,
        riemann,
        d_riemann,
        ricci,
        scalar,
        rho,
        d_rho,
        weyl,
        d_weyl,
        cotton_york,
    }
}

/// Just Γ^a_{bc}, without the derivative stacks curvature_at builds.
pub fn christoffel_at(jet: &CoordJet) -> Arr3 {
    let n = jet.n();
    let half = C64::new(0.5, 0.0);
    let mut gamma = Arr3::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                let mut v = ZERO;
                for d in 0..n {
                    v += jet.ginv.get(a, d) * s_term(jet, d, b, c);
                }
                v *= half;
                gamma.set(a, b, c, v);
                gamma.set(a, c, b, v);
            }
        }
    }
    gamma
}

pub fn riemann_at(jet: &CoordJet) -> Arr4 {
    curvature_at(jet).riemann
}

pub fn rho_weyl_at(jet: &CoordJet, _riemann: &Arr4) -> (Arr2, Arr4) {
    let cur = curvature_at(jet);
    (cur.rho, cur.weyl)
}

pub fn cotton_york_at(jet: &CoordJet) -> Arr3 {
    curvature_at(jet).cotton_york
}
