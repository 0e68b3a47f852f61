//! Exact Riemann solver for the ideal-gas Euler equations.
//!
//! Only used to build reference solutions; the time integrators never call
//! it. Star pressure from a bracketed Newton iteration on the usual
//! pressure function, sampling of the self-similar solution with vacuum
//! support.

use crate::error::{HydroError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarState {
    pub p: f64,
    pub u: f64,
    /// Data produces a vacuum between the two rarefactions; `p` and `u`
    /// are then zero and meaningless.
    pub vacuum: bool,
    pub iterations: usize,
    /// `f(p*)`, in velocity units.
    pub residual: f64,
}

const MAX_ITER: usize = 100;

struct Side {
    rho: f64,
    u: f64,
    p: f64,
    c: f64,
}

impl Side {
    fn new(s: &Primitive, gamma: f64) -> Self {
        Self {
            rho: s.rho,
            u: s.u,
            p: s.p,
            c: (gamma * s.p / s.rho).sqrt(),
        }
    }

    /// Velocity change across the wave connecting this side to pressure `p`,
    /// and its derivative.
    fn f(&self, p: f64, gamma: f64) -> (f64, f64) {
        if p > self.p {
            let a = 2.0 / ((gamma + 1.0) * self.rho);
            let b = (gamma - 1.0) / (gamma + 1.0) * self.p;
            let q = (a / (p + b)).sqrt();
            ((p - self.p) * q, q * (1.0 - 0.5 * (p - self.p) / (p + b)))
        } else {
            let z = (gamma - 1.0) / (2.0 * gamma);
            let r = (p / self.p).powf(z);
            (
                2.0 * self.c / (gamma - 1.0) * (r - 1.0),
                r * self.c / (gamma * p.max(f64::MIN_POSITIVE)),
            )
        }
    }
}

fn validate(s: &Primitive) -> Result<()> {
    if !(s.rho > 0.0 && s.p > 0.0 && s.u.is_finite() && s.rho.is_finite() && s.p.is_finite()) {
        return Err(HydroError::InvalidInput(format!("Riemann state must have rho, p > 0: {s:?}")));
    }
    Ok(())
}

/// Star pressure and velocity of the Riemann problem `(left, right)`.
pub fn exact_riemann_star(left: &Primitive, right: &Primitive, gamma: f64) -> Result<StarState> {
    validate(left)?;
    validate(right)?;
    let l = Side::new(left, gamma);
    let r = Side::new(right, gamma);
    let du = r.u - l.u;
    if 2.0 * (l.c + r.c) / (gamma - 1.0) <= du {
        return Ok(StarState { p: 0.0, u: 0.0, vacuum: true, iterations: 0, residual: 0.0 });
    }
    let func = |p: f64| {
        let (fl, dl) = l.f(p, gamma);
        let (fr, dr) = r.f(p, gamma);
        (fl + fr + du, dl + dr)
    };

    // Two-rarefaction guess, exact when both waves are rarefactions.
    let z = (gamma - 1.0) / (2.0 * gamma);
    let guess = ((l.c + r.c - 0.5 * (gamma - 1.0) * du) / (l.c / l.p.powf(z) + r.c / r.p.powf(z))).powf(1.0 / z);

    // f is increasing in p: keep a bracket and bisect when Newton leaves it.
    let mut lo = 0.0;
    let mut hi = l.p.max(r.p).max(guess);
    while func(hi).0 < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(HydroError::RiemannNonConvergence { iterations: 0, residual: f64::NAN });
        }
    }
    let mut p = guess.clamp(f64::MIN_POSITIVE, hi);
    let scale = l.c + r.c + du.abs();
    for it in 1..=MAX_ITER {
        let (f, df) = func(p);
        if f.abs() <= 1e-14 * scale {
            return Ok(star(p, f, &l, &r, gamma, it));
        }
        if f < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let mut next = p - f / df;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - p).abs() <= 1e-16 * p {
            let (f, _) = func(next);
            return Ok(star(next, f, &l, &r, gamma, it));
        }
        p = next;
    }
    let (f, _) = func(p);
    Err(HydroError::RiemannNonConvergence { iterations: MAX_ITER, residual: f })
}

fn star(p: f64, residual: f64, l: &Side, r: &Side, gamma: f64, iterations: usize) -> StarState {
    let (fl, _) = l.f(p, gamma);
    let (fr, _) = r.f(p, gamma);
    StarState {
        p,
        u: 0.5 * (l.u + r.u) + 0.5 * (fr - fl),
        vacuum: false,
        iterations,
        residual,
    }
}

/// Self-similar solution of a Riemann problem with its initial
/// discontinuity at `x0` and `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRiemann {
    pub left: Primitive,
    pub right: Primitive,
    pub gamma: f64,
    pub x0: f64,
    pub star: StarState,
}

/// Wave speeds bounding the regions of the solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpeeds {
    /// Left wave: `(head, tail)`; equal for a shock.
    pub left: (f64, f64),
    pub contact: f64,
    /// Right wave: `(tail, head)`; equal for a shock.
    pub right: (f64, f64),
}

impl ExactRiemann {
    pub fn new(left: Primitive, right: Primitive, gamma: f64, x0: f64) -> Result<Self> {
        let star = exact_riemann_star(&left, &right, gamma)?;
        Ok(Self { left, right, gamma, x0, star })
    }

    pub fn wave_speeds(&self) -> WaveSpeeds {
        let g = self.gamma;
        let l = Side::new(&self.left, g);
        let r = Side::new(&self.right, g);
        let z = (g - 1.0) / (2.0 * g);
        if self.star.vacuum {
            let tl = l.u + 2.0 * l.c / (g - 1.0);
            let tr = r.u - 2.0 * r.c / (g - 1.0);
            return WaveSpeeds {
                left: (l.u - l.c, tl),
                contact: 0.5 * (tl + tr),
                right: (tr, r.u + r.c),
            };
        }
        let (ps, us) = (self.star.p, self.star.u);
        let left = if ps > l.p {
            let s = l.u - l.c * ((g + 1.0) / (2.0 * g) * ps / l.p + (g - 1.0) / (2.0 * g)).sqrt();
            (s, s)
        } else {
            (l.u - l.c, us - l.c * (ps / l.p).powf(z))
        };
        let right = if ps > r.p {
            let s = r.u + r.c * ((g + 1.0) / (2.0 * g) * ps / r.p + (g - 1.0) / (2.0 * g)).sqrt();
            (s, s)
        } else {
            (us + r.c * (ps / r.p).powf(z), r.u + r.c)
        };
        WaveSpeeds { left, contact: us, right }
    }

    /// Density on each side of the contact.
    pub fn star_densities(&self) -> (f64, f64) {
        let g = self.gamma;
        let g6 = (g - 1.0) / (g + 1.0);
        let side = |s: &Primitive| {
            let ratio = self.star.p / s.p;
            if self.star.p > s.p {
                s.rho * (ratio + g6) / (g6 * ratio + 1.0)
            } else {
                s.rho * ratio.powf(1.0 / g)
            }
        };
        (side(&self.left), side(&self.right))
    }

    /// State at position `x` and time `t`.
    pub fn sample(&self, x: f64, t: f64) -> Primitive {
        if t <= 0.0 {
            return if x < self.x0 { self.left } else { self.right };
        }
        self.sample_similarity((x - self.x0) / t)
    }

    /// State along the ray `(x - x0) / t = xi`.
    pub fn sample_similarity(&self, xi: f64) -> Primitive {
        let g = self.gamma;
        let l = Side::new(&self.left, g);
        let r = Side::new(&self.right, g);
        let waves = self.wave_speeds();
        let left_fan = |xi: f64| {
            let c = 2.0 / (g + 1.0) * (l.c + 0.5 * (g - 1.0) * (l.u - xi));
            let u = 2.0 / (g + 1.0) * (l.c + 0.5 * (g - 1.0) * l.u + xi);
            let ratio = c / l.c;
            Primitive {
                rho: l.rho * ratio.powf(2.0 / (g - 1.0)),
                u,
                p: l.p * ratio.powf(2.0 * g / (g - 1.0)),
            }
        };
        let right_fan = |xi: f64| {
            let c = 2.0 / (g + 1.0) * (r.c - 0.5 * (g - 1.0) * (r.u - xi));
            let u = 2.0 / (g + 1.0) * (-r.c + 0.5 * (g - 1.0) * r.u + xi);
            let ratio = c / r.c;
            Primitive {
                rho: r.rho * ratio.powf(2.0 / (g - 1.0)),
                u,
                p: r.p * ratio.powf(2.0 * g / (g - 1.0)),
            }
        };

        if self.star.vacuum {
            return if xi <= waves.left.0 {
                self.left
            } else if xi < waves.left.1 {
                left_fan(xi)
            } else if xi <= waves.right.0 {
                Primitive { rho: 0.0, u: xi, p: 0.0 }
            } else if xi < waves.right.1 {
                right_fan(xi)
            } else {
                self.right
            };
        }

        let (rho_l, rho_r) = self.star_densities();
        let (ps, us) = (self.star.p, self.star.u);
        if xi <= us {
            if xi <= waves.left.0 {
                self.left
            } else if xi < waves.left.1 {
                left_fan(xi)
            } else {
                Primitive { rho: rho_l, u: us, p: ps }
            }
        } else if xi >= waves.right.1 {
            self.right
        } else if xi > waves.right.0 {
            right_fan(xi)
        } else {
            Primitive { rho: rho_r, u: us, p: ps }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn residual(l: &Primitive, r: &Primitive, g: f64, p: f64) -> f64 {
        let (fl, _) = Side::new(l, g).f(p, g);
        let (fr, _) = Side::new(r, g).f(p, g);
        fl + fr + r.u - l.u
    }

    const SOD_L: Primitive = Primitive { rho: 1.0, u: 0.0, p: 1.0 };
    const SOD_R: Primitive = Primitive { rho: 0.125, u: 0.0, p: 0.1 };

    #[test]
    fn sod_star_state() {
        let s = exact_riemann_star(&SOD_L, &SOD_R, 1.4).unwrap();
        assert!((s.p - 0.30313).abs() < 1e-5, "{}", s.p);
        assert!((s.u - 0.92745).abs() < 1e-5, "{}", s.u);
        assert!(residual(&SOD_L, &SOD_R, 1.4, s.p).abs() < 1e-12);
        assert!(!s.vacuum);
    }

    #[test]
    fn equal_states() {
        let st = Primitive { rho: 0.7, u: 0.3, p: 2.0 };
        let s = exact_riemann_star(&st, &st, 1.4).unwrap();
        assert!((s.p - 2.0).abs() < 1e-12);
        assert!((s.u - 0.3).abs() < 1e-12);
    }

    #[test]
    fn vacuum_detection() {
        // u = -/+2 with p = 0.4 gets close to vacuum but does not reach it.
        let l = Primitive { rho: 1.0, u: -2.0, p: 0.4 };
        let r = Primitive { rho: 1.0, u: 2.0, p: 0.4 };
        let s = exact_riemann_star(&l, &r, 1.4).unwrap();
        assert!(!s.vacuum);
        assert!(s.u.abs() < 1e-12);
        assert!(s.p > 0.0 && s.p < 2e-3, "{}", s.p);
        // Faster separation opens a vacuum: 2 (cL + cR)/(gamma - 1) < du.
        let l = Primitive { u: -5.0, ..l };
        let r = Primitive { u: 5.0, ..r };
        let s = exact_riemann_star(&l, &r, 1.4).unwrap();
        assert!(s.vacuum);
        let sol = ExactRiemann::new(l, r, 1.4, 0.5).unwrap();
        assert_eq!(sol.sample(0.5, 0.1).rho, 0.0);
        assert_eq!(sol.sample(0.0, 0.01), l);
    }

    #[test]
    fn randomized_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 1000 {
            let g = if rng.random::<bool>() { 1.4 } else { 5.0 / 3.0 };
            let l = Primitive {
                rho: 10f64.powf(rng.random_range(-2.0..2.0)),
                u: rng.random_range(-2.0..2.0),
                p: 10f64.powf(rng.random_range(-3.0..3.0)),
            };
            let r = Primitive {
                rho: 10f64.powf(rng.random_range(-2.0..2.0)),
                u: rng.random_range(-2.0..2.0),
                p: 10f64.powf(rng.random_range(-3.0..3.0)),
            };
            let s = exact_riemann_star(&l, &r, g).unwrap();
            if s.vacuum {
                continue;
            }
            // Relative to the velocity scale of the data.
            let scale = (g * l.p / l.rho).sqrt() + (g * r.p / r.rho).sqrt() + l.u.abs() + r.u.abs();
            assert!(residual(&l, &r, g, s.p).abs() < 1e-12 * scale, "{l:?} {r:?} {s:?}");
            checked += 1;
        }
    }

    #[test]
    fn sample_examples() {
        let sol = ExactRiemann::new(SOD_L, SOD_R, 1.4, 0.5).unwrap();
        assert_eq!(sol.sample(0.99, 0.2), SOD_R);
        assert_eq!(sol.sample(0.3, 0.0), SOD_L);
        assert_eq!(sol.sample(0.5 - 1e-9, 1e-12), SOD_L);
        let w = sol.wave_speeds();
        // Shock ahead of contact ahead of the rarefaction.
        assert!(w.right.0 > w.contact && w.contact > w.left.1 && w.left.1 > w.left.0);
        assert!((w.right.0 - 1.75216).abs() < 1e-4);
    }

    #[test]
    fn self_similar() {
        let sol = ExactRiemann::new(SOD_L, SOD_R, 1.4, 0.5).unwrap();
        for k in 0..50 {
            let xi = -1.5 + 0.07 * k as f64;
            let a = sol.sample(0.5 + xi * 0.1, 0.1);
            let b = sol.sample(0.5 + xi * 0.2, 0.2);
            assert!((a.rho - b.rho).abs() < 1e-13 && (a.u - b.u).abs() < 1e-13 && (a.p - b.p).abs() < 1e-13);
        }
    }

    #[test]
    fn fan_is_continuous() {
        let sol = ExactRiemann::new(SOD_L, SOD_R, 1.4, 0.0).unwrap();
        let w = sol.wave_speeds();
        let head = sol.sample_similarity(w.left.0 + 1e-12);
        assert!((head.rho - 1.0).abs() < 1e-10);
        let tail = sol.sample_similarity(w.left.1 - 1e-12);
        let (rho_star_l, _) = sol.star_densities();
        assert!((tail.rho - rho_star_l).abs() < 1e-10);
        assert!((tail.p - sol.star.p).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_states() {
        let bad = Primitive { rho: -1.0, u: 0.0, p: 1.0 };
        assert!(exact_riemann_star(&bad, &SOD_R, 1.4).is_err());
    }
}
