//! Locating the ground energy as the lowest zero of `G_-`.

use super::mp::{self, Mp};
use super::series::{BraakSeries, MpSeries, POLE_GUARD};
use super::{Parity, RabiParams};
use crate::error::{Error, Result};

/// Below this coupling the ground energy is `-Delta` to machine precision.
pub const G_UNCOUPLED: f64 = 1e-6;
pub const SCAN_STEP: f64 = 1e-3;
/// Width to which the double-precision bisection shrinks a bracket.
pub const BISECTION_TOL: f64 = 1e-12;
/// Roots closer than this to a pole are treated as exceptional.
pub const EXCEPTIONAL_BAND: f64 = 10.0 * POLE_GUARD;
const AMBIGUOUS_REL: f64 = 1e-12;
const MAX_POLISH_ITERATIONS: usize = 400;

/// An interval in `E` over which `G_-` changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone)]
pub(crate) enum RootSearch {
    Uncoupled,
    Regular(Bracket),
    /// The lowest zero sits on a pole of the coefficients.
    Exceptional,
}

/// Sign of `G_-(E)`, resolved in multiprecision when the double-precision
/// value is too small relative to the series scale to be trusted.
fn sign_at(p: RabiParams, e: f64, prec: usize) -> Result<f64> {
    match BraakSeries::new(p, e) {
        Ok(s) => {
            let v = s.value(Parity::Minus);
            if v.abs() > AMBIGUOUS_REL * s.scale(Parity::Minus) {
                return Ok(v.signum());
            }
        }
        Err(Error::SeriesDivergence(_)) => {}
        Err(e) => return Err(e),
    }
    let v = MpSeries::new(p, &mp::mp(e, prec), prec)?.value(Parity::Minus);
    Ok(if mp::is_negative(&v) {
        -1.0
    } else if v == Mp::ZERO {
        0.0
    } else {
        1.0
    })
}

/// Sub-intervals of the scan window with the poles `E = n - g^2` cut out.
fn pole_free_intervals(p: RabiParams) -> (f64, f64, Vec<(f64, f64)>) {
    let g2 = p.coupling().powi(2);
    let lo = -g2 - p.half_gap() - 1.0;
    let hi = -p.half_gap() + SCAN_STEP;
    let guard = 2.0 * POLE_GUARD * (1.0 + g2);
    let mut out = Vec::new();
    let mut a = lo;
    let mut n = 0usize;
    loop {
        let pole = n as f64 - g2;
        if pole >= hi {
            break;
        }
        if pole > a {
            out.push((a, pole - guard));
            a = pole + guard;
        }
        n += 1;
    }
    out.push((a, hi));
    (lo, hi, out)
}

pub(crate) fn find_bracket(p: RabiParams, prec: usize) -> Result<RootSearch> {
    if p.coupling() <= G_UNCOUPLED {
        return Ok(RootSearch::Uncoupled);
    }
    let (lo, hi, intervals) = pole_free_intervals(p);
    for (a, b) in intervals {
        let steps = ((b - a) / SCAN_STEP).ceil().max(1.0) as usize;
        let mut e_prev = a;
        let mut s_prev = sign_at(p, a, prec)?;
        if s_prev == 0.0 {
            return Ok(RootSearch::Regular(Bracket { lo: a, hi: a }));
        }
        for k in 1..=steps {
            let e = if k == steps { b } else { a + k as f64 * SCAN_STEP };
            let s = sign_at(p, e, prec)?;
            if s == 0.0 {
                return Ok(RootSearch::Regular(Bracket { lo: e, hi: e }));
            }
            if s != s_prev {
                return Ok(classify(p, bisect(p, e_prev, e, s_prev, prec)?));
            }
            e_prev = e;
            s_prev = s;
        }
    }
    Err(Error::RootNotBracketed { lo, hi })
}

fn bisect(p: RabiParams, mut a: f64, mut b: f64, sign_a: f64, prec: usize) -> Result<Bracket> {
    while b - a > BISECTION_TOL * a.abs().max(1.0) {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let s = match sign_at(p, m, prec) {
            Ok(s) => s,
            Err(Error::Pole { .. }) => break,
            Err(e) => return Err(e),
        };
        if s == 0.0 {
            return Ok(Bracket { lo: m, hi: m });
        }
        if s == sign_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(Bracket { lo: a, hi: b })
}

fn classify(p: RabiParams, br: Bracket) -> RootSearch {
    let x = 0.5 * (br.lo + br.hi) + p.coupling().powi(2);
    if x > -0.5 && (x - x.round()).abs() < EXCEPTIONAL_BAND * (1.0 + p.coupling().powi(2)) {
        RootSearch::Exceptional
    } else {
        RootSearch::Regular(br)
    }
}

fn g_minus_mp(p: RabiParams, e: &Mp, prec: usize) -> Result<Mp> {
    Ok(MpSeries::new(p, e, prec)?.value(Parity::Minus))
}

/// Refine a bracket to `prec` bits with the Illinois variant of regula falsi.
pub(crate) fn polish(p: RabiParams, br: Bracket, prec: usize) -> Result<Mp> {
    let mut a = mp::mp(br.lo, prec);
    let mut b = mp::mp(br.hi, prec);
    if br.lo == br.hi {
        return Ok(a);
    }
    let mut fa = g_minus_mp(p, &a, prec)?;
    let mut fb = g_minus_mp(p, &b, prec)?;
    if fa == Mp::ZERO {
        return Ok(a);
    }
    if fb == Mp::ZERO {
        return Ok(b);
    }
    if mp::is_negative(&fa) == mp::is_negative(&fb) {
        return Err(Error::RootNotBracketed { lo: br.lo, hi: br.hi });
    }
    let tol = mp::mp(2f64.powi(-(prec as i32 - 8).min(1000)) * br.lo.abs().max(1.0), prec);
    for _ in 0..MAX_POLISH_ITERATIONS {
        let c = &b - &fb * (&b - &a) / (&fb - &fa);
        let fc = g_minus_mp(p, &c, prec)?;
        if fc == Mp::ZERO {
            return Ok(c);
        }
        if mp::is_negative(&fc) == mp::is_negative(&fb) {
            fa = fa / mp::mp_int(2, prec);
        } else {
            a = b;
            fa = fb;
        }
        b = c;
        fb = fc;
        if mp::abs(&(&b - &a)) <= tol {
            break;
        }
    }
    Ok(b)
}
