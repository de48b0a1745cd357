//! Braak's G-function for the Rabi model.
//!
//! With `x = E + g^2` the coefficients obey
//! `n f_n = Omega(n-1) f_{n-1} - f_{n-2}`, `f_0 = 1`, and
//! `G_pm(x) = sum_n (1 -+ Delta / (x - n)) f_n g^n`.
//! The series is carried in the scaled form `t_n = f_n g^n`, for which
//! `n t_n = k(n-1) t_{n-1} - g^2 t_{n-2}` with `k(m) = g Omega(m)`.

use super::mp::{self, Mp};
use super::{Parity, RabiParams};
use crate::error::{Error, Result};

/// Minimum distance `|x - n|` to a pole of the coefficients.
pub const POLE_GUARD: f64 = 1e-9;
/// Truncate once the last two terms fall below this fraction of the series scale.
pub const SERIES_REL_TAIL: f64 = 1e-14;
pub const SERIES_START_LEN: usize = 40;
pub const SERIES_MAX_LEN: usize = 2000;

/// `k(m) = g Omega(m) = (m + 3g^2 - E - Delta^2 / (m - x)) / 2`.
fn k_f64(p: &RabiParams, energy: f64, x: f64, m: usize) -> f64 {
    let g2 = p.coupling() * p.coupling();
    let d = p.half_gap();
    let m = m as f64;
    0.5 * (m + 3.0 * g2 - energy - d * d / (m - x))
}

fn check_pole(x: f64) -> Result<()> {
    if x > -0.5 {
        let n = x.round();
        if (x - n).abs() < POLE_GUARD {
            return Err(Error::Pole { x, pole: n, guard: POLE_GUARD });
        }
    }
    Ok(())
}

fn require_coupling(p: &RabiParams) -> Result<()> {
    if p.coupling() > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams("the G-function requires g > 0".into()))
    }
}

fn parity_factor(parity: Parity, half_gap: f64, x: f64, n: usize) -> f64 {
    let r = half_gap / (x - n as f64);
    match parity {
        Parity::Plus => 1.0 - r,
        Parity::Minus => 1.0 + r,
    }
}

/// Double-precision scaled coefficients `t_n = f_n g^n` at fixed energy.
#[derive(Debug, Clone)]
pub struct BraakSeries {
    params: RabiParams,
    energy: f64,
    x: f64,
    terms: Vec<f64>,
}

impl BraakSeries {
    pub fn new(params: RabiParams, energy: f64) -> Result<Self> {
        require_coupling(&params)?;
        let g = params.coupling();
        let x = energy + g * g;
        check_pole(x)?;
        let mut s = Self { params, energy, x, terms: vec![1.0] };
        let mut len = SERIES_START_LEN;
        loop {
            s.extend_to(len)?;
            if s.tail_converged() {
                return Ok(s);
            }
            if len >= SERIES_MAX_LEN {
                return Err(Error::SeriesDivergence(format!(
                    "G-series not converged after {SERIES_MAX_LEN} terms at E = {energy}"
                )));
            }
            len = (2 * len).min(SERIES_MAX_LEN);
        }
    }

    fn extend_to(&mut self, len: usize) -> Result<()> {
        let g2 = self.params.coupling().powi(2);
        while self.terms.len() < len {
            let n = self.terms.len();
            let prev = self.terms[n - 1];
            let prev2 = if n >= 2 { self.terms[n - 2] } else { 0.0 };
            let t = (k_f64(&self.params, self.energy, self.x, n - 1) * prev - g2 * prev2) / n as f64;
            if !t.is_finite() {
                return Err(Error::SeriesDivergence(format!("G-series overflow at n = {n}, E = {}", self.energy)));
            }
            self.terms.push(t);
        }
        Ok(())
    }

    fn tail_converged(&self) -> bool {
        let n = self.terms.len();
        let scale: f64 = self.terms.iter().map(|t| t.abs()).sum();
        self.terms[n - 1].abs() + self.terms[n - 2].abs() <= SERIES_REL_TAIL * scale
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn terms(&self) -> &[f64] {
        &self.terms
    }

    pub fn value(&self, parity: Parity) -> f64 {
        let d = self.params.half_gap();
        self.terms.iter().enumerate().map(|(n, t)| parity_factor(parity, d, self.x, n) * t).sum()
    }

    /// `sum_n |(1 -+ Delta/(x-n)) t_n|`, the magnitude against which a
    /// value of `G` near zero is judged.
    pub fn scale(&self, parity: Parity) -> f64 {
        let d = self.params.half_gap();
        self.terms.iter().enumerate().map(|(n, t)| (parity_factor(parity, d, self.x, n) * t).abs()).sum()
    }
}

/// `G_pm(E + g^2)` in double precision.
pub fn g_function(params: RabiParams, energy: f64, parity: Parity) -> Result<f64> {
    Ok(BraakSeries::new(params, energy)?.value(parity))
}

/// The same series carried at `prec` bits.
#[derive(Debug, Clone)]
pub(crate) struct MpSeries {
    prec: usize,
    half_gap: Mp,
    g2: Mp,
    energy: Mp,
    x: Mp,
    pub(crate) terms: Vec<Mp>,
}

impl MpSeries {
    pub(crate) fn new(params: RabiParams, energy: &Mp, prec: usize) -> Result<Self> {
        require_coupling(&params)?;
        let g = mp::mp(params.coupling(), prec);
        let g2 = &g * &g;
        let energy = energy.clone().with_precision(prec).value();
        let x = &energy + &g2;
        check_pole(mp::to_f64(&x))?;
        let mut s = Self { prec, half_gap: mp::mp(params.half_gap(), prec), g2, energy, x, terms: vec![mp::mp(1.0, prec)] };
        let mut len = SERIES_START_LEN;
        loop {
            s.extend_to(len);
            if s.tail_converged() {
                return Ok(s);
            }
            if len >= SERIES_MAX_LEN {
                return Err(Error::SeriesDivergence(format!(
                    "multiprecision G-series not converged after {SERIES_MAX_LEN} terms at E = {}",
                    mp::to_f64(&s.energy)
                )));
            }
            len = (2 * len).min(SERIES_MAX_LEN);
        }
    }

    pub(crate) fn x(&self) -> &Mp {
        &self.x
    }

    pub(crate) fn half_gap(&self) -> &Mp {
        &self.half_gap
    }

    fn k(&self, m: usize) -> Mp {
        let mm = mp::mp_int(m, self.prec);
        let three = mp::mp_int(3, self.prec);
        let pole = &mm - &self.x;
        let num = mm + three * &self.g2 - &self.energy - (&self.half_gap * &self.half_gap) / pole;
        num / mp::mp_int(2, self.prec)
    }

    pub(crate) fn extend_to(&mut self, len: usize) {
        while self.terms.len() < len {
            let n = self.terms.len();
            let mut t = self.k(n - 1) * &self.terms[n - 1];
            if n >= 2 {
                t -= &self.g2 * &self.terms[n - 2];
            }
            self.terms.push(t / mp::mp_int(n, self.prec));
        }
    }

    fn tail_converged(&self) -> bool {
        let n = self.terms.len();
        let top = self.terms.iter().map(mp::log2_abs).fold(f64::NEG_INFINITY, f64::max);
        let tail = mp::log2_abs(&self.terms[n - 1]).max(mp::log2_abs(&self.terms[n - 2]));
        tail + 1.0 <= top - self.prec as f64
    }

    pub(crate) fn value(&self, parity: Parity) -> Mp {
        let mut acc = mp::mp(0.0, self.prec);
        for (n, t) in self.terms.iter().enumerate() {
            let r = &self.half_gap / (&self.x - mp::mp_int(n, self.prec));
            let f = match parity {
                Parity::Plus => mp::mp(1.0, self.prec) - r,
                Parity::Minus => mp::mp(1.0, self.prec) + r,
            };
            acc += f * t;
        }
        acc
    }
}
