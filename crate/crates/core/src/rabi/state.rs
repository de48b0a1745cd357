//! Fock-space ground state reconstructed from the G-function root.
//!
//! At the root `x0 = E0 + g^2` the unnormalized amplitudes are
//! `<n|phi_1> = e^{-g^2/2} sqrt(n!) sum_{i<=n} p_i (-g)^{n-i} / (n-i)!` with
//! `p_i = sum_m e_m C(m, i) g^{m-i}` and `e_m = -Delta f_m / (m - x0)`; the
//! same sum over `f_m` gives `<n|phi_2>`. Parity ties the two together,
//! `<n|phi_1> = (-1)^{n+1} <n|phi_2>`, which serves as the self-check.

use nalgebra::DVector;

use super::mp::{self, Mp};
use super::oracle::{exact_diag_oracle, fix_sign, ED_MAX_DIM, ED_MIN_CUT};
use super::roots::{find_bracket, polish, RootSearch};
use super::series::{MpSeries, SERIES_MAX_LEN};
use super::{RabiParams, SolveOptions};
use crate::error::{Error, Result};

/// A Fock level counts as converged once the last five occupations add up
/// to less than this fraction of the running norm.
pub const FOCK_TAIL_REL: f64 = 1e-14;
/// Tolerated `max_n |phi1_n - (-1)^{n+1} phi2_n| / max_n |phi1_n|`.
pub const PARITY_CHECK_TOL: f64 = 1e-6;
/// Agreement demanded from the optional diagonalization cross-check.
pub const ORACLE_ENERGY_TOL: f64 = 1e-8;
const PRECISION_ATTEMPTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// `g` below the resolution of the G-function; the bare `|g, 0>`.
    Uncoupled,
    Braak,
    /// Root on a pole of the coefficients; the state comes from exact
    /// diagonalization instead.
    OracleFallback,
}

#[derive(Debug, Clone)]
pub struct RabiGroundState {
    pub params: RabiParams,
    pub e0: f64,
    /// Unnormalized `<n|phi_1>` for `n = 0..=n_fock`.
    pub phi1: Vec<f64>,
    /// `sum_n <n|phi_1>^2`.
    pub norm: f64,
    /// Normalized coefficients on `|g,0>, |e,1>, |g,2>, ...`.
    pub c: Vec<f64>,
    pub n_fock: usize,
    pub precision_bits: usize,
    pub method: SolveMethod,
    pub parity_residual: f64,
}

impl RabiGroundState {
    /// Probability that the qubit is excited (odd Fock numbers).
    pub fn excited_population(&self) -> f64 {
        self.c.iter().skip(1).step_by(2).map(|v| v * v).sum()
    }

    /// The state in the qubit-major basis `|q, n>` of dimension `2 (n_cut + 1)`.
    pub fn to_composite(&self, n_cut: usize) -> DVector<f64> {
        let nb = n_cut + 1;
        let mut v = DVector::zeros(2 * nb);
        for (n, &c) in self.c.iter().enumerate().take(nb) {
            v[if n % 2 == 0 { n } else { nb + n }] = c;
        }
        v
    }
}

/// Diagonalization cutoff ample for the ground state at coupling `g`.
pub fn oracle_cutoff(g: f64) -> usize {
    ((g * g + 12.0 * g + 40.0).ceil() as usize).max(ED_MIN_CUT)
}

pub fn ground_energy(params: RabiParams) -> Result<f64> {
    ground_energy_with(params, &SolveOptions::default())
}

pub fn ground_energy_with(params: RabiParams, opts: &SolveOptions) -> Result<f64> {
    let prec = opts.precision_bits.unwrap_or_else(|| mp::working_precision(params.coupling()));
    let e0 = match find_bracket(params, prec)? {
        RootSearch::Uncoupled => -params.half_gap(),
        RootSearch::Regular(br) => mp::to_f64(&polish(params, br, prec)?),
        RootSearch::Exceptional => exact_diag_oracle(params, fallback_cutoff(params)?)?.energy,
    };
    if opts.oracle_check {
        oracle_check(params, e0)?;
    }
    Ok(e0)
}

pub fn ground_state(params: RabiParams) -> Result<RabiGroundState> {
    ground_state_with(params, &SolveOptions::default())
}

pub fn ground_state_with(params: RabiParams, opts: &SolveOptions) -> Result<RabiGroundState> {
    let mut prec = opts.precision_bits.unwrap_or_else(|| mp::working_precision(params.coupling()));
    let br = match find_bracket(params, prec)? {
        RootSearch::Uncoupled => return Ok(uncoupled(params)),
        RootSearch::Exceptional => return from_oracle(params, opts),
        RootSearch::Regular(br) => br,
    };
    let mut last = String::new();
    for _ in 0..PRECISION_ATTEMPTS {
        let root = polish(params, br, prec)?;
        match reconstruct(params, &root, prec, opts.fock_cap) {
            Ok(gs) if gs.parity_residual <= PARITY_CHECK_TOL => {
                if opts.oracle_check {
                    oracle_check(params, gs.e0)?;
                }
                return Ok(gs);
            }
            Ok(gs) => {
                last = format!("parity self-check residual {:.3e} exceeds {PARITY_CHECK_TOL:e}", gs.parity_residual)
            }
            Err(Error::ReconstructionInconsistent(msg)) => last = msg,
            Err(e) => return Err(e),
        }
        prec *= 2;
    }
    Err(Error::ReconstructionInconsistent(format!("{last} at {} bits", prec / 2)))
}

fn uncoupled(params: RabiParams) -> RabiGroundState {
    RabiGroundState {
        params,
        e0: -params.half_gap(),
        phi1: vec![1.0],
        norm: 1.0,
        c: vec![1.0],
        n_fock: 0,
        precision_bits: 0,
        method: SolveMethod::Uncoupled,
        parity_residual: 0.0,
    }
}

fn fallback_cutoff(params: RabiParams) -> Result<usize> {
    let n_cut = oracle_cutoff(params.coupling());
    if 2 * (n_cut + 1) > ED_MAX_DIM {
        return Err(Error::MatrixTooLarge(format!(
            "exceptional root at g = {} needs a Fock cutoff of {n_cut}",
            params.coupling()
        )));
    }
    Ok(n_cut)
}

fn from_oracle(params: RabiParams, opts: &SolveOptions) -> Result<RabiGroundState> {
    let ed = exact_diag_oracle(params, fallback_cutoff(params)?)?;
    let full = ed.parity_coefficients();
    let n_fock = fock_cutoff(&full).unwrap_or(full.len() - 1).min(opts.fock_cap);
    let c = full[..=n_fock].to_vec();
    let norm: f64 = c.iter().map(|v| v * v).sum();
    let c: Vec<f64> = c.iter().map(|v| v / norm.sqrt()).collect();
    Ok(RabiGroundState {
        params,
        e0: ed.energy,
        phi1: c.clone(),
        norm: 1.0,
        c,
        n_fock,
        precision_bits: 0,
        method: SolveMethod::OracleFallback,
        parity_residual: 0.0,
    })
}

fn oracle_check(params: RabiParams, e0: f64) -> Result<()> {
    let n_cut = oracle_cutoff(params.coupling());
    if 2 * (n_cut + 1) > ED_MAX_DIM {
        return Ok(());
    }
    let ed = exact_diag_oracle(params, n_cut)?;
    if (ed.energy - e0).abs() > ORACLE_ENERGY_TOL {
        return Err(Error::OracleMismatch(format!(
            "G-function root {e0} vs diagonalization {} (cutoff {n_cut})",
            ed.energy
        )));
    }
    Ok(())
}

/// Smallest `n >= 5` at which the last five squared amplitudes are
/// negligible against the running sum.
fn fock_cutoff(amps: &[f64]) -> Option<usize> {
    let mut total = 0.0;
    for (n, a) in amps.iter().enumerate() {
        total += a * a;
        if n >= 5 {
            let tail: f64 = amps[n - 4..=n].iter().map(|v| v * v).sum();
            if tail < FOCK_TAIL_REL * total {
                return Some(n);
            }
        }
    }
    None
}

/// Rounding error in the reconstruction shows up as a component growing
/// like `sqrt(n!) / g^n`. Either the magnitudes fall below `1e-6` of the
/// peak and then climb steadily by more than three orders, or the error
/// swamps the state and the largest amplitude sits at the end of the range
/// (the true peak lies near `n = g^2`, well inside the initial range).
fn regrows(amps: &[f64]) -> bool {
    let mags: Vec<f64> = amps.iter().map(|v| v.abs()).collect();
    let len = mags.len();
    if len < 20 {
        return false;
    }
    let climbing = mags[len - 6..].windows(2).all(|w| w[1] > w[0]);
    let (peak_at, peak) = mags.iter().copied().enumerate().fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    if peak_at + 10 >= len {
        return climbing;
    }
    let low = mags[peak_at..].iter().copied().fold(f64::INFINITY, f64::min);
    climbing && low < 1e-6 * peak && mags[len - 1] > 1e3 * low
}

/// Coefficients of `sum_m c_m (1 + u)^m` in powers of `u` (a Taylor shift
/// by one), truncated to degree `max_deg`.
fn taylor_shift(c: &[Mp], max_deg: usize) -> Vec<Mp> {
    let len = c.len();
    let mut b: Vec<Mp> = vec![c[len - 1].clone()];
    for m in (0..len - 1).rev() {
        // b <- b (1 + u) + c_m
        b.push(Mp::ZERO);
        for j in (1..b.len()).rev() {
            let prev = b[j - 1].clone();
            b[j] += prev;
        }
        b[0] += &c[m];
        b.truncate(max_deg + 1);
    }
    b
}

/// `<n|phi>` for `n = 0..=n_max` from the scaled series coefficients
/// `s_m = c_m g^m`.
fn amplitudes(scaled: &[Mp], g: &Mp, n_max: usize, prec: usize) -> Vec<f64> {
    let shifted = taylor_shift(scaled, n_max);
    let inv_g = mp::mp(1.0, prec) / g;
    let mut p = Vec::with_capacity(n_max + 1);
    let mut pow = mp::mp(1.0, prec);
    for i in 0..=n_max {
        p.push(shifted.get(i).cloned().unwrap_or(Mp::ZERO) * &pow);
        pow *= &inv_g;
    }
    // w_k = (-g)^k / k!
    let mut w = Vec::with_capacity(n_max + 1);
    let mut wk = mp::mp(1.0, prec);
    for k in 0..=n_max {
        w.push(wk.clone());
        wk = -(wk * g) / mp::mp_int(k + 1, prec);
    }
    let half_g2 = g * g / mp::mp_int(2, prec);
    let mut prefactor = (-half_g2).exp();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            prefactor *= mp::mp_int(n, prec).sqrt();
        }
        let mut acc = mp::mp(0.0, prec);
        for i in 0..=n {
            acc += &p[i] * &w[n - i];
        }
        out.push(mp::to_f64(&(acc * &prefactor)));
    }
    out
}

/// Extend the series until, for every Fock level up to `n_max`, the
/// binomially weighted tail sits below the working precision.
fn extend_for_fock(series: &mut MpSeries, n_max: usize, prec: usize) -> Result<()> {
    let ln_binom = |m: usize, i: usize| -> f64 {
        (ln_factorial(m) - ln_factorial(i) - ln_factorial(m - i)) / std::f64::consts::LN_2
    };
    loop {
        let len = series.terms.len();
        let i = n_max.min(len - 1);
        let weighted = |m: usize| mp::log2_abs(&series.terms[m]) + ln_binom(m, i);
        let top = (i..len).map(weighted).fold(f64::NEG_INFINITY, f64::max);
        let tail = weighted(len - 1).max(weighted(len - 2));
        if len > n_max + 2 && tail + 1.0 <= top - prec as f64 {
            return Ok(());
        }
        if len >= 2 * SERIES_MAX_LEN {
            return Err(Error::SeriesDivergence(format!(
                "reconstruction series not converged after {len} terms"
            )));
        }
        series.extend_to((2 * len).max(n_max + 3));
    }
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

fn reconstruct(params: RabiParams, root: &Mp, prec: usize, fock_cap: usize) -> Result<RabiGroundState> {
    let g_f = params.coupling();
    let mut series = MpSeries::new(params, root, prec)?;
    let g = mp::mp(g_f, prec);
    let mut n_max = ((g_f * g_f + 10.0 * g_f + 20.0).ceil() as usize).min(fock_cap);
    loop {
        extend_for_fock(&mut series, n_max, prec)?;
        let f_scaled = series.terms.clone();
        let e_scaled: Vec<Mp> = f_scaled
            .iter()
            .enumerate()
            .map(|(m, t)| -(series.half_gap() * t) / (mp::mp_int(m, prec) - series.x()))
            .collect();
        let phi1 = amplitudes(&e_scaled, &g, n_max, prec);
        if let Some(n_fock) = fock_cutoff(&phi1) {
            let phi2 = amplitudes(&f_scaled, &g, n_fock, prec);
            return Ok(finish(params, root, prec, phi1[..=n_fock].to_vec(), &phi2));
        }
        if regrows(&phi1) {
            return Err(Error::ReconstructionInconsistent(
                "Fock amplitudes regrow after decaying; working precision exhausted".into(),
            ));
        }
        if n_max >= fock_cap {
            return Err(Error::SeriesDivergence(format!(
                "Fock amplitudes not converged below the cap of {fock_cap} levels"
            )));
        }
        n_max = (2 * n_max).min(fock_cap);
    }
}

fn finish(params: RabiParams, root: &Mp, prec: usize, mut phi1: Vec<f64>, phi2: &[f64]) -> RabiGroundState {
    let peak = phi1.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let parity_residual = phi1
        .iter()
        .zip(phi2)
        .enumerate()
        .map(|(n, (a, b))| (a - if n % 2 == 1 { *b } else { -*b }).abs())
        .fold(0.0f64, f64::max)
        / peak;
    fix_sign(&mut phi1);
    let norm: f64 = phi1.iter().map(|v| v * v).sum();
    let c: Vec<f64> = phi1.iter().map(|v| v / norm.sqrt()).collect();
    RabiGroundState {
        params,
        e0: mp::to_f64(root),
        n_fock: phi1.len() - 1,
        phi1,
        norm,
        c,
        precision_bits: prec,
        method: SolveMethod::Braak,
        parity_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_shift_matches_binomials() {
        let prec = 128;
        let c: Vec<Mp> = [1.0, 2.0, -3.0, 0.5].iter().map(|&v| mp::mp(v, prec)).collect();
        let b = taylor_shift(&c, 3);
        // sum_m c_m C(m, i)
        let expect = [1.0 + 2.0 - 3.0 + 0.5, 2.0 - 6.0 + 1.5, -3.0 + 1.5, 0.5];
        for (x, y) in b.iter().zip(expect) {
            assert_eq!(mp::to_f64(x), y);
        }
        assert_eq!(taylor_shift(&c, 1).len(), 2);
    }

    #[test]
    fn fock_cutoff_rule() {
        let amps: Vec<f64> = (0..40).map(|n| 0.2f64.powi(n)).collect();
        // squares decay as 0.04^n; 0.04^10 > 1e-14 > 0.04^11
        assert_eq!(fock_cutoff(&amps), Some(15));
        assert_eq!(fock_cutoff(&[1.0; 10]), None);
    }

    #[test]
    fn regrowth_detection() {
        let decaying: Vec<f64> = (0..30).map(|n| 0.3f64.powi(n)).collect();
        assert!(!regrows(&decaying));
        let mut contaminated = decaying.clone();
        contaminated.extend((0..10).map(|k| 1e-15 * 10f64.powi(k)));
        assert!(regrows(&contaminated));
        // rising towards a late peak is not contamination
        let rising: Vec<f64> = (0..30).map(|n| 1e-9 * 2f64.powi(n)).chain((0..40).map(|k| 0.5f64.powi(k))).collect();
        assert!(!regrows(&rising));
        let swamped: Vec<f64> = (0..40).map(|n| 10f64.powi(n)).collect();
        assert!(regrows(&swamped));
    }

    #[test]
    fn composite_embedding() {
        let gs = uncoupled(RabiParams::new(0.5, 0.0).unwrap());
        let v = gs.to_composite(3);
        assert_eq!(v.len(), 8);
        assert_eq!(v[0], 1.0);
    }
}
