//! Diagonal toy model that reaches unit efficiency.
//!
//! `H_I = G |A_0 B_0><A_0 B_0| + L |A_n B_m><A_n B_m|` with
//! `L = G - A_n - B_m - eps`, so `|A_n B_m>` sits `eps` below `|A_0 B_0>`
//! and the coupled ground state is a product state.

use crate::error::{Error, Result};
use crate::protocol::BipartiteSystem;
use crate::quantum::HermitianOperator;

#[derive(Debug, Clone, PartialEq)]
pub struct ToyModelParams {
    levels_a: Vec<f64>,
    levels_b: Vec<f64>,
    n: usize,
    m: usize,
    coupling: f64,
    epsilon: f64,
}

fn check_levels(name: &str, levels: &[f64], index: usize) -> Result<()> {
    if levels.len() < 2 || levels[0] != 0.0 {
        return Err(Error::InvalidParams(format!("{name} needs at least two levels starting at 0")));
    }
    if levels.windows(2).any(|w| !(w[1] > w[0])) || levels.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParams(format!("{name} must be finite and strictly ascending")));
    }
    if index == 0 || index >= levels.len() {
        return Err(Error::InvalidParams(format!(
            "{name} index {index} must lie in 1..{}",
            levels.len()
        )));
    }
    Ok(())
}

impl ToyModelParams {
    pub fn new(
        levels_a: Vec<f64>,
        levels_b: Vec<f64>,
        n: usize,
        m: usize,
        coupling: f64,
        epsilon: f64,
    ) -> Result<Self> {
        check_levels("levels_a", &levels_a, n)?;
        check_levels("levels_b", &levels_b, m)?;
        if !coupling.is_finite() || coupling >= levels_a[1].min(levels_b[1]) {
            return Err(Error::InvalidParams(format!("G = {coupling} must lie below min(A_1, B_1)")));
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParams(format!("epsilon must be non-negative, got {epsilon}")));
        }
        let p = Self { levels_a, levels_b, n, m, coupling, epsilon };
        if !(p.l() < 0.0) {
            return Err(Error::InvalidParams(format!("L = {} must be negative", p.l())));
        }
        Ok(p)
    }

    pub fn levels_a(&self) -> &[f64] {
        &self.levels_a
    }

    pub fn levels_b(&self) -> &[f64] {
        &self.levels_b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `A_n + B_m`.
    pub fn gap(&self) -> f64 {
        self.levels_a[self.n] + self.levels_b[self.m]
    }

    /// `L = G - A_n - B_m - eps`.
    pub fn l(&self) -> f64 {
        self.coupling - self.gap() - self.epsilon
    }
}

/// `(W, eta)` at zero temperature. For `eps = 0` the bath splits the
/// population evenly between `|A_0 B_0>` and `|A_n B_m>`, halving `W`.
pub fn toy_closed_form(p: &ToyModelParams) -> (f64, f64) {
    let g = p.coupling();
    let spent_on = g.max(0.0);
    if p.epsilon() > 0.0 {
        let w = p.gap();
        // switching on costs G if positive, switching off costs -L
        (w, w / (spent_on - p.l()))
    } else {
        let w = p.gap() / 2.0;
        let h_i_final = 0.5 * (g + p.l());
        (w, w / (spent_on - h_i_final))
    }
}

/// Diagonal `H_A`, `H_B`, `H_I` on the lowest `d_a` and `d_b` levels.
pub fn toy_to_matrices(p: &ToyModelParams, d_a: usize, d_b: usize) -> Result<BipartiteSystem> {
    if d_a <= p.n() || d_b <= p.m() {
        return Err(Error::InvalidParams(format!(
            "dimensions {d_a}x{d_b} too small for levels n = {}, m = {}",
            p.n(),
            p.m()
        )));
    }
    if d_a > p.levels_a().len() || d_b > p.levels_b().len() {
        return Err(Error::InvalidParams(format!(
            "dimensions {d_a}x{d_b} exceed the {}x{} levels given",
            p.levels_a().len(),
            p.levels_b().len()
        )));
    }
    let h_a = HermitianOperator::from_real_diagonal(&p.levels_a()[..d_a]);
    let h_b = HermitianOperator::from_real_diagonal(&p.levels_b()[..d_b]);
    let mut diag = vec![0.0; d_a * d_b];
    diag[0] = p.coupling();
    diag[p.n() * d_b + p.m()] = p.l();
    BipartiteSystem::new(h_a, h_b, HermitianOperator::from_real_diagonal(&diag))
}
