use serde::{Deserialize, Serialize};

use super::EquilibriumError;
use crate::reactions::ReactionSystem;

/// The 13 coefficients of the reduced three-species right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedCoefficients {
    /// θ₁..θ₅: coefficients of C, I, C², CH, CI in C'.
    pub theta: [f64; 5],
    /// φ₁..φ₄: coefficients of H, C², CH, H² in H'.
    pub phi: [f64; 4],
    /// λ₁..λ₄: coefficients of I, C², CH, CI in I'.
    pub lambda: [f64; 4],
}

impl ReducedCoefficients {
    /// R(C) = α₁ + α₂C + α₃C², the numerator of H at equilibrium.
    pub fn r_poly(&self) -> [f64; 3] {
        let [t1, t2, t3, _, t5] = self.theta;
        let [l1, l2, _, l4] = self.lambda;
        [l1 * t1, l1 * t3 + l4 * t1 - l2 * t2, l4 * t3 - l2 * t5]
    }

    /// S(C) = β₁ + β₂C, the denominator of H at equilibrium.
    pub fn s_poly(&self) -> [f64; 2] {
        let [_, t2, _, t4, t5] = self.theta;
        let [l1, _, l3, l4] = self.lambda;
        [l3 * t2 - l1 * t4, l3 * t5 - l4 * t4]
    }

    /// Right-hand side (C', H', I') of the reduced template at a state.
    pub fn rhs(&self, c: f64, h: f64, i: f64) -> [f64; 3] {
        let [t1, t2, t3, t4, t5] = self.theta;
        let [p1, p2, p3, p4] = self.phi;
        let [l1, l2, l3, l4] = self.lambda;
        [
            t1 * c + t2 * i + t3 * c * c + t4 * c * h + t5 * c * i,
            p1 * h + p2 * c * c + p3 * c * h + p4 * h * h,
            l1 * i + l2 * c * c + l3 * c * h + l4 * c * i,
        ]
    }

    /// Residual of the reduced RHS at a state, with each equation scaled by
    /// `max(1, |largest term|)`.
    pub fn scaled_residual(&self, c: f64, h: f64, i: f64) -> f64 {
        let [t1, t2, t3, t4, t5] = self.theta;
        let [p1, p2, p3, p4] = self.phi;
        let [l1, l2, l3, l4] = self.lambda;
        let eqs: [&[f64]; 3] = [
            &[t1 * c, t2 * i, t3 * c * c, t4 * c * h, t5 * c * i],
            &[p1 * h, p2 * c * c, p3 * c * h, p4 * h * h],
            &[l1 * i, l2 * c * c, l3 * c * h, l4 * c * i],
        ];
        let mut worst = 0.0_f64;
        for terms in eqs {
            let total: f64 = terms.iter().sum();
            let scale = terms.iter().fold(1.0_f64, |m, t| m.max(t.abs()));
            worst = worst.max(total.abs() / scale);
        }
        worst
    }
}

/// Coefficients `E₀..E₄` of the equilibrium quartic in C, with the `R` and
/// `S` intermediates used to build them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticCoefficients {
    /// `[E₀, E₁, E₂, E₃, E₄]`, ascending powers.
    pub e: [f64; 5],
    /// `[α₁, α₂, α₃]`: R(C) coefficients.
    pub alpha: [f64; 3],
    /// `[β₁, β₂]`: S(C) coefficients.
    pub beta: [f64; 2],
}

impl QuarticCoefficients {
    pub fn eval(&self, c: f64) -> f64 {
        let [e0, e1, e2, e3, e4] = self.e;
        (((e4 * c + e3) * c + e2) * c + e1) * c + e0
    }
}

/// Expands `φ₁RS + φ₂C²S² + φ₃CRS + φ₄R²` into the quartic `Σ E_k C^k`.
pub fn quartic_coefficients(rc: &ReducedCoefficients) -> QuarticCoefficients {
    let [a1, a2, a3] = rc.r_poly();
    let [b1, b2] = rc.s_poly();
    let [p1, p2, p3, p4] = rc.phi;

    let e4 = p4 * a3 * a3 + p3 * a3 * b2 + p2 * b2 * b2;
    let e3 = p1 * a3 * b2 + 2.0 * p2 * b1 * b2 + p3 * (a3 * b1 + a2 * b2) + 2.0 * p4 * a2 * a3;
    let e2 = p1 * (a3 * b1 + a2 * b2)
        + p2 * b1 * b1
        + p3 * (a1 * b2 + a2 * b1)
        + p4 * (2.0 * a1 * a3 + a2 * a2);
    let e1 = p1 * (a1 * b2 + a2 * b1) + p3 * a1 * b1 + 2.0 * p4 * a1 * a2;
    let e0 = p1 * a1 * b1 + p4 * a1 * a1;

    QuarticCoefficients { e: [e0, e1, e2, e3, e4], alpha: [a1, a2, a3], beta: [b1, b2] }
}

/// Extracts the reduced coefficients from a fitted three-species system.
///
/// The system's mass-action RHS is decomposed into monomials exactly (no
/// numerics: each reaction contributes `ν_i·k` times one monomial); any
/// non-zero coefficient outside the template is an error naming the
/// offending monomials.
pub fn extract_coefficients(
    system: &ReactionSystem,
) -> Result<ReducedCoefficients, EquilibriumError> {
    let n = system.species().len();
    if n != 3 {
        return Err(EquilibriumError::WrongSpeciesCount(n));
    }
    // monomial exponents over (C, H, I) up to total degree 2
    const MONOMIALS: [[u32; 3]; 9] = [
        [1, 0, 0], // C
        [0, 1, 0], // H
        [0, 0, 1], // I
        [2, 0, 0], // C²
        [1, 1, 0], // CH
        [1, 0, 1], // CI
        [0, 2, 0], // H²
        [0, 1, 1], // HI
        [0, 0, 2], // I²
    ];
    // coefficient of each monomial in each equation
    let mut coef = [[0.0_f64; 9]; 3];
    for reaction in system.reactions() {
        let k = reaction.rate();
        if k == 0.0 {
            continue;
        }
        let l = reaction.reactants();
        let exps = [l[0], l[1], l[2]];
        let slot = MONOMIALS
            .iter()
            .position(|m| *m == exps)
            .ok_or_else(|| EquilibriumError::ExtraMonomials("order-0 reactant".into()))?;
        let symmetry = if l.iter().any(|&c| c == 2) { 0.5 } else { 1.0 };
        for (eq, nu) in reaction.stoich_vector().iter().enumerate() {
            coef[eq][slot] += *nu as f64 * k * symmetry;
        }
    }

    // template slots: (equation, monomial) -> coefficient position
    let mut rc = ReducedCoefficients { theta: [0.0; 5], phi: [0.0; 4], lambda: [0.0; 4] };
    let mut extras: Vec<String> = Vec::new();
    let names = ["C", "H", "I", "C^2", "C*H", "C*I", "H^2", "H*I", "I^2"];
    let eq_names = ["dC/dt", "dH/dt", "dI/dt"];
    for (eq, row) in coef.iter().enumerate() {
        for (m, &value) in row.iter().enumerate() {
            if value == 0.0 {
                continue;
            }
            let slot: Option<&mut f64> = match (eq, m) {
                (0, 0) => Some(&mut rc.theta[0]),
                (0, 2) => Some(&mut rc.theta[1]),
                (0, 3) => Some(&mut rc.theta[2]),
                (0, 4) => Some(&mut rc.theta[3]),
                (0, 5) => Some(&mut rc.theta[4]),
                (1, 1) => Some(&mut rc.phi[0]),
                (1, 3) => Some(&mut rc.phi[1]),
                (1, 4) => Some(&mut rc.phi[2]),
                (1, 6) => Some(&mut rc.phi[3]),
                (2, 2) => Some(&mut rc.lambda[0]),
                (2, 3) => Some(&mut rc.lambda[1]),
                (2, 4) => Some(&mut rc.lambda[2]),
                (2, 5) => Some(&mut rc.lambda[3]),
                _ => None,
            };
            match slot {
                Some(target) => *target = value,
                None => extras.push(format!("{} in {}", names[m], eq_names[eq])),
            }
        }
    }
    if !extras.is_empty() {
        return Err(EquilibriumError::ExtraMonomials(extras.join(", ")));
    }
    Ok(rc)
}
