//! Density matrices for the W-state family.
//!
//! Basis strings are ordered with party 0 as the most significant bit.
//! `|1⟩` is one photon in the mode (or the excited atomic level `|e⟩`),
//! `|0⟩` is vacuum (or the ground level `|g⟩`).

use std::f64::consts::TAU;

use crate::error::check_unit;
use crate::qmat::{c, hermitian_eigenvalues, CMatrix, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StateDensity {
    n_parties: usize,
    rho: CMatrix,
    atom: bool,
}

impl StateDensity {
    /// Wraps an arbitrary density matrix after checking it.
    pub fn from_density(rho: CMatrix, n_parties: usize, atom: bool) -> Result<Self> {
        let state = Self::unchecked(rho, n_parties, atom)?;
        state.check_invariants()?;
        Ok(state)
    }

    pub fn from_pure(amplitudes: &[C64], atom: bool) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Dimension(format!("state vector of length {dim}")));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Invalid("zero state vector".into()));
        }
        let v: Vec<C64> = amplitudes.iter().map(|a| a / norm).collect();
        Self::unchecked(CMatrix::outer(&v), dim.trailing_zeros() as usize, atom)
    }

    fn unchecked(rho: CMatrix, n_parties: usize, atom: bool) -> Result<Self> {
        let dim = 1usize
            .checked_shl(n_parties as u32)
            .ok_or_else(|| Error::Dimension(format!("{n_parties} parties")))?;
        if rho.rows() != dim || rho.cols() != dim {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for {n_parties} parties",
                rho.rows(),
                rho.cols()
            )));
        }
        Ok(Self { n_parties, rho, atom })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    /// Whether party 0 is atomic.
    pub fn has_atom(&self) -> bool {
        self.atom
    }

    /// Unit trace, Hermitian, and no eigenvalue below `-1e-10`.
    pub fn check_invariants(&self) -> Result<()> {
        let tr = self.rho.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::NotNormalized { trace: tr.re });
        }
        let ev = hermitian_eigenvalues(&self.rho)?;
        if let Some(&min) = ev.first() {
            if min < -1e-10 {
                return Err(Error::Invalid(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(())
    }

    /// `⟨ψ|ρ|ψ⟩` for a pure state `ψ` of matching dimension.
    pub fn fidelity_with(&self, psi: &[C64]) -> f64 {
        let r = self.rho.matvec(psi);
        psi.iter().zip(&r).map(|(a, b)| a.conj() * b).sum::<C64>().re
    }
}

/// Amplitude vector of `|W_n⟩`.
pub fn w_amplitudes(n: usize) -> Vec<C64> {
    let dim = 1usize << n;
    let mut v = vec![C64::default(); dim];
    let a = c(1.0 / (n as f64).sqrt(), 0.0);
    for k in 0..n {
        v[1usize << (n - 1 - k)] = a;
    }
    v
}

fn check_parties(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Invalid("at least one party is required".into()));
    }
    if n > 16 {
        return Err(Error::Dimension(format!("{n} parties")));
    }
    Ok(())
}

/// `|W_n⟩⟨W_n|`.
pub fn w_state(n: usize) -> Result<StateDensity> {
    check_parties(n)?;
    StateDensity::unchecked(CMatrix::outer(&w_amplitudes(n)), n, false)
}

/// Atom entangled with a photon spread uniformly over `n_modes` modes, with
/// imperfect atom-photon coupling `eta_c`.
///
/// With weight `cos²θ + η_c sin²θ` the register holds the normalized branch
/// `cos θ|e⟩|vac⟩ + √η_c sin θ|g⟩|W⟩`, otherwise `|g⟩|vac⟩`. `θ` is reduced
/// modulo 2π.
pub fn atom_photon_state(theta: f64, eta_c: f64, n_modes: usize) -> Result<StateDensity> {
    check_unit("eta_c", eta_c)?;
    check_parties(n_modes)?;
    if !theta.is_finite() {
        return Err(Error::Invalid(format!("theta = {theta}")));
    }
    let theta = theta.rem_euclid(TAU);
    let n = n_modes + 1;
    let dim = 1usize << n;
    let half = dim / 2;
    let (s, co) = theta.sin_cos();

    // Unnormalized coherent branch; its squared norm is the branch weight.
    let mut branch = vec![C64::default(); dim];
    branch[half] = c(co, 0.0);
    let w = w_amplitudes(n_modes);
    let scale = eta_c.sqrt() * s;
    for (slot, a) in branch[..half].iter_mut().zip(&w) {
        *slot = a * scale;
    }
    let mut rho = CMatrix::outer(&branch);
    rho[(0, 0)] += c((1.0 - eta_c) * s * s, 0.0);
    StateDensity::unchecked(rho, n, true)
}

/// `η|W⟩⟨W| + (1-η)|vac⟩⟨vac|`: the W-state after independent amplitude
/// damping of every qubit with survival probability `eta`.
pub fn damped_w_state(n: usize, eta: f64) -> Result<StateDensity> {
    check_parties(n)?;
    check_unit("eta", eta)?;
    let mut rho = CMatrix::outer(&w_amplitudes(n)).scale_re(eta);
    rho[(0, 0)] += c(1.0 - eta, 0.0);
    StateDensity::unchecked(rho, n, false)
}

/// `|0…0⟩⟨0…0|`.
pub fn vacuum(n: usize) -> Result<StateDensity> {
    damped_w_state(n, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::tensor_product;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn basis(n: usize, bits: usize) -> Vec<C64> {
        let mut v = vec![C64::default(); 1 << n];
        v[bits] = c(1.0, 0.0);
        v
    }

    #[test]
    fn w3_amplitudes() {
        let v = w_amplitudes(3);
        let a = 1.0 / 3f64.sqrt();
        for (i, z) in v.iter().enumerate() {
            let expected = if [0b100, 0b010, 0b001].contains(&i) { a } else { 0.0 };
            assert_abs_diff_eq!(z.re, expected, epsilon = 1e-15);
        }
        w_state(3).unwrap().check_invariants().unwrap();
    }

    #[test]
    fn w_small_cases() {
        let w1 = w_state(1).unwrap();
        assert_eq!(w1.rho(), &CMatrix::diag(&[0.0, 1.0]));
        let w2 = w_state(2).unwrap();
        assert_abs_diff_eq!(w2.rho()[(1, 2)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w2.rho()[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert!(w_state(0).is_err());
    }

    #[test]
    fn atom_photon_limits() {
        let s = atom_photon_state(0.0, 0.3, 2).unwrap();
        assert_abs_diff_eq!(s.fidelity_with(&basis(3, 0b100)), 1.0, epsilon = 1e-14);

        let s = atom_photon_state(FRAC_PI_2, 1.0, 2).unwrap();
        let mut target = vec![C64::default(); 8];
        target[0b010] = c(0.5f64.sqrt(), 0.0);
        target[0b001] = c(0.5f64.sqrt(), 0.0);
        assert_abs_diff_eq!(s.fidelity_with(&target), 1.0, epsilon = 1e-14);

        let s = atom_photon_state(FRAC_PI_2, 0.0, 3).unwrap();
        assert_abs_diff_eq!(s.fidelity_with(&basis(4, 0)), 1.0, epsilon = 1e-14);

        assert!(atom_photon_state(0.3, 1.2, 2).is_err());
        assert!(atom_photon_state(0.3, 0.5, 0).is_err());
    }

    #[test]
    fn atom_photon_invariants_and_purity() {
        for &(theta, eta_c) in &[(0.3, 0.4), (-0.78, 1.0), (7.0, 0.9), (-2.0, 0.0)] {
            let s = atom_photon_state(theta, eta_c, 3).unwrap();
            s.check_invariants().unwrap();
            assert!(s.has_atom());
        }
        let pure = atom_photon_state(-0.78, 1.0, 2).unwrap();
        let ev = hermitian_eigenvalues(pure.rho()).unwrap();
        assert!(ev[ev.len() - 2].abs() < 1e-10);
    }

    #[test]
    fn theta_reduced_mod_two_pi() {
        let a = atom_photon_state(0.4, 0.7, 2).unwrap();
        let b = atom_photon_state(0.4 + 3.0 * TAU, 0.7, 2).unwrap();
        assert!(a.rho().max_abs_diff(b.rho()) < 1e-12);
    }

    #[test]
    fn damped_limits_and_fidelity() {
        let w = w_state(4).unwrap();
        assert!(damped_w_state(4, 1.0).unwrap().rho().max_abs_diff(w.rho()) < 1e-15);
        assert_eq!(damped_w_state(4, 0.0).unwrap().rho()[(0, 0)], c(1.0, 0.0));
        let wv = w_amplitudes(4);
        for &eta in &[0.0, 0.2, 0.5, 0.93, 1.0] {
            let s = damped_w_state(4, eta).unwrap();
            s.check_invariants().unwrap();
            assert_abs_diff_eq!(s.fidelity_with(&wv), eta, epsilon = 1e-14);
        }
        assert!(damped_w_state(3, -0.1).is_err());
    }

    /// Applies the qubit amplitude-damping channel to every party.
    fn damp_every_qubit(rho: &CMatrix, n: usize, eta: f64) -> CMatrix {
        let k0 = CMatrix::diag(&[1.0, eta.sqrt()]);
        let k1 = CMatrix::from_real(2, 2, &[0.0, (1.0 - eta).sqrt(), 0.0, 0.0]).unwrap();
        let mut out = rho.clone();
        for party in 0..n {
            let mut acc = CMatrix::zeros(rho.rows(), rho.cols());
            for k in [&k0, &k1] {
                let factors: Vec<CMatrix> = (0..n)
                    .map(|j| if j == party { k.clone() } else { CMatrix::identity(2) })
                    .collect();
                let op = tensor_product(&factors).unwrap();
                acc = &acc + &(&(&op * &out) * &op.adjoint());
            }
            out = acc;
        }
        out
    }

    #[test]
    fn damped_matches_channel_application() {
        for n in 1..=5 {
            let w = w_state(n).unwrap();
            for &eta in &[0.0, 0.3, 0.8, 1.0] {
                let channel = damp_every_qubit(w.rho(), n, eta);
                let closed = damped_w_state(n, eta).unwrap();
                assert!(channel.max_abs_diff(closed.rho()) < 1e-12, "n={n} eta={eta}");
            }
        }
    }
}
