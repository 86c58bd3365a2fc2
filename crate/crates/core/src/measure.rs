//! Single-qubit measurement models.
//!
//! Outcome labels follow one convention throughout the crate: outcome 0 is
//! the `+1` eigenvector of `n·σ` for the measured axis `n` and outcome 1 is
//! the `-1` eigenvector. For the z axis that makes outcome 1 the photon
//! (`|1⟩`, a detector click) and outcome 0 the vacuum.
//!
//! In the two-efficiency model the "up" state `|↑⟩` is the outcome-1 state
//! and "down" `|↓⟩` the outcome-0 state, so that `efficiency_povm(z, η, 1)`
//! is a single-photon detector of efficiency `η`.

use crate::error::check_unit;
use crate::qmat::{c, pauli, CMatrix};
use crate::{Error, Result};

const COMPLETENESS_TOL: f64 = 1e-12;

/// Measurement direction on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAxis {
    pub polar: f64,
    pub azimuth: f64,
}

impl BlochAxis {
    pub const fn new(polar: f64, azimuth: f64) -> Self {
        Self { polar, azimuth }
    }

    pub const fn z() -> Self {
        Self::new(0.0, 0.0)
    }

    pub const fn x() -> Self {
        Self::new(std::f64::consts::FRAC_PI_2, 0.0)
    }

    /// `cos φ σ_x + sin φ σ_y`.
    pub const fn equatorial(phi: f64) -> Self {
        Self::new(std::f64::consts::FRAC_PI_2, phi)
    }

    pub fn direction(&self) -> [f64; 3] {
        let (sp, cp) = self.polar.sin_cos();
        let (sa, ca) = self.azimuth.sin_cos();
        [sp * ca, sp * sa, cp]
    }

    /// `n·σ`.
    pub fn observable(&self) -> CMatrix {
        let [nx, ny, nz] = self.direction();
        let mut m = pauli::z().scale_re(nz);
        m = &m + &pauli::x().scale_re(nx);
        &m + &pauli::y().scale_re(ny)
    }

    /// Projectors onto the `+1` and `-1` eigenvectors of `n·σ`.
    pub fn projectors(&self) -> (CMatrix, CMatrix) {
        let half_id = CMatrix::identity(2).scale_re(0.5);
        let half_obs = self.observable().scale_re(0.5);
        (&half_id + &half_obs, &half_id - &half_obs)
    }
}

/// Binary POVM `{m_down (outcome 0), m_up (outcome 1)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoOutcomePOVM {
    pub m_up: CMatrix,
    pub m_down: CMatrix,
    pub label: &'static str,
}

impl TwoOutcomePOVM {
    /// Elements indexed by outcome.
    pub fn elements(&self) -> [&CMatrix; 2] {
        [&self.m_down, &self.m_up]
    }

    /// Same measurement with the two outcome labels exchanged.
    pub fn relabeled(&self) -> Self {
        Self {
            m_up: self.m_down.clone(),
            m_down: self.m_up.clone(),
            label: self.label,
        }
    }

    /// `M_0 - M_1`, the operator whose expectation is the ±1-valued outcome.
    pub fn observable(&self) -> CMatrix {
        &self.m_down - &self.m_up
    }

    pub fn check_invariants(&self) -> Result<()> {
        check_povm(&self.elements())
    }
}

/// Three-outcome POVM `{m_plus, m_minus, m_noclick}` indexed 0, 1, 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeOutcomePOVM {
    pub m_plus: CMatrix,
    pub m_minus: CMatrix,
    pub m_noclick: CMatrix,
}

impl ThreeOutcomePOVM {
    pub fn elements(&self) -> [&CMatrix; 3] {
        [&self.m_plus, &self.m_minus, &self.m_noclick]
    }

    pub fn check_invariants(&self) -> Result<()> {
        check_povm(&self.elements())
    }
}

/// A measurement of either cardinality, as used in assignments.
#[derive(Debug, Clone, PartialEq)]
pub enum Povm {
    Two(TwoOutcomePOVM),
    Three(ThreeOutcomePOVM),
}

impl Povm {
    pub fn n_outcomes(&self) -> usize {
        match self {
            Povm::Two(_) => 2,
            Povm::Three(_) => 3,
        }
    }

    pub fn elements(&self) -> Vec<&CMatrix> {
        match self {
            Povm::Two(p) => p.elements().to_vec(),
            Povm::Three(p) => p.elements().to_vec(),
        }
    }
}

impl From<TwoOutcomePOVM> for Povm {
    fn from(p: TwoOutcomePOVM) -> Self {
        Povm::Two(p)
    }
}

impl From<ThreeOutcomePOVM> for Povm {
    fn from(p: ThreeOutcomePOVM) -> Self {
        Povm::Three(p)
    }
}

/// Completeness within `1e-12` and positivity within `-1e-10`.
pub fn check_povm(elements: &[&CMatrix]) -> Result<()> {
    let mut sum = CMatrix::zeros(2, 2);
    for e in elements {
        if e.rows() != 2 || e.cols() != 2 {
            return Err(Error::Dimension("POVM elements must be 2x2".into()));
        }
        if !e.is_hermitian(1e-12) {
            return Err(Error::NotHermitian {
                deviation: e.hermitian_deviation(),
            });
        }
        // 2x2 Hermitian: both eigenvalues >= 0 iff trace >= 0 and det >= 0.
        let tr = e[(0, 0)].re + e[(1, 1)].re;
        let det = e[(0, 0)].re * e[(1, 1)].re - e[(0, 1)].norm_sqr();
        let disc = ((tr * tr - 4.0 * det).max(0.0)).sqrt();
        let min_ev = 0.5 * (tr - disc);
        if min_ev < -1e-10 {
            return Err(Error::Invalid(format!("POVM element has eigenvalue {min_ev:e}")));
        }
        sum = &sum + e;
    }
    let dev = sum.max_abs_diff(&CMatrix::identity(2));
    if dev > COMPLETENESS_TOL {
        return Err(Error::Invalid(format!("POVM elements sum to identity only within {dev:e}")));
    }
    Ok(())
}

/// Two-efficiency error model along `axis`:
/// `M_↑ = η_↑|↑⟩⟨↑| + (1-η_↓)|↓⟩⟨↓|`, `M_↓ = η_↓|↓⟩⟨↓| + (1-η_↑)|↑⟩⟨↑|`.
pub fn efficiency_povm(axis: BlochAxis, eta_up: f64, eta_down: f64) -> Result<TwoOutcomePOVM> {
    check_unit("eta_up", eta_up)?;
    check_unit("eta_down", eta_down)?;
    let (down, up) = axis.projectors();
    Ok(TwoOutcomePOVM {
        m_up: &up.scale_re(eta_up) + &down.scale_re(1.0 - eta_down),
        m_down: &down.scale_re(eta_down) + &up.scale_re(1.0 - eta_up),
        label: "efficiency",
    })
}

/// Click/no-click detection of efficiency `eta` in the Fock basis.
pub fn spd_povm(eta: f64) -> Result<TwoOutcomePOVM> {
    let mut p = efficiency_povm(BlochAxis::z(), eta, 1.0)?;
    p.label = "spd";
    Ok(p)
}

/// Probability that sign-binned homodyning reports the correct `σ_φ`
/// eigenvalue: `(1 + √(2η/π)) / 2`.
pub fn homodyne_success(eta_hom: f64) -> f64 {
    0.5 * (1.0 + (2.0 * eta_hom / std::f64::consts::PI).sqrt())
}

/// Sign-binned homodyne detection at phase `phi`, as a symmetric flip error
/// on the equatorial axis `cos φ σ_x + sin φ σ_y`.
pub fn homodyne_povm(phi: f64, eta_hom: f64) -> Result<TwoOutcomePOVM> {
    check_unit("eta_hom", eta_hom)?;
    let p = homodyne_success(eta_hom);
    let mut povm = efficiency_povm(BlochAxis::equatorial(phi), p, p)?;
    povm.label = "homodyne";
    Ok(povm)
}

/// Closed-form no-click element of a detector with efficiency `eta_spd`
/// after a real displacement `alpha`, in the `{|0⟩, |1⟩}` block:
/// `e^{-ηα²} [[1, ηα], [ηα, η²α² + 1 - η]]`.
pub fn displaced_noclick(alpha: f64, eta_spd: f64) -> CMatrix {
    let eta = eta_spd;
    let w = (-eta * alpha * alpha).exp();
    let off = eta * alpha * w;
    let m = [w, off, off, (eta * eta * alpha * alpha + 1.0 - eta) * w];
    CMatrix::from_real(2, 2, &m).expect("2x2")
}

/// Displacement followed by single-photon detection. A click is outcome 0,
/// no click is outcome 1 (at `α = -1` the `|+⟩` state always clicks).
pub fn displaced_spd_povm(alpha: f64, eta_spd: f64) -> Result<TwoOutcomePOVM> {
    check_unit("eta_spd", eta_spd)?;
    if !alpha.is_finite() {
        return Err(Error::Invalid(format!("alpha = {alpha}")));
    }
    let noclick = displaced_noclick(alpha, eta_spd);
    Ok(TwoOutcomePOVM {
        m_down: &CMatrix::identity(2) - &noclick,
        m_up: noclick,
        label: "displaced-spd",
    })
}

/// Projective measurement along `axis` that loses the qubit with probability
/// `1 - eta`, reporting the loss as a third outcome.
pub fn lossy_threeoutcome_povm(axis: BlochAxis, eta: f64) -> Result<ThreeOutcomePOVM> {
    check_unit("eta", eta)?;
    let (plus, minus) = axis.projectors();
    Ok(ThreeOutcomePOVM {
        m_plus: plus.scale_re(eta),
        m_minus: minus.scale_re(eta),
        m_noclick: CMatrix::identity(2).scale_re(1.0 - eta),
    })
}

/// `σ_z`/`σ_x` measurements equivalent to ideal measurements after an
/// amplitude-damping channel with survival probability `eta`.
pub fn amplitude_damping_presets(eta: f64) -> Result<(TwoOutcomePOVM, TwoOutcomePOVM)> {
    check_unit("eta", eta)?;
    let ex = 0.5 * (1.0 + eta.sqrt());
    Ok((
        efficiency_povm(BlochAxis::z(), eta, 1.0)?,
        efficiency_povm(BlochAxis::x(), ex, ex)?,
    ))
}

/// `σ_z`/`σ_x` measurements equivalent to ideal measurements after a
/// dephasing channel that fully randomizes the phase with probability
/// `1 - eta`, so coherences shrink by `eta`.
pub fn dephasing_presets(eta: f64) -> Result<(TwoOutcomePOVM, TwoOutcomePOVM)> {
    check_unit("eta", eta)?;
    let ex = 0.5 * (1.0 + eta);
    Ok((
        efficiency_povm(BlochAxis::z(), 1.0, 1.0)?,
        efficiency_povm(BlochAxis::x(), ex, ex)?,
    ))
}

/// Normalized eigenvector of `n·σ` for the given outcome label.
pub fn axis_state(axis: BlochAxis, outcome: usize) -> [crate::qmat::C64; 2] {
    let (half_p, az) = (axis.polar / 2.0, axis.azimuth);
    let phase = crate::qmat::C64::from_polar(1.0, az);
    match outcome {
        0 => [c(half_p.cos(), 0.0), phase * half_p.sin()],
        _ => [c(-half_p.sin(), 0.0), phase * half_p.cos()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::C64;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn expect(m: &CMatrix, v: [C64; 2]) -> f64 {
        let mv = m.matvec(&v);
        (v[0].conj() * mv[0] + v[1].conj() * mv[1]).re
    }

    fn plus() -> [C64; 2] {
        let s = 0.5f64.sqrt();
        [c(s, 0.0), c(s, 0.0)]
    }

    fn minus() -> [C64; 2] {
        let s = 0.5f64.sqrt();
        [c(s, 0.0), c(-s, 0.0)]
    }

    #[test]
    fn ideal_z_is_projective() {
        let p = efficiency_povm(BlochAxis::z(), 1.0, 1.0).unwrap();
        assert!(p.m_up.max_abs_diff(&CMatrix::diag(&[0.0, 1.0])) < 1e-15);
        assert!(p.m_down.max_abs_diff(&CMatrix::diag(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn spd_model() {
        let p = spd_povm(0.7).unwrap();
        let vac = [c(1.0, 0.0), c(0.0, 0.0)];
        let one = [c(0.0, 0.0), c(1.0, 0.0)];
        assert_abs_diff_eq!(expect(&p.m_up, vac), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(expect(&p.m_up, one), 0.7, epsilon = 1e-15);
    }

    #[test]
    fn symmetric_flip_model() {
        let p = efficiency_povm(BlochAxis::x(), 0.8, 0.8).unwrap();
        assert_abs_diff_eq!(expect(&p.m_down, minus()), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(expect(&p.m_up, plus()), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(expect(&p.m_down, plus()), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn efficiency_range_checked() {
        assert!(efficiency_povm(BlochAxis::z(), 1.1, 1.0).is_err());
        assert!(efficiency_povm(BlochAxis::z(), 0.5, -0.1).is_err());
        assert!(homodyne_povm(0.0, 2.0).is_err());
        assert!(displaced_spd_povm(-1.0, 1.5).is_err());
        assert!(lossy_threeoutcome_povm(BlochAxis::x(), -1.0).is_err());
    }

    #[test]
    fn homodyne_success_probability() {
        let p = homodyne_povm(0.0, 1.0).unwrap();
        let ok = expect(&p.m_down, plus());
        assert_abs_diff_eq!(ok, 0.5 * (1.0 + (2.0 / std::f64::consts::PI).sqrt()), epsilon = 1e-15);
        assert!((ok - 0.899).abs() < 5e-4);
        assert_abs_diff_eq!(expect(&p.m_up, minus()), ok, epsilon = 1e-15);

        let noise = homodyne_povm(0.4, 0.0).unwrap();
        assert!(noise.m_up.max_abs_diff(&CMatrix::identity(2).scale_re(0.5)) < 1e-15);

        let y = homodyne_povm(std::f64::consts::FRAC_PI_2, 1.0).unwrap();
        let yp = [c(0.5f64.sqrt(), 0.0), c(0.0, 0.5f64.sqrt())];
        assert_abs_diff_eq!(expect(&y.m_down, yp), ok, epsilon = 1e-15);
    }

    #[test]
    fn displacement_at_minus_one() {
        let p = displaced_spd_povm(-1.0, 1.0).unwrap();
        assert_abs_diff_eq!(expect(&p.m_up, plus()), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(expect(&p.m_up, minus()), 2.0 / std::f64::consts::E, epsilon = 1e-15);
    }

    #[test]
    fn displacement_zero_is_spd() {
        for &eta in &[0.2, 0.6, 1.0] {
            let e0 = displaced_noclick(0.0, eta);
            assert!(e0.max_abs_diff(&CMatrix::diag(&[1.0, 1.0 - eta])) < 1e-15);
        }
    }

    #[test]
    fn displacement_lossy_closed_form() {
        for &alpha in &[-2.1, -1.0, -0.4, 0.3, 1.7] {
            for &eta in &[0.25, 0.6, 0.9, 1.0] {
                let e0 = displaced_noclick(alpha, eta);
                let w = (-eta * alpha * alpha).exp();
                let pp = 0.5 * w * ((1.0 + eta * alpha).powi(2) + 1.0 - eta);
                let pm = 0.5 * w * ((1.0 - eta * alpha).powi(2) + 1.0 - eta);
                assert_abs_diff_eq!(expect(&e0, plus()), pp, epsilon = 1e-14);
                assert_abs_diff_eq!(expect(&e0, minus()), pm, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn three_outcome_elements() {
        let ideal = lossy_threeoutcome_povm(BlochAxis::z(), 1.0).unwrap();
        assert!(ideal.m_noclick.max_abs_diff(&CMatrix::zeros(2, 2)) < 1e-15);
        let lossy = lossy_threeoutcome_povm(BlochAxis::x(), 0.8).unwrap();
        assert!(lossy.m_noclick.max_abs_diff(&CMatrix::identity(2).scale_re(0.2)) < 1e-15);
        lossy.check_invariants().unwrap();
    }

    #[test]
    fn axis_states_are_eigenvectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let axis = BlochAxis::new(rng.gen_range(0.0..3.2), rng.gen_range(-3.2..3.2));
            let (p0, p1) = axis.projectors();
            assert_abs_diff_eq!(expect(&p0, axis_state(axis, 0)), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(expect(&p1, axis_state(axis, 1)), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_constructors_are_valid_povms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let axis = BlochAxis::new(rng.gen_range(0.0..3.2), rng.gen_range(-3.2..3.2));
            let (a, b) = (rng.gen::<f64>(), rng.gen::<f64>());
            efficiency_povm(axis, a, b).unwrap().check_invariants().unwrap();
            homodyne_povm(rng.gen_range(-3.2..3.2), a).unwrap().check_invariants().unwrap();
            displaced_spd_povm(rng.gen_range(-3.0..3.0), b).unwrap().check_invariants().unwrap();
            lossy_threeoutcome_povm(axis, a).unwrap().check_invariants().unwrap();
        }
    }

    /// Kraus pair of the qubit amplitude-damping channel.
    fn ad_kraus(eta: f64) -> [CMatrix; 2] {
        [
            CMatrix::diag(&[1.0, eta.sqrt()]),
            CMatrix::from_real(2, 2, &[0.0, (1.0 - eta).sqrt(), 0.0, 0.0]).unwrap(),
        ]
    }

    fn adjoint_channel(kraus: &[CMatrix], m: &CMatrix) -> CMatrix {
        kraus.iter().fold(CMatrix::zeros(2, 2), |acc, k| &acc + &(&(&k.adjoint() * m) * k))
    }

    #[test]
    fn amplitude_damping_equivalence() {
        for &eta in &[0.0, 0.3, 0.55, 0.8, 1.0] {
            let kraus = ad_kraus(eta);
            let (z, x) = amplitude_damping_presets(eta).unwrap();
            let (z0, z1) = BlochAxis::z().projectors();
            let (x0, x1) = BlochAxis::x().projectors();
            assert!(z.m_down.max_abs_diff(&adjoint_channel(&kraus, &z0)) < 1e-12);
            assert!(z.m_up.max_abs_diff(&adjoint_channel(&kraus, &z1)) < 1e-12);
            assert!(x.m_down.max_abs_diff(&adjoint_channel(&kraus, &x0)) < 1e-12);
            assert!(x.m_up.max_abs_diff(&adjoint_channel(&kraus, &x1)) < 1e-12);
        }
    }

    #[test]
    fn dephasing_equivalence_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let eta = rng.gen::<f64>();
            let v = [c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))];
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            let v = [v[0] / norm, v[1] / norm];
            let rho = CMatrix::outer(&v);
            // full phase randomization with probability 1 - eta
            let z = pauli::z();
            let dephased =
                &rho.scale_re(0.5 * (1.0 + eta)) + &(&(&z * &rho) * &z).scale_re(0.5 * (1.0 - eta));
            let (zm, xm) = dephasing_presets(eta).unwrap();
            for (noisy, ideal) in [(zm, BlochAxis::z()), (xm, BlochAxis::x())] {
                let (p0, _) = ideal.projectors();
                let direct = (&dephased * &p0).trace().re;
                let via_povm = (&rho * &noisy.m_down).trace().re;
                assert_abs_diff_eq!(direct, via_povm, epsilon = 1e-12);
            }
        }
    }

    /// `exp(g)` for a real matrix via scaling and squaring.
    fn expm(g: &[f64], n: usize) -> Vec<f64> {
        let norm: f64 = g.iter().map(|x| x.abs()).sum();
        let squarings = (norm.log2().ceil().max(0.0) as u32) + 4;
        let s = 0.5f64.powi(squarings as i32);
        let a: Vec<f64> = g.iter().map(|x| x * s).collect();
        let mul = |x: &[f64], y: &[f64]| {
            let mut out = vec![0.0; n * n];
            for i in 0..n {
                for k in 0..n {
                    let xik = x[i * n + k];
                    if xik == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        out[i * n + j] += xik * y[k * n + j];
                    }
                }
            }
            out
        };
        let mut result = vec![0.0; n * n];
        let mut term = vec![0.0; n * n];
        for i in 0..n {
            result[i * n + i] = 1.0;
            term[i * n + i] = 1.0;
        }
        for k in 1..30 {
            term = mul(&term, &a).iter().map(|x| x / k as f64).collect();
            for (r, t) in result.iter_mut().zip(&term) {
                *r += t;
            }
        }
        for _ in 0..squarings {
            result = mul(&result, &result);
        }
        result
    }

    /// No-click element from a truncated Fock-space model: the field is
    /// displaced by `-α` (so a no-click projects onto `|α⟩`) and a detector
    /// of efficiency `η` fails to click on `|n⟩` with probability `(1-η)^n`.
    fn fock_noclick(alpha: f64, eta: f64) -> CMatrix {
        const BIG: usize = 90;
        const N_MAX: usize = 40;
        let mut gen = vec![0.0; BIG * BIG];
        // -α (a† - a)
        for n in 0..BIG - 1 {
            let s = ((n + 1) as f64).sqrt();
            gen[(n + 1) * BIG + n] = -alpha * s;
            gen[n * BIG + n + 1] = alpha * s;
        }
        let d = expm(&gen, BIG);
        let mut e = [0.0; 4];
        for n in 0..=N_MAX {
            let w = (1.0 - eta).powi(n as i32);
            for i in 0..2 {
                for j in 0..2 {
                    e[i * 2 + j] += w * d[n * BIG + i] * d[n * BIG + j];
                }
            }
        }
        CMatrix::from_real(2, 2, &e).unwrap()
    }

    #[test]
    fn displaced_closed_form_matches_fock_oracle() {
        for &eta in &[0.3, 0.7, 1.0] {
            for k in 0..=24 {
                let alpha = -3.0 + 0.25 * k as f64;
                let oracle = fock_noclick(alpha, eta);
                let closed = displaced_noclick(alpha, eta);
                let diff = oracle.max_abs_diff(&closed);
                assert!(diff < 1e-10, "alpha={alpha} eta={eta} diff={diff:e}");
            }
        }
    }
}
