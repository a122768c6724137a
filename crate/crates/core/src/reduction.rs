//! Reduction of the symmetric multispinor wave equation to its dynamical
//! content.
//!
//! One slot of the rank-`two_s` symmetric tensor carries the full
//! four-component wave operator while every other slot is projected onto
//! its upper pair. Stacking the `two_s` slot operators and counting kernel
//! dimensions on and off the single-particle mass shell isolates how many
//! components propagate: the all-upper sector collapses to `two_s + 1`
//! independent amplitudes, each single-lower component is determined by
//! them, and anything with two or more lower labels never enters.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use rand::Rng;

use crate::linalg::CMatrix;
use crate::spinor::{sigma_dot, SpinorError};
use crate::symmetric::{split_index, SymmetricBasis};

/// Four-component wave operator at energy `e` and momentum `p` for a
/// particle of mass `m` in a constant background potential `u0`. Upper rows
/// couple upper components to the auxiliary pair; lower rows enforce the
/// constraint that fixes the auxiliary pair.
pub fn wave_operator(e: f64, p: [f64; 3], u0: f64, m: f64) -> CMatrix {
    let sp = sigma_dot(p);
    let mut g = CMatrix::zeros(4, 4);
    let a = Complex64::new(e - u0, 0.0);
    let two_m = Complex64::new(2.0 * m, 0.0);
    for r in 0..2 {
        g[(r, r)] = a;
        g[(r + 2, r + 2)] = two_m;
        for c in 0..2 {
            g[(r, c + 2)] = -sp[(r, c)];
            g[(r + 2, c)] = -sp[(r, c)];
        }
    }
    g
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub two_s: u32,
    pub symmetric_dim: usize,
    /// Kernel dimension of the stacked slot operators at on-shell energy.
    pub on_shell_kernel: usize,
    /// Kernel dimension off shell; equals the inert sector alone.
    pub off_shell_kernel: usize,
    /// `on_shell_kernel - off_shell_kernel`: amplitudes that actually
    /// propagate. Expected `two_s + 1`.
    pub independent_upper: usize,
    /// Basis vectors with exactly one auxiliary label. Expected `2 * two_s`.
    pub constrained_lower: usize,
    /// Basis vectors with two or more auxiliary labels.
    pub inert_dim: usize,
    pub inert_matches_off_shell: bool,
    /// Worst relative residual of the explicit on-shell solution built from
    /// a random upper-sector amplitude.
    pub dispersion_residual: f64,
}

struct SlotSetup {
    basis: SymmetricBasis,
    slots: usize,
}

impl SlotSetup {
    fn new(two_s: u32) -> Result<SlotSetup, SpinorError> {
        let basis = SymmetricBasis::build(two_s)?;
        Ok(SlotSetup {
            slots: two_s as usize,
            basis,
        })
    }

    /// Applies the slot-`i` operator (wave operator at slot `i`, upper
    /// projector elsewhere) to a dense product-space vector.
    fn apply_slot(&self, g: &CMatrix, slot: usize, dense: &[Complex64]) -> Vec<Complex64> {
        let dim = self.basis.product_dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        let weight = 1usize << (2 * (self.slots - 1 - slot));
        'index: for (idx, &v) in dense.iter().enumerate() {
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let labels = split_index(idx, self.slots);
            for (j, &lab) in labels.iter().enumerate() {
                if j != slot && lab >= 2 {
                    continue 'index;
                }
            }
            let from = labels[slot];
            for to in 0..4 {
                let gv = g[(to, from)];
                if gv.norm_sqr() == 0.0 {
                    continue;
                }
                let target = (idx as isize + (to as isize - from as isize) * weight as isize)
                    as usize;
                out[target] += gv * v;
            }
        }
        out
    }

    /// The slot operator restricted to the symmetric basis, one column per
    /// basis vector.
    fn slot_matrix(&self, g: &CMatrix, slot: usize) -> CMatrix {
        let dim = self.basis.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (beta, v) in self.basis.vectors.iter().enumerate() {
            let mut dense = vec![Complex64::new(0.0, 0.0); self.basis.product_dim()];
            let c = Complex64::new(v.coeff, 0.0);
            for &i in &v.support {
                dense[i] = c;
            }
            let image = self.apply_slot(g, slot, &dense);
            for (alpha, w) in self.basis.vectors.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for &i in &w.support {
                    acc += image[i];
                }
                m[(alpha, beta)] = acc * w.coeff;
            }
        }
        m
    }

    /// All slot operators stacked vertically.
    fn stacked(&self, g: &CMatrix) -> CMatrix {
        let dim = self.basis.dim();
        let mut out = CMatrix::zeros(dim * self.slots, dim);
        for slot in 0..self.slots {
            let m = self.slot_matrix(g, slot);
            for r in 0..dim {
                for c in 0..dim {
                    out[(slot * dim + r, c)] = m[(r, c)];
                }
            }
        }
        out
    }
}

/// Builds the explicit on-shell solution from random upper-sector
/// amplitudes and returns its worst slot-equation residual relative to the
/// solution's own scale.
fn explicit_solution_residual(
    setup: &SlotSetup,
    p: [f64; 3],
    u0: f64,
    m: f64,
    rng: &mut impl Rng,
) -> f64 {
    let slots = setup.slots;
    let dim = setup.basis.product_dim();
    let sp = sigma_dot(p);
    let mut dense = vec![Complex64::new(0.0, 0.0); dim];

    for v in &setup.basis.vectors {
        if v.lower_count() != 0 {
            continue;
        }
        let amp = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let c = amp * v.coeff;
        for &i in &v.support {
            dense[i] = c;
        }
    }

    // Each single-lower component is the constraint image of the all-upper
    // sector through sigma.p / (2m) at its lower slot.
    for idx in 0..dim {
        let labels = split_index(idx, slots);
        let mut lower_slot = None;
        let mut ok = true;
        for (j, &lab) in labels.iter().enumerate() {
            if lab >= 2 {
                if lower_slot.is_some() {
                    ok = false;
                    break;
                }
                lower_slot = Some(j);
            }
        }
        let (Some(j), true) = (lower_slot, ok) else { continue };
        let weight = 1usize << (2 * (slots - 1 - j));
        let r = labels[j] - 2;
        let mut val = Complex64::new(0.0, 0.0);
        for b in 0..2 {
            let upper_idx =
                (idx as isize + (b as isize - labels[j] as isize) * weight as isize) as usize;
            val += sp[(r, b)] * dense[upper_idx];
        }
        dense[idx] = val / (2.0 * m);
    }

    let e_on = u0 + (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / (2.0 * m);
    let g = wave_operator(e_on, p, u0, m);
    let scale = dense.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let mut worst = 0.0_f64;
    for slot in 0..slots {
        let image = setup.apply_slot(&g, slot, &dense);
        for z in image {
            worst = worst.max(z.norm());
        }
    }
    worst / scale
}

/// Counts dynamical content for spin `two_s / 2` using random kinematics
/// drawn from `rng`. Supported for `1 <= two_s <= 8`.
pub fn reduction_check(two_s: u32, rng: &mut impl Rng) -> Result<ReductionReport, SpinorError> {
    let setup = SlotSetup::new(two_s)?;
    let p = [
        rng.gen_range(-1.5..1.5),
        rng.gen_range(-1.5..1.5),
        rng.gen_range(-1.5..1.5),
    ];
    let m = rng.gen_range(0.5..2.0);
    let u0 = rng.gen_range(-1.0..1.0);
    let e_on = u0 + (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / (2.0 * m);
    let e_off = e_on + 0.7 * (1.0 + rng.gen_range(0.0..0.5));

    let dim = setup.basis.dim();
    let rank_on = setup.stacked(&wave_operator(e_on, p, u0, m)).rank();
    let rank_off = setup.stacked(&wave_operator(e_off, p, u0, m)).rank();
    let on_shell_kernel = dim - rank_on;
    let off_shell_kernel = dim - rank_off;

    let (_, one_lower, inert) = setup.basis.sector_counts();

    let mut dispersion_residual = 0.0_f64;
    for _ in 0..4 {
        let p = [
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
        ];
        let m = rng.gen_range(0.5..2.0);
        let u0 = rng.gen_range(-1.0..1.0);
        dispersion_residual =
            dispersion_residual.max(explicit_solution_residual(&setup, p, u0, m, rng));
    }

    Ok(ReductionReport {
        two_s,
        symmetric_dim: dim,
        on_shell_kernel,
        off_shell_kernel,
        independent_upper: on_shell_kernel - off_shell_kernel,
        constrained_lower: one_lower,
        inert_dim: inert,
        inert_matches_off_shell: off_shell_kernel == inert,
        dispersion_residual,
    })
}
