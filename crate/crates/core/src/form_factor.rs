//! Momentum-space regulator families for the separable interaction.
//!
//! All families are normalized to f(0) = 1 and depend on momentum only
//! through p/cutoff, so rescaling the cutoff is a pure change of units:
//! f_{c*cutoff}(c*p) = f_cutoff(p) exactly.

use core::f64::consts::PI;
// The test harness links std, whose inherent f64 methods shadow the trait.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormFactorFamily {
    /// 1 for p <= cutoff, 0 above. Discontinuous; compact support.
    SharpCutoff,
    /// exp(-p^2 / cutoff^2).
    Gaussian,
    /// 1 / (1 + p^2 / cutoff^2).
    Rational,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormFactor {
    pub family: FormFactorFamily,
    pub cutoff: f64,
}

impl FormFactor {
    pub fn new(family: FormFactorFamily, cutoff: f64) -> Self {
        assert!(
            cutoff.is_finite() && cutoff > 0.0,
            "form factor cutoff must be positive and finite"
        );
        FormFactor { family, cutoff }
    }

    /// f(p) for radial momentum p >= 0.
    pub fn eval(&self, p: f64) -> f64 {
        assert!(p >= 0.0, "form factor evaluated at negative momentum");
        let x2 = (p / self.cutoff) * (p / self.cutoff);
        match self.family {
            FormFactorFamily::SharpCutoff => {
                if p <= self.cutoff {
                    1.0
                } else {
                    0.0
                }
            }
            FormFactorFamily::Gaussian => (-x2).exp(),
            FormFactorFamily::Rational => 1.0 / (1.0 + x2),
        }
    }

    /// |f(p)|^2, written to stay finite as p -> infinity under the
    /// semi-infinite quadrature mapping.
    pub fn eval_sq(&self, p: f64) -> f64 {
        assert!(p >= 0.0, "form factor evaluated at negative momentum");
        match self.family {
            FormFactorFamily::SharpCutoff => {
                if p <= self.cutoff {
                    1.0
                } else {
                    0.0
                }
            }
            FormFactorFamily::Gaussian => {
                let x2 = (p / self.cutoff) * (p / self.cutoff);
                (-2.0 * x2).exp()
            }
            FormFactorFamily::Rational => {
                let l2 = self.cutoff * self.cutoff;
                let r = l2 / (l2 + p * p);
                r * r
            }
        }
    }

    /// Closed form of (1/2 pi^2) * int_0^inf p^2 |f(p)|^2 dp, the momentum-space
    /// norm entering the binding threshold.
    pub fn norm_sq_integral(&self) -> f64 {
        let l3 = self.cutoff * self.cutoff * self.cutoff;
        match self.family {
            FormFactorFamily::SharpCutoff => l3 / (6.0 * PI * PI),
            // int p^2 exp(-2 p^2/L^2) dp = sqrt(pi) L^3 / (8 sqrt(2))
            FormFactorFamily::Gaussian => l3 * PI.sqrt() / (16.0 * (2.0f64).sqrt() * PI * PI),
            // int p^2 / (1 + p^2/L^2)^2 dp = pi L^3 / 4
            FormFactorFamily::Rational => l3 / (8.0 * PI),
        }
    }

    /// Whether int_0^inf p^n |f(p)|^2 dp converges. The rational family decays
    /// only as p^-4, so its moments stop at n = 2; the divergence bookkeeping
    /// in the radial integrals consults this before quoting a bare moment.
    pub fn has_finite_moment(&self, n: u32) -> bool {
        match self.family {
            FormFactorFamily::SharpCutoff | FormFactorFamily::Gaussian => true,
            FormFactorFamily::Rational => n <= 2,
        }
    }

    /// Upper edge of the support, when compact.
    pub fn support_upper(&self) -> Option<f64> {
        match self.family {
            FormFactorFamily::SharpCutoff => Some(self.cutoff),
            _ => None,
        }
    }
}
