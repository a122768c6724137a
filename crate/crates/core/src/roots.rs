//! Scalar root finding: Brent's method plus a geometric bracket search.


#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootError {
    /// f(a) and f(b) have the same sign.
    NotBracketed,
    /// Iteration budget exhausted before reaching tolerance.
    MaxIterations,
}

impl core::fmt::Display for RootError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RootError::NotBracketed => write!(f, "root not bracketed"),
            RootError::MaxIterations => write!(f, "root finder hit iteration limit"),
        }
    }
}

/// Brent root finder on [a, b]. Requires f(a) * f(b) <= 0. `tol` is an
/// absolute tolerance on the abscissa; machine precision sets the floor.
pub fn brent(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64, max_iter: usize) -> Result<f64, RootError> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa * fb > 0.0 {
        return Err(RootError::NotBracketed);
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic / secant step
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += if xm >= 0.0 { tol1 } else { -tol1 };
        }
        fb = f(b);
    }
    Err(RootError::MaxIterations)
}

/// Grows [hi * factor, hi] downward (both endpoints negative) until f changes
/// sign, returning the bracketing pair. Used for energy searches on the
/// negative half-line.
pub fn bracket_downward(
    mut f: impl FnMut(f64) -> f64,
    hi: f64,
    factor: f64,
    max_steps: usize,
) -> Option<(f64, f64)> {
    assert!(hi < 0.0 && factor > 1.0);
    let fhi = f(hi);
    let mut lo = hi * factor;
    for _ in 0..max_steps {
        if f(lo) * fhi <= 0.0 {
            return Some((lo, hi));
        }
        lo *= factor;
        if !lo.is_finite() {
            return None;
        }
    }
    None
}
