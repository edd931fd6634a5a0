//! Bracketing root search used by every equilibrium solver.
//!
//! [`brent`] is a bracketing Brent iteration (inverse quadratic / secant
//! steps guarded by bisection). [`solve_on_log_price`] runs it on `ln p`
//! over the shared initial bracket, expanding geometrically when the
//! bracket holds no sign change.

use crate::error::{CawError, Result};
use crate::tolerances::{BRACKET_EXPANSIONS, BRACKET_GROWTH, BRACKET_HI, BRACKET_LO};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Brent's method on `[a, b]`, which must bracket a sign change.
///
/// Infinite function values are allowed and only contribute their sign;
/// steps involving them fall back to bisection. Terminates when the bracket
/// half-width drops below `(xtol + rtol·|x|)/2` or `f(x) == 0`.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64, rtol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let mut xpre = a;
    let mut xcur = b;
    let mut fpre = eval(&mut f, xpre)?;
    let mut fcur = eval(&mut f, xcur)?;
    if fpre == 0.0 {
        return Ok(Root {
            x: xpre,
            fx: fpre,
            iterations: 0,
        });
    }
    if fcur == 0.0 {
        return Ok(Root {
            x: xcur,
            fx: fcur,
            iterations: 0,
        });
    }
    if fpre.signum() == fcur.signum() {
        return Err(CawError::NoEquilibrium(format!(
            "no sign change on [{a:e}, {b:e}]"
        )));
    }

    let (mut xblk, mut fblk) = (0.0, 0.0);
    let (mut spre, mut scur) = (0.0, 0.0);

    for i in 0..max_iter {
        if fpre != 0.0 && fcur != 0.0 && fpre.signum() != fcur.signum() {
            xblk = xpre;
            fblk = fpre;
            spre = xcur - xpre;
            scur = spre;
        }
        if fblk.abs() < fcur.abs() {
            xpre = xcur;
            xcur = xblk;
            xblk = xpre;
            fpre = fcur;
            fcur = fblk;
            fblk = fpre;
        }

        let delta = (xtol + rtol * xcur.abs()) / 2.0;
        let sbis = (xblk - xcur) / 2.0;
        if fcur == 0.0 || sbis.abs() < delta {
            return Ok(Root {
                x: xcur,
                fx: fcur,
                iterations: i,
            });
        }

        let finite = fcur.is_finite() && fpre.is_finite() && fblk.is_finite();
        if finite && spre.abs() > delta && fcur.abs() < fpre.abs() {
            let stry = if xpre == xblk {
                -fcur * (xcur - xpre) / (fcur - fpre)
            } else {
                let dpre = (fpre - fcur) / (xpre - xcur);
                let dblk = (fblk - fcur) / (xblk - xcur);
                -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            };
            if 2.0 * stry.abs() < spre.abs().min(3.0 * sbis.abs() - delta) {
                spre = scur;
                scur = stry;
            } else {
                spre = sbis;
                scur = sbis;
            }
        } else {
            spre = sbis;
            scur = sbis;
        }

        xpre = xcur;
        fpre = fcur;
        if scur.abs() > delta {
            xcur += scur;
        } else {
            xcur += if sbis > 0.0 { delta } else { -delta };
        }
        fcur = eval(&mut f, xcur)?;
    }

    Err(CawError::NoConvergence {
        iterations: max_iter,
        residual: fcur.abs(),
    })
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_nan() {
        return Err(CawError::invalid(format!("function is NaN at {x:e}")));
    }
    Ok(y)
}

/// Finds a `ln p` bracket with a sign change of `g`, starting from
/// `[ln 1e-9, ln 1e9]` and widening by `1e9` on each side up to three times.
pub fn log_price_bracket<G>(g: &mut G) -> Result<(f64, f64)>
where
    G: FnMut(f64) -> f64,
{
    let mut lo = BRACKET_LO.ln();
    let mut hi = BRACKET_HI.ln();
    let step = BRACKET_GROWTH.ln();
    for expansion in 0..=BRACKET_EXPANSIONS {
        let glo = eval(g, lo)?;
        let ghi = eval(g, hi)?;
        if glo == 0.0 || ghi == 0.0 || glo.signum() != ghi.signum() {
            return Ok((lo, hi));
        }
        if expansion < BRACKET_EXPANSIONS {
            lo -= step;
            hi += step;
        }
    }
    Err(CawError::NoEquilibrium(format!(
        "excess demand has no sign change on [{:e}, {:e}]",
        lo.exp(),
        hi.exp()
    )))
}

/// Root of `f(p)` over positive prices, searched on `ln p`.
///
/// `rtol` is the relative price tolerance. The returned `Root::x` is the
/// price itself, not its logarithm.
pub fn solve_on_log_price<F>(mut f: F, rtol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let mut g = |x: f64| f(x.exp());
    let (lo, hi) = log_price_bracket(&mut g)?;
    let root = brent(&mut g, lo, hi, rtol, 4.0 * f64::EPSILON, max_iter)?;
    Ok(Root {
        x: root.x.exp(),
        ..root
    })
}
