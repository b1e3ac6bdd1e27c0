//! One-dimensional root bracketing and adaptive quadrature.

use crate::real::{lit, Real};

/// Why a bracketed root search stopped without a root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RootFail<T> {
    /// The function left its domain before changing sign; holds the last valid abscissa.
    Edge(T),
    /// The search hit a caller-imposed bound without a sign change.
    Bound(T),
    /// The starting point is outside the domain.
    Start,
    /// Iteration limit reached.
    Stalled,
}

/// Search direction and limits for [`solve_monotone`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct Search<T> {
    pub x0: T,
    pub step: T,
    pub lo: Option<T>,
    pub hi: Option<T>,
    pub decreasing: bool,
    pub tol_x: T,
}

impl<T: Real> Search<T> {
    pub fn new(x0: T, step: T) -> Self {
        Search {
            x0,
            step,
            lo: None,
            hi: None,
            decreasing: false,
            tol_x: T::zero(),
        }
    }

    pub fn decreasing(mut self) -> Self {
        self.decreasing = true;
        self
    }

    pub fn lo(mut self, lo: T) -> Self {
        self.lo = Some(lo);
        self
    }

    pub fn hi(mut self, hi: T) -> Self {
        self.hi = Some(hi);
        self
    }
}

/// Root of a monotone function that may be undefined outside an interval.
///
/// `f` returns `None` outside its domain. The bracket is grown geometrically from
/// `x0`, then refined by Illinois false position with bisection safeguards until the
/// bracket stops shrinking (or falls below `tol_x`).
pub(crate) fn solve_monotone<T, F>(mut f: F, s: Search<T>) -> Result<T, RootFail<T>>
where
    T: Real,
    F: FnMut(T) -> Option<T>,
{
    let sign = if s.decreasing { -T::one() } else { T::one() };
    let mut g = |x: T| f(x).map(|y| sign * y);
    let clamp = |x: T| {
        let x = match s.lo {
            Some(lo) if x < lo => lo,
            _ => x,
        };
        match s.hi {
            Some(hi) if x > hi => hi,
            _ => x,
        }
    };
    let x0 = clamp(s.x0);
    let f0 = g(x0).ok_or(RootFail::Start)?;
    if f0 == T::zero() {
        return Ok(x0);
    }
    let dir = if f0 < T::zero() { T::one() } else { -T::one() };
    let (mut xa, mut fa) = (x0, f0);
    let mut step = if s.step > T::zero() { s.step } else { lit(1e-3) };
    let bracket = 'expand: {
        for _ in 0..200 {
            let xb = clamp(xa + dir * step);
            if xb == xa {
                return Err(RootFail::Bound(xa));
            }
            match g(xb) {
                Some(fb) if fb == T::zero() => return Ok(xb),
                Some(fb) if (fb > T::zero()) != (fa > T::zero()) => break 'expand (xa, fa, xb, fb),
                Some(fb) => {
                    xa = xb;
                    fa = fb;
                    step = step + step;
                }
                None => {
                    let mut xbad = xb;
                    for _ in 0..200 {
                        let xm = xa + (xbad - xa) * lit(0.5);
                        if xm == xa || xm == xbad {
                            break;
                        }
                        match g(xm) {
                            None => xbad = xm,
                            Some(fm) if fm == T::zero() => return Ok(xm),
                            Some(fm) if (fm > T::zero()) != (fa > T::zero()) => break 'expand (xa, fa, xm, fm),
                            Some(fm) => {
                                xa = xm;
                                fa = fm;
                            }
                        }
                    }
                    return Err(RootFail::Edge(xa));
                }
            }
        }
        return Err(RootFail::Stalled);
    };
    refine(&mut g, bracket, s.tol_x)
}

fn refine<T, G>(g: &mut G, (mut a, mut fa, mut b, mut fb): (T, T, T, T), tol_x: T) -> Result<T, RootFail<T>>
where
    T: Real,
    G: FnMut(T) -> Option<T>,
{
    let half = lit::<T>(0.5);
    let mut last_side = 0i8;
    let mut slow = 0u8;
    for _ in 0..400 {
        let width = (b - a).abs();
        let mid = a + (b - a) * half;
        if width <= tol_x || mid == a || mid == b {
            break;
        }
        let mut x = a - fa * (b - a) / (fb - fa);
        if slow >= 2 || !(x > a.min(b) && x < a.max(b)) {
            x = mid;
            slow = 0;
        }
        let fx = g(x).ok_or(RootFail::Stalled)?;
        if fx == T::zero() {
            return Ok(x);
        }
        if (fx > T::zero()) == (fa > T::zero()) {
            a = x;
            fa = fx;
            if last_side == -1 {
                fb = fb * half;
            }
            last_side = -1;
        } else {
            b = x;
            fb = fx;
            if last_side == 1 {
                fa = fa * half;
            }
            last_side = 1;
        }
        if (b - a).abs() > width * half {
            slow += 1;
        } else {
            slow = 0;
        }
    }
    // Re-evaluate the unscaled endpoint values before choosing the closer one.
    let ea = g(a).map(|v| v.abs()).unwrap_or(T::infinity());
    let eb = g(b).map(|v| v.abs()).unwrap_or(T::infinity());
    Ok(if ea <= eb { a } else { b })
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<T, F>(f: &mut F, a: T, b: T, tol: T) -> T
where
    T: Real,
    F: FnMut(T) -> T,
{
    let fa = f(a);
    let fb = f(b);
    let m = (a + b) * lit(0.5);
    let fm = f(m);
    let whole = (b - a) / lit(6.0) * (fa + lit::<T>(4.0) * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<T, F>(f: &mut F, a: T, b: T, fa: T, fm: T, fb: T, whole: T, tol: T, depth: u32) -> T
where
    T: Real,
    F: FnMut(T) -> T,
{
    let m = (a + b) * lit(0.5);
    let lm = (a + m) * lit(0.5);
    let rm = (m + b) * lit(0.5);
    let flm = f(lm);
    let frm = f(rm);
    let six = lit::<T>(6.0);
    let four = lit::<T>(4.0);
    let left = (m - a) / six * (fa + four * flm + fm);
    let right = (b - m) / six * (fm + four * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= lit::<T>(15.0) * tol {
        return left + right + delta / lit(15.0);
    }
    let half_tol = tol * lit(0.5);
    simpson_step(f, a, m, fa, flm, fm, left, half_tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, half_tol, depth - 1)
}

/// Three-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss3<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T) -> T {
    let c = (a + b) * lit(0.5);
    let h = (b - a) * lit(0.5);
    let x = lit::<T>(0.6).sqrt();
    let w0 = lit::<T>(8.0 / 9.0);
    let w1 = lit::<T>(5.0 / 9.0);
    h * (w0 * f(c) + w1 * (f(c - h * x) + f(c + h * x)))
}
