//! Scalar root bracketing and line minimization.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimization of `f` on `[lo, hi]` until the bracket is
/// narrower than `tol`. Returns the best point seen and its value.
pub fn golden_section_min(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

/// Bisection for a sign change of `f` on `[lo, hi]`, given `f(lo)` and `f(hi)`
/// of strictly opposite sign. Stops once the bracket is narrower than `tol`.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let lo_negative = f(lo) < 0.0;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2) - 2.0 * x, -1.0, 2.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-7);
        assert!((fx - (1.0 - 2.6)).abs() < 1e-14);
    }

    #[test]
    fn golden_handles_boundary_minimum() {
        let (x, _) = golden_section_min(|x| x, 0.0, 1.0, 1e-9);
        assert!(x < 1e-8);
    }

    #[test]
    fn bisect_sqrt2() {
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12);
        assert!((x - 2f64.sqrt()).abs() < 1e-11);
        let y = bisect(|x| 2.0 - x * x, 0.0, 2.0, 1e-12);
        assert!((y - 2f64.sqrt()).abs() < 1e-11);
    }
}
