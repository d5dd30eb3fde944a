//! Scalar root bracketing and refinement on a uniform grid.

use crate::scalar::Real;

/// A located root together with how it was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarRoot<T> {
    pub x: T,
    pub value: T,
    /// True when found as a near-tangential minimum of `|f|` rather than a sign change.
    pub tangential: bool,
}

/// Bisects a sign change of `f` on `[lo, hi]` until `|f| ≤ ftol` or the
/// bracket stops shrinking.
pub fn bisect<T: Real, F: Fn(T) -> T>(f: &F, mut lo: T, mut hi: T, ftol: T) -> (T, T) {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return (lo, flo);
    }
    if fhi == T::zero() {
        return (hi, fhi);
    }
    let mut best = if flo.abs() < fhi.abs() { (lo, flo) } else { (hi, fhi) };
    for _ in 0..200 {
        let mid = (lo + hi) * T::half();
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm.abs() < best.1.abs() {
            best = (mid, fm);
        }
        if fm.abs() <= ftol {
            break;
        }
        if (fm < T::zero()) == (flo < T::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    best
}

/// Golden-section minimization of `g` on `[lo, hi]`.
pub fn golden_min<T: Real, G: Fn(T) -> T>(g: &G, mut lo: T, mut hi: T, xtol: T) -> (T, T) {
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let mut x1 = hi - (hi - lo) * inv_phi;
    let mut x2 = lo + (hi - lo) * inv_phi;
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    for _ in 0..200 {
        if hi - lo <= xtol {
            break;
        }
        if g1 <= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - (hi - lo) * inv_phi;
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + (hi - lo) * inv_phi;
            g2 = g(x2);
        }
    }
    if g1 <= g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}

/// Scans `f` on `n` uniform interior points of `(lo, hi)` and returns every
/// root it can localize: sign changes refined by bisection to
/// `|f| ≤ ftol`, and local minima of `|f|` below `tangent_tol` polished by
/// golden-section search.
pub fn scan_roots<T: Real, F: Fn(T) -> T>(
    f: F,
    lo: T,
    hi: T,
    n: usize,
    ftol: T,
    tangent_tol: T,
) -> Vec<ScalarRoot<T>> {
    assert!(n >= 3, "scan needs at least three points");
    let h = (hi - lo) / T::lit((n + 1) as f64);
    let xs: Vec<T> = (1..=n).map(|k| lo + h * T::lit(k as f64)).collect();
    let fs: Vec<T> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();

    for k in 0..n - 1 {
        let (a, b) = (fs[k], fs[k + 1]);
        if a == T::zero() {
            roots.push(ScalarRoot { x: xs[k], value: a, tangential: false });
        } else if b != T::zero() && (a < T::zero()) != (b < T::zero()) {
            let (x, v) = bisect(&f, xs[k], xs[k + 1], ftol);
            roots.push(ScalarRoot { x, value: v, tangential: false });
        }
    }
    if fs[n - 1] == T::zero() {
        roots.push(ScalarRoot { x: xs[n - 1], value: T::zero(), tangential: false });
    }

    for k in 1..n - 1 {
        let (a, b, c) = (fs[k - 1].abs(), fs[k].abs(), fs[k + 1].abs());
        let same_sign = (fs[k - 1] < T::zero()) == (fs[k] < T::zero())
            && (fs[k] < T::zero()) == (fs[k + 1] < T::zero());
        if same_sign && b <= a && b <= c && b < tangent_tol {
            let (x, v) = golden_min(&|x| f(x).abs(), xs[k - 1], xs[k + 1], T::tol(1e-14));
            roots.push(ScalarRoot { x, value: v, tangential: true });
        }
    }
    roots.sort_by(|p, q| p.x.partial_cmp(&q.x).expect("finite roots"));
    roots
}
