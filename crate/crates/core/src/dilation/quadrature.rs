use num_complex::Complex64;

const MAX_DEPTH: u32 = 50;

/// Adaptive Simpson integration of a complex integrand over `[a, b]`.
///
/// The interval is first cut into `panels` equal pieces so that oscillatory
/// integrands cannot fool the first coarse estimate; the absolute tolerance
/// is shared between panels.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64, panels: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let panel_tol = tol / panels as f64;
    (0..panels)
        .map(|k| {
            let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (flo, fmid, fhi) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = simpson(lo, hi, flo, fmid, fhi);
            recurse(f, lo, hi, flo, fmid, fhi, whole, panel_tol, MAX_DEPTH)
        })
        .sum()
}

fn simpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_known_functions() {
        let f = |x: f64| Complex64::new(x.sin(), x * x);
        let got = adaptive_simpson(&f, 0.0, std::f64::consts::PI, 1e-12, 1);
        assert!((got - Complex64::new(2.0, std::f64::consts::PI.powi(3) / 3.0)).norm() < 1e-10);

        // ∫ e^{-iωt} over [-1, 1] = 2 sin(t)/t
        let t = 7.3;
        let g = |w: f64| Complex64::from_polar(1.0, -w * t);
        let got = adaptive_simpson(&g, -1.0, 1.0, 1e-12, 8);
        assert!((got.re - 2.0 * t.sin() / t).abs() < 1e-10);
        assert!(got.im.abs() < 1e-10);
    }
}
