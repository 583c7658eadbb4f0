//! Deterministic Nelder-Mead simplex minimization with an optional
//! projection hook for box constraints.
//!
//! Standard coefficients (reflect 1, expand 2, contract 0.5, shrink 0.5).
//! Every proposed vertex is passed through `project` before evaluation, so
//! box-constrained callers fold proposals back into the feasible region and
//! boundary optima stay reachable. Ties sort stably, NaN objective values
//! order as worst, and no randomness is used: given identical inputs the
//! trajectory is bitwise reproducible.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy)]
pub struct NmOptions {
    pub max_iters: usize,
    /// Terminate when max - min objective over the simplex drops below this.
    pub f_tol: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        NmOptions { max_iters: 500, f_tol: 1e-9 }
    }
}

#[derive(Debug, Clone)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iters: usize,
}

fn worse(a: f64, b: f64) -> bool {
    // NaN counts as worse than anything, keeping the simplex ordered.
    match (a.is_nan(), b.is_nan()) {
        (true, _) => true,
        (false, true) => false,
        _ => a > b,
    }
}

/// Minimizes `f` from the simplex spanned by `x0` and `x0 + steps[i] e_i`.
pub fn minimize<F, P>(mut f: F, x0: &[f64], steps: &[f64], project: P, opts: &NmOptions) -> NmResult
where
    F: FnMut(&[f64]) -> f64,
    P: Fn(&mut [f64]),
{
    let n = x0.len();
    assert_eq!(steps.len(), n, "one step per coordinate");

    let mut eval = move |x: &mut Vec<f64>| {
        project(x.as_mut_slice());
        f(x.as_slice())
    };

    let mut verts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut fvals: Vec<f64> = Vec::with_capacity(n + 1);
    let mut v0 = x0.to_vec();
    let f0 = eval(&mut v0);
    verts.push(v0);
    fvals.push(f0);
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += steps[i];
        let fv = eval(&mut v);
        verts.push(v);
        fvals.push(fv);
    }

    let mut iters = 0;
    while iters < opts.max_iters {
        // stable insertion sort by objective: ties keep earlier vertices first
        for i in 1..=n {
            let mut k = i;
            while k > 0 && worse(fvals[k - 1], fvals[k]) {
                fvals.swap(k - 1, k);
                verts.swap(k - 1, k);
                k -= 1;
            }
        }
        if fvals[n] - fvals[0] < opts.f_tol {
            break;
        }
        iters += 1;

        let mut centroid = alloc::vec![0.0f64; n];
        for v in verts.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }

        let blend = |a: f64| -> Vec<f64> {
            // point c + a (c - worst)
            centroid
                .iter()
                .zip(&verts[n])
                .map(|(&c, &w)| c + a * (c - w))
                .collect()
        };

        let mut xr = blend(1.0);
        let fr = eval(&mut xr);
        if !worse(fr, fvals[0]) {
            let mut xe = blend(2.0);
            let fe = eval(&mut xe);
            if worse(fr, fe) {
                verts[n] = xe;
                fvals[n] = fe;
            } else {
                verts[n] = xr;
                fvals[n] = fr;
            }
            continue;
        }
        if worse(fvals[n - 1], fr) {
            verts[n] = xr;
            fvals[n] = fr;
            continue;
        }
        if worse(fvals[n], fr) {
            // outside contraction toward the reflected point
            let mut xc = blend(0.5);
            let fc = eval(&mut xc);
            if !worse(fc, fr) {
                verts[n] = xc;
                fvals[n] = fc;
                continue;
            }
        } else {
            // inside contraction toward the worst vertex, accepted only
            // when strictly better than the worst
            let mut xc = blend(-0.5);
            let fc = eval(&mut xc);
            if worse(fvals[n], fc) {
                verts[n] = xc;
                fvals[n] = fc;
                continue;
            }
        }
        // shrink toward the best vertex
        for i in 1..=n {
            let mut v: Vec<f64> = verts[0]
                .iter()
                .zip(&verts[i])
                .map(|(&b, &x)| b + 0.5 * (x - b))
                .collect();
            let fv = eval(&mut v);
            verts[i] = v;
            fvals[i] = fv;
        }
    }

    // final ordering pass so index 0 is the incumbent
    for i in 1..=n {
        let mut k = i;
        while k > 0 && worse(fvals[k - 1], fvals[k]) {
            fvals.swap(k - 1, k);
            verts.swap(k - 1, k);
            k -= 1;
        }
    }
    NmResult { x: verts.swap_remove(0), f: fvals[0], iters }
}

/// Folds each coordinate into [lo, hi] by reflecting across the violated
/// boundary (triangle-wave fold), leaving in-range values untouched.
pub fn fold_into_box(x: &mut [f64], lo: f64, hi: f64) {
    let width = hi - lo;
    if width <= 0.0 {
        for xi in x.iter_mut() {
            *xi = lo;
        }
        return;
    }
    for xi in x.iter_mut() {
        if *xi >= lo && *xi <= hi {
            continue;
        }
        let period = 2.0 * width;
        let mut t = (*xi - lo) % period;
        if t < 0.0 {
            t += period;
        }
        *xi = if t <= width { lo + t } else { lo + period - t };
    }
}
