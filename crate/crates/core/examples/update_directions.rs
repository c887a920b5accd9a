//! Compares the per-sample update directions of the estimators along a
//! growing residual: LMS grows without bound, the correntropy-weighted
//! directions fade out for outliers.

use difflab::engine::{gdtls_gradient, lms_gradient, mcc_gradient, mtc_cost, mtc_gradient, SharedSample};

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn main() -> difflab::Result<()> {
    let w = [0.4, 0.7, -0.3, 0.5];
    let x = vec![0.8, -0.2, 1.1, 0.3];
    let base: f64 = w.iter().zip(&x).map(|(a, b)| a * b).sum();
    let (kernel2, zeta2, gamma) = (0.5, 0.2, 3.5);
    println!("{:>9} {:>10} {:>10} {:>10} {:>10} {:>9}", "residual", "lms", "mcc", "gdtls", "mtc", "mtc_cost");
    for e in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0] {
        let s = SharedSample::new(x.clone(), base + e, 1, false);
        println!(
            "{e:9.2} {:10.4} {:10.4} {:10.4} {:10.4} {:9.4}",
            norm(&lms_gradient(&w, &s)),
            norm(&mcc_gradient(&w, &s, kernel2)),
            norm(&gdtls_gradient(&w, &s, gamma)?),
            norm(&mtc_gradient(&w, &s, zeta2, gamma)?),
            mtc_cost(&w, &s, zeta2, gamma)?
        );
    }
    Ok(())
}
