//! Uniform sampling on probability simplices.

use rand::Rng;
use rand_distr::Exp1;

/// One uniform draw from the simplex with `k` coordinates (Dirichlet(1,…,1)).
pub fn uniform_simplex<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    w
}

/// Independent uniform draws, one simplex per entry of `dims`.
pub fn uniform_product<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> Vec<Vec<f64>> {
    dims.iter().map(|&k| uniform_simplex(rng, k)).collect()
}
