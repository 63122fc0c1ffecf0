use semiclassica_core::chaos::*;
use std::time::Instant;

fn main() {
    let scan = ScanConfig {
        classifier: ClassifierConfig {
            lambda_threshold: 1e-2,
            t_total: 5e3,
            dt: 1e-3,
            renorm_interval: 1.0,
            d0: 1e-8,
        },
        n_samples: 16,
        rel_tol: 0.05,
        bracket_lo: 0.1,
        convention: EnergyConvention::ClassicalEpsilon,
        seed: 20260809,
    };
    let t = Instant::now();
    let curve = threshold_scan(&[0.0, 0.5, 1.0], &scan);
    for (i, g) in curve.gammas.iter().enumerate() {
        println!(
            "gamma={g}: eps_th={:?} eps_convex={:.4} (elapsed {:.0?})",
            curve.eps_th[i], curve.eps_convex[i], t.elapsed()
        );
    }
    if let (Some(e0), Some(e1)) = (curve.eps_th[0], curve.eps_th[2]) {
        println!("ratio eps_th(1)/eps_th(0) = {:.3} vs (1+1)^2 = 4", e1 / e0);
    }
    if let (Some(e0), Some(e05)) = (curve.eps_th[0], curve.eps_th[1]) {
        println!("ratio eps_th(0.5)/eps_th(0) = {:.3} vs 2.25", e05 / e0);
    }
}
