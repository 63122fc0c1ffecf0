use semiclassica_core::chaos::*;
use semiclassica_core::numeric::map_indexed;

fn share(gamma: f64, eps: f64, n: usize, seed: u64) -> (usize, usize, usize) {
    let cfg = ClassifierConfig::default();
    let classes = map_indexed(n, |i| {
        let s0 = sample_shell_state(eps, gamma, EnergyConvention::ClassicalEpsilon, seed, i as u64).unwrap();
        if gamma == 0.0 {
            classify(&semiclassica_core::dynamics::Classical, &s0, &cfg)
        } else {
            classify(&semiclassica_core::dynamics::Effective { gamma }, &s0, &cfg)
        }
    });
    let c = classes.iter().filter(|c| **c == OrbitClass::Chaotic).count();
    let t = classes.iter().filter(|c| **c == OrbitClass::Terminated).count();
    (c, t, n)
}

fn main() {
    let seed = 20260809;
    for eps in [0.3, 0.8, 1.5, 2.2, 2.8, 3.4] {
        let (c, t, n) = share(1.0, eps, 16, seed);
        println!("gamma=1   eps={eps:4}: chaotic {c}/{n} terminated {t}");
    }
}
