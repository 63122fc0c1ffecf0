use semiclassica_core::chaos::*;
use semiclassica_core::dynamics::*;

fn main() {
    let seed = 20260809;
    for (gamma, eps) in [(1.0, 0.25), (1.0, 0.35), (0.0, 0.25), (0.0, 0.35)] {
        let mut lams = vec![];
        for i in 0..16u64 {
            let s0 = sample_shell_state(eps, gamma, EnergyConvention::ClassicalEpsilon, seed, i).unwrap();
            let est = if gamma == 0.0 {
                lyapunov_max(&Classical, &s0, 5e3, 1e-3, 1.0, 1e-8)
            } else {
                lyapunov_max(&Effective { gamma }, &s0, 5e3, 1e-3, 1.0, 1e-8)
            };
            lams.push((est.lambda_max, est.termination.is_some(), i));
        }
        lams.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let top: Vec<String> = lams.iter().take(5).map(|(l, t, i)| format!("{l:.2e}{} (#{i})", if *t {"T"} else {""})).collect();
        println!("gamma={gamma} eps={eps}: top lambdas {}", top.join(", "));
    }
    // Energy drift of the worst orbit at gamma=1, eps=0.25
    let s0 = sample_shell_state(0.25, 1.0, EnergyConvention::ClassicalEpsilon, seed, 0).unwrap();
    let traj = rk4_integrate_sampled(&Effective { gamma: 1.0 }, &s0, 1e-3, 5_000_000, 10_000).unwrap();
    println!("gamma=1 eps=0.25 orbit 0: energy drift {:.3e}", traj.max_energy_drift());
}
