use semiclassica_core::chaos::*;
use semiclassica_core::dynamics::*;

fn main() {
    let seed = 20260809;
    let s0 = sample_shell_state(0.25, 1.0, EnergyConvention::ClassicalEpsilon, seed, 13).unwrap();
    println!("IC: {s0:?}");
    // dt robustness
    for dt in [1e-3, 5e-4] {
        let est = lyapunov_max(&Effective { gamma: 1.0 }, &s0, 2e4, dt, 1.0, 1e-8);
        println!("dt={dt}: lambda(2e4) = {:.3e}", est.lambda_max);
    }
    // long run
    let est = lyapunov_max(&Effective { gamma: 1.0 }, &s0, 1e5, 1e-3, 1.0, 1e-8);
    let marks: Vec<String> = [2e4, 4e4, 6e4, 8e4, 1e5]
        .iter()
        .map(|&tm| est.history.iter().find(|(t, _)| *t >= tm).map(|(_, l)| format!("{l:.2e}")).unwrap_or_default())
        .collect();
    println!("lambda(t=2e4..1e5) = {}", marks.join(", "));
    let sec1 = poincare_section(&Effective { gamma: 1.0 }, &s0, 16000.0, 1e-3, SectionPlane::Q2Zero);
    let sec2 = poincare_section(&Effective { gamma: 1.0 }, &s0, 32000.0, 1e-3, SectionPlane::Q2Zero);
    let o1 = section_occupancy(&sec1.points, &sec2.points, 32);
    let o2 = section_occupancy(&sec2.points, &sec2.points, 32);
    println!("occupancy t=16k: {o1}, t=32k: {o2}");
}
