use semiclassica_core::chaos::*;
use semiclassica_core::dynamics::*;

fn main() {
    let seed = 20260809;
    for idx in [13u64, 8, 2] {
        let s0 = sample_shell_state(0.25, 1.0, EnergyConvention::ClassicalEpsilon, seed, idx).unwrap();
        let est = lyapunov_max(&Effective { gamma: 1.0 }, &s0, 2e4, 1e-3, 1.0, 1e-8);
        let marks: Vec<String> = [1000.0, 2000.0, 5000.0, 10000.0, 20000.0]
            .iter()
            .map(|&tm| {
                est.history
                    .iter()
                    .find(|(t, _)| *t >= tm)
                    .map(|(_, l)| format!("{l:.2e}"))
                    .unwrap_or_default()
            })
            .collect();
        println!("idx {idx}: lambda(t=1k,2k,5k,10k,20k) = {}", marks.join(", "));
        // Section occupancy growth as a cross-diagnostic
        let sec1 = poincare_section(&Effective { gamma: 1.0 }, &s0, 4000.0, 1e-3, SectionPlane::Q2Zero);
        let sec2 = poincare_section(&Effective { gamma: 1.0 }, &s0, 8000.0, 1e-3, SectionPlane::Q2Zero);
        let o1 = section_occupancy(&sec1.points, &sec2.points, 32);
        let o2 = section_occupancy(&sec2.points, &sec2.points, 32);
        println!("   occupancy {} -> {} (points {} -> {})", o1, o2, sec1.points.len(), sec2.points.len());
    }
}
