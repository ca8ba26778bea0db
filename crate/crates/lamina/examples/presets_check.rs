use lamina::assembly::{Grid, Solver, SolverSettings, SolutionField};
use lamina::presets::preset;

fn main() {
    // (preset, subset of display times, divisions per layer, dt)
    let plans: Vec<(&str, Vec<f64>, Vec<usize>, f64)> = vec![
        ("liu-contaminant", vec![1.0, 2.15, 5.0, 10.0], vec![100, 1400], 0.0025),
        ("mikhailov-heat", vec![0.001, 0.005, 0.01, 0.02, 0.05], vec![300, 300, 300], 2e-5),
        ("trefry-analyte", vec![0.02, 0.1, 0.5, 1.0, 2.0], vec![600, 600], 1e-4),
        ("brain-tumour", vec![0.2, 1.0, 2.0, 4.0], vec![800, 400, 800], 1e-3),
    ];
    for (name, times, divisions, dt) in plans {
        let t0 = std::time::Instant::now();
        let p = preset(name).unwrap().spec.validate().unwrap();
        let rich = lamina::fdm::richardson(&p, &divisions, dt, &times).unwrap();
        let grid = Grid { times: times.clone(), xs: rich.extrapolated.xs.clone() };
        let solver = Solver::new(p.clone(), SolverSettings { n_modes: 300, inversion_order: 14 }).unwrap();
        let semi = solver.evaluate(&grid).unwrap();
        let eps = SolutionField::relative_error(&rich.extrapolated, &semi).unwrap();
        print!("{name}: ");
        for (k, &t) in times.iter().enumerate() {
            let tol = f64::max(1e-4, 3.0 * rich.estimates[k]);
            print!("t={t}: {:.1e}{} ", eps[k], if eps[k] < tol { "(ok)" } else { "(FAIL)" });
        }
        println!("  [{:?}]", t0.elapsed());
    }
}
