use lamina::assembly::{Grid, Solver, SolverSettings, SolutionField};
use lamina::classical::ClassicalSolution;
use lamina::presets::preset;

fn fit(ns: &[usize], eps: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = ns.iter().zip(eps).filter(|(_, &e)| e > 0.0)
        .map(|(&n, &e)| ((n as f64).ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    -(n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn main() {
    let t0 = std::time::Instant::now();
    for name in ["case-c", "case-c-d100"] {
        let p = preset(name).unwrap().spec.validate().unwrap();
        let classical = ClassicalSolution::new(p.clone(), 60).unwrap();
        let times = [0.01, 0.2, 3.0];
        let grid = Grid::uniform(&p, 6, &times); // N_x = 5 divisions
        let reference = classical.evaluate(&grid).unwrap();
        let ns = [16usize, 32, 64, 128, 256];
        let mut eps_by_n = Vec::new();
        for &n in &ns {
            let solver = Solver::new(p.clone(), SolverSettings { n_modes: n, inversion_order: 14 }).unwrap();
            let field = solver.evaluate(&grid).unwrap();
            eps_by_n.push(SolutionField::relative_error(&reference, &field).unwrap());
        }
        for (ti, &t) in times.iter().enumerate() {
            let eps: Vec<f64> = eps_by_n.iter().map(|row| row[ti]).collect();
            println!("{name} t={t}: eps={:?} slope={:.3}", eps.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>(), fit(&ns, &eps));
        }
    }
    println!("elapsed {:?}", t0.elapsed());
}
