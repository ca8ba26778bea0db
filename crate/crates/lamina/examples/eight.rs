use lamina::assembly::{Grid, Solver, SolverSettings, SolutionField};
use lamina::presets::preset;

fn main() {
    let t0 = std::time::Instant::now();
    let p = preset("eight-layer").unwrap().spec.validate().unwrap();
    // per-time FDM reference parameters: (t, divisions/layer, dt)
    let plans = [(0.01, 2000usize, 1e-5), (0.2, 2000, 1e-4), (3.0, 1000, 1e-3)];
    for &(t, div, dt) in &plans {
        let tr = std::time::Instant::now();
        let rich = lamina::fdm::richardson(&p, &vec![div; 8], dt, &[t]).unwrap();
        println!("t={t}: richardson estimate {:.2e} ({:?})", rich.estimates[0], tr.elapsed());
        // display grid: every (div/10)-th node -> 11 points/layer
        let stride = div / 10;
        let mut ref_field = rich.extrapolated.clone();
        for i in 0..8 {
            ref_field.xs[i] = ref_field.xs[i].iter().step_by(stride).copied().collect();
            ref_field.values[0][i] = ref_field.values[0][i].iter().step_by(stride).copied().collect();
        }
        let grid = Grid { times: vec![t], xs: ref_field.xs.clone() };
        for &n in &[10usize, 50, 100, 200] {
            let solver = Solver::new(p.clone(), SolverSettings { n_modes: n, inversion_order: 14 }).unwrap();
            let field = solver.evaluate(&grid).unwrap();
            let eps = SolutionField::relative_error(&ref_field, &field).unwrap();
            println!("  N={n}: eps = {:.3e}", eps[0]);
        }
    }
    println!("total {:?}", t0.elapsed());
}
