use lamina::assembly::{Grid, Solver, SolverSettings};
use lamina::classical::ClassicalSolution;
use lamina::presets::preset;

fn main() {
    let p = preset("trefry-analyte").unwrap().spec.validate().unwrap();
    let classical = ClassicalSolution::new(p.clone(), 80).unwrap();
    println!("warnings: {:?}", classical.warnings);
    println!("first lambdas: {:?}", classical.eigenpairs().iter().take(6).map(|e| e.lambda).collect::<Vec<_>>());
    let solver = Solver::new(p.clone(), SolverSettings { n_modes: 300, inversion_order: 14 }).unwrap();
    let grid = Grid { times: vec![0.02, 0.5, 2.0], xs: vec![vec![0.0, 0.5, 0.99, 1.0], vec![1.0, 1.01, 1.5, 2.0]] };
    let semi = solver.evaluate(&grid).unwrap();
    let fdm = lamina::fdm::solve_fdm(&p, &[600, 600], 1e-4, &[0.02, 0.5, 2.0]).unwrap();
    for (k, &t) in grid.times.iter().enumerate() {
        println!("t={t}:");
        for i in 0..2 {
            for (j, &x) in grid.xs[i].iter().enumerate() {
                let cl = classical.eval(i, x, t);
                // fdm nodes: layer i node index
                let nodes = &fdm.xs[i];
                let kk = nodes.iter().position(|&v| (v - x).abs() < 1e-12).unwrap();
                println!("  layer {i} x={x:<5}: semi={:+.6e} classical={:+.6e} fdm={:+.6e}", semi.values[k][i][j], cl, fdm.values[k][i][kk]);
            }
        }
    }
}
