use lamina::classical::ClassicalSolution;
use lamina::presets::preset;

fn main() {
    let p = preset("trefry-analyte").unwrap().spec.validate().unwrap();
    let classical = ClassicalSolution::new(p.clone(), 120).unwrap();
    let t = 0.5;
    for &(div, dt) in &[(150usize, 4e-4), (300, 2e-4), (600, 1e-4), (1200, 5e-5)] {
        let f = lamina::fdm::solve_fdm(&p, &[div, div], dt, &[t]).unwrap();
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..2 {
            for (j, &x) in f.xs[i].iter().enumerate() {
                let c = classical.eval(i, x, t);
                worst = worst.max((f.values[0][i][j] - c).abs());
                scale = scale.max(c.abs());
            }
        }
        println!("div={div} dt={dt}: rel err vs classical = {:.3e}", worst / scale);
    }
}
