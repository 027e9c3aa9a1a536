// Fundamental solutions on one edge: exact propagation through a
// piecewise-constant potential, the zero-potential closed form, and the
// leading behaviour near λ = (2k+1)²π² + d.
//
//     cargo run --example transfer_asymptotics

use std::f64::consts::PI;

use quantum_graph::transfer::cluster_center;
use quantum_graph::{
    asymptotic_predictions, asymptotic_residuals, propagate, transfer_zero_oracle, EdgePotential,
};

fn main() -> quantum_graph::Result<()> {
    let zero = EdgePotential::zero();
    for lambda in [-PI * PI, 0.0, PI * PI / 4.0, PI * PI] {
        let t = propagate(&zero, lambda);
        let o = transfer_zero_oracle(lambda);
        println!(
            "λ = {lambda:9.4}: (c, c', s, s') = ({:+.6}, {:+.6}, {:+.6}, {:+.6})  oracle gap {:.1e}",
            t.c1,
            t.c1p,
            t.s1,
            t.s1p,
            t.as_array().iter().zip(o.as_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        );
    }

    let q = EdgePotential::piecewise(vec![0.0, 0.25, 0.75, 1.0], vec![2.0, 0.5, 1.0])?;
    println!(
        "\nq = {:?} on {:?}, ∫q = {}",
        q.values(),
        q.breakpoints(),
        q.integral()
    );
    let d = 0.3;
    println!("  k      λ_k            √λ·|actual − predicted| for (c'/√λ, s', c, √λ s)");
    for k in [1, 10, 50, 200, 1000] {
        let r = asymptotic_residuals(&q, k, d);
        println!(
            "{k:5} {:12.3} {:10.3e} {:10.3e} {:10.3e} {:10.3e}",
            cluster_center(k) + d,
            r[0],
            r[1],
            r[2],
            r[3]
        );
    }
    let p = asymptotic_predictions(&q, 10, d);
    let t = propagate(&q, p.lambda);
    println!(
        "\nk = 10: predicted √λ s = {:+.6e}, actual = {:+.6e}",
        p.scaled_s1,
        p.lambda.sqrt() * t.s1
    );
    println!("Wronskian − 1 at k = 10: {:.1e}", t.wronskian() - 1.0);
    Ok(())
}
