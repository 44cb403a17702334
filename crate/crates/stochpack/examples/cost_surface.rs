//! Walk the two-bin cost surface: the valley of a-minimizers, the saddle at
//! the symmetry center, and a CSV grid export ready for plotting.

use stochpack::costs::{cost2, saddle_point, valley_a, CostModel, TwoBinContext};
use stochpack::geometry::export_cost_grid;
use stochpack::model::NormalizedPoint;

fn main() {
    // c1 = c2 = 100, mu = 160, sigma = 80
    let ctx = TwoBinContext::new(100.0, 100.0, 160.0, 6400.0).expect("feasible");
    let model = CostModel::Spmed;

    println!("single-bin corner cost: {:.6}", cost2(NormalizedPoint::new(1.0, 1.0), &ctx, model));
    let s = saddle_point(&ctx);
    println!(
        "saddle at (a, b) = ({}, {}), cost {:.6}",
        s.a,
        s.b,
        cost2(s, &ctx, model)
    );
    for b in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let a = valley_a(b, &ctx, model);
        let c = cost2(NormalizedPoint::new(a, b), &ctx, model);
        println!("valley at b = {b:.1}: a = {a:.4}, cost {c:.6}");
    }

    let csv = export_cost_grid(&ctx, model, 5).expect("resolution >= 2");
    println!("\ngrid CSV (resolution 5):\n{csv}");
}
