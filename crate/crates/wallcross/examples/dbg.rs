use wallcross::decomp::*;
use wallcross::fan::Fan;
use wallcross::geometry::*;
use wallcross::ring::El;
use wallcross::linalg::{rat, Rat};
use num::One;

fn main() {
    let g = build_blowup_geometry(&Fan::projective_space(2).unwrap(), &[0, 1]).unwrap();
    for m in 0..g.x_plus().total_dim() {
        let mut alpha = El::zero(g.x_plus());
        alpha.0[m] = Rat::one();
        let ok = exceptional_rule_holds(&g, &alpha).unwrap();
        println!("blowup m={m}: {ok}");
    }
    let g = build_local_model_geometry(&Fan::point(), &[vec![], vec![]], &[vec![], vec![], vec![]]).unwrap();
    println!("local 2,3: c = {}", g.c_f0);
    for m in 0..g.x_plus().total_dim() {
        let mut alpha = El::zero(g.x_plus());
        alpha.0[m] = Rat::one();
        match exceptional_rule_holds(&g, &alpha) {
            Ok(ok) => println!("local m={m} deg={}: {ok}", g.x_plus().basis_deg[m]),
            Err(e) => println!("local m={m}: ERR {e}"),
        }
    }
    // inspect h_plus and the restriction of a degree-1 class
    let hp = &g.p_plus.h;
    println!("h_plus = {:?}", hp.0.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    println!("h_plus^2 int = {}", g.p_plus.ring.integrate(&g.p_plus.ring.mul(hp, hp)));
    let hm = &g.p_minus.h;
    println!("h_minus = {:?}", hm.0.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    let _ = rat(0);
}
