use cutdg::*;
use std::sync::Arc;
fn main() {
    let ramp = RampGeometry::from_degrees(0.26, 45.0).unwrap();
    let mesh = Arc::new(build_mesh(4, ramp).unwrap());
    for p in [1usize, 2, 3] {
        let space = DgSpace::new(Arc::clone(&mesh), p);
        let u = space.project(|q| (q[0]*3.1).sin() * (q[1]*2.3).cos());
        // idempotence: re-project the piecewise polynomial
        let mesh2 = Arc::clone(&space.mesh);
        let sp = &space; let ur = &u;
        let again = space.project(move |q| { let c = mesh2.locate(q).unwrap(); sp.eval(ur, c, q) });
        for cell in &space.mesh.cells {
            let a = again.block(cell.id); let b = u.block(cell.id);
            let err = a.iter().zip(b).map(|(x,y)| (x-y).abs()).fold(0.0f64, f64::max);
            if err > 1e-13 {
                println!("p={} cell {:?} cond={:.2e} idempotence err {:.2e}", p, cell.kind, space.mass_condition(cell.id), err);
            }
        }
        println!("p={} done", p);
    }
}
