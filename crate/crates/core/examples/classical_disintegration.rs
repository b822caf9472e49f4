//! Classical disintegrations: a stochastic right inverse of a
//! measure-preserving function.

use ncentropy::disintegration::{classical_disintegrate, pushforward};
use ncentropy::entropy::shannon;

fn main() -> ncentropy::error::Result<()> {
    let phi = [0, 1, 1, 2, 2, 2];
    let p = [0.3, 0.1, 0.2, 0.1, 0.1, 0.2];
    let q = pushforward(&phi, 3, &p)?;
    let psi = classical_disintegrate(&phi, 3, &p)?;
    println!("q = {q:?}");
    for y in 0..3 {
        println!("psi_{y} = {:?}", psi.row(y));
    }
    println!("psi o q = {:?}", psi.push(&q));
    println!("H(p) - H(q) = {:.10}", shannon(&p)? - shannon(&q)?);
    Ok(())
}
