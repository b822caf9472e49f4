//! Fit `H_f(ω) = c (S(ω) − S(ω∘f))` by least squares over random instances.
//! For `H = S` the fit returns `c = 1`; for `K` the residual shows it is not a
//! multiple of `S`.

use ncentropy::entropy::{entropy_change, k_functor};
use ncentropy::harness::{fit_constant, generate_instance, InstanceFamily};
use ncentropy::linalg::Seed;

fn main() -> ncentropy::error::Result<()> {
    let family = InstanceFamily::default();
    let mut s_pairs = Vec::new();
    let mut k_pairs = Vec::new();
    for i in 0..500 {
        let inst = generate_instance(&family, Seed::new(42).with_stream(i))?;
        let s = entropy_change(&inst.morphism, &inst.omega)?;
        s_pairs.push((s, s));
        k_pairs.push((k_functor(&inst.morphism, &inst.omega)?, s));
    }
    for (name, pairs) in [("S", &s_pairs), ("K", &k_pairs)] {
        let c = fit_constant(pairs);
        let resid = pairs.iter().map(|&(h, s)| (h - c * s).abs()).fold(0.0, f64::max);
        println!("H = {name}: c = {c:.12}, max residual {resid:.3e}");
    }
    Ok(())
}
