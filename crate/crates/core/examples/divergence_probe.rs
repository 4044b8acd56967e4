//! How the integrated 1/k² singularity behaves in one, two and three dimensions.

use ordlab::bounds::divergence_probe_with;

fn main() -> ordlab::Result<()> {
    for d in 1..=3u8 {
        let r = divergence_probe_with(d, 1e-2, 1.0, 6)?;
        println!("d = {d} ({})", r.law);
        for g in &r.growth {
            let inc = g.increment.map_or(String::new(), |x| format!("{x:+.4}"));
            println!("  k0 = {:.2e}  integral = {:>12.4}  {inc}", g.k0, g.numeric);
        }
    }
    Ok(())
}
