// Positive-outcome probability of the three gap channels, and an empirical
// check of the sampler.
//
// ```text
// cargo run --example channel_models
// ```

use std::collections::BTreeMap;

use stgt::{GapChannel, SeedStreams, Stream};

/// Returns `(k, bernoulli, linear, custom, empirical linear)` rows for `l = 2, u = 6`.
pub fn run_example() -> stgt::Result<Vec<(usize, f64, f64, f64, f64)>> {
    let (l, u) = (2, 6);
    let custom = GapChannel::custom(BTreeMap::from([(3, 0.1), (4, 0.3), (5, 0.9)]));
    let curves = [
        GapChannel::bernoulli().curve(l, u)?,
        GapChannel::linear().curve(l, u)?,
        custom.curve(l, u)?,
    ];
    let mut rng = SeedStreams::new(2024).rng(Stream::Outcomes);
    let draws = 20_000;
    let mut rows = Vec::new();
    for k in 0..=u + 1 {
        let hits = (0..draws).filter(|_| curves[1].sample(k, &mut rng)).count();
        rows.push((
            k,
            curves[0].prob(k),
            curves[1].prob(k),
            curves[2].prob(k),
            hits as f64 / draws as f64,
        ));
    }
    Ok(rows)
}

fn main() -> stgt::Result<()> {
    println!(" k  bernoulli  linear  custom  linear (sampled)");
    for (k, b, lin, c, emp) in run_example()? {
        println!("{k:2}  {b:9.3}  {lin:6.3}  {c:6.3}  {emp:8.3}");
    }
    Ok(())
}
