// Closed-form fractions against brute-force enumeration in exact rationals.
//
// ```text
// cargo run --release --example oracle_check
// ```

use stgt::oracle::{compare_instance, enumerate_phi, enumerate_q, partition_block_law, EnumerationReport};
use stgt::{GapChannel, Instance};

pub struct Check {
    pub q1: String,
    pub phi: [String; 2],
    pub reports: Vec<EnumerationReport>,
    pub block_subsets: usize,
}

pub fn run_example() -> stgt::Result<Check> {
    let small = Instance::new(6, 3, 1, 3)?;
    let b = GapChannel::bernoulli();
    let q1 = enumerate_q(1, &small, 3, &b)?.to_string();
    let phi = [
        enumerate_phi(1, false, &small, 3, &b)?.to_string(),
        enumerate_phi(1, true, &small, 3, &b)?.to_string(),
    ];
    let mut reports = compare_instance(&Instance::new(11, 5, 1, 4)?, &b)?;
    reports.extend(compare_instance(&Instance::new(11, 5, 1, 4)?, &GapChannel::linear())?);
    let block_subsets = partition_block_law(8, 3, 0)?.len();
    Ok(Check {
        q1,
        phi,
        reports,
        block_subsets,
    })
}

fn main() -> stgt::Result<()> {
    let c = run_example()?;
    println!("n=6 d=3 l=1 u=3: q_1 = {}, phi_1,0 = {}, phi_1,1 = {}", c.q1, c.phi[0], c.phi[1]);
    for r in &c.reports {
        println!(
            "{:?} m={} {:<8} exact {:>14} library {:.15} diff {:.1e}",
            r.channel, r.block_size, r.quantity, r.exact_value, r.library_value, r.abs_diff
        );
    }
    println!("first block of a 3-way partition of 8 items hits {} subsets uniformly", c.block_subsets);
    Ok(())
}
