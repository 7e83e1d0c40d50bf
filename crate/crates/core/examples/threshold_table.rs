// Expected positive fractions and the decision bands built from them.
//
// ```text
// cargo run --example threshold_table
// ```

use stgt::decoder::{classify_item, classify_reference_group};
use stgt::{GapChannel, Instance, ItemLabel, RefLabel, ThresholdTable};

pub struct Tables {
    pub table: ThresholdTable,
    pub band: (f64, f64),
    pub boundary: f64,
    pub labels: Vec<(usize, RefLabel)>,
    pub items: Vec<(usize, ItemLabel)>,
}

pub fn run_example() -> stgt::Result<Tables> {
    // 6 items, 3 defective, thresholds 1 and 3, blocks of 3
    let inst = Instance::new(6, 3, 1, 3)?;
    let curve = GapChannel::bernoulli().curve(inst.l, inst.u)?;
    let table = ThresholdTable::build(&inst, &curve, 3, 3, [inst.l])?;
    let band = table.band(inst.l).expect("level l is in the table");
    let boundary = table.item_boundary(inst.l).expect("level l is in the table");

    // 40 probes per reference group, 40 tests per item
    let trials = 40;
    let labels = [10, 16, 20, 25, 30]
        .into_iter()
        .map(|c| Ok((c, classify_reference_group(c, trials, &table, inst.l)?)))
        .collect::<stgt::Result<_>>()?;
    let items = [18, 22, 23, 28]
        .into_iter()
        .map(|c| Ok((c, classify_item(c, trials, &table, inst.l)?)))
        .collect::<stgt::Result<_>>()?;
    Ok(Tables {
        table,
        band,
        boundary,
        labels,
        items,
    })
}

fn main() -> stgt::Result<()> {
    let t = run_example()?;
    for (v, q) in &t.table.q {
        println!("q_{v} = {q:.6}");
    }
    let e = t.table.entry(1).expect("entry for v = 1");
    println!("phi_0 = {:.6}, phi_1 = {:.6}, delta = {:.6}", e.phi[0], e.phi[1], e.delta);
    println!("critical band [{:.4}, {:.4}], item boundary {:.4}", t.band.0, t.band.1, t.boundary);
    for (c, label) in &t.labels {
        println!("reference group with {c}/40 positives: {label:?}");
    }
    for (c, label) in &t.items {
        println!("item with {c}/40 positives: {label:?}");
    }
    Ok(())
}
