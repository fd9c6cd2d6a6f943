//! Learns on the heart disease data and explains the first test row the
//! model rejects, then the first it accepts.

use argrule::dataset::{load_table, Schema};
use argrule::explain::{explain_prediction, render, DefenceMode};
use argrule::induction::{search, SearchConfig};

fn main() -> argrule::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/heart_cleveland.csv");
    let table = load_table(path, "num", "1", &Default::default())?;
    let (train_rows, test_rows) = argrule::dataset::split_indices(table.len(), 0.7, 3)?;
    let train = table.subset(&train_rows);
    let schema = Schema::fit(&train, 6)?;
    let outcome = search(&train.atomize(&schema)?, &SearchConfig::default())?;
    let test = table.subset(&test_rows).atomize(&schema)?;

    for want in [false, true] {
        let Some(inst) = test.instances.iter().find(|i| outcome.matrix.predict(&i.facts) == want) else {
            continue;
        };
        let explained = explain_prediction(&outcome.matrix, &inst.facts, DefenceMode::default())?;
        print!("{}", render(&explained.set));
        println!("  (actual label {})\n", inst.label);
    }
    Ok(())
}
