//! Repeated random-split evaluation, one class of Iris against the rest.

use argrule::dataset::load_table;
use argrule::eval::{evaluate, EvalConfig};

fn main() -> argrule::Result<()> {
    let class = std::env::args().nth(1).unwrap_or_else(|| "Iris-virginica".into());
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/iris.csv");
    let table = load_table(path, "class", &class, &Default::default())?;
    let report = evaluate(&table, &EvalConfig::default())?;
    print!("{report}");
    Ok(())
}
