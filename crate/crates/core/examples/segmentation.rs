//! How a numeric column becomes interval atoms.

use argrule::dataset::{load_table, AttributeKind, Schema};

fn main() -> argrule::Result<()> {
    let segments = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/iris.csv");
    let table = load_table(path, "class", "Iris-setosa", &Default::default())?;
    let schema = Schema::fit(&table, segments)?;
    for attr in &schema.attributes {
        if let AttributeKind::Continuous(s) = &attr.kind {
            println!("{} [{}, {}]", attr.name, s.min, s.max);
            for label in &s.labels {
                println!("  {}={label}", attr.name);
            }
        }
    }
    println!("{} atoms", schema.atom_count());
    Ok(())
}
