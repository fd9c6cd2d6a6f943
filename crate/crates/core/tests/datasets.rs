use std::path::PathBuf;
use std::sync::Arc;

use argrule::dataset::{load_table, AttributeKind, Schema, TableOptions};
use argrule::{ArgumentUniverse, Variant};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

/// Arguments (atoms plus target and top) with 6 segments per numeric column.
fn argument_count(file: &str, label: &str, positive: &str, ignore: &[&str]) -> (usize, usize, usize) {
    let opts = TableOptions {
        ignore_columns: ignore.iter().map(|s| s.to_string()).collect(),
        ..Default::default()
    };
    let table = load_table(data(file), label, positive, &opts).unwrap();
    let schema = Schema::fit(&table, 6).unwrap();
    let continuous = schema
        .attributes
        .iter()
        .filter(|a| matches!(a.kind, AttributeKind::Continuous(_)))
        .count();
    let universe = ArgumentUniverse::new(Arc::clone(&schema), Variant::BASE, "t");
    (table.len(), continuous, universe.len())
}

#[test]
fn voting() {
    assert_eq!(argument_count("voting.csv", "class", "democrat", &[]), (435, 0, 34));
}

#[test]
fn breast_cancer() {
    assert_eq!(argument_count("breast_cancer_wisconsin.csv", "class", "2", &["id"]), (699, 9, 56));
}

#[test]
fn heart_disease() {
    assert_eq!(argument_count("heart_cleveland.csv", "num", "1", &[]), (303, 13, 80));
}

#[test]
fn iris() {
    assert_eq!(argument_count("iris.csv", "class", "Iris-virginica", &[]), (150, 4, 26));
}

#[test]
fn negative_variant_doubles_the_atoms() {
    let table = load_table(data("voting.csv"), "class", "democrat", &TableOptions::default()).unwrap();
    let schema = Schema::fit(&table, 6).unwrap();
    let universe = ArgumentUniverse::new(schema, Variant::NEGATIVE, "t");
    assert_eq!(universe.len(), 2 + 2 * 32);
}

#[test]
fn missing_cells_produce_no_atom() {
    let opts = TableOptions {
        ignore_columns: vec!["id".into()],
        ..Default::default()
    };
    let table = load_table(data("breast_cancer_wisconsin.csv"), "class", "2", &opts).unwrap();
    let missing = table.rows.iter().flatten().filter(|c| c.is_none()).count();
    assert_eq!(missing, 16);
    let schema = Schema::fit(&table, 6).unwrap();
    let d = table.atomize(&schema).unwrap();
    let atoms: usize = d.instances.iter().map(|i| i.facts.count()).sum();
    assert_eq!(atoms, 699 * 9 - 16);
    assert_eq!(d.positives(), 458);
}
