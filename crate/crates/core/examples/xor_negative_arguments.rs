//! XOR of two binary attributes cannot be learned from positive atoms
//! alone; adding negated atoms makes it learnable.

use argrule::dataset::{RawTable, Schema};
use argrule::dot::matrix_to_dot;
use argrule::induction::{search, SearchConfig};
use argrule::Variant;

fn main() -> argrule::Result<()> {
    // an attribute either holds ("yes") or is absent
    let cell = |on: bool| on.then(|| "yes".to_string());
    let pairs = [(false, false), (false, true), (true, false), (true, true)];
    let table = RawTable {
        columns: vec!["a".into(), "b".into()],
        rows: pairs.iter().map(|&(a, b)| vec![cell(a), cell(b)]).collect(),
        labels: Some(pairs.iter().map(|&(a, b)| a != b).collect()),
    };
    let schema = Schema::fit(&table, 6)?;
    let train = table.atomize(&schema)?;

    for variant in [Variant::BASE, Variant::NEGATIVE] {
        let config = SearchConfig {
            max_iterations: 500,
            variant,
            ..Default::default()
        };
        let out = search(&train, &config)?;
        println!(
            "{:9} accuracy {:5.1}%  edges {}  iterations {}  ({:?})",
            variant.name(),
            out.train_accuracy * 100.0,
            out.matrix.edge_count(),
            out.iterations,
            out.stop
        );
        if variant == Variant::NEGATIVE {
            print!("{}", matrix_to_dot(&out.matrix));
        }
    }
    Ok(())
}
