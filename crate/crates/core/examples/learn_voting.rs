//! Learns a model on the congressional voting records, saves it, reloads
//! it and checks the reloaded model predicts the same.

use argrule::dataset::load_table;
use argrule::induction::SearchConfig;
use argrule::model::{learn, LearnConfig, ModelFile};
use argrule::Variant;

fn main() -> argrule::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/voting.csv");
    let table = load_table(path, "class", "democrat", &Default::default())?;
    let config = LearnConfig {
        label_column: "class".into(),
        positive_class: "democrat".into(),
        segments: 6,
        nominal: Vec::new(),
        search: SearchConfig {
            variant: Variant::BASE,
            ..Default::default()
        },
    };
    let (file, outcome) = learn(&table, &config, |p| {
        if p.iteration % 20 == 0 {
            eprintln!("iteration {:3}  frontier {:5}  best {:?}", p.iteration, p.frontier, p.best);
        }
    })?;
    println!(
        "train accuracy {:.2}% with {} edges after {} iterations",
        outcome.train_accuracy * 100.0,
        outcome.matrix.edge_count(),
        outcome.iterations
    );

    let out = std::env::temp_dir().join("voting-model.json");
    file.save(&out)?;
    let reloaded = ModelFile::load(&out)?;
    let matrix = reloaded.relation_matrix()?;
    let data = table.atomize(&reloaded.schema())?;
    assert_eq!(matrix.predictions(&data), outcome.matrix.predictions(&data));
    println!("saved to {}", out.display());
    for e in matrix.edges() {
        let u = matrix.universe();
        println!("  {} -{:?}-> {}", u.name(e.from), e.kind, u.name(e.to));
    }
    Ok(())
}
