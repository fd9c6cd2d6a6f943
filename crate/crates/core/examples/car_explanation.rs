//! Explains why a car is rated very good: each attacker of the target is
//! countered by an accepted argument.

use argrule::dot::contextual_to_dot;
use argrule::explain::{def_by, render};
use argrule::framework::grounded;
use argrule::{ArgId, ContextualGraph};

fn main() -> argrule::Result<()> {
    let g = ContextualGraph::framework(
        &[
            "acceptability=vgood",
            "top",
            "buying_cost=med",
            "doors=3",
            "nb_persons=5-or-more",
            "safety=high",
            "lug_boot=med",
            "maint=low",
        ],
        &[(1, 0), (2, 1), (3, 0), (4, 3), (5, 0), (6, 5)],
        &[],
    );
    let labelling = grounded(&g)?;
    let set = def_by(&g, &labelling.extension(), ArgId::TARGET)?;
    print!("{}", render(&set));

    if std::env::args().any(|a| a == "--dot") {
        print!("{}", contextual_to_dot(&g, Some(&labelling)));
    }
    Ok(())
}
