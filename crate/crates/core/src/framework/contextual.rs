use crate::framework::ArgId;

/// An argumentation framework over a fixed index space where only some
/// arguments are present. Produced by projecting a relation matrix onto a
/// fact set, or built by hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextualGraph {
    names: Vec<String>,
    active: Vec<bool>,
    attacks: Vec<(ArgId, ArgId)>,
    supports: Vec<(ArgId, ArgId)>,
    attackers: Vec<Vec<ArgId>>,
    attacked: Vec<Vec<ArgId>>,
    supporters: Vec<Vec<ArgId>>,
    supported: Vec<Vec<ArgId>>,
}

impl ContextualGraph {
    /// Edges touching an inactive argument are dropped.
    pub fn new(
        names: Vec<String>,
        active: Vec<bool>,
        attacks: Vec<(ArgId, ArgId)>,
        supports: Vec<(ArgId, ArgId)>,
    ) -> Self {
        assert_eq!(names.len(), active.len(), "one name per argument");
        let n = names.len();
        let keep = |&(a, b): &(ArgId, ArgId)| active[a.0] && active[b.0];
        let attacks: Vec<_> = attacks.into_iter().filter(keep).collect();
        let supports: Vec<_> = supports.into_iter().filter(keep).collect();
        let mut attackers = vec![Vec::new(); n];
        let mut attacked = vec![Vec::new(); n];
        for &(a, b) in &attacks {
            attackers[b.0].push(a);
            attacked[a.0].push(b);
        }
        let mut supporters = vec![Vec::new(); n];
        let mut supported = vec![Vec::new(); n];
        for &(a, b) in &supports {
            supporters[b.0].push(a);
            supported[a.0].push(b);
        }
        for lists in [&mut attackers, &mut attacked, &mut supporters, &mut supported] {
            for l in lists.iter_mut() {
                l.sort();
                l.dedup();
            }
        }
        ContextualGraph {
            names,
            active,
            attacks,
            supports,
            attackers,
            attacked,
            supporters,
            supported,
        }
    }

    /// A framework where every argument is present.
    pub fn framework(names: &[&str], attacks: &[(usize, usize)], supports: &[(usize, usize)]) -> Self {
        let pair = |&(a, b): &(usize, usize)| (ArgId(a), ArgId(b));
        ContextualGraph::new(
            names.iter().map(|s| s.to_string()).collect(),
            vec![true; names.len()],
            attacks.iter().map(pair).collect(),
            supports.iter().map(pair).collect(),
        )
    }

    /// Size of the index space, active or not.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: ArgId) -> &str {
        &self.names[id.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_active(&self, id: ArgId) -> bool {
        self.active[id.0]
    }

    pub fn active(&self) -> impl Iterator<Item = ArgId> + '_ {
        (0..self.len()).map(ArgId).filter(|&i| self.active[i.0])
    }

    pub fn attacks(&self) -> &[(ArgId, ArgId)] {
        &self.attacks
    }

    pub fn supports(&self) -> &[(ArgId, ArgId)] {
        &self.supports
    }

    pub fn attackers(&self, id: ArgId) -> &[ArgId] {
        &self.attackers[id.0]
    }

    pub fn attacked_by(&self, id: ArgId) -> &[ArgId] {
        &self.attacked[id.0]
    }

    pub fn supporters(&self, id: ArgId) -> &[ArgId] {
        &self.supporters[id.0]
    }

    pub fn supported_by(&self, id: ArgId) -> &[ArgId] {
        &self.supported[id.0]
    }

    pub fn attacks_pair(&self, a: ArgId, b: ArgId) -> bool {
        self.attacked[a.0].binary_search(&b).is_ok()
    }

    /// Restriction to the arguments of `keep` (intersected with the active
    /// ones).
    pub fn restrict(&self, keep: &[bool]) -> ContextualGraph {
        let active = self
            .active
            .iter()
            .zip(keep)
            .map(|(&a, &k)| a && k)
            .collect();
        ContextualGraph::new(
            self.names.clone(),
            active,
            self.attacks.clone(),
            self.supports.clone(),
        )
    }
}
