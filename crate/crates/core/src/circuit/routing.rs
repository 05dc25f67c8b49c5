use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// Undirected hardware connectivity graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCoupling", into = "RawCoupling")]
pub struct CouplingMap {
    n_physical: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RawCoupling {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<RawCoupling> for CouplingMap {
    type Error = Error;

    fn try_from(raw: RawCoupling) -> Result<Self> {
        CouplingMap::new(raw.n, raw.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl From<CouplingMap> for RawCoupling {
    fn from(map: CouplingMap) -> Self {
        RawCoupling {
            n: map.n_physical,
            edges: map.edges.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl CouplingMap {
    pub fn new(n_physical: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n_physical || b >= n_physical {
                return Err(Error::invalid(format!(
                    "edge ({a}, {b}) references a qubit outside 0..{n_physical}"
                )));
            }
            if a == b {
                return Err(Error::invalid(format!("self-loop on qubit {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(CouplingMap {
            n_physical,
            edges: set,
        })
    }

    /// The line 0 - 1 - ... - (n-1).
    pub fn path(n: usize) -> Self {
        CouplingMap {
            n_physical: n,
            edges: (1..n).map(|i| (i - 1, i)).collect(),
        }
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coupling map serializes")
    }

    /// Vertices in walk order when the map is a simple path, starting from
    /// the lower-numbered endpoint.
    pub fn path_order(&self) -> Result<Vec<usize>> {
        let n = self.n_physical;
        let not_path = || Error::UnsupportedTopology("coupling map is not a simple path".into());
        if n == 0 {
            return Err(not_path());
        }
        if n == 1 {
            return Ok(vec![0]);
        }
        if self.edges.len() != n - 1 {
            return Err(not_path());
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        if adj.iter().any(|nb| nb.len() > 2 || nb.is_empty()) {
            return Err(not_path());
        }
        let start = (0..n).find(|&v| adj[v].len() == 1).ok_or_else(not_path)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = adj[cur].iter().find(|&&v| v != prev) {
            prev = cur;
            cur = next;
            order.push(cur);
            if order.len() > n {
                return Err(not_path());
            }
        }
        if order.len() != n {
            return Err(not_path());
        }
        Ok(order)
    }
}

/// Logical-to-physical qubit assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout(Vec<usize>);

impl Layout {
    pub fn new(logical_to_physical: Vec<usize>) -> Result<Self> {
        let n = logical_to_physical.len();
        let mut seen = vec![false; n];
        for &p in &logical_to_physical {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::invalid(format!(
                    "layout {logical_to_physical:?} is not a permutation"
                )));
            }
        }
        Ok(Layout(logical_to_physical))
    }

    pub fn identity(n: usize) -> Self {
        Layout((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.0[logical]
    }

    pub fn logical(&self, physical: usize) -> usize {
        self.0
            .iter()
            .position(|&p| p == physical)
            .expect("layout is a permutation")
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Routes every two-qubit gate of `circuit` onto a path coupling map.
///
/// Non-adjacent operands are brought together by SWAP chains that move both
/// endpoints toward each other; the permutation is never undone, and the
/// returned layout says where each logical qubit ends up.
pub fn route_on_path(circuit: &Circuit, coupling: &CouplingMap) -> Result<(Circuit, Layout)> {
    let n = circuit.n_qubits();
    if coupling.n_physical() != n {
        return Err(Error::invalid(format!(
            "coupling map has {} qubits, circuit has {n}",
            coupling.n_physical()
        )));
    }
    let order = coupling.path_order()?;
    // position along the path of each logical qubit, and its inverse
    let mut pos_of: Vec<usize> = (0..n).collect();
    let mut at_pos: Vec<usize> = (0..n).collect();

    let mut out = Circuit::new(n, circuit.n_clbits());
    for (i, role) in circuit.roles().iter().enumerate() {
        out.set_role(i, *role)?;
    }

    let swap = |out: &mut Circuit,
                pos_of: &mut Vec<usize>,
                at_pos: &mut Vec<usize>,
                p: usize|
     -> Result<()> {
        out.push(Gate::Swap(order[p], order[p + 1]))?;
        let (l, r) = (at_pos[p], at_pos[p + 1]);
        at_pos.swap(p, p + 1);
        pos_of[l] = p + 1;
        pos_of[r] = p;
        Ok(())
    };

    for gate in circuit.gates() {
        if let [a, b] = gate.qubits()[..] {
            let (mut lo, mut hi) = (pos_of[a].min(pos_of[b]), pos_of[a].max(pos_of[b]));
            let gap = hi - lo - 1;
            let left_moves = gap.div_ceil(2);
            for _ in 0..left_moves {
                swap(&mut out, &mut pos_of, &mut at_pos, lo)?;
                lo += 1;
            }
            while hi - lo > 1 {
                swap(&mut out, &mut pos_of, &mut at_pos, hi - 1)?;
                hi -= 1;
            }
        }
        let mapped = gate.map_qubits(|q| order[pos_of[q]]);
        out.push(mapped)?;
    }
    let layout = Layout::new((0..n).map(|l| order[pos_of[l]]).collect())?;
    Ok((out, layout))
}

/// Routes the single ring-closing `Rzz(0, n-1, θ)` on a path of `n` qubits.
///
/// Emits `max(n - 2, 0)` SWAPs followed by the gate on the two middle
/// physical qubits.
pub fn route_ring_closure(
    n_qubits: usize,
    coupling: &CouplingMap,
    theta: f64,
) -> Result<(Circuit, Layout)> {
    if n_qubits < 2 {
        return Err(Error::invalid("ring closure needs at least 2 qubits"));
    }
    let gate = Circuit::from_gates(n_qubits, [Gate::Rzz(0, n_qubits - 1, theta)])?;
    route_on_path(&gate, coupling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{count_gates, GateName};

    #[test]
    fn swap_counts_for_ring_closure() {
        for n in 2..=12 {
            let (c, _) = route_ring_closure(n, &CouplingMap::path(n), 0.3).unwrap();
            assert_eq!(
                count_gates(&c).get(GateName::Swap),
                n.saturating_sub(2),
                "n={n}"
            );
        }
    }

    #[test]
    fn eight_qubits_meet_in_the_middle() {
        let (c, layout) = route_ring_closure(8, &CouplingMap::path(8), 0.3).unwrap();
        assert_eq!(c.gates().last(), Some(&Gate::Rzz(3, 4, 0.3)));
        assert_eq!(layout.physical(0), 3);
        assert_eq!(layout.physical(7), 4);
        let counts = count_gates(&c);
        assert_eq!(counts.swap_cnot_equivalents, 18);
    }

    #[test]
    fn non_path_maps_are_rejected() {
        let ring = CouplingMap::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(matches!(
            route_ring_closure(4, &ring, 0.1),
            Err(Error::UnsupportedTopology(_))
        ));
        let star = CouplingMap::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(matches!(
            star.path_order(),
            Err(Error::UnsupportedTopology(_))
        ));
        let split = CouplingMap::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(split.path_order().is_err());
    }

    #[test]
    fn relabelled_path_is_walked_in_order() {
        let map = CouplingMap::new(4, [(0, 2), (2, 3), (3, 1)]).unwrap();
        assert_eq!(map.path_order().unwrap(), vec![0, 2, 3, 1]);
        let (c, layout) = route_ring_closure(4, &map, 0.2).unwrap();
        assert_eq!(count_gates(&c).get(GateName::Swap), 2);
        for g in c.gates() {
            let q = g.qubits();
            assert!(map.are_adjacent(q[0], q[1]));
        }
        assert_eq!(layout.len(), 4);
    }

    #[test]
    fn coupling_json_round_trip_and_validation() {
        let map = CouplingMap::from_json(r#"{"n": 3, "edges": [[0,1],[2,1]]}"#).unwrap();
        assert_eq!(map.path_order().unwrap(), vec![0, 1, 2]);
        assert_eq!(CouplingMap::from_json(&map.to_json()).unwrap(), map);
        assert!(CouplingMap::from_json(r#"{"n": 2, "edges": [[0,2]]}"#).is_err());
        assert!(CouplingMap::from_json(r#"{"n": 2, "edges": [[1,1]]}"#).is_err());
    }

    #[test]
    fn layout_must_be_a_permutation() {
        assert!(Layout::new(vec![0, 0]).is_err());
        assert!(Layout::new(vec![0, 2]).is_err());
        let l = Layout::new(vec![2, 0, 1]).unwrap();
        assert_eq!(l.logical(0), 1);
        assert!(!l.is_identity());
    }
}
