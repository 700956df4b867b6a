use std::collections::{HashMap, VecDeque};

use super::rules::{reducts, RuleSet, StepLabel};
use super::trace::Trace;
use crate::syntax::{canonical_erased, Position, Term};

pub const DEFAULT_FUEL: usize = 100_000;

/// Terms are identified up to renaming of bound names, ignoring annotations.
pub fn graph_key(m: &Term) -> Term {
    canonical_erased(m)
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub pos: Position,
    pub label: StepLabel,
    pub target: usize,
}

/// The part of the reduction graph of a term reached by breadth-first
/// expansion. Node 0 is the start term.
#[derive(Clone, Debug)]
pub struct ReductionGraph {
    pub nodes: Vec<Term>,
    pub edges: Vec<Vec<Edge>>,
    /// BFS tree: the node and edge index each node was first reached by.
    parent: Vec<Option<(usize, usize)>>,
    index: HashMap<Term, usize>,
    /// Every reachable node was expanded.
    pub complete: bool,
    pub expansions: usize,
}

impl ReductionGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn find(&self, m: &Term) -> Option<usize> {
        self.index.get(&graph_key(m)).copied()
    }

    /// As [`ReductionGraph::find`] for a term that is already a graph key.
    pub fn find_key(&self, key: &Term) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Term> {
        self.index.keys()
    }

    /// Shortest trace from the start to node `i`.
    pub fn trace_to(&self, i: usize) -> Trace {
        let mut path = Vec::new();
        let mut cur = i;
        while let Some((p, e)) = self.parent[cur] {
            path.push((p, e));
            cur = p;
        }
        let mut trace = Trace::new(self.nodes[0].clone());
        for (p, e) in path.into_iter().rev() {
            let edge = &self.edges[p][e];
            trace.push(edge.pos.clone(), edge.label, self.nodes[edge.target].clone());
        }
        trace
    }

    /// Length of the longest path from the start, if the graph is complete
    /// and acyclic.
    pub fn longest_path(&self) -> Option<usize> {
        if !self.complete {
            return None;
        }
        // iterative DFS with colours: 0 new, 1 on stack, 2 done
        let n = self.nodes.len();
        let mut colour = vec![0u8; n];
        let mut best = vec![0usize; n];
        let mut stack = vec![(0usize, 0usize)];
        colour[0] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(edge) = self.edges[v].get(*next) {
                *next += 1;
                match colour[edge.target] {
                    0 => {
                        colour[edge.target] = 1;
                        stack.push((edge.target, 0));
                    }
                    1 => return None,
                    _ => {}
                }
            } else {
                best[v] = self.edges[v].iter().map(|e| best[e.target] + 1).max().unwrap_or(0);
                colour[v] = 2;
                stack.pop();
            }
        }
        Some(best[0])
    }
}

/// Breadth-first expansion of at most `fuel` nodes.
pub fn reduction_graph(m: &Term, rs: RuleSet, fuel: usize) -> ReductionGraph {
    let mut g = ReductionGraph {
        nodes: vec![m.clone()],
        edges: vec![Vec::new()],
        parent: vec![None],
        index: HashMap::from([(graph_key(m), 0)]),
        complete: false,
        expansions: 0,
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if g.expansions == fuel {
            return g;
        }
        g.expansions += 1;
        for (pos, label, t) in reducts(&g.nodes[v], rs) {
            let key = graph_key(&t);
            let target = match g.index.get(&key) {
                Some(&i) => i,
                None => {
                    let i = g.nodes.len();
                    g.index.insert(key, i);
                    g.nodes.push(t);
                    g.edges.push(Vec::new());
                    g.parent.push(Some((v, g.edges[v].len())));
                    queue.push_back(i);
                    i
                }
            };
            g.edges[v].push(Edge { pos, label, target });
        }
    }
    g.complete = true;
    g
}

#[derive(Clone, Debug)]
pub enum SnVerdict {
    /// Strongly normalizing, with the length of the longest reduction.
    Sn(usize),
    /// A reduction that comes back to a term seen before it.
    Loop(Trace),
    /// Fuel ran out after this many expansions.
    Unknown(usize),
}

impl SnVerdict {
    pub fn eta(&self) -> Option<usize> {
        match self {
            SnVerdict::Sn(n) => Some(*n),
            _ => None,
        }
    }
}

impl std::fmt::Display for SnVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SnVerdict::Sn(n) => write!(f, "SN eta={n}"),
            SnVerdict::Loop(t) => write!(f, "LOOP after {} steps", t.lg()),
            SnVerdict::Unknown(n) => write!(f, "UNKNOWN after {n} expansions"),
        }
    }
}

struct Frame {
    node: usize,
    reducts: Vec<(Position, StepLabel, Term)>,
    next: usize,
}

/// Depth-first search of the reduction graph with memoized longest paths.
/// Each node is expanded once; a back edge is reported as a loop.
pub fn sn_verdict(m: &Term, rs: RuleSet, fuel: usize) -> SnVerdict {
    const ON_STACK: usize = usize::MAX;
    let mut index: HashMap<Term, usize> = HashMap::new();
    // longest path from each node, or ON_STACK
    let mut eta: Vec<usize> = Vec::new();
    let mut expansions = 0;
    let mut stack: Vec<Frame> = Vec::new();

    index.insert(graph_key(m), 0);
    eta.push(ON_STACK);
    if fuel == 0 {
        return SnVerdict::Unknown(0);
    }
    expansions += 1;
    stack.push(Frame { node: 0, reducts: reducts(m, rs), next: 0 });
    let mut last = 0;

    while let Some(top) = stack.last_mut() {
        if top.next == top.reducts.len() {
            let v = top.node;
            let best = top.reducts.iter().map(|(_, _, t)| eta[index[&graph_key(t)]] + 1).max().unwrap_or(0);
            eta[v] = best;
            last = best;
            stack.pop();
            continue;
        }
        let t = &top.reducts[top.next].2;
        top.next += 1;
        let key = graph_key(t);
        match index.get(&key) {
            Some(&i) if eta[i] == ON_STACK => {
                let mut trace = Trace::new(m.clone());
                for f in &stack {
                    let (pos, label, t) = &f.reducts[f.next - 1];
                    trace.push(pos.clone(), *label, t.clone());
                }
                return SnVerdict::Loop(trace);
            }
            Some(_) => {}
            None => {
                if expansions == fuel {
                    return SnVerdict::Unknown(expansions);
                }
                expansions += 1;
                let i = eta.len();
                index.insert(key, i);
                eta.push(ON_STACK);
                let rs_t = reducts(t, rs);
                stack.push(Frame { node: i, reducts: rs_t, next: 0 });
            }
        }
    }
    SnVerdict::Sn(last)
}

/// Length of the longest reduction, if it was found within `fuel`.
pub fn eta(m: &Term, rs: RuleSet, fuel: usize) -> Option<usize> {
    sn_verdict(m, rs, fuel).eta()
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(Trace),
    /// Everything reachable was searched.
    Exhausted,
    OutOfFuel,
}

impl SearchOutcome {
    pub fn found(self) -> Option<Trace> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Breadth-first search over pairs (term, β/μ steps taken so far). The step
/// count saturates at `bm_cap`, which keeps the state space that of the
/// graph times `bm_cap + 1`. `accept` sees each state once, including the
/// start with count 0.
pub fn search(m: &Term, rs: RuleSet, fuel: usize, bm_cap: usize, mut accept: impl FnMut(&Term, usize) -> bool) -> SearchOutcome {
    struct Node {
        term: Term,
        parent: Option<(usize, Position, StepLabel)>,
    }
    let mut nodes = vec![Node { term: m.clone(), parent: None }];
    let mut seen: HashMap<(Term, usize), usize> = HashMap::from([((graph_key(m), 0), 0)]);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    let mut expansions = 0;

    let build = |nodes: &[Node], mut i: usize| {
        let mut path = Vec::new();
        while let Some((p, pos, label)) = &nodes[i].parent {
            path.push((pos.clone(), *label, nodes[i].term.clone()));
            i = *p;
        }
        let mut trace = Trace::new(nodes[0].term.clone());
        for (pos, label, t) in path.into_iter().rev() {
            trace.push(pos, label, t);
        }
        trace
    };

    if accept(m, 0) {
        return SearchOutcome::Found(Trace::new(m.clone()));
    }
    while let Some((v, bm)) = queue.pop_front() {
        if expansions == fuel {
            return SearchOutcome::OutOfFuel;
        }
        expansions += 1;
        for (pos, label, t) in reducts(&nodes[v].term, rs) {
            let bm2 = (bm + usize::from(label.rule.is_beta_mu())).min(bm_cap);
            let key = (graph_key(&t), bm2);
            if seen.contains_key(&key) {
                continue;
            }
            let i = nodes.len();
            seen.insert(key, i);
            let hit = accept(&t, bm2);
            nodes.push(Node { term: t, parent: Some((v, pos, label)) });
            if hit {
                return SearchOutcome::Found(build(&nodes, i));
            }
            queue.push_back((i, bm2));
        }
    }
    SearchOutcome::Exhausted
}

/// A shortest reduction from `m` to a term alpha-equal to `target`
/// (annotations ignored).
pub fn reach(m: &Term, target: &Term, rs: RuleSet, fuel: usize) -> SearchOutcome {
    let key = graph_key(target);
    search(m, rs, fuel, 0, |t, _| graph_key(t) == key)
}

/// Every term reachable from `m`, each with a shortest trace. Meant for
/// terminating fragments such as ρ and ρθ, where sizes decrease; `None` if
/// more than `fuel` terms turn up.
pub fn closure(m: &Term, rs: RuleSet, fuel: usize) -> Option<ReductionGraph> {
    let g = reduction_graph(m, rs, fuel);
    g.complete.then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term_any;

    fn t(s: &str) -> Term {
        parse_term_any(s).unwrap()
    }

    #[test]
    fn small_graph() {
        let g = reduction_graph(&t("(\\x. (x x) \\y. y)"), RuleSet::BETA, DEFAULT_FUEL);
        assert!(g.complete);
        assert_eq!(g.len(), 3);
        assert_eq!(g.longest_path(), Some(2));
        assert_eq!(eta(&t("(\\x. (x x) \\y. y)"), RuleSet::BETA, DEFAULT_FUEL), Some(2));
    }

    #[test]
    fn eta_takes_the_longest_route() {
        // the outer redex erases the inner one
        let m = t("(\\x. z (\\y. y w))");
        assert_eq!(eta(&m, RuleSet::BETA, 100), Some(2));
        let g = reduction_graph(&m, RuleSet::BETA, 100);
        assert_eq!(g.longest_path(), Some(2));
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn omega_loops() {
        let m = t("(\\x. (x x) \\x. (x x))");
        match sn_verdict(&m, RuleSet::BETA, 20) {
            SnVerdict::Loop(tr) => {
                assert_eq!(tr.lg(), 1);
                assert!(crate::syntax::alpha_eq(tr.end(), &m));
                tr.replay().unwrap();
            }
            v => panic!("{v}"),
        }
        assert!(reduction_graph(&m, RuleSet::BETA, 10).longest_path().is_none());
    }

    #[test]
    fn growing_term_runs_out_of_fuel() {
        let m = t("(\\x. (x x x) \\x. (x x x))");
        assert!(matches!(sn_verdict(&m, RuleSet::BETA, 50), SnVerdict::Unknown(50)));
    }

    #[test]
    fn reach_finds_shortest() {
        let m = t("(\\z. z mu a. [a] \\x. x)");
        let tr = reach(&m, &t("\\x. x"), RuleSet::BETAMU_RT, 100).found().unwrap();
        assert_eq!(tr.lg(), 2);
        tr.replay().unwrap();
        assert!(matches!(reach(&m, &t("y"), RuleSet::BETAMU_RT, 100), SearchOutcome::Exhausted));
    }

    #[test]
    fn search_counts_beta_mu_steps() {
        let m = t("(\\z. z mu a. [a] \\x. x)");
        // the θ step alone reaches the target without β
        let tr = search(&m, RuleSet::BETAMU_RT, 100, 1, |t, bm| bm == 1 && graph_key(t) == graph_key(&t_id())).found().unwrap();
        assert_eq!(tr.lg_bm(), 1);
    }

    fn t_id() -> Term {
        t("\\x. x")
    }

    #[test]
    fn rho_closure_is_finite() {
        let g = closure(&t("[b] mu a. [a] mu c. [a] [c] x"), RuleSet::RHO_THETA, 1000).unwrap();
        assert!(g.len() >= 2);
        for i in 0..g.len() {
            g.trace_to(i).replay().unwrap();
        }
    }
}
